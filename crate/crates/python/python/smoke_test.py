"""Smoke test for the bmround extension module.

With maturin: `maturin build --release` in crates/python, install the wheel,
then run this script. Without it, from the workspace root:

    cargo build --release -p bmround-py --features extension-module
    cp target/release/libbmround_py.so crates/python/python/bmround.so
    python3 crates/python/python/smoke_test.py
"""

import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import bmround  # noqa: E402


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    sq = bmround.Body.square()
    r = bmround.minimize_ratio(sq)
    assert r.certified, r
    assert close(r.rho, math.sqrt(2.0), 1e-6), r.rho

    disk = bmround.Body.disk()
    rd = bmround.minimize_ratio(disk)
    assert rd.full_circle and close(rd.rho, 1.0, 1e-9)

    hexagon = bmround.Body.regular(6)
    rh = bmround.minimize_ratio(hexagon)
    assert close(rh.rho, 2.0 / math.sqrt(3.0), 1e-6), rh.rho

    t = bmround.Map(2.0, 0.3, 0.0, 0.5)
    img = sq.apply_map(t)
    assert close(img.area(), 4.0 * abs(t.det()), 1e-9)
    assert close(bmround.minimize_ratio(img).rho, r.rho, 1e-6)

    rep = bmround.verify_area_bounds(sq, r)
    assert rep["lower_ok"] and rep["upper_ok"] and rep["envelope_ok"], rep
    assert close(bmround.area_upper_envelope(1.0), math.pi, 1e-12)

    john = bmround.john_ellipse(sq)
    assert close(john.semi_major, 1.0, 1e-6) and close(john.semi_minor, 1.0, 1e-6)

    mu = bmround.ellipse_to_beltrami(bmround.Ellipse(2.0, 1.0, 0.0))
    assert isinstance(mu, complex) and close(abs(mu), 1.0 / 3.0, 1e-12)

    res = bmround.modulus_ratio(
        '{"constant":{"type":"lp","p":"inf"}}',
        '{"source":"left","sink":"right","connectivity":"axis"}',
        16,
    )
    assert close(res["ratio"], 4.0 / math.pi, 0.06), res

    try:
        bmround.Body.polygon([(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0)])
    except ValueError:
        pass
    else:
        raise AssertionError("odd polygon accepted")

    rb = bmround.Body.random(7, 5)
    assert rb.kind == "polygon" and bmround.minimize_ratio(rb).certified

    print("smoke test ok: rho(square) =", r.rho)


if __name__ == "__main__":
    main()
