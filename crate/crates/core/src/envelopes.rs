//! Area envelopes for the rounded body, area-bound reports, the John
//! ellipse and the dilatation factors `K_O`, `K_I`.
//!
//! After normalizing `L(T*A) = 1`, the area of the rounded body satisfies
//! `m(l) <= |T*A| <= M(l)` with `l = l(T*A)` in `[1/sqrt 2, 1]`, and the
//! envelopes themselves lie between `2` and `4 l^2`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::banach_mazur::{inclusion_slack, RoundingResult};
use crate::error::{Error, Result};
use crate::geometry::{edge_normal, BodyKind, Ellipse, LinearMap2, SymmetricConvexBody, Vec2};

/// Slack on the envelope domain to absorb rounding in `l = inner / outer`.
const DOMAIN_SLACK: f64 = 1e-12;

/// Default absolute tolerance for polygons.
pub const AREA_TOL_POLYGON: f64 = 1e-6;
/// Default absolute tolerance for radial bodies (quadrature floor).
pub const AREA_TOL_RADIAL: f64 = 1e-4;

fn check_domain(ell: f64) -> Result<f64> {
    if !(FRAC_1_SQRT_2 - DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&ell) {
        return Err(Error::Domain {
            value: ell,
            lo: FRAC_1_SQRT_2,
            hi: 1.0,
        });
    }
    Ok(ell.clamp(FRAC_1_SQRT_2, 1.0))
}

/// `M(l) = pi - 4 arccos l + 4 l sqrt(1 - l^2)`.
pub fn area_upper_envelope(ell: f64) -> Result<f64> {
    let l = check_domain(ell)?;
    Ok(PI - 4.0 * l.acos() + 4.0 * l * (1.0 - l * l).sqrt())
}

/// `m(l) = (pi - 4 arccos l) l^2 + 4 l sqrt(1 - l^2)`.
pub fn area_lower_envelope(ell: f64) -> Result<f64> {
    let l = check_domain(ell)?;
    Ok((PI - 4.0 * l.acos()) * l * l + 4.0 * l * (1.0 - l * l).sqrt())
}

/// `(M'(l), m'(l)) = (8 sqrt(1 - l^2), 2 pi l + 4 sqrt(1 - l^2) - 8 l arccos l)`.
pub fn envelope_derivatives(ell: f64) -> Result<(f64, f64)> {
    let l = check_domain(ell)?;
    let root = (1.0 - l * l).sqrt();
    Ok((8.0 * root, 2.0 * PI * l + 4.0 * root - 8.0 * l * l.acos()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AreaBoundReport {
    /// `l(T*A)` with `L(T*A)` normalized to 1.
    pub ell: f64,
    /// `|T*A|` under the same normalization.
    pub area: f64,
    /// `area >= 2 - tol`.
    pub lower_ok: bool,
    /// `area <= 4 l^2 + tol`.
    pub upper_ok: bool,
    /// `m(l) - tol <= area <= M(l) + tol`.
    pub envelope_ok: bool,
    pub k_o: f64,
    pub k_i: f64,
}

/// Default tolerance by representation.
pub fn default_area_tol(body: &SymmetricConvexBody) -> f64 {
    match body.kind() {
        BodyKind::Polygon => AREA_TOL_POLYGON,
        BodyKind::Radial => AREA_TOL_RADIAL,
    }
}

/// Check `2 L^2 <= |T*A| <= 4 l^2` and the envelope sandwich for a rounding
/// result.
pub fn verify_area_bounds(body: &SymmetricConvexBody, result: &RoundingResult, tol: f64) -> Result<AreaBoundReport> {
    let (inner, outer) = body.image_radii(&result.t_star);
    let area = body.area() * result.t_star.det().abs() / (outer * outer);
    let ell = inner / outer;
    let lower_ok = area >= 2.0 - tol;
    let upper_ok = area <= 4.0 * ell * ell + tol;
    let envelope_ok = if ell < FRAC_1_SQRT_2 - tol {
        false
    } else {
        let l = ell.clamp(FRAC_1_SQRT_2, 1.0);
        area >= area_lower_envelope(l)? - tol && area <= area_upper_envelope(l)? + tol
    };
    Ok(AreaBoundReport {
        ell,
        area,
        lower_ok,
        upper_ok,
        envelope_ok,
        k_o: PI / area,
        k_i: area / (PI * ell * ell),
    })
}

/// `(K_O, K_I) = (pi L(TA)^2 / |TA|, |TA| / (pi l(TA)^2))`.
pub fn dilatation_factors(body: &SymmetricConvexBody, t: &LinearMap2) -> Result<(f64, f64)> {
    t.check_invertible()?;
    let (inner, outer) = body.image_radii(t);
    let area = body.area() * t.det().abs();
    Ok((PI * outer * outer / area, area / (PI * inner * inner)))
}

/// Maximal-area origin-centered ellipse inside the body.
///
/// With `E = {x : x^T Q^{-1} x <= 1}`, containment in the half-plane
/// `n . x <= 1` reads `n^T Q n <= 1`, linear in `Q`. Maximizing `log det Q`
/// under these constraints is convex in the three entries of `Q` and is
/// solved by a log-barrier Newton method. Radial bodies use the chords of
/// their refined boundary, which lie inside the body.
pub fn john_ellipse(body: &SymmetricConvexBody) -> Result<Ellipse> {
    let normals: Vec<Vec2> = match body.edge_normals() {
        Some(n) => n.to_vec(),
        None => {
            let half = body.half_boundary();
            let m = half.len();
            (0..m)
                .map(|j| {
                    let q = if j + 1 < m { half[j + 1] } else { -half[0] };
                    edge_normal(half[j], q)
                })
                .collect()
        }
    };
    let rows: Vec<[f64; 3]> = normals
        .iter()
        .map(|n| [n.x * n.x, 2.0 * n.x * n.y, n.y * n.y])
        .collect();
    let q = barrier_log_det(&rows)?;
    let (hi, lo, angle) = LinearMap2::new_unchecked(q[0], q[1], q[1], q[2]).symmetric_eigen();
    Ellipse::new(hi.sqrt(), lo.max(0.0).sqrt(), angle)
}

/// Maximize `log det [[q0, q1], [q1, q2]]` subject to `rows[i] . q <= 1`.
fn barrier_log_det(rows: &[[f64; 3]]) -> Result<[f64; 3]> {
    let m = rows.len() as f64;
    let max_row = rows.iter().map(|r| r[0] + r[2]).fold(0.0, f64::max);
    let mut q = [0.5 / max_row, 0.0, 0.5 / max_row];
    let mut t = 1.0;
    let mut iterations = 0;

    let feasible_value = |q: &[f64; 3], t: f64| -> Option<f64> {
        let det = q[0] * q[2] - q[1] * q[1];
        if det <= 0.0 || q[0] <= 0.0 {
            return None;
        }
        let mut v = -t * det.ln();
        for r in rows {
            let s = 1.0 - (r[0] * q[0] + r[1] * q[1] + r[2] * q[2]);
            if s <= 0.0 {
                return None;
            }
            v -= s.ln();
        }
        Some(v)
    };

    loop {
        for _ in 0..100 {
            iterations += 1;
            let det = q[0] * q[2] - q[1] * q[1];
            let dd = [q[2], -2.0 * q[1], q[0]];
            let mut g = [0.0; 3];
            let mut h = [[0.0; 3]; 3];
            for i in 0..3 {
                g[i] = -t * dd[i] / det;
                for j in 0..3 {
                    h[i][j] = t * dd[i] * dd[j] / (det * det);
                }
            }
            h[0][2] -= t / det;
            h[2][0] -= t / det;
            h[1][1] += 2.0 * t / det;
            for r in rows {
                let s = 1.0 - (r[0] * q[0] + r[1] * q[1] + r[2] * q[2]);
                for i in 0..3 {
                    g[i] += r[i] / s;
                    for j in 0..3 {
                        h[i][j] += r[i] * r[j] / (s * s);
                    }
                }
            }
            let Some(step) = solve3(&h, &g) else {
                break;
            };
            let decrement = step[0] * g[0] + step[1] * g[1] + step[2] * g[2];
            if decrement < 1e-14 {
                break;
            }
            let f0 = feasible_value(&q, t).expect("iterate stays feasible");
            let mut a = 1.0;
            loop {
                let cand = [q[0] - a * step[0], q[1] - a * step[1], q[2] - a * step[2]];
                if let Some(f) = feasible_value(&cand, t) {
                    if f <= f0 - 0.25 * a * decrement {
                        q = cand;
                        break;
                    }
                }
                a *= 0.5;
                if a < 1e-16 {
                    break;
                }
            }
            if a < 1e-16 {
                break;
            }
        }
        if m / t < 1e-13 {
            return Ok(q);
        }
        t *= 20.0;
        if iterations > 10_000 {
            return Err(Error::NonConvergence {
                iterations,
                best_ratio: m / t,
            });
        }
    }
}

fn solve3(h: &[[f64; 3]; 3], g: &[f64; 3]) -> Option<[f64; 3]> {
    let det3 = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det3(h);
    if !d.is_normal() {
        return None;
    }
    let mut x = [0.0; 3];
    for (k, xk) in x.iter_mut().enumerate() {
        let mut mk = *h;
        for i in 0..3 {
            mk[i][k] = g[i];
        }
        *xk = det3(&mk) / d;
    }
    Some(x)
}

/// Gauge slack of `E ⊆ A ⊆ sqrt(2) E` for the John ellipse.
pub fn john_inclusion_slack(body: &SymmetricConvexBody, e: &Ellipse) -> (f64, f64) {
    inclusion_slack(body, e, std::f64::consts::SQRT_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::banach_mazur::{minimize_ratio, RoundingOptions};

    #[test]
    fn envelope_values() {
        assert_eq!(area_upper_envelope(FRAC_1_SQRT_2).unwrap(), 2.0);
        assert!((area_lower_envelope(FRAC_1_SQRT_2).unwrap() - 2.0).abs() <= 4.0 * f64::EPSILON);
        assert_eq!(area_upper_envelope(1.0).unwrap(), PI);
        assert_eq!(area_lower_envelope(1.0).unwrap(), PI);
        assert!(area_upper_envelope(0.5).is_err());
        assert!(area_lower_envelope(1.1).is_err());
        assert!(envelope_derivatives(f64::NAN).is_err());
    }

    #[test]
    fn derivative_values() {
        let (mp, lp) = envelope_derivatives(1.0).unwrap();
        assert_eq!(mp, 0.0);
        assert!((lp - 2.0 * PI).abs() < 1e-15);
        let (mp, _) = envelope_derivatives(FRAC_1_SQRT_2).unwrap();
        assert!((mp - 8.0 * FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-6;
        for i in 0..=100 {
            let l = 0.71 + (0.999 - 0.71) * i as f64 / 100.0;
            let (mp, lp) = envelope_derivatives(l).unwrap();
            let fd_m = (area_upper_envelope(l + h).unwrap() - area_upper_envelope(l - h).unwrap()) / (2.0 * h);
            let fd_l = (area_lower_envelope(l + h).unwrap() - area_lower_envelope(l - h).unwrap()) / (2.0 * h);
            assert!((mp - fd_m).abs() < 1e-7, "M' at {l}");
            assert!((lp - fd_l).abs() < 1e-7, "m' at {l}");
        }
    }

    #[test]
    fn square_and_disk_reports() {
        let sq = SymmetricConvexBody::square();
        let r = minimize_ratio(&sq, &RoundingOptions::default()).unwrap();
        let rep = verify_area_bounds(&sq, &r, AREA_TOL_POLYGON).unwrap();
        assert!((rep.ell - FRAC_1_SQRT_2).abs() < 1e-9);
        assert!((rep.area - 2.0).abs() < 1e-9);
        assert!(rep.lower_ok && rep.upper_ok && rep.envelope_ok);
        assert!((rep.k_o - PI / 2.0).abs() < 1e-9);
        assert!((rep.k_i - 4.0 / PI).abs() < 1e-9);

        let d = SymmetricConvexBody::disk();
        let r = minimize_ratio(&d, &RoundingOptions::default()).unwrap();
        let rep = verify_area_bounds(&d, &r, default_area_tol(&d)).unwrap();
        assert!((rep.ell - 1.0).abs() < 1e-9);
        assert!((rep.area - PI).abs() < 1e-8);
        assert!(rep.envelope_ok);
        assert!((rep.k_o - 1.0).abs() < 1e-8 && (rep.k_i - 1.0).abs() < 1e-8);
    }

    #[test]
    fn dilatation_examples() {
        let sq = SymmetricConvexBody::square();
        let (ko, ki) = dilatation_factors(&sq, &LinearMap2::IDENTITY).unwrap();
        assert!((ko - PI / 2.0).abs() < 1e-15 && (ki - 4.0 / PI).abs() < 1e-15);
        let (ko, ki) = dilatation_factors(&SymmetricConvexBody::disk(), &LinearMap2::IDENTITY).unwrap();
        assert!((ko - 1.0).abs() < 1e-8 && (ki - 1.0).abs() < 1e-8);
        // Rectangle [-2,2]x[-1,1]: L^2 = 5, area 8, l = 1.
        let (ko, ki) = dilatation_factors(&sq, &LinearMap2::diag(2.0, 1.0)).unwrap();
        assert!((ko - PI * 5.0 / 8.0).abs() < 1e-14);
        assert!((ki - 8.0 / PI).abs() < 1e-14);
        assert!(ko > PI / 2.0 && ki > 4.0 / PI);
    }

    #[test]
    fn john_examples() {
        let e = john_ellipse(&SymmetricConvexBody::square()).unwrap();
        assert!((e.semi_major - 1.0).abs() < 1e-7 && (e.semi_minor - 1.0).abs() < 1e-7);

        let e = john_ellipse(&SymmetricConvexBody::disk()).unwrap();
        assert!((e.semi_major - 1.0).abs() < 1e-7 && (e.semi_minor - 1.0).abs() < 1e-7);

        let rect = SymmetricConvexBody::rectangle(2.0, 1.0).unwrap();
        let e = john_ellipse(&rect).unwrap();
        assert!((e.semi_major - 2.0).abs() < 1e-7 && (e.semi_minor - 1.0).abs() < 1e-7);
        assert!(e.angle.min(PI - e.angle) < 1e-6);
        let (inside, outside) = john_inclusion_slack(&rect, &e);
        assert!(inside <= 1e-6 && outside <= 1e-6);
    }
}
