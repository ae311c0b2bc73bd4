//! Banach–Mazur rounding: minimize `L(TA) / l(TA)` over invertible `T`.
//!
//! The ratio is invariant under `T -> lambda Q T` (`lambda > 0`, `Q`
//! orthogonal), so the search runs over SPD determinant-one matrices. A
//! coarse grid over `(log lambda, phi)` picks starting points, and
//! Nelder–Mead in the exponential chart (see [`LinearMap2::from_chart`])
//! polishes them. The result is certified by the alternating contact pattern
//! outer / inner / outer / inner on `[0, pi)`; when the pattern is missing the
//! explicit stretch of [`improvement_stretch`] gives a descent direction.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{angle_mod_pi, Ellipse, LinearMap2, SymmetricConvexBody};
use crate::optimize::{minimize_with_restarts, NelderMeadOptions};

/// Below `1 + ELLIPSE_RHO_TOL` the body is treated as an ellipse.
pub const ELLIPSE_RHO_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug)]
pub struct RoundingOptions {
    /// Grid points per axis of the `(log lambda, phi)` grid.
    pub grid_n: usize,
    /// Number of local refinements (best grid cell plus further starts).
    pub restarts: usize,
    /// Simplex diameter at which local refinement stops.
    pub tol: f64,
    /// Seed for grid jitter and extra starting points; 0 keeps the grid
    /// unjittered.
    pub seed: u64,
    /// Relative tolerance for contact detection.
    pub contact_tol: f64,
    /// Evaluation budget for each Nelder–Mead run.
    pub max_iter: usize,
}

impl Default for RoundingOptions {
    fn default() -> Self {
        Self {
            grid_n: 200,
            restarts: 3,
            tol: 1e-9,
            seed: 0,
            contact_tol: 1e-5,
            max_iter: 4000,
        }
    }
}

/// Directions in `[0, pi)` where the image touches its outer or inner circle.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Contacts {
    pub outer: Vec<f64>,
    pub inner: Vec<f64>,
    /// Set when inner and outer radius agree within tolerance (ellipses),
    /// in which case every direction is a contact.
    pub full_circle: bool,
}

#[derive(Clone, Debug)]
pub struct RoundingResult {
    /// Minimizer, SPD with determinant one.
    pub t_star: LinearMap2,
    pub rho: f64,
    /// `l(T* A)`.
    pub inner: f64,
    /// `L(T* A)`.
    pub outer: f64,
    pub outer_contacts: Vec<f64>,
    pub inner_contacts: Vec<f64>,
    pub full_circle: bool,
    pub certified: bool,
    pub evaluations: usize,
}

impl RoundingResult {
    pub fn contacts(&self) -> Contacts {
        Contacts {
            outer: self.outer_contacts.clone(),
            inner: self.inner_contacts.clone(),
            full_circle: self.full_circle,
        }
    }
}

/// Descent data for the stretch `T_lambda` along `direction`.
#[derive(Clone, Copy, Debug)]
pub struct StretchProbe {
    /// Stretch axis: bisector of the extreme inner contacts.
    pub direction: f64,
    /// `d/d lambda` of the squared-ratio bound at `lambda = 1`.
    pub derivative: f64,
    /// Half the angular width of the inner-contact arc.
    pub theta: f64,
    /// `arccos(l / L)`.
    pub theta_ell: f64,
}

/// `L(TA) / l(TA)`.
pub fn ratio(body: &SymmetricConvexBody, t: &LinearMap2) -> Result<f64> {
    t.check_invertible()?;
    let (inner, outer) = body.image_radii(t);
    Ok(outer / inner)
}

fn chart_ratio(body: &SymmetricConvexBody, x: [f64; 2]) -> f64 {
    let (inner, outer) = body.image_radii(&LinearMap2::from_chart(x[0], x[1]));
    outer / inner
}

/// Chart coordinates of `stretch(exp(s), phi)`.
fn chart_of(s: f64, phi: f64) -> [f64; 2] {
    [0.5 * s * (2.0 * phi).cos(), 0.5 * s * (2.0 * phi).sin()]
}

/// Search the SPD determinant-one coset representatives for the minimum of
/// `r(A, T)`.
pub fn minimize_ratio(body: &SymmetricConvexBody, opts: &RoundingOptions) -> Result<RoundingResult> {
    if opts.grid_n < 2 {
        return Err(Error::InvalidInput("grid_n must be at least 2".into()));
    }
    let lam_max = (2.0 * body.outer_radius() / body.inner_radius()).max(1.0 + 1e-6);
    let log_max = lam_max.ln();
    let n = opts.grid_n;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (jit_s, jit_phi) = if opts.seed == 0 {
        (0.0, 0.0)
    } else {
        (rng.gen::<f64>(), rng.gen::<f64>())
    };

    let s_at =
        |i: usize| log_max * ((i as f64 + if i > 0 { jit_s - 0.5 } else { 0.0 }) / (n - 1) as f64).clamp(0.0, 1.0);
    let phi_at = |j: usize| PI * (j as f64 + jit_phi) / n as f64;

    // Row 0 is the identity for every phi.
    let id_value = {
        let (i, o) = body.image_radii_coarse(&LinearMap2::IDENTITY);
        o / i
    };
    let mut grid = vec![0.0; n * n];
    for i in 0..n {
        let s = s_at(i);
        for j in 0..n {
            grid[i * n + j] = if i == 0 {
                id_value
            } else {
                let (inner, outer) = body.image_radii_coarse(&LinearMap2::stretch(s.exp(), phi_at(j)));
                outer / inner
            };
        }
    }
    let mut evaluations = n * (n - 1) + 1;

    // Starting points: grid local minima by value (ties by index), then random.
    let mut minima: Vec<usize> = (0..n * n)
        .filter(|&idx| {
            let (i, j) = (idx / n, idx % n);
            let v = grid[idx];
            for di in [-1isize, 0, 1] {
                for dj in [-1isize, 0, 1] {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let ii = i as isize + di;
                    if ii < 0 || ii >= n as isize {
                        continue;
                    }
                    let jj = (j as isize + dj).rem_euclid(n as isize) as usize;
                    let w = grid[ii as usize * n + jj];
                    if w < v || (w == v && (ii as usize * n + jj) < idx) {
                        return false;
                    }
                }
            }
            true
        })
        .collect();
    minima.sort_by(|&a, &b| grid[a].total_cmp(&grid[b]).then(a.cmp(&b)));

    let restarts = opts.restarts.max(1);
    let mut starts: Vec<[f64; 2]> = minima
        .iter()
        .take(restarts)
        .map(|&idx| chart_of(s_at(idx / n), phi_at(idx % n)))
        .collect();
    while starts.len() < restarts {
        let s = rng.gen::<f64>() * log_max;
        let phi = rng.gen::<f64>() * PI;
        starts.push(chart_of(s, phi));
    }

    let nm = NelderMeadOptions {
        x_tol: opts.tol,
        max_iter: opts.max_iter,
        ..Default::default()
    };
    let step = (log_max / (n - 1) as f64).max(1e-4);
    let mut objective = |x: [f64; 2]| {
        evaluations += 1;
        chart_ratio(body, x)
    };
    let mut best = None::<crate::optimize::Minimum>;
    for x0 in starts {
        let m = minimize_with_restarts(&mut objective, x0, step, &nm);
        if best.is_none_or(|b| m.value < b.value) {
            best = Some(m);
        }
    }
    let mut best = best.expect("at least one start");

    let mut t_star = LinearMap2::from_chart(best.x[0], best.x[1]);
    let mut contacts = contact_points(body, &t_star, opts.contact_tol)?;
    let mut certified = contacts.full_circle || alternation_certificate(&contacts);

    // Fall back on the explicit descent stretch when the pattern is missing.
    let mut rounds = 0;
    while !certified && rounds < 5 {
        rounds += 1;
        let Some(probe) = improvement_stretch(body, &t_star, opts.contact_tol)? else {
            break;
        };
        let current = ratio(body, &t_star)?;
        let mut moved = false;
        let mut lambda_step = 1e-2;
        while lambda_step > 1e-12 {
            let cand = stretch_map(probe.direction, 1.0 + lambda_step)
                .compose(&t_star)
                .spd_normalized()?;
            if ratio(body, &cand)? < current {
                let (p, q) = cand.to_chart();
                let m = minimize_with_restarts(&mut objective, [p, q], lambda_step.max(1e-6), &nm);
                if m.value < best.value {
                    best = m;
                }
                moved = true;
                break;
            }
            lambda_step *= 0.5;
        }
        if !moved {
            break;
        }
        t_star = LinearMap2::from_chart(best.x[0], best.x[1]);
        contacts = contact_points(body, &t_star, opts.contact_tol)?;
        certified = contacts.full_circle || alternation_certificate(&contacts);
    }

    if !best.converged && !certified {
        return Err(Error::NonConvergence {
            iterations: best.iterations,
            best_ratio: best.value,
        });
    }

    let (inner, outer) = body.image_radii(&t_star);
    let rho = outer / inner;
    let full_circle = rho < 1.0 + ELLIPSE_RHO_TOL;
    if full_circle {
        contacts = Contacts {
            full_circle: true,
            ..Default::default()
        };
        certified = true;
    }
    Ok(RoundingResult {
        t_star,
        rho,
        inner,
        outer,
        outer_contacts: contacts.outer,
        inner_contacts: contacts.inner,
        full_circle: contacts.full_circle,
        certified,
        evaluations,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Mark {
    Outer,
    Inner,
    None,
}

/// Outer and inner contact directions of `T A`, with runs of adjacent
/// contacts merged to their angular midpoint.
pub fn contact_points(body: &SymmetricConvexBody, t: &LinearMap2, tol: f64) -> Result<Contacts> {
    t.check_invertible()?;
    let (inner, outer) = body.image_radii(t);
    if inner * (1.0 + tol) >= outer * (1.0 - tol) {
        return Ok(Contacts {
            full_circle: true,
            ..Default::default()
        });
    }

    let mut cands: Vec<(f64, f64)> = Vec::new();
    let half = body.half_boundary();
    match body.edge_normals() {
        Some(normals) => {
            let k = half.len();
            let verts = body.vertices().expect("polygon");
            let inv_t = t.inverse()?.transpose();
            for i in 0..k {
                let w = t.apply(verts[i]);
                cands.push((angle_mod_pi(w.angle()), w.norm()));
                let next = t.apply(verts[(i + 1) % verts.len()]);
                let m = inv_t.apply(normals[i]);
                let foot = m * (1.0 / m.norm_sq());
                let e = next - w;
                let s = (foot - w).dot(e) / e.norm_sq();
                if (0.0..=1.0).contains(&s) {
                    cands.push((angle_mod_pi(foot.angle()), foot.norm()));
                }
            }
        }
        None => {
            for z in &half {
                let w = t.apply(*z);
                cands.push((angle_mod_pi(w.angle()), w.norm()));
            }
        }
    }
    cands.sort_by(|a, b| a.0.total_cmp(&b.0));
    let marks: Vec<Mark> = cands
        .iter()
        .map(|&(_, r)| {
            if r >= outer * (1.0 - tol) {
                Mark::Outer
            } else if r <= inner * (1.0 + tol) {
                Mark::Inner
            } else {
                Mark::None
            }
        })
        .collect();

    let m = cands.len();
    let start = (0..m).find(|&i| marks[i] != marks[(i + m - 1) % m]).unwrap_or(0);
    let mut contacts = Contacts::default();
    let mut i = 0;
    while i < m {
        let idx = (start + i) % m;
        let mark = marks[idx];
        let mut j = i + 1;
        while j < m && marks[(start + j) % m] == mark {
            j += 1;
        }
        if mark != Mark::None {
            let first = cands[idx].0;
            let mut last = cands[(start + j - 1) % m].0;
            if last < first {
                last += PI;
            }
            let mid = angle_mod_pi(0.5 * (first + last));
            match mark {
                Mark::Outer => contacts.outer.push(mid),
                Mark::Inner => contacts.inner.push(mid),
                Mark::None => {}
            }
        }
        i = j;
    }
    contacts.outer.sort_by(f64::total_cmp);
    contacts.inner.sort_by(f64::total_cmp);
    Ok(contacts)
}

fn labelled(contacts: &Contacts) -> Vec<(f64, bool)> {
    let mut all: Vec<(f64, bool)> = contacts
        .outer
        .iter()
        .map(|&t| (angle_mod_pi(t), true))
        .chain(contacts.inner.iter().map(|&t| (angle_mod_pi(t), false)))
        .collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    all
}

/// True iff four directions alternate outer / inner / outer / inner around
/// `[0, pi)` (taken cyclically). Ellipses (full circle) pass.
pub fn alternation_certificate(contacts: &Contacts) -> bool {
    if contacts.full_circle {
        return true;
    }
    let all = labelled(contacts);
    let m = all.len();
    let changes = (0..m).filter(|&i| all[i].1 != all[(i + 1) % m].1).count();
    changes >= 4
}

/// The map `(x, y) -> (lambda x, y)` in the orthonormal frame whose first
/// axis points along `direction`.
pub fn stretch_map(direction: f64, lambda: f64) -> LinearMap2 {
    let r = LinearMap2::rotation(direction);
    r.compose(&LinearMap2::diag(lambda, 1.0)).compose(&r.transpose())
}

/// Squared-radius ratio after the stretch: the unit point at angle
/// `theta + arccos(ell)` from the axis over the inner point at angle `theta`.
pub fn stretch_bound(ell: f64, theta: f64, lambda: f64) -> f64 {
    let a = theta + ell.acos();
    let num = lambda * lambda * a.cos().powi(2) + a.sin().powi(2);
    let den = ell * ell * (lambda * lambda * theta.cos().powi(2) + theta.sin().powi(2));
    num / den
}

/// `d/d lambda` of [`stretch_bound`]:
/// `-2 lambda sqrt(1 - ell^2) sin(2 theta + arccos ell) / (ell^2 (lambda^2 cos^2 theta + sin^2 theta)^2)`.
pub fn stretch_bound_derivative(ell: f64, theta: f64, lambda: f64) -> f64 {
    let theta_ell = ell.acos();
    let den = lambda * lambda * theta.cos().powi(2) + theta.sin().powi(2);
    -2.0 * lambda * (1.0 - ell * ell).max(0.0).sqrt() * (2.0 * theta + theta_ell).sin() / (ell * ell * den * den)
}

/// When the contacts of `T A` do not alternate, the inner contacts sit in
/// one arc free of outer contacts; stretching along its bisector reduces the
/// ratio. Returns `None` when the alternation holds.
pub fn improvement_stretch(body: &SymmetricConvexBody, t: &LinearMap2, tol: f64) -> Result<Option<StretchProbe>> {
    let contacts = contact_points(body, t, tol)?;
    if alternation_certificate(&contacts) {
        return Ok(None);
    }
    let all = labelled(&contacts);
    let m = all.len();
    // First inner entry that follows an outer one, cyclically.
    let Some(first) = (0..m).find(|&i| !all[i].1 && all[(i + m - 1) % m].1) else {
        return Ok(None);
    };
    let mut last = first;
    while !all[(last + 1) % m].1 && (last + 1) % m != first {
        last = (last + 1) % m;
    }
    let theta1 = all[first].0;
    let mut theta3 = all[last].0;
    if theta3 < theta1 {
        theta3 += PI;
    }
    let (inner, outer) = body.image_radii(t);
    let ell = (inner / outer).min(1.0);
    let theta = 0.5 * (theta3 - theta1);
    Ok(Some(StretchProbe {
        direction: angle_mod_pi(0.5 * (theta1 + theta3)),
        derivative: stretch_bound_derivative(ell, theta, 1.0),
        theta,
        theta_ell: ell.acos(),
    }))
}

/// The ellipse `T*^{-1}(B(0, l(T* A)))`.
pub fn canonical_ellipse(result: &RoundingResult) -> Result<Ellipse> {
    Ellipse::from_linear_image(&result.t_star.inverse()?, result.inner)
}

/// `s_max / s_min - 1` for `T1 T2^{-1}`: zero iff `T1 = lambda Q T2`.
pub fn canonical_deviation(t1: &LinearMap2, t2: &LinearMap2) -> Result<f64> {
    t1.check_invertible()?;
    let m = t1.compose(&t2.inverse()?);
    let (hi, lo) = m.singular_values();
    Ok(hi / lo - 1.0)
}

/// Whether `T1^{-1}(B)` and `T2^{-1}(B)` agree up to scale within `tol`.
pub fn same_canonical_ellipse(t1: &LinearMap2, t2: &LinearMap2, tol: f64) -> Result<bool> {
    Ok(canonical_deviation(t1, t2)? <= tol)
}

/// Inclusion slack of `E ⊆ A ⊆ factor·E`, measured in gauges on boundary
/// samples: `(max gauge_A over ∂E - 1, max gauge_E over ∂A / factor - 1)`.
pub fn inclusion_slack(body: &SymmetricConvexBody, e: &Ellipse, factor: f64) -> (f64, f64) {
    let m = 4096;
    let inside = (0..m)
        .map(|i| body.gauge(e.point(2.0 * PI * i as f64 / m as f64)))
        .fold(0.0, f64::max);
    let mut pts = body.half_boundary();
    if body.vertices().is_none() {
        pts.extend((0..m).map(|i| body.radial_point(PI * i as f64 / m as f64)));
    }
    let outside = pts.iter().map(|p| e.gauge(*p)).fold(0.0, f64::max);
    (inside - 1.0, outside / factor - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, SQRT_2};

    fn hexagon() -> SymmetricConvexBody {
        SymmetricConvexBody::regular_polygon(6, 1.0, 0.0).unwrap()
    }

    fn rect() -> SymmetricConvexBody {
        SymmetricConvexBody::rectangle(2.0, 1.0).unwrap()
    }

    fn near(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn ratio_examples() {
        let sq = SymmetricConvexBody::square();
        assert!((ratio(&sq, &LinearMap2::IDENTITY).unwrap() - SQRT_2).abs() < 1e-15);
        assert!((ratio(&sq, &LinearMap2::diag(2.0, 1.0)).unwrap() - 5f64.sqrt()).abs() < 1e-15);
        let t = LinearMap2::new(1.3, -0.2, 0.4, 0.9).unwrap();
        let h = hexagon();
        assert!((ratio(&h, &t).unwrap() - ratio(&h, &t.scale(3.0)).unwrap()).abs() < 1e-14);
        assert!(ratio(&h, &LinearMap2::new_unchecked(1.0, 1.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn square_rounding() {
        let r = minimize_ratio(&SymmetricConvexBody::square(), &RoundingOptions::default()).unwrap();
        assert!((r.rho - SQRT_2).abs() < 1e-9);
        assert!(canonical_deviation(&r.t_star, &LinearMap2::IDENTITY).unwrap() < 1e-6);
        assert!(r.certified);
        assert!((r.t_star.det() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disk_rounding() {
        let r = minimize_ratio(&SymmetricConvexBody::disk(), &RoundingOptions::default()).unwrap();
        assert!((r.rho - 1.0).abs() < 1e-12);
        assert!(r.full_circle && r.certified);
        assert!(canonical_deviation(&r.t_star, &LinearMap2::IDENTITY).unwrap() < 1e-6);
    }

    /// Brute force over a fine (lambda, phi) grid, independent of the chart
    /// and of Nelder–Mead: 400 x 400 on lambda in [1, 2], phi in [0, pi),
    /// then a 400 x 400 zoom around the best cell.
    fn brute_force_rho(body: &SymmetricConvexBody) -> f64 {
        let eval = |lam: f64, phi: f64| {
            let t = LinearMap2::stretch(lam, phi);
            let (i, o) = body.image_radii(&t);
            o / i
        };
        let n = 400;
        let mut best = (f64::INFINITY, 1.0, 0.0);
        for i in 0..n {
            let lam = 1.0 + i as f64 / (n - 1) as f64;
            for j in 0..n {
                let phi = PI * j as f64 / n as f64;
                let v = eval(lam, phi);
                if v < best.0 {
                    best = (v, lam, phi);
                }
            }
        }
        let (dl, dp) = (1.0 / (n - 1) as f64, PI / n as f64);
        let (_, l0, p0) = best;
        for i in 0..n {
            let lam = (l0 - dl + 2.0 * dl * i as f64 / (n - 1) as f64).max(1.0);
            for j in 0..n {
                let phi = p0 - dp + 2.0 * dp * j as f64 / (n - 1) as f64;
                best.0 = best.0.min(eval(lam, phi));
            }
        }
        best.0
    }

    #[test]
    fn hexagon_rounding_matches_brute_force() {
        let h = hexagon();
        let oracle = brute_force_rho(&h);
        assert!((oracle - 2.0 / 3f64.sqrt()).abs() < 1e-9);
        let r = minimize_ratio(&h, &RoundingOptions::default()).unwrap();
        assert!((r.rho - oracle).abs() < 1e-9);
        assert!(canonical_deviation(&r.t_star, &LinearMap2::IDENTITY).unwrap() < 1e-6);
    }

    #[test]
    fn contact_examples() {
        let c = contact_points(&SymmetricConvexBody::square(), &LinearMap2::IDENTITY, 1e-6).unwrap();
        assert!(near(&c.outer, &[FRAC_PI_4, 3.0 * FRAC_PI_4], 1e-12));
        assert!(near(&c.inner, &[0.0, FRAC_PI_2], 1e-12));
        assert!(alternation_certificate(&c));

        let c = contact_points(&SymmetricConvexBody::disk(), &LinearMap2::IDENTITY, 1e-6).unwrap();
        assert!(c.full_circle);
        assert!(alternation_certificate(&c));

        let c = contact_points(&hexagon(), &LinearMap2::IDENTITY, 1e-6).unwrap();
        assert!(near(&c.outer, &[0.0, FRAC_PI_3, 2.0 * FRAC_PI_3], 1e-12));
        assert!(near(&c.inner, &[FRAC_PI_6, FRAC_PI_2, 5.0 * FRAC_PI_6], 1e-12));
        assert!(alternation_certificate(&c));
    }

    #[test]
    fn too_few_contacts_fail_alternation() {
        let c = Contacts {
            outer: vec![0.0],
            inner: vec![FRAC_PI_2],
            full_circle: false,
        };
        assert!(!alternation_certificate(&c));
    }

    #[test]
    fn stretch_probe_on_rectangle() {
        let body = rect();
        assert!(
            improvement_stretch(&SymmetricConvexBody::square(), &LinearMap2::IDENTITY, 1e-5)
                .unwrap()
                .is_none()
        );
        let probe = improvement_stretch(&body, &LinearMap2::IDENTITY, 1e-5)
            .unwrap()
            .expect("rectangle is not optimal at the identity");
        assert!((probe.direction - FRAC_PI_2).abs() < 1e-12);
        assert!(probe.theta.abs() < 1e-12);
        assert!(probe.derivative < 0.0);
        let before = ratio(&body, &LinearMap2::IDENTITY).unwrap();
        let after = ratio(&body, &stretch_map(probe.direction, 1.01)).unwrap();
        // Direct evaluation: sqrt(4 + 1.01^2) / 1.01.
        assert!((after - (4.0 + 1.01f64.powi(2)).sqrt() / 1.01).abs() < 1e-12);
        assert!(after < before);
    }

    #[test]
    fn stretch_derivative_matches_finite_difference() {
        let h = 1e-5;
        for &(ell, theta) in &[(0.8, 0.3), (0.72, 0.9), (0.95, 0.05), (0.75, 1.0)] {
            let fd = (stretch_bound(ell, theta, 1.0 + h) - stretch_bound(ell, theta, 1.0 - h)) / (2.0 * h);
            let an = stretch_bound_derivative(ell, theta, 1.0);
            assert!(((an - fd) / an).abs() < 1e-6, "ell={ell} theta={theta}: {an} vs {fd}");
            assert!(an < 0.0);
        }
    }

    #[test]
    fn canonical_ellipse_examples() {
        let r = minimize_ratio(&SymmetricConvexBody::square(), &RoundingOptions::default()).unwrap();
        let e = canonical_ellipse(&r).unwrap();
        assert!((e.semi_major - 1.0).abs() < 1e-6 && (e.semi_minor - 1.0).abs() < 1e-6);

        let body = rect();
        let r = minimize_ratio(&body, &RoundingOptions::default()).unwrap();
        assert!((r.rho - SQRT_2).abs() < 1e-9);
        let e = canonical_ellipse(&r).unwrap();
        let ell = e.semi_minor;
        assert!((e.semi_major - 2.0 * ell).abs() < 1e-6);
        assert!(e.angle.min(PI - e.angle) < 1e-6);
        let (inside, outside) = inclusion_slack(&body, &e, r.rho);
        assert!(inside <= 1e-6 && outside <= 1e-6, "{inside} {outside}");
    }

    #[test]
    fn same_ellipse_examples() {
        let i = LinearMap2::IDENTITY;
        let q = LinearMap2::rotation(PI / 7.0).scale(5.0);
        assert!(same_canonical_ellipse(&i, &q, 1e-12).unwrap());
        assert!(!same_canonical_ellipse(&i, &LinearMap2::diag(2.0, 1.0), 1e-3).unwrap());
        assert!(same_canonical_ellipse(&i, &LinearMap2::new_unchecked(0.0, 0.0, 0.0, 0.0), 1.0).is_err());
    }
}
