//! Two-parameter Nelder–Mead with restarts.
//!
//! The objectives minimized here (radius ratios over SPD determinant-one
//! maps) are continuous and piecewise smooth, with kinks exactly at the
//! minimizer. Restarting the simplex from the incumbent with a fresh,
//! smaller simplex gets past the stalls plain Nelder–Mead shows on ridges.

#[derive(Clone, Copy, Debug)]
pub struct NelderMeadOptions {
    /// Stop when the simplex diameter falls below this.
    pub x_tol: f64,
    /// Evaluation budget for a single simplex run.
    pub max_iter: usize,
    /// Maximum number of restarts from the incumbent.
    pub max_restarts: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            x_tol: 1e-9,
            max_iter: 4000,
            max_restarts: 30,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Minimum {
    pub x: [f64; 2],
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn diameter(s: &[([f64; 2], f64); 3]) -> f64 {
    let mut d = 0.0f64;
    for i in 0..3 {
        for j in i + 1..3 {
            d = d.max((s[i].0[0] - s[j].0[0]).hypot(s[i].0[1] - s[j].0[1]));
        }
    }
    d
}

fn lerp(a: [f64; 2], b: [f64; 2], t: f64) -> [f64; 2] {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

/// One Nelder–Mead run with standard coefficients (1, 2, 1/2, 1/2).
pub fn nelder_mead<F>(f: &mut F, x0: [f64; 2], step: f64, opts: &NelderMeadOptions) -> Minimum
where
    F: FnMut([f64; 2]) -> f64,
{
    let p1 = [x0[0] + step, x0[1]];
    let p2 = [x0[0], x0[1] + step];
    let mut s = [(x0, f(x0)), (p1, f(p1)), (p2, f(p2))];
    let mut iterations = 0;
    let mut converged = false;

    while iterations < opts.max_iter {
        s.sort_by(|a, b| a.1.total_cmp(&b.1));
        if diameter(&s) < opts.x_tol {
            converged = true;
            break;
        }
        iterations += 1;
        let centroid = lerp(s[0].0, s[1].0, 0.5);
        let worst = s[2];
        let xr = lerp(centroid, worst.0, -1.0);
        let fr = f(xr);
        if fr < s[0].1 {
            let xe = lerp(centroid, worst.0, -2.0);
            let fe = f(xe);
            s[2] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < s[1].1 {
            s[2] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst.1 {
            let xc = lerp(centroid, xr, 0.5);
            (xc, f(xc))
        } else {
            let xc = lerp(centroid, worst.0, 0.5);
            (xc, f(xc))
        };
        if fc < worst.1.min(fr) {
            s[2] = (xc, fc);
            continue;
        }
        // Shrink towards the best vertex.
        for i in 1..3 {
            let x = lerp(s[0].0, s[i].0, 0.5);
            s[i] = (x, f(x));
        }
    }
    s.sort_by(|a, b| a.1.total_cmp(&b.1));
    Minimum {
        x: s[0].0,
        value: s[0].1,
        iterations,
        converged,
    }
}

/// Nelder–Mead restarted from the incumbent until a restart brings no
/// improvement.
pub fn minimize_with_restarts<F>(f: &mut F, x0: [f64; 2], step: f64, opts: &NelderMeadOptions) -> Minimum
where
    F: FnMut([f64; 2]) -> f64,
{
    let mut best = nelder_mead(f, x0, step, opts);
    let mut iterations = best.iterations;
    let mut step = step;
    for _ in 0..opts.max_restarts {
        step = (step * 0.5).max(100.0 * opts.x_tol);
        let next = nelder_mead(f, best.x, step, opts);
        iterations += next.iterations;
        let improved = next.value < best.value;
        if improved {
            best = next;
        } else {
            best.converged &= next.converged;
            if step <= 100.0 * opts.x_tol {
                break;
            }
        }
    }
    best.iterations = iterations;
    best
}
