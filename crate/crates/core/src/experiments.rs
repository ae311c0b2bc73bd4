//! Batch runs behind the CLI and the acceptance suite.

use rayon::prelude::*;

use crate::banach_mazur::{canonical_deviation, minimize_ratio, RoundingOptions};
use crate::envelopes::{default_area_tol, verify_area_bounds};
use crate::error::Result;
use crate::geometry::SymmetricConvexBody;
use crate::random::random_body;

/// Bodies with `rho` at or below this are skipped by the uniqueness check:
/// their minimizing coset is ill-conditioned.
pub const UNIQUENESS_MIN_RHO: f64 = 1.001;
pub const UNIQUENESS_TOL: f64 = 1e-3;

/// Random body `i` of a batch: `random_body(seed + i, 3 + i mod 10)`.
pub fn batch_body(seed: u64, i: usize) -> Result<SymmetricConvexBody> {
    random_body(seed.wrapping_add(i as u64), 3 + i % 10)
}

pub const AREA_HEADER: &str = "seed_index,rho,ell,area,lower_ok,upper_ok,envelope_ok,K_O_factor,K_I_factor,certified";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AreaRow {
    pub index: usize,
    pub rho: f64,
    pub ell: f64,
    pub area: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
    pub envelope_ok: bool,
    pub k_o: f64,
    pub k_i: f64,
    pub certified: bool,
}

impl AreaRow {
    pub fn passed(&self) -> bool {
        self.lower_ok && self.upper_ok && self.envelope_ok && self.certified
    }

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.index,
            fmt_sig(self.rho),
            fmt_sig(self.ell),
            fmt_sig(self.area),
            self.lower_ok,
            self.upper_ok,
            self.envelope_ok,
            fmt_sig(self.k_o),
            fmt_sig(self.k_i),
            self.certified
        )
    }
}

/// Round one body and check the area bounds; `tol = None` picks the
/// representation default.
pub fn area_row(index: usize, body: &SymmetricConvexBody, opts: &RoundingOptions, tol: Option<f64>) -> Result<AreaRow> {
    let r = minimize_ratio(body, opts)?;
    let rep = verify_area_bounds(body, &r, tol.unwrap_or_else(|| default_area_tol(body)))?;
    Ok(AreaRow {
        index,
        rho: r.rho,
        ell: rep.ell,
        area: rep.area,
        lower_ok: rep.lower_ok,
        upper_ok: rep.upper_ok,
        envelope_ok: rep.envelope_ok,
        k_o: rep.k_o,
        k_i: rep.k_i,
        certified: r.certified,
    })
}

/// Area-bound rows for `count` random bodies, in index order.
pub fn area_batch(seed: u64, count: usize, opts: &RoundingOptions, tol: Option<f64>) -> Vec<Result<AreaRow>> {
    (0..count)
        .into_par_iter()
        .map(|i| area_row(i, &batch_body(seed, i)?, opts, tol))
        .collect()
}

pub const UNIQUENESS_HEADER: &str = "index,rho,deviation,status";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniquenessRow {
    pub index: usize,
    pub rho: f64,
    /// Largest `s_max / s_min - 1` of `T_i T_j^{-1}` over restart pairs.
    pub deviation: f64,
    pub skipped: bool,
}

impl UniquenessRow {
    pub fn passed(&self) -> bool {
        self.skipped || self.deviation <= UNIQUENESS_TOL
    }

    pub fn csv(&self) -> String {
        let status = if self.skipped {
            "skipped"
        } else if self.passed() {
            "ok"
        } else {
            "fail"
        };
        format!(
            "{},{},{},{}",
            self.index,
            fmt_sig(self.rho),
            fmt_sig(self.deviation),
            status
        )
    }
}

/// Minimize from `restarts` independently seeded grids and compare the
/// minimizers pairwise.
pub fn uniqueness_row(
    index: usize,
    body: &SymmetricConvexBody,
    restarts: usize,
    opts: &RoundingOptions,
) -> Result<UniquenessRow> {
    let runs = (0..restarts.max(1) as u64)
        .map(|k| {
            minimize_ratio(
                body,
                &RoundingOptions {
                    seed: opts.seed.wrapping_add(k),
                    ..*opts
                },
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let rho = runs.iter().map(|r| r.rho).fold(f64::INFINITY, f64::min);
    if rho <= UNIQUENESS_MIN_RHO {
        return Ok(UniquenessRow {
            index,
            rho,
            deviation: 0.0,
            skipped: true,
        });
    }
    let mut deviation = 0.0f64;
    for (i, a) in runs.iter().enumerate() {
        for b in &runs[i + 1..] {
            deviation = deviation.max(canonical_deviation(&a.t_star, &b.t_star)?);
        }
    }
    Ok(UniquenessRow {
        index,
        rho,
        deviation,
        skipped: false,
    })
}

/// Uniqueness rows for `count` random bodies, in index order.
pub fn uniqueness_batch(
    seed: u64,
    count: usize,
    restarts: usize,
    opts: &RoundingOptions,
) -> Vec<Result<UniquenessRow>> {
    (0..count)
        .into_par_iter()
        .map(|i| uniqueness_row(i, &batch_body(seed, i)?, restarts, opts))
        .collect()
}

pub const MODULUS_HEADER: &str = "n,mod_field,mod_euclid,ratio";

/// Number with 15 significant digits, in the style of C's `%.15g`.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    let s = if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.14e}");
        let (mant, e) = s.split_once('e').expect("exponent");
        let mant = if mant.contains('.') {
            mant.trim_end_matches('0').trim_end_matches('.')
        } else {
            mant
        };
        format!("{mant}e{e}")
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        assert_eq!(fmt_sig(std::f64::consts::SQRT_2), "1.4142135623731");
        assert_eq!(fmt_sig(2.0), "2");
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(-0.25), "-0.25");
        assert_eq!(fmt_sig(1.5e-9), "1.5e-9");
        assert_eq!(fmt_sig(1234.5), "1234.5");
    }

    #[test]
    fn square_row() {
        let row = area_row(0, &SymmetricConvexBody::square(), &RoundingOptions::default(), None).unwrap();
        assert!(row.passed());
        assert!((row.area - 2.0).abs() < 1e-9);
        assert!(row.csv().starts_with("0,1.4142135623"));
    }

    #[test]
    fn disk_is_skipped() {
        let row = uniqueness_row(0, &SymmetricConvexBody::disk(), 3, &RoundingOptions::default()).unwrap();
        assert!(row.skipped && row.passed());
    }

    #[test]
    fn batch_is_deterministic() {
        let opts = RoundingOptions::default();
        let a: Vec<String> = area_batch(3, 6, &opts, None)
            .into_iter()
            .map(|r| r.unwrap().csv())
            .collect();
        let b: Vec<String> = area_batch(3, 6, &opts, None)
            .into_iter()
            .map(|r| r.unwrap().csv())
            .collect();
        assert_eq!(a, b);
    }
}
