//! Canonical-ellipse fields and their Beltrami coefficients.

use rayon::prelude::*;

use crate::banach_mazur::{canonical_ellipse, minimize_ratio, RoundingOptions, ELLIPSE_RHO_TOL};
use crate::error::{Error, Result};
use crate::geometry::{Ellipse, LinearMap2, SymmetricConvexBody, Vec2};

/// Axis ratios within this of 1 are treated as circles.
pub const CIRCLE_SNAP: f64 = 1e-7;

/// Complex dilatation `mu = re + i im`, `|mu| < 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Beltrami {
    pub re: f64,
    pub im: f64,
}

impl Beltrami {
    pub const ZERO: Beltrami = Beltrami { re: 0.0, im: 0.0 };

    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn arg(&self) -> f64 {
        self.im.atan2(self.re)
    }

    /// The map `z -> z + mu conj(z)`, which carries circles to ellipses of
    /// this field.
    pub fn to_map(&self) -> LinearMap2 {
        LinearMap2::new_unchecked(1.0 + self.re, self.im, self.im, 1.0 - self.re)
    }
}

/// `mu` with `|mu| = (K - 1) / (K + 1)`, `K` the axis ratio, and
/// `arg mu = 2 angle`; circles give 0.
pub fn ellipse_to_beltrami(e: &Ellipse) -> Beltrami {
    let k = e.axis_ratio();
    if k - 1.0 <= CIRCLE_SNAP {
        return Beltrami::ZERO;
    }
    let m = (k - 1.0) / (k + 1.0);
    let (s, c) = (2.0 * e.angle).sin_cos();
    Beltrami { re: m * c, im: m * s }
}

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        if !(x0.is_finite() && y0.is_finite() && x1.is_finite() && y1.is_finite()) || x1 <= x0 || y1 <= y0 {
            return Err(Error::InvalidInput(format!(
                "rectangle [{x0}, {x1}] x [{y0}, {y1}] is empty or not finite"
            )));
        }
        Ok(Self { x0, y0, x1, y1 })
    }

    pub fn unit() -> Self {
        Self {
            x0: 0.0,
            y0: 0.0,
            x1: 1.0,
            y1: 1.0,
        }
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn center(&self) -> Vec2 {
        Vec2::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }
}

#[derive(Clone, Debug)]
pub enum FieldCells {
    Constant(SymmetricConvexBody),
    /// Row-major, `nx * ny` bodies.
    PerCell(Vec<SymmetricConvexBody>),
}

/// Cellwise-constant norm field over a rectangle.
#[derive(Clone, Debug)]
pub struct NormField {
    pub nx: usize,
    pub ny: usize,
    pub rect: Rect,
    pub cells: FieldCells,
}

impl NormField {
    pub fn constant(body: SymmetricConvexBody) -> Self {
        Self {
            nx: 1,
            ny: 1,
            rect: Rect::unit(),
            cells: FieldCells::Constant(body),
        }
    }

    pub fn per_cell(nx: usize, ny: usize, rect: Rect, cells: Vec<SymmetricConvexBody>) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidInput("field needs at least one cell".into()));
        }
        if cells.len() != nx * ny {
            return Err(Error::InvalidInput(format!(
                "field has {} cells, expected {nx} x {ny}",
                cells.len()
            )));
        }
        Ok(Self {
            nx,
            ny,
            rect,
            cells: FieldCells::PerCell(cells),
        })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn constant_body(&self) -> Option<&SymmetricConvexBody> {
        match &self.cells {
            FieldCells::Constant(b) => Some(b),
            FieldCells::PerCell(_) => None,
        }
    }

    /// Body of cell `i` (row-major).
    pub fn body(&self, i: usize) -> &SymmetricConvexBody {
        match &self.cells {
            FieldCells::Constant(b) => b,
            FieldCells::PerCell(v) => &v[i],
        }
    }

    /// Body governing the point `p`, clamped to the field rectangle.
    pub fn body_at(&self, p: Vec2) -> &SymmetricConvexBody {
        let fx = ((p.x - self.rect.x0) / self.rect.width() * self.nx as f64).floor();
        let fy = ((p.y - self.rect.y0) / self.rect.height() * self.ny as f64).floor();
        let ix = (fx.max(0.0) as usize).min(self.nx - 1);
        let iy = (fy.max(0.0) as usize).min(self.ny - 1);
        self.body(iy * self.nx + ix)
    }
}

fn cell_beltrami(body: &SymmetricConvexBody, opts: &RoundingOptions) -> Result<Beltrami> {
    let r = minimize_ratio(body, opts)?;
    if r.rho < 1.0 + ELLIPSE_RHO_TOL {
        return Ok(Beltrami::ZERO);
    }
    Ok(ellipse_to_beltrami(&canonical_ellipse(&r)?))
}

/// Beltrami coefficient of the canonical ellipse in every cell, row-major.
/// Failures report the lowest failing cell index.
pub fn field_to_beltrami(field: &NormField, opts: &RoundingOptions) -> Result<Vec<Beltrami>> {
    let wrap = |index: usize, e: Error| Error::Cell {
        index,
        source: Box::new(e),
    };
    match &field.cells {
        FieldCells::Constant(b) => {
            let mu = cell_beltrami(b, opts).map_err(|e| wrap(0, e))?;
            Ok(vec![mu; field.len()])
        }
        FieldCells::PerCell(bodies) => {
            let results: Vec<Result<Beltrami>> = bodies.par_iter().map(|b| cell_beltrami(b, opts)).collect();
            results
                .into_iter()
                .enumerate()
                .map(|(i, r)| r.map_err(|e| wrap(i, e)))
                .collect()
        }
    }
}

/// Linear map taking the canonical ellipse of `body` to a circle: the SPD
/// determinant-one minimizer `T*`.
pub fn affine_uniformizer(body: &SymmetricConvexBody, opts: &RoundingOptions) -> Result<LinearMap2> {
    Ok(minimize_ratio(body, opts)?.t_star)
}

/// Largest `|mu|` over the field.
pub fn ess_sup_mu(mu: &[Beltrami]) -> f64 {
    mu.iter().map(Beltrami::abs).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    /// Oracle: `z -> z + mu conj(z)` maps the unit disk to an ellipse
    /// similar to `e`.
    fn agrees_with_oracle(e: &Ellipse, mu: Beltrami) -> bool {
        let img = Ellipse::from_linear_image(&mu.to_map(), 1.0).unwrap();
        let d_angle = (img.angle - e.angle).abs();
        (img.axis_ratio() - e.axis_ratio()).abs() < 1e-12 && d_angle.min(PI - d_angle) < 1e-12
    }

    #[test]
    fn beltrami_examples() {
        assert_eq!(ellipse_to_beltrami(&Ellipse::circle(1.0)), Beltrami::ZERO);
        let e = Ellipse::new(2.0, 1.0, 0.0).unwrap();
        let mu = ellipse_to_beltrami(&e);
        assert!((mu.re - 1.0 / 3.0).abs() < 1e-15 && mu.im == 0.0);
        assert!(agrees_with_oracle(&e, mu));
        let e = Ellipse::new(2.0, 1.0, FRAC_PI_4).unwrap();
        let mu = ellipse_to_beltrami(&e);
        assert!((mu.abs() - 1.0 / 3.0).abs() < 1e-15);
        assert!((mu.arg() - FRAC_PI_2).abs() < 1e-15);
        assert!(agrees_with_oracle(&e, mu));
    }

    #[test]
    fn scale_invariance() {
        let e = Ellipse::new(3.0, 1.25, 0.4).unwrap();
        let a = ellipse_to_beltrami(&e);
        let b = ellipse_to_beltrami(&e.scaled(7.5));
        assert!((a.re - b.re).abs() < 1e-15 && (a.im - b.im).abs() < 1e-15);
    }

    #[test]
    fn field_examples() {
        let opts = RoundingOptions::default();
        let sq = NormField::constant(SymmetricConvexBody::square());
        assert!(field_to_beltrami(&sq, &opts)
            .unwrap()
            .iter()
            .all(|m| *m == Beltrami::ZERO));

        let rect = NormField::per_cell(
            2,
            1,
            Rect::unit(),
            vec![SymmetricConvexBody::rectangle(2.0, 1.0).unwrap(); 2],
        )
        .unwrap();
        for mu in field_to_beltrami(&rect, &opts).unwrap() {
            assert!((mu.re - 1.0 / 3.0).abs() < 1e-6 && mu.im.abs() < 1e-6);
        }

        let mixed = NormField::per_cell(
            2,
            2,
            Rect::unit(),
            vec![
                SymmetricConvexBody::disk(),
                SymmetricConvexBody::square(),
                SymmetricConvexBody::square(),
                SymmetricConvexBody::disk(),
            ],
        )
        .unwrap();
        let mu = field_to_beltrami(&mixed, &opts).unwrap();
        assert_eq!(mu, vec![Beltrami::ZERO; 4]);
        assert_eq!(ess_sup_mu(&mu), 0.0);
    }

    #[test]
    fn cell_errors_carry_index() {
        let opts = RoundingOptions {
            grid_n: 1,
            ..Default::default()
        };
        let f = NormField::per_cell(1, 2, Rect::unit(), vec![SymmetricConvexBody::square(); 2]).unwrap();
        match field_to_beltrami(&f, &opts) {
            Err(Error::Cell { index: 0, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn uniformizer_examples() {
        let opts = RoundingOptions::default();
        let t = affine_uniformizer(&SymmetricConvexBody::square(), &opts).unwrap();
        assert!(crate::banach_mazur::canonical_deviation(&t, &LinearMap2::IDENTITY).unwrap() < 1e-6);
        let t = affine_uniformizer(&SymmetricConvexBody::disk(), &opts).unwrap();
        assert!(crate::banach_mazur::canonical_deviation(&t, &LinearMap2::IDENTITY).unwrap() < 1e-6);

        let body = SymmetricConvexBody::rectangle(2.0, 1.0).unwrap();
        let r = minimize_ratio(&body, &opts).unwrap();
        let s = 1.0 / 2f64.sqrt();
        assert!((r.t_star.a - s).abs() < 1e-6 && (r.t_star.d - 1.0 / s).abs() < 1e-6);
        assert!(r.t_star.b.abs() < 1e-6 && r.t_star.c.abs() < 1e-6);
        let e = canonical_ellipse(&r).unwrap();
        let img = Ellipse::from_linear_image(&r.t_star.compose(&e.to_map()), 1.0).unwrap();
        assert!(img.axis_ratio() - 1.0 < 1e-8);
    }
}
