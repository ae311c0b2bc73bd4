//! Planar primitives for origin-symmetric convex bodies.
//!
//! A body is stored either as an exact polygon (full CCW vertex list, closed
//! under `v -> -v`) or as a radial function sampled on a uniform grid over
//! `[0, pi)`. Both answer the same queries: gauge, boundary point along a
//! ray, inner and outer radius, area, and images under linear maps.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Default number of radial samples on `[0, pi)`.
pub const DEFAULT_RADIAL_SAMPLES: usize = 2048;

/// Extra evaluation points per radial interval for inner/outer radius and
/// boundary clouds.
const RADIAL_REFINE: usize = 8;

/// Bodies thinner than this (inner/outer radius) are rejected.
const MIN_ROUNDNESS: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector `e^{i theta}`.
    #[inline]
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { x: c, y: s }
    }

    #[inline]
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    #[inline]
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Polar angle in `(-pi, pi]`.
    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

/// Reduce an angle to `[0, pi)`.
#[inline]
pub fn angle_mod_pi(theta: f64) -> f64 {
    let r = theta.rem_euclid(PI);
    if r >= PI {
        0.0
    } else {
        r
    }
}

/// Invertible real 2x2 matrix `[[a, b], [c, d]]` acting on column vectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearMap2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl LinearMap2 {
    pub const IDENTITY: LinearMap2 = LinearMap2 {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    /// Build a map, rejecting singular matrices.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let m = Self::new_unchecked(a, b, c, d);
        m.check_invertible()?;
        Ok(m)
    }

    #[inline]
    pub const fn new_unchecked(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::IDENTITY
    }

    pub fn diag(sx: f64, sy: f64) -> Self {
        Self::new_unchecked(sx, 0.0, 0.0, sy)
    }

    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new_unchecked(c, -s, s, c)
    }

    /// Symmetric positive-definite, determinant one: stretch by `sqrt(lambda)`
    /// along angle `phi` and by `1/sqrt(lambda)` across it.
    pub fn stretch(lambda: f64, phi: f64) -> Self {
        let s = lambda.sqrt();
        let r = Self::rotation(phi);
        r.compose(&Self::diag(s, 1.0 / s)).compose(&r.transpose())
    }

    /// Matrix exponential of the traceless symmetric matrix `[[p, q], [q, -p]]`.
    ///
    /// This is a global chart of SPD determinant-one matrices; the origin is
    /// the identity.
    pub fn from_chart(p: f64, q: f64) -> Self {
        let r = p.hypot(q);
        let (ch, sh_over_r) = if r < 1e-8 {
            (1.0 + 0.5 * r * r, 1.0 + r * r / 6.0)
        } else {
            (r.cosh(), r.sinh() / r)
        };
        Self::new_unchecked(ch + sh_over_r * p, sh_over_r * q, sh_over_r * q, ch - sh_over_r * p)
    }

    /// Inverse of [`LinearMap2::from_chart`] for SPD determinant-one input.
    pub fn to_chart(&self) -> (f64, f64) {
        let e = self.symmetric_eigen();
        let r = 0.5 * (e.0 / e.1).ln();
        let phi = e.2;
        (r * (2.0 * phi).cos(), r * (2.0 * phi).sin())
    }

    #[inline]
    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }

    pub fn is_invertible(&self) -> bool {
        let m = self.max_abs_entry();
        let det = self.det();
        det.is_finite() && m.is_finite() && det.abs() > 1e-12 * m * m
    }

    pub fn check_invertible(&self) -> Result<()> {
        if self.is_invertible() {
            Ok(())
        } else {
            Err(Error::SingularMap { det: self.det() })
        }
    }

    #[inline]
    pub fn apply(&self, v: Vec2) -> Vec2 {
        Vec2::new(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)
    }

    /// `self ∘ other`, i.e. the matrix product `self * other`.
    pub fn compose(&self, o: &LinearMap2) -> LinearMap2 {
        Self::new_unchecked(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn scale(&self, s: f64) -> LinearMap2 {
        Self::new_unchecked(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn transpose(&self) -> LinearMap2 {
        Self::new_unchecked(self.a, self.c, self.b, self.d)
    }

    pub fn inverse(&self) -> Result<LinearMap2> {
        self.check_invertible()?;
        let det = self.det();
        Ok(Self::new_unchecked(
            self.d / det,
            -self.b / det,
            -self.c / det,
            self.a / det,
        ))
    }

    /// Singular values `(s_max, s_min)`.
    pub fn singular_values(&self) -> (f64, f64) {
        let e = 0.5 * (self.a + self.d);
        let f = 0.5 * (self.a - self.d);
        let g = 0.5 * (self.c + self.b);
        let h = 0.5 * (self.c - self.b);
        let q = e.hypot(h);
        let r = f.hypot(g);
        (q + r, (q - r).abs())
    }

    /// The SPD determinant-one representative `P` of the coset
    /// `{ lambda Q self }`: the positive polar factor of `self`, rescaled.
    pub fn spd_normalized(&self) -> Result<LinearMap2> {
        self.check_invertible()?;
        let (hi, lo, angle) = self.transpose().compose(self).symmetric_eigen();
        let s = (hi / lo.max(f64::MIN_POSITIVE)).sqrt().sqrt();
        Ok(LinearMap2::stretch(s * s, angle))
    }

    /// Eigen-decomposition of the symmetric part: `(lambda_max, lambda_min,
    /// angle of the lambda_max eigenvector in [0, pi))`.
    pub fn symmetric_eigen(&self) -> (f64, f64, f64) {
        let p = self.a;
        let s = self.d;
        let q = 0.5 * (self.b + self.c);
        let mean = 0.5 * (p + s);
        let rad = (0.5 * (p - s)).hypot(q);
        let angle = if rad == 0.0 {
            0.0
        } else {
            angle_mod_pi(0.5 * (2.0 * q).atan2(p - s))
        };
        (mean + rad, mean - rad, angle)
    }
}

/// Origin-centred ellipse given by semi-axes and the angle of the major axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ellipse {
    pub semi_major: f64,
    pub semi_minor: f64,
    pub angle: f64,
}

impl Ellipse {
    /// Normalizes axis order and reduces the angle to `[0, pi)`.
    pub fn new(a: f64, b: f64, angle: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && angle.is_finite()) || a <= 0.0 || b <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "ellipse needs finite positive semi-axes, got ({a}, {b})"
            )));
        }
        let (major, minor, angle) = if b > a { (b, a, angle + 0.5 * PI) } else { (a, b, angle) };
        Ok(Self {
            semi_major: major,
            semi_minor: minor,
            angle: angle_mod_pi(angle),
        })
    }

    pub fn circle(r: f64) -> Self {
        Self {
            semi_major: r,
            semi_minor: r,
            angle: 0.0,
        }
    }

    /// The ellipse `m(B(0, r))`.
    pub fn from_linear_image(m: &LinearMap2, r: f64) -> Result<Self> {
        m.check_invertible()?;
        let mmt = m.compose(&m.transpose());
        let (hi, lo, angle) = mmt.symmetric_eigen();
        Self::new(r * hi.sqrt(), r * lo.max(0.0).sqrt(), angle)
    }

    pub fn axis_ratio(&self) -> f64 {
        self.semi_major / self.semi_minor
    }

    pub fn area(&self) -> f64 {
        PI * self.semi_major * self.semi_minor
    }

    /// Gauge of `p` with respect to the (filled) ellipse.
    pub fn gauge(&self, p: Vec2) -> f64 {
        let q = LinearMap2::rotation(-self.angle).apply(p);
        (q.x / self.semi_major).hypot(q.y / self.semi_minor)
    }

    /// Support function `max_{x in E} n . x`.
    pub fn support(&self, n: Vec2) -> f64 {
        let q = LinearMap2::rotation(-self.angle).apply(n);
        (q.x * self.semi_major).hypot(q.y * self.semi_minor)
    }

    /// Boundary point at parameter `t`.
    pub fn point(&self, t: f64) -> Vec2 {
        let (s, c) = t.sin_cos();
        LinearMap2::rotation(self.angle).apply(Vec2::new(self.semi_major * c, self.semi_minor * s))
    }

    /// Symmetric positive-definite map carrying the unit disk onto the ellipse.
    pub fn to_map(&self) -> LinearMap2 {
        let r = LinearMap2::rotation(self.angle);
        r.compose(&LinearMap2::diag(self.semi_major, self.semi_minor))
            .compose(&r.transpose())
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            semi_major: self.semi_major * s,
            semi_minor: self.semi_minor * s,
            angle: self.angle,
        }
    }

    pub fn rotated(&self, alpha: f64) -> Self {
        Self {
            angle: angle_mod_pi(self.angle + alpha),
            ..*self
        }
    }
}

/// Which representation backs a body.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BodyKind {
    Polygon,
    Radial,
}

/// A compact convex set symmetric about the origin, with the origin inside.
#[derive(Clone, Debug)]
pub struct SymmetricConvexBody {
    repr: Repr,
}

#[derive(Clone, Debug)]
enum Repr {
    Polygon(Polygon),
    Radial(Radial),
}

#[derive(Clone, Debug)]
struct Polygon {
    vertices: Vec<Vec2>,
    /// Edge `i` (from vertex `i` to `i + 1`) lies on the line `normals[i] . x = 1`.
    normals: Vec<Vec2>,
}

#[derive(Clone, Debug)]
struct Radial {
    samples: Vec<f64>,
    /// Boundary points for angles in `[0, pi)` on the refined grid.
    dense: Vec<Vec2>,
    area: f64,
}

impl SymmetricConvexBody {
    /// Validate a full CCW (or CW, which is reversed) vertex list.
    pub fn polygon(vertices: Vec<Vec2>) -> Result<Self> {
        Ok(Self {
            repr: Repr::Polygon(Polygon::validated(vertices)?),
        })
    }

    /// Validate radial samples `r(k pi / N)`, `k = 0..N`.
    pub fn radial(samples: Vec<f64>) -> Result<Self> {
        Ok(Self {
            repr: Repr::Radial(Radial::validated(samples)?),
        })
    }

    /// Sample a radial function on the default grid.
    pub fn radial_from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let samples = (0..n).map(|k| f(k as f64 * PI / n as f64)).collect();
        Self::radial(samples)
    }

    /// Unit ball of the l^p norm; `p = inf` gives the square polygon.
    pub fn lp_ball(p: f64) -> Result<Self> {
        if p.is_infinite() && p > 0.0 {
            return Ok(Self::square());
        }
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidInput(format!("l^p unit ball needs p >= 1, got {p}")));
        }
        Self::radial_from_fn(DEFAULT_RADIAL_SAMPLES, |t| {
            let (s, c) = t.sin_cos();
            if p == 2.0 {
                return 1.0;
            }
            (c.abs().powf(p) + s.abs().powf(p)).powf(-1.0 / p)
        })
    }

    pub fn disk() -> Self {
        Self::radial(vec![1.0; DEFAULT_RADIAL_SAMPLES]).expect("unit disk is valid")
    }

    /// `[-1, 1]^2`.
    pub fn square() -> Self {
        Self::rectangle(1.0, 1.0).expect("square is valid")
    }

    /// `[-half_w, half_w] x [-half_h, half_h]`.
    pub fn rectangle(half_w: f64, half_h: f64) -> Result<Self> {
        Self::polygon(vec![
            Vec2::new(half_w, half_h),
            Vec2::new(-half_w, half_h),
            Vec2::new(-half_w, -half_h),
            Vec2::new(half_w, -half_h),
        ])
    }

    /// Regular polygon with an even number of vertices, first vertex at `phase`.
    pub fn regular_polygon(k: usize, circumradius: f64, phase: f64) -> Result<Self> {
        if k < 4 || !k.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "a symmetric regular polygon needs an even vertex count >= 4, got {k}"
            )));
        }
        let vertices = (0..k)
            .map(|i| Vec2::from_angle(phase + TAU * i as f64 / k as f64) * circumradius)
            .collect();
        Self::polygon(vertices)
    }

    pub fn kind(&self) -> BodyKind {
        match self.repr {
            Repr::Polygon(_) => BodyKind::Polygon,
            Repr::Radial(_) => BodyKind::Radial,
        }
    }

    /// Polygon vertices, if this is a polygon.
    pub fn vertices(&self) -> Option<&[Vec2]> {
        match &self.repr {
            Repr::Polygon(p) => Some(&p.vertices),
            Repr::Radial(_) => None,
        }
    }

    /// Radial samples, if this is a radial body.
    pub fn samples(&self) -> Option<&[f64]> {
        match &self.repr {
            Repr::Polygon(_) => None,
            Repr::Radial(r) => Some(&r.samples),
        }
    }

    /// Minkowski gauge `inf { t > 0 : p / t in A }`.
    pub fn gauge(&self, p: Vec2) -> f64 {
        match &self.repr {
            Repr::Polygon(poly) => poly.gauge(p),
            Repr::Radial(rad) => {
                let n = p.norm();
                if n == 0.0 {
                    0.0
                } else {
                    n * rad.inv_radius(p.angle())
                }
            }
        }
    }

    /// The boundary point on the ray at angle `theta`.
    pub fn radial_point(&self, theta: f64) -> Vec2 {
        let u = Vec2::from_angle(theta);
        match &self.repr {
            Repr::Polygon(poly) => u * (1.0 / poly.gauge(u)),
            Repr::Radial(rad) => u * (1.0 / rad.inv_radius(theta)),
        }
    }

    /// Radius of the largest origin-centred disk inside the body.
    pub fn inner_radius(&self) -> f64 {
        match &self.repr {
            Repr::Polygon(poly) => poly.inner_radius(),
            Repr::Radial(rad) => rad.dense.iter().map(|p| p.norm()).fold(f64::INFINITY, f64::min),
        }
    }

    /// Radius of the smallest origin-centred disk containing the body.
    pub fn outer_radius(&self) -> f64 {
        match &self.repr {
            Repr::Polygon(poly) => poly.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max),
            Repr::Radial(rad) => rad.dense.iter().map(|p| p.norm()).fold(0.0, f64::max),
        }
    }

    pub fn area(&self) -> f64 {
        match &self.repr {
            Repr::Polygon(poly) => shoelace(&poly.vertices),
            Repr::Radial(rad) => rad.area,
        }
    }

    /// `(inner, outer)` radii of the image `T A`, without materializing it.
    pub fn image_radii(&self, t: &LinearMap2) -> (f64, f64) {
        match &self.repr {
            Repr::Polygon(poly) => poly.image_radii(t),
            Repr::Radial(rad) => cloud_radii(rad.dense.iter(), t),
        }
    }

    /// Cheaper variant of [`Self::image_radii`] for coarse searches: radial
    /// bodies use only their sample points.
    pub fn image_radii_coarse(&self, t: &LinearMap2) -> (f64, f64) {
        match &self.repr {
            Repr::Polygon(poly) => poly.image_radii(t),
            Repr::Radial(rad) => cloud_radii(rad.dense.iter().step_by(RADIAL_REFINE), t),
        }
    }

    /// Boundary points covering angles in `[0, pi)`; the other half follows by
    /// symmetry. Exact vertices for polygons, the refined sample for radial
    /// bodies.
    pub fn half_boundary(&self) -> Vec<Vec2> {
        match &self.repr {
            Repr::Polygon(poly) => {
                let k = poly.vertices.len();
                poly.vertices[..k / 2].to_vec()
            }
            Repr::Radial(rad) => rad.dense.clone(),
        }
    }

    /// Edge normals `n` with edges on `n . x = 1` (polygons only).
    pub fn edge_normals(&self) -> Option<&[Vec2]> {
        match &self.repr {
            Repr::Polygon(p) => Some(&p.normals),
            Repr::Radial(_) => None,
        }
    }

    /// Support function `max_{x in A} n . x`.
    pub fn support(&self, n: Vec2) -> f64 {
        match &self.repr {
            Repr::Polygon(poly) => poly.vertices.iter().map(|v| v.dot(n)).fold(f64::MIN, f64::max),
            Repr::Radial(rad) => rad.dense.iter().map(|v| v.dot(n).abs()).fold(0.0, f64::max),
        }
    }

    /// The image `T A`.
    pub fn apply_map(&self, t: &LinearMap2) -> Result<Self> {
        t.check_invertible()?;
        match &self.repr {
            Repr::Polygon(poly) => {
                let mut vs: Vec<Vec2> = poly.vertices.iter().map(|v| t.apply(*v)).collect();
                if t.det() < 0.0 {
                    vs.reverse();
                }
                Self::polygon(vs)
            }
            Repr::Radial(rad) => {
                let inv = t.inverse()?;
                let n = rad.samples.len();
                let samples = (0..n)
                    .map(|k| {
                        let u = Vec2::from_angle(k as f64 * PI / n as f64);
                        let w = inv.apply(u);
                        1.0 / (w.norm() * rad.inv_radius(w.angle()))
                    })
                    .collect();
                Self::radial(samples)
            }
        }
    }

    /// Resample as a radial body with `n` samples.
    pub fn to_radial(&self, n: usize) -> Result<Self> {
        Self::radial_from_fn(n, |t| self.radial_point(t).norm())
    }
}

fn cloud_radii<'a>(points: impl Iterator<Item = &'a Vec2>, t: &LinearMap2) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for p in points {
        let r = t.apply(*p).norm_sq();
        lo = lo.min(r);
        hi = hi.max(r);
    }
    (lo.sqrt(), hi.sqrt())
}

fn shoelace(vs: &[Vec2]) -> f64 {
    let k = vs.len();
    0.5 * (0..k).map(|i| vs[i].cross(vs[(i + 1) % k])).sum::<f64>()
}

impl Polygon {
    fn validated(mut vertices: Vec<Vec2>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidInput("empty vertex list".into()));
        }
        if let Some(i) = vertices.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("vertex {i} is not finite")));
        }
        let scale = vertices.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return Err(Error::OriginNotInterior);
        }
        let tol = 1e-9 * scale;
        vertices.dedup_by(|a, b| (*a - *b).norm() <= tol);
        while vertices.len() > 1 && (vertices[0] - vertices[vertices.len() - 1]).norm() <= tol {
            vertices.pop();
        }

        for v in &vertices {
            if !vertices.iter().any(|w| (*w + *v).norm() <= tol) {
                return Err(Error::Asymmetric(format!(
                    "vertex ({}, {}) has no antipodal vertex",
                    v.x, v.y
                )));
            }
        }
        if vertices.len() < 4 {
            return Err(Error::OriginNotInterior);
        }
        if shoelace(&vertices) < 0.0 {
            vertices.reverse();
        }

        let k = vertices.len();
        let s2 = scale * scale;
        let mut winding = 0.0;
        for i in 0..k {
            let v = vertices[i];
            let w = vertices[(i + 1) % k];
            if v.cross(w) <= 1e-14 * s2 {
                return Err(Error::OriginNotInterior);
            }
            winding += v.cross(w).atan2(v.dot(w));
            let prev = vertices[(i + k - 1) % k];
            if (v - prev).cross(w - v) < -1e-12 * s2 {
                return Err(Error::Nonconvex { index: i });
            }
        }
        if (winding - TAU).abs() > 1e-6 {
            return Err(Error::Nonconvex { index: 0 });
        }

        let normals = (0..k)
            .map(|i| edge_normal(vertices[i], vertices[(i + 1) % k]))
            .collect();
        let poly = Polygon { vertices, normals };
        let ratio = poly.inner_radius() / scale;
        if ratio < MIN_ROUNDNESS {
            return Err(Error::Degenerate { ratio });
        }
        Ok(poly)
    }

    fn gauge(&self, p: Vec2) -> f64 {
        self.normals.iter().map(|n| n.dot(p)).fold(0.0, f64::max)
    }

    fn inner_radius(&self) -> f64 {
        1.0 / self.normals.iter().map(|n| n.norm_sq()).fold(0.0, f64::max).sqrt()
    }

    fn image_radii(&self, t: &LinearMap2) -> (f64, f64) {
        // T A has edge normals T^{-T} n.
        let det = t.det();
        let mut outer = 0.0f64;
        for v in &self.vertices {
            outer = outer.max(t.apply(*v).norm_sq());
        }
        let mut dual = 0.0f64;
        for n in &self.normals {
            let m = Vec2::new(t.d * n.x - t.c * n.y, -t.b * n.x + t.a * n.y);
            dual = dual.max(m.norm_sq());
        }
        (det.abs() / dual.sqrt(), outer.sqrt())
    }
}

/// Normal `n` of the line through `p` and `q` written as `n . x = 1`.
#[inline]
pub(crate) fn edge_normal(p: Vec2, q: Vec2) -> Vec2 {
    let d = p.cross(q);
    Vec2::new((q.y - p.y) / d, (p.x - q.x) / d)
}

impl Radial {
    fn validated(samples: Vec<f64>) -> Result<Self> {
        let n = samples.len();
        if n < 4 {
            return Err(Error::InvalidInput(format!(
                "radial body needs at least 4 samples, got {n}"
            )));
        }
        if let Some(i) = samples.iter().position(|r| !r.is_finite()) {
            return Err(Error::InvalidInput(format!("sample {i} is not finite")));
        }
        if samples.iter().any(|&r| r <= 0.0) {
            return Err(Error::OriginNotInterior);
        }
        let scale = samples.iter().copied().fold(0.0, f64::max);
        let s2 = scale * scale;
        // Chord polygon through the samples must be convex over the full turn.
        let pt = |j: usize| Vec2::from_angle(j as f64 * PI / n as f64) * samples[j % n];
        for j in 0..2 * n {
            let prev = pt((j + 2 * n - 1) % (2 * n));
            let cur = pt(j);
            let next = pt(j + 1);
            if (cur - prev).cross(next - cur) < -1e-12 * s2 {
                return Err(Error::Nonconvex { index: j % n });
            }
        }

        let mut rad = Radial {
            samples,
            dense: Vec::new(),
            area: 0.0,
        };
        let m = n * RADIAL_REFINE;
        rad.dense = (0..m)
            .map(|i| {
                let t = i as f64 * PI / m as f64;
                Vec2::from_angle(t) * (1.0 / rad.inv_radius(t))
            })
            .collect();
        let lo = rad.dense.iter().map(|p| p.norm()).fold(f64::INFINITY, f64::min);
        let hi = rad.dense.iter().map(|p| p.norm()).fold(0.0, f64::max);
        if lo / hi < MIN_ROUNDNESS {
            return Err(Error::Degenerate { ratio: lo / hi });
        }
        rad.area = rad.quadrature_area();
        Ok(rad)
    }

    /// Periodic trapezoid rule for `integral_0^pi r^2`, refined by doubling
    /// through the interpolant until the relative change is below 1e-8.
    fn quadrature_area(&self) -> f64 {
        let n = self.samples.len();
        let mut step = PI / n as f64;
        let mut sum: f64 = self.samples.iter().map(|r| r * r).sum();
        let mut area = sum * step;
        let mut count = n;
        for _ in 0..6 {
            let mids: f64 = (0..count)
                .map(|k| {
                    let r = 1.0 / self.inv_radius((k as f64 + 0.5) * step);
                    r * r
                })
                .sum();
            sum += mids;
            count *= 2;
            step *= 0.5;
            let refined = sum * step;
            let converged = (refined - area).abs() <= 1e-8 * refined;
            area = refined;
            if converged {
                break;
            }
        }
        area
    }

    #[inline]
    fn point(&self, j: isize) -> Vec2 {
        let n = self.samples.len() as isize;
        Vec2::from_angle(j as f64 * PI / n as f64) * self.samples[j.rem_euclid(n) as usize]
    }

    /// `1 / r(theta)`: cubic Hermite through `1 / r_k`, clamped between the
    /// chord through the neighbouring samples (inner bound) and the two
    /// extended adjacent chords (outer bound), so the result stays convex.
    fn inv_radius(&self, theta: f64) -> f64 {
        let n = self.samples.len();
        let step = PI / n as f64;
        let th = angle_mod_pi(theta);
        let pos = th / step;
        let k = (pos.floor() as usize).min(n - 1);
        let t = pos - k as f64;
        let ki = k as isize;
        let h = |j: isize| 1.0 / self.samples[j.rem_euclid(n as isize) as usize];
        let (h0, h1) = (h(ki), h(ki + 1));
        if t == 0.0 {
            return h0;
        }
        let m0 = (h1 - h(ki - 1)) * 0.5;
        let m1 = (h(ki + 2) - h0) * 0.5;
        let t2 = t * t;
        let t3 = t2 * t;
        let cubic =
            (2.0 * t3 - 3.0 * t2 + 1.0) * h0 + (t3 - 2.0 * t2 + t) * m0 + (-2.0 * t3 + 3.0 * t2) * h1 + (t3 - t2) * m1;

        // The ray is taken at the unreduced angle so it lies in the wedge
        // between points k and k + 1.
        let u = Vec2::from_angle((k as f64 + t) * step);
        let (p_prev, p0, p1, p_next) = (
            self.point(ki - 1),
            self.point(ki),
            self.point(ki + 1),
            self.point(ki + 2),
        );
        let chord = edge_normal(p0, p1).dot(u);
        let outer = edge_normal(p_prev, p0).dot(u).max(edge_normal(p1, p_next).dot(u));
        if outer >= chord {
            chord
        } else {
            cubic.clamp(outer, chord)
        }
    }
}

/// Hausdorff distance between two bodies, estimated on `m` rays.
pub fn radial_distance(a: &SymmetricConvexBody, b: &SymmetricConvexBody, m: usize) -> f64 {
    (0..m)
        .map(|i| {
            let t = i as f64 * PI / m as f64;
            (a.radial_point(t) - b.radial_point(t)).norm()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, SQRT_2};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn gauge_examples() {
        let sq = SymmetricConvexBody::square();
        assert!(close(sq.gauge(Vec2::new(1.0, 1.0)), 1.0, 1e-15));
        assert!(close(sq.gauge(Vec2::new(2.0, 0.0)), 2.0, 1e-15));
        assert_eq!(sq.gauge(Vec2::ZERO), 0.0);
        let disk = SymmetricConvexBody::disk();
        assert!(close(disk.gauge(Vec2::new(0.6, 0.8)), 1.0, 1e-12));
    }

    #[test]
    fn radial_point_examples() {
        let sq = SymmetricConvexBody::square();
        let p = sq.radial_point(0.0);
        assert!(close(p.x, 1.0, 1e-15) && close(p.y, 0.0, 1e-15));
        let p = sq.radial_point(FRAC_PI_4);
        assert!(close(p.x, 1.0, 1e-12) && close(p.y, 1.0, 1e-12));

        let e = SymmetricConvexBody::radial_from_fn(DEFAULT_RADIAL_SAMPLES, |t| {
            let (s, c) = t.sin_cos();
            1.0 / ((c / 2.0).powi(2) + s * s).sqrt()
        })
        .unwrap();
        let p = e.radial_point(FRAC_PI_2);
        assert!(close(p.x, 0.0, 1e-12) && close(p.y, 1.0, 1e-12));
        for i in 0..97 {
            let t = i as f64 * 0.0731;
            assert!(close(e.gauge(e.radial_point(t)), 1.0, 1e-10));
        }
    }

    #[test]
    fn radii_examples() {
        let sq = SymmetricConvexBody::square();
        assert!(close(sq.inner_radius(), 1.0, 1e-15));
        assert!(close(sq.outer_radius(), SQRT_2, 1e-15));
        let rect = sq.apply_map(&LinearMap2::diag(2.0, 1.0)).unwrap();
        assert!(close(rect.inner_radius(), 1.0, 1e-15));
        assert!(close(rect.outer_radius(), 5f64.sqrt(), 1e-15));
        let hex = SymmetricConvexBody::regular_polygon(6, 1.0, 0.0).unwrap();
        assert!(close(hex.inner_radius(), 3f64.sqrt() / 2.0, 1e-15));
        assert!(close(hex.outer_radius(), 1.0, 1e-15));
    }

    #[test]
    fn area_examples() {
        assert!(close(SymmetricConvexBody::square().area(), 4.0, 1e-15));
        assert!(close(SymmetricConvexBody::disk().area(), PI, 1e-8));
        // Hexagon: six equilateral triangles of side 1.
        let oracle = 6.0 * 3f64.sqrt() / 4.0;
        let hex = SymmetricConvexBody::regular_polygon(6, 1.0, 0.0).unwrap();
        assert!(close(hex.area(), oracle, 1e-8));
        assert!(close(oracle, 3.0 * 3f64.sqrt() / 2.0, 1e-15));
    }

    #[test]
    fn radial_area_matches_closed_form_ellipse() {
        let (a, b) = (1.7, 0.6);
        let e = SymmetricConvexBody::radial_from_fn(DEFAULT_RADIAL_SAMPLES, |t| {
            let (s, c) = t.sin_cos();
            1.0 / ((c / a).powi(2) + (s / b).powi(2)).sqrt()
        })
        .unwrap();
        assert!((e.area() - PI * a * b).abs() <= 1e-8 * PI * a * b);
    }

    #[test]
    fn apply_map_examples() {
        let sq = SymmetricConvexBody::square();
        let same = sq.apply_map(&LinearMap2::IDENTITY).unwrap();
        assert_eq!(same.vertices(), sq.vertices());
        let rect = sq.apply_map(&LinearMap2::diag(2.0, 1.0)).unwrap();
        assert!(close(rect.area(), 8.0, 1e-14));
        let disk = SymmetricConvexBody::disk();
        let rotated = disk.apply_map(&LinearMap2::rotation(FRAC_PI_3)).unwrap();
        for r in rotated.samples().unwrap() {
            assert!(close(*r, 1.0, 1e-12));
        }
    }

    #[test]
    fn orientation_reversing_map_keeps_polygon_valid() {
        let hex = SymmetricConvexBody::regular_polygon(6, 1.0, 0.3).unwrap();
        let flipped = hex.apply_map(&LinearMap2::diag(-1.0, 2.0)).unwrap();
        assert!(close(flipped.area(), 2.0 * hex.area(), 1e-12));
    }

    #[test]
    fn validation_errors() {
        assert!(SymmetricConvexBody::polygon(vec![
            Vec2::new(1.0, -1.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(-1.0, 1.0),
            Vec2::new(-1.0, -1.0),
        ])
        .is_ok());
        let asym = SymmetricConvexBody::polygon(vec![Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), Vec2::new(-1.0, 0.0)]);
        assert!(matches!(asym, Err(Error::Asymmetric(_))));

        let mut samples = vec![1.0; 64];
        samples[10] = 0.0;
        assert!(matches!(
            SymmetricConvexBody::radial(samples),
            Err(Error::OriginNotInterior)
        ));

        // Symmetric bow-tie shaped octagon with a reflex vertex.
        let star = SymmetricConvexBody::polygon(vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(0.2, 0.2),
            Vec2::new(0.0, 1.0),
            Vec2::new(-1.0, 1.0),
            Vec2::new(-1.0, 0.0),
            Vec2::new(-0.2, -0.2),
            Vec2::new(0.0, -1.0),
            Vec2::new(1.0, -1.0),
        ]);
        assert!(matches!(star, Err(Error::Nonconvex { .. })));

        let thin = SymmetricConvexBody::rectangle(1.0, 1e-8);
        assert!(matches!(thin, Err(Error::Degenerate { .. })));

        assert!(matches!(SymmetricConvexBody::lp_ball(0.5), Err(Error::InvalidInput(_))));
        assert!(matches!(
            LinearMap2::new(1.0, 2.0, 2.0, 4.0),
            Err(Error::SingularMap { .. })
        ));
    }

    #[test]
    fn clockwise_input_is_accepted() {
        let cw = SymmetricConvexBody::polygon(vec![
            Vec2::new(1.0, 1.0),
            Vec2::new(1.0, -1.0),
            Vec2::new(-1.0, -1.0),
            Vec2::new(-1.0, 1.0),
        ])
        .unwrap();
        assert!(close(cw.area(), 4.0, 1e-15));
    }

    #[test]
    fn l1_ball_radial_is_accurate_near_corners() {
        let diamond = SymmetricConvexBody::lp_ball(1.0).unwrap();
        for i in 0..500 {
            let t = i as f64 * 0.0123;
            let (s, c) = t.sin_cos();
            let exact = 1.0 / (c.abs() + s.abs());
            assert!(close(diamond.radial_point(t).norm(), exact, 1e-12), "t = {t}");
        }
        assert!((diamond.area() - 2.0).abs() < 1e-8);
    }

    #[test]
    fn singular_values_and_chart() {
        let m = LinearMap2::new(3.0, 1.0, -2.0, 0.5).unwrap();
        let (s1, s2) = m.singular_values();
        assert!(close(s1 * s2, m.det().abs(), 1e-12));
        let fro = m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d;
        assert!(close(s1 * s1 + s2 * s2, fro, 1e-12));

        let t = LinearMap2::stretch(3.0, 0.4);
        assert!(close(t.det(), 1.0, 1e-12));
        let (p, q) = t.to_chart();
        let back = LinearMap2::from_chart(p, q);
        for (x, y) in [(t.a, back.a), (t.b, back.b), (t.c, back.c), (t.d, back.d)] {
            assert!(close(x, y, 1e-12));
        }
        let (hi, lo) = back.singular_values();
        assert!(close(hi / lo, 3.0, 1e-12));
    }

    #[test]
    fn ellipse_from_image() {
        let e = Ellipse::from_linear_image(&LinearMap2::diag(1.0, 2.0), 1.0).unwrap();
        assert!(close(e.semi_major, 2.0, 1e-14));
        assert!(close(e.semi_minor, 1.0, 1e-14));
        assert!(close(e.angle, FRAC_PI_2, 1e-14));
        let p = e.point(0.3);
        assert!(close(e.gauge(p), 1.0, 1e-14));
    }
}
