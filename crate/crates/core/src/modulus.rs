//! Discrete 2-modulus of curve families on grid approximations of normed
//! planes.
//!
//! One density value per grid cell. A grid path from the source to the sink
//! accumulates `rho(c) * |step|_c` over its steps, each step split evenly
//! between the two cells it joins, plus the norm distance from the first and
//! last cell centers to the boundary. The modulus is the least
//! `sum_c w_c rho(c)^2` over densities giving every path length at least 1,
//! where `w_c` is the Hausdorff 2-measure of the cell,
//! `(pi / Leb(B_c)) * Leb(cell)`.
//!
//! The quadratic program is solved by constraint generation: the shortest
//! path under the current density is added whenever it is shorter than
//! `1 - feas_tol`, and the restricted problem is re-solved by Hildreth's
//! dual coordinate ascent, warm-started from the previous multipliers.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};
use std::f64::consts::PI;

use crate::banach_mazur::RoundingOptions;
use crate::ellipse_field::{affine_uniformizer, NormField, Rect};
use crate::error::{Error, Result};
use crate::geometry::{LinearMap2, SymmetricConvexBody, Vec2};

/// A norm on the plane, given by its unit ball.
#[derive(Clone, Debug)]
pub enum PlaneNorm {
    Euclidean,
    /// Gauge of a symmetric convex body.
    Body(SymmetricConvexBody),
    /// `x -> |T x|`.
    Linear(LinearMap2),
}

impl PlaneNorm {
    pub fn norm(&self, v: Vec2) -> f64 {
        match self {
            PlaneNorm::Euclidean => v.norm(),
            PlaneNorm::Body(b) => b.gauge(v),
            PlaneNorm::Linear(t) => t.apply(v).norm(),
        }
    }

    /// Dual norm `sup {n . x : |x| <= 1}`.
    pub fn dual(&self, n: Vec2) -> f64 {
        match self {
            PlaneNorm::Euclidean => n.norm(),
            PlaneNorm::Body(b) => b.support(n),
            PlaneNorm::Linear(t) => match t.inverse() {
                Ok(inv) => inv.transpose().apply(n).norm(),
                Err(_) => f64::INFINITY,
            },
        }
    }

    /// Lebesgue area of the unit ball.
    pub fn unit_ball_area(&self) -> f64 {
        match self {
            PlaneNorm::Euclidean => PI,
            PlaneNorm::Body(b) => b.area(),
            PlaneNorm::Linear(t) => PI / t.det().abs(),
        }
    }
}

/// Region carrying the curve family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Domain {
    Rect(Rect),
    /// The square-rotated quadrilateral whose vertices are the side
    /// midpoints of the rectangle.
    Diamond(Rect),
}

impl Domain {
    pub fn rect(&self) -> Rect {
        match *self {
            Domain::Rect(r) | Domain::Diamond(r) => r,
        }
    }
}

/// Boundary pieces of the domain.
#[derive(Clone, Debug, PartialEq)]
pub enum Boundary {
    Left,
    Right,
    Top,
    Bottom,
    /// Boundary points of a rectangle whose angle about its center lies in
    /// `[from, to]`.
    Arc {
        from: f64,
        to: f64,
    },
    /// Diamond sides, named by the quadrant they face.
    SouthWest,
    SouthEast,
    NorthEast,
    NorthWest,
    Union(Vec<Boundary>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Connectivity {
    /// Horizontal and vertical steps.
    Axis,
    /// Axis steps plus the two diagonals.
    Diag,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    pub source: Boundary,
    pub sink: Boundary,
    pub connectivity: Connectivity,
}

#[derive(Clone, Copy, Debug)]
pub struct ModulusOptions {
    pub feas_tol: f64,
    pub qp_tol: f64,
    /// Constraint-generation rounds; `None` means `10 n`.
    pub max_iter: Option<usize>,
}

impl Default for ModulusOptions {
    fn default() -> Self {
        Self {
            feas_tol: 1e-4,
            qp_tol: 1e-8,
            max_iter: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ModulusResult {
    pub value: f64,
    /// Extremal density per cell, row-major; zero outside the domain.
    pub density: Vec<f64>,
    pub iterations: usize,
    pub constraint_count: usize,
    /// Shortest admitted path length under `density`.
    pub min_path_length: f64,
    /// `value / min(1, min_path_length)^2`, the value of a feasible density.
    pub upper_bound: f64,
}

/// Step directions in units of `(hx, hy)`.
const STEPS: [(i64, i64); 4] = [(1, 0), (0, 1), (1, 1), (1, -1)];

/// Cell data for a domain: Hausdorff weights and norm lengths of the four
/// step types, row-major with `ix` fastest.
#[derive(Clone, Debug)]
pub struct GridDomain {
    pub n: usize,
    pub nx: usize,
    pub ny: usize,
    pub domain: Domain,
    pub hx: f64,
    pub hy: f64,
    /// Zero for cells outside the domain.
    pub cell_area_weight: Vec<f64>,
    /// Norm length of `(hx, 0)`, `(0, hy)`, `(hx, hy)`, `(hx, -hy)`.
    pub step_length: Vec<[f64; 4]>,
    /// Part of each cell inside the domain.
    clipped: Vec<Vec<Vec2>>,
    norms: Vec<PlaneNorm>,
    norm_index: Vec<usize>,
}

impl GridDomain {
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn center(&self, i: usize) -> Vec2 {
        let r = self.domain.rect();
        let (ix, iy) = (i % self.nx, i / self.nx);
        Vec2::new(r.x0 + (ix as f64 + 0.5) * self.hx, r.y0 + (iy as f64 + 0.5) * self.hy)
    }

    pub fn norm_of(&self, i: usize) -> &PlaneNorm {
        &self.norms[self.norm_index[i]]
    }
}

fn polygon_area(p: &[Vec2]) -> f64 {
    let k = p.len();
    (0..k).map(|i| p[i].cross(p[(i + 1) % k])).sum::<f64>() * 0.5
}

/// Clip a convex polygon to `n . x >= b`.
fn clip(poly: &[Vec2], n: Vec2, b: f64) -> Vec<Vec2> {
    let k = poly.len();
    let mut out = Vec::with_capacity(k + 1);
    for i in 0..k {
        let p = poly[i];
        let q = poly[(i + 1) % k];
        let (fp, fq) = (n.dot(p) - b, n.dot(q) - b);
        if fp >= 0.0 {
            out.push(p);
        }
        if (fp >= 0.0) != (fq >= 0.0) {
            let t = fp / (fp - fq);
            out.push(p + (q - p) * t);
        }
    }
    out
}

/// Inward unit normals and offsets `(n, b)` of the diamond sides
/// (SW, SE, NE, NW): the inside is `n . x >= b`.
fn diamond_sides(r: &Rect) -> [(Vec2, f64); 4] {
    let c = r.center();
    let (a, h) = (0.5 * r.width(), 0.5 * r.height());
    let west = Vec2::new(r.x0, c.y);
    let east = Vec2::new(r.x1, c.y);
    let mk = |sx: f64, sy: f64, p: Vec2| {
        let n = Vec2::new(sx / a, sy / h);
        let n = n * (1.0 / n.norm());
        (n, n.dot(p))
    };
    [
        mk(1.0, 1.0, west),
        mk(-1.0, 1.0, east),
        mk(-1.0, -1.0, east),
        mk(1.0, -1.0, west),
    ]
}

fn rect_sides(r: &Rect) -> [(Vec2, f64); 4] {
    // Left, right, bottom, top.
    [
        (Vec2::new(1.0, 0.0), r.x0),
        (Vec2::new(-1.0, 0.0), -r.x1),
        (Vec2::new(0.0, 1.0), r.y0),
        (Vec2::new(0.0, -1.0), -r.y1),
    ]
}

fn grid_with(domain: Domain, n: usize, norms: Vec<PlaneNorm>, pick: impl Fn(Vec2) -> usize) -> Result<GridDomain> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("grid needs n >= 2, got {n}")));
    }
    let r = domain.rect();
    let h = r.width().min(r.height()) / n as f64;
    let nx = ((r.width() / h).round() as usize).max(1);
    let ny = ((r.height() / h).round() as usize).max(1);
    let (hx, hy) = (r.width() / nx as f64, r.height() / ny as f64);
    let ball: Vec<f64> = norms.iter().map(PlaneNorm::unit_ball_area).collect();
    if ball.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
        return Err(Error::InvalidInput("norm with degenerate unit ball".into()));
    }
    let mut grid = GridDomain {
        n,
        nx,
        ny,
        domain,
        hx,
        hy,
        cell_area_weight: Vec::with_capacity(nx * ny),
        step_length: Vec::with_capacity(nx * ny),
        clipped: Vec::with_capacity(nx * ny),
        norms,
        norm_index: Vec::with_capacity(nx * ny),
    };
    for iy in 0..ny {
        for ix in 0..nx {
            let x0 = r.x0 + ix as f64 * hx;
            let y0 = r.y0 + iy as f64 * hy;
            let mut poly = vec![
                Vec2::new(x0, y0),
                Vec2::new(x0 + hx, y0),
                Vec2::new(x0 + hx, y0 + hy),
                Vec2::new(x0, y0 + hy),
            ];
            if let Domain::Diamond(_) = domain {
                for (nrm, b) in diamond_sides(&r) {
                    poly = clip(&poly, nrm, b);
                    if poly.len() < 3 {
                        poly.clear();
                        break;
                    }
                }
            }
            let area = if poly.len() >= 3 { polygon_area(&poly) } else { 0.0 };
            let center = Vec2::new(x0 + 0.5 * hx, y0 + 0.5 * hy);
            let k = pick(center);
            let norm = &grid.norms[k];
            let steps = STEPS.map(|(sx, sy)| norm.norm(Vec2::new(sx as f64 * hx, sy as f64 * hy)));
            grid.cell_area_weight.push(if area > 1e-14 * hx * hy {
                PI / ball[k] * area
            } else {
                0.0
            });
            grid.step_length.push(steps);
            grid.clipped.push(poly);
            grid.norm_index.push(k);
        }
    }
    Ok(grid)
}

/// Grid for a single norm on `domain`, `n` cells across the shorter side.
pub fn build_grid_with_norm(norm: PlaneNorm, domain: Domain, n: usize) -> Result<GridDomain> {
    grid_with(domain, n, vec![norm], |_| 0)
}

/// Grid over the field rectangle, each cell taking the norm of the field
/// cell containing its center.
pub fn build_grid(field: &NormField, n: usize) -> Result<GridDomain> {
    build_grid_on(field, Domain::Rect(field.rect), n)
}

/// As [`build_grid`] on an explicit domain.
pub fn build_grid_on(field: &NormField, domain: Domain, n: usize) -> Result<GridDomain> {
    match field.constant_body() {
        Some(b) => build_grid_with_norm(PlaneNorm::Body(b.clone()), domain, n),
        None => {
            let norms = (0..field.len())
                .map(|i| PlaneNorm::Body(field.body(i).clone()))
                .collect();
            let nx = field.nx;
            let r = field.rect;
            grid_with(domain, n, norms, move |c| {
                let fx = ((c.x - r.x0) / r.width() * nx as f64).floor().max(0.0) as usize;
                let fy = ((c.y - r.y0) / r.height() * field.ny as f64).floor().max(0.0) as usize;
                fy.min(field.ny - 1) * nx + fx.min(nx - 1)
            })
        }
    }
}

/// Terminal cells of a boundary piece with the norm distance from each
/// cell center to the boundary.
fn terminals(grid: &GridDomain, b: &Boundary) -> Result<Vec<(usize, f64)>> {
    let r = grid.domain.rect();
    let mut out: Vec<(usize, f64)> = Vec::new();
    let add_line = |out: &mut Vec<(usize, f64)>, nrm: Vec2, off: f64, keep: &dyn Fn(usize) -> bool| {
        let scale = grid.hx.max(grid.hy);
        for i in 0..grid.len() {
            if grid.cell_area_weight[i] == 0.0 || !keep(i) {
                continue;
            }
            let on_line = grid.clipped[i]
                .iter()
                .filter(|v| (nrm.dot(**v) - off).abs() <= 1e-9 * scale)
                .count();
            if on_line < 2 {
                continue;
            }
            let c = grid.center(i);
            let cap = (nrm.dot(c) - off).max(0.0) / grid.norm_of(i).dual(nrm);
            out.push((i, cap));
        }
    };
    let is_rect = matches!(grid.domain, Domain::Rect(_));
    let need = |ok: bool, what: &str| -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "boundary {what} does not exist on this domain"
            )))
        }
    };
    match b {
        Boundary::Left | Boundary::Right | Boundary::Bottom | Boundary::Top => {
            need(is_rect, &format!("{b:?}"))?;
            let k = match b {
                Boundary::Left => 0,
                Boundary::Right => 1,
                Boundary::Bottom => 2,
                _ => 3,
            };
            let (nrm, off) = rect_sides(&r)[k];
            add_line(&mut out, nrm, off, &|_| true);
        }
        Boundary::SouthWest | Boundary::SouthEast | Boundary::NorthEast | Boundary::NorthWest => {
            need(!is_rect, &format!("{b:?}"))?;
            let k = match b {
                Boundary::SouthWest => 0,
                Boundary::SouthEast => 1,
                Boundary::NorthEast => 2,
                _ => 3,
            };
            let (nrm, off) = diamond_sides(&r)[k];
            add_line(&mut out, nrm, off, &|_| true);
        }
        Boundary::Arc { from, to } => {
            need(is_rect, "arc")?;
            let span = to - from;
            if !(span > 0.0 && span < 2.0 * PI) {
                return Err(Error::InvalidInput(format!(
                    "arc [{from}, {to}] must have length in (0, 2 pi)"
                )));
            }
            let c0 = r.center();
            for (nrm, off) in rect_sides(&r) {
                let keep = |i: usize| {
                    let c = grid.center(i);
                    let foot = c - nrm * (nrm.dot(c) - off);
                    let theta = (foot - c0).angle();
                    (theta - from).rem_euclid(2.0 * PI) <= span
                };
                add_line(&mut out, nrm, off, &keep);
            }
        }
        Boundary::Union(parts) => {
            for p in parts {
                out.extend(terminals(grid, p)?);
            }
        }
    }
    // A cell on several pieces keeps its smallest cap.
    out.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    out.dedup_by_key(|t| t.0);
    if out.is_empty() {
        return Err(Error::InvalidInput(format!("boundary {b:?} has no cells on this grid")));
    }
    Ok(out)
}

#[derive(PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct PathGraph<'a> {
    grid: &'a GridDomain,
    source: Vec<(usize, f64)>,
    sink_cap: Vec<f64>,
    /// `(dx, dy, step type)` for every admitted move.
    moves: Vec<(i64, i64, usize)>,
}

impl<'a> PathGraph<'a> {
    fn new(grid: &'a GridDomain, family: &FamilySpec) -> Result<Self> {
        if family.source == family.sink {
            return Err(Error::InvalidInput("source and sink must differ".into()));
        }
        let source = terminals(grid, &family.source)?;
        let mut sink_cap = vec![f64::INFINITY; grid.len()];
        for (i, cap) in terminals(grid, &family.sink)? {
            sink_cap[i] = cap;
        }
        let mut moves = vec![(1, 0, 0), (-1, 0, 0), (0, 1, 1), (0, -1, 1)];
        if family.connectivity == Connectivity::Diag {
            moves.extend([(1, 1, 2), (-1, -1, 2), (1, -1, 3), (-1, 1, 3)]);
        }
        Ok(Self {
            grid,
            source,
            sink_cap,
            moves,
        })
    }

    /// Shortest source-to-sink path under `rho`: its length and the
    /// coefficient of each cell's density in that length.
    fn shortest(&self, rho: &[f64]) -> (f64, Vec<(usize, f64)>) {
        let g = self.grid;
        let m = g.len();
        // Hildreth round-off can leave tiny negative densities; negative edge
        // costs would let Dijkstra close predecessor cycles.
        let rho: Vec<f64> = rho.iter().map(|r| r.max(0.0)).collect();
        let mut dist = vec![f64::INFINITY; m];
        let mut prev = vec![usize::MAX; m];
        let mut heap = BinaryHeap::new();
        for &(i, cap) in &self.source {
            let d = cap * rho[i];
            if d < dist[i] {
                dist[i] = d;
                heap.push(Item(d, i));
            }
        }
        while let Some(Item(d, i)) = heap.pop() {
            if d > dist[i] {
                continue;
            }
            let (ix, iy) = ((i % g.nx) as i64, (i / g.nx) as i64);
            for &(dx, dy, k) in &self.moves {
                let (jx, jy) = (ix + dx, iy + dy);
                if jx < 0 || jy < 0 || jx >= g.nx as i64 || jy >= g.ny as i64 {
                    continue;
                }
                let j = jy as usize * g.nx + jx as usize;
                if g.cell_area_weight[j] == 0.0 {
                    continue;
                }
                let nd = d + 0.5 * (g.step_length[i][k] * rho[i] + g.step_length[j][k] * rho[j]);
                if nd < dist[j] {
                    dist[j] = nd;
                    prev[j] = i;
                    heap.push(Item(nd, j));
                }
            }
        }
        let mut best = (f64::INFINITY, usize::MAX);
        for i in 0..m {
            if self.sink_cap[i].is_finite() && dist[i].is_finite() {
                let total = dist[i] + self.sink_cap[i] * rho[i];
                if total < best.0 {
                    best = (total, i);
                }
            }
        }
        let (length, end) = best;
        if end == usize::MAX {
            return (f64::INFINITY, Vec::new());
        }
        let mut coef: Vec<(usize, f64)> = vec![(end, self.sink_cap[end])];
        let mut j = end;
        while prev[j] != usize::MAX {
            let i = prev[j];
            let k = self.step_type(i, j);
            coef.push((j, 0.5 * g.step_length[j][k]));
            coef.push((i, 0.5 * g.step_length[i][k]));
            j = i;
        }
        let start_cap = self
            .source
            .iter()
            .find(|(i, _)| *i == j)
            .map(|t| t.1)
            .expect("path starts at a source cell");
        coef.push((j, start_cap));
        coef.sort_by_key(|c| c.0);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(coef.len());
        for (i, a) in coef {
            match merged.last_mut() {
                Some(last) if last.0 == i => last.1 += a,
                _ => merged.push((i, a)),
            }
        }
        merged.retain(|c| c.1 > 0.0);
        (length, merged)
    }

    fn step_type(&self, i: usize, j: usize) -> usize {
        let nx = self.grid.nx as i64;
        let (dx, dy) = ((j as i64 % nx) - (i as i64 % nx), (j as i64 / nx) - (i as i64 / nx));
        match (dx, dy) {
            (_, 0) => 0,
            (0, _) => 1,
            (a, b) if a == b => 2,
            _ => 3,
        }
    }
}

struct Constraint {
    coef: Vec<(usize, f64)>,
    /// `sum a_c^2 / w_c`.
    scale: f64,
    lambda: f64,
}

/// Hildreth sweeps for `min 1/2 sum w rho^2` s.t. `a_k . rho >= 1`, with
/// `rho = sum_k lambda_k a_k / w`. Returns the number of sweeps.
fn hildreth(cons: &mut [Constraint], w: &[f64], rho: &mut [f64], qp_tol: f64, feas_tol: f64) -> usize {
    let objective = |rho: &[f64]| rho.iter().zip(w).map(|(r, w)| w * r * r).sum::<f64>();
    let mut last = objective(rho);
    for sweep in 1..=100_000 {
        let mut worst = 0.0f64;
        for c in cons.iter_mut() {
            let s: f64 = c.coef.iter().map(|&(i, a)| a * rho[i]).sum();
            worst = worst.max(1.0 - s);
            let lam = (c.lambda + (1.0 - s) / c.scale).max(0.0);
            let d = lam - c.lambda;
            if d != 0.0 {
                for &(i, a) in &c.coef {
                    rho[i] += d * a / w[i];
                }
                c.lambda = lam;
            }
        }
        let obj = objective(rho);
        let change = (obj - last).abs() / obj.max(f64::MIN_POSITIVE);
        last = obj;
        if change < qp_tol && worst <= 0.1 * feas_tol {
            return sweep;
        }
    }
    100_000
}

/// Discrete 2-modulus of `family` on `grid`.
pub fn discrete_modulus(grid: &GridDomain, family: &FamilySpec, opts: &ModulusOptions) -> Result<ModulusResult> {
    if !(opts.feas_tol > 0.0 && opts.feas_tol < 1.0 && opts.qp_tol > 0.0) {
        return Err(Error::InvalidInput(
            "tolerances must be positive and feas_tol < 1".into(),
        ));
    }
    let graph = PathGraph::new(grid, family)?;
    let w = &grid.cell_area_weight;
    let max_iter = opts.max_iter.unwrap_or(10 * grid.n);
    let mut rho = vec![0.0; grid.len()];
    let mut cons: Vec<Constraint> = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let value = |rho: &[f64]| rho.iter().zip(w).map(|(r, w)| w * r * r).sum::<f64>();

    let mut iterations = 0;
    loop {
        let (len, coef) = graph.shortest(&rho);
        if !len.is_finite() {
            return Err(Error::InvalidInput("no admitted path joins source and sink".into()));
        }
        if len >= 1.0 - opts.feas_tol {
            let v = value(&rho);
            return Ok(ModulusResult {
                value: v,
                density: rho,
                iterations,
                constraint_count: cons.len(),
                min_path_length: len,
                upper_bound: v / len.min(1.0).powi(2),
            });
        }
        if iterations >= max_iter {
            let v = value(&rho);
            return Err(Error::SolverLimit {
                iterations,
                min_path_length: len,
                gap: v / (len * len) - v,
            });
        }
        iterations += 1;
        let key: Vec<usize> = coef.iter().map(|c| c.0).collect();
        if seen.insert(key) {
            let scale = coef.iter().map(|&(i, a)| a * a / w[i]).sum();
            cons.push(Constraint {
                coef,
                scale,
                lambda: 0.0,
            });
        }
        hildreth(&mut cons, w, &mut rho, opts.qp_tol, opts.feas_tol);
    }
}

/// Euclidean modulus of the image family over the field modulus, for a
/// constant field with affine uniformizer `nu`.
///
/// The image side is evaluated on the same grid with the pulled-back norm
/// `|nu x|`, whose Hausdorff weights are Lebesgue measure times `|det nu|`.
pub fn modulus_ratio(
    field: &NormField,
    family: &FamilySpec,
    domain: Domain,
    n: usize,
    rounding: &RoundingOptions,
    opts: &ModulusOptions,
) -> Result<ModulusComparison> {
    let body = field
        .constant_body()
        .ok_or_else(|| Error::InvalidInput("modulus_ratio needs a constant field".into()))?;
    let nu = affine_uniformizer(body, rounding)?;
    let field_grid = build_grid_with_norm(PlaneNorm::Body(body.clone()), domain, n)?;
    let image_grid = build_grid_with_norm(PlaneNorm::Linear(nu), domain, n)?;
    let field_mod = discrete_modulus(&field_grid, family, opts)?;
    let image_mod = discrete_modulus(&image_grid, family, opts)?;
    Ok(ModulusComparison {
        n,
        ratio: image_mod.value / field_mod.value,
        field: field_mod,
        euclidean: image_mod,
        uniformizer: nu,
    })
}

#[derive(Clone, Debug)]
pub struct ModulusComparison {
    pub n: usize,
    pub field: ModulusResult,
    pub euclidean: ModulusResult,
    pub ratio: f64,
    pub uniformizer: LinearMap2,
}
