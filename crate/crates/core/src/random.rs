//! Seeded random symmetric polygons.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{SymmetricConvexBody, Vec2};

const MAX_ATTEMPTS: u64 = 64;

/// Convex hull by monotone chain, CCW, collinear points dropped.
pub fn convex_hull(points: &[Vec2]) -> Vec<Vec2> {
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: Vec2, a: Vec2, b: Vec2| (a - o).cross(b - o);
    let mut hull: Vec<Vec2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Vec2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// `k` points from the upper half of the unit square, reflected through the
/// origin, convex hull taken. Degenerate draws are redrawn on the next
/// substream of the same seed.
pub fn random_body(seed: u64, k: usize) -> Result<SymmetricConvexBody> {
    if k < 3 {
        return Err(Error::InvalidInput(format!("random_body needs k >= 3, got {k}")));
    }
    let mut last_err = None;
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt);
        let mut pts = Vec::with_capacity(2 * k);
        for _ in 0..k {
            let p = Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(0.0..1.0));
            pts.push(p);
            pts.push(-p);
        }
        match SymmetricConvexBody::polygon(convex_hull(&pts)) {
            Ok(b) => return Ok(b),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = random_body(1, 4).unwrap();
        let b = random_body(1, 4).unwrap();
        assert_eq!(a.vertices(), b.vertices());
        assert_ne!(a.vertices(), random_body(2, 4).unwrap().vertices());
    }

    #[test]
    fn hull_of_square_with_interior_points() {
        let pts = [
            Vec2::new(1.0, 1.0),
            Vec2::new(-1.0, 1.0),
            Vec2::new(0.0, 0.0),
            Vec2::new(-1.0, -1.0),
            Vec2::new(1.0, -1.0),
            Vec2::new(1.0, 0.0),
        ];
        let h = convex_hull(&pts);
        assert_eq!(h.len(), 4);
        let area: f64 = (0..4).map(|i| h[i].cross(h[(i + 1) % 4])).sum::<f64>() / 2.0;
        assert_eq!(area, 4.0);
    }

    #[test]
    fn outputs_are_valid_and_round_enough() {
        for seed in 0..2000 {
            let b = random_body(seed, 3 + (seed as usize % 10)).unwrap();
            assert!(b.inner_radius() / b.outer_radius() >= 1e-6);
        }
    }

    #[test]
    fn rejects_small_k() {
        assert!(random_body(0, 2).is_err());
    }
}
