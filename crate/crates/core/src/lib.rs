//! Banach–Mazur rounding of planar symmetric convex bodies.
//!
//! For a symmetric convex body `A` the crate finds the linear map `T`
//! minimizing `L(TA) / l(TA)`, the ratio of outer to inner radius, certifies
//! the minimizer by its contact pattern, and derives from it the canonical
//! ellipse, area bounds, dilatation factors and Beltrami coefficients. A
//! discrete conformal-modulus solver compares curve families in a normed
//! plane with their Euclidean images.
//!
//! ```
//! use bmround::banach_mazur::{minimize_ratio, RoundingOptions};
//! use bmround::geometry::SymmetricConvexBody;
//!
//! let square = SymmetricConvexBody::square();
//! let r = minimize_ratio(&square, &RoundingOptions::default()).unwrap();
//! assert!((r.rho - 2f64.sqrt()).abs() < 1e-9);
//! assert!(r.certified);
//! ```

pub mod banach_mazur;
pub mod ellipse_field;
pub mod envelopes;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod io;
pub mod modulus;
pub mod optimize;
pub mod random;
pub mod svg;

pub use banach_mazur::{minimize_ratio, RoundingOptions, RoundingResult};
pub use error::{Error, Result};
pub use geometry::{Ellipse, LinearMap2, SymmetricConvexBody, Vec2};
