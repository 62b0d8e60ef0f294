//! Geometry kernel for the three simply connected surfaces of constant
//! curvature: the sphere (`κ > 0`), the Euclidean plane (`κ = 0`) and the
//! hyperbolic plane (`κ < 0`).
//!
//! All three are modelled in one 3-coordinate embedding (sphere of radius
//! `1/√κ`, upper sheet of the hyperboloid `x² + y² − z² = 1/κ`, affine slice
//! `z = 1`), so geodesics are always intersections with planes through the
//! origin and isometries are 3×3 matrices.
//!
//! Modules, bottom-up:
//! - [`surface`]: points, distances, discs, generalized trigonometry, isometries
//!   and Haar-style isometry sampling.
//! - [`convex`]: geodesically convex polygons (hull, area, perimeter,
//!   containment, clipping, boundary crossings).
//! - [`radii`]: circumradius and inradius.
//! - [`kinematics`]: Monte Carlo kinematic integrals, containment search.
//! - [`bonnesen`]: isoperimetric deficits, Bonnesen-type bounds and the
//!   quadratic root witnesses behind them.
//! - [`cli`]: campaign runner, body files and reports.

pub mod bodies;
pub mod bonnesen;
pub mod cli;
pub mod convex;
pub mod error;
pub mod kinematics;
pub mod par;
pub mod radii;
pub mod rng;
pub mod surface;

pub use convex::{EulerNumber, GeodesicPolygon};
pub use error::{Error, Result};
pub use radii::BodyMetrics;
pub use rng::RandomStream;
pub use surface::{Curvature, Isometry, Regime, SurfacePoint};

/// Absolute tolerance (length units) shared by every geometric predicate.
pub const GEOM_TOL: f64 = 1e-9;
