//! Numerical and exact tools for the curvature that concentrates at branch
//! points of degenerating surfaces in R^4: boundary links and braids,
//! curvature quadrature, Gauss-map degree defects and closed-form invariants.

pub mod braid;
pub mod corpus;
pub mod curvature;
pub mod error;
pub mod exact;
pub mod ingest;
pub mod invariants;
pub mod link;
pub mod linalg;
pub mod pipeline;
pub mod quadrature;
pub mod roots;
pub mod scalar;
pub mod scan;
pub mod scenario;
pub mod surface;
pub mod twistor;

pub use error::{FalloutError, Result};
pub use scalar::Real;

/// Double-double scalar used by the extended precision path.
pub type Dd = twofloat::TwoFloat;

pub type NumDisk64 = surface::NumDisk<f64>;
pub type NumDiskDd = surface::NumDisk<Dd>;
pub type FramedLink64 = link::FramedLink<f64>;
pub type FramedLinkDd = link::FramedLink<Dd>;
pub type Jet64 = surface::Jet<f64>;
