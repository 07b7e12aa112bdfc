//! Differentiable template-based performance fitting.
//!
//! Given a rigged template, calibrated cameras, and per-frame observations
//! (silhouettes, 2D keypoints, point clouds, images), this crate recovers
//! skeletal pose, embedded-graph deformation, and a rigidity-masked vertex
//! displacement field by staged per-frame energy minimization, and registers
//! parametric face/hand models into the template.
//!
//! Everything numeric is generic over the scalar type ([`scalar::Real`]);
//! concrete `f64` aliases for the main entry types live at the crate root.

pub mod error;
pub mod geometry;
pub mod math;
pub mod scalar;
pub mod template;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` aliases for the main entry types.
pub type Mesh64 = geometry::Mesh<f64>;
pub type Skeleton64 = geometry::Skeleton<f64>;
pub type Pose64 = geometry::Pose<f64>;
pub type Template64 = template::Template<f64>;
