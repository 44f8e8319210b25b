//! f-divergences between the cone-measure densities of convex bodies.
//!
//! The core is generic over the scalar type (`f64`, `f32`); the aliases at the
//! bottom fix it to `f64` for everyday use.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod body;
pub mod error;
pub mod extended;
pub mod generator;
pub mod linalg;
pub mod divergence;
pub mod measure;
pub mod quadrature;
pub mod scalar;
pub mod surface_body;
pub mod verify;

pub use body::{BodyKind, BoundaryPoint, ConvexBody, Ellipsoid, Halfspace, Polytope, RoundedPolygon, Smooth2d};
pub use divergence::{
    f_divergence, f_divergence_with, hellinger, kl_divergence, lp_asa, lpsi_asa, mixed_divergence, renyi, Branch,
    Direction, DivergenceResult, Normalization,
};
pub use error::{Error, Result};
pub use extended::Extended;
pub use generator::{Generator, StandardKind};
pub use linalg::Matrix;
pub use quadrature::{Estimate, QuadratureConfig};
pub use scalar::Scalar;
pub use surface_body::{LadderConfig, LimitEstimate, Weight, WeightedBody};
pub use verify::Report;

pub type Body = ConvexBody<f64>;
pub type Gen = Generator<f64>;
