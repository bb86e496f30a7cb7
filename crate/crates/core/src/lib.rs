//! Numerical laboratory for the curvature of cohomogeneity-one invariant
//! metrics on compact Lie groups: exact structure-constant algebra, warped
//! metric synthesis, Cheeger deformations, and Ricci-positivity criteria for
//! quotient spaces, cross-validated by independent curvature oracles.
//!
//! All core math is generic over the scalar type through [`scalar::Real`]
//! (`f32` or `f64`); the aliases below fix the default `f64` instantiations.

pub mod builder;
pub mod catalog;
pub mod cheeger;
pub mod cohom1;
pub mod error;
pub mod exec;
pub mod lie;
pub mod linalg;
pub mod oracle;
pub mod profile;
pub mod quotient;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

/// Default f64 instantiations.
pub type LieAlgebra = lie::LieAlgebra<f64>;
pub type BlockDecomposition = lie::BlockDecomposition<f64>;
pub type BiquotientSpec = lie::BiquotientSpec<f64>;
pub type WarpProfile = profile::WarpProfile<f64>;
pub type Form = profile::Form<f64>;
pub type Cohom1Metric = cohom1::Cohom1Metric<f64>;
pub type LeftInvariantMetric = oracle::LeftInvariantMetric<f64>;
pub type QuotientContext = quotient::QuotientContext<f64>;
pub type GroupPoint = quotient::GroupPoint<f64>;
pub type Scenario = catalog::Scenario<f64>;
pub type SamplingPlan = report::SamplingPlan<f64>;
pub type ChainMetric = cheeger::ChainMetric<f64>;
pub type SphereChainData = cheeger::SphereChainData<f64>;
pub type BuiltDiscProfile = builder::BuiltDiscProfile<f64>;
