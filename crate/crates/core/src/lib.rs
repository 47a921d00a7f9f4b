//! Monte Carlo study of the l1-norm coherence of Haar-random pure states
//! (real and complex fields) and its response to quenched disorder.
//!
//! The numerical core (`states`, `coherence`, `quadrature`, `statistics`) is
//! generic over [`Scalar`]; `experiments` and `cli` run in `f64`.

// `!(x > 0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod coherence;
pub mod disorder;
pub mod error;
pub mod experiments;
pub mod quadrature;
pub mod sampling;
pub mod scalar;
pub mod states;
pub mod statistics;

pub use coherence::{analytic_mean, l1_coherence, CoherenceValue};
pub use disorder::{DisorderSpec, Target};
pub use error::{Error, Result};
pub use sampling::{Family, RngStream, ScalarDistribution};
pub use scalar::Scalar;
pub use states::{Field, PureState};

pub type PureStateF64 = states::PureState<f64>;
pub type PureStateF32 = states::PureState<f32>;
pub type CoherenceF64 = coherence::CoherenceValue<f64>;
pub type AccumulatorF64 = statistics::MomentAccumulator<f64>;
pub type AccumulatorF32 = statistics::MomentAccumulator<f32>;
pub type SummaryF64 = statistics::SummaryStats<f64>;
pub type ExpFitF64 = statistics::ExpFitResult<f64>;
pub type PolarPointF64 = quadrature::PolarPoint<f64>;
pub type DistributionF64 = sampling::ScalarDistribution<f64>;
