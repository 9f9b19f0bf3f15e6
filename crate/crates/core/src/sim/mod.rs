//! Sampling, enumeration and aggregation over the code ensemble.

pub mod enumerate;
pub mod exhaustive;
pub mod matrix;
pub mod montecarlo;
pub mod sample;

pub use enumerate::{enumerate_weights, low_weight_dmin, WeightEnumeration, DEFAULT_ENUM_CAP};
pub use exhaustive::{configuration_count, exhaustive_ensemble, DEFAULT_CONFIG_CAP};
pub use matrix::Matrix;
pub use montecarlo::{
    monte_carlo, monte_carlo_with_filter, small_dmin_rate, FilteredStats, MonteCarloConfig,
    ProbEstimate, SimReport, SpectrumEstimate,
};
pub use sample::{derive_seed, sample_code, sample_code_with, CodeFilter, CodeSample, NoZeroColumn};
