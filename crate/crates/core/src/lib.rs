//! Expected-goals (xG) modelling for football shot event data.
//!
//! The crate covers the whole pipeline: StatsBomb open-data ingestion
//! ([`ingest`]), shot feature engineering and design matrices ([`features`]),
//! prior kernels ([`dists`]), frequentist logistic fits ([`glm`]), hierarchical
//! Bayesian models sampled with adaptive HMC ([`bayes`]), evaluation and
//! experiment reports ([`analysis`]) and a synthetic data generator with known
//! ground truth ([`synth`]).

pub mod analysis;
pub mod bayes;
pub mod csvfmt;
pub mod dists;
pub mod error;
pub mod features;
pub mod glm;
pub mod ingest;
pub mod model_spec;
pub mod shot;
pub mod synth;

pub use error::{Error, Result};
