//! Rate-distortion-cost tradeoffs for source coding with action-dependent
//! side information.
//!
//! A "vending machine" setting: before (or while) decoding, actions are
//! taken that shape the quality of the side information, at a per-action
//! cost. This crate computes the resulting rate-distortion-cost functions
//! for finite alphabets, the classical baselines they are compared
//! against, and the encoder-side-action variants, including the
//! quadratic-Gaussian closed form.
//!
//! Layout:
//! - [`prob`], [`info`], [`joint`]: probability containers and information
//!   measures (base-2 throughout);
//! - [`solver`]: generic minimization of the information functionals over
//!   products of simplices, with Lagrangian sweeps, constrained point
//!   queries, and an exhaustive grid oracle;
//! - [`classic`]: Blahut-Arimoto rate-distortion and capacity-cost,
//!   Slepian-Wolf, Wyner-Ziv, erased-side-information closed form;
//! - [`decoder`], [`encoder`]: the operational functions per setting;
//! - [`instances`]: builders for the worked examples.

pub mod classic;
pub mod decoder;
pub mod encoder;
pub mod error;
pub mod info;
pub mod instances;
pub mod joint;
pub mod prob;
pub mod solver;
pub mod spec;

pub use classic::{
    capacity_with_cost, erased_si_wz, joint_from_channel, rd_function, slepian_wolf_rate,
    wyner_ziv_rate, ChannelSpec,
};
pub use decoder::{
    greedy_rate, lossless_policy_unconstrained, lossless_rate_decoder, rdc_causal, rdc_decoder,
    rdc_independent, rdc_indirect, timeshare_bound,
};
pub use encoder::{encoder_bounds, encoder_lossless_rate, gaussian_rdc, markov_rdc, BoundsReport, GaussianSpec};
pub use error::{Result, VendError};
pub use info::{bernoulli_rd, binary_entropy, entropy, ZERO_FLOOR};
pub use joint::{factorize, JointDist};
pub use prob::{CostVector, DistortionMatrix, ProbVector, StochasticKernel, MASS_TOL};
pub use solver::{
    constrained_rate, evaluate_policy, grid_oracle, grid_oracle_refined, grid_oracle_with_budget,
    min_distortion, minimize_instance, minimize_lagrangian, sweep_tradeoff, CurvePoint, Eval,
    Instance, LagrangeWeights, Objective, PolicyPoint, SolverConfig, SupportPoint, TradeoffCurve,
};
pub use spec::{Mode, ProblemSpec};
