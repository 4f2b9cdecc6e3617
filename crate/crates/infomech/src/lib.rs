//! Welfare- and revenue-optimal mechanisms for selling information to two
//! competing buyers.
//!
//! A data seller observes a binary state and sells action recommendations to
//! two buyers who then compete in a binary product-choice game: matching the
//! state earns unit market share, a matching opponent costs `alpha` of it,
//! and each buyer's payoff scales her share by a private type. The seller
//! must elicit those types (truthfulness) and send recommendations the
//! buyers are willing to follow (obedience).
//!
//! The crate computes the closed-form welfare-optimal and revenue-optimal
//! mechanisms for this market, prices them with envelope payments, and
//! certifies both against independent brute-force oracles:
//!
//! - [`dist`] — type distributions with CDF/quantile/virtual-value analytics;
//! - [`game`] — the downstream game, its prior, and derived thresholds;
//! - [`mechanism`] — marginal recommendation rules, joint realization,
//!   obedience margins, interim shares (quadrature and closed form);
//! - [`optimal`] — the variational core, the generic constrained optimizer,
//!   and the four named rules;
//! - [`payments`] — envelope payments, individual rationality, and the
//!   welfare/revenue functionals;
//! - [`verify`] — discretized-grid optimization and exhaustive
//!   double-deviation search;
//! - [`cli`] — the `infomech` command-line front end.
//!
//! Start with the runnable examples (`cargo run --example thresholds`, then
//! `welfare_mechanism`, `revenue_mechanism`, `deviation_audit`, ...); each
//! one demonstrates a single capability end to end.
//!
//! All core types are immutable after construction and freely shareable
//! across threads; sweeps parallelize with plain data parallelism.

pub mod cli;
pub mod dist;
pub mod error;
pub mod game;
pub mod mechanism;
pub mod optimal;
pub mod payments;
mod quad;
pub mod verify;

pub use dist::TypeDistribution;
pub use error::{Error, Result};
pub use game::{ActionProfile, GameSpec, Player, State};
pub use mechanism::{
    closed_form_interim_share, interim_share, is_obedient, joint_from_marginals, obedience_margin,
    InterimShare, JointRecommendation, MarginalRule, Provenance, RuleKind, ThresholdRule,
};
pub use optimal::{
    first_best_revenue_rule, first_best_welfare_rule, master_solve, revenue_rule,
    variational_solve, welfare_rule, WeightSpec,
};
pub use payments::{
    check_individual_rationality, expected_revenue, expected_welfare, myerson_payment,
    revenue_optimal_payment, PaymentKind, PaymentSchedule,
};
pub use verify::{
    check_obedience_discrete, check_truthfulness_discrete, grid_optimize,
    search_double_deviations, DeviationMap, DeviationReport, DiscreteInstance,
};
