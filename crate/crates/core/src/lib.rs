//! Weibull-based models of baseball run scoring: the closed-form Pythagorean
//! win probability, per-team parameter fitting from binned game logs,
//! statistical validation of the model's assumptions, and the win value of
//! marginal runs.
//!
//! The model: per-game runs scored and allowed are independent draws from
//! Weibull distributions sharing a shift `β` (−1/2 in applications, centering
//! integer scores in unit bins) and shape `γ`, with scales chosen to match
//! the observed means. The probability of outscoring the opponent then has
//! the closed form `(RS−β)^γ / ((RS−β)^γ + (RA−β)^γ)`, the Pythagorean
//! formula with exponent `γ`.
//!
//! Modules:
//! - [`weibull`]: the distribution, its moments, and the win probability
//! - [`gamma`]: Γ, ln Γ, incomplete gamma, χ² quantiles
//! - [`binning`]: bin schemes, observed counts, model areas
//! - [`fit`]: least-squares and maximum-likelihood per-team fits
//! - [`inference`]: z-tests, χ² goodness of fit, quasi-independence with
//!   structural zeros
//! - [`predictor`]: predicted wins, marginal run value, the linear predictor
//! - [`sim`]: seeded Monte Carlo matchups and synthetic seasons
//! - [`ingest`]: game-log CSV parsing and season aggregation
//! - [`report`]: full-season orchestration and report emission

pub mod binning;
pub mod error;
pub mod fit;
pub mod gamma;
pub mod inference;
pub mod ingest;
pub mod optim;
pub mod predictor;
pub mod report;
pub mod sim;
pub mod weibull;

pub use error::{Error, Result};
pub use weibull::{alpha_from_mean, log5, pythag_wp, MatchupParams, WeibullParams};
