//! # repi
//!
//! Rényi information measures on 1-D grid densities, with numerical
//! verification of Rényi entropy-power inequalities (REPIs), their optimal
//! constants, escort-distribution identities, and 1-D normal-transport
//! properties.
//!
//! ## Modules
//!
//! | Module | Provides |
//! |--------|----------|
//! | [`densities`] | Grid densities: analytic families, escorts, scaling, convolution, log-concavity |
//! | [`measures`] | Rényi entropies, entropy powers, divergences, conditional/relative entropies, varentropy |
//! | [`epi`] | EPI constants, the `A(λ)` functional, linearization, inequality checks |
//! | [`transport`] | Quantile transport of a standard normal, pushforwards, relative-entropy preservation |
//! | [`cli`] | Command-line driver behind the `repi` binary |
//!
//! ## Quick start
//!
//! ```rust
//! use repi::densities::{make_analytic, AnalyticFamily};
//! use repi::measures::{renyi_entropy, entropy_power};
//! use repi::order::RenyiOrder;
//!
//! let f = make_analytic(&AnalyticFamily::Gaussian { sigma: 1.0 }, 8192, 1e-10).unwrap();
//! let r = RenyiOrder::new(2.0).unwrap();
//! let h = renyi_entropy(&f, r).unwrap();
//! assert!((h - 0.5 * (4.0 * std::f64::consts::PI).ln()).abs() < 1e-6);
//! assert!((entropy_power(&f, r).unwrap() - 4.0 * std::f64::consts::PI).abs() < 1e-4);
//! ```
//!
//! Every density is normalized on construction; all integrals use the
//! trapezoid rule; density powers are taken in the log domain. Values are
//! immutable after construction and safe to share across threads.

pub mod cli;
pub mod densities;
pub mod epi;
pub mod error;
pub mod measures;
pub mod order;
pub mod transport;

pub use densities::{AnalyticFamily, GridDensity};
pub use error::{Error, Result};
pub use order::RenyiOrder;
