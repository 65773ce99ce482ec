//! Čebyšev functionals, the difference of two overlapping functionals, and
//! the closed-form bounds that control it.
//!
//! For integrable `f`, `g` on `[a, b]` the Čebyšev functional is
//!
//! ```text
//! T(f,g) = 1/(b-a) ∫ f·g  −  (1/(b-a) ∫ f) · (1/(b-a) ∫ g)
//! ```
//!
//! This crate computes `T` and the difference `|T_a^v(f,g) − T_u^b(f,g)|`
//! over two overlapping subintervals by adaptive Gauss–Kronrod quadrature,
//! evaluates the analytic bounds on that difference for the classical
//! function classes (bounded variation, Lipschitz, Hölder, absolutely
//! continuous with `f′ ∈ L_p`), and empirically verifies each inequality
//! over randomized function corpora.
//!
//! # Quick start
//!
//! ```
//! use cheb_core::func::FunctionSpec;
//! use cheb_core::functional::chebyshev_functional;
//!
//! let f = FunctionSpec::parse("x", (0.0, 1.0)).unwrap();
//! let g = FunctionSpec::parse("x^2", (0.0, 1.0)).unwrap();
//! let t = chebyshev_functional(&f, &g, 0.0, 1.0, 1e-10).unwrap();
//! assert!((t.value - (0.25 - 0.5 / 3.0)).abs() < 1e-9);
//! ```
//!
//! The `cheb` binary exposes the same operations as `eval`, `bound`,
//! `verify` and `report` subcommands.

pub mod analyze;
pub mod bounds;
pub mod cli;
pub mod expr;
pub mod func;
pub mod functional;
pub mod quad;
pub mod verify;

/// Default absolute tolerance for adaptive quadrature.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Default cap on integrand evaluations for a single quadrature call.
///
/// Override at runtime with the `CHEB_BUDGET` environment variable.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Evaluation budget honoring the `CHEB_BUDGET` environment variable.
pub fn budget_from_env() -> u64 {
    std::env::var("CHEB_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}
