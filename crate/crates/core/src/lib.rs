//! Fuzzy numbers, fuzzy preference relations, fuzzy games and pure exchange
//! economies whose agents rank bundles by fuzzy utilities.
//!
//! Every comparison goes through the expected value of a fuzzy number, so the
//! heavy lifting reduces to crisp problems: Nash equilibria of the
//! expected-payoff game and competitive equilibria of the expected-utility
//! economy. The [`oracle`] module holds brute-force checks for the latter.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod economy;
pub mod error;
pub mod fuzzy;
pub mod game;
mod linalg;
pub mod oracle;
pub mod preference;
pub mod simplex;

pub use economy::{
    closed_form_equilibrium, corner_analysis, demand, excess_demand, solve_equilibrium, utility_gain_closed_form,
    verify_equilibrium, ConstSign, Economy, EquilibriumReport, FuzzyQuadraticUtility, Method, PriceVector,
    SolverConfig, Verification,
};
pub use error::{Error, Result};
pub use fuzzy::{compare_values, fuzzy_max, fuzzy_sum, FuzzyNumber, Level, OrderOutcome, Trapezoid, DEFAULT_TOL};
pub use game::{ExpectedGame, FuzzyGame, MixedNashSolution, MixedProfile, NashReport};
pub use oracle::{grid_demand, grid_equilibrium, GridDemand, GridEquilibrium, GridSpec};
pub use preference::{Element, FuzzyRelation, PreferenceOutcome, Quotient};
