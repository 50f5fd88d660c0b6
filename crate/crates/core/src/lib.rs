//! Exact solvers for equilibria and fixed points.
//!
//! Every solver works over arbitrary-precision rationals and returns a
//! certificate that can be re-checked independently. The modules follow
//! the three broad families of problems handled here:
//!
//! * local search with a potential: [`local_search`]
//! * path following on polytopes and triangulations: [`path_following`]
//! * algebraic fixed points: [`stochastic`], [`lfp`] and [`circuits`]
//!
//! The [`exact`] module supplies the shared arithmetic (linear systems,
//! simplex, matrix games, rational reconstruction) and [`normal_form`]
//! the game model used across the crate.

pub mod circuits;
pub mod error;
pub mod exact;
pub mod lfp;
pub mod local_search;
pub mod normal_form;
pub mod path_following;
pub mod stochastic;

pub use error::{Error, Partial, Result};
pub use exact::{rat, Rational};
