//! Detectability of topology changes in networked linear systems.
//!
//! A network of `N` identical nodes `x_i' = A x_i + sum_j w_ij H x_j` is
//! observed through `y_i = C x_i` at a subset of nodes. When the weights change
//! from `L` to `L_bar`, [`discern`] decides whether some pair of initial states
//! can still produce identical sensor outputs, and [`sim`] replays such pairs.

pub mod atlas;
pub mod discern;
pub mod error;
pub mod fixtures;
pub mod jordan;
pub mod model;
pub mod numlin;
pub mod sim;

pub use error::{Error, Result};
pub use model::{AssembledPair, Edge, MultiAgentSpec, NetworkSpec};
pub use numlin::{Subspace, DEFAULT_TOL};
