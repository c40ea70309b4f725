//! Closed-form solutions of time-dependent Lindblad master equations.
//!
//! When the generator L(t) commutes with its time integral B(t) on an
//! invariant subspace M, the solution starting in M is exp(B(t))ρ₀.
//! [`commutativity`] finds M, [`solver`] propagates in closed form and
//! checks the result against an adaptive Runge–Kutta oracle, and
//! [`observables`] turns trajectories into populations, purity, entropy
//! and coherences.

pub mod cli;
pub mod commutativity;
pub mod expr;
pub mod linalg;
pub mod model;
pub mod observables;
pub mod solver;
pub mod state;
