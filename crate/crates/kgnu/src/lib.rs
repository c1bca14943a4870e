//! Bound states of the one-dimensional Klein-Gordon equation with equal
//! scalar and vector potentials of the q-deformed Rosen-Morse type.
//!
//! The closed-form route (a Nikiforov-Uvarov style reduction to a
//! hypergeometric equation, quantized energies, Jacobi-polynomial
//! wavefunctions) is implemented next to an independent finite-difference
//! eigensolver so that every closed-form level can be cross-checked
//! numerically.

pub mod kg_core;
pub mod nu_engine;
pub mod oracle;
pub mod orthopoly;
pub mod qhyper;
pub mod variants;

pub use kg_core::{BoundState, Exponents, KGProblem, ReducedParams, SolverConfig};
pub use oracle::{GridSpec, OracleConfig, OracleResult};
pub use qhyper::{DeformationQ, PotentialParams};
pub use variants::VariantSpec;
