//! Policy representations and the per-infostate update algebra: simplex
//! projection, softmax transfer and the softmax policy-gradient direction.

mod io;
mod simplex;
mod tabular;

use thiserror::Error;

pub use io::{PolicyDocument, PolicyTable, POLICY_FORMAT, POLICY_VERSION};
pub use simplex::{pg_update_direction, project_l2_simplex, softmax, SimplexVector};
pub use tabular::{realization_mix, uniform_policy, JointPolicy, LogitTable, TabularPolicy};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolicyError {
    #[error("vector is not a probability distribution: {0}")]
    NotOnSimplex(String),
    #[error("non-finite input")]
    NonFinite,
    #[error("policy shape mismatch: {0}")]
    Shape(String),
    #[error("policy is missing infostate {0}")]
    MissingInfostate(String),
    #[error("policy file is for game `{found}`, expected `{expected}`")]
    WrongGame { expected: String, found: String },
    #[error("malformed policy document: {0}")]
    Malformed(String),
}
