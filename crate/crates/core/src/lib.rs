//! Exploitability Descent and baseline equilibrium solvers for two-player
//! zero-sum extensive-form games.
//!
//! The evaluation stack ([`values`], [`best_response`], [`policy`]) is
//! generic over [`scalar::Scalar`], so it runs in `f64` for speed or in
//! exact rationals for checks. Solvers and the neural module are generic
//! over [`scalar::Real`].

pub mod best_response;
pub mod game;
pub mod games;
pub mod harness;
pub mod neural;
pub mod policy;
pub mod scalar;
pub mod solvers;
pub mod values;

use num_rational::Rational64;

pub type Policy = policy::TabularPolicy<f64>;
pub type ExactPolicy = policy::TabularPolicy<Rational64>;
pub type Joint = policy::JointPolicy<f64>;
pub type ExactJoint = policy::JointPolicy<Rational64>;
pub type Logits = policy::LogitTable<f64>;
pub type Network = neural::Mlp<f64>;
