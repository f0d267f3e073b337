//! Iterative equilibrium solvers: XFP, CFR, CFR-BR and the Exploitability
//! Descent family, plus the run loop that evaluates them on a cadence.

mod cfr;
mod cfr_br;
mod ed;
mod run;
mod tracker;
mod xfp;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::best_response::{best_response, BestResponse};
use crate::game::{GameTree, Player};
use crate::policy::JointPolicy;
use crate::scalar::Real;
use crate::values::{counterfactual_values, ValueError, ValueReport};

pub use cfr::{regret_matching, Cfr};
pub use cfr_br::{CfrBr, LocalLearner};
pub use ed::{EdParams, EdVariant, ExploitabilityDescent};
pub use run::{build_solver, run, run_solver, Cadence, Init, RunOutput, SolverConfig};
pub use tracker::{BestIterate, BestIterateTracker, RegretMeter};
pub use xfp::Xfp;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Xfp,
    Cfr,
    CfrBr,
    CfrBrHedge,
    EdQL2,
    EdQcL2,
    EdQcSoftmax,
    EdQcMd,
    EdNeural,
}

impl Algorithm {
    pub const ALL: [Algorithm; 9] = [
        Algorithm::Xfp,
        Algorithm::Cfr,
        Algorithm::CfrBr,
        Algorithm::CfrBrHedge,
        Algorithm::EdQL2,
        Algorithm::EdQcL2,
        Algorithm::EdQcSoftmax,
        Algorithm::EdQcMd,
        Algorithm::EdNeural,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Xfp => "xfp",
            Algorithm::Cfr => "cfr",
            Algorithm::CfrBr => "cfr_br",
            Algorithm::CfrBrHedge => "cfr_br_hedge",
            Algorithm::EdQL2 => "ed_q_l2",
            Algorithm::EdQcL2 => "ed_qc_l2",
            Algorithm::EdQcSoftmax => "ed_qc_softmax",
            Algorithm::EdQcMd => "ed_qc_md",
            Algorithm::EdNeural => "ed_neural",
        }
    }

    /// Whether the solver reports its current iterate (and a best iterate)
    /// rather than an average policy.
    pub fn reports_current_iterate(self) -> bool {
        !matches!(self, Algorithm::Xfp | Algorithm::Cfr)
    }

    /// Whether the solver is driven by a step-size schedule.
    pub fn uses_step_size(self) -> bool {
        matches!(
            self,
            Algorithm::CfrBrHedge
                | Algorithm::EdQL2
                | Algorithm::EdQcL2
                | Algorithm::EdQcSoftmax
                | Algorithm::EdQcMd
                | Algorithm::EdNeural
        )
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| SolverError::Config(format!("unknown algorithm `{s}`")))
    }
}

/// Step size `α^t` for iteration `t ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StepSchedule {
    Constant(f64),
    /// `scale / sqrt(t)`.
    InvSqrt(f64),
}

impl StepSchedule {
    pub fn at(&self, t: usize) -> f64 {
        match *self {
            StepSchedule::Constant(a) => a,
            StepSchedule::InvSqrt(scale) => scale / (t.max(1) as f64).sqrt(),
        }
    }
}

impl fmt::Display for StepSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepSchedule::Constant(a) => write!(f, "{a}"),
            StepSchedule::InvSqrt(s) if *s == 1.0 => f.write_str("sqrt"),
            StepSchedule::InvSqrt(s) => write!(f, "sqrt:{s}"),
        }
    }
}

impl FromStr for StepSchedule {
    type Err = SolverError;

    /// Accepts `0.25`, `sqrt` or `sqrt:SCALE`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SolverError::Config(format!("invalid learning rate `{s}`"));
        let positive = |x: f64| if x.is_finite() && x > 0.0 { Ok(x) } else { Err(bad()) };
        if s == "sqrt" {
            return Ok(StepSchedule::InvSqrt(1.0));
        }
        if let Some(scale) = s.strip_prefix("sqrt:") {
            return Ok(StepSchedule::InvSqrt(positive(scale.parse().map_err(|_| bad())?)?));
        }
        Ok(StepSchedule::Constant(positive(s.parse().map_err(|_| bad())?)?))
    }
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("solver failed at iteration {iteration}")]
    Step {
        iteration: usize,
        #[source]
        source: ValueError,
    },
    #[error("{0}")]
    Config(String),
}

/// An iterative solver advancing one iteration per `step`.
pub trait Solver<T: Real> {
    fn algorithm(&self) -> Algorithm;

    /// Completed iterations.
    fn iteration(&self) -> usize;

    fn step(&mut self) -> Result<(), ValueError>;

    /// The policy the solver is currently playing.
    fn current_policy(&self) -> JointPolicy<T>;

    /// The policy whose NashConv is reported: the average for CFR and XFP,
    /// the current iterate otherwise.
    fn report_policy(&self) -> JointPolicy<T> {
        self.current_policy()
    }

    fn tracker(&self) -> Option<&BestIterateTracker<T>> {
        None
    }

    fn tracker_mut(&mut self) -> Option<&mut BestIterateTracker<T>> {
        None
    }
}

/// Both players' best responses to a fixed joint policy, and each player's
/// counterfactual values when facing the opponent's response.
pub(crate) struct ResponseRound<T> {
    /// `responses[i]`: best response of player i to `π_{-i}`.
    pub responses: [BestResponse<T>; 2],
    /// `cf[i]`: counterfactual values of player i in `(π_i, b_{-i})`.
    pub cf: [ValueReport<T>; 2],
}

impl<T: Real> ResponseRound<T> {
    pub fn compute(tree: &GameTree, joint: &JointPolicy<T>) -> Result<Self, ValueError> {
        let responses = [
            best_response(tree, &joint[Player::P1], Player::P0)?,
            best_response(tree, &joint[Player::P0], Player::P1)?,
        ];
        let cf0 = counterfactual_values(tree, &joint.with(responses[1].policy.clone()), Player::P0)?;
        let cf1 = counterfactual_values(tree, &joint.with(responses[0].policy.clone()), Player::P1)?;
        Ok(ResponseRound {
            responses,
            cf: [cf0, cf1],
        })
    }

    /// `w_i = v_i(π_i, b_{-i}) = -v_{-i}(b_{-i}, π_i)`.
    pub fn worst_case(&self) -> [T; 2] {
        [-self.responses[1].value, -self.responses[0].value]
    }

    pub fn response_to(&self, player: Player) -> &BestResponse<T> {
        &self.responses[player.opponent().index()]
    }
}

pub(crate) fn to_real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 converts to every real type")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.as_str().parse::<Algorithm>().unwrap(), a);
        }
        assert!("ed".parse::<Algorithm>().is_err());
    }

    #[test]
    fn schedules() {
        assert_eq!("0.5".parse::<StepSchedule>().unwrap(), StepSchedule::Constant(0.5));
        assert_eq!("sqrt".parse::<StepSchedule>().unwrap(), StepSchedule::InvSqrt(1.0));
        let s: StepSchedule = "sqrt:2".parse().unwrap();
        assert_eq!(s.at(4), 1.0);
        assert_eq!(s.to_string().parse::<StepSchedule>().unwrap(), s);
        assert!("-1".parse::<StepSchedule>().is_err());
        assert!("fast".parse::<StepSchedule>().is_err());
    }
}
