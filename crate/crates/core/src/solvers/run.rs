use std::time::Instant;

use crate::best_response::exploitability_report;
use crate::game::{GameTree, Player};
use crate::harness::ConvergenceRecord;
use crate::neural::{NeuralConfig, NeuralEd};
use crate::policy::{JointPolicy, LogitTable};
use crate::solvers::{
    Algorithm, Cfr, CfrBr, EdVariant, ExploitabilityDescent, LocalLearner, Solver, SolverError, StepSchedule, Xfp,
};
use crate::values::ZeroMass;

/// Which iterations produce a record.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Cadence {
    /// 1, 2, 4, 8, … and the final iteration.
    #[default]
    PowersOfTwo,
    /// Every multiple of `k`.
    Every(usize),
}

impl Cadence {
    pub fn emits(&self, t: usize, total: usize) -> bool {
        match *self {
            Cadence::PowersOfTwo => t.is_power_of_two() || t == total,
            Cadence::Every(k) => k > 0 && t % k == 0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub enum Init {
    #[default]
    Uniform,
    /// Initial logits for the tabular ED variants.
    Logits(Box<[LogitTable<f64>; 2]>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub iterations: usize,
    pub schedule: StepSchedule,
    pub cadence: Cadence,
    pub init: Init,
    pub zero_mass: ZeroMass,
    pub neural: NeuralConfig,
    /// Network initialization seed.
    pub seed: u64,
    /// Write zero wall times so repeated runs are byte-identical.
    pub deterministic: bool,
}

impl SolverConfig {
    pub const DEFAULT_SEED: u64 = 0x5eed;

    pub fn new(algorithm: Algorithm, iterations: usize) -> Self {
        SolverConfig {
            algorithm,
            iterations,
            schedule: StepSchedule::Constant(Self::default_step_size(algorithm)),
            cadence: Cadence::PowersOfTwo,
            init: Init::Uniform,
            zero_mass: ZeroMass::Error,
            neural: NeuralConfig::default(),
            seed: Self::DEFAULT_SEED,
            deterministic: false,
        }
    }

    /// Constant step sizes that work across the benchmark games.
    pub fn default_step_size(algorithm: Algorithm) -> f64 {
        match algorithm {
            Algorithm::EdQL2 | Algorithm::EdQcL2 => 0.1,
            Algorithm::EdNeural => 0.05,
            _ => 1.0,
        }
    }
}

pub struct RunOutput {
    pub records: Vec<ConvergenceRecord>,
    /// Final current iterate.
    pub current: JointPolicy<f64>,
    /// Final reported policy (average for CFR and XFP).
    pub report: JointPolicy<f64>,
    /// Best iterate, for solvers that track one.
    pub best: Option<JointPolicy<f64>>,
}

pub fn build_solver<'a>(tree: &'a GameTree, config: &SolverConfig) -> Result<Box<dyn Solver<f64> + 'a>, SolverError> {
    let logits = match &config.init {
        Init::Uniform => None,
        Init::Logits(l) => Some((**l).clone()),
    };
    if logits.is_some() && EdVariant::from_algorithm(config.algorithm).is_none() {
        return Err(SolverError::Config(format!(
            "initial logits are only supported by the tabular ED variants, not {}",
            config.algorithm
        )));
    }
    Ok(match config.algorithm {
        Algorithm::Xfp => Box::new(Xfp::new(tree)),
        Algorithm::Cfr => Box::new(Cfr::new(tree)),
        Algorithm::CfrBr => Box::new(CfrBr::new(tree, LocalLearner::RegretMatching)),
        Algorithm::CfrBrHedge => match config.schedule {
            StepSchedule::Constant(a) => Box::new(CfrBr::new(tree, LocalLearner::Hedge { temperature: 1.0 / a })),
            StepSchedule::InvSqrt(_) => {
                return Err(SolverError::Config("cfr_br_hedge needs a constant learning rate".into()))
            }
        },
        Algorithm::EdNeural => Box::new(NeuralEd::new(tree, &config.neural, config.schedule, config.seed)),
        ed => {
            let variant = EdVariant::from_algorithm(ed).expect("remaining ids are tabular ED");
            let solver = match logits {
                Some(l) => ExploitabilityDescent::from_logits(tree, variant, config.schedule, l),
                None => ExploitabilityDescent::new(tree, variant, config.schedule),
            };
            Box::new(solver.with_zero_mass(config.zero_mass))
        }
    })
}

/// Runs `config.iterations` iterations, recording NashConv on the cadence.
pub fn run(tree: &GameTree, config: &SolverConfig) -> Result<RunOutput, SolverError> {
    let mut solver = build_solver(tree, config)?;
    run_solver(solver.as_mut(), tree, config.iterations, config.cadence, config.deterministic)
}

pub fn run_solver(
    solver: &mut dyn Solver<f64>,
    tree: &GameTree,
    iterations: usize,
    cadence: Cadence,
    deterministic: bool,
) -> Result<RunOutput, SolverError> {
    let start = Instant::now();
    let mut records = Vec::new();
    for t in 1..=iterations {
        solver
            .step()
            .map_err(|source| SolverError::Step { iteration: t, source })?;
        if !cadence.emits(t, iterations) {
            continue;
        }
        let policy = solver.report_policy();
        let rep = exploitability_report(tree, &policy).map_err(|source| SolverError::Step { iteration: t, source })?;
        let best_iter_nashconv = solver.tracker_mut().map(|tracker| {
            let w = [-rep.best_response_values[1], -rep.best_response_values[0]];
            tracker.observe_joint(t, &policy, w);
            tracker.nash_conv().expect("both players observed")
        });
        let wall_ms = if deterministic {
            0
        } else {
            start.elapsed().as_millis() as u64
        };
        records.push(ConvergenceRecord {
            iteration: t,
            nashconv: rep.exploitability[0] + rep.exploitability[1],
            exploitability_p0: rep.exploitability[0],
            exploitability_p1: rep.exploitability[1],
            best_iter_nashconv,
            value_p0: rep.values[Player::P0.index()],
            wall_ms,
        });
    }
    Ok(RunOutput {
        records,
        current: solver.current_policy(),
        report: solver.report_policy(),
        best: solver.tracker().and_then(|t| t.joint()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::load_tree;

    #[test]
    fn zero_iterations_return_the_initial_policy() {
        let tree = load_tree("kuhn").unwrap();
        let out = run(&tree, &SolverConfig::new(Algorithm::EdQcSoftmax, 0)).unwrap();
        assert!(out.records.is_empty());
        assert_eq!(out.current, JointPolicy::uniform(&tree));
    }

    #[test]
    fn cadence_arithmetic() {
        let tree = load_tree("kuhn").unwrap();
        let mut cfg = SolverConfig::new(Algorithm::Cfr, 1000);
        cfg.cadence = Cadence::Every(10);
        let out = run(&tree, &cfg).unwrap();
        assert_eq!(out.records.len(), 100);
        assert!(out.records.windows(2).all(|w| w[0].iteration < w[1].iteration));
        cfg.cadence = Cadence::PowersOfTwo;
        cfg.iterations = 100;
        let its: Vec<usize> = run(&tree, &cfg).unwrap().records.iter().map(|r| r.iteration).collect();
        assert_eq!(its, vec![1, 2, 4, 8, 16, 32, 64, 100]);
    }

    #[test]
    fn step_errors_carry_the_iteration() {
        let tree = load_tree("kuhn").unwrap();
        let cfg = SolverConfig::new(Algorithm::EdQL2, 50);
        match run(&tree, &cfg) {
            Err(SolverError::Step { iteration, .. }) => assert!(iteration >= 1),
            other => panic!("expected a step error, got {:?}", other.map(|o| o.records.len())),
        }
    }

    #[test]
    fn best_iterate_is_bounded_by_current_minimum() {
        let tree = load_tree("kuhn").unwrap();
        let out = run(&tree, &SolverConfig::new(Algorithm::CfrBr, 200)).unwrap();
        let mut running_min = f64::INFINITY;
        let mut last_best = f64::INFINITY;
        for r in &out.records {
            running_min = running_min.min(r.nashconv);
            let b = r.best_iter_nashconv.unwrap();
            assert!(b <= running_min + 1e-12);
            assert!(b <= last_best + 1e-12);
            last_best = b;
        }
        assert!(out.best.is_some());
    }

    #[test]
    fn logits_rejected_for_non_ed() {
        let tree = load_tree("kuhn").unwrap();
        let mut cfg = SolverConfig::new(Algorithm::Cfr, 1);
        cfg.init = Init::Logits(Box::new(Player::BOTH.map(|p| LogitTable::zeros(&tree, p))));
        assert!(matches!(build_solver(&tree, &cfg), Err(SolverError::Config(_))));
    }
}
