use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::games::{load_tree, GameId};
use crate::harness::{Curve, HarnessError};
use crate::neural::{InitScheme, NeuralConfig};
use crate::solvers::{run, Algorithm, Cadence, RunOutput, SolverConfig, StepSchedule};
use crate::values::ZeroMass;

/// Everything needed to reproduce one run and write its artifacts.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub game: GameId,
    pub solver: SolverConfig,
    pub out: Option<PathBuf>,
    pub policy_out: Option<PathBuf>,
}

/// Keys accepted in config files and their command-line equivalents.
pub const CONFIG_KEYS: [&str; 14] = [
    "game",
    "algorithm",
    "iterations",
    "eval_every",
    "lr",
    "out",
    "policy_out",
    "seed",
    "deterministic",
    "zero_mass",
    "hidden_layers",
    "hidden_width",
    "weight_decay",
    "init",
];

/// Parses `key = value` lines. Blank lines and `#` comments are skipped;
/// dashes in keys are read as underscores.
pub fn parse_settings(text: &str) -> Result<BTreeMap<String, String>, HarnessError> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| HarnessError::Config(format!("line {}: expected key = value", n + 1)))?;
        let key = k.trim().replace('-', "_");
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(HarnessError::Config(format!("line {}: unknown key `{key}`", n + 1)));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, HarnessError> {
    v.parse()
        .map_err(|_| HarnessError::Config(format!("invalid value `{v}` for {key}")))
}

impl ExperimentConfig {
    /// Builds a config from settings; `game` and `algorithm` are required.
    pub fn from_settings(settings: &BTreeMap<String, String>) -> Result<Self, HarnessError> {
        let get = |k: &str| settings.get(k).map(String::as_str);
        let game: GameId = get("game")
            .ok_or_else(|| HarnessError::Config("missing `game`".into()))?
            .parse()?;
        let algorithm: Algorithm = get("algorithm")
            .ok_or_else(|| HarnessError::Config("missing `algorithm`".into()))?
            .parse()?;
        let iterations = get("iterations").map_or(Ok(1000), |v| parse("iterations", v))?;
        let mut solver = SolverConfig::new(algorithm, iterations);
        if let Some(v) = get("eval_every") {
            let k: usize = parse("eval_every", v)?;
            if k == 0 {
                return Err(HarnessError::Config("eval_every must be at least 1".into()));
            }
            solver.cadence = Cadence::Every(k);
        }
        if let Some(v) = get("lr") {
            solver.schedule = v.parse::<StepSchedule>()?;
        }
        if let Some(v) = get("seed") {
            solver.seed = parse("seed", v)?;
        }
        if let Some(v) = get("deterministic") {
            solver.deterministic = parse("deterministic", v)?;
        }
        if let Some(v) = get("zero_mass") {
            solver.zero_mass = match v {
                "error" => ZeroMass::Error,
                "fallback" => ZeroMass::Fallback,
                _ => return Err(HarnessError::Config(format!("invalid zero_mass `{v}`"))),
            };
        }
        let mut neural = NeuralConfig::default();
        if let Some(v) = get("hidden_layers") {
            neural.hidden_layers = parse("hidden_layers", v)?;
        }
        if let Some(v) = get("hidden_width") {
            neural.hidden_width = parse("hidden_width", v)?;
        }
        if let Some(v) = get("weight_decay") {
            neural.weight_decay = parse("weight_decay", v)?;
        }
        if let Some(v) = get("init") {
            neural.init = match v {
                "fan_in" => InitScheme::FanInUniform,
                "zeros" => InitScheme::Zeros,
                _ => return Err(HarnessError::Config(format!("invalid init `{v}`"))),
            };
        }
        if neural.hidden_layers > 5 || neural.hidden_width == 0 {
            return Err(HarnessError::Config("hidden layers must be 0..=5 with nonzero width".into()));
        }
        solver.neural = neural;
        if solver.deterministic {
            solver.seed = SolverConfig::DEFAULT_SEED;
        }
        Ok(ExperimentConfig {
            game,
            solver,
            out: get("out").map(PathBuf::from),
            policy_out: get("policy_out").map(PathBuf::from),
        })
    }

    /// Config echo written as CSV metadata.
    pub fn metadata(&self) -> Vec<(String, String)> {
        let s = &self.solver;
        let mut m = vec![
            ("game", self.game.to_string()),
            ("algorithm", s.algorithm.to_string()),
            ("iterations", s.iterations.to_string()),
            (
                "cadence",
                match s.cadence {
                    Cadence::PowersOfTwo => "powers_of_two".to_string(),
                    Cadence::Every(k) => format!("every {k}"),
                },
            ),
        ];
        if s.algorithm.uses_step_size() {
            m.push(("lr", s.schedule.to_string()));
        }
        if s.algorithm == Algorithm::EdQL2 {
            m.push(("zero_mass", format!("{:?}", s.zero_mass).to_lowercase()));
        }
        if s.algorithm == Algorithm::EdNeural {
            let n = &s.neural;
            m.push(("seed", s.seed.to_string()));
            m.push(("init", format!("{:?}", n.init)));
            m.push(("hidden_layers", n.hidden_layers.to_string()));
            m.push(("hidden_width", n.hidden_width.to_string()));
            m.push(("weight_decay", n.weight_decay.to_string()));
        }
        m.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    pub fn execute(&self) -> Result<(RunOutput, Curve), HarnessError> {
        let tree = load_tree(self.game.as_str())?;
        let output = run(&tree, &self.solver)?;
        let curve = Curve {
            metadata: self.metadata(),
            records: output.records.clone(),
        };
        Ok((output, curve))
    }
}
