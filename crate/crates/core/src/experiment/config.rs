use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::poly::Poly;
use crate::world::MAX_N_MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Learn,
    Transform,
    Recover,
    Selftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Learn => "learn",
            Command::Transform => "transform",
            Command::Recover => "recover",
            Command::Selftest => "selftest",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "learn" => Ok(Command::Learn),
            "transform" => Ok(Command::Transform),
            "recover" => Ok(Command::Recover),
            "selftest" => Ok(Command::Selftest),
            other => Err(format!("unknown command {other:?}")),
        }
    }
}

/// Largest formula size accepted by the recovery runner.
pub const MAX_VARS: usize = 8;
/// Largest arity accepted by the learning and transform runners.
pub const MAX_K: usize = 3;
/// Longest word the transform runner draws.
pub const TRANSFORM_WORD_LEN: usize = 6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    pub seed: u64,
    /// Number of generated worlds (`learn`).
    pub worlds: usize,
    /// Arities cycle over `k_min..=k_max`.
    pub k_min: usize,
    pub k_max: usize,
    pub n_max: usize,
    /// Fraction of the census budget filled by `S`.
    pub density: f64,
    /// Number of random instances (`transform`).
    pub instances: usize,
    /// Number of formulas (`recover`).
    pub formulas: usize,
    /// Largest variable count (`recover`); counts cycle over `1..=vars`.
    pub vars: usize,
    /// Forced field degree; chosen per formula when absent.
    pub m: Option<usize>,
    /// Mix unsatisfiable formulas into the recovery run.
    pub include_unsat: bool,
    /// Output directory for reports.
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses the available parallelism.
    pub jobs: usize,
    /// Record wall time; makes reports differ between runs.
    pub timings: bool,
    /// Keep per-run records in the report, not only the summary.
    pub verbose: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            command: Command::Selftest,
            seed: 42,
            worlds: 50,
            k_min: 1,
            k_max: 2,
            n_max: 6,
            density: 1.0,
            instances: 500,
            formulas: 100,
            vars: 6,
            m: None,
            include_unsat: false,
            out: None,
            jobs: 0,
            timings: false,
            verbose: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("k range {k_min}..={k_max} must lie within 1..={max}", max = MAX_K)]
    BadK { k_min: usize, k_max: usize },
    #[error("n_max = {0} exceeds {max}", max = MAX_N_MAX)]
    NMax(usize),
    #[error("density {0} is outside [0, 1]")]
    Density(f64),
    #[error("vars = {0} must lie within 1..={max}", max = MAX_VARS)]
    Vars(usize),
    #[error("forced m = {m} gives 2^m < n * p = {needed} for n = {n} variables")]
    ForcedM { m: usize, n: usize, needed: u128 },
    #[error("m = {0} is not a supported field degree")]
    BadM(usize),
}

impl ExperimentConfig {
    pub fn with_command(command: Command) -> Self {
        ExperimentConfig {
            command,
            ..Default::default()
        }
    }

    /// The configuration `selftest` runs: every acceptance suite at full size.
    pub fn selftest(seed: u64) -> Self {
        ExperimentConfig {
            command: Command::Selftest,
            seed,
            worlds: 240,
            k_min: 1,
            k_max: 3,
            n_max: 8,
            density: 1.0,
            instances: 600,
            formulas: 100,
            vars: 6,
            m: None,
            include_unsat: false,
            out: None,
            jobs: 0,
            timings: false,
            verbose: true,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.k_min == 0 || self.k_min > self.k_max || self.k_max > MAX_K {
            return Err(ConfigError::BadK {
                k_min: self.k_min,
                k_max: self.k_max,
            });
        }
        if self.n_max > MAX_N_MAX {
            return Err(ConfigError::NMax(self.n_max));
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err(ConfigError::Density(self.density));
        }
        if self.vars == 0 || self.vars > MAX_VARS {
            return Err(ConfigError::Vars(self.vars));
        }
        if let Some(m) = self.m {
            if !crate::field::is_field_degree(m) || m > crate::field::MAX_FIELD_M {
                return Err(ConfigError::BadM(m));
            }
            let needed = self.vars as u128 * super::recover::HARNESS_S_SIZE as u128;
            if (1u128 << m) < needed {
                return Err(ConfigError::ForcedM {
                    m,
                    n: self.vars,
                    needed,
                });
            }
        }
        Ok(())
    }

    pub fn k_for(&self, index: usize) -> usize {
        self.k_min + index % (self.k_max - self.k_min + 1)
    }
}

/// A census polynomial and a reduction length bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WorldShape {
    pub name: &'static str,
    pub p: Poly,
    pub q: Poly,
}

/// The shapes the learning runner cycles through. At `n_max = 8` every one
/// has `q(n) <= 12` and `p(q(n)) <= 6`.
pub fn world_menu() -> Vec<WorldShape> {
    vec![
        WorldShape {
            name: "p=2,q=n+1",
            p: Poly::constant(2),
            q: Poly::linear(1),
        },
        WorldShape {
            name: "p=3,q=n+2",
            p: Poly::constant(3),
            q: Poly::linear(2),
        },
        WorldShape {
            name: "p=2,q=n+4",
            p: Poly::constant(2),
            q: Poly::linear(4),
        },
        WorldShape {
            name: "p=4,q=n",
            p: Poly::constant(4),
            q: Poly::linear(0),
        },
        WorldShape {
            name: "p=n+2,q=4",
            p: Poly::linear(2),
            q: Poly::constant(4),
        },
        WorldShape {
            name: "p=6,q=n+3",
            p: Poly::constant(6),
            q: Poly::linear(3),
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn menu_respects_caps() {
        for shape in world_menu() {
            for n in 0..=8usize {
                let q = shape.q.eval_usize(n);
                assert!(q <= 12, "{}", shape.name);
                assert!(shape.p.eval(q as u128) <= 6, "{}", shape.name);
            }
        }
    }

    #[test]
    fn validation() {
        assert!(ExperimentConfig::default().validate().is_ok());
        assert!(ExperimentConfig::selftest(1).validate().is_ok());
        let bad = ExperimentConfig {
            k_max: 4,
            ..Default::default()
        };
        assert!(matches!(bad.validate(), Err(ConfigError::BadK { .. })));
        let bad = ExperimentConfig {
            m: Some(2),
            vars: 6,
            ..Default::default()
        };
        assert!(matches!(bad.validate(), Err(ConfigError::ForcedM { .. })));
        let ok = ExperimentConfig {
            m: Some(6),
            vars: 6,
            ..Default::default()
        };
        assert!(ok.validate().is_ok());
    }

    #[test]
    fn k_cycles() {
        let cfg = ExperimentConfig {
            k_min: 1,
            k_max: 3,
            ..Default::default()
        };
        let ks: Vec<usize> = (0..6).map(|i| cfg.k_for(i)).collect();
        assert_eq!(ks, vec![1, 2, 3, 1, 2, 3]);
    }
}
