//! Batch experiments: generate instances, run the procedures, check every
//! claim, and emit deterministic reports.

mod config;
mod field_suite;
mod learn;
pub mod oracle;
mod recover;
mod report;
mod transform;

use std::time::Instant;

use rayon::prelude::*;

pub use config::{
    world_menu, Command, ConfigError, ExperimentConfig, WorldShape, MAX_K, MAX_VARS,
    TRANSFORM_WORD_LEN,
};
pub use field_suite::{run_field_suite, FieldReport};
pub use learn::{
    check_world, run_learn, run_learn_world, world_for, LearnClaims, LearnReport, LearnSummary,
    WorldRecord,
};
pub use recover::{
    check_formula, formula_for, harness_set, run_recover, FormulaRecord, RecoverReport,
    RecoverSummary, RecoveryStatus, HARNESS_Q, HARNESS_S_SIZE,
};
pub use report::{emit_report, ReportError, RunReport};
pub use transform::{
    check_instance, random_instance, run_transform, TransformRecord, TransformReport,
    TransformSummary,
};

/// Random triples checked on GF(64).
pub const FIELD_SAMPLES: usize = 10_000;

/// Maps `f` over `0..count` on a pool of `jobs` workers (0 = default),
/// returning results in index order.
pub fn par_map<T, F>(jobs: usize, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let run = || (0..count).into_par_iter().map(&f).collect();
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(run),
        Err(_) => run(),
    }
}

/// Runs the suites selected by `cfg.command`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunReport, ConfigError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut report = RunReport::new(cfg);
    let all = cfg.command == Command::Selftest;
    if all || cfg.command == Command::Learn {
        report.learn = Some(run_learn(cfg));
    }
    if all || cfg.command == Command::Transform {
        report.transform = Some(run_transform(cfg));
    }
    if all || cfg.command == Command::Recover {
        report.field = Some(run_field_suite(cfg.seed, FIELD_SAMPLES));
        report.recover = Some(run_recover(cfg));
    }
    report.finish();
    if cfg.timings {
        report.wall_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

/// The full acceptance configuration with the given seed.
pub fn selftest(seed: u64) -> Result<RunReport, ConfigError> {
    run_experiment(&ExperimentConfig::selftest(seed))
}
