use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use antihorn_core::experiment::{
    emit_report, run_experiment, run_learn_world, Command, ExperimentConfig, RunReport,
};
use antihorn_core::SparseWorld;

#[derive(Parser, Debug)]
#[command(
    name = "antihorn",
    version,
    about = "Run learning, transform and recovery experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Generate worlds, learn forecast lists, and check every claim
    Learn(Flags),
    /// Check bounded CNF/DNF transforms on random instances
    Transform(Flags),
    /// Recover unique assignments through the field construction
    Recover(Flags),
    /// Run every suite at acceptance size
    Selftest(Flags),
}

#[derive(Args, Debug, Clone, Default)]
struct Flags {
    /// Master seed for every generated world, instance and formula
    #[arg(long)]
    seed: Option<u64>,
    /// Number of generated worlds
    #[arg(long)]
    worlds: Option<usize>,
    /// Largest arity, or a range `LO..HI`
    #[arg(long)]
    k: Option<String>,
    /// Longest input length checked per world
    #[arg(long)]
    n_max: Option<usize>,
    /// Fraction of the census budget filled by the sparse set
    #[arg(long)]
    density: Option<f64>,
    /// Number of random transform instances
    #[arg(long)]
    instances: Option<usize>,
    /// Number of recovery formulas
    #[arg(long)]
    formulas: Option<usize>,
    /// Largest variable count for recovery formulas
    #[arg(long)]
    vars: Option<usize>,
    /// Force the field degree
    #[arg(long)]
    m: Option<usize>,
    /// Mix unsatisfiable formulas into the recovery run
    #[arg(long)]
    include_unsat: bool,
    /// Directory for the report files
    #[arg(long, env = "ANTIHORN_OUT_DIR")]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// Record wall time in the report
    #[arg(long)]
    timings: bool,
    /// Keep per-run records in the report
    #[arg(long, short)]
    verbose: bool,
    /// TOML file whose keys override the flags
    #[arg(long)]
    config: Option<PathBuf>,
    /// Check one world loaded from a scenario file instead of generating (learn only)
    #[arg(long)]
    world: Option<PathBuf>,
}

fn parse_k(s: &str) -> Result<(usize, usize)> {
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .with_context(|| format!("bad arity {t:?}"))
    };
    match s.split_once("..") {
        Some((lo, hi)) => Ok((parse(lo)?, parse(hi.trim_start_matches('='))?)),
        None => Ok((1, parse(s)?)),
    }
}

fn apply_flags(cfg: &mut ExperimentConfig, f: &Flags) -> Result<()> {
    if let Some(v) = f.seed {
        cfg.seed = v;
    }
    if let Some(v) = f.worlds {
        cfg.worlds = v;
    }
    if let Some(k) = &f.k {
        (cfg.k_min, cfg.k_max) = parse_k(k)?;
    }
    if let Some(v) = f.n_max {
        cfg.n_max = v;
    }
    if let Some(v) = f.density {
        cfg.density = v;
    }
    if let Some(v) = f.instances {
        cfg.instances = v;
    }
    if let Some(v) = f.formulas {
        cfg.formulas = v;
    }
    if let Some(v) = f.vars {
        cfg.vars = v;
    }
    if f.m.is_some() {
        cfg.m = f.m;
    }
    if let Some(v) = &f.out {
        cfg.out = Some(v.clone());
    }
    if let Some(v) = f.jobs {
        cfg.jobs = v;
    }
    cfg.include_unsat |= f.include_unsat;
    cfg.timings |= f.timings;
    cfg.verbose |= f.verbose;
    Ok(())
}

/// Overlays the keys of a TOML file on `cfg`.
fn apply_config_file(cfg: &mut ExperimentConfig, path: &Path) -> Result<()> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let overrides: toml::Table = text
        .parse()
        .with_context(|| format!("cannot parse {}", path.display()))?;
    let mut merged = toml::Table::try_from(&*cfg).context("cannot serialize configuration")?;
    for (key, value) in overrides {
        if key == "command" {
            bail!(
                "{}: the command is chosen on the command line",
                path.display()
            );
        }
        merged.insert(key, value);
    }
    *cfg = merged
        .try_into()
        .with_context(|| format!("invalid configuration in {}", path.display()))?;
    Ok(())
}

fn build_config(command: Command, flags: &Flags) -> Result<ExperimentConfig> {
    let mut cfg = match command {
        Command::Selftest => ExperimentConfig::selftest(flags.seed.unwrap_or(42)),
        other => ExperimentConfig::with_command(other),
    };
    apply_flags(&mut cfg, flags)?;
    if let Some(path) = &flags.config {
        apply_config_file(&mut cfg, path)?;
    }
    cfg.validate().context("invalid configuration")?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<bool> {
    let (command, flags) = match cli.command {
        Cmd::Learn(f) => (Command::Learn, f),
        Cmd::Transform(f) => (Command::Transform, f),
        Cmd::Recover(f) => (Command::Recover, f),
        Cmd::Selftest(f) => (Command::Selftest, f),
    };
    let cfg = build_config(command, &flags)?;

    let report = match &flags.world {
        Some(path) => {
            if command != Command::Learn {
                bail!("--world applies to `learn` only");
            }
            let world = SparseWorld::load(path)
                .with_context(|| format!("rejected world {}", path.display()))?;
            let mut report = RunReport::new(&cfg);
            report.learn = Some(run_learn_world(&world, cfg.verbose));
            report.finish();
            report
        }
        None => run_experiment(&cfg)?,
    };

    print!("{}", report.summary_text());
    if let Some(dir) = &cfg.out {
        let (json, summary) = emit_report(&report, dir)?;
        eprintln!("wrote {} and {}", json.display(), summary.display());
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", error_text(&e));
            ExitCode::from(2)
        }
    }
}

/// The error chain joined by `: `, skipping causes their parent already prints.
fn error_text(e: &anyhow::Error) -> String {
    let mut text = e.to_string();
    let mut last = text.clone();
    for cause in e.chain().skip(1) {
        let msg = cause.to_string();
        if !last.contains(&msg) {
            text.push_str(": ");
            text.push_str(&msg);
        }
        last = msg;
    }
    text
}
