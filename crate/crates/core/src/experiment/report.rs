use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::{Command, ExperimentConfig};
use super::field_suite::FieldReport;
use super::learn::LearnReport;
use super::recover::RecoverReport;
use super::transform::TransformReport;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: Command,
    pub seed: u64,
    /// The configuration, minus settings that do not affect results.
    pub config: ExperimentConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub learn: Option<LearnReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transform: Option<TransformReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recover: Option<RecoverReport>,
    pub failed_claims: Vec<String>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

#[derive(Debug, thiserror::Error)]
#[error("cannot write {path}: {source}")]
pub struct ReportError {
    pub path: PathBuf,
    #[source]
    pub source: std::io::Error,
}

impl RunReport {
    pub fn new(cfg: &ExperimentConfig) -> Self {
        RunReport {
            command: cfg.command,
            seed: cfg.seed,
            config: ExperimentConfig {
                out: None,
                jobs: 0,
                ..cfg.clone()
            },
            learn: None,
            transform: None,
            field: None,
            recover: None,
            failed_claims: Vec::new(),
            passed: true,
            wall_ms: None,
        }
    }

    /// Collects the failures of every suite that ran.
    pub fn finish(&mut self) {
        let mut failed = Vec::new();
        failed.extend(self.learn.iter().flat_map(LearnReport::failures));
        failed.extend(self.transform.iter().flat_map(TransformReport::failures));
        failed.extend(self.field.iter().flat_map(FieldReport::failures));
        failed.extend(self.recover.iter().flat_map(RecoverReport::failures));
        self.passed = failed.is_empty();
        self.failed_claims = failed;
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn summary_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}  seed: {}", self.command, self.seed);
        if let Some(l) = &self.learn {
            let s = &l.summary;
            let _ = writeln!(
                out,
                "learn: {}/{} worlds passed; {} learn_sat runs ({} with packing, {} packs); max passes {} (sat) / {} (while); {} words checked",
                s.worlds_passed, s.worlds, s.sat_runs, s.sat_runs_packing, s.packs, s.max_sat_passes, s.max_while_passes, s.words_checked
            );
        }
        if let Some(t) = &self.transform {
            let s = &t.summary;
            let _ = writeln!(
                out,
                "transform: {} instances; cnf true {}, dnf true {}; {} preservation / {} complement violations",
                s.instances, s.cnf_true, s.dnf_true, s.preservation_violations, s.complement_violations
            );
        }
        if let Some(f) = &self.field {
            let _ = writeln!(
                out,
                "field: GF(4) {} pairs / {} triples, GF(64) {} triples / {} order checks; {} violations",
                f.gf4_pairs,
                f.gf4_triples,
                f.gf64_triples,
                f.gf64_order_checks,
                f.violations.len()
            );
        }
        if let Some(r) = &self.recover {
            let s = &r.summary;
            let m: Vec<String> = s.m_used.iter().map(usize::to_string).collect();
            let _ = writeln!(
                out,
                "recover: {}/{} agreed, {} unsat detected, {} missed, {} errors; m used {{{}}}",
                s.agreed,
                s.formulas,
                s.unsat_detected,
                s.missed,
                s.errors,
                m.join(",")
            );
        }
        if let Some(ms) = self.wall_ms {
            let _ = writeln!(out, "wall time: {ms} ms");
        }
        if self.passed {
            out.push_str("result: PASS\n");
        } else {
            out.push_str("result: FAIL\n");
            for claim in &self.failed_claims {
                let _ = writeln!(out, "  failed: {claim}");
            }
        }
        out
    }
}

/// Writes `<command>-report.json` and `<command>-summary.txt` into `dir`.
pub fn emit_report(report: &RunReport, dir: &Path) -> Result<(PathBuf, PathBuf), ReportError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| ReportError { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    let json = dir.join(format!("{}-report.json", report.command));
    let summary = dir.join(format!("{}-summary.txt", report.command));
    std::fs::write(&json, report.to_json()).map_err(io(&json))?;
    std::fs::write(&summary, report.summary_text()).map_err(io(&summary))?;
    Ok((json, summary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::learn::LearnSummary;

    #[test]
    fn empty_report_passes() {
        let mut r = RunReport::new(&ExperimentConfig::with_command(Command::Learn));
        r.learn = Some(LearnReport::default());
        r.finish();
        assert!(r.passed);
        assert!(r.summary_text().ends_with("result: PASS\n"));
        assert!(r.to_json().contains("\"worlds\": 0"));
    }

    #[test]
    fn failures_are_named() {
        let mut r = RunReport::new(&ExperimentConfig::with_command(Command::Learn));
        let mut summary = LearnSummary {
            worlds: 3,
            ..Default::default()
        };
        summary.violations.insert("A1.iv antichain".into(), 1);
        r.learn = Some(LearnReport {
            summary,
            records: Vec::new(),
        });
        r.finish();
        assert!(!r.passed);
        assert!(r
            .summary_text()
            .contains("failed: A1.iv antichain: 1 of 3 worlds"));
    }

    #[test]
    fn unwritable_path_reports_context() {
        let r = RunReport::new(&ExperimentConfig::default());
        let err = emit_report(&r, Path::new("/proc/forbidden/dir")).unwrap_err();
        assert!(err.to_string().contains("/proc/forbidden/dir"));
    }
}
