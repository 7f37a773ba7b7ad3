use std::collections::BTreeSet;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use super::config::ExperimentConfig;
use super::par_map;
use crate::error::FieldError;
use crate::field::{
    brute_force_membership, harness_reduction, random_unique_sat, recover_traced, Cnf,
    MembershipOracle, RecoveryInstance,
};
use crate::poly::Poly2;
use crate::rng::{derive_seed, derived_rng};
use crate::word::Word;

/// `|S|` for the harness reduction; the census bound is this constant.
pub const HARNESS_S_SIZE: usize = 2;
/// Output-length bound of the harness reduction.
pub const HARNESS_Q: u64 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RecoveryStatus {
    /// recovered and equal to the brute-force assignment
    Agreed,
    /// recovered but different from the brute-force assignment
    Disagreed,
    /// no assignment for a formula that has none
    UnsatDetected,
    /// no assignment for a formula that has one
    Missed,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaRecord {
    pub index: usize,
    pub vars: usize,
    pub clauses: usize,
    pub n_prime: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recovered: Option<String>,
    pub candidates_tried: usize,
    /// the recovered assignment satisfies the formula (vacuous when none)
    pub satisfies: bool,
    /// every membership query went through the reduction
    pub seam_respected: bool,
    pub status: RecoveryStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RecoverSummary {
    pub formulas: usize,
    pub agreed: usize,
    pub disagreed: usize,
    pub unsat_detected: usize,
    pub missed: usize,
    pub errors: usize,
    pub unsatisfying_outputs: usize,
    pub seam_violations: usize,
    pub m_used: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RecoverReport {
    pub summary: RecoverSummary,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub records: Vec<FormulaRecord>,
}

impl RecoverReport {
    pub fn failures(&self) -> Vec<String> {
        let s = &self.summary;
        let bad = s.disagreed + s.missed + s.errors + s.unsatisfying_outputs + s.seam_violations;
        if bad == 0 {
            return Vec::new();
        }
        vec![format!(
            "R recovery: {} disagreed, {} missed, {} errors, {} unsatisfying, {} seam violations of {} formulas",
            s.disagreed, s.missed, s.errors, s.unsatisfying_outputs, s.seam_violations, s.formulas
        )]
    }
}

fn bit_string(a: &[bool]) -> String {
    a.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// The explicit sparse set used by the harness for formula `index`.
pub fn harness_set(seed: u64, index: usize) -> BTreeSet<Word> {
    let mut rng = derived_rng("harness-set", seed, &[&(index as u64).to_le_bytes()]);
    let mut s = BTreeSet::new();
    while s.len() < HARNESS_S_SIZE {
        let len = rng.random_range(1..=8);
        s.insert(Word::from_bits_unchecked(
            (0..len).map(|_| rng.random_range(0..=1u8)).collect(),
        ));
    }
    s
}

/// Formula `index` of a run: uniquely satisfiable, or unsatisfiable when
/// `include_unsat` is set and `index % 10 == 9`.
pub fn formula_for(cfg: &ExperimentConfig, index: usize) -> Cnf {
    let n = 1 + index % cfg.vars;
    let mut rng = derived_rng(
        "recover-formula",
        cfg.seed,
        &[&(index as u64).to_le_bytes()],
    );
    let (cnf, _) = random_unique_sat(&mut rng, n);
    if cfg.include_unsat && index % 10 == 9 {
        let mut clauses = cnf.clauses().to_vec();
        clauses.push(vec![1]);
        clauses.push(vec![-1]);
        return Cnf::new(n, clauses).expect("literals in range");
    }
    cnf
}

pub fn check_formula(cfg: &ExperimentConfig, index: usize, phi: &Cnf) -> FormulaRecord {
    let models = phi.satisfying_assignments();
    let expected = (models.len() == 1).then(|| models[0].clone());
    let s = harness_set(cfg.seed, index);
    let oracle: MembershipOracle = Arc::new(brute_force_membership);
    let harness_seed = derive_seed("harness", cfg.seed, &[&(index as u64).to_le_bytes()]);
    let mut record = FormulaRecord {
        index,
        vars: phi.num_vars(),
        clauses: phi.clauses().len(),
        n_prime: phi.size(),
        m: None,
        expected: expected.as_deref().map(bit_string),
        recovered: None,
        candidates_tried: 0,
        satisfies: true,
        seam_respected: true,
        status: RecoveryStatus::Error,
        error: None,
    };
    let reduction = match harness_reduction(harness_seed, &s, oracle) {
        Ok(r) => r,
        Err(e) => {
            record.error = Some(e.to_string());
            return record;
        }
    };
    let inst = RecoveryInstance {
        phi: phi.clone(),
        reduction: &reduction,
        s,
        p: Poly2::constant(HARNESS_S_SIZE as u64),
        q: Poly2::constant(HARNESS_Q),
    };
    let result = recover_traced(&inst, cfg.m);
    record.seam_respected = reduction.oracle_calls() == reduction.reduction_calls();
    match result {
        Ok(out) => {
            record.m = Some(out.m);
            record.candidates_tried = out.attempts.len();
            record.satisfies = phi.eval(&out.assignment);
            record.status = if expected.as_ref() == Some(&out.assignment) {
                RecoveryStatus::Agreed
            } else {
                RecoveryStatus::Disagreed
            };
            record.recovered = Some(bit_string(&out.assignment));
        }
        Err(FieldError::NoAssignmentFound) | Err(FieldError::FieldValueNotBoolean)
            if models.is_empty() =>
        {
            record.status = RecoveryStatus::UnsatDetected;
        }
        Err(e @ (FieldError::NoAssignmentFound | FieldError::FieldValueNotBoolean)) => {
            record.status = RecoveryStatus::Missed;
            record.error = Some(e.to_string());
        }
        Err(e) => record.error = Some(e.to_string()),
    }
    record
}

pub fn run_recover(cfg: &ExperimentConfig) -> RecoverReport {
    let records: Vec<FormulaRecord> = par_map(cfg.jobs, cfg.formulas, |index| {
        check_formula(cfg, index, &formula_for(cfg, index))
    });
    let count = |st: RecoveryStatus| records.iter().filter(|r| r.status == st).count();
    let m_used: BTreeSet<usize> = records.iter().filter_map(|r| r.m).collect();
    let summary = RecoverSummary {
        formulas: records.len(),
        agreed: count(RecoveryStatus::Agreed),
        disagreed: count(RecoveryStatus::Disagreed),
        unsat_detected: count(RecoveryStatus::UnsatDetected),
        missed: count(RecoveryStatus::Missed),
        errors: count(RecoveryStatus::Error),
        unsatisfying_outputs: records.iter().filter(|r| !r.satisfies).count(),
        seam_violations: records.iter().filter(|r| !r.seam_respected).count(),
        m_used: m_used.into_iter().collect(),
    };
    RecoverReport {
        summary,
        records: if cfg.verbose { records } else { Vec::new() },
    }
}
