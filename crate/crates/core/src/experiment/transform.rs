use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::config::{ExperimentConfig, TRANSFORM_WORD_LEN};
use super::oracle;
use super::par_map;
use crate::clause::AntiHornFormula;
use crate::rng::derived_rng;
use crate::transform::{
    lift_sparse_set, negate_dbtt, transform_cnf, BoundedCnf, BoundedDnf, LiteralSet,
};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransformRecord {
    pub index: usize,
    pub k: usize,
    pub cnf: String,
    pub dnf: String,
    pub s: Vec<Word>,
    pub cnf_value: bool,
    pub dnf_value: bool,
    pub preserved: bool,
    pub complemented: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TransformSummary {
    pub instances: usize,
    /// instances whose CNF is true under `S` (both outcomes should be common)
    pub cnf_true: usize,
    pub dnf_true: usize,
    pub preservation_violations: usize,
    pub complement_violations: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TransformReport {
    pub summary: TransformSummary,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub records: Vec<TransformRecord>,
}

impl TransformReport {
    pub fn failures(&self) -> Vec<String> {
        let s = &self.summary;
        let mut out = Vec::new();
        if s.preservation_violations > 0 {
            out.push(format!(
                "T cnf preservation: {} of {} instances",
                s.preservation_violations, s.instances
            ));
        }
        if s.complement_violations > 0 {
            out.push(format!(
                "T dnf complement: {} of {} instances",
                s.complement_violations, s.instances
            ));
        }
        out
    }
}

fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> Word {
    let len = rng.random_range(0..=max_len);
    Word::from_bits_unchecked((0..len).map(|_| rng.random_range(0..=1u8)).collect())
}

fn random_literals(rng: &mut ChaCha8Rng, pool: &[Word], k: usize) -> LiteralSet {
    let count = rng.random_range(0..=k);
    let mut negatives = BTreeSet::new();
    let mut positives = BTreeSet::new();
    for _ in 0..count {
        let w = pool.choose(rng).expect("nonempty pool").clone();
        if rng.random() {
            negatives.insert(w);
        } else {
            positives.insert(w);
        }
    }
    LiteralSet {
        negatives,
        positives,
    }
}

/// A random bounded CNF, a random bounded DNF, and a random `S`, all over a
/// small shared pool of words so literals collide often.
pub fn random_instance(
    seed: u64,
    index: usize,
    k: usize,
) -> (BoundedCnf, BoundedDnf, BTreeSet<Word>) {
    let mut rng = derived_rng("transform", seed, &[&(index as u64).to_le_bytes()]);
    let pool_size = rng.random_range(2..=8);
    let pool: Vec<Word> = (0..pool_size)
        .map(|_| random_word(&mut rng, TRANSFORM_WORD_LEN))
        .collect();
    let s: BTreeSet<Word> = pool
        .iter()
        .filter(|_| rng.random_bool(0.5))
        .cloned()
        .collect();
    let groups = |rng: &mut ChaCha8Rng| -> Vec<LiteralSet> {
        let count = rng.random_range(1..=4);
        (0..count).map(|_| random_literals(rng, &pool, k)).collect()
    };
    let cnf = BoundedCnf::new(k, groups(&mut rng)).expect("arity bounded by construction");
    let dnf = BoundedDnf::new(k, groups(&mut rng)).expect("arity bounded by construction");
    (cnf, dnf, s)
}

pub fn check_instance(
    index: usize,
    cnf: &BoundedCnf,
    dnf: &BoundedDnf,
    s: &BTreeSet<Word>,
) -> TransformRecord {
    let k = cnf.k();
    let cnf_value = cnf
        .conjuncts()
        .iter()
        .all(|c| oracle::disjunction_holds(c, s));
    let dnf_value = dnf
        .disjuncts()
        .iter()
        .any(|t| oracle::conjunction_holds(t, s));

    let lifted = lift_sparse_set(s, k, TRANSFORM_WORD_LEN);
    let preserved = match transform_cnf(cnf) {
        Ok(f) => {
            let f: AntiHornFormula = f;
            oracle::formula_holds(&f, &lifted) == cnf_value && cnf.satisfied_by(s) == cnf_value
        }
        Err(_) => false,
    };
    let complemented = match negate_dbtt(dnf) {
        Ok(neg) => {
            let neg_value = neg
                .conjuncts()
                .iter()
                .all(|c| oracle::disjunction_holds(c, s));
            neg_value == !dnf_value && dnf.satisfied_by(s) == dnf_value
        }
        Err(_) => false,
    };
    TransformRecord {
        index,
        k,
        cnf: cnf.to_string(),
        dnf: dnf.to_string(),
        s: s.iter().cloned().collect(),
        cnf_value,
        dnf_value,
        preserved,
        complemented,
    }
}

pub fn run_transform(cfg: &ExperimentConfig) -> TransformReport {
    let records: Vec<TransformRecord> = par_map(cfg.jobs, cfg.instances, |index| {
        let (cnf, dnf, s) = random_instance(cfg.seed, index, cfg.k_for(index));
        check_instance(index, &cnf, &dnf, &s)
    });
    let summary = TransformSummary {
        instances: records.len(),
        cnf_true: records.iter().filter(|r| r.cnf_value).count(),
        dnf_true: records.iter().filter(|r| r.dnf_value).count(),
        preservation_violations: records.iter().filter(|r| !r.preserved).count(),
        complement_violations: records.iter().filter(|r| !r.complemented).count(),
    };
    TransformReport {
        summary,
        records: if cfg.verbose { records } else { Vec::new() },
    }
}
