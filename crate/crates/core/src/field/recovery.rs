//! Recovering the unique satisfying assignment of `φ` from a disjunctive
//! reduction of `L` to a sparse set.
//!
//! For every `u`, the member tuples `<φ, 1^m, u, v_u>` all hit `S`, so some
//! word of `S` is hit for at least `2^m / p(n', m) >= n` distinct `u`. Taking
//! `n` of those `(u, v)` pairs gives a Vandermonde system whose solution is
//! the assignment.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use super::dimacs::Cnf;
use super::gf::{build_field, is_field_degree, FieldCtx, FieldElement};
use super::harness::{encode_query, DisjunctiveReduction};
use super::vandermonde::solve_vandermonde;
use super::MAX_SEARCH_M;
use crate::error::FieldError;
use crate::poly::Poly2;
use crate::word::Word;

pub struct RecoveryInstance<'a> {
    pub phi: Cnf,
    pub reduction: &'a dyn DisjunctiveReduction,
    pub s: BTreeSet<Word>,
    /// Census bound, in `(n', m)`.
    pub p: Poly2,
    /// Output-length bound, in `(n', m)`.
    pub q: Poly2,
}

impl RecoveryInstance<'_> {
    pub fn n(&self) -> usize {
        self.phi.num_vars()
    }

    pub fn n_prime(&self) -> usize {
        self.phi.size()
    }

    fn census_check(&self, m: usize) -> Result<(), FieldError> {
        let n_prime = self.n_prime() as u128;
        let q = self.q.eval(n_prime, m as u128);
        let p = self.p.eval(n_prime, m as u128);
        let count = self.s.iter().filter(|w| (w.len() as u128) <= q).count() as u128;
        if count > p {
            return Err(FieldError::InstanceBound(format!(
                "|S ∩ Σ^≤{q}| = {count} exceeds p = {p}"
            )));
        }
        Ok(())
    }
}

fn m_suffices(n: usize, n_prime: usize, p: &Poly2, m: usize) -> bool {
    let bound = p.eval(n_prime as u128, m as u128).max(1);
    (1u128 << m) >= (n as u128).saturating_mul(bound)
}

/// The smallest `m = 2·3^l` with `2^m / p(n', m) >= n`.
pub fn choose_m(n: usize, n_prime: usize, p: &Poly2) -> Result<usize, FieldError> {
    std::iter::successors(Some(2usize), |m| Some(m * 3))
        .take_while(|&m| m <= MAX_SEARCH_M)
        .find(|&m| m_suffices(n, n_prime, p, m))
        .ok_or(FieldError::NoSuitableM { n })
}

/// Every emitted word with its `(u, v)` pairs, ascending.
pub type CandidateMap = BTreeMap<Word, Vec<(FieldElement, FieldElement)>>;

/// Runs the reduction on `<φ, 1^m, u, v>` for all `u, v ∈ GF(2^m)`.
pub fn collect_candidate_words(
    inst: &RecoveryInstance<'_>,
    ctx: &FieldCtx,
) -> Result<CandidateMap, FieldError> {
    let q = inst.q.eval(inst.n_prime() as u128, ctx.m() as u128);
    let per_u: Vec<Vec<(FieldElement, BTreeSet<Word>)>> = ctx
        .elements()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|u| {
            ctx.elements()
                .map(|v| {
                    (
                        v,
                        inst.reduction.reduce(&encode_query(&inst.phi, ctx, u, v)),
                    )
                })
                .collect()
        })
        .collect();

    let mut map = CandidateMap::new();
    for (u, row) in ctx.elements().zip(per_u) {
        for (v, words) in row {
            for w in words {
                if w.len() as u128 > q {
                    return Err(FieldError::InstanceBound(format!(
                        "reduction emitted a word of length {} > q = {q}",
                        w.len()
                    )));
                }
                map.entry(w).or_default().push((u, v));
            }
        }
    }
    Ok(map)
}

/// Number of distinct `u` among the pairs.
pub fn support(pairs: &[(FieldElement, FieldElement)]) -> usize {
    pairs.iter().map(|&(u, _)| u).collect::<BTreeSet<_>>().len()
}

/// Words with support at least `n`, by descending support then length-lex.
pub fn candidates(map: &CandidateMap, n: usize) -> Vec<(&Word, usize)> {
    let mut out: Vec<(&Word, usize)> = map
        .iter()
        .map(|(w, pairs)| (w, support(pairs)))
        .filter(|&(_, sup)| sup >= n)
        .collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    out
}

/// The `n` smallest supporting `u`, each with its smallest `v`.
pub fn select_pairs(
    pairs: &[(FieldElement, FieldElement)],
    n: usize,
) -> (Vec<FieldElement>, Vec<FieldElement>) {
    let mut best: BTreeMap<FieldElement, FieldElement> = BTreeMap::new();
    for &(u, v) in pairs {
        best.entry(u).and_modify(|x| *x = (*x).min(v)).or_insert(v);
    }
    best.into_iter().take(n).unzip()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateVerdict {
    NotBoolean,
    Unsatisfying,
    Recovered,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateAttempt {
    pub word: Word,
    pub support: usize,
    pub verdict: CandidateVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecoveryOutcome {
    pub m: usize,
    pub n: usize,
    pub n_prime: usize,
    pub tuples: u64,
    pub emitted_words: usize,
    pub attempts: Vec<CandidateAttempt>,
    pub assignment: Vec<bool>,
}

pub fn recover_assignment(inst: &RecoveryInstance<'_>) -> Result<Vec<bool>, FieldError> {
    recover_traced(inst, None).map(|o| o.assignment)
}

/// Recovery with an optional forced field degree.
pub fn recover_traced(
    inst: &RecoveryInstance<'_>,
    forced_m: Option<usize>,
) -> Result<RecoveryOutcome, FieldError> {
    let n = inst.n();
    if n == 0 {
        return Err(FieldError::NoVariables);
    }
    let n_prime = inst.n_prime();
    let m = match forced_m {
        Some(m) => {
            if !is_field_degree(m) {
                return Err(FieldError::BadDegree(m));
            }
            if !m_suffices(n, n_prime, &inst.p, m) {
                return Err(FieldError::ForcedMTooSmall { m, n });
            }
            m
        }
        None => choose_m(n, n_prime, &inst.p)?,
    };
    let ctx = build_field(m)?;
    inst.census_check(m)?;

    let map = collect_candidate_words(inst, &ctx)?;
    let mut attempts = Vec::new();
    for (word, sup) in candidates(&map, n) {
        let (us, vs) = select_pairs(&map[word], n);
        let coeffs = solve_vandermonde(&ctx, &us, &vs)?;
        let bits: Option<Vec<bool>> = coeffs
            .iter()
            .map(|&a| match a {
                FieldElement::ZERO => Some(false),
                FieldElement::ONE => Some(true),
                _ => None,
            })
            .collect();
        let verdict = match &bits {
            None => CandidateVerdict::NotBoolean,
            Some(a) if inst.phi.eval(a) => CandidateVerdict::Recovered,
            Some(_) => CandidateVerdict::Unsatisfying,
        };
        attempts.push(CandidateAttempt {
            word: word.clone(),
            support: sup,
            verdict,
        });
        if verdict == CandidateVerdict::Recovered {
            return Ok(RecoveryOutcome {
                m,
                n,
                n_prime,
                tuples: ctx.order() * ctx.order(),
                emitted_words: map.len(),
                attempts,
                assignment: bits.unwrap_or_default(),
            });
        }
    }
    if !attempts.is_empty()
        && attempts
            .iter()
            .all(|a| a.verdict == CandidateVerdict::NotBoolean)
    {
        Err(FieldError::FieldValueNotBoolean)
    } else {
        Err(FieldError::NoAssignmentFound)
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::field::harness::{brute_force_membership, harness_reduction, MembershipOracle};

    #[test]
    fn choose_m_examples() {
        assert_eq!(choose_m(8, 3, &Poly2::constant(4)), Ok(6));
        assert_eq!(choose_m(1, 3, &Poly2::constant(2)), Ok(2));
        assert_eq!(choose_m(6, 3, &Poly2::constant(2)), Ok(6));
        // p = n'·m^2 grows with m but 2^m wins
        let p = Poly2::new(vec![(1, 1, 2)]);
        let m = choose_m(5, 10, &p).unwrap();
        assert_eq!(m, 18);
        assert!(matches!(
            choose_m(usize::MAX, 1, &Poly2::constant(u64::MAX)),
            Err(FieldError::NoSuitableM { .. })
        ));
    }

    #[test]
    fn selection_counts_distinct_u() {
        let ctx = build_field(6).unwrap();
        let f = |b: u32| ctx.element(b).unwrap();
        let pairs = vec![(f(3), f(9)), (f(3), f(2)), (f(1), f(7)), (f(5), f(0))];
        assert_eq!(support(&pairs), 3);
        assert_eq!(
            select_pairs(&pairs, 2),
            (vec![f(1), f(3)], vec![f(7), f(2)])
        );
    }

    fn instance<'a>(
        phi: Cnf,
        f: &'a dyn DisjunctiveReduction,
        s: &BTreeSet<Word>,
    ) -> RecoveryInstance<'a> {
        RecoveryInstance {
            phi,
            reduction: f,
            s: s.clone(),
            p: Poly2::constant(s.len() as u64),
            q: Poly2::constant(40),
        }
    }

    fn sparse() -> BTreeSet<Word> {
        ["01", "110"].iter().map(|w| w.parse().unwrap()).collect()
    }

    #[test]
    fn x1_not_x2_is_recovered() {
        let s = sparse();
        let oracle: MembershipOracle = Arc::new(brute_force_membership);
        let f = harness_reduction(1, &s, oracle).unwrap();
        let phi = Cnf::new(2, vec![vec![1], vec![-2]]).unwrap();
        let inst = instance(phi, &f, &s);
        assert_eq!(recover_assignment(&inst), Ok(vec![true, false]));
        assert_eq!(f.oracle_calls(), f.reduction_calls());
    }

    #[test]
    fn unsatisfiable_formula_finds_nothing() {
        let s = sparse();
        let oracle: MembershipOracle = Arc::new(brute_force_membership);
        let f = harness_reduction(1, &s, oracle).unwrap();
        let phi = Cnf::new(2, vec![vec![1], vec![-1]]).unwrap();
        assert_eq!(
            recover_assignment(&instance(phi, &f, &s)),
            Err(FieldError::NoAssignmentFound)
        );
    }

    #[test]
    fn polluting_words_are_rejected_by_verification() {
        // two-bit fresh words collide across many tuples and sort ahead of S
        let s: BTreeSet<Word> = ["0110", "1101"]
            .iter()
            .map(|w| w.parse().unwrap())
            .collect();
        let oracle: MembershipOracle = Arc::new(brute_force_membership);
        let f = harness_reduction(4, &s, oracle)
            .unwrap()
            .with_fresh_len(2)
            .with_decoy();
        let phi = Cnf::new(3, vec![vec![1], vec![2], vec![-3]]).unwrap();
        let out = recover_traced(&instance(phi, &f, &s), None).unwrap();
        assert_eq!(out.assignment, vec![true, true, false]);
        assert!(out.attempts.len() >= 2);
        assert_eq!(out.attempts[0].word.len(), 2);
        assert_ne!(out.attempts[0].verdict, CandidateVerdict::Recovered);
        assert!(s.contains(&out.attempts.last().unwrap().word));
    }

    #[test]
    fn fresh_words_only_yield_no_candidates() {
        struct Fresh;
        impl DisjunctiveReduction for Fresh {
            fn reduce(&self, query: &Word) -> BTreeSet<Word> {
                BTreeSet::from([query.clone()])
            }
        }
        let s = sparse();
        let phi = Cnf::new(2, vec![vec![1], vec![2]]).unwrap();
        let mut inst = instance(phi, &Fresh, &s);
        inst.q = Poly2::constant(100_000);
        assert_eq!(
            recover_assignment(&inst),
            Err(FieldError::NoAssignmentFound)
        );
    }

    #[test]
    fn forced_m_bounds() {
        let s = sparse();
        let oracle: MembershipOracle = Arc::new(brute_force_membership);
        let f = harness_reduction(1, &s, oracle).unwrap();
        let phi = Cnf::new(4, vec![vec![1], vec![2], vec![3], vec![4]]).unwrap();
        let inst = instance(phi, &f, &s);
        assert_eq!(
            recover_traced(&inst, Some(2)),
            Err(FieldError::ForcedMTooSmall { m: 2, n: 4 })
        );
        assert_eq!(
            recover_traced(&inst, Some(4)),
            Err(FieldError::BadDegree(4))
        );
        assert_eq!(
            recover_traced(&inst, Some(6)).unwrap().assignment,
            vec![true; 4]
        );
    }

    #[test]
    fn census_and_length_bounds_enforced() {
        let s = sparse();
        let oracle: MembershipOracle = Arc::new(brute_force_membership);
        let f = harness_reduction(1, &s, oracle).unwrap();
        let phi = Cnf::new(1, vec![vec![1]]).unwrap();
        let mut inst = instance(phi.clone(), &f, &s);
        inst.q = Poly2::constant(10);
        assert!(matches!(
            recover_assignment(&inst),
            Err(FieldError::InstanceBound(_))
        ));
        let mut inst = instance(phi, &f, &s);
        inst.p = Poly2::constant(1);
        assert!(matches!(
            recover_traced(&inst, Some(6)),
            Err(FieldError::InstanceBound(_))
        ));
    }
}
