//! Learning k-anti-Horn forecasts for a target language that reduces to a
//! sparse set.
//!
//! [`learn_sat`] builds, for a fixed left-hand side `z`, a formula `Γ'`
//! satisfied by `S` that derives `Φ_x` for every member `x` up to length `n`.
//! [`learn_all`] collects such formulas into a [`FormulaList`] whose
//! universal derivation test decides membership exactly up to length `n`;
//! [`forecast`] and [`answer_query_trace`] answer queries from that list.
//!
//! Both procedures record per-pass traces and invariant checks so that runs
//! can be replayed and audited.

mod packing;
mod weight;

use std::collections::BTreeSet;

use serde::Serialize;

pub use packing::{pack, packing_choose, Packing, PackingStep};
pub use weight::{clause_weight, formula_weight, LearnBounds};

use crate::clause::{AntiHornClause, AntiHornFormula};
use crate::error::LearnError;
use crate::word::Word;
use crate::world::{
    smallest_counterexample_a, smallest_counterexample_b, SparseWorld, TargetOracle,
};

/// Structural invariants of `Γ` during a learning run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GammaChecks {
    /// `1 <= |Γ| <= P^(k+1)`
    pub cardinality: bool,
    /// every word has length `<= max(q(n), |z|)`
    pub word_length: bool,
    /// every lhs is `z`
    pub lhs_uniform: bool,
    /// `g1 ⊢ g2` implies `g1 = g2`
    pub antichain: bool,
    /// `Γ` is satisfied by `S`
    pub satisfied: bool,
}

impl GammaChecks {
    pub fn all(&self) -> bool {
        self.cardinality && self.word_length && self.lhs_uniform && self.antichain && self.satisfied
    }

    fn and(self, other: GammaChecks) -> GammaChecks {
        GammaChecks {
            cardinality: self.cardinality && other.cardinality,
            word_length: self.word_length && other.word_length,
            lhs_uniform: self.lhs_uniform && other.lhs_uniform,
            antichain: self.antichain && other.antichain,
            satisfied: self.satisfied && other.satisfied,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum PassAction {
    Extend {
        delta: AntiHornClause,
        removed: usize,
    },
    Pack {
        delta: AntiHornClause,
        removed: usize,
        packing: Packing,
        packed_away: usize,
    },
}

/// One completed pass of the learning loop.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PassRecord {
    pub pass: usize,
    pub counterexample: Word,
    #[serde(flatten)]
    pub action: PassAction,
    pub gamma_len: usize,
    pub weight: u128,
    /// conjunction of the checks taken after each mutation in this pass
    pub checks: GammaChecks,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LearnState {
    pub gamma: AntiHornFormula,
    pub z: Word,
    pub n: usize,
    pub pass_count: usize,
    /// `w(Γ)` after initialization and after every pass
    pub weight_trace: Vec<u128>,
    pub initial_checks: GammaChecks,
    pub passes: Vec<PassRecord>,
}

impl LearnState {
    /// One JSON object per pass.
    pub fn trace_lines(&self) -> String {
        let mut out = String::new();
        for pass in &self.passes {
            out.push_str(&serde_json::to_string(pass).expect("pass record serializes"));
            out.push('\n');
        }
        out
    }

    pub fn pack_count(&self) -> usize {
        self.passes
            .iter()
            .filter(|p| matches!(p.action, PassAction::Pack { .. }))
            .count()
    }
}

/// Output and audit data of one `learn_sat` run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LearnSatRun {
    pub bounds: LearnBounds,
    /// `(P^(k+1) + 1)^k`
    pub pass_bound: u128,
    pub state: LearnState,
}

impl LearnSatRun {
    pub fn formula(&self) -> &AntiHornFormula {
        &self.state.gamma
    }

    pub fn weights_strictly_increase(&self) -> bool {
        self.state.weight_trace.windows(2).all(|w| w[0] < w[1])
    }

    pub fn weights_within_bound(&self) -> bool {
        self.state
            .weight_trace
            .iter()
            .all(|&w| w <= self.pass_bound)
    }
}

fn gamma_checks(
    gamma: &AntiHornFormula,
    z: &Word,
    bounds: &LearnBounds,
    length_bound: usize,
    s: &BTreeSet<Word>,
) -> GammaChecks {
    let clauses: Vec<&AntiHornClause> = gamma.iter().collect();
    GammaChecks {
        cardinality: !gamma.is_empty() && gamma.len() as u128 <= bounds.cap,
        word_length: gamma.max_word_len() <= length_bound,
        lhs_uniform: gamma.iter().all(|c| c.lhs() == z),
        antichain: clauses.iter().enumerate().all(|(i, g1)| {
            clauses
                .iter()
                .enumerate()
                .all(|(j, g2)| i == j || !g1.derives(g2))
        }),
        satisfied: gamma.satisfied_by(s),
    }
}

/// Learns a formula with lhs `z` that is satisfied by `S` and derives `Φ_x`
/// for every member `x` of the target with `|x| <= n`.
pub fn learn_sat(
    world: &SparseWorld,
    target: &dyn TargetOracle,
    n: usize,
    z: &Word,
) -> Result<AntiHornFormula, LearnError> {
    Ok(learn_sat_traced(world, target, n, z)?.state.gamma)
}

/// [`learn_sat`] with the full per-pass trace.
pub fn learn_sat_traced(
    world: &SparseWorld,
    target: &dyn TargetOracle,
    n: usize,
    z: &Word,
) -> Result<LearnSatRun, LearnError> {
    let horizon = world.n_max().min(target.horizon());
    if n > horizon {
        return Err(LearnError::BeyondHorizon { len: n, horizon });
    }
    let bounds = LearnBounds::for_world(world, n)?;
    let pass_bound = bounds.max_weight()?;
    let s = world.sparse_set();
    let length_bound = world.q().eval_usize(n).max(z.len());
    let checks = |g: &AntiHornFormula| gamma_checks(g, z, &bounds, length_bound, s);

    let mut gamma = AntiHornFormula::singleton(AntiHornClause::new(z.clone(), [z.clone()]));
    let mut state = LearnState {
        z: z.clone(),
        n,
        pass_count: 0,
        weight_trace: vec![bounds.formula_weight(&gamma)?],
        initial_checks: checks(&gamma),
        passes: Vec::new(),
        gamma: AntiHornFormula::new(),
    };

    let mut pass: u128 = 0;
    while pass <= pass_bound {
        pass += 1;
        let Some(x_hat) = smallest_counterexample_a(world, target, n, &gamma) else {
            state.gamma = gamma;
            return Ok(LearnSatRun {
                bounds,
                pass_bound,
                state,
            });
        };
        let delta = world
            .reduction(&x_hat)
            .iter()
            .find(|d| !gamma.iter().any(|g| g.derives(d)))
            .cloned()
            .ok_or(LearnError::NoUnderivedClause)?;

        let before = gamma.len();
        gamma.retain(|g| !delta.derives(g));
        let removed = before - gamma.len();
        gamma.insert(delta.clone());
        let mut pass_checks = checks(&gamma);

        let action = if gamma.len() as u128 == bounds.cap {
            let packing = pack(&gamma, z, &bounds, s)?;
            let before = gamma.len();
            gamma.retain(|g| !packing.alpha.derives(g));
            let packed_away = before - gamma.len();
            gamma.insert(packing.alpha.clone());
            pass_checks = pass_checks.and(checks(&gamma));
            PassAction::Pack {
                delta,
                removed,
                packing,
                packed_away,
            }
        } else {
            PassAction::Extend { delta, removed }
        };

        let weight = bounds.formula_weight(&gamma)?;
        state.weight_trace.push(weight);
        state.pass_count += 1;
        state.passes.push(PassRecord {
            pass: state.pass_count,
            counterexample: x_hat,
            action,
            gamma_len: gamma.len(),
            weight,
            checks: pass_checks,
        });
    }
    Err(LearnError::LoopExhausted { bound: pass_bound })
}

/// An ordered list of formulas; `x` is forecast a member iff every formula
/// derives `Φ_x`. Valid for inputs up to `horizon`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FormulaList {
    pub formulas: Vec<AntiHornFormula>,
    pub horizon: usize,
}

impl FormulaList {
    pub fn new(formulas: Vec<AntiHornFormula>, horizon: usize) -> Self {
        FormulaList { formulas, horizon }
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }
}

/// One pass of the while loop at length `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WhilePass {
    pub i: usize,
    pub pass: usize,
    pub counterexample: Word,
    pub lhs_words: Vec<Word>,
    /// some lhs word is in `S`, has length `<= q(i)`, and is new to the list
    pub new_member_lhs: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LengthRecord {
    pub i: usize,
    pub passes: usize,
    /// `p(q(i))`
    pub pass_bound: u128,
    pub list_len: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LearnAllRun {
    pub list: FormulaList,
    pub lengths: Vec<LengthRecord>,
    pub passes: Vec<WhilePass>,
    #[serde(skip)]
    pub sat_runs: Vec<LearnSatRun>,
}

/// Builds the forecast list `L_n`.
pub fn learn_all(
    world: &SparseWorld,
    target: &dyn TargetOracle,
    n: usize,
) -> Result<FormulaList, LearnError> {
    Ok(learn_all_traced(world, target, n)?.list)
}

/// [`learn_all`] with while-pass records and every inner `learn_sat` run.
///
/// Runs lengths `i = 1..=n`; for `n = 0` it runs the single length `0` so
/// that the empty word is covered.
pub fn learn_all_traced(
    world: &SparseWorld,
    target: &dyn TargetOracle,
    n: usize,
) -> Result<LearnAllRun, LearnError> {
    let horizon = world.n_max().min(target.horizon());
    if n > horizon {
        return Err(LearnError::BeyondHorizon { len: n, horizon });
    }
    let s = world.sparse_set();
    let mut lengths = Vec::new();
    let mut passes = Vec::new();
    let mut sat_runs = Vec::new();
    let mut list = Vec::new();

    for i in if n == 0 { 0..=0 } else { 1..=n } {
        list = Vec::new();
        let mut seen_lhs: BTreeSet<Word> = BTreeSet::new();
        let pass_bound = world.census_at_q(i);
        let length_cap = world.q().eval_usize(i);
        let mut count = 0usize;
        while let Some(x_hat) = smallest_counterexample_b(world, target, i, &list) {
            count += 1;
            if count as u128 > pass_bound {
                return Err(LearnError::PassBoundExceeded {
                    i,
                    passes: count,
                    bound: pass_bound,
                });
            }
            let lhs_words = world.reduction(&x_hat).lhs_words();
            let new_member_lhs = lhs_words
                .iter()
                .any(|v| s.contains(v) && v.len() <= length_cap && !seen_lhs.contains(v));
            for v in &lhs_words {
                let run = learn_sat_traced(world, target, i, v)?;
                list.push(run.state.gamma.clone());
                sat_runs.push(run);
                seen_lhs.insert(v.clone());
            }
            passes.push(WhilePass {
                i,
                pass: count,
                counterexample: x_hat,
                lhs_words: lhs_words.into_iter().collect(),
                new_member_lhs,
            });
        }
        lengths.push(LengthRecord {
            i,
            passes: count,
            pass_bound,
            list_len: list.len(),
        });
    }
    Ok(LearnAllRun {
        list: FormulaList::new(list, n),
        lengths,
        passes,
        sat_runs,
    })
}

/// `∀ Γ ∈ L: Γ ⊢ Φ_x`.
pub fn forecast(x: &Word, list: &FormulaList, world: &SparseWorld) -> Result<bool, LearnError> {
    let horizon = list.horizon.min(world.n_max());
    if x.len() > horizon {
        return Err(LearnError::BeyondHorizon {
            len: x.len(),
            horizon,
        });
    }
    let phi = world.reduction(x);
    Ok(list.formulas.iter().all(|g| g.derives(phi)))
}

/// Answers a batch of membership queries from the forecast list alone.
pub fn answer_query_trace(
    queries: &[Word],
    list: &FormulaList,
    world: &SparseWorld,
) -> Result<Vec<bool>, LearnError> {
    queries.iter().map(|q| forecast(q, list, world)).collect()
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::poly::Poly;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn f(s: &str) -> AntiHornFormula {
        s.parse().unwrap()
    }

    /// Every input maps to the empty formula unless listed.
    fn table_world(k: usize, s: &[&str], table: &[(&str, &str)]) -> SparseWorld {
        let mut overrides: BTreeMap<Word, AntiHornFormula> = Word::all_up_to(2)
            .map(|x| (x, AntiHornFormula::new()))
            .collect();
        for (x, phi) in table {
            overrides.insert(w(x), f(phi));
        }
        SparseWorld::from_parts(
            0,
            k,
            2,
            Poly::constant(2),
            Poly::linear(2),
            s.iter().map(|x| w(x)).collect(),
            overrides,
        )
        .unwrap()
    }

    #[test]
    fn no_members_returns_initial_formula() {
        // every input is a non-member: Φ_x = {(0 ->)} with 0 in S
        let table: Vec<(String, String)> = Word::all_up_to(2)
            .map(|x| (x.to_string(), "{0 ->}".to_string()))
            .collect();
        let table: Vec<(&str, &str)> = table
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        let world = table_world(1, &["0"], &table);
        let z = w("11");
        let out = learn_sat(&world, &world.target(), 2, &z).unwrap();
        assert_eq!(out, f("{11 -> 11}"));
    }

    #[test]
    fn single_member_adds_its_clause() {
        // x0 = 01 is the only input with a clause; y = 1 in S
        let world = table_world(1, &["1"], &[("01", "{0 -> 1}")]);
        assert!(world.target().is_member(&w("01")));
        let run = learn_sat_traced(&world, &world.target(), 2, &w("0")).unwrap();
        assert_eq!(run.state.gamma, f("{0 -> 0; 0 -> 1}"));
        assert_eq!(run.state.pass_count, 1);
        assert_eq!(run.state.passes[0].counterexample, w("01"));
        assert!(run.weights_strictly_increase());
    }

    #[test]
    fn packing_fires_at_the_cap() {
        // P = 2, k = 1: cap 4; z = 00 not in S, five members each add 00 -> y
        let world = table_world(
            1,
            &["0"],
            &[
                ("0", "{00 -> 01}"),
                ("1", "{00 -> 10}"),
                ("00", "{00 -> 11}"),
                ("01", "{00 -> 000}"),
            ],
        );
        let run = learn_sat_traced(&world, &world.target(), 2, &w("00")).unwrap();
        assert_eq!(run.state.pack_count(), 1);
        assert_eq!(run.state.gamma, f("{00 ->}"));
        assert_eq!(run.state.weight_trace.last(), Some(&run.pass_bound));
        assert!(run.weights_strictly_increase());
        for pass in &run.state.passes {
            assert!(pass.checks.all(), "{pass:?}");
        }
        assert!(run.state.trace_lines().contains("\"action\":\"pack\""));
    }

    #[test]
    fn learn_all_on_all_members_is_empty() {
        let world = table_world(1, &["0"], &[]);
        let list = learn_all(&world, &world.target(), 2).unwrap();
        assert!(list.is_empty());
        for x in Word::all_up_to(2) {
            assert!(forecast(&x, &list, &world).unwrap());
        }
    }

    #[test]
    fn learn_all_with_one_non_member() {
        // x1 = 1: Φ = {(0 ->); (11 -> 10)}, 0 in S, so x1 is not a member
        let world = table_world(1, &["0"], &[("1", "{0 ->; 11 -> 10}"), ("00", "{0 -> 11}")]);
        let target = world.target();
        assert!(!target.is_member(&w("1")));
        assert!(!target.is_member(&w("00")));
        let run = learn_all_traced(&world, &target, 2).unwrap();
        let lhs: BTreeSet<Word> = run
            .list
            .formulas
            .iter()
            .flat_map(|g| g.lhs_words())
            .collect();
        assert!(lhs.contains(&w("0")));
        assert!(lhs.contains(&w("11")));
        for x in Word::all_up_to(2) {
            assert_eq!(
                forecast(&x, &run.list, &world).unwrap(),
                target.is_member(&x),
                "{x}"
            );
        }
        assert!(run.passes.iter().all(|p| p.new_member_lhs));
    }

    #[test]
    fn n_zero_covers_the_empty_word() {
        let world = table_world(1, &["0"], &[("_", "{0 ->}")]);
        let list = learn_all(&world, &world.target(), 0).unwrap();
        assert_eq!(list.horizon, 0);
        assert!(!forecast(&Word::empty(), &list, &world).unwrap());
    }

    #[test]
    fn forecast_respects_horizon() {
        let world = table_world(1, &["0"], &[]);
        let list = FormulaList::new(vec![], 1);
        assert!(answer_query_trace(&[], &list, &world).unwrap().is_empty());
        assert_eq!(
            forecast(&w("00"), &list, &world),
            Err(LearnError::BeyondHorizon { len: 2, horizon: 1 })
        );
        let answers = answer_query_trace(&[w("1"), w("_"), w("1")], &list, &world).unwrap();
        assert_eq!(answers, vec![true, true, true]);
    }
}
