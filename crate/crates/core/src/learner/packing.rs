//! The packing subprogram run when `Γ` reaches its size cap.
//!
//! Among the clauses of the largest rhs size `m̂` with `|Γ_m̂| > P^m̂`, the
//! subprogram greedily grows `α = (z -> y1 | ... | yj)` by the most frequent
//! rhs word of the clauses `α` still derives, and stops once the best word
//! covers fewer than a `1/P` fraction of them. The final `α` derives at least
//! two clauses of `Γ` and, when `Γ` is satisfied by `S` and the census bound
//! holds, is itself satisfied by `S`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::weight::LearnBounds;
use super::LearnState;
use crate::clause::{AntiHornClause, AntiHornFormula};
use crate::error::LearnError;
use crate::word::Word;
use crate::world::SparseWorld;

/// One pass of the repeat loop.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PackingStep {
    pub j: usize,
    pub delta_len: usize,
    /// `None` when every rhs word of `Δ_j` is already in `α_{j-1}`.
    pub chosen: Option<Word>,
    pub frequency: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Packing {
    pub alpha: AntiHornClause,
    pub beta: AntiHornClause,
    pub gamma: AntiHornClause,
    pub m_hat: usize,
    pub steps: Vec<PackingStep>,
}

/// Chooses `α, β, γ` for the current learning state. See [`pack`].
pub fn packing_choose(state: &LearnState, world: &SparseWorld) -> Result<Packing, LearnError> {
    let bounds = LearnBounds::for_world(world, state.n)?;
    pack(&state.gamma, &state.z, &bounds, world.sparse_set())
}

/// Runs the packing subprogram on `gamma`, whose clauses all have lhs `z`.
///
/// `s` is consulted only to validate the precondition and the result.
pub fn pack(
    gamma: &AntiHornFormula,
    z: &Word,
    bounds: &LearnBounds,
    s: &BTreeSet<Word>,
) -> Result<Packing, LearnError> {
    let census = bounds.census;
    if gamma.len() as u128 != bounds.cap {
        return Err(LearnError::PackingPrecondition(format!(
            "|Γ| = {} but the cap is {}",
            gamma.len(),
            bounds.cap
        )));
    }
    if !gamma.satisfied_by(s) {
        return Err(LearnError::PackingPrecondition(
            "Γ is not satisfied by S".into(),
        ));
    }
    if gamma.iter().any(|c| c.lhs() != z) {
        return Err(LearnError::PackingPrecondition(format!(
            "a clause of Γ has lhs other than {z}"
        )));
    }

    let mut by_arity: Vec<Vec<&AntiHornClause>> = vec![Vec::new(); bounds.k + 1];
    for c in gamma {
        c.check_arity(bounds.k)?;
        by_arity[c.arity()].push(c);
    }
    let m_hat = (1..=bounds.k)
        .rev()
        .find(|&m| {
            let threshold = census.checked_pow(m as u32).unwrap_or(u128::MAX);
            by_arity[m].len() as u128 > threshold
        })
        .ok_or_else(|| {
            LearnError::PackingPrecondition("no rhs size m > 0 with |Γ_m| > P^m".into())
        })?;
    let pool = &by_arity[m_hat];

    let mut ys: Vec<Word> = Vec::new();
    let mut steps = Vec::new();
    loop {
        let alpha = AntiHornClause::new(z.clone(), ys.iter().cloned());
        let delta: Vec<&AntiHornClause> =
            pool.iter().copied().filter(|g| alpha.derives(g)).collect();
        let mut counts: BTreeMap<&Word, usize> = BTreeMap::new();
        for c in &delta {
            for y in c.rhs() {
                if !alpha.rhs().contains(y) {
                    *counts.entry(y).or_default() += 1;
                }
            }
        }
        // ascending iteration keeps the length-lex smallest word on ties
        let mut best: Option<(&Word, usize)> = None;
        for (&y, &count) in &counts {
            if best.is_none_or(|(_, c)| count > c) {
                best = Some((y, count));
            }
        }
        let frequency = best.map_or(0, |(_, c)| c);
        steps.push(PackingStep {
            j: steps.len() + 1,
            delta_len: delta.len(),
            chosen: best.map(|(y, _)| y.clone()),
            frequency,
        });

        if (frequency as u128).saturating_mul(census) < delta.len() as u128 {
            if delta.len() < 2 {
                return Err(LearnError::PackingPrecondition(format!(
                    "Δ_{} has {} clause(s), need two",
                    steps.len(),
                    delta.len()
                )));
            }
            if !alpha.satisfied_by(s) {
                return Err(LearnError::PackingPrecondition(format!(
                    "{alpha:?} is not satisfied by S; the census bound does not hold"
                )));
            }
            return Ok(Packing {
                alpha,
                beta: delta[0].clone(),
                gamma: delta[1].clone(),
                m_hat,
                steps,
            });
        }
        match best {
            Some((y, _)) if steps.len() < m_hat => ys.push(y.clone()),
            _ => {
                return Err(LearnError::PackingPrecondition(format!(
                    "repeat loop did not stop within m̂ = {m_hat} passes"
                )))
            }
        }
    }
}
