use serde::Serialize;

use crate::clause::{AntiHornClause, AntiHornFormula};
use crate::error::{ClauseError, LearnError};
use crate::world::SparseWorld;

/// Size cap on `Γ` and the clause weight base for one learning run:
/// `cap = P^(k+1)` and `base = cap + 1`, where `P = p(q(n))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LearnBounds {
    pub k: usize,
    pub census: u128,
    pub cap: u128,
    pub base: u128,
}

impl LearnBounds {
    pub fn new(k: usize, census: u128) -> Result<Self, LearnError> {
        let cap = checked_pow(census, k as u32 + 1)?;
        let base = cap.checked_add(1).ok_or(LearnError::WeightOverflow)?;
        Ok(LearnBounds {
            k,
            census,
            cap,
            base,
        })
    }

    pub fn for_world(world: &SparseWorld, n: usize) -> Result<Self, LearnError> {
        Self::new(world.k(), world.census_at_q(n))
    }

    /// `(P^(k+1) + 1)^k`: the weight of `{(z ->)}` and the bound on loop passes.
    pub fn max_weight(&self) -> Result<u128, LearnError> {
        checked_pow(self.base, self.k as u32)
    }

    pub fn clause_weight(&self, clause: &AntiHornClause) -> Result<u128, LearnError> {
        let arity = clause.arity();
        if arity > self.k {
            return Err(ClauseError::ArityExceeded { arity, k: self.k }.into());
        }
        checked_pow(self.base, (self.k - arity) as u32)
    }

    pub fn formula_weight(&self, formula: &AntiHornFormula) -> Result<u128, LearnError> {
        formula.iter().try_fold(0u128, |acc, c| {
            acc.checked_add(self.clause_weight(c)?)
                .ok_or(LearnError::WeightOverflow)
        })
    }
}

fn checked_pow(base: u128, exp: u32) -> Result<u128, LearnError> {
    base.checked_pow(exp).ok_or(LearnError::WeightOverflow)
}

/// `w(θ) = (p(q(n))^(k+1) + 1)^(k - |rhs(θ)|)`.
pub fn clause_weight(
    c: &AntiHornClause,
    n: usize,
    world: &SparseWorld,
) -> Result<u128, LearnError> {
    LearnBounds::for_world(world, n)?.clause_weight(c)
}

pub fn formula_weight(
    f: &AntiHornFormula,
    n: usize,
    world: &SparseWorld,
) -> Result<u128, LearnError> {
    LearnBounds::for_world(world, n)?.formula_weight(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;

    fn clause(arity: usize) -> AntiHornClause {
        AntiHornClause::new(
            Word::empty(),
            (0..arity).map(|i| Word::from_value(i as u64, 3)),
        )
    }

    #[test]
    fn weight_examples() {
        let b = LearnBounds::new(2, 2).unwrap();
        assert_eq!(b.clause_weight(&clause(0)).unwrap(), 81);
        assert_eq!(b.clause_weight(&clause(2)).unwrap(), 1);
        let b = LearnBounds::new(1, 3).unwrap();
        assert_eq!(b.clause_weight(&clause(0)).unwrap(), 10);
        assert_eq!(b.max_weight().unwrap(), 10);
    }

    #[test]
    fn arity_violation() {
        let b = LearnBounds::new(1, 2).unwrap();
        assert!(matches!(
            b.clause_weight(&clause(2)),
            Err(LearnError::Clause(ClauseError::ArityExceeded {
                arity: 2,
                k: 1
            }))
        ));
    }

    #[test]
    fn a_lighter_clause_outweighs_a_full_set_of_heavier_ones() {
        // w(θ) exceeds the total weight of cap clauses with more rhs words
        for (k, census) in [(1, 2), (2, 2), (3, 3), (2, 6)] {
            let b = LearnBounds::new(k, census).unwrap();
            for arity in 0..k {
                let light = b.clause_weight(&clause(arity)).unwrap();
                let heavy = b.clause_weight(&clause(arity + 1)).unwrap();
                assert!(light > b.cap * heavy);
            }
        }
    }

    #[test]
    fn overflow_is_reported() {
        assert_eq!(
            LearnBounds::new(40, 1 << 20),
            Err(LearnError::WeightOverflow)
        );
    }
}
