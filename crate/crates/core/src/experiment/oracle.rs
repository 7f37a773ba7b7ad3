//! Reference evaluators written directly from the definitions, kept apart
//! from the library's own implementations so the runners can cross-check.

use std::collections::BTreeSet;

use crate::clause::{AntiHornClause, AntiHornFormula};
use crate::transform::LiteralSet;
use crate::word::Word;

pub fn clause_holds(c: &AntiHornClause, s: &BTreeSet<Word>) -> bool {
    !s.contains(c.lhs()) || c.rhs().iter().any(|w| s.contains(w))
}

pub fn formula_holds(f: &AntiHornFormula, s: &BTreeSet<Word>) -> bool {
    f.iter().all(|c| clause_holds(c, s))
}

pub fn clause_derives(g: &AntiHornClause, d: &AntiHornClause) -> bool {
    g.lhs() != d.lhs() || g.rhs().iter().all(|w| d.rhs().contains(w))
}

pub fn formula_derives(g: &AntiHornFormula, d: &AntiHornFormula) -> bool {
    d.iter().all(|dc| g.iter().any(|gc| clause_derives(gc, dc)))
}

/// Truth of a disjunction of literals under `χ_S`.
pub fn disjunction_holds(lits: &LiteralSet, s: &BTreeSet<Word>) -> bool {
    let chi = |w: &Word| s.contains(w);
    lits.negatives.iter().any(|v| !chi(v)) || lits.positives.iter().any(chi)
}

/// Truth of a conjunction of literals under `χ_S`.
pub fn conjunction_holds(lits: &LiteralSet, s: &BTreeSet<Word>) -> bool {
    let chi = |w: &Word| s.contains(w);
    lits.negatives.iter().all(|v| !chi(v)) && lits.positives.iter().all(chi)
}
