//! k-anti-Horn clauses `(v0 -> v1 | ... | vm)` over words, formulas as sets
//! of clauses, the derivation relation, and satisfaction by a finite set.
//!
//! Derivation is a cover check, not entailment: `g` derives `d` when their
//! left-hand sides differ or `rhs(g)` is a subset of `rhs(d)`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{ClauseError, ParseError};
use crate::word::Word;

/// A clause with exactly one negative literal (`lhs`) and a set of positive
/// literals (`rhs`). Canonical text form: `lhs -> w1|w2|...`, or `lhs ->`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AntiHornClause {
    lhs: Word,
    rhs: BTreeSet<Word>,
}

impl AntiHornClause {
    /// Builds a clause without an arity bound; duplicate rhs words collapse.
    pub fn new(lhs: Word, rhs: impl IntoIterator<Item = Word>) -> Self {
        AntiHornClause {
            lhs,
            rhs: rhs.into_iter().collect(),
        }
    }

    /// Builds a clause for a k-bounded context.
    pub fn bounded(
        lhs: Word,
        rhs: impl IntoIterator<Item = Word>,
        k: usize,
    ) -> Result<Self, ClauseError> {
        let clause = Self::new(lhs, rhs);
        clause.check_arity(k)?;
        Ok(clause)
    }

    pub fn check_arity(&self, k: usize) -> Result<(), ClauseError> {
        if self.rhs.len() > k {
            return Err(ClauseError::ArityExceeded {
                arity: self.rhs.len(),
                k,
            });
        }
        Ok(())
    }

    pub fn lhs(&self) -> &Word {
        &self.lhs
    }

    pub fn rhs(&self) -> &BTreeSet<Word> {
        &self.rhs
    }

    pub fn arity(&self) -> usize {
        self.rhs.len()
    }

    /// All words occurring in the clause, lhs first.
    pub fn words(&self) -> impl Iterator<Item = &Word> {
        std::iter::once(&self.lhs).chain(self.rhs.iter())
    }

    pub fn max_word_len(&self) -> usize {
        self.words().map(Word::len).max().unwrap_or(0)
    }

    /// `self ⊢ other`.
    pub fn derives(&self, other: &AntiHornClause) -> bool {
        self.lhs != other.lhs || self.rhs.is_subset(&other.rhs)
    }

    /// True iff `lhs ∉ s` or some rhs word is in `s`.
    pub fn satisfied_by(&self, s: &BTreeSet<Word>) -> bool {
        !s.contains(&self.lhs) || self.rhs.iter().any(|w| s.contains(w))
    }
}

pub fn derives_clause(g: &AntiHornClause, d: &AntiHornClause) -> bool {
    g.derives(d)
}

pub fn clause_satisfied(c: &AntiHornClause, s: &BTreeSet<Word>) -> bool {
    c.satisfied_by(s)
}

impl fmt::Display for AntiHornClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ->", self.lhs)?;
        for (i, w) in self.rhs.iter().enumerate() {
            if i == 0 {
                write!(f, " {w}")?;
            } else {
                write!(f, "|{w}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AntiHornClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for AntiHornClause {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseError::Clause(s.to_string());
        let (lhs, rhs) = s.split_once("->").ok_or_else(bad)?;
        let lhs: Word = lhs.trim().parse().map_err(|_| bad())?;
        let rhs = rhs.trim();
        let rhs = if rhs.is_empty() {
            BTreeSet::new()
        } else {
            rhs.split('|')
                .map(|t| t.trim().parse::<Word>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?
        };
        Ok(AntiHornClause { lhs, rhs })
    }
}

impl Serialize for AntiHornClause {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AntiHornClause {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// A finite set of k-anti-Horn clauses. Equality is set equality.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AntiHornFormula {
    clauses: BTreeSet<AntiHornClause>,
}

impl AntiHornFormula {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(clause: AntiHornClause) -> Self {
        let mut f = Self::new();
        f.insert(clause);
        f
    }

    /// Returns false if the clause was already present.
    pub fn insert(&mut self, clause: AntiHornClause) -> bool {
        self.clauses.insert(clause)
    }

    pub fn remove(&mut self, clause: &AntiHornClause) -> bool {
        self.clauses.remove(clause)
    }

    pub fn retain(&mut self, f: impl FnMut(&AntiHornClause) -> bool) {
        self.clauses.retain(f)
    }

    pub fn contains(&self, clause: &AntiHornClause) -> bool {
        self.clauses.contains(clause)
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Clauses in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = &AntiHornClause> {
        self.clauses.iter()
    }

    pub fn is_subset(&self, other: &AntiHornFormula) -> bool {
        self.clauses.is_subset(&other.clauses)
    }

    pub fn max_arity(&self) -> usize {
        self.iter().map(AntiHornClause::arity).max().unwrap_or(0)
    }

    pub fn max_word_len(&self) -> usize {
        self.iter()
            .map(AntiHornClause::max_word_len)
            .max()
            .unwrap_or(0)
    }

    /// Distinct left-hand sides, in length-lex order.
    pub fn lhs_words(&self) -> BTreeSet<Word> {
        self.iter().map(|c| c.lhs().clone()).collect()
    }

    /// `self ⊢ other`: every clause of `other` is derived by some clause of `self`.
    pub fn derives(&self, other: &AntiHornFormula) -> bool {
        other.iter().all(|d| self.iter().any(|g| g.derives(d)))
    }

    pub fn satisfied_by(&self, s: &BTreeSet<Word>) -> bool {
        self.iter().all(|c| c.satisfied_by(s))
    }
}

impl FromIterator<AntiHornClause> for AntiHornFormula {
    fn from_iter<I: IntoIterator<Item = AntiHornClause>>(iter: I) -> Self {
        AntiHornFormula {
            clauses: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a AntiHornFormula {
    type Item = &'a AntiHornClause;
    type IntoIter = std::collections::btree_set::Iter<'a, AntiHornClause>;

    fn into_iter(self) -> Self::IntoIter {
        self.clauses.iter()
    }
}

pub fn derives_formula(g: &AntiHornFormula, d: &AntiHornFormula) -> bool {
    g.derives(d)
}

pub fn formula_satisfied(f: &AntiHornFormula, s: &BTreeSet<Word>) -> bool {
    f.satisfied_by(s)
}

impl fmt::Display for AntiHornFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for AntiHornFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for AntiHornFormula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| ParseError::Clause(s.to_string()))?;
        if inner.trim().is_empty() {
            return Ok(Self::new());
        }
        inner.split(';').map(|c| c.trim().parse()).collect()
    }
}
