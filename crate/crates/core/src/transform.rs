//! From bounded CNF reductions to k-anti-Horn reductions.
//!
//! A conjunct `(¬v1 ∨ ... ∨ ¬vi ∨ w1 ∨ ... ∨ wj)` becomes the clause
//! `(f(v1, ..., vi) -> f(w1) | ... | f(wj))`, where `f` is an injective tuple
//! code. A conjunct is satisfied by `S` iff its image is satisfied by
//! `S' = f(S^0) ∪ ... ∪ f(S^k)`, because `f(v1..vi) ∈ S'` iff every `vi ∈ S`
//! and `f(w) ∈ S'` iff `w ∈ S`.
//!
//! Bounded DNF reductions are handled by negation: the De Morgan dual of a
//! bounded DNF is a bounded CNF for the complement.

use std::collections::BTreeSet;
use std::fmt;

use crate::clause::{AntiHornClause, AntiHornFormula};
use crate::error::{ClauseError, ParseError};
use crate::word::Word;

/// Encodes a tuple of words as one word: a unary arity header `1^a 0`, then
/// each word with every bit doubled and terminated by `01`.
pub fn encode_tuple(words: &[Word], k: usize) -> Result<Word, ClauseError> {
    if words.len() > k {
        return Err(ClauseError::ArityExceeded {
            arity: words.len(),
            k,
        });
    }
    Ok(encode_words(words))
}

/// [`encode_tuple`] without an arity bound.
pub fn encode_words(words: &[Word]) -> Word {
    let total: usize = words.iter().map(|w| 2 * w.len() + 2).sum();
    let mut bits = Vec::with_capacity(words.len() + 1 + total);
    bits.extend(std::iter::repeat_n(1u8, words.len()));
    bits.push(0);
    for w in words {
        for &b in w.bits() {
            bits.push(b);
            bits.push(b);
        }
        bits.extend_from_slice(&[0, 1]);
    }
    Word::from_bits_unchecked(bits)
}

/// Inverse of [`encode_words`]; `None` outside its image.
pub fn decode_tuple(code: &Word) -> Option<Vec<Word>> {
    let bits = code.bits();
    let arity = bits.iter().position(|&b| b == 0)?;
    let mut pos = arity + 1;
    let mut words = Vec::with_capacity(arity);
    for _ in 0..arity {
        let mut word = Vec::new();
        loop {
            match bits.get(pos..pos + 2)? {
                [0, 1] => break,
                [a, b] if a == b => word.push(*a),
                _ => return None,
            }
            pos += 2;
        }
        pos += 2;
        words.push(Word::from_bits_unchecked(word));
    }
    (pos == bits.len()).then_some(words)
}

/// A clause (in a CNF) or a term (in a DNF): negative and positive word literals.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LiteralSet {
    pub negatives: BTreeSet<Word>,
    pub positives: BTreeSet<Word>,
}

impl LiteralSet {
    pub fn new(
        negatives: impl IntoIterator<Item = Word>,
        positives: impl IntoIterator<Item = Word>,
    ) -> Self {
        LiteralSet {
            negatives: negatives.into_iter().collect(),
            positives: positives.into_iter().collect(),
        }
    }

    pub fn literal_count(&self) -> usize {
        self.negatives.len() + self.positives.len()
    }

    fn check(&self, k: usize) -> Result<(), ClauseError> {
        if self.literal_count() > k {
            return Err(ClauseError::ArityExceeded {
                arity: self.literal_count(),
                k,
            });
        }
        Ok(())
    }

    /// Disjunctive reading: some negative word is outside `s` or some positive one is inside.
    pub fn clause_satisfied(&self, s: &BTreeSet<Word>) -> bool {
        self.negatives.iter().any(|v| !s.contains(v))
            || self.positives.iter().any(|w| s.contains(w))
    }

    /// Conjunctive reading: every literal holds.
    pub fn term_satisfied(&self, s: &BTreeSet<Word>) -> bool {
        self.negatives.iter().all(|v| !s.contains(v))
            && self.positives.iter().all(|w| s.contains(w))
    }

    pub fn negated(&self) -> LiteralSet {
        LiteralSet {
            negatives: self.positives.clone(),
            positives: self.negatives.clone(),
        }
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.negatives.iter().chain(self.positives.iter())
    }
}

impl fmt::Display for LiteralSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        let lits = self
            .negatives
            .iter()
            .map(|v| format!("-{v}"))
            .chain(self.positives.iter().map(|w| format!("+{w}")));
        for (i, lit) in lits.enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&lit)?;
        }
        f.write_str("]")
    }
}

fn parse_groups(s: &str) -> Result<Vec<LiteralSet>, ParseError> {
    let mut groups = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let bad = || ParseError::LiteralGroup(rest.to_string());
        let body = rest.strip_prefix('[').ok_or_else(bad)?;
        let end = body.find(']').ok_or_else(bad)?;
        let mut group = LiteralSet::default();
        for token in body[..end].split_whitespace() {
            let mut chars = token.chars();
            let sign = chars.next();
            let word: Word = chars
                .as_str()
                .parse()
                .map_err(|_| ParseError::LiteralGroup(token.to_string()))?;
            match sign {
                Some('-') => group.negatives.insert(word),
                Some('+') => group.positives.insert(word),
                _ => return Err(ParseError::LiteralGroup(token.to_string())),
            };
        }
        groups.push(group);
        rest = body[end + 1..].trim_start();
    }
    Ok(groups)
}

fn write_groups(f: &mut fmt::Formatter<'_>, groups: &[LiteralSet]) -> fmt::Result {
    for (i, g) in groups.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{g}")?;
    }
    Ok(())
}

/// A conjunction of clauses with at most `k` literals each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedCnf {
    k: usize,
    conjuncts: Vec<LiteralSet>,
}

impl BoundedCnf {
    pub fn new(k: usize, conjuncts: Vec<LiteralSet>) -> Result<Self, ClauseError> {
        conjuncts.iter().try_for_each(|c| c.check(k))?;
        Ok(BoundedCnf { k, conjuncts })
    }

    /// Parses `[-v1 +w1] [-v2] ...`.
    pub fn parse(s: &str, k: usize) -> Result<Self, ParseError> {
        let groups = parse_groups(s)?;
        Self::new(k, groups).map_err(|e| ParseError::LiteralGroup(e.to_string()))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn conjuncts(&self) -> &[LiteralSet] {
        &self.conjuncts
    }

    pub fn satisfied_by(&self, s: &BTreeSet<Word>) -> bool {
        self.conjuncts.iter().all(|c| c.clause_satisfied(s))
    }

    pub fn max_word_len(&self) -> usize {
        self.conjuncts
            .iter()
            .flat_map(LiteralSet::words)
            .map(Word::len)
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for BoundedCnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_groups(f, &self.conjuncts)
    }
}

/// A disjunction of terms with at most `k` literals each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedDnf {
    k: usize,
    disjuncts: Vec<LiteralSet>,
}

impl BoundedDnf {
    pub fn new(k: usize, disjuncts: Vec<LiteralSet>) -> Result<Self, ClauseError> {
        disjuncts.iter().try_for_each(|d| d.check(k))?;
        Ok(BoundedDnf { k, disjuncts })
    }

    pub fn parse(s: &str, k: usize) -> Result<Self, ParseError> {
        let groups = parse_groups(s)?;
        Self::new(k, groups).map_err(|e| ParseError::LiteralGroup(e.to_string()))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn disjuncts(&self) -> &[LiteralSet] {
        &self.disjuncts
    }

    pub fn satisfied_by(&self, s: &BTreeSet<Word>) -> bool {
        self.disjuncts.iter().any(|d| d.term_satisfied(s))
    }
}

impl fmt::Display for BoundedDnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_groups(f, &self.disjuncts)
    }
}

/// One k-anti-Horn clause per conjunct.
pub fn transform_cnf(cnf: &BoundedCnf) -> Result<AntiHornFormula, ClauseError> {
    let k = cnf.k;
    cnf.conjuncts
        .iter()
        .map(|c| {
            c.check(k)?;
            let negatives: Vec<Word> = c.negatives.iter().cloned().collect();
            let lhs = encode_tuple(&negatives, k)?;
            let rhs = c
                .positives
                .iter()
                .map(|w| encode_tuple(std::slice::from_ref(w), k))
                .collect::<Result<Vec<_>, _>>()?;
            AntiHornClause::bounded(lhs, rhs, k)
        })
        .collect()
}

/// `S' = ⋃_{i<=k} f(S^i)`, over the members of `S` no longer than `length_cap`.
pub fn lift_sparse_set(s: &BTreeSet<Word>, k: usize, length_cap: usize) -> BTreeSet<Word> {
    let base: Vec<&Word> = s.iter().filter(|w| w.len() <= length_cap).collect();
    let mut lifted = BTreeSet::new();
    let mut tuples: Vec<Vec<Word>> = vec![Vec::new()];
    for arity in 0..=k {
        for t in &tuples {
            lifted.insert(encode_words(t));
        }
        if arity == k {
            break;
        }
        tuples = tuples
            .iter()
            .flat_map(|t| {
                base.iter().map(move |w| {
                    let mut next = t.clone();
                    next.push((*w).clone());
                    next
                })
            })
            .collect();
    }
    lifted
}

/// De Morgan negation of a bounded DNF.
pub fn negate_dbtt(dnf: &BoundedDnf) -> Result<BoundedCnf, ClauseError> {
    BoundedCnf::new(
        dnf.k,
        dnf.disjuncts.iter().map(LiteralSet::negated).collect(),
    )
}
