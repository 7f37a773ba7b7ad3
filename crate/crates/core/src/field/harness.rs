//! The language `L` of tuples `<φ, 1^m, u, v>` such that some satisfying
//! assignment `a` of `φ` has `Σ a_i u^i = v` in GF(2^m), and a test-only
//! disjunctive reduction from `L` to an explicit sparse set.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use rand::Rng;

use super::dimacs::Cnf;
use super::gf::{build_field, FieldCtx, FieldElement};
use super::vandermonde::evaluate;
use crate::error::FieldError;
use crate::rng::{derive_seed, derived_rng};
use crate::transform::{decode_tuple, encode_words};
use crate::word::Word;

/// A map from query words to finite sets of words. Recovery sees the
/// reduction only through this trait.
pub trait DisjunctiveReduction: Sync {
    fn reduce(&self, query: &Word) -> BTreeSet<Word>;
}

/// A decoded `<φ, 1^m, u, v>` tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LTuple {
    pub phi: Cnf,
    pub m: usize,
    pub u: FieldElement,
    pub v: FieldElement,
}

fn bytes_to_word(bytes: &[u8]) -> Word {
    let bits: Vec<u8> = bytes
        .iter()
        .flat_map(|&b| (0..8).rev().map(move |i| (b >> i) & 1))
        .collect();
    Word::from_bits_unchecked(bits)
}

fn word_to_bytes(w: &Word) -> Option<Vec<u8>> {
    if !w.len().is_multiple_of(8) {
        return None;
    }
    Some(
        w.bits()
            .chunks(8)
            .map(|c| c.iter().fold(0u8, |acc, &b| (acc << 1) | b))
            .collect(),
    )
}

/// The query word for `<φ, 1^m, u, v>`: the tuple code of
/// `(φ's DIMACS text as bits, 1^m, u, v)`.
pub fn encode_query(phi: &Cnf, ctx: &FieldCtx, u: FieldElement, v: FieldElement) -> Word {
    encode_words(&[
        bytes_to_word(phi.to_dimacs().as_bytes()),
        Word::ones(ctx.m()),
        ctx.to_word(u),
        ctx.to_word(v),
    ])
}

/// Inverse of [`encode_query`]; `None` for words outside its image.
pub fn decode_query(w: &Word) -> Option<LTuple> {
    let parts = decode_tuple(w)?;
    let [phi, unary, u, v] = parts.as_slice() else {
        return None;
    };
    let text = String::from_utf8(word_to_bytes(phi)?).ok()?;
    let phi = Cnf::parse(&text).ok()?;
    if unary.bits().iter().any(|&b| b != 1) {
        return None;
    }
    let ctx = build_field(unary.len()).ok()?;
    Some(LTuple {
        phi,
        m: ctx.m(),
        u: ctx.from_word(u)?,
        v: ctx.from_word(v)?,
    })
}

/// The bits of an assignment as field values `a_0..a_{n-1}`.
pub fn assignment_coefficients(assignment: &[bool]) -> Vec<FieldElement> {
    assignment
        .iter()
        .map(|&b| {
            if b {
                FieldElement::ONE
            } else {
                FieldElement::ZERO
            }
        })
        .collect()
}

/// Decides `L` by enumerating every assignment of `φ`.
pub fn brute_force_membership(t: &LTuple) -> bool {
    let Ok(ctx) = build_field(t.m) else {
        return false;
    };
    t.phi
        .satisfying_assignments()
        .iter()
        .any(|a| evaluate(&ctx, &assignment_coefficients(a), t.u) == t.v)
}

pub type MembershipOracle = Arc<dyn Fn(&LTuple) -> bool + Send + Sync>;

/// Reduces `L` to a fixed sparse set by consulting a membership oracle.
///
/// A member tuple maps to `{s*, fresh}` where `s* ∈ S` depends only on
/// `(seed, φ, m)`; a non-member maps to `{fresh}` (plus the decoy, if set).
/// Fresh words are hashes of the query, kept outside `S`.
pub struct HarnessReduction {
    seed: u64,
    s: Vec<Word>,
    oracle: MembershipOracle,
    fresh_len: usize,
    decoy: Option<Word>,
    reduction_calls: AtomicUsize,
    oracle_calls: AtomicUsize,
}

pub const DEFAULT_FRESH_LEN: usize = 32;

pub fn harness_reduction(
    seed: u64,
    s: &BTreeSet<Word>,
    oracle: MembershipOracle,
) -> Result<HarnessReduction, FieldError> {
    if s.is_empty() {
        return Err(FieldError::InstanceBound(
            "harness reduction needs a nonempty S".into(),
        ));
    }
    Ok(HarnessReduction {
        seed,
        s: s.iter().cloned().collect(),
        oracle,
        fresh_len: DEFAULT_FRESH_LEN,
        decoy: None,
        reduction_calls: AtomicUsize::new(0),
        oracle_calls: AtomicUsize::new(0),
    })
}

impl HarnessReduction {
    pub fn with_fresh_len(mut self, len: usize) -> Self {
        self.fresh_len = len;
        self
    }

    /// Adds a fixed word outside `S` to the image of every non-member.
    pub fn with_decoy(mut self) -> Self {
        let mut rng = derived_rng("decoy", self.seed, &[]);
        self.decoy = Some(self.fresh_word(&mut rng));
        self
    }

    pub fn decoy(&self) -> Option<&Word> {
        self.decoy.as_ref()
    }

    pub fn sparse_set(&self) -> BTreeSet<Word> {
        self.s.iter().cloned().collect()
    }

    pub fn fresh_len(&self) -> usize {
        self.fresh_len
    }

    pub fn reduction_calls(&self) -> usize {
        self.reduction_calls.load(Ordering::Relaxed)
    }

    pub fn oracle_calls(&self) -> usize {
        self.oracle_calls.load(Ordering::Relaxed)
    }

    /// The member word `s*` for `(φ, m)`.
    pub fn designated(&self, phi: &Cnf, m: usize) -> &Word {
        let h = derive_seed(
            "designated",
            self.seed,
            &[phi.to_dimacs().as_bytes(), &(m as u64).to_le_bytes()],
        );
        &self.s[(h % self.s.len() as u64) as usize]
    }

    fn fresh_word(&self, rng: &mut impl Rng) -> Word {
        loop {
            let bits: Vec<u8> = (0..self.fresh_len)
                .map(|_| rng.random_range(0..2u8))
                .collect();
            let w = Word::from_bits_unchecked(bits);
            if !self.s.contains(&w) {
                return w;
            }
        }
    }
}

impl DisjunctiveReduction for HarnessReduction {
    fn reduce(&self, query: &Word) -> BTreeSet<Word> {
        self.reduction_calls.fetch_add(1, Ordering::Relaxed);
        let mut rng = derived_rng("fresh", self.seed, &[query.bits()]);
        let mut out = BTreeSet::from([self.fresh_word(&mut rng)]);
        let member = decode_query(query).map(|t| {
            self.oracle_calls.fetch_add(1, Ordering::Relaxed);
            ((self.oracle)(&t), t)
        });
        match member {
            Some((true, t)) => {
                out.insert(self.designated(&t.phi, t.m).clone());
            }
            _ => out.extend(self.decoy.clone()),
        }
        out
    }
}
