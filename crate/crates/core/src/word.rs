//! Binary words over the alphabet `{0, 1}`.
//!
//! Every "smallest" selection in this crate uses the length-lexicographic
//! order implemented by [`Word`]'s `Ord`: shorter words first, then
//! lexicographic on the bits with `0 < 1`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

/// A finite binary string. The empty word is rendered as `_`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    bits: Vec<u8>,
}

impl Word {
    pub fn empty() -> Self {
        Word { bits: Vec::new() }
    }

    /// Builds a word from a slice of `0`/`1` values.
    pub fn from_bits(bits: &[u8]) -> Result<Self, ParseError> {
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(ParseError::BadSymbol(b as char));
        }
        Ok(Word {
            bits: bits.to_vec(),
        })
    }

    pub(crate) fn from_bits_unchecked(bits: Vec<u8>) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        Word { bits }
    }

    /// The word of length `len` spelling `value` in binary, most significant bit first.
    pub fn from_value(value: u64, len: usize) -> Self {
        assert!(
            len >= 64 || value < (1u64 << len),
            "value does not fit in {len} bits"
        );
        let bits = (0..len)
            .rev()
            .map(|i| if i < 64 { ((value >> i) & 1) as u8 } else { 0 })
            .collect();
        Word { bits }
    }

    /// `0^n`, the unary length marker.
    pub fn zeros(n: usize) -> Self {
        Word { bits: vec![0; n] }
    }

    pub fn ones(n: usize) -> Self {
        Word { bits: vec![1; n] }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Position of this word in the length-lex enumeration of `Σ*`
    /// (`ε` is 0, `0` is 1, `1` is 2, `00` is 3, ...).
    pub fn rank(&self) -> usize {
        assert!(
            self.len() < usize::BITS as usize - 1,
            "word too long to rank"
        );
        let value = self
            .bits
            .iter()
            .fold(0usize, |acc, &b| (acc << 1) | b as usize);
        (1usize << self.len()) - 1 + value
    }

    /// Inverse of [`Word::rank`].
    pub fn from_rank(rank: usize) -> Self {
        let len = (usize::BITS - 1 - (rank + 1).leading_zeros()) as usize;
        let value = rank + 1 - (1usize << len);
        Word::from_value(value as u64, len)
    }

    /// Number of words of length at most `n`, i.e. `2^(n+1) - 1`.
    pub fn count_up_to(n: usize) -> usize {
        (1usize << (n + 1)) - 1
    }

    /// All words of length at most `n`, in length-lex order.
    pub fn all_up_to(n: usize) -> impl Iterator<Item = Word> {
        (0..Word::count_up_to(n)).map(Word::from_rank)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        Word { bits }
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bits
            .len()
            .cmp(&other.bits.len())
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            return f.write_str("_");
        }
        for &b in &self.bits {
            f.write_str(if b == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "_" {
            return Ok(Word::empty());
        }
        if s.is_empty() {
            return Err(ParseError::EmptyToken);
        }
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(ParseError::BadSymbol(other)),
            })
            .collect::<Result<Vec<u8>, _>>()?;
        Ok(Word { bits })
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn length_lex_order() {
        let mut words = [w("10"), w("1"), w("_"), w("00"), w("0"), w("000")];
        words.sort();
        let rendered: Vec<String> = words.iter().map(|x| x.to_string()).collect();
        assert_eq!(rendered, ["_", "0", "1", "00", "10", "000"]);
    }

    #[test]
    fn rank_round_trip_matches_enumeration() {
        let all: Vec<Word> = Word::all_up_to(4).collect();
        assert_eq!(all.len(), 31);
        for (i, word) in all.iter().enumerate() {
            assert_eq!(word.rank(), i);
        }
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
    }

    #[test]
    fn parse_rejects_other_symbols() {
        assert!("012".parse::<Word>().is_err());
        assert!("".parse::<Word>().is_err());
        assert_eq!(w("_"), Word::empty());
        assert!(Word::from_bits(&[0, 2]).is_err());
    }

    #[test]
    fn from_value_is_msb_first() {
        assert_eq!(Word::from_value(0b011, 3), w("011"));
        assert_eq!(Word::from_value(0, 0), Word::empty());
    }
}
