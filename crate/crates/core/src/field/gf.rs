//! GF(2^m) for `m = 2·3^l`, reduced modulo the trinomial `x^m + x^(m/2) + 1`.
//!
//! Elements are bit vectors of polynomial residues: bit `i` is the
//! coefficient of `x^i`. Their order (numeric on the bits) coincides with
//! the length-lex order of their `m`-bit word renderings, most significant
//! coefficient first.

use std::fmt;

use serde::Serialize;

use crate::error::FieldError;
use crate::word::Word;

pub const MAX_FIELD_M: usize = 18;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

/// `true` iff `m = 2·3^l` for some `l >= 0`.
pub fn is_field_degree(m: usize) -> bool {
    if m < 2 || !m.is_multiple_of(2) {
        return false;
    }
    let mut h = m / 2;
    while h.is_multiple_of(3) {
        h /= 3;
    }
    h == 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldCtx {
    m: usize,
    modulus: u64,
}

impl FieldCtx {
    pub fn m(&self) -> usize {
        self.m
    }

    /// Bits of the modulus, including the leading `x^m`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        1u64 << self.m
    }

    pub fn element(&self, bits: u32) -> Option<FieldElement> {
        ((bits as u64) < self.order()).then_some(FieldElement(bits))
    }

    /// All elements in ascending order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order() as u32).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 ^ b.0)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let mut product = 0u64;
        let mut x = a.0 as u64;
        let mut y = b.0;
        while y != 0 {
            if y & 1 == 1 {
                product ^= x;
            }
            x <<= 1;
            y >>= 1;
        }
        FieldElement(poly_rem(product, self.modulus) as u32)
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^(2^m - 2)`.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(a, self.order() - 2))
    }

    /// The `m`-bit word of `a`, most significant coefficient first.
    pub fn to_word(&self, a: FieldElement) -> Word {
        Word::from_value(a.0 as u64, self.m)
    }

    pub fn from_word(&self, w: &Word) -> Option<FieldElement> {
        if w.len() != self.m {
            return None;
        }
        let bits = w.bits().iter().fold(0u32, |acc, &b| (acc << 1) | b as u32);
        Some(FieldElement(bits))
    }
}

fn degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

/// Remainder of carry-less division.
fn poly_rem(mut a: u64, modulus: u64) -> u64 {
    let dm = degree(modulus);
    while a != 0 && degree(a) >= dm {
        a ^= modulus << (degree(a) - dm);
    }
    a
}

/// Irreducibility by trial division with every polynomial of degree `1..=deg/2`.
pub fn is_irreducible(modulus: u64) -> bool {
    let d = degree(modulus);
    if d < 1 {
        return false;
    }
    let half = d / 2;
    (2u64..(1u64 << (half + 1))).all(|divisor| poly_rem(modulus, divisor) != 0)
}

pub fn build_field(m: usize) -> Result<FieldCtx, FieldError> {
    if !is_field_degree(m) {
        return Err(FieldError::BadDegree(m));
    }
    if m > MAX_FIELD_M {
        return Err(FieldError::DegreeTooLarge(m));
    }
    let modulus = (1u64 << m) | (1u64 << (m / 2)) | 1;
    if !is_irreducible(modulus) {
        return Err(FieldError::NotIrreducible(m));
    }
    Ok(FieldCtx { m, modulus })
}

pub fn gf_add(ctx: &FieldCtx, a: FieldElement, b: FieldElement) -> FieldElement {
    ctx.add(a, b)
}

pub fn gf_mul(ctx: &FieldCtx, a: FieldElement, b: FieldElement) -> FieldElement {
    ctx.mul(a, b)
}

pub fn gf_inv(ctx: &FieldCtx, a: FieldElement) -> Result<FieldElement, FieldError> {
    ctx.inv(a)
}

pub fn gf_pow(ctx: &FieldCtx, a: FieldElement, e: u64) -> FieldElement {
    ctx.pow(a, e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees() {
        let good: Vec<usize> = (0..60).filter(|&m| is_field_degree(m)).collect();
        assert_eq!(good, vec![2, 6, 18, 54]);
        assert_eq!(build_field(4), Err(FieldError::BadDegree(4)));
        assert_eq!(build_field(54), Err(FieldError::DegreeTooLarge(54)));
    }

    #[test]
    fn moduli() {
        assert_eq!(build_field(2).unwrap().modulus(), 0b111);
        assert_eq!(build_field(6).unwrap().modulus(), 0b1001001);
        assert!(build_field(18).is_ok());
    }

    #[test]
    fn reducible_trinomials_are_caught() {
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2
        assert!(!is_irreducible(0b10101));
        // x^2 + 1 = (x + 1)^2
        assert!(!is_irreducible(0b101));
        assert!(is_irreducible(0b1011));
    }

    #[test]
    fn gf4_product() {
        let ctx = build_field(2).unwrap();
        let x = ctx.element(0b10).unwrap();
        let x1 = ctx.element(0b11).unwrap();
        assert_eq!(ctx.mul(x, x1), FieldElement::ONE);
        assert_eq!(ctx.inv(x).unwrap(), x1);
    }

    #[test]
    fn inverse_of_zero() {
        let ctx = build_field(6).unwrap();
        assert_eq!(ctx.inv(FieldElement::ZERO), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn word_conversion() {
        let ctx = build_field(6).unwrap();
        for a in ctx.elements() {
            assert_eq!(ctx.from_word(&ctx.to_word(a)), Some(a));
        }
        assert_eq!(ctx.element(64), None);
    }
}
