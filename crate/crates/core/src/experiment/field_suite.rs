//! Field axioms checked exhaustively on GF(4) and by sampling on GF(64).

use rand::Rng;
use serde::Serialize;

use crate::field::{build_field, FieldCtx, FieldElement};
use crate::rng::derived_rng;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FieldReport {
    pub gf4_pairs: usize,
    pub gf4_triples: usize,
    pub gf64_triples: usize,
    pub gf64_order_checks: usize,
    pub violations: Vec<String>,
}

impl FieldReport {
    pub fn failures(&self) -> Vec<String> {
        self.violations
            .iter()
            .map(|v| format!("F axioms: {v}"))
            .collect()
    }
}

fn pair_axioms(ctx: &FieldCtx, a: FieldElement, b: FieldElement) -> Option<&'static str> {
    let (zero, one) = (FieldElement::ZERO, FieldElement::ONE);
    if ctx.add(a, b) != ctx.add(b, a) {
        return Some("additive commutativity");
    }
    if ctx.mul(a, b) != ctx.mul(b, a) {
        return Some("multiplicative commutativity");
    }
    if ctx.add(a, zero) != a || ctx.mul(a, one) != a {
        return Some("identity");
    }
    if !ctx.add(a, a).is_zero() {
        return Some("additive inverse");
    }
    if !a.is_zero() && ctx.inv(a).map(|i| ctx.mul(a, i)) != Ok(one) {
        return Some("multiplicative inverse");
    }
    let sq = |x| ctx.mul(x, x);
    if sq(ctx.add(a, b)) != ctx.add(sq(a), sq(b)) {
        return Some("frobenius");
    }
    None
}

fn triple_axioms(
    ctx: &FieldCtx,
    a: FieldElement,
    b: FieldElement,
    c: FieldElement,
) -> Option<&'static str> {
    if ctx.add(ctx.add(a, b), c) != ctx.add(a, ctx.add(b, c)) {
        return Some("additive associativity");
    }
    if ctx.mul(ctx.mul(a, b), c) != ctx.mul(a, ctx.mul(b, c)) {
        return Some("multiplicative associativity");
    }
    if ctx.mul(a, ctx.add(b, c)) != ctx.add(ctx.mul(a, b), ctx.mul(a, c)) {
        return Some("distributivity");
    }
    None
}

pub fn run_field_suite(seed: u64, samples: usize) -> FieldReport {
    let mut report = FieldReport::default();
    let note = |field: &str, what: &str, report: &mut FieldReport| {
        let entry = format!("{field} {what}");
        if !report.violations.contains(&entry) {
            report.violations.push(entry);
        }
    };

    let gf4 = match build_field(2) {
        Ok(ctx) => ctx,
        Err(e) => {
            report.violations.push(format!("GF(4) construction: {e}"));
            return report;
        }
    };
    for a in gf4.elements() {
        for b in gf4.elements() {
            report.gf4_pairs += 1;
            if let Some(what) = pair_axioms(&gf4, a, b) {
                note("GF(4)", what, &mut report);
            }
            for c in gf4.elements() {
                report.gf4_triples += 1;
                if let Some(what) = triple_axioms(&gf4, a, b, c) {
                    note("GF(4)", what, &mut report);
                }
            }
        }
    }

    let gf64 = match build_field(6) {
        Ok(ctx) => ctx,
        Err(e) => {
            report.violations.push(format!("GF(64) construction: {e}"));
            return report;
        }
    };
    let mut rng = derived_rng("field-axioms", seed, &[]);
    let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
        gf64.element(rng.random_range(0..64)).expect("in range")
    };
    for _ in 0..samples {
        let (a, b, c) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
        report.gf64_triples += 1;
        if let Some(what) = pair_axioms(&gf64, a, b).or_else(|| triple_axioms(&gf64, a, b, c)) {
            note("GF(64)", what, &mut report);
        }
    }
    for a in gf64.elements().filter(|a| !a.is_zero()) {
        report.gf64_order_checks += 1;
        if gf64.pow(a, 63) != FieldElement::ONE {
            note("GF(64)", "group order", &mut report);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_counts() {
        let r = run_field_suite(1, 100);
        assert_eq!(
            (
                r.gf4_pairs,
                r.gf4_triples,
                r.gf64_triples,
                r.gf64_order_checks
            ),
            (16, 64, 100, 63)
        );
        assert!(r.violations.is_empty(), "{:?}", r.violations);
    }
}
