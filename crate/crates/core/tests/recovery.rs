use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use antihorn_core::error::FieldError;
use antihorn_core::field::{
    assignment_coefficients, brute_force_membership, build_field, evaluate, harness_reduction,
    random_unique_sat, recover_assignment, recover_traced, Cnf, FieldElement, LTuple,
    MembershipOracle, RecoveryInstance,
};
use antihorn_core::rng::seeded_rng;
use antihorn_core::{Poly2, Word};

fn sparse() -> BTreeSet<Word> {
    ["10", "0111"].iter().map(|w| w.parse().unwrap()).collect()
}

fn instance<'a>(
    phi: &Cnf,
    f: &'a dyn antihorn_core::field::DisjunctiveReduction,
) -> RecoveryInstance<'a> {
    RecoveryInstance {
        phi: phi.clone(),
        reduction: f,
        s: sparse(),
        p: Poly2::constant(2),
        q: Poly2::constant(40),
    }
}

#[test]
fn dimacs_example_recovered() {
    let phi = Cnf::parse("c x1 and not x2\np cnf 2 2\n1 0\n-2 0\n").unwrap();
    let models = phi.satisfying_assignments();
    assert_eq!(models, vec![vec![true, false]]);
    let f = harness_reduction(11, &sparse(), Arc::new(brute_force_membership)).unwrap();
    assert_eq!(
        recover_assignment(&instance(&phi, &f)).unwrap(),
        vec![true, false]
    );
}

#[test]
fn random_unique_formulas_recovered() {
    let mut rng = seeded_rng(2024);
    for round in 0..24 {
        let n = 1 + round % 6;
        let (phi, planted) = random_unique_sat(&mut rng, n);
        let f =
            harness_reduction(round as u64, &sparse(), Arc::new(brute_force_membership)).unwrap();
        let out = recover_traced(&instance(&phi, &f), None).unwrap();
        assert_eq!(out.assignment, planted);
        assert!(phi.eval(&out.assignment));
        assert!(out.m == 2 || out.m == 6);
    }
}

#[test]
fn unsatisfiable_formula_reports_no_assignment() {
    let phi = Cnf::new(3, vec![vec![1, 2], vec![-1], vec![-2]]).unwrap();
    let f = harness_reduction(0, &sparse(), Arc::new(brute_force_membership)).unwrap();
    assert_eq!(
        recover_assignment(&instance(&phi, &f)),
        Err(FieldError::NoAssignmentFound)
    );
}

#[test]
fn membership_only_reached_through_the_reduction() {
    let calls = Arc::new(AtomicUsize::new(0));
    let counter = calls.clone();
    let oracle: MembershipOracle = Arc::new(move |t: &LTuple| {
        counter.fetch_add(1, Ordering::Relaxed);
        brute_force_membership(t)
    });
    let phi = Cnf::new(3, vec![vec![1], vec![-2], vec![3]]).unwrap();
    let f = harness_reduction(3, &sparse(), oracle).unwrap();
    let out = recover_traced(&instance(&phi, &f), None).unwrap();
    assert_eq!(out.assignment, vec![true, false, true]);
    let tuples = (1usize << out.m) * (1usize << out.m);
    assert_eq!(f.reduction_calls(), tuples);
    assert_eq!(calls.load(Ordering::Relaxed), tuples);
}

#[test]
fn unique_v_per_u_for_unique_formulas() {
    let mut rng = seeded_rng(8);
    for n in 1..=4 {
        let (phi, _) = random_unique_sat(&mut rng, n);
        for m in [2usize, 6] {
            let ctx = build_field(m).unwrap();
            let us: Vec<FieldElement> = if m == 2 {
                ctx.elements().collect()
            } else {
                ctx.elements().step_by(5).collect()
            };
            for u in us {
                let members = ctx
                    .elements()
                    .filter(|&v| {
                        brute_force_membership(&LTuple {
                            phi: phi.clone(),
                            m,
                            u,
                            v,
                        })
                    })
                    .count();
                assert_eq!(members, 1, "n {n} m {m} u {u}");
            }
        }
    }
}

#[test]
fn forward_evaluation_of_assignment() {
    let ctx = build_field(6).unwrap();
    let a = assignment_coefficients(&[true, false, true]);
    let u = ctx.element(7).unwrap();
    // 1 + u^2
    assert_eq!(
        evaluate(&ctx, &a, u),
        ctx.add(FieldElement::ONE, ctx.mul(u, u))
    );
}
