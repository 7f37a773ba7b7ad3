//! Finite-field recovery of a unique satisfying assignment.

mod dimacs;
mod gf;
mod harness;
mod recovery;
mod vandermonde;

pub use dimacs::{random_unique_sat, Cnf};
pub use gf::{
    build_field, gf_add, gf_inv, gf_mul, gf_pow, is_field_degree, is_irreducible, FieldCtx,
    FieldElement, MAX_FIELD_M,
};
pub use harness::{
    assignment_coefficients, brute_force_membership, decode_query, encode_query, harness_reduction,
    DisjunctiveReduction, HarnessReduction, LTuple, MembershipOracle, DEFAULT_FRESH_LEN,
};
pub use recovery::{
    candidates, choose_m, collect_candidate_words, recover_assignment, recover_traced,
    select_pairs, support, CandidateAttempt, CandidateMap, CandidateVerdict, RecoveryInstance,
    RecoveryOutcome,
};
pub use vandermonde::{evaluate, solve_vandermonde};

/// Largest field degree `choose_m` considers.
pub const MAX_SEARCH_M: usize = 54;
