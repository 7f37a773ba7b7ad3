//! Synthetic sparse worlds.
//!
//! A [`SparseWorld`] fixes an explicit sparse set `S` with census bound `p`,
//! a reduction `x -> Φ_x` into k-anti-Horn formulas whose size and word
//! lengths are bounded by `q(|x|)`, and thereby the target language
//! `T = { x : Φ_x is satisfied by S }`. Membership in `T` is correct by
//! construction, which is all the learner relies on.
//!
//! Worlds cover every input of length at most `n_max`; the reduction table
//! and the characteristic vector of `T` are materialized at construction.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clause::{AntiHornClause, AntiHornFormula};
use crate::error::WorldError;
use crate::poly::Poly;
use crate::rng::derived_rng;
use crate::word::Word;

/// Exhaustive scans over `Σ^{<= n_max}` stay below 2^13 words.
pub const MAX_N_MAX: usize = 12;
/// Longest word the generator will place in `S` or in a reduction formula.
pub const MAX_WORD_LEN: usize = 40;
/// Clause count cap for generated formulas (the bound `q(|x|)` still applies).
const MAX_GENERATED_CLAUSES: usize = 4;

#[derive(Clone, Debug)]
pub struct SparseWorld {
    seed: u64,
    k: usize,
    n_max: usize,
    p: Poly,
    q: Poly,
    s: BTreeSet<Word>,
    overrides: BTreeMap<Word, AntiHornFormula>,
    // derived, indexed by Word::rank
    phi: Vec<AntiHornFormula>,
    member: Vec<bool>,
}

impl PartialEq for SparseWorld {
    fn eq(&self, other: &Self) -> bool {
        self.seed == other.seed
            && self.k == other.k
            && self.n_max == other.n_max
            && self.p == other.p
            && self.q == other.q
            && self.s == other.s
            && self.overrides == other.overrides
    }
}

impl Eq for SparseWorld {}

/// Generates a world whose census and reduction bounds hold by construction.
///
/// `S` receives `floor(density * p(L))` words, where `L = q(n_max)` is the
/// longest relevant length, placed at random lengths subject to
/// `|S ∩ Σ^{<=n}| <= floor(density * p(n))` for every `n <= L`.
pub fn generate_world(
    seed: u64,
    k: usize,
    n_max: usize,
    p: Poly,
    q: Poly,
    density: f64,
) -> Result<SparseWorld, WorldError> {
    if !(0.0..=1.0).contains(&density) {
        return Err(WorldError::BadDensity(density));
    }
    check_params(k, n_max, &p, &q)?;
    let max_len = q.eval_usize(n_max);
    let s = draw_sparse_set(seed, &p, max_len, density);
    SparseWorld::from_parts(seed, k, n_max, p, q, s, BTreeMap::new())
}

fn check_params(k: usize, n_max: usize, p: &Poly, q: &Poly) -> Result<(), WorldError> {
    if k == 0 {
        return Err(WorldError::ZeroArity);
    }
    if n_max > MAX_N_MAX {
        return Err(WorldError::NMaxTooLarge(n_max));
    }
    let max_len = q.eval_usize(n_max);
    if max_len > MAX_WORD_LEN {
        return Err(WorldError::ReductionBound {
            x: Word::zeros(n_max),
            msg: format!("q({n_max}) = {max_len} exceeds the word length limit {MAX_WORD_LEN}"),
        });
    }
    for n in 0..=max_len.max(n_max) {
        let value = p.eval(n as u128);
        if value <= 1 {
            return Err(WorldError::CensusPolyTooSmall { n, value });
        }
    }
    Ok(())
}

fn draw_sparse_set(seed: u64, p: &Poly, max_len: usize, density: f64) -> BTreeSet<Word> {
    let budget = |n: usize| (density * p.eval(n as u128) as f64).floor() as usize;
    let target = budget(max_len).min(Word::count_up_to(max_len.min(20)));
    let mut rng = derived_rng("sparse-set", seed, &[]);
    let mut s = BTreeSet::new();
    let mut attempts = 0;
    while s.len() < target && attempts < 64 * (target + 1) {
        attempts += 1;
        let w = random_word(&mut rng, max_len);
        if s.contains(&w) {
            continue;
        }
        let fits = (w.len()..=max_len).all(|n| {
            let count = s.iter().filter(|v: &&Word| v.len() <= n).count();
            count < budget(n)
        });
        if fits {
            s.insert(w);
        }
    }
    s
}

/// A word of uniformly chosen length in `0..=max_len`, then uniform bits.
fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> Word {
    let len = rng.random_range(0..=max_len);
    let bits: Vec<u8> = (0..len).map(|_| rng.random_range(0..=1u8)).collect();
    Word::from_bits_unchecked(bits)
}

impl SparseWorld {
    /// Builds a world from explicit parts, validating the census bound, the
    /// reduction bounds, and the arity bound. Inputs without an override use
    /// the seeded generator.
    pub fn from_parts(
        seed: u64,
        k: usize,
        n_max: usize,
        p: Poly,
        q: Poly,
        s: BTreeSet<Word>,
        overrides: BTreeMap<Word, AntiHornFormula>,
    ) -> Result<Self, WorldError> {
        check_params(k, n_max, &p, &q)?;
        let max_len = q
            .eval_usize(n_max)
            .max(s.iter().map(Word::len).max().unwrap_or(0));
        for n in 0..=max_len {
            let count = s.iter().filter(|w| w.len() <= n).count();
            let bound = p.eval(n as u128);
            if count as u128 > bound {
                return Err(WorldError::CensusViolated { n, count, bound });
            }
        }
        for x in overrides.keys() {
            if x.len() > n_max {
                return Err(WorldError::OutOfRange {
                    len: x.len(),
                    n_max,
                });
            }
        }

        let pools = WordPools::new(seed, &s, q.eval_usize(n_max));
        let total = Word::count_up_to(n_max);
        let mut phi = Vec::with_capacity(total);
        let mut member = Vec::with_capacity(total);
        for x in Word::all_up_to(n_max) {
            let formula = match overrides.get(&x) {
                Some(f) => f.clone(),
                None => pools.generate(seed, k, &q, &x),
            };
            check_formula_bounds(&x, &formula, k, &q)?;
            member.push(formula.satisfied_by(&s));
            phi.push(formula);
        }
        Ok(SparseWorld {
            seed,
            k,
            n_max,
            p,
            q,
            s,
            overrides,
            phi,
            member,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn p(&self) -> &Poly {
        &self.p
    }

    pub fn q(&self) -> &Poly {
        &self.q
    }

    pub fn sparse_set(&self) -> &BTreeSet<Word> {
        &self.s
    }

    pub fn overrides(&self) -> &BTreeMap<Word, AntiHornFormula> {
        &self.overrides
    }

    /// `p(q(n))`, the census bound on the words a length-`n` reduction can mention.
    pub fn census_at_q(&self, n: usize) -> u128 {
        self.p.eval(self.q.eval(n as u128))
    }

    /// `Φ_x`. Panics if `|x| > n_max`.
    pub fn reduction(&self, x: &Word) -> &AntiHornFormula {
        assert!(
            x.len() <= self.n_max,
            "|{x}| exceeds n_max = {}",
            self.n_max
        );
        &self.phi[x.rank()]
    }

    pub fn try_reduction(&self, x: &Word) -> Result<&AntiHornFormula, WorldError> {
        self.check_range(x)?;
        Ok(&self.phi[x.rank()])
    }

    pub fn target(&self) -> TargetLanguage<'_> {
        TargetLanguage { world: self }
    }

    fn check_range(&self, x: &Word) -> Result<(), WorldError> {
        if x.len() > self.n_max {
            return Err(WorldError::OutOfRange {
                len: x.len(),
                n_max: self.n_max,
            });
        }
        Ok(())
    }

    pub fn to_scenario(&self) -> Scenario {
        Scenario {
            seed: self.seed,
            k: self.k,
            n_max: self.n_max,
            p: self.p.coeffs().to_vec(),
            q: self.q.coeffs().to_vec(),
            s: self.s.iter().cloned().collect(),
            reduction: self.overrides.clone(),
        }
    }

    pub fn save(&self, path: &Path) -> Result<(), WorldError> {
        std::fs::write(path, self.to_scenario().to_json()).map_err(|source| WorldError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, WorldError> {
        let text = std::fs::read_to_string(path).map_err(|source| WorldError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Scenario::from_json(&text)?.into_world()
    }
}

fn check_formula_bounds(
    x: &Word,
    f: &AntiHornFormula,
    k: usize,
    q: &Poly,
) -> Result<(), WorldError> {
    let bound = q.eval_usize(x.len());
    if f.len() > bound {
        return Err(WorldError::ReductionBound {
            x: x.clone(),
            msg: format!("{} clauses exceed q({}) = {bound}", f.len(), x.len()),
        });
    }
    if f.max_word_len() > bound && !f.is_empty() {
        return Err(WorldError::ReductionBound {
            x: x.clone(),
            msg: format!(
                "a word of length {} exceeds q({}) = {bound}",
                f.max_word_len(),
                x.len()
            ),
        });
    }
    for clause in f {
        clause.check_arity(k)?;
    }
    Ok(())
}

/// Words the generator draws clause literals from: members of `S` and a
/// fixed set of non-members, so that left-hand sides recur across inputs.
struct WordPools {
    members: Vec<Word>,
    distractors: Vec<Word>,
}

impl WordPools {
    fn new(seed: u64, s: &BTreeSet<Word>, max_len: usize) -> Self {
        let mut rng = derived_rng("distractors", seed, &[]);
        let wanted = 2 * s.len() + 6;
        let mut distractors = BTreeSet::new();
        let mut attempts = 0;
        while distractors.len() < wanted && attempts < 64 * wanted {
            attempts += 1;
            let w = random_word(&mut rng, max_len);
            if !s.contains(&w) {
                distractors.insert(w);
            }
        }
        WordPools {
            members: s.iter().cloned().collect(),
            distractors: distractors.into_iter().collect(),
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng, max_len: usize) -> Word {
        let roll: f64 = rng.random();
        let pool = if roll < 0.45 {
            &self.members
        } else if roll < 0.8 {
            &self.distractors
        } else {
            return random_word(rng, max_len);
        };
        let short: Vec<&Word> = pool.iter().filter(|w| w.len() <= max_len).collect();
        match short.choose(rng) {
            Some(w) => (*w).clone(),
            None => random_word(rng, max_len),
        }
    }

    fn generate(&self, seed: u64, k: usize, q: &Poly, x: &Word) -> AntiHornFormula {
        let mut rng = derived_rng("reduction", seed, &[x.bits()]);
        let bound = q.eval_usize(x.len());
        let clauses = rng.random_range(0..=bound.min(MAX_GENERATED_CLAUSES));
        (0..clauses)
            .map(|_| {
                let lhs = self.draw(&mut rng, bound);
                let arity = rng.random_range(0..=k);
                let rhs: Vec<Word> = (0..arity).map(|_| self.draw(&mut rng, bound)).collect();
                AntiHornClause::new(lhs, rhs)
            })
            .collect()
    }
}

/// Membership oracle for a target language, as consumed by the learner.
pub trait TargetOracle: Sync {
    /// Longest input the oracle answers for.
    fn horizon(&self) -> usize;

    /// Membership of `x`; callers keep `|x| <= horizon()`.
    fn is_member(&self, x: &Word) -> bool;
}

/// `T = { x : Φ_x is satisfied by S }` for a world.
#[derive(Clone, Copy, Debug)]
pub struct TargetLanguage<'w> {
    world: &'w SparseWorld,
}

impl<'w> TargetLanguage<'w> {
    pub fn world(&self) -> &'w SparseWorld {
        self.world
    }
}

impl TargetOracle for TargetLanguage<'_> {
    fn horizon(&self) -> usize {
        self.world.n_max
    }

    fn is_member(&self, x: &Word) -> bool {
        self.world.member[x.rank()]
    }
}

pub fn decide_membership(target: &TargetLanguage<'_>, x: &Word) -> Result<bool, WorldError> {
    target.world.check_range(x)?;
    Ok(target.is_member(x))
}

/// Length-lex smallest `x` with `|x| <= n`, `x ∈ T`, and `G ⊬ Φ_x`.
pub fn smallest_counterexample_a(
    world: &SparseWorld,
    target: &dyn TargetOracle,
    n: usize,
    g: &AntiHornFormula,
) -> Option<Word> {
    let n = n.min(world.n_max).min(target.horizon());
    Word::all_up_to(n).find(|x| target.is_member(x) && !g.derives(world.reduction(x)))
}

/// Length-lex smallest `x` with `|x| <= i`, `x ∉ T`, and `G ⊢ Φ_x` for every `G` in `list`.
pub fn smallest_counterexample_b(
    world: &SparseWorld,
    target: &dyn TargetOracle,
    i: usize,
    list: &[AntiHornFormula],
) -> Option<Word> {
    let i = i.min(world.n_max).min(target.horizon());
    Word::all_up_to(i)
        .find(|x| !target.is_member(x) && list.iter().all(|g| g.derives(world.reduction(x))))
}

/// On-disk form of a world: one JSON document per world.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub seed: u64,
    pub k: usize,
    pub n_max: usize,
    pub p: Vec<u64>,
    pub q: Vec<u64>,
    pub s: Vec<Word>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub reduction: BTreeMap<Word, AntiHornFormula>,
}

impl Scenario {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("scenario serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self, WorldError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn into_world(self) -> Result<SparseWorld, WorldError> {
        SparseWorld::from_parts(
            self.seed,
            self.k,
            self.n_max,
            Poly::new(self.p),
            Poly::new(self.q),
            self.s.into_iter().collect(),
            self.reduction,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn f(s: &str) -> AntiHornFormula {
        s.parse().unwrap()
    }

    fn census_holds(world: &SparseWorld) -> bool {
        let max_len = world.q().eval_usize(world.n_max());
        (0..=max_len).all(|n| {
            let count = world.sparse_set().iter().filter(|v| v.len() <= n).count();
            count as u128 <= world.p().eval(n as u128)
        })
    }

    #[test]
    fn generated_world_respects_census() {
        let world = generate_world(7, 1, 4, Poly::linear(2), Poly::linear(1), 1.0).unwrap();
        assert!(world.sparse_set().iter().filter(|v| v.len() <= 5).count() <= 7);
        assert!(census_holds(&world));
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_world(7, 1, 4, Poly::linear(2), Poly::linear(1), 1.0).unwrap();
        let b = generate_world(7, 1, 4, Poly::linear(2), Poly::linear(1), 1.0).unwrap();
        assert_eq!(a, b);
        for x in Word::all_up_to(4) {
            assert_eq!(a.reduction(&x), b.reduction(&x));
        }
    }

    #[test]
    fn generated_arity_is_bounded() {
        let world = generate_world(7, 2, 6, Poly::constant(3), Poly::linear(2), 1.0).unwrap();
        for x in Word::all_up_to(6) {
            let phi = world.reduction(&x);
            assert!(phi.max_arity() <= 2);
            assert!(phi.len() <= x.len() + 2);
            assert!(phi.max_word_len() <= x.len() + 2 || phi.is_empty());
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            generate_world(1, 1, 3, Poly::constant(1), Poly::linear(1), 1.0),
            Err(WorldError::CensusPolyTooSmall { n: 0, value: 1 })
        ));
        assert!(matches!(
            generate_world(1, 1, 3, Poly::constant(2), Poly::linear(1), 1.5),
            Err(WorldError::BadDensity(_))
        ));
        assert!(matches!(
            generate_world(1, 0, 3, Poly::constant(2), Poly::linear(1), 1.0),
            Err(WorldError::ZeroArity)
        ));
        assert!(matches!(
            generate_world(1, 1, 13, Poly::constant(2), Poly::linear(1), 1.0),
            Err(WorldError::NMaxTooLarge(13))
        ));
    }

    #[test]
    fn zero_density_gives_empty_set() {
        let world = generate_world(3, 1, 3, Poly::constant(4), Poly::linear(1), 0.0).unwrap();
        assert!(world.sparse_set().is_empty());
        // every formula is satisfied by the empty set
        assert!(Word::all_up_to(3).all(|x| world.target().is_member(&x)));
    }

    fn explicit_world(s: &[&str], table: &[(&str, &str)]) -> SparseWorld {
        let overrides = table.iter().map(|(x, phi)| (w(x), f(phi))).collect();
        SparseWorld::from_parts(
            0,
            1,
            2,
            Poly::constant(3),
            Poly::linear(2),
            s.iter().map(|x| w(x)).collect(),
            overrides,
        )
        .unwrap()
    }

    #[test]
    fn membership_examples() {
        let world = explicit_world(
            &["0", "1"],
            &[("_", "{}"), ("0", "{0 ->}"), ("1", "{0 -> 1}")],
        );
        let target = world.target();
        assert!(decide_membership(&target, &w("_")).unwrap());
        assert!(!decide_membership(&target, &w("0")).unwrap());
        assert!(decide_membership(&target, &w("1")).unwrap());
        assert!(matches!(
            decide_membership(&target, &w("000")),
            Err(WorldError::OutOfRange { len: 3, n_max: 2 })
        ));
    }

    #[test]
    fn counterexample_a_examples() {
        // only "1" is a member among words of length <= 1
        let world = explicit_world(
            &["0"],
            &[("_", "{0 ->}"), ("0", "{0 -> 1}"), ("1", "{1 -> 0}")],
        );
        let target = world.target();
        assert!(!target.is_member(&w("_")));
        assert!(!target.is_member(&w("0")));
        assert!(target.is_member(&w("1")));
        let empty = AntiHornFormula::new();
        assert_eq!(smallest_counterexample_a(&world, &target, 0, &empty), None);
        assert_eq!(
            smallest_counterexample_a(&world, &target, 1, &empty),
            Some(w("1"))
        );
        let cover = f("{1 -> 0}");
        assert_eq!(smallest_counterexample_a(&world, &target, 1, &cover), None);
    }

    #[test]
    fn counterexample_b_examples() {
        let world = explicit_world(&["0"], &[("_", "{0 ->}"), ("0", "{0 -> 1}"), ("1", "{}")]);
        let target = world.target();
        assert_eq!(
            smallest_counterexample_b(&world, &target, 1, &[]),
            Some(w("_"))
        );
        // a list that separates "_" but not "0"
        let list = vec![f("{0 -> 1}")];
        assert_eq!(
            smallest_counterexample_b(&world, &target, 1, &list),
            Some(w("0"))
        );
        let list = vec![f("{0 -> 00}")];
        assert_eq!(smallest_counterexample_b(&world, &target, 1, &list), None);

        let all_members = explicit_world(&[], &[]);
        assert_eq!(
            smallest_counterexample_b(&all_members, &all_members.target(), 2, &[]),
            None
        );
    }

    #[test]
    fn census_violation_is_diagnosed() {
        let err = SparseWorld::from_parts(
            0,
            1,
            2,
            Poly::constant(2),
            Poly::linear(1),
            ["0", "1", "00"].iter().map(|x| w(x)).collect(),
            BTreeMap::new(),
        )
        .unwrap_err();
        assert!(matches!(
            err,
            WorldError::CensusViolated {
                n: 2,
                count: 3,
                bound: 2
            }
        ));
        assert!(err.to_string().contains("census violated"));
    }

    #[test]
    fn override_bounds_are_checked() {
        let too_many = SparseWorld::from_parts(
            0,
            1,
            2,
            Poly::constant(3),
            Poly::constant(1),
            BTreeSet::new(),
            [(w("_"), f("{0 ->; 1 ->}"))].into_iter().collect(),
        );
        assert!(matches!(too_many, Err(WorldError::ReductionBound { .. })));
        let too_wide = SparseWorld::from_parts(
            0,
            1,
            2,
            Poly::constant(3),
            Poly::constant(2),
            BTreeSet::new(),
            [(w("_"), f("{0 -> 1|00}"))].into_iter().collect(),
        );
        assert!(matches!(too_wide, Err(WorldError::Clause(_))));
    }

    #[test]
    fn scenario_round_trip() {
        let mut world = generate_world(11, 2, 4, Poly::constant(3), Poly::linear(1), 1.0).unwrap();
        let text = world.to_scenario().to_json();
        let back = Scenario::from_json(&text).unwrap().into_world().unwrap();
        assert_eq!(back, world);
        assert_eq!(back.to_scenario().to_json(), text);

        let overrides = [(w("01"), f("{0 -> 1}"))].into_iter().collect();
        world = SparseWorld::from_parts(
            11,
            2,
            4,
            Poly::constant(3),
            Poly::linear(1),
            world.sparse_set().clone(),
            overrides,
        )
        .unwrap();
        let text = world.to_scenario().to_json();
        assert!(text.contains("\"01\""));
        let back = Scenario::from_json(&text).unwrap().into_world().unwrap();
        assert_eq!(back, world);
        assert_eq!(back.reduction(&w("01")), &f("{0 -> 1}"));
    }
}
