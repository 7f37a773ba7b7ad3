use std::collections::BTreeMap;

use serde::Serialize;

use super::config::{world_menu, ExperimentConfig, WorldShape};
use super::oracle;
use super::par_map;
use crate::learner::{forecast, learn_all_traced, LearnAllRun, LearnSatRun, PassAction};
use crate::rng::derive_seed;
use crate::word::Word;
use crate::world::{generate_world, SparseWorld, TargetOracle};

/// One bit per checked claim; `true` means no violation was observed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LearnClaims {
    pub a1_i_cardinality: bool,
    pub a1_ii_word_length: bool,
    pub a1_iii_lhs_uniform: bool,
    pub a1_iv_antichain: bool,
    pub a2_packing: bool,
    pub a3_satisfaction: bool,
    pub a3_termination: bool,
    pub a3_weight: bool,
    pub a_output: bool,
    pub b1_pass_bound: bool,
    pub b1_new_member: bool,
    pub b2_forecast: bool,
}

impl LearnClaims {
    const ALL_PASS: LearnClaims = LearnClaims {
        a1_i_cardinality: true,
        a1_ii_word_length: true,
        a1_iii_lhs_uniform: true,
        a1_iv_antichain: true,
        a2_packing: true,
        a3_satisfaction: true,
        a3_termination: true,
        a3_weight: true,
        a_output: true,
        b1_pass_bound: true,
        b1_new_member: true,
        b2_forecast: true,
    };

    const ALL_FAIL: LearnClaims = LearnClaims {
        a1_i_cardinality: false,
        a1_ii_word_length: false,
        a1_iii_lhs_uniform: false,
        a1_iv_antichain: false,
        a2_packing: false,
        a3_satisfaction: false,
        a3_termination: false,
        a3_weight: false,
        a_output: false,
        b1_pass_bound: false,
        b1_new_member: false,
        b2_forecast: false,
    };

    /// `(name, bit)` for every claim, in report order.
    pub fn named(&self) -> [(&'static str, bool); 12] {
        [
            ("A1.i cardinality", self.a1_i_cardinality),
            ("A1.ii word length", self.a1_ii_word_length),
            ("A1.iii lhs uniform", self.a1_iii_lhs_uniform),
            ("A1.iv antichain", self.a1_iv_antichain),
            ("A2 packing", self.a2_packing),
            ("A3 satisfaction", self.a3_satisfaction),
            ("A3 termination", self.a3_termination),
            ("A3 weight", self.a3_weight),
            ("A output", self.a_output),
            ("B1 pass bound", self.b1_pass_bound),
            ("B1 new member", self.b1_new_member),
            ("B2 forecast", self.b2_forecast),
        ]
    }

    pub fn all(&self) -> bool {
        self.named().iter().all(|&(_, ok)| ok)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.named()
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|&(name, _)| name)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WorldRecord {
    pub index: usize,
    pub world_seed: u64,
    pub shape: &'static str,
    pub k: usize,
    pub n_max: usize,
    pub s_size: usize,
    /// `|T ∩ Σ^{<=n_max}|`
    pub members: usize,
    pub sat_runs: usize,
    pub sat_runs_packing: usize,
    pub packs: usize,
    pub max_sat_passes: usize,
    pub max_while_passes: usize,
    pub list_len: usize,
    pub claims: LearnClaims,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LearnSummary {
    pub worlds: usize,
    pub worlds_passed: usize,
    pub sat_runs: usize,
    pub sat_runs_packing: usize,
    pub packs: usize,
    pub max_sat_passes: usize,
    pub max_while_passes: usize,
    pub words_checked: usize,
    /// claim name -> number of worlds violating it
    pub violations: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LearnReport {
    pub summary: LearnSummary,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub records: Vec<WorldRecord>,
}

impl LearnReport {
    pub fn failures(&self) -> Vec<String> {
        self.summary
            .violations
            .iter()
            .map(|(name, count)| format!("{name}: {count} of {} worlds", self.summary.worlds))
            .collect()
    }
}

/// Claim A checks over one `learn_sat` run, pass by pass.
fn check_sat_run(
    run: &LearnSatRun,
    world: &SparseWorld,
    target: &dyn TargetOracle,
    claims: &mut LearnClaims,
) {
    let s = world.sparse_set();
    let state = &run.state;
    let all_checks =
        std::iter::once(&state.initial_checks).chain(state.passes.iter().map(|p| &p.checks));
    for c in all_checks {
        claims.a1_i_cardinality &= c.cardinality;
        claims.a1_ii_word_length &= c.word_length;
        claims.a1_iii_lhs_uniform &= c.lhs_uniform;
        claims.a1_iv_antichain &= c.antichain;
        claims.a3_satisfaction &= c.satisfied;
    }
    for pass in &state.passes {
        if let PassAction::Pack { packing, .. } = &pass.action {
            claims.a2_packing &= oracle::clause_holds(&packing.alpha, s)
                && packing.beta != packing.gamma
                && oracle::clause_derives(&packing.alpha, &packing.beta)
                && oracle::clause_derives(&packing.alpha, &packing.gamma)
                && packing.alpha.lhs() == &state.z;
        }
    }
    claims.a3_termination &= (state.pass_count as u128) <= run.pass_bound;
    claims.a3_weight &= run.weights_strictly_increase() && run.weights_within_bound();

    let gamma = &state.gamma;
    let output_ok = gamma.iter().all(|c| c.lhs() == &state.z)
        && oracle::formula_holds(gamma, s)
        && Word::all_up_to(state.n)
            .filter(|x| target.is_member(x))
            .all(|x| oracle::formula_derives(gamma, world.reduction(&x)));
    claims.a_output &= output_ok;
}

fn check_learn_all(
    run: &LearnAllRun,
    world: &SparseWorld,
    target: &dyn TargetOracle,
    claims: &mut LearnClaims,
) {
    for r in &run.lengths {
        claims.b1_pass_bound &= (r.passes as u128) <= r.pass_bound;
    }
    claims.b1_new_member &= run.passes.iter().all(|p| p.new_member_lhs);
    claims.b2_forecast &= Word::all_up_to(run.list.horizon).all(|x| {
        let predicted = run
            .list
            .formulas
            .iter()
            .all(|g| oracle::formula_derives(g, world.reduction(&x)));
        let via_library = forecast(&x, &run.list, world).ok();
        let truth = target.is_member(&x);
        predicted == truth && via_library == Some(truth)
    });
}

pub fn check_world(world: &SparseWorld, index: usize, shape: &'static str) -> WorldRecord {
    let target = world.target();
    let n_max = world.n_max();
    let members = Word::all_up_to(n_max)
        .filter(|x| target.is_member(x))
        .count();
    let mut record = WorldRecord {
        index,
        world_seed: world.seed(),
        shape,
        k: world.k(),
        n_max,
        s_size: world.sparse_set().len(),
        members,
        sat_runs: 0,
        sat_runs_packing: 0,
        packs: 0,
        max_sat_passes: 0,
        max_while_passes: 0,
        list_len: 0,
        claims: LearnClaims::ALL_PASS,
        error: None,
    };
    let run = match learn_all_traced(world, &target, n_max) {
        Ok(run) => run,
        Err(e) => {
            record.claims = LearnClaims::ALL_FAIL;
            record.error = Some(e.to_string());
            return record;
        }
    };
    for sat in &run.sat_runs {
        check_sat_run(sat, world, &target, &mut record.claims);
        let packs = sat.state.pack_count();
        record.packs += packs;
        record.sat_runs_packing += usize::from(packs > 0);
        record.max_sat_passes = record.max_sat_passes.max(sat.state.pass_count);
    }
    check_learn_all(&run, world, &target, &mut record.claims);
    record.sat_runs = run.sat_runs.len();
    record.max_while_passes = run.lengths.iter().map(|r| r.passes).max().unwrap_or(0);
    record.list_len = run.list.len();
    record
}

fn shape_for(index: usize, menu: &[WorldShape]) -> &WorldShape {
    &menu[index % menu.len()]
}

pub fn world_for(
    cfg: &ExperimentConfig,
    index: usize,
) -> (Result<SparseWorld, String>, &'static str) {
    let menu = world_menu();
    let shape = shape_for(index, &menu);
    let seed = derive_seed("world", cfg.seed, &[&(index as u64).to_le_bytes()]);
    let world = generate_world(
        seed,
        cfg.k_for(index),
        cfg.n_max,
        shape.p.clone(),
        shape.q.clone(),
        cfg.density,
    )
    .map_err(|e| e.to_string());
    (world, shape.name)
}

pub fn run_learn(cfg: &ExperimentConfig) -> LearnReport {
    let records: Vec<WorldRecord> = par_map(cfg.jobs, cfg.worlds, |index| {
        let (world, shape) = world_for(cfg, index);
        match world {
            Ok(world) => check_world(&world, index, shape),
            Err(e) => WorldRecord {
                index,
                world_seed: derive_seed("world", cfg.seed, &[&(index as u64).to_le_bytes()]),
                shape,
                k: cfg.k_for(index),
                n_max: cfg.n_max,
                s_size: 0,
                members: 0,
                sat_runs: 0,
                sat_runs_packing: 0,
                packs: 0,
                max_sat_passes: 0,
                max_while_passes: 0,
                list_len: 0,
                claims: LearnClaims::ALL_FAIL,
                error: Some(e),
            },
        }
    });

    summarize(records, cfg.verbose)
}

/// Checks a single explicit world, such as one loaded from a scenario file.
pub fn run_learn_world(world: &SparseWorld, verbose: bool) -> LearnReport {
    summarize(vec![check_world(world, 0, "explicit")], verbose)
}

fn summarize(records: Vec<WorldRecord>, verbose: bool) -> LearnReport {
    let mut summary = LearnSummary {
        worlds: records.len(),
        ..Default::default()
    };
    for r in &records {
        summary.worlds_passed += usize::from(r.claims.all() && r.error.is_none());
        summary.sat_runs += r.sat_runs;
        summary.sat_runs_packing += r.sat_runs_packing;
        summary.packs += r.packs;
        summary.max_sat_passes = summary.max_sat_passes.max(r.max_sat_passes);
        summary.max_while_passes = summary.max_while_passes.max(r.max_while_passes);
        summary.words_checked += Word::count_up_to(r.n_max);
        for name in r.claims.failed() {
            *summary.violations.entry(name.to_string()).or_default() += 1;
        }
    }
    LearnReport {
        summary,
        records: if verbose { records } else { Vec::new() },
    }
}
