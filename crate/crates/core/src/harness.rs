//! Seeded corpora, brute-force oracles and the suite driver that cross-checks
//! every construction against them, including planted faults that must be caught.

use crate::asp::{self, Program, Rule};
use crate::error::{Error, Result};
use crate::formula::{Clause, CnfFormula, EpfFormula, Formula, Interpretation, Literal, Var};
use crate::gadgets::{self, ClauseIndex};
use crate::ntm::{all_strings, machines, NtmSpec, TmSystem};
use crate::reductions::{self, check_bijection, verify_reduction, DualRail, ModelFn, Reduction};
use crate::sat::{enumerate_models, enumerate_models_under, qbf_eval, solve, Limits};
use crate::systems::{
    is_minimal_model, minimal_membership_formula, model_check, LogicSystem, Strategy, System,
    SystemId, Theory,
};
use crate::tableau::{compile_det, compile_nondet, expected_sizes};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random formula over `x1..x{vars}` with nesting depth at most `depth`.
pub fn random_formula(rng: &mut impl Rng, vars: u32, depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..40) {
            0 => Formula::ConstTrue,
            1 => Formula::ConstFalse,
            _ => Formula::atom(rng.gen_range(1..=vars)),
        };
    }
    let op = rng.gen_range(0..4);
    let mut sub = || random_formula(rng, vars, depth - 1);
    match op {
        0 => Formula::not(sub()),
        1 => Formula::and(sub(), sub()),
        2 => Formula::or(sub(), sub()),
        _ => Formula::implies(sub(), sub()),
    }
}

pub fn random_clause(rng: &mut impl Rng, vars: u32, max_len: usize) -> Clause {
    let mut pool: Vec<u32> = (1..=vars).collect();
    pool.shuffle(rng);
    let len = rng.gen_range(1..=max_len.min(pool.len()).max(1));
    Clause::new(pool[..len].iter().map(|v| Literal::new(Var::new(*v), rng.gen_bool(0.5))))
        .expect("distinct variables")
}

pub fn random_cnf(rng: &mut impl Rng, vars: u32, max_clauses: usize, max_len: usize) -> CnfFormula {
    let n = rng.gen_range(1..=max_clauses);
    CnfFormula::from_clauses((0..n).map(|_| random_clause(rng, vars, max_len)).collect())
}

/// Free variables drawn from `x1..x{free}`, bound ones from the next `bound`.
pub fn random_epf(rng: &mut impl Rng, free: u32, bound: u32, depth: u32) -> EpfFormula {
    let f = random_formula(rng, free + bound, depth);
    let b: Vec<Var> = f.vars().into_iter().filter(|v| v.index() > free).collect();
    EpfFormula::new(b, f).expect("bound vars occur")
}

pub fn random_program(rng: &mut impl Rng, atoms: u32, max_rules: usize) -> Program {
    let n = rng.gen_range(0..=max_rules);
    let body = |rng: &mut _, max: usize| -> Vec<Var> {
        let k = Rng::gen_range(rng, 0..=max);
        (0..k).map(|_| Var::new(Rng::gen_range(rng, 1..=atoms))).collect()
    };
    let rules = (0..n)
        .map(|_| {
            let head = Var::new(rng.gen_range(1..=atoms));
            let pos = body(rng, 2);
            let neg = body(rng, 2);
            Rule::new(head, pos, neg)
        })
        .collect();
    Program::new(rules, (1..=atoms).map(Var::new))
}

/// Every assignment over `domain`, in counting order.
pub fn assignments(domain: &BTreeSet<Var>) -> impl Iterator<Item = Interpretation> + '_ {
    let vars: Vec<Var> = domain.iter().copied().collect();
    (0u64..1 << vars.len()).map(move |mask| {
        Interpretation::new(
            domain.clone(),
            vars.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, v)| *v)
                .collect(),
        )
        .expect("subset of domain")
    })
}

fn eval_with(f: &Formula, truth: &BTreeSet<Var>) -> bool {
    f.eval_by(&|v| Ok(truth.contains(&v))).expect("total valuation")
}

pub fn tt_models(f: &Formula, domain: &BTreeSet<Var>) -> BTreeSet<Interpretation> {
    assignments(domain).filter(|w| eval_with(f, w.true_atoms())).collect()
}

pub fn tt_sat(f: &Formula) -> bool {
    assignments(&f.vars()).any(|w| eval_with(f, w.true_atoms()))
}

/// `w` extends to a model of the matrix, by trying every bound assignment.
pub fn fsat_oracle(e: &EpfFormula, w: &Interpretation) -> bool {
    let matrix = e.matrix().to_formula();
    assignments(e.bound()).any(|b| {
        let truth: BTreeSet<Var> = w.true_atoms().union(b.true_atoms()).copied().collect();
        eval_with(&matrix, &truth)
    })
}

/// `w` is an FSat model and no assignment with fewer true atoms is.
pub fn fminsat_oracle(e: &EpfFormula, w: &Interpretation) -> bool {
    fsat_oracle(e, w)
        && !assignments(w.domain()).any(|o| {
            o.true_atoms().is_subset(w.true_atoms()) && o.true_atoms() != w.true_atoms() && fsat_oracle(e, &o)
        })
}

/// The reduct-based definition read directly: `M` is a minimal classical
/// model of the reduct `P^M`.
pub fn answer_set_oracle(p: &Program, m: &BTreeSet<Var>) -> bool {
    let reduct: Vec<&Rule> = p.rules().iter().filter(|r| r.neg_body.is_disjoint(m)).collect();
    let models = |s: &BTreeSet<Var>| {
        reduct
            .iter()
            .all(|r| !r.pos_body.is_subset(s) || s.contains(&r.head))
    };
    let within: BTreeSet<Var> = m.clone();
    models(m)
        && !assignments(&within).any(|o| o.true_atoms() != m && models(o.true_atoms()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Tableau,
    Minimality,
    Indicator,
    DualRail,
    Reductions,
    Engines,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Tableau,
        Suite::Minimality,
        Suite::Indicator,
        Suite::DualRail,
        Suite::Reductions,
        Suite::Engines,
    ];

    /// The command-line identifier.
    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Tableau => "theorem1",
            Suite::Minimality => "prop1",
            Suite::Indicator => "theorem3",
            Suite::DualRail => "lemma2",
            Suite::Reductions => "reductions",
            Suite::Engines => "engines",
        }
    }

    /// A descriptive alternative to [`Suite::as_str`].
    pub fn alias(self) -> &'static str {
        match self {
            Suite::Tableau => "tableau",
            Suite::Minimality => "minimality",
            Suite::Indicator => "indicator",
            Suite::DualRail => "dual-rail",
            Suite::Reductions => "reductions",
            Suite::Engines => "engines",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s || x.alias() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

/// One named check: how many cases ran and how many disagreed with the
/// oracle. Fault checks pass when a disagreement is found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub expect_failure: bool,
    pub detail: String,
}

impl Check {
    pub fn passed(&self) -> bool {
        if self.expect_failure {
            self.failures > 0
        } else {
            self.failures == 0 && self.cases > 0
        }
    }

    pub fn record(&self) -> String {
        format!(
            "suite={}\tcheck={}\tstatus={}\tcases={}\tmismatches={}\tfault={}\tdetail={}",
            self.suite,
            self.name,
            if self.passed() { "pass" } else { "fail" },
            self.cases,
            self.failures,
            self.expect_failure,
            self.detail
        )
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let kind = if self.expect_failure { " (planted fault)" } else { "" };
        write!(
            f,
            "{status} {}/{}{kind}: {} cases, {} mismatches",
            self.suite, self.name, self.cases, self.failures
        )?;
        if !self.detail.is_empty() {
            write!(f, "; {}", self.detail)?;
        }
        Ok(())
    }
}

/// Counts cases and keeps the first mismatch.
#[derive(Debug, Default)]
pub struct Tally {
    pub cases: usize,
    pub failures: usize,
    pub first: Option<String>,
}

impl Tally {
    pub fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    pub fn result(&mut self, r: Result<bool>, what: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.record(ok, what),
            Err(e) => self.record(false, || format!("{}: {e}", what())),
        }
    }

    pub fn check(self, suite: Suite, name: impl Into<String>, expect_failure: bool) -> Check {
        Check {
            suite,
            name: name.into(),
            cases: self.cases,
            failures: self.failures,
            expect_failure,
            detail: self.first.unwrap_or_default(),
        }
    }
}

/// Corpus sizes; defaults are the sizes the acceptance run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sizes {
    pub tm_len: usize,
    pub tm_len_linear: usize,
    pub membership: usize,
    pub gadget_pairs: usize,
    pub pi4_random: usize,
    pub dual_rail: usize,
    pub reductions: usize,
    pub solver_random: usize,
    pub solver_small: usize,
    pub minimality: usize,
    pub programs: usize,
}

impl Default for Sizes {
    fn default() -> Self {
        Sizes {
            tm_len: 2,
            tm_len_linear: 3,
            membership: 200,
            gadget_pairs: 200,
            pi4_random: 200,
            dual_rail: 300,
            reductions: 500,
            solver_random: 1000,
            solver_small: 500,
            minimality: 500,
            programs: 300,
        }
    }
}

impl Sizes {
    /// A reduced corpus for quick runs.
    pub fn smoke() -> Self {
        Sizes {
            tm_len: 1,
            tm_len_linear: 1,
            membership: 20,
            gadget_pairs: 20,
            pi4_random: 10,
            dual_rail: 20,
            reductions: 20,
            solver_random: 50,
            solver_small: 20,
            minimality: 20,
            programs: 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub sizes: Sizes,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 42,
            sizes: Sizes::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("suite {} seed {}\n", self.suite, self.seed);
        for c in &self.checks {
            out.push_str(&format!("  {c}\n"));
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        out.push_str(&format!(
            "  {} checks, {} failed: {}\n",
            self.checks.len(),
            failed,
            if failed == 0 { "PASS" } else { "FAIL" }
        ));
        out
    }

    pub fn to_records(&self) -> String {
        self.checks.iter().map(|c| c.record() + "\n").collect()
    }
}

pub fn run_suite(suite: Suite, config: &SuiteConfig) -> SuiteReport {
    let s = config.sizes;
    let seed = config.seed;
    let checks = match suite {
        Suite::Tableau => {
            let mut v = Vec::new();
            let (bijection, sizes) = tableau_checks(&machines::bundled(), s.tm_len, s.tm_len_linear);
            v.push(bijection);
            v.push(sizes);
            v.push(det_tableau_check(s.tm_len));
            v.push(fault_removed_window());
            v
        }
        Suite::Minimality => vec![
            membership_check(seed, s.membership),
            gadget_check(seed, s.gadget_pairs),
            fault_membership_guard(seed, s.membership),
        ],
        Suite::Indicator => {
            let corpus = indicator_corpus(seed, s.pi4_random);
            vec![
                upper_gadget_check(&corpus),
                lower_gadget_check(&corpus),
                fault_dropped_indicator(&corpus),
            ]
        }
        Suite::DualRail => vec![dual_rail_check(seed, s.dual_rail), fault_dropped_rail()],
        Suite::Reductions => {
            let mut v = reduction_checks(seed, s.reductions);
            v.push(fault_broken_witness());
            v
        }
        Suite::Engines => vec![
            solver_check(seed, s.solver_small, s.solver_random),
            minimality_check(seed, s.minimality),
            answer_set_check(seed, s.programs),
            qbf_check(seed, s.membership),
            fault_engine(seed, s.solver_small),
        ],
    };
    SuiteReport {
        suite,
        seed,
        checks,
    }
}

fn big_limits() -> Limits {
    Limits {
        enum_vars: usize::MAX,
        ..Limits::default()
    }
}

/// Theory strings of length `1..=max` over the machine's theory alphabet.
pub fn theory_strings(spec: &NtmSpec, max: usize) -> Vec<String> {
    (1..=max).flat_map(|n| all_strings(&spec.theory_alphabet, n)).collect()
}

/// Accepted witnesses against decoded tableau models, and the bijection
/// property of the row-1 witness map, for one `(machine, t)`.
pub fn tableau_entry(spec: &NtmSpec, t: &str) -> Result<(bool, bool, String)> {
    let limits = big_limits();
    let (f, comp) = compile_nondet(spec, t, &limits)?;
    let (vars, cells) = expected_sizes(&comp.layout);
    let width = comp.layout.width;
    let sizes_ok = comp.cnf().num_vars() as usize == vars
        && comp.phi_cell.len() == cells
        && comp.phi_accept.len() == width * width;

    let source = TmSystem {
        spec: spec.clone(),
        limits,
    };
    let accepted = source.enumerate_models(&t.to_string())?;
    let target = System::new(SystemId::EpfFSat)
        .with_limits(limits)
        .enumerate(&Theory::Epf(f))?;
    let decoded: BTreeSet<String> = target
        .iter()
        .map(|m| comp.model_to_witness(m))
        .collect::<Result<_>>()?;
    let report = check_bijection(
        format!("{} t={t}", spec.name),
        &accepted,
        &target.to_set(),
        |w: &String| comp.witness_to_model(w),
    );
    let same = decoded == accepted.iter().cloned().collect::<BTreeSet<_>>();
    let detail = format!(
        "{report}; n'={width} accepted={:?} decoded={:?}",
        accepted, decoded
    );
    Ok((same && report.passed(), sizes_ok, detail))
}

pub fn tableau_checks(specs: &[NtmSpec], max_len: usize, max_len_linear: usize) -> (Check, Check) {
    let mut bijection = Tally::default();
    let mut sizes = Tally::default();
    for spec in specs {
        let max = if spec.k0 == 1 { max_len.max(max_len_linear) } else { max_len };
        for t in theory_strings(spec, max) {
            let label = || format!("{} t={t}", spec.name);
            match tableau_entry(spec, &t) {
                Ok((ok, sizes_ok, detail)) => {
                    bijection.record(ok, || detail.clone());
                    sizes.record(sizes_ok, || format!("size formula violated for {}", label()));
                }
                Err(e) => {
                    bijection.record(false, || format!("{}: {e}", label()));
                    sizes.record(false, || format!("{}: {e}", label()));
                }
            }
        }
    }
    (
        bijection.check(Suite::Tableau, "tableau-bijection", false),
        sizes.check(Suite::Tableau, "tableau-sizes", false),
    )
}

/// Deterministic variant for the EQ machine: models of `G(t)` are exactly
/// the simulated tables, each fixed by its first row.
pub fn det_entry(spec: &NtmSpec, t: &str) -> Result<bool> {
    let limits = big_limits();
    let (g, comp) = compile_det(spec, t, &limits)?;
    let all: BTreeSet<Var> = (1..=g.num_vars()).map(Var::new).collect();
    let models = enumerate_models(&g, &all, &limits)?.to_set();
    let source = TmSystem {
        spec: spec.clone(),
        limits,
    };
    let accepted = source.enumerate_models(&t.to_string())?;
    let mut tables = BTreeSet::new();
    for w in &accepted {
        let table = comp.witness_to_model(w)?;
        if !g.evaluate(&table)? {
            return Ok(false);
        }
        let row = comp.layout.row_one_model(w)?;
        let ext = enumerate_models_under(&g, &all, &row, &limits)?;
        if ext.len() != 1 {
            return Ok(false);
        }
        tables.insert(table);
    }
    for w in all_strings(&spec.model_alphabet, comp.layout.m) {
        if !accepted.contains(&w) && solve(&g, &comp.layout.row_one_model(&w)?).is_sat() {
            return Ok(false);
        }
    }
    Ok(models == tables)
}

pub fn det_tableau_check(max_len: usize) -> Check {
    let spec = machines::by_name("eq").expect("bundled");
    let mut tally = Tally::default();
    for t in theory_strings(&spec, max_len) {
        tally.result(det_entry(&spec, &t), || format!("eq t={t}"));
    }
    tally.check(Suite::Tableau, "det-tableau", false)
}

/// Forbids the first window of an accepting PARITY run; decoded models must
/// then disagree with the simulator.
pub fn fault_removed_window() -> Check {
    let run = || -> Result<bool> {
        let spec = machines::by_name("parity").expect("bundled");
        let limits = big_limits();
        let (_, mut comp) = compile_nondet(&spec, "a", &limits)?;
        let (top, bottom) = comp.first_window("00")?;
        comp.forbid_window(&top, &bottom)?;
        let target = System::new(SystemId::EpfFSat)
            .with_limits(limits)
            .enumerate(&Theory::Epf(comp.quantified()))?;
        let decoded: BTreeSet<String> = target
            .iter()
            .map(|m| comp.model_to_witness(m))
            .collect::<Result<_>>()?;
        let accepted: BTreeSet<String> = TmSystem::new(spec).enumerate_models(&"a".to_string())?.into_iter().collect();
        Ok(decoded == accepted)
    };
    let mut tally = Tally::default();
    tally.result(run(), || "model sets differ after removing a legal window".into());
    tally.check(Suite::Tableau, "fault-removed-window", true)
}

fn membership_corpus(seed: u64, count: usize) -> Vec<EpfFormula> {
    let mut r = rng(seed ^ 0x5052_4f50);
    (0..count).map(|_| random_epf(&mut r, 3, 2, 3)).collect()
}

fn membership_cases(
    corpus: &[EpfFormula],
    build: impl Fn(&EpfFormula) -> Result<crate::formula::QuantifiedFormula>,
) -> Tally {
    let limits = Limits::default();
    let mut tally = Tally::default();
    for f in corpus {
        let q = match build(f) {
            Ok(q) => q,
            Err(e) => {
                tally.record(false, || format!("{f:?}: {e}"));
                continue;
            }
        };
        for m in assignments(&f.free()) {
            let direct = model_check(SystemId::EpfFMinSat, &Theory::Epf(f.clone()), &m);
            let via_qbf = q.substitute(&m).and_then(|s| qbf_eval(&s, &limits));
            let oracle = fminsat_oracle(f, &m);
            let ok = matches!((&direct, &via_qbf), (Ok(a), Ok(b)) if *a == *b && *a == oracle);
            tally.record(ok, || format!("{f:?} M={m}: direct={direct:?} qbf={via_qbf:?} oracle={oracle}"));
        }
    }
    tally
}

pub fn membership_check(seed: u64, count: usize) -> Check {
    membership_cases(&membership_corpus(seed, count), minimal_membership_formula)
        .check(Suite::Minimality, "membership-formula", false)
}

/// Drops the minimality guard so the formula only states satisfiability.
pub fn fault_membership_guard(seed: u64, count: usize) -> Check {
    membership_cases(&membership_corpus(seed, count), |f| {
        let prefix = f
            .bound()
            .iter()
            .map(|v| (crate::formula::Quantifier::Exists, *v))
            .collect();
        crate::formula::QuantifiedFormula::new(prefix, f.matrix().to_formula())
    })
    .check(Suite::Minimality, "fault-membership-guard", true)
}

/// Random `(φ, ψ)` pairs over at most four variables; a third of the ψ are
/// forced unsatisfiable so both outcomes occur.
pub fn gadget_pairs(seed: u64, count: usize) -> Vec<(Formula, Formula)> {
    let mut r = rng(seed ^ 0x4741_4447);
    (0..count)
        .map(|i| {
            let phi = random_formula(&mut r, 4, 3);
            let mut psi = random_formula(&mut r, 4, 3);
            if i % 3 == 0 {
                psi = Formula::and(psi.clone(), Formula::not(psi));
            }
            (phi, psi)
        })
        .collect()
}

pub fn gadget_check(seed: u64, count: usize) -> Check {
    let mut tally = Tally::default();
    for (phi, psi) in gadget_pairs(seed, count) {
        let (f, z) = reductions::sat_unsat_gadget(&phi, &psi);
        let m = Interpretation::new([z].into(), [z].into()).expect("z in domain");
        let expected = tt_sat(&phi) && !tt_sat(&psi);
        let got = model_check(SystemId::EpfFMinSat, &Theory::Epf(f), &m);
        tally.result(got.map(|g| g == expected), || format!("phi={phi:?} psi={psi:?} expected {expected}"));
    }
    tally.check(Suite::Minimality, "sat-unsat-gadget", false)
}

/// All `φ ⊆ π(3)` with at most four clauses or at least seven, then random
/// `φ ⊆ π(4)` of up to 24 clauses.
pub fn indicator_corpus(seed: u64, random: usize) -> Vec<(usize, CnfFormula)> {
    let mut out = Vec::new();
    let idx3 = ClauseIndex::new(3).expect("n >= 3");
    for mask in 0u32..1 << idx3.len() {
        let k = mask.count_ones();
        if k <= 4 || k >= 7 {
            let pos = (0..idx3.len()).filter(|i| mask >> i & 1 == 1).collect();
            out.push((3, gadgets::phi_from_positions(&idx3, &pos)));
        }
    }
    let idx4 = ClauseIndex::new(4).expect("n >= 3");
    let mut r = rng(seed ^ 0x5448_4d33);
    for _ in 0..random {
        let k = r.gen_range(0..=24);
        let mut all: Vec<usize> = (0..idx4.len()).collect();
        all.shuffle(&mut r);
        let pos = all[..k].iter().copied().collect();
        out.push((4, gadgets::phi_from_positions(&idx4, &pos)));
    }
    out
}

fn upper_cases(corpus: &[(usize, CnfFormula)], encode: impl Fn(&CnfFormula, usize) -> Result<Interpretation>) -> Tally {
    let mut tally = Tally::default();
    let psi: BTreeMap<usize, Theory> = [3, 4]
        .into_iter()
        .map(|n| (n, Theory::Epf(gadgets::build_psi_upper(n).expect("n >= 3"))))
        .collect();
    for (n, phi) in corpus {
        let expected = tt_sat(&phi.to_formula());
        let got = encode(phi, *n).and_then(|m| model_check(SystemId::EpfFSat, &psi[n], &m));
        tally.result(got.map(|g| g == expected), || format!("n={n} phi={phi:?} satisfiable={expected}"));
    }
    tally
}

pub fn upper_gadget_check(corpus: &[(usize, CnfFormula)]) -> Check {
    upper_cases(corpus, gadgets::encode_upper).check(Suite::Indicator, "upper-gadget", false)
}

pub fn lower_gadget_check(corpus: &[(usize, CnfFormula)]) -> Check {
    let mut tally = Tally::default();
    let limits = Limits::default();
    let psi: BTreeMap<usize, Formula> = [3, 4]
        .into_iter()
        .map(|n| (n, gadgets::build_psi_lower(n).expect("n >= 3")))
        .collect();
    for (n, phi) in corpus {
        let expected = !tt_sat(&phi.to_formula());
        let got = gadgets::encode_lower(phi, *n)
            .and_then(|m| is_minimal_model(&psi[n], &m, Strategy::SatBased, &limits));
        tally.result(got.map(|g| g == expected), || format!("n={n} phi={phi:?} unsatisfiable={expected}"));
    }
    tally.check(Suite::Indicator, "lower-gadget", false)
}

/// Encodes every φ without its last clause.
pub fn fault_dropped_indicator(corpus: &[(usize, CnfFormula)]) -> Check {
    upper_cases(corpus, |phi, n| {
        let mut clauses = phi.clauses().to_vec();
        clauses.pop();
        gadgets::encode_upper(&CnfFormula::from_clauses(clauses), n)
    })
    .check(Suite::Indicator, "fault-dropped-indicator", true)
}

pub fn dual_rail_check(seed: u64, count: usize) -> Check {
    let mut r = rng(seed ^ 0x4455_414c);
    let red = reductions::dualrail_reduction(Limits::default());
    let mut tally = Tally::default();
    for _ in 0..count {
        let f = random_epf(&mut r, 4, 2, 3);
        let run = || -> Result<bool> {
            let report = verify_reduction(&red, &Theory::Epf(f.clone()))?;
            let d = DualRail::new(&f);
            let map = d.aux_map();
            let source = System::new(SystemId::EpfFSat).enumerate(&Theory::Epf(f.clone()))?;
            let oracle: BTreeSet<Interpretation> = assignments(&f.free()).filter(|w| fsat_oracle(&f, w)).collect();
            let mut rails_ok = true;
            for m in &source {
                let g = map.apply(m)?;
                rails_ok &= d
                    .primes
                    .iter()
                    .all(|(x, p)| g.value(*x) != g.value(*p));
            }
            Ok(report.passed() && rails_ok && source.to_set() == oracle)
        };
        tally.result(run(), || format!("{f:?}"));
    }
    tally.check(Suite::DualRail, "dual-rail", false)
}

/// Withholds the rail clause `(x1 ∨ x1′)` on `∃∅ (x1 ∨ x2)`.
pub fn fault_dropped_rail() -> Check {
    let f = EpfFormula::new([], Formula::or(Formula::atom(1), Formula::atom(2))).expect("no prefix");
    let red = reductions::dualrail_reduction(Limits::default());
    let broken = Reduction {
        f: Arc::new(|t: &Theory| match t {
            Theory::Epf(e) => {
                let d = DualRail::new(e);
                Ok(Theory::Epf(d.assemble(&d.rails[1..])))
            }
            _ => Err(Error::MalformedTheory("expected an existentially quantified formula".into())),
        }),
        ..red
    };
    let mut tally = Tally::default();
    tally.result(
        verify_reduction(&broken, &Theory::Epf(f)).map(|r| r.passed()),
        || "bijection lost after dropping a rail clause".into(),
    );
    tally.check(Suite::DualRail, "fault-dropped-rail", true)
}

pub fn reduction_checks(seed: u64, count: usize) -> Vec<Check> {
    let limits = Limits::default();
    let mut r = rng(seed ^ 0x5245_4455);
    let pf: Vec<Formula> = (0..count).map(|_| random_formula(&mut r, 6, 4)).collect();
    let cnf: Vec<CnfFormula> = (0..count).map(|_| random_cnf(&mut r, 6, 6, 6)).collect();

    let mut out = Vec::new();
    let pf_suites: [(&str, Reduction<System, System>); 3] = [
        ("tseitin", reductions::tseitin_reduction(limits)),
        ("pf2epf", reductions::pf2epf_reduction(limits)),
        (
            "tseitin+cnf3",
            reductions::tseitin_reduction(limits).then(reductions::cnf3_reduction(limits)),
        ),
    ];
    for (name, red) in pf_suites {
        let mut tally = Tally::default();
        for f in &pf {
            let oracle = tt_models(f, &f.vars());
            let run = verify_reduction(&red, &Theory::Pf(f.clone())).map(|rep| rep.passed() && rep.source_count == oracle.len());
            tally.result(run, || format!("{f:?}"));
        }
        out.push(tally.check(Suite::Reductions, name, false));
    }
    let red = reductions::cnf3_reduction(limits);
    let mut tally = Tally::default();
    for c in &cnf {
        let oracle = tt_models(&c.to_formula(), &c.vars());
        let run = verify_reduction(&red, &Theory::Cnf(c.clone()))
            .map(|rep| rep.passed() && rep.source_count == oracle.len());
        tally.result(run, || format!("{c:?}"));
    }
    out.push(tally.check(Suite::Reductions, "cnf3", false));

    let mut tally = Tally::default();
    for f in pf.iter().take(count / 5 + 1) {
        let run = || -> Result<bool> {
            let (c, map) = reductions::tseitin(f);
            let domain = map.target_domain();
            for v in tt_models(f, &f.vars()) {
                let ext = enumerate_models_under(&c, &domain, &v, &limits)?;
                if ext.len() != 1 || ext.models()[0] != map.apply(&v)? {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        tally.result(run(), || format!("{f:?}"));
    }
    out.push(tally.check(Suite::Reductions, "tseitin-determined-aux", false));
    out
}

/// Flips the last auxiliary value computed by the Tseitin witness map.
pub fn fault_broken_witness() -> Check {
    let red = reductions::tseitin_reduction(Limits::default()).with_witness(
        "tseitin-broken",
        Arc::new(|t: &Theory| {
            let Theory::Pf(f) = t else {
                return Err(Error::MalformedTheory("expected a propositional formula".into()));
            };
            let map = reductions::tseitin(f).1;
            Ok(Box::new(move |w: &Interpretation| {
                let full = map.apply(w)?;
                match map.defs.last() {
                    Some((v, _)) => {
                        let flipped = full.value(*v) != Some(true);
                        Ok(full.with(*v, flipped))
                    }
                    None => Ok(full),
                }
            }) as ModelFn<System, System>)
        }),
    );
    let f = Formula::and(Formula::atom(1), Formula::or(Formula::atom(2), Formula::atom(3)));
    let mut tally = Tally::default();
    tally.result(verify_reduction(&red, &Theory::Pf(f)).map(|r| r.passed()), || {
        "broken witness map rejected".into()
    });
    tally.check(Suite::Reductions, "fault-broken-witness", true)
}

/// Every CNF over two variables, plus one- and two-clause CNFs over three.
pub fn exhaustive_small_cnfs() -> Vec<CnfFormula> {
    let clauses_over = |n: u32| -> Vec<Clause> {
        let mut out = Vec::new();
        for code in 1..3u32.pow(n) {
            let mut lits = Vec::new();
            let mut c = code;
            for v in 1..=n {
                match c % 3 {
                    1 => lits.push(Var::new(v).pos()),
                    2 => lits.push(Var::new(v).neg()),
                    _ => {}
                }
                c /= 3;
            }
            out.push(Clause::new(lits).expect("no complements"));
        }
        out
    };
    let mut out = Vec::new();
    let two = clauses_over(2);
    for mask in 0u32..1 << two.len() {
        let cs = (0..two.len()).filter(|i| mask >> i & 1 == 1).map(|i| two[i].clone()).collect();
        out.push(CnfFormula::from_clauses(cs));
    }
    let three = clauses_over(3);
    for i in 0..three.len() {
        out.push(CnfFormula::from_clauses(vec![three[i].clone()]));
        for j in i + 1..three.len() {
            out.push(CnfFormula::from_clauses(vec![three[i].clone(), three[j].clone()]));
        }
    }
    out
}

fn solver_cases(
    corpus: &[CnfFormula],
    enumerate: impl Fn(&CnfFormula, &BTreeSet<Var>) -> Result<BTreeSet<Interpretation>>,
) -> Tally {
    let mut tally = Tally::default();
    for c in corpus {
        let domain = c.vars();
        let oracle = tt_models(&c.to_formula(), &domain);
        let sat = solve(c, &Interpretation::default());
        let model_ok = match &sat.model {
            Some(m) => c.evaluate(&m.restrict(&domain).unwrap_or_else(|_| m.clone())).unwrap_or(false),
            None => true,
        };
        let run = enumerate(c, &domain).map(|got| got == oracle && sat.is_sat() == !oracle.is_empty() && model_ok);
        tally.result(run, || format!("{c:?}"));
    }
    tally
}

fn solver_corpus(seed: u64, small: usize, random: usize) -> Vec<CnfFormula> {
    let mut r = rng(seed ^ 0x534f_4c56);
    let mut corpus = exhaustive_small_cnfs();
    corpus.extend((0..small).map(|_| random_cnf(&mut r, 4, 8, 4)));
    corpus.extend((0..random).map(|_| random_cnf(&mut r, 8, 30, 4)));
    corpus
}

pub fn solver_check(seed: u64, small: usize, random: usize) -> Check {
    let limits = Limits::default();
    solver_cases(&solver_corpus(seed, small, random), |c, d| Ok(enumerate_models(c, d, &limits)?.to_set()))
        .check(Suite::Engines, "solver-vs-truth-table", false)
}

/// An enumerator that silently forces `x1` true.
pub fn fault_engine(seed: u64, small: usize) -> Check {
    let limits = Limits::default();
    solver_cases(&solver_corpus(seed, small, 0), |c, d| {
        let mut c = c.clone();
        if let Some(v) = d.iter().next() {
            c.push(Clause::new([v.pos()]).expect("unit"));
        }
        Ok(enumerate_models(&c, d, &limits)?.to_set())
    })
    .check(Suite::Engines, "fault-engine", true)
}

pub fn minimality_check(seed: u64, count: usize) -> Check {
    let mut r = rng(seed ^ 0x4d49_4e49);
    let limits = Limits::default();
    let mut tally = Tally::default();
    for i in 0..count {
        let vars = 2 + (i % 11) as u32;
        let f = random_formula(&mut r, vars, 4);
        let domain = f.vars();
        let models: Vec<Interpretation> = tt_models(&f, &domain).into_iter().collect();
        let candidate = if !models.is_empty() && r.gen_bool(0.8) {
            models[r.gen_range(0..models.len())].clone()
        } else {
            Interpretation::from_fn(domain.clone(), |_| r.gen_bool(0.5))
        };
        let oracle = models.contains(&candidate)
            && !models.iter().any(|o| {
                o.true_atoms().is_subset(candidate.true_atoms()) && o.true_atoms() != candidate.true_atoms()
            });
        let brute = is_minimal_model(&f, &candidate, Strategy::BruteForce, &limits);
        let sat = is_minimal_model(&f, &candidate, Strategy::SatBased, &limits);
        let ok = matches!((&brute, &sat), (Ok(a), Ok(b)) if *a == *b && *a == oracle);
        tally.record(ok, || format!("{f:?} M={candidate}: brute={brute:?} sat={sat:?} oracle={oracle}"));
    }
    tally.check(Suite::Engines, "minimality-strategies", false)
}

pub fn answer_set_check(seed: u64, count: usize) -> Check {
    let mut r = rng(seed ^ 0x4153_5031);
    let limits = Limits::default();
    let mut tally = Tally::default();
    for _ in 0..count {
        let p = random_program(&mut r, 5, 6);
        let oracle: BTreeSet<BTreeSet<Var>> = assignments(p.universe())
            .map(|w| w.true_atoms().clone())
            .filter(|m| answer_set_oracle(&p, m))
            .collect();
        let run = asp::enumerate_answer_sets(&p, &limits).map(|got| {
            got.iter().map(|m| m.true_atoms().clone()).collect::<BTreeSet<_>>() == oracle
        });
        tally.result(run, || format!("{p}"));
    }
    tally.check(Suite::Engines, "answer-sets", false)
}

/// Closed QBFs against a direct recursive evaluation over the matrix.
pub fn qbf_check(seed: u64, count: usize) -> Check {
    let mut r = rng(seed ^ 0x5142_4631);
    let limits = Limits::default();
    let mut tally = Tally::default();
    for _ in 0..count {
        let f = random_formula(&mut r, 5, 4);
        let vars: Vec<Var> = f.vars().into_iter().collect();
        let prefix: Vec<(crate::formula::Quantifier, Var)> = vars
            .iter()
            .map(|v| {
                let q = if r.gen_bool(0.5) {
                    crate::formula::Quantifier::Exists
                } else {
                    crate::formula::Quantifier::ForAll
                };
                (q, *v)
            })
            .collect();
        let oracle = qbf_oracle(&prefix, &f, &BTreeSet::new());
        let q = crate::formula::QuantifiedFormula::new(prefix, f.clone()).expect("distinct vars");
        tally.result(qbf_eval(&q, &limits).map(|g| g == oracle), || format!("{q:?}"));
    }
    tally.check(Suite::Engines, "qbf-expansion", false)
}

fn qbf_oracle(prefix: &[(crate::formula::Quantifier, Var)], f: &Formula, truth: &BTreeSet<Var>) -> bool {
    match prefix.split_first() {
        None => eval_with(f, truth),
        Some(((q, v), rest)) => {
            let mut with = truth.clone();
            with.insert(*v);
            let (a, b) = (qbf_oracle(rest, f, truth), qbf_oracle(rest, f, &with));
            match q {
                crate::formula::Quantifier::Exists => a || b,
                crate::formula::Quantifier::ForAll => a && b,
            }
        }
    }
}
