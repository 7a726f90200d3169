//! Model-equivalent reductions: a theory map `f`, a per-theory witness map
//! `g_t`, and a verifier that checks `g_t` is a bijection between model sets.

use crate::error::{Error, Result};
use crate::formula::{Clause, CnfFormula, EpfFormula, Formula, Interpretation, Literal, Matrix, Var};
use crate::ntm::{validate_spec, NtmSpec, TmSystem};
use crate::sat::Limits;
use crate::systems::{LogicSystem, System, SystemId, Theory};
use crate::tableau::{self, TableauLayout};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// Extends an assignment over `source_domain` by auxiliary variables, each
/// defined by a formula over the source and earlier auxiliaries.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AuxMap {
    pub source_domain: BTreeSet<Var>,
    pub defs: Vec<(Var, Formula)>,
}

impl AuxMap {
    pub fn identity(domain: BTreeSet<Var>) -> Self {
        AuxMap {
            source_domain: domain,
            defs: Vec::new(),
        }
    }

    pub fn target_domain(&self) -> BTreeSet<Var> {
        let mut d = self.source_domain.clone();
        d.extend(self.defs.iter().map(|(v, _)| *v));
        d
    }

    pub fn apply(&self, w: &Interpretation) -> Result<Interpretation> {
        if w.domain() != &self.source_domain {
            return Err(Error::DomainMismatch {
                expected: crate::formula::fmt_vars(&self.source_domain),
                found: crate::formula::fmt_vars(w.domain()),
            });
        }
        let mut values: BTreeMap<Var, bool> = w.domain().iter().map(|v| (*v, w.true_atoms().contains(v))).collect();
        for (v, def) in &self.defs {
            let value = def.eval_by(&|x| values.get(&x).copied().ok_or(Error::UndefinedVariable(x)))?;
            values.insert(*v, value);
        }
        Ok(Interpretation::from_fn(values.keys().copied().collect(), |v| values[&v]))
    }
}

struct Clauses {
    out: Vec<Clause>,
    next: u32,
}

impl Clauses {
    fn fresh(&mut self) -> Var {
        self.next += 1;
        Var::new(self.next)
    }

    /// Tautologies carry no constraint and are skipped.
    fn push(&mut self, lits: impl IntoIterator<Item = Literal>) {
        if let Ok(c) = Clause::new(lits) {
            self.out.push(c);
        }
    }
}

/// Tseitin encoding with full biconditional labels on `And`, `Or` and
/// `Implies`; negations fold into literals, constants get unit-defined labels.
/// Returns the clauses and the map computing every label from the source.
pub fn tseitin(f: &Formula) -> (CnfFormula, AuxMap) {
    tseitin_after(f, f.max_var().map_or(0, Var::index))
}

/// Like [`tseitin`], numbering labels from `last + 1`.
pub fn tseitin_after(f: &Formula, last: u32) -> (CnfFormula, AuxMap) {
    let mut cl = Clauses {
        out: Vec::new(),
        next: last.max(f.max_var().map_or(0, Var::index)),
    };
    let mut defs = Vec::new();
    let root = label(f, &mut cl, &mut defs);
    cl.push([root]);
    let num_vars = cl.next;
    let mut cnf = CnfFormula::from_clauses(cl.out);
    cnf.reserve_vars(num_vars);
    let map = AuxMap {
        source_domain: f.vars(),
        defs,
    };
    (cnf, map)
}

fn label(f: &Formula, cl: &mut Clauses, defs: &mut Vec<(Var, Formula)>) -> Literal {
    match f {
        Formula::Atom(v) => v.pos(),
        Formula::Not(g) => !label(g, cl, defs),
        Formula::ConstTrue | Formula::ConstFalse => {
            let a = cl.fresh();
            let value = matches!(f, Formula::ConstTrue);
            cl.push([Literal::new(a, value)]);
            defs.push((a, f.clone()));
            a.pos()
        }
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
            let a = cl.fresh();
            let x = label(l, cl, defs);
            let x = if matches!(f, Formula::Implies(..)) { !x } else { x };
            let y = label(r, cl, defs);
            let a = a.pos();
            match f {
                Formula::And(..) => {
                    cl.push([!a, x]);
                    cl.push([!a, y]);
                    cl.push([a, !x, !y]);
                }
                _ => {
                    cl.push([a, !x]);
                    cl.push([a, !y]);
                    cl.push([!a, x, y]);
                }
            }
            defs.push((a.var(), lit_formula(f, x, y)));
            a
        }
    }
}

fn lit_formula(f: &Formula, x: Literal, y: Literal) -> Formula {
    match f {
        Formula::And(..) => Formula::and(x.to_formula(), y.to_formula()),
        _ => Formula::or(x.to_formula(), y.to_formula()),
    }
}

/// Splits clauses longer than three literals with a chain of determined
/// auxiliaries `y_j ↔ (l_{j+2} ∨ y_{j+1})`, `y_{k-3} ↔ (l_{k-1} ∨ l_k)`.
pub fn cnf_to_3cnf(c: &CnfFormula) -> (CnfFormula, AuxMap) {
    let mut cl = Clauses {
        out: Vec::new(),
        next: c.num_vars(),
    };
    let mut defs = Vec::new();
    for clause in c.clauses() {
        let l = clause.literals();
        if l.len() <= 3 {
            cl.out.push(clause.clone());
            continue;
        }
        let k = l.len();
        let ys: Vec<Var> = (0..k - 3).map(|_| cl.fresh()).collect();
        cl.push([l[0], l[1], ys[0].pos()]);
        let mut chain = Vec::new();
        for j in 0..k - 3 {
            let a = l[j + 2];
            let b = if j + 1 < k - 3 { ys[j + 1].pos() } else { l[k - 1] };
            let y = ys[j].pos();
            cl.push([!y, a, b]);
            cl.push([y, !a]);
            cl.push([y, !b]);
            chain.push((ys[j], Formula::or(a.to_formula(), b.to_formula())));
        }
        defs.extend(chain.into_iter().rev());
    }
    let num_vars = cl.next;
    let mut cnf = CnfFormula::from_clauses(cl.out);
    cnf.reserve_vars(num_vars);
    (
        cnf,
        AuxMap {
            source_domain: c.vars(),
            defs,
        },
    )
}

pub fn pf_to_epf(f: &Formula) -> EpfFormula {
    EpfFormula::new([], f.clone()).expect("empty prefix")
}

/// The dual-rail construction split into parts, so individual rail clauses
/// can be inspected or withheld.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualRail {
    pub source: EpfFormula,
    /// `(x_i, x'_i)` pairs.
    pub primes: Vec<(Var, Var)>,
    /// `(x_i ∨ x'_i)` and `(¬x_i ∨ ¬x'_i)` for every free `x_i`.
    pub rails: Vec<Clause>,
}

impl DualRail {
    pub fn new(f: &EpfFormula) -> Self {
        let mut next = f.matrix().max_var().map_or(0, Var::index);
        let primes: Vec<(Var, Var)> = f
            .free()
            .into_iter()
            .map(|x| {
                next += 1;
                (x, Var::new(next))
            })
            .collect();
        let rails = primes
            .iter()
            .flat_map(|(x, p)| {
                [
                    Clause::new([x.pos(), p.pos()]).expect("distinct"),
                    Clause::new([x.neg(), p.neg()]).expect("distinct"),
                ]
            })
            .collect();
        DualRail {
            source: f.clone(),
            primes,
            rails,
        }
    }

    /// `∃Y (φ ∧ rails)`.
    pub fn assemble(&self, rails: &[Clause]) -> EpfFormula {
        let matrix = match self.source.matrix() {
            Matrix::Cnf(c) => {
                let mut c = c.clone();
                c.extend(rails.iter().cloned());
                Matrix::Cnf(c)
            }
            Matrix::Formula(f) => Matrix::Formula(Formula::and(
                f.clone(),
                Formula::and_all(rails.iter().map(Clause::to_formula)),
            )),
        };
        EpfFormula::new(self.source.bound().iter().copied(), matrix).expect("bound vars kept")
    }

    pub fn formula(&self) -> EpfFormula {
        self.assemble(&self.rails)
    }

    /// `g(M) = M ∪ {x'_i : x_i ∉ M}`.
    pub fn aux_map(&self) -> AuxMap {
        AuxMap {
            source_domain: self.source.free(),
            defs: self
                .primes
                .iter()
                .map(|(x, p)| (*p, Formula::not(Formula::Atom(*x))))
                .collect(),
        }
    }
}

pub fn dual_rail(f: &EpfFormula) -> (EpfFormula, AuxMap) {
    let d = DualRail::new(f);
    (d.formula(), d.aux_map())
}

/// `∃X∃Y (φ ∧ (z ∨ ψ))` with ψ renamed apart from φ and `z` fresh.
/// `{z}` is a minimal model iff φ is satisfiable and ψ is not.
pub fn sat_unsat_gadget(phi: &Formula, psi: &Formula) -> (EpfFormula, Var) {
    let mut next = phi.max_var().map_or(0, Var::index);
    let rename: BTreeMap<Var, Var> = psi
        .vars()
        .into_iter()
        .map(|v| {
            next += 1;
            (v, Var::new(next))
        })
        .collect();
    let z = Var::new(next + 1);
    let psi = psi.rename(&rename);
    let bound: BTreeSet<Var> = phi.vars().into_iter().chain(psi.vars()).collect();
    let matrix = Formula::and(phi.clone(), Formula::or(Formula::Atom(z), psi));
    (EpfFormula::new(bound, matrix).expect("bound vars occur"), z)
}

pub type TheoryFn<S, T> =
    Arc<dyn Fn(&<S as LogicSystem>::Theory) -> Result<<T as LogicSystem>::Theory> + Send + Sync>;
pub type ModelFn<S, T> =
    Box<dyn Fn(&<S as LogicSystem>::Model) -> Result<<T as LogicSystem>::Model> + Send + Sync>;
pub type WitnessFn<S, T> =
    Arc<dyn Fn(&<S as LogicSystem>::Theory) -> Result<ModelFn<S, T>> + Send + Sync>;

/// A pair `(f, g)` from one system to another. `g` yields the per-theory map `g_t`.
pub struct Reduction<S: LogicSystem, T: LogicSystem> {
    pub name: String,
    pub source: S,
    pub target: T,
    pub f: TheoryFn<S, T>,
    pub g: WitnessFn<S, T>,
}

impl<S: LogicSystem + Clone, T: LogicSystem + Clone> Clone for Reduction<S, T> {
    fn clone(&self) -> Self {
        Reduction {
            name: self.name.clone(),
            source: self.source.clone(),
            target: self.target.clone(),
            f: self.f.clone(),
            g: self.g.clone(),
        }
    }
}

impl<S: LogicSystem, T: LogicSystem> fmt::Debug for Reduction<S, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Reduction({}: {} -> {})", self.name, self.source.name(), self.target.name())
    }
}

impl<S, T> Reduction<S, T>
where
    S: LogicSystem + 'static,
    T: LogicSystem + 'static,
{
    /// Replaces the witness map, keeping `f`.
    pub fn with_witness(mut self, name: impl Into<String>, g: WitnessFn<S, T>) -> Self {
        self.name = name.into();
        self.g = g;
        self
    }

    /// `(f₂ ∘ f₁, g₂_{f₁(t)} ∘ g₁_t)`.
    pub fn then<U>(self, next: Reduction<T, U>) -> Reduction<S, U>
    where
        U: LogicSystem + 'static,
    {
        let (f1, g1) = (self.f, self.g);
        let (f2, g2) = (next.f, next.g);
        let f = {
            let (f1, f2) = (f1.clone(), f2.clone());
            Arc::new(move |t: &S::Theory| f2(&f1(t)?)) as TheoryFn<S, U>
        };
        let g = Arc::new(move |t: &S::Theory| {
            let inner = g1(t)?;
            let outer = g2(&f1(t)?)?;
            Ok(Box::new(move |w: &S::Model| outer(&inner(w)?)) as ModelFn<S, U>)
        }) as WitnessFn<S, U>;
        Reduction {
            name: format!("{}+{}", self.name, next.name),
            source: self.source,
            target: next.target,
            f,
            g,
        }
    }
}

fn builtin<F, G>(name: &str, source: SystemId, target: SystemId, limits: Limits, f: F, g: G) -> Reduction<System, System>
where
    F: Fn(&Theory) -> Result<Theory> + Send + Sync + 'static,
    G: Fn(&Theory) -> Result<AuxMap> + Send + Sync + 'static,
{
    Reduction {
        name: name.into(),
        source: System::new(source).with_limits(limits),
        target: System::new(target).with_limits(limits),
        f: Arc::new(f),
        g: Arc::new(move |t: &Theory| {
            let map = g(t)?;
            Ok(Box::new(move |w: &Interpretation| map.apply(w)) as ModelFn<System, System>)
        }),
    }
}

fn expect_pf(t: &Theory) -> Result<&Formula> {
    match t {
        Theory::Pf(f) => Ok(f),
        _ => Err(Error::MalformedTheory("expected a propositional formula".into())),
    }
}

fn expect_cnf(t: &Theory) -> Result<&CnfFormula> {
    match t {
        Theory::Cnf(c) => Ok(c),
        _ => Err(Error::MalformedTheory("expected a CNF formula".into())),
    }
}

fn expect_epf(t: &Theory) -> Result<&EpfFormula> {
    match t {
        Theory::Epf(e) => Ok(e),
        _ => Err(Error::MalformedTheory("expected an existentially quantified formula".into())),
    }
}

pub fn tseitin_reduction(limits: Limits) -> Reduction<System, System> {
    builtin(
        "tseitin",
        SystemId::PfSat,
        SystemId::CnfSat,
        limits,
        |t| Ok(Theory::Cnf(tseitin(expect_pf(t)?).0)),
        |t| Ok(tseitin(expect_pf(t)?).1),
    )
}

pub fn cnf3_reduction(limits: Limits) -> Reduction<System, System> {
    builtin(
        "cnf3",
        SystemId::CnfSat,
        SystemId::Cnf3Sat,
        limits,
        |t| Ok(Theory::Cnf(cnf_to_3cnf(expect_cnf(t)?).0)),
        |t| Ok(cnf_to_3cnf(expect_cnf(t)?).1),
    )
}

pub fn pf2epf_reduction(limits: Limits) -> Reduction<System, System> {
    builtin(
        "pf2epf",
        SystemId::PfSat,
        SystemId::EpfFSat,
        limits,
        |t| Ok(Theory::Epf(pf_to_epf(expect_pf(t)?))),
        |t| Ok(AuxMap::identity(expect_pf(t)?.vars())),
    )
}

pub fn dualrail_reduction(limits: Limits) -> Reduction<System, System> {
    builtin(
        "dualrail",
        SystemId::EpfFSat,
        SystemId::EpfFMinSat,
        limits,
        |t| Ok(Theory::Epf(dual_rail(expect_epf(t)?).0)),
        |t| Ok(dual_rail(expect_epf(t)?).1),
    )
}

/// Looks up a built-in reduction by its command-line name.
pub fn by_name(name: &str, limits: Limits) -> Option<Reduction<System, System>> {
    Some(match name {
        "tseitin" => tseitin_reduction(limits),
        "cnf3" => cnf3_reduction(limits),
        "pf2epf" => pf2epf_reduction(limits),
        "dualrail" => dualrail_reduction(limits),
        "tseitin+cnf3" => tseitin_reduction(limits).then(cnf3_reduction(limits)),
        _ => return None,
    })
}

/// The machine's system reduced to FSat through the nondeterministic tableau.
pub fn ntm_to_epf(m: &NtmSpec, limits: Limits) -> Result<Reduction<TmSystem, System>> {
    let violations = validate_spec(m);
    if !violations.is_empty() {
        return Err(Error::InvalidSpec(violations));
    }
    let spec = Arc::new(m.clone());
    let f = {
        let spec = spec.clone();
        Arc::new(move |t: &String| Ok(Theory::Epf(tableau::compile_nondet(&spec, t, &limits)?.0)))
            as TheoryFn<TmSystem, System>
    };
    let g = {
        let spec = spec.clone();
        Arc::new(move |t: &String| {
            let layout = TableauLayout::new(&spec, t, &limits)?;
            Ok(Box::new(move |w: &String| layout.row_one_model(w)) as ModelFn<TmSystem, System>)
        }) as WitnessFn<TmSystem, System>
    };
    Ok(Reduction {
        name: format!("tm:{}", m.name),
        source: TmSystem {
            spec: m.clone(),
            limits,
        },
        target: System::new(SystemId::EpfFSat).with_limits(limits),
        f,
        g,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub theory: String,
    pub source_count: usize,
    pub target_count: usize,
    pub g_total: bool,
    pub g_injective: bool,
    pub g_onto: bool,
    /// The first failure: offending interpretation and reason.
    pub counterexample: Option<(String, String)>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.g_total && self.g_injective && self.g_onto && self.source_count == self.target_count
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} |Mod_src|={} |Mod_tgt|={} total={} injective={} onto={}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.theory,
            self.source_count,
            self.target_count,
            self.g_total,
            self.g_injective,
            self.g_onto
        )?;
        if let Some((w, why)) = &self.counterexample {
            write!(f, " counterexample={w} ({why})")?;
        }
        Ok(())
    }
}

/// Enumerates both model sets and checks `g_t` is a bijection between them.
pub fn verify_reduction<S, T>(r: &Reduction<S, T>, t: &S::Theory) -> Result<VerificationReport>
where
    S: LogicSystem,
    T: LogicSystem,
{
    let source = r.source.enumerate_models(t)?;
    let ft = (r.f)(t)?;
    let target: BTreeSet<T::Model> = r.target.enumerate_models(&ft)?.into_iter().collect();
    let g = (r.g)(t)?;
    Ok(check_bijection(format!("{t:?}"), &source, &target, |w| g(w)))
}

/// Checks that `g` maps `source` one-to-one onto `target`.
pub fn check_bijection<A, B>(
    theory: String,
    source: &[A],
    target: &BTreeSet<B>,
    g: impl Fn(&A) -> Result<B>,
) -> VerificationReport
where
    A: Clone + Ord + fmt::Display,
    B: Clone + Ord + fmt::Display,
{
    let mut report = VerificationReport {
        theory,
        source_count: source.len(),
        target_count: target.len(),
        g_total: true,
        g_injective: true,
        g_onto: true,
        counterexample: None,
    };
    let fail = |report: &mut VerificationReport, w: String, why: String| {
        if report.counterexample.is_none() {
            report.counterexample = Some((w, why));
        }
    };
    let mut image: BTreeMap<B, A> = BTreeMap::new();
    for w in source {
        match g(w) {
            Err(e) => {
                report.g_total = false;
                fail(&mut report, w.to_string(), format!("g undefined: {e}"));
            }
            Ok(v) => {
                if !target.contains(&v) {
                    report.g_onto = false;
                    fail(&mut report, w.to_string(), format!("g maps to {v}, not a target model"));
                }
                if let Some(prev) = image.insert(v.clone(), w.clone()) {
                    report.g_injective = false;
                    fail(&mut report, w.to_string(), format!("same image {v} as {prev}"));
                }
            }
        }
    }
    if let Some(missed) = target.iter().find(|v| !image.contains_key(*v)) {
        report.g_onto = false;
        fail(&mut report, missed.to_string(), "target model outside the image of g".into());
    }
    report
}
