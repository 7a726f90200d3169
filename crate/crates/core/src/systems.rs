//! Logic systems: a theory language, an interpretation format, and a
//! satisfaction relation, with model checking, enumeration and existence.

use crate::asp::{self, Program};
use crate::error::{Error, Result};
use crate::formula::{
    fmt_vars, Clause, CnfFormula, EpfFormula, Formula, Interpretation, Literal, Matrix,
    Quantifier, QuantifiedFormula, Var,
};
use crate::sat::{self, clausify, clausify_matrix, enumerate_models, Limits, ModelSet, Solver};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

/// The seven concrete systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SystemId {
    PfSat,
    CnfSat,
    Cnf3Sat,
    EpfFSat,
    PfMinSat,
    EpfFMinSat,
    LpAns,
}

impl SystemId {
    pub const ALL: [SystemId; 7] = [
        SystemId::PfSat,
        SystemId::CnfSat,
        SystemId::Cnf3Sat,
        SystemId::EpfFSat,
        SystemId::PfMinSat,
        SystemId::EpfFMinSat,
        SystemId::LpAns,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SystemId::PfSat => "pf-sat",
            SystemId::CnfSat => "cnf-sat",
            SystemId::Cnf3Sat => "cnf3-sat",
            SystemId::EpfFSat => "epf-fsat",
            SystemId::PfMinSat => "pf-minsat",
            SystemId::EpfFMinSat => "epf-fminsat",
            SystemId::LpAns => "lp-ans",
        }
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SystemId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        SystemId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| format!("unknown system {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Theory {
    Pf(Formula),
    Cnf(CnfFormula),
    Epf(EpfFormula),
    Lp(Program),
}

impl Theory {
    fn kind(&self) -> &'static str {
        match self {
            Theory::Pf(_) => "propositional formula",
            Theory::Cnf(_) => "CNF formula",
            Theory::Epf(_) => "existentially quantified formula",
            Theory::Lp(_) => "logic program",
        }
    }
}

/// Model-checking strategy for subset-minimality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    BruteForce,
    #[default]
    SatBased,
}

/// Interface shared by the built-in systems and machine-defined ones.
pub trait LogicSystem {
    type Theory: fmt::Debug;
    type Model: Clone + Ord + fmt::Debug + fmt::Display;

    fn name(&self) -> String;

    /// Membership of `t` in the theory language.
    fn theory_check(&self, t: &Self::Theory) -> Result<()>;

    /// Length every model of `t` must have.
    fn model_size(&self, t: &Self::Theory) -> Result<usize>;

    fn model_check(&self, t: &Self::Theory, w: &Self::Model) -> Result<bool>;

    fn enumerate_models(&self, t: &Self::Theory) -> Result<Vec<Self::Model>>;

    fn has_model(&self, t: &Self::Theory) -> Result<bool> {
        Ok(!self.enumerate_models(t)?.is_empty())
    }
}

/// A built-in system with its resource caps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct System {
    pub id: SystemId,
    pub limits: Limits,
}

impl System {
    pub fn new(id: SystemId) -> Self {
        System {
            id,
            limits: Limits::default(),
        }
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    /// The variables every interpretation of `t` ranges over.
    pub fn interp_domain(&self, t: &Theory) -> Result<BTreeSet<Var>> {
        self.check(t)?;
        Ok(match t {
            Theory::Pf(f) => f.vars(),
            Theory::Cnf(c) => c.vars(),
            Theory::Epf(e) => e.free(),
            Theory::Lp(p) => p.universe().clone(),
        })
    }

    fn check(&self, t: &Theory) -> Result<()> {
        use SystemId::*;
        let ok = matches!(
            (self.id, t),
            (PfSat | PfMinSat, Theory::Pf(_))
                | (CnfSat | Cnf3Sat, Theory::Cnf(_))
                | (EpfFSat | EpfFMinSat, Theory::Epf(_))
                | (LpAns, Theory::Lp(_))
        );
        if !ok {
            return Err(Error::MalformedTheory(format!(
                "{} does not accept a {}",
                self.id,
                t.kind()
            )));
        }
        if let (Cnf3Sat, Theory::Cnf(c)) = (self.id, t) {
            if let Some(clause) = c.clauses().iter().find(|c| c.len() > 3) {
                return Err(Error::MalformedTheory(format!(
                    "clause {clause} has more than 3 literals"
                )));
            }
        }
        Ok(())
    }

    fn check_domain(&self, t: &Theory, w: &Interpretation) -> Result<()> {
        let domain = self.interp_domain(t)?;
        if w.domain() != &domain {
            return Err(Error::DomainMismatch {
                expected: fmt_vars(&domain),
                found: fmt_vars(w.domain()),
            });
        }
        Ok(())
    }

    pub fn model_check(&self, t: &Theory, w: &Interpretation) -> Result<bool> {
        self.check_domain(t, w)?;
        match t {
            Theory::Pf(f) if self.id == SystemId::PfSat => f.evaluate(w),
            Theory::Pf(f) => is_minimal_model(f, w, Strategy::SatBased, &self.limits),
            Theory::Cnf(c) => c.evaluate(w),
            Theory::Epf(e) if self.id == SystemId::EpfFSat => fsat_check(e, w),
            Theory::Epf(e) => is_minimal_model(e, w, Strategy::SatBased, &self.limits),
            Theory::Lp(p) => asp::check_interpretation(p, w),
        }
    }

    pub fn enumerate(&self, t: &Theory) -> Result<ModelSet> {
        let domain = self.interp_domain(t)?;
        let mut models = match t {
            Theory::Pf(f) => enumerate_models(&clausify(f, 0), &domain, &self.limits)?,
            Theory::Cnf(c) => enumerate_models(c, &domain, &self.limits)?,
            Theory::Epf(e) => {
                let min = domain.iter().next_back().map_or(0, |v| v.index());
                enumerate_models(&clausify_matrix(e.matrix(), min), &domain, &self.limits)?
            }
            Theory::Lp(p) => return asp::enumerate_answer_sets(p, &self.limits),
        };
        if matches!(self.id, SystemId::PfMinSat | SystemId::EpfFMinSat) {
            keep_minimal(&mut models);
        }
        Ok(models)
    }

    pub fn has_model(&self, t: &Theory) -> Result<bool> {
        self.check(t)?;
        Ok(match (self.id, t) {
            (SystemId::PfSat, Theory::Pf(f)) => sat::is_satisfiable(f),
            (SystemId::CnfSat | SystemId::Cnf3Sat, Theory::Cnf(c)) => {
                sat::solve(c, &Interpretation::default()).is_sat()
            }
            (SystemId::EpfFSat, Theory::Epf(e)) => {
                sat::solve(&clausify_matrix(e.matrix(), 0), &Interpretation::default()).is_sat()
            }
            _ => !self.enumerate(t)?.is_empty(),
        })
    }
}

impl LogicSystem for System {
    type Theory = Theory;
    type Model = Interpretation;

    fn name(&self) -> String {
        self.id.to_string()
    }

    fn theory_check(&self, t: &Theory) -> Result<()> {
        self.check(t)
    }

    fn model_size(&self, t: &Theory) -> Result<usize> {
        Ok(self.interp_domain(t)?.len())
    }

    fn model_check(&self, t: &Theory, w: &Interpretation) -> Result<bool> {
        System::model_check(self, t, w)
    }

    fn enumerate_models(&self, t: &Theory) -> Result<Vec<Interpretation>> {
        Ok(self.enumerate(t)?.models().to_vec())
    }

    fn has_model(&self, t: &Theory) -> Result<bool> {
        System::has_model(self, t)
    }
}

/// Drops every model that has a model with strictly fewer true atoms below it.
fn keep_minimal(models: &mut ModelSet) {
    let all = models.models().to_vec();
    models.retain(|m| {
        !all.iter().any(|o| {
            o.true_atoms().len() < m.true_atoms().len() && o.true_atoms().is_subset(m.true_atoms())
        })
    });
}

pub fn model_check(sys: SystemId, t: &Theory, w: &Interpretation) -> Result<bool> {
    System::new(sys).model_check(t, w)
}

pub fn enumerate_models_sys(sys: SystemId, t: &Theory) -> Result<ModelSet> {
    System::new(sys).enumerate(t)
}

pub fn has_model(sys: SystemId, t: &Theory) -> Result<bool> {
    System::new(sys).has_model(t)
}

/// FSat: `w` over the free variables extends to a model of the matrix.
pub fn fsat_check(f: &EpfFormula, w: &Interpretation) -> Result<bool> {
    let rest = f.substitute(w)?;
    Ok(match rest {
        Matrix::Formula(g) => {
            if f.bound().is_empty() {
                g.eval_by(&|v| Err(Error::UndefinedVariable(v)))?
            } else {
                sat::is_satisfiable(&g)
            }
        }
        Matrix::Cnf(c) => sat::solve(&c, &Interpretation::default()).is_sat(),
    })
}

/// Anything minimality can be checked against.
#[derive(Debug, Clone, Copy)]
pub enum Minimizable<'a> {
    Pf(&'a Formula),
    Epf(&'a EpfFormula),
}

impl<'a> From<&'a Formula> for Minimizable<'a> {
    fn from(f: &'a Formula) -> Self {
        Minimizable::Pf(f)
    }
}

impl<'a> From<&'a EpfFormula> for Minimizable<'a> {
    fn from(f: &'a EpfFormula) -> Self {
        Minimizable::Epf(f)
    }
}

/// `m` is a model and no assignment with strictly fewer true atoms is.
pub fn is_minimal_model<'a>(
    f: impl Into<Minimizable<'a>>,
    m: &Interpretation,
    strategy: Strategy,
    limits: &Limits,
) -> Result<bool> {
    let owned;
    let epf = match f.into() {
        Minimizable::Epf(e) => e,
        Minimizable::Pf(p) => {
            owned = EpfFormula::new([], p.clone())?;
            &owned
        }
    };
    let free = epf.free();
    if m.domain() != &free {
        return Err(Error::DomainMismatch {
            expected: fmt_vars(&free),
            found: fmt_vars(m.domain()),
        });
    }
    if !fsat_check(epf, m)? {
        return Ok(false);
    }
    match strategy {
        Strategy::BruteForce => {
            let atoms: Vec<Var> = m.true_atoms().iter().copied().collect();
            if atoms.len() > limits.brute_force_atoms {
                return Err(Error::limit(
                    "true atoms for brute-force minimality",
                    limits.brute_force_atoms,
                    atoms.len(),
                ));
            }
            let full = (1u64 << atoms.len()) - 1;
            for mask in 0..full {
                let subset: BTreeSet<Var> = atoms
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, v)| *v)
                    .collect();
                if fsat_check(epf, &Interpretation::new(free.clone(), subset)?)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Strategy::SatBased => {
            let min = free.iter().next_back().map_or(0, |v| v.index());
            let mut solver = Solver::from_cnf(&clausify_matrix(epf.matrix(), min));
            for v in free.difference(m.true_atoms()) {
                solver.add_clause(&[v.neg()]);
            }
            let shrink: Vec<Literal> = m.true_atoms().iter().map(|v| v.neg()).collect();
            solver.add_clause(&shrink);
            Ok(!solver.solve())
        }
    }
}

/// Builds the prenex formula whose models over the free variables `Z` of `f`
/// are exactly the minimal models of `f`:
/// `∃X ∀Z' ∀X' . φ(Z,X) ∧ (¬(Z'→Z) ∨ ¬φ(Z',X') ∨ Z'=Z)`.
pub fn minimal_membership_formula(f: &EpfFormula) -> Result<QuantifiedFormula> {
    let free: Vec<Var> = f.free().into_iter().collect();
    let bound: Vec<Var> = f.bound().iter().copied().collect();
    let mut next = f.matrix().max_var().map_or(1, |v| v.index() + 1);
    let mut fresh = || {
        let v = Var::new(next);
        next += 1;
        v
    };
    let z_copy: Vec<Var> = free.iter().map(|_| fresh()).collect();
    let x_copy: Vec<Var> = bound.iter().map(|_| fresh()).collect();
    let rename: BTreeMap<Var, Var> = free
        .iter()
        .zip(&z_copy)
        .chain(bound.iter().zip(&x_copy))
        .map(|(a, b)| (*a, *b))
        .collect();

    let phi = f.matrix().to_formula();
    let phi_copy = phi.rename(&rename);
    let pairs = || free.iter().zip(&z_copy).map(|(z, zc)| (Formula::Atom(*z), Formula::Atom(*zc)));
    let copy_implies = Formula::and_all(pairs().map(|(z, zc)| Formula::implies(zc, z)));
    let implies_copy = Formula::and_all(pairs().map(|(z, zc)| Formula::implies(z, zc)));
    let equal = Formula::and(copy_implies.clone(), implies_copy);
    let guard = Formula::or(
        Formula::or(Formula::not(copy_implies), Formula::not(phi_copy)),
        equal,
    );
    let matrix = Formula::and(phi, guard);

    let prefix = bound
        .iter()
        .map(|v| (Quantifier::Exists, *v))
        .chain(z_copy.iter().map(|v| (Quantifier::ForAll, *v)))
        .chain(x_copy.iter().map(|v| (Quantifier::ForAll, *v)))
        .collect();
    QuantifiedFormula::new(prefix, matrix)
}

/// Checks that `c` only has clauses of at most three literals.
pub fn is_3cnf(c: &CnfFormula) -> bool {
    c.clauses().iter().all(|cl: &Clause| cl.len() <= 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asp::Rule;
    use crate::formula::var_range;
    use crate::sat::qbf_eval;

    fn x(i: u32) -> Formula {
        Formula::atom(i)
    }

    fn interp(domain: &[u32], truth: &[u32]) -> Interpretation {
        Interpretation::new(
            domain.iter().map(|i| Var::new(*i)).collect(),
            truth.iter().map(|i| Var::new(*i)).collect(),
        )
        .unwrap()
    }

    fn all_assignments(domain: &BTreeSet<Var>) -> Vec<Interpretation> {
        let vars: Vec<Var> = domain.iter().copied().collect();
        (0u32..1 << vars.len())
            .map(|mask| {
                let bits: Vec<bool> = (0..vars.len()).map(|i| mask >> i & 1 == 1).collect();
                Interpretation::from_bits(domain, &bits).unwrap()
            })
            .collect()
    }

    #[test]
    fn model_check_examples() {
        let disj = Theory::Pf(Formula::or(x(1), x(2)));
        assert!(!model_check(SystemId::PfMinSat, &disj, &interp(&[1, 2], &[1, 2])).unwrap());
        assert!(model_check(SystemId::PfMinSat, &disj, &interp(&[1, 2], &[1])).unwrap());
        let e = Theory::Epf(EpfFormula::new([Var::new(2)], Formula::and(x(1), x(2))).unwrap());
        assert!(model_check(SystemId::EpfFSat, &e, &interp(&[1], &[1])).unwrap());
        assert!(!model_check(SystemId::EpfFSat, &e, &interp(&[1], &[])).unwrap());
    }

    #[test]
    fn model_check_errors() {
        let f = Theory::Pf(x(1));
        assert!(matches!(
            model_check(SystemId::PfSat, &f, &interp(&[1, 2], &[])),
            Err(Error::DomainMismatch { .. })
        ));
        assert!(matches!(
            model_check(SystemId::CnfSat, &f, &interp(&[1], &[])),
            Err(Error::MalformedTheory(_))
        ));
        let wide = CnfFormula::from_clauses(vec![Clause::new((1..=4).map(|i| Var::new(i).pos())).unwrap()]);
        assert!(matches!(
            has_model(SystemId::Cnf3Sat, &Theory::Cnf(wide)),
            Err(Error::MalformedTheory(_))
        ));
    }

    #[test]
    fn minimality_examples() {
        let limits = Limits::default();
        for strategy in [Strategy::BruteForce, Strategy::SatBased] {
            let disj = Formula::or(x(1), x(2));
            assert!(!is_minimal_model(&disj, &interp(&[1, 2], &[1, 2]), strategy, &limits).unwrap());
            let conj = Formula::and(x(1), x(2));
            assert!(is_minimal_model(&conj, &interp(&[1, 2], &[1, 2]), strategy, &limits).unwrap());
            // ∃x2 ((x1 ∧ x2) ∨ (¬x1 ∧ ¬x2)) with M = ∅ over {x1}
            let e = EpfFormula::new(
                [Var::new(2)],
                Formula::or(
                    Formula::and(x(1), x(2)),
                    Formula::and(Formula::not(x(1)), Formula::not(x(2))),
                ),
            )
            .unwrap();
            assert!(is_minimal_model(&e, &interp(&[1], &[]), strategy, &limits).unwrap());
        }
    }

    #[test]
    fn brute_force_minimality_cap() {
        let f = Formula::and_all((1..=4).map(x));
        let limits = Limits {
            brute_force_atoms: 3,
            ..Limits::default()
        };
        let m = interp(&[1, 2, 3, 4], &[1, 2, 3, 4]);
        assert!(matches!(
            is_minimal_model(&f, &m, Strategy::BruteForce, &limits),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn enumerate_examples() {
        let disj = Theory::Pf(Formula::or(x(1), x(2)));
        assert_eq!(enumerate_models_sys(SystemId::PfSat, &disj).unwrap().len(), 3);
        let minimal = enumerate_models_sys(SystemId::PfMinSat, &disj).unwrap().to_set();
        assert_eq!(minimal, [interp(&[1, 2], &[1]), interp(&[1, 2], &[2])].into());
        let e = Theory::Epf(EpfFormula::new([Var::new(2)], Formula::or(x(1), x(2))).unwrap());
        let models = enumerate_models_sys(SystemId::EpfFSat, &e).unwrap().to_set();
        assert_eq!(models, [interp(&[1], &[]), interp(&[1], &[1])].into());
    }

    #[test]
    fn has_model_examples() {
        let contradiction = Theory::Pf(Formula::and(x(1), Formula::not(x(1))));
        assert!(!has_model(SystemId::PfSat, &contradiction).unwrap());
        assert!(has_model(SystemId::PfMinSat, &Theory::Pf(Formula::or(x(1), x(2)))).unwrap());
        let a = Var::new(1);
        let odd = Theory::Lp(Program::new(vec![Rule::new(a, [], [a])], []));
        assert!(!has_model(SystemId::LpAns, &odd).unwrap());
    }

    #[test]
    fn membership_formula_examples() {
        let limits = Limits::default();
        let check = |f: &EpfFormula, m: &Interpretation| {
            let q = minimal_membership_formula(f).unwrap();
            qbf_eval(&q.substitute(m).unwrap(), &limits).unwrap()
        };
        // ∃x1 (z ∧ x1) with z = x2
        let conj = EpfFormula::new([Var::new(1)], Formula::and(x(2), x(1))).unwrap();
        assert!(check(&conj, &interp(&[2], &[2])));
        let disj = EpfFormula::new([Var::new(1)], Formula::or(x(2), x(1))).unwrap();
        assert!(!check(&disj, &interp(&[2], &[2])));
        assert!(check(&disj, &interp(&[2], &[])));

        let closed_sat = EpfFormula::new([Var::new(1)], x(1)).unwrap();
        assert!(check(&closed_sat, &Interpretation::default()));
        let closed_unsat =
            EpfFormula::new([Var::new(1)], Formula::and(x(1), Formula::not(x(1)))).unwrap();
        assert!(!check(&closed_unsat, &Interpretation::default()));
    }

    #[test]
    fn membership_formula_has_prenex_layout() {
        let f = EpfFormula::new([Var::new(1)], Formula::or(x(2), x(1))).unwrap();
        let q = minimal_membership_formula(&f).unwrap();
        let quantifiers: Vec<Quantifier> = q.prefix().iter().map(|(q, _)| *q).collect();
        assert_eq!(
            quantifiers,
            vec![Quantifier::Exists, Quantifier::ForAll, Quantifier::ForAll]
        );
        assert_eq!(q.free(), var_range(2, 2));
    }

    #[test]
    fn model_sets_agree_with_model_check() {
        let theories = [
            (SystemId::PfSat, Theory::Pf(Formula::implies(x(1), Formula::and(x(2), x(3))))),
            (SystemId::PfMinSat, Theory::Pf(Formula::or(Formula::and(x(1), x(2)), x(3)))),
            (
                SystemId::EpfFMinSat,
                Theory::Epf(EpfFormula::new([Var::new(3)], Formula::or(Formula::and(x(1), x(3)), x(2))).unwrap()),
            ),
        ];
        for (sys, t) in &theories {
            let domain = System::new(*sys).interp_domain(t).unwrap();
            let models = enumerate_models_sys(*sys, t).unwrap();
            for w in all_assignments(&domain) {
                assert_eq!(models.contains(&w), model_check(*sys, t, &w).unwrap(), "{sys} {w}");
            }
        }
    }
}
