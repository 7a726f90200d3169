//! Propositional formulas, clause form, and existentially quantified formulas
//! with free variables, together with truth assignments over them.

use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A propositional variable `x_i`, identified by its index `i >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    /// Panics if `index` is zero.
    pub fn new(index: u32) -> Self {
        assert!(index >= 1, "variable indices start at 1");
        Var(index)
    }

    pub fn try_new(index: u32) -> Option<Self> {
        (index >= 1).then_some(Var(index))
    }

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn pos(self) -> Literal {
        Literal::new(self, true)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Literal {
        Literal::new(self, false)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    var: Var,
    positive: bool,
}

impl Literal {
    pub fn new(var: Var, positive: bool) -> Self {
        Literal { var, positive }
    }

    /// Literal from a signed DIMACS integer; `None` for zero.
    pub fn from_dimacs(value: i64) -> Option<Self> {
        let index = u32::try_from(value.unsigned_abs()).ok()?;
        Var::try_new(index).map(|v| Literal::new(v, value > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        let i = i64::from(self.var.index());
        if self.positive {
            i
        } else {
            -i
        }
    }

    pub fn var(self) -> Var {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn complement(self) -> Self {
        Literal::new(self.var, !self.positive)
    }

    /// The truth value of this literal when its variable takes `value`.
    pub fn apply(self, value: bool) -> bool {
        value == self.positive
    }

    pub fn to_formula(self) -> Formula {
        let atom = Formula::Atom(self.var);
        if self.positive {
            atom
        } else {
            Formula::not(atom)
        }
    }
}

impl std::ops::Not for Literal {
    type Output = Literal;

    fn not(self) -> Literal {
        self.complement()
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.var)
        } else {
            write!(f, "~{}", self.var)
        }
    }
}

/// Propositional formula tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Var),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    ConstTrue,
    ConstFalse,
}

impl Formula {
    pub fn atom(index: u32) -> Self {
        Formula::Atom(Var::new(index))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// `(a -> b) & (b -> a)`.
    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    /// Balanced conjunction; the empty conjunction is `ConstTrue`.
    pub fn and_all(parts: impl IntoIterator<Item = Formula>) -> Self {
        balanced(parts.into_iter().collect(), Formula::ConstTrue, Formula::and)
    }

    /// Balanced disjunction; the empty disjunction is `ConstFalse`.
    pub fn or_all(parts: impl IntoIterator<Item = Formula>) -> Self {
        balanced(parts.into_iter().collect(), Formula::ConstFalse, Formula::or)
    }

    /// Node count.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::ConstTrue | Formula::ConstFalse => 1,
            Formula::Not(a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_into(&mut out);
        out
    }

    fn collect_into(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Atom(v) => {
                out.insert(*v);
            }
            Formula::ConstTrue | Formula::ConstFalse => {}
            Formula::Not(a) => a.collect_into(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_into(out);
                b.collect_into(out);
            }
        }
    }

    pub fn max_var(&self) -> Option<Var> {
        self.vars().into_iter().next_back()
    }

    pub fn evaluate(&self, v: &Interpretation) -> Result<bool> {
        self.eval_by(&|var| v.value(var).ok_or(Error::UndefinedVariable(var)))
    }

    /// Evaluates with a caller-supplied valuation.
    pub fn eval_by<F>(&self, value: &F) -> Result<bool>
    where
        F: Fn(Var) -> Result<bool>,
    {
        Ok(match self {
            Formula::Atom(v) => value(*v)?,
            Formula::ConstTrue => true,
            Formula::ConstFalse => false,
            Formula::Not(a) => !a.eval_by(value)?,
            Formula::And(a, b) => a.eval_by(value)? && b.eval_by(value)?,
            Formula::Or(a, b) => a.eval_by(value)? || b.eval_by(value)?,
            Formula::Implies(a, b) => !a.eval_by(value)? || b.eval_by(value)?,
        })
    }

    /// Replaces every variable for which `value` returns `Some` by a constant.
    pub fn assign<F>(&self, value: &F) -> Formula
    where
        F: Fn(Var) -> Option<bool>,
    {
        match self {
            Formula::Atom(v) => match value(*v) {
                Some(true) => Formula::ConstTrue,
                Some(false) => Formula::ConstFalse,
                None => self.clone(),
            },
            Formula::ConstTrue | Formula::ConstFalse => self.clone(),
            Formula::Not(a) => Formula::not(a.assign(value)),
            Formula::And(a, b) => Formula::and(a.assign(value), b.assign(value)),
            Formula::Or(a, b) => Formula::or(a.assign(value), b.assign(value)),
            Formula::Implies(a, b) => Formula::implies(a.assign(value), b.assign(value)),
        }
    }

    /// Renames variables; variables missing from `map` are kept.
    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> Formula {
        match self {
            Formula::Atom(v) => Formula::Atom(*map.get(v).unwrap_or(v)),
            Formula::ConstTrue | Formula::ConstFalse => self.clone(),
            Formula::Not(a) => Formula::not(a.rename(map)),
            Formula::And(a, b) => Formula::and(a.rename(map), b.rename(map)),
            Formula::Or(a, b) => Formula::or(a.rename(map), b.rename(map)),
            Formula::Implies(a, b) => Formula::implies(a.rename(map), b.rename(map)),
        }
    }

    /// Bottom-up constant folding. The result is either a constant or
    /// contains no constant nodes.
    pub fn fold_constants(&self) -> Formula {
        use Formula::*;
        match self {
            Atom(_) | ConstTrue | ConstFalse => self.clone(),
            Not(a) => match a.fold_constants() {
                ConstTrue => ConstFalse,
                ConstFalse => ConstTrue,
                x => Formula::not(x),
            },
            And(a, b) => match (a.fold_constants(), b.fold_constants()) {
                (ConstFalse, _) | (_, ConstFalse) => ConstFalse,
                (ConstTrue, x) | (x, ConstTrue) => x,
                (x, y) => Formula::and(x, y),
            },
            Or(a, b) => match (a.fold_constants(), b.fold_constants()) {
                (ConstTrue, _) | (_, ConstTrue) => ConstTrue,
                (ConstFalse, x) | (x, ConstFalse) => x,
                (x, y) => Formula::or(x, y),
            },
            Implies(a, b) => match (a.fold_constants(), b.fold_constants()) {
                (ConstFalse, _) | (_, ConstTrue) => ConstTrue,
                (ConstTrue, x) => x,
                (x, ConstFalse) => Formula::not(x).fold_constants(),
                (x, y) => Formula::implies(x, y),
            },
        }
    }
}

fn balanced(mut parts: Vec<Formula>, empty: Formula, join: fn(Formula, Formula) -> Formula) -> Formula {
    match parts.len() {
        0 => empty,
        1 => parts.pop().unwrap(),
        len => {
            let right = parts.split_off(len / 2);
            join(balanced(parts, empty.clone(), join), balanced(right, empty, join))
        }
    }
}

/// A disjunction of literals, canonically sorted by `(var, sign)` with
/// duplicates removed. Complementary pairs are rejected.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Result<Self> {
        let mut literals: Vec<Literal> = literals.into_iter().collect();
        literals.sort();
        literals.dedup();
        for pair in literals.windows(2) {
            if pair[0].var == pair[1].var {
                return Err(Error::TautologicalClause(pair[0].var));
            }
        }
        Ok(Clause { literals })
    }

    pub fn empty() -> Self {
        Clause {
            literals: Vec::new(),
        }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn max_var(&self) -> Option<Var> {
        self.literals.iter().map(|l| l.var).max()
    }

    pub fn evaluate(&self, v: &Interpretation) -> Result<bool> {
        for lit in &self.literals {
            let value = v.value(lit.var).ok_or(Error::UndefinedVariable(lit.var))?;
            if lit.apply(value) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn to_formula(&self) -> Formula {
        Formula::or_all(self.literals.iter().map(|l| l.to_formula()))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, lit) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{lit}")?;
        }
        write!(f, ")")
    }
}

/// Conjunction of clauses over variables `1..=num_vars`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CnfFormula {
    clauses: Vec<Clause>,
    num_vars: u32,
}

impl CnfFormula {
    pub fn new(num_vars: u32, clauses: Vec<Clause>) -> Result<Self> {
        for clause in &clauses {
            if let Some(var) = clause.max_var() {
                if var.index() > num_vars {
                    return Err(Error::VarOutOfRange { var, num_vars });
                }
            }
        }
        Ok(CnfFormula { clauses, num_vars })
    }

    /// Sets `num_vars` to the largest index that occurs.
    pub fn from_clauses(clauses: Vec<Clause>) -> Self {
        let num_vars = clauses
            .iter()
            .filter_map(Clause::max_var)
            .map(Var::index)
            .max()
            .unwrap_or(0);
        CnfFormula { clauses, num_vars }
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn into_clauses(self) -> Vec<Clause> {
        self.clauses
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    /// Widens the declared variable range; never shrinks it.
    pub fn reserve_vars(&mut self, num_vars: u32) {
        self.num_vars = self.num_vars.max(num_vars);
    }

    pub fn push(&mut self, clause: Clause) {
        if let Some(v) = clause.max_var() {
            self.num_vars = self.num_vars.max(v.index());
        }
        self.clauses.push(clause);
    }

    pub fn extend(&mut self, clauses: impl IntoIterator<Item = Clause>) {
        for c in clauses {
            self.push(c);
        }
    }

    /// Variables that occur in some clause.
    pub fn vars(&self) -> BTreeSet<Var> {
        self.clauses
            .iter()
            .flat_map(|c| c.literals.iter().map(|l| l.var))
            .collect()
    }

    pub fn max_clause_len(&self) -> usize {
        self.clauses.iter().map(Clause::len).max().unwrap_or(0)
    }

    pub fn evaluate(&self, v: &Interpretation) -> Result<bool> {
        for clause in &self.clauses {
            if !clause.evaluate(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_formula(&self) -> Formula {
        Formula::and_all(self.clauses.iter().map(Clause::to_formula))
    }

    /// Applies a partial assignment: satisfied clauses are dropped and false
    /// literals removed.
    pub fn assign<F>(&self, value: &F) -> CnfFormula
    where
        F: Fn(Var) -> Option<bool>,
    {
        let mut clauses = Vec::new();
        'outer: for clause in &self.clauses {
            let mut kept = Vec::new();
            for lit in &clause.literals {
                match value(lit.var) {
                    Some(b) if lit.apply(b) => continue 'outer,
                    Some(_) => {}
                    None => kept.push(*lit),
                }
            }
            clauses.push(Clause { literals: kept });
        }
        CnfFormula {
            clauses,
            num_vars: self.num_vars,
        }
    }
}

/// The matrix of an existentially quantified formula: a formula tree or,
/// for large generated instances, a clause list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Matrix {
    Formula(Formula),
    Cnf(CnfFormula),
}

impl Matrix {
    pub fn vars(&self) -> BTreeSet<Var> {
        match self {
            Matrix::Formula(f) => f.vars(),
            Matrix::Cnf(c) => c.vars(),
        }
    }

    pub fn evaluate(&self, v: &Interpretation) -> Result<bool> {
        match self {
            Matrix::Formula(f) => f.evaluate(v),
            Matrix::Cnf(c) => c.evaluate(v),
        }
    }

    pub fn to_formula(&self) -> Formula {
        match self {
            Matrix::Formula(f) => f.clone(),
            Matrix::Cnf(c) => c.to_formula(),
        }
    }

    pub fn assign<F>(&self, value: &F) -> Matrix
    where
        F: Fn(Var) -> Option<bool>,
    {
        match self {
            Matrix::Formula(f) => Matrix::Formula(f.assign(value)),
            Matrix::Cnf(c) => Matrix::Cnf(c.assign(value)),
        }
    }

    pub fn max_var(&self) -> Option<Var> {
        match self {
            Matrix::Formula(f) => f.max_var(),
            Matrix::Cnf(c) => c.vars().into_iter().next_back(),
        }
    }
}

impl From<Formula> for Matrix {
    fn from(f: Formula) -> Self {
        Matrix::Formula(f)
    }
}

impl From<CnfFormula> for Matrix {
    fn from(c: CnfFormula) -> Self {
        Matrix::Cnf(c)
    }
}

/// `∃ bound . matrix`, where variables of the matrix outside `bound` are free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EpfFormula {
    bound: BTreeSet<Var>,
    matrix: Matrix,
}

impl EpfFormula {
    pub fn new(bound: impl IntoIterator<Item = Var>, matrix: impl Into<Matrix>) -> Result<Self> {
        let matrix = matrix.into();
        let bound: BTreeSet<Var> = bound.into_iter().collect();
        let vars = matrix.vars();
        if let Some(v) = bound.iter().find(|v| !vars.contains(v)) {
            return Err(Error::BoundVarAbsent(*v));
        }
        Ok(EpfFormula { bound, matrix })
    }

    pub fn bound(&self) -> &BTreeSet<Var> {
        &self.bound
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn free(&self) -> BTreeSet<Var> {
        self.matrix
            .vars()
            .into_iter()
            .filter(|v| !self.bound.contains(v))
            .collect()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.matrix.vars()
    }

    /// Plugs `v` into the free variables. The result mentions only bound
    /// variables.
    pub fn substitute(&self, v: &Interpretation) -> Result<Matrix> {
        let free = self.free();
        if v.domain() != &free {
            return Err(Error::DomainMismatch {
                expected: fmt_vars(&free),
                found: fmt_vars(v.domain()),
            });
        }
        Ok(self.matrix.assign(&|var| v.value(var)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    ForAll,
}

/// A prenex quantified Boolean formula; unquantified matrix variables are free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuantifiedFormula {
    prefix: Vec<(Quantifier, Var)>,
    matrix: Formula,
}

impl QuantifiedFormula {
    pub fn new(prefix: Vec<(Quantifier, Var)>, matrix: Formula) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (_, v) in &prefix {
            if !seen.insert(*v) {
                return Err(Error::DuplicateQuantifier(*v));
            }
        }
        Ok(QuantifiedFormula { prefix, matrix })
    }

    pub fn prefix(&self) -> &[(Quantifier, Var)] {
        &self.prefix
    }

    pub fn matrix(&self) -> &Formula {
        &self.matrix
    }

    pub fn free(&self) -> BTreeSet<Var> {
        let quantified: BTreeSet<Var> = self.prefix.iter().map(|(_, v)| *v).collect();
        self.matrix
            .vars()
            .into_iter()
            .filter(|v| !quantified.contains(v))
            .collect()
    }

    pub fn is_closed(&self) -> bool {
        self.free().is_empty()
    }

    /// Replaces the free variables by the constants given in `v`.
    pub fn substitute(&self, v: &Interpretation) -> Result<QuantifiedFormula> {
        let free = self.free();
        if v.domain() != &free {
            return Err(Error::DomainMismatch {
                expected: fmt_vars(&free),
                found: fmt_vars(v.domain()),
            });
        }
        Ok(QuantifiedFormula {
            prefix: self.prefix.clone(),
            matrix: self.matrix.assign(&|var| v.value(var)),
        })
    }
}

/// A truth assignment over an explicit domain, stored as its set of true atoms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Interpretation {
    domain: BTreeSet<Var>,
    true_atoms: BTreeSet<Var>,
}

impl Interpretation {
    pub fn new(domain: BTreeSet<Var>, true_atoms: BTreeSet<Var>) -> Result<Self> {
        if let Some(v) = true_atoms.iter().find(|v| !domain.contains(v)) {
            return Err(Error::UndefinedVariable(*v));
        }
        Ok(Interpretation { domain, true_atoms })
    }

    pub fn from_fn(domain: BTreeSet<Var>, mut value: impl FnMut(Var) -> bool) -> Self {
        let true_atoms = domain.iter().copied().filter(|v| value(*v)).collect();
        Interpretation { domain, true_atoms }
    }

    /// Reads a `{0,1}` vector against `domain` in ascending order.
    pub fn from_bits(domain: &BTreeSet<Var>, bits: &[bool]) -> Result<Self> {
        if bits.len() != domain.len() {
            return Err(Error::LengthMismatch {
                expected: domain.len(),
                found: bits.len(),
            });
        }
        let true_atoms = domain
            .iter()
            .zip(bits)
            .filter(|(_, b)| **b)
            .map(|(v, _)| *v)
            .collect();
        Ok(Interpretation {
            domain: domain.clone(),
            true_atoms,
        })
    }

    pub fn domain(&self) -> &BTreeSet<Var> {
        &self.domain
    }

    pub fn true_atoms(&self) -> &BTreeSet<Var> {
        &self.true_atoms
    }

    pub fn value(&self, v: Var) -> Option<bool> {
        self.domain
            .contains(&v)
            .then(|| self.true_atoms.contains(&v))
    }

    pub fn to_bits(&self) -> Vec<bool> {
        self.domain
            .iter()
            .map(|v| self.true_atoms.contains(v))
            .collect()
    }

    /// Restriction to `sub`; variables of `sub` outside the domain are an error.
    pub fn restrict(&self, sub: &BTreeSet<Var>) -> Result<Self> {
        if let Some(v) = sub.iter().find(|v| !self.domain.contains(v)) {
            return Err(Error::UndefinedVariable(*v));
        }
        Ok(Interpretation {
            domain: sub.clone(),
            true_atoms: self.true_atoms.intersection(sub).copied().collect(),
        })
    }

    /// Union of two assignments over disjoint domains.
    pub fn merge(&self, other: &Interpretation) -> Result<Self> {
        if let Some(v) = self.domain.intersection(&other.domain).next() {
            return Err(Error::DomainMismatch {
                expected: "disjoint domains".into(),
                found: format!("both contain {v}"),
            });
        }
        Ok(Interpretation {
            domain: self.domain.union(&other.domain).copied().collect(),
            true_atoms: self.true_atoms.union(&other.true_atoms).copied().collect(),
        })
    }

    /// Extends the assignment with one more variable.
    pub fn with(mut self, v: Var, value: bool) -> Self {
        self.domain.insert(v);
        if value {
            self.true_atoms.insert(v);
        } else {
            self.true_atoms.remove(&v);
        }
        self
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.true_atoms.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Exact variable-occurrence sets.
pub trait CollectVars {
    fn collect_vars(&self) -> BTreeSet<Var>;
}

impl CollectVars for Formula {
    fn collect_vars(&self) -> BTreeSet<Var> {
        self.vars()
    }
}

impl CollectVars for CnfFormula {
    fn collect_vars(&self) -> BTreeSet<Var> {
        self.vars()
    }
}

impl CollectVars for EpfFormula {
    fn collect_vars(&self) -> BTreeSet<Var> {
        self.vars()
    }
}

pub(crate) fn fmt_vars(vars: &BTreeSet<Var>) -> String {
    let parts: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", parts.join(" "))
}

/// `{x_lo, ..., x_hi}`.
pub fn var_range(lo: u32, hi: u32) -> BTreeSet<Var> {
    (lo..=hi).map(Var::new).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

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

    /// All assignments over `domain`, in binary counting order.
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
    fn evaluate_examples() {
        assert!(x(1).evaluate(&interp(&[1], &[1])).unwrap());
        let contradiction = Formula::and(x(1), Formula::not(x(1)));
        assert!(!contradiction.evaluate(&interp(&[1], &[1])).unwrap());
        let f = Formula::implies(Formula::or(x(1), x(2)), x(3));
        assert!(!f.evaluate(&interp(&[1, 2, 3], &[1])).unwrap());
    }

    #[test]
    fn evaluate_reports_undefined_variable() {
        let f = Formula::and(x(1), x(2));
        assert_eq!(
            f.evaluate(&interp(&[2], &[2])),
            Err(Error::UndefinedVariable(Var::new(1)))
        );
    }

    #[test]
    fn substitute_examples() {
        let f = EpfFormula::new([Var::new(2)], Formula::and(x(1), x(2))).unwrap();
        let on = f.substitute(&interp(&[1], &[1])).unwrap();
        assert_eq!(on, Matrix::Formula(Formula::and(Formula::ConstTrue, x(2))));
        let off = f.substitute(&interp(&[1], &[])).unwrap();
        assert_eq!(off, Matrix::Formula(Formula::and(Formula::ConstFalse, x(2))));
        let open = EpfFormula::new([], x(1)).unwrap();
        assert_eq!(
            open.substitute(&interp(&[1], &[1])).unwrap(),
            Matrix::Formula(Formula::ConstTrue)
        );
    }

    #[test]
    fn substitute_rejects_wrong_domain() {
        let f = EpfFormula::new([Var::new(2)], Formula::and(x(1), x(2))).unwrap();
        assert!(matches!(
            f.substitute(&interp(&[1, 2], &[])),
            Err(Error::DomainMismatch { .. })
        ));
    }

    #[test]
    fn collect_vars_examples() {
        assert_eq!(x(3).collect_vars(), var_range(3, 3));
        let f = Formula::and(x(1), Formula::or(x(2), Formula::not(x(1))));
        assert_eq!(f.collect_vars(), var_range(1, 2));
        let e = EpfFormula::new([Var::new(2)], Formula::and(x(1), x(2))).unwrap();
        assert_eq!(e.free(), var_range(1, 1));
        assert_eq!(e.bound(), &var_range(2, 2));
    }

    #[test]
    fn epf_rejects_absent_bound_var() {
        assert_eq!(
            EpfFormula::new([Var::new(5)], x(1)),
            Err(Error::BoundVarAbsent(Var::new(5)))
        );
    }

    #[test]
    fn clause_is_canonical() {
        let c = Clause::new([Var::new(3).pos(), Var::new(1).neg(), Var::new(3).pos()]).unwrap();
        assert_eq!(c.literals(), &[Var::new(1).neg(), Var::new(3).pos()]);
        assert_eq!(
            Clause::new([Var::new(2).pos(), Var::new(2).neg()]),
            Err(Error::TautologicalClause(Var::new(2)))
        );
    }

    #[test]
    fn cnf_rejects_out_of_range_literal() {
        let c = Clause::new([Var::new(4).pos()]).unwrap();
        assert!(matches!(
            CnfFormula::new(3, vec![c]),
            Err(Error::VarOutOfRange { .. })
        ));
    }

    #[test]
    fn and_all_is_balanced() {
        let f = Formula::and_all((1..=1024).map(x));
        fn depth(f: &Formula) -> usize {
            match f {
                Formula::And(a, b) => 1 + depth(a).max(depth(b)),
                _ => 0,
            }
        }
        assert_eq!(depth(&f), 10);
        assert_eq!(Formula::and_all([]), Formula::ConstTrue);
        assert_eq!(Formula::or_all([]), Formula::ConstFalse);
    }

    #[test]
    fn fold_constants_preserves_semantics() {
        let f = Formula::implies(
            Formula::or(x(1), Formula::ConstFalse),
            Formula::and(Formula::ConstTrue, Formula::not(x(2))),
        );
        let folded = f.fold_constants();
        for v in all_assignments(&var_range(1, 2)) {
            assert_eq!(f.evaluate(&v), folded.evaluate(&v));
        }
        assert_eq!(
            Formula::or(x(1), Formula::ConstTrue).fold_constants(),
            Formula::ConstTrue
        );
    }

    use proptest::prelude::*;

    fn arb_formula(max_var: u32) -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            (1..=max_var).prop_map(Formula::atom),
            Just(Formula::ConstTrue),
            Just(Formula::ConstFalse),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Formula::implies(a, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn double_negation(f in arb_formula(4)) {
            let nn = Formula::not(Formula::not(f.clone()));
            for v in all_assignments(&var_range(1, 4)) {
                prop_assert_eq!(nn.evaluate(&v).unwrap(), f.evaluate(&v).unwrap());
            }
        }

        #[test]
        fn substitution_commutes_with_evaluation(f in arb_formula(4), split in 0u32..16) {
            let vars = f.vars();
            let bound: BTreeSet<Var> = vars.iter().copied().filter(|v| split >> (v.index() - 1) & 1 == 1).collect();
            let e = EpfFormula::new(bound.clone(), f.clone()).unwrap();
            for v in all_assignments(&e.free()) {
                let s = e.substitute(&v).unwrap();
                prop_assert!(s.vars().is_subset(&bound));
                for u in all_assignments(&bound) {
                    let merged = v.merge(&u).unwrap();
                    prop_assert_eq!(s.evaluate(&u).unwrap(), f.evaluate(&merged).unwrap());
                }
            }
        }

        #[test]
        fn clause_rejects_complementary_pairs(lits in proptest::collection::vec((1u32..6, any::<bool>()), 0..8)) {
            let literals: Vec<Literal> = lits.iter().map(|(i, p)| Literal::new(Var::new(*i), *p)).collect();
            let has_pair = literals.iter().any(|l| literals.contains(&l.complement()));
            let built = Clause::new(literals.clone());
            prop_assert_eq!(built.is_err(), has_pair);
            if let Ok(c) = built {
                prop_assert!(c.literals().windows(2).all(|w| w[0] < w[1]));
            }
        }
    }
}
