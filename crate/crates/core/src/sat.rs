//! Decision procedures: a deterministic DPLL solver, projected model
//! enumeration by blocking clauses, and quantifier-expansion QBF evaluation.

use crate::error::{Error, Result};
use crate::formula::{
    fmt_vars, Clause, CnfFormula, Formula, Interpretation, Literal, Matrix, Quantifier,
    QuantifiedFormula, Var,
};
use crate::reductions::tseitin_after;
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;

/// Caps that make brute-force procedures fail loudly instead of hanging.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest projection domain for model enumeration.
    pub enum_vars: usize,
    /// Largest number of models enumeration may return.
    pub max_models: usize,
    /// Longest quantifier prefix `qbf_eval` will expand.
    pub qbf_prefix: usize,
    /// Most true atoms the brute-force minimality check will explore.
    pub brute_force_atoms: usize,
    /// Largest atom universe for answer-set enumeration.
    pub asp_universe: usize,
    /// Largest tableau, counted in variables.
    pub tableau_vars: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enum_vars: 24,
            max_models: 1 << 24,
            qbf_prefix: 24,
            brute_force_atoms: 20,
            asp_universe: 20,
            tableau_vars: 1 << 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Sat,
    Unsat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub status: Status,
    /// Total over `1..=num_vars`; present iff `status == Sat`.
    pub model: Option<Interpretation>,
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        self.status == Status::Sat
    }
}

/// The models of some theory over a fixed domain, in discovery order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSet {
    domain: BTreeSet<Var>,
    models: Vec<Interpretation>,
}

impl ModelSet {
    pub fn new(domain: BTreeSet<Var>) -> Self {
        ModelSet {
            domain,
            models: Vec::new(),
        }
    }

    /// Adds a model; returns `false` if it was already present.
    pub fn insert(&mut self, m: Interpretation) -> Result<bool> {
        if m.domain() != &self.domain {
            return Err(Error::DomainMismatch {
                expected: fmt_vars(&self.domain),
                found: fmt_vars(m.domain()),
            });
        }
        if self.models.contains(&m) {
            return Ok(false);
        }
        self.models.push(m);
        Ok(true)
    }

    pub fn domain(&self) -> &BTreeSet<Var> {
        &self.domain
    }

    pub fn models(&self) -> &[Interpretation] {
        &self.models
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn contains(&self, m: &Interpretation) -> bool {
        self.models.contains(m)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Interpretation> {
        self.models.iter()
    }

    pub fn to_set(&self) -> BTreeSet<Interpretation> {
        self.models.iter().cloned().collect()
    }

    pub fn retain(&mut self, f: impl FnMut(&Interpretation) -> bool) {
        self.models.retain(f);
    }
}

impl<'a> IntoIterator for &'a ModelSet {
    type Item = &'a Interpretation;
    type IntoIter = std::slice::Iter<'a, Interpretation>;

    fn into_iter(self) -> Self::IntoIter {
        self.models.iter()
    }
}

type Code = usize;

fn code(lit: Literal) -> Code {
    (lit.var().index() as usize) << 1 | usize::from(!lit.is_positive())
}

fn code_var(c: Code) -> usize {
    c >> 1
}

fn code_to_literal(c: Code) -> Literal {
    Literal::new(Var::new(code_var(c) as u32), c & 1 == 0)
}

#[derive(Debug, Clone, Copy)]
struct Level {
    trail_start: usize,
    decision: Code,
    flipped: bool,
}

/// DPLL with two watched literals and chronological backtracking.
///
/// Branching always picks the lowest-index unassigned variable and tries
/// `true` first, so runs are reproducible.
#[derive(Debug, Clone)]
pub struct Solver {
    num_vars: usize,
    clauses: Vec<Vec<Code>>,
    watches: Vec<Vec<usize>>,
    // 0 = unassigned, 1 = true, -1 = false; index 0 unused
    values: Vec<i8>,
    trail: Vec<Code>,
    qhead: usize,
    levels: Vec<Level>,
    cursor: usize,
    unsat: bool,
}

impl Solver {
    pub fn new(num_vars: u32) -> Self {
        let n = num_vars as usize;
        Solver {
            num_vars: n,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * n + 2],
            values: vec![0; n + 1],
            trail: Vec::new(),
            qhead: 0,
            levels: Vec::new(),
            cursor: 1,
            unsat: false,
        }
    }

    pub fn from_cnf(c: &CnfFormula) -> Self {
        let mut s = Solver::new(c.num_vars());
        for clause in c.clauses() {
            s.add_clause(clause.literals());
        }
        s
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars as u32
    }

    fn grow(&mut self, var: usize) {
        if var > self.num_vars {
            self.num_vars = var;
            self.values.resize(var + 1, 0);
            self.watches.resize(2 * var + 2, Vec::new());
        }
    }

    fn lit_value(&self, c: Code) -> i8 {
        let v = self.values[code_var(c)];
        if c & 1 == 0 {
            v
        } else {
            -v
        }
    }

    fn assign(&mut self, c: Code) {
        self.values[code_var(c)] = if c & 1 == 0 { 1 } else { -1 };
        self.trail.push(c);
    }

    /// Undoes every decision, returning to the permanent level-0 state.
    pub fn reset(&mut self) {
        if let Some(first) = self.levels.first() {
            let start = first.trail_start;
            self.undo_to(start);
            self.levels.clear();
        }
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let c = self.trail.pop().unwrap();
            let v = code_var(c);
            self.values[v] = 0;
            self.cursor = self.cursor.min(v);
        }
        self.qhead = self.qhead.min(len);
    }

    /// Adds a clause. The solver is first returned to level 0.
    pub fn add_clause(&mut self, lits: &[Literal]) {
        self.reset();
        if self.unsat {
            return;
        }
        if let Some(max) = lits.iter().map(|l| l.var().index() as usize).max() {
            self.grow(max);
        }
        let mut codes: Vec<Code> = lits.iter().map(|l| code(*l)).collect();
        codes.sort_unstable();
        codes.dedup();
        if codes.windows(2).any(|w| w[0] ^ 1 == w[1]) {
            return;
        }
        // non-false literals first so they get watched
        codes.sort_by_key(|c| self.lit_value(*c) == -1);
        match codes.len() {
            0 => self.unsat = true,
            _ if self.lit_value(codes[0]) == -1 => self.unsat = true,
            1 => {
                if self.lit_value(codes[0]) == 0 {
                    self.assign(codes[0]);
                }
            }
            _ => {
                if self.lit_value(codes[1]) == -1 && self.lit_value(codes[0]) == 0 {
                    self.assign(codes[0]);
                }
                let idx = self.clauses.len();
                self.watches[codes[0]].push(idx);
                self.watches[codes[1]].push(idx);
                self.clauses.push(codes);
            }
        }
    }

    /// Returns `true` on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let falsified = self.trail[self.qhead] ^ 1;
            self.qhead += 1;
            let watching = std::mem::take(&mut self.watches[falsified]);
            let mut keep = Vec::with_capacity(watching.len());
            let mut conflict = false;
            for (pos, &ci) in watching.iter().enumerate() {
                if conflict {
                    keep.extend_from_slice(&watching[pos..]);
                    break;
                }
                let clause = &mut self.clauses[ci];
                if clause[0] == falsified {
                    clause.swap(0, 1);
                }
                let other = clause[0];
                if lit_value_of(&self.values, other) == 1 {
                    keep.push(ci);
                    continue;
                }
                let replacement =
                    (2..clause.len()).find(|&k| lit_value_of(&self.values, clause[k]) != -1);
                if let Some(k) = replacement {
                    clause.swap(1, k);
                    let w = clause[1];
                    self.watches[w].push(ci);
                    continue;
                }
                keep.push(ci);
                if lit_value_of(&self.values, other) == 0 {
                    self.assign(other);
                } else {
                    conflict = true;
                }
            }
            self.watches[falsified] = keep;
            if conflict {
                return true;
            }
        }
        false
    }

    fn next_unassigned(&mut self) -> Option<usize> {
        while self.cursor <= self.num_vars {
            if self.values[self.cursor] == 0 {
                return Some(self.cursor);
            }
            self.cursor += 1;
        }
        None
    }

    /// Searches for a model of the current clause set.
    pub fn solve(&mut self) -> bool {
        self.reset();
        if self.unsat {
            return false;
        }
        loop {
            if self.propagate() {
                loop {
                    let Some(level) = self.levels.pop() else {
                        self.unsat = true;
                        return false;
                    };
                    self.undo_to(level.trail_start);
                    if !level.flipped {
                        let flipped = level.decision ^ 1;
                        self.levels.push(Level {
                            trail_start: self.trail.len(),
                            decision: flipped,
                            flipped: true,
                        });
                        self.assign(flipped);
                        break;
                    }
                }
                continue;
            }
            match self.next_unassigned() {
                None => return true,
                Some(v) => {
                    let decision = v << 1;
                    self.levels.push(Level {
                        trail_start: self.trail.len(),
                        decision,
                        flipped: false,
                    });
                    self.assign(decision);
                }
            }
        }
    }

    /// Value of `var` in the last model found.
    pub fn value(&self, var: Var) -> Option<bool> {
        match self.values.get(var.index() as usize) {
            Some(1) => Some(true),
            Some(-1) => Some(false),
            _ => None,
        }
    }

    pub fn model_over(&self, domain: &BTreeSet<Var>) -> Interpretation {
        Interpretation::from_fn(domain.clone(), |v| self.value(v) == Some(true))
    }
}

fn lit_value_of(values: &[i8], c: Code) -> i8 {
    let v = values[code_var(c)];
    if c & 1 == 0 {
        v
    } else {
        -v
    }
}

fn assumption_literals(assumptions: &Interpretation) -> Vec<Literal> {
    assumptions
        .domain()
        .iter()
        .map(|v| Literal::new(*v, assumptions.true_atoms().contains(v)))
        .collect()
}

/// Decides `c` under a partial assignment.
pub fn solve(c: &CnfFormula, assumptions: &Interpretation) -> SolveResult {
    let mut solver = Solver::from_cnf(c);
    for lit in assumption_literals(assumptions) {
        solver.add_clause(&[lit]);
    }
    if solver.solve() {
        let domain = (1..=solver.num_vars()).map(Var::new).collect();
        SolveResult {
            status: Status::Sat,
            model: Some(solver.model_over(&domain)),
        }
    } else {
        SolveResult {
            status: Status::Unsat,
            model: None,
        }
    }
}

/// All assignments over `over` that extend to a model of `c`.
pub fn enumerate_models(c: &CnfFormula, over: &BTreeSet<Var>, limits: &Limits) -> Result<ModelSet> {
    enumerate_models_under(c, over, &Interpretation::default(), limits)
}

/// Like [`enumerate_models`], restricted to models extending `assumptions`.
pub fn enumerate_models_under(
    c: &CnfFormula,
    over: &BTreeSet<Var>,
    assumptions: &Interpretation,
    limits: &Limits,
) -> Result<ModelSet> {
    if over.len() > limits.enum_vars {
        return Err(Error::limit("enumeration domain", limits.enum_vars, over.len()));
    }
    let mut solver = Solver::from_cnf(c);
    if let Some(max) = over.iter().next_back() {
        solver.grow(max.index() as usize);
    }
    for lit in assumption_literals(assumptions) {
        solver.add_clause(&[lit]);
    }
    let mut out = ModelSet::new(over.clone());
    while solver.solve() {
        let m = solver.model_over(over);
        let blocking: Vec<Literal> = over
            .iter()
            .map(|v| Literal::new(*v, !m.true_atoms().contains(v)))
            .collect();
        out.insert(m)?;
        if out.len() > limits.max_models {
            return Err(Error::limit("model count", limits.max_models, out.len()));
        }
        solver.add_clause(&blocking);
    }
    Ok(out)
}

/// Constant folding followed by Tseitin encoding. Auxiliary variables are
/// numbered after the formula's own; `num_vars` covers at least `min_vars`.
pub fn clausify(f: &Formula, min_vars: u32) -> CnfFormula {
    let own = f.max_var().map_or(0, Var::index).max(min_vars);
    let mut cnf = match f.fold_constants() {
        Formula::ConstTrue => CnfFormula::default(),
        Formula::ConstFalse => CnfFormula::from_clauses(vec![Clause::empty()]),
        other => tseitin_after(&other, own).0,
    };
    cnf.reserve_vars(own);
    cnf
}

pub fn clausify_matrix(m: &Matrix, min_vars: u32) -> CnfFormula {
    match m {
        Matrix::Formula(f) => clausify(f, min_vars),
        Matrix::Cnf(c) => {
            let mut c = c.clone();
            c.reserve_vars(min_vars);
            c
        }
    }
}

pub fn is_satisfiable(f: &Formula) -> bool {
    solve(&clausify(f, 0), &Interpretation::default()).is_sat()
}

/// Evaluates a closed prenex QBF by expanding every quantifier.
pub fn qbf_eval(q: &QuantifiedFormula, limits: &Limits) -> Result<bool> {
    if let Some(v) = q.free().into_iter().next() {
        return Err(Error::NotClosed(v));
    }
    if q.prefix().len() > limits.qbf_prefix {
        return Err(Error::limit("quantifier prefix", limits.qbf_prefix, q.prefix().len()));
    }
    let size = q
        .prefix()
        .iter()
        .map(|(_, v)| v.index() as usize)
        .max()
        .unwrap_or(0);
    let mut values = vec![None; size + 1];
    Ok(expand(q.prefix(), q.matrix(), &mut values))
}

fn expand(prefix: &[(Quantifier, Var)], matrix: &Formula, values: &mut Vec<Option<bool>>) -> bool {
    let Some(((quantifier, var), rest)) = prefix.split_first() else {
        return matrix
            .eval_by(&|v| values[v.index() as usize].ok_or(Error::NotClosed(v)))
            .expect("closed formula evaluates");
    };
    let i = var.index() as usize;
    let branch = |b: bool, values: &mut Vec<Option<bool>>| {
        values[i] = Some(b);
        let r = expand(rest, matrix, values);
        values[i] = None;
        r
    };
    match quantifier {
        Quantifier::Exists => branch(false, values) || branch(true, values),
        Quantifier::ForAll => branch(false, values) && branch(true, values),
    }
}

/// Delegates solving to an external DIMACS solver executable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalSolver {
    pub program: PathBuf,
    pub args: Vec<String>,
}

pub const SOLVER_ENV: &str = "NPLOGIC_SOLVER";

impl ExternalSolver {
    pub fn new(program: impl Into<PathBuf>) -> Self {
        ExternalSolver {
            program: program.into(),
            args: Vec::new(),
        }
    }

    /// Reads the solver path from `NPLOGIC_SOLVER`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(SOLVER_ENV)
            .filter(|s| !s.is_empty())
            .map(ExternalSolver::new)
    }

    pub fn solve(&self, c: &CnfFormula, assumptions: &Interpretation) -> Result<SolveResult> {
        let mut full = c.clone();
        for lit in assumption_literals(assumptions) {
            full.push(Clause::new([lit]).expect("unit clause"));
        }
        let file = tempfile::Builder::new().suffix(".cnf").tempfile()?;
        std::fs::write(file.path(), crate::io::serialize_dimacs(&full))?;
        let output = Command::new(&self.program)
            .args(&self.args)
            .arg(file.path())
            .output()
            .map_err(|e| Error::ExternalSolver(format!("{}: {e}", self.program.display())))?;
        let stdout = String::from_utf8_lossy(&output.stdout);
        parse_solver_output(&stdout, full.num_vars())
    }
}

/// Parses competition-format output: an `s` status line and `v` value lines.
pub fn parse_solver_output(text: &str, num_vars: u32) -> Result<SolveResult> {
    let mut status = None;
    let mut true_atoms = BTreeSet::new();
    for line in text.lines() {
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("s") => {
                status = match tokens.next() {
                    Some("SATISFIABLE") => Some(Status::Sat),
                    Some("UNSATISFIABLE") => Some(Status::Unsat),
                    other => {
                        return Err(Error::ExternalSolver(format!("unknown status {other:?}")))
                    }
                }
            }
            Some("v") => {
                for tok in tokens {
                    let n: i64 = tok
                        .parse()
                        .map_err(|_| Error::ExternalSolver(format!("bad value {tok:?}")))?;
                    if let Some(lit) = Literal::from_dimacs(n) {
                        if lit.is_positive() && lit.var().index() <= num_vars {
                            true_atoms.insert(lit.var());
                        }
                    }
                }
            }
            _ => {}
        }
    }
    match status {
        Some(Status::Sat) => {
            let domain = (1..=num_vars).map(Var::new).collect();
            Ok(SolveResult {
                status: Status::Sat,
                model: Some(Interpretation::new(domain, true_atoms)?),
            })
        }
        Some(Status::Unsat) => Ok(SolveResult {
            status: Status::Unsat,
            model: None,
        }),
        None => Err(Error::ExternalSolver("no status line".into())),
    }
}

/// Decodes a solver code back to a literal; used by tests.
#[doc(hidden)]
pub fn debug_literal(c: usize) -> Literal {
    code_to_literal(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::var_range;

    fn lit(n: i64) -> Literal {
        Literal::from_dimacs(n).unwrap()
    }

    fn cnf(clauses: &[&[i64]]) -> CnfFormula {
        CnfFormula::from_clauses(
            clauses
                .iter()
                .map(|c| Clause::new(c.iter().map(|n| lit(*n))).unwrap())
                .collect(),
        )
    }

    fn assignment(pairs: &[(u32, bool)]) -> Interpretation {
        pairs
            .iter()
            .fold(Interpretation::default(), |acc, (v, b)| acc.with(Var::new(*v), *b))
    }

    /// Truth-table oracle.
    fn brute_sat(c: &CnfFormula) -> bool {
        let domain = var_range(1, c.num_vars());
        (0u32..1 << c.num_vars()).any(|mask| {
            let bits: Vec<bool> = (0..c.num_vars()).map(|i| mask >> i & 1 == 1).collect();
            c.evaluate(&Interpretation::from_bits(&domain, &bits).unwrap())
                .unwrap()
        })
    }

    #[test]
    fn solve_examples() {
        let r = solve(&cnf(&[&[1], &[-1]]), &Interpretation::default());
        assert_eq!(r.status, Status::Unsat);
        assert!(r.model.is_none());

        let r = solve(&cnf(&[&[1, 2]]), &Interpretation::default());
        assert_eq!(r.model, Some(assignment(&[(1, true), (2, true)])));
        assert!(brute_sat(&cnf(&[&[1, 2]])));

        let r = solve(&cnf(&[&[1, 2]]), &assignment(&[(1, false)]));
        assert_eq!(r.model, Some(assignment(&[(1, false), (2, true)])));
    }

    #[test]
    fn empty_clause_is_unsat() {
        let c = CnfFormula::from_clauses(vec![Clause::empty()]);
        assert!(!solve(&c, &Interpretation::default()).is_sat());
        assert!(solve(&CnfFormula::default(), &Interpretation::default()).is_sat());
    }

    #[test]
    fn enumerate_examples() {
        let limits = Limits::default();
        let all = enumerate_models(&cnf(&[&[1, 2]]), &var_range(1, 2), &limits).unwrap();
        assert_eq!(all.len(), 3);
        let none = enumerate_models(&cnf(&[&[1], &[-1]]), &var_range(1, 1), &limits).unwrap();
        assert!(none.is_empty());
        let projected = enumerate_models(&cnf(&[&[1, 2]]), &var_range(1, 1), &limits).unwrap();
        let expected: BTreeSet<Interpretation> =
            [assignment(&[(1, false)]), assignment(&[(1, true)])].into();
        assert_eq!(projected.to_set(), expected);
    }

    #[test]
    fn enumerate_over_nothing() {
        let limits = Limits::default();
        let sat = enumerate_models(&cnf(&[&[1, 2]]), &BTreeSet::new(), &limits).unwrap();
        assert_eq!(sat.len(), 1);
        let unsat = enumerate_models(&cnf(&[&[1], &[-1]]), &BTreeSet::new(), &limits).unwrap();
        assert!(unsat.is_empty());
    }

    #[test]
    fn enumerate_respects_cap() {
        let limits = Limits {
            enum_vars: 2,
            ..Limits::default()
        };
        let err = enumerate_models(&cnf(&[&[1, 2, 3]]), &var_range(1, 3), &limits).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { limit: 2, actual: 3, .. }));
    }

    #[test]
    fn enumeration_is_deterministic() {
        let c = cnf(&[&[1, -2, 3], &[-1, 2], &[2, 3, 4]]);
        let a = enumerate_models(&c, &var_range(1, 4), &Limits::default()).unwrap();
        let b = enumerate_models(&c, &var_range(1, 4), &Limits::default()).unwrap();
        assert_eq!(a.models(), b.models());
    }

    fn q(prefix: &[(Quantifier, u32)], matrix: Formula) -> QuantifiedFormula {
        QuantifiedFormula::new(prefix.iter().map(|(q, v)| (*q, Var::new(*v))).collect(), matrix)
            .unwrap()
    }

    #[test]
    fn qbf_examples() {
        use Quantifier::*;
        let limits = Limits::default();
        let iff = Formula::iff(Formula::atom(1), Formula::atom(2));
        assert!(qbf_eval(&q(&[(ForAll, 1), (Exists, 2)], iff.clone()), &limits).unwrap());
        assert!(!qbf_eval(&q(&[(Exists, 1), (ForAll, 2)], iff), &limits).unwrap());
        let contradiction = Formula::and(Formula::atom(1), Formula::not(Formula::atom(1)));
        assert!(!qbf_eval(&q(&[(Exists, 1)], contradiction), &limits).unwrap());
    }

    #[test]
    fn qbf_errors() {
        use Quantifier::*;
        let open = q(&[(Exists, 1)], Formula::and(Formula::atom(1), Formula::atom(2)));
        assert_eq!(qbf_eval(&open, &Limits::default()), Err(Error::NotClosed(Var::new(2))));
        let long = q(
            &[(Exists, 1), (Exists, 2), (Exists, 3)],
            Formula::and_all((1..=3).map(Formula::atom)),
        );
        let limits = Limits {
            qbf_prefix: 2,
            ..Limits::default()
        };
        assert!(matches!(qbf_eval(&long, &limits), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn solver_output_parsing() {
        let r = parse_solver_output("c hi\ns SATISFIABLE\nv 1 -2\nv 3 0\n", 3).unwrap();
        assert_eq!(r.model, Some(assignment(&[(1, true), (2, false), (3, true)])));
        let r = parse_solver_output("s UNSATISFIABLE\n", 3).unwrap();
        assert_eq!(r.status, Status::Unsat);
        assert!(parse_solver_output("nothing", 1).is_err());
    }

    #[test]
    fn code_round_trip() {
        for n in [1i64, -1, 7, -7] {
            assert_eq!(debug_literal(code(lit(n))), lit(n));
        }
    }

    use proptest::prelude::*;

    fn arb_cnf(max_var: u32, max_clauses: usize) -> impl Strategy<Value = CnfFormula> {
        let clause = proptest::collection::btree_map(1..=max_var, any::<bool>(), 0..4)
            .prop_map(|m| Clause::new(m.into_iter().map(|(v, p)| Literal::new(Var::new(v), p))).unwrap());
        proptest::collection::vec(clause, 0..=max_clauses).prop_map(move |cs| {
            let mut c = CnfFormula::from_clauses(cs);
            c.reserve_vars(max_var);
            c
        })
    }

    proptest! {
        #[test]
        fn solve_matches_truth_table(c in arb_cnf(6, 10)) {
            let r = solve(&c, &Interpretation::default());
            prop_assert_eq!(r.is_sat(), brute_sat(&c));
            if let Some(m) = r.model {
                prop_assert!(c.evaluate(&m).unwrap());
            }
        }

        #[test]
        fn full_enumeration_matches_truth_table(c in arb_cnf(4, 6)) {
            let domain = var_range(1, 4);
            let models = enumerate_models(&c, &domain, &Limits::default()).unwrap();
            let expected: BTreeSet<Interpretation> = (0u32..16)
                .map(|mask| {
                    let bits: Vec<bool> = (0..4).map(|i| mask >> i & 1 == 1).collect();
                    Interpretation::from_bits(&domain, &bits).unwrap()
                })
                .filter(|v| c.evaluate(v).unwrap())
                .collect();
            prop_assert_eq!(models.to_set(), expected);
        }
    }
}
