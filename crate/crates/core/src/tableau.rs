//! Compiles a machine and a theory string into a tableau formula whose
//! row-1 assignments correspond one-to-one with accepted witnesses.

use crate::error::{Error, Result};
use crate::formula::{Clause, CnfFormula, EpfFormula, Interpretation, Literal, Var};
use crate::ntm::{validate_spec, Configuration, Move, NtmSpec};
use crate::sat::Limits;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

/// A tableau symbol: tape symbols and states never coincide.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    Tape(char),
    State(String),
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sym::Tape(c) => write!(f, "{c}"),
            Sym::State(q) => write!(f, "<{q}>"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Nondet,
    Det,
}

/// Table width `n′ = (n + p(n))^k0 + 1`, saturating.
pub fn width_for(m: &NtmSpec, n: usize) -> usize {
    m.time_bound(n, m.model_len(n)).saturating_add(1)
}

/// The `n′ × n′` grid of variables `x_{i,j,s}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableauLayout {
    pub n: usize,
    pub m: usize,
    pub k0: u32,
    pub width: usize,
    pub symbols: Vec<Sym>,
    index: HashMap<Sym, usize>,
    theory: String,
    witness_symbols: Vec<char>,
    blank: char,
    start: String,
}

impl TableauLayout {
    pub fn new(spec: &NtmSpec, t: &str, limits: &Limits) -> Result<Self> {
        let n = t.chars().count();
        if n == 0 {
            return Err(Error::MalformedTheory("empty theory string".into()));
        }
        if let Some(c) = t.chars().find(|c| !spec.theory_alphabet.contains(c)) {
            return Err(Error::InvalidSymbol(c));
        }
        let symbols: Vec<Sym> = spec
            .tape_alphabet
            .iter()
            .map(|c| Sym::Tape(*c))
            .chain(spec.states.iter().map(|q| Sym::State(q.clone())))
            .collect();
        let m = spec.model_len(n);
        let width = width_for(spec, n);
        let total = width
            .checked_mul(width)
            .and_then(|w| w.checked_mul(symbols.len()))
            .unwrap_or(usize::MAX);
        if total > limits.tableau_vars || total > u32::MAX as usize {
            return Err(Error::limit("tableau variables", limits.tableau_vars, total));
        }
        Ok(TableauLayout {
            n,
            m,
            k0: spec.k0,
            width,
            index: symbols.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect(),
            symbols,
            theory: t.to_string(),
            witness_symbols: spec
                .theory_alphabet
                .union(&spec.model_alphabet)
                .copied()
                .collect(),
            blank: spec.blank,
            start: spec.start.clone(),
        })
    }

    pub fn theory(&self) -> &str {
        &self.theory
    }

    pub fn num_vars(&self) -> usize {
        self.width * self.width * self.symbols.len()
    }

    fn v(&self, i: usize, j: usize, s: usize) -> Var {
        let k = self.symbols.len();
        Var::new((((i - 1) * self.width + (j - 1)) * k + s + 1) as u32)
    }

    pub fn var(&self, i: usize, j: usize, s: &Sym) -> Option<Var> {
        let s = *self.index.get(s)?;
        let ok = (1..=self.width).contains(&i) && (1..=self.width).contains(&j);
        ok.then(|| self.v(i, j, s))
    }

    pub fn unindex(&self, v: Var) -> Option<(usize, usize, Sym)> {
        let k = self.symbols.len();
        let idx = v.index() as usize - 1;
        if idx >= self.num_vars() {
            return None;
        }
        let (cell, s) = (idx / k, idx % k);
        Some((cell / self.width + 1, cell % self.width + 1, self.symbols[s].clone()))
    }

    pub fn row_vars(&self, i: usize) -> BTreeSet<Var> {
        let k = self.symbols.len();
        (1..=self.width)
            .flat_map(|j| (0..k).map(move |s| (j, s)))
            .map(|(j, s)| self.v(i, j, s))
            .collect()
    }

    /// Columns holding the witness in row 1.
    pub fn witness_columns(&self) -> std::ops::RangeInclusive<usize> {
        self.n + 2..=self.n + self.m + 1
    }

    /// Row 1 as a symbol list for a given witness.
    fn first_row(&self, w: &[char]) -> Vec<Sym> {
        let mut row = vec![Sym::State(self.start.clone())];
        row.extend(self.theory.chars().chain(w.iter().copied()).map(Sym::Tape));
        row.resize(self.width, Sym::Tape(self.blank));
        row
    }

    /// `g_t(w)` for the quantified tableau: the row-1 assignment.
    pub fn row_one_model(&self, w: &str) -> Result<Interpretation> {
        let w: Vec<char> = w.chars().collect();
        if w.len() != self.m {
            return Err(Error::LengthMismatch {
                expected: self.m,
                found: w.len(),
            });
        }
        if let Some(c) = w.iter().find(|c| !self.witness_symbols.contains(c)) {
            return Err(Error::InvalidSymbol(*c));
        }
        Ok(self.rows_model(&[self.first_row(&w)], self.row_vars(1)))
    }

    fn rows_model(&self, rows: &[Vec<Sym>], domain: BTreeSet<Var>) -> Interpretation {
        let true_atoms = rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(move |(j, s)| self.v(i + 1, j + 1, self.index[s]))
            })
            .collect();
        Interpretation::new(domain, true_atoms).expect("table vars are in range")
    }

    /// Reads the witness back from row 1.
    pub fn model_to_witness(&self, v: &Interpretation) -> Result<String> {
        let mut out = String::new();
        for j in self.witness_columns() {
            let present: Vec<&Sym> = self
                .symbols
                .iter()
                .enumerate()
                .filter(|(s, _)| v.value(self.v(1, j, *s)) == Some(true))
                .map(|(_, sym)| sym)
                .collect();
            match present.as_slice() {
                [Sym::Tape(c)] => out.push(*c),
                [Sym::State(q)] => {
                    return Err(Error::MalformedTheory(format!(
                        "witness cell {j} holds state {q}"
                    )))
                }
                other => {
                    return Err(Error::AmbiguousCell {
                        column: j,
                        count: other.len(),
                    })
                }
            }
        }
        Ok(out)
    }

    /// The row for a configuration: the state sits left of the scanned cell.
    fn config_row(&self, c: &Configuration) -> Vec<Sym> {
        let mut row: Vec<Sym> = c.tape[..c.head - 1].iter().map(|s| Sym::Tape(*s)).collect();
        row.push(Sym::State(c.state.clone()));
        row.extend(c.tape.iter().skip(c.head - 1).map(|s| Sym::Tape(*s)));
        assert!(row.len() <= self.width, "configuration wider than the tableau");
        row.resize(self.width, Sym::Tape(self.blank));
        row
    }
}

/// The compiled clause groups of one tableau.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableauCompilation {
    pub layout: TableauLayout,
    pub phi_cell: Vec<Clause>,
    /// Units fixing the state, theory and trailing blank cells of row 1.
    pub phi_start: Vec<Clause>,
    /// One clause per witness cell: the cell holds a symbol of Γ∪Δ.
    pub alpha: Vec<Clause>,
    pub phi_move: Vec<Clause>,
    pub phi_accept: Clause,
    pub mode: Mode,
    spec: NtmSpec,
}

fn clause(lits: Vec<Literal>) -> Clause {
    Clause::new(lits).expect("tableau clauses mention distinct variables")
}

fn prepare(spec: &NtmSpec, t: &str, limits: &Limits, mode: Mode) -> Result<TableauCompilation> {
    let violations = validate_spec(spec);
    if !violations.is_empty() {
        return Err(Error::InvalidSpec(violations));
    }
    if mode == Mode::Det && !spec.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    let layout = TableauLayout::new(spec, t, limits)?;
    let w = layout.width;
    let k = layout.symbols.len();

    let mut phi_cell = Vec::with_capacity(w * w * (1 + k * (k - 1) / 2));
    for i in 1..=w {
        for j in 1..=w {
            phi_cell.push(clause((0..k).map(|s| layout.v(i, j, s).pos()).collect()));
            for a in 0..k {
                for b in a + 1..k {
                    phi_cell.push(clause(vec![layout.v(i, j, a).neg(), layout.v(i, j, b).neg()]));
                }
            }
        }
    }

    let mut phi_start = Vec::new();
    let unit = |j: usize, s: &Sym| clause(vec![layout.var(1, j, s).expect("in layout").pos()]);
    phi_start.push(unit(1, &Sym::State(spec.start.clone())));
    for (j, c) in t.chars().enumerate() {
        phi_start.push(unit(j + 2, &Sym::Tape(c)));
    }
    for j in layout.n + layout.m + 2..=w {
        phi_start.push(unit(j, &Sym::Tape(spec.blank)));
    }
    let alpha = layout
        .witness_columns()
        .map(|j| {
            clause(
                layout
                    .witness_symbols
                    .iter()
                    .map(|c| layout.var(1, j, &Sym::Tape(*c)).expect("in layout").pos())
                    .collect(),
            )
        })
        .collect();

    let phi_accept = clause(
        (1..=w)
            .flat_map(|i| (1..=w).map(move |j| (i, j)))
            .map(|(i, j)| layout.var(i, j, &Sym::State(spec.accept.clone())).expect("in layout").pos())
            .collect(),
    );

    let phi_move = move_clauses(spec, &layout);
    Ok(TableauCompilation {
        layout,
        phi_cell,
        phi_start,
        alpha,
        phi_move,
        phi_accept,
        mode,
        spec: spec.clone(),
    })
}

/// Window constraints between consecutive rows, written as implications
/// from a row-`i` pattern to the legal row-`i+1` contents.
fn move_clauses(spec: &NtmSpec, layout: &TableauLayout) -> Vec<Clause> {
    let w = layout.width;
    let sym = |s: Sym| layout.index[&s];
    let tape: Vec<usize> = spec.tape_alphabet.iter().map(|c| sym(Sym::Tape(*c))).collect();
    let states: Vec<usize> = spec.states.iter().map(|q| sym(Sym::State(q.clone()))).collect();
    let x = |i: usize, j: usize, s: usize| layout.v(i, j, s);
    let mut out = Vec::new();

    for i in 1..w {
        // Cells with no state beside them are copied.
        for j in 1..=w {
            for &s in &tape {
                let mut lits = Vec::with_capacity(2 * states.len() + 2);
                if j > 1 {
                    lits.extend(states.iter().map(|&q| x(i, j - 1, q).pos()));
                }
                if j < w {
                    lits.extend(states.iter().map(|&q| x(i, j + 1, q).pos()));
                }
                lits.push(x(i, j, s).neg());
                lits.push(x(i + 1, j, s).pos());
                out.push(clause(lits));
            }
        }

        for h in 1..w {
            for q_name in &spec.states {
                let q = sym(Sym::State(q_name.clone()));
                let p = x(i, h, q).neg();
                if spec.is_halting(q_name) {
                    out.push(clause(vec![p, x(i + 1, h, q).pos()]));
                    for &a in &tape {
                        out.push(clause(vec![p, x(i, h + 1, a).neg(), x(i + 1, h + 1, a).pos()]));
                        if h > 1 {
                            out.push(clause(vec![p, x(i, h - 1, a).neg(), x(i + 1, h - 1, a).pos()]));
                        }
                    }
                    continue;
                }
                for a_char in &spec.tape_alphabet {
                    let a = sym(Sym::Tape(*a_char));
                    let pa = [p, x(i, h + 1, a).neg()];
                    let opts = spec.options(q_name, *a_char);
                    if opts.is_empty() {
                        out.push(clause(pa.to_vec()));
                        continue;
                    }
                    let mut right: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
                    let mut left_by_write: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
                    let mut left_by_state: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
                    for t in opts {
                        let (nq, b) = (sym(Sym::State(t.next.clone())), sym(Sym::Tape(t.write)));
                        match t.dir {
                            Move::R => {
                                right.entry(nq).or_default().insert(b);
                            }
                            Move::L => {
                                left_by_write.entry(b).or_default().insert(nq);
                                left_by_state.entry(nq).or_default().insert(b);
                            }
                        }
                    }
                    let with = |extra: &[Literal]| {
                        let mut lits = pa.to_vec();
                        lits.extend_from_slice(extra);
                        lits
                    };
                    // The cell right of the state holds a moved state or a written symbol.
                    let mut cover = pa.to_vec();
                    cover.extend(right.keys().chain(left_by_write.keys()).map(|&s| x(i + 1, h + 1, s).pos()));
                    out.push(clause(cover));

                    for (&nq, writes) in &right {
                        let moved = x(i + 1, h + 1, nq).neg();
                        let mut lits = with(&[moved]);
                        lits.extend(writes.iter().map(|&b| x(i + 1, h, b).pos()));
                        out.push(clause(lits));
                        if h > 1 {
                            for &c in &tape {
                                out.push(clause(with(&[moved, x(i, h - 1, c).neg(), x(i + 1, h - 1, c).pos()])));
                            }
                        }
                    }
                    for (&b, sources) in &left_by_write {
                        let written = x(i + 1, h + 1, b).neg();
                        let col = if h > 1 { h - 1 } else { 1 };
                        let mut lits = with(&[written]);
                        lits.extend(sources.iter().map(|&nq| x(i + 1, col, nq).pos()));
                        out.push(clause(lits));
                        if h > 1 {
                            for &c in &tape {
                                out.push(clause(with(&[written, x(i, h - 1, c).neg(), x(i + 1, h, c).pos()])));
                            }
                        }
                    }
                    if h == 1 {
                        // Left moves at the edge keep the state in column 1.
                        for (&nq, writes) in &left_by_state {
                            let mut lits = with(&[x(i + 1, 1, nq).neg()]);
                            lits.extend(writes.iter().map(|&b| x(i + 1, 2, b).pos()));
                            out.push(clause(lits));
                        }
                    }
                }
            }
        }
    }
    out
}

impl TableauCompilation {
    pub fn spec(&self) -> &NtmSpec {
        &self.spec
    }

    /// `G(t)`: every clause group conjoined.
    pub fn cnf(&self) -> CnfFormula {
        let clauses = self
            .phi_cell
            .iter()
            .chain(&self.phi_start)
            .chain(&self.alpha)
            .chain(&self.phi_move)
            .chain(std::iter::once(&self.phi_accept))
            .cloned()
            .collect();
        CnfFormula::new(self.layout.num_vars() as u32, clauses).expect("clauses within layout")
    }

    /// `F(t)`: all variables below row 1 existentially bound.
    pub fn quantified(&self) -> EpfFormula {
        let bound: Vec<Var> = (self.layout.row_vars(1).len() + 1..=self.layout.num_vars())
            .map(|i| Var::new(i as u32))
            .collect();
        EpfFormula::new(bound, self.cnf()).expect("every variable occurs in the cell clauses")
    }

    /// Nondet: the row-1 assignment. Det: the table of the unique run,
    /// repeating the halted configuration down to the last row.
    pub fn witness_to_model(&self, w: &str) -> Result<Interpretation> {
        let row_one = self.layout.row_one_model(w)?;
        match self.mode {
            Mode::Nondet => Ok(row_one),
            Mode::Det => {
                let trace = self.spec.run_deterministic(&self.layout.theory, w)?;
                let last = trace.last().expect("nonempty trace");
                if last.state != self.spec.accept {
                    return Err(Error::NotAccepted);
                }
                let mut rows: Vec<Vec<Sym>> = trace.iter().map(|c| self.layout.config_row(c)).collect();
                let final_row = rows.last().cloned().expect("nonempty");
                rows.resize(self.layout.width, final_row);
                let domain = (1..=self.layout.num_vars() as u32).map(Var::new).collect();
                Ok(self.layout.rows_model(&rows, domain))
            }
        }
    }

    pub fn model_to_witness(&self, v: &Interpretation) -> Result<String> {
        self.layout.model_to_witness(v)
    }

    /// Forbids a 2×3 window everywhere. Used to plant faults.
    pub fn forbid_window(&mut self, top: &[Sym; 3], bottom: &[Sym; 3]) -> Result<()> {
        let l = &self.layout;
        let lookup = |s: &Sym| {
            l.index
                .get(s)
                .copied()
                .ok_or_else(|| Error::MalformedTheory(format!("unknown symbol {s}")))
        };
        let top: Vec<usize> = top.iter().map(lookup).collect::<Result<_>>()?;
        let bottom: Vec<usize> = bottom.iter().map(lookup).collect::<Result<_>>()?;
        for i in 1..l.width {
            for j in 1..=l.width.saturating_sub(2) {
                let lits = (0..3)
                    .flat_map(|d| [l.v(i, j + d, top[d]).neg(), l.v(i + 1, j + d, bottom[d]).neg()])
                    .collect();
                self.phi_move.push(clause(lits));
            }
        }
        Ok(())
    }

    /// Columns 1..3 of the first two rows of the deterministic run on `w`.
    pub fn first_window(&self, w: &str) -> Result<([Sym; 3], [Sym; 3])> {
        let trace = self.spec.run_deterministic(&self.layout.theory, w)?;
        let row = |i: usize| {
            let r = self.layout.config_row(&trace[i.min(trace.len() - 1)]);
            [r[0].clone(), r[1].clone(), r[2].clone()]
        };
        Ok((row(0), row(1)))
    }

    /// The layout comment block written ahead of the formula.
    pub fn comments(&self) -> Vec<String> {
        let l = &self.layout;
        vec![
            format!("tableau machine={} theory={}", self.spec.name, l.theory),
            format!("n={} p(n)={} k0={} n'={}", l.n, l.m, l.k0, l.width),
            format!("symbols={}", l.symbols.len()),
        ]
    }

    pub fn sidecar(&self) -> TableauSidecar {
        let l = &self.layout;
        let free_hi = l.row_vars(1).len() as u32;
        let fixed_true = self
            .phi_start
            .iter()
            .map(|c| c.literals()[0].var())
            .collect();
        let cells = l
            .witness_columns()
            .map(|j| {
                let symbols = l
                    .witness_symbols
                    .iter()
                    .map(|c| (*c, l.var(1, j, &Sym::Tape(*c)).expect("in layout")))
                    .collect();
                (j, symbols)
            })
            .collect();
        TableauSidecar {
            free_hi,
            fixed_true,
            cells,
        }
    }
}

/// Enough of the layout to rebuild `g_t` without the machine: the free
/// range `1..=free_hi`, the forced row-1 atoms, and per witness cell the
/// variable of each admissible symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableauSidecar {
    pub free_hi: u32,
    pub fixed_true: Vec<Var>,
    pub cells: Vec<(usize, Vec<(char, Var)>)>,
}

impl TableauSidecar {
    pub fn apply(&self, w: &str) -> Result<Interpretation> {
        let w: Vec<char> = w.chars().collect();
        if w.len() != self.cells.len() {
            return Err(Error::LengthMismatch {
                expected: self.cells.len(),
                found: w.len(),
            });
        }
        let mut true_atoms: BTreeSet<Var> = self.fixed_true.iter().copied().collect();
        for (c, (_, symbols)) in w.iter().zip(&self.cells) {
            let v = symbols
                .iter()
                .find(|(s, _)| s == c)
                .map(|(_, v)| *v)
                .ok_or(Error::InvalidSymbol(*c))?;
            true_atoms.insert(v);
        }
        Interpretation::new((1..=self.free_hi).map(Var::new).collect(), true_atoms)
    }
}

pub fn compile_nondet(spec: &NtmSpec, t: &str, limits: &Limits) -> Result<(EpfFormula, TableauCompilation)> {
    let c = prepare(spec, t, limits, Mode::Nondet)?;
    Ok((c.quantified(), c))
}

pub fn compile_det(spec: &NtmSpec, t: &str, limits: &Limits) -> Result<(CnfFormula, TableauCompilation)> {
    let c = prepare(spec, t, limits, Mode::Det)?;
    Ok((c.cnf(), c))
}

/// `(#vars, #φ_cell clauses)` a layout must produce.
pub fn expected_sizes(layout: &TableauLayout) -> (usize, usize) {
    let k = layout.symbols.len();
    let cells = layout.width * layout.width;
    (cells * k, cells * (1 + k * (k - 1) / 2))
}
