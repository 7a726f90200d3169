//! Text formats: propositional formulas, DIMACS, EQDIMACS, logic programs,
//! machine specifications, interpretations, QBFs and witness-map sidecars.

use crate::asp::{Program, Rule};
use crate::error::{Error, Result};
use crate::formula::{Clause, CnfFormula, EpfFormula, Formula, Interpretation, Literal, Matrix, Quantifier, QuantifiedFormula, Var};
use crate::ntm::{Move, NtmSpec, Transition};
use crate::reductions::{tseitin_after, AuxMap};
use crate::tableau::TableauSidecar;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    PfText,
    DimacsCnf,
    Eqdimacs,
    LpText,
    TmSpec,
    InterpText,
    WitnessMap,
}

impl FileFormat {
    /// Guesses a format from the file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        Some(match path.extension()?.to_str()? {
            "pf" | "qbf" => FileFormat::PfText,
            "cnf" | "dimacs" => FileFormat::DimacsCnf,
            "eqcnf" | "eqdimacs" => FileFormat::Eqdimacs,
            "lp" => FileFormat::LpText,
            "tm" => FileFormat::TmSpec,
            "interp" | "model" => FileFormat::InterpText,
            "map" | "witness" => FileFormat::WitnessMap,
            _ => return None,
        })
    }
}

/// Character cursor with 1-based line/column positions.
struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::parse(self.line, self.column, message)
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        for want in s.chars() {
            match self.peek() {
                Some(c) if c == want => {
                    self.bump();
                }
                Some(c) => return Err(self.error(format!("expected {s:?}, found {c:?}"))),
                None => return Err(self.error(format!("expected {s:?}, found end of input"))),
            }
        }
        Ok(())
    }

    fn var(&mut self) -> Result<Var> {
        self.expect("x")?;
        let mut digits = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            digits.push(c);
            self.bump();
        }
        digits
            .parse::<u32>()
            .ok()
            .and_then(Var::try_new)
            .ok_or_else(|| self.error(format!("bad variable index {digits:?}")))
    }

    fn formula(&mut self) -> Result<Formula> {
        self.skip_ws();
        match self.peek() {
            Some('x') => Ok(Formula::Atom(self.var()?)),
            Some('T') => {
                self.bump();
                Ok(Formula::ConstTrue)
            }
            Some('F') => {
                self.bump();
                Ok(Formula::ConstFalse)
            }
            Some('~') => {
                self.bump();
                Ok(Formula::not(self.formula()?))
            }
            Some('(') => {
                self.bump();
                let left = self.formula()?;
                self.skip_ws();
                let op = match self.peek() {
                    Some('&') => "&",
                    Some('|') => "|",
                    Some('-') => "->",
                    Some(c) => return Err(self.error(format!("expected an operator, found {c:?}"))),
                    None => return Err(self.error("expected an operator, found end of input")),
                };
                self.expect(op)?;
                let right = self.formula()?;
                self.skip_ws();
                self.expect(")")?;
                Ok(match op {
                    "&" => Formula::and(left, right),
                    "|" => Formula::or(left, right),
                    _ => Formula::implies(left, right),
                })
            }
            Some(c) => Err(self.error(format!("unexpected {c:?}"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.error(format!("trailing input starting at {c:?}"))),
        }
    }
}

/// Grammar: `x<k> | T | F | ~e | (e & e) | (e | e) | (e -> e)`.
pub fn parse_pf(text: &str) -> Result<Formula> {
    let mut cur = Cursor::new(text);
    let f = cur.formula()?;
    cur.finish()?;
    Ok(f)
}

pub fn serialize_pf(f: &Formula) -> String {
    let mut out = String::new();
    write_pf(f, &mut out);
    out
}

fn write_pf(f: &Formula, out: &mut String) {
    match f {
        Formula::Atom(v) => {
            let _ = write!(out, "{v}");
        }
        Formula::ConstTrue => out.push('T'),
        Formula::ConstFalse => out.push('F'),
        Formula::Not(g) => {
            out.push('~');
            write_pf(g, out);
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            let op = match f {
                Formula::And(..) => " & ",
                Formula::Or(..) => " | ",
                _ => " -> ",
            };
            out.push('(');
            write_pf(a, out);
            out.push_str(op);
            write_pf(b, out);
            out.push(')');
        }
    }
}

struct DimacsBody {
    num_vars: u32,
    clauses: Vec<Clause>,
    bound: Option<Vec<Var>>,
}

fn parse_dimacs_body(text: &str, allow_e: bool) -> Result<DimacsBody> {
    let mut header: Option<(u32, usize)> = None;
    let mut bound = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        last_line = ln;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        let mut tokens = line.split_whitespace();
        if line.starts_with('p') {
            if header.is_some() {
                return Err(Error::parse(ln, 1, "duplicate header"));
            }
            tokens.next();
            if tokens.next() != Some("cnf") {
                return Err(Error::parse(ln, 1, "expected \"p cnf V C\""));
            }
            let mut num = || -> Result<usize> {
                tokens
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::parse(ln, 1, "expected \"p cnf V C\""))
            };
            let (v, c) = (num()?, num()?);
            let v = u32::try_from(v).map_err(|_| Error::parse(ln, 1, "variable count too large"))?;
            header = Some((v, c));
            continue;
        }
        if header.is_none() {
            return Err(Error::parse(ln, 1, "clause before \"p cnf\" header"));
        }
        if line.starts_with('e') || line.starts_with('a') {
            if !allow_e || line.starts_with('a') {
                return Err(Error::parse(ln, 1, "quantifier lines are not allowed here"));
            }
            if bound.is_some() || !clauses.is_empty() || !current.is_empty() {
                return Err(Error::parse(ln, 1, "the e-line must directly follow the header"));
            }
            tokens.next();
            let mut vars = Vec::new();
            for tok in tokens {
                let n: u32 = tok
                    .parse()
                    .map_err(|_| Error::parse(ln, 1, format!("bad variable {tok:?}")))?;
                match Var::try_new(n) {
                    Some(v) => vars.push(v),
                    None => break,
                }
            }
            bound = Some(vars);
            continue;
        }
        let mut column = 1;
        for tok in line.split_whitespace() {
            let n: i64 = tok
                .parse()
                .map_err(|_| Error::parse(ln, column, format!("bad literal {tok:?}")))?;
            match Literal::from_dimacs(n) {
                Some(l) => current.push(l),
                None => clauses.push(Clause::new(std::mem::take(&mut current))?),
            }
            column += tok.len() + 1;
        }
    }
    if !current.is_empty() {
        return Err(Error::parse(last_line, 1, "clause is not terminated by 0"));
    }
    let (num_vars, declared) = header.ok_or_else(|| Error::parse(1, 1, "missing \"p cnf\" header"))?;
    if declared != clauses.len() {
        return Err(Error::HeaderMismatch {
            declared,
            found: clauses.len(),
        });
    }
    Ok(DimacsBody {
        num_vars,
        clauses,
        bound,
    })
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let body = parse_dimacs_body(text, false)?;
    CnfFormula::new(body.num_vars, body.clauses)
}

fn write_clauses(c: &CnfFormula, out: &mut String) {
    for clause in c.clauses() {
        for l in clause.literals() {
            let _ = write!(out, "{} ", l.to_dimacs());
        }
        out.push_str("0\n");
    }
}

pub fn serialize_dimacs(c: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", c.num_vars(), c.clauses().len());
    write_clauses(c, &mut out);
    out
}

/// DIMACS with one optional `e v1 v2 … 0` line after the header.
pub fn parse_eqdimacs(text: &str) -> Result<EpfFormula> {
    let body = parse_dimacs_body(text, true)?;
    let matrix = CnfFormula::new(body.num_vars, body.clauses)?;
    EpfFormula::new(body.bound.unwrap_or_default(), matrix)
}

/// Formula matrices are clausified; their labels join the bound block.
pub fn serialize_eqdimacs(f: &EpfFormula, comments: &[String]) -> String {
    let (matrix, bound): (CnfFormula, BTreeSet<Var>) = match f.matrix() {
        Matrix::Cnf(c) => (c.clone(), f.bound().clone()),
        Matrix::Formula(g) => {
            let (c, map) = tseitin_after(g, 0);
            let mut bound = f.bound().clone();
            bound.extend(map.defs.iter().map(|(v, _)| *v));
            (c, bound)
        }
    };
    let mut out = String::new();
    for line in comments {
        let _ = writeln!(out, "c {line}");
    }
    out.push_str("c eqdimacs: the e-line lists existentially bound variables; all others are free\n");
    let _ = writeln!(out, "p cnf {} {}", matrix.num_vars(), matrix.clauses().len());
    if !bound.is_empty() {
        out.push('e');
        for v in &bound {
            let _ = write!(out, " {}", v.index());
        }
        out.push_str(" 0\n");
    }
    write_clauses(&matrix, &mut out);
    out
}

fn quantifier_prefix(text: &str, allow_forall: bool) -> Result<(Vec<(Quantifier, Var)>, &str)> {
    let Some((head, body)) = text.split_once(':') else {
        return Ok((Vec::new(), text));
    };
    let mut prefix = Vec::new();
    let mut current = None;
    for tok in head.split_whitespace() {
        match tok {
            "e" => current = Some(Quantifier::Exists),
            "a" if allow_forall => current = Some(Quantifier::ForAll),
            _ => {
                let q = current.ok_or_else(|| Error::parse(1, 1, format!("{tok:?} before a quantifier")))?;
                let v = Cursor::new(tok).var()?;
                prefix.push((q, v));
            }
        }
    }
    Ok((prefix, body))
}

/// `e x1 x2 a x3 : <formula>`.
pub fn parse_qbf(text: &str) -> Result<QuantifiedFormula> {
    let (prefix, body) = quantifier_prefix(text, true)?;
    QuantifiedFormula::new(prefix, parse_pf(body)?)
}

pub fn serialize_qbf(q: &QuantifiedFormula) -> String {
    let mut out = String::new();
    let mut last = None;
    for (quant, v) in q.prefix() {
        if last != Some(*quant) {
            out.push_str(if *quant == Quantifier::Exists { "e " } else { "a " });
            last = Some(*quant);
        }
        let _ = write!(out, "{v} ");
    }
    if !q.prefix().is_empty() {
        out.push_str(": ");
    }
    out.push_str(&serialize_pf(q.matrix()));
    out
}

/// EQDIMACS for a clausal matrix, else `e x2 x3 : <formula>`.
pub fn serialize_epf(f: &EpfFormula) -> String {
    match f.matrix() {
        Matrix::Cnf(_) => serialize_eqdimacs(f, &[]),
        Matrix::Formula(m) => {
            let mut out = String::new();
            if !f.bound().is_empty() {
                out.push('e');
                for v in f.bound() {
                    let _ = write!(out, " {v}");
                }
                out.push_str(" : ");
            }
            out.push_str(&serialize_pf(m));
            out.push('\n');
            out
        }
    }
}

/// EQDIMACS when the text looks like DIMACS, else `e x2 x3 : <formula>`.
pub fn parse_epf(text: &str) -> Result<EpfFormula> {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
    if first.starts_with("p ") || first.starts_with('c') {
        return parse_eqdimacs(text);
    }
    let (prefix, body) = quantifier_prefix(text, false)?;
    EpfFormula::new(prefix.into_iter().map(|(_, v)| v), parse_pf(body)?)
}

fn is_x_name(name: &str) -> Option<Var> {
    name.strip_prefix('x')
        .filter(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()))
        .and_then(|d| d.parse().ok())
        .and_then(Var::try_new)
}

fn atom_name_ok(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'') && name != "not"
}

/// One rule per line: `a :- b, not c.` or `a.`; `#universe a b c.`; `%` comments.
/// Atoms named `x<k>` keep index `k`; otherwise atoms are numbered in order
/// of first appearance.
pub fn parse_lp(text: &str) -> Result<Program> {
    struct Raw {
        head: String,
        pos: Vec<String>,
        neg: Vec<String>,
    }
    let mut order: Vec<String> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut note = |name: &str, ln: usize| -> Result<()> {
        if !atom_name_ok(name) {
            return Err(Error::parse(ln, 1, format!("bad atom name {name:?}")));
        }
        if seen.insert(name.to_string()) {
            order.push(name.to_string());
        }
        Ok(())
    };
    let mut universe = Vec::new();
    let mut raws = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('%').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let line = line
            .strip_suffix('.')
            .ok_or_else(|| Error::parse(ln, raw.len().max(1), "rule must end with '.'"))?
            .trim();
        if let Some(rest) = line.strip_prefix("#universe") {
            for name in rest.split_whitespace() {
                note(name, ln)?;
                universe.push(name.to_string());
            }
            continue;
        }
        let (head, body) = match line.split_once(":-") {
            Some((h, b)) => (h.trim(), Some(b)),
            None => (line, None),
        };
        note(head, ln)?;
        let mut r = Raw {
            head: head.to_string(),
            pos: Vec::new(),
            neg: Vec::new(),
        };
        for item in body.into_iter().flat_map(|b| b.split(',')) {
            let item = item.trim();
            match item.strip_prefix("not ") {
                Some(atom) => {
                    let atom = atom.trim();
                    note(atom, ln)?;
                    r.neg.push(atom.to_string());
                }
                None => {
                    note(item, ln)?;
                    r.pos.push(item.to_string());
                }
            }
        }
        raws.push(r);
    }
    let numeric = order.iter().all(|n| is_x_name(n).is_some());
    let ids: BTreeMap<String, Var> = order
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let v = if numeric { is_x_name(n).expect("checked") } else { Var::new(i as u32 + 1) };
            (n.clone(), v)
        })
        .collect();
    let rules = raws
        .into_iter()
        .map(|r| {
            Rule::new(
                ids[&r.head],
                r.pos.iter().map(|n| ids[n]),
                r.neg.iter().map(|n| ids[n]),
            )
        })
        .collect();
    let program = Program::new(rules, universe.iter().map(|n| ids[n]));
    Ok(if numeric {
        program
    } else {
        program.with_names(ids.into_iter().map(|(n, v)| (v, n)).collect())
    })
}

pub fn serialize_lp(p: &Program) -> String {
    let mut out = String::from("#universe");
    for v in p.universe() {
        let _ = write!(out, " {}", p.atom_name(*v));
    }
    out.push_str(".\n");
    out.push_str(&p.to_string());
    out
}

fn symbols(value: &str, ln: usize) -> Result<BTreeSet<char>> {
    value
        .split_whitespace()
        .map(|tok| {
            let mut chars = tok.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => Ok(c),
                _ => Err(Error::parse(ln, 1, format!("symbols are single characters, got {tok:?}"))),
            }
        })
        .collect()
}

fn single_symbol(value: &str, ln: usize) -> Result<char> {
    let set = symbols(value, ln)?;
    match (set.len(), set.into_iter().next()) {
        (1, Some(c)) => Ok(c),
        _ => Err(Error::parse(ln, 1, "expected one symbol")),
    }
}

/// Line-oriented `key: value` machine description; `#` starts a comment.
pub fn parse_tm(text: &str) -> Result<NtmSpec> {
    let mut fields: BTreeMap<&str, (String, usize)> = BTreeMap::new();
    let mut transitions: BTreeMap<(String, char), Vec<Transition>> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| Error::parse(ln, 1, "expected \"key: value\""))?;
        let (key, value) = (key.trim(), value.trim());
        const KEYS: [&str; 11] = [
            "name", "states", "start", "accept", "reject", "theory_alphabet", "model_alphabet",
            "tape_alphabet", "blank", "k0", "p",
        ];
        if key == "delta" {
            let tokens: Vec<&str> = value.split_whitespace().collect();
            let [q, s, "->", nq, w, d] = tokens.as_slice() else {
                return Err(Error::parse(ln, 1, "expected \"delta: q s -> q' s' L|R\""));
            };
            let dir = match *d {
                "L" => Move::L,
                "R" => Move::R,
                _ => return Err(Error::parse(ln, 1, format!("bad move {d:?}"))),
            };
            let t = Transition {
                next: nq.to_string(),
                write: single_symbol(w, ln)?,
                dir,
            };
            let opts = transitions.entry((q.to_string(), single_symbol(s, ln)?)).or_default();
            if !opts.contains(&t) {
                opts.push(t);
            }
        } else if let Some(k) = KEYS.iter().find(|k| **k == key) {
            if fields.insert(k, (value.to_string(), ln)).is_some() {
                return Err(Error::parse(ln, 1, format!("duplicate key {key:?}")));
            }
        } else {
            return Err(Error::parse(ln, 1, format!("unknown key {key:?}")));
        }
    }
    let get = |k: &str| -> Result<(&str, usize)> {
        fields
            .get(k)
            .map(|(v, ln)| (v.as_str(), *ln))
            .ok_or_else(|| Error::parse(1, 1, format!("missing key {k:?}")))
    };
    let alphabet = |k: &str| -> Result<BTreeSet<char>> {
        let (v, ln) = get(k)?;
        symbols(v, ln)
    };
    let number = |k: &str| -> Result<Vec<u64>> {
        let (v, ln) = get(k)?;
        v.split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::parse(ln, 1, format!("bad number {t:?}"))))
            .collect()
    };
    let k0 = match number("k0")?.as_slice() {
        [k] => match u32::try_from(*k) {
            Ok(k) => k,
            Err(_) => return Err(Error::parse(get("k0")?.1, 1, "k0 too large")),
        },
        _ => return Err(Error::parse(get("k0")?.1, 1, "expected one number")),
    };
    let blank = match fields.get("blank") {
        Some((v, ln)) => single_symbol(v, *ln)?,
        None => '_',
    };
    let spec = NtmSpec {
        name: fields.get("name").map_or("machine".to_string(), |(v, _)| v.clone()),
        states: get("states")?.0.split_whitespace().map(String::from).collect(),
        start: get("start")?.0.to_string(),
        accept: get("accept")?.0.to_string(),
        reject: get("reject")?.0.to_string(),
        theory_alphabet: alphabet("theory_alphabet")?,
        model_alphabet: alphabet("model_alphabet")?,
        tape_alphabet: alphabet("tape_alphabet")?,
        blank,
        transitions,
        k0,
        p: number("p")?,
    };
    spec.validated()
}

pub fn serialize_tm(m: &NtmSpec) -> String {
    let join = |set: &BTreeSet<char>| set.iter().map(char::to_string).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    let _ = writeln!(out, "name: {}", m.name);
    let _ = writeln!(out, "states: {}", m.states.iter().cloned().collect::<Vec<_>>().join(" "));
    let _ = writeln!(out, "start: {}", m.start);
    let _ = writeln!(out, "accept: {}", m.accept);
    let _ = writeln!(out, "reject: {}", m.reject);
    let _ = writeln!(out, "theory_alphabet: {}", join(&m.theory_alphabet));
    let _ = writeln!(out, "model_alphabet: {}", join(&m.model_alphabet));
    let _ = writeln!(out, "tape_alphabet: {}", join(&m.tape_alphabet));
    let _ = writeln!(out, "blank: {}", m.blank);
    let _ = writeln!(out, "k0: {}", m.k0);
    let _ = writeln!(out, "p: {}", m.p.iter().map(u64::to_string).collect::<Vec<_>>().join(" "));
    for ((q, s), opts) in &m.transitions {
        for t in opts {
            let d = if t.dir == Move::L { 'L' } else { 'R' };
            let _ = writeln!(out, "delta: {q} {s} -> {} {} {d}", t.next, t.write);
        }
    }
    out
}

fn resolve_atom(tok: &str, names: &BTreeMap<Var, String>, ln: usize) -> Result<Var> {
    if let Some((v, _)) = names.iter().find(|(_, n)| n.as_str() == tok) {
        return Ok(*v);
    }
    is_x_name(tok).ok_or_else(|| Error::parse(ln, 1, format!("unknown atom {tok:?}")))
}

fn parse_domain(spec: &str, names: &BTreeMap<Var, String>, ln: usize) -> Result<BTreeSet<Var>> {
    let mut out = BTreeSet::new();
    for tok in spec.split_whitespace() {
        match tok.split_once("..") {
            Some((lo, hi)) => {
                let (lo, hi) = (resolve_atom(lo, names, ln)?, resolve_atom(hi, names, ln)?);
                out.extend((lo.index()..=hi.index()).map(Var::new));
            }
            None => {
                out.insert(resolve_atom(tok, names, ln)?);
            }
        }
    }
    Ok(out)
}

/// True atoms separated by whitespace over a known domain, or an
/// `@domain x1..x3` line followed by a bit string or atom list.
pub fn parse_interp(
    text: &str,
    domain: Option<&BTreeSet<Var>>,
    names: &BTreeMap<Var, String>,
) -> Result<Interpretation> {
    let mut dom = domain.cloned();
    let mut atoms: Option<(String, usize)> = None;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("@domain") {
            dom = Some(parse_domain(rest, names, ln)?);
        } else if atoms.is_some() {
            return Err(Error::parse(ln, 1, "more than one assignment line"));
        } else {
            atoms = Some((line.to_string(), ln));
        }
    }
    let dom = dom.ok_or_else(|| Error::parse(1, 1, "no domain given; add an @domain line"))?;
    let Some((line, ln)) = atoms else {
        return Interpretation::new(dom, BTreeSet::new());
    };
    if !line.is_empty() && line.chars().all(|c| c == '0' || c == '1') {
        let bits: Vec<bool> = line.chars().map(|c| c == '1').collect();
        return Interpretation::from_bits(&dom, &bits);
    }
    let true_atoms = line
        .split_whitespace()
        .map(|tok| resolve_atom(tok, names, ln))
        .collect::<Result<BTreeSet<Var>>>()?;
    Interpretation::new(dom, true_atoms)
}

pub fn serialize_interp(w: &Interpretation, names: &BTreeMap<Var, String>) -> String {
    let name = |v: &Var| names.get(v).cloned().unwrap_or_else(|| v.to_string());
    let mut out = String::from("@domain");
    if names.is_empty() {
        let vars: Vec<u32> = w.domain().iter().map(|v| v.index()).collect();
        let mut i = 0;
        while i < vars.len() {
            let mut j = i;
            while j + 1 < vars.len() && vars[j + 1] == vars[j] + 1 {
                j += 1;
            }
            if j > i {
                let _ = write!(out, " x{}..x{}", vars[i], vars[j]);
            } else {
                let _ = write!(out, " x{}", vars[i]);
            }
            i = j + 1;
        }
    } else {
        for v in w.domain() {
            let _ = write!(out, " {}", name(v));
        }
    }
    out.push('\n');
    let atoms: Vec<String> = w.true_atoms().iter().map(name).collect();
    out.push_str(&atoms.join(" "));
    out.push('\n');
    out
}

pub fn serialize_aux_map(map: &AuxMap) -> String {
    let mut out = String::from("c witness map: extend the source assignment by each aux definition in order\nsource");
    for v in &map.source_domain {
        let _ = write!(out, " {v}");
    }
    out.push('\n');
    for (v, def) in &map.defs {
        let _ = writeln!(out, "aux {v} {}", serialize_pf(def));
    }
    out
}

pub fn parse_aux_map(text: &str) -> Result<AuxMap> {
    let mut map = AuxMap::default();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("source") {
            map.source_domain = rest
                .split_whitespace()
                .map(|t| is_x_name(t).ok_or_else(|| Error::parse(ln, 1, format!("bad variable {t:?}"))))
                .collect::<Result<_>>()?;
        } else if let Some(rest) = line.strip_prefix("aux ") {
            let (v, def) = rest
                .trim()
                .split_once(' ')
                .ok_or_else(|| Error::parse(ln, 1, "expected \"aux <var> <formula>\""))?;
            let v = is_x_name(v).ok_or_else(|| Error::parse(ln, 5, format!("bad variable {v:?}")))?;
            map.defs.push((v, parse_pf(def)?));
        } else {
            return Err(Error::parse(ln, 1, "expected a source or aux line"));
        }
    }
    Ok(map)
}

pub fn serialize_tableau_sidecar(s: &TableauSidecar, comments: &[String]) -> String {
    let mut out = String::new();
    for line in comments {
        let _ = writeln!(out, "c {line}");
    }
    out.push_str("c row-1 witness map: free vars 1..hi; listed vars are true; each cell line maps a symbol to its variable\n");
    let _ = writeln!(out, "free 1 {}", s.free_hi);
    out.push_str("true");
    for v in &s.fixed_true {
        let _ = write!(out, " {}", v.index());
    }
    out.push('\n');
    for (j, symbols) in &s.cells {
        let _ = write!(out, "cell {j}");
        for (c, v) in symbols {
            let _ = write!(out, " {c}:{}", v.index());
        }
        out.push('\n');
    }
    out
}

pub fn parse_tableau_sidecar(text: &str) -> Result<TableauSidecar> {
    let mut out = TableauSidecar {
        free_hi: 0,
        fixed_true: Vec::new(),
        cells: Vec::new(),
    };
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') && !line.starts_with("cell") {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let bad = |t: &str| Error::parse(ln, 1, format!("bad token {t:?}"));
        let var = |t: &str| t.parse::<u32>().ok().and_then(Var::try_new).ok_or_else(|| bad(t));
        match tokens.next() {
            Some("free") => {
                let hi = tokens.nth(1).ok_or_else(|| bad("free"))?;
                out.free_hi = hi.parse().map_err(|_| bad(hi))?;
            }
            Some("true") => out.fixed_true = tokens.map(var).collect::<Result<_>>()?,
            Some("cell") => {
                let col = tokens.next().ok_or_else(|| bad("cell"))?;
                let col = col.parse().map_err(|_| bad(col))?;
                let symbols = tokens
                    .map(|t| {
                        let (s, v) = t.split_once(':').ok_or_else(|| bad(t))?;
                        Ok((single_symbol(s, ln)?, var(v)?))
                    })
                    .collect::<Result<_>>()?;
                out.cells.push((col, symbols));
            }
            Some(t) => return Err(bad(t)),
            None => {}
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntm::{machines, validate_spec};

    fn x(i: u32) -> Formula {
        Formula::atom(i)
    }

    #[test]
    fn pf_examples() {
        assert_eq!(parse_pf("(x1 & ~x2)").unwrap(), Formula::and(x(1), Formula::not(x(2))));
        assert_eq!(
            parse_pf("((x1 | x2) -> x3)").unwrap(),
            Formula::implies(Formula::or(x(1), x(2)), x(3))
        );
        assert!(matches!(parse_pf("x1 &"), Err(Error::Parse { .. })));
        assert!(matches!(parse_pf("(x1 &"), Err(Error::Parse { .. })));
        assert!(matches!(parse_pf("x0"), Err(Error::Parse { .. })));
        match parse_pf("(x1 &\n  x2 ?") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 6)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dimacs_examples() {
        let c = parse_dimacs("p cnf 2 1\n1 -2 0").unwrap();
        assert_eq!(c.clauses().len(), 1);
        assert_eq!(c.clauses()[0].to_string(), "(x1 | ~x2)");
        assert_eq!(
            parse_dimacs("p cnf 2 1\n1 -1 0"),
            Err(Error::TautologicalClause(Var::new(1)))
        );
        assert_eq!(
            parse_dimacs("p cnf 2 2\n1 2 0"),
            Err(Error::HeaderMismatch { declared: 2, found: 1 })
        );
        assert_eq!(parse_dimacs(&serialize_dimacs(&c)).unwrap(), c);
        let multi = parse_dimacs("c hi\np cnf 3 2\n1 2\n3 0 -1 0\n").unwrap();
        assert_eq!(multi.clauses().len(), 2);
    }

    #[test]
    fn eqdimacs_examples() {
        let f = parse_eqdimacs("p cnf 3 1\ne 3 0\n1 2 3 0").unwrap();
        assert_eq!(f.bound(), &[Var::new(3)].into());
        assert_eq!(f.free(), [Var::new(1), Var::new(2)].into());
        let free = parse_eqdimacs("p cnf 2 1\n1 2 0").unwrap();
        assert!(free.bound().is_empty());
        assert_eq!(
            parse_eqdimacs("p cnf 3 1\ne 9 0\n1 2 3 0"),
            Err(Error::BoundVarAbsent(Var::new(9)))
        );
        assert_eq!(parse_eqdimacs(&serialize_eqdimacs(&f, &["note".into()])).unwrap(), f);
    }

    #[test]
    fn eqdimacs_formula_matrix_keeps_models() {
        use crate::systems::{enumerate_models_sys, SystemId, Theory};
        let f = EpfFormula::new([Var::new(2)], Formula::or(x(1), Formula::and(x(2), x(3)))).unwrap();
        let g = parse_eqdimacs(&serialize_eqdimacs(&f, &[])).unwrap();
        assert_eq!(f.free(), g.free());
        assert_eq!(
            enumerate_models_sys(SystemId::EpfFSat, &Theory::Epf(f)).unwrap(),
            enumerate_models_sys(SystemId::EpfFSat, &Theory::Epf(g)).unwrap()
        );
    }

    #[test]
    fn lp_examples() {
        let p = parse_lp("a :- b, not c.").unwrap();
        assert_eq!(p.rules(), &[Rule::new(Var::new(1), [Var::new(2)], [Var::new(3)])]);
        assert_eq!(p.atom_name(Var::new(3)), "c");
        assert_eq!(parse_lp(&serialize_lp(&p)).unwrap(), p);
        let q = parse_lp("% numbered\n#universe x1 x4.\nx1 :- not x2.\n").unwrap();
        assert_eq!(q.universe().len(), 3);
        assert!(q.names().is_empty());
        assert_eq!(parse_lp(&serialize_lp(&q)).unwrap(), q);
        assert!(matches!(parse_lp("a :- b"), Err(Error::Parse { .. })));
    }

    #[test]
    fn tm_round_trip() {
        for (name, text) in machines::ALL {
            let m = parse_tm(text).unwrap();
            assert_eq!(validate_spec(&m), vec![], "{name}");
            assert_eq!(parse_tm(&serialize_tm(&m)).unwrap(), m);
        }
        let broken = machines::PARITY.replace("model_alphabet: 0 1", "model_alphabet: 0 1 _");
        assert!(matches!(parse_tm(&broken), Err(Error::InvalidSpec(_))));
        assert!(matches!(parse_tm("states q"), Err(Error::Parse { .. })));
    }

    #[test]
    fn interp_examples() {
        let dom: BTreeSet<Var> = (1..=3).map(Var::new).collect();
        let w = parse_interp("x1 x3", Some(&dom), &BTreeMap::new()).unwrap();
        assert_eq!(w.true_atoms(), &[Var::new(1), Var::new(3)].into());
        let bits = parse_interp("@domain x1..x3\n101\n", None, &BTreeMap::new()).unwrap();
        assert_eq!(bits, w);
        assert_eq!(parse_interp(&serialize_interp(&w, &BTreeMap::new()), None, &BTreeMap::new()).unwrap(), w);
        let names: BTreeMap<Var, String> = [(Var::new(1), "a".to_string()), (Var::new(2), "b".into())].into();
        let named = parse_interp("@domain a b\nb\n", None, &names).unwrap();
        assert_eq!(named.true_atoms(), &[Var::new(2)].into());
        assert!(matches!(
            parse_interp("x5", Some(&dom), &BTreeMap::new()),
            Err(Error::DomainMismatch { .. }) | Err(Error::UndefinedVariable(_))
        ));
    }

    #[test]
    fn qbf_round_trip() {
        let q = parse_qbf("e x1 a x2 : (x1 | x2)").unwrap();
        assert_eq!(q.prefix(), &[(Quantifier::Exists, Var::new(1)), (Quantifier::ForAll, Var::new(2))]);
        assert_eq!(parse_qbf(&serialize_qbf(&q)).unwrap(), q);
        let epf = parse_epf("e x2 : (x1 & x2)").unwrap();
        assert_eq!(epf.free(), [Var::new(1)].into());
        assert!(parse_epf("a x2 : (x1 & x2)").is_err());
    }

    #[test]
    fn aux_map_round_trip() {
        let (_, map) = crate::reductions::tseitin(&Formula::implies(x(1), Formula::and(x(2), Formula::ConstTrue)));
        assert_eq!(parse_aux_map(&serialize_aux_map(&map)).unwrap(), map);
    }
}
