//! Normal logic programs under the answer-set semantics.

use crate::error::{Error, Result};
use crate::formula::{fmt_vars, Interpretation, Var};
use crate::sat::{Limits, ModelSet};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// `head :- pos_body, not neg_body.`
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub head: Var,
    pub pos_body: BTreeSet<Var>,
    pub neg_body: BTreeSet<Var>,
}

impl Rule {
    pub fn fact(head: Var) -> Self {
        Rule::new(head, [], [])
    }

    pub fn new(
        head: Var,
        pos_body: impl IntoIterator<Item = Var>,
        neg_body: impl IntoIterator<Item = Var>,
    ) -> Self {
        Rule {
            head,
            pos_body: pos_body.into_iter().collect(),
            neg_body: neg_body.into_iter().collect(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.neg_body.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = Var> + '_ {
        std::iter::once(self.head)
            .chain(self.pos_body.iter().copied())
            .chain(self.neg_body.iter().copied())
    }
}

/// A program over an explicit atom universe. Atoms may carry display names.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Program {
    rules: Vec<Rule>,
    universe: BTreeSet<Var>,
    names: BTreeMap<Var, String>,
}

impl Program {
    /// The universe is widened to contain every atom that occurs.
    pub fn new(rules: Vec<Rule>, universe: impl IntoIterator<Item = Var>) -> Self {
        let mut universe: BTreeSet<Var> = universe.into_iter().collect();
        universe.extend(rules.iter().flat_map(Rule::atoms));
        Program {
            rules,
            universe,
            names: BTreeMap::new(),
        }
    }

    pub fn with_names(mut self, names: BTreeMap<Var, String>) -> Self {
        self.names = names;
        self
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn universe(&self) -> &BTreeSet<Var> {
        &self.universe
    }

    pub fn names(&self) -> &BTreeMap<Var, String> {
        &self.names
    }

    pub fn atom_name(&self, v: Var) -> String {
        self.names.get(&v).cloned().unwrap_or_else(|| v.to_string())
    }

    pub fn atom_by_name(&self, name: &str) -> Option<Var> {
        self.names
            .iter()
            .find(|(_, n)| n.as_str() == name)
            .map(|(v, _)| *v)
    }

    pub fn is_positive(&self) -> bool {
        self.rules.iter().all(Rule::is_positive)
    }

    pub fn push(&mut self, rule: Rule) {
        self.universe.extend(rule.atoms());
        self.rules.push(rule);
    }

    /// Classical reading: every rule whose body holds has a true head.
    pub fn is_classical_model(&self, m: &BTreeSet<Var>) -> bool {
        self.rules.iter().all(|r| {
            let body = r.pos_body.is_subset(m) && r.neg_body.is_disjoint(m);
            !body || m.contains(&r.head)
        })
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for rule in &self.rules {
            write!(f, "{}", self.atom_name(rule.head))?;
            let body: Vec<String> = rule
                .pos_body
                .iter()
                .map(|v| self.atom_name(*v))
                .chain(rule.neg_body.iter().map(|v| format!("not {}", self.atom_name(*v))))
                .collect();
            if !body.is_empty() {
                write!(f, " :- {}", body.join(", "))?;
            }
            writeln!(f, ".")?;
        }
        Ok(())
    }
}

/// Gelfond-Lifschitz reduct of `p` relative to `m`.
pub fn reduct(p: &Program, m: &BTreeSet<Var>) -> Program {
    let rules = p
        .rules
        .iter()
        .filter(|r| r.neg_body.is_disjoint(m))
        .map(|r| Rule::new(r.head, r.pos_body.iter().copied(), []))
        .collect();
    Program {
        rules,
        universe: p.universe.clone(),
        names: p.names.clone(),
    }
}

/// Least fixpoint of the immediate-consequence operator of a positive program.
pub fn least_model(p: &Program) -> Result<BTreeSet<Var>> {
    if !p.is_positive() {
        return Err(Error::NotPositive);
    }
    let mut model = BTreeSet::new();
    loop {
        let before = model.len();
        for r in &p.rules {
            if !model.contains(&r.head) && r.pos_body.is_subset(&model) {
                model.insert(r.head);
            }
        }
        if model.len() == before {
            return Ok(model);
        }
    }
}

pub fn is_answer_set(p: &Program, m: &BTreeSet<Var>) -> bool {
    let lm = least_model(&reduct(p, m)).expect("reducts are positive");
    &lm == m
}

/// All answer sets, found by checking every subset of the universe.
pub fn enumerate_answer_sets(p: &Program, limits: &Limits) -> Result<ModelSet> {
    let atoms: Vec<Var> = p.universe.iter().copied().collect();
    if atoms.len() > limits.asp_universe {
        return Err(Error::limit("answer-set universe", limits.asp_universe, atoms.len()));
    }
    let mut out = ModelSet::new(p.universe.clone());
    for mask in 0u64..1 << atoms.len() {
        let m: BTreeSet<Var> = atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, v)| *v)
            .collect();
        if is_answer_set(p, &m) {
            out.insert(Interpretation::new(p.universe.clone(), m)?)?;
        }
    }
    Ok(out)
}

/// Answer-set check on an interpretation over the universe.
pub fn check_interpretation(p: &Program, w: &Interpretation) -> Result<bool> {
    if w.domain() != &p.universe {
        return Err(Error::DomainMismatch {
            expected: fmt_vars(&p.universe),
            found: fmt_vars(w.domain()),
        });
    }
    Ok(is_answer_set(p, w.true_atoms()))
}
