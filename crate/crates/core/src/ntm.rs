//! Nondeterministic single-tape Turing machines with a bounded simulator.

use crate::error::{Error, Result};
use crate::sat::Limits;
use crate::systems::LogicSystem;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    L,
    R,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub next: String,
    pub write: char,
    pub dir: Move,
}

/// A machine over theory alphabet Γ, model alphabet Δ and tape alphabet Γ′.
/// The theory `t` and witness `w` are written as `t·w` starting at cell 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NtmSpec {
    pub name: String,
    pub states: BTreeSet<String>,
    pub start: String,
    pub accept: String,
    pub reject: String,
    pub theory_alphabet: BTreeSet<char>,
    pub model_alphabet: BTreeSet<char>,
    pub tape_alphabet: BTreeSet<char>,
    pub blank: char,
    pub transitions: BTreeMap<(String, char), Vec<Transition>>,
    pub k0: u32,
    /// Coefficients of the model-length polynomial, constant term first.
    pub p: Vec<u64>,
}

/// A fatal problem with a machine specification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    AlphabetsOverlap(char),
    BlankInModelAlphabet,
    BlankInTheoryAlphabet,
    BlankNotInTape,
    SymbolNotInTape(char),
    UnknownState(String),
    AcceptEqualsReject,
    HaltingStateHasTransition(String),
    ZeroTimeExponent,
    NonPositivePolynomial,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::AlphabetsOverlap(c) => write!(f, "symbol {c:?} is in both Γ and Δ"),
            Violation::BlankInModelAlphabet => f.write_str("blank is in the model alphabet"),
            Violation::BlankInTheoryAlphabet => f.write_str("blank is in the theory alphabet"),
            Violation::BlankNotInTape => f.write_str("blank is not in the tape alphabet"),
            Violation::SymbolNotInTape(c) => write!(f, "symbol {c:?} is not in the tape alphabet"),
            Violation::UnknownState(q) => write!(f, "state {q:?} is not declared"),
            Violation::AcceptEqualsReject => f.write_str("accept and reject states coincide"),
            Violation::HaltingStateHasTransition(q) => {
                write!(f, "halting state {q:?} has an outgoing transition")
            }
            Violation::ZeroTimeExponent => f.write_str("k0 must be positive"),
            Violation::NonPositivePolynomial => f.write_str("p(n) must be at least 1 for n >= 1"),
        }
    }
}

/// A non-fatal finding: the (state, symbol) pair has no transition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialTransition {
    pub state: String,
    pub symbol: char,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub tape: Vec<char>,
    /// 1-based.
    pub head: usize,
    pub state: String,
}

impl Configuration {
    pub fn scanned(&self, blank: char) -> char {
        self.tape.get(self.head - 1).copied().unwrap_or(blank)
    }
}

pub fn validate_spec(m: &NtmSpec) -> Vec<Violation> {
    let mut out = Vec::new();
    for c in m.theory_alphabet.intersection(&m.model_alphabet) {
        out.push(Violation::AlphabetsOverlap(*c));
    }
    if m.model_alphabet.contains(&m.blank) {
        out.push(Violation::BlankInModelAlphabet);
    }
    if m.theory_alphabet.contains(&m.blank) {
        out.push(Violation::BlankInTheoryAlphabet);
    }
    if !m.tape_alphabet.contains(&m.blank) {
        out.push(Violation::BlankNotInTape);
    }
    let mut missing: BTreeSet<char> = m
        .theory_alphabet
        .union(&m.model_alphabet)
        .filter(|c| !m.tape_alphabet.contains(c))
        .copied()
        .collect();
    let mut unknown: BTreeSet<&String> = [&m.start, &m.accept, &m.reject]
        .into_iter()
        .filter(|q| !m.states.contains(*q))
        .collect();
    for ((q, s), options) in &m.transitions {
        if !m.tape_alphabet.contains(s) {
            missing.insert(*s);
        }
        if !m.states.contains(q) {
            unknown.insert(q);
        }
        for t in options {
            if !m.tape_alphabet.contains(&t.write) {
                missing.insert(t.write);
            }
            if !m.states.contains(&t.next) {
                unknown.insert(&t.next);
            }
        }
    }
    out.extend(missing.into_iter().map(Violation::SymbolNotInTape));
    out.extend(unknown.into_iter().map(|q| Violation::UnknownState(q.clone())));
    if m.accept == m.reject {
        out.push(Violation::AcceptEqualsReject);
    }
    let halting: BTreeSet<&String> = m
        .transitions
        .iter()
        .filter(|((q, _), opts)| !opts.is_empty() && m.is_halting(q))
        .map(|((q, _), _)| q)
        .collect();
    out.extend(halting.into_iter().map(|q| Violation::HaltingStateHasTransition(q.clone())));
    if m.k0 == 0 {
        out.push(Violation::ZeroTimeExponent);
    }
    if m.model_len(1) < 1 {
        out.push(Violation::NonPositivePolynomial);
    }
    out
}

/// Non-halting (state, symbol) pairs without a transition; such branches reject.
pub fn spec_warnings(m: &NtmSpec) -> Vec<PartialTransition> {
    let mut out = Vec::new();
    for q in m.states.iter().filter(|q| !m.is_halting(q)) {
        for s in &m.tape_alphabet {
            if m.options(q, *s).is_empty() {
                out.push(PartialTransition {
                    state: q.clone(),
                    symbol: *s,
                });
            }
        }
    }
    out
}

impl NtmSpec {
    pub fn is_halting(&self, q: &str) -> bool {
        q == self.accept || q == self.reject
    }

    pub fn is_deterministic(&self) -> bool {
        self.transitions.values().all(|opts| opts.len() <= 1)
    }

    pub fn options(&self, q: &str, s: char) -> &[Transition] {
        self.transitions
            .get(&(q.to_string(), s))
            .map_or(&[], Vec::as_slice)
    }

    /// Fails with `InvalidSpec` when [`validate_spec`] finds anything.
    pub fn validated(self) -> Result<Self> {
        let v = validate_spec(&self);
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidSpec(v))
        }
    }

    /// `p(n)`, saturating.
    pub fn model_len(&self, n: usize) -> usize {
        let n = n as u64;
        let value = self
            .p
            .iter()
            .rev()
            .fold(0u64, |acc, c| acc.saturating_mul(n).saturating_add(*c));
        usize::try_from(value).unwrap_or(usize::MAX)
    }

    /// `(n + m)^k0`, saturating.
    pub fn time_bound(&self, n: usize, m: usize) -> usize {
        n.saturating_add(m).saturating_pow(self.k0)
    }

    pub fn initial(&self, t: &str, w: &str) -> Configuration {
        Configuration {
            tape: t.chars().chain(w.chars()).collect(),
            head: 1,
            state: self.start.clone(),
        }
    }

    /// One successor per applicable option; left moves at cell 1 stay put.
    pub fn step(&self, c: &Configuration) -> Result<Vec<Configuration>> {
        if self.is_halting(&c.state) {
            return Err(Error::HaltedConfiguration);
        }
        let scanned = c.scanned(self.blank);
        Ok(self
            .options(&c.state, scanned)
            .iter()
            .map(|t| {
                let mut tape = c.tape.clone();
                if tape.len() < c.head {
                    tape.resize(c.head, self.blank);
                }
                tape[c.head - 1] = t.write;
                let head = match t.dir {
                    Move::L => (c.head - 1).max(1),
                    Move::R => c.head + 1,
                };
                Configuration {
                    tape,
                    head,
                    state: t.next.clone(),
                }
            })
            .collect())
    }

    /// Some branch from `t·w` reaches the accept state within `(|t|+|w|)^k0` steps.
    pub fn accepts(&self, t: &str, w: &str) -> bool {
        let bound = self.time_bound(t.chars().count(), w.chars().count());
        let mut best: HashMap<Configuration, usize> = HashMap::new();
        let mut stack = vec![(self.initial(t, w), 0usize)];
        while let Some((c, steps)) = stack.pop() {
            if c.state == self.accept {
                return true;
            }
            if c.state == self.reject || steps == bound {
                continue;
            }
            match best.get(&c) {
                Some(&seen) if seen <= steps => continue,
                _ => {
                    best.insert(c.clone(), steps);
                }
            }
            for next in self.step(&c).expect("non-halting") {
                stack.push((next, steps + 1));
            }
        }
        false
    }

    /// `R(t, w)` for a witness over Δ of length `p(|t|)`.
    pub fn decide_relation(&self, t: &str, w: &str) -> Result<bool> {
        check_symbols(t, &self.theory_alphabet)?;
        let expected = self.model_len(t.chars().count());
        let found = w.chars().count();
        if found != expected {
            return Err(Error::LengthMismatch { expected, found });
        }
        check_symbols(w, &self.model_alphabet)?;
        Ok(self.accepts(t, w))
    }

    /// The unique run of a deterministic machine, up to halting or the time bound.
    pub fn run_deterministic(&self, t: &str, w: &str) -> Result<Vec<Configuration>> {
        if !self.is_deterministic() {
            return Err(Error::NotDeterministic);
        }
        let bound = self.time_bound(t.chars().count(), w.chars().count());
        let mut trace = vec![self.initial(t, w)];
        while trace.len() <= bound {
            let last = trace.last().expect("nonempty");
            if self.is_halting(&last.state) {
                break;
            }
            match self.step(last)?.pop() {
                Some(next) => trace.push(next),
                None => break,
            }
        }
        Ok(trace)
    }
}

fn check_symbols(s: &str, alphabet: &BTreeSet<char>) -> Result<()> {
    match s.chars().find(|c| !alphabet.contains(c)) {
        Some(c) => Err(Error::InvalidSymbol(c)),
        None => Ok(()),
    }
}

/// All strings of length `len` over `alphabet` in lexicographic order.
pub fn all_strings(alphabet: &BTreeSet<char>, len: usize) -> Vec<String> {
    let symbols: Vec<char> = alphabet.iter().copied().collect();
    let mut out = vec![String::new()];
    for _ in 0..len {
        out = out
            .iter()
            .flat_map(|prefix| {
                symbols.iter().map(move |c| {
                    let mut s = prefix.clone();
                    s.push(*c);
                    s
                })
            })
            .collect();
    }
    out
}

/// The logic system a machine defines: theories over Γ, models `w ∈ Δ^{p(|t|)}`.
#[derive(Debug, Clone)]
pub struct TmSystem {
    pub spec: NtmSpec,
    pub limits: Limits,
}

impl TmSystem {
    pub fn new(spec: NtmSpec) -> Self {
        TmSystem {
            spec,
            limits: Limits::default(),
        }
    }
}

impl LogicSystem for TmSystem {
    type Theory = String;
    type Model = String;

    fn name(&self) -> String {
        format!("tm:{}", self.spec.name)
    }

    fn theory_check(&self, t: &String) -> Result<()> {
        if t.is_empty() {
            return Err(Error::MalformedTheory("empty theory string".into()));
        }
        check_symbols(t, &self.spec.theory_alphabet)
    }

    fn model_size(&self, t: &String) -> Result<usize> {
        self.theory_check(t)?;
        Ok(self.spec.model_len(t.chars().count()))
    }

    fn model_check(&self, t: &String, w: &String) -> Result<bool> {
        self.theory_check(t)?;
        self.spec.decide_relation(t, w)
    }

    fn enumerate_models(&self, t: &String) -> Result<Vec<String>> {
        let m = self.model_size(t)?;
        let total = self
            .spec
            .model_alphabet
            .len()
            .checked_pow(u32::try_from(m).unwrap_or(u32::MAX))
            .unwrap_or(usize::MAX);
        if total > self.limits.max_models {
            return Err(Error::limit("candidate witnesses", self.limits.max_models, total));
        }
        Ok(all_strings(&self.spec.model_alphabet, m)
            .into_iter()
            .filter(|w| self.spec.accepts(t, w))
            .collect())
    }
}

/// Machines shipped with the toolkit, in the text format of [`crate::io::parse_tm`].
pub mod machines {
    use super::NtmSpec;

    /// Accepts iff `w` is `t` with `a ↦ 0`, `b ↦ 1`. Marks one theory symbol
    /// and one witness symbol per sweep.
    pub const EQ: &str = "\
name: eq
states: q0 ca1 cb1 ca cb back verify acc rej
start: q0
accept: acc
reject: rej
theory_alphabet: a b
model_alphabet: 0 1
tape_alphabet: a b 0 1 _ X Y
blank: _
k0: 2
p: 0 1
delta: q0 a -> ca1 X R
delta: q0 b -> cb1 X R
delta: q0 Y -> verify Y R
delta: ca1 0 -> acc Y R
delta: ca1 a -> ca a R
delta: ca1 b -> ca b R
delta: ca1 Y -> ca Y R
delta: cb1 1 -> acc Y R
delta: cb1 a -> cb a R
delta: cb1 b -> cb b R
delta: cb1 Y -> cb Y R
delta: ca a -> ca a R
delta: ca b -> ca b R
delta: ca Y -> ca Y R
delta: ca 0 -> back Y L
delta: cb a -> cb a R
delta: cb b -> cb b R
delta: cb Y -> cb Y R
delta: cb 1 -> back Y L
delta: back a -> back a L
delta: back b -> back b L
delta: back 0 -> back 0 L
delta: back 1 -> back 1 L
delta: back Y -> back Y L
delta: back X -> q0 X R
delta: verify Y -> verify Y R
delta: verify _ -> acc _ R
";

    /// Accepts iff every witness symbol is in Δ. Same sweep as `EQ`
    /// without comparing symbols.
    pub const DELTA_CHECK: &str = "\
name: delta-check
states: q0 c1 c back verify acc rej
start: q0
accept: acc
reject: rej
theory_alphabet: a b
model_alphabet: 0 1
tape_alphabet: a b 0 1 _ X Y
blank: _
k0: 2
p: 0 1
delta: q0 a -> c1 X R
delta: q0 b -> c1 X R
delta: q0 Y -> verify Y R
delta: c1 0 -> acc Y R
delta: c1 1 -> acc Y R
delta: c1 a -> c a R
delta: c1 b -> c b R
delta: c1 Y -> c Y R
delta: c a -> c a R
delta: c b -> c b R
delta: c Y -> c Y R
delta: c 0 -> back Y L
delta: c 1 -> back Y L
delta: back a -> back a L
delta: back b -> back b L
delta: back 0 -> back 0 L
delta: back 1 -> back 1 L
delta: back Y -> back Y L
delta: back X -> q0 X R
delta: verify Y -> verify Y R
delta: verify _ -> acc _ R
";

    /// Two witness bits whose ones, together with the `b`s of `t`, are even
    /// in number.
    pub const PARITY: &str = "\
name: parity
states: s o e1 o1 acc rej
start: s
accept: acc
reject: rej
theory_alphabet: a b
model_alphabet: 0 1
tape_alphabet: a b 0 1 _
blank: _
k0: 1
p: 2
delta: s a -> s a R
delta: s b -> o b R
delta: o a -> o a R
delta: o b -> s b R
delta: s 0 -> e1 0 R
delta: s 1 -> o1 1 R
delta: o 0 -> o1 0 R
delta: o 1 -> e1 1 R
delta: e1 0 -> acc 0 R
delta: o1 1 -> acc 1 R
";

    /// Two witness bits, at least one of them 1; the position is guessed.
    pub const NONDET_GUESS: &str = "\
name: nondet-guess
states: s f1 n1 n2 acc rej
start: s
accept: acc
reject: rej
theory_alphabet: a b
model_alphabet: 0 1
tape_alphabet: a b 0 1 _
blank: _
k0: 1
p: 2
delta: s a -> s a R
delta: s b -> s b R
delta: s 1 -> f1 1 R
delta: s 1 -> n1 1 R
delta: s 0 -> n1 0 R
delta: f1 0 -> acc 0 R
delta: f1 1 -> acc 1 R
delta: n1 1 -> acc 1 R
delta: n1 1 -> n2 1 R
";

    /// Rejects on the first step.
    pub const REJECT_ALL: &str = "\
name: reject-all
states: s acc rej
start: s
accept: acc
reject: rej
theory_alphabet: a b
model_alphabet: 0 1
tape_alphabet: a b 0 1 _
blank: _
k0: 1
p: 1
delta: s a -> rej a R
delta: s b -> rej b R
";

    pub const ALL: [(&str, &str); 5] = [
        ("eq", EQ),
        ("delta-check", DELTA_CHECK),
        ("parity", PARITY),
        ("nondet-guess", NONDET_GUESS),
        ("reject-all", REJECT_ALL),
    ];

    pub fn by_name(name: &str) -> Option<NtmSpec> {
        ALL.iter()
            .find(|(n, _)| *n == name)
            .map(|(_, text)| crate::io::parse_tm(text).expect("bundled machine parses"))
    }

    /// The four machines the bijection suites run over.
    pub fn bundled() -> Vec<NtmSpec> {
        ["eq", "delta-check", "parity", "nondet-guess"]
            .into_iter()
            .map(|n| by_name(n).expect("bundled"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::machines::*;
    use super::*;

    fn encode(t: &str) -> String {
        t.chars().map(|c| if c == 'a' { '0' } else { '1' }).collect()
    }

    #[test]
    fn bundled_machines_are_valid() {
        for (name, _) in ALL {
            let m = by_name(name).unwrap();
            assert_eq!(validate_spec(&m), vec![], "{name}");
        }
        assert!(by_name("eq").unwrap().is_deterministic());
        assert!(!by_name("nondet-guess").unwrap().is_deterministic());
    }

    #[test]
    fn validation_findings() {
        let mut m = by_name("parity").unwrap();
        m.model_alphabet.insert('_');
        assert!(validate_spec(&m).contains(&Violation::BlankInModelAlphabet));

        let mut m = by_name("parity").unwrap();
        m.transitions.insert(
            ("acc".into(), '0'),
            vec![Transition {
                next: "s".into(),
                write: '0',
                dir: Move::R,
            }],
        );
        assert_eq!(
            validate_spec(&m),
            vec![Violation::HaltingStateHasTransition("acc".into())]
        );
        assert!(!spec_warnings(&by_name("parity").unwrap()).is_empty());
    }

    #[test]
    fn step_examples() {
        let m = by_name("nondet-guess").unwrap();
        let c = m.initial("a", "10");
        assert_eq!(m.step(&c).unwrap().len(), 1);
        let at_one = Configuration {
            head: 2,
            ..c.clone()
        };
        assert_eq!(m.step(&at_one).unwrap().len(), 2);
        let dead = Configuration {
            state: "f1".into(),
            head: 4,
            ..c.clone()
        };
        assert!(m.step(&dead).unwrap().is_empty());
        let halted = Configuration {
            state: "acc".into(),
            ..c
        };
        assert_eq!(m.step(&halted), Err(Error::HaltedConfiguration));
    }

    #[test]
    fn left_edge_stays_put() {
        let mut m = by_name("parity").unwrap();
        m.transitions.insert(
            ("s".into(), 'a'),
            vec![Transition {
                next: "s".into(),
                write: 'b',
                dir: Move::L,
            }],
        );
        let next = m.step(&m.initial("a", "00")).unwrap();
        assert_eq!(next[0].head, 1);
        assert_eq!(next[0].tape[0], 'b');
    }

    #[test]
    fn writing_past_the_end_extends_with_blanks() {
        let m = by_name("eq").unwrap();
        let c = Configuration {
            tape: vec!['X', 'Y'],
            head: 3,
            state: "verify".into(),
        };
        let next = m.step(&c).unwrap();
        assert_eq!(next[0].tape, vec!['X', 'Y', '_']);
        assert_eq!(next[0].state, "acc");
    }

    #[test]
    fn eq_machine_matches_encoding() {
        let m = by_name("eq").unwrap();
        for n in 1..=3 {
            for t in all_strings(&m.theory_alphabet, n) {
                for w in all_strings(&m.model_alphabet, n) {
                    assert_eq!(m.decide_relation(&t, &w).unwrap(), w == encode(&t), "{t} {w}");
                }
            }
        }
    }

    #[test]
    fn bundled_oracles() {
        let delta = by_name("delta-check").unwrap();
        let parity = by_name("parity").unwrap();
        let guess = by_name("nondet-guess").unwrap();
        for n in 1..=3 {
            for t in all_strings(&delta.theory_alphabet, n) {
                for w in all_strings(&delta.model_alphabet, n) {
                    assert!(delta.decide_relation(&t, &w).unwrap());
                }
                for w in all_strings(&parity.model_alphabet, 2) {
                    let ones = w.chars().filter(|c| *c == '1').count();
                    let bs = t.chars().filter(|c| *c == 'b').count();
                    assert_eq!(parity.decide_relation(&t, &w).unwrap(), (ones + bs) % 2 == 0);
                    assert_eq!(guess.decide_relation(&t, &w).unwrap(), ones > 0);
                }
            }
        }
        let none = by_name("reject-all").unwrap();
        assert!(!none.decide_relation("ab", "0").unwrap());
    }

    #[test]
    fn machines_reject_witnesses_outside_delta() {
        for m in bundled() {
            let mixed: BTreeSet<char> = m.theory_alphabet.union(&m.model_alphabet).copied().collect();
            let max = if m.k0 == 1 { 3 } else { 2 };
            for n in 1..=max {
                for t in all_strings(&m.theory_alphabet, n) {
                    for w in all_strings(&mixed, m.model_len(n)) {
                        if w.chars().any(|c| !m.model_alphabet.contains(&c)) {
                            assert!(!m.accepts(&t, &w), "{} {t} {w}", m.name);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn decide_relation_errors() {
        let m = by_name("eq").unwrap();
        assert_eq!(
            m.decide_relation("ab", "0"),
            Err(Error::LengthMismatch {
                expected: 2,
                found: 1
            })
        );
        assert_eq!(m.decide_relation("a", "a"), Err(Error::InvalidSymbol('a')));
    }

    #[test]
    fn accepting_runs_fit_the_time_bound() {
        let m = by_name("eq").unwrap();
        for n in 1..=3 {
            for t in all_strings(&m.theory_alphabet, n) {
                let w = encode(&t);
                let trace = m.run_deterministic(&t, &w).unwrap();
                assert_eq!(trace.last().unwrap().state, "acc");
                assert!(trace.len() - 1 <= m.time_bound(n, n));
            }
        }
    }

    #[test]
    fn immediate_accept() {
        let mut m = by_name("reject-all").unwrap();
        for s in ['a', 'b'] {
            m.transitions.insert(
                ("s".into(), s),
                vec![Transition {
                    next: "acc".into(),
                    write: s,
                    dir: Move::R,
                }],
            );
        }
        assert!(m.accepts("ab", "0"));
        assert!(m.accepts("b", "1"));
    }
}
