use nplogic::asp::{Program, Rule};
use nplogic::formula::Quantifier;
use nplogic::gadgets;
use nplogic::harness;
use nplogic::io;
use nplogic::ntm::machines;
use nplogic::reductions;
use nplogic::tableau::compile_nondet;
use nplogic::{Clause, CnfFormula, EpfFormula, Formula, Interpretation, Literal, QuantifiedFormula, Var};
use proptest::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

fn formula(vars: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        8 => (1..=vars).prop_map(Formula::atom),
        1 => Just(Formula::ConstTrue),
        1 => Just(Formula::ConstFalse),
    ];
    leaf.prop_recursive(5, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::implies(a, b)),
        ]
    })
}

fn cnf() -> impl Strategy<Value = CnfFormula> {
    let clause = prop::collection::btree_map(1u32..=12, any::<bool>(), 0..=5)
        .prop_map(|m| Clause::new(m.into_iter().map(|(v, s)| Literal::new(Var::new(v), s))).unwrap());
    (prop::collection::vec(clause, 0..=10), 0u32..4).prop_map(|(cs, spare)| {
        let mut c = CnfFormula::from_clauses(cs);
        c.reserve_vars(c.num_vars() + spare);
        c
    })
}

fn interpretation() -> impl Strategy<Value = Interpretation> {
    prop::collection::btree_map(1u32..=40, any::<bool>(), 0..=12).prop_map(|m| {
        Interpretation::from_fn(m.keys().map(|v| Var::new(*v)).collect(), |v| m[&v.index()])
    })
}

fn program() -> impl Strategy<Value = Program> {
    let atom = (1u32..=8).prop_map(Var::new);
    let rule = (
        atom.clone(),
        prop::collection::vec(atom.clone(), 0..=3),
        prop::collection::vec(atom, 0..=3),
    )
        .prop_map(|(h, p, n)| Rule::new(h, p, n));
    (prop::collection::vec(rule, 0..=8), prop::collection::btree_set(1u32..=10, 0..=3))
        .prop_map(|(rs, extra)| Program::new(rs, extra.into_iter().map(Var::new)))
}

fn named(p: Program) -> Program {
    let names: BTreeMap<Var, String> = p.universe().iter().map(|v| (*v, format!("p_{}", v.index()))).collect();
    p.with_names(names)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, ..ProptestConfig::default() })]

    #[test]
    fn pf(f in formula(9)) {
        let text = io::serialize_pf(&f);
        prop_assert_eq!(io::parse_pf(&text).unwrap(), f, "{}", text);
    }

    #[test]
    fn dimacs(c in cnf()) {
        let text = io::serialize_dimacs(&c);
        prop_assert_eq!(io::parse_dimacs(&text).unwrap(), c, "{}", text);
    }

    #[test]
    fn eqdimacs(c in cnf(), k in 0usize..6) {
        let bound: Vec<Var> = c.vars().into_iter().rev().take(k).collect();
        let e = EpfFormula::new(bound, c).unwrap();
        let text = io::serialize_eqdimacs(&e, &[]);
        let back = io::parse_eqdimacs(&text).unwrap();
        prop_assert_eq!(back.bound(), e.bound());
        prop_assert_eq!(back.matrix().to_formula(), e.matrix().to_formula());
        prop_assert_eq!(io::parse_epf(&text).unwrap(), back);
    }

    #[test]
    fn epf_text(f in formula(6)) {
        let bound: Vec<Var> = f.vars().into_iter().filter(|v| v.index() > 3).collect();
        let e = EpfFormula::new(bound, f).unwrap();
        let text = io::serialize_epf(&e);
        prop_assert_eq!(io::parse_epf(&text).unwrap(), e, "{}", text);
    }

    #[test]
    fn qbf(f in formula(6), quants in prop::collection::vec(any::<bool>(), 6)) {
        let prefix: Vec<(Quantifier, Var)> = f
            .vars()
            .into_iter()
            .zip(quants)
            .map(|(v, e)| (if e { Quantifier::Exists } else { Quantifier::ForAll }, v))
            .collect();
        let q = QuantifiedFormula::new(prefix, f).unwrap();
        let text = io::serialize_qbf(&q);
        prop_assert_eq!(io::parse_qbf(&text).unwrap(), q, "{}", text);
    }

    #[test]
    fn lp_indexed(p in program()) {
        let text = io::serialize_lp(&p);
        prop_assert_eq!(io::parse_lp(&text).unwrap(), p, "{}", text);
    }

    #[test]
    fn lp_named(p in program()) {
        let p = named(p);
        let back = io::parse_lp(&io::serialize_lp(&p)).unwrap();
        prop_assert_eq!(io::serialize_lp(&back), io::serialize_lp(&p));
        let rename = |q: &Program| -> BTreeSet<(String, Vec<String>, Vec<String>)> {
            q.rules()
                .iter()
                .map(|r| {
                    (
                        q.atom_name(r.head),
                        r.pos_body.iter().map(|v| q.atom_name(*v)).collect(),
                        r.neg_body.iter().map(|v| q.atom_name(*v)).collect(),
                    )
                })
                .collect()
        };
        prop_assert_eq!(rename(&back), rename(&p));
    }

    #[test]
    fn interp(w in interpretation()) {
        let text = io::serialize_interp(&w, &BTreeMap::new());
        prop_assert_eq!(io::parse_interp(&text, None, &BTreeMap::new()).unwrap(), w, "{}", text);
    }

    #[test]
    fn aux_map(f in formula(6)) {
        let (_, map) = reductions::tseitin(&f);
        let text = io::serialize_aux_map(&map);
        prop_assert_eq!(io::parse_aux_map(&text).unwrap(), map);
    }

    #[test]
    fn tm_with_dropped_transition(i in 0usize..64, which in 0usize..4) {
        let mut spec = machines::bundled().swap_remove(which);
        let keys: Vec<_> = spec.transitions.keys().cloned().collect();
        let key = &keys[i % keys.len()];
        spec.transitions.remove(key);
        let back = io::parse_tm(&io::serialize_tm(&spec)).unwrap();
        prop_assert_eq!(back, spec);
    }
}

#[test]
fn bundled_machines_round_trip() {
    for spec in machines::bundled() {
        assert_eq!(io::parse_tm(&io::serialize_tm(&spec)).unwrap(), spec);
    }
}

#[test]
fn tableau_sidecars_round_trip() {
    for spec in machines::bundled() {
        for t in harness::theory_strings(&spec, 2) {
            let (_, comp) = compile_nondet(&spec, &t, &nplogic::Limits::default()).unwrap();
            let side = comp.sidecar();
            let text = io::serialize_tableau_sidecar(&side, &comp.comments());
            assert_eq!(io::parse_tableau_sidecar(&text).unwrap(), side);
        }
    }
}

#[test]
fn clause_indicator_numbering_is_stable() {
    for n in 3..=5 {
        let psi = gadgets::build_psi_upper(n).unwrap();
        let text = io::serialize_eqdimacs(&psi, &[]);
        let back = io::parse_eqdimacs(&text).unwrap();
        assert_eq!(back, psi);
        assert_eq!(io::serialize_eqdimacs(&back, &[]), text);
    }
}
