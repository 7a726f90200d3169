use nplogic::asp::{self, Program, Rule};
use nplogic::formula::{var_range, Quantifier};
use nplogic::harness::{self, assignments, tt_models};
use nplogic::ntm::{all_strings, machines};
use nplogic::sat::{clausify, enumerate_models, qbf_eval, solve, Limits};
use nplogic::systems::{enumerate_models_sys, has_model, model_check, SystemId};
use nplogic::{Clause, CnfFormula, EpfFormula, Formula, Interpretation, Literal, QuantifiedFormula, Theory, Var};
use proptest::prelude::*;
use std::collections::BTreeSet;

fn formula(vars: u32, depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        8 => (1..=vars).prop_map(Formula::atom),
        1 => Just(Formula::ConstTrue),
        1 => Just(Formula::ConstFalse),
    ];
    leaf.prop_recursive(depth, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::implies(a, b)),
        ]
    })
}

fn literal(vars: u32) -> impl Strategy<Value = Literal> {
    (1..=vars, any::<bool>()).prop_map(|(v, s)| Literal::new(Var::new(v), s))
}

fn cnf(vars: u32, clauses: usize) -> impl Strategy<Value = CnfFormula> {
    let clause = prop::collection::btree_set(1..=vars, 1..=3).prop_flat_map(|vs| {
        let n = vs.len();
        (Just(vs), prop::collection::vec(any::<bool>(), n))
    });
    prop::collection::vec(clause, 0..=clauses).prop_map(|cs| {
        CnfFormula::from_clauses(
            cs.into_iter()
                .map(|(vs, signs)| {
                    Clause::new(vs.into_iter().zip(signs).map(|(v, s)| Literal::new(Var::new(v), s))).unwrap()
                })
                .collect(),
        )
    })
}

fn epf(free: u32, bound: u32) -> impl Strategy<Value = EpfFormula> {
    formula(free + bound, 3).prop_map(move |f| {
        let b: Vec<Var> = f.vars().into_iter().filter(|v| v.index() > free).collect();
        EpfFormula::new(b, f).unwrap()
    })
}

fn program(atoms: u32, rules: usize) -> impl Strategy<Value = Program> {
    let atom = (1..=atoms).prop_map(Var::new);
    let rule = (
        atom.clone(),
        prop::collection::vec(atom.clone(), 0..=2),
        prop::collection::vec(atom, 0..=2),
    )
        .prop_map(|(h, p, n)| Rule::new(h, p, n));
    prop::collection::vec(rule, 0..=rules).prop_map(move |rs| Program::new(rs, (1..=atoms).map(Var::new)))
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(300))]

    #[test]
    fn double_negation(f in formula(4, 4)) {
        let nn = Formula::not(Formula::not(f.clone()));
        for v in assignments(&f.vars()) {
            prop_assert_eq!(nn.evaluate(&v).unwrap(), f.evaluate(&v).unwrap());
        }
    }

    #[test]
    fn substitution_commutes_with_evaluation(e in epf(3, 2)) {
        let matrix = e.matrix().to_formula();
        for v in assignments(&e.free()) {
            let sub = e.substitute(&v).unwrap();
            for u in assignments(e.bound()) {
                let both = v.merge(&u).unwrap();
                let restricted = u.restrict(&sub.vars().intersection(e.bound()).copied().collect()).unwrap();
                prop_assert_eq!(sub.evaluate(&restricted).unwrap(), matrix.evaluate(&both).unwrap());
            }
        }
    }

    #[test]
    fn clause_rejects_complementary_pairs(lits in prop::collection::vec(literal(4), 0..8)) {
        let complementary = lits.iter().any(|l| lits.contains(&!*l));
        prop_assert_eq!(Clause::new(lits.clone()).is_err(), complementary);
    }

    #[test]
    fn enumeration_matches_truth_table(c in cnf(4, 6)) {
        let domain = var_range(1, 4);
        let got = enumerate_models(&c, &domain, &Limits::default()).unwrap().to_set();
        prop_assert_eq!(&got, &tt_models(&c.to_formula(), &domain));
        prop_assert_eq!(solve(&c, &Interpretation::default()).is_sat(), !got.is_empty());
    }

    #[test]
    fn enumeration_is_deterministic(c in cnf(6, 10)) {
        let domain = c.vars();
        let a = enumerate_models(&c, &domain, &Limits::default()).unwrap();
        let b = enumerate_models(&c, &domain, &Limits::default()).unwrap();
        prop_assert_eq!(a.models(), b.models());
        prop_assert_eq!(solve(&c, &Interpretation::default()), solve(&c, &Interpretation::default()));
    }

    #[test]
    fn existential_qbf_matches_clausified_solve(f in formula(5, 4)) {
        let prefix = f.vars().into_iter().map(|v| (Quantifier::Exists, v)).collect();
        let q = QuantifiedFormula::new(prefix, f.clone()).unwrap();
        let c = clausify(&f, 0);
        prop_assert_eq!(qbf_eval(&q, &Limits::default()).unwrap(), solve(&c, &Interpretation::default()).is_sat());
    }

    #[test]
    fn pf_model_sets_are_consistent(f in formula(4, 3)) {
        let t = Theory::Pf(f.clone());
        for sys in [SystemId::PfSat, SystemId::PfMinSat] {
            let models = enumerate_models_sys(sys, &t).unwrap();
            for w in assignments(&f.vars()) {
                prop_assert_eq!(models.contains(&w), model_check(sys, &t, &w).unwrap());
            }
        }
        prop_assert_eq!(has_model(SystemId::PfSat, &t).unwrap(), has_model(SystemId::PfMinSat, &t).unwrap());
    }

    #[test]
    fn epf_model_sets_are_consistent(e in epf(3, 2)) {
        let t = Theory::Epf(e.clone());
        for sys in [SystemId::EpfFSat, SystemId::EpfFMinSat] {
            let models = enumerate_models_sys(sys, &t).unwrap();
            for w in assignments(&e.free()) {
                prop_assert_eq!(models.contains(&w), model_check(sys, &t, &w).unwrap());
            }
        }
    }

    #[test]
    fn cnf_model_sets_are_consistent(c in cnf(4, 5)) {
        let t = Theory::Cnf(c.clone());
        for sys in [SystemId::CnfSat, SystemId::Cnf3Sat] {
            let models = enumerate_models_sys(sys, &t).unwrap();
            for w in assignments(&c.vars()) {
                prop_assert_eq!(models.contains(&w), model_check(sys, &t, &w).unwrap());
            }
        }
    }

    #[test]
    fn answer_sets_are_classical_and_incomparable(p in program(5, 6)) {
        let sets = asp::enumerate_answer_sets(&p, &Limits::default()).unwrap();
        let atoms: Vec<&BTreeSet<Var>> = sets.iter().map(Interpretation::true_atoms).collect();
        for (i, a) in atoms.iter().enumerate() {
            prop_assert!(p.is_classical_model(a));
            prop_assert!(harness::answer_set_oracle(&p, a));
            for b in &atoms[i + 1..] {
                prop_assert!(!a.is_subset(b) && !b.is_subset(a));
            }
        }
        let t = Theory::Lp(p.clone());
        let models = enumerate_models_sys(SystemId::LpAns, &t).unwrap();
        for w in assignments(p.universe()) {
            prop_assert_eq!(models.contains(&w), model_check(SystemId::LpAns, &t, &w).unwrap());
        }
    }

    #[test]
    fn least_model_is_monotone(p in program(5, 6), extra in program(5, 2)) {
        let positive = |q: &Program| {
            Program::new(q.rules().iter().filter(|r| r.is_positive()).cloned().collect(), q.universe().clone())
        };
        let base = positive(&p);
        let mut bigger = base.clone();
        for r in positive(&extra).rules() {
            bigger.push(r.clone());
        }
        let small = asp::least_model(&base).unwrap();
        let large = asp::least_model(&bigger).unwrap();
        prop_assert!(small.is_subset(&large));
    }
}

#[test]
fn deterministic_machines_branch_at_most_once() {
    for spec in machines::bundled().into_iter().filter(|m| m.is_deterministic()) {
        for t in harness::theory_strings(&spec, 2) {
            for w in all_strings(&spec.model_alphabet, spec.model_len(t.len())) {
                let mut c = spec.initial(&t, &w);
                for _ in 0..spec.time_bound(t.len(), w.len()) {
                    if spec.is_halting(&c.state) {
                        break;
                    }
                    let next = spec.step(&c).unwrap();
                    assert!(next.len() <= 1, "{} t={t} w={w}", spec.name);
                    match next.into_iter().next() {
                        Some(n) => c = n,
                        None => break,
                    }
                }
            }
        }
    }
}

#[test]
fn machines_reject_non_delta_witnesses() {
    for spec in machines::bundled() {
        let max = if spec.k0 == 1 { 3 } else { 2 };
        let tape: BTreeSet<char> = spec
            .theory_alphabet
            .union(&spec.model_alphabet)
            .copied()
            .collect();
        for t in harness::theory_strings(&spec, max) {
            for w in all_strings(&tape, spec.model_len(t.len())) {
                if w.chars().any(|c| !spec.model_alphabet.contains(&c)) {
                    assert!(!spec.accepts(&t, &w), "{} t={t} w={w}", spec.name);
                }
            }
        }
    }
}

#[test]
fn minimal_model_existence_matches_satisfiability() {
    let mut rng = harness::rng(5);
    for _ in 0..300 {
        let f = harness::random_formula(&mut rng, 6, 4);
        let t = Theory::Pf(f);
        assert_eq!(
            has_model(SystemId::PfSat, &t).unwrap(),
            has_model(SystemId::PfMinSat, &t).unwrap()
        );
    }
}
