//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use nplogic::harness::{self, Check, Sizes};
use nplogic::ntm::machines;
use std::process::ExitCode;
use std::time::{Duration, Instant};

const SEED: u64 = 42;

struct Outcome {
    checks: Vec<Check>,
    elapsed: Duration,
}

fn timed(run: impl FnOnce() -> Vec<Check>) -> Outcome {
    let start = Instant::now();
    let checks = run();
    Outcome {
        checks,
        elapsed: start.elapsed(),
    }
}

fn report(id: usize, title: &str, limit: Duration, outcome: &Outcome) -> bool {
    let in_time = outcome.elapsed <= limit;
    let ok = in_time && outcome.checks.iter().all(Check::passed);
    let cases: usize = outcome.checks.iter().map(|c| c.cases).sum();
    println!(
        "{} {id:>2}. {title} ({cases} cases, {:.1}s of {}s)",
        if ok { "PASS" } else { "FAIL" },
        outcome.elapsed.as_secs_f64(),
        limit.as_secs()
    );
    for c in &outcome.checks {
        if !c.passed() {
            println!("       {c}");
        }
    }
    if !in_time {
        println!("       time limit exceeded");
    }
    ok
}

fn minutes(m: u64) -> Duration {
    Duration::from_secs(60 * m)
}

fn main() -> ExitCode {
    let s = Sizes::default();
    let mut all = true;

    let tableau = timed(|| {
        let (bijection, sizes) = harness::tableau_checks(&machines::bundled(), s.tm_len, s.tm_len_linear);
        vec![bijection, sizes]
    });
    let (bijection, sizes) = (tableau.checks[0].clone(), tableau.checks[1].clone());
    all &= report(
        1,
        "tableau witness bijection on bundled machines",
        minutes(10),
        &Outcome {
            checks: vec![bijection],
            elapsed: tableau.elapsed,
        },
    );
    all &= report(
        2,
        "deterministic tableau for EQ",
        minutes(2),
        &timed(|| vec![harness::det_tableau_check(s.tm_len)]),
    );
    all &= report(
        3,
        "minimality membership formula vs direct check",
        minutes(2),
        &timed(|| vec![harness::membership_check(SEED, s.membership)]),
    );
    all &= report(
        4,
        "SAT-UNSAT gadget vs truth table",
        minutes(2),
        &timed(|| vec![harness::gadget_check(SEED, s.gadget_pairs)]),
    );
    let corpus = harness::indicator_corpus(SEED, s.pi4_random);
    all &= report(
        5,
        "clause-indicator upper gadget",
        minutes(5),
        &timed(|| vec![harness::upper_gadget_check(&corpus)]),
    );
    all &= report(
        6,
        "clause-indicator lower gadget",
        minutes(5),
        &timed(|| vec![harness::lower_gadget_check(&corpus)]),
    );
    all &= report(
        7,
        "dual-rail bijection",
        minutes(3),
        &timed(|| vec![harness::dual_rail_check(SEED, s.dual_rail)]),
    );
    all &= report(
        8,
        "reduction suite",
        minutes(5),
        &timed(|| harness::reduction_checks(SEED, s.reductions)),
    );
    all &= report(
        9,
        "engine oracles",
        minutes(5),
        &timed(|| {
            vec![
                harness::solver_check(SEED, s.solver_small, s.solver_random),
                harness::minimality_check(SEED, s.minimality),
                harness::answer_set_check(SEED, s.programs),
            ]
        }),
    );
    all &= report(
        10,
        "tableau size formulas",
        minutes(1),
        &Outcome {
            checks: vec![sizes],
            elapsed: Duration::ZERO,
        },
    );
    all &= report(
        11,
        "planted faults are detected",
        minutes(5),
        &timed(|| {
            vec![
                harness::fault_broken_witness(),
                harness::fault_removed_window(),
                harness::fault_dropped_rail(),
                harness::fault_membership_guard(SEED, s.membership),
                harness::fault_dropped_indicator(&corpus),
                harness::fault_engine(SEED, s.solver_small),
            ]
        }),
    );

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
