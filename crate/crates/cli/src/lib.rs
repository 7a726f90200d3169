//! The `nplogic` command line. [`run_command`] is the whole program; `main`
//! only wires it to the process streams.

pub mod config;

use clap::{Parser, Subcommand, ValueEnum};
use config::Config;
use nplogic::harness::{self, Sizes, Suite, SuiteConfig};
use nplogic::io;
use nplogic::ntm::{all_strings, machines, NtmSpec};
use nplogic::reductions::{self, AuxMap, DualRail, Reduction};
use nplogic::sat::{clausify, clausify_matrix, qbf_eval};
use nplogic::systems::{System, SystemId, Theory};
use nplogic::tableau::{compile_det, compile_nondet, width_for};
use nplogic::{gadgets, Error, Interpretation, Limits, Var};
use rand::Rng;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "nplogic", version, about = "Logic systems, model-equivalent reductions and their checkers")]
struct Cli {
    /// TOML file with resource caps and an external solver.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether an interpretation is a model of a theory.
    Check {
        #[arg(long)]
        system: SystemId,
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        model: PathBuf,
    },
    /// List every model of a theory.
    Enumerate {
        #[arg(long)]
        system: SystemId,
        #[arg(long)]
        theory: PathBuf,
    },
    /// Decide whether a theory has a model.
    HasModel {
        #[arg(long)]
        system: SystemId,
        #[arg(long)]
        theory: PathBuf,
    },
    /// Apply a reduction to a theory file.
    Reduce {
        /// tseitin, cnf3, tseitin+cnf3, pf2epf or dualrail.
        #[arg(long)]
        name: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Where to write the witness map.
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Compile a machine and theory string into a tableau formula.
    CompileTm {
        /// A machine file, or builtin:NAME.
        #[arg(long)]
        tm: String,
        #[arg(long)]
        theory: String,
        #[arg(long, value_enum, default_value_t = Mode::Ntm)]
        mode: Mode,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Build the clause-indicator and SAT-UNSAT gadgets.
    Gadget {
        #[command(subcommand)]
        which: Gadget,
    },
    /// Check a reduction's witness bijection over a corpus.
    Verify {
        /// A reduction name, or tm:FILE / tm:builtin:NAME.
        #[arg(long)]
        reduction: String,
        /// A directory of theory files, or random:N:SEED.
        #[arg(long)]
        corpus: String,
    },
    /// Evaluate a closed quantified Boolean formula.
    QbfEval {
        #[arg(long)]
        input: PathBuf,
    },
    /// Run a bundled check suite.
    Suite {
        /// theorem1 (tableau), prop1 (minimality), theorem3 (indicator), lemma2
        /// (dual-rail), reductions, engines, or all.
        name: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Use the reduced corpus sizes.
        #[arg(long)]
        smoke: bool,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
}

#[derive(Debug, Subcommand)]
enum Gadget {
    /// The existential clause-indicator formula over π(n).
    PsiUpper {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// The propositional clause-indicator formula with rails and `y`.
    PsiLower {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Indicator assignment of a 3CNF for the existential family.
    EncodeUpper {
        #[arg(long)]
        n: usize,
        /// DIMACS file whose clauses lie in π(n).
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Indicator assignment of a 3CNF for the propositional family.
    EncodeLower {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// `{z}` is a minimal model iff φ is satisfiable and ψ is not.
    SatUnsat {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Ntm,
    Dtm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Records,
}

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Debug)]
enum Failure {
    Usage(String),
    Limit(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(Error::Io(e.to_string()))
    }
}

type Outcome = Result<i32, Failure>;

struct Env<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    config: Config,
    limits: Limits,
}

impl Env<'_> {
    /// Writes `text` to `path`, or to stdout when no path is given.
    fn emit(&mut self, path: Option<&Path>, text: &str) -> Result<(), Failure> {
        match path {
            Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
            None => Ok(self.out.write_all(text.as_bytes())?),
        }
    }

    /// Status lines go to stdout unless stdout carries the artifact.
    fn status(&mut self, artifact_on_stdout: bool, line: &str) -> Result<(), Failure> {
        let sink: &mut dyn Write = if artifact_on_stdout { self.err } else { self.out };
        Ok(writeln!(sink, "{line}")?)
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run_command<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_YES };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let config = match &cli.config {
        Some(p) => match Config::load(p) {
            Ok(c) => c,
            Err(msg) => {
                let _ = writeln!(err, "error: {msg}");
                return EXIT_ERROR;
            }
        },
        None => Config::default(),
    };
    let limits = config.limits();
    let mut env = Env {
        out,
        err,
        config,
        limits,
    };
    match dispatch(cli.command, &mut env) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(env.err, "error: {msg}");
            EXIT_ERROR
        }
        Err(Failure::Limit(msg)) => {
            let _ = writeln!(env.err, "error: {msg}");
            EXIT_LIMIT
        }
        Err(Failure::Core(e)) => {
            let _ = writeln!(env.err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceLimit { .. } => EXIT_LIMIT,
        _ => EXIT_ERROR,
    }
}

fn dispatch(command: Command, env: &mut Env) -> Outcome {
    match command {
        Command::Check { system, theory, model } => cmd_check(env, system, &theory, &model),
        Command::Enumerate { system, theory } => cmd_enumerate(env, system, &theory),
        Command::HasModel { system, theory } => cmd_has_model(env, system, &theory),
        Command::Reduce {
            name,
            input,
            output,
            witness_out,
        } => cmd_reduce(env, &name, &input, output.as_deref(), witness_out.as_deref()),
        Command::CompileTm {
            tm,
            theory,
            mode,
            output,
            witness_out,
        } => cmd_compile_tm(env, &tm, &theory, mode, output.as_deref(), witness_out.as_deref()),
        Command::Gadget { which } => cmd_gadget(env, which),
        Command::Verify { reduction, corpus } => cmd_verify(env, &reduction, &corpus),
        Command::QbfEval { input } => {
            let q = io::parse_qbf(&read(&input)?)?;
            let value = qbf_eval(&q, &env.limits)?;
            writeln!(env.out, "{value}")?;
            Ok(if value { EXIT_YES } else { EXIT_NO })
        }
        Command::Suite {
            name,
            seed,
            smoke,
            format,
        } => cmd_suite(env, &name, seed, smoke, format),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn parse_theory(id: SystemId, text: &str) -> nplogic::Result<Theory> {
    Ok(match id {
        SystemId::PfSat | SystemId::PfMinSat => Theory::Pf(io::parse_pf(text)?),
        SystemId::CnfSat | SystemId::Cnf3Sat => Theory::Cnf(io::parse_dimacs(text)?),
        SystemId::EpfFSat | SystemId::EpfFMinSat => Theory::Epf(io::parse_epf(text)?),
        SystemId::LpAns => Theory::Lp(io::parse_lp(text)?),
    })
}

fn names_of(t: &Theory) -> BTreeMap<Var, String> {
    match t {
        Theory::Lp(p) => p.names().clone(),
        _ => BTreeMap::new(),
    }
}

fn fmt_model(w: &Interpretation, names: &BTreeMap<Var, String>) -> String {
    let atoms: Vec<String> = w
        .true_atoms()
        .iter()
        .map(|v| names.get(v).cloned().unwrap_or_else(|| v.to_string()))
        .collect();
    format!("{{{}}}", atoms.join(" "))
}

fn cmd_check(env: &mut Env, id: SystemId, theory: &Path, model: &Path) -> Outcome {
    let t = parse_theory(id, &read(theory)?)?;
    let sys = System::new(id).with_limits(env.limits);
    let domain = sys.interp_domain(&t)?;
    let w = io::parse_interp(&read(model)?, Some(&domain), &names_of(&t))?;
    let w = if w.domain() == &domain { w } else { w.restrict(&domain)? };
    let yes = sys.model_check(&t, &w)?;
    writeln!(env.out, "{}", if yes { "yes" } else { "no" })?;
    Ok(if yes { EXIT_YES } else { EXIT_NO })
}

fn cmd_enumerate(env: &mut Env, id: SystemId, theory: &Path) -> Outcome {
    let t = parse_theory(id, &read(theory)?)?;
    let sys = System::new(id).with_limits(env.limits);
    let domain = sys.interp_domain(&t)?;
    let models = sys.enumerate(&t)?;
    let names = names_of(&t);
    let dom: Vec<String> = domain
        .iter()
        .map(|v| names.get(v).cloned().unwrap_or_else(|| v.to_string()))
        .collect();
    writeln!(env.out, "# {id} over {{{}}}", dom.join(" "))?;
    for m in &models {
        writeln!(env.out, "{}", fmt_model(m, &names))?;
    }
    writeln!(env.out, "# {} model{}", models.len(), if models.len() == 1 { "" } else { "s" })?;
    Ok(EXIT_YES)
}

fn cmd_has_model(env: &mut Env, id: SystemId, theory: &Path) -> Outcome {
    let t = parse_theory(id, &read(theory)?)?;
    let sys = System::new(id).with_limits(env.limits);
    sys.interp_domain(&t)?;
    let cnf = match (&t, env.config.solver()) {
        (Theory::Pf(f), Some(s)) if id == SystemId::PfSat => Some((clausify(f, 0), s)),
        (Theory::Cnf(c), Some(s)) => Some((c.clone(), s)),
        (Theory::Epf(e), Some(s)) if id == SystemId::EpfFSat => Some((clausify_matrix(e.matrix(), 0), s)),
        _ => None,
    };
    let yes = match cnf {
        Some((c, solver)) => solver.solve(&c, &Interpretation::default())?.is_sat(),
        None => sys.has_model(&t)?,
    };
    writeln!(env.out, "{}", if yes { "yes" } else { "no" })?;
    Ok(if yes { EXIT_YES } else { EXIT_NO })
}

fn cmd_reduce(env: &mut Env, name: &str, input: &Path, output: Option<&Path>, witness: Option<&Path>) -> Outcome {
    let text = read(input)?;
    let (theory, map, summary) = match name {
        "tseitin" | "tseitin+cnf3" => {
            let f = io::parse_pf(&text)?;
            let (mut c, mut map) = reductions::tseitin(&f);
            if name == "tseitin+cnf3" {
                let (c3, m3) = reductions::cnf_to_3cnf(&c);
                map.defs.extend(m3.defs);
                c = c3;
            }
            let summary = format!("{} variables, {} clauses", c.num_vars(), c.clauses().len());
            (io::serialize_dimacs(&c), map, summary)
        }
        "cnf3" => {
            let c = io::parse_dimacs(&text)?;
            let (c3, map) = reductions::cnf_to_3cnf(&c);
            let summary = format!("{} variables, {} clauses", c3.num_vars(), c3.clauses().len());
            (io::serialize_dimacs(&c3), map, summary)
        }
        "pf2epf" => {
            let f = io::parse_pf(&text)?;
            let e = reductions::pf_to_epf(&f);
            (io::serialize_epf(&e), AuxMap::identity(f.vars()), format!("{} free variables", e.free().len()))
        }
        "dualrail" => {
            let e = io::parse_epf(&text)?;
            let d = DualRail::new(&e);
            let target = d.formula();
            let summary = format!("{} free variables, {} rail pairs", target.free().len(), d.primes.len());
            (io::serialize_epf(&target), d.aux_map(), summary)
        }
        other => {
            return Err(Failure::Usage(format!(
                "unknown reduction {other:?}; expected tseitin, cnf3, tseitin+cnf3, pf2epf or dualrail"
            )))
        }
    };
    env.emit(output, &theory)?;
    if let Some(w) = witness {
        env.emit(Some(w), &io::serialize_aux_map(&map))?;
    }
    env.status(output.is_none(), &format!("{name}: {summary}"))?;
    Ok(EXIT_YES)
}

fn load_machine(spec: &str) -> Result<NtmSpec, Failure> {
    match spec.strip_prefix("builtin:") {
        Some(name) => machines::by_name(name).ok_or_else(|| {
            let known: Vec<&str> = machines::ALL.iter().map(|(n, _)| *n).collect();
            Failure::Usage(format!("no bundled machine {name:?}; known: {}", known.join(", ")))
        }),
        None => Ok(io::parse_tm(&read(Path::new(spec))?)?),
    }
}

fn cmd_compile_tm(
    env: &mut Env,
    tm: &str,
    t: &str,
    mode: Mode,
    output: Option<&Path>,
    witness: Option<&Path>,
) -> Outcome {
    let spec = load_machine(tm)?;
    let width = width_for(&spec, t.chars().count());
    let with_width = |e: Error| match e {
        Error::ResourceLimit { .. } => Failure::Limit(format!("{e}; the layout needs n'={width}")),
        e => Failure::Core(e),
    };
    let (text, comp) = match mode {
        Mode::Ntm => {
            let (f, comp) = compile_nondet(&spec, t, &env.limits).map_err(with_width)?;
            (io::serialize_eqdimacs(&f, &comp.comments()), comp)
        }
        Mode::Dtm => {
            let (g, comp) = compile_det(&spec, t, &env.limits).map_err(with_width)?;
            let mut text: String = comp.comments().iter().map(|c| format!("c {c}\n")).collect();
            text.push_str(&io::serialize_dimacs(&g));
            (text, comp)
        }
    };
    env.emit(output, &text)?;
    if let Some(w) = witness {
        env.emit(Some(w), &io::serialize_tableau_sidecar(&comp.sidecar(), &comp.comments()))?;
    }
    let summary = format!(
        "{}: {}, {} variables",
        spec.name,
        comp.comments().join(" "),
        comp.layout.num_vars()
    );
    env.status(output.is_none(), &summary)?;
    Ok(EXIT_YES)
}

fn cmd_gadget(env: &mut Env, which: Gadget) -> Outcome {
    match which {
        Gadget::PsiUpper { n, output } => {
            let psi = gadgets::build_psi_upper(n)?;
            let idx = gadgets::ClauseIndex::new(n)?;
            let note = format!(
                "clause-indicator family n={n}: x1..x{n} bound, z_c = x{} + c for c in 0..{}",
                n + 1,
                idx.len()
            );
            env.emit(output.as_deref(), &io::serialize_eqdimacs(&psi, &[note]))?;
            env.status(output.is_none(), &format!("{} free, {} bound", psi.free().len(), psi.bound().len()))?;
        }
        Gadget::PsiLower { n, output } => {
            let psi = gadgets::build_psi_lower(n)?;
            env.emit(output.as_deref(), &(io::serialize_pf(&psi) + "\n"))?;
            env.status(output.is_none(), &format!("{} variables", psi.vars().len()))?;
        }
        Gadget::EncodeUpper { n, phi, output } => {
            let m = gadgets::encode_upper(&io::parse_dimacs(&read(&phi)?)?, n)?;
            env.emit(output.as_deref(), &io::serialize_interp(&m, &BTreeMap::new()))?;
        }
        Gadget::EncodeLower { n, phi, output } => {
            let m = gadgets::encode_lower(&io::parse_dimacs(&read(&phi)?)?, n)?;
            env.emit(output.as_deref(), &io::serialize_interp(&m, &BTreeMap::new()))?;
        }
        Gadget::SatUnsat { phi, psi, output } => {
            let phi = io::parse_pf(&read(&phi)?)?;
            let psi = io::parse_pf(&read(&psi)?)?;
            let (f, z) = reductions::sat_unsat_gadget(&phi, &psi);
            env.emit(output.as_deref(), &io::serialize_epf(&f))?;
            env.status(output.is_none(), &format!("indicator z = {z}"))?;
        }
    }
    Ok(EXIT_YES)
}

enum Corpus {
    Random { count: usize, seed: u64 },
    Dir(PathBuf),
}

fn parse_corpus(spec: &str) -> Result<Corpus, Failure> {
    if let Some(rest) = spec.strip_prefix("random:") {
        let bad = || Failure::Usage(format!("corpus {spec:?}: expected random:N:SEED"));
        let (n, seed) = rest.split_once(':').ok_or_else(bad)?;
        return Ok(Corpus::Random {
            count: n.parse().map_err(|_| bad())?,
            seed: seed.parse().map_err(|_| bad())?,
        });
    }
    let dir = PathBuf::from(spec);
    if !dir.is_dir() {
        return Err(Failure::Usage(format!("corpus {spec:?} is neither a directory nor random:N:SEED")));
    }
    Ok(Corpus::Dir(dir))
}

fn corpus_files(dir: &Path) -> Result<Vec<(String, String)>, Failure> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let label = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            Ok((label, read(&p)?))
        })
        .collect()
}

fn short(text: &str) -> String {
    let one_line = text.split_whitespace().collect::<Vec<_>>().join(" ");
    if one_line.chars().count() > 60 {
        one_line.chars().take(57).collect::<String>() + "..."
    } else {
        one_line
    }
}

/// Per-entry verdicts folded into one exit code: any counterexample wins,
/// then operational errors, then resource limits.
#[derive(Default)]
struct Tally {
    pass: usize,
    fail: usize,
    error: usize,
    limit: usize,
}

impl Tally {
    fn code(&self) -> i32 {
        if self.fail > 0 {
            EXIT_NO
        } else if self.error > 0 {
            EXIT_ERROR
        } else if self.limit > 0 {
            EXIT_LIMIT
        } else {
            EXIT_YES
        }
    }
}

fn cmd_verify(env: &mut Env, reduction: &str, corpus: &str) -> Outcome {
    let corpus = parse_corpus(corpus)?;
    if let Corpus::Random { seed, .. } = corpus {
        writeln!(env.out, "seed: {seed}")?;
    }
    writeln!(env.out, "{:>5}  {:>7}  {:>7}  {:<6}  theory", "entry", "source", "target", "result")?;
    let tally = match reduction.strip_prefix("tm:") {
        Some(machine) => verify_tm(env, machine, &corpus)?,
        None => {
            let red = reductions::by_name(reduction, env.limits).ok_or_else(|| {
                Failure::Usage(format!(
                    "unknown reduction {reduction:?}; expected tseitin, cnf3, tseitin+cnf3, pf2epf, dualrail or tm:FILE"
                ))
            })?;
            verify_builtin(env, &red, &corpus)?
        }
    };
    writeln!(
        env.out,
        "{} passed, {} failed, {} errors, {} over limit",
        tally.pass, tally.fail, tally.error, tally.limit
    )?;
    Ok(tally.code())
}

fn random_theory(id: SystemId, rng: &mut impl Rng) -> Theory {
    match id {
        SystemId::PfSat | SystemId::PfMinSat => Theory::Pf(harness::random_formula(rng, 6, 4)),
        SystemId::CnfSat => Theory::Cnf(harness::random_cnf(rng, 6, 6, 6)),
        SystemId::Cnf3Sat => Theory::Cnf(harness::random_cnf(rng, 6, 6, 3)),
        SystemId::EpfFSat | SystemId::EpfFMinSat => Theory::Epf(harness::random_epf(rng, 4, 2, 3)),
        SystemId::LpAns => Theory::Lp(harness::random_program(rng, 5, 6)),
    }
}

fn theory_text(t: &Theory) -> String {
    match t {
        Theory::Pf(f) => io::serialize_pf(f),
        Theory::Cnf(c) => io::serialize_dimacs(c),
        Theory::Epf(e) => io::serialize_epf(e),
        Theory::Lp(p) => io::serialize_lp(p),
    }
}

fn record_row(
    env: &mut Env,
    tally: &mut Tally,
    i: usize,
    label: &str,
    result: nplogic::Result<nplogic::VerificationReport>,
) -> Result<(), Failure> {
    match result {
        Ok(report) => {
            let ok = report.passed();
            if ok {
                tally.pass += 1;
            } else {
                tally.fail += 1;
            }
            writeln!(
                env.out,
                "{i:>5}  {:>7}  {:>7}  {:<6}  {label}",
                report.source_count,
                report.target_count,
                if ok { "pass" } else { "FAIL" }
            )?;
            if let Some((w, why)) = &report.counterexample {
                writeln!(env.out, "       counterexample {w}: {why}")?;
            }
        }
        Err(e) => {
            let tag = if matches!(e, Error::ResourceLimit { .. }) {
                tally.limit += 1;
                "LIMIT"
            } else {
                tally.error += 1;
                "ERROR"
            };
            writeln!(env.out, "{i:>5}  {:>7}  {:>7}  {tag:<6}  {label}", "-", "-")?;
            writeln!(env.out, "       {e}")?;
        }
    }
    Ok(())
}

fn verify_builtin(env: &mut Env, red: &Reduction<System, System>, corpus: &Corpus) -> Result<Tally, Failure> {
    let id = red.source.id;
    let entries: Vec<(String, nplogic::Result<Theory>)> = match corpus {
        Corpus::Random { count, seed } => {
            let mut rng = harness::rng(*seed);
            (0..*count)
                .map(|_| {
                    let t = random_theory(id, &mut rng);
                    (short(&theory_text(&t)), Ok(t))
                })
                .collect()
        }
        Corpus::Dir(dir) => corpus_files(dir)?
            .into_iter()
            .map(|(label, text)| (label, parse_theory(id, &text)))
            .collect(),
    };
    let mut tally = Tally::default();
    for (i, (label, theory)) in entries.into_iter().enumerate() {
        let result = theory.and_then(|t| nplogic::verify_reduction(red, &t));
        record_row(env, &mut tally, i, &label, result)?;
    }
    Ok(tally)
}

fn verify_tm(env: &mut Env, machine: &str, corpus: &Corpus) -> Result<Tally, Failure> {
    let spec = load_machine(machine)?;
    // Projected enumeration is bounded by the layout cap rather than the
    // truth-table cap, since row 1 alone has n'·|symbols| variables.
    let limits = Limits {
        enum_vars: env.limits.enum_vars.max(env.limits.tableau_vars),
        ..env.limits
    };
    let red = reductions::ntm_to_epf(&spec, limits)?;
    let entries: Vec<(String, String)> = match corpus {
        Corpus::Random { count, seed } => {
            let mut rng = harness::rng(*seed);
            (0..*count)
                .map(|_| {
                    let len = rng.gen_range(1..=2);
                    let all = all_strings(&spec.theory_alphabet, len);
                    let t = all[rng.gen_range(0..all.len())].clone();
                    (t.clone(), t)
                })
                .collect()
        }
        Corpus::Dir(dir) => corpus_files(dir)?
            .into_iter()
            .map(|(label, text)| (label, text.trim().to_string()))
            .collect(),
    };
    let mut tally = Tally::default();
    for (i, (label, t)) in entries.into_iter().enumerate() {
        let result = nplogic::verify_reduction(&red, &t);
        record_row(env, &mut tally, i, &label, result)?;
    }
    Ok(tally)
}

fn cmd_suite(env: &mut Env, name: &str, seed: u64, smoke: bool, format: ReportFormat) -> Outcome {
    let suites: Vec<Suite> = if name == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![name.parse().map_err(Failure::Usage)?]
    };
    let config = SuiteConfig {
        seed,
        sizes: if smoke { Sizes::smoke() } else { Sizes::default() },
    };
    if format == ReportFormat::Text {
        writeln!(env.out, "seed: {seed}")?;
    }
    let mut ok = true;
    for suite in suites {
        let report = harness::run_suite(suite, &config);
        ok &= report.passed();
        let text = match format {
            ReportFormat::Text => report.to_text(),
            ReportFormat::Records => report.to_records(),
        };
        env.out.write_all(text.as_bytes())?;
    }
    Ok(if ok { EXIT_YES } else { EXIT_NO })
}
