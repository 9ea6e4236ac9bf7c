//! `qcalab` command-line front end.
//!
//! Exit codes: 0 success, 1 domain or check failure, 2 usage or parse failure.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use qcalab::amplitude::SuperpositionEntry;
use qcalab::bqca::run_schedule;
use qcalab::classical::{self, CaSpec, Config, EcaRule, FiniteConfig, PeriodicConfig};
use qcalab::compiler::{self, HEAD_ALIGNMENT};
use qcalab::format;
use qcalab::gates::{self, named_gate, Bits, Detector, Interferometer, NAMED_GATES};
use qcalab::pqca;
use qcalab::qca1d::{self, QcaConfig, Witness};
use qcalab::qtm;
use qcalab::{BqcaSpec, Gate, PqcaSpec, QcaSpec, QcaState, QtmSpec, QtmState, QubitRegister, Tolerance};

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(String),
}

type CliResult<T> = Result<T, CliError>;

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn domain<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Pbm,
}

#[derive(Debug, Parser)]
#[command(name = "qcalab", version, about = "Quantum cellular automata workbench")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Allowed deviation of a state's squared norm from 1.
    #[arg(long, global = true)]
    tolerance_norm: Option<f64>,
    /// Allowed deviation in unitarity and orthonormality checks.
    #[arg(long, global = true)]
    tolerance_unitary: Option<f64>,
    /// Write the result to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Space-time diagram of an elementary cellular automaton.
    Eca {
        #[arg(long)]
        rule: u32,
        #[arg(long, default_value_t = 16)]
        steps: usize,
        /// `single`, `random`, or a row pattern of '#' and '.' centred on cell 0.
        #[arg(long, default_value = "single")]
        seed: String,
        /// Number of cells shown (default: 2·steps + 1).
        #[arg(long)]
        width: Option<usize>,
        /// Wrap around a ring of `width` cells instead of an infinite line.
        #[arg(long)]
        ring: bool,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
    },
    /// Snapshots of a two-dimensional automaton (Life by default).
    Ca2d {
        /// `blinker`, `glider` or `block`.
        #[arg(long, default_value = "blinker", conflicts_with = "grid")]
        pattern: String,
        /// Text grid file ('#' live, '.' dead).
        #[arg(long)]
        grid: Option<PathBuf>,
        /// Rule table in JSON; Life when omitted.
        #[arg(long)]
        rule_file: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        steps: usize,
    },
    /// Evolve a 1d-QCA from a basis configuration.
    QcaRun {
        #[arg(long)]
        spec: PathBuf,
        /// Cells as `i:state`, separated by ';'.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        init: String,
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// Validity checks of a 1d-QCA.
    QcaCheck {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 3)]
        window: usize,
    },
    /// Evolve a partitioned QCA from a basis configuration.
    PqcaRun {
        #[arg(long)]
        spec: PathBuf,
        /// Cells as `i:(a,b,c)`, separated by ';'.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        init: String,
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// The EPR automaton from its standard initial configuration.
    PqcaEpr {
        #[arg(long, default_value_t = 5)]
        steps: usize,
        /// Replacement 9×9 cell matrix (matrix literal JSON).
        #[arg(long)]
        u: Option<PathBuf>,
    },
    /// Run a block-partitioned qubit chain.
    BqcaRun {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        schedule: PathBuf,
        /// Defaults to the schedule length.
        #[arg(long)]
        steps: Option<usize>,
        /// Initial bit string (default all zeros).
        #[arg(long)]
        init: Option<String>,
        /// Also write every intermediate state here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run a quantum Turing machine.
    QtmRun {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// Windowed well-formedness audit of a quantum Turing machine.
    QtmCheck {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long, default_value_t = 4)]
        window: usize,
        #[arg(long, default_value_t = 4)]
        steps: usize,
    },
    /// Compile a unidirectional QTM into a partitioned QCA.
    CompileQtm {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Compare acceptance of a QTM and its compiled PQCA.
    Equiv {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long)]
        steps: usize,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        /// Accepting symbols, comma separated.
        #[arg(long)]
        accept: String,
    },
    /// Detector probabilities of the beam-splitter experiments.
    Interferometer {
        #[arg(long)]
        obstacle: bool,
        #[arg(long, conflicts_with = "obstacle")]
        single: bool,
        /// One-qubit gate literal used for every half-silvered mirror.
        #[arg(long)]
        splitter: Option<PathBuf>,
    },
    /// Named gate matrices, unitarity, the CNOT table and a Bell state.
    GatesDemo {
        #[arg(long)]
        gate: Vec<String>,
        /// Additional gate literal file.
        #[arg(long)]
        literal: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(m)) => {
            eprintln!("failure: {m}");
            ExitCode::from(1)
        }
    }
}

/// Output plus whether the command's checks passed.
struct Outcome {
    body: String,
    passed: bool,
    failure: String,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Self { body, passed: true, failure: String::new() }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let g = &cli.global;
    let mut tol = Tolerance::default();
    if let Some(e) = g.tolerance_norm {
        tol = tol.with_norm(e).map_err(usage)?;
    }
    if let Some(e) = g.tolerance_unitary {
        tol = tol.with_unitary(e).map_err(usage)?;
    }
    let outcome = match &cli.command {
        Command::Eca { rule, steps, seed, width, ring, rng_seed } => {
            cmd_eca(*rule, *steps, seed, *width, *ring, *rng_seed, g.format)?
        }
        Command::Ca2d { pattern, grid, rule_file, steps } => {
            cmd_ca2d(pattern, grid.as_deref(), rule_file.as_deref(), *steps, g.format)?
        }
        Command::QcaRun { spec, init, steps } => cmd_qca_run(spec, init, *steps, &tol, text_or_json(g.format)?)?,
        Command::QcaCheck { spec, window } => cmd_qca_check(spec, *window, &tol, text_or_json(g.format)?)?,
        Command::PqcaRun { spec, init, steps } => cmd_pqca_run(spec, init, *steps, &tol, text_or_json(g.format)?)?,
        Command::PqcaEpr { steps, u } => cmd_pqca_epr(*steps, u.as_deref(), &tol, text_or_json(g.format)?)?,
        Command::BqcaRun { n, schedule, steps, init, trace } => {
            cmd_bqca_run(*n, schedule, *steps, init.as_deref(), trace.as_deref(), &tol, text_or_json(g.format)?)?
        }
        Command::QtmRun { machine, input, steps } => {
            cmd_qtm_run(machine, input, *steps, &tol, text_or_json(g.format)?)?
        }
        Command::QtmCheck { machine, window, steps } => {
            cmd_qtm_check(machine, *window, *steps, &tol, text_or_json(g.format)?)?
        }
        Command::CompileQtm { input } => cmd_compile(input, &tol, json_only(g.format)?)?,
        Command::Equiv { machine, input, steps, k, accept } => {
            cmd_equiv(machine, input, *steps, *k, accept, &tol, text_or_json(g.format)?)?
        }
        Command::Interferometer { obstacle, single, splitter } => {
            cmd_interferometer(*obstacle, *single, splitter.as_deref(), text_or_json(g.format)?)?
        }
        Command::GatesDemo { gate, literal } => {
            cmd_gates_demo(gate, literal.as_deref(), &tol, text_or_json(g.format)?)?
        }
    };
    match &g.out {
        Some(path) => fs::write(path, &outcome.body).map_err(|e| usage(format!("{}: {e}", path.display())))?,
        None => print!("{}", outcome.body),
    }
    if outcome.passed {
        Ok(())
    } else {
        Err(CliError::Domain(outcome.failure))
    }
}

fn text_or_json(f: Option<Format>) -> CliResult<Format> {
    match f {
        None | Some(Format::Json) => Ok(Format::Json),
        Some(Format::Text) => Ok(Format::Text),
        Some(Format::Pbm) => Err(usage("pbm output is only available for eca and ca2d")),
    }
}

fn json_only(f: Option<Format>) -> CliResult<Format> {
    match f {
        None | Some(Format::Json) => Ok(Format::Json),
        Some(other) => Err(usage(format!("{other:?} output is not available for this command"))),
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn trace_text(trace: &[Vec<SuperpositionEntry>], first: usize) -> String {
    let mut out = String::new();
    for (t, state) in trace.iter().enumerate() {
        let _ = writeln!(out, "t={}", t + first);
        for e in state {
            let _ = writeln!(out, "  {} {} {}", e.label, e.re, e.im);
        }
    }
    out
}

fn trace_body(trace: &[Vec<SuperpositionEntry>], first: usize, fmt: Format) -> String {
    match fmt {
        Format::Text => trace_text(trace, first),
        _ => pretty(&serde_json::to_value(trace).expect("entries serialize")),
    }
}

fn report_body(v: &Value, fmt: Format) -> String {
    match fmt {
        Format::Text => {
            let mut out = String::new();
            if let Value::Object(map) = v {
                for (k, val) in map {
                    let _ = writeln!(out, "{k}: {val}");
                }
            }
            out
        }
        _ => pretty(v),
    }
}

fn cmd_eca(
    rule: u32,
    steps: usize,
    seed: &str,
    width: Option<usize>,
    ring: bool,
    rng_seed: u64,
    fmt: Option<Format>,
) -> CliResult<Outcome> {
    let rule = EcaRule::new(rule).map_err(usage)?;
    let width = width.unwrap_or(2 * steps + 1);
    if width == 0 {
        return Err(usage("width must be positive"));
    }
    let lo = -((width / 2) as i64);
    let cells: Vec<u8> = match seed {
        "single" => (0..width).map(|i| u8::from(lo + i as i64 == 0)).collect(),
        "random" => {
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            (0..width).map(|_| rng.gen_range(0..2u8)).collect()
        }
        pattern => {
            if !pattern.chars().all(|c| matches!(c, '#' | '.' | '0' | '1')) {
                return Err(usage(format!("bad seed `{pattern}`")));
            }
            let plo = -((pattern.len() / 2) as i64);
            (0..width)
                .map(|i| {
                    let k = lo + i as i64 - plo;
                    let ch = usize::try_from(k).ok().and_then(|k| pattern.chars().nth(k));
                    u8::from(matches!(ch, Some('#' | '1')))
                })
                .collect()
        }
    };
    let start: Config = if ring {
        PeriodicConfig::ring(cells).map_err(usage)?.into()
    } else {
        FiniteConfig::from_cells(
            1,
            0,
            cells.iter().enumerate().filter(|(_, &s)| s != 0).map(|(i, &s)| ([lo + i as i64, 0], s)),
        )
        .into()
    };
    let trace = classical::run_trace(&start, &rule, steps).map_err(domain)?;
    let rows = classical::diagram_rows(&trace, Some((lo, lo + width as i64 - 1)));
    let body = match fmt.unwrap_or(Format::Text) {
        Format::Text => classical::text(&rows),
        Format::Pbm => classical::pbm(&rows),
        Format::Json => {
            let lines: Vec<String> = classical::text(&rows).lines().map(str::to_string).collect();
            pretty(&json!({"rule": rule.number(), "steps": steps, "rows": lines}))
        }
    };
    Ok(Outcome::ok(body))
}

fn cmd_ca2d(
    pattern: &str,
    grid: Option<&Path>,
    rule_file: Option<&Path>,
    steps: usize,
    fmt: Option<Format>,
) -> CliResult<Outcome> {
    let spec = match rule_file {
        Some(p) => format::ca_from_json(&read(p)?).map_err(usage)?,
        None => CaSpec::game_of_life(),
    };
    if spec.dim() != 2 {
        return Err(usage("ca2d needs a 2-D rule"));
    }
    let text = match grid {
        Some(p) => read(p)?,
        None => match pattern {
            "blinker" => ".....\n..#..\n..#..\n..#..\n.....".to_string(),
            "glider" => ".#...\n..#..\n###..\n.....\n.....".to_string(),
            "block" => "....\n.##.\n.##.\n....".to_string(),
            other => return Err(usage(format!("unknown pattern `{other}`"))),
        },
    };
    let mut start = FiniteConfig::new(2, spec.quiescent().unwrap_or(0));
    for (z, s) in FiniteConfig::from_grid(&text).support() {
        start.set(*z, *s);
    }
    let trace = classical::run_trace(&start.into(), &spec, steps).map_err(domain)?;
    let hull = trace
        .iter()
        .filter_map(|c| c.as_finite().and_then(FiniteConfig::hull))
        .reduce(|a, b| ([a.0[0].min(b.0[0]), a.0[1].min(b.0[1])], [a.1[0].max(b.1[0]), a.1[1].max(b.1[1])]));
    let frames: Vec<Vec<Vec<bool>>> = trace.iter().map(|c| classical::snapshot_rows(c, hull)).collect();
    let body = match fmt.unwrap_or(Format::Text) {
        Format::Text => frames.iter().map(|f| classical::text(f)).collect::<Vec<_>>().join("\n"),
        Format::Pbm => classical::pbm(frames.last().expect("trace is non-empty")),
        Format::Json => {
            let steps: Vec<Vec<String>> =
                frames.iter().map(|f| classical::text(f).lines().map(str::to_string).collect()).collect();
            pretty(&json!({"steps": steps}))
        }
    };
    Ok(Outcome::ok(body))
}

fn parse_cells(init: &str, lookup: impl Fn(&str) -> Option<u32>) -> CliResult<QcaConfig> {
    let mut cells = Vec::new();
    for part in init.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (i, name) = part.split_once(':').ok_or_else(|| usage(format!("expected `i:state`, got `{part}`")))?;
        let i: i64 = i.trim().parse().map_err(|_| usage(format!("bad cell index `{i}`")))?;
        let q = lookup(name.trim()).ok_or_else(|| usage(format!("unknown state `{name}`")))?;
        cells.push((i, q));
    }
    Ok(QcaConfig::from_cells(cells))
}

fn cmd_qca_run(spec: &Path, init: &str, steps: usize, tol: &Tolerance, fmt: Format) -> CliResult<Outcome> {
    let spec: QcaSpec = format::qca_from_json(&read(spec)?, false).map_err(usage)?;
    let start = parse_cells(init, |n| spec.state_index(n))?;
    let mut state = QcaState::basis(start);
    let mut trace = vec![state.entries(|c| spec.render(c))];
    for _ in 0..steps {
        state = qca1d::evolve(&state, &spec, tol).map_err(domain)?;
        trace.push(state.entries(|c| spec.render(c)));
    }
    Ok(Outcome::ok(trace_body(&trace, 0, fmt)))
}

fn window_json(r: &qca1d::WindowReport<f64>) -> Value {
    json!({
        "window": r.window,
        "holds": r.holds,
        "column_deviation": r.column_deviation,
        "row_deviation": r.row_deviation,
    })
}

fn cmd_qca_check(path: &Path, window: usize, tol: &Tolerance, fmt: Format) -> CliResult<Outcome> {
    let spec: QcaSpec = format::qca_from_json(&read(path)?, false).map_err(usage)?;
    let names = |t: &[u32]| t.iter().map(|&q| spec.states()[q as usize].clone()).collect::<Vec<_>>();
    let render = |c: &QcaConfig| spec.render(c);
    let local = qca1d::check_local_probability(&spec, tol);
    let stable = qca1d::check_quiescent_stability(&spec);
    let wf = qca1d::check_well_formed_window(&spec, window, tol).map_err(domain)?;
    let unitary = qca1d::check_unitary_window(&spec, window, tol).map_err(domain)?;
    // Rows near the window edge lose preimages whenever cells read their
    // neighbours, so the row check only decides for N = {0}.
    let gating = spec.neighborhood() == [0];
    let mut witnesses = Vec::new();
    if !local.holds {
        witnesses.push(json!({"check": "local_probability", "tuple": names(&local.worst_tuple)}));
    }
    for (check, report) in [("well_formed_window", &wf), ("unitary_window", &unitary)] {
        match &report.witness {
            Some(Witness::Columns(a, b)) => witnesses.push(json!({"check": check, "columns": [render(a), render(b)]})),
            Some(Witness::Rows(a, b)) => witnesses.push(json!({"check": check, "rows": [render(a), render(b)]})),
            None => {}
        }
    }
    let passed = local.holds && stable && wf.holds && (unitary.holds || !gating);
    let mut unitary_json = window_json(&unitary);
    unitary_json["decisive"] = json!(gating);
    let report = json!({
        "local_probability": {
            "holds": local.holds,
            "worst_tuple": names(&local.worst_tuple),
            "worst_deviation": local.worst_deviation,
        },
        "quiescent_stability": stable,
        "well_formed_window_n": window_json(&wf),
        "unitary_window_n": unitary_json,
        "witnesses": witnesses,
        "passed": passed,
    });
    Ok(Outcome { body: report_body(&report, fmt), passed, failure: "QCA checks failed".into() })
}

fn run_pqca(
    spec: &PqcaSpec,
    start: QcaConfig,
    steps: usize,
    tol: &Tolerance,
) -> CliResult<Vec<Vec<SuperpositionEntry>>> {
    if !pqca::check_pqca_unitary(spec, tol) {
        let (dev, (a, b)) = spec.u().unitarity_defect();
        return Err(domain(format!(
            "cell matrix is not unitary (deviation {dev:e} at columns {}, {})",
            spec.state_name(a as u32),
            spec.state_name(b as u32)
        )));
    }
    let mut state = QcaState::basis(start);
    let mut trace = vec![state.entries(|c| spec.render(c))];
    for _ in 0..steps {
        state = pqca::pqca_step(&state, spec, tol).map_err(domain)?;
        trace.push(state.entries(|c| spec.render(c)));
    }
    Ok(trace)
}

fn cmd_pqca_run(path: &Path, init: &str, steps: usize, tol: &Tolerance, fmt: Format) -> CliResult<Outcome> {
    let spec: PqcaSpec = format::pqca_from_json(&read(path)?).map_err(usage)?;
    let names = spec.state_names();
    let start = parse_cells(init, |n| names.iter().position(|s| s == n).map(|i| i as u32))?;
    let trace = run_pqca(&spec, start, steps, tol)?;
    Ok(Outcome::ok(trace_body(&trace, 0, fmt)))
}

fn cmd_pqca_epr(steps: usize, u: Option<&Path>, tol: &Tolerance, fmt: Format) -> CliResult<Outcome> {
    let mut spec: PqcaSpec = pqca::epr_spec();
    if let Some(path) = u {
        let text = read(path)?;
        let v: Value = serde_json::from_str(&text).map_err(usage)?;
        let m = format::matrix_from_json(v.get("matrix").unwrap_or(&v)).map_err(usage)?;
        spec = PqcaSpec::new(spec.parts().to_vec(), spec.offsets().to_vec(), m).map_err(usage)?;
    }
    let start = pqca::epr_initial(&spec);
    let trace = run_pqca(&spec, start, steps, tol)?;
    Ok(Outcome::ok(trace_body(&trace[1..], 1, fmt)))
}

fn cmd_bqca_run(
    n: usize,
    schedule: &Path,
    steps: Option<usize>,
    init: Option<&str>,
    trace_path: Option<&Path>,
    tol: &Tolerance,
    fmt: Format,
) -> CliResult<Outcome> {
    let schedule = format::schedule_from_json::<f64>(&read(schedule)?).map_err(usage)?;
    let len = match &schedule {
        qcalab::bqca::Schedule::PerStep(g) => g.len(),
        qcalab::bqca::Schedule::Repeat(_) => 1,
    };
    let start = match init {
        Some(bits) => QubitRegister::from_bits(bits).map_err(usage)?,
        None => QubitRegister::zero(n),
    };
    if start.n() != n {
        return Err(usage(format!("--init has {} bits, expected {n}", start.n())));
    }
    let spec = BqcaSpec::new(n, schedule, steps.unwrap_or(len)).map_err(domain)?;
    let (last, trace) = run_schedule(&start, &spec).map_err(domain)?;
    start.state().check_normalized(tol).map_err(domain)?;
    if let Some(path) = trace_path {
        let all: Vec<_> = trace.iter().map(|r| r.state().entries(Bits::to_string)).collect();
        fs::write(path, trace_body(&all, 0, Format::Json)).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    let entries = last.state().entries(Bits::to_string);
    let body = match fmt {
        Format::Text => trace_text(&[entries], spec.steps()),
        _ => pretty(&serde_json::to_value(entries).expect("entries serialize")),
    };
    Ok(Outcome::ok(body))
}

fn load_machine(path: &Path) -> CliResult<QtmSpec> {
    format::qtm_from_json(&read(path)?).map_err(usage)
}

fn cmd_qtm_run(path: &Path, input: &str, steps: usize, tol: &Tolerance, fmt: Format) -> CliResult<Outcome> {
    let spec = load_machine(path)?;
    let word = spec.parse_word(input).map_err(usage)?;
    let start = QtmState::basis(spec.initial_config(&word));
    let states = qtm::run(&spec, &start, steps, tol).map_err(domain)?;
    let trace: Vec<_> = states.iter().map(|s| s.entries(|c| spec.render(c))).collect();
    Ok(Outcome::ok(trace_body(&trace, 0, fmt)))
}

fn cmd_qtm_check(path: &Path, window: usize, steps: usize, tol: &Tolerance, fmt: Format) -> CliResult<Outcome> {
    let spec = load_machine(path)?;
    let r = qtm::check_well_formed_window(&spec, window, steps, tol).map_err(domain)?;
    let report = json!({
        "unidirectional": qtm::is_unidirectional(&spec),
        "window": window,
        "steps": steps,
        "holds": r.holds,
        "column_deviation": r.column_deviation,
        "norm_drift": r.norm_drift,
        "domain_size": r.domain_size,
        "excluded": r.excluded,
        "witness": r.witness.as_ref().map(|(a, b)| vec![spec.render(a), spec.render(b)]),
    });
    Ok(Outcome { body: report_body(&report, fmt), passed: r.holds, failure: "machine failed the window audit".into() })
}

fn cmd_compile(path: &Path, tol: &Tolerance, _fmt: Format) -> CliResult<Outcome> {
    let spec = load_machine(path)?;
    let compiled = compiler::compile(&spec, tol).map_err(domain)?;
    let mut v = format::pqca_to_json(&compiled.spec);
    let names = |ks: &[u32]| ks.iter().map(|&q| spec.states()[q as usize].clone()).collect::<Vec<_>>();
    v["k_l"] = json!(names(&compiled.split.k_l));
    v["k_r"] = json!(names(&compiled.split.k_r));
    v["head_alignment"] = json!(HEAD_ALIGNMENT);
    Ok(Outcome::ok(pretty(&v)))
}

fn cmd_equiv(
    path: &Path,
    input: &str,
    steps: usize,
    k: i64,
    accept: &str,
    tol: &Tolerance,
    fmt: Format,
) -> CliResult<Outcome> {
    let spec = load_machine(path)?;
    let word = spec.parse_word(input).map_err(usage)?;
    let accept: BTreeSet<u32> = format::symbol_set(&spec, accept).map_err(usage)?;
    let compiled = compiler::compile(&spec, tol).map_err(domain)?;
    let r = compiler::equivalence_check(&spec, &compiled, &word, steps, k, &accept, tol).map_err(domain)?;
    let report = json!({
        "p_qtm": r.p_qtm,
        "p_pqca": r.p_pqca,
        "delta": r.delta,
        "qtm_steps": r.qtm_steps,
        "pqca_steps": r.pqca_steps,
        "head_alignment": HEAD_ALIGNMENT,
    });
    let passed = r.delta <= tol.eps_unitary;
    Ok(Outcome { body: report_body(&report, fmt), passed, failure: format!("acceptance differs by {:e}", r.delta) })
}

fn cmd_interferometer(obstacle: bool, single: bool, splitter: Option<&Path>, fmt: Format) -> CliResult<Outcome> {
    let setup = if single { Interferometer::SingleSplitter } else { Interferometer::MachZehnder { obstacle } };
    let readout = match splitter {
        Some(path) => {
            let v: Value = serde_json::from_str(&read(path)?).map_err(usage)?;
            let g: Gate = format::gate_from_json(&v).map_err(usage)?;
            gates::interferometer_with(setup, &g).map_err(domain)?
        }
        None => gates::interferometer::<f64>(setup).map_err(domain)?,
    };
    let report = json!({"A": readout[&Detector::A], "B": readout[&Detector::B]});
    Ok(Outcome::ok(report_body(&report, fmt)))
}

fn cmd_gates_demo(names: &[String], literal: Option<&Path>, tol: &Tolerance, fmt: Format) -> CliResult<Outcome> {
    let mut list: Vec<(String, Gate)> = Vec::new();
    let chosen: Vec<String> = if names.is_empty() && literal.is_none() {
        NAMED_GATES.iter().map(|s| s.to_string()).collect()
    } else {
        names.to_vec()
    };
    for n in chosen {
        let g = named_gate(&n).map_err(usage)?;
        list.push((n.to_uppercase(), g));
    }
    if let Some(path) = literal {
        let v: Value = serde_json::from_str(&read(path)?).map_err(usage)?;
        list.push(("literal".into(), format::gate_from_json(&v).map_err(usage)?));
    }
    let mut all_unitary = true;
    let gates_json: Vec<Value> = list
        .iter()
        .map(|(n, g)| {
            let unitary = gates::is_unitary(g, tol.eps_unitary);
            all_unitary &= unitary;
            json!({"name": n, "arity": g.arity(), "unitary": unitary, "matrix": format::matrix_to_json(g.matrix())})
        })
        .collect();
    let cnot: Gate = named_gate("CNOT").map_err(domain)?;
    let mut table = Vec::new();
    for input in ["00", "01", "10", "11"] {
        let out = QubitRegister::from_bits(input).and_then(|r| r.apply(&cnot, &[0, 1])).map_err(domain)?;
        let (label, _) = out.state().iter().next().expect("basis maps to basis");
        table.push(json!({"in": input, "out": label.to_string()}));
    }
    let h: Gate = named_gate("H").map_err(domain)?;
    let bell = QubitRegister::zero(2).apply(&h, &[0]).and_then(|r| r.apply(&cnot, &[0, 1])).map_err(domain)?;
    let product = gates::is_product_2q(&bell, tol).map_err(domain)?;
    let report = json!({
        "gates": gates_json,
        "cnot_table": table,
        "bell": {"state": bell.state().to_json(Bits::to_string), "product": product},
    });
    Ok(Outcome { body: report_body(&report, fmt), passed: all_unitary, failure: "a gate is not unitary".into() })
}
