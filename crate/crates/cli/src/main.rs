use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use meskit::four_qubit::{convertible4, isolation4, reachable4, standard_form4};
use meskit::protocol::{monotone_audit, simulate, MonotoneReport, Protocol, SimulationReport};
use meskit::sampling::{sample, SampleClass};
use meskit::sep::{sep_check, SymmetryGroup};
use meskit::sweep::{run_sweep, SweepSpec, SweepVerb};
use meskit::synth::synthesize;
use meskit::three_qubit::{classify3, factor3, is_in_mes3, standard_form3};
use meskit::{Error, FactoredState, StateVector, Tol};

const EXIT_OK: u8 = 0;
const EXIT_NO: u8 = 2;
const EXIT_REJECTED: u8 = 3;
const EXIT_INVARIANT: u8 = 4;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Summary,
}

#[derive(Parser)]
#[command(
    name = "meskit",
    version,
    about = "LOCC transformations among 3- and 4-qubit pure states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Input file, `-` for stdin, or inline JSON.
    #[arg(short, long, global = true)]
    input: Option<String>,

    /// Write the result here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    /// RNG seed for `sample` and `sweep`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Override the equality tolerance (default 1e-9, or MESKIT_TOL_EQ).
    #[arg(long, global = true)]
    tol_eq: Option<f64>,

    /// Override the measure-zero tolerance (default 1e-7).
    #[arg(long, global = true)]
    tol_zero: Option<f64>,

    /// Number of instances for `sample` and `sweep`.
    #[arg(long, global = true, default_value_t = 100)]
    count: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// SLOCC class of a 3-qubit state vector.
    Classify3,
    /// LU standard form of a 3-qubit or generic 4-qubit state.
    StandardForm,
    /// Membership in the 3-qubit MES.
    Mes3,
    /// Membership in the 4-qubit MES.
    Mes4,
    /// Is the state reachable from an LU-inequivalent one?
    Reachable4,
    /// Can the state be converted to an LU-inequivalent one?
    Convertible4,
    /// Neither reachable nor convertible.
    Isolated4,
    /// Protocol ending in the input state.
    Synth,
    /// Simulate a protocol.
    Simulate,
    /// SEP feasibility between `source` and `target` over a symmetry group.
    SepCheck,
    /// Run a verb over sampled instances.
    Sweep {
        #[arg(long)]
        verb: String,
        #[arg(long)]
        class: String,
    },
    /// Draw random states.
    Sample {
        #[arg(long)]
        class: String,
    },
}

/// A verb's answer: JSON payload, one-line summary, exit status.
struct Answer {
    json: String,
    summary: String,
    code: u8,
}

impl Answer {
    fn new<T: Serialize>(value: &T, summary: String, yes: bool) -> Result<Self, Failure> {
        Ok(Answer {
            json: meskit::json::to_string(value)?,
            summary,
            code: if yes { EXIT_OK } else { EXIT_NO },
        })
    }
}

enum Failure {
    Rejected(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Rejected(e.to_string())
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum StateInput {
    Factored(FactoredState),
    Vector(StateVector),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GroupInput {
    Name(String),
    Custom(SymmetryGroup),
}

#[derive(Deserialize)]
struct SepInput {
    source: FactoredState,
    target: FactoredState,
    group: GroupInput,
}

fn read_input(arg: &Option<String>) -> Result<String, Failure> {
    let arg = arg
        .as_deref()
        .ok_or_else(|| Failure::Rejected("this verb needs --input".into()))?;
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    if arg == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Rejected(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(arg).map_err(|e| Failure::Rejected(format!("{arg}: {e}")))
}

fn parse<T: for<'de> Deserialize<'de>>(cli: &Cli) -> Result<T, Failure> {
    Ok(meskit::json::from_str(&read_input(&cli.input)?)?)
}

fn factored(cli: &Cli, tol: &Tol) -> Result<FactoredState, Failure> {
    match parse::<StateInput>(cli)? {
        StateInput::Factored(fs) => Ok(fs),
        StateInput::Vector(v) if v.n_parties() == 3 => Ok(factor3(&v, tol)?),
        StateInput::Vector(_) => Err(Failure::Rejected(
            "4-qubit inputs must be given in factored form".into(),
        )),
    }
}

fn vector(cli: &Cli, tol: &Tol) -> Result<StateVector, Failure> {
    match parse::<StateInput>(cli)? {
        StateInput::Factored(fs) => Ok(fs.realize(tol)?),
        StateInput::Vector(v) => Ok(v),
    }
}

#[derive(Serialize)]
struct SimulateOutput {
    simulation: SimulationReport,
    monotone: MonotoneReport,
}

fn simulate_checked(pr: &Protocol, tol: &Tol) -> Result<SimulateOutput, Failure> {
    Ok(SimulateOutput {
        simulation: simulate(pr, tol)?,
        monotone: monotone_audit(pr, tol),
    })
}

fn run(cli: &Cli, tol: &Tol) -> Result<Answer, Failure> {
    match &cli.command {
        Command::Classify3 => {
            let c = classify3(&vector(cli, tol)?, tol)?;
            Answer::new(&c, format!("{:?} (tangle {:.6})", c.class, c.tangle), true)
        }
        Command::StandardForm => {
            let fs = factored(cli, tol)?;
            if fs.n_parties() == 3 {
                let f = standard_form3(&fs, tol)?;
                Answer::new(&f, format!("{f:?}"), true)
            } else {
                let f = standard_form4(&fs, tol)?;
                let seed: Vec<String> = f
                    .seed
                    .as_array()
                    .iter()
                    .map(|z| format!("{:.6}{:+.6}i", z.re, z.im))
                    .collect();
                let blochs: Vec<String> = f
                    .blochs
                    .iter()
                    .map(|b| format!("({:.6}, {:.6}, {:.6})", b[0], b[1], b[2]))
                    .collect();
                Answer::new(
                    &f,
                    format!("seed [{}] blochs [{}]", seed.join(", "), blochs.join(", ")),
                    true,
                )
            }
        }
        Command::Mes3 => {
            let v = is_in_mes3(&factored(cli, tol)?, tol)?;
            let s = format!("in_mes={} ({})", v.in_mes, v.reason);
            Answer::new(&v, s, v.in_mes)
        }
        Command::Mes4 => {
            let v = reachable4(&factored(cli, tol)?, tol)?;
            #[derive(Serialize)]
            struct Mes4 {
                in_mes: bool,
                margin: f64,
            }
            let out = Mes4 {
                in_mes: !v.reachable,
                margin: v.margin,
            };
            Answer::new(
                &out,
                format!("in_mes={} margin={:.3e}", out.in_mes, v.margin),
                out.in_mes,
            )
        }
        Command::Reachable4 => {
            let v = reachable4(&factored(cli, tol)?, tol)?;
            let s = format!(
                "reachable={} case={:?} margin={:.3e}",
                v.reachable, v.case, v.margin
            );
            Answer::new(&v, s, v.reachable)
        }
        Command::Convertible4 => {
            let v = convertible4(&factored(cli, tol)?, tol)?;
            let s = format!(
                "convertible={} party={:?} axis={:?} margin={:.3e}",
                v.convertible, v.party, v.axis, v.margin
            );
            Answer::new(&v, s, v.convertible)
        }
        Command::Isolated4 => {
            let v = isolation4(&factored(cli, tol)?, tol)?;
            let s = format!(
                "isolated={} reachable={} convertible={}",
                v.isolated, v.reachable, v.convertible
            );
            Answer::new(&v, s, v.isolated)
        }
        Command::Synth => {
            let fs = factored(cli, tol)?;
            match synthesize(&fs, tol)? {
                None => Answer::new(
                    &Option::<Protocol>::None,
                    "no protocol reaches this state".into(),
                    false,
                ),
                Some(s) => {
                    let check = simulate_checked(&s.protocol, tol)?;
                    if !check.simulation.deterministic || !check.monotone.ok {
                        return Err(Failure::Invariant(format!(
                            "synthesized {:?} protocol failed simulation (min fidelity {:.17})",
                            s.kind, check.simulation.min_fidelity
                        )));
                    }
                    let summary = format!("{:?} protocol, {} round(s)", s.kind, s.protocol.rounds.len());
                    Answer::new(&s, summary, true)
                }
            }
        }
        Command::Simulate => {
            let pr: Protocol = parse(cli)?;
            let out = simulate_checked(&pr, tol)?;
            let yes = out.simulation.deterministic && out.monotone.ok;
            let s = format!(
                "deterministic={} branches={} min_fidelity={:.17} monotone={}",
                out.simulation.deterministic,
                out.simulation.branches.len(),
                out.simulation.min_fidelity,
                out.monotone.ok
            );
            Answer::new(&out, s, yes)
        }
        Command::SepCheck => {
            let inp: SepInput = parse(cli)?;
            let group = match inp.group {
                GroupInput::Name(n) => SymmetryGroup::by_name(&n)?,
                GroupInput::Custom(g) => SymmetryGroup::new(&g.name, g.elements, g.labels)?,
            };
            let cert = sep_check(&inp.source, &inp.target, &group, tol)?;
            let s = format!(
                "feasible={} degenerate={} residual={:.3e}",
                cert.feasible, cert.degenerate, cert.residual
            );
            Answer::new(&cert, s, cert.feasible)
        }
        Command::Sweep { verb, class } => {
            let spec = SweepSpec {
                verb: verb.parse::<SweepVerb>()?,
                class: class.parse::<SampleClass>()?,
                count: cli.count,
                seed: cli.seed,
            };
            let rep = run_sweep(&spec, tol)?;
            let hist: Vec<String> = rep.histogram.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let mut a = Answer::new(
                &rep,
                format!("{} {} x{}: {}", spec.verb, spec.class, spec.count, hist.join(" ")),
                true,
            )?;
            if rep.failure_count > 0 {
                a.code = EXIT_INVARIANT;
            }
            Ok(a)
        }
        Command::Sample { class } => {
            let states = sample(class.parse::<SampleClass>()?, cli.count, cli.seed)?;
            Answer::new(&states, format!("{} states of class {class}", states.len()), true)
        }
    }
}

fn tolerances(cli: &Cli) -> Result<Tol, Failure> {
    let mut tol = Tol::from_env();
    for (v, slot) in [(cli.tol_eq, &mut tol.eq), (cli.tol_zero, &mut tol.zero)] {
        if let Some(v) = v {
            if !(v.is_finite() && v > 0.0) {
                return Err(Failure::Rejected(format!("tolerance must be positive, got {v}")));
            }
            *slot = v;
        }
    }
    Ok(tol)
}

fn emit(cli: &Cli, text: &str) -> io::Result<()> {
    match &cli.output {
        Some(path) => fs::write(path, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors, which would read as "answered no"
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_REJECTED } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = tolerances(&cli).and_then(|tol| run(&cli, &tol));
    match result {
        Ok(a) => {
            let text = match cli.format {
                Format::Json => a.json,
                Format::Summary => format!("{}\n", a.summary),
            };
            if let Err(e) = emit(&cli, &text) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_REJECTED);
            }
            ExitCode::from(a.code)
        }
        Err(Failure::Rejected(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_REJECTED)
        }
        Err(Failure::Invariant(m)) => {
            eprintln!("internal invariant violated: {m}");
            ExitCode::from(EXIT_INVARIANT)
        }
    }
}
