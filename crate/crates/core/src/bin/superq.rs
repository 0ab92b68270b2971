use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use superq::entangle::{self, Supertangle, TableKind, TwoPartyTable};
use superq::groups::{self, Group};
use superq::io::{self, MeasureReport};
use superq::sdtr::{self, Arrangement};
use superq::{superstate, verify, Error, Parity, SuperMatrix, SuperKet};

const CONFIG_FILE: &str = "superq.conf";

#[derive(Parser, Debug)]
#[command(name = "superq", version, about = "Grassmann, supermatrix and superqubit computations")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,

    /// Numeric tolerance for predicates.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,

    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    #[arg(long, global = true, default_value_t = 500)]
    iters: usize,

    /// Write the computed value (in its file format) to this path.
    #[arg(short = 'o', global = true)]
    output: Option<PathBuf>,

    /// Accept states that are not normalized within 1e-9.
    #[arg(long = "force-unnormalized", global = true)]
    force_unnormalized: bool,

    /// Calibration config path. Defaults to $SUPERQ_CONFIG, then a file next
    /// to the binary.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Berezinian of a degree-0 matrix.
    Ber { matrix: PathBuf },
    /// Super-determinant-like trace of a degree-0 (2|1) matrix, using the pinned arrangement.
    Sdtr { matrix: PathBuf },
    /// Supertrace.
    Str { matrix: PathBuf },
    /// Supertranspose.
    Stranspose { matrix: PathBuf },
    /// Inner product of two states.
    Inner { phi: PathBuf, psi: PathBuf },
    /// Density matrix of a state.
    Outer { psi: PathBuf },
    /// Graded tensor product of two states.
    Tensor { a: PathBuf, b: PathBuf },
    /// Cross product of two qutrits.
    Cross { a: PathBuf, b: PathBuf },
    Concurrence { table: PathBuf },
    Superconcurrence { table: PathBuf },
    /// Tangle for qubit tables, supertangle for super tables.
    Tangle { table: PathBuf },
    Separable { table: PathBuf },
    GroupCheck {
        matrix: PathBuf,
        #[arg(long)]
        group: String,
    },
    /// Run every identity suite.
    Verify {
        /// Only suites whose name contains this text.
        #[arg(long)]
        filter: Option<String>,
    },
    /// Pick the sdTr arrangement and write it to the config file.
    CalibrateSdtr {
        /// Generator count of the sample algebra.
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
}

enum Failure {
    Io(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

struct Done {
    summary: String,
    report: serde_json::Value,
    /// Canonical text written by `-o`.
    artifact: Option<String>,
    ok: bool,
}

fn read(path: &Path) -> Outcome<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load<T: for<'de> serde::Deserialize<'de>>(path: &Path) -> Outcome<T> {
    io::parse(&read(path)?).map_err(|e| match e {
        Error::Parse(msg) => Failure::Lib(Error::Parse(format!("{}: {msg}", path.display()))),
        other => Failure::Lib(other),
    })
}

fn load_matrix(path: &Path) -> Outcome<SuperMatrix> {
    Ok(io::matrix_from_file(&load(path)?)?)
}

fn load_state(path: &Path) -> Outcome<SuperKet> {
    Ok(io::state_from_file(&load(path)?)?)
}

/// A table file, or a two-party multistate file as written by `tensor`.
fn load_table(path: &Path, force: bool) -> Outcome<TwoPartyTable> {
    let value: serde_json::Value = load(path)?;
    let parsed = |e: serde_json::Error| Failure::Lib(Error::Parse(format!("{}: {e}", path.display())));
    if value.get("parties").is_some() {
        let file = serde_json::from_value(value).map_err(parsed)?;
        Ok(TwoPartyTable::from_multistate(&io::multistate_from_file(&file, force)?)?)
    } else {
        Ok(io::table_from_file(&serde_json::from_value(value).map_err(parsed)?)?)
    }
}

fn config_path(cli: &Cli) -> PathBuf {
    if let Some(p) = &cli.config {
        return p.clone();
    }
    if let Some(p) = std::env::var_os("SUPERQ_CONFIG") {
        return PathBuf::from(p);
    }
    std::env::current_exe()
        .ok()
        .and_then(|e| e.parent().map(|d| d.join(CONFIG_FILE)))
        .unwrap_or_else(|| PathBuf::from(CONFIG_FILE))
}

/// Pinned arrangement and where it came from.
fn pinned_arrangement(cli: &Cli) -> Outcome<(Arrangement, String)> {
    let path = config_path(cli);
    match std::fs::read_to_string(&path) {
        Ok(text) => Ok((sdtr::arrangement_from_config(&text)?, path.display().to_string())),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            Ok((sdtr::DEFAULT_ARRANGEMENT, "built-in default".to_string()))
        }
        Err(e) => Err(Failure::Io(format!("{}: {e}", path.display()))),
    }
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("plain data serializes")
}

fn report(measure: &str, value: serde_json::Value, parity: Option<Parity>, calibration: Option<String>) -> serde_json::Value {
    to_value(&MeasureReport {
        measure: measure.to_string(),
        value,
        parity: parity.map(|p| p.bit().to_string()),
        calibration,
    })
}

fn element_done(measure: &str, e: &superq::GrassmannElement, calibration: Option<String>) -> Done {
    let file = io::element_to_file(e);
    Done {
        summary: format!("{measure} = {e}"),
        report: report(measure, to_value(&file), e.parity().ok(), calibration),
        artifact: Some(io::to_canonical(&file)),
        ok: true,
    }
}

fn matrix_done(measure: &str, m: &SuperMatrix) -> Done {
    let file = io::matrix_to_file(m);
    Done {
        summary: format!("{measure}: {} matrix of degree {} over N = {}", m.format(), m.parity().bit(), m.n()),
        report: report(measure, to_value(&file), Some(m.parity()), None),
        artifact: Some(io::to_canonical(&file)),
        ok: true,
    }
}

fn real_done(measure: &str, x: f64, parity: Option<Parity>) -> Done {
    Done {
        summary: format!("{measure} = {x}"),
        report: report(measure, json!(x), parity, None),
        artifact: None,
        ok: true,
    }
}

fn super_parity(t: &TwoPartyTable) -> Outcome<Parity> {
    match t.kind() {
        TableKind::Qubit => Err(Failure::Lib(Error::FormatMismatch(
            "super measures need a super-even or super-odd table, got a qubit table".into(),
        ))),
        k => Ok(k.parity()),
    }
}

fn execute(cli: &Cli) -> Outcome<Done> {
    let force = cli.force_unnormalized;
    Ok(match &cli.verb {
        Verb::Ber { matrix } => element_done("ber", &load_matrix(matrix)?.berezinian()?, None),
        Verb::Sdtr { matrix } => {
            let (arrangement, source) = pinned_arrangement(cli)?;
            let value = sdtr::sdtr(&load_matrix(matrix)?, arrangement)?;
            element_done("sdtr", &value, Some(format!("{} ({source})", arrangement.id())))
        }
        Verb::Str { matrix } => element_done("str", &load_matrix(matrix)?.supertrace()?, None),
        Verb::Stranspose { matrix } => matrix_done("stranspose", &load_matrix(matrix)?.supertranspose()?),
        Verb::Inner { phi, psi } => {
            let value = superstate::inner(&load_state(phi)?, &load_state(psi)?)?;
            element_done("inner", &value, None)
        }
        Verb::Outer { psi } => matrix_done("outer", &superstate::outer(&load_state(psi)?)?),
        Verb::Tensor { a, b } => {
            let state = entangle::tensor_states(&load_state(a)?, &load_state(b)?)?;
            let file = io::multistate_to_file(&state);
            let (even, odd) = state.slot_counts();
            Done {
                summary: format!("tensor: parity {} state with {even} even and {odd} odd slots", state.parity().bit()),
                report: report("tensor", to_value(&file), Some(state.parity()), None),
                artifact: Some(io::to_canonical(&file)),
                ok: true,
            }
        }
        Verb::Cross { a, b } => {
            let a = io::qudit_from_file(&load(a)?, force)?;
            let b = io::qudit_from_file(&load(b)?, force)?;
            let c = entangle::cross_qutrit(&a, &b)?;
            let file = io::qudit_to_file(&c.amps);
            Done {
                summary: format!("cross: |a x b|^2 = {}", c.norm_sqr),
                report: report("cross", json!({ "amps": to_value(&file.amps), "norm_sqr": c.norm_sqr }), None, None),
                artifact: Some(io::to_canonical(&file)),
                ok: true,
            }
        }
        Verb::Concurrence { table } => real_done("concurrence", entangle::concurrence(&load_table(table, force)?, force)?, None),
        Verb::Superconcurrence { table } => {
            let t = load_table(table, force)?;
            let parity = super_parity(&t)?;
            real_done("superconcurrence", entangle::superconcurrence(&t, parity)?, Some(parity))
        }
        Verb::Tangle { table } => {
            let t = load_table(table, force)?;
            if t.kind() == TableKind::Qubit {
                real_done("tangle", entangle::tangle(&t, force)?, None)
            } else {
                let parity = super_parity(&t)?;
                match entangle::supertangle(&t, parity)? {
                    Supertangle::Value(v) => {
                        let mut done = element_done("supertangle", &v, None);
                        done.report = report("supertangle", to_value(&io::element_to_file(&v)), Some(parity), None);
                        done
                    }
                    Supertangle::ImplicitOnly { factor, rhs, solvable } => Done {
                        summary: format!("supertangle: implicit only, tau * ({factor}) = {rhs}, solvable = {solvable}"),
                        report: report(
                            "supertangle",
                            json!({
                                "implicit_only": true,
                                "factor": to_value(&io::element_to_file(&factor)),
                                "rhs": to_value(&io::element_to_file(&rhs)),
                                "solvable": solvable,
                            }),
                            Some(parity),
                            None,
                        ),
                        artifact: None,
                        ok: true,
                    },
                }
            }
        }
        Verb::Separable { table } => {
            let s = entangle::is_separable(&load_table(table, force)?, cli.tol)?;
            let verdict = match s.verdict {
                entangle::Verdict::RankOne => "rank-one",
                entangle::Verdict::NecessaryConditions => "necessary-conditions",
            };
            Done {
                summary: format!("separable = {} ({verdict})", s.separable),
                report: report("separable", json!({ "separable": s.separable, "verdict": verdict }), None, None),
                artifact: None,
                ok: true,
            }
        }
        Verb::GroupCheck { matrix, group } => {
            let group: Group = group.parse()?;
            let check = groups::group_check(&load_matrix(matrix)?, group, cli.tol)?;
            Done {
                summary: format!("{group}: member = {} (residual {:e})", check.member, check.residual),
                report: report(
                    "group-check",
                    json!({ "group": group.id(), "member": check.member, "residual": check.residual }),
                    None,
                    None,
                ),
                artifact: None,
                ok: true,
            }
        }
        Verb::Verify { filter } => {
            let r = verify::run(cli.seed, cli.iters, filter.as_deref());
            let failed = r.suites.iter().filter(|s| s.gate && !s.passed).count();
            out(&r.lines());
            Done {
                summary: format!(
                    "verify: {} suites, {failed} failed (seed {}, iters {})",
                    r.suites.len(),
                    r.seed,
                    r.iters
                ),
                report: report("verify", to_value(&r), None, None),
                artifact: None,
                ok: r.passed,
            }
        }
        Verb::CalibrateSdtr { n } => {
            let cal = sdtr::calibrate(cli.seed, cli.tol, *n)?;
            let path = config_path(cli);
            let text = cal.to_config();
            std::fs::write(&path, &text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            out(&sdtr::evidence_table(&cal.evidence));
            let class: Vec<&str> = cal.class.iter().map(|a| a.id()).collect();
            Done {
                summary: format!("calibrate-sdtr: pinned {} (class {}) -> {}", cal.pinned.id(), class.join(","), path.display()),
                report: report(
                    "calibrate-sdtr",
                    json!({ "pinned": cal.pinned.id(), "class": class, "seed": cal.seed, "tol": cal.tol }),
                    None,
                    Some(path.display().to_string()),
                ),
                artifact: Some(text),
                ok: true,
            }
        }
    })
}

/// Stdout may be a closed pipe; that is not an error of the command.
fn out(text: &str) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(done) => {
            if let (Some(path), Some(text)) = (&cli.output, &done.artifact) {
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("error[io]: {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            out(&format!("{}\n{}", done.summary, io::to_canonical(&done.report)));
            if done.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error[io]: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error[{}]: {e}", e.name());
            if e.is_domain() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
