//! `verify`: runs the scenario checks and prints a report.
//!
//! Exit status is 0 when every requested check passes, 1 when one fails and
//! 2 for usage or configuration errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cwsphere::caselab::{self, Report, RunConfig, ScenarioId};
use cwsphere::finsler::{quadric_fit, FitClass};
use cwsphere::numkit::RngStream;
use cwsphere::spheres::{make_model, sample_orbit, OrbitSample, SphereKind, SPHERE_TOL};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "verify", version, about = "Numerical checks for octonions, triality and homogeneous sphere orbits")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Master seed; every scenario derives its own stream from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Sample count override (orbit points or random identity inputs).
    #[arg(long, global = true)]
    samples: Option<usize>,

    /// Search budget in objective evaluations.
    #[arg(long, global = true)]
    budget: Option<usize>,

    /// Scenario parameters, e.g. `--params 1,0.5,0.25`.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    params: Option<Vec<f64>>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Record wall time per scenario (makes reports non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Octonion identity suite.
    Octonion,
    /// Triality families and companion pairs.
    Triality,
    /// Generator ranks, bracket closure, derivations and curve derivatives.
    Lie,
    /// One scenario by id.
    Case { id: String },
    /// Every scenario.
    All,
    /// List scenario ids with a one-line description.
    List,
    /// Sample an orbit of a random Lie algebra element and write it as JSON.
    Orbit {
        /// One of so, u, su, sp, spu1, spsp1, g2, spin7, spin9.
        kind: String,
        /// Size parameter for the classical kinds.
        #[arg(long)]
        m: Option<usize>,
    },
    /// Fit a quadric to an orbit sample written by `orbit`.
    Fit { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

enum Failure {
    Config(String),
    Checks,
}

impl From<cwsphere::Error> for Failure {
    fn from(e: cwsphere::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("verify: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(), Failure> {
    let ids: Vec<ScenarioId> = match &cli.command {
        Command::Octonion => vec![ScenarioId::OctonionIdentities],
        Command::Triality => vec![ScenarioId::TrialityCore],
        Command::Lie => vec![ScenarioId::LieDims],
        Command::Case { id } => vec![id.parse::<ScenarioId>()?],
        Command::All => ScenarioId::ALL.to_vec(),
        Command::List => {
            for (id, what) in caselab::MANIFEST {
                println!("{:<22} {}", id.as_str(), what);
            }
            return Ok(());
        }
        Command::Orbit { kind, m } => return orbit(cli, kind, *m),
        Command::Fit { file } => return fit(cli, file),
    };
    if let (Some(p), [id]) = (&cli.params, ids.as_slice()) {
        match id.param_arity() {
            Some(k) if k == p.len() => {}
            Some(k) => {
                return Err(Failure::Config(format!(
                    "{id} takes {k} parameters, got {}",
                    p.len()
                )))
            }
            None => return Err(Failure::Config(format!("{id} takes no parameters"))),
        }
    }
    let cfg = RunConfig {
        samples: cli.samples,
        budget: cli.budget,
        params: cli.params.clone(),
        timings: cli.timings,
    };
    let report = caselab::run_many(&ids, &cfg, cli.seed)?;
    let body = match cli.format {
        Format::Json => to_json(&report)?,
        Format::Text => report.to_text(),
    };
    emit(cli.out.as_deref(), &body)?;
    if cli.out.is_some() {
        println!("{}", summary(&report));
    }
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Failure::Config(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn emit(out: Option<&Path>, body: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, body)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn summary(report: &Report) -> String {
    let failed: Vec<&str> = report.failed().map(|s| s.scenario_id.as_str()).collect();
    let passed = report.scenarios.len() - failed.len();
    if failed.is_empty() {
        format!("{passed}/{} passed", report.scenarios.len())
    } else {
        format!("{passed}/{} passed; failed: {}", report.scenarios.len(), failed.join(", "))
    }
}

fn orbit(cli: &Cli, kind: &str, m: Option<usize>) -> Result<(), Failure> {
    let kind: SphereKind = kind.parse()?;
    let model = make_model(kind, m)?;
    let mut rng = RngStream::new(cli.seed);
    let x = model.random_element(&mut rng);
    let n = cli.samples.unwrap_or(caselab::DEFAULT_ORBIT_SAMPLES);
    let sample = sample_orbit(&model, &x, n, rng.next_u64())?;
    emit(cli.out.as_deref(), &to_json(&sample)?)?;
    if let Some(path) = &cli.out {
        println!("{} points of a {kind} orbit written to {}", n, path.display());
    }
    Ok(())
}

fn fit(cli: &Cli, file: &Path) -> Result<(), Failure> {
    let raw = fs::read_to_string(file)
        .map_err(|e| Failure::Config(format!("cannot read {}: {e}", file.display())))?;
    let sample: OrbitSample = serde_json::from_str(&raw)
        .map_err(|e| Failure::Config(format!("{}: {e}", file.display())))?;
    let dim = sample.points.first().map_or(0, Vec::len);
    if dim == 0 || sample.points.iter().any(|p| p.len() != dim) {
        return Err(Failure::Config("orbit sample has ragged or empty points".into()));
    }
    let f = quadric_fit(&sample.points)?;
    // The base point is not stored; every model used here has a unit base
    // vector, so tangency shows up as a zero coordinate shared by all points.
    let tangent = (0..dim).any(|i| {
        let mut e = vec![0.0; dim];
        e[i] = 1.0;
        sample.max_tangency_defect(&e) <= SPHERE_TOL
    });
    let body = json!({
        "kind": sample.kind,
        "seed": sample.seed,
        "points": sample.points.len(),
        "tangent": tangent,
        "classification": f.classification,
        "residual": f.residual,
        "center_norm": f.center_norm(),
        "min_eigenvalue": f.min_eigenvalue,
        "diagnostics": f.diagnostics,
    });
    let text = match cli.format {
        Format::Json => to_json(&body)?,
        Format::Text => format!(
            "{:?} fit of {} {} points: residual {:.3e}, |center| {:.3e}\n",
            f.classification,
            sample.points.len(),
            sample.kind,
            f.residual,
            f.center_norm()
        ),
    };
    emit(cli.out.as_deref(), &text)?;
    if tangent && f.classification != FitClass::Neither {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}
