//! `linegeo`: JSON on stdin, JSON on stdout.

use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use linegeo::check::{run_suite, Suite};
use linegeo::linalg::{Mat4, Mat6, Vec3};
use linegeo::plucker::{self, Null3Kind, Trivector33};
use linegeo::screw::{self, Algebra, Screw, Wrench};
use linegeo::versor::{self, RigidForm, RigidMotion};

/// Tolerance for rank and proportionality tests when neither `--tol` nor
/// `GA_TOL` is given.
const DEFAULT_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "linegeo", version, about = "Line geometry in Cl(3,3): JSON in, JSON out")]
struct Cli {
    /// Numerical tolerance; for `check` it replaces every property tolerance.
    #[arg(long, global = true, env = "GA_TOL")]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a trivector (blade-label map) is a point or a plane.
    Classify,
    /// Lift a 4x4 matrix to its 6x6 action on lines.
    Lift {
        /// Lift as a polarity (points to planes).
        #[arg(long)]
        dual: bool,
    },
    /// Recover the 4x4 matrix and branch of a 6x6 regularity.
    Drop,
    /// Build the versor of a rigid motion `{"R": .., "t": .., "v1"?: ..}`.
    Motor {
        #[arg(long, value_enum, default_value_t = MotorForm::Factored)]
        form: MotorForm,
        /// Which pair of moments to use for the factored form.
        #[arg(long, value_enum, default_value_t = Fact::One)]
        fact: Fact,
    },
    /// Cross product of two screws `[a, b]`, each `{"v", "t"}` or `[v, t]`.
    Cross {
        #[arg(long, default_value = "se3")]
        algebra: Algebra,
    },
    /// Virtual work of `{"motion": {"v", "t"}, "wrench": {"f", "q"}}`.
    Vwork {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        lambda: f64,
    },
    /// Run a seeded property suite; exits 1 if any property fails.
    Check {
        #[arg(default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MotorForm {
    Factored,
    Bivector,
    Matrix,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fact {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
}

#[derive(Deserialize)]
struct MotorInput {
    #[serde(flatten)]
    motion: RigidMotion,
    v1: Option<Vec3>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScrewInput {
    Pair([Vec3; 2]),
    Fields { v: Vec3, t: Vec3 },
}

impl ScrewInput {
    fn into_screw(self, a: Algebra) -> Screw {
        match self {
            ScrewInput::Pair([v, t]) | ScrewInput::Fields { v, t } => Screw::new(a, v, t),
        }
    }
}

#[derive(Deserialize)]
struct VworkInput {
    motion: ScrewInput,
    wrench: Wrench,
}

enum Failure {
    /// Bad payload or a domain error: exit 2.
    Input { kind: String, message: String },
    /// A property suite failed: exit 1, report on stdout.
    Property(Value),
}

impl From<linegeo::Error> for Failure {
    fn from(e: linegeo::Error) -> Self {
        let dbg = format!("{e:?}");
        let kind = dbg.split(['(', ' ']).next().unwrap_or("Error").to_owned();
        Failure::Input { kind, message: e.to_string() }
    }
}

fn input_error(kind: &str, message: impl ToString) -> Failure {
    Failure::Input { kind: kind.to_owned(), message: message.to_string() }
}

fn read_json<T: DeserializeOwned>() -> Result<T, Failure> {
    let mut buf = String::new();
    io::stdin().read_to_string(&mut buf).map_err(|e| input_error("Io", e))?;
    serde_json::from_str(&buf).map_err(|e| input_error("BadJson", e))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

fn rows<const R: usize, const C: usize>(m: &nalgebra::SMatrix<f64, R, C>) -> Vec<Vec<f64>> {
    (0..R).map(|i| (0..C).map(|k| m[(i, k)]).collect()).collect()
}

fn matrix<const N: usize>(rows: Vec<Vec<f64>>) -> Result<nalgebra::SMatrix<f64, N, N>, Failure> {
    if rows.len() != N || rows.iter().any(|r| r.len() != N) {
        return Err(input_error("BadShape", format!("expected a {N}x{N} row-major matrix")));
    }
    Ok(nalgebra::SMatrix::from_fn(|i, k| rows[i][k]))
}

fn run(cli: Cli) -> Result<Value, Failure> {
    let tol = cli.tol.unwrap_or(DEFAULT_TOL);
    match cli.command {
        Command::Classify => {
            let t: Trivector33 = read_json()?;
            let kind = plucker::classify_null3_tol(&t, tol)?;
            let coords = match kind {
                Null3Kind::Point => to_value(&plucker::recover_point_tol(&t, tol)?),
                Null3Kind::Plane => to_value(&plucker::recover_plane_tol(&t, tol)?),
            };
            Ok(json!({ "kind": to_value(&kind), "coords": coords }))
        }
        Command::Lift { dual } => {
            let a: Mat4 = matrix(read_json()?)?;
            let b = if dual { plucker::dual_lift2(&a)? } else { plucker::lift2(&a)? };
            Ok(to_value(&rows(&b)))
        }
        Command::Drop => {
            let b: Mat6 = matrix(read_json()?)?;
            let r = plucker::recover_mat4_tol(&b, tol)?;
            Ok(json!({ "matrix": rows(&r.matrix), "branch": to_value(&r.branch) }))
        }
        Command::Motor { form, fact } => {
            let input: MotorInput = read_json()?;
            let rigid = match fact {
                Fact::One => RigidForm::Fact1,
                Fact::Two => RigidForm::Fact2,
            };
            match form {
                MotorForm::Bivector => Ok(to_value(&screw::se3_bivector(&input.motion))),
                MotorForm::Factored => {
                    Ok(to_value(&versor::make_rigid_versor(&input.motion, rigid, input.v1)?))
                }
                MotorForm::Matrix => {
                    let u = versor::make_rigid_versor(&input.motion, rigid, input.v1)?;
                    Ok(to_value(&rows(&u.to_mat4().matrix)))
                }
            }
        }
        Command::Cross { algebra } => {
            let [a, b]: [ScrewInput; 2] = read_json()?;
            let c = screw::algebra_cross(algebra, &a.into_screw(algebra), &b.into_screw(algebra))?;
            Ok(to_value(&c))
        }
        Command::Vwork { lambda } => {
            let input: VworkInput = read_json()?;
            let m = input.motion.into_screw(Algebra::Se3);
            Ok(json!({ "lambda": lambda, "work": screw::virtual_work(&m, &input.wrench, lambda) }))
        }
        Command::Check { suite, seed } => {
            let report = run_suite(suite, seed, cli.tol);
            let v = to_value(&report);
            if report.passed {
                Ok(v)
            } else {
                Err(Failure::Property(v))
            }
        }
    }
}

fn emit(v: &Value) {
    let mut out = io::stdout().lock();
    // Value keeps object keys in a BTreeMap, so output order is stable.
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(v) => {
            emit(&v);
            ExitCode::SUCCESS
        }
        Err(Failure::Property(v)) => {
            emit(&v);
            ExitCode::from(1)
        }
        Err(Failure::Input { kind, message }) => {
            emit(&json!({ "error": { "kind": kind, "message": message } }));
            ExitCode::from(2)
        }
    }
}
