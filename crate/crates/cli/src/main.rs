use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use g2div::cantororacle::{CantorCurve, MAX_ENUMERATION_PRIME};
use g2div::curve::{CanonicalCurve, CurveJson, MapStep};
use g2div::divisor::{DivisorJson, MumfordDivisor};
use g2div::exactfield::{FieldKind, FieldSpec, MAX_EXTENSION_DEGREE};
use g2div::grouplaw;
use g2div::torsion::{self, CoordSystem};
use g2div::Error;

#[derive(Parser)]
#[command(name = "g2div", version, about = "Genus-2 Jacobian arithmetic, torsion search and division polynomials")]
struct Cli {
    /// Output format; lists are newline-delimited JSON.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Curve models.
    #[command(subcommand)]
    Curve(CurveCmd),
    /// Jacobian arithmetic on a canonical curve.
    #[command(subcommand)]
    Jac(JacCmd),
    /// Torsion divisors.
    #[command(subcommand)]
    Torsion(TorsionCmd),
    /// Division polynomials.
    #[command(subcommand)]
    Divpoly(DivpolyCmd),
    /// The independent Cantor-algorithm implementation.
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Subcommand)]
enum CurveCmd {
    /// Bring a curve of form I, II or III to canonical form.
    Transform {
        curve: PathBuf,
        /// Move to F_{p^k} (k ≤ 4) when the sextic has no rational root.
        #[arg(long)]
        allow_extension: bool,
    },
}

#[derive(Subcommand)]
enum JacCmd {
    Add {
        d1: PathBuf,
        d2: PathBuf,
        #[arg(long)]
        curve: PathBuf,
        /// Also report which branch of the addition law was taken.
        #[arg(long)]
        trace: bool,
    },
    Double {
        d: PathBuf,
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        trace: bool,
    },
    Mul {
        #[arg(allow_negative_numbers = true)]
        n: i64,
        d: PathBuf,
        #[arg(long)]
        curve: PathBuf,
    },
    /// Evaluate J₈ and J₁₀ at a divisor.
    Verify {
        d: PathBuf,
        #[arg(long)]
        curve: PathBuf,
    },
    /// Random divisors, reproducible through --seed.
    Random {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
}

#[derive(Subcommand)]
enum TorsionCmd {
    /// All divisors of exact order n (n ∈ {2, 3, 4}) over the field of the curve.
    Find {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        curve: PathBuf,
        /// Search over F_{p^k} instead of F_p.
        #[arg(long, default_value_t = 1)]
        ext: usize,
    },
    /// Whether a divisor has exact order n.
    Check {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long)]
        curve: PathBuf,
        /// Accept any order dividing n.
        #[arg(long)]
        relaxed: bool,
    },
}

#[derive(Subcommand)]
enum DivpolyCmd {
    Emit {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum)]
        coords: Coords,
        /// Specialize λ to this curve; formal λ otherwise.
        #[arg(long)]
        curve: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Coords {
    Mumford,
    Xy,
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Every element of the Jacobian, by Cantor's algorithm.
    Enumerate {
        #[arg(long)]
        curve: PathBuf,
    },
    /// Elements of exact order n, by exhaustive enumeration.
    Torsion {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        curve: PathBuf,
    },
}

/// Why a command stopped: bad input (exit 2) or a mathematical error (exit 1).
enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = Result<Vec<Item>, Failure>;

/// One line of output.
enum Item {
    Divisor(MumfordDivisor),
    Value { json: Value, text: String },
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let raw = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&raw).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_curve(path: &Path) -> Result<CanonicalCurve, Failure> {
    Ok(read_json::<CurveJson>(path)?.to_canonical_curve()?)
}

fn load_divisor(path: &Path, c: &CanonicalCurve) -> Result<MumfordDivisor, Failure> {
    let d = MumfordDivisor::from_json(&read_json::<DivisorJson>(path)?, c.field())?;
    if !d.is_valid(c) {
        return Err(Error::ConditionViolated(format!("{} is not a divisor on the curve", path.display())).into());
    }
    Ok(d)
}

fn step_json(s: &MapStep) -> Value {
    match s {
        MapStep::YShift(q) => json!({"step": "yshift", "q": q.to_string()}),
        MapStep::Mobius { e0, c, d } => {
            json!({"step": "mobius", "e0": e0.to_string(), "c": c.to_string(), "d": d.to_string()})
        }
        MapStep::Scale(s) => json!({"step": "scale", "s": s.to_string()}),
    }
}

fn traced(d: MumfordDivisor, branch: grouplaw::Branch, trace: bool) -> Item {
    if !trace {
        return Item::Divisor(d);
    }
    let b = format!("{branch:?}");
    Item::Value {
        json: json!({"result": d.to_json(), "branch": b}),
        text: format!("{d}  ({b})"),
    }
}

fn extend(c: &CanonicalCurve, k: usize) -> Result<CanonicalCurve, Failure> {
    if k == 1 {
        return Ok(c.clone());
    }
    let FieldKind::Prime { p } = *c.field().kind() else {
        return Err(Failure::Usage("--ext needs a curve over a prime field".into()));
    };
    if !(1..=MAX_EXTENSION_DEGREE).contains(&k) {
        return Err(Failure::Usage(format!("--ext must be between 1 and {MAX_EXTENSION_DEGREE}")));
    }
    let target = FieldSpec::galois(p, k)?;
    Ok(c.base_change(&target, |v| target.from_coeffs(&v.coordinates()))?)
}

fn oracle_for(c: &CanonicalCurve) -> Result<CantorCurve, Failure> {
    match c.field().kind() {
        FieldKind::Prime { p } if *p <= MAX_ENUMERATION_PRIME => Ok(CantorCurve::from_canonical(c)?),
        _ => Err(Error::Unsupported(format!(
            "the oracle enumerates Jacobians over F_p with p ≤ {MAX_ENUMERATION_PRIME}"
        ))
        .into()),
    }
}

fn sorted_mumford(o: &CantorCurve, v: &[g2div::cantororacle::CantorDivisor]) -> Vec<Item> {
    let mut out: Vec<MumfordDivisor> = v.iter().map(|d| o.to_mumford(d)).collect();
    out.sort();
    out.into_iter().map(Item::Divisor).collect()
}

fn run(cli: &Cli) -> Outcome {
    match &cli.cmd {
        Cmd::Curve(CurveCmd::Transform { curve, allow_extension }) => {
            let g = read_json::<CurveJson>(curve)?.to_general()?;
            let (c, map) = if *allow_extension {
                g.to_canonical_allowing_extension()?
            } else {
                g.to_canonical()?
            };
            let steps: Vec<Value> = map.steps().iter().map(step_json).collect();
            let text = format!("{}\nmap: {}", serde_json::to_string(&c.to_json()).unwrap(), steps.len());
            Ok(vec![Item::Value {
                json: json!({"curve": c.to_json(), "map": steps}),
                text,
            }])
        }
        Cmd::Jac(JacCmd::Add { d1, d2, curve, trace }) => {
            let c = load_curve(curve)?;
            let (a, b) = (load_divisor(d1, &c)?, load_divisor(d2, &c)?);
            let (s, br) = grouplaw::add_traced(&a, &b, &c)?;
            Ok(vec![traced(s, br, *trace)])
        }
        Cmd::Jac(JacCmd::Double { d, curve, trace }) => {
            let c = load_curve(curve)?;
            let (s, br) = grouplaw::double_traced(&load_divisor(d, &c)?, &c)?;
            Ok(vec![traced(s, br, *trace)])
        }
        Cmd::Jac(JacCmd::Mul { n, d, curve }) => {
            let c = load_curve(curve)?;
            Ok(vec![Item::Divisor(grouplaw::scalar_mul(*n, &load_divisor(d, &c)?, &c)?)])
        }
        Cmd::Jac(JacCmd::Verify { d, curve }) => {
            let c = load_curve(curve)?;
            let d = MumfordDivisor::from_json(&read_json::<DivisorJson>(d)?, c.field())?;
            let (j8, j10) = match &d {
                MumfordDivisor::NonSpecial { .. } => d.jacobian_residuals(&c)?,
                _ if d.is_valid(&c) => (c.field().zero(), c.field().zero()),
                _ => return Err(Error::OffCurve.into()),
            };
            if !(j8.is_zero() && j10.is_zero()) {
                return Err(Error::ConditionViolated(format!("J8 = {j8}, J10 = {j10}")).into());
            }
            Ok(vec![Item::Value {
                json: json!({"J8": j8.to_string(), "J10": j10.to_string()}),
                text: format!("J8 = {j8}, J10 = {j10}"),
            }])
        }
        Cmd::Jac(JacCmd::Random { curve, count }) => {
            let c = load_curve(curve)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let mut out = Vec::with_capacity(*count);
            while out.len() < *count {
                let p = c.random_point(&mut rng).ok_or(Error::OffCurve)?;
                let q = c.random_point(&mut rng).ok_or(Error::OffCurve)?;
                if let Ok(d) = MumfordDivisor::from_points(&c, &p, &q) {
                    out.push(Item::Divisor(d));
                }
            }
            Ok(out)
        }
        Cmd::Torsion(TorsionCmd::Find { n, curve, ext }) => {
            let c = extend(&load_curve(curve)?, *ext)?;
            Ok(torsion::find_torsion(&c, *n)?.into_iter().map(Item::Divisor).collect())
        }
        Cmd::Torsion(TorsionCmd::Check { n, divisor, curve, relaxed }) => {
            let c = load_curve(curve)?;
            let d = load_divisor(divisor, &c)?;
            if *n < 2 {
                return Err(Failure::Usage("--n must be at least 2".into()));
            }
            let ok = if *relaxed {
                torsion::order_divides(&d, *n, &c)?
            } else {
                torsion::is_torsion(&d, *n, &c)?
            };
            Ok(vec![Item::Value {
                json: json!({"n": n, "relaxed": relaxed, "torsion": ok}),
                text: ok.to_string(),
            }])
        }
        Cmd::Divpoly(DivpolyCmd::Emit { n, coords, curve }) => {
            let c = curve.as_deref().map(load_curve).transpose()?;
            let coords = match coords {
                Coords::Mumford => CoordSystem::Mumford,
                Coords::Xy => CoordSystem::Xy,
            };
            let set = torsion::emit_division_polynomials(*n, coords, c.as_ref())?;
            Ok(set
                .to_json()
                .into_iter()
                .zip(&set.names)
                .zip(&set.polys)
                .map(|((j, name), p)| Item::Value {
                    json: serde_json::to_value(j).unwrap(),
                    text: match p.weighted_degree().filter(|_| p.is_homogeneous()) {
                        Some(w) => format!("{name} (weight {w}) = {p}"),
                        None => format!("{name} = {p}"),
                    },
                })
                .collect())
        }
        Cmd::Oracle(OracleCmd::Enumerate { curve }) => {
            let c = load_curve(curve)?;
            let o = oracle_for(&c)?;
            Ok(sorted_mumford(&o, &o.enumerate()?))
        }
        Cmd::Oracle(OracleCmd::Torsion { n, curve }) => {
            let c = load_curve(curve)?;
            let o = oracle_for(&c)?;
            if *n < 1 {
                return Err(Failure::Usage("--n must be positive".into()));
            }
            Ok(sorted_mumford(&o, &o.brute_force_n_torsion(*n)?))
        }
    }
}

/// The variant name of an error, used as its machine-readable kind.
fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

fn configure_threads() {
    if let Some(n) = std::env::var("G2DIV_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a pool already built by a caller is fine to keep
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match run(&cli) {
        Ok(items) => {
            for item in items {
                match (item, cli.format) {
                    (Item::Divisor(d), Format::Json) => println!("{}", serde_json::to_string(&d.to_json()).unwrap()),
                    (Item::Divisor(d), Format::Text) => println!("{d}"),
                    (Item::Value { json, .. }, Format::Json) => println!("{json}"),
                    (Item::Value { text, .. }, Format::Text) => println!("{text}"),
                }
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(e)) => {
            eprintln!("{}", json!({"error": error_kind(&e), "message": e.to_string()}));
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("{}", json!({"error": "Usage", "message": msg}));
            ExitCode::from(2)
        }
    }
}
