//! `residue-futaki`: exact residues, Futaki invariants and the weighted
//! projective plane obstruction from the command line.
//!
//! Every subcommand either takes inline flags or `--job FILE`; inline flags
//! are first turned into a job document so both routes share validation.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use residue_futaki::exprio::{parse_job, parse_job_value, JobDescription, JobKind, Payload};
use residue_futaki::futaki::{futaki_character, morita_futaki, InvariantValue};
use residue_futaki::residue::{grothendieck_residue_report, MonomialRepresentation};
use residue_futaki::wps::{chern_number_wps, futaki_wps, ke_obstruction, zeta, Verdict};
use residue_futaki::{Error, Result};
use serde_json::{json, Map, Value as Json};

const THREADS_VAR: &str = "RESIDUE_FUTAKI_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "residue-futaki",
    version,
    about = "Exact Grothendieck residues and Futaki invariants"
)]
struct Cli {
    /// Emit one JSON document (the job plus a `result` field).
    #[arg(long, global = true)]
    json: bool,
    /// Largest exponent tried in the monomial-representation search.
    #[arg(long, global = true, value_name = "N")]
    max_exponent: Option<u32>,
    /// Largest cofactor degree tried in the monomial-representation search.
    #[arg(long, global = true, value_name = "D")]
    max_rep_degree: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Residue of `h dz / (xi_1 ... xi_n)` at the origin.
    Residue(ResidueArgs),
    /// Morita-Futaki invariant (or the Futaki character) from fixed-point charts.
    Futaki(FutakiArgs),
    /// Futaki character of `xi_a` on the weighted projective plane.
    WpsFutaki(WpsFutakiArgs),
    /// Obstruction polynomial of the weighted projective plane.
    Zeta(ZetaArgs),
    /// Decide the Kähler-Einstein obstruction for numeric weights.
    KeCheck(KeCheckArgs),
    /// Characteristic number of the weighted projective plane.
    Chern(ChernArgs),
}

#[derive(Args, Debug)]
struct JobFile {
    /// Read the job from a JSON document instead of inline flags.
    #[arg(long, value_name = "FILE")]
    job: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ResidueArgs {
    #[command(flatten)]
    file: JobFile,
    /// Coordinate names, comma separated (default z1..zn).
    #[arg(long, value_delimiter = ',', conflicts_with = "job")]
    vars: Option<Vec<String>>,
    /// One component of the germ; repeat once per coordinate.
    #[arg(long = "field", allow_hyphen_values = true, conflicts_with = "job")]
    field: Vec<String>,
    /// Numerator `h`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "job")]
    numerator: Option<String>,
}

#[derive(Args, Debug)]
struct FutakiArgs {
    #[command(flatten)]
    file: JobFile,
    /// Coordinate names, comma separated (default z1..zn).
    #[arg(long, value_delimiter = ',', conflicts_with = "job")]
    vars: Option<Vec<String>>,
    /// A chart as `ORDER:F1,F2,...`; repeat once per fixed point.
    #[arg(long = "chart", allow_hyphen_values = true, conflicts_with = "job")]
    charts: Vec<String>,
    /// Invariant polynomial in c1..cn; omit for the Futaki character.
    #[arg(long, conflicts_with = "job")]
    phi: Option<String>,
}

#[derive(Args, Debug)]
struct WpsFutakiArgs {
    #[command(flatten)]
    file: JobFile,
    /// `w0,w1,w2` or `symbolic`.
    #[arg(long, conflicts_with = "job")]
    weights: Option<String>,
    /// `a0,a1,a2` or `symbolic`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "job")]
    params: Option<String>,
}

#[derive(Args, Debug)]
struct ZetaArgs {
    #[command(flatten)]
    file: JobFile,
    /// `w0,w1,w2` or `symbolic`.
    #[arg(long, conflicts_with = "job")]
    weights: Option<String>,
    /// Print only the coefficient of this monomial in a0, a1, a2.
    #[arg(long, value_name = "MONOMIAL")]
    coeff: Option<String>,
}

#[derive(Args, Debug)]
struct KeCheckArgs {
    #[command(flatten)]
    file: JobFile,
    /// `w0,w1,w2`.
    #[arg(long, conflicts_with = "job")]
    weights: Option<String>,
    /// Seed of the witness search.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct ChernArgs {
    #[command(flatten)]
    file: JobFile,
    /// `w0,w1,w2` or `symbolic`.
    #[arg(long, conflicts_with = "job")]
    weights: Option<String>,
    /// Invariant polynomial of degree 2 in c1, c2.
    #[arg(long, conflicts_with = "job")]
    phi: Option<String>,
    /// `a0,a1,a2` or `symbolic`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "job")]
    params: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn configure_threads() -> Result<()> {
    let threads = match std::env::var(THREADS_VAR) {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Usage(format!("{THREADS_VAR} must be a non-negative integer, got `{s}`")))?,
        Err(std::env::VarError::NotPresent) => 0,
        Err(e) => return Err(Error::Usage(format!("{THREADS_VAR}: {e}"))),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Usage(format!("cannot start the thread pool: {e}")))
}

fn run(cli: Cli) -> Result<String> {
    configure_threads()?;
    let mut job = load_job(&cli.command)?;
    if cli.max_exponent.is_some() {
        job.options.max_exponent = cli.max_exponent;
    }
    if cli.max_rep_degree.is_some() {
        job.options.max_rep_degree = cli.max_rep_degree;
    }
    let result = execute(&job)?;
    if cli.json {
        let mut doc = job.to_document();
        doc.as_object_mut()
            .expect("job documents are objects")
            .insert("result".into(), result.json);
        let text = serde_json::to_string_pretty(&doc).map_err(|e| Error::Integrity(e.to_string()))?;
        Ok(text + "\n")
    } else {
        Ok(result.text)
    }
}

fn kind_of(command: &Command) -> JobKind {
    match command {
        Command::Residue(_) => JobKind::Residue,
        Command::Futaki(_) => JobKind::Futaki,
        Command::WpsFutaki(_) => JobKind::WpsFutaki,
        Command::Zeta(_) => JobKind::Zeta,
        Command::KeCheck(_) => JobKind::KeCheck,
        Command::Chern(_) => JobKind::Chern,
    }
}

fn load_job(command: &Command) -> Result<JobDescription> {
    let kind = kind_of(command);
    let file = match command {
        Command::Residue(a) => &a.file,
        Command::Futaki(a) => &a.file,
        Command::WpsFutaki(a) => &a.file,
        Command::Zeta(a) => &a.file,
        Command::KeCheck(a) => &a.file,
        Command::Chern(a) => &a.file,
    };
    let mut job = match &file.job {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
            let job = parse_job(&text)?;
            if job.kind() != kind {
                return Err(Error::Usage(format!(
                    "{} holds a `{}` job, not `{kind}`",
                    path.display(),
                    job.kind()
                )));
            }
            job
        }
        None => parse_job_value(&inline_document(command)?)?,
    };
    // Flags that are not part of the payload refine a job file as well.
    match command {
        Command::Zeta(a) if a.coeff.is_some() => job.options.coeff = a.coeff.clone(),
        Command::KeCheck(a) if a.seed.is_some() => job.options.seed = a.seed,
        _ => {}
    }
    if job.options.coeff.is_some() && kind != JobKind::Zeta {
        return Err(Error::Usage("only `zeta` takes a coefficient".into()));
    }
    Ok(job)
}

fn required<'a>(value: &'a Option<String>, flag: &str) -> Result<&'a str> {
    value
        .as_deref()
        .ok_or_else(|| Error::Usage(format!("--{flag} is required (or pass --job FILE)")))
}

fn triple(text: &str, flag: &str, numbers: bool) -> Result<Json> {
    if text.trim() == "symbolic" {
        return Ok(json!("symbolic"));
    }
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if numbers {
        let parsed = parts
            .iter()
            .map(|p| p.parse::<u64>().map(Json::from))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| {
                Error::Usage(format!(
                    "--{flag} expects positive integers or `symbolic`, got `{text}`"
                ))
            })?;
        Ok(Json::Array(parsed))
    } else {
        Ok(Json::Array(parts.into_iter().map(Json::from).collect()))
    }
}

fn default_vars(vars: &Option<Vec<String>>, n: usize) -> Json {
    match vars {
        Some(v) => json!(v),
        None => json!((1..=n).map(|i| format!("z{i}")).collect::<Vec<_>>()),
    }
}

fn inline_document(command: &Command) -> Result<Json> {
    let mut doc = Map::new();
    doc.insert("kind".into(), json!(kind_of(command).as_str()));
    match command {
        Command::Residue(a) => {
            if a.field.is_empty() {
                return Err(Error::Usage("--field is required (or pass --job FILE)".into()));
            }
            doc.insert("vars".into(), default_vars(&a.vars, a.field.len()));
            doc.insert("field".into(), json!(a.field));
            doc.insert("numerator".into(), json!(required(&a.numerator, "numerator")?));
        }
        Command::Futaki(a) => {
            if a.charts.is_empty() {
                return Err(Error::Usage("--chart is required (or pass --job FILE)".into()));
            }
            let mut charts = Vec::new();
            let mut n = 0;
            for c in &a.charts {
                let (order, field) = c
                    .split_once(':')
                    .ok_or_else(|| Error::Usage(format!("--chart expects ORDER:F1,F2,..., got `{c}`")))?;
                let order: u64 = order
                    .trim()
                    .parse()
                    .map_err(|_| Error::Usage(format!("chart order `{order}` is not a positive integer")))?;
                let field: Vec<&str> = field.split(',').map(str::trim).collect();
                n = field.len();
                charts.push(json!({"order": order, "field": field}));
            }
            doc.insert("vars".into(), default_vars(&a.vars, n));
            doc.insert("charts".into(), Json::Array(charts));
            if let Some(phi) = &a.phi {
                doc.insert("phi".into(), json!(phi));
            }
        }
        Command::WpsFutaki(a) => {
            doc.insert(
                "weights".into(),
                triple(required(&a.weights, "weights")?, "weights", true)?,
            );
            doc.insert(
                "params".into(),
                triple(required(&a.params, "params")?, "params", false)?,
            );
        }
        Command::Zeta(a) => {
            doc.insert(
                "weights".into(),
                triple(required(&a.weights, "weights")?, "weights", true)?,
            );
        }
        Command::KeCheck(a) => {
            doc.insert(
                "weights".into(),
                triple(required(&a.weights, "weights")?, "weights", true)?,
            );
        }
        Command::Chern(a) => {
            doc.insert(
                "weights".into(),
                triple(required(&a.weights, "weights")?, "weights", true)?,
            );
            doc.insert(
                "params".into(),
                triple(required(&a.params, "params")?, "params", false)?,
            );
            doc.insert("phi".into(), json!(required(&a.phi, "phi")?));
        }
    }
    Ok(Json::Object(doc))
}

struct Outcome {
    text: String,
    json: Json,
}

fn execute(job: &JobDescription) -> Result<Outcome> {
    let caps = job.options.caps();
    match &job.payload {
        Payload::Residue { germ, numerator } => {
            let report = grothendieck_residue_report(germ, numerator, caps)?;
            let mut text = format!("{}\n", report.value);
            let rep_json = match &report.representation {
                Some(rep) => {
                    text += &representation_text(rep, germ.vars().names());
                    representation_json(rep)
                }
                None => Json::Null,
            };
            Ok(Outcome {
                text,
                json: json!({"value": report.value.to_string(), "representation": rep_json}),
            })
        }
        Payload::Futaki { charts, phi } => {
            let v = match phi {
                Some(phi) => morita_futaki(charts, phi, caps)?,
                None => futaki_character(charts, caps)?,
            };
            let mut text = format!("{}\n", v.value);
            for (i, c) in v.contributions.iter().enumerate() {
                text += &format!("chart {i}: {c}\n");
            }
            text += &format!("prefactor: {}\n", v.prefactor);
            Ok(Outcome {
                text,
                json: invariant_json(&v),
            })
        }
        Payload::WpsFutaki { weights, params } => {
            let v = futaki_wps(weights, params)?;
            Ok(Outcome {
                text: format!("{}\n", v.value),
                json: invariant_json(&v),
            })
        }
        Payload::Zeta { weights } => {
            let z = zeta(weights)?;
            let value = match &job.options.coeff {
                Some(m) => z.coeff_of(m)?.to_string(),
                None => z.to_string(),
            };
            let mut result = json!({"value": value, "terms": z.poly().terms().count()});
            if let Some(m) = &job.options.coeff {
                result["monomial"] = json!(m);
            }
            Ok(Outcome {
                text: format!("{value}\n"),
                json: result,
            })
        }
        Payload::KeCheck { weights } => match ke_obstruction(*weights, job.options.seed.unwrap_or(0))? {
            Verdict::Obstructed { witness, f } => {
                let a: Vec<String> = witness.iter().map(ToString::to_string).collect();
                Ok(Outcome {
                    text: format!("OBSTRUCTED\nwitness: a = ({}), f = {f}\n", a.join(", ")),
                    json: json!({"verdict": "OBSTRUCTED", "witness": a, "f": f.to_string()}),
                })
            }
            Verdict::NoObstructionFound => Ok(Outcome {
                text: "UNOBSTRUCTED\nzeta vanishes identically\n".into(),
                json: json!({"verdict": "UNOBSTRUCTED"}),
            }),
        },
        Payload::Chern { weights, params, phi } => {
            let v = chern_number_wps(weights, phi, params)?;
            Ok(Outcome {
                text: format!("{}\n", v.value),
                json: invariant_json(&v),
            })
        }
    }
}

fn invariant_json(v: &InvariantValue) -> Json {
    json!({
        "value": v.value.to_string(),
        "phi": v.phi,
        "n": v.n,
        "k": v.k,
        "prefactor": v.prefactor.to_string(),
        "contributions": v.contributions.iter().map(ToString::to_string).collect::<Vec<_>>(),
    })
}

fn representation_text(rep: &MonomialRepresentation, names: &[String]) -> String {
    let n = rep.exponents.len();
    let mut out = String::new();
    for (i, (name, unit)) in names.iter().zip(&rep.units).enumerate().take(n) {
        let lhs = if rep.is_pure() {
            format!("{name}^{}", rep.exponents[i])
        } else {
            format!("({unit})*{name}^{}", rep.exponents[i])
        };
        let rhs: Vec<String> = (0..n)
            .map(|j| format!("({})*xi{}", rep.cofactors.get(i, j), j + 1))
            .collect();
        out += &format!("{lhs} = {}\n", rhs.join(" + "));
    }
    out
}

fn representation_json(rep: &MonomialRepresentation) -> Json {
    let n = rep.exponents.len();
    let rows: Vec<Vec<String>> = (0..n)
        .map(|i| (0..n).map(|j| rep.cofactors.get(i, j).to_string()).collect())
        .collect();
    json!({
        "exponents": rep.exponents,
        "cofactors": rows,
        "units": rep.units.iter().map(ToString::to_string).collect::<Vec<_>>(),
    })
}
