//! Batch command-line front end.
//!
//! Every subcommand that takes polynomials reads them from positional
//! arguments, or one per line from `--input FILE` (`-` for stdin). Records are
//! emitted in input order whatever the worker count, and the exit status is
//! the worst status over the batch.

use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::chern::{self, coefficient_json, LineBundle};
use crate::error::{Error, Result};
use crate::git::{self, CoordinateSearch, WeightVector};
use crate::ideal::GroebnerLimits;
use crate::poly::{Form, Rational};
use crate::singularity;
use crate::stabilizer;

#[derive(Parser, Debug)]
#[command(name = "nodal", version)]
#[command(about = "Exact singularity, stability and characteristic-class computations for projective hypersurfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify each form as SMOOTH, NODAL or DEGENERATE
    Classify {
        #[command(flatten)]
        batch: BatchArgs,
        /// Also report criticality and Hessian kernel dimension at these points
        /// (comma-separated rationals; repeatable)
        #[arg(long = "point")]
        points: Vec<String>,
    },
    /// Search for a diagonal destabilizing one-parameter subgroup
    Stability {
        #[command(flatten)]
        batch: BatchArgs,
        /// `all` or `sample:N` (N random coordinate changes on top of all permutations)
        #[arg(long, default_value = "all")]
        coordinate_search: String,
        /// Seed for sampled coordinate changes
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Pushforward of the Euler class of the twisted cotangent bundle
    Chern {
        #[arg(long)]
        n: usize,
        /// Twist degree on P^n; omit together with --formal for an abstract X
        #[arg(long)]
        d: Option<i64>,
        /// Work over an abstract n-dimensional X with a formal line bundle
        #[arg(long)]
        formal: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Divisibility bound for the order of a finite stabilizer
    Bound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// A worse-than-nodal form singular at the given point
    Witness {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
        /// Comma-separated rationals; defaults to e0
        #[arg(long)]
        point: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Hilbert-Mumford weight of each form for the given weights
    Mu {
        #[command(flatten)]
        batch: BatchArgs,
        /// Comma-separated integers, sorted descending with zero sum
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
    },
}

#[derive(Args, Debug)]
pub struct BatchArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: u32,
    /// Read one form per line from FILE, or from stdin for `-`
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, default_value_t = 200_000)]
    pub max_pairs: usize,
    #[arg(long, default_value_t = 60)]
    pub max_degree: u32,
    /// Wall-clock budget per input for Groebner computations
    #[arg(long)]
    pub timeout_seconds: Option<f64>,
    /// Worker threads; output order does not depend on this
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Forms given directly on the command line
    pub forms: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

impl BatchArgs {
    fn limits(&self) -> GroebnerLimits {
        GroebnerLimits {
            max_pairs: self.max_pairs,
            max_degree: self.max_degree,
            deadline: self
                .timeout_seconds
                .map(|s| Instant::now() + Duration::from_secs_f64(s.max(0.0))),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::Precondition("--n must be at least 1".into()));
        }
        if self.d < 1 {
            return Err(Error::Precondition("--d must be at least 1".into()));
        }
        if self.jobs < 1 {
            return Err(Error::Precondition("--jobs must be at least 1".into()));
        }
        Ok(())
    }

    fn read_inputs(&self, stdin: &mut dyn BufRead) -> std::io::Result<Vec<String>> {
        let text = match &self.input {
            None => return Ok(self.forms.clone()),
            Some(path) if path.as_os_str() == "-" => {
                let mut s = String::new();
                stdin.read_to_string(&mut s)?;
                s
            }
            Some(path) => std::fs::read_to_string(path)?,
        };
        Ok(text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::to_string)
            .collect())
    }
}

/// One output record and the exit status it contributes.
struct Record {
    json: Value,
    text: String,
    status: i32,
}

impl Record {
    fn ok(json: Value, text: String) -> Self {
        Record {
            json,
            text,
            status: 0,
        }
    }

    fn failed(input: Option<&str>, e: &Error) -> Self {
        let mut json = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
        let mut text = format!("error ({}): {e}", e.kind());
        if let Some(input) = input {
            json["input"] = Value::from(input);
            text = format!("{input}\t{text}");
        }
        Record {
            json,
            text,
            status: e.exit_code(),
        }
    }
}

fn parse_rationals(text: &str) -> Result<Vec<Rational>> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<Rational>().map_err(|_| Error::Parse {
                pos: 0,
                message: format!("`{s}` is not a rational number"),
            })
        })
        .collect()
}

pub fn parse_weights(text: &str) -> Result<WeightVector> {
    let r = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| Error::InvalidWeights(format!("`{}` is not an integer", s.trim())))
        })
        .collect::<Result<Vec<i64>>>()?;
    WeightVector::new(r)
}

pub fn parse_coordinate_search(text: &str, seed: Option<u64>) -> Result<CoordinateSearch> {
    if text == "all" {
        return Ok(CoordinateSearch::AllPermutations);
    }
    let Some(count) = text.strip_prefix("sample:") else {
        return Err(Error::Precondition(format!(
            "--coordinate-search must be `all` or `sample:N`, got `{text}`"
        )));
    };
    let count = count
        .parse::<usize>()
        .map_err(|_| Error::Precondition(format!("bad sample count `{count}`")))?;
    let seed = seed.ok_or_else(|| Error::Precondition("sampling requires --seed".into()))?;
    Ok(CoordinateSearch::Sampled { count, seed })
}

fn strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(ToString::to_string).collect()
}

fn classify_one(
    input: &str,
    batch: &BatchArgs,
    points: &[Vec<Rational>],
) -> Result<Record> {
    let f = Form::parse(input, batch.n, batch.d)?;
    let report = singularity::classify_with(&f, &batch.limits())?.with_points(&f, points)?;
    let mut json = serde_json::to_value(&report).map_err(|e| Error::Internal(e.to_string()))?;
    json["input"] = Value::from(input);
    json["certificates"] =
        serde_json::to_value(&report.point_certificates).map_err(|e| Error::Internal(e.to_string()))?;
    Ok(Record::ok(json, format!("{input}\t{}", report.class)))
}

fn stability_one(input: &str, batch: &BatchArgs, search: CoordinateSearch) -> Result<Record> {
    let f = Form::parse(input, batch.n, batch.d)?;
    let outcome = git::find_diagonal_destabilizer(&f, search)?;
    let consequence = match &outcome.certificate {
        Some(cert) if batch.n >= 2 && batch.d as usize > batch.n + 1 => Some(git::verify_vanishing_consequence_with(
            &f,
            cert,
            &batch.limits(),
        )?),
        _ => None,
    };
    let json = json!({
        "input": input,
        "destabilizer": outcome.certificate,
        "searched_frames": outcome.searched_frames,
        "consequence_check": consequence,
    });
    let text = match &outcome.certificate {
        Some(c) => {
            let mut t = format!(
                "{input}\tdestabilized mu={} weights={:?} permutation={:?}",
                c.mu,
                c.weight.as_slice(),
                c.permutation
            );
            if let Some(report) = &consequence {
                t += &format!(" consequence={}", if report.passed { "pass" } else { "FAIL" });
            }
            t
        }
        None => format!(
            "{input}\tno destabilizer in {} frames",
            outcome.searched_frames
        ),
    };
    let mut record = Record::ok(json, text);
    if consequence.as_ref().is_some_and(|r| !r.passed) {
        record.status = 4;
    }
    Ok(record)
}

fn mu_one(input: &str, batch: &BatchArgs, weights: &WeightVector) -> Result<Record> {
    let f = Form::parse(input, batch.n, batch.d)?;
    let value = git::mu(&f, weights)?;
    Ok(Record::ok(
        json!({ "input": input, "mu": value }),
        value.to_string(),
    ))
}

fn run_batch<F>(
    batch: &BatchArgs,
    stdin: &mut dyn BufRead,
    out: &mut dyn Write,
    each: F,
) -> i32
where
    F: Fn(&str) -> Result<Record> + Sync,
{
    if let Err(e) = batch.validate() {
        return emit(out, batch.format, &[Record::failed(None, &e)]);
    }
    let inputs = match batch.read_inputs(stdin) {
        Ok(inputs) => inputs,
        Err(e) => {
            let e = Error::Precondition(format!("cannot read input: {e}"));
            return emit(out, batch.format, &[Record::failed(None, &e)]);
        }
    };
    let process = |input: &String| each(input).unwrap_or_else(|e| Record::failed(Some(input), &e));
    let records: Vec<Record> = match rayon::ThreadPoolBuilder::new().num_threads(batch.jobs).build() {
        Ok(pool) => pool.install(|| inputs.par_iter().map(process).collect()),
        Err(_) => inputs.iter().map(process).collect(),
    };
    emit(out, batch.format, &records)
}

fn emit(out: &mut dyn Write, format: Format, records: &[Record]) -> i32 {
    for r in records {
        let line = match format {
            Format::Json => r.json.to_string(),
            Format::Text => r.text.clone(),
        };
        if writeln!(out, "{line}").is_err() {
            return 4;
        }
    }
    records.iter().map(|r| r.status).max().unwrap_or(0)
}

fn single(out: &mut dyn Write, format: Format, result: Result<Record>) -> i32 {
    let record = result.unwrap_or_else(|e| Record::failed(None, &e));
    emit(out, format, &[record])
}

fn chern_report(n: usize, d: Option<i64>, formal: bool) -> Result<Record> {
    if n < 1 {
        return Err(Error::Precondition("--n must be at least 1".into()));
    }
    let bundle = match (d, formal) {
        (Some(d), false) => LineBundle::Degree(d),
        (None, true) => LineBundle::Formal,
        _ => {
            return Err(Error::Precondition(
                "give exactly one of --d and --formal".into(),
            ))
        }
    };
    let euler = chern::euler_class(n, bundle)?;
    let push = chern::pushforward(&euler);
    let expected = chern::closed_form_pushforward(n, bundle);
    if push != expected {
        return Err(Error::Internal(format!(
            "pushforward {push} differs from closed form {expected}"
        )));
    }
    let vanishes = push.is_zero();
    let exceptional = vanishes && bundle != LineBundle::Formal;
    let mut json = json!({
        "n": n,
        "pushforward": push.to_string(),
        "vanishes": vanishes,
        "exceptional_pair": exceptional,
        "euler_class": euler.to_string(),
    });
    match bundle {
        LineBundle::Degree(d) => {
            json["d"] = Value::from(d);
            let triples: Vec<Value> = euler
                .to_triples()?
                .iter()
                .map(|(a, k, j)| json!([coefficient_json(a), k, j]))
                .collect();
            json["euler_class_triples"] = Value::from(triples);
            json["pushforward_coefficient"] = coefficient_json(&push.hyperplane_coefficient(1));
        }
        LineBundle::Formal => json["formal"] = Value::from(true),
    }
    let mut text = push.to_string();
    if exceptional {
        text += " (exceptional pair)";
    }
    Ok(Record::ok(json, text))
}

fn bound_report(n: usize, d: u32) -> Result<Record> {
    let bound = stabilizer::order_bound(n, d)?;
    let factors: Vec<String> = stabilizer::order_bound_factors(n, d)
        .iter()
        .map(BigInt::to_string)
        .collect();
    Ok(Record::ok(
        json!({ "n": n, "d": d, "bound": bound.to_string(), "factors": factors }),
        bound.to_string(),
    ))
}

fn witness_report(n: usize, d: u32, point: Option<&str>) -> Result<Record> {
    let p = match point {
        Some(text) => parse_rationals(text)?,
        None => {
            let mut p = vec![Rational::zero(); n + 1];
            p[0] = Rational::from_integer(1.into());
            p
        }
    };
    let w = singularity::degenerate_witness(n, d, &p)?;
    let check = singularity::is_singular_at(&w, &p)?;
    Ok(Record::ok(
        json!({
            "n": n,
            "d": d,
            "point": strings(&p),
            "witness": w.to_string(),
            "critical": check.critical,
            "kernel_dim": check.kernel_dim,
        }),
        w.to_string(),
    ))
}

/// Execute a parsed command; returns the process exit status.
pub fn run(cli: &Cli, stdin: &mut dyn BufRead, out: &mut dyn Write) -> i32 {
    match &cli.command {
        Command::Classify { batch, points } => {
            let points = match points.iter().map(|p| parse_rationals(p)).collect::<Result<Vec<_>>>() {
                Ok(points) => points,
                Err(e) => return emit(out, batch.format, &[Record::failed(None, &e)]),
            };
            run_batch(batch, stdin, out, |input| classify_one(input, batch, &points))
        }
        Command::Stability {
            batch,
            coordinate_search,
            seed,
        } => {
            let search = match parse_coordinate_search(coordinate_search, *seed) {
                Ok(s) => s,
                Err(e) => return emit(out, batch.format, &[Record::failed(None, &e)]),
            };
            run_batch(batch, stdin, out, |input| stability_one(input, batch, search))
        }
        Command::Mu { batch, weights } => {
            let weights = match parse_weights(weights) {
                Ok(w) => w,
                Err(e) => return emit(out, batch.format, &[Record::failed(None, &e)]),
            };
            run_batch(batch, stdin, out, |input| mu_one(input, batch, &weights))
        }
        Command::Chern { n, d, formal, format } => single(out, *format, chern_report(*n, *d, *formal)),
        Command::Bound { n, d, format } => single(out, *format, bound_report(*n, *d)),
        Command::Witness { n, d, point, format } => {
            single(out, *format, witness_report(*n, *d, point.as_deref()))
        }
    }
}
