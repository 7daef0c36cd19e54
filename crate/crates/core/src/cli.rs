//! Command-line front end.
//!
//! Exit codes: 0 success or plush, 2 not plush, 3 inconclusive, 1 usage,
//! parse, or library error.

use std::fs;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::calculus::{complex_hessian, derivative, full_hessian, DerivativeKind};
use crate::classify::{decide_plush_with, dump_matrix, PlushVerdict};
use crate::error::{NcError, Result};
use crate::freealg::{evaluate, MatrixTuple, NcPoly};
use crate::ldlt::ldlt_factor;
use crate::mmr::build_mmr;
use crate::numeval::SamplePolicy;

#[derive(Debug, Parser)]
#[command(
    name = "ncplush",
    version,
    about = "Noncommutative polynomial hessians and plush certificates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Polynomial in the text grammar, e.g. "x1'*x1 + 2*x2".
    #[arg(short = 'e', long = "expr", conflicts_with = "file")]
    pub expr: Option<String>,
    /// File containing the polynomial.
    #[arg(short = 'f', long = "file")]
    pub file: Option<String>,
    /// Number of variables; defaults to the largest index mentioned.
    #[arg(long)]
    pub vars: Option<usize>,
    /// Machine-readable JSON output.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct Sampling {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated matrix sizes.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// Samples per size.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Directional derivative.
    Derive {
        #[command(flatten)]
        input: Input,
        /// Differentiate in one letter only, e.g. `x2` or `x2'`.
        #[arg(long, conflicts_with = "order")]
        wrt: Option<String>,
        /// Derivative of this order along `x + t h`.
        #[arg(long)]
        order: Option<usize>,
    },
    /// Complex hessian.
    Hessian {
        #[command(flatten)]
        input: Input,
        /// Full second derivative instead of the complex hessian.
        #[arg(long)]
        full: bool,
    },
    /// Border vector and middle matrix of the hessian.
    Mmr {
        #[command(flatten)]
        input: Input,
    },
    /// LDL^T factorization of the middle matrix.
    Ldlt {
        #[command(flatten)]
        input: Input,
    },
    /// Decide plurisubharmonicity.
    Classify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Evaluate at a random matrix tuple.
    Eval {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 2)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Exit code plus the text destined for standard output and standard error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliOutput {
    fn ok(code: i32, stdout: String) -> Self {
        CliOutput {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(msg: String) -> Self {
        CliOutput {
            code: 1,
            stdout: String::new(),
            stderr: msg,
        }
    }
}

fn read_poly(input: &Input) -> Result<NcPoly> {
    let src = match (&input.expr, &input.file) {
        (Some(e), _) => e.clone(),
        (None, Some(path)) => fs::read_to_string(path).map_err(|e| NcError::Parse {
            line: 0,
            column: 0,
            message: format!("cannot read {path}: {e}"),
        })?,
        (None, None) => {
            return Err(NcError::Parse {
                line: 0,
                column: 0,
                message: "no polynomial given; use -e or -f".into(),
            })
        }
    };
    match input.vars {
        Some(g) => NcPoly::parse(&src, g),
        None => NcPoly::parse_infer(&src),
    }
}

/// Direction-free input is replaced by its complex hessian.
fn quadratic_of(p: &NcPoly) -> Result<NcPoly> {
    if p.has_directions() {
        Ok(p.clone())
    } else {
        complex_hessian(p)
    }
}

fn parse_wrt(s: &str) -> Result<DerivativeKind> {
    let (body, transposed) = match s.strip_suffix('\'') {
        Some(b) => (b, true),
        None => (s, false),
    };
    let index = body
        .strip_prefix('x')
        .and_then(|i| i.parse::<u32>().ok())
        .ok_or_else(|| NcError::Parse {
            line: 1,
            column: 1,
            message: format!("--wrt expects a letter like x1 or x1', got {s:?}"),
        })?;
    Ok(if transposed {
        DerivativeKind::WrtXT(index)
    } else {
        DerivativeKind::WrtX(index)
    })
}

fn poly_out(p: &NcPoly, json: bool) -> String {
    if json {
        format!("{}\n", json!({ "vars": p.vars(), "result": p.to_string() }))
    } else {
        format!("{p}\n")
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s
}

fn policy_for(p: &NcPoly, s: &Sampling) -> Result<SamplePolicy> {
    let mut policy = SamplePolicy::witness_search(p.degree(), s.seed);
    if let Some(sizes) = &s.sizes {
        policy.sizes = sizes.clone();
    }
    if let Some(n) = s.samples {
        policy.samples_per_size = n;
    }
    if let Some(t) = s.tol {
        policy.tol = t;
    }
    policy.validate()?;
    Ok(policy)
}

fn execute(cmd: &Command) -> Result<CliOutput> {
    match cmd {
        Command::Derive { input, wrt, order } => {
            let p = read_poly(input)?;
            let kind = match (wrt, order) {
                (Some(w), _) => parse_wrt(w)?,
                (None, Some(l)) => DerivativeKind::Order(*l),
                (None, None) => DerivativeKind::Full,
            };
            Ok(CliOutput::ok(
                0,
                poly_out(&derivative(&p, kind)?, input.json),
            ))
        }
        Command::Hessian { input, full } => {
            let p = read_poly(input)?;
            let q = if *full {
                full_hessian(&p)?
            } else {
                complex_hessian(&p)?
            };
            Ok(CliOutput::ok(0, poly_out(&q, input.json)))
        }
        Command::Mmr { input } => {
            let q = quadratic_of(&read_poly(input)?)?;
            let r = build_mmr(&q)?;
            let out = if input.json { to_json(&r) } else { r.dump() };
            Ok(CliOutput::ok(0, out))
        }
        Command::Ldlt { input } => {
            let q = quadratic_of(&read_poly(input)?)?;
            let r = build_mmr(&q)?;
            let f = ldlt_factor(&r.middle)?;
            let out = if input.json {
                to_json(&json!({ "border": r.border, "factorization": f }))
            } else {
                format!("border:\n{}{}", r.border.dump(), f.dump())
            };
            Ok(CliOutput::ok(0, out))
        }
        Command::Classify { input, sampling } => {
            let p = read_poly(input)?;
            let policy = policy_for(&p, sampling)?;
            let v = decide_plush_with(&p, &policy)?;
            let code = match v {
                PlushVerdict::Plush { .. } => 0,
                PlushVerdict::NotPlush(_) => 2,
                PlushVerdict::Inconclusive { .. } => 3,
            };
            let out = if input.json { to_json(&v) } else { v.report() };
            Ok(CliOutput::ok(code, out))
        }
        Command::Eval { input, size, seed } => {
            let p = read_poly(input)?;
            if *size == 0 {
                return Err(NcError::InvalidPolicy("size 0".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let x = MatrixTuple::random(p.vars(), *size, &mut rng);
            let h = p
                .has_directions()
                .then(|| MatrixTuple::random(p.vars(), *size, &mut rng));
            let value = evaluate(&p, &x, h.as_ref())?;
            let out = if input.json {
                to_json(&json!({ "x": x, "h": h, "value": MatrixTuple::new(vec![value])? }))
            } else {
                let mut s = String::new();
                for (name, t) in [("X", Some(&x)), ("H", h.as_ref())] {
                    let Some(t) = t else { continue };
                    for (i, m) in t.matrices().iter().enumerate() {
                        s.push_str(&format!("{name}{}:\n{}", i + 1, dump_matrix(m)));
                    }
                }
                s.push_str(&format!("value:\n{}", dump_matrix(&value)));
                s
            };
            Ok(CliOutput::ok(0, out))
        }
    }
}

/// Parse `argv` (program name first) and run the chosen subcommand.
pub fn run<I, T>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliOutput::ok(0, text),
                _ => CliOutput::fail(text),
            };
        }
    };
    match execute(&cli.command) {
        Ok(out) => out,
        Err(e) => CliOutput::fail(format!("error: {e}\n")),
    }
}
