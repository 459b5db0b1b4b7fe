//! Command-line front end: verification suites, value tables, Fourier
//! coefficients and form listings.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hypmaass::lift::fourier_coefficient;
use hypmaass::qforms::enumerate_bounded;
use hypmaass::report::to_json;
use hypmaass::series::{hyperbolic_sums, Target};
use hypmaass::theta::{KernelCoefficients, KernelKind, SquarePolicy};
use hypmaass::verify::{run_suite, Suite, SuiteConfig};
use hypmaass::{Error, SeriesParams, UpperHalfPoint, C64};

#[derive(Parser)]
#[command(
    name = "hypmaass",
    version,
    about = "Hyperbolic Poincaré series, their weak Maass companions and theta kernels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write its reports as a JSON array.
    ///
    /// Suites: lemma22, theorem1, theorem2, theorem3, vigneras, akn, all.
    /// Exit status is 0 if every check passed, 1 if any failed, 2 on a usage
    /// error.
    Verify {
        #[arg(long)]
        suite: String,
        /// Weight parameter k (even, > 2); replaces the default parameter sets.
        #[arg(long)]
        k: Option<i64>,
        /// Discriminant D; replaces the default parameter sets.
        #[arg(long = "D", visible_alias = "d")]
        d: Option<i64>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output path for the JSON reports (standard output if omitted).
        #[arg(long)]
        json: Option<PathBuf>,
        /// Tolerance override PREFIX=VALUE for checks whose name starts with PREFIX.
        #[arg(long = "tol", value_name = "PREFIX=VALUE")]
        tol: Vec<String>,
    },
    /// Tabulate a function over a grid of points.
    ///
    /// CSV columns: x,y,re,im,tail_bound. For `lambda` and `omega-kernel` the
    /// grid is in the theta variable tau and --z fixes the other variable.
    Eval {
        #[arg(long, value_enum)]
        function: EvalFunction,
        #[arg(long)]
        k: i64,
        #[arg(long = "D", visible_alias = "d")]
        d: Option<i64>,
        /// x range as START:END:COUNT.
        #[arg(long, default_value = "0:0:1")]
        x: String,
        /// y range as START:END:COUNT.
        #[arg(long, default_value = "1:1:1")]
        y: String,
        /// Second variable for the kernels, as x,y or x+yi.
        #[arg(long, default_value = "i")]
        z: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Largest discriminant in the kernel sums.
        #[arg(long, default_value_t = 40)]
        d_max: i64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Tabulate Fourier coefficients c(n) extracted at height y.
    ///
    /// CSV columns: n,re,im,ratio_re,ratio_im,aliasing where ratio is c(n)/c(1).
    Fourier {
        #[arg(long, value_enum)]
        function: FourierFunction,
        #[arg(long)]
        k: i64,
        #[arg(long = "D", visible_alias = "d")]
        d: i64,
        /// Index range START..END (inclusive).
        #[arg(long, default_value = "1..5")]
        n: String,
        #[arg(long, default_value_t = 1.0)]
        y: f64,
        #[arg(long, default_value_t = 32)]
        nodes: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// List the forms of discriminant D with |Q(z,1)| <= radius.
    ///
    /// CSV columns: a,b,c,re(Q),im(Q),Qz.
    Qforms {
        #[arg(long = "D", visible_alias = "d")]
        d: i64,
        #[arg(long)]
        z: String,
        #[arg(long)]
        radius: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalFunction {
    F,
    Omega,
    Holomorphic,
    Lambda,
    OmegaKernel,
}

#[derive(Clone, Copy, ValueEnum)]
enum FourierFunction {
    F,
    Holomorphic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Usage errors exit with 2, numerical failures with 1.
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotDiscriminant(_)
            | Error::SquareDiscriminant(_)
            | Error::InvalidWeight(_)
            | Error::InvalidParameter(_)
            | Error::NotInUpperHalfPlane { .. } => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn parse_point(s: &str) -> Result<UpperHalfPoint, Failure> {
    let s = s.trim();
    let z = if let Some((x, y)) = s.split_once(',') {
        let x: f64 = x.trim().parse().map_err(|_| usage(format!("bad point '{s}'")))?;
        let y: f64 = y.trim().parse().map_err(|_| usage(format!("bad point '{s}'")))?;
        C64::new(x, y)
    } else {
        C64::from_str(s).map_err(|_| usage(format!("bad point '{s}' (use x,y or x+yi)")))?
    };
    Ok(UpperHalfPoint::from_complex(z)?)
}

fn parse_range(s: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || usage(format!("bad range '{s}' (use START:END:COUNT)"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].parse().map_err(|_| bad())?;
    let b: f64 = parts[1].parse().map_err(|_| bad())?;
    let n: usize = parts[2].parse().map_err(|_| bad())?;
    if n == 0 {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
}

fn parse_index_range(s: &str) -> Result<(i64, i64), Failure> {
    let bad = || usage(format!("bad index range '{s}' (use START..END)"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: i64 = a.parse().map_err(|_| bad())?;
    let b: i64 = b.trim_start_matches('=').parse().map_err(|_| bad())?;
    if a < 1 || b < a {
        return Err(bad());
    }
    Ok((a, b))
}

fn parse_overrides(raw: &[String]) -> Result<Vec<(String, f64)>, Failure> {
    raw.iter()
        .map(|s| {
            let (p, v) = s
                .split_once('=')
                .ok_or_else(|| usage(format!("bad tolerance override '{s}'")))?;
            let v: f64 = v.parse().map_err(|_| usage(format!("bad tolerance override '{s}'")))?;
            Ok((p.to_string(), v))
        })
        .collect()
}

fn emit<T: Serialize>(rows: &[T], csv_header: &str, csv_row: impl Fn(&T) -> String, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).expect("json");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from(csv_header);
            s.push('\n');
            for r in rows {
                s.push_str(&csv_row(r));
                s.push('\n');
            }
            s
        }
    }
}

#[derive(Serialize)]
struct EvalRow {
    x: f64,
    y: f64,
    re: f64,
    im: f64,
    tail_bound: f64,
}

#[derive(Serialize)]
struct FourierRow {
    n: i64,
    re: f64,
    im: f64,
    ratio_re: f64,
    ratio_im: f64,
    aliasing: f64,
}

#[derive(Serialize)]
struct FormRow {
    a: i64,
    b: i64,
    c: i64,
    re_q: f64,
    im_q: f64,
    qz: f64,
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Verify {
            suite,
            k,
            d,
            seed,
            json,
            tol,
        } => {
            let suite = Suite::from_str(&suite)?;
            let k = match k {
                Some(k) => {
                    SeriesParams::new(k, 5, 1.0)?;
                    Some(k as u32)
                }
                None => None,
            };
            let cfg = SuiteConfig {
                k,
                d,
                seed,
                tolerance_overrides: parse_overrides(&tol)?,
            };
            let reports = run_suite(suite, &cfg)?;
            let text = to_json(&reports);
            match json {
                Some(path) => {
                    std::fs::write(&path, text).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?
                }
                None => print!("{text}"),
            }
            let mut summary = String::new();
            for r in &reports {
                let _ = writeln!(
                    summary,
                    "{} {} residual={:.3e} tolerance={:.1e}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.check_name,
                    r.residual,
                    r.tolerance
                );
            }
            let failed = reports.iter().filter(|r| !r.passed).count();
            let _ = writeln!(summary, "{} checks, {} failed", reports.len(), failed);
            eprint!("{summary}");
            Ok(if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Eval {
            function,
            k,
            d,
            x,
            y,
            z,
            tol,
            d_max,
            format,
        } => {
            let xs = parse_range(&x)?;
            let ys = parse_range(&y)?;
            let mut rows = Vec::new();
            match function {
                EvalFunction::Lambda | EvalFunction::OmegaKernel => {
                    SeriesParams::new(k, 5, tol)?;
                    let z = parse_point(&z)?;
                    let v_min = ys.iter().cloned().fold(f64::INFINITY, f64::min);
                    let kind = if matches!(function, EvalFunction::Lambda) {
                        KernelKind::Lambda
                    } else {
                        KernelKind::Omega
                    };
                    let kernel =
                        KernelCoefficients::build(kind, k as u32, z, d_max, v_min, tol, SquarePolicy::Include)?;
                    for &yy in &ys {
                        for &xx in &xs {
                            let v = kernel.evaluate(UpperHalfPoint::new(xx, yy)?);
                            rows.push(EvalRow {
                                x: xx,
                                y: yy,
                                re: v.value.re,
                                im: v.value.im,
                                tail_bound: v.coefficient_error + v.last_term,
                            });
                        }
                    }
                }
                _ => {
                    let d = d.ok_or_else(|| usage("--D is required for this function"))?;
                    let p = SeriesParams::new(k, d, tol)?;
                    let target = match function {
                        EvalFunction::F => Target::F,
                        EvalFunction::Omega => Target::Omega,
                        _ => Target::Holomorphic,
                    };
                    for &yy in &ys {
                        for &xx in &xs {
                            let v = hyperbolic_sums(&p, UpperHalfPoint::new(xx, yy)?, target)?.truncated(target);
                            rows.push(EvalRow {
                                x: xx,
                                y: yy,
                                re: v.value.re,
                                im: v.value.im,
                                tail_bound: v.tail_bound,
                            });
                        }
                    }
                }
            }
            print!(
                "{}",
                emit(
                    &rows,
                    "x,y,re,im,tail_bound",
                    |r| format!("{},{},{:e},{:e},{:e}", r.x, r.y, r.re, r.im, r.tail_bound),
                    format
                )
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Fourier {
            function,
            k,
            d,
            n,
            y,
            nodes,
            tol,
            format,
        } => {
            let (lo, hi) = parse_index_range(&n)?;
            let p = SeriesParams::new(k, d, tol)?;
            let target = match function {
                FourierFunction::F => Target::F,
                FourierFunction::Holomorphic => Target::Holomorphic,
            };
            let failure = std::sync::Mutex::new(None);
            let f = |z: UpperHalfPoint| match hyperbolic_sums(&p, z, target) {
                Ok(s) => s.truncated(target).value,
                Err(e) => {
                    *failure.lock().unwrap() = Some(e);
                    C64::new(f64::NAN, f64::NAN)
                }
            };
            let c1 = fourier_coefficient(&f, 1, y, nodes)?.value;
            let mut rows = Vec::new();
            for m in lo..=hi {
                let c = fourier_coefficient(&f, m, y, nodes)?;
                let ratio = c.value / c1;
                rows.push(FourierRow {
                    n: m,
                    re: c.value.re,
                    im: c.value.im,
                    ratio_re: ratio.re,
                    ratio_im: ratio.im,
                    aliasing: c.aliasing,
                });
            }
            if let Some(e) = failure.into_inner().unwrap() {
                return Err(e.into());
            }
            print!(
                "{}",
                emit(
                    &rows,
                    "n,re,im,ratio_re,ratio_im,aliasing",
                    |r| format!(
                        "{},{:e},{:e},{:e},{:e},{:e}",
                        r.n, r.re, r.im, r.ratio_re, r.ratio_im, r.aliasing
                    ),
                    format
                )
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Qforms { d, z, radius, format } => {
            let z = parse_point(&z)?;
            if !(radius >= 0.0) {
                return Err(usage(format!("radius {radius} must be non-negative")));
            }
            let forms = enumerate_bounded(d, z, radius)?;
            let rows: Vec<FormRow> = forms
                .iter()
                .map(|q| {
                    let v = q.evaluate(z);
                    FormRow {
                        a: q.a,
                        b: q.b,
                        c: q.c,
                        re_q: v.re,
                        im_q: v.im,
                        qz: q.geodesic_invariant(z),
                    }
                })
                .collect();
            print!(
                "{}",
                emit(
                    &rows,
                    "a,b,c,re(Q),im(Q),Qz",
                    |r| format!("{},{},{},{},{},{}", r.a, r.b, r.c, r.re_q, r.im_q, r.qz),
                    format
                )
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
