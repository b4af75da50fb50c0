use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use permclt_core::asymptotics::{self, Budget};
use permclt_core::bigfloat::{self, BigFloat};
use permclt_core::combinatorics::class_size;
use permclt_core::genfun::{self, GfEngine};
use permclt_core::montecarlo::{self, RNG_ALGORITHM};
use permclt_core::verify::{self, Suite, VerifyConfig};
use permclt_core::{oracle, CycleType, Error, IntTQPoly};

/// Descent number and major index over conjugacy classes of S_n.
#[derive(Parser)]
#[command(name = "permclt", version)]
struct Cli {
    /// Working precision in significant decimal digits for m.g.f. evaluation.
    #[arg(long, global = true, env = "PERMCLT_PRECISION", default_value_t = bigfloat::DEFAULT_DIGITS)]
    precision: u32,

    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Format {
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Joint distribution of (d, maj) on a class from the generating function.
    Exact {
        /// Cycle type, e.g. "1^2 3^1" or "[[1,2],[3,1]]".
        #[arg(long)]
        lambda: CycleType,
        /// Print only the descent distribution (q = 1).
        #[arg(long)]
        q1: bool,
        #[command(flatten)]
        format: Format,
    },
    /// Joint distribution of (d, maj) on a class by enumeration.
    Oracle {
        #[arg(long)]
        lambda: CycleType,
        /// Largest n to enumerate.
        #[arg(long, default_value_t = oracle::DEFAULT_CAP)]
        cap: usize,
        #[command(flatten)]
        format: Format,
    },
    /// Monte Carlo moments and m.g.f. of the normalized pair.
    Sample {
        #[arg(long)]
        lambda: CycleType,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// m.g.f. evaluation points "s1,r1;s2,r2".
        #[arg(long, default_value = "1,1")]
        grid: String,
        /// Worker threads; 0 uses every core. Results do not depend on it.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long)]
        json: bool,
    },
    /// Exact m.g.f. M(-s, -r) of the normalized pair and its limit.
    Mgf {
        #[arg(long)]
        lambda: CycleType,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        r: f64,
    },
    /// Limiting covariance matrix at fixed-point density alpha.
    Sigma {
        /// Decimal or fraction, e.g. 0.25 or 1/4.
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        json: bool,
    },
    /// m.g.f. error against the limit along a family of classes.
    Converge {
        /// ncycle:8,16 | fpf-involution:100,400 | identity:10,100 | file:<path>
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Classes up to this n use the exact generating function; larger ones are sampled.
        #[arg(long, default_value_t = 24)]
        exact_max_n: usize,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Laplace cut-off; defaults to r/(4e(s+r)).
        #[arg(long)]
        epsilon: Option<f64>,
        #[command(flatten)]
        format: Format,
    },
    /// Run the invariant suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long, default_value_t = 200_000)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Core(Error),
    Checks(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Core(Error::InvalidInput(msg.into()))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn rational_string(v: &BigRational) -> String {
    v.to_string()
}

fn parse_alpha(s: &str) -> Result<BigRational, Failure> {
    let bad = || invalid(format!("alpha `{s}` is not a decimal or fraction"));
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b == BigInt::from(0) {
            return Err(bad());
        }
        return Ok(BigRational::new(a, b));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.chars().any(|c| !c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{}{frac}", if int.is_empty() { "0" } else { int }).parse().map_err(|_| bad())?;
    Ok(BigRational::new(digits, BigInt::from(10).pow(frac.len() as u32)))
}

fn parse_grid(s: &str) -> Result<Vec<(f64, f64)>, Failure> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let bad = || invalid(format!("grid point `{p}` should look like `s,r`"));
            let (a, b) = p.split_once(',').ok_or_else(bad)?;
            let (a, b): (f64, f64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
                return Err(invalid(format!("grid point `{p}` needs positive s and r")));
            }
            Ok((a, b))
        })
        .collect()
}

fn distribution_output(lam: &CycleType, counts: &IntTQPoly, format: &Format, source: &str) -> String {
    if format.csv {
        let mut out = String::from("d,maj,count\n");
        for (d, maj, c) in counts.terms() {
            out += &format!("{d},{maj},{c}\n");
        }
        return out;
    }
    if format.json {
        return pretty(&json!({
            "lambda": lam,
            "n": lam.n(),
            "class_size": class_size(lam).to_string(),
            "source": source,
            "gf": counts.to_rational().to_json_value(),
        }));
    }
    let mut out = format!("class {lam} (n = {}, size {})\n", lam.n(), class_size(lam));
    out += "d\tmaj\tcount\n";
    for (d, maj, c) in counts.terms() {
        out += &format!("{d}\t{maj}\t{c}\n");
    }
    out
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let digits = cli.precision;
    if !(bigfloat::MIN_DIGITS..=bigfloat::MAX_DIGITS).contains(&digits) {
        return Err(Error::Precision { requested: digits, min: bigfloat::MIN_DIGITS, max: bigfloat::MAX_DIGITS }.into());
    }
    bigfloat::set_default_digits(digits);
    match &cli.command {
        Command::Exact { lambda, q1, format } => {
            let engine = GfEngine::new();
            if *q1 {
                let e = engine.eulerian_specialization(lambda)?;
                let rows: Vec<(usize, &BigInt)> =
                    e.coeffs().iter().enumerate().filter(|(_, c)| **c != BigInt::from(0)).collect();
                return Ok(if format.csv {
                    rows.iter().fold(String::from("d,count\n"), |acc, (d, c)| acc + &format!("{d},{c}\n"))
                } else if format.json {
                    let v: Vec<Value> = rows.iter().map(|(d, c)| json!([d, c.to_string()])).collect();
                    pretty(&json!({ "lambda": lambda, "n": lambda.n(), "descents": v }))
                } else {
                    rows.iter().fold(String::from("d\tcount\n"), |acc, (d, c)| acc + &format!("{d}\t{c}\n"))
                });
            }
            let gf = engine.joint_gf(lambda)?;
            Ok(distribution_output(lambda, &gf.counts(), format, "generating function"))
        }
        Command::Oracle { lambda, cap, format } => {
            if *cap > oracle::HARD_CAP {
                return Err(Error::CapExceeded { what: "cap", got: *cap, cap: oracle::HARD_CAP }.into());
            }
            let dist = oracle::joint_distribution_bruteforce(lambda, *cap)?;
            Ok(distribution_output(lambda, &dist.to_bipoly(), format, "enumeration"))
        }
        Command::Sample { lambda, samples, seed, grid, workers, json } => {
            let grid = parse_grid(grid)?;
            let st = montecarlo::run_sampling(lambda, *samples, &grid, *seed, *workers)?;
            let moments = montecarlo::normalized_moments(&st).ok();
            let alpha = lambda.alpha1_f64();
            let mgf = st
                .mgf_grid
                .iter()
                .map(|p| {
                    Ok(json!({
                        "s": p.s,
                        "r": p.r,
                        "mean": p.mean(st.count),
                        "std_error": p.std_error(st.count),
                        "target": asymptotics::target_mgf(alpha, p.s, p.r)?,
                    }))
                })
                .collect::<Result<Vec<Value>, Error>>()?;
            let v = json!({
                "lambda": lambda,
                "n": lambda.n(),
                "alpha1": alpha,
                "seed": seed,
                "rng": RNG_ALGORITHM,
                "block_size": montecarlo::BLOCK_SIZE,
                "count": st.count,
                "mean_W": moments.as_ref().map(|m| m.mean_w),
                "cov_W": moments.as_ref().map(|m| &m.cov_w),
                "mgf": mgf,
            });
            if *json {
                return Ok(pretty(&v));
            }
            let mut out = format!("class {lambda}: {} samples, seed {seed}\n", st.count);
            if let Some(m) = &moments {
                out += &format!("mean W   = ({:.6}, {:.6})\n", m.mean_w[0], m.mean_w[1]);
                out += &format!(
                    "cov W    = [[{:.6}, {:.6}], [{:.6}, {:.6}]]  corr {:.4}\n",
                    m.cov_w.s11, m.cov_w.s12, m.cov_w.s12, m.cov_w.s22, m.cov_w.correlation()
                );
            }
            for p in &v["mgf"].as_array().cloned().unwrap_or_default() {
                out += &format!("M(-{}, -{}) = {} ± {}  (limit {})\n", p["s"], p["r"], p["mean"], p["std_error"], p["target"]);
            }
            Ok(out)
        }
        Command::Mgf { lambda, s, r } => {
            let m: BigFloat = genfun::mgf_exact(lambda, *s, *r, digits)?;
            let alpha = lambda.alpha1_f64();
            let target = asymptotics::target_mgf(alpha, *s, *r)?;
            let mf = m.to_f64();
            Ok(pretty(&json!({
                "lambda": lambda,
                "n": lambda.n(),
                "alpha1": alpha,
                "s": s,
                "r": r,
                "precision": digits,
                "mgf": mf,
                "mgf_digits": m.to_sci_string(digits),
                "target": target,
                "abs_err": (mf - target).abs(),
            })))
        }
        Command::Sigma { alpha, json } => {
            let a = parse_alpha(alpha)?;
            if a < BigRational::from_integer(0.into()) || a > BigRational::from_integer(1.into()) {
                return Err(invalid(format!("alpha must lie in [0, 1], got {a}")));
            }
            let m = asymptotics::sigma(&a)?;
            if *json {
                return Ok(pretty(&json!({
                    "alpha": rational_string(&a),
                    "s11": rational_string(&m.s11),
                    "s12": rational_string(&m.s12),
                    "s22": rational_string(&m.s22),
                })));
            }
            Ok(format!("s11 {}\ns12 {}\ns22 {}\n", m.s11, m.s12, m.s22))
        }
        Command::Converge { family, s, r, samples, seed, exact_max_n, workers, epsilon, format } => {
            let fam = asymptotics::parse_family(family)?;
            let eps = epsilon.unwrap_or_else(|| asymptotics::default_epsilon(*s, *r));
            asymptotics::AsymptoticParams::new(fam[0].n(), *s, *r, Some(eps))?;
            let budget = Budget { exact_max_n: *exact_max_n, samples: *samples, seed: *seed, workers: *workers, digits };
            let rows = asymptotics::convergence_report(&fam, *s, *r, &budget)?;
            let header = format!(
                "family={family} s={s} r={r} epsilon={eps} seed={seed} samples={samples} exact_max_n={exact_max_n} precision={digits}"
            );
            if format.json {
                return Ok(pretty(&json!({
                    "family": family,
                    "s": s,
                    "r": r,
                    "epsilon": eps,
                    "seed": seed,
                    "samples": samples,
                    "exact_max_n": exact_max_n,
                    "precision": digits,
                    "rng": RNG_ALGORITHM,
                    "rows": rows,
                })));
            }
            let mut out = if format.csv { format!("# {header}\n") } else { format!("{header}\n") };
            out += if format.csv {
                "n,alpha1,source,mgf,target,abs_err,err_times_n16\n"
            } else {
                "n\talpha1\tsource\tmgf\ttarget\tabs_err\terr_times_n16\n"
            };
            let sep = if format.csv { "," } else { "\t" };
            for row in &rows {
                let cells = [
                    row.n.to_string(),
                    row.alpha1.to_string(),
                    row.source.to_string(),
                    row.mgf.to_string(),
                    row.target.to_string(),
                    row.abs_err.to_string(),
                    row.err_times_n16.to_string(),
                ];
                out += &cells.join(sep);
                if !format.csv && row.growth {
                    out += "\terror grew beyond noise";
                }
                out += "\n";
            }
            Ok(out)
        }
        Command::Verify { suite, max_n, samples, seed, json } => {
            let suite: Suite = suite.parse()?;
            let cfg = VerifyConfig { max_n: *max_n, samples: *samples, seed: *seed };
            let rep = verify::run(suite, &cfg);
            let out = if *json {
                pretty(&json!({ "config": cfg, "precision": digits, "passed": rep.all_passed(), "checks": rep.checks }))
            } else {
                format!("max_n={max_n} samples={samples} seed={seed}\n{rep}\n")
            };
            if rep.all_passed() {
                Ok(out)
            } else {
                Err(Failure::Checks(out))
            }
        }
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, code) = match run(&cli) {
        Ok(text) => (text, 0),
        Err(Failure::Checks(text)) => (text, 3),
        Err(Failure::Core(e)) => {
            eprintln!("permclt: {e}");
            return ExitCode::from(if e.is_internal() { 3 } else { 2 });
        }
    };
    if let Err(e) = emit(&cli, &text) {
        eprintln!("permclt: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
