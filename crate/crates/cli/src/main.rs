use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use dseries::corpus;
use dseries::equivalence::{detect_twist, helly_limit, limit_series, twist, DetectOptions, LimitSource, PhaseLimitTable};
use dseries::exponents::integrality;
use dseries::expr::Expr;
use dseries::kronecker::strategy_names;
use dseries::precision::{HpReal, DEFAULT_BITS};
use dseries::rigidity::winding::{value_set_check, ProbeStatus, ValueSetOptions};
use dseries::rigidity::{
    density_of_translates, find_translate, verify_translate, CertificateStatus, CompactSet, SamplingOptions,
    TranslateOptions, VerifyOptions,
};
use dseries::series::{sigma_absolute_estimate, sigma_uniform_estimate, DirichletSeries, SamplingPlan};
use dseries::specfile::{canonical_json, load_series, SeriesFile};
use dseries::twist::TwistVector;
use dseries::Error;

/// Environment variable overriding the working precision in bits.
const PRECISION_ENV: &str = "DSERIES_PRECISION_BITS";

#[derive(Parser)]
#[command(name = "dseries", version, about = "General Dirichlet series: bases, twists, abscissae and translates")]
struct Cli {
    /// Seed for randomized subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Kronecker strategy.
    #[arg(long, global = true, default_value = "auto", value_parser = strategy_parser())]
    strategy: String,
    /// Kronecker evaluations per attempt.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Write the artifact here instead of stdout.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

fn strategy_parser() -> clap::builder::PossibleValuesParser {
    clap::builder::PossibleValuesParser::new(strategy_names())
}

/// Series arguments are a JSON spec path or `corpus:<name>[:<n_max>]`.
#[derive(Subcommand)]
enum Command {
    /// Integrality report of the Bohr matrix.
    Basis {
        series: String,
        #[arg(long, default_value_t = 1000)]
        rows: u64,
        #[arg(long, default_value_t = 1_000_000_000_000)]
        cap: u64,
    },
    /// Abscissa estimates over an x-grid, as CSV.
    Sigma {
        series: String,
        /// `start:stop:count`.
        #[arg(long, default_value = "1.5:10.5:10")]
        grid: String,
        /// Use Σ|a(n)| (absolute abscissa) instead of window suprema.
        #[arg(long)]
        absolute: bool,
        #[arg(long, default_value_t = 512)]
        points: usize,
    },
    /// Emit the spec of the twisted series.
    Twist {
        series: String,
        /// Twist vector JSON file, or an inline JSON angle array (zero past its end).
        #[arg(long)]
        y: String,
    },
    /// Recover the twist between two series; exit 1 when incompatible.
    Equiv {
        a: String,
        b: String,
        #[arg(long, default_value_t = 2000)]
        rows: u64,
    },
    /// Search for a translate and certify it; exit 0 iff verified.
    FindTau {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        eps: f64,
    },
    /// Error report for a given translate.
    Verify {
        #[command(flatten)]
        pair: Pair,
        /// Expression such as `210*pi` or a decimal literal.
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        /// Exit 1 unless the total error is below this level.
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value_t = 1e-10)]
        tail_accuracy: f64,
    },
    /// Sampled density of ε-translates in [−T, T], as CSV.
    Density {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        eps: f64,
        #[arg(long = "T")]
        t_max: f64,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
    },
    /// Helly subsequence of translate phases and the limit series.
    Lemma2 {
        series: String,
        /// JSON array of translates (decimal strings or numbers).
        #[arg(long)]
        taus: PathBuf,
        #[arg(long, default_value_t = 5e-3)]
        tolerance: f64,
        #[arg(long, default_value_t = 2)]
        min_len: usize,
    },
    /// Certify value-set probes in both directions.
    Values {
        #[command(flatten)]
        pair: Pair,
        /// JSON array of `[re, im]` probes.
        #[arg(long)]
        probes: PathBuf,
    },
    /// Scripted end-to-end scenario.
    Demo { scenario: Scenario },
}

#[derive(clap::Args)]
struct Pair {
    /// The series `f`.
    source: String,
    /// The series `F`; defaults to the twist of `f` by `--y`.
    target: Option<String>,
    #[arg(long)]
    y: Option<String>,
    /// `σ0,σ1,t0,t1`.
    #[arg(long, default_value = "1.6,2.2,-1,1", allow_hyphen_values = true)]
    k: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scenario {
    Bohr,
    Zeta,
    Hurwitz,
}

struct Fail {
    code: u8,
    message: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::Json(_)
            | Error::Invalid(_)
            | Error::NotIncreasing { .. }
            | Error::BasisTooShort { .. }
            | Error::MissingCoefficients { .. }
            | Error::UnknownStrategy(_)
            | Error::TwistTooShort { .. }
            | Error::IndexOutOfRange { .. } => 2,
            Error::BudgetExhausted { .. } => 3,
            _ => 1,
        };
        Fail {
            code,
            message: e.to_string(),
        }
    }
}

fn parse_fail(message: impl Into<String>) -> Fail {
    Fail {
        code: 2,
        message: message.into(),
    }
}

type Outcome = std::result::Result<(String, u8), Fail>;

fn precision_bits() -> Result<usize, Fail> {
    match std::env::var(PRECISION_ENV) {
        Ok(v) => v
            .parse::<usize>()
            .ok()
            .filter(|b| (64..=1 << 16).contains(b))
            .ok_or_else(|| parse_fail(format!("{PRECISION_ENV} must be an integer in 64..=65536, got {v:?}"))),
        Err(_) => Ok(DEFAULT_BITS),
    }
}

fn read(path: &std::path::Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| parse_fail(format!("{}: {e}", path.display())))
}

fn load(arg: &str) -> Result<DirichletSeries, Fail> {
    if let Some(rest) = arg.strip_prefix("corpus:") {
        let (name, n_max) = match rest.split_once(':') {
            Some((name, n)) => (name, n.parse::<u64>().map_err(|_| parse_fail(format!("bad n_max in {arg:?}")))?),
            None => (rest, 500),
        };
        return Ok(corpus::entry(name, n_max)?.series);
    }
    Ok(load_series(&read(std::path::Path::new(arg))?)?)
}

fn load_twist(arg: &str) -> Result<TwistVector, Fail> {
    let text = if arg.trim_start().starts_with('[') || arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        read(std::path::Path::new(arg))?
    };
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| parse_fail(format!("twist vector: {e}")))?;
    let y = match v {
        serde_json::Value::Array(_) => TwistVector::with_zero_tail(serde_json::from_value(v).map_err(|e| parse_fail(e.to_string()))?),
        _ => serde_json::from_value(v).map_err(|e| parse_fail(e.to_string()))?,
    };
    Ok(y)
}

fn parse_tau(src: &str, bits: usize) -> Result<HpReal, Fail> {
    if let Some(v) = HpReal::parse(src, bits) {
        return Ok(v);
    }
    Ok(Expr::parse(src)?.eval(bits))
}

fn parse_grid(src: &str) -> Result<Vec<f64>, Fail> {
    let parts: Vec<&str> = src.split(':').collect();
    let bad = || parse_fail(format!("grid must be start:stop:count, got {src:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if n == 0 || !(b >= a) {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
}

struct Loaded {
    f: DirichletSeries,
    g: DirichletSeries,
    y: Option<TwistVector>,
    k: CompactSet,
}

fn load_pair(pair: &Pair) -> Result<Loaded, Fail> {
    let f = load(&pair.source)?;
    let y = pair.y.as_deref().map(load_twist).transpose()?;
    let g = match (&pair.target, &y) {
        (Some(t), _) => load(t)?,
        (None, Some(y)) => twist(&f, y)?,
        (None, None) => return Err(parse_fail("give a target series or --y")),
    };
    let k = CompactSet::parse_rectangle(&pair.k)?;
    Ok(Loaded { f, g, y, k })
}

fn translate_options(cli: &Cli) -> TranslateOptions {
    let mut opts = TranslateOptions {
        strategy: cli.strategy.clone(),
        ..Default::default()
    };
    if let Some(b) = cli.budget {
        opts.budget = b;
    }
    opts
}

fn to_json<T: serde::Serialize + ?Sized>(v: &T) -> Result<String, Fail> {
    Ok(canonical_json(v)?)
}

fn run(cli: &Cli) -> Outcome {
    let bits = precision_bits()?;
    match &cli.command {
        Command::Basis { series, rows, cap } => {
            let s = load(series)?;
            let report = integrality(&s.exponents().matrix()?, *rows, *cap)?;
            Ok((to_json(&report)?, 0))
        }
        Command::Sigma {
            series,
            grid,
            absolute,
            points,
        } => {
            let s = load(series)?;
            let grid = parse_grid(grid)?;
            let plan = SamplingPlan {
                points: *points,
                ..Default::default()
            };
            let est = if *absolute {
                sigma_absolute_estimate(&s, &grid, &plan)?
            } else {
                sigma_uniform_estimate(&s, &grid, &plan)?
            };
            log::info!("estimate {}", est.estimate);
            Ok((est.to_csv(), 0))
        }
        Command::Twist { series, y } => {
            let s = load(series)?;
            let t = twist(&s, &load_twist(y)?)?;
            Ok((SeriesFile::from_series(&t)?.to_canonical_json()?, 0))
        }
        Command::Equiv { a, b, rows } => {
            let (a, b) = (load(a)?, load(b)?);
            let out = detect_twist(&a, &b, *rows, &DetectOptions::default())?;
            let code = if out.is_equivalent() { 0 } else { 1 };
            Ok((to_json(&out)?, code))
        }
        Command::FindTau { pair, eps } => {
            let p = load_pair(pair)?;
            let cert = find_translate(&[p.f], &[p.g], &[p.k], *eps, p.y.as_ref(), &translate_options(cli))?;
            let code = if cert.status == CertificateStatus::Verified { 0 } else { 1 };
            Ok((to_json(&cert)?, code))
        }
        Command::Verify {
            pair,
            tau,
            eps,
            tail_accuracy,
        } => {
            let p = load_pair(pair)?;
            let tau = parse_tau(tau, bits)?;
            let opts = VerifyOptions {
                tail_accuracy: *tail_accuracy,
                ..Default::default()
            };
            let report = verify_translate(&[p.f], &[p.g], &[p.k], &tau, &opts)?;
            let code = match eps {
                Some(e) if report.max_total >= *e => 1,
                _ => 0,
            };
            Ok((to_json(&report)?, code))
        }
        Command::Density {
            pair,
            eps,
            t_max,
            samples,
        } => {
            let p = load_pair(pair)?;
            let d = density_of_translates(
                &[p.f],
                &[p.g],
                &[p.k],
                *eps,
                *t_max,
                *samples,
                cli.seed,
                &SamplingOptions::default(),
            )?;
            log::info!("density {} ± {} ({} of {})", d.estimate, d.std_error, d.hits, d.samples);
            Ok((d.to_csv(), 0))
        }
        Command::Lemma2 {
            series,
            taus,
            tolerance,
            min_len,
        } => {
            let s = load(series)?;
            let raw: Vec<serde_json::Value> =
                serde_json::from_str(&read(taus)?).map_err(|e| parse_fail(format!("taus: {e}")))?;
            let taus = raw
                .iter()
                .map(|v| match v {
                    serde_json::Value::String(t) => parse_tau(t, bits),
                    serde_json::Value::Number(n) => parse_tau(&n.to_string(), bits),
                    other => Err(parse_fail(format!("tau must be a string or number, got {other}"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let spec = s.exponents();
            let integral = spec.has_basis() && integrality(&spec.matrix()?, s.len(), 1 << 20)?.is_integral;
            let (table, limit) = if integral {
                let support = spec.support(s.len())?;
                let dims = support.last().map_or(0, |l| l + 1);
                let freqs = (0..dims).map(|l| Ok(spec.generator(l)?.value(bits))).collect::<Result<Vec<_>, Error>>()?;
                let table = helly_limit(&taus, &freqs, *tolerance, *min_len)?;
                let lim = limit_series(std::slice::from_ref(&s), LimitSource::Basis(&table))?;
                (table, lim)
            } else {
                let freqs = (1..=s.len()).map(|n| spec.realize(n, bits)).collect::<Result<Vec<_>, Error>>()?;
                let table = helly_limit(&taus, &freqs, *tolerance, *min_len)?;
                let phases = PhaseLimitTable::from_helly(&table);
                let lim = limit_series(std::slice::from_ref(&s), LimitSource::Exponents(&phases))?;
                (table, lim)
            };
            let specs = limit
                .series
                .iter()
                .map(SeriesFile::from_series)
                .collect::<Result<Vec<_>, Error>>()?;
            let out = json!({"helly": table, "limit_series": specs, "twist": limit.twist});
            Ok((to_json(&out)?, 0))
        }
        Command::Values { pair, probes } => {
            let p = load_pair(pair)?;
            let raw: Vec<[f64; 2]> =
                serde_json::from_str(&read(probes)?).map_err(|e| parse_fail(format!("probes: {e}")))?;
            let probes: Vec<Complex64> = raw.iter().map(|v| Complex64::new(v[0], v[1])).collect();
            let opts = ValueSetOptions {
                translate: translate_options(cli),
                ..Default::default()
            };
            let report = value_set_check(&p.f, &p.g, &p.k, &probes, p.y.as_ref(), &opts)?;
            let failed = report.probes.iter().any(|r| r.status == ProbeStatus::Failed);
            Ok((to_json(&report)?, failed as u8))
        }
        Command::Demo { scenario } => demo(cli, *scenario, bits),
    }
}

fn demo(cli: &Cli, scenario: Scenario, bits: usize) -> Outcome {
    match scenario {
        Scenario::Bohr => {
            let f = corpus::bohr_example(200)?.series;
            let g = f.scaled(Complex64::new(-1.0, 0.0));
            let basis = integrality(&f.exponents().matrix()?, 200, 1_000_000)?;
            let k = CompactSet::rectangle(2.0, 3.0, -1.0, 1.0)?;
            let tau = corpus::bohr_tau(4).with_bits(bits.max(DEFAULT_BITS));
            let opts = VerifyOptions {
                tail_accuracy: 1e-14,
                ..Default::default()
            };
            let report = verify_translate(std::slice::from_ref(&f), std::slice::from_ref(&g), &[k], &tau, &opts)?;
            let equiv = detect_twist(&f, &g, 200, &DetectOptions::default())?;
            let ok = !basis.is_integral && report.max_total < 1e-7 && !equiv.is_equivalent();
            let out = json!({
                "scenario": "bohr",
                "basis": basis,
                "verify": report,
                "equiv": equiv,
                "ok": ok,
            });
            Ok((to_json(&out)?, if ok { 0 } else { 1 }))
        }
        Scenario::Zeta => {
            let z = corpus::zeta_series(500)?.series;
            let y = TwistVector::sparse(&[(0, std::f64::consts::PI / 3.0), (1, std::f64::consts::PI / 5.0)]);
            let f = twist(&z, &y)?;
            let k = CompactSet::rectangle(1.6, 2.2, -1.0, 1.0)?;
            let cert = find_translate(&[z], &[f], &[k], 0.1, Some(&y), &translate_options(cli))?;
            let ok = cert.status == CertificateStatus::Verified;
            let out = json!({"scenario": "zeta", "certificate": cert, "ok": ok});
            Ok((to_json(&out)?, if ok { 0 } else { 1 }))
        }
        Scenario::Hurwitz => {
            let h = corpus::hurwitz_series(&Expr::parse("1/pi")?, 200)?.series;
            let basis = integrality(&h.exponents().matrix()?, 200, 1_000_000)?;
            let y = TwistVector::sparse(&[(0, 1.0), (1, -0.5), (2, 2.0)]);
            let g = twist(&h, &y)?;
            let equiv = detect_twist(&h, &g, 200, &DetectOptions::default())?;
            let recovered = equiv.twist_vector().is_some_and(|z| {
                (0..3).all(|l| {
                    let d = z.angle(l).unwrap_or(0.0) - y.angle(l).unwrap_or(0.0);
                    (d - std::f64::consts::TAU * (d / std::f64::consts::TAU).round()).abs() < 1e-9
                })
            });
            let ok = basis.is_integral && recovered;
            let out = json!({"scenario": "hurwitz", "basis": basis, "equiv": equiv, "ok": ok});
            Ok((to_json(&out)?, if ok { 0 } else { 1 }))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok((artifact, code)) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, &artifact),
                None => std::io::stdout().write_all(artifact.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
