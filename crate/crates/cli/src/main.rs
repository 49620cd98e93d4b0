mod report;
mod suites;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mzv_core::exact::bernoulli::bcoef;
use mzv_core::exact::rational::{fmt_rational, parse_rational};
use mzv_core::harmonic_integral::har_action;
use mzv_core::ihara::{fixed_point, ihara_inv, ihara_mul, iterate};
use mzv_core::mhs::{har, mhs_unweighted, split_by_digits};
use mzv_core::ncseries::random::random_pi_tilde;
use mzv_core::ncseries::{HarmonicWord, NCSeries};
use mzv_core::summation::{fit_expansion, iter_har_series};
use mzv_core::zeta::{zeta_decompositions, zeta_depth1};
use mzv_core::{Error, ExactScalar, Result, Scalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use report::{Check, Format, Report};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "mzv", version, about = "Weighted harmonic sums, Ihara actions and p-adic zeta values")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Global {
    /// Prime p.
    #[arg(long, global = true, default_value_t = 3)]
    p: u64,
    /// Level N (roots of unity of order N).
    #[arg(long = "N", global = true, default_value_t = 1)]
    n_roots: u32,
    #[arg(long, global = true, default_value_t = 1)]
    alpha0: u32,
    /// Comma-separated list of alpha.
    #[arg(long, global = true, value_delimiter = ',', default_value = "2,3")]
    alpha: Vec<u32>,
    #[arg(long, global = true, default_value_t = 6)]
    weight_cap: usize,
    #[arg(long, global = true, default_value_t = 3)]
    depth_cap: usize,
    /// Target p-adic precision (exponent of p).
    #[arg(long, global = true, default_value_t = 8)]
    precision: i64,
    /// Override for the truncation index l.
    #[arg(long, global = true)]
    lmax: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, default_value_t = 20260101)]
    seed: u64,
    /// Sample count for randomized suites.
    #[arg(long, global = true, default_value_t = 20)]
    samples: usize,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Weighted harmonic sum har(m, w), or the unweighted sum with --unweighted.
    Mhs {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        word: String,
        #[arg(long)]
        unweighted: bool,
    },
    /// Twisted Faulhaber coefficient B^l_m(xi^k).
    Bcoef {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        k: i64,
    },
    /// Unweighted harmonic sum at m by base-q digit splitting, as a p-adic number.
    Split {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        word: String,
        /// Base of the splitting; defaults to p.
        #[arg(long)]
        q: Option<u64>,
    },
    /// Ihara operations on series given as JSON files.
    Ihara {
        #[arg(value_enum)]
        op: IharaOp,
        #[arg(long)]
        g: Option<PathBuf>,
        #[arg(long)]
        f: Option<PathBuf>,
        /// Rational weight lambda; defaults to p.
        #[arg(long)]
        lambda: Option<String>,
        /// Number of iterations for `iter`.
        #[arg(long, default_value_t = 1)]
        a: u64,
    },
    /// Harmonic action g o_har h on JSON series.
    HarAction {
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        h: PathBuf,
    },
    /// har(p^alpha, w) from the summation engine, for each alpha.
    IterSeries {
        #[arg(long)]
        word: String,
        /// Compare with brute-force sums when p^alpha is at most this bound.
        #[arg(long, default_value_t = 100_000)]
        brute_limit: u64,
    },
    /// zeta_p(k) from the ad-infinity coefficients; a table for k = 2..weight-cap without --k.
    Zeta {
        #[arg(long)]
        k: Option<u64>,
        /// Report every (b, n) decomposition separately.
        #[arg(long)]
        decompositions: bool,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        max_m: u64,
        #[arg(long, default_value_t = 3)]
        max_weight: usize,
        /// Words for the three-way suite, separated by ';'.
        #[arg(long, value_delimiter = ';', default_value = "(1);(2);(1,1)")]
        words: Vec<String>,
    },
    /// Fit an expansion sum c_{n,m} (base^a)^n a^m to samples.
    Fit {
        /// JSON list of {"a": int, "value": "p/q"}.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        base: String,
        #[arg(long, default_value_t = 0)]
        n_min: i64,
        #[arg(long)]
        n_max: i64,
        #[arg(long, default_value_t = 0)]
        m_cap: u32,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum IharaOp {
    Mul,
    Inv,
    Fix,
    Iter,
    /// Emit a random grouplike series at the caps, from --seed.
    Random,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    Stuffle,
    Norms,
    Group,
    Contraction,
    IterStructure,
    ThreeWay,
    CrossAlpha,
    Splitting,
}

/// Validated run configuration.
#[derive(Debug, Clone)]
pub struct Config {
    pub p: u64,
    pub n_roots: u32,
    pub alpha0: u32,
    pub alpha: Vec<u32>,
    pub weight_cap: usize,
    pub depth_cap: usize,
    pub precision: i64,
    pub lmax: Option<usize>,
    pub seed: u64,
    pub samples: usize,
}

impl Config {
    fn from_args(g: &Global) -> Result<Config> {
        let prime = g.p >= 2 && (2..g.p).take_while(|d| d * d <= g.p).all(|d| !g.p.is_multiple_of(d));
        if !prime {
            return Err(Error::Config(format!("p = {} is not a prime", g.p)));
        }
        if g.n_roots == 0 || (g.n_roots as u64).is_multiple_of(g.p) {
            return Err(Error::Config(format!("gcd(p, N) must be 1 (p = {}, N = {})", g.p, g.n_roots)));
        }
        if g.precision < 1 {
            return Err(Error::Config("precision must be at least 1".into()));
        }
        if g.weight_cap < 1 || g.depth_cap < 1 {
            return Err(Error::Config("caps must be at least 1".into()));
        }
        if g.alpha0 == 0 || g.alpha.contains(&0) {
            return Err(Error::Config("alpha0 and alpha must be positive".into()));
        }
        if g.samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        Ok(Config {
            p: g.p,
            n_roots: g.n_roots,
            alpha0: g.alpha0,
            alpha: g.alpha.clone(),
            weight_cap: g.weight_cap,
            depth_cap: g.depth_cap,
            precision: g.precision,
            lmax: g.lmax,
            seed: g.seed,
            samples: g.samples,
        })
    }
}

fn exact_json(x: &ExactScalar) -> Value {
    match x.as_rational() {
        Some(r) => json!(fmt_rational(r)),
        None => x.to_json(),
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn read_series(path: Option<&PathBuf>, name: &str, cfg: &Config) -> Result<NCSeries<ExactScalar>> {
    let path = path.ok_or_else(|| Error::Config(format!("--{name} is required")))?;
    NCSeries::from_json(&read_json(path)?, &ExactScalar::int(cfg.n_roots, 0))
}

fn run(cmd: Cmd, cfg: &Config) -> Result<Report> {
    let n = cfg.n_roots;
    let report = Report::default();
    Ok(match cmd {
        Cmd::Mhs { m, word, unweighted } => {
            let w = HarmonicWord::parse(&word)?;
            let v = if unweighted { mhs_unweighted(m, &w, n) } else { har(m, &w, n) };
            report.field("m", json!(m)).field("word", json!(w.to_string())).field("value", exact_json(&v))
        }
        Cmd::Bcoef { l, m, k } => {
            let v = bcoef(n, l, m, k)?;
            report.field("l", json!(l)).field("m", json!(m)).field("k", json!(k)).field("value", exact_json(&v))
        }
        Cmd::Split { m, word, q } => {
            if n != 1 {
                return Err(Error::Config("split supports N = 1".into()));
            }
            let w = HarmonicWord::parse(&word)?;
            let v = split_by_digits(m, &w, cfg.p, q.unwrap_or(cfg.p), cfg.precision)?;
            report
                .field("m", json!(m))
                .field("word", json!(w.to_string()))
                .field("value", v.to_json())
                .field("cert", json!(v.prec))
        }
        Cmd::Ihara { op, g, f, lambda, a } => {
            let lam = match lambda {
                Some(s) => ExactScalar::from_rational(n, parse_rational(&s)?),
                None => ExactScalar::int(n, cfg.p as i64),
            };
            let out = match op {
                IharaOp::Random => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    random_pi_tilde(&mut rng, n, cfg.weight_cap, cfg.depth_cap)
                }
                IharaOp::Mul => ihara_mul(&read_series(g.as_ref(), "g", cfg)?, &read_series(f.as_ref(), "f", cfg)?)?,
                IharaOp::Inv => ihara_inv(&read_series(g.as_ref(), "g", cfg)?),
                IharaOp::Fix => fixed_point(&lam, &read_series(g.as_ref(), "g", cfg)?, cfg.p)?,
                IharaOp::Iter => iterate(a, &lam, &read_series(g.as_ref(), "g", cfg)?)?,
            };
            report.field("series", out.to_json(Some(cfg.p)))
        }
        Cmd::HarAction { g, h } => {
            let (g, h) = (read_series(Some(&g), "g", cfg)?, read_series(Some(&h), "h", cfg)?);
            let lmax = cfg.lmax.unwrap_or(g.weight_cap.saturating_sub(2));
            report.field("series", har_action(&g, &h, lmax)?.to_json(Some(cfg.p)))
        }
        Cmd::IterSeries { word, brute_limit } => {
            let w = HarmonicWord::parse(&word)?;
            if n != 1 || w.roots.iter().any(|&k| k != 0) {
                return Err(Error::Config("iter-series supports N = 1".into()));
            }
            let mut rows = Vec::new();
            let mut checks = Vec::new();
            for &alpha in &cfg.alpha {
                let v = iter_har_series(cfg.p, cfg.alpha0, alpha, &w, cfg.precision)?;
                rows.push(json!({"alpha": alpha, "value": v.to_json(), "cert": v.prec}));
                let name = format!("series vs brute at alpha = {alpha}");
                match cfg.p.checked_pow(alpha).filter(|&m| m <= brute_limit) {
                    Some(m) => {
                        let b = v.field.embed(&har(m, &w, 1), v.prec + 4)?;
                        let got = v.agreement(&b);
                        checks.push(Check::new(name, got >= v.prec && v.prec >= cfg.precision, format!("agreement {got}")).with_cert(v.prec));
                    }
                    None => checks.push(Check::new(name, true, "skipped: p^alpha above --brute-limit").with_cert(v.prec)),
                }
            }
            let mut r = report.field("word", json!(w.to_string())).field("values", json!(rows));
            r.checks = checks;
            r
        }
        Cmd::Zeta { k, decompositions } => {
            if n != 1 {
                return Err(Error::Config("zeta supports N = 1".into()));
            }
            let ks: Vec<u64> = match k {
                Some(k) => vec![k],
                None => (2..=cfg.weight_cap as u64).collect(),
            };
            let mut recs = Vec::new();
            for &k in &ks {
                if decompositions {
                    recs.extend(zeta_decompositions(cfg.p, k, cfg.alpha0, cfg.precision)?);
                } else {
                    recs.push(zeta_depth1(cfg.p, k, cfg.alpha0, cfg.precision)?);
                }
            }
            if k.is_some() && !decompositions {
                let Value::Object(map) = recs[0].to_json() else { unreachable!("records serialize to objects") };
                Report { checks: Vec::new(), fields: map }
            } else {
                report.field("zeta", Value::Array(recs.iter().map(|r| r.to_json()).collect()))
            }
        }
        Cmd::Verify { suite, max_m, max_weight, words } => {
            let checks = match suite {
                Suite::Stuffle => suites::stuffle(max_m, max_weight),
                Suite::Splitting => suites::splitting(cfg, max_m, max_weight)?,
                Suite::Group => suites::group(cfg)?,
                Suite::Norms => suites::norms(cfg)?,
                Suite::Contraction => suites::contraction(cfg)?,
                Suite::IterStructure => suites::iter_structure(cfg)?,
                Suite::CrossAlpha => suites::cross_alpha(cfg)?,
                Suite::ThreeWay => {
                    let ws = words.iter().map(|s| HarmonicWord::parse(s)).collect::<Result<Vec<_>>>()?;
                    suites::three_way(cfg, &ws)?
                }
            };
            let name = suite.to_possible_value().expect("no skipped variants").get_name().to_string();
            let mut r = report.field("suite", json!(name));
            r.checks = checks;
            r
        }
        Cmd::Fit { input, base, n_min, n_max, m_cap } => {
            let base = ExactScalar::from_rational(n, parse_rational(&base)?);
            let raw = read_json(&input)?;
            let bad = || Error::Parse("samples must be a list of {\"a\": int, \"value\": \"p/q\"}".into());
            let mut pts = Vec::new();
            for s in raw.as_array().ok_or_else(bad)? {
                let a = s.get("a").and_then(Value::as_i64).ok_or_else(bad)?;
                let v = s.get("value").and_then(Value::as_str).ok_or_else(bad)?;
                pts.push((a, ExactScalar::from_rational(n, parse_rational(v)?)));
            }
            let fit = fit_expansion(&pts, &base, n_min..=n_max, m_cap)?;
            report.field("expansion", fit.to_json())
        }
    })
}

/// Config, parse and precondition errors exit with 2; data that contradicts
/// itself is a failed check and exits with 1.
fn error_code(e: &Error) -> u8 {
    match e {
        Error::Inconsistent(_) | Error::ConventionFault(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let format = cli.global.format;
    let result = Config::from_args(&cli.global).and_then(|cfg| run(cli.cmd, &cfg));
    match result {
        Ok(report) => {
            println!("{}", report.render(format));
            match report.first_failure() {
                Some(c) => {
                    eprintln!("first failing check: {}", c.name);
                    ExitCode::from(1)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
