use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use reebkit::complexes::RingMode;
use reebkit::holonomy::MonomialAutomorphism;
use reebkit::orbits::{AngularProfile, FiberClass, Monodromy};
use reebkit::report::{self, Report};
use reebkit::ring::json::matrix_from_json;

/// Contact homology computations on tori and torus bundles.
#[derive(Parser, Debug)]
#[command(name = "reebkit", version)]
struct Cli {
    /// Emit the full report as JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,

    /// Flat `key = value` file supplying defaults for unset flags.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Numerical tolerance for solvers.
    #[arg(long, global = true)]
    tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Orbits, homology and loop automorphism for cos(n theta) dx + sin(n theta) dy on T^3.
    T3 {
        #[arg(long)]
        n: Option<i64>,
        /// Fiber class as `P,Q`.
        #[arg(long = "class")]
        class: Option<String>,
        #[arg(long, value_enum)]
        ring: Option<Ring>,
    },
    /// Orbits and loop automorphism on the torus bundle with monodromy A.
    Bundle {
        /// Monodromy entries `a,b,c,d` of [[a,b],[c,d]].
        #[arg(long, allow_hyphen_values = true)]
        monodromy: Option<String>,
        #[arg(long = "class", allow_hyphen_values = true)]
        class: Option<String>,
        /// Profile JSON: {"linear_n": n} or {"breakpoints": [[t, f], ...], "delta": d}.
        #[arg(long)]
        profile: Option<String>,
        /// Starting angle f(0) of the affine compatible profile, when no profile is given.
        #[arg(long, allow_hyphen_values = true)]
        f0: Option<f64>,
        /// Extra full turns of the affine compatible profile.
        #[arg(long)]
        turns: Option<u32>,
    },
    /// Lutz census and the rank of the loop subgroup on T^5.
    T5 {
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        summand_rank: Option<usize>,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Marked-point morphisms on the unit cotangent bundle of T^n.
    Stt {
        #[arg(long)]
        n: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        d: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        m: Option<i64>,
    },
    /// Critical points of phi_1^2 on an open-book page of T^3.
    LutzCritical {
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        page_angle: Option<f64>,
        #[arg(long)]
        dump_points: bool,
    },
    /// Closed Reeb orbits of cos(n theta) dx + sin(n theta) dy by shooting.
    Shoot {
        #[arg(long)]
        n: Option<i64>,
        #[arg(long = "class", allow_hyphen_values = true)]
        class: Option<String>,
        #[arg(long)]
        seeds: Option<usize>,
    },
    /// Smith normal form of a matrix over Q[t, 1/t].
    Snf {
        /// Matrix JSON, e.g. [[[[[0],"1"],[[1],"-1"]]]] for the 1x1 matrix (1 - t).
        #[arg(long, conflicts_with = "matrix_file")]
        matrix: Option<String>,
        #[arg(long)]
        matrix_file: Option<PathBuf>,
    },
    /// Exact order certificate of a monomial automorphism.
    Order {
        /// Automorphism JSON: {"index_set": {"finite": n}, "perm": [...], "multipliers": [[coeff, exps], ...]}.
        #[arg(long, conflicts_with = "automorphism_file")]
        automorphism: Option<String>,
        #[arg(long)]
        automorphism_file: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Ring {
    Quotient,
    Full,
}

impl FromStr for Ring {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        <Ring as ValueEnum>::from_str(s, true).map_err(|e| anyhow!(e))
    }
}

/// Settings from `--config`: flat `key = value` lines, `#` comments.
#[derive(Default)]
struct Config(HashMap<String, String>);

impl Config {
    fn load(path: Option<&PathBuf>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text)
    }

    fn parse(text: &str) -> Result<Self> {
        let mut map = HashMap::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("config line {}: expected key = value", no + 1))?;
            map.insert(k.trim().replace('-', "_"), v.trim().to_string());
        }
        Ok(Config(map))
    }

    /// `flag`, else the config value for `key`, else `default`.
    fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.0.get(key) {
            Some(s) => s
                .parse()
                .map_err(|e| anyhow!("config key {key} = {s}: {e}")),
            None => Ok(default),
        }
    }

    fn pick_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        self.0
            .get(key)
            .map(|s| {
                s.parse()
                    .map_err(|e| anyhow!("config key {key} = {s}: {e}"))
            })
            .transpose()
    }

    fn flag(&self, set: bool, key: &str) -> Result<bool> {
        self.pick(set.then_some(true), key, false)
    }
}

fn parse_class(s: &str) -> Result<FiberClass> {
    let (p, q) = s
        .split_once(',')
        .ok_or_else(|| anyhow!("class must be P,Q, got {s:?}"))?;
    Ok(FiberClass::new(p.trim().parse()?, q.trim().parse()?)?)
}

fn parse_monodromy(s: &str) -> Result<Monodromy> {
    let v: Vec<i64> = s
        .trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .map(|x| x.trim().trim_matches(|c| c == '[' || c == ']').parse())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("monodromy must be a,b,c,d, got {s:?}"))?;
    let [a, b, c, d] = v[..] else {
        bail!("monodromy needs four entries, got {}", v.len());
    };
    Ok(Monodromy::new(a, b, c, d)?)
}

fn read_json(inline: Option<String>, file: Option<PathBuf>, what: &str) -> Result<Value> {
    let text = match (inline, file) {
        (Some(s), _) => s,
        (None, Some(p)) => {
            fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?
        }
        (None, None) => bail!("missing {what}"),
    };
    serde_json::from_str(&text).with_context(|| format!("parsing {what}"))
}

fn run(cli: Cli) -> Result<(Report, bool)> {
    let cfg = Config::load(cli.config.as_ref())?;
    let json = cfg.flag(cli.json, "json")?;
    let report = match cli.command {
        Command::T3 { n, class, ring } => {
            let n = cfg.pick(n, "n", 1)?;
            let class = parse_class(&cfg.pick(class, "class", "1,0".to_string())?)?;
            let mode = match cfg.pick(ring, "ring", Ring::Quotient)? {
                Ring::Quotient => RingMode::Quotient,
                Ring::Full => RingMode::Full,
            };
            report::run_t3(n, class, mode)?
        }
        Command::Bundle {
            monodromy,
            class,
            profile,
            f0,
            turns,
        } => {
            let a = parse_monodromy(&cfg.pick(monodromy, "monodromy", "0,-1,1,0".to_string())?)?;
            let class = parse_class(&cfg.pick(class, "class", "1,0".to_string())?)?;
            let profile = match cfg.pick_opt(profile, "profile")? {
                Some(p) => AngularProfile::from_json(
                    &serde_json::from_str(&p).context("parsing profile")?,
                )?,
                None => AngularProfile::compatible(
                    &a,
                    cfg.pick(f0, "f0", 0.0)?,
                    cfg.pick(turns, "turns", 0)?,
                ),
            };
            report::run_bundle(&a, &profile, class)?
        }
        Command::T5 {
            epsilon,
            summand_rank,
            grid,
        } => report::run_t5(
            cfg.pick(epsilon, "epsilon", 0.25)?,
            cfg.pick(summand_rank, "summand_rank", 8)?,
            cfg.pick(grid, "grid", 64)?,
            cfg.pick(cli.tol, "tol", 1e-10)?,
        )?,
        Command::Stt { n, d, m } => report::run_stt(
            cfg.pick(n, "n", 2)?,
            cfg.pick(d, "d", 1)?,
            cfg.pick(m, "m", 1)?,
        )?,
        Command::LutzCritical {
            epsilon,
            grid,
            page_angle,
            dump_points,
        } => report::run_lutz(
            cfg.pick(epsilon, "epsilon", 0.25)?,
            cfg.pick(grid, "grid", 64)?,
            cfg.pick(cli.tol, "tol", 1e-10)?,
            cfg.pick(page_angle, "page_angle", 0.0)?,
            cfg.flag(dump_points, "dump_points")?,
        )?,
        Command::Shoot { n, class, seeds } => report::run_shoot(
            cfg.pick(n, "n", 1)?,
            parse_class(&cfg.pick(class, "class", "1,0".to_string())?)?,
            cfg.pick(seeds, "seeds", 64)?,
            cfg.pick(cli.tol, "tol", 1e-8)?,
        )?,
        Command::Snf {
            matrix,
            matrix_file,
        } => {
            let v = read_json(cfg.pick_opt(matrix, "matrix")?, matrix_file, "--matrix")?;
            report::run_snf(&matrix_from_json(&v, 1)?)?
        }
        Command::Order {
            automorphism,
            automorphism_file,
        } => {
            let v = read_json(
                cfg.pick_opt(automorphism, "automorphism")?,
                automorphism_file,
                "--automorphism",
            )?;
            report::run_order(&MonomialAutomorphism::from_json(&v)?)?
        }
    };
    Ok((report, json))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok((report, json)) => {
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report.to_json()).expect("serializable")
                );
            } else {
                print!("{}", report.render());
            }
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            eprintln!("run `reebkit --help` for usage");
            ExitCode::from(2)
        }
    }
}
