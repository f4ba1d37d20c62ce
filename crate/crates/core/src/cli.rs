//! Command-line front end.
//!
//! Every command writes into `<out>/<command>[-seed<seed>]/`. Files are never
//! overwritten with different content: rerunning a command with the same
//! seed is a no-op, anything else is an error.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::accounting::{delta_of_eps, eps_of_delta, f_r_curve, RBound};
use crate::distributions::{geometric_sample, GeometricLaw};
use crate::error::{Error, Result};
use crate::harness::runner::{rows_csv, run_sampler, SamplerKind, SamplerParams};
use crate::harness::suite::{run_suite, Suite};
use crate::harness::targets::{BuiltinTarget, Prepared};
use crate::harness::{attack_tradeoff, figure2_csvs, fmt_float, replicate, reproduce_table1, table1_csv};
use crate::mechanisms::ErmSpec;

#[derive(Debug, Parser)]
#[command(name = "dp-rejection", version, about = "Rejection samplers with data-independent runtime")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Runtime privacy accounting for a given R.
    Account(AccountArgs),
    /// Draw samples and runtimes with one of the samplers.
    Sample(SampleArgs),
    /// Run the statistical verification suite.
    Verify(VerifyArgs),
    /// Simulate the runtime timing attack between two acceptance rates.
    Attack(AttackArgs),
    /// Write the eps(delta) table and tradeoff-curve data.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Args)]
pub struct AccountArgs {
    /// Ratio of log-survival rates.
    #[arg(long = "R", visible_alias = "r", required_unless_present = "p")]
    pub r: Option<f64>,
    /// Acceptance probabilities to derive R from, instead of --R.
    #[arg(long, requires = "q")]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub delta: Vec<f64>,
    #[arg(long)]
    pub eps: Vec<f64>,
    /// Write the f_R curve CSV here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// JSON experiment config; flags given on the command line take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub sampler: Option<SamplerKind>,
    /// Built-in target name.
    #[arg(long)]
    pub target: Option<String>,
    /// Ridge ERM spec file, instead of a built-in target.
    #[arg(long, conflicts_with = "target")]
    pub erm: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "full")]
    pub suite: Suite,
    #[arg(long, required_unless_present = "fresh_seed")]
    pub seed: Option<u64>,
    /// Draw a seed from the operating system and print it.
    #[arg(long)]
    pub fresh_seed: bool,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AttackArgs {
    /// Acceptance probability on the first database.
    #[arg(long)]
    pub p: f64,
    /// Acceptance probability on the second database.
    #[arg(long)]
    pub q: f64,
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

/// Experiment description read from `--config`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub id: String,
    pub sampler: SamplerKind,
    #[serde(default)]
    pub target: Option<String>,
    #[serde(default)]
    pub erm_file: Option<PathBuf>,
    pub replicates: usize,
    pub seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub params: SamplerParams,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut cfg: Self = serde_json::from_str(&text)?;
        if let Some(f) = &cfg.erm_file {
            if f.is_relative() {
                cfg.erm_file = Some(path.parent().unwrap_or(Path::new(".")).join(f));
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::Config("replicates must be at least 1".into()));
        }
        if self.target.is_some() == self.erm_file.is_some() {
            return Err(Error::Config("give exactly one of target and erm_file".into()));
        }
        Ok(())
    }
}

/// What a command did.
#[derive(Debug, Default)]
pub struct Outcome {
    pub status: i32,
    pub messages: Vec<String>,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    fn say(&mut self, msg: impl Into<String>) {
        self.messages.push(msg.into());
    }

    fn write(&mut self, path: PathBuf, content: &str) -> Result<()> {
        write_new(&path, content)?;
        self.files.push(path);
        Ok(())
    }
}

/// Writes `content` unless a file with different content already exists.
pub fn write_new(path: &Path, content: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    match fs::read(path) {
        Ok(existing) if existing == content.as_bytes() => Ok(()),
        Ok(_) => Err(Error::Io(format!(
            "{} exists with different content; use a fresh output directory",
            path.display()
        ))),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(fs::write(path, content)?),
        Err(e) => Err(e.into()),
    }
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Account(a) => account(a),
        Command::Sample(a) => sample(a),
        Command::Verify(a) => verify(a),
        Command::Attack(a) => attack(a),
        Command::Reproduce(a) => reproduce(a),
    }
}

fn account(a: AccountArgs) -> Result<Outcome> {
    let r = match (a.r, a.p, a.q) {
        (Some(r), None, None) => RBound::new(r)?,
        (None, Some(p), Some(q)) => RBound::from_acceptance(p, q)?,
        _ => return Err(Error::Config("give either --R or both --p and --q".into())),
    };
    let mut out = Outcome::default();
    if a.delta.is_empty() && a.eps.is_empty() && a.out.is_none() {
        return Err(Error::Config("nothing to compute: give --delta, --eps or --out".into()));
    }
    for d in &a.delta {
        let e = eps_of_delta(r, *d)?;
        out.say(format!("{e:.2}"));
        out.say(format!("# R = {} delta = {d:e} eps = {}", r.value(), fmt_float(e)));
    }
    for e in &a.eps {
        let d = delta_of_eps(r, *e)?;
        out.say(format!("{d:.6e}"));
        out.say(format!("# R = {} eps = {e} delta = {}", r.value(), fmt_float(d)));
    }
    if let Some(dir) = a.out {
        let curve = f_r_curve(r, 1000)?;
        let mut csv = String::from("alpha,beta,source\n");
        for (x, y) in curve.vertices() {
            csv.push_str(&format!("{},{},f_R\n", fmt_float(*x), fmt_float(*y)));
        }
        out.write(dir.join("account").join(format!("f_R-{}.csv", r.value())), &csv)?;
    }
    Ok(out)
}

fn sample(a: SampleArgs) -> Result<Outcome> {
    let cfg = a.config.as_deref().map(ExperimentConfig::load).transpose()?;
    let sampler = a
        .sampler
        .or(cfg.as_ref().map(|c| c.sampler))
        .ok_or_else(|| Error::Config("--sampler is required".into()))?;
    let n = a
        .n
        .or(cfg.as_ref().map(|c| c.replicates))
        .ok_or_else(|| Error::Config("--n is required".into()))?;
    if n == 0 {
        return Err(Error::Config("--n must be at least 1".into()));
    }
    let seed = a
        .seed
        .or(cfg.as_ref().map(|c| c.seed))
        .ok_or_else(|| Error::Config("--seed is required".into()))?;
    let base = a
        .out
        .or(cfg.as_ref().and_then(|c| c.out.clone()))
        .unwrap_or_else(|| PathBuf::from("out"));
    let params = cfg.as_ref().map(|c| c.params.clone()).unwrap_or_default();

    let (label, prep) = match (a.target, a.erm) {
        (Some(t), None) => (t.clone(), t.parse::<BuiltinTarget>()?.prepare()?),
        (None, Some(f)) => (stem(&f), Prepared::from_erm(&ErmSpec::from_json_path(&f)?)?),
        _ => match &cfg {
            Some(ExperimentConfig { target: Some(t), .. }) => (t.clone(), t.parse::<BuiltinTarget>()?.prepare()?),
            Some(ExperimentConfig { erm_file: Some(f), .. }) => {
                (stem(f), Prepared::from_erm(&ErmSpec::from_json_path(f)?)?)
            }
            _ => return Err(Error::Config("give --target, --erm or a config".into())),
        },
    };

    let rows = run_sampler(&prep, sampler, &params, n, seed)?;
    let mean = rows.iter().map(|r| r.runtime as f64).sum::<f64>() / rows.len() as f64;
    let mut out = Outcome::default();
    let dir = base.join(format!("sample-seed{seed}"));
    let name = format!("{}-{}.csv", label, serde_json::to_value(sampler)?.as_str().unwrap_or("sampler"));
    out.write(dir.join(name), &rows_csv(&rows))?;
    out.say(format!("{} rows, mean runtime {mean:.4}", rows.len()));
    Ok(out)
}

fn stem(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "erm".into())
}

fn verify(a: VerifyArgs) -> Result<Outcome> {
    let mut out = Outcome::default();
    let seed = match (a.seed, a.fresh_seed) {
        (_, true) => {
            let s: u64 = rand::random();
            out.say(format!("fresh seed {s}"));
            s
        }
        (Some(s), false) => s,
        (None, false) => return Err(Error::Config("--seed is required".into())),
    };
    let reports = run_suite(a.suite, seed)?;
    let dir = a.out.join(format!("verify-seed{seed}"));
    let mut all = String::new();
    for r in &reports {
        out.say(r.line());
        all.push_str(&r.to_json());
        all.push('\n');
    }
    out.write(dir.join("reports.jsonl"), &all)?;
    let failed = reports.iter().filter(|r| !r.pass).count();
    out.say(format!("{} of {} checks passed", reports.len() - failed, reports.len()));
    out.status = if failed == 0 { 0 } else { 1 };
    Ok(out)
}

fn attack(a: AttackArgs) -> Result<Outcome> {
    if a.n == 0 {
        return Err(Error::Config("--n must be at least 1".into()));
    }
    let la = GeometricLaw::new(a.p)?;
    let lb = GeometricLaw::new(a.q)?;
    let ra = replicate(a.seed, a.n, |rng| Ok(geometric_sample(&la, rng)))?;
    let rb = replicate(a.seed.wrapping_add(1), a.n, |rng| Ok(geometric_sample(&lb, rng)))?;
    let rep = attack_tradeoff(&ra, &rb, a.p, a.q)?;
    let mut out = Outcome::default();
    let dir = a.out.join(format!("attack-seed{}", a.seed));
    out.write(dir.join("curves.csv"), &rep.curves_csv())?;
    out.write(dir.join("log_ratio.csv"), &rep.log_ratio_csv())?;
    let summary = serde_json::json!({
        "p": a.p,
        "q": a.q,
        "R": rep.r.value(),
        "n": a.n,
        "seed": a.seed,
        "empirical_gap": rep.empirical_gap,
        "min_slack_vs_f_R": rep.min_slack,
        "max_gap_vs_f_R": rep.max_gap,
    });
    out.write(dir.join("summary.json"), &format!("{summary:#}\n"))?;
    out.say(format!(
        "R = {:.6}, sup |empirical - exact| = {:.4}, max gap to f_R = {:.4}",
        rep.r.value(),
        rep.empirical_gap,
        rep.max_gap
    ));
    Ok(out)
}

fn reproduce(a: ReproduceArgs) -> Result<Outcome> {
    let mut out = Outcome::default();
    let dir = a.out.join("reproduce");
    let rows = reproduce_table1();
    for row in &rows {
        out.say(format!("R = {:<4} delta = {:e}  eps = {:.3}", row.r, row.delta, row.eps));
    }
    out.write(dir.join("table1.csv"), &table1_csv(&rows))?;
    for (q, csv) in figure2_csvs()? {
        out.write(dir.join(format!("figure2_q{q}.csv")), &csv)?;
    }
    Ok(out)
}
