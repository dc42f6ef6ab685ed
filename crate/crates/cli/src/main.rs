//! `renormlab`: command-line front end for the renormalization laboratory.
//!
//! The JSON report goes to stdout and to `<output_dir>/<command>.json`; a short
//! human-readable summary goes to stderr. Exit status is 0 on success, 2 on invalid
//! arguments and 3 when the computation fails.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use renormlab::experiments::{self as exp, ToCsv};
use renormlab::quad_family::{self as qf, ParamFamily, PolynomialFamily, TypePattern};
use renormlab::renorm::{self, DetectParams};
use renormlab::{Config, UnimodalMap64};
use serde::Serialize;
use serde_json::{json, Map, Value};

const SEED_VAR: &str = "RENORMLAB_SEED";

#[derive(Parser)]
#[command(name = "renormlab", version, about = "Renormalization of unimodal interval maps")]
struct Cli {
    /// JSON config file; missing fields take their defaults
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for report files (overrides the config)
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Also write a plot-ready CSV next to the JSON report
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Renormalizability of the quadratic map P_c
    Detect {
        #[arg(long)]
        c: f64,
    },
    /// Renormalization orbit of P_c
    Iterate {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        depth: usize,
    },
    /// Superstable parameter for a period prefix
    Superstable {
        #[arg(long, value_parser = parse_prefix)]
        prefix: Prefix,
    },
    /// Parameter window of a period prefix
    Window {
        #[arg(long, value_parser = parse_prefix)]
        prefix: Prefix,
        /// Defaults to the prefix length
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Feigenbaum point and universal constants of the doubling cascade
    Feigenbaum {
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Length decay of the doubling windows
    Decay {
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Distances between the renormalization orbits of two maps
    Converge {
        #[arg(long, value_parser = MapSpec::from_str)]
        f: MapSpec,
        #[arg(long, value_parser = MapSpec::from_str)]
        g: MapSpec,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Cylinder geometry comparison of two maps of the same type
    Rigidity {
        #[arg(long, value_parser = MapSpec::from_str)]
        f: MapSpec,
        #[arg(long, value_parser = MapSpec::from_str)]
        g: MapSpec,
        #[arg(long, default_value_t = 7)]
        depth: usize,
    },
    /// Lipschitz (l1), separation (l2) and shadowing (l3) experiments
    Lemmas {
        #[arg(long, value_enum)]
        which: Lemma,
        #[arg(long, value_parser = MapSpec::from_str, default_value = "quad:feigenbaum")]
        map: MapSpec,
        /// Renormalization depth (l1)
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Perturbation sizes (l1, l3)
        #[arg(long, value_delimiter = ',')]
        delta: Vec<f64>,
        /// Levels probed (l2)
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5,6")]
        level: Vec<usize>,
        /// Bump directions per level (l2)
        #[arg(long, default_value_t = 8)]
        directions: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Lemma {
    L1,
    L2,
    L3,
}

#[derive(Clone, Debug)]
struct Prefix(Vec<usize>);

fn parse_prefix(s: &str) -> Result<Prefix, String> {
    let periods = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("period {p:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    if periods.iter().any(|&l| l < 2) {
        return Err("periods must be at least 2".into());
    }
    Ok(Prefix(periods))
}

#[derive(Clone, Debug, PartialEq)]
enum Param {
    Value(f64),
    Feigenbaum,
}

impl FromStr for Param {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "feigenbaum" {
            return Ok(Param::Feigenbaum);
        }
        s.parse().map(Param::Value).map_err(|e| format!("parameter {s:?}: {e}"))
    }
}

/// `quad:<c>`, `quad:feigenbaum`, `family:<file.json>:<t>` or
/// `family:<file.json>:feigenbaum`.
#[derive(Clone, Debug)]
enum MapSpec {
    Quad(Param),
    Family(PathBuf, Param),
}

impl FromStr for MapSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if let Some(rest) = s.strip_prefix("quad:") {
            return rest.parse().map(MapSpec::Quad);
        }
        if let Some(rest) = s.strip_prefix("family:") {
            let (path, t) = rest.rsplit_once(':').ok_or("expected family:<file.json>:<t>")?;
            return Ok(MapSpec::Family(PathBuf::from(path), t.parse()?));
        }
        Err(format!("map spec {s:?}: expected quad:<c> or family:<file.json>:<t>"))
    }
}

impl MapSpec {
    fn resolve(&self, cfg: &Config) -> anyhow::Result<(UnimodalMap64, Value)> {
        match self {
            MapSpec::Quad(p) => {
                let c = match p {
                    Param::Value(c) => *c,
                    Param::Feigenbaum => qf::feigenbaum_parameter::<f64>(cfg.feigenbaum_depth, cfg)?.c_star,
                };
                Ok((qf::quadratic(c, cfg)?, json!({"family": "quadratic", "parameter": c})))
            }
            MapSpec::Family(path, p) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let family = PolynomialFamily::from_json(&text)?;
                let t = match p {
                    Param::Value(t) => *t,
                    Param::Feigenbaum => {
                        let [lo, hi] = family.range.unwrap_or([1.0, 2.0]);
                        let d = cfg.feigenbaum_depth;
                        qf::accumulation_point(&family, (lo, hi), &TypePattern::doubling(d), d, cfg)?.c_star
                    }
                };
                let map = family.map_at(t, cfg)?;
                Ok((map, json!({"family": path.display().to_string(), "parameter": t})))
            }
        }
    }
}

/// A finished command: the JSON payload, optional CSV and summary lines.
struct Outcome {
    report: Value,
    csv: Option<String>,
    summary: Vec<(String, String)>,
}

fn to_value<T: Serialize>(v: &T) -> anyhow::Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn load_config(cli: &Cli) -> anyhow::Result<Config> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Config::from_json(&text)?
        }
        None => Config::default(),
    };
    if let Ok(seed) = std::env::var(SEED_VAR) {
        cfg.seed = seed.trim().parse().with_context(|| format!("{SEED_VAR}={seed:?}"))?;
    }
    if let Some(dir) = &cli.output_dir {
        cfg.output_dir = dir.clone();
    }
    Ok(cfg)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Detect { .. } => "detect",
        Command::Iterate { .. } => "iterate",
        Command::Superstable { .. } => "superstable",
        Command::Window { .. } => "window",
        Command::Feigenbaum { .. } => "feigenbaum",
        Command::Decay { .. } => "decay",
        Command::Converge { .. } => "converge",
        Command::Rigidity { .. } => "rigidity",
        Command::Lemmas { which: Lemma::L1, .. } => "lemmas-l1",
        Command::Lemmas { which: Lemma::L2, .. } => "lemmas-l2",
        Command::Lemmas { which: Lemma::L3, .. } => "lemmas-l3",
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.10}")
}

fn run(command: &Command, cfg: &Config) -> anyhow::Result<Outcome> {
    Ok(match command {
        Command::Detect { c } => {
            let f = qf::quadratic(*c, cfg)?;
            let det = renorm::detect(&f, DetectParams::from(cfg))?;
            let report = to_value(&det)?;
            let result = report["result"].as_str().unwrap_or_default().to_string();
            Outcome { report, csv: None, summary: vec![("c".into(), fmt(*c)), ("result".into(), result)] }
        }
        Command::Iterate { c, depth } => {
            let orbit = renorm::iterate(&qf::quadratic(*c, cfg)?, *depth, cfg);
            let summary =
                vec![("depth".into(), orbit.depth().to_string()), ("periods".into(), format!("{:?}", orbit.periods()))];
            Outcome { report: to_value(&orbit)?, csv: None, summary }
        }
        Command::Superstable { prefix } => {
            let s = qf::superstable::<f64>(&prefix.0, None, cfg)?;
            let summary = vec![("c".into(), format!("{:.15}", s.c)), ("residual".into(), format!("{:e}", s.residual))];
            Outcome { report: to_value(&s)?, csv: None, summary }
        }
        Command::Window { prefix, depth } => {
            let depth = depth.unwrap_or(prefix.0.len());
            if depth == 0 || depth > prefix.0.len() {
                bail!(renormlab::Error::InvalidInput(format!(
                    "depth {depth} with a prefix of length {}",
                    prefix.0.len()
                )));
            }
            let pattern = TypePattern::Periods(prefix.0.clone());
            let chain = qf::window_chain(&qf::QuadraticFamily, (1.0, 2.0), &pattern, depth, cfg)?;
            let w = &chain.last().expect("depth >= 1").window;
            let summary = vec![("lo".into(), format!("{:.13}", w.lo)), ("hi".into(), format!("{:.13}", w.hi))];
            let decay = exp::WindowDecayReport {
                windows: chain.iter().map(|l| l.window.clone()).collect(),
                lengths: chain.iter().map(|l| l.window.len()).collect(),
                ratios: chain.windows(2).map(|p| p[1].window.len() / p[0].window.len()).collect(),
                truncated: None,
            };
            Outcome { report: to_value(w)?, csv: Some(decay.to_csv()?), summary }
        }
        Command::Feigenbaum { depth } => {
            let est = qf::feigenbaum_parameter::<f64>(*depth, cfg)?;
            // constants run two levels deeper, at the most accurate c* available, so
            // the last alpha estimate has a reference two levels further on
            let reference = if cfg.feigenbaum_depth > *depth {
                qf::feigenbaum_parameter::<f64>(cfg.feigenbaum_depth, cfg)?.c_star
            } else {
                est.c_star
            };
            let consts = exp::constants((depth + 2).clamp(2, 10), reference, cfg)?;
            let mut summary = vec![("c_star".into(), format!("{:.13}", est.c_star))];
            if let Some(d) = consts.delta_estimates.last() {
                summary.push((format!("delta_{}", d.n), fmt(d.value)));
            }
            if let Some(a) = consts.alpha_estimates.last() {
                summary.push((format!("alpha_{}", a.n), fmt(a.value)));
            }
            if let Some(w) = &est.warning {
                summary.push(("warning".into(), w.clone()));
            }
            let report = json!({
                "c_star": est.c_star,
                "superstable": est.superstable,
                "accelerated": est.accelerated,
                "warning": est.warning,
                "constants": consts,
            });
            Outcome { report, csv: Some(consts.to_csv()?), summary }
        }
        Command::Decay { depth } => {
            let rep = exp::window_decay(*depth, cfg)?;
            let summary = rep.ratios.iter().enumerate().map(|(i, r)| (format!("ratio_{}", i + 2), fmt(*r))).collect();
            Outcome { report: to_value(&rep)?, csv: Some(rep.to_csv()?), summary }
        }
        Command::Converge { f, g, depth } => {
            let (fm, fdesc) = f.resolve(cfg)?;
            let (gm, gdesc) = g.resolve(cfg)?;
            let rep = exp::convergence(&fm, &gm, *depth, cfg)?;
            let mut report = to_value(&rep)?;
            report["f"] = fdesc;
            report["g"] = gdesc;
            let summary = vec![
                ("fitted_rate".into(), format!("{:?}", rep.fitted_rate)),
                ("fit_r2".into(), format!("{:?}", rep.fit_r2)),
                (format!("d_{depth}"), format!("{:e}", rep.distances[*depth])),
            ];
            Outcome { report, csv: Some(rep.to_csv()?), summary }
        }
        Command::Rigidity { f, g, depth } => {
            let (fm, fdesc) = f.resolve(cfg)?;
            let (gm, gdesc) = g.resolve(cfg)?;
            let rep = exp::rigidity_scaling(&fm, &gm, *depth, cfg)?;
            let mut report = to_value(&rep)?;
            report["f"] = fdesc;
            report["g"] = gdesc;
            let summary = rep
                .per_depth
                .iter()
                .map(|l| (format!("spread_{}", l.depth), format!("{:e}", l.max_log_ratio_spread)))
                .collect();
            Outcome { report, csv: Some(rep.to_csv()?), summary }
        }
        Command::Lemmas { which, map, depth, trials, delta, level, directions } => {
            let (f, desc) = map.resolve(cfg)?;
            lemmas(*which, &f, desc, *depth, *trials, delta, level, *directions, cfg)?
        }
    })
}

#[allow(clippy::too_many_arguments)]
fn lemmas(
    which: Lemma,
    f: &UnimodalMap64,
    desc: Value,
    depth: usize,
    trials: usize,
    deltas: &[f64],
    levels: &[usize],
    directions: usize,
    cfg: &Config,
) -> anyhow::Result<Outcome> {
    let mut summary = Vec::new();
    let report = match which {
        Lemma::L1 => {
            let deltas = if deltas.is_empty() { vec![1e-5, 1e-6] } else { deltas.to_vec() };
            let mut reps = Vec::new();
            for &d in &deltas {
                let rep = exp::lipschitz_estimate(f, depth, trials, d, cfg)?;
                summary.push((format!("l_hat(delta={d:e})"), fmt(rep.l_hat)));
                reps.push(rep);
            }
            let comp = exp::composition_probe(trials, 1e-3, cfg)?;
            summary.push(("composition_violations".into(), comp.violations.to_string()));
            json!({"map": desc, "lipschitz": reps, "composition": comp})
        }
        Lemma::L2 => {
            let mut reps = Vec::new();
            for &n in levels {
                let rep = exp::separation(f, n, directions, cfg)?;
                summary.push((format!("eps_hat_{n}"), format!("{:?}", rep.eps_hat)));
                reps.push(rep);
            }
            json!({"map": desc, "separation": reps})
        }
        Lemma::L3 => {
            let deltas = if deltas.is_empty() { vec![1e-3, 1e-4, 1e-5, 1e-6] } else { deltas.to_vec() };
            let mut reps = Vec::new();
            for &d in &deltas {
                let rep = exp::shadow_depth(f, d, trials, cfg)?;
                summary.push((format!("shadow_depth(delta={d:e})"), rep.depth.to_string()));
                reps.push(rep);
            }
            json!({"map": desc, "shadow": reps})
        }
    };
    Ok(Outcome { report, csv: None, summary })
}

/// Report object: payload fields plus `command`, the effective `config` and a
/// `metadata` block that holds everything run-dependent.
fn envelope(name: &str, payload: Value, cfg: &Config) -> anyhow::Result<Value> {
    let mut obj = match payload {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    obj.insert("command".into(), json!(name));
    obj.insert("config".into(), serde_json::to_value(cfg)?);
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    obj.insert("metadata".into(), json!({"timestamp": timestamp, "version": env!("CARGO_PKG_VERSION")}));
    Ok(Value::Object(obj))
}

fn write_outputs(dir: &Path, name: &str, json_text: &str, csv: Option<&str>) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    fs::write(dir.join(format!("{name}.json")), json_text)?;
    if let Some(csv) = csv {
        fs::write(dir.join(format!("{name}.csv")), csv)?;
    }
    Ok(())
}

fn print_summary(name: &str, rows: &[(String, String)]) {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    eprintln!("{name}");
    for (k, v) in rows {
        eprintln!("  {k:<width$}  {v}");
    }
}

fn fail(name: &str, err: &anyhow::Error) -> ExitCode {
    let msg = match err.downcast_ref::<renormlab::Error>() {
        Some(e) => e.to_string(),
        None => format!("{err:#}"),
    };
    let _ = writeln!(std::io::stdout(), "{}", json!({"command": name, "error": msg}));
    eprintln!("{name}: error: {msg}");
    ExitCode::from(3)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let cfg = match load_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("renormlab: {e:#}");
            return ExitCode::from(2);
        }
    };
    let outcome = match run(&cli.command, &cfg) {
        Ok(o) => o,
        Err(e) => return fail(name, &e),
    };
    let result = envelope(name, outcome.report, &cfg).and_then(|report| {
        let text = serde_json::to_string_pretty(&report)?;
        let csv = if cli.csv { outcome.csv.as_deref() } else { None };
        write_outputs(&cfg.output_dir, name, &text, csv)?;
        Ok(text)
    });
    match result {
        Ok(text) => {
            // a closed pipe on stdout is not an error of the computation
            let _ = writeln!(std::io::stdout(), "{text}");
            print_summary(name, &outcome.summary);
            ExitCode::SUCCESS
        }
        Err(e) => fail(name, &e),
    }
}
