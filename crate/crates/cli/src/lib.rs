//! Command line front end.

pub mod falsify;
pub mod figure;

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::time::Duration;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use mdm_core::bounds::StrategyRegistry;
use mdm_core::cases::CaseRegistry;
use mdm_core::scene::{self, ConfigPoint, ParamBox};
use mdm_core::search::{self, Reason, SearchConfig};
use mdm_core::steiner;
use mdm_core::{IPoint, Interval, Pt};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "mdm", version, about = "Certified computations for the maximal distance minimizer of a rectangle")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Branch-and-bound over the parameter space, writing a certificate.
    Search {
        /// Threshold length; defaults to the lower end of L(p0).
        #[arg(long)]
        l0: Option<f64>,
        #[arg(long, default_value_t = 4)]
        depth: u32,
        /// Wall clock budget such as `30s` or `2h`.
        #[arg(long, value_parser = humantime::parse_duration)]
        time_budget: Option<Duration>,
        #[arg(long, env = "MDM_THREADS", default_value_t = 1)]
        threads: usize,
        /// Root box as 12 comma separated numbers: min,max for x, y, alpha, xi1, xi2, xi.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        region: Option<Vec<f64>>,
        #[arg(long, default_value = "interval")]
        strategy: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the case analysis near the reference configuration.
    VerifyCases,
    /// Steiner tree bounds for 2 to 4 points given as `x,y`.
    Steiner {
        /// Points such as `0,0 1,0 1,1`
        #[arg(required = true, num_args = 1.., allow_negative_numbers = true)]
        points: Vec<String>,
    },
    /// Evaluates L, C and the scene at one configuration.
    Eval {
        /// x y alpha xi1 xi2 xi
        #[arg(
            required = true,
            num_args = 6,
            value_names = ["X", "Y", "ALPHA", "XI1", "XI2", "XI"],
            allow_negative_numbers = true
        )]
        p: Vec<f64>,
    },
    /// Random sampling for configurations beating L0 outside the target box.
    Falsify {
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Independently re-checks a certificate.
    Replay {
        /// Certificate written by `search --out`
        path: PathBuf,
        /// Threshold length; defaults to the lower end of L(p0)
        #[arg(long)]
        l0: Option<f64>,
    },
    /// Draws the minimizer of a rectangle as SVG.
    Figure {
        #[arg(long, default_value_t = 16.0)]
        width: f64,
        #[arg(long, default_value_t = 9.0)]
        height: f64,
        #[arg(long, default_value_t = 0.2)]
        r: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// `x` with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..=12).contains(&exp) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

fn enclosure12(i: Interval) -> String {
    format!("[{}, {}]", sig12(i.lo()), sig12(i.hi()))
}

fn point12(p: IPoint) -> String {
    format!("({}, {})", sig12(p.x.mid()), sig12(p.y.mid()))
}

/// Parses `args` (program name first) and runs the command, writing to `out`.
pub fn run_from<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

pub fn run(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Search { l0, depth, time_budget, threads, region, strategy, out: path } => {
            cmd_search(l0, depth, time_budget, threads, region, &strategy, path, out)
        }
        Command::VerifyCases => cmd_verify_cases(out),
        Command::Steiner { points } => cmd_steiner(&points, out),
        Command::Eval { p } => cmd_eval(&p, out),
        Command::Falsify { samples, seed } => {
            let report = falsify::falsify(samples, seed)?;
            write!(out, "{report}")?;
            Ok(if report.violations.is_empty() { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Replay { path, l0 } => cmd_replay(&path, l0, out),
        Command::Figure { width, height, r, out: path } => {
            let fig = figure::build_figure(figure::FigureSpec { width, height, r })?;
            let svg = figure::render_svg(&fig);
            match path {
                Some(p) => {
                    std::fs::write(&p, svg).with_context(|| format!("writing {}", p.display()))?;
                    writeln!(out, "wrote {} segments to {}", fig.segments.len(), p.display())?;
                }
                None => out.write_all(svg.as_bytes())?,
            }
            Ok(EXIT_OK)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    l0: Option<f64>,
    depth: u32,
    time_budget: Option<Duration>,
    threads: usize,
    region: Option<Vec<f64>>,
    strategy: &str,
    path: Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<i32> {
    let l0 = match l0 {
        Some(v) => v,
        None => search::reference_l0()?,
    };
    let root = match region {
        Some(v) => {
            if v.len() != 12 {
                writeln!(out, "error: --region needs 12 numbers, got {}", v.len())?;
                return Ok(EXIT_USAGE);
            }
            let ranges: [(f64, f64); 6] = std::array::from_fn(|k| (v[2 * k], v[2 * k + 1]));
            ParamBox::snapped(ranges)?
        }
        None => ParamBox::parameter_space(),
    };
    let registry = StrategyRegistry::default();
    let strategy = registry
        .get(strategy)
        .ok_or_else(|| anyhow!("unknown strategy {strategy}; known: {}", registry.names().join(", ")))?;
    let mut cfg = SearchConfig::new(l0, depth, root);
    cfg.time_budget = time_budget;
    cfg.workers = threads;
    cfg.strategy = strategy;
    let summary = search::run_search(&cfg)?;

    if let Some(p) = &path {
        let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
        let mut w = BufWriter::new(f);
        search::write_certificate(&summary.records, &mut w)?;
        w.flush()?;
    }
    writeln!(out, "l0 {l0}")?;
    if summary.root_clamped {
        writeln!(out, "root clamped to the parameter space")?;
    }
    for r in Reason::ALL {
        writeln!(out, "{} {}", r, summary.count(r))?;
    }
    writeln!(out, "records {}", summary.records.len())?;
    writeln!(out, "max_depth {}", summary.max_depth)?;
    writeln!(out, "wall_seconds {}", summary.wall.as_secs_f64())?;
    writeln!(out, "digest {}", summary.digest())?;
    if summary.success() {
        writeln!(out, "SUCCESS")?;
        Ok(EXIT_OK)
    } else {
        writeln!(out, "INCOMPLETE: {} exhausted leaves", summary.count(Reason::BudgetExhausted))?;
        Ok(EXIT_FAILED)
    }
}

fn cmd_verify_cases(out: &mut dyn Write) -> Result<i32> {
    let mut ok = true;
    for (id, r) in CaseRegistry::default().run_all() {
        match r {
            Ok(rep) => writeln!(out, "{rep} PASS")?,
            Err(e) => {
                ok = false;
                writeln!(out, "{id} - {e} FAIL")?;
            }
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

fn parse_point(s: &str) -> Result<Pt> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| anyhow!("point {s:?} is not of the form x,y"))?;
    Ok(Pt::new(a.trim().parse()?, b.trim().parse()?))
}

fn cmd_steiner(points: &[String], out: &mut dyn Write) -> Result<i32> {
    let pts = points.iter().map(|s| parse_point(s)).collect::<Result<Vec<_>>>()?;
    let ip: Vec<IPoint> = pts.iter().map(|p| IPoint::point(p.x, p.y)).collect();
    let b = steiner::melzak_lower_bound(&ip)?;
    writeln!(out, "lower {}", b.lower)?;
    writeln!(out, "upper {}", b.upper)?;
    writeln!(out, "witness {}", b.witness)?;
    writeln!(out, "witness_valid {}", b.witness_valid)?;
    match steiner::oracle_smt_length(&pts, 20_000) {
        Ok(v) => writeln!(out, "oracle {v}")?,
        Err(e) => writeln!(out, "oracle unavailable: {e}")?,
    }
    Ok(EXIT_OK)
}

fn cmd_eval(p: &[f64], out: &mut dyn Write) -> Result<i32> {
    let v: [f64; 6] = p.try_into().map_err(|_| anyhow!("expected 6 numbers"))?;
    let cp = ConfigPoint::from_f64(v);
    if let Err(e) = cp.check_in_space() {
        writeln!(out, "error: {e}")?;
        return Ok(EXIT_USAGE);
    }
    if v[0] * v[0] + v[1] * v[1] < 4.0 - 1e-9 {
        writeln!(out, "warning: unobtainable region (x^2 + y^2 < 4)")?;
    }
    let total = scene::total_length(&cp)?;
    let s = scene::derive_scene(&cp)?;
    writeln!(out, "L {}", enclosure12(total.length))?;
    writeln!(out, "C {}", enclosure12(total.curve))?;
    writeln!(
        out,
        "steiner {} {}",
        sig12(total.steiner.lower),
        enclosure12(total.steiner.upper_enclosure)
    )?;
    writeln!(out, "witness {}", total.steiner.witness)?;
    writeln!(out, "l1 {}", enclosure12(s.l1))?;
    writeln!(out, "l2 {}", enclosure12(s.l2))?;
    for (name, pt) in [
        ("Z1", s.z1),
        ("W1", s.w1),
        ("V", s.v),
        ("W2", s.w2),
        ("Z2", s.z2),
        ("Q1", s.q1),
        ("Q2", s.q2),
        ("Q", s.q),
    ] {
        writeln!(out, "{name} {}", point12(pt))?;
    }
    Ok(EXIT_OK)
}

fn cmd_replay(path: &PathBuf, l0: Option<f64>, out: &mut dyn Write) -> Result<i32> {
    let l0 = match l0 {
        Some(v) => v,
        None => search::reference_l0()?,
    };
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let records = match search::read_certificate(BufReader::new(f)) {
        Ok(r) => r,
        Err(e) => {
            writeln!(out, "FAIL: {e}")?;
            return Ok(EXIT_FAILED);
        }
    };
    match search::replay_certificate(&records, l0) {
        Ok(rep) => {
            writeln!(out, "records {}", rep.records)?;
            writeln!(out, "leaves {}", rep.leaves)?;
            writeln!(out, "exhausted {}", rep.exhausted)?;
            writeln!(out, "leaf_volume {}", rep.leaf_volume)?;
            writeln!(out, "root_volume {}", rep.root_volume)?;
            writeln!(out, "digest {}", search::certificate_digest(&records))?;
            if !rep.complete() {
                writeln!(out, "proof incomplete: {} exhausted leaves", rep.exhausted)?;
            }
            writeln!(out, "PASS")?;
            Ok(EXIT_OK)
        }
        Err(e) => {
            writeln!(out, "FAIL: {e}")?;
            Ok(EXIT_FAILED)
        }
    }
}

