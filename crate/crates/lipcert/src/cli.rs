//! Command-line front end: loads networks and input regions, runs
//! certifications, writes JSON reports, and replays the bundled
//! two-neuron reference experiment.

use crate::interval::{HyperBox, Interval};
use crate::lipschitz::{
    certified_radius, lipschitz_enclosure, possible_classes, LipschitzError, LipschitzReport,
};
use crate::maximize::{MaxParams, StopReason};
use crate::network::{load_network, InputRegion, Network, NetworkError};
use clap::{Args, Parser, Subcommand};
use std::fs;
use std::path::{Path, PathBuf};

/// Bundled reference network: two inputs, one ReLU layer of two
/// neurons, two outputs, with an input ball that straddles both
/// activation hyperplanes.
pub const EXP1_NETWORK_JSON: &str = include_str!("../fixtures/exp1_network.json");
pub const EXP1_CENTER: [f64; 2] = [-4.832202221268014242, -7.364287590384273940];
pub const EXP1_RADIUS: f64 = 1e-7;
/// Reference value enclosures for the bundled experiment. Row `k` is
/// recorded at branch-and-bound iteration `k + 2` of the default run
/// (the run converges to a point enclosure at iteration 7).
pub const EXP1_EXPECTED: [(f64, f64); 6] = [
    (0.0, 0.32270569085905976),
    (0.04112101957020187, 0.32270569085905976),
    (0.04112101957020187, 0.32270569085905976),
    (0.04112101957020187, 0.32270569085905976),
    (0.04112101957020187, 0.32270569085905976),
    (0.32270569085905976, 0.32270569085905976),
];
/// Absolute per-endpoint tolerance for the reference comparison.
pub const EXP1_TOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lipschitz(#[from] LipschitzError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("reference trace deviates:\n{0}")]
    ReproMismatch(String),
}

#[derive(Parser, Debug)]
#[command(
    name = "lipcert",
    version,
    about = "Validated local Lipschitz constants for feedforward networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads for parallel box evaluation (fallback: env
    /// LIPCERT_THREADS, then all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enclose the local Lipschitz constant of one output over a region
    Lip {
        /// Network JSON file
        #[arg(long)]
        network: PathBuf,
        #[command(flatten)]
        region: RegionArgs,
        /// Output index to certify
        #[arg(long, default_value_t = 0)]
        output: usize,
        #[command(flatten)]
        params: ParamArgs,
        /// Include the per-iteration trace in the report
        #[arg(long)]
        trace: bool,
        /// Write the JSON report to this path
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Evaluate the network at a point, or enclose it over a region
    Eval {
        /// Network JSON file
        #[arg(long)]
        network: PathBuf,
        /// Input point, comma-separated decimals
        #[arg(
            long,
            allow_hyphen_values = true,
            conflicts_with_all = ["center", "radius", "box_spec"]
        )]
        point: Option<String>,
        #[command(flatten)]
        region: RegionArgs,
    },
    /// Over-approximate the classes reachable over a region
    Classify {
        /// Network JSON file
        #[arg(long)]
        network: PathBuf,
        #[command(flatten)]
        region: RegionArgs,
    },
    /// Certified robustness radius of the predicted class at an input
    Radius {
        /// Network JSON file
        #[arg(long)]
        network: PathBuf,
        /// Input point, comma-separated decimals
        #[arg(long, allow_hyphen_values = true)]
        input: String,
        /// Certification is limited to this ball around the input
        #[arg(long = "search-radius", default_value_t = 1.0)]
        search_radius: f64,
        #[command(flatten)]
        params: ParamArgs,
        /// Write the JSON report to this path
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Replay the bundled reference experiment and check its trace
    ReproExp1 {
        #[command(flatten)]
        params: ParamArgs,
        /// Write the full JSON report to this path
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

/// Input region flags shared by several subcommands: an inf-ball
/// (`--center` + `--radius`) or an explicit box (`--box`).
#[derive(Args, Debug)]
pub struct RegionArgs {
    /// Center of an inf-ball, comma-separated decimals
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<String>,
    /// Radius of the inf-ball around --center
    #[arg(long, requires = "center")]
    pub radius: Option<f64>,
    /// Explicit input box, comma-separated lo:hi pairs (e.g. "0:1,-1:1")
    #[arg(
        long = "box",
        value_name = "BOX",
        allow_hyphen_values = true,
        conflicts_with_all = ["center", "radius"]
    )]
    pub box_spec: Option<String>,
}

impl RegionArgs {
    pub fn to_region(&self) -> Result<InputRegion, CliError> {
        match (&self.center, self.radius, &self.box_spec) {
            (Some(center), Some(radius), None) => {
                if !radius.is_finite() || radius < 0.0 {
                    return Err(CliError::Usage(format!("invalid radius {radius}")));
                }
                Ok(InputRegion::ball(parse_vec(center)?, radius))
            }
            (None, None, Some(spec)) => Ok(InputRegion::Box {
                region: parse_box(spec)?,
                clip: None,
            }),
            _ => Err(CliError::Usage(
                "specify either --center with --radius, or --box".into(),
            )),
        }
    }
}

/// Branch-and-bound budget flags.
#[derive(Args, Debug, Clone, Copy)]
pub struct ParamArgs {
    /// Iteration budget of the branch-and-bound loop
    #[arg(long = "max-iter", default_value_t = MaxParams::default().max_iterations)]
    pub max_iter: usize,
    /// Box budget: bisection is skipped once it would exceed this
    #[arg(long = "max-boxes", default_value_t = MaxParams::default().max_boxes)]
    pub max_boxes: usize,
    /// Stop once the value enclosure is at most this wide
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
}

impl ParamArgs {
    pub fn to_params(&self) -> MaxParams {
        MaxParams {
            max_iterations: self.max_iter,
            max_boxes: self.max_boxes,
            target_width: self.delta,
        }
    }
}

fn parse_vec(spec: &str) -> Result<Vec<f64>, CliError> {
    spec.split(',')
        .map(|s| {
            let v: f64 = s
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("not a decimal number: {s:?}")))?;
            if !v.is_finite() {
                return Err(CliError::Usage(format!("non-finite coordinate: {s:?}")));
            }
            Ok(v)
        })
        .collect()
}

fn parse_box(spec: &str) -> Result<HyperBox, CliError> {
    let coords = spec
        .split(',')
        .map(|pair| {
            let (lo, hi) = pair
                .split_once(':')
                .ok_or_else(|| CliError::Usage(format!("box coordinate {pair:?} is not lo:hi")))?;
            let lo: f64 = lo
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad lower endpoint {lo:?}")))?;
            let hi: f64 = hi
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad upper endpoint {hi:?}")))?;
            if lo.is_nan() || hi.is_nan() || lo > hi {
                return Err(CliError::Usage(format!("inverted box coordinate [{lo}, {hi}]")));
            }
            Ok(Interval::new(lo, hi))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if coords.is_empty() {
        return Err(CliError::Usage("empty box specification".into()));
    }
    Ok(HyperBox::new(coords))
}

fn load(path: &Path) -> Result<Network, CliError> {
    let file = fs::File::open(path)
        .map_err(|e| CliError::Usage(format!("cannot open {}: {e}", path.display())))?;
    Ok(load_network(file)?)
}

fn configure_threads(threads: Option<usize>) {
    let n = threads.or_else(|| {
        std::env::var("LIPCERT_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    });
    if let Some(n) = n.filter(|&n| n > 0) {
        // a second configuration attempt in one process is a no-op
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn stop_name(reason: StopReason) -> &'static str {
    match reason {
        StopReason::IterBudget => "iteration budget",
        StopReason::BoxBudget => "box budget",
        StopReason::WidthReached => "target width reached",
    }
}

fn write_report<T: serde::Serialize>(path: &Path, report: &T) -> Result<(), CliError> {
    let mut json = serde_json::to_string_pretty(report)
        .map_err(|e| CliError::Usage(format!("report serialization failed: {e}")))?;
    json.push('\n');
    Ok(fs::write(path, json)?)
}

fn print_lip_summary(rep: &LipschitzReport, with_trace: bool) {
    println!("value: {}", rep.result.value);
    println!(
        "stopped after {} iterations ({}), {} boxes retained",
        rep.result.iterations,
        stop_name(rep.result.stop_reason),
        rep.result.boxes.len()
    );
    if with_trace {
        for row in &rep.result.trace {
            println!(
                "  iter {:>3}  boxes {:>8}  value {}",
                row.iter, row.boxes_retained, row.value
            );
        }
    }
}

/// Runs the bundled reference configuration with the given budgets.
pub fn repro_exp1(params: &MaxParams) -> Result<LipschitzReport, CliError> {
    let net = load_network(EXP1_NETWORK_JSON.as_bytes())?;
    let region = InputRegion::ball(EXP1_CENTER.to_vec(), EXP1_RADIUS);
    Ok(lipschitz_enclosure(&net, &region, 0, params)?)
}

/// Compares a reference-run trace against [`EXP1_EXPECTED`]; returns
/// one diagnostic line per deviating row.
pub fn check_exp1_trace(rep: &LipschitzReport) -> Vec<String> {
    let mut failures = Vec::new();
    for (k, (lo, hi)) in EXP1_EXPECTED.iter().enumerate() {
        match rep.result.trace.get(k + 1) {
            Some(row) => {
                let lo_ok = (row.value.lo() - lo).abs() <= EXP1_TOL;
                let hi_ok = (row.value.hi() - hi).abs() <= EXP1_TOL;
                if !(lo_ok && hi_ok) {
                    failures.push(format!(
                        "row {k}: got {}, expected [{lo:?}, {hi:?}]",
                        row.value
                    ));
                }
            }
            None => failures.push(format!("row {k}: not reached")),
        }
    }
    failures
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads(cli.threads);
    match cli.command {
        Command::Lip {
            network,
            region,
            output,
            params,
            trace,
            report,
        } => {
            let net = load(&network)?;
            let region = region.to_region()?;
            let mut rep = lipschitz_enclosure(&net, &region, output, &params.to_params())?;
            if !trace {
                rep.result.trace.clear();
            }
            println!("lipschitz enclosure, output {output}");
            print_lip_summary(&rep, trace);
            if let Some(path) = report {
                write_report(&path, &rep)?;
            }
            Ok(())
        }
        Command::Eval {
            network,
            point,
            region,
        } => {
            let net = load(&network)?;
            match point {
                Some(spec) => {
                    let x = parse_vec(&spec)?;
                    for (i, v) in net.eval_real(&x).map_err(LipschitzError::from)?.iter().enumerate() {
                        println!("output {i}: {v:?}");
                    }
                }
                None => {
                    let b = region.to_region()?.to_box();
                    let out = net.eval_interval(&b).map_err(LipschitzError::from)?;
                    for (i, o) in out.iter().enumerate() {
                        println!("output {i}: {o}");
                    }
                }
            }
            Ok(())
        }
        Command::Classify { network, region } => {
            let net = load(&network)?;
            let b = region.to_region()?.to_box();
            let out = net.eval_interval(&b).map_err(LipschitzError::from)?;
            for (i, o) in out.iter().enumerate() {
                println!("output {i}: {o}");
            }
            let classes = possible_classes(&net, &b)?;
            let list: Vec<String> = classes.iter().map(usize::to_string).collect();
            println!("possible classes: {}", list.join(", "));
            Ok(())
        }
        Command::Radius {
            network,
            input,
            search_radius,
            params,
            report,
        } => {
            if !search_radius.is_finite() || search_radius <= 0.0 {
                return Err(CliError::Usage(format!(
                    "invalid search radius {search_radius}"
                )));
            }
            let net = load(&network)?;
            let input = parse_vec(&input)?;
            let rep = certified_radius(&net, &input, search_radius, &params.to_params())?;
            println!("predicted class: {}", rep.predicted_class);
            println!("certified radius: {:?}", rep.certified_radius);
            for c in &rep.competitors {
                println!(
                    "  vs class {}: margin {}  lipschitz {}  radius {:?}",
                    c.class, c.margin, c.lipschitz, c.radius
                );
            }
            let list: Vec<String> = rep.possible_classes.iter().map(usize::to_string).collect();
            println!("classes reachable in search ball: {}", list.join(", "));
            if let Some(path) = report {
                write_report(&path, &rep)?;
            }
            Ok(())
        }
        Command::ReproExp1 { params, report } => {
            let rep = repro_exp1(&params.to_params())?;
            let failures = check_exp1_trace(&rep);
            println!("row  enclosure");
            for (k, _) in EXP1_EXPECTED.iter().enumerate() {
                match rep.result.trace.get(k + 1) {
                    Some(row) => println!("{k:>3}  {}", row.value),
                    None => println!("{k:>3}  (not reached)"),
                }
            }
            println!(
                "final value: {} after {} iterations ({})",
                rep.result.value,
                rep.result.iterations,
                stop_name(rep.result.stop_reason)
            );
            if let Some(path) = report {
                write_report(&path, &rep)?;
            }
            if failures.is_empty() {
                println!("reference trace reproduced within {EXP1_TOL:e}");
                Ok(())
            } else {
                Err(CliError::ReproMismatch(failures.join("\n")))
            }
        }
    }
}
