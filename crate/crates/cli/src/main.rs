use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use partop::expr::evaluate;
use partop::metric::{cauchy_limit, CauchyOutcome, MetricKind};
use partop::pbij::{enumerate_all, symmetric_inverse_order};
use partop::sequence::SequenceSpec;
use partop::topo::{metric_convergence_agrees, paired_topology, Agreement, TopologyKind};
use partop::verify::{self, Bounds, Suite, MAX_N, MAX_TRIPLE_N, MAX_Y};
use partop::{GroundSet, PartialBijection};

#[derive(Parser)]
#[command(
    name = "partop",
    version,
    about = "Exact checks for partial bijections and their topologies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count the partial bijections of an n-point set.
    Enumerate {
        n: u32,
        /// Print every element in canonical order.
        #[arg(long)]
        list: bool,
    },
    /// Run verification suites.
    #[command(after_help = format!(
        "Suites: {}, all.\nBounds: --n <= {MAX_N} (triple-quantified checks stop at {MAX_TRIPLE_N}, the open-map sweep at 4), --y-size <= {MAX_Y}.\nDefaults: n = 3 for triples, n = 4 for pairs; quotient sweeps use the sizes of each check.",
        Suite::ALL.map(|s| s.name()).join(", ")
    ))]
    Verify {
        /// Suite name, or `all`.
        #[arg(default_value = "all")]
        suite_name: String,
        #[arg(long = "suite")]
        suite: Option<String>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        y_size: Option<u32>,
        #[arg(long)]
        x_size: Option<u32>,
        /// Write the JSON report here (`-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
        /// Print per-suite wall time to stderr.
        #[arg(long)]
        timing: bool,
    },
    /// Evaluate an expression such as `rho({}, {0->0})`.
    Eval {
        expression: String,
        /// Read partial bijections over {0..n-1} instead of N.
        #[arg(long)]
        n: Option<u32>,
    },
    /// Convergence verdicts for a sequence spec.
    Converge {
        #[arg(long)]
        spec: PathBuf,
        /// tau1, tau2 or taupp; repeatable.
        #[arg(long)]
        topology: Vec<String>,
        /// rho, rho* or d; repeatable.
        #[arg(long)]
        metric: Vec<String>,
        /// Candidate limit; defaults to the Cauchy limit, or 1_0 when there is none.
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Check,
}

impl From<partop::Error> for Failure {
    fn from(e: partop::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn write_json(path: &PathBuf, text: &str) -> Result<(), Failure> {
    if path.as_os_str() == "-" {
        print!("{text}");
        Ok(())
    } else {
        std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }
}

fn enumerate(n: u32, list: bool) -> Result<(), Failure> {
    let all = enumerate_all(n)?;
    debug_assert_eq!(all.len() as u64, symmetric_inverse_order(n));
    println!("{}", all.len());
    if list {
        for f in all {
            println!("{f}");
        }
    }
    Ok(())
}

fn run_verify(name: &str, bounds: Bounds, json: Option<PathBuf>, timing: bool) -> Result<(), Failure> {
    let suites = Suite::parse_selection(name)?;
    bounds.validate()?;
    let mut reports = Vec::new();
    for s in suites {
        let start = Instant::now();
        reports.push(verify::run_suite(s, &bounds)?);
        if timing {
            eprintln!("{s}: {:.2} s", start.elapsed().as_secs_f64());
        }
    }
    let report = verify::Report::assemble(bounds, reports);
    match &json {
        Some(path) => write_json(path, &report.to_json())?,
        None => print!("{}", report.summary()),
    }
    if json.as_ref().is_some_and(|p| p.as_os_str() != "-") {
        print!("{}", report.summary());
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn pairs(topologies: &[String], metrics: &[String]) -> Result<Vec<MetricKind>, Failure> {
    let mut out = Vec::new();
    for t in topologies {
        out.push(match t.parse::<TopologyKind>()? {
            TopologyKind::Tau1 => MetricKind::Rho,
            TopologyKind::Tau2 => MetricKind::RhoStar,
            TopologyKind::TauPP => MetricKind::DMetric,
            TopologyKind::Tau0 => return Err(Failure::Usage("tau0 has no metric counterpart".into())),
        });
    }
    for m in metrics {
        let m: MetricKind = m.parse()?;
        paired_topology(m)?;
        out.push(m);
    }
    if out.is_empty() {
        out = vec![MetricKind::Rho, MetricKind::RhoStar, MetricKind::DMetric];
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn converge(
    spec: PathBuf,
    topologies: Vec<String>,
    metrics: Vec<String>,
    target: Option<String>,
    json: Option<PathBuf>,
) -> Result<(), Failure> {
    let seq = SequenceSpec::from_file(&spec)?;
    seq.validate()?;
    let target = target
        .map(|t| PartialBijection::parse(&t, GroundSet::Naturals))
        .transpose()?;
    let mut rows: Vec<(Option<CauchyOutcome>, Agreement)> = Vec::new();
    for metric in pairs(&topologies, &metrics)? {
        let limit = if seq.is_certified() {
            Some(cauchy_limit(&seq, metric)?)
        } else {
            None
        };
        let f = match (&target, limit.as_ref().and_then(CauchyOutcome::limit)) {
            (Some(t), _) => t.clone(),
            (None, Some(l)) => l.clone(),
            (None, None) => PartialBijection::empty(GroundSet::Naturals),
        };
        rows.push((limit, metric_convergence_agrees(&seq, &f, metric)?));
    }
    let agree = rows.iter().all(|(_, a)| a.agrees);
    if let Some(path) = &json {
        let value = serde_json::json!({
            "schema": verify::SCHEMA,
            "spec": seq.label(),
            "agree": agree,
            "verdicts": rows.iter().map(|(limit, a)| serde_json::json!({
                "target": target_of(limit, &target),
                "cauchy": limit,
                "agreement": a,
            })).collect::<Vec<_>>(),
        });
        write_json(
            path,
            &(serde_json::to_string_pretty(&value).expect("verdicts serialize") + "\n"),
        )?;
    } else {
        println!("{}", seq.label());
        for (limit, a) in &rows {
            let cauchy = match limit {
                Some(CauchyOutcome::Limit(l)) => format!("Cauchy with limit {l}"),
                Some(CauchyOutcome::NotCauchy(w)) => format!("not Cauchy, witness x = {}", w.point),
                None => "Cauchy status undetermined".into(),
            };
            println!(
                "  {}/{}: target {}: {} {}; {} {}; {cauchy}; agree: {}",
                a.topology,
                a.metric,
                target_of(limit, &target),
                a.topology,
                a.topological,
                a.metric,
                a.metric_verdict,
                a.agrees
            );
        }
    }
    if agree {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn target_of(limit: &Option<CauchyOutcome>, target: &Option<PartialBijection>) -> String {
    match (target, limit.as_ref().and_then(CauchyOutcome::limit)) {
        (Some(t), _) => t.to_string(),
        (None, Some(l)) => l.to_string(),
        (None, None) => PartialBijection::empty(GroundSet::Naturals).to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Enumerate { n, list } => enumerate(n, list),
        Command::Verify {
            suite_name,
            suite,
            n,
            y_size,
            x_size,
            json,
            timing,
        } => run_verify(
            suite.as_deref().unwrap_or(&suite_name),
            Bounds { n, y_size, x_size },
            json,
            timing,
        ),
        Command::Eval { expression, n } => {
            let ground = n.map_or(GroundSet::Naturals, GroundSet::Finite);
            evaluate(&expression, ground)
                .map(|v| println!("{v}"))
                .map_err(Failure::from)
        }
        Command::Converge {
            spec,
            topology,
            metric,
            target,
            json,
        } => converge(spec, topology, metric, target, json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
