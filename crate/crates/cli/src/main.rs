use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use fractal_mesh::boxcount::{dyadic_ladder, estimate_dimension, DEFAULT_RUNGS};
use fractal_mesh::fractal::{generate_points, FractalConfig, PointSet};
use fractal_mesh::harness::{
    correlate, read_records, run_baselines, run_boxcount_validation, run_sweep, summarize,
    write_correlation, write_records, write_summary, ExperimentConfig,
};
use fractal_mesh::metrics::metric_report;
use fractal_mesh::netsim::{
    compute_routes, derive_metrics, generate_flows, run_simulation_timed, SimConfig, TrafficSpec,
    DESK_RATE_BPS, TESTBED_RATE_BPS,
};
use fractal_mesh::registry::{GeneratorRegistry, Site};
use fractal_mesh::topology::{build_radius_graph, place_points, CapacityModel, Topology};

#[derive(Parser)]
#[command(name = "fmesh", version, about = "Fractal-layout wireless mesh toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate fractal points in the unit square.
    Generate {
        #[arg(long)]
        d: f64,
        #[arg(long, default_value_t = 85)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Place a point set in the deployment area and connect nodes within range.
    Build {
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value_t = 250.0)]
        radius: f64,
        #[arg(long, default_value_t = 500.0)]
        area: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a topology from a generator selector such as `er` or `fractal:d=6.5`.
    Baseline {
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 85)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Structural metrics of a topology.
    Metrics {
        #[arg(long)]
        topo: PathBuf,
        /// Report the capacity-weighted variant as the headline values.
        #[arg(long)]
        weighted: bool,
        #[arg(long)]
        normalized_laplacian: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Box-counting dimension of a point set.
    Boxcount {
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RUNGS)]
        ladder_rungs: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate random CBR traffic over a topology.
    Simulate {
        #[arg(long)]
        topo: PathBuf,
        #[arg(long, default_value_t = 100)]
        flows: usize,
        #[arg(long, default_value_t = DESK_RATE_BPS)]
        rate_bps: f64,
        /// Use the original testbed per-flow rate instead of --rate-bps.
        #[arg(long)]
        testbed_rate: bool,
        #[arg(long, default_value_t = 50.0)]
        duration: f64,
        #[arg(long, default_value_t = 100)]
        queue: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fractal-dimension sweep, one CSV row per (dimension, replicate).
    Sweep(ExperimentArgs),
    /// Baseline comparison under shared traffic per replicate.
    Baselines(ExperimentArgs),
    /// Pearson correlation matrix over columns of a results CSV.
    Correlate {
        #[arg(long)]
        results: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "throughput,pdr,delay,jitter")]
        metrics: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Box-counting estimates of large generated point sets.
    ValidateBoxcount {
        #[arg(long, value_delimiter = ',', default_value = "1,1.5,2,3,5,7,9")]
        d: Vec<f64>,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    /// JSON experiment configuration; omitted fields take defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    replicates: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    d: Option<Vec<f64>>,
    #[arg(long)]
    rate_bps: Option<f64>,
    #[arg(long)]
    testbed_rate: bool,
    #[arg(long)]
    duration: Option<f64>,
    #[arg(long)]
    flows: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    /// Companion CSV with per-configuration means and 95% intervals.
    #[arg(long)]
    summary: Option<PathBuf>,
}

impl ExperimentArgs {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::from_json(&fs::read_to_string(p).with_context(|| p.display().to_string())?)?,
            None => ExperimentConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.base_seed = s;
        }
        if let Some(r) = self.replicates {
            cfg.replicates = r;
        }
        if let Some(d) = &self.d {
            cfg.d_values = d.clone();
        }
        if let Some(r) = self.rate_bps {
            cfg.traffic.rate_bps = r;
        }
        if self.testbed_rate {
            cfg.traffic.rate_bps = TESTBED_RATE_BPS;
        }
        if let Some(d) = self.duration {
            cfg.sim.duration_s = d;
        }
        if let Some(f) = self.flows {
            cfg.traffic.n_flows = f;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json<T: Serialize>(out: &Option<PathBuf>, value: &T) -> Result<()> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    serde_json::from_reader(BufReader::new(file))
        .with_context(|| format!("parsing {}", path.display()))
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Generate { d, n, out } => {
            write_json(&out, &generate_points(&FractalConfig::new(n, d)?)?)?;
        }
        Command::Build {
            points,
            radius,
            area,
            out,
        } => {
            let ps: PointSet = read_json(&points)?;
            let positions = place_points(&ps, area)?;
            let mut topo = build_radius_graph(&positions, area, radius, &CapacityModel::default())?;
            topo.meta.generator = "fractal".into();
            topo.meta.params.insert("d_frac".into(), ps.d_frac.into());
            write_json(&out, &topo)?;
        }
        Command::Baseline {
            model,
            seed,
            n,
            out,
        } => {
            let generator = GeneratorRegistry::standard().create_from_str(&model)?;
            let site = Site {
                n_nodes: n,
                ..Default::default()
            };
            write_json(&out, &generator.generate(&site, seed)?)?;
        }
        Command::Metrics {
            topo,
            weighted,
            normalized_laplacian,
            out,
        } => {
            let t: Topology = read_json(&topo)?;
            t.validate()?;
            let cap = CapacityModel::default().capacity_cap_bps;
            let r = metric_report(&t, cap, normalized_laplacian);
            let mut v = serde_json::to_value(r)?;
            let (eff, l2) = if weighted {
                (r.efficiency_weighted, r.lambda2_weighted)
            } else {
                (r.efficiency_unweighted, r.lambda2_unweighted)
            };
            v["weighted"] = weighted.into();
            v["normalized_laplacian"] = normalized_laplacian.into();
            v["efficiency"] = eff.into();
            v["lambda2"] = l2.into();
            write_json(&out, &v)?;
        }
        Command::Boxcount {
            points,
            ladder_rungs,
            out,
        } => {
            let ps: PointSet = read_json(&points)?;
            let est = estimate_dimension(&ps.points, &dyadic_ladder(&ps.points, ladder_rungs))?;
            let mut v = serde_json::to_value(est)?;
            v["d_frac"] = ps.d_frac.into();
            write_json(&out, &v)?;
        }
        Command::Simulate {
            topo,
            flows,
            rate_bps,
            testbed_rate,
            duration,
            queue,
            seed,
            out,
        } => {
            let t: Topology = read_json(&topo)?;
            t.validate()?;
            let traffic = TrafficSpec {
                n_flows: flows,
                rate_bps: if testbed_rate { TESTBED_RATE_BPS } else { rate_bps },
                ..Default::default()
            };
            let cfg = SimConfig {
                duration_s: duration,
                queue_capacity_pkts: queue,
                seed,
                ..Default::default()
            };
            let specs = generate_flows(t.n_nodes(), &traffic, seed)?;
            let routes = compute_routes(&t);
            let (result, wall) = run_simulation_timed(&t, &specs, &routes, &cfg)?;
            let qos = derive_metrics(&result, &specs, duration)?;
            let per_flow: Vec<_> = specs
                .iter()
                .zip(&result.flows)
                .map(|(spec, stats)| json!({ "spec": spec, "stats": stats }))
                .collect();
            write_json(
                &out,
                &json!({
                    "config": cfg,
                    "traffic": traffic,
                    "flows": per_flow,
                    "nodes": result.nodes,
                    "qos": qos,
                    "events": result.events,
                    "wall_time_s": wall.as_secs_f64(),
                }),
            )?;
        }
        Command::Sweep(args) => run_experiment(&args, run_sweep)?,
        Command::Baselines(args) => run_experiment(&args, run_baselines)?,
        Command::Correlate {
            results,
            metrics,
            out,
        } => {
            let file = File::open(&results).with_context(|| results.display().to_string())?;
            let records = read_records(BufReader::new(file))?;
            let names: Vec<&str> = metrics.iter().map(String::as_str).collect();
            let m = correlate(&records, &names)?;
            write_correlation(sink(&out)?, &m)?;
        }
        Command::ValidateBoxcount { d, n, out } => {
            let rows = run_boxcount_validation(&d, n)?;
            let mut w = csv::Writer::from_writer(sink(&out)?);
            for r in &rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn run_experiment(
    args: &ExperimentArgs,
    run: fn(&ExperimentConfig) -> fractal_mesh::Result<Vec<fractal_mesh::harness::SweepRecord>>,
) -> Result<()> {
    let cfg = args.config()?;
    let records = run(&cfg)?;
    if records.is_empty() {
        bail!("experiment produced no rows");
    }
    write_records(sink(&Some(args.out.clone()))?, &records)?;
    if let Some(path) = &args.summary {
        write_summary(sink(&Some(path.clone()))?, &summarize(&records))?;
    }
    let failed = records.iter().filter(|r| r.error.is_some()).count();
    eprintln!("{} rows written to {} ({failed} with errors)", records.len(), args.out.display());
    Ok(())
}
