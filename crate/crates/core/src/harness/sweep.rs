use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::fnv1a64;
use crate::error::Result;
use crate::metrics::{metric_report, MetricReport};
use crate::netsim::{compute_routes, derive_metrics, generate_flows, run_simulation, RoutingTable};
use crate::registry::{GeneratorRegistry, GeneratorSpec, TopologyGenerator};
use crate::topology::Topology;

/// One configuration-replicate row. Absent values serialize as empty cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub config: String,
    pub d_frac: Option<f64>,
    pub replicate: u32,
    /// Seed of the traffic pattern.
    pub seed: u64,
    pub topology_seed: u64,
    pub n_nodes: Option<usize>,
    pub n_edges: Option<usize>,
    pub efficiency_unweighted: Option<f64>,
    pub efficiency_weighted: Option<f64>,
    pub lambda2_unweighted: Option<f64>,
    pub lambda2_weighted: Option<f64>,
    pub avg_edp: Option<f64>,
    pub throughput_bps: Option<f64>,
    pub delay_s: Option<f64>,
    pub jitter_s: Option<f64>,
    pub pdr: Option<f64>,
    pub loss_ratio: Option<f64>,
    pub cv_load: Option<f64>,
    pub jain_index: Option<f64>,
    pub sent: Option<u64>,
    pub delivered: Option<u64>,
    pub dropped_queue: Option<u64>,
    pub dropped_unreachable: Option<u64>,
    pub in_flight: Option<u64>,
    pub error: Option<String>,
}

impl SweepRecord {
    fn empty(job: &Job, replicate: u32, seed: u64, topology_seed: u64) -> Self {
        Self {
            config: job.label.clone(),
            d_frac: job.d_frac,
            replicate,
            seed,
            topology_seed,
            n_nodes: None,
            n_edges: None,
            efficiency_unweighted: None,
            efficiency_weighted: None,
            lambda2_unweighted: None,
            lambda2_weighted: None,
            avg_edp: None,
            throughput_bps: None,
            delay_s: None,
            jitter_s: None,
            pdr: None,
            loss_ratio: None,
            cv_load: None,
            jain_index: None,
            sent: None,
            delivered: None,
            dropped_queue: None,
            dropped_unreachable: None,
            in_flight: None,
            error: None,
        }
    }

    fn set_structure(&mut self, m: &MetricReport) {
        self.n_nodes = Some(m.n_nodes);
        self.n_edges = Some(m.n_edges);
        self.efficiency_unweighted = Some(m.efficiency_unweighted);
        self.efficiency_weighted = Some(m.efficiency_weighted);
        self.lambda2_unweighted = Some(m.lambda2_unweighted);
        self.lambda2_weighted = Some(m.lambda2_weighted);
        self.avg_edp = Some(m.avg_edp);
    }
}

/// A named generator evaluated over every replicate.
pub struct Job {
    pub label: String,
    pub d_frac: Option<f64>,
    pub generator: Box<dyn TopologyGenerator>,
}

impl Job {
    pub fn new(generator: Box<dyn TopologyGenerator>) -> Self {
        Self {
            label: generator.label(),
            d_frac: generator.fractal_dimension(),
            generator,
        }
    }
}

/// `base_seed ^ fnv1a64("{label}#{replicate}")`.
pub fn seed_for(base_seed: u64, label: &str, replicate: u32) -> u64 {
    base_seed ^ fnv1a64(format!("{label}#{replicate}").as_bytes())
}

/// Flow seed shared by every configuration of a baseline replicate.
pub fn flow_seed_for_baselines(base_seed: u64, replicate: u32) -> u64 {
    seed_for(base_seed, "flows", replicate)
}

struct Prepared {
    topo: Topology,
    routes: RoutingTable,
    report: MetricReport,
}

fn prepare(job: &Job, cfg: &ExperimentConfig, topology_seed: u64) -> Result<Prepared> {
    let topo = job.generator.generate(&cfg.site(), topology_seed)?;
    let report = metric_report(
        &topo,
        cfg.capacity.capacity_cap_bps,
        cfg.structural.normalized_laplacian,
    );
    let routes = compute_routes(&topo);
    Ok(Prepared {
        topo,
        routes,
        report,
    })
}

fn simulate_row(
    mut row: SweepRecord,
    prepared: &std::result::Result<Prepared, String>,
    cfg: &ExperimentConfig,
) -> SweepRecord {
    let p = match prepared {
        Ok(p) => p,
        Err(e) => {
            row.error = Some(e.clone());
            return row;
        }
    };
    row.set_structure(&p.report);
    let outcome = generate_flows(p.topo.n_nodes(), &cfg.traffic, row.seed).and_then(|flows| {
        let result = run_simulation(&p.topo, &flows, &p.routes, &cfg.sim)?;
        derive_metrics(&result, &flows, cfg.sim.duration_s)
    });
    match outcome {
        Ok(q) => {
            row.throughput_bps = Some(q.throughput_bps);
            row.delay_s = q.delay_s;
            row.jitter_s = q.jitter_s;
            row.pdr = Some(q.pdr);
            row.loss_ratio = Some(q.loss_ratio);
            row.cv_load = q.cv_load;
            row.jain_index = q.jain_index;
            row.sent = Some(q.sent);
            row.delivered = Some(q.delivered);
            row.dropped_queue = Some(q.dropped_queue);
            row.dropped_unreachable = Some(q.dropped_unreachable);
            row.in_flight = Some(q.in_flight);
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Evaluate a single row without any caching.
pub fn evaluate(
    job: &Job,
    cfg: &ExperimentConfig,
    replicate: u32,
    topology_seed: u64,
    flow_seed: u64,
) -> SweepRecord {
    let row = SweepRecord::empty(job, replicate, flow_seed, topology_seed);
    let prepared = prepare(job, cfg, topology_seed).map_err(|e| e.to_string());
    simulate_row(row, &prepared, cfg)
}

/// Evaluate every job over `cfg.replicates` replicates. `seeds(label, r)`
/// returns `(topology_seed, flow_seed)`. Deterministic generators are built
/// and measured once per job; rows come back ordered by (job, replicate).
pub fn run_configurations(
    cfg: &ExperimentConfig,
    jobs: &[Job],
    seeds: &(dyn Fn(&str, u32) -> (u64, u64) + Sync),
) -> Vec<SweepRecord> {
    let reps = cfg.replicates;
    // (job, replicate used for the topology seed); deterministic jobs use replicate 0.
    let mut keys = Vec::new();
    let mut slot = Vec::with_capacity(jobs.len());
    for (j, job) in jobs.iter().enumerate() {
        let first = keys.len();
        if job.generator.is_stochastic() {
            keys.extend((0..reps).map(|r| (j, r)));
        } else {
            keys.push((j, 0));
        }
        slot.push(first);
    }
    let prepared: Vec<std::result::Result<Prepared, String>> = keys
        .par_iter()
        .map(|&(j, r)| {
            let (topo_seed, _) = seeds(&jobs[j].label, r);
            prepare(&jobs[j], cfg, topo_seed).map_err(|e| e.to_string())
        })
        .collect();

    let tasks: Vec<(usize, u32)> = (0..jobs.len())
        .flat_map(|j| (0..reps).map(move |r| (j, r)))
        .collect();
    tasks
        .par_iter()
        .map(|&(j, r)| {
            let job = &jobs[j];
            let (topo_seed, flow_seed) = seeds(&job.label, r);
            let stochastic = job.generator.is_stochastic();
            let p = &prepared[slot[j] + if stochastic { r as usize } else { 0 }];
            let topo_seed = if stochastic { topo_seed } else { seeds(&job.label, 0).0 };
            simulate_row(SweepRecord::empty(job, r, flow_seed, topo_seed), p, cfg)
        })
        .collect()
}

/// Fractal layouts at every `cfg.d_values`, traffic seeded per (dimension, replicate).
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let registry = GeneratorRegistry::standard();
    let jobs = cfg
        .d_values
        .iter()
        .map(|&d| registry.create(&GeneratorSpec::fractal(d)).map(Job::new))
        .collect::<Result<Vec<_>>>()?;
    let base = cfg.base_seed;
    Ok(run_configurations(cfg, &jobs, &|label, r| {
        (base, seed_for(base, label, r))
    }))
}

/// Every generator in `cfg.baselines` under one shared traffic pattern per replicate.
pub fn run_baselines(cfg: &ExperimentConfig) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let registry = GeneratorRegistry::standard();
    let jobs = cfg
        .baselines
        .iter()
        .map(|spec| registry.create(spec).map(Job::new))
        .collect::<Result<Vec<_>>>()?;
    let base = cfg.base_seed;
    Ok(run_configurations(cfg, &jobs, &|label, r| {
        (seed_for(base, label, r), flow_seed_for_baselines(base, r))
    }))
}
