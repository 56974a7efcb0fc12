//! Seeded trials, metrics, benchmark aggregation and CSV I/O.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::scenario::Scenario;
use super::trace::Trace;
use crate::error::{Error, Result};
use crate::planner::{Algorithm, PlanReport, Planner, PlannerConfig, Status};

/// One CSV row. Field order is the column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialMetrics {
    pub planner: Algorithm,
    pub world: String,
    pub seed: u64,
    pub batch_size: usize,
    pub t_init_ms: Option<f64>,
    pub c_init: Option<f64>,
    pub t_best_ms: Option<f64>,
    pub c_best: Option<f64>,
    pub n_collision_checks: u64,
    pub n_lazy_pops_a: u64,
    pub n_lazy_pops_b: u64,
    pub n_edge_pops: u64,
    pub n_samples: u64,
    pub n_repair_events: u64,
    pub repair_footprint_total: u64,
    pub status: Status,
}

pub const CSV_COLUMNS: [&str; 16] = [
    "planner",
    "world",
    "seed",
    "batch_size",
    "t_init_ms",
    "c_init",
    "t_best_ms",
    "c_best",
    "n_collision_checks",
    "n_lazy_pops_a",
    "n_lazy_pops_b",
    "n_edge_pops",
    "n_samples",
    "n_repair_events",
    "repair_footprint_total",
    "status",
];

impl TrialMetrics {
    pub fn from_report(
        planner: Algorithm,
        world: &str,
        seed: u64,
        batch_size: usize,
        report: &PlanReport,
    ) -> Self {
        let first = report.first();
        let best = report.best();
        let c = &report.counters;
        TrialMetrics {
            planner,
            world: world.to_string(),
            seed,
            batch_size,
            t_init_ms: first.map(|s| s.found_at_ms),
            c_init: first.map(|s| s.cost),
            t_best_ms: best.map(|s| s.found_at_ms),
            c_best: best.map(|s| s.cost),
            n_collision_checks: c.collision_checks,
            n_lazy_pops_a: c.lazy_pops[0],
            n_lazy_pops_b: c.lazy_pops[1],
            n_edge_pops: c.edge_pops,
            n_samples: c.samples,
            n_repair_events: c.repair_events,
            repair_footprint_total: c.repair_footprint,
            status: report.status,
        }
    }

    pub fn n_lazy_pops(&self) -> u64 {
        self.n_lazy_pops_a + self.n_lazy_pops_b
    }
}

/// Everything a trial produced.
#[derive(Debug, Clone)]
pub struct TrialResult {
    pub metrics: TrialMetrics,
    pub report: PlanReport,
    pub trace: Trace,
}

/// Runs one seeded trial. `base` is combined with the scenario's overrides
/// and the seed.
pub fn run_trial(
    scenario: &Scenario,
    algorithm: Algorithm,
    base: &PlannerConfig,
    seed: u64,
) -> Result<TrialResult> {
    let cfg = scenario.config_for(algorithm, base).with_seed(seed);
    let batch_size = cfg.sampler.batch_size;
    let mut planner = Planner::new(algorithm, scenario.problem.clone(), cfg)?;
    let report = planner.plan()?;
    let metrics = TrialMetrics::from_report(algorithm, &scenario.name, seed, batch_size, &report);
    let trace = Trace::capture(scenario, &planner, seed);
    Ok(TrialResult {
        metrics,
        report,
        trace,
    })
}

/// Runs every (planner, seed) pair, at most `parallel` at a time. Rows come
/// back ordered by planner, then seed.
pub fn run_bench(
    scenario: &Scenario,
    planners: &[Algorithm],
    base: &PlannerConfig,
    seeds: &[u64],
    parallel: usize,
) -> Result<Vec<TrialMetrics>> {
    if seeds.is_empty() {
        return Err(Error::Usage("at least one seed is required".into()));
    }
    let mut base = base.clone();
    base.record_events = false;
    let jobs: Vec<(Algorithm, u64)> = planners
        .iter()
        .flat_map(|&p| seeds.iter().map(move |&s| (p, s)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallel.max(1))
        .build()
        .map_err(|e| Error::Usage(format!("thread pool: {e}")))?;
    pool.install(|| {
        jobs.par_iter()
            .map(|&(alg, seed)| run_trial(scenario, alg, &base, seed).map(|t| t.metrics))
            .collect()
    })
}

/// Median and quartiles of t_init and c_init over one planner's solved
/// trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub planner: Algorithm,
    pub world: String,
    pub trials: usize,
    pub solved: usize,
    pub t_init_q1: Option<f64>,
    pub t_init_median: Option<f64>,
    pub t_init_q3: Option<f64>,
    pub c_init_q1: Option<f64>,
    pub c_init_median: Option<f64>,
    pub c_init_q3: Option<f64>,
}

/// Linear-interpolated quantile of unsorted data; `None` when empty.
pub fn quantile(values: &[f64], q: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    Some(v[lo] + (v[hi] - v[lo]) * (pos - lo as f64))
}

pub fn median(values: &[f64]) -> Option<f64> {
    quantile(values, 0.5)
}

/// One summary row per planner, in order of first appearance.
pub fn summarize(rows: &[TrialMetrics]) -> Vec<SummaryRow> {
    let mut planners: Vec<Algorithm> = Vec::new();
    for r in rows {
        if !planners.contains(&r.planner) {
            planners.push(r.planner);
        }
    }
    planners
        .into_iter()
        .map(|p| {
            let mine: Vec<&TrialMetrics> = rows.iter().filter(|r| r.planner == p).collect();
            let t: Vec<f64> = mine.iter().filter_map(|r| r.t_init_ms).collect();
            let c: Vec<f64> = mine.iter().filter_map(|r| r.c_init).collect();
            SummaryRow {
                planner: p,
                world: mine[0].world.clone(),
                trials: mine.len(),
                solved: c.len(),
                t_init_q1: quantile(&t, 0.25),
                t_init_median: median(&t),
                t_init_q3: quantile(&t, 0.75),
                c_init_q1: quantile(&c, 0.25),
                c_init_median: median(&c),
                c_init_q3: quantile(&c, 0.75),
            }
        })
        .collect()
}

fn write_rows<T: Serialize>(rows: &[T], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes trial rows under the fixed header, even when `rows` is empty.
pub fn write_csv(rows: &[TrialMetrics], out: impl Write) -> Result<()> {
    if rows.is_empty() {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_COLUMNS)?;
        w.flush()?;
        return Ok(());
    }
    write_rows(rows, out)
}

pub fn read_csv(input: impl Read) -> Result<Vec<TrialMetrics>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_COLUMNS {
        return Err(Error::invalid("csv header", format!("unexpected columns {header:?}")));
    }
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

pub fn write_summary_csv(rows: &[SummaryRow], out: impl Write) -> Result<()> {
    write_rows(rows, out)
}
