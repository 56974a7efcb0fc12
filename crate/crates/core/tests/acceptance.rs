//! Acceptance suite. Each test prints one `criterion N (...): PASS|FAIL`
//! line to the real stdout (visible without `--nocapture`) and then asserts.
//!
//! Tests take a process-wide lock so wall-clock comparisons never overlap.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::io::Write;
use std::sync::{Mutex, MutexGuard};
use std::time::Instant;

use biait::bench::{builtin_world, median, run_trial, wallgap2d_optimum, Scenario, WorldParams};
use biait::planner::{Role, VertexId};
use biait::queues::{AddressablePQ, LexKey};
use biait::sampling::{sample_informed, sample_uniform, RngStream};
use biait::space::{euclid_cost, path_cost};
use biait::{Algorithm, Bounds, Planner, PlannerConfig, ProblemDef, Status};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const INF: f64 = f64::INFINITY;
const SEEDS: std::ops::RangeInclusive<u64> = 1..=50;

static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn verdict(n: u32, title: &str, pass: bool, detail: &str) {
    let mut out = std::io::stdout().lock();
    let word = if pass { "PASS" } else { "FAIL" };
    writeln!(out, "criterion {n} ({title}): {word} {detail}").unwrap();
}

fn world(name: &str) -> Scenario {
    builtin_world(name, &WorldParams::default()).unwrap()
}

fn config(seed: u64) -> PlannerConfig {
    let mut cfg = PlannerConfig::default().with_seed(seed);
    cfg.sampler.batch_size = 100;
    cfg
}

fn first_solution_config(seed: u64) -> PlannerConfig {
    let mut cfg = config(seed);
    cfg.termination.time_budget_ms = Some(5_000);
    cfg.termination.stop_on_first_solution = true;
    cfg
}

// ---------------------------------------------------------------------------
// Independent oracles
// ---------------------------------------------------------------------------

#[derive(PartialEq)]
struct Dist(f64);

impl Eq for Dist {}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

fn blocked(p: &Planner, a: VertexId, b: VertexId) -> bool {
    p.vertex(a).unwrap().blocked.contains(&b) || p.vertex(b).unwrap().blocked.contains(&a)
}

fn edge_len(p: &Planner, a: VertexId, b: VertexId) -> f64 {
    euclid_cost(&p.vertex(a).unwrap().state, &p.vertex(b).unwrap().state)
}

/// Shortest distances to the roots of `r` over the planner's neighbour
/// graph minus blocked edges. Edge lengths come from the states.
fn dijkstra(p: &Planner, r: Role) -> Vec<f64> {
    let g = p.graph();
    let mut dist = vec![INF; g.len()];
    let mut heap = BinaryHeap::new();
    for &s in p.roots(r) {
        dist[s] = 0.0;
        heap.push(Reverse((Dist(0.0), s)));
    }
    while let Some(Reverse((Dist(d), u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, _) in &g[u] {
            if blocked(p, u, v) {
                continue;
            }
            let nd = d + edge_len(p, u, v);
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((Dist(nd), v)));
            }
        }
    }
    dist
}

fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-9
}

/// A hop path from `x` to a root of `q` along unblocked graph edges whose
/// recomputed length equals `value`.
fn check_chain(p: &Planner, q: Role, x: VertexId, ids: &[VertexId], value: f64) -> Result<(), String> {
    if ids.first() != Some(&x) {
        return Err(format!("chain of {x} does not start at it"));
    }
    let last = *ids.last().unwrap();
    if !p.roots(q).contains(&last) {
        return Err(format!("chain of {x} ends at {last}, not a root of {q:?}"));
    }
    let mut len = 0.0;
    for w in ids.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !p.graph()[a].iter().any(|&(n, _)| n == b) {
            return Err(format!("chain hop {a}-{b} is not a graph edge"));
        }
        if blocked(p, a, b) {
            return Err(format!("chain hop {a}-{b} is blocked"));
        }
        len += edge_len(p, a, b);
    }
    if !close(len, value) {
        return Err(format!("chain of {x} in {q:?} has length {len}, value {value}"));
    }
    Ok(())
}

/// The reverse lazy search of the baseline equals shortest distances to
/// the goals at every consistent vertex, and every vertex is consistent.
fn exact_heuristic(p: &Planner) -> Result<usize, String> {
    let dist = dijkstra(p, Role::B);
    let mut checked = 0;
    for v in p.vertices() {
        let l = v.lazy(Role::B);
        if !l.consistent() {
            return Err(format!("vertex {} left inconsistent", v.id));
        }
        if !close(l.g, dist[v.id]) {
            return Err(format!("vertex {}: g {} but distance {}", v.id, l.g, dist[v.id]));
        }
        checked += 1;
    }
    Ok(checked)
}

/// Every finite estimate of the bidirectional planner is bounded below by
/// the graph distance and the straight line, and is realized by its chain.
fn bounded_heuristic(p: &Planner) -> Result<usize, String> {
    let dist = [dijkstra(p, Role::A), dijkstra(p, Role::B)];
    let mut checked = 0;
    for v in p.vertices() {
        let x = v.id;
        for q in Role::BOTH {
            let floor = dist[q.index()][x].max(v.ghat[q.index()]);
            let values = [
                ("lazy g", v.lazy(q).g, p.lazy_chain(q, x)),
                ("propagated", v.prop(q).value, p.propagated_chain(q, x)),
                ("guide", v.guide(q), p.heuristic_chain(q, x)),
            ];
            for (what, value, chain) in values {
                if !value.is_finite() {
                    continue;
                }
                if value < floor - 1e-9 {
                    return Err(format!("{what} of {x} in {q:?} is {value}, below {floor}"));
                }
                let chain = chain.ok_or_else(|| format!("{what} of {x} in {q:?} has no chain"))?;
                check_chain(p, q, x, &chain.vertices, value)?;
                checked += 1;
            }
        }
    }
    Ok(checked)
}

// ---------------------------------------------------------------------------
// Random graphs
// ---------------------------------------------------------------------------

fn open_box(dim: usize) -> Bounds {
    Bounds {
        lo: vec![0.0; dim],
        hi: vec![10.0; dim],
    }
}

/// Samples for a random instance: start, goals and free samples.
fn random_instance(seed: u64, dim: usize, n: usize, goals: usize) -> (ProblemDef, Vec<Vec<f64>>) {
    let mut rng = RngStream::new(seed);
    let mut problem = ProblemDef {
        dim,
        bounds: open_box(dim),
        start: vec![5.0; dim],
        goals: vec![vec![5.0; dim]],
        obstacles: vec![],
        resolution: 0.001,
    };
    problem.start = sample_uniform(&problem, &mut rng).unwrap();
    problem.goals = (0..goals)
        .map(|_| sample_uniform(&problem, &mut rng).unwrap())
        .collect();
    let samples = (0..n)
        .map(|_| sample_uniform(&problem, &mut rng).unwrap())
        .collect();
    (problem, samples)
}

fn graph_planner(alg: Algorithm, problem: &ProblemDef, samples: &[Vec<f64>]) -> Planner {
    let mut cfg = PlannerConfig::default();
    cfg.termination.max_iterations = Some(1);
    let mut p = Planner::new(alg, problem.clone(), cfg).unwrap();
    p.add_samples(samples).unwrap();
    p.init_batch();
    p
}

fn quiesce(p: &mut Planner) {
    match p.algorithm() {
        Algorithm::BiAit => p.run_lazy_to_quiescence().unwrap(),
        Algorithm::Ait => {
            while !p.lazy_queue(Role::B).is_empty() {
                p.ait_reverse_lazy_step().unwrap();
            }
        }
    }
}

fn static_graphs() -> Vec<(ProblemDef, Vec<Vec<f64>>)> {
    (0..20u64)
        .map(|i| {
            let dim = 2 + (i as usize % 3);
            let n = 40 + (i as usize * 37) % 261;
            let goals = if i % 5 == 4 { 2 } else { 1 };
            random_instance(9_000 + i, dim, n, goals)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_fewer_lazy_expansions() {
    let _guard = serial();
    let clock = Instant::now();
    let s = world("wallgap2d");
    let mut pops = [Vec::new(), Vec::new()];
    for seed in SEEDS {
        for (i, alg) in [Algorithm::BiAit, Algorithm::Ait].into_iter().enumerate() {
            let mut p = Planner::new(alg, s.problem.clone(), first_solution_config(seed)).unwrap();
            p.plan().unwrap();
            let n = p
                .counters()
                .lazy_pops_before_finite_edge
                .expect("a finite edge key appears before the first solution");
            pops[i].push(n as f64);
        }
    }
    let (bi, ait) = (median(&pops[0]).unwrap(), median(&pops[1]).unwrap());
    let pass = bi < ait;
    let detail = format!(
        "median lazy pops before the first finite edge key: biait {bi} vs ait {ait} ({:.1}s)",
        clock.elapsed().as_secs_f64()
    );
    verdict(1, "fewer lazy expansions", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criteria_2_and_3_initial_solution_speed_and_quality() {
    let _guard = serial();
    let clock = Instant::now();
    let mut speed = Vec::new();
    let mut quality = Vec::new();
    let mut ok2 = true;
    let mut ok3 = true;
    for name in ["wallgap2d", "maze2d"] {
        let s = world(name);
        let mut t = [Vec::new(), Vec::new()];
        let mut c = [Vec::new(), Vec::new()];
        for seed in SEEDS {
            // Interleaved so slow drift of the machine hits both planners.
            for (i, alg) in [Algorithm::BiAit, Algorithm::Ait].into_iter().enumerate() {
                let m = run_trial(&s, alg, &first_solution_config(seed), seed)
                    .unwrap()
                    .metrics;
                if let (Some(ti), Some(ci)) = (m.t_init_ms, m.c_init) {
                    t[i].push(ti);
                    c[i].push(ci);
                }
            }
        }
        let solved = [t[0].len(), t[1].len()];
        let tm = [median(&t[0]).unwrap_or(INF), median(&t[1]).unwrap_or(INF)];
        let cm = [median(&c[0]).unwrap_or(INF), median(&c[1]).unwrap_or(INF)];
        ok2 &= solved[0] >= 48 && solved[1] >= 48 && tm[0] <= tm[1];
        ok3 &= cm[0] <= 1.10 * cm[1];
        speed.push(format!(
            "{name}: t_init biait {:.3} ms ({}/50) vs ait {:.3} ms ({}/50)",
            tm[0], solved[0], tm[1], solved[1]
        ));
        quality.push(format!(
            "{name}: c_init biait {:.4} vs ait {:.4} (ratio {:.4})",
            cm[0],
            cm[1],
            cm[0] / cm[1]
        ));
    }
    let secs = clock.elapsed().as_secs_f64();
    let d2 = format!("{} ({secs:.1}s)", speed.join("; "));
    let d3 = quality.join("; ");
    verdict(2, "faster initial solution", ok2, &d2);
    verdict(3, "comparable initial quality", ok3, &d3);
    assert!(ok2 && ok3, "criterion 2: {d2}\ncriterion 3: {d3}");
}

#[test]
fn criterion_4_baseline_heuristic_is_exact() {
    let _guard = serial();
    let clock = Instant::now();
    let mut result = Ok(0);
    for (i, (problem, samples)) in static_graphs().iter().enumerate() {
        let mut p = graph_planner(Algorithm::Ait, problem, samples);
        quiesce(&mut p);
        match exact_heuristic(&p) {
            Ok(n) => result = result.map(|t| t + n),
            Err(e) => {
                result = Err(format!("graph {i}: {e}"));
                break;
            }
        }
    }
    let pass = result.is_ok();
    let detail = match &result {
        Ok(n) => format!("{n} vertices on 20 graphs match Dijkstra within 1e-9"),
        Err(e) => e.clone(),
    };
    let detail = format!("{detail} ({:.1}s)", clock.elapsed().as_secs_f64());
    verdict(4, "baseline heuristic exact", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_5_bidirectional_heuristic_is_bounded() {
    let _guard = serial();
    let clock = Instant::now();
    let mut result = Ok(0);
    for (i, (problem, samples)) in static_graphs().iter().enumerate() {
        let mut p = graph_planner(Algorithm::BiAit, problem, samples);
        quiesce(&mut p);
        match bounded_heuristic(&p) {
            Ok(n) => result = result.map(|t| t + n),
            Err(e) => {
                result = Err(format!("graph {i}: {e}"));
                break;
            }
        }
    }
    let pass = result.is_ok();
    let detail = match &result {
        Ok(n) => format!("{n} finite estimates on 20 graphs bounded and realized by their chains"),
        Err(e) => e.clone(),
    };
    let detail = format!("{detail} ({:.1}s)", clock.elapsed().as_secs_f64());
    verdict(5, "bidirectional heuristic bounded", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_6_anytime_convergence() {
    let _guard = serial();
    let clock = Instant::now();
    let params = WorldParams {
        dim: 2,
        ..WorldParams::default()
    };
    let s = builtin_world("empty-2", &params).unwrap();
    let line = euclid_cost(&s.problem.start, &s.problem.goals[0]);
    let mut cfg = config(1);
    cfg.termination.time_budget_ms = None;
    cfg.termination.max_batches = Some(10);
    let mut p = Planner::biait(s.problem.clone(), cfg).unwrap();
    let report = p.plan().unwrap();
    let costs: Vec<f64> = report.solutions.iter().map(|s| s.cost).collect();
    let best = costs.last().copied().unwrap_or(INF);
    let decreasing = costs.windows(2).all(|w| w[1] < w[0]);
    let pass = p.counters().batches >= 10 && best <= 1.01 * line && decreasing;
    let detail = format!(
        "{} batches, best {best:.4} vs straight line {line:.4} (ratio {:.4}), {} emissions strictly decreasing: {decreasing} ({:.1}s)",
        p.counters().batches,
        best / line,
        costs.len(),
        clock.elapsed().as_secs_f64()
    );
    verdict(6, "anytime convergence", pass, &detail);
    assert!(pass, "{detail}");
}

/// Edges carrying heuristic information: lazy tree links and lazy meets.
fn lazy_edges(p: &Planner) -> Vec<(VertexId, VertexId)> {
    let mut out = BTreeSet::new();
    for v in p.vertices() {
        for q in Role::BOTH {
            if let Some(u) = v.lazy(q).parent {
                out.insert((u.min(v.id), u.max(v.id)));
            }
        }
    }
    for &(a, b) in p.lazy_meets() {
        out.insert((a.min(b), a.max(b)));
    }
    out.into_iter().collect()
}

#[test]
fn criterion_7_repair_correctness() {
    let _guard = serial();
    let clock = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut foot = [Vec::new(), Vec::new()];
    let mut failure = None;
    for episode in 0..100u64 {
        let n = rng.random_range(20..=80);
        let goals = if episode % 4 == 3 { 2 } else { 1 };
        let (problem, samples) = random_instance(20_000 + episode, 2, n, goals);
        let mut bi = graph_planner(Algorithm::BiAit, &problem, &samples);
        let mut ait = graph_planner(Algorithm::Ait, &problem, &samples);
        quiesce(&mut bi);
        quiesce(&mut ait);
        let before = [bi.counters().repair_footprint, ait.counters().repair_footprint];
        let injections = rng.random_range(1..=3);
        for _ in 0..injections {
            // A planner only ever discovers collisions on edges its own
            // heuristic leads it to, so each one is hit on one of those.
            for p in [&mut bi, &mut ait] {
                let edges = lazy_edges(p);
                if let Some(&(a, b)) = edges.get(rng.random_range(0..edges.len().max(1))) {
                    p.mark_edge_invalid(a, b);
                    quiesce(p);
                }
            }
        }
        foot[0].push((bi.counters().repair_footprint - before[0]) as f64);
        foot[1].push((ait.counters().repair_footprint - before[1]) as f64);
        if let Err(e) = bounded_heuristic(&bi) {
            failure = Some(format!("episode {episode}, biait: {e}"));
            break;
        }
        if let Err(e) = exact_heuristic(&ait) {
            failure = Some(format!("episode {episode}, ait: {e}"));
            break;
        }
    }
    let (mb, ma) = (median(&foot[0]).unwrap(), median(&foot[1]).unwrap());
    let pass = failure.is_none() && mb <= ma;
    let detail = match failure {
        Some(e) => e,
        None => format!(
            "100 episodes repaired correctly; median footprint biait {mb} vs ait {ma} ({:.1}s)",
            clock.elapsed().as_secs_f64()
        ),
    };
    verdict(7, "repair correctness", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_8_modifications_do_not_regress() {
    let _guard = serial();
    let clock = Instant::now();
    let s = world("wallgap2d");
    let target = 1.05 * wallgap2d_optimum();
    let variant = |kind: usize, seed: u64| {
        let mut cfg = config(seed);
        cfg.termination.time_budget_ms = Some(10_000);
        cfg.termination.target_cost = Some(target);
        match kind {
            1 => cfg.sampler.variational = Some(biait::sampling::Variational::new(10, 1.5)),
            2 => cfg.sampler.p_near = 0.5,
            _ => {}
        }
        cfg
    };
    let names = ["constant", "variational(10,1.5)", "p_near 0.5"];
    let mut times = [Vec::new(), Vec::new(), Vec::new()];
    for seed in SEEDS {
        for (kind, t) in times.iter_mut().enumerate() {
            let m = run_trial(&s, Algorithm::BiAit, &variant(kind, seed), seed)
                .unwrap()
                .metrics;
            let reached = m.status == Status::Solved && m.c_best.is_some_and(|c| c <= target);
            t.push(if reached { m.t_best_ms.unwrap() } else { INF });
        }
    }
    let medians: Vec<f64> = times.iter().map(|t| median(t).unwrap()).collect();
    let reached: Vec<usize> = times
        .iter()
        .map(|t| t.iter().filter(|x| x.is_finite()).count())
        .collect();
    let pass = (1..3).all(|k| medians[k] <= 1.2 * medians[0]) && reached.iter().all(|&r| r >= 45);
    let parts: Vec<String> = (0..3)
        .map(|k| format!("{} {:.3} ms ({}/50)", names[k], medians[k], reached[k]))
        .collect();
    let detail = format!(
        "median time to {target:.4}: {} ({:.1}s)",
        parts.join(", "),
        clock.elapsed().as_secs_f64()
    );
    verdict(8, "modifications are non-regressions", pass, &detail);
    assert!(pass, "{detail}");
}

// Criterion 9 sub-checks. Each returns a short summary or the first
// violation.

fn dense(problem: &ProblemDef) -> ProblemDef {
    let mut p = problem.clone();
    p.resolution = 1e-4;
    p
}

fn structural_runs() -> Result<String, String> {
    let mut runs = 0;
    let mut edges = 0;
    let mut paths = 0;
    let mut worlds: Vec<Scenario> = ["wallgap2d", "bugtrap2d", "maze2d", "narrow2d", "blocks-r7"]
        .iter()
        .map(|n| world(n))
        .collect();
    worlds.push(builtin_world("empty-4", &WorldParams::default()).unwrap());
    for s in &worlds {
        let oracle = dense(&s.problem);
        for alg in [Algorithm::BiAit, Algorithm::Ait] {
            for seed in 1..=3 {
                let mut cfg = config(seed);
                cfg.check_invariants = true;
                cfg.termination.time_budget_ms = Some(20_000);
                cfg.termination.max_batches = Some(4);
                let mut p = Planner::new(alg, s.problem.clone(), cfg).unwrap();
                let report = p.plan().unwrap();
                p.check_invariants()
                    .map_err(|e| format!("{} {alg:?} seed {seed}: {e}", s.name))?;
                for v in p.vertices() {
                    for r in Role::BOTH {
                        if let Some(u) = v.tree(r).parent {
                            let a = &p.vertex(u).unwrap().state;
                            if !oracle.motion_valid_dense(a, &v.state) {
                                return Err(format!("{}: tree edge {u}-{} collides", s.name, v.id));
                            }
                            edges += 1;
                        }
                    }
                }
                for sol in &report.solutions {
                    let bad = sol
                        .path
                        .windows(2)
                        .any(|w| !oracle.motion_valid_dense(&w[0], &w[1]));
                    if bad || sol.path.iter().any(|x| !oracle.is_valid(x)) {
                        return Err(format!("{} {alg:?} seed {seed}: emitted path collides", s.name));
                    }
                    let c = path_cost(&sol.path).unwrap();
                    if !close(c, sol.cost) {
                        return Err(format!("{}: path cost {c} but reported {}", s.name, sol.cost));
                    }
                    if sol.path.first() != Some(&s.problem.start)
                        || !s.problem.goals.contains(sol.path.last().unwrap())
                    {
                        return Err(format!("{}: path does not join start and goal", s.name));
                    }
                    paths += 1;
                }
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} checked runs, {edges} tree edges and {paths} paths pass the 1e-4 oracle"))
}

/// Reference queue: a flat list ordered by (key, insertion rank).
#[derive(Default)]
struct ListQueue {
    items: Vec<(u32, LexKey, u64)>,
    next: u64,
}

impl ListQueue {
    fn best(&self) -> Option<(u32, LexKey)> {
        self.items
            .iter()
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.2.cmp(&b.2)))
            .map(|&(e, k, _)| (e, k))
    }

    fn upsert(&mut self, e: u32, k: LexKey) {
        if let Some(slot) = self.items.iter_mut().find(|s| s.0 == e) {
            slot.1 = k;
        } else {
            self.items.push((e, k, self.next));
            self.next += 1;
        }
    }

    fn remove(&mut self, e: u32) -> bool {
        let before = self.items.len();
        self.items.retain(|s| s.0 != e);
        before != self.items.len()
    }
}

fn queue_equivalence() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut pq: AddressablePQ<u32> = AddressablePQ::new();
    let mut oracle = ListQueue::default();
    let ops = 10_000;
    for i in 0..ops {
        let e = rng.random_range(0..64u32);
        let key = || {
            let mut r = ChaCha8Rng::seed_from_u64(i as u64);
            let a = r.random_range(0..6) as f64;
            let b = if r.random_bool(0.1) { INF } else { r.random_range(0..3) as f64 };
            LexKey::three(a, b, r.random_range(0..2) as f64)
        };
        match rng.random_range(0..10) {
            0..=4 => {
                let k = key();
                pq.push_or_update(e, k);
                oracle.upsert(e, k);
            }
            5..=6 => {
                let got = pq.pop_best().ok();
                let want = oracle.best();
                if let Some((w, _)) = want {
                    oracle.remove(w);
                }
                if got != want {
                    return Err(format!("op {i}: pop {got:?}, oracle {want:?}"));
                }
            }
            7 => {
                if pq.remove(&e) != oracle.remove(e) {
                    return Err(format!("op {i}: remove of {e} disagrees"));
                }
            }
            _ => {
                if pq.peek() != oracle.best() {
                    return Err(format!("op {i}: peek disagrees"));
                }
            }
        }
        if pq.len() != oracle.items.len() {
            return Err(format!("op {i}: length {} vs {}", pq.len(), oracle.items.len()));
        }
        let k = oracle.items.iter().find(|s| s.0 == e).map(|s| s.1);
        if pq.key_of(&e) != k || pq.contains(&e) != k.is_some() {
            return Err(format!("op {i}: key of {e} disagrees"));
        }
    }
    Ok(format!("{ops} queue operations match the list oracle"))
}

fn informed_soundness() -> Result<String, String> {
    let mut draws = 0;
    let wall = world("wallgap2d").problem;
    let mut two_goals = world("empty-4").problem;
    two_goals.goals.push(vec![9.0, 1.0, 9.0, 1.0]);
    let cases = [
        (wall.clone(), 1.2 * wallgap2d_optimum()),
        (wall, 10.2),
        (world("blocks-r7").problem, 6.0),
        (two_goals, 14.0),
    ];
    for (i, (p, c)) in cases.iter().enumerate() {
        let mut rng = RngStream::new(100 + i as u64);
        for _ in 0..25_000 {
            let x = sample_informed(p, *c, &mut rng).map_err(|e| e.to_string())?;
            let to_start = euclid_cost(&x, &p.start);
            let to_goal = p
                .goals
                .iter()
                .map(|g| euclid_cost(&x, g))
                .fold(INF, f64::min);
            if to_start + to_goal > c + 1e-9 || !p.is_valid(&x) {
                return Err(format!("case {i}: draw {x:?} outside the informed set"));
            }
            draws += 1;
        }
    }
    Ok(format!("{draws} informed draws inside the informed set"))
}

fn determinism() -> Result<String, String> {
    let s = world("maze2d");
    for alg in [Algorithm::BiAit, Algorithm::Ait] {
        let run = || {
            let mut cfg = config(5);
            cfg.record_events = true;
            cfg.termination.time_budget_ms = None;
            cfg.termination.max_batches = Some(3);
            let mut p = Planner::new(alg, s.problem.clone(), cfg).unwrap();
            let report = p.plan().unwrap();
            let bits: Vec<Vec<u64>> = report
                .solutions
                .iter()
                .flat_map(|s| s.path.iter().map(|x| x.iter().map(|v| v.to_bits()).collect()))
                .collect();
            (p.events().unwrap().to_vec(), report.counters.clone(), bits)
        };
        let (a, b) = (run(), run());
        if a != b {
            return Err(format!("{alg:?}: two seeded runs differ"));
        }
        if a.0.is_empty() {
            return Err(format!("{alg:?}: no events recorded"));
        }
    }
    Ok("seeded runs repeat event logs, counters and path bits exactly".into())
}

#[test]
fn criterion_9_structural_properties() {
    let _guard = serial();
    let clock = Instant::now();
    type Check = fn() -> Result<String, String>;
    let checks: [(&str, Check); 4] = [
        ("soundness", structural_runs),
        ("queue", queue_equivalence),
        ("informed", informed_soundness),
        ("determinism", determinism),
    ];
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, check) in checks {
        match check() {
            Ok(s) => parts.push(s),
            Err(e) => {
                pass = false;
                parts.push(format!("{name} FAILED: {e}"));
            }
        }
    }
    let detail = format!("{} ({:.1}s)", parts.join("; "), clock.elapsed().as_secs_f64());
    verdict(9, "structural properties", pass, &detail);
    assert!(pass, "{detail}");
}
