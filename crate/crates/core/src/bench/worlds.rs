//! Built-in planning worlds.

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::scenario::Scenario;
use crate::error::{Error, Result};
use crate::space::{euclid_cost, Bounds, Obstacle, ProblemDef, StateVec, DEFAULT_RESOLUTION};

/// Parameters for the generated worlds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorldParams {
    /// Dimension of `empty-d`.
    pub dim: usize,
    pub maze_seed: u64,
}

impl Default for WorldParams {
    fn default() -> Self {
        WorldParams {
            dim: 2,
            maze_seed: 3,
        }
    }
}

/// Name and one-line description of every built-in world.
pub const WORLDS: &[(&str, &str)] = &[
    ("wallgap2d", "2D, one wall between start and goal with a gap above it"),
    ("bugtrap2d", "2D, start inside a C-shaped trap that opens away from the goal"),
    ("maze2d", "2D, seeded 5x5 grid maze (--maze-seed)"),
    ("narrow2d", "2D, two rooms joined by a thin gap"),
    ("empty-d", "R^d without obstacles, d in {2, 4, 7} (--dim)"),
    ("blocks-r7", "R^7 joint space with one centred hyperbox"),
];

pub fn builtin_world(name: &str, params: &WorldParams) -> Result<Scenario> {
    let problem = match name {
        "wallgap2d" => wallgap2d(),
        "bugtrap2d" => bugtrap2d(),
        "maze2d" => maze2d(params.maze_seed),
        "narrow2d" => narrow2d(),
        "empty-d" => empty(params.dim)?,
        "empty-2" => empty(2)?,
        "empty-4" => empty(4)?,
        "empty-7" => empty(7)?,
        "blocks-r7" => blocks_r7(),
        _ => return Err(Error::UnknownWorld(name.to_string())),
    };
    problem.validate()?;
    let name = match name {
        "empty-d" => format!("empty-{}", params.dim),
        "maze2d" if params.maze_seed != WorldParams::default().maze_seed => {
            format!("maze2d-{}", params.maze_seed)
        }
        _ => name.to_string(),
    };
    Ok(Scenario::new(name, problem))
}

fn square(hi: f64) -> Bounds {
    Bounds {
        lo: vec![0.0, 0.0],
        hi: vec![hi, hi],
    }
}

fn problem(bounds: Bounds, start: StateVec, goal: StateVec, obstacles: Vec<Obstacle>) -> ProblemDef {
    ProblemDef {
        dim: start.len(),
        bounds,
        start,
        goals: vec![goal],
        obstacles,
        resolution: DEFAULT_RESOLUTION,
    }
}

pub fn wallgap2d() -> ProblemDef {
    problem(
        square(10.0),
        vec![1.0, 5.0],
        vec![9.0, 5.0],
        vec![Obstacle::aabb([4.8, 0.0], [5.2, 8.0])],
    )
}

/// Shortest collision-free cost in `wallgap2d`: over both top corners of
/// the wall.
pub fn wallgap2d_optimum() -> f64 {
    euclid_cost(&[1.0, 5.0], &[4.8, 8.0]) + 0.4 + euclid_cost(&[5.2, 8.0], &[9.0, 5.0])
}

fn bugtrap2d() -> ProblemDef {
    problem(
        square(10.0),
        vec![3.5, 5.0],
        vec![9.0, 5.0],
        vec![
            Obstacle::aabb([2.0, 6.6], [5.0, 7.0]),
            Obstacle::aabb([2.0, 3.0], [5.0, 3.4]),
            Obstacle::aabb([4.6, 3.0], [5.0, 7.0]),
        ],
    )
}

const MAZE_CELLS: usize = 5;
const MAZE_CELL: f64 = 2.0;
const MAZE_WALL: f64 = 0.1;

/// Perfect maze from a seeded depth-first carve; every cell is reachable,
/// so the corner-to-corner corridor always exists.
fn maze2d(seed: u64) -> ProblemDef {
    let n = MAZE_CELLS;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut visited = vec![false; n * n];
    // open[(cell, right)] / open[(cell, up)]
    let mut open_right = vec![false; n * n];
    let mut open_up = vec![false; n * n];
    let mut stack = vec![0usize];
    visited[0] = true;
    while let Some(&cell) = stack.last() {
        let (i, j) = (cell % n, cell / n);
        let mut next = Vec::with_capacity(4);
        if i + 1 < n {
            next.push(cell + 1);
        }
        if i > 0 {
            next.push(cell - 1);
        }
        if j + 1 < n {
            next.push(cell + n);
        }
        if j > 0 {
            next.push(cell - n);
        }
        next.retain(|&c| !visited[c]);
        let Some(&to) = next.choose(&mut rng) else {
            stack.pop();
            continue;
        };
        match to {
            t if t == cell + 1 => open_right[cell] = true,
            t if t + 1 == cell => open_right[to] = true,
            t if t == cell + n => open_up[cell] = true,
            _ => open_up[to] = true,
        }
        visited[to] = true;
        stack.push(to);
    }
    let size = n as f64 * MAZE_CELL;
    let clip = |v: f64| v.clamp(0.0, size);
    let mut walls = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let cell = j * n + i;
            let (x0, y0) = (i as f64 * MAZE_CELL, j as f64 * MAZE_CELL);
            if i + 1 < n && !open_right[cell] {
                let x = x0 + MAZE_CELL;
                walls.push(Obstacle::aabb(
                    [x - MAZE_WALL, clip(y0 - MAZE_WALL)],
                    [x + MAZE_WALL, clip(y0 + MAZE_CELL + MAZE_WALL)],
                ));
            }
            if j + 1 < n && !open_up[cell] {
                let y = y0 + MAZE_CELL;
                walls.push(Obstacle::aabb(
                    [clip(x0 - MAZE_WALL), y - MAZE_WALL],
                    [clip(x0 + MAZE_CELL + MAZE_WALL), y + MAZE_WALL],
                ));
            }
        }
    }
    let half = MAZE_CELL / 2.0;
    problem(
        square(size),
        vec![half, half],
        vec![size - half, size - half],
        walls,
    )
}

fn narrow2d() -> ProblemDef {
    problem(
        square(10.0),
        vec![1.0, 2.0],
        vec![9.0, 2.0],
        vec![
            Obstacle::aabb([4.9, 0.0], [5.1, 4.75]),
            Obstacle::aabb([4.9, 5.25], [5.1, 10.0]),
        ],
    )
}

fn empty(dim: usize) -> Result<ProblemDef> {
    if ![2, 4, 7].contains(&dim) {
        return Err(Error::invalid("dim", "empty-d supports d in {2, 4, 7}"));
    }
    Ok(problem(
        Bounds {
            lo: vec![0.0; dim],
            hi: vec![10.0; dim],
        },
        vec![1.0; dim],
        vec![9.0; dim],
        vec![],
    ))
}

fn blocks_r7() -> ProblemDef {
    let pi = std::f64::consts::PI;
    let mut start = vec![0.0; 7];
    let mut goal = vec![0.0; 7];
    start[0] = -2.0;
    goal[0] = 2.0;
    start[1] = -0.5;
    goal[1] = 0.5;
    problem(
        Bounds {
            lo: vec![-pi; 7],
            hi: vec![pi; 7],
        },
        start,
        goal,
        vec![Obstacle::aabb([-0.8; 7], [0.8; 7])],
    )
}
