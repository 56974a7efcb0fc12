//! SVG rendering of 2D traces. Colours: obstacles black, lazy forward tree
//! red, lazy reverse tree blue, valid trees green, solution violet, samples
//! grey; the start is a violet dot and goals blue dots.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::trace::Trace;
use crate::error::{Error, Result};
use crate::planner::VertexId;
use crate::space::Obstacle;

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 10.0;

struct Frame {
    lo: [f64; 2],
    scale: f64,
    height: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        MARGIN + (v - self.lo[0]) * self.scale
    }

    /// World y grows upwards, SVG y downwards.
    fn y(&self, v: f64) -> f64 {
        MARGIN + self.height - (v - self.lo[1]) * self.scale
    }
}

/// Renders `trace` as an SVG document. Output is a pure function of the
/// trace.
pub fn render_svg(trace: &Trace) -> Result<String> {
    let p = &trace.scenario.problem;
    if p.dim != 2 {
        return Err(Error::Unsupported(format!(
            "SVG output needs a 2D scenario, got dimension {}",
            p.dim
        )));
    }
    let lo = [p.bounds.lo[0], p.bounds.lo[1]];
    let span = [p.bounds.hi[0] - lo[0], p.bounds.hi[1] - lo[1]];
    let scale = (WIDTH - 2.0 * MARGIN) / span[0];
    let f = Frame {
        lo,
        scale,
        height: span[1] * scale,
    };
    let (w, h) = (WIDTH, f.height + 2.0 * MARGIN);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect class="bounds" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="white" stroke="black"/>"#,
        MARGIN,
        MARGIN,
        span[0] * scale,
        f.height
    );
    for o in &p.obstacles {
        match o {
            Obstacle::Aabb { min, max } => {
                let _ = writeln!(
                    s,
                    r#"<rect class="obstacle" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="black"/>"#,
                    f.x(min[0]),
                    f.y(max[1]),
                    (max[0] - min[0]) * scale,
                    (max[1] - min[1]) * scale
                );
            }
            Obstacle::Sphere { center, radius } => {
                let _ = writeln!(
                    s,
                    r#"<circle class="obstacle" cx="{:.3}" cy="{:.3}" r="{:.3}" fill="black"/>"#,
                    f.x(center[0]),
                    f.y(center[1]),
                    radius * scale
                );
            }
        }
    }
    for v in &trace.vertices {
        let _ = writeln!(
            s,
            r#"<circle class="sample" cx="{:.3}" cy="{:.3}" r="1.5" fill="grey"/>"#,
            f.x(v.state[0]),
            f.y(v.state[1])
        );
    }
    let edges = |s: &mut String, list: &[(VertexId, VertexId)], class: &str, colour: &str, width: f64| {
        for &(a, b) in list {
            let (Some(pa), Some(pb)) = (trace.state_of(a), trace.state_of(b)) else {
                continue;
            };
            let _ = writeln!(
                s,
                r#"<line class="{class}" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{colour}" stroke-width="{width}"/>"#,
                f.x(pa[0]),
                f.y(pa[1]),
                f.x(pb[0]),
                f.y(pb[1])
            );
        }
    };
    edges(&mut s, &trace.lazy.forward, "lazy-forward", "red", 0.8);
    edges(&mut s, &trace.lazy.reverse, "lazy-reverse", "blue", 0.8);
    edges(&mut s, &trace.trees.forward, "tree-forward", "green", 1.5);
    edges(&mut s, &trace.trees.reverse, "tree-reverse", "green", 1.5);
    if let Some(path) = &trace.solution {
        let mut points = String::new();
        for (i, x) in path.iter().enumerate() {
            if i > 0 {
                points.push(' ');
            }
            let _ = write!(points, "{:.3},{:.3}", f.x(x[0]), f.y(x[1]));
        }
        let _ = writeln!(
            s,
            r#"<polyline class="solution" points="{points}" fill="none" stroke="violet" stroke-width="3"/>"#
        );
    }
    let _ = writeln!(
        s,
        r#"<circle class="start" cx="{:.3}" cy="{:.3}" r="5" fill="violet"/>"#,
        f.x(p.start[0]),
        f.y(p.start[1])
    );
    for g in &p.goals {
        let _ = writeln!(
            s,
            r#"<circle class="goal" cx="{:.3}" cy="{:.3}" r="5" fill="blue"/>"#,
            f.x(g[0]),
            f.y(g[1])
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn emit_svg(trace: &Trace, out: impl AsRef<Path>) -> Result<()> {
    fs::write(out, render_svg(trace)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::trial::run_trial;
    use crate::bench::worlds::{builtin_world, WorldParams};
    use crate::planner::{Algorithm, PlannerConfig, Termination};

    fn solved_trace() -> Trace {
        let s = builtin_world("wallgap2d", &WorldParams::default()).unwrap();
        let cfg = PlannerConfig {
            termination: Termination {
                time_budget_ms: None,
                max_batches: Some(5),
                ..Termination::default()
            },
            ..PlannerConfig::default()
        };
        run_trial(&s, Algorithm::BiAit, &cfg, 1).unwrap().trace
    }

    #[test]
    fn wallgap_has_one_wall_and_a_solution() {
        let svg = render_svg(&solved_trace()).unwrap();
        assert_eq!(svg.matches(r#"class="obstacle""#).count(), 1);
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains(r#"stroke="violet""#));
        assert!(svg.contains(r#"class="tree-forward""#));
    }

    #[test]
    fn empty_trace_has_obstacles_and_endpoints_only() {
        let s = builtin_world("wallgap2d", &WorldParams::default()).unwrap();
        let svg = render_svg(&Trace::empty(&s)).unwrap();
        assert_eq!(svg.matches(r#"class="obstacle""#).count(), 1);
        assert_eq!(svg.matches(r#"class="start""#).count(), 1);
        assert_eq!(svg.matches(r#"class="goal""#).count(), 1);
        for absent in ["sample", "lazy-", "tree-", "polyline"] {
            assert!(!svg.contains(absent), "{absent}");
        }
    }

    #[test]
    fn output_is_byte_stable() {
        let t = solved_trace();
        let dir = tempfile::tempdir().unwrap();
        let (a, b) = (dir.path().join("a.svg"), dir.path().join("b.svg"));
        emit_svg(&t, &a).unwrap();
        emit_svg(&t, &b).unwrap();
        assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
    }

    #[test]
    fn higher_dimensions_are_unsupported() {
        let s = builtin_world("empty-d", &WorldParams { dim: 4, maze_seed: 0 }).unwrap();
        assert!(matches!(render_svg(&Trace::empty(&s)), Err(Error::Unsupported(_))));
    }
}
