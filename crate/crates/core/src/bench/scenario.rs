//! Scenario files: a JSON problem definition plus optional planner
//! overrides.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::planner::{Algorithm, PlannerConfig};
use crate::sampling::Variational;
use crate::space::ProblemDef;

/// Optional planner settings carried by a scenario. Unset fields keep the
/// caller's value.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub batch_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variational: Option<Variational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_near: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_budget_ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_cost: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_batches: Option<usize>,
}

impl Overrides {
    pub fn is_empty(&self) -> bool {
        *self == Overrides::default()
    }

    pub fn apply(&self, cfg: &mut PlannerConfig) {
        if let Some(b) = self.batch_size {
            cfg.sampler.batch_size = b;
        }
        if let Some(v) = self.variational {
            cfg.sampler.variational = Some(v);
        }
        if let Some(p) = self.p_near {
            cfg.sampler.p_near = p;
        }
        if let Some(e) = self.eta {
            cfg.eta = e;
        }
        if let Some(t) = self.time_budget_ms {
            cfg.termination.time_budget_ms = Some(t);
        }
        if let Some(c) = self.target_cost {
            cfg.termination.target_cost = Some(c);
        }
        if let Some(m) = self.max_batches {
            cfg.termination.max_batches = Some(m);
        }
    }
}

/// The `"planner"` block: shared overrides plus per-algorithm ones that
/// are applied on top.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "serde_json::Map<String, serde_json::Value>")]
pub struct PlannerSection {
    #[serde(flatten)]
    pub common: Overrides,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub biait: Option<Overrides>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ait: Option<Overrides>,
}

impl TryFrom<serde_json::Map<String, serde_json::Value>> for PlannerSection {
    type Error = serde_json::Error;

    // Split by hand so unknown shared keys are still rejected.
    fn try_from(mut map: serde_json::Map<String, serde_json::Value>) -> Result<Self, Self::Error> {
        let mut specific = |key: &str| {
            map.remove(key)
                .map(serde_json::from_value::<Overrides>)
                .transpose()
        };
        let biait = specific("biait")?;
        let ait = specific("ait")?;
        let common = serde_json::from_value(serde_json::Value::Object(map))?;
        Ok(PlannerSection { common, biait, ait })
    }
}

impl PlannerSection {
    pub fn is_empty(&self) -> bool {
        *self == PlannerSection::default()
    }

    pub fn apply(&self, algorithm: Algorithm, cfg: &mut PlannerConfig) {
        self.common.apply(cfg);
        let specific = match algorithm {
            Algorithm::BiAit => &self.biait,
            Algorithm::Ait => &self.ait,
        };
        if let Some(o) = specific {
            o.apply(cfg);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    #[serde(flatten)]
    pub problem: ProblemDef,
    #[serde(default, skip_serializing_if = "PlannerSection::is_empty")]
    pub planner: PlannerSection,
}

impl Scenario {
    pub fn new(name: impl Into<String>, problem: ProblemDef) -> Self {
        Scenario {
            name: name.into(),
            problem,
            planner: PlannerSection::default(),
        }
    }

    /// Parses and validates a scenario document.
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text)?;
        s.problem.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// `cfg` with this scenario's overrides for `algorithm` applied.
    pub fn config_for(&self, algorithm: Algorithm, base: &PlannerConfig) -> PlannerConfig {
        let mut cfg = base.clone();
        self.planner.apply(algorithm, &mut cfg);
        cfg
    }
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    Scenario::from_json(&fs::read_to_string(path)?)
}

pub fn save_scenario(scenario: &Scenario, path: impl AsRef<Path>) -> Result<()> {
    let mut text = scenario.to_json();
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::worlds::{builtin_world, WorldParams};
    use crate::error::Error;

    const WALL: &str = r#"{
        "name": "wall",
        "dim": 2,
        "bounds": {"lo": [0, 0], "hi": [10, 10]},
        "start": [1, 5],
        "goals": [[9, 5]],
        "obstacles": [{"type": "aabb", "min": [4.8, 0], "max": [5.2, 8]}],
        "resolution": 0.001
    }"#;

    #[test]
    fn parses_a_wall_scenario() {
        let s = Scenario::from_json(WALL).unwrap();
        assert_eq!(s.problem.obstacles.len(), 1);
        assert!(s.planner.is_empty());
    }

    #[test]
    fn missing_start_is_named() {
        let text = WALL.replace(r#""start": [1, 5],"#, "");
        let err = Scenario::from_json(&text).unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
        assert!(err.to_string().contains("start"), "{err}");
    }

    #[test]
    fn start_in_collision_is_rejected() {
        let text = WALL.replace(r#""start": [1, 5]"#, r#""start": [5, 4]"#);
        match Scenario::from_json(&text).unwrap_err() {
            Error::Invalid { field, .. } => assert_eq!(field, "start"),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn syntax_errors_report_a_line() {
        let err = Scenario::from_json("{\n \"name\": \"x\",\n oops }").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn overrides_round_trip_and_apply() {
        let mut s = Scenario::from_json(WALL).unwrap();
        s.planner.common.batch_size = Some(250);
        s.planner.ait = Some(Overrides {
            batch_size: Some(50),
            variational: Some(Variational::new(10, 1.5)),
            ..Overrides::default()
        });
        let back = Scenario::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        let base = PlannerConfig::default();
        assert_eq!(back.config_for(Algorithm::BiAit, &base).sampler.batch_size, 250);
        let ait = back.config_for(Algorithm::Ait, &base);
        assert_eq!(ait.sampler.batch_size, 50);
        assert_eq!(ait.sampler.variational, Some(Variational::new(10, 1.5)));
    }

    #[test]
    fn unknown_override_is_rejected() {
        let text = WALL.replace(
            r#""resolution": 0.001"#,
            r#""resolution": 0.001, "planner": {"bach_size": 3}"#,
        );
        assert!(Scenario::from_json(&text).is_err());
    }

    #[test]
    fn builtins_round_trip_through_files() {
        let dir = tempfile::tempdir().unwrap();
        for name in ["wallgap2d", "bugtrap2d", "maze2d", "narrow2d", "empty-d", "blocks-r7"] {
            let s = builtin_world(name, &WorldParams::default()).unwrap();
            let path = dir.path().join(format!("{name}.json"));
            save_scenario(&s, &path).unwrap();
            assert_eq!(load_scenario(&path).unwrap(), s);
        }
    }
}
