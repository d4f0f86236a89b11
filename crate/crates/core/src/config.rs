//! Experiment configuration (JSON, schema version 1).
//!
//! ```json
//! {
//!   "version": 1,
//!   "name": "half-plane",
//!   "cone": { "dimension": 2, "generators": [[1, 0], [0, 1]] },
//!   "module": { "form": "halfspace", "constraints": [{ "normal": [1, 1], "offset": 0 }] },
//!   "window": { "lower": [-3, -3], "upper": [3, 3] },
//!   "flow_window": { "lower": [-1, -1], "upper": [2, 1] },
//!   "search_box": { "lower": [-5, -5], "upper": [5, 5] },
//!   "shifts": [[1, 0], [0, 1]],
//!   "tolerance": 1e-10,
//!   "fock_cap": 4096,
//!   "seed": 42,
//!   "samples": 20,
//!   "suite": ["car_relations", "symmetry_classification"]
//! }
//! ```
//!
//! Lattice data are integers only. Everything except `cone`, `module` and
//! `window` has a default.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::MAX_MODES;
use crate::lattice::{ConeSpec, Halfspace, ModuleSpec, Point, Window};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_FOCK_CAP: usize = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    CarRelations,
    Functoriality,
    KernelDecomposition,
    FiberIsometry,
    SignTable,
    ProductLaws,
    PhiAntihomomorphism,
    DefiningRelation,
    Semigroup,
    SymmetryClassification,
    SymmetryWitness,
}

impl CheckName {
    pub const ALL: [CheckName; 11] = [
        CheckName::CarRelations,
        CheckName::Functoriality,
        CheckName::KernelDecomposition,
        CheckName::FiberIsometry,
        CheckName::SignTable,
        CheckName::ProductLaws,
        CheckName::PhiAntihomomorphism,
        CheckName::DefiningRelation,
        CheckName::Semigroup,
        CheckName::SymmetryClassification,
        CheckName::SymmetryWitness,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::CarRelations => "car_relations",
            Self::Functoriality => "functoriality",
            Self::KernelDecomposition => "kernel_decomposition",
            Self::FiberIsometry => "fiber_isometry",
            Self::SignTable => "sign_table",
            Self::ProductLaws => "product_laws",
            Self::PhiAntihomomorphism => "phi_antihomomorphism",
            Self::DefiningRelation => "defining_relation",
            Self::Semigroup => "semigroup",
            Self::SymmetryClassification => "symmetry_classification",
            Self::SymmetryWitness => "symmetry_witness",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeConfig {
    pub dimension: usize,
    pub generators: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintConfig {
    pub normal: Vec<i64>,
    pub offset: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleConfig {
    Halfspace { constraints: Vec<ConstraintConfig> },
    Translates { offsets: Vec<Vec<i64>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxConfig {
    pub lower: Vec<i64>,
    pub upper: Vec<i64>,
}

fn default_version() -> u32 {
    SCHEMA_VERSION
}
fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}
fn default_cap() -> usize {
    DEFAULT_FOCK_CAP
}
fn default_samples() -> usize {
    20
}
fn default_suite() -> Vec<CheckName> {
    CheckName::ALL.to_vec()
}

/// The raw configuration, as read and as echoed into reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_version")]
    pub version: u32,
    #[serde(default)]
    pub name: String,
    pub cone: ConeConfig,
    pub module: ModuleConfig,
    pub window: BoxConfig,
    /// Window for the ambient Fock space of the flow checks; defaults to `window`.
    #[serde(default)]
    pub flow_window: Option<BoxConfig>,
    /// Translation search box; defaults to `window`.
    #[serde(default)]
    pub search_box: Option<BoxConfig>,
    /// Cone elements used by the shift-dependent checks; defaults to the generators.
    #[serde(default)]
    pub shifts: Vec<Vec<i64>>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_cap")]
    pub fock_cap: usize,
    #[serde(default)]
    pub seed: u64,
    /// Random pairs per sampled check.
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_suite")]
    pub suite: Vec<CheckName>,
}

/// A validated configuration with the lattice objects built.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub cone: ConeSpec,
    pub module: ModuleSpec,
    pub window: Window,
    pub flow_window: Window,
    pub search_box: Window,
    pub shifts: Vec<Point>,
}

fn window_from(b: &BoxConfig, dim: usize, field: &str) -> Result<Window> {
    if b.lower.len() != dim || b.upper.len() != dim {
        return Err(Error::Config(format!(
            "{field}: corners must have dimension {dim}"
        )));
    }
    Window::new(b.lower.clone(), b.upper.clone()).map_err(|e| match e {
        Error::InvertedWindow => Error::Config(format!("{field}: window corners inverted")),
        other => Error::Config(format!("{field}: {other}")),
    })
}

/// Parses and validates a configuration. Syntax errors carry line and column.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let config: ExperimentConfig = serde_json::from_str(text)
        .map_err(|e| Error::Config(format!("line {} column {}: {e}", e.line(), e.column())))?;
    config.build()?;
    Ok(config)
}

impl ExperimentConfig {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn build(&self) -> Result<Experiment> {
        if self.version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                self.version
            )));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Config("tolerance must be positive".into()));
        }
        if self.fock_cap > 1 << MAX_MODES {
            return Err(Error::Config(format!(
                "fock_cap: cap exceeds 2^{MAX_MODES}"
            )));
        }
        if self.fock_cap == 0 {
            return Err(Error::Config("fock_cap must be positive".into()));
        }
        let d = self.cone.dimension;
        let cone = ConeSpec::new(
            d,
            self.cone
                .generators
                .iter()
                .cloned()
                .map(Point::new)
                .collect(),
        )
        .map_err(|e| Error::Config(format!("cone: {e}")))?;

        let module = match &self.module {
            ModuleConfig::Halfspace { constraints } => {
                let mut hs = Vec::with_capacity(constraints.len());
                for (i, c) in constraints.iter().enumerate() {
                    if c.normal.len() != d {
                        return Err(Error::Config(format!(
                            "module.constraints[{i}]: normal must have dimension {d}"
                        )));
                    }
                    let normal = Point::new(c.normal.clone());
                    if let Some(g) = cone.generators().iter().find(|g| normal.dot(g) < 0) {
                        return Err(Error::Config(format!(
                            "module.constraints[{i}]: normal {normal} not in dual cone (pairs negatively with generator {g})"
                        )));
                    }
                    hs.push(Halfspace {
                        normal,
                        offset: c.offset,
                    });
                }
                ModuleSpec::halfspaces(d, hs)
            }
            ModuleConfig::Translates { offsets } => {
                if offsets.is_empty() {
                    return Err(Error::Config("module.offsets: must be non-empty".into()));
                }
                if let Some(i) = offsets.iter().position(|o| o.len() != d) {
                    return Err(Error::Config(format!(
                        "module.offsets[{i}]: must have dimension {d}"
                    )));
                }
                ModuleSpec::translates(
                    cone.clone(),
                    offsets.iter().cloned().map(Point::new).collect(),
                )
            }
        };

        let window = window_from(&self.window, d, "window")?;
        let flow_window = match &self.flow_window {
            Some(b) => window_from(b, d, "flow_window")?,
            None => window.clone(),
        };
        let search_box = match &self.search_box {
            Some(b) => window_from(b, d, "search_box")?,
            None => window.clone(),
        };
        let shifts: Vec<Point> = if self.shifts.is_empty() {
            cone.generators().to_vec()
        } else {
            self.shifts.iter().cloned().map(Point::new).collect()
        };
        for (i, x) in shifts.iter().enumerate() {
            if x.dim() != d || !cone.contains(x) {
                return Err(Error::Config(format!(
                    "shifts[{i}]: {x} is not in the cone"
                )));
            }
        }
        Ok(Experiment {
            config: self.clone(),
            cone,
            module,
            window,
            flow_window,
            search_box,
            shifts,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HALF_PLANE: &str = include_str!("../fixtures/halfplane.json");

    #[test]
    fn bundled_half_plane() {
        let c = parse_config(HALF_PLANE).unwrap();
        let e = c.build().unwrap();
        assert_eq!(e.cone.dim(), 2);
        assert_eq!(e.module, ModuleSpec::halfspace([1, 1], 0));
    }

    #[test]
    fn inverted_window_rejected() {
        let text = HALF_PLANE.replace(
            r#""lower": [-3, -3], "upper": [3, 3]"#,
            r#""lower": [3, 3], "upper": [-3, -3]"#,
        );
        assert_ne!(text, HALF_PLANE);
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("window corners inverted"), "{err}");
    }

    #[test]
    fn oversized_cap_rejected() {
        let text = HALF_PLANE.replace(r#""fock_cap": 4096"#, r#""fock_cap": 1048576"#);
        assert_ne!(text, HALF_PLANE);
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("cap exceeds 2^14"), "{err}");
    }

    #[test]
    fn syntax_error_has_location() {
        let err = parse_config("{\n  \"cone\": ,\n}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn normal_outside_dual_cone() {
        let text = HALF_PLANE.replace(r#""normal": [1, 1]"#, r#""normal": [1, -1]"#);
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("not in dual cone"), "{err}");
    }

    #[test]
    fn echo_round_trip() {
        let c = parse_config(HALF_PLANE).unwrap();
        assert_eq!(parse_config(&c.to_json()).unwrap(), c);
    }
}
