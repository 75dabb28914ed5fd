//! Experiment configuration files (TOML or JSON).
//!
//! ```toml
//! d = 1
//! sections = ["x1"]
//! target = ["3/4", "1/4"]
//!
//! [[points]]
//! w = [0, 1]
//!
//! [[points]]
//! w = [1, 0]
//! c = "1/2"
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::arith::{serde_rat, Rat};
use crate::error::{Error, Result};
use crate::metrics::{MetricSpec, MonomialPoint};
use crate::poly::HomPoly;
use crate::solver::{SolveProblem, WeightVec};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub d: usize,
    pub points: Vec<MonomialPoint>,
    /// Sections in polynomial text syntax.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sections: Vec<String>,
    #[serde(default, with = "opt_rats", skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<Rat>>,
    /// Subsets of Shilov indices to separate.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subsets: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nmax: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, with = "serde_rat::opt", skip_serializing_if = "Option::is_none")]
    pub prec: Option<Rat>,
    /// A second metric, for distances.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare: Option<SpecBlock>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecBlock {
    pub d: usize,
    pub points: Vec<MonomialPoint>,
}

mod opt_rats {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rat>>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(v) => serde_rat::vec::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<Rat>>, D::Error> {
        serde_rat::vec::deserialize(d).map(Some)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Toml,
    Json,
}

impl Format {
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Format::Json,
            _ => Format::Toml,
        }
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.len(), |k| before.len() - k - 1) + 1;
    (line, column)
}

impl ExperimentConfig {
    pub fn parse(text: &str, format: Format) -> Result<Self> {
        let cfg: ExperimentConfig = match format {
            Format::Toml => toml::from_str(text).map_err(|e| {
                let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
                Error::Parse {
                    line,
                    column,
                    message: e.message().to_string(),
                }
            })?,
            Format::Json => serde_json::from_str(text).map_err(|e| Error::Parse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?,
        };
        cfg.spec()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, Format::from_path(path))
    }

    pub fn to_text(&self, format: Format) -> Result<String> {
        match format {
            Format::Toml => toml::to_string(self).map_err(|e| Error::invalid(e.to_string())),
            Format::Json => Ok(serde_json::to_string_pretty(self)?),
        }
    }

    pub fn from_spec(spec: &MetricSpec) -> Self {
        ExperimentConfig {
            d: spec.d(),
            points: spec.points().to_vec(),
            ..Default::default()
        }
    }

    pub fn spec(&self) -> Result<MetricSpec> {
        MetricSpec::new(self.d, self.points.clone())
    }

    pub fn compare_spec(&self) -> Result<MetricSpec> {
        let block = self
            .compare
            .as_ref()
            .ok_or_else(|| Error::invalid("a [compare] metric is required"))?;
        MetricSpec::new(block.d, block.points.clone())
    }

    /// Parses the `k`-th section.
    pub fn section(&self, k: usize) -> Result<HomPoly> {
        let text = self
            .sections
            .get(k)
            .ok_or_else(|| Error::invalid(format!("section {k} is missing")))?;
        HomPoly::parse(text, self.d + 1).map_err(|e| match e {
            Error::Parse { line, column, message } => Error::Parse {
                line,
                column,
                message: format!("in section {k}: {message}"),
            },
            other => other,
        })
    }

    pub fn solve_problem(&self, target: Option<Vec<Rat>>) -> Result<SolveProblem> {
        let target = target
            .or_else(|| self.target.clone())
            .ok_or_else(|| Error::invalid("a target is required"))?;
        Ok(SolveProblem {
            d: self.d,
            points: self.points.iter().map(|p| WeightVec(p.w.clone())).collect(),
            target,
        })
    }
}

/// Serializes a spec on its own.
pub fn export_spec(spec: &MetricSpec, format: Format) -> Result<String> {
    match format {
        Format::Toml => toml::to_string(spec).map_err(|e| Error::invalid(e.to_string())),
        Format::Json => Ok(serde_json::to_string_pretty(spec)?),
    }
}

pub fn import_spec(text: &str, format: Format) -> Result<MetricSpec> {
    match format {
        Format::Toml => toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
            Error::Parse {
                line,
                column,
                message: e.message().to_string(),
            }
        }),
        Format::Json => serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    const TWO_POINT: &str = r#"
d = 1
sections = ["x1"]
target = ["3/4", "1/4"]

[[points]]
w = [0, 1]

[[points]]
w = ["1", "0"]
c = "1/2"
"#;

    #[test]
    fn parses_toml() {
        let cfg = ExperimentConfig::parse(TWO_POINT, Format::Toml).unwrap();
        let spec = cfg.spec().unwrap();
        assert_eq!(spec.points()[1].c, rat(1, 2));
        assert_eq!(cfg.section(0).unwrap(), HomPoly::parse("x1", 2).unwrap());
        assert_eq!(cfg.target, Some(vec![rat(3, 4), rat(1, 4)]));
    }

    #[test]
    fn round_trips() {
        let cfg = ExperimentConfig::parse(TWO_POINT, Format::Toml).unwrap();
        for f in [Format::Toml, Format::Json] {
            let text = cfg.to_text(f).unwrap();
            assert_eq!(ExperimentConfig::parse(&text, f).unwrap(), cfg);
            let spec = cfg.spec().unwrap();
            assert_eq!(import_spec(&export_spec(&spec, f).unwrap(), f).unwrap(), spec);
        }
    }

    #[test]
    fn errors_carry_positions() {
        let text = "d = 1\npoints = [\n  { w = [0, \"x\"] },\n]\n";
        match ExperimentConfig::parse(text, Format::Toml) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let empty = "d = 1\npoints = []\n";
        assert!(ExperimentConfig::parse(empty, Format::Toml)
            .unwrap_err()
            .is_validation());
        let json = "{\"d\": 1,\n \"points\": [{\"w\": [0, 1]}],\n \"nmax\": \"x\"}";
        match ExperimentConfig::parse(json, Format::Json) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let cfg = ExperimentConfig {
            d: 1,
            points: vec![MonomialPoint::new(vec![int(0), int(1)], int(0))],
            sections: vec!["x0 +\n  x7".into()],
            ..Default::default()
        };
        assert!(matches!(cfg.section(0), Err(Error::Parse { line: 2, .. })));
    }
}
