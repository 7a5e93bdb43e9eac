//! Serializable document types: the configuration file schema and the
//! report schemas emitted by the CLI. All documents are plain `f64` and
//! carry a `schema_version` field.

use crate::error::{Error, Result};
use crate::geom::{Configuration, Cp1Point, Space};
use crate::scalar::{from_f64, to_f64, Real};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// One point of a configuration document: a coordinate array
/// (`[x, y, z]` for the spatial geometries, `[re, im]` for the projective
/// line) or the string `"inf"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointDoc {
    Coords(Vec<f64>),
    Symbol(String),
}

/// Configuration file schema: `{"space": ..., "points": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigDoc {
    pub space: Space,
    pub points: Vec<PointDoc>,
}

impl ConfigDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::schema(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config documents always serialize")
    }

    pub fn from_configuration<T: Real>(cfg: &Configuration<T>) -> Self {
        let points = match cfg.space() {
            Space::Cp1 => cfg
                .cp1_points()
                .iter()
                .map(|p| match p {
                    Cp1Point::Infinity => PointDoc::Symbol("inf".to_string()),
                    Cp1Point::Finite(z) => PointDoc::Coords(vec![to_f64(z.re), to_f64(z.im)]),
                })
                .collect(),
            _ => cfg
                .spatial_points()
                .iter()
                .map(|p| PointDoc::Coords(vec![to_f64(p[0]), to_f64(p[1]), to_f64(p[2])]))
                .collect(),
        };
        ConfigDoc { space: cfg.space(), points }
    }

    /// Validate against the schema and build a configuration. Arity and
    /// symbol errors name the offending field; distinctness violations come
    /// back as degenerate-configuration errors.
    pub fn to_configuration<T: Real>(&self) -> Result<Configuration<T>> {
        match self.space {
            Space::Cp1 => {
                let mut pts = Vec::with_capacity(self.points.len());
                for (idx, p) in self.points.iter().enumerate() {
                    match p {
                        PointDoc::Symbol(s) if s == "inf" => pts.push(Cp1Point::Infinity),
                        PointDoc::Symbol(s) => {
                            return Err(Error::schema(format!(
                                "points[{idx}]: unknown symbol {s:?} (only \"inf\" is allowed)"
                            )))
                        }
                        PointDoc::Coords(c) if c.len() == 2 => pts.push(Cp1Point::Finite(
                            Complex::new(from_f64(c[0]), from_f64(c[1])),
                        )),
                        PointDoc::Coords(c) => {
                            return Err(Error::schema(format!(
                                "points[{idx}]: cp1 points need [re, im], got {} coordinates",
                                c.len()
                            )))
                        }
                    }
                }
                Configuration::cp1(pts)
            }
            space => {
                let mut pts = Vec::with_capacity(self.points.len());
                for (idx, p) in self.points.iter().enumerate() {
                    match p {
                        PointDoc::Coords(c) if c.len() == 3 => {
                            pts.push([from_f64(c[0]), from_f64(c[1]), from_f64(c[2])])
                        }
                        PointDoc::Coords(c) => {
                            return Err(Error::schema(format!(
                                "points[{idx}]: {space} points need [x, y, z], got {} coordinates",
                                c.len()
                            )))
                        }
                        PointDoc::Symbol(s) => {
                            return Err(Error::schema(format!(
                                "points[{idx}]: {space} points must be coordinate arrays, got {s:?}"
                            )))
                        }
                    }
                }
                match space {
                    Space::Euclidean => Configuration::euclidean(pts),
                    Space::Hyperbolic => Configuration::hyperbolic(pts),
                    Space::Cp1 => unreachable!(),
                }
            }
        }
    }
}

/// JSON report for a single determinant evaluation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DetReportDoc {
    pub schema_version: u32,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    pub log10_abs: f64,
    pub n: usize,
    pub d: usize,
    pub mode: String,
    pub space: String,
    pub wall_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gauge_spread: Option<f64>,
}

impl DetReportDoc {
    pub fn from_report<T: Real>(rep: &crate::maps::DeterminantReport<T>) -> Self {
        DetReportDoc {
            schema_version: SCHEMA_VERSION,
            re: to_f64(rep.value.re),
            im: to_f64(rep.value.im),
            abs: to_f64(rep.abs),
            log10_abs: to_f64(rep.log10_abs),
            n: rep.n,
            d: rep.d,
            mode: rep.mode.to_string(),
            space: rep.space.to_string(),
            wall_ms: rep.wall_time.as_secs_f64() * 1e3,
            gauge_spread: rep.gauge_spread.map(to_f64),
        }
    }
}

/// JSON report for a `|D|` minimization run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinimizeReportDoc {
    pub schema_version: u32,
    pub n: usize,
    pub d: usize,
    pub mode: String,
    pub space: String,
    pub seed: u64,
    pub budget: usize,
    pub best_abs_d: f64,
    pub iterations: usize,
    pub converged: bool,
    pub best_config: ConfigDoc,
    /// `(iteration, best-so-far |D|)` improvements.
    pub trace: Vec<(usize, f64)>,
}

impl MinimizeReportDoc {
    pub fn from_result<T: Real>(
        res: &crate::verify::MinimizeResult<T>,
        d: usize,
        mode: crate::maps::ConstructionMode,
        seed: u64,
        budget: usize,
    ) -> Self {
        MinimizeReportDoc {
            schema_version: SCHEMA_VERSION,
            n: res.best_config.len(),
            d,
            mode: mode.to_string(),
            space: res.best_config.space().to_string(),
            seed,
            budget,
            best_abs_d: to_f64(res.best_abs_d),
            iterations: res.iterations,
            converged: res.converged,
            best_config: ConfigDoc::from_configuration(&res.best_config),
            trace: res.trace.iter().map(|&(i, v)| (i, to_f64(v))).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_document_round_trips() {
        let doc = ConfigDoc::from_json(
            r#"{"space":"euclidean","points":[[0,0,0],[1,0.5,-2]]}"#,
        )
        .unwrap();
        let cfg: Configuration<f64> = doc.to_configuration().unwrap();
        let back = ConfigDoc::from_configuration(&cfg);
        let cfg2: Configuration<f64> = back.to_configuration().unwrap();
        assert_eq!(cfg, cfg2);
    }

    #[test]
    fn cp1_document_round_trips_including_infinity() {
        let doc =
            ConfigDoc::from_json(r#"{"space":"cp1","points":[[0,0],[1,-2.5],"inf"]}"#).unwrap();
        let cfg: Configuration<f64> = doc.to_configuration().unwrap();
        let back = ConfigDoc::from_configuration(&cfg);
        assert_eq!(doc, back);
        let cfg2: Configuration<f64> = back.to_configuration().unwrap();
        assert_eq!(cfg, cfg2);
    }

    #[test]
    fn schema_errors_name_the_field() {
        let doc = ConfigDoc::from_json(r#"{"space":"euclidean","points":[[0,0,0],[1,2]]}"#)
            .unwrap();
        let err = doc.to_configuration::<f64>().unwrap_err();
        assert!(err.to_string().contains("points[1]"), "{err}");

        let doc = ConfigDoc::from_json(r#"{"space":"cp1","points":[[0,0],"oo"]}"#).unwrap();
        let err = doc.to_configuration::<f64>().unwrap_err();
        assert!(err.to_string().contains("points[1]"), "{err}");
    }

    #[test]
    fn ball_membership_is_a_schema_level_failure() {
        let doc = ConfigDoc::from_json(
            r#"{"space":"hyperbolic","points":[[0,0,0],[1.2,0,0]]}"#,
        )
        .unwrap();
        let err = doc.to_configuration::<f64>().unwrap_err();
        assert!(matches!(err, Error::PointOutsideBall { index: 2, .. }));
    }
}
