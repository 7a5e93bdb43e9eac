//! Randomized campaigns: invariance checks, conjecture scans and the
//! projective delta-pattern verification.

use crate::error::{Error, Result};
use crate::geom::{gauge_perturb, Configuration, Cp1Point, Space};
use crate::io::{ConfigDoc, SCHEMA_VERSION};
use crate::linalg::{lu_determinant, DetValue};
use crate::maps::{
    assemble_matrix, cp1_pairing_matrix, determinant_table, determinant_with_table, family,
    ConstructionMode,
};
use crate::scalar::{to_f64, Real};
use crate::seeding::derive_seed;
use crate::verify::sample::{
    permuted_configuration, random_permutation, random_rotation, sample_configuration,
    transformed_configuration,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Gauge re-randomizations per trial.
pub const GAUGE_DRAWS: usize = 10;
/// Random relabelings per trial.
pub const PERM_DRAWS: usize = 20;
/// Random rotation/translation/scaling maps per trial (Euclidean only).
pub const ISO_DRAWS: usize = 10;
/// `|D| < 1 - CANDIDATE_MARGIN` flags a candidate counterexample.
pub const CANDIDATE_MARGIN: f64 = 1e-6;
/// Off-diagonal pairing entries must stay below this fraction of the row max.
pub const DELTA_OFF_TOL: f64 = 1e-10;
/// Diagonal pairing entries must exceed this fraction of the row max.
pub const DELTA_DIAG_TOL: f64 = 1e-8;

/// Parameters of a randomized campaign.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CampaignSpec {
    pub n: usize,
    pub d: usize,
    pub mode: ConstructionMode,
    pub space: Space,
    pub trials: usize,
    pub seed: u64,
    pub gauge_tol: f64,
    pub perm_tol: f64,
    pub iso_tol: f64,
}

impl CampaignSpec {
    pub fn new(n: usize, d: usize, mode: ConstructionMode, space: Space) -> Self {
        CampaignSpec {
            n,
            d,
            mode,
            space,
            trials: 100,
            seed: 0,
            gauge_tol: 1e-9,
            perm_tol: 1e-9,
            iso_tol: 1e-9,
        }
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("campaign needs at least one trial"));
        }
        if self.gauge_tol <= 0.0 || self.perm_tol <= 0.0 || self.iso_tol <= 0.0 {
            return Err(Error::invalid("campaign tolerances must be positive"));
        }
        if self.n < 2 || self.d == 0 || self.d >= self.n {
            return Err(Error::invalid(format!(
                "campaign needs 1 <= d <= n-1, got n={}, d={}",
                self.n, self.d
            )));
        }
        if !self.mode.compatible_with(self.space) {
            return Err(Error::invalid(format!(
                "mode {} is not valid for space {}",
                self.mode, self.space
            )));
        }
        Ok(())
    }
}

/// A measured deviation beyond tolerance, with the configuration that
/// produced it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Violation {
    pub trial: usize,
    pub invariant: String,
    pub config: ConfigDoc,
    pub measured: f64,
    pub tolerance: f64,
}

/// A configuration whose `|D|` dips below the conjectured bound. A finding,
/// not a failure.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Candidate {
    pub trial: usize,
    pub config: ConfigDoc,
    pub abs_d: f64,
}

/// Outcome of a campaign. `violations` is empty exactly when every pass
/// count equals the trial count.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CampaignReport {
    pub schema_version: u32,
    pub kind: String,
    pub spec: CampaignSpec,
    pub abs_d: Vec<f64>,
    pub min_abs_d: f64,
    pub min_config: Option<ConfigDoc>,
    pub pass_counts: BTreeMap<String, usize>,
    pub violations: Vec<Violation>,
    pub candidates: Vec<Candidate>,
}

impl CampaignReport {
    fn new(kind: &str, spec: CampaignSpec) -> Self {
        CampaignReport {
            schema_version: SCHEMA_VERSION,
            kind: kind.to_string(),
            spec,
            abs_d: Vec::new(),
            min_abs_d: f64::INFINITY,
            min_config: None,
            pass_counts: BTreeMap::new(),
            violations: Vec::new(),
            candidates: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("campaign reports always serialize")
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

struct TrialOutcome {
    abs_d: f64,
    config: ConfigDoc,
    gauge_ok: Option<bool>,
    perm_ok: Option<bool>,
    iso_ok: Option<bool>,
    delta_ok: Option<bool>,
    nonsingular_ok: Option<bool>,
    violations: Vec<Violation>,
    candidate: Option<Candidate>,
}

fn fold_outcomes(kind: &str, spec: CampaignSpec, outcomes: Vec<TrialOutcome>) -> CampaignReport {
    let mut report = CampaignReport::new(kind, spec);
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for out in outcomes {
        report.abs_d.push(out.abs_d);
        if out.abs_d < report.min_abs_d {
            report.min_abs_d = out.abs_d;
            report.min_config = Some(out.config.clone());
        }
        for (name, ok) in [
            ("gauge", out.gauge_ok),
            ("permutation", out.perm_ok),
            ("isometry", out.iso_ok),
            ("delta", out.delta_ok),
            ("nonsingular", out.nonsingular_ok),
        ] {
            if let Some(ok) = ok {
                let entry = counts.entry(name.to_string()).or_insert(0);
                if ok {
                    *entry += 1;
                }
            }
        }
        report.violations.extend(out.violations);
        report.candidates.extend(out.candidate);
    }
    report.pass_counts = counts;
    report
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64 + 1);
    rng
}

/// Evaluate `D` of a configuration with its canonical table.
fn canonical_det<T: Real>(
    cfg: &Configuration<T>,
    d: usize,
    mode: ConstructionMode,
) -> Result<DetValue<T>> {
    let table = determinant_table(cfg)?;
    determinant_with_table(cfg, d, mode, &table)
}

/// Sample configurations and re-evaluate `D` under random gauges, random
/// relabelings and (for Euclidean space) random similarity transforms,
/// recording any relative deviation beyond the campaign tolerances.
pub fn run_invariance_campaign<T: Real>(spec: &CampaignSpec) -> Result<CampaignReport> {
    run_invariance_like::<T>(spec, "invariance", true)
}

/// Gauge-only variant of the invariance campaign.
pub fn run_gauge_campaign<T: Real>(spec: &CampaignSpec) -> Result<CampaignReport> {
    run_invariance_like::<T>(spec, "gauge", false)
}

fn run_invariance_like<T: Real>(
    spec: &CampaignSpec,
    kind: &str,
    with_symmetries: bool,
) -> Result<CampaignReport> {
    spec.validate()?;
    let outcomes: Vec<TrialOutcome> = (0..spec.trials)
        .into_par_iter()
        .map(|trial| -> Result<TrialOutcome> {
            let mut rng = trial_rng(spec.seed, trial);
            let cfg: Configuration<T> = sample_configuration(spec.space, spec.n, &mut rng)?;
            let doc = ConfigDoc::from_configuration(&cfg);
            let table = determinant_table(&cfg)?;
            let base = determinant_with_table(&cfg, spec.d, spec.mode, &table)?;
            let mut violations = Vec::new();

            let gauge_seed = derive_seed(spec.seed, trial as u64);
            let mut gauge_dev = 0.0f64;
            for g in 0..GAUGE_DRAWS {
                let perturbed = gauge_perturb(&table, derive_seed(gauge_seed, g as u64));
                let dg = determinant_with_table(&cfg, spec.d, spec.mode, &perturbed)?;
                gauge_dev = gauge_dev.max(to_f64(dg.rel_diff(&base)));
            }
            let gauge_ok = gauge_dev <= spec.gauge_tol;
            if !gauge_ok {
                violations.push(Violation {
                    trial,
                    invariant: "gauge".to_string(),
                    config: doc.clone(),
                    measured: gauge_dev,
                    tolerance: spec.gauge_tol,
                });
            }

            let (perm_ok, iso_ok) = if with_symmetries {
                let mut perm_dev = 0.0f64;
                for _ in 0..PERM_DRAWS {
                    let perm = random_permutation(spec.n, &mut rng);
                    let permuted = permuted_configuration(&cfg, &perm)?;
                    let dp = canonical_det(&permuted, spec.d, spec.mode)?;
                    perm_dev = perm_dev.max(to_f64(dp.rel_diff(&base)));
                }
                let perm_ok = perm_dev <= spec.perm_tol;
                if !perm_ok {
                    violations.push(Violation {
                        trial,
                        invariant: "permutation".to_string(),
                        config: doc.clone(),
                        measured: perm_dev,
                        tolerance: spec.perm_tol,
                    });
                }

                let iso_ok = if spec.space == Space::Euclidean {
                    let mut iso_dev = 0.0f64;
                    for _ in 0..ISO_DRAWS {
                        let rot = random_rotation(&mut rng);
                        let shift = [
                            rng.gen_range(-2.0..2.0),
                            rng.gen_range(-2.0..2.0),
                            rng.gen_range(-2.0..2.0),
                        ];
                        let scale = rng.gen_range(-1.0f64..1.0).exp();
                        let moved = transformed_configuration(&cfg, &rot, shift, scale)?;
                        let dm = canonical_det(&moved, spec.d, spec.mode)?;
                        iso_dev = iso_dev.max(to_f64(dm.rel_diff(&base)));
                    }
                    let ok = iso_dev <= spec.iso_tol;
                    if !ok {
                        violations.push(Violation {
                            trial,
                            invariant: "isometry".to_string(),
                            config: doc.clone(),
                            measured: iso_dev,
                            tolerance: spec.iso_tol,
                        });
                    }
                    Some(ok)
                } else {
                    None
                };
                (Some(perm_ok), iso_ok)
            } else {
                (None, None)
            };

            Ok(TrialOutcome {
                abs_d: to_f64(base.abs()),
                config: doc,
                gauge_ok: Some(gauge_ok),
                perm_ok,
                iso_ok,
                delta_ok: None,
                nonsingular_ok: None,
                violations,
                candidate: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fold_outcomes(kind, spec.clone(), outcomes))
}

/// Sample configurations and record `|D|`, flagging every value below
/// `1 - CANDIDATE_MARGIN` as a candidate counterexample. Candidates are
/// findings in the report, never errors.
pub fn run_conjecture_scan<T: Real>(spec: &CampaignSpec) -> Result<CampaignReport> {
    spec.validate()?;
    if spec.space == Space::Cp1 {
        return Err(Error::invalid(
            "conjecture scans run on euclidean or hyperbolic configurations",
        ));
    }
    let outcomes: Vec<TrialOutcome> = (0..spec.trials)
        .into_par_iter()
        .map(|trial| -> Result<TrialOutcome> {
            let mut rng = trial_rng(spec.seed, trial);
            let cfg: Configuration<T> = sample_configuration(spec.space, spec.n, &mut rng)?;
            let doc = ConfigDoc::from_configuration(&cfg);
            let det = canonical_det(&cfg, spec.d, spec.mode)?;
            let abs_d = to_f64(det.abs());
            let candidate = if abs_d < 1.0 - CANDIDATE_MARGIN {
                Some(Candidate { trial, config: doc.clone(), abs_d })
            } else {
                None
            };
            Ok(TrialOutcome {
                abs_d,
                config: doc,
                gauge_ok: None,
                perm_ok: None,
                iso_ok: None,
                delta_ok: None,
                nonsingular_ok: None,
                violations: Vec::new(),
                candidate,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fold_outcomes("scan", spec.clone(), outcomes))
}

/// Verify the projective delta pattern on random configurations: the
/// pairing matrix must be diagonal (off-diagonal below `DELTA_OFF_TOL` of
/// the row max, diagonal above `DELTA_DIAG_TOL` of it) and the coefficient
/// matrix nonsingular. Every fourth trial replaces the last point with the
/// point at infinity.
pub fn cp1_delta_check<T: Real>(
    n: usize,
    d: usize,
    mode: ConstructionMode,
    trials: usize,
    seed: u64,
) -> Result<CampaignReport> {
    if !mode.is_projective() {
        return Err(Error::invalid("cp1_delta_check needs a cp1 construction mode"));
    }
    let spec = CampaignSpec::new(n, d, mode, Space::Cp1).with_trials(trials).with_seed(seed);
    spec.validate()?;
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<TrialOutcome> {
            let mut rng = trial_rng(seed, trial);
            let cfg: Configuration<T> = loop {
                let drawn = sample_configuration(Space::Cp1, n, &mut rng)?;
                if trial % 4 != 3 {
                    break drawn;
                }
                // swap in the point at infinity; retry on chordal collision
                let mut pts = drawn.cp1_points().to_vec();
                pts[n - 1] = Cp1Point::Infinity;
                if let Ok(cfg) = Configuration::cp1(pts) {
                    break cfg;
                }
            };
            let doc = ConfigDoc::from_configuration(&cfg);
            let mut violations = Vec::new();

            let pairing = cp1_pairing_matrix(&cfg, d, mode)?;
            let mut worst_off = 0.0f64;
            let mut worst_diag = f64::INFINITY;
            for r in 0..pairing.n() {
                let row_max = to_f64(pairing.row_max_abs(r));
                if row_max == 0.0 {
                    worst_diag = 0.0;
                    continue;
                }
                worst_diag = worst_diag.min(to_f64(pairing.at(r, r).norm()) / row_max);
                for c in 0..pairing.n() {
                    if c != r {
                        worst_off = worst_off.max(to_f64(pairing.at(r, c).norm()) / row_max);
                    }
                }
            }
            let delta_ok = worst_off <= DELTA_OFF_TOL && worst_diag >= DELTA_DIAG_TOL;
            if worst_off > DELTA_OFF_TOL {
                violations.push(Violation {
                    trial,
                    invariant: "delta-offdiagonal".to_string(),
                    config: doc.clone(),
                    measured: worst_off,
                    tolerance: DELTA_OFF_TOL,
                });
            }
            if worst_diag < DELTA_DIAG_TOL {
                violations.push(Violation {
                    trial,
                    invariant: "delta-diagonal".to_string(),
                    config: doc.clone(),
                    measured: worst_diag,
                    tolerance: DELTA_DIAG_TOL,
                });
            }

            let table = crate::geom::build_lift_table(&cfg)?;
            let fam = family(&cfg, d, mode, &table)?;
            let det = lu_determinant(&assemble_matrix(&fam));
            let nonsingular_ok = !det.is_zero;
            if !nonsingular_ok {
                violations.push(Violation {
                    trial,
                    invariant: "nonsingular".to_string(),
                    config: doc.clone(),
                    measured: 0.0,
                    tolerance: 0.0,
                });
            }

            Ok(TrialOutcome {
                abs_d: to_f64(det.abs()),
                config: doc,
                gauge_ok: None,
                perm_ok: None,
                iso_ok: None,
                delta_ok: Some(delta_ok),
                nonsingular_ok: Some(nonsingular_ok),
                violations,
                candidate: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fold_outcomes("cp1-delta", spec, outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_campaign_sees_unit_determinant() {
        for space in [Space::Euclidean, Space::Hyperbolic, Space::Cp1] {
            let mode = ConstructionMode::for_space(space, false);
            let spec = CampaignSpec::new(2, 1, mode, space).with_trials(20).with_seed(3);
            let report = run_invariance_campaign::<f64>(&spec).unwrap();
            assert!(report.passed(), "{space}: {:?}", report.violations);
            for v in &report.abs_d {
                assert!((v - 1.0).abs() < 1e-12, "{space}: |D|={v}");
            }
        }
    }

    #[test]
    fn campaigns_are_deterministic_in_the_seed() {
        let spec = CampaignSpec::new(4, 2, ConstructionMode::Observer, Space::Euclidean)
            .with_trials(8)
            .with_seed(99);
        let a = run_invariance_campaign::<f64>(&spec).unwrap();
        let b = run_invariance_campaign::<f64>(&spec).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn scan_reports_min_abs_d() {
        let spec = CampaignSpec::new(3, 1, ConstructionMode::Observer, Space::Euclidean)
            .with_trials(50)
            .with_seed(1);
        let report = run_conjecture_scan::<f64>(&spec).unwrap();
        assert_eq!(report.abs_d.len(), 50);
        assert!(report.min_abs_d >= 1.0 - 1e-9, "min |D| = {}", report.min_abs_d);
        assert!(report.candidates.is_empty());
        assert!(report.min_config.is_some());
    }

    #[test]
    fn delta_check_passes_with_infinity_in_the_mix() {
        for mode in [ConstructionMode::Cp1Observer, ConstructionMode::Cp1Star] {
            let report = cp1_delta_check::<f64>(5, 2, mode, 24, 7).unwrap();
            assert!(report.passed(), "{mode}: {:?}", report.violations);
            assert_eq!(report.pass_counts["delta"], 24);
            assert_eq!(report.pass_counts["nonsingular"], 24);
        }
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let spec = CampaignSpec::new(3, 1, ConstructionMode::Cp1Observer, Space::Euclidean);
        assert!(run_invariance_campaign::<f64>(&spec).is_err());
        let spec = CampaignSpec::new(3, 3, ConstructionMode::Observer, Space::Euclidean);
        assert!(run_invariance_campaign::<f64>(&spec).is_err());
        let spec = CampaignSpec::new(3, 1, ConstructionMode::Cp1Observer, Space::Cp1);
        assert!(run_conjecture_scan::<f64>(&spec).is_err());
    }
}
