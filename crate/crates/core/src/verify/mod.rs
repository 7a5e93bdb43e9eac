//! Oracles, invariance campaigns and conjecture probes.
//!
//! Everything here is deterministic in its seed: campaign trials draw from
//! per-trial ChaCha streams, so reports are bitwise reproducible on one
//! platform regardless of worker scheduling.

mod campaign;
mod minimize;
mod oracle;
mod sample;

pub use campaign::{
    cp1_delta_check, run_conjecture_scan, run_gauge_campaign, run_invariance_campaign, Candidate,
    CampaignReport, CampaignSpec, Violation, CANDIDATE_MARGIN, DELTA_DIAG_TOL, DELTA_OFF_TOL,
    GAUGE_DRAWS, ISO_DRAWS, PERM_DRAWS,
};
pub use minimize::{minimize_abs_d, MinimizeResult};
pub use oracle::classical_as_determinant;
pub use sample::{
    permuted_configuration, random_permutation, random_rotation, sample_configuration,
    transformed_configuration,
};
