//! The polynomial constructions: observer-based and star-based families,
//! their projective specializations, matrix assembly in the monomial basis
//! indexed by subsets, and the normalized determinant.
//!
//! For a configuration of `n` points and a split `n = d + k`, each subset
//! `I` yields a degree-`d` homogeneous polynomial `p_I` in `k + 1`
//! variables. The `binom(n, d)` polynomials are stacked as columns of a
//! square matrix over the monomial basis; its determinant `D` is invariant
//! under the symplectic gauge freedom of the Hopf lifts.

use crate::algebra::{
    binary_product, enumerate_subsets, lambda_form, pairing, product_linear_forms, BinaryPoly,
    MultiPoly, SubsetIndex,
};
use crate::error::{Error, Result};
use crate::geom::{build_lift_table, Configuration, HopfLift, HopfLiftTable, Space};
use crate::linalg::{lu_determinant, CMatrix, DetValue};
use crate::scalar::{Real, C};
use crate::seeding::derive_seed;
use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::{Duration, Instant};

/// Which construction builds the family. Observer splits take `d` observers
/// and product over the `k` stars; star splits fix one star at a time and
/// product over the `k` observers. The `cp1` variants are the projective
/// specializations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructionMode {
    Observer,
    Star,
    Cp1Observer,
    Cp1Star,
}

impl ConstructionMode {
    pub fn space_kind(&self) -> &'static str {
        match self {
            ConstructionMode::Observer | ConstructionMode::Star => "spatial",
            _ => "projective",
        }
    }

    pub fn is_projective(&self) -> bool {
        matches!(self, ConstructionMode::Cp1Observer | ConstructionMode::Cp1Star)
    }

    /// Cardinality of the column-index subsets for a given `(n, d)`.
    pub fn column_cardinality(&self, n: usize, d: usize) -> usize {
        match self {
            ConstructionMode::Observer | ConstructionMode::Cp1Observer => d,
            ConstructionMode::Star | ConstructionMode::Cp1Star => n - d,
        }
    }

    pub fn compatible_with(&self, space: Space) -> bool {
        match self {
            ConstructionMode::Observer | ConstructionMode::Star => {
                matches!(space, Space::Euclidean | Space::Hyperbolic)
            }
            _ => matches!(space, Space::Cp1),
        }
    }

    /// The mode implementing a plain observer/star choice in a given space.
    pub fn for_space(space: Space, star: bool) -> ConstructionMode {
        match (space, star) {
            (Space::Cp1, false) => ConstructionMode::Cp1Observer,
            (Space::Cp1, true) => ConstructionMode::Cp1Star,
            (_, false) => ConstructionMode::Observer,
            (_, true) => ConstructionMode::Star,
        }
    }
}

impl std::fmt::Display for ConstructionMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ConstructionMode::Observer => "observer",
            ConstructionMode::Star => "star",
            ConstructionMode::Cp1Observer => "cp1-observer",
            ConstructionMode::Cp1Star => "cp1-star",
        })
    }
}

/// The family `{p_I}` for one configuration: one degree-`d` polynomial in
/// `k + 1` variables per column subset, columns in lexicographic subset
/// order.
#[derive(Clone, Debug)]
pub struct PolyFamily<T: Real> {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub mode: ConstructionMode,
    subsets: Vec<SubsetIndex>,
    members: Vec<MultiPoly<T>>,
}

impl<T: Real> PolyFamily<T> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn subsets(&self) -> &[SubsetIndex] {
        &self.subsets
    }

    pub fn members(&self) -> &[MultiPoly<T>] {
        &self.members
    }

    pub fn member(&self, idx: usize) -> &MultiPoly<T> {
        &self.members[idx]
    }
}

fn check_split(n: usize, d: usize) -> Result<usize> {
    if n < 2 || d == 0 || d >= n {
        return Err(Error::invalid(format!("need n >= 2 and 1 <= d <= n-1, got n={n}, d={d}")));
    }
    Ok(n - d)
}

/// `L(u, v) = u_l * v - v_l * u` as a degree-1 binary form.
fn linear_form_of<T: Real>(l: &HopfLift<T>) -> BinaryPoly<T> {
    BinaryPoly::linear(-l.v, l.u)
}

/// Observer family on an explicit pairwise lift table: for each `d`-subset
/// `I`, `q_i = prod_{j in I^c} L_ij` for every observer `i in I`, and
/// `p_I` is the product of the `d` linear forms dual to the `q_i`.
fn observer_family_impl<T: Real>(
    n: usize,
    d: usize,
    table: &HopfLiftTable<T>,
) -> Result<PolyFamily<T>> {
    let k = check_split(n, d)?;
    let subsets = enumerate_subsets(n, d)?;
    let members = subsets
        .par_iter()
        .map(|set| {
            let comp = set.complement();
            let forms: Vec<Vec<C<T>>> = set
                .members()
                .iter()
                .map(|&i| {
                    let factors: Vec<BinaryPoly<T>> = comp
                        .members()
                        .iter()
                        .map(|&j| linear_form_of(table.pair(i - 1, j - 1)))
                        .collect();
                    let q = binary_product(&factors)?;
                    Ok(lambda_form(&q))
                })
                .collect::<Result<_>>()?;
            product_linear_forms(&forms)
        })
        .collect::<Result<Vec<_>>>()?;
    debug_assert!(members.iter().all(|p| !p.is_zero()));
    Ok(PolyFamily { n, d, k, mode: ConstructionMode::Observer, subsets, members })
}

/// Star family on an explicit pairwise lift table: columns are indexed by
/// `k`-subsets `I` of observers; for each star `j in J = I^c`,
/// `q_j = prod_{i in I} L_ij`, and `p_I` is the product of the `d` dual
/// linear forms.
fn star_family_impl<T: Real>(
    n: usize,
    d: usize,
    table: &HopfLiftTable<T>,
) -> Result<PolyFamily<T>> {
    let k = check_split(n, d)?;
    let subsets = enumerate_subsets(n, k)?;
    let members = subsets
        .par_iter()
        .map(|set| {
            let stars = set.complement();
            let forms: Vec<Vec<C<T>>> = stars
                .members()
                .iter()
                .map(|&j| {
                    let factors: Vec<BinaryPoly<T>> = set
                        .members()
                        .iter()
                        .map(|&i| linear_form_of(table.pair(i - 1, j - 1)))
                        .collect();
                    let q = binary_product(&factors)?;
                    Ok(lambda_form(&q))
                })
                .collect::<Result<_>>()?;
            product_linear_forms(&forms)
        })
        .collect::<Result<Vec<_>>>()?;
    debug_assert!(members.iter().all(|p| !p.is_zero()));
    Ok(PolyFamily { n, d, k, mode: ConstructionMode::Star, subsets, members })
}

/// Observer-based family of a spatial configuration.
pub fn observer_family<T: Real>(
    cfg: &Configuration<T>,
    d: usize,
    table: &HopfLiftTable<T>,
) -> Result<PolyFamily<T>> {
    if cfg.space() == Space::Cp1 {
        return Err(Error::invalid("observer_family needs a euclidean or hyperbolic configuration"));
    }
    observer_family_impl(cfg.len(), d, table)
}

/// Star-based family of a spatial configuration.
pub fn star_family<T: Real>(
    cfg: &Configuration<T>,
    d: usize,
    table: &HopfLiftTable<T>,
) -> Result<PolyFamily<T>> {
    if cfg.space() == Space::Cp1 {
        return Err(Error::invalid("star_family needs a euclidean or hyperbolic configuration"));
    }
    star_family_impl(cfg.len(), d, table)
}

/// `q_I = prod_{j in I^c} L_j` for a per-point lift table.
fn cp1_subset_product<T: Real>(
    table: &HopfLiftTable<T>,
    indices: &[usize],
) -> Result<BinaryPoly<T>> {
    let factors: Vec<BinaryPoly<T>> =
        indices.iter().map(|&j| linear_form_of(table.point(j - 1))).collect();
    binary_product(&factors)
}

/// Projective observer family: `p_I` is the `d`-th power of the single
/// linear form dual to `q_I = prod_{j in I^c} L_j`.
pub fn cp1_observer_family<T: Real>(
    cfg: &Configuration<T>,
    d: usize,
    table: &HopfLiftTable<T>,
) -> Result<PolyFamily<T>> {
    if cfg.space() != Space::Cp1 {
        return Err(Error::invalid("cp1_observer_family needs a cp1 configuration"));
    }
    let n = cfg.len();
    let k = check_split(n, d)?;
    let subsets = enumerate_subsets(n, d)?;
    let members = subsets
        .par_iter()
        .map(|set| {
            let q = cp1_subset_product(table, set.complement().members())?;
            let lam = lambda_form(&q);
            let forms: Vec<Vec<C<T>>> = std::iter::repeat_n(lam, d).collect();
            product_linear_forms(&forms)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PolyFamily { n, d, k, mode: ConstructionMode::Cp1Observer, subsets, members })
}

/// Projective star family: columns indexed by `k`-subsets; each star `j`
/// contributes `q_j = L_j^k` and `p_I` is the product of the `d` dual
/// forms.
pub fn cp1_star_family<T: Real>(
    cfg: &Configuration<T>,
    d: usize,
    table: &HopfLiftTable<T>,
) -> Result<PolyFamily<T>> {
    if cfg.space() != Space::Cp1 {
        return Err(Error::invalid("cp1_star_family needs a cp1 configuration"));
    }
    let n = cfg.len();
    let k = check_split(n, d)?;
    let subsets = enumerate_subsets(n, k)?;
    let members = subsets
        .par_iter()
        .map(|set| {
            let stars = set.complement();
            let forms: Vec<Vec<C<T>>> = stars
                .members()
                .iter()
                .map(|&j| {
                    let q = linear_form_of(table.point(j - 1)).pow(k);
                    lambda_form(&q)
                })
                .collect();
            product_linear_forms(&forms)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PolyFamily { n, d, k, mode: ConstructionMode::Cp1Star, subsets, members })
}

/// Build the family for any mode. Projective modes used for determinants go
/// through the symplectically normalized pairwise table, which is the
/// boundary limit of the spatial constructions and keeps the determinant
/// gauge-independent.
pub fn family<T: Real>(
    cfg: &Configuration<T>,
    d: usize,
    mode: ConstructionMode,
    table: &HopfLiftTable<T>,
) -> Result<PolyFamily<T>> {
    if !mode.compatible_with(cfg.space()) {
        return Err(Error::invalid(format!(
            "mode {mode} is not valid for space {}",
            cfg.space()
        )));
    }
    match mode {
        ConstructionMode::Observer => observer_family(cfg, d, table),
        ConstructionMode::Star => star_family(cfg, d, table),
        ConstructionMode::Cp1Observer => cp1_observer_family(cfg, d, table),
        ConstructionMode::Cp1Star => cp1_star_family(cfg, d, table),
    }
}

/// Stack the coefficient vectors of the family as matrix columns. Row `r`
/// is the monomial attached to the `r`-th `d`-subset in lex order (the gap
/// encoding), which is exactly the canonical dense coefficient order of
/// [`MultiPoly`], so columns embed verbatim.
pub fn assemble_matrix<T: Real>(fam: &PolyFamily<T>) -> CMatrix<T> {
    let cols: Vec<Vec<C<T>>> =
        fam.members.iter().map(|p| p.coeffs().to_vec()).collect();
    CMatrix::from_columns(&cols)
}

/// Weight of the row indexed by monomial `M`: `prod_m C(k, m)^(M_m)`.
///
/// Each dual coefficient carries a factor `1/C(k, m)`, so the raw matrix
/// differs from the coefficient matrix of the `q_i` themselves by exactly
/// these row factors. Restoring them normalizes the determinant so that the
/// single-observer case reduces to the classical construction, where the
/// collinear value is 1 and the proven `n = 3, 4` bounds hold.
pub fn determinant_row_weights<T: Real>(n: usize, d: usize) -> Result<Vec<T>> {
    let k = check_split(n, d)?;
    Ok(enumerate_subsets(n, d)?
        .iter()
        .map(|set| {
            let mono = crate::algebra::subset_to_monomial(set);
            let mut w = T::one();
            for (m, &exp) in mono.exponents().iter().enumerate() {
                for _ in 0..exp {
                    w *= crate::algebra::binom::<T>(k, m);
                }
            }
            w
        })
        .collect())
}

/// Determinant of the assembled family on an explicit table, rows rescaled
/// by [`determinant_row_weights`].
fn det_from_table<T: Real>(
    n: usize,
    d: usize,
    mode: ConstructionMode,
    table: &HopfLiftTable<T>,
) -> Result<DetValue<T>> {
    let fam = match mode {
        ConstructionMode::Observer | ConstructionMode::Cp1Observer => {
            observer_family_impl(n, d, table)?
        }
        ConstructionMode::Star | ConstructionMode::Cp1Star => star_family_impl(n, d, table)?,
    };
    let mut matrix = assemble_matrix(&fam);
    let weights = determinant_row_weights::<T>(n, d)?;
    for (r, &w) in weights.iter().enumerate() {
        for c in 0..matrix.n() {
            matrix.set(r, c, matrix.at(r, c) * w);
        }
    }
    Ok(lu_determinant(&matrix))
}

/// Table a determinant evaluation runs on: pairwise tables pass through,
/// per-point tables are symplectically normalized.
pub fn determinant_table<T: Real>(cfg: &Configuration<T>) -> Result<HopfLiftTable<T>> {
    let table = build_lift_table(cfg)?;
    Ok(if table.is_per_point() { table.normalized_pairs() } else { table })
}

/// Determinant on a caller-supplied table (which may carry a nonstandard
/// gauge). Per-point tables are normalized first.
pub fn determinant_with_table<T: Real>(
    cfg: &Configuration<T>,
    d: usize,
    mode: ConstructionMode,
    table: &HopfLiftTable<T>,
) -> Result<DetValue<T>> {
    if !mode.compatible_with(cfg.space()) {
        return Err(Error::invalid(format!(
            "mode {mode} is not valid for space {}",
            cfg.space()
        )));
    }
    let pairwise;
    let table = if table.is_per_point() {
        pairwise = table.normalized_pairs();
        &pairwise
    } else {
        table
    };
    det_from_table(cfg.len(), d, mode, table)
}

/// Evaluation report for one configuration.
#[derive(Clone, Debug)]
pub struct DeterminantReport<T: Real> {
    pub value: C<T>,
    pub abs: T,
    pub log10_abs: T,
    pub n: usize,
    pub d: usize,
    pub mode: ConstructionMode,
    pub space: Space,
    /// Max relative deviation of `D` across gauge re-randomizations, when
    /// requested.
    pub gauge_spread: Option<T>,
    pub wall_time: Duration,
}

/// Build the lift table and the family, assemble the matrix and return
/// `det(M)`. With `gauge_samples > 0` the determinant is re-evaluated under
/// that many random symplectic gauges (seeded deterministically from
/// `seed`) and the max relative deviation is reported. A determinant at or
/// below working precision is a reportable value, not an error.
pub fn normalized_determinant<T: Real>(
    cfg: &Configuration<T>,
    d: usize,
    mode: ConstructionMode,
    seed: u64,
    gauge_samples: usize,
) -> Result<DeterminantReport<T>> {
    let start = Instant::now();
    if !mode.compatible_with(cfg.space()) {
        return Err(Error::invalid(format!(
            "mode {mode} is not valid for space {}",
            cfg.space()
        )));
    }
    let table = determinant_table(cfg)?;
    let det = det_from_table(cfg.len(), d, mode, &table)?;
    let gauge_spread = if gauge_samples > 0 {
        let mut worst = T::zero();
        for g in 0..gauge_samples {
            let perturbed = crate::geom::gauge_perturb(&table, derive_seed(seed, g as u64));
            let dg = det_from_table(cfg.len(), d, mode, &perturbed)?;
            worst = worst.max(dg.rel_diff(&det));
        }
        Some(worst)
    } else {
        None
    };
    Ok(DeterminantReport {
        value: det.value(),
        abs: det.abs(),
        log10_abs: det.log10_abs(),
        n: cfg.len(),
        d,
        mode,
        space: cfg.space(),
        gauge_spread,
        wall_time: start.elapsed(),
    })
}

/// Pair every family member against the dual family of the projective
/// construction. Observer mode: `P[I][I'] = prod_{i in I'} (q_I, L_i^k)`;
/// star mode: `P[I][I'] = prod_{j in I^c} (q_j, h_{I'})` with
/// `h_{I'} = prod_{i in I'} L_i`. The result must be diagonal with nonzero
/// diagonal — the delta pattern behind the linear-independence proof.
pub fn cp1_pairing_matrix<T: Real>(
    cfg: &Configuration<T>,
    d: usize,
    mode: ConstructionMode,
) -> Result<CMatrix<T>> {
    if cfg.space() != Space::Cp1 {
        return Err(Error::invalid("cp1_pairing_matrix needs a cp1 configuration"));
    }
    let n = cfg.len();
    let k = check_split(n, d)?;
    let table = build_lift_table(cfg)?;
    match mode {
        ConstructionMode::Cp1Observer => {
            let subsets = enumerate_subsets(n, d)?;
            let mut m = CMatrix::zeros(subsets.len());
            for (row, set) in subsets.iter().enumerate() {
                let q = cp1_subset_product(&table, set.complement().members())?;
                for (col, dual) in subsets.iter().enumerate() {
                    let mut acc = Complex::new(T::one(), T::zero());
                    for &i in dual.members() {
                        let lk = linear_form_of(table.point(i - 1)).pow(k);
                        acc *= pairing(&q, &lk)?;
                    }
                    m.set(row, col, acc);
                }
            }
            Ok(m)
        }
        ConstructionMode::Cp1Star => {
            let subsets = enumerate_subsets(n, k)?;
            let mut m = CMatrix::zeros(subsets.len());
            for (row, set) in subsets.iter().enumerate() {
                let stars = set.complement();
                for (col, dual) in subsets.iter().enumerate() {
                    let h = cp1_subset_product(&table, dual.members())?;
                    let mut acc = Complex::new(T::one(), T::zero());
                    for &j in stars.members() {
                        let qj = linear_form_of(table.point(j - 1)).pow(k);
                        acc *= pairing(&qj, &h)?;
                    }
                    m.set(row, col, acc);
                }
            }
            Ok(m)
        }
        _ => Err(Error::invalid("cp1_pairing_matrix needs a cp1 construction mode")),
    }
}
