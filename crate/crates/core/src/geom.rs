//! Geometry layer: configurations of labeled points, unit directions,
//! hyperbolic ideal endpoints, the Riemann sphere, the Hopf map and its
//! gauge-constrained lifts.
//!
//! Point indices in this module are 0-based; error messages report 1-based
//! labels to match the mathematical numbering of configuration points.

use crate::error::{Error, Result};
use crate::scalar::{c64, from_f64, to_f64, Real, C};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Points closer than this (Euclidean / ball coordinates, or chordal
/// distance on the sphere for projective points) make a configuration
/// degenerate.
pub const MIN_SEPARATION: f64 = 1e-9;
/// Hyperbolic points must satisfy `norm < 1 - EPS_BOUNDARY`.
pub const EPS_BOUNDARY: f64 = 1e-9;
/// Threshold on `1 - h` below which the north-pole branch of the Hopf lift
/// is used.
pub const EPS_POLE: f64 = 1e-6;
/// Tolerance on `|u|^2 + |v|^2 - 1` accepted by the Hopf map.
pub const HOPF_UNIT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Euclidean,
    Hyperbolic,
    Cp1,
}

impl std::fmt::Display for Space {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Space::Euclidean => "euclidean",
            Space::Hyperbolic => "hyperbolic",
            Space::Cp1 => "cp1",
        })
    }
}

impl std::str::FromStr for Space {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Space::Euclidean),
            "hyperbolic" => Ok(Space::Hyperbolic),
            "cp1" => Ok(Space::Cp1),
            other => Err(Error::schema(format!(
                "space must be one of euclidean|hyperbolic|cp1, got {other:?}"
            ))),
        }
    }
}

/// A point of the projective line: a finite complex value or the point at
/// infinity as a first-class value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cp1Point<T: Real> {
    Finite(C<T>),
    Infinity,
}

// -- small 3-vector helpers -------------------------------------------------

#[inline]
fn sub3<T: Real>(a: [T; 3], b: [T; 3]) -> [T; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
fn dot3<T: Real>(a: [T; 3], b: [T; 3]) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
fn norm3<T: Real>(a: [T; 3]) -> T {
    dot3(a, a).sqrt()
}

// ---------------------------------------------------------------------------
// Configurations
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
enum Points<T: Real> {
    Spatial(Vec<[T; 3]>),
    Projective(Vec<Cp1Point<T>>),
}

/// `n` labeled pairwise-distinct points in one of the three geometries.
/// Construction validates distinctness (with the [`MIN_SEPARATION`] guard)
/// and, for hyperbolic space, strict ball membership.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration<T: Real> {
    space: Space,
    points: Points<T>,
}

impl<T: Real> Configuration<T> {
    pub fn euclidean(points: Vec<[T; 3]>) -> Result<Self> {
        let cfg = Configuration { space: Space::Euclidean, points: Points::Spatial(points) };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn hyperbolic(points: Vec<[T; 3]>) -> Result<Self> {
        let cfg = Configuration { space: Space::Hyperbolic, points: Points::Spatial(points) };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn cp1(points: Vec<Cp1Point<T>>) -> Result<Self> {
        let cfg = Configuration { space: Space::Cp1, points: Points::Projective(points) };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn len(&self) -> usize {
        match &self.points {
            Points::Spatial(p) => p.len(),
            Points::Projective(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Spatial coordinates; only valid for Euclidean and hyperbolic
    /// configurations.
    pub fn spatial_points(&self) -> &[[T; 3]] {
        match &self.points {
            Points::Spatial(p) => p,
            Points::Projective(_) => panic!("projective configuration has no spatial coordinates"),
        }
    }

    pub fn cp1_points(&self) -> &[Cp1Point<T>] {
        match &self.points {
            Points::Projective(p) => p,
            Points::Spatial(_) => panic!("spatial configuration has no projective points"),
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.len();
        if n < 2 {
            return Err(Error::invalid(format!("a configuration needs n >= 2 points, got {n}")));
        }
        let min_sep: T = from_f64(MIN_SEPARATION);
        match &self.points {
            Points::Spatial(pts) => {
                if self.space == Space::Hyperbolic {
                    let limit: T = T::one() - from_f64(EPS_BOUNDARY);
                    for (idx, &p) in pts.iter().enumerate() {
                        let norm = norm3(p);
                        if norm >= limit {
                            return Err(Error::PointOutsideBall {
                                index: idx + 1,
                                norm: to_f64(norm),
                            });
                        }
                    }
                }
                for i in 0..n {
                    for j in (i + 1)..n {
                        let sep = norm3(sub3(pts[j], pts[i]));
                        if sep < min_sep {
                            return Err(Error::DegenerateConfiguration {
                                i: i + 1,
                                j: j + 1,
                                sep: to_f64(sep),
                                min: MIN_SEPARATION,
                            });
                        }
                    }
                }
            }
            Points::Projective(pts) => {
                let spheres: Vec<SpherePoint<T>> = pts.iter().map(cp1_to_sphere).collect();
                for i in 0..n {
                    for j in (i + 1)..n {
                        let sep = spheres[i].chordal_distance(&spheres[j]);
                        if sep < min_sep {
                            return Err(Error::DegenerateConfiguration {
                                i: i + 1,
                                j: j + 1,
                                sep: to_f64(sep),
                                min: MIN_SEPARATION,
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// The unit sphere as C x R
// ---------------------------------------------------------------------------

/// Point `(w, h)` of the unit sphere thought of as `C x R`,
/// `|w|^2 + h^2 = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpherePoint<T: Real> {
    pub w: C<T>,
    pub h: T,
}

impl<T: Real> SpherePoint<T> {
    pub fn new(w: C<T>, h: T) -> Self {
        SpherePoint { w, h }
    }

    pub fn norm_defect(&self) -> T {
        (self.w.norm_sqr() + self.h * self.h - T::one()).abs()
    }

    pub fn antipode(&self) -> SpherePoint<T> {
        SpherePoint { w: -self.w, h: -self.h }
    }

    pub fn chordal_distance(&self, other: &SpherePoint<T>) -> T {
        let dw = self.w - other.w;
        let dh = self.h - other.h;
        (dw.norm_sqr() + dh * dh).sqrt()
    }
}

/// Unit direction from `x_i` toward `x_j`.
pub fn euclidean_direction<T: Real>(
    cfg: &Configuration<T>,
    i: usize,
    j: usize,
) -> Result<SpherePoint<T>> {
    if cfg.space() != Space::Euclidean {
        return Err(Error::invalid("euclidean_direction needs a euclidean configuration"));
    }
    if i == j {
        return Err(Error::invalid("direction needs two distinct indices"));
    }
    let pts = cfg.spatial_points();
    let diff = sub3(pts[j], pts[i]);
    let norm = norm3(diff);
    if norm < from_f64(MIN_SEPARATION) {
        return Err(Error::DegenerateConfiguration {
            i: i.min(j) + 1,
            j: i.max(j) + 1,
            sep: to_f64(norm),
            min: MIN_SEPARATION,
        });
    }
    Ok(SpherePoint {
        w: Complex::new(diff[0] / norm, diff[1] / norm),
        h: diff[2] / norm,
    })
}

/// Ideal endpoint on the boundary sphere of the geodesic ray from `x_i`
/// through `x_j`, both in the Poincare ball.
///
/// Works in the hyperboloid model: embed `p` as
/// `X(p) = (2p, 1 + |p|^2) / (1 - |p|^2)` in Minkowski space with signature
/// `(+,+,+,-)`, take the unit tangent at `X_i` toward `X_j` and follow the
/// null direction `X_i + V` to the boundary. No special case is needed for
/// diameters.
pub fn hyperbolic_ideal_endpoint<T: Real>(
    cfg: &Configuration<T>,
    i: usize,
    j: usize,
) -> Result<SpherePoint<T>> {
    if cfg.space() != Space::Hyperbolic {
        return Err(Error::invalid("hyperbolic_ideal_endpoint needs a hyperbolic configuration"));
    }
    if i == j {
        return Err(Error::invalid("geodesic ray needs two distinct indices"));
    }
    let pts = cfg.spatial_points();
    ideal_endpoint_of_ray(pts[i], pts[j]).map_err(|e| match e {
        Error::DegenerateConfiguration { sep, min, .. } => Error::DegenerateConfiguration {
            i: i.min(j) + 1,
            j: i.max(j) + 1,
            sep,
            min,
        },
        other => other,
    })
}

/// `(spatial, time)` hyperboloid coordinates of a ball point.
fn hyperboloid_embed<T: Real>(p: [T; 3]) -> ([T; 3], T) {
    let r2 = dot3(p, p);
    let denom = T::one() - r2;
    let two = from_f64::<T>(2.0);
    (
        [two * p[0] / denom, two * p[1] / denom, two * p[2] / denom],
        (T::one() + r2) / denom,
    )
}

pub(crate) fn ideal_endpoint_of_ray<T: Real>(pi: [T; 3], pj: [T; 3]) -> Result<SpherePoint<T>> {
    let (si, ti) = hyperboloid_embed(pi);
    let (sj, tj) = hyperboloid_embed(pj);
    // c = -<X_i, X_j> = cosh(dist); computed through the stable difference
    // form c - 1 = 2|p_i - p_j|^2 / ((1 - r_i^2)(1 - r_j^2)), which does not
    // cancel for nearby points.
    let ri2 = dot3(pi, pi);
    let rj2 = dot3(pj, pj);
    let diff = sub3(pj, pi);
    let c_minus_1 =
        from_f64::<T>(2.0) * dot3(diff, diff) / ((T::one() - ri2) * (T::one() - rj2));
    if c_minus_1 < from_f64(1e-18) {
        return Err(Error::DegenerateConfiguration {
            i: 1,
            j: 2,
            sep: to_f64(norm3(diff)),
            min: MIN_SEPARATION,
        });
    }
    let c = T::one() + c_minus_1;
    let scale = (c_minus_1 * (c + T::one())).sqrt(); // sqrt(c^2 - 1)
    // V = (X_j - c X_i) / sqrt(c^2 - 1); N = X_i + V is null.
    let v_s = [
        (sj[0] - c * si[0]) / scale,
        (sj[1] - c * si[1]) / scale,
        (sj[2] - c * si[2]) / scale,
    ];
    let v_t = (tj - c * ti) / scale;
    let n_s = [si[0] + v_s[0], si[1] + v_s[1], si[2] + v_s[2]];
    let n_t = ti + v_t;
    let mut b = [n_s[0] / n_t, n_s[1] / n_t, n_s[2] / n_t];
    let norm = norm3(b);
    b = [b[0] / norm, b[1] / norm, b[2] / norm];
    Ok(SpherePoint { w: Complex::new(b[0], b[1]), h: b[2] })
}

/// Ball coordinates of the hyperboloid geodesic point
/// `cosh(s) X_i + sinh(s) V`, where `V` is the unit tangent at `x_i` toward
/// `x_j`. Used by tests to place extra points on a given ray.
pub fn geodesic_point<T: Real>(pi: [T; 3], pj: [T; 3], s: T) -> Result<[T; 3]> {
    let (si, ti) = hyperboloid_embed(pi);
    let (sj, tj) = hyperboloid_embed(pj);
    let ri2 = dot3(pi, pi);
    let rj2 = dot3(pj, pj);
    let diff = sub3(pj, pi);
    let c_minus_1 =
        from_f64::<T>(2.0) * dot3(diff, diff) / ((T::one() - ri2) * (T::one() - rj2));
    if c_minus_1 < from_f64(1e-18) {
        return Err(Error::invalid("geodesic through coincident points"));
    }
    let c = T::one() + c_minus_1;
    let scale = (c_minus_1 * (c + T::one())).sqrt();
    let (ch, sh) = (s.cosh(), s.sinh());
    let g_s = [
        ch * si[0] + sh * (sj[0] - c * si[0]) / scale,
        ch * si[1] + sh * (sj[1] - c * si[1]) / scale,
        ch * si[2] + sh * (sj[2] - c * si[2]) / scale,
    ];
    let g_t = ch * ti + sh * (tj - c * ti) / scale;
    let denom = T::one() + g_t;
    Ok([g_s[0] / denom, g_s[1] / denom, g_s[2] / denom])
}

/// Inverse stereographic projection `z -> (2z, |z|^2 - 1) / (|z|^2 + 1)`;
/// infinity maps to the north pole.
pub fn cp1_to_sphere<T: Real>(p: &Cp1Point<T>) -> SpherePoint<T> {
    match p {
        Cp1Point::Infinity => SpherePoint { w: Complex::new(T::zero(), T::zero()), h: T::one() },
        Cp1Point::Finite(z) => {
            let r2 = z.norm_sqr();
            let denom = r2 + T::one();
            SpherePoint {
                w: Complex::new(from_f64::<T>(2.0), T::zero()) * z / denom,
                h: (r2 - T::one()) / denom,
            }
        }
    }
}

/// Stereographic projection back to `C u {inf}`; inverse of
/// [`cp1_to_sphere`].
pub fn sphere_to_cp1<T: Real>(t: &SpherePoint<T>) -> Cp1Point<T> {
    let denom = T::one() - t.h;
    if denom <= from_f64(1e-15) {
        Cp1Point::Infinity
    } else {
        Cp1Point::Finite(t.w / denom)
    }
}

// ---------------------------------------------------------------------------
// Hopf lifts
// ---------------------------------------------------------------------------

/// A lift `(u, v)` of a sphere point through the Hopf map. Canonical lifts
/// are unit norm; gauge-scaled lifts are only required to keep the
/// symplectic partner constraint.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HopfLift<T: Real> {
    pub u: C<T>,
    pub v: C<T>,
}

impl<T: Real> HopfLift<T> {
    pub fn new(u: C<T>, v: C<T>) -> Self {
        HopfLift { u, v }
    }

    /// The partner `(-conj(v), conj(u))`, which lifts the antipodal point
    /// and completes a symplectic basis with `self`.
    pub fn partner(&self) -> HopfLift<T> {
        HopfLift { u: -self.v.conj(), v: self.u.conj() }
    }

    pub fn scaled(&self, lambda: C<T>) -> HopfLift<T> {
        HopfLift { u: self.u * lambda, v: self.v * lambda }
    }

    pub fn norm_sqr(&self) -> T {
        self.u.norm_sqr() + self.v.norm_sqr()
    }

    /// `u * v' - v * u'` — equals 1 on valid lift pairs.
    pub fn symplectic(&self, other: &HopfLift<T>) -> C<T> {
        self.u * other.v - self.v * other.u
    }
}

/// The Hopf map `h(u, v) = (2 conj(u) v, |v|^2 - |u|^2)`. Inputs must sit on
/// the unit 3-sphere.
pub fn hopf_map<T: Real>(l: &HopfLift<T>) -> Result<SpherePoint<T>> {
    let n = l.norm_sqr();
    if (n - T::one()).abs() > from_f64(HOPF_UNIT_TOL) {
        return Err(Error::NonUnitLift { norm_sq: to_f64(n) });
    }
    Ok(SpherePoint {
        w: l.u.conj() * l.v * from_f64::<T>(2.0),
        h: l.v.norm_sqr() - l.u.norm_sqr(),
    })
}

/// Canonical unit-norm section of the Hopf map. Away from the north pole
/// `u = sqrt((1 - h)/2)` is real nonnegative; above `h > 1 - EPS_POLE` the
/// roles swap and `v = sqrt((1 + h)/2)` is real positive. Both branches are
/// well conditioned on their side of the cut.
pub fn hopf_lift<T: Real>(t: &SpherePoint<T>) -> HopfLift<T> {
    let half = from_f64::<T>(0.5);
    let raw = if T::one() - t.h > from_f64(EPS_POLE) {
        let u = ((T::one() - t.h) * half).sqrt();
        let v = t.w / (from_f64::<T>(2.0) * u);
        HopfLift { u: Complex::new(u, T::zero()), v }
    } else {
        let v = ((T::one() + t.h) * half).sqrt();
        let u = t.w.conj() / (from_f64::<T>(2.0) * v);
        HopfLift { u, v: Complex::new(v, T::zero()) }
    };
    // renormalize: near the branch cut a slightly off-sphere input would
    // otherwise leak an amplified norm defect into the lift
    let scale = T::one() / raw.norm_sqr().sqrt();
    HopfLift { u: raw.u * scale, v: raw.v * scale }
}

// ---------------------------------------------------------------------------
// Lift tables
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
enum Lifts<T: Real> {
    /// Flat `n * n` array indexed by `i * n + j`; diagonal entries unused.
    Pairwise(Vec<HopfLift<T>>),
    /// One lift per point (projective configurations).
    PerPoint(Vec<HopfLift<T>>),
}

/// Hopf lifts for every ordered pair `(i, j)` of a spatial configuration,
/// or per point for a projective one. The gauge choice of the whole
/// construction lives here.
#[derive(Clone, Debug)]
pub struct HopfLiftTable<T: Real> {
    n: usize,
    lifts: Lifts<T>,
}

impl<T: Real> HopfLiftTable<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_per_point(&self) -> bool {
        matches!(self.lifts, Lifts::PerPoint(_))
    }

    /// Lift for the ordered pair `(i, j)`, 0-based, `i != j`.
    pub fn pair(&self, i: usize, j: usize) -> &HopfLift<T> {
        match &self.lifts {
            Lifts::Pairwise(v) => {
                debug_assert!(i != j && i < self.n && j < self.n);
                &v[i * self.n + j]
            }
            Lifts::PerPoint(_) => panic!("per-point lift table has no pair entries"),
        }
    }

    /// Lift of point `i` (projective tables only).
    pub fn point(&self, i: usize) -> &HopfLift<T> {
        match &self.lifts {
            Lifts::PerPoint(v) => &v[i],
            Lifts::Pairwise(_) => panic!("pairwise lift table has no per-point entries"),
        }
    }

    /// Largest deviation of `u_ij v_ji - v_ij u_ji` from 1 over all pairs.
    pub fn symplectic_defect(&self) -> T {
        match &self.lifts {
            Lifts::PerPoint(_) => T::zero(),
            Lifts::Pairwise(_) => {
                let one = Complex::new(T::one(), T::zero());
                let mut worst = T::zero();
                for i in 0..self.n {
                    for j in (i + 1)..self.n {
                        let d = (self.pair(i, j).symplectic(self.pair(j, i)) - one).norm();
                        worst = worst.max(d);
                    }
                }
                worst
            }
        }
    }

    /// Derive a pairwise symplectic table from per-point lifts: the ordered
    /// pair `(i, j)` gets the lift of point `j`, rescaled on the `i > j`
    /// side so each unordered pair is a symplectic basis. This is the
    /// boundary limit of the spatial tables and makes the determinant of a
    /// projective configuration gauge-independent.
    pub fn normalized_pairs(&self) -> HopfLiftTable<T> {
        let pts = match &self.lifts {
            Lifts::PerPoint(v) => v,
            Lifts::Pairwise(_) => return self.clone(),
        };
        let n = self.n;
        let zero = Complex::new(T::zero(), T::zero());
        let mut flat = vec![HopfLift::new(zero, zero); n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let primary = pts[j];
                let w = primary.symplectic(&pts[i]);
                flat[i * n + j] = primary;
                flat[j * n + i] = HopfLift::new(pts[i].u / w, pts[i].v / w);
            }
        }
        HopfLiftTable { n, lifts: Lifts::Pairwise(flat) }
    }
}

/// Build the canonical lift table of a configuration. For each `i < j` the
/// `(i, j)` entry lifts `t_ij`; the `(j, i)` entry lifts `t_ji` and is
/// rescaled so the pair forms a symplectic basis. In Euclidean space
/// `t_ji = -t_ij` exactly and the `(j, i)` entry is taken as the symplectic
/// partner `(-conj(v), conj(u))` directly; in hyperbolic space the two ends
/// of a geodesic are not antipodal on the boundary sphere, so `t_ji` is
/// computed from its own ray. Projective configurations get one lift per
/// point instead.
pub fn build_lift_table<T: Real>(cfg: &Configuration<T>) -> Result<HopfLiftTable<T>> {
    let n = cfg.len();
    match cfg.space() {
        Space::Cp1 => {
            let lifts = cfg
                .cp1_points()
                .iter()
                .map(|p| hopf_lift(&cp1_to_sphere(p)))
                .collect();
            Ok(HopfLiftTable { n, lifts: Lifts::PerPoint(lifts) })
        }
        space => {
            let zero = Complex::new(T::zero(), T::zero());
            let mut flat = vec![HopfLift::new(zero, zero); n * n];
            for i in 0..n {
                for j in (i + 1)..n {
                    match space {
                        Space::Euclidean => {
                            let lift = hopf_lift(&euclidean_direction(cfg, i, j)?);
                            flat[j * n + i] = lift.partner();
                            flat[i * n + j] = lift;
                        }
                        Space::Hyperbolic => {
                            let fwd = hopf_lift(&hyperbolic_ideal_endpoint(cfg, i, j)?);
                            let rev = hopf_lift(&hyperbolic_ideal_endpoint(cfg, j, i)?);
                            // scale the reverse lift so omega(fwd, rev) = 1
                            let omega = fwd.symplectic(&rev);
                            flat[j * n + i] =
                                HopfLift::new(rev.u / omega, rev.v / omega);
                            flat[i * n + j] = fwd;
                        }
                        Space::Cp1 => unreachable!(),
                    }
                }
            }
            Ok(HopfLiftTable { n, lifts: Lifts::Pairwise(flat) })
        }
    }
}

/// Rescale every unordered pair `{i, j}` by a random nonzero `lambda`
/// (`lambda^{-1}` on the partner side), preserving the symplectic constraint
/// exactly. Per-point tables get an unconstrained scalar per point.
/// Deterministic in the seed.
pub fn gauge_perturb<T: Real>(table: &HopfLiftTable<T>, seed: u64) -> HopfLiftTable<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = move || -> C<T> {
        let log_mag: f64 = rng.gen_range(-1.0..1.0);
        let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        c64(log_mag.exp() * phase.cos(), log_mag.exp() * phase.sin())
    };
    let n = table.n;
    match &table.lifts {
        Lifts::PerPoint(pts) => {
            let lifts = pts.iter().map(|l| l.scaled(draw())).collect();
            HopfLiftTable { n, lifts: Lifts::PerPoint(lifts) }
        }
        Lifts::Pairwise(flat) => {
            let mut out = flat.clone();
            for i in 0..n {
                for j in (i + 1)..n {
                    let lambda = draw();
                    let inv = Complex::new(T::one(), T::zero()) / lambda;
                    out[i * n + j] = flat[i * n + j].scaled(lambda);
                    out[j * n + i] = flat[j * n + i].scaled(inv);
                }
            }
            HopfLiftTable { n, lifts: Lifts::Pairwise(out) }
        }
    }
}
