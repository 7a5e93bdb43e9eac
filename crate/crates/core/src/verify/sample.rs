//! Seeded random configurations, permutations and isometries for the
//! campaign machinery.

use crate::error::{Error, Result};
use crate::geom::{sphere_to_cp1, Configuration, Space, SpherePoint};
use crate::scalar::{from_f64, Real};
use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

const MAX_RESAMPLES: usize = 64;

fn normal3<T: Real>(rng: &mut impl Rng) -> [T; 3] {
    [
        from_f64(rng.sample::<f64, _>(StandardNormal)),
        from_f64(rng.sample::<f64, _>(StandardNormal)),
        from_f64(rng.sample::<f64, _>(StandardNormal)),
    ]
}

/// Draw a non-degenerate configuration: i.i.d. standard-normal points in the
/// Euclidean case, normal points radially compressed into the ball by
/// `tanh` in the hyperbolic case, and stereographic projections of uniform
/// sphere points in the projective case. Degenerate draws are retried a
/// bounded number of times.
pub fn sample_configuration<T: Real>(
    space: Space,
    n: usize,
    rng: &mut impl Rng,
) -> Result<Configuration<T>> {
    for _ in 0..MAX_RESAMPLES {
        let attempt = match space {
            Space::Euclidean => {
                Configuration::euclidean((0..n).map(|_| normal3::<T>(rng)).collect())
            }
            Space::Hyperbolic => {
                let pts = (0..n)
                    .map(|_| {
                        let g = normal3::<T>(rng);
                        let r = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
                        if r == T::zero() {
                            return g;
                        }
                        let scale = r.tanh() / r;
                        [g[0] * scale, g[1] * scale, g[2] * scale]
                    })
                    .collect();
                Configuration::hyperbolic(pts)
            }
            Space::Cp1 => {
                let pts = (0..n)
                    .map(|_| {
                        // uniform on the sphere via normalized gaussians
                        let g: [f64; 3] = [
                            rng.sample(StandardNormal),
                            rng.sample(StandardNormal),
                            rng.sample(StandardNormal),
                        ];
                        let norm = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt().max(1e-300);
                        let t = SpherePoint::new(
                            Complex::new(from_f64::<T>(g[0] / norm), from_f64(g[1] / norm)),
                            from_f64(g[2] / norm),
                        );
                        sphere_to_cp1(&t)
                    })
                    .collect();
                Configuration::cp1(pts)
            }
        };
        if let Ok(cfg) = attempt {
            return Ok(cfg);
        }
    }
    Err(Error::invalid(format!(
        "failed to sample a non-degenerate {space} configuration after {MAX_RESAMPLES} tries"
    )))
}

/// Fisher-Yates shuffle of `0..n`; `perm[new] = old`.
pub fn random_permutation(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

/// Relabel the points: new point `t` is old point `perm[t]`.
pub fn permuted_configuration<T: Real>(
    cfg: &Configuration<T>,
    perm: &[usize],
) -> Result<Configuration<T>> {
    assert_eq!(perm.len(), cfg.len());
    match cfg.space() {
        Space::Cp1 => {
            let pts = cfg.cp1_points();
            Configuration::cp1(perm.iter().map(|&o| pts[o]).collect())
        }
        Space::Euclidean => {
            let pts = cfg.spatial_points();
            Configuration::euclidean(perm.iter().map(|&o| pts[o]).collect())
        }
        Space::Hyperbolic => {
            let pts = cfg.spatial_points();
            Configuration::hyperbolic(perm.iter().map(|&o| pts[o]).collect())
        }
    }
}

/// Uniform random rotation matrix from a normalized gaussian quaternion.
pub fn random_rotation(rng: &mut impl Rng) -> [[f64; 3]; 3] {
    let q: [f64; 4] = [
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
    ];
    let norm = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
    let (a, b, c, d) = (q[0] / norm, q[1] / norm, q[2] / norm, q[3] / norm);
    [
        [
            1.0 - 2.0 * (c * c + d * d),
            2.0 * (b * c - a * d),
            2.0 * (b * d + a * c),
        ],
        [
            2.0 * (b * c + a * d),
            1.0 - 2.0 * (b * b + d * d),
            2.0 * (c * d - a * b),
        ],
        [
            2.0 * (b * d - a * c),
            2.0 * (c * d + a * b),
            1.0 - 2.0 * (b * b + c * c),
        ],
    ]
}

/// Apply `x -> scale * R x + shift` to a Euclidean configuration.
pub fn transformed_configuration<T: Real>(
    cfg: &Configuration<T>,
    rotation: &[[f64; 3]; 3],
    shift: [f64; 3],
    scale: f64,
) -> Result<Configuration<T>> {
    if cfg.space() != Space::Euclidean {
        return Err(Error::invalid("isometry transforms apply to euclidean configurations"));
    }
    let s: T = from_f64(scale);
    let pts = cfg
        .spatial_points()
        .iter()
        .map(|p| {
            let mut out = [T::zero(); 3];
            for (r, row) in rotation.iter().enumerate() {
                let mut acc = T::zero();
                for (c, &rc) in row.iter().enumerate() {
                    acc += from_f64::<T>(rc) * p[c];
                }
                out[r] = s * acc + from_f64(shift[r]);
            }
            out
        })
        .collect();
    Configuration::euclidean(pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_valid_and_seeded() {
        for space in [Space::Euclidean, Space::Hyperbolic, Space::Cp1] {
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            let a: Configuration<f64> = sample_configuration(space, 5, &mut rng).unwrap();
            assert_eq!(a.len(), 5);
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            let b: Configuration<f64> = sample_configuration(space, 5, &mut rng).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn rotations_are_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let r = random_rotation(&mut rng);
            for i in 0..3 {
                for j in 0..3 {
                    let dot: f64 = (0..3).map(|k| r[i][k] * r[j][k]).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - want).abs() < 1e-12);
                }
            }
            // determinant +1
            let det = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
                - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
                + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
            assert!((det - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn permutations_relabel_points() {
        let cfg = Configuration::euclidean(vec![
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
        ])
        .unwrap();
        let perm = vec![2, 0, 1];
        let p = permuted_configuration(&cfg, &perm).unwrap();
        assert_eq!(p.spatial_points()[0], [0.0, 1.0, 0.0]);
        assert_eq!(p.spatial_points()[1], [0.0, 0.0, 0.0]);
    }
}
