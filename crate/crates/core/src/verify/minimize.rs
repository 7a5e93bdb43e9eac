//! Derivative-free minimization of `|D|` over the configuration space:
//! Nelder-Mead on the `3n` real coordinates with random restarts, a
//! minimum-separation barrier, and a `tanh` radial reparametrization that
//! keeps hyperbolic search points inside the ball.

// indexed loops are clearer for the simplex updates
#![allow(clippy::needless_range_loop)]

use crate::error::{Error, Result};
use crate::geom::{Configuration, Space};
use crate::maps::{normalized_determinant, ConstructionMode};
use crate::scalar::{from_f64, to_f64, Real};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Objective value assigned to infeasible (degenerate) parameter points.
const BARRIER: f64 = 1e100;
const MAX_ITERS_PER_RESTART: usize = 400;

#[derive(Clone, Debug)]
pub struct MinimizeResult<T: Real> {
    pub best_config: Configuration<T>,
    pub best_abs_d: T,
    /// Total Nelder-Mead iterations across all restarts.
    pub iterations: usize,
    pub converged: bool,
    /// `(iteration, best-so-far |D|)`, recorded at every improvement.
    pub trace: Vec<(usize, T)>,
}

fn config_from_params<T: Real>(
    space: Space,
    params: &[f64],
) -> Result<Configuration<T>> {
    let pts: Vec<[T; 3]> = params
        .chunks_exact(3)
        .map(|p| match space {
            Space::Euclidean => [from_f64(p[0]), from_f64(p[1]), from_f64(p[2])],
            Space::Hyperbolic => {
                let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                // tanh(r)/r, with the series value at the removable singularity
                let scale = if r < 1e-6 { 1.0 - r * r / 3.0 } else { r.tanh() / r };
                [from_f64(p[0] * scale), from_f64(p[1] * scale), from_f64(p[2] * scale)]
            }
            Space::Cp1 => unreachable!(),
        })
        .collect();
    match space {
        Space::Euclidean => Configuration::euclidean(pts),
        Space::Hyperbolic => Configuration::hyperbolic(pts),
        Space::Cp1 => unreachable!(),
    }
}

/// Minimize `x -> |D(x)|` with `budget` Nelder-Mead restarts from random
/// gaussian starts. Deterministic in the seed. Returns the best
/// configuration found, with `best_abs_d` re-evaluated from scratch at the
/// end.
pub fn minimize_abs_d<T: Real>(
    n: usize,
    d: usize,
    mode: ConstructionMode,
    space: Space,
    seed: u64,
    budget: usize,
) -> Result<MinimizeResult<T>> {
    if budget == 0 {
        return Err(Error::invalid("minimization budget must be at least 1"));
    }
    if !matches!(space, Space::Euclidean | Space::Hyperbolic) {
        return Err(Error::invalid("|D| minimization runs on euclidean or hyperbolic space"));
    }
    if !mode.compatible_with(space) {
        return Err(Error::invalid(format!("mode {mode} is not valid for space {space}")));
    }
    if n < 2 || d == 0 || d >= n {
        return Err(Error::invalid(format!("need 1 <= d <= n-1, got n={n}, d={d}")));
    }

    let dim = 3 * n;
    let objective = |params: &[f64]| -> f64 {
        match config_from_params::<T>(space, params) {
            Ok(cfg) => match normalized_determinant(&cfg, d, mode, 0, 0) {
                Ok(rep) => {
                    let v = to_f64(rep.abs);
                    if v.is_nan() {
                        BARRIER
                    } else {
                        v
                    }
                }
                Err(_) => BARRIER,
            },
            Err(_) => BARRIER,
        }
    };

    let mut best_params: Option<Vec<f64>> = None;
    let mut best_val = f64::INFINITY;
    let mut trace: Vec<(usize, T)> = Vec::new();
    let mut total_iters = 0usize;
    let mut converged = false;

    for restart in 0..budget {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(restart as u64 + 1);
        let start: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let outcome = nelder_mead(&objective, &start, MAX_ITERS_PER_RESTART, |iter, val| {
            if val < best_val {
                best_val = val;
                trace.push((total_iters + iter, from_f64(val)));
            }
        });
        total_iters += outcome.iterations;
        converged |= outcome.converged;
        // the run's final value never exceeds anything it reported, so it
        // reaching the incumbent means this restart owns the best point
        if outcome.value <= best_val || best_params.is_none() {
            if outcome.value < best_val {
                best_val = outcome.value;
                trace.push((total_iters, from_f64(outcome.value)));
            }
            best_params = Some(outcome.point);
        }
    }

    let params = best_params.ok_or_else(|| Error::invalid("no feasible start found"))?;
    let best_config = config_from_params::<T>(space, &params)?;
    // independent final evaluation; the search value must agree
    let final_abs = normalized_determinant(&best_config, d, mode, 0, 0)?.abs;
    debug_assert!((to_f64(final_abs) - best_val).abs() <= 1e-9 * (1.0 + best_val));
    Ok(MinimizeResult {
        best_config,
        best_abs_d: final_abs,
        iterations: total_iters,
        converged,
        trace,
    })
}

struct NmOutcome {
    point: Vec<f64>,
    value: f64,
    iterations: usize,
    converged: bool,
}

/// Standard Nelder-Mead with reflection 1, expansion 2, contraction 0.5,
/// shrink 0.5. `on_improve` observes every new incumbent.
fn nelder_mead(
    f: &dyn Fn(&[f64]) -> f64,
    start: &[f64],
    max_iters: usize,
    mut on_improve: impl FnMut(usize, f64),
) -> NmOutcome {
    let n = start.len();
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(start.to_vec());
    for i in 0..n {
        let mut v = start.to_vec();
        let delta = if v[i].abs() < 1e-12 { 0.25 } else { 0.25 * v[i].abs().max(0.25) };
        v[i] += delta;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

    let cmp = |a: &f64, b: &f64| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal);
    let mut iterations = 0;
    let mut converged = false;

    for iter in 0..max_iters {
        iterations = iter + 1;
        // order the simplex
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| cmp(&values[a], &values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();
        on_improve(iterations, values[0]);

        let spread = values[n] - values[0];
        let diameter = simplex[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[0])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0f64, f64::max);
        if spread <= 1e-12 * (1.0 + values[0].abs()) && diameter <= 1e-10 {
            converged = true;
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|v| v[j]).sum::<f64>() / n as f64)
            .collect();
        let reflect: Vec<f64> = (0..n)
            .map(|j| centroid[j] + alpha * (centroid[j] - simplex[n][j]))
            .collect();
        let f_reflect = f(&reflect);

        if f_reflect < values[0] {
            let expand: Vec<f64> = (0..n)
                .map(|j| centroid[j] + gamma * (reflect[j] - centroid[j]))
                .collect();
            let f_expand = f(&expand);
            if f_expand < f_reflect {
                simplex[n] = expand;
                values[n] = f_expand;
            } else {
                simplex[n] = reflect;
                values[n] = f_reflect;
            }
        } else if f_reflect < values[n - 1] {
            simplex[n] = reflect;
            values[n] = f_reflect;
        } else {
            let (toward, f_toward) = if f_reflect < values[n] {
                (reflect.clone(), f_reflect)
            } else {
                (simplex[n].clone(), values[n])
            };
            let contract: Vec<f64> =
                (0..n).map(|j| centroid[j] + rho * (toward[j] - centroid[j])).collect();
            let f_contract = f(&contract);
            if f_contract < f_toward {
                simplex[n] = contract;
                values[n] = f_contract;
            } else {
                // shrink toward the best vertex
                for i in 1..=n {
                    for j in 0..n {
                        simplex[i][j] = simplex[0][j] + sigma * (simplex[i][j] - simplex[0][j]);
                    }
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..=n {
        if values[i] < values[best] {
            best = i;
        }
    }
    NmOutcome {
        point: simplex[best].clone(),
        value: values[best],
        iterations,
        converged,
    }
}
