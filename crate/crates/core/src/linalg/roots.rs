use std::f64::consts::TAU;

use num_complex::Complex64;

use super::MonicPoly;
use crate::{Error, Result};

pub const DEFAULT_MAX_ITER: usize = 500;

/// Phase offset of the initial Aberth guesses; breaks the symmetry of
/// polynomials like `x^n + c`.
const INITIAL_PHASE: f64 = 0.37;

/// Extra sweeps allowed once every residual is inside the bound but the
/// corrections have stopped shrinking (typical for multiple roots).
const STAGNATION_SWEEPS: usize = 30;

const NEWTON_POLISH_STEPS: usize = 3;

/// All roots of `p` (with multiplicity) by Aberth–Ehrlich simultaneous
/// iteration followed by guarded Newton polishing.
///
/// Every returned root satisfies `|p(z)| <= tol * (1 + R)^degree` with `R`
/// the Cauchy bound. Roots of multiplicity `k` are only resolved to about
/// `tol^(1/k)`.
pub fn poly_roots(p: &MonicPoly, tol: f64, max_iter: usize) -> Result<Vec<Complex64>> {
    if !(tol > 0.0) {
        return Err(Error::Input(format!(
            "root tolerance must be positive, got {tol}"
        )));
    }
    let n = p.degree();
    if n == 1 {
        return Ok(vec![-p.coeffs()[0]]);
    }

    let bound = p.cauchy_bound();
    let residual_bound = tol * (1.0 + bound).powi(n as i32);
    let within = |z: Complex64| p.eval(z).norm() <= residual_bound;

    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(bound, TAU * k as f64 / n as f64 + INITIAL_PHASE))
        .collect();

    let mut settled_for = 0usize;
    for _ in 0..max_iter {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let (pv, dpv) = p.eval_with_derivative(z[k]);
            if pv.norm() == 0.0 {
                continue;
            }
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let denom = dpv - pv * repulsion;
            if denom.norm() == 0.0 || !denom.is_finite() {
                continue;
            }
            let step = pv / denom;
            if !step.is_finite() {
                continue;
            }
            z[k] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
        }

        if z.iter().all(|&zk| within(zk)) {
            if max_step <= 4.0 * f64::EPSILON {
                break;
            }
            settled_for += 1;
            if settled_for >= STAGNATION_SWEEPS {
                break;
            }
        } else {
            settled_for = 0;
        }
    }

    polish(p, &mut z);

    let residuals: Vec<f64> = z.iter().map(|&zk| p.eval(zk).norm()).collect();
    if residuals.iter().any(|&r| !(r <= residual_bound)) {
        return Err(Error::Numerical {
            message: format!(
                "Aberth iteration did not reach residual bound {residual_bound:e} in {max_iter} iterations"
            ),
            iterates: z,
            residuals,
        });
    }
    Ok(z)
}

/// Newton steps that are kept only when they lower the residual and move a
/// root by less than half the distance to its nearest neighbour.
fn polish(p: &MonicPoly, z: &mut [Complex64]) {
    for k in 0..z.len() {
        let nearest = (0..z.len())
            .filter(|&j| j != k)
            .map(|j| (z[k] - z[j]).norm())
            .fold(f64::INFINITY, f64::min);
        for _ in 0..NEWTON_POLISH_STEPS {
            let (pv, dpv) = p.eval_with_derivative(z[k]);
            if pv.norm() == 0.0 || dpv.norm() == 0.0 {
                break;
            }
            let step = pv / dpv;
            if !(step.norm() < 0.5 * nearest) {
                break;
            }
            let candidate = z[k] - step;
            if p.eval(candidate).norm() < pv.norm() {
                z[k] = candidate;
            } else {
                break;
            }
        }
    }
}
