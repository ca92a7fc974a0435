//! Damped Newton solver for (regularised) logistic ERM.

use super::ErmFit;
use crate::error::Result;
use crate::learning::{dot, norm, Dataset, LearningTuple};
use crate::special::{sigmoid, softplus};

pub const LOGISTIC_MAX_ITER: usize = 200;
const GRAD_TOL: f64 = 1e-8;

struct Objective<'a> {
    data: &'a Dataset,
    dim: usize,
    /// Coefficient of ‖w‖² in the averaged objective, `λ/n`.
    ridge: f64,
}

impl Objective<'_> {
    fn value(&self, w: &[f64]) -> f64 {
        let n = self.data.n() as f64;
        let s: f64 = self
            .data
            .iter()
            .map(|z| {
                let a = dot(w, &z[..self.dim]);
                softplus(a) - z[self.dim] * a
            })
            .sum();
        s / n + self.ridge * dot(w, w)
    }

    /// Gradient and Hessian (row-major `dim × dim`).
    fn derivatives(&self, w: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let d = self.dim;
        let n = self.data.n() as f64;
        let mut g = vec![0.0; d];
        let mut h = vec![0.0; d * d];
        for z in self.data.iter() {
            let x = &z[..d];
            let p = sigmoid(dot(w, x));
            let resid = p - z[d];
            let curv = p * (1.0 - p);
            for i in 0..d {
                g[i] += resid * x[i];
                for j in 0..d {
                    h[i * d + j] += curv * x[i] * x[j];
                }
            }
        }
        for i in 0..d {
            g[i] = g[i] / n + 2.0 * self.ridge * w[i];
            for j in 0..d {
                h[i * d + j] /= n;
            }
            h[i * d + i] += 2.0 * self.ridge;
        }
        (g, h)
    }
}

/// Solve `H x = b` by Gaussian elimination with partial pivoting.
fn solve(mut h: Vec<f64>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let d = b.len();
    for col in 0..d {
        let piv = (col..d).max_by(|&i, &j| h[i * d + col].abs().total_cmp(&h[j * d + col].abs()))?;
        if h[piv * d + col].abs() < 1e-300 {
            return None;
        }
        if piv != col {
            for k in 0..d {
                h.swap(col * d + k, piv * d + k);
            }
            b.swap(col, piv);
        }
        for row in col + 1..d {
            let f = h[row * d + col] / h[col * d + col];
            for k in col..d {
                h[row * d + k] -= f * h[col * d + k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; d];
    for row in (0..d).rev() {
        let s: f64 = (row + 1..d).map(|k| h[row * d + k] * x[k]).sum();
        x[row] = (b[row] - s) / h[row * d + row];
    }
    Some(x)
}

pub(super) fn fit(tuple: &LearningTuple, data: &Dataset) -> Result<ErmFit> {
    let dim = tuple.params.dim;
    let obj = Objective {
        data,
        dim,
        ridge: tuple.params.reg_coeff / data.n() as f64,
    };
    let mut w = vec![0.0; dim];
    let mut f = obj.value(&w);
    let mut converged = false;
    let mut iterations = 0;
    while iterations < LOGISTIC_MAX_ITER {
        let (g, h) = obj.derivatives(&w);
        if norm(&g) <= GRAD_TOL {
            converged = true;
            break;
        }
        iterations += 1;
        // Newton direction, falling back to steepest descent on a singular Hessian.
        let dir = solve(h, g.iter().map(|v| -v).collect()).unwrap_or_else(|| g.iter().map(|v| -v).collect());
        let slope = dot(&g, &dir);
        let dir = if slope < 0.0 { dir } else { g.iter().map(|v| -v).collect() };
        let slope = dot(&g, &dir);
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let cand: Vec<f64> = w.iter().zip(&dir).map(|(a, b)| a + step * b).collect();
            let fc = obj.value(&cand);
            if fc <= f + 1e-4 * step * slope {
                w = cand;
                f = fc;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // No further decrease is representable; test the gradient one last time.
            let (g, _) = obj.derivatives(&w);
            converged = norm(&g) <= GRAD_TOL;
            break;
        }
    }
    project(&mut w, tuple.params.hypothesis_radius);
    Ok(ErmFit {
        hypothesis: w,
        converged,
        iterations,
    })
}

/// Radial projection into the open ball `‖w‖ < radius`.
fn project(w: &mut [f64], radius: f64) {
    let r = norm(w);
    if radius.is_finite() && r >= radius {
        let scale = radius * (1.0 - 1e-9) / r;
        w.iter_mut().for_each(|v| *v *= scale);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learning::{LabelConvention, ModelId};
    use crate::models::sample_dataset;
    use crate::rng::RngStream;

    #[test]
    fn converges_and_zeroes_gradient() {
        let t = LearningTuple::with_defaults(ModelId::LogisticRegression);
        let d = sample_dataset(&t, 200, &mut RngStream::new(2, 0).rng()).unwrap();
        let fit = fit(&t, &d).unwrap();
        assert!(fit.converged);
        let obj = Objective { data: &d, dim: 2, ridge: 0.0 };
        let (g, _) = obj.derivatives(&fit.hypothesis);
        assert!(norm(&g) <= GRAD_TOL);
    }

    #[test]
    fn large_sample_recovers_population_minimiser() {
        let t = LearningTuple::logistic(vec![0.5, 0.5], LabelConvention::AsPrinted).unwrap();
        let d = sample_dataset(&t, 200_000, &mut RngStream::new(4, 0).rng()).unwrap();
        let w = fit(&t, &d).unwrap().hypothesis;
        assert!((w[0] + 0.5).abs() < 0.03 && (w[1] + 0.5).abs() < 0.03, "{w:?}");
    }

    #[test]
    fn separable_data_is_projected() {
        let t = LearningTuple::with_defaults(ModelId::LogisticRegression);
        let d = Dataset::new(3, vec![1.0, 0.0, 1.0, -1.0, 0.0, 0.0, 2.0, 0.5, 1.0, -2.0, 0.1, 0.0]).unwrap();
        let f = fit(&t, &d).unwrap();
        assert!(norm(&f.hypothesis) < 3.0);
    }

    #[test]
    fn solver_handles_pivoting() {
        let x = solve(vec![0.0, 1.0, 1.0, 0.0], vec![2.0, 3.0]).unwrap();
        assert_eq!(x, vec![3.0, 2.0]);
    }
}
