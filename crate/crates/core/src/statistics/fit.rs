//! Least-squares fit of `f(d) = α e^{−βd} + γ` by damped Gauss-Newton
//! (Levenberg-Marquardt with diagonal scaling).

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_ITERATIONS: usize = 1000;
const REL_SSE_TOL: f64 = 1e-12;
const LAMBDA_START: f64 = 1e-3;
const LAMBDA_MAX: f64 = 1e30;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpModel<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
}

impl<T: Scalar> ExpModel<T> {
    #[inline]
    pub fn eval(&self, d: T) -> T {
        self.alpha * (-self.beta * d).exp() + self.gamma
    }

    pub fn sse(&self, points: &[(usize, T)]) -> T {
        points
            .iter()
            .map(|&(d, y)| {
                let r = y - self.eval(T::of_usize(d));
                r * r
            })
            .sum()
    }

    /// `∇ SSE = −2 Jᵀ r` with respect to (α, β, γ).
    pub fn sse_gradient(&self, points: &[(usize, T)]) -> [T; 3] {
        let two = T::of(2.0);
        let mut g = [T::zero(); 3];
        for &(d, y) in points {
            let d = T::of_usize(d);
            let e = (-self.beta * d).exp();
            let r = y - (self.alpha * e + self.gamma);
            g[0] -= two * r * e;
            g[1] += two * r * self.alpha * d * e;
            g[2] -= two * r;
        }
        g
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpFitResult<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub sse: T,
    pub converged: bool,
    pub iterations: usize,
}

impl<T: Scalar> ExpFitResult<T> {
    pub fn model(&self) -> ExpModel<T> {
        ExpModel {
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
        }
    }
}

/// Solves the 3×3 system `a x = b` by Gaussian elimination with partial pivoting.
fn solve3<T: Scalar>(mut a: [[T; 3]; 3], mut b: [T; 3]) -> Option<[T; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if !(a[pivot][col].abs() > T::zero()) {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            let pivot_row = a[col];
            for (x, v) in a[row].iter_mut().zip(pivot_row).skip(col) {
                *x -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = [T::zero(); 3];
    for row in (0..3).rev() {
        let mut s = b[row];
        for k in row + 1..3 {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

fn initial_guess<T: Scalar>(points: &[(usize, T)]) -> ExpModel<T> {
    let lo = points.iter().min_by_key(|p| p.0).expect("nonempty");
    let hi = points.iter().max_by_key(|p| p.0).expect("nonempty");
    let beta = T::of(0.5);
    let gamma = hi.1;
    ExpModel {
        alpha: (lo.1 - gamma) * (beta * T::of_usize(lo.0)).exp(),
        beta,
        gamma,
    }
}

/// Fits `α e^{−βd} + γ` to `(d, y)` points. Non-convergence is reported
/// through [`ExpFitResult::converged`], not as an error.
pub fn fit_exponential<T: Scalar>(points: &[(usize, T)]) -> Result<ExpFitResult<T>> {
    if points.len() < 4 {
        return Err(Error::TooFewPoints(points.len()));
    }
    if points.iter().any(|p| !p.1.is_finite()) {
        return Err(Error::InvalidParameter("non-finite fit ordinate".into()));
    }

    let mut model = initial_guess(points);
    let mut sse = model.sse(points);
    let mut lambda = T::of(LAMBDA_START);
    let mut converged = false;
    let mut iterations = 0;

    while iterations < MAX_ITERATIONS {
        iterations += 1;
        if sse == T::zero() {
            converged = true;
            break;
        }
        let mut jtj = [[T::zero(); 3]; 3];
        let mut jtr = [T::zero(); 3];
        for &(d, y) in points {
            let d = T::of_usize(d);
            let e = (-model.beta * d).exp();
            let row = [e, -model.alpha * d * e, T::one()];
            let r = y - (model.alpha * e + model.gamma);
            for i in 0..3 {
                jtr[i] += row[i] * r;
                for j in 0..3 {
                    jtj[i][j] += row[i] * row[j];
                }
            }
        }

        // Inner loop: raise the damping until a step lowers the SSE.
        let accepted = loop {
            let mut damped = jtj;
            for (i, row) in damped.iter_mut().enumerate() {
                row[i] += lambda * jtj[i][i].max(T::epsilon());
            }
            if let Some(step) = solve3(damped, jtr) {
                let trial = ExpModel {
                    alpha: model.alpha + step[0],
                    beta: model.beta + step[1],
                    gamma: model.gamma + step[2],
                };
                let trial_sse = trial.sse(points);
                if trial_sse.is_finite() && trial_sse <= sse {
                    break Some((trial, trial_sse));
                }
            }
            lambda *= T::of(10.0);
            if lambda > T::of(LAMBDA_MAX) {
                break None;
            }
        };

        match accepted {
            Some((trial, trial_sse)) => {
                let rel = (sse - trial_sse) / sse;
                model = trial;
                sse = trial_sse;
                lambda = (lambda / T::of(10.0)).max(T::of(1e-12));
                if rel < T::of(REL_SSE_TOL) {
                    converged = true;
                    break;
                }
            }
            // No damping level improves the SSE: stationary to working precision.
            None => {
                converged = true;
                break;
            }
        }
    }

    Ok(ExpFitResult {
        alpha: model.alpha,
        beta: model.beta,
        gamma: model.gamma,
        sse: model.sse(points),
        converged,
        iterations,
    })
}
