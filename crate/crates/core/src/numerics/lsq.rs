use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Outcome of [`least_squares_fit`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: Vec<f64>,
    /// `sqrt(mean(r_i^2))` over the data points at `params`.
    pub residual_rms: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub max_iterations: usize,
    /// Relative step threshold `|dp| / (|p| + xtol)`.
    pub xtol: f64,
    /// Relative decrease threshold of the sum of squares.
    pub ftol: f64,
    pub initial_damping: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            xtol: 1e-10,
            ftol: 1e-10,
            initial_damping: 1e-3,
        }
    }
}

const DAMPING_MIN: f64 = 1e-15;
const DAMPING_MAX: f64 = 1e20;
/// Residuals this far below the data scale are treated as an exact fit.
const EXACT_FIT_RATIO: f64 = 1e-15;

/// Damped Gauss–Newton (Levenberg–Marquardt) fit of `model(x, params)` to `data`.
///
/// The Jacobian is taken by central differences with step
/// `1e-6 * max(1, |p_j|)`. Damping is scaled by the diagonal of `J^T J`,
/// divided by 10 after an accepted step and multiplied by 10 after a rejected
/// one (including a singular damped system).
///
/// Convergence requires an accepted step whose relative size and relative
/// decrease of the sum of squares are both below `xtol` and `ftol`. A rejected
/// step that is already below `xtol` also counts, since no further decrease is
/// reachable at working precision. Running out of iterations returns the best
/// parameters seen with `converged = false`.
pub fn least_squares_fit<M>(
    model: M,
    params0: &[f64],
    data: &[(f64, f64)],
    options: &FitOptions,
) -> Result<FitResult>
where
    M: Fn(f64, &[f64]) -> f64,
{
    if data.is_empty() {
        return Err(Error::domain("least squares needs at least one data point"));
    }
    if params0.iter().any(|p| !p.is_finite()) {
        return Err(Error::domain("initial parameters must be finite"));
    }

    let sum_sq = |p: &[f64]| -> f64 { data.iter().map(|&(x, y)| (model(x, p) - y).powi(2)).sum() };
    let rms = |cost: f64| (cost / data.len() as f64).sqrt();

    let mut params = params0.to_vec();
    let mut cost = sum_sq(&params);
    if !cost.is_finite() {
        return Err(Error::domain(
            "model is not finite at the initial parameters",
        ));
    }
    let data_scale: f64 = data.iter().map(|&(_, y)| y * y).sum();
    let exact_fit = EXACT_FIT_RATIO * EXACT_FIT_RATIO * data_scale;
    let n = params.len();

    if n == 0 || cost <= exact_fit {
        return Ok(FitResult {
            params,
            residual_rms: rms(cost),
            iterations: 0,
            converged: true,
        });
    }

    let mut damping = options.initial_damping;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < options.max_iterations {
        iterations += 1;

        let residuals: Vec<f64> = data.iter().map(|&(x, y)| model(x, &params) - y).collect();
        let jacobian = numeric_jacobian(&model, &params, data);

        let mut jtj = vec![vec![0.0; n]; n];
        let mut jtr = vec![0.0; n];
        for (row, r) in jacobian.iter().zip(&residuals) {
            for i in 0..n {
                jtr[i] += row[i] * r;
                for j in 0..n {
                    jtj[i][j] += row[i] * row[j];
                }
            }
        }
        let diag_max = (0..n).map(|i| jtj[i][i]).fold(0.0, f64::max);
        let diag_floor = if diag_max > 0.0 {
            1e-12 * diag_max
        } else {
            1.0
        };

        let mut system = jtj.clone();
        for i in 0..n {
            system[i][i] += damping * jtj[i][i].max(diag_floor);
        }
        let rhs: Vec<f64> = jtr.iter().map(|g| -g).collect();

        let step = match solve_dense(system, rhs) {
            Some(step) => step,
            None => {
                damping = (damping * 10.0).min(DAMPING_MAX);
                continue;
            }
        };

        let trial: Vec<f64> = params.iter().zip(&step).map(|(p, d)| p + d).collect();
        let trial_cost = sum_sq(&trial);
        let rel_step = norm(&step) / (norm(&params) + options.xtol);

        if trial_cost.is_finite() && trial_cost < cost {
            let rel_decrease = (cost - trial_cost) / cost;
            params = trial;
            cost = trial_cost;
            damping = (damping / 10.0).max(DAMPING_MIN);
            if cost <= exact_fit || (rel_step <= options.xtol && rel_decrease <= options.ftol) {
                converged = true;
                break;
            }
        } else {
            damping = (damping * 10.0).min(DAMPING_MAX);
            if rel_step <= options.xtol {
                converged = true;
                break;
            }
        }
    }

    Ok(FitResult {
        params,
        residual_rms: rms(cost),
        iterations,
        converged,
    })
}

fn numeric_jacobian<M>(model: &M, params: &[f64], data: &[(f64, f64)]) -> Vec<Vec<f64>>
where
    M: Fn(f64, &[f64]) -> f64,
{
    let mut probe = params.to_vec();
    let mut jac = vec![vec![0.0; params.len()]; data.len()];
    for j in 0..params.len() {
        let h = 1e-6 * params[j].abs().max(1.0);
        for (row, &(x, _)) in jac.iter_mut().zip(data) {
            probe[j] = params[j] + h;
            let up = model(x, &probe);
            probe[j] = params[j] - h;
            let down = model(x, &probe);
            row[j] = (up - down) / (2.0 * h);
        }
        probe[j] = params[j];
    }
    jac
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Gaussian elimination with partial pivoting; `None` if the system is singular.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()));
    if !(scale > 0.0) || !scale.is_finite() {
        return None;
    }
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() <= scale * 1e-20 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            let (upper, lower) = a.split_at_mut(row);
            for (dst, src) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *dst -= factor * src;
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_decay(x: f64, p: &[f64]) -> f64 {
        p[0] * (-p[1] * x).exp() + p[2]
    }

    fn grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    }

    #[test]
    fn recovers_synthetic_parameters() {
        let truth = [2.5, 0.7, -0.3];
        let data: Vec<_> = grid(40, 0.0, 6.0)
            .into_iter()
            .map(|x| (x, exp_decay(x, &truth)))
            .collect();
        let fit =
            least_squares_fit(exp_decay, &[2.0, 0.9, 0.0], &data, &FitOptions::default()).unwrap();
        assert!(fit.converged);
        for (got, want) in fit.params.iter().zip(truth) {
            assert!(((got - want) / want).abs() < 1e-6, "{got} vs {want}");
        }
    }

    #[test]
    fn constant_model() {
        let data: Vec<_> = (0..10).map(|i| (i as f64, 3.25)).collect();
        let fit = least_squares_fit(|_, p| p[0], &[0.0], &data, &FitOptions::default()).unwrap();
        assert!(fit.converged);
        assert!((fit.params[0] - 3.25).abs() < 1e-12);
        assert!(fit.residual_rms < 1e-12);
    }

    #[test]
    fn start_at_optimum() {
        let truth = [1.0, 0.5, 0.25];
        let data: Vec<_> = grid(20, 0.0, 3.0)
            .into_iter()
            .map(|x| (x, exp_decay(x, &truth)))
            .collect();
        let fit = least_squares_fit(exp_decay, &truth, &data, &FitOptions::default()).unwrap();
        assert!(fit.converged);
        assert!(fit.iterations <= 2);
        assert!(fit.residual_rms < 1e-12);
    }

    #[test]
    fn parameter_without_influence_does_not_break_solver() {
        let data: Vec<_> = (0..5).map(|i| (i as f64, 2.0 * i as f64)).collect();
        let fit = least_squares_fit(
            |x, p| p[0] * x + 0.0 * p[1],
            &[1.0, 5.0],
            &data,
            &FitOptions::default(),
        )
        .unwrap();
        assert!(fit.converged);
        assert!((fit.params[0] - 2.0).abs() < 1e-10);
        assert_eq!(fit.params[1], 5.0);
    }

    #[test]
    fn iteration_cap_reports_non_convergence() {
        let truth = [2.5, 0.7, -0.3];
        let data: Vec<_> = grid(40, 0.0, 6.0)
            .into_iter()
            .map(|x| (x, exp_decay(x, &truth)))
            .collect();
        let opts = FitOptions {
            max_iterations: 1,
            ..FitOptions::default()
        };
        let fit = least_squares_fit(exp_decay, &[1.0, 2.0, 1.0], &data, &opts).unwrap();
        assert!(!fit.converged);
        assert_eq!(fit.params.len(), 3);
    }

    #[test]
    fn deterministic() {
        let data: Vec<_> = grid(30, 0.0, 5.0)
            .into_iter()
            .map(|x| (x, (x * 0.9).sin() + 0.1 * x))
            .collect();
        let a =
            least_squares_fit(exp_decay, &[1.0, 0.3, 0.0], &data, &FitOptions::default()).unwrap();
        let b =
            least_squares_fit(exp_decay, &[1.0, 0.3, 0.0], &data, &FitOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn input_validation() {
        assert!(least_squares_fit(|_, p| p[0], &[1.0], &[], &FitOptions::default()).is_err());
        assert!(least_squares_fit(
            |_, p| p[0],
            &[f64::NAN],
            &[(0.0, 1.0)],
            &FitOptions::default()
        )
        .is_err());
    }
}
