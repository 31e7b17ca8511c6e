//! Least-squares support vector regression with an RBF kernel.
//!
//! Training solves the (n+1) x (n+1) saddle-point system
//!
//! ```text
//! [ 0  1^T     ] [ b     ]   [ 0 ]
//! [ 1  K + I/g ] [ alpha ] = [ y ]
//! ```
//!
//! with K_ij = exp(-||x_i - x_j||^2 / (2 sigma^2)) over standardized features.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Residual bound for the solved saddle-point system, relative to ||y||.
const SOLVE_RESIDUAL_REL: f64 = 1e-8;

/// A fitted model: support coefficients, intercept, and the feature
/// standardization frozen from the training rows.
#[derive(Debug, Clone)]
pub struct LssvmModel {
    pub sigma: f64,
    pub gamma: f64,
    /// One coefficient per training row.
    pub alpha: Vec<f64>,
    pub bias: f64,
    pub feature_means: Vec<f64>,
    pub feature_scales: Vec<f64>,
    /// Standardized training rows, retained for prediction.
    train_x: Vec<Vec<f64>>,
}

fn column_stats(x: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    let d = x[0].len();
    let mut means = vec![0.0; d];
    for row in x {
        for (m, v) in means.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in &mut means {
        *m /= n as f64;
    }
    let mut scales = vec![0.0; d];
    if n > 1 {
        for row in x {
            for (s, (v, m)) in scales.iter_mut().zip(row.iter().zip(&means)) {
                *s += (v - m).powi(2);
            }
        }
        for s in &mut scales {
            *s = (*s / (n as f64 - 1.0)).sqrt();
        }
    }
    // Constant columns (and single-row fits) keep unit scale.
    for s in &mut scales {
        if *s == 0.0 {
            *s = 1.0;
        }
    }
    (means, scales)
}

fn apply_standardization(x: &[Vec<f64>], means: &[f64], scales: &[f64]) -> Vec<Vec<f64>> {
    x.iter()
        .map(|row| {
            row.iter()
                .zip(means.iter().zip(scales))
                .map(|(v, (m, s))| (v - m) / s)
                .collect()
        })
        .collect()
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

/// RBF kernel matrix K_ij = exp(-||x_i - x_j||^2 / (2 sigma^2)).
pub fn kernel_matrix(rows: &[Vec<f64>], sigma: f64) -> Vec<Vec<f64>> {
    let n = rows.len();
    let inv = 1.0 / (2.0 * sigma * sigma);
    let mut k = vec![vec![0.0; n]; n];
    for i in 0..n {
        k[i][i] = 1.0;
        for j in (i + 1)..n {
            let v = (-sq_dist(&rows[i], &rows[j]) * inv).exp();
            k[i][j] = v;
            k[j][i] = v;
        }
    }
    k
}

/// Fit the saddle-point system over internally standardized features.
pub fn lssvm_fit(x: &[Vec<f64>], y: &[f64], sigma: f64, gamma: f64) -> Result<LssvmModel> {
    if x.is_empty() || x.len() != y.len() {
        return Err(Error::Shape(format!(
            "fit needs matching non-empty rows, got {} features and {} targets",
            x.len(),
            y.len()
        )));
    }
    let d = x[0].len();
    if d == 0 || x.iter().any(|r| r.len() != d) {
        return Err(Error::Shape("ragged or empty feature rows".into()));
    }
    if sigma <= 0.0 || gamma <= 0.0 || !sigma.is_finite() || !gamma.is_finite() {
        return Err(Error::Validation(format!(
            "kernel bandwidth {sigma} and regularization {gamma} must be positive"
        )));
    }

    let (means, scales) = column_stats(x);
    let xs = apply_standardization(x, &means, &scales);
    let k = kernel_matrix(&xs, sigma);

    let n = xs.len();
    let mut a = DMatrix::<f64>::zeros(n + 1, n + 1);
    let mut b = DVector::<f64>::zeros(n + 1);
    for i in 0..n {
        a[(0, i + 1)] = 1.0;
        a[(i + 1, 0)] = 1.0;
        for j in 0..n {
            a[(i + 1, j + 1)] = k[i][j];
        }
        a[(i + 1, i + 1)] += 1.0 / gamma;
        b[i + 1] = y[i];
    }
    let solution = a.clone().lu().solve(&b).ok_or_else(|| {
        Error::Conditioning("saddle-point system is singular; try a larger 1/gamma".into())
    })?;

    let y_norm = b.norm();
    let residual = (&a * &solution - &b).norm();
    if residual > SOLVE_RESIDUAL_REL * y_norm.max(f64::MIN_POSITIVE) {
        return Err(Error::Conditioning(format!(
            "solve residual {residual:.3e} exceeds {SOLVE_RESIDUAL_REL:.0e} * ||y||; try a larger 1/gamma"
        )));
    }

    Ok(LssvmModel {
        sigma,
        gamma,
        bias: solution[0],
        alpha: solution.as_slice()[1..].to_vec(),
        feature_means: means,
        feature_scales: scales,
        train_x: xs,
    })
}

/// Predict: y(x) = sum_i alpha_i k(x_i, x) + b.
pub fn lssvm_predict(model: &LssvmModel, x: &[Vec<f64>]) -> Result<Vec<f64>> {
    let d = model.feature_means.len();
    if x.iter().any(|r| r.len() != d) {
        return Err(Error::Shape(format!("query rows must have {d} features")));
    }
    let xs = apply_standardization(x, &model.feature_means, &model.feature_scales);
    let inv = 1.0 / (2.0 * model.sigma * model.sigma);
    Ok(xs
        .iter()
        .map(|q| {
            model
                .train_x
                .iter()
                .zip(&model.alpha)
                .map(|(t, a)| a * (-sq_dist(t, q) * inv).exp())
                .sum::<f64>()
                + model.bias
        })
        .collect())
}

/// 5-fold cross-validated grid search over sigma in 2^-3..2^5 and gamma in
/// 2^-2..2^10. Fold assignment is row index mod 5; ties break toward smaller
/// gamma, then smaller sigma.
pub fn tune_hyperparams(x: &[Vec<f64>], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() < 10 || x.len() != y.len() {
        return Err(Error::InsufficientData(format!(
            "tuning needs at least 10 rows, got {}",
            x.len()
        )));
    }
    const FOLDS: usize = 5;
    let mut best: Option<(f64, f64, f64)> = None; // (mse, gamma, sigma)
    for gamma_exp in -2..=10 {
        let gamma = 2f64.powi(gamma_exp);
        for sigma_exp in -3..=5 {
            let sigma = 2f64.powi(sigma_exp);
            let mut sse = 0.0;
            let mut count = 0usize;
            let mut failed = false;
            for fold in 0..FOLDS {
                let mut train_x = Vec::new();
                let mut train_y = Vec::new();
                let mut test_x = Vec::new();
                let mut test_y = Vec::new();
                for (i, (row, target)) in x.iter().zip(y).enumerate() {
                    if i % FOLDS == fold {
                        test_x.push(row.clone());
                        test_y.push(*target);
                    } else {
                        train_x.push(row.clone());
                        train_y.push(*target);
                    }
                }
                match lssvm_fit(&train_x, &train_y, sigma, gamma)
                    .and_then(|m| lssvm_predict(&m, &test_x))
                {
                    Ok(pred) => {
                        sse += pred
                            .iter()
                            .zip(&test_y)
                            .map(|(p, t)| (p - t).powi(2))
                            .sum::<f64>();
                        count += test_y.len();
                    }
                    Err(_) => {
                        failed = true;
                        break;
                    }
                }
            }
            if failed || count == 0 {
                continue;
            }
            let mse = sse / count as f64;
            if best.is_none() || mse < best.expect("some").0 {
                best = Some((mse, gamma, sigma));
            }
        }
    }
    best.map(|(_, gamma, sigma)| (sigma, gamma))
        .ok_or_else(|| Error::Conditioning("no hyperparameter candidate produced a fit".into()))
}
