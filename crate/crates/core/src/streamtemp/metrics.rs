//! Standardization and goodness-of-fit metrics.

use crate::error::{Error, Result};

/// A z-scored series with the statistics used to produce it.
#[derive(Debug, Clone)]
pub struct Standardized {
    pub values: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation (n-1 denominator).
    pub scale: f64,
}

/// Z-score a series by its own mean and sample standard deviation.
///
/// When splitting into train/test windows, call this on the training slice
/// only and reuse the stored statistics for the rest.
pub fn standardize(series: &[f64]) -> Result<Standardized> {
    if series.len() < 2 {
        return Err(Error::InsufficientData(
            "standardization needs at least 2 values".into(),
        ));
    }
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    let var = series.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    if var == 0.0 {
        return Err(Error::ZeroVariance(
            "cannot standardize a constant series".into(),
        ));
    }
    let scale = var.sqrt();
    Ok(Standardized {
        values: series.iter().map(|x| (x - mean) / scale).collect(),
        mean,
        scale,
    })
}

/// Nash-Sutcliffe efficiency: 1 - sum(O-P)^2 / sum(O-mean(O))^2, in (-inf, 1].
pub fn nse(observed: &[f64], predicted: &[f64]) -> Result<f64> {
    if observed.len() != predicted.len() || observed.len() < 2 {
        return Err(Error::Shape(format!(
            "NSE needs equal series of length >= 2, got {} and {}",
            observed.len(),
            predicted.len()
        )));
    }
    let mean = observed.iter().sum::<f64>() / observed.len() as f64;
    let denom: f64 = observed.iter().map(|o| (o - mean).powi(2)).sum();
    if denom == 0.0 {
        return Err(Error::ZeroVariance(
            "NSE undefined for constant observations".into(),
        ));
    }
    let num: f64 = observed
        .iter()
        .zip(predicted)
        .map(|(o, p)| (o - p).powi(2))
        .sum();
    Ok(1.0 - num / denom)
}

/// Pearson's linear correlation coefficient, in [-1, 1].
pub fn pearson_r(observed: &[f64], predicted: &[f64]) -> Result<f64> {
    if observed.len() != predicted.len() || observed.len() < 2 {
        return Err(Error::Shape(format!(
            "correlation needs equal series of length >= 2, got {} and {}",
            observed.len(),
            predicted.len()
        )));
    }
    let n = observed.len() as f64;
    let mo = observed.iter().sum::<f64>() / n;
    let mp = predicted.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vo = 0.0;
    let mut vp = 0.0;
    for (o, p) in observed.iter().zip(predicted) {
        cov += (o - mo) * (p - mp);
        vo += (o - mo).powi(2);
        vp += (p - mp).powi(2);
    }
    if vo == 0.0 || vp == 0.0 {
        return Err(Error::ZeroVariance(
            "correlation undefined for constant series".into(),
        ));
    }
    Ok((cov / (vo.sqrt() * vp.sqrt())).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn standardize_zero_mean_unit_sd() {
        let s: Vec<f64> = (0..40)
            .map(|i| 10.0 + (i as f64 * 1.3).sin() * 4.0)
            .collect();
        let z = standardize(&s).unwrap();
        let n = z.values.len() as f64;
        let mean = z.values.iter().sum::<f64>() / n;
        let var = z.values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert_abs_diff_eq!(mean, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(var.sqrt(), 1.0, epsilon = 1e-12);
        for (orig, v) in s.iter().zip(&z.values) {
            assert_abs_diff_eq!(v * z.scale + z.mean, *orig, epsilon = 1e-12);
        }
    }

    #[test]
    fn standardize_constant_errors() {
        assert!(matches!(
            standardize(&[2.0; 10]),
            Err(Error::ZeroVariance(_))
        ));
    }

    #[test]
    fn nse_perfect_and_mean_predictor() {
        let obs = [3.0, 5.0, 7.0, 9.0];
        assert_abs_diff_eq!(nse(&obs, &obs).unwrap(), 1.0);
        let mean_pred = [6.0; 4];
        assert_abs_diff_eq!(nse(&obs, &mean_pred).unwrap(), 0.0);
    }

    #[test]
    fn nse_hand_fixture() {
        // 1 - 1/2 with obs [1,2,3] and pred [1,2,4].
        assert_abs_diff_eq!(nse(&[1.0, 2.0, 3.0], &[1.0, 2.0, 4.0]).unwrap(), 0.5);
    }

    #[test]
    fn nse_constant_obs_errors() {
        assert!(matches!(
            nse(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0]),
            Err(Error::ZeroVariance(_))
        ));
    }

    #[test]
    fn pearson_affine_and_negation() {
        let x = [1.0, 2.0, 3.0, 5.0, 8.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        assert_abs_diff_eq!(pearson_r(&y, &x).unwrap(), 1.0, epsilon = 1e-12);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_abs_diff_eq!(pearson_r(&x, &neg).unwrap(), -1.0, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn nse_never_exceeds_one_and_sign_rule(
            obs in prop::collection::vec(-50.0f64..50.0, 3..30),
            pred in prop::collection::vec(-50.0f64..50.0, 3..30),
        ) {
            let n = obs.len().min(pred.len());
            let obs = &obs[..n];
            let pred = &pred[..n];
            if let Ok(v) = nse(obs, pred) {
                prop_assert!(v <= 1.0);
                let mean = obs.iter().sum::<f64>() / n as f64;
                let denom: f64 = obs.iter().map(|o| (o - mean).powi(2)).sum();
                let num: f64 = obs.iter().zip(pred).map(|(o, p)| (o - p).powi(2)).sum();
                prop_assert_eq!(v < 0.0, num > denom);
            }
        }

        #[test]
        fn pearson_matches_covariance_oracle(
            obs in prop::collection::vec(-50.0f64..50.0, 4..30),
            pred in prop::collection::vec(-50.0f64..50.0, 4..30),
        ) {
            let n = obs.len().min(pred.len());
            let (obs, pred) = (&obs[..n], &pred[..n]);
            if let Ok(r) = pearson_r(obs, pred) {
                let nf = n as f64;
                let mo = obs.iter().sum::<f64>() / nf;
                let mp = pred.iter().sum::<f64>() / nf;
                let cov = obs.iter().zip(pred).map(|(o, p)| (o - mo) * (p - mp)).sum::<f64>() / nf;
                let so = (obs.iter().map(|o| (o - mo).powi(2)).sum::<f64>() / nf).sqrt();
                let sp = (pred.iter().map(|p| (p - mp).powi(2)).sum::<f64>() / nf).sqrt();
                prop_assert!((r - cov / (so * sp)).abs() < 1e-9);
                prop_assert!((-1.0..=1.0).contains(&r));
            }
        }
    }
}
