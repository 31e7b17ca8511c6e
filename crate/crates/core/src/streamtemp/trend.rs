//! Autocorrelation diagnostics and the Mann-Kendall trend test with tie and
//! autocorrelation corrections.

use crate::error::{Error, Result};

/// Sample autocorrelation function with its 5% significance band.
#[derive(Debug, Clone)]
pub struct Acf {
    /// r\[k\] is the lag-k autocorrelation; r\[0\] = 1 by construction.
    pub r: Vec<f64>,
    /// Two-sided 5% band: +/- 1.96 / sqrt(n).
    pub band: f64,
}

/// Mean-centred, biased-denominator sample autocorrelations r(1..max_lag).
pub fn acf(series: &[f64], max_lag: usize) -> Result<Acf> {
    let n = series.len();
    if n <= max_lag + 1 {
        return Err(Error::InsufficientData(format!(
            "series of length {n} cannot support lag {max_lag}"
        )));
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let denom: f64 = series.iter().map(|x| (x - mean).powi(2)).sum();
    if denom == 0.0 {
        return Err(Error::ZeroVariance(
            "constant series has no autocorrelation".into(),
        ));
    }
    let mut r = Vec::with_capacity(max_lag + 1);
    r.push(1.0);
    for k in 1..=max_lag {
        let num: f64 = (k..n)
            .map(|t| (series[t] - mean) * (series[t - k] - mean))
            .sum();
        r.push(num / denom);
    }
    Ok(Acf {
        r,
        band: 1.96 / (n as f64).sqrt(),
    })
}

/// Trend direction by the sign of the Mann-Kendall S statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
    None,
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Up => "up",
            Self::Down => "down",
            Self::None => "none",
        })
    }
}

/// Result of the corrected Mann-Kendall test.
#[derive(Debug, Clone)]
pub struct TrendResult {
    /// S = sum over pairs i<j of sign(x_j - x_i).
    pub s: i64,
    /// Variance of S after the tie-group correction.
    pub var_ties: f64,
    /// Variance after the additional autocorrelation (effective sample size)
    /// correction.
    pub var_corrected: f64,
    /// Continuity-corrected normal deviate.
    pub z: f64,
    /// Two-sided p-value.
    pub p_value: f64,
    pub direction: Direction,
    /// p < alpha for the alpha handed to [`mk_trend`].
    pub significant: bool,
}

fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite"));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for k in i..=j {
            ranks[order[k]] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Median of the pairwise slopes (x_j - x_i)/(j - i); the internal detrending
/// step of the effective-sample-size correction.
fn pairwise_median_slope(series: &[f64]) -> f64 {
    let n = series.len();
    let mut slopes = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            slopes.push((series[j] - series[i]) / (j - i) as f64);
        }
    }
    slopes.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let m = slopes.len();
    if m % 2 == 1 {
        slopes[m / 2]
    } else {
        0.5 * (slopes[m / 2 - 1] + slopes[m / 2])
    }
}

/// Variance inflation factor from significant rank autocorrelations of the
/// detrended series, at lags up to n/4.
fn autocorrelation_factor(series: &[f64]) -> f64 {
    let n = series.len();
    let max_lag = n / 4;
    if max_lag == 0 {
        return 1.0;
    }
    let slope = pairwise_median_slope(series);
    let detrended: Vec<f64> = series
        .iter()
        .enumerate()
        .map(|(t, x)| x - slope * t as f64)
        .collect();
    let ranks = average_ranks(&detrended);
    let rank_acf = match acf(&ranks, max_lag) {
        Ok(a) => a,
        // Constant ranks after detrending: nothing to correct.
        Err(_) => return 1.0,
    };
    let nf = n as f64;
    let mut sum = 0.0;
    for k in 1..=max_lag {
        let rho = rank_acf.r[k];
        if rho.abs() > rank_acf.band {
            sum += (nf - k as f64) * (nf - k as f64 - 1.0) * (nf - k as f64 - 2.0) * rho;
        }
    }
    // The correction only ever inflates the variance: spurious negative
    // autocorrelations would otherwise shrink it and wreck the test size on
    // uncorrelated data.
    (1.0 + 2.0 / (nf * (nf - 1.0) * (nf - 2.0)) * sum).max(1.0)
}

/// Mann-Kendall trend test on a complete series.
///
/// The variance of S takes the standard tie-group correction and is then
/// inflated by the effective-sample-size factor computed from significant
/// rank autocorrelations of the detrended series. Z carries the +/-1
/// continuity correction and the p-value is two-sided normal.
pub fn mk_trend(series: &[f64], alpha: f64) -> Result<TrendResult> {
    let n = series.len();
    if n < 3 {
        return Err(Error::InsufficientData(format!(
            "trend test needs at least 3 points, got {n}"
        )));
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::Validation("non-finite value in trend series".into()));
    }

    let mut s: i64 = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            s += match series[j].partial_cmp(&series[i]).expect("finite") {
                std::cmp::Ordering::Greater => 1,
                std::cmp::Ordering::Less => -1,
                std::cmp::Ordering::Equal => 0,
            };
        }
    }

    // Tie-group variance.
    let nf = n as f64;
    let mut sorted = series.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let mut tie_sum = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        if t > 1.0 {
            tie_sum += t * (t - 1.0) * (2.0 * t + 5.0);
        }
        i = j + 1;
    }
    let var_ties = (nf * (nf - 1.0) * (2.0 * nf + 5.0) - tie_sum) / 18.0;

    let (var_corrected, z) = if var_ties > 0.0 {
        let var_corrected = var_ties * autocorrelation_factor(series);
        let z = match s.cmp(&0) {
            std::cmp::Ordering::Greater => (s as f64 - 1.0) / var_corrected.sqrt(),
            std::cmp::Ordering::Less => (s as f64 + 1.0) / var_corrected.sqrt(),
            std::cmp::Ordering::Equal => 0.0,
        };
        (var_corrected, z)
    } else {
        // All values equal: no dispersion, no trend.
        (0.0, 0.0)
    };

    let p_value = libm::erfc(z.abs() / std::f64::consts::SQRT_2);
    let direction = match s.cmp(&0) {
        std::cmp::Ordering::Greater => Direction::Up,
        std::cmp::Ordering::Less => Direction::Down,
        std::cmp::Ordering::Equal => Direction::None,
    };
    Ok(TrendResult {
        s,
        var_ties,
        var_corrected,
        z,
        p_value,
        direction,
        significant: p_value < alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn acf_lag_zero_is_one() {
        let s: Vec<f64> = (0..50).map(|i| (i as f64 * 0.7).sin()).collect();
        let a = acf(&s, 10).unwrap();
        assert_eq!(a.r[0], 1.0);
        assert_eq!(a.r.len(), 11);
    }

    #[test]
    fn acf_periodic_self_similarity() {
        let s: Vec<f64> = (0..600)
            .map(|i| (2.0 * std::f64::consts::PI * i as f64 / 12.0).cos())
            .collect();
        let a = acf(&s, 12).unwrap();
        assert!(a.r[12] >= 0.95, "r(12) = {}", a.r[12]);
    }

    #[test]
    fn acf_constant_series_errors() {
        assert!(matches!(acf(&[5.0; 30], 5), Err(Error::ZeroVariance(_))));
    }

    #[test]
    fn acf_short_series_errors() {
        assert!(acf(&[1.0, 2.0, 3.0], 5).is_err());
    }

    #[test]
    fn acf_white_noise_stays_inside_loose_band() {
        // 1000 replicates of n=600 white noise; |r(k)| < 0.10 for k=1..24
        // should hold for at least 95% of (replicate, lag) pairs.
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut inside = 0usize;
        let mut total = 0usize;
        for _ in 0..1000 {
            let s: Vec<f64> = (0..600).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let a = acf(&s, 24).unwrap();
            for k in 1..=24 {
                total += 1;
                if a.r[k].abs() < 0.10 {
                    inside += 1;
                }
            }
        }
        let freq = inside as f64 / total as f64;
        assert!(freq >= 0.95, "inside-frequency {freq}");
    }

    #[test]
    fn mk_strictly_increasing_n10() {
        let s: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        let r = mk_trend(&s, 0.10).unwrap();
        assert_eq!(r.s, 45);
        assert_eq!(r.direction, Direction::Up);
        assert!(r.significant);
        // No ties and (after detrending) no surviving autocorrelation:
        // Var = n(n-1)(2n+5)/18 = 125, Z = 44/sqrt(125).
        assert_abs_diff_eq!(r.var_ties, 125.0);
        assert_abs_diff_eq!(r.var_corrected, 125.0);
        assert_relative_eq!(r.z, 44.0 / 125f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(r.p_value, 8.26e-5, max_relative = 0.01);
    }

    #[test]
    fn mk_constant_series_is_flat_not_an_error() {
        let r = mk_trend(&[7.0; 20], 0.10).unwrap();
        assert_eq!(r.s, 0);
        assert_eq!(r.direction, Direction::None);
        assert!(!r.significant);
        assert_eq!(r.var_corrected, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn mk_decreasing_is_downward() {
        let s: Vec<f64> = (0..12).map(|i| 20.0 - i as f64).collect();
        let r = mk_trend(&s, 0.10).unwrap();
        assert_eq!(r.s, -66);
        assert_eq!(r.direction, Direction::Down);
        assert!(r.significant);
    }

    #[test]
    fn mk_tie_groups_shrink_variance() {
        let s = [1.0, 2.0, 2.0, 3.0, 4.0, 4.0, 4.0, 5.0];
        let r = mk_trend(&s, 0.10).unwrap();
        let n = 8.0f64;
        let expected =
            (n * (n - 1.0) * (2.0 * n + 5.0) - 2.0 * 1.0 * 9.0 - 3.0 * 2.0 * 11.0) / 18.0;
        assert_abs_diff_eq!(r.var_ties, expected);
    }

    #[test]
    fn mk_short_series_errors() {
        assert!(mk_trend(&[1.0, 2.0], 0.10).is_err());
    }

    proptest! {
        #[test]
        fn mk_s_invariant_under_monotone_transform(
            values in prop::collection::vec(-10.0f64..10.0, 5..40),
        ) {
            let raw = mk_trend(&values, 0.10).unwrap();
            let transformed: Vec<f64> = values.iter().map(|x| x.exp() * 2.0 + 1.0).collect();
            let t = mk_trend(&transformed, 0.10).unwrap();
            prop_assert_eq!(raw.s, t.s);
            prop_assert_eq!(raw.direction, t.direction);
        }
    }

    #[test]
    fn mk_white_noise_calibration_small() {
        // Quick calibration check; the acceptance suite runs the full one.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let replicates = 400;
        let mut rejections = 0;
        for _ in 0..replicates {
            let s: Vec<f64> = (0..120).map(|_| rng.gen_range(-1.0..1.0f64)).collect();
            if mk_trend(&s, 0.10).unwrap().significant {
                rejections += 1;
            }
        }
        let rate = rejections as f64 / replicates as f64;
        assert!((0.05..=0.16).contains(&rate), "rejection rate {rate}");
    }

    #[test]
    fn mk_ar1_correction_rejects_less_than_uncorrected() {
        // On AR(1) noise the rank autocorrelations are strongly positive, so
        // the corrected test must reject no more often than a tie-only test.
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let replicates = 300;
        let mut corrected = 0;
        let mut uncorrected = 0;
        for _ in 0..replicates {
            let mut x = 0.0;
            let s: Vec<f64> = (0..120)
                .map(|_| {
                    x = 0.6 * x + rng.gen_range(-1.0..1.0f64);
                    x
                })
                .collect();
            let r = mk_trend(&s, 0.10).unwrap();
            if r.significant {
                corrected += 1;
            }
            // Tie-only z, same continuity correction.
            let z = if r.s > 0 {
                (r.s as f64 - 1.0) / r.var_ties.sqrt()
            } else if r.s < 0 {
                (r.s as f64 + 1.0) / r.var_ties.sqrt()
            } else {
                0.0
            };
            if libm::erfc(z.abs() / std::f64::consts::SQRT_2) < 0.10 {
                uncorrected += 1;
            }
        }
        assert!(
            corrected <= uncorrected,
            "corrected {corrected} > uncorrected {uncorrected}"
        );
    }
}
