//! Gap filling via the 1-D discrete-Laplacian system.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Fill gaps so that second differences vanish at unknown indices while known
/// values stay fixed. Interior gaps come out as linear interpolation between
/// their bracketing knowns; runs at either end extend the line through the
/// two nearest knowns.
///
/// Needs at least two known values.
pub fn impute(series: &[Option<f64>]) -> Result<Vec<f64>> {
    let n = series.len();
    let known = series.iter().filter(|v| v.is_some()).count();
    if known < 2 {
        return Err(Error::InsufficientData(format!(
            "imputation needs at least 2 known values, found {known}"
        )));
    }
    if known == n {
        return Ok(series.iter().map(|v| v.expect("complete")).collect());
    }

    // Column index per unknown position.
    let mut col = vec![usize::MAX; n];
    let mut unknowns = Vec::new();
    for (i, v) in series.iter().enumerate() {
        if v.is_none() {
            col[i] = unknowns.len();
            unknowns.push(i);
        }
    }

    // Second-difference equations: one centred at every interior unknown,
    // plus one centred at the known index adjacent to a leading or trailing
    // run so that end runs extrapolate linearly.
    let mut centers: Vec<usize> = unknowns
        .iter()
        .copied()
        .filter(|&i| i >= 1 && i + 1 < n)
        .collect();
    if series[0].is_none() {
        let first_known = series.iter().position(|v| v.is_some()).expect("known >= 2");
        centers.push(first_known);
    }
    if series[n - 1].is_none() {
        let last_known = n
            - 1
            - series
                .iter()
                .rev()
                .position(|v| v.is_some())
                .expect("known >= 2");
        centers.push(last_known);
    }
    debug_assert_eq!(centers.len(), unknowns.len());

    let m = unknowns.len();
    let mut a = DMatrix::<f64>::zeros(m, m);
    let mut b = DVector::<f64>::zeros(m);
    for (row, &c) in centers.iter().enumerate() {
        // x[c-1] - 2 x[c] + x[c+1] = 0
        for (idx, coeff) in [(c - 1, 1.0), (c, -2.0), (c + 1, 1.0)] {
            match series[idx] {
                Some(v) => b[row] -= coeff * v,
                None => a[(row, col[idx])] += coeff,
            }
        }
    }
    let solution = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::Conditioning("singular imputation system".into()))?;

    Ok(series
        .iter()
        .enumerate()
        .map(|(i, v)| v.unwrap_or_else(|| solution[col[i]]))
        .collect())
}
