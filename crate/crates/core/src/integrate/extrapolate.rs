//! Limits `δ → 0` of excised integrals.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Extrapolation {
    pub value: C64,
    /// Root-mean-square residual of the least-squares fit (zero for an
    /// exactly determined fit).
    pub residual: f64,
}

/// Model basis `1, δ, δ(log δ)²`.
fn basis(delta: f64) -> [f64; 3] {
    let l = delta.ln();
    [1.0, delta, delta * l * l]
}

/// Least-squares fit of `v + c₁δ + c₂δ(log δ)²`, returning `v`.
pub fn extrapolate(partials: &[(f64, C64)]) -> Result<Extrapolation> {
    check_schedule(partials, 3)?;
    if partials.iter().all(|p| p.1 == partials[0].1) {
        return Ok(Extrapolation { value: partials[0].1, residual: 0.0 });
    }
    let rows: Vec<[f64; 3]> = partials.iter().map(|p| basis(p.0)).collect();
    let (coef, residual) = least_squares(&rows, &partials.iter().map(|p| p.1).collect::<Vec<_>>())?;
    Ok(Extrapolation { value: coef[0], residual })
}

pub(crate) fn check_schedule(partials: &[(f64, C64)], needed: usize) -> Result<()> {
    if partials.len() < needed {
        return Err(Error::ScheduleTooShort { needed, got: partials.len() });
    }
    if partials.iter().any(|p| !(p.0 > 0.0)) || partials.windows(2).any(|w| w[1].0 >= w[0].0) {
        return Err(Error::BadSchedule);
    }
    Ok(())
}

/// Solves `min ‖A c − y‖` for a real `n×K` design matrix and complex data
/// by Householder QR. Fails when the column scale ratio of `R` signals an
/// ill-conditioned design.
pub(crate) fn least_squares<const K: usize>(rows: &[[f64; K]], y: &[C64]) -> Result<([C64; K], f64)> {
    let n = rows.len();
    let mut a: Vec<[f64; K]> = rows.to_vec();
    let mut b: Vec<C64> = y.to_vec();
    // column scaling keeps the conditioning test meaningful
    let mut scale = [0.0; K];
    for (k, s) in scale.iter_mut().enumerate() {
        *s = a.iter().map(|r| r[k] * r[k]).sum::<f64>().sqrt();
        if *s == 0.0 {
            return Err(Error::IllConditioned);
        }
        for r in a.iter_mut() {
            r[k] /= *s;
        }
    }
    for k in 0..K {
        let norm = (k..n).map(|i| a[i][k] * a[i][k]).sum::<f64>().sqrt();
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..n).map(|i| a[i][k]).collect();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        if vv == 0.0 {
            continue;
        }
        for j in k..K {
            let dot: f64 = (k..n).map(|i| v[i - k] * a[i][j]).sum();
            for i in k..n {
                a[i][j] -= 2.0 * dot / vv * v[i - k];
            }
        }
        let dot: C64 = (k..n).map(|i| b[i] * v[i - k]).sum();
        for i in k..n {
            b[i] -= dot * (2.0 / vv * v[i - k]);
        }
    }
    let diag: Vec<f64> = (0..K).map(|k| a[k][k].abs()).collect();
    let (lo, hi) = diag.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &d| (l.min(d), h.max(d)));
    if lo <= 1e-13 * hi {
        return Err(Error::IllConditioned);
    }
    let mut c = [C64::new(0.0, 0.0); K];
    for k in (0..K).rev() {
        let mut s = b[k];
        for j in k + 1..K {
            s -= c[j] * a[k][j];
        }
        c[k] = s / a[k][k];
    }
    for k in 0..K {
        c[k] /= scale[k];
    }
    let residual = if n > K {
        ((K..n).map(|i| b[i].norm_sqr()).sum::<f64>() / n as f64).sqrt()
    } else {
        0.0
    };
    Ok((c, residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn constant_partials() {
        let p = [(0.2, r(1.5)), (0.1, r(1.5)), (0.05, r(1.5))];
        assert_eq!(extrapolate(&p).unwrap().value, r(1.5));
    }

    #[test]
    fn recovers_synthetic_limit() {
        let model = |d: f64| C64::new(2.5, -1.0) + r(3.0 * d * d.ln().powi(2)) + r(0.7 * d);
        let p: Vec<_> = [0.2, 0.1, 0.05].iter().map(|&d| (d, model(d))).collect();
        let e = extrapolate(&p).unwrap();
        assert!((e.value - C64::new(2.5, -1.0)).norm() < 1e-10);
        let p5: Vec<_> = [0.3, 0.2, 0.1, 0.05, 0.025].iter().map(|&d| (d, model(d))).collect();
        let e5 = extrapolate(&p5).unwrap();
        assert!((e5.value - C64::new(2.5, -1.0)).norm() < 1e-10 && e5.residual < 1e-12);
    }

    #[test]
    fn rejects_short_or_unordered_schedules() {
        assert!(matches!(
            extrapolate(&[(0.2, r(1.0)), (0.1, r(2.0))]),
            Err(Error::ScheduleTooShort { needed: 3, got: 2 })
        ));
        assert_eq!(extrapolate(&[(0.1, r(1.0)), (0.2, r(2.0)), (0.05, r(0.0))]), Err(Error::BadSchedule));
    }

    #[test]
    fn nearly_coincident_radii_are_ill_conditioned() {
        let p = [(0.1, r(1.0)), (0.1 - 1e-15, r(2.0)), (0.1 - 2e-15, r(0.5))];
        assert_eq!(extrapolate(&p), Err(Error::IllConditioned));
    }
}
