//! Fit of the near-focus variance to `-hbar rho0 c_s C / (b a^3)`.

use serde::Serialize;

use super::integral::{variance_near_focus, FocusOptions};
use super::{FieldPoint, MirrorSpec};
use crate::boundaries::boundary_prefactor;
use crate::error::{Error, Result};
use crate::media::FluidMedium;

/// Largest relative deviation of a single `C` sample from the fitted `C`.
pub const MAX_FIT_RESIDUAL: f64 = 0.05;

/// Fit at one field-point angle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaFit {
    pub gamma: f64,
    /// Exponent of `a` in `|value| ~ a^slope_a b^slope_b`.
    pub slope_a: f64,
    pub slope_b: f64,
    /// Geometric mean of `|value| b a^3 / (hbar rho0 c_s)` over the grid.
    pub c: f64,
    /// Largest relative deviation of a sample of `C` from `c`.
    pub residual: f64,
    /// `(a, b, value)` for every grid point, in grid order.
    pub samples: Vec<(f64, f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CFit {
    pub fits: Vec<GammaFit>,
    /// Largest residual over all angles.
    pub residual: f64,
}

/// Solves the 3x3 system `m x = r` by Cramer's rule.
fn solve3(m: [[f64; 3]; 3], r: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(m);
    if d.abs() < 1e-300 {
        return None;
    }
    let mut x = [0.0; 3];
    for (k, xk) in x.iter_mut().enumerate() {
        let mut mk = m;
        for i in 0..3 {
            mk[i][k] = r[i];
        }
        *xk = det(mk) / d;
    }
    Some(x)
}

/// Least-squares plane `y = c0 + c1 x1 + c2 x2`.
fn plane_fit(x1: &[f64], x2: &[f64], y: &[f64]) -> Option<[f64; 3]> {
    let mut m = [[0.0; 3]; 3];
    let mut r = [0.0; 3];
    for i in 0..y.len() {
        let row = [1.0, x1[i], x2[i]];
        for (j, &rj) in row.iter().enumerate() {
            r[j] += rj * y[i];
            for (k, &rk) in row.iter().enumerate() {
                m[j][k] += rj * rk;
            }
        }
    }
    solve3(m, r)
}

/// Evaluates the variance on the grid `b_values x a_values` for each angle
/// and fits exponents and `C(gamma)`.
///
/// Fails with [`Error::PoorFit`] when a sample of `C` deviates from the fit
/// by more than 5%.
pub fn extract_c(
    medium: &FluidMedium,
    aperture_half_angle: f64,
    b_values: &[f64],
    a_values: &[f64],
    gammas: &[f64],
    opts: &FocusOptions,
) -> Result<CFit> {
    if b_values.is_empty() || a_values.is_empty() || b_values.len() * a_values.len() < 3 {
        return Err(Error::invalid("grid", "need at least three (a, b) points"));
    }
    let mut fits = Vec::with_capacity(gammas.len());
    for &gamma in gammas {
        let mut samples = Vec::new();
        for &b in b_values {
            let m = MirrorSpec::new(b, aperture_half_angle)?;
            for &a in a_values {
                let p = FieldPoint::new(a, gamma)?;
                let v = variance_near_focus(medium, &m, &p, opts)?;
                samples.push((a, b, v.value));
            }
        }
        fits.push(fit_samples(medium, gamma, samples)?);
    }
    let residual = fits.iter().map(|f| f.residual).fold(0.0, f64::max);
    Ok(CFit { fits, residual })
}

/// Fits exponents and `C` to `(a, b, value)` samples taken at one angle.
///
/// Fails with [`Error::PoorFit`] when a sample of `C` deviates from the fit
/// by more than 5%.
pub fn fit_samples(medium: &FluidMedium, gamma: f64, samples: Vec<(f64, f64, f64)>) -> Result<GammaFit> {
    if samples.len() < 2 {
        return Err(Error::invalid("grid", "need at least two samples per angle"));
    }
    let k = boundary_prefactor(medium);
    let la: Vec<f64> = samples.iter().map(|s| s.0.ln()).collect();
    let lb: Vec<f64> = samples.iter().map(|s| s.1.ln()).collect();
    let lv: Vec<f64> = samples.iter().map(|s| s.2.abs().ln()).collect();
    let distinct = |v: &[f64]| v.iter().any(|x| (x - v[0]).abs() > 1e-12);
    let (slope_a, slope_b) = match (distinct(&la), distinct(&lb)) {
        (true, true) => {
            let c = plane_fit(&la, &lb, &lv).ok_or_else(|| Error::PoorFit("singular design matrix".into()))?;
            (c[1], c[2])
        }
        (true, false) => (line_slope(&la, &lv), f64::NAN),
        (false, true) => (f64::NAN, line_slope(&lb, &lv)),
        (false, false) => (f64::NAN, f64::NAN),
    };
    let cs: Vec<f64> = samples.iter().map(|&(a, b, v)| v.abs() * b * a.powi(3) / k).collect();
    let c = (cs.iter().map(|c| c.ln()).sum::<f64>() / cs.len() as f64).exp();
    let residual = cs.iter().map(|x| (x / c - 1.0).abs()).fold(0.0, f64::max);
    if !(c > 0.0) || residual > MAX_FIT_RESIDUAL {
        return Err(Error::PoorFit(format!(
            "gamma = {gamma}: C = {c:e}, largest deviation {residual:.3e}, slopes ({slope_a:.4}, {slope_b:.4})"
        )));
    }
    Ok(GammaFit {
        gamma,
        slope_a,
        slope_b,
        c,
        residual,
        samples,
    })
}

fn line_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
