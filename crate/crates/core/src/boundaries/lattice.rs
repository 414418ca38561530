//! Ewald evaluation of the rectangular lattice sum `sum' |x|^-4`.
//!
//! With `Gamma(s) pi^-s |x|^-2s = int_0^inf t^(s-1) exp(-pi t |x|^2) dt`
//! split at `t = alpha`, the small-`t` half is moved to the reciprocal
//! lattice by Poisson summation. For `s = 2` in three dimensions
//!
//! ```text
//! Z / pi^2 = sum'_x (pi x^2)^-2 Gamma(2, pi alpha x^2)
//!          + 1/V sum'_k (pi k^2)^(1/2) Gamma(-1/2, pi k^2 / alpha)
//!          + 2 alpha^(1/2) / V - alpha^2 / 2
//! ```
//!
//! where `k` runs over the reciprocal lattice `(l/L1, m/L2, n/L3)`. Both sums
//! converge like Gaussians, and the result does not depend on `alpha`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::NeumaierSum;

/// Largest exponent kept in either Gaussian sum.
const EXPONENT_CUTOFF: f64 = 60.0;
/// Refuse lattices that would need more terms than this.
const MAX_TERMS: f64 = 5e7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSum {
    pub value: f64,
    pub abs_error: f64,
}

/// `sum' (l^2 L1^2 + m^2 L2^2 + n^2 L3^2)^-2` over all integer triples except
/// the origin.
pub fn epstein_inverse_fourth(lengths: [f64; 3], rel_tol: f64) -> Result<LatticeSum> {
    let mut l = lengths;
    // Sorting makes the result bitwise invariant under permutations.
    l.sort_by(f64::total_cmp);
    let volume = l[0] * l[1] * l[2];
    let alpha = volume.powf(-2.0 / 3.0);
    epstein_with_splitting(l, alpha, rel_tol)
}

pub(crate) fn epstein_with_splitting(l: [f64; 3], alpha: f64, rel_tol: f64) -> Result<LatticeSum> {
    let volume = l[0] * l[1] * l[2];
    let direct_radius = (EXPONENT_CUTOFF / (PI * alpha)).sqrt();
    let recip_radius = (EXPONENT_CUTOFF * alpha / PI).sqrt();
    let direct_n = l.map(|li| (direct_radius / li).ceil());
    let recip_n = l.map(|li| (recip_radius * li).ceil());
    let count = |n: [f64; 3]| n.iter().map(|v| 2.0 * v + 1.0).product::<f64>();
    let terms = count(direct_n) + count(recip_n);
    let unreachable = Error::ToleranceUnreachable {
        requested: rel_tol,
        estimate: f64::NAN,
        abs_error: f64::INFINITY,
    };
    if terms > MAX_TERMS {
        return Err(unreachable);
    }

    let mut magnitude = 0.0;
    let direct = lattice_loop(direct_n.map(|v| v as i64), |i, j, k| {
        let x2 = sq(i as f64 * l[0]) + sq(j as f64 * l[1]) + sq(k as f64 * l[2]);
        if PI * alpha * x2 > EXPONENT_CUTOFF {
            return 0.0;
        }
        let y = PI * alpha * x2;
        let t = (1.0 + y) * (-y).exp() / sq(PI * x2);
        magnitude += t.abs();
        t
    });
    let recip = lattice_loop(recip_n.map(|v| v as i64), |i, j, k| {
        let k2 = sq(i as f64 / l[0]) + sq(j as f64 / l[1]) + sq(k as f64 / l[2]);
        let y = PI * k2 / alpha;
        if y > EXPONENT_CUTOFF {
            return 0.0;
        }
        let t = (PI * k2).sqrt() * upper_gamma_minus_half(y) / volume;
        magnitude += t.abs();
        t
    });
    let constant = 2.0 * alpha.sqrt() / volume - 0.5 * alpha * alpha;
    let value = PI * PI * (direct + recip + constant);
    // Rounding over the summed terms plus the Gaussian tails beyond the cutoff.
    let tail = (-EXPONENT_CUTOFF).exp() * (count(direct_n) + count(recip_n));
    let abs_error = PI * PI * (64.0 * f64::EPSILON * (magnitude + constant.abs()) + tail * magnitude.max(1.0));
    if !(abs_error <= rel_tol * value.abs()) {
        return Err(Error::ToleranceUnreachable {
            requested: rel_tol,
            estimate: value,
            abs_error,
        });
    }
    Ok(LatticeSum { value, abs_error })
}

fn sq(x: f64) -> f64 {
    x * x
}

/// Sums `f(i, j, k)` over the box `|i| <= n[0]` etc., origin excluded, in
/// lexicographic order.
fn lattice_loop<F: FnMut(i64, i64, i64) -> f64>(n: [i64; 3], mut f: F) -> f64 {
    let mut sum = NeumaierSum::new();
    for i in -n[0]..=n[0] {
        for j in -n[1]..=n[1] {
            for k in -n[2]..=n[2] {
                if i == 0 && j == 0 && k == 0 {
                    continue;
                }
                sum.add(f(i, j, k));
            }
        }
    }
    sum.value()
}

/// `Gamma(-1/2, y) = 2 y^-1/2 exp(-y) - 2 sqrt(pi) erfc(sqrt(y))`.
fn upper_gamma_minus_half(y: f64) -> f64 {
    2.0 * (-y).exp() / y.sqrt() - 2.0 * PI.sqrt() * libm::erfc(y.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force ball sums with continuum tail, oracles/torus_constant.py.
    const CUBIC_S: f64 = 16.532_315;

    #[test]
    fn cubic_constant_matches_brute_force_oracle() {
        let s = epstein_inverse_fourth([1.0; 3], 1e-12).unwrap();
        assert!((s.value - CUBIC_S).abs() < 5e-6, "{s:?}");
    }

    #[test]
    fn independent_of_splitting_parameter() {
        let l = [1.0, 1.3, 2.1];
        let a = epstein_with_splitting(l, 0.4, 1e-12).unwrap().value;
        let b = epstein_with_splitting(l, 1.7, 1e-12).unwrap().value;
        assert!(((a - b) / a).abs() < 1e-13, "{a} vs {b}");
    }

    #[test]
    fn gamma_minus_half_recurrence() {
        // Gamma(1/2, y) = -Gamma(-1/2, y)/2 + y^-1/2 e^-y
        for y in [0.1, 1.0, 5.0] {
            let lhs = PI.sqrt() * libm::erfc(f64::sqrt(y));
            let rhs = -0.5 * upper_gamma_minus_half(y) + (-y).exp() / y.sqrt();
            assert!((lhs - rhs).abs() < 1e-15);
        }
    }

    #[test]
    fn extreme_anisotropy_refused() {
        assert!(epstein_inverse_fourth([1.0, 1e9, 1e9], 1e-8).is_err());
    }
}
