//! Density fluctuations near the focus of a parabolic mirror.
//!
//! The mirror is a parabolic cylinder with focal distance `b/2`. A plane
//! wave arriving at angle `theta` reflects off the mirror point seen from
//! the focus at angle `theta'` (measured from the direction of the vertex).
//! For a field point `P` a distance `a` from the focus, at angle `gamma`
//! from the axis on the open side, usually zero or two values of `theta'`
//! send a reflected ray through `P`. Their optical path difference `dl`
//! drives the geometric-optics interference term
//!
//! ```text
//! I = int dtheta sum_pairs dl^-4,    <rho^2>_R = -(kappa / 2) hbar rho0 c_s I
//! ```
//!
//! which scales as `1 / (b a^3)`.
//!
//! [`solve_ray_pair`] traces the rays exactly, [`delta_ell_analytic`] is the
//! leading-order path difference in `a / b`, [`variance_near_focus`] does
//! the angular integral and [`extract_c`] fits the scaling law.

mod fit;
mod integral;
mod trace;

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

pub use fit::{extract_c, fit_samples, CFit, GammaFit, MAX_FIT_RESIDUAL};
pub use integral::{
    admissible_intervals, near_focus_integral, pair_integrand, variance_near_focus, variance_near_focus_detailed,
    AdmissibleInterval, EndKind, FocusOptions, NearFocus, DEFAULT_KAPPA,
};
pub use trace::{solve_ray_pair, PairOutcome, RayPair, RayTrace, TraceMethod};

/// Field points with `a / b` above this get a warning note.
pub const SMALL_A_OVER_B: f64 = 0.01;
/// Field points with `a / b` above this are rejected outright.
pub const MAX_A_OVER_B: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MirrorSpec {
    /// Twice the focus-to-vertex distance, m.
    pub b: f64,
    /// Largest `|theta'|` of the mirror as seen from the focus, rad.
    pub aperture_half_angle: f64,
}

impl MirrorSpec {
    pub fn new(b: f64, aperture_half_angle: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::invalid("b", format!("must be positive and finite, got {b}")));
        }
        if !(aperture_half_angle > 0.0 && aperture_half_angle < PI) {
            return Err(Error::invalid(
                "aperture_half_angle",
                format!("must lie in (0, pi), got {aperture_half_angle}"),
            ));
        }
        Ok(MirrorSpec { b, aperture_half_angle })
    }

    /// Mirror with the default aperture of `pi/2` (the latus rectum).
    pub fn with_focal_width(b: f64) -> Result<Self> {
        MirrorSpec::new(b, 0.5 * PI)
    }

    pub fn focal_length(&self) -> f64 {
        0.5 * self.b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldPoint {
    /// Distance from the focus, m.
    pub a: f64,
    /// Angle from the axis, on the open side of the mirror, rad.
    pub gamma: f64,
}

impl FieldPoint {
    pub fn new(a: f64, gamma: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::invalid("a", format!("must be positive and finite, got {a}")));
        }
        if !gamma.is_finite() {
            return Err(Error::invalid("gamma", "must be finite"));
        }
        Ok(FieldPoint { a, gamma })
    }

    /// Rejects points too far from the focus; returns a warning for points
    /// outside the small-`a/b` regime.
    pub(crate) fn check_against(&self, m: &MirrorSpec) -> Result<Option<String>> {
        let ratio = self.a / m.b;
        if ratio > MAX_A_OVER_B {
            return Err(Error::invalid(
                "a",
                format!("a/b = {ratio:e} exceeds {MAX_A_OVER_B}; the point is not near the focus"),
            ));
        }
        Ok((ratio >= SMALL_A_OVER_B).then(|| format!("a/b = {ratio:e} is not small; corrections of that order apply")))
    }
}

/// Leading-order path difference of the rays reflected at `alpha` and `beta`.
///
/// `a [cos g (cos al - cos be + sin^2 al - sin^2 be) + sin g (sin al - sin be + sin be cos be - sin al cos al)]`
pub fn delta_ell_analytic(p: &FieldPoint, alpha: f64, beta: f64) -> f64 {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let (sg, cg) = p.gamma.sin_cos();
    p.a * (cg * (ca - cb + sa * sa - sb * sb) + sg * (sa - sb + sb * cb - sa * ca))
}
