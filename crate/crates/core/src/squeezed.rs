//! Single-mode squeezed vacuum.
//!
//! Relative to the vacuum, a squeezed state of one plane-wave mode changes the
//! mean squared density by
//! `(hbar omega rho0 / c_s^2 V) sinh r {sinh r - cosh r cos[2(kz - omega t) + delta]}`.
//! Locally this can be negative; its average over a period is `sinh^2 r`
//! times the prefactor and hence positive.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::media::{FluidMedium, HBAR};

/// Squeeze parameter `zeta = r exp(i delta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParams {
    r: f64,
    delta: f64,
}

impl SqueezeParams {
    /// `delta` is reduced to `[0, 2 pi)`.
    pub fn new(r: f64, delta: f64) -> Result<Self> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::invalid("r", format!("must be finite and >= 0, got {r}")));
        }
        if !delta.is_finite() {
            return Err(Error::invalid("delta", "must be finite"));
        }
        let mut delta = delta.rem_euclid(TAU);
        if delta >= TAU {
            delta = 0.0;
        }
        Ok(SqueezeParams { r, delta })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedModeSpec {
    /// Wave number, 1/m.
    pub k: f64,
    /// Angular frequency, rad/s.
    pub omega: f64,
    /// Quantization volume, m^3.
    pub volume: f64,
}

impl SqueezedModeSpec {
    /// Mode with `omega = c_s k`.
    pub fn for_medium(medium: &FluidMedium, k: f64, volume: f64) -> Result<Self> {
        let spec = SqueezedModeSpec {
            k,
            omega: medium.c_sound * k,
            volume,
        };
        spec.check(medium)?;
        Ok(spec)
    }

    pub fn check(&self, medium: &FluidMedium) -> Result<()> {
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(Error::invalid("k", format!("must be > 0, got {}", self.k)));
        }
        if !(self.volume > 0.0 && self.volume.is_finite()) {
            return Err(Error::invalid("volume", format!("must be > 0, got {}", self.volume)));
        }
        let expected = medium.c_sound * self.k;
        if ((self.omega - expected) / expected).abs() > 1e-12 {
            return Err(Error::invalid(
                "omega",
                format!("must equal c_sound * k = {expected}, got {}", self.omega),
            ));
        }
        Ok(())
    }

    /// `hbar omega rho0 / (c_s^2 V)`.
    pub fn prefactor(&self, medium: &FluidMedium) -> f64 {
        HBAR * self.omega * medium.rho0 / (medium.c_sound.powi(2) * self.volume)
    }

    /// Spatial period of the variance profile, `pi / k`.
    pub fn profile_period(&self) -> f64 {
        PI / self.k
    }
}

/// Renormalized mean squared density at `(z, t)`, kg^2 m^-6.
pub fn squeezed_variance(
    medium: &FluidMedium,
    mode: &SqueezedModeSpec,
    params: &SqueezeParams,
    z: f64,
    t: f64,
) -> Result<f64> {
    mode.check(medium)?;
    let phase = 2.0 * (mode.k * z - mode.omega * t) + params.delta;
    let (s, c) = (params.r.sinh(), params.r.cosh());
    Ok(mode.prefactor(medium) * s * (s - c * phase.cos()))
}

/// Extreme values over all positions: `prefactor * sinh r (sinh r -/+ cosh r)`.
pub fn squeezed_envelope(medium: &FluidMedium, mode: &SqueezedModeSpec, params: &SqueezeParams) -> (f64, f64) {
    let p = mode.prefactor(medium);
    let (s, c) = (params.r.sinh(), params.r.cosh());
    (p * s * (s - c), p * s * (s + c))
}
