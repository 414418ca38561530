//! Light scattering by zero-point density fluctuations.
//!
//! The zero-point cross section is inelastic (a phonon is created), so it is
//! Brillouin rather than Rayleigh scattering. Its size relative to scattering
//! by thermal fluctuations is set mainly by `hbar omega / k_B T` and `c_s / c`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::media::{FluidMedium, C_LIGHT, HBAR, K_B};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringQuery {
    pub medium: FluidMedium,
    /// Incident angular frequency, rad/s.
    pub omega: f64,
    /// Scattering angle, rad.
    pub theta: f64,
    /// Dot product of the incident and scattered polarization vectors.
    pub pol_dot: f64,
    /// Scattering volume, m^3.
    pub scat_volume: f64,
}

impl ScatteringQuery {
    pub fn validate(&self) -> Result<()> {
        self.medium.validate()?;
        check_omega(self.omega)?;
        check_theta(self.theta)?;
        if !(-1.0..=1.0).contains(&self.pol_dot) {
            return Err(Error::invalid(
                "pol_dot",
                format!("must lie in [-1, 1], got {}", self.pol_dot),
            ));
        }
        if !(self.scat_volume > 0.0 && self.scat_volume.is_finite()) {
            return Err(Error::invalid(
                "scat_volume",
                format!("must be > 0, got {}", self.scat_volume),
            ));
        }
        Ok(())
    }
}

/// How a wavelength is turned into an angular frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaConvention {
    /// `omega = 2 pi c / lambda`, lambda measured in vacuum.
    #[default]
    Vacuum,
    /// `omega = 2 pi c eta / lambda`, lambda measured inside the fluid.
    InMedium,
}

/// Angular frequency for a wavelength under the given convention.
pub fn omega_from_wavelength(medium: &FluidMedium, wavelength: f64, convention: OmegaConvention) -> Result<f64> {
    if !(wavelength > 0.0 && wavelength.is_finite()) {
        return Err(Error::invalid("wavelength", format!("must be > 0, got {wavelength}")));
    }
    let vacuum = 2.0 * PI * C_LIGHT / wavelength;
    Ok(match convention {
        OmegaConvention::Vacuum => vacuum,
        OmegaConvention::InMedium => vacuum * medium.eta,
    })
}

fn check_omega(omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("omega", format!("must be > 0, got {omega}")))
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if (0.0..=PI).contains(&theta) {
        Ok(())
    } else {
        Err(Error::invalid("theta", format!("must lie in [0, pi], got {theta}")))
    }
}

/// `sqrt(2 (1 - cos theta))`, i.e. `2 sin(theta / 2)`.
fn angular_factor(theta: f64) -> f64 {
    2.0 * (0.5 * theta).sin()
}

/// Differential cross section (m^2/sr) for scattering off zero-point
/// density fluctuations.
///
/// Valid when the photon frequency is far above the phonon frequencies
/// involved; that is not checked.
pub fn cross_section_zp(q: &ScatteringQuery) -> Result<f64> {
    q.validate()?;
    let m = &q.medium;
    Ok(
        angular_factor(q.theta) * HBAR * q.omega.powi(5) * q.scat_volume * m.eta.powi(4)
            / (32.0 * PI * PI * C_LIGHT.powi(5) * m.c_sound * m.rho0)
            * q.pol_dot
            * q.pol_dot,
    )
}

/// Ratio of zero-point to thermal Brillouin scattering.
pub fn ratio_zp_thermal(medium: &FluidMedium, omega: f64, theta: f64) -> Result<f64> {
    medium.validate()?;
    check_omega(omega)?;
    check_theta(theta)?;
    if medium.temperature == 0.0 {
        return Err(Error::ZeroTemperature);
    }
    Ok(angular_factor(theta)
        * (HBAR * omega / (2.0 * K_B * medium.temperature))
        * (medium.c_sound / C_LIGHT)
        * medium.eta.powi(4)
        / medium.depsilon.powi(2))
}
