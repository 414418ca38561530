//! Signed mean squared density fluctuation with provenance.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceMethod {
    /// The closed-form expression exactly as published.
    ClosedFormAsPrinted,
    /// A closed form corrected against the image-sum oracle.
    ClosedFormCorrected,
    /// Direct sum over images of the field point.
    ImageSum,
    /// Geometric-optics interference integral near a mirror focus.
    GeometricOptics,
}

/// Boundary-induced change of the mean squared density fluctuation.
///
/// Values carry the prefactor `hbar rho0 c_s` used by the boundary
/// formulas, so their unit is kg^2 m^-4 s^-2; divide by `c_s^2` for the
/// normalization of the free-field correlator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityVariance {
    pub value: f64,
    pub method: VarianceMethod,
    pub abs_error: f64,
    pub notes: Vec<String>,
}

impl DensityVariance {
    pub fn exact(value: f64, method: VarianceMethod) -> Self {
        DensityVariance {
            value,
            method,
            abs_error: 0.0,
            notes: Vec::new(),
        }
    }

    pub fn with_error(value: f64, method: VarianceMethod, abs_error: f64) -> Self {
        DensityVariance {
            value,
            method,
            abs_error,
            notes: Vec::new(),
        }
    }

    pub fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }
}
