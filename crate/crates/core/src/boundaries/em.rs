//! Reference asymptotics of the mean squared electromagnetic fields near a
//! single interface, for comparison with the phonon results.
//!
//! Values are in Lorentz-Heaviside units with `hbar = c = 1`: lengths in
//! metres, field squares in m^-4. The plasma frequency enters through its
//! wavenumber `k_p = omega_p / c`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::media::C_LIGHT;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum InterfaceModel {
    /// Perfectly conducting plane.
    Perfect,
    /// Plasma-model dielectric with plasma angular frequency `omega_p` (rad/s).
    Plasma { omega_p: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldSquares {
    pub e2: f64,
    pub b2: f64,
}

/// Leading behaviour of `<E^2>` and `<B^2>` at distance `z` from the interface.
pub fn em_interface_asymptotics(z: f64, model: InterfaceModel) -> Result<FieldSquares> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::invalid("z", format!("must be positive and finite, got {z}")));
    }
    match model {
        InterfaceModel::Perfect => {
            let e2 = 3.0 / (16.0 * PI * PI * z.powi(4));
            Ok(FieldSquares { e2, b2: -e2 })
        }
        InterfaceModel::Plasma { omega_p } => {
            if !(omega_p > 0.0 && omega_p.is_finite()) {
                return Err(Error::invalid(
                    "omega_p",
                    format!("must be positive and finite, got {omega_p}"),
                ));
            }
            let k_p = omega_p / C_LIGHT;
            Ok(FieldSquares {
                e2: 2f64.sqrt() * k_p / (32.0 * PI * z.powi(3)),
                b2: -5.0 * k_p * k_p / (96.0 * PI * z * z),
            })
        }
    }
}
