//! Physical constants and fluid media.
//!
//! All quantities are SI. The constants are the exact or recommended
//! CODATA-2018 values and are not configurable; media are plain data and
//! can be loaded from a JSON config on top of the built-in registry.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fundamental constants used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J s.
    pub hbar: f64,
    /// Boltzmann constant, J/K.
    pub k_b: f64,
    /// Speed of light in vacuum, m/s.
    pub c_light: f64,
}

/// CODATA-2018 values.
pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    hbar: 1.054_571_817e-34,
    k_b: 1.380_649e-23,
    c_light: 2.997_924_58e8,
};

pub const HBAR: f64 = CODATA_2018.hbar;
pub const K_B: f64 = CODATA_2018.k_b;
pub const C_LIGHT: f64 = CODATA_2018.c_light;

/// |depsilon| above this is physically implausible and draws a warning.
pub const DEPSILON_WARN: f64 = 10.0;

/// A fluid with a linear phonon dispersion relation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluidMedium {
    /// Mean mass density, kg/m^3.
    pub rho0: f64,
    /// Speed of sound, m/s.
    pub c_sound: f64,
    /// Mean refractive index.
    pub eta: f64,
    /// The dimensionless combination rho0 (d epsilon / d rho0) at constant entropy.
    pub depsilon: f64,
    /// Temperature, K.
    pub temperature: f64,
}

impl FluidMedium {
    /// Builds a medium, checking every field.
    pub fn new(rho0: f64, c_sound: f64, eta: f64, depsilon: f64, temperature: f64) -> Result<Self> {
        let medium = FluidMedium {
            rho0,
            c_sound,
            eta,
            depsilon,
            temperature,
        };
        medium.validate()?;
        Ok(medium)
    }

    /// Water at room temperature.
    pub fn water_293k() -> Self {
        FluidMedium {
            rho0: 998.0,
            c_sound: 1480.0,
            eta: 1.4,
            depsilon: 0.79,
            temperature: 293.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho0.is_finite() && self.rho0 > 0.0) {
            return Err(Error::invalid("rho0", format!("must be > 0, got {}", self.rho0)));
        }
        if !(self.c_sound.is_finite() && self.c_sound > 0.0 && self.c_sound < C_LIGHT) {
            return Err(Error::invalid(
                "c_sound",
                format!("must lie in (0, c_light), got {}", self.c_sound),
            ));
        }
        if !(self.eta.is_finite() && self.eta >= 1.0) {
            return Err(Error::invalid("eta", format!("must be >= 1, got {}", self.eta)));
        }
        if !self.depsilon.is_finite() {
            return Err(Error::invalid("depsilon", "must be finite"));
        }
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return Err(Error::invalid(
                "temperature",
                format!("must be >= 0, got {}", self.temperature),
            ));
        }
        Ok(())
    }

    /// Non-fatal plausibility warnings.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.depsilon.abs() > DEPSILON_WARN {
            out.push(format!(
                "depsilon = {} is physically implausible (|depsilon| > {DEPSILON_WARN})",
                self.depsilon
            ));
        }
        out
    }
}

/// Name of the built-in water entry.
pub const WATER_293K: &str = "water_293K";

/// Named collection of media: the immutable built-ins plus user entries.
#[derive(Debug, Clone, PartialEq)]
pub struct MediumRegistry {
    builtin: BTreeMap<String, FluidMedium>,
    user: BTreeMap<String, FluidMedium>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MediaFile {
    #[serde(default)]
    media: BTreeMap<String, FluidMedium>,
}

impl Default for MediumRegistry {
    fn default() -> Self {
        Self::new()
    }
}

impl MediumRegistry {
    /// Registry holding only the built-in entries.
    pub fn new() -> Self {
        let mut builtin = BTreeMap::new();
        builtin.insert(WATER_293K.to_string(), FluidMedium::water_293k());
        MediumRegistry {
            builtin,
            user: BTreeMap::new(),
        }
    }

    pub fn get(&self, name: &str) -> Option<&FluidMedium> {
        self.builtin.get(name).or_else(|| self.user.get(name))
    }

    pub fn require(&self, name: &str) -> Result<&FluidMedium> {
        self.get(name).ok_or_else(|| Error::UnknownMedium(name.to_string()))
    }

    pub fn is_builtin(&self, name: &str) -> bool {
        self.builtin.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.builtin.len() + self.user.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All entries in name order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &FluidMedium)> {
        let mut all: Vec<_> = self
            .builtin
            .iter()
            .chain(self.user.iter())
            .map(|(k, v)| (k.as_str(), v))
            .collect();
        all.sort_by(|a, b| a.0.cmp(b.0));
        all.into_iter()
    }

    /// Adds a user entry. Names may not collide with any existing entry.
    pub fn insert(&mut self, name: &str, medium: FluidMedium) -> Result<()> {
        if self.get(name).is_some() {
            return Err(Error::DuplicateMedium(name.to_string()));
        }
        medium
            .validate()
            .map_err(|e| Error::Config(format!("medium `{name}`: {e}")))?;
        self.user.insert(name.to_string(), medium);
        Ok(())
    }

    /// Parses a config document and adds its entries to the built-ins.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: MediaFile =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("malformed media file: {e}")))?;
        let mut registry = MediumRegistry::new();
        for (name, medium) in file.media {
            registry.insert(&name, medium)?;
        }
        Ok(registry)
    }

    /// Serializes the user entries in the config file schema.
    pub fn to_json_string(&self) -> String {
        let file = MediaFile {
            media: self.user.clone(),
        };
        serde_json::to_string_pretty(&file).expect("media serialize")
    }
}

/// Reads a media config file.
pub fn load_media_config(path: impl AsRef<Path>) -> Result<MediumRegistry> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    MediumRegistry::from_json_str(&text)
}
