//! Boundary-free phonon field.
//!
//! The density correlator of a linear-dispersion fluid,
//!
//! ```text
//! <rho(x,t) rho(x',t')> = hbar rho0 / (16 pi^3 c_s^2) * int d^3q  Omega_q exp(i(q.dx - Omega_q dt))
//!                       = -hbar rho0 / (2 pi^2 c_s) * (dx^2 + 3 c_s^2 dt^2) / (dx^2 - c_s^2 dt^2)^3,
//! ```
//!
//! is available both in closed form and as a regulated mode integral. The
//! mode integral is the oracle for the closed form: the angular part is done
//! analytically and the remaining radial integral is evaluated numerically
//! with an `exp(-eps Omega_q)` regulator that is then extrapolated away.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::media::{FluidMedium, HBAR};
use crate::numerics::{integrate, iterated_mean, richardson_even, NeumaierSum, QuadOptions};

/// Relative width of the band around the sound cone inside which the
/// correlator is treated as singular.
pub const SOUND_CONE_GUARD: f64 = 1e-12;

/// Spacetime interval between two events in the fluid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Separation {
    /// Spatial displacement, m.
    pub dx: [f64; 3],
    /// Time difference, s.
    pub dt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeparationKind {
    Spacelike,
    Soundlike,
    Timelike,
}

impl Separation {
    pub fn new(dx: [f64; 3], dt: f64) -> Result<Self> {
        if dx.iter().chain(std::iter::once(&dt)).any(|v| !v.is_finite()) {
            return Err(Error::invalid("separation", "components must be finite"));
        }
        Ok(Separation { dx, dt })
    }

    /// Equal-time separation along x.
    pub fn spatial(distance: f64) -> Self {
        Separation {
            dx: [distance, 0.0, 0.0],
            dt: 0.0,
        }
    }

    pub fn distance(&self) -> f64 {
        let [x, y, z] = self.dx;
        (x * x + y * y + z * z).sqrt()
    }

    /// Classifies against the sound cone `|dx| = c |dt|`.
    pub fn kind(&self, c_sound: f64) -> SeparationKind {
        let r = self.distance();
        let ct = c_sound * self.dt.abs();
        let scale = r.max(ct);
        if scale == 0.0 || (r - ct).abs() <= SOUND_CONE_GUARD * scale {
            SeparationKind::Soundlike
        } else if r > ct {
            SeparationKind::Spacelike
        } else {
            SeparationKind::Timelike
        }
    }
}

/// A single plane-wave mode in a quantization box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpec {
    /// Wave vector, 1/m.
    pub q: [f64; 3],
    /// Quantization volume, m^3.
    pub volume: f64,
}

impl ModeSpec {
    pub fn new(q: [f64; 3], volume: f64) -> Result<Self> {
        if !(volume.is_finite() && volume > 0.0) {
            return Err(Error::invalid("volume", format!("must be > 0, got {volume}")));
        }
        if q.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("q", "components must be finite"));
        }
        Ok(ModeSpec { q, volume })
    }

    pub fn q_mag(&self) -> f64 {
        let [x, y, z] = self.q;
        (x * x + y * y + z * z).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrelationMethod {
    ClosedForm,
    ModeIntegral,
}

/// A value of the density correlator in kg^2 m^-6.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationValue {
    pub value: f64,
    pub method: CorrelationMethod,
    pub abs_error: f64,
}

/// Phonon angular frequency `c_s |q|`.
pub fn dispersion(medium: &FluidMedium, q_mag: f64) -> Result<f64> {
    if !(q_mag >= 0.0) || !q_mag.is_finite() {
        return Err(Error::invalid("q_mag", format!("must be finite and >= 0, got {q_mag}")));
    }
    Ok(medium.c_sound * q_mag)
}

/// Mode-function amplitude `sqrt(hbar Omega_q rho0 / (2 V c_s^2))`, fixed by
/// a zero-point energy of `hbar Omega_q / 2` per mode.
pub fn mode_norm(medium: &FluidMedium, spec: &ModeSpec) -> Result<f64> {
    let omega = dispersion(medium, spec.q_mag())?;
    Ok((HBAR * omega * medium.rho0 / (2.0 * spec.volume * medium.c_sound.powi(2))).sqrt())
}

/// Closed-form density correlator.
pub fn corr_closed(medium: &FluidMedium, sep: &Separation) -> Result<CorrelationValue> {
    let c = medium.c_sound;
    if sep.kind(c) == SeparationKind::Soundlike {
        return Err(Error::SoundConeSingularity);
    }
    let r2 = sep.distance().powi(2);
    let ct2 = (c * sep.dt).powi(2);
    let value = -HBAR * medium.rho0 / (2.0 * PI * PI * c) * (r2 + 3.0 * ct2) / (r2 - ct2).powi(3);
    Ok(CorrelationValue {
        value,
        method: CorrelationMethod::ClosedForm,
        abs_error: 0.0,
    })
}

/// Settings for [`corr_mode_integral`].
#[derive(Debug, Clone, Copy)]
pub struct ModeIntegralOptions {
    /// Coarsest regulator, s. `None` sets `c_s eps` to a quarter of
    /// `| |dx| - c_s |dt| |`, inside the radius of convergence of the
    /// expansion in `eps`.
    pub epsilon: Option<f64>,
    /// Number of regulator values; each halves the previous one. At least 3.
    pub rungs: usize,
    /// Relative tolerance the extrapolated value must meet.
    pub rel_tol: f64,
}

impl Default for ModeIntegralOptions {
    fn default() -> Self {
        ModeIntegralOptions {
            epsilon: None,
            rungs: 5,
            rel_tol: 1e-6,
        }
    }
}

/// Regulated mode-integral evaluation of the density correlator.
///
/// After the angular integration the correlator is
/// `hbar rho0 / (4 pi^2 c_s L^4) * J` with
/// `J = int_0^inf u^3 sinc(u r/L) cos(u c dt / L) exp(-u c eps / L) du`
/// and `L = max(|dx|, c |dt|)`. `J` is computed for a geometric ladder of
/// regulators and extrapolated to zero in powers of `eps^2`.
pub fn corr_mode_integral(
    medium: &FluidMedium,
    sep: &Separation,
    opts: &ModeIntegralOptions,
) -> Result<CorrelationValue> {
    let c = medium.c_sound;
    if sep.kind(c) == SeparationKind::Soundlike {
        return Err(Error::SoundConeSingularity);
    }
    if opts.rungs < 3 {
        return Err(Error::invalid("rungs", "at least 3 regulator values are required"));
    }
    let r = sep.distance();
    let ct = c * sep.dt.abs();
    let length = r.max(ct);
    let rho = r / length;
    let tau = ct / length;
    let e0 = match opts.epsilon {
        Some(eps) if eps > 0.0 && eps.is_finite() => c * eps / length,
        Some(eps) => return Err(Error::invalid("epsilon", format!("must be > 0, got {eps}"))),
        None => 0.25 * (rho - tau).abs(),
    };

    let mut regulators = Vec::with_capacity(opts.rungs);
    let mut values = Vec::with_capacity(opts.rungs);
    let mut quad_error: f64 = 0.0;
    for k in 0..opts.rungs {
        let e = e0 / f64::powi(2.0, k as i32);
        let radial = radial_integral(rho, tau, e);
        regulators.push(e);
        values.push(radial.value);
        quad_error = quad_error.max(radial.abs_error);
    }
    let extrap = richardson_even(&regulators, &values);

    let prefactor = HBAR * medium.rho0 / (4.0 * PI * PI * c * length.powi(4));
    let value = prefactor * extrap.value;
    let abs_error = prefactor * (extrap.residual + quad_error);
    if !(abs_error <= opts.rel_tol * value.abs()) {
        return Err(Error::ToleranceUnreachable {
            requested: opts.rel_tol,
            estimate: value,
            abs_error,
        });
    }
    Ok(CorrelationValue {
        value,
        method: CorrelationMethod::ModeIntegral,
        abs_error,
    })
}

/// Radial integral `J` for dimensionless (rho, tau, e).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Radial {
    pub value: f64,
    pub abs_error: f64,
}

pub(crate) fn radial_integral(rho: f64, tau: f64, e: f64) -> Radial {
    if rho > 0.0 {
        // u^3 sinc(u rho) cos(u tau) = u^2 [sin(u(rho+tau)) + sin(u(rho-tau))] / (2 rho)
        let a = sine_moment(rho + tau, e);
        let b = sine_moment(rho - tau, e);
        Radial {
            value: (a.value + b.value) / (2.0 * rho),
            abs_error: (a.abs_error + b.abs_error) / (2.0 * rho),
        }
    } else {
        cosine_moment(tau, e)
    }
}

/// `int_0^inf u^2 sin(w u) exp(-e u) du`.
fn sine_moment(w: f64, e: f64) -> Radial {
    if w == 0.0 {
        return Radial {
            value: 0.0,
            abs_error: 0.0,
        };
    }
    let sign = w.signum();
    let w = w.abs();
    let r = panel_sum(|u| u * u * (w * u).sin() * (-e * u).exp(), 0.0, PI / w, 2.0, e);
    Radial {
        value: sign * r.value,
        abs_error: r.abs_error,
    }
}

/// `int_0^inf u^3 cos(w u) exp(-e u) du`.
fn cosine_moment(w: f64, e: f64) -> Radial {
    let f = |u: f64| u * u * u * (w * u).cos() * (-e * u).exp();
    let first = integrate(f, 0.0, 0.5 * PI / w, QuadOptions::rel(1e-14));
    let rest = panel_sum(f, 0.5 * PI / w, PI / w, 3.0, e);
    Radial {
        value: first.value + rest.value,
        abs_error: first.abs_error + rest.abs_error,
    }
}

/// Sums `f` over consecutive panels `[start + k h, start + (k+1) h]` whose
/// ends are zeros of the oscillating factor, accelerating the partial sums
/// by iterated averaging once the `u^degree exp(-e u)` envelope is
/// past its maximum.
fn panel_sum<F: Fn(f64) -> f64>(f: F, start: f64, h: f64, degree: f64, e: f64) -> Radial {
    const WINDOW: usize = 24;
    const EXP_CUTOFF: f64 = 60.0;
    let decay_start = (degree + 2.0) / e;
    let mut sum = NeumaierSum::new();
    let mut quad_error = 0.0;
    let mut partials: Vec<f64> = Vec::new();
    let mut scale: f64 = 0.0;
    let mut stable = 0;
    let mut last_estimate = f64::NAN;
    let mut k = 0usize;
    loop {
        // Both ends from the index, so adjacent panels share an endpoint exactly.
        let a = start + k as f64 * h;
        let b = start + (k + 1) as f64 * h;
        let panel = integrate(&f, a, b, QuadOptions::rel(1e-14));
        sum.add(panel.value);
        quad_error += panel.abs_error;
        let s = sum.value();
        scale = scale.max(s.abs()).max(panel.value.abs());
        partials.push(s);
        k += 1;

        if e * b > EXP_CUTOFF {
            // Remaining tail is below exp(-60) times a polynomial factor.
            return Radial {
                value: s,
                abs_error: quad_error + f64::EPSILON * scale,
            };
        }
        if a > decay_start && partials.len() >= WINDOW {
            let window = &partials[partials.len() - WINDOW..];
            let est = iterated_mean(window);
            let tol = 1e-15 * scale;
            if est.residual <= tol && (est.value - last_estimate).abs() <= tol {
                stable += 1;
                if stable >= 3 {
                    return Radial {
                        value: est.value,
                        abs_error: quad_error + est.residual + f64::EPSILON * scale,
                    };
                }
            } else {
                stable = 0;
            }
            last_estimate = est.value;
        }
    }
}

/// Maps a relativistic `<phi_dot phi_dot>` value onto the density correlator
/// by dividing out `rho0`. Evaluating the scalar correlator at the speed of
/// sound is the caller's job.
pub fn scalar_analogy(phi_dot_corr: f64, medium: &FluidMedium) -> CorrelationValue {
    CorrelationValue {
        value: phi_dot_corr / medium.rho0,
        method: CorrelationMethod::ClosedForm,
        abs_error: 0.0,
    }
}

/// Massless scalar field with Wightman function `w / (r^2 - c^2 dt^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MasslessScalar {
    /// Amplitude `w` of the Wightman function.
    pub amplitude: f64,
    /// Propagation speed, m/s.
    pub speed: f64,
}

impl MasslessScalar {
    /// Scalar whose `<phi_dot phi_dot>` equals `rho0 <rho rho>` for this
    /// medium: propagation at the speed of sound with
    /// `w = hbar rho0^2 / (4 pi^2 c_s^3)`.
    pub fn sound_analog(medium: &FluidMedium) -> Self {
        MasslessScalar {
            amplitude: HBAR * medium.rho0.powi(2) / (4.0 * PI * PI * medium.c_sound.powi(3)),
            speed: medium.c_sound,
        }
    }

    pub fn wightman(&self, r: f64, dt: f64) -> f64 {
        self.amplitude / (r * r - (self.speed * dt).powi(2))
    }

    /// `<phi_dot(x,t) phi_dot(x',t')>`, i.e. minus the second time derivative
    /// of the Wightman function.
    pub fn phi_dot_corr(&self, sep: &Separation) -> f64 {
        let r2 = sep.distance().powi(2);
        let c2 = self.speed * self.speed;
        let ct2 = c2 * sep.dt * sep.dt;
        -2.0 * self.amplitude * c2 * (r2 + 3.0 * ct2) / (r2 - ct2).powi(3)
    }
}
