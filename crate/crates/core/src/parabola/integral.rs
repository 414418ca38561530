//! The geometric-optics integral over incoming angles.
//!
//! Ray pairs exist only on a few intervals of `theta`, all inside
//! `|sin theta| <= 2a/b`. An interval ends either where a reflection angle
//! leaves the aperture (an edge, where `dl` stays finite) or where the two
//! reflection angles merge (a fold). Near a fold `dl` vanishes like the cube
//! of the distance between the roots, so `dl^-4` is not integrable there;
//! fold ends are pulled in by `margin_frac` of the interval width.

use std::f64::consts::PI;

use serde::Serialize;

use super::trace::{Tracer, DEFAULT_THETA_PRIME_GRID};
use super::{FieldPoint, MirrorSpec};
use crate::boundaries::boundary_prefactor;
use crate::error::{Error, Result};
use crate::media::FluidMedium;
use crate::numerics::{integrate, NeumaierSum, QuadOptions};
use crate::variance::{DensityVariance, VarianceMethod};

/// Default `kappa = 4 / (5 pi^3)`.
pub const DEFAULT_KAPPA: f64 = 4.0 / (5.0 * PI * PI * PI);
/// Bracketing window for incoming angles, in units of `a/b`.
const THETA_GUARD: f64 = 4.0;
/// Bisection stops once an event is located to this many ulps of the window.
const EVENT_REL_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FocusOptions {
    /// Overall prefactor of the interference integral.
    pub kappa: f64,
    /// Relative tolerance of the angular quadrature.
    pub quad_tol: f64,
    /// Fraction of an interval's width removed at each fold end.
    pub margin_frac: f64,
    /// Grid points used to locate the admissible intervals.
    pub theta_grid: usize,
    /// Grid points used to bracket critical points of the miss function.
    pub theta_prime_grid: usize,
    /// Also evaluate the integral with twice the margin.
    pub sensitivity: bool,
}

impl Default for FocusOptions {
    fn default() -> Self {
        FocusOptions {
            kappa: DEFAULT_KAPPA,
            quad_tol: 1e-8,
            margin_frac: 0.01,
            theta_grid: 2000,
            theta_prime_grid: DEFAULT_THETA_PRIME_GRID,
            sensitivity: true,
        }
    }
}

impl FocusOptions {
    fn validate(&self) -> Result<()> {
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return Err(Error::invalid("kappa", format!("must be positive, got {}", self.kappa)));
        }
        if !(self.quad_tol > 0.0) {
            return Err(Error::invalid(
                "quad_tol",
                format!("must be positive, got {}", self.quad_tol),
            ));
        }
        if !(self.margin_frac > 0.0 && self.margin_frac < 0.25) {
            return Err(Error::invalid(
                "margin_frac",
                format!("must lie in (0, 0.25), got {}", self.margin_frac),
            ));
        }
        if self.theta_grid < 16 || self.theta_prime_grid < 16 {
            return Err(Error::invalid("theta_grid", "grids need at least 16 points"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EndKind {
    /// A reflection angle reaches the rim of the mirror.
    Edge,
    /// The two reflection angles merge.
    Fold,
}

/// A maximal interval of incoming angles with at least two rays through `P`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdmissibleInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_kind: EndKind,
    pub hi_kind: EndKind,
}

impl AdmissibleInterval {
    /// Integration limits after pulling fold ends in by `margin_frac` of the width.
    pub fn cut(&self, margin_frac: f64) -> (f64, f64) {
        let w = self.hi - self.lo;
        let lo = if self.lo_kind == EndKind::Fold {
            self.lo + margin_frac * w
        } else {
            self.lo
        };
        let hi = if self.hi_kind == EndKind::Fold {
            self.hi - margin_frac * w
        } else {
            self.hi
        };
        (lo, hi)
    }
}

struct EventFinder<'t> {
    tracer: &'t Tracer,
    tol: f64,
}

impl EventFinder<'_> {
    fn count(&self, theta: f64) -> usize {
        self.tracer.trace(theta).roots.len()
    }

    /// Pushes every change of root count in `(lo, hi)` onto `out`, in order.
    fn bisect(&self, lo: f64, clo: usize, hi: f64, chi: usize, out: &mut Vec<(f64, f64)>) {
        if clo == chi {
            return;
        }
        if hi - lo <= self.tol {
            out.push((lo, hi));
            return;
        }
        let mid = 0.5 * (lo + hi);
        let cm = self.count(mid);
        self.bisect(lo, clo, mid, cm, out);
        self.bisect(mid, cm, hi, chi, out);
    }

    /// An edge event changes the sign of the miss function at a rim.
    fn kind(&self, lo: f64, hi: f64) -> EndKind {
        let a = self.tracer.aperture();
        let flips = |t: f64| self.tracer.miss(lo, t).signum() != self.tracer.miss(hi, t).signum();
        if flips(a) || flips(-a) {
            EndKind::Edge
        } else {
            EndKind::Fold
        }
    }
}

/// Intervals of incoming angle on which at least two reflected rays reach `P`.
pub fn admissible_intervals(m: &MirrorSpec, p: &FieldPoint, opts: &FocusOptions) -> Result<Vec<AdmissibleInterval>> {
    opts.validate()?;
    p.check_against(m)?;
    let tracer = Tracer::new(m, p, opts.theta_prime_grid);
    Ok(intervals_for(&tracer, m, p, opts))
}

fn intervals_for(tracer: &Tracer, m: &MirrorSpec, p: &FieldPoint, opts: &FocusOptions) -> Vec<AdmissibleInterval> {
    let window = (THETA_GUARD * p.a / m.b).min(0.5 * PI);
    let finder = EventFinder {
        tracer,
        tol: EVENT_REL_TOL * window,
    };
    let n = opts.theta_grid;
    let at = |i: usize| -window + 2.0 * window * i as f64 / n as f64;
    let mut events = Vec::new();
    let mut prev = (at(0), finder.count(at(0)));
    for i in 1..=n {
        let x = if i == n { window } else { at(i) };
        let c = finder.count(x);
        finder.bisect(prev.0, prev.1, x, c, &mut events);
        prev = (x, c);
    }

    let mut out = Vec::new();
    let mut bounds: Vec<(f64, EndKind)> = vec![(-window, EndKind::Edge)];
    for &(lo, hi) in &events {
        bounds.push((0.5 * (lo + hi), finder.kind(lo, hi)));
    }
    bounds.push((window, EndKind::Edge));
    for w in bounds.windows(2) {
        let ((lo, lo_kind), (hi, hi_kind)) = (w[0], w[1]);
        if hi > lo && finder.count(0.5 * (lo + hi)) >= 2 {
            out.push(AdmissibleInterval {
                lo,
                hi,
                lo_kind,
                hi_kind,
            });
        }
    }
    out
}

/// `sum over pairs of dl^-4` at incoming angle `theta`, m^-4, and the
/// number of rays found.
pub fn pair_integrand(m: &MirrorSpec, p: &FieldPoint, theta: f64) -> (f64, usize) {
    Tracer::new(m, p, DEFAULT_THETA_PRIME_GRID).pair_sum(theta)
}

/// The interference integral and its diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NearFocus {
    /// `int dtheta sum_pairs dl^-4`, m^-4.
    pub integral: f64,
    pub abs_error: f64,
    pub intervals: Vec<AdmissibleInterval>,
    /// Integrand evaluations inside an admissible interval that found fewer
    /// than two rays.
    pub n_ray_failures: u64,
    /// Integral with twice the margin divided by the integral, when requested.
    pub margin_ratio: Option<f64>,
    pub converged: bool,
}

fn integrate_intervals(
    tracer: &Tracer,
    intervals: &[AdmissibleInterval],
    margin: f64,
    tol: f64,
) -> (f64, f64, u64, bool) {
    let mut total = NeumaierSum::new();
    let mut err = 0.0;
    let mut failures = 0u64;
    let mut converged = true;
    for iv in intervals {
        let (lo, hi) = iv.cut(margin);
        let r = integrate(
            |theta| {
                let (v, n) = tracer.pair_sum(theta);
                if n < 2 {
                    failures += 1;
                }
                v
            },
            lo,
            hi,
            QuadOptions::rel(tol),
        );
        total.add(r.value);
        err += r.abs_error;
        converged &= r.converged;
    }
    (total.value(), err, failures, converged)
}

/// Evaluates the interference integral for mirror `m` and field point `p`.
pub fn near_focus_integral(m: &MirrorSpec, p: &FieldPoint, opts: &FocusOptions) -> Result<NearFocus> {
    opts.validate()?;
    p.check_against(m)?;
    let tracer = Tracer::new(m, p, opts.theta_prime_grid);
    let intervals = intervals_for(&tracer, m, p, opts);
    if intervals.is_empty() {
        return Err(Error::EmptyAdmissibleSet);
    }
    let (integral, abs_error, n_ray_failures, converged) =
        integrate_intervals(&tracer, &intervals, opts.margin_frac, opts.quad_tol);
    let margin_ratio = opts.sensitivity.then(|| {
        let (wide, ..) = integrate_intervals(&tracer, &intervals, 2.0 * opts.margin_frac, opts.quad_tol);
        wide / integral
    });
    Ok(NearFocus {
        integral,
        abs_error,
        intervals,
        n_ray_failures,
        margin_ratio,
        converged,
    })
}

/// `-(kappa / 2) hbar rho0 c_s I` near the focus.
///
/// Fails when no incoming angle yields a ray pair or when the quadrature
/// misses `quad_tol`.
pub fn variance_near_focus(
    medium: &FluidMedium,
    m: &MirrorSpec,
    p: &FieldPoint,
    opts: &FocusOptions,
) -> Result<DensityVariance> {
    variance_near_focus_detailed(medium, m, p, opts).map(|(v, _)| v)
}

/// [`variance_near_focus`] together with the diagnostics of the integral.
pub fn variance_near_focus_detailed(
    medium: &FluidMedium,
    m: &MirrorSpec,
    p: &FieldPoint,
    opts: &FocusOptions,
) -> Result<(DensityVariance, NearFocus)> {
    let warning = p.check_against(m)?;
    let nf = near_focus_integral(m, p, opts)?;
    let scale = 0.5 * opts.kappa * boundary_prefactor(medium);
    let value = -scale * nf.integral;
    let abs_error = scale * nf.abs_error;
    if !nf.converged || !(abs_error <= opts.quad_tol * value.abs()) {
        return Err(Error::ToleranceUnreachable {
            requested: opts.quad_tol,
            estimate: value,
            abs_error,
        });
    }
    let mut out = DensityVariance::with_error(value, VarianceMethod::GeometricOptics, abs_error).note(format!(
        "fold ends cut back by {} of each interval width",
        opts.margin_frac
    ));
    if let Some(r) = nf.margin_ratio {
        out = out.note(format!("doubling the fold margin scales the value by {r:.6e}"));
    }
    if nf.n_ray_failures > 0 {
        out = out.note(format!(
            "{} integrand evaluations found fewer than two rays",
            nf.n_ray_failures
        ));
    }
    if let Some(w) = warning {
        out = out.note(w);
    }
    Ok((out, nf))
}
