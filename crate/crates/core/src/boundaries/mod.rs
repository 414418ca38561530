//! Boundary-induced change of the mean squared density fluctuation.
//!
//! An impenetrable wall imposes Neumann conditions on the density
//! perturbation. Where the geometry is generated by a discrete group of
//! isometries, the renormalized two-point function is the free correlator
//! summed over the images of the field point, each with sign +1, and at
//! equal times
//!
//! ```text
//! <rho^2>_R = -(hbar rho0 c_s / 2 pi^2) sum_images d_i^-4
//! ```
//!
//! [`variance_closed`] evaluates the published closed forms and
//! [`variance_image_sum`] evaluates the image sum directly.
//! [`discrepancy_report`] compares the two along a parameter sweep.

mod em;
mod images;
mod lattice;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::media::{FluidMedium, C_LIGHT, HBAR};
use crate::variance::{DensityVariance, VarianceMethod};

pub use em::{em_interface_asymptotics, FieldSquares, InterfaceModel};
pub use images::{Image, ImageFamily, ImageGenerator, ImageSet, InverseFourthSum, ShellSum};
pub use lattice::{epstein_inverse_fourth, LatticeSum};

/// Relative tolerance used for the Ewald evaluation of the periodic box.
pub const TORUS_REL_TOL: f64 = 1e-10;
/// Relative slack when deciding whether an angle is `pi/n` or `2 pi/n`.
const ANGLE_MATCH: f64 = 1e-12;
/// Points in the sweep that decides between constant-factor and disagreement.
const SWEEP_POINTS: usize = 10;

/// A boundary configuration and the field point inside it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Geometry {
    /// One plane; `z` is the distance to it.
    HalfSpace { z: f64 },
    /// Two parallel planes a distance `a` apart; `z` is the distance to one of them.
    ParallelSlab { a: f64, z: f64 },
    /// Periodic box with periods `l`.
    Torus3 { l: [f64; 3] },
    /// Two planes meeting at opening angle `alpha`; the field point sits at
    /// polar coordinates `(r, theta)` measured from one face.
    Wedge { alpha: f64, r: f64, theta: f64 },
    /// Cone of total angle `alpha`; `r` is the distance to the apex.
    ConicalSpace { alpha: f64, r: f64 },
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be positive and finite, got {v}")))
    }
}

impl Geometry {
    pub fn half_space(z: f64) -> Result<Self> {
        Geometry::HalfSpace { z }.validated()
    }

    pub fn slab(a: f64, z: f64) -> Result<Self> {
        Geometry::ParallelSlab { a, z }.validated()
    }

    pub fn torus(l: [f64; 3]) -> Result<Self> {
        Geometry::Torus3 { l }.validated()
    }

    pub fn wedge(alpha: f64, r: f64, theta: f64) -> Result<Self> {
        Geometry::Wedge { alpha, r, theta }.validated()
    }

    pub fn cone(alpha: f64, r: f64) -> Result<Self> {
        Geometry::ConicalSpace { alpha, r }.validated()
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Geometry::HalfSpace { z } => positive("z", z),
            Geometry::ParallelSlab { a, z } => {
                positive("a", a)?;
                positive("z", z)?;
                if z >= a {
                    return Err(Error::invalid(
                        "z",
                        format!("must lie strictly inside the gap (0, {a}), got {z}"),
                    ));
                }
                Ok(())
            }
            Geometry::Torus3 { l } => {
                for v in l {
                    positive("l", v)?;
                }
                Ok(())
            }
            Geometry::Wedge { alpha, r, theta } => {
                positive("r", r)?;
                if !(alpha > 0.0 && alpha < 2.0 * PI) {
                    return Err(Error::invalid("alpha", format!("must lie in (0, 2 pi), got {alpha}")));
                }
                if !(theta > 0.0 && theta < alpha) {
                    return Err(Error::invalid(
                        "theta",
                        format!("must lie in (0, alpha = {alpha}), got {theta}"),
                    ));
                }
                Ok(())
            }
            Geometry::ConicalSpace { alpha, r } => {
                positive("r", r)?;
                if !(alpha > 0.0 && alpha <= 2.0 * PI) {
                    return Err(Error::invalid("alpha", format!("must lie in (0, 2 pi], got {alpha}")));
                }
                Ok(())
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Geometry::HalfSpace { .. } => "half_space",
            Geometry::ParallelSlab { .. } => "parallel_slab",
            Geometry::Torus3 { .. } => "torus3",
            Geometry::Wedge { .. } => "wedge",
            Geometry::ConicalSpace { .. } => "conical_space",
        }
    }

    /// The image construction for this geometry, if the geometry admits one.
    pub fn image_set(&self) -> Result<ImageSet> {
        self.validate()?;
        match *self {
            Geometry::HalfSpace { z } => Ok(ImageSet::finite(
                ImageGenerator::Reflection,
                vec![Image::neumann(2.0 * z)],
            )),
            Geometry::ParallelSlab { a, z } => Ok(ImageSet::slab(a, z)),
            Geometry::Torus3 { l } => Ok(ImageSet::lattice(l)),
            Geometry::Wedge { alpha, r, theta } => {
                let n = integer_divisor(PI, alpha).ok_or_else(|| {
                    Error::NotImageAdmissible(format!(
                        "wedge needs alpha = pi/n for an integer n >= 1, got alpha = {alpha}"
                    ))
                })?;
                let alpha = PI / n as f64;
                // Dihedral group of order 2n: n - 1 rotations and n reflections.
                let mut images = Vec::with_capacity(2 * n - 1);
                for k in 1..n {
                    images.push(Image::neumann(2.0 * r * (PI * k as f64 / n as f64).sin()));
                }
                for j in 0..n {
                    images.push(Image::neumann(2.0 * r * (theta - j as f64 * alpha).sin().abs()));
                }
                Ok(ImageSet::finite(ImageGenerator::Reflection, images))
            }
            Geometry::ConicalSpace { alpha, r } => {
                let n = integer_divisor(2.0 * PI, alpha).ok_or_else(|| {
                    Error::NotImageAdmissible(format!(
                        "conical space needs alpha = 2 pi/n for an integer n >= 1, got alpha = {alpha}"
                    ))
                })?;
                let images = (1..n)
                    .map(|k| Image::neumann(2.0 * r * (PI * k as f64 / n as f64).sin()))
                    .collect();
                Ok(ImageSet::finite(ImageGenerator::Rotation, images))
            }
        }
    }

    /// The same geometry with its sweep parameter set to `value`.
    fn with_sweep_value(&self, value: f64) -> Geometry {
        match *self {
            Geometry::HalfSpace { .. } => Geometry::HalfSpace { z: value },
            Geometry::ParallelSlab { a, .. } => Geometry::ParallelSlab { a, z: value },
            Geometry::Torus3 { l } => Geometry::Torus3 { l },
            Geometry::Wedge { alpha, r, .. } => Geometry::Wedge { alpha, r, theta: value },
            Geometry::ConicalSpace { alpha, .. } => Geometry::ConicalSpace { alpha, r: value },
        }
    }

    /// Name and values of the parameter swept by [`discrepancy_report`].
    ///
    /// The periodic box has no field-point dependence, so its sweep is the
    /// single configured point.
    fn sweep(&self) -> (&'static str, Vec<f64>) {
        let ladder = |base: f64| (0..SWEEP_POINTS).map(|k| base * (1.0 + 0.25 * k as f64)).collect();
        match *self {
            Geometry::HalfSpace { z } => ("z", ladder(z)),
            Geometry::ParallelSlab { a, .. } => ("z", interior(a)),
            Geometry::Torus3 { l } => ("l1", vec![l[0]]),
            Geometry::Wedge { alpha, .. } => ("theta", interior(alpha)),
            Geometry::ConicalSpace { r, .. } => ("r", ladder(r)),
        }
    }
}

/// `SWEEP_POINTS` evenly spaced interior points of `(0, span)`.
fn interior(span: f64) -> Vec<f64> {
    (1..=SWEEP_POINTS)
        .map(|k| span * k as f64 / (SWEEP_POINTS + 1) as f64)
        .collect()
}

/// `n` with `angle = whole / n`, if such an integer exists.
fn integer_divisor(whole: f64, angle: f64) -> Option<usize> {
    let n = (whole / angle).round();
    if n >= 1.0 && (n * angle - whole).abs() <= ANGLE_MATCH * whole {
        Some(n as usize)
    } else {
        None
    }
}

/// `hbar rho0 c_s`, the prefactor shared by all boundary results.
///
/// Unit kg^2 m^-2 s^-2; divided by a length to the fourth power it gives the
/// variances returned by this module.
pub fn boundary_prefactor(medium: &FluidMedium) -> f64 {
    HBAR * medium.rho0 * medium.c_sound
}

/// Casimir pressure between two parallel walls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CasimirPressure {
    /// Magnitude in Pa.
    pub magnitude: f64,
    pub attractive: bool,
}

/// Phonon Casimir pressure `hbar c_s pi^2 / (480 a^4)` between walls a distance `a` apart.
pub fn casimir_pressure(medium: &FluidMedium, a: f64) -> Result<CasimirPressure> {
    positive("a", a)?;
    Ok(CasimirPressure {
        magnitude: HBAR * medium.c_sound * PI * PI / (480.0 * a.powi(4)),
        attractive: true,
    })
}

/// Electromagnetic Casimir pressure `hbar c pi^2 / (240 a^4)` between perfect plates.
pub fn em_casimir_pressure(a: f64) -> Result<CasimirPressure> {
    positive("a", a)?;
    Ok(CasimirPressure {
        magnitude: HBAR * C_LIGHT * PI * PI / (240.0 * a.powi(4)),
        attractive: true,
    })
}

/// Printed two-plate formula `-K/(96 a^4) [1/15 + (3 - 2 s^2)/s^4]`, `s = sin(pi z/a)`.
fn slab_as_printed(k: f64, a: f64, z: f64) -> f64 {
    let s2 = (PI * z / a).sin().powi(2);
    -k / (96.0 * a.powi(4)) * (1.0 / 15.0 + (3.0 - 2.0 * s2) / (s2 * s2))
}

fn wedge_as_printed(k: f64, alpha: f64, r: f64, theta: f64) -> f64 {
    let s2 = (PI * theta / alpha).sin().powi(2);
    let brace =
        (PI - alpha) * (PI + alpha) * s2 * ((PI * PI + 11.0 * alpha * alpha) * s2 - 30.0 * PI * PI) + 45.0 * PI.powi(4);
    -k / (1440.0 * PI * PI * r.powi(4) * s2 * s2) * brace
}

fn cone_as_printed(k: f64, alpha: f64, r: f64) -> f64 {
    -k / (1440.0 * PI * PI * alpha.powi(4) * r.powi(4))
        * (2.0 * PI - alpha)
        * (2.0 * PI + alpha)
        * (11.0 * alpha * alpha + 4.0 * PI * PI)
}

/// Closed-form variance for the geometry.
///
/// The two-plate result is returned in its corrected form, which is `pi^2`
/// times the printed expression; the printed value is kept in the notes.
/// The wedge is returned as printed, with a note when an image construction
/// exists and disagrees with it.
pub fn variance_closed(medium: &FluidMedium, g: &Geometry) -> Result<DensityVariance> {
    g.validate()?;
    let k = boundary_prefactor(medium);
    let printed = VarianceMethod::ClosedFormAsPrinted;
    match *g {
        Geometry::HalfSpace { z } => Ok(DensityVariance::exact(-k / (32.0 * PI * PI * z.powi(4)), printed)),
        Geometry::ParallelSlab { a, z } => {
            let as_printed = slab_as_printed(k, a, z);
            Ok(
                DensityVariance::exact(PI * PI * as_printed, VarianceMethod::ClosedFormCorrected).note(format!(
                "as printed: {as_printed:.16e}; the printed form is smaller by pi^2 and misses the single-plane limit"
            )),
            )
        }
        Geometry::Torus3 { l } => {
            let s = epstein_inverse_fourth(l, TORUS_REL_TOL)?;
            let scale = k / (2.0 * PI * PI);
            Ok(
                DensityVariance::with_error(-scale * s.value, printed, scale * s.abs_error)
                    .note("lattice sum evaluated by Ewald splitting"),
            )
        }
        Geometry::Wedge { alpha, r, theta } => {
            let value = wedge_as_printed(k, alpha, r, theta);
            let mut out = DensityVariance::exact(value, printed);
            if let Ok(mut set) = g.image_set() {
                let oracle = -k / (2.0 * PI * PI) * set.evaluate(0.0, u64::MAX).value;
                let ratio = value / oracle;
                if (ratio - 1.0).abs() > 1e-10 {
                    out = out.note(format!("image sum gives {oracle:.16e}; printed / image = {ratio:.16e}"));
                }
            }
            Ok(out)
        }
        Geometry::ConicalSpace { alpha, r } => {
            let value = if alpha == 2.0 * PI {
                0.0
            } else {
                cone_as_printed(k, alpha, r)
            };
            Ok(DensityVariance::exact(value, printed))
        }
    }
}

/// Truncation controls for [`variance_image_sum`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImageSumOptions {
    /// Target ratio of tail bound to value for infinite image families.
    pub rel_tol: f64,
    /// Largest number of images an infinite family may sum.
    pub max_images: u64,
}

impl Default for ImageSumOptions {
    fn default() -> Self {
        ImageSumOptions {
            rel_tol: 1e-8,
            max_images: 10_000_000,
        }
    }
}

impl ImageSumOptions {
    pub fn rel(rel_tol: f64) -> Self {
        ImageSumOptions {
            rel_tol,
            ..Self::default()
        }
    }
}

/// Variance from the explicit image sum.
///
/// Infinite families are summed over growing radii until the tail bound
/// meets `rel_tol` or the image budget runs out. The slab always meets its
/// tolerance. The periodic box usually runs out first, because its tail
/// bound only falls like `R^-2`; the best estimate is then returned with
/// its rigorous error and a note.
pub fn variance_image_sum(medium: &FluidMedium, g: &Geometry, opts: &ImageSumOptions) -> Result<DensityVariance> {
    if !(opts.rel_tol > 0.0) {
        return Err(Error::invalid(
            "rel_tol",
            format!("must be positive, got {}", opts.rel_tol),
        ));
    }
    let mut set = g.image_set()?;
    let sum = set.evaluate(opts.rel_tol, opts.max_images);
    let scale = boundary_prefactor(medium) / (2.0 * PI * PI);
    let mut out = DensityVariance::with_error(-scale * sum.value, VarianceMethod::ImageSum, scale * sum.abs_error);
    if !sum.converged {
        out = out.note(format!(
            "image budget exhausted at radius {:.6e} m after {} images; relative bound {:.3e} exceeds {:.3e}",
            sum.truncation_radius,
            sum.images_summed,
            sum.abs_error / sum.value.abs(),
            opts.rel_tol
        ));
    }
    Ok(out)
}

/// Outcome of comparing a closed form with the image sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    /// Closed form / image sum is the same `factor` at every sweep point.
    ConstantFactor {
        factor: f64,
    },
    Disagrees,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub parameter: f64,
    pub closed_as_printed: f64,
    pub closed_corrected: Option<f64>,
    pub image_sum: f64,
    pub image_abs_error: f64,
    /// `closed_as_printed / image_sum`.
    pub ratio_printed: f64,
    /// `closed_corrected / image_sum`.
    pub ratio_corrected: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancyReport {
    pub geometry: Geometry,
    pub closed_as_printed: DensityVariance,
    pub closed_corrected: Option<DensityVariance>,
    pub image_sum: DensityVariance,
    pub ratio_printed: f64,
    pub ratio_corrected: Option<f64>,
    pub sweep_parameter: &'static str,
    pub sweep: Vec<SweepPoint>,
    /// Verdict on the printed closed form.
    pub verdict: Verdict,
    /// Verdict on the corrected closed form, where one exists.
    pub verdict_corrected: Option<Verdict>,
}

/// Printed and corrected closed forms at one geometry.
fn closed_pair(medium: &FluidMedium, g: &Geometry) -> Result<(DensityVariance, Option<DensityVariance>)> {
    let closed = variance_closed(medium, g)?;
    match *g {
        Geometry::ParallelSlab { a, z } => {
            let printed = DensityVariance::exact(
                slab_as_printed(boundary_prefactor(medium), a, z),
                VarianceMethod::ClosedFormAsPrinted,
            );
            Ok((printed, Some(closed)))
        }
        _ => Ok((closed, None)),
    }
}

fn relative(v: &DensityVariance) -> f64 {
    if v.value == 0.0 {
        0.0
    } else {
        v.abs_error / v.value.abs()
    }
}

/// Ratio of closed form to image sum; two exact zeros count as agreement.
fn ratio(closed: f64, image: f64) -> f64 {
    if closed == 0.0 && image == 0.0 {
        1.0
    } else {
        closed / image
    }
}

/// Consistent if every ratio is within `max(tol, 2 err)` of one; constant
/// factor if the spread of the ratios is within `1e-6 + 2 err`.
fn judge(ratios: &[f64], rel_errs: &[f64], tol: f64) -> Verdict {
    let err = rel_errs.iter().cloned().fold(0.0, f64::max);
    if ratios.iter().all(|r| (r - 1.0).abs() <= tol.max(2.0 * err)) {
        return Verdict::Consistent;
    }
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    if mean.is_finite() && (hi - lo) <= (1e-6 + 2.0 * err) * mean.abs() {
        Verdict::ConstantFactor { factor: mean }
    } else {
        Verdict::Disagrees
    }
}

/// Compares the closed forms with the image sum at `g` and along a sweep of
/// its field-point parameter.
pub fn discrepancy_report(medium: &FluidMedium, g: &Geometry, opts: &ImageSumOptions) -> Result<DiscrepancyReport> {
    g.image_set()?;
    let (printed, corrected) = closed_pair(medium, g)?;
    let image = variance_image_sum(medium, g, opts)?;

    let (name, values) = g.sweep();
    let mut sweep = Vec::with_capacity(values.len());
    let mut errs = Vec::with_capacity(values.len());
    for v in values {
        let gv = g.with_sweep_value(v);
        let (p, c) = closed_pair(medium, &gv)?;
        let i = variance_image_sum(medium, &gv, opts)?;
        errs.push(relative(&i) + relative(&p) + c.as_ref().map_or(0.0, relative));
        sweep.push(SweepPoint {
            parameter: v,
            closed_as_printed: p.value,
            closed_corrected: c.as_ref().map(|c| c.value),
            image_sum: i.value,
            image_abs_error: i.abs_error,
            ratio_printed: ratio(p.value, i.value),
            ratio_corrected: c.as_ref().map(|c| ratio(c.value, i.value)),
        });
    }

    let printed_ratios: Vec<f64> = sweep.iter().map(|s| s.ratio_printed).collect();
    let verdict = judge(&printed_ratios, &errs, opts.rel_tol);
    let verdict_corrected = corrected.as_ref().map(|_| {
        let r: Vec<f64> = sweep.iter().filter_map(|s| s.ratio_corrected).collect();
        judge(&r, &errs, opts.rel_tol)
    });
    Ok(DiscrepancyReport {
        geometry: *g,
        ratio_printed: ratio(printed.value, image.value),
        ratio_corrected: corrected.as_ref().map(|c| ratio(c.value, image.value)),
        closed_as_printed: printed,
        closed_corrected: corrected,
        image_sum: image,
        sweep_parameter: name,
        sweep,
        verdict,
        verdict_corrected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn water() -> FluidMedium {
        FluidMedium::water_293k()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    /// Independent high-precision evaluations, oracles/derived_values.py.
    const HALF_SPACE_1NM: f64 = -493_195.032_597_302_86;
    const CASIMIR_1UM: f64 = 3.209_197_049_284_467_2e-9;

    #[test]
    fn half_space_reference_value() {
        let v = variance_closed(&water(), &Geometry::half_space(1e-9).unwrap()).unwrap();
        assert!(rel(v.value, HALF_SPACE_1NM) < 1e-13, "{}", v.value);
    }

    #[test]
    fn casimir_reference_value_and_em_ratio() {
        let w = water();
        let p = casimir_pressure(&w, 1e-6).unwrap();
        assert!(p.attractive);
        assert!(rel(p.magnitude, CASIMIR_1UM) < 1e-13);
        let em = em_casimir_pressure(1e-6).unwrap();
        assert!(rel(p.magnitude / em.magnitude, w.c_sound / (2.0 * C_LIGHT)) < 1e-14);
        let q = casimir_pressure(&w, 2e-6).unwrap();
        assert!(rel(p.magnitude / q.magnitude, 16.0) < 1e-14);
    }

    #[test]
    fn cone_without_deficit_vanishes() {
        let v = variance_closed(&water(), &Geometry::cone(2.0 * PI, 1e-9).unwrap()).unwrap();
        assert_eq!(v.value, 0.0);
        let i = variance_image_sum(
            &water(),
            &Geometry::cone(2.0 * PI, 1e-9).unwrap(),
            &ImageSumOptions::default(),
        )
        .unwrap();
        assert_eq!(i.value, 0.0);
    }

    #[test]
    fn cone_matches_rotation_images() {
        for n in [2usize, 3, 4, 6] {
            let g = Geometry::cone(2.0 * PI / n as f64, 3e-9).unwrap();
            let c = variance_closed(&water(), &g).unwrap().value;
            let i = variance_image_sum(&water(), &g, &ImageSumOptions::default())
                .unwrap()
                .value;
            assert!(rel(c, i) < 1e-12, "n={n}: {c} vs {i}");
        }
    }

    #[test]
    fn cone_at_pi_is_single_image() {
        let c = variance_closed(&water(), &Geometry::cone(PI, 2e-9).unwrap())
            .unwrap()
            .value;
        let h = variance_closed(&water(), &Geometry::half_space(2e-9).unwrap())
            .unwrap()
            .value;
        assert!(rel(c, h) < 1e-14);
    }

    #[test]
    fn slab_corrected_matches_images() {
        let a = 1e-8;
        for k in 1..=10 {
            let g = Geometry::slab(a, a * k as f64 / 11.0).unwrap();
            let c = variance_closed(&water(), &g).unwrap();
            assert_eq!(c.method, VarianceMethod::ClosedFormCorrected);
            let i = variance_image_sum(&water(), &g, &ImageSumOptions::default()).unwrap();
            assert!(rel(c.value, i.value) < 1e-8, "k={k}");
        }
    }

    #[test]
    fn half_space_report_is_consistent() {
        let r = discrepancy_report(
            &water(),
            &Geometry::half_space(1e-9).unwrap(),
            &ImageSumOptions::default(),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Consistent);
        assert!((r.ratio_printed - 1.0).abs() < 1e-14);
    }

    #[test]
    fn slab_report_finds_pi_squared() {
        let g = Geometry::slab(1e-8, 3e-9).unwrap();
        let r = discrepancy_report(&water(), &g, &ImageSumOptions::default()).unwrap();
        match r.verdict {
            Verdict::ConstantFactor { factor } => assert!(rel(1.0 / factor, PI * PI) < 1e-8, "{factor}"),
            v => panic!("{v:?}"),
        }
        assert_eq!(r.verdict_corrected, Some(Verdict::Consistent));
    }

    #[test]
    fn wedge_reports() {
        let r = discrepancy_report(
            &water(),
            &Geometry::wedge(PI, 1e-8, 0.7).unwrap(),
            &ImageSumOptions::default(),
        )
        .unwrap();
        match r.verdict {
            Verdict::ConstantFactor { factor } => assert!(rel(factor, PI.powi(4)) < 1e-10),
            v => panic!("{v:?}"),
        }
        let c = variance_closed(&water(), &Geometry::wedge(PI, 1e-8, 0.7).unwrap()).unwrap();
        assert_eq!(c.notes.len(), 1);
        let r = discrepancy_report(
            &water(),
            &Geometry::wedge(PI / 2.0, 1e-8, 0.3).unwrap(),
            &ImageSumOptions::default(),
        )
        .unwrap();
        assert!(r.ratio_printed.is_finite() && r.ratio_printed > 0.0);
    }

    #[test]
    fn wedge_half_space_limit() {
        let (r, theta) = (1e-8, 0.9);
        let w = variance_image_sum(
            &water(),
            &Geometry::wedge(PI, r, theta).unwrap(),
            &ImageSumOptions::default(),
        )
        .unwrap()
        .value;
        let h = variance_closed(&water(), &Geometry::half_space(r * theta.sin()).unwrap())
            .unwrap()
            .value;
        assert!(rel(w, h) < 1e-14);
    }

    #[test]
    fn inadmissible_angles_rejected() {
        let e = variance_image_sum(
            &water(),
            &Geometry::wedge(1.0, 1e-8, 0.5).unwrap(),
            &ImageSumOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(e, Error::NotImageAdmissible(_)));
        assert!(e.is_config_error());
        assert!(Geometry::cone(7.0, 1.0).is_err());
        assert!(Geometry::wedge(1.0, 1.0, 1.0).is_err());
        assert!(Geometry::slab(1.0, 1.0).is_err());
    }

    #[test]
    fn torus_closed_and_images_agree() {
        let g = Geometry::torus([1e-8, 1.2e-8, 1.5e-8]).unwrap();
        let c = variance_closed(&water(), &g).unwrap();
        let i = variance_image_sum(&water(), &g, &ImageSumOptions::default()).unwrap();
        assert!((c.value - i.value).abs() <= i.abs_error + c.abs_error, "{c:?} {i:?}");
        assert!(!i.notes.is_empty());
    }

    #[test]
    fn geometry_json_is_tagged() {
        let g: Geometry = serde_json::from_str(r#"{"kind":"parallel_slab","a":2.0,"z":0.5}"#).unwrap();
        assert_eq!(g, Geometry::ParallelSlab { a: 2.0, z: 0.5 });
        assert!(serde_json::from_str::<Geometry>(r#"{"kind":"half_space","z":1,"q":2}"#).is_err());
    }
}
