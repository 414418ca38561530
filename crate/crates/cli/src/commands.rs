use std::f64::consts::PI;
use std::path::Path;

use clap::{Args, ValueEnum};
use phonon_casimir::boundaries::{
    casimir_pressure, discrepancy_report, em_casimir_pressure, variance_closed, variance_image_sum, ImageSumOptions,
    Verdict,
};
use phonon_casimir::freefield::{corr_closed, corr_mode_integral, ModeIntegralOptions, Separation};
use phonon_casimir::media::load_media_config;
use phonon_casimir::parabola::{
    fit_samples, variance_near_focus_detailed, FieldPoint, FocusOptions, MirrorSpec, DEFAULT_KAPPA,
};
use phonon_casimir::scattering::{
    cross_section_zp, omega_from_wavelength, ratio_zp_thermal, OmegaConvention, ScatteringQuery,
};
use phonon_casimir::squeezed::{squeezed_envelope, squeezed_variance, SqueezeParams, SqueezedModeSpec};
use serde::Serialize;

use crate::geometry::{GeometryArgs, GeometryKind, SweepArgs};
use crate::output::{Cell, Failure, Table, EXIT_DISAGREES, EXIT_NUMERICAL};
use crate::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileMethod {
    Closed,
    Images,
}

fn image_options(cfg: &RunConfig) -> ImageSumOptions {
    cfg.tol.map_or_else(ImageSumOptions::default, ImageSumOptions::rel)
}

fn columns(params: &[&str], rest: &[&str]) -> Vec<String> {
    params.iter().chain(rest).map(|s| s.to_string()).collect()
}

pub fn profile(
    cfg: &RunConfig,
    g: &GeometryArgs,
    sweep: &SweepArgs,
    method: ProfileMethod,
    table: &mut Table,
) -> Result<(), Failure> {
    table.columns = columns(g.geometry.params(), &["value", "method", "abs_error"]);
    table.meta("geometry", format!("{:?}", g.geometry));
    table.meta("sweep", &sweep.sweep);
    table.meta("unit", "kg^2 m^-4 s^-2 (hbar rho0 c_s / length^4)");
    let points = sweep.points()?;
    // Validate every point before computing any.
    let values = points
        .iter()
        .map(|&v| g.values(Some((&sweep.sweep, v))))
        .collect::<Result<Vec<_>, _>>()?;
    let opts = image_options(cfg);
    for vals in values {
        let geometry = g.build(&vals)?;
        let v = match method {
            ProfileMethod::Closed => variance_closed(&cfg.medium, &geometry)?,
            ProfileMethod::Images => variance_image_sum(&cfg.medium, &geometry, &opts)?,
        };
        for n in &v.notes {
            table.note(n.clone());
        }
        let mut row: Vec<Cell> = vals.iter().map(|&x| x.into()).collect();
        row.push(v.value.into());
        row.push(
            serde_json::to_value(v.method)
                .unwrap()
                .as_str()
                .unwrap_or_default()
                .into(),
        );
        row.push(v.abs_error.into());
        table.push(row);
    }
    Ok(())
}

pub fn oracle_check(cfg: &RunConfig, g: &GeometryArgs, dt: f64, table: &mut Table) -> Result<(), Failure> {
    if g.geometry == GeometryKind::FreeField {
        return free_field_check(cfg, g, dt, table);
    }
    let geometry = g.build(&g.values(None)?)?;
    table.meta("geometry", geometry.name());
    table.columns = columns(
        &[],
        &[
            "parameter",
            "closed_as_printed",
            "closed_corrected",
            "image_sum",
            "image_abs_error",
            "ratio_printed",
            "ratio_corrected",
        ],
    );
    let report = discrepancy_report(&cfg.medium, &geometry, &image_options(cfg))?;
    table.meta("sweep_parameter", report.sweep_parameter);
    for p in &report.sweep {
        table.push(vec![
            p.parameter.into(),
            p.closed_as_printed.into(),
            p.closed_corrected.into(),
            p.image_sum.into(),
            p.image_abs_error.into(),
            p.ratio_printed.into(),
            p.ratio_corrected.into(),
        ]);
    }
    table.meta("verdict", verdict_text(&report.verdict));
    if let Some(v) = &report.verdict_corrected {
        table.meta("verdict_corrected", verdict_text(v));
    }
    for n in report.closed_as_printed.notes.iter().chain(&report.image_sum.notes) {
        table.note(n.clone());
    }
    table.set_summary(&report);
    table.summary_in_csv = false;
    let corrected_ok = matches!(report.verdict_corrected, Some(Verdict::Consistent));
    if report.verdict == Verdict::Disagrees && !corrected_ok {
        return Err(Failure {
            code: EXIT_DISAGREES,
            message: format!("{}: closed form and image sum disagree", geometry.name()),
        });
    }
    Ok(())
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Consistent => "consistent".into(),
        Verdict::ConstantFactor { factor } => format!("constant_factor {factor:.16e}"),
        Verdict::Disagrees => "disagrees".into(),
    }
}

fn free_field_check(cfg: &RunConfig, g: &GeometryArgs, dt: f64, table: &mut Table) -> Result<(), Failure> {
    let r = g.r.ok_or_else(|| Failure::config("free-field needs --r"))?;
    table.meta("geometry", "free_field");
    table.meta("unit", "kg^2 m^-6");
    table.columns = columns(&[], &["r", "dt", "closed", "mode_integral", "abs_error", "rel_diff"]);
    let sep = Separation::new([r, 0.0, 0.0], dt)?;
    let closed = corr_closed(&cfg.medium, &sep)?.value;
    let mut opts = ModeIntegralOptions::default();
    if let Some(t) = cfg.tol {
        opts.rel_tol = t;
    }
    let oracle = corr_mode_integral(&cfg.medium, &sep, &opts)?;
    let rel = (oracle.value - closed) / closed;
    table.push(vec![
        r.into(),
        dt.into(),
        closed.into(),
        oracle.value.into(),
        oracle.abs_error.into(),
        rel.into(),
    ]);
    let agree = (oracle.value - closed).abs() <= 2.0 * oracle.abs_error + opts.rel_tol * closed.abs();
    table.meta("verdict", if agree { "consistent" } else { "disagrees" });
    if !agree {
        return Err(Failure {
            code: EXIT_DISAGREES,
            message: format!("mode integral differs from the closed form by {rel:e}"),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Args)]
pub struct ScatteringArgs {
    /// Light wavelength, m.
    #[arg(long, conflicts_with = "omega", required_unless_present = "omega")]
    pub wavelength: Option<f64>,
    /// Light angular frequency, rad/s.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Scattering angle, rad.
    #[arg(long, default_value_t = PI)]
    pub theta: f64,
    /// Read the wavelength as measured inside the medium.
    #[arg(long, requires = "wavelength")]
    pub omega_in_medium: bool,
    /// Overlap of incident and scattered polarizations.
    #[arg(long, default_value_t = 1.0)]
    pub pol_dot: f64,
    /// Scattering volume, m^3.
    #[arg(long, default_value_t = 1e-18)]
    pub volume: f64,
}

pub fn scattering(cfg: &RunConfig, args: &ScatteringArgs, table: &mut Table) -> Result<(), Failure> {
    table.columns = columns(
        &[],
        &["wavelength", "omega", "theta", "cross_section", "ratio_zp_thermal"],
    );
    let convention = if args.omega_in_medium {
        OmegaConvention::InMedium
    } else {
        OmegaConvention::Vacuum
    };
    let omega = match (args.wavelength, args.omega) {
        (Some(l), _) => {
            table.meta(
                "omega_convention",
                serde_json::to_value(convention).unwrap().as_str().unwrap_or_default(),
            );
            omega_from_wavelength(&cfg.medium, l, convention)?
        }
        (None, Some(w)) => {
            table.meta("omega_convention", "given");
            w
        }
        (None, None) => return Err(Failure::config("give --wavelength or --omega")),
    };
    table.meta("cross_section_unit", "m^2 sr^-1");
    let q = ScatteringQuery {
        medium: cfg.medium,
        omega,
        theta: args.theta,
        pol_dot: args.pol_dot,
        scat_volume: args.volume,
    };
    let sigma = cross_section_zp(&q)?;
    let ratio = ratio_zp_thermal(&cfg.medium, omega, args.theta)?;
    table.push(vec![
        args.wavelength.into(),
        omega.into(),
        args.theta.into(),
        sigma.into(),
        ratio.into(),
    ]);
    Ok(())
}

#[derive(Debug, Clone, Args)]
pub struct SqueezedArgs {
    /// Wave number, 1/m.
    #[arg(long)]
    pub k: f64,
    /// Quantization volume, m^3.
    #[arg(long)]
    pub volume: f64,
    /// Squeeze parameter.
    #[arg(long)]
    pub r: f64,
    /// Squeeze phase, rad.
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    /// Time, s.
    #[arg(long, default_value_t = 0.0)]
    pub t: f64,
    /// Samples over one period `pi / k`.
    #[arg(long, default_value_t = 64)]
    pub points: usize,
}

pub fn squeezed_profile(cfg: &RunConfig, args: &SqueezedArgs, table: &mut Table) -> Result<(), Failure> {
    table.columns = columns(&[], &["z", "t", "value"]);
    table.meta("unit", "kg^2 m^-6");
    if args.points < 2 {
        return Err(Failure::config("--points must be at least 2"));
    }
    let mode = SqueezedModeSpec::for_medium(&cfg.medium, args.k, args.volume)?;
    let params = SqueezeParams::new(args.r, args.delta)?;
    let (lo, hi) = squeezed_envelope(&cfg.medium, &mode, &params);
    let mean = mode.prefactor(&cfg.medium) * args.r.sinh().powi(2);
    table.meta("period", format!("{:.16e}", mode.profile_period()));
    table.meta("envelope_min", format!("{lo:.16e}"));
    table.meta("envelope_max", format!("{hi:.16e}"));
    table.meta("period_mean", format!("{mean:.16e}"));
    let h = mode.profile_period() / args.points as f64;
    for i in 0..args.points {
        let z = i as f64 * h;
        let v = squeezed_variance(&cfg.medium, &mode, &params, z, args.t)?;
        table.push(vec![z.into(), args.t.into(), v.into()]);
    }
    Ok(())
}

pub fn casimir_force(cfg: &RunConfig, a: &[f64], table: &mut Table) -> Result<(), Failure> {
    table.columns = columns(&[], &["a", "pressure", "em_pressure", "ratio"]);
    table.meta("unit", "Pa, attractive");
    for &sep in a {
        let p = casimir_pressure(&cfg.medium, sep)?;
        let em = em_casimir_pressure(sep)?;
        table.push(vec![
            sep.into(),
            p.magnitude.into(),
            em.magnitude.into(),
            (p.magnitude / em.magnitude).into(),
        ]);
    }
    Ok(())
}

#[derive(Debug, Clone, Args)]
pub struct ParabolaArgs {
    /// Mirror widths (twice the focal length), m.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub b: Vec<f64>,
    /// Distances from the focus, m.
    #[arg(long, value_delimiter = ',', required = true)]
    pub a: Vec<f64>,
    /// Field-point angles from the axis, rad.
    #[arg(long, value_delimiter = ',', default_value = "0.2")]
    pub gamma: Vec<f64>,
    /// Mirror half-aperture seen from the focus, rad.
    #[arg(long, default_value_t = PI / 2.0)]
    pub aperture: f64,
    #[arg(long, default_value_t = DEFAULT_KAPPA)]
    pub kappa: f64,
    /// Fraction of each interval cut away at fold ends.
    #[arg(long, default_value_t = 0.01)]
    pub margin: f64,
}

#[derive(Serialize)]
struct FitSummary {
    gamma: f64,
    slope_a: Option<f64>,
    slope_b: Option<f64>,
    #[serde(rename = "C")]
    c: f64,
    residual: f64,
}

pub fn parabola_scan(cfg: &RunConfig, args: &ParabolaArgs, table: &mut Table) -> Result<(), Failure> {
    table.columns = columns(
        &[],
        &[
            "a",
            "b",
            "gamma",
            "value",
            "abs_error",
            "n_ray_failures",
            "margin_ratio",
        ],
    );
    table.meta("unit", "kg^2 m^-4 s^-2 (hbar rho0 c_s / length^4)");
    table.meta("fold_margin", args.margin);
    let opts = FocusOptions {
        kappa: args.kappa,
        margin_frac: args.margin,
        quad_tol: cfg.tol.unwrap_or(FocusOptions::default().quad_tol),
        ..Default::default()
    };
    let mirrors = args
        .b
        .iter()
        .map(|&b| MirrorSpec::new(b, args.aperture))
        .collect::<Result<Vec<_>, _>>()?;
    let mut fits = Vec::new();
    for &gamma in &args.gamma {
        let mut samples = Vec::new();
        for m in &mirrors {
            for &a in &args.a {
                let p = FieldPoint::new(a, gamma)?;
                let (v, nf) = variance_near_focus_detailed(&cfg.medium, m, &p, &opts)?;
                // The margin and its sensitivity already appear as meta and a column.
                for n in v.notes.iter().skip(1).filter(|n| !n.starts_with("doubling")) {
                    table.note(format!("a = {a:e}, b = {:e}, gamma = {gamma}: {n}", m.b));
                }
                table.push(vec![
                    a.into(),
                    m.b.into(),
                    gamma.into(),
                    v.value.into(),
                    v.abs_error.into(),
                    nf.n_ray_failures.into(),
                    nf.margin_ratio.into(),
                ]);
                samples.push((a, m.b, v.value));
            }
        }
        if samples.len() < 2 {
            table.note(format!("gamma = {gamma}: a single grid point, no fit"));
            continue;
        }
        let fit = fit_samples(&cfg.medium, gamma, samples).map_err(|e| Failure {
            code: EXIT_NUMERICAL,
            message: e.to_string(),
        })?;
        let finite = |x: f64| x.is_finite().then_some(x);
        fits.push(FitSummary {
            gamma,
            slope_a: finite(fit.slope_a),
            slope_b: finite(fit.slope_b),
            c: fit.c,
            residual: fit.residual,
        });
        table.set_summary(&fits);
    }
    Ok(())
}

pub fn media_list(cfg: &RunConfig, table: &mut Table) -> Result<(), Failure> {
    table.columns = columns(
        &[],
        &["name", "source", "rho0", "c_sound", "eta", "depsilon", "temperature"],
    );
    for (name, m) in cfg.registry.iter() {
        let source = if cfg.registry.is_builtin(name) {
            "builtin"
        } else {
            "config"
        };
        table.push(vec![
            name.into(),
            source.into(),
            m.rho0.into(),
            m.c_sound.into(),
            m.eta.into(),
            m.depsilon.into(),
            m.temperature.into(),
        ]);
    }
    Ok(())
}

pub fn media_validate(file: &Path, table: &mut Table) -> Result<(), Failure> {
    table.columns = columns(&[], &["name", "rho0", "c_sound", "eta", "depsilon", "temperature"]);
    table.meta("file", file.display());
    let registry = load_media_config(file)?;
    for (name, m) in registry.iter().filter(|(n, _)| !registry.is_builtin(n)) {
        for w in m.warnings() {
            table.note(format!("{name}: {w}"));
        }
        table.push(vec![
            name.into(),
            m.rho0.into(),
            m.c_sound.into(),
            m.eta.into(),
            m.depsilon.into(),
            m.temperature.into(),
        ]);
    }
    table.meta("status", "valid");
    Ok(())
}
