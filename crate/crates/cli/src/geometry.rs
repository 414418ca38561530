//! Geometry and sweep flags, turned into library geometries.

use clap::{Args, ValueEnum};
use phonon_casimir::boundaries::Geometry;

use crate::output::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeometryKind {
    HalfSpace,
    Slab,
    Torus,
    Wedge,
    Cone,
    /// Unbounded space; only `oracle-check` accepts it.
    FreeField,
}

impl GeometryKind {
    /// Declared parameters, in column order.
    pub fn params(self) -> &'static [&'static str] {
        match self {
            GeometryKind::HalfSpace => &["z"],
            GeometryKind::Slab => &["a", "z"],
            GeometryKind::Torus => &["l1", "l2", "l3"],
            GeometryKind::Wedge => &["alpha", "r", "theta"],
            GeometryKind::Cone => &["alpha", "r"],
            GeometryKind::FreeField => &["r", "dt"],
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GeometryArgs {
    #[arg(long, value_enum)]
    pub geometry: GeometryKind,
    /// Distance from the (first) wall, m.
    #[arg(long)]
    pub z: Option<f64>,
    /// Slab width, m.
    #[arg(long)]
    pub a: Option<f64>,
    /// Torus periods, m: one value for a cube or three.
    #[arg(long, value_delimiter = ',', num_args = 1..=3)]
    pub l: Vec<f64>,
    /// Wedge or cone opening angle, rad.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Distance from the edge or apex, m.
    #[arg(long)]
    pub r: Option<f64>,
    /// Polar angle inside a wedge, rad.
    #[arg(long)]
    pub theta: Option<f64>,
}

impl GeometryArgs {
    /// Parameter values in the order of [`GeometryKind::params`], with
    /// `sweep` (if any) overriding one of them. `l` sweeps a cubic torus.
    pub fn values(&self, sweep: Option<(&str, f64)>) -> Result<Vec<f64>, Failure> {
        let kind = self.geometry;
        let given = |name: &str| -> Option<f64> {
            match name {
                "z" => self.z,
                "a" => self.a,
                "alpha" => self.alpha,
                "r" => self.r,
                "theta" => self.theta,
                "l1" | "l2" | "l3" => match self.l.len() {
                    1 => Some(self.l[0]),
                    3 => Some(self.l[["l1", "l2", "l3"].iter().position(|n| *n == name).unwrap()]),
                    _ => None,
                },
                _ => None,
            }
        };
        if let Some((name, _)) = sweep {
            let cubic = kind == GeometryKind::Torus && name == "l";
            if !cubic && !kind.params().contains(&name) {
                return Err(Failure::config(format!(
                    "`{name}` is not a parameter of {kind:?}; expected one of {:?}",
                    kind.params()
                )));
            }
        }
        kind.params()
            .iter()
            .map(|&name| {
                let swept = sweep.and_then(|(s, v)| (s == name || (s == "l" && name.starts_with('l'))).then_some(v));
                swept.or_else(|| given(name)).ok_or_else(|| {
                    Failure::config(format!("{kind:?} needs --{}", name.trim_end_matches(['1', '2', '3'])))
                })
            })
            .collect()
    }

    pub fn build(&self, values: &[f64]) -> Result<Geometry, Failure> {
        let g = match self.geometry {
            GeometryKind::HalfSpace => Geometry::half_space(values[0]),
            GeometryKind::Slab => Geometry::slab(values[0], values[1]),
            GeometryKind::Torus => Geometry::torus([values[0], values[1], values[2]]),
            GeometryKind::Wedge => Geometry::wedge(values[0], values[1], values[2]),
            GeometryKind::Cone => Geometry::cone(values[0], values[1]),
            GeometryKind::FreeField => {
                return Err(Failure::config("free-field has no boundary; use it with oracle-check"))
            }
        };
        Ok(g?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Parameter to sweep (`l` scales all three torus periods together).
    #[arg(long)]
    pub sweep: String,
    /// Explicit sweep values.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["from", "to"])]
    pub values: Vec<f64>,
    #[arg(long, requires = "to")]
    pub from: Option<f64>,
    #[arg(long, requires = "from")]
    pub to: Option<f64>,
    #[arg(long, default_value_t = 11)]
    pub points: usize,
    /// Space the points geometrically instead of linearly.
    #[arg(long)]
    pub log: bool,
}

impl SweepArgs {
    pub fn points(&self) -> Result<Vec<f64>, Failure> {
        let pts = if !self.values.is_empty() {
            self.values.clone()
        } else if let (Some(from), Some(to)) = (self.from, self.to) {
            if self.points < 2 {
                return Err(Failure::config("a sweep needs at least 2 points"));
            }
            if self.log && !(from > 0.0 && to > 0.0) {
                return Err(Failure::config("--log needs positive --from and --to"));
            }
            let n = self.points - 1;
            (0..=n)
                .map(|i| {
                    let s = i as f64 / n as f64;
                    if self.log {
                        from * (to / from).powf(s)
                    } else {
                        from + (to - from) * s
                    }
                })
                .collect()
        } else {
            return Err(Failure::config("give either --values or --from and --to"));
        };
        if pts.len() < 2 {
            return Err(Failure::config("a sweep needs at least 2 points"));
        }
        Ok(pts)
    }
}
