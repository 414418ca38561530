//! Exact specular ray tracing off the parabolic cylinder.
//!
//! Focus at the origin, vertex at `(-f, 0)`, `f = b/2`. The mirror point at
//! angle `t` is `M(t) = -R(t) (cos t, sin t)` with `R(t) = f / cos^2(t/2)`,
//! and its unit normal is `(cos t/2, sin t/2)`. A plane wave travelling
//! along `-(cos theta, sin theta)` leaves `M(t)` along
//! `(cos(t - theta), sin(t - theta))`. The signed miss of that ray at
//! `P = a (cos gamma, sin gamma)` is the cross product of the ray direction
//! with `P - M`:
//!
//! ```text
//! m(t) = a sin(gamma + theta - t) + f sin(theta) / cos^2(t/2)
//! ```
//!
//! The optical path from a fixed wavefront through `M(t)` to `P` is
//! stationary exactly at the zeros of `m`.

use serde::Serialize;

use super::{FieldPoint, MirrorSpec};
use crate::numerics::{brent, BrentOptions};

/// Grid used to bracket the critical points of the miss function.
pub(crate) const DEFAULT_THETA_PRIME_GRID: usize = 1024;
/// `|m| <= TANGENCY * a` at a critical point counts as a tangency.
const TANGENCY: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceMethod {
    /// Leading-order path-difference formula.
    Analytic,
    /// Exact trace with root finding.
    ExactTrace,
}

/// Two reflected rays through the field point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RayPair {
    pub theta: f64,
    pub alpha: f64,
    pub beta: f64,
    /// `|path(alpha) - path(beta)|`, m.
    pub delta_ell: f64,
    /// Sign of `path(alpha) - path(beta)`.
    pub delta_ell_sign: f64,
    pub method: TraceMethod,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum PairOutcome {
    Pair(RayPair),
    /// Fewer than two rays reach the field point.
    NoPair {
        roots: Vec<f64>,
    },
    /// Two rays coincide at a tangency of the miss function.
    Degenerate {
        theta_prime: f64,
    },
}

/// All reflection angles inside the aperture that reach the field point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RayTrace {
    /// Ascending.
    pub roots: Vec<f64>,
    /// Critical points of the miss function where it also vanishes.
    pub tangencies: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Tracer {
    f: f64,
    a: f64,
    gamma: f64,
    aperture: f64,
    grid: usize,
}

impl Tracer {
    pub(crate) fn new(m: &MirrorSpec, p: &FieldPoint, grid: usize) -> Self {
        Tracer {
            f: m.focal_length(),
            a: p.a,
            gamma: p.gamma,
            aperture: m.aperture_half_angle,
            grid: grid.max(8),
        }
    }

    pub(crate) fn aperture(&self) -> f64 {
        self.aperture
    }

    pub(crate) fn miss(&self, theta: f64, t: f64) -> f64 {
        let c = (0.5 * t).cos();
        self.a * (self.gamma + theta - t).sin() + self.f * theta.sin() / (c * c)
    }

    fn miss_slope(&self, theta: f64, t: f64) -> f64 {
        let c = (0.5 * t).cos();
        -self.a * (self.gamma + theta - t).cos() + self.f * theta.sin() * (0.5 * t).tan() / (c * c)
    }

    /// Optical path through `M(t)` to `P`, minus the constant `2f`.
    ///
    /// Arranged so that no two large terms cancel: the result is `O(a)`.
    pub(crate) fn excess_path(&self, theta: f64, t: f64) -> f64 {
        let c = (0.5 * t).cos();
        let r = self.f / (c * c);
        let (st, ct) = t.sin_cos();
        let half = (0.5 * theta).sin();
        let along = r * (st * theta.sin() - 2.0 * ct * half * half);
        let cross = 2.0 * r * self.a * (self.gamma - t).cos() + self.a * self.a;
        let dist = (r * r + cross).sqrt();
        along + cross / (dist + r)
    }

    /// Critical points of the miss function inside the aperture, ascending.
    fn critical_points(&self, theta: f64) -> Vec<f64> {
        let n = self.grid;
        let h = 2.0 * self.aperture / n as f64;
        let at = |i: usize| -self.aperture + i as f64 * h;
        let mut out = Vec::new();
        let mut prev = self.miss_slope(theta, at(0));
        for i in 1..=n {
            let x = if i == n { self.aperture } else { at(i) };
            let cur = self.miss_slope(theta, x);
            if prev == 0.0 {
                out.push(at(i - 1));
            } else if prev.signum() != cur.signum() && cur != 0.0 {
                if let Some(c) = brent(|t| self.miss_slope(theta, t), at(i - 1), x, BrentOptions::default()) {
                    out.push(c);
                }
            }
            prev = cur;
        }
        out
    }

    pub(crate) fn trace(&self, theta: f64) -> RayTrace {
        let crit = self.critical_points(theta);
        let mut nodes = Vec::with_capacity(crit.len() + 2);
        nodes.push(-self.aperture);
        nodes.extend(crit.iter().copied());
        nodes.push(self.aperture);
        let values: Vec<f64> = nodes.iter().map(|&t| self.miss(theta, t)).collect();
        let mut roots = Vec::new();
        let mut tangencies = Vec::new();
        for (k, &c) in crit.iter().enumerate() {
            if values[k + 1].abs() <= TANGENCY * self.a {
                tangencies.push(c);
            }
        }
        // The miss function is monotone between consecutive nodes.
        for w in 0..nodes.len() - 1 {
            let (fa, fb) = (values[w], values[w + 1]);
            if fa != 0.0 && fb != 0.0 && fa.signum() != fb.signum() {
                if let Some(r) = brent(|t| self.miss(theta, t), nodes[w], nodes[w + 1], BrentOptions::default()) {
                    roots.push(r);
                }
            }
        }
        RayTrace { roots, tangencies }
    }

    pub(crate) fn pair(&self, theta: f64, alpha: f64, beta: f64) -> RayPair {
        let d = self.excess_path(theta, alpha) - self.excess_path(theta, beta);
        RayPair {
            theta,
            alpha,
            beta,
            delta_ell: d.abs(),
            delta_ell_sign: if d < 0.0 { -1.0 } else { 1.0 },
            method: TraceMethod::ExactTrace,
        }
    }

    /// `sum over root pairs of dl^-4`; zero when fewer than two roots exist.
    pub(crate) fn pair_sum(&self, theta: f64) -> (f64, usize) {
        let tr = self.trace(theta);
        let paths: Vec<f64> = tr.roots.iter().map(|&t| self.excess_path(theta, t)).collect();
        let mut s = 0.0;
        for i in 0..paths.len() {
            for j in i + 1..paths.len() {
                s += (paths[i] - paths[j]).powi(-4);
            }
        }
        (s, tr.roots.len())
    }
}

/// Exact ray pair for incoming angle `theta`.
///
/// With more than two rays through `P`, the adjacent pair with the smallest
/// path difference is returned.
pub fn solve_ray_pair(m: &MirrorSpec, p: &FieldPoint, theta: f64) -> PairOutcome {
    let tracer = Tracer::new(m, p, DEFAULT_THETA_PRIME_GRID);
    let tr = tracer.trace(theta);
    if let Some(&t) = tr.tangencies.first() {
        if tr.roots.len() < 2 {
            return PairOutcome::Degenerate { theta_prime: t };
        }
    }
    if tr.roots.len() < 2 {
        return PairOutcome::NoPair { roots: tr.roots };
    }
    let best = tr
        .roots
        .windows(2)
        .map(|w| tracer.pair(theta, w[0], w[1]))
        .min_by(|x, y| x.delta_ell.total_cmp(&y.delta_ell))
        .expect("at least two roots");
    PairOutcome::Pair(best)
}
