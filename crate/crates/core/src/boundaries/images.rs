//! Image-point sums for Neumann boundaries.
//!
//! For an impenetrable boundary every image enters with sign +1, and the
//! renormalized variance at the field point is proportional to
//! `sum_images 1 / d_i^4`, where `d_i` is the distance from the field point
//! to image `i`. Finite families are summed exactly; infinite families are
//! summed shell by shell with a sandwich bound on the remainder.

use std::f64::consts::PI;

use serde::Serialize;

use crate::numerics::NeumaierSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ImageGenerator {
    /// Generated by reflections in the boundary planes (planes, slabs, wedges).
    Reflection,
    /// Generated by rotations about an axis (conical space).
    Rotation,
    /// Generated by lattice translations (periodic box).
    TranslationLattice,
}

/// One image: its distance to the field point and its sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Image {
    pub distance: f64,
    pub sign: f64,
}

impl Image {
    pub fn neumann(distance: f64) -> Self {
        Image { distance, sign: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ImageFamily {
    /// Explicit list; never truncated.
    Finite(Vec<Image>),
    /// Slab of width `a`, field point at `z`: images at `2|n| a` (n != 0)
    /// and `2|n a - z|` for all integers `n`.
    Slab { a: f64, z: f64 },
    /// Rectangular lattice of periods `lengths`, origin excluded.
    Lattice3 { lengths: [f64; 3] },
}

/// An enumerable collection of images with truncation metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImageSet {
    pub kind: ImageGenerator,
    pub family: ImageFamily,
    /// Radius (m) out to which images were summed in the last evaluation.
    pub truncation_radius: f64,
    /// Bound on `sum 1/d^4` (m^-4) over the images beyond the truncation radius.
    pub tail_bound: f64,
}

/// Result of summing `1/d^4` over an image set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InverseFourthSum {
    /// Partial sum plus the midpoint of the tail sandwich, m^-4.
    pub value: f64,
    /// Half-width of the tail sandwich plus rounding, m^-4.
    pub abs_error: f64,
    pub truncation_radius: f64,
    pub converged: bool,
    pub images_summed: u64,
}

impl ImageSet {
    pub fn finite(kind: ImageGenerator, images: Vec<Image>) -> Self {
        ImageSet {
            kind,
            family: ImageFamily::Finite(images),
            truncation_radius: f64::INFINITY,
            tail_bound: 0.0,
        }
    }

    pub fn slab(a: f64, z: f64) -> Self {
        ImageSet {
            kind: ImageGenerator::Reflection,
            family: ImageFamily::Slab { a, z },
            truncation_radius: 0.0,
            tail_bound: f64::INFINITY,
        }
    }

    pub fn lattice(lengths: [f64; 3]) -> Self {
        let mut lengths = lengths;
        lengths.sort_by(f64::total_cmp);
        ImageSet {
            kind: ImageGenerator::TranslationLattice,
            family: ImageFamily::Lattice3 { lengths },
            truncation_radius: 0.0,
            tail_bound: f64::INFINITY,
        }
    }

    /// Natural length unit of the family, used to start the shell schedule.
    fn unit(&self) -> f64 {
        match &self.family {
            ImageFamily::Finite(_) => 1.0,
            ImageFamily::Slab { a, .. } => 2.0 * a,
            ImageFamily::Lattice3 { lengths } => lengths[0],
        }
    }

    /// Sums every image with distance at most `radius` and brackets the rest.
    pub fn sum_to_radius(&self, radius: f64) -> InverseFourthSum {
        match &self.family {
            ImageFamily::Finite(images) => {
                let value: NeumaierSum = images.iter().map(|im| im.sign / im.distance.powi(4)).collect();
                InverseFourthSum {
                    value: value.value(),
                    abs_error: 0.0,
                    truncation_radius: f64::INFINITY,
                    converged: true,
                    images_summed: images.len() as u64,
                }
            }
            ImageFamily::Slab { a, z } => slab_sum(*a, *z, (radius / (2.0 * a)).floor() as i64),
            ImageFamily::Lattice3 { lengths } => {
                let mut shells = ShellSum::new(*lengths);
                shells.extend_to(radius);
                shells.result()
            }
        }
    }

    /// Doubles the truncation radius until the tail bound falls below
    /// `rel_tol` times the value or `max_images` would be exceeded, then
    /// records the truncation metadata on the set.
    pub fn evaluate(&mut self, rel_tol: f64, max_images: u64) -> InverseFourthSum {
        let result = match &self.family {
            ImageFamily::Finite(_) => self.sum_to_radius(f64::INFINITY),
            ImageFamily::Slab { a, z } => {
                let (a, z) = (*a, *z);
                let mut n = 8i64;
                loop {
                    let r = slab_sum(a, z, n);
                    let next_cost = 3 * (2 * n as u64 + 1);
                    if r.abs_error <= rel_tol * r.value.abs() || next_cost > max_images {
                        break InverseFourthSum {
                            converged: r.abs_error <= rel_tol * r.value.abs(),
                            ..r
                        };
                    }
                    n *= 2;
                }
            }
            ImageFamily::Lattice3 { lengths } => {
                let lengths = *lengths;
                let volume = lengths.iter().product::<f64>();
                let mut shells = ShellSum::new(lengths);
                let mut radius = 8.0 * self.unit();
                loop {
                    shells.extend_to(radius);
                    let r = shells.result();
                    let next_radius = 2.0 * radius;
                    let next_cost = 4.0 / 3.0 * PI * next_radius.powi(3) / volume;
                    if r.abs_error <= rel_tol * r.value.abs() || next_cost > max_images as f64 {
                        break InverseFourthSum {
                            converged: r.abs_error <= rel_tol * r.value.abs(),
                            ..r
                        };
                    }
                    radius = next_radius;
                }
            }
        };
        self.truncation_radius = result.truncation_radius;
        self.tail_bound = result.abs_error;
        result
    }
}

/// Slab images with `|n| <= n_max`, plus the tail sandwich for `|n| > n_max`.
fn slab_sum(a: f64, z: f64, n_max: i64) -> InverseFourthSum {
    let n_max = n_max.max(1);
    let x = z / a;
    // In units of 1/(16 a^4): terms n^-4 (twice, n >= 1) and (n - x)^-4 (all n).
    let mut sum = NeumaierSum::new();
    sum.add(x.powi(-4));
    for n in 1..=n_max {
        let nf = n as f64;
        sum.add(2.0 * nf.powi(-4));
        sum.add((nf - x).powi(-4));
        sum.add((nf + x).powi(-4));
    }
    // Decreasing f on [N, inf): int_{N+1} f <= sum_{n>N} f(n) <= int_N f, int_M^inf (n+c)^-4 = (M+c)^-3 / 3.
    let nf = n_max as f64;
    let tail_int = |m: f64, c: f64| (m + c).powi(-3) / 3.0;
    let upper = 2.0 * tail_int(nf, 0.0) + tail_int(nf, -x) + tail_int(nf, x);
    let lower = 2.0 * tail_int(nf + 1.0, 0.0) + tail_int(nf + 1.0, -x) + tail_int(nf + 1.0, x);
    let scale = 1.0 / (16.0 * a.powi(4));
    let partial = sum.value();
    InverseFourthSum {
        value: scale * (partial + 0.5 * (upper + lower)),
        abs_error: scale * (0.5 * (upper - lower) + 4.0 * f64::EPSILON * partial),
        truncation_radius: 2.0 * a * nf,
        converged: true,
        images_summed: 3 * n_max as u64 + 1,
    }
}

/// Incremental ball sum over a rectangular lattice.
///
/// Each call to [`ShellSum::extend_to`] adds the annulus between the previous
/// and the new radius, summed in lexicographic index order; annuli are
/// accumulated in radius order, so results are reproducible bit for bit.
#[derive(Debug, Clone)]
pub struct ShellSum {
    lengths: [f64; 3],
    radius: f64,
    total: NeumaierSum,
    count: u64,
}

impl ShellSum {
    pub fn new(lengths: [f64; 3]) -> Self {
        ShellSum {
            lengths,
            radius: 0.0,
            total: NeumaierSum::new(),
            count: 0,
        }
    }

    pub fn extend_to(&mut self, radius: f64) {
        if radius <= self.radius {
            return;
        }
        let [l1, l2, l3] = self.lengths;
        let inner2 = self.radius * self.radius;
        let outer2 = radius * radius;
        let max_i = (radius / l1).floor() as i64;
        let max_j = (radius / l2).floor() as i64;
        let mut shell = NeumaierSum::new();
        for i in -max_i..=max_i {
            let ci = (i as f64 * l1).powi(2);
            if ci > outer2 {
                continue;
            }
            for j in -max_j..=max_j {
                let c = ci + (j as f64 * l2).powi(2);
                if c > outer2 {
                    continue;
                }
                let n_out = max_index(c, outer2, l3);
                let n_in = if c <= inner2 { max_index(c, inner2, l3) } else { -1 };
                for n in -n_out..=n_out {
                    if n.abs() <= n_in {
                        continue;
                    }
                    if i == 0 && j == 0 && n == 0 {
                        continue;
                    }
                    let d2 = c + (n as f64 * l3).powi(2);
                    shell.add(1.0 / (d2 * d2));
                    self.count += 1;
                }
            }
        }
        self.total.add(shell.value());
        self.radius = radius;
    }

    /// Partial sum plus the midpoint of the tail sandwich.
    ///
    /// Each lattice point owns the cell of volume `V` centred on it, and
    /// every point of that cell lies within the half-diagonal `h` of it.
    /// Comparing `|x|^-4` with `(|y| -/+ h)^-4` over those cells bounds the
    /// remainder between `(4 pi / V) F(R + 2h, -h)` and
    /// `(4 pi / V) F(R - 2h, +h)`, `F(u, s) = 1/u + s/u^2 + s^2/(3 u^3)`.
    pub fn result(&self) -> InverseFourthSum {
        let [l1, l2, l3] = self.lengths;
        let volume = l1 * l2 * l3;
        let h = 0.5 * (l1 * l1 + l2 * l2 + l3 * l3).sqrt();
        let r = self.radius;
        let f = |u: f64, s: f64| 1.0 / u + s / (u * u) + s * s / (3.0 * u * u * u);
        let lower = 4.0 * PI / volume * f(r + 2.0 * h, -h);
        let upper = if r > 2.0 * h {
            4.0 * PI / volume * f(r - 2.0 * h, h)
        } else {
            f64::INFINITY
        };
        let partial = self.total.value();
        InverseFourthSum {
            value: partial + 0.5 * (lower + upper),
            abs_error: 0.5 * (upper - lower) + 4.0 * f64::EPSILON * partial,
            truncation_radius: r,
            converged: true,
            images_summed: self.count,
        }
    }
}

/// Largest `n >= 0` with `c + (n l)^2 <= r2`, assuming `c <= r2`.
fn max_index(c: f64, r2: f64, l: f64) -> i64 {
    let mut n = ((r2 - c).max(0.0).sqrt() / l).floor() as i64;
    while c + ((n + 1) as f64 * l).powi(2) <= r2 {
        n += 1;
    }
    while n > 0 && c + (n as f64 * l).powi(2) > r2 {
        n -= 1;
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slab_matches_trigonometric_identity() {
        // sum_n (n + x)^-4 = pi^4 (3 - 2 sin^2 pi x) / (3 sin^4 pi x), sum_{n != 0} n^-4 = pi^4 / 45.
        let (a, z) = (1.0, 0.3);
        let s = (PI * z).sin().powi(2);
        let exact = (PI.powi(4) / 45.0 + PI.powi(4) * (3.0 - 2.0 * s) / (3.0 * s * s)) / 16.0;
        let mut set = ImageSet::slab(a, z);
        let r = set.evaluate(1e-12, u64::MAX);
        assert!(r.converged);
        assert!(((r.value - exact) / exact).abs() < 1e-12, "{r:?} vs {exact}");
        assert!((r.value - exact).abs() <= r.abs_error + 1e-15 * exact);
    }

    #[test]
    fn slab_sandwich_brackets_exact_value() {
        let (a, z) = (2.0, 0.5);
        let x = z / a;
        let s = (PI * x).sin().powi(2);
        let exact = (PI.powi(4) / 45.0 + PI.powi(4) * (3.0 - 2.0 * s) / (3.0 * s * s)) / (16.0 * a.powi(4));
        for n in [1, 2, 5, 20] {
            let r = slab_sum(a, z, n);
            assert!((r.value - exact).abs() <= r.abs_error, "n={n}: {r:?} vs {exact}");
        }
    }

    #[test]
    fn shell_sum_is_incremental() {
        let mut once = ShellSum::new([1.0, 1.2, 1.5]);
        once.extend_to(20.0);
        let mut stepped = ShellSum::new([1.0, 1.2, 1.5]);
        for r in [2.5, 5.0, 10.0, 20.0] {
            stepped.extend_to(r);
        }
        assert_eq!(once.count, stepped.count);
        let (a, b) = (once.result().value, stepped.result().value);
        assert!(((a - b) / a).abs() < 1e-14);
    }

    #[test]
    fn shell_count_matches_brute_force() {
        let l = [1.0, 1.3, 0.7];
        let r = 6.0f64;
        let mut brute = 0u64;
        for i in -10i64..=10 {
            for j in -10i64..=10 {
                for k in -10i64..=10 {
                    let d2 = (i as f64 * l[0]).powi(2) + (j as f64 * l[1]).powi(2) + (k as f64 * l[2]).powi(2);
                    if d2 > 0.0 && d2 <= r * r {
                        brute += 1;
                    }
                }
            }
        }
        let mut shells = ShellSum::new(l);
        shells.extend_to(3.0);
        shells.extend_to(r);
        assert_eq!(shells.count, brute);
    }

    #[test]
    fn lattice_tail_bound_is_sound() {
        // Reference from a much larger radius; its own bound is ~60x smaller.
        let l = [1.0, 1.0, 1.0];
        let reference = ImageSet::lattice(l).sum_to_radius(128.0);
        for radius in [8.0, 16.0] {
            let r = ImageSet::lattice(l).sum_to_radius(radius);
            assert!(
                (r.value - reference.value).abs() <= r.abs_error + reference.abs_error,
                "radius {radius}: {r:?} vs {reference:?}"
            );
        }
    }
}
