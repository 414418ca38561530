//! Sequence acceleration.

/// An extrapolated limit with the residual between the last two estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolated {
    pub value: f64,
    pub residual: f64,
}

/// Richardson extrapolation to `h -> 0` of values with an expansion in even
/// powers of `h`, via Neville's scheme in `x = h^2`.
///
/// `residual` compares against the extrapolant that drops the coarsest sample.
pub fn richardson_even(h: &[f64], values: &[f64]) -> Extrapolated {
    assert_eq!(h.len(), values.len());
    assert!(!h.is_empty());
    let x: Vec<f64> = h.iter().map(|v| v * v).collect();
    let value = neville_at_zero(&x, values);
    if x.len() == 1 {
        return Extrapolated {
            value,
            residual: f64::INFINITY,
        };
    }
    // Extrapolant from the finest n-1 samples versus the full fit.
    let tail = neville_at_zero(&x[1..], &values[1..]);
    Extrapolated {
        value,
        residual: (value - tail).abs(),
    }
}

fn neville_at_zero(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let mut t = y.to_vec();
    for k in 1..n {
        for i in 0..n - k {
            t[i] = (x[i + k] * t[i] - x[i] * t[i + 1]) / (x[i + k] - x[i]);
        }
    }
    t[0]
}

/// Iterated averaging of consecutive partial sums (the Euler transform).
///
/// Each level is a convex combination of the one below, so rounding errors
/// are never amplified. Effective for alternating series whose terms vary
/// slowly in magnitude. `residual` compares the deepest estimate with the
/// latest estimate one level up.
pub fn iterated_mean(partial_sums: &[f64]) -> Extrapolated {
    let mut level = partial_sums.to_vec();
    let mut residual = f64::INFINITY;
    while level.len() > 1 {
        let next: Vec<f64> = level.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        if next.len() == 1 {
            residual = (next[0] - level[1]).abs();
        }
        level = next;
    }
    Extrapolated {
        value: level.first().copied().unwrap_or(0.0),
        residual,
    }
}
