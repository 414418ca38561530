//! Globally adaptive Gauss-Kronrod (7, 15) quadrature on finite intervals.

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 0.0,
            rel_tol: 1e-10,
            max_intervals: 2000,
        }
    }
}

impl QuadOptions {
    pub fn rel(rel_tol: f64) -> Self {
        QuadOptions {
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Sum of |Kronrod - Gauss| over the final partition.
    pub abs_error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// One G7-K15 panel: returns (kronrod, |kronrod - gauss|).
pub fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]`, bisecting the worst segment until the
/// summed error estimate meets `max(abs_tol, rel_tol * |I|)`.
///
/// Segments are reduced in left-to-right order, so the result is
/// deterministic for a given function and tolerance.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> QuadResult {
    if a == b {
        return QuadResult {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
            converged: true,
        };
    }
    let (value, error) = gk15(&mut f, a, b);
    let mut segments = vec![Segment { a, b, value, error }];
    let mut evaluations = 15;
    loop {
        let (total, err) = totals(&segments);
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if err <= target {
            return QuadResult {
                value: total,
                abs_error: err,
                evaluations,
                converged: true,
            };
        }
        if segments.len() >= opts.max_intervals {
            return QuadResult {
                value: total,
                abs_error: err,
                evaluations,
                converged: false,
            };
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap();
        let seg = segments[worst];
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // Interval can no longer be split in binary64.
            return QuadResult {
                value: total,
                abs_error: err,
                evaluations,
                converged: false,
            };
        }
        let (lv, le) = gk15(&mut f, seg.a, mid);
        let (rv, re) = gk15(&mut f, mid, seg.b);
        evaluations += 30;
        segments[worst] = Segment {
            a: seg.a,
            b: mid,
            value: lv,
            error: le,
        };
        segments.insert(
            worst + 1,
            Segment {
                a: mid,
                b: seg.b,
                value: rv,
                error: re,
            },
        );
    }
}

fn totals(segments: &[Segment]) -> (f64, f64) {
    let mut value = super::NeumaierSum::new();
    let mut error = 0.0;
    for s in segments {
        value.add(s.value);
        error += s.error;
    }
    (value.value(), error)
}
