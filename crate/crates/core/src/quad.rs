//! Adaptive Gauss–Kronrod quadrature.
//!
//! A 15-point Kronrod rule with its embedded 7-point Gauss rule gives both
//! the estimate and the error bound on each segment. The segment with the
//! largest error is bisected until the global tolerance is met. Segments are
//! summed in left-to-right order so repeated calls are bit-reproducible.

use crate::error::{Error, Result};

/// Kronrod abscissae on [-1, 1]; odd indices are also the Gauss nodes.
#[allow(clippy::excessive_precision)]
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

#[allow(clippy::excessive_precision)]
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

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Maximum bisection depth of any single segment.
pub const MAX_DEPTH: u32 = 50;
/// Maximum number of live segments.
pub const MAX_SEGMENTS: usize = 4000;

/// Integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub subdivisions: usize,
}

impl QuadratureResult {
    /// Multiplies value and error bound by a constant factor.
    pub fn scaled(self, factor: f64) -> Self {
        QuadratureResult {
            value: self.value * factor,
            abs_error_estimate: self.abs_error_estimate * factor.abs(),
            subdivisions: self.subdivisions,
        }
    }
}

/// Accept when `error <= max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel }
    }

    pub fn bound(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

struct Rule {
    value: f64,
    error: f64,
}

fn gauss_kronrod_15<F>(f: &mut F, a: f64, b: f64) -> Result<Rule>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = checked(f, center)?;
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = checked(f, center - dx)?;
        let f2 = checked(f, center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Rule { value, error })
}

fn checked<F>(f: &mut F, x: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let y = f(x)?;
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::Domain {
            node: "integrand".into(),
            reason: format!("non-finite value {y} at x = {x}"),
        })
    }
}

/// Integrates `f` over `[a, b]` to the requested tolerance.
///
/// `a > b` is allowed and flips the sign. A degenerate interval returns an
/// exact zero with one (empty) subdivision.
pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::param("interval", format!("[{a}, {b}] is not finite")));
    }
    if a == b {
        return Ok(QuadratureResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            subdivisions: 1,
        });
    }
    if a > b {
        return integrate(f, b, a, tol).map(|r| r.scaled(-1.0));
    }

    let first = gauss_kronrod_15(&mut f, a, b)?;
    let mut segments = vec![Segment {
        a,
        b,
        value: first.value,
        error: first.error,
        depth: 0,
    }];

    loop {
        let (value, error) = totals(&segments);
        if error <= tol.bound(value) {
            return Ok(finish(segments));
        }
        // Worst segment that can still be split.
        let worst = segments
            .iter()
            .enumerate()
            .filter(|(_, s)| s.depth < MAX_DEPTH && s.b - s.a > 4.0 * f64::EPSILON * s.a.abs().max(s.b.abs()))
            .max_by(|(_, x), (_, y)| x.error.total_cmp(&y.error))
            .map(|(i, _)| i);
        let Some(idx) = worst else {
            return Err(Error::ToleranceNotMet(finish(segments)));
        };
        if segments.len() >= MAX_SEGMENTS {
            return Err(Error::ToleranceNotMet(finish(segments)));
        }
        let seg = segments[idx];
        let mid = 0.5 * (seg.a + seg.b);
        let left = gauss_kronrod_15(&mut f, seg.a, mid)?;
        let right = gauss_kronrod_15(&mut f, mid, seg.b)?;
        segments[idx] = Segment {
            a: seg.a,
            b: mid,
            value: left.value,
            error: left.error,
            depth: seg.depth + 1,
        };
        segments.push(Segment {
            a: mid,
            b: seg.b,
            value: right.value,
            error: right.error,
            depth: seg.depth + 1,
        });
    }
}

fn totals(segments: &[Segment]) -> (f64, f64) {
    let value = segments.iter().map(|s| s.value).sum();
    let error = segments.iter().map(|s| s.error).sum();
    (value, error)
}

fn finish(mut segments: Vec<Segment>) -> QuadratureResult {
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = neumaier_sum(segments.iter().map(|s| s.value));
    let abs_error_estimate = segments.iter().map(|s| s.error).sum();
    QuadratureResult {
        value,
        abs_error_estimate,
        subdivisions: segments.len(),
    }
}

/// Compensated summation (Neumaier's variant of Kahan).
pub(crate) fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
