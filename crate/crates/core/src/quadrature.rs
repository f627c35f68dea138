//! Finite-interval adaptive quadrature (21-point Gauss–Kronrod with global
//! bisection) and Wynn's epsilon algorithm for accelerating partial sums of
//! oscillatory tails.

use crate::error::Result;
use crate::numeric::CompensatedSum;

// Kronrod abscissae on [0, 1]; odd indices are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_980_479,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// Result of a single fixed-rule or adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    /// False when the subdivision limit was hit before the tolerance.
    pub converged: bool,
}

/// One application of the 21-point Kronrod rule with its embedded 10-point
/// Gauss rule. Returns (integral, error estimate).
pub fn gauss_kronrod_21<F>(f: &F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut res_k = WGK[10] * fc;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok((value, err))
}

/// Globally adaptive integration of `f` over [a, b]: repeatedly bisect the
/// interval with the largest error estimate until the summed estimate is
/// below max(abs_tol, rel_tol·|I|) or `max_intervals` is reached.
pub fn integrate<F>(f: &F, a: f64, b: f64, abs_tol: f64, rel_tol: f64, max_intervals: usize) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64>,
{
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            converged: true,
        });
    }
    let (v, e) = gauss_kronrod_21(f, a, b)?;
    // (lo, hi, value, error)
    let mut intervals = vec![(a, b, v, e)];
    loop {
        let mut total = CompensatedSum::new();
        let mut err = 0.0;
        let mut worst = 0;
        for (i, iv) in intervals.iter().enumerate() {
            total.add(iv.2);
            err += iv.3;
            if iv.3 > intervals[worst].3 {
                worst = i;
            }
        }
        let value = total.value();
        if err <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(QuadResult {
                value,
                error: err,
                converged: true,
            });
        }
        let (lo, hi, _, _) = intervals[worst];
        let mid = 0.5 * (lo + hi);
        if intervals.len() >= max_intervals || mid <= lo || mid >= hi {
            return Ok(QuadResult {
                value,
                error: err,
                converged: false,
            });
        }
        let (v1, e1) = gauss_kronrod_21(f, lo, mid)?;
        let (v2, e2) = gauss_kronrod_21(f, mid, hi)?;
        intervals[worst] = (lo, mid, v1, e1);
        intervals.push((mid, hi, v2, e2));
    }
}

/// Wynn's epsilon algorithm applied to the whole sequence of partial sums.
///
/// Returns the estimate from the highest even column that could be formed,
/// or `None` for sequences shorter than three terms. Columns stop growing
/// once successive differences vanish to rounding level.
pub fn wynn_epsilon(partial_sums: &[f64]) -> Option<f64> {
    let n = partial_sums.len();
    if n < 3 {
        return None;
    }
    // prev = column k-1, cur = column k
    let mut prev = vec![0.0; n + 1];
    let mut cur: Vec<f64> = partial_sums.to_vec();
    let mut best = *partial_sums.last().unwrap();
    let mut k = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for j in 0..cur.len() - 1 {
            let diff = cur[j + 1] - cur[j];
            let scale = cur[j + 1].abs().max(cur[j].abs());
            if diff.abs() <= 4.0 * f64::EPSILON * scale {
                return Some(if k % 2 == 0 { cur[j + 1] } else { best });
            }
            next.push(prev[j + 1] + 1.0 / diff);
        }
        prev = cur;
        cur = next;
        k += 1;
        if k % 2 == 0 {
            let v = *cur.last().unwrap();
            if !v.is_finite() {
                return Some(best);
            }
            best = v;
        }
    }
    Some(best)
}
