//! Adaptive Gauss–Kronrod integration of complex-valued functions of one real
//! variable, plus the `u = √(2m(V0 − E))` substitution that removes the
//! inverse-square-root endpoint behaviour of barrier integrals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phys::{Barrier, PhysicalParams};

mod oracle;

pub use oracle::{oracle_expectation_time, oracle_tunneling_time};

/// Tolerances for adaptive integration. The defaults are `rel 1e-9`, `abs 1e-12`,
/// 2000 subdivisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    rel_tol: f64,
    abs_tol: f64,
    max_subdivisions: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self { rel_tol: 1e-9, abs_tol: 1e-12, max_subdivisions: 2000 }
    }
}

impl QuadratureSettings {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol.is_finite()) {
            return Err(Error::invalid(format!("rel_tol must be > 0, got {rel_tol}")));
        }
        if !(abs_tol > 0.0 && abs_tol.is_finite()) {
            return Err(Error::invalid(format!("abs_tol must be > 0, got {abs_tol}")));
        }
        if max_subdivisions == 0 {
            return Err(Error::invalid("max_subdivisions must be at least 1"));
        }
        Ok(Self { rel_tol, abs_tol, max_subdivisions })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    pub fn max_subdivisions(&self) -> usize {
        self.max_subdivisions
    }

    fn target(&self, value: Complex64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.norm())
    }
}

/// Integral value with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
    pub subdivisions: usize,
}

// 21-point Kronrod abscissae on [-1, 1] (non-negative half, centre last) and
// weights, with the embedded 10-point Gauss weights for the odd-indexed nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_067_138_463,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod_21<F>(f: &F, a: f64, b: f64) -> Result<Segment>
where
    F: Fn(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let f_center = f(center);
    let mut kronrod = f_center * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut res_abs = f_center.norm() * WGK[10];
    let mut samples = [(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 10];

    for (j, sample) in samples.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let lo = f(center - dx);
        let hi = f(center + dx);
        kronrod += (lo + hi) * WGK[j];
        res_abs += (lo.norm() + hi.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (lo + hi) * WG[j / 2];
        }
        *sample = (lo, hi);
    }

    let mean = kronrod * 0.5;
    let mut res_asc = (f_center - mean).norm() * WGK[10];
    for (j, (lo, hi)) in samples.iter().enumerate() {
        res_asc += ((lo - mean).norm() + (hi - mean).norm()) * WGK[j];
    }

    let value = kronrod * half;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::domain(format!("integrand is not finite on [{a}, {b}]")));
    }
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();

    // QUADPACK error scaling
    let mut error = ((kronrod - gauss) * half).norm();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }

    Ok(Segment { a, b, value, error })
}

/// Integrates `f` over `[a, b]` by adaptive bisection of the segment with the
/// largest error, until the summed error drops below `max(abs_tol, rel_tol·|I|)`.
///
/// When the subdivision budget runs out the call fails with
/// [`Error::NoConvergence`], which still carries the best estimate.
pub fn integrate_complex<F>(f: F, a: f64, b: f64, settings: &QuadratureSettings) -> Result<Estimate>
where
    F: Fn(f64) -> Complex64,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid(format!("integration limits must be finite, got [{a}, {b}]")));
    }
    if a > b {
        return Err(Error::invalid(format!("integration needs a <= b, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(Estimate { value: Complex64::new(0.0, 0.0), error: 0.0, subdivisions: 0 });
    }

    let mut heap = BinaryHeap::new();
    heap.push(gauss_kronrod_21(&f, a, b)?);
    // segments too narrow to bisect further
    let mut frozen: Vec<Segment> = Vec::new();
    let mut subdivisions = 0;

    loop {
        let (value, error) = totals(heap.iter().chain(frozen.iter()));
        if error <= settings.target(value) {
            return Ok(Estimate { value, error, subdivisions });
        }
        let worst = match heap.pop() {
            Some(s) if subdivisions < settings.max_subdivisions => s,
            other => {
                if let Some(s) = other {
                    heap.push(s);
                }
                return Err(Error::NoConvergence { estimate: value, error_bound: error, subdivisions });
            }
        };
        let mid = 0.5 * (worst.a + worst.b);
        let tiny = 100.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs()).max(f64::MIN_POSITIVE);
        if worst.b - worst.a <= tiny || mid <= worst.a || mid >= worst.b {
            frozen.push(worst);
            continue;
        }
        heap.push(gauss_kronrod_21(&f, worst.a, mid)?);
        heap.push(gauss_kronrod_21(&f, mid, worst.b)?);
        subdivisions += 1;
    }
}

fn totals<'a>(segments: impl Iterator<Item = &'a Segment>) -> (Complex64, f64) {
    segments.fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), s| (v + s.value, e + s.error))
}

/// Integrates over `[a, b]` split at the given interior points. Points outside
/// `(a, b)` are ignored. Each piece gets an equal share of the absolute tolerance.
pub fn integrate_piecewise<F>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    settings: &QuadratureSettings,
) -> Result<Estimate>
where
    F: Fn(f64) -> Complex64,
{
    let mut nodes = vec![a];
    let mut inner: Vec<f64> = breakpoints.iter().copied().filter(|&p| p > a && p < b).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    nodes.extend(inner);
    nodes.push(b);

    let pieces = nodes.len() - 1;
    let share = QuadratureSettings {
        abs_tol: settings.abs_tol / pieces as f64,
        ..*settings
    };
    let mut total = Estimate { value: Complex64::new(0.0, 0.0), error: 0.0, subdivisions: 0 };
    let mut failed = false;
    for w in nodes.windows(2) {
        let est = match integrate_complex(&f, w[0], w[1], &share) {
            Ok(est) => est,
            Err(Error::NoConvergence { estimate, error_bound, subdivisions }) => {
                failed = true;
                Estimate { value: estimate, error: error_bound, subdivisions }
            }
            Err(e) => return Err(e),
        };
        total.value += est.value;
        total.error += est.error;
        total.subdivisions += est.subdivisions;
    }
    if failed && total.error > settings.target(total.value) {
        return Err(Error::NoConvergence {
            estimate: total.value,
            error_bound: total.error,
            subdivisions: total.subdivisions,
        });
    }
    Ok(total)
}

/// Integrates over `[a, b]` where `f` may carry an inverse square-root
/// singularity at any of `branch_points`.
///
/// `[a, b]` is split at interior branch points. A piece whose end `e_b` is a
/// branch point is integrated as `∫ du 2u f(e_b ± u²)`, which is smooth; a
/// piece with branch points at both ends is halved first.
pub fn integrate_branch_points<F>(
    f: F,
    a: f64,
    b: f64,
    branch_points: &[f64],
    settings: &QuadratureSettings,
) -> Result<Estimate>
where
    F: Fn(f64) -> Complex64,
{
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::invalid(format!("integration needs finite a <= b, got [{a}, {b}]")));
    }
    let is_branch = |e: f64| branch_points.contains(&e);
    let mut nodes = vec![a];
    let mut inner: Vec<f64> = branch_points.iter().copied().filter(|&p| p > a && p < b).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    nodes.extend(inner);
    nodes.push(b);

    // (start, end, anchor): anchor = Some(e_b) maps the piece to u ∈ [0, √|end − start|]
    let mut pieces: Vec<(f64, f64, Option<f64>)> = Vec::new();
    for w in nodes.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if lo == hi {
            continue;
        }
        match (is_branch(lo), is_branch(hi)) {
            (true, true) => {
                let mid = 0.5 * (lo + hi);
                pieces.push((lo, mid, Some(lo)));
                pieces.push((mid, hi, Some(hi)));
            }
            (true, false) => pieces.push((lo, hi, Some(lo))),
            (false, true) => pieces.push((lo, hi, Some(hi))),
            (false, false) => pieces.push((lo, hi, None)),
        }
    }
    if pieces.is_empty() {
        return Ok(Estimate { value: Complex64::new(0.0, 0.0), error: 0.0, subdivisions: 0 });
    }

    let share = QuadratureSettings {
        abs_tol: settings.abs_tol / pieces.len() as f64,
        ..*settings
    };
    let mut total = Estimate { value: Complex64::new(0.0, 0.0), error: 0.0, subdivisions: 0 };
    let mut failed = false;
    for (lo, hi, anchor) in pieces {
        let result = match anchor {
            None => integrate_complex(&f, lo, hi, &share),
            Some(eb) => {
                let dir = if eb == lo { 1.0 } else { -1.0 };
                let span = (hi - lo).sqrt();
                integrate_complex(|u| f(eb + dir * u * u) * (2.0 * u), 0.0, span, &share)
            }
        };
        let est = match result {
            Ok(est) => est,
            Err(Error::NoConvergence { estimate, error_bound, subdivisions }) => {
                failed = true;
                Estimate { value: estimate, error: error_bound, subdivisions }
            }
            Err(e) => return Err(e),
        };
        total.value += est.value;
        total.error += est.error;
        total.subdivisions += est.subdivisions;
    }
    if failed && total.error > settings.target(total.value) {
        return Err(Error::NoConvergence {
            estimate: total.value,
            error_bound: total.error,
            subdivisions: total.subdivisions,
        });
    }
    Ok(total)
}

/// Computes `∫₀^{E_max} dE h(E)/√(2m(V0 − E))` through `u = √(2m(V0 − E))`,
/// i.e. as `(1/m)∫_{p_E}^{p_0} du h(V0 − u²/2m)`, which has no endpoint singularity.
pub fn integrate_sqrt_singular<H>(
    h: H,
    params: &PhysicalParams,
    barrier: &Barrier,
    e_max: f64,
    settings: &QuadratureSettings,
) -> Result<Estimate>
where
    H: Fn(f64) -> Complex64,
{
    let v0 = barrier.height();
    if !(e_max > 0.0 && e_max < v0) {
        return Err(Error::domain(format!("substitution needs 0 < E_max < V0, got E_max = {e_max}, V0 = {v0}")));
    }
    let m = params.mass();
    let p0 = (2.0 * m * v0).sqrt();
    let pe = (2.0 * m * (v0 - e_max)).sqrt();
    let est = integrate_complex(|u| h(v0 - u * u / (2.0 * m)) / m, pe, p0, settings)?;
    Ok(est)
}
