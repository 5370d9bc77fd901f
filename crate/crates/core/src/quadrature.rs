//! Globally adaptive Gauss–Kronrod (10/21 point) integration.
//!
//! Abscissae are handed to the integrand as an anchor plus a small offset.
//! Every interval is anchored at the nearer endpoint of its breakpoint
//! segment, so an integrand with a singularity at a breakpoint can evaluate
//! `f(anchor + offset)` without losing the offset to cancellation.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};

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

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// A point `anchor + offset`, where `anchor` is a breakpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abscissa {
    pub anchor: f64,
    pub offset: f64,
}

impl Abscissa {
    pub fn value(&self) -> f64 {
        self.anchor + self.offset
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            abs_tol: 1e-10,
            rel_tol: 0.0,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    anchor: f64,
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: FnMut(Abscissa) -> f64>(f: &mut F, anchor: f64, lo: f64, hi: f64) -> Result<Piece> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut eval = |offset: f64| -> Result<f64> {
        let v = f(Abscissa { anchor, offset });
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::QuadratureFailure(format!(
                "integrand is {v} at {}",
                anchor + offset
            )))
        }
    };

    let fc = eval(center)?;
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let (f1, f2) = (eval(center - dx)?, eval(center + dx)?);
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
    let scale = half.abs();
    let (value, res_abs, res_asc) = (res_k * half, res_abs * scale, res_asc * scale);

    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Piece {
        anchor,
        lo,
        hi,
        value,
        error,
    })
}

/// Integrates `f` over `[breakpoints[0], breakpoints[last]]`. Breakpoints must
/// be increasing; each segment is split at its midpoint so that both halves
/// are anchored at a breakpoint.
pub fn integrate<F>(mut f: F, breakpoints: &[f64], options: QuadratureOptions) -> Result<Integral>
where
    F: FnMut(Abscissa) -> f64,
{
    if breakpoints.len() < 2
        || breakpoints
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(Ordering::Less))
    {
        return Err(Error::QuadratureFailure(format!(
            "breakpoints {breakpoints:?} must be increasing"
        )));
    }
    let mut heap = BinaryHeap::new();
    for w in breakpoints.windows(2) {
        let half = 0.5 * (w[1] - w[0]);
        heap.push(kronrod(&mut f, w[0], 0.0, half)?);
        heap.push(kronrod(&mut f, w[1], -half, 0.0)?);
    }
    loop {
        let value: f64 = heap.iter().map(|p| p.value).sum();
        let error: f64 = heap.iter().map(|p| p.error).sum();
        let target = options.abs_tol.max(options.rel_tol * value.abs());
        if error <= target {
            return Ok(Integral {
                value,
                error,
                intervals: heap.len(),
            });
        }
        if heap.len() >= options.max_intervals {
            return Err(Error::QuadratureFailure(format!(
                "error estimate {error:e} above {target:e} after {} intervals",
                heap.len()
            )));
        }
        let worst = heap.pop().expect("nonempty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            return Err(Error::QuadratureFailure(format!(
                "interval around {} cannot be subdivided further",
                worst.anchor + worst.lo
            )));
        }
        heap.push(kronrod(&mut f, worst.anchor, worst.lo, mid)?);
        heap.push(kronrod(&mut f, worst.anchor, mid, worst.hi)?);
    }
}
