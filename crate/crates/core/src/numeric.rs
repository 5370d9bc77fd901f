//! Floating-point helpers shared by the trigonometric formulas and the
//! asymptotics: the complex tolerance policy, cosines measured in turns, and
//! log-domain sums of cosine powers.

use std::f64::consts::TAU;

use num_complex::Complex64;

/// Relative tolerance for complex comparisons: `|a - b| ≤ tol·max(1, |b|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub relative: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { relative: 1e-9 }
    }
}

impl Tolerance {
    pub fn new(relative: f64) -> Self {
        Tolerance { relative }
    }

    pub fn bound(&self, reference: Complex64) -> f64 {
        self.relative * reference.norm().max(1.0)
    }

    pub fn approx_eq(&self, value: Complex64, reference: Complex64) -> bool {
        (value - reference).norm() <= self.bound(reference)
    }

    /// Like [`approx_eq`](Self::approx_eq) with the magnitude floor raised to
    /// `scale`, for quantities whose rounding error tracks `scale` rather than
    /// the (possibly cancelled) reference value.
    pub fn approx_eq_scaled(&self, value: Complex64, reference: Complex64, scale: f64) -> bool {
        (value - reference).norm() <= self.relative * reference.norm().max(scale).max(1.0)
    }

    pub fn approx_eq_real(&self, value: f64, reference: f64) -> bool {
        self.approx_eq(Complex64::new(value, 0.0), Complex64::new(reference, 0.0))
    }
}

/// `e^{2πi·turns}`, exact at multiples of a quarter turn.
pub fn unit_root(turns: f64) -> Complex64 {
    let quarter = (4.0 * turns).round();
    let angle = TAU * (turns - quarter / 4.0);
    let (s, c) = angle.sin_cos();
    match (quarter as i64).rem_euclid(4) {
        0 => Complex64::new(c, s),
        1 => Complex64::new(-s, c),
        2 => Complex64::new(-c, -s),
        _ => Complex64::new(s, -c),
    }
}

/// `i^k`, exactly.
pub fn i_power(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `cos(2π(base + delta))` with exact quadrant reduction.
///
/// `base` is reduced against the nearest quarter turn before `delta` is added,
/// so a tiny `delta` next to a zero of the cosine keeps full relative accuracy.
pub fn cos_turns(base: f64, delta: f64) -> f64 {
    let quarter = (4.0 * (base + delta)).round();
    let frac = (base - quarter / 4.0) + delta;
    let angle = TAU * frac;
    match (quarter as i64).rem_euclid(4) {
        0 => angle.cos(),
        1 => -angle.sin(),
        2 => -angle.cos(),
        _ => angle.sin(),
    }
}

/// `log Σ_k c_k^n`, evaluated as `n·log max|c| + log Σ ±(|c_k|/max)^n`.
///
/// Returns `None` when the sum is not positive (all terms vanish, or odd `n`
/// makes it cancel to a nonpositive value).
pub fn log_power_sum(values: &[f64], n: u32) -> Option<f64> {
    if n == 0 {
        return Some((values.len() as f64).ln()).filter(|v| v.is_finite());
    }
    let max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max == 0.0 || !max.is_finite() {
        return None;
    }
    let scaled: f64 = values
        .iter()
        .map(|v| {
            let t = (v.abs() / max).powi(n as i32);
            if n % 2 == 1 && *v < 0.0 {
                -t
            } else {
                t
            }
        })
        .sum();
    (scaled > 0.0).then(|| n as f64 * max.ln() + scaled.ln())
}
