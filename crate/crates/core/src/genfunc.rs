//! Single-path generating functions on the `M`-cylinder.
//!
//! A path of length `N` from `(a, 0)` to `(e, N)` with `k` clockwise steps
//! winds `o` times around the cylinder, where `a + N - 2k = e + o·M`. Its
//! weight is `x^k·y^o`, so
//!
//! ```text
//! q(M, N, a, e; x, y) = Σ_o binom(N, k(o))·x^k(o)·y^o,   k(o) = (N - e - o·M + a) / 2,
//! ```
//!
//! summed over the finitely many offsets with `k(o)` integral in `[0, N]`.

use num_bigint::BigInt;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly2, Monomial};
use crate::numeric::unit_root;

/// `binom(n, k)` for `k = 0..=n`, by the multiplicative formula.
pub fn binomial_row(n: u32) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigInt::from(1);
    row.push(c.clone());
    for k in 0..n {
        c = c * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(c.clone());
    }
    row
}

fn check_cylinder(m: i64, n: i64) -> Result<u32> {
    if m < 1 {
        return Err(Error::BadCylinder { m, n });
    }
    if n < 0 {
        return Err(Error::NegativeLength(n));
    }
    u32::try_from(n).map_err(|_| Error::BadCylinder { m, n })
}

/// Offsets `o` for which `a + N - 2k = e + o·M` has a solution with `0 ≤ k ≤ N`.
pub fn offset_range(m: i64, n: i64, a: i64, e: i64) -> std::ops::RangeInclusive<i64> {
    let lo = -(e - a + n).div_euclid(m); // ceil((a - e - n) / m)
    let hi = (a - e + n).div_euclid(m);
    lo..=hi
}

/// The exact single-path generating function `q(M, N, a, e; x, y)`.
///
/// `M = 1` is accepted for formula testing. Any integer endpoint is allowed and
/// `q(M, N, a, e + M) = y⁻¹·q(M, N, a, e)` holds by construction.
pub fn q_poly(m: i64, n: i64, a: i64, e: i64) -> Result<LaurentPoly2> {
    let len = check_cylinder(m, n)?;
    let row = binomial_row(len);
    let mut q = LaurentPoly2::zero();
    for o in offset_range(m, n, a, e) {
        let twice_k = n - e - o * m + a;
        if twice_k.rem_euclid(2) != 0 {
            continue;
        }
        let k = twice_k / 2;
        debug_assert!((0..=n).contains(&k));
        q.add_term(Monomial::new(k as u32, o), row[k as usize].clone());
    }
    Ok(q)
}

/// The trigonometric form of `q(M, N, a, e; x, y)` for real `y > 0`, using
/// principal real roots of `y`.
pub fn q_trig(m: i64, n: i64, a: i64, e: i64, x: Complex64, y: f64) -> Result<Complex64> {
    let len = check_cylinder(m, n)?;
    if y.is_nan() || y <= 0.0 || y.is_infinite() {
        return Err(Error::NonpositiveY(y));
    }
    let mf = m as f64;
    let root = y.powf(1.0 / mf);
    let prefactor = y.powf((a - e) as f64 / mf) / mf;
    let sum: Complex64 = (0..m)
        .map(|l| {
            let phase = unit_root(-(((e - a) * l).rem_euclid(m) as f64) / mf);
            let w = unit_root(l as f64 / mf);
            let step = x / root * w.conj() + root * w;
            phase * step.powi(len as i32)
        })
        .sum();
    Ok(sum * prefactor)
}

/// `Σ_{l=0}^{M-1} e^{2πi·m·l/M}`, which is `M` when `M | m` and `0` otherwise.
pub fn roots_of_unity_powersum(modulus: i64, m: i64) -> i64 {
    assert!(modulus >= 1, "modulus must be positive");
    if m.rem_euclid(modulus) == 0 {
        modulus
    } else {
        0
    }
}

/// Checks the reflection `q(a, e; x, y) = x^N·q(e, a; 1/x, 1/y)` and the
/// translation `q(a, e) = y·q(a, e + M)` as exact polynomial identities.
pub fn verify_q_relations(m: i64, n: i64, a: i64, e: i64) -> Result<bool> {
    let len = check_cylinder(m, n)?;
    let forward = q_poly(m, n, a, e)?;
    let backward = q_poly(m, n, e, a)?;
    let reflected = LaurentPoly2::from_terms(backward.terms().map(|(mono, c)| (len - mono.x, -mono.y, c.clone())));
    let translated = q_poly(m, n, a, e + m)?.shift_y(1);
    Ok(forward == reflected && forward == translated)
}
