//! Determinant formulas for families of nonintersecting paths on the cylinder.
//!
//! The signed generating function is `det(q(M, N, a_i, e_j; x, y))`, the sign
//! of a family being that of its endpoint permutation. On even cylinders the
//! permutations are powers of the full cycle, and substituting
//! `y := (-1)^(r-1)` turns the signed weights into unsigned ones.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{FromPrimitive, ToPrimitive};

use crate::error::{Error, Result};
use crate::genfunc::q_poly;
use crate::lattice::{family_signature, validate_config, CylinderConfig, FamilyEnumeration};
use crate::laurent::LaurentPoly2;
use crate::linalg::{det_complex, det_exact, ComplexMatrix, PolyMatrix};
use crate::numeric::{cos_turns, i_power, log_power_sum, unit_root};

/// `e^{2πi·num/den}` with the numerator reduced exactly first.
fn root(num: i64, den: i64) -> Complex64 {
    unit_root(num.rem_euclid(den) as f64 / den as f64)
}

/// `(-1)^(r-1)`.
pub fn unsigned_y(r: usize) -> i8 {
    if r % 2 == 1 {
        1
    } else {
        -1
    }
}

/// The matrix `(q(M, N, a_i, e_j))`.
pub fn lgv_matrix(config: &CylinderConfig) -> PolyMatrix {
    let (m, n) = (config.m(), config.n());
    PolyMatrix::from_fn(config.r(), |i, j| {
        q_poly(m, n, config.starts()[i], config.ends()[j]).expect("validated cylinder")
    })
    .expect("validated dimensions")
}

pub fn signed_gf_det(config: &CylinderConfig) -> LaurentPoly2 {
    det_exact(&lgv_matrix(config))
}

/// The determinant with `y := (-1)^(r-1)` substituted into the entries.
///
/// This counts families with unsigned weights whenever every endpoint
/// permutation is a power of the full cycle, which always holds for even `M`.
/// On odd cylinders with an even number of walkers, families whose
/// permutation is not cyclic still carry their sign here.
pub fn unsigned_count_gf(config: &CylinderConfig) -> LaurentPoly2 {
    let y = unsigned_y(config.r());
    det_exact(&lgv_matrix(config).map(|q| q.substitute_y(y)))
}

/// The trigonometric form of [`unsigned_count_gf`] evaluated at real `x`.
pub fn trig_gf_det(config: &CylinderConfig, x: f64) -> Complex64 {
    let (m, n, r) = (config.m(), config.n(), config.r() as i64);
    let x = Complex64::new(x, 0.0);
    let matrix = ComplexMatrix::from_fn(config.r(), |i, j| {
        let (a, e) = (config.starts()[i], config.ends()[j]);
        let sum: Complex64 = (0..m)
            .map(|l| {
                let step = x * root(-(2 * l + r - 1), 2 * m) + root(2 * l + r - 1, 2 * m);
                root(-(e - a) * l, m) * step.powi(n as i32)
            })
            .sum();
        root((r - 1) * (a - e), 2 * m) * sum
    });
    det_complex(&matrix) / (m as f64).powi(r as i32)
}

/// The equidistant trigonometric form for starting points `a_i = iν` on the
/// `(rν)`-cylinder, evaluated at real `x`. The branch is chosen by the parity
/// of `r`.
pub fn equidistant_trig_det(r: usize, nu: u32, ends: &[i64], n: u32, x: f64) -> Result<Complex64> {
    if ends.len() != r {
        return Err(Error::DimensionMismatch {
            expected: r,
            got: ends.len(),
        });
    }
    let (ri, nu, n) = (r as i64, nu as i64, n as i64);
    let m = ri * nu;
    let starts: Vec<i64> = (0..ri).map(|i| i * nu).collect();
    validate_config(m, n, &starts, ends)?;

    let x = Complex64::new(x, 0.0);
    let even = r.is_multiple_of(2);
    let matrix = ComplexMatrix::from_fn(r, |i, j| {
        let e = ends[j];
        (0..nu)
            .map(|a| {
                let s = i as i64 + a * ri;
                let (phase, step) = if even {
                    (root(n - e * (2 * s + 1), 2 * m), x * root(-(s + 1), m) + root(s, m))
                } else {
                    (root(-e * s, m), x * root(-s, m) + root(s, m))
                };
                phase * step.powi(n as i32)
            })
            .sum()
    });
    let k = if even {
        ri * (ri - 1) / 2
    } else {
        (ri + 2) * (ri - 1) / 2
    };
    let scale = (nu as f64 * (r as f64).sqrt()).powi(r as i32);
    Ok(i_power(-k) * det_complex(&matrix) / scale)
}

/// `log Z(N, r, ν)` from the cosine-product closed form, in log space.
///
/// No parity check is made here; a nonpositive inner sum (possible for odd `N`)
/// is reported as `InvalidCount`.
pub fn z_log_closed_form(n: u32, r: u32, nu: u32) -> Result<f64> {
    if r == 0 || nu == 0 {
        return Err(Error::BadCylinder {
            m: r as i64 * nu as i64,
            n: n as i64,
        });
    }
    let (r64, nu64) = (r as i64, nu as i64);
    // cos(2π((m + ε)/(νr) + l/ν)) = cos(2π·(2m + 2ε + 2lr) / (2νr))
    let eps2 = if r.is_multiple_of(2) { 1 } else { 0 };
    let den = 2 * nu64 * r64;
    let mut total = r as f64 * (n as f64 * std::f64::consts::LN_2 - (nu as f64).ln());
    let mut cosines = Vec::with_capacity(nu as usize);
    for m in 0..r64 {
        cosines.clear();
        cosines.extend((0..nu64).map(|l| {
            let num = (2 * m + eps2 + 2 * l * r64).rem_euclid(den);
            cos_turns(num as f64 / den as f64, 0.0)
        }));
        total += log_power_sum(&cosines, n).ok_or_else(|| {
            Error::InvalidCount(format!(
                "cosine power sum for m={m} is not positive (N={n}, r={r}, ν={nu})"
            ))
        })?;
    }
    Ok(total)
}

/// The closed form and the determinant count of `Z(N, r, ν)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZCountResult {
    pub n: u32,
    pub r: u32,
    pub nu: u32,
    pub closed_form_value: f64,
    pub rounded: BigInt,
    pub exact: BigInt,
    pub methods_agree: bool,
}

impl ZCountResult {
    /// `|closed - exact| / max(1, exact)`.
    pub fn relative_error(&self) -> f64 {
        let exact = self.exact.to_f64().unwrap_or(f64::INFINITY);
        (self.closed_form_value - exact).abs() / exact.abs().max(1.0)
    }
}

/// The equidistant instance `a_i = e_i = iν` on the `(rν)`-cylinder.
pub fn equidistant_config(n: u32, r: u32, nu: u32) -> Result<CylinderConfig> {
    let points: Vec<i64> = (0..r as i64).map(|i| i * nu as i64).collect();
    validate_config(r as i64 * nu as i64, n as i64, &points, &points)
}

pub fn z_closed_form(n: u32, r: u32, nu: u32) -> Result<f64> {
    equidistant_config(n, r, nu)?;
    Ok(z_log_closed_form(n, r, nu)?.exp())
}

/// `Z(N, r, ν)` as the unsigned determinant at `x = 1`.
pub fn z_exact(n: u32, r: u32, nu: u32) -> Result<BigInt> {
    Ok(unsigned_count_gf(&equidistant_config(n, r, nu)?).value_at_one())
}

pub fn z_count(n: u32, r: u32, nu: u32) -> Result<ZCountResult> {
    let closed_form_value = z_closed_form(n, r, nu)?;
    let exact = z_exact(n, r, nu)?;
    let rounded = BigInt::from_f64(closed_form_value.round())
        .ok_or_else(|| Error::InvalidCount(format!("closed form {closed_form_value} is not finite")))?;
    let exact_f = exact.to_f64().unwrap_or(f64::INFINITY);
    let methods_agree = (closed_form_value - exact_f).abs() < 0.5 && rounded == exact;
    Ok(ZCountResult {
        n,
        r,
        nu,
        closed_form_value,
        rounded,
        exact,
        methods_agree,
    })
}

/// The coefficient of `y^c` in the signed determinant: the signed generating
/// function of families whose offsets sum to `c`.
pub fn gk_coefficient(config: &CylinderConfig, c: i64) -> LaurentPoly2 {
    signed_gf_det(config).coefficient_of_y(c)
}

/// Unsigned generating functions of enumerated families, grouped by cyclic
/// shift `p`. Requires the enumeration to have kept its families.
pub fn families_by_shift(
    enumeration: &FamilyEnumeration,
    config: &CylinderConfig,
) -> Result<BTreeMap<i64, LaurentPoly2>> {
    let mut groups: BTreeMap<i64, LaurentPoly2> = BTreeMap::new();
    for family in &enumeration.families {
        let sig = family_signature(family, config)?;
        *groups.entry(sig.p).or_default() += &LaurentPoly2::monomial(1, family.x_exponent(), family.offset_sum());
    }
    Ok(groups)
}
