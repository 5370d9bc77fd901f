//! Bivariate Laurent polynomials `Σ c·x^k·y^o` with `k ≥ 0`, `o ∈ ℤ` and
//! arbitrary-precision integer coefficients.
//!
//! `x` counts clockwise steps, `y` tracks the winding offset of path endpoints.
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose derived order is
//! `(y, x)` ascending; that is also the canonical serialization order.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Exponent pair of a term. Field order matters: the derived `Ord` compares
/// `y` first, then `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub y: i64,
    pub x: u32,
}

impl Monomial {
    pub fn new(x: u32, y: i64) -> Self {
        Monomial { y, x }
    }
}

/// One serialized term. The coefficient is a decimal string so consumers
/// never overflow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TermRecord {
    pub xexp: u32,
    pub yexp: i64,
    pub coeff: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly2 {
    terms: BTreeMap<Monomial, BigInt>,
}

impl LaurentPoly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0, 0)
    }

    /// `c·x^x·y^y`.
    pub fn monomial(c: impl Into<BigInt>, x: u32, y: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::new(x, y), c.into());
        p
    }

    /// Builds a polynomial from `(x, y, coeff)` triples, merging duplicates.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (x, y, c) in terms {
            p.add_term(Monomial::new(x, y), c.into());
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical `(y, x)` ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &BigInt)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, x: u32, y: i64) -> BigInt {
        self.terms.get(&Monomial::new(x, y)).cloned().unwrap_or_default()
    }

    pub fn min_y(&self) -> Option<i64> {
        self.terms.keys().next().map(|m| m.y)
    }

    pub fn max_y(&self) -> Option<i64> {
        self.terms.keys().next_back().map(|m| m.y)
    }

    pub fn max_x(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.x).max()
    }

    /// True when no term carries a nonzero power of `y`.
    pub fn is_x_only(&self) -> bool {
        self.terms.keys().all(|m| m.y == 0)
    }

    /// Multiplies by `y^dy`.
    pub fn shift_y(&self, dy: i64) -> Self {
        LaurentPoly2 {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial::new(m.x, m.y + dy), c.clone()))
                .collect(),
        }
    }

    /// Substitutes `y := ±1`. Panics for any other value.
    pub fn substitute_y(&self, y: i8) -> Self {
        assert!(y == 1 || y == -1, "substitute_y only supports y = ±1");
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let c = if y == -1 && m.y.rem_euclid(2) == 1 {
                -c.clone()
            } else {
                c.clone()
            };
            out.add_term(Monomial::new(m.x, 0), c);
        }
        out
    }

    /// The coefficient of `y^c`, as a polynomial in `x` alone.
    pub fn coefficient_of_y(&self, c: i64) -> Self {
        LaurentPoly2 {
            terms: self
                .terms
                .range(Monomial::new(0, c)..=Monomial::new(u32::MAX, c))
                .map(|(m, v)| (Monomial::new(m.x, 0), v.clone()))
                .collect(),
        }
    }

    /// Sum of all coefficients, i.e. the value at `x = y = 1`.
    pub fn value_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Floating evaluation. `y` must be nonzero when negative `y` powers occur.
    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let c = c.to_f64().unwrap_or(f64::NAN);
                x.powi(m.x as i32) * y.powi(m.y as i32) * c
            })
            .sum()
    }

    pub fn eval_real(&self, x: f64, y: f64) -> f64 {
        self.eval(Complex64::new(x, 0.0), Complex64::new(y, 0.0)).re
    }

    /// Exact quotient `self / divisor` in the Laurent ring, or `NotExact`.
    pub fn checked_div(&self, divisor: &Self) -> Result<Self> {
        let (Some(dmin), Some(nmin)) = (divisor.min_y(), self.min_y()) else {
            return if divisor.is_zero() {
                Err(Error::NotExact)
            } else {
                Ok(Self::zero())
            };
        };
        // Monomials are units, so clearing the lowest y-power reduces this to
        // exact division of ordinary polynomials.
        let num = self.shift_y(-nmin);
        let den = divisor.shift_y(-dmin);
        Ok(poly_div_exact(num, &den)?.shift_y(nmin - dmin))
    }

    pub fn records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|(m, c)| TermRecord {
                xexp: m.x,
                yexp: m.y,
                coeff: c.to_string(),
            })
            .collect()
    }
}

/// Lex-order division of polynomials with nonnegative exponents.
fn poly_div_exact(mut rem: LaurentPoly2, den: &LaurentPoly2) -> Result<LaurentPoly2> {
    let (lead_m, lead_c) = den
        .terms
        .iter()
        .next_back()
        .map(|(m, c)| (*m, c.clone()))
        .ok_or(Error::NotExact)?;
    let mut quot = LaurentPoly2::zero();
    while let Some((m, c)) = rem.terms.iter().next_back().map(|(m, c)| (*m, c.clone())) {
        if m.y < lead_m.y || m.x < lead_m.x {
            return Err(Error::NotExact);
        }
        if !(&c % &lead_c).is_zero() {
            return Err(Error::NotExact);
        }
        let q = LaurentPoly2::monomial(&c / &lead_c, m.x - lead_m.x, m.y - lead_m.y);
        rem -= &(&q * den);
        quot += &q;
    }
    Ok(quot)
}

impl fmt::Display for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            if !abs.is_one() || (m.x == 0 && m.y == 0) {
                factors.push(abs.to_string());
            }
            match m.x {
                0 => {}
                1 => factors.push("x".into()),
                k => factors.push(format!("x^{k}")),
            }
            match m.y {
                0 => {}
                1 => factors.push("y".into()),
                o => factors.push(format!("y^{o}")),
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl AddAssign<&LaurentPoly2> for LaurentPoly2 {
    fn add_assign(&mut self, rhs: &LaurentPoly2) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly2> for LaurentPoly2 {
    fn sub_assign(&mut self, rhs: &LaurentPoly2) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl Add for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn add(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn sub(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn mul(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = LaurentPoly2::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(Monomial::new(ma.x + mb.x, ma.y + mb.y), ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn neg(self) -> LaurentPoly2 {
        LaurentPoly2 {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl Add for LaurentPoly2 {
    type Output = LaurentPoly2;
    fn add(mut self, rhs: LaurentPoly2) -> LaurentPoly2 {
        self += &rhs;
        self
    }
}

impl Sub for LaurentPoly2 {
    type Output = LaurentPoly2;
    fn sub(mut self, rhs: LaurentPoly2) -> LaurentPoly2 {
        self -= &rhs;
        self
    }
}

impl Mul for LaurentPoly2 {
    type Output = LaurentPoly2;
    fn mul(self, rhs: LaurentPoly2) -> LaurentPoly2 {
        &self * &rhs
    }
}

impl Neg for LaurentPoly2 {
    type Output = LaurentPoly2;
    fn neg(self) -> LaurentPoly2 {
        -&self
    }
}
