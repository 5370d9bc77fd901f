//! Free energy of the equidistant walker model.
//!
//! For fixed `N` the free energy per unit length is the limit of
//! `-(1/(νr))·log Z(N, r, ν)` as `r → ∞`; the product over `m` in the closed
//! form of `Z` becomes a Riemann sum, giving
//!
//! ```text
//! f_N(ν) = -(1/ν)·(N·log 2 - log ν + ∫_0^1 log Σ_k cos^N(2π(k + t)/ν) dt).
//! ```
//!
//! Dividing by `N` and keeping only the dominating cosine gives the free energy
//! per site `F_ν`, whose form depends on the parity of `ν`.

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formulas::z_log_closed_form;
use crate::numeric::{cos_turns, log_power_sum};
use crate::quadrature::{integrate, Abscissa, QuadratureOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Length {
    Finite(u32),
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    FiniteR,
    Integral,
    DensityClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FreeEnergyReport {
    pub nu: u32,
    pub length: Length,
    pub value: f64,
    pub method: Method,
    pub r_used: Option<u32>,
    pub error_estimate: f64,
}

fn check_nu(nu: u32) -> Result<()> {
    if nu == 0 {
        return Err(Error::BadCylinder { m: 0, n: 0 });
    }
    Ok(())
}

/// `-(1/(νr))·log Z(N, r, ν)`, evaluated in log space from the closed form.
pub fn free_energy_finite(n: u32, r: u32, nu: u32) -> Result<FreeEnergyReport> {
    check_nu(nu)?;
    if r == 0 {
        return Err(Error::BadDimensions { starts: 0, ends: 0 });
    }
    let log_z = z_log_closed_form(n, r, nu)?;
    let sites = nu as f64 * r as f64;
    let value = -log_z / sites;
    Ok(FreeEnergyReport {
        nu,
        length: Length::Finite(n),
        value,
        method: Method::FiniteR,
        r_used: Some(r),
        error_estimate: 4.0 * f64::EPSILON * (value.abs() + n as f64 + 1.0),
    })
}

/// `log Σ_k cos^N(2π(k + t)/ν)` with `t = anchor + offset`.
fn log_cos_sum(n: u32, nu: u32, t: Abscissa, buf: &mut Vec<f64>) -> f64 {
    let nu_f = nu as f64;
    buf.clear();
    buf.extend((0..nu).map(|k| cos_turns((k as f64 + t.anchor) / nu_f, t.offset / nu_f)));
    log_power_sum(buf, n).unwrap_or(f64::NAN)
}

/// The `r → ∞` limit, by adaptive quadrature over `t ∈ [0, 1]`.
pub fn free_energy_integral(n: u32, nu: u32) -> Result<FreeEnergyReport> {
    check_nu(nu)?;
    if n % 2 == 1 {
        // Σ_k cos^N(θ + 2πk/ν) has mean zero over θ for odd N.
        return Err(Error::InvalidCount(format!(
            "the cosine power sum changes sign for odd N={n}"
        )));
    }
    let mut buf = Vec::with_capacity(nu as usize);
    let integral = integrate(
        |t| log_cos_sum(n, nu, t, &mut buf),
        &[0.0, 0.25, 0.5, 0.75, 1.0],
        QuadratureOptions::default(),
    )?;
    let nu_f = nu as f64;
    let value = -(n as f64 * LN_2 - nu_f.ln() + integral.value) / nu_f;
    Ok(FreeEnergyReport {
        nu,
        length: Length::Finite(n),
        value,
        method: Method::Integral,
        r_used: None,
        error_estimate: integral.error / nu_f + 4.0 * f64::EPSILON * (value.abs() + 1.0),
    })
}

/// The index `k ∈ 0..ν` maximising `|cos(2π(k + t)/ν)|`, and whether that
/// cosine is negative.
///
/// For even `ν` every magnitude is attained twice with opposite signs; ties
/// go to the nonnegative cosine, then to the smallest `k`.
pub fn dominating_term(nu: u32, t: f64) -> (u32, bool) {
    assert!(nu >= 1, "ν must be positive");
    let mut best = (0, false);
    let mut best_abs = f64::NEG_INFINITY;
    for k in 0..nu {
        let c = cos_turns((k as f64 + t) / nu as f64, 0.0);
        let (a, negative) = (c.abs(), c < 0.0);
        let tie = (a - best_abs).abs() <= 1e-12;
        if (!tie && a > best_abs) || (tie && best.1 && !negative) {
            best_abs = a;
            best = (k, negative);
        }
    }
    best
}

/// Free energy per site `F_ν`:
///
/// ```text
/// even ν:  -log 2/ν - ∫_{-1/(2ν)}^{1/(2ν)} log cos(2πt) dt
/// odd ν:   -log 2/ν - 2·∫_{-1/(4ν)}^{1/(4ν)} log cos(2πt) dt
/// ```
pub fn free_energy_density(nu: u32) -> Result<FreeEnergyReport> {
    check_nu(nu)?;
    let nu_f = nu as f64;
    let (h, factor) = if nu.is_multiple_of(2) {
        (0.5 / nu_f, 1.0)
    } else {
        (0.25 / nu_f, 2.0)
    };
    let integral = integrate(
        |t| cos_turns(t.anchor, t.offset).ln(),
        &[-h, 0.0, h],
        QuadratureOptions::default(),
    )?;
    let value = -LN_2 / nu_f - factor * integral.value;
    Ok(FreeEnergyReport {
        nu,
        length: Length::Infinite,
        value,
        method: Method::DensityClosedForm,
        r_used: None,
        error_estimate: factor * integral.error + 4.0 * f64::EPSILON,
    })
}
