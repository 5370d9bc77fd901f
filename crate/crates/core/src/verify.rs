//! Seeded property suites that cross-check the formulas against the oracle and
//! against each other. Each suite counts individual checks and keeps the first
//! few failure messages.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::asymptotics::{dominating_term, free_energy_density, free_energy_finite, free_energy_integral};
use crate::formulas::{
    equidistant_trig_det, families_by_shift, gk_coefficient, signed_gf_det, trig_gf_det, unsigned_count_gf, unsigned_y,
    z_count,
};
use crate::genfunc::{q_poly, q_trig, roots_of_unity_powersum, verify_q_relations};
use crate::lattice::{enumerate_families, validate_config, CylinderConfig};
use crate::laurent::LaurentPoly2;
use crate::linalg::{
    circulant_eigenvalues, circulant_matrix, det_complex, fourier_det, product_scale, skew_circulant_eigenvalues,
    skew_circulant_matrix,
};
use crate::numeric::{unit_root, Tolerance};

const MAX_FAILURE_MESSAGES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Lgv,
    Circulant,
    Trig,
    Asym,
}

impl Suite {
    pub const PARTS: [Suite; 4] = [Suite::Lgv, Suite::Circulant, Suite::Trig, Suite::Asym];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Lgv => "lgv",
            Suite::Circulant => "circulant",
            Suite::Trig => "trig",
            Suite::Asym => "asym",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Suite::All, Suite::Lgv, Suite::Circulant, Suite::Trig, Suite::Asym]
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: u64,
    pub failed: u64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            passed: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, message: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < MAX_FAILURE_MESSAGES {
                self.failures.push(message());
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// Runs one suite, or all four for [`Suite::All`].
pub fn run_suite(suite: Suite, seed: u64, tol: Tolerance) -> Vec<SuiteReport> {
    match suite {
        Suite::All => Suite::PARTS.iter().flat_map(|&s| run_suite(s, seed, tol)).collect(),
        Suite::Lgv => vec![lgv(seed)],
        Suite::Circulant => vec![circulant(seed, tol)],
        Suite::Trig => vec![trig(seed, tol)],
        Suite::Asym => vec![asym(tol)],
    }
}

fn rng_for(seed: u64, suite: Suite) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(suite as u64);
    rng
}

/// A random valid instance on one of the given circumferences.
fn random_config(
    rng: &mut ChaCha8Rng,
    circumferences: &[i64],
    max_n: i64,
    max_r: usize,
    max_bits: i64,
) -> CylinderConfig {
    loop {
        let m = *circumferences.choose(rng).expect("nonempty");
        let n = rng.gen_range(0..=max_n);
        let r = rng.gen_range(1..=max_r);
        if r as i64 * n > max_bits {
            continue;
        }
        let parity_a = rng.gen_range(0..2i64);
        let parity_e = (parity_a + n).rem_euclid(2);
        let pick = |rng: &mut ChaCha8Rng, parity: i64| -> Option<Vec<i64>> {
            let pool: Vec<i64> = (0..m).filter(|v| v % 2 == parity).collect();
            let mut chosen: Vec<i64> = pool.choose_multiple(rng, r).copied().collect();
            chosen.sort_unstable();
            (chosen.len() == r).then_some(chosen)
        };
        let (Some(a), Some(e)) = (pick(rng, parity_a), pick(rng, parity_e)) else {
            continue;
        };
        if let Ok(config) = validate_config(m, n, &a, &e) {
            return config;
        }
    }
}

fn lgv(seed: u64) -> SuiteReport {
    let mut rng = rng_for(seed, Suite::Lgv);
    let mut report = SuiteReport::new("lgv");
    for _ in 0..60 {
        let c = random_config(&mut rng, &[2, 3, 4, 5, 6], 5, 3, 14);
        let en = match enumerate_families(&c) {
            Ok(en) => en,
            Err(err) => {
                report.check(false, || format!("{c:?}: {err}"));
                continue;
            }
        };
        let signed = signed_gf_det(&c);
        report.check(signed == en.signed_gf, || {
            format!("{c:?}: signed determinant {signed} vs oracle {}", en.signed_gf)
        });

        let unsigned = unsigned_count_gf(&c);
        report.check(signed.substitute_y(unsigned_y(c.r())) == unsigned, || {
            format!("{c:?}: substituting before and after the determinant disagree")
        });

        let mut reassembled = LaurentPoly2::zero();
        if let (Some(lo), Some(hi)) = (signed.min_y(), signed.max_y()) {
            for k in lo..=hi {
                reassembled += &gk_coefficient(&c, k).shift_y(k);
            }
        }
        report.check(reassembled == signed, || {
            format!("{c:?}: y-coefficients do not reassemble")
        });

        if c.r() % 2 == 1 {
            report.check(en.signed_gf == en.unsigned_gf, || {
                format!("{c:?}: odd r but signed ≠ unsigned")
            });
        }
        if c.r() == 1 {
            let q = q_poly(c.m(), c.n(), c.starts()[0], c.ends()[0]).expect("valid");
            report.check(q == en.unsigned_gf, || format!("{c:?}: single walker differs from q"));
        }
        if c.m() % 2 == 0 {
            let expected = en.unsigned_gf.substitute_y(1);
            report.check(unsigned == expected, || {
                format!("{c:?}: unsigned determinant {unsigned} vs oracle {expected}")
            });
            report.check(unsigned.value_at_one() == BigInt::from(en.count), || {
                format!("{c:?}: count {} vs oracle {}", unsigned.value_at_one(), en.count)
            });
            match families_by_shift(&en, &c) {
                Ok(groups) => {
                    let mut expansion = LaurentPoly2::zero();
                    for (p, gf) in groups {
                        if c.r().is_multiple_of(2) && p % 2 == 1 {
                            expansion -= &gf;
                        } else {
                            expansion += &gf;
                        }
                    }
                    report.check(expansion == signed, || format!("{c:?}: expansion by shift disagrees"));
                }
                Err(err) => report.check(false, || format!("{c:?}: {err}")),
            }
        }
    }
    for _ in 0..100 {
        let m = rng.gen_range(2..=8i64);
        let n = rng.gen_range(0..=12i64);
        let a = rng.gen_range(0..m);
        let total: BigInt = (0..m).map(|e| q_poly(m, n, a, e).expect("valid").value_at_one()).sum();
        report.check(total == BigInt::from(1u64 << n), || {
            format!("mass M={m} N={n} a={a}: {total}")
        });
        let e = rng.gen_range(-2 * m..2 * m);
        report.check(verify_q_relations(m, n, a, e) == Ok(true), || {
            format!("relations M={m} N={n} a={a} e={e}")
        });
    }
    report
}

fn random_vector(rng: &mut ChaCha8Rng, r: usize) -> Vec<Complex64> {
    (0..r)
        .map(|_| Complex64::new(rng.gen_range(-10..=10) as f64, 0.0))
        .collect()
}

fn circulant(seed: u64, tol: Tolerance) -> SuiteReport {
    let mut rng = rng_for(seed, Suite::Circulant);
    let mut report = SuiteReport::new("circulant");
    for _ in 0..300 {
        let r = rng.gen_range(1..=8usize);
        let a = random_vector(&mut rng, r);
        for skew in [false, true] {
            let (matrix, eigen) = if skew {
                (skew_circulant_matrix(&a), skew_circulant_eigenvalues(&a))
            } else {
                (circulant_matrix(&a), circulant_eigenvalues(&a))
            };
            let product: Complex64 = eigen.iter().product();
            let direct = det_complex(&matrix);
            report.check(tol.approx_eq_scaled(product, direct, product_scale(&eigen)), || {
                format!("skew={skew} a={a:?}: eigenproduct {product} vs determinant {direct}")
            });
            for (m, lambda) in eigen.iter().enumerate() {
                let turns = if skew {
                    (2 * m + 1) as f64 / (2 * r) as f64
                } else {
                    m as f64 / r as f64
                };
                let v: Vec<Complex64> = (0..r).map(|k| unit_root(turns * k as f64)).collect();
                let image = matrix.mul_vec(&v);
                let ok = image.iter().zip(&v).all(|(w, vi)| tol.approx_eq(*w, lambda * vi));
                report.check(ok, || format!("skew={skew} a={a:?}: eigenvector {m} fails"));
            }
        }
    }
    for r in 1..=8 {
        for shifted in [false, true] {
            let result = fourier_det(r, shifted, tol);
            report.check(result.is_ok(), || format!("{result:?}"));
        }
    }
    report
}

fn trig(seed: u64, tol: Tolerance) -> SuiteReport {
    let mut rng = rng_for(seed, Suite::Trig);
    let mut report = SuiteReport::new("trig");
    for _ in 0..200 {
        let m = rng.gen_range(1..=10i64);
        let n = rng.gen_range(0..=12i64);
        let (a, e) = (rng.gen_range(0..10i64), rng.gen_range(0..10i64));
        let x = Complex64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..std::f64::consts::TAU));
        let y = rng.gen_range(0.5..2.0);
        let exact = q_poly(m, n, a, e).expect("valid").eval(x, Complex64::new(y, 0.0));
        let value = q_trig(m, n, a, e, x, y).expect("valid");
        report.check(tol.approx_eq(value, exact), || {
            format!("q({m},{n},{a},{e}) at x={x} y={y}: {value} vs {exact}")
        });
    }
    for _ in 0..100 {
        let modulus = rng.gen_range(1..=32i64);
        let k = rng.gen_range(-64..=64i64);
        let numeric: Complex64 = (0..modulus).map(|l| unit_root((k * l) as f64 / modulus as f64)).sum();
        let exact = Complex64::new(roots_of_unity_powersum(modulus, k) as f64, 0.0);
        report.check((numeric - exact).norm() < 1e-9, || format!("powersum({modulus},{k})"));
    }
    for _ in 0..40 {
        let c = random_config(&mut rng, &[2, 3, 4, 5, 6], 6, 3, 18);
        let unsigned = unsigned_count_gf(&c);
        for x in [0.0, 0.5, 1.0] {
            let expected = Complex64::new(unsigned.eval_real(x, 1.0), 0.0);
            let value = trig_gf_det(&c, x);
            report.check(tol.approx_eq(value, expected) && value.im.abs() < 1e-8, || {
                format!("{c:?} x={x}: trigonometric {value} vs {expected}")
            });
        }
    }
    for _ in 0..40 {
        let r = rng.gen_range(1..=3u32);
        let nu = rng.gen_range(1..=3u32);
        if r * nu < 2 {
            continue;
        }
        let m = (r * nu) as i64;
        let n = rng.gen_range(0..=5u32);
        let starts: Vec<i64> = (0..r as i64).map(|i| i * nu as i64).collect();
        let parity = (n as i64).rem_euclid(2);
        let pool: Vec<i64> = (0..m).filter(|v| v % 2 == parity).collect();
        let mut ends: Vec<i64> = pool.choose_multiple(&mut rng, r as usize).copied().collect();
        ends.sort_unstable();
        let Ok(c) = validate_config(m, n as i64, &starts, &ends) else {
            continue;
        };
        let unsigned = unsigned_count_gf(&c);
        for x in [0.0, 0.5, 1.0] {
            let expected = Complex64::new(unsigned.eval_real(x, 1.0), 0.0);
            match equidistant_trig_det(r as usize, nu, &ends, n, x) {
                Ok(value) => report.check(tol.approx_eq(value, expected), || {
                    format!("equidistant {c:?} x={x}: {value} vs {expected}")
                }),
                Err(err) => report.check(false, || format!("equidistant {c:?}: {err}")),
            }
        }
    }
    report
}

fn asym(tol: Tolerance) -> SuiteReport {
    let mut report = SuiteReport::new("asym");
    for nu in [1, 2] {
        let f = free_energy_density(nu).map(|f| f.value);
        report.check(matches!(f, Ok(v) if v.abs() < 1e-8), || format!("F_{nu} = {f:?}"));
    }
    for nu in 2..=6u32 {
        let mut changes = Vec::new();
        let steps = 1000;
        let mut last = dominating_term(nu, 0.0);
        for i in 1..=steps {
            let t = i as f64 / steps as f64;
            let now = dominating_term(nu, t);
            if now != last {
                changes.push(t);
            }
            last = now;
        }
        let expected: &[f64] = if nu % 2 == 0 { &[0.5] } else { &[0.25, 0.75] };
        let ok = changes.len() == expected.len()
            && changes
                .iter()
                .zip(expected)
                .all(|(t, b)| (t - b).abs() <= 1.0 / steps as f64 + 1e-12);
        report.check(ok, || format!("ν={nu}: dominating term changes at {changes:?}"));
    }
    for (n, nu) in [(2, 1), (2, 2), (4, 2), (4, 3)] {
        match (free_energy_integral(n, nu), free_energy_finite(n, 512, nu)) {
            (Ok(integral), Ok(finite)) => {
                let gap = (integral.value - finite.value).abs();
                report.check(gap < 1e-2, || format!("(N={n}, ν={nu}): Riemann gap {gap}"));
            }
            (a, b) => report.check(false, || format!("(N={n}, ν={nu}): {a:?} {b:?}")),
        }
    }
    for (n, r, nu) in [(0, 2, 2), (2, 2, 2), (4, 3, 2), (4, 2, 4), (6, 4, 2)] {
        match z_count(n, r, nu) {
            Ok(z) => report.check(z.methods_agree && z.relative_error() < tol.relative.max(1e-6), || {
                format!("{z:?}")
            }),
            Err(err) => report.check(false, || format!("Z({n},{r},{nu}): {err}")),
        }
    }
    report
}
