//! Cylinder instances, walker families and the exhaustive enumeration oracle.
//!
//! The oracle is deliberately naive: it walks every one of the `2^(r·N)` step
//! tuples, discards those where two walkers share a site at some level, and
//! aggregates the weights of the survivors. Every determinant formula in
//! [`crate::formulas`] is checked against it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly2, Monomial};

/// Default limit on `r·N` for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: u32 = 26;

const CHUNK: u64 = 1 << 14;

/// A validated instance: `r` walkers on the `M`-cylinder, `N` steps each,
/// starting at `(a_i, 0)` and ending at some permutation of `(e_j, N)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CylinderConfig {
    m: i64,
    n: i64,
    starts: Vec<i64>,
    ends: Vec<i64>,
}

impl CylinderConfig {
    pub fn new(m: i64, n: i64, starts: &[i64], ends: &[i64]) -> Result<Self> {
        validate_config(m, n, starts, ends)
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn starts(&self) -> &[i64] {
        &self.starts
    }

    pub fn ends(&self) -> &[i64] {
        &self.ends
    }

    pub fn r(&self) -> usize {
        self.starts.len()
    }
}

fn check_points(list: &'static str, points: &[i64], m: i64) -> Result<()> {
    if let Some(&value) = points.iter().find(|&&p| p < 0 || p >= m) {
        return Err(Error::OutOfRange { list, value, m });
    }
    if let Some(w) = points.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::NotStrictlyIncreasing {
            list,
            prev: w[0],
            next: w[1],
        });
    }
    Ok(())
}

/// Checks the hypotheses on an instance. Inputs are never reordered.
pub fn validate_config(m: i64, n: i64, starts: &[i64], ends: &[i64]) -> Result<CylinderConfig> {
    if m <= 1 || n < 0 {
        return Err(Error::BadCylinder { m, n });
    }
    if starts.is_empty() || starts.len() != ends.len() {
        return Err(Error::BadDimensions {
            starts: starts.len(),
            ends: ends.len(),
        });
    }
    check_points("starting", starts, m)?;
    check_points("end", ends, m)?;
    for (i, e) in ends.iter().enumerate() {
        for (j, a) in starts.iter().enumerate() {
            let value = n - e + a;
            if value.rem_euclid(2) != 0 {
                return Err(Error::ParityViolation {
                    i: i + 1,
                    j: j + 1,
                    value,
                });
            }
        }
    }
    Ok(CylinderConfig {
        m,
        n,
        starts: starts.to_vec(),
        ends: ends.to_vec(),
    })
}

/// One step of a walker. Counter-clockwise steps have weight 1, clockwise
/// steps weight `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Step {
    CounterClockwise,
    Clockwise,
}

impl Step {
    pub fn from_bit(bit: u64) -> Step {
        if bit == 0 {
            Step::CounterClockwise
        } else {
            Step::Clockwise
        }
    }

    pub fn displacement(self) -> i64 {
        match self {
            Step::CounterClockwise => 1,
            Step::Clockwise => -1,
        }
    }
}

/// A nonintersecting family found by the enumerator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WalkerFamily {
    /// Bit pattern of the step tuple, most significant bit = walker 1, step 1.
    pub index: u64,
    pub steps: Vec<Vec<Step>>,
    /// Winding offsets `o_i`: walker `i` ends at lifted `e_{σ(i)} + o_i·M`.
    pub offsets: Vec<i64>,
    /// `σ` as 0-based end indices.
    pub permutation: Vec<usize>,
    /// Constant shift `p` of the integer endpoint labelling, when there is one.
    /// Always present for even `M`.
    pub shift: Option<i64>,
    /// `sgn σ`.
    pub sign: i8,
    /// Clockwise step count `k_i` per walker.
    pub left_counts: Vec<u32>,
}

impl WalkerFamily {
    pub fn x_exponent(&self) -> u32 {
        self.left_counts.iter().sum()
    }

    pub fn offset_sum(&self) -> i64 {
        self.offsets.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    /// Refuse instances with `r·N` above this.
    pub cap: u32,
    /// Collect every family, not just the aggregated generating functions.
    pub keep_families: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            cap: DEFAULT_ENUMERATION_CAP,
            keep_families: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyEnumeration {
    /// In increasing step-tuple index order; empty unless requested.
    pub families: Vec<WalkerFamily>,
    pub count: u64,
    /// `Σ sgn σ · x^Σk · y^Σo`.
    pub signed_gf: LaurentPoly2,
    /// `Σ x^Σk · y^Σo`.
    pub unsigned_gf: LaurentPoly2,
}

pub fn enumerate_families(config: &CylinderConfig) -> Result<FamilyEnumeration> {
    enumerate_families_with(config, EnumerationOptions::default())
}

#[derive(Default)]
struct Partial {
    families: Vec<WalkerFamily>,
    count: u64,
    // (x exponent, y exponent) -> (signed, unsigned)
    weights: BTreeMap<(u32, i64), (i64, u64)>,
}

pub fn enumerate_families_with(config: &CylinderConfig, options: EnumerationOptions) -> Result<FamilyEnumeration> {
    let r = config.r();
    let n = config.n as u64;
    let bits = r as u64 * n;
    if bits > options.cap as u64 || bits > 62 {
        return Err(Error::CapExceeded {
            steps: bits,
            cap: options.cap,
        });
    }
    let total = 1u64 << bits;
    let chunks = total.div_ceil(CHUNK);
    let partials: Vec<Partial> = (0..chunks)
        .into_par_iter()
        .map(|c| scan(config, c * CHUNK..((c + 1) * CHUNK).min(total), options.keep_families))
        .collect();

    let mut families = Vec::new();
    let mut count = 0;
    let mut weights: BTreeMap<(u32, i64), (i64, u64)> = BTreeMap::new();
    for part in partials {
        families.extend(part.families);
        count += part.count;
        for (key, (s, u)) in part.weights {
            let slot = weights.entry(key).or_default();
            slot.0 += s;
            slot.1 += u;
        }
    }
    let mut signed_gf = LaurentPoly2::zero();
    let mut unsigned_gf = LaurentPoly2::zero();
    for ((x, y), (s, u)) in weights {
        signed_gf.add_term(Monomial::new(x, y), BigInt::from(s));
        unsigned_gf.add_term(Monomial::new(x, y), BigInt::from(u));
    }
    Ok(FamilyEnumeration {
        families,
        count,
        signed_gf,
        unsigned_gf,
    })
}

fn residues_distinct(pos: &[i64], m: i64) -> bool {
    for i in 0..pos.len() {
        let ri = pos[i].rem_euclid(m);
        if pos[i + 1..].iter().any(|p| p.rem_euclid(m) == ri) {
            return false;
        }
    }
    true
}

fn permutation_sign(perm: &[usize]) -> i8 {
    let inversions = (0..perm.len())
        .flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| perm[i] > perm[j])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// 1-based integer labels of the lifted endpoints: `e_j + o·M` gets `j + o·r`.
fn endpoint_labels(config: &CylinderConfig, lifted: &[i64]) -> Option<(Vec<usize>, Vec<i64>, Vec<i64>)> {
    let (m, r) = (config.m, config.r() as i64);
    let mut perm = Vec::with_capacity(lifted.len());
    let mut offsets = Vec::with_capacity(lifted.len());
    let mut labels = Vec::with_capacity(lifted.len());
    for &p in lifted {
        let j = config.ends.binary_search(&p.rem_euclid(m)).ok()?;
        let o = (p - config.ends[j]) / m;
        perm.push(j);
        offsets.push(o);
        labels.push(j as i64 + 1 + o * r);
    }
    Some((perm, offsets, labels))
}

fn constant_shift(labels: &[i64]) -> Option<i64> {
    let shifts: Vec<i64> = labels.iter().enumerate().map(|(i, l)| l - (i as i64 + 1)).collect();
    shifts.windows(2).all(|w| w[0] == w[1]).then(|| shifts[0])
}

fn scan(config: &CylinderConfig, range: std::ops::Range<u64>, keep: bool) -> Partial {
    let r = config.r();
    let n = config.n as usize;
    let bits = (r * n) as u32;
    let bit = |idx: u64, walker: usize, level: usize| -> u64 { (idx >> (bits - 1 - (walker * n + level) as u32)) & 1 };
    let mut out = Partial::default();
    let mut pos = vec![0i64; r];
    'tuples: for idx in range {
        pos.copy_from_slice(&config.starts);
        for level in 0..n {
            for (w, p) in pos.iter_mut().enumerate() {
                *p += Step::from_bit(bit(idx, w, level)).displacement();
            }
            if !residues_distinct(&pos, config.m) {
                continue 'tuples;
            }
        }
        let Some((perm, offsets, labels)) = endpoint_labels(config, &pos) else {
            continue;
        };
        let left_counts: Vec<u32> = (0..r).map(|w| (0..n).map(|l| bit(idx, w, l) as u32).sum()).collect();
        let sign = permutation_sign(&perm);
        let key = (left_counts.iter().sum(), offsets.iter().sum());
        let slot = out.weights.entry(key).or_default();
        slot.0 += sign as i64;
        slot.1 += 1;
        out.count += 1;
        if keep {
            out.families.push(WalkerFamily {
                index: idx,
                steps: (0..r)
                    .map(|w| (0..n).map(|l| Step::from_bit(bit(idx, w, l))).collect())
                    .collect(),
                offsets,
                permutation: perm,
                shift: constant_shift(&labels),
                sign,
                left_counts,
            });
        }
    }
    out
}

/// Cyclic shift data of a family, recomputed from its steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilySignature {
    /// Exponent of `μ = (1 2 … r)`, reduced to `0..r`.
    pub p: i64,
    /// `sgn μ^p`.
    pub sign: i8,
    pub offsets: Vec<i64>,
}

/// Recovers the cyclic shift `p` of a family from the integer labelling of
/// lifted endpoints. Fails with `NotCyclic` when walkers do not all move by
/// the same number of labels, which can happen on odd cylinders.
pub fn family_signature(family: &WalkerFamily, config: &CylinderConfig) -> Result<FamilySignature> {
    let lifted: Vec<i64> = config
        .starts
        .iter()
        .zip(&family.steps)
        .map(|(a, steps)| a + steps.iter().map(|s| s.displacement()).sum::<i64>())
        .collect();
    let (_, offsets, labels) =
        endpoint_labels(config, &lifted).ok_or_else(|| Error::NotCyclic { labels: lifted.clone() })?;
    let shift = constant_shift(&labels).ok_or(Error::NotCyclic { labels })?;
    let r = config.r() as i64;
    let p = shift.rem_euclid(r);
    let sign = if r % 2 == 0 && p % 2 == 1 { -1 } else { 1 };
    Ok(FamilySignature { p, sign, offsets })
}
