//! Pairs of conic-bundle fibrations on `BlowupP2(r)`.
//!
//! Two conic classes `c1, c2` induce `f = (f1, f2): S → P¹×P¹` of degree
//! `c1·c2`. The map is finite exactly when no curve is contracted by both
//! fibrations. On a Del Pezzo lattice the only curves of negative square are
//! exceptional, so a common contracted curve is an exceptional `E` with
//! `E·c1 = E·c2 = 0`; an irreducible common fiber would force `c1·c2 = 0`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerate::{
    enumerate_conic, enumerate_exceptional, is_conic_class, orbit_signature, ClassFamily,
    OrbitSignature,
};
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceModel};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrationPair {
    c1: DivisorClass,
    c2: DivisorClass,
}

impl FibrationPair {
    pub fn new(c1: DivisorClass, c2: DivisorClass) -> Result<Self> {
        c1.model().check_member(&c2)?;
        for c in [&c1, &c2] {
            if !is_conic_class(c)? {
                return Err(Error::Domain(format!("{c} is not a conic-bundle class")));
            }
        }
        if c1 == c2 {
            return Err(Error::Domain(
                "fibration pair needs two distinct classes".into(),
            ));
        }
        Ok(Self { c1, c2 })
    }

    pub fn model(&self) -> SurfaceModel {
        self.c1.model()
    }

    pub fn first(&self) -> &DivisorClass {
        &self.c1
    }

    pub fn second(&self) -> &DivisorClass {
        &self.c2
    }

    pub fn swapped(&self) -> Self {
        Self {
            c1: self.c2.clone(),
            c2: self.c1.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitenessReport {
    pub degree: i64,
    pub common_contracted: Vec<DivisorClass>,
    pub is_finite: bool,
}

/// Analyze a pair against a precomputed exceptional family on the same model.
pub fn analyze_pair_with(
    pair: &FibrationPair,
    exceptional: &ClassFamily,
) -> Result<FinitenessReport> {
    exceptional.model().check_member(pair.first())?;
    let degree = pair.c1.pairing(&pair.c2)?;
    let mut common_contracted = Vec::new();
    for e in exceptional.members() {
        if e.pairing(&pair.c1)? == 0 && e.pairing(&pair.c2)? == 0 {
            common_contracted.push(e.clone());
        }
    }
    let is_finite = degree > 0 && common_contracted.is_empty();
    Ok(FinitenessReport {
        degree,
        common_contracted,
        is_finite,
    })
}

pub fn analyze_pair(pair: &FibrationPair) -> Result<FinitenessReport> {
    let r = pair
        .model()
        .blowup_points()
        .ok_or(Error::UnsupportedModel(pair.model()))?;
    analyze_pair_with(pair, &enumerate_exceptional(r)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeBound {
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

/// `2K²(c1·c2) ≤ (K·c1 + K·c2)²` for classes of square zero.
pub fn hodge_bound(
    model: SurfaceModel,
    c1: &DivisorClass,
    c2: &DivisorClass,
) -> Result<HodgeBound> {
    let k = model.canonical_class();
    let k2 = model.pairing(&k, &k)?;
    if k2 <= 0 {
        return Err(Error::Domain(format!("{model} has K² = {k2} ≤ 0")));
    }
    for c in [c1, c2] {
        if model.pairing(c, c)? != 0 {
            return Err(Error::Domain(format!("{c} does not have square zero")));
        }
    }
    let lhs = 2i64
        .checked_mul(k2)
        .and_then(|x| x.checked_mul(model.pairing(c1, c2).ok()?))
        .ok_or(Error::Overflow)?;
    let sum = model
        .pairing(&k, c1)?
        .checked_add(model.pairing(&k, c2)?)
        .ok_or(Error::Overflow)?;
    let rhs = sum.checked_mul(sum).ok_or(Error::Overflow)?;
    Ok(HodgeBound {
        lhs,
        rhs,
        holds: lhs <= rhs,
    })
}

/// Largest `c1·c2` allowed for a conic pair on `BlowupP2(r)`:
/// `2K²(c1·c2) ≤ 16` gives `⌊8 / (9 − r)⌋`.
pub fn max_degree_bound(r: usize) -> Result<i64> {
    if !(1..=8).contains(&r) {
        return Err(Error::RankOutOfRange { r, min: 1, max: 8 });
    }
    Ok(8 / (9 - r as i64))
}

/// Conic and exceptional families with, per conic class, the set of
/// exceptional classes it contracts (as a bitset over the exceptional family).
pub struct PairTable {
    pub conics: ClassFamily,
    pub exceptional: ClassFamily,
    contracted: Vec<Vec<u64>>,
}

impl PairTable {
    pub fn new(r: usize) -> Result<Self> {
        let conics = enumerate_conic(r)?;
        let exceptional = enumerate_exceptional(r)?;
        let words = exceptional.len().div_ceil(64);
        let contracted = conics
            .members()
            .iter()
            .map(|c| {
                let mut bits = vec![0u64; words];
                for (k, e) in exceptional.members().iter().enumerate() {
                    if e.pairing(c)? == 0 {
                        bits[k / 64] |= 1 << (k % 64);
                    }
                }
                Ok(bits)
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            conics,
            exceptional,
            contracted,
        })
    }

    /// Whether conic classes `i` and `j` contract a common exceptional class.
    pub fn share_contracted(&self, i: usize, j: usize) -> bool {
        self.contracted[i]
            .iter()
            .zip(&self.contracted[j])
            .any(|(a, b)| a & b != 0)
    }

    pub fn degree(&self, i: usize, j: usize) -> Result<i64> {
        let m = self.conics.members();
        m[i].pairing(&m[j])
    }

    pub fn is_finite(&self, i: usize, j: usize) -> Result<bool> {
        Ok(self.degree(i, j)? > 0 && !self.share_contracted(i, j))
    }
}

/// One group of finite pairs sharing an unordered signature pair and degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairClass {
    pub signature_pair: (OrbitSignature, OrbitSignature),
    pub degree: i64,
    pub count: usize,
}

/// Group all finite unordered pairs of conic classes on `BlowupP2(r)` by
/// signature pair and degree. Output is sorted by `(signature_pair, degree)`.
pub fn classify_finite_pairs(r: usize) -> Result<Vec<PairClass>> {
    let table = PairTable::new(r)?;
    let sigs: Vec<OrbitSignature> = table
        .conics
        .members()
        .iter()
        .map(orbit_signature)
        .collect::<Result<_>>()?;
    let n = sigs.len();

    type Key = ((OrbitSignature, OrbitSignature), i64);
    let merged: BTreeMap<Key, usize> = (0..n)
        .into_par_iter()
        .map(|i| -> Result<BTreeMap<Key, usize>> {
            let mut local = BTreeMap::new();
            for j in (i + 1)..n {
                if !table.is_finite(i, j)? {
                    continue;
                }
                let (a, b) = (&sigs[i], &sigs[j]);
                let key = if a <= b {
                    (a.clone(), b.clone())
                } else {
                    (b.clone(), a.clone())
                };
                *local.entry((key, table.degree(i, j)?)).or_insert(0) += 1;
            }
            Ok(local)
        })
        .try_reduce(BTreeMap::new, |mut acc, part| {
            for (k, v) in part {
                *acc.entry(k).or_insert(0) += v;
            }
            Ok(acc)
        })?;

    Ok(merged
        .into_iter()
        .map(|((signature_pair, degree), count)| PairClass {
            signature_pair,
            degree,
            count,
        })
        .collect())
}

/// Conic classes `c2` forming a finite pair with a fixed `c1`, with reports.
pub fn finite_partners(c1: &DivisorClass) -> Result<Vec<(DivisorClass, FinitenessReport)>> {
    let r = c1
        .model()
        .blowup_points()
        .ok_or(Error::UnsupportedModel(c1.model()))?;
    let exceptional = enumerate_exceptional(r)?;
    let mut out = Vec::new();
    for c2 in enumerate_conic(r)?.members() {
        if c2 == c1 {
            continue;
        }
        let report = analyze_pair_with(&FibrationPair::new(c1.clone(), c2.clone())?, &exceptional)?;
        if report.is_finite {
            out.push((c2.clone(), report));
        }
    }
    Ok(out)
}
