//! Exhaustive enumeration of exceptional ((−1)-curve) and conic-bundle classes
//! on `BlowupP2(r)`.
//!
//! A class `dH − Σ m_i E_i` is exceptional when `d² − Σm_i² = −1` and
//! `3d − Σm_i = 1`, and a conic-bundle class when `d² − Σm_i² = 0` and
//! `3d − Σm_i = 2`. Cauchy–Schwarz (`(Σm_i)² ≤ r·Σm_i²`) bounds `d`, and the
//! same inequality prunes the search over partial multiplicity vectors.
//!
//! Geometric realizability (points in general position) has no lattice
//! counterpart; every class here is a numerical class on the lattice.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceModel, MAX_BLOWUP_POINTS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Exceptional,
    ConicBundle,
}

impl FamilyKind {
    /// `(c², c·K)` for members of the family.
    pub fn equations(self) -> (i64, i64) {
        match self {
            FamilyKind::Exceptional => (-1, -1),
            FamilyKind::ConicBundle => (0, -2),
        }
    }

    /// Valid range of `r` for enumeration.
    pub fn rank_range(self) -> (usize, usize) {
        match self {
            FamilyKind::Exceptional => (0, MAX_BLOWUP_POINTS),
            FamilyKind::ConicBundle => (1, MAX_BLOWUP_POINTS),
        }
    }

    fn check_rank(self, r: usize) -> Result<()> {
        let (min, max) = self.rank_range();
        if !(min..=max).contains(&r) {
            return Err(Error::RankOutOfRange { r, min, max });
        }
        Ok(())
    }

    /// Largest `d ≥ 0` allowed by Cauchy–Schwarz for this family on `r` points.
    pub fn degree_bound(self, r: usize) -> Option<i64> {
        let (sq, k) = self.equations();
        let r = r as i64;
        // Σm = 3d + k, Σm² = d² − sq
        (0..=64i64)
            .filter(|&d| {
                let s = 3 * d + k;
                let q = d * d - sq;
                q >= 0 && s * s <= r * q
            })
            .max()
    }
}

/// The complete set of classes of one kind on a blow-up model, sorted
/// lexicographically on `(d, m_1, …, m_r)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassFamily {
    model: SurfaceModel,
    kind: FamilyKind,
    members: Vec<DivisorClass>,
}

impl ClassFamily {
    pub fn model(&self) -> SurfaceModel {
        self.model
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn members(&self) -> &[DivisorClass] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, c: &DivisorClass) -> bool {
        self.position(c).is_some()
    }

    pub fn position(&self, c: &DivisorClass) -> Option<usize> {
        self.members
            .binary_search_by(|m| sort_key(m).cmp(&sort_key(c)))
            .ok()
    }
}

fn sort_key(c: &DivisorClass) -> (i64, Vec<i64>) {
    (c.degree(), c.multiplicities())
}

/// All `m ∈ Zʳ` with `Σm = sum`, `Σm² = sq`.
fn multiplicity_vectors(r: usize, sum: i64, sq: i64) -> Vec<Vec<i64>> {
    fn feasible(left: i64, sum: i64, sq: i64) -> bool {
        if sq < 0 {
            return false;
        }
        if left == 0 {
            return sum == 0 && sq == 0;
        }
        // parity: m² ≡ m (mod 2)
        (sum - sq) % 2 == 0 && sum * sum <= left * sq
    }

    fn go(left: usize, sum: i64, sq: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        let bound = sq.isqrt();
        for m in -bound..=bound {
            let (s, q) = (sum - m, sq - m * m);
            if feasible(left as i64 - 1, s, q) {
                cur.push(m);
                go(left - 1, s, q, cur, out);
                cur.pop();
            }
        }
    }

    let mut out = Vec::new();
    if feasible(r as i64, sum, sq) {
        go(r, sum, sq, &mut Vec::with_capacity(r), &mut out);
    }
    out
}

fn enumerate_family(kind: FamilyKind, r: usize) -> Result<ClassFamily> {
    kind.check_rank(r)?;
    let model = SurfaceModel::blowup_p2(r)?;
    let (sq, k) = kind.equations();
    let min_degree = match kind {
        FamilyKind::Exceptional => 0,
        FamilyKind::ConicBundle => 1,
    };

    let mut members = Vec::new();
    if let Some(bound) = kind.degree_bound(r) {
        for d in min_degree..=bound {
            for m in multiplicity_vectors(r, 3 * d + k, d * d - sq) {
                if is_curve_class(kind, d, &m) {
                    members.push(DivisorClass::from_multiplicities(d, &m)?);
                }
            }
        }
    }
    members.sort_by_key(sort_key);
    Ok(ClassFamily {
        model,
        kind,
        members,
    })
}

/// Effectivity filter on lattice solutions.
///
/// Degree-0 exceptional solutions are exactly the `E_i`. For `d ≥ 1` a curve
/// class has nonnegative multiplicities, otherwise some `E_i` would be a fixed
/// component.
pub(crate) fn is_curve_class(kind: FamilyKind, d: i64, m: &[i64]) -> bool {
    match (kind, d) {
        (FamilyKind::Exceptional, 0) => {
            m.iter().filter(|&&x| x == -1).count() == 1 && m.iter().all(|&x| x == 0 || x == -1)
        }
        (_, d) if d < 0 => false,
        (FamilyKind::ConicBundle, 0) => false,
        _ => m.iter().all(|&x| x >= 0),
    }
}

/// All exceptional classes on `BlowupP2(r)`, `0 ≤ r ≤ 8`.
pub fn enumerate_exceptional(r: usize) -> Result<ClassFamily> {
    enumerate_family(FamilyKind::Exceptional, r)
}

/// All conic-bundle classes on `BlowupP2(r)`, `1 ≤ r ≤ 8`.
pub fn enumerate_conic(r: usize) -> Result<ClassFamily> {
    enumerate_family(FamilyKind::ConicBundle, r)
}

pub fn is_conic_class(c: &DivisorClass) -> Result<bool> {
    satisfies(FamilyKind::ConicBundle, c)
}

pub fn is_exceptional_class(c: &DivisorClass) -> Result<bool> {
    satisfies(FamilyKind::Exceptional, c)
}

fn satisfies(kind: FamilyKind, c: &DivisorClass) -> Result<bool> {
    if c.model().blowup_points().is_none() {
        return Err(Error::UnsupportedModel(c.model()));
    }
    Ok((c.self_intersection()?, c.dot_canonical()?) == kind.equations())
}

/// A reducible conic: two exceptional curves meeting once, summing to the
/// fiber class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReducibleFiber {
    pub total: DivisorClass,
    pub components: (DivisorClass, DivisorClass),
}

/// Splittings `c = A + B` with `A, B` exceptional and `A·B = 1`, each
/// unordered pair reported once (`A` before `B` in family order).
pub fn reducible_fibers(c: &DivisorClass, fam: &ClassFamily) -> Result<Vec<ReducibleFiber>> {
    fam.model.check_member(c)?;
    if fam.kind != FamilyKind::Exceptional {
        return Err(Error::Domain(
            "reducible fibers need the exceptional family".into(),
        ));
    }
    if !is_conic_class(c)? {
        return Err(Error::Domain(format!("{c} is not a conic-bundle class")));
    }

    let mut fibers = Vec::new();
    for (i, a) in fam.members.iter().enumerate() {
        let b = c.checked_add(&a.checked_scale(-1)?)?;
        match fam.position(&b) {
            Some(j) if j > i && a.pairing(&b)? == 1 => fibers.push(ReducibleFiber {
                total: c.clone(),
                components: (a.clone(), b),
            }),
            _ => {}
        }
    }
    Ok(fibers)
}

/// Fingerprint of a class up to renumbering the blown-up points: the degree
/// and the multiplicities sorted in non-increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrbitSignature {
    pub degree: i64,
    pub multiplicities: Vec<i64>,
}

impl OrbitSignature {
    pub fn new(degree: i64, mut multiplicities: Vec<i64>) -> Self {
        multiplicities.sort_unstable_by(|a, b| b.cmp(a));
        Self {
            degree,
            multiplicities,
        }
    }
}

impl std::fmt::Display for OrbitSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({};", self.degree)?;
        for (i, m) in self.multiplicities.iter().enumerate() {
            write!(f, "{}{m}", if i == 0 { "" } else { "," })?;
        }
        write!(f, ")")
    }
}

pub fn orbit_signature(c: &DivisorClass) -> Result<OrbitSignature> {
    if c.model().blowup_points().is_none() {
        return Err(Error::UnsupportedModel(c.model()));
    }
    Ok(OrbitSignature::new(c.degree(), c.multiplicities()))
}

/// Group a family by orbit signature.
pub fn orbits(fam: &ClassFamily) -> BTreeMap<OrbitSignature, Vec<DivisorClass>> {
    let mut out: BTreeMap<OrbitSignature, Vec<DivisorClass>> = BTreeMap::new();
    for c in &fam.members {
        out.entry(OrbitSignature::new(c.degree(), c.multiplicities()))
            .or_default()
            .push(c.clone());
    }
    out
}

/// Check that a family has distinct members satisfying its equations.
pub fn check_family(fam: &ClassFamily) -> Result<()> {
    let mut seen = HashSet::new();
    for c in &fam.members {
        if !satisfies(fam.kind, c)? {
            return Err(Error::Domain(format!("{c} fails the family equations")));
        }
        if !seen.insert(c) {
            return Err(Error::Domain(format!("{c} listed twice")));
        }
    }
    Ok(())
}
