//! Picard lattices of the two surface families used throughout the crate.
//!
//! * `BlowupP2(r)`: the blow-up of P² at `r ≤ 8` points, basis `(H, E1, …, Er)`,
//!   odd unimodular form of signature `(1, r)`.
//! * `ProductP1(n)`: `(P¹)ⁿ`, basis `(H1, …, Hn)`. Intersection numbers are given
//!   by the top multilinear form `H_{i1}⋯H_{in} = 1` iff all indices are distinct,
//!   which is the permanent of the coefficient matrix.
//!
//! Coordinates are machine integers; every arithmetic step is checked.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_BLOWUP_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelKind {
    BlowupP2(usize),
    ProductP1(usize),
}

/// A validated lattice model. Construct through [`SurfaceModel::blowup_p2`] or
/// [`SurfaceModel::product_p1`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "ModelKind", into = "ModelKind")]
pub struct SurfaceModel(ModelKind);

impl TryFrom<ModelKind> for SurfaceModel {
    type Error = Error;

    fn try_from(kind: ModelKind) -> Result<Self> {
        match kind {
            ModelKind::BlowupP2(r) => Self::blowup_p2(r),
            ModelKind::ProductP1(n) => Self::product_p1(n),
        }
    }
}

impl From<SurfaceModel> for ModelKind {
    fn from(m: SurfaceModel) -> Self {
        m.0
    }
}

impl fmt::Display for SurfaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            ModelKind::BlowupP2(r) => write!(f, "BlowupP2({r})"),
            ModelKind::ProductP1(n) => write!(f, "ProductP1({n})"),
        }
    }
}

impl SurfaceModel {
    pub fn blowup_p2(r: usize) -> Result<Self> {
        if r > MAX_BLOWUP_POINTS {
            return Err(Error::RankOutOfRange {
                r,
                min: 0,
                max: MAX_BLOWUP_POINTS,
            });
        }
        Ok(Self(ModelKind::BlowupP2(r)))
    }

    pub fn product_p1(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidModel("ProductP1 needs n >= 1".into()));
        }
        Ok(Self(ModelKind::ProductP1(n)))
    }

    pub fn kind(&self) -> ModelKind {
        self.0
    }

    /// Number of blown-up points, if this is a blow-up model.
    pub fn blowup_points(&self) -> Option<usize> {
        match self.0 {
            ModelKind::BlowupP2(r) => Some(r),
            ModelKind::ProductP1(_) => None,
        }
    }

    /// Picard number ρ.
    pub fn rank(&self) -> usize {
        match self.0 {
            ModelKind::BlowupP2(r) => r + 1,
            ModelKind::ProductP1(n) => n,
        }
    }

    pub fn basis_labels(&self) -> Vec<String> {
        match self.0 {
            ModelKind::BlowupP2(r) => std::iter::once("H".to_string())
                .chain((1..=r).map(|i| format!("E{i}")))
                .collect(),
            ModelKind::ProductP1(n) => (1..=n).map(|i| format!("H{i}")).collect(),
        }
    }

    /// `i`-th basis vector.
    pub fn basis(&self, i: usize) -> Result<DivisorClass> {
        let rank = self.rank();
        if i >= rank {
            return Err(Error::Dimension {
                expected: rank,
                got: i,
            });
        }
        let mut coords = vec![0; rank];
        coords[i] = 1;
        DivisorClass::new(*self, coords)
    }

    /// The hyperplane class `H` of a blow-up model.
    pub fn hyperplane(&self) -> Result<DivisorClass> {
        match self.0 {
            ModelKind::BlowupP2(_) => self.basis(0),
            ModelKind::ProductP1(_) => Err(Error::UnsupportedModel(*self)),
        }
    }

    /// The exceptional class `E_i` (1-based) of a blow-up model.
    pub fn exceptional(&self, i: usize) -> Result<DivisorClass> {
        match self.0 {
            ModelKind::BlowupP2(r) if (1..=r).contains(&i) => self.basis(i),
            ModelKind::BlowupP2(r) => Err(Error::Dimension {
                expected: r,
                got: i,
            }),
            ModelKind::ProductP1(_) => Err(Error::UnsupportedModel(*self)),
        }
    }

    /// `K = -3H + ΣE_i` on blow-ups, `K = Σ -2H_i` on products.
    pub fn canonical_class(&self) -> DivisorClass {
        let coords = match self.0 {
            ModelKind::BlowupP2(r) => std::iter::once(-3)
                .chain(std::iter::repeat_n(1, r))
                .collect(),
            ModelKind::ProductP1(n) => vec![-2; n],
        };
        DivisorClass {
            model: *self,
            coords,
        }
    }

    /// Intersection pairing. Defined on blow-up models and, as a convenience,
    /// on `ProductP1(2)` with `H1·H2 = 1`, `Hi² = 0`.
    pub fn pairing(&self, a: &DivisorClass, b: &DivisorClass) -> Result<i64> {
        self.check_member(a)?;
        self.check_member(b)?;
        match self.0 {
            ModelKind::BlowupP2(_) => {
                let head = a.coords[0]
                    .checked_mul(b.coords[0])
                    .ok_or(Error::Overflow)?;
                a.coords[1..]
                    .iter()
                    .zip(&b.coords[1..])
                    .try_fold(head, |acc, (x, y)| acc.checked_sub(x.checked_mul(*y)?))
                    .ok_or(Error::Overflow)
            }
            ModelKind::ProductP1(2) => {
                let p = a.coords[0]
                    .checked_mul(b.coords[1])
                    .ok_or(Error::Overflow)?;
                let q = a.coords[1]
                    .checked_mul(b.coords[0])
                    .ok_or(Error::Overflow)?;
                p.checked_add(q).ok_or(Error::Overflow)
            }
            ModelKind::ProductP1(_) => Err(Error::UnsupportedPairing(*self)),
        }
    }

    /// Arithmetic genus from adjunction: `(c² + c·K)/2 + 1`.
    pub fn adjunction_genus(&self, c: &DivisorClass) -> Result<Rational64> {
        let k = self.canonical_class();
        let sq = self.pairing(c, c)?;
        let ck = self.pairing(c, &k)?;
        let num = sq.checked_add(ck).ok_or(Error::Overflow)?;
        Ok(Rational64::new(num, 2) + 1)
    }

    /// Top intersection number of `n` classes on `(P¹)ⁿ`.
    pub fn top_intersection(&self, classes: &[DivisorClass]) -> Result<i64> {
        let ModelKind::ProductP1(n) = self.0 else {
            return Err(Error::UnsupportedModel(*self));
        };
        if classes.len() != n {
            return Err(Error::Arity {
                expected: n,
                got: classes.len(),
            });
        }
        for c in classes {
            self.check_member(c)?;
        }
        let rows: Vec<&[i64]> = classes.iter().map(|c| c.coords.as_slice()).collect();
        permanent(&rows)
    }

    pub(crate) fn check_member(&self, c: &DivisorClass) -> Result<()> {
        if c.model != *self {
            return Err(Error::ModelMismatch {
                expected: *self,
                got: c.model,
            });
        }
        Ok(())
    }
}

/// Permanent of a square integer matrix by Ryser's formula with Gray-code
/// ordering of column subsets: `O(2ⁿ·n)`.
pub fn permanent(rows: &[&[i64]]) -> Result<i64> {
    let n = rows.len();
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::Dimension {
            expected: n,
            got: bad.len(),
        });
    }
    if n == 0 {
        return Ok(1);
    }
    if n >= 63 {
        return Err(Error::Overflow);
    }

    let mut row_sums = vec![0i64; n];
    let mut total = 0i64;
    let mut gray = 0u64;
    for k in 1..(1u64 << n) {
        let next = k ^ (k >> 1);
        let col = (gray ^ next).trailing_zeros() as usize;
        let adding = next & (1 << col) != 0;
        for (sum, row) in row_sums.iter_mut().zip(rows) {
            *sum = if adding {
                sum.checked_add(row[col])
            } else {
                sum.checked_sub(row[col])
            }
            .ok_or(Error::Overflow)?;
        }
        gray = next;

        let prod = row_sums
            .iter()
            .try_fold(1i64, |acc, s| acc.checked_mul(*s))
            .ok_or(Error::Overflow)?;
        let odd = (n - next.count_ones() as usize) % 2 == 1;
        total = if odd {
            total.checked_sub(prod)
        } else {
            total.checked_add(prod)
        }
        .ok_or(Error::Overflow)?;
    }
    Ok(total)
}

/// An integer divisor class in the basis of its model.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DivisorClass {
    model: SurfaceModel,
    coords: Vec<i64>,
}

impl DivisorClass {
    pub fn new(model: SurfaceModel, coords: Vec<i64>) -> Result<Self> {
        if coords.len() != model.rank() {
            return Err(Error::Dimension {
                expected: model.rank(),
                got: coords.len(),
            });
        }
        Ok(Self { model, coords })
    }

    /// `dH − Σ m_i E_i` on `BlowupP2(mults.len())`.
    pub fn from_multiplicities(degree: i64, mults: &[i64]) -> Result<Self> {
        let model = SurfaceModel::blowup_p2(mults.len())?;
        let coords = std::iter::once(Ok(degree))
            .chain(mults.iter().map(|m| m.checked_neg().ok_or(Error::Overflow)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(model, coords)
    }

    pub fn model(&self) -> SurfaceModel {
        self.model
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// Coefficient of `H` on a blow-up model.
    pub fn degree(&self) -> i64 {
        self.coords[0]
    }

    /// Multiplicities `m_i` in `dH − Σ m_i E_i`.
    pub fn multiplicities(&self) -> Vec<i64> {
        self.coords[1..].iter().map(|a| -a).collect()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.model.check_member(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        Ok(Self {
            model: self.model,
            coords,
        })
    }

    pub fn checked_scale(&self, s: i64) -> Result<Self> {
        let coords = self
            .coords
            .iter()
            .map(|a| a.checked_mul(s).ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        Ok(Self {
            model: self.model,
            coords,
        })
    }

    pub fn pairing(&self, other: &Self) -> Result<i64> {
        self.model.pairing(self, other)
    }

    pub fn self_intersection(&self) -> Result<i64> {
        self.model.pairing(self, self)
    }

    pub fn dot_canonical(&self) -> Result<i64> {
        self.model.pairing(self, &self.model.canonical_class())
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = self.model.basis_labels();
        let mut first = true;
        for (c, label) in self.coords.iter().zip(&labels) {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}{label}")?;
            } else {
                write!(f, "{sign}{mag}{label}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// Operator forms panic on model mismatch or overflow; use the `checked_*`
// methods where that matters.
impl Add for &DivisorClass {
    type Output = DivisorClass;

    fn add(self, rhs: Self) -> DivisorClass {
        self.checked_add(rhs).expect("divisor class addition")
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;

    fn sub(self, rhs: Self) -> DivisorClass {
        self.checked_add(&-rhs).expect("divisor class subtraction")
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;

    fn neg(self) -> DivisorClass {
        self.checked_scale(-1).expect("divisor class negation")
    }
}

impl Mul<&DivisorClass> for i64 {
    type Output = DivisorClass;

    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.checked_scale(self).expect("divisor class scaling")
    }
}
