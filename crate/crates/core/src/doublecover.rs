//! Double covers of `(P¹)ⁿ` branched along a divisor of multidegree
//! `(2d₁, …, 2dₙ)`.
//!
//! With `B = 2L`, `L = (d₁, …, dₙ)`, the canonical class of the cover `X` is
//! the pullback of `K_Y + L = (d₁ − 2, …, dₙ − 2)`, so
//! `(−K_X)ⁿ = 2·(2 − d)ⁿ = 2·n!·Π(2 − dᵢ)`.
//!
//! Singularity checks are pointwise: `t² = p` is singular over a point of the
//! branch locus iff every partial derivative of `p` vanishes there.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceModel};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleCoverSpec {
    n: usize,
    branch_type: Vec<u32>,
}

impl DoubleCoverSpec {
    /// `branch_type` holds `(d₁, …, dₙ)`; the branch divisor is `(2d₁, …, 2dₙ)`.
    pub fn new(branch_type: Vec<u32>) -> Result<Self> {
        if branch_type.is_empty() {
            return Err(Error::InvalidModel("double cover needs n >= 1".into()));
        }
        Ok(Self {
            n: branch_type.len(),
            branch_type,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn branch_type(&self) -> &[u32] {
        &self.branch_type
    }

    pub fn base_model(&self) -> SurfaceModel {
        SurfaceModel::product_p1(self.n).expect("n >= 1")
    }

    fn class(&self, f: impl Fn(i64) -> i64) -> DivisorClass {
        let coords = self.branch_type.iter().map(|d| f(i64::from(*d))).collect();
        DivisorClass::new(self.base_model(), coords).expect("rank matches n")
    }

    pub fn branch_class(&self) -> DivisorClass {
        self.class(|d| 2 * d)
    }

    /// `K_Y + L`, whose pullback is `K_X`.
    pub fn canonical_base_class(&self) -> DivisorClass {
        self.class(|d| d - 2)
    }
}

/// Fano criterion for the double cover: every `dᵢ ∈ {0, 1}`.
pub fn is_fano(spec: &DoubleCoverSpec) -> bool {
    spec.branch_type.iter().all(|d| *d <= 1)
}

/// `(−K_X)ⁿ`, computed as twice the top self-intersection of `−(K_Y + L)`.
pub fn anticanonical_power(spec: &DoubleCoverSpec) -> Result<i64> {
    let model = spec.base_model();
    let anti = spec.class(|d| 2 - d);
    let top = model.top_intersection(&vec![anti; spec.n])?;
    top.checked_mul(2).ok_or(Error::Overflow)
}

/// Picard number of a smooth cover branched in type `(2, …, 2)` of dimension
/// at least three (which equals `n`); `None` for every other type.
pub fn expected_picard_number(spec: &DoubleCoverSpec) -> Option<usize> {
    (spec.n >= 3 && spec.branch_type.iter().all(|d| *d == 1)).then_some(spec.n)
}

/// Parse `p/q` or `p` into an exact rational. Decimal notation is rejected.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not an exact rational: {s:?}"));
    let (num, den) = match s.trim().split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A multihomogeneous polynomial on `(P¹)ⁿ` in variables
/// `x_{i,0}, x_{i,1}` at positions `2i, 2i+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiHomogPoly {
    n: usize,
    multidegree: Vec<u32>,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TermJson {
    exponents: Vec<u32>,
    coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PolyJson {
    n: usize,
    multidegree: Vec<u32>,
    terms: Vec<TermJson>,
}

impl MultiHomogPoly {
    /// Like terms are merged and zero coefficients dropped.
    pub fn new(
        n: usize,
        multidegree: Vec<u32>,
        terms: Vec<(Vec<u32>, BigRational)>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidModel("polynomial needs n >= 1".into()));
        }
        if multidegree.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: multidegree.len(),
            });
        }
        let mut merged: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (exps, coeff) in terms {
            if exps.len() != 2 * n {
                return Err(Error::Dimension {
                    expected: 2 * n,
                    got: exps.len(),
                });
            }
            for (i, deg) in multidegree.iter().enumerate() {
                if exps[2 * i] + exps[2 * i + 1] != *deg {
                    return Err(Error::Domain(format!(
                        "term {exps:?} has degree {} in factor {i}, expected {deg}",
                        exps[2 * i] + exps[2 * i + 1]
                    )));
                }
            }
            *merged.entry(exps).or_insert_with(BigRational::zero) += coeff;
        }
        merged.retain(|_, c| !c.is_zero());
        Ok(Self {
            n,
            multidegree,
            terms: merged,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PolyJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let terms = doc
            .terms
            .into_iter()
            .map(|t| Ok((t.exponents, parse_rational(&t.coeff)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(doc.n, doc.multidegree, terms)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = PolyJson {
            n: self.n,
            multidegree: self.multidegree.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson {
                    exponents: e.clone(),
                    coeff: format_rational(c),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("polynomial serializes")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn multidegree(&self) -> &[u32] {
        &self.multidegree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Formal derivative in variable `var ∈ [0, 2n)`. The degree of the
    /// affected factor drops by one, saturating at zero for a polynomial that
    /// does not involve it (the result is then zero).
    pub fn partial_derivative(&self, var: usize) -> Result<Self> {
        if var >= 2 * self.n {
            return Err(Error::Dimension {
                expected: 2 * self.n,
                got: var,
            });
        }
        let mut multidegree = self.multidegree.clone();
        multidegree[var / 2] = multidegree[var / 2].saturating_sub(1);
        let mut terms = BTreeMap::new();
        for (exps, coeff) in &self.terms {
            let e = exps[var];
            if e == 0 {
                continue;
            }
            let mut lowered = exps.clone();
            lowered[var] -= 1;
            terms.insert(lowered, coeff * BigRational::from_integer(e.into()));
        }
        Ok(Self {
            n: self.n,
            multidegree,
            terms,
        })
    }

    pub fn evaluate(&self, pt: &ProductPoint) -> Result<BigRational> {
        if pt.factors() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: pt.factors(),
            });
        }
        let vars: Vec<&BigRational> = pt.coords.iter().flat_map(|(a, b)| [a, b]).collect();
        let mut total = BigRational::zero();
        for (exps, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (v, e) in vars.iter().zip(exps) {
                if *e > 0 {
                    term *= num_traits::pow((*v).clone(), *e as usize);
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// All `2n` partial derivatives evaluated at `pt`.
    pub fn gradient(&self, pt: &ProductPoint) -> Result<Vec<BigRational>> {
        (0..2 * self.n)
            .map(|v| self.partial_derivative(v)?.evaluate(pt))
            .collect()
    }
}

impl fmt::Display for MultiHomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = variable_names(self.n);
        for (k, (exps, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mut mono = String::new();
            for (name, e) in names.iter().zip(exps) {
                match e {
                    0 => {}
                    1 => mono.push_str(name),
                    _ => mono.push_str(&format!("{name}^{e}")),
                }
            }
            if mono.is_empty() {
                write!(f, "{}", format_rational(c))?;
            } else if c.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "({}){mono}", format_rational(c))?;
            }
        }
        Ok(())
    }
}

/// `x0 x1 y0 y1 z0 z1` for `n ≤ 3`, `x{i}_0 x{i}_1` beyond.
pub fn variable_names(n: usize) -> Vec<String> {
    (0..n)
        .flat_map(|i| {
            let base = if n <= 3 {
                ["x", "y", "z"][i].to_string()
            } else {
                format!("x{}_", i + 1)
            };
            [format!("{base}0"), format!("{base}1")]
        })
        .collect()
}

/// A point of `(P¹)ⁿ` given by one homogeneous pair per factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductPoint {
    coords: Vec<(BigRational, BigRational)>,
}

impl ProductPoint {
    pub fn new(coords: Vec<(BigRational, BigRational)>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidModel(
                "point needs at least one factor".into(),
            ));
        }
        if let Some(i) = coords.iter().position(|(a, b)| a.is_zero() && b.is_zero()) {
            return Err(Error::Domain(format!("factor {i} has coordinates (0:0)")));
        }
        Ok(Self { coords })
    }

    pub fn from_integers(pairs: &[(i64, i64)]) -> Result<Self> {
        let q = |x: i64| BigRational::from_integer(x.into());
        Self::new(pairs.iter().map(|(a, b)| (q(*a), q(*b))).collect())
    }

    pub fn factors(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[(BigRational, BigRational)] {
        &self.coords
    }

    /// The same projective point with factor `i` scaled by `lambda ≠ 0`.
    pub fn rescaled(&self, i: usize, lambda: &BigRational) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::Domain("rescaling by zero".into()));
        }
        let mut coords = self.coords.clone();
        let (a, b) = coords.get_mut(i).ok_or(Error::Dimension {
            expected: self.coords.len(),
            got: i,
        })?;
        *a *= lambda;
        *b *= lambda;
        Ok(Self { coords })
    }
}

/// Whether the double cover `t² = p` is singular over `pt`, a point of the
/// branch locus `{p = 0}`.
pub fn cover_singular_at(p: &MultiHomogPoly, pt: &ProductPoint) -> Result<bool> {
    if !p.evaluate(pt)?.is_zero() {
        return Err(Error::Precondition(
            "point is not on the branch divisor".into(),
        ));
    }
    Ok(p.gradient(pt)?.iter().all(Zero::is_zero))
}

/// The `(2,2,2)` branch polynomial
/// `x0²y0²z1² + z0²x1²y1² + z0z1(x0x1y1² + y0y1x1²)`, whose double cover is
/// singular over `(0:1)×(0:1)×(0:1)`.
pub fn singular_222_example() -> MultiHomogPoly {
    let one = || BigRational::one();
    // variable order: x0 x1 y0 y1 z0 z1
    let terms = vec![
        (vec![2, 0, 2, 0, 0, 2], one()),
        (vec![0, 2, 0, 2, 2, 0], one()),
        (vec![1, 1, 0, 2, 1, 1], one()),
        (vec![0, 2, 1, 1, 1, 1], one()),
    ];
    MultiHomogPoly::new(3, vec![2, 2, 2], terms).expect("example is multihomogeneous")
}
