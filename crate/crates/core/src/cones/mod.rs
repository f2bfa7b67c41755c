//! Exact rational polyhedral cones and the Nef / Psef / Mori cones of the
//! lattice models.
//!
//! A [`ConePoly`] is built either from generators or from inequalities; the
//! other representation is computed on first use by the double description
//! method and cached. All arithmetic is on primitive integer vectors, rational
//! input is cleared of denominators on entry.

pub mod dd;
pub mod lp;

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use self::dd::{IVec, Rep};
use crate::enumerate::enumerate_exceptional;
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, ModelKind, SurfaceModel};

/// A symmetric integer bilinear form given by its Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearForm {
    gram: Vec<Vec<i64>>,
}

impl BilinearForm {
    /// The standard dot product on `Zᵈ`.
    pub fn dot(dim: usize) -> Self {
        let gram = (0..dim)
            .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
            .collect();
        Self { gram }
    }

    pub fn from_gram(gram: Vec<Vec<i64>>) -> Result<Self> {
        let n = gram.len();
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: row.len(),
                });
            }
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Domain("Gram matrix is not symmetric".into()));
                }
            }
        }
        Ok(Self { gram })
    }

    /// Intersection pairing of a model, where one exists.
    pub fn for_model(model: SurfaceModel) -> Result<Self> {
        let n = model.rank();
        let basis: Vec<DivisorClass> = (0..n).map(|i| model.basis(i)).collect::<Result<_>>()?;
        let gram = basis
            .iter()
            .map(|a| basis.iter().map(|b| model.pairing(a, b)).collect())
            .collect::<Result<_>>()?;
        Ok(Self { gram })
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    /// `G·v`, i.e. the functional `x ↦ form(x, v)` as a coefficient vector.
    fn apply(&self, v: &[i128]) -> Result<IVec> {
        self.gram
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .try_fold(0i128, |acc, (g, x)| {
                        acc.checked_add(i128::from(*g).checked_mul(*x)?)
                    })
                    .ok_or(Error::Overflow)
            })
            .collect()
    }

    pub fn eval(&self, a: &[i64], b: &[i64]) -> Result<i128> {
        let a: IVec = a.iter().map(|x| i128::from(*x)).collect();
        let b: IVec = b.iter().map(|x| i128::from(*x)).collect();
        dd::dot(&a, &self.apply(&b)?)
    }
}

#[derive(Debug, Clone)]
enum Input {
    Generators(Rep),
    /// Inequality normals as `rays`, equation normals as `lines`.
    Inequalities(Rep),
}

/// A rational polyhedral cone `cone(rays) + span(lines)`, equivalently
/// `{x : ⟨n, x⟩ ≥ 0 for facet normals n, ⟨e, x⟩ = 0 for equations e}`.
#[derive(Debug, Clone)]
pub struct ConePoly {
    dim: usize,
    input: Input,
    vrep: OnceLock<Result<Rep>>,
    hrep: OnceLock<Result<Rep>>,
}

fn to_ivec(v: &[i64]) -> IVec {
    v.iter().map(|x| i128::from(*x)).collect()
}

fn to_i64(v: &[i128]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| i64::try_from(*x).map_err(|_| Error::Overflow))
        .collect()
}

/// Clear denominators of a rational vector.
pub fn rational_to_integer(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

fn rational_to_ivec(v: &[BigRational]) -> Result<IVec> {
    let ints = rational_to_integer(v);
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    ints.iter()
        .map(|x| {
            let x = if g.is_zero() { x.clone() } else { x / &g };
            x.to_i128().ok_or(Error::Overflow)
        })
        .collect()
}

fn check_dims(dim: usize, vs: &[IVec]) -> Result<()> {
    match vs.iter().find(|v| v.len() != dim) {
        Some(v) => Err(Error::Dimension {
            expected: dim,
            got: v.len(),
        }),
        None => Ok(()),
    }
}

impl ConePoly {
    fn with_input(dim: usize, input: Input) -> Result<Self> {
        let (Input::Generators(rep) | Input::Inequalities(rep)) = &input;
        check_dims(dim, &rep.rays)?;
        check_dims(dim, &rep.lines)?;
        Ok(Self {
            dim,
            input,
            vrep: OnceLock::new(),
            hrep: OnceLock::new(),
        })
    }

    /// Cone spanned by rational generators. Zero vectors are ignored.
    pub fn from_generators(dim: usize, generators: &[Vec<BigRational>]) -> Result<Self> {
        let rays = generators
            .iter()
            .map(|g| rational_to_ivec(g))
            .collect::<Result<Vec<_>>>()?;
        Self::from_ivec_generators(dim, rays)
    }

    pub fn from_integer_generators(dim: usize, generators: &[Vec<i64>]) -> Result<Self> {
        Self::from_ivec_generators(dim, generators.iter().map(|g| to_ivec(g)).collect())
    }

    fn from_ivec_generators(dim: usize, rays: Vec<IVec>) -> Result<Self> {
        check_dims(dim, &rays)?;
        let rays = rays.into_iter().filter_map(dd::primitive).collect();
        Self::with_input(
            dim,
            Input::Generators(Rep {
                rays,
                lines: vec![],
            }),
        )
    }

    /// Cone `{x : ⟨n, x⟩ ≥ 0}` over the given normals.
    pub fn from_inequalities(dim: usize, normals: &[Vec<i64>]) -> Result<Self> {
        let rays = normals.iter().map(|n| to_ivec(n)).collect();
        Self::with_input(
            dim,
            Input::Inequalities(Rep {
                rays,
                lines: vec![],
            }),
        )
    }

    /// The positive orthant of `Zᵈ`.
    pub fn orthant(dim: usize) -> Self {
        let gens: Vec<Vec<i64>> = (0..dim)
            .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
            .collect();
        Self::from_integer_generators(dim, &gens)
            .expect("orthant generators have matching dimension")
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Minimal V-representation.
    fn vrep(&self) -> Result<&Rep> {
        self.vrep
            .get_or_init(|| match &self.input {
                Input::Inequalities(h) => dd::solve(self.dim, &h.rays, &h.lines),
                Input::Generators(g) => self.prune_generators(g),
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Extreme rays among the input generators. A generator of a pointed cone
    /// is extreme iff the facets tight at it have rank `span_dim − 1`; cones
    /// with lineality go through a second DD pass instead.
    fn prune_generators(&self, g: &Rep) -> Result<Rep> {
        let h = self.hrep()?;
        let mut all_eqs = h.rays.clone();
        all_eqs.extend(h.lines.iter().cloned());
        let lineality = dd::solve(self.dim, &[], &all_eqs)?.lines;
        if !lineality.is_empty() || !g.lines.is_empty() {
            return dd::solve(self.dim, &h.rays, &h.lines);
        }

        let mut base = dd::Echelon::default();
        for e in &h.lines {
            base.insert(e)?;
        }
        let target = self.dim - 1;
        let mut rays = Vec::new();
        for r in &g.rays {
            let mut tight = base.clone();
            for n in &h.rays {
                if dd::dot(n, r)? == 0 && tight.insert(n)? && tight.rank() == target {
                    break;
                }
            }
            if tight.rank() == target {
                rays.push(r.clone());
            }
        }
        rays.sort();
        rays.dedup();
        Ok(Rep {
            rays,
            lines: vec![],
        })
    }

    /// Minimal H-representation: facet normals as `rays`, equations as `lines`.
    fn hrep(&self) -> Result<&Rep> {
        self.hrep
            .get_or_init(|| match &self.input {
                Input::Generators(g) => dd::solve(self.dim, &g.rays, &g.lines),
                Input::Inequalities(_) => {
                    let v = self.vrep()?;
                    dd::solve(self.dim, &v.rays, &v.lines)
                }
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Some generating set (not necessarily minimal), without running DD when
    /// the cone was given by generators.
    fn any_generators(&self) -> Result<&Rep> {
        match &self.input {
            Input::Generators(g) => Ok(g),
            Input::Inequalities(_) => self.vrep(),
        }
    }

    /// Some valid inequality description, without running DD when the cone was
    /// given by inequalities.
    fn any_inequalities(&self) -> Result<&Rep> {
        match &self.input {
            Input::Inequalities(h) => Ok(h),
            Input::Generators(_) => self.hrep(),
        }
    }

    /// Minimal generating set: the extreme rays, sorted, each primitive.
    /// For a cone with lineality the set also holds `±l` for a canonical basis
    /// `l` of the lineality space.
    pub fn extremal_rays(&self) -> Result<Vec<Vec<i64>>> {
        let v = self.vrep()?;
        let mut out: Vec<Vec<i64>> = v.rays.iter().map(|r| to_i64(r)).collect::<Result<_>>()?;
        for l in &v.lines {
            out.push(to_i64(l)?);
            out.push(to_i64(&l.iter().map(|x| -x).collect::<IVec>())?);
        }
        out.sort();
        Ok(out)
    }

    /// Basis of the lineality space (empty iff the cone is pointed).
    pub fn lineality(&self) -> Result<Vec<Vec<i64>>> {
        self.vrep()?.lines.iter().map(|l| to_i64(l)).collect()
    }

    /// Irredundant facet normals, sorted.
    pub fn facets(&self) -> Result<Vec<Vec<i64>>> {
        self.hrep()?.rays.iter().map(|r| to_i64(r)).collect()
    }

    /// Normals of the implicit equations (a basis of the orthogonal
    /// complement of the span).
    pub fn equations(&self) -> Result<Vec<Vec<i64>>> {
        self.hrep()?.lines.iter().map(|l| to_i64(l)).collect()
    }

    pub fn is_pointed(&self) -> Result<bool> {
        Ok(self.vrep()?.lines.is_empty())
    }

    pub fn span_dim(&self) -> Result<usize> {
        let g = self.any_generators()?;
        let all: Vec<IVec> = g.rays.iter().chain(&g.lines).cloned().collect();
        dd::rank(&all)
    }

    /// Pointed with as many extreme rays as the dimension of its span.
    pub fn is_simplicial(&self) -> Result<bool> {
        let v = self.vrep()?;
        Ok(v.lines.is_empty() && v.rays.len() == self.span_dim()?)
    }

    pub fn contains_integer(&self, x: &[i64]) -> Result<bool> {
        self.contains_ivec(&to_ivec(x))
    }

    /// Membership test against the inequality description.
    pub fn contains(&self, x: &[BigRational]) -> Result<bool> {
        if x.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: x.len(),
            });
        }
        let x = rational_to_integer(x);
        let h = self.any_inequalities()?;
        let dot =
            |n: &IVec| -> BigInt { n.iter().zip(&x).map(|(a, b)| BigInt::from(*a) * b).sum() };
        Ok(
            h.rays.iter().all(|n| !dot(n).is_negative())
                && h.lines.iter().all(|e| dot(e).is_zero()),
        )
    }

    fn contains_ivec(&self, x: &[i128]) -> Result<bool> {
        if x.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: x.len(),
            });
        }
        let h = self.any_inequalities()?;
        for n in &h.rays {
            if dd::dot(n, x)? < 0 {
                return Ok(false);
            }
        }
        for e in &h.lines {
            if dd::dot(e, x)? != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `other ⊆ self`.
    pub fn contains_cone(&self, other: &ConePoly) -> Result<bool> {
        if other.dim != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: other.dim,
            });
        }
        let g = other.any_generators()?;
        let h = self.any_inequalities()?;
        if let Some(fits) = small_entries_check(self.dim, h, &g.rays) {
            if !fits {
                return Ok(false);
            }
        } else {
            for r in &g.rays {
                if !self.contains_ivec(r)? {
                    return Ok(false);
                }
            }
        }
        for l in &g.lines {
            let neg: IVec = l.iter().map(|x| -x).collect();
            if !self.contains_ivec(l)? || !self.contains_ivec(&neg)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality as sets, by mutual containment.
    pub fn same_cone(&self, other: &ConePoly) -> Result<bool> {
        Ok(self.contains_cone(other)? && other.contains_cone(self)?)
    }

    /// Membership by exact LP over a generating set; independent of facets.
    pub fn contains_by_lp(&self, x: &[BigRational]) -> Result<bool> {
        let g = self.any_generators()?;
        let q = |v: &IVec| -> Vec<BigRational> {
            v.iter()
                .map(|c| BigRational::from_integer(BigInt::from(*c)))
                .collect()
        };
        let mut gens: Vec<Vec<BigRational>> = g.rays.iter().map(q).collect();
        for l in &g.lines {
            gens.push(q(l));
            gens.push(q(&l.iter().map(|x| -x).collect()));
        }
        lp::in_cone(&gens, x)
    }
}

/// Membership of every point in `points` against `h` using flat `i64`
/// arithmetic, or `None` when entry sizes could overflow it.
fn small_entries_check(dim: usize, h: &Rep, points: &[IVec]) -> Option<bool> {
    let max_abs = |vs: &[IVec]| {
        vs.iter()
            .flatten()
            .map(|x| x.unsigned_abs())
            .max()
            .unwrap_or(0)
    };
    let bound = max_abs(&h.rays).max(max_abs(&h.lines)) * max_abs(points) * dim as u128;
    if bound >= 1 << 62 {
        return None;
    }
    let flat = |vs: &[IVec]| -> Vec<i64> { vs.iter().flatten().map(|x| *x as i64).collect() };
    let (ineqs, eqs, pts) = (flat(&h.rays), flat(&h.lines), flat(points));
    let dot = |a: &[i64], b: &[i64]| -> i64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    Some(pts.chunks_exact(dim.max(1)).all(|x| {
        ineqs.chunks_exact(dim.max(1)).all(|n| dot(n, x) >= 0)
            && eqs.chunks_exact(dim.max(1)).all(|e| dot(e, x) == 0)
    }))
}

/// `{x : form(x, g) ≥ 0 for every g ∈ c}`.
pub fn dual_cone(c: &ConePoly, form: &BilinearForm) -> Result<ConePoly> {
    if form.dim() != c.dim {
        return Err(Error::Dimension {
            expected: c.dim,
            got: form.dim(),
        });
    }
    let g = c.any_generators()?;
    let rays = g
        .rays
        .iter()
        .map(|r| form.apply(r))
        .collect::<Result<_>>()?;
    let lines = g
        .lines
        .iter()
        .map(|l| form.apply(l))
        .collect::<Result<_>>()?;
    ConePoly::with_input(c.dim, Input::Inequalities(Rep { rays, lines }))
}

pub fn extremal_rays(c: &ConePoly) -> Result<Vec<Vec<i64>>> {
    c.extremal_rays()
}

pub fn is_simplicial(c: &ConePoly) -> Result<bool> {
    c.is_simplicial()
}

/// Generators of the pseudo-effective cone of a supported surface model.
///
/// `{H}` on P², `{E1, H − E1}` on F1, the exceptional classes on blow-ups of
/// two to eight points, the two rulings on P¹×P¹.
pub fn psef_generators(model: SurfaceModel) -> Result<Vec<DivisorClass>> {
    match model.kind() {
        ModelKind::BlowupP2(0) => Ok(vec![model.hyperplane()?]),
        ModelKind::BlowupP2(1) => {
            let h = model.hyperplane()?;
            let e = model.exceptional(1)?;
            Ok(vec![e.clone(), &h - &e])
        }
        ModelKind::BlowupP2(r) => Ok(enumerate_exceptional(r)?.members().to_vec()),
        ModelKind::ProductP1(2) => Ok(vec![model.basis(0)?, model.basis(1)?]),
        ModelKind::ProductP1(_) => Err(Error::UnsupportedModel(model)),
    }
}

pub fn psef_cone(model: SurfaceModel) -> Result<ConePoly> {
    let gens: Vec<Vec<i64>> = psef_generators(model)?
        .iter()
        .map(|c| c.coords().to_vec())
        .collect();
    ConePoly::from_integer_generators(model.rank(), &gens)
}

/// Mori cone of `(P¹)ⁿ` in `N₁`: the orthant spanned by the curve classes of
/// the factors.
pub fn product_mori_cone(n: usize) -> Result<ConePoly> {
    SurfaceModel::product_p1(n)?;
    Ok(ConePoly::orthant(n))
}

/// Nef and pseudo-effective cones of a surface model and their comparison.
#[derive(Debug, Clone)]
pub struct ConeReport {
    pub model: SurfaceModel,
    pub nef: ConePoly,
    pub psef: ConePoly,
    pub equal: bool,
    pub mori_simplicial: bool,
    pub picard_number: usize,
}

/// On a surface `NE = Psef` and `Nef` is its dual under the intersection
/// pairing.
pub fn surface_cone_report(model: SurfaceModel) -> Result<ConeReport> {
    let psef = psef_cone(model)?;
    let form = BilinearForm::for_model(model)?;
    let nef = dual_cone(&psef, &form)?;
    // Psef ⊆ Nef is decided on the raw inequalities of Nef; the reverse
    // inclusion needs a DD run and is only attempted when the first holds.
    let equal = nef.contains_cone(&psef)? && psef.contains_cone(&nef)?;
    let mori_simplicial = psef.is_simplicial()?;
    Ok(ConeReport {
        model,
        nef,
        psef,
        equal,
        mori_simplicial,
        picard_number: model.rank(),
    })
}
