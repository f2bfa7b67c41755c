//! Double description method over primitive integer vectors.
//!
//! Given inequalities `a·x ≥ 0` and equations `e·x = 0`, computes the cone
//! `{x}` as `cone(rays) + span(lines)`. Rays are the extreme rays modulo the
//! lineality space. Candidate pairs are filtered by tight-set size and then
//! checked with the combinatorial adjacency test.

use crate::error::{Error, Result};

pub type IVec = Vec<i128>;

/// A V-representation: `cone(rays) + span(lines)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Rep {
    pub rays: Vec<IVec>,
    pub lines: Vec<IVec>,
}

pub(crate) fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn dot(a: &[i128], b: &[i128]) -> Result<i128> {
    a.iter()
        .zip(b)
        .try_fold(0i128, |acc, (x, y)| acc.checked_add(x.checked_mul(*y)?))
        .ok_or(Error::Overflow)
}

/// Divide by the gcd of the entries; `None` for the zero vector.
pub(crate) fn primitive(mut v: IVec) -> Option<IVec> {
    let g = v.iter().fold(0, |g, x| gcd(g, *x));
    if g == 0 {
        return None;
    }
    if g != 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
    Some(v)
}

/// Primitive with the first nonzero entry positive (for lines and normals
/// whose sign carries no meaning).
pub(crate) fn primitive_unsigned(v: IVec) -> Option<IVec> {
    let mut v = primitive(v)?;
    if v.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    Some(v)
}

/// `s·u − t·w`, reduced to primitive form.
fn combine(s: i128, u: &[i128], t: i128, w: &[i128]) -> Result<Option<IVec>> {
    let v = u
        .iter()
        .zip(w)
        .map(|(x, y)| {
            s.checked_mul(*x)
                .zip(t.checked_mul(*y))
                .and_then(|(a, b)| a.checked_sub(b))
                .ok_or(Error::Overflow)
        })
        .collect::<Result<IVec>>()?;
    Ok(primitive(v))
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

struct Ray {
    v: IVec,
    zeros: Bits,
}

/// Rank of a set of integer vectors (fraction-free elimination).
pub(crate) fn rank(vectors: &[IVec]) -> Result<usize> {
    let mut rows: Vec<IVec> = vectors
        .iter()
        .filter_map(|v| primitive(v.clone()))
        .collect();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for i in (r + 1)..rows.len() {
            let f = rows[i][c];
            if f != 0 {
                rows[i] = combine(pivot[c], &rows[i], f, &pivot)?.unwrap_or_else(|| vec![0; cols]);
            }
        }
        r += 1;
    }
    Ok(r)
}

/// Incrementally built echelon basis, for rank tests with early exit.
#[derive(Debug, Clone, Default)]
pub(crate) struct Echelon {
    rows: Vec<(usize, IVec)>,
}

impl Echelon {
    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Insert `v`; returns whether the rank grew.
    pub(crate) fn insert(&mut self, v: &[i128]) -> Result<bool> {
        let mut v = v.to_vec();
        for (pivot_col, row) in &self.rows {
            let f = v[*pivot_col];
            if f != 0 {
                v = combine(row[*pivot_col], &v, f, row)?.unwrap_or_else(|| vec![0; row.len()]);
            }
        }
        match v.iter().position(|x| *x != 0) {
            Some(col) => {
                self.rows.push((col, primitive(v).expect("nonzero row")));
                Ok(true)
            }
            None => Ok(false),
        }
    }
}

/// Echelon basis of `span(lines)` with primitive, sign-normalized rows.
pub(crate) fn canonical_basis(lines: &[IVec]) -> Result<Vec<IVec>> {
    let mut rows: Vec<IVec> = lines.iter().filter_map(|v| primitive(v.clone())).collect();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for i in 0..rows.len() {
            let f = rows[i][c];
            if i != r && f != 0 {
                rows[i] = combine(pivot[c], &rows[i], f, &pivot)?.unwrap_or_else(|| vec![0; cols]);
            }
        }
        r += 1;
    }
    rows.truncate(r);
    Ok(rows.into_iter().filter_map(primitive_unsigned).collect())
}

/// Solve `{x ∈ Z^dim : a·x ≥ 0 ∀a ∈ ineqs, e·x = 0 ∀e ∈ eqs}`.
pub fn solve(dim: usize, ineqs: &[IVec], eqs: &[IVec]) -> Result<Rep> {
    for v in ineqs.iter().chain(eqs) {
        if v.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                got: v.len(),
            });
        }
    }

    let mut lines: Vec<IVec> = (0..dim)
        .map(|i| {
            let mut v = vec![0; dim];
            v[i] = 1;
            v
        })
        .collect();

    for e in eqs {
        eliminate_line(&mut lines, e, &mut [])?;
    }
    let subspace_dim = lines.len();

    let ineqs: Vec<IVec> = {
        let mut v: Vec<IVec> = ineqs.iter().filter_map(|a| primitive(a.clone())).collect();
        v.sort();
        v.dedup();
        v
    };
    let n_ineq = ineqs.len();
    let mut rays: Vec<Ray> = Vec::new();

    for (t, a) in ineqs.iter().enumerate() {
        let line_vals = lines
            .iter()
            .map(|l| dot(a, l))
            .collect::<Result<Vec<_>>>()?;
        if let Some(k) = line_vals.iter().position(|v| *v != 0) {
            let mut l0 = lines.swap_remove(k);
            let mut s0 = line_vals[k];
            if s0 < 0 {
                l0.iter_mut().for_each(|x| *x = -*x);
                s0 = -s0;
            }
            for l in lines.iter_mut() {
                let s = dot(a, l)?;
                if s != 0 {
                    *l = combine(s0, l, s, &l0)?.ok_or(Error::Overflow)?;
                }
            }
            for r in rays.iter_mut() {
                let s = dot(a, &r.v)?;
                if s != 0 {
                    r.v = combine(s0, &r.v, s, &l0)?.ok_or(Error::Overflow)?;
                }
                r.zeros.set(t);
            }
            let mut zeros = Bits::new(n_ineq);
            (0..t).for_each(|i| zeros.set(i));
            rays.push(Ray { v: l0, zeros });
            continue;
        }

        let vals = rays
            .iter()
            .map(|r| dot(a, &r.v))
            .collect::<Result<Vec<_>>>()?;
        if vals.iter().all(|v| *v >= 0) {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if *v == 0 {
                    r.zeros.set(t);
                }
            }
            continue;
        }

        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < 0).collect();
        let cone_dim = subspace_dim - lines.len();
        let min_tight = cone_dim.saturating_sub(2);

        let mut fresh = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zeros.and(&rays[n].zeros);
                if common.count() < min_tight {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, r)| i == p || i == n || !common.is_subset_of(&r.zeros));
                if !adjacent {
                    continue;
                }
                if let Some(v) = combine(vals[p], &rays[n].v, vals[n], &rays[p].v)? {
                    let mut zeros = common;
                    zeros.set(t);
                    fresh.push(Ray { v, zeros });
                }
            }
        }

        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (r, v) in rays.into_iter().zip(vals) {
            if v > 0 {
                kept.push(r);
            } else if v == 0 {
                let mut r = r;
                r.zeros.set(t);
                kept.push(r);
            }
        }
        kept.extend(fresh);
        rays = kept;
    }

    let mut out_rays: Vec<IVec> = rays.into_iter().map(|r| r.v).collect();
    out_rays.sort();
    out_rays.dedup();
    Ok(Rep {
        rays: out_rays,
        lines: canonical_basis(&lines)?,
    })
}

/// Project out the line direction not orthogonal to `e` (equation handling).
fn eliminate_line(lines: &mut Vec<IVec>, e: &[i128], rays: &mut [IVec]) -> Result<()> {
    let vals = lines
        .iter()
        .map(|l| dot(e, l))
        .collect::<Result<Vec<_>>>()?;
    let Some(k) = vals.iter().position(|v| *v != 0) else {
        return Ok(());
    };
    let l0 = lines.swap_remove(k);
    let s0 = vals[k];
    for l in lines.iter_mut().chain(rays.iter_mut()) {
        let s = dot(e, l)?;
        if s != 0 {
            *l = combine(s0, l, s, &l0)?.ok_or(Error::Overflow)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthant_from_inequalities() {
        let rep = solve(3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], &[]).unwrap();
        assert_eq!(rep.rays, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
        assert!(rep.lines.is_empty());
    }

    #[test]
    fn no_constraints_is_whole_space() {
        let rep = solve(2, &[], &[]).unwrap();
        assert!(rep.rays.is_empty());
        assert_eq!(rep.lines.len(), 2);
    }

    #[test]
    fn half_space_keeps_lineality() {
        let rep = solve(3, &[vec![1, 1, 0]], &[]).unwrap();
        assert_eq!(rep.rays.len(), 1);
        assert_eq!(rep.lines.len(), 2);
        assert!(dot(&rep.rays[0], &[1, 1, 0]).unwrap() > 0);
    }

    #[test]
    fn square_pyramid() {
        // facets of the cone over the square with vertices (±1,0,1),(0,±1,1)
        let ineqs = vec![
            vec![1, 1, 1],
            vec![1, -1, 1],
            vec![-1, 1, 1],
            vec![-1, -1, 1],
        ];
        let rep = solve(3, &ineqs, &[]).unwrap();
        assert_eq!(
            rep.rays,
            vec![vec![-1, 0, 1], vec![0, -1, 1], vec![0, 1, 1], vec![1, 0, 1]]
        );
    }

    #[test]
    fn equations_cut_subspace() {
        let rep = solve(3, &[vec![1, 0, 0], vec![0, 1, 0]], &[vec![1, 1, -1]]).unwrap();
        assert!(rep.lines.is_empty());
        assert_eq!(rep.rays, vec![vec![0, 1, 1], vec![1, 0, 1]]);
    }

    #[test]
    fn rank_and_basis() {
        assert_eq!(
            rank(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]).unwrap(),
            2
        );
        assert_eq!(
            canonical_basis(&[vec![-2, -4], vec![1, 1]]).unwrap(),
            vec![vec![1, 0], vec![0, 1]]
        );
    }
}
