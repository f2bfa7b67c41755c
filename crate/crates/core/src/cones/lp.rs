//! Exact cone membership by linear programming.
//!
//! `x ∈ cone(g_1, …, g_k)` iff the system `Σ λ_j g_j = x`, `λ ≥ 0` is feasible.
//! Decided with a phase-one simplex over `BigRational` using Bland's rule.
//! This path never touches facet normals, so it serves as an independent check
//! of the double-description output.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub fn in_cone(generators: &[Vec<BigRational>], x: &[BigRational]) -> Result<bool> {
    let m = x.len();
    if let Some(g) = generators.iter().find(|g| g.len() != m) {
        return Err(Error::Dimension {
            expected: m,
            got: g.len(),
        });
    }
    let k = generators.len();
    let width = k + m + 1;
    let rhs = k + m;

    let mut tab: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let flip = x[i].is_negative();
            let mut row = vec![BigRational::zero(); width];
            for (j, g) in generators.iter().enumerate() {
                row[j] = if flip { -g[i].clone() } else { g[i].clone() };
            }
            row[k + i] = BigRational::from_integer(BigInt::from(1));
            row[rhs] = x[i].abs();
            row
        })
        .collect();
    let mut basis: Vec<usize> = (k..k + m).collect();

    // phase-one objective: minimize the sum of artificials
    let mut obj = vec![BigRational::zero(); width];
    for row in &tab {
        for j in (0..k).chain(std::iter::once(rhs)) {
            obj[j] -= &row[j];
        }
    }

    while let Some(enter) = (0..k + m).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if !tab[i][enter].is_positive() {
                continue;
            }
            let ratio = &tab[i][rhs] / &tab[i][enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // phase one is bounded below by zero
        let (row, _) = leave.expect("phase-one simplex cannot be unbounded");

        let pivot = tab[row][enter].clone();
        tab[row].iter_mut().for_each(|v| *v /= &pivot);
        let pivot_row = tab[row].clone();
        for (i, r) in tab.iter_mut().enumerate() {
            if i != row && !r[enter].is_zero() {
                let f = r[enter].clone();
                r.iter_mut().zip(&pivot_row).for_each(|(v, p)| *v -= &f * p);
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            obj.iter_mut()
                .zip(&pivot_row)
                .for_each(|(v, p)| *v -= &f * p);
        }
        basis[row] = enter;
    }

    Ok(obj[rhs].is_zero())
}
