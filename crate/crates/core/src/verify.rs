//! Named verification suites over the finite combinatorial content.
//!
//! Each suite returns a [`VerificationReport`] whose details are sorted by
//! case name, so serialized reports are byte-stable.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cones::{psef_generators, surface_cone_report};
use crate::doublecover::{
    anticanonical_power, cover_singular_at, expected_picard_number, is_fano, singular_222_example,
    DoubleCoverSpec, MultiHomogPoly, ProductPoint,
};
use crate::enumerate::{
    enumerate_conic, enumerate_exceptional, orbit_signature, reducible_fibers, OrbitSignature,
};
use crate::error::{Error, Result};
use crate::fibration::{
    analyze_pair_with, classify_finite_pairs, finite_partners, hodge_bound, max_degree_bound,
    FibrationPair, PairTable,
};
use crate::lattice::{DivisorClass, SurfaceModel};

pub const SUITES: [&str; 7] = [
    "deg2-pairs",
    "quadric-target",
    "hodge-bound",
    "cone-dp",
    "double-cover-k",
    "branch-singular",
    "fiber-counts",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detail {
    pub case: String,
    pub expected: Value,
    pub got: Value,
}

impl Detail {
    pub fn matches(&self) -> bool {
        self.expected == self.got
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub lemma_id: String,
    pub passed: bool,
    pub details: Vec<Detail>,
}

impl VerificationReport {
    fn build(lemma_id: &str, details: BTreeMap<String, (Value, Value)>) -> Self {
        let details: Vec<Detail> = details
            .into_iter()
            .map(|(case, (expected, got))| Detail {
                case,
                expected,
                got,
            })
            .collect();
        Self {
            lemma_id: lemma_id.to_string(),
            passed: details.iter().all(Detail::matches),
            details,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Detail> {
        self.details.iter().filter(|d| !d.matches())
    }
}

#[derive(Default)]
struct Cases(BTreeMap<String, (Value, Value)>);

impl Cases {
    fn check(&mut self, case: impl Into<String>, expected: impl Serialize, got: impl Serialize) {
        let expected = serde_json::to_value(expected).expect("case values serialize");
        let got = serde_json::to_value(got).expect("case values serialize");
        self.0.insert(case.into(), (expected, got));
    }
}

pub fn run(lemma_id: &str) -> Result<VerificationReport> {
    let cases = match lemma_id {
        "deg2-pairs" => deg2_pairs()?,
        "quadric-target" => quadric_target()?,
        "hodge-bound" => hodge()?,
        "cone-dp" => cone_dp()?,
        "double-cover-k" => double_cover_k()?,
        "branch-singular" => branch_singular()?,
        "fiber-counts" => fiber_counts()?,
        other => return Err(Error::Domain(format!("unknown suite {other:?}"))),
    };
    Ok(VerificationReport::build(lemma_id, cases.0))
}

fn cls(d: i64, m: &[i64]) -> DivisorClass {
    DivisorClass::from_multiplicities(d, m).expect("fixture class is valid")
}

fn sig(d: i64, m: &[i64]) -> OrbitSignature {
    OrbitSignature::new(d, m.to_vec())
}

fn deg2_pairs() -> Result<Cases> {
    let mut c = Cases::default();
    let line = cls(1, &[1, 0, 0, 0, 0, 0, 0]);
    let partners = finite_partners(&line)?;

    let mut by_sig: BTreeMap<String, usize> = BTreeMap::new();
    for (p, _) in &partners {
        *by_sig.entry(orbit_signature(p)?.to_string()).or_default() += 1;
    }
    let expected: BTreeMap<String, usize> = [
        (sig(3, &[2, 1, 1, 1, 1, 1, 0]), 6),
        (sig(4, &[2, 2, 2, 1, 1, 1, 1]), 20),
        (sig(5, &[2, 2, 2, 2, 2, 2, 1]), 7),
    ]
    .into_iter()
    .map(|(s, n)| (s.to_string(), n))
    .collect();
    c.check("partner signatures of H-E1", &expected, &by_sig);

    let wrong_degree: Vec<String> = partners
        .iter()
        .filter(|(p, rep)| {
            let want = match (p.degree(), p.multiplicities()[0]) {
                (5, 1) => 4,
                _ => 3,
            };
            rep.degree != want
        })
        .map(|(p, _)| p.to_string())
        .collect();
    c.check(
        "partner degree is 4 iff quintic with E1-coefficient 1",
        Vec::<String>::new(),
        wrong_degree,
    );

    let exceptional = enumerate_exceptional(7)?;
    let l2 = cls(1, &[1, 1, 0, 0, 0, 0, 0]);
    let f6 = cls(0, &[0, 0, 0, 0, 0, -1, 0]);
    let excluded = [
        (cls(1, &[0, 1, 0, 0, 0, 0, 0]), &l2),
        (cls(2, &[1, 1, 1, 1, 0, 0, 0]), &f6),
        (cls(3, &[2, 1, 1, 1, 1, 1, 0]), &l2),
        (cls(3, &[1, 2, 1, 1, 1, 1, 0]), &l2),
        (cls(4, &[2, 2, 2, 1, 1, 1, 1]), &l2),
    ];
    for (c2, named) in excluded {
        let rep = analyze_pair_with(&FibrationPair::new(line.clone(), c2.clone())?, &exceptional)?;
        c.check(format!("excluded {c2}: finite"), false, rep.is_finite);
        c.check(
            format!("excluded {c2}: contracts {named}"),
            true,
            rep.common_contracted.contains(named),
        );
    }

    let allowed = [
        (cls(3, &[0, 1, 1, 1, 1, 1, 2]), 3),
        (cls(4, &[1, 1, 1, 1, 2, 2, 2]), 3),
        (cls(5, &[1, 2, 2, 2, 2, 2, 2]), 4),
        (cls(5, &[2, 2, 2, 2, 2, 2, 1]), 3),
    ];
    for (c2, degree) in allowed {
        let rep = analyze_pair_with(&FibrationPair::new(line.clone(), c2.clone())?, &exceptional)?;
        c.check(
            format!("allowed {c2}: (finite, degree)"),
            (true, degree),
            (rep.is_finite, rep.degree),
        );
    }
    Ok(c)
}

fn quadric_target() -> Result<Cases> {
    let mut c = Cases::default();
    let mut with_pairs = Vec::new();
    for r in 1..=8 {
        let classes = classify_finite_pairs(r)?;
        let degrees: BTreeSet<i64> = classes.iter().map(|p| p.degree).collect();
        if !classes.is_empty() {
            with_pairs.push(9 - r as i64);
        }
        let bound = max_degree_bound(r)?;
        c.check(
            format!("r={r}: finite-pair degrees within {bound}"),
            true,
            degrees.iter().all(|d| *d <= bound),
        );
        let want: BTreeSet<i64> = match r {
            5 => [2].into(),
            7 => [3, 4].into(),
            _ => BTreeSet::new(),
        };
        if r != 8 {
            c.check(format!("r={r}: finite-pair degrees"), want, degrees);
        }
    }
    with_pairs.sort();
    c.check("K² values with finite pairs", [1, 2, 4], with_pairs);
    Ok(c)
}

fn hodge() -> Result<Cases> {
    let mut c = Cases::default();
    for r in 1..=8 {
        let model = SurfaceModel::blowup_p2(r)?;
        let conics = enumerate_conic(r)?;
        let m = conics.members();
        let mut pairs = 0usize;
        let mut violations = 0usize;
        let mut rhs = BTreeSet::new();
        for i in 0..m.len() {
            for j in (i + 1)..m.len() {
                let h = hodge_bound(model, &m[i], &m[j])?;
                pairs += 1;
                rhs.insert(h.rhs);
                if !h.holds {
                    violations += 1;
                }
            }
        }
        let n = m.len();
        c.check(
            format!("r={r}: pairs checked"),
            n * n.saturating_sub(1) / 2,
            pairs,
        );
        c.check(format!("r={r}: violations"), 0, violations);
        if pairs > 0 {
            c.check(format!("r={r}: right-hand side"), [16], rhs);
        }
        if r <= 6 {
            let table = PairTable::new(r)?;
            let mut max_finite = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if table.is_finite(i, j)? {
                        max_finite = max_finite.max(table.degree(i, j)?);
                    }
                }
            }
            c.check(
                format!("r={r}: finite-pair degree at most 2"),
                true,
                max_finite <= 2,
            );
        }
    }
    Ok(c)
}

fn cone_dp() -> Result<Cases> {
    let mut c = Cases::default();
    let models = (0..=8)
        .map(SurfaceModel::blowup_p2)
        .chain([SurfaceModel::product_p1(2)])
        .collect::<Result<Vec<_>>>()?;
    for model in models {
        let report = surface_cone_report(model)?;
        let r = model.blowup_points();
        c.check(
            format!("{model}: Nef = Psef"),
            r.is_none_or(|r| r == 0),
            report.equal,
        );
        c.check(
            format!("{model}: Mori cone simplicial"),
            r.is_none_or(|r| r <= 2),
            report.mori_simplicial,
        );
        let Some(r @ 1..) = r else { continue };
        let anti = -&model.canonical_class();
        let mut min_pair = i64::MAX;
        for g in psef_generators(model)? {
            min_pair = min_pair.min(anti.pairing(&g)?);
        }
        c.check(
            format!("r={r}: -K positive on Psef generators"),
            true,
            min_pair > 0,
        );
        let e1 = model.exceptional(1)?;
        c.check(
            format!("r={r}: E1 in Psef, not in Nef"),
            (true, false),
            (
                report.psef.contains_integer(e1.coords())?,
                report.nef.contains_integer(e1.coords())?,
            ),
        );
    }
    Ok(c)
}

fn double_cover_k() -> Result<Cases> {
    let mut c = Cases::default();
    let spec = |d: Vec<u32>| DoubleCoverSpec::new(d);
    c.check(
        "type (2,2) on P1xP1: (-K)^2",
        4,
        anticanonical_power(&spec(vec![1, 1])?)?,
    );
    let mut fact = 1i64;
    for n in 1..=6usize {
        fact *= n as i64;
        c.check(
            format!("n={n}, all d=1: (-K)^n"),
            2 * fact,
            anticanonical_power(&spec(vec![1; n])?)?,
        );
    }
    for n in 1..=5u32 {
        let mut disagree = 0usize;
        for code in 0..3usize.pow(n) {
            let d: Vec<u32> = (0..n).map(|i| (code / 3usize.pow(i) % 3) as u32).collect();
            let s = spec(d)?;
            if (anticanonical_power(&s)? > 0) != is_fano(&s) {
                disagree += 1;
            }
        }
        c.check(
            format!("n={n}: Fano iff (-K)^n > 0 on {{0,1,2}}^n"),
            0,
            disagree,
        );
    }
    c.check(
        "n=4, all d=1: Picard number",
        Some(4),
        expected_picard_number(&spec(vec![1; 4])?),
    );
    c.check(
        "n=2, all d=1: Picard number",
        None::<usize>,
        expected_picard_number(&spec(vec![1, 1])?),
    );
    Ok(c)
}

fn branch_singular() -> Result<Cases> {
    let mut c = Cases::default();
    let ex = singular_222_example();
    let p = ProductPoint::from_integers(&[(0, 1), (0, 1), (0, 1)])?;
    c.check(
        "(2,2,2) example at (0:1)^3",
        true,
        cover_singular_at(&ex, &p)?,
    );
    let scaled = ProductPoint::from_integers(&[(0, 3), (0, -2), (0, 5)])?;
    c.check(
        "(2,2,2) example at rescaled (0:1)^3",
        true,
        cover_singular_at(&ex, &scaled)?,
    );

    let q = |n: i64| num_rational::BigRational::from_integer(n.into());
    let double_line = MultiHomogPoly::new(2, vec![2, 2], vec![(vec![2, 0, 2, 0], q(1))])?;
    let pt = ProductPoint::from_integers(&[(0, 1), (1, 0)])?;
    c.check(
        "x0^2 y0^2 at (0:1)x(1:0)",
        true,
        cover_singular_at(&double_line, &pt)?,
    );

    let smooth = MultiHomogPoly::new(
        2,
        vec![2, 2],
        vec![(vec![2, 0, 2, 0], q(1)), (vec![0, 2, 0, 2], q(-1))],
    )?;
    let pt = ProductPoint::from_integers(&[(1, 1), (1, 1)])?;
    c.check(
        "x0^2 y0^2 - x1^2 y1^2 at (1:1)x(1:1)",
        false,
        cover_singular_at(&smooth, &pt)?,
    );
    Ok(c)
}

fn fiber_counts() -> Result<Cases> {
    let mut c = Cases::default();
    for r in 1..=8 {
        let exc = enumerate_exceptional(r)?;
        let mut counts = BTreeSet::new();
        for conic in enumerate_conic(r)?.members() {
            counts.insert(reducible_fibers(conic, &exc)?.len());
        }
        c.check(
            format!("r={r}: reducible fibers per conic class"),
            [r - 1],
            counts,
        );
    }
    for (total, fibers) in fiber_fixtures() {
        let r = total.model().blowup_points().expect("blow-up fixture");
        let exc = enumerate_exceptional(r)?;
        let got: BTreeSet<(String, String)> = reducible_fibers(&total, &exc)?
            .into_iter()
            .map(|f| unordered(&f.components.0, &f.components.1))
            .collect();
        let want: BTreeSet<(String, String)> =
            fibers.iter().map(|(a, b)| unordered(a, b)).collect();
        c.check(format!("fibers of {total}"), want, got);
    }
    Ok(c)
}

fn unordered(a: &DivisorClass, b: &DivisorClass) -> (String, String) {
    let (a, b) = (a.to_string(), b.to_string());
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Curve `C(d; points with multiplicity)` on the blow-up of `r` points;
/// `simple` and `double` are 1-based point indices.
fn curve(r: usize, d: i64, simple: &[usize], double: &[usize]) -> DivisorClass {
    let mut m = vec![0; r];
    simple.iter().for_each(|i| m[i - 1] = 1);
    double.iter().for_each(|i| m[i - 1] = 2);
    cls(d, &m)
}

fn point(r: usize, i: usize) -> DivisorClass {
    let mut m = vec![0; r];
    m[i - 1] = -1;
    cls(0, &m)
}

type Fixture = (DivisorClass, Vec<(DivisorClass, DivisorClass)>);

/// Explicit reducible-fiber lists: the cubic, quartic and quintic pencils on
/// seven points and the quartic pencil on eight points.
pub fn fiber_fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();

    // cubics through p2..p6, double at p7
    let mut fibers = vec![(curve(7, 3, &[1, 2, 3, 4, 5, 6], &[7]), point(7, 1))];
    for m in 2..=6 {
        let rest: Vec<usize> = (2..=6).filter(|i| *i != m).chain([7]).collect();
        fibers.push((curve(7, 2, &rest, &[]), curve(7, 1, &[m, 7], &[])));
    }
    out.push((curve(7, 3, &[2, 3, 4, 5, 6], &[7]), fibers));

    // quintics double at p1..p6 through p7; the conic avoids p7
    let mut fibers = Vec::new();
    for j in 1..=6 {
        let rest: Vec<usize> = (1..=6).filter(|i| *i != j).collect();
        let cubic_simple: Vec<usize> = rest.iter().copied().chain([7]).collect();
        fibers.push((curve(7, 3, &cubic_simple, &[j]), curve(7, 2, &rest, &[])));
    }
    out.push((curve(7, 5, &[7], &[1, 2, 3, 4, 5, 6]), fibers));

    // quartics through p1..p4, double at p5, p6, p7 (seven points) and
    // through p2..p5, double at p6, p7, p8 (eight points)
    for (r, simple, doubles) in [
        (7, vec![1, 2, 3, 4], [5, 6, 7]),
        (8, vec![2, 3, 4, 5], [6, 7, 8]),
    ] {
        let mut fibers = Vec::new();
        for (k, &i) in doubles.iter().enumerate() {
            let others: Vec<usize> = doubles
                .iter()
                .enumerate()
                .filter(|(t, _)| *t != k)
                .map(|(_, v)| *v)
                .collect();
            let cubic_simple: Vec<usize> = simple
                .iter()
                .copied()
                .chain(others.iter().copied())
                .collect();
            fibers.push((curve(r, 3, &cubic_simple, &[i]), curve(r, 1, &others, &[])));
        }
        let (a, rest) = (simple[0], &simple[1..]);
        for &b in rest {
            let pair: Vec<usize> = [a, b].into_iter().chain(doubles).collect();
            let co: Vec<usize> = rest
                .iter()
                .copied()
                .filter(|x| *x != b)
                .chain(doubles)
                .collect();
            fibers.push((curve(r, 2, &pair, &[]), curve(r, 2, &co, &[])));
        }
        if r == 8 {
            fibers.push((curve(8, 4, &[1, 2, 3, 4, 5], &doubles), point(8, 1)));
        }
        out.push((curve(r, 4, &simple, &doubles), fibers));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_add_up() {
        for (total, fibers) in fiber_fixtures() {
            let r = total.model().blowup_points().unwrap();
            assert_eq!(fibers.len(), r - 1, "{total}");
            for (a, b) in &fibers {
                assert_eq!(&(a + b), &total);
            }
        }
    }

    #[test]
    fn unknown_suite() {
        assert!(run("nope").is_err());
    }

    #[test]
    fn cheap_suites_pass() {
        for id in ["deg2-pairs", "double-cover-k", "branch-singular"] {
            let rep = run(id).unwrap();
            assert!(rep.passed, "{id}: {:?}", rep.failures().collect::<Vec<_>>());
            let cases: Vec<_> = rep.details.iter().map(|d| d.case.clone()).collect();
            let mut sorted = cases.clone();
            sorted.sort();
            assert_eq!(cases, sorted);
        }
    }
}
