//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every count or set produced by the library is compared against an oracle
//! written here from the defining equations, with its own loop structure.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use picardkit::cones::lp::in_cone;
use picardkit::cones::{dual_cone, psef_generators, surface_cone_report, BilinearForm, ConePoly};
use picardkit::doublecover::{
    anticanonical_power, cover_singular_at, is_fano, singular_222_example, DoubleCoverSpec,
    ProductPoint,
};
use picardkit::enumerate::{
    enumerate_conic, enumerate_exceptional, orbit_signature, orbits, reducible_fibers,
};
use picardkit::fibration::{classify_finite_pairs, finite_partners, PairTable};
use picardkit::lattice::{DivisorClass, SurfaceModel};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `(d, m₁, …, m_r)` for `dH − Σ mᵢEᵢ`.
type Vector = Vec<i64>;

fn pairing(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[0] - a[1..].iter().zip(&b[1..]).map(|(x, y)| x * y).sum::<i64>()
}

fn as_vector(c: &DivisorClass) -> Vector {
    let mut v = vec![c.degree()];
    v.extend(c.multiplicities());
    v
}

/// Brute-force solutions of `Σm² = d² − square`, `Σm = 3d + canonical`:
/// scan every degree allowed by Cauchy–Schwarz, then every non-increasing
/// multiplicity tuple in the box, then expand each into its distinct
/// permutations.
fn brute_force(r: usize, square: i64, canonical: i64) -> BTreeSet<Vector> {
    let mut out = BTreeSet::new();
    if r == 0 {
        return out;
    }
    let r_i = r as i64;
    for d in -50i64..=50 {
        let norm = d * d - square;
        let sum = 3 * d + canonical;
        if norm < 0 || sum * sum > r_i * norm {
            continue;
        }
        let bound = (norm as f64).sqrt() as i64 + 1;
        let mut tuple = vec![0i64; r];
        sorted_tuples(&mut tuple, 0, bound, -bound, &mut |t| {
            if t.iter().map(|x| x * x).sum::<i64>() == norm && t.iter().sum::<i64>() == sum {
                for p in distinct_permutations(t) {
                    let mut v = vec![d];
                    v.extend(p);
                    out.insert(v);
                }
            }
        });
    }
    out
}

fn sorted_tuples(t: &mut Vec<i64>, pos: usize, hi: i64, lo: i64, f: &mut impl FnMut(&[i64])) {
    if pos == t.len() {
        f(t);
        return;
    }
    for v in (lo..=hi).rev() {
        t[pos] = v;
        sorted_tuples(t, pos + 1, v, lo, f);
    }
}

fn distinct_permutations(t: &[i64]) -> Vec<Vec<i64>> {
    let mut cur = t.to_vec();
    cur.sort();
    let mut out = vec![cur.clone()];
    // next lexicographic permutation
    loop {
        let Some(i) = (0..cur.len().saturating_sub(1))
            .rev()
            .find(|&i| cur[i] < cur[i + 1])
        else {
            return out;
        };
        let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}

fn exceptional_oracle(r: usize) -> BTreeSet<Vector> {
    brute_force(r, -1, -1)
}

fn conic_oracle(r: usize) -> BTreeSet<Vector> {
    brute_force(r, 0, -2)
}

fn family_vectors(members: &[DivisorClass]) -> BTreeSet<Vector> {
    members.iter().map(as_vector).collect()
}

fn criterion_1() -> Check {
    let expected = [0, 1, 3, 6, 10, 16, 27, 56, 240];
    for (r, want) in expected.iter().enumerate() {
        let fam = enumerate_exceptional(r).map_err(|e| e.to_string())?;
        let oracle = exceptional_oracle(r);
        ensure(fam.len() == *want, || {
            format!("r={r}: {} classes, expected {want}", fam.len())
        })?;
        ensure(family_vectors(fam.members()) == oracle, || {
            format!("r={r}: enumerator and brute force disagree")
        })?;
    }
    Ok(())
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn criterion_2() -> Check {
    let fam = enumerate_conic(7).map_err(|e| e.to_string())?;
    let oracle = conic_oracle(7);
    ensure(fam.len() == 126, || format!("{} conic classes", fam.len()))?;
    ensure(family_vectors(fam.members()) == oracle, || {
        "enumerator and brute force disagree".into()
    })?;

    // orbit sizes from multinomials over the sorted tuples
    let mut oracle_orbits: BTreeMap<(i64, Vec<i64>), usize> = BTreeMap::new();
    for v in &oracle {
        let mut m = v[1..].to_vec();
        m.sort_by(|a, b| b.cmp(a));
        let mut runs: BTreeMap<i64, usize> = BTreeMap::new();
        m.iter().for_each(|x| *runs.entry(*x).or_default() += 1);
        let size = factorial(7) / runs.values().map(|k| factorial(*k)).product::<usize>();
        oracle_orbits.insert((v[0], m), size);
    }
    let want: BTreeMap<(i64, Vec<i64>), usize> = [
        ((1, vec![1, 0, 0, 0, 0, 0, 0]), 7),
        ((2, vec![1, 1, 1, 1, 0, 0, 0]), 35),
        ((3, vec![2, 1, 1, 1, 1, 1, 0]), 42),
        ((4, vec![2, 2, 2, 1, 1, 1, 1]), 35),
        ((5, vec![2, 2, 2, 2, 2, 2, 1]), 7),
    ]
    .into();
    ensure(oracle_orbits == want, || {
        format!("oracle orbits {oracle_orbits:?}")
    })?;
    let got: BTreeMap<(i64, Vec<i64>), usize> = orbits(&fam)
        .into_iter()
        .map(|(s, cs)| ((s.degree, s.multiplicities), cs.len()))
        .collect();
    ensure(got == want, || format!("library orbits {got:?}"))
}

/// Pairs of conic vectors contracting a common exceptional class, found by
/// grouping conics under each exceptional class rather than pair by pair.
fn shared_contraction_pairs(conics: &[Vector], exceptional: &[Vector]) -> HashSet<(usize, usize)> {
    let mut shared = HashSet::new();
    for e in exceptional {
        let under: Vec<usize> = (0..conics.len())
            .filter(|&i| pairing(e, &conics[i]) == 0)
            .collect();
        for (a, &i) in under.iter().enumerate() {
            for &j in &under[a + 1..] {
                shared.insert((i, j));
            }
        }
    }
    shared
}

fn criterion_3() -> Check {
    let conics: Vec<Vector> = conic_oracle(7).into_iter().collect();
    let exceptional: Vec<Vector> = exceptional_oracle(7).into_iter().collect();
    let line = vec![1, 1, 0, 0, 0, 0, 0, 0];
    let mut oracle_partners = BTreeMap::new();
    for c in &conics {
        if *c == line || pairing(c, &line) <= 0 {
            continue;
        }
        if !exceptional
            .iter()
            .any(|e| pairing(e, c) == 0 && pairing(e, &line) == 0)
        {
            oracle_partners.insert(c.clone(), pairing(c, &line));
        }
    }

    let c1 =
        DivisorClass::from_multiplicities(1, &[1, 0, 0, 0, 0, 0, 0]).map_err(|e| e.to_string())?;
    let partners = finite_partners(&c1).map_err(|e| e.to_string())?;
    let got: BTreeMap<Vector, i64> = partners
        .iter()
        .map(|(c, rep)| (as_vector(c), rep.degree))
        .collect();
    ensure(got == oracle_partners, || {
        "finite partners disagree with oracle".into()
    })?;

    let mut sigs = BTreeSet::new();
    for (c, _) in &partners {
        let s = orbit_signature(c).map_err(|e| e.to_string())?;
        sigs.insert((s.degree, s.multiplicities));
    }
    let want: BTreeSet<(i64, Vec<i64>)> = [
        (3, vec![2, 1, 1, 1, 1, 1, 0]),
        (4, vec![2, 2, 2, 1, 1, 1, 1]),
        (5, vec![2, 2, 2, 2, 2, 2, 1]),
    ]
    .into();
    ensure(sigs == want, || format!("partner signatures {sigs:?}"))?;

    for (v, degree) in &oracle_partners {
        let want = match (v[0], v[1]) {
            (3, _) | (4, _) => 3,
            (5, 1) => 4,
            (5, 2) => 3,
            _ => return Err(format!("unexpected partner {v:?}")),
        };
        ensure(*degree == want, || {
            format!("{v:?} has degree {degree}, expected {want}")
        })?;
    }

    let l2 = vec![1, 1, 1, 0, 0, 0, 0, 0];
    let f6 = vec![0, 0, 0, 0, 0, 0, -1, 0];
    let excluded: [(Vector, &Vector); 5] = [
        (vec![1, 0, 1, 0, 0, 0, 0, 0], &l2),
        (vec![2, 1, 1, 1, 1, 0, 0, 0], &f6),
        (vec![3, 2, 1, 1, 1, 1, 1, 0], &l2),
        (vec![3, 1, 2, 1, 1, 1, 1, 0], &l2),
        (vec![4, 2, 2, 2, 1, 1, 1, 1], &l2),
    ];
    let exc_fam = enumerate_exceptional(7).map_err(|e| e.to_string())?;
    for (c2, named) in &excluded {
        let class =
            DivisorClass::from_multiplicities(c2[0], &c2[1..]).map_err(|e| e.to_string())?;
        let pair = picardkit::fibration::FibrationPair::new(c1.clone(), class)
            .map_err(|e| e.to_string())?;
        let rep =
            picardkit::fibration::analyze_pair_with(&pair, &exc_fam).map_err(|e| e.to_string())?;
        let common: BTreeSet<Vector> = rep.common_contracted.iter().map(as_vector).collect();
        ensure(!rep.is_finite && common.contains(*named), || {
            format!("{c2:?}: common contracted {common:?} lacks {named:?}")
        })?;
    }
    Ok(())
}

fn criterion_4() -> Check {
    let mut with_pairs = BTreeSet::new();
    for r in 1..=8usize {
        let k2 = 9 - r as i64;
        let conics: Vec<Vector> = conic_oracle(r).into_iter().collect();
        let exceptional: Vec<Vector> = exceptional_oracle(r).into_iter().collect();
        let shared = shared_contraction_pairs(&conics, &exceptional);
        let mut finite: BTreeMap<i64, usize> = BTreeMap::new();
        for i in 0..conics.len() {
            for j in i + 1..conics.len() {
                let deg = pairing(&conics[i], &conics[j]);
                ensure(2 * k2 * deg <= 16, || format!("r={r}: Hodge bound fails"))?;
                if deg > 0 && !shared.contains(&(i, j)) {
                    *finite.entry(deg).or_default() += 1;
                }
            }
        }
        if k2 >= 3 {
            ensure(finite.keys().all(|d| *d <= 2), || {
                format!("r={r}: finite degrees {finite:?}")
            })?;
        }
        if !finite.is_empty() {
            with_pairs.insert(k2);
        }

        let classes = classify_finite_pairs(r).map_err(|e| e.to_string())?;
        let mut got: BTreeMap<i64, usize> = BTreeMap::new();
        classes
            .iter()
            .for_each(|p| *got.entry(p.degree).or_default() += p.count);
        ensure(got == finite, || {
            format!("r={r}: library {got:?} vs oracle {finite:?}")
        })?;
    }
    ensure(with_pairs == [1, 2, 4].into(), || {
        format!("finite pairs for K² in {with_pairs:?}")
    })?;

    // the quartic pencil on eight points is a finite partner of the line pencil
    let table = PairTable::new(8).map_err(|e| e.to_string())?;
    let find = |d: i64, m: &[i64]| {
        let c = DivisorClass::from_multiplicities(d, m).unwrap();
        table.conics.position(&c).unwrap()
    };
    let (i, j) = (
        find(1, &[1, 0, 0, 0, 0, 0, 0, 0]),
        find(4, &[0, 1, 1, 1, 1, 2, 2, 2]),
    );
    let deg = table.degree(i, j).map_err(|e| e.to_string())?;
    let fin = table.is_finite(i, j).map_err(|e| e.to_string())?;
    ensure(deg == 4 && fin, || {
        format!("quartic pencil pair: degree {deg}, finite {fin}")
    })
}

fn criterion_5() -> Check {
    for r in 1..=8usize {
        let exceptional = exceptional_oracle(r);
        let exc_fam = enumerate_exceptional(r).map_err(|e| e.to_string())?;
        for c in enumerate_conic(r).map_err(|e| e.to_string())?.members() {
            let v = as_vector(c);
            // unordered {x, c − x} with both exceptional and meeting once
            let oracle = exceptional
                .iter()
                .filter(|x| {
                    let y: Vector = v.iter().zip(x.iter()).map(|(p, q)| p - q).collect();
                    *x < &y && exceptional.contains(&y) && pairing(x, &y) == 1
                })
                .count();
            let got = reducible_fibers(c, &exc_fam)
                .map_err(|e| e.to_string())?
                .len();
            ensure(oracle == r - 1 && got == r - 1, || {
                format!("{c}: oracle {oracle}, library {got}, expected {}", r - 1)
            })?;
        }
    }

    // 4H − E2 − … − E5 − 2E6 − 2E7 − 2E8, written out component by component
    let fibers: [(&[i64], &[i64]); 7] = [
        (&[3, 0, 1, 1, 1, 1, 2, 1, 1], &[1, 0, 0, 0, 0, 0, 0, 1, 1]),
        (&[3, 0, 1, 1, 1, 1, 1, 2, 1], &[1, 0, 0, 0, 0, 0, 1, 0, 1]),
        (&[3, 0, 1, 1, 1, 1, 1, 1, 2], &[1, 0, 0, 0, 0, 0, 1, 1, 0]),
        (&[2, 0, 1, 1, 0, 0, 1, 1, 1], &[2, 0, 0, 0, 1, 1, 1, 1, 1]),
        (&[2, 0, 1, 0, 1, 0, 1, 1, 1], &[2, 0, 0, 1, 0, 1, 1, 1, 1]),
        (&[2, 0, 1, 0, 0, 1, 1, 1, 1], &[2, 0, 0, 1, 1, 0, 1, 1, 1]),
        (&[4, 1, 1, 1, 1, 1, 2, 2, 2], &[0, -1, 0, 0, 0, 0, 0, 0, 0]),
    ];
    let sorted = |a: Vector, b: Vector| if a <= b { (a, b) } else { (b, a) };
    let want: BTreeSet<(Vector, Vector)> = fibers
        .iter()
        .map(|(a, b)| sorted(a.to_vec(), b.to_vec()))
        .collect();
    let quartic = DivisorClass::from_multiplicities(4, &[0, 1, 1, 1, 1, 2, 2, 2]).unwrap();
    let exc_fam = enumerate_exceptional(8).map_err(|e| e.to_string())?;
    let got: BTreeSet<(Vector, Vector)> = reducible_fibers(&quartic, &exc_fam)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|f| sorted(as_vector(&f.components.0), as_vector(&f.components.1)))
        .collect();
    ensure(got == want, || format!("quartic pencil fibers {got:?}"))
}

fn criterion_6() -> Check {
    let power =
        |d: &[u32]| anticanonical_power(&DoubleCoverSpec::new(d.to_vec()).unwrap()).unwrap();
    ensure(power(&[1, 1]) == 4, || "(2,2) cover of P1xP1".into())?;
    for n in 1..=6 {
        let want = 2 * factorial(n) as i64;
        ensure(power(&vec![1; n]) == want, || {
            format!("n={n}: expected {want}")
        })?;
    }
    for n in 1..=5u32 {
        for code in 0..3u32.pow(n) {
            let d: Vec<u32> = (0..n).map(|i| code / 3u32.pow(i) % 3).collect();
            let formula =
                2 * factorial(n as usize) as i64 * d.iter().map(|x| 2 - *x as i64).product::<i64>();
            let spec = DoubleCoverSpec::new(d.clone()).unwrap();
            let p = anticanonical_power(&spec).unwrap();
            ensure(p == formula, || format!("{d:?}: {p} vs {formula}"))?;
            ensure((p > 0) == is_fano(&spec), || {
                format!("{d:?}: Fano disagrees with sign")
            })?;
        }
    }
    Ok(())
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn random_cone_fixtures() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c0e5);
    for case in 0..100 {
        let dim = rng.gen_range(1..=6usize);
        let k = rng.gen_range(0..=dim + 4);
        let gens: Vec<Vec<i64>> = (0..k)
            .map(|_| (0..dim).map(|_| rng.gen_range(-3..=3)).collect())
            .collect();
        let cone = ConePoly::from_integer_generators(dim, &gens).map_err(|e| e.to_string())?;
        let form = BilinearForm::dot(dim);
        let dual = dual_cone(&cone, &form).map_err(|e| e.to_string())?;
        let bidual = dual_cone(&dual, &form).map_err(|e| e.to_string())?;
        ensure(bidual.same_cone(&cone).map_err(|e| e.to_string())?, || {
            format!("case {case}: double dual differs for {gens:?}")
        })?;

        let facets = cone.facets().map_err(|e| e.to_string())?;
        let eqs = cone.equations().map_err(|e| e.to_string())?;
        for g in &gens {
            let dot = |n: &Vec<i64>| n.iter().zip(g).map(|(a, b)| a * b).sum::<i64>();
            ensure(
                facets.iter().all(|f| dot(f) >= 0) && eqs.iter().all(|e| dot(e) == 0),
                || format!("case {case}: generator {g:?} violates the H-representation"),
            )?;
        }

        let qgens: Vec<Vec<BigRational>> = gens
            .iter()
            .map(|g| g.iter().map(|x| q(*x)).collect())
            .collect();
        let mut inside = 0;
        for t in 0..100 {
            // half the points are nonnegative combinations of the generators
            let x: Vec<BigRational> = if t % 2 == 0 && !qgens.is_empty() {
                let mut x = vec![BigRational::zero(); dim];
                for g in &qgens {
                    let w =
                        BigRational::new(rng.gen_range(0..=4).into(), rng.gen_range(1..=3).into());
                    x.iter_mut().zip(g).for_each(|(a, b)| *a += &w * b);
                }
                x
            } else {
                (0..dim).map(|_| random_rational(&mut rng)).collect()
            };
            let by_facets = cone.contains(&x).map_err(|e| e.to_string())?;
            let by_lp = in_cone(&qgens, &x).map_err(|e| e.to_string())?;
            ensure(by_facets == by_lp, || {
                format!("case {case}: {x:?} facets say {by_facets}, LP says {by_lp}")
            })?;
            inside += usize::from(by_lp);
        }
        ensure(k == 0 || inside >= 50, || {
            format!("case {case}: combinations fell outside")
        })?;
    }
    Ok(())
}

fn criterion_7() -> Check {
    let mut models: Vec<SurfaceModel> = (0..=8)
        .map(|r| SurfaceModel::blowup_p2(r).unwrap())
        .collect();
    models.push(SurfaceModel::product_p1(2).unwrap());
    for model in models {
        let report = surface_cone_report(model).map_err(|e| e.to_string())?;
        let want = matches!(model.blowup_points(), None | Some(0));
        ensure(report.equal == want, || {
            format!("{model}: equal = {}", report.equal)
        })?;
        let Some(r @ 1..) = model.blowup_points() else {
            continue;
        };

        let k = as_vector(&model.canonical_class());
        for g in psef_generators(model).map_err(|e| e.to_string())? {
            let value = -pairing(&k, &as_vector(&g));
            ensure(value > 0, || format!("r={r}: -K.{g} = {value}"))?;
        }
        let e1 = model.exceptional(1).map_err(|e| e.to_string())?;
        let in_psef = report
            .psef
            .contains_integer(e1.coords())
            .map_err(|e| e.to_string())?;
        let in_nef = report
            .nef
            .contains_integer(e1.coords())
            .map_err(|e| e.to_string())?;
        ensure(in_psef && !in_nef, || {
            format!("r={r}: E1 in Psef {in_psef}, in Nef {in_nef}")
        })?;
    }
    random_cone_fixtures()
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(
        BigInt::from(rng.gen_range(-9i64..=9)),
        BigInt::from(rng.gen_range(1i64..=5)),
    )
}

fn random_nonzero(rng: &mut ChaCha8Rng) -> BigRational {
    loop {
        let v = random_rational(rng);
        if !v.is_zero() {
            return v;
        }
    }
}

fn criterion_8() -> Check {
    let ex = singular_222_example();
    let p = ProductPoint::from_integers(&[(0, 1), (0, 1), (0, 1)]).unwrap();
    ensure(
        cover_singular_at(&ex, &p).map_err(|e| e.to_string())?,
        || "example not singular at P".into(),
    )?;

    // ∂p/∂v at the rescaled point is λ_i^{deg_i − [v in factor i]} times the
    // original value, factor by factor
    let mut rng = ChaCha8Rng::seed_from_u64(0xb2a7c4);
    for case in 0..50 {
        let coords: Vec<(BigRational, BigRational)> = (0..3)
            .map(|_| loop {
                let (a, b) = (random_rational(&mut rng), random_rational(&mut rng));
                if !(a.is_zero() && b.is_zero()) {
                    break (a, b);
                }
            })
            .collect();
        let pt = ProductPoint::new(coords).unwrap();
        let lambdas: Vec<BigRational> = (0..3).map(|_| random_nonzero(&mut rng)).collect();
        let mut scaled = pt.clone();
        for (i, l) in lambdas.iter().enumerate() {
            scaled = scaled.rescaled(i, l).unwrap();
        }
        let g0 = ex.gradient(&pt).map_err(|e| e.to_string())?;
        let g1 = ex.gradient(&scaled).map_err(|e| e.to_string())?;
        for v in 0..6 {
            let mut factor = BigRational::one();
            for (i, l) in lambdas.iter().enumerate() {
                let e = ex.multidegree()[i] as usize - usize::from(v / 2 == i);
                factor *= num_traits::pow(l.clone(), e);
            }
            ensure(g1[v] == &g0[v] * &factor, || {
                format!("case {case}: variable {v} scales wrongly")
            })?;
        }
        ensure(
            g0.iter().all(Zero::is_zero) == g1.iter().all(Zero::is_zero),
            || format!("case {case}: vanishing of the gradient changed"),
        )?;

        // the special point itself, rescaled by the same factors
        let mut sp = p.clone();
        for (i, l) in lambdas.iter().enumerate() {
            sp = sp.rescaled(i, l).unwrap();
        }
        ensure(
            cover_singular_at(&ex, &sp).map_err(|e| e.to_string())?,
            || format!("case {case}: rescaled P not singular"),
        )?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "exceptional-class counts agree with brute force",
            criterion_1,
            Duration::from_secs(1),
        ),
        (
            "126 conic classes in five orbits on seven points",
            criterion_2,
            Duration::from_secs(1),
        ),
        (
            "finite partners of the line pencil on seven points",
            criterion_3,
            Duration::from_secs(1),
        ),
        (
            "Hodge bound and finite pairs exactly for K² in {1,2,4}",
            criterion_4,
            Duration::from_secs(5),
        ),
        (
            "reducible fibers: 8 - K² per conic, quartic pencil list",
            criterion_5,
            Duration::from_secs(5),
        ),
        (
            "double-cover anticanonical degrees and Fano criterion",
            criterion_6,
            Duration::from_secs(1),
        ),
        (
            "Nef vs Psef, -K positivity, random cone fixtures",
            criterion_7,
            Duration::from_secs(10),
        ),
        (
            "branch singularity and rescaling invariance",
            criterion_8,
            Duration::from_secs(1),
        ),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let status = match (&result, elapsed <= *budget) {
            (Ok(()), true) => "PASS".to_string(),
            (Ok(()), false) => format!("FAIL (over the {}s budget)", budget.as_secs()),
            (Err(e), _) => format!("FAIL ({e})"),
        };
        if !status.starts_with("PASS") {
            failed += 1;
        }
        println!(
            "criterion {}: {status} - {name} [{:.2}s]",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
