//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;
use std::time::{Duration, Instant};

use groth_core::bubbling::{
    admissible_targets, canonical_sequence, d_f, d_top, enumerate_bd, enumerate_sbd, f_top, is_admissible,
    remove_dead_check_with,
};
use groth_core::polyhedra::{
    a_matrix, a_matrix_det, column_fill, fill_capacity, is_schubitope, is_submodular,
    lattice_points, m_convex_check, matrix_text, vn_precedes, z_from_points, PointSet,
};
use groth_core::weyl::{conjecture1_check, elements, mask_of, theta_mask, ProportionalityCheck};
use groth_core::{
    grothendieck, rothe_bubbling, schubitope_support, weigandt_sum, BubblingDiagram, Diagram, MultiPoly,
    Permutation, SchubertMatroid,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = Result<(), String>;

fn p(s: &str) -> Permutation {
    s.parse().unwrap()
}

/// First error over `items`, in input order.
fn all_ok<T: Sync>(items: &[T], f: impl Fn(&T) -> Outcome + Sync + Send) -> Outcome {
    let results: Vec<Outcome> = items.par_iter().map(f).collect();
    results.into_iter().collect()
}

fn within(label: &str, start: Instant, budget: Duration) -> Outcome {
    let t = start.elapsed();
    if t > budget {
        return Err(format!("{label} took {t:?}, budget {budget:?}"));
    }
    Ok(())
}

fn same_sets(w: &Permutation, got: &BTreeSet<Vec<u32>>, want: &BTreeSet<Vec<u32>>) -> Outcome {
    if got == want {
        return Ok(());
    }
    let extra: Vec<_> = got.difference(want).collect();
    let missing: Vec<_> = want.difference(got).collect();
    Err(format!("{w}: extra {extra:?}, missing {missing:?}"))
}

fn criterion1() -> Outcome {
    let start = Instant::now();
    all_ok(&Permutation::all(5), |w| {
        let b = weigandt_sum(w).map_err(|e| format!("{w}: {e}"))?;
        (b == *grothendieck(w)).then_some(()).ok_or(format!("{w}: sums differ"))
    })?;
    within("S_5", start, Duration::from_secs(60))?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let sample: Vec<Permutation> = (0..50)
        .map(|_| {
            let mut e: Vec<usize> = (1..=6).collect();
            e.shuffle(&mut rng);
            Permutation::new(e).unwrap()
        })
        .collect();
    let start = Instant::now();
    all_ok(&sample, |w| {
        let b = weigandt_sum(w).map_err(|e| format!("{w}: {e}"))?;
        (b == *grothendieck(w)).then_some(()).ok_or(format!("{w}: sums differ"))
    })?;
    within("50 random S_6", start, Duration::from_secs(600))
}

fn criterion2() -> Outcome {
    let start = Instant::now();
    all_ok(&Permutation::all_vexillary(6), |w| {
        let weights: BTreeSet<Vec<u32>> = enumerate_bd(&rothe_bubbling(w)).iter().map(|d| d.weight()).collect();
        same_sets(w, &weights, &grothendieck(w).support())
    })?;
    within("vexillary S_6", start, Duration::from_secs(900))
}

/// Sets `R` with `|R| = |S|` lying elementwise below `S`, including `S`.
fn dominated(s: &[usize], n: usize) -> Vec<Vec<usize>> {
    (0..1u32 << n)
        .map(elements)
        .filter(|r| r.len() == s.len() && r.iter().zip(s).all(|(a, b)| a <= b))
        .collect()
}

/// Every diagram below `d` columnwise.
fn below(d: &Diagram) -> BTreeSet<Diagram> {
    let mut acc: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for col in d.columns() {
        let opts = dominated(&col, d.n());
        acc = acc
            .into_iter()
            .flat_map(|pre| {
                opts.iter().map(move |c| {
                    let mut v = pre.clone();
                    v.push(c.clone());
                    v
                })
            })
            .collect();
    }
    acc.into_iter().map(|cols| Diagram::from_columns(d.n(), &cols).unwrap()).collect()
}

fn criterion3() -> Outcome {
    all_ok(&Permutation::all_vexillary(5), |w| {
        let sbd = enumerate_sbd(w).map_err(|e| format!("{w}: {e}"))?;
        let weights: BTreeSet<Vec<u32>> = sbd.iter().map(|d| d.weight()).collect();
        same_sets(w, &weights, &grothendieck(w).support())?;
        let cells: BTreeSet<Diagram> = sbd.iter().map(|d| d.cells()).collect();
        let top = f_top(w).map_err(|e| e.to_string())?;
        let mut want = BTreeSet::new();
        let mut f = vec![0usize; top.len()];
        loop {
            want.extend(below(&d_f(w, &f).map_err(|e| e.to_string())?));
            let Some(j) = (0..f.len()).find(|&j| f[j] < top[j]) else { break };
            f[j] += 1;
            f[..j].iter_mut().for_each(|x| *x = 0);
        }
        (cells == want)
            .then_some(())
            .ok_or(format!("{w}: {} SBD cell sets, {} fill-dominated diagrams", cells.len(), want.len()))
    })
}

fn criterion4() -> Outcome {
    let start = Instant::now();
    all_ok(&Permutation::all_vexillary(6), |w| {
        let top = grothendieck(w).top_component().map_err(|e| e.to_string())?;
        let d = d_top(w).map_err(|e| format!("{w}: {e}"))?.cells();
        same_sets(w, &schubitope_support(&d), &top.support())
    })?;
    within("vexillary S_6", start, Duration::from_secs(900))
}

fn saturated_m_convex(w: &Permutation, label: &str, poly: &MultiPoly) -> Outcome {
    let pts = PointSet::from_support(poly);
    if !m_convex_check(&pts) {
        return Err(format!("{w} {label}: not M-convex"));
    }
    let z = z_from_points(&pts).map_err(|e| e.to_string())?;
    let l = lattice_points(&z).map_err(|e| format!("{w} {label}: {e}"))?;
    (l == pts).then_some(()).ok_or(format!("{w} {label}: {} lattice points, {} in support", l.len(), pts.len()))
}

fn criterion5() -> Outcome {
    all_ok(&Permutation::all_vexillary(6), |w| {
        let g = grothendieck(w);
        saturated_m_convex(w, "homogenized", &g.homogenize().map_err(|e| e.to_string())?)?;
        for d in g.min_degree().unwrap()..=g.degree().unwrap() {
            saturated_m_convex(w, &format!("degree {d}"), &g.homogeneous_component(d))?;
        }
        Ok(())
    })
}

fn criterion6() -> Outcome {
    for (n, golden) in [(3, include_str!("../golden/a3.txt")), (4, include_str!("../golden/a4.txt"))] {
        let got = matrix_text(&a_matrix(n).map_err(|e| e.to_string())?);
        if got.as_bytes() != golden.as_bytes() {
            return Err(format!("A_{n} differs from the displayed matrix:\n{got}"));
        }
    }
    for n in 1..=8 {
        let d = a_matrix_det(n).map_err(|e| e.to_string())?;
        if d != BigInt::from(1) {
            return Err(format!("det A_{n} = {d}"));
        }
    }
    Ok(())
}

/// Expansion of `z` from the support of `poly` against the expected nonzero
/// coefficients; `z` must be submodular and not a Schubitope.
fn expansion_matches(poly: &MultiPoly, want: &[(&[usize], i64)]) -> Outcome {
    let z = z_from_points(&PointSet::from_support(poly)).map_err(|e| e.to_string())?;
    if !is_submodular(&z) {
        return Err("z is not submodular".into());
    }
    let decision = is_schubitope(&z).map_err(|e| e.to_string())?;
    if decision.is_schubitope {
        return Err("reported as a Schubitope".into());
    }
    let got: BTreeMap<Vec<usize>, BigRational> = decision.expansion.nonzero().into_iter().collect();
    let want: BTreeMap<Vec<usize>, BigRational> =
        want.iter().map(|(s, c)| (s.to_vec(), BigRational::from_integer((*c).into()))).collect();
    (got == want).then_some(()).ok_or(format!("expansion {got:?}"))
}

fn criterion7() -> Outcome {
    let start = Instant::now();
    let w = p("14253");
    let g = grothendieck(&w).homogeneous_component(w.length() as u32 + 1);
    expansion_matches(&g, &[(&[1, 2], 1), (&[2, 4], 1), (&[1, 2, 4], -1), (&[2, 3, 4], 1)])?;
    within("14253", start, Duration::from_secs(5))
}

fn criterion8() -> Outcome {
    let start = Instant::now();
    let w = p("2168534(10)79");
    let top = grothendieck(&w).top_component().map_err(|e| e.to_string())?;
    expansion_matches(
        &top,
        &[
            (&[1], 1),
            (&[2, 3, 4], -1),
            (&[1, 2, 3, 4], 2),
            (&[3, 4, 5], 1),
            (&[1, 2, 3, 4, 5], 1),
            (&[2, 3, 4, 8], 1),
            (&[1, 2, 3, 4, 5, 6, 7, 8], 1),
        ],
    )?;
    within("S_10 expansion", start, Duration::from_secs(900))?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = || {
        let t = Instant::now();
        let out = Command::new(env!("CARGO_BIN_EXE_groth"))
            .args(["verify", "counterexamples", "--cache-dir"])
            .arg(dir.path())
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("verify counterexamples failed: {}", String::from_utf8_lossy(&out.stdout)));
        }
        Ok(t.elapsed())
    };
    run()?;
    let rerun = run()?;
    if rerun > Duration::from_secs(5) {
        return Err(format!("cached rerun took {rerun:?}"));
    }
    Ok(())
}

fn criterion9() -> Outcome {
    all_ok(&Permutation::all_vexillary(5), |w| {
        let g = grothendieck(w);
        let odd = (g.degree().unwrap() as usize - w.length()) % 2 == 1;
        match conjecture1_check(w).map_err(|e| format!("{w}: {e}"))? {
            ProportionalityCheck::Multiple { m } => {
                let m = if odd { -m } else { m };
                (m > BigInt::from(0)).then_some(()).ok_or(format!("{w}: multiple has the wrong sign"))
            }
            ProportionalityCheck::Counterexample { weight, top, chi, .. } => {
                Err(format!("{w}: at {weight:?} top has {top}, chi has {chi}"))
            }
        }
    })
}

fn criterion10() -> Outcome {
    for n in 1..=6 {
        for i in 1..1u32 << n {
            let m = SchubertMatroid::new(n, &elements(i)).unwrap();
            for j in 0..1u32 << n {
                if theta_mask(i, j, n) as usize != m.rank_bruteforce(&elements(j)) {
                    return Err(format!("theta differs at n = {n}, I = {:?}, J = {:?}", elements(i), elements(j)));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=12);
        let i = rng.gen_range(1..1u32 << n);
        let j = rng.gen_range(0..1u32 << n);
        let m = SchubertMatroid::new(n, &elements(i)).unwrap();
        if theta_mask(i, j, n) as usize != m.rank_bruteforce(&elements(j)) {
            return Err(format!("theta differs at n = {n}, I = {:?}, J = {:?}", elements(i), elements(j)));
        }
    }
    for n in 1..=7 {
        let last = 1u32 << (n - 1);
        for i in 1..1u32 << n {
            let rest = i & !last;
            for j in 1..1u32 << n {
                let r = theta_mask(i, j, n);
                let fail = |item: u8| Err(format!("rank lemma item {item} at n = {n}, I = {:?}, J = {:?}", elements(i), elements(j)));
                let (ni, nj) = (i & last != 0, j & last != 0);
                if n > 1 && !ni && !nj && r != theta_mask(i, j, n - 1) {
                    return fail(1);
                }
                if ni && !nj && r != theta_mask(i, j & !last, n) {
                    return fail(2);
                }
                if !ni && nj && r != theta_mask(i, j & !last, n) {
                    return fail(2);
                }
                if ni && nj && i != last && r != theta_mask(rest, j & !last, n) + 1 {
                    return fail(3);
                }
                if ni && !nj && i != last && rest != j && vn_precedes(rest, j) && r != theta_mask(rest, j, n) + 1 {
                    return fail(4);
                }
            }
            if vn_precedes(last, i) && i != last && theta_mask(i, rest, n) != theta_mask(rest, rest, n) {
                return Err(format!("rank lemma item 5 at n = {n}, I = {:?}", elements(i)));
            }
        }
        for s_mask in 1..1u32 << n {
            let set = elements(s_mask);
            for &s in &set {
                let d = fill_capacity(&set, s);
                let full = mask_of(&column_fill(&set, s, d).unwrap());
                for k in 0..=d {
                    let fk = mask_of(&column_fill(&set, s, k).unwrap());
                    for j in 0..1u32 << n {
                        if theta_mask(fk, j, n) != theta_mask(full, j, n).min(theta_mask(s_mask, j, n) + k as u32) {
                            return Err(format!("min formula at n = {n}, S = {set:?}, s = {s}, k = {k}, J = {:?}", elements(j)));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Every (cells, dead) pair on an `n × k` grid with dead ⊆ cells.
fn all_pairs(n: usize, k: usize) -> Vec<(Diagram, Diagram)> {
    let cells: Vec<(usize, usize)> = (1..=n).flat_map(|i| (1..=k).map(move |j| (i, j))).collect();
    (0..3usize.pow(cells.len() as u32))
        .map(|mut code| {
            let (mut dp, mut fp) = (Vec::new(), Vec::new());
            for &c in &cells {
                match code % 3 {
                    1 => dp.push(c),
                    2 => {
                        dp.push(c);
                        fp.push(c);
                    }
                    _ => {}
                }
                code /= 3;
            }
            (Diagram::new(n, k, dp).unwrap(), Diagram::new(n, k, fp).unwrap())
        })
        .collect()
}

fn criterion11() -> Outcome {
    all_ok(&Permutation::all_vexillary(5), |w| {
        let seed = rothe_bubbling(w);
        let bd = enumerate_bd(&seed);
        let members: BTreeSet<(Diagram, Diagram)> = bd.iter().map(|d| (d.cells(), d.dead_cells())).collect();
        if members.len() != bd.len() {
            return Err(format!("{w}: ranks are not determined by the cells"));
        }
        for (dp, fp) in &members {
            if !is_admissible(&seed, dp, fp) {
                return Err(format!("{w}: a reachable diagram is not admissible"));
            }
        }
        if w.n() <= 3 {
            for (dp, fp) in all_pairs(seed.n(), seed.k()) {
                if is_admissible(&seed, &dp, &fp) != members.contains(&(dp.clone(), fp.clone())) {
                    return Err(format!("{w}: admissibility and reachability disagree"));
                }
            }
        }
        let targets = admissible_targets(&seed);
        if targets != members {
            return Err(format!("{w}: {} admissible targets, {} reachable", targets.len(), members.len()));
        }
        for d in &bd {
            let seq = canonical_sequence(&seed, &d.cells(), &d.dead_cells()).map_err(|e| format!("{w}: {e}"))?;
            if seq.last() != Some(d) || !seq.iter().all(|s| bd.contains(s)) {
                return Err(format!("{w}: canonical sequence misses its target"));
            }
        }
        Ok(())
    })
}

fn dead_squares(d: &BubblingDiagram) -> BTreeSet<((usize, usize), u32)> {
    d.squares().filter(|(_, s)| s.dead).map(|(c, s)| (c, s.rank)).collect()
}

fn criterion12() -> Outcome {
    all_ok(&Permutation::all_vexillary(5), |w| {
        let bd = enumerate_bd(&rothe_bubbling(w));
        let support = grothendieck(w).support();
        for d in &bd {
            for i in 1..=w.n() {
                let mut t = d.weight();
                if t[i - 1] == 0 {
                    continue;
                }
                t[i - 1] -= 1;
                if !support.contains(&t) {
                    continue;
                }
                let c = remove_dead_check_with(&bd, &support, d, i).map_err(|e| format!("{w}, row {i}: {e}"))?;
                let (cd, dd) = (dead_squares(&c), dead_squares(d));
                if c.weight() != t || !bd.contains(&c) || cd.len() >= dd.len() || !cd.is_subset(&dd) {
                    return Err(format!("{w}, row {i}: witness does not qualify"));
                }
            }
        }
        Ok(())
    })
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("grothendieck = marked pipe dream sum, S_5 and 50 random S_6", criterion1),
        ("BD weights = support, vexillary S_6", criterion2),
        ("SBD weights and fill-dominated cells, vexillary S_5", criterion3),
        ("top support = Schubitope support of D_top, vexillary S_6", criterion4),
        ("homogenized support and components M-convex and saturated, vexillary S_6", criterion5),
        ("A_3, A_4 goldens and det A_n = 1 for n <= 8", criterion6),
        ("14253 expansion, not a Schubitope", criterion7),
        ("2168534(10)79 expansion, not a Schubitope, cached rerun", criterion8),
        ("top component is an integer multiple of the dual character, vexillary S_5", criterion9),
        ("rank function identities", criterion10),
        ("admissibility = reachability, canonical sequences, vexillary S_5", criterion11),
        ("dead square removal witnesses, vexillary S_5", criterion12),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({secs:.1}s)", k + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name} ({secs:.1}s): {e}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
