//! Verification suites: each check runs over a range of permutations or sizes
//! and yields a report with a counterexample payload on failure.

use std::collections::BTreeSet;
use std::time::Instant;

use groth_core::bubbling::{bd_of, d_f, d_top, distinguished_squares, enumerate_sbd, f_top, remove_dead_check_with};
use groth_core::diagram::subsets_below;
use groth_core::polyhedra::{
    a_matrix, a_matrix_det, basis_expansion, column_fill, fill_capacity, is_schubitope, is_submodular,
    lattice_points, lifted_column_points, lifted_support, m_convex_violation, matrix_text, one_column_z,
    vn_order, z_from_points, PointSet, SetFunction,
};
use groth_core::weyl::{conjecture1_check, elements, mask_of, schubitope_support, theta_mask, ProportionalityCheck};
use groth_core::{grothendieck, rothe_bubbling, BubblingDiagram, Diagram, MultiPoly, Permutation};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cache::PolyCache;

const GOLDEN_A3: &str = include_str!("../golden/a3.txt");
const GOLDEN_A4: &str = include_str!("../golden/a4.txt");
const GOLDEN_MAIN3: &str = include_str!("../golden/main3counter.json");
const GOLDEN_MAIN2: &str = include_str!("../golden/main2counter.json");
const GOLDEN_FIGURES: &str = include_str!("../golden/figures.json");

/// Outcome of one check.
#[derive(Debug, Clone)]
pub struct Report {
    pub check: String,
    pub range: String,
    pub pass: bool,
    pub counterexample: Option<Value>,
    pub ms: u128,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "check": self.check,
            "range": self.range,
            "pass": self.pass,
            "counterexample": self.counterexample,
            "ms": self.ms,
        })
    }
}

/// Name, default `nmax`, largest accepted `nmax`.
pub const SUITES: [(&str, usize, usize); 10] = [
    ("theorem1", 5, 6),
    ("theorem2", 5, 6),
    ("theorem3", 5, 6),
    ("theorem4", 6, 10),
    ("sbd", 5, 6),
    ("removedead", 4, 5),
    ("matrices", 8, 10),
    ("onecolumn", 6, 7),
    ("counterexamples", 10, 10),
    ("conjecture1", 5, 6),
];

pub fn suite_bounds(name: &str) -> Option<(usize, usize)> {
    SUITES.iter().find(|s| s.0 == name).map(|s| (s.1, s.2))
}

/// Times `f`, which returns the first counterexample if any.
fn timed(check: &str, range: String, f: impl FnOnce() -> Option<Value>) -> Report {
    let start = Instant::now();
    let counterexample = f();
    Report {
        check: check.into(),
        range,
        pass: counterexample.is_none(),
        counterexample,
        ms: start.elapsed().as_millis(),
    }
}

/// First counterexample over `items` in input order, computed in parallel.
fn first_failure<T: Sync>(items: &[T], f: impl Fn(&T) -> Option<Value> + Sync + Send) -> Option<Value> {
    let results: Vec<Option<Value>> = items.par_iter().map(f).collect();
    results.into_iter().flatten().next()
}

fn set_diff(a: &BTreeSet<Vec<u32>>, b: &BTreeSet<Vec<u32>>) -> Vec<Vec<u32>> {
    a.difference(b).cloned().collect()
}

fn compare_sets(w: &Permutation, got: &BTreeSet<Vec<u32>>, want: &BTreeSet<Vec<u32>>) -> Option<Value> {
    (got != want).then(|| json!({ "w": w.to_string(), "extra": set_diff(got, want), "missing": set_diff(want, got) }))
}

fn vexillary_range(n: usize) -> (Vec<Permutation>, String) {
    let ws = Permutation::all_vexillary(n);
    let range = format!("vexillary S_{n} ({} permutations)", ws.len());
    (ws, range)
}

fn error_value(w: &Permutation, e: impl std::fmt::Display) -> Value {
    json!({ "w": w.to_string(), "error": e.to_string() })
}

pub fn theorem1(nmax: usize) -> Vec<Report> {
    (1..=nmax)
        .map(|n| {
            let (ws, range) = vexillary_range(n);
            timed("theorem1: weights of BD(w) = supp(G_w)", range, || {
                first_failure(&ws, |w| {
                    let weights: BTreeSet<Vec<u32>> = bd_of(w).iter().map(|d| d.weight()).collect();
                    compare_sets(w, &weights, &grothendieck(w).support())
                })
            })
        })
        .collect()
}

fn figures_check() -> Option<Value> {
    let g: Value = serde_json::from_str(GOLDEN_FIGURES).expect("embedded golden");
    for entry in g["rothe"].as_array().expect("rothe") {
        let w: Permutation = entry["permutation"].as_str().unwrap().parse().unwrap();
        let want: BubblingDiagram = serde_json::from_value(entry["diagram"].clone()).unwrap();
        if rothe_bubbling(&w) != want {
            return Some(json!({ "w": w.to_string(), "figure": "rothe bubbling diagram" }));
        }
    }
    for entry in g["top"].as_array().expect("top") {
        let w: Permutation = entry["permutation"].as_str().unwrap().parse().unwrap();
        let want: BubblingDiagram = serde_json::from_value(entry["diagram"].clone()).unwrap();
        match d_top(&w) {
            Ok(d) if d == want => {}
            _ => return Some(json!({ "w": w.to_string(), "figure": "top diagram" })),
        }
    }
    for entry in g["distinguished"].as_array().expect("distinguished") {
        let w: Permutation = entry["permutation"].as_str().unwrap().parse().unwrap();
        let cells = |v: &Value| -> Vec<(usize, usize)> {
            v.as_array()
                .unwrap()
                .iter()
                .map(|c| (c[0].as_u64().unwrap() as usize, c[1].as_u64().unwrap() as usize))
                .collect()
        };
        if let Some(want) = entry.get("cells") {
            match distinguished_squares(&w) {
                Ok(a) if a.cells() == cells(want) => {}
                _ => return Some(json!({ "w": w.to_string(), "figure": "distinguished squares" })),
            }
        }
        if let Some(want) = entry.get("linking_class") {
            let want = cells(want);
            if !rothe_bubbling(&w).linking_classes().values().any(|c| *c == want) {
                return Some(json!({ "w": w.to_string(), "figure": "linking class" }));
            }
        }
    }
    None
}

pub fn theorem2(nmax: usize) -> Vec<Report> {
    let mut out = vec![timed("theorem2: embedded figure diagrams", "golden".into(), figures_check)];
    out.extend((1..=nmax).map(|n| {
        let (ws, range) = vexillary_range(n);
        timed("theorem2: supp(G_w top) = Schubitope support of D_top(w)", range, || {
            first_failure(&ws, |w| {
                let top = match grothendieck(w).top_component() {
                    Ok(t) => t,
                    Err(e) => return Some(error_value(w, e)),
                };
                let d = match d_top(w) {
                    Ok(d) => d.cells(),
                    Err(e) => return Some(error_value(w, e)),
                };
                compare_sets(w, &schubitope_support(&d), &top.support())
            })
        })
    }));
    out
}

/// M-convexity and saturation of a support, as a counterexample payload.
fn snp_m_convex(label: &str, w: &Permutation, p: &MultiPoly) -> Option<Value> {
    let pts = PointSet::from_support(p);
    if let Some(v) = m_convex_violation(&pts) {
        return Some(json!({ "w": w.to_string(), "set": label, "x": v.x, "y": v.y, "i": v.i }));
    }
    let z = match z_from_points(&pts) {
        Ok(z) => z,
        Err(e) => return Some(error_value(w, e)),
    };
    match lattice_points(&z) {
        Ok(l) if l == pts => None,
        Ok(l) => Some(json!({
            "w": w.to_string(),
            "set": label,
            "lattice_points": l.len(),
            "support": pts.len(),
        })),
        Err(e) => Some(json!({ "w": w.to_string(), "set": label, "error": e.to_string() })),
    }
}

pub fn theorem3(nmax: usize) -> Vec<Report> {
    (1..=nmax)
        .map(|n| {
            let (ws, range) = vexillary_range(n);
            timed("theorem3: homogenized support and components are M-convex and saturated", range, || {
                first_failure(&ws, |w| {
                    let g = grothendieck(w);
                    let h = g.homogenize().expect("nonzero");
                    if let Some(v) = snp_m_convex("homogenized", w, &h) {
                        return Some(v);
                    }
                    match lifted_support(w) {
                        Ok(l) if l == PointSet::from_support(&h) => {}
                        Ok(_) => return Some(json!({ "w": w.to_string(), "set": "column decomposition" })),
                        Err(e) => return Some(error_value(w, e)),
                    }
                    let (lo, hi) = (g.min_degree().unwrap(), g.degree().unwrap());
                    (lo..=hi).find_map(|d| snp_m_convex(&format!("degree {d}"), w, &g.homogeneous_component(d)))
                })
            })
        })
        .collect()
}

pub fn theorem4(nmax: usize) -> Vec<Report> {
    use rand::{Rng, SeedableRng};
    (1..=nmax)
        .map(|n| {
            timed("theorem4: rank functions form a basis", format!("n = {n}"), || {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(n as u64);
                let samples = if n <= 6 { 20 } else { 4 };
                for _ in 0..samples {
                    let z = SetFunction::from_fn(n, |m| if m == 0 { 0 } else { rng.gen_range(-9..10) }).unwrap();
                    let e = match basis_expansion(&z) {
                        Ok(e) => e,
                        Err(err) => return Some(json!({ "n": n, "error": err.to_string() })),
                    };
                    let integral = e.coeffs().iter().all(|(_, c)| c.is_integer());
                    if !integral || e.reconstruct().ok() != Some(z.clone()) {
                        return Some(json!({ "n": n, "z": z.values().iter().map(|v| v.to_string()).collect::<Vec<_>>() }));
                    }
                }
                if n <= 6 {
                    for g in vn_order(n) {
                        let z = SetFunction::schubert_rank(n, &elements(g)).unwrap();
                        let nz = basis_expansion(&z).map(|e| e.nonzero()).unwrap_or_default();
                        if nz.len() != 1 || nz[0].0 != elements(g) || !nz[0].1.is_integer() {
                            return Some(json!({ "n": n, "basis_element": elements(g) }));
                        }
                    }
                }
                None
            })
        })
        .collect()
}

/// Every diagram `C ≤ D` columnwise.
fn diagrams_below(d: &Diagram) -> Vec<Diagram> {
    let mut acc: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for col in d.columns() {
        let choices = if col.is_empty() { vec![Vec::new()] } else { subsets_below(&col) };
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |c| {
                    let mut p = prefix.clone();
                    p.push(c.clone());
                    p
                })
            })
            .collect();
    }
    acc.into_iter()
        .map(|cols| Diagram::from_columns(d.n(), &cols).expect("columns within the grid"))
        .collect()
}

/// `{D : D ≤ D^f(w) for some f ≤ f_top}`.
pub fn fill_dominated_diagrams(w: &Permutation) -> groth_core::Result<BTreeSet<Diagram>> {
    let top = f_top(w)?;
    let mut out = BTreeSet::new();
    let mut f = vec![0; top.len()];
    loop {
        out.extend(diagrams_below(&d_f(w, &f)?));
        let Some(j) = (0..f.len()).find(|&j| f[j] < top[j]) else {
            break;
        };
        f[j] += 1;
        for x in &mut f[..j] {
            *x = 0;
        }
    }
    Ok(out)
}

pub fn sbd(nmax: usize) -> Vec<Report> {
    (1..=nmax)
        .map(|n| {
            let (ws, range) = vexillary_range(n);
            timed("sbd: SBD weights = supp(G_w) and cells = fill-dominated diagrams", range, || {
                first_failure(&ws, |w| {
                    let s = match enumerate_sbd(w) {
                        Ok(s) => s,
                        Err(e) => return Some(error_value(w, e)),
                    };
                    let weights: BTreeSet<Vec<u32>> = s.iter().map(|d| d.weight()).collect();
                    if let Some(v) = compare_sets(w, &weights, &grothendieck(w).support()) {
                        return Some(v);
                    }
                    let cells: BTreeSet<Diagram> = s.iter().map(|d| d.cells()).collect();
                    match fill_dominated_diagrams(w) {
                        Ok(f) if f == cells => None,
                        Ok(f) => Some(json!({ "w": w.to_string(), "sbd_cells": cells.len(), "fill_dominated": f.len() })),
                        Err(e) => Some(error_value(w, e)),
                    }
                })
            })
        })
        .collect()
}

pub fn removedead(nmax: usize) -> Vec<Report> {
    (1..=nmax)
        .map(|n| {
            let (ws, range) = vexillary_range(n);
            timed("removedead: a witness exists for every diagram and row", range, || {
                first_failure(&ws, |w| {
                    let bd = bd_of(w);
                    let support = grothendieck(w).support();
                    for d in &bd {
                        let wt = d.weight();
                        for i in 1..=n {
                            if wt[i - 1] == 0 {
                                continue;
                            }
                            let mut t = wt.clone();
                            t[i - 1] -= 1;
                            if !support.contains(&t) {
                                continue;
                            }
                            if let Err(e) = remove_dead_check_with(&bd, &support, d, i) {
                                return Some(json!({
                                    "w": w.to_string(),
                                    "diagram": serde_json::to_value(d).unwrap(),
                                    "row": i,
                                    "error": e.to_string(),
                                }));
                            }
                        }
                    }
                    None
                })
            })
        })
        .collect()
}

pub fn matrices(nmax: usize) -> Vec<Report> {
    let mut out = Vec::new();
    for (n, golden) in [(3, GOLDEN_A3), (4, GOLDEN_A4)] {
        out.push(timed("matrices: A_n equals the embedded golden", format!("n = {n}"), || {
            let got = matrix_text(&a_matrix(n).expect("within bound"));
            (got != golden).then(|| json!({ "n": n, "computed": got, "golden": golden }))
        }));
    }
    out.push(timed("matrices: det(A_n) = 1", format!("1 <= n <= {nmax}"), || {
        (1..=nmax).find_map(|n| match a_matrix_det(n) {
            Ok(d) if d == 1.into() => None,
            Ok(d) => Some(json!({ "n": n, "det": d.to_string() })),
            Err(e) => Some(json!({ "n": n, "error": e.to_string() })),
        })
    }));
    out
}

/// The fill identities and the one-column polytope for column `set` with
/// distinguished element `s`.
fn one_column_failure(n: usize, set: &[usize], s: usize) -> Option<Value> {
    let d = fill_capacity(set, s);
    let top = mask_of(&column_fill(set, s, d).ok()?);
    let base = mask_of(set);
    let fills: Vec<u32> = (0..=d).map(|k| mask_of(&column_fill(set, s, k).unwrap())).collect();
    for j in 0..1u32 << n {
        for k in 0..=d {
            let r = theta_mask(fills[k], j, n);
            if r != theta_mask(top, j, n).min(theta_mask(base, j, n) + k as u32) {
                return Some(json!({ "n": n, "S": set, "s": s, "k": k, "J": elements(j), "identity": "min formula" }));
            }
            if k < d {
                let step = theta_mask(fills[k + 1], j, n) - r;
                if step > 1 {
                    return Some(json!({ "n": n, "S": set, "s": s, "k": k, "J": elements(j), "identity": "step" }));
                }
                if step == 0 {
                    let later = (k + 1..d).all(|k2| theta_mask(fills[k2 + 1], j, n) == theta_mask(fills[k2], j, n));
                    let subsets = (0..1u32 << n)
                        .filter(|&j2| j2 & !j == 0)
                        .all(|j2| theta_mask(fills[k + 1], j2, n) == theta_mask(fills[k], j2, n));
                    if !later || !subsets {
                        return Some(json!({ "n": n, "S": set, "s": s, "k": k, "J": elements(j), "identity": "stable step" }));
                    }
                }
            }
        }
    }
    let pts = lifted_column_points(set, s, n).ok()?;
    let z = one_column_z(set, s, n).ok()?;
    if !is_submodular(&z) {
        return Some(json!({ "n": n, "S": set, "s": s, "polytope": "not submodular" }));
    }
    if lattice_points(&z).ok()? != pts {
        return Some(json!({ "n": n, "S": set, "s": s, "polytope": "lattice points differ" }));
    }
    m_convex_violation(&pts).map(|v| json!({ "n": n, "S": set, "s": s, "x": v.x, "y": v.y }))
}

pub fn onecolumn(nmax: usize) -> Vec<Report> {
    (1..=nmax)
        .map(|n| {
            let cases: Vec<(Vec<usize>, usize)> = (1..1u32 << n)
                .flat_map(|m| {
                    let set = elements(m);
                    set.clone().into_iter().map(move |s| (set.clone(), s))
                })
                .collect();
            let range = format!("n = {n} ({} columns with a marked element)", cases.len());
            timed("onecolumn: fill rank identities and lifted polytope", range, || {
                first_failure(&cases, |(set, s)| {
                    one_column_failure(n, set, *s)
                        .or_else(|| lifted_column_points(set, *s, n).is_err().then(|| json!({ "S": set, "s": s })))
                })
            })
        })
        .collect()
}

/// Expansion of `z` from the support of `p`, compared with an embedded golden.
fn expansion_check(w: &Permutation, p: &MultiPoly, golden: &str) -> Option<Value> {
    let g: Value = serde_json::from_str(golden).expect("embedded golden");
    let z = match z_from_points(&PointSet::from_support(p)) {
        Ok(z) => z,
        Err(e) => return Some(error_value(w, e)),
    };
    if !is_submodular(&z) {
        return Some(json!({ "w": w.to_string(), "error": "z is not submodular" }));
    }
    match is_schubitope(&z) {
        Ok(d) => {
            let got = d.expansion.to_json();
            (d.is_schubitope || got != g["expansion"])
                .then(|| json!({ "w": w.to_string(), "expansion": got, "is_schubitope": d.is_schubitope }))
        }
        Err(e) => Some(error_value(w, e)),
    }
}

pub fn counterexamples(cache: &PolyCache) -> Vec<Report> {
    let w3: Permutation = "14253".parse().unwrap();
    let w2: Permutation = "2168534(10)79".parse().unwrap();
    vec![
        timed("counterexamples: degree length+1 component of 14253", "w = 14253".into(), || {
            let g = cache.grothendieck(&w3);
            expansion_check(&w3, &g.homogeneous_component(w3.length() as u32 + 1), GOLDEN_MAIN3)
        }),
        timed("counterexamples: top component of 2168534(10)79", "w = 2168534(10)79".into(), || {
            let g = cache.grothendieck(&w2);
            expansion_check(&w2, &g.top_component().expect("nonzero"), GOLDEN_MAIN2)
        }),
    ]
}

pub fn conjecture1(nmax: usize) -> Vec<Report> {
    (1..=nmax)
        .map(|n| {
            let (ws, range) = vexillary_range(n);
            timed("conjecture1: G_w top is a signed integer multiple of chi(D_top)", range, || {
                first_failure(&ws, |w| {
                    let g = grothendieck(w);
                    let sign: i32 = if (g.degree().unwrap() as usize - w.length()) % 2 == 0 { 1 } else { -1 };
                    match conjecture1_check(w) {
                        Ok(ProportionalityCheck::Multiple { m }) if (m.clone() * sign) > 0.into() => None,
                        Ok(ProportionalityCheck::Multiple { m }) => {
                            Some(json!({ "w": w.to_string(), "multiple": m.to_string(), "reason": "wrong sign" }))
                        }
                        Ok(ProportionalityCheck::Counterexample { weight, top, chi, .. }) => Some(json!({
                            "w": w.to_string(),
                            "weight": weight,
                            "top": top.to_string(),
                            "chi": chi.to_string(),
                        })),
                        Err(e) => Some(error_value(w, e)),
                    }
                })
            })
        })
        .collect()
}

pub fn run(suite: &str, nmax: usize, cache: &PolyCache) -> Vec<Report> {
    match suite {
        "theorem1" => theorem1(nmax),
        "theorem2" => theorem2(nmax),
        "theorem3" => theorem3(nmax),
        "theorem4" => theorem4(nmax),
        "sbd" => sbd(nmax),
        "removedead" => removedead(nmax),
        "matrices" => matrices(nmax),
        "onecolumn" => onecolumn(nmax),
        "counterexamples" => counterexamples(cache),
        "conjecture1" => conjecture1(nmax),
        other => panic!("unknown suite {other}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ranges_pass() {
        let cache = PolyCache::new(None);
        for (name, _, _) in SUITES {
            if name == "counterexamples" {
                continue;
            }
            for r in run(name, 3, &cache) {
                assert!(r.pass, "{} {} {:?}", r.check, r.range, r.counterexample);
            }
        }
    }

    #[test]
    fn fill_dominated_diagrams_of_1423() {
        let w: Permutation = "1423".parse().unwrap();
        assert_eq!(fill_dominated_diagrams(&w).unwrap().len(), 6);
    }

    #[test]
    fn reports_serialize() {
        let r = timed("x", "y".into(), || Some(json!({ "w": "21" })));
        let v = r.to_json();
        assert_eq!(v["pass"], json!(false));
        assert_eq!(v["counterexample"]["w"], json!("21"));
    }
}
