//! Submodular set functions, generalized permutahedra, M-convex point sets and
//! the Schubert matroid rank-function basis.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::bubbling::{distinguished_squares, f_top};
use crate::diagram::{rothe_diagram, subsets_below};
pub use crate::diagram::{column_fill, fill_capacity};
use crate::error::{Error, Result};
use crate::linalg::{common_denominator, det_bareiss, IntegerSolver};
use crate::perm::Permutation;
use crate::poly::MultiPoly;
use crate::weyl::{elements, mask_of, theta_mask};

/// Largest ground set accepted by [`SetFunction`].
pub const SET_FUNCTION_BOUND: usize = 16;
/// Largest `n` for [`a_matrix`] and [`basis_expansion`].
pub const A_MATRIX_BOUND: usize = 10;

/// A function on the subsets of `[n]`, stored as a table indexed by bitmask,
/// with value zero on the empty set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFunction {
    n: usize,
    values: Vec<BigRational>,
}

impl SetFunction {
    pub fn new(n: usize, values: Vec<BigRational>) -> Result<Self> {
        if n > SET_FUNCTION_BOUND {
            return Err(Error::BoundExceeded { requested: n, bound: SET_FUNCTION_BOUND });
        }
        if values.len() != 1 << n {
            return Err(Error::Invalid(format!("expected {} values, got {}", 1usize << n, values.len())));
        }
        if !values[0].is_zero() {
            return Err(Error::Invalid("value on the empty set must be 0".into()));
        }
        Ok(Self { n, values })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::from_fn(n, |_| 0)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(u32) -> i64) -> Result<Self> {
        Self::new(n, (0..1u32 << n).map(|m| BigRational::from_integer(f(m).into())).collect())
    }

    /// Rank function of `SM_n(gens)`.
    pub fn schubert_rank(n: usize, gens: &[usize]) -> Result<Self> {
        let g = mask_of(gens);
        Self::from_fn(n, |m| theta_mask(g, m, n) as i64)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn value(&self, mask: u32) -> &BigRational {
        &self.values[mask as usize]
    }

    pub fn value_of(&self, set: &[usize]) -> &BigRational {
        self.value(mask_of(set))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::NvarsMismatch { left: self.n, right: other.n });
        }
        Ok(Self {
            n: self.n,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            n: self.n,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|v| v.is_integer())
    }

    fn floors(&self) -> Result<Vec<i64>> {
        self.values
            .iter()
            .map(|v| v.floor().to_integer().to_i64().ok_or_else(|| Error::Invalid("value out of range".into())))
            .collect()
    }
}

/// Submodularity through the local criterion
/// `z(S+a) + z(S+b) ≥ z(S+a+b) + z(S)`.
pub fn is_submodular(z: &SetFunction) -> bool {
    let full = (1u32 << z.n) - 1;
    (0..=full).all(|s| {
        let free = full & !s;
        elements(free).iter().all(|&a| {
            let ma = 1u32 << (a - 1);
            elements(free & !((ma << 1) - 1)).iter().all(|&b| {
                let mb = 1u32 << (b - 1);
                z.value(s | ma) + z.value(s | mb) >= z.value(s | ma | mb) + z.value(s)
            })
        })
    })
}

/// A finite set of integer points of a fixed dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet {
    dim: usize,
    points: BTreeSet<Vec<i64>>,
}

impl PointSet {
    pub fn new(dim: usize, points: impl IntoIterator<Item = Vec<i64>>) -> Result<Self> {
        let points: BTreeSet<Vec<i64>> = points.into_iter().collect();
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::Invalid(format!("point {p:?} does not have dimension {dim}")));
        }
        Ok(Self { dim, points })
    }

    /// Exponent vectors of a polynomial.
    pub fn from_support(p: &MultiPoly) -> Self {
        Self {
            dim: p.nvars(),
            points: p
                .support()
                .into_iter()
                .map(|e| e.into_iter().map(i64::from).collect())
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &BTreeSet<Vec<i64>> {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.points.contains(p)
    }

    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::NvarsMismatch { left: self.dim, right: other.dim });
        }
        let points = self
            .points
            .iter()
            .flat_map(|a| other.points.iter().map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect()))
            .collect();
        Ok(Self { dim: self.dim, points })
    }
}

/// `z(I) = max_p Σ_{i∈I} p_i`.
pub fn z_from_points(p: &PointSet) -> Result<SetFunction> {
    if p.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let n = p.dim;
    if n > SET_FUNCTION_BOUND {
        return Err(Error::BoundExceeded { requested: n, bound: SET_FUNCTION_BOUND });
    }
    let mut best = vec![i64::MIN; 1 << n];
    let mut sums = vec![0i64; 1 << n];
    for pt in &p.points {
        for m in 1..1usize << n {
            let low = m.trailing_zeros() as usize;
            sums[m] = sums[m & (m - 1)] + pt[low];
            best[m] = best[m].max(sums[m]);
        }
    }
    best[0] = 0;
    SetFunction::from_fn(n, |m| best[m as usize])
}

/// A failure of the exchange axiom. `i` is `None` when the two points have
/// different coordinate sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeViolation {
    pub x: Vec<i64>,
    pub y: Vec<i64>,
    pub i: Option<usize>,
}

/// First pair `x, y` and index `i` with `x_i > y_i` for which no `j` with
/// `x_j < y_j` has both `x − e_i + e_j` and `y − e_j + e_i` in the set.
pub fn m_convex_violation(p: &PointSet) -> Option<ExchangeViolation> {
    let sums: BTreeSet<i64> = p.points.iter().map(|x| x.iter().sum()).collect();
    if sums.len() > 1 {
        let mut it = p.points.iter();
        let x = it.next().expect("nonempty").clone();
        let sx: i64 = x.iter().sum();
        let y = it.find(|y| y.iter().sum::<i64>() != sx).expect("two sums").clone();
        return Some(ExchangeViolation { x, y, i: None });
    }
    for x in &p.points {
        for y in &p.points {
            for i in 0..p.dim {
                if x[i] <= y[i] {
                    continue;
                }
                let ok = (0..p.dim).any(|j| {
                    if x[j] >= y[j] {
                        return false;
                    }
                    let mut x2 = x.clone();
                    x2[i] -= 1;
                    x2[j] += 1;
                    let mut y2 = y.clone();
                    y2[j] -= 1;
                    y2[i] += 1;
                    p.contains(&x2) && p.contains(&y2)
                });
                if !ok {
                    return Some(ExchangeViolation {
                        x: x.clone(),
                        y: y.clone(),
                        i: Some(i + 1),
                    });
                }
            }
        }
    }
    None
}

pub fn m_convex_check(p: &PointSet) -> bool {
    m_convex_violation(p).is_none()
}

/// Integer points `t` with `Σ_{i∈I} t_i ≤ z(I)` for every `I` and
/// `Σ t_i = z([n])`.
pub fn lattice_points(z: &SetFunction) -> Result<PointSet> {
    if !is_submodular(z) {
        return Err(Error::NotSubmodular);
    }
    let n = z.n;
    let full = (1usize << n) - 1;
    let zf = z.floors()?;
    if !z.value(full as u32).is_integer() {
        return PointSet::new(n, []);
    }
    let total = zf[full];
    let lo: Vec<i64> = (0..n).map(|i| total - zf[full & !(1 << i)]).collect();
    let hi: Vec<i64> = (0..n).map(|i| zf[1 << i]).collect();
    // Suffix sums of the coordinate bounds, for pruning on the total.
    let mut lo_rest = vec![0i64; n + 1];
    let mut hi_rest = vec![0i64; n + 1];
    for i in (0..n).rev() {
        lo_rest[i] = lo_rest[i + 1] + lo[i];
        hi_rest[i] = hi_rest[i + 1] + hi[i];
    }
    struct Search<'a> {
        n: usize,
        zf: &'a [i64],
        lo: &'a [i64],
        hi: &'a [i64],
        lo_rest: &'a [i64],
        hi_rest: &'a [i64],
        total: i64,
        sums: Vec<i64>,
        t: Vec<i64>,
        out: Vec<Vec<i64>>,
    }
    impl Search<'_> {
        fn run(&mut self, m: usize, partial: i64) {
            if m == self.n {
                if partial == self.total {
                    self.out.push(self.t.clone());
                }
                return;
            }
            let bit = 1usize << m;
            for v in self.lo[m]..=self.hi[m] {
                let after = partial + v;
                if after + self.lo_rest[m + 1] > self.total || after + self.hi_rest[m + 1] < self.total {
                    continue;
                }
                // Constraints whose largest element is m.
                let ok = (0..bit).all(|s| {
                    let val = self.sums[s] + v;
                    self.sums[s | bit] = val;
                    val <= self.zf[s | bit]
                });
                if ok {
                    self.t[m] = v;
                    self.run(m + 1, after);
                }
            }
        }
    }
    let mut search = Search {
        n,
        zf: &zf,
        lo: &lo,
        hi: &hi,
        lo_rest: &lo_rest,
        hi_rest: &hi_rest,
        total,
        sums: vec![0; 1 << n],
        t: vec![0; n],
        out: Vec::new(),
    };
    search.run(0, 0);
    PointSet::new(n, search.out)
}

/// `I ≺ J` when `max(I∖J) ≤ max(J∖I)`, with `max ∅ = 0`.
pub fn vn_precedes(i: u32, j: u32) -> bool {
    let top = |m: u32| 32 - m.leading_zeros();
    top(i & !j) <= top(j & !i)
}

/// The nonempty subsets of `[n]` as bitmasks, in `≺` order.
pub fn vn_order(n: usize) -> Vec<u32> {
    let mut v: Vec<u32> = (1..1u32 << n).collect();
    v.sort_by(|&a, &b| {
        if a == b {
            std::cmp::Ordering::Equal
        } else if vn_precedes(a, b) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    v
}

pub fn vn_order_sets(n: usize) -> Vec<Vec<usize>> {
    vn_order(n).into_iter().map(elements).collect()
}

/// Subset notation such as `{1,2,4}`.
pub fn subset_label(mask: u32) -> String {
    let items: Vec<String> = elements(mask).iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

/// `(r_{SM_n(I)}(J))` with rows and columns in `≺` order.
pub fn a_matrix(n: usize) -> Result<Vec<Vec<u32>>> {
    if n > A_MATRIX_BOUND {
        return Err(Error::BoundExceeded { requested: n, bound: A_MATRIX_BOUND });
    }
    let order = vn_order(n);
    Ok(order
        .iter()
        .map(|&i| order.iter().map(|&j| theta_mask(i, j, n)).collect())
        .collect())
}

/// [`a_matrix`] as CSV: a header of column subsets, then one labelled row per
/// subset.
pub fn a_matrix_csv(n: usize) -> Result<String> {
    let a = a_matrix(n)?;
    let labels: Vec<String> = vn_order(n).into_iter().map(subset_label).collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![String::new()];
    header.extend(labels.iter().cloned());
    let io = |e: csv::Error| Error::Invalid(e.to_string());
    w.write_record(&header).map_err(io)?;
    for (label, row) in labels.iter().zip(&a) {
        let mut rec = vec![label.clone()];
        rec.extend(row.iter().map(|x| x.to_string()));
        w.write_record(&rec).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Invalid(e.to_string()))
}

/// Plain-text rendering, one row per line, entries separated by spaces.
pub fn matrix_text(a: &[Vec<u32>]) -> String {
    let mut s = String::new();
    for row in a {
        let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(s, "{}", line.join(" "));
    }
    s
}

/// `det(A_n)` by Bareiss elimination.
pub fn a_matrix_det(n: usize) -> Result<BigInt> {
    let a = a_matrix(n)?;
    let big: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    det_bareiss(&big)
}

fn solver(n: usize) -> Result<Arc<IntegerSolver>> {
    static SOLVERS: OnceLock<Mutex<HashMap<usize, Arc<IntegerSolver>>>> = OnceLock::new();
    let map = SOLVERS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = map.lock().expect("solver cache").get(&n) {
        return Ok(s.clone());
    }
    // Row J, column I holds r_{SM_n(I)}(J).
    let a = a_matrix(n)?;
    let m = a.len();
    let t: Vec<Vec<i64>> = (0..m).map(|j| (0..m).map(|i| a[i][j] as i64).collect()).collect();
    let s = Arc::new(IntegerSolver::new(t)?);
    map.lock().expect("solver cache").insert(n, s.clone());
    Ok(s)
}

/// Coefficients of a set function in the Schubert matroid rank basis, indexed
/// by `≺` order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    n: usize,
    coeffs: Vec<(u32, BigRational)>,
}

impl Expansion {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[(u32, BigRational)] {
        &self.coeffs
    }

    pub fn coeff(&self, set: &[usize]) -> BigRational {
        let m = mask_of(set);
        self.coeffs
            .iter()
            .find(|(k, _)| *k == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// Nonzero coefficients as `(subset, c)`.
    pub fn nonzero(&self) -> Vec<(Vec<usize>, BigRational)> {
        self.coeffs
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (elements(*m), c.clone()))
            .collect()
    }

    /// `Σ c_I r_{SM_n(I)}`.
    pub fn reconstruct(&self) -> Result<SetFunction> {
        let mut z = SetFunction::zero(self.n)?;
        for (m, c) in &self.coeffs {
            if !c.is_zero() {
                z = z.add(&SetFunction::schubert_rank(self.n, &elements(*m))?.scale(c))?;
            }
        }
        Ok(z)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.nonzero()
                .into_iter()
                .map(|(i, c)| serde_json::json!({ "I": i, "c": c.to_string() }))
                .collect(),
        )
    }
}

/// Unique `c` with `Σ_I c_I r_{SM_n(I)} = z`.
pub fn basis_expansion(z: &SetFunction) -> Result<Expansion> {
    let n = z.n;
    if n > A_MATRIX_BOUND {
        return Err(Error::BoundExceeded { requested: n, bound: A_MATRIX_BOUND });
    }
    let order = vn_order(n);
    let rhs: Vec<BigRational> = order.iter().map(|&j| z.value(j).clone()).collect();
    let (scale, ints) = common_denominator(&rhs);
    let x = solver(n)?.solve(&ints)?;
    let coeffs = order
        .into_iter()
        .zip(x)
        .map(|(m, c)| (m, BigRational::new(c, scale.clone())))
        .collect();
    Ok(Expansion { n, coeffs })
}

/// Result of the Schubitope test, with the expansion that decided it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchubitopeDecision {
    pub is_schubitope: bool,
    pub expansion: Expansion,
}

/// A submodular `z` comes from a Schubitope iff every coefficient of its
/// expansion is a nonnegative integer. The all-zero expansion counts.
pub fn is_schubitope(z: &SetFunction) -> Result<SchubitopeDecision> {
    if !is_submodular(z) {
        return Err(Error::NotSubmodular);
    }
    let expansion = basis_expansion(z)?;
    let is_schubitope = expansion.coeffs.iter().all(|(_, c)| c.is_integer() && !c.is_negative());
    Ok(SchubitopeDecision { is_schubitope, expansion })
}

fn indicator_i64(dim: usize, rows: &[usize]) -> Vec<i64> {
    let mut v = vec![0; dim];
    for &r in rows {
        v[r - 1] += 1;
    }
    v
}

/// `{ζ̃^B : B ≤ S^(k,s), 0 ≤ k ≤ d}` in dimension `n + 1`, the last coordinate
/// being `d − k`.
pub fn lifted_column_points(set: &[usize], s: usize, n: usize) -> Result<PointSet> {
    if let Some(&x) = set.iter().find(|&&x| x == 0 || x > n) {
        return Err(Error::IndexOutOfRange { index: x, max: n });
    }
    let d = fill_capacity(set, s);
    let mut pts = Vec::new();
    for k in 0..=d {
        let filled = column_fill(set, s, k)?;
        for b in subsets_below(&filled) {
            let mut v = indicator_i64(n + 1, &b);
            v[n] = (d - k) as i64;
            pts.push(v);
        }
    }
    PointSet::new(n + 1, pts)
}

/// The set function on `[n+1]` cutting out the lifted one-column polytope:
/// `r_{SM_n(S^(d,s))}(I)` if `n+1 ∉ I`, else `r_{SM_n(S)}(I∖{n+1}) + d`.
pub fn one_column_z(set: &[usize], s: usize, n: usize) -> Result<SetFunction> {
    let d = fill_capacity(set, s);
    let full_fill = mask_of(&column_fill(set, s, d)?);
    let base = mask_of(set);
    let last = 1u32 << n;
    SetFunction::from_fn(n + 1, |m| {
        if m & last == 0 {
            theta_mask(full_fill, m, n) as i64
        } else {
            theta_mask(base, m & !last, n) as i64 + d as i64
        }
    })
}

/// Minkowski sum over the columns of `D(w)` of the lifted one-column point
/// sets: columns with a distinguished square at row `i` use
/// [`lifted_column_points`] with `s = i`, others contribute `(ζ^B, 0)`.
pub fn lifted_support(w: &Permutation) -> Result<PointSet> {
    let n = w.n();
    let a = distinguished_squares(w)?;
    let ft = f_top(w)?;
    let (d, _) = rothe_diagram(w);
    let mut acc = PointSet::new(n + 1, [vec![0; n + 1]])?;
    for (idx, col) in d.columns().into_iter().enumerate() {
        let j = idx + 1;
        let pts = match a.for_column(j) {
            Some(dist) => {
                let cap = fill_capacity(&col, dist.row);
                if cap != ft[idx] {
                    return Err(Error::Invalid(format!(
                        "column {j}: fill capacity {cap} differs from the top dead count {}",
                        ft[idx]
                    )));
                }
                lifted_column_points(&col, dist.row, n)?
            }
            None => PointSet::new(n + 1, subsets_below(&col).iter().map(|b| indicator_i64(n + 1, b)))?,
        };
        acc = acc.minkowski_sum(&pts)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::grothendieck;
    use crate::weyl::SchubertMatroid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn submodular_all_pairs(z: &SetFunction) -> bool {
        let full = 1u32 << z.n();
        (0..full).all(|i| (0..full).all(|j| z.value(i) + z.value(j) >= z.value(i | j) + z.value(i & j)))
    }

    #[test]
    fn set_function_validation() {
        assert!(SetFunction::new(1, vec![q(1), q(0)]).is_err());
        assert!(SetFunction::new(1, vec![q(0)]).is_err());
        assert!(SetFunction::new(17, vec![]).is_err());
    }

    #[test]
    fn submodularity_examples() {
        assert!(is_submodular(&SetFunction::zero(3).unwrap()));
        let sq = SetFunction::from_fn(2, |m| (m.count_ones() as i64).pow(2)).unwrap();
        assert!(!is_submodular(&sq));
        for n in 1..=5 {
            for g in 1..1u32 << n {
                assert!(is_submodular(&SetFunction::schubert_rank(n, &elements(g)).unwrap()));
            }
        }
    }

    #[test]
    fn local_and_global_submodularity_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let n = rng.gen_range(1..=4);
            let z = if rng.gen_bool(0.5) {
                // Random point sets give submodular functions often.
                let pts: Vec<Vec<i64>> =
                    (0..rng.gen_range(1..5)).map(|_| (0..n).map(|_| rng.gen_range(0..3)).collect()).collect();
                z_from_points(&PointSet::new(n, pts).unwrap()).unwrap()
            } else {
                SetFunction::from_fn(n, |m| if m == 0 { 0 } else { rng.gen_range(0..4) }).unwrap()
            };
            assert_eq!(is_submodular(&z), submodular_all_pairs(&z));
        }
    }

    #[test]
    fn z_from_points_examples() {
        let e = PointSet::new(2, [vec![1, 0], vec![0, 1]]).unwrap();
        let z = z_from_points(&e).unwrap();
        assert_eq!(z.value_of(&[1]), &q(1));
        assert_eq!(z.value_of(&[1, 2]), &q(1));
        let single = PointSet::new(3, [vec![2, -1, 5]]).unwrap();
        let z = z_from_points(&single).unwrap();
        assert_eq!(z.value_of(&[1, 3]), &q(7));
        assert_eq!(z.value_of(&[2]), &q(-1));
        assert!(matches!(z_from_points(&PointSet::new(2, []).unwrap()), Err(Error::EmptyPointSet)));
        let g = grothendieck(&p("1423")).homogenize().unwrap();
        assert!(is_submodular(&z_from_points(&PointSet::from_support(&g)).unwrap()));
    }

    #[test]
    fn exchange_axiom_examples() {
        assert!(m_convex_check(&PointSet::new(2, [vec![1, 0], vec![0, 1]]).unwrap()));
        let v = m_convex_violation(&PointSet::new(2, [vec![2, 0], vec![0, 2]]).unwrap()).unwrap();
        assert_eq!((v.x.clone(), v.i), (vec![0, 2], Some(2)));
        let mixed = PointSet::new(2, [vec![1, 0], vec![1, 1]]).unwrap();
        assert_eq!(m_convex_violation(&mixed).unwrap().i, None);
    }

    #[test]
    fn lattice_point_examples() {
        let e = PointSet::new(2, [vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(lattice_points(&z_from_points(&e).unwrap()).unwrap(), e);
        let z0 = SetFunction::zero(3).unwrap();
        assert_eq!(lattice_points(&z0).unwrap().points(), &BTreeSet::from([vec![0, 0, 0]]));
        let r = SetFunction::schubert_rank(3, &[2, 3]).unwrap();
        let bases = SchubertMatroid::new(3, &[2, 3]).unwrap().bases();
        let expect = PointSet::new(3, bases.iter().map(|b| indicator_i64(3, b))).unwrap();
        assert_eq!(lattice_points(&r).unwrap(), expect);
        let sq = SetFunction::from_fn(2, |m| (m.count_ones() as i64).pow(2)).unwrap();
        assert!(matches!(lattice_points(&sq), Err(Error::NotSubmodular)));
    }

    #[test]
    fn lattice_points_of_rank_functions_are_bases() {
        for n in 1..=5 {
            for g in 1..1u32 << n {
                let gens = elements(g);
                let r = SetFunction::schubert_rank(n, &gens).unwrap();
                let bases: BTreeSet<Vec<i64>> = subsets_below(&gens).iter().map(|b| indicator_i64(n, b)).collect();
                assert_eq!(lattice_points(&r).unwrap().points(), &bases);
            }
        }
    }

    #[test]
    fn order_on_subsets() {
        assert_eq!(vn_order_sets(2), vec![vec![1], vec![2], vec![1, 2]]);
        let v4: Vec<String> = vn_order(4).into_iter().map(subset_label).collect();
        let expect = "{1} {2} {1,2} {3} {1,3} {2,3} {1,2,3} {4} {1,4} {2,4} {1,2,4} {3,4} {1,3,4} {2,3,4} {1,2,3,4}";
        assert_eq!(v4.join(" "), expect);
        for n in 1..=8 {
            let v = vn_order(n);
            assert_eq!(v[..(1 << (n - 1)) - 1], vn_order(n - 1)[..]);
            // Comparison by the largest differing element is numeric order of masks.
            assert!(v.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn small_matrices() {
        let a3 = a_matrix(3).unwrap();
        assert_eq!(a3[0], vec![1, 0, 1, 0, 1, 0, 1]);
        assert_eq!(a3[6], vec![1, 1, 2, 1, 2, 2, 3]);
        for n in 2..=7 {
            let a = a_matrix(n).unwrap();
            let b = a_matrix(n - 1).unwrap();
            let m = b.len();
            for i in 0..m {
                assert_eq!(a[i][..m], b[i][..]);
            }
        }
        assert!(a_matrix(11).is_err());
        let csv = a_matrix_csv(2).unwrap();
        assert_eq!(csv, ",{1},{2},\"{1,2}\"\n{1},1,0,1\n{2},1,1,1\n\"{1,2}\",1,1,2\n");
        assert_eq!(matrix_text(&a_matrix(2).unwrap()), "1 0 1\n1 1 1\n1 1 2\n");
    }

    #[test]
    fn determinants_are_one() {
        for n in 1..=6 {
            assert_eq!(a_matrix_det(n).unwrap(), BigInt::from(1), "n = {n}");
        }
    }

    #[test]
    fn expansion_of_a_basis_element() {
        for n in 1..=5 {
            for g in vn_order(n) {
                let z = SetFunction::schubert_rank(n, &elements(g)).unwrap();
                let e = basis_expansion(&z).unwrap();
                assert_eq!(e.nonzero(), vec![(elements(g), q(1))]);
            }
        }
    }

    #[test]
    fn expansion_round_trips_random_functions() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let n = rng.gen_range(1..=6);
            let z = SetFunction::from_fn(n, |m| if m == 0 { 0 } else { rng.gen_range(-20..20) }).unwrap();
            let e = basis_expansion(&z).unwrap();
            assert!(e.coeffs().iter().all(|(_, c)| c.is_integer()));
            assert_eq!(e.reconstruct().unwrap(), z);
        }
        let half = SetFunction::new(1, vec![q(0), BigRational::new(1.into(), 2.into())]).unwrap();
        assert_eq!(basis_expansion(&half).unwrap().coeff(&[1]), BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn schubitope_decision() {
        let z0 = SetFunction::zero(3).unwrap();
        let d = is_schubitope(&z0).unwrap();
        assert!(d.is_schubitope);
        assert!(d.expansion.nonzero().is_empty());
        let cols = [vec![1, 3], vec![2], vec![1, 3]];
        let mut z = SetFunction::zero(4).unwrap();
        for c in &cols {
            z = z.add(&SetFunction::schubert_rank(4, c).unwrap()).unwrap();
        }
        let d = is_schubitope(&z).unwrap();
        assert!(d.is_schubitope);
        assert_eq!(d.expansion.nonzero(), vec![(vec![2], q(1)), (vec![1, 3], q(2))]);
        let json = d.expansion.to_json().to_string();
        assert_eq!(json, r#"[{"I":[2],"c":"1"},{"I":[1,3],"c":"2"}]"#);
    }

    #[test]
    fn fill_examples() {
        assert_eq!(column_fill(&[3, 5], 5, 0).unwrap(), vec![3, 5]);
        assert_eq!(column_fill(&[3, 5], 5, 1).unwrap(), vec![3, 4, 5]);
        assert_eq!(column_fill(&[3, 5], 5, 3).unwrap(), vec![1, 2, 3, 4, 5]);
        assert!(column_fill(&[3, 5], 5, 4).is_err());
    }

    #[test]
    fn rank_of_fills_is_a_truncated_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..300 {
            let n = rng.gen_range(1..=8);
            let mut set: Vec<usize> = (1..=n).filter(|_| rng.gen_bool(0.4)).collect();
            if set.is_empty() {
                set.push(rng.gen_range(1..=n));
            }
            let s = set[rng.gen_range(0..set.len())];
            let d = fill_capacity(&set, s);
            let top = mask_of(&column_fill(&set, s, d).unwrap());
            let base = mask_of(&set);
            for k in 0..=d {
                let fk = mask_of(&column_fill(&set, s, k).unwrap());
                for i in 0..1u32 << n {
                    let expect = theta_mask(top, i, n).min(theta_mask(base, i, n) + k as u32);
                    assert_eq!(theta_mask(fk, i, n), expect);
                }
            }
        }
    }

    #[test]
    fn one_column_examples() {
        let pts = lifted_column_points(&[1], 1, 3).unwrap();
        assert_eq!(pts.points(), &BTreeSet::from([vec![1, 0, 0, 0]]));
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let n = rng.gen_range(1..=6);
            let mut set: Vec<usize> = (1..=n).filter(|_| rng.gen_bool(0.4)).collect();
            if set.is_empty() {
                set.push(rng.gen_range(1..=n));
            }
            let s = set[rng.gen_range(0..set.len())];
            let pts = lifted_column_points(&set, s, n).unwrap();
            let z = one_column_z(&set, s, n).unwrap();
            assert!(is_submodular(&z));
            assert_eq!(lattice_points(&z).unwrap(), pts, "{set:?} {s}");
            assert!(m_convex_check(&pts));
        }
    }

    #[test]
    fn lifted_support_matches_homogenized_support() {
        for w in Permutation::all_vexillary(5) {
            let g = grothendieck(&w).homogenize().unwrap();
            assert_eq!(lifted_support(&w).unwrap(), PointSet::from_support(&g), "{w}");
        }
    }
}
