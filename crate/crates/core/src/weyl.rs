//! Schubert matroids, the parenthesis-matching rank θ, Schubitope supports and
//! dual characters of flagged Weyl modules.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::bubbling::d_top;
use crate::diagram::{subsets_below, Diagram};
use crate::error::{Error, Result};
use crate::linalg::SparseEchelon;
use crate::perm::Permutation;
use crate::poly::{grothendieck, Exponent, MultiPoly};

/// Largest `n` accepted by [`dual_character`] unless a bound is passed.
pub const DUAL_CHARACTER_BOUND: usize = 6;

/// Bitmask of a subset of `[n]`: element `i` is bit `i - 1`.
pub fn mask_of(set: &[usize]) -> u32 {
    set.iter().fold(0, |m, &i| m | 1 << (i - 1))
}

/// Elements of a bitmask subset, increasing.
pub fn elements(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask >> b & 1 == 1).map(|b| b as usize + 1).collect()
}

/// The Schubert matroid `SM_n(I)`: bases are the `B` with `B ≤ I`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SchubertMatroid {
    n: usize,
    gens: Vec<usize>,
}

impl SchubertMatroid {
    pub fn new(n: usize, gens: &[usize]) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::Invalid("a Schubert matroid needs a nonempty generating set".into()));
        }
        if gens.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid(format!("generators {gens:?} are not strictly increasing")));
        }
        if let Some(&g) = gens.iter().find(|&&g| g == 0 || g > n) {
            return Err(Error::IndexOutOfRange { index: g, max: n });
        }
        Ok(Self { n, gens: gens.to_vec() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> &[usize] {
        &self.gens
    }

    /// All `{a₁ < … < a_r}` with `aᵢ ≤ sᵢ`.
    pub fn bases(&self) -> Vec<Vec<usize>> {
        subsets_below(&self.gens)
    }

    /// Rank as the largest intersection with a basis.
    pub fn rank_bruteforce(&self, j: &[usize]) -> usize {
        let jm = mask_of(j);
        self.bases()
            .iter()
            .map(|b| (mask_of(b) & jm).count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Rank through [`theta`].
    pub fn rank(&self, j: &[usize]) -> usize {
        theta_mask(mask_of(&self.gens), mask_of(j), self.n) as usize
    }
}

/// `word_I^n(J)`: position `k` records `_`, `(`, `)` or `★` according to
/// membership of `k` in `I` and `J`.
pub fn word(i: &[usize], j: &[usize], n: usize) -> String {
    let (im, jm) = (mask_of(i), mask_of(j));
    (0..n)
        .map(|b| match (im >> b & 1 == 1, jm >> b & 1 == 1) {
            (false, false) => '_',
            (false, true) => '(',
            (true, false) => ')',
            (true, true) => '★',
        })
        .collect()
}

/// Matched pairs plus stars of `word_I^n(J)`.
pub fn theta(i: &[usize], j: &[usize], n: usize) -> usize {
    theta_mask(mask_of(i), mask_of(j), n) as usize
}

pub fn theta_mask(i: u32, j: u32, n: usize) -> u32 {
    let mut open = 0u32;
    let mut total = 0u32;
    for b in 0..n {
        match (i >> b & 1 == 1, j >> b & 1 == 1) {
            (true, true) => total += 1,
            (false, true) => open += 1,
            (true, false) if open > 0 => {
                open -= 1;
                total += 1;
            }
            _ => {}
        }
    }
    total
}

/// Indicator-vector sum of a set of rows.
fn indicator(n: usize, rows: &[usize]) -> Vec<u32> {
    let mut v = vec![0; n];
    for &r in rows {
        v[r - 1] += 1;
    }
    v
}

fn add_vec(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `{wt(C) : C ≤ D}`, built column by column.
pub fn schubitope_support(d: &Diagram) -> BTreeSet<Vec<u32>> {
    let n = d.n();
    let mut acc: BTreeSet<Vec<u32>> = BTreeSet::from([vec![0; n]]);
    for col in d.columns() {
        if col.is_empty() {
            continue;
        }
        let col_weights: BTreeSet<Vec<u32>> = subsets_below(&col).iter().map(|c| indicator(n, c)).collect();
        acc = acc
            .iter()
            .flat_map(|a| col_weights.iter().map(move |c| add_vec(a, c)))
            .collect();
    }
    acc
}

/// Polynomial in the entries `y_ij` (`i ≤ j ≤ n`) of a generic upper-triangular
/// matrix. Exponents are indexed by [`YPolynomial::index`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YPolynomial {
    n: usize,
    terms: BTreeMap<Vec<u8>, BigRational>,
}

impl YPolynomial {
    pub fn one(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::from([(vec![0; n * (n + 1) / 2], BigRational::one())]),
        }
    }

    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    /// Position of `y_ij` in an exponent vector.
    pub fn index(n: usize, i: usize, j: usize) -> Result<usize> {
        if i == 0 || i > j || j > n {
            return Err(Error::Invalid(format!("y_{i}{j} is not an upper-triangular entry for n = {n}")));
        }
        // Rows 1..i-1 contribute n, n-1, ... entries.
        Ok((i - 1) * (2 * n - i + 2) / 2 + (j - i))
    }

    pub fn var(n: usize, i: usize, j: usize) -> Result<Self> {
        let idx = Self::index(n, i, j)?;
        let mut e = vec![0; n * (n + 1) / 2];
        e[idx] = 1;
        Ok(Self {
            n,
            terms: BTreeMap::from([(e, BigRational::one())]),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u8>, BigRational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::NvarsMismatch { left: self.n, right: other.n });
        }
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let v = terms.entry(e.clone()).or_insert_with(BigRational::zero);
            *v += c;
            if v.is_zero() {
                terms.remove(e);
            }
        }
        Ok(Self { n: self.n, terms })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::NvarsMismatch { left: self.n, right: other.n });
        }
        let mut terms: BTreeMap<Vec<u8>, BigRational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u8> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let v = terms.entry(e).or_insert_with(BigRational::zero);
                *v += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Self { n: self.n, terms })
    }

    /// `det(Y_{rows, cols})` by the permutation sum, skipping entries below the
    /// diagonal.
    pub fn minor(n: usize, rows: &[usize], cols: &[usize]) -> Result<Self> {
        if rows.len() != cols.len() {
            return Err(Error::Invalid("minor needs as many rows as columns".into()));
        }
        if let Some(&x) = rows.iter().chain(cols).find(|&&x| x == 0 || x > n) {
            return Err(Error::IndexOutOfRange { index: x, max: n });
        }
        let width = n * (n + 1) / 2;
        let mut terms = BTreeMap::new();
        let mut used = vec![false; cols.len()];
        let mut exp = vec![0u8; width];
        fn rec(
            n: usize,
            r: usize,
            rows: &[usize],
            cols: &[usize],
            used: &mut [bool],
            exp: &mut Vec<u8>,
            inversions: usize,
            terms: &mut BTreeMap<Vec<u8>, BigRational>,
        ) {
            if r == rows.len() {
                let s = if inversions % 2 == 0 { 1 } else { -1 };
                let v = terms.entry(exp.clone()).or_insert_with(BigRational::zero);
                *v += BigRational::from_integer(s.into());
                return;
            }
            for c in 0..cols.len() {
                if used[c] || rows[r] > cols[c] {
                    continue;
                }
                let inv = used[c + 1..].iter().filter(|&&u| u).count();
                let idx = YPolynomial::index(n, rows[r], cols[c]).expect("checked above");
                used[c] = true;
                exp[idx] += 1;
                rec(n, r + 1, rows, cols, used, exp, inversions + inv, terms);
                exp[idx] -= 1;
                used[c] = false;
            }
        }
        rec(n, 0, rows, cols, &mut used, &mut exp, 0, &mut terms);
        terms.retain(|_, c: &mut BigRational| !c.is_zero());
        Ok(Self { n, terms })
    }
}

/// [`dual_character_bounded`] with [`DUAL_CHARACTER_BOUND`].
pub fn dual_character(d: &Diagram) -> Result<MultiPoly> {
    dual_character_bounded(d, DUAL_CHARACTER_BOUND)
}

/// `χ_D`: the coefficient of `x^α` is the dimension of the span of the
/// products of minors `∏_j det(Y^{C_j}_{D_j})` over `C ≤ D` with `wt(C) = α`.
pub fn dual_character_bounded(d: &Diagram, bound: usize) -> Result<MultiPoly> {
    let n = d.n();
    if n > bound {
        return Err(Error::BoundExceeded { requested: n, bound });
    }
    // Per column: (weight, minor) for each C_j ≤ D_j.
    let mut per_column: Vec<Vec<(Vec<u32>, YPolynomial)>> = Vec::new();
    for col in d.columns() {
        if col.is_empty() {
            continue;
        }
        let mut choices = Vec::new();
        for c in subsets_below(&col) {
            choices.push((indicator(n, &c), YPolynomial::minor(n, &c, &col)?));
        }
        per_column.push(choices);
    }
    // Group index tuples by weight.
    let mut classes: BTreeMap<Vec<u32>, Vec<Vec<usize>>> = BTreeMap::new();
    let mut tuple = Vec::with_capacity(per_column.len());
    fn group(
        per_column: &[Vec<(Vec<u32>, YPolynomial)>],
        wt: Vec<u32>,
        tuple: &mut Vec<usize>,
        classes: &mut BTreeMap<Vec<u32>, Vec<Vec<usize>>>,
    ) {
        let j = tuple.len();
        if j == per_column.len() {
            classes.entry(wt).or_default().push(tuple.clone());
            return;
        }
        for (c, (w, _)) in per_column[j].iter().enumerate() {
            tuple.push(c);
            group(per_column, add_vec(&wt, w), tuple, classes);
            tuple.pop();
        }
    }
    group(&per_column, vec![0; n], &mut tuple, &mut classes);

    let mut terms = Vec::with_capacity(classes.len());
    for (wt, tuples) in classes {
        let mut ids: HashMap<Vec<u8>, usize> = HashMap::new();
        let mut echelon = SparseEchelon::new();
        for t in tuples {
            let mut p = YPolynomial::one(n);
            for (j, &c) in t.iter().enumerate() {
                p = p.mul(&per_column[j][c].1)?;
            }
            let v: BTreeMap<usize, BigRational> = p
                .terms
                .into_iter()
                .map(|(e, c)| {
                    let next = ids.len();
                    (*ids.entry(e).or_insert(next), c)
                })
                .collect();
            echelon.insert(v);
        }
        if echelon.rank() > 0 {
            terms.push((wt as Exponent, BigInt::from(echelon.rank())));
        }
    }
    MultiPoly::from_terms(n, terms)
}

/// Outcome of comparing the top-degree Grothendieck component with the dual
/// character of the top diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProportionalityCheck {
    /// `𝔊_w^⊤ = m · χ`.
    Multiple { m: BigInt },
    /// First weight (in increasing order) where proportionality by an integer
    /// breaks, with both coefficients there.
    Counterexample {
        weight: Vec<u32>,
        top: BigInt,
        chi: BigInt,
        ratio: Option<(BigInt, BigInt)>,
    },
}

/// Compares `𝔊_w^⊤` with `χ_{D^⊤(w)}`. Grothendieck signs make the multiple
/// carry the sign `(−1)^{deg − ℓ(w)}`.
pub fn conjecture1_check(w: &Permutation) -> Result<ProportionalityCheck> {
    if !w.is_vexillary() {
        return Err(Error::NotVexillary(w.to_string()));
    }
    let top = grothendieck(w).top_component()?;
    let chi = dual_character(&d_top(w)?.cells())?;
    compare_proportional(&top, &chi)
}

/// Integer proportionality test `a = m · b`, reporting the first offending
/// weight otherwise.
pub fn compare_proportional(a: &MultiPoly, b: &MultiPoly) -> Result<ProportionalityCheck> {
    if a.nvars() != b.nvars() {
        return Err(Error::NvarsMismatch { left: a.nvars(), right: b.nvars() });
    }
    let ratio = a.ratio_to(b);
    if let Some((p, q)) = &ratio {
        if q.is_one() {
            return Ok(ProportionalityCheck::Multiple { m: p.clone() });
        }
    }
    let weights: BTreeSet<Exponent> = a.support().union(&b.support()).cloned().collect();
    let first = weights.iter().next().cloned().unwrap_or_else(|| vec![0; a.nvars()]);
    let (a0, b0) = (a.coeff(&first), b.coeff(&first));
    let bad = weights
        .iter()
        .find(|e| {
            let (x, y) = (a.coeff(e), b.coeff(e));
            y.is_zero() || x.is_zero() || !(&x % &y).is_zero() || &x * &b0 != &a0 * &y
        })
        .cloned()
        .unwrap_or(first);
    Ok(ProportionalityCheck::Counterexample {
        top: a.coeff(&bad),
        chi: b.coeff(&bad),
        weight: bad,
        ratio: ratio.map(|(p, q)| (p, q.abs())),
    })
}
