//! Sparse multivariate integer polynomials and the Grothendieck recursion.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Exponent vector of a monomial.
pub type Exponent = Vec<u32>;

/// A polynomial in `nvars` variables with integer coefficients. No stored
/// coefficient is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, BigInt>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    pub fn monomial(exp: Exponent, c: impl Into<BigInt>) -> Self {
        let nvars = exp.len();
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { nvars, terms }
    }

    /// `x_i`, 1-indexed.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i - 1] = 1;
        Self::monomial(e, 1)
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, BigInt)>) -> Result<Self> {
        let mut acc: HashMap<Exponent, BigInt> = HashMap::new();
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::NvarsMismatch {
                    left: nvars,
                    right: e.len(),
                });
            }
            *acc.entry(e).or_insert_with(BigInt::zero) += c;
        }
        Ok(Self::from_accumulator(nvars, acc))
    }

    fn from_accumulator(nvars: usize, acc: HashMap<Exponent, BigInt>) -> Self {
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Self { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, BigInt> {
        &self.terms
    }

    pub fn coeff(&self, e: &[u32]) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> BTreeSet<Exponent> {
        self.terms.keys().cloned().collect()
    }

    /// Maximum total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    fn check_nvars(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_nvars(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        Ok(Self {
            nvars: self.nvars,
            terms,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_nvars(other)?;
        let mut acc: HashMap<Exponent, BigInt> = HashMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        Ok(Self::from_accumulator(self.nvars, acc))
    }

    /// `s_j · f`: exchange `x_j` and `x_{j+1}`.
    pub fn swap_vars(&self, j: usize) -> Result<Self> {
        self.check_operator_index(j)?;
        Ok(Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e.swap(j - 1, j);
                    (e, c.clone())
                })
                .collect(),
        })
    }

    fn check_operator_index(&self, j: usize) -> Result<()> {
        if j == 0 || j >= self.nvars {
            return Err(Error::IndexOutOfRange {
                index: j,
                max: self.nvars.saturating_sub(1),
            });
        }
        Ok(())
    }

    /// Exact division by `x_j - x_{j+1}`.
    ///
    /// Terms are grouped by the exponents outside positions `j, j+1` and by
    /// `a_j + a_{j+1}`; each group is a binary form in `t = x_j / x_{j+1}` and
    /// is divided by `t - 1` synthetically. Any nonzero remainder is an error.
    pub fn div_by_difference(&self, j: usize) -> Result<Self> {
        self.check_operator_index(j)?;
        let (a, b) = (j - 1, j);
        // group key: exponent with positions a,b zeroed plus their total degree
        let mut groups: HashMap<(Exponent, u32), BTreeMap<u32, BigInt>> = HashMap::new();
        for (e, c) in &self.terms {
            let d = e[a] + e[b];
            let mut key = e.clone();
            key[a] = 0;
            key[b] = 0;
            groups.entry((key, d)).or_default().insert(e[a], c.clone());
        }
        let mut out: HashMap<Exponent, BigInt> = HashMap::new();
        for ((key, d), coeffs) in groups {
            let top = *coeffs.keys().next_back().unwrap();
            // b_{p-1} = c_p + b_p, from p = top down to 1; remainder c_0 + b_0
            let mut carry = BigInt::zero();
            for p in (1..=top).rev() {
                if let Some(c) = coeffs.get(&p) {
                    carry += c;
                }
                if !carry.is_zero() {
                    let mut e = key.clone();
                    e[a] = p - 1;
                    e[b] = d - p;
                    out.insert(e, carry.clone());
                }
            }
            if let Some(c) = coeffs.get(&0) {
                carry += c;
            }
            if !carry.is_zero() {
                return Err(Error::NonzeroRemainder { j });
            }
        }
        Ok(Self::from_accumulator(self.nvars, out))
    }

    /// `∂_j f = (f - s_j f) / (x_j - x_{j+1})`.
    pub fn divided_difference(&self, j: usize) -> Result<Self> {
        let numerator = self.sub(&self.swap_vars(j)?)?;
        numerator.div_by_difference(j)
    }

    /// `∂̄_j f = ∂_j(f - x_{j+1} f)`.
    pub fn isobaric_dd(&self, j: usize) -> Result<Self> {
        self.check_operator_index(j)?;
        let shifted = self.mul(&Self::var(self.nvars, j + 1))?;
        self.sub(&shifted)?.divided_difference(j)
    }

    /// Terms of total degree exactly `d`.
    pub fn homogeneous_component(&self, d: u32) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn top_component(&self) -> Result<Self> {
        let d = self.degree().ok_or(Error::ZeroPolynomial)?;
        Ok(self.homogeneous_component(d))
    }

    /// Adds a variable `z` in last position so that every term reaches total
    /// degree `deg(f)`.
    pub fn homogenize(&self) -> Result<Self> {
        let deg = self.degree().ok_or(Error::ZeroPolynomial)?;
        Ok(Self {
            nvars: self.nvars + 1,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let d: u32 = e.iter().sum();
                    let mut e2 = e.clone();
                    e2.push(deg - d);
                    (e2, c.clone())
                })
                .collect(),
        })
    }

    /// Terms in graded-lex order: total degree first, then lexicographic.
    pub fn graded_terms(&self) -> Vec<(&Exponent, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            da.cmp(&db).then_with(|| a.cmp(b))
        });
        v
    }

    /// `Some(m)` when `self = m · other` for a rational `m = p/q`, reported as
    /// the pair `(p, q)` in lowest terms with `q > 0`.
    pub fn ratio_to(&self, other: &Self) -> Option<(BigInt, BigInt)> {
        if self.nvars != other.nvars || self.support() != other.support() || self.is_zero() {
            return None;
        }
        let (e0, c0) = self.terms.iter().next().unwrap();
        let d0 = &other.terms[e0];
        for (e, c) in &self.terms {
            if c * d0 != &other.terms[e] * c0 {
                return None;
            }
        }
        let g = num_integer::Integer::gcd(c0, d0);
        let (mut p, mut q) = (c0 / &g, d0 / &g);
        if q.is_negative() {
            p = -p;
            q = -q;
        }
        Some((p, q))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.graded_terms() {
            let mono: String = e
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(i, &a)| {
                    if a == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, a)
                    }
                })
                .collect::<Vec<_>>()
                .join("*");
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    e: Vec<u32>,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    nvars: usize,
    terms: Vec<TermJson>,
}

impl Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            nvars: self.nvars,
            terms: self
                .graded_terms()
                .into_iter()
                .map(|(e, c)| TermJson {
                    e: e.clone(),
                    c: c.to_string(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(deserializer)?;
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            let c: BigInt = t.c.parse().map_err(serde::de::Error::custom)?;
            if c.is_zero() {
                return Err(serde::de::Error::custom("zero coefficient"));
            }
            terms.push((t.e, c));
        }
        let len = terms.len();
        let p = MultiPoly::from_terms(raw.nvars, terms).map_err(serde::de::Error::custom)?;
        if p.len() != len {
            return Err(serde::de::Error::custom("repeated exponent"));
        }
        Ok(p)
    }
}

/// `x_1^{n-1} x_2^{n-2} ... x_{n-1}`.
pub fn staircase(n: usize) -> MultiPoly {
    MultiPoly::monomial((0..n).map(|i| (n - 1 - i) as u32).collect(), 1)
}

/// The ascent chain from `w` to `w_0`: each step right-multiplies by `s_j`
/// for the smallest ascent `j`. Returns `(u, j)` pairs with `u_{t+1} = u_t s_j`.
fn ascent_chain(w: &Permutation) -> Vec<(Permutation, usize)> {
    let mut chain = Vec::new();
    let mut u = w.clone();
    while let Some(j) = u.first_ascent() {
        let next = u.swap_positions(j);
        chain.push((u, j));
        u = next;
    }
    chain
}

/// Concurrent memo table for recursively defined polynomials, keyed by
/// permutation. All writers compute identical values, so last-writer-wins is
/// harmless.
#[derive(Default)]
pub struct PolyMemo {
    table: DashMap<Permutation, Arc<MultiPoly>>,
}

impl PolyMemo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, w: &Permutation) -> Option<Arc<MultiPoly>> {
        self.table.get(w).map(|v| Arc::clone(&v))
    }

    pub fn insert(&self, w: Permutation, p: Arc<MultiPoly>) {
        self.table.insert(w, p);
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn clear(&self) {
        self.table.clear();
    }

    fn compute(
        &self,
        w: &Permutation,
        op: impl Fn(&MultiPoly, usize) -> Result<MultiPoly>,
    ) -> Arc<MultiPoly> {
        if let Some(p) = self.get(w) {
            return p;
        }
        let chain = ascent_chain(w);
        // walk up until a cached permutation (or w_0) is reached
        let mut start = chain.len();
        let mut current = Arc::new(staircase(w.n()));
        for (t, (u, _)) in chain.iter().enumerate() {
            if let Some(p) = self.get(u) {
                start = t;
                current = p;
                break;
            }
        }
        if start == chain.len() {
            self.insert(Permutation::longest(w.n()), Arc::clone(&current));
        }
        for t in (0..start).rev() {
            let (u, j) = &chain[t];
            let next = op(&current, *j).expect("divided difference of a polynomial is exact");
            current = Arc::new(next);
            self.insert(u.clone(), Arc::clone(&current));
        }
        current
    }

    /// The Grothendieck polynomial `𝔊_w` through this memo table.
    pub fn grothendieck(&self, w: &Permutation) -> Arc<MultiPoly> {
        self.compute(w, |f, j| f.isobaric_dd(j))
    }

    /// The Schubert polynomial `𝔖_w` (same recursion with `∂_j`).
    pub fn schubert(&self, w: &Permutation) -> Arc<MultiPoly> {
        self.compute(w, |f, j| f.divided_difference(j))
    }
}

fn global_groth_memo() -> &'static PolyMemo {
    static MEMO: OnceLock<PolyMemo> = OnceLock::new();
    MEMO.get_or_init(PolyMemo::new)
}

fn global_schubert_memo() -> &'static PolyMemo {
    static MEMO: OnceLock<PolyMemo> = OnceLock::new();
    MEMO.get_or_init(PolyMemo::new)
}

/// `𝔊_w`, memoized process-wide.
pub fn grothendieck(w: &Permutation) -> Arc<MultiPoly> {
    global_groth_memo().grothendieck(w)
}

/// `𝔖_w`, memoized process-wide.
pub fn schubert(w: &Permutation) -> Arc<MultiPoly> {
    global_schubert_memo().schubert(w)
}

/// `𝔊_w` along an explicitly chosen chain: at each step the ascent is picked
/// by `choose` from the ascents of the current permutation. No memoization.
pub fn grothendieck_via(w: &Permutation, choose: &mut dyn FnMut(&[usize]) -> usize) -> MultiPoly {
    let mut steps = Vec::new();
    let mut u = w.clone();
    loop {
        let asc: Vec<usize> = u.ascents().collect();
        if asc.is_empty() {
            break;
        }
        let j = choose(&asc);
        steps.push(j);
        u = u.swap_positions(j);
    }
    let mut f = staircase(w.n());
    for &j in steps.iter().rev() {
        f = f.isobaric_dd(j).expect("exact");
    }
    f
}
