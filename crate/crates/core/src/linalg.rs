//! Exact linear algebra over the integers and rationals.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Determinant by fraction-free (Bareiss) elimination. Every intermediate
/// division is exact.
pub fn det_bareiss(m: &[Vec<BigInt>]) -> Result<BigInt> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Invalid("determinant of a non-square matrix".into()));
    }
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return Ok(BigInt::zero());
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    Ok(sign * &a[n - 1][n - 1])
}

/// Incremental rank of sparse rational vectors. Rows are kept in echelon form
/// keyed by their leading index, with leading coefficient one.
#[derive(Debug, Clone, Default)]
pub struct SparseEchelon {
    pivots: BTreeMap<usize, BTreeMap<usize, BigRational>>,
}

impl SparseEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` against the current rows and keeps it if something is left.
    /// Returns whether the rank grew.
    pub fn insert(&mut self, mut v: BTreeMap<usize, BigRational>) -> bool {
        v.retain(|_, c| !c.is_zero());
        loop {
            let Some((&lead, _)) = v.iter().next() else {
                return false;
            };
            match self.pivots.get(&lead) {
                Some(row) => {
                    let f = v[&lead].clone();
                    for (k, c) in row {
                        let e = v.entry(*k).or_insert_with(BigRational::zero);
                        *e -= &f * c;
                        if e.is_zero() {
                            v.remove(k);
                        }
                    }
                }
                None => {
                    let inv = v[&lead].recip();
                    for c in v.values_mut() {
                        *c *= &inv;
                    }
                    self.pivots.insert(lead, v);
                    return true;
                }
            }
        }
    }
}

/// Rank of a family of sparse rational vectors.
pub fn sparse_rank(vectors: impl IntoIterator<Item = BTreeMap<usize, BigRational>>) -> usize {
    let mut e = SparseEchelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

const PRIMES: [u64; 12] = [
    2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549, 2147483543, 2147483497,
    2147483489, 2147483477, 2147483423, 2147483399,
];

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn reduce(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

/// PLU factorization of a square matrix modulo a prime.
#[derive(Debug, Clone)]
struct LuModP {
    p: u64,
    lu: Vec<Vec<u64>>,
    perm: Vec<usize>,
}

impl LuModP {
    fn new(a: &[Vec<i64>], p: u64) -> Option<Self> {
        let n = a.len();
        let mut lu: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|&x| reduce(x, p)).collect()).collect();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let piv = (k..n).find(|&r| lu[r][k] != 0)?;
            lu.swap(k, piv);
            perm.swap(k, piv);
            let inv = inv_mod(lu[k][k], p);
            let (top, bottom) = lu.split_at_mut(k + 1);
            let pivot_row = &top[k];
            for row in bottom.iter_mut() {
                if row[k] == 0 {
                    continue;
                }
                let f = row[k] * inv % p;
                row[k] = f;
                for j in k + 1..n {
                    let t = f * pivot_row[j] % p;
                    row[j] = if row[j] >= t { row[j] - t } else { row[j] + p - t };
                }
            }
        }
        Some(Self { p, lu, perm })
    }

    fn solve(&self, b: &[u64]) -> Vec<u64> {
        let n = self.lu.len();
        let p = self.p;
        let mut y: Vec<u64> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 0..n {
            let mut s = y[i];
            for j in 0..i {
                let t = self.lu[i][j] * y[j] % p;
                s = (s + p - t) % p;
            }
            y[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..n {
                let t = self.lu[i][j] * y[j] % p;
                s = (s + p - t) % p;
            }
            y[i] = s * inv_mod(self.lu[i][i], p) % p;
        }
        y
    }
}

/// Solves `A x = b` over the integers for a square integer matrix with an
/// integral solution. Solutions are found modulo several primes, lifted by the
/// Chinese remainder theorem to the symmetric range, and accepted only when
/// `A x = b` holds exactly.
#[derive(Debug)]
pub struct IntegerSolver {
    a: Vec<Vec<i64>>,
    lus: std::sync::Mutex<Vec<LuModP>>,
}

impl IntegerSolver {
    pub fn new(a: Vec<Vec<i64>>) -> Result<Self> {
        let n = a.len();
        if a.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("solver needs a square matrix".into()));
        }
        Ok(Self {
            a,
            lus: std::sync::Mutex::new(Vec::new()),
        })
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    fn lu(&self, t: usize) -> Option<LuModP> {
        let mut lus = self.lus.lock().expect("solver lock");
        while lus.len() <= t {
            let p = PRIMES[lus.len()];
            lus.push(LuModP::new(&self.a, p)?);
        }
        Some(lus[t].clone())
    }

    /// Exact residual check `A x = b`.
    pub fn satisfies(&self, x: &[BigInt], b: &[BigInt]) -> bool {
        self.a.iter().zip(b).all(|(row, bi)| {
            let s: BigInt = row
                .iter()
                .zip(x)
                .filter(|(a, _)| **a != 0)
                .map(|(a, xi)| BigInt::from(*a) * xi)
                .sum();
            &s == bi
        })
    }

    pub fn solve(&self, b: &[BigInt]) -> Result<Vec<BigInt>> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::Invalid(format!("right-hand side has length {}, expected {n}", b.len())));
        }
        let mut modulus = BigInt::one();
        let mut x: Vec<BigInt> = vec![BigInt::zero(); n];
        for t in 0..PRIMES.len() {
            let Some(lu) = self.lu(t) else {
                return Err(Error::Singular);
            };
            let p = lu.p;
            let pb = BigInt::from(p);
            let bm: Vec<u64> = b
                .iter()
                .map(|v| v.mod_floor(&pb).try_into().expect("residue fits"))
                .collect();
            let xm = lu.solve(&bm);
            // Combine x (mod modulus) with xm (mod p).
            let m_inv = BigInt::from(inv_mod((&modulus % &pb).try_into().expect("residue fits"), p));
            for (xi, r) in x.iter_mut().zip(&xm) {
                let diff = (BigInt::from(*r) - &*xi).mod_floor(&pb);
                let k = (diff * &m_inv).mod_floor(&pb);
                *xi += k * &modulus;
            }
            modulus *= &pb;
            let half = &modulus / 2;
            let lifted: Vec<BigInt> = x
                .iter()
                .map(|v| if v > &half { v - &modulus } else { v.clone() })
                .collect();
            if self.satisfies(&lifted, b) {
                return Ok(lifted);
            }
        }
        Err(Error::Singular)
    }
}

/// Clears denominators: returns `(scale, integers)` with `v = integers / scale`.
pub fn common_denominator(v: &[BigRational]) -> (BigInt, Vec<BigInt>) {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    (l.abs(), ints)
}
