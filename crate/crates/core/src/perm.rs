//! Permutations in one-line notation.
//!
//! Values are 1-indexed. Permutations act on the right, so `w.swap_positions(j)`
//! is `w s_j`: the entries in positions `j` and `j + 1` are exchanged.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    entries: Vec<usize>,
}

impl Permutation {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        let n = entries.len();
        let mut seen = vec![false; n + 1];
        for &v in &entries {
            if v == 0 || v > n {
                return Err(Error::InvalidPermutation(format!(
                    "value {v} outside 1..={n}"
                )));
            }
            if seen[v] {
                return Err(Error::InvalidPermutation(format!("value {v} repeated")));
            }
            seen[v] = true;
        }
        Ok(Self { entries })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            entries: (1..=n).collect(),
        }
    }

    /// The longest element `n n-1 ... 1`.
    pub fn longest(n: usize) -> Self {
        Self {
            entries: (1..=n).rev().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// `w(i)` for 1-indexed `i`.
    pub fn at(&self, i: usize) -> usize {
        self.entries[i - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.entries.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Self { entries: inv }
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.n(), other.n());
        Self {
            entries: other.entries.iter().map(|&i| self.at(i)).collect(),
        }
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let e = &self.entries;
        let mut count = 0;
        for i in 0..e.len() {
            for j in i + 1..e.len() {
                if e[i] > e[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// `w s_j`, exchanging positions `j` and `j + 1`.
    pub fn swap_positions(&self, j: usize) -> Self {
        let mut entries = self.entries.clone();
        entries.swap(j - 1, j);
        Self { entries }
    }

    /// Positions `j` with `w(j) < w(j+1)`.
    pub fn ascents(&self) -> impl Iterator<Item = usize> + '_ {
        (1..self.n()).filter(move |&j| self.at(j) < self.at(j + 1))
    }

    pub fn first_ascent(&self) -> Option<usize> {
        (1..self.n()).find(|&j| self.at(j) < self.at(j + 1))
    }

    /// 2143-avoidance. The inner pair (the "1" and the "4" of the pattern) is
    /// fixed and the outer pair is searched, which keeps this `O(n^3)`.
    pub fn is_vexillary(&self) -> bool {
        let n = self.n();
        let e = &self.entries;
        // pattern positions a < b < c < d with e[b] < e[a] < e[d] < e[c]
        for b in 0..n {
            for c in b + 1..n {
                if e[c] <= e[b] {
                    continue;
                }
                // need a < b with e[b] < e[a] < e[c] and d > c with e[a] < e[d] < e[c]
                // choose the smallest admissible e[a] to leave the widest window for e[d]
                let best_a = (0..b)
                    .map(|a| e[a])
                    .filter(|&v| v > e[b] && v < e[c])
                    .min();
                if let Some(va) = best_a {
                    if (c + 1..n).any(|d| e[d] > va && e[d] < e[c]) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// All permutations of `1..=n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (1..=n).collect();
        loop {
            out.push(Permutation {
                entries: cur.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }

    pub fn all_vexillary(n: usize) -> Vec<Permutation> {
        Self::all(n).into_iter().filter(|w| w.is_vexillary()).collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &v in &self.entries {
            if v >= 10 {
                write!(f, "({v})")?;
            } else {
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts compact digits (`14253`), parenthesized multi-digit values
    /// (`2168534(10)79`), or comma/space separated values (`2,1,6,...`).
    fn from_str(s: &str) -> Result<Self> {
        let parse_err = |reason: &str| Error::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let s_trim = s.trim();
        if s_trim.is_empty() {
            return Err(parse_err("empty input"));
        }
        let mut entries = Vec::new();
        if s_trim.contains(',') || s_trim.contains(' ') {
            for tok in s_trim.split(|c: char| c == ',' || c.is_whitespace()) {
                if tok.is_empty() {
                    continue;
                }
                entries.push(tok.parse::<usize>().map_err(|_| parse_err("bad number"))?);
            }
        } else {
            let mut chars = s_trim.chars();
            while let Some(c) = chars.next() {
                if c == '(' {
                    let mut num = String::new();
                    loop {
                        match chars.next() {
                            Some(')') => break,
                            Some(d) if d.is_ascii_digit() => num.push(d),
                            _ => return Err(parse_err("unterminated or malformed parenthesis")),
                        }
                    }
                    entries.push(num.parse::<usize>().map_err(|_| parse_err("empty parenthesis"))?);
                } else if let Some(d) = c.to_digit(10) {
                    entries.push(d as usize);
                } else {
                    return Err(parse_err("unexpected character"));
                }
            }
        }
        Permutation::new(entries).map_err(|e| match e {
            Error::InvalidPermutation(r) => parse_err(&r),
            other => other,
        })
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<usize>::deserialize(deserializer)?;
        Permutation::new(entries).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn brute_vexillary(w: &Permutation) -> bool {
        let e = w.entries();
        let n = e.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in k + 1..n {
                        if e[j] < e[i] && e[i] < e[l] && e[l] < e[k] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(p("1234").inverse(), p("1234"));
        assert_eq!(p("1423").inverse(), p("1342"));
        assert_eq!(p("2143").inverse(), p("2143"));
        let w = p("1423");
        assert_eq!(w.compose(&w.inverse()), Permutation::identity(4));
    }

    #[test]
    fn length_examples() {
        assert_eq!(p("1234").length(), 0);
        assert_eq!(p("4321").length(), 6);
        assert_eq!(p("1423").length(), 2);
    }

    #[test]
    fn vexillary_examples() {
        assert!(!p("2143").is_vexillary());
        assert!(p("14253").is_vexillary());
        assert!(!p("2168534(10)79").is_vexillary());
    }

    #[test]
    fn vexillary_agrees_with_quadruple_scan() {
        for n in 1..=7 {
            for w in Permutation::all(n) {
                assert_eq!(w.is_vexillary(), brute_vexillary(&w), "{w}");
            }
        }
    }

    #[test]
    fn length_is_inverse_invariant() {
        for n in 1..=7 {
            for w in Permutation::all(n) {
                assert_eq!(w.length(), w.inverse().length());
            }
        }
    }

    #[test]
    fn all_counts() {
        assert_eq!(Permutation::all(5).len(), 120);
        assert_eq!(Permutation::all(1).len(), 1);
        // vexillary permutations of S_4: 24 - 1
        assert_eq!(Permutation::all_vexillary(4).len(), 23);
    }

    #[test]
    fn parse_and_display() {
        let w = p("2168534(10)79");
        assert_eq!(w.entries(), &[2, 1, 6, 8, 5, 3, 4, 10, 7, 9]);
        assert_eq!(w.to_string(), "2168534(10)79");
        assert_eq!(p("2,1,3"), p("213"));
        assert!("1223".parse::<Permutation>().is_err());
        assert!("12(3".parse::<Permutation>().is_err());
        assert!("".parse::<Permutation>().is_err());
        assert!("1a".parse::<Permutation>().is_err());
    }

    #[test]
    fn json_is_plain_array() {
        let w = p("1423");
        assert_eq!(serde_json::to_string(&w).unwrap(), "[1,4,2,3]");
        let back: Permutation = serde_json::from_str("[1,4,2,3]").unwrap();
        assert_eq!(back, w);
        assert!(serde_json::from_str::<Permutation>("[1,1]").is_err());
    }
}
