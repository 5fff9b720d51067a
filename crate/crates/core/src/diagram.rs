//! Plain diagrams, the dominance order on them, and Rothe data.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

pub type Cell = (usize, usize);

/// A subset of the `n × k` grid. Cells are `(row, column)`, 1-indexed, in
/// matrix orientation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagram {
    n: usize,
    k: usize,
    cells: BTreeSet<Cell>,
}

impl Diagram {
    pub fn new(n: usize, k: usize, cells: impl IntoIterator<Item = Cell>) -> Result<Self> {
        let cells: BTreeSet<Cell> = cells.into_iter().collect();
        for &(r, c) in &cells {
            if r == 0 || r > n || c == 0 || c > k {
                return Err(Error::Invalid(format!("cell ({r},{c}) outside {n}x{k} grid")));
            }
        }
        Ok(Self { n, k, cells })
    }

    pub fn empty(n: usize, k: usize) -> Self {
        Self {
            n,
            k,
            cells: BTreeSet::new(),
        }
    }

    /// Builds a diagram from per-column row sets; column `j` is `columns[j - 1]`.
    pub fn from_columns(n: usize, columns: &[Vec<usize>]) -> Result<Self> {
        let cells = columns
            .iter()
            .enumerate()
            .flat_map(|(j, rows)| rows.iter().map(move |&r| (r, j + 1)));
        Self::new(n, columns.len(), cells)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn cells(&self) -> &BTreeSet<Cell> {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.cells.contains(&cell)
    }

    /// Sorted rows of column `j`.
    pub fn column(&self, j: usize) -> Vec<usize> {
        self.cells
            .iter()
            .filter(|&&(_, c)| c == j)
            .map(|&(r, _)| r)
            .collect()
    }

    pub fn columns(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.k];
        for &(r, c) in &self.cells {
            cols[c - 1].push(r);
        }
        cols
    }

    /// Row counts.
    pub fn weight(&self) -> Vec<u32> {
        let mut wt = vec![0; self.n];
        for &(r, _) in &self.cells {
            wt[r - 1] += 1;
        }
        wt
    }
}

/// `R ≤ S`: equal sizes and the `k`-th smallest of `R` is at most the `k`-th
/// smallest of `S`.
pub fn subset_leq(r: &[usize], s: &[usize]) -> bool {
    if r.len() != s.len() {
        return false;
    }
    let mut r = r.to_vec();
    let mut s = s.to_vec();
    r.sort_unstable();
    s.sort_unstable();
    r.iter().zip(&s).all(|(a, b)| a <= b)
}

/// Columnwise [`subset_leq`]. Diagrams of different widths are incomparable.
pub fn diagram_leq(c: &Diagram, d: &Diagram) -> bool {
    if c.k != d.k {
        return false;
    }
    c.columns()
        .iter()
        .zip(d.columns().iter())
        .all(|(a, b)| subset_leq(a, b))
}

/// All `C ⊆ [n]` with `C ≤ s` (that is, the bases of the Schubert matroid of `s`).
pub fn subsets_below(s: &[usize]) -> Vec<Vec<usize>> {
    let mut s = s.to_vec();
    s.sort_unstable();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(s.len());
    fn rec(s: &[usize], idx: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if idx == s.len() {
            out.push(cur.clone());
            return;
        }
        for a in lo..=s[idx] {
            cur.push(a);
            rec(s, idx + 1, a + 1, cur, out);
            cur.pop();
        }
    }
    rec(&s, 0, 1, &mut cur, &mut out);
    out
}

/// Number of fills available to [`column_fill`]: `s - #{i ∈ S : i ≤ s}`.
pub fn fill_capacity(set: &[usize], s: usize) -> usize {
    s - set.iter().filter(|&&i| i <= s).count()
}

/// `S^(k,s)`: adds the largest row below `s` missing from the set, `k` times.
pub fn column_fill(set: &[usize], s: usize, k: usize) -> Result<Vec<usize>> {
    if !set.contains(&s) {
        return Err(Error::Invalid(format!("{s} is not an element of the column")));
    }
    let max = fill_capacity(set, s);
    if k > max {
        return Err(Error::FillOutOfRange { k, max });
    }
    let mut out: BTreeSet<usize> = set.iter().copied().collect();
    for _ in 0..k {
        let i = (1..s).rev().find(|i| !out.contains(i)).expect("capacity checked");
        out.insert(i);
    }
    Ok(out.into_iter().collect())
}

/// Rank values attached to the cells of a diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    values: BTreeMap<Cell, u32>,
}

impl RankTable {
    pub fn get(&self, cell: Cell) -> Option<u32> {
        self.values.get(&cell).copied()
    }

    pub fn values(&self) -> &BTreeMap<Cell, u32> {
        &self.values
    }
}

/// The Rothe diagram `D(w)` with its rank function.
pub fn rothe_diagram(w: &Permutation) -> (Diagram, RankTable) {
    let n = w.n();
    let winv = w.inverse();
    let mut cells = BTreeSet::new();
    let mut values = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            if i < winv.at(j) && j < w.at(i) {
                cells.insert((i, j));
                let rank = (1..i).filter(|&k| w.at(k) < j).count() as u32;
                values.insert((i, j), rank);
            }
        }
    }
    (Diagram { n, k: n, cells }, RankTable { values })
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    n: usize,
    k: usize,
    cells: Vec<[usize; 2]>,
}

impl Serialize for Diagram {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DiagramJson {
            n: self.n,
            k: self.k,
            cells: self.cells.iter().map(|&(r, c)| [r, c]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Diagram {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = DiagramJson::deserialize(deserializer)?;
        Diagram::new(raw.n, raw.k, raw.cells.into_iter().map(|[r, c]| (r, c)))
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn rothe_examples() {
        let (d, r) = rothe_diagram(&p("1234"));
        assert!(d.is_empty());
        assert!(r.values().is_empty());

        let (d, r) = rothe_diagram(&p("1423"));
        assert_eq!(d.cells().iter().copied().collect::<Vec<_>>(), vec![(2, 2), (2, 3)]);
        assert_eq!(r.get((2, 2)), Some(1));
        assert_eq!(r.get((2, 3)), Some(1));

        let (d, r) = rothe_diagram(&p("321"));
        assert_eq!(
            d.cells().iter().copied().collect::<Vec<_>>(),
            vec![(1, 1), (1, 2), (2, 1)]
        );
        assert!(r.values().values().all(|&v| v == 0));
    }

    #[test]
    fn rothe_size_is_length() {
        for n in 1..=7 {
            for w in Permutation::all(n) {
                assert_eq!(rothe_diagram(&w).0.len(), w.length());
            }
        }
    }

    #[test]
    fn subset_leq_examples() {
        assert!(subset_leq(&[1, 3], &[2, 3]));
        assert!(!subset_leq(&[1], &[1, 2]));
        assert!(!subset_leq(&[2, 4], &[1, 4]));
        assert!(subset_leq(&[], &[]));
        assert!(subset_leq(&[3, 1], &[3, 2]));
    }

    #[test]
    fn diagram_leq_examples() {
        let e = Diagram::empty(3, 3);
        assert!(diagram_leq(&e, &e));
        let c = Diagram::from_columns(3, &[vec![1], vec![1, 2]]).unwrap();
        let d = Diagram::from_columns(3, &[vec![2], vec![1, 3]]).unwrap();
        assert!(diagram_leq(&c, &d));
        assert!(!diagram_leq(&d, &c));
        let wider = Diagram::empty(3, 4);
        assert!(!diagram_leq(&e, &wider));
    }

    #[test]
    fn weight_examples() {
        assert_eq!(Diagram::empty(4, 4).weight(), vec![0, 0, 0, 0]);
        assert_eq!(rothe_diagram(&p("1423")).0.weight(), vec![0, 2, 0, 0]);
        let d = Diagram::new(4, 4, [(1, 2), (2, 2), (2, 3)]).unwrap();
        assert_eq!(d.weight(), vec![1, 2, 0, 0]);
    }

    #[test]
    fn subsets_below_matches_filter() {
        let s = [2, 4, 5];
        let got = subsets_below(&s);
        let mut expected = Vec::new();
        for mask in 0u32..(1 << 5) {
            let c: Vec<usize> = (1..=5).filter(|&i| mask & (1 << (i - 1)) != 0).collect();
            if subset_leq(&c, &s) {
                expected.push(c);
            }
        }
        let mut got_sorted = got.clone();
        got_sorted.sort();
        expected.sort();
        assert_eq!(got_sorted, expected);
    }

    #[test]
    fn column_fill_examples() {
        let s = [3, 5];
        assert_eq!(fill_capacity(&s, 5), 3);
        assert_eq!(column_fill(&s, 5, 0).unwrap(), vec![3, 5]);
        assert_eq!(column_fill(&s, 5, 1).unwrap(), vec![3, 4, 5]);
        assert_eq!(column_fill(&s, 5, 2).unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(column_fill(&s, 5, 3).unwrap(), vec![1, 2, 3, 4, 5]);
        assert_eq!(column_fill(&s, 5, 4), Err(Error::FillOutOfRange { k: 4, max: 3 }));
        assert!(column_fill(&s, 4, 0).is_err());
        assert_eq!(column_fill(&[1], 1, 0).unwrap(), vec![1]);
    }

    #[test]
    fn json_shape() {
        let d = Diagram::new(4, 4, [(2, 3), (2, 2)]).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"n":4,"k":4,"cells":[[2,2],[2,3]]}"#);
        let back: Diagram = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
        assert!(serde_json::from_str::<Diagram>(r#"{"n":2,"k":2,"cells":[[3,1]]}"#).is_err());
    }

    /// For linked squares `(i1,j1)`, `(i2,j2)` of `D(w)` with `j1 < j2`:
    /// `i1 ≤ i2`, and if neither has a square directly above, the two columns
    /// agree (cells and ranks) above row `i1 - 1`.
    #[test]
    fn vexillary_linked_columns() {
        for n in 1..=6 {
            for w in Permutation::all_vexillary(n) {
                let (d, r) = rothe_diagram(&w);
                let key = |c: Cell| c.0 as i64 - r.get(c).unwrap() as i64;
                for &a in d.cells() {
                    for &b in d.cells() {
                        if a.1 >= b.1 || key(a) != key(b) {
                            continue;
                        }
                        let ((i1, j1), (i2, j2)) = (a, b);
                        assert!(i1 <= i2, "{w}: {a:?} {b:?}");
                        if !d.contains((i1 - 1, j1)) && !d.contains((i2 - 1, j2)) {
                            for i in 1..i1 {
                                assert_eq!(d.contains((i, j1)), d.contains((i, j2)), "{w}");
                                assert_eq!(r.get((i, j1)), r.get((i, j2)), "{w}");
                            }
                        }
                    }
                }
            }
        }
    }
}
