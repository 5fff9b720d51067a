//! Bubbling diagrams: diagrams whose squares carry a rank and a live/dead
//! status, the two moves acting on them, and the sets they generate.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::diagram::{column_fill, rothe_diagram, subset_leq, Cell, Diagram};
use crate::error::{Error, MoveError, Result};
use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Square {
    pub rank: u32,
    pub dead: bool,
}

impl Square {
    pub fn live(rank: u32) -> Self {
        Self { rank, dead: false }
    }

    pub fn dead(rank: u32) -> Self {
        Self { rank, dead: true }
    }
}

/// The triple `(D, r, F)` on an `n × k` grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BubblingDiagram {
    n: usize,
    k: usize,
    // row-major, (i, j) at (i - 1) * k + (j - 1)
    grid: Vec<Option<Square>>,
}

/// `i - rank`; two squares are linked exactly when their keys agree.
pub fn linking_key(i: usize, rank: u32) -> i64 {
    i as i64 - rank as i64
}

impl BubblingDiagram {
    pub fn empty(n: usize, k: usize) -> Self {
        Self {
            n,
            k,
            grid: vec![None; n * k],
        }
    }

    /// Builds a diagram and checks both structural invariants.
    pub fn new(n: usize, k: usize, squares: impl IntoIterator<Item = (Cell, Square)>) -> Result<Self> {
        let mut d = Self::empty(n, k);
        for ((i, j), sq) in squares {
            if i == 0 || i > n || j == 0 || j > k {
                return Err(Error::Invalid(format!("square ({i},{j}) outside {n}x{k} grid")));
            }
            d.grid[(i - 1) * k + (j - 1)] = Some(sq);
        }
        d.validate()?;
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, (i, j): Cell) -> Option<Square> {
        if i == 0 || i > self.n || j == 0 || j > self.k {
            return None;
        }
        self.grid[(i - 1) * self.k + (j - 1)]
    }

    fn set(&mut self, (i, j): Cell, sq: Option<Square>) {
        self.grid[(i - 1) * self.k + (j - 1)] = sq;
    }

    pub fn is_live(&self, cell: Cell) -> bool {
        matches!(self.get(cell), Some(s) if !s.dead)
    }

    pub fn is_dead(&self, cell: Cell) -> bool {
        matches!(self.get(cell), Some(s) if s.dead)
    }

    /// All squares in row-major order.
    pub fn squares(&self) -> impl Iterator<Item = (Cell, Square)> + '_ {
        self.grid.iter().enumerate().filter_map(move |(idx, sq)| {
            sq.map(|s| ((idx / self.k + 1, idx % self.k + 1), s))
        })
    }

    pub fn len(&self) -> usize {
        self.grid.iter().filter(|s| s.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `D`.
    pub fn cells(&self) -> Diagram {
        Diagram::new(self.n, self.k, self.squares().map(|(c, _)| c)).expect("cells in range")
    }

    /// `F`.
    pub fn dead_cells(&self) -> Diagram {
        Diagram::new(self.n, self.k, self.squares().filter(|(_, s)| s.dead).map(|(c, _)| c))
            .expect("cells in range")
    }

    /// `D \ F`.
    pub fn live_cells(&self) -> Diagram {
        Diagram::new(self.n, self.k, self.squares().filter(|(_, s)| !s.dead).map(|(c, _)| c))
            .expect("cells in range")
    }

    /// Rows of the live squares of column `j`, top to bottom.
    pub fn live_rows(&self, j: usize) -> Vec<usize> {
        (1..=self.n).filter(|&i| self.is_live((i, j))).collect()
    }

    pub fn weight(&self) -> Vec<u32> {
        let mut wt = vec![0; self.n];
        for ((i, _), _) in self.squares() {
            wt[i - 1] += 1;
        }
        wt
    }

    /// Squares grouped by linking key.
    pub fn linking_classes(&self) -> BTreeMap<i64, Vec<Cell>> {
        let mut out: BTreeMap<i64, Vec<Cell>> = BTreeMap::new();
        for (c, s) in self.squares() {
            out.entry(linking_key(c.0, s.rank)).or_default().push(c);
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        for ((i, j), sq) in self.squares() {
            if !sq.dead {
                continue;
            }
            let Some(above) = (1..i).rev().find(|&a| self.is_live((a, j))) else {
                return Err(Error::Invalid(format!("dead square ({i},{j}) has no live square above it")));
            };
            let ra = self.get((above, j)).unwrap().rank as i64;
            if sq.rank as i64 - ra != (i - above) as i64 {
                return Err(Error::Invalid(format!(
                    "dead square ({i},{j}) has rank {} but the live square above it at row {above} has rank {ra}",
                    sq.rank
                )));
            }
            for j2 in j + 1..=self.k {
                if let Some(other) = self.get((i, j2)) {
                    if other.dead && other.rank == sq.rank {
                        return Err(Error::Invalid(format!(
                            "dead squares ({i},{j}) and ({i},{j2}) share rank {}",
                            sq.rank
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn move_check(&self, i: usize, j: usize) -> std::result::Result<Square, MoveError> {
        let sq = self.get((i, j)).ok_or(MoveError::NoSquare)?;
        if sq.dead {
            return Err(MoveError::SourceDead);
        }
        if i < 2 {
            return Err(MoveError::TopRow);
        }
        if self.get((i - 1, j)).is_some() {
            return Err(MoveError::TargetOccupied);
        }
        if sq.rank == 0 {
            return Err(MoveError::NegativeRank);
        }
        Ok(sq)
    }

    fn illegal(i: usize, j: usize, reason: MoveError) -> Error {
        Error::IllegalMove { row: i, col: j, reason }
    }

    /// Moves the live square at `(i, j)` up one row, lowering its rank by one.
    pub fn bubble(&self, i: usize, j: usize) -> Result<Self> {
        let sq = self.move_check(i, j).map_err(|e| Self::illegal(i, j, e))?;
        let mut out = self.clone();
        out.set((i, j), None);
        out.set((i - 1, j), Some(Square::live(sq.rank - 1)));
        Ok(out)
    }

    /// Like [`bubble`](Self::bubble) but leaves a dead copy at `(i, j)`.
    pub fn k_bubble(&self, i: usize, j: usize) -> Result<Self> {
        let sq = self.move_check(i, j).map_err(|e| Self::illegal(i, j, e))?;
        let clash = (1..=self.k).any(|c| matches!(self.get((i, c)), Some(s) if s.dead && s.rank == sq.rank));
        if clash {
            return Err(Self::illegal(i, j, MoveError::EqualRankDeadInRow));
        }
        let mut out = self.clone();
        out.set((i, j), Some(Square::dead(sq.rank)));
        out.set((i - 1, j), Some(Square::live(sq.rank - 1)));
        Ok(out)
    }

    /// The diagram restricted to column `j`, on the same grid.
    pub fn column(&self, j: usize) -> Self {
        let mut out = Self::empty(self.n, self.k);
        for i in 1..=self.n {
            out.set((i, j), self.get((i, j)));
        }
        out
    }

    pub fn to_svg(&self) -> String {
        let s = 30;
        let (w, h) = (self.k * s, self.n * s);
        let mut out = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
        );
        for i in 1..=self.n {
            for j in 1..=self.k {
                let (x, y) = ((j - 1) * s, (i - 1) * s);
                let fill = match self.get((i, j)) {
                    None => "white",
                    Some(sq) if sq.dead => "#b0b0b0",
                    Some(_) => "#7fd67f",
                };
                out += &format!(
                    "<rect x=\"{x}\" y=\"{y}\" width=\"{s}\" height=\"{s}\" fill=\"{fill}\" stroke=\"black\" stroke-width=\"0.5\"/>\n"
                );
                if let Some(sq) = self.get((i, j)) {
                    out += &format!(
                        "<text x=\"{}\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
                        x + s / 2,
                        y + s / 2 + 5,
                        sq.rank
                    );
                }
            }
        }
        out += "</svg>\n";
        out
    }
}

/// `𝒟(w)`: the Rothe diagram with its ranks and no dead squares.
pub fn rothe_bubbling(w: &Permutation) -> BubblingDiagram {
    let (d, r) = rothe_diagram(w);
    let mut out = BubblingDiagram::empty(w.n(), w.n());
    for &c in d.cells() {
        out.set(c, Some(Square::live(r.get(c).unwrap())));
    }
    out
}

/// Every diagram reachable from `d` by one move.
pub fn successors(d: &BubblingDiagram) -> Vec<BubblingDiagram> {
    let mut out = Vec::new();
    for ((i, j), sq) in d.squares() {
        if sq.dead {
            continue;
        }
        if let Ok(b) = d.bubble(i, j) {
            out.push(b);
        }
        if let Ok(b) = d.k_bubble(i, j) {
            out.push(b);
        }
    }
    out
}

/// `BD(seed)`: closure of `seed` under both moves.
pub fn enumerate_bd(seed: &BubblingDiagram) -> BTreeSet<BubblingDiagram> {
    let mut seen: HashSet<BubblingDiagram> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(seed.clone());
    queue.push_back(seed.clone());
    while let Some(d) = queue.pop_front() {
        for next in successors(&d) {
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen.into_iter().collect()
}

/// `BD(w)`.
pub fn bd_of(w: &Permutation) -> BTreeSet<BubblingDiagram> {
    enumerate_bd(&rothe_bubbling(w))
}

/// Conditions (1)-(5) of admissibility of `(dp, fp)` relative to `seed` that
/// fail; empty when the pair is admissible. Condition (3) reads "the live
/// square immediately above" as the nearest live square strictly above, and
/// "below row i" as "in row i or lower".
pub fn admissibility_failures(seed: &BubblingDiagram, dp: &Diagram, fp: &Diagram) -> Vec<u8> {
    let mut failed = Vec::new();
    let (n, k) = (seed.n, seed.k);
    if dp.n() != n || dp.k() != k || fp.n() != n || fp.k() != k {
        return vec![1, 2, 3, 4, 5];
    }
    let f = seed.dead_cells();
    let live_p: BTreeSet<Cell> = dp.cells().difference(fp.cells()).copied().collect();
    let live_rows_p = |j: usize| -> Vec<usize> { (1..=n).filter(|&i| live_p.contains(&(i, j))).collect() };
    // index (1-based, top down) of the nearest live square above (i, j)
    let live_above_index = |i: usize, j: usize| -> Option<usize> {
        let rows = live_rows_p(j);
        let count = rows.iter().filter(|&&r| r < i).count();
        (count > 0).then_some(count)
    };

    // (1)
    if !f.cells().is_subset(fp.cells()) {
        failed.push(1);
    }
    // (2)
    let ok2 = (1..=k).all(|j| subset_leq(&live_rows_p(j), &seed.live_rows(j)));
    if !ok2 {
        failed.push(2);
    }
    // (3)
    let ok3 = fp.cells().difference(f.cells()).all(|&(i, j)| match live_above_index(i, j) {
        None => false,
        // "below row i" is weak: a K-bubble at row i leaves its dead copy at i
        Some(m) => matches!(seed.live_rows(j).get(m - 1), Some(&row) if row >= i),
    });
    if !ok3 {
        failed.push(3);
    }
    // (4)
    let ok4 = f.cells().iter().all(|&(i, j)| {
        let seed_rows = seed.live_rows(j);
        let rows = live_rows_p(j);
        let above = |v: &[usize]| v.iter().filter(|&&r| r < i).count();
        let below = |v: &[usize]| v.iter().filter(|&&r| r > i).count();
        above(&seed_rows) == above(&rows) && below(&seed_rows) == below(&rows)
    });
    if !ok4 {
        failed.push(4);
    }
    // (5)
    let dead: Vec<Cell> = fp.cells().iter().copied().collect();
    let mut ok5 = true;
    'outer: for (a, &(i, j)) in dead.iter().enumerate() {
        for &(i2, j2) in &dead[a + 1..] {
            if i2 != i {
                continue;
            }
            let (Some(mj), Some(mk)) = (live_above_index(i, j), live_above_index(i, j2)) else {
                continue;
            };
            let (sj, sk) = (seed.live_rows(j), seed.live_rows(j2));
            let (Some(&rj), Some(&rk)) = (sj.get(mj - 1), sk.get(mk - 1)) else {
                continue;
            };
            let kj = linking_key(rj, seed.get((rj, j)).unwrap().rank);
            let kk = linking_key(rk, seed.get((rk, j2)).unwrap().rank);
            if kj == kk {
                ok5 = false;
                break 'outer;
            }
        }
    }
    if !ok5 {
        failed.push(5);
    }
    failed
}

pub fn is_admissible(seed: &BubblingDiagram, dp: &Diagram, fp: &Diagram) -> bool {
    admissibility_failures(seed, dp, fp).is_empty()
}

/// All admissible pairs `(D', F')` for `seed`. Each column is screened
/// against the seed's own column first, then the product is checked in full.
pub fn admissible_targets(seed: &BubblingDiagram) -> BTreeSet<(Diagram, Diagram)> {
    let (n, k) = (seed.n, seed.k);
    // per column: list of (cells, dead) row sets
    let mut per_column: Vec<Vec<(Vec<usize>, Vec<usize>)>> = Vec::with_capacity(k);
    for j in 1..=k {
        let seed_col = seed.column(j);
        let mut states = Vec::new();
        let total = 3usize.pow(n as u32);
        for code in 0..total {
            let (mut cells, mut dead) = (Vec::new(), Vec::new());
            let mut c = code;
            for i in 1..=n {
                match c % 3 {
                    1 => cells.push(i),
                    2 => {
                        cells.push(i);
                        dead.push(i);
                    }
                    _ => {}
                }
                c /= 3;
            }
            let dp = Diagram::new(n, k, cells.iter().map(|&i| (i, j))).unwrap();
            let fp = Diagram::new(n, k, dead.iter().map(|&i| (i, j))).unwrap();
            if is_admissible(&seed_col, &dp, &fp) {
                states.push((cells, dead));
            }
        }
        per_column.push(states);
    }
    let mut out = BTreeSet::new();
    let mut choice = vec![0usize; k];
    if per_column.iter().any(|s| s.is_empty()) {
        return out;
    }
    loop {
        let mut cells = Vec::new();
        let mut dead = Vec::new();
        for (j, &c) in choice.iter().enumerate() {
            let (cs, ds) = &per_column[j][c];
            cells.extend(cs.iter().map(|&i| (i, j + 1)));
            dead.extend(ds.iter().map(|&i| (i, j + 1)));
        }
        let dp = Diagram::new(n, k, cells).unwrap();
        let fp = Diagram::new(n, k, dead).unwrap();
        if is_admissible(seed, &dp, &fp) {
            out.insert((dp, fp));
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == k {
                return out;
            }
            choice[pos] += 1;
            if choice[pos] < per_column[pos].len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// Smallest `s` such that column `j` of `cur` and `(dp, fp)` agree in rows `s..=n`.
fn agreement_row(cur: &BubblingDiagram, dp: &Diagram, fp: &Diagram, j: usize) -> usize {
    let n = cur.n;
    let mut s = n + 1;
    while s > 1 {
        let i = s - 1;
        let same_cell = cur.get((i, j)).is_some() == dp.contains((i, j));
        let same_dead = cur.is_dead((i, j)) == fp.contains((i, j));
        if !(same_cell && same_dead) {
            break;
        }
        s -= 1;
    }
    s
}

/// The canonical sequence `(𝒟^n, …, 𝒟^0)` carrying `seed` to the target.
pub fn canonical_sequence(seed: &BubblingDiagram, dp: &Diagram, fp: &Diagram) -> Result<Vec<BubblingDiagram>> {
    let failures = admissibility_failures(seed, dp, fp);
    if !failures.is_empty() {
        return Err(Error::Precondition(format!(
            "target is not admissible (conditions {failures:?} fail)"
        )));
    }
    let n = seed.n;
    let mut seq = vec![seed.clone()];
    let mut cur = seed.clone();
    for m in (1..=n).rev() {
        if m < n {
            let columns: Vec<(usize, usize)> = (1..=seed.k)
                .filter(|&j| cur.get((m, j)).is_none() && cur.is_live((m + 1, j)))
                .map(|j| (j, agreement_row(&cur, dp, fp, j)))
                .collect();
            for (j, kj) in columns {
                if kj <= m + 1 {
                    continue;
                }
                if !dp.contains((kj - 1, j)) {
                    for i in m + 1..kj {
                        cur = cur.bubble(i, j)?;
                    }
                } else if fp.contains((kj - 1, j)) {
                    for i in m + 1..kj - 1 {
                        cur = cur.bubble(i, j)?;
                    }
                    cur = cur.k_bubble(kj - 1, j)?;
                } else {
                    return Err(Error::Invalid(format!(
                        "canonical sequence stalled at row {m}, column {j}"
                    )));
                }
            }
        }
        seq.push(cur.clone());
    }
    if cur.cells() != *dp || cur.dead_cells() != *fp {
        return Err(Error::Invalid("canonical sequence did not reach the target".into()));
    }
    Ok(seq)
}

/// One distinguished square: its cell in `D(w)` and its position among the
/// squares of its column, counted from the top starting at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Distinguished {
    pub row: usize,
    pub col: usize,
    pub position: usize,
}

/// The ordered set `A(w)`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DistinguishedSet {
    entries: Vec<Distinguished>,
}

impl DistinguishedSet {
    pub fn entries(&self) -> &[Distinguished] {
        &self.entries
    }

    pub fn cells(&self) -> Vec<Cell> {
        self.entries.iter().map(|e| (e.row, e.col)).collect()
    }

    pub fn for_column(&self, j: usize) -> Option<&Distinguished> {
        self.entries.iter().find(|e| e.col == j)
    }

    /// `A(𝒟)`: for each entry, the live square of `d` at the same position
    /// among the live squares of its column.
    pub fn in_diagram(&self, d: &BubblingDiagram) -> Vec<Option<Cell>> {
        self.entries
            .iter()
            .map(|e| d.live_rows(e.col).get(e.position - 1).map(|&i| (i, e.col)))
            .collect()
    }
}

fn require_vexillary(w: &Permutation) -> Result<()> {
    if w.is_vexillary() {
        Ok(())
    } else {
        Err(Error::NotVexillary(w.to_string()))
    }
}

/// `A(w)`: walk `D(w)` from the bottom row up (ties broken by fewer squares
/// below, then by column) and keep a square when neither its column nor its
/// linking class is already represented.
pub fn distinguished_squares(w: &Permutation) -> Result<DistinguishedSet> {
    require_vexillary(w)?;
    let (d, r) = rothe_diagram(w);
    let below = |(i, j): Cell| d.cells().iter().filter(|&&(i2, j2)| j2 == j && i2 > i).count();
    let mut order: Vec<Cell> = d.cells().iter().copied().collect();
    order.sort_by_key(|&c| (std::cmp::Reverse(c.0), below(c), c.1));
    let mut entries = Vec::new();
    let mut used_cols = BTreeSet::new();
    let mut used_keys = BTreeSet::new();
    for c in order {
        let key = linking_key(c.0, r.get(c).unwrap());
        if used_cols.contains(&c.1) || used_keys.contains(&key) {
            continue;
        }
        used_cols.insert(c.1);
        used_keys.insert(key);
        let position = d.column(c.1).iter().position(|&i| i == c.0).unwrap() + 1;
        entries.push(Distinguished {
            row: c.0,
            col: c.1,
            position,
        });
    }
    Ok(DistinguishedSet { entries })
}

/// `𝒟^⊤(w)`: bubble every square above a distinguished square as high as it
/// goes, then K-bubble the distinguished squares until none can move.
pub fn d_top(w: &Permutation) -> Result<BubblingDiagram> {
    let a = distinguished_squares(w)?;
    let mut d = rothe_bubbling(w);
    for e in a.entries() {
        for i in 1..e.row {
            if !d.is_live((i, e.col)) {
                continue;
            }
            let mut row = i;
            while let Ok(next) = d.bubble(row, e.col) {
                d = next;
                row -= 1;
            }
        }
    }
    loop {
        let mut moved = false;
        for cell in a.in_diagram(&d).into_iter().flatten() {
            if let Ok(next) = d.k_bubble(cell.0, cell.1) {
                d = next;
                moved = true;
            }
        }
        if !moved {
            return Ok(d);
        }
    }
}

/// `f^⊤`: number of dead squares of `𝒟^⊤(w)` in each column.
pub fn f_top(w: &Permutation) -> Result<Vec<usize>> {
    let top = d_top(w)?;
    let mut f = vec![0; top.k];
    for ((_, j), sq) in top.squares() {
        if sq.dead {
            f[j - 1] += 1;
        }
    }
    Ok(f)
}

/// `D^f(w)`: column `k` of `D(w)` filled `f_k` times below its distinguished square.
pub fn d_f(w: &Permutation, f: &[usize]) -> Result<Diagram> {
    let top = f_top(w)?;
    if f.len() != top.len() {
        return Err(Error::Invalid(format!("expected {} fill counts, got {}", top.len(), f.len())));
    }
    if let Some(j) = (0..f.len()).find(|&j| f[j] > top[j]) {
        return Err(Error::DeadCountOutOfRange(j + 1));
    }
    let a = distinguished_squares(w)?;
    let (d, _) = rothe_diagram(w);
    let mut columns = d.columns();
    for e in a.entries() {
        columns[e.col - 1] = column_fill(&columns[e.col - 1], e.row, f[e.col - 1])?;
    }
    Diagram::from_columns(w.n(), &columns)
}

/// Single-column states reachable by bubbling any live square and
/// K-bubbling the live square in the distinguished position.
fn sbd_column_states(seed: &BubblingDiagram, j: usize, position: Option<usize>) -> Vec<BubblingDiagram> {
    let start = seed.column(j);
    let mut seen: HashSet<BubblingDiagram> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(d) = queue.pop_front() {
        let mut next = Vec::new();
        for i in d.live_rows(j) {
            if let Ok(b) = d.bubble(i, j) {
                next.push(b);
            }
        }
        if let Some(p) = position {
            if let Some(&i) = d.live_rows(j).get(p - 1) {
                if let Ok(b) = d.k_bubble(i, j) {
                    next.push(b);
                }
            }
        }
        for b in next {
            if seen.insert(b.clone()) {
                queue.push_back(b);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort();
    out
}

/// Number of states each column of `SBD(w)` can take.
pub fn sbd_column_counts(w: &Permutation) -> Result<Vec<usize>> {
    let a = distinguished_squares(w)?;
    let seed = rothe_bubbling(w);
    Ok((1..=seed.k)
        .map(|j| sbd_column_states(&seed, j, a.for_column(j).map(|e| e.position)).len())
        .collect())
}

/// `SBD(w)`, as the product of independent per-column state sets.
pub fn enumerate_sbd(w: &Permutation) -> Result<BTreeSet<BubblingDiagram>> {
    let a = distinguished_squares(w)?;
    let seed = rothe_bubbling(w);
    let columns: Vec<Vec<BubblingDiagram>> = (1..=seed.k)
        .map(|j| sbd_column_states(&seed, j, a.for_column(j).map(|e| e.position)))
        .collect();
    let mut out = BTreeSet::new();
    let mut partial = vec![BubblingDiagram::empty(seed.n, seed.k)];
    for (j, states) in columns.iter().enumerate() {
        let mut next = Vec::with_capacity(partial.len() * states.len());
        for p in &partial {
            for s in states {
                let mut merged = p.clone();
                for i in 1..=seed.n {
                    merged.set((i, j + 1), s.get((i, j + 1)));
                }
                next.push(merged);
            }
        }
        partial = next;
    }
    out.extend(partial);
    Ok(out)
}

/// True when every dead square of `d` is linked to the distinguished live
/// square of its column.
pub fn is_sbd_member(a: &DistinguishedSet, d: &BubblingDiagram) -> bool {
    let distinguished = a.in_diagram(d);
    d.squares().filter(|(_, s)| s.dead).all(|((i, j), s)| {
        distinguished.iter().flatten().any(|&(di, dj)| {
            dj == j && linking_key(di, d.get((di, dj)).unwrap().rank) == linking_key(i, s.rank)
        })
    })
}

/// Searches `BD(w)` for a diagram of weight `wt(d) - e_i` whose dead squares
/// form a proper subset of those of `d`, with matching ranks.
pub fn remove_dead_check(w: &Permutation, d: &BubblingDiagram, i: usize) -> Result<BubblingDiagram> {
    let bd = bd_of(w);
    let support = crate::poly::grothendieck(w).support();
    remove_dead_check_with(&bd, &support, d, i)
}

/// [`remove_dead_check`] against a precomputed `BD(w)` and `supp(𝔊_w)`.
pub fn remove_dead_check_with(
    bd: &BTreeSet<BubblingDiagram>,
    support: &BTreeSet<Vec<u32>>,
    d: &BubblingDiagram,
    i: usize,
) -> Result<BubblingDiagram> {
    let mut target = d.weight();
    if i == 0 || i > target.len() || target[i - 1] == 0 {
        return Err(Error::Precondition(format!("row {i} of the diagram is empty")));
    }
    target[i - 1] -= 1;
    if !support.contains(&target) {
        return Err(Error::Precondition(format!("{target:?} is not in the support")));
    }
    let dead: BTreeSet<(Cell, u32)> = d.squares().filter(|(_, s)| s.dead).map(|(c, s)| (c, s.rank)).collect();
    bd.iter()
        .find(|c| {
            if c.weight() != target {
                return false;
            }
            let cd: BTreeSet<(Cell, u32)> = c.squares().filter(|(_, s)| s.dead).map(|(c, s)| (c, s.rank)).collect();
            cd.len() < dead.len() && cd.is_subset(&dead)
        })
        .cloned()
        .ok_or_else(|| Error::NoWitness(format!("no smaller diagram of weight {target:?}")))
}

#[derive(Serialize, Deserialize)]
struct SquareJson {
    r: usize,
    c: usize,
    rank: u32,
    dead: bool,
}

#[derive(Serialize, Deserialize)]
struct BubblingJson {
    n: usize,
    k: usize,
    squares: Vec<SquareJson>,
}

impl Serialize for BubblingDiagram {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        BubblingJson {
            n: self.n,
            k: self.k,
            squares: self
                .squares()
                .map(|((r, c), s)| SquareJson {
                    r,
                    c,
                    rank: s.rank,
                    dead: s.dead,
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BubblingDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = BubblingJson::deserialize(deserializer)?;
        BubblingDiagram::new(
            raw.n,
            raw.k,
            raw.squares.into_iter().map(|s| ((s.r, s.c), Square { rank: s.rank, dead: s.dead })),
        )
        .map_err(serde::de::Error::custom)
    }
}
