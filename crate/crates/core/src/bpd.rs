//! Bumpless pipe dreams.
//!
//! Pipes enter along the bottom edge and leave along the right edge, moving
//! only north and east. Tiles are stored row-major with `(1,1)` in the top
//! left corner.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::diagram::Cell;
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::poly::MultiPoly;

/// Enumeration bound used when the caller does not pick one.
pub const DEFAULT_BOUND: usize = 7;
/// Hard ceiling for any enumeration bound.
pub const MAX_BOUND: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tile {
    Blank,
    Horizontal,
    Vertical,
    Crossing,
    /// Joins the south and east edges.
    DownElbow,
    /// Joins the west and north edges.
    UpElbow,
}

impl Tile {
    pub const ALL: [Tile; 6] = [
        Tile::Blank,
        Tile::Horizontal,
        Tile::Vertical,
        Tile::Crossing,
        Tile::DownElbow,
        Tile::UpElbow,
    ];

    /// Pipe presence on the `(north, east, south, west)` edges.
    pub fn edges(self) -> (bool, bool, bool, bool) {
        match self {
            Tile::Blank => (false, false, false, false),
            Tile::Horizontal => (false, true, false, true),
            Tile::Vertical => (true, false, true, false),
            Tile::Crossing => (true, true, true, true),
            Tile::DownElbow => (false, true, true, false),
            Tile::UpElbow => (true, false, false, true),
        }
    }

    pub fn code(self) -> char {
        match self {
            Tile::Blank => 'B',
            Tile::Horizontal => 'H',
            Tile::Vertical => 'V',
            Tile::Crossing => 'X',
            Tile::DownElbow => 'D',
            Tile::UpElbow => 'U',
        }
    }

    pub fn from_code(c: &str) -> Option<Tile> {
        Some(match c {
            "B" => Tile::Blank,
            "H" => Tile::Horizontal,
            "V" => Tile::Vertical,
            "X" => Tile::Crossing,
            "D" => Tile::DownElbow,
            "U" => Tile::UpElbow,
            _ => return None,
        })
    }

    pub fn glyph(self) -> char {
        match self {
            Tile::Blank => ' ',
            Tile::Horizontal => '─',
            Tile::Vertical => '│',
            Tile::Crossing => '┼',
            Tile::DownElbow => '┌',
            Tile::UpElbow => '┘',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bpd {
    n: usize,
    grid: Vec<Vec<Tile>>,
}

impl Bpd {
    /// Checks edge consistency and the boundary conditions.
    pub fn new(grid: Vec<Vec<Tile>>) -> Result<Self> {
        let n = grid.len();
        if grid.iter().any(|row| row.len() != n) {
            return Err(Error::Invalid("tile grid is not square".into()));
        }
        for r in 0..n {
            for c in 0..n {
                let (north, east, south, west) = grid[r][c].edges();
                let above = if r == 0 { false } else { grid[r - 1][c].edges().2 };
                let left = if c == 0 { false } else { grid[r][c - 1].edges().1 };
                if north != above || west != left {
                    return Err(Error::Invalid(format!(
                        "tile at ({},{}) does not match its neighbours",
                        r + 1,
                        c + 1
                    )));
                }
                if r == n - 1 && !south {
                    return Err(Error::Invalid(format!("no pipe on bottom edge of column {}", c + 1)));
                }
                if c == n - 1 && !east {
                    return Err(Error::Invalid(format!("no pipe on right edge of row {}", r + 1)));
                }
            }
        }
        Ok(Self { n, grid })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> &[Vec<Tile>] {
        &self.grid
    }

    pub fn tile(&self, (r, c): Cell) -> Tile {
        self.grid[r - 1][c - 1]
    }

    fn cells_of(&self, t: Tile) -> BTreeSet<Cell> {
        let mut out = BTreeSet::new();
        for r in 1..=self.n {
            for c in 1..=self.n {
                if self.tile((r, c)) == t {
                    out.insert((r, c));
                }
            }
        }
        out
    }

    /// `D(P)`.
    pub fn blanks(&self) -> BTreeSet<Cell> {
        self.cells_of(Tile::Blank)
    }

    /// `U(P)`.
    pub fn up_elbows(&self) -> BTreeSet<Cell> {
        self.cells_of(Tile::UpElbow)
    }

    /// Runs every pipe through the grid. At each tile the labels arriving from
    /// the south and west are sent north and east. With `bump` set, a crossing
    /// between two pipes that already crossed is resolved as a bump.
    /// Returns the labels leaving each row on the right, the number of times
    /// each pair crossed, and the labels occupying each tile.
    fn trace(&self, bump: bool) -> Trace {
        let n = self.n;
        // label on the north edge of each column in the row being processed
        let mut up: Vec<usize> = (1..=n).collect();
        let mut right = vec![0; n];
        let mut crossings: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut occupants = vec![vec![Vec::new(); n]; n];
        for r in (0..n).rev() {
            let mut from_west = 0usize;
            for c in 0..n {
                let from_south = up[c];
                let (north, east) = match self.grid[r][c] {
                    Tile::Blank => (0, 0),
                    Tile::Horizontal => (0, from_west),
                    Tile::Vertical => (from_south, 0),
                    Tile::DownElbow => (0, from_south),
                    Tile::UpElbow => (from_west, 0),
                    Tile::Crossing => {
                        let key = (from_south.min(from_west), from_south.max(from_west));
                        let seen = crossings.entry(key).or_insert(0);
                        *seen += 1;
                        if bump && *seen > 1 {
                            (from_west, from_south)
                        } else {
                            (from_south, from_west)
                        }
                    }
                };
                let occ = &mut occupants[r][c];
                for l in [from_south, from_west] {
                    if l != 0 && (l == north || l == east) && !occ.contains(&l) {
                        occ.push(l);
                    }
                }
                up[c] = north;
                from_west = east;
            }
            right[r] = from_west;
        }
        Trace {
            right,
            crossings,
            occupants,
        }
    }

    /// The permutation read off the right edge, ignoring repeated crossings.
    pub fn decode_permutation(&self) -> Permutation {
        Permutation::new(self.trace(true).right).expect("pipe labels form a permutation")
    }

    /// True when no two pipes cross more than once.
    pub fn is_reduced(&self) -> bool {
        self.trace(false).crossings.values().all(|&k| k <= 1)
    }

    /// Number of distinct pipes meeting the rectangle `[1..i] × [1..j]`.
    pub fn blank_rank(&self, cell: Cell) -> Result<usize> {
        let (i, j) = cell;
        if i == 0 || j == 0 || i > self.n || j > self.n || self.tile(cell) != Tile::Blank {
            return Err(Error::NotBlank(i, j));
        }
        let t = self.trace(false);
        let mut pipes = BTreeSet::new();
        for r in 0..i {
            for c in 0..j {
                pipes.extend(t.occupants[r][c].iter().copied());
            }
        }
        Ok(pipes.len())
    }

    /// Box-drawing rendering, one line per row.
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        for row in &self.grid {
            s.extend(row.iter().map(|t| t.glyph()));
            s.push('\n');
        }
        s
    }

    pub fn to_svg(&self) -> String {
        MarkedBpd {
            bpd: self.clone(),
            marks: BTreeSet::new(),
        }
        .to_svg()
    }
}

struct Trace {
    right: Vec<usize>,
    crossings: BTreeMap<(usize, usize), usize>,
    occupants: Vec<Vec<Vec<usize>>>,
}

/// The Rothe pipe dream of `w`: no up-elbows, one down-elbow per pipe at `(i, w(i))`.
pub fn rothe_bpd(w: &Permutation) -> Bpd {
    let n = w.n();
    let winv = w.inverse();
    let mut grid = vec![vec![Tile::Blank; n]; n];
    for i in 1..=n {
        for j in 1..=n {
            let horizontal = j > w.at(i);
            let vertical = winv.at(j) < i;
            grid[i - 1][j - 1] = if j == w.at(i) {
                Tile::DownElbow
            } else {
                match (horizontal, vertical) {
                    (true, true) => Tile::Crossing,
                    (true, false) => Tile::Horizontal,
                    (false, true) => Tile::Vertical,
                    (false, false) => Tile::Blank,
                }
            };
        }
    }
    Bpd { n, grid }
}

fn check_bound(n: usize, bound: usize) -> Result<()> {
    let bound = bound.min(MAX_BOUND);
    if n > bound {
        return Err(Error::BoundExceeded { requested: n, bound });
    }
    Ok(())
}

/// Calls `f` on every pipe dream of size `n`, by row-major backtracking on
/// edge constraints. `bound` is clamped to [`MAX_BOUND`].
pub fn for_each_bpd(n: usize, bound: usize, mut f: impl FnMut(&Bpd)) -> Result<()> {
    check_bound(n, bound)?;
    if n == 0 {
        f(&Bpd { n, grid: Vec::new() });
        return Ok(());
    }
    let mut bpd = Bpd {
        n,
        grid: vec![vec![Tile::Blank; n]; n],
    };
    // south edge of each column for the previous row
    let mut down = vec![false; n];
    fill(&mut bpd, 0, 0, false, &mut down, &mut f);
    Ok(())
}

fn fill(bpd: &mut Bpd, r: usize, c: usize, west: bool, down: &mut Vec<bool>, f: &mut impl FnMut(&Bpd)) {
    let n = bpd.n;
    if r == n {
        f(bpd);
        return;
    }
    let north = down[c];
    for t in Tile::ALL {
        let (tn, te, ts, tw) = t.edges();
        if tn != north || tw != west {
            continue;
        }
        if c == n - 1 && !te {
            continue;
        }
        if r == n - 1 && !ts {
            continue;
        }
        bpd.grid[r][c] = t;
        let saved = down[c];
        down[c] = ts;
        if c + 1 == n {
            fill(bpd, r + 1, 0, false, down, f);
        } else {
            fill(bpd, r, c + 1, te, down, f);
        }
        down[c] = saved;
    }
}

/// All pipe dreams of size `n`, subject to [`DEFAULT_BOUND`].
pub fn enumerate_all(n: usize) -> Result<Vec<Bpd>> {
    enumerate_all_bounded(n, DEFAULT_BOUND)
}

pub fn enumerate_all_bounded(n: usize, bound: usize) -> Result<Vec<Bpd>> {
    let mut out = Vec::new();
    for_each_bpd(n, bound, |p| out.push(p.clone()))?;
    Ok(out)
}

/// `BPD(w)`.
pub fn bpds_of(w: &Permutation) -> Result<Vec<Bpd>> {
    let mut out = Vec::new();
    for_each_bpd(w.n(), DEFAULT_BOUND, |p| {
        if p.decode_permutation() == *w {
            out.push(p.clone());
        }
    })?;
    Ok(out)
}

/// A pipe dream together with a set of marked up-elbow tiles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedBpd {
    bpd: Bpd,
    marks: BTreeSet<Cell>,
}

impl MarkedBpd {
    pub fn new(bpd: Bpd, marks: BTreeSet<Cell>) -> Result<Self> {
        let ups = bpd.up_elbows();
        if let Some(&(r, c)) = marks.iter().find(|m| !ups.contains(m)) {
            return Err(Error::Invalid(format!("mark at ({r},{c}) is not an up-elbow")));
        }
        Ok(Self { bpd, marks })
    }

    pub fn bpd(&self) -> &Bpd {
        &self.bpd
    }

    pub fn marks(&self) -> &BTreeSet<Cell> {
        &self.marks
    }

    /// Row counts of blank tiles and marked up-elbows.
    pub fn weight(&self) -> Vec<u32> {
        let mut wt = vec![0; self.bpd.n];
        for (r, _) in self.bpd.blanks().into_iter().chain(self.marks.iter().copied()) {
            wt[r - 1] += 1;
        }
        wt
    }

    pub fn to_svg(&self) -> String {
        let n = self.bpd.n;
        let s = 40;
        let h = s / 2;
        let size = n * s;
        let mut out = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n"
        );
        for r in 0..n {
            for c in 0..n {
                let (x, y) = (c * s, r * s);
                out += &format!(
                    "<rect x=\"{x}\" y=\"{y}\" width=\"{s}\" height=\"{s}\" fill=\"white\" stroke=\"#bbb\"/>\n"
                );
                let (cx, cy) = (x + h, y + h);
                let mut path = String::new();
                match self.bpd.grid[r][c] {
                    Tile::Blank => {}
                    Tile::Horizontal => path = format!("M{x},{cy} H{}", x + s),
                    Tile::Vertical => path = format!("M{cx},{y} V{}", y + s),
                    Tile::Crossing => path = format!("M{x},{cy} H{} M{cx},{y} V{}", x + s, y + s),
                    Tile::DownElbow => path = format!("M{cx},{} Q{cx},{cy} {},{cy}", y + s, x + s),
                    Tile::UpElbow => path = format!("M{x},{cy} Q{cx},{cy} {cx},{y}"),
                }
                if !path.is_empty() {
                    out += &format!("<path d=\"{path}\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n");
                }
                if self.marks.contains(&(r + 1, c + 1)) {
                    out += &format!("<circle cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"black\"/>\n", cx - 6, cy - 6);
                }
            }
        }
        out += "</svg>\n";
        out
    }
}

impl fmt::Display for Bpd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_text())
    }
}

/// `MBPD(w)`: every pipe dream of `w` with every subset of its up-elbows marked.
pub fn enumerate_mbpds(w: &Permutation) -> Result<Vec<MarkedBpd>> {
    let mut out = Vec::new();
    for p in bpds_of(w)? {
        let ups: Vec<Cell> = p.up_elbows().into_iter().collect();
        for mask in 0u64..(1u64 << ups.len()) {
            let marks = ups
                .iter()
                .enumerate()
                .filter(|(b, _)| mask & (1 << b) != 0)
                .map(|(_, &c)| c)
                .collect();
            out.push(MarkedBpd {
                bpd: p.clone(),
                marks,
            });
        }
    }
    Ok(out)
}

/// The signed sum of `x^wt(P,S)` over marked pipe dreams of `w`.
pub fn weigandt_sum(w: &Permutation) -> Result<MultiPoly> {
    let n = w.n();
    let ell = w.length();
    let mut terms: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    for m in enumerate_mbpds(w)? {
        let size = m.bpd.blanks().len() + m.marks.len();
        let sign = if (size + ell) % 2 == 0 { 1 } else { -1 };
        *terms.entry(m.weight()).or_default() += sign;
    }
    MultiPoly::from_terms(n, terms)
}

#[derive(Serialize, Deserialize)]
struct BpdJson {
    n: usize,
    tiles: Vec<Vec<String>>,
    marks: Vec<[usize; 2]>,
}

impl Serialize for MarkedBpd {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        BpdJson {
            n: self.bpd.n,
            tiles: self
                .bpd
                .grid
                .iter()
                .map(|row| row.iter().map(|t| t.code().to_string()).collect())
                .collect(),
            marks: self.marks.iter().map(|&(r, c)| [r, c]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MarkedBpd {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = BpdJson::deserialize(deserializer)?;
        let grid = raw
            .tiles
            .iter()
            .map(|row| {
                row.iter()
                    .map(|code| Tile::from_code(code).ok_or_else(|| D::Error::custom(format!("unknown tile {code:?}"))))
                    .collect::<std::result::Result<Vec<_>, _>>()
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if grid.len() != raw.n {
            return Err(D::Error::custom("tile grid does not match n"));
        }
        let bpd = Bpd::new(grid).map_err(D::Error::custom)?;
        MarkedBpd::new(bpd, raw.marks.into_iter().map(|[r, c]| (r, c)).collect()).map_err(D::Error::custom)
    }
}

impl Serialize for Bpd {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MarkedBpd {
            bpd: self.clone(),
            marks: BTreeSet::new(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Bpd {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(MarkedBpd::deserialize(deserializer)?.bpd)
    }
}
