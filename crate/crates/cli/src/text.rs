//! Plain-text renderings for terminal output.

use std::collections::BTreeMap;

use groth_core::{BubblingDiagram, MultiPoly};

/// Monomial in `x1^a*x2` form, or empty for the constant monomial.
pub fn monomial(e: &[u32], names: &dyn Fn(usize) -> String) -> String {
    e.iter()
        .enumerate()
        .filter(|(_, &a)| a > 0)
        .map(|(i, &a)| if a == 1 { names(i) } else { format!("{}^{a}", names(i)) })
        .collect::<Vec<_>>()
        .join("*")
}

/// One term per line in graded order: right-aligned coefficient, then the
/// monomial.
pub fn poly(p: &MultiPoly, homogenizing: bool) -> String {
    if p.is_zero() {
        return "0\n".into();
    }
    let n = p.nvars();
    let names = move |i: usize| {
        if homogenizing && i + 1 == n {
            "z".to_string()
        } else {
            format!("x{}", i + 1)
        }
    };
    let terms = p.graded_terms();
    let width = terms.iter().map(|(_, c)| c.to_string().len()).max().unwrap_or(1);
    let mut out = String::new();
    for (e, c) in terms {
        let m = monomial(e, &names);
        if m.is_empty() {
            out.push_str(&format!("{:>width$}\n", c.to_string()));
        } else {
            out.push_str(&format!("{:>width$}  {m}\n", c.to_string()));
        }
    }
    out
}

/// Grid of a bubbling diagram: `.` for empty, the rank for a live square and
/// the rank followed by `*` for a dead one.
pub fn bubbling(d: &BubblingDiagram) -> String {
    let mut cells = vec![vec![".".to_string(); d.k()]; d.n()];
    for ((i, j), sq) in d.squares() {
        cells[i - 1][j - 1] = if sq.dead { format!("{}*", sq.rank) } else { sq.rank.to_string() };
    }
    grid(&cells)
}

fn grid(cells: &[Vec<String>]) -> String {
    let width = cells.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
    let mut out = String::new();
    for row in cells {
        let line: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
        out.push_str(line.join(" ").trim_end());
        out.push('\n');
    }
    out
}

/// `weight  multiplicity` lines, sorted by weight.
pub fn weights(counts: &BTreeMap<Vec<u32>, usize>) -> String {
    let mut out = String::new();
    for (w, c) in counts {
        let ws: Vec<String> = w.iter().map(|x| x.to_string()).collect();
        out.push_str(&format!("({})  {c}\n", ws.join(",")));
    }
    out
}
