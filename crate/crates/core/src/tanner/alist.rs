//! alist sparse matrix format.
//!
//! ```text
//! n m
//! max_col_weight max_row_weight
//! col_weight_1 ... col_weight_n
//! row_weight_1 ... row_weight_m
//! <n lines: one-based check ids of each column, optionally zero padded>
//! <m lines: one-based variable ids of each row, optionally zero padded>
//! ```
//!
//! Columns are variables, rows are checks. Both adjacency lists are read and
//! must describe the same graph.

use std::fmt::Write as _;

use super::{ParseError, TannerGraph};

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    /// Next non-blank line as parsed integers, or an error naming `section`.
    fn numbers(&mut self, section: &str) -> Result<(usize, Vec<i64>), ParseError> {
        for (i, line) in self.inner.by_ref() {
            self.last = i + 1;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let nums = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<i64>()
                        .map_err(|_| ParseError::new(i + 1, format!("{section}: expected integer, got {t:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            return Ok((i + 1, nums));
        }
        Err(ParseError::new(self.last + 1, format!("unexpected end of input: missing {section}")))
    }
}

fn count(line: usize, x: i64, what: &str) -> Result<usize, ParseError> {
    usize::try_from(x).map_err(|_| ParseError::new(line, format!("{what} must be non-negative, got {x}")))
}

pub fn load_alist(text: &str) -> Result<TannerGraph, ParseError> {
    let mut lines = Lines::new(text);
    let (l, header) = lines.numbers("header (n m)")?;
    let [n, m] = header[..] else {
        return Err(ParseError::new(l, "header must contain exactly two numbers: n m"));
    };
    let (n, m) = (count(l, n, "n")?, count(l, m, "m")?);

    let (l, maxes) = lines.numbers("maximum weights")?;
    let [max_col, max_row] = maxes[..] else {
        return Err(ParseError::new(l, "expected two maximum weights"));
    };
    let (max_col, max_row) = (count(l, max_col, "max column weight")?, count(l, max_row, "max row weight")?);

    let (l, col_w) = lines.numbers("column weights")?;
    if col_w.len() != n {
        return Err(ParseError::new(l, format!("expected {n} column weights, got {}", col_w.len())));
    }
    let col_w = col_w
        .iter()
        .map(|&w| count(l, w, "column weight"))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(w) = col_w.iter().find(|&&w| w > max_col) {
        return Err(ParseError::new(l, format!("column weight {w} exceeds maximum {max_col}")));
    }
    let (l, row_w) = lines.numbers("row weights")?;
    if row_w.len() != m {
        return Err(ParseError::new(l, format!("expected {m} row weights, got {}", row_w.len())));
    }
    let row_w = row_w
        .iter()
        .map(|&w| count(l, w, "row weight"))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(w) = row_w.iter().find(|&&w| w > max_row) {
        return Err(ParseError::new(l, format!("row weight {w} exceeds maximum {max_row}")));
    }

    let mut var_adj = Vec::with_capacity(n.min(1 << 16));
    for (j, &w) in col_w.iter().enumerate() {
        let (l, ids) = lines.numbers(&format!("column list {}", j + 1))?;
        var_adj.push(neighbour_list(l, &ids, w, m, "check")?);
    }
    let mut rows = Vec::with_capacity(m.min(1 << 16));
    for (i, &w) in row_w.iter().enumerate() {
        let (l, ids) = lines.numbers(&format!("row list {}", i + 1))?;
        rows.push((l, neighbour_list(l, &ids, w, n, "variable")?));
    }

    let mut from_rows = vec![Vec::new(); n];
    for (c, (_, vs)) in rows.iter().enumerate() {
        for &v in vs {
            from_rows[v].push(c);
        }
    }
    for (v, cs) in var_adj.iter_mut().enumerate() {
        cs.sort_unstable();
        if *cs != from_rows[v] {
            // Report the first row that disagrees with column v.
            let bad = rows
                .iter()
                .enumerate()
                .find(|(c, (_, vs))| cs.binary_search(c).is_ok() != vs.contains(&v))
                .map_or(l_of_last(&rows), |(_, (l, _))| *l);
            return Err(ParseError::new(
                bad,
                format!("column {} and row lists disagree", v + 1),
            ));
        }
    }
    TannerGraph::from_var_adjacency(m, var_adj).map_err(|e| ParseError::new(lines.last, e.to_string()))
}

fn l_of_last(rows: &[(usize, Vec<usize>)]) -> usize {
    rows.last().map_or(0, |r| r.0)
}

fn neighbour_list(line: usize, ids: &[i64], weight: usize, bound: usize, what: &str) -> Result<Vec<usize>, ParseError> {
    let nonzero: Vec<i64> = ids.iter().copied().filter(|&x| x != 0).collect();
    if ids.iter().skip(nonzero.len()).any(|&x| x != 0) {
        return Err(ParseError::new(line, "zero padding must come last"));
    }
    if nonzero.len() != weight {
        return Err(ParseError::new(line, format!("expected {weight} entries, got {}", nonzero.len())));
    }
    let mut out = Vec::with_capacity(weight);
    for x in nonzero {
        if x < 1 || x as u64 > bound as u64 {
            return Err(ParseError::new(line, format!("{what} id {x} out of range 1..={bound}")));
        }
        out.push(x as usize - 1);
    }
    let mut sorted = out.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(ParseError::new(line, format!("repeated {what} id")));
    }
    Ok(out)
}

/// Writes `g` in alist format without zero padding.
pub fn write_alist(g: &TannerGraph) -> String {
    let n = g.num_variables();
    let m = g.num_checks();
    let max_col = (0..n).map(|v| g.var_degree(v)).max().unwrap_or(0);
    let mut s = String::new();
    let join = |xs: &mut dyn Iterator<Item = usize>| xs.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let _ = writeln!(s, "{n} {m}");
    let _ = writeln!(s, "{max_col} {}", g.max_check_degree());
    let _ = writeln!(s, "{}", join(&mut (0..n).map(|v| g.var_degree(v))));
    let _ = writeln!(s, "{}", join(&mut (0..m).map(|c| g.check_degree(c))));
    for v in 0..n {
        let _ = writeln!(s, "{}", join(&mut g.checks_of(v).iter().map(|c| c + 1)));
    }
    for c in 0..m {
        let _ = writeln!(s, "{}", join(&mut g.vars_of(c).iter().map(|v| v + 1)));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 2\n2 3\n";

    #[test]
    fn loads_small_matrix() {
        let g = load_alist(SMALL).unwrap();
        assert_eq!((g.num_variables(), g.num_checks(), g.num_edges()), (3, 2, 4));
        assert_eq!(g.checks_of(1), &[0, 1]);
        assert_eq!(load_alist(&write_alist(&g)).unwrap(), g);
    }

    #[test]
    fn zero_padding_accepted() {
        let padded = "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n";
        assert_eq!(load_alist(padded).unwrap(), load_alist(SMALL).unwrap());
    }

    #[test]
    fn truncated_names_missing_section() {
        let err = load_alist("3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 2\n").unwrap_err();
        assert!(err.message.contains("row list 2"), "{err}");
        let err = load_alist("3 2\n").unwrap_err();
        assert!(err.message.contains("maximum weights"), "{err}");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = load_alist("3 2 7\n").unwrap_err();
        assert_eq!(err.line, 1);
        let err = load_alist("3 2\n1 2\n1 2 1\n2 2\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.message.contains("exceeds"));
        let mismatch = "3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 3\n2 3\n";
        let err = load_alist(mismatch).unwrap_err();
        assert!(err.message.contains("disagree"), "{err}");
        assert_eq!(err.line, 8);
    }
}
