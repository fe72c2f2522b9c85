//! Quasi-cyclic codes from circulant exponent matrices.
//!
//! File format: a first line `r c p`, then `r` lines of `c` integers. Entry
//! `-1` is an all-zero block; any other entry `s` in `[0, p)` is the identity
//! circulant shifted by `s`.

use super::{ParseError, TannerGraph};

/// Exponents of the (155,64) Tanner code: `5^i * 2^j mod 31`.
pub const TANNER_155_EXPONENTS: [[i64; 5]; 3] = [
    [1, 2, 4, 8, 16],
    [5, 10, 20, 9, 18],
    [25, 19, 7, 14, 28],
];

/// Largest expansion accepted, in variables plus checks.
pub const MAX_QC_NODES: usize = 1 << 22;

/// An expanded quasi-cyclic code together with its block structure.
#[derive(Debug, Clone)]
pub struct QcCode {
    pub graph: TannerGraph,
    pub circulant: usize,
    pub block_rows: usize,
    pub block_cols: usize,
}

impl QcCode {
    /// Image of variable `v` under the cyclic shift by `k` within its block.
    pub fn shift_var(&self, v: usize, k: usize) -> usize {
        let p = self.circulant;
        (v / p) * p + (v % p + k) % p
    }
}

/// Expands `exponents` (rows of blocks, `None` for zero blocks) with
/// circulant size `p`. Entry `(i, j)` with shift `s` joins variable `j*p + t`
/// to check `i*p + (t + s) mod p`.
pub fn qc_expand(exponents: &[Vec<Option<usize>>], p: usize) -> Result<QcCode, String> {
    if p == 0 {
        return Err("circulant size must be at least 1".into());
    }
    let r = exponents.len();
    let c = exponents.first().map_or(0, Vec::len);
    if exponents.iter().any(|row| row.len() != c) {
        return Err("exponent rows have different lengths".into());
    }
    let nodes = (r + c).checked_mul(p).filter(|&x| x <= MAX_QC_NODES);
    if nodes.is_none() {
        return Err(format!("expansion of {r}x{c} blocks of size {p} exceeds {MAX_QC_NODES} nodes"));
    }
    let mut var_adj = vec![Vec::new(); c * p];
    for (i, row) in exponents.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let Some(s) = *e else { continue };
            if s >= p {
                return Err(format!("shift {s} at block ({i},{j}) out of range [0,{p})"));
            }
            for t in 0..p {
                var_adj[j * p + t].push(i * p + (t + s) % p);
            }
        }
    }
    let graph = TannerGraph::from_var_adjacency(r * p, var_adj).map_err(|e| e.to_string())?;
    Ok(QcCode {
        graph,
        circulant: p,
        block_rows: r,
        block_cols: c,
    })
}

pub fn tanner_155_64() -> QcCode {
    let rows: Vec<Vec<Option<usize>>> = TANNER_155_EXPONENTS
        .iter()
        .map(|r| r.iter().map(|&s| Some(s as usize)).collect())
        .collect();
    qc_expand(&rows, 31).expect("Tanner exponents are valid")
}

pub fn load_qc(text: &str) -> Result<QcCode, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let parse = |line: usize, l: &str| -> Result<Vec<i64>, ParseError> {
        l.split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|_| ParseError::new(line, format!("expected integer, got {t:?}"))))
            .collect()
    };
    let (l, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, "unexpected end of input: missing header (r c p)"))?;
    let h = parse(l, header)?;
    let [r, c, p] = h[..] else {
        return Err(ParseError::new(l, "header must contain exactly three numbers: r c p"));
    };
    if r < 0 || c < 0 || p < 1 {
        return Err(ParseError::new(l, "need r >= 0, c >= 0 and p >= 1"));
    }
    let (r, c, p) = (r as usize, c as usize, p as usize);
    let mut rows = Vec::with_capacity(r.min(1 << 16));
    let mut last = l;
    for i in 0..r {
        let (l, text) = lines
            .next()
            .ok_or_else(|| ParseError::new(last + 1, format!("unexpected end of input: missing block row {}", i + 1)))?;
        last = l;
        let vals = parse(l, text)?;
        if vals.len() != c {
            return Err(ParseError::new(l, format!("expected {c} entries, got {}", vals.len())));
        }
        let row = vals
            .into_iter()
            .map(|s| match s {
                -1 => Ok(None),
                s if (0..p as i64).contains(&s) => Ok(Some(s as usize)),
                s => Err(ParseError::new(l, format!("shift {s} out of range [0,{p}) (use -1 for zero blocks)"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if let Some((l, _)) = lines.next() {
        return Err(ParseError::new(l, "trailing content after the last block row"));
    }
    qc_expand(&rows, p).map_err(|e| ParseError::new(last, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huge_expansions_are_refused() {
        assert!(load_qc("1 1 4611686018427387904\n0\n").is_err());
        assert!(qc_expand(&[vec![Some(0)]], MAX_QC_NODES).is_err());
    }

    #[test]
    fn identity_circulant() {
        let q = qc_expand(&[vec![Some(0)]], 3).unwrap();
        assert_eq!(q.graph.num_variables(), 3);
        assert_eq!(q.graph.num_checks(), 3);
        for v in 0..3 {
            assert_eq!(q.graph.checks_of(v), &[v]);
        }
    }

    #[test]
    fn counting_for_full_matrix() {
        let rows = vec![vec![Some(0), Some(1), Some(2), Some(3)]; 2];
        let q = qc_expand(&rows, 7).unwrap();
        assert_eq!(q.graph.num_variables(), 28);
        assert_eq!(q.graph.num_checks(), 14);
        assert_eq!(q.graph.regular_var_degree(), Some(2));
    }

    #[test]
    fn shift_out_of_range() {
        assert!(qc_expand(&[vec![Some(3)]], 3).is_err());
        let err = load_qc("1 1 3\n3\n").unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn load_with_null_blocks() {
        let q = load_qc("2 2 2\n0 -1\n1 0\n").unwrap();
        assert_eq!(q.graph.num_variables(), 4);
        assert_eq!(q.graph.var_degree(0), 2);
        assert_eq!(q.graph.var_degree(2), 1);
        assert!(load_qc("2 2 2\n0 -1\n").unwrap_err().message.contains("block row 2"));
    }

    #[test]
    fn shifts_are_automorphisms() {
        let q = tanner_155_64();
        let p = q.circulant;
        for (v, c) in q.graph.edges() {
            let v2 = q.shift_var(v, 1);
            let c2 = (c / p) * p + (c % p + 1) % p;
            assert!(q.graph.has_edge(v2, c2));
        }
    }
}
