//! Line-oriented graph serialization.
//!
//! ```text
//! graph <num_variables> <num_checks>
//! <one-based check ids of variable 1>
//! ...
//! <one-based check ids of variable n>
//! end
//! ```
//!
//! Lines starting with `#` are comments. A file may hold any number of blocks.

use std::fmt::Write as _;

use super::{ParseError, TannerGraph};

pub fn write_graph(g: &TannerGraph) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "graph {} {}", g.num_variables(), g.num_checks());
    for v in 0..g.num_variables() {
        let ids: Vec<String> = g.checks_of(v).iter().map(|c| (c + 1).to_string()).collect();
        let _ = writeln!(s, "{}", ids.join(" "));
    }
    s.push_str("end\n");
    s
}

/// Significant lines of `text` with their one-based line numbers.
pub(crate) fn significant_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Reads one graph block whose `graph n m` header is `header`.
pub(crate) fn read_graph_block<'a>(
    header: (usize, &'a str),
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
) -> Result<TannerGraph, ParseError> {
    let (hl, h) = header;
    let parts: Vec<&str> = h.split_whitespace().collect();
    let [kw, n, m] = parts[..] else {
        return Err(ParseError::new(hl, "expected `graph <num_variables> <num_checks>`"));
    };
    if kw != "graph" {
        return Err(ParseError::new(hl, format!("expected `graph`, got {kw:?}")));
    }
    let n: usize = n.parse().map_err(|_| ParseError::new(hl, "bad variable count"))?;
    let m: usize = m.parse().map_err(|_| ParseError::new(hl, "bad check count"))?;
    let mut var_adj = Vec::with_capacity(n.min(1 << 16));
    let mut last = hl;
    for v in 0..n {
        let (l, text) = lines
            .next()
            .ok_or_else(|| ParseError::new(last + 1, format!("unexpected end of input: missing variable {}", v + 1)))?;
        last = l;
        let ids = text
            .split_whitespace()
            .map(|t| match t.parse::<usize>() {
                Ok(c) if (1..=m).contains(&c) => Ok(c - 1),
                _ => Err(ParseError::new(l, format!("check id {t:?} out of range 1..={m}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        var_adj.push(ids);
    }
    match lines.next() {
        Some((_, "end")) => {}
        Some((l, other)) => return Err(ParseError::new(l, format!("expected `end`, got {other:?}"))),
        None => return Err(ParseError::new(last + 1, "unexpected end of input: missing `end`")),
    }
    TannerGraph::from_var_adjacency(m, var_adj).map_err(|e| ParseError::new(hl, e.to_string()))
}

pub fn parse_graph(text: &str) -> Result<TannerGraph, ParseError> {
    let mut gs = parse_graphs(text)?;
    match gs.len() {
        1 => Ok(gs.pop().expect("one graph")),
        k => Err(ParseError::new(1, format!("expected exactly one graph, found {k}"))),
    }
}

pub fn parse_graphs(text: &str) -> Result<Vec<TannerGraph>, ParseError> {
    let mut lines = significant_lines(text);
    let mut out = Vec::new();
    while let Some(header) = lines.next() {
        out.push(read_graph_block(header, &mut lines)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oversized_headers_fail_cleanly() {
        assert!(parse_graph("graph 0 18446744073709551615\nend\n").is_err());
        assert!(parse_graph("graph 1 999999999999\n1\nend\n").is_err());
        assert!(parse_graph("graph 18446744073709551615 1\n1\n").is_err());
    }

    #[test]
    fn round_trip_and_comments() {
        let g = TannerGraph::from_var_adjacency(4, vec![vec![0, 1], vec![1, 2, 3]]).unwrap();
        let text = format!("# two graphs\n{}\n{}", write_graph(&g), write_graph(&TannerGraph::empty()));
        let gs = parse_graphs(&text).unwrap();
        assert_eq!(gs, vec![g, TannerGraph::empty()]);
    }

    #[test]
    fn errors() {
        assert_eq!(parse_graphs("graph 1 1\n2\nend\n").unwrap_err().line, 2);
        assert!(parse_graphs("graph 1 1\n1\n").unwrap_err().message.contains("end"));
        assert!(parse_graphs("graph 1 2\n1\nend\n").unwrap_err().message.contains("no neighbours"));
        assert!(parse_graphs("grph 1 2\n").is_err());
    }
}
