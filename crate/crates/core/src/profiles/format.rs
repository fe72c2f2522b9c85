//! Profile and inducing-set files.
//!
//! A profile file is line oriented; `#` starts a comment line.
//!
//! ```text
//! profile
//! algorithm <id>
//! n_max <n>
//! d_v <d>
//! d_c_max <d>
//! girth_min <g>
//! min_distance <d>     optional, 0 when absent
//! complete <true|false>
//! closed <true|false>
//! inducing <canonical code, hex>
//! graph ...            inducing set, graph block
//! end
//! members <count>
//! member <canonical code, hex>
//! graph ...            member graph, graph block
//! end
//! j <one-based variables>         one line per failing inducing subset
//! witness <one-based variables>   subset used for the witness
//! w <variable> <iterations ...>   one line per variable, in order
//! ```
//!
//! Member blocks appear in emission order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{InducingSet, TrappingSet, TrappingSetProfile};
use crate::tanner::{
    canonical_form, parse_graphs, read_graph_block, significant_lines, write_graph, CanonicalCode, CodeEnsembleParams,
    ParseError,
};

fn one_based(vs: &[usize]) -> String {
    vs.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(" ")
}

pub fn write_profile(p: &TrappingSetProfile) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "profile");
    let _ = writeln!(s, "algorithm {}", p.algorithm_id);
    let _ = writeln!(s, "n_max {}", p.n_max);
    let _ = writeln!(s, "d_v {}", p.params.d_v);
    let _ = writeln!(s, "d_c_max {}", p.params.d_c_max);
    let _ = writeln!(s, "girth_min {}", p.params.girth_min);
    if p.params.min_distance > 0 {
        let _ = writeln!(s, "min_distance {}", p.params.min_distance);
    }
    let _ = writeln!(s, "complete {}", p.complete);
    let _ = writeln!(s, "closed {}", p.closed);
    let _ = writeln!(s, "inducing {}", p.inducing.code);
    s.push_str(&write_graph(&p.inducing.graph));
    let _ = writeln!(s, "members {}", p.members.len());
    for code in &p.emission {
        let m = &p.members[code];
        let _ = writeln!(s, "member {code}");
        s.push_str(&write_graph(&m.graph));
        for j in &m.inducing_embeddings {
            let _ = writeln!(s, "j {}", one_based(j));
        }
        let _ = writeln!(s, "witness {}", one_based(&m.witness_set));
        for (v, h) in m.witness.iter().enumerate() {
            let iters: Vec<String> = h.iter().map(|l| l.to_string()).collect();
            if iters.is_empty() {
                let _ = writeln!(s, "w {}", v + 1);
            } else {
                let _ = writeln!(s, "w {} {}", v + 1, iters.join(" "));
            }
        }
    }
    s
}

struct Lines<'a, I: Iterator<Item = (usize, &'a str)>> {
    inner: std::iter::Peekable<I>,
    last: usize,
}

impl<'a, I: Iterator<Item = (usize, &'a str)>> Lines<'a, I> {
    fn next(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        match self.inner.next() {
            Some((l, t)) => {
                self.last = l;
                Ok((l, t))
            }
            None => Err(ParseError::new(self.last + 1, format!("unexpected end of input: missing {what}"))),
        }
    }

    /// Value of a `key value` line.
    fn field(&mut self, key: &str) -> Result<(usize, &'a str), ParseError> {
        let (l, t) = self.next(key)?;
        match t.split_once(' ') {
            Some((k, v)) if k == key => Ok((l, v.trim())),
            _ if t == key => Ok((l, "")),
            _ => Err(ParseError::new(l, format!("expected `{key} ...`, got {t:?}"))),
        }
    }

    fn number(&mut self, key: &str) -> Result<usize, ParseError> {
        let (l, v) = self.field(key)?;
        v.parse().map_err(|_| ParseError::new(l, format!("bad {key} value {v:?}")))
    }

    fn flag(&mut self, key: &str) -> Result<bool, ParseError> {
        let (l, v) = self.field(key)?;
        v.parse().map_err(|_| ParseError::new(l, format!("{key} must be true or false, got {v:?}")))
    }

    fn code(&mut self, key: &str) -> Result<(usize, CanonicalCode), ParseError> {
        let (l, v) = self.field(key)?;
        CanonicalCode::from_hex(v)
            .map(|c| (l, c))
            .ok_or_else(|| ParseError::new(l, format!("bad canonical code {v:?}")))
    }

    fn graph(&mut self) -> Result<crate::tanner::TannerGraph, ParseError> {
        let header = self.next("graph block")?;
        let mut tracked = std::iter::from_fn(|| {
            let item = self.inner.next();
            if let Some((l, _)) = item {
                self.last = l;
            }
            item
        });
        read_graph_block(header, &mut tracked)
    }

    fn peek_key(&mut self) -> Option<&'a str> {
        self.inner.peek().map(|(_, t)| t.split(' ').next().unwrap_or(""))
    }
}

fn vertex_list(l: usize, text: &str, n: usize) -> Result<Vec<usize>, ParseError> {
    let mut out = Vec::new();
    for tok in text.split_whitespace() {
        match tok.parse::<usize>() {
            Ok(v) if (1..=n).contains(&v) => out.push(v - 1),
            _ => return Err(ParseError::new(l, format!("variable {tok:?} out of range 1..={n}"))),
        }
    }
    Ok(out)
}

pub fn parse_profile(text: &str) -> Result<TrappingSetProfile, ParseError> {
    let mut r = Lines {
        inner: significant_lines(text).peekable(),
        last: 0,
    };
    let (l, head) = r.next("profile header")?;
    if head != "profile" {
        return Err(ParseError::new(l, format!("expected `profile`, got {head:?}")));
    }
    let (_, algorithm_id) = r.field("algorithm")?;
    let algorithm_id = algorithm_id.to_string();
    let n_max = r.number("n_max")?;
    let d_v = r.number("d_v")?;
    let d_c_max = r.number("d_c_max")?;
    let girth_min = r.number("girth_min")?;
    let gl = r.last;
    let mut params = CodeEnsembleParams::new(d_v, d_c_max, girth_min).map_err(|e| ParseError::new(gl, e))?;
    if r.inner.peek().is_some_and(|(_, t)| t.starts_with("min_distance")) {
        params.min_distance = r.number("min_distance")?;
    }
    let complete = r.flag("complete")?;
    let closed = r.flag("closed")?;
    let (il, icode) = r.code("inducing")?;
    let inducing = InducingSet::new(r.graph()?);
    if inducing.code != icode {
        return Err(ParseError::new(il, "inducing code does not match the inducing graph"));
    }
    let count = r.number("members")?;
    let mut members = BTreeMap::new();
    let mut emission = Vec::new();
    for _ in 0..count {
        let (ml, code) = r.code("member")?;
        let graph = r.graph()?;
        if canonical_form(&graph) != code {
            return Err(ParseError::new(ml, "member code does not match its graph"));
        }
        let n = graph.num_variables();
        let mut inducing_embeddings = Vec::new();
        while r.peek_key() == Some("j") {
            let (l, v) = r.field("j")?;
            let mut j = vertex_list(l, v, n)?;
            j.sort_unstable();
            inducing_embeddings.push(j);
        }
        let (wl, ws) = r.field("witness")?;
        let mut witness_set = vertex_list(wl, ws, n)?;
        witness_set.sort_unstable();
        let mut witness = Vec::with_capacity(n);
        for v in 0..n {
            let (l, rest) = r.field("w")?;
            let mut toks = rest.split_whitespace();
            if toks.next() != Some((v + 1).to_string().as_str()) {
                return Err(ParseError::new(l, format!("expected witness line for variable {}", v + 1)));
            }
            let iters = toks
                .map(|t| t.parse::<usize>().map_err(|_| ParseError::new(l, format!("bad iteration {t:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            witness.push(iters);
        }
        if members.contains_key(&code) {
            return Err(ParseError::new(ml, "duplicate member"));
        }
        emission.push(code.clone());
        members.insert(
            code,
            TrappingSet {
                graph,
                inducing_embeddings,
                witness_set,
                witness,
            },
        );
    }
    if let Some((l, t)) = r.inner.next() {
        return Err(ParseError::new(l, format!("trailing content {t:?}")));
    }
    Ok(TrappingSetProfile {
        algorithm_id,
        inducing,
        n_max,
        params,
        members,
        complete,
        closed,
        emission,
    })
}

pub fn write_inducing_sets(sets: &[InducingSet]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# {} inducing sets", sets.len());
    for i in sets {
        let _ = writeln!(s, "# code {}", i.code);
        s.push_str(&write_graph(&i.graph));
    }
    s
}

pub fn parse_inducing_sets(text: &str) -> Result<Vec<InducingSet>, ParseError> {
    Ok(parse_graphs(text)?.into_iter().map(InducingSet::new).collect())
}

/// Several profiles back to back.
pub fn write_profiles(ps: &[TrappingSetProfile]) -> String {
    ps.iter().map(write_profile).collect()
}

/// Reads back [`write_profiles`] output. Each profile starts at a line that
/// is exactly `profile`; error line numbers refer to the whole text.
pub fn parse_profiles(text: &str) -> Result<Vec<TrappingSetProfile>, ParseError> {
    let lines: Vec<&str> = text.lines().collect();
    let starts: Vec<usize> = (0..lines.len()).filter(|&i| lines[i].trim() == "profile").collect();
    if let Some((l, t)) = significant_lines(text).next() {
        if starts.first().is_none_or(|&s| s + 1 != l) {
            return Err(ParseError::new(l, format!("expected `profile`, got {t:?}")));
        }
    }
    let mut out = Vec::with_capacity(starts.len());
    for (i, &s) in starts.iter().enumerate() {
        let e = starts.get(i + 1).copied().unwrap_or(lines.len());
        // Blank lines keep the numbering aligned with the full text.
        let chunk = "\n".repeat(s) + &lines[s..e].join("\n");
        out.push(parse_profile(&chunk)?);
    }
    Ok(out)
}
