//! Plain-text instance and solution formats.
//!
//! All formats are ASCII with LF line endings, 0-based vertex ids, and `#`
//! comment lines that the parsers skip (a solution's `# max_cost` line is
//! read, everything else after `#` is ignored).
//!
//! ```text
//! sg <n> <m>          signed graph, then m lines `<u> <v> <+|-> [w]`
//! sgc <n>             complete unit graph, then the negative pairs `<u> <v>`
//! mc <n> <m> <T>      multicut, then m lines `<u> <v> <w>`, then T lines `<s> <t>`
//! ```
//!
//! A solution file lists one part per line followed by `# max_cost <value>`.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{validate_partition, MulticutInstance, Partition, Sign, SignedGraph};

#[derive(Clone, Debug, PartialEq)]
pub enum Instance {
    Signed(SignedGraph),
    Multicut(MulticutInstance),
}

impl Instance {
    pub fn n(&self) -> usize {
        match self {
            Instance::Signed(g) => g.n(),
            Instance::Multicut(mc) => mc.n(),
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Non-comment, non-blank lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}

fn field<T: FromStr>(line: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse().map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
}

fn arity(line: usize, toks: &[&str], allowed: &[usize], shape: &str) -> Result<()> {
    if allowed.contains(&toks.len()) {
        Ok(())
    } else {
        Err(parse_err(line, format!("expected `{shape}`, got {} fields", toks.len())))
    }
}

fn vertex(line: usize, tok: &str, n: usize) -> Result<usize> {
    let v: usize = field(line, tok, "vertex id")?;
    if v >= n {
        return Err(parse_err(line, format!("vertex {v} out of range for n = {n}")));
    }
    Ok(v)
}

fn weight(line: usize, tok: &str) -> Result<f64> {
    let w: f64 = field(line, tok, "weight")?;
    if !w.is_finite() || w < 0.0 {
        return Err(parse_err(line, format!("weight {w} must be finite and nonnegative")));
    }
    Ok(w)
}

fn edge_key(line: usize, u: usize, v: usize, seen: &mut HashSet<(usize, usize)>) -> Result<()> {
    if u == v {
        return Err(parse_err(line, format!("self-loop at vertex {u}")));
    }
    if !seen.insert((u.min(v), u.max(v))) {
        return Err(parse_err(line, format!("duplicate edge ({u},{v})")));
    }
    Ok(())
}

fn at_end<'a>(mut rest: impl Iterator<Item = (usize, Vec<&'a str>)>) -> Result<()> {
    match rest.next() {
        Some((line, _)) => Err(parse_err(line, "unexpected extra line")),
        None => Ok(()),
    }
}

fn header<'a, I>(lines: &mut I) -> Result<(usize, Vec<&'a str>)>
where
    I: Iterator<Item = (usize, Vec<&'a str>)>,
{
    lines.next().ok_or_else(|| parse_err(1, "empty input: missing header"))
}

/// Parse an `sg` or `sgc` file.
pub fn parse_signed(text: &str) -> Result<SignedGraph> {
    match parse_instance(text)? {
        Instance::Signed(g) => Ok(g),
        Instance::Multicut(_) => Err(parse_err(first_line(text), "expected a signed graph, found `mc`")),
    }
}

/// Parse an `mc` file.
pub fn parse_mc(text: &str) -> Result<MulticutInstance> {
    match parse_instance(text)? {
        Instance::Multicut(mc) => Ok(mc),
        Instance::Signed(_) => Err(parse_err(first_line(text), "expected a multicut instance")),
    }
}

fn first_line(text: &str) -> usize {
    content_lines(text).next().map_or(1, |(l, _)| l)
}

/// Parse any instance file, dispatching on the header keyword.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = content_lines(text);
    let (hl, head) = header(&mut lines)?;
    match head[0] {
        "sg" => {
            arity(hl, &head, &[3], "sg <n> <m>")?;
            let n: usize = field(hl, head[1], "vertex count")?;
            let m: usize = field(hl, head[2], "edge count")?;
            let mut seen = HashSet::new();
            let mut edges = Vec::with_capacity(m);
            for _ in 0..m {
                let (l, t) = lines.next().ok_or_else(|| parse_err(hl, format!("expected {m} edges, found {}", edges.len())))?;
                arity(l, &t, &[3, 4], "<u> <v> <+|-> [w]")?;
                let (u, v) = (vertex(l, t[0], n)?, vertex(l, t[1], n)?);
                edge_key(l, u, v, &mut seen)?;
                let sign = match t[2] {
                    "+" => Sign::Pos,
                    "-" => Sign::Neg,
                    other => return Err(parse_err(l, format!("bad sign `{other}`, expected + or -"))),
                };
                let w = if t.len() == 4 { weight(l, t[3])? } else { 1.0 };
                edges.push((u, v, w, sign));
            }
            at_end(lines)?;
            SignedGraph::new(n, edges).map(Instance::Signed)
        }
        "sgc" => {
            arity(hl, &head, &[2], "sgc <n>")?;
            let n: usize = field(hl, head[1], "vertex count")?;
            let mut seen = HashSet::new();
            let mut neg = Vec::new();
            for (l, t) in lines {
                arity(l, &t, &[2], "<u> <v>")?;
                let (u, v) = (vertex(l, t[0], n)?, vertex(l, t[1], n)?);
                edge_key(l, u, v, &mut seen)?;
                neg.push((u, v));
            }
            SignedGraph::complete(n, &neg).map(Instance::Signed)
        }
        "mc" => {
            arity(hl, &head, &[4], "mc <n> <m> <T>")?;
            let n: usize = field(hl, head[1], "vertex count")?;
            let m: usize = field(hl, head[2], "edge count")?;
            let pairs_n: usize = field(hl, head[3], "pair count")?;
            let mut seen = HashSet::new();
            let mut edges = Vec::with_capacity(m);
            for _ in 0..m {
                let (l, t) = lines.next().ok_or_else(|| parse_err(hl, format!("expected {m} edges, found {}", edges.len())))?;
                arity(l, &t, &[3], "<u> <v> <w>")?;
                let (u, v) = (vertex(l, t[0], n)?, vertex(l, t[1], n)?);
                edge_key(l, u, v, &mut seen)?;
                edges.push((u, v, weight(l, t[2])?));
            }
            let mut pairs = Vec::with_capacity(pairs_n);
            for _ in 0..pairs_n {
                let (l, t) =
                    lines.next().ok_or_else(|| parse_err(hl, format!("expected {pairs_n} pairs, found {}", pairs.len())))?;
                arity(l, &t, &[2], "<s> <t>")?;
                let (s, tt) = (vertex(l, t[0], n)?, vertex(l, t[1], n)?);
                if s == tt {
                    return Err(parse_err(l, format!("pair ({s},{tt}) has equal endpoints")));
                }
                pairs.push((s, tt));
            }
            at_end(lines)?;
            MulticutInstance::new(n, edges, pairs).map(Instance::Multicut)
        }
        other => Err(parse_err(hl, format!("unknown header `{other}`, expected sg, sgc or mc"))),
    }
}

fn fmt_weight(w: f64) -> String {
    format!("{w}")
}

/// `sg` form; unit weights are omitted.
pub fn write_signed(g: &SignedGraph) -> String {
    let mut s = format!("sg {} {}\n", g.n(), g.edges().len());
    for e in g.edges() {
        if e.weight == 1.0 {
            let _ = writeln!(s, "{} {} {}", e.u, e.v, e.sign);
        } else {
            let _ = writeln!(s, "{} {} {} {}", e.u, e.v, e.sign, fmt_weight(e.weight));
        }
    }
    s
}

/// `sgc` form, only for complete unit-weight graphs.
pub fn write_signed_complete(g: &SignedGraph) -> Result<String> {
    if !g.is_complete() {
        return Err(Error::NotComplete);
    }
    let mut s = format!("sgc {}\n", g.n());
    for e in g.negative_edges() {
        let _ = writeln!(s, "{} {}", e.u, e.v);
    }
    Ok(s)
}

pub fn write_mc(mc: &MulticutInstance) -> String {
    let mut s = format!("mc {} {} {}\n", mc.n(), mc.edges().len(), mc.pairs().len());
    for &(u, v, w) in mc.edges() {
        let _ = writeln!(s, "{u} {v} {}", fmt_weight(w));
    }
    for &(a, b) in mc.pairs() {
        let _ = writeln!(s, "{a} {b}");
    }
    s
}

pub fn write_instance(inst: &Instance) -> String {
    match inst {
        Instance::Signed(g) => write_signed(g),
        Instance::Multicut(mc) => write_mc(mc),
    }
}

/// A partition as read from a solution file, with its declared cost.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionFile {
    pub partition: Partition,
    pub max_cost: Option<f64>,
}

pub fn write_solution(p: &Partition, max_cost: f64) -> String {
    let mut s = String::new();
    for part in &p.parts {
        let ids: Vec<String> = part.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "{}", ids.join(" "));
    }
    let _ = writeln!(s, "# max_cost {}", fmt_weight(max_cost));
    s
}

/// Parse a solution file. Structural checks against an instance are left to
/// [`validate_partition`]; this only checks syntax.
pub fn parse_solution(text: &str) -> Result<SolutionFile> {
    let mut parts = Vec::new();
    let mut max_cost = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let l = i + 1;
        if let Some(rest) = line.strip_prefix('#') {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if toks.first() == Some(&"max_cost") {
                arity(l, &toks, &[2], "# max_cost <value>")?;
                if max_cost.replace(field::<f64>(l, toks[1], "max_cost")?).is_some() {
                    return Err(parse_err(l, "second max_cost line"));
                }
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let part = line
            .split_whitespace()
            .map(|t| field::<usize>(l, t, "vertex id"))
            .collect::<Result<Vec<_>>>()?;
        parts.push(part);
    }
    Ok(SolutionFile { partition: Partition { parts }, max_cost })
}

/// Check `p` is a partition of `0..n`, returning the diagnostics otherwise.
pub fn check_partition(n: usize, p: &Partition) -> Result<()> {
    validate_partition(n, &p.parts).map_err(Error::InvalidPartition)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_k2() {
        let g = parse_signed("sg 2 1\n0 1 +\n").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.edges()[0].sign, Sign::Pos);
        assert_eq!(g.edges()[0].weight, 1.0);
    }

    #[test]
    fn complete_mode_expands() {
        let g = parse_signed("# triangle\nsgc 3\n1 2\n").unwrap();
        assert_eq!(g, SignedGraph::complete(3, &[(1, 2)]).unwrap());
        assert_eq!(write_signed_complete(&g).unwrap(), "sgc 3\n1 2\n");
    }

    #[test]
    fn duplicate_edge_reports_its_line() {
        let err = parse_signed("sg 3 2\n0 1 +\n# comment\n1 0 -\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 4, msg: "duplicate edge (1,0)".into() });
        let err = parse_signed("sgc 3\n0 1\n0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn malformed_lines() {
        let cases = [
            ("", 1),
            ("sg 2\n", 1),
            ("sg 2 1\n0 1 *\n", 2),
            ("sg 2 1\n0 2 +\n", 2),
            ("sg 2 1\n0 1 + -3\n", 2),
            ("sg 2 2\n0 1 +\n", 1),
            ("sg 2 1\n0 1 +\n1 0 +\n", 3),
            ("sg 2 1\n1 1 +\n", 2),
            ("mc 3 1 1\n0 1 1\n2 2\n", 3),
            ("mc 3 1 1\n0 1 x\n0 2\n", 2),
            ("xx 3\n", 1),
        ];
        for (text, line) in cases {
            match parse_instance(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn round_trips() {
        let g = SignedGraph::new(4, [(0, 1, 2.5, Sign::Neg), (2, 3, 1.0, Sign::Pos), (1, 3, 0.1, Sign::Pos)]).unwrap();
        assert_eq!(parse_signed(&write_signed(&g)).unwrap(), g);
        let mc = MulticutInstance::new(4, [(0, 1, 1.0), (1, 2, 0.3), (2, 3, 7.0)], [(0, 3), (2, 1)]).unwrap();
        assert_eq!(parse_mc(&write_mc(&mc)).unwrap(), mc);
        let p = Partition { parts: vec![vec![0, 2], vec![1], vec![3]] };
        let sol = parse_solution(&write_solution(&p, 1.5)).unwrap();
        assert_eq!(sol, SolutionFile { partition: p, max_cost: Some(1.5) });
    }

    #[test]
    fn kind_mismatch() {
        assert!(parse_mc("sg 2 0\n").is_err());
        assert!(parse_signed("mc 2 0 0\n").is_err());
    }

    #[test]
    fn solution_syntax() {
        assert!(matches!(parse_solution("0 1\nx\n"), Err(Error::Parse { line: 2, .. })));
        let sol = parse_solution("0 1\n# note\n2\n").unwrap();
        assert_eq!(sol.max_cost, None);
        assert!(check_partition(3, &sol.partition).is_ok());
        assert!(check_partition(4, &sol.partition).is_err());
    }
}
