//! PACE-style `.td` text: `s td <bags> <max_bag_size> <vertices>`, then
//! `b <id> <v...>` bag lines and `<i> <j>` tree edges, all 1-based. Lines
//! starting with `c` are comments. Bags without a `b` line are empty.

use std::fmt::Write as _;

use super::parse::ParseDiagnostic;
use crate::graph::TreeDecomposition;

fn fields(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn number(line: usize, (col, tok): (usize, &str)) -> Result<usize, ParseDiagnostic> {
    tok.parse::<usize>()
        .map_err(|_| ParseDiagnostic::new(line, col, format!("expected a number, found `{tok}`")))
}

pub fn read_td(text: &str, n_vertices: usize) -> Result<TreeDecomposition, ParseDiagnostic> {
    let mut header: Option<(usize, usize)> = None;
    let mut bags: Vec<Option<Vec<u32>>> = Vec::new();
    let mut edges = Vec::new();
    let mut last_line = 1;

    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        last_line = ln;
        let f = fields(raw);
        if f.is_empty() || f[0].1 == "c" {
            continue;
        }
        match header {
            None => {
                if f.len() != 5 || f[0].1 != "s" || f[1].1 != "td" {
                    return Err(ParseDiagnostic::new(ln, f[0].0, "expected header `s td <bags> <max_bag_size> <vertices>`"));
                }
                let nb = number(ln, f[2])?;
                let width = number(ln, f[3])?;
                let nv = number(ln, f[4])?;
                if nv != n_vertices {
                    return Err(ParseDiagnostic::new(
                        ln,
                        f[4].0,
                        format!("header declares {nv} vertices but the program has {n_vertices} atoms"),
                    ));
                }
                if nb == 0 {
                    return Err(ParseDiagnostic::new(ln, f[2].0, "decomposition must have at least one bag"));
                }
                header = Some((nb, width));
                bags = vec![None; nb];
            }
            Some((nb, width)) => {
                if f[0].1 == "b" {
                    if f.len() < 2 {
                        return Err(ParseDiagnostic::new(ln, f[0].0, "bag line without id"));
                    }
                    let id = number(ln, f[1])?;
                    if id == 0 || id > nb {
                        return Err(ParseDiagnostic::new(ln, f[1].0, format!("bag id {id} out of range 1..={nb}")));
                    }
                    if bags[id - 1].is_some() {
                        return Err(ParseDiagnostic::new(ln, f[1].0, format!("bag {id} given twice")));
                    }
                    let mut bag = Vec::with_capacity(f.len() - 2);
                    for &tok in &f[2..] {
                        let v = number(ln, tok)?;
                        if v == 0 || v > n_vertices {
                            return Err(ParseDiagnostic::new(ln, tok.0, format!("vertex {v} out of range 1..={n_vertices}")));
                        }
                        bag.push((v - 1) as u32);
                    }
                    bag.sort_unstable();
                    bag.dedup();
                    if bag.len() > width {
                        return Err(ParseDiagnostic::new(
                            ln,
                            f[0].0,
                            format!("bag {id} has {} vertices but header allows {width}", bag.len()),
                        ));
                    }
                    bags[id - 1] = Some(bag);
                } else {
                    if f.len() != 2 {
                        return Err(ParseDiagnostic::new(ln, f[0].0, "expected tree edge `<i> <j>`"));
                    }
                    let a = number(ln, f[0])?;
                    let b = number(ln, f[1])?;
                    for (x, tok) in [(a, f[0]), (b, f[1])] {
                        if x == 0 || x > nb {
                            return Err(ParseDiagnostic::new(ln, tok.0, format!("bag id {x} out of range 1..={nb}")));
                        }
                    }
                    edges.push((a - 1, b - 1));
                }
            }
        }
    }

    let Some((nb, _)) = header else {
        return Err(ParseDiagnostic::new(last_line, 1, "missing `s td` header"));
    };
    let td = TreeDecomposition::new(n_vertices, bags.into_iter().map(Option::unwrap_or_default).collect(), edges);
    let adj = td.neighbors();
    let mut seen = vec![false; nb];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    if count != nb || td.edges.len() != nb - 1 {
        return Err(ParseDiagnostic::new(last_line, 1, "tree edges do not form a tree over the bags (disconnected tree)"));
    }
    Ok(td)
}

/// Writes bags in id order and edges as `(min, max)` pairs sorted. The
/// declared maximum bag size is at least one.
pub fn write_td(td: &TreeDecomposition) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "s td {} {} {}", td.bags.len(), td.max_bag_size().max(1), td.n_vertices);
    for (i, bag) in td.bags.iter().enumerate() {
        let _ = write!(out, "b {}", i + 1);
        for v in bag {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
    for (a, b) in td.normalized().edges {
        let _ = writeln!(out, "{} {}", a + 1, b + 1);
    }
    out
}
