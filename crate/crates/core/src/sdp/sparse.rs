//! SDPA-style sparse text format. Consecutive 1x1 blocks are written as one
//! diagonal block of negative size. Values are exact decimals when possible;
//! otherwise `num/den` is used and the file starts with a marker line.

use super::{Block, Constraint, Entry, SdpProblem};
use crate::error::{Error, Result};
use crate::exactmath::{format_rational, parse_rational, terminating_decimal, Rational};
use std::fmt::Write as _;

pub const RATIONAL_MARKER: &str = "*RATIONAL";
const LABELS: &str = "*LABELS";

fn value(r: &Rational) -> (String, bool) {
    match terminating_decimal(r) {
        Some(s) => (s, false),
        None => (format_rational(r), true),
    }
}

/// `(sdpa block, offset)` for every logical block, plus the SDPA sizes.
fn layout(blocks: &[Block]) -> (Vec<(usize, usize)>, Vec<i64>) {
    let mut map = Vec::with_capacity(blocks.len());
    let mut sizes: Vec<i64> = Vec::new();
    let mut run = false;
    for b in blocks {
        if b.size == 1 {
            if !run {
                sizes.push(0);
                run = true;
            }
            let idx = sizes.len();
            let last = sizes.last_mut().expect("run started");
            map.push((idx, (-*last) as usize));
            *last -= 1;
        } else {
            run = false;
            sizes.push(b.size as i64);
            map.push((sizes.len(), 0));
        }
    }
    (map, sizes)
}

pub fn write_sparse(problem: &SdpProblem) -> String {
    let (map, sizes) = layout(&problem.blocks);
    let mut body = String::new();
    let mut rational = false;
    let rhs: Vec<String> = problem
        .constraints
        .iter()
        .map(|c| {
            let (s, r) = value(&c.rhs);
            rational |= r;
            s
        })
        .collect();
    for (k, c) in problem.constraints.iter().enumerate() {
        for e in &c.entries {
            let (blk, off) = map[e.block];
            let (s, r) = value(&e.value);
            rational |= r;
            writeln!(body, "{} {} {} {} {}", k + 1, blk, off + e.row + 1, off + e.col + 1, s).expect("string write");
        }
    }
    let mut out = String::new();
    if rational {
        out.push_str(RATIONAL_MARKER);
        out.push('\n');
    }
    let labels: Vec<&str> = problem.blocks.iter().map(|b| b.label.as_str()).collect();
    writeln!(out, "{LABELS} {}", labels.join(" ")).expect("string write");
    writeln!(out, "{}", problem.constraints.len()).expect("string write");
    writeln!(out, "{}", sizes.len()).expect("string write");
    writeln!(out, "{}", sizes.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")).expect("string write");
    writeln!(out, "{}", rhs.join(" ")).expect("string write");
    out.push_str(&body);
    out
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn num<T: std::str::FromStr>(s: Option<&str>, what: &str) -> Result<T> {
    s.ok_or_else(|| bad(format!("missing {what}")))?.parse().map_err(|_| bad(format!("malformed {what}")))
}

pub fn parse_sparse(text: &str) -> Result<SdpProblem> {
    let mut labels: Option<Vec<String>> = None;
    let mut lines = Vec::new();
    for line in text.lines() {
        let t = line.trim();
        if let Some(rest) = t.strip_prefix(LABELS) {
            labels = Some(rest.split_whitespace().map(str::to_string).collect());
        } else if !(t.is_empty() || t.starts_with('*') || t.starts_with('"')) {
            lines.push(t);
        }
    }
    let mut it = lines.into_iter();
    let count: usize = num(it.next(), "constraint count")?;
    let nblocks: usize = num(it.next(), "block count")?;
    let sizes: Vec<i64> = it
        .next()
        .ok_or_else(|| bad("missing block sizes"))?
        .split_whitespace()
        .map(|s| s.parse().map_err(|_| bad("malformed block size")))
        .collect::<Result<_>>()?;
    if sizes.len() != nblocks || sizes.contains(&0) {
        return Err(bad("block sizes disagree with block count"));
    }
    let rhs: Vec<Rational> = it
        .next()
        .ok_or_else(|| bad("missing right-hand side"))?
        .split_whitespace()
        .map(parse_rational)
        .collect::<Result<_>>()?;
    if rhs.len() != count {
        return Err(bad("right-hand side length disagrees with constraint count"));
    }

    // expand diagonal groups back into 1x1 blocks
    let mut blocks = Vec::new();
    let mut first = Vec::with_capacity(sizes.len());
    for &s in &sizes {
        first.push(blocks.len());
        if s < 0 {
            blocks.extend((0..-s).map(|_| Block { label: String::new(), size: 1 }));
        } else {
            blocks.push(Block { label: String::new(), size: s as usize });
        }
    }
    match labels {
        Some(l) if l.len() == blocks.len() => {
            for (b, name) in blocks.iter_mut().zip(l) {
                b.label = name;
            }
        }
        Some(_) => return Err(bad("label count disagrees with blocks")),
        None => {
            for (i, b) in blocks.iter_mut().enumerate() {
                b.label = format!("B{}", i + 1);
            }
        }
    }

    let mut constraints: Vec<Constraint> = rhs.into_iter().map(|r| Constraint { entries: vec![], rhs: r }).collect();
    for line in it {
        let mut f = line.split_whitespace();
        let k: usize = num(f.next(), "matrix number")?;
        let blk: usize = num(f.next(), "block number")?;
        let i: usize = num(f.next(), "row")?;
        let j: usize = num(f.next(), "column")?;
        let v = parse_rational(f.next().ok_or_else(|| bad("missing value"))?)?;
        if f.next().is_some() {
            return Err(bad(format!("trailing fields in `{line}`")));
        }
        if k == 0 {
            if v != Rational::default() {
                return Err(bad("nonzero objective is not supported"));
            }
            continue;
        }
        if k > count || blk == 0 || blk > sizes.len() || i == 0 || j < i {
            return Err(bad(format!("entry out of range: `{line}`")));
        }
        let size = sizes[blk - 1];
        let (block, row, col) = if size < 0 {
            if i != j || i as i64 > -size {
                return Err(bad(format!("off-diagonal entry in diagonal block: `{line}`")));
            }
            (first[blk - 1] + i - 1, 0, 0)
        } else {
            if j as i64 > size {
                return Err(bad(format!("entry outside block: `{line}`")));
            }
            (first[blk - 1], i - 1, j - 1)
        };
        constraints[k - 1].entries.push(Entry { block, row, col, value: v });
    }
    for c in &mut constraints {
        c.entries.sort();
    }
    Ok(SdpProblem { blocks, constraints })
}
