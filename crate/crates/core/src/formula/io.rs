//! Line-oriented DIMACS-style formats.
//!
//! ```text
//! p radjsat  <nX> <nY> <nZ> <gamma> <nclauses>
//! p kradjsat <k> <gamma> <n1> … <n_{2k-1}> <nclauses>
//! p qsat     <nA> <nB> <nC> <nclauses>
//! p kqsat    <k> <n1> … <n_{2k-1}> <nclauses>
//! ```
//!
//! Blocks are numbered contiguously in header order. One clause per line,
//! terminated by `0`; lines starting with `c` are comments.

use std::fmt::Write;

use super::{Clause, KQSatInstance, KStageRAdjSatInstance, Literal, QSatInstance, RAdjSatInstance};
use crate::error::ParseError;
use crate::Result;
#[cfg(test)]
use crate::Error;

struct Header {
    line: usize,
    nums: Vec<u64>,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('c'))
}

fn header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    tag: &str,
) -> Result<Header, ParseError> {
    let (line, text) = lines.next().ok_or(ParseError::MissingHeader { line: 1 })?;
    let mut toks = text.split_whitespace();
    if toks.next() != Some("p") {
        return Err(ParseError::MissingHeader { line });
    }
    if toks.next() != Some(tag) {
        return Err(ParseError::MalformedHeader { line });
    }
    let nums = toks
        .map(|t| t.parse::<u64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| ParseError::MalformedHeader { line })?;
    Ok(Header { line, nums })
}

fn clauses<'a>(
    lines: impl Iterator<Item = (usize, &'a str)>,
    num_vars: u32,
    expected: usize,
    header_line: usize,
) -> Result<Vec<Clause>, ParseError> {
    let mut out = Vec::with_capacity(expected);
    let mut last = header_line;
    for (line, text) in lines {
        last = line;
        let toks: Vec<&str> = text.split_whitespace().collect();
        if toks.last() != Some(&"0") {
            return Err(ParseError::MissingTerminator { line });
        }
        let mut lits = Vec::with_capacity(toks.len() - 1);
        for t in &toks[..toks.len() - 1] {
            let v: i64 = t.parse().map_err(|_| ParseError::InvalidToken {
                line,
                token: t.to_string(),
            })?;
            if v == 0 {
                return Err(ParseError::InvalidToken {
                    line,
                    token: t.to_string(),
                });
            }
            if v.unsigned_abs() > num_vars as u64 {
                return Err(ParseError::VariableOutOfRange {
                    line,
                    var: v,
                    max: num_vars,
                });
            }
            lits.push(Literal {
                var: v.unsigned_abs() as u32,
                neg: v < 0,
            });
        }
        if lits.is_empty() {
            return Err(ParseError::EmptyClause { line });
        }
        out.push(Clause::new(lits));
    }
    if out.len() != expected {
        return Err(ParseError::ClauseCount {
            line: last,
            expected,
            found: out.len(),
        });
    }
    Ok(out)
}

fn to_u32(h: &Header, v: u64) -> Result<u32, ParseError> {
    u32::try_from(v).map_err(|_| ParseError::MalformedHeader { line: h.line })
}

fn sum_vars(h: &Header, sizes: &[u64]) -> Result<u32, ParseError> {
    let total: u64 = sizes.iter().sum();
    if total > i32::MAX as u64 {
        return Err(ParseError::MalformedHeader { line: h.line });
    }
    Ok(total as u32)
}

/// `k` plus `extra` leading numbers, then 2k−1 block sizes, then clause count.
fn staged_header(h: &Header, extra: usize) -> Result<(u32, Vec<u64>), ParseError> {
    let bad = ParseError::MalformedHeader { line: h.line };
    let k = *h.nums.first().ok_or(bad.clone())?;
    if k == 0 || k > 64 {
        return Err(bad);
    }
    let blocks = 2 * k as usize - 1;
    if h.nums.len() != 1 + extra + blocks + 1 {
        return Err(bad);
    }
    Ok((k as u32, h.nums[1 + extra..1 + extra + blocks].to_vec()))
}

fn write_clauses(out: &mut String, cs: &[Clause]) {
    for c in cs {
        for l in c.literals() {
            write!(out, "{} ", l.to_dimacs()).unwrap();
        }
        out.push_str("0\n");
    }
}

pub fn parse_radjsat(text: &str) -> Result<RAdjSatInstance> {
    let mut lines = content_lines(text);
    let h = header(&mut lines, "radjsat")?;
    if h.nums.len() != 5 {
        return Err(ParseError::MalformedHeader { line: h.line }.into());
    }
    let n = sum_vars(&h, &h.nums[..3])?;
    let cs = clauses(lines, n, h.nums[4] as usize, h.line)?;
    RAdjSatInstance::contiguous(
        to_u32(&h, h.nums[0])?,
        to_u32(&h, h.nums[1])?,
        to_u32(&h, h.nums[2])?,
        to_u32(&h, h.nums[3])?,
        cs,
    )
}

/// Writes the canonical form; non-contiguous partitions are relabelled.
pub fn write_radjsat(inst: &RAdjSatInstance) -> String {
    let i = inst.canonical();
    let mut s = format!(
        "p radjsat {} {} {} {} {}\n",
        i.x.len(),
        i.y.len(),
        i.z.len(),
        i.gamma,
        i.formula.clauses.len()
    );
    write_clauses(&mut s, &i.formula.clauses);
    s
}

pub fn parse_kradjsat(text: &str) -> Result<KStageRAdjSatInstance> {
    let mut lines = content_lines(text);
    let h = header(&mut lines, "kradjsat")?;
    let (k, sizes) = staged_header(&h, 1)?;
    let gamma = to_u32(&h, h.nums[1])?;
    let n = sum_vars(&h, &sizes)?;
    let cs = clauses(lines, n, *h.nums.last().unwrap() as usize, h.line)?;
    let sizes: Vec<u32> = sizes.iter().map(|&s| s as u32).collect();
    KStageRAdjSatInstance::contiguous(k, gamma, &sizes, cs)
}

pub fn write_kradjsat(inst: &KStageRAdjSatInstance) -> String {
    let i = inst.canonical();
    let mut s = format!("p kradjsat {} {}", i.k, i.gamma);
    for b in &i.blocks {
        write!(s, " {}", b.len()).unwrap();
    }
    writeln!(s, " {}", i.formula.clauses.len()).unwrap();
    write_clauses(&mut s, &i.formula.clauses);
    s
}

pub fn parse_qsat(text: &str) -> Result<QSatInstance> {
    let mut lines = content_lines(text);
    let h = header(&mut lines, "qsat")?;
    if h.nums.len() != 4 {
        return Err(ParseError::MalformedHeader { line: h.line }.into());
    }
    let n = sum_vars(&h, &h.nums[..3])?;
    let cs = clauses(lines, n, h.nums[3] as usize, h.line)?;
    QSatInstance::contiguous(
        to_u32(&h, h.nums[0])?,
        to_u32(&h, h.nums[1])?,
        to_u32(&h, h.nums[2])?,
        cs,
    )
}

pub fn write_qsat(inst: &QSatInstance) -> String {
    let i = inst.canonical();
    let mut s = format!(
        "p qsat {} {} {} {}\n",
        i.a.len(),
        i.b.len(),
        i.c.len(),
        i.formula.clauses.len()
    );
    write_clauses(&mut s, &i.formula.clauses);
    s
}

pub fn parse_kqsat(text: &str) -> Result<KQSatInstance> {
    let mut lines = content_lines(text);
    let h = header(&mut lines, "kqsat")?;
    let (k, sizes) = staged_header(&h, 0)?;
    let n = sum_vars(&h, &sizes)?;
    let cs = clauses(lines, n, *h.nums.last().unwrap() as usize, h.line)?;
    let sizes: Vec<u32> = sizes.iter().map(|&s| s as u32).collect();
    KQSatInstance::contiguous(k, &sizes, cs)
}

pub fn write_kqsat(inst: &KQSatInstance) -> String {
    let i = inst.canonical();
    let mut s = format!("p kqsat {}", i.k);
    for b in &i.blocks {
        write!(s, " {}", b.len()).unwrap();
    }
    writeln!(s, " {}", i.formula.clauses.len()).unwrap();
    write_clauses(&mut s, &i.formula.clauses);
    s
}
