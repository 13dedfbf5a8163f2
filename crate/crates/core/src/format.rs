//! The `.nsqs` nested-design text format and the structured verification
//! report.
//!
//! ```text
//! # v=8
//! # name 7 inf
//! 0 7 | 1 3
//! 2 6 | 4 5
//! ```
//!
//! Header comments are optional; without `# v=` the order is one more than the
//! largest label. Other `#` lines and blank lines are ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::design::{check_t_design, classify, DesignError, NestedBlock, NestedDesign, Point, TheoremFlags, UniformityClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        Self { line, message: message.into() }
    }
}

pub fn write_nsqs(d: &NestedDesign) -> String {
    let mut out = String::with_capacity(16 * d.len() + 64);
    let _ = writeln!(out, "# v={}", d.v());
    for (label, name) in d.point_names() {
        let _ = writeln!(out, "# name {label} {name}");
    }
    for nb in d.blocks() {
        let _ = writeln!(out, "{nb}");
    }
    out
}

fn parse_label(tok: &str, line: usize) -> Result<Point, ParseError> {
    tok.parse().map_err(|_| ParseError::new(line, format!("bad label {tok:?}")))
}

pub fn parse_nsqs(text: &str) -> Result<NestedDesign, ParseError> {
    let mut v: Option<u32> = None;
    let mut names = BTreeMap::new();
    let mut blocks = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if s.is_empty() {
            continue;
        }
        if let Some(comment) = s.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(rest) = comment.strip_prefix("v=") {
                v = Some(rest.trim().parse().map_err(|_| ParseError::new(line, format!("bad order {rest:?}")))?);
            } else if let Some(rest) = comment.strip_prefix("name ") {
                let mut it = rest.trim().splitn(2, char::is_whitespace);
                let label = parse_label(it.next().unwrap_or(""), line)?;
                let name = it.next().map(str::trim).filter(|n| !n.is_empty());
                let name = name.ok_or_else(|| ParseError::new(line, "name without display string"))?;
                names.insert(label, name.to_string());
            }
            continue;
        }
        let (left, right) = s
            .split_once('|')
            .ok_or_else(|| ParseError::new(line, "expected `a b | c d`"))?;
        let pair = |part: &str| -> Result<[Point; 2], ParseError> {
            let toks: Vec<&str> = part.split_whitespace().collect();
            match toks.as_slice() {
                [a, b] => Ok([parse_label(a, line)?, parse_label(b, line)?]),
                _ => Err(ParseError::new(line, format!("expected two labels, found {}", toks.len()))),
            }
        };
        let nb = NestedBlock::new(pair(left)?, pair(right)?)
            .map_err(|e| ParseError::new(line, e.to_string()))?;
        blocks.push((line, nb));
    }
    let v = v.unwrap_or_else(|| blocks.iter().map(|(_, b)| b.max_label() + 1).max().unwrap_or(0));
    if let Some((line, nb)) = blocks.iter().find(|(_, b)| b.max_label() >= v) {
        let e = DesignError::LabelOutOfRange { label: nb.max_label(), v };
        return Err(ParseError::new(*line, e.to_string()));
    }
    let blocks = blocks.into_iter().map(|(_, b)| b).collect();
    let d = NestedDesign::new(v, blocks).map_err(|e| ParseError::new(0, e.to_string()))?;
    Ok(d.with_point_names(names))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TDesignSummary {
    pub t: u32,
    pub lambda: u32,
    pub pass: bool,
    /// First violating subsets as `(subset, count)`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<(Vec<Point>, u32)>,
}

/// Full verification of a nested design: strength-3 and strength-2 checks
/// on the underlying blocks plus the pair-multiplicity classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub v: u32,
    pub block_count: usize,
    /// The t = 3 check (λ = 1 for an SQS).
    pub t_design: TDesignSummary,
    /// The t = 2 check.
    pub pair_design: TDesignSummary,
    pub histogram: BTreeMap<u32, u64>,
    pub pairs_missing: u64,
    pub class: UniformityClass,
    pub mu: Option<u32>,
    pub theorem_flags: TheoremFlags,
}

impl VerificationReport {
    pub fn is_sqs(&self) -> bool {
        self.t_design.pass && self.t_design.lambda == 1
    }
}

pub fn verify(d: &NestedDesign) -> Result<VerificationReport, DesignError> {
    let blocks = d.underlying_blocks();
    let summary = |t| -> Result<TDesignSummary, DesignError> {
        let r = check_t_design(&blocks, d.v(), t, None)?;
        Ok(TDesignSummary {
            t,
            lambda: r.lambda,
            pass: r.pass,
            violations: r.violations.into_iter().map(|v| (v.subset, v.count)).collect(),
        })
    };
    let t_design = summary(3)?;
    let pair_design = summary(2)?;
    drop(blocks);
    let c = classify(d);
    Ok(VerificationReport {
        v: d.v(),
        block_count: d.len(),
        t_design,
        pair_design,
        mu: c.mu(),
        histogram: c.histogram,
        pairs_missing: c.pairs_missing,
        class: c.class,
        theorem_flags: c.theorem_flags,
    })
}
