//! Blocks, nested blocks, nested designs, and the brute-force verifier.
//!
//! Points are dense labels `0..v`. Constructions that work over structured
//! point sets (∞, group pairs, field elements) map into labels and keep the
//! display strings in [`NestedDesign::point_names`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Point = u32;

/// Counter arrays larger than this many entries are refused.
const MAX_COUNTER_LEN: u64 = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error("point {0} appears twice in a block")]
    RepeatedPoint(Point),
    #[error("label {label} is out of range for v = {v}")]
    LabelOutOfRange { label: Point, v: u32 },
    #[error("t = {0} is not supported (t must be 1, 2 or 3)")]
    UnsupportedStrength(u32),
    #[error("C({v},{t}) subsets is too many to count exhaustively")]
    TooLarge { v: u32, t: u32 },
}

/// A 4-subset stored in increasing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Block([Point; 4]);

impl Block {
    pub fn new(mut points: [Point; 4]) -> Result<Self, DesignError> {
        points.sort_unstable();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(DesignError::RepeatedPoint(w[0]));
        }
        Ok(Self(points))
    }

    /// Sorts; the caller guarantees the points are distinct.
    #[inline]
    pub(crate) fn from_distinct(mut points: [Point; 4]) -> Self {
        points.sort_unstable();
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        Self(points)
    }

    pub fn points(&self) -> &[Point; 4] {
        &self.0
    }

    pub fn contains(&self, p: Point) -> bool {
        self.0.contains(&p)
    }

    pub fn max_label(&self) -> Point {
        self.0[3]
    }
}

/// A block split into two pairs, `{a, b | c, d}`.
///
/// Canonical form: each pair ascending, and the pair holding the smaller
/// minimum comes first. Equality is therefore equality of nested blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NestedBlock {
    first: [Point; 2],
    second: [Point; 2],
}

impl NestedBlock {
    pub fn new(a: [Point; 2], b: [Point; 2]) -> Result<Self, DesignError> {
        Block::new([a[0], a[1], b[0], b[1]])?;
        Ok(Self::from_distinct(a, b))
    }

    #[inline]
    pub(crate) fn from_distinct(a: [Point; 2], b: [Point; 2]) -> Self {
        let a = if a[0] < a[1] { a } else { [a[1], a[0]] };
        let b = if b[0] < b[1] { b } else { [b[1], b[0]] };
        if a[0] < b[0] {
            Self { first: a, second: b }
        } else {
            Self { first: b, second: a }
        }
    }

    pub fn first(&self) -> [Point; 2] {
        self.first
    }

    pub fn second(&self) -> [Point; 2] {
        self.second
    }

    pub fn pairs(&self) -> [[Point; 2]; 2] {
        [self.first, self.second]
    }

    pub fn flatten(&self) -> Block {
        Block::from_distinct([self.first[0], self.first[1], self.second[0], self.second[1]])
    }

    pub fn max_label(&self) -> Point {
        self.first[1].max(self.second[1])
    }

    /// Apply a point map. Fails if the image collapses two points.
    pub fn map<F: Fn(Point) -> Point>(&self, f: F) -> Result<Self, DesignError> {
        Self::new([f(self.first[0]), f(self.first[1])], [f(self.second[0]), f(self.second[1])])
    }
}

impl fmt::Display for NestedBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} | {} {}", self.first[0], self.first[1], self.second[0], self.second[1])
    }
}

/// A multiset of nested blocks over points `0..v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedDesign {
    v: u32,
    blocks: Vec<NestedBlock>,
    point_names: BTreeMap<Point, String>,
}

impl NestedDesign {
    pub fn new(v: u32, blocks: Vec<NestedBlock>) -> Result<Self, DesignError> {
        if let Some(label) = blocks.iter().map(NestedBlock::max_label).find(|&l| l >= v) {
            return Err(DesignError::LabelOutOfRange { label, v });
        }
        Ok(Self { v, blocks, point_names: BTreeMap::new() })
    }

    pub fn with_point_names(mut self, names: BTreeMap<Point, String>) -> Self {
        self.point_names = names;
        self
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn blocks(&self) -> &[NestedBlock] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn point_names(&self) -> &BTreeMap<Point, String> {
        &self.point_names
    }

    /// Display string for a label, falling back to the number itself.
    pub fn point_name(&self, p: Point) -> String {
        self.point_names.get(&p).cloned().unwrap_or_else(|| p.to_string())
    }

    pub fn into_blocks(self) -> Vec<NestedBlock> {
        self.blocks
    }

    /// Sort blocks into canonical order.
    pub fn canonicalize(mut self) -> Self {
        self.blocks.sort_unstable();
        self
    }

    pub fn underlying_blocks(&self) -> Vec<Block> {
        self.blocks.iter().map(NestedBlock::flatten).collect()
    }

    /// Multiplicity of every nested pair; absent pairs are zero.
    pub fn pair_multiplicities(&self) -> BTreeMap<(Point, Point), u32> {
        let mut counts = BTreeMap::new();
        for nb in &self.blocks {
            for [a, b] in nb.pairs() {
                *counts.entry((a, b)).or_insert(0) += 1;
            }
        }
        counts
    }

    pub fn classify(&self) -> ClassificationReport {
        classify(self)
    }
}

/// Flattening of every nested block, multiplicities kept.
pub fn underlying_blocks(d: &NestedDesign) -> Vec<Block> {
    d.underlying_blocks()
}

pub fn pair_multiplicities(d: &NestedDesign) -> BTreeMap<(Point, Point), u32> {
    d.pair_multiplicities()
}

#[inline]
fn binom2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

#[inline]
fn binom3(n: u64) -> u64 {
    n * n.saturating_sub(1) * n.saturating_sub(2) / 6
}

pub(crate) fn binomial(n: u64, t: u32) -> u64 {
    match t {
        0 => 1,
        1 => n,
        2 => binom2(n),
        3 => binom3(n),
        _ => unreachable!("strength checked by caller"),
    }
}

/// Colex rank of an ascending pair.
#[inline]
pub(crate) fn pair_rank(a: Point, b: Point) -> usize {
    debug_assert!(a < b);
    (binom2(b as u64) + a as u64) as usize
}

#[inline]
fn triple_rank(a: Point, b: Point, c: Point) -> usize {
    (binom3(c as u64) + binom2(b as u64) + a as u64) as usize
}

/// Inverse of the colex rank for t-subsets.
fn unrank(mut rank: u64, t: u32) -> Vec<Point> {
    let mut out = Vec::with_capacity(t as usize);
    for i in (1..=t).rev() {
        // largest c with C(c, i) <= rank
        let mut c = i as u64 - 1;
        while binomial(c + 1, i) <= rank {
            c += 1;
        }
        rank -= binomial(c, i);
        out.push(c as Point);
    }
    out.reverse();
    out
}

/// A t-subset whose count disagrees with the design's λ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub subset: Vec<Point>,
    pub count: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TDesignReport {
    pub t: u32,
    /// The reference count: `lambda_expected` when given, otherwise the most
    /// common count (ties go to the smaller value).
    pub lambda: u32,
    pub pass: bool,
    /// Up to three violating subsets, in colex order.
    pub violations: Vec<Violation>,
}

/// Count, for every t-subset of `0..v`, the blocks that contain it.
///
/// Each block adds its C(4, t) sub-subsets into a flat counter indexed by
/// colex rank, so the cost is linear in the number of blocks plus C(v, t).
pub fn check_t_design(
    blocks: &[Block],
    v: u32,
    t: u32,
    lambda_expected: Option<u32>,
) -> Result<TDesignReport, DesignError> {
    if !(1..=3).contains(&t) {
        return Err(DesignError::UnsupportedStrength(t));
    }
    if let Some(label) = blocks.iter().map(Block::max_label).find(|&l| l >= v) {
        return Err(DesignError::LabelOutOfRange { label, v });
    }
    let len = binomial(v as u64, t);
    if len > MAX_COUNTER_LEN {
        return Err(DesignError::TooLarge { v, t });
    }
    let counts = subset_counts(blocks, v, t);

    let lambda = match lambda_expected {
        Some(l) => l,
        None => {
            let mut freq: HashMap<u32, u64> = HashMap::new();
            for &c in &counts {
                *freq.entry(c).or_insert(0) += 1;
            }
            freq.into_iter()
                .max_by(|(c1, n1), (c2, n2)| n1.cmp(n2).then(c2.cmp(c1)))
                .map(|(c, _)| c)
                .unwrap_or(0)
        }
    };
    let violations: Vec<Violation> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != lambda)
        .take(3)
        .map(|(rank, &count)| Violation { subset: unrank(rank as u64, t), count })
        .collect();
    Ok(TDesignReport { t, lambda, pass: violations.is_empty(), violations })
}

fn subset_counts(blocks: &[Block], v: u32, t: u32) -> Vec<u32> {
    let mut counts = vec![0u32; binomial(v as u64, t) as usize];
    for block in blocks {
        let [a, b, c, d] = block.0;
        match t {
            1 => {
                for p in [a, b, c, d] {
                    counts[p as usize] += 1;
                }
            }
            2 => {
                for (x, y) in [(a, b), (a, c), (a, d), (b, c), (b, d), (c, d)] {
                    counts[pair_rank(x, y)] += 1;
                }
            }
            _ => {
                for (x, y, z) in [(a, b, c), (a, b, d), (a, c, d), (b, c, d)] {
                    counts[triple_rank(x, y, z)] += 1;
                }
            }
        }
    }
    counts
}

/// Dense pair counter, indexed by colex rank.
pub(crate) fn dense_pair_counts(d: &NestedDesign) -> Vec<u32> {
    let mut counts = vec![0u32; binom2(d.v as u64) as usize];
    for nb in &d.blocks {
        for [a, b] in nb.pairs() {
            counts[pair_rank(a, b)] += 1;
        }
    }
    counts
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UniformityClass {
    CompletelyUniform,
    Uniform,
    CompletelyQuasiUniform,
    QuasiUniform,
    Irregular,
}

impl UniformityClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::CompletelyUniform => "completely-uniform",
            Self::Uniform => "uniform",
            Self::CompletelyQuasiUniform => "completely-quasi-uniform",
            Self::QuasiUniform => "quasi-uniform",
            Self::Irregular => "irregular",
        }
    }
}

impl fmt::Display for UniformityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for UniformityClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Self::CompletelyUniform,
            Self::Uniform,
            Self::CompletelyQuasiUniform,
            Self::QuasiUniform,
            Self::Irregular,
        ]
        .into_iter()
        .find(|c| c.as_str() == s)
        .ok_or_else(|| format!("unknown class {s:?}"))
    }
}

/// Arithmetic conformance checks. `None` means the check does not apply.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremFlags {
    /// Block count equals v(v−1)(v−2)/24, the size of an SQS(v).
    pub sqs_sized: bool,
    /// SQS-sized and completely uniform: v ≡ 2 (mod 6) and μ = (v−2)/6.
    pub uniform_order_rule: Option<bool>,
    /// SQS-sized and completely quasi-uniform: v ≡ 4 (mod 6) with
    /// v(v−1)/3 pairs at (v−4)/6 and v(v−1)/6 pairs at (v+2)/6.
    pub quasi_uniform_order_rule: Option<bool>,
    /// Completely uniform: λ = 12b/(v(v−1)) is an integer divisible by 3.
    pub lambda_divisibility: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub v: u32,
    pub block_count: usize,
    /// Multiplicity → number of pairs with it; zero is not listed.
    pub histogram: BTreeMap<u32, u64>,
    pub pairs_missing: u64,
    pub class: UniformityClass,
    pub theorem_flags: TheoremFlags,
}

impl ClassificationReport {
    /// Common multiplicity of a (completely) uniform design.
    pub fn mu(&self) -> Option<u32> {
        match self.class {
            UniformityClass::CompletelyUniform | UniformityClass::Uniform => {
                self.histogram.keys().next().copied()
            }
            _ => None,
        }
    }

    /// λ of the underlying 2-design implied by the block count, if integral.
    pub fn implied_lambda(&self) -> Option<u64> {
        let pairs = binom2(self.v as u64);
        let twelve_b = 12 * self.block_count as u64;
        (pairs > 0 && twelve_b % (2 * pairs) == 0).then(|| twelve_b / (2 * pairs))
    }
}

pub fn classify(d: &NestedDesign) -> ClassificationReport {
    let counts = dense_pair_counts(d);
    let mut histogram = BTreeMap::new();
    let mut pairs_missing = 0u64;
    for &c in &counts {
        if c == 0 {
            pairs_missing += 1;
        } else {
            *histogram.entry(c).or_insert(0u64) += 1;
        }
    }
    let keys: Vec<u32> = histogram.keys().copied().collect();
    let complete = pairs_missing == 0;
    let class = match keys.as_slice() {
        [_] if complete => UniformityClass::CompletelyUniform,
        [_] => UniformityClass::Uniform,
        [lo, hi] if hi - lo == 1 && complete => UniformityClass::CompletelyQuasiUniform,
        [lo, hi] if hi - lo == 1 => UniformityClass::QuasiUniform,
        _ => UniformityClass::Irregular,
    };

    let v = d.v as u64;
    let b = d.blocks.len() as u64;
    let sqs_sized = v >= 4 && b == v * (v - 1) * (v - 2) / 24 && (v * (v - 1) * (v - 2)) % 24 == 0;
    let uniform_order_rule = (sqs_sized && class == UniformityClass::CompletelyUniform)
        .then(|| v % 6 == 2 && keys[0] as u64 == (v - 2) / 6);
    let quasi_uniform_order_rule =
        (sqs_sized && class == UniformityClass::CompletelyQuasiUniform).then(|| {
            v % 6 == 4
                && keys[0] as u64 == (v - 4) / 6
                && keys[1] as u64 == (v + 2) / 6
                && histogram[&keys[0]] == v * (v - 1) / 3
                && histogram[&keys[1]] == v * (v - 1) / 6
        });
    let lambda_divisibility = (class == UniformityClass::CompletelyUniform).then(|| {
        let pairs2 = v * (v - 1);
        (12 * b) % pairs2 == 0 && (12 * b / pairs2) % 3 == 0
    });

    ClassificationReport {
        v: d.v,
        block_count: d.blocks.len(),
        histogram,
        pairs_missing,
        class,
        theorem_flags: TheoremFlags {
            sqs_sized,
            uniform_order_rule,
            quasi_uniform_order_rule,
            lambda_divisibility,
        },
    }
}

/// Which input of [`assemble_nested_sqs`] an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartIndex {
    Uniform(usize),
    LambdaOne,
}

impl fmt::Display for PartIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Uniform(i) => write!(f, "part {i}"),
            Self::LambdaOne => f.write_str("the lambda=1 part"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssemblyError {
    #[error("nothing to assemble")]
    Empty,
    #[error("{part} has v = {found}, expected {expected}")]
    MismatchedOrder { part: PartIndex, expected: u32, found: u32 },
    #[error("{part} is not a 2-(v,4,{lambda}) design: {violation:?}")]
    NotTwoDesign { part: PartIndex, lambda: u32, violation: Option<Violation> },
    #[error("{part} repeats block {block:?}")]
    OverlappingBlocks { part: PartIndex, block: Block },
    #[error(transparent)]
    Design(#[from] DesignError),
}

/// Union of block-disjoint nested 2-(v,4,3) designs, plus an optional nested
/// 2-(v,4,1) design. Every precondition is checked.
pub fn assemble_nested_sqs(
    parts: &[NestedDesign],
    lambda1_part: Option<&NestedDesign>,
) -> Result<NestedDesign, AssemblyError> {
    let all: Vec<(PartIndex, &NestedDesign, u32)> = parts
        .iter()
        .enumerate()
        .map(|(i, p)| (PartIndex::Uniform(i), p, 3))
        .chain(lambda1_part.map(|p| (PartIndex::LambdaOne, p, 1)))
        .collect();
    let v = all.first().ok_or(AssemblyError::Empty)?.1.v;

    if let Some(&(part, d, _)) = all.iter().find(|(_, d, _)| d.v != v) {
        return Err(AssemblyError::MismatchedOrder { part, expected: v, found: d.v });
    }
    for &(part, d, lambda) in &all {
        let report = check_t_design(&d.underlying_blocks(), v, 2, Some(lambda))?;
        if !report.pass {
            return Err(AssemblyError::NotTwoDesign {
                part,
                lambda,
                violation: report.violations.into_iter().next(),
            });
        }
    }

    let mut tagged: Vec<(Block, u32)> = all
        .iter()
        .enumerate()
        .flat_map(|(i, (_, d, _))| d.blocks.iter().map(move |nb| (nb.flatten(), i as u32)))
        .collect();
    tagged.sort_unstable();
    if let Some(w) = tagged.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(AssemblyError::OverlappingBlocks { part: all[w[1].1 as usize].0, block: w[1].0 });
    }
    drop(tagged);

    let blocks: Vec<NestedBlock> = all.iter().flat_map(|(_, d, _)| d.blocks.iter().copied()).collect();
    Ok(NestedDesign { v, blocks, point_names: all[0].1.point_names.clone() }.canonicalize())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResolutionDefect {
    RepeatedPoint(Point),
    MissingPoint(Point),
    OutOfRange(Point),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionReport {
    pub pass: bool,
    /// First offending class and what is wrong with it.
    pub failure: Option<(usize, ResolutionDefect)>,
}

/// Every class must consist of pairwise disjoint blocks covering `0..v`.
pub fn check_resolution(classes: &[Vec<Block>], v: u32) -> ResolutionReport {
    for (i, class) in classes.iter().enumerate() {
        let mut seen = vec![false; v as usize];
        for block in class {
            for &p in block.points() {
                if p >= v {
                    return ResolutionReport { pass: false, failure: Some((i, ResolutionDefect::OutOfRange(p))) };
                }
                if std::mem::replace(&mut seen[p as usize], true) {
                    return ResolutionReport { pass: false, failure: Some((i, ResolutionDefect::RepeatedPoint(p))) };
                }
            }
        }
        if let Some(p) = seen.iter().position(|&s| !s) {
            return ResolutionReport {
                pass: false,
                failure: Some((i, ResolutionDefect::MissingPoint(p as Point))),
            };
        }
    }
    ResolutionReport { pass: true, failure: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nb(a: Point, b: Point, c: Point, d: Point) -> NestedBlock {
        NestedBlock::new([a, b], [c, d]).unwrap()
    }

    /// Scan every t-subset against every block.
    fn naive_counts(blocks: &[Block], v: u32, t: u32) -> Vec<(Vec<Point>, u32)> {
        let mut subsets: Vec<Vec<Point>> = vec![vec![]];
        for _ in 0..t {
            subsets = subsets
                .into_iter()
                .flat_map(|s| {
                    let start = s.last().map_or(0, |&l| l + 1);
                    (start..v).map(move |p| {
                        let mut s2 = s.clone();
                        s2.push(p);
                        s2
                    })
                })
                .collect();
        }
        subsets
            .into_iter()
            .map(|s| {
                let c = blocks.iter().filter(|b| s.iter().all(|&p| b.contains(p))).count() as u32;
                (s, c)
            })
            .collect()
    }

    #[test]
    fn canonical_nested_block() {
        let x = nb(3, 1, 7, 0);
        assert_eq!(x.first(), [0, 7]);
        assert_eq!(x.second(), [1, 3]);
        assert_eq!(x, nb(1, 3, 0, 7));
        assert_eq!(x.flatten().points(), &[0, 1, 3, 7]);
        assert_eq!(NestedBlock::new([1, 1], [2, 3]), Err(DesignError::RepeatedPoint(1)));
        assert_eq!(x.to_string(), "0 7 | 1 3");
    }

    #[test]
    fn rank_roundtrip() {
        for t in 1..=3 {
            for r in 0..binomial(12, t) {
                let s = unrank(r, t);
                assert!(s.windows(2).all(|w| w[0] < w[1]));
                let back = match t {
                    1 => s[0] as usize,
                    2 => pair_rank(s[0], s[1]),
                    _ => triple_rank(s[0], s[1], s[2]),
                };
                assert_eq!(back as u64, r);
            }
        }
    }

    #[test]
    fn single_block_design() {
        let b = [Block::new([0, 1, 2, 3]).unwrap()];
        let r = check_t_design(&b, 4, 3, None).unwrap();
        assert!(r.pass);
        assert_eq!(r.lambda, 1);
    }

    #[test]
    fn counter_matches_naive_scan() {
        let blocks: Vec<Block> = [[0, 1, 2, 3], [0, 1, 4, 5], [2, 4, 6, 7], [1, 3, 5, 7], [0, 1, 2, 4]]
            .into_iter()
            .map(|p| Block::new(p).unwrap())
            .collect();
        for t in 1..=3 {
            let fast = subset_counts(&blocks, 8, t);
            let naive = naive_counts(&blocks, 8, t);
            assert_eq!(fast.len(), naive.len());
            for (subset, count) in naive {
                let rank = match t {
                    1 => subset[0] as usize,
                    2 => pair_rank(subset[0], subset[1]),
                    _ => triple_rank(subset[0], subset[1], subset[2]),
                };
                assert_eq!(fast[rank], count, "{subset:?}");
            }
        }
    }

    #[test]
    fn t_design_errors() {
        let b = [Block::new([0, 1, 2, 9]).unwrap()];
        assert_eq!(check_t_design(&b, 8, 2, None), Err(DesignError::LabelOutOfRange { label: 9, v: 8 }));
        assert_eq!(check_t_design(&[], 8, 4, None), Err(DesignError::UnsupportedStrength(4)));
        assert_eq!(check_t_design(&[], 8, 0, None), Err(DesignError::UnsupportedStrength(0)));
    }

    #[test]
    fn mode_picks_majority_count() {
        // SQS(8) with one block removed: the four uncovered triples have
        // count 0, everything else 1.
        let mut blocks = Vec::new();
        for x in 0..8u32 {
            for y in x + 1..8 {
                for z in y + 1..8 {
                    let w = x ^ y ^ z;
                    if w > z {
                        blocks.push(Block::new([x, y, z, w]).unwrap());
                    }
                }
            }
        }
        assert_eq!(blocks.len(), 14);
        let removed = blocks.remove(5);
        let r = check_t_design(&blocks, 8, 3, None).unwrap();
        assert!(!r.pass);
        assert_eq!(r.lambda, 1);
        assert_eq!(r.violations.len(), 3);
        for v in &r.violations {
            assert_eq!(v.count, 0);
            assert!(v.subset.iter().all(|&p| removed.contains(p)));
        }
    }

    #[test]
    fn classification_buckets() {
        let one = NestedDesign::new(8, vec![nb(0, 1, 2, 3)]).unwrap();
        let r = one.classify();
        assert_eq!(r.class, UniformityClass::Uniform);
        assert_eq!(r.histogram, BTreeMap::from([(1, 2)]));
        assert_eq!(r.pairs_missing, 26);
        assert_eq!(one.pair_multiplicities().len(), 2);

        let quasi = NestedDesign::new(8, vec![nb(0, 1, 2, 3), nb(0, 1, 4, 5)]).unwrap();
        assert_eq!(quasi.classify().class, UniformityClass::QuasiUniform);

        let irregular =
            NestedDesign::new(8, vec![nb(0, 1, 2, 3), nb(0, 1, 4, 5), nb(0, 1, 6, 7)]).unwrap();
        assert_eq!(irregular.classify().class, UniformityClass::Irregular);

        let empty = NestedDesign::new(4, vec![]).unwrap();
        assert!(empty.underlying_blocks().is_empty());
        assert_eq!(empty.classify().class, UniformityClass::Irregular);
    }

    #[test]
    fn complete_classes_on_four_points() {
        // all three pairings of {0,1,2,3}: every pair exactly once
        let d = NestedDesign::new(4, vec![nb(0, 1, 2, 3), nb(0, 2, 1, 3), nb(0, 3, 1, 2)]).unwrap();
        let r = d.classify();
        assert_eq!(r.class, UniformityClass::CompletelyUniform);
        assert_eq!(r.mu(), Some(1));
        let mut more = d.clone().into_blocks();
        more.push(nb(0, 1, 2, 3));
        let r = NestedDesign::new(4, more).unwrap().classify();
        assert_eq!(r.class, UniformityClass::CompletelyQuasiUniform);
        assert_eq!(r.histogram, BTreeMap::from([(1, 4), (2, 2)]));
    }

    #[test]
    fn resolution_checks() {
        let b = |p| Block::new(p).unwrap();
        let good = vec![vec![b([0, 1, 2, 3]), b([4, 5, 6, 7])]];
        assert!(check_resolution(&good, 8).pass);
        let repeated = vec![good[0].clone(), vec![b([0, 1, 2, 3]), b([3, 4, 5, 6])]];
        assert_eq!(
            check_resolution(&repeated, 8).failure,
            Some((1, ResolutionDefect::RepeatedPoint(3)))
        );
        let short = vec![vec![b([0, 1, 2, 3])]];
        assert_eq!(check_resolution(&short, 8).failure, Some((0, ResolutionDefect::MissingPoint(4))));
        assert_eq!(check_resolution(&good, 6).failure, Some((0, ResolutionDefect::OutOfRange(6))));
    }

    #[test]
    fn assembly_errors() {
        let a = NestedDesign::new(4, vec![nb(0, 1, 2, 3)]).unwrap();
        let b = NestedDesign::new(5, vec![nb(0, 1, 2, 3)]).unwrap();
        assert_eq!(assemble_nested_sqs(&[], None), Err(AssemblyError::Empty));
        assert!(matches!(
            assemble_nested_sqs(&[a.clone(), b], None),
            Err(AssemblyError::MismatchedOrder { part: PartIndex::Uniform(1), .. })
        ));
        // {0,1,2,3} alone on 4 points is a 2-(4,4,1) design, not λ = 3
        assert!(matches!(
            assemble_nested_sqs(std::slice::from_ref(&a), None),
            Err(AssemblyError::NotTwoDesign { part: PartIndex::Uniform(0), lambda: 3, .. })
        ));
        let triple = NestedDesign::new(4, vec![nb(0, 1, 2, 3), nb(0, 2, 1, 3), nb(0, 3, 1, 2)]).unwrap();
        assert!(matches!(
            assemble_nested_sqs(&[triple], Some(&a)),
            Err(AssemblyError::OverlappingBlocks { part: PartIndex::Uniform(0), .. })
        ));
        let joined = assemble_nested_sqs(&[], Some(&a)).unwrap();
        assert_eq!(joined.len(), 1);
    }
}
