//! Explicit small nested SQSs and the existence registry.
//!
//! Structured point sets are mapped to dense labels with ∞ last:
//! Z_n ∪ {∞} as `x ↦ x`, `∞ ↦ n`; Z3 × Z3 ∪ {∞} row-major, `(a, b) ↦ 3a + b`,
//! `∞ ↦ 9`; Z7 × {0, 1} as `(x, y) ↦ 7y + x`; GF(q) ∪ {∞} as `x ↦ x`, `∞ ↦ q`.

mod assets;

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use assets::asset;
use assets::data_lines;

use crate::design::{Block, DesignError, NestedBlock, NestedDesign, Point};
use crate::field::{FieldError, GfpField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry {0:?}")]
    UnknownName(String),
    #[error("asset {name} is damaged: digest {found}, expected {expected}")]
    AssetDigest { name: &'static str, expected: &'static str, found: String },
    #[error("asset {name}, line {line}: {message}")]
    AssetSyntax { name: &'static str, line: usize, message: String },
    #[error("coordinate {coordinate} is out of range for Z_{n}")]
    CoordinateOutOfRange { coordinate: u32, n: u32 },
    #[error("q = {0} must be a prime congruent to 7 mod 12")]
    UnsupportedQ(u32),
    #[error("base {0:?} is not a 4-subset of the projective line")]
    BadBase([ProjPoint; 4]),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A point of Z_n ∪ {∞} or GF(q) ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjPoint {
    Infinity,
    Finite(u32),
}

impl ProjPoint {
    fn label(self, n: u32) -> Point {
        match self {
            Self::Infinity => n,
            Self::Finite(x) => x,
        }
    }

    fn translate(self, t: u32, n: u32) -> Self {
        match self {
            Self::Infinity => Self::Infinity,
            Self::Finite(x) => Self::Finite((x + t) % n),
        }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Infinity => f.write_str("inf"),
            Self::Finite(x) => write!(f, "{x}"),
        }
    }
}

/// A nested block over structured points, `[[x, y], [z, w]]`.
pub type NestedBase<P> = [[P; 2]; 2];

fn inf() -> ProjPoint {
    ProjPoint::Infinity
}

fn fin(x: u32) -> ProjPoint {
    ProjPoint::Finite(x)
}

fn rot(a: ProjPoint, b: ProjPoint, c: u32, d: u32) -> NestedBase<ProjPoint> {
    [[a, b], [fin(c), fin(d)]]
}

fn nested_from<P: Copy>(base: &NestedBase<P>, label: impl Fn(P) -> Point) -> Result<NestedBlock, DesignError> {
    NestedBlock::new([label(base[0][0]), label(base[0][1])], [label(base[1][0]), label(base[1][1])])
}

fn rotational_names(n: u32) -> BTreeMap<Point, String> {
    (0..n).map(|x| (x, x.to_string())).chain([(n, "inf".to_string())]).collect()
}

/// Orbit of every base under x ↦ x + t on Z_n, ∞ fixed, for each t in
/// `translations` (all of Z_n by default). Blocks are kept in expansion
/// order, base by base, and repeats are kept.
pub fn expand_rotational(
    bases: &[NestedBase<ProjPoint>],
    n: u32,
    translations: Option<&[u32]>,
) -> Result<NestedDesign, CatalogError> {
    let all: Vec<u32> = (0..n).collect();
    let translations = translations.unwrap_or(&all);
    for &p in bases.iter().flatten().flatten().chain(translations.iter().map(|t| fin(*t)).collect::<Vec<_>>().iter()) {
        if let ProjPoint::Finite(x) = p {
            if x >= n {
                return Err(CatalogError::CoordinateOutOfRange { coordinate: x, n });
            }
        }
    }
    let mut blocks = Vec::with_capacity(bases.len() * translations.len());
    for base in bases {
        for &t in translations {
            let moved = base.map(|pair| pair.map(|p| p.translate(t, n)));
            blocks.push(nested_from(&moved, |p| p.label(n))?);
        }
    }
    Ok(NestedDesign::new(n + 1, blocks)?.with_point_names(rotational_names(n)))
}

fn sqs8_bases() -> Vec<NestedBase<ProjPoint>> {
    vec![rot(inf(), fin(0), 1, 3), rot(fin(2), fin(6), 4, 5)]
}

/// The rotational completely uniform nested SQS(8), bases {∞,0 | 1,3} and
/// {2,6 | 4,5} over Z7.
pub fn rotational_sqs8() -> NestedDesign {
    expand_rotational(&sqs8_bases(), 7, None).expect("static bases are in range")
}

/// The rotational completely quasi-uniform nested SQS(16) over Z15 ∪ {∞}.
pub fn rotational_sqs16() -> NestedDesign {
    let full = [
        rot(inf(), fin(0), 1, 4),
        rot(fin(2), fin(8), 5, 10),
        rot(fin(3), fin(14), 9, 7),
        rot(fin(6), fin(13), 11, 12),
        rot(inf(), fin(0), 2, 8),
        rot(fin(1), fin(4), 5, 10),
        rot(fin(3), fin(14), 6, 13),
        rot(fin(7), fin(9), 12, 11),
    ];
    let short = [
        rot(inf(), fin(0), 5, 10),
        rot(fin(1), fin(4), 2, 8),
        rot(fin(3), fin(14), 11, 12),
        rot(fin(6), fin(13), 9, 7),
    ];
    let mut blocks = expand_rotational(&full, 15, None).expect("static").into_blocks();
    blocks.extend(expand_rotational(&short, 15, Some(&[0, 1, 2, 3, 4])).expect("static").into_blocks());
    NestedDesign::new(16, blocks).expect("labels < 16").with_point_names(rotational_names(15))
}

fn syntax(name: &'static str, line: usize, message: impl Into<String>) -> CatalogError {
    CatalogError::AssetSyntax { name, line, message: message.into() }
}

/// Split `a b | c d` into two pairs of tokens.
fn split_nested<'a>(name: &'static str, line: usize, s: &'a str) -> Result<[[&'a str; 2]; 2], CatalogError> {
    let (l, r) = s.split_once('|').ok_or_else(|| syntax(name, line, "missing `|`"))?;
    let pair = |part: &'a str| -> Result<[&'a str; 2], CatalogError> {
        let toks: Vec<&str> = part.split_whitespace().collect();
        match toks.as_slice() {
            [a, b] => Ok([*a, *b]),
            _ => Err(syntax(name, line, "expected two points on each side")),
        }
    };
    Ok([pair(l)?, pair(r)?])
}

fn parse_u32(name: &'static str, line: usize, tok: &str) -> Result<u32, CatalogError> {
    tok.parse().map_err(|_| syntax(name, line, format!("bad number {tok:?}")))
}

fn parse_proj(name: &'static str, line: usize, tok: &str) -> Result<ProjPoint, CatalogError> {
    if tok == "inf" {
        Ok(ProjPoint::Infinity)
    } else {
        parse_u32(name, line, tok).map(ProjPoint::Finite)
    }
}

/// A point of Z_a × Z_b, optionally with ∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum GridPoint {
    Infinity,
    Cell(u32, u32),
}

fn parse_grid(name: &'static str, line: usize, tok: &str) -> Result<GridPoint, CatalogError> {
    if tok == "inf" {
        return Ok(GridPoint::Infinity);
    }
    let (a, b) = tok.split_once(',').ok_or_else(|| syntax(name, line, format!("bad point {tok:?}")))?;
    Ok(GridPoint::Cell(parse_u32(name, line, a)?, parse_u32(name, line, b)?))
}

/// Which coordinate of Z3 × Z3 a semi-cyclic orbit translates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    First,
    Second,
}

/// The completely quasi-uniform nested SQS(10) over Z3 × Z3 ∪ {∞}.
pub fn sqs10() -> Result<NestedDesign, CatalogError> {
    const NAME: &str = "sqs10";
    let text = asset(NAME)?;
    let label = |p: GridPoint| match p {
        GridPoint::Infinity => 9,
        GridPoint::Cell(a, b) => 3 * a + b,
    };
    let mut blocks = Vec::new();
    for (line, s) in data_lines(text) {
        let (body, axis) = s.split_once(';').ok_or_else(|| syntax(NAME, line, "missing `; axis`"))?;
        let axis = match axis.trim() {
            "first" => Axis::First,
            "second" => Axis::Second,
            other => return Err(syntax(NAME, line, format!("bad axis {other:?}"))),
        };
        let toks = split_nested(NAME, line, body)?;
        let mut base = [[GridPoint::Infinity; 2]; 2];
        for (i, pair) in toks.iter().enumerate() {
            for (k, tok) in pair.iter().enumerate() {
                let p = parse_grid(NAME, line, tok)?;
                if let GridPoint::Cell(a, b) = p {
                    if a >= 3 || b >= 3 {
                        return Err(CatalogError::CoordinateOutOfRange { coordinate: a.max(b), n: 3 });
                    }
                }
                base[i][k] = p;
            }
        }
        for t in 0..3 {
            let moved = base.map(|pair| {
                pair.map(|p| match (p, axis) {
                    (GridPoint::Infinity, _) => GridPoint::Infinity,
                    (GridPoint::Cell(a, b), Axis::First) => GridPoint::Cell((a + t) % 3, b),
                    (GridPoint::Cell(a, b), Axis::Second) => GridPoint::Cell(a, (b + t) % 3),
                })
            });
            blocks.push(nested_from(&moved, label)?);
        }
    }
    let names = (0..9)
        .map(|l| (l, format!("({},{})", l / 3, l % 3)))
        .chain([(9, "inf".to_string())])
        .collect();
    Ok(NestedDesign::new(10, blocks)?.canonicalize().with_point_names(names))
}

/// The completely uniform nested SQS(14) over Z7 × {0, 1}.
pub fn sqs14() -> Result<NestedDesign, CatalogError> {
    const NAME: &str = "sqs14";
    let text = asset(NAME)?;
    let mut blocks = Vec::new();
    for (line, s) in data_lines(text) {
        let toks = split_nested(NAME, line, s)?;
        let mut base = [[(0u32, 0u32); 2]; 2];
        for (i, pair) in toks.iter().enumerate() {
            for (k, tok) in pair.iter().enumerate() {
                match parse_grid(NAME, line, tok)? {
                    GridPoint::Cell(x, y) if x < 7 && y < 2 => base[i][k] = (x, y),
                    _ => return Err(syntax(NAME, line, format!("{tok:?} is not in Z7 x {{0,1}}"))),
                }
            }
        }
        for t in 0..7 {
            let moved = base.map(|pair| pair.map(|(x, y)| ((x + t) % 7, y)));
            blocks.push(nested_from(&moved, |(x, y)| 7 * y + x)?);
        }
    }
    let names = (0..14).map(|l| (l, format!("({},{})", l % 7, l / 7))).collect();
    Ok(NestedDesign::new(14, blocks)?.canonicalize().with_point_names(names))
}

/// A Möbius map x ↦ (ax + b)/(cx + d) over GF(q).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mobius {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl Mobius {
    pub fn apply(&self, f: &GfpField, x: ProjPoint) -> ProjPoint {
        let Mobius { a, b, c, d } = *self;
        match x {
            ProjPoint::Infinity => {
                if c == 0 {
                    ProjPoint::Infinity
                } else {
                    fin(f.mul(a, f.inv(c).expect("c != 0")))
                }
            }
            ProjPoint::Finite(x) => {
                let den = f.add(f.mul(c, x), d);
                match f.inv(den) {
                    None => ProjPoint::Infinity,
                    Some(inv) => fin(f.mul(f.add(f.mul(a, x), b), inv)),
                }
            }
        }
    }
}

/// Every element of PSL(2, q), one matrix representative per map.
///
/// Matrices of determinant 1 cover each map exactly twice (±I); maps are
/// told apart by the images of 0, 1 and ∞, which determine a Möbius map.
pub fn psl2_elements(f: &GfpField) -> Vec<Mobius> {
    let q = f.p();
    let mut seen = HashSet::new();
    let mut maps = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                // solve ad − bc = 1 for d when a ≠ 0, else need −bc = 1
                let ds: Vec<u32> = if a != 0 {
                    let rhs = f.add(1, f.mul(b, c));
                    vec![f.mul(rhs, f.inv(a).expect("a != 0"))]
                } else if f.mul(b, c) == f.neg(1) {
                    (0..q).collect()
                } else {
                    vec![]
                };
                for d in ds {
                    let m = Mobius { a, b, c, d };
                    let key = [fin(0), fin(1), inf()].map(|x| m.apply(f, x));
                    if seen.insert(key) {
                        maps.push(m);
                    }
                }
            }
        }
    }
    maps
}

fn check_q(q: u32) -> Result<GfpField, CatalogError> {
    if q % 12 != 7 {
        return Err(CatalogError::UnsupportedQ(q));
    }
    GfpField::new(q).map_err(|_| CatalogError::UnsupportedQ(q))
}

/// Orbit of a 4-subset of GF(q) ∪ {∞} under PSL(2, q), on labels with
/// `∞ ↦ q`; sorted, without repeats.
pub fn psl2_block_orbit(q: u32, base: [ProjPoint; 4]) -> Result<Vec<Block>, CatalogError> {
    let f = check_q(q)?;
    let distinct = base.iter().collect::<HashSet<_>>().len() == 4;
    let in_range = base.iter().all(|p| matches!(p, ProjPoint::Infinity) || matches!(p, ProjPoint::Finite(x) if *x < q));
    if !distinct || !in_range {
        return Err(CatalogError::BadBase(base));
    }
    let mut blocks: Vec<Block> = psl2_elements(&f)
        .iter()
        .map(|m| Block::from_distinct(base.map(|x| m.apply(&f, x).label(q))))
        .collect();
    blocks.sort_unstable();
    blocks.dedup();
    Ok(blocks)
}

/// The completely uniform nested SQS(44) over GF(43) ∪ {∞}.
///
/// Rotational base nested blocks: the fourteen listed ones, plus each of
/// the three Γ-bases (split by label order) times every nonzero square.
/// Translating all of them by GF(43) gives the design, whose blocks are
/// checked against the PSL(2, 43) orbit of {∞, 0, 1, 37}.
pub fn sqs44() -> Result<NestedDesign, CatalogError> {
    const NAME: &str = "sqs44";
    const Q: u32 = 43;
    let f = GfpField::new(Q)?;
    let alpha = f.generator();
    if alpha != 3 {
        return Err(CatalogError::Inconsistent(format!("primitive root of 43 is {alpha}, expected 3")));
    }
    let text = asset(NAME)?;
    let mut section = "";
    let mut rotational: Vec<NestedBase<ProjPoint>> = Vec::new();
    for (line, s) in data_lines(text) {
        if s.starts_with('[') {
            section = s;
            continue;
        }
        match section {
            "[nested]" => {
                let toks = split_nested(NAME, line, s)?;
                let mut base = [[inf(); 2]; 2];
                for (i, pair) in toks.iter().enumerate() {
                    for (k, tok) in pair.iter().enumerate() {
                        base[i][k] = parse_proj(NAME, line, tok)?;
                    }
                }
                rotational.push(base);
            }
            "[gamma]" => {
                let pts: Vec<u32> =
                    s.split_whitespace().map(|t| parse_u32(NAME, line, t)).collect::<Result<_, _>>()?;
                let mut pts: [u32; 4] = pts.try_into().map_err(|_| syntax(NAME, line, "expected four points"))?;
                pts.sort_unstable();
                for k in 0..(Q - 1) / 2 {
                    let s = f.pow(alpha, 2 * k as u64);
                    let p = pts.map(|x| fin(f.mul(s, x)));
                    rotational.push([[p[0], p[1]], [p[2], p[3]]]);
                }
            }
            other => return Err(syntax(NAME, line, format!("data outside a section ({other:?})"))),
        }
    }
    if rotational.len() != 77 {
        return Err(CatalogError::Inconsistent(format!("{} rotational base blocks, expected 77", rotational.len())));
    }
    let design = expand_rotational(&rotational, Q, None)?.canonicalize();

    let mut flat = design.underlying_blocks();
    flat.sort_unstable();
    let orbit = psl2_block_orbit(Q, [inf(), fin(0), fin(1), fin(37)])?;
    if flat != orbit {
        return Err(CatalogError::Inconsistent("blocks differ from the PSL(2,43) orbit of {inf,0,1,37}".into()));
    }
    Ok(design)
}

/// The completely uniform nested SQS(50) over Z49 ∪ {∞}.
pub fn sqs50() -> Result<NestedDesign, CatalogError> {
    const NAME: &str = "sqs50";
    let text = asset(NAME)?;
    let mut bases = Vec::new();
    for (line, s) in data_lines(text) {
        let toks = split_nested(NAME, line, s)?;
        let mut base = [[inf(); 2]; 2];
        for (i, pair) in toks.iter().enumerate() {
            for (k, tok) in pair.iter().enumerate() {
                base[i][k] = parse_proj(NAME, line, tok)?;
            }
        }
        bases.push(base);
    }
    Ok(expand_rotational(&bases, 49, None)?.canonicalize())
}

/// Names accepted by [`by_name`].
pub const NAMES: [&str; 6] = ["sqs8", "sqs10", "sqs14", "sqs16", "sqs44", "sqs50"];

pub fn by_name(name: &str) -> Result<NestedDesign, CatalogError> {
    match name {
        "sqs8" => Ok(rotational_sqs8()),
        "sqs16" => Ok(rotational_sqs16()),
        "sqs10" => sqs10(),
        "sqs14" => sqs14(),
        "sqs44" => sqs44(),
        "sqs50" => sqs50(),
        other => Err(CatalogError::UnknownName(other.to_string())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Existence {
    /// Exists and is built by this crate.
    Constructible,
    /// Exists by a construction outside this crate.
    External,
    /// v ≡ 2 (mod 6) but no completely uniform nested SQS(v) is known.
    Unresolved,
    /// v ≢ 2 (mod 6): no completely uniform nested SQS(v) can exist.
    Impossible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegistryRow {
    pub v: u32,
    pub status: Existence,
    pub source: &'static str,
    pub remark: &'static str,
    /// How to build it here, when constructible.
    pub target: Option<String>,
}

/// Known completely uniform nested SQS(v) for 8 ≤ v ≤ 50.
pub fn registry() -> Vec<RegistryRow> {
    let row = |v, status, source, remark, target: Option<&str>| RegistryRow {
        v,
        status,
        source,
        remark,
        target: target.map(str::to_string),
    };
    vec![
        row(8, Existence::Constructible, "Boolean construction, m = 3", "Boolean, rotational", Some("boolean --m 3")),
        row(14, Existence::Constructible, "semi-cyclic base blocks over Z7 x {0,1}", "semi-cyclic", Some("catalog:sqs14")),
        row(20, Existence::External, "external rotational base blocks", "rotational", None),
        row(26, Existence::External, "external rotational base blocks", "rotational", None),
        row(32, Existence::Constructible, "Boolean construction, m = 5", "Boolean, rotational", Some("boolean --m 5")),
        row(38, Existence::External, "external rotational base blocks", "rotational", None),
        row(44, Existence::Constructible, "PSL(2,43) orbit with Gamma-base blocks", "rotational", Some("catalog:sqs44")),
        row(50, Existence::Constructible, "rotational base blocks over Z49", "rotational", Some("catalog:sqs50")),
    ]
}

/// Registry status for any order, including orders past the table.
pub fn lookup(v: u32) -> RegistryRow {
    if let Some(row) = registry().into_iter().find(|r| r.v == v) {
        return row;
    }
    let unlisted = |status, source, remark, target| RegistryRow { v, status, source, remark, target };
    if v % 6 != 2 {
        return unlisted(Existence::Impossible, "order rule", "requires v = 2 mod 6", None);
    }
    if v.is_power_of_two() && v.trailing_zeros() % 2 == 1 && v >= 8 {
        let m = v.trailing_zeros();
        return unlisted(Existence::Constructible, "Boolean construction", "Boolean", Some(format!("boolean --m {m}")));
    }
    unlisted(Existence::Unresolved, "", "open", None)
}
