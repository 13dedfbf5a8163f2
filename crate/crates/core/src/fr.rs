//! Fractional repetition codes from nested designs.
//!
//! Node `i` stores the four packets of nested block `i` with each nested
//! pair in two adjacent slots: `(a, b, c, d)` for `{a, b | c, d}`. A failed
//! node is rebuilt from two helpers; reading a non-contiguous run inside a
//! helper costs the number of skipped slots.
//!
//! Node ids and read positions are 1-based throughout.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

pub use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::{asset, CatalogError};
use crate::design::{check_t_design, DesignError, NestedDesign, Point, UniformityClass};

pub const NODE_SIZE: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrError {
    #[error("empty read set")]
    EmptyRead,
    #[error("read positions {0:?} are not strictly increasing within 1..={1}")]
    BadPositions(Vec<usize>, usize),
    #[error("zero-skip layout needs a completely uniform nested design, got {0}")]
    NotCompletelyUniform(UniformityClass),
    #[error("underlying blocks are not a 2-design")]
    NotTwoDesign,
    #[error("code has no nodes")]
    Empty,
    #[error("node {node} stores packet {packet} twice")]
    RepeatedPacket { node: usize, packet: Point },
    #[error("packet {packet} is stored on {count} nodes, expected {expected}")]
    Irregular { packet: Point, count: usize, expected: usize },
    #[error("node {node} does not exist (code has {nodes} nodes)")]
    NoSuchNode { node: usize, nodes: usize },
    #[error("node {0} cannot be repaired from two helpers")]
    Irreparable(usize),
    #[error("node-count ratio needs v >= 8, got {0}")]
    OrderTooSmall(u64),
    #[error("layout line {line}: {message}")]
    Layout { line: usize, message: String },
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

/// `i_t − i_1 − (t − 1)` for strictly increasing 1-based positions.
pub fn skip_cost(positions: &[usize], node_size: usize) -> Result<usize, FrError> {
    let (Some(&first), Some(&last)) = (positions.first(), positions.last()) else {
        return Err(FrError::EmptyRead);
    };
    let increasing = positions.windows(2).all(|w| w[0] < w[1]);
    if !increasing || first == 0 || last > node_size {
        return Err(FrError::BadPositions(positions.to_vec(), node_size));
    }
    Ok(last - first - (positions.len() - 1))
}

/// A regular 4-uniform set system with stored packet order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrCode {
    nodes: Vec<[Point; NODE_SIZE]>,
    v: usize,
    r: usize,
}

impl FrCode {
    /// Checks that no node repeats a packet and that every packet is stored
    /// on the same number of nodes.
    pub fn new(nodes: Vec<[Point; NODE_SIZE]>) -> Result<Self, FrError> {
        if nodes.is_empty() {
            return Err(FrError::Empty);
        }
        let mut counts: BTreeMap<Point, usize> = BTreeMap::new();
        for (i, node) in nodes.iter().enumerate() {
            for (k, &p) in node.iter().enumerate() {
                if node[..k].contains(&p) {
                    return Err(FrError::RepeatedPacket { node: i + 1, packet: p });
                }
                *counts.entry(p).or_default() += 1;
            }
        }
        let r = *counts.values().next().expect("nonempty");
        if let Some((&packet, &count)) = counts.iter().find(|(_, &c)| c != r) {
            return Err(FrError::Irregular { packet, count, expected: r });
        }
        let v = counts.len();
        debug_assert_eq!(nodes.len() * NODE_SIZE, v * r);
        Ok(Self { nodes, v, r })
    }

    pub fn nodes(&self) -> &[[Point; NODE_SIZE]] {
        &self.nodes
    }

    /// 1-based.
    pub fn node(&self, id: usize) -> Result<&[Point; NODE_SIZE], FrError> {
        id.checked_sub(1)
            .and_then(|i| self.nodes.get(i))
            .ok_or(FrError::NoSuchNode { node: id, nodes: self.nodes.len() })
    }

    /// Number of nodes.
    pub fn b(&self) -> usize {
        self.nodes.len()
    }

    pub fn k(&self) -> usize {
        NODE_SIZE
    }

    /// Number of distinct packets.
    pub fn v(&self) -> usize {
        self.v
    }

    /// Replication degree.
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn params(&self) -> (usize, usize, usize) {
        (self.b(), self.k(), self.r())
    }

    fn packet_index(&self) -> BTreeMap<Point, Vec<usize>> {
        let mut index: BTreeMap<Point, Vec<usize>> = BTreeMap::new();
        for (i, node) in self.nodes.iter().enumerate() {
            for &p in node {
                index.entry(p).or_default().push(i);
            }
        }
        index
    }
}

/// Lay out a completely uniform nested design as an FR code.
pub fn to_fr_code(d: &NestedDesign) -> Result<FrCode, FrError> {
    let class = d.classify().class;
    if class != UniformityClass::CompletelyUniform {
        return Err(FrError::NotCompletelyUniform(class));
    }
    if !check_t_design(&d.underlying_blocks(), d.v(), 2, None)?.pass {
        return Err(FrError::NotTwoDesign);
    }
    let nodes = d
        .blocks()
        .iter()
        .map(|nb| {
            let ([a, b], [c, e]) = (nb.first(), nb.second());
            [a, b, c, e]
        })
        .collect();
    FrCode::new(nodes)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HelperRead {
    pub node: usize,
    pub positions: Vec<usize>,
    pub packets: Vec<Point>,
    pub skip: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepairPlan {
    pub failed: usize,
    /// Sorted by node id.
    pub helpers: Vec<HelperRead>,
    pub total_skip: usize,
    pub packets_recovered: BTreeSet<Point>,
}

impl RepairPlan {
    pub fn locality(&self) -> usize {
        self.helpers.len()
    }
}

/// Ways to split the four slots of the failed node between two helpers,
/// in preference order on equal cost.
const SPLITS: [(&[usize], &[usize]); 7] = [
    (&[0, 1], &[2, 3]),
    (&[1, 2], &[0, 3]),
    (&[0, 2], &[1, 3]),
    (&[0, 1, 2], &[3]),
    (&[0, 1, 3], &[2]),
    (&[0, 2, 3], &[1]),
    (&[1, 2, 3], &[0]),
];

/// Cheapest two-helper repair of node `failed`.
///
/// Every split of the failed packets into two parts is tried; each part is
/// read from a node holding all of it, other than the failed node and its
/// exact copies. The plan with the smallest total skip wins, then the
/// earlier split, then the lower helper ids. On codes laid out by
/// [`to_fr_code`] this always finds a zero-skip plan.
pub fn plan_repair(code: &FrCode, failed: usize) -> Result<RepairPlan, FrError> {
    plan_with_index(code, &code.packet_index(), failed)
}

fn plan_with_index(code: &FrCode, index: &BTreeMap<Point, Vec<usize>>, failed: usize) -> Result<RepairPlan, FrError> {
    let target = *code.node(failed)?;
    let mut target_set = target;
    target_set.sort_unstable();

    let reads = |slots: &[usize]| -> Vec<HelperRead> {
        let packets: Vec<Point> = slots.iter().map(|&s| target[s]).collect();
        let mut out = Vec::new();
        for &i in &index[&packets[0]] {
            let node = &code.nodes[i];
            let mut sorted = *node;
            sorted.sort_unstable();
            if i + 1 == failed || sorted == target_set {
                continue;
            }
            let mut positions: Vec<usize> = Vec::with_capacity(packets.len());
            for p in &packets {
                match node.iter().position(|q| q == p) {
                    Some(k) => positions.push(k + 1),
                    None => break,
                }
            }
            if positions.len() != packets.len() {
                continue;
            }
            positions.sort_unstable();
            let skip = skip_cost(&positions, NODE_SIZE).expect("positions come from the node");
            let packets = positions.iter().map(|&k| node[k - 1]).collect();
            out.push(HelperRead { node: i + 1, positions, packets, skip });
        }
        out
    };

    let mut best: Option<(usize, [HelperRead; 2])> = None;
    for (left, right) in SPLITS {
        let (ls, rs) = (reads(left), reads(right));
        let mut split_best: Option<(usize, usize, usize, &HelperRead, &HelperRead)> = None;
        for a in &ls {
            for b in rs.iter().filter(|b| b.node != a.node) {
                let key = (a.skip + b.skip, a.node, b.node, a, b);
                if split_best.as_ref().is_none_or(|s| (key.0, key.1, key.2) < (s.0, s.1, s.2)) {
                    split_best = Some(key);
                }
            }
        }
        if let Some((total, _, _, a, b)) = split_best {
            if best.as_ref().is_none_or(|(t, _)| total < *t) {
                best = Some((total, [a.clone(), b.clone()]));
            }
        }
    }
    let (total_skip, mut helpers) = best.ok_or(FrError::Irreparable(failed))?;
    helpers.sort_by_key(|h| h.node);
    let packets_recovered: BTreeSet<Point> = helpers.iter().flat_map(|h| h.packets.iter().copied()).collect();
    debug_assert_eq!(packets_recovered, target.into_iter().collect());
    Ok(RepairPlan { failed, helpers: helpers.into(), total_skip, packets_recovered })
}

/// Repair plans for every node of a code.
pub fn plan_all(code: &FrCode) -> Result<Vec<RepairPlan>, FrError> {
    let index = code.packet_index();
    (1..=code.b()).into_par_iter().map(|i| plan_with_index(code, &index, i)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZeroSkipReport {
    pub pass: bool,
    pub nodes: usize,
    pub max_skip: usize,
    pub max_locality: usize,
    /// First node attaining the largest skip, when that is nonzero.
    pub worst: Option<RepairPlan>,
    /// Nodes that could not be repaired at all.
    pub irreparable: Vec<usize>,
}

/// Plan every single-node repair and check each uses two helpers and no skips.
pub fn verify_zero_skip(code: &FrCode) -> ZeroSkipReport {
    let index = code.packet_index();
    let plans: Vec<Result<RepairPlan, FrError>> =
        (1..=code.b()).into_par_iter().map(|i| plan_with_index(code, &index, i)).collect();
    let mut report =
        ZeroSkipReport { pass: true, nodes: code.b(), max_skip: 0, max_locality: 0, worst: None, irreparable: vec![] };
    for (i, plan) in plans.into_iter().enumerate() {
        match plan {
            Ok(p) => {
                report.max_locality = report.max_locality.max(p.locality());
                if p.total_skip > report.max_skip {
                    report.max_skip = p.total_skip;
                    report.worst = Some(p);
                }
            }
            Err(_) => report.irreparable.push(i + 1),
        }
    }
    report.pass = report.irreparable.is_empty() && report.max_skip == 0 && report.max_locality == 2;
    report
}

/// `b` of a nested 2-(v,4,3) design over `b` of an SQS(v), i.e. 6/(v − 2).
pub fn node_count_ratio(v: u64) -> Result<Ratio<u64>, FrError> {
    if v < 8 {
        return Err(FrError::OrderTooSmall(v));
    }
    // b = v(v−1)/4 for the nested 2-design, v(v−1)(v−2)/24 for the SQS
    Ok(Ratio::new(6 * v * (v - 1), v * (v - 1) * (v - 2)))
}

/// `id: p1,p2,p3,p4` per node.
pub fn write_layout(code: &FrCode) -> String {
    let mut out = String::with_capacity(16 * code.b());
    for (i, n) in code.nodes.iter().enumerate() {
        let _ = writeln!(out, "{}: {},{},{},{}", i + 1, n[0], n[1], n[2], n[3]);
    }
    out
}

pub fn parse_layout(text: &str) -> Result<FrCode, FrError> {
    let err = |line, message: String| FrError::Layout { line, message };
    let mut nodes = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let (id, rest) = s.split_once(':').ok_or_else(|| err(line, "expected `id: p1,p2,p3,p4`".into()))?;
        let id: usize = id.trim().parse().map_err(|_| err(line, format!("bad node id {:?}", id.trim())))?;
        if id != nodes.len() + 1 {
            return Err(err(line, format!("node id {id} out of sequence, expected {}", nodes.len() + 1)));
        }
        let packets: Vec<Point> = rest
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| err(line, format!("bad packet {:?}", t.trim()))))
            .collect::<Result<_, _>>()?;
        let node: [Point; NODE_SIZE] =
            packets.try_into().map_err(|p: Vec<Point>| err(line, format!("expected 4 packets, found {}", p.len())))?;
        nodes.push(node);
    }
    FrCode::new(nodes)
}

/// The (14,4,7) zero-skip layout of the rotational SQS(8); packet 7 is ∞.
pub fn contiguous_sqs8_layout() -> Result<FrCode, FrError> {
    parse_layout(asset("sqs8-contiguous")?)
}

/// A (14,4,7) layout of an SQS(8) on packets 1..8 that needs skip cost 2.
pub fn baseline_sqs8_layout() -> Result<FrCode, FrError> {
    parse_layout(asset("sqs8-baseline")?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::{nested_boolean_sqs, nested_orbit};
    use crate::catalog::rotational_sqs8;
    use crate::design::NestedBlock;
    use crate::field::Gf2mField;

    #[test]
    fn skip_cost_values() {
        assert_eq!(skip_cost(&[2, 3], 4), Ok(0));
        assert_eq!(skip_cost(&[2, 4], 4), Ok(1));
        assert_eq!(skip_cost(&[1, 2, 3, 4], 4), Ok(0));
        assert_eq!(skip_cost(&[1, 4], 4), Ok(2));
        assert_eq!(skip_cost(&[3], 4), Ok(0));
        assert_eq!(skip_cost(&[], 4), Err(FrError::EmptyRead));
        assert!(skip_cost(&[3, 2], 4).is_err());
        assert!(skip_cost(&[0, 2], 4).is_err());
        assert!(skip_cost(&[2, 5], 4).is_err());
    }

    #[test]
    fn code_from_sqs8() {
        let code = to_fr_code(&rotational_sqs8()).unwrap();
        assert_eq!(code.params(), (14, 4, 7));
        assert_eq!(code.v(), 8);
        assert!(verify_zero_skip(&code).pass);
        let f = Gf2mField::new(3).unwrap();
        assert_eq!(to_fr_code(&nested_boolean_sqs(&f).unwrap()).unwrap().params(), (14, 4, 7));
    }

    #[test]
    fn code_from_orbit_m4() {
        let f = Gf2mField::new(4).unwrap();
        let d = nested_orbit(&f, 1).unwrap().into_design(&f);
        let code = to_fr_code(&d).unwrap();
        assert_eq!(code.params(), (60, 4, 15));
        let report = verify_zero_skip(&code);
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn quasi_uniform_is_rejected() {
        let d = crate::catalog::rotational_sqs16();
        assert_eq!(to_fr_code(&d), Err(FrError::NotCompletelyUniform(UniformityClass::CompletelyQuasiUniform)));
        // completely uniform but not a 2-design
        let d = NestedDesign::new(4, vec![NestedBlock::new([0, 1], [2, 3]).unwrap()]).unwrap();
        assert!(matches!(to_fr_code(&d), Err(FrError::NotCompletelyUniform(_))));
    }

    #[test]
    fn regularity_errors() {
        assert_eq!(FrCode::new(vec![]), Err(FrError::Empty));
        assert_eq!(FrCode::new(vec![[1, 2, 2, 3]]), Err(FrError::RepeatedPacket { node: 1, packet: 2 }));
        assert_eq!(
            FrCode::new(vec![[1, 2, 3, 4], [1, 2, 3, 5]]),
            Err(FrError::Irregular { packet: 4, count: 1, expected: 2 })
        );
    }

    #[test]
    fn contiguous_layout_repair() {
        let code = contiguous_sqs8_layout().unwrap();
        assert_eq!(code.params(), (14, 4, 7));
        let plan = plan_repair(&code, 1).unwrap();
        assert_eq!(plan.helpers.iter().map(|h| h.node).collect::<Vec<_>>(), vec![4, 11]);
        assert_eq!(plan.helpers[0].packets, vec![7, 3]);
        assert_eq!(plan.helpers[1].packets, vec![0, 1]);
        assert_eq!(plan.total_skip, 0);
        assert_eq!(plan.packets_recovered, BTreeSet::from([0, 1, 3, 7]));
        assert!(verify_zero_skip(&code).pass);
    }

    #[test]
    fn contiguous_layout_is_the_rotational_sqs8() {
        let code = contiguous_sqs8_layout().unwrap();
        let mut nested: Vec<NestedBlock> =
            code.nodes().iter().map(|n| NestedBlock::new([n[0], n[1]], [n[2], n[3]]).unwrap()).collect();
        nested.sort();
        let mut expected = rotational_sqs8().into_blocks();
        expected.sort();
        assert_eq!(nested, expected);
    }

    #[test]
    fn baseline_layout_repair() {
        let code = baseline_sqs8_layout().unwrap();
        assert_eq!(code.params(), (14, 4, 7));
        let plan = plan_repair(&code, 11).unwrap();
        assert_eq!(plan.helpers.iter().map(|h| h.node).collect::<Vec<_>>(), vec![1, 5]);
        assert_eq!(plan.total_skip, 2);
        assert_eq!(plan.locality(), 2);
        let report = verify_zero_skip(&code);
        assert!(!report.pass);
        assert_eq!(report.max_skip, 2);
        assert!(matches!(plan_repair(&code, 15), Err(FrError::NoSuchNode { node: 15, nodes: 14 })));
        assert!(plan_repair(&code, 0).is_err());
    }

    #[test]
    fn exact_copy_is_not_a_helper() {
        let code = FrCode::new(vec![[1, 2, 3, 4], [4, 3, 2, 1]]).unwrap();
        assert_eq!(plan_repair(&code, 1), Err(FrError::Irreparable(1)));
    }

    #[test]
    fn ratio() {
        assert_eq!(node_count_ratio(8).unwrap(), Ratio::from_integer(1));
        assert_eq!(node_count_ratio(32).unwrap(), Ratio::new(1, 5));
        for v in [10u64, 16, 32, 44, 50, 1000] {
            let r = node_count_ratio(v).unwrap();
            assert_eq!(r, Ratio::new(6, v - 2));
            assert!(r < Ratio::from_integer(1));
        }
        assert_eq!(node_count_ratio(7), Err(FrError::OrderTooSmall(7)));
    }

    #[test]
    fn layout_round_trip() {
        let code = to_fr_code(&rotational_sqs8()).unwrap();
        let text = write_layout(&code);
        assert_eq!(parse_layout(&text).unwrap(), code);
        assert!(matches!(parse_layout("2: 1,2,3,4\n"), Err(FrError::Layout { line: 1, .. })));
        assert!(matches!(parse_layout("# c\n1: 1,2,3\n"), Err(FrError::Layout { line: 2, .. })));
        assert!(matches!(parse_layout("1: 1,2,x,4\n"), Err(FrError::Layout { line: 1, .. })));
    }
}
