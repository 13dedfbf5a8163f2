//! Nested designs on the Boolean SQS(2^m).
//!
//! The Boolean SQS has as blocks the 4-subsets of GF(2^m) summing to zero.
//! The affine group x ↦ α^k(x + t) splits them into orbits: 2-(2^m,4,3)
//! designs generated by B_j = {0, 1, α^j, α^j + 1}, plus, for even m, one
//! 2-(2^m,4,1) design generated by the subfield GF(4). Splitting the base
//! block as {0, 1 | α^j, α^j + 1} and taking the orbit of the nested block
//! puts every pair of points in exactly one nested block.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::design::{assemble_nested_sqs, AssemblyError, Block, NestedBlock, NestedDesign, Point};
use crate::field::Gf2mField;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BooleanError {
    #[error("the Boolean construction needs m >= 3, got m = {0}")]
    DegreeTooSmall(u32),
    #[error("exponent j = {j} is outside 1..={max}")]
    ExponentOutOfRange { j: u32, max: u32 },
    #[error("B_{j} generates the lambda=1 orbit; use partition_lambda1 for it")]
    ExceptionalOrbit { j: u32 },
    #[error("orbit has lambda = {0}; expected the lambda=1 orbit")]
    NotLambdaOne(u32),
    #[error("block {0:?} does not sum to zero")]
    NonZeroSum(Block),
    #[error("label {label} is not an element of GF({order})")]
    NotFieldElement { label: Point, order: u32 },
    #[error("design has v = {found}, field has order {expected}")]
    OrderMismatch { expected: u32, found: u32 },
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
}

/// One orbit of the Boolean blocks under x ↦ α^k(x + t).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineOrbit {
    /// Order of the field, 2^m.
    pub v: u32,
    /// {0, 1, α^j, α^l} with α^l = α^j + 1.
    pub base_block: Block,
    pub j: u32,
    pub l: u32,
    pub lambda: u32,
    /// Sorted, without repeats.
    pub blocks: Vec<Block>,
}

/// The orbit of {0, 1 | α^j, α^l} under x ↦ α^k(x + t).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedOrbit {
    pub base: NestedBlock,
    pub j: u32,
    /// Sorted, without repeats.
    pub blocks: Vec<NestedBlock>,
}

impl NestedOrbit {
    pub fn into_design(self, f: &Gf2mField) -> NestedDesign {
        NestedDesign::new(f.order(), self.blocks)
            .expect("orbit labels are field elements")
            .with_point_names(field_point_names(f))
    }
}

fn require_degree(f: &Gf2mField) -> Result<(), BooleanError> {
    if f.m() < 3 {
        Err(BooleanError::DegreeTooSmall(f.m()))
    } else {
        Ok(())
    }
}

/// Display names "0", "1", "a^k" for every field element.
pub fn field_point_names(f: &Gf2mField) -> BTreeMap<Point, String> {
    (0..f.order()).map(|x| (x, f.element_name(x))).collect()
}

/// All 4-subsets of GF(2^m) with zero sum, sorted.
pub fn boolean_blocks(f: &Gf2mField) -> Result<Vec<Block>, BooleanError> {
    require_degree(f)?;
    let q = f.order();
    let mut blocks = Vec::with_capacity(q as usize * (q - 1) as usize * (q - 2) as usize / 24);
    for x in 0..q {
        for y in x + 1..q {
            for z in y + 1..q {
                let w = x ^ y ^ z;
                if w > z {
                    blocks.push(Block::from_distinct([x, y, z, w]));
                }
            }
        }
    }
    Ok(blocks)
}

/// True when B_j generates the λ = 1 orbit: m even and
/// {j, l} = {(2^m − 1)/3, 2(2^m − 1)/3}.
pub fn is_exceptional(f: &Gf2mField, j: u32) -> bool {
    let n = f.multiplicative_order();
    f.m() % 2 == 0 && (j == n / 3 || j == 2 * n / 3)
}

fn check_exponent(f: &Gf2mField, j: u32) -> Result<(), BooleanError> {
    let max = f.multiplicative_order() - 1;
    if (1..=max).contains(&j) {
        Ok(())
    } else {
        Err(BooleanError::ExponentOutOfRange { j, max })
    }
}

/// (α^j, α^l) with α^l = α^j + 1.
fn base_points(f: &Gf2mField, j: u32) -> (u32, u32, u32) {
    let x = f.exp(j as u64);
    let y = x ^ 1;
    (x, y, f.log_unchecked(y))
}

/// Images of `base` under every x ↦ α^k(x + t), mapped through `make`,
/// sorted and deduplicated.
fn affine_images<T, F>(f: &Gf2mField, base: [u32; 4], make: F) -> Vec<T>
where
    T: Ord + Send,
    F: Fn([u32; 4]) -> T + Sync,
{
    let n = f.multiplicative_order();
    let mut images: Vec<T> = (0..f.order())
        .into_par_iter()
        .flat_map_iter(|t| {
            let shifted = base.map(|x| x ^ t);
            let logs = shifted.map(|x| if x == 0 { u32::MAX } else { f.log_unchecked(x) });
            let make = &make;
            (0..n).map(move |k| {
                make(logs.map(|lg| {
                    if lg == u32::MAX {
                        0
                    } else {
                        let e = lg + k;
                        f.exp((if e >= n { e - n } else { e }) as u64)
                    }
                }))
            })
        })
        .collect();
    images.par_sort_unstable();
    images.dedup();
    images
}

/// Split the Boolean blocks into affine orbits, in order of the smallest
/// exponent j whose base block B_j lies in the orbit.
pub fn affine_orbit_decomposition(f: &Gf2mField) -> Result<Vec<AffineOrbit>, BooleanError> {
    require_degree(f)?;
    let n = f.multiplicative_order();
    let q = f.order() as u64;
    let mut seen = vec![false; n as usize];
    let mut orbits = Vec::new();
    for j in 1..n {
        if seen[j as usize] {
            continue;
        }
        let (x, y, l) = base_points(f, j);
        let blocks = affine_images(f, [0, 1, x, y], Block::from_distinct);
        // blocks through 0 and 1 are exactly the B_j' in this orbit
        for b in blocks.iter().take_while(|b| b.points()[0] == 0) {
            let p = b.points();
            if p[1] == 1 {
                seen[f.log_unchecked(p[2]) as usize] = true;
                seen[f.log_unchecked(p[3]) as usize] = true;
            }
        }
        let size = blocks.len() as u64;
        let lambda = (12 * size / (q * (q - 1))) as u32;
        debug_assert_eq!(12 * size % (q * (q - 1)), 0);
        orbits.push(AffineOrbit { v: f.order(), base_block: Block::from_distinct([0, 1, x, y]), j, l, lambda, blocks });
    }
    Ok(orbits)
}

/// The completely uniform nested orbit of {0, 1 | α^j, α^l}.
pub fn nested_orbit(f: &Gf2mField, j: u32) -> Result<NestedOrbit, BooleanError> {
    require_degree(f)?;
    check_exponent(f, j)?;
    if is_exceptional(f, j) {
        return Err(BooleanError::ExceptionalOrbit { j });
    }
    let (x, y, _) = base_points(f, j);
    let blocks = affine_images(f, [0, 1, x, y], |[a, b, c, d]| NestedBlock::from_distinct([a, b], [c, d]));
    Ok(NestedOrbit { base: NestedBlock::from_distinct([0, 1], [x, y]), j, blocks })
}

/// Split every block of the λ = 1 orbit as {p1, p2 | p3, p4} by label order.
pub fn partition_lambda1(orbit: &AffineOrbit) -> Result<NestedDesign, BooleanError> {
    if orbit.lambda != 1 {
        return Err(BooleanError::NotLambdaOne(orbit.lambda));
    }
    let blocks = orbit
        .blocks
        .iter()
        .map(|b| {
            let [p1, p2, p3, p4] = *b.points();
            NestedBlock::from_distinct([p1, p2], [p3, p4])
        })
        .collect();
    NestedDesign::new(orbit.v, blocks)
        .map(NestedDesign::canonicalize)
        .map_err(|_| BooleanError::NotFieldElement { label: orbit.base_block.max_label(), order: orbit.v })
}

/// The nested SQS(2^m) on field labels: completely uniform for odd m,
/// completely quasi-uniform for even m.
pub fn nested_boolean_sqs(f: &Gf2mField) -> Result<NestedDesign, BooleanError> {
    let orbits = affine_orbit_decomposition(f)?;
    let v = f.order();
    let exponents: Vec<u32> = orbits.iter().filter(|o| o.lambda == 3).map(|o| o.j).collect();
    let lambda1 = orbits.into_iter().find(|o| o.lambda == 1);
    let lambda1 = lambda1.map(|o| partition_lambda1(&o)).transpose()?;
    let parts = exponents
        .into_par_iter()
        .map(|j| nested_orbit(f, j).map(|o| NestedDesign::new(v, o.blocks).expect("field labels")))
        .collect::<Result<Vec<_>, _>>()?;
    let design = assemble_nested_sqs(&parts, lambda1.as_ref())?;
    Ok(design.with_point_names(field_point_names(f)))
}

/// The distinct translates {b + t}; a parallel class of 2^(m−2) blocks.
pub fn parallel_class(f: &Gf2mField, b: &Block) -> Result<Vec<Block>, BooleanError> {
    if let Some(&label) = b.points().iter().find(|&&p| !f.contains(p)) {
        return Err(BooleanError::NotFieldElement { label, order: f.order() });
    }
    if b.points().iter().fold(0, |acc, &p| acc ^ p) != 0 {
        return Err(BooleanError::NonZeroSum(*b));
    }
    let mut class: Vec<Block> = (0..f.order()).map(|t| Block::from_distinct(b.points().map(|p| p ^ t))).collect();
    class.sort_unstable();
    class.dedup();
    Ok(class)
}

/// Relabel a field-form design in rotational form: 0 ↦ ∞ (label 2^m − 1)
/// and x ↦ log_α x. Multiplication by α^k becomes translation by k.
pub fn to_rotational(f: &Gf2mField, d: &NestedDesign) -> Result<NestedDesign, BooleanError> {
    if d.v() != f.order() {
        return Err(BooleanError::OrderMismatch { expected: f.order(), found: d.v() });
    }
    let inf = f.multiplicative_order();
    let relabel = |x: Point| if x == 0 { inf } else { f.log_unchecked(x) };
    let blocks = d
        .blocks()
        .iter()
        .map(|nb| {
            let [a, b] = nb.first();
            let [c, e] = nb.second();
            NestedBlock::from_distinct([relabel(a), relabel(b)], [relabel(c), relabel(e)])
        })
        .collect();
    let names = (0..inf).map(|k| (k, k.to_string())).chain([(inf, "inf".to_string())]).collect();
    Ok(NestedDesign::new(d.v(), blocks).expect("relabelling is a bijection").canonicalize().with_point_names(names))
}
