//! Boolean constructions checked against brute-force oracles that share no
//! code with the library beyond the modulus table.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use nested_sqs::field::default_modulus;
use nested_sqs::fr::verify_zero_skip;
use nested_sqs::*;

/// Shift-and-add multiplication modulo `poly`.
fn gf_mul(mut a: u32, mut b: u32, m: u32, poly: u32) -> u32 {
    let mut acc = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> m & 1 == 1 {
            a ^= poly;
        }
    }
    acc
}

fn triple_counts(blocks: &[[u32; 4]]) -> HashMap<[u32; 3], u32> {
    let mut counts = HashMap::new();
    for b in blocks {
        let mut b = *b;
        b.sort_unstable();
        for skip in 0..4 {
            let t: Vec<u32> = (0..4).filter(|&i| i != skip).map(|i| b[i]).collect();
            *counts.entry([t[0], t[1], t[2]]).or_insert(0) += 1;
        }
    }
    counts
}

fn is_sqs(blocks: &[[u32; 4]], v: u32) -> bool {
    let counts = triple_counts(blocks);
    let n = v as usize;
    counts.len() == n * (n - 1) * (n - 2) / 6 && counts.values().all(|&c| c == 1)
}

fn raw(d: &NestedDesign) -> Vec<[u32; 4]> {
    d.underlying_blocks().iter().map(|b| *b.points()).collect()
}

#[test]
fn boolean_blocks_are_the_zero_sum_quadruples() {
    for m in 3..=5 {
        let f = Gf2mField::new(m).unwrap();
        let q = 1u32 << m;
        let mut oracle = Vec::new();
        for a in 0..q {
            for b in a + 1..q {
                for c in b + 1..q {
                    for d in c + 1..q {
                        if a ^ b ^ c ^ d == 0 {
                            oracle.push([a, b, c, d]);
                        }
                    }
                }
            }
        }
        let ours: Vec<[u32; 4]> = boolean_blocks(&f).unwrap().iter().map(|b| *b.points()).collect();
        assert_eq!(ours, oracle);
        assert!(is_sqs(&ours, q));
    }
}

#[test]
fn nested_sqs_passes_a_naive_triple_scan() {
    for m in 3..=6 {
        let f = Gf2mField::new(m).unwrap();
        let d = nested_boolean_sqs(&f).unwrap();
        assert!(is_sqs(&raw(&d), 1 << m), "m = {m}");
    }
}

#[test]
fn orbit_sizes_follow_the_stabilizer_orders() {
    for m in 3..=8u32 {
        let f = Gf2mField::new(m).unwrap();
        let q = 1u64 << m;
        let group = q * (q - 1);
        let orbits = affine_orbit_decomposition(&f).unwrap();
        for o in &orbits {
            let stab = if o.lambda == 3 { 4 } else { 12 };
            assert_eq!(o.blocks.len() as u64, group / stab, "m = {m}, j = {}", o.j);
        }
        let total: usize = orbits.iter().map(|o| o.blocks.len()).sum();
        assert_eq!(total as u64, q * (q - 1) * (q - 2) / 24);
    }
}

#[test]
fn nested_orbit_matches_direct_enumeration() {
    for m in 3..=5u32 {
        let poly = default_modulus(m).unwrap();
        let q = 1u32 << m;
        let n = q - 1;
        let f = Gf2mField::new(m).unwrap();
        // α = x, so α^j is found by repeated multiplication
        let mut pow = vec![1u32];
        for _ in 1..n {
            pow.push(gf_mul(*pow.last().unwrap(), 2, m, poly));
        }
        for j in 1..n {
            if m % 2 == 0 && (j == n / 3 || j == 2 * n / 3) {
                continue;
            }
            let x = pow[j as usize];
            let base = [[0, 1], [x, x ^ 1]];
            let mut oracle = BTreeSet::new();
            for t in 0..q {
                for &s in &pow {
                    let img = base.map(|pr| pr.map(|p| gf_mul(p ^ t, s, m, poly)));
                    oracle.insert(NestedBlock::new(img[0], img[1]).unwrap());
                }
            }
            let ours = nested_orbit(&f, j).unwrap().blocks;
            assert_eq!(ours, oracle.into_iter().collect::<Vec<_>>(), "m = {m}, j = {j}");
        }
    }
}

#[test]
fn nested_orbits_are_completely_uniform_two_designs() {
    for m in 3..=6u32 {
        let f = Gf2mField::new(m).unwrap();
        let q = 1u64 << m;
        let d = nested_orbit(&f, 1).unwrap().into_design(&f);
        assert_eq!(d.len() as u64, (q / 4) * (q - 1));
        let r = check_t_design(&d.underlying_blocks(), d.v(), 2, Some(3)).unwrap();
        assert!(r.pass);
        let c = d.classify();
        assert_eq!(c.class, UniformityClass::CompletelyUniform);
        assert_eq!(c.histogram, BTreeMap::from([(1, q * (q - 1) / 2)]));
    }
}

#[test]
fn exponents_in_one_orbit_give_the_three_nestings() {
    // The six exponents whose B_j lie in a λ = 3 orbit pair up as {j, l}
    // with α^l = α^j + 1; each pair yields the same nested orbit and the
    // three pairs yield the three ways of splitting the blocks.
    for m in 3..=6u32 {
        let f = Gf2mField::new(m).unwrap();
        let n = f.multiplicative_order();
        for o in affine_orbit_decomposition(&f).unwrap().iter().filter(|o| o.lambda == 3) {
            let js: Vec<u32> = (1..n)
                .filter(|&j| {
                    let x = f.exp(j as u64);
                    o.blocks.binary_search(&Block::new([0, 1, x, x ^ 1]).unwrap()).is_ok()
                })
                .collect();
            assert_eq!(js.len(), 6);
            let mut by_orbit: BTreeMap<Vec<NestedBlock>, Vec<u32>> = BTreeMap::new();
            for &j in &js {
                by_orbit.entry(nested_orbit(&f, j).unwrap().blocks).or_default().push(j);
            }
            assert_eq!(by_orbit.len(), 3);
            for group in by_orbit.values() {
                let (x, y) = (f.exp(group[0] as u64), f.exp(group[1] as u64));
                assert_eq!(group.len(), 2);
                assert_eq!(x ^ 1, y);
            }
            let flats: BTreeSet<Vec<Block>> = by_orbit
                .keys()
                .map(|bs| {
                    let mut v: Vec<Block> = bs.iter().map(NestedBlock::flatten).collect();
                    v.sort();
                    v
                })
                .collect();
            assert_eq!(flats.len(), 1);
        }
    }
}

#[test]
fn zero_skip_codes_from_orbits() {
    for m in 3..=6u32 {
        let f = Gf2mField::new(m).unwrap();
        let code = to_fr_code(&nested_orbit(&f, 1).unwrap().into_design(&f)).unwrap();
        let q = 1usize << m;
        assert_eq!(code.params(), (q / 4 * (q - 1), 4, q - 1));
        let report = verify_zero_skip(&code);
        assert!(report.pass, "m = {m}: {report:?}");
    }
}

#[test]
fn rotational_form_is_a_relabelling() {
    // odd m only: for even m the λ = 1 part is split by label order, which
    // multiplication does not preserve
    for m in [3u32, 5, 7] {
        let f = Gf2mField::new(m).unwrap();
        let d = nested_boolean_sqs(&f).unwrap();
        let r = to_rotational(&f, &d).unwrap();
        assert_eq!(r.classify().histogram, d.classify().histogram);
        assert!(is_sqs(&raw(&r), 1 << m));
        // multiplication by α became translation by 1 on the finite labels
        let n = f.multiplicative_order();
        let shifted: BTreeSet<NestedBlock> = r
            .blocks()
            .iter()
            .map(|nb| nb.map(|p| if p == n { n } else { (p + 1) % n }).unwrap())
            .collect();
        assert_eq!(shifted, r.blocks().iter().copied().collect());
    }
}
