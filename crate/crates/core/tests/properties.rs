//! Property suites: the pair-balance verifier against a naive oracle,
//! relabeling invariance, PBD point deletion counts and text round trips.

use std::sync::OnceLock;

use nrdsts::design::io::DesignFile;
use nrdsts::design::{verify_bibd, verify_nr_star, Design, ResolutionClasses};
use nrdsts::ffield::FiniteField;
use nrdsts::frames::{fill_frame, inflate_frame, search_frame, Frame, FrameSearch};
use nrdsts::gdd::{affine_plane, pbd_delete_point, verify_gdd, Gdd, GroupType};
use nrdsts::known::build_own;
use nrdsts::latin::mols_of_order;
use nrdsts::search::Budget;
use proptest::prelude::*;

/// Counts, for every pair, the blocks containing both points.
fn naive_is_bibd(v: u32, k: u32, lambda: u32, blocks: &[Vec<u32>]) -> bool {
    if blocks.iter().any(|b| b.len() != k as usize) {
        return false;
    }
    for a in 0..v {
        for b in a + 1..v {
            let n = blocks.iter().filter(|blk| blk.contains(&a) && blk.contains(&b)).count();
            if n != lambda as usize {
                return false;
            }
        }
    }
    true
}

fn k_subsets(v: u32, k: u32) -> Vec<Vec<u32>> {
    fn go(start: u32, v: u32, k: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k as usize {
            out.push(cur.clone());
            return;
        }
        for p in start..v {
            cur.push(p);
            go(p + 1, v, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, v, k, &mut Vec::new(), &mut out);
    out
}

fn binomial(n: u32, k: u32) -> u32 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64) as u32
}

/// A design on at most 20 points: a genuine BIBD (complete design, Fano
/// plane or an affine plane) that is then possibly damaged.
fn design_strategy() -> impl Strategy<Value = (u32, u32, u32, Vec<Vec<u32>>)> {
    let base = prop_oneof![
        (3u32..=9, 2u32..=3).prop_map(|(v, k)| {
            let k = k.min(v - 1);
            (v, k, binomial(v - 2, k - 2), k_subsets(v, k))
        }),
        (12u32..=20).prop_map(|v| (v, 2, 1, k_subsets(v, 2))),
        Just((7, 3, 1, vec![
            vec![0, 1, 3], vec![1, 2, 4], vec![2, 3, 5], vec![3, 4, 6],
            vec![0, 4, 5], vec![1, 5, 6], vec![0, 2, 6],
        ])),
        (0usize..3).prop_map(|i| {
            let q = [2, 3, 4][i];
            let g = affine_plane(&FiniteField::of_order(q).unwrap());
            (q * q, q, 1, g.blocks().to_vec())
        }),
    ];
    (base, 0u8..4, any::<u64>()).prop_map(|((v, k, lambda, mut blocks), damage, salt)| {
        let pick = |m: usize| (salt as usize) % m.max(1);
        match damage {
            // Drop a block.
            1 if !blocks.is_empty() => {
                let i = pick(blocks.len());
                blocks.remove(i);
            }
            // Duplicate a block.
            2 if !blocks.is_empty() => {
                let b = blocks[pick(blocks.len())].clone();
                blocks.push(b);
            }
            // Move one point of one block to a point it lacks.
            3 if !blocks.is_empty() => {
                let i = pick(blocks.len());
                if let Some(p) = (0..v).find(|p| !blocks[i].contains(p)) {
                    let j = (salt >> 16) as usize % blocks[i].len();
                    blocks[i][j] = p;
                }
            }
            _ => {}
        }
        (v, k, lambda, blocks)
    })
}

fn nr19() -> &'static (Design, ResolutionClasses) {
    static D: OnceLock<(Design, ResolutionClasses)> = OnceLock::new();
    D.get_or_init(|| build_own(19).unwrap().unwrap())
}

fn frame_2_13() -> &'static Frame {
    static F: OnceLock<Frame> = OnceLock::new();
    F.get_or_init(|| {
        search_frame(&GroupType::uniform(2, 13), FrameSearch::Randomized { seed: 17 }, &mut Budget::new(50_000_000))
            .unwrap()
            .found()
            .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bibd_verifier_agrees_with_pair_count((v, k, lambda, blocks) in design_strategy()) {
        let d = Design::new(v, k, lambda, blocks.clone()).unwrap();
        prop_assert_eq!(verify_bibd(&d).passed(), naive_is_bibd(v, k, lambda, &blocks));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn relabeling_preserves_nr_star(perm in Just((0..19u32).collect::<Vec<_>>()).prop_shuffle()) {
        let (d, rc) = nr19();
        let r = d.relabeled(&perm).unwrap();
        let rc2 = ResolutionClasses::near_resolvable(&r, rc.classes.clone());
        prop_assert!(verify_nr_star(&r, &rc2).passed());
        for (m, m2) in rc.missing.iter().zip(&rc2.missing) {
            prop_assert_eq!(m.map(|p| perm[p as usize]), *m2);
        }
    }

    #[test]
    fn design_file_round_trip((v, k, lambda, blocks) in design_strategy(), classes in any::<bool>()) {
        let d = Design::new(v, k, lambda, blocks).unwrap();
        let f = if classes {
            let (d, rc) = nr19();
            DesignFile::from_design(d, Some(rc)).with_self_orthogonal(true)
        } else {
            DesignFile::from_design(&d, None)
        };
        let text = f.to_text();
        let back = DesignFile::parse(&text).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_text(), text);
    }

    #[test]
    fn pbd_deletion_counts(i in 0usize..4, p in 0u32..64) {
        let q = [2u32, 3, 4, 7][i];
        let pbd = affine_plane(&FiniteField::of_order(q).unwrap());
        let p = p % pbd.v();
        let through = pbd.blocks().iter().filter(|b| b.contains(&p)).count();
        let g = pbd_delete_point(&pbd, p).unwrap();
        prop_assert_eq!(g.groups().len(), through);
        prop_assert_eq!(g.blocks().len(), pbd.blocks().len() - through);
        prop_assert!(verify_gdd(&g).passed());
        let text = g.to_file().to_text();
        prop_assert_eq!(Gdd::from_file(&DesignFile::parse(&text).unwrap()).unwrap(), g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(5))]

    #[test]
    fn inflation_arithmetic(i in 0usize..5) {
        let n = [4u32, 5, 7, 8, 9][i];
        let f = frame_2_13();
        let big = inflate_frame(f, &mols_of_order(n, 3).unwrap()).unwrap();
        prop_assert_eq!(big.side(), f.side() * n);
        prop_assert_eq!(big.frame_type(), GroupType::uniform(2 * n, 13));
        prop_assert_eq!(big.cells().len(), f.cells().len() * (n * n) as usize);
        let text = big.to_text();
        prop_assert_eq!(Frame::load(&text).unwrap(), big);
    }
}

#[test]
fn fill_class_count_and_infinity_class() {
    let f = inflate_frame(frame_2_13(), &mols_of_order(9, 3).unwrap()).unwrap();
    let (d, rc) = fill_frame(&f, &vec![nr19().clone(); 13]).unwrap();
    assert_eq!(rc.len() as u32, f.v() + 1);
    let inf = rc.classes.last().unwrap();
    let mut covered: Vec<u32> = inf.iter().flat_map(|&l| d.block(l).to_vec()).collect();
    covered.sort_unstable();
    assert_eq!(covered, (0..f.v()).collect::<Vec<_>>());
}
