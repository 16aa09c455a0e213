//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit when any
//! criterion fails. Conditional pipeline steps whose ingredients are absent
//! are reported as skipped and do not fail their criterion.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use nrdsts::catalog::Catalog;
use nrdsts::cyclotomic::{build_cyclotomic, build_halfset_starter, build_k4, search_k4, search_starters};
use nrdsts::design::io::DesignFile;
use nrdsts::design::{
    is_duplicated_sts, verify_bibd, verify_near_resolution, verify_nr_star, verify_self_orthogonal, Design,
};
use nrdsts::ffield::FiniteField;
use nrdsts::frames::{fill_frame, inflate_frame, search_frame, Frame, FrameSearch};
use nrdsts::gdd::{affine_plane, verify_gdd, Gdd, GroupType};
use nrdsts::known::{halfset_97, multiplier_121, multiplier_91, K4_37_BASE, K4_37_TRANSLATES};
use nrdsts::latin::{mols_of_order, td_from_mols, truncate_td, Truncation};
use nrdsts::multiplier::{build_multiplier, search_cyclic};
use nrdsts::pipeline::{emit_base_class_listing, reproduce_field_table};
use nrdsts::recursions::{missing_for_gdd, nrdsts_from_gdd, nrdsts_inflate_fill};
use nrdsts::search::{Budget, SearchOutcome};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string().lines().next().unwrap_or("").to_string()
}

fn field_table() -> Outcome {
    let rows = reproduce_field_table();
    let failed: Vec<u32> = rows.iter().filter(|r| !r.passed()).map(|r| r.q).collect();
    ensure(failed.is_empty(), format!("failing q: {failed:?}"))?;
    Ok(format!("{}/{} rows verify", rows.len(), rows.len()))
}

/// Published rows for q = 103: block, shifted block, translate pair.
const BASE_ROWS_103: [([u32; 3], [u32; 3], [u32; 2]); 17] = [
    ([1, 4, 6], [21, 24, 26], [20, 83]),
    ([100, 91, 85], [40, 31, 25], [43, 60]),
    ([9, 36, 54], [86, 10, 28], [77, 26]),
    ([76, 98, 44], [51, 73, 19], [78, 25]),
    ([81, 15, 74], [53, 90, 46], [75, 28]),
    ([66, 58, 87], [47, 39, 68], [84, 19]),
    ([8, 32, 48], [65, 89, 2], [57, 46]),
    ([79, 7, 62], [11, 42, 97], [35, 68]),
    ([72, 82, 20], [70, 80, 18], [101, 2]),
    ([93, 63, 43], [99, 69, 49], [6, 97]),
    ([30, 17, 77], [12, 102, 59], [85, 18]),
    ([13, 52, 78], [67, 3, 29], [54, 49]),
    ([64, 50, 75], [5, 94, 16], [44, 59]),
    ([14, 56, 84], [88, 27, 55], [74, 29]),
    ([61, 38, 57], [45, 22, 41], [87, 16]),
    ([23, 92, 35], [71, 37, 83], [48, 55]),
    ([34, 33, 101], [96, 95, 60], [62, 41]),
];

fn base_rows_103() -> Outcome {
    type Key = ([u32; 3], [u32; 3], [u32; 2]);
    let norm = |(mut a, mut b, mut t): Key| {
        a.sort_unstable();
        b.sort_unstable();
        t.sort_unstable();
        (a, b, t)
    };
    let mut expected: BTreeMap<Key, u32> = BTreeMap::new();
    for r in BASE_ROWS_103 {
        *expected.entry(norm(r)).or_default() += 1;
    }
    let mut got: BTreeMap<Key, u32> = BTreeMap::new();
    for r in emit_base_class_listing(103).map_err(err)? {
        *got.entry(norm((r.block, r.shifted, [r.translate, r.negated]))).or_default() += 1;
    }
    ensure(got == expected, "row multisets differ")?;
    Ok("17 rows match as a multiset".into())
}

fn examples() -> Outcome {
    let hs = halfset_97().map_err(err)?;
    ensure(hs.inserted == 1 && hs.position == 0, format!("halfset completion {:?}", (hs.position, hs.inserted)))?;
    let (d, rc) = build_halfset_starter(97, &hs.starter).map_err(err)?;
    ensure(verify_nr_star(&d, &rc).passed(), "q = 97 halfset design fails")?;

    let (d, rc) = build_multiplier(&multiplier_91()).map_err(err)?;
    ensure(verify_nr_star(&d, &rc).passed(), "Z_91 design fails")?;

    let sel = multiplier_121().map_err(err)?;
    ensure(sel.dropped == 2 && sel.translates_as_given, format!("Z_121 selection drops {}", sel.dropped))?;
    let (d, rc) = build_multiplier(&sel.scheme).map_err(err)?;
    ensure(verify_nr_star(&d, &rc).passed(), "Z_121 design fails")?;

    let (d, rc) = build_k4(37, Some(2), K4_37_BASE, K4_37_TRANSLATES).map_err(err)?;
    ensure(d.k() == 4 && d.lambda() == 3 && verify_nr_star(&d, &rc).passed(), "q = 37 block-size-4 design fails")?;
    Ok("halfset 97 (16th element 1 at position 0), Z_91, Z_121 (drop block 2), k = 4 on F_37".into())
}

fn exhausted<T>(r: nrdsts::Result<SearchOutcome<T>>) -> bool {
    matches!(r, Ok(SearchOutcome::Exhausted))
}

fn negative_searches() -> Outcome {
    let t = Instant::now();
    ensure(
        exhausted(search_frame(&GroupType::uniform(2, 4), FrameSearch::Exhaustive, &mut Budget::unlimited())),
        "2^4 frame search did not exhaust",
    )?;
    ensure(exhausted(search_k4(61, &mut Budget::new(10_000_000_000))), "q = 61 k4 scan did not exhaust")?;
    ensure(exhausted(search_starters(7, &mut Budget::unlimited())), "q = 7 starter scan did not exhaust")?;
    for v in [7, 13] {
        ensure(exhausted(search_cyclic(v, &mut Budget::unlimited())), format!("v = {v} cyclic scan did not exhaust"))?;
    }
    Ok(format!("frame 2^4, k4 61, starters 7, cyclic 7 and 13 all exhausted in {:.1?}", t.elapsed()))
}

fn positive_searches() -> Outcome {
    for q in [103, 139] {
        let quads = search_starters(q, &mut Budget::new(1_000_000_000))
            .map_err(err)?
            .found()
            .ok_or(format!("no starter for q = {q}"))?;
        let (d, rc) = build_cyclotomic(q, None, &quads).map_err(err)?;
        ensure(verify_nr_star(&d, &rc).passed(), format!("q = {q} search result fails"))?;
    }
    for q in [37, 109] {
        let k = search_k4(q, &mut Budget::new(1_000_000_000))
            .map_err(err)?
            .found()
            .ok_or(format!("no k4 instance for q = {q}"))?;
        let (d, rc) = build_k4(q, None, k.base, k.translates).map_err(err)?;
        ensure(verify_nr_star(&d, &rc).passed(), format!("q = {q} k4 result fails"))?;
    }
    Ok("starters 103, 139 and k4 37, 109 found and verified".into())
}

fn latin_layer() -> Outcome {
    for n in [4, 5, 7, 8, 9] {
        let m = mols_of_order(n, 3).map_err(err)?;
        let orth = m[0].is_orthogonal_to(&m[1]) && m[0].is_orthogonal_to(&m[2]) && m[1].is_orthogonal_to(&m[2]);
        ensure(orth, format!("order {n} squares not orthogonal"))?;
    }
    let td = td_from_mols(&mols_of_order(8, 7).map_err(err)?).map_err(err)?;
    for y in 3..=5 {
        let g = truncate_td(&td, Truncation::Two { w: 0, y }).map_err(err)?;
        ensure(verify_gdd(&g).passed(), format!("truncation y = {y} fails"))?;
        ensure(
            g.group_type() == GroupType::from_sizes([8, 8, 8, 8, 8, 8, 8, y]),
            format!("truncation y = {y} has type {}", g.group_type()),
        )?;
        ensure(g.block_sizes().iter().all(|k| (7..=9).contains(k)), "block sizes outside {7,8,9}")?;
    }
    Ok("3 MOLS of orders 4, 5, 7, 8, 9; TD(9,8) truncations 8^7 3^1, 8^7 4^1, 8^7 5^1".into())
}

/// Pair counts by brute force over all pairs.
fn naive_pair_balance(d: &Design) -> bool {
    (0..d.v()).all(|a| {
        (a + 1..d.v()).all(|b| {
            d.blocks().iter().filter(|blk| blk.contains(&a) && blk.contains(&b)).count() == d.lambda() as usize
        })
    })
}

fn random_design(rng: &mut ChaCha8Rng) -> Design {
    let (v, k, lambda, mut blocks): (u32, u32, u32, Vec<Vec<u32>>) = match rng.gen_range(0..3) {
        0 => {
            let v = rng.gen_range(3..=20);
            let blocks = (0..v).flat_map(|a| (a + 1..v).map(move |b| vec![a, b])).collect();
            (v, 2, 1, blocks)
        }
        1 => {
            let q = [2, 3, 4][rng.gen_range(0..3)];
            let g = affine_plane(&FiniteField::of_order(q).unwrap());
            (q * q, q, 1, g.blocks().to_vec())
        }
        _ => {
            let v = rng.gen_range(4..=20);
            let b = rng.gen_range(1..=40);
            let blocks = (0..b)
                .map(|_| {
                    let mut blk = Vec::new();
                    while blk.len() < 3 {
                        let p = rng.gen_range(0..v);
                        if !blk.contains(&p) {
                            blk.push(p);
                        }
                    }
                    blk
                })
                .collect();
            (v, 3, rng.gen_range(1..=2), blocks)
        }
    };
    if rng.gen_bool(0.4) && !blocks.is_empty() {
        let i = rng.gen_range(0..blocks.len());
        blocks.remove(i);
    }
    Design::new(v, k, lambda, blocks).unwrap()
}

fn properties(frame_2_13: &Frame) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut passes = 0;
    for i in 0..100 {
        let d = random_design(&mut rng);
        let ours = verify_bibd(&d).passed();
        ensure(ours == naive_pair_balance(&d), format!("verifier disagrees with pair count on design {i}"))?;
        passes += ours as u32;
    }

    for n in [4, 5, 9] {
        let big = inflate_frame(frame_2_13, &mols_of_order(n, 3).map_err(err)?).map_err(err)?;
        ensure(
            big.side() == 13 * n && big.frame_type() == GroupType::uniform(2 * n, 13),
            format!("inflation by {n} has side {} type {}", big.side(), big.frame_type()),
        )?;
        ensure(Frame::load(&big.to_text()).map_err(err)? == big, "frame round trip")?;
    }

    let filler = nrdsts::known::build_own(19).unwrap().map_err(err)?;
    let big = inflate_frame(frame_2_13, &mols_of_order(9, 3).map_err(err)?).map_err(err)?;
    let (d, rc) = fill_frame(&big, &vec![filler.clone(); 13]).map_err(err)?;
    ensure(rc.len() as u32 == big.v() + 1, "fill class count")?;
    let mut inf: Vec<u32> = rc.classes.last().unwrap().iter().flat_map(|&l| d.block(l).to_vec()).collect();
    inf.sort_unstable();
    ensure(inf == (0..big.v()).collect::<Vec<_>>(), "class missing the new point does not cover the frame")?;

    let text = DesignFile::from_design(&d, Some(&rc)).with_self_orthogonal(true).to_text();
    let back = DesignFile::parse(&text).map_err(err)?;
    ensure(back.to_text() == text, "design round trip")?;
    let back_design = back.to_design().map_err(err)?;
    ensure(verify_nr_star(&back_design, back.classes.as_ref().unwrap()).passed(), "re-read design fails")?;
    let g = frame_2_13.to_gdd();
    let gtext = g.to_file().to_text();
    ensure(Gdd::from_file(&DesignFile::parse(&gtext).map_err(err)?).map_err(err)? == g, "GDD round trip")?;
    Ok(format!("100 random designs agree ({passes} BIBDs); inflation, fill and round trips hold"))
}

fn conditional_pipelines(catalog: &mut Catalog, frame_2_13: &Frame) -> Outcome {
    let mut notes = Vec::new();

    // 18^8 frame filled with NR*DSTS(19).
    match catalog.frame(&GroupType::uniform(18, 8)).cloned() {
        None => notes.push("18^8 fill skipped (no 18^8 frame in catalog)".to_string()),
        Some(f) => {
            let filler = catalog.nrdsts(19).ok_or("no NR*DSTS(19)")?;
            let (d, rc) = fill_frame(&f, &vec![filler; 8]).map_err(err)?;
            ensure(d.v() == 145 && verify_nr_star(&d, &rc).passed(), "NR*DSTS(145) fails")?;
            notes.push("NR*DSTS(145) from 18^8".into());
        }
    }

    // 2^13 frame, inflated by 9, filled with NR*DSTS(19).
    let filler = catalog.nrdsts(19).ok_or("no NR*DSTS(19)")?;
    let (d, rc) = nrdsts_inflate_fill(frame_2_13, &mols_of_order(9, 3).map_err(err)?, &filler).map_err(err)?;
    ensure(d.v() == 235, format!("inflate-fill gave {} points", d.v()))?;
    ensure(is_duplicated_sts(&d).passed(), "235: not a DSTS")?;
    ensure(verify_near_resolution(&d, &rc).passed(), "235: not near-resolvable")?;
    ensure(verify_self_orthogonal(&d, &rc).passed(), "235: not self-orthogonal")?;
    notes.push("NR*DSTS(235) from 2^13".into());

    // {7,8}-GDD of type 7^7 4^1 with 6^7 and 6^8 frames.
    let td = td_from_mols(&mols_of_order(7, 6).map_err(err)?).map_err(err)?;
    let g = truncate_td(&td, Truncation::One { w: 4 }).map_err(err)?;
    ensure(g.group_type() == GroupType::from_sizes([7, 7, 7, 7, 7, 7, 7, 4]), "7^7 4^1 truncation type")?;
    let missing = missing_for_gdd(&g, catalog);
    if missing.is_empty() {
        let (d, rc) = nrdsts_from_gdd(&g, catalog).map_err(err)?;
        ensure(d.v() == 319 && verify_nr_star(&d, &rc).passed(), "NR*DSTS(319) fails")?;
        notes.push("NR*DSTS(319) from 7^7 4^1".into());
    } else {
        notes.push(format!("319 skipped (missing {})", missing.join(", ")));
    }
    Ok(notes.join("; "))
}

fn main() {
    let catalog_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../catalog");
    let mut catalog = Catalog::load_dir(&catalog_dir).unwrap_or_else(|e| {
        println!("note: catalog not loaded ({e}); conditional steps use searched ingredients only");
        Catalog::new()
    });
    let frame_2_13 = match catalog.frame(&GroupType::uniform(2, 13)) {
        Some(f) => f.clone(),
        None => search_frame(&GroupType::uniform(2, 13), FrameSearch::Randomized { seed: 17 }, &mut Budget::new(50_000_000))
            .ok()
            .and_then(|o| o.found())
            .expect("2^13 frame search"),
    };

    let criteria: Vec<(&str, Box<dyn FnOnce() -> Outcome + '_>)> = vec![
        ("1 field constructions", Box::new(field_table)),
        ("2 base-class rows for q = 103", Box::new(base_rows_103)),
        ("3 worked examples", Box::new(examples)),
        ("4 negative searches", Box::new(negative_searches)),
        ("5 positive searches", Box::new(positive_searches)),
        ("6 Latin squares and truncations", Box::new(latin_layer)),
        ("7 property suites", Box::new(|| properties(&frame_2_13))),
        ("8 conditional pipelines", Box::new(|| conditional_pipelines(&mut catalog, &frame_2_13))),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let t = Instant::now();
        match run() {
            Ok(note) => println!("PASS criterion {name}: {note} [{:.1?}]", t.elapsed()),
            Err(e) => {
                failures += 1;
                println!("FAIL criterion {name}: {e} [{:.1?}]", t.elapsed());
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
