//! Additive development of a base class over `Z_v`.

use crate::design::{verify_nr_star, Design, Point, ResolutionClasses};
use crate::report::{VerificationReport, Witness};
use crate::Result;

/// Checks that the base class blocks cover all residues but one exactly once.
/// The uncovered residue is usually 0 but need not be.
pub fn verify_base_class(v: u32, base: &[Vec<Point>]) -> VerificationReport {
    let mut report = VerificationReport::new();
    let mut seen = vec![None; v as usize];
    let mut bad = None;
    'outer: for (i, b) in base.iter().enumerate() {
        for &p in b {
            if p >= v {
                bad = Some((Witness::Block(i), format!("point {p} out of range")));
                break 'outer;
            }
            if let Some(prev) = seen[p as usize].replace(i) {
                bad = Some((Witness::Point(p), format!("covered by base blocks {prev} and {i}")));
                break 'outer;
            }
        }
    }
    if bad.is_none() {
        let uncovered: Vec<Point> = (0..v).filter(|&p| seen[p as usize].is_none()).collect();
        if uncovered.len() != 1 {
            bad = Some((
                Witness::Text(format!("{uncovered:?}")),
                format!("{} points uncovered, expected 1", uncovered.len()),
            ));
        }
    }
    report.record("base_class_partition", bad);
    report
}

/// Class `a` is the base class shifted by `a`, so it misses `m + a` where the
/// base class misses `m`. Labels
/// run class by class. The output is checked with all NR* oracles.
pub fn develop_base_class(
    v: u32,
    k: u32,
    lambda: u32,
    base: &[Vec<Point>],
) -> Result<(Design, ResolutionClasses)> {
    verify_base_class(v, base).into_result("base class")?;
    let per = base.len();
    let blocks = (0..v)
        .flat_map(|a| base.iter().map(move |b| b.iter().map(|&p| (p + a) % v).collect()))
        .collect();
    let d = Design::new(v, k, lambda, blocks)?;
    let classes = (0..v as usize).map(|a| (a * per..(a + 1) * per).collect()).collect();
    let rc = ResolutionClasses::near_resolvable(&d, classes);
    verify_nr_star(&d, &rc).into_result("developed design")?;
    Ok((d, rc))
}
