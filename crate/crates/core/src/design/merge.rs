use std::collections::HashMap;

use super::{
    is_duplicated_sts, verify_bibd, verify_resolution, verify_self_orthogonal, Design,
    ResolutionClasses,
};
use crate::report::{VerificationReport, Witness};
use crate::{Error, Result};

/// Labeled orthogonality of two resolutions of the same block set:
/// `|R_i ∩ R'_j| <= 1` where blocks are compared by label, not content.
pub fn verify_labeled_orthogonality(
    d: &Design,
    r1: &ResolutionClasses,
    r2: &ResolutionClasses,
) -> VerificationReport {
    let mut report = VerificationReport::new();
    let c1 = r1.class_of_labels(d.num_blocks());
    let c2 = r2.class_of_labels(d.num_blocks());
    let mut counts: HashMap<(usize, usize), u32> = HashMap::new();
    let mut bad = None;
    for (a, b) in c1.iter().zip(&c2) {
        if let (Some(a), Some(b)) = (a, b) {
            let n = counts.entry((*a, *b)).or_default();
            *n += 1;
            if *n > 1 && bad.is_none() {
                bad = Some((*a, *b));
            }
        }
    }
    report.record(
        "labeled_orthogonality",
        bad.map(|(a, b)| {
            (
                Witness::Classes(a, b),
                format!("R_{a} and R'_{b} share {} labeled blocks", counts[&(a, b)]),
            )
        }),
    );
    report
}

/// Turns a `(v, 3, 1)`-BIBD with two orthogonal resolutions into a
/// duplicated design with `v - 1` self-orthogonal resolution classes: copy
/// one of the blocks is classed by `r1`, copy two by `r2`.
pub fn merge_orthogonal_resolutions(
    d: &Design,
    r1: &ResolutionClasses,
    r2: &ResolutionClasses,
) -> Result<(Design, ResolutionClasses)> {
    if d.k() != 3 || d.lambda() != 1 {
        return Err(Error::Precondition(format!(
            "expected a (v,3,1)-BIBD, got k = {}, λ = {}",
            d.k(),
            d.lambda()
        )));
    }
    let mut pre = VerificationReport::new();
    pre.extend_prefixed("bibd", verify_bibd(d));
    pre.extend_prefixed("r1", verify_resolution(d, r1));
    pre.extend_prefixed("r2", verify_resolution(d, r2));
    if !pre.passed() {
        return Err(Error::verification("input resolutions", pre));
    }
    verify_labeled_orthogonality(d, r1, r2).into_result("orthogonality of the resolutions")?;

    let b = d.num_blocks();
    let merged = d.duplicated();
    let classes = r1
        .classes
        .iter()
        .cloned()
        .chain(r2.classes.iter().map(|c| c.iter().map(|l| l + b).collect()))
        .collect();
    let rc = ResolutionClasses::resolvable(classes);

    let mut post = VerificationReport::new();
    post.extend_prefixed("dsts", is_duplicated_sts(&merged));
    post.extend_prefixed("self_orthogonal", verify_self_orthogonal(&merged, &rc));
    post.into_result("merged resolution")?;
    Ok((merged, rc))
}
