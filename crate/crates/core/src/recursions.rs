//! Composite recursions: GDD with weight 6 into a frame, then fill; frame
//! inflation followed by fill; PBD point deletion feeding the GDD route.

use crate::catalog::Catalog;
use crate::design::{Design, ResolutionClasses};
use crate::frames::{fill_frame, fundamental_construction, inflate_frame, Frame};
use crate::gdd::{pbd_delete_point, verify_gdd, Gdd, GroupType};
use crate::latin::LatinSquare;
use crate::{Error, Result};

/// Ingredients a GDD needs for [`nrdsts_from_gdd`] that `catalog` lacks, as
/// readable names. Empty when everything is available.
pub fn missing_for_gdd(g: &Gdd, catalog: &mut Catalog) -> Vec<String> {
    let mut missing = Vec::new();
    for &k in g.block_sizes() {
        if catalog.frame(&GroupType::uniform(6, k)).is_none() {
            missing.push(format!("frame 6^{k}"));
        }
    }
    let mut sizes: Vec<u32> = g.groups().iter().map(|x| x.len() as u32).collect();
    sizes.sort_unstable();
    sizes.dedup();
    for s in sizes {
        if !catalog.has_nrdsts(6 * s + 1) {
            missing.push(format!("NR*DSTS({})", 6 * s + 1));
        }
    }
    missing
}

/// Weight every point of `g` by 6, build the frame from 6^k ingredients and
/// fill each hole with an NR*DSTS(6|G_i| + 1). Output: NR*DSTS(6v + 1).
pub fn nrdsts_from_gdd(g: &Gdd, catalog: &mut Catalog) -> Result<(Design, ResolutionClasses)> {
    verify_gdd(g).into_result("GDD")?;
    if g.lambda() != 1 {
        return Err(Error::Precondition("GDD must have index 1".into()));
    }
    let mut ingredients = Vec::new();
    for &k in g.block_sizes() {
        let f = catalog
            .frame(&GroupType::uniform(6, k))
            .ok_or_else(|| Error::MissingIngredient(format!("no frame of type 6^{k} for block size {k}")))?;
        ingredients.push(f.clone());
    }
    let mut fillers = Vec::with_capacity(g.groups().len());
    for grp in g.groups() {
        let v = 6 * grp.len() as u32 + 1;
        fillers.push(
            catalog
                .nrdsts(v)
                .ok_or_else(|| Error::MissingIngredient(format!("no NR*DSTS({v})")))?,
        );
    }
    let frame = fundamental_construction(g, &vec![6; g.v() as usize], &ingredients)?;
    fill_frame(&frame, &fillers)
}

/// Inflate a type `t^m` frame by three MOLS of order `n`, then fill every
/// hole with the NR*DSTS(tn + 1). Output: NR*DSTS(tmn + 1).
pub fn nrdsts_inflate_fill(
    frame: &Frame,
    mols3: &[LatinSquare],
    filler: &(Design, ResolutionClasses),
) -> Result<(Design, ResolutionClasses)> {
    let ty = frame.frame_type();
    let [t] = ty.0.keys().copied().collect::<Vec<_>>()[..] else {
        return Err(Error::Precondition(format!("frame type {ty} is not uniform")));
    };
    let n = mols3.first().map_or(0, |l| l.order());
    if filler.0.v() != t * n + 1 {
        return Err(Error::Precondition(format!(
            "filler has {} points, type {ty} inflated by {n} needs {}",
            filler.0.v(),
            t * n + 1
        )));
    }
    let big = inflate_frame(frame, mols3)?;
    fill_frame(&big, &vec![filler.clone(); big.groups().len()])
}

/// Delete the last point of a PBD with block sizes in {7, 8, 9} and run
/// [`nrdsts_from_gdd`] on the resulting GDD. Output: NR*DSTS(6(v - 1) + 1).
pub fn nrdsts_from_pbd(pbd: &Gdd, catalog: &mut Catalog) -> Result<(Design, ResolutionClasses)> {
    let g = pbd_delete_point(pbd, pbd.v() - 1)?;
    nrdsts_from_gdd(&g, catalog)
}
