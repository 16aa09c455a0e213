use std::collections::{BTreeMap, HashMap, HashSet};

use super::{verify_near_resolution, verify_nr_star, Design, Point, ResolutionClasses};
use crate::gdd::{verify_gdd, Gdd};
use crate::{Error, Result};

/// A `v × v` array whose cell `(i, j)` holds the block shared by the classes
/// missing points `i` and `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareArray {
    n: u32,
    cells: Vec<Option<Vec<Point>>>,
}

impl SquareArray {
    pub fn empty(n: u32) -> Self {
        Self {
            n,
            cells: vec![None; n as usize * n as usize],
        }
    }

    pub fn side(&self) -> u32 {
        self.n
    }

    pub fn get(&self, r: u32, c: u32) -> Option<&[Point]> {
        self.cells[(r * self.n + c) as usize].as_deref()
    }

    fn slot(&mut self, r: u32, c: u32) -> &mut Option<Vec<Point>> {
        &mut self.cells[(r * self.n + c) as usize]
    }

    /// Distinct block contents in row `r`, in column order.
    pub fn row_contents(&self, r: u32) -> Vec<Vec<Point>> {
        distinct((0..self.n).filter_map(|c| self.get(r, c)))
    }

    pub fn column_contents(&self, c: u32) -> Vec<Vec<Point>> {
        distinct((0..self.n).filter_map(|r| self.get(r, c)))
    }

    pub fn filled_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }
}

fn distinct<'a>(it: impl Iterator<Item = &'a [Point]>) -> Vec<Vec<Point>> {
    let mut seen = HashSet::new();
    it.filter(|b| seen.insert(b.to_vec()))
        .map(|b| b.to_vec())
        .collect()
}

/// Builds the array of a self-orthogonal near resolution with `v` classes.
/// Classes are placed by their missing point, whatever their order in `rc`.
pub fn design_to_square_array(d: &Design, rc: &ResolutionClasses) -> Result<SquareArray> {
    verify_near_resolution(d, rc).into_result("near resolution")?;
    if rc.len() != d.v() as usize {
        return Err(Error::Precondition(format!(
            "{} classes on {} points; the array needs one class per point",
            rc.len(),
            d.v()
        )));
    }
    let row_of: Vec<Point> = rc.missing.iter().map(|m| m.expect("verified")).collect();
    let mut holders: HashMap<&[Point], Vec<Point>> = HashMap::new();
    for (ci, class) in rc.classes.iter().enumerate() {
        for &l in class {
            holders.entry(d.block(l)).or_default().push(row_of[ci]);
        }
    }
    let mut array = SquareArray::empty(d.v());
    for (content, rows) in holders {
        for &a in &rows {
            for &b in &rows {
                if a == b {
                    continue;
                }
                let slot = array.slot(a, b);
                if let Some(prev) = slot {
                    return Err(Error::Precondition(format!(
                        "classes missing {a} and {b} share {prev:?} and {content:?}; \
                         the resolution is not self-orthogonal"
                    )));
                }
                *slot = Some(content.to_vec());
            }
        }
    }
    Ok(array)
}

/// Reads row `i` as the class missing point `i`. Each (row, content) pair
/// becomes one labeled block, so a content shown in `λ` rows gets `λ` copies.
/// Columns must display the same classes as the rows.
pub fn square_array_to_design(
    array: &SquareArray,
    k: u32,
    lambda: u32,
) -> Result<(Design, ResolutionClasses)> {
    let mut blocks = Vec::new();
    let mut classes = Vec::with_capacity(array.side() as usize);
    for r in 0..array.side() {
        let row = array.row_contents(r);
        let mut col = array.column_contents(r);
        let mut sorted_row = row.clone();
        sorted_row.sort();
        col.sort();
        if sorted_row != col {
            return Err(Error::Precondition(format!(
                "row {r} and column {r} display different classes"
            )));
        }
        let start = blocks.len();
        blocks.extend(row);
        classes.push((start..blocks.len()).collect());
    }
    let d = Design::new(array.side(), k, lambda, blocks)?;
    let rc = ResolutionClasses::near_resolvable(&d, classes);
    Ok((d, rc))
}

/// Replaces every block of size `m` of a PBD by the array of an
/// NR*(m, k, k-1)-BIBD and reads off the classes of the composed array.
pub fn pbd_compose(
    pbd: &Gdd,
    ingredients: &BTreeMap<usize, (Design, ResolutionClasses)>,
) -> Result<(Design, ResolutionClasses)> {
    verify_gdd(pbd).into_result("PBD")?;
    if pbd.groups().iter().any(|g| g.len() != 1) || pbd.lambda() != 1 {
        return Err(Error::Precondition("input is not a PBD of index 1".into()));
    }
    let mut k = None;
    let mut arrays = BTreeMap::new();
    for &m in pbd.block_sizes() {
        let (d, rc) = ingredients
            .get(&(m as usize))
            .ok_or_else(|| Error::MissingIngredient(format!("NR*-design on {m} points")))?;
        if d.v() != m {
            return Err(Error::MissingIngredient(format!(
                "ingredient for block size {m} has {} points",
                d.v()
            )));
        }
        verify_nr_star(d, rc).into_result(&format!("ingredient NR*({m})"))?;
        if *k.get_or_insert(d.k()) != d.k() {
            return Err(Error::Precondition("ingredients have different block sizes".into()));
        }
        arrays.insert(m, design_to_square_array(d, rc)?);
    }
    let k = k.ok_or_else(|| Error::Precondition("PBD has no blocks".into()))?;

    let mut big = SquareArray::empty(pbd.v());
    for block in pbd.blocks() {
        let small = &arrays[&(block.len() as u32)];
        for i in 0..small.side() {
            for j in 0..small.side() {
                if let Some(content) = small.get(i, j) {
                    let mut mapped: Vec<Point> =
                        content.iter().map(|&p| block[p as usize]).collect();
                    mapped.sort_unstable();
                    let slot = big.slot(block[i as usize], block[j as usize]);
                    if slot.is_some() {
                        return Err(Error::Precondition("PBD blocks overlap in a pair".into()));
                    }
                    *slot = Some(mapped);
                }
            }
        }
    }
    let (d, rc) = square_array_to_design(&big, k, k - 1)?;
    verify_nr_star(&d, &rc).into_result("composed design")?;
    Ok((d, rc))
}
