use std::collections::{BTreeMap, HashMap};

use super::{verify_frame, Frame};
use crate::design::{verify_nr_star, Design, Point, ResolutionClasses};
use crate::gdd::{verify_gdd, Gdd, GroupType};
use crate::latin::{doubly_resolved_td3, LatinSquare, ResolvedTd3};
use crate::{Error, Result};

/// Inflates every point by a factor `n` using three MOLS of order `n`:
/// point `x` becomes `x n + c` for `c ∈ [n]` and each cell becomes an
/// `n × n` block of the doubly resolved TD(3, n). Squares of order 1 give the
/// input back.
pub fn inflate_frame(f: &Frame, mols3: &[LatinSquare]) -> Result<Frame> {
    verify_frame(f).into_result("input frame")?;
    if mols3.len() == 3 && mols3.iter().all(|l| l.order() == 1) {
        return Ok(f.clone());
    }
    let td = doubly_resolved_td3(mols3)?;
    inflate_frame_with(f, &td)
}

pub fn inflate_frame_with(f: &Frame, td: &ResolvedTd3) -> Result<Frame> {
    verify_frame(f).into_result("input frame")?;
    let n = td.side();
    let groups = f
        .groups()
        .iter()
        .map(|g| g.iter().flat_map(|&x| (0..n).map(move |c| x * n + c)).collect())
        .collect();
    let mut cells = BTreeMap::new();
    for (&(r, c), b) in f.cells() {
        for i in 0..n {
            for j in 0..n {
                // TD group g holds copies g n .. (g + 1) n of point b[g].
                let blk = td.get(i, j).map(|p| b[(p / n) as usize] * n + p % n);
                cells.insert((r * n + i, c * n + j), blk);
            }
        }
    }
    let out = Frame::new(groups, cells)?;
    let expected_type = GroupType(f.frame_type().0.into_iter().map(|(s, c)| (s * n, c)).collect());
    if out.side() != f.side() * n
        || out.cells().len() != f.cells().len() * (n * n) as usize
        || out.frame_type() != expected_type
    {
        return Err(Error::InvalidDesign(format!(
            "inflation by {n}: side {} and type {}, expected {} and {expected_type}",
            out.side(),
            out.frame_type(),
            f.side() * n
        )));
    }
    verify_frame(&out).into_result("inflated frame")?;
    Ok(out)
}

/// Gives each master point `x` the points `{x} × [w(x)]` and replaces every
/// master block by an ingredient frame whose type is the block's weight
/// multiset. Zero weights drop out of the block type. Ingredients are
/// matched by type and may be reused.
pub fn fundamental_construction(master: &Gdd, weights: &[u32], ingredients: &[Frame]) -> Result<Frame> {
    verify_gdd(master).into_result("master GDD")?;
    if master.lambda() != 1 {
        return Err(Error::Precondition("master GDD must have index 1".into()));
    }
    if weights.len() != master.v() as usize {
        return Err(Error::Precondition(format!(
            "{} weights for {} points",
            weights.len(),
            master.v()
        )));
    }
    if let Some(x) = weights.iter().position(|w| w % 2 == 1) {
        return Err(Error::Precondition(format!("weight {} of point {x} is odd", weights[x])));
    }
    let mut by_type: HashMap<GroupType, &Frame> = HashMap::new();
    for ing in ingredients {
        verify_frame(ing).into_result("ingredient frame")?;
        by_type.entry(ing.frame_type()).or_insert(ing);
    }

    // New points: x's copies in order of x. New lines: group by group, then
    // point order within the group, w(x) / 2 lines per point.
    let mut point_base = vec![0u32; weights.len()];
    let mut acc = 0;
    for (x, &w) in weights.iter().enumerate() {
        point_base[x] = acc;
        acc += w;
    }
    let mut line_base = vec![0u32; weights.len()];
    let mut acc = 0;
    let mut groups = Vec::with_capacity(master.groups().len());
    for g in master.groups() {
        let mut pts = Vec::new();
        for &x in g {
            line_base[x as usize] = acc;
            acc += weights[x as usize] / 2;
            pts.extend((0..weights[x as usize]).map(|c| point_base[x as usize] + c));
        }
        groups.push(pts);
    }

    let mut cells = BTreeMap::new();
    for b in master.blocks() {
        let live: Vec<Point> = b.iter().copied().filter(|&x| weights[x as usize] > 0).collect();
        if live.is_empty() {
            continue;
        }
        let ty = GroupType::from_sizes(live.iter().map(|&x| weights[x as usize]));
        let ing = by_type.get(&ty).ok_or_else(|| {
            Error::MissingIngredient(format!("no frame of type {ty} for master block {b:?}"))
        })?;
        // Ingredient hole h plays master point hole_point[h]; sizes agree.
        let mut free = live.clone();
        let mut hole_point = Vec::with_capacity(ing.groups().len());
        for g in ing.groups() {
            let k = free
                .iter()
                .position(|&x| weights[x as usize] as usize == g.len())
                .expect("types agree");
            hole_point.push(free.remove(k));
        }
        let mut point_map = HashMap::new();
        for (g, &x) in ing.groups().iter().zip(&hole_point) {
            for (c, &p) in g.iter().enumerate() {
                point_map.insert(p, point_base[x as usize] + c as u32);
            }
        }
        let line = |l: u32| {
            let h = ing.hole_of_line(l);
            line_base[hole_point[h] as usize] + (l - ing.hole_lines(h).start)
        };
        for (&(r, c), blk) in ing.cells() {
            let mapped = blk.map(|p| point_map[&p]);
            if cells.insert((line(r), line(c)), mapped).is_some() {
                return Err(Error::InvalidDesign(format!(
                    "cell ({}, {}) filled twice; master blocks overlap",
                    line(r),
                    line(c)
                )));
            }
        }
    }
    let out = Frame::new(groups, cells)?;
    verify_frame(&out).into_result("fundamental construction output")?;
    Ok(out)
}

/// Fills hole `i` with an NR*DSTS on `G_i ∪ {∞}`, `∞ = v`. Filler point `p`
/// is `G_i[p]` for `p < |G_i|` and `∞` for `p = |G_i|`. The filler's classes
/// other than the one missing `∞` are attached in index order, first to the
/// hole's rows, then to its columns. The classes missing `∞`, one per hole,
/// together form the last class.
///
/// Output classes: per hole, rows then columns; the `∞` class last.
pub fn fill_frame(f: &Frame, fillers: &[(Design, ResolutionClasses)]) -> Result<(Design, ResolutionClasses)> {
    verify_frame(f).into_result("frame")?;
    if fillers.len() != f.groups().len() {
        return Err(Error::MissingIngredient(format!(
            "{} fillers for {} holes",
            fillers.len(),
            f.groups().len()
        )));
    }
    let v = f.v();
    let mut blocks: Vec<Vec<Point>> = Vec::new();
    let mut classes = Vec::with_capacity(v as usize + 1);
    let mut infinity_class = Vec::new();
    for (i, (g, (d, rc))) in f.groups().iter().zip(fillers).enumerate() {
        let gsize = g.len() as u32;
        if d.v() != gsize + 1 {
            return Err(Error::Precondition(format!(
                "filler {i} has {} points, hole needs {}",
                d.v(),
                gsize + 1
            )));
        }
        verify_nr_star(d, rc).into_result(&format!("filler for hole {i}"))?;
        if rc.len() != gsize as usize + 1 {
            return Err(Error::InvalidResolution(format!(
                "filler {i} has {} classes, expected {}",
                rc.len(),
                gsize + 1
            )));
        }
        let map = |p: Point| if p == gsize { v } else { g[p as usize] };
        let base = blocks.len();
        blocks.extend(d.blocks().iter().map(|b| b.iter().map(|&p| map(p)).collect::<Vec<_>>()));
        let inf = rc
            .missing
            .iter()
            .position(|&m| m == Some(gsize))
            .ok_or_else(|| Error::InvalidResolution(format!("filler {i} has no class missing ∞")))?;
        let others: Vec<Vec<usize>> = rc
            .classes
            .iter()
            .enumerate()
            .filter(|&(ci, _)| ci != inf)
            .map(|(_, c)| c.iter().map(|&l| base + l).collect())
            .collect();
        infinity_class.extend(rc.classes[inf].iter().map(|&l| base + l));

        let lines = f.hole_lines(i);
        let t = lines.len();
        for (j, filler_class) in others.into_iter().enumerate() {
            let (line, is_row) = if j < t {
                (lines.start + j as u32, true)
            } else {
                (lines.start + (j - t) as u32, false)
            };
            let mut class = filler_class;
            for (&(r, c), b) in f.cells() {
                if (is_row && r == line) || (!is_row && c == line) {
                    class.push(blocks.len());
                    blocks.push(b.to_vec());
                }
            }
            classes.push(class);
        }
    }
    classes.push(infinity_class);
    let design = Design::new(v + 1, 3, 2, blocks)?;
    let rc = ResolutionClasses::near_resolvable(&design, classes);
    // One class per row, one per column, plus the class missing ∞, which
    // must cover every frame point.
    if rc.len() != v as usize + 1 || rc.missing.last() != Some(&Some(v)) {
        return Err(Error::InvalidResolution(format!(
            "filled frame has {} classes, expected {}, last missing {:?}",
            rc.len(),
            v + 1,
            rc.missing.last()
        )));
    }
    verify_nr_star(&design, &rc).into_result("filled frame")?;
    Ok((design, rc))
}
