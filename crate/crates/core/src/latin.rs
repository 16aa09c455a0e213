//! Latin squares, MOLS from finite fields, transversal designs and the
//! truncations that turn them into GDDs with block sizes 7 to 10.

use crate::design::Point;
use crate::ffield::FiniteField;
use crate::gdd::{verify_gdd, Gdd};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatinSquare {
    n: u32,
    cells: Vec<u32>,
}

impl LatinSquare {
    pub fn new(n: u32, cells: Vec<u32>) -> Result<Self> {
        let sq = Self { n, cells };
        if sq.cells.len() != (n * n) as usize || !sq.is_latin() {
            return Err(Error::InvalidDesign(format!("not a Latin square of order {n}")));
        }
        Ok(sq)
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn get(&self, r: u32, c: u32) -> u32 {
        self.cells[(r * self.n + c) as usize]
    }

    fn is_latin(&self) -> bool {
        let n = self.n as usize;
        (0..self.n).all(|i| {
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            (0..self.n).all(|j| {
                let (a, b) = (self.get(i, j) as usize, self.get(j, i) as usize);
                a < n && b < n && !std::mem::replace(&mut row[a], true)
                    && !std::mem::replace(&mut col[b], true)
            })
        })
    }

    /// Superposition yields every ordered symbol pair exactly once.
    pub fn is_orthogonal_to(&self, other: &LatinSquare) -> bool {
        if self.n != other.n {
            return false;
        }
        let n = self.n as usize;
        let mut seen = vec![false; n * n];
        (0..self.n).all(|r| {
            (0..self.n).all(|c| {
                let k = self.get(r, c) as usize * n + other.get(r, c) as usize;
                !std::mem::replace(&mut seen[k], true)
            })
        })
    }
}

/// `L_c(i, j) = c·i + j` for the `count` smallest nonzero field elements `c`.
pub fn mols_from_field(field: &FiniteField, count: u32) -> Result<Vec<LatinSquare>> {
    let q = field.order();
    if count > q - 1 {
        return Err(Error::TooManySquares {
            requested: count as usize,
            available: (q - 1) as usize,
        });
    }
    (1..=count)
        .map(|c| {
            let cells = (0..q)
                .flat_map(|i| (0..q).map(move |j| (i, j)))
                .map(|(i, j)| field.add(field.mul(c, i), j))
                .collect();
            LatinSquare::new(q, cells)
        })
        .collect()
}

/// `count` MOLS of order `n`, which must be a prime power.
pub fn mols_of_order(n: u32, count: u32) -> Result<Vec<LatinSquare>> {
    mols_from_field(&FiniteField::of_order(n)?, count)
}

/// TD(k, n): group `g` holds points `g·n .. (g+1)·n`; block `(i, j)` is
/// `{i, n + j, 2n + L_1(i, j), …}` and sits at label `i·n + j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransversalDesign {
    k: u32,
    n: u32,
    blocks: Vec<Vec<Point>>,
}

impl TransversalDesign {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Blocks with one point per group, in group order.
    pub fn blocks(&self) -> &[Vec<Point>] {
        &self.blocks
    }

    pub fn to_gdd(&self) -> Gdd {
        let n = self.n;
        let groups = (0..self.k).map(|g| (g * n..(g + 1) * n).collect()).collect();
        Gdd::new(self.k * n, groups, self.blocks.clone(), Some(vec![self.k]), 1)
    }
}

pub fn td_from_mols(mols: &[LatinSquare]) -> Result<TransversalDesign> {
    let n = mols
        .first()
        .map(LatinSquare::order)
        .ok_or_else(|| Error::Precondition("no Latin squares given".into()))?;
    for (a, sa) in mols.iter().enumerate() {
        for (b, sb) in mols.iter().enumerate().skip(a + 1) {
            if !sa.is_orthogonal_to(sb) {
                return Err(Error::Precondition(format!(
                    "squares {a} and {b} are not orthogonal"
                )));
            }
        }
    }
    let k = mols.len() as u32 + 2;
    let blocks = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| {
            let mut b = vec![i, n + j];
            b.extend(mols.iter().enumerate().map(|(s, sq)| (s as u32 + 2) * n + sq.get(i, j)));
            b
        })
        .collect();
    Ok(TransversalDesign { k, n, blocks })
}

/// An `n × n` array of TD(3, n) blocks on points `0..3n` in which every row
/// and every column is a parallel class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedTd3 {
    n: u32,
    cells: Vec<[Point; 3]>,
}

impl ResolvedTd3 {
    pub fn side(&self) -> u32 {
        self.n
    }

    /// Block at `(r, c)`, one point from each group `[g·n, (g+1)·n)` in group order.
    pub fn get(&self, r: u32, c: u32) -> [Point; 3] {
        self.cells[(r * self.n + c) as usize]
    }

    /// Row or column is a partition of the 3n points, for every index.
    pub fn lines_are_parallel_classes(&self) -> bool {
        let n = self.n;
        let covers = |cells: Vec<[Point; 3]>| {
            let mut seen = vec![false; 3 * n as usize];
            cells
                .iter()
                .flatten()
                .all(|&p| !std::mem::replace(&mut seen[p as usize], true))
        };
        (0..n).all(|i| {
            covers((0..n).map(|c| self.get(i, c)).collect())
                && covers((0..n).map(|r| self.get(r, i)).collect())
        })
    }
}

/// Projects TD(5, n) onto its first three groups and places each block at
/// the cell named by its points in groups four and five.
pub fn doubly_resolved_td3(mols3: &[LatinSquare]) -> Result<ResolvedTd3> {
    if mols3.len() != 3 {
        return Err(Error::Precondition(format!("need 3 MOLS, got {}", mols3.len())));
    }
    let td = td_from_mols(mols3)?;
    let n = td.n;
    let mut cells = vec![[0; 3]; (n * n) as usize];
    for b in td.blocks() {
        let (r, c) = (b[3] - 3 * n, b[4] - 4 * n);
        cells[(r * n + c) as usize] = [b[0], b[1], b[2]];
    }
    let arr = ResolvedTd3 { n, cells };
    debug_assert!(arr.lines_are_parallel_classes());
    Ok(arr)
}

/// The four truncations of a transversal design.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// TD(8, n) to a {7,8}-GDD of type `n^7 w^1`.
    One { w: u32 },
    /// TD(9, n) to a {7,8,9}-GDD of type `n^7 w^1 y^1`.
    Two { w: u32, y: u32 },
    /// TD(10, n) to a {7,8,9,10}-GDD of type `(n-1)^8 w^1 y^1`.
    Three { w: u32, y: u32 },
    /// TD(20, 19) to a {7,8,9,w,19}-GDD of type `7^(19-w) 8^w y^1`.
    Four { w: u32, y: u32 },
}

/// Truncates `td` as described by `t`. Groups keep their lexicographically
/// first points; empty groups and blocks of fewer than two points are
/// dropped; points are renumbered consecutively in group order. The output
/// is verified before it is returned.
pub fn truncate_td(td: &TransversalDesign, t: Truncation) -> Result<Gdd> {
    let n = td.n;
    let need = |k: u32, n_req: Option<u32>| -> Result<()> {
        if td.k != k || n_req.is_some_and(|m| m != n) {
            return Err(Error::Precondition(format!(
                "truncation needs TD({k}, {}), got TD({}, {n})",
                n_req.map_or("n".to_string(), |m| m.to_string()),
                td.k
            )));
        }
        Ok(())
    };
    let range = |name: &str, x: u32, hi: u32| -> Result<()> {
        if x > hi {
            return Err(Error::Range(format!("{name} = {x} exceeds {hi}")));
        }
        Ok(())
    };
    match t {
        Truncation::One { w } => {
            need(8, None)?;
            range("w", w, n)?;
            let keep = |g: u32, i: u32| g < 7 || i < w;
            Ok(restrict(td, keep))
        }
        Truncation::Two { w, y } => {
            need(9, None)?;
            range("w", w, n)?;
            range("y", y, n)?;
            let keep = |g: u32, i: u32| g < 7 || (g == 7 && i < w) || (g == 8 && i < y);
            Ok(restrict(td, keep))
        }
        Truncation::Three { w, y } => {
            need(10, None)?;
            range("w", w, n.saturating_sub(1))?;
            range("y", y, n.saturating_sub(1))?;
            // B0 = block 0 meets every group in its point 0 (after the
            // relabeling g·n + i). Every other block meets B0 at most once,
            // so it loses at most one point to the deletion.
            let b0 = &td.blocks[0];
            let local = |g: u32| b0[g as usize] - g * n;
            let keep = move |g: u32, i: u32| {
                let rank = i - u32::from(i > local(g));
                match g {
                    0..=7 => i != local(g),
                    8 => i != local(8) && rank < w,
                    _ => i != local(9) && rank < y,
                }
            };
            Ok(restrict(td, keep))
        }
        Truncation::Four { w, y } => {
            need(20, Some(19))?;
            range("w", w, 19)?;
            range("y", y, 18)?;
            Ok(affine_truncation(td, w, y))
        }
    }
    .and_then(|g| {
        verify_gdd(&g).into_result("truncated TD")?;
        Ok(g)
    })
}

fn restrict(td: &TransversalDesign, keep: impl Fn(u32, u32) -> bool) -> Gdd {
    let n = td.n;
    let mut new_id = vec![None; (td.k * n) as usize];
    let mut groups = Vec::new();
    let mut next = 0;
    for g in 0..td.k {
        let grp: Vec<Point> = (0..n)
            .filter(|&i| keep(g, i))
            .map(|i| {
                new_id[(g * n + i) as usize] = Some(next);
                next += 1;
                next - 1
            })
            .collect();
        if !grp.is_empty() {
            groups.push(grp);
        }
    }
    let blocks = td
        .blocks
        .iter()
        .map(|b| b.iter().filter_map(|&p| new_id[p as usize]).collect::<Vec<_>>())
        .filter(|b: &Vec<Point>| b.len() >= 2)
        .collect();
    Gdd::new(next, groups, blocks, None, 1)
}

/// Reads TD(20, 19) as the dual of an affine plane: TD blocks are the plane's
/// points, TD points are lines, group 0 gives the columns and group 1 the
/// rows. Keeps rows 0..7 everywhere and row 7 on the first `w` columns. The
/// columns become the groups, the other lines the blocks, and `y` new points
/// extend the lines of groups 2..2+y.
fn affine_truncation(td: &TransversalDesign, w: u32, y: u32) -> Gdd {
    let n = td.n;
    let kept: Vec<&Vec<Point>> = td
        .blocks
        .iter()
        .filter(|b| {
            let (col, row) = (b[0], b[1] - n);
            row < 7 || (row == 7 && col < w)
        })
        .collect();
    let mut lines: Vec<Vec<Point>> = vec![Vec::new(); (td.k * n) as usize];
    for (id, b) in kept.iter().enumerate() {
        for &p in b.iter() {
            lines[p as usize].push(id as Point);
        }
    }
    let v = kept.len() as u32;
    let groups: Vec<Vec<Point>> = (0..n).map(|c| lines[c as usize].clone()).collect();
    let mut blocks = Vec::new();
    for g in 1..td.k {
        for i in 0..n {
            let mut line = lines[(g * n + i) as usize].clone();
            if (2..2 + y).contains(&g) {
                line.push(v + g - 2);
            }
            if line.len() >= 2 {
                blocks.push(line);
            }
        }
    }
    let mut all_groups = groups;
    if y > 0 {
        all_groups.push((v..v + y).collect());
    }
    Gdd::new(v + y, all_groups, blocks, None, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gdd::GroupType;

    /// Naive orthogonality oracle: collect superposed pairs in a set.
    fn orthogonal_oracle(a: &LatinSquare, b: &LatinSquare) -> bool {
        let n = a.order();
        let pairs: std::collections::HashSet<(u32, u32)> = (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .map(|(r, c)| (a.get(r, c), b.get(r, c)))
            .collect();
        pairs.len() == (n * n) as usize
    }

    #[test]
    fn field_mols_are_pairwise_orthogonal() {
        for q in [4, 5, 7, 8, 9] {
            let m = mols_of_order(q, 3).unwrap();
            for a in 0..3 {
                for b in a + 1..3 {
                    assert!(orthogonal_oracle(&m[a], &m[b]), "q = {q}");
                    assert!(m[a].is_orthogonal_to(&m[b]));
                }
            }
        }
    }

    #[test]
    fn too_many_squares() {
        assert!(matches!(
            mols_of_order(3, 3),
            Err(Error::TooManySquares { requested: 3, available: 2 })
        ));
        assert!(mols_of_order(2, 3).is_err());
        assert!(matches!(mols_of_order(6, 3), Err(Error::NotPrimePower(6))));
    }

    #[test]
    fn td_from_three_mols_of_order_four() {
        let td = td_from_mols(&mols_of_order(4, 3).unwrap()).unwrap();
        assert_eq!(td.blocks().len(), 16);
        let g = td.to_gdd();
        assert!(verify_gdd(&g).passed());
        assert_eq!(g.group_type().to_string(), "4^5");
    }

    #[test]
    fn td_9_8() {
        let g = td_from_mols(&mols_of_order(8, 7).unwrap()).unwrap().to_gdd();
        assert!(verify_gdd(&g).passed());
        assert_eq!(g.group_type().to_string(), "8^9");
    }

    #[test]
    fn equal_squares_rejected() {
        let m = mols_of_order(5, 1).unwrap();
        let twice = vec![m[0].clone(), m[0].clone()];
        assert!(matches!(td_from_mols(&twice), Err(Error::Precondition(_))));
    }

    #[test]
    fn resolved_td3_rows_and_columns_partition() {
        for n in [3, 4, 5, 7, 9] {
            let mols = mols_of_order(n, 3);
            if n == 3 {
                assert!(mols.is_err());
                continue;
            }
            let arr = doubly_resolved_td3(&mols.unwrap()).unwrap();
            assert!(arr.lines_are_parallel_classes(), "n = {n}");
        }
    }

    fn sizes_within(g: &Gdd, allowed: &[u32]) -> bool {
        g.blocks().iter().all(|b| allowed.contains(&(b.len() as u32)))
    }

    #[test]
    fn truncation_one() {
        let td = td_from_mols(&mols_of_order(7, 6).unwrap()).unwrap();
        let g = truncate_td(&td, Truncation::One { w: 4 }).unwrap();
        assert_eq!(g.group_type(), GroupType::parse("7^7 4^1").unwrap());
        assert!(sizes_within(&g, &[7, 8]));
        let g0 = truncate_td(&td, Truncation::One { w: 0 }).unwrap();
        assert_eq!(g0.group_type().to_string(), "7^7");
    }

    #[test]
    fn truncation_two() {
        let td = td_from_mols(&mols_of_order(8, 7).unwrap()).unwrap();
        for y in 3..=5 {
            let g = truncate_td(&td, Truncation::Two { w: 0, y }).unwrap();
            assert_eq!(g.group_type(), GroupType::from_sizes([8, 8, 8, 8, 8, 8, 8, y]));
            assert!(sizes_within(&g, &[7, 8, 9]));
        }
        assert!(matches!(truncate_td(&td, Truncation::Two { w: 1, y: 9 }), Err(Error::Range(_))));
    }

    #[test]
    fn truncation_three() {
        let td = td_from_mols(&mols_of_order(9, 8).unwrap()).unwrap();
        let g = truncate_td(&td, Truncation::Three { w: 8, y: 2 }).unwrap();
        assert_eq!(g.group_type(), GroupType::parse("8^9 2^1").unwrap());
        assert!(sizes_within(&g, &[7, 8, 9, 10]));
        let g = truncate_td(&td, Truncation::Three { w: 0, y: 0 }).unwrap();
        assert_eq!(g.group_type(), GroupType::parse("8^8").unwrap());
        assert!(truncate_td(&td, Truncation::Three { w: 9, y: 0 }).is_err());
    }

    #[test]
    fn truncation_four() {
        let td = td_from_mols(&mols_of_order(19, 18).unwrap()).unwrap();
        for (w, y) in [(0, 0), (5, 18), (19, 7), (1, 3)] {
            let g = truncate_td(&td, Truncation::Four { w, y }).unwrap();
            let mut expect = vec![7; (19 - w) as usize];
            expect.extend(std::iter::repeat(8).take(w as usize));
            if y > 0 {
                expect.push(y);
            }
            assert_eq!(g.group_type(), GroupType::from_sizes(expect), "w = {w}, y = {y}");
            assert!(sizes_within(&g, &[7, 8, 9, w, 19]), "w = {w}, y = {y}");
        }
    }

    #[test]
    fn truncation_needs_matching_td() {
        let td = td_from_mols(&mols_of_order(8, 7).unwrap()).unwrap();
        assert!(matches!(
            truncate_td(&td, Truncation::One { w: 1 }),
            Err(Error::Precondition(_))
        ));
    }
}
