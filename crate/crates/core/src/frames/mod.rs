//! (1,1;3)-frames: square arrays over a grouped point set whose diagonal
//! subsquares are empty and whose rows and columns indexed by hole `i` each
//! partition the points outside `G_i`.
//!
//! Hole `i` owns rows and columns `[g_{i-1}, g_i)` with `g_i - g_{i-1} = |G_i| / 2`.

mod construct;
mod search;

pub use construct::{fill_frame, fundamental_construction, inflate_frame, inflate_frame_with};
pub use search::{search_frame, FrameSearch};

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::design::Point;
use crate::gdd::{verify_gdd, Gdd, GroupType};
use crate::report::{VerificationReport, Witness};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    v: u32,
    groups: Vec<Vec<Point>>,
    /// `offsets[i]..offsets[i + 1]` are the rows and columns of hole `i`.
    offsets: Vec<u32>,
    cells: BTreeMap<(u32, u32), [Point; 3]>,
}

impl Frame {
    /// Group sizes must be even; blocks are stored sorted. Everything else is
    /// left to [`verify_frame`].
    pub fn new(groups: Vec<Vec<Point>>, cells: BTreeMap<(u32, u32), [Point; 3]>) -> Result<Self> {
        if let Some(g) = groups.iter().find(|g| g.len() % 2 == 1) {
            return Err(Error::InvalidDesign(format!("group of odd size {}", g.len())));
        }
        let mut offsets = vec![0];
        for g in &groups {
            offsets.push(offsets.last().unwrap() + g.len() as u32 / 2);
        }
        let v = groups.iter().map(|g| g.len() as u32).sum();
        let cells = cells
            .into_iter()
            .map(|(rc, mut b)| {
                b.sort_unstable();
                (rc, b)
            })
            .collect();
        Ok(Self {
            v,
            groups,
            offsets,
            cells,
        })
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn side(&self) -> u32 {
        self.v / 2
    }

    pub fn groups(&self) -> &[Vec<Point>] {
        &self.groups
    }

    pub fn cells(&self) -> &BTreeMap<(u32, u32), [Point; 3]> {
        &self.cells
    }

    pub fn get(&self, r: u32, c: u32) -> Option<&[Point; 3]> {
        self.cells.get(&(r, c))
    }

    pub fn frame_type(&self) -> GroupType {
        GroupType::from_sizes(self.groups.iter().map(|g| g.len() as u32))
    }

    /// Rows (equivalently columns) owned by hole `i`.
    pub fn hole_lines(&self, i: usize) -> std::ops::Range<u32> {
        self.offsets[i]..self.offsets[i + 1]
    }

    /// Hole owning row or column `line`.
    pub fn hole_of_line(&self, line: u32) -> usize {
        self.offsets.partition_point(|&o| o <= line) - 1
    }

    /// The cell blocks as a GDD on the frame's groups.
    pub fn to_gdd(&self) -> Gdd {
        let blocks = self.cells.values().map(|b| b.to_vec()).collect();
        Gdd::new(self.v, self.groups.clone(), blocks, Some(vec![3]), 1)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "frame {} {} {}", self.v, self.side(), self.groups.len());
        for g in &self.groups {
            let _ = write!(out, "group {}", g.len());
            for p in g {
                let _ = write!(out, " {p}");
            }
            out.push('\n');
        }
        for (&(r, c), b) in &self.cells {
            let _ = writeln!(out, "cell {r} {c} {} {} {}", b[0], b[1], b[2]);
        }
        out
    }

    /// Parses without verifying; see [`Frame::load`].
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, "empty file"))?;
        let h = fields(ln, header, "frame")?;
        if h.len() != 3 {
            return Err(Error::parse(ln, "expected `frame v side m`"));
        }
        let (v, side, m) = (h[0], h[1], h[2] as usize);
        let mut groups = Vec::with_capacity(m);
        let mut cells = BTreeMap::new();
        for (ln, line) in lines {
            if groups.len() < m {
                let g = fields(ln, line, "group")?;
                if g.is_empty() || g.len() != g[0] as usize + 1 {
                    return Err(Error::parse(ln, "expected `group size p1 … pn`"));
                }
                if g[1..].iter().any(|&p| p >= v) {
                    return Err(Error::parse(ln, format!("point out of range 0..{v}")));
                }
                groups.push(g[1..].to_vec());
                continue;
            }
            let c = fields(ln, line, "cell")?;
            if c.len() != 5 {
                return Err(Error::parse(ln, "expected `cell r c p1 p2 p3`"));
            }
            if c[0] >= side || c[1] >= side {
                return Err(Error::parse(ln, format!("cell ({}, {}) outside side {side}", c[0], c[1])));
            }
            if c[2..].iter().any(|&p| p >= v) {
                return Err(Error::parse(ln, format!("point out of range 0..{v}")));
            }
            if cells.insert((c[0], c[1]), [c[2], c[3], c[4]]).is_some() {
                return Err(Error::parse(ln, format!("cell ({}, {}) given twice", c[0], c[1])));
            }
        }
        if groups.len() != m {
            return Err(Error::parse(text.lines().count(), format!("{m} groups declared, {} given", groups.len())));
        }
        let f = Frame::new(groups, cells)?;
        if f.v != v || f.side() != side {
            return Err(Error::parse(1, format!("header says v = {v}, side = {side}; groups give v = {}", f.v)));
        }
        Ok(f)
    }

    /// Parses and verifies; a frame that fails any property is rejected.
    pub fn load(text: &str) -> Result<Self> {
        let f = Self::parse(text)?;
        verify_frame(&f).into_result("frame")?;
        Ok(f)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::load(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

fn fields(ln: usize, line: &str, keyword: &str) -> Result<Vec<u32>> {
    let mut it = line.split_whitespace();
    if it.next() != Some(keyword) {
        return Err(Error::parse(ln, format!("expected a `{keyword}` line")));
    }
    it.map(|s| {
        s.parse()
            .map_err(|_| Error::parse(ln, format!("`{s}` is not a number")))
    })
    .collect()
}

/// Checks the four frame properties: (1) cells hold 3-subsets of the points,
/// (2) diagonal subsquares are empty, (3) each row and column owned by hole
/// `i` partitions `V ∖ G_i`, (4) the cell blocks form a GDD of index 1 on the
/// groups.
pub fn verify_frame(f: &Frame) -> VerificationReport {
    let mut report = VerificationReport::new();
    let side = f.side();
    let bad_cell = f.cells.iter().find(|(&(r, c), b)| {
        r >= side || c >= side || b.iter().any(|&p| p >= f.v) || b[0] == b[1] || b[1] == b[2]
    });
    report.record(
        "cell_blocks",
        bad_cell.map(|(&(r, c), b)| (Witness::Cell(r, c), format!("{b:?} is not a 3-subset of 0..{}", f.v))),
    );
    if bad_cell.is_some() {
        return report;
    }

    let diag = f
        .cells
        .keys()
        .find(|&&(r, c)| f.hole_of_line(r) == f.hole_of_line(c));
    report.record(
        "diagonal_empty",
        diag.map(|&(r, c)| (Witness::Cell(r, c), format!("cell inside hole {}", f.hole_of_line(r)))),
    );

    let mut group_of = vec![usize::MAX; f.v as usize];
    for (gi, g) in f.groups.iter().enumerate() {
        for &p in g {
            if (p as usize) < group_of.len() {
                group_of[p as usize] = gi;
            }
        }
    }
    let mut rows: Vec<Vec<u32>> = vec![vec![0; f.v as usize]; side as usize];
    let mut cols = rows.clone();
    for (&(r, c), b) in &f.cells {
        for &p in b {
            rows[r as usize][p as usize] += 1;
            cols[c as usize][p as usize] += 1;
        }
    }
    let line_failure = |lines: &[Vec<u32>], rows: bool| {
        for (l, counts) in lines.iter().enumerate() {
            let l = l as u32;
            let hole = f.hole_of_line(l);
            for (p, &n) in counts.iter().enumerate() {
                let want = u32::from(group_of[p] != hole);
                if n == want {
                    continue;
                }
                let detail = format!("point {p} occurs {n} times, expected {want} (hole {hole})");
                let cell = f.cells.iter().find(|(&(r, c), b)| {
                    (if rows { r } else { c }) == l && b.contains(&(p as Point))
                });
                let witness = match cell {
                    Some((&(r, c), _)) => Witness::Cell(r, c),
                    None if rows => Witness::Text(format!("row {l}")),
                    None => Witness::Text(format!("column {l}")),
                };
                return Some((witness, detail));
            }
        }
        None
    };
    report.record("row_coverage", line_failure(&rows, true));
    report.record("column_coverage", line_failure(&cols, false));
    report.extend_prefixed("gdd", verify_gdd(&f.to_gdd()));
    report
}
