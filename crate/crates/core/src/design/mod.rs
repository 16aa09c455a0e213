//! Block designs, (near) resolutions and the verification oracles.
//!
//! A [`Design`] is a labeled multiset of blocks: the position of a block in
//! the block list is its label, so duplicated blocks are distinct objects.
//! Every verifier returns a [`VerificationReport`]; none of them panic or
//! return an error on a mathematical failure.

mod array;
pub mod io;
mod merge;

pub use array::{design_to_square_array, pbd_compose, square_array_to_design, SquareArray};
pub use merge::{merge_orthogonal_resolutions, verify_labeled_orthogonality};

use std::collections::HashMap;

use crate::report::{VerificationReport, Witness};
use crate::{Error, Result};

pub type Point = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Design {
    v: u32,
    k: u32,
    lambda: u32,
    blocks: Vec<Vec<Point>>,
}

impl Design {
    /// Validates block sizes and ranges and sorts each block.
    pub fn new(v: u32, k: u32, lambda: u32, mut blocks: Vec<Vec<Point>>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidDesign("block size must be positive".into()));
        }
        for (label, b) in blocks.iter_mut().enumerate() {
            b.sort_unstable();
            if b.len() != k as usize {
                return Err(Error::InvalidDesign(format!(
                    "block {label} has {} points, expected {k}",
                    b.len()
                )));
            }
            if b.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidDesign(format!(
                    "block {label} repeats a point"
                )));
            }
            if b.last().is_some_and(|&p| p >= v) {
                return Err(Error::InvalidDesign(format!(
                    "block {label} has a point outside 0..{v}"
                )));
            }
        }
        Ok(Self {
            v,
            k,
            lambda,
            blocks,
        })
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn blocks(&self) -> &[Vec<Point>] {
        &self.blocks
    }

    pub fn block(&self, label: usize) -> &[Point] {
        &self.blocks[label]
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// The block list concatenated with itself; copy `c` of label `l` gets
    /// label `c * b + l`.
    pub fn duplicated(&self) -> Design {
        self.repeated(2)
    }

    pub fn repeated(&self, copies: u32) -> Design {
        let mut blocks = Vec::with_capacity(self.blocks.len() * copies as usize);
        for _ in 0..copies {
            blocks.extend(self.blocks.iter().cloned());
        }
        Design {
            v: self.v,
            k: self.k,
            lambda: self.lambda * copies,
            blocks,
        }
    }

    /// Applies a point bijection `map[old] = new`.
    pub fn relabeled(&self, map: &[Point]) -> Result<Design> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&p| map[p as usize]).collect())
            .collect();
        Design::new(self.v, self.k, self.lambda, blocks)
    }

    /// Distinct block contents with their multiplicities, in first-seen order.
    pub fn support(&self) -> Vec<(Vec<Point>, u32)> {
        let mut index: HashMap<&[Point], usize> = HashMap::new();
        let mut out: Vec<(Vec<Point>, u32)> = Vec::new();
        for b in &self.blocks {
            match index.get(b.as_slice()) {
                Some(&i) => out[i].1 += 1,
                None => {
                    index.insert(b, out.len());
                    out.push((b.clone(), 1));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolutionKind {
    Resolvable,
    NearResolvable,
}

impl ResolutionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ResolutionKind::Resolvable => "resolvable",
            ResolutionKind::NearResolvable => "near-resolvable",
        }
    }
}

/// A partition of block labels into classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionClasses {
    pub kind: ResolutionKind,
    pub classes: Vec<Vec<usize>>,
    /// Near-resolvable only: the point each class misses.
    pub missing: Vec<Option<Point>>,
}

impl ResolutionClasses {
    pub fn resolvable(classes: Vec<Vec<usize>>) -> Self {
        let n = classes.len();
        Self {
            kind: ResolutionKind::Resolvable,
            classes,
            missing: vec![None; n],
        }
    }

    /// Near-resolution classes with the missing point of each class computed
    /// from the design. Classes that do not miss exactly one point get `None`
    /// and will fail verification.
    pub fn near_resolvable(design: &Design, classes: Vec<Vec<usize>>) -> Self {
        let missing = classes
            .iter()
            .map(|c| uncovered_point(design, c))
            .collect();
        Self {
            kind: ResolutionKind::NearResolvable,
            classes,
            missing,
        }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class index of every label, or `None` for unassigned labels.
    pub fn class_of_labels(&self, num_blocks: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; num_blocks];
        for (ci, c) in self.classes.iter().enumerate() {
            for &l in c {
                if l < num_blocks {
                    out[l] = Some(ci);
                }
            }
        }
        out
    }
}

fn uncovered_point(design: &Design, class: &[usize]) -> Option<Point> {
    let mut seen = vec![false; design.v() as usize];
    for &l in class {
        if let Some(b) = design.blocks().get(l) {
            for &p in b {
                seen[p as usize] = true;
            }
        }
    }
    let mut it = seen.iter().enumerate().filter(|(_, s)| !**s);
    match (it.next(), it.next()) {
        (Some((p, _)), None) => Some(p as Point),
        _ => None,
    }
}

/// Dense symmetric pair counter for `v` points.
pub(crate) struct PairCounter {
    v: usize,
    counts: Vec<u32>,
}

impl PairCounter {
    pub(crate) fn new(v: u32) -> Self {
        let v = v as usize;
        Self {
            v,
            counts: vec![0; v * v],
        }
    }

    pub(crate) fn add_block(&mut self, block: &[Point]) {
        for (i, &a) in block.iter().enumerate() {
            for &b in &block[i + 1..] {
                let (a, b) = (a.min(b) as usize, a.max(b) as usize);
                self.counts[a * self.v + b] += 1;
            }
        }
    }

    /// First pair (in lexicographic order) satisfying `bad`.
    pub(crate) fn find(&self, mut bad: impl FnMut(Point, Point, u32) -> bool) -> Option<(Point, Point, u32)> {
        for a in 0..self.v {
            for b in a + 1..self.v {
                let c = self.counts[a * self.v + b];
                if bad(a as Point, b as Point, c) {
                    return Some((a as Point, b as Point, c));
                }
            }
        }
        None
    }
}

/// Every block has `k` distinct points in range and every unordered pair of
/// points lies in exactly `lambda` blocks, counting labeled copies.
pub fn verify_bibd(d: &Design) -> VerificationReport {
    let mut report = VerificationReport::new();
    let bad_block = d.blocks().iter().enumerate().find(|(_, b)| {
        b.len() != d.k() as usize
            || b.windows(2).any(|w| w[0] >= w[1])
            || b.iter().any(|&p| p >= d.v())
    });
    report.record(
        "block_size",
        bad_block.map(|(l, b)| {
            (
                Witness::Block(l),
                format!("block {b:?} is not a {}-subset of 0..{}", d.k(), d.v()),
            )
        }),
    );
    let mut pairs = PairCounter::new(d.v());
    for b in d.blocks() {
        if b.iter().all(|&p| p < d.v()) {
            pairs.add_block(b);
        }
    }
    let lambda = d.lambda();
    report.record(
        "pair_balance",
        pairs.find(|_, _, c| c != lambda).map(|(a, b, c)| {
            (
                Witness::Pair(a, b),
                format!("pair occurs in {c} blocks, expected {lambda}"),
            )
        }),
    );
    report
}

/// Every distinct triple occurs exactly twice and the support is an STS.
pub fn is_duplicated_sts(d: &Design) -> VerificationReport {
    is_repeated_system(d, 2)
}

/// Every distinct block occurs exactly `copies` times and the support is a
/// `(v, k, 1)`-BIBD.
pub fn is_repeated_system(d: &Design, copies: u32) -> VerificationReport {
    let mut report = VerificationReport::new();
    let support = d.support();
    let bad = support
        .iter()
        .find(|(_, m)| *m != copies)
        .map(|(b, m)| {
            let label = d.blocks().iter().position(|x| x == b).unwrap_or(0);
            (
                Witness::Block(label),
                format!("block {b:?} has multiplicity {m}, expected {copies}"),
            )
        });
    report.record("multiplicity", bad);
    match Design::new(d.v(), d.k(), 1, support.into_iter().map(|(b, _)| b).collect()) {
        Ok(s) => report.extend_prefixed("support", verify_bibd(&s)),
        Err(e) => report.fail("support", Witness::Text(e.to_string()), "support is not a design"),
    }
    report
}

fn class_partition_failure(d: &Design, rc: &ResolutionClasses) -> Option<(Witness, String)> {
    let mut owner = vec![None; d.num_blocks()];
    for (ci, class) in rc.classes.iter().enumerate() {
        for &l in class {
            if l >= d.num_blocks() {
                return Some((Witness::Class(ci), format!("label {l} out of range")));
            }
            if let Some(prev) = owner[l] {
                return Some((
                    Witness::Block(l),
                    format!("label in classes {prev} and {ci}"),
                ));
            }
            owner[l] = Some(ci);
        }
    }
    owner
        .iter()
        .position(|o| o.is_none())
        .map(|l| (Witness::Block(l), "label in no class".to_string()))
}

/// Checks that the classes partition the labels and that each class covers
/// every point exactly once.
pub fn verify_resolution(d: &Design, rc: &ResolutionClasses) -> VerificationReport {
    let mut report = VerificationReport::new();
    if rc.kind != ResolutionKind::Resolvable {
        report.fail(
            "kind",
            Witness::Text(rc.kind.as_str().into()),
            "expected a resolution",
        );
        return report;
    }
    report.record("partition", class_partition_failure(d, rc));
    let mut bad = None;
    'outer: for (ci, class) in rc.classes.iter().enumerate() {
        let mut seen = vec![0u32; d.v() as usize];
        for &l in class {
            for &p in d.blocks().get(l).map(|b| b.as_slice()).unwrap_or(&[]) {
                seen[p as usize] += 1;
            }
        }
        if let Some(p) = seen.iter().position(|&c| c != 1) {
            bad = Some((
                Witness::Class(ci),
                format!("point {p} covered {} times", seen[p]),
            ));
            break 'outer;
        }
    }
    report.record("class_coverage", bad);
    let expected = if d.k() > 1 {
        d.lambda() as u64 * (d.v() as u64 - 1) / (d.k() as u64 - 1)
    } else {
        0
    };
    let count_ok = rc.len() as u64 == expected;
    report.record(
        "class_count",
        (!count_ok).then(|| {
            (
                Witness::Text(format!("{} classes", rc.len())),
                format!("expected λ(v-1)/(k-1) = {expected}"),
            )
        }),
    );
    report
}

/// Checks the near-resolution invariants: label partition, each class
/// covering `v - 1` points once, declared missing points, each point missed
/// by exactly one class and `λv/(k-1)` classes.
pub fn verify_near_resolution(d: &Design, rc: &ResolutionClasses) -> VerificationReport {
    let mut report = VerificationReport::new();
    if rc.kind != ResolutionKind::NearResolvable {
        report.fail(
            "kind",
            Witness::Text(rc.kind.as_str().into()),
            "expected a near resolution",
        );
        return report;
    }
    report.record("partition", class_partition_failure(d, rc));

    let v = d.v() as usize;
    let mut missed_by = vec![0u32; v];
    let mut coverage = None;
    let mut declared = None;
    for (ci, class) in rc.classes.iter().enumerate() {
        let mut seen = vec![0u32; v];
        for &l in class {
            for &p in d.blocks().get(l).map(|b| b.as_slice()).unwrap_or(&[]) {
                seen[p as usize] += 1;
            }
        }
        let missing: Vec<usize> = (0..v).filter(|&p| seen[p] == 0).collect();
        let repeated = seen.iter().position(|&c| c > 1);
        if coverage.is_none() {
            if let Some(p) = repeated {
                coverage = Some((
                    Witness::Class(ci),
                    format!("point {p} covered {} times", seen[p]),
                ));
            } else if missing.len() != 1 {
                coverage = Some((
                    Witness::Class(ci),
                    format!("class misses {} points, expected 1", missing.len()),
                ));
            }
        }
        if missing.len() == 1 {
            missed_by[missing[0]] += 1;
            let actual = missing[0] as Point;
            if declared.is_none() && rc.missing.get(ci).copied().flatten() != Some(actual) {
                declared = Some((
                    Witness::Class(ci),
                    format!(
                        "declared missing {:?}, actual {actual}",
                        rc.missing.get(ci).copied().flatten()
                    ),
                ));
            }
        }
    }
    report.record("class_coverage", coverage);
    report.record("missing_point_metadata", declared);
    report.record(
        "missed_once",
        missed_by
            .iter()
            .position(|&c| c != 1)
            .map(|p| {
                (
                    Witness::Point(p as Point),
                    format!("missed by {} classes", missed_by[p]),
                )
            }),
    );
    let expected = if d.k() > 1 {
        d.lambda() as u64 * d.v() as u64 / (d.k() as u64 - 1)
    } else {
        0
    };
    report.record(
        "class_count",
        (rc.len() as u64 != expected).then(|| {
            (
                Witness::Text(format!("{} classes", rc.len())),
                format!("expected λv/(k-1) = {expected}"),
            )
        }),
    );
    report
}

/// Content-level self-orthogonality: for every two distinct classes the
/// multiset intersection of their (unlabeled) block contents has size at
/// most one.
pub fn verify_self_orthogonal(d: &Design, rc: &ResolutionClasses) -> VerificationReport {
    let mut report = VerificationReport::new();
    // content -> [(class, multiplicity in class)]
    let mut by_content: HashMap<&[Point], Vec<(usize, u32)>> = HashMap::new();
    for (ci, class) in rc.classes.iter().enumerate() {
        for &l in class {
            let Some(b) = d.blocks().get(l) else { continue };
            let entry = by_content.entry(b.as_slice()).or_default();
            match entry.iter_mut().find(|(c, _)| *c == ci) {
                Some((_, m)) => *m += 1,
                None => entry.push((ci, 1)),
            }
        }
    }
    let mut shared: HashMap<(usize, usize), u32> = HashMap::new();
    let mut worst: Option<((usize, usize), u32)> = None;
    for holders in by_content.values() {
        for (i, &(a, ma)) in holders.iter().enumerate() {
            for &(b, mb) in &holders[i + 1..] {
                let key = (a.min(b), a.max(b));
                let n = shared.entry(key).or_default();
                *n += ma.min(mb);
                if *n > 1 && worst.is_none_or(|(k, _)| key < k) {
                    worst = Some((key, *n));
                }
            }
        }
    }
    if let Some(((a, b), _)) = worst {
        let n = shared[&(a, b)];
        report.fail(
            "class_pair_intersection",
            Witness::Classes(a, b),
            format!("classes share {n} blocks"),
        );
    } else {
        report.pass("class_pair_intersection");
    }
    report
}

/// The three checks every NR*-design output must pass.
pub fn verify_nr_star(d: &Design, rc: &ResolutionClasses) -> VerificationReport {
    let copies = d.k().saturating_sub(1).max(1);
    let mut report = VerificationReport::new();
    report.extend_prefixed("repeated_system", is_repeated_system(d, copies));
    report.extend_prefixed("near_resolution", verify_near_resolution(d, rc));
    report.extend_prefixed("self_orthogonal", verify_self_orthogonal(d, rc));
    report
}
