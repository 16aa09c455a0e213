//! Group divisible designs, with PBDs (type `1^v`) and transversal designs as
//! special cases.

use std::collections::BTreeMap;
use std::fmt;

use crate::design::io::DesignFile;
use crate::design::{PairCounter, Point};
use crate::report::{VerificationReport, Witness};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gdd {
    v: u32,
    groups: Vec<Vec<Point>>,
    block_sizes: Vec<u32>,
    blocks: Vec<Vec<Point>>,
    lambda: u32,
}

impl Gdd {
    /// Sorts groups and blocks. Block sizes are taken from the blocks when
    /// `block_sizes` is `None`. Structural properties are left to
    /// [`verify_gdd`].
    pub fn new(
        v: u32,
        mut groups: Vec<Vec<Point>>,
        mut blocks: Vec<Vec<Point>>,
        block_sizes: Option<Vec<u32>>,
        lambda: u32,
    ) -> Self {
        for g in &mut groups {
            g.sort_unstable();
        }
        for b in &mut blocks {
            b.sort_unstable();
        }
        let mut block_sizes = block_sizes
            .unwrap_or_else(|| blocks.iter().map(|b| b.len() as u32).collect());
        block_sizes.sort_unstable();
        block_sizes.dedup();
        Self {
            v,
            groups,
            block_sizes,
            blocks,
            lambda,
        }
    }

    /// A PBD: every point is its own group.
    pub fn pbd(v: u32, blocks: Vec<Vec<Point>>) -> Self {
        Self::new(v, (0..v).map(|p| vec![p]).collect(), blocks, None, 1)
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn groups(&self) -> &[Vec<Point>] {
        &self.groups
    }

    pub fn blocks(&self) -> &[Vec<Point>] {
        &self.blocks
    }

    pub fn block_sizes(&self) -> &[u32] {
        &self.block_sizes
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    /// Group sizes with multiplicities, largest size first.
    pub fn group_type(&self) -> GroupType {
        GroupType::from_sizes(self.groups.iter().map(|g| g.len() as u32))
    }

    pub fn to_file(&self) -> DesignFile {
        DesignFile {
            v: self.v,
            block_sizes: self.block_sizes.clone(),
            lambda: self.lambda,
            blocks: self.blocks.clone(),
            classes: None,
            self_orthogonal: false,
            groups: Some(self.groups.clone()),
        }
    }

    pub fn from_file(f: &DesignFile) -> Result<Self> {
        let groups = f
            .groups
            .clone()
            .ok_or_else(|| Error::InvalidDesign("file has no groups section".into()))?;
        Ok(Self::new(
            f.v,
            groups,
            f.blocks.clone(),
            Some(f.block_sizes.clone()),
            f.lambda,
        ))
    }
}

/// Multiset of group sizes in exponential notation, e.g. `8^7 3^1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupType(pub BTreeMap<u32, u32>);

impl GroupType {
    pub fn from_sizes(sizes: impl IntoIterator<Item = u32>) -> Self {
        let mut m = BTreeMap::new();
        for s in sizes {
            *m.entry(s).or_insert(0) += 1;
        }
        Self(m)
    }

    pub fn uniform(size: u32, count: u32) -> Self {
        Self(BTreeMap::from([(size, count)]))
    }

    pub fn sizes(&self) -> Vec<u32> {
        self.0
            .iter()
            .rev()
            .flat_map(|(&s, &n)| std::iter::repeat(s).take(n as usize))
            .collect()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|(s, n)| s * n).sum()
    }

    pub fn count(&self) -> u32 {
        self.0.values().sum()
    }

    /// Parses `6^7`, `8^7 3^1` or `24^7,18^1`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut m = BTreeMap::new();
        for part in s.split([' ', ',']).filter(|p| !p.is_empty()) {
            let (size, count) = part.split_once('^').unwrap_or((part, "1"));
            let size: u32 = size
                .parse()
                .map_err(|_| Error::parse(1, format!("bad type `{s}`")))?;
            let count: u32 = count
                .parse()
                .map_err(|_| Error::parse(1, format!("bad type `{s}`")))?;
            *m.entry(size).or_insert(0) += count;
        }
        if m.is_empty() {
            return Err(Error::parse(1, "empty type"));
        }
        Ok(Self(m))
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .rev()
            .map(|(s, n)| format!("{s}^{n}"))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Checks the four GDD properties: groups partition the points, blocks have
/// declared sizes, blocks meet each group at most once, and every pair of
/// points from distinct groups lies in exactly `λ` blocks.
pub fn verify_gdd(g: &Gdd) -> VerificationReport {
    let mut report = VerificationReport::new();
    let v = g.v as usize;
    let mut group_of = vec![usize::MAX; v];
    let mut partition = None;
    for (gi, grp) in g.groups.iter().enumerate() {
        for &p in grp {
            if p as usize >= v {
                partition.get_or_insert((Witness::Group(gi), format!("point {p} out of range")));
            } else if group_of[p as usize] != usize::MAX {
                partition.get_or_insert((Witness::Point(p), "point in two groups".to_string()));
            } else {
                group_of[p as usize] = gi;
            }
        }
    }
    if partition.is_none() {
        if let Some(p) = group_of.iter().position(|&x| x == usize::MAX) {
            partition = Some((Witness::Point(p as Point), "point in no group".to_string()));
        }
    }
    report.record("group_partition", partition);

    let bad_size = g.blocks.iter().enumerate().find(|(_, b)| {
        !g.block_sizes.contains(&(b.len() as u32))
            || b.windows(2).any(|w| w[0] >= w[1])
            || b.iter().any(|&p| p as usize >= v)
    });
    report.record(
        "block_sizes",
        bad_size.map(|(l, b)| {
            (
                Witness::Block(l),
                format!("block {b:?} is not a set of size in {:?}", g.block_sizes),
            )
        }),
    );

    let mut transversal = None;
    for (l, b) in g.blocks.iter().enumerate() {
        let mut hit = std::collections::HashSet::new();
        for &p in b {
            if let Some(&gi) = group_of.get(p as usize) {
                if gi != usize::MAX && !hit.insert(gi) {
                    transversal = Some((Witness::Block(l), format!("meets group {gi} twice")));
                }
            }
        }
        if transversal.is_some() {
            break;
        }
    }
    report.record("blocks_meet_groups_once", transversal);

    let mut pairs = PairCounter::new(g.v);
    for b in &g.blocks {
        if b.iter().all(|&p| (p as usize) < v) {
            pairs.add_block(b);
        }
    }
    let lambda = g.lambda;
    let bad = pairs.find(|a, b, c| {
        let same = group_of[a as usize] == group_of[b as usize];
        (same && c != 0) || (!same && c != lambda)
    });
    report.record(
        "pair_balance",
        bad.map(|(a, b, c)| (Witness::Pair(a, b), format!("pair covered {c} times"))),
    );
    report
}

/// Deletes point `p` from a PBD of index 1: blocks through `p` (minus `p`)
/// become the groups, the other blocks remain. Points above `p` shift down by
/// one so the result lives on `0..v-1`.
pub fn pbd_delete_point(pbd: &Gdd, p: Point) -> Result<Gdd> {
    if pbd.lambda != 1 || pbd.groups.iter().any(|g| g.len() != 1) {
        return Err(Error::Precondition("input is not a PBD of index 1".into()));
    }
    verify_gdd(pbd).into_result("PBD")?;
    if p >= pbd.v {
        return Err(Error::Range(format!("point {p} not in 0..{}", pbd.v)));
    }
    let shift = |x: Point| if x > p { x - 1 } else { x };
    let mut groups = Vec::new();
    let mut blocks = Vec::new();
    for b in &pbd.blocks {
        if b.contains(&p) {
            groups.push(b.iter().filter(|&&x| x != p).map(|&x| shift(x)).collect());
        } else {
            blocks.push(b.iter().map(|&x| shift(x)).collect());
        }
    }
    let out = Gdd::new(pbd.v - 1, groups, blocks, None, 1);
    verify_gdd(&out).into_result("point-deleted GDD")?;
    Ok(out)
}

/// The affine plane `AG(2, q)` as a PBD on `q²` points with blocks of size
/// `q`; point `(x, y)` is `x q + y`.
pub fn affine_plane(field: &crate::ffield::FiniteField) -> Gdd {
    let q = field.order();
    let mut blocks = Vec::new();
    for c in 0..q {
        blocks.push((0..q).map(|y| c * q + y).collect());
    }
    for slope in 0..q {
        for icpt in 0..q {
            blocks.push(
                (0..q)
                    .map(|x| x * q + field.add(field.mul(slope, x), icpt))
                    .collect(),
            );
        }
    }
    Gdd::pbd(q * q, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::fixtures::fano;

    fn fano_pbd() -> Gdd {
        Gdd::pbd(7, fano().blocks().to_vec())
    }

    #[test]
    fn fano_as_pbd() {
        let g = fano_pbd();
        assert!(verify_gdd(&g).passed());
        assert_eq!(g.group_type().to_string(), "1^7");
        let broken = Gdd::pbd(7, fano().blocks()[1..].to_vec());
        assert!(!verify_gdd(&broken).passed());
    }

    #[test]
    fn deleting_a_fano_point() {
        let g = pbd_delete_point(&fano_pbd(), 0).unwrap();
        assert_eq!(g.group_type().to_string(), "2^3");
        assert_eq!(g.blocks().len(), 4);
        assert!(verify_gdd(&g).passed());
    }

    #[test]
    fn delete_point_rejects_index_two() {
        let mut blocks = fano().blocks().to_vec();
        blocks.extend(fano().blocks().to_vec());
        let g = Gdd::new(7, (0..7).map(|p| vec![p]).collect(), blocks, None, 2);
        assert!(matches!(pbd_delete_point(&g, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn type_notation() {
        let t = GroupType::parse("8^7 3^1").unwrap();
        assert_eq!(t.to_string(), "8^7 3^1");
        assert_eq!(t.total(), 59);
        assert_eq!(GroupType::parse("24^7,18^1").unwrap().total(), 186);
    }

    #[test]
    fn affine_plane_is_a_pbd() {
        let f = crate::ffield::FiniteField::prime(5).unwrap();
        let g = affine_plane(&f);
        assert!(verify_gdd(&g).passed());
        assert_eq!(g.blocks().len(), 30);
    }

    #[test]
    fn gdd_file_round_trip() {
        let g = pbd_delete_point(&fano_pbd(), 3).unwrap();
        let text = g.to_file().to_text();
        let back = Gdd::from_file(&DesignFile::parse(&text).unwrap()).unwrap();
        assert_eq!(back, g);
    }
}
