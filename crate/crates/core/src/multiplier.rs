//! Cyclic constructions over `Z_v` with a multiplier automorphism `m`.
//!
//! Base blocks `B_j` with translates `t_j` give the base class
//! `∪_{i,j} {m^i B_j, m^i (B_j + t_j)}` for `0 <= i < ord(m)`. Its additive
//! translates are the near-resolution classes of the duplicated design.

use crate::cyclic::develop_base_class;
use crate::design::{Design, Point, ResolutionClasses};
use crate::ffield::gcd;
use crate::report::{VerificationReport, Witness};
use crate::search::{Budget, SearchOutcome};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplierScheme {
    pub v: u32,
    pub m: u32,
    pub base_blocks: Vec<[u32; 3]>,
    pub translates: Vec<u32>,
}

/// Multiplicative order of `m` modulo `v`, or `None` when `gcd(m, v) > 1`.
pub fn multiplier_order(v: u32, m: u32) -> Option<u32> {
    if v < 2 || gcd(m as u64, v as u64) != 1 {
        return None;
    }
    let mut x = m % v;
    let mut k = 1;
    while x != 1 % v {
        x = (x as u64 * m as u64 % v as u64) as u32;
        k += 1;
    }
    Some(k)
}

/// `m^0, …, m^(ord - 1)` mod `v`.
fn powers(v: u32, m: u32, order: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(order as usize);
    let mut x = 1 % v;
    for _ in 0..order {
        out.push(x);
        x = (x as u64 * m as u64 % v as u64) as u32;
    }
    out
}

fn mul(v: u32, a: u32, b: u32) -> u32 {
    (a as u64 * b as u64 % v as u64) as u32
}

/// Checks `m` and the base-block count `(v - 1) / (6 ord(m))`.
fn validate_shape(v: u32, m: u32, blocks: usize) -> Result<u32> {
    if v < 7 || v % 6 != 1 {
        return Err(Error::ResidueClass(format!("v = {v} is not 1 mod 6")));
    }
    let order = multiplier_order(v, m)
        .ok_or_else(|| Error::Precondition(format!("{m} is not a unit mod {v}")))?;
    if (v - 1) % (6 * order) != 0 {
        return Err(Error::Precondition(format!(
            "6 · ord({m}) = {} does not divide v - 1 = {}",
            6 * order,
            v - 1
        )));
    }
    let need = ((v - 1) / (6 * order)) as usize;
    if blocks != need {
        return Err(Error::Precondition(format!(
            "{blocks} base blocks given, (v - 1) / (6 · {order}) = {need} required"
        )));
    }
    Ok(order)
}

/// The blocks `m^i B_j` develop additively into an STS iff the differences
/// `±m^i (b - b')` cover every nonzero residue exactly once.
pub fn verify_multiplier_family(v: u32, m: u32, blocks: &[[u32; 3]]) -> VerificationReport {
    let order = multiplier_order(v, m).unwrap_or(1);
    let mut count = vec![0u32; v as usize];
    for b in blocks {
        for &u in &powers(v, m, order) {
            for (i, j) in [(0, 1), (1, 2), (2, 0)] {
                let d = mul(v, u, (b[i] + v - b[j]) % v);
                count[d as usize] += 1;
                count[((v - d) % v) as usize] += 1;
            }
        }
    }
    let mut report = VerificationReport::new();
    let bad = (0..v).find(|&d| count[d as usize] != u32::from(d != 0));
    report.record(
        "difference_family",
        bad.map(|d| (Witness::Point(d), format!("difference {d} arises {} times", count[d as usize]))),
    );
    report
}

pub fn multiplier_base_class(sch: &MultiplierScheme) -> Result<Vec<Vec<Point>>> {
    let v = sch.v;
    let order = validate_shape(v, sch.m, sch.base_blocks.len())?;
    if sch.translates.len() != sch.base_blocks.len() {
        return Err(Error::Precondition(format!(
            "{} translates for {} base blocks",
            sch.translates.len(),
            sch.base_blocks.len()
        )));
    }
    verify_multiplier_family(v, sch.m, &sch.base_blocks).into_result("developed base blocks")?;
    let mut base = Vec::new();
    for (b, &t) in sch.base_blocks.iter().zip(&sch.translates) {
        for &u in &powers(v, sch.m, order) {
            base.push(b.iter().map(|&p| mul(v, u, p)).collect());
            base.push(b.iter().map(|&p| mul(v, u, (p + t) % v)).collect());
        }
    }
    Ok(base)
}

pub fn build_multiplier(sch: &MultiplierScheme) -> Result<(Design, ResolutionClasses)> {
    let base = multiplier_base_class(sch)?;
    develop_base_class(sch.v, 3, 2, &base)
}

/// Depth-first scan over translate vectors, block by block with translates
/// in increasing order. A partial vector is pruned when its shifted blocks
/// overlap the class built so far or when the class-pair differences
/// `±m^i t_j` repeat; both are necessary for the final design.
pub fn search_multiplier_translates(
    v: u32,
    m: u32,
    base_blocks: &[[u32; 3]],
    budget: &mut Budget,
) -> Result<SearchOutcome<Vec<u32>>> {
    let order = validate_shape(v, m, base_blocks.len())?;
    verify_multiplier_family(v, m, base_blocks).into_result("developed base blocks")?;
    let pw = powers(v, m, order);
    let mut covered = vec![false; v as usize];
    for b in base_blocks {
        for &u in &pw {
            for &p in b {
                let x = mul(v, u, p) as usize;
                if std::mem::replace(&mut covered[x], true) {
                    return Ok(SearchOutcome::Exhausted);
                }
            }
        }
    }
    let mut scan = TranslateScan {
        v,
        pw,
        blocks: base_blocks,
        covered,
        used_diff: vec![false; v as usize],
        t: Vec::new(),
    };
    Ok(match scan.run(budget) {
        None => SearchOutcome::OutOfBudget,
        Some(true) => {
            let t = scan.t;
            let sch = MultiplierScheme {
                v,
                m,
                base_blocks: base_blocks.to_vec(),
                translates: t.clone(),
            };
            build_multiplier(&sch)?;
            SearchOutcome::Found(t)
        }
        Some(false) => SearchOutcome::Exhausted,
    })
}

struct TranslateScan<'a> {
    v: u32,
    pw: Vec<u32>,
    blocks: &'a [[u32; 3]],
    covered: Vec<bool>,
    used_diff: Vec<bool>,
    t: Vec<u32>,
}

impl TranslateScan<'_> {
    /// Points and differences claimed by translate `t` of block `j`, or
    /// `None` on a clash.
    fn claim(&self, j: usize, t: u32) -> Option<(Vec<usize>, Vec<usize>)> {
        let v = self.v;
        let mut pts = Vec::with_capacity(3 * self.pw.len());
        let mut diffs = Vec::with_capacity(2 * self.pw.len());
        for &u in &self.pw {
            for &p in &self.blocks[j] {
                let x = mul(v, u, (p + t) % v) as usize;
                if self.covered[x] || pts.contains(&x) {
                    return None;
                }
                pts.push(x);
            }
            let d = mul(v, u, t);
            for x in [d as usize, ((v - d) % v) as usize] {
                if x == 0 || self.used_diff[x] || diffs.contains(&x) {
                    return None;
                }
                diffs.push(x);
            }
        }
        Some((pts, diffs))
    }

    fn run(&mut self, budget: &mut Budget) -> Option<bool> {
        let j = self.t.len();
        if j == self.blocks.len() {
            return Some(true);
        }
        for t in 1..self.v {
            if !budget.spend() {
                return None;
            }
            let Some((pts, diffs)) = self.claim(j, t) else {
                continue;
            };
            pts.iter().for_each(|&x| self.covered[x] = true);
            diffs.iter().for_each(|&x| self.used_diff[x] = true);
            self.t.push(t);
            match self.run(budget)? {
                true => return Some(true),
                false => {}
            }
            self.t.pop();
            pts.iter().for_each(|&x| self.covered[x] = false);
            diffs.iter().for_each(|&x| self.used_diff[x] = false);
        }
        Some(false)
    }
}

/// Outcome of reconciling a block list that is one longer than the counting
/// identity allows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSelection {
    pub dropped: usize,
    pub scheme: MultiplierScheme,
    /// Whether the given translates were used unchanged.
    pub translates_as_given: bool,
    /// Every dropped index whose remaining blocks verify with the given
    /// translates.
    pub verifying_drops: Vec<usize>,
}

/// Drops each block in turn. A drop is accepted when the remaining blocks
/// form a difference family under `m` and the given translates verify. When
/// no drop verifies with the given translates, the translate search runs on
/// each admissible drop in index order.
pub fn select_blocks(
    v: u32,
    m: u32,
    blocks: &[[u32; 3]],
    translates: &[u32],
    budget: &mut Budget,
) -> Result<SearchOutcome<BlockSelection>> {
    let mut verifying = Vec::new();
    let mut admissible = Vec::new();
    for drop in 0..blocks.len() {
        let rest: Vec<[u32; 3]> = blocks
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != drop)
            .map(|(_, b)| *b)
            .collect();
        if validate_shape(v, m, rest.len()).is_err() || !verify_multiplier_family(v, m, &rest).passed() {
            continue;
        }
        let sch = MultiplierScheme {
            v,
            m,
            base_blocks: rest,
            translates: translates.to_vec(),
        };
        if build_multiplier(&sch).is_ok() {
            verifying.push(drop);
        }
        admissible.push((drop, sch));
    }
    if let Some(&first) = verifying.first() {
        let scheme = admissible.into_iter().find(|(d, _)| *d == first).expect("recorded").1;
        return Ok(SearchOutcome::Found(BlockSelection {
            dropped: first,
            scheme,
            translates_as_given: true,
            verifying_drops: verifying,
        }));
    }
    for (drop, mut sch) in admissible {
        match search_multiplier_translates(v, m, &sch.base_blocks, budget)? {
            SearchOutcome::Found(t) => {
                sch.translates = t;
                return Ok(SearchOutcome::Found(BlockSelection {
                    dropped: drop,
                    scheme: sch,
                    translates_as_given: false,
                    verifying_drops: Vec::new(),
                }));
            }
            SearchOutcome::OutOfBudget => return Ok(SearchOutcome::OutOfBudget),
            SearchOutcome::Exhausted => {}
        }
    }
    Ok(SearchOutcome::Exhausted)
}

/// Multipliers `m` whose order `o` satisfies `6o | v - 1`, smallest first.
pub fn admissible_multipliers(v: u32) -> Vec<u32> {
    (1..v)
        .filter(|&m| multiplier_order(v, m).is_some_and(|o| (v - 1) % (6 * o) == 0))
        .collect()
}

/// Exhaustive search for any cyclic multiplier construction on `Z_v`: every
/// admissible multiplier, every family of base blocks avoiding 0 (sorted,
/// listed in increasing order) that develops into an STS, every translate
/// vector. Restricting to blocks avoiding 0 loses nothing: the base class is
/// fixed by `m`, so its uncovered point `h` satisfies `mh = h`; for `m = 1`
/// a translation moves `h` to 0, otherwise `h = 0` already when `m - 1` is a
/// unit, which [`search_cyclic`] checks.
pub fn search_cyclic(v: u32, budget: &mut Budget) -> Result<SearchOutcome<MultiplierScheme>> {
    if v > 31 {
        return Err(Error::SearchRefused(format!(
            "exhaustive cyclic search is limited to v <= 31, got {v}"
        )));
    }
    if v < 7 || v % 6 != 1 {
        return Err(Error::ResidueClass(format!("v = {v} is not 1 mod 6")));
    }
    let triples: Vec<[u32; 3]> = (1..v)
        .flat_map(|a| (a + 1..v).flat_map(move |b| (b + 1..v).map(move |c| [a, b, c])))
        .collect();
    for m in admissible_multipliers(v) {
        if m != 1 && gcd((m - 1) as u64, v as u64) != 1 {
            return Err(Error::SearchRefused(format!(
                "multiplier {m} fixes nonzero points of Z_{v}"
            )));
        }
        let n = ((v - 1) / (6 * multiplier_order(v, m).expect("unit"))) as usize;
        let mut family = Vec::with_capacity(n);
        if let Some(out) = families(v, m, n, &triples, 0, &mut family, budget)? {
            return Ok(out);
        }
    }
    Ok(SearchOutcome::Exhausted)
}

/// Extends `family` with triples from `start` on; at full size runs the
/// translate search. `Some(outcome)` stops the whole scan.
fn families(
    v: u32,
    m: u32,
    n: usize,
    triples: &[[u32; 3]],
    start: usize,
    family: &mut Vec<[u32; 3]>,
    budget: &mut Budget,
) -> Result<Option<SearchOutcome<MultiplierScheme>>> {
    if family.len() == n {
        if !verify_multiplier_family(v, m, family).passed() {
            return Ok(None);
        }
        return Ok(match search_multiplier_translates(v, m, family, budget)? {
            SearchOutcome::Found(t) => Some(SearchOutcome::Found(MultiplierScheme {
                v,
                m,
                base_blocks: family.clone(),
                translates: t,
            })),
            SearchOutcome::OutOfBudget => Some(SearchOutcome::OutOfBudget),
            SearchOutcome::Exhausted => None,
        });
    }
    for i in start..triples.len() {
        if !budget.spend() {
            return Ok(Some(SearchOutcome::OutOfBudget));
        }
        family.push(triples[i]);
        let out = families(v, m, n, triples, i + 1, family, budget)?;
        family.pop();
        if out.is_some() {
            return Ok(out);
        }
    }
    Ok(None)
}
