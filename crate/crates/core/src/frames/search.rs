//! Frame search.
//!
//! Exhaustive mode fills rows in order; each row is built as a partition of
//! `V ∖ G_i` into triples, every triple placed in a free cell of a column
//! that still lacks its points. Pairs are used at most once. Those local
//! constraints are enough: a full assignment is a frame, since a point of
//! `G_i` can only sit in the `t - t_i` columns outside hole `i` and must
//! appear once in each of them.
//!
//! Randomized mode on a uniform type `h^u` with `n = u h / 2` odd looks for
//! a frame invariant under `Z_n` acting on points `(x, s) ↦ (x + 1, s)` and
//! on cells `(r, c) ↦ (r + 1, c + 1)`, so only one row is searched, as an
//! exact cover whose option order is shuffled by the seed. Other types run
//! the exhaustive engine with shuffled candidates.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{verify_frame, Frame};
use crate::design::Point;
use crate::exact_cover::ExactCover;
use crate::gdd::GroupType;
use crate::search::{Budget, SearchOutcome};
use crate::{Error, Result};

/// Exhaustive search is refused above this many points.
pub const EXHAUSTIVE_MAX_POINTS: u32 = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameSearch {
    /// Complete scan; `Exhausted` proves that no frame of the type exists.
    Exhaustive,
    /// Seeded scan over cyclic frames for uniform types, shuffled scan
    /// otherwise. `Exhausted` only rules out the searched family.
    Randomized { seed: u64 },
}

pub fn search_frame(ftype: &GroupType, mode: FrameSearch, budget: &mut Budget) -> Result<SearchOutcome<Frame>> {
    let sizes = ftype.sizes();
    if sizes.iter().any(|s| s % 2 == 1 || *s == 0) {
        return Err(Error::Precondition(format!("frame type {ftype} has an odd or zero group size")));
    }
    if sizes.len() < 3 {
        return Ok(SearchOutcome::Exhausted);
    }
    let out = match mode {
        FrameSearch::Exhaustive => {
            if ftype.total() > EXHAUSTIVE_MAX_POINTS {
                return Err(Error::SearchRefused(format!(
                    "exhaustive frame search is limited to {EXHAUSTIVE_MAX_POINTS} points, type {ftype} has {}",
                    ftype.total()
                )));
            }
            GeneralScan::new(&sizes, None).run(budget)
        }
        FrameSearch::Randomized { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            match ftype.0.keys().collect::<Vec<_>>().as_slice() {
                [&h] if (h / 2 * ftype.count()) % 2 == 1 => CyclicScan::new(h, ftype.count()).search(&mut rng, budget),
                _ => GeneralScan::new(&sizes, Some(rng)).run(budget),
            }
        }
    };
    if let SearchOutcome::Found(f) = &out {
        verify_frame(f).into_result("searched frame")?;
    }
    Ok(out)
}

/// Groups are consecutive point ranges in the order of `sizes`.
fn groups_of(sizes: &[u32]) -> Vec<Vec<Point>> {
    let mut next = 0;
    sizes
        .iter()
        .map(|&s| {
            let g = (next..next + s).collect();
            next += s;
            g
        })
        .collect()
}

struct GeneralScan {
    v: usize,
    side: u32,
    group_of: Vec<usize>,
    /// Hole of every row and column.
    hole: Vec<usize>,
    groups: Vec<Vec<Point>>,
    cells: BTreeMap<(u32, u32), [Point; 3]>,
    row_used: Vec<bool>,
    col_used: Vec<Vec<bool>>,
    pair_used: Vec<bool>,
    rng: Option<ChaCha8Rng>,
}

impl GeneralScan {
    fn new(sizes: &[u32], rng: Option<ChaCha8Rng>) -> Self {
        let groups = groups_of(sizes);
        let v = sizes.iter().sum::<u32>() as usize;
        let mut group_of = vec![0; v];
        let mut hole = Vec::new();
        for (gi, g) in groups.iter().enumerate() {
            for &p in g {
                group_of[p as usize] = gi;
            }
            hole.extend(std::iter::repeat(gi).take(g.len() / 2));
        }
        let side = (v / 2) as u32;
        Self {
            v,
            side,
            group_of,
            hole,
            groups,
            cells: BTreeMap::new(),
            row_used: vec![false; v],
            col_used: vec![vec![false; v]; v / 2],
            pair_used: vec![false; v * v],
            rng,
        }
    }

    fn run(mut self, budget: &mut Budget) -> SearchOutcome<Frame> {
        self.reset_row(0);
        match self.fill(0, budget) {
            None => SearchOutcome::OutOfBudget,
            Some(false) => SearchOutcome::Exhausted,
            Some(true) => SearchOutcome::Found(
                Frame::new(self.groups.clone(), std::mem::take(&mut self.cells)).expect("even groups"),
            ),
        }
    }

    /// Marks the hole's own points as unavailable in row `r`.
    fn reset_row(&mut self, r: u32) {
        let h = self.hole[r as usize];
        for p in 0..self.v {
            self.row_used[p] = self.group_of[p] == h;
        }
    }

    fn pair(&self, a: Point, b: Point) -> usize {
        a as usize * self.v + b as usize
    }

    fn fill(&mut self, r: u32, budget: &mut Budget) -> Option<bool> {
        let Some(p) = self.row_used.iter().position(|u| !u) else {
            if r + 1 == self.side {
                return Some(true);
            }
            let saved = self.row_used.clone();
            self.reset_row(r + 1);
            let out = self.fill(r + 1, budget);
            self.row_used = saved;
            return out;
        };
        let p = p as Point;
        let hr = self.hole[r as usize];
        let mut cands = Vec::new();
        for q in p + 1..self.v as Point {
            if self.row_used[q as usize] || self.group_of[q as usize] == self.group_of[p as usize] || self.pair_used[self.pair(p, q)] {
                continue;
            }
            for s in q + 1..self.v as Point {
                let (gp, gq, gs) = (self.group_of[p as usize], self.group_of[q as usize], self.group_of[s as usize]);
                if self.row_used[s as usize] || gs == gp || gs == gq || self.pair_used[self.pair(p, s)] || self.pair_used[self.pair(q, s)] {
                    continue;
                }
                for c in 0..self.side {
                    let hc = self.hole[c as usize];
                    if hc == hr || self.cells.contains_key(&(r, c)) {
                        continue;
                    }
                    if [gp, gq, gs].contains(&hc) || [p, q, s].iter().any(|&x| self.col_used[c as usize][x as usize]) {
                        continue;
                    }
                    cands.push(([p, q, s], c));
                }
            }
        }
        if let Some(rng) = &mut self.rng {
            cands.shuffle(rng);
        }
        for (b, c) in cands {
            if !budget.spend() {
                return None;
            }
            self.place(r, c, b, true);
            let out = self.fill(r, budget);
            if out != Some(false) {
                return out;
            }
            self.place(r, c, b, false);
        }
        Some(false)
    }

    fn place(&mut self, r: u32, c: u32, b: [Point; 3], on: bool) {
        for &x in &b {
            self.row_used[x as usize] = on;
            self.col_used[c as usize][x as usize] = on;
        }
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let (a, d) = (self.pair(b[i], b[j]), self.pair(b[j], b[i]));
            self.pair_used[a] = on;
            self.pair_used[d] = on;
        }
        if on {
            self.cells.insert((r, c), b);
        } else {
            self.cells.remove(&(r, c));
        }
    }
}

/// Cyclic frames of type `h^u` with `n = u h / 2` odd. Points are
/// `Z_n × {0, 1}`, point `(x, s)` numbered `2x + s`; group `i` holds the
/// points with `x ≡ i (mod u)`. Lines are `Z_n`, line `g` belonging to hole
/// `g mod u`.
///
/// A base cell `(0, d)` with block `B` develops to cells `(g, g + d)` with
/// blocks `B + g`. The base row is an exact cover: it and column 0 (which
/// receives `B - d`) each partition the points outside group 0, every
/// unordered pair orbit, named by its layers and difference, is hit once,
/// and each base cell holds at most one block.
///
/// With a multiplier `m`, the base row is also required to be invariant
/// under `(x, s) ↦ (m x, s)`, `d ↦ m d`; items and options become orbits.
struct CyclicScan {
    n: u32,
    u: u32,
    h: u32,
}

impl CyclicScan {
    fn new(h: u32, u: u32) -> Self {
        Self { n: u * h / 2, u, h }
    }

    fn split(&self, p: Point) -> (u32, u32) {
        (p / 2, p % 2)
    }

    fn shift(&self, p: Point, by: u32) -> Point {
        let (x, s) = self.split(p);
        ((x + by) % self.n) * 2 + s
    }

    fn scale(&self, p: Point, m: u32) -> Point {
        let (x, s) = self.split(p);
        (x * m % self.n) * 2 + s
    }

    fn group(&self, p: Point) -> u32 {
        p / 2 % self.u
    }

    /// Pair orbit `(s, t, δ)` with `s <= t`, `δ` normalized up to sign when `s = t`.
    fn pair_orbit(&self, a: Point, b: Point) -> (u32, u32, u32) {
        let n = self.n;
        let ((x, s), (y, t)) = (self.split(a), self.split(b));
        let (s, t, delta) = if s <= t { (s, t, (y + n - x) % n) } else { (t, s, (x + n - y) % n) };
        let delta = if s == t { delta.min(n - delta) } else { delta };
        (s, t, delta)
    }

    /// Hole-contiguous numbering of line `g`.
    fn line(&self, g: u32) -> u32 {
        (g % self.u) * (self.h / 2) + g / self.u
    }

    fn powers(&self, m: u32) -> Vec<u32> {
        let mut out = vec![1];
        let mut x = m % self.n;
        while x != 1 {
            out.push(x);
            x = x * m % self.n;
        }
        out
    }

    /// Multipliers whose order divides the base-row block count and whose
    /// orbits on points, differences and adders outside group 0 are all full.
    fn multipliers(&self) -> Vec<u32> {
        let n = self.n;
        let blocks = (2 * n - self.h) / 3;
        (2..n)
            .filter(|&m| crate::ffield::gcd(m as u64, n as u64) == 1)
            .filter(|&m| {
                let pw = self.powers(m);
                let o = pw.len() as u32;
                blocks % o == 0
                    && (1..n).filter(|x| x % self.u != 0).all(|x| {
                        pw[1..].iter().all(|&k| {
                            let y = x * k % n;
                            y != x && y != n - x
                        })
                    })
            })
            .collect()
    }

    fn run(&self, m: u32, rng: &mut ChaCha8Rng, budget: &mut Budget) -> SearchOutcome<Frame> {
        let (n, u) = (self.n, self.u);
        let v = 2 * n;
        let pw = self.powers(m);
        // Orbit representatives: smallest element of each orbit.
        let point_rep = |p: Point| pw.iter().map(|&k| self.scale(p, k)).min().unwrap();
        let adder_rep = |d: u32| pw.iter().map(|&k| d * k % n).min().unwrap();
        let orbit_rep = |o: (u32, u32, u32)| {
            pw.iter()
                .map(|&k| {
                    let d = o.2 * k % n;
                    (o.0, o.1, if o.0 == o.1 { d.min(n - d) } else { d })
                })
                .min()
                .unwrap()
        };
        let mut point_item = std::collections::HashMap::new();
        for p in (0..v).filter(|&p| self.group(p) != 0) {
            let k = point_item.len();
            point_item.entry(point_rep(p)).or_insert(k);
        }
        let rows = point_item.len();
        let mut orbit_index = std::collections::HashMap::new();
        for (s, t) in [(0, 0), (0, 1), (1, 1)] {
            for delta in 1..n {
                if delta % u == 0 {
                    continue;
                }
                let k = orbit_index.len();
                orbit_index.entry(orbit_rep((s, t, delta))).or_insert(k);
            }
        }
        let mut adder_index = std::collections::HashMap::new();
        for d in (1..n).filter(|d| d % u != 0) {
            let k = adder_index.len();
            adder_index.entry(adder_rep(d)).or_insert(k);
        }
        let primary = 2 * rows + orbit_index.len();

        let outside: Vec<Point> = (0..v).filter(|&p| self.group(p) != 0).collect();
        let mut seen = std::collections::HashSet::new();
        let mut options = Vec::new();
        for (i, &p) in outside.iter().enumerate() {
            for (k, &q) in outside.iter().enumerate().skip(i + 1) {
                if self.group(q) == self.group(p) {
                    continue;
                }
                for &r in &outside[k + 1..] {
                    if self.group(r) == self.group(p) || self.group(r) == self.group(q) {
                        continue;
                    }
                    let b = [p, q, r];
                    for d in (1..n).filter(|d| d % u != 0) {
                        if b.iter().any(|&x| self.group(x) == d % u) {
                            continue;
                        }
                        let mut items: Vec<usize> = b.iter().map(|&x| point_item[&point_rep(x)]).collect();
                        items.extend(b.iter().map(|&x| rows + point_item[&point_rep(self.shift(x, n - d))]));
                        items.extend(
                            [(p, q), (p, r), (q, r)]
                                .iter()
                                .map(|&(a, c)| 2 * rows + orbit_index[&orbit_rep(self.pair_orbit(a, c))]),
                        );
                        items.push(primary + adder_index[&adder_rep(d)]);
                        let mut sorted = items.clone();
                        sorted.sort_unstable();
                        if sorted.windows(2).any(|w| w[0] == w[1]) || !seen.insert(sorted) {
                            continue;
                        }
                        options.push((d, b, items));
                    }
                }
            }
        }
        options.shuffle(rng);
        let mut x = ExactCover::new(primary, adder_index.len());
        for (_, _, items) in &options {
            x.add_option(items);
        }
        x.solve(budget).map(|chosen| {
            let groups: Vec<Vec<Point>> = (0..u)
                .map(|i| (0..v).filter(|&p| self.group(p) == i).collect())
                .collect();
            let mut cells = BTreeMap::new();
            for k in chosen {
                let (d, b, _) = &options[k];
                for &mk in &pw {
                    let (d, b) = (d * mk % n, b.map(|p| self.scale(p, mk)));
                    for g in 0..n {
                        cells.insert((self.line(g), self.line((g + d) % n)), b.map(|p| self.shift(p, g)));
                    }
                }
            }
            Frame::new(groups, cells).expect("even groups")
        })
    }

    /// Multiplier-invariant families first, then the plain cyclic family.
    fn search(&self, rng: &mut ChaCha8Rng, budget: &mut Budget) -> SearchOutcome<Frame> {
        for m in self.multipliers().into_iter().chain([1]) {
            match self.run(m, rng, budget) {
                SearchOutcome::Exhausted => continue,
                out => return out,
            }
        }
        SearchOutcome::Exhausted
    }
}
