//! Block size 4 over `F_q`, `q ≡ 1 (mod 12)`, with `H = C_0` of index 12.
//! The base class is `{hB, h(B + t_1), h(B + t_2) : h ∈ H}`; developed
//! additively it is a near resolution of the tripled `(q, 4, 1)` design.

use crate::cyclic::develop_base_class;
use crate::design::{Design, Point, ResolutionClasses};
use crate::ffield::{is_prime, CosetIndexing, FiniteField};
use crate::report::{VerificationReport, Witness};
use crate::search::{Budget, SearchOutcome};
use crate::{Error, Result};

const INDEX: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct K4Instance {
    pub q: u32,
    pub base: [u32; 4],
    pub translates: (u32, u32),
}

fn indexing(q: u32, omega: Option<u32>) -> Result<CosetIndexing> {
    if !is_prime(q as u64) {
        return Err(Error::NotPrime(q as u64));
    }
    if q % 12 != 1 {
        return Err(Error::ResidueClass(format!("q = {q} is not 1 mod 12")));
    }
    let field = FiniteField::prime(q)?;
    match omega {
        Some(w) => CosetIndexing::with_generator(&field, w, INDEX),
        None => CosetIndexing::new(&field, INDEX),
    }
}

/// Cosets of `values` are distinct (all values nonzero), else the first clash.
fn distinct_cosets(idx: &CosetIndexing, values: &[u32]) -> Option<(Witness, String)> {
    let mut seen = [None; INDEX as usize];
    for &v in values {
        if v == 0 {
            return Some((Witness::Point(0), "zero value".to_string()));
        }
        let c = idx.coset_fast(v, INDEX) as usize;
        if let Some(prev) = seen[c].replace(v) {
            return Some((Witness::Point(v), format!("{prev} and {v} share coset {c}")));
        }
    }
    None
}

fn ordered_differences(f: &FiniteField, b: &[u32; 4]) -> Vec<u32> {
    let mut out = Vec::with_capacity(12);
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                out.push(f.sub(b[i], b[j]));
            }
        }
    }
    out
}

pub fn verify_k4_conditions(idx: &CosetIndexing, base: [u32; 4], t: (u32, u32)) -> VerificationReport {
    let f = idx.field();
    let mut report = VerificationReport::new();
    report.record("differences", distinct_cosets(idx, &ordered_differences(f, &base)));
    let hits: Vec<u32> = [0, t.0, t.1]
        .iter()
        .flat_map(|&s| base.map(|p| f.add(p, s)))
        .collect();
    report.record("coset_hits", distinct_cosets(idx, &hits));
    let d = f.sub(t.0, t.1);
    let tr = [t.0, f.neg(t.0), t.1, f.neg(t.1), d, f.neg(d)];
    report.record("translate_cosets", distinct_cosets(idx, &tr));
    report
}

pub fn k4_base_class(idx: &CosetIndexing, base: [u32; 4], t: (u32, u32)) -> Vec<Vec<Point>> {
    let f = idx.field();
    let mut out = Vec::new();
    for h in idx.subgroup(INDEX) {
        for s in [0, t.0, t.1] {
            out.push(base.iter().map(|&p| f.mul(h, f.add(p, s))).collect());
        }
    }
    out
}

/// The tripled design with its `q` self-orthogonal near-resolution classes.
pub fn build_k4(
    q: u32,
    omega: Option<u32>,
    base: [u32; 4],
    translates: (u32, u32),
) -> Result<(Design, ResolutionClasses)> {
    let idx = indexing(q, omega)?;
    verify_k4_conditions(&idx, base, translates).into_result("block-size-4 conditions")?;
    develop_base_class(q, 4, 3, &k4_base_class(&idx, base, translates))
}

/// Exhaustive scan over `B = {1, a, b, c}` with `1 < a < b < c` and
/// `t_1 < t_2`. Scaling by a field element preserves every condition, so some
/// element of `B` may be taken as 1.
pub fn search_k4(q: u32, budget: &mut Budget) -> Result<SearchOutcome<K4Instance>> {
    let idx = indexing(q, None)?;
    let f = idx.field().clone();
    let c = |x: u32| idx.coset_fast(x, INDEX);
    // Pair (u, v) contributes cosets of u - v and v - u.
    let pair = |u: u32, v: u32| (c(f.sub(u, v)), c(f.sub(v, u)));
    for a in 2..q {
        let (p, n) = pair(a, 1);
        if p == n {
            continue;
        }
        let m1 = 1u16 << p | 1 << n;
        for b in a + 1..q {
            let add = |m: u16, (x, y): (u32, u32)| -> Option<u16> {
                (x != y && m >> x & 1 == 0 && m >> y & 1 == 0).then(|| m | 1 << x | 1 << y)
            };
            let Some(m2) = add(m1, pair(b, 1)).and_then(|m| add(m, pair(b, a))) else {
                continue;
            };
            for cc in b + 1..q {
                if !budget.spend() {
                    return Ok(SearchOutcome::OutOfBudget);
                }
                let full = add(m2, pair(cc, 1))
                    .and_then(|m| add(m, pair(cc, a)))
                    .and_then(|m| add(m, pair(cc, b)));
                if full.is_none() {
                    continue;
                }
                let base = [1, a, b, cc];
                if let Some(t) = search_translates(&idx, base, budget) {
                    return Ok(match t {
                        Some(t) => SearchOutcome::Found(K4Instance { q, base, translates: t }),
                        None => SearchOutcome::OutOfBudget,
                    });
                }
            }
        }
    }
    Ok(SearchOutcome::Exhausted)
}

/// `None`: no pair for this block. `Some(None)`: budget ran out.
fn search_translates(idx: &CosetIndexing, base: [u32; 4], budget: &mut Budget) -> Option<Option<(u32, u32)>> {
    let f = idx.field();
    let q = f.order();
    let c = |x: u32| idx.coset_fast(x, INDEX);
    let mask_of = |s: u32, m: u16| -> Option<u16> {
        let mut m = m;
        for &p in &base {
            let x = f.add(p, s);
            if x == 0 {
                return None;
            }
            let k = c(x);
            if m >> k & 1 == 1 {
                return None;
            }
            m |= 1 << k;
        }
        Some(m)
    };
    let m0 = mask_of(0, 0)?;
    for t1 in 1..q {
        let Some(m1) = mask_of(t1, m0) else { continue };
        for t2 in t1 + 1..q {
            if !budget.spend() {
                return Some(None);
            }
            if mask_of(t2, m1).is_none() {
                continue;
            }
            if verify_k4_conditions(idx, base, (t1, t2)).passed() {
                return Some(Some((t1, t2)));
            }
        }
    }
    None
}
