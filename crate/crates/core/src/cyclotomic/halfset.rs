//! The ordered-halfset variant: a base block `B`, an ordered halfset
//! `h_1, …, h_s` of the index-3 subgroup `G` and translates `t_1, …, t_s`.
//! The base class is `∪_i {h_i B, h_i B + t_i}`.

use crate::cyclic::develop_base_class;
use crate::design::{Design, Point, ResolutionClasses};
use crate::ffield::{is_prime, CosetIndexing, FiniteField, Halfset};
use crate::report::{VerificationReport, Witness};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfsetStarter {
    pub base_block: [u32; 3],
    pub ordered_halfset: Vec<u32>,
    pub translates: Vec<u32>,
}

fn prime_field(q: u32) -> Result<FiniteField> {
    if !is_prime(q as u64) {
        return Err(Error::NotPrime(q as u64));
    }
    if q % 6 != 1 {
        return Err(Error::ResidueClass(format!("q = {q} is not 1 mod 6")));
    }
    FiniteField::prime(q)
}

fn index3_subgroup(field: &FiniteField) -> Result<Vec<u32>> {
    let mut g = CosetIndexing::new(field, 3)?.subgroup(3);
    g.sort_unstable();
    Ok(g)
}

/// The blocks `h_i B` develop into an STS iff the `±h_i (b - b')` cover each
/// nonzero element exactly once.
fn verify_difference_family(field: &FiniteField, b: [u32; 3], h: &[u32]) -> VerificationReport {
    let q = field.order();
    let mut count = vec![0u32; q as usize];
    for &m in h {
        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
            let d = field.mul(m, field.sub(b[i], b[j]));
            count[d as usize] += 1;
            count[field.neg(d) as usize] += 1;
        }
    }
    let mut report = VerificationReport::new();
    let bad = (0..q).find(|&d| count[d as usize] != u32::from(d != 0));
    report.record(
        "difference_family",
        bad.map(|d| {
            (
                Witness::Point(d),
                format!("difference {d} arises {} times", count[d as usize]),
            )
        }),
    );
    report
}

/// Validates the halfset and the difference family, then returns the base class.
pub fn halfset_base_class(q: u32, hs: &HalfsetStarter) -> Result<Vec<Vec<Point>>> {
    let field = prime_field(q)?;
    let g = index3_subgroup(&field)?;
    Halfset::new(&field, g, hs.ordered_halfset.clone())?;
    if hs.translates.len() != hs.ordered_halfset.len() {
        return Err(Error::Precondition(format!(
            "{} halfset elements but {} translates",
            hs.ordered_halfset.len(),
            hs.translates.len()
        )));
    }
    verify_difference_family(&field, hs.base_block, &hs.ordered_halfset)
        .into_result("base blocks")?;
    let mut base = Vec::with_capacity(2 * hs.translates.len());
    for (&m, &t) in hs.ordered_halfset.iter().zip(&hs.translates) {
        let block = hs.base_block.map(|p| field.mul(m, p));
        base.push(block.to_vec());
        base.push(block.iter().map(|&p| field.add(p, t)).collect());
    }
    Ok(base)
}

pub fn build_halfset_starter(q: u32, hs: &HalfsetStarter) -> Result<(Design, ResolutionClasses)> {
    let base = halfset_base_class(q, hs)?;
    develop_base_class(q, 3, 2, &base)
}

/// Result of completing a published partial halfset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfsetDerivation {
    pub starter: HalfsetStarter,
    /// The element added to the halfset and its position in the order.
    pub inserted: u32,
    pub position: usize,
    /// Every `(position, element)` completion that verifies, in scan order.
    pub verifying: Vec<(usize, u32)>,
}

/// Completes a halfset that lacks one `±` pair so that the given translates
/// verify. Tries both elements of `G ∖ ±h` at every position, position-major
/// with the smaller element first, and returns the first completion whose
/// developed design passes all oracles, along with the full list of
/// verifying completions. `None` when no completion verifies.
pub fn derive_halfset_starter(
    q: u32,
    base_block: [u32; 3],
    partial_h: &[u32],
    translates: &[u32],
) -> Result<Option<HalfsetDerivation>> {
    let field = prime_field(q)?;
    let g = index3_subgroup(&field)?;
    let mut covered = std::collections::HashSet::new();
    for &m in partial_h {
        for x in [m, field.neg(m)] {
            if !covered.insert(x) {
                return Err(Error::NotHalfset(format!("{x} occurs twice in h ∪ -h")));
            }
        }
    }
    let missing: Vec<u32> = g.iter().copied().filter(|x| !covered.contains(x)).collect();
    if missing.len() != 2 {
        return Err(Error::Precondition(format!(
            "expected one missing ± pair, found {} missing elements",
            missing.len()
        )));
    }
    if translates.len() != partial_h.len() + 1 {
        return Err(Error::Precondition(format!(
            "{} translates for {} halfset elements",
            translates.len(),
            partial_h.len() + 1
        )));
    }
    let mut verifying = Vec::new();
    let mut first = None;
    for position in 0..translates.len() {
        for &s in &missing {
            let mut h = partial_h.to_vec();
            h.insert(position, s);
            let starter = HalfsetStarter {
                base_block,
                ordered_halfset: h,
                translates: translates.to_vec(),
            };
            if build_halfset_starter(q, &starter).is_ok() {
                verifying.push((position, s));
                first.get_or_insert((starter, s, position));
            }
        }
    }
    Ok(first.map(|(starter, inserted, position)| HalfsetDerivation {
        starter,
        inserted,
        position,
        verifying,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: [u32; 3] = [1, 13, 17];
    const H15: [u32; 15] = [28, 8, 67, 33, 46, 70, 77, 22, 63, 18, 78, 50, 55, 12, 52];
    const T16: [u32; 16] = [41, 93, 79, 55, 48, 45, 74, 54, 34, 53, 20, 1, 25, 35, 70, 12];

    #[test]
    fn missing_pair_is_plus_minus_one() {
        let field = FiniteField::prime(97).unwrap();
        let g = index3_subgroup(&field).unwrap();
        assert_eq!(g.len(), 32);
        let mut rest: Vec<u32> = g
            .into_iter()
            .filter(|x| !H15.contains(x) && !H15.contains(&(97 - x)))
            .collect();
        rest.sort_unstable();
        assert_eq!(rest, vec![1, 96]);
    }

    #[test]
    fn derivation_golden() {
        let d = derive_halfset_starter(97, B, &H15, &T16).unwrap().unwrap();
        assert_eq!((d.position, d.inserted), (0, 1));
        assert_eq!(d.verifying, vec![(0, 1)]);
        let base = halfset_base_class(97, &d.starter).unwrap();
        let mut seen = vec![false; 97];
        base.iter().flatten().for_each(|&p| seen[p as usize] = true);
        assert_eq!(seen.iter().position(|&c| !c), Some(49));
    }

    #[test]
    fn zero_translates_rejected() {
        let mut h = H15.to_vec();
        h.insert(0, 1);
        let hs = HalfsetStarter {
            base_block: B,
            ordered_halfset: h,
            translates: vec![0; 16],
        };
        assert!(matches!(build_halfset_starter(97, &hs), Err(Error::Verification { .. })));
    }

    #[test]
    fn non_halfset_rejected() {
        let mut h = H15.to_vec();
        h.insert(0, 97 - 28);
        let hs = HalfsetStarter {
            base_block: B,
            ordered_halfset: h,
            translates: T16.to_vec(),
        };
        assert!(matches!(build_halfset_starter(97, &hs), Err(Error::NotHalfset(_))));
    }
}
