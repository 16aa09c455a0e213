//! Starter/translate constructions over prime fields `F_q`, `q ≡ 1 (mod 6)`.
//!
//! Write `q - 1 = 6 · 2^e · s` with `s` odd. `G` is the subgroup of index
//! `3 · 2^e` and `H = C_0` the subgroup of index `6 · 2^e`, a halfset of `G`.
//! A starter is a list of `2^e` quadruples `(x, y, z; t)`; the base class is
//! `{h{x,y,z}, h{x,y,z} + ht : h ∈ H}` over all quadruples and class `a` is
//! its translate by `a`.

mod halfset;
mod k4;

pub use halfset::{
    build_halfset_starter, derive_halfset_starter, halfset_base_class, HalfsetDerivation,
    HalfsetStarter,
};
pub use k4::{build_k4, search_k4, verify_k4_conditions, K4Instance};

use std::fmt;

use crate::cyclic::develop_base_class;
use crate::design::{Design, Point, ResolutionClasses};
use crate::ffield::{is_prime, CosetIndexing, FiniteField};
use crate::report::{VerificationReport, Witness};
use crate::search::{Budget, SearchOutcome};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StarterQuadruple {
    pub x: u32,
    pub y: u32,
    pub z: u32,
    pub t: u32,
}

impl StarterQuadruple {
    pub fn new(x: u32, y: u32, z: u32, t: u32) -> Self {
        Self { x, y, z, t }
    }

    pub fn block(&self) -> [u32; 3] {
        [self.x, self.y, self.z]
    }
}

impl fmt::Display for StarterQuadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}, {}}} t={}", self.x, self.y, self.z, self.t)
    }
}

/// The 2-adic shape of `q - 1 = 6 · 2^e · s`, `s` odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclotomicShape {
    pub q: u32,
    pub e: u32,
}

impl CyclotomicShape {
    pub fn of(q: u32) -> Result<Self> {
        if !is_prime(q as u64) {
            return Err(Error::NotPrime(q as u64));
        }
        if q < 7 || q % 6 != 1 {
            return Err(Error::ResidueClass(format!("q = {q} is not 1 mod 6")));
        }
        let e = ((q - 1) / 6).trailing_zeros();
        Ok(Self { q, e })
    }

    /// Number of quadruples a starter needs.
    pub fn quadruples(&self) -> usize {
        1 << self.e
    }

    pub fn g_index(&self) -> u32 {
        3 << self.e
    }

    pub fn h_index(&self) -> u32 {
        6 << self.e
    }
}

/// Field, coset numbering for `H` and the shape, built once per `q`.
#[derive(Debug, Clone)]
pub struct CyclotomicSetup {
    shape: CyclotomicShape,
    idx: CosetIndexing,
}

impl CyclotomicSetup {
    /// `omega` defaults to the smallest generator. Coset membership does not
    /// depend on it; only the order of `H` does.
    pub fn new(q: u32, omega: Option<u32>) -> Result<Self> {
        let shape = CyclotomicShape::of(q)?;
        let field = FiniteField::prime(q)?;
        let idx = match omega {
            Some(w) => CosetIndexing::with_generator(&field, w, shape.h_index())?,
            None => CosetIndexing::new(&field, shape.h_index())?,
        };
        Ok(Self { shape, idx })
    }

    pub fn shape(&self) -> CyclotomicShape {
        self.shape
    }

    pub fn indexing(&self) -> &CosetIndexing {
        &self.idx
    }

    /// `H = C_0` in exponent order `ω^0, ω^m, ω^2m, …`.
    pub fn h(&self) -> Vec<u32> {
        self.idx.subgroup(self.shape.h_index())
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        self.idx.field().add(a, b)
    }

    fn sub(&self, a: u32, b: u32) -> u32 {
        self.idx.field().sub(a, b)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        self.idx.field().mul(a, b)
    }
}

/// Checks conditions (1) to (3) jointly over all quadruples: the `3 · 2^e`
/// differences lie in distinct cosets of `G`, the `6 · 2^e` points `x, …,
/// z + t` in distinct cosets of `H`, and the translates in distinct cosets of
/// `G`. Joint distinctness is what makes the development an STS and the base
/// class a partition.
pub fn verify_conditions(setup: &CyclotomicSetup, quads: &[StarterQuadruple]) -> VerificationReport {
    let mut report = VerificationReport::new();
    let shape = setup.shape;
    let idx = &setup.idx;
    let (gi, hi) = (shape.g_index(), shape.h_index());

    report.record(
        "quadruple_count",
        (quads.len() != shape.quadruples()).then(|| {
            (
                Witness::Text(quads.len().to_string()),
                format!("expected 2^e = {} quadruples", shape.quadruples()),
            )
        }),
    );

    let nonzero = quads.iter().enumerate().find_map(|(i, s)| {
        let pts = [s.x, s.y, s.z];
        let bad = pts.iter().any(|&p| p == 0 || p >= shape.q)
            || s.t == 0
            || s.t >= shape.q
            || pts.iter().any(|&p| setup.add(p, s.t) == 0)
            || s.x == s.y
            || s.y == s.z
            || s.x == s.z;
        bad.then(|| (Witness::Block(i), format!("{s}: zero, repeated or out-of-range element")))
    });
    let structural_ok = nonzero.is_none();
    report.record("nonzero_elements", nonzero);
    if !structural_ok {
        return report;
    }

    let mut seen = vec![None; gi as usize];
    let mut diff_fail = None;
    for (i, s) in quads.iter().enumerate() {
        for d in [setup.sub(s.x, s.y), setup.sub(s.y, s.z), setup.sub(s.z, s.x)] {
            let c = idx.coset_fast(d, gi) as usize;
            if let Some(j) = seen[c].replace(i) {
                diff_fail.get_or_insert((
                    Witness::Text(format!("difference {d}")),
                    format!("quadruples {j} and {i} both have a difference in G-coset {c}"),
                ));
            }
        }
    }
    report.record("differences_distinct_g_cosets", diff_fail);

    let mut seen = vec![None; hi as usize];
    let mut pt_fail = None;
    for (i, s) in quads.iter().enumerate() {
        for p in [s.x, s.y, s.z].into_iter().flat_map(|p| [p, setup.add(p, s.t)]) {
            let c = idx.coset_fast(p, hi) as usize;
            if let Some(j) = seen[c].replace(i) {
                pt_fail.get_or_insert((
                    Witness::Point(p),
                    format!("quadruples {j} and {i} both hit H-coset {c}"),
                ));
            }
        }
    }
    report.record("points_distinct_h_cosets", pt_fail);

    let mut seen = vec![None; gi as usize];
    let mut t_fail = None;
    for (i, s) in quads.iter().enumerate() {
        let c = idx.coset_fast(s.t, gi) as usize;
        if let Some(j) = seen[c].replace(i) {
            t_fail.get_or_insert((
                Witness::Text(format!("t = {}", s.t)),
                format!("translates of quadruples {j} and {i} share G-coset {c}"),
            ));
        }
    }
    report.record("translates_distinct_g_cosets", t_fail);
    report
}

/// Conditions (1) and (2) for `q ≡ 7 (mod 12)`.
pub fn check_conditions_7mod12(q: u32, quad: StarterQuadruple) -> Result<bool> {
    if q % 12 != 7 {
        return Err(Error::ResidueClass(format!("q = {q} is not 7 mod 12")));
    }
    let setup = CyclotomicSetup::new(q, None)?;
    Ok(verify_conditions(&setup, &[quad]).passed())
}

/// Conditions (1) to (3) for `q ≡ 1 (mod 12)`.
pub fn check_conditions_1mod12(q: u32, quads: &[StarterQuadruple]) -> Result<bool> {
    if q % 12 != 1 {
        return Err(Error::ResidueClass(format!("q = {q} is not 1 mod 12")));
    }
    let setup = CyclotomicSetup::new(q, None)?;
    if quads.len() != setup.shape.quadruples() {
        return Err(Error::Conditions(format!(
            "q = {q} needs {} quadruples, got {}",
            setup.shape.quadruples(),
            quads.len()
        )));
    }
    Ok(verify_conditions(&setup, quads).passed())
}

/// One row of the base-class listing: `h{x,y,z}`, `h{x,y,z} + ht`, `ht`, `-ht`.
/// Points keep the order of `x, y, z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BaseRow {
    pub block: [u32; 3],
    pub shifted: [u32; 3],
    pub translate: u32,
    pub negated: u32,
}

impl fmt::Display for BaseRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.block;
        let [d, e, g] = self.shifted;
        write!(
            f,
            "{{{a}, {b}, {c}}}\t{{{d}, {e}, {g}}}\t{}, {}",
            self.translate, self.negated
        )
    }
}

/// Rows for every quadruple and every `h ∈ H`, quadruple-major.
pub fn base_rows(setup: &CyclotomicSetup, quads: &[StarterQuadruple]) -> Vec<BaseRow> {
    let h = setup.h();
    let mut rows = Vec::with_capacity(h.len() * quads.len());
    for s in quads {
        for &m in &h {
            let block = s.block().map(|p| setup.mul(m, p));
            let ht = setup.mul(m, s.t);
            rows.push(BaseRow {
                block,
                shifted: block.map(|p| setup.add(p, ht)),
                translate: ht,
                negated: setup.idx.field().neg(ht),
            });
        }
    }
    rows
}

pub fn base_class(setup: &CyclotomicSetup, quads: &[StarterQuadruple]) -> Vec<Vec<Point>> {
    base_rows(setup, quads)
        .into_iter()
        .flat_map(|r| [r.block.to_vec(), r.shifted.to_vec()])
        .collect()
}

/// Builds the duplicated design `2𝓑` with its `q` near-resolution classes.
pub fn build_cyclotomic(
    q: u32,
    omega: Option<u32>,
    quads: &[StarterQuadruple],
) -> Result<(Design, ResolutionClasses)> {
    let setup = CyclotomicSetup::new(q, omega)?;
    verify_conditions(&setup, quads).into_result("starter conditions")?;
    develop_base_class(q, 3, 2, &base_class(&setup, quads))
}

/// Lexicographic scan for a starter. Normalization: quadruple `i` names as
/// `x_i` its element of smallest `H`-coset and scales it by `H` to the least
/// element of that coset; the quadruples are sorted by that coset; a global
/// scaling makes `x_1 = 1`. Every starter is equivalent to one of this form.
pub fn search_starters(q: u32, budget: &mut Budget) -> Result<SearchOutcome<Vec<StarterQuadruple>>> {
    let setup = CyclotomicSetup::new(q, None)?;
    let shape = setup.shape;
    if shape.h_index() > 128 {
        return Err(Error::SearchRefused(format!(
            "q = {q} needs {} quadruples; the scan supports at most 21",
            shape.quadruples()
        )));
    }
    let mut rep = vec![0u32; shape.h_index() as usize];
    for x in (1..q).rev() {
        rep[setup.idx.coset_fast(x, shape.h_index()) as usize] = x;
    }
    let mut scan = StarterScan {
        setup: &setup,
        rep,
        quads: Vec::new(),
        budget,
        out_of_budget: false,
    };
    if scan.extend(0, 0, 0, 0) {
        Ok(SearchOutcome::Found(scan.quads))
    } else if scan.out_of_budget {
        Ok(SearchOutcome::OutOfBudget)
    } else {
        Ok(SearchOutcome::Exhausted)
    }
}

struct StarterScan<'a> {
    setup: &'a CyclotomicSetup,
    rep: Vec<u32>,
    quads: Vec<StarterQuadruple>,
    budget: &'a mut Budget,
    out_of_budget: bool,
}

impl StarterScan<'_> {
    /// Masks: `gd` differences by G-coset, `hp` points by H-coset, `gt`
    /// translates by G-coset. `min_c` is the least allowed coset for `x`.
    fn extend(&mut self, min_c: u32, gd: u128, hp: u128, gt: u128) -> bool {
        let shape = self.setup.shape;
        if self.quads.len() == shape.quadruples() {
            return true;
        }
        let (gi, hi, q) = (shape.g_index(), shape.h_index(), shape.q);
        let idx = &self.setup.idx;
        let hc = |p: u32| idx.coset_fast(p, hi);
        let gc = |p: u32| idx.coset_fast(p, gi);
        let first = self.quads.is_empty();
        let cx_range = if first { 0..1 } else { min_c..hi };
        for cx in cx_range {
            if hp >> cx & 1 == 1 {
                continue;
            }
            let x = self.rep[cx as usize];
            for y in 1..q {
                let cy = hc(y);
                if y == x || cy <= cx || hp >> cy & 1 == 1 {
                    continue;
                }
                let d1 = gc(self.setup.sub(x, y));
                if gd >> d1 & 1 == 1 {
                    continue;
                }
                for z in y + 1..q {
                    let cz = hc(z);
                    if z == x || cz <= cx || cz == cy || hp >> cz & 1 == 1 {
                        continue;
                    }
                    if !self.budget.spend() {
                        self.out_of_budget = true;
                        return false;
                    }
                    let d2 = gc(self.setup.sub(y, z));
                    let d3 = gc(self.setup.sub(z, x));
                    if d2 == d1 || d3 == d1 || d2 == d3 || gd >> d2 & 1 == 1 || gd >> d3 & 1 == 1 {
                        continue;
                    }
                    let gd2 = gd | 1 << d1 | 1 << d2 | 1 << d3;
                    let hp2 = hp | 1 << cx | 1 << cy | 1 << cz;
                    for t in 1..q {
                        let ct = gc(t);
                        if gt >> ct & 1 == 1 {
                            continue;
                        }
                        let shifted = [x, y, z].map(|p| self.setup.add(p, t));
                        if shifted.contains(&0) {
                            continue;
                        }
                        let cs = shifted.map(hc);
                        if cs[0] == cs[1]
                            || cs[1] == cs[2]
                            || cs[0] == cs[2]
                            || cs.iter().any(|&c| hp2 >> c & 1 == 1)
                        {
                            continue;
                        }
                        if !self.budget.spend() {
                            self.out_of_budget = true;
                            return false;
                        }
                        let hp3 = hp2 | 1 << cs[0] | 1 << cs[1] | 1 << cs[2];
                        self.quads.push(StarterQuadruple::new(x, y, z, t));
                        if self.extend(cx + 1, gd2, hp3, gt | 1 << ct) {
                            return true;
                        }
                        self.quads.pop();
                        if self.out_of_budget {
                            return false;
                        }
                    }
                }
            }
        }
        false
    }
}

/// Starter data for one row of the field-construction table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldTableRow {
    pub x: u32,
    pub q: u32,
    pub omega: u32,
    pub quads: Vec<StarterQuadruple>,
}

/// The fifteen rows of field constructions for `q = 6x + 1`.
pub fn field_table() -> Vec<FieldTableRow> {
    let s = StarterQuadruple::new;
    let row = |x: u32, omega: u32, quads: Vec<StarterQuadruple>| FieldTableRow {
        x,
        q: 6 * x + 1,
        omega,
        quads,
    };
    vec![
        row(17, 5, vec![s(1, 4, 6, 20)]),
        row(18, 6, vec![s(22, 48, 56, 104), s(27, 62, 86, 67)]),
        row(21, 3, vec![s(1, 9, 12, 50)]),
        row(23, 2, vec![s(1, 2, 4, 21)]),
        row(25, 6, vec![s(1, 5, 10, 2)]),
        row(26, 5, vec![s(29, 127, 151, 132), s(16, 68, 107, 61)]),
        row(27, 2, vec![s(1, 2, 4, 7)]),
        row(30, 2, vec![s(27, 107, 153, 125), s(69, 143, 161, 128)]),
        row(33, 3, vec![s(1, 3, 9, 41)]),
        row(37, 3, vec![s(1, 9, 12, 26)]),
        row(38, 6, vec![s(116, 170, 173, 94), s(45, 114, 212, 15)]),
        row(46, 5, vec![s(28, 114, 152, 185), s(161, 182, 250, 77)]),
        row(47, 3, vec![s(1, 7, 23, 30)]),
        row(51, 5, vec![s(1, 15, 21, 7)]),
        row(58, 2, vec![s(58, 105, 124, 306), s(118, 138, 333, 170)]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{is_duplicated_sts, verify_near_resolution, verify_self_orthogonal};

    #[test]
    fn shapes() {
        assert_eq!(CyclotomicShape::of(103).unwrap().e, 0);
        assert_eq!(CyclotomicShape::of(109).unwrap().e, 1);
        assert_eq!(CyclotomicShape::of(97).unwrap().e, 4);
        assert!(matches!(CyclotomicShape::of(91), Err(Error::NotPrime(91))));
        assert!(matches!(CyclotomicShape::of(101), Err(Error::ResidueClass(_))));
    }

    #[test]
    fn conditions_7mod12() {
        assert!(check_conditions_7mod12(103, StarterQuadruple::new(1, 4, 6, 20)).unwrap());
        assert!(!check_conditions_7mod12(103, StarterQuadruple::new(1, 4, 6, 0)).unwrap());
        assert!(check_conditions_7mod12(139, StarterQuadruple::new(1, 2, 4, 21)).unwrap());
        assert!(check_conditions_7mod12(109, StarterQuadruple::new(1, 4, 6, 20)).is_err());
    }

    #[test]
    fn conditions_1mod12() {
        let a = StarterQuadruple::new(22, 48, 56, 104);
        let b = StarterQuadruple::new(27, 62, 86, 67);
        assert!(check_conditions_1mod12(109, &[a, b]).unwrap());
        assert!(!check_conditions_1mod12(109, &[a, a]).unwrap());
        assert!(matches!(check_conditions_1mod12(109, &[a]), Err(Error::Conditions(_))));
        let c = StarterQuadruple::new(29, 127, 151, 132);
        let d = StarterQuadruple::new(16, 68, 107, 61);
        assert!(check_conditions_1mod12(157, &[c, d]).unwrap());
    }

    /// Independent oracle for the partition property: count coverage of each
    /// nonzero residue by explicit multiplication mod q.
    fn covers_nonzero_once(q: u64, h: &[u32], s: &StarterQuadruple) -> bool {
        let mut count = vec![0; q as usize];
        for &m in h {
            for p in [s.x, s.y, s.z] {
                count[(m as u64 * p as u64 % q) as usize] += 1;
                count[(m as u64 * ((p + s.t) as u64 % q) % q) as usize] += 1;
            }
        }
        count[0] == 0 && count[1..].iter().all(|&c| c == 1)
    }

    #[test]
    fn q103_build() {
        let quad = StarterQuadruple::new(1, 4, 6, 20);
        let setup = CyclotomicSetup::new(103, Some(5)).unwrap();
        assert!(covers_nonzero_once(103, &setup.h(), &quad));
        let (d, rc) = build_cyclotomic(103, Some(5), &[quad]).unwrap();
        assert_eq!(d.num_blocks(), 2 * 1751);
        assert_eq!(rc.len(), 103);
        assert!(rc.classes.iter().all(|c| c.len() == 34));
        let base: Vec<_> = rc.classes[0].iter().map(|&l| d.block(l).to_vec()).collect();
        assert!(base.contains(&vec![1, 4, 6]) && base.contains(&vec![21, 24, 26]));
        assert!(is_duplicated_sts(&d).passed());
        assert!(verify_near_resolution(&d, &rc).passed());
        assert!(verify_self_orthogonal(&d, &rc).passed());
    }

    #[test]
    fn translate_pairs_are_plus_minus_20h() {
        let setup = CyclotomicSetup::new(103, None).unwrap();
        for row in base_rows(&setup, &[StarterQuadruple::new(1, 4, 6, 20)]) {
            let h = row.block[0];
            assert_eq!(row.translate as u64, 20 * h as u64 % 103);
            assert_eq!((row.translate + row.negated) % 103, 0);
        }
    }

    #[test]
    fn build_rejects_failed_conditions() {
        assert!(matches!(
            build_cyclotomic(103, None, &[StarterQuadruple::new(1, 2, 3, 20)]),
            Err(Error::Verification { .. })
        ));
    }

    #[test]
    fn search_q7_exhausts() {
        let out = search_starters(7, &mut Budget::unlimited()).unwrap();
        assert_eq!(out, SearchOutcome::Exhausted);
    }

    #[test]
    fn search_q103_finds_a_valid_starter() {
        let quads = search_starters(103, &mut Budget::new(10_000_000))
            .unwrap()
            .found()
            .unwrap();
        assert!(check_conditions_7mod12(103, quads[0]).unwrap());
        assert!(build_cyclotomic(103, None, &quads).is_ok());
    }

    #[test]
    fn search_respects_budget() {
        let out = search_starters(103, &mut Budget::new(3)).unwrap();
        assert_eq!(out, SearchOutcome::OutOfBudget);
    }

    #[test]
    fn table_rows_satisfy_the_conditions() {
        for row in field_table() {
            let setup = CyclotomicSetup::new(row.q, Some(row.omega)).unwrap();
            assert!(verify_conditions(&setup, &row.quads).passed(), "q = {}", row.q);
        }
    }
}
