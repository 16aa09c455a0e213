//! Finite-field arithmetic over prime fields and small extension fields,
//! primitive elements, discrete-logarithm tables, cyclotomic cosets and
//! halfsets.
//!
//! Elements are `u32` values in `0..q`. For an extension field of degree `e`
//! over `GF(p)` an element `a_0 + a_1 x + ... + a_{e-1} x^{e-1}` is encoded as
//! `a_0 + a_1 p + ... + a_{e-1} p^{e-1}`, so integer order coincides with the
//! lexicographic order of the coefficient vector read from the top degree.

use crate::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits `q = p^e`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    let f = prime_factors(q);
    if f.len() != 1 {
        return None;
    }
    let p = f[0];
    let mut e = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        e += 1;
    }
    Some((p as u32, e))
}

/// Multiplicative order of `m` modulo `n` (which must be coprime to `n`).
pub fn multiplicative_order_mod(m: u64, n: u64) -> Option<u64> {
    if n < 2 || gcd(m % n, n) != 1 {
        return None;
    }
    let mut x = m % n;
    let mut k = 1;
    while x != 1 {
        x = x * (m % n) % n;
        k += 1;
    }
    Some(k)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Parameters of a finite field `GF(p^e)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    /// Coefficients `c_0..c_e` (low to high, `c_e = 1`) of the monic
    /// reduction polynomial; empty for prime fields.
    reduction: Vec<u32>,
}

impl FieldSpec {
    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(Self {
            p,
            e: 1,
            reduction: Vec::new(),
        })
    }

    /// An extension field with an explicit reduction polynomial, which is
    /// checked for irreducibility.
    pub fn extension(p: u32, e: u32, reduction: Vec<u32>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if e == 1 {
            return Self::prime(p);
        }
        if e == 0 || reduction.len() != e as usize + 1 || reduction[e as usize] != 1 {
            return Err(Error::InvalidField(format!(
                "reduction must be monic of degree {e}, got {reduction:?}"
            )));
        }
        if reduction.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("coefficient out of range".into()));
        }
        if !is_irreducible(p, &reduction) {
            return Err(Error::Reducible(reduction, p));
        }
        Ok(Self { p, e, reduction })
    }

    /// The field of order `q` using the lexicographically smallest monic
    /// irreducible polynomial of the required degree.
    pub fn for_order(q: u32) -> Result<Self> {
        let (p, e) = prime_power(q as u64).ok_or(Error::NotPrimePower(q as u64))?;
        if e == 1 {
            return Self::prime(p);
        }
        if q > 1 << 16 {
            return Err(Error::InvalidField(format!(
                "extension field of order {q} is too large"
            )));
        }
        let reduction = smallest_irreducible(p, e);
        Self::extension(p, e, reduction)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn reduction(&self) -> &[u32] {
        &self.reduction
    }

    pub fn order(&self) -> u32 {
        self.p.pow(self.e)
    }
}

/// Remainder of `a` modulo the monic polynomial `m` over `GF(p)`.
fn poly_rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let dm = m.len() - 1;
    let p = p as u64;
    while r.len() > dm {
        let lead = r[r.len() - 1] % p;
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p * p - lead * c as u64 % p) % p;
            }
        }
        r.pop();
    }
    r.into_iter().map(|c| (c % p) as u32).collect()
}

fn is_irreducible(p: u32, f: &[u32]) -> bool {
    let deg = f.len() - 1;
    // no monic factor of degree 1..=deg/2
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut x = idx;
            for _ in 0..d {
                g.push((x % p as u64) as u32);
                x /= p as u64;
            }
            g.push(1);
            if poly_rem(p, f, &g).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    for idx in 0..count {
        let mut f = Vec::with_capacity(e as usize + 1);
        let mut x = idx;
        for _ in 0..e {
            f.push((x % p as u64) as u32);
            x /= p as u64;
        }
        f.push(1);
        if is_irreducible(p, &f) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Arithmetic in `GF(q)`.
#[derive(Debug, Clone)]
pub struct FiniteField {
    spec: FieldSpec,
    q: u32,
    // Extension fields only: exp/log tables for multiplication.
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl FiniteField {
    pub fn new(spec: FieldSpec) -> Self {
        let q = spec.order();
        let mut field = Self {
            spec,
            q,
            exp: Vec::new(),
            log: Vec::new(),
        };
        if field.spec.e > 1 {
            let gen = (2..q)
                .find(|&g| field.poly_order(g) == q - 1)
                .expect("multiplicative group is cyclic");
            let mut exp = Vec::with_capacity(q as usize - 1);
            let mut log = vec![u32::MAX; q as usize];
            let mut x = 1;
            for i in 0..q - 1 {
                exp.push(x);
                log[x as usize] = i;
                x = field.poly_mul(x, gen);
            }
            field.exp = exp;
            field.log = log;
        }
        field
    }

    pub fn prime(p: u32) -> Result<Self> {
        Ok(Self::new(FieldSpec::prime(p)?))
    }

    pub fn of_order(q: u32) -> Result<Self> {
        Ok(Self::new(FieldSpec::for_order(q)?))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.spec.e == 1
    }

    fn digits(&self, mut x: u32) -> Vec<u32> {
        let p = self.spec.p;
        (0..self.spec.e)
            .map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect()
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.spec.p + c)
    }

    fn poly_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.spec.p as u64;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; da.len() + db.len() - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        let mut r = poly_rem(self.spec.p, &prod, &self.spec.reduction);
        r.resize(self.spec.e as usize, 0);
        self.undigits(&r)
    }

    fn poly_order(&self, g: u32) -> u32 {
        let mut x = g;
        let mut k = 1;
        while x != 1 {
            if x == 0 || k > self.q {
                return 0;
            }
            x = self.poly_mul(x, g);
            k += 1;
        }
        k
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.spec.e == 1 {
            ((a as u64 + b as u64) % self.q as u64) as u32
        } else {
            let p = self.spec.p;
            let (da, db) = (self.digits(a), self.digits(b));
            let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            self.undigits(&s)
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.spec.e == 1 {
            (self.q - a) % self.q
        } else {
            let p = self.spec.p;
            let d: Vec<u32> = self.digits(a).iter().map(|&x| (p - x) % p).collect();
            self.undigits(&d)
        }
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.spec.e == 1 {
            ((a as u64 * b as u64) % self.q as u64) as u32
        } else if a == 0 || b == 0 {
            0
        } else {
            let l = (self.log[a as usize] + self.log[b as usize]) % (self.q - 1);
            self.exp[l as usize]
        }
    }

    pub fn pow(&self, a: u32, mut n: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.pow(a, self.q as u64 - 2))
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: u32) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let n = self.q as u64 - 1;
        let mut order = n;
        for r in prime_factors(n) {
            while order % r == 0 && self.pow(a, order / r) == 1 {
                order /= r;
            }
        }
        Some(order)
    }
}

/// The smallest element, in canonical order, generating the multiplicative
/// group.
pub fn find_generator(field: &FiniteField) -> u32 {
    let q = field.order();
    if q == 2 {
        return 1;
    }
    let n = q as u64 - 1;
    let factors = prime_factors(n);
    (2..q)
        .find(|&g| factors.iter().all(|&r| field.pow(g, n / r) != 1))
        .expect("multiplicative group of a finite field is cyclic")
}

/// Discrete logarithms to a fixed generator and the induced coset numbering
/// for the subgroup of index `m`.
#[derive(Debug, Clone)]
pub struct CosetIndexing {
    field: FiniteField,
    omega: u32,
    m: u32,
    log: Vec<u32>,
    exp: Vec<u32>,
}

impl CosetIndexing {
    /// Uses the smallest generator.
    pub fn new(field: &FiniteField, m: u32) -> Result<Self> {
        let omega = find_generator(field);
        Self::with_generator(field, omega, m)
    }

    pub fn with_generator(field: &FiniteField, omega: u32, m: u32) -> Result<Self> {
        let q = field.order();
        if q < 3 {
            return Err(Error::InvalidField("need q >= 3".into()));
        }
        if m == 0 || (q - 1) % m != 0 {
            return Err(Error::BadIndex {
                index: m,
                order: q - 1,
            });
        }
        if field.element_order(omega) != Some(q as u64 - 1) {
            return Err(Error::InvalidField(format!(
                "{omega} does not generate GF({q})^x"
            )));
        }
        let mut log = vec![u32::MAX; q as usize];
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut x = 1;
        for i in 0..q - 1 {
            exp.push(x);
            log[x as usize] = i;
            x = field.mul(x, omega);
        }
        Ok(Self {
            field: field.clone(),
            omega,
            m,
            log,
            exp,
        })
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn omega(&self) -> u32 {
        self.omega
    }

    pub fn index(&self) -> u32 {
        self.m
    }

    pub fn dlog(&self, x: u32) -> Result<u32> {
        if x == 0 || x >= self.q() {
            return Err(Error::ZeroLog);
        }
        Ok(self.log[x as usize])
    }

    /// `omega^i`.
    pub fn power(&self, i: u64) -> u32 {
        self.exp[(i % (self.q() as u64 - 1)) as usize]
    }

    /// Coset number of `x` for the configured index.
    pub fn coset_of(&self, x: u32) -> Result<u32> {
        Ok(self.dlog(x)? % self.m)
    }

    /// Coset number of `x` for another index dividing `q - 1`.
    pub fn coset_in(&self, x: u32, index: u32) -> Result<u32> {
        debug_assert_eq!((self.q() - 1) % index, 0);
        Ok(self.dlog(x)? % index)
    }

    /// Unchecked coset lookup for search kernels; `x` must be nonzero.
    #[inline]
    pub(crate) fn coset_fast(&self, x: u32, index: u32) -> u32 {
        self.log[x as usize] % index
    }

    /// `C_j = { omega^(m i + j) }` for the given index, in exponent order.
    pub fn coset_elements(&self, index: u32, j: u32) -> Vec<u32> {
        let n = (self.q() - 1) / index;
        (0..n)
            .map(|i| self.power(index as u64 * i as u64 + j as u64))
            .collect()
    }

    /// The subgroup of the given index, in exponent order.
    pub fn subgroup(&self, index: u32) -> Vec<u32> {
        self.coset_elements(index, 0)
    }
}

/// A subset `H` of an even-order subgroup `G` with `G = H ∪ -H` disjointly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Halfset {
    subgroup: Vec<u32>,
    elements: Vec<u32>,
}

impl Halfset {
    /// Validates the halfset property. The element order is kept, so the
    /// same type carries ordered halfsets.
    pub fn new(field: &FiniteField, subgroup: Vec<u32>, elements: Vec<u32>) -> Result<Self> {
        if subgroup.len() % 2 == 1 {
            return Err(Error::NotHalfset(format!(
                "subgroup has odd order {}",
                subgroup.len()
            )));
        }
        if elements.len() * 2 != subgroup.len() {
            return Err(Error::NotHalfset(format!(
                "{} elements for a subgroup of order {}",
                elements.len(),
                subgroup.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for &h in &elements {
            for x in [h, field.neg(h)] {
                if !seen.insert(x) {
                    return Err(Error::NotHalfset(format!(
                        "{x} occurs twice in H ∪ -H"
                    )));
                }
            }
        }
        let g: std::collections::HashSet<u32> = subgroup.iter().copied().collect();
        if seen != g {
            return Err(Error::NotHalfset("H ∪ -H differs from G".into()));
        }
        Ok(Self { subgroup, elements })
    }

    pub fn subgroup(&self) -> &[u32] {
        &self.subgroup
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }
}

/// For the subgroup `G` of index `subgroup_index`, returns `H = C_0` of twice
/// that index when it is a halfset of `G`, and `None` when `-1 ∈ C_0`.
pub fn canonical_halfset(idx: &CosetIndexing, subgroup_index: u32) -> Result<Option<Halfset>> {
    let q = idx.q();
    let order = q - 1;
    if subgroup_index == 0 || order % subgroup_index != 0 {
        return Err(Error::BadIndex {
            index: subgroup_index,
            order,
        });
    }
    let g_order = order / subgroup_index;
    if g_order % 2 == 1 {
        return Err(Error::OddSubgroup {
            index: subgroup_index,
            order: g_order,
        });
    }
    let h_index = 2 * subgroup_index;
    let minus_one = idx.field().neg(1);
    if idx.coset_in(minus_one, h_index)? == 0 {
        return Ok(None);
    }
    let g = idx.subgroup(subgroup_index);
    let h = idx.subgroup(h_index);
    Halfset::new(idx.field(), g, h).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_order(q: u32, g: u32) -> u32 {
        let mut x = g;
        let mut k = 1;
        while x != 1 {
            x = (x as u64 * g as u64 % q as u64) as u32;
            k += 1;
        }
        k
    }

    #[test]
    fn generators_match_table() {
        assert_eq!(find_generator(&FiniteField::prime(103).unwrap()), 5);
        assert_eq!(find_generator(&FiniteField::prime(163).unwrap()), 2);
        // brute force for q = 7
        let g = (2..7).find(|&g| brute_order(7, g) == 6).unwrap();
        assert_eq!(g, 3);
        assert_eq!(find_generator(&FiniteField::prime(7).unwrap()), 3);
    }

    #[test]
    fn coset_examples() {
        let f = FiniteField::prime(103).unwrap();
        let idx = CosetIndexing::new(&f, 6).unwrap();
        assert_eq!(idx.coset_of(1).unwrap(), 0);
        assert_eq!(idx.coset_of(5).unwrap(), 1);
        assert_eq!(idx.coset_of(25).unwrap(), 2);
        assert!(matches!(idx.coset_of(0), Err(Error::ZeroLog)));
    }

    #[test]
    fn canonical_halfsets() {
        let f = FiniteField::prime(103).unwrap();
        let idx = CosetIndexing::new(&f, 6).unwrap();
        let h = canonical_halfset(&idx, 3).unwrap().unwrap();
        assert_eq!(h.elements().len(), 17);

        let f = FiniteField::prime(37).unwrap();
        let idx = CosetIndexing::new(&f, 12).unwrap();
        let h = canonical_halfset(&idx, 6).unwrap().unwrap();
        let mut e = h.elements().to_vec();
        e.sort();
        assert_eq!(e, vec![1, 10, 26]);

        let f = FiniteField::prime(97).unwrap();
        let idx = CosetIndexing::new(&f, 6).unwrap();
        assert_eq!(canonical_halfset(&idx, 3).unwrap(), None);
        // -1 has dlog 48, which is 0 mod 6
        assert_eq!(idx.coset_in(96, 6).unwrap(), 0);

        let f = FiniteField::prime(7).unwrap();
        let idx = CosetIndexing::new(&f, 6).unwrap();
        assert!(matches!(
            canonical_halfset(&idx, 2),
            Err(Error::OddSubgroup { .. })
        ));
    }

    #[test]
    fn extension_fields() {
        for q in [4u32, 8, 9, 25, 27] {
            let f = FiniteField::of_order(q).unwrap();
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                }
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
            }
            let g = find_generator(&f);
            assert_eq!(f.element_order(g), Some(q as u64 - 1));
        }
        assert!(matches!(
            FieldSpec::extension(2, 2, vec![1, 0, 1]),
            Err(Error::Reducible(..))
        ));
        assert!(FieldSpec::extension(2, 2, vec![1, 1, 1]).is_ok());
        assert!(FieldSpec::for_order(6).is_err());
    }

    #[test]
    fn helpers() {
        assert_eq!(prime_power(121), Some((11, 2)));
        assert_eq!(prime_power(91), None);
        assert_eq!(multiplicative_order_mod(9, 91), Some(3));
        assert_eq!(multiplicative_order_mod(3, 121), Some(5));
        assert_eq!(multiplicative_order_mod(7, 91), None);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn dlog_roundtrip_and_homomorphism(qi in 0usize..6, x in 1u32..10_000, y in 1u32..10_000) {
                let q = [103u32, 109, 157, 229, 349, 37][qi];
                let f = FiniteField::prime(q).unwrap();
                let idx = CosetIndexing::new(&f, 6).unwrap();
                let (x, y) = (x % (q - 1) + 1, y % (q - 1) + 1);
                prop_assert_eq!(idx.power(idx.dlog(x).unwrap() as u64), x);
                let xy = f.mul(x, y);
                prop_assert_eq!(
                    idx.coset_of(xy).unwrap(),
                    (idx.coset_of(x).unwrap() + idx.coset_of(y).unwrap()) % 6
                );
            }
        }
    }
}
