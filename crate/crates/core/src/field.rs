//! Exact arithmetic in GF(p^k) for odd p.
//!
//! Elements are stored as their integer encoding: the coefficient vector of
//! the polynomial-basis representative, read as a little-endian base-p
//! number. That encoding is also the serialization used by every file format
//! and it fixes the element order used to break ties.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field size; encodings must fit in a byte.
pub const MAX_ORDER: usize = 255;

/// Built-in moduli, coefficients listed from the constant term upwards.
const MODULUS_TABLE: &[(u32, u32, &[u32])] = &[
    (3, 2, &[1, 0, 1]),
    (5, 2, &[3, 0, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (7, 2, &[4, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
];

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[repr(transparent)]
pub struct FieldElement(u8);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Integer encoding in `[0, q)`.
    #[inline]
    pub fn value(self) -> u32 {
        self.0 as u32
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    p: u32,
    k: u32,
    q: usize,
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

/// A finite field GF(p^k) with p odd. Cloning is cheap (shared tables).
#[derive(Clone)]
pub struct GaloisField(Arc<Tables>);

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.k)
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus
    }
}

impl Eq for GaloisField {}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Remainder of `a` modulo the monic polynomial `m` over GF(p).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// Irreducibility over GF(p) by trial division with every monic polynomial
/// of degree at most half the degree.
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let k = modulus.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    for d in 1..=k / 2 {
        let count = (p as usize).pow(d as u32);
        for code in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                divisor.push((c % p as usize) as u32);
                c /= p as usize;
            }
            divisor.push(1);
            if poly_rem(modulus, &divisor, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

impl GaloisField {
    /// Builds GF(p^k). Without an explicit modulus, the built-in table covers
    /// p^k in {9, 25, 27, 49, 81}; prime fields need no modulus.
    pub fn new(p: u32, k: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if p == 2 {
            return Err(Error::Field("characteristic 2 is not supported".into()));
        }
        if !is_prime(p) {
            return Err(Error::Field(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::Field("extension degree must be at least 1".into()));
        }
        let q = (p as usize)
            .checked_pow(k)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| Error::Field(format!("{p}^{k} exceeds {MAX_ORDER}")))?;
        let modulus = match modulus {
            Some(m) => m,
            None if k == 1 => vec![0, 1],
            None => MODULUS_TABLE
                .iter()
                .find(|(tp, tk, _)| *tp == p && *tk == k)
                .map(|(_, _, m)| m.to_vec())
                .ok_or_else(|| {
                    Error::Field(format!("no built-in modulus for {p}^{k}; supply one"))
                })?,
        };
        if modulus.len() != k as usize + 1 {
            return Err(Error::Field(format!("modulus must have degree {k}")));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::Field("modulus coefficients must lie in [0, p)".into()));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::Field("modulus must be monic".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::Field(format!("modulus {modulus:?} is reducible over GF({p})")));
        }
        Ok(Self::from_valid(p, k, q, modulus))
    }

    /// Least monic irreducible polynomial of degree `k` in encoding order.
    pub fn find_irreducible(p: u32, k: u32) -> Option<Vec<u32>> {
        let count = (p as usize).checked_pow(k)?;
        (0..count).find_map(|code| {
            let mut m = Vec::with_capacity(k as usize + 1);
            let mut c = code;
            for _ in 0..k {
                m.push((c % p as usize) as u32);
                c /= p as usize;
            }
            m.push(1);
            is_irreducible(&m, p).then_some(m)
        })
    }

    fn from_valid(p: u32, k: u32, q: usize, modulus: Vec<u32>) -> Self {
        let decode = |v: usize| -> Vec<u32> {
            let mut c = Vec::with_capacity(k as usize);
            let mut v = v;
            for _ in 0..k {
                c.push((v % p as usize) as u32);
                v /= p as usize;
            }
            c
        };
        let encode = |c: &[u32]| -> u8 {
            c.iter().rev().fold(0usize, |acc, &x| acc * p as usize + x as usize) as u8
        };
        let polys: Vec<Vec<u32>> = (0..q).map(decode).collect();
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                let s: Vec<u32> = polys[a]
                    .iter()
                    .zip(&polys[b])
                    .map(|(x, y)| (x + y) % p)
                    .collect();
                add[a * q + b] = encode(&s);
                let mut prod = vec![0u32; 2 * k as usize - 1];
                for (i, x) in polys[a].iter().enumerate() {
                    for (j, y) in polys[b].iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = poly_rem(&prod, &modulus, p);
                r.resize(k as usize, 0);
                mul[a * q + b] = encode(&r);
            }
        }
        let neg: Vec<u8> = (0..q)
            .map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8)
            .collect();
        let inv: Vec<u8> = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as u8
                }
            })
            .collect();
        GaloisField(Arc::new(Tables {
            p,
            k,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
        }))
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.0.k
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// Element with the given integer encoding.
    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if (value as usize) < self.0.q {
            Ok(FieldElement(value as u8))
        } else {
            Err(Error::Field(format!("{value} is not an element of GF({})", self.0.q)))
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.0.p as i64) as u8)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.0.k as usize || coeffs.iter().any(|&c| c >= self.0.p) {
            return Err(Error::Field(format!("bad coefficient vector {coeffs:?}")));
        }
        let v = coeffs
            .iter()
            .rev()
            .fold(0u32, |acc, &c| acc * self.0.p + c);
        Ok(FieldElement(v as u8))
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        let mut v = a.value();
        (0..self.0.k)
            .map(|_| {
                let c = v % self.0.p;
                v /= self.0.p;
                c
            })
            .collect()
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.q).map(|v| FieldElement(v as u8))
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.0.add[a.index() * self.0.q + b.index()])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.0.mul[a.index() * self.0.q + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.0.neg[a.index()])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(FieldElement(self.0.inv[a.index()]))
        }
    }

    /// Inverse of a nonzero element; callers guarantee `a != 0`.
    #[inline]
    pub(crate) fn inv_nonzero(&self, a: FieldElement) -> FieldElement {
        debug_assert!(!a.is_zero());
        FieldElement(self.0.inv[a.index()])
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Euler's criterion: `a^((q-1)/2) == 1`. Zero counts as a square.
    pub fn is_square(&self, a: FieldElement) -> bool {
        a.is_zero() || self.pow(a, (self.0.q as u64 - 1) / 2) == self.one()
    }

    /// Least nonsquare in encoding order.
    pub fn nonsquare(&self) -> FieldElement {
        self.elements().find(|&a| !self.is_square(a)).unwrap()
    }

    /// Least element of multiplicative order q - 1.
    pub fn primitive_element(&self) -> FieldElement {
        let n = self.0.q as u64 - 1;
        let prime_factors: Vec<u64> = (2..=n).filter(|&d| n % d == 0 && is_prime(d as u32)).collect();
        self.elements()
            .skip(1)
            .find(|&a| prime_factors.iter().all(|&r| self.pow(a, n / r) != self.one()))
            .unwrap()
    }

    /// Field arithmetic dispatch by name, for callers driven by data.
    pub fn apply(&self, op: FieldOp, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(match op {
            FieldOp::Add => self.add(a, b),
            FieldOp::Sub => self.sub(a, b),
            FieldOp::Mul => self.mul(a, b),
            FieldOp::Div => self.div(a, b)?,
            FieldOp::Pow => self.pow(a, b.value() as u64),
            FieldOp::Inv => self.inv(a)?,
            FieldOp::Neg => self.neg(a),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Inv,
    Neg,
}

/// GF(q^2) over GF(q) with the embedding, Frobenius, relative trace and the
/// fixed trace-zero element used by field reduction.
#[derive(Clone, Debug)]
pub struct QuadraticExtension {
    pub base: GaloisField,
    pub ext: GaloisField,
    embed: Vec<FieldElement>,
    restrict: Vec<Option<FieldElement>>,
    frob: Vec<FieldElement>,
    xi: FieldElement,
}

impl QuadraticExtension {
    pub fn new(base: &GaloisField) -> Result<Self> {
        let p = base.p();
        let k2 = 2 * base.k();
        let ext = match GaloisField::new(p, k2, None) {
            Ok(f) => f,
            Err(_) => {
                let m = GaloisField::find_irreducible(p, k2)
                    .ok_or_else(|| Error::Field(format!("no modulus of degree {k2} over GF({p})")))?;
                GaloisField::new(p, k2, Some(m))?
            }
        };
        let q = base.order() as u64;
        // Root of the base modulus inside the extension, least encoding first.
        let gen = if base.k() == 1 {
            FieldElement::ZERO
        } else {
            ext.elements()
                .find(|&z| {
                    let mut acc = ext.zero();
                    for &c in base.modulus().iter().rev() {
                        acc = ext.add(ext.mul(acc, z), ext.from_int(c as i64));
                    }
                    acc.is_zero()
                })
                .ok_or_else(|| Error::Field("base modulus has no root in extension".into()))?
        };
        let embed: Vec<FieldElement> = base
            .elements()
            .map(|a| {
                if base.k() == 1 {
                    ext.from_int(a.value() as i64)
                } else {
                    let mut acc = ext.zero();
                    for &c in base.coeffs(a).iter().rev() {
                        acc = ext.add(ext.mul(acc, gen), ext.from_int(c as i64));
                    }
                    acc
                }
            })
            .collect();
        let mut restrict = vec![None; ext.order()];
        for (i, e) in embed.iter().enumerate() {
            restrict[e.index()] = Some(FieldElement(i as u8));
        }
        let frob: Vec<FieldElement> = ext.elements().map(|a| ext.pow(a, q)).collect();
        let xi = ext
            .elements()
            .skip(1)
            .find(|&a| ext.add(a, frob[a.index()]).is_zero())
            .ok_or_else(|| Error::Integrity("no nonzero trace-zero element".into()))?;
        Ok(QuadraticExtension {
            base: base.clone(),
            ext,
            embed,
            restrict,
            frob,
            xi,
        })
    }

    #[inline]
    pub fn embed(&self, a: FieldElement) -> FieldElement {
        self.embed[a.index()]
    }

    /// Inverse of `embed` on the subfield; `None` outside it.
    #[inline]
    pub fn restrict(&self, a: FieldElement) -> Option<FieldElement> {
        self.restrict[a.index()]
    }

    #[inline]
    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        self.frob[a.index()]
    }

    /// `a + a^q`, returned as an element of the base field.
    pub fn rel_trace(&self, a: FieldElement) -> FieldElement {
        let t = self.ext.add(a, self.frobenius(a));
        self.restrict(t).expect("relative trace lies in the subfield")
    }

    /// `a^(q+1)`, returned as an element of the base field.
    pub fn norm(&self, a: FieldElement) -> FieldElement {
        let n = self.ext.mul(a, self.frobenius(a));
        self.restrict(n).expect("norm lies in the subfield")
    }

    pub fn xi(&self) -> FieldElement {
        self.xi
    }

    /// Coordinates `(a0, a1)` over the base with `a = a0 + a1 * xi`.
    pub fn split(&self, a: FieldElement) -> (FieldElement, FieldElement) {
        let f = &self.ext;
        let two = f.from_int(2);
        let conj = self.frobenius(a);
        let a0 = f.div(f.add(a, conj), two).unwrap();
        let a1 = f.div(f.sub(a, conj), f.mul(two, self.xi)).unwrap();
        (
            self.restrict(a0).expect("real part in subfield"),
            self.restrict(a1).expect("imaginary part in subfield"),
        )
    }

    /// Inverse of [`split`](Self::split).
    pub fn join(&self, a0: FieldElement, a1: FieldElement) -> FieldElement {
        let f = &self.ext;
        f.add(self.embed(a0), f.mul(self.embed(a1), self.xi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, k: u32) -> GaloisField {
        GaloisField::new(p, k, None).unwrap()
    }

    #[test]
    fn prime_field_basics() {
        let f = gf(3, 1);
        assert_eq!(f.order(), 3);
        assert_eq!(f.add(f.from_int(2), f.from_int(2)), f.from_int(1));
        assert_eq!(f.inv(f.from_int(2)).unwrap(), f.from_int(2));
        assert_eq!(f.inv(f.zero()), Err(Error::DivisionByZero));
        assert_eq!(f.div(f.one(), f.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn gf9_with_x2_plus_1() {
        // x^2 + 1 has no root mod 3: 0 -> 1, 1 -> 2, 2 -> 5 = 2.
        for x in 0..3u32 {
            assert_ne!((x * x + 1) % 3, 0);
        }
        let f = GaloisField::new(3, 2, Some(vec![1, 0, 1])).unwrap();
        let x = f.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f.mul(x, x), f.from_int(2));
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 + 2 = (x + 1)(x + 2) mod 3.
        assert_eq!((1 + 2) % 3, 0);
        assert!(GaloisField::new(3, 2, Some(vec![2, 0, 1])).is_err());
    }

    #[test]
    fn bad_parameters_rejected() {
        assert!(GaloisField::new(2, 1, None).is_err());
        assert!(GaloisField::new(9, 1, None).is_err());
        assert!(GaloisField::new(11, 2, None).is_err());
        assert!(GaloisField::new(3, 2, Some(vec![1, 0, 2])).is_err());
    }

    #[test]
    fn builtin_table_is_deterministic() {
        for (p, k) in [(3, 2), (5, 2), (3, 3), (7, 2), (3, 4)] {
            let a = gf(p, k);
            let b = gf(p, k);
            assert_eq!(a, b);
            assert_eq!(a.order(), (p as usize).pow(k));
        }
    }

    #[test]
    fn squares_mod_7() {
        let f = gf(7, 1);
        assert!(f.is_square(f.from_int(2)));
        assert!(!f.is_square(f.from_int(3)));
        assert!(f.is_square(f.one()));
    }

    #[test]
    fn axioms_by_exhaustion() {
        for (p, k) in [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3), (7, 2), (3, 4)] {
            let f = gf(p, k);
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, f.zero()), a);
                assert_eq!(f.mul(a, f.one()), a);
                assert_eq!(f.add(a, f.neg(a)), f.zero());
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in els.iter().step_by(3) {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn square_counts_and_multiplicativity() {
        for (p, k) in [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (7, 2), (3, 4)] {
            let f = gf(p, k);
            let nz: Vec<_> = f.elements().skip(1).collect();
            let squares = nz.iter().filter(|&&a| f.is_square(a)).count();
            assert_eq!(squares, (f.order() - 1) / 2);
            // Table oracle: the set of b^2.
            let table: std::collections::HashSet<_> = nz.iter().map(|&b| f.mul(b, b)).collect();
            for &a in &nz {
                assert_eq!(f.is_square(a), table.contains(&a));
                for &b in &nz {
                    let expect = !(f.is_square(a) ^ f.is_square(b));
                    assert_eq!(f.is_square(f.mul(a, b)), expect);
                }
            }
        }
    }

    #[test]
    fn quadratic_extension_gf3() {
        let f = gf(3, 1);
        let qe = QuadraticExtension::new(&f).unwrap();
        assert_eq!(qe.ext.order(), 9);
        assert_eq!(qe.rel_trace(qe.ext.one()), f.from_int(2));
        // x^3 = -x mod x^2 + 1, so x + x^3 = 0.
        let x = qe.ext.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(qe.xi(), x);
    }

    #[test]
    fn extension_maps() {
        for (p, k) in [(3, 1), (5, 1), (7, 1), (3, 2)] {
            let f = gf(p, k);
            let qe = QuadraticExtension::new(&f).unwrap();
            let e = &qe.ext;
            assert!(!qe.xi().is_zero());
            assert_eq!(qe.rel_trace(qe.xi()), f.zero());
            let mut kernel = 0;
            let mut image = std::collections::HashSet::new();
            for a in e.elements() {
                assert_eq!(qe.frobenius(qe.frobenius(a)), a);
                let t = qe.rel_trace(a);
                image.insert(t);
                if t.is_zero() {
                    kernel += 1;
                }
                let (a0, a1) = qe.split(a);
                assert_eq!(qe.join(a0, a1), a);
                for c in f.elements() {
                    let ca = e.mul(qe.embed(c), a);
                    assert_eq!(qe.rel_trace(ca), f.mul(c, t));
                }
            }
            assert_eq!(kernel, f.order());
            assert_eq!(image.len(), f.order());
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(qe.embed(f.mul(a, b)), e.mul(qe.embed(a), qe.embed(b)));
                    assert_eq!(qe.embed(f.add(a, b)), e.add(qe.embed(a), qe.embed(b)));
                }
            }
        }
    }

    #[test]
    fn apply_dispatch() {
        let f = gf(5, 1);
        let a = f.from_int(3);
        let b = f.from_int(4);
        assert_eq!(f.apply(FieldOp::Add, a, b).unwrap(), f.from_int(2));
        assert_eq!(f.apply(FieldOp::Pow, a, b).unwrap(), f.from_int(1));
        assert_eq!(f.apply(FieldOp::Neg, a, b).unwrap(), f.from_int(2));
        assert!(f.apply(FieldOp::Inv, f.zero(), b).is_err());
    }

    #[test]
    fn primitive_element_order() {
        for (p, k) in [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2)] {
            let f = gf(p, k);
            let g = f.primitive_element();
            let mut seen = std::collections::HashSet::new();
            let mut x = f.one();
            for _ in 0..f.order() - 1 {
                seen.insert(x);
                x = f.mul(x, g);
            }
            assert_eq!(seen.len(), f.order() - 1);
            assert!(!f.is_square(g));
        }
    }
}
