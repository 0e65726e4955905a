use std::fmt;
use std::sync::Arc;

use super::{is_prime, prime_factors, Ring, SerialRing};
use crate::{Error, Result};

/// A finite field `F_{p^f}` with a fixed primitive modulus.
///
/// Elements are encoded as `u32` codes `sum c_i p^i` for the polynomial-basis
/// element `sum c_i x^i`. Multiplication goes through discrete-log tables, so
/// construction costs `O(p^f)` time and memory.
#[derive(Clone)]
pub struct FieldDesc {
    inner: Arc<FieldInner>,
}

struct FieldInner {
    p: u32,
    f: u32,
    size: u32,
    /// Monic modulus `x^f + sum modulus[i] x^i`.
    modulus: Vec<u32>,
    generator: u32,
    log: Vec<u32>,
    /// `exp[i] = generator^i`, stored twice over so that sums of logs index directly.
    exp: Vec<u32>,
}

pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// Builds `F_{p^f}` from the lexicographically smallest primitive polynomial.
///
/// Candidates `x^f + c_{f-1} x^{f-1} + ... + c_0` are ordered by the integer
/// `sum c_i p^i`; the generator is the class of `x`.
pub fn ff_make(p: u64, f: u32) -> Result<FieldDesc> {
    FieldDesc::new(p, f)
}

impl FieldDesc {
    pub fn new(p: u64, f: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if f == 0 || f > 8 {
            return Err(Error::SizeBound(format!(
                "extension degree {f} outside 1..=8"
            )));
        }
        let size = (p as u128).pow(f);
        if size > MAX_FIELD_SIZE as u128 {
            return Err(Error::SizeBound(format!("{p}^{f} > 2^20")));
        }
        let (p, size) = (p as u32, size as u32);
        let (modulus, generator) = if f == 1 {
            // x + c has root -c; take the first c whose root is primitive.
            let c = (0..p)
                .find(|&c| {
                    let r = (p - c) % p;
                    r != 0 && prime_order(r as u64, p as u64) == (p - 1) as u64
                })
                .expect("F_p^x is cyclic");
            (vec![c], (p - c) % p)
        } else {
            let m = smallest_primitive_modulus(p, f, size);
            (m, p)
        };
        let mut exp = Vec::with_capacity(2 * (size as usize - 1));
        let mut log = vec![0u32; size as usize];
        let mut x = 1u32;
        for i in 0..size - 1 {
            exp.push(x);
            log[x as usize] = i;
            x = if f == 1 {
                ((x as u64 * generator as u64) % p as u64) as u32
            } else {
                times_x(x, p, f, &modulus)
            };
        }
        debug_assert_eq!(x, 1, "modulus must be primitive");
        let half = exp.clone();
        exp.extend(half);
        Ok(FieldDesc {
            inner: Arc::new(FieldInner {
                p,
                f,
                size,
                modulus,
                generator,
                log,
                exp,
            }),
        })
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }
    pub fn degree(&self) -> u32 {
        self.inner.f
    }
    pub fn size(&self) -> u32 {
        self.inner.size
    }
    /// Coefficients `c_0..c_{f-1}` of the monic modulus.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }
    pub fn generator(&self) -> u32 {
        self.inner.generator
    }

    pub fn digits(&self, a: u32) -> Vec<u32> {
        let p = self.inner.p;
        let mut a = a;
        (0..self.inner.f)
            .map(|_| {
                let d = a % p;
                a /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, ds: &[u32]) -> u32 {
        let p = self.inner.p;
        ds.iter().rev().fold(0u32, |acc, &d| acc * p + d % p)
    }

    pub fn element(&self, code: u32) -> FieldElement {
        FieldElement {
            desc: self.clone(),
            code: code % self.inner.size,
        }
    }

    #[inline]
    pub fn add_codes(&self, a: u32, b: u32) -> u32 {
        let p = self.inner.p;
        if p == 2 {
            return a ^ b;
        }
        if self.inner.f == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        let (mut a, mut b, mut out, mut scale) = (a, b, 0u32, 1u32);
        while a > 0 || b > 0 {
            let d = (a % p + b % p) % p;
            out += d * scale;
            scale *= p;
            a /= p;
            b /= p;
        }
        out
    }

    #[inline]
    pub fn neg_code(&self, a: u32) -> u32 {
        let p = self.inner.p;
        if p == 2 {
            return a;
        }
        if self.inner.f == 1 {
            return (p - a) % p;
        }
        let (mut a, mut out, mut scale) = (a, 0u32, 1u32);
        while a > 0 {
            out += ((p - a % p) % p) * scale;
            scale *= p;
            a /= p;
        }
        out
    }

    #[inline]
    pub fn sub_codes(&self, a: u32, b: u32) -> u32 {
        self.add_codes(a, self.neg_code(b))
    }

    #[inline]
    pub fn mul_codes(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let i = &self.inner;
        i.exp[(i.log[a as usize] + i.log[b as usize]) as usize]
    }

    pub fn inv_code(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let i = &self.inner;
        let l = i.log[a as usize];
        Ok(i.exp[((i.size - 1 - l) % (i.size - 1)) as usize])
    }

    pub fn pow_code(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let i = &self.inner;
        let order = (i.size - 1) as u64;
        i.exp[((i.log[a as usize] as u64 * (e % order)) % order) as usize]
    }

    /// Discrete log to the base of the generator; `None` for zero.
    pub fn log_code(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.inner.log[a as usize])
    }

    /// `generator^e`.
    pub fn exp_code(&self, e: u64) -> u32 {
        self.inner.exp[(e % (self.inner.size as u64 - 1)) as usize]
    }

    pub fn frobenius_code(&self, a: u32) -> u32 {
        self.pow_code(a, self.inner.p as u64)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order_code(&self, a: u32) -> Result<u64> {
        let l = self.log_code(a).ok_or(Error::DivisionByZero)? as u64;
        let m = (self.inner.size - 1) as u64;
        Ok(m / super::gcd(l, m))
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.inner.size
    }

    /// Codes of the subfield with `q` elements, in increasing order.
    pub fn subfield(&self, q: u32) -> Result<Vec<u32>> {
        let (_, fq) = super::prime_power(q as u64)
            .filter(|&(p, _)| p == self.inner.p as u64)
            .ok_or_else(|| {
                Error::InvalidParameter(format!("{q} is not a power of {}", self.inner.p))
            })?;
        if !self.inner.f.is_multiple_of(fq) {
            return Err(Error::InvalidParameter(format!(
                "F_{q} is not a subfield of F_{}",
                self.inner.size
            )));
        }
        Ok(self
            .elements()
            .filter(|&a| self.pow_code(a, q as u64) == a)
            .collect())
    }

    /// Table sending each code of `small` to its image under a fixed embedding.
    ///
    /// The image of `small`'s generator is the smallest-code root of its
    /// modulus, so the embedding is deterministic.
    pub fn embedding_of(&self, small: &FieldDesc) -> Result<Vec<u32>> {
        if small.p() != self.p() || !self.degree().is_multiple_of(small.degree()) {
            return Err(Error::RingMismatch(format!(
                "{small:?} does not embed in {self:?}"
            )));
        }
        let eval = |y: u32| {
            // y^f + sum c_i y^i
            let mut acc = self.pow_code(y, small.degree() as u64);
            for (i, &c) in small.modulus().iter().enumerate() {
                acc = self.add_codes(acc, self.mul_codes(c, self.pow_code(y, i as u64)));
            }
            acc
        };
        let root = if small.degree() == 1 {
            small.generator()
        } else {
            self.elements()
                .find(|&y| eval(y) == 0)
                .expect("finite fields are normal")
        };
        let powers: Vec<u32> = (0..small.degree())
            .map(|i| self.pow_code(root, i as u64))
            .collect();
        Ok(small
            .elements()
            .map(|a| {
                small
                    .digits(a)
                    .iter()
                    .zip(&powers)
                    .fold(0, |acc, (&d, &y)| self.add_codes(acc, self.mul_codes(d, y)))
            })
            .collect())
    }
}

fn prime_order(r: u64, p: u64) -> u64 {
    let mut x = r % p;
    let mut k = 1;
    while x != 1 {
        x = x * r % p;
        k += 1;
    }
    k
}

/// Multiplies the code `a` by `x` modulo the monic modulus.
fn times_x(a: u32, p: u32, f: u32, modulus: &[u32]) -> u32 {
    let top_scale = p.pow(f - 1);
    let top = a / top_scale;
    let shifted = (a % top_scale) * p;
    if top == 0 {
        return shifted;
    }
    // subtract top * modulus (x^f = -sum c_i x^i)
    let mut out = 0u32;
    let mut scale = 1u32;
    let mut s = shifted;
    for &c in modulus {
        let d = (s % p + (p - (top * c) % p)) % p;
        out += d * scale;
        scale *= p;
        s /= p;
    }
    out
}

fn smallest_primitive_modulus(p: u32, f: u32, size: u32) -> Vec<u32> {
    let order = (size - 1) as u64;
    let factors = prime_factors(order);
    for enc in 0..size {
        let modulus: Vec<u32> = {
            let mut e = enc;
            (0..f)
                .map(|_| {
                    let d = e % p;
                    e /= p;
                    d
                })
                .collect()
        };
        if modulus[0] == 0 {
            continue;
        }
        let pow_x = |e: u64| -> u32 {
            // square-and-multiply on codes using times_x for the base x
            let mut acc = 1u32;
            let mut bits: Vec<bool> = Vec::new();
            let mut t = e;
            while t > 0 {
                bits.push(t & 1 == 1);
                t >>= 1;
            }
            for &b in bits.iter().rev() {
                acc = mul_plain(acc, acc, p, f, &modulus);
                if b {
                    acc = times_x(acc, p, f, &modulus);
                }
            }
            acc
        };
        if pow_x(order) == 1 && factors.iter().all(|&r| pow_x(order / r) != 1) {
            return modulus;
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}

/// Schoolbook multiplication on codes, used only before tables exist.
fn mul_plain(a: u32, b: u32, p: u32, f: u32, modulus: &[u32]) -> u32 {
    let mut acc = 0u32;
    let mut shifted = a;
    let mut b = b;
    for _ in 0..f {
        let d = b % p;
        b /= p;
        for _ in 0..d {
            acc = add_plain(acc, shifted, p);
        }
        shifted = times_x(shifted, p, f, modulus);
    }
    acc
}

fn add_plain(a: u32, b: u32, p: u32) -> u32 {
    let (mut a, mut b, mut out, mut scale) = (a, b, 0u32, 1u32);
    while a > 0 || b > 0 {
        out += ((a % p + b % p) % p) * scale;
        scale *= p;
        a /= p;
        b /= p;
    }
    out
}

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.f == other.inner.f)
    }
}
impl Eq for FieldDesc {}

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.f == 1 {
            write!(f, "F_{}", self.inner.p)
        } else {
            write!(f, "F_{}^{}", self.inner.p, self.inner.f)
        }
    }
}

impl Ring for FieldDesc {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.inner.p as i64) as u32
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        self.add_codes(*a, *b)
    }
    fn neg(&self, a: &u32) -> u32 {
        self.neg_code(*a)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.mul_codes(*a, *b)
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn pow(&self, a: &u32, e: u64) -> u32 {
        self.pow_code(*a, e)
    }
    fn describe(&self) -> String {
        format!("{self:?}")
    }
}

impl SerialRing for FieldDesc {
    fn descriptor(&self) -> serde_json::Value {
        serde_json::json!({"kind": "fq", "p": self.p(), "f": self.degree()})
    }
    fn from_descriptor(v: &serde_json::Value) -> Result<Self> {
        if v["kind"] != "fq" {
            return Err(Error::Format(format!("expected an fq descriptor, got {v}")));
        }
        let p = v["p"]
            .as_u64()
            .ok_or_else(|| Error::Format("missing p".into()))?;
        let f = v["f"]
            .as_u64()
            .ok_or_else(|| Error::Format("missing f".into()))?;
        FieldDesc::new(p, f as u32)
    }
    fn elem_to_json(&self, a: &u32) -> serde_json::Value {
        serde_json::json!(self.digits(*a))
    }
    fn elem_from_json(&self, v: &serde_json::Value) -> Result<u32> {
        let ds: Vec<u32> =
            serde_json::from_value(v.clone()).map_err(|e| Error::Format(e.to_string()))?;
        if ds.len() != self.degree() as usize || ds.iter().any(|&d| d >= self.p()) {
            return Err(Error::Format(format!("bad field element {v}")));
        }
        Ok(self.from_digits(&ds))
    }
}

/// A field element bundled with its field; convenient outside hot loops.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    desc: FieldDesc,
    code: u32,
}

impl FieldElement {
    pub fn desc(&self) -> &FieldDesc {
        &self.desc
    }
    pub fn code(&self) -> u32 {
        self.code
    }
    /// Polynomial-basis coordinates, lowest degree first.
    pub fn coeffs(&self) -> Vec<u32> {
        self.desc.digits(self.code)
    }
    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.desc != other.desc {
            return Err(Error::RingMismatch(format!(
                "{:?} vs {:?}",
                self.desc, other.desc
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self
            .desc
            .element(self.desc.add_codes(self.code, other.code)))
    }
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self
            .desc
            .element(self.desc.sub_codes(self.code, other.code)))
    }
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self
            .desc
            .element(self.desc.mul_codes(self.code, other.code)))
    }
    pub fn inv(&self) -> Result<Self> {
        Ok(self.desc.element(self.desc.inv_code(self.code)?))
    }
    pub fn pow(&self, e: u64) -> Self {
        self.desc.element(self.desc.pow_code(self.code, e))
    }
    pub fn frobenius(&self) -> Self {
        self.desc.element(self.desc.frobenius_code(self.code))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{:?}", self.coeffs(), self.desc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive irreducibility: no monic factor of degree <= d/2.
    fn irreducible_by_trial(p: u32, modulus: &[u32]) -> bool {
        let d = modulus.len();
        let mut full: Vec<u32> = modulus.to_vec();
        full.push(1);
        for k in 1..=d / 2 {
            for enc in 0..p.pow(k as u32) {
                let mut g: Vec<u32> = (0..k).map(|i| (enc / p.pow(i as u32)) % p).collect();
                g.push(1);
                // remainder of full by g over F_p
                let mut r = full.clone();
                while r.len() >= g.len() {
                    let lead = *r.last().unwrap();
                    let shift = r.len() - g.len();
                    for (i, &gi) in g.iter().enumerate() {
                        r[shift + i] = (r[shift + i] + p * p - lead * gi % p) % p;
                    }
                    r.pop();
                }
                if r.iter().all(|&c| c == 0) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn small_fields_match_hand_computation() {
        let f2 = ff_make(2, 1).unwrap();
        assert_eq!(f2.generator(), 1);
        let f4 = ff_make(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1]); // x^2 + x + 1
        assert_eq!(f4.generator(), 2); // x
        assert!(irreducible_by_trial(2, f4.modulus()));
        let f3 = ff_make(3, 1).unwrap();
        assert_eq!(f3.generator(), 2);
        assert_eq!(f3.order_code(2).unwrap(), 2);
    }

    #[test]
    fn f4_product_of_x_with_itself() {
        let f4 = ff_make(2, 2).unwrap();
        let x = f4.element(2);
        // x^2 = x + 1
        assert_eq!(x.mul(&x).unwrap().coeffs(), vec![1, 1]);
    }

    #[test]
    fn moduli_are_irreducible_and_primitive() {
        for (p, f) in [(2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2), (2, 8)] {
            let k = ff_make(p, f).unwrap();
            assert!(irreducible_by_trial(p as u32, k.modulus()), "{k:?}");
            assert_eq!(k.order_code(k.generator()).unwrap(), k.size() as u64 - 1);
        }
    }

    #[test]
    fn construction_is_deterministic() {
        let a = ff_make(3, 4).unwrap();
        let b = ff_make(3, 4).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a.generator(), b.generator());
        assert!(a.elements().all(|x| a.log_code(x) == b.log_code(x)));
    }

    #[test]
    fn frobenius_has_order_f() {
        let f9 = ff_make(3, 2).unwrap();
        for a in f9.elements() {
            let e = f9.element(a);
            assert_eq!(e.frobenius().frobenius(), e);
        }
    }

    #[test]
    fn field_axioms_exhaustive_f8() {
        let k = ff_make(2, 3).unwrap();
        for a in k.elements() {
            assert_eq!(k.add_codes(a, 0), a);
            if a != 0 {
                assert_eq!(k.mul_codes(a, k.inv_code(a).unwrap()), 1);
            }
            for b in k.elements() {
                assert_eq!(k.add_codes(a, b), k.add_codes(b, a));
                for c in [1, 3, 6] {
                    let lhs = k.mul_codes(a, k.add_codes(b, c));
                    let rhs = k.add_codes(k.mul_codes(a, b), k.mul_codes(a, c));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn errors() {
        assert_eq!(ff_make(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(ff_make(2, 21), Err(Error::SizeBound(_))));
        assert!(matches!(ff_make(3, 13), Err(Error::SizeBound(_))));
        let f4 = ff_make(2, 2).unwrap();
        let f2 = ff_make(2, 1).unwrap();
        assert_eq!(f4.element(0).inv().unwrap_err(), Error::DivisionByZero);
        assert!(matches!(
            f4.element(1).add(&f2.element(1)),
            Err(Error::RingMismatch(_))
        ));
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let small = ff_make(2, 2).unwrap();
        let big = ff_make(2, 4).unwrap();
        let e = big.embedding_of(&small).unwrap();
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(
                    e[small.add_codes(a, b) as usize],
                    big.add_codes(e[a as usize], e[b as usize])
                );
                assert_eq!(
                    e[small.mul_codes(a, b) as usize],
                    big.mul_codes(e[a as usize], e[b as usize])
                );
            }
        }
        let mut image: Vec<u32> = e.clone();
        image.sort();
        assert_eq!(image, big.subfield(4).unwrap());
    }
}
