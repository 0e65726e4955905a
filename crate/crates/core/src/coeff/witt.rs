use std::fmt;

use smallvec::SmallVec;

use super::{ff_make, FieldDesc, Ring, SerialRing};
use crate::{Error, Result};

/// The truncated Witt ring `W(F_{p^f}) / p^N`.
///
/// Elements are stored in the polynomial basis `Z/p^N [x] / (m~(x))`, where
/// `m~` is the coefficientwise lift of the modulus of `F_{p^f}`; since that
/// modulus is irreducible mod `p` this quotient is the unramified extension.
/// The Teichmüller-digit form `sum omega(d_i) p^i` is available through
/// [`WittRing::digits`] and [`WittRing::from_digits`].
#[derive(Clone)]
pub struct WittRing {
    field: FieldDesc,
    prec: u32,
    pn: u64,
    modulus: SmallVec<[u64; 4]>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WittElement(pub(crate) SmallVec<[u64; 4]>);

impl WittElement {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }
}

impl WittRing {
    pub fn new(field: FieldDesc, prec: u32) -> Result<Self> {
        let p = field.p() as u64;
        if prec == 0 {
            return Err(Error::InvalidParameter(
                "Witt precision must be at least 1".into(),
            ));
        }
        let pn = (p as u128).pow(prec);
        if pn >= 1u128 << 62 {
            return Err(Error::SizeBound(format!(
                "{p}^{prec} does not fit in 62 bits"
            )));
        }
        let modulus = field.modulus().iter().map(|&c| c as u64).collect();
        Ok(WittRing {
            field,
            prec,
            pn: pn as u64,
            modulus,
        })
    }

    pub fn with_params(p: u64, f: u32, prec: u32) -> Result<Self> {
        Self::new(ff_make(p, f)?, prec)
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }
    pub fn p(&self) -> u64 {
        self.field.p() as u64
    }
    pub fn degree(&self) -> u32 {
        self.field.degree()
    }
    pub fn precision(&self) -> u32 {
        self.prec
    }
    /// `p^N`.
    pub fn modulus_int(&self) -> u64 {
        self.pn
    }

    pub fn from_coords(&self, c: &[u64]) -> WittElement {
        let f = self.degree() as usize;
        let mut v: SmallVec<[u64; 4]> = SmallVec::from_elem(0, f);
        for (i, &x) in c.iter().enumerate().take(f) {
            v[i] = x % self.pn;
        }
        WittElement(v)
    }

    #[inline]
    fn addm(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.pn {
            s - self.pn
        } else {
            s
        }
    }

    /// Reduction mod `p` onto the residue field.
    pub fn reduce(&self, a: &WittElement) -> u32 {
        let p = self.p();
        let ds: Vec<u32> = a.0.iter().map(|&c| (c % p) as u32).collect();
        self.field.from_digits(&ds)
    }

    /// A lift of a residue code with coordinates in `[0, p)`.
    pub fn naive_lift(&self, code: u32) -> WittElement {
        let ds = self.field.digits(code);
        WittElement(ds.into_iter().map(|d| d as u64).collect())
    }

    /// The multiplicative (Teichmüller) lift; `0` lifts to `0`.
    pub fn teichmuller(&self, code: u32) -> WittElement {
        if code == 0 {
            return self.zero();
        }
        let q = self.field.size() as u64;
        let mut x = self.naive_lift(code);
        // Each q-th power gains one p-adic digit of agreement with omega(a).
        for _ in 1..self.prec {
            x = Ring::pow(self, &x, q);
        }
        x
    }

    /// Largest `k` with `p^k | a`, or `None` for zero.
    pub fn valuation(&self, a: &WittElement) -> Option<u32> {
        let p = self.p();
        a.0.iter()
            .filter(|&&c| c != 0)
            .map(|&c| {
                let mut c = c;
                let mut v = 0;
                while c % p == 0 {
                    c /= p;
                    v += 1;
                }
                v
            })
            .min()
    }

    pub fn is_unit(&self, a: &WittElement) -> bool {
        self.reduce(a) != 0
    }

    /// `a * p^k`.
    pub fn shift_up(&self, a: &WittElement, k: u32) -> WittElement {
        if k >= self.prec {
            return self.zero();
        }
        let s = self.p().pow(k);
        WittElement(a.0.iter().map(|&c| super::mul_mod(c, s, self.pn)).collect())
    }

    /// `a / p^k`, assuming `p^k | a`; the top `k` digits of the result are zero.
    pub fn shift_down(&self, a: &WittElement, k: u32) -> WittElement {
        if k >= self.prec {
            return self.zero();
        }
        let s = self.p().pow(k);
        debug_assert!(a.0.iter().all(|&c| c % s == 0));
        WittElement(a.0.iter().map(|&c| c / s).collect())
    }

    pub fn unit_inverse(&self, a: &WittElement) -> Result<WittElement> {
        let r = self.reduce(a);
        let inv0 = self.field.inv_code(r)?;
        let mut y = self.naive_lift(inv0);
        let two = self.from_int(2);
        // Newton: each step doubles the number of correct digits.
        let mut correct = 1;
        while correct < self.prec {
            let t = self.sub(&two, &self.mul(a, &y));
            y = self.mul(&y, &t);
            correct *= 2;
        }
        Ok(y)
    }

    /// Teichmüller digits `d_0..d_{N-1}` as residue codes.
    pub fn digits(&self, a: &WittElement) -> Vec<u32> {
        let mut x = a.clone();
        let mut out = Vec::with_capacity(self.prec as usize);
        for i in 0..self.prec {
            let d = self.reduce(&x);
            out.push(d);
            if i + 1 < self.prec {
                x = self.shift_down(&self.sub(&x, &self.teichmuller(d)), 1);
            }
        }
        out
    }

    pub fn from_digits(&self, ds: &[u32]) -> WittElement {
        let mut acc = self.zero();
        for &d in ds.iter().take(self.prec as usize).rev() {
            acc = self.add(&self.shift_up(&acc, 1), &self.teichmuller(d));
        }
        acc
    }

    /// The Frobenius lift: `omega(d) -> omega(d^p)` digitwise.
    pub fn sigma(&self, a: &WittElement) -> WittElement {
        if self.degree() == 1 {
            return a.clone();
        }
        let ds: Vec<u32> = self
            .digits(a)
            .into_iter()
            .map(|d| self.field.frobenius_code(d))
            .collect();
        self.from_digits(&ds)
    }

    /// Reinterprets `a` at another precision: truncates, or pads with zero digits.
    pub fn change_precision(&self, target: &WittRing, a: &WittElement) -> WittElement {
        debug_assert_eq!(self.field, target.field);
        WittElement(a.0.iter().map(|&c| c % target.pn).collect())
    }

    /// Value of an element of `W(F_p)/p^N` as an integer in `[0, p^N)`.
    pub fn to_u64(&self, a: &WittElement) -> Option<u64> {
        a.0[1..].iter().all(|&c| c == 0).then(|| a.0[0])
    }

    /// `a` as a signed integer in `(-p^N/2, p^N/2]`, when it lies in `Z/p^N`.
    pub fn to_signed(&self, a: &WittElement) -> Option<i64> {
        self.to_u64(a).map(|v| {
            if v > self.pn / 2 {
                v as i64 - self.pn as i64
            } else {
                v as i64
            }
        })
    }
}

impl PartialEq for WittRing {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.prec == other.prec
    }
}

impl fmt::Debug for WittRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W({:?})/p^{}", self.field, self.prec)
    }
}

impl Ring for WittRing {
    type Elem = WittElement;

    fn zero(&self) -> WittElement {
        WittElement(SmallVec::from_elem(0, self.degree() as usize))
    }
    fn one(&self) -> WittElement {
        self.from_int(1)
    }
    fn from_int(&self, n: i64) -> WittElement {
        let mut z = self.zero();
        z.0[0] = n.rem_euclid(self.pn as i64) as u64;
        z
    }
    fn add(&self, a: &WittElement, b: &WittElement) -> WittElement {
        WittElement(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| self.addm(x, y))
                .collect(),
        )
    }
    fn neg(&self, a: &WittElement) -> WittElement {
        WittElement(
            a.0.iter()
                .map(|&x| if x == 0 { 0 } else { self.pn - x })
                .collect(),
        )
    }
    fn mul(&self, a: &WittElement, b: &WittElement) -> WittElement {
        let f = self.degree() as usize;
        let pn = self.pn as u128;
        if f == 1 {
            let mut v = SmallVec::new();
            v.push(((a.0[0] as u128 * b.0[0] as u128) % pn) as u64);
            return WittElement(v);
        }
        let mut prod = vec![0u128; 2 * f - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u128 * y as u128) % pn;
            }
        }
        // x^f = -sum c_i x^i
        for k in (f..2 * f - 1).rev() {
            let top = prod[k];
            if top == 0 {
                continue;
            }
            for (i, &c) in self.modulus.iter().enumerate() {
                let t = (top * c as u128) % pn;
                prod[k - f + i] = (prod[k - f + i] + pn - t) % pn;
            }
        }
        WittElement(prod[..f].iter().map(|&c| c as u64).collect())
    }
    fn is_zero(&self, a: &WittElement) -> bool {
        a.0.iter().all(|&c| c == 0)
    }
    fn describe(&self) -> String {
        format!("{self:?}")
    }
}

impl SerialRing for WittRing {
    fn descriptor(&self) -> serde_json::Value {
        serde_json::json!({"kind": "witt", "p": self.p(), "f": self.degree(), "N": self.prec})
    }
    fn from_descriptor(v: &serde_json::Value) -> Result<Self> {
        if v["kind"] != "witt" {
            return Err(Error::Format(format!(
                "expected a witt descriptor, got {v}"
            )));
        }
        let get = |k: &str| {
            v[k].as_u64()
                .ok_or_else(|| Error::Format(format!("missing {k}")))
        };
        WittRing::with_params(get("p")?, get("f")? as u32, get("N")? as u32)
    }
    fn elem_to_json(&self, a: &WittElement) -> serde_json::Value {
        let ds: Vec<Vec<u32>> = self
            .digits(a)
            .into_iter()
            .map(|d| self.field.digits(d))
            .collect();
        serde_json::json!(ds)
    }
    fn elem_from_json(&self, v: &serde_json::Value) -> Result<WittElement> {
        let ds: Vec<Vec<u32>> =
            serde_json::from_value(v.clone()).map_err(|e| Error::Format(e.to_string()))?;
        if ds.len() != self.prec as usize {
            return Err(Error::Format(format!("expected {} digits", self.prec)));
        }
        let mut codes = Vec::with_capacity(ds.len());
        for d in ds {
            if d.len() != self.degree() as usize || d.iter().any(|&c| c >= self.field.p()) {
                return Err(Error::Format("bad residue digit".into()));
            }
            codes.push(self.field.from_digits(&d));
        }
        Ok(self.from_digits(&codes))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn teichmuller_of_two_mod_81() {
        let w = WittRing::with_params(3, 1, 4).unwrap();
        let t = w.teichmuller(2);
        assert_eq!(w.to_u64(&t), Some(80));
        assert_eq!(w.mul(&t, &t), w.one());
        assert_eq!(w.teichmuller(1), w.one());
        assert!(w.is_zero(&w.teichmuller(0)));
    }

    #[test]
    fn teichmuller_lifts_are_roots_of_unity() {
        for (p, f, n) in [(2, 2, 6), (3, 2, 5), (5, 1, 4), (2, 3, 8)] {
            let w = WittRing::with_params(p, f, n).unwrap();
            let q = w.field().size() as u64;
            for a in 1..w.field().size() {
                let t = w.teichmuller(a);
                assert_eq!(w.reduce(&t), a);
                assert_eq!(w.pow(&t, q - 1), w.one());
            }
        }
    }

    #[test]
    fn prime_field_matches_integers() {
        let w = WittRing::with_params(3, 1, 7).unwrap();
        let m = 3u64.pow(7);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let (a, b) = (rng.gen_range(0..m), rng.gen_range(0..m));
            let (x, y) = (w.from_int(a as i64), w.from_int(b as i64));
            assert_eq!(w.to_u64(&w.add(&x, &y)), Some((a + b) % m));
            assert_eq!(w.to_u64(&w.mul(&x, &y)), Some(a * b % m));
            assert_eq!(w.to_u64(&w.neg(&x)), Some((m - a) % m));
        }
    }

    #[test]
    fn digits_round_trip_and_reduction() {
        let w = WittRing::with_params(2, 2, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let a = w.from_coords(&[rng.gen_range(0..32), rng.gen_range(0..32)]);
            let ds = w.digits(&a);
            assert_eq!(ds.len(), 5);
            assert_eq!(ds[0], w.reduce(&a));
            assert_eq!(w.from_digits(&ds), a);
        }
    }

    #[test]
    fn sigma_on_teichmuller_of_x() {
        let w = WittRing::with_params(2, 2, 3).unwrap();
        // code 2 is x, code 3 is x + 1 = x^2
        assert_eq!(w.sigma(&w.teichmuller(2)), w.teichmuller(3));
        let w1 = WittRing::with_params(5, 1, 3).unwrap();
        let a = w1.from_int(17);
        assert_eq!(w1.sigma(&a), a);
    }

    #[test]
    fn sigma_is_a_ring_map_of_order_f() {
        let w = WittRing::with_params(3, 2, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let a = w.from_coords(&[rng.gen_range(0..81), rng.gen_range(0..81)]);
            let b = w.from_coords(&[rng.gen_range(0..81), rng.gen_range(0..81)]);
            assert_eq!(w.sigma(&w.mul(&a, &b)), w.mul(&w.sigma(&a), &w.sigma(&b)));
            assert_eq!(w.sigma(&w.add(&a, &b)), w.add(&w.sigma(&a), &w.sigma(&b)));
            assert_eq!(w.sigma(&w.sigma(&a)), a);
        }
    }

    #[test]
    fn ring_axioms_and_reduction_map() {
        let w = WittRing::with_params(2, 3, 6).unwrap();
        let k = w.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut rnd = || {
            w.from_coords(&[
                rng.gen_range(0..64),
                rng.gen_range(0..64),
                rng.gen_range(0..64),
            ])
        };
        for _ in 0..100 {
            let (a, b, c) = (rnd(), rnd(), rnd());
            assert_eq!(
                w.mul(&a, &w.add(&b, &c)),
                w.add(&w.mul(&a, &b), &w.mul(&a, &c))
            );
            assert_eq!(w.mul(&a, &w.mul(&b, &c)), w.mul(&w.mul(&a, &b), &c));
            assert_eq!(w.mul(&a, &b), w.mul(&b, &a));
            assert_eq!(
                w.reduce(&w.mul(&a, &b)),
                k.mul_codes(w.reduce(&a), w.reduce(&b))
            );
            assert_eq!(
                w.reduce(&w.add(&a, &b)),
                k.add_codes(w.reduce(&a), w.reduce(&b))
            );
        }
    }

    #[test]
    fn unit_inverse() {
        let w = WittRing::with_params(3, 2, 6).unwrap();
        let a = w.from_coords(&[4, 9]);
        let inv = w.unit_inverse(&a).unwrap();
        assert_eq!(w.mul(&a, &inv), w.one());
        assert_eq!(
            w.unit_inverse(&w.from_int(3)).unwrap_err(),
            Error::DivisionByZero
        );
    }

    #[test]
    fn json_round_trip() {
        let w = WittRing::with_params(2, 2, 4).unwrap();
        let a = w.from_coords(&[5, 11]);
        let j = w.elem_to_json(&a);
        assert_eq!(w.elem_from_json(&j).unwrap(), a);
        assert_eq!(WittRing::from_descriptor(&w.descriptor()).unwrap(), w);
    }
}
