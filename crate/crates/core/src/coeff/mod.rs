//! Coefficient rings.
//!
//! Every ring used by the series engine implements [`Ring`]: the ring value
//! carries the runtime parameters (`p`, `f`, precision, ...) and elements are
//! plain data. Elements are never mixed across rings; the series layer checks
//! ring equality before combining.

mod algebra;
mod cyclo;
mod fq;
mod padic;
pub mod poly;
mod witt;

pub use algebra::FiniteAlgebra;
pub use cyclo::{cyclotomic_polynomial, ratio, CycloElement};
pub use fq::{ff_make, FieldDesc, FieldElement, MAX_FIELD_SIZE};
pub use padic::{BoundedPadic, PadicRing};
pub use witt::{WittElement, WittRing};

use std::fmt::Debug;

/// A commutative ring with runtime parameters.
pub trait Ring: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// True only for exact zeros; these are never stored in a series.
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Short human-readable name, used in error messages and JSON.
    fn describe(&self) -> String;
}

/// Rings whose elements have a canonical JSON form.
pub trait SerialRing: Ring {
    fn descriptor(&self) -> serde_json::Value;
    fn from_descriptor(v: &serde_json::Value) -> crate::Result<Self>;
    fn elem_to_json(&self, a: &Self::Elem) -> serde_json::Value;
    fn elem_from_json(&self, v: &serde_json::Value) -> crate::Result<Self::Elem>;
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

/// Splits a prime power `q = p^f`; `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let fs = prime_factors(q);
    if fs.len() != 1 {
        return None;
    }
    let p = fs[0];
    let mut f = 0;
    let mut m = q;
    while m > 1 {
        m /= p;
        f += 1;
    }
    Some((p, f))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

pub fn moebius(mut n: u64) -> i64 {
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m` when `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Multiplicative order of `q` modulo `m` (`m > 1`, `gcd(q, m) = 1`).
pub fn mult_order(q: u64, m: u64) -> u64 {
    let mut x = q % m;
    let mut k = 1;
    while x != 1 % m {
        x = mul_mod(x, q, m);
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_theory_helpers() {
        assert!(is_prime(2) && is_prime(97) && !is_prime(1) && !is_prime(91));
        assert_eq!(prime_factors(84), vec![2, 3, 7]);
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(12), None);
        assert_eq!(moebius(6), 1);
        assert_eq!(moebius(12), 0);
        assert_eq!(moebius(3), -1);
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 4), None);
        assert_eq!(mult_order(2, 9), 6);
    }
}
