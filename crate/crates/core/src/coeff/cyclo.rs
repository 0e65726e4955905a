use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in super::divisors(n).into_iter().filter(|&d| d < n) {
        let den = cyclotomic_polynomial(d);
        num = exact_div(&num, &den);
    }
    num
}

fn exact_div(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i64; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db]; // b is monic
        q[i] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[i + j] -= c * bj;
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0));
    q
}

struct CycloField {
    n: u64,
    phi: usize,
    /// `powers[j]` is `zeta^j` reduced to the power basis, for `0 <= j < n`.
    powers: Vec<Vec<i64>>,
}

fn field(n: u64) -> Arc<CycloField> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycloField>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(n)
        .or_insert_with(|| {
            let poly = cyclotomic_polynomial(n);
            let phi = poly.len() - 1;
            let mut powers = Vec::with_capacity(n as usize);
            let mut cur = vec![0i64; phi];
            cur[0] = 1;
            for _ in 0..n {
                powers.push(cur.clone());
                // multiply by zeta
                let top = cur[phi - 1];
                for i in (1..phi).rev() {
                    cur[i] = cur[i - 1];
                }
                cur[0] = 0;
                for i in 0..phi {
                    cur[i] -= top * poly[i];
                }
            }
            Arc::new(CycloField { n, phi, powers })
        })
        .clone()
}

/// An element of `Q(zeta_N)` in the power basis modulo `Phi_N`.
///
/// The arithmetic operators coerce both operands to the lcm of their
/// conductors; the `try_*` methods insist on equal conductors instead.
#[derive(Clone)]
pub struct CycloElement {
    field: Arc<CycloField>,
    coeffs: Vec<BigRational>,
}

impl CycloElement {
    pub fn zero(n: u64) -> Self {
        let f = field(n.max(1));
        let coeffs = vec![BigRational::zero(); f.phi];
        CycloElement { field: f, coeffs }
    }

    pub fn from_rational(n: u64, r: BigRational) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = r;
        z
    }

    pub fn from_int(n: u64, v: i64) -> Self {
        Self::from_rational(n, BigRational::from_integer(v.into()))
    }

    /// `zeta_n^k`.
    pub fn zeta(n: u64, k: i64) -> Self {
        let f = field(n.max(1));
        let j = k.rem_euclid(f.n as i64) as usize;
        let coeffs = f.powers[j]
            .iter()
            .map(|&c| BigRational::from_integer(c.into()))
            .collect();
        CycloElement { field: f, coeffs }
    }

    pub fn conductor(&self) -> u64 {
        self.field.n
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    /// Rewrites `self` over `Q(zeta_m)`; `m` must be a multiple of the conductor.
    pub fn coerce(&self, m: u64) -> Result<Self> {
        let n = self.conductor();
        if !m.is_multiple_of(n) {
            return Err(Error::RingMismatch(format!(
                "Q(zeta_{n}) is not contained in Q(zeta_{m})"
            )));
        }
        if m == n {
            return Ok(self.clone());
        }
        let step = (m / n) as i64;
        Ok(self.map_powers(m, |i| i as i64 * step))
    }

    /// `sum c_i zeta_n^{e(i)}` evaluated in `Q(zeta_m)`.
    fn map_powers(&self, m: u64, e: impl Fn(usize) -> i64) -> Self {
        let target = field(m);
        let mut out = vec![BigRational::zero(); target.phi];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let j = e(i).rem_euclid(m as i64) as usize;
            for (o, &b) in out.iter_mut().zip(&target.powers[j]) {
                if b != 0 {
                    *o += c * BigRational::from_integer(b.into());
                }
            }
        }
        CycloElement {
            field: target,
            coeffs: out,
        }
    }

    /// The Galois automorphism `zeta -> zeta^k`, `gcd(k, N) = 1`.
    pub fn galois(&self, k: i64) -> Self {
        self.map_powers(self.conductor(), |i| i as i64 * k)
    }

    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycloElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.conductor() != other.conductor() {
            return Err(Error::RingMismatch(format!(
                "conductors {} and {}",
                self.conductor(),
                other.conductor()
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.add_same(other))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_same(other))
    }

    fn add_same(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        CycloElement {
            field: self.field.clone(),
            coeffs,
        }
    }

    fn mul_same(&self, other: &Self) -> Self {
        let f = &self.field;
        let mut prod = vec![BigRational::zero(); 2 * f.phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut out: Vec<BigRational> = prod[..f.phi].to_vec();
        for (d, c) in prod.iter().enumerate().skip(f.phi) {
            if c.is_zero() {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(&f.powers[d % f.n as usize]) {
                if b != 0 {
                    *o += c * BigRational::from_integer(b.into());
                }
            }
        }
        CycloElement {
            field: f.clone(),
            coeffs: out,
        }
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let m = super::lcm(self.conductor(), other.conductor());
        (self.coerce(m).unwrap(), other.coerce(m).unwrap())
    }

    /// Values under the complex embeddings `zeta -> exp(2 pi i k / N)`, `gcd(k, N) = 1`.
    pub fn embeddings(&self) -> Vec<(f64, f64)> {
        let n = self.conductor();
        (1..=n)
            .filter(|&k| super::gcd(k, n) == 1)
            .map(|k| {
                self.coeffs
                    .iter()
                    .enumerate()
                    .fold((0.0, 0.0), |(re, im), (i, c)| {
                        let t = 2.0 * std::f64::consts::PI * (k * i as u64 % n) as f64 / n as f64;
                        let c = ratio_to_f64(c);
                        (re + c * t.cos(), im + c * t.sin())
                    })
            })
            .collect()
    }

    /// Sort key: coefficients over `Q(zeta_m)`.
    pub fn key(&self, m: u64) -> Vec<BigRational> {
        self.coerce(m).expect("conductor divides m").coeffs
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

impl PartialEq for CycloElement {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor() == other.conductor() {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}
impl Eq for CycloElement {}

impl Add for &CycloElement {
    type Output = CycloElement;
    fn add(self, rhs: &CycloElement) -> CycloElement {
        if self.conductor() == rhs.conductor() {
            return self.add_same(rhs);
        }
        let (a, b) = self.common(rhs);
        a.add_same(&b)
    }
}

impl Mul for &CycloElement {
    type Output = CycloElement;
    fn mul(self, rhs: &CycloElement) -> CycloElement {
        if self.conductor() == rhs.conductor() {
            return self.mul_same(rhs);
        }
        let (a, b) = self.common(rhs);
        a.mul_same(&b)
    }
}

impl Neg for &CycloElement {
    type Output = CycloElement;
    fn neg(self) -> CycloElement {
        CycloElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &CycloElement {
    type Output = CycloElement;
    fn sub(self, rhs: &CycloElement) -> CycloElement {
        self + &(-rhs)
    }
}

impl fmt::Display for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.conductor();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (i, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (_, true) => write!(f, "z{n}^{i}")?,
                (_, false) => write!(f, "{abs}*z{n}^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Convenience: a rational `a/b` as a `BigRational`.
pub fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn zeta3_sum() {
        let s = &CycloElement::zeta(3, 1) + &CycloElement::zeta(3, 2);
        assert_eq!(s, CycloElement::from_int(3, -1));
        assert_eq!(s.to_rational(), Some(ratio(-1, 1)));
    }

    #[test]
    fn zeta8_squared_is_zeta4() {
        let z8 = CycloElement::zeta(8, 1);
        assert_eq!(&z8 * &z8, CycloElement::zeta(4, 1));
        assert!(z8.try_mul(&CycloElement::zeta(4, 1)).is_err());
        let z4 = CycloElement::zeta(4, 1).coerce(8).unwrap();
        assert_eq!(z8.try_mul(&z8).unwrap(), z4);
    }

    #[test]
    fn conjugation() {
        for n in [5u64, 12, 9] {
            let z = &CycloElement::zeta(n, 1) + &CycloElement::from_rational(n, ratio(2, 3));
            let w = &z * &CycloElement::zeta(n, 2);
            assert_eq!(w.conj().conj(), w);
            assert_eq!(
                &CycloElement::zeta(n, 1) * &CycloElement::zeta(n, 1).conj(),
                CycloElement::from_int(n, 1)
            );
            // conj is a ring map
            assert_eq!((&z * &w).conj(), &z.conj() * &w.conj());
        }
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        for n in 2..=30u64 {
            let s = (0..n as i64).fold(CycloElement::zero(n), |acc, j| {
                &acc + &CycloElement::zeta(n, j)
            });
            assert!(s.is_zero(), "n = {n}");
        }
    }

    #[test]
    fn norm_squared_is_real_and_nonnegative() {
        let z = &(&CycloElement::zeta(7, 1) + &CycloElement::zeta(7, 3)).scale(&ratio(3, 2))
            - &CycloElement::from_int(7, 1);
        let nz = &z * &z.conj();
        assert_eq!(nz.conj(), nz);
        for (re, im) in nz.embeddings() {
            assert!(re >= -1e-12 && im.abs() < 1e-9);
        }
    }

    #[test]
    fn display() {
        let z = &CycloElement::zeta(4, 1) - &CycloElement::from_rational(4, ratio(1, 2));
        assert_eq!(z.to_string(), "-1/2 + z4^1");
    }
}
