//! Dense univariate polynomials over a finite field, as coefficient vectors
//! (lowest degree first, no trailing zeros).

use super::{prime_factors, FieldDesc};

pub type Poly = Vec<u32>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn add(k: &FieldDesc, a: &[u32], b: &[u32]) -> Poly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| k.add_codes(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect(),
    )
}

pub fn sub(k: &FieldDesc, a: &[u32], b: &[u32]) -> Poly {
    let nb: Poly = b.iter().map(|&c| k.neg_code(c)).collect();
    add(k, a, &nb)
}

pub fn scale(k: &FieldDesc, a: &[u32], c: u32) -> Poly {
    trim(a.iter().map(|&x| k.mul_codes(x, c)).collect())
}

pub fn mul(k: &FieldDesc, a: &[u32], b: &[u32]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = k.add_codes(out[i + j], k.mul_codes(x, y));
        }
    }
    trim(out)
}

/// Quotient and remainder; panics on division by the zero polynomial.
pub fn divrem(k: &FieldDesc, a: &[u32], b: &[u32]) -> (Poly, Poly) {
    let db = degree(b).expect("division by zero polynomial");
    let inv_lead = k.inv_code(b[db]).expect("nonzero leading coefficient");
    let mut r: Poly = trim(a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u32; r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = k.mul_codes(r[dr], inv_lead);
        q[dr - db] = c;
        for i in 0..=db {
            r[dr - db + i] = k.sub_codes(r[dr - db + i], k.mul_codes(c, b[i]));
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn rem(k: &FieldDesc, a: &[u32], b: &[u32]) -> Poly {
    divrem(k, a, b).1
}

pub fn monic(k: &FieldDesc, a: &[u32]) -> Poly {
    match degree(a) {
        None => Vec::new(),
        Some(d) => scale(k, a, k.inv_code(a[d]).unwrap()),
    }
}

/// Monic gcd (zero if both inputs are zero).
pub fn gcd(k: &FieldDesc, a: &[u32], b: &[u32]) -> Poly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(k, &a, &b);
        a = b;
        b = r;
    }
    monic(k, &a)
}

pub fn mulmod(k: &FieldDesc, a: &[u32], b: &[u32], m: &[u32]) -> Poly {
    rem(k, &mul(k, a, b), m)
}

pub fn powmod(k: &FieldDesc, a: &[u32], mut e: u128, m: &[u32]) -> Poly {
    let mut base = rem(k, a, m);
    let mut acc = rem(k, &[1], m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(k, &acc, &base, m);
        }
        base = mulmod(k, &base, &base, m);
        e >>= 1;
    }
    acc
}

pub fn eval(k: &FieldDesc, a: &[u32], x: u32) -> u32 {
    a.iter()
        .rev()
        .fold(0, |acc, &c| k.add_codes(k.mul_codes(acc, x), c))
}

/// Rabin's test over `F_q`.
pub fn is_irreducible(k: &FieldDesc, g: &[u32]) -> bool {
    let Some(n) = degree(g) else { return false };
    if n == 0 {
        return false;
    }
    let q = k.size() as u128;
    let x: Poly = vec![0, 1];
    let frob_pow = |j: usize| powmod(k, &x, q.pow(j as u32), g);
    if frob_pow(n) != rem(k, &x, g) {
        return false;
    }
    prime_factors(n as u64).into_iter().all(|r| {
        let h = sub(k, &frob_pow(n / r as usize), &x);
        degree(&gcd(k, &h, g)) == Some(0)
    })
}

/// Monic degree-`n` polynomials over `F_q` in the order of the integer
/// `sum code(c_i) q^i` of their lower coefficients.
pub fn monic_polys(k: &FieldDesc, n: usize) -> impl Iterator<Item = Poly> + '_ {
    let q = k.size() as u64;
    (0..q.pow(n as u32)).map(move |mut enc| {
        let mut v: Poly = (0..n)
            .map(|_| {
                let c = (enc % q) as u32;
                enc /= q;
                c
            })
            .collect();
        v.push(1);
        v
    })
}

/// The smallest monic primitive polynomial of degree `n` over `F_q`.
pub fn smallest_primitive(k: &FieldDesc, n: usize) -> Poly {
    let order = (k.size() as u128).pow(n as u32) - 1;
    let factors = prime_factors(order as u64);
    let x: Poly = vec![0, 1];
    monic_polys(k, n)
        .find(|g| {
            g[0] != 0
                && is_irreducible(k, g)
                && degree(&powmod(k, &x, order, g)) == Some(0)
                && factors.iter().all(|&r| {
                    let t = powmod(k, &x, order / r as u128, g);
                    !(t.len() == 1 && t[0] == 1)
                })
        })
        .expect("primitive polynomials exist")
}

/// Monic irreducible polynomials of degree exactly `n` over `F_q`.
pub fn irreducibles(k: &FieldDesc, n: usize) -> Vec<Poly> {
    monic_polys(k, n).filter(|g| is_irreducible(k, g)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::ff_make;

    #[test]
    fn division_identity() {
        let k = ff_make(3, 1).unwrap();
        let a = vec![1, 2, 0, 1, 2];
        let b = vec![2, 1, 1];
        let (q, r) = divrem(&k, &a, &b);
        assert!(r.len() < b.len());
        assert_eq!(add(&k, &mul(&k, &q, &b), &r), a);
    }

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        // number of monic irreducibles of degree n: (1/n) sum_{d|n} mu(d) q^{n/d}
        for (p, f, n) in [(2u64, 1u32, 4usize), (3, 1, 3), (2, 2, 2), (5, 1, 2)] {
            let k = ff_make(p, f).unwrap();
            let q = k.size() as i64;
            let expected: i64 = crate::coeff::divisors(n as u64)
                .into_iter()
                .map(|d| crate::coeff::moebius(d) * q.pow((n as u64 / d) as u32))
                .sum::<i64>()
                / n as i64;
            assert_eq!(irreducibles(&k, n).len() as i64, expected, "q={q} n={n}");
        }
    }

    #[test]
    fn primitive_over_prime_field_matches_field_modulus() {
        for (p, f) in [(2u64, 2u32), (2, 3), (3, 2), (5, 2)] {
            let base = ff_make(p, 1).unwrap();
            let ext = ff_make(p, f).unwrap();
            let mut m = ext.modulus().to_vec();
            m.push(1);
            assert_eq!(smallest_primitive(&base, f as usize), m);
        }
    }
}
