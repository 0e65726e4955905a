//! Dixon-Schneider: the irreducible characters as common eigenvectors of
//! the class multiplication matrices, computed modulo a prime `l` with
//! `l = 1 mod exp(G)` and lifted to cyclotomic values.

use rayon::prelude::*;

use super::group::GlGroup;
use super::linalg::{self, Matrix};
use crate::coeff::{ff_make, is_prime, CycloElement, FieldDesc};
use crate::{Error, Result};

/// `c[r][s][t] = #{x in C_r : x^{-1} z_t in C_s}` for the representative `z_t`.
fn structure_constants(g: &GlGroup) -> Vec<Vec<Vec<u64>>> {
    let k = g.num_classes();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
    for i in 0..g.order() {
        members[g.class_of(i)].push(i);
    }
    members
        .par_iter()
        .map(|xs| {
            let mut c = vec![vec![0u64; k]; k];
            for &x in xs {
                let xi = g.inverse(x);
                for (t, cl) in g.classes().iter().enumerate() {
                    let s = g.class_of(g.mul(xi, cl.representative));
                    c[s][t] += 1;
                }
            }
            c
        })
        .collect()
}

/// Primes `l = 1 mod e`, `l > 2 sqrt(order)`, in increasing order.
fn candidate_primes(e: u64, order: u64) -> impl Iterator<Item = u64> {
    let low = 2.0 * (order as f64).sqrt();
    (1..)
        .map(move |j| j * e + 1)
        .filter(move |&l| l as f64 > low && is_prime(l))
}

pub(crate) fn dixon_table(g: &GlGroup) -> Result<Vec<Vec<CycloElement>>> {
    let consts = structure_constants(g);
    let e = g.exponent();
    let mut last = None;
    for l in candidate_primes(e, g.order() as u64).take(8) {
        if l > crate::coeff::MAX_FIELD_SIZE {
            break;
        }
        match table_mod(g, &consts, l, e) {
            Ok(t) => return Ok(t),
            Err(err) => last = Some(err),
        }
    }
    Err(last
        .unwrap_or_else(|| Error::Verification("no usable prime for the character table".into())))
}

fn split(f: &FieldDesc, space: &Matrix, m: &Matrix) -> Result<Vec<Matrix>> {
    let (basis, pivots) = linalg::rref(f, space.clone());
    let d = basis.len();
    // action of m on the basis, in the coordinates read off at the pivots
    let mut a = vec![vec![0u32; d]; d];
    for (i, b) in basis.iter().enumerate() {
        let w: Vec<u32> = m
            .iter()
            .map(|row| {
                row.iter()
                    .zip(b)
                    .fold(0, |acc, (&x, &y)| f.add_codes(acc, f.mul_codes(x, y)))
            })
            .collect();
        for (j, &pc) in pivots.iter().enumerate() {
            a[j][i] = w[pc];
        }
    }
    let cp = linalg::charpoly(f, &a);
    let roots: Vec<u32> = f
        .elements()
        .filter(|&x| crate::coeff::poly::eval(f, &cp, x) == 0)
        .collect();
    let mut pieces = Vec::new();
    let mut total = 0;
    for lam in roots {
        let mut shifted = a.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] = f.sub_codes(row[i], lam);
        }
        let ns = linalg::nullspace(f, shifted, d);
        total += ns.len();
        let vecs: Matrix = ns
            .iter()
            .map(|alpha| {
                (0..basis[0].len())
                    .map(|col| {
                        alpha
                            .iter()
                            .zip(&basis)
                            .fold(0, |acc, (&c, b)| f.add_codes(acc, f.mul_codes(c, b[col])))
                    })
                    .collect()
            })
            .collect();
        pieces.push(vecs);
    }
    if total != d {
        return Err(Error::Verification(format!(
            "class matrix not diagonalizable modulo {}",
            f.p()
        )));
    }
    Ok(pieces)
}

fn table_mod(
    g: &GlGroup,
    consts: &[Vec<Vec<u64>>],
    l: u64,
    e: u64,
) -> Result<Vec<Vec<CycloElement>>> {
    let f = ff_make(l, 1)?;
    let k = g.num_classes();
    let red = |x: u64| (x % l) as u32;
    let mats: Vec<Matrix> = consts
        .iter()
        .map(|c| {
            c.iter()
                .map(|row| row.iter().map(|&x| red(x)).collect())
                .collect()
        })
        .collect();
    let mut spaces: Vec<Matrix> = vec![linalg::identity(k)];
    for m in &mats {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for s in spaces {
            if s.len() == 1 {
                next.push(s);
            } else {
                next.extend(split(&f, &s, m)?);
            }
        }
        spaces = next;
    }
    if spaces.len() != k {
        return Err(Error::Verification(format!(
            "eigenspaces did not split modulo {l}"
        )));
    }
    let order = g.order() as u64;
    let w = f.pow_code(f.generator(), (l - 1) / e);
    let mut chars = Vec::new();
    for s in spaces {
        let v = &s[0];
        let inv0 = f.inv_code(v[0])?;
        let omega: Vec<u32> = v.iter().map(|&x| f.mul_codes(x, inv0)).collect();
        // chi(1)^2 = |G| / sum_t omega_t omega_{t*} / |C_t|
        let mut denom = 0;
        for t in 0..k {
            let term = f.mul_codes(omega[t], omega[g.inverse_class(t)]);
            denom = f.add_codes(
                denom,
                f.mul_codes(term, f.inv_code(red(g.classes()[t].size as u64))?),
            );
        }
        let sq = f.mul_codes(red(order), f.inv_code(denom)?);
        let deg = (1..=(order as f64).sqrt() as u64 + 1)
            .find(|&d| red(d * d) == sq)
            .ok_or_else(|| Error::Verification(format!("no degree modulo {l}")))?;
        let values: Vec<u32> = (0..k)
            .map(|t| {
                f.mul_codes(
                    f.mul_codes(omega[t], red(deg)),
                    f.inv_code(red(g.classes()[t].size as u64)).unwrap(),
                )
            })
            .collect();
        let mut row = Vec::with_capacity(k);
        for t in 0..k {
            let o = g.classes()[t].order;
            let z = f.pow_code(w, e / o);
            let zinv = f.inv_code(z)?;
            let oinv = f.inv_code(red(o))?;
            let powers: Vec<u32> = (0..o).map(|i| values[g.power_class(t, i)]).collect();
            let mut val = CycloElement::zero(o);
            for j in 0..o {
                let mut acc = 0;
                for (i, &x) in powers.iter().enumerate() {
                    acc = f.add_codes(acc, f.mul_codes(x, f.pow_code(zinv, i as u64 * j)));
                }
                let mj = f.mul_codes(acc, oinv) as u64;
                if mj > deg {
                    return Err(Error::Verification(format!(
                        "eigenvalue multiplicity out of range modulo {l}"
                    )));
                }
                if mj > 0 {
                    val = &val
                        + &CycloElement::zeta(o, j as i64)
                            .scale(&crate::coeff::ratio(mj as i64, 1));
                }
            }
            row.push(val);
        }
        chars.push((deg, row));
    }
    chars.sort_by(|(da, ra), (db, rb)| {
        da.cmp(db).then_with(|| {
            let ka: Vec<_> = ra.iter().flat_map(|x| x.key(e)).collect();
            let kb: Vec<_> = rb.iter().flat_map(|x| x.key(e)).collect();
            ka.cmp(&kb)
        })
    });
    Ok(chars.into_iter().map(|(_, r)| r).collect())
}
