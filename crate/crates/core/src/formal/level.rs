use crate::coeff::WittRing;
use crate::coeff::{FiniteAlgebra, Ring, WittElement};
use crate::series::TruncatedSeries;
use crate::{Error, Result};

use super::FormalModule;

/// A candidate Drinfeld level-`p^m` structure: a finite free algebra `R`
/// over `W/p^N` and the images in `R` of the standard basis of
/// `(p^{-m} O / O)^n`.
#[derive(Clone, Debug)]
pub struct LevelStructureCandidate {
    pub algebra: FiniteAlgebra,
    pub level: u32,
    pub images: Vec<Vec<WittElement>>,
}

/// Evaluates a one-variable series at `x`; requires `x^D = 0` in `R` so that
/// the unknown tail vanishes.
fn evaluate(
    alg: &FiniteAlgebra,
    s: &TruncatedSeries<WittRing>,
    x: &Vec<WittElement>,
    base: &WittRing,
) -> Result<Vec<WittElement>> {
    if !alg.is_zero(&alg.pow(x, s.prec() as u64)) {
        return Err(Error::PrecisionExhausted(format!(
            "point is not killed by X^{}; the truncated series cannot be evaluated",
            s.prec()
        )));
    }
    let mut acc = alg.zero();
    for (m, c) in s.terms() {
        let c = alg.scalar(&embed(base, alg.base_ring(), c));
        acc = alg.add(&acc, &alg.mul(&c, &alg.pow(x, m.exp(0) as u64)));
    }
    Ok(acc)
}

fn embed(from: &WittRing, to: &WittRing, c: &WittElement) -> WittElement {
    from.change_precision(to, c)
}

/// Power-series long division by a monic polynomial over `R`; returns the remainder.
fn remainder(
    alg: &FiniteAlgebra,
    h: &[Vec<WittElement>],
    g: &[Vec<WittElement>],
) -> Vec<Vec<WittElement>> {
    let dg = g.len() - 1;
    let mut r = h.to_vec();
    for k in (dg..r.len()).rev() {
        let c = r[k].clone();
        if alg.is_zero(&c) {
            continue;
        }
        for i in 0..=dg {
            r[k - dg + i] = alg.sub(&r[k - dg + i], &alg.mul(&c, &g[i]));
        }
    }
    r.truncate(dg);
    r
}

fn poly_mul(
    alg: &FiniteAlgebra,
    a: &[Vec<WittElement>],
    b: &[Vec<WittElement>],
) -> Vec<Vec<WittElement>> {
    let mut out = vec![alg.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = alg.add(&out[i + j], &alg.mul(x, y));
        }
    }
    out
}

/// True iff `prod_x (X - phi(x))` over `x in (p^{-m}O/O)^n` divides
/// `[p^m](X)` in `R[[X]]` below degree `D`.
///
/// The images must satisfy `[p^m](phi(e_i)) = 0`; otherwise `phi` is not an
/// `O`-module map and the answer is `false`. Fails if `X^D` is not itself
/// divisible by the product, since then the truncation of `[p^m]` could
/// change the remainder.
pub fn check_drinfeld_divisibility(
    m: &FormalModule,
    cand: &LevelStructureCandidate,
) -> Result<bool> {
    let alg = &cand.algebra;
    let base = alg.base_ring();
    if base.field() != m.witt().field() || base.precision() > m.witt().precision() {
        return Err(Error::RingMismatch(format!(
            "{alg:?} is not an algebra over {:?}",
            m.witt()
        )));
    }
    if !m.params().is_empty() {
        return Err(Error::InvalidParameter(
            "specialize the deformation parameters first".into(),
        ));
    }
    if cand.images.len() != m.height() as usize || cand.level == 0 {
        return Err(Error::InvalidParameter(format!(
            "need {} images and level >= 1",
            m.height()
        )));
    }
    let ps = m.p_series()?;
    let x = TruncatedSeries::var(m.ring1(), "X", crate::series::EXACT)?;
    let mut pm = x.truncate(m.precision().d);
    for _ in 0..cand.level {
        pm = ps.substitute_named(m.ring1(), &[("X", pm)])?;
    }
    for img in &cand.images {
        if !alg.is_nilpotent(img) {
            return Ok(false);
        }
        if !alg.is_zero(&evaluate(alg, &pm, img, m.witt())?) {
            return Ok(false);
        }
    }
    // all points sum_i [a_i](phi(e_i)), a_i in O/p^m written in Teichmüller digits
    let q = m.q() as u32;
    let digits_per = cand.level as usize;
    let mut teich_mult: Vec<Vec<WittElement>> = Vec::new();
    for c in 0..q {
        teich_mult.push(alg.scalar(&embed(m.witt(), base, &m.teich(c))));
    }
    let f = m.law();
    let total = (q as u64).pow(cand.level * m.height());
    let mut roots: Vec<Vec<WittElement>> = Vec::with_capacity(total as usize);
    for idx in 0..total {
        let mut t = idx;
        let mut point = alg.zero();
        for img in &cand.images {
            // [a](y) with a = sum_j omega(d_j) p^j, evaluated as sum_j [p]^j(omega(d_j) y)
            let mut term = alg.zero();
            let mut first = true;
            for j in 0..digits_per {
                let d = (t % q as u64) as usize;
                t /= q as u64;
                let mut y = alg.mul(&teich_mult[d], img);
                for _ in 0..j {
                    y = evaluate(alg, ps, &y, m.witt())?;
                }
                term = if first {
                    y
                } else {
                    formal_add(alg, f, &term, &y, m.witt())?
                };
                first = false;
            }
            point = formal_add(alg, f, &point, &term, m.witt())?;
        }
        roots.push(point);
    }
    // prod (X - root)
    let mut g = vec![alg.one()];
    for r in &roots {
        g = poly_mul(alg, &g, &[alg.neg(r), alg.one()]);
    }
    let dg = g.len() - 1;
    let d = m.precision().d as usize;
    if dg >= d {
        return Err(Error::PrecisionExhausted(format!(
            "level polynomial has degree {dg} >= D = {d}"
        )));
    }
    // X^D mod g must vanish for the truncated division to be meaningful
    let mut xd = vec![alg.zero(); d + 1];
    xd[d] = alg.one();
    if !remainder(alg, &xd, &g).iter().all(|c| alg.is_zero(c)) {
        return Err(Error::PrecisionExhausted(format!(
            "X^{d} is not divisible by the level polynomial; raise D"
        )));
    }
    let mut h = vec![alg.zero(); d];
    for (mono, c) in pm.terms() {
        h[mono.exp(0) as usize] = alg.scalar(&embed(m.witt(), base, c));
    }
    Ok(remainder(alg, &h, &g).iter().all(|c| alg.is_zero(c)))
}

/// `F(a, b)` evaluated in `R`.
fn formal_add(
    alg: &FiniteAlgebra,
    f: &TruncatedSeries<WittRing>,
    a: &Vec<WittElement>,
    b: &Vec<WittElement>,
    base: &WittRing,
) -> Result<Vec<WittElement>> {
    let d = f.prec() as u64;
    for i in 0..=d {
        if !alg.is_zero(&alg.mul(&alg.pow(a, i), &alg.pow(b, d - i))) {
            return Err(Error::PrecisionExhausted(
                "points not killed by degree-D monomials".into(),
            ));
        }
    }
    let mut acc = alg.zero();
    for (m, c) in f.terms() {
        let c = alg.scalar(&embed(base, alg.base_ring(), c));
        let t = alg.mul(&alg.pow(a, m.exp(0) as u64), &alg.pow(b, m.exp(1) as u64));
        acc = alg.add(&acc, &alg.mul(&c, &t));
    }
    Ok(acc)
}
