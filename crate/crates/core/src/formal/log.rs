use std::sync::Arc;

use super::Analytic;
use crate::coeff::{BoundedPadic, FieldDesc, PadicRing, Ring};
use crate::series::{Mono, SeriesRing, TruncatedSeries, EXACT};
use crate::{Error, Result};

/// The logarithm of the Lubin-Tate module of `f`: the unique
/// `lambda = X + ...` with `lambda(f(X)) = p lambda(X)`, below degree `d`.
///
/// Comparing coefficients of `X^k` gives
/// `c_k (p - p^k) = sum_{e < k} c_e [X^k] f^e`.
pub fn lubin_tate_log(
    f: &TruncatedSeries<PadicRing>,
    d: u32,
) -> Result<TruncatedSeries<PadicRing>> {
    let ring = f.ring();
    let padic = ring.coeff_ring();
    if ring.nvars() != 1 {
        return Err(Error::InvalidParameter(
            "f must be a series in one variable".into(),
        ));
    }
    let p = padic.p() as i64;
    let x = |k: u32| Mono::var(0).pow(k).unwrap();
    if !f.coeff_of(Mono::ONE).is_exact_zero() || f.coeff_of(x(1)) != padic.from_int(p) {
        return Err(Error::InvalidParameter(
            "f must be p X + higher terms".into(),
        ));
    }
    let f = f.truncate(d);
    // powers[e] = f^e, truncated below d
    let mut powers: Vec<TruncatedSeries<PadicRing>> =
        vec![TruncatedSeries::one(ring, d), f.clone()];
    for e in 2..d {
        let next = &powers[e as usize - 1] * &f;
        powers.push(next.truncate(d));
    }
    let mut c: Vec<BoundedPadic> = vec![padic.zero(), padic.one()];
    for k in 2..d {
        let mut acc = padic.zero();
        for e in 1..k {
            let t = powers[e as usize].coeff_of(x(k));
            if !padic.is_zero(&t) {
                acc = padic.add(&acc, &padic.mul(&c[e as usize], &t));
            }
        }
        let pk = padic.sub(&padic.from_int(p), &padic.p_power(k as i32));
        c.push(padic.div(&acc, &pk)?);
    }
    if f.prec() < d {
        return Err(Error::PrecisionExhausted(format!(
            "f known only below degree {}",
            f.prec()
        )));
    }
    Ok(TruncatedSeries::from_terms(
        ring,
        d,
        c.into_iter()
            .enumerate()
            .map(|(k, ck)| (x(k as u32), ck))
            .collect(),
    ))
}

/// `lambda(X) = X + sum_{i=1}^{n} (v_i / p) lambda^{sigma^i}(X^{q^i})` in
/// `ring = K[X, T_1, ..., T_{n-1}]`, solved degree by degree below `d`.
pub(crate) fn hazewinkel_log_in(
    ring: &Arc<SeriesRing<PadicRing>>,
    q: u64,
    n: u32,
    d: u32,
) -> Result<TruncatedSeries<PadicRing>> {
    let padic = ring.coeff_ring();
    let nv = ring.nvars();
    if nv != n as usize {
        return Err(Error::InvalidParameter(format!(
            "expected X and {} parameters",
            n - 1
        )));
    }
    let inv_p = padic.p_power(-1);
    // coefficients c_k in K[T], stored with X-exponent 0
    let mut c: Vec<Option<TruncatedSeries<PadicRing>>> = vec![None; d as usize];
    if d > 1 {
        c[1] = Some(TruncatedSeries::one(ring, EXACT));
    }
    for k in 2..d as u64 {
        let mut acc: Option<TruncatedSeries<PadicRing>> = None;
        let mut qi = 1u64;
        for i in 1..=n {
            qi *= q;
            if qi > k || k % qi != 0 {
                continue;
            }
            let Some(prev) = &c[(k / qi) as usize] else {
                continue;
            };
            // sigma^i raises every T to the q^i-th power
            let twisted = TruncatedSeries::from_terms(
                ring,
                EXACT,
                prev.terms()
                    .iter()
                    .map(|(m, v)| {
                        let exps: Vec<u32> = (0..nv)
                            .map(|j| if j == 0 { 0 } else { m.exp(j) * qi as u32 })
                            .collect();
                        Ok((Mono::from_exps(&exps)?, v.clone()))
                    })
                    .collect::<Result<Vec<_>>>()?,
            );
            let vi = if i < n {
                TruncatedSeries::var(ring, &ring.vars()[i as usize], EXACT)?
            } else {
                TruncatedSeries::one(ring, EXACT)
            };
            let term = (&vi * &twisted).scale(&inv_p);
            acc = Some(match acc {
                None => term,
                Some(a) => &a + &term,
            });
        }
        c[k as usize] = acc;
    }
    let mut terms = Vec::new();
    for (k, ck) in c.into_iter().enumerate() {
        if let Some(ck) = ck {
            let xk = Mono::var(0).pow(k as u32)?;
            terms.extend(ck.terms().iter().map(|(m, v)| (m.mul(xk), v.clone())));
        }
    }
    Ok(TruncatedSeries::from_terms(ring, d, terms))
}

/// The normal-form logarithm over a fresh ring `K[X, T_1..T_{n-1}]`.
pub fn hazewinkel_log(
    field: &FieldDesc,
    relative: u32,
    n: u32,
    d: u32,
) -> Result<TruncatedSeries<PadicRing>> {
    let padic = PadicRing::new(field.clone(), relative)?;
    let params = super::param_names(n);
    let names: Vec<&str> = std::iter::once("X")
        .chain(params.iter().map(String::as_str))
        .collect();
    let weights: Vec<u32> = (0..names.len()).map(|i| (i == 0) as u32).collect();
    let ring = SeriesRing::weighted(padic, &names, &weights)?;
    hazewinkel_log_in(&ring, field.size() as u64, n, d)
}

fn min_valuation(s: &TruncatedSeries<PadicRing>) -> i32 {
    s.terms()
        .iter()
        .filter(|(_, c)| !c.is_known_zero())
        .map(|(_, c)| c.valuation())
        .min()
        .unwrap_or(0)
}

fn check_denominators(s: &TruncatedSeries<PadicRing>, bound: i32) -> Result<()> {
    let v = min_valuation(s);
    if v < -bound {
        return Err(Error::DenominatorBound { found: -v, bound });
    }
    Ok(())
}

/// Compositional inverse of `lambda = X + ...` in the first variable, degree by degree.
pub(crate) fn invert(
    lambda: &TruncatedSeries<PadicRing>,
    d: u32,
) -> Result<TruncatedSeries<PadicRing>> {
    let ring = lambda.ring();
    let x = TruncatedSeries::var(ring, &ring.vars()[0], EXACT)?;
    let mut e = x.truncate(d);
    for k in 2..d {
        let l = lambda.truncate(k + 1);
        let comp = l.substitute_named(ring, &[(ring.vars()[0].as_str(), e.truncate(k + 1))])?;
        // lambda(e) = X + (degree-k error) + ...
        let err = comp.homogeneous_part(k);
        e = &e - &err;
    }
    Ok(e.truncate(d))
}

pub(crate) fn analytic_from_log(
    padic: &PadicRing,
    ring: &Arc<SeriesRing<PadicRing>>,
    log: TruncatedSeries<PadicRing>,
    d: u32,
    vlog: i32,
    vexp: i32,
) -> Result<Analytic> {
    check_denominators(&log, vlog)?;
    let exp = invert(&log, d)?;
    check_denominators(&exp, vexp)?;
    Ok(Analytic {
        padic: padic.clone(),
        ring: ring.clone(),
        log,
        exp,
    })
}

pub(crate) fn analytic_from_f(
    padic: &PadicRing,
    ring: &Arc<SeriesRing<PadicRing>>,
    f: &TruncatedSeries<PadicRing>,
    d: u32,
    vmax: i32,
) -> Result<Analytic> {
    let log = lubin_tate_log(f, d)?;
    analytic_from_log(padic, ring, log, d, vmax, vmax)
}
