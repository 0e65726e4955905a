use std::sync::Arc;

use super::{FormalModule, ModuleKind, Scalar};
use crate::coeff::{PadicRing, Ring, WittRing};
use crate::series::{reduce_mod_p, SeriesRing, TruncatedSeries, EXACT};
use crate::Check;
use crate::Result;

/// Equality on the range where both sides are known.
fn agree(a: &TruncatedSeries<WittRing>, b: &TruncatedSeries<WittRing>) -> bool {
    let bound = a.prec().min(b.prec());
    a.truncate(bound) == b.truncate(bound)
}

fn ring3(m: &FormalModule) -> Result<Arc<SeriesRing<WittRing>>> {
    let names: Vec<&str> = ["X", "Y", "Z"]
        .into_iter()
        .chain(m.params().iter().map(String::as_str))
        .collect();
    let weights: Vec<u32> = (0..names.len()).map(|i| (i < 3) as u32).collect();
    SeriesRing::weighted(m.witt().clone(), &names, &weights)
}

/// Checks the formal-module axioms modulo `(p^N, deg D)`.
///
/// Every check runs; failures are report entries, never errors.
pub fn verify_module_axioms(m: &FormalModule) -> Vec<Check> {
    let mut out = Vec::new();
    let f = m.law();
    let r2 = m.ring2().clone();

    out.push(Check::from_result(
        "commutativity",
        (|| {
            let x = TruncatedSeries::var(&r2, "X", EXACT)?;
            let y = TruncatedSeries::var(&r2, "Y", EXACT)?;
            let swapped = f.substitute_named(&r2, &[("X", y), ("Y", x)])?;
            Ok((swapped == *f, String::new()))
        })(),
    ));

    out.push(Check::from_result(
        "identity F(X,0) = X",
        (|| {
            let x = TruncatedSeries::var(&r2, "X", EXACT)?;
            let zero = TruncatedSeries::zero(&r2, EXACT);
            let s = f.substitute_named(&r2, &[("Y", zero)])?;
            Ok((agree(&s, &x), String::new()))
        })(),
    ));

    out.push(Check::from_result(
        "associativity",
        (|| {
            let r3 = ring3(m)?;
            let v = |name: &str| TruncatedSeries::var(&r3, name, EXACT);
            let xy = f.substitute_named(&r3, &[("X", v("X")?), ("Y", v("Y")?)])?;
            let yz = f.substitute_named(&r3, &[("X", v("Y")?), ("Y", v("Z")?)])?;
            let left = f.substitute_named(&r3, &[("X", xy), ("Y", v("Z")?)])?;
            let right = f.substitute_named(&r3, &[("X", v("X")?), ("Y", yz)])?;
            Ok((
                agree(&left, &right),
                format!("compared below degree {}", left.prec().min(right.prec())),
            ))
        })(),
    ));

    out.push(Check::from_result(
        "[1] = identity",
        (|| {
            let one = m.scalar(Scalar::Int(1))?;
            Ok((
                *one == TruncatedSeries::var(m.ring1(), "X", EXACT)?.truncate(m.precision().d),
                String::new(),
            ))
        })(),
    ));

    out.push(Check::from_result(
        "linear terms [a] = aX mod deg 2",
        (|| {
            let padic = m.padic();
            let mut bad = Vec::new();
            for a in m.scalar_keys() {
                let s = m.scalar(a)?;
                let lin = s.truncate(2);
                let val = padic.to_witt(m.witt(), &m.scalar_value(a)?)?;
                let expected = TruncatedSeries::var(m.ring1(), "X", EXACT)?
                    .scale(&val)
                    .truncate(2);
                if lin != expected {
                    bad.push(a.to_string());
                }
            }
            Ok((bad.is_empty(), bad.join(", ")))
        })(),
    ));

    out.push(Check::from_result(
        "integrality",
        Ok((
            m.min_valuation() >= 0,
            format!("smallest coefficient valuation {}", m.min_valuation()),
        )),
    ));

    out.push(Check::from_result(
        "[a][b] = [ab]",
        (|| {
            let padic = m.padic();
            let keys = m.scalar_keys();
            let mut bad = Vec::new();
            let mut count = 0;
            for &a in &keys {
                for &b in &keys {
                    let comp = m.apply_scalar(a, m.ring1(), m.scalar(b)?)?;
                    let ab =
                        m.scalar_series(&padic.mul(&m.scalar_value(a)?, &m.scalar_value(b)?))?;
                    count += 1;
                    if !agree(&comp, &ab) {
                        bad.push(format!("({a},{b})"));
                    }
                }
            }
            Ok((
                bad.is_empty(),
                if bad.is_empty() {
                    format!("{count} pairs")
                } else {
                    bad.join(" ")
                },
            ))
        })(),
    ));

    out.push(Check::from_result(
        "[a+b] = F([a],[b])",
        (|| {
            let padic: &PadicRing = m.padic();
            let keys = m.scalar_keys();
            let mut bad = Vec::new();
            let mut count = 0;
            for &a in &keys {
                for &b in &keys {
                    let (sa, sb) = (m.scalar(a)?, m.scalar(b)?);
                    if sa.is_zero() || sb.is_zero() {
                        continue;
                    }
                    let sum = m.formal_sum(m.ring1(), &[sa.clone(), sb.clone()])?;
                    let direct =
                        m.scalar_series(&padic.add(&m.scalar_value(a)?, &m.scalar_value(b)?))?;
                    count += 1;
                    if !agree(&sum, &direct) {
                        bad.push(format!("({a},{b})"));
                    }
                }
            }
            Ok((
                bad.is_empty(),
                if bad.is_empty() {
                    format!("{count} pairs")
                } else {
                    bad.join(" ")
                },
            ))
        })(),
    ));

    out.push(Check::from_result("height", height_check(m)));
    if m.kind() == ModuleKind::Universal && m.height() >= 2 {
        out.push(Check::from_result(
            "normal form: [p] has T1 X^q mod (p, T2..)",
            normal_form_check(m),
        ));
    }
    out
}

/// `[p](X) mod (p, T) = X^{q^n}` exactly below degree `D`.
fn height_check(m: &FormalModule) -> Result<(bool, String)> {
    let ps = m.p_series()?;
    let target = SeriesRing::new(m.witt().clone(), &["X"])?;
    let zeros: Vec<(&str, TruncatedSeries<WittRing>)> = m
        .params()
        .iter()
        .map(|t| (t.as_str(), TruncatedSeries::zero(&target, EXACT)))
        .collect();
    let specialized = ps.substitute_named(&target, &zeros)?;
    let red = reduce_mod_p(&specialized)?;
    let qn = m.q().pow(m.height()) as u32;
    if qn >= m.precision().d {
        return Ok((
            false,
            format!("degree bound {} does not reach X^{qn}", m.precision().d),
        ));
    }
    let terms = red.terms();
    let ok = terms.len() == 1 && terms[0].0.exp(0) == qn && terms[0].1 == 1;
    Ok((
        ok,
        format!(
            "reduction of [p] has {} terms, lowest degree {}",
            terms.len(),
            red.valuation()
        ),
    ))
}

fn normal_form_check(m: &FormalModule) -> Result<(bool, String)> {
    let ps = m.p_series()?;
    let names: Vec<&str> = ["X", "T1"].into();
    let target = SeriesRing::weighted(m.witt().clone(), &names, &[1, 0])?;
    let assign: Vec<(&str, TruncatedSeries<WittRing>)> = m
        .params()
        .iter()
        .skip(1)
        .map(|t| (t.as_str(), TruncatedSeries::zero(&target, EXACT)))
        .collect();
    let specialized = reduce_mod_p(&ps.substitute_named(&target, &assign)?)?;
    let q = m.q() as u32;
    let low: Vec<_> = specialized
        .terms()
        .iter()
        .filter(|(mono, _)| mono.exp(0) <= q)
        .collect();
    let ok = low.len() == 1 && low[0].0.exp(0) == q && low[0].0.exp(1) == 1 && low[0].1 == 1;
    Ok((ok, format!("{} terms of X-degree <= q", low.len())))
}
