use std::sync::Arc;

use rayon::prelude::*;

use super::{Depth0Model, IndexVector, Series};
use crate::coeff::{ff_make, FieldDesc, WittRing};
use crate::series::{product_over, reduce_mod_p, SeriesRing, TruncatedSeries, EXACT};
use crate::{Error, Result};

/// Largest number of points scanned when looking for a stratum point.
const POINT_BUDGET: u64 = 1 << 22;

/// The `X_n`-pivot chart of the blow-up at the closed point.
#[derive(Clone, Debug)]
pub struct ChartReport {
    pub pivot: String,
    /// `X_n`-adic valuation of `P` after `X_i = V_i X_n`.
    pub valuation: u32,
    /// `P` divided by `X_n^valuation`.
    pub residual: Series,
    /// For each `a`: `P'_a mod X_n`, and whether it equals the expected
    /// affine form `sum_{i<n} teich(a_i) V_i + teich(a_n)` exactly.
    pub linear_parts: Vec<(IndexVector, Series, bool)>,
    /// The factors `P'_a` themselves.
    pub factors: Vec<Series>,
}

impl ChartReport {
    pub fn linear_parts_exact(&self) -> bool {
        self.linear_parts.iter().all(|(_, _, ok)| *ok)
    }
}

/// The equation obtained on the exceptional divisor, written in the
/// homogeneous coordinates `x1..xn`.
#[derive(Clone, Debug)]
pub struct UnEquation {
    pub equation: TruncatedSeries<FieldDesc>,
    pub matches_dl: bool,
}

fn v_names(n: u32) -> Vec<String> {
    (1..n).map(|i| format!("V{i}")).collect()
}

impl Depth0Model {
    /// Ring of the chart: `X_n` (weight 1), `V_1..V_{n-1}` and the symbolic
    /// parameters (weight 0).
    pub fn chart_ring(&self) -> Result<Arc<SeriesRing<WittRing>>> {
        let pivot = format!("X{}", self.n);
        let vs = v_names(self.n);
        let params = self.symbolic_params();
        let names: Vec<&str> = std::iter::once(pivot.as_str())
            .chain(vs.iter().map(String::as_str))
            .chain(params.iter().map(String::as_str))
            .collect();
        let mut weights = vec![0u32; names.len()];
        weights[0] = 1;
        SeriesRing::weighted(self.witt().clone(), &names, &weights)
    }

    fn to_chart(&self, s: &Series, chart: &Arc<SeriesRing<WittRing>>) -> Result<Series> {
        let pivot = format!("X{}", self.n);
        let xn = TruncatedSeries::var(chart, &pivot, EXACT)?;
        let mut assign = Vec::new();
        let names = super::x_names(self.n - 1);
        for (i, name) in names.iter().enumerate() {
            let v = TruncatedSeries::var(chart, &format!("V{}", i + 1), EXACT)?;
            assign.push((name.as_str(), &v * &xn));
        }
        s.substitute_named(chart, &assign)
    }

    /// The affine form `sum_{i<n} teich(a_i) V_i + teich(a_n)`.
    pub fn expected_linear_part(
        &self,
        a: &IndexVector,
        chart: &Arc<SeriesRing<WittRing>>,
    ) -> Result<Series> {
        let witt = self.witt();
        let n = self.n as usize;
        let mut out = TruncatedSeries::constant(chart, witt.teichmuller(a.0[n - 1]), EXACT);
        for i in 0..n - 1 {
            let v = TruncatedSeries::var(chart, &format!("V{}", i + 1), EXACT)?;
            out = &out + &v.scale(&witt.teichmuller(a.0[i]));
        }
        Ok(out)
    }

    /// Substitutes `X_i = V_i X_n` into `P`, checks that `X_n` divides it
    /// exactly `q^n - 1` times and that every `P'_a` is affine-linear modulo
    /// `X_n`.
    pub fn blowup_chart(&self) -> Result<ChartReport> {
        let qn1 = (self.q.pow(self.n) - 1) as u32;
        if self.precision().d < qn1 + 2 {
            return Err(Error::InvalidParameter(format!(
                "the chart needs degree bound at least q^n + 1 = {}",
                qn1 + 2
            )));
        }
        let chart = self.chart_ring()?;
        let pivot = format!("X{}", self.n);
        let family = self.p_family()?;
        let subs: Vec<(IndexVector, Series)> = family
            .into_par_iter()
            .map(|(a, s)| Ok((a, self.to_chart(&s, &chart)?)))
            .collect::<Result<_>>()?;
        let whole = product_over(&subs.iter().map(|(_, s)| s.clone()).collect::<Vec<_>>())?;
        let valuation = whole.var_valuation(&pivot)?;
        if valuation >= whole.prec() {
            return Err(Error::PrecisionExhausted(format!(
                "chart of P known only below {}",
                whole.prec()
            )));
        }
        if valuation != qn1 {
            return Err(Error::ValuationMismatch {
                expected: qn1,
                found: valuation,
                context: "blow-up chart".into(),
            });
        }
        let residual = whole.factor_out(&pivot, valuation)?;
        let mut linear_parts = Vec::new();
        let mut factors = Vec::new();
        for (a, s) in subs {
            let v = s.var_valuation(&pivot)?;
            if v != 1 {
                return Err(Error::ValuationMismatch {
                    expected: 1,
                    found: v,
                    context: format!("P_{:?}", a.0),
                });
            }
            let f = s.factor_out(&pivot, 1)?;
            let lin = f.homogeneous_part(0);
            let ok = lin == self.expected_linear_part(&a, &chart)?;
            linear_parts.push((a, lin, ok));
            factors.push(f);
        }
        Ok(ChartReport {
            pivot,
            valuation,
            residual,
            linear_parts,
            factors,
        })
    }

    /// Multiplicities along a chain of point strata: `sequence = (n, n_1, ...)`
    /// strictly decreasing. After the first chart, each step moves to a point
    /// of the exceptional divisor where exactly `q^{n_t} - 1` factors vanish
    /// (over a large enough extension of `k`), blows it up with pivot `X_n`
    /// and records the multiplicity of the product of those factors.
    pub fn iterated_chart(&self, sequence: &[u32]) -> Result<Vec<u32>> {
        if sequence.first() != Some(&self.n) {
            return Err(Error::InvalidParameter(format!(
                "sequence must start with n = {}",
                self.n
            )));
        }
        if sequence.windows(2).any(|w| w[1] >= w[0]) || sequence.last() == Some(&0) {
            return Err(Error::InvalidParameter(format!(
                "{sequence:?} is not strictly decreasing to >= 1"
            )));
        }
        let chart = self.blowup_chart()?;
        let mut vals = vec![chart.valuation];
        if sequence.len() == 1 {
            return Ok(vals);
        }
        iterated_chart_of(self, &chart, &sequence[1..], &mut vals)?;
        Ok(vals)
    }

    /// `residual mod (p, X_n)`, homogenized by `V_i = x_i / x_n`, minus 1.
    pub fn un_special_fiber(&self) -> Result<UnEquation> {
        let chart = self.blowup_chart()?;
        self.un_special_fiber_from(&chart)
    }

    pub(crate) fn un_special_fiber_from(&self, chart: &ChartReport) -> Result<UnEquation> {
        let n = self.n as usize;
        let qn1 = (self.q.pow(self.n) - 1) as u32;
        let red = reduce_mod_p(&chart.residual)?.homogeneous_part(0);
        let field = self.field().clone();
        let xs: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        let xs_ref: Vec<&str> = xs.iter().map(String::as_str).collect();
        let out_ring = SeriesRing::new(field.clone(), &xs_ref)?;
        let nv = red.ring().nvars();
        let mut terms = Vec::new();
        for (m, c) in red.terms() {
            let e = m.exps(nv);
            if e[n..].iter().any(|&t| t > 0) {
                return Err(Error::Verification(
                    "special fiber equation involves deformation parameters".into(),
                ));
            }
            let mut out = e[1..n].to_vec();
            let deg: u32 = out.iter().sum();
            if deg > qn1 {
                return Err(Error::Verification(format!(
                    "chart residual has degree {deg} > q^n - 1"
                )));
            }
            out.push(qn1 - deg);
            terms.push((crate::series::Mono::from_exps(&out)?, *c));
        }
        let h = TruncatedSeries::from_terms(&out_ring, EXACT, terms);
        let equation = &h - &TruncatedSeries::one(&out_ring, EXACT);
        let dl = crate::dl::dl_equation(self.q, self.n)?.equation()?;
        let emb = field.embedding_of(dl.coeff_ring())?;
        let dl_eq = dl.map_coeffs(&out_ring, |c| Ok(emb[*c as usize]))?;
        Ok(UnEquation {
            matches_dl: dl_eq == equation,
            equation,
        })
    }
}

/// Continues an iterated chart from the factors of `chart`; appends the
/// multiplicities for `rest` to `vals`.
pub(crate) fn iterated_chart_of(
    model: &Depth0Model,
    chart: &ChartReport,
    rest: &[u32],
    vals: &mut Vec<u32>,
) -> Result<()> {
    let n = model.n() as usize;
    let q = model.q();
    let k = n - 1;
    let mut names: Vec<String> = vec!["Z".into()];
    names.extend((1..=k).map(|i| format!("W{i}")));
    let names_ref: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut weights = vec![0u32; n];
    weights[0] = 1;
    let ring_over = |f: &FieldDesc| SeriesRing::weighted(f.clone(), &names_ref, &weights);

    // reduce mod p, set the parameters to 0 and rename to Z, W_i
    let mut field = model.field().clone();
    let mut ring = ring_over(&field)?;
    let mut factors: Vec<TruncatedSeries<FieldDesc>> = Vec::new();
    for f in &chart.factors {
        let r = reduce_mod_p(f)?;
        let nv = r.ring().nvars();
        let mut images = vec![TruncatedSeries::var(&ring, "Z", EXACT)?];
        for i in 1..=k {
            images.push(TruncatedSeries::var(&ring, &format!("W{i}"), EXACT)?);
        }
        while images.len() < nv {
            images.push(TruncatedSeries::zero(&ring, EXACT));
        }
        factors.push(r.substitute(&ring, &images)?);
    }

    for &m in rest {
        let target = (q.pow(m) - 1) as usize;
        let (big, point, vanishing) = find_point(&field, &factors, k, target)?;
        let emb = big.embedding_of(&field)?;
        let big_ring = ring_over(&big)?;
        let z = TruncatedSeries::var(&big_ring, "Z", EXACT)?;
        let mut images = vec![z.clone()];
        for (i, &v) in point.iter().enumerate() {
            let w = TruncatedSeries::var(&big_ring, &format!("W{}", i + 1), EXACT)?;
            images.push(&TruncatedSeries::constant(&big_ring, v, EXACT) + &(&w * &z));
        }
        let blown: Vec<TruncatedSeries<FieldDesc>> = vanishing
            .par_iter()
            .map(|&i| {
                let f = factors[i].map_coeffs(&big_ring, |c| Ok(emb[*c as usize]))?;
                f.substitute(&big_ring, &images)
            })
            .collect::<Result<_>>()?;
        let prod = product_over(&blown)?;
        let val = prod.var_valuation("Z")?;
        if val >= prod.prec() {
            return Err(Error::PrecisionExhausted(format!(
                "iterated chart known only below Z^{}",
                prod.prec()
            )));
        }
        if val as usize != target {
            return Err(Error::ValuationMismatch {
                expected: target as u32,
                found: val,
                context: format!("iterated chart at depth {}", vals.len() + 1),
            });
        }
        vals.push(val);
        factors = blown
            .iter()
            .map(|f| {
                let v = f.var_valuation("Z")?;
                f.factor_out("Z", v)
            })
            .collect::<Result<_>>()?;
        field = big;
        ring = big_ring;
    }
    let _ = ring;
    Ok(())
}

/// Finds the first point `w` (over the smallest extension of `field` that
/// has one) at which exactly `target` of the factors vanish on `Z = 0`.
fn find_point(
    field: &FieldDesc,
    factors: &[TruncatedSeries<FieldDesc>],
    k: usize,
    target: usize,
) -> Result<(FieldDesc, Vec<u32>, Vec<usize>)> {
    let p = field.p() as u64;
    let base_deg = field.degree();
    for j in 1.. {
        let deg = base_deg * j;
        let Ok(big) = ff_make(p, deg) else { break };
        let size = big.size() as u64;
        let Some(total) = size.checked_pow(k as u32).filter(|&t| t <= POINT_BUDGET) else {
            break;
        };
        let emb = big.embedding_of(field)?;
        let consts: Vec<Vec<(Vec<u32>, u32)>> = factors
            .iter()
            .map(|f| {
                f.homogeneous_part(0)
                    .terms()
                    .iter()
                    .map(|(m, c)| (m.exps(k + 1)[1..].to_vec(), emb[*c as usize]))
                    .collect()
            })
            .collect();
        let eval = |poly: &[(Vec<u32>, u32)], pt: &[u32]| -> u32 {
            poly.iter().fold(0, |acc, (e, c)| {
                let t = e.iter().zip(pt).fold(*c, |t, (&ei, &v)| {
                    big.mul_codes(t, big.pow_code(v, ei as u64))
                });
                big.add_codes(acc, t)
            })
        };
        let decode = |mut t: u64| -> Vec<u32> {
            (0..k)
                .map(|_| {
                    let c = (t % size) as u32;
                    t /= size;
                    c
                })
                .collect()
        };
        let found = (0..total).into_par_iter().find_first(|&t| {
            let pt = decode(t);
            consts.iter().filter(|poly| eval(poly, &pt) == 0).count() == target
        });
        if let Some(t) = found {
            let pt = decode(t);
            let vanishing = consts
                .iter()
                .enumerate()
                .filter(|(_, poly)| eval(poly, &pt) == 0)
                .map(|(i, _)| i)
                .collect();
            return Ok((big, pt, vanishing));
        }
    }
    Err(Error::Verification(format!(
        "no point with exactly {target} vanishing factors within budget"
    )))
}

/// Human-readable affine form, e.g. `V1 + 1`.
pub(crate) fn format_linear(model: &Depth0Model, s: &Series) -> String {
    let witt = model.witt();
    let names = s.ring().vars();
    let mut parts = Vec::new();
    let nv = names.len();
    for (m, c) in s.terms().iter().rev() {
        let coeff = match witt.to_signed(c) {
            Some(v) => v.to_string(),
            None => {
                let r = witt.reduce(c);
                if witt.teichmuller(r) == *c {
                    format!("teich({r})")
                } else {
                    format!("{:?}", witt.digits(c))
                }
            }
        };
        let vars: Vec<String> = m
            .exps(nv)
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    names[i].clone()
                } else {
                    format!("{}^{e}", names[i])
                }
            })
            .collect();
        parts.push(match (coeff.as_str(), vars.is_empty()) {
            (_, true) => coeff,
            ("1", false) => vars.join("*"),
            _ => format!("{coeff}*{}", vars.join("*")),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}
