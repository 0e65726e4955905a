//! Sparse multivariate power series truncated by weighted total degree.
//!
//! A [`SeriesRing`] fixes ordered variable names, a weight per variable and a
//! coefficient ring. Series variables have weight 1; auxiliary polynomial
//! variables (chart coordinates, deformation parameters) have weight 0, so
//! they never count towards truncation. Each [`TruncatedSeries`] carries its
//! own bound `prec`: every monomial of weighted degree `< prec` is known
//! exactly, nothing is known above it. `prec == EXACT` marks polynomials.

mod json;
mod mono;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

pub use mono::{Mono, MAX_EXP, MAX_VARS};

use crate::coeff::{FieldDesc, PadicRing, Ring, WittRing};
use crate::{Error, Result};

pub const EXACT: u32 = u32::MAX;

#[derive(Clone, PartialEq)]
pub struct SeriesRing<R: Ring> {
    vars: Vec<String>,
    weights: Vec<u32>,
    coeff: R,
}

impl<R: Ring> fmt::Debug for SeriesRing<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[[", self.coeff)?;
        for (i, (v, w)) in self.vars.iter().zip(&self.weights).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if *w == 1 {
                write!(f, "{v}")?
            } else {
                write!(f, "{v}:{w}")?
            }
        }
        write!(f, "]]")
    }
}

impl<R: Ring> SeriesRing<R> {
    /// All variables get weight 1.
    pub fn new(coeff: R, vars: &[&str]) -> Result<Arc<Self>> {
        Self::weighted(coeff, vars, &vec![1; vars.len()])
    }

    pub fn weighted(coeff: R, vars: &[&str], weights: &[u32]) -> Result<Arc<Self>> {
        if vars.len() > MAX_VARS || vars.len() != weights.len() {
            return Err(Error::InvalidParameter(format!(
                "need at most {MAX_VARS} variables with one weight each"
            )));
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::InvalidParameter(format!("duplicate variable {v}")));
            }
        }
        Ok(Arc::new(SeriesRing {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            weights: weights.to_vec(),
            coeff,
        }))
    }

    pub fn coeff_ring(&self) -> &R {
        &self.coeff
    }
    pub fn vars(&self) -> &[String] {
        &self.vars
    }
    pub fn weights(&self) -> &[u32] {
        &self.weights
    }
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown variable {name}")))
    }

    pub fn degree(&self, m: Mono) -> u32 {
        m.weighted_degree(&self.weights)
    }
}

/// A truncated series; see the module documentation.
#[derive(Clone)]
pub struct TruncatedSeries<R: Ring> {
    ring: Arc<SeriesRing<R>>,
    prec: u32,
    terms: Vec<(Mono, R::Elem)>,
}

impl<R: Ring> PartialEq for TruncatedSeries<R> {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring)
            && self.prec == other.prec
            && self.terms == other.terms
    }
}

impl<R: Ring> fmt::Debug for TruncatedSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c:?}")?;
            for (v, &e) in self.ring.vars.iter().zip(&m.exps(self.ring.nvars())) {
                match e {
                    0 => {}
                    1 => write!(f, "*{v}")?,
                    _ => write!(f, "*{v}^{e}")?,
                }
            }
        }
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        if self.prec != EXACT {
            write!(f, " + O({})", self.prec)?;
        }
        Ok(())
    }
}

impl<R: Ring> TruncatedSeries<R> {
    pub fn zero(ring: &Arc<SeriesRing<R>>, prec: u32) -> Self {
        TruncatedSeries {
            ring: ring.clone(),
            prec,
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<SeriesRing<R>>, c: R::Elem, prec: u32) -> Self {
        Self::from_terms(ring, prec, vec![(Mono::ONE, c)])
    }

    pub fn one(ring: &Arc<SeriesRing<R>>, prec: u32) -> Self {
        Self::constant(ring, ring.coeff.one(), prec)
    }

    pub fn var(ring: &Arc<SeriesRing<R>>, name: &str, prec: u32) -> Result<Self> {
        let i = ring.var_index(name)?;
        Ok(Self::from_terms(
            ring,
            prec,
            vec![(Mono::var(i), ring.coeff.one())],
        ))
    }

    pub fn monomial(
        ring: &Arc<SeriesRing<R>>,
        exps: &[u32],
        c: R::Elem,
        prec: u32,
    ) -> Result<Self> {
        Ok(Self::from_terms(
            ring,
            prec,
            vec![(Mono::from_exps(exps)?, c)],
        ))
    }

    /// Builds a series from arbitrary terms: sums duplicates, drops zeros and
    /// everything at or above `prec`.
    pub fn from_terms(ring: &Arc<SeriesRing<R>>, prec: u32, terms: Vec<(Mono, R::Elem)>) -> Self {
        let mut acc: HashMap<Mono, R::Elem> = HashMap::new();
        let mut order = Vec::new();
        for (m, c) in terms {
            if ring.degree(m) >= prec {
                continue;
            }
            match acc.get_mut(&m) {
                Some(e) => *e = ring.coeff.add(e, &c),
                None => {
                    order.push(m);
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<(Mono, R::Elem)> = order
            .into_iter()
            .filter_map(|m| acc.remove(&m).map(|c| (m, c)))
            .filter(|(_, c)| !ring.coeff.is_zero(c))
            .collect();
        terms.sort_by_key(|(m, _)| *m);
        TruncatedSeries {
            ring: ring.clone(),
            prec,
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<SeriesRing<R>> {
        &self.ring
    }
    pub fn coeff_ring(&self) -> &R {
        &self.ring.coeff
    }
    pub fn prec(&self) -> u32 {
        self.prec
    }
    pub fn is_exact(&self) -> bool {
        self.prec == EXACT
    }
    pub fn terms(&self) -> &[(Mono, R::Elem)] {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> R::Elem {
        match Mono::from_exps(exps) {
            Ok(m) => self.coeff_of(m),
            Err(_) => self.ring.coeff.zero(),
        }
    }

    pub fn coeff_of(&self, m: Mono) -> R::Elem {
        match self.terms.binary_search_by_key(&m, |(k, _)| *k) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => self.ring.coeff.zero(),
        }
    }

    /// Minimum weighted degree of a stored term; `prec` for the zero series.
    pub fn valuation(&self) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| self.ring.degree(*m))
            .min()
            .unwrap_or(self.prec)
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!(
                "{:?} vs {:?}",
                self.ring, other.ring
            )))
        }
    }

    /// Lowers the precision to `min(prec, bound)`.
    pub fn truncate(&self, bound: u32) -> Self {
        let prec = self.prec.min(bound);
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| self.ring.degree(*m) < prec)
            .cloned()
            .collect();
        TruncatedSeries {
            ring: self.ring.clone(),
            prec,
            terms,
        }
    }

    /// Marks a polynomial as exact.
    pub fn into_exact(mut self) -> Self {
        self.prec = EXACT;
        self
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let prec = self.prec.min(other.prec);
        let (a, b) = (&self.terms, &other.terms);
        let r = &self.ring.coeff;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let pick = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            let (m, c) = match pick {
                std::cmp::Ordering::Less => {
                    i += 1;
                    (a[i - 1].0, a[i - 1].1.clone())
                }
                std::cmp::Ordering::Greater => {
                    j += 1;
                    (b[j - 1].0, b[j - 1].1.clone())
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                    (a[i - 1].0, r.add(&a[i - 1].1, &b[j - 1].1))
                }
            };
            if !r.is_zero(&c) && self.ring.degree(m) < prec {
                out.push((m, c));
            }
        }
        Ok(TruncatedSeries {
            ring: self.ring.clone(),
            prec,
            terms: out,
        })
    }

    pub fn neg(&self) -> Self {
        let r = &self.ring.coeff;
        TruncatedSeries {
            ring: self.ring.clone(),
            prec: self.prec,
            terms: self.terms.iter().map(|(m, c)| (*m, r.neg(c))).collect(),
        }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let r = &self.ring.coeff;
        let terms = self
            .terms
            .iter()
            .map(|(m, x)| (*m, r.mul(c, x)))
            .filter(|(_, x)| !r.is_zero(x))
            .collect();
        TruncatedSeries {
            ring: self.ring.clone(),
            prec: self.prec,
            terms,
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let (va, vb) = (self.valuation(), other.valuation());
        let prec = va
            .saturating_add(other.prec)
            .min(vb.saturating_add(self.prec));
        let r = &self.ring.coeff;
        let w = &self.ring.weights;
        let mut acc: HashMap<Mono, R::Elem> =
            HashMap::with_capacity(self.terms.len() * other.terms.len() / 2 + 1);
        for (ma, ca) in &self.terms {
            let da = ma.weighted_degree(w);
            for (mb, cb) in &other.terms {
                if da + mb.weighted_degree(w) >= prec {
                    continue;
                }
                let m = ma.mul(*mb);
                let c = r.mul(ca, cb);
                match acc.get_mut(&m) {
                    Some(e) => *e = r.add(e, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<(Mono, R::Elem)> =
            acc.into_iter().filter(|(_, c)| !r.is_zero(c)).collect();
        terms.sort_by_key(|(m, _)| *m);
        Ok(TruncatedSeries {
            ring: self.ring.clone(),
            prec,
            terms,
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ring, EXACT);
        for _ in 0..e {
            acc = acc.try_mul(self).expect("same ring");
        }
        acc
    }

    /// Exponent of `v` dividing every stored term.
    pub fn var_valuation(&self, v: &str) -> Result<u32> {
        let i = self.ring.var_index(v)?;
        self.terms
            .iter()
            .map(|(m, _)| m.exp(i))
            .min()
            .ok_or(Error::ZeroSeries)
    }

    /// Divides by `v^e`; the precision drops by `e * weight(v)`.
    pub fn factor_out(&self, v: &str, e: u32) -> Result<Self> {
        let i = self.ring.var_index(v)?;
        let val = self.var_valuation(v)?;
        if e > val {
            return Err(Error::FactorTooLarge {
                var: v.to_string(),
                exp: e,
                valuation: val,
            });
        }
        let shift = Mono::var(i).pow(e)?;
        let prec = if self.prec == EXACT {
            EXACT
        } else {
            self.prec - e * self.ring.weights[i]
        };
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.div(shift), c.clone()))
            .collect();
        Ok(TruncatedSeries {
            ring: self.ring.clone(),
            prec,
            terms,
        })
    }

    /// True iff every stored monomial involves one of `vars`.
    pub fn ideal_membership_monomial(&self, vars: &[&str]) -> Result<bool> {
        let idx: Vec<usize> = vars
            .iter()
            .map(|v| self.ring.var_index(v))
            .collect::<Result<_>>()?;
        Ok(self
            .terms
            .iter()
            .all(|(m, _)| idx.iter().any(|&i| m.exp(i) > 0)))
    }

    /// Human-readable form such as `3*X + X^2*Y + O(4)`, with coefficients
    /// rendered by `coeff`.
    pub fn display_with(&self, coeff: impl Fn(&R::Elem) -> String) -> String {
        let n = self.ring.nvars();
        let mut out = String::new();
        for (m, c) in &self.terms {
            let vars: Vec<String> = m
                .exps(n)
                .iter()
                .zip(self.ring.vars())
                .filter(|(e, _)| **e > 0)
                .map(|(&e, v)| {
                    if e == 1 {
                        v.clone()
                    } else {
                        format!("{v}^{e}")
                    }
                })
                .collect();
            let c = coeff(c);
            let (neg, mag) = match c.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, c),
            };
            let body = match (vars.is_empty(), mag.as_str()) {
                (true, _) => mag,
                (false, "1") => vars.join("*"),
                (false, _) => format!("{mag}*{}", vars.join("*")),
            };
            match (out.is_empty(), neg) {
                (true, false) => out.push_str(&body),
                (true, true) => out.push_str(&format!("-{body}")),
                (false, false) => out.push_str(&format!(" + {body}")),
                (false, true) => out.push_str(&format!(" - {body}")),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        if !self.is_exact() {
            out.push_str(&format!(" + O({})", self.prec));
        }
        out
    }

    /// Terms of weighted degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| self.ring.degree(*m) == d)
            .cloned()
            .collect();
        TruncatedSeries {
            ring: self.ring.clone(),
            prec: EXACT,
            terms,
        }
    }

    /// Applies `f` to every coefficient, landing in `ring` (same variables).
    pub fn map_coeffs<S: Ring>(
        &self,
        ring: &Arc<SeriesRing<S>>,
        mut f: impl FnMut(&R::Elem) -> Result<S::Elem>,
    ) -> Result<TruncatedSeries<S>> {
        if ring.vars != self.ring.vars || ring.weights != self.ring.weights {
            return Err(Error::RingMismatch(format!(
                "{:?} vs {:?}",
                ring, self.ring
            )));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let d = f(c)?;
            if !ring.coeff.is_zero(&d) {
                terms.push((*m, d));
            }
        }
        Ok(TruncatedSeries {
            ring: ring.clone(),
            prec: self.prec,
            terms,
        })
    }

    /// Moves the series into a ring with the same variables and new weights.
    /// Weights may only grow, so the known range can only grow too.
    pub fn reweight(&self, ring: &Arc<SeriesRing<R>>) -> Result<Self> {
        if ring.vars != self.ring.vars || ring.coeff != self.ring.coeff {
            return Err(Error::RingMismatch(format!(
                "{:?} vs {:?}",
                ring, self.ring
            )));
        }
        if ring
            .weights
            .iter()
            .zip(&self.ring.weights)
            .any(|(new, old)| new < old)
        {
            return Err(Error::InvalidParameter(
                "reweighting may not lower a weight".into(),
            ));
        }
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| ring.degree(*m) < self.prec)
            .cloned()
            .collect();
        Ok(TruncatedSeries {
            ring: ring.clone(),
            prec: self.prec,
            terms,
        })
    }

    /// Substitutes `images[i]` for the `i`-th variable; images live in `target`.
    ///
    /// The result is known up to `ceil(prec * min_i nu_i / w_i)` over the
    /// positive-weight variables, where `nu_i` is the valuation of the image,
    /// and further limited by the precision of the images themselves.
    pub fn substitute(
        &self,
        target: &Arc<SeriesRing<R>>,
        images: &[TruncatedSeries<R>],
    ) -> Result<Self> {
        let n = self.ring.nvars();
        if images.len() != n {
            return Err(Error::InvalidParameter(format!(
                "expected {n} images, got {}",
                images.len()
            )));
        }
        for img in images {
            if !(Arc::ptr_eq(&img.ring, target) || *img.ring == **target) {
                return Err(Error::RingMismatch(format!(
                    "image in {:?}, target {:?}",
                    img.ring, target
                )));
            }
        }
        let mut bound = EXACT;
        if self.prec != EXACT {
            for (i, img) in images.iter().enumerate() {
                let w = self.ring.weights[i];
                if w == 0 {
                    continue;
                }
                let nu = img.valuation();
                if nu == 0 {
                    return Err(Error::ConstantTerm(format!(
                        "image of {} has a constant term",
                        self.ring.vars[i]
                    )));
                }
                let b = (self.prec as u64 * nu as u64).div_ceil(w as u64);
                bound = bound.min(b.min(EXACT as u64 - 1) as u32);
            }
            if bound == EXACT {
                // only weight-0 variables: nothing beyond prec is controlled by them
                return Err(Error::ConstantTerm(
                    "no positive-weight variable to truncate by".into(),
                ));
            }
        }
        let imgs: Vec<TruncatedSeries<R>> = images.iter().map(|s| s.truncate(bound)).collect();
        let mut powers: Vec<Vec<TruncatedSeries<R>>> = imgs
            .iter()
            .map(|s| vec![Self::one(target, bound), s.clone()])
            .collect();
        let mut out = Self::zero(target, bound);
        for (m, c) in &self.terms {
            let mut t = Self::constant(target, c.clone(), bound);
            for (i, &e) in m.exps(n).iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().try_mul(&imgs[i])?;
                    powers[i].push(next);
                }
                t = t.try_mul(&powers[i][e as usize])?;
            }
            out = out.try_add(&t)?;
        }
        Ok(out)
    }

    /// Substitution by variable name; variables without an entry are sent to
    /// the variable of the same name in `target`.
    pub fn substitute_named(
        &self,
        target: &Arc<SeriesRing<R>>,
        assignments: &[(&str, TruncatedSeries<R>)],
    ) -> Result<Self> {
        let mut images = Vec::with_capacity(self.ring.nvars());
        for v in &self.ring.vars {
            match assignments.iter().find(|(name, _)| name == v) {
                Some((_, s)) => images.push(s.clone()),
                None => images.push(Self::var(target, v, EXACT)?),
            }
        }
        for (name, _) in assignments {
            self.ring.var_index(name)?;
        }
        self.substitute(target, &images)
    }
}

impl<R: Ring> std::ops::Add for &TruncatedSeries<R> {
    type Output = TruncatedSeries<R>;
    fn add(self, rhs: Self) -> TruncatedSeries<R> {
        self.try_add(rhs).expect("series from different rings")
    }
}

impl<R: Ring> std::ops::Sub for &TruncatedSeries<R> {
    type Output = TruncatedSeries<R>;
    fn sub(self, rhs: Self) -> TruncatedSeries<R> {
        self.try_sub(rhs).expect("series from different rings")
    }
}

impl<R: Ring> std::ops::Mul for &TruncatedSeries<R> {
    type Output = TruncatedSeries<R>;
    fn mul(self, rhs: Self) -> TruncatedSeries<R> {
        self.try_mul(rhs).expect("series from different rings")
    }
}

impl<R: Ring> std::ops::Neg for &TruncatedSeries<R> {
    type Output = TruncatedSeries<R>;
    fn neg(self) -> TruncatedSeries<R> {
        TruncatedSeries::neg(self)
    }
}

/// The product of a non-empty family, multiplied as a balanced tree.
///
/// Coefficient arithmetic is exact and terms are kept sorted. The result is
/// truncated to `min_i (prec_i + sum_{j != i} val_j)`, a bound every
/// bracketing achieves, so it does not depend on the order or the split.
pub fn product_over<R: Ring>(family: &[TruncatedSeries<R>]) -> Result<TruncatedSeries<R>> {
    let vals: Vec<u64> = family.iter().map(|s| s.valuation() as u64).collect();
    let total: u64 = vals.iter().sum();
    let bound = family
        .iter()
        .zip(&vals)
        .map(|(s, &v)| {
            if s.is_exact() {
                u64::MAX
            } else {
                s.prec as u64 + total - v
            }
        })
        .min()
        .unwrap_or(u64::MAX);
    let p = product_tree(family)?;
    Ok(if bound >= EXACT as u64 {
        p
    } else {
        p.truncate(bound as u32)
    })
}

fn product_tree<R: Ring>(family: &[TruncatedSeries<R>]) -> Result<TruncatedSeries<R>> {
    match family.len() {
        0 => Err(Error::InvalidParameter(
            "product over an empty family".into(),
        )),
        1 => Ok(family[0].clone()),
        len => {
            let (l, r) = family.split_at(len / 2);
            let (a, b) = rayon::join(|| product_tree(l), || product_tree(r));
            a?.try_mul(&b?)
        }
    }
}

/// Coefficient rings with a reduction map onto a finite field.
pub trait ReduceModP: Ring {
    fn residue_field(&self) -> FieldDesc;
    fn reduce_elem(&self, a: &Self::Elem) -> Result<u32>;
}

impl ReduceModP for WittRing {
    fn residue_field(&self) -> FieldDesc {
        self.field().clone()
    }
    fn reduce_elem(&self, a: &Self::Elem) -> Result<u32> {
        Ok(self.reduce(a))
    }
}

impl ReduceModP for PadicRing {
    fn residue_field(&self) -> FieldDesc {
        self.witt().field().clone()
    }
    fn reduce_elem(&self, a: &Self::Elem) -> Result<u32> {
        if a.valuation() < 0 {
            return Err(Error::NegativeValuation(a.valuation()));
        }
        self.reduce(a)
    }
}

/// Coefficientwise reduction mod `p`.
pub fn reduce_mod_p<R: ReduceModP>(s: &TruncatedSeries<R>) -> Result<TruncatedSeries<FieldDesc>> {
    let ring = s.ring();
    let names: Vec<&str> = ring.vars().iter().map(String::as_str).collect();
    let target = SeriesRing::weighted(ring.coeff_ring().residue_field(), &names, ring.weights())?;
    let r = ring.coeff_ring();
    s.map_coeffs(&target, |c| r.reduce_elem(c))
}

#[cfg(test)]
mod tests;
