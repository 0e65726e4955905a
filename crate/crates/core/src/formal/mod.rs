//! Lubin-Tate formal `O`-modules for `O = W(F_q)`, `q = p^f`, uniformizer `p`.
//!
//! Every module is built analytically: a logarithm `lambda` over `K = O[1/p]`
//! (with bounded denominators), its compositional inverse `exp`, and then
//! `F(X, Y) = exp(lambda(X) + lambda(Y))` and `[a](X) = exp(a lambda(X))`.
//! All results are reduced to `W/p^N` and truncated below total degree `D`
//! in the series variables; reduction fails loudly if a coefficient is not
//! integral or not known to `N` digits.

mod axioms;
mod level;
mod log;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

pub use axioms::verify_module_axioms;
pub use level::{check_drinfeld_divisibility, LevelStructureCandidate};
pub use log::{hazewinkel_log, lubin_tate_log};

use crate::coeff::{prime_power, BoundedPadic, FieldDesc, PadicRing, Ring, WittElement, WittRing};
use crate::series::{SeriesRing, TruncatedSeries, EXACT};
use crate::{Error, Result};

/// Absolute `p`-adic precision `N` and series degree bound `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Precision {
    pub n: u32,
    pub d: u32,
}

impl Precision {
    pub fn new(n: u32, d: u32) -> Self {
        Precision { n, d }
    }

    /// `N = 8`, `D = q^n + q`.
    pub fn default_for(q: u64, n: u32) -> Self {
        Precision {
            n: 8,
            d: (q.pow(n) + q) as u32,
        }
    }
}

/// Keys of the scalar table: small integers and Teichmüller lifts of residues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scalar {
    Int(i64),
    Teich(u32),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(k) => write!(f, "{k}"),
            Scalar::Teich(c) => write!(f, "teich({c})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleKind {
    /// Built from a Lubin-Tate series `f` with `lambda(f(X)) = p lambda(X)`.
    LubinTate,
    /// Drinfeld normal form over `W[T_1, ..., T_{n-1}]`.
    Universal,
    /// A module whose law was altered after construction (negative controls).
    Tampered,
}

/// The analytic data a module was built from, kept to compute further `[a]`.
#[derive(Clone)]
pub(crate) struct Analytic {
    pub padic: PadicRing,
    pub ring: Arc<SeriesRing<PadicRing>>,
    pub log: TruncatedSeries<PadicRing>,
    pub exp: TruncatedSeries<PadicRing>,
}

/// A formal `O`-module `(F, [.])` truncated at `(N, D)`.
///
/// Series live in rings whose variables are the formal variables (`X`, `Y`)
/// followed by the deformation parameters `T_1..T_{n-1}` of weight 0.
#[derive(Clone)]
pub struct FormalModule {
    q: u64,
    n: u32,
    prec: Precision,
    kind: ModuleKind,
    witt: WittRing,
    params: Vec<String>,
    ring1: Arc<SeriesRing<WittRing>>,
    ring2: Arc<SeriesRing<WittRing>>,
    law: TruncatedSeries<WittRing>,
    scalars: BTreeMap<Scalar, TruncatedSeries<WittRing>>,
    analytic: Arc<Analytic>,
    min_valuation: i32,
}

impl fmt::Debug for FormalModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FormalModule({:?}, q={}, n={}, N={}, D={})",
            self.kind, self.q, self.n, self.prec.n, self.prec.d
        )
    }
}

/// Teichmüller lifts of every residue plus `1, -1, 2, 3, p`.
pub fn default_scalars(q: u64) -> Result<Vec<Scalar>> {
    let (p, _) = prime_power(q)
        .ok_or_else(|| Error::InvalidParameter(format!("{q} is not a prime power")))?;
    let mut out: Vec<Scalar> = (0..q as u32).map(Scalar::Teich).collect();
    for k in [1, -1, 2, 3, p as i64] {
        if !out.contains(&Scalar::Int(k)) {
            out.push(Scalar::Int(k));
        }
    }
    Ok(out)
}

pub(crate) fn param_names(n: u32) -> Vec<String> {
    (1..n).map(|i| format!("T{i}")).collect()
}

fn field_for(q: u64) -> Result<FieldDesc> {
    let (p, f) = prime_power(q)
        .ok_or_else(|| Error::InvalidParameter(format!("{q} is not a prime power")))?;
    crate::coeff::ff_make(p, f)
}

/// Largest working precision whose modulus still fits the Witt kernel.
fn max_relative_precision(p: u64) -> u32 {
    let mut r = 0;
    let mut x: u128 = 1;
    while x * (p as u128) < (1u128 << 62) {
        x *= p as u128;
        r += 1;
    }
    r
}

/// Denominator bound for logarithm coefficients: `ceil(D / (q^h - 1)) + 2`.
pub fn denominator_bound(d: u32, q: u64, h: u32) -> i32 {
    let m = q.pow(h) - 1;
    (d as u64).div_ceil(m) as i32 + 2
}

/// Runs `build` with growing working precision until no precision is exhausted.
pub(crate) fn with_working_precision<T>(
    p: u64,
    start: u32,
    mut build: impl FnMut(u32) -> Result<T>,
) -> Result<T> {
    let max_r = max_relative_precision(p);
    let mut r = start.min(max_r);
    loop {
        match build(r) {
            Err(Error::PrecisionExhausted(msg)) => {
                if r >= max_r {
                    return Err(Error::PrecisionExhausted(msg));
                }
                r = (r + r / 2 + 1).min(max_r);
            }
            other => return other,
        }
    }
}

fn check_params(q: u64, n: u32, prec: Precision) -> Result<()> {
    if n == 0 || n > 8 {
        return Err(Error::InvalidParameter(format!("height {n} outside 1..=8")));
    }
    if prec.n == 0 {
        return Err(Error::InvalidParameter(
            "precision N must be at least 1".into(),
        ));
    }
    if prec.d < 2 {
        return Err(Error::InvalidParameter(
            "degree bound D must be at least 2".into(),
        ));
    }
    if prec.d > crate::series::MAX_EXP {
        return Err(Error::SizeBound(format!(
            "degree bound {} too large",
            prec.d
        )));
    }
    if q.checked_pow(n).is_none_or(|v| v > 1 << 20) {
        return Err(Error::SizeBound(format!("{q}^{n} > 2^20")));
    }
    Ok(())
}

/// The Lubin-Tate module of `f(X) = sum coeffs[k] X^k` (`coeffs[0] = 0`,
/// `coeffs[1] = p`, `f = X^{q^n}` mod `p`).
///
/// The logarithm is the unique `lambda = X + ...` with
/// `lambda(f(X)) = p lambda(X)`, so `[p] = f` exactly.
pub fn lubin_tate_from_f(
    q: u64,
    n: u32,
    coeffs: &[i64],
    scalars: &[Scalar],
    prec: Precision,
) -> Result<FormalModule> {
    check_params(q, n, prec)?;
    let k = field_for(q)?;
    let p = k.p() as i64;
    if coeffs.first().copied().unwrap_or(0) != 0 || coeffs.get(1).copied() != Some(p) {
        return Err(Error::InvalidParameter(
            "f must be p X + higher terms".into(),
        ));
    }
    let vmax = denominator_bound(prec.d, q, n);
    let start = prec.n + 3 * vmax as u32 + 4;
    with_working_precision(p as u64, start, |r| {
        let padic = PadicRing::new(k.clone(), r)?;
        let ring = SeriesRing::new(padic.clone(), &["X"])?;
        let f = TruncatedSeries::from_terms(
            &ring,
            EXACT,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| {
                    (
                        crate::series::Mono::var(0).pow(i as u32).unwrap(),
                        padic.from_int(c),
                    )
                })
                .collect(),
        );
        let analytic = log::analytic_from_f(&padic, &ring, &f, prec.d, vmax)?;
        FormalModule::from_analytic(
            q,
            n,
            prec,
            ModuleKind::LubinTate,
            Vec::new(),
            analytic,
            scalars,
        )
    })
}

/// Lubin-Tate module from a `p`-adic series `f` (already over a working ring).
pub fn lubin_tate_from_series(
    q: u64,
    n: u32,
    f: &TruncatedSeries<PadicRing>,
    scalars: &[Scalar],
    prec: Precision,
) -> Result<FormalModule> {
    check_params(q, n, prec)?;
    let vmax = denominator_bound(prec.d, q, n);
    let padic = f.coeff_ring().clone();
    let analytic = log::analytic_from_f(&padic, f.ring(), f, prec.d, vmax)?;
    FormalModule::from_analytic(
        q,
        n,
        prec,
        ModuleKind::LubinTate,
        Vec::new(),
        analytic,
        scalars,
    )
}

/// The base module of height `n`: `f = p X + X^{q^n}`.
pub fn base_module(q: u64, n: u32, prec: Precision) -> Result<FormalModule> {
    check_params(q, n, prec)?;
    let p = field_for(q)?.p();
    let deg = q.pow(n) as usize;
    let mut coeffs = vec![0i64; deg + 1];
    coeffs[1] = p as i64;
    coeffs[deg] = 1;
    lubin_tate_from_f(q, n, &coeffs, &default_scalars(q)?, prec)
}

/// Drinfeld's universal deformation of height `n` in normal form, with
/// parameters `T_1..T_{n-1}`, from the functional equation
/// `lambda(X) = X + sum_{i=1}^{n} (v_i / p) lambda^{sigma^i}(X^{q^i})`,
/// `v_i = T_i` for `i < n`, `v_n = 1`, where `sigma` fixes `W(F_q)` and
/// sends `T_j -> T_j^q`.
pub fn build_universal_module(q: u64, n: u32, prec: Precision) -> Result<FormalModule> {
    check_params(q, n, prec)?;
    let k = field_for(q)?;
    let params = param_names(n);
    let vmax = denominator_bound(prec.d, q, n);
    // the exponential's denominators are those of a height-one module
    let vexp = denominator_bound(prec.d, q, 1);
    let start = prec.n + 3 * vexp as u32 + 4;
    with_working_precision(k.p() as u64, start, |r| {
        let padic = PadicRing::new(k.clone(), r)?;
        let names: Vec<&str> = std::iter::once("X")
            .chain(params.iter().map(String::as_str))
            .collect();
        let mut weights = vec![0u32; names.len()];
        weights[0] = 1;
        let ring = SeriesRing::weighted(padic.clone(), &names, &weights)?;
        let lambda = log::hazewinkel_log_in(&ring, q, n, prec.d)?;
        let analytic = log::analytic_from_log(&padic, &ring, lambda, prec.d, vmax, vexp)?;
        FormalModule::from_analytic(
            q,
            n,
            prec,
            ModuleKind::Universal,
            params.clone(),
            analytic,
            &default_scalars(q)?,
        )
    })
}

impl FormalModule {
    fn from_analytic(
        q: u64,
        n: u32,
        prec: Precision,
        kind: ModuleKind,
        params: Vec<String>,
        analytic: Analytic,
        scalars: &[Scalar],
    ) -> Result<Self> {
        let field = analytic.padic.witt().field().clone();
        let witt = WittRing::new(field, prec.n)?;
        let names1: Vec<&str> = std::iter::once("X")
            .chain(params.iter().map(String::as_str))
            .collect();
        let names2: Vec<&str> = ["X", "Y"]
            .into_iter()
            .chain(params.iter().map(String::as_str))
            .collect();
        let w = |names: &[&str], k: usize| -> Vec<u32> {
            (0..names.len()).map(|i| (i < k) as u32).collect()
        };
        let ring1 = SeriesRing::weighted(witt.clone(), &names1, &w(&names1, 1))?;
        let ring2 = SeriesRing::weighted(witt.clone(), &names2, &w(&names2, 2))?;
        let mut min_valuation = i32::MAX;
        let law = {
            let names2: Vec<&str> = ring2.vars().iter().map(String::as_str).collect();
            let ring2p = SeriesRing::weighted(analytic.padic.clone(), &names2, ring2.weights())?;
            let lx = analytic.log.substitute_named(
                &ring2p,
                &[("X", TruncatedSeries::var(&ring2p, "X", EXACT)?)],
            )?;
            let ly = analytic.log.substitute_named(
                &ring2p,
                &[("X", TruncatedSeries::var(&ring2p, "Y", EXACT)?)],
            )?;
            let f = analytic
                .exp
                .substitute_named(&ring2p, &[("X", &lx + &ly)])?;
            reduce_series(
                &analytic.padic,
                &witt,
                prec.d,
                &f,
                &ring2,
                &mut min_valuation,
            )?
        };
        let mut module = FormalModule {
            q,
            n,
            prec,
            kind,
            witt,
            params,
            ring1,
            ring2,
            law,
            scalars: BTreeMap::new(),
            analytic: Arc::new(analytic),
            min_valuation,
        };
        for &a in scalars {
            let s = module.compute_scalar(&module.scalar_value(a)?)?;
            module.scalars.insert(a, s);
        }
        Ok(module)
    }

    /// `[c](X) = exp(c lambda(X))` for a `p`-adic scalar `c`.
    pub fn compute_scalar(&mut self, c: &BoundedPadic) -> Result<TruncatedSeries<WittRing>> {
        let an = self.analytic.clone();
        let arg = an.log.scale(c);
        let s = if arg.is_zero() {
            TruncatedSeries::zero(&an.ring, self.prec.d)
        } else {
            an.exp.substitute_named(&an.ring, &[("X", arg)])?
        };
        reduce_series(
            &an.padic,
            &self.witt,
            self.prec.d,
            &s,
            &self.ring1,
            &mut self.min_valuation,
        )
    }

    /// Like [`FormalModule::compute_scalar`] but without touching the module.
    pub fn scalar_series(&self, c: &BoundedPadic) -> Result<TruncatedSeries<WittRing>> {
        self.clone().compute_scalar(c)
    }

    /// The value of a table key at working precision.
    pub fn scalar_value(&self, a: Scalar) -> Result<BoundedPadic> {
        let padic = &self.analytic.padic;
        match a {
            Scalar::Int(k) => Ok(padic.from_int(k)),
            Scalar::Teich(c) => {
                if c >= self.q as u32 {
                    return Err(Error::InvalidParameter(format!(
                        "residue code {c} outside F_{}",
                        self.q
                    )));
                }
                Ok(padic.teichmuller(c))
            }
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn height(&self) -> u32 {
        self.n
    }
    pub fn precision(&self) -> Precision {
        self.prec
    }
    pub fn kind(&self) -> ModuleKind {
        self.kind
    }
    pub fn witt(&self) -> &WittRing {
        &self.witt
    }
    pub fn padic(&self) -> &PadicRing {
        &self.analytic.padic
    }
    /// Deformation parameter names (`T1`, ...); empty unless universal.
    pub fn params(&self) -> &[String] {
        &self.params
    }
    /// The ring of `[a](X)`: `X` then the parameters.
    pub fn ring1(&self) -> &Arc<SeriesRing<WittRing>> {
        &self.ring1
    }
    /// The ring of `F(X, Y)`.
    pub fn ring2(&self) -> &Arc<SeriesRing<WittRing>> {
        &self.ring2
    }
    pub fn law(&self) -> &TruncatedSeries<WittRing> {
        &self.law
    }
    pub fn log(&self) -> &TruncatedSeries<PadicRing> {
        &self.analytic.log
    }
    pub fn exp(&self) -> &TruncatedSeries<PadicRing> {
        &self.analytic.exp
    }
    /// Smallest `p`-adic valuation met while reducing `F` and the scalars.
    pub fn min_valuation(&self) -> i32 {
        self.min_valuation
    }
    pub fn scalar_keys(&self) -> Vec<Scalar> {
        self.scalars.keys().copied().collect()
    }

    pub fn scalar(&self, a: Scalar) -> Result<&TruncatedSeries<WittRing>> {
        self.scalars
            .get(&a)
            .ok_or_else(|| Error::MissingScalar(a.to_string()))
    }

    /// `[p](X)`.
    pub fn p_series(&self) -> Result<&TruncatedSeries<WittRing>> {
        self.scalar(Scalar::Int(self.witt.p() as i64))
    }

    /// Teichmüller lift of a residue as an element of `W/p^N`.
    pub fn teich(&self, code: u32) -> WittElement {
        self.witt.teichmuller(code)
    }

    /// Left fold of `F` over `args`, which live in `target`; the module
    /// parameters are matched to `target` variables by name.
    pub fn formal_sum(
        &self,
        target: &Arc<SeriesRing<WittRing>>,
        args: &[TruncatedSeries<WittRing>],
    ) -> Result<TruncatedSeries<WittRing>> {
        let (first, rest) = args
            .split_first()
            .ok_or_else(|| Error::InvalidParameter("formal sum of nothing".into()))?;
        for a in args {
            if a.valuation() == 0 {
                return Err(Error::ConstantTerm(
                    "formal sum arguments must vanish at 0".into(),
                ));
            }
        }
        let mut acc = first.clone();
        for a in rest {
            acc = self
                .law
                .substitute_named(target, &[("X", acc), ("Y", a.clone())])?;
        }
        Ok(acc)
    }

    /// `[a](arg)` for a table entry `a`.
    pub fn apply_scalar(
        &self,
        a: Scalar,
        target: &Arc<SeriesRing<WittRing>>,
        arg: &TruncatedSeries<WittRing>,
    ) -> Result<TruncatedSeries<WittRing>> {
        self.scalar(a)?
            .substitute_named(target, &[("X", arg.clone())])
    }

    /// A copy whose law has `delta` added to the coefficient of `XY`.
    pub fn tampered(&self, delta: i64) -> Self {
        let mut m = self.clone();
        let mut exps = vec![0u32; self.ring2.nvars()];
        exps[0] = 1;
        exps[1] = 1;
        let bump =
            TruncatedSeries::monomial(&self.ring2, &exps, self.witt.from_int(delta), self.prec.d)
                .unwrap();
        m.law = &self.law + &bump;
        m.kind = ModuleKind::Tampered;
        m
    }

    /// Specializes the parameters `T_i -> values[i]` (series in `target`,
    /// which must contain `X` and `Y`); returns `(F, [p])` in `target`.
    pub fn specialize(
        &self,
        target1: &Arc<SeriesRing<WittRing>>,
        target2: &Arc<SeriesRing<WittRing>>,
        values1: &[TruncatedSeries<WittRing>],
        values2: &[TruncatedSeries<WittRing>],
    ) -> Result<(TruncatedSeries<WittRing>, TruncatedSeries<WittRing>)> {
        let mut a2: Vec<(&str, TruncatedSeries<WittRing>)> = Vec::new();
        let mut a1: Vec<(&str, TruncatedSeries<WittRing>)> = Vec::new();
        for (i, t) in self.params.iter().enumerate() {
            a2.push((t.as_str(), values2[i].clone()));
            a1.push((t.as_str(), values1[i].clone()));
        }
        let f = self.law.substitute_named(target2, &a2)?;
        let ps = self.p_series()?.substitute_named(target1, &a1)?;
        Ok((f, ps))
    }
}

/// Converts a `p`-adic series to `W/p^N` below degree `d`, tracking the
/// smallest valuation met.
fn reduce_series(
    padic: &PadicRing,
    witt: &WittRing,
    d: u32,
    s: &TruncatedSeries<PadicRing>,
    ring: &Arc<SeriesRing<WittRing>>,
    min_valuation: &mut i32,
) -> Result<TruncatedSeries<WittRing>> {
    if s.prec() < d {
        return Err(Error::PrecisionExhausted(format!(
            "series known below degree {} < {d}",
            s.prec()
        )));
    }
    let out = s.truncate(d).map_coeffs(ring, |c| {
        if !c.is_known_zero() {
            *min_valuation = (*min_valuation).min(c.valuation());
        }
        padic.to_witt(witt, c)
    })?;
    Ok(TruncatedSeries::from_terms(ring, d, out.terms().to_vec()))
}

#[cfg(test)]
mod tests;
