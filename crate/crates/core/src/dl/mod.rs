//! The Deligne-Lusztig variety `prod_{a in k^n \ 0} (a . x) = 1` over
//! `k = F_q`: its equation, point counts over `F_{q^m}`, the actions of
//! `GL_n(F_q)` and `mu_{q^n - 1}`, and the covering of the complement of
//! the rational hyperplanes.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::chars::linalg::Matrix;
use crate::coeff::{ff_make, gcd, lcm, prime_power, FieldDesc};
use crate::depth0::index_vectors;
use crate::series::{SeriesRing, TruncatedSeries, EXACT, MAX_EXP};
use crate::{Check, Error, Result};

/// Default enumeration budget (number of vectors scanned).
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// The variety for `(q, n)`: the residue field and one representative per
/// projective class of nonzero vectors.
#[derive(Clone, Debug)]
pub struct DlInstance {
    pub q: u64,
    pub n: u32,
    pub field: FieldDesc,
    pub reps: Vec<Vec<u32>>,
}

pub fn dl_equation(q: u64, n: u32) -> Result<DlInstance> {
    let (p, f) = prime_power(q)
        .ok_or_else(|| Error::InvalidParameter(format!("{q} is not a prime power")))?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if q.checked_pow(n).is_none_or(|v| v > 1 << 20) {
        return Err(Error::SizeBound(format!("{q}^{n} > 2^20")));
    }
    let field = ff_make(p, f)?;
    let mut reps: Vec<Vec<u32>> = index_vectors(&field, n)
        .into_iter()
        .filter(|a| a.projective_class(&field) == *a)
        .map(|a| a.0)
        .collect();
    reps.sort();
    Ok(DlInstance { q, n, field, reps })
}

impl DlInstance {
    /// The expanded polynomial `prod_a (a . x) - 1` over `F_p` in `x1..xn`.
    pub fn equation(&self) -> Result<TruncatedSeries<FieldDesc>> {
        let qn1 = self.q.pow(self.n) - 1;
        if qn1 > MAX_EXP as u64 || self.n as usize > crate::series::MAX_VARS {
            return Err(Error::SizeBound(format!(
                "equation of degree {qn1} is too large to expand"
            )));
        }
        let names: Vec<String> = (1..=self.n).map(|i| format!("x{i}")).collect();
        let names_ref: Vec<&str> = names.iter().map(String::as_str).collect();
        let ring = SeriesRing::new(self.field.clone(), &names_ref)?;
        let mut forms = Vec::new();
        for a in index_vectors(&self.field, self.n) {
            let mut form = TruncatedSeries::zero(&ring, EXACT);
            for (i, &c) in a.0.iter().enumerate() {
                if c != 0 {
                    form = &form + &TruncatedSeries::var(&ring, &names[i], EXACT)?.scale(&c);
                }
            }
            forms.push(form);
        }
        let prod = crate::series::product_over(&forms)?;
        let poly = &prod - &TruncatedSeries::one(&ring, EXACT);
        let prime = ff_make(self.field.p() as u64, 1)?;
        let pring = SeriesRing::new(prime.clone(), &names_ref)?;
        let emb = self.field.embedding_of(&prime)?;
        poly.map_coeffs(&pring, |c| {
            emb.iter()
                .position(|&x| x == *c)
                .map(|i| i as u32)
                .ok_or_else(|| Error::Verification("equation has a coefficient outside F_p".into()))
        })
    }

    /// Number of linear forms, `q^n - 1`.
    pub fn num_forms(&self) -> u64 {
        self.q.pow(self.n) - 1
    }
}

/// The field `F_{q^m}` with the embedding of `F_q`, and evaluation of the
/// equation there.
#[derive(Clone, Debug)]
pub struct Ambient {
    pub inst: DlInstance,
    pub m: u32,
    pub field: FieldDesc,
    emb: Vec<u32>,
    reps: Vec<Vec<u32>>,
}

impl Ambient {
    pub fn new(inst: &DlInstance, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("m must be at least 1".into()));
        }
        let k = &inst.field;
        let field = ff_make(k.p() as u64, k.degree() * m)?;
        let emb = field.embedding_of(k)?;
        let reps = inst
            .reps
            .iter()
            .map(|a| a.iter().map(|&c| emb[c as usize]).collect())
            .collect();
        Ok(Ambient {
            inst: inst.clone(),
            m,
            field,
            emb,
            reps,
        })
    }

    pub fn embed(&self, c: u32) -> u32 {
        self.emb[c as usize]
    }

    fn dot(&self, a: &[u32], x: &[u32]) -> u32 {
        a.iter().zip(x).fold(0, |acc, (&c, &v)| {
            self.field.add_codes(acc, self.field.mul_codes(c, v))
        })
    }

    /// `prod_a (a . x) = (-1)^{#classes} prod_{reps} (a . x)^{q-1}`.
    pub fn product(&self, x: &[u32]) -> u32 {
        let f = &self.field;
        let q1 = self.inst.q - 1;
        let mut acc = 1;
        for a in &self.reps {
            let d = self.dot(a, x);
            if d == 0 {
                return 0;
            }
            acc = f.mul_codes(acc, f.pow_code(d, q1));
        }
        if self.reps.len() % 2 == 1 {
            f.neg_code(acc)
        } else {
            acc
        }
    }

    pub fn on_variety(&self, x: &[u32]) -> bool {
        self.product(x) == 1
    }

    /// True iff `x` lies on no `F_q`-rational hyperplane.
    pub fn in_complement(&self, x: &[u32]) -> bool {
        self.reps.iter().all(|a| self.dot(a, x) != 0)
    }

    pub fn decode(&self, mut t: u64) -> Vec<u32> {
        let s = self.field.size() as u64;
        (0..self.inst.n)
            .map(|_| {
                let c = (t % s) as u32;
                t /= s;
                c
            })
            .collect()
    }

    pub fn num_vectors(&self) -> u128 {
        (self.field.size() as u128).pow(self.inst.n)
    }

    fn check_budget(&self, budget: u128) -> Result<()> {
        check_budget(self.inst.q, self.inst.n, self.m, budget)
    }

    /// Normalizes to the projective representative (first nonzero = 1).
    pub fn projectivize(&self, x: &[u32]) -> Vec<u32> {
        let lead = *x.iter().find(|&&c| c != 0).expect("nonzero vector");
        let inv = self.field.inv_code(lead).unwrap();
        x.iter().map(|&c| self.field.mul_codes(c, inv)).collect()
    }

    /// `x g` for `g` in `GL_n(F_q)` (entries as `F_q` codes).
    pub fn act_matrix(&self, x: &[u32], g: &Matrix) -> Vec<u32> {
        let n = x.len();
        (0..n)
            .map(|j| {
                (0..n).fold(0, |acc, i| {
                    self.field
                        .add_codes(acc, self.field.mul_codes(x[i], self.embed(g[i][j])))
                })
            })
            .collect()
    }

    /// `zeta^{-1} x`; `zeta` must lie in `mu_{q^n - 1}`.
    pub fn act_zeta(&self, x: &[u32], zeta: u32) -> Result<Vec<u32>> {
        let order = self.field.order_code(zeta)?;
        if !(self.inst.q.pow(self.inst.n) - 1).is_multiple_of(order) {
            return Err(Error::WrongOrder {
                found: order,
                modulus: self.inst.q.pow(self.inst.n) - 1,
            });
        }
        let inv = self.field.inv_code(zeta)?;
        Ok(x.iter().map(|&c| self.field.mul_codes(c, inv)).collect())
    }

    /// The elements of `mu_{q^n - 1}` lying in `F_{q^m}`, as
    /// `zeta_j = gamma^{j (q^L - 1)/(q^n - 1)}` for a generator `gamma` of
    /// `F_{q^L}`, `L = lcm(n, m)`, pulled back into `F_{q^m}`. Returns
    /// `(j, code)` pairs.
    pub fn mu(&self) -> Result<Vec<(u64, u32)>> {
        let q = self.inst.q;
        let n = self.inst.n;
        let l = lcm(n as u64, self.m as u64) as u32;
        let k = &self.inst.field;
        let big = ff_make(k.p() as u64, k.degree() * l)?;
        let emb = big.embedding_of(&self.field)?;
        let mut back = BTreeMap::new();
        for (small, &b) in emb.iter().enumerate() {
            back.insert(b, small as u32);
        }
        let qn1 = q.pow(n) - 1;
        let step = (big.size() as u64 - 1) / qn1;
        let mut out = Vec::new();
        for j in 0..qn1 {
            let z = big.pow_code(big.generator(), j * step);
            if let Some(&c) = back.get(&z) {
                out.push((j, c));
            }
        }
        Ok(out)
    }
}

/// Fails unless `q^{mn} <= budget`; checked before any field is built.
pub fn check_budget(q: u64, n: u32, m: u32, budget: u128) -> Result<()> {
    let needed = (q as u128).checked_pow(m * n).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::Budget { needed, budget });
    }
    Ok(())
}

/// Every point of `DL(F_{q^m})` in increasing code order.
pub fn dl_points(q: u64, n: u32, m: u32, budget: u128) -> Result<Vec<Vec<u32>>> {
    check_budget(q, n, m, budget)?;
    let amb = Ambient::new(&dl_equation(q, n)?, m)?;
    amb.check_budget(budget)?;
    let total = amb.num_vectors() as u64;
    Ok((0..total)
        .into_par_iter()
        .map(|t| amb.decode(t))
        .filter(|x| amb.on_variety(x))
        .collect())
}

/// `|DL(F_{q^m})|`.
pub fn dl_count(q: u64, n: u32, m: u32, budget: u128) -> Result<u64> {
    check_budget(q, n, m, budget)?;
    let amb = Ambient::new(&dl_equation(q, n)?, m)?;
    amb.check_budget(budget)?;
    let total = amb.num_vectors() as u64;
    Ok((0..total)
        .into_par_iter()
        .filter(|&t| amb.on_variety(&amb.decode(t)))
        .count() as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseMethod {
    Enumerate,
    Moebius,
}

/// Points of `P^{n-1}(F_{q^m})` on no `F_q`-rational hyperplane.
pub fn base_points(q: u64, n: u32, m: u32, method: BaseMethod, budget: u128) -> Result<u128> {
    match method {
        BaseMethod::Enumerate => {
            check_budget(q, n, m, budget)?;
            let amb = Ambient::new(&dl_equation(q, n)?, m)?;
            amb.check_budget(budget)?;
            let total = amb.num_vectors() as u64;
            let c = (1..total)
                .into_par_iter()
                .map(|t| amb.decode(t))
                .filter(|x| x.iter().find(|&&c| c != 0) == Some(&1) && amb.in_complement(x))
                .count();
            Ok(c as u128)
        }
        BaseMethod::Moebius => {
            // sum over F_q-subspaces W of k^n of mu(0, W) |W^perp(F_{q^m})|,
            // mu(0, W) = (-1)^d q^{d(d-1)/2}, grouped by d = dim W
            let qm = (q as i128).pow(m);
            let mut total: i128 = 0;
            for d in 0..=n {
                let count = gaussian_binomial(q as i128, n, d);
                let mu =
                    if d % 2 == 0 { 1 } else { -1 } * (q as i128).pow(d * d.saturating_sub(1) / 2);
                total += count * mu * qm.pow(n - d);
            }
            Ok((total / (qm - 1)) as u128)
        }
    }
}

/// Number of `d`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(q: i128, n: u32, d: u32) -> i128 {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 0..d {
        num *= q.pow(n - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

/// Fiber sizes of `DL(F_{q^m}) -> P^{n-1}(F_{q^m})`.
#[derive(Clone, Debug, Serialize)]
pub struct FiberReport {
    pub q: u64,
    pub n: u32,
    pub m: u32,
    pub count: u64,
    pub base_count: u64,
    pub fiber_size: u64,
    pub invariants_passed: bool,
    pub checks: Vec<Check>,
}

pub fn fiber_structure_check(q: u64, n: u32, m: u32, budget: u128) -> Result<FiberReport> {
    let inst = dl_equation(q, n)?;
    let amb = Ambient::new(&inst, m)?;
    let pts = dl_points(q, n, m, budget)?;
    let mut fibers: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    for x in &pts {
        *fibers.entry(amb.projectivize(x)).or_insert(0) += 1;
    }
    let expected = gcd(q.pow(n) - 1, q.pow(m) - 1);
    let complement = fibers.keys().all(|b| amb.in_complement(b));
    let uniform = fibers.values().all(|&s| s == expected);
    let checks = vec![
        Check::new(
            "images avoid rational hyperplanes",
            complement,
            format!("{} base points", fibers.len()),
        ),
        Check::new(
            "fibers have size gcd(q^n-1, q^m-1)",
            uniform,
            format!("expected {expected}"),
        ),
    ];
    Ok(FiberReport {
        q,
        n,
        m,
        count: pts.len() as u64,
        base_count: fibers.len() as u64,
        fiber_size: expected,
        invariants_passed: complement && uniform,
        checks,
    })
}

/// `#{x in DL(F_{q^M}) : Frob^m(x) = zeta^{-1} (x g)}` where `Frob^m` raises
/// every coordinate to the power `q^m`.
pub fn twisted_count(
    q: u64,
    n: u32,
    g: &Matrix,
    zeta_j: u64,
    big_m: u32,
    m: u32,
    budget: u128,
) -> Result<u64> {
    check_budget(q, n, big_m, budget)?;
    let amb = Ambient::new(&dl_equation(q, n)?, big_m)?;
    amb.check_budget(budget)?;
    let zeta = amb
        .mu()?
        .into_iter()
        .find(|&(j, _)| j == zeta_j % (q.pow(n) - 1))
        .map(|(_, c)| c)
        .ok_or_else(|| {
            Error::InvalidParameter(format!("zeta_{zeta_j} does not lie in F_{{q^{big_m}}}"))
        })?;
    let qm = q.pow(m);
    let total = amb.num_vectors() as u64;
    let count = (0..total)
        .into_par_iter()
        .filter(|&t| {
            let x = amb.decode(t);
            if !amb.on_variety(&x) {
                return false;
            }
            let y = amb.act_zeta(&amb.act_matrix(&x, g), zeta).unwrap();
            x.iter()
                .zip(&y)
                .all(|(&a, &b)| amb.field.pow_code(a, qm) == b)
        })
        .count();
    Ok(count as u64)
}

/// Invariance of the equation under `x -> zeta^{-1} (x g)` for every `g`
/// in `GL_n(F_q)` and every `zeta` of `mu_{q^n-1}` inside `F_{q^m}`, on
/// every point of `DL(F_{q^m})`. Returns the number of pairs checked.
pub fn action_invariance(q: u64, n: u32, m: u32, budget: u128) -> Result<(bool, usize)> {
    let inst = dl_equation(q, n)?;
    let amb = Ambient::new(&inst, m)?;
    let pts = dl_points(q, n, m, budget)?;
    let group = crate::chars::GlGroup::new(q, n)?;
    let mu = amb.mu()?;
    let pairs = group.order() * mu.len();
    let ok = group.elements().par_iter().all(|g| {
        mu.iter().all(|&(_, z)| {
            pts.iter().all(|x| {
                let y = amb.act_zeta(&amb.act_matrix(x, g), z).unwrap();
                amb.on_variety(&y)
            })
        })
    });
    Ok((ok, pairs))
}

/// JSON summary for `(q, n, m)`.
#[derive(Clone, Debug, Serialize)]
pub struct DlReport {
    pub q: u64,
    pub n: u32,
    pub m: u32,
    pub count: u64,
    pub base_count: u128,
    pub fiber_size: u64,
    pub invariants_passed: bool,
}

pub fn dl_report(q: u64, n: u32, m: u32, budget: u128) -> Result<DlReport> {
    let fib = fiber_structure_check(q, n, m, budget)?;
    let enumerated = base_points(q, n, m, BaseMethod::Enumerate, budget)?;
    let moebius = base_points(q, n, m, BaseMethod::Moebius, budget)?;
    let (act, _) = action_invariance(q, n, m, budget)?;
    Ok(DlReport {
        q,
        n,
        m,
        count: fib.count,
        base_count: enumerated,
        fiber_size: fib.fiber_size,
        invariants_passed: fib.invariants_passed && act && enumerated == moebius,
    })
}

/// Writes points as CSV rows of `F_{q^m}` codes.
pub fn write_points_csv(w: &mut impl Write, n: u32, points: &[Vec<u32>]) -> std::io::Result<()> {
    let header: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    writeln!(w, "{}", header.join(","))?;
    for x in points {
        let row: Vec<String> = x.iter().map(u32::to_string).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests;
