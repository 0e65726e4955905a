//! Local equations of the depth-zero model: the series `P_a`, their product
//! `P`, the special-fiber components, the blow-up chart at the closed point
//! and the affine equation it produces on the exceptional divisor.
//!
//! Everything is built from a lift of the formal module to `W`, taken from
//! the universal deformation by specializing its parameters.

mod chart;

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

pub use chart::{ChartReport, UnEquation};

use crate::coeff::{FieldDesc, Ring, WittRing};
use crate::formal::{build_universal_module, FormalModule, Precision, Scalar};
use crate::series::{product_over, SeriesRing, TruncatedSeries, EXACT};
use crate::{Error, Result};

type Series = TruncatedSeries<WittRing>;

/// How the deformation parameters `T_i` are lifted to the chosen point.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum TLift {
    /// `T_i = 0`: the base module over `W`.
    #[default]
    Zero,
    /// Keep `T_1..T_{n-1}` as variables of weight 0.
    Symbolic,
    /// `T_i` set to the given integers, each divisible by `p`.
    Custom(Vec<i64>),
}

/// A nonzero vector of `k^n`, entries as field codes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct IndexVector(pub Vec<u32>);

impl IndexVector {
    pub fn new(field: &FieldDesc, a: Vec<u32>) -> Result<Self> {
        if a.iter().all(|&c| c == 0) {
            return Err(Error::InvalidParameter(
                "index vector must be nonzero".into(),
            ));
        }
        if a.iter().any(|&c| c >= field.size()) {
            return Err(Error::InvalidParameter(format!(
                "entries of {a:?} outside F_{}",
                field.size()
            )));
        }
        Ok(IndexVector(a))
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// The representative of `k^x a` whose first nonzero entry is 1.
    pub fn projective_class(&self, field: &FieldDesc) -> IndexVector {
        let lead = *self.0.iter().find(|&&c| c != 0).unwrap();
        let inv = field.inv_code(lead).unwrap();
        self.scaled(field, inv)
    }

    pub fn scaled(&self, field: &FieldDesc, c: u32) -> IndexVector {
        IndexVector(self.0.iter().map(|&x| field.mul_codes(x, c)).collect())
    }
}

/// All nonzero vectors of `F_q^n`, first coordinate varying fastest.
pub fn index_vectors(field: &FieldDesc, n: u32) -> Vec<IndexVector> {
    let q = field.size() as u64;
    (1..q.pow(n))
        .map(|mut t| {
            IndexVector(
                (0..n)
                    .map(|_| {
                        let c = (t % q) as u32;
                        t /= q;
                        c
                    })
                    .collect(),
            )
        })
        .collect()
}

/// One projective class of index vectors, i.e. one component `Y_M`.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentClass {
    pub representative: Vec<u32>,
    pub members: Vec<Vec<u32>>,
    pub compatible: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentReport {
    pub count: usize,
    pub multiplicity: u64,
    pub classes: Vec<ComponentClass>,
}

impl ComponentReport {
    pub fn all_compatible(&self) -> bool {
        self.classes.iter().all(|c| c.compatible)
    }
}

/// The lifted module together with the rings the local equation lives in.
#[derive(Clone, Debug)]
pub struct Depth0Model {
    q: u64,
    n: u32,
    lift: TLift,
    module: FormalModule,
    field: FieldDesc,
    /// `X1..Xn` (weight 1) followed by the parameters when symbolic.
    family: Arc<SeriesRing<WittRing>>,
    /// `F(X, Y)` after lifting the parameters.
    law: Series,
    /// `[teich(c)](X)` for every residue code `c`.
    teich: Vec<Series>,
}

pub(crate) fn x_names(n: u32) -> Vec<String> {
    (1..=n).map(|i| format!("X{i}")).collect()
}

impl Depth0Model {
    /// Builds the model for `(q, n)` at precision `prec`.
    pub fn new(q: u64, n: u32, lift: TLift, prec: Precision) -> Result<Self> {
        if (prec.d as u64) < q.pow(n) {
            return Err(Error::InvalidParameter(format!(
                "degree bound {} must exceed q^n - 1 = {}, otherwise P truncates to zero",
                prec.d,
                q.pow(n) - 1
            )));
        }
        let module = build_universal_module(q, n, prec)?;
        let witt = module.witt().clone();
        let field = witt.field().clone();
        let params: Vec<String> = module.params().to_vec();
        let p = field.p() as i64;
        if let TLift::Custom(v) = &lift {
            if v.len() != params.len() || v.iter().any(|t| t % p != 0) {
                return Err(Error::InvalidParameter(format!(
                    "custom lift needs {} values divisible by {p}",
                    params.len()
                )));
            }
        }
        let symbolic = lift == TLift::Symbolic;
        let extra: Vec<&str> = if symbolic {
            params.iter().map(String::as_str).collect()
        } else {
            Vec::new()
        };
        let ring_with = |base: &[&str]| -> Result<Arc<SeriesRing<WittRing>>> {
            let names: Vec<&str> = base.iter().copied().chain(extra.iter().copied()).collect();
            let weights: Vec<u32> = (0..names.len()).map(|i| (i < base.len()) as u32).collect();
            SeriesRing::weighted(witt.clone(), &names, &weights)
        };
        let xs = x_names(n);
        let xs_ref: Vec<&str> = xs.iter().map(String::as_str).collect();
        let family = ring_with(&xs_ref)?;
        let ring1 = ring_with(&["X"])?;
        let ring2 = ring_with(&["X", "Y"])?;
        let assign = |target: &Arc<SeriesRing<WittRing>>| -> Vec<(String, Series)> {
            match &lift {
                TLift::Symbolic => Vec::new(),
                TLift::Zero => params
                    .iter()
                    .map(|t| (t.clone(), TruncatedSeries::zero(target, EXACT)))
                    .collect(),
                TLift::Custom(v) => params
                    .iter()
                    .zip(v)
                    .map(|(t, &c)| {
                        (
                            t.clone(),
                            TruncatedSeries::constant(target, witt.from_int(c), EXACT),
                        )
                    })
                    .collect(),
            }
        };
        let lift_into = |s: &Series, target: &Arc<SeriesRing<WittRing>>| -> Result<Series> {
            let a = assign(target);
            let a: Vec<(&str, Series)> = a.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
            s.substitute_named(target, &a)
        };
        let law = lift_into(module.law(), &ring2)?;
        let teich = (0..q as u32)
            .map(|c| lift_into(module.scalar(Scalar::Teich(c))?, &ring1))
            .collect::<Result<Vec<_>>>()?;
        Ok(Depth0Model {
            q,
            n,
            lift,
            module,
            field,
            family,
            law,
            teich,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn lift(&self) -> &TLift {
        &self.lift
    }
    pub fn module(&self) -> &FormalModule {
        &self.module
    }
    pub fn field(&self) -> &FieldDesc {
        &self.field
    }
    pub fn witt(&self) -> &WittRing {
        self.module.witt()
    }
    pub fn precision(&self) -> Precision {
        self.module.precision()
    }
    /// The ring of `P_a`: `X1..Xn` and, for a symbolic lift, `T1..`.
    pub fn family_ring(&self) -> &Arc<SeriesRing<WittRing>> {
        &self.family
    }
    pub fn index_vectors(&self) -> Vec<IndexVector> {
        index_vectors(&self.field, self.n)
    }
    /// Names of the deformation parameters still present as variables.
    pub(crate) fn symbolic_params(&self) -> Vec<String> {
        if self.lift == TLift::Symbolic {
            self.module.params().to_vec()
        } else {
            Vec::new()
        }
    }

    fn check_index(&self, a: &IndexVector) -> Result<()> {
        IndexVector::new(&self.field, a.0.clone())?;
        if a.0.len() != self.n as usize {
            return Err(Error::InvalidParameter(format!(
                "index vector {:?} has length != {}",
                a.0, self.n
            )));
        }
        Ok(())
    }

    /// `[teich(c)]` applied to a series of the family ring.
    pub fn apply_teich(&self, c: u32, s: &Series) -> Result<Series> {
        let t = self
            .teich
            .get(c as usize)
            .ok_or_else(|| Error::MissingScalar(format!("teich({c})")))?;
        t.substitute_named(&self.family, &[("X", s.clone())])
    }

    /// `P_a = [a_1](X1) + ... + [a_n](Xn)`, the sum taken in the formal module.
    pub fn p_a(&self, a: &IndexVector) -> Result<Series> {
        self.check_index(a)?;
        let d = self.precision().d;
        let mut acc: Option<Series> = None;
        for (i, &c) in a.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let x = TruncatedSeries::var(&self.family, &format!("X{}", i + 1), EXACT)?.truncate(d);
            let term = self.apply_teich(c, &x)?;
            acc = Some(match acc {
                None => term,
                Some(prev) => self
                    .law
                    .substitute_named(&self.family, &[("X", prev), ("Y", term)])?,
            });
        }
        Ok(acc.expect("nonzero index vector"))
    }

    /// All `P_a`, in the order of [`index_vectors`].
    pub fn p_family(&self) -> Result<Vec<(IndexVector, Series)>> {
        self.index_vectors()
            .into_par_iter()
            .map(|a| {
                let s = self.p_a(&a)?;
                Ok((a, s))
            })
            .collect()
    }

    /// `P = prod_a P_a` (the unit in front is taken to be 1).
    pub fn p_total(&self) -> Result<Series> {
        let fam: Vec<Series> = self.p_family()?.into_iter().map(|(_, s)| s).collect();
        product_over(&fam)
    }

    /// `P_{c a} = [teich(c)] o P_a`.
    pub fn scalar_compat_check(&self, a: &IndexVector, c: u32) -> Result<bool> {
        if c == 0 || c >= self.field.size() {
            return Err(Error::InvalidParameter(format!(
                "scalar {c} is not a unit of F_{}",
                self.q
            )));
        }
        let lhs = self.p_a(&a.scaled(&self.field, c))?;
        let rhs = self.apply_teich(c, &self.p_a(a)?)?;
        let bound = lhs.prec().min(rhs.prec());
        Ok(lhs.truncate(bound) == rhs.truncate(bound))
    }

    /// Groups the index vectors into projective classes and checks that
    /// the members of each class are related by Teichmüller scalars.
    pub fn components(&self) -> Result<ComponentReport> {
        let mut classes: BTreeMap<IndexVector, Vec<IndexVector>> = BTreeMap::new();
        for a in self.index_vectors() {
            classes
                .entry(a.projective_class(&self.field))
                .or_default()
                .push(a);
        }
        let classes = classes
            .into_par_iter()
            .map(|(rep, members)| {
                let mut compatible = true;
                for c in 1..self.field.size() {
                    compatible &= self.scalar_compat_check(&rep, c)?;
                }
                Ok(ComponentClass {
                    representative: rep.0,
                    members: members.into_iter().map(|m| m.0).collect(),
                    compatible,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let multiplicity = classes.first().map_or(0, |c| c.members.len() as u64);
        if classes
            .iter()
            .any(|c| c.members.len() as u64 != multiplicity)
        {
            return Err(Error::Verification(
                "projective classes of unequal size".into(),
            ));
        }
        Ok(ComponentReport {
            count: classes.len(),
            multiplicity,
            classes,
        })
    }

    /// True iff `P_a` lies in the monomial ideal `(X1, ..., Xj)`.
    pub fn stratum_membership(&self, a: &IndexVector, j: u32) -> Result<bool> {
        if j == 0 || j > self.n {
            return Err(Error::InvalidParameter(format!(
                "stratum index {j} outside 1..={}",
                self.n
            )));
        }
        let names = x_names(j);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        self.p_a(a)?.ideal_membership_monomial(&refs)
    }
}

/// Serializable summary of the depth-zero computations.
#[derive(Clone, Debug, Serialize)]
pub struct Depth0Report {
    pub q: u64,
    pub n: u32,
    pub precision: Precision,
    pub valuations: Vec<u32>,
    pub components: usize,
    pub multiplicity: u64,
    pub components_compatible: bool,
    pub linear_parts: Vec<LinearPart>,
    pub un_equation_matches_dl: bool,
}

/// `P'_a mod X_n` as the Teichmüller coefficients of `V_1..V_{n-1}, 1`.
#[derive(Clone, Debug, Serialize)]
pub struct LinearPart {
    pub a: Vec<u32>,
    pub form: String,
    pub exact: bool,
}

impl Depth0Model {
    /// Components, chart, iterated chart along `sequence` and the comparison
    /// of the exceptional equation with the Deligne-Lusztig equation.
    pub fn report(&self, sequence: &[u32]) -> Result<Depth0Report> {
        let comps = self.components()?;
        let chart = self.blowup_chart()?;
        let valuations = self.iterated_chart(sequence)?;
        let un = self.un_special_fiber_from(&chart)?;
        Ok(Depth0Report {
            q: self.q,
            n: self.n,
            precision: self.precision(),
            valuations,
            components: comps.count,
            multiplicity: comps.multiplicity,
            components_compatible: comps.all_compatible(),
            linear_parts: chart
                .linear_parts
                .iter()
                .map(|(a, s, exact)| LinearPart {
                    a: a.0.clone(),
                    form: chart::format_linear(self, s),
                    exact: *exact,
                })
                .collect(),
            un_equation_matches_dl: un.matches_dl,
        })
    }
}

#[cfg(test)]
mod tests;
