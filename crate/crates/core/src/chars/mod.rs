//! Characters of `GL_n(F_q)`: conjugacy classes, the full character table,
//! induction from the Coxeter torus, the Steinberg character, cuspidality
//! and the correspondence `theta -> pi_theta` characterized by
//! `pi_theta * St = Ind_T^G theta` among cuspidal irreducibles.

mod dixon;
pub mod group;
pub mod linalg;

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

pub use group::{gl_order, ConjugacyClass, GlGroup};

use crate::coeff::{divisors, ff_make, moebius, poly, prime_power, CycloElement};
use crate::{Check, Error, Result};

/// A class function on a group, one value per class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    pub values: Vec<CycloElement>,
}

impl ClassFunction {
    pub fn from_ints(v: &[i64]) -> Self {
        ClassFunction {
            values: v.iter().map(|&x| CycloElement::from_int(1, x)).collect(),
        }
    }
    pub fn degree(&self) -> &CycloElement {
        &self.values[0]
    }
    /// The value at the identity as an integer.
    pub fn degree_int(&self) -> Option<i64> {
        let r = self.values[0].to_rational()?;
        r.is_integer()
            .then(|| r.to_integer().try_into().ok())
            .flatten()
    }
    pub fn mul(&self, other: &Self) -> Self {
        ClassFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }
    pub fn add(&self, other: &Self) -> Self {
        ClassFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
    pub fn sub(&self, other: &Self) -> Self {
        ClassFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
    pub fn scale(&self, k: i64) -> Self {
        let r = crate::coeff::ratio(k, 1);
        ClassFunction {
            values: self.values.iter().map(|a| a.scale(&r)).collect(),
        }
    }
    pub fn conj(&self) -> Self {
        ClassFunction {
            values: self.values.iter().map(CycloElement::conj).collect(),
        }
    }
}

/// `<a, b> = |G|^{-1} sum_g a(g) conj(b(g))`; must be rational.
pub fn inner_product(g: &GlGroup, a: &ClassFunction, b: &ClassFunction) -> Result<BigRational> {
    let mut acc = CycloElement::zero(1);
    for (c, cl) in g.classes().iter().enumerate() {
        let t = &a.values[c] * &b.values[c].conj();
        acc = &acc + &t.scale(&crate::coeff::ratio(cl.size as i64, 1));
    }
    let r = acc
        .to_rational()
        .ok_or_else(|| Error::Verification(format!("inner product {acc} is not rational")))?;
    Ok(r / BigRational::from_integer((g.order() as i64).into()))
}

/// The torus `T = <C>` for the companion matrix `C` of the smallest
/// primitive polynomial of degree `n` over `F_q`.
#[derive(Clone, Debug)]
pub struct CoxeterTorus {
    pub polynomial: Vec<u32>,
    pub generator: linalg::Matrix,
    /// Group indices of `C^0, C^1, ..., C^{q^n - 2}`.
    pub elements: Vec<usize>,
}

impl CoxeterTorus {
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }
}

pub fn coxeter_torus(g: &GlGroup) -> Result<CoxeterTorus> {
    let k = g.field();
    let polynomial = poly::smallest_primitive(k, g.n() as usize);
    let generator = group::companion(k, &polynomial);
    let c = g
        .index_of(&generator)
        .ok_or_else(|| Error::Verification("companion matrix not in group".into()))?;
    let order = g.q().pow(g.n()) - 1;
    let mut elements = vec![g.identity()];
    let mut x = c;
    while x != g.identity() {
        elements.push(x);
        x = g.mul(x, c);
    }
    if elements.len() as u64 != order {
        return Err(Error::WrongOrder {
            found: elements.len() as u64,
            modulus: order,
        });
    }
    Ok(CoxeterTorus {
        polynomial,
        generator,
        elements,
    })
}

/// `theta_j(C^k) = zeta_{q^n-1}^{jk}` on the torus elements in order.
pub fn torus_character(torus: &CoxeterTorus, j: u64) -> Vec<CycloElement> {
    let m = torus.order();
    (0..m)
        .map(|k| CycloElement::zeta(m, ((j * k) % m) as i64))
        .collect()
}

/// All `q^n - 1` torus characters.
pub fn torus_characters(torus: &CoxeterTorus) -> Vec<Vec<CycloElement>> {
    (0..torus.order())
        .map(|j| torus_character(torus, j))
        .collect()
}

/// `theta_j` of `F_{q^n}^x` is in general position: not fixed by `q^m`
/// for any proper divisor `m` of `n`. Cross-checked against nontriviality
/// on the kernel of the norm to each proper subfield, computed in the field.
pub fn is_generic(q: u64, n: u32, j: u64) -> Result<bool> {
    let (p, f) = prime_power(q)
        .ok_or_else(|| Error::InvalidParameter(format!("{q} is not a prime power")))?;
    let m_all = q.pow(n) - 1;
    let j = j % m_all;
    let proper: Vec<u64> = divisors(n as u64)
        .into_iter()
        .filter(|&m| m < n as u64)
        .collect();
    let by_index = proper.iter().all(|&m| (j * q.pow(m as u32)) % m_all != j);
    let big = ff_make(p, f * n)?;
    let by_norm = proper.iter().all(|&m| {
        let qm = q.pow(m as u32);
        big.elements().skip(1).any(|x| {
            // norm to F_{q^m}: product of the conjugates x^{q^{m i}}
            let mut nx = 1;
            let mut y = x;
            for _ in 0..(n as u64 / m) {
                nx = big.mul_codes(nx, y);
                y = big.pow_code(y, qm);
            }
            nx == 1 && !(j * big.log_code(x).unwrap() as u64).is_multiple_of(m_all)
        })
    });
    if by_index != by_norm {
        return Err(Error::Verification(format!(
            "genericity tests disagree for theta_{j}"
        )));
    }
    Ok(by_index)
}

/// Number of generic characters: `sum_{m | n} mu(n/m) (q^m - 1)`.
pub fn generic_count(q: u64, n: u32) -> i64 {
    divisors(n as u64)
        .into_iter()
        .map(|m| moebius(n as u64 / m) * (q.pow(m as u32) as i64 - 1))
        .sum()
}

/// `Ind_H^G theta` by the class formula
/// `Ind(g) = |C_G(g)| / |H| * sum_{h in H, h ~ g} theta(h)`;
/// `sub` lists the elements of `H` and `theta` their values.
pub fn induce(g: &GlGroup, sub: &[usize], theta: &[CycloElement]) -> ClassFunction {
    let mut sums = vec![CycloElement::zero(1); g.num_classes()];
    for (&h, v) in sub.iter().zip(theta) {
        let c = g.class_of(h);
        sums[c] = &sums[c] + v;
    }
    let values = sums
        .iter()
        .enumerate()
        .map(|(c, s)| {
            s.scale(&crate::coeff::ratio(
                g.centralizer_order(c) as i64,
                sub.len() as i64,
            ))
        })
        .collect();
    ClassFunction { values }
}

/// `Ind_T^G theta_j`.
pub fn induce_from_torus(g: &GlGroup, torus: &CoxeterTorus, j: u64) -> ClassFunction {
    induce(g, &torus.elements, &torus_character(torus, j))
}

/// The standard parabolics' permutation characters, keyed by composition.
fn parabolic_permutation_character(g: &GlGroup, comp: &[usize]) -> ClassFunction {
    let counts = g.class_counts(|m| group::in_parabolic(m, comp));
    let p: usize = counts.iter().sum();
    let values = counts
        .iter()
        .enumerate()
        .map(|(c, &k)| {
            CycloElement::from_rational(
                1,
                crate::coeff::ratio((g.centralizer_order(c) * k) as i64, p as i64),
            )
        })
        .collect();
    ClassFunction { values }
}

/// `St = sum_{J subset S} (-1)^{|S \ J|} 1_{flags of type J}`: a composition
/// with `r` parts stabilizes flags with `r - 1` steps, so it enters with
/// sign `(-1)^{n - r}`.
pub fn steinberg(g: &GlGroup) -> Result<ClassFunction> {
    let n = g.n() as usize;
    let mut st = ClassFunction {
        values: vec![CycloElement::zero(1); g.num_classes()],
    };
    for comp in group::compositions(n) {
        let perm = parabolic_permutation_character(g, &comp);
        st = if (n - comp.len()).is_multiple_of(2) {
            st.add(&perm)
        } else {
            st.sub(&perm)
        };
    }
    let norm = inner_product(g, &st, &st)?;
    if !norm.is_one() {
        return Err(Error::Verification(format!("<St, St> = {norm}")));
    }
    let expect = g.q().pow(g.n() * (g.n() - 1) / 2) as i64;
    if st.degree_int() != Some(expect) {
        return Err(Error::Verification(format!(
            "St(1) = {} != {expect}",
            st.degree()
        )));
    }
    Ok(st)
}

/// Class-intersection counts of the unipotent radicals of the proper
/// standard parabolics.
pub fn unipotent_radical_counts(g: &GlGroup) -> Vec<(Vec<usize>, Vec<usize>)> {
    group::compositions(g.n() as usize)
        .into_iter()
        .filter(|c| c.len() > 1)
        .map(|comp| {
            let counts = g.class_counts(|m| group::in_unipotent_radical(m, &comp));
            (comp, counts)
        })
        .collect()
}

/// `sum_{u in U} chi(u) = 0` for every proper standard unipotent radical.
pub fn is_cuspidal_with(radicals: &[(Vec<usize>, Vec<usize>)], chi: &ClassFunction) -> bool {
    radicals.iter().all(|(_, counts)| {
        let mut s = CycloElement::zero(1);
        for (c, &k) in counts.iter().enumerate() {
            if k > 0 {
                s = &s + &chi.values[c].scale(&crate::coeff::ratio(k as i64, 1));
            }
        }
        s.is_zero()
    })
}

pub fn is_cuspidal(g: &GlGroup, chi: &ClassFunction) -> bool {
    is_cuspidal_with(&unipotent_radical_counts(g), chi)
}

/// The irreducible characters, sorted by degree then values.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub irreducibles: Vec<ClassFunction>,
}

pub fn dixon_table(g: &GlGroup) -> Result<CharacterTable> {
    let rows = dixon::dixon_table(g)?;
    Ok(CharacterTable {
        irreducibles: rows
            .into_iter()
            .map(|values| ClassFunction { values })
            .collect(),
    })
}

impl CharacterTable {
    pub fn degrees(&self) -> Vec<i64> {
        self.irreducibles
            .iter()
            .map(|c| c.degree_int().unwrap_or(-1))
            .collect()
    }

    /// Row orthogonality, column orthogonality and `sum chi(1)^2 = |G|`.
    pub fn orthogonality_checks(&self, g: &GlGroup) -> Vec<Check> {
        let k = self.irreducibles.len();
        let rows = Check::from_result("row orthogonality", {
            let pairs: Vec<(usize, usize)> =
                (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
            let bad: Vec<String> = pairs
                .par_iter()
                .filter_map(|&(i, j)| {
                    let ip = inner_product(g, &self.irreducibles[i], &self.irreducibles[j]).ok()?;
                    let want = if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    };
                    (ip != want).then(|| format!("({i},{j})"))
                })
                .collect();
            Ok((
                bad.is_empty(),
                format!("{} pairs, failures: {}", pairs.len(), bad.join(" ")),
            ))
        });
        let cols = Check::from_result("column orthogonality", {
            let mut ok = true;
            for a in 0..g.num_classes() {
                for b in 0..g.num_classes() {
                    let mut s = CycloElement::zero(1);
                    for chi in &self.irreducibles {
                        s = &s + &(&chi.values[a] * &chi.values[b].conj());
                    }
                    let want = if a == b {
                        g.centralizer_order(a) as i64
                    } else {
                        0
                    };
                    ok &= s == CycloElement::from_int(1, want);
                }
            }
            Ok((ok, format!("{} classes", g.num_classes())))
        });
        let sq: i64 = self.degrees().iter().map(|d| d * d).sum();
        let deg = Check::new(
            "sum of squared degrees",
            sq == g.order() as i64,
            format!("{sq} vs |G| = {}", g.order()),
        );
        let count = Check::new(
            "number of irreducibles",
            k == g.num_classes(),
            format!("{k} irreducibles, {} classes", g.num_classes()),
        );
        vec![count, rows, cols, deg]
    }
}

/// An element of the Grothendieck group of `GL_n(F_q) x F_{q^n}^x`:
/// integer multiplicities of `(irreducible index, torus character index)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VirtualRep {
    pub terms: BTreeMap<(usize, u64), i64>,
}

impl VirtualRep {
    pub fn add_term(&mut self, pi: usize, theta: u64, k: i64) {
        let e = self.terms.entry((pi, theta)).or_insert(0);
        *e += k;
        if *e == 0 {
            self.terms.remove(&(pi, theta));
        }
    }
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(p, t), &k) in &other.terms {
            out.add_term(p, t, k);
        }
        out
    }
    pub fn neg(&self) -> Self {
        VirtualRep {
            terms: self.terms.iter().map(|(&k, &v)| (k, -v)).collect(),
        }
    }
    /// Dimension `sum k * dim(pi)`.
    pub fn dimension(&self, table: &CharacterTable) -> i64 {
        self.terms
            .iter()
            .map(|(&(p, _), &k)| k * table.irreducibles[p].degree_int().unwrap_or(0))
            .sum()
    }
}

/// Everything needed for the correspondence, computed once per `(q, n)`.
#[derive(Clone, Debug)]
pub struct GlCharacters {
    pub group: GlGroup,
    pub table: CharacterTable,
    pub torus: CoxeterTorus,
    pub steinberg: ClassFunction,
    pub cuspidal: Vec<bool>,
    radicals: Vec<(Vec<usize>, Vec<usize>)>,
}

impl GlCharacters {
    pub fn new(q: u64, n: u32) -> Result<Self> {
        let group = GlGroup::new(q, n)?;
        let table = dixon_table(&group)?;
        let torus = coxeter_torus(&group)?;
        let steinberg = steinberg(&group)?;
        let radicals = unipotent_radical_counts(&group);
        let cuspidal = table
            .irreducibles
            .iter()
            .map(|c| is_cuspidal_with(&radicals, c))
            .collect();
        Ok(GlCharacters {
            group,
            table,
            torus,
            steinberg,
            cuspidal,
            radicals,
        })
    }

    pub fn q(&self) -> u64 {
        self.group.q()
    }
    pub fn n(&self) -> u32 {
        self.group.n()
    }

    pub fn is_cuspidal(&self, chi: &ClassFunction) -> bool {
        is_cuspidal_with(&self.radicals, chi)
    }

    /// Irreducibles `pi` (indices) with `pi * St = Ind_T^G theta_j`.
    pub fn characterization_solutions(&self, j: u64) -> Vec<usize> {
        let ind = induce_from_torus(&self.group, &self.torus, j);
        (0..self.table.irreducibles.len())
            .filter(|&i| self.table.irreducibles[i].mul(&self.steinberg) == ind)
            .collect()
    }

    /// The cuspidal `pi_theta` for a generic `theta_j`.
    pub fn dl_correspondence(&self, j: u64) -> Result<usize> {
        if !is_generic(self.q(), self.n(), j)? {
            return Err(Error::InvalidParameter(format!(
                "theta_{j} is not in general position"
            )));
        }
        let sols: Vec<usize> = self
            .characterization_solutions(j)
            .into_iter()
            .filter(|&i| self.cuspidal[i])
            .collect();
        match sols.as_slice() {
            [i] => Ok(*i),
            [] => Err(Error::Verification(format!(
                "no cuspidal pi with pi * St = Ind theta_{j}"
            ))),
            _ => Err(Error::Verification(format!(
                "several cuspidal solutions for theta_{j}: {sols:?}"
            ))),
        }
    }

    /// Frobenius orbits `{j, jq, jq^2, ...}` of the generic characters.
    pub fn generic_orbits(&self) -> Result<Vec<Vec<u64>>> {
        let m = self.torus.order();
        let q = self.q();
        let mut seen = BTreeSet::new();
        let mut orbits = Vec::new();
        for j in 0..m {
            if seen.contains(&j) || !is_generic(q, self.n(), j)? {
                continue;
            }
            let mut orbit = vec![j];
            let mut x = (j * q) % m;
            while x != j {
                orbit.push(x);
                x = (x * q) % m;
            }
            seen.extend(orbit.iter().copied());
            orbits.push(orbit);
        }
        Ok(orbits)
    }

    pub fn correspondence_report(&self) -> Result<CorrespondenceReport> {
        let g = &self.group;
        let n = self.n();
        let q = self.q();
        let orbits = self.generic_orbits()?;
        let mut entries = Vec::new();
        let mut checks = Vec::new();
        let mut all_pairs = Vec::new();
        let mut consistent = true;
        for orbit in &orbits {
            let pis: Vec<usize> = orbit
                .iter()
                .map(|&j| self.dl_correspondence(j))
                .collect::<Result<_>>()?;
            consistent &= pis.iter().all(|&p| p == pis[0]);
            for (&j, &p) in orbit.iter().zip(&pis) {
                all_pairs.push((j, p));
            }
            entries.push(CorrespondenceEntry {
                theta_orbit: orbit.clone(),
                pi_index: pis[0],
            });
        }
        checks.push(Check::new(
            "pi constant on Frobenius orbits",
            consistent,
            String::new(),
        ));
        let sizes_ok = orbits.iter().all(|o| o.len() == n as usize);
        checks.push(Check::new(
            "orbit sizes equal n",
            sizes_ok,
            format!("{} orbits", orbits.len()),
        ));
        let generic: i64 = orbits.iter().map(|o| o.len() as i64).sum();
        checks.push(Check::new(
            "generic count",
            generic == generic_count(q, n),
            format!("{generic} generic, formula {}", generic_count(q, n)),
        ));
        let hit: BTreeSet<usize> = entries.iter().map(|e| e.pi_index).collect();
        let cusp: BTreeSet<usize> = (0..self.cuspidal.len())
            .filter(|&i| self.cuspidal[i])
            .collect();
        checks.push(Check::new(
            "orbits biject onto cuspidals",
            hit == cusp && hit.len() == entries.len(),
            format!("{} orbits, {} cuspidals", entries.len(), cusp.len()),
        ));
        let want_dim: i64 = (1..n).map(|i| q.pow(i) as i64 - 1).product();
        let dims_ok = cusp
            .iter()
            .all(|&i| self.table.irreducibles[i].degree_int() == Some(want_dim));
        checks.push(Check::new(
            "cuspidal dimension prod (q^i - 1)",
            dims_ok,
            format!("expected {want_dim}"),
        ));
        let mut ip_ok = true;
        for a in &entries {
            for b in &entries {
                let ip = inner_product(
                    g,
                    &self.table.irreducibles[a.pi_index],
                    &self.table.irreducibles[b.pi_index],
                )?;
                let want = if a.theta_orbit == b.theta_orbit {
                    BigRational::one()
                } else {
                    BigRational::zero()
                };
                ip_ok &= ip == want;
            }
        }
        checks.push(Check::new(
            "<pi_theta, pi_theta'> = delta of orbits",
            ip_ok,
            String::new(),
        ));
        let st1 = q.pow(n * (n - 1) / 2) as i64;
        let mut deg_ok = true;
        for &(j, p) in &all_pairs {
            let ind = induce_from_torus(g, &self.torus, j);
            deg_ok &= ind.degree_int() == self.table.irreducibles[p].degree_int().map(|d| d * st1);
        }
        checks.push(Check::new(
            "Ind(1) = pi(1) q^{n(n-1)/2}",
            deg_ok,
            String::new(),
        ));
        let sign = if (n - 1).is_multiple_of(2) { 1 } else { -1 };
        let mut virt = VirtualRep::default();
        for &(j, p) in &all_pairs {
            virt.add_term(p, j, sign);
        }
        Ok(CorrespondenceReport {
            q,
            n,
            entries,
            virtual_rep: virt,
            checks,
        })
    }

    pub fn table_json(&self, report: Option<&CorrespondenceReport>) -> serde_json::Value {
        serde_json::json!({
            "q": self.q(),
            "n": self.n(),
            "classes": self.group.classes().iter().map(|c| serde_json::json!({"key": c.key, "size": c.size})).collect::<Vec<_>>(),
            "irreducibles": self.table.irreducibles.iter().map(|chi| serde_json::json!({
                "degree": chi.degree_int(),
                "values": chi.values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "cuspidal_flags": self.cuspidal,
            "correspondence": report.map(|r| r.entries.iter().map(|e| serde_json::json!({
                "theta_orbit": e.theta_orbit, "pi_index": e.pi_index,
            })).collect::<Vec<_>>()),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrespondenceEntry {
    pub theta_orbit: Vec<u64>,
    pub pi_index: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrespondenceReport {
    pub q: u64,
    pub n: u32,
    pub entries: Vec<CorrespondenceEntry>,
    #[serde(serialize_with = "serialize_virtual")]
    pub virtual_rep: VirtualRep,
    pub checks: Vec<Check>,
}

fn serialize_virtual<S: serde::Serializer>(
    v: &VirtualRep,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.terms.len()))?;
    for (&(pi, theta), &k) in &v.terms {
        seq.serialize_element(&serde_json::json!({"pi": pi, "theta": theta, "multiplicity": k}))?;
    }
    seq.end()
}

#[cfg(test)]
mod tests;
