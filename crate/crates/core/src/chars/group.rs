//! `GL_n(F_q)` by enumeration, with conjugacy classes keyed by rational
//! canonical form.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::linalg::{self, Matrix};
use crate::coeff::{ff_make, poly, prime_power, FieldDesc};
use crate::{Error, Result};

/// Largest group order enumerated.
pub const MAX_GROUP_ORDER: u64 = 30_000;

/// `|GL_n(F_q)| = prod_{i<n} (q^n - q^i)`.
pub fn gl_order(q: u64, n: u32) -> u64 {
    (0..n).map(|i| q.pow(n) - q.pow(i)).product()
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjugacyClass {
    /// Invariant factors, smallest first, each as coefficients low-to-high.
    pub key: String,
    pub size: usize,
    /// Index of the first element of the class.
    pub representative: usize,
    /// Order of the elements of the class.
    pub order: u64,
}

/// The enumerated group with its class data.
#[derive(Clone, Debug)]
pub struct GlGroup {
    q: u64,
    n: u32,
    field: FieldDesc,
    elements: Vec<Matrix>,
    index: HashMap<u64, usize>,
    class_of: Vec<usize>,
    classes: Vec<ConjugacyClass>,
    inverse_class: Vec<usize>,
}

pub(crate) fn matrix_code(q: u64, m: &Matrix) -> u64 {
    m.iter()
        .flatten()
        .rev()
        .fold(0u64, |acc, &c| acc * q + c as u64)
}

/// Elementary divisors of `a` turned into invariant factors.
fn rcf_key(k: &FieldDesc, irreducibles: &[Vec<u32>], a: &Matrix) -> String {
    let n = a.len();
    let cp = linalg::charpoly(k, a);
    // partitions per irreducible factor
    let mut parts: Vec<(Vec<u32>, Vec<usize>)> = Vec::new();
    let mut rest = cp;
    for h in irreducibles {
        let dh = h.len() - 1;
        let mut mult = 0;
        loop {
            let (qt, r) = poly::divrem(k, &rest, h);
            if !r.is_empty() {
                break;
            }
            rest = qt;
            mult += 1;
        }
        if mult == 0 {
            continue;
        }
        let ha = linalg::eval_poly(k, h, a);
        let mut pw = ha.clone();
        let mut nullities = vec![0usize];
        for step in 1..=mult {
            if step > 1 {
                pw = linalg::mat_mul(k, &pw, &ha);
            }
            nullities.push(n - linalg::rank(k, pw.clone()));
        }
        // blocks of size >= s: (nu_s - nu_{s-1}) / deg h
        let ge: Vec<usize> = (1..=mult)
            .map(|s| (nullities[s] - nullities[s - 1]) / dh)
            .collect();
        let mut lambda = Vec::new();
        for s in (1..=mult).rev() {
            let exact = ge[s - 1] - ge.get(s).copied().unwrap_or(0);
            lambda.extend(std::iter::repeat_n(s, exact));
        }
        parts.push((h.clone(), lambda));
    }
    let count = parts.iter().map(|(_, l)| l.len()).max().unwrap_or(0);
    let mut factors = Vec::new();
    for j in 0..count {
        // j-th largest invariant factor
        let mut d = vec![1u32];
        for (h, lambda) in &parts {
            if let Some(&e) = lambda.get(j) {
                for _ in 0..e {
                    d = poly::mul(k, &d, h);
                }
            }
        }
        factors.push(d);
    }
    factors.reverse();
    factors
        .iter()
        .map(|f| format!("{f:?}"))
        .collect::<Vec<_>>()
        .join("|")
}

impl GlGroup {
    pub fn new(q: u64, n: u32) -> Result<Self> {
        let (p, f) = prime_power(q)
            .ok_or_else(|| Error::InvalidParameter(format!("{q} is not a prime power")))?;
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        let order = q.checked_pow(n).map(|_| gl_order(q, n));
        if order.is_none_or(|o| o > MAX_GROUP_ORDER) {
            return Err(Error::SizeBound(format!(
                "|GL_{n}(F_{q})| exceeds {MAX_GROUP_ORDER}"
            )));
        }
        let field = ff_make(p, f)?;
        let nn = n * n;
        let total = q.pow(nn);
        let nu = n as usize;
        let elements: Vec<Matrix> = (0..total)
            .into_par_iter()
            .filter_map(|mut t| {
                let m: Matrix = (0..nu)
                    .map(|_| {
                        (0..nu)
                            .map(|_| {
                                let c = (t % q) as u32;
                                t /= q;
                                c
                            })
                            .collect()
                    })
                    .collect();
                (linalg::rank(&field, m.clone()) == nu).then_some(m)
            })
            .collect();
        let index: HashMap<u64, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, m)| (matrix_code(q, m), i))
            .collect();
        let irr: Vec<Vec<u32>> = (1..=nu)
            .flat_map(|d| poly::irreducibles(&field, d))
            .collect();
        let keys: Vec<String> = elements
            .par_iter()
            .map(|m| rcf_key(&field, &irr, m))
            .collect();
        let id_key = keys[index[&matrix_code(q, &linalg::identity(nu))]].clone();
        let mut order_keys: Vec<String> = vec![id_key.clone()];
        let mut seen: HashMap<&str, usize> = HashMap::new();
        seen.insert(&id_key, 0);
        let mut class_of = vec![0usize; elements.len()];
        let mut classes: Vec<ConjugacyClass> = Vec::new();
        let mut reps: Vec<Option<usize>> = vec![None];
        let mut sizes = vec![0usize];
        for (i, key) in keys.iter().enumerate() {
            let c = match seen.get(key.as_str()) {
                Some(&c) => c,
                None => {
                    seen.insert(key, order_keys.len());
                    order_keys.push(key.clone());
                    reps.push(None);
                    sizes.push(0);
                    order_keys.len() - 1
                }
            };
            class_of[i] = c;
            sizes[c] += 1;
            if reps[c].is_none() {
                reps[c] = Some(i);
            }
        }
        let mut g = GlGroup {
            q,
            n,
            field,
            elements,
            index,
            class_of,
            classes: Vec::new(),
            inverse_class: Vec::new(),
        };
        for (c, key) in order_keys.into_iter().enumerate() {
            let rep = reps[c].unwrap();
            classes.push(ConjugacyClass {
                key,
                size: sizes[c],
                representative: rep,
                order: g.element_order(rep),
            });
        }
        g.inverse_class = classes
            .iter()
            .map(|c| g.class_of[g.inverse(c.representative)])
            .collect();
        g.classes = classes;
        Ok(g)
    }

    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn field(&self) -> &FieldDesc {
        &self.field
    }
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }
    pub fn element(&self, i: usize) -> &Matrix {
        &self.elements[i]
    }
    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }
    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }
    /// Class of `g^{-1}` for `g` in class `c`.
    pub fn inverse_class(&self, c: usize) -> usize {
        self.inverse_class[c]
    }
    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.index.get(&matrix_code(self.q, m)).copied()
    }
    pub fn identity(&self) -> usize {
        self.classes[0].representative
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let m = linalg::mat_mul(&self.field, &self.elements[a], &self.elements[b]);
        self.index[&matrix_code(self.q, &m)]
    }

    pub fn inverse(&self, a: usize) -> usize {
        let n = self.n as usize;
        let mut aug: Matrix = self.elements[a]
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .copied()
                    .chain((0..n).map(|j| (i == j) as u32))
                    .collect()
            })
            .collect();
        aug = linalg::rref(&self.field, aug).0;
        let inv: Matrix = aug.iter().map(|row| row[n..].to_vec()).collect();
        self.index[&matrix_code(self.q, &inv)]
    }

    pub fn power(&self, a: usize, e: u64) -> usize {
        let mut result = self.identity();
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    fn element_order(&self, a: usize) -> u64 {
        let id = self.index[&matrix_code(self.q, &linalg::identity(self.n as usize))];
        let mut x = a;
        let mut k = 1;
        while x != id {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u64 {
        self.classes
            .iter()
            .fold(1, |acc, c| crate::coeff::lcm(acc, c.order))
    }

    /// `|C_G(g)|` for `g` in class `c`.
    pub fn centralizer_order(&self, c: usize) -> usize {
        self.order() / self.classes[c].size
    }

    /// Class of `g^e` for `g` in class `c`.
    pub fn power_class(&self, c: usize, e: u64) -> usize {
        self.class_of[self.power(self.classes[c].representative, e)]
    }

    /// Per class, the number of its elements satisfying `pred`.
    pub fn class_counts(&self, pred: impl Fn(&Matrix) -> bool + Sync) -> Vec<usize> {
        let mut counts = vec![0usize; self.num_classes()];
        let hits: Vec<usize> = (0..self.order())
            .into_par_iter()
            .filter(|&i| pred(&self.elements[i]))
            .collect();
        for i in hits {
            counts[self.class_of[i]] += 1;
        }
        counts
    }
}

/// The companion matrix of a monic polynomial (low-to-high coefficients):
/// ones on the superdiagonal and `-c_0, ..., -c_{n-1}` in the last row.
pub fn companion(k: &FieldDesc, f: &[u32]) -> Matrix {
    let n = f.len() - 1;
    let mut m = vec![vec![0u32; n]; n];
    for i in 0..n - 1 {
        m[i][i + 1] = 1;
    }
    for j in 0..n {
        m[n - 1][j] = k.neg_code(f[j]);
    }
    m
}

/// Block boundaries of a composition of `n`, e.g. `[1, 2]` for `(1, 2)`.
fn blocks_of(comp: &[usize]) -> Vec<usize> {
    let mut blk = Vec::new();
    for (b, &s) in comp.iter().enumerate() {
        blk.extend(std::iter::repeat_n(b, s));
    }
    blk
}

/// True iff `m` lies in the standard parabolic of block sizes `comp`
/// (block upper triangular).
pub fn in_parabolic(m: &Matrix, comp: &[usize]) -> bool {
    let blk = blocks_of(comp);
    (0..m.len()).all(|i| (0..m.len()).all(|j| blk[i] <= blk[j] || m[i][j] == 0))
}

/// True iff `m` lies in the unipotent radical of that parabolic.
pub fn in_unipotent_radical(m: &Matrix, comp: &[usize]) -> bool {
    let blk = blocks_of(comp);
    (0..m.len()).all(|i| {
        (0..m.len()).all(|j| {
            let v = m[i][j];
            if blk[i] > blk[j] {
                v == 0
            } else if blk[i] == blk[j] {
                v == (i == j) as u32
            } else {
                true
            }
        })
    })
}

/// All compositions of `n` (ordered), the one-part composition last.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    // subsets of the n-1 break points, encoded as bit masks
    let mut out = Vec::new();
    for mask in (0..1u32 << (n - 1)).rev() {
        let mut comp = Vec::new();
        let mut last = 0;
        for i in 0..n - 1 {
            if mask >> i & 1 == 1 {
                comp.push(i + 1 - last);
                last = i + 1;
            }
        }
        comp.push(n - last);
        out.push(comp);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_groups() {
        for (q, n, order, classes) in [
            (2u64, 2u32, 6usize, 3usize),
            (3, 2, 48, 8),
            (2, 3, 168, 6),
            (4, 2, 180, 15),
        ] {
            let g = GlGroup::new(q, n).unwrap();
            assert_eq!(g.order(), order);
            assert_eq!(g.order() as u64, gl_order(q, n));
            assert_eq!(g.num_classes(), classes, "({q},{n})");
            assert_eq!(g.classes().iter().map(|c| c.size).sum::<usize>(), order);
            assert_eq!(g.classes()[0].size, 1);
        }
    }

    #[test]
    fn keys_are_conjugation_invariant() {
        let g = GlGroup::new(3, 2).unwrap();
        for a in 0..g.order() {
            for x in (0..g.order()).step_by(7) {
                let c = g.mul(g.mul(x, a), g.inverse(x));
                assert_eq!(g.class_of(a), g.class_of(c));
            }
        }
        // class sizes match orbit sizes computed by brute force
        for (ci, c) in g.classes().iter().enumerate() {
            let mut orbit: Vec<usize> = (0..g.order())
                .map(|x| g.mul(g.mul(x, c.representative), g.inverse(x)))
                .collect();
            orbit.sort();
            orbit.dedup();
            assert_eq!(orbit.len(), c.size, "class {ci}");
        }
    }

    #[test]
    fn companion_of_primitive() {
        let k = ff_make(2, 1).unwrap();
        let c = companion(&k, &[1, 1, 1]);
        assert_eq!(c, vec![vec![0, 1], vec![1, 1]]);
        let g = GlGroup::new(2, 2).unwrap();
        let i = g.index_of(&c).unwrap();
        assert_eq!(g.classes()[g.class_of(i)].order, 3);
    }

    #[test]
    fn parabolic_shapes() {
        assert_eq!(
            compositions(3),
            vec![vec![1, 1, 1], vec![2, 1], vec![1, 2], vec![3]]
        );
        let g = GlGroup::new(2, 3).unwrap();
        let borel = g
            .elements()
            .iter()
            .filter(|m| in_parabolic(m, &[1, 1, 1]))
            .count();
        assert_eq!(borel, 8);
        let u = g
            .elements()
            .iter()
            .filter(|m| in_unipotent_radical(m, &[1, 2]))
            .count();
        assert_eq!(u, 4);
    }
}
