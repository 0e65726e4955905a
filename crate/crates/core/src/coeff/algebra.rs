use std::fmt;
use std::sync::Arc;

use super::{Ring, WittElement, WittRing};
use crate::{Error, Result};

/// A commutative algebra that is free of finite rank over `W/p^N`, given by
/// structure constants in a basis whose first vector is `1`.
#[derive(Clone)]
pub struct FiniteAlgebra {
    base: WittRing,
    /// `table[i][j]` holds the coordinates of `e_i * e_j`.
    table: Arc<Vec<Vec<Vec<WittElement>>>>,
    name: String,
}

impl FiniteAlgebra {
    /// `W/p^N` itself.
    pub fn base(base: WittRing) -> Self {
        let one = vec![vec![vec![base.one()]]];
        FiniteAlgebra {
            name: format!("{base:?}"),
            base,
            table: Arc::new(one),
        }
    }

    /// `W/p^N [t] / (g(t))` for a monic `g` given by its lower coefficients.
    pub fn monogenic(base: WittRing, lower: &[WittElement]) -> Result<Self> {
        let r = lower.len();
        if r == 0 {
            return Err(Error::InvalidParameter(
                "monogenic algebra needs degree >= 1".into(),
            ));
        }
        // t^k for k < 2r - 1, reduced
        let mut powers: Vec<Vec<WittElement>> = Vec::with_capacity(2 * r - 1);
        let mut cur = vec![base.zero(); r];
        cur[0] = base.one();
        for _ in 0..2 * r - 1 {
            powers.push(cur.clone());
            let top = cur[r - 1].clone();
            for i in (1..r).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = base.zero();
            for i in 0..r {
                cur[i] = base.sub(&cur[i], &base.mul(&top, &lower[i]));
            }
        }
        let table = (0..r)
            .map(|i| (0..r).map(|j| powers[i + j].clone()).collect())
            .collect();
        let name = format!("{base:?}[t]/(deg {r})");
        Ok(FiniteAlgebra {
            base,
            table: Arc::new(table),
            name,
        })
    }

    /// Checks that `e_0 = 1` and that the multiplication is commutative and associative.
    pub fn from_structure_constants(
        base: WittRing,
        table: Vec<Vec<Vec<WittElement>>>,
    ) -> Result<Self> {
        let r = table.len();
        if r == 0
            || table
                .iter()
                .any(|row| row.len() != r || row.iter().any(|v| v.len() != r))
        {
            return Err(Error::InvalidParameter(
                "structure constants must be r x r x r".into(),
            ));
        }
        let alg = FiniteAlgebra {
            name: format!("{base:?}-algebra of rank {r}"),
            base,
            table: Arc::new(table),
        };
        let e = |i: usize| alg.basis(i);
        for i in 0..r {
            if alg.mul(&e(0), &e(i)) != e(i) {
                return Err(Error::InvalidParameter(
                    "first basis vector is not the identity".into(),
                ));
            }
            for j in 0..r {
                if alg.mul(&e(i), &e(j)) != alg.mul(&e(j), &e(i)) {
                    return Err(Error::InvalidParameter(
                        "multiplication is not commutative".into(),
                    ));
                }
                for k in 0..r {
                    if alg.mul(&alg.mul(&e(i), &e(j)), &e(k))
                        != alg.mul(&e(i), &alg.mul(&e(j), &e(k)))
                    {
                        return Err(Error::InvalidParameter(
                            "multiplication is not associative".into(),
                        ));
                    }
                }
            }
        }
        Ok(alg)
    }

    pub fn rank(&self) -> usize {
        self.table.len()
    }
    pub fn base_ring(&self) -> &WittRing {
        &self.base
    }

    pub fn basis(&self, i: usize) -> Vec<WittElement> {
        let mut v = vec![self.base.zero(); self.rank()];
        v[i] = self.base.one();
        v
    }

    pub fn scalar(&self, a: &WittElement) -> Vec<WittElement> {
        let mut v = vec![self.base.zero(); self.rank()];
        v[0] = a.clone();
        v
    }

    pub fn from_coords(&self, c: Vec<WittElement>) -> Result<Vec<WittElement>> {
        if c.len() != self.rank() {
            return Err(Error::InvalidParameter(format!(
                "expected {} coordinates",
                self.rank()
            )));
        }
        Ok(c)
    }

    /// True if some power of `x` vanishes.
    pub fn is_nilpotent(&self, x: &Vec<WittElement>) -> bool {
        // x is nilpotent iff it is nilpotent mod p; then x^{rank} lies in (p)
        let bound = self.rank() * self.base.precision() as usize + 1;
        let mut acc = x.clone();
        for _ in 0..bound {
            if self.is_zero(&acc) {
                return true;
            }
            acc = self.mul(&acc, x);
        }
        self.is_zero(&acc)
    }
}

impl PartialEq for FiniteAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
            && (Arc::ptr_eq(&self.table, &other.table) || self.table == other.table)
    }
}

impl fmt::Debug for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

impl Ring for FiniteAlgebra {
    type Elem = Vec<WittElement>;

    fn zero(&self) -> Self::Elem {
        vec![self.base.zero(); self.rank()]
    }
    fn one(&self) -> Self::Elem {
        self.basis(0)
    }
    fn from_int(&self, n: i64) -> Self::Elem {
        self.scalar(&self.base.from_int(n))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if self.base.is_zero(y) {
                    continue;
                }
                let xy = self.base.mul(x, y);
                for (o, c) in out.iter_mut().zip(&self.table[i][j]) {
                    *o = self.base.add(o, &self.base.mul(&xy, c));
                }
            }
        }
        out
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|x| self.base.is_zero(x))
    }
    fn describe(&self) -> String {
        self.name.clone()
    }
}
