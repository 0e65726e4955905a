use crate::{Error, Result};

pub const MAX_VARS: usize = 8;
pub const MAX_EXP: u32 = 127;

const GUARD: u64 = 0x8080_8080_8080_8080;

/// A monomial packed into a `u64`: eight bits per variable, variable 0 in the
/// most significant byte. The top bit of each byte stays clear so that
/// overflow on multiplication can be detected.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Mono(u64);

impl Mono {
    pub const ONE: Mono = Mono(0);

    fn shift(i: usize) -> u32 {
        8 * (MAX_VARS - 1 - i) as u32
    }

    pub fn var(i: usize) -> Mono {
        Mono(1u64 << Self::shift(i))
    }

    pub fn from_exps(exps: &[u32]) -> Result<Mono> {
        if exps.len() > MAX_VARS {
            return Err(Error::InvalidParameter(format!(
                "at most {MAX_VARS} variables"
            )));
        }
        let mut x = 0u64;
        for (i, &e) in exps.iter().enumerate() {
            if e > MAX_EXP {
                return Err(Error::SizeBound(format!("exponent {e} exceeds {MAX_EXP}")));
            }
            x |= (e as u64) << Self::shift(i);
        }
        Ok(Mono(x))
    }

    pub fn exp(self, i: usize) -> u32 {
        ((self.0 >> Self::shift(i)) & 0xff) as u32
    }

    pub fn exps(self, n: usize) -> Vec<u32> {
        (0..n).map(|i| self.exp(i)).collect()
    }

    pub fn weighted_degree(self, weights: &[u32]) -> u32 {
        weights
            .iter()
            .enumerate()
            .map(|(i, &w)| w * self.exp(i))
            .sum()
    }

    pub fn mul(self, other: Mono) -> Mono {
        let s = self.0 + other.0;
        assert!(s & GUARD == 0, "monomial exponent overflow");
        Mono(s)
    }

    /// Exact division; `other` must divide `self`.
    pub fn div(self, other: Mono) -> Mono {
        debug_assert!((0..MAX_VARS).all(|i| self.exp(i) >= other.exp(i)));
        Mono(self.0 - other.0)
    }

    pub fn pow(self, e: u32) -> Result<Mono> {
        let mut exps = [0u32; MAX_VARS];
        for (i, x) in exps.iter_mut().enumerate() {
            *x = self.exp(i) * e;
        }
        Mono::from_exps(&exps)
    }

    pub fn divides(self, other: Mono) -> bool {
        (0..MAX_VARS).all(|i| self.exp(i) <= other.exp(i))
    }
}
