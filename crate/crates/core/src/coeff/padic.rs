use std::fmt;

use super::{Ring, SerialRing, WittElement, WittRing};
use crate::{Error, Result};

/// `p`-adic numbers `p^val * unit` of the unramified field, with the value
/// known modulo `p^prec`.
///
/// The unit is held in a [`WittRing`] of the working precision `R`, so the
/// relative precision `prec - val` never exceeds `R`. Unit digits beyond the
/// relative precision are zero, which keeps equal values bit-identical.
/// An inexact zero (`val == prec`) records that a value vanishes modulo
/// `p^prec`; the exact zero uses `val == prec == i32::MAX`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoundedPadic {
    val: i32,
    unit: WittElement,
    prec: i32,
}

const EXACT: i32 = i32::MAX;

#[derive(Clone, PartialEq)]
pub struct PadicRing {
    witt: WittRing,
}

impl BoundedPadic {
    /// Valuation; for inexact zeros this is the known precision.
    pub fn valuation(&self) -> i32 {
        self.val
    }
    pub fn precision(&self) -> i32 {
        self.prec
    }
    pub fn unit(&self) -> &WittElement {
        &self.unit
    }
    pub fn is_exact_zero(&self) -> bool {
        self.val == EXACT
    }
    /// True for the exact zero and for values known to vanish at their precision.
    pub fn is_known_zero(&self) -> bool {
        self.val == self.prec
    }
}

impl fmt::Debug for BoundedPadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact_zero() {
            write!(f, "0")
        } else if self.is_known_zero() {
            write!(f, "O(p^{})", self.prec)
        } else {
            write!(
                f,
                "p^{}*{:?} + O(p^{})",
                self.val,
                self.unit.coords(),
                self.prec
            )
        }
    }
}

impl PadicRing {
    /// `relative` is the working precision `R` of the mantissa.
    pub fn new(witt_field: super::FieldDesc, relative: u32) -> Result<Self> {
        Ok(PadicRing {
            witt: WittRing::new(witt_field, relative)?,
        })
    }

    pub fn witt(&self) -> &WittRing {
        &self.witt
    }
    pub fn relative_precision(&self) -> i32 {
        self.witt.precision() as i32
    }
    pub fn p(&self) -> u64 {
        self.witt.p()
    }

    fn exact_zero(&self) -> BoundedPadic {
        BoundedPadic {
            val: EXACT,
            unit: self.witt.zero(),
            prec: EXACT,
        }
    }

    pub fn inexact_zero(&self, prec: i32) -> BoundedPadic {
        BoundedPadic {
            val: prec,
            unit: self.witt.zero(),
            prec,
        }
    }

    /// Normalizes `p^base * x` known modulo `p^prec`.
    fn normalize(&self, base: i32, x: WittElement, prec: i32) -> BoundedPadic {
        if prec == EXACT {
            // only reachable from exact operands, handled by callers
            return self.exact_zero();
        }
        let rel = prec - base;
        if rel <= 0 {
            return self.inexact_zero(prec);
        }
        let x = self.truncate(&x, rel as u32);
        match self.witt.valuation(&x) {
            None => self.inexact_zero(prec),
            Some(w) => {
                let unit = self.witt.shift_down(&x, w);
                let val = base + w as i32;
                let unit = self.truncate(&unit, (prec - val) as u32);
                BoundedPadic { val, unit, prec }
            }
        }
    }

    /// Clears every coordinate modulo `p^k`.
    fn truncate(&self, x: &WittElement, k: u32) -> WittElement {
        if k >= self.witt.precision() {
            return x.clone();
        }
        let m = self.p().pow(k);
        self.witt
            .from_coords(&x.coords().iter().map(|&c| c % m).collect::<Vec<_>>())
    }

    /// The element `p^k`, exact.
    pub fn p_power(&self, k: i32) -> BoundedPadic {
        BoundedPadic {
            val: k,
            unit: self.witt.one(),
            prec: k + self.relative_precision(),
        }
    }

    /// Embeds a unit or zero of the working Witt ring with full relative precision.
    pub fn from_unit(&self, u: &WittElement) -> BoundedPadic {
        if self.witt.is_zero(u) {
            return self.exact_zero();
        }
        let w = self.witt.valuation(u).unwrap();
        self.normalize(0, u.clone(), w as i32 + self.relative_precision())
    }

    /// Embeds an element of `W/p^N`, known modulo `p^N`.
    pub fn from_witt(&self, r: &WittRing, x: &WittElement) -> BoundedPadic {
        let lifted = r.change_precision(&self.witt, x);
        self.normalize(0, lifted, r.precision() as i32)
    }

    pub fn teichmuller(&self, code: u32) -> BoundedPadic {
        self.from_unit(&self.witt.teichmuller(code))
    }

    /// Reduces to `W/p^N`; fails on negative valuation or lost precision.
    pub fn to_witt(&self, r: &WittRing, a: &BoundedPadic) -> Result<WittElement> {
        if a.is_exact_zero() {
            return Ok(r.zero());
        }
        if a.val < 0 {
            return Err(Error::NotIntegral(a.val));
        }
        if a.prec < r.precision() as i32 {
            return Err(Error::PrecisionExhausted(format!(
                "value known mod p^{} but p^{} requested",
                a.prec,
                r.precision()
            )));
        }
        if a.val >= r.precision() as i32 {
            return Ok(r.zero());
        }
        let u = self.witt.change_precision(r, &a.unit);
        Ok(r.shift_up(&u, a.val as u32))
    }

    /// Multiplies by `p^k` (`k` may be negative); exact.
    pub fn shift(&self, a: &BoundedPadic, k: i32) -> BoundedPadic {
        if a.is_exact_zero() {
            return a.clone();
        }
        BoundedPadic {
            val: a.val + k,
            unit: a.unit.clone(),
            prec: a.prec + k,
        }
    }

    pub fn inverse(&self, a: &BoundedPadic) -> Result<BoundedPadic> {
        if a.is_known_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv = self.witt.unit_inverse(&a.unit)?;
        let rel = a.prec - a.val;
        Ok(self.normalize(-a.val, inv, rel - a.val))
    }

    pub fn div(&self, a: &BoundedPadic, b: &BoundedPadic) -> Result<BoundedPadic> {
        Ok(self.mul(a, &self.inverse(b)?))
    }

    /// The Frobenius lift applied to the mantissa.
    pub fn sigma(&self, a: &BoundedPadic) -> BoundedPadic {
        if a.is_known_zero() {
            return a.clone();
        }
        BoundedPadic {
            val: a.val,
            unit: self.witt.sigma(&a.unit),
            prec: a.prec,
        }
    }

    /// Reduction mod `p` (requires valuation >= 0 and precision >= 1).
    pub fn reduce(&self, a: &BoundedPadic) -> Result<u32> {
        let r = WittRing::new(self.witt.field().clone(), 1)?;
        let w = self.to_witt(&r, a)?;
        Ok(r.reduce(&w))
    }
}

impl fmt::Debug for PadicRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Q_p({:?}) rel. prec {}",
            self.witt.field(),
            self.witt.precision()
        )
    }
}

impl Ring for PadicRing {
    type Elem = BoundedPadic;

    fn zero(&self) -> BoundedPadic {
        self.exact_zero()
    }
    fn one(&self) -> BoundedPadic {
        self.from_int(1)
    }
    fn from_int(&self, n: i64) -> BoundedPadic {
        if n == 0 {
            return self.exact_zero();
        }
        let p = self.p() as i64;
        let (mut m, mut v) = (n, 0);
        while m % p == 0 {
            m /= p;
            v += 1;
        }
        BoundedPadic {
            val: v,
            unit: self.witt.from_int(m),
            prec: v + self.relative_precision(),
        }
    }
    fn add(&self, a: &BoundedPadic, b: &BoundedPadic) -> BoundedPadic {
        if a.is_exact_zero() {
            return b.clone();
        }
        if b.is_exact_zero() {
            return a.clone();
        }
        let prec = a.prec.min(b.prec);
        let base = a.val.min(b.val);
        let lift = |x: &BoundedPadic| {
            if x.is_known_zero() || x.val - base >= prec - base {
                self.witt.zero()
            } else {
                self.witt.shift_up(&x.unit, (x.val - base) as u32)
            }
        };
        self.normalize(base, self.witt.add(&lift(a), &lift(b)), prec)
    }
    fn neg(&self, a: &BoundedPadic) -> BoundedPadic {
        if a.is_known_zero() {
            return a.clone();
        }
        BoundedPadic {
            val: a.val,
            unit: self.witt.neg(&a.unit),
            prec: a.prec,
        }
    }
    fn mul(&self, a: &BoundedPadic, b: &BoundedPadic) -> BoundedPadic {
        if a.is_exact_zero() || b.is_exact_zero() {
            return self.exact_zero();
        }
        let prec = (a.val.saturating_add(b.prec)).min(b.val.saturating_add(a.prec));
        if a.is_known_zero() || b.is_known_zero() {
            return self.inexact_zero(prec);
        }
        self.normalize(a.val + b.val, self.witt.mul(&a.unit, &b.unit), prec)
    }
    fn is_zero(&self, a: &BoundedPadic) -> bool {
        a.is_exact_zero()
    }
    fn describe(&self) -> String {
        format!("{self:?}")
    }
}

impl SerialRing for PadicRing {
    fn descriptor(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": "padic",
            "p": self.p(),
            "f": self.witt.degree(),
            "relative_precision": self.witt.precision(),
        })
    }
    fn from_descriptor(v: &serde_json::Value) -> Result<Self> {
        if v["kind"] != "padic" {
            return Err(Error::Format(format!(
                "expected a padic descriptor, got {v}"
            )));
        }
        let get = |k: &str| {
            v[k].as_u64()
                .ok_or_else(|| Error::Format(format!("missing {k}")))
        };
        PadicRing::new(
            super::ff_make(get("p")?, get("f")? as u32)?,
            get("relative_precision")? as u32,
        )
    }
    fn elem_to_json(&self, a: &BoundedPadic) -> serde_json::Value {
        if a.is_exact_zero() {
            return serde_json::json!("0");
        }
        serde_json::json!({
            "val": a.val,
            "prec": a.prec,
            "unit": self.witt.elem_to_json(&a.unit),
        })
    }
    fn elem_from_json(&self, v: &serde_json::Value) -> Result<BoundedPadic> {
        if v == "0" {
            return Ok(self.exact_zero());
        }
        let int = |k: &str| {
            v[k].as_i64()
                .and_then(|x| i32::try_from(x).ok())
                .ok_or_else(|| Error::Format(format!("missing {k}")))
        };
        let (val, prec) = (int("val")?, int("prec")?);
        let unit = self.witt.elem_from_json(&v["unit"])?;
        if prec < val || prec - val > self.relative_precision() {
            return Err(Error::Format(format!("inconsistent precision in {v}")));
        }
        let a = BoundedPadic { val, unit, prec };
        // reject non-canonical encodings so that round trips are bit-exact
        if self.normalize(val, a.unit.clone(), prec) != a {
            return Err(Error::Format(format!("non-canonical p-adic value {v}")));
        }
        Ok(a)
    }
}
