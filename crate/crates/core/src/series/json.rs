use std::sync::Arc;

use serde_json::{json, Value};

use super::{Mono, SeriesRing, TruncatedSeries, EXACT};
use crate::coeff::SerialRing;
use crate::{Error, Result};

impl<R: SerialRing> TruncatedSeries<R> {
    /// `{vars, weights, degree_bound, coeff_ring, terms: [{exps, coeff}]}`;
    /// `degree_bound` is `null` for exact polynomials.
    pub fn to_json(&self) -> Value {
        let ring = self.ring();
        let n = ring.nvars();
        let terms: Vec<Value> = self
            .terms()
            .iter()
            .map(|(m, c)| json!({"exps": m.exps(n), "coeff": ring.coeff_ring().elem_to_json(c)}))
            .collect();
        json!({
            "vars": ring.vars(),
            "weights": ring.weights(),
            "degree_bound": if self.is_exact() { Value::Null } else { json!(self.prec()) },
            "coeff_ring": ring.coeff_ring().descriptor(),
            "terms": terms,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Format(format!("series JSON: {what}"));
        let vars: Vec<String> =
            serde_json::from_value(v["vars"].clone()).map_err(|_| bad("vars"))?;
        let weights: Vec<u32> =
            serde_json::from_value(v["weights"].clone()).map_err(|_| bad("weights"))?;
        let prec = match &v["degree_bound"] {
            Value::Null => EXACT,
            d => d
                .as_u64()
                .and_then(|d| u32::try_from(d).ok())
                .ok_or_else(|| bad("degree_bound"))?,
        };
        let coeff = R::from_descriptor(&v["coeff_ring"])?;
        let names: Vec<&str> = vars.iter().map(String::as_str).collect();
        let ring: Arc<SeriesRing<R>> = SeriesRing::weighted(coeff, &names, &weights)?;
        let raw = v["terms"].as_array().ok_or_else(|| bad("terms"))?;
        let mut terms = Vec::with_capacity(raw.len());
        for t in raw {
            let exps: Vec<u32> =
                serde_json::from_value(t["exps"].clone()).map_err(|_| bad("exps"))?;
            if exps.len() != vars.len() {
                return Err(bad("exponent vector length"));
            }
            let c = ring.coeff_ring().elem_from_json(&t["coeff"])?;
            terms.push((Mono::from_exps(&exps)?, c));
        }
        let s = TruncatedSeries::from_terms(&ring, prec, terms);
        if s.terms().len() != raw.len() {
            return Err(bad("duplicate, zero or out-of-range terms"));
        }
        Ok(s)
    }
}
