//! JSON and text renderings of core values.

use serde_json::{json, Map, Value};
use superchar::characters::FormalCharacter;
use superchar::poly::LaurentPoly;
use superchar::weight::Weight;

/// `{"level": a, "coeffs": {"-1/2": -3, "bar1": 2}}`.
pub fn weight(w: &Weight) -> Value {
    let coeffs: Map<String, Value> = w.iter().map(|(i, c)| (i.to_string(), json!(c))).collect();
    json!({ "level": w.level, "coeffs": coeffs })
}

/// Exponent to coefficient.
pub fn poly(p: &LaurentPoly) -> Value {
    Value::Object(p.terms().map(|(e, c)| (e.to_string(), json!(c))).collect())
}

pub fn poly_from(v: &Value) -> Option<LaurentPoly> {
    let mut terms = Vec::new();
    for (e, c) in v.as_object()? {
        terms.push((e.parse().ok()?, c.as_i64()?));
    }
    Some(LaurentPoly::from_terms(terms))
}

/// Drops are keyed by the simple root `e(a)-e(b)` they count.
pub fn character(c: &FormalCharacter) -> Value {
    let order = c.borel.order();
    let terms: Vec<Value> = c
        .terms()
        .into_iter()
        .map(|(d, mult)| {
            let drop: Map<String, Value> =
                d.iter().enumerate().filter(|(_, m)| **m > 0).map(|(i, m)| (format!("e({})-e({})", order[i], order[i + 1]), json!(m))).collect();
            json!({ "drop": drop, "mult": mult })
        })
        .collect();
    json!({ "base": weight(&c.base), "depth": c.depth, "terms": terms })
}

pub fn to_string(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use superchar::weight::Index;

    #[test]
    fn poly_round_trip() {
        let p: LaurentPoly = "1+q^2".parse().unwrap();
        assert_eq!(poly(&p), json!({"0": 1, "2": 1}));
        assert_eq!(poly_from(&poly(&p)), Some(p));
        assert_eq!(poly_from(&json!({"x": 1})), None);
    }

    #[test]
    fn weight_keys_use_index_names() {
        let w = Weight::from_coeffs(2, [(Index::half(-1), -3), (Index::bar(1), 2)]);
        assert_eq!(weight(&w), json!({"level": 2, "coeffs": {"-1/2": -3, "bar1": 2}}));
    }
}
