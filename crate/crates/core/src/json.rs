//! JSON encoding of coefficients and elements. Integers are written as JSON
//! numbers of arbitrary size.
//!
//! ```text
//! coeff:   {"a": [num, den], "b": [num, den]}            (a + b·v)
//! hall:    {"kind": "hall", "q": 2, "terms": [{"class": {"bundle": [[n, c], …],
//!           "torsion": [[point_id, [λ…]], …]}, "coeff": coeff}, …]}
//! pbw:     {"kind": "pbw", "q": 2, "terms": [{"monomial": {"c": [[n, c], …],
//!           "d": [[r, d], …]}, "coeff": coeff}, …]}
//! ```

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Number, Value};

use crate::coeff::{Coeff, GroundConfig};
use crate::combinat::Partition;
use crate::error::{HallError, Result};
use crate::hall_global::{BundleClass, HallElement, SheafClass};
use crate::hall_torsion::TorsionClass;
use crate::pbw::{PbwElement, PbwMonomial};
use crate::points::ClosedPoint;

fn bad(msg: impl Into<String>) -> HallError {
    HallError::Json(msg.into())
}

pub fn int_to_json(n: &BigInt) -> Value {
    Value::Number(Number::from_str(&n.to_string()).expect("integer literal"))
}

fn int_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => BigInt::from_str(&n.to_string()).map_err(|_| bad(format!("not an integer: {n}"))),
        _ => Err(bad(format!("expected an integer, got {v}"))),
    }
}

fn small_int<T: TryFrom<i64>>(v: &Value) -> Result<T> {
    v.as_i64()
        .and_then(|x| T::try_from(x).ok())
        .ok_or_else(|| bad(format!("integer out of range: {v}")))
}

fn rational_to_json(r: &BigRational) -> Value {
    json!([int_to_json(r.numer()), int_to_json(r.denom())])
}

fn rational_from_json(v: &Value) -> Result<BigRational> {
    match v.as_array().map(Vec::as_slice) {
        Some([n, d]) => {
            let d = int_from_json(d)?;
            if d == BigInt::from(0) {
                return Err(HallError::DivisionByZero);
            }
            Ok(BigRational::new(int_from_json(n)?, d))
        }
        _ => Err(bad(format!("expected [numerator, denominator], got {v}"))),
    }
}

pub fn coeff_to_json(c: &Coeff) -> Value {
    json!({"a": rational_to_json(c.a()), "b": rational_to_json(c.b())})
}

pub fn coeff_from_json(ground: GroundConfig, v: &Value) -> Result<Coeff> {
    let field = |k: &str| v.get(k).ok_or_else(|| bad(format!("coefficient lacks {k:?}")));
    Ok(Coeff::new(
        ground,
        rational_from_json(field("a")?)?,
        rational_from_json(field("b")?)?,
    ))
}

fn pairs<'a>(v: &'a Value, what: &str) -> Result<Vec<(&'a Value, &'a Value)>> {
    v.as_array()
        .ok_or_else(|| bad(format!("{what} must be a list")))?
        .iter()
        .map(|p| match p.as_array().map(Vec::as_slice) {
            Some([a, b]) => Ok((a, b)),
            _ => Err(bad(format!("{what} entries must be pairs, got {p}"))),
        })
        .collect()
}

pub fn torsion_to_json(t: &TorsionClass) -> Value {
    Value::Array(
        t.data()
            .iter()
            .map(|(x, l)| json!([x.id(), l.parts()]))
            .collect(),
    )
}

pub fn torsion_from_json(ground: GroundConfig, v: &Value) -> Result<TorsionClass> {
    let mut map = BTreeMap::new();
    for (x, l) in pairs(v, "torsion")? {
        let x = ClosedPoint::parse(ground, x.as_str().ok_or_else(|| bad("point id must be a string"))?)?;
        let parts: Vec<u32> = serde_json::from_value(l.clone()).map_err(|e| bad(e.to_string()))?;
        let lam = Partition::from_parts(parts).map_err(bad)?;
        if !lam.is_empty() && map.insert(x.clone(), lam).is_some() {
            return Err(bad(format!("point {x} listed twice")));
        }
    }
    Ok(TorsionClass::from_map(map))
}

fn twist_map_to_json<K: Copy + Into<i64>>(m: &BTreeMap<K, u32>) -> Value {
    Value::Array(m.iter().map(|(&k, &c)| json!([k.into(), c])).collect())
}

fn twist_map_from_json<K: Ord + TryFrom<i64>>(v: &Value, what: &str) -> Result<BTreeMap<K, u32>> {
    let mut out = BTreeMap::new();
    for (k, c) in pairs(v, what)? {
        let c: u32 = small_int(c)?;
        if c == 0 {
            return Err(bad(format!("{what} multiplicities must be positive")));
        }
        if out.insert(small_int(k)?, c).is_some() {
            return Err(bad(format!("repeated key in {what}")));
        }
    }
    Ok(out)
}

pub fn class_to_json(s: &SheafClass) -> Value {
    json!({"bundle": twist_map_to_json(s.bundle.twists()), "torsion": torsion_to_json(&s.torsion)})
}

pub fn class_from_json(ground: GroundConfig, v: &Value) -> Result<SheafClass> {
    let bundle = match v.get("bundle") {
        Some(b) => BundleClass::new(twist_map_from_json(b, "bundle")?),
        None => BundleClass::zero(),
    };
    let torsion = match v.get("torsion") {
        Some(t) => torsion_from_json(ground, t)?,
        None => TorsionClass::zero(),
    };
    Ok(SheafClass::new(bundle, torsion))
}

pub fn monomial_to_json(m: &PbwMonomial) -> Value {
    json!({"c": twist_map_to_json(m.c()), "d": twist_map_to_json(m.d())})
}

pub fn monomial_from_json(v: &Value) -> Result<PbwMonomial> {
    let c = match v.get("c") {
        Some(c) => twist_map_from_json(c, "c")?,
        None => BTreeMap::new(),
    };
    let d: BTreeMap<u32, u32> = match v.get("d") {
        Some(d) => twist_map_from_json(d, "d")?,
        None => BTreeMap::new(),
    };
    if d.contains_key(&0) {
        return Err(bad("torsion generators start at degree 1"));
    }
    Ok(PbwMonomial::new(c, d))
}

/// A decoded element of either kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Element {
    Hall(HallElement),
    Pbw(PbwElement),
}

pub fn hall_to_json(e: &HallElement) -> Value {
    let terms: Vec<Value> = e
        .iter()
        .map(|(k, c)| json!({"class": class_to_json(k), "coeff": coeff_to_json(c)}))
        .collect();
    json!({"kind": "hall", "q": e.ground().q(), "terms": terms})
}

pub fn pbw_to_json(e: &PbwElement) -> Value {
    let terms: Vec<Value> = e
        .iter()
        .map(|(k, c)| json!({"monomial": monomial_to_json(k), "coeff": coeff_to_json(c)}))
        .collect();
    json!({"kind": "pbw", "q": e.ground().q(), "terms": terms})
}

pub fn element_to_json(e: &Element) -> Value {
    match e {
        Element::Hall(h) => hall_to_json(h),
        Element::Pbw(p) => pbw_to_json(p),
    }
}

pub fn element_from_json(v: &Value) -> Result<Element> {
    let q: u32 = small_int(v.get("q").ok_or_else(|| bad("element lacks \"q\""))?)?;
    let ground = GroundConfig::new(q)?;
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("element lacks a \"terms\" list"))?;
    let coeff = |t: &Value| coeff_from_json(ground, t.get("coeff").ok_or_else(|| bad("term lacks \"coeff\""))?);
    match v.get("kind").and_then(Value::as_str) {
        Some("hall") => {
            let mut out = HallElement::zero(ground);
            for t in terms {
                let class = class_from_json(ground, t.get("class").ok_or_else(|| bad("term lacks \"class\""))?)?;
                out.add_term(class, coeff(t)?);
            }
            Ok(Element::Hall(out))
        }
        Some("pbw") => {
            let mut out = PbwElement::zero(ground);
            for t in terms {
                let m = monomial_from_json(t.get("monomial").ok_or_else(|| bad("term lacks \"monomial\""))?)?;
                out.add_term(m, coeff(t)?);
            }
            Ok(Element::Pbw(out))
        }
        other => Err(bad(format!("unknown element kind {other:?}"))),
    }
}

pub fn element_from_str(s: &str) -> Result<Element> {
    let v: Value = serde_json::from_str(s).map_err(|e| bad(e.to_string()))?;
    element_from_json(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::points::FqPoly;

    #[test]
    fn coeff_round_trip() {
        let k = GroundConfig::new(3).unwrap();
        let big = Coeff::from_int(k, BigInt::from(10).pow(40)) + k.v_pow(-7);
        for c in [k.zero(), k.qnum(3), big, k.int(-5).inv().unwrap()] {
            assert_eq!(coeff_from_json(k, &coeff_to_json(&c)).unwrap(), c);
        }
        let text = serde_json::to_string(&coeff_to_json(&k.v())).unwrap();
        assert_eq!(text, r#"{"a":[0,1],"b":[1,1]}"#);
    }

    #[test]
    fn element_round_trip() {
        let k = GroundConfig::new(2).unwrap();
        let x = ClosedPoint::finite(FqPoly::new(k, [1, 1, 1])).unwrap();
        let mut t = BTreeMap::new();
        t.insert(x, Partition::new(vec![2, 1]));
        t.insert(ClosedPoint::Infinity, Partition::row(1));
        let class = SheafClass::new(BundleClass::from_twists([-1, 3, 3]), TorsionClass::from_map(t));
        let mut e = HallElement::single(k, class, k.qnum(2));
        e.add_term(SheafClass::zero(), k.int(7));
        let s = serde_json::to_string(&hall_to_json(&e)).unwrap();
        assert_eq!(element_from_str(&s).unwrap(), Element::Hall(e));

        let m = PbwMonomial::new(BTreeMap::from([(-2, 1), (0, 3)]), BTreeMap::from([(1, 2)]));
        let p = PbwElement::single(k, m, k.v_pow(3));
        let s = serde_json::to_string(&pbw_to_json(&p)).unwrap();
        assert_eq!(element_from_str(&s).unwrap(), Element::Pbw(p));
    }

    #[test]
    fn rejects_malformed() {
        assert!(element_from_str(r#"{"kind":"hall","q":4,"terms":[]}"#).is_err());
        assert!(element_from_str(r#"{"kind":"pbw","q":2}"#).is_err());
        assert!(element_from_str(r#"{"kind":"hall","q":2,"terms":[{"class":{"torsion":[["[0,0,1]",[1]]]},"coeff":{"a":[1,1],"b":[0,1]}}]}"#).is_err());
        assert!(element_from_str(r#"{"kind":"pbw","q":2,"terms":[{"monomial":{"d":[[0,1]]},"coeff":{"a":[1,1],"b":[0,1]}}]}"#).is_err());
    }
}
