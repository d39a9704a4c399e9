use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::IntPoly;
use crate::error::{Error, Result};

/// Wire form of a polynomial: `{"n": 12, "coeffs": ["1", "0", "-1", "0", "1"]}`.
/// Coefficients are decimal strings, lowest power first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    pub coeffs: Vec<String>,
}

impl PolyJson {
    pub fn from_poly(poly: &IntPoly, n: Option<u64>) -> Self {
        Self { n, coeffs: poly.coeffs().iter().map(ToString::to_string).collect() }
    }

    pub fn to_poly(&self) -> Result<IntPoly> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|e| Error::Format(format!("bad coefficient {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntPoly::new(coeffs))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain struct serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::cyclotomic;
    use proptest::prelude::*;

    #[test]
    fn wire_format() {
        let p = cyclotomic(12).unwrap();
        let j = PolyJson::from_poly(&p, Some(12));
        assert_eq!(j.to_json(), r#"{"n":12,"coeffs":["1","0","-1","0","1"]}"#);
        let anon = PolyJson::from_json(r#"{"coeffs":["-2"]}"#).unwrap();
        assert_eq!(anon.n, None);
        assert_eq!(anon.to_poly().unwrap(), IntPoly::from_i64(&[-2]));
        assert!(PolyJson::from_json(r#"{"coeffs":["x"]}"#).unwrap().to_poly().is_err());
    }

    proptest! {
        #[test]
        fn roundtrip(c in prop::collection::vec(any::<i64>(), 0..40), n in proptest::option::of(1u64..1000)) {
            let p = IntPoly::from_i64(&c);
            let back = PolyJson::from_json(&PolyJson::from_poly(&p, n).to_json()).unwrap();
            prop_assert_eq!(back.n, n);
            prop_assert_eq!(back.to_poly().unwrap(), p);
        }
    }
}
