//! JSON form: `{"zeta": [n, k]}` for roots of unity, otherwise
//! `{"order": n, "num": [...], "den": [...]}` over the reduced power basis.
//! Plain integers are accepted on input.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::CycloNum;

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

impl IntRepr {
    fn from_big(b: &BigInt) -> Self {
        match b.to_i64() {
            Some(v) => IntRepr::Small(v),
            None => IntRepr::Big(b.to_string()),
        }
    }

    fn to_big(&self) -> Result<BigInt, String> {
        match self {
            IntRepr::Small(v) => Ok(BigInt::from(*v)),
            IntRepr::Big(s) => s.parse().map_err(|_| format!("not an integer: {s:?}")),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Repr {
    Int(i64),
    Zeta { zeta: (u32, i64) },
    Coords { order: u32, num: Vec<IntRepr>, den: Vec<IntRepr> },
}

impl Serialize for CycloNum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let r = self.reduced();
        let repr = match r.as_root_of_unity() {
            Some((n, k)) => Repr::Zeta { zeta: (n, k as i64) },
            None => Repr::Coords {
                order: r.order(),
                num: r.coords().iter().map(|c| IntRepr::from_big(c.numer())).collect(),
                den: r.coords().iter().map(|c| IntRepr::from_big(c.denom())).collect(),
            },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Int(k) => Ok(CycloNum::from_int(k)),
            Repr::Zeta { zeta: (n, k) } => {
                if n == 0 {
                    return Err(de::Error::custom("zeta order must be positive"));
                }
                Ok(CycloNum::root_of_unity(n, k))
            }
            Repr::Coords { order, num, den } => {
                if num.len() != den.len() {
                    return Err(de::Error::custom("num and den lengths differ"));
                }
                let mut coeffs = Vec::with_capacity(num.len());
                for (n, d) in num.iter().zip(&den) {
                    let n = n.to_big().map_err(de::Error::custom)?;
                    let d = d.to_big().map_err(de::Error::custom)?;
                    if d == BigInt::from(0) {
                        return Err(de::Error::custom("zero denominator"));
                    }
                    coeffs.push(BigRational::new(n, d));
                }
                CycloNum::from_coords(order, coeffs).map_err(de::Error::custom)
            }
        }
    }
}
