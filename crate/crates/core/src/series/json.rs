//! JSON form of a series.
//!
//! ```text
//! {"order":"7/2","terms":[{"t2":2,"faces":{"4":1},"num":"3","den":"1"}]}
//! ```
//! Terms come sorted by grade then monomial key; face keys are written in
//! increasing numeric order. A `"grading":"faces"` field appears only for the
//! face-count grading.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Deserialize, Serialize, Serializer};

use super::{Grading, Monomial, Order, Series};
use crate::error::{Error, Result};
use crate::rational::Q;

struct Faces<'a>(&'a [(u16, u16)]);

impl Serialize for Faces<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, e) in self.0 {
            m.serialize_entry(&k.to_string(), e)?;
        }
        m.end()
    }
}

struct Term<'a>(&'a Monomial, &'a Q);

impl Serialize for Term<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Term", 4)?;
        st.serialize_field("t2", &self.0.t2())?;
        st.serialize_field("faces", &Faces(self.0.faces()))?;
        st.serialize_field("num", &self.1.numer().to_string())?;
        st.serialize_field("den", &self.1.denom().to_string())?;
        st.end()
    }
}

impl Serialize for Series {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let faces = self.grading == Grading::Faces;
        let mut st = s.serialize_struct("Series", if faces { 3 } else { 2 })?;
        st.serialize_field("order", &self.order.to_string())?;
        if faces {
            st.serialize_field("grading", &self.grading)?;
        }
        let terms: Vec<Term> = self.sorted_terms().into_iter().map(|(m, c)| Term(m, c)).collect();
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

#[derive(Deserialize)]
struct RawTerm {
    t2: i32,
    #[serde(default)]
    faces: BTreeMap<String, u16>,
    num: String,
    den: String,
}

#[derive(Deserialize)]
struct RawSeries {
    order: String,
    #[serde(default)]
    grading: Grading,
    terms: Vec<RawTerm>,
}

impl TryFrom<RawSeries> for Series {
    type Error = Error;

    fn try_from(raw: RawSeries) -> Result<Series> {
        let order = Order::parse(&raw.order).ok_or_else(|| Error::Malformed(format!("order {:?}", raw.order)))?;
        let mut terms = BTreeMap::new();
        for t in raw.terms {
            let mut faces = Vec::with_capacity(t.faces.len());
            for (k, e) in t.faces {
                let k: u16 = k.parse().map_err(|_| Error::Malformed(format!("face index {k:?}")))?;
                if k == 0 || e == 0 {
                    return Err(Error::Malformed("zero face index or exponent".into()));
                }
                faces.push((k, e));
            }
            let num: BigInt = t.num.parse().map_err(|_| Error::Malformed(format!("numerator {:?}", t.num)))?;
            let den: BigInt = t.den.parse().map_err(|_| Error::Malformed(format!("denominator {:?}", t.den)))?;
            if den.is_zero() {
                return Err(Error::Malformed("zero denominator".into()));
            }
            let c = Q::new(num, den);
            if c.is_zero() {
                return Err(Error::Malformed("stored zero coefficient".into()));
            }
            let m = Monomial::new(t.t2, faces);
            if m.grade2(raw.grading) > order.doubled() {
                return Err(Error::Malformed(format!("term {m} beyond order {order}")));
            }
            if terms.insert(m, c).is_some() {
                return Err(Error::Malformed("duplicate monomial".into()));
            }
        }
        Ok(Series { grading: raw.grading, order, terms })
    }
}

impl<'de> Deserialize<'de> for Series {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Series, D::Error> {
        let raw = RawSeries::deserialize(d)?;
        Series::try_from(raw).map_err(serde::de::Error::custom)
    }
}

impl Series {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("series serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Series> {
        serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))
    }
}
