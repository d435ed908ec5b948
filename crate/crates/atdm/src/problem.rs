//! JSON problem files.
//!
//! A problem file is a [`ProblemSpec`] in JSON, optionally followed by a
//! `reference` block holding a known exact solution. Series literals are lists
//! of terms:
//!
//! ```json
//! [{"coeff": "-3/2", "xpow": 2, "tpow": {"a": "1", "b": "1"},
//!   "gnum": [{"a": "1", "b": "1"}], "gden": []}]
//! ```
//!
//! `gnum`/`gden` may be omitted, as may `tpow` (meaning `t⁰`).

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::engine::ProblemSpec;
use crate::error::{Error, Result};
use crate::linexp::LinExp;
use crate::series::{Series, Term};

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod rational_text {
    use std::str::FromStr;

    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Int(i) => Ok(BigRational::from_integer(i.into())),
            Repr::Text(s) => BigRational::from_str(s.trim()).map_err(|_| serde::de::Error::custom(format!("not a rational: '{s}'"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    #[serde(with = "rational_text")]
    coeff: BigRational,
    #[serde(default)]
    xpow: i32,
    #[serde(default = "LinExp::zero")]
    tpow: LinExp,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    gnum: Vec<LinExp>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    gden: Vec<LinExp>,
}

impl Serialize for Series {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .to_terms()
            .into_iter()
            .map(|t| TermRepr { coeff: t.coeff, xpow: t.xpow, tpow: t.tpow, gnum: t.gnum, gden: t.gden })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Series {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermRepr>::deserialize(d)?;
        Ok(Series::from_terms(
            terms.into_iter().map(|t| Term::new(t.coeff, t.xpow, t.tpow).with_gamma(t.gnum, t.gden)),
        ))
    }
}

/// Known exact solution attached to a problem file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub exact_u: Series,
    pub exact_v: Series,
    /// Spatial point at which point tables are evaluated.
    #[serde(default, with = "opt_rational", skip_serializing_if = "Option::is_none")]
    pub table_x: Option<BigRational>,
}

mod opt_rational {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => super::rational_text::serialize(r, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        #[derive(Deserialize)]
        struct W(#[serde(with = "super::rational_text")] BigRational);
        Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    #[serde(flatten)]
    pub spec: ProblemSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<Reference>,
}

impl ProblemFile {
    /// Parses and validates a problem file.
    pub fn parse(text: &str) -> Result<ProblemFile> {
        let file: ProblemFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.spec.validate()?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files always serialize")
    }
}

/// Hex SHA-256 of the canonical JSON form of a spec.
pub fn spec_hash(spec: &ProblemSpec) -> String {
    let canonical = serde_json::to_string(spec).expect("problem specs always serialize");
    let digest = Sha256::digest(canonical.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
