//! JSON description of hierarchy families.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::nat::{parse_nat, Nat};

/// A base hierarchy family, serialized with a `kind` tag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum HierarchySpec {
    /// A finite set; `open` marks it as a prefix of an unknown larger set.
    Explicit {
        #[serde(with = "nat_list")]
        bases: Vec<Nat>,
        #[serde(default)]
        open: bool,
    },
    /// `S(b) = b·r` with ratios `head[0], head[1], …` and then `k` forever.
    Ratio {
        min: u64,
        k: u64,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        head: Vec<u64>,
    },
    /// `S(b) = b^k`.
    Power { min: u64, k: u64 },
    /// `S(b) = b_n`, a tower of `n` copies of `b`.
    Tower { min: u64, n: u64 },
    /// The singleton `{i+2}`.
    Classic { i: u64 },
    /// The ouroboros successor `base₊ᵢ`.
    Ouroboros { base: Box<HierarchySpec>, i: u64 },
    /// The minimalistic successor of `base`.
    Minimalistic { base: Box<HierarchySpec> },
    /// Level `level` of the canonical dynamical hierarchy.
    Canonical { level: u64 },
}

impl HierarchySpec {
    pub fn explicit(bases: &[u64], open: bool) -> Self {
        HierarchySpec::Explicit { bases: bases.iter().map(|&b| Nat::from(b)).collect(), open }
    }

    pub fn ratio(min: u64, k: u64) -> Self {
        HierarchySpec::Ratio { min, k, head: Vec::new() }
    }

    pub fn from_json(text: &str) -> crate::Result<Self> {
        serde_json::from_str(text).map_err(|e| crate::Error::Invalid(format!("hierarchy spec: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }
}

mod nat_list {
    use super::*;

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(u64),
        Str(String),
    }

    pub fn serialize<S: Serializer>(v: &[Nat], s: S) -> Result<S::Ok, S::Error> {
        use num_traits::ToPrimitive;
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for n in v {
            match n.to_u64() {
                Some(x) => seq.serialize_element(&x)?,
                None => seq.serialize_element(&n.to_string())?,
            }
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Nat>, D::Error> {
        let raw: Vec<Repr> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|r| match r {
                Repr::Num(x) => Ok(Nat::from(x)),
                Repr::Str(s) => parse_nat(&s).map_err(serde::de::Error::custom),
            })
            .collect()
    }
}
