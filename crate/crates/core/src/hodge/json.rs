//! JSON wire format for Hodge structures and diamonds.
//!
//! `{"weight":k,"dims":[[p,q,h],...],"grading":{"m":m,"pieces":[[j,"+"|"-"|"0",p,q,h],...]}}`
//! with `dims` listed by descending `p` and pieces sorted by `(j, sign, -p)`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::family::HodgeDiamondFamily;
use super::structure::{GradedHodgeStructure, Sign};

#[derive(Serialize, Deserialize)]
struct GradingWire {
    m: u32,
    pieces: Vec<(u32, String, u32, u32, u64)>,
}

#[derive(Serialize, Deserialize)]
struct HodgeWire {
    weight: u32,
    dims: Vec<(u32, u32, u64)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    grading: Option<GradingWire>,
}

impl Serialize for GradedHodgeStructure {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let grading = self.grading().map(|g| {
            let mut pieces = Vec::new();
            for (key, v) in g.pieces() {
                let k = v.len() as u32 - 1;
                for p in (0..=k).rev() {
                    let h = v[p as usize];
                    if h != 0 {
                        pieces.push((key.character, key.sign.symbol().to_string(), p, k - p, h));
                    }
                }
            }
            GradingWire {
                m: g.modulus(),
                pieces,
            }
        });
        HodgeWire {
            weight: self.weight(),
            dims: self.entries(),
            grading,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GradedHodgeStructure {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = HodgeWire::deserialize(deserializer)?;
        let pieces = match &wire.grading {
            None => None,
            Some(g) => {
                let mut out = Vec::with_capacity(g.pieces.len());
                for (j, s, p, q, h) in &g.pieces {
                    let sign = Sign::from_symbol(s)
                        .ok_or_else(|| D::Error::custom(format!("unknown sign symbol {s:?}")))?;
                    out.push((*j, sign, *p, *q, *h));
                }
                Some((g.m, out))
            }
        };
        GradedHodgeStructure::new(
            wire.weight,
            &wire.dims,
            pieces.as_ref().map(|(m, v)| (*m, v.as_slice())),
        )
        .map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyWire {
    dim: u32,
    levels: Vec<GradedHodgeStructure>,
    #[serde(default)]
    connected: Option<bool>,
}

impl Serialize for HodgeDiamondFamily {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FamilyWire {
            dim: self.dim(),
            levels: self.stored_levels().to_vec(),
            connected: Some(self.is_connected()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HodgeDiamondFamily {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = FamilyWire::deserialize(deserializer)?;
        let connected = wire
            .connected
            .unwrap_or_else(|| wire.levels.first().is_some_and(|l| l.h(0, 0) == 1));
        HodgeDiamondFamily::new(wire.dim, wire.levels, connected).map_err(D::Error::custom)
    }
}
