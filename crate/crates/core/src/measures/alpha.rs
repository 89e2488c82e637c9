use std::collections::BTreeMap;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::numeric::Weight;

/// Weights `α_i`, `i ∈ ℤ`, with finite support. Absent keys are zero.
///
/// Validated values are canonical: zero weights are dropped, positive-index
/// weights are nonincreasing in `i` and renumbered `1, 2, …`, negative-index
/// weights are nonincreasing in `|i|` and renumbered `-1, -2, …`, and the
/// total is one.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaParams<W> {
    weights: BTreeMap<i64, W>,
}

impl<W: Weight> AlphaParams<W> {
    /// Validates and canonicalizes.
    pub fn new(weights: BTreeMap<i64, W>) -> Result<Self> {
        if let Some((i, w)) = weights.iter().find(|(_, w)| w.is_negative_weight()) {
            return Err(Error::InvalidAlpha(format!("negative weight {w} at index {i}")));
        }
        let weights: BTreeMap<i64, W> = weights.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        if weights.is_empty() {
            return Err(Error::InvalidAlpha("empty support".into()));
        }
        let total = weights.values().cloned().fold(W::zero(), |a, b| a + b);
        if !total.approx_eq(&W::one()) {
            return Err(Error::InvalidAlpha(format!("weights sum to {total}, not 1")));
        }
        let mut canonical = BTreeMap::new();
        let side = |keep: fn(i64) -> bool| {
            let mut ws: Vec<W> = weights
                .iter()
                .filter(|(&i, _)| keep(i))
                .map(|(_, w)| w.clone())
                .collect();
            ws.sort_by(|a, b| b.partial_cmp(a).expect("weights are comparable"));
            ws
        };
        for (k, w) in side(|i| i > 0).into_iter().enumerate() {
            canonical.insert(k as i64 + 1, w);
        }
        for (k, w) in side(|i| i < 0).into_iter().enumerate() {
            canonical.insert(-(k as i64) - 1, w);
        }
        if let Some(w0) = weights.get(&0) {
            canonical.insert(0, w0.clone());
        }
        Ok(Self { weights: canonical })
    }

    /// Wraps weights without validation or reordering.
    pub fn from_raw(weights: BTreeMap<i64, W>) -> Self {
        Self { weights }
    }

    pub fn weights(&self) -> &BTreeMap<i64, W> {
        &self.weights
    }

    pub fn weight(&self, i: i64) -> W {
        self.weights.get(&i).cloned().unwrap_or_else(W::zero)
    }

    /// `α_0`.
    pub fn pool_weight(&self) -> W {
        self.weight(0)
    }

    /// Indices with nonzero weight, ascending.
    pub fn support(&self) -> Vec<i64> {
        self.weights
            .iter()
            .filter(|(_, w)| !w.is_zero())
            .map(|(&i, _)| i)
            .collect()
    }

    /// Parses `{"weights": {"1": "1/2", ...}}` or the bare inner map, then validates.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)?;
        Self::from_json(&value)
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let map = match value {
            Value::Object(obj) => match obj.get("weights") {
                Some(Value::Object(inner)) if obj.len() == 1 => inner,
                Some(_) if obj.len() == 1 => {
                    return Err(Error::Parse("\"weights\" must be an object".into()))
                }
                _ => obj,
            },
            _ => return Err(Error::Parse("alpha must be a JSON object".into())),
        };
        let mut weights = BTreeMap::new();
        for (key, v) in map {
            let i: i64 = key
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("alpha index {key:?} is not an integer")))?;
            let w = W::from_json(v)?;
            if weights.insert(i, w).is_some() {
                return Err(Error::Parse(format!("duplicate alpha index {i}")));
            }
        }
        Self::new(weights)
    }

    /// `{"weights": {...}}` with keys in ascending index order.
    pub fn to_json(&self) -> Value {
        let inner: Map<String, Value> = self
            .weights
            .iter()
            .map(|(i, w)| (i.to_string(), w.to_json()))
            .collect();
        let mut outer = Map::new();
        outer.insert("weights".into(), Value::Object(inner));
        Value::Object(outer)
    }

    pub fn map_weights<V: Weight>(&self, f: impl Fn(&W) -> V) -> AlphaParams<V> {
        AlphaParams {
            weights: self.weights.iter().map(|(&i, w)| (i, f(w))).collect(),
        }
    }
}

/// Validation as a free function.
pub fn validate<W: Weight>(weights: BTreeMap<i64, W>) -> Result<AlphaParams<W>> {
    AlphaParams::new(weights)
}
