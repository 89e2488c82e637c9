use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;
use serde_json::{json, Value};

use super::alpha::AlphaParams;
use super::sampling::{mix_seed, sample_signed_young};
use crate::error::Result;
use crate::numeric::Weight;
use crate::young::{check_n2_equals_n, is_self_normalizing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "TNF")]
    Tnf,
    #[serde(rename = "RTNF-not-TNF")]
    RtnfNotTnf,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Tnf => "TNF",
            Verdict::RtnfNotTnf => "RTNF-not-TNF",
        })
    }
}

/// The three point-mass parameters and the representation each one yields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DegenerateTag {
    Identity,
    Alternating,
    Regular,
    None,
}

impl fmt::Display for DegenerateTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DegenerateTag::Identity => "identity",
            DegenerateTag::Alternating => "alternating",
            DegenerateTag::Regular => "regular",
            DegenerateTag::None => "none",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NuClassification {
    pub verdict: Verdict,
    pub degenerate: DegenerateTag,
    /// `ν_α` is a point mass.
    pub atomic: bool,
}

impl NuClassification {
    pub fn is_tnf(&self) -> bool {
        self.verdict == Verdict::Tnf
    }

    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict,
            "tnf": self.is_tnf(),
            "degenerate": self.degenerate,
            "atomic": self.atomic,
        })
    }
}

/// TNF exactly when every label with positive weight has a positive index.
pub fn classify_nu<W: Weight>(alpha: &AlphaParams<W>) -> NuClassification {
    let support = alpha.support();
    let verdict = if support.iter().all(|&i| i > 0) {
        Verdict::Tnf
    } else {
        Verdict::RtnfNotTnf
    };
    // canonical form renumbers a lone positive or negative label to ±1
    let degenerate = match support.as_slice() {
        [1] => DegenerateTag::Identity,
        [-1] => DegenerateTag::Alternating,
        [0] => DegenerateTag::Regular,
        _ => DegenerateTag::None,
    };
    NuClassification {
        verdict,
        degenerate,
        atomic: degenerate != DegenerateTag::None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceClassification {
    pub verdict: Verdict,
    /// Number of relabelings of nonzero indices that preserve the weights.
    pub symmetry: BigUint,
}

impl SequenceClassification {
    pub fn is_tnf(&self) -> bool {
        self.verdict == Verdict::Tnf
    }

    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict,
            "tnf": self.is_tnf(),
            "symmetry_size": self.symmetry.to_string(),
        })
    }
}

/// The product action on sequences with i.i.d. coordinates of law `α` is TNF
/// exactly when the nonzero-index weights are pairwise distinct.
pub fn classify_sequence_action<W: Weight>(alpha: &AlphaParams<W>) -> SequenceClassification {
    let mut weights: Vec<W> = alpha
        .weights()
        .iter()
        .filter(|(&i, w)| i != 0 && !w.is_zero())
        .map(|(_, w)| w.clone())
        .collect();
    weights.sort_by(|a, b| a.partial_cmp(b).expect("weights are comparable"));
    let mut symmetry = BigUint::one();
    let mut run = 1u64;
    for pair in weights.windows(2) {
        if pair[0].approx_eq(&pair[1]) {
            run += 1;
            symmetry *= run;
        } else {
            run = 1;
        }
    }
    let verdict = if symmetry.is_one() {
        Verdict::Tnf
    } else {
        Verdict::RtnfNotTnf
    };
    SequenceClassification { verdict, symmetry }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampledNormalizers {
    pub window: usize,
    pub samples: u64,
    pub seed: u64,
    pub self_normalizing: u64,
    pub n2_equals_n: u64,
}

/// Draws `samples` signed Young subgroups on a window of `window` points and
/// counts the self-normalizing ones and those with `N(N(Y)) = N(Y)`.
/// Sample `k` uses the master seed `mix_seed(seed, k)`.
pub fn sample_normalizer_counts<W: Weight>(
    alpha: &AlphaParams<W>,
    window: usize,
    samples: u64,
    seed: u64,
) -> Result<SampledNormalizers> {
    let mut counts = SampledNormalizers {
        window,
        samples,
        seed,
        self_normalizing: 0,
        n2_equals_n: 0,
    };
    for k in 0..samples {
        let y = sample_signed_young(alpha, window, mix_seed(seed, k))?;
        counts.self_normalizing += u64::from(is_self_normalizing(&y));
        counts.n2_equals_n += u64::from(check_n2_equals_n(&y));
    }
    Ok(counts)
}
