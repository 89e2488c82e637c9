//! Seeded Bernoulli label sampling.
//!
//! Every random stream is a ChaCha8 generator seeded with
//! [`mix_seed`]`(master, stream)`, where `mix_seed` is the SplitMix64
//! finalizer applied to `master ^ (stream · 0x9E3779B97F4A7C15)`. A run with a
//! fixed master seed and a fixed stream layout is bit-reproducible regardless
//! of how streams are scheduled across threads.

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::alpha::AlphaParams;
use crate::error::{Error, Result};
use crate::numeric::Weight;
use crate::young::{SignedPartition, SignedYoungSubgroup};

/// Number of independent streams a Monte Carlo estimate is split into.
pub const SHARD_COUNT: u64 = 16;

/// SplitMix64 avalanche of a master seed and a stream counter.
pub fn mix_seed(master: u64, stream: u64) -> u64 {
    let mut z = master ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn stream_rng(master: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(master, stream))
}

/// Draws i.i.d. labels with `P(label = i) = α_i`.
#[derive(Clone, Debug)]
pub struct LabelSampler {
    labels: Vec<i64>,
    dist: WeightedIndex<f64>,
}

impl LabelSampler {
    pub fn new<W: Weight>(alpha: &AlphaParams<W>) -> Self {
        let (labels, weights): (Vec<i64>, Vec<f64>) = alpha
            .weights()
            .iter()
            .filter(|(_, w)| w.to_f64() > 0.0)
            .map(|(&i, w)| (i, w.to_f64()))
            .unzip();
        let dist = WeightedIndex::new(&weights).expect("validated alpha has positive mass");
        Self { labels, dist }
    }

    pub fn draw<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        self.labels[self.dist.sample(rng)]
    }

    pub fn support(&self) -> &[i64] {
        &self.labels
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabelSample {
    pub window: usize,
    pub labels: Vec<i64>,
    pub seed: u64,
}

impl LabelSample {
    pub fn partition(&self) -> SignedPartition {
        SignedPartition::new(self.labels.clone()).expect("window ≥ 1")
    }
}

/// `n` i.i.d. labels from stream 0 of `seed`.
pub fn sample_labels<W: Weight>(alpha: &AlphaParams<W>, n: usize, seed: u64) -> Result<LabelSample> {
    if n == 0 {
        return Err(Error::Domain("window must be at least 1".into()));
    }
    let sampler = LabelSampler::new(alpha);
    let mut rng = stream_rng(seed, 0);
    let labels = (0..n).map(|_| sampler.draw(&mut rng)).collect();
    Ok(LabelSample {
        window: n,
        labels,
        seed,
    })
}

/// The random signed Young subgroup whose blocks are the label level sets.
pub fn sample_signed_young<W: Weight>(
    alpha: &AlphaParams<W>,
    n: usize,
    seed: u64,
) -> Result<SignedYoungSubgroup> {
    Ok(SignedYoungSubgroup::new(&sample_labels(alpha, n, seed)?.partition()))
}
