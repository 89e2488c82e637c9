//! Overlap of a fixed pair with a random partition into equal blocks.
//!
//! Averaging a candidate invariant measure on partitions of `l·m` points into
//! `m` blocks of size `l` over all relabelings gives the chance that a fixed
//! `l`-tuple is one block. For `l = 2` this is `1/(2m−1)`, which tends to
//! zero, so no such invariant probability measure survives the limit.

use num_bigint::BigInt;
use rand::seq::index;
use rayon::prelude::*;
use serde::Serialize;

use super::sampling::{stream_rng, SHARD_COUNT};
use crate::error::{Error, Result};
use crate::numeric::Rational;

/// `(2m−3)!! / (2m−1)!!`: matchings of the remaining `2m−2` points over all
/// matchings of `2m` points.
pub fn part_l_overlap(l: usize, m: usize) -> Result<Rational> {
    if m < 1 {
        return Err(Error::Domain("block count must be at least 1".into()));
    }
    if l != 2 {
        return Err(Error::Domain(format!(
            "exact overlap is available for l = 2 only; use the tensor estimate for l = {l}"
        )));
    }
    let double_factorial = |top: usize| -> BigInt {
        (1..=top).rev().step_by(2).map(BigInt::from).product()
    };
    let with_pair = double_factorial((2 * m).saturating_sub(3));
    let all = double_factorial(2 * m - 1);
    Ok(Rational::new(with_pair, all))
}

#[derive(Clone, Debug, Serialize)]
pub struct OverlapEstimate {
    pub block_length: usize,
    pub blocks: usize,
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl OverlapEstimate {
    pub fn within(&self, target: f64, sigmas: f64) -> bool {
        super::fixprob::within(self.estimate, target, self.samples, sigmas)
    }
}

/// Monte Carlo overlap: a uniformly random relabeling of `l·m` points is cut
/// into consecutive blocks, and the sample counts when points `0..l` land in
/// one block. Only the positions of those `l` points are drawn.
/// `l > 2` requires `tensor = true`.
pub fn mc_part_l_overlap(l: usize, m: usize, samples: u64, seed: u64, tensor: bool) -> Result<OverlapEstimate> {
    if m < 1 {
        return Err(Error::Domain("block count must be at least 1".into()));
    }
    if l < 2 {
        return Err(Error::Domain(format!("block length {l} must be at least 2")));
    }
    if l > 2 && !tensor {
        return Err(Error::Domain(format!("block length {l} requires the tensor flag")));
    }
    if samples == 0 {
        return Err(Error::Domain("sample count must be at least 1".into()));
    }
    let size = l * m;
    let hits: u64 = (0..SHARD_COUNT)
        .into_par_iter()
        .map(|shard| {
            let quota = samples / SHARD_COUNT + u64::from(shard < samples % SHARD_COUNT);
            let mut rng = stream_rng(seed, shard);
            let mut hits = 0u64;
            for _ in 0..quota {
                // positions of points 0..l under a uniform relabeling
                let slots = index::sample(&mut rng, size, l);
                let first = slots.index(0) / l;
                hits += u64::from(slots.iter().all(|s| s / l == first));
            }
            hits
        })
        .sum();
    let estimate = hits as f64 / samples as f64;
    Ok(OverlapEstimate {
        block_length: l,
        blocks: m,
        estimate,
        stderr: (estimate * (1.0 - estimate) / samples as f64).sqrt(),
        samples,
        seed,
    })
}
