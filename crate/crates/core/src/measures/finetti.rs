//! Empirical label frequencies and the product-form check on a few coordinates.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::alpha::AlphaParams;
use super::sampling::{stream_rng, LabelSample, LabelSampler};
use crate::error::{Error, Result};
use crate::numeric::{Rational, Weight};

/// Largest coordinate count accepted by [`independence_check`].
pub const MAX_COORDINATES: usize = 3;
/// Largest joint table accepted by [`independence_check`].
pub const MAX_CELLS: usize = 1000;

/// `α̂_v = #{x : label(x) = v} / n` for each observed label `v`.
pub fn definetti_estimate(sample: &LabelSample) -> AlphaParams<Rational> {
    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    for &l in &sample.labels {
        *counts.entry(l).or_default() += 1;
    }
    let n = BigInt::from(sample.labels.len());
    AlphaParams::from_raw(
        counts
            .into_iter()
            .map(|(v, c)| (v, Rational::new(BigInt::from(c), n.clone())))
            .collect(),
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct IndependenceReport {
    pub coordinates: usize,
    pub replicates: u64,
    pub seed: u64,
    pub max_deviation: f64,
    /// Joint frequencies keyed by the label tuple.
    #[serde(skip)]
    pub joint: BTreeMap<Vec<i64>, f64>,
}

/// Draws `replicates` independent label sequences on a window of `n`, keeps
/// the first `t` coordinates, and returns the largest gap between a joint
/// cell frequency and the product of the per-coordinate marginal frequencies.
///
/// Replicate `r` uses stream `r` of `seed`.
pub fn independence_check<W: Weight>(
    alpha: &AlphaParams<W>,
    n: usize,
    t: usize,
    replicates: u64,
    seed: u64,
) -> Result<IndependenceReport> {
    if t == 0 || t > MAX_COORDINATES {
        return Err(Error::Domain(format!("coordinate count {t} outside 1..={MAX_COORDINATES}")));
    }
    if t > n {
        return Err(Error::Domain(format!("coordinate count {t} exceeds window {n}")));
    }
    if replicates == 0 {
        return Err(Error::Domain("replicate count must be at least 1".into()));
    }
    let sampler = LabelSampler::new(alpha);
    let labels = sampler.support().to_vec();
    let k = labels.len();
    let cells = k.checked_pow(t as u32).filter(|&c| c <= MAX_CELLS).ok_or_else(|| {
        Error::SizeLimit(format!("{k}^{t} joint cells exceed {MAX_CELLS}"))
    })?;

    let joint_counts: Vec<u64> = (0..replicates)
        .into_par_iter()
        .fold(
            || vec![0u64; cells],
            |mut acc, r| {
                let mut rng = stream_rng(seed, r);
                let cell = (0..t).fold(0, |cell, _| {
                    let l = sampler.draw(&mut rng);
                    cell * k + labels.binary_search(&l).expect("drawn label is in support")
                });
                acc[cell] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; cells],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let total = replicates as f64;
    let digits = |mut cell: usize| {
        let mut d = vec![0; t];
        for slot in d.iter_mut().rev() {
            *slot = cell % k;
            cell /= k;
        }
        d
    };
    let mut marginals = vec![vec![0.0; k]; t];
    for (cell, &c) in joint_counts.iter().enumerate() {
        for (coord, v) in digits(cell).into_iter().enumerate() {
            marginals[coord][v] += c as f64 / total;
        }
    }
    let mut max_deviation: f64 = 0.0;
    let mut joint = BTreeMap::new();
    for (cell, &c) in joint_counts.iter().enumerate() {
        let d = digits(cell);
        let freq = c as f64 / total;
        let product: f64 = d.iter().enumerate().map(|(coord, &v)| marginals[coord][v]).product();
        max_deviation = max_deviation.max((freq - product).abs());
        joint.insert(d.iter().map(|&v| labels[v]).collect(), freq);
    }
    Ok(IndependenceReport {
        coordinates: t,
        replicates,
        seed,
        max_deviation,
        joint,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::sampling::sample_labels;
    use crate::numeric::rational;

    fn alpha(pairs: &[(i64, i64, i64)]) -> AlphaParams<Rational> {
        AlphaParams::new(pairs.iter().map(|&(i, p, q)| (i, rational(p, q))).collect()).unwrap()
    }

    fn sample(labels: Vec<i64>) -> LabelSample {
        LabelSample {
            window: labels.len(),
            labels,
            seed: 0,
        }
    }

    #[test]
    fn counting_examples() {
        let est = definetti_estimate(&sample(vec![1, 1, 2, 1]));
        assert_eq!(est.weights(), &BTreeMap::from([(1, rational(3, 4)), (2, rational(1, 4))]));
        let est = definetti_estimate(&sample(vec![-2; 7]));
        assert_eq!(est.weights(), &BTreeMap::from([(-2, rational(1, 1))]));
    }

    #[test]
    fn estimate_sums_to_one() {
        let s = sample_labels(&alpha(&[(1, 1, 2), (-1, 1, 4), (0, 1, 4)]), 997, 4).unwrap();
        let total: Rational = definetti_estimate(&s).weights().values().sum();
        assert_eq!(total, rational(1, 1));
    }

    #[test]
    fn concentration() {
        let a = alpha(&[(1, 1, 2), (-1, 1, 2)]);
        let est = definetti_estimate(&sample_labels(&a, 10_000, 17).unwrap());
        for v in [1, -1] {
            assert!((est.weight(v).to_f64() - 0.5).abs() <= 0.03);
        }
    }

    #[test]
    fn independence_examples() {
        let a = alpha(&[(1, 1, 2), (2, 1, 2)]);
        let r = independence_check(&a, 10, 2, 100_000, 5).unwrap();
        assert!(r.max_deviation <= 0.02, "{}", r.max_deviation);
        assert_eq!(r.joint.len(), 4);

        assert_eq!(independence_check(&a, 10, 1, 1000, 5).unwrap().max_deviation, 0.0);
        let point = alpha(&[(0, 1, 1)]);
        assert_eq!(independence_check(&point, 10, 3, 1000, 5).unwrap().max_deviation, 0.0);
    }

    #[test]
    fn independence_rejects_bad_sizes() {
        let a = alpha(&[(1, 1, 2), (2, 1, 2)]);
        assert!(independence_check(&a, 10, 0, 10, 1).is_err());
        assert!(independence_check(&a, 10, 4, 10, 1).is_err());
        assert!(independence_check(&a, 1, 2, 10, 1).is_err());
        assert!(independence_check(&a, 10, 2, 0, 1).is_err());
        let wide: Vec<(i64, i64, i64)> = (1..=11).map(|i| (i, 1, 11)).collect();
        assert!(matches!(independence_check(&alpha(&wide), 10, 3, 10, 1), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn independence_is_reproducible() {
        let a = alpha(&[(1, 1, 3), (-1, 1, 3), (0, 1, 3)]);
        let r1 = independence_check(&a, 5, 3, 5000, 8).unwrap();
        let r2 = independence_check(&a, 5, 3, 5000, 8).unwrap();
        assert_eq!(r1.max_deviation, r2.max_deviation);
    }
}
