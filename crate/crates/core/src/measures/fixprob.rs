//! Probability that conjugation by a permutation fixes a random signed Young
//! subgroup, and the matching character values.
//!
//! Conjugation by `g` fixes `Y_η` exactly when every cycle of `g` is
//! monochromatic under the labels, so the probability factors over cycles.
//! Two closed forms are exposed: the Newton-sum product, whose per-cycle
//! factor `Σ_{i≠0} α_i^k` omits the pool label, and the full per-cycle
//! product `Σ_i α_i^k`, which also counts cycles lying inside `B_0`. They
//! agree whenever `α_0 = 0`.

use rayon::prelude::*;
use serde_json::{json, Value};

use super::alpha::AlphaParams;
use super::sampling::{stream_rng, LabelSampler, SHARD_COUNT};
use crate::error::{Error, Result};
use crate::numeric::Weight;
use crate::perm::Permutation;

/// Largest assignment space the exhaustive oracle will walk.
pub const EXHAUSTIVE_LIMIT: u128 = 10_000_000;

/// `p_k(α) = Σ_{i≠0} α_i^k`.
pub fn newton_sum<W: Weight>(alpha: &AlphaParams<W>, k: u32) -> W {
    alpha
        .weights()
        .iter()
        .filter(|(&i, _)| i != 0)
        .fold(W::zero(), |acc, (_, w)| acc + w.powu(k))
}

/// `Σ_{i>0} α_i^k + (−1)^{k−1} Σ_{i<0} α_i^k`.
pub fn super_newton_sum<W: Weight>(alpha: &AlphaParams<W>, k: u32) -> W {
    alpha.weights().iter().filter(|(&i, _)| i != 0).fold(W::zero(), |acc, (&i, w)| {
        let term = w.powu(k);
        if i < 0 && k % 2 == 0 {
            acc - term
        } else {
            acc + term
        }
    })
}

fn cycle_product<W: Weight>(g: &Permutation, factor: impl Fn(u32) -> W) -> W {
    g.cycle_type()
        .counts()
        .iter()
        .fold(W::one(), |acc, (&k, &c)| acc * factor(k as u32).powu(c as u32))
}

/// `∏_{k≥2} p_k(α)^{c_k(g)}`.
pub fn fixed_measure_paper<W: Weight>(alpha: &AlphaParams<W>, g: &Permutation) -> W {
    cycle_product(g, |k| newton_sum(alpha, k))
}

fn full_factor<W: Weight>(alpha: &AlphaParams<W>, k: u32) -> W {
    newton_sum(alpha, k) + alpha.pool_weight().powu(k)
}

/// `∏_{k≥2} (p_k(α) + α_0^k)^{c_k(g)}`.
pub fn fixed_measure_full<W: Weight>(alpha: &AlphaParams<W>, g: &Permutation) -> W {
    cycle_product(g, |k| full_factor(alpha, k))
}

/// `∏_{k≥2} super_newton_sum(α, k)^{c_k(g)}`.
pub fn thoma_character<W: Weight>(alpha: &AlphaParams<W>, g: &Permutation) -> W {
    cycle_product(g, |k| super_newton_sum(alpha, k))
}

/// Sums `∏_x α_{label(x)}` over all labelings of the moved points under which
/// every cycle of `g` is monochromatic.
pub fn exhaustive_fixed_probability<W: Weight>(alpha: &AlphaParams<W>, g: &Permutation) -> Result<W> {
    let labels: Vec<(i64, W)> = alpha.weights().iter().map(|(&i, w)| (i, w.clone())).collect();
    let points: Vec<usize> = g.support().collect();
    let space = (labels.len() as u128).checked_pow(points.len() as u32);
    if space.is_none_or(|s| s > EXHAUSTIVE_LIMIT) {
        return Err(Error::SizeLimit(format!(
            "{}^{} label assignments exceed {EXHAUSTIVE_LIMIT}",
            labels.len(),
            points.len()
        )));
    }
    let position = |x: usize| points.binary_search(&x).expect("support point");
    let cycles: Vec<Vec<usize>> = g
        .cycles()
        .iter()
        .map(|c| c.iter().map(|&x| position(x)).collect())
        .collect();
    let mut digits = vec![0usize; points.len()];
    let mut total = W::zero();
    loop {
        let monochromatic = cycles
            .iter()
            .all(|c| c.iter().all(|&p| digits[p] == digits[c[0]]));
        if monochromatic {
            total = total + digits.iter().fold(W::one(), |acc, &d| acc * labels[d].1.clone());
        }
        // odometer over labels^points
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                return Ok(total);
            }
            digits[pos] += 1;
            if digits[pos] < labels.len() {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

#[derive(Clone, Debug)]
pub struct CycleFactor<W> {
    pub length: usize,
    pub count: usize,
    /// `p_k(α)`.
    pub paper: W,
    /// `p_k(α) + α_0^k`.
    pub full: W,
}

#[derive(Clone, Debug)]
pub struct FixProbReport<W> {
    pub permutation: Permutation,
    pub factors: Vec<CycleFactor<W>>,
    pub paper_value: W,
    pub full_value: W,
    pub mc_estimate: f64,
    pub mc_stderr: f64,
    pub sample_count: u64,
    pub seed: u64,
}

impl<W: Weight> FixProbReport<W> {
    /// The closed forms differ; happens only when `α_0 > 0` and `g` moves points.
    pub fn discrepancy(&self) -> bool {
        !self.paper_value.approx_eq(&self.full_value)
    }

    /// Estimate within `sigmas` standard errors of `target`, the standard
    /// error being that of a Bernoulli(`target`) mean over the sample count.
    pub fn within(&self, target: f64, sigmas: f64) -> bool {
        within(self.mc_estimate, target, self.sample_count, sigmas)
    }

    pub fn to_json(&self) -> Value {
        let factors: Vec<Value> = self
            .factors
            .iter()
            .map(|f| {
                json!({
                    "cycle_length": f.length,
                    "count": f.count,
                    "paper_factor": f.paper.to_json(),
                    "full_factor": f.full.to_json(),
                })
            })
            .collect();
        json!({
            "permutation": self.permutation.to_string(),
            "cycle_type": self.permutation.cycle_type(),
            "factors": factors,
            "paper_value": self.paper_value.to_json(),
            "full_value": self.full_value.to_json(),
            "discrepancy": self.discrepancy(),
            "mc_estimate": self.mc_estimate,
            "mc_stderr": self.mc_stderr,
            "sample_count": self.sample_count,
            "seed": self.seed,
            "mode": W::MODE,
        })
    }
}

pub(crate) fn within(estimate: f64, target: f64, samples: u64, sigmas: f64) -> bool {
    let sigma = (target * (1.0 - target) / samples as f64).sqrt();
    (estimate - target).abs() <= sigmas * sigma
}

/// Monte Carlo estimate of the fixed-point probability.
///
/// Only labels of moved points are drawn: the event depends on nothing else.
/// Samples are split over [`SHARD_COUNT`] seeded streams and the hit counts
/// summed, so the result does not depend on thread scheduling.
pub fn mc_fixed_probability<W: Weight>(
    alpha: &AlphaParams<W>,
    g: &Permutation,
    samples: u64,
    seed: u64,
) -> Result<FixProbReport<W>> {
    if samples == 0 {
        return Err(Error::Domain("sample count must be at least 1".into()));
    }
    let sampler = LabelSampler::new(alpha);
    let cycles = g.cycles();
    let hits: u64 = (0..SHARD_COUNT)
        .into_par_iter()
        .map(|shard| {
            let quota = samples / SHARD_COUNT + u64::from(shard < samples % SHARD_COUNT);
            let mut rng = stream_rng(seed, shard);
            let mut hits = 0u64;
            for _ in 0..quota {
                let mut fixed = true;
                // draw every label even after a miss so stream usage is fixed
                for cycle in &cycles {
                    let first = sampler.draw(&mut rng);
                    for _ in 1..cycle.len() {
                        fixed &= sampler.draw(&mut rng) == first;
                    }
                }
                hits += u64::from(fixed);
            }
            hits
        })
        .sum();
    let estimate = hits as f64 / samples as f64;
    let stderr = (estimate * (1.0 - estimate) / samples as f64).sqrt();
    let factors = g
        .cycle_type()
        .counts()
        .iter()
        .map(|(&k, &c)| CycleFactor {
            length: k,
            count: c,
            paper: newton_sum(alpha, k as u32),
            full: full_factor(alpha, k as u32),
        })
        .collect();
    Ok(FixProbReport {
        permutation: g.clone(),
        factors,
        paper_value: fixed_measure_paper(alpha, g),
        full_value: fixed_measure_full(alpha, g),
        mc_estimate: estimate,
        mc_stderr: stderr,
        sample_count: samples,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rational, Rational};

    fn alpha(pairs: &[(i64, i64, i64)]) -> AlphaParams<Rational> {
        AlphaParams::new(pairs.iter().map(|&(i, p, q)| (i, rational(p, q))).collect()).unwrap()
    }

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn newton_examples() {
        assert_eq!(newton_sum(&alpha(&[(1, 1, 2), (2, 1, 2)]), 2), rational(1, 2));
        for k in 2..6 {
            assert_eq!(newton_sum(&alpha(&[(1, 1, 1)]), k), rational(1, 1));
            assert_eq!(newton_sum(&alpha(&[(0, 1, 1)]), k), rational(0, 1));
        }
    }

    #[test]
    fn super_newton_examples() {
        assert_eq!(super_newton_sum(&alpha(&[(-1, 1, 1)]), 2), rational(-1, 1));
        assert_eq!(super_newton_sum(&alpha(&[(-1, 1, 1)]), 3), rational(1, 1));
        assert_eq!(super_newton_sum(&alpha(&[(1, 1, 2), (-1, 1, 2)]), 2), rational(0, 1));
    }

    #[test]
    fn paper_formula_examples() {
        let a = alpha(&[(1, 1, 2), (2, 1, 2)]);
        assert_eq!(fixed_measure_paper(&a, &p("(1 2)")), rational(1, 2));
        assert_eq!(fixed_measure_paper(&a, &Permutation::identity()), rational(1, 1));
        assert_eq!(fixed_measure_paper(&a, &p("(1 2)(3 4 5)")), rational(1, 8));
    }

    #[test]
    fn full_formula_examples() {
        let a = alpha(&[(0, 1, 2), (1, 1, 2)]);
        assert_eq!(fixed_measure_full(&a, &p("(1 2)")), rational(1, 2));
        assert_eq!(fixed_measure_paper(&a, &p("(1 2)")), rational(1, 4));
        let pool = alpha(&[(0, 1, 1)]);
        assert_eq!(fixed_measure_full(&pool, &p("(1 2)(3 4 5)")), rational(1, 1));
        let b = alpha(&[(1, 2, 3), (2, 1, 3)]);
        assert_eq!(fixed_measure_full(&b, &p("(1 2 3)")), fixed_measure_paper(&b, &p("(1 2 3)")));
    }

    #[test]
    fn exhaustive_examples() {
        let a = alpha(&[(1, 1, 2), (2, 1, 2)]);
        assert_eq!(exhaustive_fixed_probability(&a, &p("(1 2)")).unwrap(), rational(1, 2));
        let b = alpha(&[(1, 1, 3), (2, 1, 3), (3, 1, 3)]);
        assert_eq!(exhaustive_fixed_probability(&b, &p("(1 2 3)")).unwrap(), rational(1, 9));
        assert_eq!(exhaustive_fixed_probability(&b, &Permutation::identity()).unwrap(), rational(1, 1));
        let c = alpha(&[(0, 1, 2), (1, 1, 2)]);
        assert_eq!(exhaustive_fixed_probability(&c, &p("(1 2)")).unwrap(), rational(1, 2));
    }

    #[test]
    fn exhaustive_size_limit() {
        let many: Vec<(i64, i64, i64)> = (1..=10).map(|i| (i, 1, 10)).collect();
        let big: Vec<usize> = (1..=8).collect();
        let g = Permutation::from_cycles(&[big]).unwrap();
        assert!(matches!(exhaustive_fixed_probability(&alpha(&many), &g), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn thoma_examples() {
        for g in ["(1 2)", "(1 2 3)", "(1 2)(3 4)", "()"] {
            assert_eq!(thoma_character(&alpha(&[(1, 1, 1)]), &p(g)), rational(1, 1));
        }
        assert_eq!(thoma_character(&alpha(&[(-1, 1, 1)]), &p("(1 2)")), rational(-1, 1));
        assert_eq!(thoma_character(&alpha(&[(0, 1, 1)]), &p("(1 2 3)")), rational(0, 1));
        assert_eq!(thoma_character(&alpha(&[(0, 1, 1)]), &Permutation::identity()), rational(1, 1));
    }

    #[test]
    fn mc_examples() {
        let a = alpha(&[(1, 1, 2), (2, 1, 2)]);
        let r = mc_fixed_probability(&a, &p("(1 2)"), 100_000, 11).unwrap();
        assert!(r.within(0.5, 4.0), "{r:?}");
        assert!(!r.discrepancy());

        let r = mc_fixed_probability(&alpha(&[(1, 1, 1)]), &p("(1 2)(3 4 5)"), 1000, 3).unwrap();
        assert_eq!(r.mc_estimate, 1.0);

        let c = alpha(&[(0, 1, 2), (1, 1, 2)]);
        let r = mc_fixed_probability(&c, &p("(1 2)"), 100_000, 12).unwrap();
        assert!(r.within(0.5, 4.0), "{r:?}");
        assert!(!r.within(0.25, 4.0));
        assert!(r.discrepancy());
        assert_eq!(r.full_value, rational(1, 2));
        assert_eq!(r.paper_value, rational(1, 4));
    }

    #[test]
    fn mc_is_reproducible_and_handles_small_counts() {
        let a = alpha(&[(1, 2, 3), (-1, 1, 3)]);
        let g = p("(1 2 3)(4 5)");
        let r1 = mc_fixed_probability(&a, &g, 12_345, 9).unwrap();
        let r2 = mc_fixed_probability(&a, &g, 12_345, 9).unwrap();
        assert_eq!(r1.mc_estimate, r2.mc_estimate);
        let tiny = mc_fixed_probability(&a, &g, 3, 9).unwrap();
        assert_eq!(tiny.sample_count, 3);
        assert!(mc_fixed_probability(&a, &g, 0, 9).is_err());
    }

    #[test]
    fn report_factors_multiply_to_values() {
        let a = alpha(&[(1, 1, 3), (-1, 1, 3), (0, 1, 3)]);
        let r = mc_fixed_probability(&a, &p("(1 2)(3 4)(5 6 7)"), 10, 1).unwrap();
        let paper = r.factors.iter().fold(rational(1, 1), |acc, f| acc * f.paper.powu(f.count as u32));
        let full = r.factors.iter().fold(rational(1, 1), |acc, f| acc * f.full.powu(f.count as u32));
        assert_eq!(paper, r.paper_value);
        assert_eq!(full, r.full_value);
        let v = r.to_json();
        assert_eq!(v["mode"], "rational");
        assert_eq!(v["cycle_type"]["2"], 2);
    }
}
