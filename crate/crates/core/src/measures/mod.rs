//! Bernoulli measures `ν_α` on signed Young subgroups and their statistics.

pub mod alpha;
pub mod classify;
pub mod finetti;
pub mod fixprob;
pub mod matching;
pub mod sampling;

pub use alpha::{validate, AlphaParams};
pub use classify::{
    classify_nu, classify_sequence_action, sample_normalizer_counts, DegenerateTag, NuClassification, SampledNormalizers, SequenceClassification, Verdict,
};
pub use finetti::{definetti_estimate, independence_check, IndependenceReport};
pub use fixprob::{
    exhaustive_fixed_probability, fixed_measure_full, fixed_measure_paper, mc_fixed_probability, newton_sum,
    super_newton_sum, thoma_character, CycleFactor, FixProbReport,
};
pub use matching::{mc_part_l_overlap, part_l_overlap, OverlapEstimate};
pub use sampling::{mix_seed, sample_labels, sample_signed_young, stream_rng, LabelSample, LabelSampler, SHARD_COUNT};
