//! Exhaustive ground truth on small symmetric groups: the full subgroup
//! lattice of `S_n` with normalizers and conjugacy classes, finite actions
//! with their stabilizers and fixed-point sets, and exact measures on the
//! lattice.

mod action;
mod enumerate;
mod measure;
mod window;

pub use action::{check_transitive_tnf, is_tnf, FiniteAction, TnfReport, Transitivity};
pub use enumerate::{
    enumerate_subgroups, enumerate_subgroups_with, normalizer, self_normalizing_set, LatticeOptions,
    SubgroupLattice, DEFAULT_CAP,
};
pub use measure::{ergodic_ad_measures, hierarchy_chain, normalization_pushforward, LatticeMeasure};
pub use window::{ElementSet, FiniteGroup, SymmetricWindow, MAX_DEGREE};
