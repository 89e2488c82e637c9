//! Signed partitions and signed Young subgroups on a finite window.
//!
//! A window `1..=n` carries integer labels: 0 marks the pool `B_0` of
//! one-point blocks, a positive label a block acted on by its full symmetric
//! group, a negative label a block acted on by its alternating group.
//! Nonzero blocks are read as restrictions of infinite blocks, so no block
//! size constraint applies inside the window and finite-support permutations
//! never exchange two distinct nonzero blocks.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{FiniteGroup, SymmetricWindow};
use crate::perm::{Permutation, Point};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPartition")]
pub struct SignedPartition {
    window: usize,
    labels: Vec<i64>,
}

#[derive(Deserialize)]
struct RawPartition {
    window: usize,
    labels: Vec<i64>,
}

impl TryFrom<RawPartition> for SignedPartition {
    type Error = Error;

    fn try_from(raw: RawPartition) -> Result<Self> {
        if raw.window != raw.labels.len() {
            return Err(Error::Parse(format!(
                "window {} does not match {} labels",
                raw.window,
                raw.labels.len()
            )));
        }
        SignedPartition::new(raw.labels)
    }
}

impl SignedPartition {
    /// `labels[i]` is the label of point `i + 1`.
    pub fn new(labels: Vec<i64>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Domain("signed partition needs a window of at least 1".into()));
        }
        Ok(Self {
            window: labels.len(),
            labels,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("partition serializes")
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    /// Label of the 1-based point `x`.
    pub fn label(&self, x: Point) -> i64 {
        self.labels[x - 1]
    }

    /// Nonzero blocks keyed by label, points ascending.
    pub fn blocks(&self) -> BTreeMap<i64, Vec<Point>> {
        let mut blocks: BTreeMap<i64, Vec<Point>> = BTreeMap::new();
        for (i, &l) in self.labels.iter().enumerate() {
            if l != 0 {
                blocks.entry(l).or_default().push(i + 1);
            }
        }
        blocks
    }

    /// The pool of one-point blocks.
    pub fn b0(&self) -> Vec<Point> {
        (1..=self.window).filter(|&x| self.label(x) == 0).collect()
    }

    pub fn has_negative_block(&self) -> bool {
        self.labels.iter().any(|&l| l < 0)
    }

    /// Renames nonzero labels by first appearance (`1, 2, …` and `-1, -2, …`),
    /// keeping signs. Two partitions describe the same subgroup iff their
    /// canonical labels agree.
    pub fn canonical(&self) -> SignedPartition {
        let mut rename: HashMap<i64, i64> = HashMap::new();
        let (mut pos, mut neg) = (0, 0);
        let labels = self
            .labels
            .iter()
            .map(|&l| {
                if l == 0 {
                    return 0;
                }
                *rename.entry(l).or_insert_with(|| {
                    if l > 0 {
                        pos += 1;
                        pos
                    } else {
                        neg += 1;
                        -neg
                    }
                })
            })
            .collect();
        SignedPartition {
            window: self.window,
            labels,
        }
    }

    fn check(&self, g: &Permutation) -> Result<()> {
        g.check_window(self.window)
    }
}

/// `Y_η`: product of `S(B)` over positive blocks and `Alt(B)` over negative
/// blocks, acting trivially on `B_0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SignedYoungSubgroup {
    partition: SignedPartition,
}

impl SignedYoungSubgroup {
    pub fn new(partition: &SignedPartition) -> Self {
        Self {
            partition: partition.canonical(),
        }
    }

    /// The canonical partition.
    pub fn partition(&self) -> &SignedPartition {
        &self.partition
    }

    pub fn window(&self) -> usize {
        self.partition.window
    }

    /// Materializes the subgroup inside a symmetric window of the same size,
    /// generated by transpositions on positive blocks and 3-cycles on
    /// negative blocks.
    pub fn to_finite_group(&self, window: &Arc<SymmetricWindow>) -> Result<FiniteGroup> {
        if window.degree() != self.window() {
            return Err(Error::Domain(format!(
                "partition window {} against S_{}",
                self.window(),
                window.degree()
            )));
        }
        let mut gens = Vec::new();
        for (label, block) in self.partition.blocks() {
            if label > 0 {
                for pair in block.windows(2) {
                    gens.push(Permutation::transposition(pair[0], pair[1]));
                }
            } else if block.len() >= 3 {
                for &c in &block[2..] {
                    gens.push(Permutation::from_cycles(&[[block[0], block[1], c]])?);
                }
            }
        }
        FiniteGroup::generated_by(window, &gens)
    }
}

/// Membership: `g` preserves every block, fixes `B_0` pointwise, and is even
/// on every negative block.
pub fn contains(y: &SignedYoungSubgroup, g: &Permutation) -> Result<bool> {
    let eta = &y.partition;
    eta.check(g)?;
    let mut transpositions_per_block: HashMap<i64, usize> = HashMap::new();
    for cycle in g.cycles() {
        let l = eta.label(cycle[0]);
        if l == 0 || cycle.iter().any(|&x| eta.label(x) != l) {
            return Ok(false);
        }
        *transpositions_per_block.entry(l).or_insert(0) += cycle.len() - 1;
    }
    Ok(transpositions_per_block
        .iter()
        .all(|(&l, &t)| l > 0 || t % 2 == 0))
}

/// Transports labels along `g`: the label of `g(x)` becomes the old label of `x`.
pub fn ad_image(g: &Permutation, eta: &SignedPartition) -> Result<SignedPartition> {
    eta.check(g)?;
    let mut labels = eta.labels.clone();
    for x in g.support() {
        labels[g.apply(x) - 1] = eta.label(x);
    }
    SignedPartition::new(labels)
}

/// Whether conjugation by `g` fixes `Y_η` in the infinite model: `g` keeps
/// every moved point inside its block (including `B_0`).
pub fn is_fixed(g: &Permutation, eta: &SignedPartition) -> Result<bool> {
    eta.check(g)?;
    Ok(g.support().all(|x| eta.label(g.apply(x)) == eta.label(x)))
}

/// `N(Y_η)`: every nonzero block becomes positive and `B_0` (when it has at
/// least two points) becomes one positive block.
pub fn normalizer_symbolic(y: &SignedYoungSubgroup) -> SignedYoungSubgroup {
    let labels = y.partition.labels();
    let max_pos = labels.iter().copied().filter(|&l| l > 0).max().unwrap_or(0);
    let max_neg = labels.iter().copied().filter(|&l| l < 0).map(i64::abs).max().unwrap_or(0);
    let merge_b0 = labels.iter().filter(|&&l| l == 0).count() >= 2;
    let pool_label = max_pos + max_neg + 1;
    let labels = labels
        .iter()
        .map(|&l| match l {
            l if l > 0 => l,
            l if l < 0 => max_pos - l,
            _ if merge_b0 => pool_label,
            _ => 0,
        })
        .collect();
    SignedYoungSubgroup::new(&SignedPartition::new(labels).expect("same window"))
}

pub fn is_self_normalizing(y: &SignedYoungSubgroup) -> bool {
    !y.partition.has_negative_block() && y.partition.b0().len() <= 1
}

/// `N(N(Y)) = N(Y)`.
pub fn check_n2_equals_n(y: &SignedYoungSubgroup) -> bool {
    let n = normalizer_symbolic(y);
    normalizer_symbolic(&n) == n
}
