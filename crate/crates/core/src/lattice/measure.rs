//! Probability measures on a finite subgroup lattice and the normalization
//! push-forward that generates the hierarchy of AD-measures.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::enumerate::SubgroupLattice;
use crate::error::{Error, Result};
use crate::numeric::{format_rational, Rational};

/// Exact masses on the subgroups of a lattice, stored densely.
#[derive(Clone)]
pub struct LatticeMeasure<'a> {
    lattice: &'a SubgroupLattice,
    mass: Vec<Rational>,
}

impl<'a> LatticeMeasure<'a> {
    pub fn new(lattice: &'a SubgroupLattice, mass: Vec<Rational>) -> Result<Self> {
        if mass.len() != lattice.len() {
            return Err(Error::Domain(format!(
                "measure has {} entries for {} subgroups",
                mass.len(),
                lattice.len()
            )));
        }
        if mass.iter().any(|m| *m < Rational::zero()) {
            return Err(Error::Domain("negative subgroup mass".into()));
        }
        if mass.iter().cloned().sum::<Rational>() != Rational::one() {
            return Err(Error::Domain("subgroup masses do not sum to 1".into()));
        }
        Ok(Self { lattice, mass })
    }

    pub fn point_mass(lattice: &'a SubgroupLattice, h: usize) -> Self {
        let mut mass = vec![Rational::zero(); lattice.len()];
        mass[h] = Rational::one();
        Self { lattice, mass }
    }

    /// Uniform on a nonempty set of distinct indices.
    pub fn uniform_on(lattice: &'a SubgroupLattice, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Domain("uniform measure on an empty set".into()));
        }
        let share = Rational::new(1.into(), (indices.len() as u64).into());
        let mut mass = vec![Rational::zero(); lattice.len()];
        for &i in indices {
            mass[i] += &share;
        }
        Self::new(lattice, mass)
    }

    pub fn lattice(&self) -> &'a SubgroupLattice {
        self.lattice
    }

    pub fn mass(&self, h: usize) -> &Rational {
        &self.mass[h]
    }

    pub fn masses(&self) -> &[Rational] {
        &self.mass
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.mass.len()).filter(|&i| !self.mass[i].is_zero()).collect()
    }

    /// Invariance under conjugation by the window's generators.
    pub fn is_ad_invariant(&self) -> bool {
        let gens = self.lattice.window().standard_generators();
        gens.iter().all(|&g| {
            (0..self.mass.len()).all(|h| self.mass[self.lattice.conjugate_index(h, g)] == self.mass[h])
        })
    }

    /// Weights of the ergodic components (one per conjugacy class), or `None`
    /// if the measure is not a convex combination of them.
    pub fn ad_decomposition(&self) -> Option<Vec<Rational>> {
        let classes = self.lattice.conjugacy_classes();
        let weights: Vec<Rational> = classes
            .iter()
            .map(|c| c.iter().map(|&i| self.mass[i].clone()).sum())
            .collect();
        let mut rebuilt = vec![Rational::zero(); self.mass.len()];
        for (class, w) in classes.iter().zip(&weights) {
            let share = w / Rational::from_integer((class.len() as u64).into());
            for &i in class {
                rebuilt[i] = share.clone();
            }
        }
        (rebuilt == self.mass).then_some(weights)
    }

    /// Supported on self-normalizing subgroups.
    pub fn is_tnf_measure(&self) -> bool {
        self.support().iter().all(|&h| self.lattice.is_self_normalizing(h))
    }

    /// Supported on subgroups with `N(N(H)) = N(H)`.
    pub fn is_rtnf_measure(&self) -> bool {
        self.support().iter().all(|&h| {
            let n = self.lattice.normalizer(h);
            self.lattice.normalizer(n) == n
        })
    }

    /// Push-forward under `H ↦ N(H)`.
    pub fn normalization_pushforward(&self) -> LatticeMeasure<'a> {
        let mut mass = vec![Rational::zero(); self.mass.len()];
        for (h, m) in self.mass.iter().enumerate() {
            if !m.is_zero() {
                mass[self.lattice.normalizer(h)] += m;
            }
        }
        LatticeMeasure {
            lattice: self.lattice,
            mass,
        }
    }

    /// `[m, N m, N² m, …]` up to the first fixpoint (included once).
    pub fn hierarchy_chain(&self) -> Vec<LatticeMeasure<'a>> {
        let mut chain = vec![self.clone()];
        loop {
            let next = chain.last().expect("nonempty").normalization_pushforward();
            if next == *chain.last().expect("nonempty") {
                break;
            }
            chain.push(next);
            // mass only moves to strictly larger subgroups
            assert!(chain.len() <= self.lattice.len(), "normalization chain failed to terminate");
        }
        chain
    }

    /// `{index: "p/q"}` over the support.
    pub fn to_json(&self) -> serde_json::Value {
        let map: BTreeMap<String, String> = self
            .support()
            .into_iter()
            .map(|i| (i.to_string(), format_rational(&self.mass[i])))
            .collect();
        serde_json::to_value(map).expect("string map serializes")
    }
}

impl PartialEq for LatticeMeasure<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.lattice, other.lattice) && self.mass == other.mass
    }
}

impl fmt::Debug for LatticeMeasure<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.support().into_iter().map(|i| (i, format_rational(&self.mass[i]))))
            .finish()
    }
}

/// Uniform measure on each conjugacy class of subgroups.
pub fn ergodic_ad_measures(lattice: &SubgroupLattice) -> Vec<LatticeMeasure<'_>> {
    lattice
        .conjugacy_classes()
        .iter()
        .map(|class| LatticeMeasure::uniform_on(lattice, class).expect("classes are nonempty"))
        .collect()
}

pub fn normalization_pushforward<'a>(m: &LatticeMeasure<'a>) -> LatticeMeasure<'a> {
    m.normalization_pushforward()
}

pub fn hierarchy_chain<'a>(m: &LatticeMeasure<'a>) -> Vec<LatticeMeasure<'a>> {
    m.hierarchy_chain()
}
