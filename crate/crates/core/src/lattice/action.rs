//! Measure-preserving actions of a symmetric window on finite point sets.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use super::enumerate::SubgroupLattice;
use super::measure::LatticeMeasure;
use super::window::{ElementSet, FiniteGroup, SymmetricWindow};
use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::perm::Permutation;

/// An action of the whole window group `S_n` on points `0..points`, with an
/// invariant probability measure.
#[derive(Clone)]
pub struct FiniteAction {
    window: Arc<SymmetricWindow>,
    points: usize,
    /// `table[g * points + x]`
    table: Vec<usize>,
    measure: Vec<Rational>,
}

/// The three equivalent forms of total nonfreeness on positive-mass points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TnfReport {
    /// Fixed-point sets separate points.
    pub condition1: bool,
    /// Distinct points have distinct stabilizers.
    pub condition2: bool,
    /// The stabilizer map is injective.
    pub condition3: bool,
    pub tnf: bool,
}

impl TnfReport {
    pub fn consistent(&self) -> bool {
        self.condition1 == self.condition2 && self.condition2 == self.condition3
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transitivity {
    /// The pointwise stabilizer of the tuple must be transitive on all points.
    WholeSpace,
    /// The pointwise stabilizer must be transitive on the points outside the tuple.
    Complement,
}

impl FiniteAction {
    /// Validates the action axioms on the window's standard generators (which
    /// implies them for the whole group) and the measure.
    pub fn new(
        window: Arc<SymmetricWindow>,
        points: usize,
        table: Vec<usize>,
        measure: Vec<Rational>,
    ) -> Result<Self> {
        let size = window.size();
        if points == 0 {
            return Err(Error::InvalidAction("action needs at least one point".into()));
        }
        if table.len() != size * points || measure.len() != points {
            return Err(Error::InvalidAction("table or measure has the wrong shape".into()));
        }
        if table.iter().any(|&y| y >= points) {
            return Err(Error::InvalidAction("table maps outside the point set".into()));
        }
        if (0..points).any(|x| table[x] != x) {
            return Err(Error::InvalidAction("identity does not act trivially".into()));
        }
        for s in window.standard_generators() {
            for g in 0..size {
                let gs = window.mul(g, s);
                for x in 0..points {
                    if table[gs * points + x] != table[g * points + table[s * points + x]] {
                        return Err(Error::InvalidAction(format!(
                            "table is not a homomorphism at ({}, {}, {x})",
                            window.element(g),
                            window.element(s)
                        )));
                    }
                }
            }
        }
        if measure.iter().any(|m| *m < Rational::zero()) {
            return Err(Error::InvalidAction("negative point mass".into()));
        }
        if measure.iter().cloned().sum::<Rational>() != Rational::one() {
            return Err(Error::InvalidAction("point masses do not sum to 1".into()));
        }
        for s in window.standard_generators() {
            for x in 0..points {
                if measure[table[s * points + x]] != measure[x] {
                    return Err(Error::InvalidAction("measure is not invariant".into()));
                }
            }
        }
        Ok(Self {
            window,
            points,
            table,
            measure,
        })
    }

    fn uniform(points: usize) -> Vec<Rational> {
        vec![Rational::new(1.into(), (points as u64).into()); points]
    }

    /// `S_n` permuting `1..=n`; point `x` is the 0-based label of `x + 1`.
    pub fn natural(window: &Arc<SymmetricWindow>) -> Self {
        let n = window.degree();
        let table = (0..window.size())
            .flat_map(|g| (0..n).map(move |x| (g, x)))
            .map(|(g, x)| window.image(g, x))
            .collect();
        Self::new(window.clone(), n, table, Self::uniform(n)).expect("natural action is valid")
    }

    /// Left multiplication of `S_n` on itself.
    pub fn regular(window: &Arc<SymmetricWindow>) -> Self {
        let size = window.size();
        let table = (0..size)
            .flat_map(|g| (0..size).map(move |x| (g, x)))
            .map(|(g, x)| window.mul(g, x))
            .collect();
        Self::new(window.clone(), size, table, Self::uniform(size)).expect("regular action is valid")
    }

    /// Left action on the cosets `gH`, uniform measure.
    pub fn on_cosets(lattice: &SubgroupLattice, h: usize) -> Self {
        let window = lattice.window();
        let size = window.size();
        let members = lattice.members(h);
        // coset_of[g] = index of gH
        let mut coset_of = vec![usize::MAX; size];
        let mut count = 0;
        for g in 0..size {
            if coset_of[g] != usize::MAX {
                continue;
            }
            for x in members.iter() {
                coset_of[window.mul(g, x)] = count;
            }
            count += 1;
        }
        let mut rep = vec![0; count];
        for g in (0..size).rev() {
            rep[coset_of[g]] = g;
        }
        let table = (0..size)
            .flat_map(|g| (0..count).map(move |c| (g, c)))
            .map(|(g, c)| coset_of[window.mul(g, rep[c])])
            .collect();
        Self::new(window.clone(), count, table, Self::uniform(count)).expect("coset action is valid")
    }

    /// Conjugation on subgroups, points are lattice indices, measure `m`.
    pub fn adjoint(m: &LatticeMeasure<'_>) -> Result<Self> {
        let lattice = m.lattice();
        let size = lattice.window().size();
        let points = lattice.len();
        let mut table = Vec::with_capacity(size * points);
        for g in 0..size {
            for h in 0..points {
                table.push(lattice.conjugate_index(h, g));
            }
        }
        Self::new(lattice.window().clone(), points, table, m.masses().to_vec())
    }

    /// Moves point `x` to `relabel[x]`; the result is isomorphic to `self`.
    pub fn relabel(&self, relabel: &[usize]) -> Result<Self> {
        let distinct: HashSet<usize> = relabel.iter().copied().collect();
        if relabel.len() != self.points || distinct.len() != self.points || relabel.iter().any(|&y| y >= self.points) {
            return Err(Error::Domain("relabeling must be a bijection of the point set".into()));
        }
        let mut table = vec![0; self.table.len()];
        for g in 0..self.window.size() {
            for x in 0..self.points {
                table[g * self.points + relabel[x]] = relabel[self.act(g, x)];
            }
        }
        let mut measure = vec![Rational::zero(); self.points];
        for x in 0..self.points {
            measure[relabel[x]] = self.measure[x].clone();
        }
        Self::new(self.window.clone(), self.points, table, measure)
    }

    /// Disjoint union with masses scaled by `weight` and `1 - weight`.
    pub fn disjoint_union(&self, other: &FiniteAction, weight: Rational) -> Result<Self> {
        if self.window.degree() != other.window.degree() {
            return Err(Error::Domain("actions of different windows".into()));
        }
        if weight < Rational::zero() || weight > Rational::one() {
            return Err(Error::Domain("union weight must lie in [0, 1]".into()));
        }
        let points = self.points + other.points;
        let mut table = Vec::with_capacity(self.window.size() * points);
        for g in 0..self.window.size() {
            table.extend((0..self.points).map(|x| self.act(g, x)));
            table.extend((0..other.points).map(|x| self.points + other.act(g, x)));
        }
        let rest = Rational::one() - &weight;
        let measure = self
            .measure
            .iter()
            .map(|m| m * &weight)
            .chain(other.measure.iter().map(|m| m * &rest))
            .collect();
        Self::new(self.window.clone(), points, table, measure)
    }

    pub fn window(&self) -> &Arc<SymmetricWindow> {
        &self.window
    }

    pub fn group(&self) -> FiniteGroup {
        FiniteGroup::symmetric(&self.window)
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn measure(&self) -> &[Rational] {
        &self.measure
    }

    /// Image of point `x` under window element index `g`.
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.table[g * self.points + x]
    }

    fn check_point(&self, x: usize) -> Result<()> {
        if x >= self.points {
            return Err(Error::Domain(format!("point {x} outside 0..{}", self.points)));
        }
        Ok(())
    }

    fn positive_points(&self) -> Vec<usize> {
        (0..self.points).filter(|&x| self.measure[x] > Rational::zero()).collect()
    }

    /// `X_g = {x : g x = x}`.
    pub fn fixed_set(&self, g: &Permutation) -> Result<BTreeSet<usize>> {
        let g = self.window.index_of(g)?;
        Ok(self.fixed_set_index(g))
    }

    fn fixed_set_index(&self, g: usize) -> BTreeSet<usize> {
        (0..self.points).filter(|&x| self.act(g, x) == x).collect()
    }

    fn stabilizer_set(&self, x: usize) -> ElementSet {
        let mut set = ElementSet::empty(self.window.size());
        for g in 0..self.window.size() {
            if self.act(g, x) == x {
                set.insert(g);
            }
        }
        set
    }

    pub fn stabilizer(&self, x: usize) -> Result<FiniteGroup> {
        self.check_point(x)?;
        Ok(FiniteGroup::from_members(self.window.clone(), self.stabilizer_set(x)))
    }

    /// Classes of points with equal stabilizers, each sorted, ordered by minimum.
    pub fn iso_stable_partition(&self) -> Vec<Vec<usize>> {
        let mut blocks: HashMap<ElementSet, Vec<usize>> = HashMap::new();
        for x in 0..self.points {
            blocks.entry(self.stabilizer_set(x)).or_default().push(x);
        }
        let mut blocks: Vec<Vec<usize>> = blocks.into_values().collect();
        blocks.sort();
        blocks
    }

    /// Atoms of the algebra generated by the fixed-point sets: the common
    /// refinement of the two-block partitions `{X_g, X \ X_g}`.
    pub fn fixed_point_atoms(&self) -> Vec<Vec<usize>> {
        let mut atoms: Vec<Vec<usize>> = vec![(0..self.points).collect()];
        for g in 0..self.window.size() {
            let fixed = self.fixed_set_index(g);
            atoms = atoms
                .into_iter()
                .flat_map(|atom| {
                    let (inside, outside): (Vec<usize>, Vec<usize>) =
                        atom.into_iter().partition(|x| fixed.contains(x));
                    [inside, outside]
                })
                .filter(|a| !a.is_empty())
                .collect();
        }
        atoms.sort();
        atoms
    }

    /// Checks the three TNF conditions on positive-mass points, each by its own route.
    pub fn tnf_report(&self) -> TnfReport {
        let positive = self.positive_points();
        let is_positive = |x: &usize| self.measure[*x] > Rational::zero();

        let condition1 = self
            .fixed_point_atoms()
            .iter()
            .all(|atom| atom.iter().filter(|x| is_positive(x)).count() <= 1);

        let stabilizers: Vec<ElementSet> = positive.iter().map(|&x| self.stabilizer_set(x)).collect();
        let condition2 = (0..stabilizers.len())
            .all(|i| (i + 1..stabilizers.len()).all(|j| stabilizers[i] != stabilizers[j]));

        let images: HashSet<&ElementSet> = stabilizers.iter().collect();
        let condition3 = images.len() == positive.len();

        TnfReport {
            condition1,
            condition2,
            condition3,
            tnf: condition1 && condition2 && condition3,
        }
    }

    /// Push-forward of the point measure under `x ↦ stabilizer(x)`.
    pub fn characteristic_measure<'a>(&self, lattice: &'a SubgroupLattice) -> Result<LatticeMeasure<'a>> {
        if lattice.degree() != self.window.degree() {
            return Err(Error::Domain(format!(
                "action of S_{} against lattice of S_{}",
                self.window.degree(),
                lattice.degree()
            )));
        }
        let mut mass = vec![Rational::zero(); lattice.len()];
        for x in 0..self.points {
            let h = lattice.index_of_members(&self.stabilizer_set(x)).ok_or_else(|| {
                Error::Internal(format!("stabilizer of point {x} not found in the lattice"))
            })?;
            mass[h] += &self.measure[x];
        }
        LatticeMeasure::new(lattice, mass)
    }

    /// k-transitivity over all k-subsets of distinct points.
    pub fn is_k_transitive(&self, k: usize, variant: Transitivity) -> Result<bool> {
        if k == 0 {
            return Err(Error::Domain("k must be at least 1".into()));
        }
        if k > self.points {
            return Err(Error::Domain(format!(
                "k = {k} exceeds the number of points {}",
                self.points
            )));
        }
        let stabilizers: Vec<ElementSet> = (0..self.points).map(|x| self.stabilizer_set(x)).collect();
        let mut tuple: Vec<usize> = (0..k).collect();
        loop {
            let mut fixer = stabilizers[tuple[0]].clone();
            for &x in &tuple[1..] {
                fixer = fixer.intersection(&stabilizers[x]);
            }
            let targets: Vec<usize> = match variant {
                Transitivity::WholeSpace => (0..self.points).collect(),
                Transitivity::Complement => (0..self.points).filter(|x| !tuple.contains(x)).collect(),
            };
            // a group acts transitively on the empty set vacuously
            if let Some(&first) = targets.first() {
                let orbit: BTreeSet<usize> = fixer.iter().map(|g| self.act(g, first)).collect();
                if orbit.len() != targets.len() {
                    return Ok(false);
                }
            }
            if !next_combination(&mut tuple, self.points) {
                return Ok(true);
            }
        }
    }
}

/// Advances `c` to the next k-subset of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

pub fn is_tnf(action: &FiniteAction) -> TnfReport {
    action.tnf_report()
}

/// TNF verdict of the coset action on `G/H`.
pub fn check_transitive_tnf(lattice: &SubgroupLattice, h: usize) -> bool {
    FiniteAction::on_cosets(lattice, h).tnf_report().tnf
}
