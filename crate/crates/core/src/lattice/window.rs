//! The symmetric group `S_n` on a small window `1..=n`, with its elements in
//! canonical order and precomputed multiplication and inverse tables.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Hard upper bound on window size for exhaustive tables.
pub const MAX_DEGREE: usize = 6;

/// Set of element indices of a [`SymmetricWindow`], stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet {
    words: Vec<u64>,
}

impl ElementSet {
    pub fn empty(universe: usize) -> Self {
        Self {
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, 1u64 << (i % 64));
        let fresh = self.words[w] & b == 0;
        self.words[w] |= b;
        fresh
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] & (1u64 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        ElementSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    /// Indices in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            (0..64).filter(move |b| word & (1u64 << b) != 0).map(move |b| w * 64 + b)
        })
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct SymmetricWindow {
    degree: usize,
    elements: Vec<Permutation>,
    /// `images[e][p] = e(p + 1) - 1`
    images: Vec<Vec<u8>>,
    mul: Vec<u16>,
    inv: Vec<u16>,
    orders: Vec<u8>,
    index: HashMap<Permutation, usize>,
}

impl SymmetricWindow {
    pub fn new(degree: usize) -> Result<Arc<Self>> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::SizeLimit(format!(
                "window size {degree} outside 1..={MAX_DEGREE}"
            )));
        }
        let mut elements: Vec<Permutation> = all_arrangements(degree)
            .into_iter()
            .map(|imgs| {
                let one_based: Vec<usize> = imgs.iter().map(|&y| y as usize + 1).collect();
                Permutation::from_images(&one_based).expect("arrangement is a bijection")
            })
            .collect();
        elements.sort();
        let images: Vec<Vec<u8>> = elements
            .iter()
            .map(|g| (1..=degree).map(|p| (g.apply(p) - 1) as u8).collect())
            .collect();
        let by_images: HashMap<&[u8], usize> =
            images.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
        let size = elements.len();
        let mut mul = vec![0u16; size * size];
        let mut buf = vec![0u8; degree];
        for a in 0..size {
            for b in 0..size {
                for p in 0..degree {
                    buf[p] = images[a][images[b][p] as usize];
                }
                mul[a * size + b] = by_images[buf.as_slice()] as u16;
            }
        }
        let inv = (0..size)
            .map(|a| (0..size).find(|&b| mul[a * size + b] == 0).expect("group has inverses") as u16)
            .collect();
        let orders = elements.iter().map(|g| g.order() as u8).collect();
        let index = elements.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        Ok(Arc::new(Self {
            degree,
            elements,
            images,
            mul,
            inv,
            orders,
            index,
        }))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `n!`.
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn index_of(&self, g: &Permutation) -> Result<usize> {
        g.check_window(self.degree)?;
        Ok(self.index[g])
    }

    /// Index of `a ∘ b`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size() + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn order_of(&self, a: usize) -> usize {
        self.orders[a] as usize
    }

    /// Image of the 0-based point `p` under element `a`.
    pub fn image(&self, a: usize, p: usize) -> usize {
        self.images[a][p] as usize
    }

    /// `g a g⁻¹`.
    pub fn conjugate(&self, a: usize, g: usize) -> usize {
        self.mul(self.mul(g, a), self.inv(g))
    }

    /// Generators of the whole window group: `(1 2)` and `(1 2 … n)`.
    pub fn standard_generators(&self) -> Vec<usize> {
        if self.degree == 1 {
            return Vec::new();
        }
        let cycle: Vec<usize> = (1..=self.degree).collect();
        let mut gens = vec![self.index[&Permutation::transposition(1, 2)]];
        let long = self.index[&Permutation::from_cycles(&[cycle]).expect("one cycle")];
        if !gens.contains(&long) {
            gens.push(long);
        }
        gens
    }

    pub fn full_set(&self) -> ElementSet {
        let mut s = ElementSet::empty(self.size());
        for i in 0..self.size() {
            s.insert(i);
        }
        s
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> ElementSet {
        let mut set = ElementSet::empty(self.size());
        set.insert(0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(x, s);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        set
    }

    /// `{g h g⁻¹ : h ∈ set}`.
    pub fn conjugate_set(&self, set: &ElementSet, g: usize) -> ElementSet {
        let mut out = ElementSet::empty(self.size());
        for h in set.iter() {
            out.insert(self.conjugate(h, g));
        }
        out
    }

    /// Greedy generating set: repeatedly adds the highest-order element not
    /// yet generated. Returned sorted by element index.
    pub fn small_generating_set(&self, members: &ElementSet) -> Vec<usize> {
        let mut candidates: Vec<usize> = members.iter().collect();
        candidates.sort_by_key(|&a| (std::cmp::Reverse(self.order_of(a)), a));
        let mut gens = Vec::new();
        let mut current = self.closure(&gens);
        for c in candidates {
            if current == *members {
                break;
            }
            if !current.contains(c) {
                gens.push(c);
                current = self.closure(&gens);
            }
        }
        gens.sort_unstable();
        gens
    }
}

impl fmt::Debug for SymmetricWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S_{}", self.degree)
    }
}

/// All arrangements of `0..n` as image arrays.
fn all_arrangements(n: usize) -> Vec<Vec<u8>> {
    fn extend(prefix: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Vec<u8>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v as u8);
                extend(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// A subgroup of a symmetric window, held as an element set.
#[derive(Clone)]
pub struct FiniteGroup {
    window: Arc<SymmetricWindow>,
    members: ElementSet,
    generators: Vec<usize>,
}

impl FiniteGroup {
    pub(crate) fn from_members(window: Arc<SymmetricWindow>, members: ElementSet) -> Self {
        let generators = window.small_generating_set(&members);
        Self {
            window,
            members,
            generators,
        }
    }

    pub(crate) fn from_parts(
        window: Arc<SymmetricWindow>,
        members: ElementSet,
        generators: Vec<usize>,
    ) -> Self {
        Self {
            window,
            members,
            generators,
        }
    }

    /// The subgroup generated by `gens`; every generator must live in the window.
    pub fn generated_by(window: &Arc<SymmetricWindow>, gens: &[Permutation]) -> Result<Self> {
        let idx = gens
            .iter()
            .map(|g| window.index_of(g))
            .collect::<Result<Vec<_>>>()?;
        let members = window.closure(&idx);
        Ok(Self::from_members(window.clone(), members))
    }

    pub fn symmetric(window: &Arc<SymmetricWindow>) -> Self {
        Self::from_members(window.clone(), window.full_set())
    }

    pub fn trivial(window: &Arc<SymmetricWindow>) -> Self {
        Self::from_members(window.clone(), window.closure(&[]))
    }

    pub fn window(&self) -> &Arc<SymmetricWindow> {
        &self.window
    }

    pub fn degree(&self) -> usize {
        self.window.degree()
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &ElementSet {
        &self.members
    }

    /// Elements in canonical order.
    pub fn elements(&self) -> Vec<Permutation> {
        self.members.iter().map(|i| self.window.element(i).clone()).collect()
    }

    pub fn generators(&self) -> Vec<Permutation> {
        self.generators
            .iter()
            .map(|&i| self.window.element(i).clone())
            .collect()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.window
            .index_of(g)
            .map(|i| self.members.contains(i))
            .unwrap_or(false)
    }

    pub fn is_subgroup_of(&self, other: &FiniteGroup) -> bool {
        self.degree() == other.degree() && self.members.is_subset(&other.members)
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree() == other.degree() && self.members == other.members
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.generators().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "> ≤ S_{} (order {})", self.degree(), self.order())
    }
}
