use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::json;

use super::window::{ElementSet, FiniteGroup, SymmetricWindow, MAX_DEGREE};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Largest window enumerated without an explicit opt-in.
pub const DEFAULT_CAP: usize = 5;

#[derive(Clone, Copy, Debug, Default)]
pub struct LatticeOptions {
    /// Permit `n = 6` (1455 subgroups).
    pub allow_degree_six: bool,
}

impl LatticeOptions {
    pub fn cap(&self) -> usize {
        if self.allow_degree_six {
            MAX_DEGREE
        } else {
            DEFAULT_CAP
        }
    }
}

#[derive(Clone, Debug)]
struct Subgroup {
    members: ElementSet,
    generators: Vec<usize>,
}

/// Every subgroup of `S_n`, in canonical order: by order, then by sorted
/// element indices. Index 0 is the trivial group and the last index is `S_n`.
pub struct SubgroupLattice {
    window: Arc<SymmetricWindow>,
    subgroups: Vec<Subgroup>,
    normalizer_table: Vec<usize>,
    conjugacy_classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    lookup: HashMap<ElementSet, usize>,
}

pub fn enumerate_subgroups(n: usize) -> Result<SubgroupLattice> {
    enumerate_subgroups_with(n, LatticeOptions::default())
}

pub fn enumerate_subgroups_with(n: usize, options: LatticeOptions) -> Result<SubgroupLattice> {
    let cap = options.cap();
    if n == 0 {
        return Err(Error::Domain("window size must be at least 1".into()));
    }
    if n > cap {
        let hint = if n <= MAX_DEGREE {
            " (n = 6 requires the explicit degree-six flag)"
        } else {
            ""
        };
        return Err(Error::SizeLimit(format!(
            "subgroup enumeration capped at n = {cap}, got n = {n}{hint}"
        )));
    }
    let window = SymmetricWindow::new(n)?;
    Ok(SubgroupLattice::build(window))
}

impl SubgroupLattice {
    fn build(window: Arc<SymmetricWindow>) -> Self {
        let size = window.size();
        let mut found: Vec<Subgroup> = Vec::new();
        let mut seen: HashMap<ElementSet, usize> = HashMap::new();

        // cyclic subgroups seed the search
        let mut cyclic_seen: HashMap<ElementSet, usize> = HashMap::new();
        for g in 0..size {
            let members = window.closure(&[g]);
            cyclic_seen.entry(members.clone()).or_insert(g);
            if !seen.contains_key(&members) {
                seen.insert(members.clone(), found.len());
                found.push(Subgroup {
                    members,
                    generators: vec![g],
                });
            }
        }
        // extension steps use cyclic subgroups of prime-power order only;
        // every subgroup is generated by its prime-power-order elements
        let mut extenders: Vec<usize> = cyclic_seen
            .values()
            .copied()
            .filter(|&g| is_prime_power(window.order_of(g)))
            .collect();
        extenders.sort_unstable();

        let mut next = 0;
        while next < found.len() {
            let base = found[next].clone();
            next += 1;
            for &z in &extenders {
                if base.members.contains(z) {
                    continue;
                }
                let mut gens = base.generators.clone();
                gens.push(z);
                let members = window.closure(&gens);
                if !seen.contains_key(&members) {
                    seen.insert(members.clone(), found.len());
                    found.push(Subgroup {
                        members,
                        generators: gens,
                    });
                }
            }
        }

        let mut keyed: Vec<(usize, Vec<usize>, ElementSet)> = found
            .into_iter()
            .map(|s| (s.members.len(), s.members.iter().collect(), s.members))
            .collect();
        keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        let subgroups: Vec<Subgroup> = keyed
            .into_iter()
            .map(|(_, _, members)| Subgroup {
                generators: window.small_generating_set(&members),
                members,
            })
            .collect();
        let lookup: HashMap<ElementSet, usize> = subgroups
            .iter()
            .enumerate()
            .map(|(i, s)| (s.members.clone(), i))
            .collect();

        let normalizer_table: Vec<usize> = subgroups
            .par_iter()
            .map(|h| {
                let mut normalizer = ElementSet::empty(size);
                for g in 0..size {
                    if h
                        .generators
                        .iter()
                        .all(|&x| h.members.contains(window.conjugate(x, g)))
                    {
                        normalizer.insert(g);
                    }
                }
                lookup[&normalizer]
            })
            .collect();

        let mut class_of = vec![usize::MAX; subgroups.len()];
        let mut conjugacy_classes = Vec::new();
        for i in 0..subgroups.len() {
            if class_of[i] != usize::MAX {
                continue;
            }
            let class_id = conjugacy_classes.len();
            let mut class = Vec::new();
            for g in 0..size {
                let j = lookup[&window.conjugate_set(&subgroups[i].members, g)];
                if class_of[j] == usize::MAX {
                    class_of[j] = class_id;
                    class.push(j);
                }
            }
            class.sort_unstable();
            conjugacy_classes.push(class);
        }

        Self {
            window,
            subgroups,
            normalizer_table,
            conjugacy_classes,
            class_of,
            lookup,
        }
    }

    pub fn window(&self) -> &Arc<SymmetricWindow> {
        &self.window
    }

    pub fn degree(&self) -> usize {
        self.window.degree()
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn trivial_index(&self) -> usize {
        0
    }

    pub fn full_index(&self) -> usize {
        self.subgroups.len() - 1
    }

    pub fn ambient(&self) -> FiniteGroup {
        self.subgroup(self.full_index())
    }

    pub fn subgroup(&self, i: usize) -> FiniteGroup {
        let s = &self.subgroups[i];
        FiniteGroup::from_parts(self.window.clone(), s.members.clone(), s.generators.clone())
    }

    pub fn members(&self, i: usize) -> &ElementSet {
        &self.subgroups[i].members
    }

    pub fn order(&self, i: usize) -> usize {
        self.subgroups[i].members.len()
    }

    pub fn generators(&self, i: usize) -> Vec<Permutation> {
        self.subgroups[i]
            .generators
            .iter()
            .map(|&g| self.window.element(g).clone())
            .collect()
    }

    pub fn index_of_members(&self, members: &ElementSet) -> Option<usize> {
        self.lookup.get(members).copied()
    }

    pub fn index_of(&self, group: &FiniteGroup) -> Option<usize> {
        if group.degree() != self.degree() {
            return None;
        }
        self.index_of_members(group.members())
    }

    /// Index of the subgroup generated by `gens`.
    pub fn find_generated(&self, gens: &[Permutation]) -> Result<usize> {
        let group = FiniteGroup::generated_by(&self.window, gens)?;
        self.index_of(&group)
            .ok_or_else(|| Error::Internal("generated subgroup missing from lattice".into()))
    }

    pub fn normalizer(&self, i: usize) -> usize {
        self.normalizer_table[i]
    }

    pub fn normalizer_table(&self) -> &[usize] {
        &self.normalizer_table
    }

    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.conjugacy_classes
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn is_self_normalizing(&self, i: usize) -> bool {
        self.normalizer_table[i] == i
    }

    /// Indices `H` with `N(H) = H`, ascending.
    pub fn self_normalizing_set(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_self_normalizing(i)).collect()
    }

    /// Index of `g H g⁻¹` for a window element index `g`.
    pub fn conjugate_index(&self, i: usize, g: usize) -> usize {
        self.lookup[&self.window.conjugate_set(&self.subgroups[i].members, g)]
    }

    /// Resolves a subgroup description: a bare index, `trivial`, `full`, or a
    /// generator list in cycle notation separated by `,` or `;`.
    pub fn resolve_spec(&self, spec: &str) -> Result<usize> {
        let spec = spec.trim();
        match spec {
            "trivial" | "()" | "" => return Ok(self.trivial_index()),
            "full" => return Ok(self.full_index()),
            _ => {}
        }
        if let Ok(i) = spec.parse::<usize>() {
            return if i < self.len() {
                Ok(i)
            } else {
                Err(Error::Domain(format!("subgroup index {i} out of range 0..{}", self.len())))
            };
        }
        let gens = spec
            .split([',', ';'])
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse::<Permutation>)
            .collect::<Result<Vec<_>>>()?;
        self.find_generated(&gens)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let subgroups: Vec<_> = (0..self.len())
            .map(|i| {
                json!({
                    "index": i,
                    "order": self.order(i),
                    "generators": self.generators(i).iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                    "normalizer": self.normalizer(i),
                    "class": self.class_of(i),
                })
            })
            .collect();
        json!({
            "degree": self.degree(),
            "subgroup_count": self.len(),
            "subgroups": subgroups,
            "conjugacy_classes": self.conjugacy_classes,
            "self_normalizing": self.self_normalizing_set(),
        })
    }
}

/// `N(H)` as a lattice index.
pub fn normalizer(h: usize, lattice: &SubgroupLattice) -> usize {
    lattice.normalizer(h)
}

pub fn self_normalizing_set(lattice: &SubgroupLattice) -> Vec<usize> {
    lattice.self_normalizing_set()
}

fn is_prime_power(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let p = (2..=n).find(|d| n % d == 0).expect("n ≥ 2 has a divisor");
    let mut m = n;
    while m % p == 0 {
        m /= p;
    }
    m == 1
}
