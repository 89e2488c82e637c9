//! Brute-force oracles written against plain vectors, independent of the
//! crate's group tables.

#![allow(dead_code)]

use std::collections::BTreeSet;

/// One-line images on `0..n`.
pub type Perm = Vec<usize>;
pub type Group = BTreeSet<Perm>;

pub fn all_perms(n: usize) -> Vec<Perm> {
    fn rec(prefix: &mut Perm, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// `x ↦ a(b(x))`.
pub fn mul(a: &Perm, b: &Perm) -> Perm {
    b.iter().map(|&x| a[x]).collect()
}

pub fn inv(a: &Perm) -> Perm {
    let mut r = vec![0; a.len()];
    for (x, &y) in a.iter().enumerate() {
        r[y] = x;
    }
    r
}

pub fn identity(n: usize) -> Perm {
    (0..n).collect()
}

pub fn closure(n: usize, gens: &[Perm]) -> Group {
    let mut group: Group = BTreeSet::from([identity(n)]);
    let mut frontier = vec![identity(n)];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = mul(g, &x);
            if group.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    group
}

pub fn conjugate_group(h: &Group, g: &Perm) -> Group {
    let gi = inv(g);
    h.iter().map(|x| mul(&mul(g, x), &gi)).collect()
}

/// Every subgroup of `S_n` as the closure of at most two elements; valid for
/// `n ≤ 5`, where every subgroup is 2-generated.
pub fn subgroups(n: usize) -> BTreeSet<Group> {
    let elems = all_perms(n);
    let mut out = BTreeSet::new();
    for a in &elems {
        for b in &elems {
            if a <= b {
                out.insert(closure(n, &[a.clone(), b.clone()]));
            }
        }
    }
    out
}

/// Subgroups of `S_n` as closed subsets, by testing all `2^{n!}` subsets.
/// Feasible for `n ≤ 3`.
pub fn subgroups_by_subsets(n: usize) -> BTreeSet<Group> {
    let elems = all_perms(n);
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << elems.len()) {
        let set: Group = (0..elems.len()).filter(|i| mask >> i & 1 == 1).map(|i| elems[i].clone()).collect();
        let closed = set.contains(&identity(n)) && set.iter().all(|a| set.iter().all(|b| set.contains(&mul(a, b))));
        if closed {
            out.insert(set);
        }
    }
    out
}

pub fn normalizer(n: usize, h: &Group) -> Group {
    all_perms(n).into_iter().filter(|g| conjugate_group(h, g) == *h).collect()
}

pub fn conjugacy_class_count(n: usize, subgroups: &BTreeSet<Group>) -> usize {
    let elems = all_perms(n);
    let mut seen: BTreeSet<Group> = BTreeSet::new();
    let mut classes = 0;
    for h in subgroups {
        if seen.contains(h) {
            continue;
        }
        classes += 1;
        for g in &elems {
            seen.insert(conjugate_group(h, g));
        }
    }
    classes
}

/// Counts perfect matchings of `0..2m` and those pairing 0 with 1 by walking
/// all of them.
pub fn matchings_with_fixed_pair(m: usize) -> (u64, u64) {
    fn rec(free: &[usize], has_pair: bool, counts: &mut (u64, u64)) {
        let Some((&first, rest)) = free.split_first() else {
            counts.0 += 1;
            counts.1 += u64::from(has_pair);
            return;
        };
        for (k, &partner) in rest.iter().enumerate() {
            let remaining: Vec<usize> = rest.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &v)| v).collect();
            rec(&remaining, has_pair || (first == 0 && partner == 1), counts);
        }
    }
    let mut counts = (0, 0);
    rec(&(0..2 * m).collect::<Vec<_>>(), false, &mut counts);
    counts
}

/// Converts 1-based cycle notation from the crate into one-line images on `0..n`.
pub fn from_crate(p: &tnf::Permutation, n: usize) -> Perm {
    (1..=n).map(|x| p.apply(x) - 1).collect()
}
