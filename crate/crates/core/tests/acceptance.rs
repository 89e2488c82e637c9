//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
//!
//! Run with `cargo test -p tnf --test acceptance`.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use tnf::lattice::{
    check_transitive_tnf, enumerate_subgroups, ergodic_ad_measures, FiniteAction, SubgroupLattice,
};
use tnf::measures::{
    classify_nu, classify_sequence_action, definetti_estimate, exhaustive_fixed_probability, fixed_measure_full,
    independence_check, mc_fixed_probability, mc_part_l_overlap, mix_seed, part_l_overlap, sample_labels,
    sample_normalizer_counts, thoma_character, AlphaParams, DegenerateTag,
};
use tnf::numeric::{format_rational, rational};
use tnf::{Permutation, Rational, Weight};

const SEED: u64 = 20_240_611;
const SIGMAS: f64 = 4.0;
const MC_SAMPLES: u64 = 100_000;

type Outcome = Result<String, String>;

fn alpha(pairs: &[(i64, i64, i64)]) -> AlphaParams<Rational> {
    AlphaParams::new(pairs.iter().map(|&(i, p, q)| (i, rational(p, q))).collect()).expect("valid alpha")
}

fn perm(s: &str) -> Permutation {
    s.parse().expect("cycle notation")
}

fn perm_grid() -> Vec<Permutation> {
    ["(1 2)", "(1 2 3)", "(1 2)(3 4)", "(1 2)(3 4 5)", "()"].into_iter().map(perm).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(started: Instant, budget: Duration) -> Result<(), String> {
    let elapsed = started.elapsed();
    ensure(elapsed <= budget, || format!("took {elapsed:.1?}, budget {budget:?}"))
}

fn fixed_point_triangle() -> Outcome {
    let started = Instant::now();
    let alphas = [
        alpha(&[(1, 1, 2), (2, 1, 2)]),
        alpha(&[(1, 1, 2), (-1, 1, 2)]),
        alpha(&[(1, 2, 3), (2, 1, 3)]),
        alpha(&[(1, 1, 2), (0, 1, 2)]),
        alpha(&[(1, 1, 3), (-1, 1, 3), (0, 1, 3)]),
        alpha(&[(1, 1, 5), (2, 1, 5), (-1, 3, 5)]),
    ];
    let mut cells = 0;
    for a in &alphas {
        for g in perm_grid() {
            let exhaustive = exhaustive_fixed_probability(a, &g).map_err(|e| e.to_string())?;
            let full = fixed_measure_full(a, &g);
            ensure(exhaustive == full, || format!("α={} g={g}: exhaustive {exhaustive} ≠ full {full}", a.to_json()))?;
            let mc = mc_fixed_probability(a, &g, MC_SAMPLES, SEED).map_err(|e| e.to_string())?;
            ensure(mc.within(exhaustive.to_f64(), SIGMAS), || {
                format!("α={} g={g}: MC {} vs exact {exhaustive}", a.to_json(), mc.mc_estimate)
            })?;
            cells += 1;
        }
    }
    within_budget(started, Duration::from_secs(30))?;
    Ok(format!("{cells} cells exact and within 4σ"))
}

fn tnf_criterion_on_samples() -> Outcome {
    let positive = [alpha(&[(1, 1, 2), (2, 1, 2)]), alpha(&[(1, 2, 3), (2, 1, 3)]), alpha(&[(1, 1, 1)])];
    let with_nonpositive = [
        alpha(&[(1, 1, 2), (-1, 1, 2)]),
        alpha(&[(1, 1, 2), (0, 1, 2)]),
        alpha(&[(1, 1, 2), (-1, 1, 4), (0, 1, 4)]),
        alpha(&[(-1, 1, 1)]),
        alpha(&[(0, 1, 1)]),
    ];
    for (k, a) in positive.iter().enumerate() {
        let c = sample_normalizer_counts(a, 200, 1000, mix_seed(SEED, k as u64)).map_err(|e| e.to_string())?;
        ensure(classify_nu(a).is_tnf(), || format!("α={} not classified TNF", a.to_json()))?;
        ensure(c.self_normalizing == 1000, || {
            format!("α={}: {} of 1000 self-normalizing", a.to_json(), c.self_normalizing)
        })?;
    }
    for (k, a) in with_nonpositive.iter().enumerate() {
        let c = sample_normalizer_counts(a, 200, 1000, mix_seed(SEED, 100 + k as u64)).map_err(|e| e.to_string())?;
        ensure(!classify_nu(a).is_tnf(), || format!("α={} classified TNF", a.to_json()))?;
        ensure(c.self_normalizing == 0 && c.n2_equals_n == 1000, || {
            format!("α={}: {} self-normalizing, {} with N²=N", a.to_json(), c.self_normalizing, c.n2_equals_n)
        })?;
    }
    Ok(format!("{} α's × 1000 subgroups on window 200", positive.len() + with_nonpositive.len()))
}

fn degenerate_triple() -> Outcome {
    let grid: Vec<Permutation> = ["()", "(1 2)", "(1 2 3)", "(1 2)(3 4)", "(1 2)(3 4 5)", "(1 2 3 4)", "(1 2)(3 4)(5 6)"]
        .into_iter()
        .map(perm)
        .collect();
    type Expected = fn(&Permutation) -> Rational;
    let cases: [(AlphaParams<Rational>, DegenerateTag, Expected); 3] = [
        (alpha(&[(1, 1, 1)]), DegenerateTag::Identity, |_| rational(1, 1)),
        (alpha(&[(-1, 1, 1)]), DegenerateTag::Alternating, |g| rational(g.parity() as i64, 1)),
        (alpha(&[(0, 1, 1)]), DegenerateTag::Regular, |g| rational(g.is_identity() as i64, 1)),
    ];
    for (a, tag, chi) in &cases {
        let c = classify_nu(a);
        ensure(c.degenerate == *tag && c.atomic, || format!("α={} tagged {}", a.to_json(), c.degenerate))?;
        for g in &grid {
            let got = thoma_character(a, g);
            ensure(got == chi(g), || format!("α={} g={g}: χ = {got}", a.to_json()))?;
        }
    }
    for a in [alpha(&[(1, 1, 2), (2, 1, 2)]), alpha(&[(1, 1, 2), (-1, 1, 2)]), alpha(&[(0, 1, 2), (1, 1, 2)])] {
        let c = classify_nu(&a);
        ensure(c.degenerate == DegenerateTag::None && !c.atomic, || format!("α={} tagged degenerate", a.to_json()))?;
    }
    Ok(format!("3 tags, {} permutations each", grid.len()))
}

fn corpus(l3: &SubgroupLattice, l4: &SubgroupLattice) -> Vec<(String, FiniteAction)> {
    let mut out = Vec::new();
    for l in [l3, l4] {
        let n = l.degree();
        out.push((format!("natural S_{n}"), FiniteAction::natural(l.window())));
        out.push((format!("regular S_{n}"), FiniteAction::regular(l.window())));
        for (c, class) in l.conjugacy_classes().iter().enumerate() {
            out.push((format!("S_{n}/H class {c}"), FiniteAction::on_cosets(l, class[0])));
        }
    }
    let mixed = FiniteAction::natural(l4.window())
        .disjoint_union(&FiniteAction::regular(l4.window()), rational(1, 3))
        .expect("same window");
    out.push(("natural ⊔ regular S_4".into(), mixed));
    out
}

fn condition_equivalence() -> Outcome {
    let started = Instant::now();
    let l3 = enumerate_subgroups(3).map_err(|e| e.to_string())?;
    let l4 = enumerate_subgroups(4).map_err(|e| e.to_string())?;
    let actions = corpus(&l3, &l4);
    let mut tnf = 0;
    for (name, a) in &actions {
        let r = a.tnf_report();
        ensure(r.consistent(), || format!("{name}: {r:?}"))?;
        tnf += usize::from(r.tnf);
    }
    within_budget(started, Duration::from_secs(10))?;
    Ok(format!("{} actions agree ({tnf} TNF)", actions.len()))
}

fn transitive_criterion() -> Outcome {
    let mut checked = 0;
    for n in [3, 4] {
        let l = enumerate_subgroups(n).map_err(|e| e.to_string())?;
        let naive = common::subgroups(n);
        ensure(l.len() == naive.len(), || format!("S_{n}: {} subgroups vs oracle {}", l.len(), naive.len()))?;
        for h in 0..l.len() {
            let members: common::Group =
                l.subgroup(h).elements().iter().map(|g| common::from_crate(g, n)).collect();
            let self_normalizing = common::normalizer(n, &members) == members;
            ensure(check_transitive_tnf(&l, h) == self_normalizing, || format!("S_{n} subgroup {h}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} subgroups of S_3 and S_4"))
}

fn hierarchy() -> Outcome {
    let oracle_counts = [
        (3, common::conjugacy_class_count(3, &common::subgroups_by_subsets(3))),
        (4, common::conjugacy_class_count(4, &common::subgroups(4))),
    ];
    ensure(oracle_counts == [(3, 4), (4, 11)], || format!("oracle class counts {oracle_counts:?}"))?;
    let mut longest = 0;
    for (n, expected) in oracle_counts {
        let l = enumerate_subgroups(n).map_err(|e| e.to_string())?;
        let measures = ergodic_ad_measures(&l);
        ensure(measures.len() == expected, || format!("S_{n}: {} ergodic measures", measures.len()))?;
        for (c, m) in measures.iter().enumerate() {
            let chain = m.hierarchy_chain();
            let steps = chain.len() - 1;
            longest = longest.max(steps);
            let last = chain.last().expect("nonempty");
            ensure(steps <= 3, || format!("S_{n} class {c}: {steps} steps"))?;
            ensure(last.support().iter().all(|&h| l.is_self_normalizing(h)), || {
                format!("S_{n} class {c}: fixpoint {last:?} not on self-normalizing subgroups")
            })?;
        }
    }
    Ok(format!("4 + 11 ergodic measures, longest chain {longest} steps"))
}

fn matching_decay() -> Outcome {
    let started = Instant::now();
    for m in 2..=50usize {
        let exact = part_l_overlap(2, m).map_err(|e| e.to_string())?;
        ensure(exact == rational(1, 2 * m as i64 - 1), || format!("m={m}: {exact}"))?;
        if m <= 6 {
            let (total, with_pair) = common::matchings_with_fixed_pair(m);
            ensure(exact == rational(with_pair as i64, total as i64), || {
                format!("m={m}: {with_pair}/{total} matchings")
            })?;
        }
        let mc = mc_part_l_overlap(2, m, MC_SAMPLES, mix_seed(SEED, m as u64), false).map_err(|e| e.to_string())?;
        ensure(mc.within(exact.to_f64(), SIGMAS), || format!("m={m}: MC {} vs {exact}", mc.estimate))?;
    }
    within_budget(started, Duration::from_secs(20))?;
    Ok("m = 2..50 exact, m ≤ 6 by enumeration, MC within 4σ".into())
}

fn frequency_estimator() -> Outcome {
    let a = alpha(&[(1, 1, 2), (-1, 1, 4), (0, 1, 4)]);
    let s = sample_labels(&a, 10_000, SEED).map_err(|e| e.to_string())?;
    let est = definetti_estimate(&s);
    let mut worst: f64 = 0.0;
    for v in a.support() {
        let gap = (est.weight(v).to_f64() - a.weight(v).to_f64()).abs();
        worst = worst.max(gap);
        ensure(gap <= 0.03, || format!("label {v}: estimate {}", format_rational(&est.weight(v))))?;
    }
    let r = independence_check(&a, 10_000, 2, 100_000, SEED).map_err(|e| e.to_string())?;
    ensure(r.max_deviation <= 0.02, || format!("independence deviation {}", r.max_deviation))?;
    Ok(format!("max frequency gap {worst:.4}, independence deviation {:.4}", r.max_deviation))
}

fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * i)
}

fn sequence_action() -> Outcome {
    let grid = [
        alpha(&[(1, 2, 3), (2, 1, 3)]),
        alpha(&[(1, 1, 2), (2, 1, 2)]),
        alpha(&[(1, 1, 1)]),
        alpha(&[(1, 1, 2), (-1, 1, 2)]),
        alpha(&[(1, 1, 2), (-1, 1, 4), (0, 1, 4)]),
        alpha(&[(1, 1, 3), (2, 1, 3), (-1, 1, 3)]),
    ];
    for a in &grid {
        let mut multiplicity: BTreeMap<Rational, u64> = BTreeMap::new();
        for (&i, w) in a.weights() {
            if i != 0 && !w.is_zero() {
                *multiplicity.entry(w.clone()).or_default() += 1;
            }
        }
        let distinct = multiplicity.values().all(|&c| c == 1);
        let symmetry = multiplicity.values().fold(BigUint::one(), |acc, &c| acc * factorial(c));
        let c = classify_sequence_action(a);
        ensure(c.is_tnf() == distinct && c.symmetry == symmetry, || {
            format!("α={}: {:?} vs distinct={distinct} symmetry={symmetry}", a.to_json(), c)
        })?;
    }
    Ok(format!("{} α's", grid.len()))
}

fn relabeling_invariance() -> Outcome {
    let l3 = enumerate_subgroups(3).map_err(|e| e.to_string())?;
    let l4 = enumerate_subgroups(4).map_err(|e| e.to_string())?;
    let actions = corpus(&l3, &l4);
    for (name, a) in &actions {
        let lattice = if a.window().degree() == 3 { &l3 } else { &l4 };
        let base = a.characteristic_measure(lattice).map_err(|e| e.to_string())?;
        let k = a.points();
        let relabelings: [Vec<usize>; 3] = [
            (0..k).rev().collect(),
            (0..k).map(|x| (x + 1) % k).collect(),
            (0..k).map(|x| (x * stride(k)) % k).collect(),
        ];
        for r in &relabelings {
            let moved = a.relabel(r).map_err(|e| e.to_string())?;
            let m = moved.characteristic_measure(lattice).map_err(|e| e.to_string())?;
            ensure(m.masses() == base.masses() && m.to_json().to_string() == base.to_json().to_string(), || {
                format!("{name}: measure changed under relabeling")
            })?;
        }
    }
    Ok(format!("{} actions × 3 relabelings", actions.len()))
}

/// Smallest stride > 1 coprime to `k`, so `x ↦ stride·x mod k` is a bijection.
fn stride(k: usize) -> usize {
    (2..).find(|s| num_integer::gcd(*s, k) == 1).filter(|_| k > 1).unwrap_or(1)
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("fixed-point oracle triangle", fixed_point_triangle),
        ("TNF criterion on sampled subgroups", tnf_criterion_on_samples),
        ("degenerate triple", degenerate_triple),
        ("TNF condition equivalence on finite actions", condition_equivalence),
        ("transitive-action criterion", transitive_criterion),
        ("normalization hierarchy", hierarchy),
        ("matching overlap decay", matching_decay),
        ("frequency estimator", frequency_estimator),
        ("sequence-action classification", sequence_action),
        ("relabeling invariance", relabeling_invariance),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.2}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.2}s)", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
