//! Finite-support permutations of the positive integers.
//!
//! A [`Permutation`] stores only the points it moves, so the identity is the
//! empty map and structural equality is group-element equality. Cycle lists
//! are canonical: each cycle starts at its minimum and cycles are sorted by
//! their minima.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A point of the acted-on set. Points are positive; 0 is never a valid point.
pub type Point = usize;

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    moved: BTreeMap<Point, Point>,
}

impl Permutation {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Builds a permutation from an explicit point map. Fixed points in the
    /// map are dropped; the map must be a bijection of its key set.
    pub fn from_map(map: BTreeMap<Point, Point>) -> Result<Self> {
        let keys: BTreeSet<Point> = map.keys().copied().collect();
        let values: BTreeSet<Point> = map.values().copied().collect();
        if keys.contains(&0) || values.contains(&0) {
            return Err(Error::Parse("point 0 is not a positive integer".into()));
        }
        if values.len() != map.len() || keys != values {
            return Err(Error::Parse(
                "map is not a bijection of its key set".into(),
            ));
        }
        let moved = map.into_iter().filter(|(x, y)| x != y).collect();
        Ok(Self { moved })
    }

    /// Builds a permutation from disjoint cycles. One-point cycles are allowed
    /// and contribute nothing; repeated points are rejected.
    pub fn from_cycles<C: AsRef<[Point]>>(cycles: &[C]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut moved = BTreeMap::new();
        for cycle in cycles {
            let cycle = cycle.as_ref();
            for &p in cycle {
                if p == 0 {
                    return Err(Error::Parse("point 0 is not a positive integer".into()));
                }
                if !seen.insert(p) {
                    return Err(Error::Parse(format!("point {p} appears in more than one cycle position")));
                }
            }
            if cycle.len() >= 2 {
                for (i, &p) in cycle.iter().enumerate() {
                    moved.insert(p, cycle[(i + 1) % cycle.len()]);
                }
            }
        }
        Ok(Self { moved })
    }

    pub fn transposition(a: Point, b: Point) -> Self {
        assert!(a != 0 && b != 0, "points are positive");
        if a == b {
            return Self::identity();
        }
        Self {
            moved: BTreeMap::from([(a, b), (b, a)]),
        }
    }

    /// One-line notation on the window `1..=images.len()`: point `i + 1` maps
    /// to `images[i]`.
    pub fn from_images(images: &[Point]) -> Result<Self> {
        let map = images
            .iter()
            .enumerate()
            .map(|(i, &y)| (i + 1, y))
            .collect();
        let perm = Self::from_map(map)?;
        if let Some(&m) = perm.moved.keys().next_back() {
            if m > images.len() {
                return Err(Error::Parse("image outside the window".into()));
            }
        }
        Ok(perm)
    }

    pub fn apply(&self, x: Point) -> Point {
        self.moved.get(&x).copied().unwrap_or(x)
    }

    pub fn is_identity(&self) -> bool {
        self.moved.is_empty()
    }

    /// Points moved by the permutation, ascending.
    pub fn support(&self) -> impl Iterator<Item = Point> + '_ {
        self.moved.keys().copied()
    }

    pub fn support_len(&self) -> usize {
        self.moved.len()
    }

    /// Largest moved point, 0 for the identity.
    pub fn max_point(&self) -> Point {
        self.moved.keys().next_back().copied().unwrap_or(0)
    }

    /// Fails unless every moved point lies in `1..=window`.
    pub fn check_window(&self, window: usize) -> Result<()> {
        match self.moved.keys().next_back() {
            Some(&p) if p > window => Err(Error::WindowEscape {
                perm: self.to_string(),
                point: p,
                window,
            }),
            _ => Ok(()),
        }
    }

    /// `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        let mut moved = BTreeMap::new();
        for x in self.moved.keys().chain(other.moved.keys()) {
            let y = self.apply(other.apply(*x));
            if y != *x {
                moved.insert(*x, y);
            }
        }
        Permutation { moved }
    }

    pub fn inverse(&self) -> Permutation {
        Permutation {
            moved: self.moved.iter().map(|(&x, &y)| (y, x)).collect(),
        }
    }

    /// `h · self · h⁻¹`: relabels every point `x` of `self` as `h(x)`.
    pub fn conjugate_by(&self, h: &Permutation) -> Permutation {
        Permutation {
            moved: self
                .moved
                .iter()
                .map(|(&x, &y)| (h.apply(x), h.apply(y)))
                .collect(),
        }
    }

    /// Canonical disjoint cycles of length ≥ 2.
    pub fn cycles(&self) -> Vec<Vec<Point>> {
        let mut seen = BTreeSet::new();
        let mut cycles = Vec::new();
        // keys iterate ascending, so every cycle is entered at its minimum
        for &start in self.moved.keys() {
            if seen.contains(&start) {
                continue;
            }
            let mut cycle = vec![start];
            seen.insert(start);
            let mut x = self.apply(start);
            while x != start {
                seen.insert(x);
                cycle.push(x);
                x = self.apply(x);
            }
            cycles.push(cycle);
        }
        cycles
    }

    pub fn cycle_type(&self) -> CycleType {
        let mut counts = BTreeMap::new();
        for c in self.cycles() {
            *counts.entry(c.len()).or_insert(0) += 1;
        }
        CycleType { counts }
    }

    /// +1 for even permutations, −1 for odd.
    pub fn parity(&self) -> i32 {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Order of the permutation as a group element.
    pub fn order(&self) -> usize {
        self.cycle_type()
            .counts()
            .keys()
            .fold(1, |acc, &k| num_integer::lcm(acc, k))
    }
}

/// `compose(g, h)` as a free function: `x ↦ g(h(x))`.
pub fn compose(g: &Permutation, h: &Permutation) -> Permutation {
    g.compose(h)
}

pub fn inverse(g: &Permutation) -> Permutation {
    g.inverse()
}

/// `h g h⁻¹`.
pub fn conjugate(g: &Permutation, h: &Permutation) -> Permutation {
    g.conjugate_by(h)
}

impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("()");
        }
        for cycle in self.cycles() {
            f.write_str("(")?;
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{self}")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses cycle notation such as `(1 2)(3 4 5)`; `()` is the identity.
    fn from_str(s: &str) -> Result<Self> {
        let malformed = |why: &str| Error::Parse(format!("malformed cycle notation {s:?}: {why}"));
        let mut cycles: Vec<Vec<Point>> = Vec::new();
        let mut current: Option<Vec<Point>> = None;
        let mut chars = s.chars().peekable();
        while let Some(c) = chars.next() {
            match c {
                '(' => {
                    if current.is_some() {
                        return Err(malformed("nested '('"));
                    }
                    current = Some(Vec::new());
                }
                ')' => match current.take() {
                    Some(cycle) => cycles.push(cycle),
                    None => return Err(malformed("unbalanced ')'")),
                },
                c if c.is_whitespace() => {}
                c if c.is_ascii_digit() => {
                    let Some(cycle) = current.as_mut() else {
                        return Err(malformed("number outside parentheses"));
                    };
                    let mut digits = String::from(c);
                    while let Some(&d) = chars.peek() {
                        if d.is_ascii_digit() {
                            digits.push(d);
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    let p: Point = digits.parse().map_err(|_| malformed("point out of range"))?;
                    cycle.push(p);
                }
                other => return Err(malformed(&format!("unexpected character {other:?}"))),
            }
        }
        if current.is_some() {
            return Err(malformed("unclosed '('"));
        }
        if cycles.is_empty() {
            return Err(malformed("no cycles; write () for the identity"));
        }
        Permutation::from_cycles(&cycles)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Multiplicities of cycle lengths ≥ 2. The identity has the empty type.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType {
    counts: BTreeMap<usize, usize>,
}

impl CycleType {
    pub fn new(counts: BTreeMap<usize, usize>) -> Result<Self> {
        if counts.iter().any(|(&k, &c)| k < 2 || c == 0) {
            return Err(Error::Domain(
                "cycle type keys must be ≥ 2 with positive counts".into(),
            ));
        }
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.counts
    }

    pub fn count(&self, k: usize) -> usize {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    pub fn is_identity(&self) -> bool {
        self.counts.is_empty()
    }

    /// Number of moved points.
    pub fn support_len(&self) -> usize {
        self.counts.iter().map(|(k, c)| k * c).sum()
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, c)) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}:{c}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for CycleType {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(self.counts.len()))?;
        for (k, c) in &self.counts {
            map.serialize_entry(&k.to_string(), c)?;
        }
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn compose_examples() {
        let g = p("(1 2)").compose(&p("(2 3)"));
        assert_eq!(g, p("(1 2 3)"));
        assert_eq!(g.apply(1), 2);
        assert_eq!(g.apply(2), 3);
        assert_eq!(g.apply(3), 1);
        let g = p("(1 2)(3 4 5)");
        assert_eq!(g.compose(&Permutation::identity()), g);
        assert!(p("(1 2)").compose(&p("(1 2)")).is_identity());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(p("(1 2 3)").inverse(), p("(1 3 2)"));
        assert!(Permutation::identity().inverse().is_identity());
        assert_eq!(p("(4 9)").inverse(), p("(4 9)"));
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate(&p("(1 2)"), &p("(2 3)")), p("(1 3)"));
        let g = p("(1 2)(3 4 5)");
        assert_eq!(conjugate(&g, &Permutation::identity()), g);
        // brute force: h g h^-1 evaluated point by point
        let (g, h) = (p("(1 2 3)"), p("(1 2)"));
        let hinv = h.inverse();
        let mut map = BTreeMap::new();
        for x in 1..=3 {
            map.insert(x, h.apply(g.apply(hinv.apply(x))));
        }
        let brute = Permutation::from_map(map).unwrap();
        assert_eq!(conjugate(&g, &h), brute);
        assert_eq!(brute, p("(1 3 2)"));
    }

    #[test]
    fn cycle_examples() {
        assert_eq!(p("(1 2)(3 4 5)").cycles(), vec![vec![1, 2], vec![3, 4, 5]]);
        assert!(Permutation::identity().cycles().is_empty());
        assert_eq!(p("(1 2 3)").cycles(), vec![vec![1, 2, 3]]);
        // canonical rotation and ordering
        assert_eq!(p("(5 3 4)(2 1)").cycles(), vec![vec![1, 2], vec![3, 4, 5]]);
    }

    #[test]
    fn cycle_type_examples() {
        let ct = p("(1 2)(3 4 5)").cycle_type();
        assert_eq!(ct.counts(), &BTreeMap::from([(2, 1), (3, 1)]));
        assert!(Permutation::identity().cycle_type().is_identity());
        assert_eq!(p("(1 2)(3 4)").cycle_type().counts(), &BTreeMap::from([(2, 2)]));
        assert_eq!(ct.to_string(), "{2:1, 3:1}");
    }

    #[test]
    fn parity_examples() {
        assert_eq!(p("(1 2 3)").parity(), 1);
        assert_eq!(p("(1 2)").parity(), -1);
        assert_eq!(p("(1 2)(3 4)").parity(), 1);
    }

    #[test]
    fn text_form() {
        assert_eq!(Permutation::identity().to_string(), "()");
        assert_eq!(p("  ( 3 4 5 )(1   2) ").to_string(), "(1 2)(3 4 5)");
        assert_eq!(p("()"), Permutation::identity());
        assert_eq!(p("(7)"), Permutation::identity());
        for bad in ["", "(1 2", "1 2)", "(1 2)(2 3)", "(1 1)", "(0 1)", "(1,2)", "((1 2))", "(1 a)", "[1 2]"] {
            assert!(bad.parse::<Permutation>().is_err(), "{bad:?} should be rejected");
        }
    }

    #[test]
    fn from_map_rejects_non_bijections() {
        assert!(Permutation::from_map(BTreeMap::from([(1, 2), (2, 2)])).is_err());
        assert!(Permutation::from_map(BTreeMap::from([(1, 2)])).is_err());
        let g = Permutation::from_map(BTreeMap::from([(1, 2), (2, 1), (3, 3)])).unwrap();
        assert_eq!(g.support_len(), 2);
    }

    #[test]
    fn window_check() {
        assert!(p("(1 5)").check_window(5).is_ok());
        assert!(matches!(
            p("(1 6)").check_window(5),
            Err(Error::WindowEscape { point: 6, .. })
        ));
    }

    #[test]
    fn order_is_lcm_of_cycle_lengths() {
        assert_eq!(p("(1 2)(3 4 5)").order(), 6);
        assert_eq!(Permutation::identity().order(), 1);
    }
}
