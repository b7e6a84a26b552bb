//! The universe `N = {1..n}`, its subsets, and antichains with the lattice
//! operations of the antichain order.

use std::fmt;

use crate::error::{Error, Result};
use crate::mask;

/// Largest supported universe: one machine word per subset.
pub const MAX_UNIVERSE: usize = 64;

/// The ground set `{1, ..., n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Universe(u8);

impl Universe {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_UNIVERSE {
            return Err(Error::usage(format!(
                "universe of {n} elements exceeds the {MAX_UNIVERSE}-element limit"
            )));
        }
        Ok(Universe(n as u8))
    }

    pub fn n(self) -> usize {
        self.0 as usize
    }

    /// Mask of the whole universe `N`.
    pub fn full_mask(self) -> u64 {
        if self.0 == 64 {
            u64::MAX
        } else {
            (1u64 << self.0) - 1
        }
    }

    pub fn contains_mask(self, bits: u64) -> bool {
        bits & !self.full_mask() == 0
    }

    pub(crate) fn check_same(self, other: Universe) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::UniverseMismatch {
                left: self.n(),
                right: other.n(),
            })
        }
    }
}

/// A subset of the universe, bit `i - 1` standing for element `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    universe: Universe,
    bits: u64,
}

impl Subset {
    pub fn new(universe: Universe, bits: u64) -> Result<Self> {
        if !universe.contains_mask(bits) {
            return Err(Error::usage(format!(
                "mask {bits:#x} has elements outside 1..={}",
                universe.n()
            )));
        }
        Ok(Subset { universe, bits })
    }

    pub fn empty(universe: Universe) -> Self {
        Subset { universe, bits: 0 }
    }

    pub fn full(universe: Universe) -> Self {
        Subset {
            universe,
            bits: universe.full_mask(),
        }
    }

    /// Builds a subset from one-based element labels.
    pub fn from_elements(universe: Universe, elements: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &e in elements {
            if e == 0 || e > universe.n() {
                return Err(Error::usage(format!(
                    "element {e} outside 1..={}",
                    universe.n()
                )));
            }
            bits |= 1 << (e - 1);
        }
        Ok(Subset { universe, bits })
    }

    pub fn universe(self) -> Universe {
        self.universe
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn len(self) -> usize {
        mask::popcount(self.bits)
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn contains(self, element: usize) -> bool {
        element >= 1 && element <= self.universe.n() && self.bits >> (element - 1) & 1 == 1
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        mask::is_subset(self.bits, other.bits)
    }

    /// One-based element labels in ascending order.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        mask::bits(self.bits).map(|b| b + 1)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_set(f, self.bits)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_set(f, self.bits)
    }
}

pub(crate) fn write_set(f: &mut impl fmt::Write, bits: u64) -> fmt::Result {
    f.write_char('{')?;
    for (i, b) in mask::bits(bits).enumerate() {
        if i > 0 {
            f.write_char(',')?;
        }
        write!(f, "{}", b + 1)?;
    }
    f.write_char('}')
}

/// A set of pairwise incomparable subsets, stored in ascending mask order so
/// that structural and semantic equality coincide.
///
/// `⊥` (no sets) and `{∅}` (the single empty set) are different values.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Antichain {
    universe: Universe,
    sets: Vec<u64>,
}

impl Antichain {
    /// The empty antichain `⊥`.
    pub fn bottom(universe: Universe) -> Self {
        Antichain {
            universe,
            sets: Vec::new(),
        }
    }

    /// `⊤ = {N}`.
    pub fn top(universe: Universe) -> Self {
        Antichain {
            universe,
            sets: vec![universe.full_mask()],
        }
    }

    /// `{∅}`.
    pub fn empty_set(universe: Universe) -> Self {
        Antichain {
            universe,
            sets: vec![0],
        }
    }

    pub fn singleton(set: Subset) -> Self {
        Antichain {
            universe: set.universe,
            sets: vec![set.bits],
        }
    }

    /// Builds an antichain from masks that must already be pairwise
    /// incomparable. Duplicates collapse; a comparable pair is an error.
    pub fn from_masks(universe: Universe, masks: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut sets: Vec<u64> = masks.into_iter().collect();
        if let Some(&bad) = sets.iter().find(|&&m| !universe.contains_mask(m)) {
            return Err(Error::usage(format!(
                "mask {bad:#x} has elements outside 1..={}",
                universe.n()
            )));
        }
        sets.sort_unstable();
        sets.dedup();
        for (i, &x) in sets.iter().enumerate() {
            if let Some(&y) = sets[i + 1..].iter().find(|&&y| mask::comparable(x, y)) {
                let (mut a, mut b) = (String::new(), String::new());
                let _ = write_set(&mut a, x);
                let _ = write_set(&mut b, y);
                return Err(Error::precondition(format!(
                    "not an antichain: {a} and {b} are comparable"
                )));
            }
        }
        Ok(Antichain { universe, sets })
    }

    /// `maxAC`: keeps only the maximal members of an arbitrary family.
    pub fn max_ac(universe: Universe, family: impl IntoIterator<Item = u64>) -> Result<Self> {
        let family: Vec<u64> = family.into_iter().collect();
        if let Some(&bad) = family.iter().find(|&&m| !universe.contains_mask(m)) {
            return Err(Error::usage(format!(
                "mask {bad:#x} has elements outside 1..={}",
                universe.n()
            )));
        }
        Ok(Antichain {
            universe,
            sets: mask::max_ac(family),
        })
    }

    /// `maxAC` over typed subsets; all of them must share one universe.
    pub fn max_ac_of(universe: Universe, family: &[Subset]) -> Result<Self> {
        for s in family {
            universe.check_same(s.universe)?;
        }
        Ok(Antichain {
            universe,
            sets: mask::max_ac(family.iter().map(|s| s.bits).collect()),
        })
    }

    /// Trusted constructor for masks already known to form an antichain.
    pub(crate) fn from_sorted_unchecked(universe: Universe, sets: Vec<u64>) -> Self {
        debug_assert!(sets.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(mask::is_antichain(&sets));
        Antichain { universe, sets }
    }

    /// Trusted constructor for an arbitrary order of incomparable masks.
    pub(crate) fn from_unsorted_unchecked(universe: Universe, mut sets: Vec<u64>) -> Self {
        sets.sort_unstable();
        Self::from_sorted_unchecked(universe, sets)
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn masks(&self) -> &[u64] {
        &self.sets
    }

    pub fn iter(&self) -> impl Iterator<Item = Subset> + '_ {
        let universe = self.universe;
        self.sets.iter().map(move |&bits| Subset { universe, bits })
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    /// `true` for `⊥`.
    pub fn is_bottom(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Member test (the set itself, not domination).
    pub fn contains(&self, set: Subset) -> bool {
        set.universe == self.universe && self.sets.binary_search(&set.bits).is_ok()
    }

    pub fn contains_mask(&self, bits: u64) -> bool {
        self.sets.binary_search(&bits).is_ok()
    }

    /// `{X} ≤ self`: some member contains `x`.
    pub fn dominates(&self, x: u64) -> bool {
        mask::dominated(x, &self.sets)
    }

    /// The common size of all members, if there is one. `⊥` has none.
    pub fn uniform_level(&self) -> Option<usize> {
        let first = mask::popcount(*self.sets.first()?);
        self.sets
            .iter()
            .all(|&m| mask::popcount(m) == first)
            .then_some(first)
    }

    /// `α ≤ β`: every set of `self` is contained in a set of `other`.
    pub fn leq(&self, other: &Antichain) -> Result<bool> {
        self.universe.check_same(other.universe)?;
        Ok(mask::leq(&self.sets, &other.sets))
    }

    pub fn join(&self, other: &Antichain) -> Result<Antichain> {
        self.universe.check_same(other.universe)?;
        Ok(Antichain {
            universe: self.universe,
            sets: mask::join(&self.sets, &other.sets),
        })
    }

    pub fn meet(&self, other: &Antichain) -> Result<Antichain> {
        self.universe.check_same(other.universe)?;
        Ok(Antichain {
            universe: self.universe,
            sets: mask::meet(&self.sets, &other.sets),
        })
    }

    /// `α ⊗ β = {A ∪ B}`; the supports must be disjoint.
    pub fn direct_product(&self, other: &Antichain) -> Result<Antichain> {
        self.universe.check_same(other.universe)?;
        let overlap = self.support_mask() & other.support_mask();
        if overlap != 0 {
            let mut s = String::new();
            let _ = write_set(&mut s, overlap);
            return Err(Error::precondition(format!(
                "direct product needs disjoint supports, both contain {s}"
            )));
        }
        let mut sets = Vec::with_capacity(self.len() * other.len());
        for &a in &self.sets {
            for &b in &other.sets {
                sets.push(a | b);
            }
        }
        Ok(Antichain::from_unsorted_unchecked(self.universe, sets))
    }

    /// `∪α`, the union of all members.
    pub fn support(&self) -> Subset {
        Subset {
            universe: self.universe,
            bits: self.support_mask(),
        }
    }

    pub(crate) fn support_mask(&self) -> u64 {
        self.sets.iter().fold(0, |acc, &m| acc | m)
    }

    /// Member-set union, without `maxAC`. Only valid when the result is
    /// still an antichain, e.g. for two subsets of one level.
    pub fn union_members(&self, other: &Antichain) -> Result<Antichain> {
        self.universe.check_same(other.universe)?;
        let mut sets: Vec<u64> = self.sets.iter().chain(&other.sets).copied().collect();
        sets.sort_unstable();
        sets.dedup();
        if !mask::is_antichain(&sets) {
            return Err(Error::precondition("member union is not an antichain"));
        }
        Ok(Antichain {
            universe: self.universe,
            sets,
        })
    }

    /// Member-set difference `self − other`.
    pub fn difference(&self, other: &Antichain) -> Result<Antichain> {
        self.universe.check_same(other.universe)?;
        Ok(Antichain {
            universe: self.universe,
            sets: mask::difference(&self.sets, &other.sets),
        })
    }

    /// Member-set intersection `self ∩ other`.
    pub fn intersection(&self, other: &Antichain) -> Result<Antichain> {
        self.universe.check_same(other.universe)?;
        Ok(Antichain {
            universe: self.universe,
            sets: mask::intersection(&self.sets, &other.sets),
        })
    }

    /// Member-set inclusion `self ⊆ other`.
    pub fn is_member_subset(&self, other: &Antichain) -> bool {
        self.universe == other.universe
            && self.sets.iter().all(|m| other.sets.binary_search(m).is_ok())
    }

    /// Image under an element permutation.
    pub fn relabel(&self, perm: &Permutation) -> Result<Antichain> {
        self.universe.check_same(perm.universe)?;
        let sets = self.sets.iter().map(|&m| perm.apply_mask(m)).collect();
        Ok(Antichain::from_unsorted_unchecked(self.universe, sets))
    }

    /// Sub-antichain picked by the bits of `selector` over the member list.
    pub(crate) fn select(&self, selector: u64) -> Antichain {
        let sets = mask::bits(selector).map(|i| self.sets[i]).collect();
        Antichain::from_sorted_unchecked(self.universe, sets)
    }
}

impl fmt::Display for Antichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, &m) in self.sets.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write_set(f, m)?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Antichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A bijection on `{1..n}`, stored as `image[i - 1] = f(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    universe: Universe,
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(universe: Universe, image: Vec<usize>) -> Result<Self> {
        let n = universe.n();
        if image.len() != n {
            return Err(Error::usage(format!(
                "permutation has {} entries, universe has {n}",
                image.len()
            )));
        }
        let mut seen = vec![false; n];
        for &x in &image {
            if x == 0 || x > n || std::mem::replace(&mut seen[x - 1], true) {
                return Err(Error::usage(format!(
                    "{image:?} is not a bijection on 1..={n}"
                )));
            }
        }
        Ok(Permutation { universe, image })
    }

    pub fn identity(universe: Universe) -> Self {
        Permutation {
            universe,
            image: (1..=universe.n()).collect(),
        }
    }

    /// Exchanges two elements.
    pub fn swap(universe: Universe, a: usize, b: usize) -> Result<Self> {
        let mut image: Vec<usize> = (1..=universe.n()).collect();
        if a == 0 || b == 0 || a > universe.n() || b > universe.n() {
            return Err(Error::usage(format!("swap {a}<->{b} outside 1..={}", universe.n())));
        }
        image.swap(a - 1, b - 1);
        Ok(Permutation { universe, image })
    }

    pub fn apply(&self, element: usize) -> usize {
        self.image[element - 1]
    }

    pub fn apply_mask(&self, m: u64) -> u64 {
        mask::bits(m).fold(0, |acc, b| acc | 1 << (self.image[b] - 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(n: usize) -> Universe {
        Universe::new(n).unwrap()
    }

    fn ac(n: usize, text: &str) -> Antichain {
        crate::text::parse_antichain(u(n), text).unwrap()
    }

    #[test]
    fn max_ac_examples() {
        let n3 = u(3);
        let a = Antichain::max_ac(n3, [0b001, 0b011]).unwrap();
        assert_eq!(a, ac(3, "{{1,2}}"));
        assert_eq!(Antichain::max_ac(n3, []).unwrap(), Antichain::bottom(n3));
        assert_eq!(
            Antichain::max_ac(n3, [0b001, 0b110]).unwrap(),
            ac(3, "{{1},{2,3}}")
        );
    }

    #[test]
    fn max_ac_rejects_mixed_universes() {
        let s2 = Subset::from_elements(u(2), &[1]).unwrap();
        let s3 = Subset::from_elements(u(3), &[1]).unwrap();
        assert!(matches!(
            Antichain::max_ac_of(u(3), &[s2, s3]),
            Err(Error::UniverseMismatch { .. })
        ));
    }

    #[test]
    fn leq_examples() {
        assert!(ac(3, "{{1}}").leq(&ac(3, "{{1,2}}")).unwrap());
        assert!(Antichain::bottom(u(3)).leq(&ac(3, "{{2}}")).unwrap());
        assert!(!ac(3, "{{1,2}}").leq(&ac(3, "{{1}}")).unwrap());
        assert!(ac(3, "{{1}}").leq(&ac(2, "{{1}}")).is_err());
    }

    #[test]
    fn join_examples() {
        assert_eq!(ac(3, "{{1}}").join(&ac(3, "{{2}}")).unwrap(), ac(3, "{{1},{2}}"));
        assert_eq!(ac(3, "{{1}}").join(&ac(3, "{{1,2}}")).unwrap(), ac(3, "{{1,2}}"));
        let a = ac(3, "{{1},{2,3}}");
        assert_eq!(Antichain::bottom(u(3)).join(&a).unwrap(), a);
    }

    #[test]
    fn meet_examples() {
        assert_eq!(ac(3, "{{1,2}}").meet(&ac(3, "{{1,3}}")).unwrap(), ac(3, "{{1}}"));
        assert_eq!(ac(3, "{{1,2}}").meet(&ac(3, "{{2,3}}")).unwrap(), ac(3, "{{2}}"));
        assert_eq!(
            ac(3, "{{1},{2,3}}").meet(&Antichain::bottom(u(3))).unwrap(),
            Antichain::bottom(u(3))
        );
    }

    #[test]
    fn direct_product_examples() {
        assert_eq!(
            ac(3, "{{1}}").direct_product(&ac(3, "{{2},{3}}")).unwrap(),
            ac(3, "{{1,2},{1,3}}")
        );
        assert_eq!(
            ac(3, "{{1},{2}}").direct_product(&ac(3, "{{3}}")).unwrap(),
            ac(3, "{{1,3},{2,3}}")
        );
        assert!(matches!(
            ac(3, "{{1}}").direct_product(&ac(3, "{{1,2}}")),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn support_examples() {
        assert_eq!(ac(3, "{{1},{2,3}}").support().bits(), 0b111);
        assert_eq!(Antichain::bottom(u(3)).support().bits(), 0);
        assert_eq!(Antichain::empty_set(u(3)).support().bits(), 0);
    }

    #[test]
    fn relabel_examples() {
        let swap = Permutation::swap(u(3), 1, 3).unwrap();
        assert_eq!(ac(3, "{{1},{2,3}}").relabel(&swap).unwrap(), ac(3, "{{3},{1,2}}"));
        let a = ac(3, "{{1},{2,3}}");
        assert_eq!(a.relabel(&Permutation::identity(u(3))).unwrap(), a);
        let bot = Antichain::bottom(u(3));
        assert_eq!(bot.relabel(&swap).unwrap(), bot);
        assert!(Permutation::new(u(3), vec![1, 1, 2]).is_err());
        assert!(Permutation::new(u(3), vec![1, 2]).is_err());
    }

    #[test]
    fn bottom_and_empty_set_differ() {
        assert_ne!(Antichain::bottom(u(2)), Antichain::empty_set(u(2)));
        assert!(Antichain::bottom(u(2)).leq(&Antichain::empty_set(u(2))).unwrap());
        assert!(!Antichain::empty_set(u(2)).leq(&Antichain::bottom(u(2))).unwrap());
    }

    #[test]
    fn member_inclusion_is_stronger_than_order() {
        // {{1}} ≤ {{1,2}} without member inclusion.
        let a = ac(2, "{{1}}");
        let b = ac(2, "{{1,2}}");
        assert!(a.leq(&b).unwrap());
        assert!(!a.is_member_subset(&b));
    }

    #[test]
    fn from_masks_rejects_comparable_pair() {
        assert!(matches!(
            Antichain::from_masks(u(2), [0b01, 0b11]),
            Err(Error::Precondition(_))
        ));
        assert!(Antichain::from_masks(u(2), [0b100]).is_err());
    }

    #[test]
    fn universe_limit() {
        assert!(Universe::new(64).is_ok());
        assert!(Universe::new(65).is_err());
        assert_eq!(Universe::new(64).unwrap().full_mask(), u64::MAX);
    }
}
