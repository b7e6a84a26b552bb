//! Intervals `[α, β]` of the antichain lattice and their underlying posets.

use std::fmt;

use rustc_hash::FxHashSet;

use crate::antichain::{write_set, Antichain, Subset, Universe};
use crate::error::{Error, Result};
use crate::mask;

/// The closed interval `{χ | bottom ≤ χ ≤ top}`. Empty when `bottom ≰ top`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    bottom: Antichain,
    top: Antichain,
}

impl Interval {
    pub fn new(bottom: Antichain, top: Antichain) -> Result<Self> {
        bottom.universe().check_same(top.universe())?;
        Ok(Interval { bottom, top })
    }

    /// `[⊥, ⊤]`, the whole lattice.
    pub fn full(universe: Universe) -> Self {
        Interval {
            bottom: Antichain::bottom(universe),
            top: Antichain::top(universe),
        }
    }

    pub fn universe(&self) -> Universe {
        self.bottom.universe()
    }

    pub fn bottom(&self) -> &Antichain {
        &self.bottom
    }

    pub fn top(&self) -> &Antichain {
        &self.top
    }

    pub fn is_nonempty(&self) -> bool {
        mask::leq(self.bottom.masks(), self.top.masks())
    }

    pub fn contains(&self, x: &Antichain) -> bool {
        x.universe() == self.universe()
            && mask::leq(self.bottom.masks(), x.masks())
            && mask::leq(x.masks(), self.top.masks())
    }

    pub(crate) fn require_nonempty(&self) -> Result<()> {
        if self.is_nonempty() {
            Ok(())
        } else {
            Err(Error::precondition(format!(
                "empty interval: bottom {} is not below top {}",
                self.bottom, self.top
            )))
        }
    }

    /// `[α1, β1] ∩ [α2, β2] = [α1 ∨ α2, β1 ∧ β2]`.
    pub fn intersect(&self, other: &Interval) -> Result<Interval> {
        Ok(Interval {
            bottom: self.bottom.join(&other.bottom)?,
            top: self.top.meet(&other.top)?,
        })
    }

    /// The lattice homomorphism `χ ↦ α ∨ (χ ∧ β)` onto the interval.
    pub fn clamp(&self, x: &Antichain) -> Result<Antichain> {
        self.require_nonempty()?;
        self.bottom.join(&x.meet(&self.top)?)
    }

    /// The underlying poset `{X | {X} ≰ α, {X} ≤ β}`.
    pub fn poset(&self) -> Result<IntervalPoset> {
        underlying_poset(self)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.bottom, self.top)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The immediate subsets `{X − {e} | e ∈ X}`; `pred(∅) = ⊥`.
pub fn pred(x: Subset) -> Antichain {
    Antichain::from_unsorted_unchecked(x.universe(), pred_masks(x.bits()).collect())
}

pub(crate) fn pred_masks(x: u64) -> impl Iterator<Item = u64> {
    mask::bits(x).map(move |b| x & !(1 << b))
}

/// A family of subsets closed under betweenness, kept sorted by
/// `(size, mask)` so that each level is a contiguous run.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntervalPoset {
    universe: Universe,
    sets: Vec<u64>,
}

fn level_order(sets: &mut [u64]) {
    sets.sort_unstable_by_key(|&m| (m.count_ones(), m));
}

impl IntervalPoset {
    /// Wraps a family after checking convexity.
    pub fn new(universe: Universe, sets: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut sets: Vec<u64> = sets.into_iter().collect();
        if let Some(&bad) = sets.iter().find(|&&m| !universe.contains_mask(m)) {
            return Err(Error::usage(format!(
                "mask {bad:#x} has elements outside 1..={}",
                universe.n()
            )));
        }
        level_order(&mut sets);
        sets.dedup();
        if let Some((lo, hi, gap)) = convexity_gap(&sets) {
            let (mut a, mut b, mut c) = (String::new(), String::new(), String::new());
            let _ = write_set(&mut a, lo);
            let _ = write_set(&mut b, gap);
            let _ = write_set(&mut c, hi);
            return Err(Error::precondition(format!(
                "not an interval poset: {b} lies between {a} and {c} but is missing"
            )));
        }
        Ok(IntervalPoset { universe, sets })
    }

    pub(crate) fn from_sorted_unchecked(universe: Universe, sets: Vec<u64>) -> Self {
        IntervalPoset { universe, sets }
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    /// Members ordered by size, then mask.
    pub fn masks(&self) -> &[u64] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains_mask(&self, x: u64) -> bool {
        self.sets
            .binary_search_by_key(&(x.count_ones(), x), |&m| (m.count_ones(), m))
            .is_ok()
    }

    /// Smallest member size `m`; `None` for the empty poset.
    pub fn min_level(&self) -> Option<usize> {
        self.sets.first().map(|&m| mask::popcount(m))
    }

    /// Largest member size `M`; `None` for the empty poset.
    pub fn max_level(&self) -> Option<usize> {
        self.sets.last().map(|&m| mask::popcount(m))
    }

    /// Members of size `l`, ascending by mask.
    pub fn level_masks(&self, l: usize) -> &[u64] {
        let lo = self.sets.partition_point(|&m| (m.count_ones() as usize) < l);
        let hi = self.sets.partition_point(|&m| (m.count_ones() as usize) <= l);
        &self.sets[lo..hi]
    }

    /// `𝒫ˡ` as a uniform antichain.
    pub fn level(&self, l: usize) -> Antichain {
        Antichain::from_sorted_unchecked(self.universe, self.level_masks(l).to_vec())
    }

    /// `ℐ_𝒮`: the interval spanned by this poset.
    pub fn spanned_interval(&self) -> Interval {
        let bottom = mask::max_ac(
            self.sets
                .iter()
                .flat_map(|&x| pred_masks(x))
                .filter(|&p| !self.contains_mask(p))
                .collect(),
        );
        let top = mask::max_ac(self.sets.clone());
        Interval {
            bottom: Antichain::from_sorted_unchecked(self.universe, bottom),
            top: Antichain::from_sorted_unchecked(self.universe, top),
        }
    }
}

impl fmt::Display for IntervalPoset {
    /// One `level k: {..},{..}` line per nonempty level.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (Some(lo), Some(hi)) = (self.min_level(), self.max_level()) else {
            return Ok(());
        };
        let mut first = true;
        for l in lo..=hi {
            let level = self.level_masks(l);
            if level.is_empty() {
                continue;
            }
            if !first {
                writeln!(f)?;
            }
            first = false;
            write!(f, "level {l}: ")?;
            for (i, &m) in level.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write_set(f, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntervalPoset {
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

/// Computes `𝒫_[α,β]` by walking the submasks of each top set.
pub fn underlying_poset(i: &Interval) -> Result<IntervalPoset> {
    i.require_nonempty()?;
    let bottom = i.bottom.masks();
    let mut seen: FxHashSet<u64> = FxHashSet::default();
    for &b in i.top.masks() {
        for x in mask::submasks(b) {
            if !mask::dominated(x, bottom) {
                seen.insert(x);
            }
        }
    }
    let mut sets: Vec<u64> = seen.into_iter().collect();
    level_order(&mut sets);
    Ok(IntervalPoset::from_sorted_unchecked(i.universe(), sets))
}

/// First violation of betweenness closure, as `(lower, upper, missing)`.
fn convexity_gap(sets: &[u64]) -> Option<(u64, u64, u64)> {
    let members: FxHashSet<u64> = sets.iter().copied().collect();
    for &lo in sets {
        for &hi in sets {
            if lo == hi || !mask::is_subset(lo, hi) {
                continue;
            }
            let free = hi & !lo;
            for extra in mask::submasks(free) {
                let c = lo | extra;
                if !members.contains(&c) {
                    return Some((lo, hi, c));
                }
            }
        }
    }
    None
}

/// Convexity test: every `C` with `A1 ⊆ C ⊆ A2` for members `A1, A2` is a member.
pub fn is_interval_poset(sets: &[u64]) -> bool {
    convexity_gap(sets).is_none()
}

/// `ℐ_𝒮 = [⋁ (pred X − 𝒮), ⋁ {X}]`.
pub fn interval_from_poset(s: &IntervalPoset) -> Interval {
    s.spanned_interval()
}

/// Removes the common core `A = ⋂ s` from every member.
pub fn strip_common(sets: &[u64]) -> Vec<u64> {
    let Some(core) = sets.iter().copied().reduce(|a, b| a & b) else {
        return Vec::new();
    };
    sets.iter().map(|&x| x & !core).collect()
}

/// `[({A} ⊗ χ′) ∨ (pred(A) ⊗ χ), {A} ⊗ χ]`, an isomorphic copy of `[χ′, χ]`
/// for a nonempty `A` outside the support of `χ`.
pub fn lift_interval(chi_lo: &Antichain, chi_hi: &Antichain, a: Subset) -> Result<Interval> {
    chi_lo.universe().check_same(chi_hi.universe())?;
    chi_lo.universe().check_same(a.universe())?;
    if !chi_lo.leq(chi_hi)? {
        return Err(Error::precondition(format!("{chi_lo} is not below {chi_hi}")));
    }
    if a.is_empty() {
        return Err(Error::precondition("lift set must be nonempty"));
    }
    if a.bits() & chi_hi.support_mask() != 0 {
        return Err(Error::precondition(format!(
            "lift set {a} meets the support {} of {chi_hi}",
            chi_hi.support()
        )));
    }
    let single = Antichain::singleton(a);
    // χ′ ≤ χ, so the support of χ′ is inside that of χ.
    let bottom = single
        .direct_product(chi_lo)?
        .join(&pred(a).direct_product(chi_hi)?)?;
    let top = single.direct_product(chi_hi)?;
    Interval::new(bottom, top)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_antichain;

    fn u(n: usize) -> Universe {
        Universe::new(n).unwrap()
    }

    fn ac(n: usize, text: &str) -> Antichain {
        parse_antichain(u(n), text).unwrap()
    }

    fn iv(n: usize, lo: &str, hi: &str) -> Interval {
        Interval::new(ac(n, lo), ac(n, hi)).unwrap()
    }

    fn family(n: usize, text: &str) -> Vec<u64> {
        crate::text::parse_family(u(n), text).unwrap()
    }

    #[test]
    fn intersect_examples() {
        let i = iv(2, "{{1}}", "{{1,2}}").intersect(&iv(2, "{{2}}", "{{1,2}}")).unwrap();
        assert_eq!(i, iv(2, "{{1},{2}}", "{{1,2}}"));
        let j = iv(3, "{{1}}", "{{1,2,3}}");
        assert_eq!(j.intersect(&j).unwrap(), j);
        let e = iv(2, "{}", "{{1}}").intersect(&iv(2, "{{2}}", "{{2}}")).unwrap();
        assert_eq!(e.bottom(), &ac(2, "{{2}}"));
        assert!(!e.is_nonempty());
    }

    #[test]
    fn clamp_examples() {
        let i = iv(2, "{{1}}", "{{1,2}}");
        assert_eq!(i.clamp(&ac(2, "{{2}}")).unwrap(), ac(2, "{{1},{2}}"));
        assert_eq!(i.clamp(i.bottom()).unwrap(), *i.bottom());
        assert_eq!(i.clamp(&Antichain::top(u(2))).unwrap(), *i.top());
        assert!(iv(2, "{{1}}", "{{2}}").clamp(&ac(2, "{}")).is_err());
    }

    #[test]
    fn pred_examples() {
        let s = Subset::from_elements(u(3), &[1, 2, 3]).unwrap();
        assert_eq!(pred(s), ac(3, "{{1,2},{1,3},{2,3}}"));
        assert_eq!(pred(Subset::from_elements(u(3), &[1]).unwrap()), ac(3, "{{}}"));
        assert_eq!(pred(Subset::empty(u(3))), ac(3, "{}"));
    }

    #[test]
    fn worked_example_poset() {
        let p = underlying_poset(&iv(3, "{{1}}", "{{1,2,3}}")).unwrap();
        let mut expected = family(3, "{{2},{3},{1,2},{1,3},{2,3},{1,2,3}}");
        expected.sort_by_key(|&m| (m.count_ones(), m));
        assert_eq!(p.masks(), expected.as_slice());
        assert_eq!(p.min_level(), Some(1));
        assert_eq!(p.max_level(), Some(3));
        assert_eq!(
            p.to_string(),
            "level 1: {2},{3}\nlevel 2: {1,2},{1,3},{2,3}\nlevel 3: {1,2,3}"
        );
    }

    #[test]
    fn singleton_interval_has_empty_poset() {
        let a = ac(3, "{{1},{2,3}}");
        let p = underlying_poset(&Interval::new(a.clone(), a).unwrap()).unwrap();
        assert!(p.is_empty());
        assert_eq!(p.min_level(), None);
        assert_eq!(p.to_string(), "");
    }

    #[test]
    fn full_lattice_poset_n2() {
        let p = underlying_poset(&Interval::full(u(2))).unwrap();
        assert_eq!(p.masks(), &[0b00, 0b01, 0b10, 0b11]);
        assert!(underlying_poset(&iv(2, "{{1}}", "{{2}}")).is_err());
    }

    #[test]
    fn convexity_examples() {
        assert!(!is_interval_poset(&family(3, "{{1},{1,2,3}}")));
        assert!(is_interval_poset(&family(3, "{{2},{3},{1,2},{1,3},{2,3},{1,2,3}}")));
        assert!(is_interval_poset(&[]));
        assert!(IntervalPoset::new(u(3), family(3, "{{1},{1,2,3}}")).is_err());
    }

    #[test]
    fn interval_from_poset_examples() {
        let p = IntervalPoset::new(u(3), family(3, "{{2},{3},{1,2},{1,3},{2,3},{1,2,3}}")).unwrap();
        assert_eq!(interval_from_poset(&p), iv(3, "{{1}}", "{{1,2,3}}"));
        let empty = IntervalPoset::new(u(3), []).unwrap();
        assert_eq!(interval_from_poset(&empty), iv(3, "{}", "{}"));
        let all = IntervalPoset::new(u(2), [0, 1, 2, 3]).unwrap();
        assert_eq!(interval_from_poset(&all), Interval::full(u(2)));
        assert_eq!(underlying_poset(&interval_from_poset(&all)).unwrap(), all);
    }

    #[test]
    fn strip_common_examples() {
        assert_eq!(strip_common(&family(3, "{{1,2},{1,3}}")), family(3, "{{2},{3}}"));
        assert_eq!(strip_common(&family(3, "{{1}}")), vec![0]);
        let s = family(3, "{{1},{2,3}}");
        assert_eq!(strip_common(&s), s);
        assert!(strip_common(&[]).is_empty());
    }

    #[test]
    fn lift_example() {
        let a = Subset::from_elements(u(3), &[3]).unwrap();
        let lifted = lift_interval(&ac(3, "{{1}}"), &ac(3, "{{1,2}}"), a).unwrap();
        assert_eq!(lifted, iv(3, "{{1,2},{1,3}}", "{{1,2,3}}"));
        let bad = Subset::from_elements(u(3), &[2]).unwrap();
        assert!(lift_interval(&ac(3, "{{1}}"), &ac(3, "{{1,2}}"), bad).is_err());
        assert!(lift_interval(&ac(3, "{{1}}"), &ac(3, "{{1,2}}"), Subset::empty(u(3))).is_err());
    }
}
