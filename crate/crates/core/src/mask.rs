//! Raw `u64` subset masks and the antichain primitives on sorted mask slices.
//!
//! Everything here is universe-agnostic; the typed wrappers in
//! [`crate::antichain`] do the universe bookkeeping.

#[inline]
pub fn is_subset(a: u64, b: u64) -> bool {
    a & !b == 0
}

#[inline]
pub fn comparable(a: u64, b: u64) -> bool {
    is_subset(a, b) || is_subset(b, a)
}

#[inline]
pub fn popcount(a: u64) -> usize {
    a.count_ones() as usize
}

/// Iterates the elements of a mask as zero-based bit positions.
pub fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

/// Iterates all submasks of `m`, including `m` and `0`, in descending order.
pub fn submasks(m: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(m);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & m) };
        Some(cur)
    })
}

/// Removes every set that is a proper subset of another member (and
/// duplicates), returning the survivors in ascending mask order.
pub fn max_ac(mut family: Vec<u64>) -> Vec<u64> {
    if family.len() <= 1 {
        return family;
    }
    family.sort_unstable_by(|a, b| b.count_ones().cmp(&a.count_ones()).then(a.cmp(b)));
    family.dedup();
    let mut kept: Vec<u64> = Vec::with_capacity(family.len());
    for x in family {
        if !kept.iter().any(|&k| is_subset(x, k)) {
            kept.push(x);
        }
    }
    kept.sort_unstable();
    kept
}

/// `true` iff every set of `a` lies inside some set of `b`.
pub fn leq(a: &[u64], b: &[u64]) -> bool {
    a.iter().all(|&x| b.iter().any(|&y| is_subset(x, y)))
}

/// `true` iff `x` is contained in some member of `a`, i.e. `{x} ≤ a`.
#[inline]
pub fn dominated(x: u64, a: &[u64]) -> bool {
    a.iter().any(|&y| is_subset(x, y))
}

pub fn join(a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() {
        return b.to_vec();
    }
    if b.is_empty() {
        return a.to_vec();
    }
    max_ac(a.iter().chain(b).copied().collect())
}

pub fn meet(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut inter = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            inter.push(x & y);
        }
    }
    max_ac(inter)
}

pub fn is_antichain(sets: &[u64]) -> bool {
    for (i, &x) in sets.iter().enumerate() {
        for &y in &sets[i + 1..] {
            if comparable(x, y) {
                return false;
            }
        }
    }
    true
}

/// Member-set difference of two sorted mask slices.
pub fn difference(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().copied().filter(|x| b.binary_search(x).is_err()).collect()
}

/// Member-set intersection of two sorted mask slices.
pub fn intersection(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn submasks_cover_everything_once() {
        let m = 0b1011;
        let subs: Vec<u64> = submasks(m).collect();
        assert_eq!(subs.len(), 8);
        assert_eq!(subs[0], m);
        assert_eq!(*subs.last().unwrap(), 0);
        assert!(subs.iter().all(|&s| is_subset(s, m)));
    }

    #[test]
    fn submasks_of_zero() {
        assert_eq!(submasks(0).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn max_ac_drops_subsets_and_duplicates() {
        assert_eq!(max_ac(vec![0b01, 0b11, 0b11, 0b100]), vec![0b11, 0b100]);
        assert_eq!(max_ac(vec![0, 0]), vec![0]);
    }

    #[test]
    fn bits_in_order() {
        assert_eq!(bits(0b10110).collect::<Vec<_>>(), vec![1, 2, 4]);
    }
}
