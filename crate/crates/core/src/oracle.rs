//! Brute-force reference implementations. Slow on purpose: every answer here
//! comes from explicit enumeration, never from the decomposition machinery.

use crate::antichain::{Antichain, Universe};
use crate::count::Count;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::mask;

/// Caps for exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    /// Largest ground set (number of free elements) that may be enumerated.
    pub max_n: usize,
    /// Hard cap on yielded antichains.
    pub max_items: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_n: 5,
            max_items: 10_000_000,
        }
    }
}

impl EnumerationBudget {
    /// Allows `n = 6` (7 828 354 antichains).
    pub fn extended() -> Self {
        EnumerationBudget {
            max_n: 6,
            max_items: 10_000_000,
        }
    }

    fn admit(&self, free: usize) -> Result<()> {
        if free > self.max_n {
            return Err(Error::Budget(format!(
                "enumerating antichains over {free} elements exceeds max_n = {}",
                self.max_n
            )));
        }
        Ok(())
    }
}

/// Depth-first enumeration of all antichains whose members lie inside
/// `ground`. Yields in lexicographic order of the canonical (ascending
/// mask) encodings: each antichain is followed by its extensions with
/// larger masks.
pub struct AntichainIter {
    universe: Universe,
    /// Candidate subsets of the ground set, ascending.
    candidates: Vec<u64>,
    /// Chosen candidate indices.
    chosen: Vec<usize>,
    /// Next candidate index to try at the current depth.
    cursor: usize,
    started: bool,
    done: bool,
    yielded: u64,
    max_items: u64,
}

impl AntichainIter {
    fn current(&self) -> Antichain {
        Antichain::from_sorted_unchecked(
            self.universe,
            self.chosen.iter().map(|&i| self.candidates[i]).collect(),
        )
    }

    fn fits(&self, idx: usize) -> bool {
        let x = self.candidates[idx];
        self.chosen
            .iter()
            .all(|&j| !mask::comparable(self.candidates[j], x))
    }

    /// Moves to the next antichain in order; `false` when exhausted.
    fn advance(&mut self) -> bool {
        loop {
            if let Some(idx) = (self.cursor..self.candidates.len()).find(|&i| self.fits(i)) {
                self.chosen.push(idx);
                self.cursor = idx + 1;
                return true;
            }
            match self.chosen.pop() {
                Some(last) => self.cursor = last + 1,
                None => return false,
            }
        }
    }
}

impl Iterator for AntichainIter {
    type Item = Result<Antichain>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if self.started && !self.advance() {
            self.done = true;
            return None;
        }
        self.started = true;
        if self.yielded >= self.max_items {
            self.done = true;
            return Some(Err(Error::Budget(format!(
                "more than {} antichains",
                self.max_items
            ))));
        }
        self.yielded += 1;
        Some(Ok(self.current()))
    }
}

/// All antichains of subsets of `ground` (a mask inside `universe`).
pub fn enumerate_within(universe: Universe, ground: u64, budget: EnumerationBudget) -> Result<AntichainIter> {
    if !universe.contains_mask(ground) {
        return Err(Error::usage("ground set outside the universe"));
    }
    budget.admit(mask::popcount(ground))?;
    let mut candidates: Vec<u64> = mask::submasks(ground).collect();
    candidates.sort_unstable();
    Ok(AntichainIter {
        universe,
        candidates,
        chosen: Vec::new(),
        cursor: 0,
        started: false,
        done: false,
        yielded: 0,
        max_items: budget.max_items,
    })
}

/// Every antichain of `𝒜_n`, including `⊥` and `{∅}`.
pub fn enumerate_all(n: usize, budget: EnumerationBudget) -> Result<AntichainIter> {
    let universe = Universe::new(n)?;
    budget.admit(n)?;
    enumerate_within(universe, universe.full_mask(), budget)
}

/// The members of an interval, by filtering a full enumeration.
///
/// Only the sets below the top can occur, so the enumeration runs over the
/// support of the top rather than all of `N`.
pub fn enumerate_interval(i: &Interval, budget: EnumerationBudget) -> Result<Vec<Antichain>> {
    if !i.is_nonempty() {
        return Ok(Vec::new());
    }
    let ground = i.top().support().bits();
    let mut out = Vec::new();
    for x in enumerate_within(i.universe(), ground, budget)? {
        let x = x?;
        if mask::leq(i.bottom().masks(), x.masks()) && mask::leq(x.masks(), i.top().masks()) {
            out.push(x);
        }
    }
    Ok(out)
}

/// `|[α, β]|` by enumeration.
pub fn size_brute(i: &Interval, budget: EnumerationBudget) -> Result<Count> {
    if !i.is_nonempty() {
        return Ok(Count::zero());
    }
    let ground = i.top().support().bits();
    let mut count = 0u64;
    for x in enumerate_within(i.universe(), ground, budget)? {
        let x = x?;
        if mask::leq(i.bottom().masks(), x.masks()) && mask::leq(x.masks(), i.top().masks()) {
            count += 1;
        }
    }
    Ok(Count::from(count))
}

/// `|𝒜_n|` by enumeration.
pub fn dedekind_brute(n: usize, budget: EnumerationBudget) -> Result<Count> {
    let mut count = 0u64;
    for x in enumerate_all(n, budget)? {
        x?;
        count += 1;
    }
    Ok(Count::from(count))
}
