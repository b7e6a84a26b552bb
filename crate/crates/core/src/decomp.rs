//! Direct joins of intervals and partitions of intervals into disjoint
//! sub-intervals (by largest nondominating antichains and by direct products).

use std::fmt;

use rayon::prelude::*;

use crate::antichain::{Antichain, Subset, Universe};
use crate::count::Count;
use crate::counting::size_auto;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::mask;
use crate::oracle::{self, EnumerationBudget};

/// Largest universe on which partitions are checked antichain by antichain.
pub const EXACT_CHECK_MAX_N: usize = 4;

/// `χ̌`: the largest antichain none of whose members contains a member of `χ`,
/// computed as `⋀_{X ∈ χ} {N − {x} | x ∈ X}`.
pub fn largest_nondominating(universe: Universe, chi: &Antichain) -> Result<Antichain> {
    universe.check_same(chi.universe())?;
    let full = universe.full_mask();
    let mut acc = vec![full];
    for &x in chi.masks() {
        let avoid: Vec<u64> = mask::bits(x).map(|b| full & !(1 << b)).collect();
        acc = mask::meet(&acc, &avoid);
        if acc.is_empty() {
            break;
        }
    }
    Ok(Antichain::from_sorted_unchecked(universe, acc))
}

/// Identifies a block: the sub-antichain `χ` for nondominating partitions,
/// the pair `(α₁, α₂)` for product partitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockKey {
    /// The `[⊥, ⊥]` block of a product partition.
    Bottom,
    Sub(Antichain),
    Pair(Antichain, Antichain),
}

impl fmt::Display for BlockKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockKey::Bottom => f.write_str("bottom"),
            BlockKey::Sub(c) => write!(f, "{c}"),
            BlockKey::Pair(a, b) => write!(f, "{a}|{b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub key: BlockKey,
    pub interval: Interval,
    pub size: Count,
}

/// Blocks of a claimed partition together with the checks run on them.
#[derive(Clone, Debug)]
pub struct PartitionReport {
    pub blocks: Vec<Block>,
    /// Size of the partitioned interval.
    pub total: Count,
    /// Sum of block sizes.
    pub covered: Count,
    /// `covered == total`.
    pub complete: bool,
    /// No antichain in two blocks. Checked by enumeration when `exact`,
    /// otherwise inferred from size accounting.
    pub disjoint: bool,
    /// Whether every antichain of the partitioned interval was checked.
    pub exact: bool,
}

impl PartitionReport {
    fn assemble(blocks: Vec<Block>, whole: &Interval) -> Result<Self> {
        let total = size_auto(whole)?;
        let covered: Count = blocks.iter().map(|b| b.size.clone()).sum();
        let complete = covered == total;
        let mut report = PartitionReport {
            blocks,
            total,
            covered,
            complete,
            disjoint: complete,
            exact: false,
        };
        if whole.top().support().len() <= EXACT_CHECK_MAX_N {
            report.check_exact(whole)?;
        }
        Ok(report)
    }

    /// Places every antichain of `whole` into the blocks: each must land in
    /// exactly one, and nothing outside `whole` may be covered.
    fn check_exact(&mut self, whole: &Interval) -> Result<()> {
        let budget = EnumerationBudget {
            max_n: EXACT_CHECK_MAX_N,
            ..EnumerationBudget::default()
        };
        let members = oracle::enumerate_interval(whole, budget)?;
        let mut disjoint = true;
        let mut cover = true;
        for x in &members {
            let hits = self.blocks.iter().filter(|b| b.interval.contains(x)).count();
            disjoint &= hits <= 1;
            cover &= hits >= 1;
        }
        // blocks reaching outside `whole` would inflate `covered`
        let inside = self.blocks.iter().all(|b| {
            !b.interval.is_nonempty()
                || (whole.contains(b.interval.bottom()) && whole.contains(b.interval.top()))
        });
        self.disjoint = disjoint;
        self.complete = self.complete && cover && inside;
        self.exact = true;
        Ok(())
    }

    /// `key,bottom,top,size` rows with a header.
    pub fn to_csv_rows(&self) -> Vec<[String; 4]> {
        self.blocks
            .iter()
            .map(|b| {
                [
                    b.key.to_string(),
                    b.interval.bottom().to_string(),
                    b.interval.top().to_string(),
                    b.size.to_string(),
                ]
            })
            .collect()
    }
}

fn sized(blocks: Vec<(BlockKey, Interval)>) -> Result<Vec<Block>> {
    blocks
        .into_par_iter()
        .map(|(key, interval)| {
            let size = size_auto(&interval)?;
            Ok(Block { key, interval, size })
        })
        .collect()
}

fn sub_antichains(gamma: &Antichain) -> Result<impl Iterator<Item = Antichain> + '_> {
    if gamma.len() > 30 {
        return Err(Error::usage(format!(
            "{} members give too many sub-antichains to enumerate",
            gamma.len()
        )));
    }
    Ok((0..1u64 << gamma.len()).map(move |sel| gamma.select(sel)))
}

/// `𝒜_N = ⋃_{χ ⊆ α} [χ, (α − χ)̌]`, one block per sub-antichain.
pub fn partition_by_nondominating(alpha: &Antichain) -> Result<PartitionReport> {
    partition_interval_by_nondominating(&Interval::full(alpha.universe()), alpha)
}

/// `[α, β] = ⋃_{χ ⊆ γ} [α ∨ χ, β ∧ (γ − χ)̌]` for `γ ∈ [α, β]`.
pub fn partition_interval_by_nondominating(i: &Interval, gamma: &Antichain) -> Result<PartitionReport> {
    if !i.contains(gamma) {
        return Err(Error::precondition(format!("{gamma} is not in {i}")));
    }
    let universe = i.universe();
    let mut raw = Vec::new();
    for chi in sub_antichains(gamma)? {
        let rest = gamma.difference(&chi)?;
        let bottom = i.bottom().join(&chi)?;
        let top = i.top().meet(&largest_nondominating(universe, &rest)?)?;
        raw.push((BlockKey::Sub(chi), Interval::new(bottom, top)?));
    }
    PartitionReport::assemble(sized(raw)?, i)
}

/// Which inequality of a direct-join precondition failed.
fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::precondition(what.to_string()))
    }
}

fn check_direct_join(alpha: &Antichain, nu1: &Antichain, nu2: &Antichain, chi: &Antichain) -> Result<Antichain> {
    let lo = nu1.meet(nu2)?;
    let hi = nu1.join(nu2)?;
    require(lo.leq(alpha)?, "nu1 ∧ nu2 ≤ alpha fails")?;
    require(alpha.leq(&hi)?, "alpha ≤ nu1 ∨ nu2 fails")?;
    require(alpha.leq(chi)?, "alpha ≤ chi fails")?;
    require(chi.leq(&hi)?, "chi ≤ nu1 ∨ nu2 fails")?;
    Ok(hi)
}

/// Splits `χ ∈ [α, ν₁ ∨ ν₂]` into its unique factors
/// `((χ ∧ ν₁) ∨ α, (χ ∧ ν₂) ∨ α) ∈ [α, α ∨ ν₁] × [α, α ∨ ν₂]`.
pub fn direct_join_split(
    alpha: &Antichain,
    nu1: &Antichain,
    nu2: &Antichain,
    chi: &Antichain,
) -> Result<(Antichain, Antichain)> {
    check_direct_join(alpha, nu1, nu2, chi)?;
    Ok((chi.meet(nu1)?.join(alpha)?, chi.meet(nu2)?.join(alpha)?))
}

/// The split for the second form `[α ∧ ν₁, ν₁] ⊻ [α ∧ ν₂, ν₂]`: `(χ ∧ ν₁, χ ∧ ν₂)`.
pub fn direct_join_split_dual(
    alpha: &Antichain,
    nu1: &Antichain,
    nu2: &Antichain,
    chi: &Antichain,
) -> Result<(Antichain, Antichain)> {
    check_direct_join(alpha, nu1, nu2, chi)?;
    Ok((chi.meet(nu1)?, chi.meet(nu2)?))
}

fn check_split(universe: Universe, n1: Subset, n2: Subset) -> Result<()> {
    universe.check_same(n1.universe())?;
    universe.check_same(n2.universe())?;
    if n1.is_empty() || n2.is_empty() {
        return Err(Error::usage("both parts of the split must be nonempty"));
    }
    if n1.bits() & n2.bits() != 0 || n1.bits() | n2.bits() != universe.full_mask() {
        return Err(Error::usage(format!("{n1} and {n2} do not partition the universe")));
    }
    Ok(())
}

/// Streams the non-`⊥` blocks `(α₁, α₂, [α₁ ∨ α₂, α₁ ⊗ α₂])` of the product
/// partition over `(𝒜_{N₁} − ⊥) × (𝒜_{N₂} − ⊥)`. The second factor list is
/// materialized; the first is streamed.
pub fn product_blocks(
    universe: Universe,
    n1: Subset,
    n2: Subset,
    budget: EnumerationBudget,
) -> Result<impl Iterator<Item = Result<(Antichain, Antichain, Interval)>>> {
    check_split(universe, n1, n2)?;
    let second: Vec<Antichain> = oracle::enumerate_within(universe, n2.bits(), budget)?
        .filter(|r| !matches!(r, Ok(a) if a.is_bottom()))
        .collect::<Result<_>>()?;
    let first = oracle::enumerate_within(universe, n1.bits(), budget)?
        .filter(|r| !matches!(r, Ok(a) if a.is_bottom()));
    Ok(first.flat_map(move |a1| {
        let pairs: Vec<Result<(Antichain, Antichain, Interval)>> = match a1 {
            Err(e) => vec![Err(e)],
            Ok(a1) => second
                .iter()
                .map(|a2| {
                    let bottom = a1.join(a2)?;
                    let top = a1.direct_product(a2)?;
                    Ok((a1.clone(), a2.clone(), Interval::new(bottom, top)?))
                })
                .collect(),
        };
        pairs
    }))
}

/// `𝒜_N = {[⊥, ⊥]} ∪ ⋃ [α₁ ∨ α₂, α₁ ⊗ α₂]` with every block sized.
pub fn partition_by_product(universe: Universe, n1: Subset, n2: Subset) -> Result<PartitionReport> {
    let budget = EnumerationBudget::extended();
    let mut raw = vec![(
        BlockKey::Bottom,
        Interval::new(Antichain::bottom(universe), Antichain::bottom(universe))?,
    )];
    for block in product_blocks(universe, n1, n2, budget)? {
        let (a1, a2, interval) = block?;
        raw.push((BlockKey::Pair(a1, a2), interval));
    }
    PartitionReport::assemble(sized(raw)?, &Interval::full(universe))
}

/// `|𝒜_N| = 1 + Σ |[α₁ ∨ α₂, α₁ ⊗ α₂]|`, block sizes by the level counter.
pub fn dedekind_by_product(universe: Universe, n1: Subset, n2: Subset) -> Result<Count> {
    let blocks: Vec<Interval> = product_blocks(universe, n1, n2, EnumerationBudget::extended())?
        .map(|b| b.map(|(_, _, i)| i))
        .collect::<Result<_>>()?;
    let sum = blocks
        .into_par_iter()
        .map(|i| size_auto(&i))
        .try_reduce(Count::zero, |a, b| Ok(a + b))?;
    Ok(sum + Count::one())
}

/// The balanced split `{1..⌈n/2⌉} | {⌈n/2⌉+1..n}`.
pub fn balanced_split(universe: Universe) -> Result<(Subset, Subset)> {
    let n = universe.n();
    if n < 2 {
        return Err(Error::usage("a product split needs at least two elements"));
    }
    let k = n.div_ceil(2);
    let lo = (1u64 << k) - 1;
    Ok((
        Subset::new(universe, lo)?,
        Subset::new(universe, universe.full_mask() & !lo)?,
    ))
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

    #[test]
    fn nondominating_examples() {
        assert_eq!(largest_nondominating(u(3), &ac(3, "{{1}}")).unwrap(), ac(3, "{{2,3}}"));
        assert_eq!(largest_nondominating(u(3), &ac(3, "{}")).unwrap(), Antichain::top(u(3)));
        assert_eq!(largest_nondominating(u(3), &ac(3, "{{1},{2}}")).unwrap(), ac(3, "{{3}}"));
        assert_eq!(largest_nondominating(u(3), &ac(3, "{{}}")).unwrap(), ac(3, "{}"));
        assert_eq!(
            largest_nondominating(u(3), &ac(3, "{{1,2}}")).unwrap(),
            ac(3, "{{1,3},{2,3}}")
        );
    }

    #[test]
    fn nondominating_partition_n1() {
        let r = partition_by_nondominating(&Antichain::top(u(1))).unwrap();
        let intervals: Vec<String> = r.blocks.iter().map(|b| b.interval.to_string()).collect();
        assert_eq!(intervals, ["[{}, {{}}]", "[{{1}}, {{1}}]"]);
        assert_eq!(r.total, 3u64);
        assert!(r.complete && r.disjoint && r.exact);
    }

    #[test]
    fn nondominating_partition_of_bottom() {
        let r = partition_by_nondominating(&Antichain::bottom(u(3))).unwrap();
        assert_eq!(r.blocks.len(), 1);
        assert_eq!(r.blocks[0].interval, Interval::full(u(3)));
        assert!(r.complete && r.disjoint);
    }

    #[test]
    fn interval_partition_singleton() {
        let a = ac(3, "{{1},{2,3}}");
        let i = Interval::new(a.clone(), a.clone()).unwrap();
        let r = partition_interval_by_nondominating(&i, &a).unwrap();
        let nonempty: Vec<&Block> = r.blocks.iter().filter(|b| !b.size.is_zero()).collect();
        assert_eq!(nonempty.len(), 1);
        assert_eq!(nonempty[0].size, 1u64);
        assert!(r.complete && r.disjoint);
        assert!(partition_interval_by_nondominating(&i, &ac(3, "{{1}}")).is_err());
    }

    #[test]
    fn direct_join_examples() {
        let (alpha, nu1, nu2) = (ac(2, "{{}}"), ac(2, "{{1}}"), ac(2, "{{2}}"));
        let chi = ac(2, "{{1},{2}}");
        assert_eq!(
            direct_join_split(&alpha, &nu1, &nu2, &chi).unwrap(),
            (ac(2, "{{1}}"), ac(2, "{{2}}"))
        );
        assert_eq!(
            direct_join_split(&alpha, &nu1, &nu2, &alpha).unwrap(),
            (alpha.clone(), alpha.clone())
        );
        let top = nu1.join(&nu2).unwrap();
        assert_eq!(
            direct_join_split(&alpha, &nu1, &nu2, &top).unwrap(),
            (alpha.join(&nu1).unwrap(), alpha.join(&nu2).unwrap())
        );
        let err = direct_join_split(&ac(2, "{{1,2}}"), &nu1, &nu2, &chi).unwrap_err();
        assert!(err.to_string().contains("alpha ≤ nu1 ∨ nu2"));
        let err = direct_join_split(&ac(2, "{}"), &nu1, &nu2, &chi).unwrap_err();
        assert!(err.to_string().contains("nu1 ∧ nu2 ≤ alpha"));
    }

    #[test]
    fn product_partition_n2() {
        let universe = u(2);
        let n1 = Subset::from_elements(universe, &[1]).unwrap();
        let n2 = Subset::from_elements(universe, &[2]).unwrap();
        let r = partition_by_product(universe, n1, n2).unwrap();
        let sizes: Vec<u64> = r.blocks.iter().map(|b| b.size.to_u64().unwrap()).collect();
        assert_eq!(sizes, [1, 1, 1, 1, 2]);
        assert_eq!(r.covered, 6u64);
        assert!(r.complete && r.disjoint && r.exact);
        assert_eq!(r.blocks[4].interval.to_string(), "[{{1},{2}}, {{1,2}}]");
        assert_eq!(dedekind_by_product(universe, n1, n2).unwrap(), 6u64);
    }

    #[test]
    fn invalid_splits() {
        let universe = u(3);
        let a = Subset::from_elements(universe, &[1]).unwrap();
        let b = Subset::from_elements(universe, &[2]).unwrap();
        let ab = Subset::from_elements(universe, &[1, 2]).unwrap();
        let c = Subset::from_elements(universe, &[2, 3]).unwrap();
        assert!(partition_by_product(universe, a, b).is_err());
        assert!(partition_by_product(universe, ab, c).is_err());
        assert!(partition_by_product(universe, Subset::empty(universe), Subset::full(universe)).is_err());
    }

    #[test]
    fn balanced_splits() {
        let (a, b) = balanced_split(u(5)).unwrap();
        assert_eq!((a.bits(), b.bits()), (0b00111, 0b11000));
        assert!(balanced_split(u(1)).is_err());
    }
}
