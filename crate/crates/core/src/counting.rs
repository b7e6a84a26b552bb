//! Uniform levels of an interval poset, the `χ⁻`/`χ⁺` operators, the
//! canonical level decomposition, and exact interval-size algorithms.
//!
//! Every antichain `χ ∈ [α, β]` is `α ∨ χ_m ∨ … ∨ χ_M` for exactly one tuple
//! of uniform layers `χ_l ⊆ 𝒫ˡ` with `χ_{l+1}⁻ ⊆ χ_l`. Fixing every other
//! layer leaves the layers in between free inside `[χ_{l+1}⁻, χ_{l-1}⁺]`,
//! which is what turns the count into a sum of powers of two over half the
//! levels. The pivot and multilevel counters instead cut `[α, β]` into
//! blocks keyed by one or more fixed layers.

use std::fmt;

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::antichain::Antichain;
use crate::count::Count;
use crate::error::{Error, Result};
use crate::interval::{pred_masks, underlying_poset, Interval, IntervalPoset};
use crate::mask;

/// `𝒫ˡ`: the members of size `l`.
pub fn level(p: &IntervalPoset, l: usize) -> Antichain {
    p.level(l)
}

fn require_inside(chi: &Antichain, p: &IntervalPoset) -> Result<()> {
    chi.universe().check_same(p.universe())?;
    if let Some(&x) = chi.masks().iter().find(|&&x| !p.contains_mask(x)) {
        let mut s = String::new();
        let _ = crate::antichain::write_set(&mut s, x);
        return Err(Error::precondition(format!("{s} is not in the interval poset")));
    }
    Ok(())
}

fn require_uniform(chi: &Antichain) -> Result<Option<usize>> {
    if chi.is_bottom() {
        return Ok(None);
    }
    chi.uniform_level()
        .map(Some)
        .ok_or_else(|| Error::precondition(format!("{chi} is not a uniform antichain")))
}

/// `χ⁻`: the in-poset immediate predecessors of a uniform antichain.
pub fn down(chi: &Antichain, p: &IntervalPoset) -> Result<Antichain> {
    require_inside(chi, p)?;
    require_uniform(chi)?;
    let mut out: Vec<u64> = chi
        .masks()
        .iter()
        .flat_map(|&x| pred_masks(x))
        .filter(|&y| p.contains_mask(y))
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(Antichain::from_sorted_unchecked(p.universe(), out))
}

/// `χ⁺` for a nonempty uniform `χ`; the target level is inferred.
pub fn up(chi: &Antichain, p: &IntervalPoset) -> Result<Antichain> {
    match require_uniform(chi)? {
        Some(l) => up_to_level(chi, p, l + 1),
        None => Err(Error::usage(
            "the level of ⊥ is ambiguous; use up_to_level with an explicit target level",
        )),
    }
}

/// `χ⁺ = {X ∈ 𝒫^target | pred X ∩ 𝒫 ⊆ χ}` where `χ ⊆ 𝒫^{target-1}`.
///
/// With `target = 0` only `χ = ⊥` is allowed; over `[⊥, ⊤]` this gives
/// `⊥⁺ = {∅}`.
pub fn up_to_level(chi: &Antichain, p: &IntervalPoset, target: usize) -> Result<Antichain> {
    require_inside(chi, p)?;
    if let Some(l) = require_uniform(chi)? {
        if l + 1 != target {
            return Err(Error::precondition(format!(
                "{chi} has level {l}, cannot lift to level {target}"
            )));
        }
    }
    let out: Vec<u64> = p
        .level_masks(target)
        .iter()
        .copied()
        .filter(|&x| pred_masks(x).all(|y| !p.contains_mask(y) || chi.contains_mask(y)))
        .collect();
    Ok(Antichain::from_sorted_unchecked(p.universe(), out))
}

/// `χ^{-(times)}`.
pub fn down_times(chi: &Antichain, p: &IntervalPoset, times: usize) -> Result<Antichain> {
    let mut cur = chi.clone();
    for _ in 0..times {
        cur = down(&cur, p)?;
    }
    Ok(cur)
}

/// `χ^{+(times)}` starting from a layer at level `from`.
pub fn up_times(chi: &Antichain, p: &IntervalPoset, from: usize, times: usize) -> Result<Antichain> {
    let mut cur = chi.clone();
    for j in 0..times {
        cur = up_to_level(&cur, p, from + j + 1)?;
    }
    Ok(cur)
}

/// Bitset over the members of one level. Levels are capped at 128 members,
/// which covers every level for universes up to nine elements.
pub(crate) type LevelSet = u128;

const MAX_LEVEL_WIDTH: usize = 128;

#[inline]
fn width(s: LevelSet) -> usize {
    s.count_ones() as usize
}

#[inline]
fn full_set(len: usize) -> LevelSet {
    if len == 128 {
        u128::MAX
    } else {
        (1u128 << len) - 1
    }
}

/// Iterates all submasks of `m` in ascending order.
fn subsets_ascending(m: LevelSet) -> impl Iterator<Item = LevelSet> {
    let mut next = Some(0u128);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == m {
            None
        } else {
            Some(cur.wrapping_sub(m) & m)
        };
        Some(cur)
    })
}

/// Iterates every `s` with `core ⊆ s ⊆ full`.
fn supersets(core: LevelSet, full: LevelSet) -> impl Iterator<Item = LevelSet> {
    subsets_ascending(full & !core).map(move |free| free | core)
}

struct LevelData {
    members: Vec<u64>,
    /// For each member, its in-poset predecessors as a set over the level below.
    preds: Vec<LevelSet>,
    full: LevelSet,
}

/// Bitset view of an interval poset, one [`LevelSet`] universe per level.
pub(crate) struct LevelTable {
    universe: crate::antichain::Universe,
    min: usize,
    levels: Vec<LevelData>,
}

impl LevelTable {
    pub(crate) fn new(p: &IntervalPoset) -> Result<Option<Self>> {
        let (Some(min), Some(max)) = (p.min_level(), p.max_level()) else {
            return Ok(None);
        };
        let mut levels: Vec<LevelData> = Vec::with_capacity(max - min + 1);
        let mut below_index: FxHashMap<u64, usize> = FxHashMap::default();
        for l in min..=max {
            let members = p.level_masks(l).to_vec();
            if members.len() > MAX_LEVEL_WIDTH {
                return Err(Error::usage(format!(
                    "level {l} has {} members; level sets are limited to {MAX_LEVEL_WIDTH}",
                    members.len()
                )));
            }
            let preds = members
                .iter()
                .map(|&x| {
                    pred_masks(x)
                        .filter_map(|y| below_index.get(&y))
                        .fold(0u128, |acc, &i| acc | 1u128 << i)
                })
                .collect();
            below_index = members.iter().enumerate().map(|(i, &x)| (x, i)).collect();
            levels.push(LevelData {
                full: full_set(members.len()),
                members,
                preds,
            });
        }
        Ok(Some(LevelTable {
            universe: p.universe(),
            min,
            levels,
        }))
    }

    pub(crate) fn min(&self) -> usize {
        self.min
    }

    pub(crate) fn max(&self) -> usize {
        self.min + self.levels.len() - 1
    }

    fn data(&self, l: usize) -> &LevelData {
        &self.levels[l - self.min]
    }

    pub(crate) fn width(&self, l: usize) -> usize {
        self.data(l).members.len()
    }

    pub(crate) fn full(&self, l: usize) -> LevelSet {
        self.data(l).full
    }

    /// `χ⁻` of a set at level `l` (> min), as a set at level `l - 1`.
    pub(crate) fn down(&self, l: usize, chi: LevelSet) -> LevelSet {
        let preds = &self.data(l).preds;
        let mut out = 0;
        let mut rest = chi;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= preds[i];
        }
        out
    }

    /// `χ⁺` of a set at level `l` (< max), as a set at level `l + 1`.
    pub(crate) fn up(&self, l: usize, chi: LevelSet) -> LevelSet {
        self.data(l + 1)
            .preds
            .iter()
            .enumerate()
            .filter(|(_, &p)| p & !chi == 0)
            .fold(0, |acc, (i, _)| acc | 1u128 << i)
    }

    pub(crate) fn to_antichain(&self, l: usize, s: LevelSet) -> Antichain {
        let members = &self.data(l).members;
        let mut out = Vec::with_capacity(width(s));
        let mut rest = s;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out.push(members[i]);
        }
        Antichain::from_sorted_unchecked(self.universe, out)
    }
}

/// Which of the two even/odd summation schemes to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    /// Sum over `χ_M, χ_{M-2}, …`.
    Top,
    /// Sum over `χ_{M-1}, χ_{M-3}, …` with the free top layer folded into a
    /// leading power of two.
    BelowTop,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Top => "even",
            Parity::BelowTop => "odd",
        })
    }
}

/// Shape of an even/odd computation: `r = ⌊(M−m)/2⌋`, `Δ = (M−m) mod 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvenOddPlan {
    pub r: usize,
    pub delta: usize,
    pub parity: Parity,
}

impl EvenOddPlan {
    pub fn new(min: usize, max: usize, parity: Parity) -> Self {
        EvenOddPlan {
            r: (max - min) / 2,
            delta: (max - min) % 2,
            parity,
        }
    }
}

/// Picks the scheme whose summed levels avoid the widest level of the poset.
/// Ties go to [`Parity::Top`].
pub fn auto_parity(p: &IntervalPoset) -> Parity {
    let (Some(min), Some(max)) = (p.min_level(), p.max_level()) else {
        return Parity::Top;
    };
    let widest = |start: Option<usize>| -> usize {
        let Some(start) = start else { return 0 };
        let mut l = start as isize;
        let mut best = 0;
        // the bottom level is only summed when it is reached exactly
        while l >= min as isize {
            best = best.max(p.level_masks(l as usize).len());
            l -= 2;
        }
        best
    };
    let top_cost = widest(Some(max));
    let below_cost = widest(max.checked_sub(1).filter(|&s| s >= min));
    if below_cost < top_cost {
        Parity::BelowTop
    } else {
        Parity::Top
    }
}

type Memo = Vec<FxHashMap<LevelSet, Count>>;

/// Entries kept per level and task before that level's cache is dropped.
/// Keeps memory bounded when the layer space is far too large to cache.
const MEMO_LEVEL_CAP: usize = 1 << 20;

struct EvenOdd<'a> {
    table: &'a LevelTable,
}

impl<'a> EvenOdd<'a> {
    fn new_memo(&self) -> Memo {
        (0..self.table.levels.len()).map(|_| FxHashMap::default()).collect()
    }

    /// Number of ways to complete the layers strictly below level `l` once
    /// `χ_l = chi` is fixed and the layer above it is accounted for.
    fn completions(&self, l: usize, chi: LevelSet, memo: &mut Memo) -> Count {
        let t = self.table;
        let m = t.min();
        if l == m {
            return Count::one();
        }
        let shadow = t.down(l, chi);
        if l == m + 1 {
            return Count::pow2(t.width(m) - width(shadow));
        }
        if let Some(c) = memo[l - m].get(&chi) {
            return c.clone();
        }
        let core = t.down(l - 1, shadow);
        let base = width(shadow);
        let mut sum = Count::zero();
        for below in supersets(core, t.full(l - 2)) {
            let free = width(t.up(l - 2, below)) - base;
            sum += self.completions(l - 2, below, memo) << free;
        }
        let cache = &mut memo[l - m];
        if cache.len() >= MEMO_LEVEL_CAP {
            cache.clear();
        }
        cache.insert(chi, sum.clone());
        sum
    }

    /// Top-level work items `(exponent, level, layer)` whose weighted
    /// completions add up to the interval size. The first two summation
    /// levels are flattened so that parallel evaluation has enough tasks.
    fn work_items(&self, parity: Parity) -> Vec<(usize, usize, LevelSet)> {
        let t = self.table;
        let (m, top) = (t.min(), t.max());
        let start = match parity {
            Parity::Top => top,
            Parity::BelowTop => top - 1,
        };
        let mut items = Vec::new();
        for chi in subsets_ascending(t.full(start)) {
            let lead = match parity {
                Parity::Top => 0,
                Parity::BelowTop => width(t.up(start, chi)),
            };
            if start >= m + 2 {
                let shadow = t.down(start, chi);
                let core = t.down(start - 1, shadow);
                for below in supersets(core, t.full(start - 2)) {
                    let free = width(t.up(start - 2, below)) - width(shadow);
                    items.push((lead + free, start - 2, below));
                }
            } else {
                items.push((lead, start, chi));
            }
        }
        items
    }

    fn total(&self, parity: Parity) -> Count {
        self.work_items(parity)
            .into_par_iter()
            .map_init(
                || self.new_memo(),
                |memo, (e, l, chi)| self.completions(l, chi, memo) << e,
            )
            .reduce(Count::zero, |a, b| a + b)
    }
}

/// Size of `[α, β]` by one of the two even/odd schemes.
///
/// Returns 0 when `α ≰ β` and 1 when the poset is empty.
pub fn size_even_odd(i: &Interval, parity: Parity) -> Result<Count> {
    if !i.is_nonempty() {
        return Ok(Count::zero());
    }
    let p = underlying_poset(i)?;
    size_from_poset(&p, parity)
}

/// [`size_even_odd`] with the parity chosen by [`auto_parity`].
pub fn size_auto(i: &Interval) -> Result<Count> {
    if !i.is_nonempty() {
        return Ok(Count::zero());
    }
    let p = underlying_poset(i)?;
    let parity = auto_parity(&p);
    size_from_poset(&p, parity)
}

/// Number of antichains in the interval spanned by `p`.
pub fn size_from_poset(p: &IntervalPoset, parity: Parity) -> Result<Count> {
    let Some(table) = LevelTable::new(p)? else {
        return Ok(Count::one());
    };
    if table.min() == table.max() {
        return Ok(Count::pow2(table.width(table.min())));
    }
    Ok(EvenOdd { table: &table }.total(parity))
}

/// One fully expanded summand of an even/odd formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    /// The summed layers, top first, as `(level, layer)`.
    pub layers: Vec<(usize, Antichain)>,
    pub value: Count,
}

/// Expands an even/odd formula into its individual summands, without
/// memoization, in ascending selector order at every level.
pub fn even_odd_terms(i: &Interval, parity: Parity) -> Result<Vec<Term>> {
    if !i.is_nonempty() {
        return Ok(Vec::new());
    }
    let p = underlying_poset(i)?;
    let Some(t) = LevelTable::new(&p)? else {
        return Ok(vec![Term {
            layers: Vec::new(),
            value: Count::one(),
        }]);
    };
    let m = t.min();
    if m == t.max() {
        return Ok(subsets_ascending(t.full(m))
            .map(|chi| Term {
                layers: vec![(m, t.to_antichain(m, chi))],
                value: Count::one(),
            })
            .collect());
    }

    fn expand(
        t: &LevelTable,
        l: usize,
        chi: LevelSet,
        exp: usize,
        path: &mut Vec<(usize, Antichain)>,
        out: &mut Vec<Term>,
    ) {
        let m = t.min();
        path.push((l, t.to_antichain(l, chi)));
        if l == m {
            out.push(Term {
                layers: path.clone(),
                value: Count::pow2(exp),
            });
        } else {
            let shadow = t.down(l, chi);
            if l == m + 1 {
                out.push(Term {
                    layers: path.clone(),
                    value: Count::pow2(exp + t.width(m) - width(shadow)),
                });
            } else {
                let core = t.down(l - 1, shadow);
                for below in supersets(core, t.full(l - 2)) {
                    let free = width(t.up(l - 2, below)) - width(shadow);
                    expand(t, l - 2, below, exp + free, path, out);
                }
            }
        }
        path.pop();
    }

    let start = match parity {
        Parity::Top => t.max(),
        Parity::BelowTop => t.max() - 1,
    };
    let mut out = Vec::new();
    let mut path = Vec::new();
    for chi in subsets_ascending(t.full(start)) {
        let lead = match parity {
            Parity::Top => 0,
            Parity::BelowTop => width(t.up(start, chi)),
        };
        expand(&t, start, chi, lead, &mut path, &mut out);
    }
    Ok(out)
}

/// The canonical layers `(χ_m, …, χ_M)` of an antichain in an interval.
#[derive(Clone, PartialEq, Eq)]
pub struct LevelDecomposition {
    alpha: Antichain,
    min_level: usize,
    layers: Vec<Antichain>,
}

impl LevelDecomposition {
    pub fn alpha(&self) -> &Antichain {
        &self.alpha
    }

    /// Level of the first layer (`m`); meaningless when there are no layers.
    pub fn min_level(&self) -> usize {
        self.min_level
    }

    pub fn layers(&self) -> &[Antichain] {
        &self.layers
    }

    /// `χ_l`, or `⊥` outside `m..=M`.
    pub fn layer(&self, l: usize) -> Antichain {
        l.checked_sub(self.min_level)
            .and_then(|i| self.layers.get(i))
            .cloned()
            .unwrap_or_else(|| Antichain::bottom(self.alpha.universe()))
    }

    /// `(level, layer)` pairs from `m` up to `M`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &Antichain)> {
        self.layers
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.min_level + i, c))
    }

    /// `α ∨ χ_m ∨ … ∨ χ_M`.
    pub fn recombine(&self) -> Antichain {
        let mut family = self.alpha.masks().to_vec();
        for c in &self.layers {
            family.extend_from_slice(c.masks());
        }
        Antichain::from_sorted_unchecked(self.alpha.universe(), mask::max_ac(family))
    }
}

impl fmt::Display for LevelDecomposition {
    /// `l:{..}` per level, space separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (l, c)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}:{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LevelDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ∨ [{}]", self.alpha, self)
    }
}

/// The unique decomposition with `χ_{l+1}⁻ ⊆ χ_l`, built top down by
/// `χ_l = ((χ − α) ∩ 𝒫ˡ) ∪ χ_{l+1}⁻`.
pub fn canonical_decomposition(i: &Interval, chi: &Antichain) -> Result<LevelDecomposition> {
    if !i.contains(chi) {
        return Err(Error::precondition(format!("{chi} is not in {i}")));
    }
    let p = underlying_poset(i)?;
    Ok(decompose_in(i.bottom(), &p, chi))
}

pub(crate) fn decompose_in(alpha: &Antichain, p: &IntervalPoset, chi: &Antichain) -> LevelDecomposition {
    let universe = alpha.universe();
    let (Some(min), Some(max)) = (p.min_level(), p.max_level()) else {
        return LevelDecomposition {
            alpha: alpha.clone(),
            min_level: 0,
            layers: Vec::new(),
        };
    };
    let fresh: Vec<u64> = mask::difference(chi.masks(), alpha.masks());
    let mut layers = vec![Antichain::bottom(universe); max - min + 1];
    let mut carried: Vec<u64> = Vec::new();
    for l in (min..=max).rev() {
        let mut layer: Vec<u64> = fresh
            .iter()
            .copied()
            .filter(|&x| mask::popcount(x) == l && p.contains_mask(x))
            .collect();
        layer.extend_from_slice(&carried);
        layer.sort_unstable();
        layer.dedup();
        carried = layer
            .iter()
            .flat_map(|&x| pred_masks(x))
            .filter(|&y| p.contains_mask(y))
            .collect();
        layers[l - min] = Antichain::from_sorted_unchecked(universe, layer);
    }
    LevelDecomposition {
        alpha: alpha.clone(),
        min_level: min,
        layers,
    }
}

fn join_all<'a>(universe: crate::antichain::Universe, parts: impl IntoIterator<Item = &'a Antichain>) -> Antichain {
    let mut family = Vec::new();
    for p in parts {
        family.extend_from_slice(p.masks());
    }
    Antichain::from_sorted_unchecked(universe, mask::max_ac(family))
}

/// Pivot blocks of `[α, β]` at level `k` for the layer `ρ ⊆ 𝒫ᵏ`:
/// the lower block `[α ∨ ρ, α ∨ 𝒫ᵐ ∨ … ∨ 𝒫^{k−1} ∨ ρ]` and the upper block
/// `[α ∨ ρ, α ∨ ρ ∨ ρ⁺ ∨ … ∨ ρ^{+(M−k)}]`.
pub fn pivot_blocks(i: &Interval, p: &IntervalPoset, k: usize, rho: &Antichain) -> Result<(Interval, Interval)> {
    let (min, max) = levels_of(p)?;
    let universe = i.universe();
    let alpha = i.bottom();
    let base = alpha.join(rho)?;
    let below: Vec<Antichain> = (min..k).map(|l| p.level(l)).collect();
    let lower_top = join_all(universe, below.iter().chain([alpha, rho]));
    let ups = up_chain(rho, p, k, max)?;
    let upper_top = join_all(universe, ups.iter().chain([alpha]));
    Ok((
        Interval::new(base.clone(), lower_top)?,
        Interval::new(base, upper_top)?,
    ))
}

/// `[ρ, ρ⁺, …, ρ^{+(max−k)}]`.
fn up_chain(rho: &Antichain, p: &IntervalPoset, k: usize, max: usize) -> Result<Vec<Antichain>> {
    let mut chain = vec![rho.clone()];
    for l in k + 1..=max {
        let next = up_to_level(chain.last().expect("nonempty"), p, l)?;
        chain.push(next);
    }
    Ok(chain)
}

fn levels_of(p: &IntervalPoset) -> Result<(usize, usize)> {
    match (p.min_level(), p.max_level()) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::precondition("the interval poset is empty")),
    }
}

/// The interval of all `χ ∈ [α, β]` whose canonical layer `k` equals `ρ`:
/// `[α ∨ ρ, α ∨ 𝒫ᵐ ∨ … ∨ 𝒫^{k−1} ∨ ρ ∨ ρ⁺ ∨ … ∨ ρ^{+(M−k)}]`.
pub fn layer_membership_interval(i: &Interval, k: usize, rho: &Antichain) -> Result<Interval> {
    let p = underlying_poset(i)?;
    let (min, max) = levels_of(&p)?;
    if !(min < k && k < max) {
        return Err(Error::usage(format!(
            "pivot level {k} must lie strictly between {min} and {max}"
        )));
    }
    let level_k = p.level(k);
    if !rho.is_member_subset(&level_k) {
        return Err(Error::precondition(format!("{rho} is not inside level {k} of the poset")));
    }
    let below: Vec<Antichain> = (min..k).map(|l| p.level(l)).collect();
    let ups = up_chain(rho, &p, k, max)?;
    let top = join_all(i.universe(), below.iter().chain(ups.iter()).chain([i.bottom()]));
    Interval::new(i.bottom().join(rho)?, top)
}

/// `|[α, β]| = Σ_{χ_k ⊆ 𝒫ᵏ} |lower block| · |upper block|` for `m < k < M`.
pub fn size_pivot(i: &Interval, k: usize) -> Result<Count> {
    if !i.is_nonempty() {
        return Ok(Count::zero());
    }
    let p = underlying_poset(i)?;
    let (min, max) = levels_of(&p).map_err(|_| {
        Error::usage(format!("pivot level {k} needs a poset with at least two levels"))
    })?;
    if !(min < k && k < max) {
        return Err(Error::usage(format!(
            "pivot level {k} must lie strictly between {min} and {max}"
        )));
    }
    let level = p.level(k);
    if level.len() > 63 {
        return Err(Error::usage(format!(
            "pivot level {k} has {} members, too many to enumerate",
            level.len()
        )));
    }
    let selectors: Vec<u64> = (0..1u64 << level.len()).collect();
    selectors
        .into_par_iter()
        .map(|sel| -> Result<Count> {
            let rho = level.select(sel);
            let (lower, upper) = pivot_blocks(i, &p, k, &rho)?;
            Ok(&size_auto(&lower)? * &size_auto(&upper)?)
        })
        .try_reduce(Count::zero, |a, b| Ok(a + b))
}

/// `I_{k_p}` for fixed layers `χ_{k_1}, …, χ_{k_p}` (`p ≥ 2`):
/// `[α ∨ χ_{k_1} ∨ … ∨ χ_{k_p}, α ∨ χ_{k_1} ∨ … ∨ χ_{k_p} ∨ χ_{k_{p−1}}⁺ ∨ … ∨ χ_{k_{p−1}}^{+(k_p−k_{p−1}−1)}]`.
pub fn horizontal_interval(i: &Interval, p: &IntervalPoset, layers: &[(usize, Antichain)]) -> Result<Interval> {
    check_layers(p, layers)?;
    let n = layers.len();
    let (prev_level, prev) = &layers[n - 2];
    let (last_level, _) = &layers[n - 1];
    let base = join_all(i.universe(), layers.iter().map(|(_, c)| c).chain([i.bottom()]));
    let chain = up_chain(prev, p, *prev_level, last_level - 1)?;
    let top = join_all(i.universe(), chain.iter().skip(1).chain([&base]));
    Interval::new(base, top)
}

fn check_layers(p: &IntervalPoset, layers: &[(usize, Antichain)]) -> Result<()> {
    if layers.len() < 2 {
        return Err(Error::usage("a horizontal interval needs at least two fixed layers"));
    }
    for (l, c) in layers {
        if !c.is_member_subset(&p.level(*l)) {
            return Err(Error::precondition(format!("{c} is not inside level {l}")));
        }
    }
    for w in layers.windows(2) {
        let ((l0, c0), (l1, c1)) = (&w[0], &w[1]);
        if l1 <= l0 {
            return Err(Error::usage("layer levels must be strictly increasing"));
        }
        let reach = up_times(c0, p, *l0, l1 - l0)?;
        if !c1.is_member_subset(&reach) {
            return Err(Error::precondition(format!(
                "inconsistent layers: {c1} at level {l1} is not inside {reach}"
            )));
        }
    }
    Ok(())
}

/// Poset of `I_{k_p}` by the closed form
/// `⋃_{k_{p−1} < k < k_p} χ_{k_{p−1}}^{+(k−k_{p−1})} − χ_{k_p}^{−(k_p−k)}`.
pub fn horizontal_poset(layers: &[(usize, Antichain)], i: &Interval) -> Result<IntervalPoset> {
    let p = underlying_poset(i)?;
    check_layers(&p, layers)?;
    let n = layers.len();
    let (lo, prev) = &layers[n - 2];
    let (hi, last) = &layers[n - 1];
    let mut sets = Vec::new();
    let mut upward = prev.clone();
    for k in lo + 1..*hi {
        upward = up_to_level(&upward, &p, k)?;
        let downward = down_times(last, &p, hi - k)?;
        sets.extend(mask::difference(upward.masks(), downward.masks()));
    }
    sets.sort_unstable_by_key(|&m| (m.count_ones(), m));
    Ok(IntervalPoset::from_sorted_unchecked(i.universe(), sets))
}

/// Nested pivot sum over `m < k_1 < … < k_t < M`:
/// `Σ_{χ_{k_1}} |B_{k_1}| Σ_{χ_{k_2} ⊆ χ_{k_1}^{+(k_2−k_1)}} |I_{k_2}| … |U_{k_t}|`,
/// where the `I_{k_j}` are horizontal intervals and `U_{k_t}` is the upper
/// pivot block of the last fixed layer.
pub fn size_multilevel(i: &Interval, ks: &[usize]) -> Result<Count> {
    if !i.is_nonempty() {
        return Ok(Count::zero());
    }
    let p = underlying_poset(i)?;
    let (min, max) = levels_of(&p).map_err(|_| Error::usage("multilevel sums need a nonempty poset"))?;
    if ks.is_empty() {
        return Err(Error::usage("multilevel sums need at least one level"));
    }
    if ks.windows(2).any(|w| w[0] >= w[1]) || ks[0] <= min || *ks.last().unwrap() >= max {
        return Err(Error::usage(format!(
            "levels {ks:?} must be strictly increasing and strictly between {min} and {max}"
        )));
    }
    let first = p.level(ks[0]);
    if first.len() > 63 {
        return Err(Error::usage(format!("level {} is too wide to enumerate", ks[0])));
    }
    let selectors: Vec<u64> = (0..1u64 << first.len()).collect();
    selectors
        .into_par_iter()
        .map(|sel| -> Result<Count> {
            let rho = first.select(sel);
            let (lower, _) = pivot_blocks(i, &p, ks[0], &rho)?;
            let outer = size_auto(&lower)?;
            if outer.is_zero() {
                return Ok(outer);
            }
            let mut layers = vec![(ks[0], rho)];
            let inner = multilevel_inner(i, &p, ks, max, &mut layers)?;
            Ok(&outer * &inner)
        })
        .try_reduce(Count::zero, |a, b| Ok(a + b))
}

fn multilevel_inner(
    i: &Interval,
    p: &IntervalPoset,
    ks: &[usize],
    max: usize,
    layers: &mut Vec<(usize, Antichain)>,
) -> Result<Count> {
    let depth = layers.len();
    if depth == ks.len() {
        let (k, last) = layers.last().expect("at least one layer");
        let alpha = join_all(i.universe(), layers.iter().map(|(_, c)| c).chain([i.bottom()]));
        let chain = up_chain(last, p, *k, max)?;
        let top = join_all(i.universe(), chain.iter().chain([&alpha]));
        return size_auto(&Interval::new(alpha, top)?);
    }
    let (prev_level, prev) = layers.last().cloned().expect("at least one layer");
    let k = ks[depth];
    let range = up_times(&prev, p, prev_level, k - prev_level)?;
    if range.len() > 63 {
        return Err(Error::usage(format!("level {k} range is too wide to enumerate")));
    }
    let mut sum = Count::zero();
    for sel in 0..1u64 << range.len() {
        layers.push((k, range.select(sel)));
        let h = size_auto(&horizontal_interval(i, p, layers)?)?;
        if !h.is_zero() {
            sum += &h * &multilevel_inner(i, p, ks, max, layers)?;
        }
        layers.pop();
    }
    Ok(sum)
}
