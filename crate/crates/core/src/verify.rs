//! Randomized invariant suites. Every check samples instances from a seeded
//! generator, walks universes from small to large so that the first failure
//! is also a small one, and stops at the first counterexample.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use crate::antichain::{Antichain, Subset, Universe};
use crate::count::Count;
use crate::counting::{
    canonical_decomposition, down, horizontal_interval, horizontal_poset, layer_membership_interval,
    pivot_blocks, size_auto, size_even_odd, size_multilevel, size_pivot, up_times, up_to_level, Parity,
};
use crate::decomp::{self, BlockKey};
use crate::error::{Error, Result};
use crate::interval::{interval_from_poset, is_interval_poset, lift_interval, underlying_poset, Interval, IntervalPoset};
use crate::mask;
use crate::oracle::{self, EnumerationBudget};

pub type VerifyRng = ChaCha8Rng;

pub fn rng(seed: u64) -> VerifyRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Outcome of one invariant check.
#[derive(Clone, Debug)]
pub struct Check {
    pub theorem: &'static str,
    pub trials: u64,
    pub counterexample: Option<String>,
}

impl Check {
    fn new(theorem: &'static str) -> Self {
        Check {
            theorem,
            trials: 0,
            counterexample: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(f, "PASS  {} ({} trials)", self.theorem, self.trials),
            Some(c) => write!(f, "FAIL  {} after {} trials: {c}", self.theorem, self.trials),
        }
    }
}

/// Records a counterexample and returns from the enclosing check.
macro_rules! ensure {
    ($check:ident, $cond:expr, $($msg:tt)+) => {
        if !$cond {
            $check.counterexample = Some(format!($($msg)+));
            return Ok($check);
        }
    };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Partitions,
    DirectJoin,
    UpDown,
    Posets,
    Counting,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "partitions" => Suite::Partitions,
            "directjoin" => Suite::DirectJoin,
            "updown" => Suite::UpDown,
            "posets" => Suite::Posets,
            "counting" => Suite::Counting,
            "all" => Suite::All,
            _ => {
                return Err(Error::usage(format!(
                    "unknown suite `{s}` (expected partitions, directjoin, updown, posets, counting or all)"
                )))
            }
        })
    }
}

/// Runs a suite over universes of size up to `n` (at most 5).
pub fn run_suite(suite: Suite, n: usize, seed: u64, trials: usize) -> Result<Vec<Check>> {
    if n > 5 {
        return Err(Error::usage("oracle-backed suites need n ≤ 5"));
    }
    let small = n.min(4);
    let mut out = Vec::new();
    let mut rng = rng(seed);
    let r = &mut rng;
    if matches!(suite, Suite::Partitions | Suite::All) {
        out.push(largest_nondominating_brute(small)?);
        out.push(nondominating_partition(r, small, trials)?);
        out.push(block_key_lemma(r, small, trials)?);
        out.push(interval_partition(r, small, trials)?);
        out.push(product_partition(small)?);
        out.push(product_block_lemma(small)?);
        out.push(poset_direct_join(r, n, trials)?);
    }
    if matches!(suite, Suite::DirectJoin | Suite::All) {
        out.push(direct_join(r, small, trials, false)?);
        out.push(direct_join(r, small, trials, true)?);
    }
    if matches!(suite, Suite::UpDown | Suite::All) {
        out.extend(updown(r, small, trials)?);
        out.push(uniform_join_is_union(r, small, trials)?);
        out.push(choice_count(r, small, trials)?);
        out.push(levelwise_meet(r, small, trials)?);
        out.push(monotone_layers(r, small, trials)?);
        out.push(split_lemma(r, small, trials)?);
        out.push(layer_lemma(r, small, trials)?);
        out.push(horizontal_posets(r, small, trials)?);
        out.push(layer_membership(r, small, trials)?);
    }
    if matches!(suite, Suite::Posets | Suite::All) {
        out.push(spanning(r, small, trials)?);
        out.push(poset_round_trip(r, n, trials)?);
        out.push(isomorphic_lifts(r, n, trials)?);
    }
    if matches!(suite, Suite::Counting | Suite::All) {
        out.push(method_agreement(r, n, trials)?);
    }
    Ok(out)
}

// ---------------------------------------------------------------- sampling

/// Universe size for trial `t` of `trials`, ascending from `lo` to `hi`.
fn trial_n(t: usize, trials: usize, lo: usize, hi: usize) -> usize {
    if hi <= lo {
        return hi;
    }
    lo + t * (hi - lo + 1) / trials.max(1)
}

/// Up to `n + 1` random sets, reduced to an antichain. Small universes get
/// `⊥` and `{∅}` regularly.
pub fn random_antichain(rng: &mut VerifyRng, u: Universe) -> Antichain {
    let full = u.full_mask();
    let k = rng.gen_range(0..=u.n() + 1);
    let family: Vec<u64> = (0..k).map(|_| rng.gen::<u64>() & full).collect();
    Antichain::from_sorted_unchecked(u, mask::max_ac(family))
}

/// Random antichain whose members lie inside `ground`.
pub fn random_antichain_within(rng: &mut VerifyRng, u: Universe, ground: u64) -> Antichain {
    let k = rng.gen_range(0..=mask::popcount(ground) + 1);
    let family: Vec<u64> = (0..k).map(|_| rng.gen::<u64>() & ground).collect();
    Antichain::from_sorted_unchecked(u, mask::max_ac(family))
}

/// A nonempty interval `[α, α ∨ γ]`; a fifth of the time the whole lattice.
pub fn random_interval(rng: &mut VerifyRng, u: Universe) -> Interval {
    if rng.gen_ratio(1, 5) {
        return Interval::full(u);
    }
    let alpha = random_antichain(rng, u);
    let top = Antichain::from_sorted_unchecked(u, mask::join(alpha.masks(), random_antichain(rng, u).masks()));
    Interval::new(alpha, top).expect("same universe")
}

/// Each mask kept with probability one half.
fn random_subfamily(rng: &mut VerifyRng, masks: &[u64]) -> Vec<u64> {
    masks.iter().copied().filter(|_| rng.gen_bool(0.5)).collect()
}

/// Random uniform antichain inside level `l` of `p`.
pub fn random_level_subset(rng: &mut VerifyRng, p: &IntervalPoset, l: usize) -> Antichain {
    Antichain::from_sorted_unchecked(p.universe(), random_subfamily(rng, p.level_masks(l)))
}

/// `α ∨ maxAC(S)` for a random `S ⊆ 𝒫`: always a member of `i`.
pub fn random_member(rng: &mut VerifyRng, i: &Interval, p: &IntervalPoset) -> Antichain {
    let s = random_subfamily(rng, p.masks());
    Antichain::from_sorted_unchecked(i.universe(), mask::join(i.bottom().masks(), &mask::max_ac(s)))
}

/// Samples intervals until one has at least `levels` nonempty poset levels.
fn interval_with_levels(rng: &mut VerifyRng, u: Universe, levels: usize) -> Result<Option<(Interval, IntervalPoset)>> {
    for _ in 0..200 {
        let i = random_interval(rng, u);
        let p = underlying_poset(&i)?;
        if let (Some(lo), Some(hi)) = (p.min_level(), p.max_level()) {
            if hi - lo + 1 >= levels {
                return Ok(Some((i, p)));
            }
        }
    }
    Ok(None)
}

fn all_antichains(n: usize) -> Result<Vec<Antichain>> {
    oracle::enumerate_all(n, EnumerationBudget::default())?.collect()
}

// ---------------------------------------------------------------- partitions

/// `χ̌` against `maxAC` of every set that contains no member of `χ`.
pub fn largest_nondominating_brute(n: usize) -> Result<Check> {
    let mut check = Check::new("largest nondominating antichain = meet of {N − {x}}");
    for m in 0..=n {
        let u = Universe::new(m)?;
        for chi in all_antichains(m)? {
            check.trials += 1;
            let free: Vec<u64> = mask::submasks(u.full_mask())
                .filter(|&x| !chi.masks().iter().any(|&y| mask::is_subset(y, x)))
                .collect();
            let want = Antichain::from_sorted_unchecked(u, mask::max_ac(free));
            let got = decomp::largest_nondominating(u, &chi)?;
            ensure!(check, got == want, "n={m}, χ={chi}: formula gives {got}, brute force {want}");
        }
    }
    Ok(check)
}

/// Exhaustive over `𝒜_n` for `n ≤ 3`, then `trials` random `α` at `n = 4`.
pub fn nondominating_partition(rng: &mut VerifyRng, n: usize, trials: usize) -> Result<Check> {
    let mut check = Check::new("nondominating partition is a disjoint cover");
    let mut alphas: Vec<Antichain> = Vec::new();
    for m in 0..=n.min(3) {
        alphas.extend(all_antichains(m)?);
    }
    if n >= 4 {
        let u = Universe::new(n)?;
        alphas.extend((0..trials).map(|_| random_antichain(rng, u)));
    }
    for alpha in alphas {
        check.trials += 1;
        let r = decomp::partition_by_nondominating(&alpha)?;
        ensure!(
            check,
            r.complete && r.disjoint,
            "n={}, α={alpha}: blocks cover {} of {}, disjoint={}",
            alpha.universe().n(),
            r.covered,
            r.total,
            r.disjoint
        );
    }
    Ok(check)
}

/// `(σ ∧ α) ∩ α = χ` for every `σ` in the block keyed by `χ`.
pub fn block_key_lemma(rng: &mut VerifyRng, n: usize, trials: usize) -> Result<Check> {
    let mut check = Check::new("block key lemma (σ ∧ α) ∩ α = χ");
    let budget = EnumerationBudget::default();
    for t in 0..trials {
        let u = Universe::new(trial_n(t, trials, 1, n))?;
        let alpha = random_antichain(rng, u);
        let r = decomp::partition_by_nondominating(&alpha)?;
        check.trials += 1;
        for b in &r.blocks {
            let BlockKey::Sub(chi) = &b.key else { unreachable!() };
            for sigma in oracle::enumerate_interval(&b.interval, budget)? {
                let got = sigma.meet(&alpha)?.intersection(&alpha)?;
                ensure!(check, &got == chi, "α={alpha}, σ={sigma} in block {chi}: got {got}");
            }
        }
    }
    Ok(check)
}

/// `[α, β] = ⋃_{χ ⊆ γ} [α ∨ χ, β ∧ (γ−χ)̌]` on random triples.
pub fn interval_partition(rng: &mut VerifyRng, n: usize, trials: usize) -> Result<Check> {
    let mut check = Check::new("interval nondominating partition is a disjoint cover");
    for t in 0..trials {
        let u = Universe::new(trial_n(t, trials, 1, n))?;
        let i = random_interval(rng, u);
        let p = underlying_poset(&i)?;
        let gamma = random_member(rng, &i, &p);
        check.trials += 1;
        let r = decomp::partition_interval_by_nondominating(&i, &gamma)?;
        ensure!(
            check,
            r.complete && r.disjoint,
            "i={i}, γ={gamma}: blocks cover {} of {}, disjoint={}",
            r.covered,
            r.total,
            r.disjoint
        );
    }
    Ok(check)
}

fn splits(u: Universe) -> Result<Vec<(Subset, Subset)>> {
    let mut out = Vec::new();
    if u.n() >= 2 {
        let first = Subset::new(u, 1)?;
        out.push((first, Subset::new(u, u.full_mask() & !1)?));
        let balanced = decomp::balanced_split(u)?;
        if balanced != out[0] {
            out.push(balanced);
        }
    }
    Ok(out)
}

/// Product partitions for `{1}|{2..n}` and the balanced split, `2 ≤ n`.
pub fn product_partition(n: usize) -> Result<Check> {
    let mut check = Check::new("product partition is a disjoint cover of 𝒜_N");
    for m in 2..=n {
        let u = Universe::new(m)?;
        let want = oracle::dedekind_brute(m, EnumerationBudget::default())?;
        for (n1, n2) in splits(u)? {
            check.trials += 1;
            let r = decomp::partition_by_product(u, n1, n2)?;
            ensure!(
                check,
                r.complete && r.disjoint && r.covered == want,
                "n={m}, split {n1}|{n2}: blocks cover {} of {want}, disjoint={}",
                r.covered,
                r.disjoint
            );
        }
    }
    Ok(check)
}

/// Every `χ ≠ ⊥` lies in the block keyed by `(χ ∧ {N₁}, χ ∧ {N₂})`.
pub fn product_block_lemma(n: usize) -> Result<Check> {
    let mut check = Check::new("χ ∈ [α₁ ∨ α₂, α₁ ⊗ α₂] for αᵢ = χ ∧ {Nᵢ}");
    for m in 2..=n {
        let u = Universe::new(m)?;
        for (n1, n2) in splits(u)? {
            let (s1, s2) = (Antichain::singleton(n1), Antichain::singleton(n2));
            for chi in all_antichains(m)?.into_iter().filter(|c| !c.is_bottom()) {
                check.trials += 1;
                let (a1, a2) = (chi.meet(&s1)?, chi.meet(&s2)?);
                let block = Interval::new(a1.join(&a2)?, a1.direct_product(&a2)?)?;
                ensure!(
                    check,
                    !a1.is_bottom() && !a2.is_bottom() && block.contains(&chi),
                    "n={m}, split {n1}|{n2}, χ={chi}: not in {block}"
                );
            }
        }
    }
    Ok(check)
}

/// For incomparable interval posets `𝒮₁, 𝒮₂` on disjoint parts of `N`,
/// `𝒮₁ ∪ 𝒮₂` is an interval poset spanning an interval of size `|ℐ_𝒮₁|·|ℐ_𝒮₂|`.
pub fn poset_direct_join(rng: &mut VerifyRng, n: usize, trials: usize) -> Result<Check> {
    let mut check = Check::new("direct join of incomparable interval posets");
    if n < 2 {
        return Ok(check);
    }
    let budget = EnumerationBudget::default();
    for t in 0..trials {
        let u = Universe::new(trial_n(t, trials, 2, n))?;
        let split = rng.gen_range(1..u.n());
        let g1 = (1u64 << split) - 1;
        let g2 = u.full_mask() & !g1;
        let mut posets = Vec::new();
        for g in [g1, g2] {
            let a = random_antichain_within(rng, u, g);
            let b = Antichain::from_sorted_unchecked(u, mask::join(a.masks(), random_antichain_within(rng, u, g).masks()));
            posets.push(underlying_poset(&Interval::new(a, b)?)?);
        }
        // ∅ is comparable with everything
        if posets.iter().any(|p| p.contains_mask(0)) {
            continue;
        }
        check.trials += 1;
        let union = IntervalPoset::new(u, posets[0].masks().iter().chain(posets[1].masks()).copied());
        ensure!(
            check,
            union.is_ok() && is_interval_poset(union.as_ref().map(|p| p.masks()).unwrap_or(&[])),
            "𝒮₁ = {:?}, 𝒮₂ = {:?}: union fails convexity",
            posets[0].masks(),
            posets[1].masks()
        );
        let union = union?;
        let whole = oracle::size_brute(&interval_from_poset(&union), budget)?;
        let parts = &oracle::size_brute(&interval_from_poset(&posets[0]), budget)?
            * &oracle::size_brute(&interval_from_poset(&posets[1]), budget)?;
        ensure!(
            check,
            whole == parts,
            "𝒮₁ = {:?}, 𝒮₂ = {:?}: |ℐ| = {whole}, product of parts = {parts}",
            posets[0].masks(),
            posets[1].masks()
        );
    }
    Ok(check)
}

// ---------------------------------------------------------------- direct join

/// Direct join of `[α, α ∨ ν₁]` and `[α, α ∨ ν₂]` (or of `[α ∧ νᵢ, νᵢ]` with
/// `second_form`): every `χ ∈ [α, ν₁ ∨ ν₂]` has exactly one recombining pair,
/// and it is the formula pair.
pub fn direct_join(rng: &mut VerifyRng, n: usize, trials: usize, second_form: bool) -> Result<Check> {
    let mut check = Check::new(if second_form {
        "direct join [α ∧ ν₁, ν₁] ⊻ [α ∧ ν₂, ν₂]"
    } else {
        "direct join [α, α ∨ ν₁] ⊻ [α, α ∨ ν₂]"
    });
    let budget = EnumerationBudget::default();
    for t in 0..trials {
        let u = Universe::new(trial_n(t, trials, 1, n))?;
        let (nu1, nu2) = (random_antichain(rng, u), random_antichain(rng, u));
        let hull = Interval::new(nu1.meet(&nu2)?, nu1.join(&nu2)?)?;
        let alpha = random_member(rng, &hull, &underlying_poset(&hull)?);
        let top = hull.top().clone();
        let factors = if second_form {
            [
                Interval::new(alpha.meet(&nu1)?, nu1.clone())?,
                Interval::new(alpha.meet(&nu2)?, nu2.clone())?,
            ]
        } else {
            [
                Interval::new(alpha.clone(), alpha.join(&nu1)?)?,
                Interval::new(alpha.clone(), alpha.join(&nu2)?)?,
            ]
        };
        let f1 = oracle::enumerate_interval(&factors[0], budget)?;
        let f2 = oracle::enumerate_interval(&factors[1], budget)?;
        let mut hits: FxHashMap<Antichain, (u32, usize, usize)> = FxHashMap::default();
        for (a, x1) in f1.iter().enumerate() {
            for (b, x2) in f2.iter().enumerate() {
                let e = hits.entry(x1.join(x2)?).or_insert((0, a, b));
                e.0 += 1;
            }
        }
        check.trials += 1;
        let whole = Interval::new(alpha.clone(), top)?;
        let members = oracle::enumerate_interval(&whole, budget)?;
        ensure!(
            check,
            hits.len() == members.len(),
            "α={alpha}, ν₁={nu1}, ν₂={nu2}: pairs join to {} antichains, interval has {}",
            hits.len(),
            members.len()
        );
        for chi in members {
            let Some(&(count, a, b)) = hits.get(&chi) else {
                check.counterexample = Some(format!("α={alpha}, ν₁={nu1}, ν₂={nu2}: no pair joins to {chi}"));
                return Ok(check);
            };
            ensure!(check, count == 1, "α={alpha}, ν₁={nu1}, ν₂={nu2}: {count} pairs join to {chi}");
            let formula = if second_form {
                decomp::direct_join_split_dual(&alpha, &nu1, &nu2, &chi)?
            } else {
                decomp::direct_join_split(&alpha, &nu1, &nu2, &chi)?
            };
            ensure!(
                check,
                formula == (f1[a].clone(), f2[b].clone()),
                "α={alpha}, ν₁={nu1}, ν₂={nu2}, χ={chi}: formula gives {formula:?}, unique pair is ({}, {})",
                f1[a],
                f2[b]
            );
        }
    }
    Ok(check)
}

// ---------------------------------------------------------------- operators

fn member_subset(a: &Antichain, b: &Antichain) -> bool {
    a.is_member_subset(b)
}

/// The five parts of the up/down proposition, (ii) in the form
/// `δ ⊆ (δ⁻)⁺` (the printed `(δ⁻)⁺ ⊆ δ` fails already for `n = 2`).
pub fn updown(rng: &mut VerifyRng, n: usize, trials: usize) -> Result<Vec<Check>> {
    let mut checks = [
        Check::new("updown (i) γ ⊆ δ⁺ ⇔ γ⁻ ⊆ δ"),
        Check::new("updown (ii) δ ⊆ (δ⁻)⁺"),
        Check::new("updown (iii) (δ⁺)⁻ ⊆ δ"),
        Check::new("updown (iv) γ ⊆ δ⁺ ⇒ γ⁺ ⊆ δ⁺⁺"),
        Check::new("updown (v) γ⁻ ⊆ δ ⇒ γ⁻⁻ ⊆ δ⁻"),
    ];
    for t in 0..trials {
        if checks.iter().any(|c| !c.passed()) {
            break;
        }
        let u = Universe::new(trial_n(t, trials, 1, n))?;
        let Some((i, p)) = interval_with_levels(rng, u, 2)? else { continue };
        let (lo, hi) = (p.min_level().unwrap(), p.max_level().unwrap());
        let l = rng.gen_range(lo..hi);
        let delta = random_level_subset(rng, &p, l);
        // bias γ towards δ⁺ so that both sides of the implications occur
        let delta_up = up_to_level(&delta, &p, l + 1)?;
        let gamma = if rng.gen_bool(0.5) {
            Antichain::from_sorted_unchecked(u, random_subfamily(rng, delta_up.masks()))
        } else {
            random_level_subset(rng, &p, l + 1)
        };
        let gamma_down = down(&gamma, &p)?;
        let ctx = format!("i={i}, l={l}, δ={delta}, γ={gamma}");
        for c in checks.iter_mut() {
            c.trials += 1;
        }
        let lhs = member_subset(&gamma, &delta_up);
        if lhs != member_subset(&gamma_down, &delta) {
            checks[0].counterexample = Some(format!("{ctx}: γ ⊆ δ⁺ is {lhs}, γ⁻ ⊆ δ is {}", !lhs));
        }
        // (ii) at level l + 1 with γ playing δ
        let back = up_to_level(&gamma_down, &p, l + 1)?;
        if !member_subset(&gamma, &back) {
            checks[1].counterexample = Some(format!("{ctx}: (γ⁻)⁺ = {back}"));
        }
        let round = down(&delta_up, &p)?;
        if !member_subset(&round, &delta) {
            checks[2].counterexample = Some(format!("{ctx}: (δ⁺)⁻ = {round}"));
        }
        if lhs {
            let g2 = up_to_level(&gamma, &p, l + 2)?;
            let d2 = up_to_level(&delta_up, &p, l + 2)?;
            if !member_subset(&g2, &d2) {
                checks[3].counterexample = Some(format!("{ctx}: γ⁺ = {g2}, δ⁺⁺ = {d2}"));
            }
        }
        if member_subset(&gamma_down, &delta) {
            let g2 = down(&gamma_down, &p)?;
            let d1 = down(&delta, &p)?;
            if !member_subset(&g2, &d1) {
                checks[4].counterexample = Some(format!("{ctx}: γ⁻⁻ = {g2}, δ⁻ = {d1}"));
            }
        }
    }
    Ok(checks.into())
}

/// Same-level uniform antichains: `≤` is member inclusion and `∨` is union.
pub fn uniform_join_is_union(rng: &mut VerifyRng, n: usize, trials: usize) -> Result<Check> {
    let mut check = Check::new("uniform antichains: γ ∨ δ = γ ∪ δ, ≤ is ⊆");
    for t in 0..trials {
        let u = Universe::new(trial_n(t, trials, 1, n))?;
        let l = rng.gen_range(0..=u.n());
        let level: Vec<u64> = mask::submasks(u.full_mask())
            .filter(|&x| mask::popcount(x) == l)
            .collect();
        let g = Antichain::from_unsorted_unchecked(u, random_subfamily(rng, &level));
        let d = Antichain::from_unsorted_unchecked(u, random_subfamily(rng, &level));
        check.trials += 1;
        ensure!(
            check,
            g.join(&d)? == g.union_members(&d)? && g.leq(&d)? == g.is_member_subset(&d),
            "γ={g}, δ={d}"
        );
    }
    Ok(check)
}

/// With `χ_i` and `χ_{i+2}` fixed, exactly `2^{|χ_i⁺| − |χ_{i+2}⁻|}` middle
/// layers satisfy both redundancy conditions.
pub fn choice_count(rng: &mut VerifyRng, n: usize, trials: usize) -> Result<Check> {
    let mut check = Check::new("number of choices for χ_{i+1} is 2^{|χ_i⁺| − |χ_{i+2}⁻|}");
    for t in 0..trials {
        let u = Universe::new(trial_n(t, trials, 2, n.max(2)))?;
        let Some((i, p)) = interval_with_levels(rng, u, 3)? else { continue };
        let (lo, hi) = (p.min_level().unwrap(), p.max_level().unwrap());
        let l = rng.gen_range(lo..=hi - 2);
        let low = random_level_subset(rng, &p, l);
        let low_up = up_to_level(&low, &p, l + 1)?;
        let mid = Antichain::from_sorted_unchecked(u, random_subfamily(rng, low_up.masks()));
        let mid_up = up_to_level(&mid, &p, l + 2)?;
        let high = Antichain::from_sorted_unchecked(u, random_subfamily(rng, mid_up.masks()));
        let high_down = down(&high, &p)?;
        let candidates = p.level_masks(l + 1);
        let mut valid = 0u64;
        for sel in 0..1u64 << candidates.len() {
            let c = Antichain::from_sorted_unchecked(
                u,
                mask::bits(sel).map(|b| candidates[b]).collect(),
            );
            if down(&c, &p)?.is_member_subset(&low) && high_down.is_member_subset(&c) {
                valid += 1;
            }
        }
        check.trials += 1;
        let want = Count::pow2(low_up.len() - high_down.len());
        ensure!(
            check,
            want == valid,
            "i={i}, χ_{l}={low}, χ_{}={high}: {valid} choices, formula {want}",
            l + 2
        );
    }
    Ok(check)
}

/// `χ ∧ γ = α ∨ ⋁_l (χ_l ∩ γ_l)` over canonical decompositions.
pub fn levelwise_meet(rng: &mut VerifyRng, n: usize, trials: usize) -> Result<Check> {
    let mut check = Check::new("χ ∧ γ = α ∨ (χ_m ∩ γ_m) ∨ … ∨ (χ_M ∩ γ_M)");
    for t in 0..trials {
        let u = Universe::new(trial_n(t, trials, 1, n))?;
        let i = random_interval(rng, u);
        let p = underlying_poset(&i)?;
        let (x, y) = (random_member(rng, &i, &p), random_member(rng, &i, &p));
        let (dx, dy) = (canonical_decomposition(&i, &x)?, canonical_decomposition(&i, &y)?);
        let mut family = i.bottom().masks().to_vec();
        for ((_, a), (_, b)) in dx.iter().zip(dy.iter()) {
            family.extend(mask::intersection(a.masks(), b.masks()));
        }
        let want = Antichain::from_sorted_unchecked(u, mask::max_ac(family));
        let got = x.meet(&y)?;
        check.trials += 1;
        ensure!(check, got == want, "i={i}, χ={x}, γ={y}: meet {got}, levelwise {want}");
    }
    Ok(check)
}

/// `χ ≤ γ` implies `χ_l ⊆ γ_l` for every canonical layer.
pub fn monotone_layers(rng: &mut VerifyRng, n: usize, trials: usize) -> Result<Check> {
    let mut check = Check::new("χ ≤ γ ⇒ χ_i ⊆ γ_i for all i");
    for t in 0..trials {
        let u = Universe::new(trial_n(t, trials, 1, n))?;
        let i = random_interval(rng, u);
        let p = underlying_poset(&i)?;
        let y = random_member(rng, &i, &p);
        let below = Interval::new(i.bottom().clone(), y.clone())?;
        let x = random_member(rng, &below, &underlying_poset(&below)?);
        let (dx, dy) = (canonical_decomposition(&i, &x)?, canonical_decomposition(&i, &y)?);
        check.trials += 1;
        let ok = dx.iter().zip(dy.iter()).all(|((_, a), (_, b))| a.is_member_subset(b));
        ensure!(check, ok, "i={i}, χ={x} ({dx}), γ={y} ({dy})");
    }
    Ok(check)
}

fn pivot_instance(rng: &mut VerifyRng, u: Universe) -> Result<Option<(Interval, IntervalPoset, usize, Antichain)>> {
    let Some((i, p)) = interval_with_levels(rng, u, 3)? else { return Ok(None) };
    let (lo, hi) = (p.min_level().unwrap(), p.max_level().unwrap());
    let k = rng.gen_range(lo + 1..hi);
    let rho = random_level_subset(rng, &p, k);
    Ok(Some((i, p, k, rho)))
}

/// The tops of the lower and upper pivot blocks meet in `α ∨ χ_k`.
pub fn split_lemma(rng: &mut VerifyRng, n: usize, trials: usize) -> Result<Check> {
    let mut check = Check::new("lower ∧ upper pivot block tops = α ∨ χ_k");
    for t in 0..trials {
        let u = Universe::new(trial_n(t, trials, 2, n.max(2)))?;
        let Some((i, p, k, rho)) = pivot_instance(rng, u)? else { continue };
        let (lower, upper) = pivot_blocks(&i, &p, k, &rho)?;
        let got = lower.top().meet(upper.top())?;
        let want = i.bottom().join(&rho)?;
        check.trials += 1;
        ensure!(check, got == want, "i={i}, k={k}, χ_k={rho}: meet {got}, want {want}");
    }
    Ok(check)
}

/// The upper pivot block has poset levels `𝒫^l = χ_k^{+(l−k)}` for `l > k`
/// and nothing else.
pub fn layer_lemma(rng: &mut VerifyRng, n: usize, trials: usize) -> Result<Check> {
    let mut check = Check::new("𝒫_I^l = χ_k^{+(l−k)} for the upper pivot block");
    for t in 0..trials {
        let u = Universe::new(trial_n(t, trials, 2, n.max(2)))?;
        let Some((i, p, k, rho)) = pivot_instance(rng, u)? else { continue };
        let (_, upper) = pivot_blocks(&i, &p, k, &rho)?;
        let q = underlying_poset(&upper)?;
        let max = p.max_level().unwrap();
        let mut want = Vec::new();
        for l in k + 1..=max {
            want.extend_from_slice(up_times(&rho, &p, k, l - k)?.masks());
        }
        want.sort_unstable_by_key(|&m| (m.count_ones(), m));
        check.trials += 1;
        ensure!(
            check,
            q.masks() == want.as_slice(),
            "i={i}, k={k}, χ_k={rho}: block poset {:?}, iterated up {:?}",
            q.masks(),
            want
        );
    }
    Ok(check)
}

/// The closed form for the poset of a horizontal interval agrees with the
/// poset of the explicitly built interval.
pub fn horizontal_posets(rng: &mut VerifyRng, n: usize, trials: usize) -> Result<Check> {
    let mut check = Check::new("𝒫_I^k = χ_{k_{p−1}}^{+(k−k_{p−1})} − χ_{k_p}^{−(k_p−k)}");
    for t in 0..trials {
        let u = Universe::new(trial_n(t, trials, 2, n.max(2)))?;
        let Some((i, p)) = interval_with_levels(rng, u, 3)? else { continue };
        let (lo, hi) = (p.min_level().unwrap(), p.max_level().unwrap());
        // two or three strictly increasing layer levels inside (lo, hi]
        let mut levels: Vec<usize> = (lo..=hi).filter(|_| rng.gen_bool(0.6)).collect();
        levels.truncate(3);
        if levels.len() < 2 {
            levels = vec![lo, hi];
        }
        let mut layers = vec![(levels[0], random_level_subset(rng, &p, levels[0]))];
        for &l in &levels[1..] {
            let (pl, prev) = layers.last().unwrap();
            let reach = up_times(prev, &p, *pl, l - pl)?;
            let next = Antichain::from_sorted_unchecked(u, random_subfamily(rng, reach.masks()));
            layers.push((l, next));
        }
        let built = underlying_poset(&horizontal_interval(&i, &p, &layers)?)?;
        let formula = horizontal_poset(&layers, &i)?;
        check.trials += 1;
        ensure!(
            check,
            built.masks() == formula.masks(),
            "i={i}, layers {layers:?}: interval poset {:?}, closed form {:?}",
            built.masks(),
            formula.masks()
        );
    }
    Ok(check)
}

/// Every member lies in the layer-membership interval keyed by its own
/// canonical layer `k`, and in no other.
pub fn layer_membership(rng: &mut VerifyRng, n: usize, trials: usize) -> Result<Check> {
    let mut check = Check::new("χ lies exactly in the block keyed by its layer χ_k");
    for t in 0..trials {
        let u = Universe::new(trial_n(t, trials, 2, n.max(2)))?;
        let Some((i, p, k, rho)) = pivot_instance(rng, u)? else { continue };
        let x = random_member(rng, &i, &p);
        let own = canonical_decomposition(&i, &x)?.layer(k);
        let block = layer_membership_interval(&i, k, &rho)?;
        check.trials += 1;
        ensure!(
            check,
            block.contains(&x) == (own == rho),
            "i={i}, k={k}, χ={x} with χ_k={own}: membership in block {rho} is {}",
            block.contains(&x)
        );
    }
    Ok(check)
}

// ---------------------------------------------------------------- posets

/// `γ − α ⊆ 𝒫` and `α ∨ (γ − α) = γ` for every member `γ`.
pub fn spanning(rng: &mut VerifyRng, n: usize, trials: usize) -> Result<Check> {
    let mut check = Check::new("𝒫_[α,β] spans the interval");
    let budget = EnumerationBudget::default();
    for t in 0..trials {
        let u = Universe::new(trial_n(t, trials, 0, n))?;
        let i = random_interval(rng, u);
        let p = underlying_poset(&i)?;
        check.trials += 1;
        for gamma in oracle::enumerate_interval(&i, budget)? {
            let rest = gamma.difference(i.bottom())?;
            ensure!(
                check,
                rest.masks().iter().all(|&x| p.contains_mask(x)) && i.bottom().join(&rest)? == gamma,
                "i={i}, γ={gamma}"
            );
        }
    }
    Ok(check)
}

/// The underlying poset is convex, spans an interval with the same poset,
/// and that interval has the same size.
pub fn poset_round_trip(rng: &mut VerifyRng, n: usize, trials: usize) -> Result<Check> {
    let mut check = Check::new("interval poset characterization round trip");
    let budget = EnumerationBudget::default();
    for t in 0..trials {
        let u = Universe::new(trial_n(t, trials, 0, n))?;
        let i = random_interval(rng, u);
        let p = underlying_poset(&i)?;
        check.trials += 1;
        ensure!(check, is_interval_poset(p.masks()), "i={i}: poset {:?} not convex", p.masks());
        let back = interval_from_poset(&p);
        let q = underlying_poset(&back)?;
        ensure!(
            check,
            q.masks() == p.masks(),
            "i={i}: poset {:?} spans {back} with poset {:?}",
            p.masks(),
            q.masks()
        );
        let (a, b) = (oracle::size_brute(&i, budget)?, oracle::size_brute(&back, budget)?);
        ensure!(check, a == b, "i={i}: size {a}, reconstructed {back} has size {b}");
    }
    Ok(check)
}

/// `|lift(χ′, χ, A)| = |[χ′, χ]|` for `A` outside the support of `χ`.
pub fn isomorphic_lifts(rng: &mut VerifyRng, n: usize, trials: usize) -> Result<Check> {
    let mut check = Check::new("lifted intervals are isomorphic to [χ′, χ]");
    if n < 1 {
        return Ok(check);
    }
    let budget = EnumerationBudget::default();
    for t in 0..trials {
        let u = Universe::new(trial_n(t, trials, 1, n))?;
        let a = loop {
            let a = rng.gen::<u64>() & u.full_mask();
            if a != 0 {
                break a;
            }
        };
        let rest = u.full_mask() & !a;
        let hi = random_antichain_within(rng, u, rest);
        let base = Interval::new(Antichain::bottom(u), hi.clone())?;
        let lo = random_member(rng, &base, &underlying_poset(&base)?);
        let lifted = lift_interval(&lo, &hi, Subset::new(u, a)?)?;
        let inner = Interval::new(lo.clone(), hi.clone())?;
        let (x, y) = (size_auto(&lifted)?, oracle::size_brute(&inner, budget)?);
        check.trials += 1;
        ensure!(
            check,
            x == y,
            "χ′={lo}, χ={hi}, A={}: lift {lifted} has size {x}, [χ′, χ] has {y}",
            Subset::new(u, a)?
        );
    }
    Ok(check)
}

// ---------------------------------------------------------------- counting

/// Both even/odd formulas, a random pivot, a random multilevel chain and the
/// oracle give the same size.
pub fn method_agreement(rng: &mut VerifyRng, n: usize, trials: usize) -> Result<Check> {
    let mut check = Check::new("size methods agree (even, odd, pivot, multilevel, brute)");
    let budget = EnumerationBudget::default();
    for t in 0..trials {
        let u = Universe::new(trial_n(t, trials, 0, n))?;
        let i = random_interval(rng, u);
        let p = underlying_poset(&i)?;
        let want = oracle::size_brute(&i, budget)?;
        let mut got = vec![
            ("even", size_even_odd(&i, Parity::Top)?),
            ("odd", size_even_odd(&i, Parity::BelowTop)?),
        ];
        if let (Some(lo), Some(hi)) = (p.min_level(), p.max_level()) {
            if hi >= lo + 2 {
                let k = rng.gen_range(lo + 1..hi);
                got.push(("pivot", size_pivot(&i, k)?));
                let ks: Vec<usize> = (lo + 1..hi).filter(|_| rng.gen_bool(0.5)).collect();
                let ks = if ks.is_empty() { vec![k] } else { ks };
                got.push(("multilevel", size_multilevel(&i, &ks)?));
            }
        }
        check.trials += 1;
        for (name, v) in got {
            ensure!(check, v == want, "i={i}: {name} gives {v}, brute force {want}");
        }
    }
    Ok(check)
}

/// Level sizes of `[α, β]`; handy when reporting.
pub fn level_widths(p: &IntervalPoset) -> Vec<(usize, usize)> {
    match (p.min_level(), p.max_level()) {
        (Some(lo), Some(hi)) => (lo..=hi).map(|l| (l, p.level_masks(l).len())).collect(),
        _ => Vec::new(),
    }
}

/// The printed form `(δ⁻)⁺ ⊆ δ` is false: over `[⊥, ⊤]` with `n = 2`,
/// `δ = {{1}}` gives `(δ⁻)⁺ = {{1},{2}}`.
pub fn printed_updown_ii_counterexample() -> Result<(Antichain, Antichain)> {
    let u = Universe::new(2)?;
    let p = underlying_poset(&Interval::full(u))?;
    let delta = Antichain::from_masks(u, [0b01])?;
    let back = up_to_level(&down(&delta, &p)?, &p, 1)?;
    Ok((delta, back))
}
