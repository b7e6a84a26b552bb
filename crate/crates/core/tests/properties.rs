use aclattice::counting::{auto_parity, even_odd_terms, size_from_poset};
use aclattice::oracle::{self, EnumerationBudget};
use aclattice::verify;
use aclattice::{
    interval_from_poset, is_interval_poset, mask, parse_antichain, strip_common, underlying_poset, Antichain, Count,
    Interval, Parity, Subset, Universe,
};
use proptest::prelude::*;

fn universe(n: usize) -> Universe {
    Universe::new(n).unwrap()
}

fn antichain(n: usize) -> impl Strategy<Value = Antichain> {
    let full = (1u64 << n) - 1;
    prop::collection::vec(0..=full, 0..=n + 1)
        .prop_map(move |family| Antichain::max_ac(universe(n), family).unwrap())
}

fn antichain_any() -> impl Strategy<Value = (usize, Antichain, Antichain, Antichain)> {
    (0usize..=4).prop_flat_map(|n| (Just(n), antichain(n), antichain(n), antichain(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn lattice_axioms((_n, a, b, c) in antichain_any()) {
        let j = |x: &Antichain, y: &Antichain| x.join(y).unwrap();
        let m = |x: &Antichain, y: &Antichain| x.meet(y).unwrap();
        prop_assert_eq!(j(&a, &b), j(&b, &a));
        prop_assert_eq!(m(&a, &b), m(&b, &a));
        prop_assert_eq!(j(&j(&a, &b), &c), j(&a, &j(&b, &c)));
        prop_assert_eq!(m(&m(&a, &b), &c), m(&a, &m(&b, &c)));
        prop_assert_eq!(j(&a, &m(&a, &b)), a.clone());
        prop_assert_eq!(m(&a, &j(&a, &b)), a.clone());
        prop_assert_eq!(j(&a, &a), a.clone());
        prop_assert_eq!(a.leq(&b).unwrap(), j(&a, &b) == b);
        prop_assert_eq!(a.leq(&b).unwrap(), m(&a, &b) == a);
        // distributivity holds in the free distributive lattice
        prop_assert_eq!(m(&a, &j(&b, &c)), j(&m(&a, &b), &m(&a, &c)));
    }

    #[test]
    fn text_round_trip((n, a, _b, _c) in antichain_any()) {
        let back = parse_antichain(universe(n), &a.to_string()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn poset_is_convex_and_round_trips((_n, a, b, _c) in antichain_any()) {
        let i = Interval::new(a.clone(), a.join(&b).unwrap()).unwrap();
        let p = underlying_poset(&i).unwrap();
        prop_assert!(is_interval_poset(p.masks()));
        let back = interval_from_poset(&p);
        let q = underlying_poset(&back).unwrap();
        prop_assert_eq!(q.masks(), p.masks());
        let budget = EnumerationBudget::default();
        prop_assert_eq!(oracle::size_brute(&back, budget).unwrap(), oracle::size_brute(&i, budget).unwrap());
    }

    #[test]
    fn strip_common_keeps_inclusions((_n, a, b, _c) in antichain_any()) {
        let i = Interval::new(a.clone(), a.join(&b).unwrap()).unwrap();
        let sets = underlying_poset(&i).unwrap().masks().to_vec();
        let stripped = strip_common(&sets);
        for (x, sx) in sets.iter().zip(&stripped) {
            for (y, sy) in sets.iter().zip(&stripped) {
                prop_assert_eq!(mask::is_subset(*x, *y), mask::is_subset(*sx, *sy));
            }
        }
    }

    #[test]
    fn even_and_odd_agree_with_brute((_n, a, b, _c) in antichain_any()) {
        let i = Interval::new(a.clone(), a.join(&b).unwrap()).unwrap();
        let p = underlying_poset(&i).unwrap();
        let want = oracle::size_brute(&i, EnumerationBudget::default()).unwrap();
        prop_assert_eq!(size_from_poset(&p, Parity::Top).unwrap(), want.clone());
        prop_assert_eq!(size_from_poset(&p, Parity::BelowTop).unwrap(), want.clone());
        prop_assert_eq!(size_from_poset(&p, auto_parity(&p)).unwrap(), want);
    }
}

/// For every split `N₁ | N₂` of a 4-element set and every `aᵢ ∈ 𝒜_{Nᵢ} − ⊥`:
/// among the antichains `x` with `x ∧ {Nᵢ} = aᵢ`, `a₁ ⊗ a₂` is the largest
/// and `a₁ ∨ a₂` the smallest.
#[test]
fn direct_product_is_largest_and_join_smallest() {
    let n = 4;
    let u = universe(n);
    let budget = EnumerationBudget::default();
    let all: Vec<Antichain> = oracle::enumerate_all(n, budget).unwrap().collect::<Result<_, _>>().unwrap();
    for lo in 1..u.full_mask() {
        let hi = u.full_mask() & !lo;
        let (n1, n2) = (Subset::new(u, lo).unwrap(), Subset::new(u, hi).unwrap());
        let (s1, s2) = (Antichain::singleton(n1), Antichain::singleton(n2));
        let part = |g: u64| -> Vec<Antichain> {
            oracle::enumerate_within(u, g, budget)
                .unwrap()
                .map(Result::unwrap)
                .filter(|a| !a.is_bottom())
                .collect()
        };
        let (p1, p2) = (part(lo), part(hi));
        for a in &p1 {
            for b in &p2 {
                let prod = a.direct_product(b).unwrap();
                let join = a.join(b).unwrap();
                let fits: Vec<&Antichain> = all
                    .iter()
                    .filter(|x| &x.meet(&s1).unwrap() == a && &x.meet(&s2).unwrap() == b)
                    .collect();
                assert!(fits.contains(&&prod) && fits.contains(&&join), "{n1}|{n2}: a={a}, b={b}");
                for x in fits {
                    assert!(x.leq(&prod).unwrap() && join.leq(x).unwrap(), "a={a}, b={b}, x={x}");
                }
            }
        }
    }
}

#[test]
fn worked_example_terms() {
    let u = universe(3);
    let i = Interval::new(
        parse_antichain(u, "{{1}}").unwrap(),
        parse_antichain(u, "{{1,2,3}}").unwrap(),
    )
    .unwrap();
    let values: Vec<u64> = even_odd_terms(&i, Parity::Top)
        .unwrap()
        .iter()
        .map(|t| t.value.to_u64().unwrap())
        .collect();
    assert_eq!(values, [1, 2, 2, 8, 1]);
    let odd: Count = even_odd_terms(&i, Parity::BelowTop).unwrap().into_iter().map(|t| t.value).sum();
    assert_eq!(odd, 14u64);
}

#[test]
fn dedekind_numbers_agree_across_methods() {
    let expected = [2u64, 3, 6, 20, 168, 7581, 7828354];
    for (n, &want) in expected.iter().enumerate() {
        let u = universe(n);
        assert_eq!(aclattice::size_auto(&Interval::full(u)).unwrap(), want, "levels n={n}");
        if n <= 5 {
            assert_eq!(oracle::dedekind_brute(n, EnumerationBudget::default()).unwrap(), want, "brute n={n}");
        }
        if n >= 2 {
            let (a, b) = aclattice::decomp::balanced_split(u).unwrap();
            assert_eq!(aclattice::decomp::dedekind_by_product(u, a, b).unwrap(), want, "product n={n}");
            let first = Subset::new(u, 1).unwrap();
            let rest = Subset::new(u, u.full_mask() & !1).unwrap();
            assert_eq!(aclattice::decomp::dedekind_by_product(u, first, rest).unwrap(), want, "1|rest n={n}");
        }
    }
}

#[test]
fn method_agreement_on_a_thousand_intervals() {
    let mut rng = verify::rng(2024);
    let check = verify::method_agreement(&mut rng, 5, 1000).unwrap();
    assert!(check.passed(), "{check}");
    assert_eq!(check.trials, 1000);
}

#[test]
fn invariant_suites_pass_at_n4() {
    for check in verify::run_suite(verify::Suite::All, 4, 11, 150).unwrap() {
        assert!(check.passed(), "{check}");
        assert!(check.trials > 0, "{check}");
    }
}

#[test]
fn lifts_and_round_trips_at_n5() {
    let mut rng = verify::rng(5);
    for check in [
        verify::poset_round_trip(&mut rng, 5, 300).unwrap(),
        verify::isomorphic_lifts(&mut rng, 5, 100).unwrap(),
        verify::poset_direct_join(&mut rng, 5, 100).unwrap(),
    ] {
        assert!(check.passed(), "{check}");
    }
}

#[test]
fn large_universe_operations_stay_exact() {
    let u = universe(64);
    let a = Antichain::singleton(Subset::from_elements(u, &[1, 64]).unwrap());
    let b = Antichain::singleton(Subset::from_elements(u, &[2, 63]).unwrap());
    assert_eq!(a.join(&b).unwrap().to_string(), "{{2,63},{1,64}}");
    assert_eq!(a.direct_product(&b).unwrap().to_string(), "{{1,2,63,64}}");
    // [{{1}}, {{1,2,3}}] lifted far away from the support keeps its size
    let i = Interval::new(
        parse_antichain(u, "{{1}}").unwrap(),
        parse_antichain(u, "{{1,2,3}}").unwrap(),
    )
    .unwrap();
    assert_eq!(aclattice::size_auto(&i).unwrap(), 14u64);
}
