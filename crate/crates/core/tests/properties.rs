//! Randomized invariants across the weight, reflection, Hecke and Fock layers.

use std::collections::BTreeMap;

use proptest::prelude::*;

use superchar::dynkin::{odd_reflect, BorelOrdering, OddRoot};
use superchar::fock::{FockSpace, Generator, Kind, Monomial, Shape};
use superchar::hecke::{bruhat_leq, KlTable, Perm};
use superchar::partition::{theta, Partition};
use superchar::poly::LaurentPoly;
use superchar::weight::{from_weight, to_weight, DominantTuple, Flavor, Index, Weight};

const FLAVORS: [Flavor; 5] = [Flavor::Tilde, Flavor::Plain, Flavor::Bar, Flavor::Diamond, Flavor::BarDiamond];

fn arb_partition(max_size: u32) -> impl Strategy<Value = Partition> {
    prop::collection::vec(1..=max_size, 0..=max_size as usize).prop_filter_map("too big", move |mut parts| {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        (parts.iter().sum::<u32>() <= max_size).then(|| Partition::new(parts).unwrap())
    })
}

fn arb_tuple() -> impl Strategy<Value = DominantTuple> {
    (-5i64..=5, prop::collection::vec(-6i64..=6, 0..=4), arb_partition(12), arb_partition(12))
        .prop_map(|(a, l0, lm, lp)| DominantTuple::new(a, l0, lm, lp))
}

fn arb_ordering() -> impl Strategy<Value = (BorelOrdering, Weight)> {
    let pool: Vec<Index> = (-5..=5).map(Index::half).chain((1..=2).map(Index::bar)).collect();
    (Just(pool).prop_shuffle(), 2usize..=6, prop::collection::vec(-3i64..=3, 6)).prop_map(|(pool, len, cs)| {
        let order = pool[..len].to_vec();
        let w = Weight::from_coeffs(0, order.iter().copied().zip(cs));
        (BorelOrdering::from_order(order), w)
    })
}

fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-3i32..=3, -2i64..=2), 0..3).prop_map(LaurentPoly::from_terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn flavors_round_trip_and_keep_the_level(t in arb_tuple()) {
        for f in FLAVORS {
            let w = to_weight(&t, f).unwrap();
            prop_assert_eq!(w.level, t.level);
            prop_assert_eq!(from_weight(&w, f, t.k()).unwrap(), t.clone());
        }
    }

    #[test]
    fn tilde_weight_reads_theta(t in arb_tuple()) {
        let w = to_weight(&t, Flavor::Tilde).unwrap();
        let plus = theta(&t.plus);
        let minus = theta(&t.minus.conjugate());
        for twice in 1..=30i64 {
            prop_assert_eq!(w.coeff(Index::half(twice)), plus.get_twice(twice as u32) as i64);
            prop_assert_eq!(w.coeff(Index::half(1 - twice)), -(minus.get_twice(twice as u32) as i64));
        }
    }

    #[test]
    fn odd_reflection_is_an_adjacent_swap((b, mu) in arb_ordering()) {
        for alpha in b.odd_simple_roots() {
            let (b2, nu) = odd_reflect(&b, &mu, alpha).unwrap();
            let p = b.position(alpha.r).unwrap();
            let mut swapped = b.order().to_vec();
            swapped.swap(p, p + 1);
            prop_assert_eq!(b2.order(), &swapped[..]);
            let sum = mu.coeff(alpha.r) + mu.coeff(alpha.s);
            prop_assert_eq!(nu == mu, sum == 0);
            if sum == 0 {
                let back = OddRoot::new(alpha.s, alpha.r).unwrap();
                let (b3, again) = odd_reflect(&b2, &nu, back).unwrap();
                prop_assert_eq!(b3.order(), b.order());
                prop_assert_eq!(again, mu.clone());
            }
        }
    }

    #[test]
    fn parabolic_with_no_generators_is_classical(x in Just(()).prop_perturb(|_, mut rng| {
        let n = 4 + (rng.next_u32() % 2) as usize;
        let all = Perm::all(n);
        let pick = |r: u32| all[r as usize % all.len()].clone();
        (pick(rng.next_u32()), pick(rng.next_u32()))
    })) {
        let (x, w) = x;
        let table = KlTable::new();
        if bruhat_leq(&x, &w).unwrap() {
            prop_assert_eq!(table.parabolic_kl(&[], &x, &w).unwrap(), table.kl_polynomial(&x, &w).unwrap());
        }
    }

    #[test]
    fn fock_bar_is_an_involution_commuting_with_f(
        m in 0usize..=2, k in 0usize..=2, n in 0usize..=2,
        lo in -3i32..=0, width in 3i32..=8,
        entries in prop::collection::vec(-3i32..=5, 6),
        coeffs in prop::collection::vec(arb_poly(), 4),
    ) {
        prop_assume!(m + k + n > 0);
        let space = FockSpace::new(Shape { left: (Kind::W, m), k, right: (Kind::W, n) }, lo, lo + width - 1);
        let pick: Vec<i32> = entries.iter().take(m + k + n).map(|e| lo + e.rem_euclid(width)).collect();
        let seed = space.shape.monomial(&pick[..m], &pick[m..m + k], &pick[m + k..]);
        prop_assume!(seed.is_ok());
        let members = space.monomials_with_content(&space.content(&seed.unwrap()));
        let x: BTreeMap<Monomial, LaurentPoly> =
            members.into_iter().zip(coeffs).filter(|(_, c)| !c.is_zero()).collect();
        let bx = space.bar(&x);
        prop_assume!(bx.is_ok());
        prop_assert_eq!(space.bar(&bx.unwrap()).unwrap(), x.clone());
        for i in lo..lo + width - 1 {
            let fx = space.chevalley(Generator::F, i, &x);
            if let (Ok(lhs), Ok(bx)) = (space.bar(&fx), space.bar(&x)) {
                prop_assert_eq!(lhs, space.chevalley(Generator::F, i, &bx));
            }
        }
    }
}
