use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;

use clustertrop::cluster_core::{check_tropical_duality, trop_compose, trop_step, yhat_trop_step};
use clustertrop::dynamics::braid_orbit_with;
use clustertrop::fixtures::Fixtures;
use clustertrop::grassmannian::{trop_q, trop_q_exact};
use clustertrop::tableaux::{gvector_to_tableau, tableau_to_gvector, tableau_to_monomial};
use clustertrop::tropexpr::{grassmannian_assignment, trop_eval};
use clustertrop::{Convention, ExchangeMatrix, GrContext, LaurentPoly, QuasiAuto, Seed, Tableau};

fn conv() -> impl Strategy<Value = Convention> {
    prop_oneof![Just(Convention::Max), Just(Convention::Min)]
}

/// `b_ij = s_ij d_j` with `S` skew-symmetric, so `d_i b_ij = -d_j b_ji`.
fn exchange_matrix() -> impl Strategy<Value = ExchangeMatrix> {
    (2usize..=4).prop_flat_map(|n| {
        (prop::collection::vec(1i64..=2, n), prop::collection::vec(-2i64..=2, n * n)).prop_map(move |(d, s)| {
            let mut b = vec![vec![0; n]; n];
            for i in 0..n {
                for j in i + 1..n {
                    b[i][j] = s[i * n + j] * d[j];
                    b[j][i] = -s[i * n + j] * d[i];
                }
            }
            ExchangeMatrix::new(b).unwrap()
        })
    })
}

fn matrix_word_point() -> impl Strategy<Value = (ExchangeMatrix, Vec<usize>, Vec<i64>)> {
    exchange_matrix().prop_flat_map(|b| {
        let n = b.rank();
        (Just(b), prop::collection::vec(1..=n, 0..8), prop::collection::vec(-20i64..=20, n))
    })
}

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-6i64..=6, -5i64..=5), 1..5)
        .prop_map(|ts| LaurentPoly::from_terms(ts.into_iter().map(|(e, c)| (e, BigInt::from(c)))))
        .prop_filter("nonzero", |p| !p.is_zero())
}

fn tableau(k: usize, n: usize, max_cols: usize) -> impl Strategy<Value = Tableau> {
    prop::collection::vec(prop::sample::subsequence((1..=n).collect::<Vec<_>>(), k), 0..=max_cols)
        .prop_map(move |cols| Tableau::union_of_columns(k, n, &cols).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn degree_is_additive(a in laurent(), b in laurent(), c in conv()) {
        let p = &a * &b;
        prop_assert_eq!(p.trop(c).unwrap(), a.trop(c).unwrap() + b.trop(c).unwrap());
    }

    #[test]
    fn trop_ratio_ignores_common_factor(num in laurent(), den in laurent(), h in laurent(), c in conv()) {
        let before = num.trop(c).unwrap() - den.trop(c).unwrap();
        let after = (&num * &h).trop(c).unwrap() - (&den * &h).trop(c).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn ring_laws(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn matrix_mutation_is_involutive((b, w, _) in matrix_word_point()) {
        for &k in &w {
            prop_assert_eq!(&b.mutate(k).unwrap().mutate(k).unwrap(), &b);
        }
    }

    #[test]
    fn trop_step_is_involutive((b, w, v) in matrix_word_point(), c in conv()) {
        for &k in &w {
            let once = trop_step(&v, &b, k, c).unwrap();
            prop_assert_eq!(trop_step(&once, &b.mutate(k).unwrap(), k, c).unwrap(), v.clone());
        }
    }

    #[test]
    fn word_then_reverse_is_identity((b, w, v) in matrix_word_point(), c in conv()) {
        let there = trop_compose(&v, &b, &w, c).unwrap();
        let bw = Seed::along(&b, &w).unwrap().b;
        let back: Vec<usize> = w.iter().rev().copied().collect();
        prop_assert_eq!(trop_compose(&there, &bw, &back, c).unwrap(), v);
    }

    #[test]
    fn min_is_max_over_op((b, w, v) in matrix_word_point()) {
        prop_assert_eq!(
            trop_compose(&v, &b, &w, Convention::Min).unwrap(),
            trop_compose(&v, &b.op(), &w, Convention::Max).unwrap()
        );
    }

    #[test]
    fn g_change_is_dual_yhat_step((b, w, v) in matrix_word_point(), c in conv()) {
        for &k in &w {
            prop_assert_eq!(trop_step(&v, &b, k, c).unwrap(), yhat_trop_step(&v, &b.dual(), k, c).unwrap());
        }
    }

    #[test]
    fn tropical_duality((b, w, _) in matrix_word_point()) {
        let s = Seed::along(&b, &w).unwrap();
        let sd = Seed::along(&b.dual(), &w).unwrap();
        let so = Seed::along(&b.op(), &w).unwrap();
        let sod = Seed::along(&b.op_dual(), &w).unwrap();
        let report = check_tropical_duality(&s, &sd, &so, &sod);
        prop_assert!(report.all_pass(), "{:?}", report);
    }

    #[test]
    fn bender_knuth_and_evacuation_are_involutions(t in tableau(3, 7, 4)) {
        for i in 1..7 {
            prop_assert_eq!(t.bender_knuth(i).bender_knuth(i), t.clone());
        }
        prop_assert_eq!(t.evacuation().evacuation(), t.clone());
        prop_assert_eq!(t.promotion().ncols(), t.ncols());
    }

    #[test]
    fn promotion_has_order_n(t in tableau(3, 6, 4)) {
        let p = (0..6).fold(t.clone(), |acc, _| acc.promotion());
        prop_assert_eq!(p, t);
    }

    #[test]
    fn union_quotient_monoid(a in tableau(4, 8, 3), b in tableau(4, 8, 3), c in tableau(4, 8, 3)) {
        let ab = a.union(&b).unwrap();
        prop_assert_eq!(&ab, &b.union(&a).unwrap());
        prop_assert_eq!(ab.union(&c).unwrap(), a.union(&b.union(&c).unwrap()).unwrap());
        prop_assert_eq!(a.union(&Tableau::empty(4, 8)).unwrap(), a.clone());
        prop_assert_eq!(ab.quotient(&a).unwrap(), b);
    }

    #[test]
    fn trivial_factors_do_not_change_the_monomial(t in tableau(3, 8, 3), i in 0usize..6) {
        let trivial = Tableau::trivial_columns(3, 8);
        let col = trivial[i % trivial.len()].clone();
        let bigger = t.union(&Tableau::column(3, 8, col).unwrap()).unwrap();
        prop_assert_eq!(tableau_to_monomial(&bigger), tableau_to_monomial(&t));
    }

    #[test]
    fn gvector_roundtrip(g in prop::collection::vec(-5i64..=5, 10), which in 0usize..2) {
        let ctx = if which == 0 { GrContext::new(4, 8).unwrap() } else { GrContext::new(3, 9).unwrap() };
        let g = &g[..ctx.m];
        let t = gvector_to_tableau(g, &ctx).unwrap();
        prop_assert!(!t.has_frozen_factor());
        prop_assert_eq!(tableau_to_gvector(&t, &ctx).unwrap(), g.to_vec());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fast_and_exact_routes_agree(v in prop::collection::vec(-6i64..=6, 4), c in conv(), f in 0usize..7) {
        let ctx = GrContext::new(3, 6).unwrap();
        let maps = [
            QuasiAuto::Rho, QuasiAuto::RhoInv, QuasiAuto::Theta, QuasiAuto::Tau,
            QuasiAuto::TauInv, QuasiAuto::Sigma(1), QuasiAuto::SigmaInv(2),
        ];
        prop_assert_eq!(trop_q(&ctx, maps[f], &v, c).unwrap(), trop_q_exact(&ctx, maps[f], &v, c).unwrap());
    }

    #[test]
    fn fast_and_exact_routes_agree_gr48(v in prop::collection::vec(-4i64..=4, 9), c in conv(), i in 1usize..=4) {
        let ctx = GrContext::new(4, 8).unwrap();
        let f = QuasiAuto::Sigma(i);
        prop_assert_eq!(trop_q(&ctx, f, &v, c).unwrap(), trop_q_exact(&ctx, f, &v, c).unwrap());
    }

    #[test]
    fn inverse_maps_undo(v in prop::collection::vec(-10i64..=10, 9), c in conv(), i in 1usize..=4) {
        let ctx = GrContext::new(4, 8).unwrap();
        for f in [QuasiAuto::Sigma(i), QuasiAuto::Rho, QuasiAuto::Tau] {
            let w = trop_q(&ctx, f, &v, c).unwrap();
            prop_assert_eq!(trop_q(&ctx, f.inverse(), &w, c).unwrap(), v.clone());
        }
    }

    #[test]
    fn literal_values_do_not_matter(v in prop::collection::vec(-10i64..=10, 9), c in conv()) {
        let fx = Fixtures::embedded().unwrap();
        for map in fx.maps.iter().filter(|m| (m.k, m.n) == (4, 8)) {
            let ctx = GrContext::new(map.k, map.n).unwrap();
            let parsed = clustertrop::tropexpr::MapFixture::parse(&map.text).unwrap();
            let assign = grassmannian_assignment(&ctx, &v);
            for e in &parsed.components {
                prop_assert_eq!(trop_eval(e, &assign, c).unwrap(), trop_eval(&e.unit_literals(), &assign, c).unwrap());
            }
        }
    }
}

#[test]
fn orbit_does_not_depend_on_generator_or_seed_order() {
    let ctx = GrContext::new(4, 8).unwrap();
    let fx = Fixtures::embedded().unwrap();
    let g = |name: &str| fx.relations["gr48"].vectors[name].clone();
    let seeds = vec![g("g1"), g("g2")];
    let gens = QuasiAuto::braid_generators(&ctx);
    let points = |seeds: &[Vec<i64>], gens: &[QuasiAuto]| -> BTreeSet<Vec<i64>> {
        braid_orbit_with(&ctx, seeds, gens, 14, 64).unwrap().entries.into_iter().map(|e| e.g).collect()
    };
    let a = points(&seeds, &gens);
    let rev_gens: Vec<QuasiAuto> = gens.iter().rev().copied().collect();
    let rev_seeds: Vec<Vec<i64>> = seeds.iter().rev().cloned().collect();
    assert_eq!(a, points(&seeds, &rev_gens));
    assert_eq!(a, points(&rev_seeds, &gens));
    assert_eq!(a.len(), [0, 2, 0, 2, 0, 4, 0, 4, 0, 8, 0, 4, 0, 12].iter().sum::<usize>());
}
