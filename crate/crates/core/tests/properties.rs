use num_traits::{One, Zero};
use proptest::collection::vec;
use proptest::prelude::*;

use symvec::covering::{
    base_poset, build_covering, complement, complement_point, embed, embed_family, intersects,
    project, BaseVector, CoverVector,
};
use symvec::lab::{apply_permutation, PermutationGroupSpec};
use symvec::measure::{influence_report, interpolate, measure_along, product_measure};
use symvec::rational::ratio;
use symvec::search::max_symmetric_intersecting;
use symvec::{ProductFamily, Rational, DEFAULT_BUDGET as B};

const K: usize = 3;

fn cover_points(n: usize, max: usize) -> impl Strategy<Value = Vec<Vec<u8>>> {
    vec(vec(0u8..(2 * K) as u8, n), 0..=max)
}

fn base_points(n: usize, max: usize) -> impl Strategy<Value = Vec<Vec<u8>>> {
    vec(vec(0u8..K as u8, n), 0..=max)
}

fn cover_family(n: usize, points: Vec<Vec<u8>>) -> ProductFamily {
    let cover = build_covering(K).unwrap();
    ProductFamily::new(cover.poset().clone(), n, points).unwrap()
}

fn t_value() -> impl Strategy<Value = Rational> {
    (0i64..=20).prop_map(|a| ratio(a, 20))
}

proptest! {
    #[test]
    fn closure_is_idempotent_and_monotone(
        (n, a, extra) in (1usize..=3).prop_flat_map(|n| (Just(n), cover_points(n, 4), cover_points(n, 3)))
    ) {
        let fa = cover_family(n, a.clone());
        let mut ab = a;
        ab.extend(extra);
        let fb = cover_family(n, ab);
        let ca = fa.up_closure(B).unwrap();
        prop_assert!(fa.is_subset_of(&ca));
        prop_assert!(ca.is_up_set());
        prop_assert_eq!(&ca.up_closure(B).unwrap(), &ca);
        prop_assert!(ca.is_subset_of(&fb.up_closure(B).unwrap()));
    }

    #[test]
    fn product_measure_is_additive_and_monotone(
        (n, a, b) in (1usize..=3).prop_flat_map(|n| (Just(n), cover_points(n, 6), cover_points(n, 6))),
        t in t_value(),
    ) {
        let cover = build_covering(K).unwrap();
        let mu = interpolate(&cover.interpolation(), &t).unwrap();
        let fa = cover_family(n, a);
        let fb = cover_family(n, b);
        let union = fa.union(&fb).unwrap();
        let overlap = cover_family(n, fa.points().iter().filter(|p| fb.contains(p)).cloned().collect());
        let m = |f: &ProductFamily| product_measure(&mu, f).unwrap();
        prop_assert_eq!(m(&union) + m(&overlap), m(&fa) + m(&fb));
        prop_assert!(m(&fa) <= m(&union));
        prop_assert!(m(&union) <= Rational::one());
    }

    #[test]
    fn complement_is_an_involution_preserving_the_midpoint_measure(
        (n, a) in (1usize..=3).prop_flat_map(|n| (Just(n), cover_points(n, 8)))
    ) {
        let cover = build_covering(K).unwrap();
        let fa = cover_family(n, a);
        let comp = cover_family(n, fa.points().iter().map(|p| complement_point(&cover, p)).collect());
        for p in fa.points() {
            prop_assert_eq!(&complement_point(&cover, &complement_point(&cover, p)), p);
            let v = CoverVector::from_point(&cover, p);
            prop_assert_eq!(complement(&complement(&v)), v.clone());
            prop_assert_eq!(complement(&v).to_point(&cover), complement_point(&cover, p));
        }
        let half = interpolate(&cover.interpolation(), &ratio(1, 2)).unwrap();
        prop_assert_eq!(product_measure(&half, &fa).unwrap(), product_measure(&half, &comp).unwrap());
    }

    #[test]
    fn embedding_preserves_intersection(
        (n, x, y) in (1usize..=4).prop_flat_map(|n| (Just(n), vec(1u8..=K as u8, n), vec(1u8..=K as u8, n)))
    ) {
        let cover = build_covering(K).unwrap();
        let bx = BaseVector::new(K, x.clone()).unwrap();
        let by = BaseVector::new(K, y.clone()).unwrap();
        let ex = embed(&cover, &bx).unwrap();
        let ey = embed(&cover, &by).unwrap();
        let agree = x.iter().zip(&y).any(|(a, b)| a == b);
        prop_assert_eq!(intersects(&ex, &ey).unwrap(), agree);
        prop_assert_eq!(project(&ex), Some(bx));
        prop_assert_eq!(n, ex.n());
    }

    #[test]
    fn measure_of_up_sets_is_monotone_in_t(
        (n, a) in (1usize..=3).prop_flat_map(|n| (Just(n), cover_points(n, 3)))
    ) {
        let cover = build_covering(K).unwrap();
        let up = cover_family(n, a).up_closure(B).unwrap();
        let interp = cover.interpolation();
        let values: Vec<Rational> = (0..=10).map(|i| measure_along(&up, &interp, &ratio(i, 10)).unwrap()).collect();
        prop_assert!(values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn total_influence_vanishes_only_on_trivial_families(
        (n, a) in (1usize..=3).prop_flat_map(|n| (Just(n), cover_points(n, 3))),
        t in (1i64..=9).prop_map(|a| ratio(a, 10)),
    ) {
        let cover = build_covering(K).unwrap();
        let up = cover_family(n, a).up_closure(B).unwrap();
        let rep = influence_report(&up, &cover.interpolation(), &t, B).unwrap();
        let trivial = up.is_empty() || up.len() == (2 * K).pow(n as u32);
        prop_assert_eq!(rep.total.is_zero(), trivial);
    }

    #[test]
    fn bottom_measure_of_closed_embedding_is_density(
        (n, a) in (1usize..=3).prop_flat_map(|n| (Just(n), base_points(n, 6)))
    ) {
        let cover = build_covering(K).unwrap();
        let base = ProductFamily::new(base_poset(K).unwrap(), n, a).unwrap();
        let closed = embed_family(&cover, &base).unwrap().up_closure(B).unwrap();
        let eps = product_measure(cover.mu0(), &closed).unwrap();
        prop_assert_eq!(eps, ratio(base.len() as i64, (K as i64).pow(n as u32)));
    }

    #[test]
    fn closure_commutes_with_coordinate_permutations(
        (n, a, sigma) in (1usize..=3).prop_flat_map(|n| {
            (Just(n), cover_points(n, 3), Just((1..=n).collect::<Vec<usize>>()).prop_shuffle())
        })
    ) {
        let fa = cover_family(n, a);
        let permute = |f: &ProductFamily| cover_family(n, f.points().iter().map(|p| apply_permutation(&sigma, p)).collect());
        prop_assert_eq!(permute(&fa.up_closure(B).unwrap()), permute(&fa).up_closure(B).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn search_maximum_shrinks_as_the_group_grows(
        (k, n, sigma) in (2usize..=3, 2usize..=4).prop_flat_map(|(k, n)| {
            (Just(k), Just(n), Just((1..=n).collect::<Vec<usize>>()).prop_shuffle())
        })
    ) {
        let cyclic = PermutationGroupSpec::cyclic(n);
        let bigger = cyclic.with_generator(sigma).unwrap();
        let small = max_symmetric_intersecting(k, n, &cyclic, B).unwrap();
        let large = max_symmetric_intersecting(k, n, &bigger, B).unwrap();
        prop_assert!(large.max_size <= small.max_size);
        prop_assert!(small.max_size <= k.pow(n as u32 - 1));
    }
}
