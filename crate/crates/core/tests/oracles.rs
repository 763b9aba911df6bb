//! Naive full-scan oracles checked against the library's algorithms.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symvec::covering::{build_covering, is_intersecting_family, CoveringPoset};
use symvec::lab::{
    inclusion_exclusion_size, is_symmetric, set_intersecting_family, singer_difference_set,
    PermutationGroupSpec,
};
use symvec::measure::{influence, interpolate, measure_along, product_measure, russo_derivative};
use symvec::poset::{domination_strength, enumerate_up_sets};
use symvec::rational::ratio;
use symvec::search::{brute_force_max, decompose_orbits, max_symmetric_intersecting};
use symvec::{ProductFamily, Rational, DEFAULT_BUDGET as B};

/// Element masks of W_k, independent of the library's ordering.
fn cover_masks(k: usize) -> Vec<u64> {
    let full = (1u64 << k) - 1;
    let mut masks: Vec<u64> = (0..k).map(|i| 1 << i).collect();
    masks.extend((0..k).map(|i| full & !(1 << i)));
    masks
}

/// Up-sets of the inclusion order on `masks`, by testing every subset.
fn up_sets_by_scan(masks: &[u64]) -> Vec<u64> {
    let m = masks.len();
    (0u64..1 << m)
        .filter(|&s| {
            (0..m)
                .filter(|&a| s >> a & 1 == 1)
                .all(|a| (0..m).all(|b| masks[a] & !masks[b] != 0 || s >> b & 1 == 1))
        })
        .collect()
}

#[test]
fn up_set_census() {
    for (k, expected) in [(3, 18), (4, 35), (5, 68), (6, 133)] {
        let scanned = up_sets_by_scan(&cover_masks(k));
        assert_eq!(scanned.len(), expected, "k = {k}");
        let cover = build_covering(k).unwrap();
        assert_eq!(enumerate_up_sets(cover.poset(), B).unwrap().len(), expected);
    }
}

#[test]
fn domination_by_scan() {
    for k in 3..=6 {
        let masks = cover_masks(k);
        let full_set = (1u64 << masks.len()) - 1;
        let inv_k = ratio(1, k as i64);
        let best = up_sets_by_scan(&masks)
            .into_iter()
            .filter(|&s| s != 0 && s != full_set)
            .map(|s| {
                let singles = (0..k).filter(|&i| s >> i & 1 == 1).count() as i64;
                let cos = (k..2 * k).filter(|&i| s >> i & 1 == 1).count() as i64;
                &inv_k * Rational::from_integer((cos - singles).into())
            })
            .min()
            .unwrap();
        assert_eq!(best, inv_k);
        let cover = build_covering(k).unwrap();
        let rep = domination_strength(cover.poset(), cover.mu0(), cover.mu1(), B).unwrap();
        assert_eq!(rep.strength, best);
    }
}

fn all_points(base: usize, n: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..base as u8).map(move |a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    out
}

fn random_up_set(cover: &CoveringPoset, n: usize, rng: &mut ChaCha8Rng) -> ProductFamily {
    let m = cover.poset().len() as u8;
    let gens = rng.random_range(1..=3);
    let points = (0..gens)
        .map(|_| (0..n).map(|_| rng.random_range(0..m)).collect())
        .collect();
    ProductFamily::new(cover.poset().clone(), n, points)
        .unwrap()
        .up_closure(B)
        .unwrap()
}

fn contains(family: &ProductFamily, p: &[u8]) -> bool {
    family.points().iter().any(|q| q == p)
}

#[test]
fn product_measure_influence_and_derivative_by_enumeration() {
    let cover = build_covering(3).unwrap();
    let interp = cover.interpolation();
    let diff: Vec<Rational> = (0..6)
        .map(|e| cover.mu1().mass(e) - cover.mu0().mass(e))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=3 {
        let space = all_points(6, n);
        for _ in 0..8 {
            let fam = random_up_set(&cover, n, &mut rng);
            for t in [
                ratio(0, 1),
                ratio(1, 5),
                ratio(1, 2),
                ratio(7, 9),
                ratio(1, 1),
            ] {
                let mu = interpolate(&interp, &t).unwrap();
                let weight = |p: &[u8], skip: Option<usize>| -> Rational {
                    p.iter()
                        .enumerate()
                        .filter(|(j, _)| Some(*j) != skip)
                        .map(|(_, &e)| mu.mass(e as usize).clone())
                        .product()
                };
                let direct: Rational = space
                    .iter()
                    .filter(|p| contains(&fam, p))
                    .map(|p| weight(p, None))
                    .sum();
                assert_eq!(product_measure(&mu, &fam).unwrap(), direct);
                assert_eq!(measure_along(&fam, &interp, &t).unwrap(), direct);

                for i in 0..n {
                    // sum over y in W^{n-1} with a non-trivial slice
                    let mut inf = Rational::zero();
                    for p in space.iter().filter(|p| p[i] == 0) {
                        let hits = (0..6u8)
                            .filter(|&a| {
                                let mut q = p.clone();
                                q[i] = a;
                                contains(&fam, &q)
                            })
                            .count();
                        if hits != 0 && hits != 6 {
                            inf += weight(p, Some(i));
                        }
                    }
                    assert_eq!(influence(&fam, &mu, i, B).unwrap(), inf, "n = {n}, i = {i}");
                }

                let derivative: Rational = (0..n)
                    .map(|i| {
                        space
                            .iter()
                            .filter(|p| contains(&fam, p))
                            .map(|p| weight(p, Some(i)) * &diff[p[i] as usize])
                            .sum::<Rational>()
                    })
                    .sum();
                assert_eq!(
                    russo_derivative(&fam, &interp, &t, true, B).unwrap(),
                    derivative
                );
            }
        }
    }
}

#[test]
fn finite_differences_converge_on_the_exact_derivative() {
    let cover = build_covering(3).unwrap();
    let interp = cover.interpolation();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let fam = random_up_set(&cover, 3, &mut rng);
    let t = ratio(2, 5);
    let exact = russo_derivative(&fam, &interp, &t, true, B).unwrap();
    // P is a polynomial of degree <= 3, so the central difference error is exactly P'''(t) h^2 / 6
    let h1 = ratio(1, 100);
    let h2 = ratio(1, 200);
    let e1 = symvec::measure::central_difference(&fam, &interp, &t, &h1).unwrap() - &exact;
    let e2 = symvec::measure::central_difference(&fam, &interp, &t, &h2).unwrap() - &exact;
    assert_eq!(e1, e2 * Rational::from_integer(4.into()));
}

#[test]
fn fano_count_by_brute_force() {
    let lines = singer_difference_set(2).unwrap();
    let blocks: Vec<Vec<usize>> = lines.blocks().to_vec();
    assert_eq!(blocks.len(), 7);
    let count = all_points(3, 7)
        .into_iter()
        .filter(|p| blocks.iter().any(|b| b.iter().all(|&c| p[c - 1] == 0)))
        .count();
    assert_eq!(count, 435);
    assert_eq!(inclusion_exclusion_size(&lines, 3, B).unwrap(), 435.into());
    let fam = set_intersecting_family(&lines, 1, 3, true, B).unwrap();
    assert_eq!(fam.len(), count);
}

#[test]
fn intersecting_by_pairwise_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let host = symvec::covering::base_poset(3).unwrap();
    for _ in 0..40 {
        let n = rng.random_range(1..=3);
        let size = rng.random_range(0..=8);
        let points: Vec<Vec<u8>> = (0..size)
            .map(|_| (0..n).map(|_| rng.random_range(0..3)).collect())
            .collect();
        let fam = ProductFamily::new(host.clone(), n, points).unwrap();
        let naive = fam.points().iter().all(|x| {
            fam.points()
                .iter()
                .all(|y| x.iter().zip(y).any(|(a, b)| a == b))
        });
        assert_eq!(is_intersecting_family(&fam, B).unwrap(), naive);
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn cyclic_orbit_counts_match_burnside() {
    for k in 2..=4 {
        for n in 1..=6 {
            let fixed: u128 = (0..n).map(|r| (k as u128).pow(gcd(r, n) as u32)).sum();
            let expected = (fixed / n as u128) as usize;
            let dec = decompose_orbits(k, n, &PermutationGroupSpec::cyclic(n), false, B).unwrap();
            assert_eq!(dec.orbits.len(), expected, "k = {k}, n = {n}");
            let total: usize = dec.orbits.iter().map(|o| o.size()).sum();
            assert_eq!(total, k.pow(n as u32));
        }
    }
}

#[test]
fn symmetric_group_orbits_are_compositions() {
    // S_n orbits on [k]^n correspond to multisets of size n from k symbols
    let dec = decompose_orbits(3, 4, &PermutationGroupSpec::symmetric(4), false, B).unwrap();
    assert_eq!(dec.orbits.len(), 15);
}

#[test]
fn search_against_exhaustive_oracle() {
    let swap = PermutationGroupSpec::new(2, vec![vec![2, 1]]).unwrap();
    let cases = [
        (3, 2, swap),
        (3, 3, PermutationGroupSpec::cyclic(3)),
        (2, 3, PermutationGroupSpec::cyclic(3)),
        (2, 5, PermutationGroupSpec::cyclic(5)),
        (3, 4, PermutationGroupSpec::cyclic(4)),
        (4, 3, PermutationGroupSpec::symmetric(3)),
    ];
    for (k, n, g) in cases {
        let fast = max_symmetric_intersecting(k, n, &g, B).unwrap();
        let slow = brute_force_max(k, n, &g, B).unwrap();
        assert_eq!(fast.max_size, slow.max_size, "k = {k}, n = {n}");
        assert_eq!(fast.orbit_indices, slow.orbit_indices);
        assert!(is_intersecting_family(&fast.witness, B).unwrap());
        assert!(is_symmetric(&fast.witness, &g).unwrap().invariant);
    }
}

#[test]
fn binary_search_reaches_half() {
    for n in [3, 5] {
        let r = max_symmetric_intersecting(2, n, &PermutationGroupSpec::cyclic(n), B).unwrap();
        assert_eq!(r.max_size, 1 << (n - 1));
        assert_eq!(r.density(), ratio(1, 2));
    }
}
