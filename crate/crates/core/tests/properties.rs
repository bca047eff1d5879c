mod common;

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{exact_sampling_rank, norm, random_int_matrix, random_vector, to_complex, IntMatrix};
use dynsamp::feasibility::brute_force_feasible;
use dynsamp::hardy::{
    carleson_products, series_entry, truncated_gramian, weighted_frame_bounds, DiskSequence, WeightedVector,
};
use dynsamp::io::{parse_json, to_json_string, MatrixFile, SchemeFile};
use dynsamp::{
    analyze, annihilator_degree, build_sampling_matrix, eigendecompose, frame_bounds, greedy_placement,
    jordan_structure, minimal_placement_exhaustive, rank_with_tol, reconstruct, simulate_samples, ComplexMatrix, Error,
    JordanStructure, SamplingScheme, Tolerances, C64,
};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        rng_seed: RngSeed::Fixed(0x5eed),
        ..ProptestConfig::default()
    }
}

fn instance(seed: u64, max_d: usize) -> IntMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = 1 + (seed as usize % max_d);
    random_int_matrix(d, &mut rng)
}

fn sites(d: usize, mask: u32) -> Vec<usize> {
    let s: Vec<usize> = (0..d).filter(|i| mask & (1 << i) != 0).collect();
    if s.is_empty() {
        vec![mask as usize % d]
    } else {
        s
    }
}

fn tol(a: &ComplexMatrix) -> Tolerances {
    Tolerances::for_matrix(a)
}

fn structure(a: &ComplexMatrix) -> JordanStructure {
    dynsamp::feasibility::factorize(a, &tol(a)).unwrap().1
}

fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

fn unit(d: usize, i: usize) -> Vec<C64> {
    (0..d).map(|k| C64::new(if k == i { 1.0 } else { 0.0 }, 0.0)).collect()
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn projectors_resolve_the_identity(seed in any::<u64>()) {
        let a = to_complex(&instance(seed, 6));
        let t = tol(&a);
        match eigendecompose(&a, &t) {
            Ok(s) => {
                let d = s.dimension;
                let bound = 10.0 * d as f64 * t.cluster;
                let mut sum = DMatrix::<C64>::zeros(d, d);
                for (j, e) in s.eigenspaces.iter().enumerate() {
                    sum += e.projector.as_dmatrix();
                    for f in &s.eigenspaces[j + 1..] {
                        let prod = e.projector.as_dmatrix() * f.projector.as_dmatrix();
                        prop_assert!(prod.norm() <= bound, "{}", prod.norm());
                    }
                }
                prop_assert!((sum - DMatrix::identity(d, d)).norm() <= bound);
            }
            Err(Error::NotDiagonalizable { .. }) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn annihilator_degree_bounds(seed in any::<u64>(), i in 0usize..6) {
        let a = to_complex(&instance(seed, 6));
        let d = a.nrows();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5a5a);
        let b = if i % 2 == 0 { random_vector(d, &mut rng) } else { unit(d, i % d) };
        let r = tol(&a).rank;
        let deg = annihilator_degree(&a, &b, r).unwrap();
        prop_assert!(deg <= d);
        let tb: Vec<C64> = (a.as_dmatrix() * DVector::from_vec(b.clone())).iter().copied().collect();
        prop_assert!(annihilator_degree(&a, &tb, r).unwrap() <= deg);
    }

    #[test]
    fn jordan_layout_is_reproduced(blocks in prop::collection::vec((-3i64..=3, 1usize..=3), 1..4)) {
        // Distinct integer eigenvalues, one or more blocks each.
        let mut layout: Vec<(i64, usize)> = Vec::new();
        for (k, &(shift, size)) in blocks.iter().enumerate() {
            let lambda = 7 * k as i64 + shift;
            layout.push((lambda, size));
            if size > 1 && shift >= 0 {
                layout.push((lambda, size - 1));
            }
        }
        let d: usize = layout.iter().map(|b| b.1).sum();
        let mut j = DMatrix::<C64>::zeros(d, d);
        let mut at = 0;
        for &(lambda, size) in &layout {
            for k in 0..size {
                j[(at + k, at + k)] = C64::new(lambda as f64, 0.0);
                if k + 1 < size {
                    j[(at + k + 1, at + k)] = C64::new(1.0, 0.0);
                }
            }
            at += size;
        }
        // A* = J.
        let a = ComplexMatrix::from_dmatrix(j.adjoint()).unwrap();
        let js = jordan_structure(&a, &tol(&a)).unwrap();
        prop_assert!(js.trusted, "{:?}", js.warnings);
        for g in &js.groups {
            let lambda = g.eigenvalue.re.round() as i64;
            let mut want: Vec<usize> = layout.iter().filter(|b| b.0 == lambda).map(|b| b.1).collect();
            want.sort_unstable_by(|x, y| y.cmp(x));
            prop_assert_eq!(&g.block_sizes, &want);
        }
        prop_assert_eq!(js.groups.len(), blocks.len());
    }

    #[test]
    fn weyr_consistency(seed in any::<u64>()) {
        let a = to_complex(&instance(seed, 6));
        let js = structure(&a);
        let j = js.jordan.as_dmatrix();
        let d = js.dimension;
        for g in &js.groups {
            let shifted = j - DMatrix::identity(d, d) * g.eigenvalue;
            let mut powers = vec![DMatrix::<C64>::identity(d, d)];
            let tmax = g.block_sizes[0];
            for k in 1..=tmax + 1 {
                let next = &powers[k - 1] * &shifted;
                powers.push(next);
            }
            let rank = |m: &DMatrix<C64>| rank_with_tol(&ComplexMatrix::from_dmatrix(m.clone()).unwrap(), 1e-10).unwrap();
            for k in 1..=tmax + 1 {
                let count = g.block_sizes.iter().filter(|&&t| t >= k).count();
                prop_assert_eq!(count, rank(&powers[k - 1]) - rank(&powers[k]));
            }
            prop_assert_eq!(g.block_count(), g.block_sizes.len());
        }
    }

    #[test]
    fn criterion_agrees_with_oracles(seed in any::<u64>(), mask in 1u32..64) {
        let int = instance(seed, 6);
        let a = to_complex(&int);
        let d = a.nrows();
        let omega = sites(d, mask);
        let scheme = SamplingScheme::unlimited(omega.clone()).unwrap();
        let an = analyze(&a, &scheme, &tol(&a)).unwrap();
        prop_assume!(an.structure.trusted);
        prop_assert_eq!(an.report.feasible, an.oracle_feasible);
        let exact = exact_sampling_rank(&int, &omega, &vec![d - 1; omega.len()]) == d;
        prop_assert_eq!(an.report.feasible, exact);
    }

    #[test]
    fn feasibility_is_monotone(seed in any::<u64>(), mask in 1u32..64, extra in 0usize..6, budgets in prop::collection::vec(0usize..6, 6)) {
        let a = to_complex(&instance(seed, 6));
        let d = a.nrows();
        let omega = sites(d, mask);
        let small: Vec<usize> = omega.iter().map(|&i| budgets[i] % d).collect();
        let base = SamplingScheme::per_site(omega.clone(), small.clone()).unwrap();
        let mut grown_sites = omega.clone();
        let mut grown_budgets: Vec<usize> = small.iter().map(|&l| (l + 1).min(d - 1)).collect();
        if !grown_sites.contains(&(extra % d)) {
            grown_sites.push(extra % d);
            grown_budgets.push(0);
        }
        let grown = SamplingScheme::per_site(grown_sites, grown_budgets).unwrap();
        let t = tol(&a);
        let f0 = analyze(&a, &base, &t).unwrap();
        let f1 = analyze(&a, &grown, &t).unwrap();
        prop_assume!(f0.structure.trusted);
        if f0.report.feasible {
            prop_assert!(f1.report.feasible);
        }
    }

    #[test]
    fn annihilator_budgets_suffice(seed in any::<u64>(), mask in 1u32..64) {
        let a = to_complex(&instance(seed, 6));
        let d = a.nrows();
        let omega = sites(d, mask);
        let adj = adjoint(&a);
        let r = tol(&a).rank;
        let truncated: Vec<usize> = omega
            .iter()
            .map(|&i| annihilator_degree(&adj, &unit(d, i), r).unwrap().saturating_sub(1))
            .collect();
        let full = SamplingScheme::unlimited(omega.clone()).unwrap();
        let cut = SamplingScheme::per_site(omega, truncated).unwrap();
        prop_assert_eq!(
            brute_force_feasible(&a, &full, r).unwrap(),
            brute_force_feasible(&a, &cut, r).unwrap()
        );
    }

    #[test]
    fn feasible_sets_are_large_enough(seed in any::<u64>(), mask in 1u32..64) {
        let a = to_complex(&instance(seed, 6));
        let omega = sites(a.nrows(), mask);
        let an = analyze(&a, &SamplingScheme::unlimited(omega.clone()).unwrap(), &tol(&a)).unwrap();
        if an.report.feasible {
            prop_assert!(omega.len() >= an.structure.max_block_count());
        }
    }
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn sampling_laws(seed in any::<u64>(), mask in 1u32..64, sigma in 0.0f64..0.1) {
        let a = to_complex(&instance(seed, 6));
        let d = a.nrows();
        let scheme = SamplingScheme::unlimited(sites(d, mask)).unwrap();
        let r = tol(&a).rank;
        let m = build_sampling_matrix(&a, &scheme).unwrap();
        let fr = frame_bounds(&m, r).unwrap();
        prop_assert_eq!(fr.feasible, brute_force_feasible(&a, &scheme, r).unwrap());

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_vector(d, &mut rng);
        let energy = (m.as_dmatrix() * DVector::from_vec(f.clone())).norm_squared();
        let nf = norm(&f).powi(2);
        prop_assert!(energy >= fr.c1 * nf - 1e-10 * fr.c2 * nf);
        prop_assert!(energy <= fr.c2 * nf * (1.0 + 1e-10));

        // Round trip without noise; the error bound scales with the condition number.
        prop_assume!(fr.feasible && fr.condition < 1e6);
        let clean = simulate_samples(&a, &scheme, &f, 0.0, seed).unwrap();
        let est = reconstruct(&a, &clean, r).unwrap().estimate;
        let err: Vec<C64> = est.iter().zip(&f).map(|(x, y)| x - y).collect();
        prop_assert!(norm(&err) <= 1e-8 * norm(&f), "{}", norm(&err) / norm(&f));

        // Noise stability.
        let noisy = simulate_samples(&a, &scheme, &f, sigma, seed).unwrap();
        let eta: Vec<C64> = noisy.values.iter().zip(&clean.values).map(|(x, y)| x - y).collect();
        let est = reconstruct(&a, &noisy, r).unwrap().estimate;
        let err: Vec<C64> = est.iter().zip(&f).map(|(x, y)| x - y).collect();
        prop_assert!(norm(&err) <= norm(&eta) / fr.c1.sqrt() * (1.0 + 1e-8) + 1e-12 * norm(&f));
    }

    #[test]
    fn placements_are_certified(seed in any::<u64>()) {
        let a = to_complex(&instance(seed, 7));
        let d = a.nrows();
        let js = structure(&a);
        prop_assume!(js.trusted);
        let r = tol(&a).rank;
        let ex = minimal_placement_exhaustive(&js, d).unwrap().expect("the full site set is feasible");
        let gr = greedy_placement(&js).unwrap();
        prop_assert!(gr.size >= ex.size);
        for omega in [&ex.omega, &gr.omega] {
            prop_assert!(brute_force_feasible(&a, &SamplingScheme::unlimited(omega.clone()).unwrap(), r).unwrap());
        }
        // Direct subset enumeration with the brute-force oracle.
        let smallest = (1u32..(1 << d))
            .filter(|m| brute_force_feasible(&a, &SamplingScheme::unlimited(sites(d, *m)).unwrap(), r).unwrap())
            .map(|m| m.count_ones() as usize)
            .min()
            .unwrap();
        prop_assert_eq!(ex.size, smallest);
        prop_assert!(ex.size >= js.max_block_count());
    }
}

fn disk_points(raw: &[(f64, f64)]) -> Vec<C64> {
    raw.iter().map(|&(r, t)| C64::from_polar(r, t)).collect()
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn gramian_matches_series(raw in prop::collection::vec((0.0f64..0.999, 0.0f64..TAU), 1..12)) {
        let seq = DiskSequence::new(disk_points(&raw)).unwrap();
        prop_assert!(truncated_gramian(&seq).unwrap().series_deviation < 1e-10);
        let g = dynsamp::hardy::gramian_matrix(&seq);
        for s in 0..seq.len() {
            for t in 0..seq.len() {
                prop_assert!((series_entry(&seq, s, t) - g[(s, t)]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn carleson_products_shrink_with_truncation(raw in prop::collection::vec((0.0f64..0.99, 0.0f64..TAU), 2..16)) {
        let seq = DiskSequence::new(disk_points(&raw)).unwrap();
        let mut previous: Option<Vec<f64>> = None;
        for k in 1..=seq.len() {
            let p = carleson_products(&seq.truncate(k).unwrap()).log_products;
            if let Some(prev) = &previous {
                for n in 0..prev.len() {
                    prop_assert!(p[n] <= prev[n] + 1e-12);
                }
            }
            previous = Some(p);
        }
    }

    #[test]
    fn scaled_weights_scale_the_bounds(
        raw in prop::collection::vec((0.0f64..0.95, 0.0f64..TAU), 1..10),
        mods in prop::collection::vec((0.5f64..2.0, 0.0f64..TAU), 10),
    ) {
        let seq = DiskSequence::new(disk_points(&raw)).unwrap();
        let m: Vec<C64> = mods[..seq.len()].iter().map(|&(r, t)| C64::from_polar(r, t)).collect();
        let b = WeightedVector::from_multipliers(&seq, &m).unwrap();
        let w = weighted_frame_bounds(&seq, &b).unwrap();
        let (c1, c2) = (w.multiplier_min, w.multiplier_max);
        let slack = 1e-10 * w.canonical_upper * c2 * c2;
        prop_assert!(w.lower >= c1 * c1 * w.canonical_lower - slack);
        prop_assert!(w.upper <= c2 * c2 * w.canonical_upper + slack);
    }

    #[test]
    fn iterates_decay_geometrically(raw in prop::collection::vec((0.0f64..0.9, 0.0f64..TAU), 1..10), l in 0u64..200) {
        let seq = DiskSequence::new(disk_points(&raw)).unwrap();
        let b = WeightedVector::canonical(&seq);
        let r = seq.lambdas().iter().map(|z| z.norm()).fold(0.0, f64::max);
        let lhs = norm(&seq.apply_power(&b, l).unwrap());
        prop_assert!(lhs <= r.powi(l as i32) * norm(&b.values) * (1.0 + 1e-12));
    }

    #[test]
    fn matrix_and_scheme_files_round_trip(seed in any::<u64>(), mask in 1u32..64, l in 0usize..8) {
        let a = to_complex(&instance(seed, 6));
        let d = a.nrows();
        let text = to_json_string(&MatrixFile::from_matrix(&a)).unwrap();
        prop_assert_eq!(to_json_string(&MatrixFile::from_matrix(&a)).unwrap(), text.clone());
        let back: MatrixFile = parse_json(&text, "m").unwrap();
        prop_assert_eq!(back.into_matrix().unwrap().into_dmatrix(), a.into_dmatrix());
        let scheme = SamplingScheme::uniform(sites(d, mask), l).unwrap();
        let text = to_json_string(&SchemeFile::from_scheme(&scheme)).unwrap();
        let back: SchemeFile = parse_json(&text, "s").unwrap();
        prop_assert_eq!(back.into_scheme().unwrap(), scheme);
    }

    #[test]
    fn floats_survive_serialization(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let text = to_json_string(&x).unwrap();
        let back: f64 = parse_json(&text, "x").unwrap();
        prop_assert_eq!(back, x);
    }
}
