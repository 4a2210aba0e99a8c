use proptest::prelude::*;
use ptr_forge::analysis::{
    complete_mapping_check, decompose, degree_and_sum_report, fiber_profile, form_classify, is_skew_hadamard_difference_set,
    kappa_from_two_to_one,
    linearity_identity_check, recompose, verify_slice_theorems, FiberClass,
};
use ptr_forge::catalog::{entries, load_plane, load_ptr, EntryKind};
use ptr_forge::coord::{coordinatise, coordinatise_additive_optimal};
use ptr_forge::field::field_for_order;
use ptr_forge::poly::{interpolate, ReducedPoly};
use ptr_forge::properties::{check_d, check_ptr_properties, linearity_witness};
use ptr_forge::ternary::TernaryTable;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod common;
use common::{random_labelling, random_quadrangle, ORDERS};

fn catalog_tables() -> Vec<(String, TernaryTable)> {
    entries()
        .iter()
        .filter(|e| e.kind == EntryKind::PtrTable)
        .map(|e| (e.id.clone(), load_ptr(&e.id).unwrap()))
        .collect()
}

/// Hall-plane tables from random frames; most of them are not linear.
fn hall_tables(count: usize, seed: u64) -> Vec<TernaryTable> {
    let plane = load_plane("hall-9").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let quad = random_quadrangle(&plane, &mut rng);
            coordinatise(&plane, quad, &random_labelling(&plane, quad, &mut rng)).unwrap().1
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn recomposition_is_exact(
        q in prop::sample::select(ORDERS.to_vec()),
        m1 in prop::collection::vec((0u32..9, 0u32..9, 0u32..9, 1u32..9), 0..8),
        m2 in prop::collection::vec((1u32..9, 1u32..9, 1u32..9), 0..8),
    ) {
        let f = field_for_order(q).unwrap();
        let qq = f.q();
        let mut terms = vec![(vec![0, 0, 1], 1)];
        for (i, j, k, c) in m1 {
            terms.push((vec![1 + i % (qq - 1), 1 + j % (qq - 1), 1 + k % (qq - 1)], c % qq));
        }
        for (i, j, c) in m2 {
            terms.push((vec![1 + i % (qq - 1), 1 + j % (qq - 1), 0], c % qq));
        }
        let t = ReducedPoly::from_terms(&f, 3, terms);
        let dec = decompose(&t).unwrap();
        prop_assert_eq!(recompose(&dec), t);
    }

    #[test]
    fn two_to_one_maps_onto_squares_are_kappa(q in prop::sample::select(vec![3u64, 7, 11, 19, 23, 27]), seed in any::<u64>()) {
        // For q = 3 mod 4 the nonzero squares form a skew Hadamard difference set.
        let f = field_for_order(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut squares: Vec<u32> = (1..f.q()).map(|x| f.mul(x, x)).collect();
        squares.sort_unstable();
        squares.dedup();
        prop_assert!(is_skew_hadamard_difference_set(&f, &squares));
        let mut nonzero: Vec<u32> = (1..f.q()).collect();
        nonzero.shuffle(&mut rng);
        let mut map = vec![0u32; q as usize];
        for (k, &x) in nonzero.iter().enumerate() {
            map[x as usize] = squares[k % squares.len()];
        }
        let (_, profile) = kappa_from_two_to_one(&f, &map).unwrap();
        prop_assert_eq!(profile.class, FiberClass::Kappa(q - 1));
        // (0,0) plus four pairs over each image value.
        prop_assert_eq!(profile.counts[&0], 1 + 4 * (q - 1) / 2);
    }

    #[test]
    fn slice_fibers_agree_with_property_d(q in prop::sample::select(vec![2u64, 3, 4, 5]), seed in any::<u64>()) {
        let f = field_for_order(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let qq = f.q();
        // Random x·y·(row permutation)-style tables: a Latin row per (m, x),
        // with an occasional collision.
        let mut values = Vec::new();
        for _ in 0..qq * qq {
            let mut row: Vec<u32> = (0..qq).collect();
            row.shuffle(&mut rng);
            values.extend(row);
        }
        if seed % 3 == 0 {
            values[1] = values[0];
        }
        let t = TernaryTable::new(&f, values).unwrap();
        prop_assert_eq!(slices_are_pp(&t), check_d(&t).holds);
    }
}

fn slices_are_pp(t: &TernaryTable) -> bool {
    let f = t.field();
    let q = f.q();
    (0..q).all(|x| {
        (0..q).all(|y| {
            let vals: Vec<u32> = (0..q).map(|z| t.get(x, y, z)).collect();
            let p = interpolate(f, 1, &vals).unwrap();
            fiber_profile(&p).class == FiberClass::Pp
        })
    })
}

#[test]
fn bundled_tables_fiber_oracle() {
    for (id, t) in catalog_tables() {
        assert_eq!(slices_are_pp(&t), check_d(&t).holds, "{id}");
    }
}

#[test]
fn linearity_identity_matches_table_check() {
    let mut tables: Vec<TernaryTable> = catalog_tables().into_iter().map(|(_, t)| t).collect();
    tables.extend(hall_tables(12, 1));
    let mut nonlinear = 0;
    for t in &tables {
        assert!(check_ptr_properties(t).ptr);
        let dec = decompose(&t.to_poly()).unwrap();
        let id = linearity_identity_check(&dec).unwrap();
        assert_eq!(id.holds, linearity_witness(t).is_none());
        assert_eq!(id.holds, id.table_linear);
        nonlinear += usize::from(!id.holds);
    }
    assert!(nonlinear > 0, "sample has no non-linear table");
}

#[test]
fn coordinatiser_output_obeys_slice_and_degree_statements() {
    let mut tables: Vec<TernaryTable> = catalog_tables().into_iter().map(|(_, t)| t).collect();
    tables.extend(hall_tables(6, 2));
    for t in &tables {
        let report = verify_slice_theorems(t).unwrap();
        assert!(report.families.iter().all(|f| f.applicable && f.failures.is_empty()));
        let dec = decompose(&t.to_poly()).unwrap();
        let deg = degree_and_sum_report(&dec);
        if t.q() >= 3 {
            assert_eq!(deg.degree_bound_holds, Some(true));
            assert_eq!(deg.form_bounds_hold, Some(true));
        } else {
            assert!(deg.skipped_q2);
        }
        assert!(deg.sums_hold);
        if linearity_witness(t).is_none() && t.q() >= 3 {
            assert_eq!(deg.linear_sums_hold, Some(true));
        }
    }
}

#[test]
fn additive_optimal_tables_have_no_m1() {
    let hall = load_plane("hall-9").unwrap();
    let mut cases = vec![(hall, [0usize, 81, 90])];
    for q in ORDERS {
        let plane = ptr_forge::plane::desarguesian_plane(&field_for_order(q).unwrap());
        let [o, x, y, _] = plane.least_quadrangle();
        cases.push((plane, [o, x, y]));
    }
    for (plane, [o, x, y]) in &cases {
        let (_, t) = coordinatise_additive_optimal(plane, *o, *x, *y).unwrap();
        let dec = decompose(&t.to_poly()).unwrap();
        assert!(dec.m1.is_zero());
        let flags = form_classify(&dec);
        assert!(flags.basicform && flags.lbivd && flags.additive_associativity_identity);
        if t.q() > 2 {
            assert!(complete_mapping_check(&dec).unwrap().all_complete);
        }
    }
}
