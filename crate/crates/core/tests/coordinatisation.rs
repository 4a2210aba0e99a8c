use ptr_forge::catalog::{load_plane, load_ptr};
use ptr_forge::collineation::{central_collineation, group_at, transitivity_profile};
use ptr_forge::coord::{
    coordinatise, coordinatise_additive_optimal, coordinatise_multiplicative_optimal, fano_from_involutions,
    fano_to_involutive_coordinatisation, find_fano_direct, loops_of, trace_vertical_action, LoopOp, PointLabel,
    VerticalLabelling,
};
use ptr_forge::field::field_for_order;
use ptr_forge::plane::{desarguesian_plane, plane_from_ptr, ptr_points, validate_plane, IncidencePlane};
use ptr_forge::properties::{check_ptr_properties, loop_analysis};
use ptr_forge::ternary::TernaryTable;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod common;
use common::{all_quadrangles, random_labelling, random_quadrangle, ORDERS};

fn pg(q: u64) -> IncidencePlane {
    desarguesian_plane(&field_for_order(q).unwrap())
}

#[test]
fn duals_are_planes() {
    for q in ORDERS {
        let d = pg(q).dual();
        assert_eq!(validate_plane(&d.to_data()).unwrap() as u64, q);
    }
    let hall = load_plane("hall-9").unwrap();
    assert_eq!(validate_plane(&hall.dual().to_data()).unwrap(), 9);
}

#[test]
fn extracted_tables_rebuild_the_plane() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let hall = load_plane("hall-9").unwrap();
    let planes = [pg(4), pg(5), pg(7), hall];
    for plane in &planes {
        for _ in 0..6 {
            let quad = random_quadrangle(plane, &mut rng);
            let labelling = random_labelling(plane, quad, &mut rng);
            let (coord, t) = coordinatise(plane, quad, &labelling).unwrap();
            assert!(coord.check_consistency(&t));
            let rebuilt = plane_from_ptr(&t).unwrap();
            let q = plane.order();
            // Coordinatising the rebuilt plane at its own frame returns t.
            let (_, again) = coordinatise(&rebuilt, ptr_points::frame(q), &VerticalLabelling::Default).unwrap();
            assert_eq!(again, t);
        }
    }
}

#[test]
fn every_quadrangle_of_small_planes_gives_a_ptr() {
    for q in [2, 3, 4] {
        let plane = pg(q);
        for quad in all_quadrangles(&plane) {
            let (_, t) = coordinatise(&plane, quad, &VerticalLabelling::Default).unwrap();
            assert!(check_ptr_properties(&t).ptr);
        }
    }
}

#[test]
fn desarguesian_coordinates_are_fields() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for q in ORDERS {
        let plane = pg(q);
        for _ in 0..8 {
            let quad = random_quadrangle(&plane, &mut rng);
            let labelling = random_labelling(&plane, quad, &mut rng);
            let (_, t) = coordinatise(&plane, quad, &labelling).unwrap();
            let (plus, times) = loops_of(&t);
            let (rp, rt) = (loop_analysis(&plus), loop_analysis(&times));
            assert!(rp.elementary_abelian && rt.cyclic, "q = {q}");
            if q % 2 == 1 {
                assert!(rp.involutions.is_empty());
            } else {
                assert_eq!(rp.involutions.len() as u64, q - 1);
            }
        }
    }
}

#[test]
fn loop_identities_and_traces() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let hall = load_plane("hall-9").unwrap();
    for plane in [pg(5), pg(8), hall] {
        let quad = random_quadrangle(&plane, &mut rng);
        let (coord, t) = coordinatise(&plane, quad, &VerticalLabelling::Default).unwrap();
        let q = t.q();
        let (plus, times) = loops_of(&t);
        assert!(loop_analysis(&plus).is_loop && loop_analysis(&times).is_loop);
        for x in 0..q {
            assert_eq!(t.get(1, 0, x), x);
            assert_eq!(t.get(1, x, 0), x);
            assert_eq!(t.get(1, x, 0), t.get(x, 1, 0));
            for y in 0..q {
                let add = trace_vertical_action(&coord, &t, LoopOp::Add, x, y).unwrap();
                assert_eq!(Some(add.result), plus.op(x, y));
                let mul = trace_vertical_action(&coord, &t, LoopOp::Mul, x, y).unwrap();
                let expected = if x == 0 || y == 0 { 0 } else { times.op(x, y).unwrap() };
                assert_eq!(mul.result, expected);
            }
        }
    }
}

#[test]
fn fano_configurations_match_involutions() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut planes: Vec<(String, IncidencePlane)> = ORDERS.iter().map(|&q| (format!("pg-2-{q}"), pg(q))).collect();
    planes.push(("hall-9".into(), load_plane("hall-9").unwrap()));
    for (name, plane) in &planes {
        let direct = find_fano_direct(plane);
        let mut any_involution = false;
        for _ in 0..20 {
            let quad = random_quadrangle(plane, &mut rng);
            let (coord, t) = coordinatise(plane, quad, &random_labelling(plane, quad, &mut rng)).unwrap();
            for (s, w) in fano_from_involutions(&coord, &t) {
                any_involution = true;
                assert!(w.verify(plane));
                let a = coord.anchors();
                let tt = coord.point(PointLabel::Affine(s, s));
                assert!(plane.collinear(a.o, tt, a.j));
            }
        }
        if let Some(w) = &direct {
            assert!(w.verify(plane));
            for s in 1..plane.order() {
                let (_, t) = fano_to_involutive_coordinatisation(plane, w, s).unwrap();
                assert_eq!(t.get(1, s, s), 0, "{name}");
            }
        } else {
            assert!(!any_involution, "{name}");
        }
        if any_involution {
            assert!(direct.is_some(), "{name}");
        }
    }
}

#[test]
fn collineations_are_automorphisms() {
    let hall = load_plane("hall-9").unwrap();
    for plane in [pg(4), pg(7), hall] {
        let flags = [(0, plane.point_lines(0)[0] as usize), (1, plane.point_lines(5)[0] as usize)];
        for (a, l) in flags {
            let g = group_at(&plane, a, l);
            let mut seen = std::collections::BTreeSet::new();
            for m in &g.maps {
                assert!(m.verify(&plane));
                assert!(seen.insert(m.points.clone()), "two targets give the same map");
            }
        }
    }
}

#[test]
fn pg_group_orders() {
    for q in ORDERS {
        let qq = q as u32;
        let (o, x, y) = (ptr_points::affine(qq, 0, 0), ptr_points::slope(qq, 0), ptr_points::infinity(qq));
        // PG(2,q) rebuilt from m·x + y, so the ptr_points indices apply.
        let rebuilt = plane_from_ptr(&TernaryTable::linear_field(&field_for_order(q).unwrap())).unwrap();
        let elations = group_at(&rebuilt, y, rebuilt.join(x, y));
        assert_eq!(elations.order as u64, q);
        assert!(elations.elementary_abelian);
        let homologies = group_at(&rebuilt, x, rebuilt.join(o, y));
        assert_eq!(homologies.order as u64, q - 1);
        assert!(homologies.cyclic);
        let (_, t) = coordinatise_additive_optimal(&rebuilt, o, x, y).unwrap();
        let f = t.field();
        assert!((0..qq).all(|a| (0..qq).all(|b| t.get(1, a, b) == f.add(a, b))));
        let (_, t) = coordinatise_multiplicative_optimal(&rebuilt, o, x, y).unwrap();
        assert!((1..qq).all(|a| (1..qq).all(|b| t.get(a, b, 0) == f.mul(a, b))));
    }
}

#[test]
fn hall_plane_structure() {
    let hall = load_plane("hall-9").unwrap();
    let profile = transitivity_profile(&hall, None, false);
    assert_eq!(profile.translation_lines, vec![ptr_points::infinity(9)]);
    assert!(profile.translation_points.is_empty());
    // Elations with center (∞) and axis [∞] form an elementary abelian group.
    let inf = ptr_points::infinity(9);
    let line_inf = hall.join(ptr_points::slope(9, 0), inf);
    let g = group_at(&hall, inf, line_inf);
    assert!(g.transitive && g.elementary_abelian);
    assert!(central_collineation(&hall, inf, line_inf, 0, 1).unwrap().is_some());
    let t = load_ptr("ptr-hall-9").unwrap();
    assert!(check_ptr_properties(&t).ptr);
}
