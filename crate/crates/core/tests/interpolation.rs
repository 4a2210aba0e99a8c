use proptest::prelude::*;
use ptr_forge::field::{field_for_order, make_field, FiniteField};
use ptr_forge::poly::{interpolate, ReducedPoly};

mod common;

fn all_points(q: u32, n: usize) -> Vec<Vec<u32>> {
    let mut pts = vec![vec![]];
    for _ in 0..n {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                (0..q).map(move |v| {
                    let mut p = p.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    pts
}

/// Lagrange evaluation straight from the definition, as an oracle.
fn naive_eval(f: &FiniteField, table: &[u32], n: usize, x: &[u32]) -> u32 {
    let q = f.q();
    let mut acc = 0;
    for (idx, a) in all_points(q, n).iter().enumerate() {
        let mut prod = table[idx];
        for k in 0..n {
            let d = f.sub(x[k], a[k]);
            prod = f.mul(prod, f.sub(1, f.pow(d, (q - 1) as u64)));
        }
        acc = f.add(acc, prod);
    }
    acc
}

fn table_strategy() -> impl Strategy<Value = (u64, usize, Vec<u32>)> {
    (prop::sample::select(common::ORDERS.to_vec()), 1usize..=3).prop_flat_map(|(q, n)| {
        let len = (q as usize).pow(n as u32);
        (Just(q), Just(n), prop::collection::vec(0..q as u32, len))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn interpolant_reproduces_table((q, n, table) in table_strategy()) {
        let f = field_for_order(q).unwrap();
        let p = interpolate(&f, n, &table).unwrap();
        prop_assert!(p.degrees().iter().all(|&d| d < f.q()));
        prop_assert_eq!(p.evaluate_all(), table.clone());
        for (idx, x) in all_points(f.q(), n).iter().enumerate().step_by(7) {
            prop_assert_eq!(p.evaluate(x).unwrap(), table[idx]);
            prop_assert_eq!(naive_eval(&f, &table, n, x), table[idx]);
        }
    }

    #[test]
    fn reduced_polys_are_determined_by_values(
        q in prop::sample::select(common::ORDERS.to_vec()),
        n in 1usize..=3,
        raw in prop::collection::vec((prop::collection::vec(0u32..20, 3), 0u32..9), 0..12),
    ) {
        let f = field_for_order(q).unwrap();
        let terms = raw.into_iter().map(|(e, c)| (e[..n].to_vec(), c % f.q()));
        let p = ReducedPoly::from_terms(&f, n, terms);
        let back = interpolate(&f, n, &p.evaluate_all()).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(ReducedPoly::from_text(&p.to_text()).unwrap(), p);
    }
}

#[test]
fn exhaustive_round_trip_small() {
    for (p, e, n) in [(2, 1, 1), (2, 1, 2), (2, 1, 3), (3, 1, 1), (3, 1, 2)] {
        let f = make_field(p, e).unwrap();
        let q = f.q() as usize;
        let len = q.pow(n as u32);
        let total = q.pow(len as u32);
        for code in 0..total {
            let mut c = code;
            let table: Vec<u32> = (0..len)
                .map(|_| {
                    let v = (c % q) as u32;
                    c /= q;
                    v
                })
                .collect();
            let poly = interpolate(&f, n, &table).unwrap();
            assert_eq!(poly.evaluate_all(), table);
        }
    }
}

#[test]
fn field_axioms_exhaustive() {
    for q in common::ORDERS {
        let f = field_for_order(q).unwrap();
        let qq = f.q();
        for a in 0..qq {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for b in 0..qq {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..qq {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
        assert_eq!(f.order_of(f.primitive_element()).unwrap(), q - 1);
    }
}
