#![allow(dead_code)]

use std::collections::BTreeMap;

use ptr_forge::coord::VerticalLabelling;
use ptr_forge::plane::IncidencePlane;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const ORDERS: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];

pub fn random_quadrangle(plane: &IncidencePlane, rng: &mut ChaCha8Rng) -> [usize; 4] {
    let n = plane.num_points();
    loop {
        let q = [rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)];
        if plane.is_quadrangle(q) {
            return q;
        }
    }
}

/// A random assignment of labels `2..q` to the free points of `OY`.
pub fn random_labelling(plane: &IncidencePlane, quad: [usize; 4], rng: &mut ChaCha8Rng) -> VerticalLabelling {
    let [o, x, y, i] = quad;
    let oy = plane.join(o, y);
    let zero_one = plane.meet(plane.join(x, i), oy);
    let mut rest: Vec<usize> = plane
        .line_points(oy)
        .iter()
        .map(|&p| p as usize)
        .filter(|&p| p != o && p != y && p != zero_one)
        .collect();
    rest.shuffle(rng);
    VerticalLabelling::Pinned(rest.into_iter().enumerate().map(|(k, p)| (k as u32 + 2, p)).collect::<BTreeMap<_, _>>())
}

/// Every ordered quadrangle of a small plane.
pub fn all_quadrangles(plane: &IncidencePlane) -> Vec<[usize; 4]> {
    let n = plane.num_points();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if a == b || b == c || a == c || plane.collinear(a, b, c) {
                    continue;
                }
                for d in 0..n {
                    if plane.is_quadrangle([a, b, c, d]) {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}
