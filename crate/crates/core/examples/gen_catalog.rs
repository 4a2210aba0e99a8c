//! Regenerates `crates/core/data`: canonical fields, PG(2,q) for q <= 9,
//! the Hall plane of order 9 from the nearfield multiplication, and PTR
//! tables extracted from them. Every file is checked before it is written.
//!
//! cargo run --release -p ptr-forge --example gen_catalog

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use ptr_forge::analysis::{decompose, form_classify};
use ptr_forge::coord::coordinatise_additive_optimal;
use ptr_forge::field::{field_for_order, FiniteField};
use ptr_forge::plane::{
    desarguesian_plane, desargues_witness, plane_from_quasifield, ptr_points, validate_plane, IncidencePlane,
    Quasifield,
};
use ptr_forge::properties::{check_ptr_properties, linearity_witness};
use ptr_forge::ternary::TernaryTable;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

const ORDERS: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];

struct Out {
    root: PathBuf,
    entries: Vec<Value>,
}

impl Out {
    fn write(&mut self, id: &str, kind: &str, rel: &str, text: &str, order: u32, checks: &[&str]) {
        let path = self.root.join(rel);
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, text).unwrap();
        let hash: String = Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
        self.entries.push(json!({
            "id": id,
            "kind": kind,
            "file": rel,
            "order": order,
            "sha256": hash,
            "checks": checks,
        }));
        println!("{id:<16} {rel}");
    }
}

fn field_text(f: &FiniteField) -> String {
    let irr: Vec<String> = f.irreducible().iter().map(|c| c.to_string()).collect();
    format!(
        "field p={} e={}\nirreducible {}\nprimitive {}\n",
        f.p(),
        f.e(),
        irr.join(" "),
        f.primitive_element()
    )
}

/// Nearfield of order 9: `a ∘ b = a b` for square `a`, `a b³` otherwise.
fn hall_multiplication(f: &FiniteField) -> Vec<u32> {
    let q = f.q();
    let is_square = |a: u32| a != 0 && f.pow(a, ((q - 1) / 2) as u64) == 1;
    let mut mul = Vec::with_capacity((q * q) as usize);
    for a in 0..q {
        for b in 0..q {
            mul.push(if a == 0 || is_square(a) { f.mul(a, b) } else { f.mul(a, f.pow(b, 3)) });
        }
    }
    mul
}

fn additive_table(plane: &IncidencePlane, o: usize, x: usize, y: usize) -> TernaryTable {
    let (_, t) = coordinatise_additive_optimal(plane, o, x, y).expect("additive optimal coordinatisation");
    let dec = decompose(&t.to_poly()).expect("property (a)");
    assert!(form_classify(&dec).basicform, "additive optimal table is not linear");
    t
}

fn main() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let mut out = Out {
        root: root.clone(),
        entries: Vec::new(),
    };

    for q in ORDERS {
        let f = field_for_order(q).unwrap();
        out.write(&format!("gf-{q}"), "field", &format!("fields/gf-{q}.field"), &field_text(&f), q as u32, &["canonical_irreducible"]);
    }

    for q in ORDERS {
        let f = field_for_order(q).unwrap();
        let plane = desarguesian_plane(&f);
        let data = plane.to_data();
        assert_eq!(validate_plane(&data).unwrap(), q as u32);
        let start = Instant::now();
        let desarg = desargues_witness(&plane).is_none();
        println!("  desargues search on PG(2,{q}): {:?}", start.elapsed());
        assert!(desarg);
        out.write(
            &format!("pg-2-{q}"),
            "plane",
            &format!("planes/pg-2-{q}.json"),
            &data.to_json(),
            q as u32,
            &["plane_axioms", "matches_construction", "desarguesian"],
        );

        let t = TernaryTable::linear_field(&f);
        out.write(
            &format!("ptr-pg-2-{q}"),
            "ptr-table",
            &format!("ptr/pg-2-{q}.ptr"),
            &t.to_text(),
            q as u32,
            &["ptr_properties", "linear"],
        );

        let [o, x, y, _] = plane.least_quadrangle();
        let t = additive_table(&plane, o, x, y);
        out.write(
            &format!("ptr-pg-2-{q}-add"),
            "ptr-table",
            &format!("ptr/pg-2-{q}-add.ptr"),
            &t.to_text(),
            q as u32,
            &["ptr_properties", "linear", "additive_optimal"],
        );
    }

    let f9 = field_for_order(9).unwrap();
    let qf = Quasifield::new(&f9, hall_multiplication(&f9)).unwrap();
    let (t, plane) = plane_from_quasifield(&qf.add_loop(), &qf.mul_loop()).expect("quasifield axioms");
    let start = Instant::now();
    let w = desargues_witness(&plane).expect("Hall plane is not Desarguesian");
    println!("  non-Desargues witness {w:?} in {:?}", start.elapsed());
    assert!(check_ptr_properties(&t).ptr && linearity_witness(&t).is_none());
    out.write("hall-9-qf", "quasifield", "quasifields/hall-9.qf", &qf.to_text(), 9, &["quasifield_axioms", "ptr_properties"]);
    out.write(
        "hall-9",
        "plane",
        "planes/hall-9.json",
        &plane.to_data().to_json(),
        9,
        &["plane_axioms", "non_desarguesian"],
    );
    out.write("ptr-hall-9", "ptr-table", "ptr/hall-9.ptr", &t.to_text(), 9, &["ptr_properties", "linear"]);
    // X and Y on the translation line [∞].
    let add = additive_table(&plane, ptr_points::affine(9, 0, 0), ptr_points::slope(9, 0), ptr_points::infinity(9));
    out.write(
        "ptr-hall-9-add",
        "ptr-table",
        "ptr/hall-9-add.ptr",
        &add.to_text(),
        9,
        &["ptr_properties", "linear", "additive_optimal"],
    );

    let manifest = serde_json::to_string_pretty(&json!({ "entries": out.entries })).unwrap();
    fs::write(root.join("manifest.json"), manifest + "\n").unwrap();
}
