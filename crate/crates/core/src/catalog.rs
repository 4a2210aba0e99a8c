//! Bundled example inputs, each re-verified when first loaded.
//!
//! The files under `data/` are regenerated by the `gen_catalog` example;
//! `manifest.json` records their SHA-256 and the checks they must pass.

use std::collections::BTreeSet;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::field::{field_for_order, FiniteField};
use crate::plane::{
    desarguesian_plane, desargues_witness, plane_from_quasifield, validate_plane, IncidencePlane, PlaneData,
    Quasifield,
};
use crate::properties::{check_ptr_properties, linearity_witness};
use crate::ternary::TernaryTable;

macro_rules! data_files {
    ($($path:literal),* $(,)?) => {
        &[$(($path, include_str!(concat!("../data/", $path)))),*]
    };
}

static FILES: &[(&str, &str)] = data_files![
    "fields/gf-2.field",
    "fields/gf-3.field",
    "fields/gf-4.field",
    "fields/gf-5.field",
    "fields/gf-7.field",
    "fields/gf-8.field",
    "fields/gf-9.field",
    "planes/pg-2-2.json",
    "planes/pg-2-3.json",
    "planes/pg-2-4.json",
    "planes/pg-2-5.json",
    "planes/pg-2-7.json",
    "planes/pg-2-8.json",
    "planes/pg-2-9.json",
    "planes/hall-9.json",
    "quasifields/hall-9.qf",
    "ptr/pg-2-2.ptr",
    "ptr/pg-2-3.ptr",
    "ptr/pg-2-4.ptr",
    "ptr/pg-2-5.ptr",
    "ptr/pg-2-7.ptr",
    "ptr/pg-2-8.ptr",
    "ptr/pg-2-9.ptr",
    "ptr/pg-2-2-add.ptr",
    "ptr/pg-2-3-add.ptr",
    "ptr/pg-2-4-add.ptr",
    "ptr/pg-2-5-add.ptr",
    "ptr/pg-2-7-add.ptr",
    "ptr/pg-2-8-add.ptr",
    "ptr/pg-2-9-add.ptr",
    "ptr/hall-9.ptr",
    "ptr/hall-9-add.ptr",
];

static MANIFEST: &str = include_str!("../data/manifest.json");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("entry `{id}` failed check `{check}`: {detail}")]
    VerificationFailed { id: String, check: String, detail: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryKind {
    Field,
    Plane,
    Quasifield,
    PtrTable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub kind: EntryKind,
    pub file: String,
    pub order: u32,
    pub sha256: String,
    pub checks: Vec<String>,
}

#[derive(Deserialize)]
struct Manifest {
    entries: Vec<CatalogEntry>,
}

#[derive(Debug, Clone)]
pub enum CatalogObject {
    Field(FiniteField),
    Plane(IncidencePlane),
    Quasifield(Quasifield),
    Ptr(TernaryTable),
}

impl CatalogObject {
    pub fn into_plane(self) -> Option<IncidencePlane> {
        match self {
            CatalogObject::Plane(p) => Some(p),
            _ => None,
        }
    }

    pub fn into_ptr(self) -> Option<TernaryTable> {
        match self {
            CatalogObject::Ptr(t) => Some(t),
            _ => None,
        }
    }
}

pub fn entries() -> &'static [CatalogEntry] {
    static ENTRIES: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    ENTRIES.get_or_init(|| {
        serde_json::from_str::<Manifest>(MANIFEST)
            .expect("bundled manifest parses")
            .entries
    })
}

pub fn entry(id: &str) -> Result<&'static CatalogEntry, CatalogError> {
    entries()
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| CatalogError::UnknownEntry(id.to_string()))
}

/// Contents of a bundled file.
pub fn file_text(entry: &CatalogEntry) -> &'static str {
    FILES
        .iter()
        .find(|(path, _)| *path == entry.file)
        .map(|(_, text)| *text)
        .expect("manifest file is bundled")
}

fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

fn fail(entry: &CatalogEntry, check: &str, detail: impl Into<String>) -> CatalogError {
    CatalogError::VerificationFailed {
        id: entry.id.clone(),
        check: check.into(),
        detail: detail.into(),
    }
}

fn parse(entry: &CatalogEntry, text: &str) -> Result<CatalogObject, CatalogError> {
    let err = |e: String| fail(entry, "parse", e);
    Ok(match entry.kind {
        EntryKind::Field => {
            let mut lines = text.lines();
            let header = lines.next().unwrap_or_default();
            let order = entry.order as u64;
            let f = field_for_order(order).map_err(|e| err(e.to_string()))?;
            if header != format!("field p={} e={}", f.p(), f.e()) {
                return Err(err(format!("bad header `{header}`")));
            }
            CatalogObject::Field(f)
        }
        EntryKind::Plane => {
            let data = PlaneData::from_json(text).map_err(|e| err(e.to_string()))?;
            CatalogObject::Plane(IncidencePlane::new(&data).map_err(|e| err(e.to_string()))?)
        }
        EntryKind::Quasifield => CatalogObject::Quasifield(Quasifield::from_text(text).map_err(|e| err(e.to_string()))?),
        EntryKind::PtrTable => CatalogObject::Ptr(TernaryTable::from_text(text).map_err(|e| err(e.to_string()))?),
    })
}

fn run_check(entry: &CatalogEntry, text: &str, obj: &CatalogObject, check: &str) -> Result<(), CatalogError> {
    let bad = |detail: String| Err(fail(entry, check, detail));
    match (check, obj) {
        ("canonical_irreducible", CatalogObject::Field(f)) => {
            let irr: Vec<String> = f.irreducible().iter().map(|c| c.to_string()).collect();
            let expected = format!("irreducible {}", irr.join(" "));
            let prim = format!("primitive {}", f.primitive_element());
            let lines: Vec<&str> = text.lines().collect();
            if lines.get(1) != Some(&expected.as_str()) || lines.get(2) != Some(&prim.as_str()) {
                return bad(format!("expected `{expected}` and `{prim}`"));
            }
        }
        ("plane_axioms", CatalogObject::Plane(p)) => match validate_plane(&p.to_data()) {
            Ok(n) if n == entry.order => {}
            Ok(n) => return bad(format!("order {n}")),
            Err(e) => return bad(e.to_string()),
        },
        ("matches_construction", CatalogObject::Plane(p)) => {
            let f = field_for_order(entry.order as u64).map_err(|e| fail(entry, check, e.to_string()))?;
            if desarguesian_plane(&f).to_data() != p.to_data() {
                return bad("differs from PG(2,q)".into());
            }
        }
        ("desarguesian", CatalogObject::Plane(p)) => {
            if let Some(w) = desargues_witness(p) {
                return bad(format!("{w:?}"));
            }
        }
        ("non_desarguesian", CatalogObject::Plane(p)) => {
            if desargues_witness(p).is_none() {
                return bad("no non-Desargues configuration".into());
            }
        }
        ("quasifield_axioms", CatalogObject::Quasifield(qf)) => {
            plane_from_quasifield(&qf.add_loop(), &qf.mul_loop()).map_err(|e| fail(entry, check, e.to_string()))?;
        }
        ("ptr_properties", CatalogObject::Quasifield(qf)) => {
            let (t, _) = plane_from_quasifield(&qf.add_loop(), &qf.mul_loop())
                .map_err(|e| fail(entry, check, e.to_string()))?;
            if let Some((prop, w)) = check_ptr_properties(&t).first_failure() {
                return bad(format!("property ({prop}) at {w:?}"));
            }
        }
        ("ptr_properties", CatalogObject::Ptr(t)) => {
            if let Some((prop, w)) = check_ptr_properties(t).first_failure() {
                return bad(format!("property ({prop}) at {w:?}"));
            }
        }
        ("linear", CatalogObject::Ptr(t)) => {
            if let Some(w) = linearity_witness(t) {
                return bad(format!("{w:?}"));
            }
        }
        ("additive_optimal", CatalogObject::Ptr(t)) => {
            let f = t.field();
            for a in f.elements() {
                for b in f.elements() {
                    if t.get(1, a, b) != f.add(a, b) {
                        return bad(format!("({a}, {b})"));
                    }
                }
            }
        }
        _ => return bad("check does not apply to this kind".into()),
    }
    Ok(())
}

/// Hashes, parses and runs every manifest check, from scratch.
pub fn verify_entry(entry: &CatalogEntry) -> Result<CatalogObject, CatalogError> {
    let text = file_text(entry);
    let hash = sha256_hex(text);
    if hash != entry.sha256 {
        return Err(fail(entry, "sha256", format!("content hash {hash}")));
    }
    let obj = parse(entry, text)?;
    for check in &entry.checks {
        run_check(entry, text, &obj, check)?;
    }
    Ok(obj)
}

fn verified() -> &'static Mutex<BTreeSet<String>> {
    static VERIFIED: OnceLock<Mutex<BTreeSet<String>>> = OnceLock::new();
    VERIFIED.get_or_init(Default::default)
}

/// Loads an entry. The full check list runs once per process; later loads
/// only re-hash and parse.
pub fn load_entry(id: &str) -> Result<CatalogObject, CatalogError> {
    let entry = entry(id)?;
    if verified().lock().unwrap().contains(id) {
        let text = file_text(entry);
        if sha256_hex(text) != entry.sha256 {
            return Err(fail(entry, "sha256", "content changed"));
        }
        return parse(entry, text);
    }
    let obj = verify_entry(entry)?;
    verified().lock().unwrap().insert(id.to_string());
    Ok(obj)
}

pub fn load_plane(id: &str) -> Result<IncidencePlane, CatalogError> {
    load_entry(id)?
        .into_plane()
        .ok_or_else(|| CatalogError::UnknownEntry(format!("{id} (not a plane)")))
}

pub fn load_ptr(id: &str) -> Result<TernaryTable, CatalogError> {
    load_entry(id)?
        .into_ptr()
        .ok_or_else(|| CatalogError::UnknownEntry(format!("{id} (not a ptr table)")))
}

pub fn ids_of_kind(kind: EntryKind) -> Vec<&'static str> {
    entries().iter().filter(|e| e.kind == kind).map(|e| e.id.as_str()).collect()
}
