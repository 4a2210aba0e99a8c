use std::fs;

use ptr_forge::catalog;
use ptr_forge::field::{make_field, FiniteField};
use ptr_forge::plane::{IncidencePlane, PlaneData, Quasifield};
use ptr_forge::ternary::TernaryTable;

use crate::Global;

pub fn read_text(g: &Global) -> Result<String, String> {
    let src = g.input.as_deref().ok_or("missing --in")?;
    if let Some(id) = src.strip_prefix("catalog:") {
        let entry = catalog::entry(id).map_err(|e| e.to_string())?;
        return Ok(catalog::file_text(entry).to_string());
    }
    fs::read_to_string(src).map_err(|e| format!("{src}: {e}"))
}

pub fn field_arg(g: &Global) -> Result<Option<FiniteField>, String> {
    g.field
        .map(|(p, e)| make_field(p, e).map_err(|e| format!("--field: {e}")))
        .transpose()
}

fn check_order(g: &Global, q: u32) -> Result<(), String> {
    if let Some(f) = field_arg(g)? {
        if f.q() != q {
            return Err(format!("--field has order {}, input has order {q}", f.q()));
        }
    }
    Ok(())
}

pub fn plane_data(g: &Global) -> Result<PlaneData, String> {
    let data = PlaneData::from_json(&read_text(g)?).map_err(|e| e.to_string())?;
    check_order(g, data.order)?;
    Ok(data)
}

pub fn plane(g: &Global) -> Result<IncidencePlane, String> {
    IncidencePlane::new(&plane_data(g)?).map_err(|e| e.to_string())
}

pub fn table(g: &Global) -> Result<TernaryTable, String> {
    let t = TernaryTable::from_text(&read_text(g)?).map_err(|e| e.to_string())?;
    check_order(g, t.q())?;
    Ok(t)
}

pub enum TableLike {
    Ptr(TernaryTable),
    Quasifield(Quasifield),
}

pub fn table_or_quasifield(g: &Global) -> Result<TableLike, String> {
    let text = read_text(g)?;
    let first = text.lines().next().unwrap_or_default().trim();
    let parsed = if first.starts_with("ptr ") {
        TableLike::Ptr(TernaryTable::from_text(&text).map_err(|e| e.to_string())?)
    } else if first.starts_with("q=") {
        TableLike::Quasifield(Quasifield::from_text(&text).map_err(|e| e.to_string())?)
    } else {
        return Err(format!("expected a ptr table or quasifield, found `{first}`"));
    };
    let q = match &parsed {
        TableLike::Ptr(t) => t.q(),
        TableLike::Quasifield(qf) => qf.field().q(),
    };
    check_order(g, q)?;
    Ok(parsed)
}

/// `q` whitespace-separated values.
pub fn map_values(g: &Global, q: u32) -> Result<Vec<u32>, String> {
    let text = read_text(g)?;
    let vals: Vec<u32> = text
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| format!("bad value `{t}`")))
        .collect::<Result<_, _>>()?;
    if vals.len() != q as usize {
        return Err(format!("expected {q} values, found {}", vals.len()));
    }
    Ok(vals)
}
