use ptr_forge::analysis::{
    complete_mapping_check, decompose, degree_and_sum_report, fiber_profile, form_classify, kappa_from_two_to_one,
    linearity_identity_check, s_ab_check, verify_slice_theorems, AnalysisError,
};
use ptr_forge::catalog::{self, CatalogError};
use ptr_forge::collineation::{group_at, is_transitive, transitivity_profile, default_flags};
use ptr_forge::coord::{
    coordinatise, coordinatise_additive_optimal, coordinatise_multiplicative_optimal, fano_from_involutions,
    fano_to_involutive_coordinatisation, find_fano_direct, loops_of, Coordinatisation,
    VerticalLabelling,
};
use ptr_forge::field::{FiniteField, QuadraticExtension};
use ptr_forge::plane::{
    desarguesian_plane, desargues_witness, plane_from_ptr, plane_from_quasifield, validate_plane, IncidencePlane,
};
use ptr_forge::poly::ReducedPoly;
use ptr_forge::properties::{check_ptr_properties, linearity_witness, loop_analysis};
use ptr_forge::ternary::TernaryTable;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::input::{self, TableLike};
use crate::{AnalyzeCmd, CatalogCmd, Cli, Command, CoordinatiseArgs, FanoCmd, Global, Optimal, PlaneCmd, PtrCmd, TransitivityCmd};

pub struct Outcome {
    pub report: Value,
    pub ok: bool,
    pub artifact_written: bool,
    /// Printed verbatim instead of the report.
    pub raw: Option<String>,
}

fn ok(report: Value) -> Outcome {
    Outcome {
        report,
        ok: true,
        artifact_written: false,
        raw: None,
    }
}

fn failed(report: Value) -> Outcome {
    Outcome {
        report,
        ok: false,
        artifact_written: false,
        raw: None,
    }
}

/// Writes the command's artifact to `--out`, or to stdout in place of the
/// report when `raw` is set and there is no `--out`.
fn with_artifact(g: &Global, report: Value, artifact: String, raw: bool) -> Result<Outcome, String> {
    match &g.out {
        Some(path) => {
            std::fs::write(path, artifact).map_err(|e| format!("{}: {e}", path.display()))?;
            Ok(Outcome {
                report,
                ok: true,
                artifact_written: true,
                raw: None,
            })
        }
        None if raw => Ok(Outcome {
            raw: Some(artifact),
            ..ok(report)
        }),
        None => Ok(ok(report)),
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, String> {
    let g = &cli.global;
    match &cli.command {
        Command::Plane(c) => plane_cmd(g, c),
        Command::Coordinatise(a) => coordinatise_cmd(g, a),
        Command::Ptr(c) => ptr_cmd(g, c),
        Command::Analyze(c) => analyze_cmd(g, c),
        Command::Fano(c) => fano_cmd(g, c),
        Command::Transitivity(c) => transitivity_cmd(g, c),
        Command::Catalog(c) => catalog_cmd(g, c),
    }
}

fn field_json(f: &FiniteField) -> Value {
    json!({ "p": f.p(), "e": f.e(), "q": f.q(), "irreducible": f.irreducible() })
}

fn plane_cmd(g: &Global, c: &PlaneCmd) -> Result<Outcome, String> {
    match c {
        PlaneCmd::Build => {
            let (plane, source) = if g.input.is_some() {
                match input::table_or_quasifield(g)? {
                    TableLike::Ptr(t) => match plane_from_ptr(&t) {
                        Ok(p) => (p, "ptr table"),
                        Err(e) => return Ok(failed(json!({ "error": e.to_string() }))),
                    },
                    TableLike::Quasifield(qf) => match plane_from_quasifield(&qf.add_loop(), &qf.mul_loop()) {
                        Ok((_, p)) => (p, "quasifield"),
                        Err(e) => return Ok(failed(json!({ "error": e.to_string() }))),
                    },
                }
            } else {
                let f = input::field_arg(g)?.ok_or("plane build needs --field or --in")?;
                (desarguesian_plane(&f), "PG(2,q)")
            };
            let report = json!({
                "source": source,
                "order": plane.order(),
                "points": plane.num_points(),
                "lines": plane.num_lines(),
            });
            with_artifact(g, report, plane.to_data().to_json(), true)
        }
        PlaneCmd::Validate => {
            let data = input::plane_data(g)?;
            Ok(match validate_plane(&data) {
                Ok(n) => ok(json!({ "valid": true, "order": n })),
                Err(ptr_forge::plane::PlaneError::AxiomViolation { kind, witness }) => {
                    failed(json!({ "valid": false, "violation": kind, "witness": witness }))
                }
                Err(e) => failed(json!({ "valid": false, "error": e.to_string() })),
            })
        }
        PlaneCmd::Desargues => {
            let plane = input::plane(g)?;
            let w = desargues_witness(&plane);
            Ok(ok(json!({ "order": plane.order(), "desarguesian": w.is_none(), "witness": w })))
        }
    }
}

/// Least incident flag whose elation group is transitive and elementary
/// abelian, as `(O, X, Y)` with `Y` the center.
fn auto_additive_frame(plane: &IncidencePlane) -> Option<[usize; 3]> {
    let n = plane.num_points();
    for l in 0..n {
        for &y in plane.line_points(l) {
            let y = y as usize;
            if is_transitive(plane, y, l) && group_at(plane, y, l).elementary_abelian {
                let x = plane.line_points(l).iter().map(|&p| p as usize).find(|&p| p != y)?;
                let o = (0..n).find(|&p| !plane.incident(p, l))?;
                return Some([o, x, y]);
            }
        }
    }
    None
}

/// Least non-incident flag whose homology group is transitive and cyclic,
/// as `(O, X, Y)` with `X` the center and `OY` the axis.
fn auto_multiplicative_frame(plane: &IncidencePlane) -> Option<[usize; 3]> {
    let n = plane.num_points();
    for x in 0..n {
        for l in 0..n {
            if plane.incident(x, l) {
                continue;
            }
            if is_transitive(plane, x, l) && group_at(plane, x, l).cyclic {
                let pts = plane.line_points(l);
                return Some([pts[0] as usize, x, pts[1] as usize]);
            }
        }
    }
    None
}

fn xy_plus_z(f: &FiniteField) -> ReducedPoly {
    ReducedPoly::from_terms(f, 3, [(vec![1, 1, 0], 1), (vec![0, 0, 1], 1)])
}

fn coordinatise_cmd(g: &Global, a: &CoordinatiseArgs) -> Result<Outcome, String> {
    let plane = input::plane(g)?;
    let result: Result<(Coordinatisation<'_>, TernaryTable), String> = match a.optimal {
        None => {
            let quad = a.quadrangle.unwrap_or_else(|| plane.least_quadrangle());
            check_points(&plane, &quad)?;
            coordinatise(&plane, quad, &VerticalLabelling::Default).map_err(|e| e.to_string())
        }
        Some(opt) => {
            let frame = match a.quadrangle {
                Some(q) => {
                    check_points(&plane, &q)?;
                    Some([q[0], q[1], q[2]])
                }
                None => match opt {
                    Optimal::Add => auto_additive_frame(&plane),
                    Optimal::Mul => auto_multiplicative_frame(&plane),
                },
            };
            match frame {
                None => Err("no flag with the required transitive group".into()),
                Some([o, x, y]) => match opt {
                    Optimal::Add => coordinatise_additive_optimal(&plane, o, x, y),
                    Optimal::Mul => coordinatise_multiplicative_optimal(&plane, o, x, y),
                }
                .map_err(|e| e.to_string()),
            }
        }
    };
    let (coord, t) = match result {
        Ok(r) => r,
        Err(e) => return Ok(failed(json!({ "error": e }))),
    };
    if let Some(path) = &a.dump {
        let dump = serde_json::to_string(&coord.dump()).expect("dump serializes");
        std::fs::write(path, dump + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
    }
    let f = t.field().clone();
    let poly = t.to_poly();
    let report = json!({
        "field": field_json(&f),
        "quadrangle": coord.quadrangle(),
        "anchors": coord.anchors(),
        "optimal": a.optimal.map(|o| format!("{o:?}").to_lowercase()),
        "properties": check_ptr_properties(&t),
        "linear": linearity_witness(&t).is_none(),
        "xy_plus_z": poly == xy_plus_z(&f),
        "terms": poly.num_terms(),
    });
    with_artifact(g, report, t.to_text(), false)
}

fn check_points(plane: &IncidencePlane, pts: &[usize]) -> Result<(), String> {
    match pts.iter().find(|&&p| p >= plane.num_points()) {
        Some(p) => Err(format!("point {p} out of range")),
        None => Ok(()),
    }
}

fn ptr_cmd(g: &Global, c: &PtrCmd) -> Result<Outcome, String> {
    let t = input::table(g)?;
    let f = t.field().clone();
    match c {
        PtrCmd::Check => {
            let props = check_ptr_properties(&t);
            let mut report = json!({ "field": field_json(&f), "properties": props });
            if props.ptr {
                let (plus, times) = loops_of(&t);
                report["addition"] = json!(loop_analysis(&plus));
                report["multiplication"] = json!(loop_analysis(&times));
                report["linearity_witness"] = json!(linearity_witness(&t));
            }
            Ok(if props.ptr { ok(report) } else { failed(report) })
        }
        PtrCmd::Poly => {
            let poly = t.to_poly();
            let report = json!({ "field": field_json(&f), "terms": poly.num_terms(), "degrees": poly.degrees() });
            with_artifact(g, report, poly.to_text(), true)
        }
        PtrCmd::Decompose => Ok(match decompose(&t.to_poly()) {
            Ok(dec) => ok(json!({
                "field": field_json(&f),
                "m1": dec.m1.to_text(),
                "m2": dec.m2.to_text(),
                "m1_terms": dec.m1.num_terms(),
                "m2_terms": dec.m2.num_terms(),
            })),
            Err(e) => failed(analysis_error(e)),
        }),
    }
}

fn analysis_error(e: AnalysisError) -> Value {
    let kind = match &e {
        AnalysisError::NotPropertyAForm(_) => "not_property_a_form",
        AnalysisError::AssumptionsUnmet(_) => "assumptions_unmet",
        AnalysisError::InternalContradiction { .. } => "internal_contradiction",
        AnalysisError::NotTwoToOne(_) => "not_two_to_one",
        AnalysisError::Arity { .. } => "arity",
    };
    json!({ "error": kind, "detail": e.to_string() })
}

fn analyze_cmd(g: &Global, c: &AnalyzeCmd) -> Result<Outcome, String> {
    if let AnalyzeCmd::Kappa = c {
        let f = input::field_arg(g)?.ok_or("analyze kappa needs --field")?;
        let map = if g.input.is_some() {
            input::map_values(g, f.q())?
        } else {
            f.elements().map(|x| f.mul(x, x)).collect()
        };
        return Ok(match kappa_from_two_to_one(&f, &map) {
            Ok((poly, profile)) => ok(json!({
                "field": field_json(&f),
                "map": map,
                "polynomial": poly.to_text(),
                "profile": profile,
            })),
            Err(e) => failed(analysis_error(e)),
        });
    }
    let t = input::table(g)?;
    let f = t.field().clone();
    let result = match c {
        AnalyzeCmd::Slices => verify_slice_theorems(&t).map(|r| {
            let fibers = slice_fibers(&t);
            json!({ "report": r, "fibers": fibers })
        }),
        AnalyzeCmd::Forms => decompose(&t.to_poly()).and_then(|dec| {
            Ok(json!({
                "flags": form_classify(&dec),
                "degrees": degree_and_sum_report(&dec),
                "linearity_identity": linearity_identity_check(&dec)?,
            }))
        }),
        AnalyzeCmd::Sab => s_ab_check(&t, &QuadraticExtension::new(&f)).map(|r| json!(r)),
        AnalyzeCmd::CompleteMappings => {
            decompose(&t.to_poly()).and_then(|dec| complete_mapping_check(&dec)).map(|r| {
                let all = r.all_complete;
                json!({ "report": r, "all_complete": all })
            })
        }
        AnalyzeCmd::Kappa => unreachable!(),
    };
    Ok(match result {
        Ok(mut report) => {
            report["field"] = field_json(&f);
            let good = report.get("all_complete").is_none_or(|v| v.as_bool() == Some(true));
            if good {
                ok(report)
            } else {
                failed(report)
            }
        }
        Err(e) => failed(analysis_error(e)),
    })
}

/// Fiber class of every one-variable slice and of `T(X,Y,z) - z`.
fn slice_fibers(t: &TernaryTable) -> Value {
    let f = t.field();
    let q = f.q();
    let class = |vals: Vec<u32>, n: usize| {
        let p = ptr_forge::poly::interpolate(f, n, &vals).expect("complete table");
        fiber_profile(&p).class
    };
    let mut x_slices = Vec::new();
    let mut y_slices = Vec::new();
    let mut z_slices = Vec::new();
    for u in 0..q {
        for v in 0..q {
            x_slices.push(json!({ "y": u, "z": v, "class": class((0..q).map(|x| t.get(x, u, v)).collect(), 1) }));
            y_slices.push(json!({ "x": u, "z": v, "class": class((0..q).map(|y| t.get(u, y, v)).collect(), 1) }));
            z_slices.push(json!({ "x": u, "y": v, "class": class((0..q).map(|z| t.get(u, v, z)).collect(), 1) }));
        }
    }
    let kappa: Vec<Value> = (0..q)
        .map(|z| {
            let vals = (0..q).flat_map(|x| (0..q).map(move |y| (x, y))).map(|(x, y)| f.sub(t.get(x, y, z), z)).collect();
            json!({ "z": z, "class": class(vals, 2) })
        })
        .collect();
    json!({ "T(X,y,z)": x_slices, "T(x,Y,z)": y_slices, "T(x,y,Z)": z_slices, "T(X,Y,z)-z": kappa })
}

fn fano_cmd(g: &Global, c: &FanoCmd) -> Result<Outcome, String> {
    let plane = input::plane(g)?;
    match c {
        FanoCmd::Find => Ok(ok(match find_fano_direct(&plane) {
            Some(w) => json!({ "order": plane.order(), "result": "found", "witness": w }),
            None => json!({ "order": plane.order(), "result": "none" }),
        })),
        FanoCmd::Involution { t: Some(t), .. } => {
            let Some(w) = find_fano_direct(&plane) else {
                return Ok(failed(json!({ "result": "none", "error": "plane has no Fano configuration" })));
            };
            Ok(match fano_to_involutive_coordinatisation(&plane, &w, *t) {
                Ok((coord, table)) => ok(json!({
                    "witness": w,
                    "t": t,
                    "quadrangle": coord.quadrangle(),
                    "t_plus_t": table.get(1, *t, *t),
                    "involutions": loop_analysis(&loops_of(&table).0).involutions,
                })),
                Err(e) => failed(json!({ "error": e.to_string() })),
            })
        }
        FanoCmd::Involution { t: None, quadrangle } => {
            let quad = quadrangle.unwrap_or_else(|| plane.least_quadrangle());
            check_points(&plane, &quad)?;
            let (coord, table) = match coordinatise(&plane, quad, &VerticalLabelling::Default) {
                Ok(r) => r,
                Err(e) => return Ok(failed(json!({ "error": e.to_string() }))),
            };
            let found: Vec<Value> = fano_from_involutions(&coord, &table)
                .into_iter()
                .map(|(t, w)| json!({ "t": t, "witness": w }))
                .collect();
            Ok(ok(json!({ "quadrangle": quad, "involutions": found })))
        }
    }
}

fn transitivity_cmd(g: &Global, c: &TransitivityCmd) -> Result<Outcome, String> {
    let plane = input::plane(g)?;
    match c {
        TransitivityCmd::Profile => {
            let (mut flags, sampled) = default_flags(&plane, g.exhaustive);
            // The seed only changes the visiting order; the profile sorts.
            flags.shuffle(&mut ChaCha8Rng::seed_from_u64(g.seed));
            let mut profile = transitivity_profile(&plane, Some(&flags), g.exhaustive);
            profile.sampled = sampled;
            Ok(ok(json!({
                "order": plane.order(),
                "flags_tested": flags.len(),
                "profile": profile,
            })))
        }
        TransitivityCmd::Flag { point, line } => {
            check_points(&plane, &[*point, *line])?;
            let gr = group_at(&plane, *point, *line);
            Ok(ok(json!({
                "incident": plane.incident(*point, *line),
                "group": gr,
            })))
        }
    }
}

fn catalog_cmd(_g: &Global, c: &CatalogCmd) -> Result<Outcome, String> {
    match c {
        CatalogCmd::List => Ok(ok(json!({ "entries": catalog::entries() }))),
        CatalogCmd::Verify { ids } => {
            let chosen: Vec<&catalog::CatalogEntry> = if ids.is_empty() {
                catalog::entries().iter().collect()
            } else {
                ids.iter()
                    .map(|id| catalog::entry(id).map_err(|e| e.to_string()))
                    .collect::<Result<_, _>>()?
            };
            let results: Vec<(String, Result<(), CatalogError>)> = chosen
                .iter()
                .map(|e| (e.id.clone(), catalog::verify_entry(e).map(|_| ())))
                .collect();
            let all = results.iter().all(|(_, r)| r.is_ok());
            let report = json!({
                "verified": results.iter().filter(|(_, r)| r.is_ok()).map(|(id, _)| id).collect::<Vec<_>>(),
                "failed": results
                    .iter()
                    .filter_map(|(id, r)| r.as_ref().err().map(|e| json!({ "id": id, "error": e.to_string() })))
                    .collect::<Vec<_>>(),
            });
            Ok(if all { ok(report) } else { failed(report) })
        }
    }
}
