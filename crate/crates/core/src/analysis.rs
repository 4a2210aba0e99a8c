//! Polynomial-level analysis of ternary rings.
//!
//! A table satisfying property (a) interpolates to
//! `T = Z + XYZ·M1(X,Y,Z) + M2(X,Y)` where every monomial of `M2` has
//! positive `X` and `Y` exponents. Most checks here work on that split.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::field::{FiniteField, QuadraticExtension};
use crate::par;
use crate::poly::{interpolate, ReducedPoly};
use crate::properties::{check_ptr_properties, linearity_witness, PropertyReport};
use crate::ternary::TernaryTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("coefficient of X^{0:?} rules out property (a)")]
    NotPropertyAForm(Vec<u32>),
    #[error("assumptions unmet: {0}")]
    AssumptionsUnmet(String),
    #[error("internal contradiction in {which} at {witness:?}")]
    InternalContradiction { which: String, witness: Vec<u32> },
    #[error("not a two-to-one map: {0}")]
    NotTwoToOne(String),
    #[error("expected a polynomial in {expected} variables, got {got}")]
    Arity { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// `M1(X,Y,Z)` with `T = Z + XYZ·M1 + M2`.
    pub m1: ReducedPoly,
    /// `M2(X,Y)`, every monomial with both exponents at least 1.
    pub m2: ReducedPoly,
    pub original: ReducedPoly,
}

impl Decomposition {
    pub fn field(&self) -> &FiniteField {
        self.original.field()
    }

    /// `c_ij`, the coefficient of `X^i Y^j` in `M2`.
    pub fn c(&self, i: u32, j: u32) -> u32 {
        self.m2.coeff(&[i, j])
    }

    /// `b_ijk`, the coefficient of `X^i Y^j Z^k` in `M1`.
    pub fn b(&self, i: u32, j: u32, k: u32) -> u32 {
        self.m1.coeff(&[i, j, k])
    }
}

/// Splits a trivariate reduced polynomial as `Z + XYZ·M1 + M2`.
pub fn decompose(t: &ReducedPoly) -> Result<Decomposition, AnalysisError> {
    if t.arity() != 3 {
        return Err(AnalysisError::Arity {
            expected: 3,
            got: t.arity(),
        });
    }
    let f = t.field();
    let mut offending: Vec<Vec<u32>> = Vec::new();
    if t.coeff(&[0, 0, 1]) != 1 {
        offending.push(vec![0, 0, 1]);
    }
    let mut m1 = Vec::new();
    let mut m2 = Vec::new();
    for (e, c) in t.terms() {
        match (e[0], e[1], e[2]) {
            (0, 0, 1) => {}
            (i, j, _) if i == 0 || j == 0 => offending.push(e.to_vec()),
            (i, j, 0) => m2.push((vec![i, j], c)),
            (i, j, k) => m1.push((vec![i - 1, j - 1, k - 1], c)),
        }
    }
    if let Some(first) = offending.into_iter().min() {
        return Err(AnalysisError::NotPropertyAForm(first));
    }
    Ok(Decomposition {
        m1: ReducedPoly::from_terms(f, 3, m1),
        m2: ReducedPoly::from_terms(f, 2, m2),
        original: t.clone(),
    })
}

pub fn recompose(dec: &Decomposition) -> ReducedPoly {
    let f = dec.field();
    let z = ReducedPoly::from_terms(f, 3, [(vec![0, 0, 1], 1)]);
    let m2 = ReducedPoly::from_terms(f, 3, dec.m2.terms().map(|(e, c)| (vec![e[0], e[1], 0], c)));
    z.add(&dec.m1.mul_monomial(&[1, 1, 1], 1)).add(&m2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "k", rename_all = "lowercase")]
pub enum FiberClass {
    Pp,
    Kappa(u64),
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberProfile {
    /// Preimage count of every value, zero counts included.
    pub counts: BTreeMap<u32, u64>,
    pub class: FiberClass,
}

/// Fiber counts of a function on `F_q^n` given by its value table.
pub fn fiber_profile_of_values(q: u32, n: u32, values: &[u32]) -> FiberProfile {
    let mut counts: BTreeMap<u32, u64> = (0..q).map(|v| (v, 0)).collect();
    for &v in values {
        *counts.get_mut(&v).expect("value in field") += 1;
    }
    let even = (q as u64).pow(n.saturating_sub(1));
    let class = if counts.values().all(|&c| c == even) {
        FiberClass::Pp
    } else {
        let k = counts[&1.min(q - 1)];
        if q > 1 && counts.iter().filter(|(&v, _)| v != 0).all(|(_, &c)| c == k) {
            FiberClass::Kappa(k)
        } else {
            FiberClass::Neither
        }
    };
    FiberProfile { counts, class }
}

pub fn fiber_profile(poly: &ReducedPoly) -> FiberProfile {
    let q = poly.field().q();
    fiber_profile_of_values(q, poly.arity() as u32, &poly.evaluate_all())
}

fn is_permutation(values: impl Iterator<Item = u32>, q: usize) -> bool {
    let mut seen = vec![false; q];
    for v in values {
        if std::mem::replace(&mut seen[v as usize], true) {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceFamily {
    pub family: String,
    pub needs: String,
    pub applicable: bool,
    pub slices: usize,
    pub passing: usize,
    pub failures: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceReport {
    pub q: u32,
    pub properties: PropertyReport,
    pub families: Vec<SliceFamily>,
}

/// Exhaustive checks of the permutation and fiber statements that follow
/// from the ternary-ring properties:
///
/// - `T(X,y,z)` is a PP for `y != 0` (needs (a), (c))
/// - `T(x,Y,z)` is a PP for `x != 0` (needs (a), (e))
/// - `T(x,y,Z)` is a PP (needs (d))
/// - `T(X,Y,z) - z` has `2q-1` zeros and `q-1` preimages of each nonzero
///   value (needs (a) and one of (c), (e))
/// - `T` has `q²` preimages of every value (needs (d), or (a) and one of
///   (c), (e))
///
/// A family whose assumptions fail is reported as not applicable. A failure
/// inside an applicable family is an error.
pub fn verify_slice_theorems(t: &TernaryTable) -> Result<SliceReport, AnalysisError> {
    let q = t.q();
    let qs = q as usize;
    let props = check_ptr_properties(t);
    let (a, c, d, e) = (props.a.holds, props.c.holds, props.d.holds, props.e.holds);

    let pp_family = |name: &str, needs: &str, ok: bool, slice: &(dyn Fn(u32, u32) -> Vec<u32> + Sync), skip_first_zero: bool| {
        let mut failures = Vec::new();
        let mut slices = 0;
        if ok {
            for u in 0..q {
                if skip_first_zero && u == 0 {
                    continue;
                }
                for v in 0..q {
                    slices += 1;
                    if !is_permutation(slice(u, v).into_iter(), qs) {
                        failures.push(vec![u, v]);
                    }
                }
            }
        }
        SliceFamily {
            family: name.into(),
            needs: needs.into(),
            applicable: ok,
            slices,
            passing: slices - failures.len(),
            failures,
        }
    };

    let mut families = vec![
        pp_family("T(X,y,z) for y != 0", "a,c", a && c, &|y, z| (0..q).map(|x| t.get(x, y, z)).collect(), true),
        pp_family("T(x,Y,z) for x != 0", "a,e", a && e, &|x, z| (0..q).map(|y| t.get(x, y, z)).collect(), true),
        pp_family("T(x,y,Z)", "d", d, &|x, y| (0..q).map(|z| t.get(x, y, z)).collect(), false),
    ];

    let kappa_ok = a && (c || e);
    let mut kappa = SliceFamily {
        family: "T(X,Y,z) - z".into(),
        needs: "a,(c|e)".into(),
        applicable: kappa_ok,
        slices: 0,
        passing: 0,
        failures: Vec::new(),
    };
    if kappa_ok {
        let f = t.field();
        for z in 0..q {
            kappa.slices += 1;
            let mut values = Vec::with_capacity(qs * qs);
            for x in 0..q {
                for y in 0..q {
                    values.push(f.sub(t.get(x, y, z), z));
                }
            }
            let prof = fiber_profile_of_values(q, 2, &values);
            let good = prof
                .counts
                .iter()
                .all(|(&v, &n)| n == if v == 0 { 2 * q as u64 - 1 } else { q as u64 - 1 });
            if good {
                kappa.passing += 1;
            } else {
                kappa.failures.push(vec![z]);
            }
        }
    }
    families.push(kappa);

    let full_ok = d || (a && (c || e));
    let mut full = SliceFamily {
        family: "T(X,Y,Z)".into(),
        needs: "d|a,(c|e)".into(),
        applicable: full_ok,
        slices: 0,
        passing: 0,
        failures: Vec::new(),
    };
    if full_ok {
        full.slices = 1;
        let prof = fiber_profile_of_values(q, 3, t.values());
        if prof.class == FiberClass::Pp {
            full.passing = 1;
        } else {
            full.failures.push(vec![]);
        }
    }
    families.push(full);

    if families.iter().all(|f| !f.applicable) {
        return Err(AnalysisError::AssumptionsUnmet(
            "no slice statement applies: (a), (c), (d), (e) all needed somewhere".into(),
        ));
    }
    if let Some(bad) = families.iter().find(|f| !f.failures.is_empty()) {
        return Err(AnalysisError::InternalContradiction {
            which: bad.family.clone(),
            witness: bad.failures[0].clone(),
        });
    }
    Ok(SliceReport {
        q,
        properties: props,
        families,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SumCheck {
    pub index: u32,
    pub sum: u32,
    pub expected: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub q: u32,
    pub degrees: Vec<u32>,
    /// `None` when skipped (at `q = 2`).
    pub degree_bound_holds: Option<bool>,
    pub skipped_q2: bool,
    pub m1_degrees: Vec<u32>,
    pub m2_degrees: Vec<u32>,
    /// Exponents of `M1` at most `q-3` and of `M2` at most `q-2`.
    pub form_bounds_hold: Option<bool>,
    /// `Σ_i c_ij` for `j = 1..q-1`.
    pub row_sums: Vec<SumCheck>,
    /// `Σ_i c_ji` for `j = 1..q-1`.
    pub column_sums: Vec<SumCheck>,
    pub sums_hold: bool,
    /// `Σ_i b_ijk = Σ_i b_jik` for `0 <= j <= q-3`, `1 <= k <= q-3`; only
    /// evaluated for linear tables.
    pub linear_sums_hold: Option<bool>,
    pub linear_sums_witness: Option<[u32; 2]>,
}

pub fn degree_and_sum_report(dec: &Decomposition) -> DegreeReport {
    let f = dec.field();
    let q = f.q();
    let t = recompose(dec);
    let degrees = t.degrees();
    let skipped_q2 = q == 2;
    let degree_bound_holds = (!skipped_q2).then(|| degrees.iter().all(|&d| d <= q - 2));
    let m1_degrees = dec.m1.degrees();
    let m2_degrees = dec.m2.degrees();
    let form_bounds_hold = (!skipped_q2).then(|| {
        dec.m1.terms().all(|(e, _)| e.iter().all(|&i| i + 3 <= q))
            && dec.m2.terms().all(|(e, _)| e.iter().all(|&i| i + 2 <= q))
    });
    let mut row_sums = Vec::new();
    let mut column_sums = Vec::new();
    for j in 1..q {
        let expected = u32::from(j == 1);
        let mut row = 0;
        let mut col = 0;
        for i in 1..q {
            row = f.add(row, dec.c(i, j));
            col = f.add(col, dec.c(j, i));
        }
        row_sums.push(SumCheck {
            index: j,
            sum: row,
            expected,
        });
        column_sums.push(SumCheck {
            index: j,
            sum: col,
            expected,
        });
    }
    let sums_hold = row_sums.iter().chain(&column_sums).all(|s| s.sum == s.expected);

    let table = TernaryTable::from_poly(&t).expect("arity 3");
    let linear = check_ptr_properties(&table).ptr && linearity_witness(&table).is_none();
    let (linear_sums_hold, linear_sums_witness) = if linear && q >= 3 {
        let mut witness = None;
        'outer: for j in 0..=q - 3 {
            for k in 1..=q - 3 {
                let (mut s1, mut s2) = (0, 0);
                for i in 0..q {
                    s1 = f.add(s1, dec.b(i, j, k));
                    s2 = f.add(s2, dec.b(j, i, k));
                }
                if s1 != s2 {
                    witness = Some([j, k]);
                    break 'outer;
                }
            }
        }
        (Some(witness.is_none()), witness)
    } else {
        (None, None)
    };

    DegreeReport {
        q,
        degrees,
        degree_bound_holds,
        skipped_q2,
        m1_degrees,
        m2_degrees,
        form_bounds_hold,
        row_sums,
        column_sums,
        sums_hold,
        linear_sums_hold,
        linear_sums_witness,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearityIdentity {
    pub holds: bool,
    pub witness: Option<[u32; 3]>,
    /// Agreement with the direct table check `T(x,y,z) = (x ⊙ y) ⊕ z`.
    pub table_linear: bool,
}

/// Checks `xy·M1(x,y,z) = M2(x,y)·M1(1, M2(x,y), z)` for all `x, y` and
/// `z != 0`, and compares with the table-level linearity check.
pub fn linearity_identity_check(dec: &Decomposition) -> Result<LinearityIdentity, AnalysisError> {
    let f = dec.field();
    let q = f.q();
    let qs = q as usize;
    let m1 = dec.m1.evaluate_all();
    let m2 = dec.m2.evaluate_all();
    let m1_at = |x: u32, y: u32, z: u32| m1[(x as usize * qs + y as usize) * qs + z as usize];
    let mut witness = None;
    'outer: for x in 0..q {
        for y in 0..q {
            let w = m2[x as usize * qs + y as usize];
            for z in 1..q {
                let lhs = f.mul(f.mul(x, y), m1_at(x, y, z));
                let rhs = f.mul(w, m1_at(1, w, z));
                if lhs != rhs {
                    witness = Some([x, y, z]);
                    break 'outer;
                }
            }
        }
    }
    let table = TernaryTable::from_poly(&recompose(dec)).expect("arity 3");
    let table_linear = linearity_witness(&table).is_none();
    let holds = witness.is_none();
    // The equivalence relies on (a) and (b); only then must the two agree.
    let props = check_ptr_properties(&table);
    if props.a.holds && props.b.holds && holds != table_linear {
        return Err(AnalysisError::InternalContradiction {
            which: "linearity identity vs table linearity".into(),
            witness: witness.map(|w| w.to_vec()).unwrap_or_default(),
        });
    }
    Ok(LinearityIdentity {
        holds,
        witness,
        table_linear,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagonalImage {
    pub a: u32,
    pub image_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SabReport {
    pub q: u32,
    /// `(c1, c0)` of `β² + c1·β + c0`.
    pub beta_polynomial: (u32, u32),
    pub pairs: usize,
    pub bijections: usize,
    pub failures: Vec<[u32; 2]>,
    /// Image sizes for `a = b`, where nothing is claimed.
    pub diagonal: Vec<DiagonalImage>,
}

/// `S_{a,b}(y + βz) = T(a,y,z) + β·T(b,y,z)` on `F_{q²}`, for all pairs.
pub fn s_ab_check(t: &TernaryTable, ext: &QuadraticExtension) -> Result<SabReport, AnalysisError> {
    let q = t.q();
    if ext.base() != t.field() {
        return Err(AnalysisError::AssumptionsUnmet("extension is over a different field".into()));
    }
    if !crate::properties::check_e(t).holds {
        return Err(AnalysisError::AssumptionsUnmet("property (e) fails".into()));
    }
    let n = ext.order() as usize;
    let image_size = |a: u32, b: u32| {
        let mut seen = vec![false; n];
        let mut size = 0;
        for v in 0..n as u64 {
            let (y, z) = ext.decode(v);
            let w = ext.encode(t.get(a, y, z), t.get(b, y, z)) as usize;
            if !std::mem::replace(&mut seen[w], true) {
                size += 1;
            }
        }
        size
    };
    let rows = par::map_range(0, q as usize, |a| {
        (0..q)
            .filter(|&b| b != a as u32)
            .filter(|&b| image_size(a as u32, b) != n)
            .map(|b| [a as u32, b])
            .collect::<Vec<_>>()
    });
    let failures: Vec<[u32; 2]> = rows.concat();
    let pairs = (q * (q - 1)) as usize;
    let diagonal = (0..q)
        .map(|a| DiagonalImage {
            a,
            image_size: image_size(a, a),
        })
        .collect();
    let report = SabReport {
        q,
        beta_polynomial: ext.defining_coefficients(),
        pairs,
        bijections: pairs - failures.len(),
        failures,
        diagonal,
    };
    if let Some(w) = report.failures.first() {
        return Err(AnalysisError::InternalContradiction {
            which: "S_ab bijection".into(),
            witness: w.to_vec(),
        });
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompleteMappingEntry {
    pub a: u32,
    pub f_is_pp: bool,
    pub f_plus_x_is_pp: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompleteMappingReport {
    pub q: u32,
    pub entries: Vec<CompleteMappingEntry>,
    pub all_complete: bool,
}

/// `f_a(X) = M2(X,a) - X` for every `a ∉ {0,1}`; requires `⊕` to be the
/// field addition, which is checked on the recomposed table.
pub fn complete_mapping_check(dec: &Decomposition) -> Result<CompleteMappingReport, AnalysisError> {
    let f = dec.field();
    let q = f.q();
    let table = TernaryTable::from_poly(&recompose(dec)).expect("arity 3");
    for x in 0..q {
        for y in 0..q {
            if table.get(1, x, y) != f.add(x, y) {
                return Err(AnalysisError::AssumptionsUnmet(format!(
                    "addition is not the field addition at ({x}, {y})"
                )));
            }
        }
    }
    let m2 = dec.m2.evaluate_all();
    let entries: Vec<CompleteMappingEntry> = (2..q)
        .map(|a| {
            let g = |x: u32| m2[(x * q + a) as usize];
            CompleteMappingEntry {
                a,
                f_is_pp: is_permutation((0..q).map(|x| f.sub(g(x), x)), q as usize),
                f_plus_x_is_pp: is_permutation((0..q).map(g), q as usize),
            }
        })
        .collect();
    let all_complete = entries.iter().all(|e| e.f_is_pp && e.f_plus_x_is_pp);
    Ok(CompleteMappingReport {
        q,
        entries,
        all_complete,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormFlags {
    /// `M1 = 0`, so `T = M2(X,Y) + Z`.
    pub basicform: bool,
    /// Basic form with every `X` exponent of `M2` a power of `p`.
    pub lbiv: bool,
    /// Basic form with every `Y` exponent of `M2` a power of `p`.
    pub lbivd: bool,
    pub lbv: bool,
    /// `M2 = XY` and every monomial of `M1` is `(XY)^i Z^j` with
    /// `i, j <= q-3`.
    pub lbi2eq: bool,
    /// `M2 = XY` and every monomial of `M1` is `(XY)^i Z^{q-2-i}` with
    /// `i <= q-3`. The `i = 0` term `Z^{q-2}` lies outside the `lbi2eq` range.
    pub lbi4form: bool,
    /// As `lbi2eq` with `⊕` associative.
    pub lbii2: bool,
    /// `M2(x, M2(y,z)) = M2(M2(x,y), z)` for all arguments.
    pub additive_associativity_identity: bool,
    /// `⊕` is associative.
    pub multiplicative_associativity_identity: bool,
}

/// Shape detectors; each flag is a necessary condition, not a type.
pub fn form_classify(dec: &Decomposition) -> FormFlags {
    let f = dec.field();
    let q = f.q();
    let basicform = dec.m1.is_zero();
    let x_linear = dec.m2.terms().all(|(e, _)| f.is_power_of_p(e[0]));
    let y_linear = dec.m2.terms().all(|(e, _)| f.is_power_of_p(e[1]));
    let m2_is_xy = dec.m2.num_terms() == 1 && dec.c(1, 1) == 1;
    let lbi2eq = m2_is_xy && dec.m1.terms().all(|(e, _)| e[0] == e[1] && e[0] + 3 <= q && e[2] + 3 <= q);
    let lbi4form = m2_is_xy && dec.m1.terms().all(|(e, _)| e[0] == e[1] && e[0] + 3 <= q && e[0] + e[2] + 2 == q);

    let m2 = dec.m2.evaluate_all();
    let mul = |x: u32, y: u32| m2[(x * q + y) as usize];
    let additive_associativity_identity = par::all_range(0, q as usize, |x| {
        let x = x as u32;
        (0..q).all(|y| (0..q).all(|z| mul(x, mul(y, z)) == mul(mul(x, y), z)))
    });
    let table = TernaryTable::from_poly(&recompose(dec)).expect("arity 3");
    let add = |x: u32, y: u32| table.get(1, x, y);
    let multiplicative_associativity_identity = par::all_range(0, q as usize, |x| {
        let x = x as u32;
        (0..q).all(|y| (0..q).all(|z| add(x, add(y, z)) == add(add(x, y), z)))
    });

    FormFlags {
        basicform,
        lbiv: basicform && x_linear,
        lbivd: basicform && y_linear,
        lbv: basicform && x_linear && y_linear,
        lbi2eq,
        lbi4form,
        lbii2: lbi2eq && multiplicative_associativity_identity,
        additive_associativity_identity,
        multiplicative_associativity_identity,
    }
}

/// A set `D ⊂ F_q^*` of size `(q-1)/2` in which every nonzero element is a
/// difference of two members in exactly `(q-3)/4` ways.
pub fn is_skew_hadamard_difference_set(field: &FiniteField, d: &[u32]) -> bool {
    let q = field.q() as usize;
    if q % 4 != 3 || d.len() != (q - 1) / 2 || d.iter().any(|&x| x == 0 || x as usize >= q) {
        return false;
    }
    let mut ways = vec![0usize; q];
    for &a in d {
        for &b in d {
            if a != b {
                ways[field.sub(a, b) as usize] += 1;
            }
        }
    }
    ways[1..].iter().all(|&w| w == (q - 3) / 4)
}

/// `M(X,Y) = f(X) - f(Y)` for a two-to-one map `f` from `F_q^*` onto a
/// skew Hadamard difference set, with `f(0) = 0`, and its fiber profile.
pub fn kappa_from_two_to_one(field: &FiniteField, f: &[u32]) -> Result<(ReducedPoly, FiberProfile), AnalysisError> {
    let q = field.q();
    if q.is_multiple_of(2) {
        return Err(AnalysisError::NotTwoToOne("q must be odd".into()));
    }
    if f.len() != q as usize {
        return Err(AnalysisError::NotTwoToOne(format!("expected {q} values")));
    }
    if f[0] != 0 {
        return Err(AnalysisError::NotTwoToOne("f(0) must be 0".into()));
    }
    let mut pre = vec![0u32; q as usize];
    for (x, &v) in f.iter().enumerate().skip(1) {
        if v == 0 || v >= q {
            return Err(AnalysisError::NotTwoToOne(format!("f({x}) = {v} is not in F_q^*")));
        }
        pre[v as usize] += 1;
    }
    if let Some(v) = (1..q as usize).find(|&v| pre[v] != 0 && pre[v] != 2) {
        return Err(AnalysisError::NotTwoToOne(format!("{v} has {} preimages", pre[v])));
    }
    let image: Vec<u32> = (1..q).filter(|&v| pre[v as usize] == 2).collect();
    if !is_skew_hadamard_difference_set(field, &image) {
        return Err(AnalysisError::AssumptionsUnmet(
            "image is not a skew Hadamard difference set".into(),
        ));
    }
    let mut values = Vec::with_capacity((q * q) as usize);
    for x in 0..q as usize {
        for y in 0..q as usize {
            values.push(field.sub(f[x], f[y]));
        }
    }
    let poly = interpolate(field, 2, &values).expect("complete table");
    let prof = fiber_profile(&poly);
    if prof.class != FiberClass::Kappa(q as u64 - 1) {
        return Err(AnalysisError::InternalContradiction {
            which: "difference of a two-to-one map".into(),
            witness: vec![],
        });
    }
    Ok((poly, prof))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn xy_plus_z(f: &FiniteField) -> ReducedPoly {
        ReducedPoly::from_terms(f, 3, [(vec![1, 1, 0], 1), (vec![0, 0, 1], 1)])
    }

    #[test]
    fn decompose_examples() {
        let f = make_field(5, 1).unwrap();
        let d = decompose(&xy_plus_z(&f)).unwrap();
        assert!(d.m1.is_zero());
        assert_eq!(d.m2, ReducedPoly::from_terms(&f, 2, [(vec![1, 1], 1)]));

        // XY + X²Y² + XYZ(X + 1) + Z
        let t = ReducedPoly::from_terms(
            &f,
            3,
            [
                (vec![1, 1, 0], 1),
                (vec![2, 2, 0], 1),
                (vec![2, 1, 1], 1),
                (vec![1, 1, 1], 1),
                (vec![0, 0, 1], 1),
            ],
        );
        let d = decompose(&t).unwrap();
        assert_eq!(d.m1, ReducedPoly::from_terms(&f, 3, [(vec![1, 0, 0], 1), (vec![0, 0, 0], 1)]));
        assert_eq!(d.m2, ReducedPoly::from_terms(&f, 2, [(vec![1, 1], 1), (vec![2, 2], 1)]));
        assert_eq!(recompose(&d), t);

        let bad = ReducedPoly::from_terms(&f, 3, [(vec![1, 0, 0], 1), (vec![0, 0, 1], 1)]);
        assert_eq!(decompose(&bad), Err(AnalysisError::NotPropertyAForm(vec![1, 0, 0])));
    }

    #[test]
    fn fiber_examples() {
        let f3 = make_field(3, 1).unwrap();
        let xy = ReducedPoly::from_terms(&f3, 2, [(vec![1, 1], 1)]);
        let p = fiber_profile(&xy);
        assert_eq!(p.counts, BTreeMap::from([(0, 5), (1, 2), (2, 2)]));
        assert_eq!(p.class, FiberClass::Kappa(2));

        let f7 = make_field(7, 1).unwrap();
        let x = ReducedPoly::from_terms(&f7, 1, [(vec![1], 1)]);
        assert_eq!(fiber_profile(&x).class, FiberClass::Pp);

        let f4 = make_field(2, 2).unwrap();
        let p = fiber_profile(&xy_plus_z(&f4));
        assert_eq!(p.class, FiberClass::Pp);
        assert!(p.counts.values().all(|&c| c == 16));
    }

    #[test]
    fn slice_theorems_on_field_tables() {
        for q in [2u64, 3, 5] {
            let f = crate::field::field_for_order(q).unwrap();
            let r = verify_slice_theorems(&TernaryTable::linear_field(&f)).unwrap();
            assert!(r.families.iter().all(|f| f.applicable && f.failures.is_empty()));
        }
        let f3 = make_field(3, 1).unwrap();
        let zero = TernaryTable::from_fn(&f3, |_, _, _| 0);
        assert!(matches!(verify_slice_theorems(&zero), Err(AnalysisError::AssumptionsUnmet(_))));
    }

    #[test]
    fn degree_report_examples() {
        let f5 = make_field(5, 1).unwrap();
        let r = degree_and_sum_report(&decompose(&xy_plus_z(&f5)).unwrap());
        assert_eq!(r.degrees, vec![1, 1, 1]);
        assert_eq!(r.degree_bound_holds, Some(true));
        assert!(r.sums_hold);
        assert_eq!(r.linear_sums_hold, Some(true));

        let f2 = make_field(2, 1).unwrap();
        let r = degree_and_sum_report(&decompose(&xy_plus_z(&f2)).unwrap());
        assert!(r.skipped_q2);
        assert_eq!(r.degree_bound_holds, None);
    }

    #[test]
    fn sab_on_field_table() {
        let f = make_field(3, 1).unwrap();
        let ext = QuadraticExtension::new(&f);
        let r = s_ab_check(&TernaryTable::linear_field(&f), &ext).unwrap();
        assert_eq!(r.bijections, 6);
        // a = b collapses onto the diagonal {w + βw}.
        assert!(r.diagonal.iter().all(|d| d.image_size == 3));
    }

    #[test]
    fn complete_mapping_of_xy() {
        let f = make_field(7, 1).unwrap();
        let r = complete_mapping_check(&decompose(&xy_plus_z(&f)).unwrap()).unwrap();
        assert!(r.all_complete);
        assert_eq!(r.entries.len(), 5);
        // f_1 = 0 is excluded for a reason.
        let m2 = ReducedPoly::from_terms(&f, 2, [(vec![1, 1], 1)]);
        let f1: Vec<u32> = (0..7).map(|x| f.sub(m2.evaluate(&[x, 1]).unwrap(), x)).collect();
        assert!(f1.iter().all(|&v| v == 0));
    }

    #[test]
    fn form_flags_on_xy_plus_z() {
        let f = make_field(3, 2).unwrap();
        let flags = form_classify(&decompose(&xy_plus_z(&f)).unwrap());
        assert!(flags.basicform && flags.lbiv && flags.lbivd && flags.lbv && flags.lbi2eq);
        assert!(flags.additive_associativity_identity && flags.multiplicative_associativity_identity);
        // M1 = 0 trivially has the (XY)^i Z^{q-2-i} shape too.
        assert!(flags.lbi4form);
    }

    #[test]
    fn kappa_from_squares() {
        for q in [7u64, 11] {
            let f = crate::field::field_for_order(q).unwrap();
            let sq: Vec<u32> = f.elements().map(|x| f.mul(x, x)).collect();
            let (_, prof) = kappa_from_two_to_one(&f, &sq).unwrap();
            assert_eq!(prof.class, FiberClass::Kappa(q - 1));
        }
        let f = make_field(7, 1).unwrap();
        let id: Vec<u32> = f.elements().collect();
        assert!(matches!(kappa_from_two_to_one(&f, &id), Err(AnalysisError::NotTwoToOne(_))));
        // Two-to-one onto {1, 2, 3}, which is not a difference set.
        let g = [0, 1, 1, 2, 2, 3, 3];
        assert!(matches!(kappa_from_two_to_one(&f, &g), Err(AnalysisError::AssumptionsUnmet(_))));
        let f9 = make_field(3, 2).unwrap();
        let sq: Vec<u32> = f9.elements().map(|x| f9.mul(x, x)).collect();
        assert!(kappa_from_two_to_one(&f9, &sq).is_err());
    }
}
