//! Coordinatising a projective plane from a quadrangle.
//!
//! Given a quadrangle `O, X, Y, I` the plane's points receive labels
//! `(x, y)`, `(m)` and `(∞)`, its lines `[m, k]`, `[c]` and `[∞]`:
//!
//! - `O = (0,0)`, `X = (0)`, `Y = (∞)`, `I = (1,1)`, `[∞] = XY`
//! - `(0,1) = XI ∩ OY` and `(1,0) = YI ∩ OX`
//! - `J = (1) = (1,0)(0,1) ∩ XY`
//! - the other points of `OY` get the remaining labels (the vertical
//!   labelling), then `(a,0) = (0,a)J ∩ OX`
//! - `(m) = (0,m)(1,0) ∩ XY` and `(a,b) = (a,0)Y ∩ (0,b)X`
//! - `[c] = (c,0)Y` and `[m,k] = (m)(0,k)`
//!
//! and `T(m,x,y) = k` exactly when `(x,y)` lies on `[m,k]`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::collineation::{central_collineation, group_at, CollineationMap};
use crate::field::{field_for_order, FiniteField};
use crate::par;
use crate::plane::IncidencePlane;
use crate::properties::{check_ptr_properties, loop_analysis, LoopTable};
use crate::ternary::TernaryTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoordError {
    #[error("points {0:?} do not form a quadrangle")]
    NotQuadrangle([usize; 4]),
    #[error("plane order {0} is not a prime power")]
    OrderNotPrimePower(u32),
    #[error("invalid vertical labelling: {0}")]
    LabellingInvalid(String),
    #[error("plane is not ({center}, {axis})-transitive")]
    NotTransitive { center: usize, axis: usize },
    #[error("elation group is not elementary abelian")]
    GroupNotElementaryAbelian,
    #[error("homology group is not cyclic")]
    GroupNotCyclic,
    #[error("invalid Fano witness: {0}")]
    InvalidWitness(String),
    #[error("label {0} is not a nonzero element")]
    InvalidLabel(u32),
    #[error("the coordinatising quadrangle is not inside the subplane")]
    QuadrangleNotInSubplane,
    #[error("not a subplane: {0}")]
    InvalidSubplane(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PointLabel {
    Affine(u32, u32),
    Slope(u32),
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum LineLabel {
    Line(u32, u32),
    Vertical(u32),
    Infinity,
}

impl fmt::Display for PointLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointLabel::Affine(x, y) => write!(f, "({x},{y})"),
            PointLabel::Slope(m) => write!(f, "({m})"),
            PointLabel::Infinity => write!(f, "(inf)"),
        }
    }
}

impl fmt::Display for LineLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineLabel::Line(m, k) => write!(f, "[{m},{k}]"),
            LineLabel::Vertical(c) => write!(f, "[{c}]"),
            LineLabel::Infinity => write!(f, "[inf]"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Anchors {
    pub o: usize,
    pub x: usize,
    pub y: usize,
    pub i: usize,
    pub j: usize,
    pub zero_one: usize,
    pub one_zero: usize,
}

/// How the points of `OY` other than `O`, `(0,1)` and `Y` are labelled.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum VerticalLabelling {
    /// Labels `2, 3, ...` in increasing point-index order.
    #[default]
    Default,
    /// Explicit label -> point assignment for every label `>= 2`.
    Pinned(BTreeMap<u32, usize>),
}

pub struct Coordinatisation<'p> {
    plane: &'p IncidencePlane,
    field: FiniteField,
    anchors: Anchors,
    point_labels: Vec<PointLabel>,
    line_labels: Vec<LineLabel>,
    /// point of `(x,y)` at `x q + y`
    affine: Vec<usize>,
    /// point of `(m)`, with `(∞)` last
    slopes: Vec<usize>,
    /// line `[c]`
    verticals: Vec<usize>,
    /// line `[m,k]` at `m q + k`
    sloped: Vec<usize>,
    line_inf: usize,
}

impl fmt::Debug for Coordinatisation<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Coordinatisation")
            .field("field", &self.field)
            .field("anchors", &self.anchors)
            .finish()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CoordinatisationDump {
    pub anchors: Anchors,
    pub points: BTreeMap<String, usize>,
    pub lines: BTreeMap<String, usize>,
}

impl<'p> Coordinatisation<'p> {
    pub fn plane(&self) -> &'p IncidencePlane {
        self.plane
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn anchors(&self) -> Anchors {
        self.anchors
    }

    pub fn quadrangle(&self) -> [usize; 4] {
        let a = self.anchors;
        [a.o, a.x, a.y, a.i]
    }

    pub fn point_label(&self, p: usize) -> PointLabel {
        self.point_labels[p]
    }

    pub fn line_label(&self, l: usize) -> LineLabel {
        self.line_labels[l]
    }

    pub fn point(&self, label: PointLabel) -> usize {
        let q = self.field.q() as usize;
        match label {
            PointLabel::Affine(x, y) => self.affine[x as usize * q + y as usize],
            PointLabel::Slope(m) => self.slopes[m as usize],
            PointLabel::Infinity => self.slopes[q],
        }
    }

    pub fn line(&self, label: LineLabel) -> usize {
        let q = self.field.q() as usize;
        match label {
            LineLabel::Line(m, k) => self.sloped[m as usize * q + k as usize],
            LineLabel::Vertical(c) => self.verticals[c as usize],
            LineLabel::Infinity => self.line_inf,
        }
    }

    /// Label `k` of a point `(0,k)` of `OY`.
    fn vertical_label(&self, p: usize) -> u32 {
        match self.point_labels[p] {
            PointLabel::Affine(0, k) => k,
            other => panic!("{other} is not on [0]"),
        }
    }

    /// The vertical labelling in pinned form.
    pub fn vertical_labelling(&self) -> BTreeMap<u32, usize> {
        (2..self.field.q())
            .map(|k| (k, self.point(PointLabel::Affine(0, k))))
            .collect()
    }

    pub fn dump(&self) -> CoordinatisationDump {
        CoordinatisationDump {
            anchors: self.anchors,
            points: self
                .point_labels
                .iter()
                .enumerate()
                .map(|(p, l)| (l.to_string(), p))
                .collect(),
            lines: self
                .line_labels
                .iter()
                .enumerate()
                .map(|(i, l)| (l.to_string(), i))
                .collect(),
        }
    }

    /// Checks the labelling against the plane's incidences.
    pub fn check_consistency(&self, t: &TernaryTable) -> bool {
        let q = self.field.q();
        let pl = self.plane;
        for m in 0..q {
            for x in 0..q {
                for y in 0..q {
                    let k = t.get(m, x, y);
                    if !pl.incident(self.point(PointLabel::Affine(x, y)), self.line(LineLabel::Line(m, k))) {
                        return false;
                    }
                }
            }
        }
        (0..q).all(|c| {
            (0..q).all(|y| pl.incident(self.point(PointLabel::Affine(c, y)), self.line(LineLabel::Vertical(c))))
                && pl.incident(self.point(PointLabel::Infinity), self.line(LineLabel::Vertical(c)))
                && pl.incident(self.point(PointLabel::Slope(c)), self.line_inf)
                && (0..q).all(|k| pl.incident(self.point(PointLabel::Slope(c)), self.line(LineLabel::Line(c, k))))
        }) && pl.incident(self.point(PointLabel::Infinity), self.line_inf)
    }
}

/// Coordinatises `plane` from the quadrangle `quad = [O, X, Y, I]`.
///
/// The returned table is checked against all five ternary-ring properties.
pub fn coordinatise<'p>(
    plane: &'p IncidencePlane,
    quad: [usize; 4],
    labelling: &VerticalLabelling,
) -> Result<(Coordinatisation<'p>, TernaryTable), CoordError> {
    let field = field_for_order(plane.order() as u64).map_err(|_| CoordError::OrderNotPrimePower(plane.order()))?;
    if !plane.is_quadrangle(quad) {
        return Err(CoordError::NotQuadrangle(quad));
    }
    let q = field.q() as usize;
    let [o, x, y, i] = quad;
    let line_inf = plane.join(x, y);
    let oy = plane.join(o, y);
    let ox = plane.join(o, x);
    let zero_one = plane.meet(plane.join(x, i), oy);
    let one_zero = plane.meet(plane.join(y, i), ox);
    let j = plane.meet(plane.join(one_zero, zero_one), line_inf);

    // Vertical line [0]: label -> point.
    let mut vertical = vec![usize::MAX; q];
    vertical[0] = o;
    vertical[1] = zero_one;
    let rest: Vec<usize> = plane
        .line_points(oy)
        .iter()
        .map(|&p| p as usize)
        .filter(|&p| p != o && p != zero_one && p != y)
        .collect();
    match labelling {
        VerticalLabelling::Default => {
            for (k, &p) in rest.iter().enumerate() {
                vertical[k + 2] = p;
            }
        }
        VerticalLabelling::Pinned(map) => {
            if map.len() != q - 2 {
                return Err(CoordError::LabellingInvalid(format!(
                    "expected {} labels, found {}",
                    q - 2,
                    map.len()
                )));
            }
            for (&k, &p) in map {
                if k < 2 || k as usize >= q {
                    return Err(CoordError::LabellingInvalid(format!("label {k} out of range")));
                }
                if !rest.contains(&p) {
                    return Err(CoordError::LabellingInvalid(format!(
                        "point {p} is not an unlabelled point of OY"
                    )));
                }
                if vertical.contains(&p) {
                    return Err(CoordError::LabellingInvalid(format!("point {p} labelled twice")));
                }
                vertical[k as usize] = p;
            }
        }
    }

    let horizontal: Vec<usize> = vertical
        .iter()
        .map(|&p| plane.meet(plane.join(p, j), ox))
        .collect();
    let mut slopes: Vec<usize> = vertical
        .iter()
        .map(|&p| plane.meet(plane.join(p, one_zero), line_inf))
        .collect();
    slopes.push(y);
    let verticals: Vec<usize> = horizontal.iter().map(|&p| plane.join(p, y)).collect();
    let horizontals: Vec<usize> = vertical.iter().map(|&p| plane.join(p, x)).collect();
    let mut affine = vec![0usize; q * q];
    for a in 0..q {
        for b in 0..q {
            affine[a * q + b] = plane.meet(verticals[a], horizontals[b]);
        }
    }
    let mut sloped = vec![0usize; q * q];
    for m in 0..q {
        for k in 0..q {
            sloped[m * q + k] = plane.join(slopes[m], vertical[k]);
        }
    }

    let np = plane.num_points();
    let mut point_labels = vec![PointLabel::Infinity; np];
    let mut assigned = vec![false; np];
    let mut assign = |p: usize, l: PointLabel| {
        assert!(!assigned[p], "point {p} labelled twice");
        assigned[p] = true;
        point_labels[p] = l;
    };
    for a in 0..q {
        for b in 0..q {
            assign(affine[a * q + b], PointLabel::Affine(a as u32, b as u32));
        }
        assign(slopes[a], PointLabel::Slope(a as u32));
    }
    assign(y, PointLabel::Infinity);
    let mut line_labels = vec![LineLabel::Infinity; np];
    for m in 0..q {
        for k in 0..q {
            line_labels[sloped[m * q + k]] = LineLabel::Line(m as u32, k as u32);
        }
        line_labels[verticals[m]] = LineLabel::Vertical(m as u32);
    }
    line_labels[line_inf] = LineLabel::Infinity;

    let mut label_of_vertical = vec![u32::MAX; np];
    for (k, &p) in vertical.iter().enumerate() {
        label_of_vertical[p] = k as u32;
    }
    let oy_line = oy;
    let rows = par::map_range(0, q, |m| {
        let mut row = Vec::with_capacity(q * q);
        for a in 0..q {
            for b in 0..q {
                let l = plane.join(slopes[m], affine[a * q + b]);
                row.push(label_of_vertical[plane.meet(l, oy_line)]);
            }
        }
        row
    });
    let t = TernaryTable::new(&field, rows.concat()).expect("labels are field elements");

    let coord = Coordinatisation {
        plane,
        field,
        anchors: Anchors {
            o,
            x,
            y,
            i,
            j,
            zero_one,
            one_zero,
        },
        point_labels,
        line_labels,
        affine,
        slopes,
        verticals,
        sloped,
        line_inf,
    };
    let report = check_ptr_properties(&t);
    assert!(report.ptr, "coordinatisation produced a table failing {:?}", report.first_failure());
    debug_assert!(coord.check_consistency(&t));
    Ok((coord, t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LoopOp {
    Add,
    Mul,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub construction: String,
    pub label: String,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerticalTrace {
    pub op: LoopOp,
    pub a: u32,
    pub b: u32,
    pub result: u32,
    pub steps: Vec<TraceStep>,
}

/// Rebuilds `a ⊕ b` or `a ⊙ b` geometrically on the line `OY`.
///
/// Addition: `(a,0) = (0,a)J ∩ OX`, `(a,b) = (a,0)Y ∩ (0,b)X`, then
/// `(0,k) = J(a,b) ∩ OY`. Multiplication: `(b,0) = (0,b)J ∩ OX`,
/// `(a) = (0,a)(1,0) ∩ XY`, then `(0,k) = (a)(b,0) ∩ OY`.
pub fn trace_vertical_action(
    coord: &Coordinatisation<'_>,
    t: &TernaryTable,
    op: LoopOp,
    a: u32,
    b: u32,
) -> Result<VerticalTrace, CoordError> {
    let q = coord.field.q();
    if a >= q || b >= q {
        return Err(CoordError::InvalidLabel(a.max(b)));
    }
    let pl = coord.plane;
    let an = coord.anchors;
    let oy = pl.join(an.o, an.y);
    let ox = pl.join(an.o, an.x);
    let xy = pl.join(an.x, an.y);
    let pa = coord.point(PointLabel::Affine(0, a));
    let pb = coord.point(PointLabel::Affine(0, b));
    let point_step = |what: &str, p: usize| TraceStep {
        construction: what.to_string(),
        label: coord.point_label(p).to_string(),
        index: p,
    };
    let line_step = |what: &str, l: usize| TraceStep {
        construction: what.to_string(),
        label: coord.line_label(l).to_string(),
        index: l,
    };
    let (k_point, steps, expected) = match op {
        LoopOp::Add => {
            let a0 = pl.meet(pl.join(pa, an.j), ox);
            let ab = pl.meet(pl.join(a0, an.y), pl.join(pb, an.x));
            let jab = pl.join(an.j, ab);
            let k = pl.meet(jab, oy);
            let steps = vec![
                point_step("(0,a)J meet OX", a0),
                point_step("(a,0)Y meet (0,b)X", ab),
                line_step("J(a,b)", jab),
                point_step("J(a,b) meet OY", k),
            ];
            (k, steps, t.get(1, a, b))
        }
        LoopOp::Mul => {
            let b0 = pl.meet(pl.join(pb, an.j), ox);
            let sa = pl.meet(pl.join(pa, an.one_zero), xy);
            let line = pl.join(sa, b0);
            let k = pl.meet(line, oy);
            let steps = vec![
                point_step("(0,b)J meet OX", b0),
                point_step("(0,a)(1,0) meet XY", sa),
                line_step("(a)(b,0)", line),
                point_step("(a)(b,0) meet OY", k),
            ];
            (k, steps, t.get(a, b, 0))
        }
    };
    let result = coord.vertical_label(k_point);
    assert_eq!(result, expected, "vertical action disagrees with the table");
    Ok(VerticalTrace {
        op,
        a,
        b,
        result,
        steps,
    })
}

/// Least `I` completing `O, X, Y` to a quadrangle.
pub fn least_fourth_point(plane: &IncidencePlane, o: usize, x: usize, y: usize) -> Result<usize, CoordError> {
    if o == x || o == y || x == y || plane.collinear(o, x, y) {
        return Err(CoordError::NotQuadrangle([o, x, y, usize::MAX]));
    }
    Ok((0..plane.num_points())
        .find(|&i| plane.is_quadrangle([o, x, y, i]))
        .expect("a triangle extends to a quadrangle"))
}

/// Coordinatisation whose addition is the field addition, built from the
/// elations with center `Y` and axis `XY`.
///
/// `I` is the least point completing the quadrangle. The elation `g₁`
/// sends `O` to `(0,1)`; each further generator `g_i` sends `O` to the least
/// point of `OY` outside the span of the earlier ones. The point
/// `g₁^{c₁}⋯g_e^{c_e}(O)` is labelled with the element whose base-`p`
/// digits are `c₁ … c_e`.
pub fn coordinatise_additive_optimal<'p>(
    plane: &'p IncidencePlane,
    o: usize,
    x: usize,
    y: usize,
) -> Result<(Coordinatisation<'p>, TernaryTable), CoordError> {
    let field = field_for_order(plane.order() as u64).map_err(|_| CoordError::OrderNotPrimePower(plane.order()))?;
    let i = least_fourth_point(plane, o, x, y)?;
    let axis = plane.join(x, y);
    let oy = plane.join(o, y);
    let group = group_at(plane, y, axis);
    if !group.transitive {
        return Err(CoordError::NotTransitive { center: y, axis });
    }
    if !group.elementary_abelian {
        return Err(CoordError::GroupNotElementaryAbelian);
    }
    let elation_to = |target: usize| {
        central_collineation(plane, y, axis, o, target)
            .expect("valid flag")
            .expect("group is transitive")
    };
    let zero_one = plane.meet(plane.join(x, i), oy);
    let p = field.p() as usize;

    // span[c] is the point labelled c so far; a new generator supplies the
    // next, more significant, base-p digit.
    let mut span: Vec<usize> = vec![o];
    let mut generator = elation_to(zero_one);
    for _ in 0..field.e() {
        let mut next = Vec::with_capacity(span.len() * p);
        let mut power = CollineationMap::identity(plane, y, axis);
        for _ in 0..p {
            next.extend(span.iter().map(|&s| power.apply(s)));
            power = generator.compose(&power);
        }
        span = next;
        if span.len() < field.q() as usize {
            let fresh = plane
                .line_points(oy)
                .iter()
                .map(|&pt| pt as usize)
                .find(|&pt| pt != y && !span.contains(&pt))
                .expect("span smaller than the line");
            generator = elation_to(fresh);
        }
    }
    let mut labels = BTreeMap::new();
    for (k, &pt) in span.iter().enumerate().skip(2) {
        labels.insert(k as u32, pt);
    }
    debug_assert_eq!(span[1], zero_one);
    let (coord, t) = coordinatise(plane, [o, x, y, i], &VerticalLabelling::Pinned(labels))?;
    for a in field.elements() {
        for b in field.elements() {
            assert_eq!(t.get(1, a, b), field.add(a, b), "additive labelling failed at ({a}, {b})");
        }
    }
    Ok((coord, t))
}

/// Coordinatisation whose multiplication is the field multiplication,
/// built from the homologies with center `X` and axis `OY`.
///
/// `I` is the least point completing the quadrangle. With `γ` the
/// homology of order `q - 1` sending `(1,0)` to the least possible point
/// and `θ` the field's primitive element, `γ^k(1,0)` becomes `(θ^k, 0)`;
/// the labels move to `OY` through `(0,a) = (a,0)J ∩ OY`.
pub fn coordinatise_multiplicative_optimal<'p>(
    plane: &'p IncidencePlane,
    o: usize,
    x: usize,
    y: usize,
) -> Result<(Coordinatisation<'p>, TernaryTable), CoordError> {
    let field = field_for_order(plane.order() as u64).map_err(|_| CoordError::OrderNotPrimePower(plane.order()))?;
    let i = least_fourth_point(plane, o, x, y)?;
    let axis = plane.join(o, y);
    let ox = plane.join(o, x);
    let xy = plane.join(x, y);
    let group = group_at(plane, x, axis);
    if !group.transitive {
        return Err(CoordError::NotTransitive { center: x, axis });
    }
    if !group.cyclic {
        return Err(CoordError::GroupNotCyclic);
    }
    let zero_one = plane.meet(plane.join(x, i), axis);
    let one_zero = plane.meet(plane.join(y, i), ox);
    let j = plane.meet(plane.join(one_zero, zero_one), xy);
    let q = field.q() as usize;
    let targets: Vec<usize> = plane
        .line_points(ox)
        .iter()
        .map(|&p| p as usize)
        .filter(|&p| p != o && p != x && p != one_zero)
        .collect();
    let gamma = targets
        .iter()
        .map(|&c| {
            central_collineation(plane, x, axis, one_zero, c)
                .expect("valid flag")
                .expect("group is transitive")
        })
        .find(|g| g.order() == q - 1)
        .or_else(|| (q == 2).then(|| CollineationMap::identity(plane, x, axis)))
        .ok_or(CoordError::GroupNotCyclic)?;
    let theta = field.primitive_element();
    let mut labels = BTreeMap::new();
    let mut pt = one_zero;
    let mut elem = 1u32;
    for _ in 0..q - 1 {
        if elem >= 2 {
            labels.insert(elem, plane.meet(plane.join(pt, j), axis));
        }
        pt = gamma.apply(pt);
        elem = field.mul(elem, theta);
    }
    let (coord, t) = coordinatise(plane, [o, x, y, i], &VerticalLabelling::Pinned(labels))?;
    for a in 1..field.q() {
        for b in 1..field.q() {
            assert_eq!(t.get(a, b, 0), field.mul(a, b), "multiplicative labelling failed at ({a}, {b})");
        }
    }
    Ok((coord, t))
}

/// Seven points and seven lines, three points per line and three lines per
/// point, found from a quadrangle whose diagonal points are collinear.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FanoWitness {
    /// The quadrangle `P1 < P2 < P3 < P4`.
    pub quadrangle: [usize; 4],
    /// `P1P2 ∩ P3P4`, `P1P3 ∩ P2P4`, `P1P4 ∩ P2P3`.
    pub diagonal: [usize; 3],
    /// Quadrangle points then diagonal points.
    pub points: [usize; 7],
    /// `P1P2, P1P3, P1P4, P2P3, P2P4, P3P4` and the diagonal line.
    pub lines: [usize; 7],
}

impl FanoWitness {
    /// Builds the witness for a quadrangle, if its diagonal points are
    /// collinear.
    pub fn from_quadrangle(plane: &IncidencePlane, quad: [usize; 4]) -> Option<FanoWitness> {
        let mut quad = quad;
        quad.sort_unstable();
        if !plane.is_quadrangle(quad) {
            return None;
        }
        let [a, b, c, d] = quad;
        let (ab, ac, ad) = (plane.join(a, b), plane.join(a, c), plane.join(a, d));
        let (bc, bd, cd) = (plane.join(b, c), plane.join(b, d), plane.join(c, d));
        let d1 = plane.meet(ab, cd);
        let d2 = plane.meet(ac, bd);
        let d3 = plane.meet(ad, bc);
        if !plane.collinear(d1, d2, d3) {
            return None;
        }
        Some(FanoWitness {
            quadrangle: quad,
            diagonal: [d1, d2, d3],
            points: [a, b, c, d, d1, d2, d3],
            lines: [ab, ac, ad, bc, bd, cd, plane.join(d1, d2)],
        })
    }

    pub fn verify(&self, plane: &IncidencePlane) -> bool {
        let n = plane.num_points();
        if self.points.iter().chain(&self.lines).any(|&v| v >= n) {
            return false;
        }
        let distinct = |xs: &[usize; 7]| {
            let mut v = xs.to_vec();
            v.sort_unstable();
            v.dedup();
            v.len() == 7
        };
        if !distinct(&self.points) || !distinct(&self.lines) {
            return false;
        }
        let on_line = |l: usize| self.points.iter().filter(|&&p| plane.incident(p, l)).count();
        let through = |p: usize| self.lines.iter().filter(|&&l| plane.incident(p, l)).count();
        self.lines.iter().all(|&l| on_line(l) == 3) && self.points.iter().all(|&p| through(p) == 3)
    }
}

/// The Fano witness of the lexicographically least quadrangle with
/// collinear diagonal points.
pub fn find_fano_direct(plane: &IncidencePlane) -> Option<FanoWitness> {
    let n = plane.num_points();
    par::find_map_first(0, n, |a| {
        for b in a + 1..n {
            for c in b + 1..n {
                if plane.collinear(a, b, c) {
                    continue;
                }
                for d in c + 1..n {
                    if plane.collinear(a, b, d) || plane.collinear(a, c, d) || plane.collinear(b, c, d) {
                        continue;
                    }
                    if let Some(w) = FanoWitness::from_quadrangle(plane, [a, b, c, d]) {
                        return Some(w);
                    }
                }
            }
        }
        None
    })
}

/// Coordinatises from a Fano witness so that `t ⊕ t = 0`.
///
/// The triangle is `O = P1`, `X = P2`, `Y = P3`; the diagonal points give
/// `(t,0)`, `(0,t)` and `J`, and `P4` is `(t,t)`. For `t = 1` the quadrangle
/// is `O, X, Y, P4`. Otherwise `(0,1)` is the least point of `OY` outside the
/// configuration, `(1,0) = (0,1)J ∩ OX`, `I = X(0,1) ∩ Y(1,0)`, and the label
/// `t` is pinned to the configuration's point of `OY`.
pub fn fano_to_involutive_coordinatisation<'p>(
    plane: &'p IncidencePlane,
    w: &FanoWitness,
    t: u32,
) -> Result<(Coordinatisation<'p>, TernaryTable), CoordError> {
    if !w.verify(plane) || FanoWitness::from_quadrangle(plane, w.quadrangle).as_ref() != Some(w) {
        return Err(CoordError::InvalidWitness("not a Fano configuration of this plane".into()));
    }
    let q = plane.order();
    if t == 0 || t >= q {
        return Err(CoordError::InvalidLabel(t));
    }
    let [o, x, y, tt] = w.quadrangle;
    let [t0, zero_t, j] = w.diagonal;
    let (coord, table) = if t == 1 {
        coordinatise(plane, [o, x, y, tt], &VerticalLabelling::Default)?
    } else {
        let oy = plane.join(o, y);
        let ox = plane.join(o, x);
        let zero_one = plane
            .line_points(oy)
            .iter()
            .map(|&p| p as usize)
            .find(|p| !w.points.contains(p))
            .expect("order > 2 leaves points of OY outside the configuration");
        let one_zero = plane.meet(plane.join(zero_one, j), ox);
        let i = plane.meet(plane.join(x, zero_one), plane.join(y, one_zero));
        let rest: Vec<usize> = plane
            .line_points(oy)
            .iter()
            .map(|&p| p as usize)
            .filter(|&p| p != o && p != y && p != zero_one && p != zero_t)
            .collect();
        let mut labels = BTreeMap::new();
        labels.insert(t, zero_t);
        let mut free = (2..q).filter(|&k| k != t);
        for p in rest {
            labels.insert(free.next().expect("enough labels"), p);
        }
        let (coord, table) = coordinatise(plane, [o, x, y, i], &VerticalLabelling::Pinned(labels))?;
        debug_assert_eq!(coord.point(PointLabel::Affine(t, 0)), t0);
        debug_assert_eq!(coord.point(PointLabel::Slope(1)), j);
        (coord, table)
    };
    assert_eq!(table.get(1, t, t), 0, "t ⊕ t is not 0");
    debug_assert_eq!(coord.point(PointLabel::Affine(t, t)), tt);
    Ok((coord, table))
}

/// The involutions of `⊕`, each with the Fano witness on the quadrangle
/// `O, X, Y, (t,t)`.
pub fn fano_from_involutions(coord: &Coordinatisation<'_>, t: &TernaryTable) -> Vec<(u32, FanoWitness)> {
    let q = t.q();
    (1..q)
        .filter(|&s| t.get(1, s, s) == 0)
        .map(|s| {
            let a = coord.anchors();
            let quad = [a.o, a.x, a.y, coord.point(PointLabel::Affine(s, s))];
            let w = FanoWitness::from_quadrangle(coord.plane(), quad)
                .expect("an involution gives collinear diagonal points");
            (s, w)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedPtr {
    /// Labels `x` with `(x, 0)` in the subplane, ascending.
    pub labels: Vec<u32>,
    pub order: u32,
    /// The restriction relabelled by position in `labels`.
    pub table: TernaryTable,
}

/// Restricts the coordinatisation to a subplane given by its point set.
pub fn restrict_to_subplane(
    coord: &Coordinatisation<'_>,
    t: &TernaryTable,
    sub_points: &[usize],
) -> Result<RestrictedPtr, CoordError> {
    let plane = coord.plane();
    let n = plane.num_points();
    let mut inside = vec![false; n];
    for &p in sub_points {
        if p >= n {
            return Err(CoordError::InvalidSubplane(format!("point {p} out of range")));
        }
        inside[p] = true;
    }
    if coord.quadrangle().iter().any(|&p| !inside[p]) {
        return Err(CoordError::QuadrangleNotInSubplane);
    }
    // Lines of the subplane: traces of lines meeting it in two or more points.
    let mut sub_lines: Vec<Vec<usize>> = (0..n)
        .map(|l| {
            plane
                .line_points(l)
                .iter()
                .map(|&p| p as usize)
                .filter(|&p| inside[p])
                .collect::<Vec<_>>()
        })
        .filter(|pts| pts.len() >= 2)
        .collect();
    sub_lines.sort();
    let m = sub_lines[0].len().saturating_sub(1);
    let mut index = vec![usize::MAX; n];
    let mut sorted: Vec<usize> = (0..n).filter(|&p| inside[p]).collect();
    sorted.sort_unstable();
    for (k, &p) in sorted.iter().enumerate() {
        index[p] = k;
    }
    let relabelled = sub_lines
        .iter()
        .map(|l| l.iter().map(|&p| index[p] as u32).collect())
        .collect();
    IncidencePlane::from_lines(m as u32, relabelled).map_err(|e| CoordError::InvalidSubplane(e.to_string()))?;

    let q = t.q();
    let labels: Vec<u32> = (0..q)
        .filter(|&x| inside[coord.point(PointLabel::Affine(x, 0))])
        .collect();
    assert_eq!(labels.len(), m, "subplane labels disagree with its order");
    let mut pos = vec![u32::MAX; q as usize];
    for (k, &x) in labels.iter().enumerate() {
        pos[x as usize] = k as u32;
    }
    let field = field_for_order(m as u64).map_err(|_| CoordError::OrderNotPrimePower(m as u32))?;
    let mut values = Vec::with_capacity(m * m * m);
    for &a in &labels {
        for &b in &labels {
            for &c in &labels {
                let v = pos[t.get(a, b, c) as usize];
                assert!(v != u32::MAX, "labels of the subplane are not closed under T");
                values.push(v);
            }
        }
    }
    let table = TernaryTable::new(&field, values).expect("positions are below m");
    assert!(check_ptr_properties(&table).ptr, "restricted table is not a ternary ring");
    Ok(RestrictedPtr {
        labels,
        order: m as u32,
        table,
    })
}

/// Loops of a coordinatisation's table, with `⊙` on nonzero labels.
pub fn loops_of(t: &TernaryTable) -> (LoopTable, LoopTable) {
    crate::properties::extract_loops_unchecked(t)
}

/// Whether `⊕` is an elementary abelian group and `⊙` a cyclic group.
pub fn field_like(t: &TernaryTable) -> bool {
    let (plus, times) = loops_of(t);
    loop_analysis(&plus).elementary_abelian && loop_analysis(&times).cyclic
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::{desarguesian_plane, pg_point_index};

    fn frame(q: u32) -> [usize; 4] {
        [
            pg_point_index(q, [1, 0, 0]),
            pg_point_index(q, [0, 1, 0]),
            pg_point_index(q, [0, 0, 1]),
            pg_point_index(q, [1, 1, 1]),
        ]
    }

    #[test]
    fn standard_frame_gives_field_table() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let f = field_for_order(q).unwrap();
            let plane = desarguesian_plane(&f);
            let (coord, t) = coordinatise(&plane, frame(q as u32), &VerticalLabelling::Default).unwrap();
            assert_eq!(t, TernaryTable::linear_field(&f), "q = {q}");
            assert!(coord.check_consistency(&t));
            assert_eq!(coord.dump().points.len(), plane.num_points());
        }
    }

    #[test]
    fn anchor_labels() {
        let f = field_for_order(5).unwrap();
        let plane = desarguesian_plane(&f);
        let (coord, _) = coordinatise(&plane, frame(5), &VerticalLabelling::Default).unwrap();
        let a = coord.anchors();
        assert_eq!(coord.point_label(a.o), PointLabel::Affine(0, 0));
        assert_eq!(coord.point_label(a.x), PointLabel::Slope(0));
        assert_eq!(coord.point_label(a.y), PointLabel::Infinity);
        assert_eq!(coord.point_label(a.i), PointLabel::Affine(1, 1));
        assert_eq!(coord.point_label(a.j), PointLabel::Slope(1));
        assert_eq!(coord.line_label(plane.join(a.x, a.y)), LineLabel::Infinity);
        assert_eq!(coord.line_label(plane.join(a.o, a.y)), LineLabel::Vertical(0));
        assert_eq!(coord.line_label(plane.join(a.o, a.x)), LineLabel::Line(0, 0));
        assert_eq!(PointLabel::Affine(2, 3).to_string(), "(2,3)");
        assert_eq!(LineLabel::Line(4, 1).to_string(), "[4,1]");
    }

    #[test]
    fn rejects_bad_input() {
        let f = field_for_order(3).unwrap();
        let plane = desarguesian_plane(&f);
        let [o, x, y, _] = frame(3);
        let on_ox = plane.line_points(plane.join(o, x)).iter().map(|&p| p as usize).find(|&p| p != o && p != x).unwrap();
        assert!(matches!(
            coordinatise(&plane, [o, x, y, on_ox], &VerticalLabelling::Default),
            Err(CoordError::NotQuadrangle(_))
        ));
        let bad = VerticalLabelling::Pinned(BTreeMap::from([(2, o)]));
        assert!(matches!(coordinatise(&plane, frame(3), &bad), Err(CoordError::LabellingInvalid(_))));
        let empty = VerticalLabelling::Pinned(BTreeMap::new());
        assert!(matches!(coordinatise(&plane, frame(3), &empty), Err(CoordError::LabellingInvalid(_))));
    }

    #[test]
    fn pinned_labelling_round_trips() {
        let f = field_for_order(7).unwrap();
        let plane = desarguesian_plane(&f);
        let quad = [3, 10, 40, 55];
        let quad = if plane.is_quadrangle(quad) { quad } else { plane.least_quadrangle() };
        let (coord, t) = coordinatise(&plane, quad, &VerticalLabelling::Default).unwrap();
        let pinned = VerticalLabelling::Pinned(coord.vertical_labelling());
        let (_, t2) = coordinatise(&plane, quad, &pinned).unwrap();
        assert_eq!(t, t2);
    }

    #[test]
    fn traces_agree_with_table() {
        let f = field_for_order(5).unwrap();
        let plane = desarguesian_plane(&f);
        let (coord, t) = coordinatise(&plane, plane.least_quadrangle(), &VerticalLabelling::Default).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                let s = trace_vertical_action(&coord, &t, LoopOp::Add, a, b).unwrap();
                assert_eq!(s.result, t.get(1, a, b));
                assert_eq!(s.steps.len(), 4);
                let m = trace_vertical_action(&coord, &t, LoopOp::Mul, a, b).unwrap();
                assert_eq!(m.result, t.get(a, b, 0));
            }
        }
        assert!(trace_vertical_action(&coord, &t, LoopOp::Add, 5, 0).is_err());
    }

    #[test]
    fn optimal_coordinatisations() {
        for q in [3u64, 4, 8, 9] {
            let f = field_for_order(q).unwrap();
            let plane = desarguesian_plane(&f);
            let [o, x, y, _] = plane.least_quadrangle();
            let (_, t) = coordinatise_additive_optimal(&plane, o, x, y).unwrap();
            assert!((0..f.q()).all(|a| (0..f.q()).all(|b| t.get(1, a, b) == f.add(a, b))));
            let (_, t) = coordinatise_multiplicative_optimal(&plane, o, x, y).unwrap();
            assert!((0..f.q()).all(|a| (0..f.q()).all(|b| t.get(a, b, 0) == f.mul(a, b))));
        }
    }

    #[test]
    fn fano_in_even_order_only() {
        let f3 = field_for_order(3).unwrap();
        assert!(find_fano_direct(&desarguesian_plane(&f3)).is_none());

        let f4 = field_for_order(4).unwrap();
        let plane = desarguesian_plane(&f4);
        let w = find_fano_direct(&plane).unwrap();
        assert!(w.verify(&plane));
        for t in 1..4 {
            let (_, table) = fano_to_involutive_coordinatisation(&plane, &w, t).unwrap();
            assert_eq!(table.get(1, t, t), 0);
        }
        assert!(fano_to_involutive_coordinatisation(&plane, &w, 0).is_err());

        let (coord, t) = coordinatise(&plane, plane.least_quadrangle(), &VerticalLabelling::Default).unwrap();
        let inv = fano_from_involutions(&coord, &t);
        assert_eq!(inv.iter().map(|(s, _)| *s).collect::<Vec<_>>(), vec![1, 2, 3]);
        assert!(inv.iter().all(|(_, w)| w.verify(&plane)));
    }

    #[test]
    fn baer_subplane_restriction() {
        let f4 = field_for_order(4).unwrap();
        let plane = desarguesian_plane(&f4);
        let (coord, t) = coordinatise(&plane, frame(4), &VerticalLabelling::Default).unwrap();
        let sub: Vec<usize> = crate::plane::pg_points(&f4)
            .iter()
            .filter(|v| v.iter().all(|&c| c < 2))
            .map(|&v| pg_point_index(4, v))
            .collect();
        assert_eq!(sub.len(), 7);
        let r = restrict_to_subplane(&coord, &t, &sub).unwrap();
        assert_eq!(r.labels, vec![0, 1]);
        assert_eq!(r.table, TernaryTable::linear_field(&field_for_order(2).unwrap()));

        let partial = &sub[..5];
        assert!(restrict_to_subplane(&coord, &t, partial).is_err());
    }

    #[test]
    fn field_tables_are_field_like() {
        let f = field_for_order(9).unwrap();
        assert!(field_like(&TernaryTable::linear_field(&f)));
    }
}
