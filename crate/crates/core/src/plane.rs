//! Finite projective planes as incidence structures.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{field_for_order, FiniteField};
use crate::par;
use crate::properties::{check_ptr_properties, loop_analysis, LoopTable};
use crate::ternary::TernaryTable;

/// Marker for "no such point/line" in the join and meet tables.
const NONE: u16 = u16::MAX;

/// Largest order whose tables fit the `u16` indices.
pub const MAX_PLANE_ORDER: u32 = 250;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AxiomKind {
    BadOrder,
    PointOutOfRange,
    DuplicatePoint,
    LineSize,
    NoCommonLine,
    SeveralCommonLines,
    LineCount,
    PointDegree,
    NoQuadrangle,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlaneError {
    #[error("plane axiom violated ({kind:?}) at {witness:?}")]
    AxiomViolation { kind: AxiomKind, witness: Vec<usize> },
    #[error("table is not a weak planar ternary ring: property ({property}) fails at {witness:?}")]
    NotWeakPTR { property: char, witness: Vec<u32> },
    #[error("not a quasifield: {axiom} fails at {witness:?}")]
    NotQuasifield { axiom: String, witness: Vec<u32> },
    #[error("parse error: {0}")]
    Parse(String),
}

fn violation(kind: AxiomKind, witness: Vec<usize>) -> PlaneError {
    PlaneError::AxiomViolation { kind, witness }
}

/// Serialized form of a plane.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneData {
    pub order: u32,
    pub points: usize,
    pub lines: Vec<Vec<u32>>,
}

impl PlaneData {
    /// JSON with one line of the plane per text line; keys in fixed order.
    pub fn to_json(&self) -> String {
        let mut s = format!(
            "{{\"order\": {}, \"points\": {}, \"lines\": [\n",
            self.order, self.points
        );
        for (i, line) in self.lines.iter().enumerate() {
            s.push('[');
            for (j, p) in line.iter().enumerate() {
                if j > 0 {
                    s.push(',');
                }
                write!(s, "{p}").unwrap();
            }
            s.push(']');
            if i + 1 < self.lines.len() {
                s.push(',');
            }
            s.push('\n');
        }
        s.push_str("]}\n");
        s
    }

    pub fn from_json(text: &str) -> Result<Self, PlaneError> {
        serde_json::from_str(text).map_err(|e| PlaneError::Parse(e.to_string()))
    }
}

/// Checks the projective-plane axioms and returns the order.
pub fn validate_plane(data: &PlaneData) -> Result<u32, PlaneError> {
    let n = data.order as usize;
    if n < 2 || n as u32 > MAX_PLANE_ORDER || data.points != n * n + n + 1 {
        return Err(violation(AxiomKind::BadOrder, vec![n, data.points]));
    }
    let np = data.points;
    let mut seen = vec![usize::MAX; np];
    for (l, line) in data.lines.iter().enumerate() {
        for &p in line {
            let p = p as usize;
            if p >= np {
                return Err(violation(AxiomKind::PointOutOfRange, vec![l, p]));
            }
            if seen[p] == l {
                return Err(violation(AxiomKind::DuplicatePoint, vec![l, p]));
            }
            seen[p] = l;
        }
        if line.len() != n + 1 {
            return Err(violation(AxiomKind::LineSize, vec![l, line.len()]));
        }
    }
    // First line through each pair, and whether a second exists.
    let mut first = vec![usize::MAX; np * np];
    let mut second: Option<(usize, usize, usize, usize)> = None;
    for (l, line) in data.lines.iter().enumerate() {
        for (i, &a) in line.iter().enumerate() {
            for &b in &line[i + 1..] {
                let (a, b) = (a.min(b) as usize, a.max(b) as usize);
                let slot = &mut first[a * np + b];
                if *slot == usize::MAX {
                    *slot = l;
                } else if second.is_none_or(|(x, y, _, _)| (a, b) < (x, y)) {
                    second = Some((a, b, *slot, l));
                }
            }
        }
    }
    for a in 0..np {
        for b in a + 1..np {
            if first[a * np + b] == usize::MAX {
                let several = second.filter(|&(x, y, _, _)| (x, y) < (a, b));
                if let Some((x, y, l1, l2)) = several {
                    return Err(violation(AxiomKind::SeveralCommonLines, vec![x, y, l1, l2]));
                }
                return Err(violation(AxiomKind::NoCommonLine, vec![a, b]));
            }
        }
    }
    if let Some((x, y, l1, l2)) = second {
        return Err(violation(AxiomKind::SeveralCommonLines, vec![x, y, l1, l2]));
    }
    if data.lines.len() != np {
        return Err(violation(AxiomKind::LineCount, vec![data.lines.len()]));
    }
    let mut degree = vec![0usize; np];
    for line in &data.lines {
        for &p in line {
            degree[p as usize] += 1;
        }
    }
    if let Some(p) = degree.iter().position(|&d| d != n + 1) {
        return Err(violation(AxiomKind::PointDegree, vec![p, degree[p]]));
    }
    // Two lines meeting in one point give a quadrangle once n >= 2, but the
    // check is cheap and keeps the contract explicit.
    let l0: Vec<usize> = data.lines[0].iter().map(|&p| p as usize).collect();
    let off = (0..np).find(|p| !l0.contains(p));
    let line_of = |a: usize, b: usize| first[a.min(b) * np + a.max(b)];
    let quad = off.and_then(|d| {
        let (a, b) = (l0[0], l0[1]);
        let (la, lb) = (line_of(a, d), line_of(b, d));
        (0..np).find(|&c| {
            c != a && c != b && c != d && !l0.contains(&c) && line_of(a, c) != la && line_of(b, c) != lb
        })
    });
    if quad.is_none() {
        return Err(violation(AxiomKind::NoQuadrangle, vec![]));
    }
    Ok(n as u32)
}

/// A validated projective plane with precomputed join and meet tables.
#[derive(Clone)]
pub struct IncidencePlane {
    order: u32,
    np: usize,
    lines: Vec<Vec<u16>>,
    point_lines: Vec<Vec<u16>>,
    /// `incidence[l * np + p]`
    incidence: Vec<u8>,
    join: Vec<u16>,
    meet: Vec<u16>,
}

impl std::fmt::Debug for IncidencePlane {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "IncidencePlane(order {})", self.order)
    }
}

impl PartialEq for IncidencePlane {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.lines == other.lines
    }
}

impl Eq for IncidencePlane {}

impl IncidencePlane {
    /// Validates `data` and builds the lookup tables. Lines keep the order
    /// given in `data`.
    pub fn new(data: &PlaneData) -> Result<Self, PlaneError> {
        let order = validate_plane(data)?;
        let np = data.points;
        let mut lines: Vec<Vec<u16>> = data
            .lines
            .iter()
            .map(|l| l.iter().map(|&p| p as u16).collect())
            .collect();
        for l in &mut lines {
            l.sort_unstable();
        }
        let mut point_lines = vec![Vec::with_capacity(order as usize + 1); np];
        let mut incidence = vec![0u8; np * np];
        for (li, l) in lines.iter().enumerate() {
            for &p in l {
                point_lines[p as usize].push(li as u16);
                incidence[li * np + p as usize] = 1;
            }
        }
        let mut join = vec![NONE; np * np];
        for (li, l) in lines.iter().enumerate() {
            for &a in l {
                for &b in l {
                    if a != b {
                        join[a as usize * np + b as usize] = li as u16;
                    }
                }
            }
        }
        let mut meet = vec![NONE; np * np];
        for (p, ls) in point_lines.iter().enumerate() {
            for &a in ls {
                for &b in ls {
                    if a != b {
                        meet[a as usize * np + b as usize] = p as u16;
                    }
                }
            }
        }
        Ok(IncidencePlane {
            order,
            np,
            lines,
            point_lines,
            incidence,
            join,
            meet,
        })
    }

    /// Builds a plane from point sets, sorting each line and then the list
    /// of lines lexicographically.
    pub fn from_lines(order: u32, lines: Vec<Vec<u32>>) -> Result<Self, PlaneError> {
        let n = order as usize;
        let mut lines = lines;
        for l in &mut lines {
            l.sort_unstable();
        }
        lines.sort();
        IncidencePlane::new(&PlaneData {
            order,
            points: n * n + n + 1,
            lines,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn num_points(&self) -> usize {
        self.np
    }

    pub fn num_lines(&self) -> usize {
        self.np
    }

    pub fn line_points(&self, l: usize) -> &[u16] {
        &self.lines[l]
    }

    pub fn point_lines(&self, p: usize) -> &[u16] {
        &self.point_lines[p]
    }

    #[inline]
    pub fn incident(&self, p: usize, l: usize) -> bool {
        self.incidence[l * self.np + p] != 0
    }

    /// The line through two distinct points.
    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        let l = self.join[a * self.np + b];
        debug_assert!(l != NONE, "join of a point with itself");
        l as usize
    }

    /// The point on two distinct lines.
    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        let p = self.meet[a * self.np + b];
        debug_assert!(p != NONE, "meet of a line with itself");
        p as usize
    }

    pub fn collinear(&self, a: usize, b: usize, c: usize) -> bool {
        a == b || self.incident(c, self.join(a, b))
    }

    /// Four distinct points, no three on a line.
    pub fn is_quadrangle(&self, pts: [usize; 4]) -> bool {
        if pts.iter().any(|&p| p >= self.np) {
            return false;
        }
        for i in 0..4 {
            for j in i + 1..4 {
                if pts[i] == pts[j] {
                    return false;
                }
                for k in j + 1..4 {
                    if self.collinear(pts[i], pts[j], pts[k]) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Lexicographically least quadrangle.
    pub fn least_quadrangle(&self) -> [usize; 4] {
        let np = self.np;
        for a in 0..np {
            for b in a + 1..np {
                for c in b + 1..np {
                    if self.collinear(a, b, c) {
                        continue;
                    }
                    for d in c + 1..np {
                        if self.is_quadrangle([a, b, c, d]) {
                            return [a, b, c, d];
                        }
                    }
                }
            }
        }
        unreachable!("validated planes contain a quadrangle")
    }

    /// The dual plane: lines become points and vice versa.
    pub fn dual(&self) -> IncidencePlane {
        let lines = self
            .point_lines
            .iter()
            .map(|ls| ls.iter().map(|&l| l as u32).collect())
            .collect();
        IncidencePlane::from_lines(self.order, lines).expect("the dual of a plane is a plane")
    }

    pub fn to_data(&self) -> PlaneData {
        PlaneData {
            order: self.order,
            points: self.np,
            lines: self
                .lines
                .iter()
                .map(|l| l.iter().map(|&p| p as u32).collect())
                .collect(),
        }
    }
}

/// Index of a normalized homogeneous point of `PG(2,q)`.
pub fn pg_point_index(q: u32, v: [u32; 3]) -> usize {
    let q = q as usize;
    match v {
        [0, 0, _] => 0,
        [0, _, c] => 1 + c as usize,
        [_, b, c] => 1 + q + b as usize * q + c as usize,
    }
}

/// Scales a nonzero vector so its first nonzero coordinate is 1.
pub fn pg_normalize(f: &FiniteField, v: [u32; 3]) -> [u32; 3] {
    let lead = v.iter().copied().find(|&c| c != 0).expect("nonzero vector");
    let inv = f.inv(lead).expect("nonzero lead");
    [f.mul(v[0], inv), f.mul(v[1], inv), f.mul(v[2], inv)]
}

/// Normalized vectors in index order.
pub fn pg_points(f: &FiniteField) -> Vec<[u32; 3]> {
    let q = f.q();
    let mut pts = vec![[0, 0, 1]];
    pts.extend((0..q).map(|c| [0, 1, c]));
    for b in 0..q {
        for c in 0..q {
            pts.push([1, b, c]);
        }
    }
    pts
}

/// `PG(2,q)` over the canonical field.
pub fn desarguesian_plane(f: &FiniteField) -> IncidencePlane {
    let pts = pg_points(f);
    let lines = pts
        .iter()
        .map(|u| {
            pts.iter()
                .enumerate()
                .filter(|(_, v)| {
                    let s = f.add(f.add(f.mul(u[0], v[0]), f.mul(u[1], v[1])), f.mul(u[2], v[2]));
                    s == 0
                })
                .map(|(i, _)| i as u32)
                .collect()
        })
        .collect();
    IncidencePlane::from_lines(f.q(), lines).expect("PG(2,q) is a projective plane")
}

/// Point indices used by [`plane_from_ptr`]: affine `(x,y)` is `x q + y`,
/// the slope point `(m)` is `q² + m` and `(∞)` is `q² + q`.
pub mod ptr_points {
    pub fn affine(q: u32, x: u32, y: u32) -> usize {
        (x * q + y) as usize
    }

    pub fn slope(q: u32, m: u32) -> usize {
        (q * q + m) as usize
    }

    pub fn infinity(q: u32) -> usize {
        (q * q + q) as usize
    }

    /// The frame `O, X, Y, I` that coordinatises back to the same table.
    pub fn frame(q: u32) -> [usize; 4] {
        [affine(q, 0, 0), slope(q, 0), infinity(q), affine(q, 1, 1)]
    }
}

/// The projective completion of the affine plane of a weak ternary ring.
pub fn plane_from_ptr(t: &TernaryTable) -> Result<IncidencePlane, PlaneError> {
    let report = check_ptr_properties(t);
    if let Some((property, witness)) = report.weak_failure() {
        return Err(PlaneError::NotWeakPTR { property, witness });
    }
    let q = t.q();
    let mut lines = Vec::with_capacity((q * q + q + 1) as usize);
    for m in 0..q {
        let mut by_k = vec![vec![ptr_points::slope(q, m) as u32]; q as usize];
        for x in 0..q {
            for y in 0..q {
                by_k[t.get(m, x, y) as usize].push(ptr_points::affine(q, x, y) as u32);
            }
        }
        lines.extend(by_k);
    }
    for c in 0..q {
        let mut l: Vec<u32> = (0..q).map(|y| ptr_points::affine(q, c, y) as u32).collect();
        l.push(ptr_points::infinity(q) as u32);
        lines.push(l);
    }
    lines.push((0..=q).map(|m| ptr_points::slope(q, m) as u32).collect());
    IncidencePlane::from_lines(q, lines)
}

/// A failing Desargues configuration: two triangles in perspective from
/// `center` whose corresponding sides meet in three non-collinear points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DesarguesWitness {
    pub center: usize,
    pub triangle1: [usize; 3],
    pub triangle2: [usize; 3],
    pub side_points: [usize; 3],
}

fn desargues_at(plane: &IncidencePlane, center: usize) -> Option<DesarguesWitness> {
    let through = plane.point_lines(center);
    let off = |l: u16| -> Vec<usize> {
        plane
            .line_points(l as usize)
            .iter()
            .map(|&p| p as usize)
            .filter(|&p| p != center)
            .collect()
    };
    let k = through.len();
    for ia in 0..k {
        let la = off(through[ia]);
        for ib in ia + 1..k {
            let lb = off(through[ib]);
            for ic in ib + 1..k {
                let lc = off(through[ic]);
                for (i, &a1) in la.iter().enumerate() {
                    for &a2 in &la[i + 1..] {
                        for &b1 in &lb {
                            let a1b1 = plane.join(a1, b1);
                            for &b2 in &lb {
                                if b1 == b2 {
                                    continue;
                                }
                                let p = plane.meet(a1b1, plane.join(a2, b2));
                                for &c1 in &lc {
                                    let a1c1 = plane.join(a1, c1);
                                    let b1c1 = plane.join(b1, c1);
                                    for &c2 in &lc {
                                        if c1 == c2 {
                                            continue;
                                        }
                                        let q = plane.meet(a1c1, plane.join(a2, c2));
                                        if p == q {
                                            continue;
                                        }
                                        let r = plane.meet(b1c1, plane.join(b2, c2));
                                        if !plane.incident(r, plane.join(p, q)) {
                                            return Some(DesarguesWitness {
                                                center,
                                                triangle1: [a1, b1, c1],
                                                triangle2: [a2, b2, c2],
                                                side_points: [p, q, r],
                                            });
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

/// The least violating configuration, searching centers in index order.
pub fn desargues_witness(plane: &IncidencePlane) -> Option<DesarguesWitness> {
    par::find_map_first(0, plane.num_points(), |c| desargues_at(plane, c))
}

pub fn is_desarguesian(plane: &IncidencePlane) -> bool {
    desargues_witness(plane).is_none()
}

/// A multiplication table on the canonical field of order `q`, whose
/// addition is the field addition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quasifield {
    field: FiniteField,
    /// `mul[x * q + y] = x ∘ y`
    mul: Vec<u32>,
}

impl Quasifield {
    pub fn new(field: &FiniteField, mul: Vec<u32>) -> Result<Self, PlaneError> {
        let q = field.q() as usize;
        if mul.len() != q * q || mul.iter().any(|&v| v as usize >= q) {
            return Err(PlaneError::Parse(format!(
                "multiplication table must have {} entries below {q}",
                q * q
            )));
        }
        Ok(Quasifield {
            field: field.clone(),
            mul,
        })
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn mul(&self, x: u32, y: u32) -> u32 {
        self.mul[(x * self.field.q() + y) as usize]
    }

    pub fn add_loop(&self) -> LoopTable {
        let f = &self.field;
        LoopTable::from_fn(f.elements().collect(), 0, |x, y| f.add(x, y))
    }

    pub fn mul_loop(&self) -> LoopTable {
        LoopTable::from_fn((1..self.field.q()).collect(), 1, |x, y| self.mul(x, y))
    }

    pub fn to_text(&self) -> String {
        let q = self.field.q();
        let mut s = format!("q={q}\n");
        for x in 0..q {
            for y in 0..q {
                writeln!(s, "{x} {y} {}", self.mul(x, y)).unwrap();
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, PlaneError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| PlaneError::Parse("empty input".into()))?;
        let q: u64 = header
            .trim()
            .strip_prefix("q=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| PlaneError::Parse(format!("bad header `{header}`")))?;
        let field = field_for_order(q).map_err(|e| PlaneError::Parse(e.to_string()))?;
        let q = q as u32;
        let mut mul = vec![u32::MAX; (q * q) as usize];
        let mut expected = (0..q).flat_map(|x| (0..q).map(move |y| (x, y)));
        for line in lines {
            let nums: Vec<u32> = line
                .split_whitespace()
                .map(|t| t.parse())
                .collect::<Result<_, _>>()
                .map_err(|_| PlaneError::Parse(format!("bad row `{line}`")))?;
            let (x, y) = expected
                .next()
                .ok_or_else(|| PlaneError::Parse("too many rows".into()))?;
            if nums.len() != 3 || nums[0] != x || nums[1] != y {
                return Err(PlaneError::Parse(format!(
                    "expected row for ({x}, {y}), found `{line}`"
                )));
            }
            mul[(x * q + y) as usize] = nums[2];
        }
        if expected.next().is_some() {
            return Err(PlaneError::Parse("too few rows".into()));
        }
        Quasifield::new(&field, mul)
    }
}

fn not_quasifield(axiom: &str, witness: Vec<u32>) -> PlaneError {
    PlaneError::NotQuasifield {
        axiom: axiom.into(),
        witness,
    }
}

/// `T(m,x,y) = (m ⊙ x) ⊕ y` for a quasifield given by its two loops, and
/// the plane it coordinatises. Zero multiplies to zero on both sides.
pub fn plane_from_quasifield(
    add: &LoopTable,
    mul: &LoopTable,
) -> Result<(TernaryTable, IncidencePlane), PlaneError> {
    let q = add.len() as u32;
    if add.elements != (0..q).collect::<Vec<_>>() || add.identity != 0 {
        return Err(not_quasifield("additive carrier must be 0..q with identity 0", vec![]));
    }
    if mul.elements != (1..q).collect::<Vec<_>>() || mul.identity != 1 {
        return Err(not_quasifield("multiplicative carrier must be 1..q with identity 1", vec![]));
    }
    let field = field_for_order(q as u64).map_err(|e| not_quasifield(&e.to_string(), vec![q]))?;
    let ra = loop_analysis(add);
    if !(ra.group && ra.commutative) {
        return Err(not_quasifield("addition is an abelian group", vec![]));
    }
    if !loop_analysis(mul).is_loop {
        return Err(not_quasifield("multiplication is a loop", vec![]));
    }
    let plus = |x: u32, y: u32| add.table[(x * q + y) as usize];
    let times = |x: u32, y: u32| {
        if x == 0 || y == 0 {
            0
        } else {
            mul.table[((x - 1) * (q - 1) + y - 1) as usize]
        }
    };
    let mut left = None;
    let mut right = None;
    'scan: for x in 0..q {
        for y in 0..q {
            for z in 0..q {
                if left.is_none() && times(x, plus(y, z)) != plus(times(x, y), times(x, z)) {
                    left = Some(vec![x, y, z]);
                }
                if right.is_none() && times(plus(y, z), x) != plus(times(y, x), times(z, x)) {
                    right = Some(vec![x, y, z]);
                }
                if left.is_some() && right.is_some() {
                    break 'scan;
                }
            }
        }
    }
    if let (Some(w), Some(_)) = (left, right) {
        return Err(not_quasifield("distributivity", w));
    }
    let t = TernaryTable::from_fn(&field, |m, x, y| plus(times(m, x), y));
    if let Some((p, w)) = check_ptr_properties(&t).first_failure() {
        return Err(not_quasifield(&format!("planarity (property {p})"), w));
    }
    let plane = plane_from_ptr(&t)?;
    Ok((t, plane))
}
