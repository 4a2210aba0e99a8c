//! Central collineations and `(A, L)`-transitivity.

use serde::Serialize;
use thiserror::Error;

use crate::par;
use crate::plane::IncidencePlane;
use crate::properties::{loop_analysis, LoopTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CollineationError {
    #[error("invalid flag: {0}")]
    InvalidFlag(String),
}

/// A collineation given by its action on points and lines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollineationMap {
    pub center: usize,
    pub axis: usize,
    pub points: Vec<u16>,
    pub lines: Vec<u16>,
}

impl CollineationMap {
    pub fn identity(plane: &IncidencePlane, center: usize, axis: usize) -> Self {
        let n = plane.num_points();
        CollineationMap {
            center,
            axis,
            points: (0..n as u16).collect(),
            lines: (0..n as u16).collect(),
        }
    }

    #[inline]
    pub fn apply(&self, p: usize) -> usize {
        self.points[p] as usize
    }

    #[inline]
    pub fn apply_line(&self, l: usize) -> usize {
        self.lines[l] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &CollineationMap) -> CollineationMap {
        CollineationMap {
            center: self.center,
            axis: self.axis,
            points: other.points.iter().map(|&p| self.points[p as usize]).collect(),
            lines: other.lines.iter().map(|&l| self.lines[l as usize]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.points.iter().enumerate().all(|(i, &p)| i == p as usize)
    }

    /// Smallest `k >= 1` with `self^k` the identity.
    pub fn order(&self) -> usize {
        let mut g = self.clone();
        let mut k = 1;
        while !g.is_identity() {
            g = self.compose(&g);
            k += 1;
        }
        k
    }

    /// Incidence preserved, axis fixed pointwise, center fixed linewise.
    pub fn verify(&self, plane: &IncidencePlane) -> bool {
        let n = plane.num_points();
        let mut seen = vec![false; n];
        for &p in &self.points {
            if seen[p as usize] {
                return false;
            }
            seen[p as usize] = true;
        }
        (0..n).all(|l| {
            let image = self.apply_line(l);
            plane.line_points(l).iter().all(|&p| plane.incident(self.apply(p as usize), image))
        }) && plane
            .line_points(self.axis)
            .iter()
            .all(|&p| self.apply(p as usize) == p as usize)
            && plane
                .point_lines(self.center)
                .iter()
                .all(|&l| self.apply_line(l as usize) == l as usize)
    }
}

/// The unique collineation with center `a` and axis `l` sending `b` to `c`,
/// if one exists.
pub fn central_collineation(
    plane: &IncidencePlane,
    a: usize,
    l: usize,
    b: usize,
    c: usize,
) -> Result<Option<CollineationMap>, CollineationError> {
    let n = plane.num_points();
    if a >= n || l >= n || b >= n || c >= n {
        return Err(CollineationError::InvalidFlag("index out of range".into()));
    }
    if b == a || c == a {
        return Err(CollineationError::InvalidFlag("B and C must differ from the center".into()));
    }
    if plane.incident(b, l) || plane.incident(c, l) {
        return Err(CollineationError::InvalidFlag("B and C must lie off the axis".into()));
    }
    if !plane.collinear(a, b, c) {
        return Err(CollineationError::InvalidFlag("A, B, C must be collinear".into()));
    }
    if b == c {
        return Ok(Some(CollineationMap::identity(plane, a, l)));
    }

    let ab = plane.join(a, b);
    // Image of a point off the axis, the center and line AB, using a known
    // pair src -> dst.
    let image_via = |p: usize, src: usize, dst: usize| -> usize {
        if p == src {
            return dst;
        }
        let foot = plane.meet(plane.join(src, p), l);
        plane.meet(plane.join(a, p), plane.join(foot, dst))
    };
    let mut points = vec![u16::MAX; n];
    for p in 0..n {
        if p == a || plane.incident(p, l) {
            points[p] = p as u16;
        } else if !plane.incident(p, ab) {
            points[p] = image_via(p, b, c) as u16;
        }
    }
    // Points of AB go through an auxiliary point off AB and the axis.
    let d = (0..n)
        .find(|&p| p != a && !plane.incident(p, l) && !plane.incident(p, ab))
        .expect("a plane has points off two lines");
    let d_img = points[d] as usize;
    for p in 0..n {
        if points[p] == u16::MAX {
            points[p] = image_via(p, d, d_img) as u16;
        }
    }

    let mut seen = vec![false; n];
    for &p in &points {
        if seen[p as usize] {
            return Ok(None);
        }
        seen[p as usize] = true;
    }
    let mut lines = vec![0u16; n];
    for (li, slot) in lines.iter_mut().enumerate() {
        let pts = plane.line_points(li);
        let image = plane.join(points[pts[0] as usize] as usize, points[pts[1] as usize] as usize);
        if !pts[2..].iter().all(|&p| plane.incident(points[p as usize] as usize, image)) {
            return Ok(None);
        }
        *slot = image as u16;
    }
    let map = CollineationMap {
        center: a,
        axis: l,
        points,
        lines,
    };
    debug_assert!(map.verify(plane));
    Ok(Some(map))
}

/// Points on `m` other than `a` and off `l`.
fn admissible(plane: &IncidencePlane, a: usize, l: usize, m: usize) -> Vec<usize> {
    plane
        .line_points(m)
        .iter()
        .map(|&p| p as usize)
        .filter(|&p| p != a && !plane.incident(p, l))
        .collect()
}

/// Base line and base point used for `(a, l)`: the least line through `a`
/// other than `l`, and its least admissible point.
fn base(plane: &IncidencePlane, a: usize, l: usize) -> (usize, usize) {
    let m = plane
        .point_lines(a)
        .iter()
        .map(|&m| m as usize)
        .find(|&m| m != l)
        .expect("every point is on several lines");
    (m, admissible(plane, a, l, m)[0])
}

fn transitive_on_line(plane: &IncidencePlane, a: usize, l: usize, m: usize) -> bool {
    let pts = admissible(plane, a, l, m);
    let b = pts[0];
    pts.iter().all(|&c| {
        central_collineation(plane, a, l, b, c)
            .expect("admissible points form a valid flag")
            .is_some()
    })
}

/// Whether the collineations with center `a` and axis `l` act transitively
/// on the admissible points of each line through `a`.
///
/// The group acts semiregularly, so transitivity on one line through `a`
/// is equivalent to transitivity on all of them. Orders up to 4 check every
/// line anyway.
pub fn is_transitive(plane: &IncidencePlane, a: usize, l: usize) -> bool {
    let (m, _) = base(plane, a, l);
    if !transitive_on_line(plane, a, l, m) {
        return false;
    }
    if plane.order() <= 4 {
        let all = plane
            .point_lines(a)
            .iter()
            .map(|&m| m as usize)
            .filter(|&m| m != l)
            .all(|m| transitive_on_line(plane, a, l, m));
        assert!(all, "transitivity differs between lines through the center");
    }
    true
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupAt {
    pub center: usize,
    pub axis: usize,
    pub order: usize,
    pub transitive: bool,
    pub closed: bool,
    pub elementary_abelian: bool,
    pub cyclic: bool,
    #[serde(skip)]
    pub maps: Vec<CollineationMap>,
}

/// All central collineations with the given center and axis, found from the
/// base point, with their group structure.
pub fn group_at(plane: &IncidencePlane, a: usize, l: usize) -> GroupAt {
    let (m, b) = base(plane, a, l);
    let targets = admissible(plane, a, l, m);
    let maps: Vec<CollineationMap> = targets
        .iter()
        .filter_map(|&c| central_collineation(plane, a, l, b, c).expect("valid flag"))
        .collect();
    let k = maps.len();
    let index_of = |g: &CollineationMap| maps.iter().position(|h| h.points == g.points);
    let mut table = Vec::with_capacity(k * k);
    let mut closed = true;
    for g in &maps {
        for h in &maps {
            match index_of(&g.compose(h)) {
                Some(i) => table.push(i as u32),
                None => {
                    closed = false;
                    table.push(u32::MAX);
                }
            }
        }
    }
    let identity = maps.iter().position(|g| g.is_identity()).unwrap_or(0) as u32;
    let report = loop_analysis(&LoopTable {
        elements: (0..k as u32).collect(),
        identity,
        table,
    });
    GroupAt {
        center: a,
        axis: l,
        order: k,
        transitive: k == targets.len(),
        closed,
        elementary_abelian: closed && report.elementary_abelian,
        cyclic: closed && report.cyclic,
        maps,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransitivityProfile {
    pub verified: Vec<(usize, usize)>,
    pub refuted: Vec<(usize, usize)>,
    pub has_incident_flag: bool,
    pub has_nonincident_flag: bool,
    pub translation_lines: Vec<usize>,
    pub translation_points: Vec<usize>,
    /// True when only a sample of the non-incident flags was tested.
    pub sampled: bool,
}

/// One non-incident flag in this many, in lexicographic order, is tested
/// by default above order 5.
pub const NONINCIDENT_SAMPLE_STRIDE: usize = 8;

/// Default flag set: every flag for orders up to 5 or when `exhaustive`;
/// otherwise every incident flag plus every
/// [`NONINCIDENT_SAMPLE_STRIDE`]-th non-incident flag.
pub fn default_flags(plane: &IncidencePlane, exhaustive: bool) -> (Vec<(usize, usize)>, bool) {
    let n = plane.num_points();
    let all = exhaustive || plane.order() <= 5;
    let mut flags = Vec::new();
    let mut k = 0;
    for a in 0..n {
        for l in 0..n {
            if plane.incident(a, l) || all {
                flags.push((a, l));
            } else {
                if k % NONINCIDENT_SAMPLE_STRIDE == 0 {
                    flags.push((a, l));
                }
                k += 1;
            }
        }
    }
    (flags, !all)
}

pub fn transitivity_profile(
    plane: &IncidencePlane,
    flags: Option<&[(usize, usize)]>,
    exhaustive: bool,
) -> TransitivityProfile {
    let (mut flags, sampled) = match flags {
        Some(f) => (f.to_vec(), false),
        None => default_flags(plane, exhaustive),
    };
    flags.sort_unstable();
    flags.dedup();
    let verdicts = par::map_slice(&flags, |&(a, l)| is_transitive(plane, a, l));
    let mut verified = Vec::new();
    let mut refuted = Vec::new();
    for (&flag, ok) in flags.iter().zip(verdicts) {
        if ok {
            verified.push(flag);
        } else {
            refuted.push(flag);
        }
    }
    let is_verified = |f: (usize, usize)| verified.binary_search(&f).is_ok();
    let n = plane.num_points();
    let translation_lines = (0..n)
        .filter(|&l| plane.line_points(l).iter().all(|&p| is_verified((p as usize, l))))
        .collect();
    let translation_points = (0..n)
        .filter(|&a| plane.point_lines(a).iter().all(|&l| is_verified((a, l as usize))))
        .collect();
    TransitivityProfile {
        has_incident_flag: verified.iter().any(|&(a, l)| plane.incident(a, l)),
        has_nonincident_flag: verified.iter().any(|&(a, l)| !plane.incident(a, l)),
        verified,
        refuted,
        translation_lines,
        translation_points,
        sampled,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::plane::{desarguesian_plane, pg_point_index};

    #[test]
    fn translation_in_pg() {
        // Affine (x, y) is (1:x:y); (∞) is (0:0:1) and [∞] is x0 = 0.
        let f = make_field(3, 1).unwrap();
        let pl = desarguesian_plane(&f);
        let inf = pg_point_index(3, [0, 0, 1]);
        let line_inf = pl.join(pg_point_index(3, [0, 1, 0]), inf);
        let origin = pg_point_index(3, [1, 0, 0]);
        for c in 1..3 {
            let target = pg_point_index(3, [1, 0, c]);
            let g = central_collineation(&pl, inf, line_inf, origin, target).unwrap().unwrap();
            assert!(g.verify(&pl));
            for x in 0..3 {
                for y in 0..3 {
                    let p = pg_point_index(3, [1, x, y]);
                    assert_eq!(g.apply(p), pg_point_index(3, [1, x, f.add(y, c)]));
                }
            }
        }
        let id = central_collineation(&pl, inf, line_inf, origin, origin).unwrap().unwrap();
        assert!(id.is_identity());
    }

    #[test]
    fn invalid_flags() {
        let pl = desarguesian_plane(&make_field(2, 1).unwrap());
        let l = 0;
        let on = pl.line_points(l)[0] as usize;
        let off: Vec<usize> = (0..7).filter(|&p| !pl.incident(p, l)).collect();
        assert!(central_collineation(&pl, off[0], l, on, off[1]).is_err());
        assert!(central_collineation(&pl, off[0], l, off[0], off[1]).is_err());
    }

    #[test]
    fn pg_groups() {
        let f = make_field(5, 1).unwrap();
        let pl = desarguesian_plane(&f);
        let x = pg_point_index(5, [0, 1, 0]);
        let o = pg_point_index(5, [1, 0, 0]);
        let y = pg_point_index(5, [0, 0, 1]);
        let homology = group_at(&pl, x, pl.join(o, y));
        assert_eq!(homology.order, 4);
        assert!(homology.closed && homology.cyclic && homology.transitive);
        let elation = group_at(&pl, y, pl.join(x, y));
        assert_eq!(elation.order, 5);
        assert!(elation.elementary_abelian);

        let f4 = make_field(2, 2).unwrap();
        let pl4 = desarguesian_plane(&f4);
        let y4 = pg_point_index(4, [0, 0, 1]);
        let x4 = pg_point_index(4, [0, 1, 0]);
        let g = group_at(&pl4, y4, pl4.join(x4, y4));
        assert_eq!(g.order, 4);
        assert!(g.elementary_abelian && !g.cyclic);
    }

    #[test]
    fn pg3_fully_transitive() {
        let pl = desarguesian_plane(&make_field(3, 1).unwrap());
        let prof = transitivity_profile(&pl, None, false);
        assert!(prof.refuted.is_empty());
        assert_eq!(prof.verified.len(), 13 * 13);
        assert_eq!(prof.translation_lines.len(), 13);
        assert_eq!(prof.translation_points.len(), 13);
        assert!(!prof.sampled);
    }
}
