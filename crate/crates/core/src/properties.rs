//! The five ternary-ring properties, the two loops, and linearity.
//!
//! Properties, for all arguments in the labelling set:
//! - (a) `T(a,0,z) = T(0,b,z) = z`
//! - (b) `T(x,1,0) = x` and `T(1,y,0) = y`
//! - (c) for `a != c`, exactly one `x` with `T(x,a,b) = T(x,c,d)`
//! - (d) exactly one `z` with `T(a,b,z) = c`
//! - (e) for `a != c`, exactly one `(y,z)` with `T(a,y,z) = b`, `T(c,y,z) = d`
//!
//! Failure witnesses are argument tuples. When some tuple has no solution
//! the least such tuple is reported, otherwise the least tuple with several.

use serde::Serialize;
use thiserror::Error;

use crate::par;
use crate::ternary::TernaryTable;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<u32>>,
}

impl Verdict {
    pub fn holds() -> Self {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    pub fn fails(witness: Vec<u32>) -> Self {
        Verdict {
            holds: false,
            witness: Some(witness),
        }
    }

    fn from_witness(w: Option<Vec<u32>>) -> Self {
        w.map_or_else(Verdict::holds, Verdict::fails)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub a: Verdict,
    pub b: Verdict,
    pub c: Verdict,
    pub d: Verdict,
    pub e: Verdict,
    pub weak_ptr: bool,
    pub ptr: bool,
}

impl PropertyReport {
    /// The first failing property among (c), (d), (e), with its witness.
    pub fn weak_failure(&self) -> Option<(char, Vec<u32>)> {
        [('c', &self.c), ('d', &self.d), ('e', &self.e)]
            .into_iter()
            .find(|(_, v)| !v.holds)
            .map(|(k, v)| (k, v.witness.clone().unwrap_or_default()))
    }

    pub fn first_failure(&self) -> Option<(char, Vec<u32>)> {
        [('a', &self.a), ('b', &self.b)]
            .into_iter()
            .find(|(_, v)| !v.holds)
            .map(|(k, v)| (k, v.witness.clone().unwrap_or_default()))
            .or_else(|| self.weak_failure())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PropertyError {
    #[error("table is not a planar ternary ring: property ({property}) fails at {witness:?}")]
    NotPTR { property: char, witness: Vec<u32> },
}

/// Picks the witness from solution counts visited in lexicographic order.
struct WitnessPicker {
    none: Option<Vec<u32>>,
    many: Option<Vec<u32>>,
}

impl WitnessPicker {
    fn new() -> Self {
        WitnessPicker {
            none: None,
            many: None,
        }
    }

    fn see(&mut self, count: u32, tuple: impl FnOnce() -> Vec<u32>) {
        if count == 0 {
            if self.none.is_none() {
                self.none = Some(tuple());
            }
        } else if count > 1 && self.many.is_none() {
            self.many = Some(tuple());
        }
    }

    fn done(&self) -> bool {
        self.none.is_some()
    }

    fn result(self) -> Option<Vec<u32>> {
        self.none.or(self.many)
    }
}

pub fn check_a(t: &TernaryTable) -> Verdict {
    let q = t.q();
    for m in 0..q {
        for x in 0..q {
            if m != 0 && x != 0 {
                continue;
            }
            for y in 0..q {
                if t.get(m, x, y) != y {
                    return Verdict::fails(vec![m, x, y]);
                }
            }
        }
    }
    Verdict::holds()
}

pub fn check_b(t: &TernaryTable) -> Verdict {
    let q = t.q();
    for m in 0..q {
        for x in 0..q {
            let v = t.get(m, x, 0);
            if (x == 1 && v != m) || (m == 1 && v != x) {
                return Verdict::fails(vec![m, x, 0]);
            }
        }
    }
    Verdict::holds()
}

pub fn check_c(t: &TernaryTable) -> Verdict {
    let q = t.q() as usize;
    // counts[a][b][c][d], computed per a in parallel
    let per_a: Vec<Vec<u32>> = par::map_range(0, q, |a| {
        let mut counts = vec![0u32; q * q * q];
        for x in 0..q as u32 {
            for b in 0..q as u32 {
                let lhs = t.get(x, a as u32, b);
                for c in 0..q as u32 {
                    if c as usize == a {
                        continue;
                    }
                    for d in 0..q as u32 {
                        if t.get(x, c, d) == lhs {
                            counts[(b as usize * q + c as usize) * q + d as usize] += 1;
                        }
                    }
                }
            }
        }
        counts
    });
    let mut pick = WitnessPicker::new();
    'outer: for (a, counts) in per_a.iter().enumerate() {
        for b in 0..q {
            for c in 0..q {
                if c == a {
                    continue;
                }
                for d in 0..q {
                    pick.see(counts[(b * q + c) * q + d], || {
                        vec![a as u32, b as u32, c as u32, d as u32]
                    });
                    if pick.done() {
                        break 'outer;
                    }
                }
            }
        }
    }
    Verdict::from_witness(pick.result())
}

pub fn check_d(t: &TernaryTable) -> Verdict {
    let q = t.q() as usize;
    let mut pick = WitnessPicker::new();
    let mut counts = vec![0u32; q];
    'outer: for a in 0..q as u32 {
        for b in 0..q as u32 {
            counts.iter_mut().for_each(|c| *c = 0);
            for z in 0..q as u32 {
                counts[t.get(a, b, z) as usize] += 1;
            }
            for (c, &n) in counts.iter().enumerate() {
                pick.see(n, || vec![a, b, c as u32]);
                if pick.done() {
                    break 'outer;
                }
            }
        }
    }
    Verdict::from_witness(pick.result())
}

pub fn check_e(t: &TernaryTable) -> Verdict {
    let q = t.q() as usize;
    // counts[a][c][b][d]
    let per_a: Vec<Vec<u32>> = par::map_range(0, q, |a| {
        let mut counts = vec![0u32; q * q * q];
        for c in 0..q as u32 {
            if c as usize == a {
                continue;
            }
            for y in 0..q as u32 {
                for z in 0..q as u32 {
                    let b = t.get(a as u32, y, z) as usize;
                    let d = t.get(c, y, z) as usize;
                    counts[(c as usize * q + b) * q + d] += 1;
                }
            }
        }
        counts
    });
    let mut pick = WitnessPicker::new();
    'outer: for (a, counts) in per_a.iter().enumerate() {
        for b in 0..q {
            for c in 0..q {
                if c == a {
                    continue;
                }
                for d in 0..q {
                    pick.see(counts[(c * q + b) * q + d], || {
                        vec![a as u32, b as u32, c as u32, d as u32]
                    });
                    if pick.done() {
                        break 'outer;
                    }
                }
            }
        }
    }
    Verdict::from_witness(pick.result())
}

pub fn check_ptr_properties(t: &TernaryTable) -> PropertyReport {
    let (a, b, c, d, e) = (check_a(t), check_b(t), check_c(t), check_d(t), check_e(t));
    let weak_ptr = c.holds && d.holds && e.holds;
    let ptr = weak_ptr && a.holds && b.holds;
    PropertyReport {
        a,
        b,
        c,
        d,
        e,
        weak_ptr,
        ptr,
    }
}

/// A binary operation on a finite set of labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoopTable {
    pub elements: Vec<u32>,
    pub identity: u32,
    /// `table[i * n + j]` is the label of `elements[i] ∘ elements[j]`.
    pub table: Vec<u32>,
}

impl LoopTable {
    pub fn from_fn(elements: Vec<u32>, identity: u32, op: impl Fn(u32, u32) -> u32) -> Self {
        let table = elements
            .iter()
            .flat_map(|&x| elements.iter().map(move |&y| (x, y)))
            .map(|(x, y)| op(x, y))
            .collect();
        LoopTable {
            elements,
            identity,
            table,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn position(&self, label: u32) -> Option<usize> {
        self.elements.iter().position(|&e| e == label)
    }

    /// `x ∘ y` for labels in the carrier.
    pub fn op(&self, x: u32, y: u32) -> Option<u32> {
        let (i, j) = (self.position(x)?, self.position(y)?);
        Some(self.table[i * self.len() + j])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoopReport {
    pub size: usize,
    pub is_loop: bool,
    pub associative: bool,
    pub commutative: bool,
    pub group: bool,
    pub elementary_abelian: bool,
    pub cyclic: bool,
    pub involutions: Vec<u32>,
}

pub fn loop_analysis(l: &LoopTable) -> LoopReport {
    let n = l.len();
    // Work on positions to avoid repeated label lookups.
    let mut pos = std::collections::HashMap::with_capacity(n);
    for (i, &e) in l.elements.iter().enumerate() {
        pos.insert(e, i);
    }
    let table: Option<Vec<usize>> = l.table.iter().map(|v| pos.get(v).copied()).collect();
    let id = pos.get(&l.identity).copied();

    let (table, id) = match (table, id) {
        (Some(t), Some(i)) => (t, i),
        _ => {
            return LoopReport {
                size: n,
                is_loop: false,
                associative: false,
                commutative: false,
                group: false,
                elementary_abelian: false,
                cyclic: false,
                involutions: Vec::new(),
            }
        }
    };
    let at = |i: usize, j: usize| table[i * n + j];

    let identity_ok = (0..n).all(|i| at(id, i) == i && at(i, id) == i);
    let latin = (0..n).all(|i| {
        let mut row = vec![false; n];
        let mut col = vec![false; n];
        for j in 0..n {
            row[at(i, j)] = true;
            col[at(j, i)] = true;
        }
        row.iter().all(|&b| b) && col.iter().all(|&b| b)
    });
    let is_loop = identity_ok && latin;
    let associative = par::all_range(0, n, |i| {
        (0..n).all(|j| (0..n).all(|k| at(at(i, j), k) == at(i, at(j, k))))
    });
    let commutative = (0..n).all(|i| (0..n).all(|j| at(i, j) == at(j, i)));
    let group = is_loop && associative;

    let order = |i: usize| -> usize {
        let (mut x, mut k) = (i, 1);
        while x != id {
            x = at(x, i);
            k += 1;
            if k > n {
                return 0;
            }
        }
        k
    };
    let (elementary_abelian, cyclic) = if group {
        let orders: Vec<usize> = (0..n).filter(|&i| i != id).map(order).collect();
        let ea = commutative
            && orders.first().is_none_or(|&o| {
                crate::field::is_prime(o as u64) && orders.iter().all(|&k| k == o)
            });
        let cyc = n == 1 || orders.contains(&n);
        (ea, cyc)
    } else {
        (false, false)
    };
    let involutions = (0..n)
        .filter(|&i| i != id && at(i, i) == id)
        .map(|i| l.elements[i])
        .collect();

    LoopReport {
        size: n,
        is_loop,
        associative,
        commutative,
        group,
        elementary_abelian,
        cyclic,
        involutions,
    }
}

fn require_ptr(t: &TernaryTable) -> Result<(), PropertyError> {
    match check_ptr_properties(t).first_failure() {
        None => Ok(()),
        Some((property, witness)) => Err(PropertyError::NotPTR { property, witness }),
    }
}

/// `x ⊕ y = T(1,x,y)` on all labels and `x ⊙ y = T(x,y,0)` on nonzero labels.
pub fn extract_loops(t: &TernaryTable) -> Result<(LoopTable, LoopTable), PropertyError> {
    require_ptr(t)?;
    Ok(extract_loops_unchecked(t))
}

pub(crate) fn extract_loops_unchecked(t: &TernaryTable) -> (LoopTable, LoopTable) {
    let q = t.q();
    let plus = LoopTable::from_fn((0..q).collect(), 0, |x, y| t.get(1, x, y));
    let times = LoopTable::from_fn((1..q).collect(), 1, |x, y| t.get(x, y, 0));
    (plus, times)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Linearity {
    pub linear: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<[u32; 3]>,
}

/// Least `(x,y,z)` with `T(x,y,z) != (x ⊙ y) ⊕ z`, if any.
pub fn linearity_witness(t: &TernaryTable) -> Option<[u32; 3]> {
    let q = t.q();
    for x in 0..q {
        for y in 0..q {
            let xy = t.get(x, y, 0);
            for z in 0..q {
                if t.get(x, y, z) != t.get(1, xy, z) {
                    return Some([x, y, z]);
                }
            }
        }
    }
    None
}

pub fn is_linear(t: &TernaryTable) -> Result<Linearity, PropertyError> {
    require_ptr(t)?;
    let witness = linearity_witness(t);
    Ok(Linearity {
        linear: witness.is_none(),
        witness,
    })
}
