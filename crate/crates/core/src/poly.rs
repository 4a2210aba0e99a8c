//! Reduced multivariate polynomials over a finite field.
//!
//! A polynomial is reduced when every exponent is below `q`; reduced
//! polynomials are in bijection with functions `F_q^n -> F_q`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::field::{FiniteField, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("table has {got} entries, expected q^n = {expected}")]
    IncompleteTable { expected: usize, got: usize },
    #[error("point has {got} coordinates, polynomial has arity {arity}")]
    ArityMismatch { arity: usize, got: usize },
    #[error("exponent {exponent} is not below q = {q}")]
    NotReduced { exponent: u32, q: u32 },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedPoly {
    field: FiniteField,
    arity: usize,
    coeffs: BTreeMap<Vec<u32>, u32>,
}

impl ReducedPoly {
    pub fn zero(field: &FiniteField, arity: usize) -> Self {
        ReducedPoly {
            field: field.clone(),
            arity,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(field: &FiniteField, arity: usize, c: u32) -> Self {
        let mut p = Self::zero(field, arity);
        p.add_term(&vec![0; arity], c);
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` terms, summing
    /// repeated monomials and reducing exponents with `x^q = x`.
    pub fn from_terms<I>(field: &FiniteField, arity: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, u32)>,
    {
        let mut p = Self::zero(field, arity);
        for (exps, c) in terms {
            assert_eq!(exps.len(), arity, "monomial arity");
            let reduced: Vec<u32> = exps.iter().map(|&i| reduce_exponent(i, field.q())).collect();
            p.add_term(&reduced, c);
        }
        p
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], u32)> {
        self.coeffs.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> u32 {
        self.coeffs.get(exps).copied().unwrap_or(0)
    }

    fn add_term(&mut self, exps: &[u32], c: u32) {
        if c == 0 {
            return;
        }
        let f = &self.field;
        let slot = self.coeffs.entry(exps.to_vec()).or_insert(0);
        *slot = f.add(*slot, c);
        if *slot == 0 {
            self.coeffs.remove(exps);
        }
    }

    /// Largest exponent of each variable over all terms.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d = vec![0; self.arity];
        for exps in self.coeffs.keys() {
            for (slot, &i) in d.iter_mut().zip(exps) {
                *slot = (*slot).max(i);
            }
        }
        d
    }

    pub fn add(&self, other: &ReducedPoly) -> ReducedPoly {
        assert_eq!(self.arity, other.arity);
        let mut out = self.clone();
        for (k, &v) in &other.coeffs {
            out.add_term(k, v);
        }
        out
    }

    pub fn neg(&self) -> ReducedPoly {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v = self.field.neg(*v);
        }
        out
    }

    pub fn sub(&self, other: &ReducedPoly) -> ReducedPoly {
        self.add(&other.neg())
    }

    /// Product with a single monomial, reduced.
    pub fn mul_monomial(&self, exps: &[u32], c: u32) -> ReducedPoly {
        let q = self.field.q();
        let terms = self.coeffs.iter().map(|(k, &v)| {
            let e = k
                .iter()
                .zip(exps)
                .map(|(&a, &b)| reduce_exponent(a + b, q))
                .collect();
            (e, self.field.mul(v, c))
        });
        ReducedPoly::from_terms(&self.field, self.arity, terms)
    }

    pub fn evaluate(&self, point: &[u32]) -> Result<u32, PolyError> {
        if point.len() != self.arity {
            return Err(PolyError::ArityMismatch {
                arity: self.arity,
                got: point.len(),
            });
        }
        let f = &self.field;
        let mut acc = 0;
        for (exps, &c) in &self.coeffs {
            let mut term = c;
            for (&x, &i) in point.iter().zip(exps) {
                term = f.mul(term, f.pow(x, i as u64));
            }
            acc = f.add(acc, term);
        }
        Ok(acc)
    }

    /// Values at every point of `F_q^n`, first variable most significant.
    pub fn evaluate_all(&self) -> Vec<u32> {
        let f = &self.field;
        let q = f.q() as usize;
        // Dense coefficient array, then one inverse transform per axis.
        let mut dense = vec![0u32; q.pow(self.arity as u32)];
        for (exps, &c) in &self.coeffs {
            dense[flat_index(exps, q)] = c;
        }
        // power[j][a] = a^j
        let power: Vec<Vec<u32>> = (0..q as u64)
            .map(|j| (0..q as u32).map(|a| f.pow(a, j)).collect())
            .collect();
        transform_axes(f, &mut dense, self.arity, &power);
        dense
    }

    pub fn to_text(&self) -> String {
        let f = &self.field;
        let mut s = format!(
            "poly q={} p={} e={} n={}\n",
            f.q(),
            f.p(),
            f.e(),
            self.arity
        );
        for (exps, c) in &self.coeffs {
            for i in exps {
                write!(s, "{i} ").unwrap();
            }
            writeln!(s, "{c}").unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<ReducedPoly, PolyError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(PolyError::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let kv = parse_header(header, "poly", &["q", "p", "e", "n"])
            .map_err(|msg| PolyError::Parse { line: 1, msg })?;
        let field = crate::field::make_field(kv[1], kv[2])?;
        if field.q() as u64 != kv[0] {
            return Err(PolyError::Parse {
                line: 1,
                msg: format!("q={} does not equal p^e", kv[0]),
            });
        }
        let arity = kv[3] as usize;
        let mut poly = ReducedPoly::zero(&field, arity);
        for (idx, line) in lines {
            let nums: Vec<u64> = line
                .split_whitespace()
                .map(|t| t.parse::<u64>())
                .collect::<Result<_, _>>()
                .map_err(|e| PolyError::Parse {
                    line: idx + 1,
                    msg: e.to_string(),
                })?;
            if nums.len() != arity + 1 {
                return Err(PolyError::Parse {
                    line: idx + 1,
                    msg: format!("expected {} numbers", arity + 1),
                });
            }
            let mut exps = Vec::with_capacity(arity);
            for &i in &nums[..arity] {
                if i >= field.q() as u64 {
                    return Err(PolyError::NotReduced {
                        exponent: i as u32,
                        q: field.q(),
                    });
                }
                exps.push(i as u32);
            }
            let c = field.check(nums[arity])?;
            poly.add_term(&exps, c);
        }
        Ok(poly)
    }
}

/// `x^i` as a function on `F_q` equals `x^{reduce_exponent(i)}`.
fn reduce_exponent(i: u32, q: u32) -> u32 {
    if i < q {
        i
    } else {
        (i - 1) % (q - 1) + 1
    }
}

fn flat_index(exps: &[u32], q: usize) -> usize {
    exps.iter().fold(0, |acc, &i| acc * q + i as usize)
}

/// Applies `v'[j] = Σ_a m[a][j] v[a]` along every axis of a dense
/// `q^n` array.
fn transform_axes(f: &FiniteField, data: &mut [u32], n: usize, m: &[Vec<u32>]) {
    let q = m.len();
    let mut buf = vec![0u32; q];
    for axis in 0..n {
        let stride = q.pow((n - 1 - axis) as u32);
        let block = stride * q;
        for base in (0..data.len()).step_by(block) {
            for off in 0..stride {
                for (j, out) in buf.iter_mut().enumerate() {
                    let mut acc = 0;
                    for (a, row) in m.iter().enumerate() {
                        let v = data[base + off + a * stride];
                        if v != 0 && row[j] != 0 {
                            acc = f.add(acc, f.mul(v, row[j]));
                        }
                    }
                    *out = acc;
                }
                for (j, &v) in buf.iter().enumerate() {
                    data[base + off + j * stride] = v;
                }
            }
        }
    }
}

/// The unique reduced polynomial agreeing with `table` on `F_q^n`; the
/// table is indexed with the first variable most significant.
///
/// Uses `1_{x=a} = 1 - (x-a)^{q-1}` and the expansion
/// `(x-a)^{q-1} = Σ_j a^{q-1-j} x^j`, applied one variable at a time.
pub fn interpolate(field: &FiniteField, arity: usize, table: &[u32]) -> Result<ReducedPoly, PolyError> {
    let q = field.q() as usize;
    let expected = q.pow(arity as u32);
    if table.len() != expected {
        return Err(PolyError::IncompleteTable {
            expected,
            got: table.len(),
        });
    }
    for &v in table {
        field.check(v as u64)?;
    }
    // indicator[a][j] = coefficient of x^j in 1_{x=a}
    let indicator: Vec<Vec<u32>> = (0..q as u32)
        .map(|a| {
            (0..q as u64)
                .map(|j| {
                    let c = field.neg(field.pow(a, q as u64 - 1 - j));
                    if j == 0 {
                        field.add(1, c)
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    let mut dense = table.to_vec();
    transform_axes(field, &mut dense, arity, &indicator);

    let mut coeffs = BTreeMap::new();
    for (idx, &c) in dense.iter().enumerate() {
        if c != 0 {
            let mut exps = vec![0u32; arity];
            let mut r = idx;
            for slot in exps.iter_mut().rev() {
                *slot = (r % q) as u32;
                r /= q;
            }
            coeffs.insert(exps, c);
        }
    }
    Ok(ReducedPoly {
        field: field.clone(),
        arity,
        coeffs,
    })
}

/// Parses `<tag> k1=v1 k2=v2 ...` with exactly the given keys in order.
pub(crate) fn parse_header(line: &str, tag: &str, keys: &[&str]) -> Result<Vec<u64>, String> {
    let mut parts = line.split_whitespace();
    if parts.next() != Some(tag) {
        return Err(format!("expected header starting with `{tag}`"));
    }
    let mut out = Vec::with_capacity(keys.len());
    for key in keys {
        let part = parts.next().ok_or_else(|| format!("missing `{key}=`"))?;
        let v = part
            .strip_prefix(key)
            .and_then(|r| r.strip_prefix('='))
            .ok_or_else(|| format!("expected `{key}=`, found `{part}`"))?;
        out.push(v.parse().map_err(|_| format!("bad value for {key}: `{v}`"))?);
    }
    if let Some(extra) = parts.next() {
        return Err(format!("unexpected header token `{extra}`"));
    }
    Ok(out)
}
