//! Ternary operations `T(m, x, y)` on a field's labelling set.

use std::fmt::Write as _;

use thiserror::Error;

use crate::field::{make_field, FieldError, FiniteField};
use crate::poly::{interpolate, parse_header, PolyError, ReducedPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("expected {expected} values, found {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A total map `F_q³ -> F_q`, stored at index `m q² + x q + y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryTable {
    field: FiniteField,
    values: Vec<u32>,
}

impl TernaryTable {
    pub fn new(field: &FiniteField, values: Vec<u32>) -> Result<Self, TableError> {
        let q = field.q() as usize;
        if values.len() != q * q * q {
            return Err(TableError::WrongLength {
                expected: q * q * q,
                got: values.len(),
            });
        }
        for &v in &values {
            field.check(v as u64)?;
        }
        Ok(TernaryTable {
            field: field.clone(),
            values,
        })
    }

    pub fn from_fn(field: &FiniteField, f: impl Fn(u32, u32, u32) -> u32) -> Self {
        let q = field.q();
        let mut values = Vec::with_capacity((q * q * q) as usize);
        for m in 0..q {
            for x in 0..q {
                for y in 0..q {
                    values.push(f(m, x, y));
                }
            }
        }
        TernaryTable::new(field, values).expect("from_fn produced an out-of-range value")
    }

    /// `T(m, x, y) = m x + y` over the field.
    pub fn linear_field(field: &FiniteField) -> Self {
        Self::from_fn(field, |m, x, y| field.add(field.mul(m, x), y))
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.field.q()
    }

    #[inline]
    pub fn get(&self, m: u32, x: u32, y: u32) -> u32 {
        let q = self.field.q() as usize;
        self.values[(m as usize * q + x as usize) * q + y as usize]
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn set(&mut self, m: u32, x: u32, y: u32, v: u32) {
        let q = self.field.q() as usize;
        assert!(v < q as u32);
        self.values[(m as usize * q + x as usize) * q + y as usize] = v;
    }

    pub fn to_poly(&self) -> ReducedPoly {
        interpolate(&self.field, 3, &self.values).expect("table is total")
    }

    pub fn from_poly(poly: &ReducedPoly) -> Result<Self, PolyError> {
        if poly.arity() != 3 {
            return Err(PolyError::ArityMismatch {
                arity: 3,
                got: poly.arity(),
            });
        }
        Ok(TernaryTable {
            field: poly.field().clone(),
            values: poly.evaluate_all(),
        })
    }

    /// File form: a `ptr q= p= e=` header, then one `m x` row of `q`
    /// values per line.
    pub fn to_text(&self) -> String {
        let f = &self.field;
        let q = f.q() as usize;
        let mut s = format!("ptr q={} p={} e={}\n", f.q(), f.p(), f.e());
        for row in self.values.chunks(q) {
            let mut first = true;
            for v in row {
                if !first {
                    s.push(' ');
                }
                first = false;
                write!(s, "{v}").unwrap();
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, TableError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or(TableError::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let kv = parse_header(header, "ptr", &["q", "p", "e"])
            .map_err(|msg| TableError::Parse { line: 1, msg })?;
        let field = make_field(kv[1], kv[2])?;
        if field.q() as u64 != kv[0] {
            return Err(TableError::Parse {
                line: 1,
                msg: format!("q={} does not equal p^e", kv[0]),
            });
        }
        let mut values = Vec::new();
        for (i, line) in lines.enumerate() {
            for tok in line.split_whitespace() {
                let v: u64 = tok.parse().map_err(|_| TableError::Parse {
                    line: i + 2,
                    msg: format!("not an integer: `{tok}`"),
                })?;
                values.push(field.check(v)?);
            }
        }
        TernaryTable::new(&field, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip_and_layout() {
        let f = make_field(2, 1).unwrap();
        let t = TernaryTable::linear_field(&f);
        let text = t.to_text();
        assert_eq!(text, "ptr q=2 p=2 e=1\n0 1\n0 1\n0 1\n1 0\n");
        assert_eq!(TernaryTable::from_text(&text).unwrap(), t);
    }

    #[test]
    fn rejects_bad_tables() {
        let f = make_field(3, 1).unwrap();
        assert!(matches!(
            TernaryTable::new(&f, vec![0; 26]),
            Err(TableError::WrongLength { .. })
        ));
        assert!(TernaryTable::from_text("ptr q=2 p=2 e=1\n0 1 2 0 0 0 0 0\n").is_err());
        assert!(TernaryTable::from_text("ptr q=4 p=2 e=1\n").is_err());
    }

    #[test]
    fn poly_round_trip() {
        let f = make_field(2, 2).unwrap();
        let t = TernaryTable::linear_field(&f);
        assert_eq!(TernaryTable::from_poly(&t.to_poly()).unwrap(), t);
    }
}
