//! Arithmetic in `F_{p^e}` over a polynomial basis.
//!
//! Elements are encoded as integers in `[0, q)` whose base-`p` digits are the
//! coefficients of the representing polynomial, least significant digit
//! first: the encoding `c_0 + c_1 p + ... + c_{e-1} p^{e-1}` stands for
//! `c_0 + c_1 X + ... + c_{e-1} X^{e-1}` modulo the field's irreducible
//! polynomial. `0` and `1` encode the identities.
//!
//! The modulus is the lexicographically smallest monic irreducible of degree
//! `e`, comparing coefficient vectors from `X^{e-1}` down to the constant
//! term. Fixing it makes every encoding reproducible, which the file formats
//! rely on.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest field order supported.
pub const MAX_ORDER: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree {e} out of range for p = {p} (order cap {MAX_ORDER})")]
    DegreeOutOfRange { p: u64, e: u64 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{value} is not an element of F_{q}")]
    InvalidElement { value: u64, q: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Inv,
    Pow,
    Neg,
}

struct Tables {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus, coefficients from `X^0` to `X^e`.
    modulus: Vec<u32>,
    primitive: u32,
    /// `exp[k] = primitive^k` for `k < q - 1`.
    exp: Vec<u32>,
    /// Discrete logarithms; `log[0]` is unused.
    log: Vec<u32>,
    /// Full addition table for small orders.
    add: Option<Vec<u32>>,
    neg: Vec<u32>,
}

/// A finite field context. Cheap to clone and safe to share across threads.
#[derive(Clone)]
pub struct FiniteField {
    t: Arc<Tables>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.t.p == other.t.p && self.t.e == other.t.e
    }
}

impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.t.q)?;
        if self.t.e > 1 {
            write!(f, " (p={}, e={})", self.t.p, self.t.e)?;
        }
        Ok(())
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `n` as `p^e` if it is a prime power.
pub fn prime_power(n: u64) -> Option<(u64, u64)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n.is_multiple_of(*d))?;
    let (mut m, mut e) = (n, 0);
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    (m == 1).then_some((p, e))
}

/// Builds the canonical field of order `p^e`.
pub fn make_field(p: u64, e: u64) -> Result<FiniteField, FieldError> {
    FiniteField::new(p, e)
}

/// The canonical field whose order is `n`.
pub fn field_for_order(n: u64) -> Result<FiniteField, FieldError> {
    let (p, e) = prime_power(n).ok_or(FieldError::NotPrimePower(n))?;
    FiniteField::new(p, e)
}

impl FiniteField {
    pub fn new(p: u64, e: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if e == 0 {
            return Err(FieldError::DegreeOutOfRange { p, e });
        }
        let mut q: u64 = 1;
        for _ in 0..e {
            q = q.saturating_mul(p);
            if q > MAX_ORDER {
                return Err(FieldError::DegreeOutOfRange { p, e });
            }
        }
        let (p, e, q) = (p as u32, e as u32, q as u32);
        let modulus = canonical_irreducible(p, e);

        let add = (q <= 256).then(|| {
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = digit_add(p, a, b);
                }
            }
            table
        });
        let neg = (0..q).map(|a| digit_neg(p, a)).collect();

        let (primitive, exp) = find_primitive(p, e, q, &modulus);
        let mut log = vec![0u32; q as usize];
        for (k, &v) in exp.iter().enumerate() {
            log[v as usize] = k as u32;
        }

        Ok(FiniteField {
            t: Arc::new(Tables {
                p,
                e,
                q,
                modulus,
                primitive,
                exp,
                log,
                add,
                neg,
            }),
        })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.t.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.t.e
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.t.q
    }

    /// Coefficients of the modulus from the constant term up to the leading 1.
    pub fn irreducible(&self) -> &[u32] {
        &self.t.modulus
    }

    /// The least encoding that generates the multiplicative group.
    pub fn primitive_element(&self) -> u32 {
        self.t.primitive
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.t.q
    }

    pub fn check(&self, a: u64) -> Result<u32, FieldError> {
        if a < self.t.q as u64 {
            Ok(a as u32)
        } else {
            Err(FieldError::InvalidElement {
                value: a,
                q: self.t.q,
            })
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let t = &*self.t;
        if t.e == 1 {
            let s = a + b;
            if s >= t.p {
                s - t.p
            } else {
                s
            }
        } else if t.p == 2 {
            a ^ b
        } else if let Some(table) = &t.add {
            table[(a * t.q + b) as usize]
        } else {
            digit_add(t.p, a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.t.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = &*self.t;
        let k = t.log[a as usize] + t.log[b as usize];
        let n = t.q - 1;
        t.exp[(if k >= n { k - n } else { k }) as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32, FieldError> {
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let t = &*self.t;
        let l = t.log[a as usize];
        Ok(t.exp[if l == 0 { 0 } else { (t.q - 1 - l) as usize }])
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^n` with `0^0 = 1`.
    pub fn pow(&self, a: u32, n: u64) -> u32 {
        if n == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let t = &*self.t;
        let order = (t.q - 1) as u64;
        let k = (t.log[a as usize] as u64 * (n % order)) % order;
        t.exp[k as usize]
    }

    /// Single entry point mirroring the operation table of the CLI; the
    /// second operand is an exponent for `Pow` and ignored for `Inv`/`Neg`.
    pub fn arith(&self, op: ArithOp, a: u64, b: u64) -> Result<u32, FieldError> {
        let a = self.check(a)?;
        match op {
            ArithOp::Add => Ok(self.add(a, self.check(b)?)),
            ArithOp::Sub => Ok(self.sub(a, self.check(b)?)),
            ArithOp::Mul => Ok(self.mul(a, self.check(b)?)),
            ArithOp::Inv => self.inv(a),
            ArithOp::Neg => Ok(self.neg(a)),
            ArithOp::Pow => Ok(self.pow(a, b)),
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn order_of(&self, a: u32) -> Result<u64, FieldError> {
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let n = (self.t.q - 1) as u64;
        let l = self.t.log[a as usize] as u64;
        Ok(n / gcd(n, l))
    }

    /// Base-`p` digits of an encoding, least significant first.
    pub fn digits(&self, a: u32) -> Vec<u32> {
        let mut a = a;
        (0..self.t.e)
            .map(|_| {
                let d = a % self.t.p;
                a /= self.t.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.t.p + d)
    }

    /// Whether `n` is a power of the characteristic (`p^0 = 1` included).
    pub fn is_power_of_p(&self, n: u32) -> bool {
        let mut m = n;
        if m == 0 {
            return false;
        }
        while m.is_multiple_of(self.t.p) {
            m /= self.t.p;
        }
        m == 1
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn digit_add(p: u32, mut a: u32, mut b: u32) -> u32 {
    let (mut out, mut place) = (0, 1);
    while a > 0 || b > 0 {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

fn digit_neg(p: u32, mut a: u32) -> u32 {
    let (mut out, mut place) = (0, 1);
    while a > 0 {
        out += ((p - a % p) % p) * place;
        a /= p;
        place *= p;
    }
    out
}

// Polynomials over F_p as coefficient vectors, constant term first.

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn inv_mod_p(p: u32, a: u32) -> u32 {
    // p is small; Fermat.
    let mut r = 1u64;
    let (mut b, mut n) = (a as u64, (p - 2) as u64);
    while n > 0 {
        if n & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        n >>= 1;
    }
    r as u32
}

fn poly_rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod_p(p, m[dm]);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let coef = r[r.len() - 1] * lead_inv % p;
        for (i, &c) in m.iter().enumerate() {
            let idx = i + shift;
            r[idx] = (r[idx] + p - coef * c % p) % p;
        }
        r = trim(r);
    }
    r
}

fn is_irreducible(p: u32, f: &[u32]) -> bool {
    let e = f.len() - 1;
    if e == 1 {
        return true;
    }
    // No roots in F_p.
    for x in 0..p {
        let v = f.iter().rev().fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p as u64);
        if v == 0 {
            return false;
        }
    }
    // Trial division by every monic polynomial of degree 2..=e/2.
    for d in 2..=e / 2 {
        let count = (p as u64).pow(d as u32);
        for n in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut m = n;
            for _ in 0..d {
                g.push((m % p as u64) as u32);
                m /= p as u64;
            }
            g.push(1);
            if poly_rem(p, f, &g).is_empty() {
                return false;
            }
        }
    }
    true
}

fn canonical_irreducible(p: u32, e: u32) -> Vec<u32> {
    // Counting n upward enumerates (c_{e-1}, ..., c_0) lexicographically.
    let count = (p as u64).pow(e);
    for n in 0..count {
        let mut f = Vec::with_capacity(e as usize + 1);
        let mut m = n;
        for _ in 0..e {
            f.push((m % p as u64) as u32);
            m /= p as u64;
        }
        f.push(1);
        if is_irreducible(p, &f) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Schoolbook product of two encodings reduced by the monic modulus.
fn slow_mul(p: u32, e: u32, modulus: &[u32], a: u32, b: u32) -> u32 {
    let digits = |mut x: u32| {
        (0..e)
            .map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect::<Vec<_>>()
    };
    let (da, db) = (digits(a), digits(b));
    let e = e as usize;
    let mut prod = vec![0u64; 2 * e];
    for i in 0..e {
        for j in 0..e {
            prod[i + j] += da[i] as u64 * db[j] as u64;
        }
    }
    for c in prod.iter_mut() {
        *c %= p as u64;
    }
    for k in (e..2 * e).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for i in 0..e {
            // X^e = -(m_0 + ... + m_{e-1} X^{e-1})
            let sub = c * modulus[i] as u64 % p as u64;
            prod[k - e + i] = (prod[k - e + i] + p as u64 - sub) % p as u64;
        }
    }
    prod[..e].iter().rev().fold(0u32, |acc, &d| acc * p + d as u32)
}

fn find_primitive(p: u32, e: u32, q: u32, modulus: &[u32]) -> (u32, Vec<u32>) {
    if q == 2 {
        return (1, vec![1]);
    }
    for g in 2..q {
        let mut powers = Vec::with_capacity((q - 1) as usize);
        let mut x = 1u32;
        loop {
            powers.push(x);
            x = slow_mul(p, e, modulus, x, g);
            if x == 1 {
                break;
            }
        }
        if powers.len() == (q - 1) as usize {
            return (g, powers);
        }
    }
    unreachable!("the multiplicative group of a finite field is cyclic")
}

/// `F_{q^2}` presented as `F_q[β]/(β² + c₁β + c₀)` with the lexicographically
/// smallest irreducible `(c₁, c₀)`. The element `y + βz` is encoded as
/// `y + q·z`.
#[derive(Clone, Debug)]
pub struct QuadraticExtension {
    base: FiniteField,
    c1: u32,
    c0: u32,
}

impl QuadraticExtension {
    pub fn new(base: &FiniteField) -> Self {
        for c1 in base.elements() {
            for c0 in base.elements() {
                let has_root = base.elements().any(|x| {
                    let v = base.add(base.add(base.mul(x, x), base.mul(c1, x)), c0);
                    v == 0
                });
                if !has_root {
                    return QuadraticExtension {
                        base: base.clone(),
                        c1,
                        c0,
                    };
                }
            }
        }
        unreachable!("irreducible quadratics exist over every finite field")
    }

    pub fn base(&self) -> &FiniteField {
        &self.base
    }

    /// `(c₁, c₀)` of the defining polynomial `β² + c₁β + c₀`.
    pub fn defining_coefficients(&self) -> (u32, u32) {
        (self.c1, self.c0)
    }

    pub fn order(&self) -> u64 {
        let q = self.base.q() as u64;
        q * q
    }

    #[inline]
    pub fn encode(&self, y: u32, z: u32) -> u64 {
        y as u64 + self.base.q() as u64 * z as u64
    }

    #[inline]
    pub fn decode(&self, v: u64) -> (u32, u32) {
        let q = self.base.q() as u64;
        ((v % q) as u32, (v / q) as u32)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let f = &self.base;
        let ((y1, z1), (y2, z2)) = (self.decode(a), self.decode(b));
        self.encode(f.add(y1, y2), f.add(z1, z2))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let f = &self.base;
        let ((y1, z1), (y2, z2)) = (self.decode(a), self.decode(b));
        // β² = -c₁β - c₀
        let zz = f.mul(z1, z2);
        let y = f.sub(f.mul(y1, y2), f.mul(zz, self.c0));
        let z = f.sub(f.add(f.mul(y1, z2), f.mul(z1, y2)), f.mul(zz, self.c1));
        self.encode(y, z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_uses_x_as_modulus() {
        let f = make_field(3, 1).unwrap();
        assert_eq!(f.q(), 3);
        assert_eq!(f.irreducible(), &[0, 1]);
        assert_eq!(f.mul(2, 2), 1);
    }

    #[test]
    fn gf4_modulus_is_x2_x_1() {
        let f = make_field(2, 2).unwrap();
        assert_eq!(f.irreducible(), &[1, 1, 1]);
        for x in f.elements() {
            assert_eq!(f.add(x, x), 0);
        }
    }

    #[test]
    fn gf9_modulus_and_cyclic_group() {
        let f = make_field(3, 2).unwrap();
        // X² + 1 is the first monic quadratic without roots mod 3.
        assert_eq!(f.irreducible(), &[1, 0, 1]);
        // Brute-force element orders with repeated multiplication.
        let mut max_order = 0;
        for g in 1..9 {
            let mut x = g;
            let mut k = 1;
            while x != 1 {
                x = f.mul(x, g);
                k += 1;
            }
            assert_eq!(8 % k, 0);
            max_order = max_order.max(k);
            assert_eq!(f.pow(g, 8), 1);
        }
        assert_eq!(max_order, 8);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(make_field(4, 1).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(make_field(1, 1).unwrap_err(), FieldError::NotPrime(1));
        assert!(matches!(
            make_field(2, 0),
            Err(FieldError::DegreeOutOfRange { .. })
        ));
        assert!(matches!(
            make_field(2, 17),
            Err(FieldError::DegreeOutOfRange { .. })
        ));
        assert!(make_field(2, 16).is_ok());
        assert_eq!(
            field_for_order(6).unwrap_err(),
            FieldError::NotPrimePower(6)
        );
    }

    #[test]
    fn inverse_of_zero_fails() {
        let f = make_field(5, 1).unwrap();
        assert_eq!(f.inv(0), Err(FieldError::DivisionByZero));
        assert_eq!(f.arith(ArithOp::Inv, 0, 0), Err(FieldError::DivisionByZero));
        assert_eq!(f.arith(ArithOp::Pow, 2, 4), Ok(1));
        assert!(f.arith(ArithOp::Add, 5, 0).is_err());
    }

    #[test]
    fn field_axioms_exhaustive_small_orders() {
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
            let f = make_field(p, e).unwrap();
            let q = f.q();
            for a in 0..q {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.sub(f.add(a, b), b), a);
                    for c in 0..q {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn table_free_paths_agree() {
        // q = 3^6 = 729 exceeds the addition-table threshold.
        let f = make_field(3, 6).unwrap();
        for a in (0..729).step_by(37) {
            for b in (0..729).step_by(41) {
                assert_eq!(f.add(a, b), digit_add(3, a, b));
                assert_eq!(
                    f.mul(a, b),
                    slow_mul(3, 6, f.irreducible(), a, b),
                    "{a} * {b}"
                );
            }
        }
    }

    #[test]
    fn quadratic_extension_is_a_field() {
        for q in [2u64, 3, 4, 5, 9] {
            let base = field_for_order(q).unwrap();
            let ext = QuadraticExtension::new(&base);
            let n = ext.order();
            for a in 1..n {
                assert!((1..n).any(|b| ext.mul(a, b) == 1), "q={q}, a={a}");
            }
        }
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}
