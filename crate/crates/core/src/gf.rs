//! Arithmetic in GF(q) for prime powers q.
//!
//! Elements are encoded as integers in `[0, q)` whose base-p digits are the
//! coefficients of a polynomial over GF(p), lowest degree in the least
//! significant digit. Extension fields are reduced modulo the
//! lexicographically smallest monic irreducible polynomial of degree k,
//! comparing coefficient vectors from the constant term upward.

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;
/// Fields up to this order get full addition and multiplication tables.
pub const TABLE_ORDER: u32 = 256;

/// An element of GF(q), stored as its canonical integer encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Unchecked wrap; callers guarantee `v < q`.
    #[inline]
    pub(crate) const fn from_raw(v: u32) -> Self {
        FieldElement(v)
    }
}

/// Operation selector for [`FieldSpec::apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Neg,
    Inv,
}

#[derive(Debug, Clone)]
enum Tables {
    Full {
        add: Vec<u16>,
        mul: Vec<u16>,
    },
    Log {
        exp: Vec<u32>,
        log: Vec<u32>,
    },
}

/// A finite field of order `q = p^k`. Immutable after construction.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    q: u32,
    p: u32,
    k: u32,
    modulus: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    tables: Tables,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

/// Splits `q` into `(p, k)` with `q = p^k`, or `None` if q is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

pub fn is_prime_power(q: u32) -> bool {
    prime_power(q).is_some()
}

// Polynomials over GF(p) as coefficient vectors, constant term first.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    // m is monic
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &mc) in m.iter().enumerate() {
            let t = (lead * mc) % p;
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// Monic polynomials of the given degree, in the order used for modulus
/// selection (constant term compared first).
fn monic_polys(p: u32, degree: u32) -> impl Iterator<Item = Vec<u32>> {
    let count = p.pow(degree);
    (0..count).map(move |mut t| {
        let mut coeffs = vec![0u32; degree as usize + 1];
        // constant term is the most significant digit of t
        for i in (0..degree as usize).rev() {
            coeffs[i] = t % p;
            t /= p;
        }
        coeffs[degree as usize] = 1;
        coeffs
    })
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let poly = trim(poly.to_vec());
    let deg = poly.len().saturating_sub(1) as u32;
    if deg == 0 {
        return false;
    }
    for dd in 1..=deg / 2 {
        for divisor in monic_polys(p, dd) {
            if poly_rem(&poly, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn to_digits(v: u32, p: u32, k: u32) -> Vec<u32> {
    let mut v = v;
    (0..k)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn from_digits(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Constructs GF(q). Fails if `q` is not a prime power in `[2, 2^16]`.
pub fn build_field(q: u32) -> Result<FieldSpec> {
    FieldSpec::new(q)
}

impl FieldSpec {
    pub fn new(q: u32) -> Result<Self> {
        let (p, k) = prime_power(q)
            .ok_or_else(|| Error::param(format!("q = {q} is not a prime power")))?;
        if q > MAX_ORDER {
            return Err(Error::param(format!(
                "q = {q} exceeds the supported field order {MAX_ORDER}"
            )));
        }
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            monic_polys(p, k)
                .find(|m| is_irreducible(m, p))
                .expect("an irreducible polynomial exists for every degree")
        };

        let slow_mul = |a: u32, b: u32| -> u32 {
            if k == 1 {
                return (a * b) % p;
            }
            let prod = poly_mul(
                &trim(to_digits(a, p, k)),
                &trim(to_digits(b, p, k)),
                p,
            );
            let mut r = poly_rem(&prod, &modulus, p);
            r.resize(k as usize, 0);
            from_digits(&r, p)
        };
        let slow_add = |a: u32, b: u32| -> u32 {
            if k == 1 {
                return (a + b) % p;
            }
            if p == 2 {
                return a ^ b;
            }
            let da = to_digits(a, p, k);
            let db = to_digits(b, p, k);
            let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            from_digits(&s, p)
        };

        let neg: Vec<u32> = (0..q)
            .map(|a| {
                let d: Vec<u32> = to_digits(a, p, k).iter().map(|&x| (p - x) % p).collect();
                from_digits(&d, p)
            })
            .collect();

        let tables = if q <= TABLE_ORDER {
            let n = q as usize;
            let mut add = vec![0u16; n * n];
            let mut mul = vec![0u16; n * n];
            for a in 0..q {
                for b in 0..q {
                    add[a as usize * n + b as usize] = slow_add(a, b) as u16;
                    mul[a as usize * n + b as usize] = slow_mul(a, b) as u16;
                }
            }
            Tables::Full { add, mul }
        } else {
            let generator = (2..q)
                .find(|&g| {
                    let mut x = g;
                    let mut order = 1;
                    while x != 1 {
                        x = slow_mul(x, g);
                        order += 1;
                    }
                    order == q - 1
                })
                .expect("the multiplicative group of a finite field is cyclic");
            let mut exp = vec![0u32; (q - 1) as usize];
            let mut log = vec![0u32; q as usize];
            let mut x = 1;
            for (i, e) in exp.iter_mut().enumerate() {
                *e = x;
                log[x as usize] = i as u32;
                x = slow_mul(x, generator);
            }
            Tables::Log { exp, log }
        };

        let mut field = FieldSpec {
            q,
            p,
            k,
            modulus,
            neg,
            inv: Vec::new(),
            tables,
        };
        let mut inv = vec![0u32; q as usize];
        for a in 1..q {
            if inv[a as usize] != 0 {
                continue;
            }
            let b = (1..q)
                .find(|&b| field.mul_raw(a, b) == 1)
                .expect("nonzero elements are invertible");
            inv[a as usize] = b;
            inv[b as usize] = a;
        }
        field.inv = inv;
        Ok(field)
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// Reduction polynomial, constant term first. For prime fields this is
    /// the placeholder `x`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Wraps an integer as an element, checking the range.
    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if value < self.q {
            Ok(FieldElement(value))
        } else {
            Err(Error::param(format!(
                "{value} is not an element of GF({})",
                self.q
            )))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.q).map(FieldElement)
    }

    #[inline]
    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        match &self.tables {
            Tables::Full { mul, .. } => mul[(a * self.q + b) as usize] as u32,
            Tables::Log { exp, log } => {
                if a == 0 || b == 0 {
                    0
                } else {
                    let s = (log[a as usize] + log[b as usize]) % (self.q - 1);
                    exp[s as usize]
                }
            }
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let v = match &self.tables {
            Tables::Full { add, .. } => add[(a.0 * self.q + b.0) as usize] as u32,
            Tables::Log { .. } => {
                if self.p == 2 {
                    a.0 ^ b.0
                } else {
                    let (p, k) = (self.p, self.k);
                    let s: Vec<u32> = to_digits(a.0, p, k)
                        .iter()
                        .zip(to_digits(b.0, p, k))
                        .map(|(x, y)| (x + y) % p)
                        .collect();
                    from_digits(&s, p)
                }
            }
        };
        FieldElement(v)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul_raw(a.0, b.0))
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.0 as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            Err(Error::domain("inverse of zero"))
        } else {
            Ok(FieldElement(self.inv[a.0 as usize]))
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: FieldElement) -> Option<u32> {
        if a.is_zero() {
            return None;
        }
        let mut x = a;
        let mut order = 1;
        while x != FieldElement::ONE {
            x = self.mul(x, a);
            order += 1;
        }
        Some(order)
    }

    /// Single entry point over the four basic operations. Binary operations
    /// require `b`.
    pub fn apply(
        &self,
        op: FieldOp,
        a: FieldElement,
        b: Option<FieldElement>,
    ) -> Result<FieldElement> {
        if a.0 >= self.q || b.is_some_and(|b| b.0 >= self.q) {
            return Err(Error::param(format!("operand outside GF({})", self.q)));
        }
        let rhs = || b.ok_or_else(|| Error::param("binary operation needs two operands"));
        match op {
            FieldOp::Add => Ok(self.add(a, rhs()?)),
            FieldOp::Mul => Ok(self.mul(a, rhs()?)),
            FieldOp::Neg => Ok(self.neg(a)),
            FieldOp::Inv => self.inv(a),
        }
    }
}
