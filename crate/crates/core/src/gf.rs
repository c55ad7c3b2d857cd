//! Arithmetic in GF(p^h) for odd primes p.
//!
//! Elements are polynomial residues modulo a monic irreducible polynomial of
//! degree `h` over GF(p). Every element has a unique coefficient vector
//! `c_0 + c_1 t + ... + c_{h-1} t^{h-1}`, and is identified with the integer
//! `c_0 + c_1 p + ... + c_{h-1} p^{h-1}`. That integer is the [`Elem`] handle;
//! its ordering is the canonical enumeration order of the field (the prime
//! subfield comes first, then the rest ordered by the top coefficient).
//!
//! All operations go through full addition and multiplication tables built at
//! construction time, so the supported order is capped (default 128).

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order accepted by [`FieldSpec::new`].
pub const DEFAULT_MAX_ORDER: u64 = 128;

/// Handle of a field element inside a given [`FieldSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Identity of a field: enough to rebuild it and to compare fields.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub h: u32,
    pub q: u32,
    /// Monic modulus, coefficients low-to-high (length h + 1).
    pub modulus: Vec<u32>,
}

/// The field GF(p^h) together with its operation tables.
pub struct FieldSpec {
    desc: FieldDescriptor,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    chi: Vec<i8>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.desc.p)
            .field("h", &self.desc.h)
            .field("modulus", &self.desc.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.desc == other.desc
    }
}

impl Eq for FieldSpec {}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, h)` with `q = p^h`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut h = 0;
    while rest % p == 0 {
        rest /= p;
        h += 1;
    }
    (rest == 1).then_some((p, h))
}

// Polynomials over GF(p), coefficients low-to-high.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    let (p64, mut base, mut exp, mut acc) = (p as u64, a as u64 % p as u64, p as u64 - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p64;
        }
        base = base * base % p64;
        exp >>= 1;
    }
    acc as u32
}

/// Remainder of `a` modulo `b` (`b` nonzero, trimmed).
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod_p(b[db], p) as u64;
    while r.len() > db {
        let dr = r.len() - 1;
        let factor = r[dr] as u64 * lead_inv % p as u64;
        for (i, &bc) in b.iter().enumerate() {
            let idx = dr - db + i;
            let sub = factor * bc as u64 % p as u64;
            r[idx] = ((r[idx] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        poly_trim(&mut r);
    }
    r
}

/// Exhaustive factor test: no monic divisor of degree 1..=deg/2.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut g = vec![0u32; d + 1];
            let mut c = code;
            for coeff in g.iter_mut().take(d) {
                *coeff = (c % p as u64) as u32;
                c /= p as u64;
            }
            g[d] = 1;
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree `h`, scanning lower coefficients in
/// increasing integer encoding (c_0 least significant).
fn default_modulus(p: u32, h: u32) -> Vec<u32> {
    if h == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(h);
    for code in 0..count {
        let mut f = vec![0u32; h as usize + 1];
        let mut c = code;
        for coeff in f.iter_mut().take(h as usize) {
            *coeff = (c % p as u64) as u32;
            c /= p as u64;
        }
        f[h as usize] = 1;
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldSpec {
    /// Builds GF(p^h) with the default order cap.
    pub fn new(p: u64, h: u32, modulus: Option<&[u32]>) -> Result<FieldSpec> {
        Self::with_max_order(p, h, modulus, DEFAULT_MAX_ORDER)
    }

    pub fn with_max_order(p: u64, h: u32, modulus: Option<&[u32]>, cap: u64) -> Result<FieldSpec> {
        if p % 2 == 0 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        if h == 0 {
            return Err(Error::ZeroDegree);
        }
        let order = p.checked_pow(h).unwrap_or(u64::MAX);
        if order > cap {
            return Err(Error::FieldTooLarge { order, cap });
        }
        let p32 = p as u32;
        let modulus = match modulus {
            Some(m) if h == 1 => {
                // ignored for prime fields, but still validated for shape
                if m.len() != 2 {
                    return Err(Error::DegreeMismatch { degree: h, expected: 2, got: m.len() });
                }
                vec![0, 1]
            }
            Some(m) => {
                let expected = h as usize + 1;
                if m.len() != expected {
                    return Err(Error::DegreeMismatch { degree: h, expected, got: m.len() });
                }
                if let Some(&c) = m.iter().find(|&&c| c >= p32) {
                    return Err(Error::CoefficientOutOfRange(c));
                }
                if m[h as usize] != 1 {
                    return Err(Error::NotMonic);
                }
                if !is_irreducible(m, p32) {
                    return Err(Error::ReducibleModulus);
                }
                m.to_vec()
            }
            None => default_modulus(p32, h),
        };
        Ok(Self::build(FieldDescriptor { p: p32, h, q: order as u32, modulus }))
    }

    /// Rebuilds a field from its descriptor.
    pub fn from_descriptor(desc: &FieldDescriptor) -> Result<FieldSpec> {
        Self::with_max_order(desc.p as u64, desc.h, Some(&desc.modulus), u64::MAX)
    }

    fn build(desc: FieldDescriptor) -> FieldSpec {
        let q = desc.q as usize;
        let p = desc.p;
        let h = desc.h as usize;
        let coeffs = |x: usize| -> Vec<u32> {
            let mut v = vec![0u32; h];
            let mut c = x;
            for slot in v.iter_mut() {
                *slot = (c % p as usize) as u32;
                c /= p as usize;
            }
            v
        };
        let encode = |v: &[u32]| -> u32 { v.iter().rev().fold(0u32, |acc, &c| acc * p + c) };
        let all: Vec<Vec<u32>> = (0..q).map(coeffs).collect();

        let mut add = vec![0u32; q * q];
        let mut mul = vec![0u32; q * q];
        for a in 0..q {
            for b in 0..q {
                let s: Vec<u32> = all[a].iter().zip(&all[b]).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&s);
                let mut prod = vec![0u32; 2 * h - 1];
                for (i, &x) in all[a].iter().enumerate() {
                    for (j, &y) in all[b].iter().enumerate() {
                        prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
                    }
                }
                let mut r = poly_rem(&prod, &desc.modulus, p);
                r.resize(h, 0);
                mul[a * q + b] = encode(&r);
            }
        }
        let mut neg = vec![0u32; q];
        let mut inv = vec![0u32; q];
        for a in 0..q {
            for b in 0..q {
                if add[a * q + b] == 0 {
                    neg[a] = b as u32;
                }
                if mul[a * q + b] == 1 {
                    inv[a] = b as u32;
                }
            }
        }
        let mut field = FieldSpec { desc, add, mul, neg, inv, chi: Vec::new() };
        let half = (q as u64 - 1) / 2;
        let chi = (0..q as u32)
            .map(|a| {
                if a == 0 {
                    0
                } else if field.pow(Elem(a), half) == Elem::ONE {
                    1
                } else {
                    -1
                }
            })
            .collect();
        field.chi = chi;
        field
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.desc
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.desc.p
    }

    #[inline]
    pub fn h(&self) -> u32 {
        self.desc.h
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.desc.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.desc.modulus
    }

    /// `q mod 4`, which is 1 or 3 for odd q.
    pub fn q_mod4(&self) -> u32 {
        self.desc.q % 4
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.add[a.index() * self.desc.q as usize + b.index()])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.mul[a.index() * self.desc.q as usize + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.index()])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(Elem(self.inv[a.index()]))
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, mut exp: u64) -> Elem {
        let (mut base, mut acc) = (a, Elem::ONE);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Quadratic character: 0 at zero, 1 on nonzero squares, -1 otherwise.
    #[inline]
    pub fn chi(&self, a: Elem) -> i8 {
        self.chi[a.index()]
    }

    /// Image of an integer under the prime-subfield embedding.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.desc.p as i64) as u32)
    }

    /// Element with the given coefficient vector (low-to-high, length <= h).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() > self.desc.h as usize {
            return Err(Error::FieldMismatch);
        }
        let mut code = 0u32;
        for &c in coeffs.iter().rev() {
            if c >= self.desc.p {
                return Err(Error::FieldMismatch);
            }
            code = code * self.desc.p + c;
        }
        Ok(Elem(code))
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        let mut v = vec![0u32; self.desc.h as usize];
        let mut c = a.0;
        for slot in v.iter_mut() {
            *slot = c % self.desc.p;
            c /= self.desc.p;
        }
        v
    }

    /// The element `t` (class of the polynomial variable), or `None` for prime fields.
    pub fn generator(&self) -> Option<Elem> {
        (self.desc.h > 1).then_some(Elem(self.desc.p))
    }

    pub fn elem(&self, index: u32) -> Result<Elem> {
        if index < self.desc.q {
            Ok(Elem(index))
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// All q elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.desc.q).map(Elem)
    }

    /// Non-squares in canonical order.
    pub fn non_squares(&self) -> Vec<Elem> {
        self.elements().filter(|&a| self.chi(a) == -1).collect()
    }

    /// Elements of the subfield GF(sqrt q), for even h.
    pub fn square_root_subfield(&self) -> Option<Vec<Elem>> {
        if self.desc.h % 2 != 0 {
            return None;
        }
        let r = (self.desc.p as u64).pow(self.desc.h / 2);
        Some(self.elements().filter(|&a| self.pow(a, r) == a).collect())
    }

    /// Human-readable form: an integer for prime fields, `c0+c1t+...` otherwise.
    pub fn format(&self, a: Elem) -> String {
        if self.desc.h == 1 {
            return a.0.to_string();
        }
        let terms: Vec<String> = self
            .coeffs(a)
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, c) => format!("{c}t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }
}

/// Builds a shared field. See [`FieldSpec::new`].
pub fn make_field(p: u64, h: u32, modulus: Option<&[u32]>) -> Result<Arc<FieldSpec>> {
    FieldSpec::new(p, h, modulus).map(Arc::new)
}

/// All elements of a field in canonical order, as checked values.
pub fn enumerate_elements(field: &Arc<FieldSpec>) -> Vec<FieldElement> {
    field.elements().map(|e| FieldElement { field: Arc::clone(field), elem: e }).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
}

/// A field element bundled with its field, for the checked API.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<FieldSpec>,
    elem: Elem,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format(self.elem))
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.elem == other.elem && *self.field == *other.field
    }
}

impl Eq for FieldElement {}

impl FieldElement {
    pub fn new(field: &Arc<FieldSpec>, elem: Elem) -> Result<Self> {
        field.elem(elem.0)?;
        Ok(FieldElement { field: Arc::clone(field), elem })
    }

    pub fn from_int(field: &Arc<FieldSpec>, n: i64) -> Self {
        FieldElement { field: Arc::clone(field), elem: field.from_int(n) }
    }

    pub fn elem(&self) -> Elem {
        self.elem
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    /// Canonical coefficient vector, low-to-high.
    pub fn repr(&self) -> Vec<u32> {
        self.field.coeffs(self.elem)
    }

    /// Applies `op`. Unary operations ignore `other`.
    pub fn arith(&self, op: ArithOp, other: &FieldElement) -> Result<FieldElement> {
        if *self.field != *other.field {
            return Err(Error::FieldMismatch);
        }
        let f = &self.field;
        let (a, b) = (self.elem, other.elem);
        let elem = match op {
            ArithOp::Add => f.add(a, b),
            ArithOp::Sub => f.sub(a, b),
            ArithOp::Mul => f.mul(a, b),
            ArithOp::Div => f.div(a, b)?,
            ArithOp::Neg => f.neg(a),
            ArithOp::Inv => f.inv(a)?,
        };
        Ok(FieldElement { field: Arc::clone(f), elem })
    }

    pub fn quadratic_character(&self) -> i8 {
        self.field.chi(self.elem)
    }
}

/// Quadratic character of a checked element.
pub fn quadratic_character(a: &FieldElement) -> i8 {
    a.quadratic_character()
}
