//! Arithmetic in prime fields GF(p) and extension fields GF(p^m).
//!
//! An element of GF(p^m) = GF(p)[α]/(f(α)) is written as the polynomial
//! `c_0 + c_1 α + … + c_{m-1} α^{m-1}` and stored as the integer
//! `c_0 + c_1 p + … + c_{m-1} p^{m-1}`. The same digit packing is used for the
//! modulus polynomial, so `α³ + α + 1` over GF(2) is `0b1011 = 11`.
//!
//! Multiplication is polynomial multiplication followed by reduction modulo
//! `f`. For small fields the operation tables are precomputed once from those
//! routines when the `FieldSpec` is built.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order accepted.
pub const MAX_ORDER: u32 = 1 << 16;

/// Fields up to this order get precomputed addition and multiplication tables.
const TABLE_LIMIT: u32 = 256;

/// A field element in digit-packed encoding. Only meaningful together with
/// the [`FieldSpec`] it was created for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Wraps a raw value without range checking; see [`FieldSpec::elem`].
    pub const fn from_raw(value: u32) -> Self {
        FieldElement(value)
    }

    pub const fn value(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// Description of GF(p^m).
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    m: u32,
    q: u32,
    /// Monic modulus, low-order coefficient first, length `m + 1`. `None` iff `m == 1`.
    modulus: Option<Vec<u32>>,
    tables: Option<Arc<Tables>>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus_packed())
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^m` with `p` prime, if possible.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

fn unpack(mut value: u32, p: u32, len: usize) -> Vec<u32> {
    let mut digits = vec![0; len];
    for d in digits.iter_mut() {
        *d = value % p;
        value /= p;
    }
    debug_assert_eq!(value, 0);
    digits
}

fn pack(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn trim(poly: &mut Vec<u32>) {
    while poly.last() == Some(&0) {
        poly.pop();
    }
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    // p is prime and small, so a^(p-2) is fine.
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// Remainder of `a` modulo `b` over GF(p); `b` must have a nonzero leading coefficient.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod_p(b[db], p);
    while r.len() > db {
        let top = r.len() - 1;
        let factor = r[top] * lead_inv % p;
        let shift = top - db;
        for (j, &bc) in b.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - factor * bc % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m = modulus.len() - 1;
    for deg in 1..=m / 2 {
        let count = p.pow(deg as u32);
        for low in 0..count {
            let mut divisor = unpack(low, p, deg);
            divisor.push(1);
            if poly_rem(modulus, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// The prime field GF(p).
    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if p > MAX_ORDER {
            return Err(Error::invalid(format!(
                "field order {p} exceeds {MAX_ORDER}"
            )));
        }
        Ok(Self::build(p, 1, None))
    }

    /// GF(p^m) with the given digit-packed monic modulus of degree `m`.
    pub fn extension(p: u32, m: u32, modulus: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::invalid("extension degree must be positive"));
        }
        let q = p
            .checked_pow(m)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| Error::invalid(format!("field order {p}^{m} exceeds {MAX_ORDER}")))?;
        if m == 1 {
            return Self::prime(p);
        }
        if modulus < q || modulus >= q * p || modulus / q != 1 {
            return Err(Error::invalid(format!(
                "modulus {modulus} is not a monic polynomial of degree {m} over GF({p})"
            )));
        }
        let coeffs = unpack(modulus, p, m as usize + 1);
        if !is_irreducible(&coeffs, p) {
            return Err(Error::invalid(format!(
                "modulus {modulus} is reducible over GF({p})"
            )));
        }
        Ok(Self::build(p, m, Some(coeffs)))
    }

    /// GF(p^m) with the lexicographically smallest irreducible monic modulus.
    pub fn with_default_modulus(p: u32, m: u32) -> Result<Self> {
        if m == 1 {
            return Self::prime(p);
        }
        let q = p
            .checked_pow(m)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| Error::invalid(format!("field order {p}^{m} exceeds {MAX_ORDER}")))?;
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        let modulus = (q..2 * q)
            .find(|&v| is_irreducible(&unpack(v, p, m as usize + 1), p))
            .expect("an irreducible polynomial of every degree exists");
        Self::extension(p, m, modulus)
    }

    /// Builds GF(q) from its order; `modulus` is required iff `q` is not prime.
    pub fn from_order(q: u32, modulus: Option<u32>) -> Result<Self> {
        let (p, m) =
            prime_power(q).ok_or_else(|| Error::invalid(format!("{q} is not a prime power")))?;
        match (m, modulus) {
            (1, None) => Self::prime(p),
            (1, Some(_)) => Err(Error::invalid(format!(
                "q = {q} is prime; no modulus may be given"
            ))),
            (_, Some(f)) => Self::extension(p, m, f),
            (_, None) => Err(Error::invalid(format!(
                "q = {q} is not prime; a modulus polynomial is required"
            ))),
        }
    }

    fn build(p: u32, m: u32, modulus: Option<Vec<u32>>) -> Self {
        let q = p.pow(m);
        let mut spec = FieldSpec {
            p,
            m,
            q,
            modulus,
            tables: None,
        };
        if q <= TABLE_LIMIT {
            let n = q as usize;
            let mut add = vec![0; n * n];
            let mut mul = vec![0; n * n];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = spec.slow_add(a, b);
                    mul[(a * q + b) as usize] = spec.slow_mul(a, b);
                }
            }
            let neg = (0..q)
                .map(|a| (0..q).find(|&b| add[(a * q + b) as usize] == 0).unwrap())
                .collect();
            let inv = (0..q)
                .map(|a| {
                    if a == 0 {
                        0
                    } else {
                        (1..q).find(|&b| mul[(a * q + b) as usize] == 1).unwrap()
                    }
                })
                .collect();
            spec.tables = Some(Arc::new(Tables { add, mul, neg, inv }));
        }
        spec
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Field order `p^m`.
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Digit-packed modulus, present iff `m > 1`.
    pub fn modulus_packed(&self) -> Option<u32> {
        self.modulus.as_ref().map(|c| pack(c, self.p))
    }

    /// Validates `value` as an element of this field.
    pub fn elem(&self, value: u32) -> Result<FieldElement> {
        if value < self.q {
            Ok(FieldElement(value))
        } else {
            Err(Error::invalid(format!(
                "{value} is not an element of GF({})",
                self.q
            )))
        }
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    fn check(&self, a: FieldElement) -> Result<()> {
        self.elem(a.0).map(|_| ())
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_raw(a, b))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.sub_raw(a, b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_raw(a, b))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.inv_raw(a))
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> Result<FieldElement> {
        self.check(a)?;
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        Ok(acc)
    }

    // Unchecked operations for callers that hold validated elements.

    #[inline]
    pub(crate) fn add_raw(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => FieldElement(t.add[(a.0 * self.q + b.0) as usize]),
            None => FieldElement(self.slow_add(a.0, b.0)),
        }
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => FieldElement(t.neg[a.0 as usize]),
            None => {
                let digits = unpack(a.0, self.p, self.m as usize);
                let neg: Vec<u32> = digits.iter().map(|&d| (self.p - d) % self.p).collect();
                FieldElement(pack(&neg, self.p))
            }
        }
    }

    #[inline]
    pub(crate) fn sub_raw(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add_raw(a, self.neg_raw(b))
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => FieldElement(t.mul[(a.0 * self.q + b.0) as usize]),
            None => FieldElement(self.slow_mul(a.0, b.0)),
        }
    }

    pub(crate) fn inv_raw(&self, a: FieldElement) -> FieldElement {
        debug_assert!(!a.is_zero());
        match &self.tables {
            Some(t) => FieldElement(t.inv[a.0 as usize]),
            None => {
                // a^(q-2)
                let mut base = a;
                let mut acc = FieldElement::ONE;
                let mut e = self.q - 2;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = self.mul_raw(acc, base);
                    }
                    base = self.mul_raw(base, base);
                    e >>= 1;
                }
                acc
            }
        }
    }

    fn slow_add(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            return (a + b) % self.p;
        }
        let m = self.m as usize;
        let (da, db) = (unpack(a, self.p, m), unpack(b, self.p, m));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        pack(&sum, self.p)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p;
        match &self.modulus {
            None => ((a as u64 * b as u64) % p as u64) as u32,
            Some(modulus) => {
                let m = self.m as usize;
                let (da, db) = (unpack(a, p, m), unpack(b, p, m));
                let mut prod = vec![0u32; 2 * m - 1];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = poly_rem(&prod, modulus, p);
                r.resize(m, 0);
                pack(&r, p)
            }
        }
    }
}
