//! Finite commutative rings with identity.
//!
//! Elements are dense indices `0..size`. Every constructor places the zero
//! element at index 0. Operation tables are materialized up to
//! [`TABLE_LIMIT`] elements; larger rings evaluate their operations from the
//! construction tree on demand.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{invalid_spec, Error, Result};
use crate::modlat::{FiniteModule, ModuleSpec};

/// Rings and modules up to this many elements get full operation tables.
pub const TABLE_LIMIT: usize = 4096;

/// The exhaustive axiom scan is cubic; it refuses rings above this size.
pub const AXIOM_SCAN_LIMIT: usize = 256;

/// Constructor tree for a ring.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case", deny_unknown_fields))]
pub enum RingSpec {
    /// Integers modulo `n`.
    #[cfg_attr(feature = "serde", serde(rename = "zmod"))]
    ZMod(usize),
    /// `F_p[x]/(f)` with `f` monic, coefficients listed low to high.
    PolyQuot { p: usize, coeffs: Vec<usize> },
    Product(Box<RingSpec>, Box<RingSpec>),
    /// Idealization `R ⋉ M`; the module carries its own base ring `R`.
    Idealization(Box<ModuleSpec>),
}

impl RingSpec {
    pub fn build(&self) -> Result<Ring> {
        match self {
            RingSpec::ZMod(n) => Ring::zmod(*n),
            RingSpec::PolyQuot { p, coeffs } => Ring::poly_quotient(*p, coeffs),
            RingSpec::Product(a, b) => Ok(Ring::product(Arc::new(a.build()?), Arc::new(b.build()?))),
            RingSpec::Idealization(m) => {
                let module = m.build()?;
                Ok(Ring::idealization(Arc::new(module)))
            }
        }
    }

    pub fn product(a: RingSpec, b: RingSpec) -> RingSpec {
        RingSpec::Product(Box::new(a), Box::new(b))
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::ZMod(n) => write!(f, "Z/{n}"),
            RingSpec::PolyQuot { p, coeffs } => {
                write!(f, "GF({p})[x]/({})", poly_name(coeffs))
            }
            RingSpec::Product(a, b) => {
                write!(f, "{a} x ")?;
                if matches!(**b, RingSpec::Product(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            RingSpec::Idealization(m) => write!(f, "ideal({}, {})", m.ring, m.summands_display()),
        }
    }
}

#[derive(Clone, Debug)]
enum Kind {
    ZMod(usize),
    PolyQuot { p: usize, modulus: Vec<usize> },
    Product(Arc<Ring>, Arc<Ring>),
    Idealization(Arc<FiniteModule>),
}

#[derive(Clone, Debug)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
}

/// A finite commutative ring with identity.
#[derive(Clone, Debug)]
pub struct Ring {
    size: usize,
    one: usize,
    names: Vec<String>,
    kind: Kind,
    tables: Option<Tables>,
}

impl PartialEq for Ring {
    /// Structural equality: same size, same element names and same tables.
    fn eq(&self, other: &Self) -> bool {
        if self.size != other.size || self.one != other.one || self.names != other.names {
            return false;
        }
        (0..self.size).all(|a| {
            (0..self.size).all(|b| self.add(a, b) == other.add(a, b) && self.mul(a, b) == other.mul(a, b))
        })
    }
}

impl Eq for Ring {}

impl Ring {
    fn finish(size: usize, one: usize, names: Vec<String>, kind: Kind) -> Ring {
        let mut ring = Ring {
            size,
            one,
            names,
            kind,
            tables: None,
        };
        if size <= TABLE_LIMIT {
            let mut add = Vec::with_capacity(size * size);
            let mut mul = Vec::with_capacity(size * size);
            for a in 0..size {
                for b in 0..size {
                    add.push(ring.eval_add(a, b) as u32);
                    mul.push(ring.eval_mul(a, b) as u32);
                }
            }
            let neg = (0..size).map(|a| ring.eval_neg(a) as u32).collect();
            ring.tables = Some(Tables { add, mul, neg });
        }
        ring
    }

    /// The integers modulo `n`; `n = 1` gives the zero ring.
    pub fn zmod(n: usize) -> Result<Ring> {
        if n == 0 {
            return Err(invalid_spec("invalid modulus 0 for Z/n"));
        }
        let names = (0..n).map(|k| k.to_string()).collect();
        Ok(Ring::finish(n, 1 % n, names, Kind::ZMod(n)))
    }

    /// `F_p[x]/(f)` where `f` is monic of degree at least one, low-to-high
    /// coefficients. `f` need not be irreducible.
    pub fn poly_quotient(p: usize, f: &[usize]) -> Result<Ring> {
        if !is_prime(p) {
            return Err(invalid_spec(format!("characteristic {p} is not prime")));
        }
        let mut coeffs: Vec<usize> = f.iter().map(|c| c % p).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(invalid_spec("modulus polynomial must have degree >= 1"));
        }
        if *coeffs.last().unwrap() != 1 {
            return Err(invalid_spec(format!("modulus {} is not monic", poly_name(&coeffs))));
        }
        let degree = coeffs.len() - 1;
        let size = p
            .checked_pow(degree as u32)
            .ok_or_else(|| invalid_spec("quotient ring too large"))?;
        let names = (0..size).map(|i| poly_name(&digits(i, p, degree))).collect();
        let one = if size == 1 { 0 } else { 1 };
        Ok(Ring::finish(size, one, names, Kind::PolyQuot { p, modulus: coeffs }))
    }

    /// Componentwise product; element `(a, b)` has index `a * |R2| + b`.
    pub fn product(r1: Arc<Ring>, r2: Arc<Ring>) -> Ring {
        let size = r1.size * r2.size;
        let mut names = Vec::with_capacity(size);
        for a in 0..r1.size {
            for b in 0..r2.size {
                names.push(format!("({},{})", r1.names[a], r2.names[b]));
            }
        }
        let one = r1.one * r2.size + r2.one;
        Ring::finish(size, one, names, Kind::Product(r1, r2))
    }

    /// The idealization `R ⋉ M` with `(r,m)(s,n) = (rs, rn + sm)`.
    /// Element `(r, m)` has index `r * |M| + m`.
    pub fn idealization(module: Arc<FiniteModule>) -> Ring {
        let base = module.ring();
        let msize = module.size();
        let size = base.size * msize;
        let mut names = Vec::with_capacity(size);
        for r in 0..base.size {
            for m in 0..msize {
                names.push(format!("({},{})", base.names[r], module.element_name(m)));
            }
        }
        let one = base.one * msize;
        Ring::finish(size, one, names, Kind::Idealization(module))
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn zero(&self) -> usize {
        0
    }

    #[inline]
    pub fn one(&self) -> usize {
        self.one
    }

    pub fn is_zero_ring(&self) -> bool {
        self.size == 1
    }

    pub fn element_name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn element_names(&self) -> &[String] {
        &self.names
    }

    /// Looks an element up by display name, ignoring whitespace.
    pub fn element(&self, name: &str) -> Option<usize> {
        let want: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(i) = self.names.iter().position(|n| *n == want) {
            return Some(i);
        }
        // integers are accepted modulo n for Z/n
        if let Kind::ZMod(n) = self.kind {
            if let Ok(v) = want.parse::<i64>() {
                return Some(v.rem_euclid(n as i64) as usize);
            }
        }
        None
    }

    /// For idealizations, the module `M` such that this ring is `R ⋉ M`.
    pub fn idealized_module(&self) -> Option<&Arc<FiniteModule>> {
        match &self.kind {
            Kind::Idealization(m) => Some(m),
            _ => None,
        }
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        match &self.tables {
            Some(t) => t.add[a * self.size + b] as usize,
            None => self.eval_add(a, b),
        }
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.tables {
            Some(t) => t.mul[a * self.size + b] as usize,
            None => self.eval_mul(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        match &self.tables {
            Some(t) => t.neg[a] as usize,
            None => self.eval_neg(a),
        }
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `a^k` for `k >= 1`.
    pub fn pow(&self, a: usize, k: usize) -> usize {
        let mut acc = a;
        for _ in 1..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    fn eval_add(&self, a: usize, b: usize) -> usize {
        match &self.kind {
            Kind::ZMod(n) => (a + b) % n,
            Kind::PolyQuot { p, modulus } => {
                let d = modulus.len() - 1;
                let (x, y) = (digits(a, *p, d), digits(b, *p, d));
                let sum: Vec<usize> = x.iter().zip(&y).map(|(u, v)| (u + v) % p).collect();
                undigits(&sum, *p)
            }
            Kind::Product(r1, r2) => {
                let (a1, a2) = (a / r2.size, a % r2.size);
                let (b1, b2) = (b / r2.size, b % r2.size);
                r1.add(a1, b1) * r2.size + r2.add(a2, b2)
            }
            Kind::Idealization(m) => {
                let ms = m.size();
                let base = m.ring();
                base.add(a / ms, b / ms) * ms + m.add(a % ms, b % ms)
            }
        }
    }

    fn eval_mul(&self, a: usize, b: usize) -> usize {
        match &self.kind {
            Kind::ZMod(n) => ((a as u128 * b as u128) % *n as u128) as usize,
            Kind::PolyQuot { p, modulus } => {
                let d = modulus.len() - 1;
                let (x, y) = (digits(a, *p, d), digits(b, *p, d));
                let mut prod = alloc::vec![0usize; 2 * d];
                for (i, u) in x.iter().enumerate() {
                    for (j, v) in y.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + u * v) % p;
                    }
                }
                // reduce with the monic modulus from the top degree down
                for k in (d..2 * d).rev() {
                    let c = prod[k];
                    if c == 0 {
                        continue;
                    }
                    for (i, m) in modulus.iter().enumerate() {
                        let idx = k - d + i;
                        prod[idx] = (prod[idx] + p - (c * m) % p) % p;
                    }
                }
                undigits(&prod[..d], *p)
            }
            Kind::Product(r1, r2) => {
                let (a1, a2) = (a / r2.size, a % r2.size);
                let (b1, b2) = (b / r2.size, b % r2.size);
                r1.mul(a1, b1) * r2.size + r2.mul(a2, b2)
            }
            Kind::Idealization(m) => {
                let ms = m.size();
                let base = m.ring();
                let (r, x) = (a / ms, a % ms);
                let (s, y) = (b / ms, b % ms);
                base.mul(r, s) * ms + m.add(m.smul(r, y), m.smul(s, x))
            }
        }
    }

    fn eval_neg(&self, a: usize) -> usize {
        match &self.kind {
            Kind::ZMod(n) => (n - a) % n,
            Kind::PolyQuot { p, modulus } => {
                let d = modulus.len() - 1;
                let x: Vec<usize> = digits(a, *p, d).iter().map(|u| (p - u) % p).collect();
                undigits(&x, *p)
            }
            Kind::Product(r1, r2) => r1.neg(a / r2.size) * r2.size + r2.neg(a % r2.size),
            Kind::Idealization(m) => {
                let ms = m.size();
                m.ring().neg(a / ms) * ms + m.neg(a % ms)
            }
        }
    }

    /// Exhaustive scan of the commutative-ring-with-identity axioms.
    pub fn verify_axioms(&self) -> Result<()> {
        if self.size > AXIOM_SCAN_LIMIT {
            return Err(Error::Resource {
                what: "ring size for axiom scan",
                size: self.size,
                limit: AXIOM_SCAN_LIMIT,
            });
        }
        let n = self.size;
        let fail = |what: &str, a: usize, b: usize, c: usize| {
            Err(Error::Internal(format!(
                "{what} fails at ({}, {}, {})",
                self.names[a], self.names[b], self.names[c]
            )))
        };
        for a in 0..n {
            if self.add(a, 0) != a {
                return fail("additive identity", a, 0, 0);
            }
            if self.add(a, self.neg(a)) != 0 {
                return fail("additive inverse", a, 0, 0);
            }
            if self.mul(a, self.one) != a {
                return fail("multiplicative identity", a, self.one, 0);
            }
            for b in 0..n {
                if self.add(a, b) != self.add(b, a) {
                    return fail("additive commutativity", a, b, 0);
                }
                if self.mul(a, b) != self.mul(b, a) {
                    return fail("multiplicative commutativity", a, b, 0);
                }
                for c in 0..n {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return fail("additive associativity", a, b, c);
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return fail("multiplicative associativity", a, b, c);
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return fail("distributivity", a, b, c);
                    }
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn digits(mut i: usize, p: usize, d: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(d);
    for _ in 0..d {
        out.push(i % p);
        i /= p;
    }
    out
}

fn undigits(ds: &[usize], p: usize) -> usize {
    ds.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Renders low-to-high coefficients as `1+x+2x^2`.
pub(crate) fn poly_name(coeffs: &[usize]) -> String {
    let mut terms = Vec::new();
    for (k, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let t = match (k, c) {
            (0, c) => c.to_string(),
            (1, 1) => "x".to_string(),
            (1, c) => format!("{c}x"),
            (k, 1) => format!("x^{k}"),
            (k, c) => format!("{c}x^{k}"),
        };
        terms.push(t);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}
