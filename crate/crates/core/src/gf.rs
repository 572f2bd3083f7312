//! Finite fields `GF(p^e)`.
//!
//! Elements are stored as a single `u32` symbol: the coefficient vector
//! `(c_0, ..., c_{e-1})` of the residue `c_0 + c_1 w + ... + c_{e-1} w^{e-1}`
//! packed in base `p`, where `w` is the class of `X` modulo the field modulus.
//! All bulk arithmetic in the crate goes through [`FieldSpec`] on these raw
//! symbols. [`FieldElem`] is the checked, owner-carrying wrapper used at API
//! boundaries.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{Poly, PolyRing};

/// Largest supported field order. Multiplication uses log/antilog tables.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

/// Symbol type for field elements inside matrices and algebra elements.
pub type Sym = u32;

#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    /// Antilog table of length `2(q-1)`; empty for prime fields.
    exp: Vec<u32>,
    log: Vec<u32>,
    /// Dense addition table, only for small extension fields.
    add_tab: Vec<u32>,
    neg_tab: Vec<u32>,
    /// `p^i` for `i < e`.
    place: Vec<u32>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    crate::ntheory::is_prime(n)
}

/// Builds `GF(p^e)` with the lexicographically smallest monic irreducible modulus.
pub fn make_field(p: u64, e: u32) -> Result<Arc<FieldSpec>> {
    FieldSpec::new(p, e).map(Arc::new)
}

/// Splits a field order written as `q` or `p^e` into `(p, e)`.
pub fn parse_order(s: &str) -> Result<(u64, u32)> {
    let bad = || Error::Parse(format!("bad field order '{s}'"));
    let (p, e) = match s.trim().split_once('^') {
        Some((p, e)) => {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let e: u32 = e.trim().parse().map_err(|_| bad())?;
            if !is_prime_u64(p) {
                return Err(Error::CompositeP(p));
            }
            (p, e)
        }
        None => {
            let q: u64 = s.trim().parse().map_err(|_| bad())?;
            prime_power(q)?
        }
    };
    if e == 0 {
        return Err(Error::DegreeZero);
    }
    Ok((p, e))
}

/// `(p, e)` with `q = p^e`.
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::CompositeP(q));
    }
    let factors = crate::ntheory::factorize(q);
    match factors.as_slice() {
        [(p, e)] => Ok((*p, *e)),
        _ => Err(Error::CompositeP(q)),
    }
}

/// `GF(q)` from the order alone.
pub fn field_of_order(q: u64) -> Result<Arc<FieldSpec>> {
    let (p, e) = prime_power(q)?;
    make_field(p, e)
}

impl FieldSpec {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::CompositeP(p));
        }
        if e < 1 {
            return Err(Error::DegreeZero);
        }
        let q = (p as u128).checked_pow(e).unwrap_or(u128::MAX);
        if q > MAX_FIELD_ORDER as u128 {
            return Err(Error::FieldTooLarge(q.min(u64::MAX as u128) as u64));
        }
        let prime = Self::prime(p as u32);
        if e == 1 {
            return Ok(prime);
        }
        let modulus = smallest_irreducible(&prime, e as usize);
        Ok(Self::extension(p as u32, e, modulus))
    }

    fn prime(p: u32) -> Self {
        let neg_tab = (0..p).map(|a| (p - a) % p).collect();
        FieldSpec {
            p,
            e: 1,
            q: p,
            modulus: vec![0, 1],
            exp: Vec::new(),
            log: Vec::new(),
            add_tab: Vec::new(),
            neg_tab,
            place: vec![1],
        }
    }

    fn extension(p: u32, e: u32, modulus: Vec<u32>) -> Self {
        let q = p.pow(e);
        let place: Vec<u32> = (0..e).map(|i| p.pow(i)).collect();
        let mut f = FieldSpec {
            p,
            e,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            add_tab: Vec::new(),
            neg_tab: Vec::new(),
            place,
        };
        f.neg_tab = (0..q).map(|a| f.neg_digits(a)).collect();
        if q <= 256 {
            let mut tab = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    tab[(a * q + b) as usize] = f.add_digits(a, b);
                }
            }
            f.add_tab = tab;
        }
        // Find a generator of the multiplicative group and build the tables.
        let order = (q - 1) as usize;
        for g in 2..q {
            let mut exp = Vec::with_capacity(2 * order);
            let mut x = 1u32;
            let mut ok = true;
            for i in 0..order {
                if i > 0 && x == 1 {
                    ok = false;
                    break;
                }
                exp.push(x);
                x = f.mul_slow(x, g);
            }
            if !ok || x != 1 {
                continue;
            }
            let mut log = vec![0u32; q as usize];
            for (i, &v) in exp.iter().enumerate() {
                log[v as usize] = i as u32;
            }
            let head = exp.clone();
            exp.extend_from_slice(&head);
            f.exp = exp;
            f.log = log;
            return f;
        }
        unreachable!("multiplicative group of a finite field is cyclic")
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Monic modulus, low degree first. `[0, 1]` (the placeholder `X`) for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn is_prime_field(&self) -> bool {
        self.e == 1
    }

    pub fn digits(&self, a: Sym) -> Vec<u32> {
        let mut a = a;
        (0..self.e)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Sym {
        digits
            .iter()
            .zip(&self.place)
            .map(|(&d, &pl)| (d % self.p) * pl)
            .sum()
    }

    fn add_digits(&self, a: Sym, b: Sym) -> Sym {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for &pl in &self.place {
            out += ((a % self.p + b % self.p) % self.p) * pl;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    fn neg_digits(&self, a: Sym) -> Sym {
        let mut a = a;
        let mut out = 0;
        for &pl in &self.place {
            out += ((self.p - a % self.p) % self.p) * pl;
            a /= self.p;
        }
        out
    }

    /// Schoolbook product modulo the modulus; used only to build the tables.
    fn mul_slow(&self, a: Sym, b: Sym) -> Sym {
        let p = self.p as u64;
        let e = self.e as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * e - 1];
        for i in 0..e {
            for j in 0..e {
                prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p;
            }
        }
        for k in (e..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for i in 0..e {
                prod[k - e + i] = (prod[k - e + i] + (p - c) * self.modulus[i] as u64) % p;
            }
            prod[k] = 0;
        }
        let digits: Vec<u32> = prod[..e].iter().map(|&c| c as u32).collect();
        self.from_digits(&digits)
    }

    #[inline]
    pub fn add(&self, a: Sym, b: Sym) -> Sym {
        if self.e == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else if self.p == 2 {
            a ^ b
        } else if !self.add_tab.is_empty() {
            self.add_tab[(a * self.q + b) as usize]
        } else {
            self.add_digits(a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: Sym) -> Sym {
        self.neg_tab[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Sym, b: Sym) -> Sym {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Sym, b: Sym) -> Sym {
        if self.e == 1 {
            ((a as u64 * b as u64) % self.p as u64) as u32
        } else if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    /// Multiplicative inverse. Panics on zero; use [`FieldElem::inv`] for a checked version.
    #[inline]
    pub fn inv(&self, a: Sym) -> Sym {
        assert!(a != 0, "inverse of zero");
        if self.e == 1 {
            let (g, x, _) = ext_gcd_i64(a as i64, self.p as i64);
            debug_assert_eq!(g, 1);
            x.rem_euclid(self.p as i64) as u32
        } else {
            let l = self.log[a as usize];
            self.exp[((self.q - 1 - l) % (self.q - 1)) as usize]
        }
    }

    pub fn div(&self, a: Sym, b: Sym) -> Sym {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Sym, k: u64) -> Sym {
        let mut base = a;
        let mut k = k;
        let mut acc = 1;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, i: i64) -> Sym {
        i.rem_euclid(self.p as i64) as u32
    }

    /// The residue `w` of `X`; equals `0` in a prime field placeholder sense.
    pub fn generator_w(&self) -> Sym {
        if self.e == 1 {
            0
        } else {
            self.p
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Sym> {
        0..self.q
    }

    /// Renders a symbol: decimal for prime fields, otherwise the nonzero terms
    /// of `c0+c1*w+c2*w^2+...`, or `0`.
    pub fn format(&self, a: Sym) -> String {
        if self.e == 1 || a == 0 {
            return a.to_string();
        }
        self.digits(a)
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("{c}*w"),
                _ => format!("{c}*w^{i}"),
            })
            .collect::<Vec<_>>()
            .join("+")
    }

    /// Parses the format produced by [`FieldSpec::format`]. Terms may be omitted
    /// or reordered, and a bare `w^i` means coefficient one.
    pub fn parse(&self, s: &str) -> Result<Sym> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad field element '{s}'"));
        if self.e == 1 {
            let v: i64 = s.parse().map_err(|_| bad())?;
            if v < 0 || v >= self.p as i64 {
                return Err(bad());
            }
            return Ok(v as u32);
        }
        let mut digits = vec![0u32; self.e as usize];
        for term in s.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(bad());
            }
            let (coef, power) = match term.split_once('*') {
                Some((c, w)) => (c.trim().parse::<u32>().map_err(|_| bad())?, parse_w(w)?),
                None if term.starts_with('w') => (1, parse_w(term)?),
                None => (term.parse::<u32>().map_err(|_| bad())?, 0),
            };
            if coef >= self.p || power >= self.e as usize {
                return Err(bad());
            }
            digits[power] = (digits[power] + coef) % self.p;
        }
        Ok(self.from_digits(&digits))
    }

    pub fn elem(self: &Arc<Self>, a: Sym) -> FieldElem {
        FieldElem {
            field: Arc::clone(self),
            repr: a % self.q,
        }
    }
}

fn parse_w(w: &str) -> Result<usize> {
    let w = w.trim();
    let bad = || Error::Parse(format!("bad power of w '{w}'"));
    match w.strip_prefix('w') {
        Some("") => Ok(1),
        Some(rest) => rest
            .strip_prefix('^')
            .ok_or_else(bad)?
            .parse()
            .map_err(|_| bad()),
        None => Err(bad()),
    }
}

pub(crate) fn ext_gcd_i64(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd_i64(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Lexicographically smallest monic irreducible of degree `e` over the prime
/// field, comparing coefficients from the constant term upward.
fn smallest_irreducible(prime: &FieldSpec, e: usize) -> Vec<u32> {
    let p = prime.p();
    let ring = PolyRing::new(prime);
    let total = (p as u64).pow(e as u32);
    for idx in 0..total {
        // idx enumerates (c0, ..., c_{e-1}) with c0 most significant.
        let mut coeffs = vec![0u32; e + 1];
        let mut x = idx;
        for i in (0..e).rev() {
            coeffs[i] = (x % p as u64) as u32;
            x /= p as u64;
        }
        coeffs[e] = 1;
        let f = Poly::new(coeffs.clone());
        if ring.is_irreducible(&f) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// An element tagged with the field it lives in.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElem {
    field: Arc<FieldSpec>,
    repr: Sym,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format(self.repr))
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format(self.repr))
    }
}

impl FieldElem {
    pub fn from_coeffs(field: &Arc<FieldSpec>, coeffs: &[u32]) -> Result<Self> {
        if coeffs.len() != field.e() as usize || coeffs.iter().any(|&c| c >= field.p()) {
            return Err(Error::Parse(format!(
                "invalid coefficient vector {coeffs:?}"
            )));
        }
        Ok(field.elem(field.from_digits(coeffs)))
    }

    pub fn parse(field: &Arc<FieldSpec>, s: &str) -> Result<Self> {
        Ok(field.elem(field.parse(s)?))
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }
    pub fn repr(&self) -> Sym {
        self.repr
    }
    pub fn coeffs(&self) -> Vec<u32> {
        self.field.digits(self.repr)
    }
    pub fn is_zero(&self) -> bool {
        self.repr == 0
    }

    fn check(&self, other: &FieldElem) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.field.elem(self.field.add(self.repr, other.repr)))
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.field.elem(self.field.sub(self.repr, other.repr)))
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.field.elem(self.field.mul(self.repr, other.repr)))
    }

    pub fn neg(&self) -> FieldElem {
        self.field.elem(self.field.neg(self.repr))
    }

    pub fn pow(&self, k: u64) -> FieldElem {
        self.field.elem(self.field.pow(self.repr, k))
    }

    /// Inverse by the extended Euclidean algorithm against the modulus.
    pub fn inv(&self) -> Result<FieldElem> {
        if self.repr == 0 {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        if f.is_prime_field() {
            let (_, x, _) = ext_gcd_i64(self.repr as i64, f.p() as i64);
            return Ok(f.elem(x.rem_euclid(f.p() as i64) as u32));
        }
        let prime = FieldSpec::prime(f.p());
        let ring = PolyRing::new(&prime);
        let a = Poly::new(self.coeffs());
        let m = Poly::new(f.modulus().to_vec());
        let inv = ring.inv_mod(&a, &m).ok_or(Error::InvariantViolation(
            "element not coprime to modulus".into(),
        ))?;
        let mut digits = inv.coeffs().to_vec();
        digits.resize(f.e() as usize, 0);
        Ok(f.elem(f.from_digits(&digits)))
    }
}
