//! Dense univariate polynomials over a [`FieldSpec`].

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::gf::{FieldSpec, Sym};

/// Coefficients low degree first, with no trailing zeros. The zero polynomial is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Poly {
    coeffs: Vec<Sym>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Sym>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }
    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }
    pub fn x() -> Self {
        Poly { coeffs: vec![0, 1] }
    }
    pub fn monomial(c: Sym, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Poly::new(v)
    }
    pub fn coeffs(&self) -> &[Sym] {
        &self.coeffs
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
    pub fn lead(&self) -> Sym {
        self.coeffs.last().copied().unwrap_or(0)
    }
    pub fn coeff(&self, i: usize) -> Sym {
        self.coeffs.get(i).copied().unwrap_or(0)
    }
    /// Coefficient vector padded with zeros to length `len`.
    pub fn padded(&self, len: usize) -> Vec<Sym> {
        let mut v = self.coeffs.clone();
        v.resize(len.max(v.len()), 0);
        v
    }
}

/// Arithmetic context for polynomials over one field.
#[derive(Clone, Copy)]
pub struct PolyRing<'a> {
    field: &'a FieldSpec,
}

impl<'a> PolyRing<'a> {
    pub fn new(field: &'a FieldSpec) -> Self {
        PolyRing { field }
    }

    pub fn field(&self) -> &'a FieldSpec {
        self.field
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.coeffs.len().max(b.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| self.field.add(a.coeff(i), b.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.coeffs.len().max(b.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| self.field.sub(a.coeff(i), b.coeff(i)))
                .collect(),
        )
    }

    pub fn scale(&self, a: &Poly, c: Sym) -> Poly {
        Poly::new(a.coeffs.iter().map(|&x| self.field.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let f = self.field;
        let mut out = vec![0; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        Poly::new(out)
    }

    pub fn monic(&self, a: &Poly) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        self.scale(a, self.field.inv(a.lead()))
    }

    /// Quotient and remainder. Panics if `b` is zero.
    pub fn divrem(&self, a: &Poly, b: &Poly) -> (Poly, Poly) {
        let db = b.degree().expect("division by the zero polynomial");
        let f = self.field;
        let mut r = a.coeffs.clone();
        if r.len() <= db {
            return (Poly::zero(), a.clone());
        }
        let inv_lead = f.inv(b.lead());
        let mut quot = vec![0; r.len() - db];
        for k in (db..r.len()).rev() {
            let c = r[k];
            if c == 0 {
                continue;
            }
            let t = f.mul(c, inv_lead);
            quot[k - db] = t;
            for (i, &bc) in b.coeffs.iter().enumerate() {
                r[k - db + i] = f.sub(r[k - db + i], f.mul(t, bc));
            }
        }
        r.truncate(db);
        (Poly::new(quot), Poly::new(r))
    }

    pub fn rem(&self, a: &Poly, b: &Poly) -> Poly {
        self.divrem(a, b).1
    }

    /// Monic gcd.
    pub fn gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// Returns `(g, s, t)` with `s a + t b = g`, `g` monic.
    pub fn ext_gcd(&self, a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (qt, r) = self.divrem(&r0, &r1);
            let s = self.sub(&s0, &self.mul(&qt, &s1));
            let t = self.sub(&t0, &self.mul(&qt, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let c = self.field.inv(r0.lead());
        (self.scale(&r0, c), self.scale(&s0, c), self.scale(&t0, c))
    }

    /// Inverse of `a` modulo `m`, if it exists.
    pub fn inv_mod(&self, a: &Poly, m: &Poly) -> Option<Poly> {
        let (g, s, _) = self.ext_gcd(&self.rem(a, m), m);
        (g == Poly::one()).then(|| self.rem(&s, m))
    }

    pub fn mul_mod(&self, a: &Poly, b: &Poly, m: &Poly) -> Poly {
        self.rem(&self.mul(a, b), m)
    }

    pub fn pow_mod(&self, a: &Poly, k: u64, m: &Poly) -> Poly {
        let mut base = self.rem(a, m);
        let mut acc = self.rem(&Poly::one(), m);
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_mod(&acc, &base, m);
            }
            base = self.mul_mod(&base, &base, m);
            k >>= 1;
        }
        acc
    }

    pub fn pow_mod_big(&self, a: &Poly, k: &BigUint, m: &Poly) -> Poly {
        let mut acc = self.rem(&Poly::one(), m);
        let base = self.rem(a, m);
        for i in (0..k.bits()).rev() {
            acc = self.mul_mod(&acc, &acc, m);
            if k.bit(i) {
                acc = self.mul_mod(&acc, &base, m);
            }
        }
        acc
    }

    pub fn eval(&self, a: &Poly, x: Sym) -> Sym {
        a.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.field.add(self.field.mul(acc, x), c))
    }

    /// Ben-Or test: no factor of degree at most `deg/2`.
    pub fn is_irreducible(&self, f: &Poly) -> bool {
        let Some(d) = f.degree() else { return false };
        if d == 0 {
            return false;
        }
        let q = self.field.q() as u64;
        let x = Poly::x();
        let mut h = self.rem(&x, f);
        for _ in 0..d / 2 {
            h = self.pow_mod(&h, q, f);
            let g = self.gcd(&self.sub(&h, &x), f);
            if g != Poly::one() {
                return false;
            }
        }
        true
    }

    /// `X^n - 1`.
    pub fn x_n_minus_1(&self, n: usize) -> Poly {
        let mut v = vec![0; n + 1];
        v[0] = self.field.neg(1);
        v[n] = 1;
        Poly::new(v)
    }
}
