//! The cyclic group algebra `FH = F[X]/(X^n - 1)`, `H = <u>` of odd order `n`:
//! cyclotomic cosets, the irreducible factors of `X^n - 1`, primitive
//! idempotents and the bar involution `u -> u^{-1}`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{FieldSpec, Sym};
use crate::ntheory::{self, gcd};
use crate::poly::{Poly, PolyRing};

/// Largest `n` accepted by the dense algebra routines.
pub const MAX_N: u64 = 4095;

fn check_params(n: u64, q: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::NTooSmall(n));
    }
    if gcd(n, q) != 1 {
        return Err(Error::NotCoprime { n, q });
    }
    if n.is_multiple_of(2) {
        return Err(Error::EvenN(n));
    }
    if n > MAX_N {
        return Err(Error::UnsupportedDegree(format!("n = {n} exceeds {MAX_N}")));
    }
    Ok(())
}

/// Orbits of `i -> q i (mod n)` on `{0, ..., n-1}`, each sorted, ordered by least element.
pub fn cyclotomic_cosets(n: u64, q: u64) -> Result<Vec<Vec<usize>>> {
    check_params(n, q)?;
    let n = n as usize;
    let qm = (q % n as u64) as usize;
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            orbit.push(i);
            i = i * qm % n;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    Ok(out)
}

/// An element `sum_i c_i u^i` of `FH`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclicElem {
    pub coeffs: Vec<Sym>,
}

impl CyclicElem {
    pub fn zero(n: usize) -> Self {
        CyclicElem { coeffs: vec![0; n] }
    }
    pub fn one(n: usize) -> Self {
        Self::monomial(n, 1, 0)
    }
    /// `c u^k`.
    pub fn monomial(n: usize, c: Sym, k: usize) -> Self {
        let mut coeffs = vec![0; n];
        coeffs[k % n] = c;
        CyclicElem { coeffs }
    }
    pub fn n(&self) -> usize {
        self.coeffs.len()
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
    /// Reduces a polynomial modulo `X^n - 1`.
    pub fn from_poly(n: usize, p: &Poly, f: &FieldSpec) -> Self {
        let mut coeffs = vec![0; n];
        for (i, &c) in p.coeffs().iter().enumerate() {
            coeffs[i % n] = f.add(coeffs[i % n], c);
        }
        CyclicElem { coeffs }
    }
    pub fn to_poly(&self) -> Poly {
        Poly::new(self.coeffs.clone())
    }
}

/// `a + b` in `FH`.
pub fn add(f: &FieldSpec, a: &[Sym], b: &[Sym]) -> Vec<Sym> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

pub fn sub(f: &FieldSpec, a: &[Sym], b: &[Sym]) -> Vec<Sym> {
    a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
}

pub fn scale(f: &FieldSpec, a: &[Sym], c: Sym) -> Vec<Sym> {
    a.iter().map(|&x| f.mul(x, c)).collect()
}

/// Cyclic convolution `a * b` in `FH`.
pub fn convolve(f: &FieldSpec, a: &[Sym], b: &[Sym]) -> Vec<Sym> {
    let n = a.len();
    debug_assert_eq!(n, b.len());
    let mut out = vec![0; n];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y == 0 {
                continue;
            }
            let k = if i + j >= n { i + j - n } else { i + j };
            out[k] = f.add(out[k], f.mul(x, y));
        }
    }
    out
}

/// Coefficient of `u^i` moves to `u^{-i}`.
pub fn bar(a: &[Sym]) -> Vec<Sym> {
    let n = a.len();
    (0..n).map(|i| a[(n - i) % n]).collect()
}

pub fn bar_cyclic(a: &CyclicElem) -> CyclicElem {
    CyclicElem {
        coeffs: bar(&a.coeffs),
    }
}

pub fn mul_cyclic(f: &FieldSpec, a: &CyclicElem, b: &CyclicElem) -> CyclicElem {
    CyclicElem {
        coeffs: convolve(f, &a.coeffs, &b.coeffs),
    }
}

/// Monic irreducible factors of `X^n - 1`, listed in coset order.
///
/// Splitting uses the coset sums `sum_{i in C} X^i`, which span the
/// Berlekamp algebra of `X^n - 1`. Matching factors to cosets fixes the
/// primitive `n`-th root of unity `gamma = X mod f*`, where `f*` is the least
/// (constant term first) factor whose roots have order exactly `n`; factor `j`
/// is then the one vanishing at `gamma^{r_j}` for the least element `r_j` of
/// coset `j`.
pub fn factor_xn_minus_1(n: u64, field: &FieldSpec) -> Result<Vec<Poly>> {
    let q = field.q() as u64;
    let cosets = cyclotomic_cosets(n, q)?;
    let ring = PolyRing::new(field);
    let nn = n as usize;
    let target = ring.x_n_minus_1(nn);

    let mut factors = vec![target.clone()];
    for coset in &cosets {
        if factors.len() == cosets.len() {
            break;
        }
        if coset == &[0] {
            continue;
        }
        let mut sum = vec![0; nn];
        for &i in coset {
            sum[i] = 1;
        }
        let b = Poly::new(sum);
        let mut next = Vec::with_capacity(factors.len());
        for g in factors {
            if g.degree() == Some(1) {
                next.push(g);
                continue;
            }
            let b_mod = ring.rem(&b, &g);
            for c in field.elements() {
                let h = ring.gcd(&g, &ring.sub(&b_mod, &Poly::new(vec![c])));
                if h.degree().unwrap_or(0) >= 1 {
                    next.push(h);
                }
            }
        }
        factors = next;
    }
    if factors.len() != cosets.len() {
        return Err(Error::InvariantViolation(format!(
            "found {} factors for {} cyclotomic cosets",
            factors.len(),
            cosets.len()
        )));
    }

    let d = ntheory::ord_mod(q, n)? as usize;
    let prime_divisors: Vec<u64> = ntheory::factorize(n).into_iter().map(|(p, _)| p).collect();
    let mut primitive: Vec<&Poly> = factors
        .iter()
        .filter(|f| f.degree() == Some(d))
        .filter(|f| {
            prime_divisors
                .iter()
                .all(|&r| ring.pow_mod(&Poly::x(), n / r, f) != Poly::one())
        })
        .collect();
    primitive.sort();
    let gamma_poly = primitive
        .first()
        .ok_or_else(|| Error::InvariantViolation("no factor with primitive roots".into()))?;
    let gamma_poly = (*gamma_poly).clone();

    let mut ordered = Vec::with_capacity(cosets.len());
    for coset in &cosets {
        let root = ring.pow_mod(&Poly::x(), coset[0] as u64, &gamma_poly);
        let hits: Vec<&Poly> = factors
            .iter()
            .filter(|f| f.degree() == Some(coset.len()))
            .filter(|f| eval_in_quotient(&ring, f, &root, &gamma_poly).is_zero())
            .collect();
        if hits.len() != 1 {
            return Err(Error::InvariantViolation(format!(
                "coset {:?} matched {} factors",
                coset,
                hits.len()
            )));
        }
        ordered.push(hits[0].clone());
    }

    let product = ordered.iter().fold(Poly::one(), |acc, f| ring.mul(&acc, f));
    if product != target {
        return Err(Error::InvariantViolation(
            "factor product differs from X^n - 1".into(),
        ));
    }
    Ok(ordered)
}

/// `f(x)` in `F[X]/(m)`.
fn eval_in_quotient(ring: &PolyRing<'_>, f: &Poly, x: &Poly, m: &Poly) -> Poly {
    f.coeffs().iter().rev().fold(Poly::zero(), |acc, &c| {
        ring.add(&ring.mul_mod(&acc, x, m), &Poly::new(vec![c]))
    })
}

/// The primitive idempotents of `FH` with their cosets and bar pairing.
#[derive(Debug, Clone)]
pub struct CyclicDecomposition {
    pub n: usize,
    pub field: Arc<FieldSpec>,
    pub cosets: Vec<Vec<usize>>,
    pub factors: Vec<Poly>,
    /// `e_0, e_1, ..., e_s`; `e_0 = (1/n) sum u^i`.
    pub idempotents: Vec<CyclicElem>,
    /// `bar(e_j) = e_{bar_pairing[j]}`.
    pub bar_pairing: Vec<usize>,
    /// `dim_F(FH e_j)`.
    pub dims: Vec<usize>,
}

pub fn primitive_idempotents(n: u64, field: &Arc<FieldSpec>) -> Result<CyclicDecomposition> {
    let f: &FieldSpec = field;
    let factors = factor_xn_minus_1(n, f)?;
    let cosets = cyclotomic_cosets(n, f.q() as u64)?;
    let ring = PolyRing::new(f);
    let nn = n as usize;
    let target = ring.x_n_minus_1(nn);
    let mut idempotents = Vec::with_capacity(factors.len());
    for fj in &factors {
        let (gj, r) = ring.divrem(&target, fj);
        debug_assert!(r.is_zero());
        let inv = ring
            .inv_mod(&gj, fj)
            .ok_or_else(|| Error::InvariantViolation("cofactor not invertible".into()))?;
        let ej = ring.rem(&ring.mul(&gj, &inv), &target);
        idempotents.push(CyclicElem::from_poly(nn, &ej, f));
    }
    let dims = factors.iter().map(|p| p.degree().unwrap_or(0)).collect();
    let mut dec = CyclicDecomposition {
        n: nn,
        field: Arc::clone(field),
        cosets,
        factors,
        idempotents,
        bar_pairing: Vec::new(),
        dims,
    };
    dec.verify()?;
    dec.bar_pairing = compute_bar_pairing(&dec)?;
    Ok(dec)
}

impl CyclicDecomposition {
    pub fn len(&self) -> usize {
        self.idempotents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idempotents.is_empty()
    }

    /// Completeness, orthogonality, idempotency and the shape of `e_0`.
    pub fn verify(&self) -> Result<()> {
        let f = &*self.field;
        let n = self.n;
        let fail = |m: String| Err(Error::InvariantViolation(m));
        let inv_n = f.inv(f.from_int(n as i64));
        if self.idempotents[0].coeffs.iter().any(|&c| c != inv_n) || self.dims[0] != 1 {
            return fail("e_0 is not (1/n) sum u^i".into());
        }
        let total = self
            .idempotents
            .iter()
            .fold(vec![0; n], |acc, e| add(f, &acc, &e.coeffs));
        if total != CyclicElem::one(n).coeffs {
            return fail("idempotents do not sum to 1".into());
        }
        for (i, ei) in self.idempotents.iter().enumerate() {
            if convolve(f, &ei.coeffs, &ei.coeffs) != ei.coeffs {
                return fail(format!("e_{i} is not idempotent"));
            }
            if self.dims[i] != self.cosets[i].len() {
                return fail(format!("dim of FH e_{i} differs from its coset size"));
            }
            for (j, ej) in self.idempotents.iter().enumerate().skip(i + 1) {
                if convolve(f, &ei.coeffs, &ej.coeffs).iter().any(|&c| c != 0) {
                    return fail(format!("e_{i} e_{j} != 0"));
                }
            }
        }
        Ok(())
    }
}

/// The involution `j -> k` with `bar(e_j) = e_k`, checked against the
/// order-parity and `-1 in <q>` criteria.
pub fn compute_bar_pairing(dec: &CyclicDecomposition) -> Result<Vec<usize>> {
    let mut pairing = Vec::with_capacity(dec.len());
    for (j, e) in dec.idempotents.iter().enumerate() {
        let b = bar_cyclic(e);
        let k = dec
            .idempotents
            .iter()
            .position(|x| *x == b)
            .ok_or_else(|| {
                Error::InvariantViolation(format!("bar(e_{j}) is not a primitive idempotent"))
            })?;
        pairing.push(k);
    }
    if pairing[0] != 0 || (0..pairing.len()).any(|j| pairing[pairing[j]] != j) {
        return Err(Error::InvariantViolation(
            "bar pairing is not an involution fixing 0".into(),
        ));
    }
    let q = dec.field.q() as u64;
    let n = dec.n as u64;
    let ord_odd = ntheory::ord_mod(q, n)? % 2 == 1;
    let minus_one = ntheory::minus_one_in_powers(q, n)?;
    let all_moved = (1..pairing.len()).all(|j| pairing[j] != j);
    let all_fixed = (1..pairing.len()).all(|j| pairing[j] == j);
    if all_moved != ord_odd {
        return Err(Error::CriterionMismatch(format!(
            "n={n} q={q}: all moved = {all_moved}, ord odd = {ord_odd}"
        )));
    }
    if all_fixed != minus_one {
        return Err(Error::CriterionMismatch(format!(
            "n={n} q={q}: all fixed = {all_fixed}, -1 in <q> = {minus_one}"
        )));
    }
    Ok(pairing)
}
