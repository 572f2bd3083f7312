//! Block decomposition `FG = A_0 + A_1 + ... + A_m`.
//!
//! `A_0 = FG e_0` is two-dimensional. Every other block is `FG (e + bar e)`
//! for a cyclic primitive idempotent `e` moved by bar ("split"), or `FG e`
//! for one fixed by bar ("stable"); either way `A_t` is a 2x2 matrix algebra
//! over an extension `F_t` of degree `k_t`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{DihedralAlgebra, DihedralElem};
use crate::cyclic::{self, primitive_idempotents, CyclicDecomposition};
use crate::error::{Error, Result};
use crate::gf::{FieldSpec, Sym};
use crate::linalg::Subspace;
use crate::ntheory;
use crate::poly::{Poly, PolyRing};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockCase {
    /// `1_{A_t} = e + bar(e)`, `bar(e) != e`.
    Split,
    /// `1_{A_t} = e = bar(e)`.
    Stable,
}

#[derive(Debug, Clone)]
pub struct Block {
    /// `t`, starting at 1.
    pub index: usize,
    pub case: BlockCase,
    /// Indices `(j, bar j)` of the cyclic idempotents behind this block.
    pub cyclic: (usize, usize),
    /// The cyclic idempotent `e` embedded in `FG`.
    pub e: DihedralElem,
    pub central_idempotent: DihedralElem,
    pub k: usize,
    pub basis_a: Vec<DihedralElem>,
    pub basis_z: Vec<DihedralElem>,
    pub basis_k: Vec<DihedralElem>,
    pub theta: DihedralElem,
    /// `theta^2 + theta_linear theta + theta_constant = 0`, both coefficients in `Z_t`.
    pub theta_linear: DihedralElem,
    pub theta_constant: DihedralElem,
    pub basis_c: Vec<DihedralElem>,
}

#[derive(Debug, Clone)]
pub struct DihedralDecomposition {
    pub n: usize,
    pub field: Arc<FieldSpec>,
    pub cyclic: CyclicDecomposition,
    pub e0: DihedralElem,
    /// `e_0 + v e_0`.
    pub e0_hat: DihedralElem,
    pub blocks: Vec<Block>,
    pub lambda: u64,
}

fn flat_rows(xs: &[DihedralElem]) -> Vec<Vec<Sym>> {
    xs.iter().map(DihedralElem::flatten).collect()
}

fn span(alg: &DihedralAlgebra, xs: &[DihedralElem]) -> Subspace {
    Subspace::span(&alg.field, 2 * alg.n, &flat_rows(xs))
}

/// An echelon basis for the span of `xs`.
fn independent(alg: &DihedralAlgebra, xs: &[DihedralElem]) -> Vec<DihedralElem> {
    span(alg, xs)
        .basis()
        .to_rows()
        .iter()
        .map(|r| DihedralElem::from_flat(r))
        .collect()
}

/// `GF(q)[X]/(f)` for irreducible `f`, standing in for `FHe`.
struct ResidueField<'a> {
    ring: PolyRing<'a>,
    modulus: Poly,
    degree: usize,
    order: BigUint,
}

impl<'a> ResidueField<'a> {
    fn new(field: &'a FieldSpec, modulus: Poly) -> Self {
        let degree = modulus.degree().unwrap_or(0);
        let order = BigUint::from(field.q()).pow(degree as u32);
        ResidueField {
            ring: PolyRing::new(field),
            modulus,
            degree,
            order,
        }
    }

    /// The `idx`-th element in base-`q` digit order.
    fn element(&self, idx: u64) -> Poly {
        let q = self.ring.field().q() as u64;
        let mut x = idx;
        let digits = (0..self.degree)
            .map(|_| {
                let d = (x % q) as Sym;
                x /= q;
                d
            })
            .collect();
        Poly::new(digits)
    }

    fn size_at_least(&self, k: u64) -> bool {
        self.order >= BigUint::from(k)
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.ring.mul_mod(a, b, &self.modulus)
    }

    /// Whether `Y^2 + b Y + c` has no root, via `gcd(Y^Q - Y, Y^2 + bY + c) = 1`.
    fn quadratic_irreducible(&self, b: &Poly, c: &Poly) -> bool {
        let r = &self.ring;
        // (x0 + x1 Y)(y0 + y1 Y) with Y^2 = -bY - c.
        let mul = |x: &(Poly, Poly), y: &(Poly, Poly)| {
            let t = self.mul(&x.1, &y.1);
            let c0 = r.sub(&self.mul(&x.0, &y.0), &self.mul(c, &t));
            let c1 = r.sub(
                &r.add(&self.mul(&x.0, &y.1), &self.mul(&x.1, &y.0)),
                &self.mul(b, &t),
            );
            (c0, c1)
        };
        let y = (Poly::zero(), Poly::one());
        let mut acc = (Poly::one(), Poly::zero());
        for i in (0..self.order.bits()).rev() {
            acc = mul(&acc, &acc);
            if self.order.bit(i) {
                acc = mul(&acc, &y);
            }
        }
        // Y^Q - Y = a0 + a1 Y
        let a0 = acc.0;
        let a1 = r.sub(&acc.1, &Poly::one());
        if a1.is_zero() {
            return !a0.is_zero();
        }
        let inv = r.inv_mod(&a1, &self.modulus).expect("nonzero in a field");
        let root = r.rem(&r.sub(&Poly::zero(), &self.mul(&a0, &inv)), &self.modulus);
        let value = r.add(&r.add(&self.mul(&root, &root), &self.mul(b, &root)), c);
        !r.rem(&value, &self.modulus).is_zero()
    }
}

/// `s(u) e` for a residue `s`.
fn residue_to_fh(alg: &DihedralAlgebra, s: &Poly, e: &[Sym]) -> Vec<Sym> {
    let sc = cyclic::CyclicElem::from_poly(alg.n, s, &alg.field);
    cyclic::convolve(&alg.field, &sc.coeffs, e)
}

/// Fixes the field `K_t` inside the block and a generator `theta` over `Z_t`.
///
/// Stable blocks use `K_t = FHe` with `theta = ue`, whose minimal polynomial
/// over the bar-fixed subfield is `Y^2 - (ue + bar(ue)) Y + 1`. Split blocks
/// use the isomorphism `M_2(FHe) -> A_t`,
/// `[[a11, a12], [a21, a22]] -> a11 e + v a21 e + v bar(a12) + bar(a22)`,
/// and take `theta` to be the image of the companion matrix of the first
/// irreducible `Y^2 + bY + c` over `FHe` in a fixed scan order.
pub fn build_embedded_field(
    block: &mut Block,
    alg: &DihedralAlgebra,
    cyc: &CyclicDecomposition,
) -> Result<()> {
    let n = alg.n;
    let f = &*alg.field;
    let e = block.e.h.clone();
    let one_a = block.central_idempotent.clone();
    match block.case {
        BlockCase::Stable => {
            let ue = cyclic::convolve(f, &cyclic::CyclicElem::monomial(n, 1, 1).coeffs, &e);
            let theta = DihedralElem::from_cyclic(&ue);
            let trace = cyclic::add(f, &ue, &cyclic::bar(&ue));
            block.theta_linear = DihedralElem::from_cyclic(&cyclic::scale(f, &trace, f.neg(1)));
            block.theta_constant = one_a.clone();
            block.basis_k = (0..2 * block.k)
                .map(|i| {
                    DihedralElem::from_cyclic(&cyclic::convolve(
                        f,
                        &cyclic::CyclicElem::monomial(n, 1, i).coeffs,
                        &e,
                    ))
                })
                .collect();
            block.theta = theta;
        }
        BlockCase::Split => {
            let field = ResidueField::new(f, cyc.factors[block.cyclic.0].clone());
            const SCAN_BUDGET: u64 = 10_000;
            let mut found = None;
            'scan: for idx in 1..SCAN_BUDGET {
                if !field.size_at_least(idx + 1) {
                    break;
                }
                let c = field.element(idx);
                for b in [Poly::zero(), Poly::one()] {
                    if field.quadratic_irreducible(&b, &c) {
                        found = Some((b, c));
                        break 'scan;
                    }
                }
            }
            let (b, c) = found
                .ok_or_else(|| Error::FieldNotFound(format!("block {} of n = {n}", block.index)))?;
            let b_e = residue_to_fh(alg, &b, &e);
            let c_e = residue_to_fh(alg, &c, &e);
            // Companion matrix [[0, -c], [1, -b]].
            let theta = DihedralElem {
                h: cyclic::bar(&cyclic::scale(f, &b_e, f.neg(1))),
                vh: cyclic::add(f, &e, &cyclic::bar(&cyclic::scale(f, &c_e, f.neg(1)))),
            };
            block.theta_linear =
                DihedralElem::from_cyclic(&cyclic::add(f, &b_e, &cyclic::bar(&b_e)));
            block.theta_constant =
                DihedralElem::from_cyclic(&cyclic::add(f, &c_e, &cyclic::bar(&c_e)));
            let mut gens = block.basis_z.clone();
            gens.extend(block.basis_z.iter().map(|z| alg.mul(z, &theta)));
            block.basis_k = independent(alg, &gens);
            block.theta = theta;
        }
    }
    verify_embedded_field(block, alg)
}

fn verify_embedded_field(block: &Block, alg: &DihedralAlgebra) -> Result<()> {
    let f = &*alg.field;
    let fail = |m: &str| {
        Err(Error::InvariantViolation(format!(
            "block {}: {m}",
            block.index
        )))
    };
    let z = span(alg, &block.basis_z);
    if z.contains(f, &block.theta.flatten()) {
        return fail("theta lies in the center");
    }
    for coef in [&block.theta_linear, &block.theta_constant] {
        if !z.contains(f, &coef.flatten()) {
            return fail("minimal polynomial coefficient outside the center");
        }
    }
    let t2 = alg.mul(&block.theta, &block.theta);
    let lhs = alg.add(
        &alg.add(&t2, &alg.mul(&block.theta_linear, &block.theta)),
        &block.theta_constant,
    );
    if !lhs.is_zero() {
        return fail("theta does not satisfy its quadratic");
    }
    if block.basis_k.len() != 2 * block.k || span(alg, &block.basis_k).dim() != 2 * block.k {
        return fail("dim K_t != 2 k_t");
    }
    Ok(())
}

/// `C_t = A_t e` (split) or `C_t = A_t (e - v e)` (stable).
pub fn build_simple_ideal(block: &mut Block, alg: &DihedralAlgebra) -> Result<()> {
    let n = alg.n;
    let generator = match block.case {
        BlockCase::Split => block.e.clone(),
        BlockCase::Stable => alg.sub(&block.e, &alg.mul(&DihedralElem::v(n), &block.e)),
    };
    let products: Vec<DihedralElem> = block
        .basis_a
        .iter()
        .map(|a| alg.mul(a, &generator))
        .collect();
    let basis = independent(alg, &products);
    if basis.len() != 2 * block.k {
        return Err(Error::DimensionMismatch(format!(
            "block {}: dim C_t = {}, expected {}",
            block.index,
            basis.len(),
            2 * block.k
        )));
    }
    let s = span(alg, &basis);
    let gens = [DihedralElem::u_pow(n, 1), DihedralElem::v(n)];
    for c in &basis {
        for g in &gens {
            if !s.contains(&alg.field, &alg.mul(g, c).flatten()) {
                return Err(Error::InvariantViolation(format!(
                    "block {}: C_t is not a left ideal",
                    block.index
                )));
            }
        }
    }
    block.basis_c = basis;
    Ok(())
}

fn new_block(
    index: usize,
    case: BlockCase,
    j: usize,
    jbar: usize,
    alg: &DihedralAlgebra,
    cyc: &CyclicDecomposition,
) -> Result<Block> {
    let n = alg.n;
    let f = &*alg.field;
    let e = &cyc.idempotents[j].coeffs;
    let ebar = &cyc.idempotents[jbar].coeffs;
    let dim_fhe = cyc.dims[j];
    let (k, one) = match case {
        BlockCase::Split => (dim_fhe, cyclic::add(f, e, ebar)),
        BlockCase::Stable => {
            if !dim_fhe.is_multiple_of(2) {
                return Err(Error::InvariantViolation(format!(
                    "bar-fixed idempotent e_{j} has odd dimension {dim_fhe}"
                )));
            }
            (dim_fhe / 2, e.clone())
        }
    };
    let ue =
        |i: usize, x: &[Sym]| cyclic::convolve(f, &cyclic::CyclicElem::monomial(n, 1, i).coeffs, x);
    let v = DihedralElem::v(n);
    let mut basis_a = Vec::with_capacity(4 * k);
    let mut fhe = Vec::with_capacity(dim_fhe);
    for i in 0..dim_fhe {
        let x = DihedralElem::from_cyclic(&ue(i, e));
        fhe.push(x.clone());
        basis_a.push(alg.mul(&v, &x));
        basis_a.push(x);
        if case == BlockCase::Split {
            let y = DihedralElem::from_cyclic(&ue(i, ebar));
            basis_a.push(alg.mul(&v, &y));
            basis_a.push(y);
        }
    }
    let traces: Vec<DihedralElem> = fhe.iter().map(|x| alg.add(x, &alg.bar(x))).collect();
    let basis_z = independent(alg, &traces);
    let n_block = DihedralElem::zero(n);
    Ok(Block {
        index,
        case,
        cyclic: (j, jbar),
        e: DihedralElem::from_cyclic(e),
        central_idempotent: DihedralElem::from_cyclic(&one),
        k,
        basis_a,
        basis_z,
        basis_k: Vec::new(),
        theta: n_block.clone(),
        theta_linear: n_block.clone(),
        theta_constant: n_block,
        basis_c: Vec::new(),
    })
}

/// Full decomposition of `FG`, with every structural invariant checked before return.
pub fn decompose(n: u64, field: &Arc<FieldSpec>) -> Result<DihedralDecomposition> {
    let cyc = primitive_idempotents(n, field)?;
    let lambda = ntheory::lambda_n(n, field.q() as u64)?;
    let nn = n as usize;
    let alg = DihedralAlgebra::new(nn, Arc::clone(field));
    let e0 = DihedralElem::from_cyclic(&cyc.idempotents[0].coeffs);
    let e0_hat = alg.add(&e0, &alg.mul(&DihedralElem::v(nn), &e0));
    let mut blocks = Vec::new();
    for j in 1..cyc.len() {
        let jbar = cyc.bar_pairing[j];
        let case = match jbar.cmp(&j) {
            std::cmp::Ordering::Less => continue,
            std::cmp::Ordering::Equal => BlockCase::Stable,
            std::cmp::Ordering::Greater => BlockCase::Split,
        };
        let mut block = new_block(blocks.len() + 1, case, j, jbar, &alg, &cyc)?;
        build_embedded_field(&mut block, &alg, &cyc)?;
        build_simple_ideal(&mut block, &alg)?;
        blocks.push(block);
    }
    let dec = DihedralDecomposition {
        n: nn,
        field: Arc::clone(field),
        cyclic: cyc,
        e0,
        e0_hat,
        blocks,
        lambda,
    };
    dec.verify()?;
    Ok(dec)
}

impl DihedralDecomposition {
    pub fn algebra(&self) -> DihedralAlgebra {
        DihedralAlgebra::new(self.n, Arc::clone(&self.field))
    }

    pub fn m(&self) -> usize {
        self.blocks.len()
    }

    pub fn k_values(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.k).collect()
    }

    /// Basis of `A_0 = FG e_0`.
    pub fn basis_a0(&self) -> Vec<DihedralElem> {
        let alg = self.algebra();
        vec![self.e0.clone(), alg.mul(&DihedralElem::v(self.n), &self.e0)]
    }

    /// Checks every structural invariant of the decomposition.
    pub fn verify(&self) -> Result<()> {
        let alg = self.algebra();
        let f = &*self.field;
        let n = self.n;
        let fail = |m: String| Err(Error::InvariantViolation(m));

        let mut total = self.e0.clone();
        for b in &self.blocks {
            total = alg.add(&total, &b.central_idempotent);
        }
        if total != DihedralElem::one(n) {
            return fail("block identities do not sum to 1".into());
        }
        let mut idems = vec![&self.e0];
        idems.extend(self.blocks.iter().map(|b| &b.central_idempotent));
        for (i, a) in idems.iter().enumerate() {
            if alg.mul(a, a) != **a || !alg.is_central(a) {
                return fail(format!("block {i} identity is not a central idempotent"));
            }
            if alg.bar(a) != **a {
                return fail(format!("block {i} identity is not bar-invariant"));
            }
            for b in idems.iter().skip(i + 1) {
                if !alg.mul(a, b).is_zero() {
                    return fail(format!(
                        "block {i} identity does not annihilate a later block"
                    ));
                }
            }
        }
        let ksum: usize = self.blocks.iter().map(|b| b.k).sum();
        if 2 * ksum != n - 1 {
            return fail(format!("sum k_t = {ksum} != (n-1)/2"));
        }
        for b in &self.blocks {
            if (2 * b.k as u64) < self.lambda {
                return fail(format!("block {}: 2k_t < lambda(n)", b.index));
            }
            let dim_fhe = self.cyclic.dims[b.cyclic.0];
            let expected = match b.case {
                BlockCase::Split => dim_fhe,
                BlockCase::Stable => dim_fhe / 2,
            };
            if b.k != expected {
                return fail(format!("block {}: k_t inconsistent with dim FHe", b.index));
            }
            let checks = [
                (span(&alg, &b.basis_a).dim(), 4 * b.k, "A_t"),
                (span(&alg, &b.basis_z).dim(), b.k, "Z_t"),
                (span(&alg, &b.basis_k).dim(), 2 * b.k, "K_t"),
                (span(&alg, &b.basis_c).dim(), 2 * b.k, "C_t"),
            ];
            for (got, want, name) in checks {
                if got != want {
                    return Err(Error::DimensionMismatch(format!(
                        "block {}: dim {name} = {got}, expected {want}",
                        b.index
                    )));
                }
            }
            for z in &b.basis_z {
                if !alg.is_central(z) {
                    return fail(format!("block {}: Z_t element not central", b.index));
                }
            }
        }
        let e0h2 = alg.mul(&self.e0_hat, &self.e0_hat);
        let two = alg.scale(&self.e0_hat, f.from_int(2));
        if e0h2 != two || alg.mul(&self.e0_hat, &alg.bar(&self.e0_hat)) != two {
            return fail("e0_hat^2 != 2 e0_hat".into());
        }
        self.verify_block_orthogonality()
    }

    /// `<A_j, A_j'> = 0` for distinct blocks, over all pairs of basis vectors.
    pub fn verify_block_orthogonality(&self) -> Result<()> {
        let alg = self.algebra();
        let mut bases = vec![self.basis_a0()];
        bases.extend(self.blocks.iter().map(|b| b.basis_a.clone()));
        for (i, bi) in bases.iter().enumerate() {
            for (j, bj) in bases.iter().enumerate().skip(i + 1) {
                for x in bi {
                    for y in bj {
                        if alg.inner(x, y) != 0 {
                            return Err(Error::InvariantViolation(format!("<A_{i}, A_{j}> != 0")));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Decompositions keyed by `(n, p, e)`, shared within a process.
#[derive(Default)]
pub struct DecompositionCache {
    inner: Mutex<HashMap<(u64, u32, u32), Arc<DihedralDecomposition>>>,
}

impl DecompositionCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, n: u64, field: &Arc<FieldSpec>) -> Result<Arc<DihedralDecomposition>> {
        let key = (n, field.p(), field.e());
        if let Some(d) = self.inner.lock().expect("cache poisoned").get(&key) {
            return Ok(Arc::clone(d));
        }
        let d = Arc::new(decompose(n, field)?);
        self.inner
            .lock()
            .expect("cache poisoned")
            .insert(key, Arc::clone(&d));
        Ok(d)
    }
}
