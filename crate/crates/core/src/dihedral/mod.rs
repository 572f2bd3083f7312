//! The dihedral group algebra `FG`, `G = <u, v | u^n = 1 = v^2, v u v^{-1} = u^{-1}>`.
//!
//! An element is stored as two cyclic halves, `a = a_h + v a_v` with
//! `a_h, a_v in FH`. As a codeword it flattens to
//! `(a_h[0], ..., a_h[n-1], a_v[0], ..., a_v[n-1])`, i.e. the coefficients of
//! `u^0, ..., u^{n-1}, v u^0, ..., v u^{n-1}` in that order.

mod codes;
mod decompose;
pub mod m2;

pub use codes::{
    code_c, code_hat_c, ell_c, enumerate_submodules, right_translate_code, sample_unit,
    support_blocks, Submodule, MAX_SUBMODULE_BLOCKS,
};
pub use decompose::{
    build_embedded_field, build_simple_ideal, decompose, Block, BlockCase, DecompositionCache,
    DihedralDecomposition,
};

use std::sync::Arc;

use crate::cyclic;
use crate::error::{Error, Result};
use crate::gf::{FieldSpec, Sym};
use crate::linalg;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DihedralElem {
    /// Coefficients of `u^i`.
    pub h: Vec<Sym>,
    /// Coefficients of `v u^i`.
    pub vh: Vec<Sym>,
}

impl DihedralElem {
    pub fn zero(n: usize) -> Self {
        DihedralElem {
            h: vec![0; n],
            vh: vec![0; n],
        }
    }
    pub fn one(n: usize) -> Self {
        Self::u_pow(n, 0)
    }
    /// `u^i`.
    pub fn u_pow(n: usize, i: usize) -> Self {
        let mut a = Self::zero(n);
        a.h[i % n] = 1;
        a
    }
    /// `v u^i`.
    pub fn v_u_pow(n: usize, i: usize) -> Self {
        let mut a = Self::zero(n);
        a.vh[i % n] = 1;
        a
    }
    pub fn v(n: usize) -> Self {
        Self::v_u_pow(n, 0)
    }
    /// Embeds `a in FH`.
    pub fn from_cyclic(h: &[Sym]) -> Self {
        DihedralElem {
            h: h.to_vec(),
            vh: vec![0; h.len()],
        }
    }
    pub fn n(&self) -> usize {
        self.h.len()
    }
    pub fn is_zero(&self) -> bool {
        self.h.iter().chain(&self.vh).all(|&c| c == 0)
    }
    pub fn flatten(&self) -> Vec<Sym> {
        let mut out = self.h.clone();
        out.extend_from_slice(&self.vh);
        out
    }
    /// Inverse of [`DihedralElem::flatten`]. Panics on odd length.
    pub fn from_flat(word: &[Sym]) -> Self {
        assert!(word.len().is_multiple_of(2), "dihedral words have even length");
        let n = word.len() / 2;
        DihedralElem {
            h: word[..n].to_vec(),
            vh: word[n..].to_vec(),
        }
    }
}

/// Arithmetic context for `FG` over a fixed field and `n`.
#[derive(Debug, Clone)]
pub struct DihedralAlgebra {
    pub n: usize,
    pub field: Arc<FieldSpec>,
}

impl DihedralAlgebra {
    pub fn new(n: usize, field: Arc<FieldSpec>) -> Self {
        DihedralAlgebra { n, field }
    }

    fn f(&self) -> &FieldSpec {
        &self.field
    }

    pub fn add(&self, a: &DihedralElem, b: &DihedralElem) -> DihedralElem {
        DihedralElem {
            h: cyclic::add(self.f(), &a.h, &b.h),
            vh: cyclic::add(self.f(), &a.vh, &b.vh),
        }
    }

    pub fn sub(&self, a: &DihedralElem, b: &DihedralElem) -> DihedralElem {
        DihedralElem {
            h: cyclic::sub(self.f(), &a.h, &b.h),
            vh: cyclic::sub(self.f(), &a.vh, &b.vh),
        }
    }

    pub fn scale(&self, a: &DihedralElem, c: Sym) -> DihedralElem {
        DihedralElem {
            h: cyclic::scale(self.f(), &a.h, c),
            vh: cyclic::scale(self.f(), &a.vh, c),
        }
    }

    /// `(a_h + v a_v)(b_h + v b_v) = (a_h b_h + bar(a_v) b_v) + v (bar(a_h) b_v + a_v b_h)`,
    /// using `x v = v bar(x)` for `x in FH`.
    pub fn mul(&self, a: &DihedralElem, b: &DihedralElem) -> DihedralElem {
        let f = self.f();
        let h = cyclic::add(
            f,
            &cyclic::convolve(f, &a.h, &b.h),
            &cyclic::convolve(f, &cyclic::bar(&a.vh), &b.vh),
        );
        let vh = cyclic::add(
            f,
            &cyclic::convolve(f, &cyclic::bar(&a.h), &b.vh),
            &cyclic::convolve(f, &a.vh, &b.h),
        );
        DihedralElem { h, vh }
    }

    /// Checked product.
    pub fn try_mul(&self, a: &DihedralElem, b: &DihedralElem) -> Result<DihedralElem> {
        for x in [a, b] {
            if x.h.len() != self.n || x.vh.len() != self.n {
                return Err(Error::SizeMismatch(format!(
                    "element of size {} in algebra of size {}",
                    x.h.len(),
                    self.n
                )));
            }
        }
        Ok(self.mul(a, b))
    }

    /// `sum a_x x -> sum a_x x^{-1}`. Reflections are involutions, so the `v`
    /// half is unchanged.
    pub fn bar(&self, a: &DihedralElem) -> DihedralElem {
        bar_dihedral(a)
    }

    pub fn sigma(&self, a: &DihedralElem) -> Sym {
        sigma(a)
    }

    /// Euclidean inner product of the flattened words.
    pub fn inner(&self, a: &DihedralElem, b: &DihedralElem) -> Sym {
        let f = self.f();
        f.add(linalg::dot(f, &a.h, &b.h), linalg::dot(f, &a.vh, &b.vh))
    }

    pub fn commutes(&self, a: &DihedralElem, b: &DihedralElem) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// Whether `a` commutes with both generators.
    pub fn is_central(&self, a: &DihedralElem) -> bool {
        self.commutes(a, &DihedralElem::u_pow(self.n, 1))
            && self.commutes(a, &DihedralElem::v(self.n))
    }
}

pub fn bar_dihedral(a: &DihedralElem) -> DihedralElem {
    DihedralElem {
        h: cyclic::bar(&a.h),
        vh: a.vh.clone(),
    }
}

/// Coefficient of the identity.
pub fn sigma(a: &DihedralElem) -> Sym {
    a.h[0]
}
