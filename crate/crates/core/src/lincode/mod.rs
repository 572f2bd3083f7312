//! Linear codes over `GF(q)`: duals, hulls, duality predicates, weights.

mod format;
mod weight;

pub use format::{read_generator, write_generator};
pub use weight::{
    count_low_weight, min_weight, scan_weights, weight_threshold, MinWeight, WeightScan,
    DEFAULT_BUDGET,
};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{FieldSpec, Sym};
use crate::linalg::{self, Matrix, Subspace};

/// Largest coset space `C^perp / C` searched by [`is_maximal_self_orthogonal`].
pub const MAX_QUOTIENT: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    field: Arc<FieldSpec>,
    length: usize,
    /// Reduced row-echelon form, full rank.
    generator: Matrix,
    pivots: Vec<usize>,
}

impl LinearCode {
    /// The span of the rows of `m`. Dependent rows are dropped.
    pub fn from_matrix(field: &Arc<FieldSpec>, m: &Matrix) -> Self {
        let s = Subspace::from_matrix(field, m);
        LinearCode {
            field: Arc::clone(field),
            length: m.cols(),
            generator: s.basis().clone(),
            pivots: s.pivots().to_vec(),
        }
    }

    pub fn from_rows(field: &Arc<FieldSpec>, length: usize, rows: &[Vec<Sym>]) -> Self {
        Self::from_matrix(field, &Matrix::from_rows(length, rows))
    }

    pub fn zero(field: &Arc<FieldSpec>, length: usize) -> Self {
        Self::from_matrix(field, &Matrix::zeros(0, length))
    }

    pub fn full(field: &Arc<FieldSpec>, length: usize) -> Self {
        let rows: Vec<Vec<Sym>> = (0..length)
            .map(|i| {
                let mut r = vec![0; length];
                r[i] = 1;
                r
            })
            .collect();
        Self::from_rows(field, length, &rows)
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }
    pub fn length(&self) -> usize {
        self.length
    }
    pub fn dim(&self) -> usize {
        self.generator.rows()
    }
    pub fn generator(&self) -> &Matrix {
        &self.generator
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn subspace(&self) -> Subspace {
        Subspace::from_matrix(&self.field, &self.generator)
    }

    pub fn contains(&self, word: &[Sym]) -> bool {
        word.len() == self.length && self.subspace().contains(&self.field, word)
    }

    /// Whether every codeword of `other` lies in `self`.
    pub fn contains_code(&self, other: &LinearCode) -> bool {
        let s = self.subspace();
        (0..other.dim()).all(|i| s.contains(&self.field, other.generator.row(i)))
    }

    /// `m * G` for a message `m` of length `dim`.
    pub fn encode(&self, message: &[Sym]) -> Vec<Sym> {
        self.generator.combine(message, &self.field)
    }

    fn check_same_space(&self, other: &LinearCode) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.length != other.length {
            return Err(Error::SizeMismatch(format!(
                "codes of length {} and {}",
                self.length, other.length
            )));
        }
        Ok(())
    }

    /// `C + D`.
    pub fn sum(&self, other: &LinearCode) -> Result<LinearCode> {
        self.check_same_space(other)?;
        Ok(Self::from_matrix(
            &self.field,
            &self.generator.stack(&other.generator),
        ))
    }

    /// `dim(C cap D) = dim C + dim D - dim(C + D)`.
    pub fn intersection_dim(&self, other: &LinearCode) -> Result<usize> {
        let s = self.sum(other)?;
        Ok(self.dim() + other.dim() - s.dim())
    }
}

pub fn dual(code: &LinearCode) -> LinearCode {
    let ns = code.generator.nullspace(&code.field);
    LinearCode::from_matrix(&code.field, &ns)
}

/// `dim(C cap C^perp)`.
pub fn hull_dim(code: &LinearCode) -> usize {
    code.intersection_dim(&dual(code))
        .expect("a code and its dual share field and length")
}

pub fn is_self_orthogonal(code: &LinearCode) -> bool {
    code.generator
        .mul_transpose(&code.generator, &code.field)
        .is_zero()
}

pub fn is_self_dual(code: &LinearCode) -> bool {
    2 * code.dim() == code.length && is_self_orthogonal(code)
}

pub fn is_lcd(code: &LinearCode) -> bool {
    hull_dim(code) == 0
}

/// Whether no self-orthogonal code properly contains `code`.
///
/// `<x + c, x + c> = <x, x>` for `x` in `C^perp` and `c` in a self-orthogonal
/// `C`, so it suffices to test one representative per nonzero coset of `C`
/// in `C^perp`.
pub fn is_maximal_self_orthogonal(code: &LinearCode) -> Result<bool> {
    if !is_self_orthogonal(code) {
        return Err(Error::NotSelfOrthogonal);
    }
    let f = &*code.field;
    let d = dual(code);
    let s = code.subspace();
    let reps: Vec<Vec<Sym>> = (0..d.dim())
        .map(|i| s.reduce(f, d.generator.row(i)))
        .collect();
    let complement = Subspace::span(f, code.length, &reps);
    let r = complement.dim();
    let size = (f.q() as u128).checked_pow(r as u32);
    if size.is_none_or(|s| s > MAX_QUOTIENT) {
        return Err(Error::QuotientTooLarge(r));
    }
    let basis = complement.basis();
    let mut coeffs = vec![0 as Sym; r];
    let q = f.q();
    // Projective representatives: first nonzero coordinate equal to 1.
    loop {
        let mut i = 0;
        while i < r {
            coeffs[i] += 1;
            if coeffs[i] < q {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
        if i == r {
            return Ok(true);
        }
        let lead = coeffs.iter().rev().find(|&&c| c != 0).copied();
        if lead != Some(1) {
            continue;
        }
        let x = basis.combine(&coeffs, f);
        if linalg::dot(f, &x, &x) == 0 {
            return Ok(false);
        }
    }
}

/// The regime-independent duality summary of a code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct DualityFlags {
    pub hull_dim: usize,
    pub self_orthogonal: bool,
    pub self_dual: bool,
    pub lcd: bool,
    /// `None` when not self-orthogonal or the coset space is too large to search.
    pub maximal_self_orthogonal: Option<bool>,
}

pub fn duality_flags(code: &LinearCode) -> DualityFlags {
    let so = is_self_orthogonal(code);
    let hull = hull_dim(code);
    DualityFlags {
        hull_dim: hull,
        self_orthogonal: so,
        self_dual: so && 2 * code.dim() == code.length(),
        lcd: hull == 0,
        maximal_self_orthogonal: if so {
            is_maximal_self_orthogonal(code).ok()
        } else {
            None
        },
    }
}
