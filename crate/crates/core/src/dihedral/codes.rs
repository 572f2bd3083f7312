//! The codes `C = C_1 + ... + C_m`, `hat C = F hat e_0 + C`, and their
//! right translates by units of `K* = {e_0} x K_1^x x ... x K_m^x`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{DihedralDecomposition, DihedralElem};
use crate::error::{Error, Result};
use crate::gf::Sym;
use crate::lincode::LinearCode;

/// Largest block count for [`enumerate_submodules`].
pub const MAX_SUBMODULE_BLOCKS: usize = 20;

fn code_from(decomp: &DihedralDecomposition, elems: &[DihedralElem]) -> LinearCode {
    let rows: Vec<Vec<Sym>> = elems.iter().map(DihedralElem::flatten).collect();
    LinearCode::from_rows(&decomp.field, 2 * decomp.n, &rows)
}

/// `C`, of length `2n` and dimension `n - 1`.
pub fn code_c(decomp: &DihedralDecomposition) -> Result<LinearCode> {
    let elems: Vec<DihedralElem> = decomp
        .blocks
        .iter()
        .flat_map(|b| b.basis_c.iter().cloned())
        .collect();
    let code = code_from(decomp, &elems);
    check_dim(&code, decomp.n - 1)?;
    Ok(code)
}

/// `hat C = F hat e_0 + C`, of length `2n` and dimension `n`.
pub fn code_hat_c(decomp: &DihedralDecomposition) -> Result<LinearCode> {
    let mut elems = vec![decomp.e0_hat.clone()];
    elems.extend(decomp.blocks.iter().flat_map(|b| b.basis_c.iter().cloned()));
    let code = code_from(decomp, &elems);
    check_dim(&code, decomp.n)?;
    Ok(code)
}

fn check_dim(code: &LinearCode, want: usize) -> Result<()> {
    if code.dim() != want {
        return Err(Error::DimensionMismatch(format!(
            "code dimension {} != {want}",
            code.dim()
        )));
    }
    Ok(())
}

/// `beta = e_0 + sum_t beta_t` with `beta_t` uniform on `K_t \ {0}`.
pub fn sample_unit(decomp: &DihedralDecomposition, seed: u64) -> DihedralElem {
    let alg = decomp.algebra();
    let q = decomp.field.q();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut beta = decomp.e0.clone();
    for b in &decomp.blocks {
        let coeffs: Vec<Sym> = loop {
            let c: Vec<Sym> = (0..b.basis_k.len()).map(|_| rng.gen_range(0..q)).collect();
            if c.iter().any(|&x| x != 0) {
                break c;
            }
        };
        for (c, x) in coeffs.iter().zip(&b.basis_k) {
            beta = alg.add(&beta, &alg.scale(x, *c));
        }
    }
    beta
}

/// `C beta`: every generator row right-multiplied by `beta`.
pub fn right_translate_code(
    code: &LinearCode,
    beta: &DihedralElem,
    decomp: &DihedralDecomposition,
) -> Result<LinearCode> {
    if code.length() != 2 * decomp.n || beta.n() != decomp.n {
        return Err(Error::SizeMismatch(format!(
            "code of length {} and unit of size {} in FD_{}",
            code.length(),
            beta.n(),
            2 * decomp.n
        )));
    }
    if code.field() != &decomp.field {
        return Err(Error::FieldMismatch);
    }
    let alg = decomp.algebra();
    let rows: Vec<Vec<Sym>> = code
        .generator()
        .to_rows()
        .iter()
        .map(|r| alg.mul(&DihedralElem::from_flat(r), beta).flatten())
        .collect();
    let out = LinearCode::from_rows(&decomp.field, code.length(), &rows);
    if out.dim() != code.dim() {
        return Err(Error::DimensionMismatch(format!(
            "translate has dimension {}, expected {}",
            out.dim(),
            code.dim()
        )));
    }
    Ok(out)
}

/// An `FG`-submodule `C_{t_1} + ... + C_{t_r}` of `C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Submodule {
    /// Block indices `t`, starting at 1, ascending.
    pub blocks: Vec<usize>,
    pub dim: usize,
}

/// All `2^m` submodules of `C`, ordered by the bitmask of their blocks.
pub fn enumerate_submodules(decomp: &DihedralDecomposition) -> Result<Vec<Submodule>> {
    let m = decomp.m();
    if m > MAX_SUBMODULE_BLOCKS {
        return Err(Error::TooManyBlocks(m));
    }
    Ok((0u32..1 << m)
        .map(|mask| {
            let blocks: Vec<usize> = (0..m)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| i + 1)
                .collect();
            let dim = blocks.iter().map(|&t| 2 * decomp.blocks[t - 1].k).sum();
            Submodule { blocks, dim }
        })
        .collect())
}

/// Blocks `t` with `c 1_{A_t} != 0`.
pub fn support_blocks(decomp: &DihedralDecomposition, c: &DihedralElem) -> Vec<usize> {
    let alg = decomp.algebra();
    decomp
        .blocks
        .iter()
        .filter(|b| !alg.mul(c, &b.central_idempotent).is_zero())
        .map(|b| b.index)
        .collect()
}

/// `dim_F(FG c) / 2` for `c` in `C`, read off the block support.
pub fn ell_c(decomp: &DihedralDecomposition, c: &DihedralElem) -> usize {
    support_blocks(decomp, c)
        .iter()
        .map(|&t| decomp.blocks[t - 1].k)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dihedral::decompose;
    use crate::gf::make_field;
    use crate::lincode::{is_self_dual, min_weight, DEFAULT_BUDGET};

    #[test]
    fn dims_of_c_and_hat_c() {
        let d = decompose(7, &make_field(2, 1).unwrap()).unwrap();
        let c = code_c(&d).unwrap();
        let hc = code_hat_c(&d).unwrap();
        assert_eq!((c.dim(), hc.dim()), (6, 7));
        assert!(hc.contains_code(&c));
    }

    #[test]
    fn n3_hat_c_is_self_dual() {
        let d = decompose(3, &make_field(2, 1).unwrap()).unwrap();
        let hc = code_hat_c(&d).unwrap();
        assert!(is_self_dual(&hc));
        // The C_1 words have weight 4; e0_hat + (e_1 + v e_1) = 1 + v has weight 2.
        assert_eq!(min_weight(&hc, DEFAULT_BUDGET).unwrap().weight(), 2);
    }

    #[test]
    fn translate_by_one_is_identity() {
        let d = decompose(5, &make_field(3, 1).unwrap()).unwrap();
        let c = code_c(&d).unwrap();
        let t = right_translate_code(&c, &DihedralElem::one(5), &d).unwrap();
        assert_eq!(t, c);
    }

    #[test]
    fn sample_unit_is_deterministic() {
        let d = decompose(7, &make_field(2, 1).unwrap()).unwrap();
        assert_eq!(sample_unit(&d, 9), sample_unit(&d, 9));
    }

    #[test]
    fn single_block_submodules() {
        let d = decompose(7, &make_field(2, 1).unwrap()).unwrap();
        let s = enumerate_submodules(&d).unwrap();
        assert_eq!(
            s,
            vec![
                Submodule {
                    blocks: vec![],
                    dim: 0
                },
                Submodule {
                    blocks: vec![1],
                    dim: 6
                }
            ]
        );
    }
}
