//! Simple left ideals of `M_2(GF(q))`, counted by brute force.
//!
//! With `E = F 1 + F eta` a quadratic subfield and `L = E e_11`, the ideals
//! `L beta` for `beta` in `E^x` should be exactly the `q + 1` simple left
//! ideals, each hit `q - 1` times.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldSpec, Sym};
use crate::linalg::Subspace;

/// Row-major `[[a, b], [c, d]]`.
pub type Mat2 = [Sym; 4];

pub fn mat_mul(f: &FieldSpec, x: &Mat2, y: &Mat2) -> Mat2 {
    let dot = |a: Sym, b: Sym, c: Sym, d: Sym| f.add(f.mul(a, b), f.mul(c, d));
    [
        dot(x[0], y[0], x[1], y[2]),
        dot(x[0], y[1], x[1], y[3]),
        dot(x[2], y[0], x[3], y[2]),
        dot(x[2], y[1], x[3], y[3]),
    ]
}

fn det(f: &FieldSpec, x: &Mat2) -> Sym {
    f.sub(f.mul(x[0], x[3]), f.mul(x[1], x[2]))
}

fn rank(f: &FieldSpec, x: &Mat2) -> usize {
    if x.iter().all(|&c| c == 0) {
        0
    } else if det(f, x) == 0 {
        1
    } else {
        2
    }
}

/// Canonical key of a subspace of `M_2(F)`: its reduced echelon basis.
fn key(f: &FieldSpec, mats: &[Mat2]) -> Vec<Vec<Sym>> {
    let rows: Vec<Vec<Sym>> = mats.iter().map(|m| m.to_vec()).collect();
    Subspace::span(f, 4, &rows).basis().to_rows()
}

/// Companion matrix of the first `Y^2 + bY + c` without roots in `F`,
/// scanning `(b, c)` in symbol order.
pub fn quadratic_generator(f: &FieldSpec) -> Result<Mat2> {
    for b in f.elements() {
        for c in f.elements() {
            let has_root = f
                .elements()
                .any(|y| f.add(f.add(f.mul(y, y), f.mul(b, y)), c) == 0);
            if !has_root {
                return Ok([0, f.neg(c), 1, f.neg(b)]);
            }
        }
    }
    Err(Error::FieldNotFound(format!(
        "no irreducible quadratic over GF({})",
        f.q()
    )))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealCensus {
    pub q: u32,
    /// Distinct ideals `L beta`, `beta` in `E^x`.
    pub distinct: usize,
    /// How often each distinct ideal occurs, ascending.
    pub multiplicities: Vec<usize>,
    /// Distinct ideals `M c` over all rank-one `c`.
    pub rank_one_ideals: usize,
    /// Whether the two families coincide.
    pub same_family: bool,
}

impl IdealCensus {
    /// `q + 1` ideals, each hit `q - 1` times, and nothing missed.
    pub fn holds(&self) -> bool {
        let q = self.q as usize;
        self.distinct == q + 1
            && self.multiplicities.iter().all(|&m| m == q - 1)
            && self.rank_one_ideals == q + 1
            && self.same_family
    }
}

pub fn ideal_census(field: &Arc<FieldSpec>) -> Result<IdealCensus> {
    let f = &**field;
    let one: Mat2 = [1, 0, 0, 1];
    let e11: Mat2 = [1, 0, 0, 0];
    let eta = quadratic_generator(f)?;
    let l_basis = [mat_mul(f, &one, &e11), mat_mul(f, &eta, &e11)];

    let mut hits: BTreeMap<Vec<Vec<Sym>>, usize> = BTreeMap::new();
    for a in f.elements() {
        for b in f.elements() {
            if a == 0 && b == 0 {
                continue;
            }
            let beta: Mat2 = std::array::from_fn(|i| f.add(f.mul(a, one[i]), f.mul(b, eta[i])));
            let gens: Vec<Mat2> = l_basis.iter().map(|l| mat_mul(f, l, &beta)).collect();
            *hits.entry(key(f, &gens)).or_default() += 1;
        }
    }

    let units: Vec<Mat2> = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]].to_vec();
    let mut rank_one = std::collections::BTreeSet::new();
    let q = f.q();
    for idx in 0..(q as u64).pow(4) {
        let mut x = idx;
        let c: Mat2 = std::array::from_fn(|_| {
            let d = (x % q as u64) as Sym;
            x /= q as u64;
            d
        });
        if rank(f, &c) != 1 {
            continue;
        }
        let gens: Vec<Mat2> = units.iter().map(|u| mat_mul(f, u, &c)).collect();
        rank_one.insert(key(f, &gens));
    }

    let mut multiplicities: Vec<usize> = hits.values().copied().collect();
    multiplicities.sort_unstable();
    Ok(IdealCensus {
        q,
        distinct: hits.len(),
        multiplicities,
        rank_one_ideals: rank_one.len(),
        same_family: hits.keys().eq(rank_one.iter()),
    })
}
