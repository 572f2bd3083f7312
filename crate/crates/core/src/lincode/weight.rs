//! Minimum weight and low-weight counts.
//!
//! The exhaustive scan treats the code as a `GF(p)`-space spanned by the
//! `k e` vectors `w^j g_i` and walks it in modular `p`-ary Gray order, so each
//! step adds one generator to the running codeword. Work is split on the top
//! Gray digits and the chunks run in parallel.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::LinearCode;
use crate::error::{Error, Result};
use crate::gf::{FieldSpec, Sym};
use crate::linalg::{self, Matrix};

/// Default enumeration budget, in codewords.
pub const DEFAULT_BUDGET: u128 = 1 << 24;

const SAMPLING_SEED: u64 = 0x6d69_6e77_6569_6768;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MinWeight {
    Exact {
        weight: usize,
        witness: Vec<Sym>,
    },
    /// Information-set sampling: `best_found` is attained by `witness`,
    /// nothing better than `lower_bound` is certified.
    Estimate {
        lower_bound: usize,
        best_found: usize,
        witness: Vec<Sym>,
    },
}

impl MinWeight {
    /// The exact weight, or the best weight found.
    pub fn weight(&self) -> usize {
        match self {
            MinWeight::Exact { weight, .. } => *weight,
            MinWeight::Estimate { best_found, .. } => *best_found,
        }
    }
    pub fn is_exact(&self) -> bool {
        matches!(self, MinWeight::Exact { .. })
    }
    pub fn witness(&self) -> &[Sym] {
        match self {
            MinWeight::Exact { witness, .. } | MinWeight::Estimate { witness, .. } => witness,
        }
    }
}

/// Full weight distribution of a code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightScan {
    /// `distribution[w]` codewords of weight `w`, zero word included.
    pub distribution: Vec<u64>,
    /// First minimum-weight nonzero codeword in scan order.
    pub witness: Option<Vec<Sym>>,
}

impl WeightScan {
    pub fn min_weight(&self) -> Option<usize> {
        self.distribution
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, &c)| c > 0)
            .map(|(w, _)| w)
    }

    /// Codewords of weight at most `w`, zero word included.
    pub fn count_at_most(&self, w: usize) -> u64 {
        self.distribution.iter().take(w + 1).sum()
    }
}

/// Largest weight `w` with `w / length <= delta`.
pub fn weight_threshold(length: usize, delta: f64) -> usize {
    let t = delta * length as f64;
    // Absorb rounding in products like 0.1 * 30.
    ((t + 1e-9).floor().max(0.0) as usize).min(length)
}

/// `q^k` if it fits the budget.
fn code_size(code: &LinearCode, budget: u128) -> Result<u128> {
    let size = (code.field().q() as u128).checked_pow(code.dim() as u32);
    match size {
        Some(s) if s <= budget => Ok(s),
        _ => Err(Error::BudgetExceeded(budget)),
    }
}

fn p_valuation(mut t: u64, p: u64) -> usize {
    if p == 2 {
        return t.trailing_zeros() as usize;
    }
    let mut v = 0;
    while t.is_multiple_of(p) {
        t /= p;
        v += 1;
    }
    v
}

struct ChunkResult {
    distribution: Vec<u64>,
    best: Option<(usize, Vec<Sym>)>,
}

fn scan_chunk(
    f: &FieldSpec,
    gens: &[Vec<(usize, Sym)>],
    length: usize,
    low: usize,
    prefix: u64,
) -> ChunkResult {
    let p = f.p() as u64;
    let mut word = vec![0 as Sym; length];
    let mut x = prefix;
    for g in &gens[low..] {
        let d = (x % p) as i64;
        x /= p;
        for _ in 0..d {
            for &(c, v) in g {
                word[c] = f.add(word[c], v);
            }
        }
    }
    let mut weight = linalg::weight(&word);
    let mut distribution = vec![0u64; length + 1];
    let mut best: Option<(usize, Vec<Sym>)> = None;
    let mut visit = |weight: usize, word: &[Sym]| {
        distribution[weight] += 1;
        if weight > 0 && best.as_ref().is_none_or(|(b, _)| weight < *b) {
            best = Some((weight, word.to_vec()));
        }
    };
    visit(weight, &word);
    let steps = p.pow(low as u32);
    for t in 1..steps {
        let g = &gens[p_valuation(t, p)];
        for &(c, v) in g {
            let old = word[c];
            let new = f.add(old, v);
            word[c] = new;
            weight = weight + (new != 0) as usize - (old != 0) as usize;
        }
        visit(weight, &word);
    }
    ChunkResult { distribution, best }
}

/// Weight distribution by exhaustive enumeration.
pub fn scan_weights(code: &LinearCode, budget: u128) -> Result<WeightScan> {
    code_size(code, budget)?;
    let f = &**code.field();
    let n = code.length();
    let p = f.p() as u64;
    let mut gens = Vec::with_capacity(code.dim() * f.e() as usize);
    let mut place: Sym = 1;
    let mut places = Vec::new();
    for _ in 0..f.e() {
        places.push(place);
        place *= f.p();
    }
    for i in 0..code.dim() {
        let row = code.generator().row(i);
        for &w in &places {
            gens.push(
                row.iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(j, &c)| (j, f.mul(w, c)))
                    .collect::<Vec<_>>(),
            );
        }
    }
    let m = gens.len();
    let mut top = 0;
    while top < m && p.pow(top as u32) < 256 && m - top > 4 {
        top += 1;
    }
    let low = m - top;
    let chunks = p.pow(top as u32);
    let results: Vec<ChunkResult> = (0..chunks)
        .into_par_iter()
        .map(|c| scan_chunk(f, &gens, n, low, c))
        .collect();
    let mut distribution = vec![0u64; n + 1];
    let mut best: Option<(usize, Vec<Sym>)> = None;
    for r in results {
        for (d, c) in distribution.iter_mut().zip(&r.distribution) {
            *d += c;
        }
        if let Some((w, word)) = r.best {
            if best.as_ref().is_none_or(|(b, _)| w < *b) {
                best = Some((w, word));
            }
        }
    }
    Ok(WeightScan {
        distribution,
        witness: best.map(|(_, w)| w),
    })
}

/// Exact minimum weight when `q^k <= budget`, otherwise information-set sampling.
pub fn min_weight(code: &LinearCode, budget: u128) -> Result<MinWeight> {
    if code.dim() == 0 {
        return Err(Error::ZeroDim);
    }
    if code_size(code, budget).is_ok() {
        let scan = scan_weights(code, budget)?;
        let weight = scan.min_weight().expect("nonzero code has a nonzero word");
        return Ok(MinWeight::Exact {
            weight,
            witness: scan.witness.expect("witness recorded with the minimum"),
        });
    }
    let (best_found, witness) = sample_min_weight(code, budget);
    Ok(MinWeight::Estimate {
        lower_bound: 1,
        best_found,
        witness,
    })
}

/// `|C^{<= delta}|` including the zero word.
pub fn count_low_weight(code: &LinearCode, delta: f64, budget: u128) -> Result<u64> {
    let scan = scan_weights(code, budget)?;
    Ok(scan.count_at_most(weight_threshold(code.length(), delta)))
}

/// Random information sets: systematic rows and pairs of rows.
fn sample_min_weight(code: &LinearCode, budget: u128) -> (usize, Vec<Sym>) {
    let f = &**code.field();
    let n = code.length();
    let k = code.dim();
    let q = f.q() as u128;
    let per_iter = (k * k) as u128 * q * n as u128;
    let iterations = (budget / per_iter.max(1)).clamp(64, 4096) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLING_SEED);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = (usize::MAX, Vec::new());
    let consider = |word: &[Sym], perm: &[usize], best: &mut (usize, Vec<Sym>)| {
        let w = linalg::weight(word);
        if w > 0 && w < best.0 {
            let mut orig = vec![0; n];
            for (j, &c) in word.iter().enumerate() {
                orig[perm[j]] = c;
            }
            *best = (w, orig);
        }
    };
    for _ in 0..iterations {
        perm.shuffle(&mut rng);
        let mut m = Matrix::zeros(k, n);
        for i in 0..k {
            let row = code.generator().row(i);
            for (j, &src) in perm.iter().enumerate() {
                m.set(i, j, row[src]);
            }
        }
        m.rref(f);
        let rows = m.to_rows();
        for (i, r) in rows.iter().enumerate() {
            consider(r, &perm, &mut best);
            for s in rows.iter().skip(i + 1) {
                for a in 1..f.q() {
                    let mut x = r.clone();
                    linalg::axpy(f, &mut x, a, s);
                    consider(&x, &perm, &mut best);
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn repetition_code() {
        let f = make_field(2, 1).unwrap();
        let c = LinearCode::from_rows(&f, 2, &[vec![1, 1]]);
        let mw = min_weight(&c, DEFAULT_BUDGET).unwrap();
        assert_eq!(
            mw,
            MinWeight::Exact {
                weight: 2,
                witness: vec![1, 1]
            }
        );
    }

    #[test]
    fn zero_dim_is_an_error() {
        let f = make_field(2, 1).unwrap();
        assert_eq!(
            min_weight(&LinearCode::zero(&f, 3), 10),
            Err(Error::ZeroDim)
        );
    }

    #[test]
    fn full_space_counts() {
        // Sum over w <= 2 of C(5, w) 2^w = 1 + 10 + 40.
        let f = make_field(3, 1).unwrap();
        let c = LinearCode::full(&f, 5);
        assert_eq!(count_low_weight(&c, 0.4, DEFAULT_BUDGET).unwrap(), 51);
        assert_eq!(count_low_weight(&c, 0.0, DEFAULT_BUDGET).unwrap(), 1);
        let scan = scan_weights(&c, DEFAULT_BUDGET).unwrap();
        assert_eq!(scan.distribution, vec![1, 10, 40, 80, 80, 32]);
    }

    #[test]
    fn extension_field_scan_covers_code() {
        let f = make_field(2, 2).unwrap();
        let c = LinearCode::full(&f, 3);
        let scan = scan_weights(&c, DEFAULT_BUDGET).unwrap();
        assert_eq!(scan.distribution, vec![1, 9, 27, 27]);
    }

    #[test]
    fn budget_is_enforced() {
        let f = make_field(2, 1).unwrap();
        let c = LinearCode::full(&f, 10);
        assert_eq!(
            count_low_weight(&c, 0.1, 512),
            Err(Error::BudgetExceeded(512))
        );
        match min_weight(&c, 512).unwrap() {
            MinWeight::Estimate {
                best_found,
                witness,
                ..
            } => {
                assert_eq!(best_found, 1);
                assert!(c.contains(&witness));
            }
            other => panic!("expected estimate, got {other:?}"),
        }
    }

    #[test]
    fn threshold_rounding() {
        assert_eq!(weight_threshold(30, 0.1), 3);
        assert_eq!(weight_threshold(10, 0.25), 2);
        assert_eq!(weight_threshold(6, 0.0), 0);
    }
}
