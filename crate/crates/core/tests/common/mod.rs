//! Slow, obviously-correct reference implementations shared by the integration tests.

#![allow(dead_code)]

use dihedral_forge::gf::{FieldSpec, Sym};

/// Product in `F D_2n` straight from the group law, on flat coefficient vectors
/// `(u^0..u^{n-1}, v u^0..v u^{n-1})`.
pub fn group_mul(f: &FieldSpec, n: usize, a: &[Sym], b: &[Sym]) -> Vec<Sym> {
    let mut out = vec![0; 2 * n];
    for (x, &ca) in a.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        let (sa, i) = (x / n, x % n);
        for (y, &cb) in b.iter().enumerate() {
            if cb == 0 {
                continue;
            }
            let (sb, j) = (y / n, y % n);
            // u^i v = v u^{-i}, v^2 = 1
            let z = match (sa, sb) {
                (0, 0) => (i + j) % n,
                (0, 1) => n + (j + n - i) % n,
                (1, 0) => n + (i + j) % n,
                _ => (j + n - i) % n,
            };
            out[z] = f.add(out[z], f.mul(ca, cb));
        }
    }
    out
}

/// Coefficients of `g^{-1}` in place of `g`.
pub fn group_bar(n: usize, a: &[Sym]) -> Vec<Sym> {
    let mut out = vec![0; 2 * n];
    for i in 0..n {
        out[(n - i) % n] = a[i];
        // (v u^i)^{-1} = v u^i
        out[n + i] = a[n + i];
    }
    out
}

pub fn dot(f: &FieldSpec, a: &[Sym], b: &[Sym]) -> Sym {
    a.iter()
        .zip(b)
        .fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

pub fn weight(v: &[Sym]) -> usize {
    v.iter().filter(|&&c| c != 0).count()
}

/// Rank by plain Gaussian elimination.
pub fn rank(f: &FieldSpec, rows: &[Vec<Sym>]) -> usize {
    let mut m: Vec<Vec<Sym>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        let inv = f.inv(m[r][c]);
        let pivot: Vec<Sym> = m[r].iter().map(|&x| f.mul(x, inv)).collect();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let s = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = f.sub(*x, f.mul(s, y));
                }
            }
        }
        m[r] = pivot;
        r += 1;
    }
    r
}

/// `dim(C cap C^perp)` for `C` spanned by independent `rows`: `k - rank(G G^T)`.
pub fn hull_dim(f: &FieldSpec, rows: &[Vec<Sym>]) -> usize {
    let gram: Vec<Vec<Sym>> = rows
        .iter()
        .map(|a| rows.iter().map(|b| dot(f, a, b)).collect())
        .collect();
    rows.len() - rank(f, &gram)
}

/// Calls `visit` with every combination `sum x_i rows_i`, including zero.
pub fn for_each_codeword(
    f: &FieldSpec,
    rows: &[Vec<Sym>],
    len: usize,
    mut visit: impl FnMut(&[Sym]),
) {
    let q = f.q();
    let k = rows.len();
    let mut coeffs = vec![0 as Sym; k];
    let mut word = vec![0 as Sym; len];
    loop {
        visit(&word);
        let mut i = 0;
        loop {
            if i == k {
                return;
            }
            let old = coeffs[i];
            let new = if old + 1 < q { old + 1 } else { 0 };
            let step = f.sub(new, old);
            for (w, &g) in word.iter_mut().zip(&rows[i]) {
                *w = f.add(*w, f.mul(step, g));
            }
            coeffs[i] = new;
            if new != 0 {
                break;
            }
            i += 1;
        }
    }
}

pub fn brute_min_weight(f: &FieldSpec, rows: &[Vec<Sym>], len: usize) -> Option<usize> {
    let mut best: Option<usize> = None;
    for_each_codeword(f, rows, len, |w| {
        let wt = weight(w);
        if wt > 0 && best.is_none_or(|b| wt < b) {
            best = Some(wt);
        }
    });
    best
}

pub fn naive_is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub fn naive_ord(q: u64, n: u64) -> u64 {
    let mut x = q % n;
    let mut k = 1;
    while x != 1 % n {
        x = x * q % n;
        k += 1;
    }
    k
}

pub fn naive_lambda(n: u64, q: u64) -> u64 {
    (2..=n)
        .filter(|&p| n.is_multiple_of(p) && naive_is_prime(p))
        .map(|p| naive_ord(q, p))
        .min()
        .unwrap()
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `h_q(x) = x log_q(q-1) - x log_q x - (1-x) log_q(1-x)`.
pub fn entropy(q: u64, x: f64) -> f64 {
    let lq = (q as f64).ln();
    let t = |y: f64| if y == 0.0 { 0.0 } else { y * y.ln() };
    (x * ((q - 1) as f64).ln() - t(x) - t(1.0 - x)) / lq
}
