//! Dense matrices over `GF(q)`: row reduction, rank, null spaces.

use serde::{Deserialize, Serialize};

use crate::gf::{FieldSpec, Sym};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Sym>,
}

/// `dst += c * src`.
#[inline]
pub fn axpy(f: &FieldSpec, dst: &mut [Sym], c: Sym, src: &[Sym]) {
    if c == 0 {
        return;
    }
    if c == 1 {
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = f.add(*d, s);
        }
    } else {
        for (d, &s) in dst.iter_mut().zip(src) {
            if s != 0 {
                *d = f.add(*d, f.mul(c, s));
            }
        }
    }
}

pub fn dot(f: &FieldSpec, a: &[Sym], b: &[Sym]) -> Sym {
    a.iter()
        .zip(b)
        .fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

pub fn weight(v: &[Sym]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// Panics if the rows have unequal lengths.
    pub fn from_rows(cols: usize, rows: &[Vec<Sym>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend_from_slice(r);
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn row(&self, i: usize) -> &[Sym] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn row_mut(&mut self, i: usize) -> &mut [Sym] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn get(&self, i: usize, j: usize) -> Sym {
        self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: Sym) {
        self.data[i * self.cols + j] = v;
    }
    pub fn to_rows(&self) -> Vec<Vec<Sym>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn push_row(&mut self, r: &[Sym]) {
        assert_eq!(r.len(), self.cols);
        self.data.extend_from_slice(r);
        self.rows += 1;
    }

    pub fn stack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let c = self.cols;
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * c);
        head[lo * c..(lo + 1) * c].swap_with_slice(&mut tail[..c]);
    }

    /// Reduced row-echelon form in place; zero rows are dropped. Returns pivot columns.
    pub fn rref(&mut self, f: &FieldSpec) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        let c = self.cols;
        for col in 0..c {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, col) != 0) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = f.inv(self.get(r, col));
            if inv != 1 {
                for x in self.row_mut(r) {
                    *x = f.mul(*x, inv);
                }
            }
            let pivot_row = self.row(r).to_vec();
            for i in 0..self.rows {
                if i != r {
                    let factor = self.get(i, col);
                    if factor != 0 {
                        axpy(f, self.row_mut(i), f.neg(factor), &pivot_row);
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        self.rows = r;
        self.data.truncate(r * c);
        pivots
    }

    pub fn rank(&self, f: &FieldSpec) -> usize {
        self.clone().rref(f).len()
    }

    /// Basis of `{x : self * x^T = 0}` as rows.
    pub fn nullspace(&self, f: &FieldSpec) -> Matrix {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(0, self.cols);
        for &fc in &free {
            let mut v = vec![0; self.cols];
            v[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m.get(i, fc));
            }
            out.push_row(&v);
        }
        out
    }

    /// `self * other^T`.
    pub fn mul_transpose(&self, other: &Matrix, f: &FieldSpec) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut out = Matrix::zeros(self.rows, other.rows);
        for i in 0..self.rows {
            for j in 0..other.rows {
                out.set(i, j, dot(f, self.row(i), other.row(j)));
            }
        }
        out
    }

    /// `v * self`: the combination of rows with coefficients `v`.
    pub fn combine(&self, v: &[Sym], f: &FieldSpec) -> Vec<Sym> {
        let mut out = vec![0; self.cols];
        for (i, &c) in v.iter().enumerate() {
            axpy(f, &mut out, c, self.row(i));
        }
        out
    }
}

/// A subspace kept in reduced row-echelon form, for membership and
/// coordinate queries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(f: &FieldSpec, cols: usize, vectors: &[Vec<Sym>]) -> Self {
        let mut basis = Matrix::from_rows(cols, vectors);
        let pivots = basis.rref(f);
        Subspace { basis, pivots }
    }

    pub fn from_matrix(f: &FieldSpec, m: &Matrix) -> Self {
        let mut basis = m.clone();
        let pivots = basis.rref(f);
        Subspace { basis, pivots }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis; the result is zero iff `v` is in the span.
    pub fn reduce(&self, f: &FieldSpec, v: &[Sym]) -> Vec<Sym> {
        let mut w = v.to_vec();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = w[pc];
            if c != 0 {
                axpy(f, &mut w, f.neg(c), self.basis.row(i));
            }
        }
        w
    }

    pub fn contains(&self, f: &FieldSpec, v: &[Sym]) -> bool {
        self.reduce(f, v).iter().all(|&x| x == 0)
    }

    /// Coordinates with respect to the echelon basis, if `v` is in the span.
    pub fn coordinates(&self, f: &FieldSpec, v: &[Sym]) -> Option<Vec<Sym>> {
        let coords: Vec<Sym> = self.pivots.iter().map(|&pc| v[pc]).collect();
        (self.basis.combine(&coords, f) == v).then_some(coords)
    }

    pub fn contains_all(&self, f: &FieldSpec, other: &Subspace) -> bool {
        (0..other.basis.rows()).all(|i| self.contains(f, other.basis.row(i)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn rref_and_nullspace() {
        let f = make_field(3, 1).unwrap();
        let m = Matrix::from_rows(4, &[vec![1, 2, 0, 1], vec![2, 1, 0, 2], vec![0, 1, 1, 0]]);
        assert_eq!(m.rank(&f), 2);
        let n = m.nullspace(&f);
        assert_eq!(n.rows(), 2);
        assert!(m.mul_transpose(&n, &f).is_zero());
    }

    #[test]
    fn subspace_coordinates() {
        let f = make_field(2, 2).unwrap();
        let s = Subspace::span(&f, 3, &[vec![1, 2, 3], vec![0, 1, 1]]);
        let v = {
            let mut v = s.basis().row(0).to_vec();
            axpy(&f, &mut v, 3, s.basis().row(1));
            v
        };
        assert!(s.contains(&f, &v));
        assert_eq!(s.coordinates(&f, &v), Some(vec![1, 3]));
        assert!(!s.contains(&f, &[0, 0, 1]));
    }
}
