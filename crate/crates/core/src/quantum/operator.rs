//! Row-compressed complex operators on a finite Fock basis.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Square sparse matrix stored as sorted `(column, value)` lists per row.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator<T> {
    dim: usize,
    rows: Vec<Vec<(usize, Complex<T>)>>,
}

impl<T: Real> Operator<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            rows: vec![Vec::new(); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal((0..dim).map(|_| Complex::new(T::one(), T::zero())))
    }

    pub fn diagonal(values: impl IntoIterator<Item = Complex<T>>) -> Self {
        let rows: Vec<_> = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| if v.is_zero() { Vec::new() } else { vec![(i, v)] })
            .collect();
        Self {
            dim: rows.len(),
            rows,
        }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, Complex<T>)>) -> Self {
        let mut rows: Vec<Vec<(usize, Complex<T>)>> = vec![Vec::new(); dim];
        for (i, j, v) in triplets {
            assert!(i < dim && j < dim, "triplet ({i}, {j}) outside dimension {dim}");
            rows[i].push((j, v));
        }
        for row in &mut rows {
            *row = compact(std::mem::take(row));
        }
        Self { dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.rows[i]
            .binary_search_by_key(&j, |&(c, _)| c)
            .map(|p| self.rows[i][p].1)
            .unwrap_or_else(|_| Complex::zero())
    }

    pub fn row(&self, i: usize) -> &[(usize, Complex<T>)] {
        &self.rows[i]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn scaled(&self, s: Complex<T>) -> Self {
        Self {
            dim: self.dim,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|&(j, v)| (j, v * s)).collect())
                .collect(),
        }
    }

    pub fn scaled_real(&self, s: T) -> Self {
        self.scaled(Complex::new(s, T::zero()))
    }

    /// `self + s · other`.
    pub fn add_scaled(&self, other: &Self, s: Complex<T>) -> Self {
        assert_eq!(self.dim, other.dim, "operator dimensions differ");
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| merge(a, b, s))
            .collect();
        Self { dim: self.dim, rows }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, Complex::new(T::one(), T::zero()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, Complex::new(-T::one(), T::zero()))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "operator dimensions differ");
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = Vec::new();
                for &(k, a) in row {
                    for &(j, b) in &other.rows[k] {
                        acc.push((j, a * b));
                    }
                }
                compact(acc)
            })
            .collect();
        Self { dim: self.dim, rows }
    }

    pub fn adjoint(&self) -> Self {
        let mut rows: Vec<Vec<(usize, Complex<T>)>> = vec![Vec::new(); self.dim];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                rows[j].push((i, v.conj()));
            }
        }
        // rows visited in increasing i, so each column list is already sorted
        Self { dim: self.dim, rows }
    }

    /// Tensor product `self ⊗ other`; `self` acts on the slower index.
    pub fn kron(&self, other: &Self) -> Self {
        let d = self.dim * other.dim;
        let mut rows = Vec::with_capacity(d);
        for ra in &self.rows {
            for rb in &other.rows {
                let mut row = Vec::with_capacity(ra.len() * rb.len());
                for &(ja, va) in ra {
                    for &(jb, vb) in rb {
                        row.push((ja * other.dim + jb, va * vb));
                    }
                }
                rows.push(row);
            }
        }
        Self { dim: d, rows }
    }

    pub fn apply(&self, v: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .fold(Complex::zero(), |acc: Complex<T>, &(j, a)| acc + a * v[j])
            })
            .collect())
    }

    /// `⟨v|A|v⟩`.
    pub fn expectation(&self, v: &[Complex<T>]) -> Result<Complex<T>> {
        let av = self.apply(v)?;
        Ok(v.iter()
            .zip(&av)
            .fold(Complex::zero(), |acc: Complex<T>, (x, y)| acc + x.conj() * y))
    }

    /// Exact (bitwise) equality with the conjugate transpose.
    pub fn is_hermitian(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, row)| {
            row.iter().all(|&(j, v)| {
                let t = self.get(j, i);
                t.re == v.re && t.im == -v.im
            })
        }) && self.adjoint().nnz() == self.nnz()
    }

    /// Largest absolute row sum; bounds the spectral norm of Hermitian operators.
    pub fn norm_inf(&self) -> T {
        self.rows
            .iter()
            .map(|r| r.iter().fold(T::zero(), |acc, (_, v)| acc + v.norm()))
            .fold(T::zero(), T::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let d = self.sub(other);
        d.rows
            .iter()
            .flat_map(|r| r.iter().map(|(_, v)| v.norm()))
            .fold(T::zero(), T::max)
    }

    /// If the operator restricted to indices with `keep(i)` is `c · 1`
    /// within `tol`, returns `c`.
    pub fn identity_multiple_on(&self, keep: impl Fn(usize) -> bool, tol: T) -> Option<Complex<T>> {
        let first = (0..self.dim).find(|&i| keep(i))?;
        let c = self.get(first, first);
        for i in (0..self.dim).filter(|&i| keep(i)) {
            for &(j, v) in &self.rows[i] {
                if !keep(j) {
                    continue;
                }
                let expected = if i == j { c } else { Complex::zero() };
                if (v - expected).norm() > tol {
                    return None;
                }
            }
            if self.get(i, i).is_zero() && c.norm() > tol {
                return None;
            }
        }
        Some(c)
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex<T>>> {
        let mut out = vec![vec![Complex::zero(); self.dim]; self.dim];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                out[i][j] = v;
            }
        }
        out
    }
}

fn compact<T: Real>(mut entries: Vec<(usize, Complex<T>)>) -> Vec<(usize, Complex<T>)> {
    entries.sort_by_key(|&(j, _)| j);
    let mut out: Vec<(usize, Complex<T>)> = Vec::with_capacity(entries.len());
    for (j, v) in entries {
        match out.last_mut() {
            Some((lj, lv)) if *lj == j => *lv += v,
            _ => out.push((j, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

fn merge<T: Real>(
    a: &[(usize, Complex<T>)],
    b: &[(usize, Complex<T>)],
    s: Complex<T>,
) -> Vec<(usize, Complex<T>)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&(ca, va)), Some(&(cb, vb))) if ca == cb => {
                i += 1;
                j += 1;
                (ca, va + vb * s)
            }
            (Some(&(ca, va)), Some(&(cb, _))) if ca < cb => {
                i += 1;
                (ca, va)
            }
            (Some(&(ca, va)), None) => {
                i += 1;
                (ca, va)
            }
            (_, Some(&(cb, vb))) => {
                j += 1;
                (cb, vb * s)
            }
            (None, None) => unreachable!(),
        };
        if !next.1.is_zero() {
            out.push(next);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn matmul_matches_dense() {
        let a = Operator::from_triplets(3, [(0, 1, c(1.0, 2.0)), (2, 0, c(-1.0, 0.5)), (1, 1, c(3.0, 0.0))]);
        let b = Operator::from_triplets(3, [(1, 2, c(0.5, 0.0)), (0, 0, c(2.0, -1.0)), (1, 0, c(1.0, 1.0))]);
        let p = a.matmul(&b).to_dense();
        let (ad, bd) = (a.to_dense(), b.to_dense());
        for i in 0..3 {
            for j in 0..3 {
                let e: Complex<f64> = (0..3).map(|k| ad[i][k] * bd[k][j]).sum();
                assert!((p[i][j] - e).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn kron_and_adjoint() {
        let a = Operator::from_triplets(2, [(0, 1, c(1.0, 1.0))]);
        let i2 = Operator::<f64>::identity(2);
        let k = a.kron(&i2);
        assert_eq!(k.dim(), 4);
        assert_eq!(k.get(0, 2), c(1.0, 1.0));
        assert_eq!(k.get(1, 3), c(1.0, 1.0));
        assert_eq!(k.adjoint().get(2, 0), c(1.0, -1.0));
        assert!(!k.is_hermitian());
        assert!(k.add(&k.adjoint()).is_hermitian());
    }

    #[test]
    fn add_scaled_cancels_to_empty() {
        let a = Operator::from_triplets(2, [(0, 1, c(1.0, 0.0)), (1, 1, c(2.0, 0.0))]);
        let z = a.sub(&a);
        assert_eq!(z.nnz(), 0);
    }

    #[test]
    fn expectation_and_dimension_check() {
        let a = Operator::diagonal([c(1.0, 0.0), c(3.0, 0.0)]);
        let v = [c(0.5f64.sqrt(), 0.0), c(0.0, 0.5f64.sqrt())];
        assert!((a.expectation(&v).unwrap() - c(2.0, 0.0)).norm() < 1e-15);
        assert!(matches!(a.apply(&[c(1.0, 0.0)]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn identity_multiple_detection() {
        let a = Operator::diagonal([c(2.0, 0.0), c(2.0, 0.0), c(5.0, 0.0)]);
        assert_eq!(a.identity_multiple_on(|i| i < 2, 1e-12), Some(c(2.0, 0.0)));
        assert_eq!(a.identity_multiple_on(|_| true, 1e-12), None);
    }
}
