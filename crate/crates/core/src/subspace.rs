use crate::error::{Error, Result};
use crate::linalg::{self, orthonormalize};
use crate::matrix::{ComplexMatrix, C64};
use crate::tolerance::ToleranceConfig;

/// A subspace of `ℂⁿ` held as an orthonormal column basis (`n × d`).
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: ComplexMatrix,
}

impl Subspace {
    /// Wraps `basis` after checking `‖B*B − 1‖ ≤ 1e-12`.
    pub fn from_orthonormal(basis: ComplexMatrix) -> Result<Self> {
        if basis.cols() > basis.rows() {
            return Err(Error::DimensionMismatch(format!(
                "{} basis vectors in dimension {}",
                basis.cols(),
                basis.rows()
            )));
        }
        let gram = &basis.adjoint() * &basis;
        let residual = (&gram - &ComplexMatrix::identity(basis.cols())).max_abs();
        if residual > 1e-12 {
            return Err(Error::DimensionMismatch(format!("basis is not orthonormal (‖B*B − 1‖ = {residual:e})")));
        }
        Ok(Self { basis })
    }

    pub(crate) fn from_orthonormal_unchecked(basis: ComplexMatrix) -> Self {
        Self { basis }
    }

    /// Span of the columns of `m`, rank decided with `rank_tol`.
    pub fn span_of(m: &ComplexMatrix, tol: &ToleranceConfig) -> Self {
        linalg::range_basis(m, tol)
    }

    pub fn zero(n: usize) -> Self {
        Self { basis: ComplexMatrix::zeros(n, 0) }
    }

    pub fn full(n: usize) -> Self {
        Self { basis: ComplexMatrix::identity(n) }
    }

    /// Span of the canonical basis vectors at `indices` (0-based).
    pub fn coordinate(n: usize, indices: &[usize]) -> Self {
        Self { basis: ComplexMatrix::identity(n).select_columns(indices) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn projector(&self) -> ComplexMatrix {
        &self.basis * &self.basis.adjoint()
    }

    /// Orthonormal basis of the orthogonal complement, taken from the
    /// eigenvectors of `B·B*` below one half.
    pub fn orthogonal_complement(&self) -> Self {
        let n = self.ambient_dim();
        if self.dim() == 0 {
            return Self::full(n);
        }
        let eig = linalg::hermitian_eigen(&self.projector(), &ToleranceConfig::default()).expect("B·B* is Hermitian");
        Self { basis: eig.select(|v| v < 0.5) }
    }

    /// `a ∩ b` through principal angles: the right singular vectors of `B*A`
    /// with singular value (the cosine) at least `1 − rank_tol`, mapped back by `A`.
    pub fn intersection(&self, other: &Self, tol: &ToleranceConfig) -> Self {
        assert_eq!(self.ambient_dim(), other.ambient_dim(), "ambient dimension mismatch");
        let n = self.ambient_dim();
        if self.dim() == 0 || other.dim() == 0 {
            return Self::zero(n);
        }
        let cross = &other.basis.adjoint() * &self.basis;
        let dec = linalg::svd(&cross);
        let keep: Vec<usize> =
            (0..dec.singular_values.len()).filter(|&i| dec.singular_values[i] >= 1.0 - tol.rank_tol).collect();
        let vectors = &self.basis * &dec.v.select_columns(&keep);
        Self { basis: vectors }
    }

    /// Orthonormal basis of `self + other`.
    pub fn join(&self, other: &Self) -> Self {
        assert_eq!(self.ambient_dim(), other.ambient_dim(), "ambient dimension mismatch");
        let mut cols: Vec<Vec<C64>> = self.basis.columns();
        cols.extend(other.basis.columns());
        Self { basis: ComplexMatrix::from_columns(self.ambient_dim(), &orthonormalize(cols, 1e-8)) }
    }

    /// `‖A*B‖`; zero exactly when the subspaces are orthogonal.
    pub fn overlap(&self, other: &Self) -> f64 {
        if self.dim() == 0 || other.dim() == 0 {
            return 0.0;
        }
        (&self.basis.adjoint() * &other.basis).norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: usize, v: &[f64]) -> Subspace {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let cols = vec![v.iter().map(|&x| C64::new(x / norm, 0.0)).collect()];
        Subspace::from_orthonormal(ComplexMatrix::from_columns(n, &cols)).unwrap()
    }

    #[test]
    fn intersection_examples() {
        let tol = ToleranceConfig::default();
        let a = Subspace::coordinate(3, &[0, 1]);
        let b = Subspace::coordinate(3, &[1, 2]);
        let c = a.intersection(&b, &tol);
        assert_eq!(c.dim(), 1);
        assert!((c.basis()[(1, 0)].norm() - 1.0).abs() < 1e-15);

        let e1 = Subspace::coordinate(2, &[0]);
        let e2 = Subspace::coordinate(2, &[1]);
        assert_eq!(e1.intersection(&e2, &tol).dim(), 0);
        assert_eq!(line(2, &[1.0, 1.0]).intersection(&e1, &tol).dim(), 0);
    }

    #[test]
    fn projector_examples() {
        let p = line(2, &[1.0, 1.0]).projector();
        let expected = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert!((&p - &expected).max_abs() < 1e-15);
        assert_eq!(Subspace::zero(2).projector(), ComplexMatrix::zeros(2, 2));
        assert_eq!(Subspace::full(3).projector(), ComplexMatrix::identity(3));
    }

    #[test]
    fn complement_and_join() {
        let s = line(3, &[1.0, 1.0, 0.0]);
        let c = s.orthogonal_complement();
        assert_eq!(c.dim(), 2);
        assert!(s.overlap(&c) < 1e-14);
        assert_eq!(s.join(&c).dim(), 3);
        assert_eq!(Subspace::zero(2).orthogonal_complement().dim(), 2);
        assert_eq!(Subspace::full(2).orthogonal_complement().dim(), 0);
    }

    #[test]
    fn rejects_non_orthonormal() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(Subspace::from_orthonormal(m).is_err());
    }
}
