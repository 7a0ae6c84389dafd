//! Jacobi-based Hermitian eigensolver and SVD, inversion, and the subspace
//! computations built on them.
//!
//! Both decompositions reduce to the same primitive: a unitary plane rotation
//! that diagonalizes a 2×2 Hermitian block `[[a, b], [b̄, d]]`. The two-sided
//! eigensolver applies it to the matrix itself; the one-sided (Hestenes) SVD
//! applies it to the Gram block of a column pair.

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, ZERO};
use crate::subspace::Subspace;
use crate::tolerance::ToleranceConfig;

const MAX_SWEEPS: usize = 100;

/// Plane rotation `G = [[c, s], [-s·φ, c·φ]]` with `|φ| = 1`.
#[derive(Debug, Clone, Copy)]
struct Rotation {
    c: f64,
    s: f64,
    phase: C64,
}

impl Rotation {
    /// Rotation with `G* [[a, b], [b̄, d]] G` diagonal. `b` must be nonzero.
    fn diagonalizing(a: f64, b: C64, d: f64) -> Self {
        let r = b.norm();
        let phase = (b / r).conj();
        let tau = (d - a) / (2.0 * r);
        let t =
            if tau >= 0.0 { 1.0 / (tau + (1.0 + tau * tau).sqrt()) } else { -1.0 / (-tau + (1.0 + tau * tau).sqrt()) };
        let c = 1.0 / (1.0 + t * t).sqrt();
        Self { c, s: t * c, phase }
    }

    /// `(x, y) ↦ (c·x − s·φ·y, s·x + c·φ·y)`: right-multiplication on a column pair.
    #[inline]
    fn apply(&self, x: C64, y: C64) -> (C64, C64) {
        let py = self.phase * y;
        (x * self.c - py * self.s, x * self.s + py * self.c)
    }

    /// Left-multiplication by `G*` on a row pair.
    #[inline]
    fn apply_adjoint(&self, x: C64, y: C64) -> (C64, C64) {
        let py = self.phase.conj() * y;
        (x * self.c - py * self.s, x * self.s + py * self.c)
    }
}

/// Eigendecomposition `m = V·diag(values)·V*` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Unitary; column `i` belongs to `values[i]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Columns of `vectors` whose eigenvalue satisfies `keep`.
    pub fn select(&self, keep: impl Fn(f64) -> bool) -> ComplexMatrix {
        let idx: Vec<usize> = (0..self.values.len()).filter(|&i| keep(self.values[i])).collect();
        self.vectors.select_columns(&idx)
    }
}

/// Cyclic two-sided Jacobi on a Hermitian matrix.
///
/// Fails with `NotHermitian` when `‖m − m*‖` exceeds `tol.residual_tol`; the
/// Hermitian part of `m` is what gets diagonalized.
pub fn hermitian_eigen(m: &ComplexMatrix, tol: &ToleranceConfig) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let residual = m.hermitian_residual();
    if residual > tol.residual_tol {
        return Err(Error::NotHermitian { residual });
    }
    Ok(jacobi_eigen(&m.hermitian_part()))
}

fn jacobi_eigen(m: &ComplexMatrix) -> HermitianEigen {
    let n = m.rows();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);
    let negligible = 1e-18 * m.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                if mag <= negligible || (app.abs() + 100.0 * mag == app.abs() && aqq.abs() + 100.0 * mag == aqq.abs()) {
                    a[(p, q)] = ZERO;
                    a[(q, p)] = ZERO;
                    continue;
                }
                rotated = true;
                let rot = Rotation::diagonalizing(app, apq, aqq);
                for k in 0..n {
                    let (x, y) = rot.apply(a[(k, p)], a[(k, q)]);
                    a[(k, p)] = x;
                    a[(k, q)] = y;
                }
                for k in 0..n {
                    let (x, y) = rot.apply_adjoint(a[(p, k)], a[(q, k)]);
                    a[(p, k)] = x;
                    a[(q, k)] = y;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let (x, y) = rot.apply(v[(k, p)], v[(k, q)]);
                    v[(k, p)] = x;
                    v[(k, q)] = y;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re).then(i.cmp(&j)));
    HermitianEigen { values: order.iter().map(|&i| a[(i, i)].re).collect(), vectors: v.select_columns(&order) }
}

/// Singular value decomposition `m = Σ σᵢ uᵢ vᵢ*`.
#[derive(Debug, Clone)]
pub struct Svd {
    /// Descending, one per column of the input.
    pub singular_values: Vec<f64>,
    /// Unitary `cols × cols`; column `i` is the right singular vector of `σᵢ`.
    pub v: ComplexMatrix,
    /// `rows × cols`; column `i` is `m·vᵢ / σᵢ`, or zero when `σᵢ = 0`.
    pub u: ComplexMatrix,
}

impl Svd {
    pub fn max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Smallest singular value of a square input (`0` for an empty matrix).
    pub fn min(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0)
    }

    /// Number of singular values strictly above `cutoff`.
    pub fn rank_above(&self, cutoff: f64) -> usize {
        self.singular_values.iter().filter(|&&s| s > cutoff).count()
    }
}

/// One-sided Jacobi SVD. Singular values carry high relative accuracy.
pub fn svd(m: &ComplexMatrix) -> Svd {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = m.columns();
    let mut v: Vec<Vec<C64>> = ComplexMatrix::identity(cols).columns();
    let eps = f64::EPSILON * (rows.max(1) as f64);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..cols {
            for j in (i + 1)..cols {
                let (alpha, beta, gamma) = {
                    let (wi, wj) = (&w[i], &w[j]);
                    let alpha: f64 = wi.iter().map(|z| z.norm_sqr()).sum();
                    let beta: f64 = wj.iter().map(|z| z.norm_sqr()).sum();
                    let gamma: C64 = wi.iter().zip(wj).map(|(x, y)| x.conj() * y).sum();
                    (alpha, beta, gamma)
                };
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let rot = Rotation::diagonalizing(alpha, gamma, beta);
                rotate_pair(&mut w, i, j, &rot);
                rotate_pair(&mut v, i, j, &rot);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = w.iter().map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));

    let singular_values: Vec<f64> = order.iter().map(|&i| norms[i]).collect();
    let u_cols: Vec<Vec<C64>> = order
        .iter()
        .map(|&i| {
            let s = norms[i];
            if s > 0.0 {
                w[i].iter().map(|z| z / s).collect()
            } else {
                vec![ZERO; rows]
            }
        })
        .collect();
    let v_cols: Vec<Vec<C64>> = order.iter().map(|&i| v[i].clone()).collect();
    Svd {
        singular_values,
        v: ComplexMatrix::from_columns(cols, &v_cols),
        u: ComplexMatrix::from_columns(rows, &u_cols),
    }
}

fn rotate_pair(cols: &mut [Vec<C64>], i: usize, j: usize, rot: &Rotation) {
    let (head, tail) = cols.split_at_mut(j);
    let (ci, cj) = (&mut head[i], &mut tail[0]);
    for (x, y) in ci.iter_mut().zip(cj.iter_mut()) {
        let (nx, ny) = rot.apply(*x, *y);
        *x = nx;
        *y = ny;
    }
}

/// Largest singular value.
pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    if m.rows() == 0 || m.cols() == 0 {
        return 0.0;
    }
    // The one-sided sweep works on columns; use the narrower orientation.
    if m.cols() > m.rows() {
        svd(&m.adjoint()).max()
    } else {
        svd(m).max()
    }
}

/// Smallest singular value of a square matrix.
pub fn min_singular_value(m: &ComplexMatrix) -> f64 {
    svd(m).min()
}

/// Inverse of a square matrix whose smallest singular value is at least
/// `inv_tol · ‖m‖`.
pub fn solve_inverse(m: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let dec = svd(m);
    if m.rows() > 0 && (dec.max() == 0.0 || dec.min() < tol.inv_tol * dec.max()) {
        return Err(Error::Singular { min_sv: dec.min() });
    }
    Ok(gauss_jordan_inverse(m))
}

/// Gauss–Jordan elimination with partial pivoting; the caller has checked
/// invertibility.
pub(crate) fn gauss_jordan_inverse(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.rows();
    let mut a = m.clone();
    let mut inv = ComplexMatrix::identity(n);
    for col in 0..n {
        let pivot =
            (col..n).max_by(|&i, &j| a[(i, col)].norm().total_cmp(&a[(j, col)].norm())).expect("nonempty range");
        if pivot != col {
            for k in 0..n {
                let t = a[(col, k)];
                a[(col, k)] = a[(pivot, k)];
                a[(pivot, k)] = t;
                let t = inv[(col, k)];
                inv[(col, k)] = inv[(pivot, k)];
                inv[(pivot, k)] = t;
            }
        }
        let d = a[(col, col)].inv();
        for k in 0..n {
            a[(col, k)] *= d;
            inv[(col, k)] *= d;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = a[(i, col)];
            if f == ZERO {
                continue;
            }
            for k in 0..n {
                let (ack, ick) = (a[(col, k)], inv[(col, k)]);
                a[(i, k)] -= f * ack;
                inv[(i, k)] -= f * ick;
            }
        }
    }
    inv
}

/// Orthonormal basis of `{x : ‖m x‖ ≤ rank_tol·‖m‖·‖x‖}`.
pub fn kernel_basis(m: &ComplexMatrix, tol: &ToleranceConfig) -> Subspace {
    let dec = svd(m);
    kernel_from_svd(&dec, tol.rank_tol * dec.max())
}

/// Kernel with an absolute singular-value cutoff.
pub fn kernel_basis_abs(m: &ComplexMatrix, cutoff: f64) -> Subspace {
    kernel_from_svd(&svd(m), cutoff)
}

fn kernel_from_svd(dec: &Svd, cutoff: f64) -> Subspace {
    let idx: Vec<usize> = (0..dec.singular_values.len()).filter(|&i| dec.singular_values[i] <= cutoff).collect();
    Subspace::from_orthonormal_unchecked(dec.v.select_columns(&idx))
}

/// Numerical rank with the relative cutoff `rank_tol · ‖m‖`.
pub fn rank(m: &ComplexMatrix, tol: &ToleranceConfig) -> usize {
    let dec = svd(m);
    dec.rank_above(tol.rank_tol * dec.max())
}

/// Orthonormal basis of the column space of `m`, rank decided by `rank_tol`.
pub fn range_basis(m: &ComplexMatrix, tol: &ToleranceConfig) -> Subspace {
    let dec = svd(m);
    let r = dec.rank_above(tol.rank_tol * dec.max());
    let cols: Vec<Vec<C64>> = (0..r).map(|j| dec.u.column(j)).collect();
    Subspace::from_orthonormal_unchecked(ComplexMatrix::from_columns(m.rows(), &orthonormalize(cols, 0.5)))
}

/// Modified Gram–Schmidt with one reorthogonalization pass. Columns whose
/// residual norm falls below `drop · (original norm)` are discarded.
pub fn orthonormalize(cols: Vec<Vec<C64>>, drop: f64) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(cols.len());
    for mut x in cols {
        let original: f64 = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if original == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for b in &basis {
                let coeff: C64 = b.iter().zip(&x).map(|(bi, xi)| bi.conj() * xi).sum();
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi -= coeff * bi;
                }
            }
        }
        let norm: f64 = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > drop * original {
            basis.push(x.into_iter().map(|z| z / norm).collect());
        }
    }
    basis
}

/// Orthonormal basis of `a ∩ b`: directions whose principal-angle cosine is at
/// least `1 − rank_tol`.
pub fn subspace_intersection(a: &Subspace, b: &Subspace, tol: &ToleranceConfig) -> Subspace {
    a.intersection(b, tol)
}

/// Orthogonal projection `B·B*` onto `s`.
pub fn projector_of(s: &Subspace) -> ComplexMatrix {
    s.projector()
}
