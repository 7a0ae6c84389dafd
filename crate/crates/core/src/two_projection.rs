//! Canonical geometry of a pair of projections: the five-way splitting of
//! `ℂⁿ`, the Halmos normal form and the midpoint constructions that place
//! both projections in a common unit ball.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::linalg::{self, hermitian_eigen, orthonormalize};
use crate::matrix::{ComplexMatrix, C64, ONE};
use crate::projection::{same_dim, Projection};
use crate::subspace::Subspace;
use crate::tolerance::ToleranceConfig;

/// Sizes of the five parts, in the order `m11, m00, m10, m01, generic`.
/// `generic` is even: two dimensions per angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairDims {
    pub d11: usize,
    pub d00: usize,
    pub d10: usize,
    pub d01: usize,
    pub generic: usize,
}

impl PairDims {
    pub fn total(&self) -> usize {
        self.d11 + self.d00 + self.d10 + self.d01 + self.generic
    }

    pub fn as_tuple(&self) -> (usize, usize, usize, usize, usize) {
        (self.d11, self.d00, self.d10, self.d01, self.generic)
    }
}

/// `Im p∩Im q`, `Ker p∩Ker q`, `Im p∩Ker q`, `Ker p∩Im q` and the
/// orthogonal complement of their sum.
#[derive(Debug, Clone)]
pub struct PairDecomposition {
    pub m11: Subspace,
    pub m00: Subspace,
    pub m10: Subspace,
    pub m01: Subspace,
    pub generic: Subspace,
}

impl PairDecomposition {
    pub fn dims(&self) -> PairDims {
        PairDims {
            d11: self.m11.dim(),
            d00: self.m00.dim(),
            d10: self.m10.dim(),
            d01: self.m01.dim(),
            generic: self.generic.dim(),
        }
    }

    pub fn parts(&self) -> [&Subspace; 5] {
        [&self.m11, &self.m00, &self.m10, &self.m01, &self.generic]
    }
}

pub fn pair_decompose(p: &Projection, q: &Projection, tol: &ToleranceConfig) -> Result<PairDecomposition> {
    same_dim(p.matrix(), q.matrix())?;
    let (im_p, ker_p) = p.range_and_kernel();
    let (im_q, ker_q) = q.range_and_kernel();
    let m11 = im_p.intersection(&im_q, tol);
    let m00 = ker_p.intersection(&ker_q, tol);
    let m10 = im_p.intersection(&ker_q, tol);
    let m01 = ker_p.intersection(&im_q, tol);
    let generic = m11.join(&m00).join(&m10).join(&m01).orthogonal_complement();
    Ok(PairDecomposition { m11, m00, m10, m01, generic })
}

/// Dimensions of `Ker(p+q−1)`, `Ker(p−q)` and `Ker(pq−qp)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelDims {
    pub d_sum: usize,
    pub d_diff: usize,
    pub d_comm: usize,
}

impl KernelDims {
    pub fn additive(&self) -> bool {
        self.d_comm == self.d_sum + self.d_diff
    }
}

/// The three operators have norm at most one, so singular values are cut at
/// the absolute level `rank_tol`.
pub fn kernel_dimension_report(p: &Projection, q: &Projection, tol: &ToleranceConfig) -> Result<KernelDims> {
    same_dim(p.matrix(), q.matrix())?;
    let (pm, qm) = (p.matrix(), q.matrix());
    let n = p.dim();
    let sum = &(pm + qm) - &ComplexMatrix::identity(n);
    let diff = pm - qm;
    let comm = &(pm * qm) - &(qm * pm);
    let null = |m: &ComplexMatrix| n - linalg::svd(m).rank_above(tol.rank_tol);
    Ok(KernelDims { d_sum: null(&sum), d_diff: null(&diff), d_comm: null(&comm) })
}

/// A unitary `u` in whose columns `p` and `q` take the canonical block form.
///
/// Column order: `m11, m00, m10, m01`, then one `(v, w)` pair per angle with
/// `v ∈ Im p`, `w ∈ Ker p`, `q v = c²v + cs·w`. Angles ascend.
#[derive(Debug, Clone, PartialEq)]
pub struct HalmosForm {
    u: ComplexMatrix,
    angles: Vec<f64>,
    dims: PairDims,
}

impl HalmosForm {
    /// Validates `u` (unitary within 1e-10), the angles (in `(0, π/2)`) and
    /// the block sizes.
    pub fn from_parts(
        u: ComplexMatrix,
        angles: Vec<f64>,
        d11: usize,
        d00: usize,
        d10: usize,
        d01: usize,
    ) -> Result<Self> {
        let dims = PairDims { d11, d00, d10, d01, generic: 2 * angles.len() };
        if !u.is_square() || u.rows() != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "basis is {}x{} but blocks need {}",
                u.rows(),
                u.cols(),
                dims.total()
            )));
        }
        let unitarity = (&(&u.adjoint() * &u) - &ComplexMatrix::identity(u.rows())).norm();
        if unitarity > 1e-10 {
            return Err(Error::BadParameter(format!("basis is not unitary (‖u*u − 1‖ = {unitarity:e})")));
        }
        if let Some(bad) = angles.iter().find(|&&t| !(t > 0.0 && t < std::f64::consts::FRAC_PI_2)) {
            return Err(Error::BadParameter(format!("angle {bad} outside (0, π/2)")));
        }
        Ok(Self { u, angles, dims })
    }

    pub fn u(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn dims(&self) -> PairDims {
        self.dims
    }

    fn generic_offset(&self) -> usize {
        self.dims.d11 + self.dims.d00 + self.dims.d10 + self.dims.d01
    }

    /// `(p, q)` in the basis `u`.
    pub fn canonical_blocks(&self) -> (ComplexMatrix, ComplexMatrix) {
        let d = self.dims;
        let n = d.total();
        let mut p = ComplexMatrix::zeros(n, n);
        let mut q = ComplexMatrix::zeros(n, n);
        for i in 0..d.d11 {
            p[(i, i)] = ONE;
            q[(i, i)] = ONE;
        }
        for i in d.d11 + d.d00..d.d11 + d.d00 + d.d10 {
            p[(i, i)] = ONE;
        }
        for i in d.d11 + d.d00 + d.d10..self.generic_offset() {
            q[(i, i)] = ONE;
        }
        for (b, &theta) in self.angles.iter().enumerate() {
            let (c, s) = (theta.cos(), theta.sin());
            let o = self.generic_offset() + 2 * b;
            p[(o, o)] = ONE;
            q[(o, o)] = C64::new(c * c, 0.0);
            q[(o, o + 1)] = C64::new(c * s, 0.0);
            q[(o + 1, o)] = C64::new(c * s, 0.0);
            q[(o + 1, o + 1)] = C64::new(s * s, 0.0);
        }
        (p, q)
    }

    /// Columns of `u` spanning `m10 ⊕ m01`.
    pub fn complementary_columns(&self) -> ComplexMatrix {
        let start = self.dims.d11 + self.dims.d00;
        let idx: Vec<usize> = (start..self.generic_offset()).collect();
        self.u.select_columns(&idx)
    }
}

pub fn halmos_form(p: &Projection, q: &Projection, tol: &ToleranceConfig) -> Result<HalmosForm> {
    same_dim(p.matrix(), q.matrix())?;
    let n = p.dim();
    let qm = q.matrix();
    let (im_p, ker_p) = p.range_and_kernel();
    let e = im_p.basis();
    let f = ker_p.basis();
    let cluster = tol.rank_tol;

    let mut m11 = Vec::new();
    let mut m10 = Vec::new();
    let mut generic: Vec<(f64, Vec<C64>)> = Vec::new();
    if e.cols() > 0 {
        let compressed = (&(&e.adjoint() * qm) * e).hermitian_part();
        let eig = hermitian_eigen(&compressed, tol)?;
        // descending eigenvalue means ascending angle
        for i in (0..eig.values.len()).rev() {
            let lambda = eig.values[i];
            let v = (e * &ComplexMatrix::from_columns(e.cols(), &[eig.vectors.column(i)])).column(0);
            if lambda >= 1.0 - cluster {
                m11.push(v);
            } else if lambda <= cluster {
                m10.push(v);
            } else {
                generic.push((lambda, v));
            }
        }
    }

    let mut partners = Vec::with_capacity(generic.len());
    for (lambda, v) in &generic {
        let vm = ComplexMatrix::from_columns(n, std::slice::from_ref(v));
        let qv = (qm * &vm).column(0);
        let w: Vec<C64> = qv.iter().zip(v).map(|(a, b)| a - b * *lambda).collect();
        partners.push(w);
    }
    let partners = orthonormalize(partners, 0.0);
    debug_assert_eq!(partners.len(), generic.len());

    let mut m00 = Vec::new();
    let mut m01 = Vec::new();
    if f.cols() > 0 {
        let rest = if partners.is_empty() {
            f.clone()
        } else {
            let w = ComplexMatrix::from_columns(n, &partners);
            let coords = Subspace::from_orthonormal_unchecked(&f.adjoint() * &w);
            f * coords.orthogonal_complement().basis()
        };
        if rest.cols() > 0 {
            let compressed = (&(&rest.adjoint() * qm) * &rest).hermitian_part();
            let eig = hermitian_eigen(&compressed, tol)?;
            for i in 0..eig.values.len() {
                let z = (&rest * &ComplexMatrix::from_columns(rest.cols(), &[eig.vectors.column(i)])).column(0);
                if eig.values[i] >= 0.5 {
                    m01.push(z);
                } else {
                    m00.push(z);
                }
            }
        }
    }

    let dims = PairDims { d11: m11.len(), d00: m00.len(), d10: m10.len(), d01: m01.len(), generic: 2 * generic.len() };
    let mut columns = Vec::with_capacity(n);
    columns.extend(m11);
    columns.extend(m00);
    columns.extend(m10);
    columns.extend(m01);
    let mut angles = Vec::with_capacity(generic.len());
    for ((lambda, v), w) in generic.into_iter().zip(partners) {
        angles.push(lambda.sqrt().clamp(0.0, 1.0).acos());
        columns.push(v);
        columns.push(w);
    }
    Ok(HalmosForm { u: ComplexMatrix::from_columns(n, &columns), angles, dims })
}

pub fn halmos_reconstruct(h: &HalmosForm) -> (Projection, Projection) {
    let (p, q) = h.canonical_blocks();
    (Projection::assemble(p.conjugate_by(&h.u)), Projection::assemble(q.conjugate_by(&h.u)))
}

/// A projection `r` between `p` and `q`, with the involution `τ` that swaps
/// `p` and `q` and commutes with `r`.
#[derive(Debug, Clone)]
pub struct GenericMidpoint {
    pub r: Projection,
    pub involution: ComplexMatrix,
}

/// Midpoint blocks in the basis `u`. The `m10 ⊕ m01` block is left zero in
/// both matrices.
fn midpoint_blocks(h: &HalmosForm) -> (ComplexMatrix, ComplexMatrix) {
    let d = h.dims;
    let n = d.total();
    let mut r = ComplexMatrix::zeros(n, n);
    let mut tau = ComplexMatrix::zeros(n, n);
    for i in 0..d.d11 {
        r[(i, i)] = ONE;
    }
    for i in 0..d.d11 + d.d00 {
        tau[(i, i)] = ONE;
    }
    for (b, &theta) in h.angles.iter().enumerate() {
        let (c, s) = (theta.cos(), theta.sin());
        let o = h.generic_offset() + 2 * b;
        r[(o, o)] = C64::new((1.0 + c) / 2.0, 0.0);
        r[(o, o + 1)] = C64::new(s / 2.0, 0.0);
        r[(o + 1, o)] = C64::new(s / 2.0, 0.0);
        r[(o + 1, o + 1)] = C64::new((1.0 - c) / 2.0, 0.0);
        tau[(o, o)] = C64::new(c, 0.0);
        tau[(o, o + 1)] = C64::new(s, 0.0);
        tau[(o + 1, o)] = C64::new(s, 0.0);
        tau[(o + 1, o + 1)] = C64::new(-c, 0.0);
    }
    (r, tau)
}

pub fn generic_midpoint(p: &Projection, q: &Projection, tol: &ToleranceConfig) -> Result<GenericMidpoint> {
    let h = halmos_form(p, q, tol)?;
    if h.dims.d10 > 0 || h.dims.d01 > 0 {
        return Err(Error::SumNotInjective { d10: h.dims.d10, d01: h.dims.d01 });
    }
    let (r, tau) = midpoint_blocks(&h);
    Ok(GenericMidpoint {
        r: Projection::assemble(r.conjugate_by(&h.u)),
        involution: tau.conjugate_by(&h.u).hermitian_part(),
    })
}

/// Orthonormal basis of `Im p` by column-pivoted Gram–Schmidt on `p`: at each
/// step the column with the largest remaining norm wins, ties to the lower
/// index. The pivot entry of every basis vector is real and positive, so the
/// result depends on `p` alone.
pub fn canonical_basis(p: &Projection) -> ComplexMatrix {
    let n = p.dim();
    let mut residual = p.matrix().columns();
    let mut used = vec![false; n];
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(p.rank());
    for _ in 0..p.rank() {
        let norms: Vec<f64> = residual.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
        let best = (0..n).filter(|&j| !used[j]).map(|j| norms[j]).fold(0.0, f64::max);
        if best == 0.0 {
            break;
        }
        let Some(j) = (0..n).find(|&j| !used[j] && norms[j] >= best - 1e-12 * best) else { break };
        used[j] = true;
        let mut b: Vec<C64> = residual[j].iter().map(|z| z / norms[j]).collect();
        for prev in &basis {
            let coeff: C64 = prev.iter().zip(&b).map(|(x, y)| x.conj() * y).sum();
            for (bi, pi) in b.iter_mut().zip(prev) {
                *bi -= coeff * pi;
            }
        }
        let norm: f64 = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        b.iter_mut().for_each(|z| *z /= norm);
        for col in residual.iter_mut() {
            let coeff: C64 = b.iter().zip(col.iter()).map(|(x, y)| x.conj() * y).sum();
            for (ci, bi) in col.iter_mut().zip(&b) {
                *ci -= coeff * bi;
            }
        }
        basis.push(b);
    }
    ComplexMatrix::from_columns(n, &basis)
}

/// `r = (π + u + u*)/2` for orthogonal equal-rank `p0, q0`, with
/// `π = p0 + q0` and the partial isometry `u = B_p·B_q*`.
pub fn complementary_midpoint(p0: &Projection, q0: &Projection, tol: &ToleranceConfig) -> Result<Projection> {
    same_dim(p0.matrix(), q0.matrix())?;
    if p0.rank() != q0.rank() {
        return Err(Error::RankMismatch { left: p0.rank(), right: q0.rank() });
    }
    let residual = (p0.matrix() * q0.matrix()).norm();
    if residual > tol.residual_tol {
        return Err(Error::NotOrthogonal { residual });
    }
    let pi = p0.matrix() + q0.matrix();
    let u = &canonical_basis(p0) * &canonical_basis(q0).adjoint();
    let r = (&(&pi + &u) + &u.adjoint()).scale(0.5);
    Projection::new(r, tol)
}

/// A projection `r` with `max(‖p−r‖, ‖q−r‖) ≤ 1/√2` for equal-rank `p, q`.
///
/// `ℂⁿ` splits into `Ker(p+q−1) = m10 ⊕ m01`, where the pair is
/// complementary, and its orthocomplement, where `p+q−1` is injective.
pub fn find_common_ball(p: &Projection, q: &Projection, tol: &ToleranceConfig) -> Result<Projection> {
    same_dim(p.matrix(), q.matrix())?;
    if p.rank() != q.rank() {
        return Err(Error::RankMismatch { left: p.rank(), right: q.rank() });
    }
    let h = halmos_form(p, q, tol)?;
    if h.dims.d10 != h.dims.d01 {
        return Err(Error::RankMismatch { left: h.dims.d10, right: h.dims.d01 });
    }
    let (blocks, _) = midpoint_blocks(&h);
    let generic_part = blocks.conjugate_by(&h.u);

    let k = h.complementary_columns();
    let pi = &k * &k.adjoint();
    let p0 = Projection::assemble(&(&pi * p.matrix()) * &pi);
    let q0 = Projection::assemble(&(&pi * q.matrix()) * &pi);
    let complementary_part = complementary_midpoint(&p0, &q0, tol)?;

    let r = Projection::new(&generic_part + complementary_part.matrix(), tol)?;
    let worst = (p.matrix() - r.matrix()).norm().max((q.matrix() - r.matrix()).norm());
    if worst > FRAC_1_SQRT_2 + tol.residual_tol {
        return Err(Error::Uncertified { residual: worst - FRAC_1_SQRT_2 });
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::spectral_norm;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn proj(rows: &[&[f64]]) -> Projection {
        Projection::new(ComplexMatrix::from_real_rows(rows), &tol()).unwrap()
    }

    fn diag(d: &[f64]) -> Projection {
        Projection::new(ComplexMatrix::from_diagonal(d), &tol()).unwrap()
    }

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, eps: f64) {
        let d = (a - b).max_abs();
        assert!(d <= eps, "differ by {d:e}\n{a:?}\n{b:?}");
    }

    fn half() -> Projection {
        proj(&[&[0.5, 0.5], &[0.5, 0.5]])
    }

    fn third_pair() -> (Projection, Projection) {
        let (c, s) = ((std::f64::consts::PI / 3.0).cos(), (std::f64::consts::PI / 3.0).sin());
        (diag(&[1.0, 0.0]), proj(&[&[c * c, c * s], &[c * s, s * s]]))
    }

    #[test]
    fn decomposition_examples() {
        let d = pair_decompose(&diag(&[1.0, 1.0, 0.0]), &diag(&[1.0, 0.0, 0.0]), &tol()).unwrap();
        assert_eq!(d.dims().as_tuple(), (1, 1, 1, 0, 0));
        assert!((d.m11.basis()[(0, 0)].norm() - 1.0).abs() < 1e-14);
        assert!((d.m10.basis()[(1, 0)].norm() - 1.0).abs() < 1e-14);
        assert!((d.m00.basis()[(2, 0)].norm() - 1.0).abs() < 1e-14);

        let d = pair_decompose(&diag(&[1.0, 0.0]), &half(), &tol()).unwrap();
        assert_eq!(d.dims().as_tuple(), (0, 0, 0, 0, 2));

        let p = diag(&[1.0, 0.0, 1.0]);
        assert_eq!(pair_decompose(&p, &p, &tol()).unwrap().dims().as_tuple(), (2, 1, 0, 0, 0));
    }

    #[test]
    fn kernel_dimension_examples() {
        let k = kernel_dimension_report(&diag(&[1.0, 1.0, 0.0]), &diag(&[1.0, 0.0, 0.0]), &tol()).unwrap();
        assert_eq!((k.d_sum, k.d_diff, k.d_comm), (1, 2, 3));
        let k = kernel_dimension_report(&diag(&[1.0, 0.0]), &half(), &tol()).unwrap();
        assert_eq!((k.d_sum, k.d_diff, k.d_comm), (0, 0, 0));
        let p = diag(&[1.0, 0.0]);
        let k = kernel_dimension_report(&p, &p, &tol()).unwrap();
        assert_eq!((k.d_sum, k.d_diff, k.d_comm), (0, 2, 2));
    }

    #[test]
    fn halmos_examples() {
        let (p, q) = third_pair();
        let h = halmos_form(&p, &q, &tol()).unwrap();
        assert_eq!(h.angles().len(), 1);
        assert!((h.angles()[0] - std::f64::consts::FRAC_PI_3).abs() < 1e-12);

        let h = halmos_form(&diag(&[1.0, 0.0, 1.0]), &diag(&[1.0, 1.0, 0.0]), &tol()).unwrap();
        assert!(h.angles().is_empty());
        assert_eq!(h.dims().as_tuple(), (1, 0, 1, 1, 0));

        let h = halmos_form(&diag(&[1.0, 0.0]), &half(), &tol()).unwrap();
        assert!((h.angles()[0] - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn reconstruct_examples() {
        let u = ComplexMatrix::identity(2);
        let h = HalmosForm::from_parts(u.clone(), vec![std::f64::consts::FRAC_PI_4], 0, 0, 0, 0).unwrap();
        let (p, q) = halmos_reconstruct(&h);
        close(p.matrix(), diag(&[1.0, 0.0]).matrix(), 1e-15);
        close(q.matrix(), half().matrix(), 1e-15);

        let h = HalmosForm::from_parts(ComplexMatrix::identity(3), vec![], 2, 1, 0, 0).unwrap();
        let (p, q) = halmos_reconstruct(&h);
        assert_eq!(p.matrix(), &ComplexMatrix::from_diagonal(&[1.0, 1.0, 0.0]));
        assert_eq!(q.matrix(), p.matrix());

        let h = HalmosForm::from_parts(u, vec![], 0, 0, 1, 1).unwrap();
        let (p, q) = halmos_reconstruct(&h);
        assert_eq!(p.matrix(), &ComplexMatrix::from_diagonal(&[1.0, 0.0]));
        assert_eq!(q.matrix(), &ComplexMatrix::from_diagonal(&[0.0, 1.0]));

        assert!(HalmosForm::from_parts(ComplexMatrix::identity(2), vec![0.0], 0, 0, 0, 0).is_err());
    }

    #[test]
    fn halmos_round_trip_on_mixed_pair() {
        let (p, q) = (
            diag(&[1.0, 0.0, 1.0, 0.0]),
            proj(&[&[0.5, 0.5, 0.0, 0.0], &[0.5, 0.5, 0.0, 0.0], &[0.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 1.0]]),
        );
        let h = halmos_form(&p, &q, &tol()).unwrap();
        assert_eq!(h.dims().as_tuple(), (0, 0, 1, 1, 2));
        let (p1, q1) = halmos_reconstruct(&h);
        close(p1.matrix(), p.matrix(), 1e-12);
        close(q1.matrix(), q.matrix(), 1e-12);
    }

    #[test]
    fn generic_midpoint_examples() {
        let p = diag(&[1.0, 0.0]);
        let m = generic_midpoint(&p, &half(), &tol()).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[&[0.8535534, 0.3535534], &[0.3535534, 0.1464466]]);
        close(m.r.matrix(), &expected, 1e-7);
        assert!((spectral_norm(&(p.matrix() - m.r.matrix())) - 0.3826834).abs() < 1e-7);

        let (p, q) = third_pair();
        let m = generic_midpoint(&p, &q, &tol()).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[&[0.75, 0.4330127], &[0.4330127, 0.25]]);
        close(m.r.matrix(), &expected, 1e-7);
        assert!((spectral_norm(&(p.matrix() - m.r.matrix())) - 0.5).abs() < 1e-12);
        let tau = &m.involution;
        close(&(&(tau * p.matrix()) * tau), q.matrix(), 1e-12);
        close(&(tau * m.r.matrix()), &(m.r.matrix() * tau), 1e-12);
        close(&(tau * tau), &ComplexMatrix::identity(2), 1e-12);

        let p = diag(&[1.0, 0.0, 1.0]);
        close(generic_midpoint(&p, &p, &tol()).unwrap().r.matrix(), p.matrix(), 1e-14);

        assert!(matches!(
            generic_midpoint(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0]), &tol()),
            Err(Error::SumNotInjective { d10: 1, d01: 1 })
        ));
    }

    #[test]
    fn complementary_midpoint_examples() {
        let r = complementary_midpoint(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0]), &tol()).unwrap();
        close(r.matrix(), half().matrix(), 1e-15);
        assert!((spectral_norm(&(r.matrix() - diag(&[1.0, 0.0]).matrix())) - FRAC_1_SQRT_2).abs() < 1e-12);

        let r = complementary_midpoint(&diag(&[1.0, 0.0, 0.0, 0.0]), &diag(&[0.0, 1.0, 0.0, 0.0]), &tol()).unwrap();
        let mut expected = ComplexMatrix::zeros(4, 4);
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            expected[(i, j)] = C64::new(0.5, 0.0);
        }
        close(r.matrix(), &expected, 1e-15);

        assert!(matches!(
            complementary_midpoint(&diag(&[1.0, 1.0, 0.0]), &diag(&[0.0, 0.0, 1.0]), &tol()),
            Err(Error::RankMismatch { left: 2, right: 1 })
        ));
        assert!(matches!(
            complementary_midpoint(&diag(&[1.0, 0.0]), &half(), &tol()),
            Err(Error::NotOrthogonal { .. })
        ));
    }

    #[test]
    fn common_ball_examples() {
        let p = diag(&[1.0, 0.0, 0.0]);
        close(find_common_ball(&p, &p, &tol()).unwrap().matrix(), p.matrix(), 1e-14);

        let r = find_common_ball(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0]), &tol()).unwrap();
        close(r.matrix(), half().matrix(), 1e-14);

        // generic block on e1,e2 and complementary block on e3,e4
        let p = diag(&[1.0, 0.0, 1.0, 0.0]);
        let q = proj(&[&[0.5, 0.5, 0.0, 0.0], &[0.5, 0.5, 0.0, 0.0], &[0.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 1.0]]);
        let r = find_common_ball(&p, &q, &tol()).unwrap();
        let c = FRAC_1_SQRT_2;
        let expected = ComplexMatrix::from_real_rows(&[
            &[(1.0 + c) / 2.0, c / 2.0, 0.0, 0.0],
            &[c / 2.0, (1.0 - c) / 2.0, 0.0, 0.0],
            &[0.0, 0.0, 0.5, 0.5],
            &[0.0, 0.0, 0.5, 0.5],
        ]);
        close(r.matrix(), &expected, 1e-12);
        let worst = spectral_norm(&(p.matrix() - r.matrix())).max(spectral_norm(&(q.matrix() - r.matrix())));
        assert!(worst <= FRAC_1_SQRT_2 + 1e-8);

        assert!(matches!(
            find_common_ball(&diag(&[1.0, 1.0]), &diag(&[1.0, 0.0]), &tol()),
            Err(Error::RankMismatch { left: 2, right: 1 })
        ));
    }

    #[test]
    fn complementary_part_spans_kernel_of_sum() {
        let p = diag(&[1.0, 0.0, 1.0, 0.0]);
        let q = proj(&[&[0.5, 0.5, 0.0, 0.0], &[0.5, 0.5, 0.0, 0.0], &[0.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 1.0]]);
        let h = halmos_form(&p, &q, &tol()).unwrap();
        let k = h.complementary_columns();
        let sum = &(p.matrix() + q.matrix()) - &ComplexMatrix::identity(4);
        let kernel = linalg::kernel_basis(&sum, &tol());
        close(&(&k * &k.adjoint()), &kernel.projector(), 1e-12);
    }

    #[test]
    fn canonical_basis_is_deterministic() {
        let b = canonical_basis(&half());
        assert!((b[(0, 0)].re - FRAC_1_SQRT_2).abs() < 1e-15 && b[(0, 0)].im == 0.0);
        let p = diag(&[0.0, 1.0, 1.0]);
        let b = canonical_basis(&p);
        assert_eq!(b, ComplexMatrix::identity(3).select_columns(&[1, 2]));
    }
}
