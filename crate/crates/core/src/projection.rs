//! Idempotents and orthogonal projections: certified types, the order and
//! equivalence relations, Kovarik's idempotent and the paths it produces.

use crate::error::{Error, Result};
use crate::linalg::{self, svd};
use crate::matrix::ComplexMatrix;
use crate::subspace::Subspace;
use crate::tolerance::ToleranceConfig;

/// A square matrix `e` with `‖e² − e‖` recorded at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Idempotent {
    m: ComplexMatrix,
    residual: f64,
}

impl Idempotent {
    pub fn new(m: ComplexMatrix, tol: &ToleranceConfig) -> Result<Self> {
        square(&m)?;
        let residual = m.idempotent_residual();
        if residual > tol.residual_tol {
            return Err(Error::NotIdempotent { residual });
        }
        Ok(Self { m, residual })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.m
    }

    /// `‖e² − e‖`.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    /// `1 − e`: exchanges range and kernel.
    pub fn complement(&self) -> Self {
        let m = self.m.complement();
        let residual = m.idempotent_residual();
        Self { m, residual }
    }
}

/// A square matrix `p` with `p² = p = p*` up to the recorded residuals.
///
/// For a Hermitian matrix `‖p² − p‖ = max |λ² − λ|`, so an accepted
/// idempotent residual also places every eigenvalue within about
/// `residual_tol` of `{0, 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    m: ComplexMatrix,
    idem_residual: f64,
    herm_residual: f64,
    rank: usize,
}

impl Projection {
    pub fn new(m: ComplexMatrix, tol: &ToleranceConfig) -> Result<Self> {
        square(&m)?;
        let idem_residual = m.idempotent_residual();
        let herm_residual = m.hermitian_residual();
        if idem_residual > tol.residual_tol || herm_residual > tol.residual_tol {
            return Err(Error::NotProjection { idem_residual, herm_residual });
        }
        let rank = m.trace().re.round().max(0.0) as usize;
        Ok(Self { m, idem_residual, herm_residual, rank })
    }

    /// Orthogonal projection onto `s`.
    pub fn onto(s: &Subspace) -> Self {
        let m = s.projector();
        Self { idem_residual: m.idempotent_residual(), herm_residual: m.hermitian_residual(), rank: s.dim(), m }
    }

    /// Records residuals and rank of a matrix that is a projection by
    /// construction, without the acceptance check.
    pub(crate) fn assemble(m: ComplexMatrix) -> Self {
        Self {
            idem_residual: m.idempotent_residual(),
            herm_residual: m.hermitian_residual(),
            rank: m.trace().re.round().max(0.0) as usize,
            m,
        }
    }

    pub fn zero(n: usize) -> Self {
        Self::onto(&Subspace::zero(n))
    }

    pub fn identity(n: usize) -> Self {
        Self::onto(&Subspace::full(n))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.m
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn idem_residual(&self) -> f64 {
        self.idem_residual
    }

    pub fn herm_residual(&self) -> f64 {
        self.herm_residual
    }

    pub fn as_idempotent(&self) -> Idempotent {
        Idempotent { m: self.m.clone(), residual: self.idem_residual }
    }

    /// `p⊥ = 1 − p`.
    pub fn complement(&self) -> Self {
        let m = self.m.complement();
        Self {
            idem_residual: m.idempotent_residual(),
            herm_residual: m.hermitian_residual(),
            rank: self.dim() - self.rank,
            m,
        }
    }

    /// Orthonormal bases of `Im p` and `Ker p`, split at eigenvalue one half.
    pub fn range_and_kernel(&self) -> (Subspace, Subspace) {
        let eig =
            linalg::hermitian_eigen(&self.m.hermitian_part(), &ToleranceConfig::default()).expect("Hermitian part");
        (
            Subspace::from_orthonormal_unchecked(eig.select(|v| v >= 0.5)),
            Subspace::from_orthonormal_unchecked(eig.select(|v| v < 0.5)),
        )
    }

    pub fn range(&self) -> Subspace {
        self.range_and_kernel().0
    }

    pub fn kernel(&self) -> Subspace {
        self.range_and_kernel().1
    }
}

fn square(m: &ComplexMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare { rows: m.rows(), cols: m.cols() })
    }
}

pub(crate) fn same_dim(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.rows() == b.rows() && a.cols() == b.cols() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!("{}x{} vs {}x{}", a.rows(), a.cols(), b.rows(), b.cols())))
    }
}

/// Outcome of [`classify`].
#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    Projection(Projection),
    Idempotent(Idempotent),
    Neither,
}

pub fn classify(m: &ComplexMatrix, tol: &ToleranceConfig) -> Classification {
    if !m.is_square() {
        return Classification::Neither;
    }
    if let Ok(p) = Projection::new(m.clone(), tol) {
        return Classification::Projection(p);
    }
    match Idempotent::new(m.clone(), tol) {
        Ok(e) => Classification::Idempotent(e),
        Err(_) => Classification::Neither,
    }
}

/// `p ≤ q`, i.e. `pq = qp = p`.
pub fn order_leq(p: &Projection, q: &Projection, tol: &ToleranceConfig) -> Result<bool> {
    same_dim(p.matrix(), q.matrix())?;
    let (pm, qm) = (p.matrix(), q.matrix());
    Ok((&(pm * qm) - pm).norm() <= tol.residual_tol && (&(qm * pm) - pm).norm() <= tol.residual_tol)
}

/// Murray–von Neumann equivalence in `M_n`: equal rank. Equal rank is also
/// the homotopy (and unitary equivalence) criterion there.
pub fn mv_equivalent(p: &Projection, q: &Projection) -> Result<bool> {
    same_dim(p.matrix(), q.matrix())?;
    Ok(p.rank() == q.rank())
}

/// Residuals of the algebraic range/kernel criteria for two idempotents `a, b`:
/// `max(‖a⊥b‖, ‖b⊥a‖)` vanishes iff `Im a = Im b`, and
/// `max(‖ab⊥‖, ‖ba⊥‖)` vanishes iff `Ker a = Ker b`.
pub fn range_kernel_residuals(a: &ComplexMatrix, b: &ComplexMatrix) -> (f64, f64) {
    let (ac, bc) = (a.complement(), b.complement());
    let range = (&ac * b).norm().max((&bc * a).norm());
    let kernel = (a * &bc).norm().max((b * &ac).norm());
    (range, kernel)
}

/// `(Im p = Im q, Ker p = Ker q)` at `residual_tol`.
pub fn range_kernel_match(p: &Idempotent, q: &Idempotent, tol: &ToleranceConfig) -> Result<(bool, bool)> {
    same_dim(p.matrix(), q.matrix())?;
    let (range, kernel) = range_kernel_residuals(p.matrix(), q.matrix());
    Ok((range <= tol.residual_tol, kernel <= tol.residual_tol))
}

/// Invertibility of `p + q − 1` from its singular values. The operands have
/// unit scale, so the cutoff is `inv_tol · max(‖p + q − 1‖, 1)`; a sum that
/// cancels to rounding noise is never taken as invertible.
fn sum_invertible(dec: &linalg::Svd, tol: &ToleranceConfig) -> bool {
    dec.singular_values.is_empty() || dec.min() >= tol.inv_tol * dec.max().max(1.0)
}

/// `(p + q − 1)⁻¹`, or `SumNotInvertible` when [`sum_invertible`] fails.
pub(crate) fn sum_inverse(p: &ComplexMatrix, q: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    same_dim(p, q)?;
    let n = p.rows();
    let sum = &(p + q) - &ComplexMatrix::identity(n);
    let dec = svd(&sum);
    if !sum_invertible(&dec, tol) {
        return Err(Error::SumNotInvertible { min_sv: dec.min() });
    }
    Ok(linalg::gauss_jordan_inverse(&sum))
}

/// Certificate of a Kovarik idempotent `r` built from `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KovarikCertificate {
    /// `‖r² − r‖`.
    pub idempotent: f64,
    /// `max(‖p⊥r‖, ‖r⊥p‖)`: same range as `p`.
    pub range: f64,
    /// `max(‖rq⊥‖, ‖qr⊥‖)`: same kernel as `q`.
    pub kernel: f64,
}

impl KovarikCertificate {
    pub fn worst(&self) -> f64 {
        self.idempotent.max(self.range).max(self.kernel)
    }
}

/// Kovarik's idempotent `r = p(p + q − 1)⁻²q` with `Im r = Im p` and
/// `Ker r = Ker q`, together with its certificate.
pub fn kovarik_certified(
    p: &Idempotent,
    q: &Idempotent,
    tol: &ToleranceConfig,
) -> Result<(Idempotent, KovarikCertificate)> {
    let w = sum_inverse(p.matrix(), q.matrix(), tol)?;
    let r = &(&(p.matrix() * &w) * &w) * q.matrix();
    let (range, _) = range_kernel_residuals(p.matrix(), &r);
    let (_, kernel) = range_kernel_residuals(&r, q.matrix());
    let cert = KovarikCertificate { idempotent: r.idempotent_residual(), range, kernel };
    if cert.worst() > tol.residual_tol {
        return Err(Error::Uncertified { residual: cert.worst() });
    }
    Ok((Idempotent { m: r, residual: cert.idempotent }, cert))
}

pub fn kovarik(p: &Idempotent, q: &Idempotent, tol: &ToleranceConfig) -> Result<Idempotent> {
    kovarik_certified(p, q, tol).map(|(r, _)| r)
}

/// The two Kovarik idempotents of a pair and the inverse identity they satisfy.
#[derive(Debug, Clone)]
pub struct ConversePair {
    /// `Im r1 = Im p`, `Ker r1 = Ker q`.
    pub r1: Idempotent,
    /// `Im r2 = Im q`, `Ker r2 = Ker p`.
    pub r2: Idempotent,
    /// `‖(r1 + r2 − 1)(p + q − 1) − 1‖`.
    pub inverse_residual: f64,
}

pub fn converse_kovarik(p: &Idempotent, q: &Idempotent, tol: &ToleranceConfig) -> Result<ConversePair> {
    let r1 = kovarik(p, q, tol)?;
    let r2 = kovarik(q, p, tol)?;
    let one = ComplexMatrix::identity(p.dim());
    let lhs = &(r1.matrix() + r2.matrix()) - &one;
    let sum = &(p.matrix() + q.matrix()) - &one;
    let inverse_residual = (&(&lhs * &sum) - &one).norm();
    if inverse_residual > tol.residual_tol {
        return Err(Error::Uncertified { residual: inverse_residual });
    }
    Ok(ConversePair { r1, r2, inverse_residual })
}

/// The three equivalent descriptions of `q ∈ U_p`, each decided on its own.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallReport {
    /// `p + q − 1` invertible.
    pub invertible_sum: bool,
    /// `‖p − q‖ < 1`.
    pub norm_lt_one: bool,
    /// `ℂⁿ = Im p ⊕ Ker q`.
    pub direct_sum: bool,
    pub norm_value: f64,
    pub min_sv_sum: f64,
}

impl BallReport {
    pub fn all(&self) -> bool {
        self.invertible_sum && self.norm_lt_one && self.direct_sum
    }

    pub fn none(&self) -> bool {
        !(self.invertible_sum || self.norm_lt_one || self.direct_sum)
    }

    pub fn agree(&self) -> bool {
        self.all() || self.none()
    }
}

/// Whether `‖p − q‖ < 1` with the `rank_tol` margin that keeps the decision
/// away from the unit sphere.
pub(crate) fn in_unit_ball(norm: f64, tol: &ToleranceConfig) -> bool {
    norm < 1.0 - tol.rank_tol
}

pub fn ball_predicates(p: &Projection, q: &Projection, tol: &ToleranceConfig) -> Result<BallReport> {
    same_dim(p.matrix(), q.matrix())?;
    let n = p.dim();
    let one = ComplexMatrix::identity(n);

    let sum = svd(&(&(p.matrix() + q.matrix()) - &one));
    let min_sv_sum = sum.min();
    let invertible_sum = sum_invertible(&sum, tol);

    let norm_value = (p.matrix() - q.matrix()).norm();
    let norm_lt_one = in_unit_ball(norm_value, tol);

    let im_p = p.range();
    let ker_q = q.kernel();
    let direct_sum = im_p.dim() + ker_q.dim() == n && {
        let joined = im_p.basis().hstack(ker_q.basis());
        let dec = svd(&joined);
        n == 0 || dec.rank_above(tol.rank_tol * dec.max()) == n
    };

    Ok(BallReport { invertible_sum, norm_lt_one, direct_sum, norm_value, min_sv_sum })
}

fn check_t(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::BadParameter(format!("path parameter t = {t} outside [0, 1]")))
    }
}

/// Piecewise-affine idempotent path `p → r → q` through the Kovarik
/// idempotent, with `r` reached at `t = 1/2`.
#[derive(Debug, Clone)]
pub struct IdempotentPath {
    p: ComplexMatrix,
    r: ComplexMatrix,
    q: ComplexMatrix,
}

impl IdempotentPath {
    pub fn new(p: &Idempotent, q: &Idempotent, tol: &ToleranceConfig) -> Result<Self> {
        let r = kovarik(p, q, tol)?;
        Ok(Self { p: p.matrix().clone(), r: r.into_matrix(), q: q.matrix().clone() })
    }

    pub fn midpoint(&self) -> &ComplexMatrix {
        &self.r
    }

    /// `f(t)`; `f(0) = p` and `f(1) = q` bit for bit.
    pub fn matrix_at(&self, t: f64) -> ComplexMatrix {
        if t <= 0.5 {
            &self.p + &(&self.r - &self.p).scale(2.0 * t)
        } else {
            &self.q + &(&self.r - &self.q).scale(2.0 - 2.0 * t)
        }
    }

    pub fn at(&self, t: f64, tol: &ToleranceConfig) -> Result<Idempotent> {
        check_t(t)?;
        Idempotent::new(self.matrix_at(t), tol)
    }
}

pub fn idempotent_path(p: &Idempotent, q: &Idempotent, t: f64, tol: &ToleranceConfig) -> Result<Idempotent> {
    check_t(t)?;
    IdempotentPath::new(p, q, tol)?.at(t, tol)
}

/// Projection-valued path `g(t) = f(t)(f(t) + f(t)* − 1)⁻² f(t)*` over the
/// idempotent path `f` between two projections at distance less than one.
#[derive(Debug, Clone)]
pub struct ProjectionPath {
    inner: IdempotentPath,
}

impl ProjectionPath {
    pub fn new(p: &Projection, q: &Projection, tol: &ToleranceConfig) -> Result<Self> {
        same_dim(p.matrix(), q.matrix())?;
        let norm = (p.matrix() - q.matrix()).norm();
        if !in_unit_ball(norm, tol) {
            return Err(Error::NormNotLessThanOne { norm });
        }
        Ok(Self { inner: IdempotentPath::new(&p.as_idempotent(), &q.as_idempotent(), tol)? })
    }

    pub fn idempotent_path(&self) -> &IdempotentPath {
        &self.inner
    }

    pub fn at(&self, t: f64, tol: &ToleranceConfig) -> Result<Projection> {
        check_t(t)?;
        let f = self.inner.matrix_at(t);
        let fa = f.adjoint();
        let w = sum_inverse(&f, &fa, tol)?;
        Projection::new(&(&(&f * &w) * &w) * &fa, tol)
    }
}

pub fn projection_path(p: &Projection, q: &Projection, t: f64, tol: &ToleranceConfig) -> Result<Projection> {
    check_t(t)?;
    ProjectionPath::new(p, q, tol)?.at(t, tol)
}
