//! Seeded generators for matrices, subspaces and projection pairs.
//!
//! Everything is driven by an explicit `ChaCha8Rng`, so a seed fully
//! determines the output on every platform.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{gauss_jordan_inverse, orthonormalize, svd};
use crate::matrix::{ComplexMatrix, C64};
use crate::projection::{Idempotent, Projection};
use crate::subspace::Subspace;
use crate::tolerance::ToleranceConfig;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian: real and imaginary parts `N(0, 1/2)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::from_row_major(rows, cols, data).expect("finite samples")
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    random_matrix(rng, n, n).hermitian_part()
}

/// Orthonormal `n × k` frame from Gaussian columns.
pub fn random_frame<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> ComplexMatrix {
    assert!(k <= n);
    loop {
        let cols: Vec<Vec<C64>> = (0..k).map(|_| (0..n).map(|_| complex_gaussian(rng)).collect()).collect();
        let basis = orthonormalize(cols, 1e-6);
        // a rank-deficient Gaussian draw has probability zero; resample if it happens
        if basis.len() == k {
            return ComplexMatrix::from_columns(n, &basis);
        }
    }
}

pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    random_frame(rng, n, n)
}

pub fn random_subspace<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Subspace {
    Subspace::from_orthonormal_unchecked(random_frame(rng, n, k))
}

pub fn random_projection_with<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Result<Projection> {
    if k > n {
        return Err(Error::BadRank { n, k });
    }
    Ok(Projection::onto(&random_subspace(rng, n, k)))
}

/// Rank-`k` projection in `M_n` determined by `seed`.
pub fn random_projection(n: usize, k: usize, seed: u64) -> Result<Projection> {
    random_projection_with(&mut rng_from_seed(seed), n, k)
}

/// Oblique rank-`k` idempotent `S·diag(1_k, 0)·S⁻¹` with a Gaussian `S`
/// whose condition number is at most `max_cond`.
pub fn random_idempotent<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize, max_cond: f64) -> Result<Idempotent> {
    if k > n {
        return Err(Error::BadRank { n, k });
    }
    let d: Vec<f64> = (0..n).map(|i| if i < k { 1.0 } else { 0.0 }).collect();
    let s = loop {
        let s = random_matrix(rng, n, n);
        let dec = svd(&s);
        if n == 0 || dec.min() * max_cond >= dec.max() {
            break s;
        }
    };
    let e = &(&s * &ComplexMatrix::from_diagonal(&d)) * &gauss_jordan_inverse(&s);
    Idempotent::new(e, &ToleranceConfig::default())
}

/// Block structure of a projection pair in canonical position.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSpec {
    pub d11: usize,
    pub d00: usize,
    pub d10: usize,
    pub d01: usize,
    /// One angle in `(0, π/2)` per generic 2×2 block.
    pub angles: Vec<f64>,
}

impl PairSpec {
    pub fn dim(&self) -> usize {
        self.d11 + self.d00 + self.d10 + self.d01 + 2 * self.angles.len()
    }

    pub fn rank_p(&self) -> usize {
        self.d11 + self.d10 + self.angles.len()
    }

    pub fn rank_q(&self) -> usize {
        self.d11 + self.d01 + self.angles.len()
    }

    /// Canonical `(p, q)` in the standard basis, block order
    /// `m11, m00, m10, m01, generic`.
    pub fn canonical(&self) -> (ComplexMatrix, ComplexMatrix) {
        let mut pd = Vec::with_capacity(self.dim());
        let mut qd = Vec::with_capacity(self.dim());
        pd.extend(std::iter::repeat_n(1.0, self.d11));
        qd.extend(std::iter::repeat_n(1.0, self.d11));
        pd.extend(std::iter::repeat_n(0.0, self.d00));
        qd.extend(std::iter::repeat_n(0.0, self.d00));
        pd.extend(std::iter::repeat_n(1.0, self.d10));
        qd.extend(std::iter::repeat_n(0.0, self.d10));
        pd.extend(std::iter::repeat_n(0.0, self.d01));
        qd.extend(std::iter::repeat_n(1.0, self.d01));
        let trivial = pd.len();
        let g = self.angles.len();
        pd.extend(std::iter::repeat_n(0.0, 2 * g));
        qd.extend(std::iter::repeat_n(0.0, 2 * g));
        let mut p = ComplexMatrix::from_diagonal(&pd);
        let mut q = ComplexMatrix::from_diagonal(&qd);
        for (b, &theta) in self.angles.iter().enumerate() {
            let (c, s) = (theta.cos(), theta.sin());
            let o = trivial + 2 * b;
            p[(o, o)] = C64::new(1.0, 0.0);
            q[(o, o)] = C64::new(c * c, 0.0);
            q[(o, o + 1)] = C64::new(c * s, 0.0);
            q[(o + 1, o)] = C64::new(c * s, 0.0);
            q[(o + 1, o + 1)] = C64::new(s * s, 0.0);
        }
        (p, q)
    }

    /// Random block sizes summing to `n`. With `same_rank`, `d10 = d01`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, same_rank: bool) -> Self {
        let mut left = n;
        let g = rng.random_range(0..=left / 2);
        left -= 2 * g;
        let (d10, d01) = if same_rank {
            let d = rng.random_range(0..=left / 2);
            left -= 2 * d;
            (d, d)
        } else {
            let a = rng.random_range(0..=left);
            left -= a;
            let b = rng.random_range(0..=left);
            left -= b;
            (a, b)
        };
        let d11 = rng.random_range(0..=left);
        let d00 = left - d11;
        let angles = (0..g).map(|_| rng.random_range(1e-3..FRAC_PI_2 - 1e-3)).collect();
        Self { d11, d00, d10, d01, angles }
    }
}

/// A pair with prescribed canonical structure, rotated by a random unitary.
pub fn structured_pair<R: Rng + ?Sized>(rng: &mut R, spec: &PairSpec) -> (Projection, Projection) {
    let (p0, q0) = spec.canonical();
    let u = random_unitary(rng, spec.dim());
    (Projection::assemble(p0.conjugate_by(&u)), Projection::assemble(q0.conjugate_by(&u)))
}

/// Independent uniformly random projections, or a pair with random
/// canonical structure, each half the time.
pub fn mixed_pair<R: Rng + ?Sized>(rng: &mut R, n: usize, same_rank: bool) -> (Projection, Projection) {
    if rng.random_bool(0.5) {
        let k = rng.random_range(0..=n);
        let l = if same_rank { k } else { rng.random_range(0..=n) };
        let p = random_projection_with(rng, n, k).expect("k ≤ n");
        (p, random_projection_with(rng, n, l).expect("l ≤ n"))
    } else {
        let spec = PairSpec::random(rng, n, same_rank);
        structured_pair(rng, &spec)
    }
}

/// A pair with `‖p − q‖ ≤ max_norm`: canonical blocks with bounded angles
/// and no complementary part.
pub fn close_pair<R: Rng + ?Sized>(rng: &mut R, n: usize, max_norm: f64) -> (Projection, Projection) {
    let max_angle = max_norm.clamp(2e-6, 1.0).asin();
    let g = rng.random_range(0..=n / 2);
    let d11 = rng.random_range(0..=n - 2 * g);
    let spec = PairSpec {
        d11,
        d00: n - 2 * g - d11,
        d10: 0,
        d01: 0,
        angles: (0..g).map(|_| rng.random_range(1e-6..max_angle)).collect(),
    };
    structured_pair(rng, &spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_examples() {
        assert_eq!(random_projection(3, 0, 1).unwrap().matrix(), &ComplexMatrix::zeros(3, 3));
        let full = random_projection(3, 3, 1).unwrap();
        assert!((full.matrix() - &ComplexMatrix::identity(3)).max_abs() < 1e-14);
        let p = random_projection(4, 2, 7).unwrap();
        assert!((p.matrix().trace().re - 2.0).abs() <= 1e-12);
        assert!(p.idem_residual() <= 1e-12);
        assert!(p.herm_residual() <= 1e-12);
        assert!(matches!(random_projection(3, 4, 1), Err(Error::BadRank { n: 3, k: 4 })));
    }

    #[test]
    fn deterministic_given_seed() {
        assert_eq!(random_projection(5, 2, 99).unwrap(), random_projection(5, 2, 99).unwrap());
        assert_ne!(random_projection(5, 2, 99).unwrap(), random_projection(5, 2, 100).unwrap());
    }

    #[test]
    fn idempotent_has_rank_trace() {
        let mut rng = rng_from_seed(5);
        let e = random_idempotent(&mut rng, 6, 2, 1e3).unwrap();
        assert!((e.matrix().trace().re - 2.0).abs() < 1e-10);
        assert!(e.matrix().hermitian_residual() > 1e-3);
    }

    #[test]
    fn structured_pair_ranks() {
        let mut rng = rng_from_seed(3);
        for _ in 0..20 {
            let spec = PairSpec::random(&mut rng, 9, false);
            assert_eq!(spec.dim(), 9);
            let (p, q) = structured_pair(&mut rng, &spec);
            assert_eq!(p.rank(), spec.rank_p());
            assert_eq!(q.rank(), spec.rank_q());
            assert!(p.idem_residual() < 1e-13 && q.herm_residual() < 1e-13);
        }
    }

    #[test]
    fn close_pair_respects_bound() {
        let mut rng = rng_from_seed(11);
        for n in 1..8 {
            let (p, q) = close_pair(&mut rng, n, 0.5);
            assert!((p.matrix() - q.matrix()).norm() <= 0.5 + 1e-12);
        }
    }
}
