//! Affine charts on Grassmannians.
//!
//! Classical charts are indexed by a `k`-subset `I` of the coordinates and
//! centred at the coordinate projection `p_I`. The general chart at a
//! projection `p` sends `q` in the unit ball around `p` to
//! `x = q(p+q−1)⁻²p − p ∈ p⊥Mp`, with rational inverse
//! `x ↦ (p+x)(1+x*x)⁻¹p(p+x)*`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{gauss_jordan_inverse, svd};
use crate::matrix::{ComplexMatrix, ONE};
use crate::projection::{in_unit_ball, same_dim, sum_inverse, Projection};
use crate::tolerance::ToleranceConfig;

/// A strictly increasing subset of `{0, …, n−1}`, displayed 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChartIndex {
    n: usize,
    indices: Vec<usize>,
}

impl ChartIndex {
    /// From 0-based indices.
    pub fn new(n: usize, indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadChartIndex(format!("{indices:?} is not strictly increasing")));
        }
        if let Some(&last) = indices.last() {
            if last >= n {
                return Err(Error::BadChartIndex(format!("index {} exceeds n = {n}", last + 1)));
            }
        }
        Ok(Self { n, indices })
    }

    pub fn from_one_based(n: usize, indices: &[usize]) -> Result<Self> {
        if indices.contains(&0) {
            return Err(Error::BadChartIndex("indices start at 1".into()));
        }
        Self::new(n, indices.iter().map(|i| i - 1).collect())
    }

    /// Parses a comma-separated 1-based list such as `1,3`; the empty
    /// string is the empty index.
    pub fn parse_one_based(n: usize, s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}');
        let mut out = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            out.push(tok.parse().map_err(|_| Error::BadChartIndex(format!("`{tok}` is not an index")))?);
        }
        Self::from_one_based(n, &out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i + 1).collect()
    }

    pub fn complement_indices(&self) -> Vec<usize> {
        (0..self.n).filter(|i| self.indices.binary_search(i).is_err()).collect()
    }
}

impl fmt::Display for ChartIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `p_I`: ones on the diagonal at `I`.
pub fn standard_projection(i: &ChartIndex) -> Projection {
    let mut d = vec![0.0; i.n];
    for &j in &i.indices {
        d[j] = 1.0;
    }
    Projection::assemble(ComplexMatrix::from_diagonal(&d))
}

/// `L(L*L)⁻¹L*` for a left-invertible `n × k` frame `L`.
pub fn projection_from_frame(l: &ComplexMatrix, tol: &ToleranceConfig) -> Result<Projection> {
    let (n, k) = (l.rows(), l.cols());
    if k == 0 {
        return Ok(Projection::zero(n));
    }
    if k > n {
        return Err(Error::FrameDeficient { min_sv: 0.0 });
    }
    let dec = svd(l);
    if dec.max() == 0.0 || dec.min() < tol.inv_tol * dec.max() {
        return Err(Error::FrameDeficient { min_sv: dec.min() });
    }
    let gram = &l.adjoint() * l;
    let q = &(l * &gauss_jordan_inverse(&gram)) * &l.adjoint();
    Projection::new(q.hermitian_part(), tol)
}

/// The frame with identity rows at `I` and `a` on the remaining rows.
pub fn frame_from_coords(i: &ChartIndex, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let comp = i.complement_indices();
    if a.rows() != comp.len() || a.cols() != i.k() {
        return Err(Error::DimensionMismatch(format!(
            "coordinates are {}x{}, chart needs {}x{}",
            a.rows(),
            a.cols(),
            comp.len(),
            i.k()
        )));
    }
    let mut l = ComplexMatrix::zeros(i.n, i.k());
    for (col, &row) in i.indices.iter().enumerate() {
        l[(row, col)] = ONE;
    }
    for (r, &row) in comp.iter().enumerate() {
        for col in 0..i.k() {
            l[(row, col)] = a[(r, col)];
        }
    }
    Ok(l)
}

fn check_chart(q: &Projection, i: &ChartIndex) -> Result<()> {
    if q.dim() != i.n {
        return Err(Error::DimensionMismatch(format!("projection in dimension {}, chart in {}", q.dim(), i.n)));
    }
    Ok(())
}

/// Affine coordinates `A` of `Im q` in the chart `I`, read off from
/// `q(q+p_I−1)⁻²p_I = [[1, 0], [A, 0]]` (rows and columns grouped as `I`, `Iᶜ`).
pub fn classical_affine_coords(q: &Projection, i: &ChartIndex, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    check_chart(q, i)?;
    let p = standard_projection(i);
    let norm = (q.matrix() - p.matrix()).norm();
    if !in_unit_ball(norm, tol) {
        return Err(Error::NotInChart { norm });
    }
    let w = sum_inverse(q.matrix(), p.matrix(), tol).map_err(|_| Error::NotInChart { norm })?;
    let k = &(&(q.matrix() * &w) * &w) * p.matrix();
    let pivot = k.select_rows(i.indices()).select_columns(i.indices());
    let residual = (&pivot - &ComplexMatrix::identity(i.k())).max_abs();
    if residual > tol.residual_tol {
        return Err(Error::Uncertified { residual });
    }
    Ok(k.select_rows(&i.complement_indices()).select_columns(i.indices()))
}

/// The same coordinates by the frame route `B_{Iᶜ}·B_I⁻¹` on an orthonormal
/// frame `B` of `Im q`.
pub fn frame_affine_coords(q: &Projection, i: &ChartIndex, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    check_chart(q, i)?;
    if q.rank() != i.k() {
        return Err(Error::RankMismatch { left: q.rank(), right: i.k() });
    }
    let b = q.range().basis().clone();
    let minor = b.select_rows(i.indices());
    let norm = (q.matrix() - standard_projection(i).matrix()).norm();
    let dec = svd(&minor);
    if i.k() > 0 && dec.min() < tol.inv_tol {
        return Err(Error::NotInChart { norm });
    }
    Ok(&b.select_rows(&i.complement_indices()) * &gauss_jordan_inverse(&minor))
}

/// Greedy row pivoting on an orthonormal frame of `Im q`: repeatedly take
/// the row with the largest component orthogonal to the rows already taken,
/// preferring the lower index on ties.
pub fn chart_select(q: &Projection) -> ChartIndex {
    let n = q.dim();
    let b = q.range().basis().clone();
    let k = b.cols();
    let mut rows: Vec<Vec<_>> = (0..n).map(|r| (0..k).map(|c| b[(r, c)]).collect()).collect();
    let mut chosen = Vec::with_capacity(k);
    for _ in 0..k {
        let norms: Vec<f64> = rows.iter().map(|r| r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
        let best = (0..n).filter(|j| !chosen.contains(j)).map(|j| norms[j]).fold(0.0, f64::max);
        let Some(pick) = (0..n).find(|&j| !chosen.contains(&j) && norms[j] >= best - 1e-12 * best.max(1.0)) else {
            break;
        };
        chosen.push(pick);
        let dir: Vec<_> = rows[pick].iter().map(|z| z / norms[pick].max(f64::MIN_POSITIVE)).collect();
        for row in rows.iter_mut() {
            let coeff: crate::C64 = dir.iter().zip(row.iter()).map(|(d, x)| d.conj() * x).sum();
            for (x, d) in row.iter_mut().zip(&dir) {
                *x -= coeff * d;
            }
        }
    }
    chosen.sort_unstable();
    ChartIndex { n, indices: chosen }
}

/// Exhaustive search over all `k`-subsets for the largest smallest singular
/// value of the `I`-minor, earliest subset winning ties. Limited to `n ≤ 8`.
pub fn chart_select_exhaustive(q: &Projection) -> Result<ChartIndex> {
    let n = q.dim();
    if n > 8 {
        return Err(Error::BadParameter(format!("exhaustive chart search needs n ≤ 8, got {n}")));
    }
    let b = q.range().basis().clone();
    let k = b.cols();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
        let s = if k == 0 { 1.0 } else { svd(&b.select_rows(&idx)).min() };
        let better = match &best {
            None => true,
            Some((v, cur)) => s > v * (1.0 + 1e-12) || (s >= v * (1.0 - 1e-12) && idx < *cur),
        };
        if better {
            best = Some((s, idx));
        }
    }
    let (_, indices) = best.expect("at least one subset");
    Ok(ChartIndex { n, indices })
}

/// A point `x ∈ p⊥Mp` of the chart at `p`, kept as a full `n × n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineCoordinates {
    basepoint: Projection,
    x: ComplexMatrix,
}

impl AffineCoordinates {
    /// Accepts `x` when `‖x − p⊥xp‖ ≤ 1e-10·max(1, ‖x‖)`.
    pub fn new(basepoint: Projection, x: ComplexMatrix) -> Result<Self> {
        same_dim(basepoint.matrix(), &x)?;
        let compressed = compress(&basepoint, &x);
        let residual = (&x - &compressed).norm();
        if residual > 1e-10 * x.norm().max(1.0) {
            return Err(Error::NotInComplement { residual });
        }
        Ok(Self { basepoint, x })
    }

    /// Coordinates at `p_I` from the compressed `(n−k) × k` block.
    pub fn from_compressed(i: &ChartIndex, a: &ComplexMatrix) -> Result<Self> {
        let comp = i.complement_indices();
        if a.rows() != comp.len() || a.cols() != i.k() {
            return Err(Error::DimensionMismatch(format!(
                "block is {}x{}, chart needs {}x{}",
                a.rows(),
                a.cols(),
                comp.len(),
                i.k()
            )));
        }
        let mut x = ComplexMatrix::zeros(i.n, i.n);
        for (r, &row) in comp.iter().enumerate() {
            for (c, &col) in i.indices.iter().enumerate() {
                x[(row, col)] = a[(r, c)];
            }
        }
        Ok(Self { basepoint: standard_projection(i), x })
    }

    pub fn basepoint(&self) -> &Projection {
        &self.basepoint
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.x
    }

    /// Rows `Iᶜ`, columns `I`.
    pub fn compressed(&self, i: &ChartIndex) -> ComplexMatrix {
        self.x.select_rows(&i.complement_indices()).select_columns(i.indices())
    }
}

fn compress(p: &Projection, x: &ComplexMatrix) -> ComplexMatrix {
    let pc = p.matrix().complement();
    &(&pc * x) * p.matrix()
}

/// `φ_p(q) = q(p+q−1)⁻²p − p`.
pub fn phi(p: &Projection, q: &Projection, tol: &ToleranceConfig) -> Result<AffineCoordinates> {
    same_dim(p.matrix(), q.matrix())?;
    let norm = (p.matrix() - q.matrix()).norm();
    if !in_unit_ball(norm, tol) {
        return Err(Error::NotInBall { norm });
    }
    let w = sum_inverse(p.matrix(), q.matrix(), tol).map_err(|_| Error::NotInBall { norm })?;
    let raw = &(&(&(q.matrix() * &w) * &w) * p.matrix()) - p.matrix();
    let x = compress(p, &raw);
    let residual = (&raw - &x).norm();
    if residual > tol.residual_tol * raw.norm().max(1.0) {
        return Err(Error::Uncertified { residual });
    }
    Ok(AffineCoordinates { basepoint: p.clone(), x })
}

/// `φ_p⁻¹(x) = (p+x)(1+x*x)⁻¹p(p+x)*`; defined for every `x ∈ p⊥Mp`.
pub fn phi_inverse(x: &AffineCoordinates, tol: &ToleranceConfig) -> Result<Projection> {
    let p = x.basepoint.matrix();
    let n = p.rows();
    let a = &ComplexMatrix::identity(n) + &(&x.x.adjoint() * &x.x);
    let middle = &(p * &gauss_jordan_inverse(&a)) * p;
    let frame = p + &x.x;
    let q = &(&frame * &middle.hermitian_part()) * &frame.adjoint();
    Projection::new(q.hermitian_part(), tol)
}

/// `φ_{p2} ∘ φ_{p1}⁻¹`, where `p1` is the basepoint of `x`.
pub fn chart_transition(x: &AffineCoordinates, p2: &Projection, tol: &ToleranceConfig) -> Result<AffineCoordinates> {
    same_dim(x.basepoint.matrix(), p2.matrix())?;
    let q = phi_inverse(x, tol)?;
    let norm = (q.matrix() - p2.matrix()).norm();
    if !in_unit_ball(norm, tol) {
        return Err(Error::NotInOverlap { norm });
    }
    phi(p2, &q, tol).map_err(|e| match e {
        Error::NotInBall { norm } => Error::NotInOverlap { norm },
        other => other,
    })
}
