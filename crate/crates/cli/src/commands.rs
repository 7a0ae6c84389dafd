//! File-level commands. Each returns the text for standard output and leaves
//! diagnostics to the caller.

use projgeom::atlas::{
    chart_select, chart_transition, phi, phi_inverse, standard_projection, AffineCoordinates, ChartIndex,
};
use projgeom::io::{format_real, write_all, write_matrix};
use projgeom::lattice::{ball_disjoint_family, dedekind_pair, ValuationProjection};
use projgeom::linalg::spectral_norm;
use projgeom::projection::ProjectionPath;
use projgeom::two_projection::{find_common_ball, halmos_form, PairDims};
use projgeom::{ComplexMatrix, Projection, ToleranceConfig, C64};

use crate::error::CliError;

fn expect_blocks(blocks: &[ComplexMatrix], allowed: &[usize], what: &str) -> Result<(), CliError> {
    if allowed.contains(&blocks.len()) {
        Ok(())
    } else {
        let list: Vec<String> = allowed.iter().map(usize::to_string).collect();
        Err(CliError::Usage(format!("{what} expects {} matrices, found {}", list.join(" or "), blocks.len())))
    }
}

fn projection(m: &ComplexMatrix, tol: &ToleranceConfig) -> Result<Projection, CliError> {
    Ok(Projection::new(m.clone(), tol)?)
}

fn pair(blocks: &[ComplexMatrix], tol: &ToleranceConfig, what: &str) -> Result<(Projection, Projection), CliError> {
    expect_blocks(blocks, &[2], what)?;
    Ok((projection(&blocks[0], tol)?, projection(&blocks[1], tol)?))
}

/// The chart index of `p` when `p` is exactly a diagonal 0/1 matrix.
pub fn standard_index(p: &ComplexMatrix) -> Option<ChartIndex> {
    let n = p.rows();
    let mut indices = Vec::new();
    for r in 0..n {
        for c in 0..n {
            let z = p[(r, c)];
            let expected = if r == c && z == C64::new(1.0, 0.0) {
                indices.push(r);
                z
            } else {
                C64::new(0.0, 0.0)
            };
            if z != expected {
                return None;
            }
        }
    }
    ChartIndex::new(n, indices).ok()
}

fn coords_text(x: &AffineCoordinates) -> String {
    match standard_index(x.basepoint().matrix()) {
        Some(i) => write_matrix(&x.compressed(&i)),
        None => write_matrix(x.matrix()),
    }
}

/// `(p, q)` to the common-ball centre `r`.
pub fn midpoint(blocks: &[ComplexMatrix], tol: &ToleranceConfig) -> Result<(String, [f64; 2]), CliError> {
    let (p, q) = pair(blocks, tol, "midpoint")?;
    let r = find_common_ball(&p, &q, tol)?;
    let reach = [spectral_norm(&(p.matrix() - r.matrix())), spectral_norm(&(q.matrix() - r.matrix()))];
    Ok((write_matrix(r.matrix()), reach))
}

/// `q` alone is read in the chart `index` (or the one `chart_select` picks);
/// `(p, q)` is read in the chart at `p`.
pub fn chart_coords(blocks: &[ComplexMatrix], index: Option<&str>, tol: &ToleranceConfig) -> Result<String, CliError> {
    expect_blocks(blocks, &[1, 2], "chart coords")?;
    let (p, q) = if blocks.len() == 1 {
        let q = projection(&blocks[0], tol)?;
        let i = match index {
            Some(s) => ChartIndex::parse_one_based(q.dim(), s).map_err(|e| CliError::Usage(e.to_string()))?,
            None => chart_select(&q),
        };
        (standard_projection(&i), q)
    } else {
        if index.is_some() {
            return Err(CliError::Usage("--index applies only to a single input matrix".into()));
        }
        (projection(&blocks[0], tol)?, projection(&blocks[1], tol)?)
    };
    Ok(coords_text(&phi(&p, &q, tol)?))
}

fn coordinates(
    blocks: &[ComplexMatrix],
    index: Option<&str>,
    tol: &ToleranceConfig,
) -> Result<AffineCoordinates, CliError> {
    match index {
        Some(s) => {
            let a = &blocks[0];
            let i = ChartIndex::parse_one_based(a.rows() + a.cols(), s).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(AffineCoordinates::from_compressed(&i, a)?)
        }
        None => {
            let p = projection(&blocks[0], tol)?;
            Ok(AffineCoordinates::new(p, blocks[1].clone())?)
        }
    }
}

/// Compressed block `A` with `--index`, or `(p, x)`, back to the projection.
pub fn chart_reconstruct(
    blocks: &[ComplexMatrix],
    index: Option<&str>,
    tol: &ToleranceConfig,
) -> Result<String, CliError> {
    expect_blocks(blocks, if index.is_some() { &[1][..] } else { &[2][..] }, "chart reconstruct")?;
    let x = coordinates(blocks, index, tol)?;
    Ok(write_matrix(phi_inverse(&x, tol)?.matrix()))
}

/// `(x, p₂)` with `--index` for the chart of `x`, or `(p₁, x, p₂)`, to the
/// coordinates of the same point at `p₂`.
pub fn chart_transition_cmd(
    blocks: &[ComplexMatrix],
    index: Option<&str>,
    tol: &ToleranceConfig,
) -> Result<String, CliError> {
    expect_blocks(blocks, if index.is_some() { &[2][..] } else { &[3][..] }, "chart transition")?;
    let (x, p2) = match index {
        Some(_) => (coordinates(&blocks[..1], index, tol)?, &blocks[1]),
        None => (coordinates(&blocks[..2], None, tol)?, &blocks[2]),
    };
    Ok(coords_text(&chart_transition(&x, &projection(p2, tol)?, tol)?))
}

/// `samples + 1` projections `g(j/samples)`.
pub fn path(blocks: &[ComplexMatrix], samples: usize, tol: &ToleranceConfig) -> Result<String, CliError> {
    if samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let (p, q) = pair(blocks, tol, "path")?;
    let path = ProjectionPath::new(&p, &q, tol)?;
    let points = (0..=samples)
        .map(|j| path.at(j as f64 / samples as f64, tol).map(Projection::into_matrix))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(write_all(&points))
}

pub struct HalmosOutput {
    pub angles: String,
    pub dims: PairDims,
    pub basis: String,
}

pub fn halmos(blocks: &[ComplexMatrix], tol: &ToleranceConfig) -> Result<HalmosOutput, CliError> {
    let (p, q) = pair(blocks, tol, "halmos")?;
    let h = halmos_form(&p, &q, tol)?;
    let angles = h.angles().iter().map(|&a| format_real(a) + "\n").collect();
    Ok(HalmosOutput { angles, dims: h.dims(), basis: write_matrix(h.u()) })
}

fn support_line(name: &str, p: &ValuationProjection) -> String {
    let xs: Vec<String> = p.support_prefix(16, u64::MAX).iter().map(u64::to_string).collect();
    format!("support {name}: {}\n", xs.join(" "))
}

/// The Dedekind-infinite pair and whether every flag holds.
pub fn dedekind_demo() -> (String, bool) {
    let (p, q, report) = dedekind_pair();
    let mut out = format!("p = {p}\nq = {q}\n");
    out += &format!("p <= q: {}\n", report.p_leq_q);
    out += &format!("p ~ q: {}\n", report.p_equiv_q);
    out += &format!("p != q: {}\n", report.distinct);
    out += &format!("p ~ q ~ p' ~ q': {}\n", report.all_equivalent);
    out += &support_line("p", &p);
    out += &support_line("q", &q);
    (out, report.holds())
}

pub fn dedekind_family(k: u64) -> Result<String, CliError> {
    if k == 0 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    Ok(ball_disjoint_family(k).iter().enumerate().map(|(j, p)| format!("p_{} = {p}\n", j + 1)).collect())
}
