//! Diagonal projections on `ℓ²(ℕ₊)` whose supports are described by 2-adic
//! valuations, with exactly decidable order, sums, complements and
//! equivalence.
//!
//! In this lattice a projection can be equivalent to a proper
//! subprojection, which never happens in a matrix algebra.

mod residue;
mod valuation;

use thiserror::Error;

pub use residue::ResidueSet;
pub use valuation::{nu2, Cardinality, ValuationProjection};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("projections are not orthogonal (common part {overlap})")]
    NotOrthogonal { overlap: String },
    #[error("invalid description: {0}")]
    Invalid(String),
    #[error("cannot parse projection: {0}")]
    Parse(String),
}

/// Flags checked on the pair returned by [`dedekind_pair`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DedekindReport {
    pub p_leq_q: bool,
    pub p_equiv_q: bool,
    pub distinct: bool,
    /// `p ∼ q ∼ p⊥ ∼ q⊥`.
    pub all_equivalent: bool,
}

impl DedekindReport {
    pub fn holds(&self) -> bool {
        self.p_leq_q && self.p_equiv_q && self.distinct && self.all_equivalent
    }
}

/// `e_j = {x : ν₂(x) ≡ j mod 3}`.
pub fn e_class(j: u64) -> ValuationProjection {
    ValuationProjection::residue_classes(3, [j % 3]).expect("modulus 3")
}

/// `p = e₀` and `q = e₀ + e₁`: a projection strictly below an equivalent one.
pub fn dedekind_pair() -> (ValuationProjection, ValuationProjection, DedekindReport) {
    let p = e_class(0);
    let q = p.orth_sum(&e_class(1)).expect("distinct residue classes");
    let (pc, qc) = (p.complement(), q.complement());
    let report = DedekindReport {
        p_leq_q: p.leq(&q),
        p_equiv_q: p.mv_equiv(&q),
        distinct: p != q,
        all_equivalent: p.mv_equiv(&q) && q.mv_equiv(&pc) && pc.mv_equiv(&qc),
    };
    (p, q, report)
}

/// `p_k = {x : ν₂(x) < k}` for `k = 1..=k_max`.
pub fn ball_disjoint_family(k_max: u64) -> Vec<ValuationProjection> {
    (1..=k_max).map(ValuationProjection::below).collect()
}
