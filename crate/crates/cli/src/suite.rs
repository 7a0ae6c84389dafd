//! Randomized invariant batteries with a JSON report.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::time::Instant;

use projgeom::atlas::{
    chart_select, chart_transition, classical_affine_coords, frame_affine_coords, frame_from_coords, phi, phi_inverse,
    projection_from_frame, standard_projection, AffineCoordinates,
};
use projgeom::lattice::{ball_disjoint_family, dedekind_pair, ValuationProjection};
use projgeom::linalg::{min_singular_value, spectral_norm};
use projgeom::projection::{ball_predicates, converse_kovarik, kovarik_certified, order_leq, ProjectionPath};
use projgeom::random::{
    close_pair, mixed_pair, random_idempotent, random_matrix, random_projection_with, rng_from_seed,
};
use projgeom::two_projection::{
    find_common_ball, generic_midpoint, halmos_form, halmos_reconstruct, kernel_dimension_report,
};
use projgeom::{ComplexMatrix, Error, Idempotent, Projection, ToleranceConfig};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliError;

pub const MAX_DIM: usize = 64;
const MIDPOINT_BOUND: f64 = 0.70710679;
const IDENTITY_BOUND: f64 = 1e-12;
const CERT_BOUND: f64 = 1e-8;
const ENDPOINT_BOUND: f64 = 1e-10;
/// Below this `σ_min(p+q−1)` an uncertified Kovarik call is not counted as a failure.
const WELL_POSED: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lemmas,
    Atlas,
    Midpoint,
    Dedekind,
    All,
}

impl Suite {
    fn parts(self) -> &'static [Suite] {
        match self {
            Suite::All => &[Suite::Lemmas, Suite::Atlas, Suite::Midpoint, Suite::Dedekind],
            Suite::Lemmas => &[Suite::Lemmas],
            Suite::Atlas => &[Suite::Atlas],
            Suite::Midpoint => &[Suite::Midpoint],
            Suite::Dedekind => &[Suite::Dedekind],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Suite::Lemmas => "lemmas",
            Suite::Atlas => "atlas",
            Suite::Midpoint => "midpoint",
            Suite::Dedekind => "dedekind",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: ToleranceConfig,
    /// Extra `(p, q)` pairs run through the pair checks after the random trials.
    pub pairs: Vec<(ComplexMatrix, ComplexMatrix)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub n: usize,
    pub trials: usize,
    pub input_pairs: usize,
    pub seed: u64,
    pub tolerances: BTreeMap<&'static str, f64>,
    pub failures: usize,
    /// At most ten, in trial order.
    pub failure_examples: Vec<String>,
    pub worst_residuals: BTreeMap<String, f64>,
    pub elapsed: f64,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data") + "\n"
    }
}

#[derive(Debug, Default)]
struct Trial {
    prefix: &'static str,
    worst: BTreeMap<String, f64>,
    failures: Vec<String>,
}

impl Trial {
    fn scoped(&mut self, prefix: &'static str) -> &mut Self {
        self.prefix = prefix;
        self
    }

    fn key(&self, name: &str) -> String {
        format!("{}.{name}", self.prefix)
    }

    fn record(&mut self, name: &str, value: f64, bound: f64) {
        let key = self.key(name);
        let slot = self.worst.entry(key.clone()).or_insert(0.0);
        *slot = slot.max(value);
        if value.is_nan() || value > bound {
            self.failures.push(format!("{key} = {value:e} exceeds {bound:e}"));
        }
    }

    fn fail(&mut self, what: impl std::fmt::Display) {
        let msg = format!("{}: {what}", self.prefix);
        self.failures.push(msg);
    }
}

fn dist(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    spectral_norm(&(a - b))
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport, CliError> {
    if cfg.n == 0 || cfg.n > MAX_DIM {
        return Err(CliError::Usage(format!("--n must lie in 1..={MAX_DIM}, got {}", cfg.n)));
    }
    if cfg.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    cfg.tol.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let pairs = cfg
        .pairs
        .iter()
        .enumerate()
        .map(|(k, (p, q))| {
            let bad = |e: Error| CliError::Usage(format!("input pair {k}: {e}"));
            let p = Projection::new(p.clone(), &cfg.tol).map_err(bad)?;
            let q = Projection::new(q.clone(), &cfg.tol).map_err(bad)?;
            if p.dim() != q.dim() {
                return Err(CliError::Usage(format!("input pair {k}: dimensions {} and {}", p.dim(), q.dim())));
            }
            Ok((p, q))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let start = Instant::now();
    let random: Vec<Trial> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let seed = cfg.seed.wrapping_add(i as u64);
            let mut rng = rng_from_seed(seed);
            let mut trial = Trial::default();
            for &part in cfg.suite.parts() {
                random_trial(part, &mut rng, cfg.n, i, &cfg.tol, trial.scoped(part.name()));
            }
            label(trial, format!("trial {i} (seed {seed})"))
        })
        .collect();
    let given: Vec<Trial> = pairs
        .par_iter()
        .enumerate()
        .map(|(k, (p, q))| {
            let mut trial = Trial::default();
            for &part in cfg.suite.parts() {
                pair_trial(part, p, q, &cfg.tol, trial.scoped(part.name()));
            }
            label(trial, format!("input pair {k}"))
        })
        .collect();

    let mut worst_residuals = BTreeMap::new();
    let mut failures = Vec::new();
    for t in random.into_iter().chain(given) {
        for (k, v) in t.worst {
            let slot = worst_residuals.entry(k).or_insert(0.0f64);
            *slot = slot.max(v);
        }
        failures.extend(t.failures);
    }
    Ok(SuiteReport {
        suite: cfg.suite,
        n: cfg.n,
        trials: cfg.trials,
        input_pairs: pairs.len(),
        seed: cfg.seed,
        tolerances: BTreeMap::from([
            ("rank_tol", cfg.tol.rank_tol),
            ("residual_tol", cfg.tol.residual_tol),
            ("inv_tol", cfg.tol.inv_tol),
        ]),
        failures: failures.len(),
        failure_examples: failures.into_iter().take(10).collect(),
        worst_residuals,
        elapsed: start.elapsed().as_secs_f64(),
    })
}

fn label(mut t: Trial, origin: String) -> Trial {
    for f in &mut t.failures {
        *f = format!("{origin}: {f}");
    }
    t
}

fn random_trial(part: Suite, rng: &mut ChaCha8Rng, n: usize, index: usize, tol: &ToleranceConfig, t: &mut Trial) {
    match part {
        Suite::Lemmas => lemmas_random(rng, n, tol, t),
        Suite::Atlas => atlas_random(rng, n, tol, t),
        Suite::Midpoint => midpoint_random(rng, n, tol, t),
        Suite::Dedekind => dedekind_random(rng, index, t),
        Suite::All => unreachable!("expanded by Suite::parts"),
    }
}

fn pair_trial(part: Suite, p: &Projection, q: &Projection, tol: &ToleranceConfig, t: &mut Trial) {
    match part {
        Suite::Lemmas => lemmas_pair(p, q, tol, t),
        Suite::Atlas => atlas_pair(p, q, tol, t),
        Suite::Midpoint => midpoint_pair(p, q, tol, t),
        Suite::Dedekind => {}
        Suite::All => unreachable!("expanded by Suite::parts"),
    }
}

fn lemmas_pair(p: &Projection, q: &Projection, tol: &ToleranceConfig, t: &mut Trial) {
    let (pm, qm) = (p.matrix(), q.matrix());
    let one = ComplexMatrix::identity(p.dim());
    let s = &(pm + qm) - &one;
    let d = pm - qm;
    t.record("sum_difference_identity", spectral_norm(&(&(&(&s * &s) + &(&d * &d)) - &one)), IDENTITY_BOUND);
    match ball_predicates(p, q, tol) {
        Ok(report) if (report.norm_value - 1.0).abs() >= 1e-6 && !report.agree() => t.fail(format!(
            "ball predicates disagree at ‖p−q‖ = {} (invertible {}, norm {}, direct sum {})",
            report.norm_value, report.invertible_sum, report.norm_lt_one, report.direct_sum
        )),
        Ok(_) => {}
        Err(e) => t.fail(e),
    }
    kovarik_checks(&p.as_idempotent(), &q.as_idempotent(), tol, t);
}

fn kovarik_checks(p: &Idempotent, q: &Idempotent, tol: &ToleranceConfig, t: &mut Trial) {
    let sum = &(p.matrix() + q.matrix()) - &ComplexMatrix::identity(p.dim());
    let well_posed = min_singular_value(&sum) >= WELL_POSED;
    match kovarik_certified(p, q, tol) {
        Ok((_, cert)) => {
            t.record("kovarik_certificate", cert.worst(), CERT_BOUND);
            match converse_kovarik(p, q, tol) {
                Ok(pair) => t.record("converse_inverse", pair.inverse_residual, CERT_BOUND),
                Err(e) if well_posed => t.fail(format!("converse Kovarik: {e}")),
                Err(_) => {}
            }
        }
        Err(e @ Error::Uncertified { .. }) if well_posed => t.fail(format!("Kovarik: {e}")),
        Err(_) => {}
    }
}

fn lemmas_random(rng: &mut ChaCha8Rng, n: usize, tol: &ToleranceConfig, t: &mut Trial) {
    let same = rng.random_bool(0.5);
    let (p, q) = mixed_pair(rng, n, same);
    lemmas_pair(&p, &q, tol, t);

    let k = rng.random_range(0..=n);
    let max_cond = 50.0 * n as f64;
    match (random_idempotent(rng, n, k, max_cond), random_idempotent(rng, n, k, max_cond)) {
        (Ok(e), Ok(f)) => kovarik_checks(&e, &f, tol, t),
        (Err(e), _) | (_, Err(e)) => t.fail(e),
    }

    let (p, q) = close_pair(rng, n, 0.95);
    match ProjectionPath::new(&p, &q, tol) {
        Ok(path) => {
            for step in 0..=10 {
                match path.at(step as f64 / 10.0, tol) {
                    Ok(g) => {
                        t.record("path_projection", g.idem_residual().max(g.herm_residual()), CERT_BOUND);
                        if step == 0 {
                            t.record("path_endpoint", (g.matrix() - p.matrix()).max_abs(), ENDPOINT_BOUND);
                        } else if step == 10 {
                            t.record("path_endpoint", (g.matrix() - q.matrix()).max_abs(), ENDPOINT_BOUND);
                        }
                    }
                    Err(e) => t.fail(format!("path at step {step}: {e}")),
                }
            }
        }
        Err(e) => t.fail(format!("path: {e}")),
    }

    // p ≤ q with equal ranks: q is built from a mixed frame of Im p
    let k = rng.random_range(0..=n);
    let p = random_projection_with(rng, n, k).expect("k ≤ n");
    let frame = p.range().basis() * &random_matrix(rng, k, k);
    if let Ok(q) = projection_from_frame(&frame, tol) {
        match order_leq(&p, &q, tol) {
            Ok(true) if q.rank() == p.rank() => {
                t.record("ordered_equal_rank_distance", dist(p.matrix(), q.matrix()), ENDPOINT_BOUND)
            }
            Ok(_) => t.fail("projection onto a frame of Im p is not ordered with equal rank"),
            Err(e) => t.fail(e),
        }
    }
}

fn atlas_pair(p: &Projection, q: &Projection, tol: &ToleranceConfig, t: &mut Trial) {
    let norm = dist(p.matrix(), q.matrix());
    match phi(p, q, tol).and_then(|x| phi_inverse(&x, tol)) {
        Ok(back) => t.record("phi_round_trip", dist(back.matrix(), q.matrix()), CERT_BOUND),
        Err(Error::NotInBall { .. }) if norm >= 1.0 - 1e-6 => {}
        Err(e) => t.fail(format!("φ at ‖p−q‖ = {norm}: {e}")),
    }
}

fn atlas_random(rng: &mut ChaCha8Rng, n: usize, tol: &ToleranceConfig, t: &mut Trial) {
    let (p, q) = close_pair(rng, n, 0.95);
    atlas_pair(&p, &q, tol, t);

    let k = rng.random_range(0..=n);
    let p = random_projection_with(rng, n, k).expect("k ≤ n");
    let scale = rng.random_range(0.0..3.0);
    let g = random_matrix(rng, n, n).scale(scale);
    let x = &(&p.matrix().complement() * &g) * p.matrix();
    let coords = AffineCoordinates::new(p.clone(), x.clone()).expect("x = p⊥gp");
    let q = match phi_inverse(&coords, tol) {
        Ok(q) => q,
        Err(e) => return t.fail(format!("φ⁻¹: {e}")),
    };
    match phi(&p, &q, tol) {
        Ok(y) => t.record("phi_inverse_round_trip", dist(y.matrix(), &x), CERT_BOUND),
        Err(e) => t.fail(format!("φ∘φ⁻¹: {e}")),
    }

    let chart = chart_select(&q);
    let base = standard_projection(&chart);
    if dist(q.matrix(), base.matrix()) >= 1.0 {
        return t.fail(format!("chart {chart} does not cover the sample"));
    }
    match chart_transition(&coords, &base, tol).and_then(|y| phi_inverse(&y, tol)) {
        Ok(back) => t.record("transition_round_trip", dist(back.matrix(), q.matrix()), CERT_BOUND),
        Err(Error::NotInOverlap { norm }) if norm >= 1.0 - 1e-6 => {}
        Err(e) => t.fail(format!("transition to {chart}: {e}")),
    }
    let classical = classical_affine_coords(&q, &chart, tol);
    let by_frame = frame_affine_coords(&q, &chart, tol);
    match (classical, by_frame) {
        (Ok(a), Ok(b)) => {
            t.record("classical_routes_agree", dist(&a, &b), CERT_BOUND);
            match frame_from_coords(&chart, &a).and_then(|l| projection_from_frame(&l, tol)) {
                Ok(back) => t.record("classical_round_trip", dist(back.matrix(), q.matrix()), CERT_BOUND),
                Err(e) => t.fail(format!("frame of chart {chart}: {e}")),
            }
        }
        (Err(e), _) | (_, Err(e)) => t.fail(format!("coordinates in chart {chart}: {e}")),
    }
}

fn midpoint_pair(p: &Projection, q: &Projection, tol: &ToleranceConfig, t: &mut Trial) {
    match halmos_form(p, q, tol) {
        Ok(h) => {
            let (p1, q1) = halmos_reconstruct(&h);
            t.record(
                "halmos_reconstruction",
                dist(p1.matrix(), p.matrix()).max(dist(q1.matrix(), q.matrix())),
                CERT_BOUND,
            );
            if h.angles().iter().any(|&a| !(a > 0.0 && a < FRAC_PI_2)) {
                t.fail("Halmos angle outside (0, π/2)");
            }
        }
        Err(e) => t.fail(format!("Halmos form: {e}")),
    }
    match kernel_dimension_report(p, q, tol) {
        Ok(k) if !k.additive() => t.fail(format!("kernel dimensions not additive: {k:?}")),
        Ok(_) => {}
        Err(e) => t.fail(e),
    }
    if p.rank() == q.rank() {
        match find_common_ball(p, q, tol) {
            Ok(r) => {
                let reach = dist(p.matrix(), r.matrix()).max(dist(q.matrix(), r.matrix()));
                t.record("midpoint_distance", reach, MIDPOINT_BOUND);
                t.record("midpoint_residual", r.idem_residual().max(r.herm_residual()), CERT_BOUND);
                for (name, x) in [("p", p), ("q", q)] {
                    match ball_predicates(x, &r, tol) {
                        Ok(b) if b.all() => {}
                        Ok(b) => t.fail(format!("{name} not in the ball of the midpoint: {b:?}")),
                        Err(e) => t.fail(e),
                    }
                }
            }
            Err(e) => t.fail(format!("common ball: {e}")),
        }
    }
    match generic_midpoint(p, q, tol) {
        Ok(m) => {
            let tau = &m.involution;
            let one = ComplexMatrix::identity(p.dim());
            t.record("involution_swap", dist(&(&(tau * p.matrix()) * tau), q.matrix()), CERT_BOUND);
            t.record("involution_square", dist(&(tau * tau), &one), ENDPOINT_BOUND);
            t.record("involution_commutes", dist(&(tau * m.r.matrix()), &(m.r.matrix() * tau)), CERT_BOUND);
        }
        Err(Error::SumNotInjective { .. }) => {}
        Err(e) => t.fail(format!("generic midpoint: {e}")),
    }
}

fn midpoint_random(rng: &mut ChaCha8Rng, n: usize, tol: &ToleranceConfig, t: &mut Trial) {
    let (p, q) = mixed_pair(rng, n, true);
    midpoint_pair(&p, &q, tol, t);
    let (p, q) = close_pair(rng, n, 1.0);
    midpoint_pair(&p, &q, tol, t);
}

fn random_lattice_projection(rng: &mut ChaCha8Rng) -> ValuationProjection {
    let modulus = rng.random_range(1..=6u64);
    let residues: Vec<u64> = (0..modulus).filter(|_| rng.random_bool(0.5)).collect();
    let base = ValuationProjection::residue_classes(modulus, residues).expect("residues below modulus");
    let added: Vec<u64> = (0..rng.random_range(0..4)).map(|_| rng.random_range(1..200)).collect();
    let removed: Vec<u64> = (0..rng.random_range(0..4)).map(|_| rng.random_range(1..200)).collect();
    let added = ValuationProjection::finite(added).expect("positive indices");
    let removed = ValuationProjection::finite(removed).expect("positive indices");
    base.join(&added).meet(&removed.complement())
}

fn lattice_sample_points() -> Vec<u64> {
    let mut xs: Vec<u64> = (1..=256).collect();
    for v in 0..24 {
        xs.extend((0..16u64).map(|j| (2 * j + 1) << v));
    }
    xs
}

fn dedekind_random(rng: &mut ChaCha8Rng, index: usize, t: &mut Trial) {
    let p = random_lattice_projection(rng);
    let q = random_lattice_projection(rng);
    let mut mismatches = 0usize;
    if p.complement().complement() != p {
        mismatches += 1;
    }
    let (meet, join) = (p.meet(&q), p.join(&q));
    let mut p_below_q = true;
    for x in lattice_sample_points() {
        let (a, b) = (p.contains(x), q.contains(x));
        if meet.contains(x) != (a && b) || join.contains(x) != (a || b) || p.complement().contains(x) == a {
            mismatches += 1;
        }
        p_below_q &= !a || b;
    }
    if p.leq(&q) && !p_below_q {
        mismatches += 1;
    }
    if p.orth_sum(&q).is_ok() != meet.is_zero() {
        mismatches += 1;
    }
    if p.to_string().parse::<ValuationProjection>().as_ref() != Ok(&p) {
        mismatches += 1;
    }
    t.record("lattice_mismatches", mismatches as f64, 0.0);

    let (_, _, report) = dedekind_pair();
    if !report.holds() {
        t.fail(format!("Dedekind pair flags {report:?}"));
    }
    let family = ball_disjoint_family(1 + (index % 8) as u64);
    for w in family.windows(2) {
        if !(w[0].leq(&w[1]) && w[0].mv_equiv(&w[1]) && w[0] != w[1]) {
            t.fail(format!("family is not a strict chain of equivalent projections at {}", w[0]));
        }
    }
}
