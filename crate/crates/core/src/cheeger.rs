//! Cheeger deformations: the submersion-metric eigenvalue formula, chain
//! metrics with nondecreasing weights, sphere-submersion constants, the
//! positively curved ball profile, and the shrinking family scan.

use std::sync::Arc;

use crate::cohom1::{self, Cohom1Metric};
use crate::error::{Error, Result};
use crate::lie::BlockDecomposition;
use crate::oracle::LeftInvariantMetric;
use crate::profile::{Form, Piece, WarpProfile};
use crate::report::{CurvatureReport, SamplingPlan, Witness};
use crate::rng::Rng;
use crate::scalar::Real;

/// Blockwise Cheeger deformation in eigenvalue form: phi -> delta phi / (phi + delta).
/// Strictly increasing in both arguments and bounded by min(phi, delta).
pub fn cheeger_deform<S: Real>(phi: &[S], delta: S) -> Result<Vec<S>> {
    if !(delta > S::zero()) {
        return Err(Error::Precondition("delta must be positive".into()));
    }
    phi.iter()
        .map(|&p| {
            if !(p > S::zero()) {
                return Err(Error::Precondition("phi values must be positive".into()));
            }
            Ok(delta * p / (p + delta))
        })
        .collect()
}

/// Left-invariant chain metric g|_{m_i} = c_i Q|_{m_i} for a filtration
/// K_0 in K_1 in ... in K_n = G; every prefix must be a subalgebra.
#[derive(Clone)]
pub struct ChainMetric<S: Real> {
    dec: Arc<BlockDecomposition<S>>,
    weights: Vec<S>,
}

impl<S: Real> ChainMetric<S> {
    pub fn new(dec: Arc<BlockDecomposition<S>>, weights: Vec<S>) -> Result<Self> {
        if weights.len() != dec.num_blocks() {
            return Err(Error::DimensionMismatch {
                expected: dec.num_blocks(),
                got: weights.len(),
            });
        }
        if weights.iter().any(|&c| !(c > S::zero())) {
            return Err(Error::InvalidMetric("chain weights must be positive".into()));
        }
        for i in 0..dec.num_blocks() {
            if !dec.prefix_is_subalgebra(i) {
                return Err(Error::InvalidMetric(format!(
                    "prefix k_{i} is not a subalgebra; not a chain decomposition"
                )));
            }
        }
        Ok(ChainMetric { dec, weights })
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn decomposition(&self) -> &Arc<BlockDecomposition<S>> {
        &self.dec
    }

    /// Hypothesis of the nonnegative-curvature claim.
    pub fn weights_nondecreasing(&self) -> bool {
        self.weights.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn to_left_invariant(&self) -> Result<LeftInvariantMetric<S>> {
        let dim = self.dec.dim();
        let mut w = vec![S::one(); dim];
        for b in 0..self.dec.num_blocks() {
            for &i in self.dec.block(b) {
                w[i] = self.weights[b];
            }
        }
        LeftInvariantMetric::diagonal(self.dec.algebra().clone(), &w)
    }
}

/// Sampled minimum of the sectional curvature of a chain metric over seeded
/// planes. Under nondecreasing weights the minimum must exceed -1e-10.
pub fn chain_metric_curvature_scan<S: Real>(
    chain: &ChainMetric<S>,
    n_planes: usize,
    seed: u64,
) -> Result<CurvatureReport> {
    let metric = chain.to_left_invariant()?;
    let dim = chain.dec.dim();
    let mut rng = Rng::new(seed);
    let mut min_sec = S::infinity();
    let mut witness = None;
    let mut n = 0usize;
    while n < n_planes {
        let x = rng.unit_vector::<S>(dim);
        let y = rng.unit_vector::<S>(dim);
        let area = metric.inner(&x, &x) * metric.inner(&y, &y) - metric.inner(&x, &y).powi(2);
        if area < S::of(1e-6) {
            continue;
        }
        n += 1;
        let sec = metric.curvature(&x, &y)? / area;
        if sec < min_sec {
            min_sec = sec;
            witness = Some(Witness {
                t: 0.0,
                c: 0.0,
                x: x.iter().map(|v| v.to_f64_lossy()).collect(),
                y: y.iter().map(|v| v.to_f64_lossy()).collect(),
            });
        }
    }
    Ok(CurvatureReport {
        example: String::new(),
        seed,
        n_samples: n,
        min_sec: min_sec.to_f64_lossy(),
        min_sec_witness: witness,
        ..Default::default()
    })
}

/// Chain data for a group K transitive on a sphere: submersion constants
/// rho_1 >= ... >= rho_r making (K, g_rho) -> (S^n, g_0) Riemannian, and a
/// target scale mu in (0, rho_r).
#[derive(Clone)]
pub struct SphereChainData<S: Real> {
    pub chain: Arc<BlockDecomposition<S>>,
    pub rho: Vec<S>,
    pub mu: S,
}

impl<S: Real> SphereChainData<S> {
    pub fn new(chain: Arc<BlockDecomposition<S>>, rho: Vec<S>, mu: S) -> Result<Self> {
        if rho.len() != chain.num_m_blocks() {
            return Err(Error::DimensionMismatch {
                expected: chain.num_m_blocks(),
                got: rho.len(),
            });
        }
        if rho.iter().any(|&r| !(r > S::zero())) {
            return Err(Error::Precondition("rho values must be positive".into()));
        }
        if rho.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Precondition("rho must be nonincreasing".into()));
        }
        let rho_last = *rho.last().unwrap();
        if !(mu > S::zero() && mu < rho_last) {
            return Err(Error::Precondition(format!(
                "mu must lie in (0, rho_r) = (0, {})",
                rho_last.to_f64_lossy()
            )));
        }
        Ok(SphereChainData { chain, rho, mu })
    }
}

/// The constants c_i = mu rho_i / (rho_i - mu), with c_0 taken from
/// rho_0 = rho_1. Monotonicity 0 < c_0 <= ... <= c_r is asserted.
pub fn sphere_chain_constants<S: Real>(data: &SphereChainData<S>) -> Result<ChainMetric<S>> {
    let mu = data.mu;
    let c_of = |rho: S| mu * rho / (rho - mu);
    let rho0 = data.rho[0];
    let mut weights = vec![c_of(rho0)];
    weights.extend(data.rho.iter().map(|&r| c_of(r)));
    let chain = ChainMetric::new(data.chain.clone(), weights)?;
    if !chain.weights_nondecreasing() {
        return Err(Error::Construction(
            "sphere chain constants failed the monotonicity check".into(),
        ));
    }
    Ok(chain)
}

/// Diagonal ball metric dt^2 + sum f_i(t)^2 Q|m_i with
/// f_i^2 = lambda mu rho_i / (lambda rho_i + (1 - lambda) mu).
/// At the declared t0 (where lambda = 1, lambda' > 0) all f_i equal sqrt(mu)
/// with positive slope.
pub fn ball_profile<S: Real>(
    data: &SphereChainData<S>,
    lambda: &WarpProfile<S>,
    t0: S,
) -> Result<Cohom1Metric<S>> {
    let j0 = lambda.eval(t0)?;
    if (j0.f - S::one()).abs() > S::of(1e-9) {
        return Err(Error::Precondition(format!(
            "lambda(t0) must equal 1, got {}",
            j0.f.to_f64_lossy()
        )));
    }
    if !(j0.df > S::zero()) {
        return Err(Error::Precondition("lambda'(t0) must be positive".into()));
    }
    if lambda.min_on_grid(512) <= S::zero() {
        return Err(Error::Precondition("lambda must be positive on its interval".into()));
    }
    let (lo, hi) = lambda.domain();
    let profiles: Vec<WarpProfile<S>> = data
        .rho
        .iter()
        .map(|&rho| {
            let pieces = lambda
                .pieces()
                .iter()
                .map(|p| Piece {
                    lo: p.lo,
                    hi: p.hi,
                    form: Form::BallWarp {
                        mu: data.mu,
                        rho,
                        lambda: Box::new(p.form.clone()),
                    },
                })
                .collect();
            WarpProfile::from_pieces(pieces)
        })
        .collect::<Result<Vec<_>>>()?;
    // Hypothesis check: equal values sqrt(mu) and positive slopes at t0.
    for p in &profiles {
        let j = p.eval(t0)?;
        if (j.f - data.mu.sqrt()).abs() > S::of(1e-9) || !(j.df > S::zero()) {
            return Err(Error::Construction(
                "ball profile does not satisfy the equal-value positive-slope hypothesis".into(),
            ));
        }
    }
    Cohom1Metric::new(data.chain.clone(), (lo, hi), profiles)
}

/// One row of a Cheeger family scan.
#[derive(Clone, Debug)]
pub struct FamilyRow {
    pub delta: f64,
    pub min_sec: f64,
    pub diam_est: f64,
    pub product: f64,
}

/// For each delta, deform the metric blockwise pointwise in t, scan the
/// minimum sectional curvature, and estimate the diameter as interval length
/// plus pi times the largest deformed slice scale (weighted by the catalog
/// slice constants).
pub fn cheeger_family_scan<S: Real>(
    metric: &Cohom1Metric<S>,
    deltas: &[S],
    slice_constants: &[S],
    plan: &SamplingPlan<S>,
) -> Result<Vec<(FamilyRow, CurvatureReport)>> {
    let mut out = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let deformed = deform_metric(metric, delta)?;
        let report = min_sec_scan(&deformed, plan)?;
        let (lo, hi) = deformed.interval();
        let mut max_scale = S::zero();
        for (i, p) in deformed.profiles().iter().enumerate() {
            let kappa = slice_constants.get(i).copied().unwrap_or(S::one());
            max_scale = max_scale.max(p.max_on_grid(257) * kappa);
        }
        let diam = (hi - lo) + S::of(std::f64::consts::PI) * max_scale;
        let row = FamilyRow {
            delta: delta.to_f64_lossy(),
            min_sec: report.min_sec,
            diam_est: diam.to_f64_lossy(),
            product: report.min_sec * diam.to_f64_lossy().powi(2),
        };
        out.push((row, report));
    }
    Ok(out)
}

/// Pointwise-in-t blockwise Cheeger deformation of a diagonal metric; the
/// result is again diagonal with profiles sqrt(delta f^2 / (f^2 + delta)).
pub fn deform_metric<S: Real>(metric: &Cohom1Metric<S>, delta: S) -> Result<Cohom1Metric<S>> {
    if !(delta > S::zero()) {
        return Err(Error::Precondition("delta must be positive".into()));
    }
    let profiles: Vec<WarpProfile<S>> =
        metric.profiles().iter().map(|p| p.cheeger_deformed(delta)).collect();
    Cohom1Metric::new(metric.decomposition().clone(), metric.interval(), profiles)
}

/// Minimum sampled sectional curvature of a diagonal interval metric over
/// the plan's (t, c, x, y) grid. One pool task per grid point, reduced in
/// grid order, so the report is identical for any thread count.
pub fn min_sec_scan<S: Real>(
    metric: &Cohom1Metric<S>,
    plan: &SamplingPlan<S>,
) -> Result<CurvatureReport> {
    let dim = metric.decomposition().dim();
    let m_idx = metric.decomposition().m_indices();
    let mut rng = Rng::new(plan.seed);
    let tasks: Vec<(S, Rng)> =
        metric.sample_grid(plan.t_points).into_iter().map(|t| (t, rng.fork())).collect();
    let pairs = plan.pairs_per_t;
    let c_values = plan.c_values.clone();
    let locals = crate::exec::par_map(tasks, |(t, mut rng)| -> Result<(S, Option<Witness>, usize)> {
        let ev = metric.slice_eval(t)?;
        let mut min_sec = S::infinity();
        let mut witness = None;
        let mut n = 0usize;
        for _ in 0..pairs {
            let x = cohom1::random_m_unit::<S>(&mut rng, dim, &m_idx);
            let y = cohom1::random_m_unit::<S>(&mut rng, dim, &m_idx);
            for &c in &c_values {
                let area = ev.plane_area_sq(c, &x, &y);
                if area < S::of(1e-9) {
                    continue;
                }
                n += 1;
                let sec = ev.curvature_general(c, &x, &y)? / area;
                if sec < min_sec {
                    min_sec = sec;
                    witness = Some(Witness {
                        t: t.to_f64_lossy(),
                        c: c.to_f64_lossy(),
                        x: x.iter().map(|v| v.to_f64_lossy()).collect(),
                        y: y.iter().map(|v| v.to_f64_lossy()).collect(),
                    });
                }
            }
        }
        Ok((min_sec, witness, n))
    });
    let mut min_sec = S::infinity();
    let mut witness = None;
    let mut n = 0usize;
    for local in locals {
        let (m, w, ln) = local?;
        if m < min_sec {
            min_sec = m;
            witness = w;
        }
        n += ln;
    }
    Ok(CurvatureReport {
        example: String::new(),
        seed: plan.seed,
        n_samples: n,
        min_sec: min_sec.to_f64_lossy(),
        min_sec_witness: witness,
        ..Default::default()
    })
}
