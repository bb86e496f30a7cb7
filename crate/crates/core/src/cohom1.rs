//! Direct evaluation of the curvature of metrics dt^2 + g_{phi(t)} on
//! I x G/H: the general diagonalizable four-line formula, its two-block
//! specialization, the quadratic-in-c positivity decomposition and the
//! lower-bound certificates for 0 < f <= 1.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lie::BlockDecomposition;
use crate::linalg::{self};
use crate::oracle;
use crate::profile::{interior_grid, Jet, WarpProfile};
use crate::report::{CurvatureReport, SamplingPlan, Witness};
use crate::rng::Rng;
use crate::scalar::Real;

/// Metric dt^2 + sum_i f_i(t)^2 Q|_{m_i} on (a, b) x G/H.
#[derive(Clone)]
pub struct Cohom1Metric<S: Real> {
    dec: Arc<BlockDecomposition<S>>,
    interval: (S, S),
    profiles: Vec<WarpProfile<S>>,
    two_block_normalized: bool,
}

impl<S: Real> Cohom1Metric<S> {
    pub fn new(
        dec: Arc<BlockDecomposition<S>>,
        interval: (S, S),
        profiles: Vec<WarpProfile<S>>,
    ) -> Result<Self> {
        if !(interval.0 < interval.1) {
            return Err(Error::InvalidMetric("empty interval".into()));
        }
        if profiles.len() != dec.num_m_blocks() {
            return Err(Error::DimensionMismatch {
                expected: dec.num_m_blocks(),
                got: profiles.len(),
            });
        }
        for (i, p) in profiles.iter().enumerate() {
            let (lo, hi) = p.domain();
            if lo > interval.0 + S::of(1e-12) || hi < interval.1 - S::of(1e-12) {
                return Err(Error::InvalidMetric(format!(
                    "profile {i} does not cover the interval"
                )));
            }
            if p.min_on_grid(257) <= S::zero() {
                return Err(Error::InvalidMetric(format!("profile {i} is not positive")));
            }
        }
        Ok(Cohom1Metric { dec, interval, profiles, two_block_normalized: false })
    }

    /// Two-block normalized shape dt^2 + f^2 Q|m1 + Q|m2, requiring
    /// k = h + m_1 to be a subalgebra and 0 < f <= 1 on the interval.
    pub fn two_block(
        dec: Arc<BlockDecomposition<S>>,
        interval: (S, S),
        f: WarpProfile<S>,
    ) -> Result<Self> {
        if dec.num_m_blocks() != 2 {
            return Err(Error::InvalidMetric(format!(
                "two-block shape needs exactly 2 m-blocks, got {}",
                dec.num_m_blocks()
            )));
        }
        if !dec.prefix_is_subalgebra(1) {
            return Err(Error::InvalidMetric("k = h + m_1 is not a subalgebra".into()));
        }
        let (lo, hi) = interval;
        let max_f = f.max_on_grid(257);
        if max_f > S::one() + S::of(1e-12) {
            return Err(Error::InvalidMetric(format!(
                "two-block normalized profile must satisfy f <= 1, max {max_f}"
            )));
        }
        let one = WarpProfile::constant(lo, hi, S::one())?;
        let mut m = Self::new(dec, interval, vec![f, one])?;
        m.two_block_normalized = true;
        Ok(m)
    }

    pub fn decomposition(&self) -> &Arc<BlockDecomposition<S>> {
        &self.dec
    }

    pub fn interval(&self) -> (S, S) {
        self.interval
    }

    pub fn profiles(&self) -> &[WarpProfile<S>] {
        &self.profiles
    }

    pub fn is_two_block_normalized(&self) -> bool {
        self.two_block_normalized
    }

    pub fn check_interior(&self, t: S) -> Result<()> {
        if t <= self.interval.0 || t >= self.interval.1 {
            return Err(Error::Precondition(format!(
                "t = {} not interior to ({}, {})",
                t.to_f64_lossy(),
                self.interval.0.to_f64_lossy(),
                self.interval.1.to_f64_lossy()
            )));
        }
        Ok(())
    }

    /// (f_i, f_i', f_i'') for every block at t.
    pub fn jets_at(&self, t: S) -> Result<Vec<Jet<S>>> {
        self.profiles.iter().map(|p| p.eval(t)).collect()
    }

    /// Interior t-grid avoiding profile breakpoints by a 1e-6 relative nudge.
    pub fn sample_grid(&self, n: usize) -> Vec<S> {
        let (lo, hi) = self.interval;
        let nudge = S::of(1e-6) * (hi - lo);
        interior_grid(lo, hi, n)
            .into_iter()
            .map(|t| {
                let near_break =
                    self.profiles.iter().any(|p| p.is_breakpoint(t, nudge));
                if near_break {
                    t + nudge
                } else {
                    t
                }
            })
            .collect()
    }

    /// Metric inner product on the slice at parameter t.
    pub fn slice_inner(&self, t: S, u: &[S], v: &[S]) -> Result<S> {
        let jets = self.jets_at(t)?;
        let mut acc = S::zero();
        for (bi, j) in jets.iter().enumerate() {
            let w = j.f * j.f;
            for &idx in self.dec.block(bi + 1) {
                acc = acc + w * u[idx] * v[idx];
            }
        }
        Ok(acc)
    }

    /// Squared g-area of the plane spanned by (c dt + x) and y at t.
    pub fn plane_area_sq(&self, t: S, c: S, x: &[S], y: &[S]) -> Result<S> {
        let gxx = c * c + self.slice_inner(t, x, x)?;
        let gyy = self.slice_inner(t, y, y)?;
        let gxy = self.slice_inner(t, x, y)?;
        Ok(gxx * gyy - gxy * gxy)
    }

    /// Cached per-slice evaluator: builds the extension metric and the
    /// blockwise phi data once for a fixed t, for use inside sweep loops.
    pub fn slice_eval(&self, t: S) -> Result<SliceEval<'_, S>> {
        self.check_interior(t)?;
        let jets = self.jets_at(t)?;
        let phi: Vec<S> = jets.iter().map(|j| j.f * j.f).collect();
        let phi_dot: Vec<S> = jets.iter().map(|j| S::of(2.0) * j.f * j.df).collect();
        let phi_ddot: Vec<S> =
            jets.iter().map(|j| S::of(2.0) * (j.df * j.df + j.f * j.ddf)).collect();
        let ext = oracle::extension_metric(&self.dec, &phi)?;
        Ok(SliceEval { metric: self, t, jets, phi, phi_dot, phi_ddot, ext })
    }

    /// The general four-line formula for R(c dt + x, y; y, c dt + x):
    /// slice term, wedge term in phi-dot, the linear-in-c bracket terms, and
    /// the quadratic radial term, with phi assembled blockwise from f_i^2.
    pub fn curvature_general(&self, t: S, c: S, x: &[S], y: &[S]) -> Result<S> {
        self.slice_eval(t)?.curvature_general(c, x, y)
    }

    /// Term-by-term evaluation of the two-block formula for
    /// dt^2 + f^2 Q|m1 + Q|m2.
    pub fn curvature_two_block(&self, t: S, c: S, x: &[S], y: &[S]) -> Result<S> {
        if !self.two_block_normalized {
            return Err(Error::Precondition("metric is not two-block normalized".into()));
        }
        self.check_interior(t)?;
        oracle::check_in_m(&self.dec, x)?;
        oracle::check_in_m(&self.dec, y)?;
        let dec = &self.dec;
        let alg = dec.algebra();
        let j = self.profiles[0].eval(t)?;
        let (f, fp, fpp) = (j.f, j.df, j.ddf);
        let f2 = f * f;

        let x1 = dec.project_block(x, 1);
        let x2 = dec.project_block(x, 2);
        let y1 = dec.project_block(y, 1);
        let y2 = dec.project_block(y, 2);

        let bxy = alg.bracket(x, y)?;
        let b11 = alg.bracket(&x1, &y1)?;
        let b22 = alg.bracket(&x2, &y2)?;
        let b12 = alg.bracket(&x1, &y2)?;
        let b21 = alg.bracket(&x2, &y1)?;

        let h_part = dec.project_h(&bxy);
        let term_h = S::of(0.75) * f2 * linalg::dot(&h_part, &h_part);

        // (1/4) |[x2,y2]_2 + f^2 ([x1,y2] + [x2,y1])|^2 (all terms lie in m2)
        let b22_m2 = dec.project_block(&b22, 2);
        let mixed_m2: Vec<S> = b22_m2
            .iter()
            .zip(linalg::add_vec(&b12, &b21))
            .map(|(&a, b)| a + f2 * b)
            .collect();
        let term_m2 = S::of(0.25) * linalg::dot(&mixed_m2, &mixed_m2);

        let term_11 = S::of(0.25) * f2 * linalg::dot(&b11, &b11);
        let term_cross =
            S::of(0.5) * f2 * (S::of(3.0) - S::of(2.0) * f2) * linalg::dot(&b11, &b22);

        // k = h + m1 projection of [x2, y2]
        let b22_k = dec.project_prefix(&b22, 1);
        let term_k =
            (S::one() - S::of(0.75) * f2) * linalg::dot(&b22_k, &b22_k);

        let term_mixed_c = S::of(3.0) * c * f * fp * linalg::dot(&b22, &y1);
        let term_radial = -c * c * f * fpp * linalg::dot(&y1, &y1);

        let wedge11 = linalg::dot(&x1, &x1) * linalg::dot(&y1, &y1)
            - linalg::dot(&x1, &y1) * linalg::dot(&x1, &y1);
        let term_wedge = -(f * fp) * (f * fp) * wedge11;

        Ok(term_h
            + term_m2
            + term_11
            + term_cross
            + term_k
            + term_mixed_c
            + term_radial
            + term_wedge)
    }

    /// Coefficients of R(c dt + x, y; y, c dt + x) = A + B c + C c^2,
    /// solved from evaluations at c in {0, 1, -1}. Sectional positivity at
    /// (t, x, y) is A > 0, C > 0, AC - B^2/4 > 0 for x ^ y != 0, y != 0.
    pub fn abc_decompose(&self, t: S, x: &[S], y: &[S]) -> Result<(S, S, S)> {
        self.slice_eval(t)?.abc(x, y)
    }

    /// Positivity scan over the standard sampling plan: normalized minima of
    /// A, C and AC - B^2/4. The sweep runs one task per grid point on the
    /// worker pool; results are reduced in grid order.
    pub fn abc_positivity_scan(&self, plan: &SamplingPlan<S>) -> Result<AbcScan<S>> {
        let mut rng = Rng::new(plan.seed);
        let dim = self.dec.dim();
        let m_idx = self.dec.m_indices();
        let tasks: Vec<(S, Rng)> =
            self.sample_grid(plan.t_points).into_iter().map(|t| (t, rng.fork())).collect();
        let pairs = plan.pairs_per_t;
        let locals = crate::exec::par_map(tasks, |(t, mut rng)| -> Result<AbcScan<S>> {
            let ev = self.slice_eval(t)?;
            let mut local =
                AbcScan { min_a: S::infinity(), min_c: S::infinity(), min_disc: S::infinity(), worst: None };
            for _ in 0..pairs {
                let x = random_m_unit(&mut rng, dim, &m_idx);
                let y = random_m_unit(&mut rng, dim, &m_idx);
                let wedge = linalg::dot(&x, &x) * linalg::dot(&y, &y)
                    - linalg::dot(&x, &y) * linalg::dot(&x, &y);
                if wedge < S::of(1e-6) {
                    continue;
                }
                let (a, b, c) = ev.abc(&x, &y)?;
                let a_n = a / wedge;
                let c_n = c; // y is a unit vector
                let disc_n = (a * c - S::of(0.25) * b * b) / wedge;
                let local_min = a_n.min(c_n).min(disc_n);
                if local_min < local.min_a.min(local.min_c).min(local.min_disc) {
                    local.worst = Some(Witness {
                        t: t.to_f64_lossy(),
                        c: 1.0,
                        x: x.iter().map(|v| v.to_f64_lossy()).collect(),
                        y: y.iter().map(|v| v.to_f64_lossy()).collect(),
                    });
                }
                local.min_a = local.min_a.min(a_n);
                local.min_c = local.min_c.min(c_n);
                local.min_disc = local.min_disc.min(disc_n);
            }
            Ok(local)
        });
        let mut out =
            AbcScan { min_a: S::infinity(), min_c: S::infinity(), min_disc: S::infinity(), worst: None };
        for local in locals {
            let local = local?;
            let local_min = local.min_a.min(local.min_c).min(local.min_disc);
            if local_min < out.min_a.min(out.min_c).min(out.min_disc) {
                out.worst = local.worst.clone();
            }
            out.min_a = out.min_a.min(local.min_a);
            out.min_c = out.min_c.min(local.min_c);
            out.min_disc = out.min_disc.min(local.min_disc);
        }
        Ok(out)
    }

    /// Verify the lower bound R >= -(f f')^2 |x1 ^ y1|^2 - 1e-12 at samples
    /// where -f f'' >= 9 (f')^2 holds, and the discriminant identity of its
    /// proof. Reports minimum slack with the worst witness; grid points that
    /// violate the hypothesis are counted, not asserted.
    pub fn sec_lower_bound_check(&self, plan: &SamplingPlan<S>) -> Result<CurvatureReport> {
        if !self.two_block_normalized {
            return Err(Error::Precondition("metric is not two-block normalized".into()));
        }
        let mut rng = Rng::new(plan.seed);
        let dim = self.dec.dim();
        let m_idx = self.dec.m_indices();
        struct Local<S> {
            min_slack: S,
            min_sec: S,
            witness: Option<Witness>,
            violated: bool,
            n: usize,
            disc_residual: S,
            hist: Vec<usize>,
        }
        let tasks: Vec<(S, Rng)> =
            self.sample_grid(plan.t_points).into_iter().map(|t| (t, rng.fork())).collect();
        let pairs = plan.pairs_per_t;
        let c_values = plan.c_values.clone();
        let locals = crate::exec::par_map(tasks, |(t, mut rng)| -> Result<Local<S>> {
            let j = self.profiles[0].eval(t)?;
            let (f, fp, fpp) = (j.f, j.df, j.ddf);
            // Proof identity: (1/4) f^2 (1 - (3/4) f^2) - (1/16) f^4 (3 - 2 f^2)^2
            //                = (1/4) f^2 (1 - f^2)^3.
            let f2 = f * f;
            let lhs = S::of(0.25) * f2 * (S::one() - S::of(0.75) * f2)
                - S::of(1.0 / 16.0) * f2 * f2 * (S::of(3.0) - S::of(2.0) * f2).powi(2);
            let rhs = S::of(0.25) * f2 * (S::one() - f2).powi(3);
            let edges = crate::report::slack_bin_edges();
            let mut local = Local {
                min_slack: S::infinity(),
                min_sec: S::infinity(),
                witness: None,
                violated: false,
                n: 0,
                disc_residual: (lhs - rhs).abs(),
                hist: vec![0usize; edges.len()],
            };
            if -f * fpp + S::of(1e-12) < S::of(9.0) * fp * fp {
                local.violated = true;
                return Ok(local);
            }
            let ev = self.slice_eval(t)?;
            for _ in 0..pairs {
                let x = random_m_unit(&mut rng, dim, &m_idx);
                let y = random_m_unit(&mut rng, dim, &m_idx);
                let x1 = self.dec.project_block(&x, 1);
                let y1 = self.dec.project_block(&y, 1);
                let wedge11 = linalg::dot(&x1, &x1) * linalg::dot(&y1, &y1)
                    - linalg::dot(&x1, &y1) * linalg::dot(&x1, &y1);
                let bound = -(f * fp) * (f * fp) * wedge11;
                for &c in &c_values {
                    local.n += 1;
                    let r = self.curvature_two_block(t, c, &x, &y)?;
                    let slack = r - bound;
                    local.hist
                        [crate::report::slack_bin_index(&edges, slack.to_f64_lossy())] += 1;
                    if slack < local.min_slack {
                        local.min_slack = slack;
                        local.witness = Some(Witness {
                            t: t.to_f64_lossy(),
                            c: c.to_f64_lossy(),
                            x: x.iter().map(|v| v.to_f64_lossy()).collect(),
                            y: y.iter().map(|v| v.to_f64_lossy()).collect(),
                        });
                    }
                    let area = ev.plane_area_sq(c, &x, &y);
                    if area > S::of(1e-9) {
                        local.min_sec = local.min_sec.min(r / area);
                    }
                }
            }
            Ok(local)
        });
        let edges = crate::report::slack_bin_edges();
        let mut min_slack = S::infinity();
        let mut min_sec = S::infinity();
        let mut witness: Option<Witness> = None;
        let mut hypothesis_violations = 0usize;
        let mut n_samples = 0usize;
        let mut max_disc_residual = S::zero();
        let mut hist = vec![0usize; edges.len()];
        for local in locals {
            let local = local?;
            if local.min_slack < min_slack {
                min_slack = local.min_slack;
                witness = local.witness;
            }
            min_sec = min_sec.min(local.min_sec);
            hypothesis_violations += local.violated as usize;
            n_samples += local.n;
            max_disc_residual = max_disc_residual.max(local.disc_residual);
            for (acc, v) in hist.iter_mut().zip(&local.hist) {
                *acc += v;
            }
        }
        Ok(CurvatureReport {
            example: String::new(),
            seed: plan.seed,
            n_samples,
            min_sec: min_sec.to_f64_lossy(),
            min_sec_witness: witness,
            min_slack: Some(min_slack.to_f64_lossy()),
            hypothesis_violations: Some(hypothesis_violations),
            max_discriminant_residual: Some(max_disc_residual.to_f64_lossy()),
            slack_histogram: edges.iter().copied().zip(hist).collect(),
            ..Default::default()
        })
    }

    /// Zero set of the two-block curvature under the equality-case
    /// conditions: x = x2, c y1 = 0 and [x2, y2] + f^2 [x2, y1] = 0.
    /// Returns true iff the curvature vanishes exactly when the conditions
    /// hold (checked over c = 0 and, when y1 = 0, over the plan's c values).
    pub fn equality_case_check(&self, t: S, x2: &[S], y: &[S], tol: S) -> Result<bool> {
        if !self.two_block_normalized {
            return Err(Error::Precondition("metric is not two-block normalized".into()));
        }
        let j = self.profiles[0].eval(t)?;
        if j.df.abs() <= S::of(1e-12) {
            return Err(Error::Precondition("equality criterion needs f'(t) != 0".into()));
        }
        let x1_part = self.dec.project_block(x2, 1);
        if linalg::norm(&x1_part) > S::of(1e-12) {
            return Err(Error::Precondition("x must lie in m2".into()));
        }
        if linalg::norm(y) == S::zero() {
            return Ok(true);
        }
        let f2 = j.f * j.f;
        let y1 = self.dec.project_block(y, 1);
        let y2 = self.dec.project_block(y, 2);
        let b22 = self.dec.algebra().bracket(x2, &y2)?;
        let b21 = self.dec.algebra().bracket(x2, &y1)?;
        let combo: Vec<S> = b22.iter().zip(&b21).map(|(&a, &b)| a + f2 * b).collect();
        let bracket_cond = linalg::norm(&combo) <= tol;

        let mut cs = vec![S::zero()];
        if linalg::norm(&y1) <= tol {
            cs.extend([S::one(), -S::one(), S::of(5.0), S::of(-5.0)]);
        }
        for c in cs {
            let r = self.curvature_two_block(t, c, x2, y)?;
            let vanishes = r.abs() <= tol * (S::one() + r.abs());
            if bracket_cond != vanishes {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Evaluator bound to one slice parameter t, amortizing the extension-metric
/// setup over many (c, x, y) samples.
pub struct SliceEval<'m, S: Real> {
    metric: &'m Cohom1Metric<S>,
    t: S,
    jets: Vec<Jet<S>>,
    phi: Vec<S>,
    phi_dot: Vec<S>,
    phi_ddot: Vec<S>,
    ext: crate::oracle::LeftInvariantMetric<S>,
}

impl<'m, S: Real> SliceEval<'m, S> {
    pub fn t(&self) -> S {
        self.t
    }

    pub fn jets(&self) -> &[Jet<S>] {
        &self.jets
    }

    pub fn curvature_general(&self, c: S, x: &[S], y: &[S]) -> Result<S> {
        let dec = &self.metric.dec;
        oracle::check_in_m(dec, x)?;
        oracle::check_in_m(dec, y)?;
        let alg = dec.algebra();
        let slice = oracle::homogeneous_curvature_with(dec, &self.ext, x, y)?;

        let blockwise = |v: &[S], vals: &[S]| dec.apply_blockwise(v, S::zero(), vals);

        // -(1/4) Lambda^2 Q(Lambda^2 phi-dot (x ^ y), x ^ y)
        let pdx = blockwise(x, &self.phi_dot);
        let pdy = blockwise(y, &self.phi_dot);
        let wedge_term = -S::of(0.25)
            * (linalg::dot(&pdx, x) * linalg::dot(&pdy, y)
                - linalg::dot(&pdx, y) * linalg::dot(&pdy, x));

        // Linear term: (3/2) Q(phi-dot [x,y], y) + Q(phi^{-1}phi-dot y, pi+(x,y))
        //              - Q(phi^{-1}phi-dot x, pi+(y,y)).
        let inv_dot: Vec<S> =
            self.phi_dot.iter().zip(&self.phi).map(|(&d, &p)| d / p).collect();
        let bxy = alg.bracket(x, y)?;
        let phx = blockwise(x, &self.phi);
        let phy = blockwise(y, &self.phi);
        let pi_xy = {
            let a = alg.bracket(x, &phy)?;
            let b = alg.bracket(y, &phx)?;
            linalg::scale_vec(S::of(0.5), &linalg::add_vec(&a, &b))
        };
        let pi_yy = alg.bracket(y, &phy)?;
        let linear = S::of(1.5) * linalg::dot(&blockwise(&bxy, &self.phi_dot), y)
            + linalg::dot(&blockwise(y, &inv_dot), &pi_xy)
            - linalg::dot(&blockwise(x, &inv_dot), &pi_yy);

        // -(1/4) c^2 Q((2 phi-ddot - phi-dot phi^{-1} phi-dot) y, y)
        let quad_vals: Vec<S> = self
            .phi
            .iter()
            .zip(&self.phi_dot)
            .zip(&self.phi_ddot)
            .map(|((&p, &d), &dd)| S::of(2.0) * dd - d * d / p)
            .collect();
        let quad = -S::of(0.25) * linalg::dot(&blockwise(y, &quad_vals), y);

        Ok(slice + wedge_term + c * linear + c * c * quad)
    }

    pub fn abc(&self, x: &[S], y: &[S]) -> Result<(S, S, S)> {
        let r0 = self.curvature_general(S::zero(), x, y)?;
        let rp = self.curvature_general(S::one(), x, y)?;
        let rm = self.curvature_general(-S::one(), x, y)?;
        Ok((r0, S::of(0.5) * (rp - rm), S::of(0.5) * (rp + rm) - r0))
    }

    pub fn slice_inner(&self, u: &[S], v: &[S]) -> S {
        let mut acc = S::zero();
        for (bi, &p) in self.phi.iter().enumerate() {
            for &idx in self.metric.dec.block(bi + 1) {
                acc = acc + p * u[idx] * v[idx];
            }
        }
        acc
    }

    pub fn plane_area_sq(&self, c: S, x: &[S], y: &[S]) -> S {
        let gxx = c * c + self.slice_inner(x, x);
        let gyy = self.slice_inner(y, y);
        let gxy = self.slice_inner(x, y);
        gxx * gyy - gxy * gxy
    }
}

/// Result of an abc positivity scan: normalized minima of the three
/// positivity quantities.
#[derive(Clone, Debug)]
pub struct AbcScan<S> {
    pub min_a: S,
    pub min_c: S,
    pub min_disc: S,
    pub worst: Option<Witness>,
}

impl<S: Real> AbcScan<S> {
    pub fn passes(&self) -> bool {
        self.min_a > S::zero() && self.min_c > S::zero() && self.min_disc > S::zero()
    }
}

/// Random Q-unit vector supported on the m-indices.
pub fn random_m_unit<S: Real>(rng: &mut Rng, dim: usize, m_idx: &[usize]) -> Vec<S> {
    loop {
        let mut v = vec![S::zero(); dim];
        for &i in m_idx {
            v[i] = rng.symmetric();
        }
        let n = linalg::norm(&v);
        if n > S::of(1e-3) {
            return linalg::scale_vec(S::one() / n, &v);
        }
    }
}

/// Interior grid helper re-exported for sweep drivers.
pub fn t_grid<S: Real>(interval: (S, S), n: usize) -> Vec<S> {
    interior_grid(interval.0, interval.1, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::profile::Form;

    fn su2_one_block(fform: Form<f64>) -> Cohom1Metric<f64> {
        // su(2) with trivial h and a single block m1 = everything.
        let algebra = Arc::new(catalog::su2::<f64>());
        let dec = Arc::new(
            BlockDecomposition::new(algebra, vec![vec![], vec![0, 1, 2]]).unwrap(),
        );
        let f = WarpProfile::single(0.5, 2.5, fform).unwrap();
        Cohom1Metric::new(dec, (0.5, 2.5), vec![f]).unwrap()
    }

    #[test]
    fn zero_when_c_zero_and_x_equals_y() {
        let m = catalog::load_scenario::<f64>("so4-stiefel").unwrap().default_metric().unwrap();
        let mut v = vec![0.0; 6];
        v[1] = 0.7;
        v[2] = -0.4;
        let r = m.curvature_general(1.0, 0.0, &v, &v).unwrap();
        assert!(r.abs() < 1e-13);
    }

    #[test]
    fn constant_profiles_reduce_to_slice_curvature() {
        let s = catalog::load_scenario::<f64>("so4-stiefel").unwrap();
        let f1 = WarpProfile::constant(0.0, 2.0, 1.3).unwrap();
        let f2 = WarpProfile::constant(0.0, 2.0, 0.9).unwrap();
        let m = Cohom1Metric::new(s.decomposition.clone(), (0.0, 2.0), vec![f1, f2]).unwrap();
        let mut rng = Rng::new(42);
        let m_idx = s.decomposition.m_indices();
        for _ in 0..20 {
            let x = random_m_unit::<f64>(&mut rng, 6, &m_idx);
            let y = random_m_unit::<f64>(&mut rng, 6, &m_idx);
            let c = rng.symmetric::<f64>();
            let r = m.curvature_general(1.0, c, &x, &y).unwrap();
            let slice =
                oracle::homogeneous_curvature(&s.decomposition, &[1.69, 0.81], &x, &y).unwrap();
            assert!((r - slice).abs() < 1e-12 * (1.0 + slice.abs()));
        }
    }

    #[test]
    fn one_block_radial_term_is_minus_ffpp() {
        // su(2), one block with profile f: x = 0, c = 1 gives -f f'' |y|^2.
        let m = su2_one_block(catalog::sine_offset(1.2, 0.3, 1.0));
        let mut rng = Rng::new(42);
        for _ in 0..20 {
            let t = rng.range(0.6, 2.4);
            let y = rng.unit_vector::<f64>(3);
            let x = vec![0.0; 3];
            let r = m.curvature_general(t, 1.0, &x, &y).unwrap();
            let j = m.profiles()[0].eval(t).unwrap();
            let expected = -j.f * j.ddf;
            assert!(
                (r - expected).abs() < 1e-12 * (1.0 + expected.abs()),
                "r = {r}, expected = {expected}"
            );
        }
    }

    #[test]
    fn abc_round_trip_reproduces_curvature() {
        let m = catalog::load_scenario::<f64>("so4-stiefel").unwrap().default_metric().unwrap();
        let mut rng = Rng::new(42);
        let m_idx = m.decomposition().m_indices();
        for _ in 0..20 {
            let t = rng.range(0.6, 2.4);
            let x = random_m_unit::<f64>(&mut rng, 6, &m_idx);
            let y = random_m_unit::<f64>(&mut rng, 6, &m_idx);
            let (a, b, c) = m.abc_decompose(t, &x, &y).unwrap();
            for &cv in &[0.3, -0.7, 2.0, 5.0, -5.0] {
                let direct = m.curvature_general(t, cv, &x, &y).unwrap();
                let poly = a + b * cv + c * cv * cv;
                assert!((direct - poly).abs() < 1e-12 * (1.0 + direct.abs()));
            }
        }
    }

    #[test]
    fn abc_b_vanishes_for_equal_constant_profiles() {
        // phi = lambda Id constant in t: the linear-in-c coefficient vanishes.
        let s = catalog::load_scenario::<f64>("so4-stiefel").unwrap();
        let f1 = WarpProfile::constant(0.0, 2.0, 1.1).unwrap();
        let f2 = WarpProfile::constant(0.0, 2.0, 1.1).unwrap();
        let m = Cohom1Metric::new(s.decomposition.clone(), (0.0, 2.0), vec![f1, f2]).unwrap();
        let mut rng = Rng::new(42);
        let m_idx = s.decomposition.m_indices();
        for _ in 0..20 {
            let x = random_m_unit::<f64>(&mut rng, 6, &m_idx);
            let y = random_m_unit::<f64>(&mut rng, 6, &m_idx);
            let (_, b, _) = m.abc_decompose(1.0, &x, &y).unwrap();
            assert!(b.abs() < 1e-13);
        }
    }

    #[test]
    fn abc_a_and_b_vanish_for_parallel_arguments() {
        let m = catalog::load_scenario::<f64>("so4-stiefel").unwrap().default_metric().unwrap();
        let mut v = vec![0.0; 6];
        v[1] = 0.6;
        v[4] = -0.8;
        let (a, b, _) = m.abc_decompose(1.0, &v, &v).unwrap();
        assert!(a.abs() < 1e-13 && b.abs() < 1e-13);
    }

    #[test]
    fn two_block_matches_general_on_so5() {
        let s = catalog::load_scenario::<f64>("so5-two-block").unwrap();
        let m = s.two_block_metric().unwrap();
        let mut rng = Rng::new(42);
        let m_idx = s.decomposition.m_indices();
        let mut checked = 0;
        for &t in &m.sample_grid(8) {
            for _ in 0..32 {
                let x = random_m_unit::<f64>(&mut rng, 10, &m_idx);
                let y = random_m_unit::<f64>(&mut rng, 10, &m_idx);
                for &c in &[0.0, 1.0, -1.0, 5.0] {
                    let a = m.curvature_two_block(t, c, &x, &y).unwrap();
                    let b = m.curvature_general(t, c, &x, &y).unwrap();
                    assert!(
                        (a - b).abs() <= 1e-10 * (1.0 + a.abs()),
                        "two-block {a} vs general {b} at t={t}, c={c}"
                    );
                    checked += 1;
                }
            }
        }
        assert!(checked > 500);
    }

    #[test]
    fn two_block_with_constant_one_is_slice_value() {
        let s = catalog::load_scenario::<f64>("so4-stiefel").unwrap();
        let f = WarpProfile::constant(0.0, 2.0, 1.0).unwrap();
        let m = Cohom1Metric::two_block(s.decomposition.clone(), (0.0, 2.0), f).unwrap();
        let mut rng = Rng::new(42);
        let m_idx = s.decomposition.m_indices();
        for _ in 0..20 {
            let x = random_m_unit::<f64>(&mut rng, 6, &m_idx);
            let y = random_m_unit::<f64>(&mut rng, 6, &m_idx);
            let r = m.curvature_two_block(1.0, 0.0, &x, &y).unwrap();
            let slice =
                oracle::homogeneous_curvature(&s.decomposition, &[1.0, 1.0], &x, &y).unwrap();
            assert!((r - slice).abs() < 1e-12 * (1.0 + slice.abs()));
        }
    }

    #[test]
    fn scaling_covariance_in_q() {
        // Homothety g -> s g realized as Q -> sQ with t reparametrized by
        // sqrt(s): structure constants rescale by 1/sqrt(s), profile
        // frequencies by 1/sqrt(s), the interval and evaluation point by
        // sqrt(s), and every slot of the curvature tensor picks up sqrt(s).
        // Fixed abstract vectors then scale every numerator by s.
        for &s in &[0.25f64, 4.0] {
            let rt = s.sqrt();
            let base = catalog::load_scenario::<f64>("su2-chain").unwrap();
            let m = {
                let f1 =
                    WarpProfile::single(0.5, 2.5, catalog::sine_offset(1.1, 0.25, 1.0)).unwrap();
                let f2 =
                    WarpProfile::single(0.5, 2.5, catalog::sine_offset(1.3, 0.125, 1.0)).unwrap();
                Cohom1Metric::new(base.decomposition.clone(), (0.5, 2.5), vec![f1, f2]).unwrap()
            };
            let scaled_algebra = {
                let c: Vec<f64> = catalog::su2::<f64>()
                    .structure_constants()
                    .iter()
                    .map(|v| v / rt)
                    .collect();
                Arc::new(crate::lie::LieAlgebra::new("su2-scaled", 3, c).unwrap())
            };
            let scaled_dec = Arc::new(
                BlockDecomposition::new(scaled_algebra, vec![vec![], vec![0], vec![1, 2]])
                    .unwrap(),
            );
            let m_scaled = {
                let f1 = WarpProfile::single(
                    0.5 * rt,
                    2.5 * rt,
                    catalog::sine_offset(1.1, 0.25, 1.0 / rt),
                )
                .unwrap();
                let f2 = WarpProfile::single(
                    0.5 * rt,
                    2.5 * rt,
                    catalog::sine_offset(1.3, 0.125, 1.0 / rt),
                )
                .unwrap();
                Cohom1Metric::new(scaled_dec, (0.5 * rt, 2.5 * rt), vec![f1, f2]).unwrap()
            };
            let mut rng = Rng::new(42);
            for _ in 0..30 {
                let t = rng.range(0.6, 2.4);
                let c = rng.symmetric::<f64>();
                let x = rng.vector::<f64>(3);
                let y = rng.vector::<f64>(3);
                let x_scaled: Vec<f64> = x.iter().map(|v| v * rt).collect();
                let y_scaled: Vec<f64> = y.iter().map(|v| v * rt).collect();
                let r = m.curvature_general(t, c, &x, &y).unwrap();
                let r_scaled = m_scaled
                    .curvature_general(t * rt, c * rt, &x_scaled, &y_scaled)
                    .unwrap();
                assert!(
                    (r_scaled - s * r).abs() < 1e-12 * (1.0 + (s * r).abs()),
                    "s = {s}: scaled {r_scaled} vs s*r {}",
                    s * r
                );
            }
        }
    }

    #[test]
    fn discriminant_identity_at_half() {
        // (1/4) f^2 (1 - f^2)^3 at f = 1/2 equals 27/1024.
        let f: f64 = 0.5;
        let f2 = f * f;
        let lhs = 0.25 * f2 * (1.0 - 0.75 * f2) - (1.0 / 16.0) * f2 * f2 * (3.0 - 2.0 * f2).powi(2);
        let rhs = 0.25 * f2 * (1.0 - f2).powi(3);
        assert!((lhs - 27.0 / 1024.0).abs() < 1e-15);
        assert!((lhs - rhs).abs() < 1e-15);
    }

    #[test]
    fn equality_case_holds_for_commuting_pair() {
        // so(5) two-block: x2 and y2 with vanishing brackets give zero
        // curvature at c = 0.
        let s = catalog::load_scenario::<f64>("so5-two-block").unwrap();
        let m = s.two_block_metric().unwrap();
        // x2 = E03 (index 2), y2 = E14 (index 6): [E03, E14] = 0, no m1 parts.
        let mut x2 = vec![0.0; 10];
        x2[2] = 1.0;
        let mut y = vec![0.0; 10];
        y[6] = 1.0;
        assert!(m.equality_case_check(1.0, &x2, &y, 1e-10).unwrap());
    }

    #[test]
    fn equality_case_detects_noncommuting_pair() {
        let s = catalog::load_scenario::<f64>("so5-two-block").unwrap();
        let m = s.two_block_metric().unwrap();
        // x2 = E03, y2 = E04: [E03, E04] = E34 != 0 with nonzero k-part, so
        // the curvature is strictly positive and conditions are violated.
        let mut x2 = vec![0.0; 10];
        x2[2] = 1.0;
        let mut y = vec![0.0; 10];
        y[3] = 1.0;
        let r = m.curvature_two_block(1.0, 0.0, &x2, &y).unwrap();
        assert!(r > 1e-6);
        assert!(m.equality_case_check(1.0, &x2, &y, 1e-10).unwrap());
    }

    #[test]
    fn equality_case_trivial_for_zero_y() {
        let s = catalog::load_scenario::<f64>("so5-two-block").unwrap();
        let m = s.two_block_metric().unwrap();
        let mut x2 = vec![0.0; 10];
        x2[2] = 1.0;
        let y = vec![0.0; 10];
        assert!(m.equality_case_check(1.0, &x2, &y, 1e-10).unwrap());
    }
}
