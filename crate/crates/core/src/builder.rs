//! Warping-function synthesis: differential-inequality checking, the
//! disc-bundle profile construction (cone piece, concave cap, unit plateau),
//! deformation-condition reports, profile equalization toward a common
//! warped-product end, and the glue-and-bound assembly for doubled discs.



use crate::catalog::Scenario;
use crate::cohom1::{AbcScan, Cohom1Metric};
use crate::error::{Error, Result};
use crate::linalg;
use crate::profile::{Form, Piece, WarpProfile};
use crate::quotient::{self, QuotientContext};
use crate::report::{CurvatureReport, SamplingPlan};
use crate::rng::Rng;
use crate::scalar::Real;

/// Margins of the differential inequality -f f'' >= C (f')^2 over a grid,
/// together with the equivalent second-derivative form (f^{C+1})''.
#[derive(Clone, Debug)]
pub struct InequalityReport<S> {
    /// max over the grid of C (f')^2 + f f'' (<= 0 when the inequality holds)
    pub max_quadratic: S,
    /// max over the grid of (f^{C+1})''
    pub max_power_second: S,
    /// worst mismatch between the two normalized forms (an algebraic identity)
    pub max_equivalence_residual: S,
    pub holds: bool,
}

/// C (f')^2 + f f'' and (f^{C+1})'' reported over the grid; the two sign
/// conditions are equivalent through (f^{C+1})'' = (C+1) f^{C-1} (C (f')^2 + f f'').
pub fn check_inequality<S: Real>(
    f: &WarpProfile<S>,
    c_exp: usize,
    grid: &[S],
) -> Result<InequalityReport<S>> {
    let c = S::from_usize(c_exp).unwrap();
    let mut max_quadratic = S::neg_infinity();
    let mut max_power_second = S::neg_infinity();
    let mut max_res = S::zero();
    for &t in grid {
        let j = f.eval(t)?;
        let quad = c * j.df * j.df + j.f * j.ddf;
        let factor = S::from_usize(c_exp + 1).unwrap() * j.f.powf(c - S::one());
        let power_second = factor * quad;
        max_quadratic = max_quadratic.max(quad);
        max_power_second = max_power_second.max(power_second);
        // Normalized equivalence residual: the identity divided back.
        let back = power_second / factor;
        max_res = max_res.max((back - quad).abs() / (S::one() + quad.abs()));
    }
    Ok(InequalityReport {
        max_quadratic,
        max_power_second,
        max_equivalence_residual: max_res,
        holds: max_quadratic <= S::of(1e-12),
    })
}

/// Unique root of (f0'/f0)^2 = delta for the cone profile
/// f0 = c0 t / sqrt(1 + c0^2 t^2); since f0'/f0 = 1/(t (1 + c0^2 t^2)),
/// the root solves t (1 + c0^2 t^2) = delta^{-1/2}. Bisection to 1e-12
/// relative.
pub fn solve_r0<S: Real>(delta: S, c0: S) -> Result<S> {
    if !(delta > S::zero()) || !(c0 > S::zero()) {
        return Err(Error::Precondition("delta and c0 must be positive".into()));
    }
    let target = S::one() / delta.sqrt();
    let psi = |t: S| t * (S::one() + c0 * c0 * t * t) - target;
    let mut lo = S::zero();
    let mut hi = target.max(S::one());
    if psi(hi) < S::zero() {
        hi = hi * S::of(2.0);
    }
    for _ in 0..200 {
        let mid = S::of(0.5) * (lo + hi);
        if psi(mid) > S::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
        if (hi - lo) <= S::of(1e-13) * hi.max(S::one()) {
            break;
        }
    }
    let root = S::of(0.5) * (lo + hi);
    if root < S::one() - S::of(1e-9) {
        return Err(Error::Precondition(format!(
            "construction domain violated: R0 = {} < 1 (delta too large)",
            root.to_f64_lossy()
        )));
    }
    Ok(root.max(S::one()))
}

/// Disc profile built from the cone piece and a concave C^2 cap reaching a
/// unit plateau: f = f0 on [1, R0], f = h^{1/(C+1)} with h'' <= 0 on
/// [R0, R], f = 1 on the terminal segment.
#[derive(Clone)]
pub struct BuiltDiscProfile<S: Real> {
    pub delta: S,
    pub c0: S,
    pub c_exp: usize,
    pub r0: S,
    pub r: S,
    pub plateau_start: S,
    pub profile: WarpProfile<S>,
}

impl<S: Real> BuiltDiscProfile<S> {
    /// Re-verify every structural invariant on a fine grid.
    pub fn validate(&self) -> Result<()> {
        self.profile.check_joins()?;
        // f = f0 exactly on [1, R0]: the piece itself is the cone form.
        match &self.profile.pieces()[0].form {
            Form::CheegerCone { c0 } if (*c0 - self.c0).abs() == S::zero() => {}
            _ => {
                return Err(Error::InvalidProfile(
                    "first piece is not the exact cone profile".into(),
                ))
            }
        }
        let c = S::from_usize(self.c_exp).unwrap();
        let mut prev_f = S::zero();
        let n = 2048;
        for i in 0..=n {
            let t = S::one()
                + (self.r - S::one()) * S::from_usize(i).unwrap() / S::from_usize(n).unwrap();
            let t = t.min(self.r - S::of(1e-9) * self.r);
            let j = self.profile.eval(t)?;
            if !(j.f > S::zero() && j.f <= S::one() + S::of(1e-12)) {
                return Err(Error::InvalidProfile(format!(
                    "f out of (0, 1] at t = {}: {}",
                    t.to_f64_lossy(),
                    j.f.to_f64_lossy()
                )));
            }
            if j.df < -S::of(1e-12) {
                return Err(Error::InvalidProfile(format!(
                    "f' negative at t = {}",
                    t.to_f64_lossy()
                )));
            }
            if j.f + S::of(1e-12) < prev_f {
                return Err(Error::InvalidProfile("f not nondecreasing".into()));
            }
            prev_f = j.f;
            if t >= self.r0 {
                let quad = c * j.df * j.df + j.f * j.ddf;
                let power_second =
                    S::from_usize(self.c_exp + 1).unwrap() * j.f.powf(c - S::one()) * quad;
                if power_second > S::of(1e-12) {
                    return Err(Error::InvalidProfile(format!(
                        "(f^(C+1))'' = {:e} > 0 at t = {}",
                        power_second.to_f64_lossy(),
                        t.to_f64_lossy()
                    )));
                }
            }
        }
        // Nonempty terminal plateau at exactly 1.
        if !(self.plateau_start < self.r) {
            return Err(Error::InvalidProfile("empty terminal plateau".into()));
        }
        let probe = self.plateau_start + S::of(0.5) * (self.r - self.plateau_start);
        let j = self.profile.eval(probe)?;
        if (j.f - S::one()).abs() > S::of(1e-12) || j.df.abs() > S::of(1e-12) {
            return Err(Error::InvalidProfile("terminal segment is not f = 1".into()));
        }
        Ok(())
    }
}

/// Construct the disc profile for (delta, c0, C): the cone f0 up to R0 where
/// (f0'/f0)^2 = delta, then a concave cap in h = f^{C+1} with
/// R = R0 + (1 - h(R0))/h'(R0) + 1, rising to the exact unit plateau.
pub fn build_disc_profile<S: Real>(delta: S, c0: S, c_exp: usize) -> Result<BuiltDiscProfile<S>> {
    if c_exp < 9 {
        return Err(Error::Precondition("C must be at least 9".into()));
    }
    let r0 = solve_r0(delta, c0)?;
    let cone = Form::CheegerCone { c0 };
    let j0 = cone.eval(r0);
    let cp1 = S::from_usize(c_exp + 1).unwrap();
    let c = S::from_usize(c_exp).unwrap();
    let h0 = j0.f.powf(cp1);
    let s0 = cp1 * j0.f.powf(c) * j0.df;
    let hpp0 = cp1 * j0.f.powf(c - S::one()) * (c * j0.df * j0.df + j0.f * j0.ddf);
    if !(hpp0 < S::zero()) {
        return Err(Error::Precondition(format!(
            "(f0^(C+1))''(R0) = {:e} not negative; delta too large for the cap",
            hpp0.to_f64_lossy()
        )));
    }
    let r = r0 + (S::one() - h0) / s0 + S::one();
    let cap_len = r - r0;

    // Landing piece: h'' fades linearly from hpp0 to 0 over width w, so
    // h' drops from s0 to s1 = s0 + hpp0 w / 2 > 0.
    let mut w = S::of(0.25).min(S::of(0.5) * s0 / hpp0.abs()).min(cap_len / S::of(8.0));
    let rise = S::one() - h0;
    let mut i1 = s0 * w + hpp0 * w * w / S::of(3.0);
    for _ in 0..40 {
        if i1 < rise {
            break;
        }
        w = w * S::of(0.5);
        i1 = s0 * w + hpp0 * w * w / S::of(3.0);
    }
    if i1 >= rise {
        return Err(Error::Construction("cap landing piece cannot fit the rise".into()));
    }
    let s1 = s0 + hpp0 * w / S::of(2.0);
    let l_eff = (rise - i1) / s1; // = a + l/2
    let mut chosen: Option<(S, S)> = None;
    for frac in [1.0, 0.5, 0.25, 0.1, 0.05] {
        let l = S::of(frac).min(cap_len / S::of(4.0));
        let a = l_eff - l * S::of(0.5);
        let plateau = cap_len - w - l_eff - l * S::of(0.5);
        if a >= S::zero() && plateau > S::of(1e-3) {
            chosen = Some((a, l));
            break;
        }
    }
    let (a_len, l_len) = chosen.ok_or_else(|| {
        Error::Construction("no cap layout with a nonempty plateau; delta too large".into())
    })?;

    let alpha = S::one() / cp1;
    let mut pieces = vec![Piece { lo: S::one(), hi: r0, form: Form::CheegerCone { c0 } }];
    // h on [R0, R0 + w]: cubic with h'' fading linearly to zero.
    let six = S::of(6.0);
    pieces.push(Piece {
        lo: r0,
        hi: r0 + w,
        form: Form::PowerOfPoly {
            coeffs: vec![h0, s0, hpp0 * S::of(0.5), -hpp0 / (six * w)],
            center: r0,
            alpha,
        },
    });
    let h1 = h0 + i1;
    let t2 = r0 + w;
    if a_len > S::of(1e-12) {
        pieces.push(Piece {
            lo: t2,
            hi: t2 + a_len,
            form: Form::PowerOfPoly { coeffs: vec![h1, s1], center: t2, alpha },
        });
    }
    let t3 = t2 + a_len;
    let h2 = h1 + s1 * a_len;
    // h on the ramp-down: h = H2 + s1 tau - s1 (2.5 tau^4/l^3 - 3 tau^5/l^4 + tau^6/l^5).
    let l3 = l_len * l_len * l_len;
    let l4 = l3 * l_len;
    let l5 = l4 * l_len;
    pieces.push(Piece {
        lo: t3,
        hi: t3 + l_len,
        form: Form::PowerOfPoly {
            coeffs: vec![
                h2,
                s1,
                S::zero(),
                S::zero(),
                -S::of(2.5) * s1 / l3,
                S::of(3.0) * s1 / l4,
                -s1 / l5,
            ],
            center: t3,
            alpha,
        },
    });
    let plateau_start = t3 + l_len;
    pieces.push(Piece { lo: plateau_start, hi: r, form: Form::Constant(S::one()) });

    let profile = WarpProfile::from_pieces(pieces)?;
    let built = BuiltDiscProfile { delta, c0, c_exp, r0, r, plateau_start, profile };
    built.validate()?;
    Ok(built)
}

/// Variant switch for condition (iv): the printed quotient uses f'_1 in the
/// numerator; the plausible correction uses f~'_1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RhoVariant {
    MixedSlopes,
    DeformedSlopes,
}

/// Worst margins of the four deformation conditions over the grid J.
/// Positive margins mean the condition holds with room to spare.
#[derive(Clone, Debug)]
pub struct DeformationReport<S> {
    pub margin_values: S,
    pub margin_first_derivative: S,
    pub margin_second_derivative: S,
    pub margin_slope_branch: S,
    pub variant: RhoVariant,
}

impl<S: Real> DeformationReport<S> {
    pub fn passes(&self) -> bool {
        self.margin_values > S::zero()
            && self.margin_first_derivative > S::zero()
            && self.margin_second_derivative > S::zero()
            && self.margin_slope_branch > S::zero()
    }
}

/// Check the deformation conditions (i)-(iv) for a tuple f~ against f on a
/// grid: |f~_i - c0| < eps, |f~'_i| < |f'_i| + eps, f~''_i < f''_i + eps,
/// and the two-branch slope-ratio condition.
pub fn deformation_conditions<S: Real>(
    f: &[WarpProfile<S>],
    f_tilde: &[WarpProfile<S>],
    c0: S,
    eps: S,
    grid: &[S],
    variant: RhoVariant,
) -> Result<DeformationReport<S>> {
    if f.len() != f_tilde.len() || f.is_empty() {
        return Err(Error::DimensionMismatch { expected: f.len(), got: f_tilde.len() });
    }
    let k = f.len();
    let mut m_val = S::infinity();
    let mut m_d1 = S::infinity();
    let mut m_d2 = S::infinity();
    let mut m_slope = S::infinity();
    for &t in grid {
        let jf: Vec<_> = f.iter().map(|p| p.eval(t)).collect::<Result<_>>()?;
        let jt: Vec<_> = f_tilde.iter().map(|p| p.eval(t)).collect::<Result<_>>()?;
        for i in 0..k {
            m_val = m_val.min(eps - (jt[i].f - c0).abs());
            m_d1 = m_d1.min(jf[i].df.abs() + eps - jt[i].df.abs());
            m_d2 = m_d2.min(jf[i].ddf + eps - jt[i].ddf);
        }
        // Condition (iv): either all slopes eps-close to f'_1 (both tuples),
        // or the rho-ratios are controlled.
        let mut branch_a = S::infinity();
        for i in 1..k {
            branch_a = branch_a.min(eps - (jt[i].df - jf[0].df).abs());
            branch_a = branch_a.min(eps - (jf[i].df - jf[0].df).abs());
        }
        if k == 1 {
            branch_a = eps;
        }
        let branch_b = {
            let rho = |i: usize| -> Option<S> {
                let den = jf[i].df - jf[0].df;
                if den.abs() < S::of(1e-14) {
                    return None;
                }
                let num = match variant {
                    RhoVariant::MixedSlopes => jt[i].df - jf[0].df,
                    RhoVariant::DeformedSlopes => jt[i].df - jt[0].df,
                };
                Some(num / den)
            };
            match rho(k - 1) {
                None => S::neg_infinity(),
                Some(rho_k) => {
                    let mut m = S::one() + eps - rho_k.abs();
                    for i in 1..k {
                        match rho(i) {
                            Some(r) => m = m.min(eps - (r - rho_k).abs()),
                            None => m = S::neg_infinity(),
                        }
                    }
                    m
                }
            }
        };
        m_slope = m_slope.min(branch_a.max(branch_b));
    }
    Ok(DeformationReport {
        margin_values: m_val,
        margin_first_derivative: m_d1,
        margin_second_derivative: m_d2,
        margin_slope_branch: m_slope,
        variant,
    })
}

/// Options for the profile equalization.
#[derive(Clone, Debug)]
pub struct EqualizeOptions<S> {
    /// Contact point t1 as a fraction of (b - t0); the slowest profile is
    /// met there.
    pub t1_fraction: S,
    /// Half-width of the C^2 blend window around t1, as a fraction of t1 - t0.
    pub blend_fraction: S,
    /// Positivity scan resolution for the output certificate.
    pub scan_plan: SamplingPlan<S>,
}

impl<S: Real> Default for EqualizeOptions<S> {
    fn default() -> Self {
        EqualizeOptions {
            t1_fraction: S::of(0.15),
            blend_fraction: S::of(0.5),
            scan_plan: SamplingPlan { t_points: 48, pairs_per_t: 96, ..Default::default() },
        }
    }
}

/// Result of an equalization: the deformed metric and its positivity scan.
pub struct EqualizeOutcome<S: Real> {
    pub metric: Cohom1Metric<S>,
    pub scan: AbcScan<S>,
    /// Index ordering of profiles by slope at t0 (slowest first).
    pub slope_order: Vec<usize>,
    pub t1: S,
}

/// Deform the profiles of a positively curved diagonal metric, all equal at
/// t0 with positive slopes, into a tuple that agrees with the original near
/// the left end and ends as a single common warp f with f' > 0, f'' < 0,
/// re-verified by the positivity scan.
pub fn equalize_profiles<S: Real>(
    metric: &Cohom1Metric<S>,
    t0: S,
    opts: &EqualizeOptions<S>,
) -> Result<EqualizeOutcome<S>> {
    let (a, b) = metric.interval();
    metric.check_interior(t0)?;
    let k = metric.profiles().len();
    let jets0: Vec<_> = metric.jets_at(t0)?;
    let c0 = jets0[0].f;
    for j in &jets0 {
        if (j.f - c0).abs() > S::of(1e-9) {
            return Err(Error::Precondition(
                "profiles must share a common value at t0".into(),
            ));
        }
        if !(j.df > S::zero()) {
            return Err(Error::Precondition("profile slopes at t0 must be positive".into()));
        }
    }
    let forms: Vec<Form<S>> = metric
        .profiles()
        .iter()
        .map(|p| {
            if p.pieces().len() != 1 {
                return Err(Error::Precondition(
                    "equalization expects single-piece analytic profiles".into(),
                ));
            }
            Ok(p.pieces()[0].form.clone())
        })
        .collect::<Result<_>>()?;

    // Order by slope at t0: index 0 of `order` is the slowest (the f_1 role),
    // the last is the fastest (the f_k role).
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| jets0[i].df.partial_cmp(&jets0[j].df).unwrap());
    let slow = order[0];
    let fast = order[k - 1];

    let t1 = t0 + opts.t1_fraction * (b - t0);
    let jets1: Vec<_> = metric.jets_at(t1)?;
    let spread = jets1[fast].f - jets1[slow].f;
    let dspread = jets1[fast].df - jets1[slow].df;
    let degenerate = spread.abs() < S::of(1e-11) || dspread < S::of(1e-9);

    // f-bar_i = f_i - C_i phi with phi >= 0 convex, zero to second order at
    // t_c and matching the fast-slow gap in value and slope at t1. Convexity
    // of phi keeps every f-bar at most as convex as f_i, so the correction
    // never spoils the radial curvature coefficient.
    let mut bars: Vec<Form<S>> = forms.clone();
    let mut t_c = t1;
    if !degenerate {
        // phi'(t) = dspread * smoothstep((t - t_c)/ramp); integrating gives
        // phi(t1) = dspread * ramp / 2, so ramp = 2 spread / dspread.
        let ramp = S::of(2.0) * spread / dspread;
        t_c = t1 - ramp;
        if t_c <= a + S::of(0.02) * (b - a) {
            return Err(Error::Construction(format!(
                "profiles spread too fast: convex correction would start at {} before the \
                 interval; move t1 closer to t0",
                t_c.to_f64_lossy()
            )));
        }
        let r3 = ramp * ramp * ramp;
        let r4 = r3 * ramp;
        let r5 = r4 * ramp;
        let phi = Form::Poly {
            coeffs: vec![
                S::zero(),
                S::zero(),
                S::zero(),
                S::zero(),
                S::of(2.5) * dspread / r3,
                S::of(-3.0) * dspread / r4,
                dspread / r5,
            ],
            center: t_c,
        };
        bars = (0..k)
            .map(|i| {
                let c_i = (jets1[i].f - jets1[slow].f) / spread;
                if c_i.abs() < S::of(1e-13) {
                    forms[i].clone()
                } else {
                    Form::LinComb {
                        constant: S::zero(),
                        terms: vec![(S::one(), forms[i].clone()), (-c_i, phi.clone())],
                    }
                }
            })
            .collect();
    }

    // Common target: increasing, strictly concave, tangent to the slowest
    // profile at t1, with curvature dominating every f-bar'' there (phi''
    // vanishes at t1, so the f_i'' values decide).
    let v1 = jets1[slow].f;
    let s1 = jets1[slow].df;
    if !(s1 > S::zero()) {
        return Err(Error::Construction("slowest profile lost its positive slope at t1".into()));
    }
    let mut worst_ddf = S::infinity();
    for bar in &bars {
        worst_ddf = worst_ddf.min(bar.eval(t1).ddf);
    }
    // f''(t1) = -drop * rate^2 must undercut worst_ddf; rate = s1/drop keeps
    // f' = s1 at t1.
    let needed = if worst_ddf < S::zero() {
        (-worst_ddf) / s1 * S::of(1.2) + S::of(0.05)
    } else {
        S::of(0.05) / (b - t1)
    };
    let rate = needed.max(S::of(0.2) / (b - t1));
    let drop = s1 / rate;
    let target = Form::ExpDecay { plateau: v1 + drop, drop, rate, center: t1 };

    let half_width = (opts.blend_fraction * (t1 - t0))
        .min((b - t1) * S::of(0.8))
        .min((t1 - t_c) * S::of(0.9))
        .max(S::of(1e-3) * (b - a));
    let profiles: Vec<WarpProfile<S>> = bars
        .iter()
        .zip(&forms)
        .map(|(bar, orig)| {
            let blended = Form::Blend {
                from: t1 - half_width,
                to: t1 + half_width,
                left: Box::new(bar.clone()),
                right: Box::new(target.clone()),
            };
            if degenerate {
                WarpProfile::single(a, b, blended)
            } else {
                WarpProfile::from_pieces(vec![
                    Piece { lo: a, hi: t_c, form: orig.clone() },
                    Piece { lo: t_c, hi: b, form: blended },
                ])
            }
        })
        .collect::<Result<_>>()?;

    let out = Cohom1Metric::new(metric.decomposition().clone(), (a, b), profiles)?;
    let scan = out.abc_positivity_scan(&opts.scan_plan)?;
    if !scan.passes() {
        return Err(Error::Construction(format!(
            "equalized metric failed the positivity scan: minA={:e} minC={:e} minDisc={:e} \
             (worst witness {:?}); retry with a smaller blend width",
            scan.min_a.to_f64_lossy(),
            scan.min_c.to_f64_lossy(),
            scan.min_disc.to_f64_lossy(),
            scan.worst
        )));
    }
    Ok(EqualizeOutcome { metric: out, scan, slope_order: order, t1 })
}

/// Glue-and-bound report for a doubled disc.
#[derive(Clone, Debug)]
pub struct GlueReport {
    pub boundary_mismatch: f64,
    pub min_sec: f64,
    pub min_ricci_bound: f64,
    /// Literal overestimate 2 (R_left + R_right) + pi.
    pub diam_full: f64,
    /// Scaling-law diameter using the O(delta^{-1/6}) radii R0.
    pub diam_est: f64,
    /// Certified sectional lower bound -max (f'/f)^2 over the cap region.
    pub sec_lower_bound: f64,
    /// sec_lower_bound * diam_est^2, the almost-nonnegativity product.
    pub product: f64,
    pub report: CurvatureReport,
}

/// Verify boundary matching of two built discs over a scenario, assemble the
/// doubled interval metric, and scan curvature and Ricci bounds.
pub fn glue_check<S: Real>(
    left: &BuiltDiscProfile<S>,
    right: &BuiltDiscProfile<S>,
    scenario: &Scenario<S>,
    plan: &SamplingPlan<S>,
) -> Result<GlueReport> {
    let fl = left.profile.eval(left.r - S::of(1e-9))?;
    let fr = right.profile.eval(right.r - S::of(1e-9))?;
    // Boundary slice metrics are f^2 Q|m1 + Q|m2; both must be Q exactly.
    let mismatch = (fl.f * fl.f - fr.f * fr.f).abs().max(fl.df.abs()).max(fr.df.abs());
    if mismatch > S::of(1e-12) {
        return Err(Error::Precondition(format!(
            "boundary slice metrics differ by {:e}",
            mismatch.to_f64_lossy()
        )));
    }

    // Doubled profile on [1, R_left + R_right - 1]: left as is, right mirrored.
    let seam = left.r;
    let total = left.r + right.r - S::one();
    let mut pieces: Vec<Piece<S>> = left.profile.pieces().to_vec();
    // Merge the plateau across the seam to keep f'' trivially continuous.
    let about = S::of(0.5) * (left.r + right.r);
    let mirrored: Vec<Piece<S>> = right
        .profile
        .pieces()
        .iter()
        .rev()
        .map(|p| Piece {
            lo: left.r + right.r - p.hi,
            hi: left.r + right.r - p.lo,
            form: Form::Reflected { about, inner: Box::new(p.form.clone()) },
        })
        .collect();
    let _ = seam;
    pieces.extend(mirrored);
    let doubled = WarpProfile::from_pieces(pieces)?;
    doubled.check_joins()?;
    let metric =
        Cohom1Metric::two_block(scenario.decomposition.clone(), (S::one(), total), doubled)?;

    // Certified sectional lower bound from the cap region (the cone region is
    // a nonnegatively curved submersion image): -max (f'/f)^2 on [R0, R] and
    // its mirror.
    let mut max_ratio_sq = S::zero();
    for i in 0..512 {
        let u = S::from_usize(i).unwrap() / S::of(511.0);
        let t = left.r0 + (left.r - S::of(1e-6) - left.r0) * u;
        let j = metric.profiles()[0].eval(t)?;
        max_ratio_sq = max_ratio_sq.max((j.df / j.f).powi(2));
    }
    let sec_lower_bound = -max_ratio_sq;

    // Sampled minimum sectional curvature over the doubled interval.
    let scan = crate::cheeger::min_sec_scan(&metric, plan)?;

    // Ricci proxy: frame sum of two-block curvature values over horizontal
    // directions, minimized over samples.
    let ctx = scenario
        .quotient
        .as_ref()
        .ok_or_else(|| Error::Precondition("scenario has no quotient context".into()))?;
    let min_ricci = min_ricci_proxy(&metric, ctx, plan)?;

    let pi = S::of(std::f64::consts::PI);
    let diam_full = S::of(2.0) * (left.r + right.r) + pi;
    let diam_est = S::of(2.0) * (left.r0 + right.r0) + pi;
    let product = sec_lower_bound * diam_est * diam_est;

    let mut report = scan;
    report.example = scenario.name.to_string();
    report.min_ricci_bound = Some(min_ricci.to_f64_lossy());
    report.diam_est = Some(diam_est.to_f64_lossy());
    report.sec_lower_bound = Some(sec_lower_bound.to_f64_lossy());
    report.product = Some(product.to_f64_lossy());

    Ok(GlueReport {
        boundary_mismatch: mismatch.to_f64_lossy(),
        min_sec: report.min_sec,
        min_ricci_bound: min_ricci.to_f64_lossy(),
        diam_full: diam_full.to_f64_lossy(),
        diam_est: diam_est.to_f64_lossy(),
        sec_lower_bound: sec_lower_bound.to_f64_lossy(),
        product: product.to_f64_lossy(),
        report,
    })
}

/// Minimum over sampled horizontal directions of the Ricci frame sum
/// R(dt, x; x, dt) + sum_i R(c dt + x, y^i; y^i, c dt + x).
pub fn min_ricci_proxy<S: Real>(
    metric: &Cohom1Metric<S>,
    ctx: &QuotientContext<S>,
    plan: &SamplingPlan<S>,
) -> Result<S> {
    let dec = metric.decomposition();
    let dim = dec.dim();
    let mut rng = Rng::new(plan.seed ^ 0x5eed_51de);
    let mut min_val = S::infinity();
    let points = if ctx.sample_points().len() > 4 {
        &ctx.sample_points()[..4]
    } else {
        ctx.sample_points()
    };
    for point in points {
        for &t in &metric.sample_grid(plan.t_points.min(24)) {
            let hf = quotient::horizontal_frame(metric, ctx, point, t)?;
            if hf.frame.is_empty() {
                continue;
            }
            for _ in 0..plan.pairs_per_t.min(16) {
                let mut x = vec![S::zero(); dim];
                for w in &hf.frame {
                    let coef: S = rng.symmetric();
                    linalg::axpy(coef, w, &mut x);
                }
                let n2 = metric.slice_inner(t, &x, &x)?;
                if n2 < S::of(1e-12) {
                    continue;
                }
                let x = linalg::scale_vec(S::one() / n2.sqrt(), &x);
                for &c in &[S::zero(), S::one()] {
                    let zero = vec![S::zero(); dim];
                    let mut acc = metric.curvature_two_block(t, S::one(), &zero, &x)?;
                    for y in &hf.frame {
                        acc = acc + metric.curvature_two_block(t, c, &x, y)?;
                    }
                    min_val = min_val.min(acc);
                }
            }
        }
    }
    Ok(min_val)
}

/// Ordinary least squares on (x, y): slope, intercept, max |residual|.
pub fn ols_fit(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_res = points
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).abs())
        .fold(0.0, f64::max);
    (slope, intercept, max_res)
}

/// One row of a delta-scaling study.
#[derive(Clone, Debug)]
pub struct ScalingRow {
    pub delta: f64,
    pub r0: f64,
    pub r: f64,
    pub min_sec: f64,
    pub diam_est: f64,
    pub product: f64,
}

/// Sweep build + glue over a delta ladder on a scenario, collecting the
/// radius and product scaling data.
pub fn scaling_sweep<S: Real>(
    scenario: &Scenario<S>,
    deltas: &[S],
    c0: S,
    c_exp: usize,
    plan: &SamplingPlan<S>,
) -> Result<Vec<(ScalingRow, GlueReport)>> {
    let mut rows = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let disc = build_disc_profile(delta, c0, c_exp)?;
        let glue = glue_check(&disc, &disc, scenario, plan)?;
        rows.push((
            ScalingRow {
                delta: delta.to_f64_lossy(),
                r0: disc.r0.to_f64_lossy(),
                r: disc.r.to_f64_lossy(),
                min_sec: glue.min_sec,
                diam_est: glue.diam_est,
                product: glue.product,
            },
            glue,
        ));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::profile::interior_grid;

    #[test]
    fn inequality_constant_passes() {
        let f = WarpProfile::constant(0.0f64, 1.0, 0.8).unwrap();
        let g = interior_grid(0.0, 1.0, 64);
        let r = check_inequality(&f, 9, &g).unwrap();
        assert!(r.holds);
        assert!(r.max_quadratic.abs() < 1e-15);
        assert!(r.max_power_second.abs() < 1e-15);
    }

    #[test]
    fn inequality_equality_case_power_profile() {
        // f = t^{1/(C+1)}: (f^{C+1})'' = 0 exactly.
        let c_exp = 9;
        let f = WarpProfile::single(
            0.5f64,
            2.0,
            Form::PowerOfPoly { coeffs: vec![0.0, 1.0], center: 0.0, alpha: 0.1 },
        )
        .unwrap();
        let g = interior_grid(0.5, 2.0, 128);
        let r = check_inequality(&f, c_exp, &g).unwrap();
        assert!(r.holds, "max quadratic {:e}", r.max_quadratic);
        assert!(r.max_power_second.abs() < 1e-12);
    }

    #[test]
    fn inequality_linear_fails_with_reported_nine() {
        // f = t, C = 9: C (f')^2 + f f'' = 9 everywhere.
        let f = WarpProfile::single(
            1.0f64,
            2.0,
            Form::Poly { coeffs: vec![0.0, 1.0], center: 0.0 },
        )
        .unwrap();
        let g = interior_grid(1.0, 2.0, 32);
        let r = check_inequality(&f, 9, &g).unwrap();
        assert!(!r.holds);
        assert!((r.max_quadratic - 9.0).abs() < 1e-12);
        assert!(r.max_equivalence_residual < 1e-12);
    }

    #[test]
    fn solve_r0_quarter_delta_unit_c0() {
        // c0 = 1, delta = 1/4: t (1 + t^2) = 2 at t = 1.
        let r0 = solve_r0(0.25f64, 1.0).unwrap();
        assert!((r0 - 1.0).abs() < 1e-9);
        // Verify f0'/f0 at the root by direct differentiation.
        let j = Form::CheegerCone { c0: 1.0f64 }.eval(r0);
        assert!(((j.df / j.f).powi(2) - 0.25).abs() < 1e-9);
    }

    #[test]
    fn solve_r0_matches_newton_oracle() {
        // c0 = 1, delta = 1e-6: root of t + t^3 = 1000.
        let r0 = solve_r0(1e-6, 1.0).unwrap();
        // Independent Newton iteration.
        let mut t: f64 = 10.0;
        for _ in 0..60 {
            let ft = t + t * t * t - 1000.0;
            t -= ft / (1.0 + 3.0 * t * t);
        }
        assert!((r0 - t).abs() < 1e-9 * t);
        assert!((r0 - 9.9667).abs() < 1e-3);
    }

    #[test]
    fn solve_r0_asymptotic_exponent() {
        // R0(delta) * delta^{1/6} -> c0^{-2/3} within 1% at delta = 1e-10.
        for &c0 in &[0.5f64, 1.0, 2.0] {
            let delta = 1e-10f64;
            let r0 = solve_r0(delta, c0).unwrap();
            let limit = c0.powf(-2.0 / 3.0);
            let val = r0 * delta.powf(1.0 / 6.0);
            assert!((val - limit).abs() < 0.01 * limit, "c0 {c0}: {val} vs {limit}");
        }
    }

    #[test]
    fn solve_r0_monotonicity() {
        let deltas = [1e-3, 1e-4, 1e-5, 1e-6];
        let mut prev = 0.0;
        for &d in &deltas {
            let r = solve_r0(d, 1.0).unwrap();
            assert!(r > prev);
            prev = r;
        }
        let c0s = [0.5, 1.0, 2.0];
        let mut prev = f64::INFINITY;
        for &c in &c0s {
            let r = solve_r0(1e-6, c).unwrap();
            assert!(r < prev);
            prev = r;
        }
    }

    #[test]
    fn solve_r0_rejects_large_delta() {
        assert!(solve_r0(0.5, 1.0).is_err());
    }

    #[test]
    fn build_disc_profile_matches_cone_to_first_order() {
        let d = build_disc_profile(1e-4f64, 1.0, 9).unwrap();
        let cone = Form::CheegerCone { c0: 1.0 };
        let jb = d.profile.eval(d.r0 - 1e-9).unwrap();
        let jc = cone.eval(d.r0 - 1e-9);
        assert!((jb.f - jc.f).abs() < 1e-14);
        assert!((jb.df - jc.df).abs() < 1e-14);
    }

    #[test]
    fn build_disc_profile_unit_plateau() {
        let d = build_disc_profile(1e-6, 1.0, 9).unwrap();
        assert!(d.r - d.r0 > 1.0);
        assert!(d.plateau_start < d.r);
        let probe = 0.5 * (d.plateau_start + d.r);
        let j = d.profile.eval(probe).unwrap();
        assert_eq!(j.f, 1.0);
        assert_eq!(j.df, 0.0);
    }

    #[test]
    fn build_disc_profile_invariant_grid() {
        // Feasibility of the concave cap is (f0^{C+1})''(R0) < 0, i.e.
        // 3 c0^2 R0^2 > C. Feasible grid points must build and validate;
        // infeasible ones must be rejected by the documented precondition.
        for &delta in &[1e-2, 1e-4, 1e-6, 1e-8] {
            for &c0 in &[0.5, 1.0, 2.0] {
                let r0 = solve_r0(delta, c0).unwrap();
                for &c_exp in &[9usize, 12, 15] {
                    let feasible = 3.0 * c0 * c0 * r0 * r0 > c_exp as f64 + 1e-9;
                    match build_disc_profile(delta, c0, c_exp) {
                        Ok(d) => {
                            assert!(feasible, "{delta} {c0} {c_exp}: built despite infeasibility");
                            d.validate().unwrap_or_else(|e| panic!("{delta} {c0} {c_exp}: {e}"));
                        }
                        Err(Error::Precondition(_)) if !feasible => {}
                        Err(e) => panic!("{delta} {c0} {c_exp}: unexpected error {e}"),
                    }
                }
            }
        }
    }

    #[test]
    fn lemma32_identity_tuple_passes() {
        let f = vec![
            WarpProfile::single(0.0, 1.0, catalog::sine_offset(1.0, 0.05, 1.0)).unwrap(),
            WarpProfile::single(0.0, 1.0, catalog::sine_offset(1.0, 0.08, 1.3)).unwrap(),
        ];
        let grid = interior_grid(0.0, 1.0, 64);
        let r = deformation_conditions(&f, &f, 1.0, 0.2, &grid, RhoVariant::MixedSlopes).unwrap();
        assert!(r.passes(), "{r:?}");
    }

    #[test]
    fn lemma32_constant_shift_tightens_value_margin() {
        let eps = 0.1;
        let f = vec![WarpProfile::single(0.0, 1.0, catalog::sine_offset(1.0, 0.05, 1.0)).unwrap()];
        let shifted = vec![WarpProfile::single(
            0.0,
            1.0,
            Form::Offset {
                offset: eps / 2.0,
                inner: Box::new(catalog::sine_offset(1.0, 0.05, 1.0)),
            },
        )
        .unwrap()];
        let grid = interior_grid(0.0, 1.0, 64);
        let base = deformation_conditions(&f, &f, 1.0, eps, &grid, RhoVariant::MixedSlopes).unwrap();
        let moved = deformation_conditions(&f, &shifted, 1.0, eps, &grid, RhoVariant::MixedSlopes).unwrap();
        assert!(moved.margin_values < base.margin_values);
    }

    #[test]
    fn ols_fit_recovers_exact_line() {
        let pts: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 3.0 - 0.5 * i as f64)).collect();
        let (slope, intercept, res) = ols_fit(&pts);
        assert!((slope + 0.5).abs() < 1e-12);
        assert!((intercept - 3.0).abs() < 1e-12);
        assert!(res < 1e-12);
    }
}
