//! End-to-end construction pipelines: ball profiles through equalization,
//! deformation-condition reports on the constructed tuples, disc building,
//! gluing and the quotient Ricci machinery.

use cohomlab::builder::{
    build_disc_profile, check_inequality, equalize_profiles, glue_check, deformation_conditions,
    EqualizeOptions, RhoVariant,
};
use cohomlab::cheeger::{ball_profile, sphere_chain_constants, SphereChainData};
use cohomlab::cohom1::Cohom1Metric;
use cohomlab::linalg::{axpy, scale_vec};
use cohomlab::profile::{interior_grid, Form, WarpProfile};
use cohomlab::quotient::{horizontal_frame, positive_point_search, quotient_ricci_bound};
use cohomlab::rng::Rng;
use cohomlab::{catalog, SamplingPlan};

fn ball_pipeline(name: &str, rho: Vec<f64>, mu: f64) -> (Cohom1Metric<f64>, f64) {
    let s = catalog::load_scenario::<f64>(name).unwrap();
    let lambda =
        WarpProfile::single(0.3, 3.0, Form::Sine { amplitude: 2.0, frequency: 0.5 }).unwrap();
    let data = SphereChainData::new(s.decomposition.clone(), rho, mu).unwrap();
    let t0 = std::f64::consts::FRAC_PI_3;
    (ball_profile(&data, &lambda, t0).unwrap(), t0)
}

#[test]
fn equalization_succeeds_on_distinct_hopf_profiles() {
    // u(2) Hopf chain with the submersion constants (1, 1/2): genuinely
    // distinct profiles, equalized and still positively curved.
    let (metric, t0) = ball_pipeline("u2-hopf", vec![1.0, 0.5], 0.25);
    let out = equalize_profiles(&metric, t0, &EqualizeOptions::default()).unwrap();
    assert!(out.scan.passes());
    // Near the left end the profiles are untouched; near the right end they
    // agree with a single increasing concave warp.
    let (a, b) = out.metric.interval();
    let left_t = a + 0.01;
    for (orig, new) in metric.profiles().iter().zip(out.metric.profiles()) {
        assert!((orig.eval(left_t).unwrap().f - new.eval(left_t).unwrap().f).abs() < 1e-13);
    }
    let right_t = b - 0.05;
    let jets: Vec<_> =
        out.metric.profiles().iter().map(|p| p.eval(right_t).unwrap()).collect();
    for j in &jets {
        assert!((j.f - jets[0].f).abs() < 1e-12, "profiles not equalized at the right end");
        assert!(j.df > 0.0 && j.ddf < 0.0, "final warp must be increasing and concave");
    }
}

#[test]
fn equalization_handles_berger_type_su2_chain() {
    let (metric, t0) = ball_pipeline("su2-chain", vec![0.3, 0.25], 0.125);
    let out = equalize_profiles(&metric, t0, &EqualizeOptions::default()).unwrap();
    assert!(out.scan.passes());
}

#[test]
fn equalized_tuple_passes_deformation_conditions() {
    // The constructed deformation stays within the eps-tube it was built
    // for: check the four conditions over the untouched-through-corrected
    // region (left of the final blend onto the common target, where the
    // tuple is c0-close by construction).
    let (metric, t0) = ball_pipeline("u2-hopf", vec![1.0, 0.5], 0.25);
    let opts = EqualizeOptions::default();
    let out = equalize_profiles(&metric, t0, &opts).unwrap();
    let grid = interior_grid(t0 - 0.05, out.t1, 64);
    let c0 = metric.jets_at(t0).unwrap()[0].f;
    let eps = 0.3;
    let report = deformation_conditions(
        metric.profiles(),
        out.metric.profiles(),
        c0,
        eps,
        &grid,
        RhoVariant::MixedSlopes,
    )
    .unwrap();
    assert!(report.passes(), "{report:?}");
    // The corrected-rho variant is exposed as a switch and also computable.
    let corrected = deformation_conditions(
        metric.profiles(),
        out.metric.profiles(),
        c0,
        eps,
        &grid,
        RhoVariant::DeformedSlopes,
    )
    .unwrap();
    assert!(corrected.margin_values > 0.0);
}

#[test]
fn built_disc_satisfies_the_inequality_on_the_cap() {
    let d = build_disc_profile(1e-6, 1.0, 9).unwrap();
    let grid = interior_grid(d.r0, d.r, 256);
    let r = check_inequality(&d.profile, 9, &grid).unwrap();
    assert!(r.holds, "max quadratic {:e}", r.max_quadratic);
    assert!(r.max_power_second <= 1e-12);
    assert!(r.max_equivalence_residual <= 1e-12);
}

#[test]
fn glue_boundary_mismatch_is_rejected() {
    // A disc whose plateau sits at 0.99 instead of 1 has a different
    // boundary slice metric and cannot be glued to a standard disc.
    let s = catalog::load_scenario::<f64>("so4-stiefel").unwrap();
    let good = build_disc_profile(1e-4, 1.0, 9).unwrap();
    let mut bad = good.clone();
    let mut pieces: Vec<_> = bad.profile.pieces().to_vec();
    let last = pieces.last_mut().unwrap();
    last.form = Form::Constant(0.99);
    bad.profile = WarpProfile::from_pieces(pieces).unwrap();
    let plan = SamplingPlan { t_points: 8, pairs_per_t: 8, ..Default::default() };
    assert!(glue_check(&good, &bad, &s, &plan).is_err());
}

#[test]
fn glue_of_disc_with_itself_matches_exactly() {
    let s = catalog::load_scenario::<f64>("su2-chain").unwrap();
    let disc = build_disc_profile(1e-4, 0.5, 9).unwrap();
    let plan = SamplingPlan { t_points: 12, pairs_per_t: 24, ..Default::default() };
    let glue = glue_check(&disc, &disc, &s, &plan).unwrap();
    assert_eq!(glue.boundary_mismatch, 0.0);
    assert!(glue.min_sec >= -1e-4 * (1.0 + 1e-6), "min sec {}", glue.min_sec);
    assert!(glue.min_ricci_bound >= -1e-10, "min ricci {}", glue.min_ricci_bound);
}

#[test]
fn quotient_ricci_bound_requires_the_inequality() {
    // f = 0.55 + 0.25 sin t violates -f f'' >= C (f')^2 on parts of the
    // interval; the bound must refuse there.
    let s = catalog::load_scenario::<f64>("so4-stiefel").unwrap();
    let m = s.two_block_metric().unwrap();
    let ctx = s.quotient.as_ref().unwrap();
    let point = &ctx.sample_points()[0];
    let dim = s.algebra.dim();
    let mut x = vec![0.0; dim];
    x[1] = 1.0;
    // t = pi/2: f' = 0 but f'' < 0 fails the C-weighted inequality there?
    // Scan the grid to find one violating and one satisfying point.
    let mut saw_err = false;
    let mut saw_ok = false;
    for &t in &interior_grid(0.6, 2.4, 24) {
        match quotient_ricci_bound(&m, ctx, point, t, 0.0, &x) {
            Ok(_) => saw_ok = true,
            Err(_) => saw_err = true,
        }
    }
    assert!(saw_err, "expected at least one inequality refusal");
    assert!(saw_ok, "expected at least one valid evaluation");
}

#[test]
fn son_circle_ricci_bound_nonnegative_under_inequality() {
    let s = catalog::load_scenario::<f64>("son-circle").unwrap();
    let disc = build_disc_profile(1e-4, 1.0, 9).unwrap();
    let m = Cohom1Metric::two_block(s.decomposition.clone(), (1.0, disc.r), disc.profile.clone())
        .unwrap();
    let ctx = s.quotient.as_ref().unwrap();
    let mut rng = Rng::new(42);
    let mut min_bound = f64::INFINITY;
    for point in ctx.sample_points().iter().take(6) {
        for &t in &interior_grid(disc.r0 + 0.05, disc.r, 10) {
            let hf = horizontal_frame(&m, ctx, point, t).unwrap();
            // dim V = dim l = 1 at every free sample.
            assert_eq!(hf.hq_basis.len(), s.decomposition.dim_m() - 1);
            for _ in 0..25 {
                let mut x = vec![0.0; s.algebra.dim()];
                for w in &hf.frame {
                    let c: f64 = rng.symmetric();
                    axpy(c, w, &mut x);
                }
                let n2 = m.slice_inner(t, &x, &x).unwrap();
                if n2 < 1e-12 {
                    continue;
                }
                let x = scale_vec(1.0 / n2.sqrt(), &x);
                let b = quotient_ricci_bound(&m, ctx, point, t, 0.0, &x).unwrap();
                min_bound = min_bound.min(b);
            }
        }
    }
    assert!(min_bound >= -1e-10, "min bound {min_bound}");
}

#[test]
fn ricci_bound_variants_compare() {
    // The printed-factor variant replaces (f f')^2 by (f' f'')^2 in the
    // per-direction term; both stay computable, and on a built profile both
    // exceed -1e-10 since the radial term dominates.
    use cohomlab::quotient::{quotient_ricci_bound_with, RicciBoundVariant};
    let s = catalog::load_scenario::<f64>("so4-stiefel").unwrap();
    let disc = build_disc_profile(1e-4, 1.0, 9).unwrap();
    let m = Cohom1Metric::two_block(s.decomposition.clone(), (1.0, disc.r), disc.profile.clone())
        .unwrap();
    let ctx = s.quotient.as_ref().unwrap();
    let point = &ctx.sample_points()[1];
    let t = disc.r0 + 0.3;
    let hf = horizontal_frame(&m, ctx, point, t).unwrap();
    let mut x = hf.frame[0].clone();
    let n2 = m.slice_inner(t, &x, &x).unwrap();
    x = scale_vec(1.0 / n2.sqrt(), &x);
    let corollary = quotient_ricci_bound_with(
        &m, ctx, point, t, 0.0, &x, RicciBoundVariant::FfPrime,
    )
    .unwrap();
    let printed =
        quotient_ricci_bound_with(&m, ctx, point, t, 0.0, &x, RicciBoundVariant::FPrimeFSecond)
            .unwrap();
    assert!(corollary >= -1e-10);
    assert!(printed >= -1e-10);
    assert!(corollary.is_finite() && printed.is_finite());
}

#[test]
fn witness_search_negative_cases() {
    // Constant profile: f' = 0 everywhere, no witness.
    let s = catalog::load_scenario::<f64>("so4-stiefel").unwrap();
    let f = WarpProfile::constant(0.0, 2.0, 0.8).unwrap();
    let m = Cohom1Metric::two_block(s.decomposition.clone(), (0.0, 2.0), f).unwrap();
    let ctx = s.quotient.as_ref().unwrap();
    let grid = interior_grid(0.1, 1.9, 8);
    assert!(positive_point_search(&m, ctx, &grid, 8, 42).unwrap().is_none());
}

#[test]
fn sphere_constants_power_the_ball_profile() {
    // The c_i produced from (rho, mu) form a nondecreasing chain whose
    // weights feed the nonnegatively curved group metric of the pipeline.
    let s = catalog::load_scenario::<f64>("u2-hopf").unwrap();
    let data = SphereChainData::new(s.decomposition.clone(), vec![1.0, 0.5], 0.25).unwrap();
    let chain = sphere_chain_constants(&data).unwrap();
    assert!(chain.weights_nondecreasing());
    let report = cohomlab::cheeger::chain_metric_curvature_scan(&chain, 2000, 42).unwrap();
    assert!(report.min_sec >= -1e-10, "chain metric min sec {}", report.min_sec);
}

#[test]
fn equality_case_strictness_in_so5() {
    // Violating the bracket condition with x = x2 gives strictly positive
    // curvature when f' != 0.
    let s = catalog::load_scenario::<f64>("so5-two-block").unwrap();
    let m = s.two_block_metric().unwrap();
    let mut x2 = vec![0.0; 10];
    x2[2] = 1.0; // E03
    let mut y = vec![0.0; 10];
    y[3] = 1.0; // E04; [E03, E04] = E34 spans m1
    let r = m.curvature_two_block(1.0, 0.0, &x2, &y).unwrap();
    assert!(r > 1e-3, "curvature should be strictly positive, got {r}");
    assert!(m.equality_case_check(1.0, &x2, &y, 1e-10).unwrap());
}
