//! Sweep drivers shared by the CLI and the acceptance suite: formula
//! cross-validation against the independent oracles over seeded samples.

use crate::cohom1::{random_m_unit, Cohom1Metric};
use crate::error::Result;
use crate::exec;
use crate::oracle;
use crate::rng::Rng;
use crate::scalar::Real;

/// Worst relative discrepancies of a cross-validation sweep.
#[derive(Clone, Debug, Default)]
pub struct CrossCheckReport {
    pub n_samples: usize,
    /// max |general - gauss_codazzi| / (1 + |value|)
    pub max_rel_oracle: f64,
    /// max |two_block - general| / (1 + |value|); zero when not two-block
    pub max_rel_two_block: f64,
    /// max |(A + Bc + Cc^2) - general| / (1 + |value|) at fresh c values
    pub max_rel_abc: f64,
    /// max |R(u,v;v,u) - R(v,u;u,v)| / (1 + |value|)
    pub max_rel_symmetry: f64,
    /// Argmax witness of the oracle discrepancy.
    pub worst: Option<crate::report::Witness>,
}

/// Compare the direct formula against the hypersurface oracle, the two-block
/// specialization (when applicable), the quadratic-in-c round trip and the
/// pair symmetry, over `n_samples` seeded (t, c, x, y) draws.
pub fn formula_cross_check<S: Real>(
    metric: &Cohom1Metric<S>,
    n_samples: usize,
    seed: u64,
) -> Result<CrossCheckReport> {
    let dim = metric.decomposition().dim();
    let m_idx = metric.decomposition().m_indices();
    let two_block = metric.is_two_block_normalized();
    let t_points = (n_samples / 64).clamp(8, 64);
    let pairs = n_samples.div_ceil(t_points);
    let mut rng = Rng::new(seed);
    let tasks: Vec<(S, Rng)> =
        metric.sample_grid(t_points).into_iter().map(|t| (t, rng.fork())).collect();
    let locals = exec::par_map(tasks, |(t, mut rng)| -> Result<CrossCheckReport> {
        let ev = metric.slice_eval(t)?;
        let mut local = CrossCheckReport::default();
        for _ in 0..pairs {
            let c: S = rng.range(S::of(-2.0), S::of(2.0));
            let x = random_m_unit::<S>(&mut rng, dim, &m_idx);
            let y = random_m_unit::<S>(&mut rng, dim, &m_idx);
            let general = ev.curvature_general(c, &x, &y)?;
            let scale = 1.0 + general.to_f64_lossy().abs();

            let gc = oracle::gauss_codazzi_curvature(metric, t, c, &x, &y)?;
            let rel = (general - gc).to_f64_lossy().abs() / scale;
            if rel > local.max_rel_oracle {
                local.max_rel_oracle = rel;
                local.worst = Some(crate::report::Witness {
                    t: t.to_f64_lossy(),
                    c: c.to_f64_lossy(),
                    x: x.iter().map(|v| v.to_f64_lossy()).collect(),
                    y: y.iter().map(|v| v.to_f64_lossy()).collect(),
                });
            }

            if two_block {
                let tb = metric.curvature_two_block(t, c, &x, &y)?;
                local.max_rel_two_block = local
                    .max_rel_two_block
                    .max((tb - general).to_f64_lossy().abs() / scale);
            }

            let (a, b, cc) = ev.abc(&x, &y)?;
            for &cv in &[S::of(0.37), S::of(-1.83), S::of(2.41), S::of(5.0), S::of(-5.0)] {
                let direct = ev.curvature_general(cv, &x, &y)?;
                let poly = a + b * cv + cc * cv * cv;
                local.max_rel_abc = local
                    .max_rel_abc
                    .max((direct - poly).to_f64_lossy().abs() / (1.0 + direct.to_f64_lossy().abs()));
            }

            // Pair symmetry of the numerator at c = 0 (pure slice planes).
            let r_xy = ev.curvature_general(S::zero(), &x, &y)?;
            let r_yx = ev.curvature_general(S::zero(), &y, &x)?;
            local.max_rel_symmetry = local
                .max_rel_symmetry
                .max((r_xy - r_yx).to_f64_lossy().abs() / scale);

            local.n_samples += 1;
        }
        Ok(local)
    });
    let mut out = CrossCheckReport::default();
    for local in locals {
        let local = local?;
        out.n_samples += local.n_samples;
        if local.max_rel_oracle > out.max_rel_oracle {
            out.max_rel_oracle = local.max_rel_oracle;
            out.worst = local.worst;
        }
        out.max_rel_two_block = out.max_rel_two_block.max(local.max_rel_two_block);
        out.max_rel_abc = out.max_rel_abc.max(local.max_rel_abc);
        out.max_rel_symmetry = out.max_rel_symmetry.max(local.max_rel_symmetry);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn cross_check_su2_berger_tight() {
        let s = catalog::load_scenario::<f64>("su2-berger").unwrap();
        let m = s.default_metric().unwrap();
        let r = formula_cross_check(&m, 500, 42).unwrap();
        assert!(r.n_samples >= 500);
        assert!(r.max_rel_oracle < 1e-10, "oracle {:e}", r.max_rel_oracle);
        assert!(r.max_rel_abc < 1e-12, "abc {:e}", r.max_rel_abc);
        assert!(r.max_rel_symmetry < 1e-12, "sym {:e}", r.max_rel_symmetry);
    }

    #[test]
    fn cross_check_deterministic_across_thread_counts() {
        // The reduction is in task order; COHOMLAB_THREADS must not affect
        // the maxima. Emulate by running twice (the pool size is ambient) and
        // comparing bitwise.
        let s = catalog::load_scenario::<f64>("so4-stiefel").unwrap();
        let m = s.two_block_metric().unwrap();
        let a = formula_cross_check(&m, 300, 42).unwrap();
        let b = formula_cross_check(&m, 300, 42).unwrap();
        assert_eq!(a.max_rel_oracle.to_bits(), b.max_rel_oracle.to_bits());
        assert_eq!(a.max_rel_two_block.to_bits(), b.max_rel_two_block.to_bits());
    }
}
