//! Pre-validated example data: exact Lie algebras, block decompositions,
//! quotient contexts and named scenario bundles for the CLI and test suites.

use std::sync::Arc;

use crate::cohom1::Cohom1Metric;
use crate::error::{Error, Result};
use crate::lie::{BlockDecomposition, LieAlgebra};
use crate::profile::{Form, WarpProfile};
use crate::quotient::QuotientContext;
use crate::scalar::Real;

/// su(2) with the epsilon structure constants: [e1, e2] = e3 cyclically.
pub fn su2<S: Real>() -> LieAlgebra<S> {
    let mut c = vec![S::zero(); 27];
    let mut set = |i: usize, j: usize, k: usize, v: f64| {
        c[(i * 3 + j) * 3 + k] = S::of(v);
    };
    // Totally antisymmetric epsilon.
    set(0, 1, 2, 1.0);
    set(1, 0, 2, -1.0);
    set(1, 2, 0, 1.0);
    set(2, 1, 0, -1.0);
    set(2, 0, 1, 1.0);
    set(0, 2, 1, -1.0);
    LieAlgebra::new("su2", 3, c).expect("su2 structure constants")
}

/// so(n) in the orthonormal basis E_ab = e_a e_b^T - e_b e_a^T (a < b,
/// lexicographic) for Q(X, Y) = -tr(XY)/2. Structure constants are 0 or +-1.
pub fn so_n<S: Real>(n: usize) -> LieAlgebra<S> {
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|a| ((a + 1)..n).map(move |b| (a, b))).collect();
    let dim = pairs.len();
    let index = |a: usize, b: usize| -> Option<(usize, f64)> {
        use std::cmp::Ordering;
        match a.cmp(&b) {
            Ordering::Less => Some((pairs.iter().position(|&p| p == (a, b)).unwrap(), 1.0)),
            Ordering::Greater => Some((pairs.iter().position(|&p| p == (b, a)).unwrap(), -1.0)),
            Ordering::Equal => None,
        }
    };
    let mut c = vec![S::zero(); dim * dim * dim];
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for (j, &(p, q)) in pairs.iter().enumerate() {
            // [E_ab, E_pq] = d_bp E_aq - d_bq E_ap - d_ap E_bq + d_aq E_bp
            let mut acc: Vec<(usize, f64)> = Vec::new();
            if b == p {
                if let Some((k, s)) = index(a, q) {
                    acc.push((k, s));
                }
            }
            if b == q {
                if let Some((k, s)) = index(a, p) {
                    acc.push((k, -s));
                }
            }
            if a == p {
                if let Some((k, s)) = index(b, q) {
                    acc.push((k, -s));
                }
            }
            if a == q {
                if let Some((k, s)) = index(b, p) {
                    acc.push((k, s));
                }
            }
            for (k, s) in acc {
                let cur = c[(i * dim + j) * dim + k];
                c[(i * dim + j) * dim + k] = cur + S::of(s);
            }
        }
    }
    LieAlgebra::new(format!("so{n}"), dim, c).expect("so(n) structure constants")
}

/// Abelian torus algebra of the given dimension.
pub fn torus<S: Real>(dim: usize) -> LieAlgebra<S> {
    LieAlgebra::new(format!("torus{dim}"), dim, vec![S::zero(); dim * dim * dim])
        .expect("abelian constants")
}

/// u(2) with Q = -tr in the orthonormal basis
/// a = diag(i, 0), b = diag(0, i), u/sqrt2, v/sqrt2 where u = [[0,1],[-1,0]],
/// v = [[0,i],[i,0]]. Center is span(a + b).
pub fn u2<S: Real>() -> LieAlgebra<S> {
    let mut c = vec![S::zero(); 64];
    let mut set = |i: usize, j: usize, k: usize, v: f64| {
        c[(i * 4 + j) * 4 + k] = S::of(v);
        c[(j * 4 + i) * 4 + k] = S::of(-v);
    };
    // [a, u^] = v^, [a, v^] = -u^, [b, u^] = -v^, [b, v^] = u^, [u^, v^] = a - b.
    set(0, 2, 3, 1.0);
    set(0, 3, 2, -1.0);
    set(1, 2, 3, -1.0);
    set(1, 3, 2, 1.0);
    set(2, 3, 0, 1.0);
    set(2, 3, 1, -1.0);
    LieAlgebra::new("u2", 4, c).expect("u2 structure constants")
}

/// so(2m) + R: the orthogonal algebra with a central circle appended,
/// modeling the O(2m) x S^1 symmetry algebra of the Brieskorn family.
pub fn so_n_plus_r<S: Real>(n: usize) -> LieAlgebra<S> {
    so_n::<S>(n).direct_sum(&torus(1), format!("so{n}+R"))
}

/// 1/sqrt(2) to more digits than any binary float resolves.
pub const INV_SQRT_2: &str = "0.707106781186547524400844362104849039284835937688474036588339869";

fn basis_vec<S: Real>(dim: usize, entries: &[(usize, S)]) -> Vec<S> {
    let mut v = vec![S::zero(); dim];
    for &(i, x) in entries {
        v[i] = x;
    }
    v
}

/// A named example bundle: algebra + block decomposition (+ optional quotient
/// context), with default profiles and sweep parameters.
#[derive(Clone)]
pub struct Scenario<S: Real> {
    pub name: &'static str,
    pub description: &'static str,
    pub algebra: Arc<LieAlgebra<S>>,
    pub decomposition: Arc<BlockDecomposition<S>>,
    pub quotient: Option<Arc<QuotientContext<S>>>,
    /// Slice-diameter proxy constants, one per m-block.
    pub slice_constants: Vec<S>,
    /// True when z(g) = 0.
    pub semisimple: bool,
    /// Orbit-codimension metadata for the disc-bundle interpretation, when
    /// one is modeled.
    pub codim_metadata: Option<&'static str>,
}

impl<S: Real> Scenario<S> {
    /// Default general diagonal metric on (0.5, 2.5): analytic, positive,
    /// distinct profiles per block.
    pub fn default_metric(&self) -> Result<Cohom1Metric<S>> {
        let (lo, hi) = (S::of(0.5), S::of(2.5));
        let k = self.decomposition.num_m_blocks();
        let profiles = (0..k)
            .map(|i| {
                let a = S::of(1.1 + 0.2 * i as f64);
                let b = S::of(0.25 / (1.0 + i as f64));
                WarpProfile::single(lo, hi, sine_offset(a, b, S::one()))
            })
            .collect::<Result<Vec<_>>>()?;
        Cohom1Metric::new(self.decomposition.clone(), (lo, hi), profiles)
    }

    /// Two-block normalized metric dt^2 + f^2 Q|m1 + Q|m2 with
    /// f(t) = 0.55 + 0.25 sin(t) in (0, 1].
    pub fn two_block_metric(&self) -> Result<Cohom1Metric<S>> {
        if self.decomposition.num_m_blocks() != 2 {
            return Err(Error::InvalidMetric(format!(
                "scenario {} is not two-block",
                self.name
            )));
        }
        let (lo, hi) = (S::of(0.5), S::of(2.5));
        let f = WarpProfile::single(lo, hi, sine_offset(S::of(0.55), S::of(0.25), S::one()))?;
        Cohom1Metric::two_block(self.decomposition.clone(), (lo, hi), f)
    }
}

/// a + b sin(w t) as a single analytic form.
pub fn sine_offset<S: Real>(a: S, b: S, w: S) -> Form<S> {
    Form::Offset {
        offset: a,
        inner: Box::new(Form::Sine { amplitude: b, frequency: w }),
    }
}

pub fn scenario_names() -> Vec<(&'static str, &'static str)> {
    SCENARIOS.iter().map(|(n, d)| (*n, *d)).collect()
}

const SCENARIOS: &[(&str, &str)] = &[
    ("su2-berger", "su(2) with h = u(1): one-block warped metrics over S^2"),
    ("su2-chain", "su(2) with the chain {0} in u(1) in su(2): two-block metrics on I x S^3"),
    ("so3-sphere", "so(3) with h = so(2): the round 2-sphere slice"),
    ("so4-stiefel", "so(4) with so(2) in so(3) in so(4): two-block Stiefel-type metrics"),
    ("so5-two-block", "so(5) with h = so(3), k = so(3)+so(2): two-block metrics"),
    ("torus2-flat", "abelian T^2 with a one-sided circle: flat directions and torus rank 1"),
    ("son-circle", "so(4)+R with the central circle of u(2) as one-sided L (Brieskorn model)"),
    ("u2-hopf", "u(2) with u(1) in t^2 in u(2): Hopf chain with distinct submersion constants"),
];

pub fn list_scenarios() -> Vec<(&'static str, &'static str)> {
    scenario_names()
}

/// Export a scenario's algebra and blocks in the interchange JSON format.
pub fn scenario_to_json<S: Real>(scenario: &Scenario<S>) -> serde_json::Value {
    crate::lie::algebra_to_json(&scenario.algebra, Some(&scenario.decomposition))
}

/// Load a user-supplied scenario from the interchange format
/// `{name, dim, c, blocks}`. The quotient context defaults to a trivial
/// one-sided action with seeded sample points.
pub fn scenario_from_json<S: Real>(doc: &serde_json::Value) -> Result<Scenario<S>> {
    let (algebra, dec) = crate::lie::algebra_from_json::<S>(doc)?;
    let dec = Arc::new(dec.ok_or_else(|| {
        Error::Serialization("scenario file must carry a nonempty `blocks` list".into())
    })?);
    let quotient =
        Some(Arc::new(QuotientContext::one_sided(algebra.clone(), dec.clone(), vec![], 32, 42)?));
    let semisimple = algebra.center().is_empty();
    Ok(Scenario {
        name: "user-scenario",
        description: "user-supplied scenario file",
        algebra,
        decomposition: dec.clone(),
        quotient,
        slice_constants: vec![S::one(); dec.num_m_blocks()],
        semisimple,
        codim_metadata: None,
    })
}

pub fn load_scenario<S: Real>(name: &str) -> Result<Scenario<S>> {
    match name {
        "su2-berger" => {
            let algebra = Arc::new(su2::<S>());
            let dec = Arc::new(BlockDecomposition::new(algebra.clone(), vec![vec![0], vec![1, 2]])?);
            let quotient = Some(Arc::new(QuotientContext::one_sided(
                algebra.clone(),
                dec.clone(),
                vec![],
                32,
                42,
            )?));
            Ok(Scenario {
                name: "su2-berger",
                description: SCENARIOS[0].1,
                algebra,
                decomposition: dec,
                quotient,
                slice_constants: vec![S::one()],
                semisimple: true,
                codim_metadata: None,
            })
        }
        "su2-chain" => {
            let algebra = Arc::new(su2::<S>());
            let dec = Arc::new(BlockDecomposition::new(
                algebra.clone(),
                vec![vec![], vec![0], vec![1, 2]],
            )?);
            let quotient = Some(Arc::new(QuotientContext::one_sided(
                algebra.clone(),
                dec.clone(),
                vec![],
                32,
                42,
            )?));
            Ok(Scenario {
                name: "su2-chain",
                description: SCENARIOS[1].1,
                algebra,
                decomposition: dec,
                quotient,
                slice_constants: vec![S::one(), S::one()],
                semisimple: true,
                codim_metadata: Some("disc bundle over S^2 with S^1 fiber sphere"),
            })
        }
        "so3-sphere" => {
            let algebra = Arc::new(so_n::<S>(3));
            // Basis order: E01, E02, E12; h = so(2) = span(E01).
            let dec = Arc::new(BlockDecomposition::new(algebra.clone(), vec![vec![0], vec![1, 2]])?);
            let quotient = Some(Arc::new(QuotientContext::one_sided(
                algebra.clone(),
                dec.clone(),
                vec![],
                32,
                42,
            )?));
            Ok(Scenario {
                name: "so3-sphere",
                description: SCENARIOS[2].1,
                algebra,
                decomposition: dec,
                quotient,
                slice_constants: vec![S::one()],
                semisimple: true,
                codim_metadata: None,
            })
        }
        "so4-stiefel" => {
            let algebra = Arc::new(so_n::<S>(4));
            // Basis order: E01, E02, E03, E12, E13, E23.
            // h = span(E01); k = so(3) on {0,1,2} = span(E01, E02, E12);
            // m1 = {E02, E12}; m2 = {E03, E13, E23}.
            let dec = Arc::new(BlockDecomposition::new(
                algebra.clone(),
                vec![vec![0], vec![1, 3], vec![2, 4, 5]],
            )?);
            // One-sided L: the Hopf circle J = E01 + E23 (normalized) acting
            // freely on S^3 = SO(4)/SO(3).
            let inv_sqrt2 = S::parse_decimal(INV_SQRT_2).unwrap();
            let l = vec![basis_vec(6, &[(0, inv_sqrt2), (5, inv_sqrt2)])];
            let quotient = Some(Arc::new(QuotientContext::one_sided(
                algebra.clone(),
                dec.clone(),
                l,
                32,
                42,
            )?));
            Ok(Scenario {
                name: "so4-stiefel",
                description: SCENARIOS[3].1,
                algebra,
                decomposition: dec,
                quotient,
                slice_constants: vec![S::one(), S::one()],
                semisimple: true,
                codim_metadata: Some("disc bundle over S^3 with S^2 fiber sphere"),
            })
        }
        "so5-two-block" => {
            let algebra = Arc::new(so_n::<S>(5));
            // Basis order: E01,E02,E03,E04,E12,E13,E14,E23,E24,E34.
            // h = so(3) on {0,1,2} = span(E01, E02, E12) = indices 0, 1, 4.
            // k = h + so(2) on {3,4} = add E34 = index 9; m1 = {E34}.
            let dec = Arc::new(BlockDecomposition::new(
                algebra.clone(),
                vec![vec![0, 1, 4], vec![9], vec![2, 3, 5, 6, 7, 8]],
            )?);
            let quotient = Some(Arc::new(QuotientContext::one_sided(
                algebra.clone(),
                dec.clone(),
                vec![],
                32,
                42,
            )?));
            Ok(Scenario {
                name: "so5-two-block",
                description: SCENARIOS[4].1,
                algebra,
                decomposition: dec,
                quotient,
                slice_constants: vec![S::one(), S::one()],
                semisimple: true,
                codim_metadata: None,
            })
        }
        "torus2-flat" => {
            let algebra = Arc::new(torus::<S>(2));
            let dec = Arc::new(BlockDecomposition::new(algebra.clone(), vec![vec![], vec![0, 1]])?);
            let l = vec![basis_vec(2, &[(0, S::one())])];
            let quotient = Some(Arc::new(QuotientContext::one_sided(
                algebra.clone(),
                dec.clone(),
                l,
                32,
                42,
            )?));
            Ok(Scenario {
                name: "torus2-flat",
                description: SCENARIOS[5].1,
                algebra,
                decomposition: dec,
                quotient,
                slice_constants: vec![S::one()],
                semisimple: false,
                codim_metadata: None,
            })
        }
        "son-circle" => {
            let algebra = Arc::new(so_n_plus_r::<S>(4));
            // so(4) basis indices 0..5 as in so4-stiefel, index 6 = central R.
            // h = so(2) on coords {2,3} = span(E23) = index 5.
            // k = so(3) on {1,2,3} = span(E12, E13, E23) = indices 3, 4, 5.
            // m1 = {E12, E13} = [3, 4]; m2 = {E01, E02, E03, R} = [0, 1, 2, 6].
            let dec = Arc::new(BlockDecomposition::new(
                algebra.clone(),
                vec![vec![5], vec![3, 4], vec![0, 1, 2, 6]],
            )?);
            // L = central circle of u(2) in so(4): J = E01 + E23, normalized.
            let inv_sqrt2 = S::parse_decimal(INV_SQRT_2).unwrap();
            let l = vec![basis_vec(7, &[(0, inv_sqrt2), (5, inv_sqrt2)])];
            let quotient = Some(Arc::new(QuotientContext::one_sided(
                algebra.clone(),
                dec.clone(),
                l,
                32,
                42,
            )?));
            Ok(Scenario {
                name: "son-circle",
                description: SCENARIOS[6].1,
                algebra,
                decomposition: dec,
                quotient,
                slice_constants: vec![S::one(), S::one()],
                semisimple: false,
                codim_metadata: Some("nonprincipal orbit codimensions 2 and n-1 (n = 4)"),
            })
        }
        "u2-hopf" => {
            let algebra = Arc::new(u2::<S>());
            // h = span(b) = [1]; m1 = span(a) = [0]; m2 = span(u^, v^) = [2, 3].
            let dec = Arc::new(BlockDecomposition::new(
                algebra.clone(),
                vec![vec![1], vec![0], vec![2, 3]],
            )?);
            let quotient = Some(Arc::new(QuotientContext::one_sided(
                algebra.clone(),
                dec.clone(),
                vec![],
                32,
                42,
            )?));
            Ok(Scenario {
                name: "u2-hopf",
                description: SCENARIOS[7].1,
                algebra,
                decomposition: dec,
                quotient,
                slice_constants: vec![S::one(), S::one()],
                semisimple: false,
                codim_metadata: Some("disc bundle over a point with S^3 fiber sphere"),
            })
        }
        other => Err(Error::UnknownScenario(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_scenario_loads_and_validates() {
        for (name, _) in list_scenarios() {
            let s = load_scenario::<f64>(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(s.algebra.check().passes(1e-12), "{name} algebra diagnostics");
        }
    }

    #[test]
    fn names_are_unique_and_described() {
        let names: Vec<_> = list_scenarios().iter().map(|(n, _)| *n).collect();
        let mut dedup = names.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), names.len());
        assert!(list_scenarios().iter().all(|(_, d)| !d.is_empty()));
    }

    #[test]
    fn su2_berger_shape() {
        let s = load_scenario::<f64>("su2-berger").unwrap();
        assert_eq!(s.algebra.dim(), 3);
        assert_eq!(s.decomposition.block(0), &[0]);
        assert_eq!(s.decomposition.block(1), &[1, 2]);
    }

    #[test]
    fn unknown_scenario_is_an_error() {
        assert!(load_scenario::<f64>("nope").is_err());
    }
}
