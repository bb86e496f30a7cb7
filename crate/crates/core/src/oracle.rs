//! Independent curvature computations used to validate the closed-form
//! evaluators: Koszul connection and curvature of left-invariant metrics,
//! homogeneous-space curvature via the O'Neill correction, a hypersurface
//! (Gauss-Codazzi-Riccati) route for the interval metrics, and a
//! finite-difference Riemann tensor in an exponential chart.

use std::sync::Arc;

use crate::cohom1::Cohom1Metric;
use crate::error::{Error, Result};
use crate::lie::{BlockDecomposition, LieAlgebra};
use crate::linalg::{self, Mat};
use crate::scalar::Real;

/// Left-invariant metric on G given by the symmetric positive-definite
/// matrix P in the Q-orthonormal basis: <x, y> = x^T P y.
#[derive(Clone, Debug)]
pub struct LeftInvariantMetric<S> {
    algebra: Arc<LieAlgebra<S>>,
    p: Mat<S>,
    p_inv: Mat<S>,
}

impl<S: Real> LeftInvariantMetric<S> {
    pub fn new(algebra: Arc<LieAlgebra<S>>, p: Mat<S>) -> Result<Self> {
        let n = algebra.dim();
        if p.rows() != n || p.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: p.rows() });
        }
        if !p.is_symmetric(S::of(1e-14)) {
            return Err(Error::InvalidMetric("P is not symmetric".into()));
        }
        let (vals, _) = p.sym_eigen();
        if vals[0] <= S::zero() {
            return Err(Error::InvalidMetric(format!(
                "P is not positive definite (min eigenvalue {:e})",
                vals[0].to_f64_lossy()
            )));
        }
        let p_inv = p.inverse()?;
        Ok(LeftInvariantMetric { algebra, p, p_inv })
    }

    pub fn biinvariant(algebra: Arc<LieAlgebra<S>>) -> Self {
        let n = algebra.dim();
        LeftInvariantMetric { algebra, p: Mat::identity(n), p_inv: Mat::identity(n) }
    }

    /// Diagonal metric with the given per-basis-index weights. Positive
    /// definiteness is immediate, so the eigenvalue check is skipped.
    pub fn diagonal(algebra: Arc<LieAlgebra<S>>, weights: &[S]) -> Result<Self> {
        let n = algebra.dim();
        if weights.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: weights.len() });
        }
        if weights.iter().any(|&w| !(w > S::zero()) || !w.is_finite()) {
            return Err(Error::InvalidMetric("diagonal weights must be finite positive".into()));
        }
        let p = Mat::from_fn(n, n, |i, j| if i == j { weights[i] } else { S::zero() });
        let p_inv =
            Mat::from_fn(n, n, |i, j| if i == j { S::one() / weights[i] } else { S::zero() });
        Ok(LeftInvariantMetric { algebra, p, p_inv })
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra<S>> {
        &self.algebra
    }

    pub fn p(&self) -> &Mat<S> {
        &self.p
    }

    pub fn inner(&self, x: &[S], y: &[S]) -> S {
        linalg::dot(x, &self.p.mul_vec(y))
    }

    /// Levi-Civita connection on left-invariant fields:
    /// 2 <nabla_x y, z> = <[x,y],z> - <[y,z],x> + <[z,x],y>.
    pub fn koszul_connection(&self, x: &[S], y: &[S]) -> Result<Vec<S>> {
        let n = self.algebra.dim();
        if x.len() != n || y.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: x.len().max(y.len()) });
        }
        // r_k = (P[x,y])_k - (ad_y^T P x)_k - (ad_x^T P y)_k; nabla = P^{-1} r / 2.
        let bxy = self.algebra.bracket(x, y)?;
        let mut r = self.p.mul_vec(&bxy);
        let ad_y_t = self.algebra.ad(y)?.transpose();
        let ad_x_t = self.algebra.ad(x)?.transpose();
        let px = self.p.mul_vec(x);
        let py = self.p.mul_vec(y);
        let t1 = ad_y_t.mul_vec(&px);
        let t2 = ad_x_t.mul_vec(&py);
        for k in 0..n {
            r[k] = r[k] - t1[k] - t2[k];
        }
        Ok(linalg::scale_vec(S::of(0.5), &self.p_inv.mul_vec(&r)))
    }

    /// Unnormalized sectional numerator
    /// R(x,y;y,x) = <nabla_x nabla_y y - nabla_y nabla_x y - nabla_[x,y] y, x>.
    pub fn curvature(&self, x: &[S], y: &[S]) -> Result<S> {
        let nyy = self.koszul_connection(y, y)?;
        let nxy = self.koszul_connection(x, y)?;
        let bxy = self.algebra.bracket(x, y)?;
        let a = self.koszul_connection(x, &nyy)?;
        let b = self.koszul_connection(y, &nxy)?;
        let c = self.koszul_connection(&bxy, y)?;
        let n = x.len();
        let mut r = vec![S::zero(); n];
        for k in 0..n {
            r[k] = a[k] - b[k] - c[k];
        }
        Ok(self.inner(&r, x))
    }

    /// Normalized sectional curvature R / |x ^ y|^2 in the metric.
    pub fn sectional(&self, x: &[S], y: &[S]) -> Result<S> {
        let num = self.curvature(x, y)?;
        let area = self.inner(x, x) * self.inner(y, y) - self.inner(x, y).powi(2);
        if area <= S::of(1e-14) {
            return Err(Error::Precondition("degenerate plane".into()));
        }
        Ok(num / area)
    }
}

/// Precomputed connection coefficients nabla_{e_i} e_j for sweep loops.
pub struct ConnectionTable<S> {
    gamma: Vec<Vec<S>>, // gamma[i * n + j] = nabla_{e_i} e_j
    n: usize,
}

impl<S: Real> ConnectionTable<S> {
    pub fn new(metric: &LeftInvariantMetric<S>) -> Result<Self> {
        let n = metric.algebra.dim();
        let mut gamma = Vec::with_capacity(n * n);
        for i in 0..n {
            let mut ei = vec![S::zero(); n];
            ei[i] = S::one();
            for j in 0..n {
                let mut ej = vec![S::zero(); n];
                ej[j] = S::one();
                gamma.push(metric.koszul_connection(&ei, &ej)?);
            }
        }
        Ok(ConnectionTable { gamma, n })
    }

    pub fn apply(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.n];
        for i in 0..self.n {
            if x[i] == S::zero() {
                continue;
            }
            for j in 0..self.n {
                let w = x[i] * y[j];
                if w == S::zero() {
                    continue;
                }
                linalg::axpy(w, &self.gamma[i * self.n + j], &mut out);
            }
        }
        out
    }
}

/// Curvature R^phi(x, y; y, x) of the G-invariant metric on G/H induced by
/// the blockwise phi (metric eigenvalue f_i^2 per block), via the extension
/// metric (weight 1 on h) plus the O'Neill A-tensor correction
/// 3 |A_x y|^2 = (3/4) |pr_h [x, y]|^2_Q.
pub fn homogeneous_curvature<S: Real>(
    dec: &BlockDecomposition<S>,
    phi: &[S],
    x: &[S],
    y: &[S],
) -> Result<S> {
    let metric = extension_metric(dec, phi)?;
    homogeneous_curvature_with(dec, &metric, x, y)
}

/// Extension metric on g for the blockwise phi: weight 1 on h, phi_i on m_i.
pub fn extension_metric<S: Real>(
    dec: &BlockDecomposition<S>,
    phi: &[S],
) -> Result<LeftInvariantMetric<S>> {
    if phi.len() != dec.num_m_blocks() {
        return Err(Error::DimensionMismatch { expected: dec.num_m_blocks(), got: phi.len() });
    }
    if phi.iter().any(|&v| !(v > S::zero()) || !v.is_finite()) {
        return Err(Error::InvalidMetric("phi values must be finite positive".into()));
    }
    let n = dec.dim();
    let mut weights = vec![S::one(); n];
    for (bi, vals) in phi.iter().enumerate() {
        for &idx in dec.block(bi + 1) {
            weights[idx] = *vals;
        }
    }
    LeftInvariantMetric::diagonal(dec.algebra().clone(), &weights)
}

pub fn homogeneous_curvature_with<S: Real>(
    dec: &BlockDecomposition<S>,
    extension: &LeftInvariantMetric<S>,
    x: &[S],
    y: &[S],
) -> Result<S> {
    check_in_m(dec, x)?;
    check_in_m(dec, y)?;
    let total = extension.curvature(x, y)?;
    let bxy = dec.algebra().bracket(x, y)?;
    let vert = dec.project_h(&bxy);
    let a2 = linalg::dot(&vert, &vert);
    Ok(total + S::of(0.75) * a2)
}

pub fn check_in_m<S: Real>(dec: &BlockDecomposition<S>, v: &[S]) -> Result<()> {
    let h_part = dec.project_h(v);
    let tol = S::of(1e-12) * (S::one() + linalg::norm(v));
    if linalg::norm(&h_part) > tol || dec.residual_outside(v) > tol {
        return Err(Error::Precondition("vector has a component outside m".into()));
    }
    Ok(())
}

/// R(c dt + x, y; y, c dt + x) for the metric dt^2 + g_{phi(t)} computed via
/// the hypersurface decomposition: slice curvature of the extension metric at
/// parameter phi(t), the Gauss second-fundamental-form terms, the Codazzi
/// mixed term (covariant derivative of the shape tensor), the radial
/// Jacobi/Riccati term, and the O'Neill correction for the drop to G/H.
pub fn gauss_codazzi_curvature<S: Real>(
    metric: &Cohom1Metric<S>,
    t: S,
    c: S,
    x: &[S],
    y: &[S],
) -> Result<S> {
    let dec = metric.decomposition();
    check_in_m(dec, x)?;
    check_in_m(dec, y)?;
    metric.check_interior(t)?;
    for profile in metric.profiles() {
        if profile.is_breakpoint(t, S::of(1e-9)) {
            return Err(Error::Precondition(format!(
                "t = {} is a profile breakpoint; second derivatives may jump",
                t.to_f64_lossy()
            )));
        }
    }

    let n = dec.dim();
    let jets = metric.jets_at(t)?;
    let phi: Vec<S> = jets.iter().map(|j| j.f * j.f).collect();
    let phi_dot: Vec<S> = jets.iter().map(|j| S::of(2.0) * j.f * j.df).collect();
    let phi_ddot: Vec<S> =
        jets.iter().map(|j| S::of(2.0) * (j.df * j.df + j.f * j.ddf)).collect();

    let slice = extension_metric(dec, &phi)?;
    let p_dot = {
        let mut w = vec![S::zero(); n];
        for (bi, v) in phi_dot.iter().enumerate() {
            for &idx in dec.block(bi + 1) {
                w[idx] = *v;
            }
        }
        w
    };
    let p_ddot = {
        let mut w = vec![S::zero(); n];
        for (bi, v) in phi_ddot.iter().enumerate() {
            for &idx in dec.block(bi + 1) {
                w[idx] = *v;
            }
        }
        w
    };
    let pdot_vec = |v: &[S]| -> Vec<S> { v.iter().zip(&p_dot).map(|(&a, &w)| w * a).collect() };

    // Second fundamental form II(u, v) = -(1/2) u^T Pdot v of the slice.
    let ii = |u: &[S], v: &[S]| -> S { -S::of(0.5) * linalg::dot(u, &pdot_vec(v)) };

    // Tangential part: slice curvature of (G, P(t)) plus Gauss terms.
    let r_slice = slice.curvature(x, y)?;
    let gauss = ii(x, y) * ii(x, y) - ii(x, x) * ii(y, y);

    // Radial (Riccati) part: R(dt, y; y, dt) = -(1/4) y^T (2 Pddot - Pdot P^{-1} Pdot) y.
    let radial = {
        let mut acc = S::zero();
        for (bi, _) in phi.iter().enumerate() {
            for &idx in dec.block(bi + 1) {
                let quad = S::of(2.0) * p_ddot[idx] - p_dot[idx] * p_dot[idx] / phi[bi];
                acc = acc + quad * y[idx] * y[idx];
            }
        }
        -S::of(0.25) * acc
    };

    // Codazzi mixed term R(x, y; y, dt) = (nabla_x II)(y,y) - (nabla_y II)(x,y)
    // with the slice connection applied to the invariant tensor II.
    let lam_xy = slice.koszul_connection(x, y)?;
    let lam_yx = slice.koszul_connection(y, x)?;
    let lam_yy = slice.koszul_connection(y, y)?;
    let mixed = linalg::dot(&lam_xy, &pdot_vec(y))
        - S::of(0.5) * linalg::dot(&lam_yx, &pdot_vec(y))
        - S::of(0.5) * linalg::dot(x, &pdot_vec(&lam_yy));

    // O'Neill drop from I x G to I x G/H.
    let bxy = dec.algebra().bracket(x, y)?;
    let vert = dec.project_h(&bxy);
    let oneill = S::of(0.75) * linalg::dot(&vert, &vert);

    Ok(r_slice + gauss + oneill + S::of(2.0) * c * mixed + c * c * radial)
}

/// d(exp)_u trivialized by left translation: J(u) = sum_{k>=0} (-ad_u)^k / (k+1)!.
pub fn dexp_left<S: Real>(algebra: &LieAlgebra<S>, u: &[S], terms: usize) -> Mat<S> {
    let n = algebra.dim();
    let ad = algebra.ad(u).expect("ad of chart point");
    let neg_ad = ad.scale(-S::one());
    let mut j = Mat::identity(n);
    let mut pow = Mat::identity(n);
    let mut fact = S::one();
    for k in 1..=terms {
        pow = pow.matmul(&neg_ad);
        fact = fact * S::from_usize(k + 1).unwrap();
        j = j.add(&pow.scale(S::one() / fact));
    }
    j
}

/// Finite-difference Riemann numerator R(x,y;y,x) at the origin of a chart,
/// for an arbitrary chart metric u -> g(u). Central differences of the
/// Christoffel symbols; `step` balances truncation against roundoff.
pub fn fd_sectional_numerator<S: Real>(
    metric_at: &dyn Fn(&[S]) -> Mat<S>,
    dim: usize,
    x: &[S],
    y: &[S],
    step: S,
) -> S {
    let christoffel = |u: &[S]| -> Vec<Mat<S>> {
        // Gamma^k_{ij} = (1/2) g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
        let g = metric_at(u);
        let g_inv = g.inverse().expect("chart metric invertible");
        let mut dg = Vec::with_capacity(dim);
        for d in 0..dim {
            let mut up = u.to_vec();
            up[d] = up[d] + step;
            let mut dn = u.to_vec();
            dn[d] = dn[d] - step;
            let diff = metric_at(&up).sub(&metric_at(&dn)).scale(S::one() / (S::of(2.0) * step));
            dg.push(diff);
        }
        let mut gamma = vec![Mat::zeros(dim, dim); dim];
        for k in 0..dim {
            for i in 0..dim {
                for j in 0..dim {
                    let mut acc = S::zero();
                    for l in 0..dim {
                        let v = dg[i].at(j, l) + dg[j].at(i, l) - dg[l].at(i, j);
                        acc = acc + g_inv.at(k, l) * v;
                    }
                    gamma[k].set(i, j, S::of(0.5) * acc);
                }
            }
        }
        gamma
    };

    let origin = vec![S::zero(); dim];
    let gamma0 = christoffel(&origin);
    // dGamma[d][k](i, j) = partial_d Gamma^k_{ij} at the origin.
    let mut dgamma = Vec::with_capacity(dim);
    for d in 0..dim {
        let mut up = origin.clone();
        up[d] = up[d] + step;
        let mut dn = origin.clone();
        dn[d] = dn[d] - step;
        let gp = christoffel(&up);
        let gn = christoffel(&dn);
        let per_k: Vec<Mat<S>> = (0..dim)
            .map(|k| gp[k].sub(&gn[k]).scale(S::one() / (S::of(2.0) * step)))
            .collect();
        dgamma.push(per_k);
    }

    // R^l_{kij} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
    //            + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik};
    // R(x, y) y contracted against x through the metric at the origin.
    let g0 = metric_at(&origin);
    let mut riem = vec![S::zero(); dim];
    for l in 0..dim {
        let mut acc = S::zero();
        for i in 0..dim {
            for j in 0..dim {
                let w = x[i] * y[j];
                if w == S::zero() {
                    continue;
                }
                for k in 0..dim {
                    if y[k] == S::zero() {
                        continue;
                    }
                    let mut r = dgamma[i][l].at(j, k) - dgamma[j][l].at(i, k);
                    for m in 0..dim {
                        r = r + gamma0[l].at(i, m) * gamma0[m].at(j, k)
                            - gamma0[l].at(j, m) * gamma0[m].at(i, k);
                    }
                    acc = acc + w * y[k] * r;
                }
            }
        }
        riem[l] = acc;
    }
    linalg::dot(&g0.mul_vec(&riem), x)
}

/// Finite-difference oracle for a left-invariant metric, in the exponential
/// chart u -> exp(u) with metric J(u)^T P J(u).
pub fn fd_left_invariant_numerator<S: Real>(
    metric: &LeftInvariantMetric<S>,
    x: &[S],
    y: &[S],
    step: S,
) -> S {
    let algebra = metric.algebra().clone();
    let p = metric.p().clone();
    let dim = algebra.dim();
    let f = move |u: &[S]| -> Mat<S> {
        let j = dexp_left(&algebra, u, 12);
        j.transpose().matmul(&p).matmul(&j)
    };
    fd_sectional_numerator(&f, dim, x, y, step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rng::Rng;

    fn su2_arc() -> Arc<LieAlgebra<f64>> {
        Arc::new(catalog::su2::<f64>())
    }

    #[test]
    fn biinvariant_connection_is_half_bracket() {
        let a = su2_arc();
        let m = LeftInvariantMetric::biinvariant(a.clone());
        let mut rng = Rng::new(42);
        for _ in 0..20 {
            let x = rng.vector::<f64>(3);
            let y = rng.vector::<f64>(3);
            let nab = m.koszul_connection(&x, &y).unwrap();
            let br = a.bracket(&x, &y).unwrap();
            for k in 0..3 {
                assert!((nab[k] - 0.5 * br[k]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn abelian_connection_vanishes() {
        let t2 = Arc::new(catalog::torus::<f64>(2));
        let m = LeftInvariantMetric::diagonal(t2, &[1.0, 3.0]).unwrap();
        let nab = m.koszul_connection(&[1.0, 2.0], &[3.0, -1.0]).unwrap();
        assert!(linalg::norm(&nab) < 1e-15);
    }

    #[test]
    fn koszul_is_metric_compatible() {
        let a = su2_arc();
        let m = LeftInvariantMetric::diagonal(a, &[0.25, 1.0, 1.0]).unwrap();
        let mut rng = Rng::new(42);
        for _ in 0..50 {
            let x = rng.vector::<f64>(3);
            let y = rng.vector::<f64>(3);
            let z = rng.vector::<f64>(3);
            let nxy = m.koszul_connection(&x, &y).unwrap();
            let nxz = m.koszul_connection(&x, &z).unwrap();
            let lhs = m.inner(&nxy, &z) + m.inner(&y, &nxz);
            assert!(lhs.abs() < 1e-12, "metric compatibility violated: {lhs}");
        }
    }

    #[test]
    fn biinvariant_curvature_is_quarter_bracket_norm() {
        let a = su2_arc();
        let m = LeftInvariantMetric::biinvariant(a.clone());
        let mut rng = Rng::new(42);
        for _ in 0..100 {
            let x = rng.vector::<f64>(3);
            let y = rng.vector::<f64>(3);
            let r = m.curvature(&x, &y).unwrap();
            let br = a.bracket(&x, &y).unwrap();
            let expected = 0.25 * linalg::dot(&br, &br);
            assert!((r - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn su2_e2_e3_quarter() {
        let m = LeftInvariantMetric::biinvariant(su2_arc());
        let r = m.curvature(&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]).unwrap();
        assert!((r - 0.25).abs() < 1e-15);
    }

    #[test]
    fn curvature_vanishes_on_equal_arguments() {
        let m = LeftInvariantMetric::diagonal(su2_arc(), &[0.3, 1.0, 2.0]).unwrap();
        let x = vec![0.4, -0.2, 0.9];
        assert!(m.curvature(&x, &x).unwrap().abs() < 1e-14);
    }

    #[test]
    fn curvature_pair_symmetry_and_polarization() {
        let m = LeftInvariantMetric::diagonal(su2_arc(), &[0.25, 1.0, 1.7]).unwrap();
        let mut rng = Rng::new(42);
        for _ in 0..50 {
            let x = rng.vector::<f64>(3);
            let y = rng.vector::<f64>(3);
            let rxy = m.curvature(&x, &y).unwrap();
            let ryx = m.curvature(&y, &x).unwrap();
            assert!((rxy - ryx).abs() < 1e-12 * (1.0 + rxy.abs()));
        }
    }

    #[test]
    fn berger_connection_matches_finite_differences() {
        // Left-invariant Berger metric diag(eps^2, 1, 1) on su(2): compare the
        // full curvature numerator against the chart oracle.
        let m = LeftInvariantMetric::diagonal(su2_arc(), &[0.04, 1.0, 1.0]).unwrap();
        let mut rng = Rng::new(42);
        for _ in 0..10 {
            let x = rng.vector::<f64>(3);
            let y = rng.vector::<f64>(3);
            let exact = m.curvature(&x, &y).unwrap();
            let fd = fd_left_invariant_numerator(&m, &x, &y, 1e-4);
            assert!(
                (exact - fd).abs() < 1e-5 * (1.0 + exact.abs()),
                "exact {exact} vs fd {fd}"
            );
        }
    }

    #[test]
    fn so4_curvature_matches_finite_differences() {
        let a = Arc::new(catalog::so_n::<f64>(4));
        let m =
            LeftInvariantMetric::diagonal(a, &[1.0, 1.0, 1.0, 2.0, 2.0, 3.0]).unwrap();
        let mut rng = Rng::new(7);
        for _ in 0..5 {
            let x = rng.vector::<f64>(6);
            let y = rng.vector::<f64>(6);
            let exact = m.curvature(&x, &y).unwrap();
            let fd = fd_left_invariant_numerator(&m, &x, &y, 1e-4);
            assert!(
                (exact - fd).abs() < 1e-5 * (1.0 + exact.abs()),
                "exact {exact} vs fd {fd}"
            );
        }
    }

    #[test]
    fn sphere_has_constant_curvature_one() {
        // S^2 = so(3)/so(2) with phi = 1: R(x,y;y,x) = |x ^ y|^2.
        let s = catalog::load_scenario::<f64>("so3-sphere").unwrap();
        let mut rng = Rng::new(42);
        for _ in 0..50 {
            let mut x = vec![0.0; 3];
            let mut y = vec![0.0; 3];
            for i in [1usize, 2] {
                x[i] = rng.symmetric();
                y[i] = rng.symmetric();
            }
            let r = homogeneous_curvature(&s.decomposition, &[1.0], &x, &y).unwrap();
            let area = linalg::dot(&x, &x) * linalg::dot(&y, &y) - linalg::dot(&x, &y).powi(2);
            assert!((r - area).abs() < 1e-12);
        }
    }

    #[test]
    fn s3_biinvariant_sections_are_quarter() {
        // S^3 = su(2) with trivial h and phi = 1 blockwise.
        let s = catalog::load_scenario::<f64>("su2-chain").unwrap();
        let mut rng = Rng::new(42);
        for _ in 0..50 {
            let x = rng.unit_vector::<f64>(3);
            let y = rng.unit_vector::<f64>(3);
            let r = homogeneous_curvature(&s.decomposition, &[1.0, 1.0], &x, &y).unwrap();
            let br = s.algebra.bracket(&x, &y).unwrap();
            assert!((r - 0.25 * linalg::dot(&br, &br)).abs() < 1e-12);
        }
    }

    #[test]
    fn u2_hopf_submersion_constants_give_round_sphere() {
        // The diagonal metric (rho_1, rho_2) = (1, 1/2) on u(2)/u(1) is the
        // unit round S^3: constant curvature 1.
        let s = catalog::load_scenario::<f64>("u2-hopf").unwrap();
        let ext = extension_metric(&s.decomposition, &[1.0, 0.5]).unwrap();
        let mut rng = Rng::new(42);
        for _ in 0..100 {
            let mut x = vec![0.0; 4];
            let mut y = vec![0.0; 4];
            for i in [0usize, 2, 3] {
                x[i] = rng.symmetric();
                y[i] = rng.symmetric();
            }
            let r = homogeneous_curvature_with(&s.decomposition, &ext, &x, &y).unwrap();
            let gx = ext.inner(&x, &x);
            let gy = ext.inner(&y, &y);
            let gxy = ext.inner(&x, &y);
            let area = gx * gy - gxy * gxy;
            assert!(
                (r - area).abs() < 1e-10 * (1.0 + area),
                "sec deviates from 1: r = {r}, area = {area}"
            );
        }
    }

    #[test]
    fn homogeneous_rejects_h_components() {
        let s = catalog::load_scenario::<f64>("so3-sphere").unwrap();
        let x = vec![1.0, 0.0, 0.0]; // h-direction
        let y = vec![0.0, 1.0, 0.0];
        assert!(homogeneous_curvature(&s.decomposition, &[1.0], &x, &y).is_err());
    }
}
