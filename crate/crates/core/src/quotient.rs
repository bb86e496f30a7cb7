//! Biquotient computations: vertical spaces, flat-direction spaces F_g,
//! torus rank, and the quotient Ricci lower bound for free one-sided actions.

use std::sync::Arc;

use crate::cohom1::Cohom1Metric;
use crate::error::{Error, Result};
use crate::lie::{BiquotientSpec, BlockDecomposition, LieAlgebra};
use crate::linalg::{self, Mat};
use crate::rng::Rng;
use crate::scalar::Real;

/// Group point represented through its adjoint action:
/// Ad_g = exp(ad_a) exp(ad_b).
#[derive(Clone, Debug)]
pub struct GroupPoint<S> {
    pub a: Vec<S>,
    pub b: Vec<S>,
}

impl<S: Real> GroupPoint<S> {
    pub fn identity(dim: usize) -> Self {
        GroupPoint { a: vec![S::zero(); dim], b: vec![S::zero(); dim] }
    }

    pub fn ad(&self, algebra: &LieAlgebra<S>) -> Result<Mat<S>> {
        Ok(algebra.adjoint_exp(&self.a)?.matmul(&algebra.adjoint_exp(&self.b)?))
    }

    pub fn ad_inv(&self, algebra: &LieAlgebra<S>) -> Result<Mat<S>> {
        let neg_a: Vec<S> = self.a.iter().map(|&v| -v).collect();
        let neg_b: Vec<S> = self.b.iter().map(|&v| -v).collect();
        Ok(algebra.adjoint_exp(&neg_b)?.matmul(&algebra.adjoint_exp(&neg_a)?))
    }
}

#[derive(Clone)]
pub enum ContextKind<S: Real> {
    /// Two-sided H in G x G.
    Biquotient(BiquotientSpec<S>),
    /// One-sided subalgebra l in g; the vertical space lives in m of the
    /// attached decomposition.
    OneSided { l_basis: Vec<Vec<S>> },
}

/// Quotient data: the action spec, seeded identity-component sample points,
/// and the ambient decomposition used for slice projections.
#[derive(Clone)]
pub struct QuotientContext<S: Real> {
    algebra: Arc<LieAlgebra<S>>,
    dec: Arc<BlockDecomposition<S>>,
    kind: ContextKind<S>,
    sample_points: Vec<GroupPoint<S>>,
    center: Vec<Vec<S>>,
}

/// Vertical space at a sample point, with the rank expected for a free action.
#[derive(Clone, Debug)]
pub struct VerticalSpace<S> {
    pub basis: Vec<Vec<S>>,
    pub expected_dim: usize,
}

impl<S: Real> VerticalSpace<S> {
    /// Rank deficiency signals a non-free point.
    pub fn is_free(&self) -> bool {
        self.basis.len() == self.expected_dim
    }
}

impl<S: Real> QuotientContext<S> {
    pub fn one_sided(
        algebra: Arc<LieAlgebra<S>>,
        dec: Arc<BlockDecomposition<S>>,
        l_basis: Vec<Vec<S>>,
        n_samples: usize,
        seed: u64,
    ) -> Result<Self> {
        let kind = ContextKind::OneSided { l_basis };
        Self::build(algebra, dec, kind, n_samples, seed)
    }

    pub fn biquotient(
        spec: BiquotientSpec<S>,
        dec: Arc<BlockDecomposition<S>>,
        n_samples: usize,
        seed: u64,
    ) -> Result<Self> {
        let algebra = spec.algebra().clone();
        Self::build(algebra, dec, ContextKind::Biquotient(spec), n_samples, seed)
    }

    fn build(
        algebra: Arc<LieAlgebra<S>>,
        dec: Arc<BlockDecomposition<S>>,
        kind: ContextKind<S>,
        n_samples: usize,
        seed: u64,
    ) -> Result<Self> {
        let dim = algebra.dim();
        let mut rng = Rng::new(seed);
        let mut sample_points = vec![GroupPoint::identity(dim)];
        for _ in 1..n_samples.max(1) {
            let a: Vec<S> = (0..dim).map(|_| rng.range(S::of(-2.0), S::of(2.0))).collect();
            let b: Vec<S> = (0..dim).map(|_| rng.range(S::of(-2.0), S::of(2.0))).collect();
            sample_points.push(GroupPoint { a, b });
        }
        let center = algebra.center();
        let ctx = QuotientContext { algebra, dec, kind, sample_points, center };
        for p in &ctx.sample_points {
            let ad = p.ad(&ctx.algebra)?;
            let gram = ad.transpose().matmul(&ad);
            let dev = gram.sub(&Mat::identity(dim)).max_abs();
            if dev > S::of(1e-10) {
                return Err(Error::InvalidAlgebra(format!(
                    "sample Ad matrix deviates from orthogonality by {:e}",
                    dev.to_f64_lossy()
                )));
            }
        }
        Ok(ctx)
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra<S>> {
        &self.algebra
    }

    /// Same action data with a freshly seeded set of sample points.
    pub fn with_samples(&self, n_samples: usize, seed: u64) -> Result<Self> {
        Self::build(self.algebra.clone(), self.dec.clone(), self.kind.clone(), n_samples, seed)
    }

    pub fn decomposition(&self) -> &Arc<BlockDecomposition<S>> {
        &self.dec
    }

    pub fn kind(&self) -> &ContextKind<S> {
        &self.kind
    }

    pub fn sample_points(&self) -> &[GroupPoint<S>] {
        &self.sample_points
    }

    pub fn center_basis(&self) -> &[Vec<S>] {
        &self.center
    }

    pub fn dim_l(&self) -> usize {
        match &self.kind {
            ContextKind::Biquotient(spec) => spec.dim_h(),
            ContextKind::OneSided { l_basis } => l_basis.len(),
        }
    }

    /// Tangent space of the fiber through g: spans of Ad_{g^{-1}} u_a - w_a
    /// (biquotient) or pr_m(Ad_{g^{-1}} l) (one-sided).
    pub fn vertical_space(&self, point: &GroupPoint<S>) -> Result<VerticalSpace<S>> {
        let ad_inv = point.ad_inv(&self.algebra)?;
        let raw: Vec<Vec<S>> = match &self.kind {
            ContextKind::Biquotient(spec) => spec
                .pairs()
                .iter()
                .map(|(u, w)| linalg::sub_vec(&ad_inv.mul_vec(u), w))
                .collect(),
            ContextKind::OneSided { l_basis } => l_basis
                .iter()
                .map(|l| self.dec.project_m(&ad_inv.mul_vec(l)))
                .collect(),
        };
        let basis = linalg::orthonormalize(&raw, S::of(1e-9));
        Ok(VerticalSpace { basis, expected_dim: self.dim_l() })
    }

    /// Q-orthogonal complement of the vertical space in g.
    pub fn horizontal_space(&self, point: &GroupPoint<S>) -> Result<Vec<Vec<S>>> {
        let v = self.vertical_space(point)?;
        Ok(linalg::orthonormal_complement(&v.basis, self.algebra.dim(), S::of(1e-9)))
    }

    /// F_g = {v in H_g | [v, H_g] = 0}, the flat-direction space. Its
    /// vanishing certifies positive Ricci curvature of the submersion metric
    /// at the point.
    pub fn flat_directions(&self, point: &GroupPoint<S>) -> Result<Vec<Vec<S>>> {
        let h_basis = self.horizontal_space(point)?;
        flat_directions_from_horizontal(&self.algebra, &h_basis)
    }

    /// dim(z(g) /\ H_g), asserted constant across the identity-component
    /// samples.
    pub fn torus_rank(&self) -> Result<usize> {
        let mut rank: Option<usize> = None;
        for p in &self.sample_points {
            let h_basis = self.horizontal_space(p)?;
            let k = intersection_dim(&self.center, &h_basis, self.algebra.dim());
            match rank {
                None => rank = Some(k),
                Some(prev) if prev != k => {
                    return Err(Error::Construction(format!(
                        "torus rank not constant across samples: {prev} vs {k}"
                    )));
                }
                _ => {}
            }
        }
        Ok(rank.unwrap_or(0))
    }
}

/// Kernel of v -> ([v, b_j])_j restricted to span(h_basis), via the
/// singular-value nullspace.
pub fn flat_directions_from_horizontal<S: Real>(
    algebra: &LieAlgebra<S>,
    h_basis: &[Vec<S>],
) -> Result<Vec<Vec<S>>> {
    let dim = algebra.dim();
    let nb = h_basis.len();
    if nb == 0 {
        return Ok(Vec::new());
    }
    // Row (j * dim + r), column a: [b_a, b_j]_r.
    let mut m = Mat::zeros(nb * dim, nb);
    for (a, ba) in h_basis.iter().enumerate() {
        for (j, bj) in h_basis.iter().enumerate() {
            let br = algebra.bracket(ba, bj)?;
            for (r, &v) in br.iter().enumerate() {
                m.set(j * dim + r, a, v);
            }
        }
    }
    let coeffs = m.nullspace(S::of(1e-9));
    let vectors: Vec<Vec<S>> = coeffs
        .iter()
        .map(|alpha| {
            let mut v = vec![S::zero(); dim];
            for (a, ba) in h_basis.iter().enumerate() {
                linalg::axpy(alpha[a], ba, &mut v);
            }
            v
        })
        .collect();
    Ok(linalg::orthonormalize(&vectors, S::of(1e-9)))
}

/// Independent small-instance oracle for the flat-direction space: the same
/// stacked bracket system, with the kernel extracted by Gauss-Jordan row
/// reduction and free-variable parametrization instead of singular values.
pub fn flat_directions_bruteforce<S: Real>(
    algebra: &LieAlgebra<S>,
    h_basis: &[Vec<S>],
) -> Result<Vec<Vec<S>>> {
    let dim = algebra.dim();
    let nb = h_basis.len();
    if nb == 0 {
        return Ok(Vec::new());
    }
    let mut rows: Vec<Vec<S>> = Vec::new();
    for (j, bj) in h_basis.iter().enumerate() {
        let _ = j;
        let mut per_component = vec![vec![S::zero(); nb]; dim];
        for (a, ba) in h_basis.iter().enumerate() {
            let br = algebra.bracket(ba, bj)?;
            for (r, &v) in br.iter().enumerate() {
                per_component[r][a] = v;
            }
        }
        rows.extend(per_component);
    }
    let kernel = rref_kernel(rows, nb, S::of(1e-9));
    let vectors: Vec<Vec<S>> = kernel
        .iter()
        .map(|alpha| {
            let mut v = vec![S::zero(); dim];
            for (a, ba) in h_basis.iter().enumerate() {
                linalg::axpy(alpha[a], ba, &mut v);
            }
            v
        })
        .collect();
    Ok(linalg::orthonormalize(&vectors, S::of(1e-9)))
}

/// Kernel basis of a row system by Gauss-Jordan reduction with partial
/// pivoting; tolerance is relative to the largest row entry.
pub fn rref_kernel<S: Real>(mut rows: Vec<Vec<S>>, cols: usize, tol: S) -> Vec<Vec<S>> {
    let scale = rows
        .iter()
        .flat_map(|r| r.iter())
        .fold(S::zero(), |m, &v| m.max(v.abs()))
        .max(S::one());
    let eps = tol * scale;
    let mut pivot_cols = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        // Find the best pivot in column c at or below row r.
        let mut best = r;
        let mut best_val = S::zero();
        for i in r..rows.len() {
            if rows[i][c].abs() > best_val {
                best_val = rows[i][c].abs();
                best = i;
            }
        }
        if best_val <= eps {
            continue;
        }
        rows.swap(r, best);
        let d = rows[r][c];
        for v in rows[r].iter_mut() {
            *v = *v / d;
        }
        for i in 0..rows.len() {
            if i != r {
                let factor = rows[i][c];
                if factor.abs() > S::zero() {
                    let pivot_row = rows[r].clone();
                    for (v, &p) in rows[i].iter_mut().zip(&pivot_row) {
                        *v = *v - factor * p;
                    }
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    free_cols
        .iter()
        .map(|&fc| {
            let mut v = vec![S::zero(); cols];
            v[fc] = S::one();
            for (ri, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -rows[ri][fc];
            }
            v
        })
        .collect()
}

fn intersection_dim<S: Real>(a: &[Vec<S>], b: &[Vec<S>], _dim: usize) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut rows: Vec<Vec<S>> = a.to_vec();
    rows.extend(b.iter().cloned());
    // dim(span a + span b) is the row rank of the stacked matrix.
    let sum_dim = Mat::from_rows(&rows).rank(S::of(1e-9));
    a.len() + b.len() - sum_dim
}

/// Slice-level horizontal data for the quotient Ricci bound at (t, g).
pub struct HorizontalFrame<S> {
    /// g-orthonormal horizontal vectors (in Q-coordinates on m).
    pub frame: Vec<Vec<S>>,
    /// Q-orthonormal basis of H_g^Q (the complement of V_g in m).
    pub hq_basis: Vec<Vec<S>>,
}

/// Assemble the metric-horizontal space H_g = {y_1 + f^2 y_2 | y in H_g^Q}
/// at parameter t, g-orthonormalized.
pub fn horizontal_frame<S: Real>(
    metric: &Cohom1Metric<S>,
    ctx: &QuotientContext<S>,
    point: &GroupPoint<S>,
    t: S,
) -> Result<HorizontalFrame<S>> {
    let dec = metric.decomposition();
    let dim = dec.dim();
    let vert = ctx.vertical_space(point)?;
    // Complement of V_g inside m: exclude h and uncovered indices as well.
    let mut killed = vert.basis.clone();
    for &i in dec.h_indices() {
        let mut e = vec![S::zero(); dim];
        e[i] = S::one();
        killed.push(e);
    }
    let mut covered = vec![false; dim];
    for b in 0..dec.num_blocks() {
        for &i in dec.block(b) {
            covered[i] = true;
        }
    }
    for (i, c) in covered.iter().enumerate() {
        if !c {
            let mut e = vec![S::zero(); dim];
            e[i] = S::one();
            killed.push(e);
        }
    }
    let hq_basis = linalg::orthonormal_complement(&killed, dim, S::of(1e-9));
    let jets = metric.jets_at(t)?;
    let f2 = jets[0].f * jets[0].f;
    // w(u) = u_1 + f^2 u_2, then Gram-Schmidt in the slice metric.
    let mut frame: Vec<Vec<S>> = Vec::new();
    for u in &hq_basis {
        let u1 = dec.project_block(u, 1);
        let u2 = dec.project_block(u, 2);
        let mut w: Vec<S> = u1.iter().zip(&u2).map(|(&a, &b)| a + f2 * b).collect();
        for prev in &frame {
            let proj = metric.slice_inner(t, &w, prev)?;
            linalg::axpy(-proj, prev, &mut w);
        }
        let n2 = metric.slice_inner(t, &w, &w)?;
        if n2 > S::of(1e-18) {
            frame.push(linalg::scale_vec(S::one() / n2.sqrt(), &w));
        }
    }
    Ok(HorizontalFrame { frame, hq_basis })
}

/// Factor used in the per-direction term of the Ricci bound. The corollary
/// supplies (f f')^2; the printed chain shows (f' f'')^2. The corollary form
/// is the one the lower-bound proof supports and is the default; the printed
/// form stays computable behind this flag for comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RicciBoundVariant {
    FfPrime,
    FPrimeFSecond,
}

/// The lower bound for Ric_N(c dt + x) from the sum over a g-orthonormal
/// horizontal frame: radial term -f f'' |x_1|^2_Q plus the per-direction
/// bounds -(f f')^2 |x_1 ^ y_1^i|^2_Q. Requires the profile inequality
/// -f f'' >= C (f')^2 with C = max(dim N, 9) at t.
pub fn quotient_ricci_bound<S: Real>(
    metric: &Cohom1Metric<S>,
    ctx: &QuotientContext<S>,
    point: &GroupPoint<S>,
    t: S,
    c: S,
    x: &[S],
) -> Result<S> {
    quotient_ricci_bound_with(metric, ctx, point, t, c, x, RicciBoundVariant::FfPrime)
}

pub fn quotient_ricci_bound_with<S: Real>(
    metric: &Cohom1Metric<S>,
    ctx: &QuotientContext<S>,
    point: &GroupPoint<S>,
    t: S,
    _c: S,
    x: &[S],
    variant: RicciBoundVariant,
) -> Result<S> {
    if !metric.is_two_block_normalized() {
        return Err(Error::Precondition("quotient bound needs the two-block shape".into()));
    }
    let dec = metric.decomposition();
    let jets = metric.jets_at(t)?;
    let (f, fp, fpp) = (jets[0].f, jets[0].df, jets[0].ddf);
    let dim_n = 1 + dec.dim_m() - ctx.dim_l();
    let c_exp = S::from_usize(dim_n.max(9)).unwrap();
    if -f * fpp + S::of(1e-12) < c_exp * fp * fp {
        return Err(Error::Precondition(format!(
            "-f f'' >= C (f')^2 fails at t = {} (C = {})",
            t.to_f64_lossy(),
            c_exp.to_f64_lossy()
        )));
    }
    let factor = match variant {
        RicciBoundVariant::FfPrime => (f * fp) * (f * fp),
        RicciBoundVariant::FPrimeFSecond => (fp * fpp) * (fp * fpp),
    };
    let hf = horizontal_frame(metric, ctx, point, t)?;
    let x1 = dec.project_block(x, 1);
    let x1_sq = linalg::dot(&x1, &x1);
    let mut bound = -f * fpp * x1_sq;
    for y in &hf.frame {
        let y1 = dec.project_block(y, 1);
        let wedge = x1_sq * linalg::dot(&y1, &y1) - linalg::dot(&x1, &y1).powi(2);
        bound = bound - factor * wedge;
    }
    Ok(bound)
}

/// Search for a point certifying positive Ricci curvature: f'(t) != 0, the
/// slice biquotient L\G/K has no flat directions at the sample, and the
/// Ricci bound is strictly positive in every sampled horizontal direction.
pub struct PositiveWitness<S> {
    pub point_index: usize,
    pub t: S,
    pub min_bound: S,
}

pub fn positive_point_search<S: Real>(
    metric: &Cohom1Metric<S>,
    ctx: &QuotientContext<S>,
    t_grid: &[S],
    directions_per_point: usize,
    seed: u64,
) -> Result<Option<PositiveWitness<S>>> {
    if metric.decomposition().block(1).is_empty() {
        return Err(Error::Precondition("dim m1 must be >= 1".into()));
    }
    let slice_ctx = slice_biquotient(ctx)?;
    let mut rng = Rng::new(seed);
    for (pi, point) in ctx.sample_points().iter().enumerate() {
        let flats = slice_ctx.flat_directions(point)?;
        if !flats.is_empty() {
            continue;
        }
        for &t in t_grid {
            let jets = metric.jets_at(t)?;
            if jets[0].df.abs() <= S::of(1e-8) {
                continue;
            }
            let zero_probe = vec![S::zero(); metric.decomposition().dim()];
            if quotient_ricci_bound(metric, ctx, point, t, S::zero(), &zero_probe).is_err() {
                // profile inequality fails here; try another t
                continue;
            }
            let hf = horizontal_frame(metric, ctx, point, t)?;
            if hf.frame.is_empty() {
                continue;
            }
            let mut min_bound = S::infinity();
            let mut all_positive = true;
            for _ in 0..directions_per_point {
                let mut x = vec![S::zero(); metric.decomposition().dim()];
                for w in &hf.frame {
                    let coef: S = rng.symmetric();
                    linalg::axpy(coef, w, &mut x);
                }
                let n2 = metric.slice_inner(t, &x, &x)?;
                if n2 < S::of(1e-12) {
                    continue;
                }
                let x = linalg::scale_vec(S::one() / n2.sqrt(), &x);
                let b = quotient_ricci_bound(metric, ctx, point, t, S::zero(), &x)?;
                min_bound = min_bound.min(b);
                if b <= S::zero() {
                    all_positive = false;
                    break;
                }
            }
            if all_positive && min_bound.is_finite() {
                return Ok(Some(PositiveWitness { point_index: pi, t, min_bound }));
            }
        }
    }
    Ok(None)
}

/// The slice biquotient L\G/K as a two-sided context: pairs (l_a, 0) and
/// (0, k_b) with k = h + m_1 from the metric decomposition.
pub fn slice_biquotient<S: Real>(ctx: &QuotientContext<S>) -> Result<QuotientContext<S>> {
    let dec = ctx.decomposition();
    let dim = dec.dim();
    let mut pairs: Vec<(Vec<S>, Vec<S>)> = Vec::new();
    match ctx.kind() {
        ContextKind::OneSided { l_basis } => {
            for l in l_basis {
                pairs.push((l.clone(), vec![S::zero(); dim]));
            }
        }
        ContextKind::Biquotient(spec) => {
            pairs.extend(spec.pairs().iter().cloned());
        }
    }
    let mut k_indices: Vec<usize> = dec.h_indices().to_vec();
    k_indices.extend(dec.block(1).iter().copied());
    for &i in &k_indices {
        let mut e = vec![S::zero(); dim];
        e[i] = S::one();
        pairs.push((vec![S::zero(); dim], e));
    }
    let spec = BiquotientSpec::new(ctx.algebra().clone(), pairs)?;
    // Vertical spaces of the slice live in g; keep an h-free decomposition.
    let full_dec = Arc::new(BlockDecomposition::new(
        ctx.algebra().clone(),
        vec![vec![], (0..dim).collect()],
    )?);
    let mut slice = QuotientContext::biquotient(spec, full_dec, 1, 42)?;
    slice.sample_points = ctx.sample_points().to_vec();
    Ok(slice)
}
