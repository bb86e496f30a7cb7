//! Compact Lie algebras as structure constants in a basis orthonormal for a
//! biinvariant inner product Q, plus the block decompositions and biquotient
//! data every curvature routine consumes.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::scalar::Real;

/// Compact Lie algebra in a Q-orthonormal basis: `[e_i, e_j] = sum_k c[i][j][k] e_k`.
///
/// With Q orthonormal and biinvariant the structure constants are totally
/// antisymmetric; `check` reports the residuals.
#[derive(Clone, Debug)]
pub struct LieAlgebra<S> {
    name: String,
    dim: usize,
    /// Flattened row-major in (i, j, k).
    c: Vec<S>,
}

/// Residuals from the structural diagnostics of an algebra.
#[derive(Clone, Copy, Debug)]
pub struct AlgebraDiagnostics<S> {
    pub max_antisymmetry: S,
    pub max_jacobi: S,
    pub max_biinvariance: S,
}

impl<S: Real> AlgebraDiagnostics<S> {
    pub fn passes(&self, tol: S) -> bool {
        self.max_antisymmetry < tol && self.max_jacobi < tol && self.max_biinvariance < tol
    }
}

impl<S: Real> LieAlgebra<S> {
    /// Validating constructor; rejects data violating antisymmetry, Jacobi or
    /// total antisymmetry beyond 1e-12.
    pub fn new(name: impl Into<String>, dim: usize, c: Vec<S>) -> Result<Self> {
        let a = Self::new_unchecked(name, dim, c)?;
        let diag = a.check();
        if !diag.passes(S::of(1e-12)) {
            return Err(Error::InvalidAlgebra(format!(
                "{}: residuals antisym={:e} jacobi={:e} biinv={:e}",
                a.name,
                diag.max_antisymmetry.to_f64_lossy(),
                diag.max_jacobi.to_f64_lossy(),
                diag.max_biinvariance.to_f64_lossy(),
            )));
        }
        Ok(a)
    }

    /// Constructor without structural validation, for diagnostics on
    /// deliberately perturbed data.
    pub fn new_unchecked(name: impl Into<String>, dim: usize, c: Vec<S>) -> Result<Self> {
        if c.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim * dim, got: c.len() });
        }
        Ok(LieAlgebra { name: name.into(), dim, c })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> S {
        self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn structure_constants(&self) -> &[S] {
        &self.c
    }

    /// `[x, y]` via the structure constants.
    pub fn bracket(&self, x: &[S], y: &[S]) -> Result<Vec<S>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if y.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: y.len() });
        }
        let d = self.dim;
        let mut out = vec![S::zero(); d];
        for i in 0..d {
            let xi = x[i];
            if xi == S::zero() {
                continue;
            }
            for j in 0..d {
                let xy = xi * y[j];
                if xy == S::zero() {
                    continue;
                }
                let base = (i * d + j) * d;
                for k in 0..d {
                    out[k] = out[k] + xy * self.c[base + k];
                }
            }
        }
        Ok(out)
    }

    /// Matrix of `ad_x : y -> [x, y]`.
    pub fn ad(&self, x: &[S]) -> Result<Mat<S>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        let d = self.dim;
        let mut m = Mat::zeros(d, d);
        for k in 0..d {
            for j in 0..d {
                let mut acc = S::zero();
                for i in 0..d {
                    acc = acc + x[i] * self.c(i, j, k);
                }
                m.set(k, j, acc);
            }
        }
        Ok(m)
    }

    /// `Ad_{exp(x)} = exp(ad_x)`; orthogonal w.r.t. Q since Q is biinvariant.
    pub fn adjoint_exp(&self, x: &[S]) -> Result<Mat<S>> {
        Ok(self.ad(x)?.expm())
    }

    /// Structural residuals: antisymmetry in (i, j), Jacobi, and total
    /// antisymmetry of c (equivalent to biinvariance of Q).
    pub fn check(&self) -> AlgebraDiagnostics<S> {
        let d = self.dim;
        let mut anti = S::zero();
        let mut biinv = S::zero();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    anti = anti.max((self.c(i, j, k) + self.c(j, i, k)).abs());
                    biinv = biinv.max((self.c(i, j, k) + self.c(i, k, j)).abs());
                }
            }
        }
        let mut jacobi = S::zero();
        for i in 0..d {
            for j in 0..d {
                for l in 0..d {
                    for k in 0..d {
                        let mut acc = S::zero();
                        for m in 0..d {
                            acc = acc
                                + self.c(i, j, m) * self.c(m, l, k)
                                + self.c(j, l, m) * self.c(m, i, k)
                                + self.c(l, i, m) * self.c(m, j, k);
                        }
                        jacobi = jacobi.max(acc.abs());
                    }
                }
            }
        }
        AlgebraDiagnostics { max_antisymmetry: anti, max_jacobi: jacobi, max_biinvariance: biinv }
    }

    /// Orthonormal basis of the center z(g) = ker(v -> ad_v).
    pub fn center(&self) -> Vec<Vec<S>> {
        let d = self.dim;
        // Row (j*d + k), column i holds c[i][j][k]; kernel vectors v satisfy
        // [v, e_j] = 0 for all j.
        let m = Mat::from_fn(d * d, d, |row, i| {
            let j = row / d;
            let k = row % d;
            self.c(i, j, k)
        });
        m.nullspace(S::of(1e-9))
    }

    /// Direct sum with Q extended block-diagonally.
    pub fn direct_sum(&self, other: &LieAlgebra<S>, name: impl Into<String>) -> LieAlgebra<S> {
        let d1 = self.dim;
        let d = d1 + other.dim;
        let mut c = vec![S::zero(); d * d * d];
        for i in 0..d1 {
            for j in 0..d1 {
                for k in 0..d1 {
                    c[(i * d + j) * d + k] = self.c(i, j, k);
                }
            }
        }
        for i in 0..other.dim {
            for j in 0..other.dim {
                for k in 0..other.dim {
                    c[((d1 + i) * d + (d1 + j)) * d + (d1 + k)] = other.c(i, j, k);
                }
            }
        }
        LieAlgebra { name: name.into(), dim: d, c }
    }
}

/// Ordered orthogonal blocks of the basis: block 0 is h (possibly empty), the
/// remaining blocks are m_1, ..., m_k. Prefix flags record which partial sums
/// m_0 + ... + m_i close under the bracket.
#[derive(Clone, Debug)]
pub struct BlockDecomposition<S> {
    algebra: Arc<LieAlgebra<S>>,
    blocks: Vec<Vec<usize>>,
    prefix_subalgebra: Vec<bool>,
}

impl<S: Real> BlockDecomposition<S> {
    pub fn new(algebra: Arc<LieAlgebra<S>>, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let dim = algebra.dim();
        let tol = S::of(1e-12);
        let mut seen = vec![false; dim];
        for b in &blocks {
            for &i in b {
                if i >= dim {
                    return Err(Error::InvalidDecomposition(format!(
                        "index {i} out of range for dim {dim}"
                    )));
                }
                if seen[i] {
                    return Err(Error::InvalidDecomposition(format!("index {i} repeated")));
                }
                seen[i] = true;
            }
        }
        if blocks.is_empty() {
            return Err(Error::InvalidDecomposition("no blocks".into()));
        }
        let dec = BlockDecomposition { algebra, blocks, prefix_subalgebra: Vec::new() };
        // h must be a subalgebra.
        if !dec.span_closed(&dec.blocks[0], tol) {
            return Err(Error::InvalidDecomposition("block 0 (h) is not a subalgebra".into()));
        }
        // Ad(H)-invariance proxy: [h, m_i] inside m_i.
        for bi in 1..dec.blocks.len() {
            for &hidx in &dec.blocks[0] {
                for &mj in &dec.blocks[bi] {
                    let mut eh = vec![S::zero(); dim];
                    eh[hidx] = S::one();
                    let mut em = vec![S::zero(); dim];
                    em[mj] = S::one();
                    let br = dec.algebra.bracket(&eh, &em).expect("basis bracket");
                    for (k, &v) in br.iter().enumerate() {
                        if !dec.blocks[bi].contains(&k) && v.abs() > tol {
                            return Err(Error::InvalidDecomposition(format!(
                                "[h, m_{bi}] leaks outside m_{bi} at component {k}"
                            )));
                        }
                    }
                }
            }
        }
        let mut dec = dec;
        dec.prefix_subalgebra = (0..dec.blocks.len())
            .map(|i| {
                let union: Vec<usize> =
                    dec.blocks[..=i].iter().flat_map(|b| b.iter().copied()).collect();
                dec.span_closed(&union, tol)
            })
            .collect();
        Ok(dec)
    }

    fn span_closed(&self, indices: &[usize], tol: S) -> bool {
        let dim = self.algebra.dim();
        for &i in indices {
            for &j in indices {
                let mut ei = vec![S::zero(); dim];
                ei[i] = S::one();
                let mut ej = vec![S::zero(); dim];
                ej[j] = S::one();
                let br = self.algebra.bracket(&ei, &ej).expect("basis bracket");
                for (k, &v) in br.iter().enumerate() {
                    if !indices.contains(&k) && v.abs() > tol {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra<S>> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Number of m-blocks (excluding h).
    pub fn num_m_blocks(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    pub fn h_indices(&self) -> &[usize] {
        &self.blocks[0]
    }

    pub fn m_indices(&self) -> Vec<usize> {
        self.blocks[1..].iter().flat_map(|b| b.iter().copied()).collect()
    }

    pub fn dim_m(&self) -> usize {
        self.blocks[1..].iter().map(|b| b.len()).sum()
    }

    pub fn prefix_is_subalgebra(&self, i: usize) -> bool {
        self.prefix_subalgebra[i]
    }

    /// Projection onto the span of a block (coordinates are Q-orthonormal).
    pub fn project_block(&self, v: &[S], block: usize) -> Vec<S> {
        let mut out = vec![S::zero(); v.len()];
        for &i in &self.blocks[block] {
            out[i] = v[i];
        }
        out
    }

    pub fn project_h(&self, v: &[S]) -> Vec<S> {
        self.project_block(v, 0)
    }

    /// Projection onto m = m_1 + ... + m_k.
    pub fn project_m(&self, v: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); v.len()];
        for b in &self.blocks[1..] {
            for &i in b {
                out[i] = v[i];
            }
        }
        out
    }

    /// Projection onto the prefix k_i = m_0 + ... + m_i.
    pub fn project_prefix(&self, v: &[S], upto: usize) -> Vec<S> {
        let mut out = vec![S::zero(); v.len()];
        for b in &self.blocks[..=upto] {
            for &i in b {
                out[i] = v[i];
            }
        }
        out
    }

    /// Largest |v_i| over indices not covered by any block.
    pub fn residual_outside(&self, v: &[S]) -> S {
        let mut covered = vec![false; v.len()];
        for b in &self.blocks {
            for &i in b {
                covered[i] = true;
            }
        }
        v.iter()
            .enumerate()
            .filter(|(i, _)| !covered[*i])
            .fold(S::zero(), |m, (_, &x)| m.max(x.abs()))
    }

    /// Apply the blockwise endomorphism with eigenvalue `vals[i]` on m_{i+1}
    /// (and `h_weight` on h) to v.
    pub fn apply_blockwise(&self, v: &[S], h_weight: S, vals: &[S]) -> Vec<S> {
        assert_eq!(vals.len(), self.num_m_blocks());
        let mut out = vec![S::zero(); v.len()];
        for &i in &self.blocks[0] {
            out[i] = h_weight * v[i];
        }
        for (bi, b) in self.blocks[1..].iter().enumerate() {
            for &i in b {
                out[i] = vals[bi] * v[i];
            }
        }
        out
    }
}

/// Biquotient data: h embedded in g + g as pairs (u_a, w_a), acting by
/// (h_1, h_2) . g = h_1 g h_2^{-1}.
#[derive(Clone, Debug)]
pub struct BiquotientSpec<S> {
    algebra: Arc<LieAlgebra<S>>,
    pairs: Vec<(Vec<S>, Vec<S>)>,
    center: Vec<Vec<S>>,
}

impl<S: Real> BiquotientSpec<S> {
    pub fn new(algebra: Arc<LieAlgebra<S>>, pairs: Vec<(Vec<S>, Vec<S>)>) -> Result<Self> {
        let dim = algebra.dim();
        let tol = S::of(1e-12);
        for (u, w) in &pairs {
            if u.len() != dim || w.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: u.len().max(w.len()) });
            }
        }
        // The pairs must span a bracket-closed subalgebra of g + g
        // (componentwise brackets).
        let stacked: Vec<Vec<S>> = pairs
            .iter()
            .map(|(u, w)| {
                let mut v = u.clone();
                v.extend_from_slice(w);
                v
            })
            .collect();
        let basis = linalg::orthonormalize(&stacked, S::of(1e-9));
        for (u1, w1) in &pairs {
            for (u2, w2) in &pairs {
                let bu = algebra.bracket(u1, u2)?;
                let bw = algebra.bracket(w1, w2)?;
                let mut v = bu;
                v.extend_from_slice(&bw);
                let mut res = v.clone();
                for b in &basis {
                    let p = linalg::dot(&res, b);
                    linalg::axpy(-p, b, &mut res);
                }
                let leak = linalg::norm(&res);
                if leak > tol * (S::one() + linalg::norm(&v)) {
                    return Err(Error::InvalidAlgebra(format!(
                        "h-pairs do not close under the componentwise bracket (residual {:e})",
                        leak.to_f64_lossy()
                    )));
                }
            }
        }
        let center = algebra.center();
        Ok(BiquotientSpec { algebra, pairs, center })
    }

    /// One-sided quotient L\G: pairs (l_a, 0).
    pub fn one_sided(algebra: Arc<LieAlgebra<S>>, l_basis: Vec<Vec<S>>) -> Result<Self> {
        let dim = algebra.dim();
        let pairs = l_basis.into_iter().map(|l| (l, vec![S::zero(); dim])).collect();
        Self::new(algebra, pairs)
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra<S>> {
        &self.algebra
    }

    pub fn pairs(&self) -> &[(Vec<S>, Vec<S>)] {
        &self.pairs
    }

    pub fn dim_h(&self) -> usize {
        self.pairs.len()
    }

    pub fn center_basis(&self) -> &[Vec<S>] {
        &self.center
    }
}

/// JSON document form: `{name, dim, c, blocks}` with `c` flat in row-major
/// (i, j, k) order. Numbers may be given as decimal strings.
pub fn algebra_to_json<S: Real>(
    algebra: &LieAlgebra<S>,
    blocks: Option<&BlockDecomposition<S>>,
) -> serde_json::Value {
    let c: Vec<serde_json::Value> = algebra
        .structure_constants()
        .iter()
        .map(|v| {
            serde_json::Number::from_f64(v.to_f64_lossy())
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null)
        })
        .collect();
    let blocks_json: Vec<serde_json::Value> = blocks
        .map(|d| {
            (0..d.num_blocks())
                .map(|i| {
                    serde_json::Value::Array(
                        d.block(i).iter().map(|&x| serde_json::Value::from(x)).collect(),
                    )
                })
                .collect()
        })
        .unwrap_or_default();
    serde_json::json!({
        "name": algebra.name(),
        "dim": algebra.dim(),
        "c": c,
        "blocks": blocks_json,
    })
}

pub fn algebra_from_json<S: Real>(
    doc: &serde_json::Value,
) -> Result<(Arc<LieAlgebra<S>>, Option<BlockDecomposition<S>>)> {
    let name = doc
        .get("name")
        .and_then(|v| v.as_str())
        .ok_or_else(|| Error::Serialization("missing `name`".into()))?;
    let dim = doc
        .get("dim")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::Serialization("missing `dim`".into()))? as usize;
    let c_arr = doc
        .get("c")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::Serialization("missing `c`".into()))?;
    let mut c = Vec::with_capacity(c_arr.len());
    for v in c_arr {
        let s = match v {
            serde_json::Value::Number(n) => n
                .as_f64()
                .map(S::of)
                .ok_or_else(|| Error::Serialization("non-finite constant".into()))?,
            serde_json::Value::String(s) => S::parse_decimal(s)
                .ok_or_else(|| Error::Serialization(format!("bad decimal `{s}`")))?,
            _ => return Err(Error::Serialization("constants must be numbers or strings".into())),
        };
        c.push(s);
    }
    let algebra = Arc::new(LieAlgebra::new(name, dim, c)?);
    let blocks = match doc.get("blocks").and_then(|v| v.as_array()) {
        Some(arr) if !arr.is_empty() => {
            let mut blocks = Vec::new();
            for b in arr {
                let idx = b
                    .as_array()
                    .ok_or_else(|| Error::Serialization("blocks must be arrays".into()))?
                    .iter()
                    .map(|v| {
                        v.as_u64()
                            .map(|x| x as usize)
                            .ok_or_else(|| Error::Serialization("block index".into()))
                    })
                    .collect::<Result<Vec<usize>>>()?;
                blocks.push(idx);
            }
            Some(BlockDecomposition::new(algebra.clone(), blocks)?)
        }
        _ => None,
    };
    Ok((algebra, blocks))
}
