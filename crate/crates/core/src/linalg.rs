//! Dense linear algebra sized for Lie algebras of dimension <= 15: row-major
//! matrices, Gaussian elimination, cyclic Jacobi eigensolver, singular-value
//! nullspaces and a scaling-and-squaring matrix exponential.

use crate::error::Error;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Real> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Mat { rows: r, cols: c, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> S {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }

    pub fn transpose(&self) -> Mat<S> {
        Mat::from_fn(self.cols, self.rows, |i, j| self.at(j, i))
    }

    pub fn matmul(&self, other: &Mat<S>) -> Mat<S> {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == S::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.at(i, j) + a * other.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "mul_vec shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for j in 0..self.cols {
                    acc = acc + self.at(i, j) * v[j];
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Mat<S>) -> Mat<S> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat<S>) -> Mat<S> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: S) -> Mat<S> {
        let data = self.data.iter().map(|&a| a * s).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn max_abs(&self) -> S {
        self.data.iter().fold(S::zero(), |m, &v| m.max(v.abs()))
    }

    /// Maximum absolute row sum (operator 1-norm on rows).
    pub fn norm_inf(&self) -> S {
        (0..self.rows)
            .map(|i| self.row(i).iter().fold(S::zero(), |a, &v| a + v.abs()))
            .fold(S::zero(), |m, v| m.max(v))
    }

    pub fn is_symmetric(&self, tol: S) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if (self.at(i, j) - self.at(j, i)).abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Solve `self * x = rhs` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, rhs: &[S]) -> Result<Vec<S>, Error> {
        let n = self.rows;
        if self.cols != n || rhs.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: rhs.len() });
        }
        let mut a = self.clone();
        let mut b = rhs.to_vec();
        for col in 0..n {
            let mut piv = col;
            let mut best = a.at(col, col).abs();
            for r in (col + 1)..n {
                let v = a.at(r, col).abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best == S::zero() {
                return Err(Error::SingularMatrix);
            }
            if piv != col {
                for j in 0..n {
                    let (u, v) = (a.at(col, j), a.at(piv, j));
                    a.set(col, j, v);
                    a.set(piv, j, u);
                }
                b.swap(col, piv);
            }
            let d = a.at(col, col);
            for r in (col + 1)..n {
                let factor = a.at(r, col) / d;
                if factor == S::zero() {
                    continue;
                }
                for j in col..n {
                    let v = a.at(r, j) - factor * a.at(col, j);
                    a.set(r, j, v);
                }
                b[r] = b[r] - factor * b[col];
            }
        }
        let mut x = vec![S::zero(); n];
        for i in (0..n).rev() {
            let mut acc = b[i];
            for j in (i + 1)..n {
                acc = acc - a.at(i, j) * x[j];
            }
            x[i] = acc / a.at(i, i);
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Mat<S>, Error> {
        let n = self.rows;
        let mut out = Mat::zeros(n, n);
        for j in 0..n {
            let mut e = vec![S::zero(); n];
            e[j] = S::one();
            let col = self.solve(&e)?;
            for i in 0..n {
                out.set(i, j, col[i]);
            }
        }
        Ok(out)
    }

    /// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
    /// Returns `(eigenvalues, eigenvectors)` with eigenvectors as columns,
    /// sorted by ascending eigenvalue.
    pub fn sym_eigen(&self) -> (Vec<S>, Mat<S>) {
        let n = self.rows;
        assert_eq!(self.rows, self.cols, "sym_eigen needs a square matrix");
        let mut a = self.clone();
        let mut v = Mat::identity(n);
        let half = S::of(0.5);
        for _sweep in 0..60 {
            let mut off = S::zero();
            for p in 0..n {
                for q in (p + 1)..n {
                    off = off + a.at(p, q) * a.at(p, q);
                }
            }
            if off <= S::epsilon() * S::epsilon() * S::from_usize(n * n).unwrap() {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.at(p, q);
                    if apq.abs() <= S::min_positive_value() {
                        continue;
                    }
                    let theta = half * (a.at(q, q) - a.at(p, p)) / apq;
                    // tan of the rotation angle, stable branch.
                    let t = {
                        let sgn = if theta >= S::zero() { S::one() } else { -S::one() };
                        sgn / (theta.abs() + (theta * theta + S::one()).sqrt())
                    };
                    let c = S::one() / (t * t + S::one()).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a.at(k, p);
                        let akq = a.at(k, q);
                        a.set(k, p, c * akp - s * akq);
                        a.set(k, q, s * akp + c * akq);
                    }
                    for k in 0..n {
                        let apk = a.at(p, k);
                        let aqk = a.at(q, k);
                        a.set(p, k, c * apk - s * aqk);
                        a.set(q, k, s * apk + c * aqk);
                    }
                    for k in 0..n {
                        let vkp = v.at(k, p);
                        let vkq = v.at(k, q);
                        v.set(k, p, c * vkp - s * vkq);
                        v.set(k, q, s * vkp + c * vkq);
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a.at(i, i).partial_cmp(&a.at(j, j)).unwrap());
        let vals = order.iter().map(|&i| a.at(i, i)).collect();
        let vecs = Mat::from_fn(n, n, |i, j| v.at(i, order[j]));
        (vals, vecs)
    }

    /// Orthonormal basis of the kernel. Singular values below
    /// `tol * sigma_max` count as zero. Works through the Gram matrix, so a
    /// machine-epsilon floor shields exact kernels from the squared
    /// conditioning of the eigenvalues.
    pub fn nullspace(&self, tol: S) -> Vec<Vec<S>> {
        let n = self.cols;
        let gram = self.transpose().matmul(self);
        let (vals, vecs) = gram.sym_eigen();
        let lambda_max = vals.iter().fold(S::zero(), |m, &v| m.max(v));
        let floor = S::epsilon() * S::from_usize(64 * n.max(1)).unwrap();
        let cutoff = lambda_max * (tol * tol).max(floor);
        let mut basis = Vec::new();
        for (j, &l) in vals.iter().enumerate() {
            if l <= cutoff {
                basis.push(vecs.col(j));
            }
        }
        basis
    }

    pub fn rank(&self, tol: S) -> usize {
        self.cols - self.nullspace(tol).len()
    }

    /// Matrix exponential by scaling and squaring with a Taylor series.
    pub fn expm(&self) -> Mat<S> {
        let n = self.rows;
        assert_eq!(self.rows, self.cols, "expm needs a square matrix");
        let norm = self.norm_inf();
        let mut squarings = 0u32;
        let mut scale = S::one();
        let quarter = S::of(0.25);
        while norm * scale > quarter && squarings < 64 {
            scale = scale * S::of(0.5);
            squarings += 1;
        }
        let a = self.scale(scale);
        let mut result = Mat::identity(n);
        let mut term = Mat::identity(n);
        for k in 1..=30 {
            term = term.matmul(&a).scale(S::one() / S::from_usize(k).unwrap());
            result = result.add(&term);
            if term.max_abs() < S::epsilon() * S::of(1e-3) {
                break;
            }
        }
        for _ in 0..squarings {
            result = result.matmul(&result);
        }
        result
    }
}

pub fn dot<S: Real>(x: &[S], y: &[S]) -> S {
    x.iter().zip(y).fold(S::zero(), |a, (&u, &v)| a + u * v)
}

pub fn norm<S: Real>(x: &[S]) -> S {
    dot(x, x).sqrt()
}

pub fn axpy<S: Real>(alpha: S, x: &[S], y: &mut [S]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = *yi + alpha * xi;
    }
}

pub fn scale_vec<S: Real>(alpha: S, x: &[S]) -> Vec<S> {
    x.iter().map(|&v| alpha * v).collect()
}

pub fn add_vec<S: Real>(x: &[S], y: &[S]) -> Vec<S> {
    x.iter().zip(y).map(|(&a, &b)| a + b).collect()
}

pub fn sub_vec<S: Real>(x: &[S], y: &[S]) -> Vec<S> {
    x.iter().zip(y).map(|(&a, &b)| a - b).collect()
}

/// Modified Gram-Schmidt; vectors whose residual norm falls below `tol`
/// (relative to their input norm) are dropped.
pub fn orthonormalize<S: Real>(vectors: &[Vec<S>], tol: S) -> Vec<Vec<S>> {
    let mut basis: Vec<Vec<S>> = Vec::new();
    for v in vectors {
        let scale = norm(v);
        if scale == S::zero() {
            continue;
        }
        let mut w = v.clone();
        for b in &basis {
            let proj = dot(&w, b);
            axpy(-proj, b, &mut w);
        }
        let res = norm(&w);
        if res > tol * scale {
            basis.push(scale_vec(S::one() / res, &w));
        }
    }
    basis
}

/// Orthonormal basis of the orthogonal complement of `span(vectors)` in R^dim.
pub fn orthonormal_complement<S: Real>(vectors: &[Vec<S>], dim: usize, tol: S) -> Vec<Vec<S>> {
    if vectors.is_empty() {
        return (0..dim)
            .map(|i| {
                let mut e = vec![S::zero(); dim];
                e[i] = S::one();
                e
            })
            .collect();
    }
    let m = Mat::from_rows(vectors);
    assert_eq!(m.cols(), dim);
    m.nullspace(tol)
}

/// Frobenius distance between the orthogonal projectors onto two subspaces,
/// each given by an orthonormal basis. Zero iff the subspaces coincide.
pub fn projector_distance<S: Real>(a: &[Vec<S>], b: &[Vec<S>], dim: usize) -> S {
    let proj = |basis: &[Vec<S>]| -> Mat<S> {
        let mut p = Mat::zeros(dim, dim);
        for v in basis {
            for i in 0..dim {
                for j in 0..dim {
                    let val = p.at(i, j) + v[i] * v[j];
                    p.set(i, j, val);
                }
            }
        }
        p
    };
    let d = proj(a).sub(&proj(b));
    let mut acc = S::zero();
    for i in 0..dim {
        for j in 0..dim {
            acc = acc + d.at(i, j) * d.at(i, j);
        }
    }
    acc.sqrt()
}
