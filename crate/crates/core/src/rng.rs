//! Seeded deterministic random numbers (splitmix64). Hand-rolled so that
//! sampled sweeps are bit-reproducible across platforms and releases, which
//! the report determinism contract requires.

use crate::scalar::Real;

#[derive(Clone, Debug)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [0, 1) as a generic scalar.
    pub fn unit<S: Real>(&mut self) -> S {
        S::of(self.next_f64())
    }

    /// Uniform in [-1, 1).
    pub fn symmetric<S: Real>(&mut self) -> S {
        S::of(2.0 * self.next_f64() - 1.0)
    }

    /// Uniform in [lo, hi).
    pub fn range<S: Real>(&mut self, lo: S, hi: S) -> S {
        lo + (hi - lo) * self.unit::<S>()
    }

    /// Random vector with entries uniform in [-1, 1).
    pub fn vector<S: Real>(&mut self, dim: usize) -> Vec<S> {
        (0..dim).map(|_| self.symmetric()).collect()
    }

    /// Random unit vector (rejection-free: normalize a cube sample, falling
    /// back to a basis vector in the measure-zero degenerate case).
    pub fn unit_vector<S: Real>(&mut self, dim: usize) -> Vec<S> {
        let v = self.vector::<S>(dim);
        let n = crate::linalg::norm(&v);
        if n > S::of(1e-9) {
            crate::linalg::scale_vec(S::one() / n, &v)
        } else {
            let mut e = vec![S::zero(); dim];
            e[0] = S::one();
            e
        }
    }

    /// Independent substream, for per-task forking with stable assignment.
    pub fn fork(&mut self) -> Rng {
        Rng::new(self.next_u64())
    }
}
