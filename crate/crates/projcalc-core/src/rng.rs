//! Deterministic random instance generation.
//!
//! xoshiro256++ with SplitMix64 seeding. The generator is specified bit
//! for bit so that a seed names the same test instance in every build;
//! reproducibility of instances is part of the crate's contract.

use alloc::vec::Vec;

use crate::matrix::{DenseMatrix, Scalar};

/// xoshiro256++ stream seeded from a single 64-bit value.
#[derive(Debug, Clone)]
pub struct Rng {
    state: [u64; 4],
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        // SplitMix64 expansion; it cannot produce the all-zero state.
        let mut sm = seed;
        let mut state = [0u64; 4];
        for word in state.iter_mut() {
            sm = sm.wrapping_add(0x9E3779B97F4A7C15);
            let mut z = sm;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
            *word = z ^ (z >> 31);
        }
        Rng { state }
    }

    pub fn next_u64(&mut self) -> u64 {
        let [s0, s1, s2, s3] = self.state;
        let result = s0.wrapping_add(s3).rotate_left(23).wrapping_add(s0);
        let t = s1 << 17;
        let mut s2 = s2 ^ s0;
        let mut s3 = s3 ^ s1;
        let s1 = s1 ^ s2;
        let s0 = s0 ^ s3;
        s2 ^= t;
        s3 = s3.rotate_left(45);
        self.state = [s0, s1, s2, s3];
        result
    }

    /// Uniform in (0, 1]; never returns 0, so it is safe under `ln`.
    pub fn uniform(&mut self) -> f64 {
        (((self.next_u64() >> 11) + 1) as f64) * (1.0 / 9007199254740992.0)
    }

    /// Uniform in [lo, hi).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * (((self.next_u64() >> 11) as f64) * (1.0 / 9007199254740992.0))
    }

    /// Uniform integer in [0, bound) by rejection, unbiased.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }

    /// Standard normal via Box-Muller.
    pub fn gaussian(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * core::f64::consts::PI * u2)
    }

    /// Standard complex Gaussian (independent real and imaginary parts).
    pub fn gaussian_complex(&mut self) -> Scalar {
        Scalar::new(self.gaussian(), self.gaussian())
    }
}

/// Haar-flavored random unitary: seeded complex Gaussian matrix pushed
/// through modified Gram-Schmidt, twice for numerical orthogonality.
pub fn random_unitary(n: usize, seed: u64) -> DenseMatrix {
    assert!(n >= 1, "dimension must be positive");
    let mut rng = Rng::new(seed);
    let mut cols: Vec<Vec<Scalar>> = (0..n)
        .map(|_| (0..n).map(|_| rng.gaussian_complex()).collect())
        .collect();
    for pass in 0..2 {
        for j in 0..n {
            for k in 0..j {
                let (head, tail) = cols.split_at_mut(j);
                let ck = &head[k];
                let cj = &mut tail[0];
                let proj: Scalar = ck.iter().zip(cj.iter()).map(|(a, b)| a.conj() * *b).sum();
                for (zj, zk) in cj.iter_mut().zip(ck.iter()) {
                    *zj -= proj * *zk;
                }
            }
            let norm = libm::sqrt(cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>());
            // A Gaussian column is dependent on its predecessors with
            // probability zero; resample defensively if it happens.
            if norm < 1e-12 {
                assert!(pass == 0, "orthogonalized column collapsed");
                for z in cols[j].iter_mut() {
                    *z = rng.gaussian_complex();
                }
                continue;
            }
            let inv = 1.0 / norm;
            for z in cols[j].iter_mut() {
                *z *= inv;
            }
        }
    }
    DenseMatrix::from_columns(n, &cols).expect("columns are finite by construction")
}
