//! Seeded random test data.
//!
//! Every random object is drawn from a `ChaCha8Rng` seeded with
//! `seed_from_u64(seed)`; complex entries have independent standard normal
//! real and imaginary parts.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{Matrix2D, Signal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_signal_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Signal {
    Signal::from_fn(n, |_| complex_normal(rng))
}

pub fn random_matrix_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix2D {
    Matrix2D::from_fn(n, |_, _| complex_normal(rng))
}

pub fn random_signal(n: usize, seed: u64) -> Signal {
    random_signal_with(n, &mut rng(seed))
}

pub fn random_matrix(n: usize, seed: u64) -> Matrix2D {
    random_matrix_with(n, &mut rng(seed))
}
