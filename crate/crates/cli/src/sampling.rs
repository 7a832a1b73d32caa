//! Seeded random test objects.

use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::PI;
use toeplab_core::inner_functions::InnerSpec;

/// Uniform in the square `[-1, 1]²`.
pub fn complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn unimodular<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI))
}

/// Uniform angle, modulus uniform in `[0, r_max]`.
pub fn disk_point<R: Rng>(rng: &mut R, r_max: f64) -> Complex64 {
    Complex64::from_polar(rng.random_range(0.0..r_max), rng.random_range(0.0..2.0 * PI))
}

pub fn coefficients<R: Rng>(rng: &mut R, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| complex(rng)).collect()
}

/// Finite Blaschke product with `1..=max_zeros` zeros of modulus at most `r_max`.
pub fn blaschke<R: Rng>(rng: &mut R, max_zeros: usize, r_max: f64) -> InnerSpec {
    let n = rng.random_range(1..=max_zeros);
    let zeros: Vec<Complex64> = (0..n).map(|_| disk_point(rng, r_max)).collect();
    InnerSpec::blaschke(&zeros)
}

/// Blaschke product with exactly `n` zeros.
pub fn blaschke_exact<R: Rng>(rng: &mut R, n: usize, r_max: f64) -> InnerSpec {
    let zeros: Vec<Complex64> = (0..n).map(|_| disk_point(rng, r_max)).collect();
    InnerSpec::blaschke(&zeros)
}
