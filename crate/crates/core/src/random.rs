//! Seedable random states, hermitian matrices and Haar unitaries.
//!
//! Everything takes an explicit `Rng` so sweeps stay reproducible; the
//! CLI and the test suites use `ChaCha12Rng` seeded per trial.

use nalgebra::DMatrix;
use rand::Rng;

use crate::linalg::{ComplexOperator, ComplexVector, C64};

/// Standard complex Gaussian sample (Box-Muller).
pub fn random_complex<R: Rng>(rng: &mut R) -> C64 {
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random();
    let r = (-2.0 * u1.ln()).sqrt();
    let th = 2.0 * std::f64::consts::PI * u2;
    C64::new(r * th.cos(), r * th.sin()) / std::f64::consts::SQRT_2
}

/// Haar-random unitary via QR of a complex Ginibre matrix.
pub fn haar_unitary<R: Rng>(dim: usize, rng: &mut R) -> ComplexOperator {
    let g = DMatrix::from_fn(dim, dim, |_, _| random_complex(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    // fix the gauge so the distribution is Haar: normalize R's diagonal phases
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::ONE };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    ComplexOperator::square(q, vec![dim]).expect("square by construction")
}

/// Random normalized pure state of a single factor.
pub fn random_state<R: Rng>(dim: usize, rng: &mut R) -> ComplexVector {
    random_state_dims(&[dim], rng)
}

/// Random normalized pure state with the given factor dimensions.
pub fn random_state_dims<R: Rng>(dims: &[usize], rng: &mut R) -> ComplexVector {
    let len: usize = dims.iter().product();
    let amps: Vec<C64> = (0..len).map(|_| random_complex(rng)).collect();
    ComplexVector::new(amps, dims.to_vec())
        .expect("consistent dims")
        .normalized()
        .expect("nonzero with probability one")
}

/// Random hermitian matrix (GUE-like, entries O(1)).
pub fn random_hermitian<R: Rng>(dim: usize, rng: &mut R) -> ComplexOperator {
    let g = DMatrix::from_fn(dim, dim, |_, _| random_complex(rng));
    let h = (&g + g.adjoint()).scale(0.5);
    ComplexOperator::square(h, vec![dim]).expect("square by construction")
}

/// Random probability vector of the given length (flat Dirichlet).
pub fn random_weights<R: Rng>(len: usize, rng: &mut R) -> Vec<f64> {
    let mut w: Vec<f64> = (0..len).map(|_| -(rng.random::<f64>().max(1e-300)).ln()).collect();
    let s: f64 = w.iter().sum();
    for x in &mut w {
        *x /= s;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        for dim in [2usize, 3, 4, 8] {
            assert!(haar_unitary(dim, &mut rng).is_unitary());
        }
    }

    #[test]
    fn random_state_normalized_and_deterministic() {
        let mut a = ChaCha12Rng::seed_from_u64(42);
        let mut b = ChaCha12Rng::seed_from_u64(42);
        let va = random_state(5, &mut a);
        let vb = random_state(5, &mut b);
        assert!(va.is_normalized());
        assert_eq!(va.data(), vb.data());
    }

    #[test]
    fn weights_sum_to_one() {
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let w = random_weights(6, &mut rng);
        assert!((w.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        assert!(w.iter().all(|&x| x >= 0.0));
    }
}
