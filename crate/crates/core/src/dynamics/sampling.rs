use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::fock::SparseKet;
use crate::generators::{Generator, LieBasis};
use crate::orbit::fock_basis_upto;

fn gaussian_ket(modes: usize, cutoff: u32, rng: &mut ChaCha8Rng) -> Result<SparseKet> {
    if modes == 0 {
        return Err(Error::NoModes);
    }
    let terms: Vec<_> = fock_basis_upto(modes, cutoff)
        .into_iter()
        .map(|occ| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            (occ, Complex64::new(re, im))
        })
        .collect();
    SparseKet::from_terms(modes, terms)
}

/// A state on the unit sphere of the span of Fock states with at most `cutoff` photons, drawn
/// from independent standard complex Gaussian amplitudes.
pub fn sample_sphere_state(modes: usize, cutoff: u32, seed: u64) -> Result<SparseKet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gaussian_ket(modes, cutoff, &mut rng)?.normalize()
}

/// `normalize(ψ + ε χ)` with `χ` a sphere sample on the same truncation.
pub fn perturb_state(psi: &SparseKet, epsilon: f64, modes: usize, cutoff: u32, seed: u64) -> Result<SparseKet> {
    if psi.modes() != modes {
        return Err(Error::ModeMismatch { left: psi.modes(), right: modes });
    }
    if epsilon == 0.0 {
        return Ok(psi.clone());
    }
    let chi = sample_sphere_state(modes, cutoff, seed)?;
    psi.add_scaled(Complex64::new(epsilon, 0.0), &chi)?.normalize()
}

/// `factors` generators drawn uniformly from a Lie basis with times uniform on `(-1, 1)`.
pub fn random_word(basis: &LieBasis, factors: usize, seed: u64) -> Vec<(Generator, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..factors)
        .map(|_| {
            let g = basis.elements()[rng.random_range(0..basis.len())];
            (g, rng.random_range(-1.0..1.0))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::GroupKind;

    #[test]
    fn samples_are_normalized_and_reproducible() {
        let a = sample_sphere_state(2, 2, 7).unwrap();
        assert!((a.norm() - 1.0).abs() < 1e-12);
        assert_eq!(a.len(), 6);
        assert_eq!(a, sample_sphere_state(2, 2, 7).unwrap());
        let b = sample_sphere_state(2, 2, 8).unwrap();
        assert!(a.inner(&b).unwrap().norm() < 0.99);
    }

    #[test]
    fn zero_perturbation() {
        let psi = SparseKet::basis([1, 0]).unwrap();
        assert_eq!(perturb_state(&psi, 0.0, 2, 2, 3).unwrap(), psi);
        let moved = perturb_state(&psi, 1e-2, 2, 2, 3).unwrap();
        assert!((moved.norm() - 1.0).abs() < 1e-12);
        assert!(moved.len() > 1);
    }

    #[test]
    fn words_are_seeded() {
        let basis = LieBasis::new(GroupKind::Plo, 3).unwrap();
        let w = random_word(&basis, 5, 11);
        assert_eq!(w.len(), 5);
        assert_eq!(w, random_word(&basis, 5, 11));
        assert!(w.iter().all(|(_, t)| (-1.0..1.0).contains(t)));
    }
}
