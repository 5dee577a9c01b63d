//! Gram matrices of the infinitesimal group action.
//!
//! The primary constructions apply each generator once and take the `d(d+1)/2` real inner
//! products. The expectation-value and trace forms are kept as independent cross-checks.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{DensityOperator, SparseKet, SparseOperator};
use crate::generators::{apply_generator, apply_left, commutator_with_density, GroupKind, LieBasis};
use crate::linalg::symmetric_eigenvalues;

use super::PictureKind;

/// Normalization slack accepted for ket inputs.
pub const NORM_TOL: f64 = 1e-10;
/// Symmetry slack for constructed Gram matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Smallest eigenvalue may dip to `-PSD_FLOOR * max(1, λ_max)`.
pub const PSD_FLOOR: f64 = 1e-9;

/// Real symmetric `d × d` matrix of generator correlations for one state.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    basis: LieBasis,
    picture: PictureKind,
    values: Vec<f64>,
}

impl GramMatrix {
    pub(crate) fn from_values(basis: LieBasis, picture: PictureKind, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), basis.len() * basis.len());
        Self { basis, picture, values }
    }

    pub fn group(&self) -> GroupKind {
        self.basis.group()
    }

    pub fn picture(&self) -> PictureKind {
        self.picture
    }

    pub fn basis(&self) -> &LieBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.dim() + j]
    }

    /// Row-major entries.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.values[i * d..(i + 1) * d]
    }

    pub fn symmetry_residual(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i + 1..d {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Largest entrywise difference to another matrix of the same size.
    pub fn max_abs_diff(&self, other: &GramMatrix) -> f64 {
        assert_eq!(self.dim(), other.dim(), "Gram matrices of different size");
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        symmetric_eigenvalues(self.dim(), &self.values)
    }

    /// Checks symmetry and positive semidefiniteness within the module tolerances.
    pub fn check_invariants(&self) -> bool {
        if self.symmetry_residual() > SYMMETRY_TOL {
            return false;
        }
        let eig = self.eigenvalues();
        let (max, min) = (eig.first().copied().unwrap_or(0.0), eig.last().copied().unwrap_or(0.0));
        min >= -PSD_FLOOR * max.max(1.0)
    }
}

fn check_normalized(ket: &SparseKet) -> Result<()> {
    let norm = ket.norm();
    if !((norm - 1.0).abs() <= NORM_TOL) {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

/// Symmetric matrix with `[i][j] = f(i, j)` evaluated on the upper triangle.
fn symmetric_from(d: usize, mut f: impl FnMut(usize, usize) -> Result<f64>) -> Result<Vec<f64>> {
    let mut values = vec![0.0; d * d];
    for i in 0..d {
        for j in i..d {
            let v = f(i, j)?;
            values[i * d + j] = v;
            values[j * d + i] = v;
        }
    }
    Ok(values)
}

/// `H_I |ψ⟩` for every basis element.
pub fn tangent_vectors(basis: &LieBasis, ket: &SparseKet) -> Result<Vec<SparseKet>> {
    basis.iter().map(|&g| apply_generator(g, ket)).collect()
}

/// `E_ψ(H_I) = ⟨ψ|H_I|ψ⟩` for every basis element.
pub fn expectation_vector(group: GroupKind, ket: &SparseKet) -> Result<Vec<f64>> {
    let basis = LieBasis::new(group, ket.modes())?;
    tangent_vectors(&basis, ket)?.iter().map(|v| ket.real_inner(v)).collect()
}

/// `[Gram]_{IJ} = Re⟨H_I ψ | H_J ψ⟩`.
pub fn gram_ket(group: GroupKind, ket: &SparseKet) -> Result<GramMatrix> {
    check_normalized(ket)?;
    let basis = LieBasis::new(group, ket.modes())?;
    let vecs = tangent_vectors(&basis, ket)?;
    let values = symmetric_from(basis.len(), |i, j| vecs[i].real_inner(&vecs[j]))?;
    Ok(GramMatrix::from_values(basis, PictureKind::Ket, values))
}

/// `[Gram]_{IJ} = 2 Cov_ψ(H_I, H_J)`, built from the centered vectors `(H_I - E_ψ(H_I)) ψ`.
pub fn gram_ketbra(group: GroupKind, ket: &SparseKet) -> Result<GramMatrix> {
    check_normalized(ket)?;
    let basis = LieBasis::new(group, ket.modes())?;
    let centered: Vec<SparseKet> = tangent_vectors(&basis, ket)?
        .into_iter()
        .map(|v| {
            let mean = ket.real_inner(&v)?;
            v.add_scaled(Complex64::new(-mean, 0.0), ket)
        })
        .collect::<Result<_>>()?;
    let values = symmetric_from(basis.len(), |i, j| Ok(2.0 * centered[i].real_inner(&centered[j])?))?;
    Ok(GramMatrix::from_values(basis, PictureKind::Ketbra, values))
}

/// `[Gram]_{IJ} = Re Tr([H_I, ρ]† [H_J, ρ])`.
pub fn gram_mixed(group: GroupKind, rho: &DensityOperator) -> Result<GramMatrix> {
    let basis = LieBasis::new(group, rho.modes())?;
    let comms: Vec<SparseOperator> = basis.iter().map(|&g| commutator_with_density(g, rho)).collect::<Result<_>>()?;
    let values = symmetric_from(basis.len(), |i, j| Ok(comms[i].hs_inner(&comms[j])?.re))?;
    Ok(GramMatrix::from_values(basis, PictureKind::Mixed, values))
}

/// Cross-check of [`gram_ket`]: `E_ψ({H_I, H_J})` with `{A, B} = (AB + BA)/2`, from second-order
/// products applied to the state.
pub fn gram_ket_expectation(group: GroupKind, ket: &SparseKet) -> Result<GramMatrix> {
    check_normalized(ket)?;
    let basis = LieBasis::new(group, ket.modes())?;
    let vecs = tangent_vectors(&basis, ket)?;
    let gens = basis.elements().to_vec();
    let values = symmetric_from(basis.len(), |i, j| {
        let ij = ket.inner(&apply_generator(gens[i], &vecs[j])?)?;
        let ji = ket.inner(&apply_generator(gens[j], &vecs[i])?)?;
        Ok(0.5 * (ij + ji).re)
    })?;
    Ok(GramMatrix::from_values(basis, PictureKind::Ket, values))
}

/// Cross-check of [`gram_ketbra`]: `2 (Gram_ket - v vᵀ)` with `v_I = E_ψ(H_I)`.
pub fn gram_ketbra_from_ket(group: GroupKind, ket: &SparseKet) -> Result<GramMatrix> {
    let ket_gram = gram_ket(group, ket)?;
    let v = expectation_vector(group, ket)?;
    let d = v.len();
    let values = symmetric_from(d, |i, j| Ok(2.0 * (ket_gram.get(i, j) - v[i] * v[j])))?;
    Ok(GramMatrix::from_values(ket_gram.basis.clone(), PictureKind::Ketbra, values))
}

/// Cross-check of [`gram_mixed`]: `2 Tr[{H_I, H_J} ρ²] - 2 Tr[H_I ρ H_J ρ]`.
pub fn gram_mixed_trace_form(group: GroupKind, rho: &DensityOperator) -> Result<GramMatrix> {
    let basis = LieBasis::new(group, rho.modes())?;
    let r = rho.operator();
    let r2 = r.matmul(r)?;
    let gens = basis.elements().to_vec();
    // h_r2[J] = H_J ρ², r_h_r[J] = ρ H_J ρ
    let h_r2: Vec<SparseOperator> = gens.iter().map(|&g| apply_left(g, &r2)).collect::<Result<_>>()?;
    let r_h_r: Vec<SparseOperator> =
        gens.iter().map(|&g| r.matmul(&apply_left(g, r)?)).collect::<Result<_>>()?;
    let values = symmetric_from(basis.len(), |i, j| {
        let anti = apply_left(gens[i], &h_r2[j])?.trace() + apply_left(gens[j], &h_r2[i])?.trace();
        let cross = apply_left(gens[i], &r_h_r[j])?.trace();
        Ok(anti.re - 2.0 * cross.re)
    })?;
    Ok(GramMatrix::from_values(basis, PictureKind::Mixed, values))
}
