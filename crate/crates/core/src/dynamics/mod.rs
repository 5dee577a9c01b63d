//! Time evolution on a photon-number truncation of Fock space, β overlaps of evolved copies,
//! and Gram entries recovered from their second time derivatives.

mod sampling;
mod truncated;

use alloc::collections::btree_map::Entry;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fock::{DensityOperator, DensityTolerances, SparseKet};
use crate::generators::{Generator, GroupKind, LieBasis};
use crate::linalg::HermitianEigen;

pub use sampling::{perturb_state, random_word, sample_sphere_state};
pub use truncated::{dense_hamiltonian, truncated_size, DenseHamiltonian, TruncatedBasis};

/// Truncation and finite-difference settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolutionConfig {
    /// Photons added above the state's largest total before truncating.
    pub buffer: u32,
    /// Largest accepted trace, Hermiticity or boundary-shell deviation after an evolution.
    pub leakage_tolerance: f64,
    /// Finite-difference time step `h`.
    pub step: f64,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self { buffer: 16, leakage_tolerance: 1e-6, step: 1e-3 }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.leakage_tolerance > 0.0) {
            return Err(Error::InvalidConfig("leakage tolerance must be positive"));
        }
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(Error::InvalidConfig("finite-difference step must be positive"));
        }
        Ok(())
    }
}

fn number_preserving(g: &Generator) -> bool {
    g.photon_shifts() == [0]
}

/// Truncation for a state occupying the photon-number shells `shells`, evolved by `generators`.
/// Number-preserving generators never leave those shells, so they get exactly them; otherwise every
/// shell up to `cfg.buffer` above the largest is kept. The flag reports the closed case.
fn basis_for<'a>(
    modes: usize,
    shells: BTreeSet<u32>,
    generators: impl IntoIterator<Item = &'a Generator>,
    cfg: &EvolutionConfig,
) -> Result<(TruncatedBasis, bool)> {
    if generators.into_iter().all(number_preserving) {
        return Ok((TruncatedBasis::with_shells(modes, &shells)?, true));
    }
    let top = shells.iter().copied().max().unwrap_or(0);
    Ok((TruncatedBasis::new(modes, top + cfg.buffer)?, false))
}

fn ket_shells(ket: &SparseKet) -> BTreeSet<u32> {
    ket.iter().map(|(o, _)| o.total()).collect()
}

fn density_shells(rho: &DensityOperator) -> BTreeSet<u32> {
    rho.operator().iter().flat_map(|((b, k), _)| [b.total(), k.total()]).collect()
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn phase(angle: f64) -> Complex64 {
    Complex64::new(Float::cos(angle), Float::sin(angle))
}

/// Row-major `A B`, skipping exact zeros of `A`.
fn matmul(n: usize, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik.re == 0.0 && aik.im == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

fn adjoint(n: usize, a: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            out[j * n + i] = a[i * n + j].conj();
        }
    }
    out
}

/// `Re Tr[A† B]`.
fn real_hs(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.re * y.re + x.im * y.im).sum()
}

/// Evolutions of one fixed density matrix under one generator.
struct DensityPropagator {
    n: usize,
    values: Vec<f64>,
    vectors: Vec<Complex64>,
    /// `V† ρ V`.
    rotated: Vec<Complex64>,
}

impl DensityPropagator {
    fn new(h: &DenseHamiltonian, rho: &[Complex64]) -> Self {
        let n = h.n;
        let eig = HermitianEigen::new(n, &h.matrix);
        let rotated = matmul(n, &adjoint(n, &eig.vectors), &matmul(n, rho, &eig.vectors));
        Self { n, values: eig.values, vectors: eig.vectors, rotated }
    }

    /// `e^{-iHt} ρ e^{iHt} = V (e^{-i(λ_i - λ_j)t} W_ij) V†`.
    fn at(&self, t: f64) -> Vec<Complex64> {
        let n = self.n;
        let mut w = self.rotated.clone();
        for i in 0..n {
            for j in 0..n {
                w[i * n + j] *= phase(-(self.values[i] - self.values[j]) * t);
            }
        }
        matmul(n, &self.vectors, &matmul(n, &w, &adjoint(n, &self.vectors)))
    }
}

/// `max(|Tr ρ - 1|, Hermiticity residual, weight on the outermost shell)`; the shell term only
/// applies when the truncation is not closed under the dynamics.
fn density_leakage(basis: &TruncatedBasis, rho: &[Complex64], closed: bool) -> f64 {
    let n = basis.len();
    let trace: Complex64 = (0..n).map(|i| rho[i * n + i]).sum();
    let mut herm = 0.0f64;
    for i in 0..n {
        for j in i..n {
            herm = herm.max((rho[i * n + j] - rho[j * n + i].conj()).norm());
        }
    }
    let boundary = if closed { 0.0 } else { basis.boundary_weight(rho) };
    (trace - Complex64::new(1.0, 0.0)).norm().max(herm).max(boundary)
}

fn check_leakage(leakage: f64, cfg: &EvolutionConfig) -> Result<()> {
    if leakage <= cfg.leakage_tolerance {
        Ok(())
    } else {
        Err(Error::Leakage { leakage, tolerance: cfg.leakage_tolerance })
    }
}

/// `e^{-iHt} ρ e^{iHt}` with `H = g` restricted to a truncation with `cfg.buffer` spare photons.
pub fn evolve_density(rho: &DensityOperator, g: Generator, t: f64, cfg: &EvolutionConfig) -> Result<DensityOperator> {
    cfg.validate()?;
    g.validate(rho.modes())?;
    if t == 0.0 {
        return Ok(rho.clone());
    }
    let (basis, closed) = basis_for(rho.modes(), density_shells(rho), [&g], cfg)?;
    let dense = basis.operator_to_dense(rho.operator())?;
    let evolved = DensityPropagator::new(&dense_hamiltonian(g, &basis)?, &dense).at(t);
    check_leakage(density_leakage(&basis, &evolved, closed), cfg)?;
    let tol = DensityTolerances { hermiticity: cfg.leakage_tolerance, trace: cfg.leakage_tolerance };
    DensityOperator::with_tolerances(basis.dense_to_operator(&evolved)?, tol)
}

/// `β_{I,J}(t)` for basis indices `I`, `J`, with `None` standing for the unevolved copy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BetaSample {
    pub i: Option<usize>,
    pub j: Option<usize>,
    pub t: f64,
    pub value: f64,
}

/// Raw, half-step and extrapolated second-difference estimates of one Gram entry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GramEstimate {
    /// Central stencil at step `h`.
    pub raw: f64,
    /// Central stencil at step `h/2`.
    pub half_step: f64,
    /// `(4 D(h/2) - D(h)) / 3`.
    pub extrapolated: f64,
}

impl GramEstimate {
    pub fn value(&self) -> f64 {
        self.extrapolated
    }
}

/// Stencil times `h, -h, h/2, -h/2`.
const STENCIL: [f64; 4] = [1.0, -1.0, 0.5, -0.5];

/// Evolved copies of a density matrix under each Lie-basis generator at the stencil times.
#[derive(Clone, Debug)]
pub struct GramEstimator {
    basis: LieBasis,
    cfg: EvolutionConfig,
    rho: Vec<Complex64>,
    purity: f64,
    /// `copies[I][k]` is `U_I(STENCIL[k] · h) ρ U_I†`; `None` for generators not requested.
    copies: Vec<Option<Vec<Vec<Complex64>>>>,
    truncation: usize,
}

impl GramEstimator {
    /// Prepares every generator of the group's Lie basis.
    pub fn new(rho: &DensityOperator, group: GroupKind, cfg: &EvolutionConfig) -> Result<Self> {
        let d = group.dimension(rho.modes());
        Self::for_indices(rho, group, cfg, &(0..d).collect::<Vec<_>>())
    }

    /// Prepares only the listed basis indices.
    pub fn for_indices(rho: &DensityOperator, group: GroupKind, cfg: &EvolutionConfig, indices: &[usize]) -> Result<Self> {
        cfg.validate()?;
        let basis = LieBasis::new(group, rho.modes())?;
        if let Some(&bad) = indices.iter().find(|&&i| i >= basis.len()) {
            return Err(Error::GeneratorIndex { index: bad, dim: basis.len() });
        }
        let (trunc, closed) = basis_for(rho.modes(), density_shells(rho), basis.iter(), cfg)?;
        let dense = trunc.operator_to_dense(rho.operator())?;
        let purity = real_hs(&dense, &dense);
        let mut copies = vec![None; basis.len()];
        for &i in indices {
            if copies[i].is_some() {
                continue;
            }
            let prop = DensityPropagator::new(&dense_hamiltonian(basis.elements()[i], &trunc)?, &dense);
            let mut evolved = Vec::with_capacity(STENCIL.len());
            for s in STENCIL {
                let rho_t = prop.at(s * cfg.step);
                check_leakage(density_leakage(&trunc, &rho_t, closed), cfg)?;
                evolved.push(rho_t);
            }
            copies[i] = Some(evolved);
        }
        Ok(Self { basis, cfg: *cfg, rho: dense, purity, copies, truncation: trunc.cutoff() as usize })
    }

    pub fn basis(&self) -> &LieBasis {
        &self.basis
    }

    /// Photon cutoff of the truncation in use.
    pub fn cutoff(&self) -> usize {
        self.truncation
    }

    fn copy(&self, index: Option<usize>, k: usize) -> Result<&[Complex64]> {
        match index {
            None => Ok(&self.rho),
            Some(i) => self.copies.get(i).and_then(|c| c.as_ref()).map(|c| c[k].as_slice()).ok_or(
                Error::InvalidConfig("generator index was not prepared by this estimator"),
            ),
        }
    }

    /// `β_{I,J}` at stencil point `k`.
    fn beta_at(&self, i: Option<usize>, j: Option<usize>, k: usize) -> Result<f64> {
        if i.is_none() && j.is_none() {
            return Ok(self.purity);
        }
        Ok(real_hs(self.copy(i, k)?, self.copy(j, k)?))
    }

    /// Central second difference of `β_{I,J}` at `h` (`half = false`) or `h/2`.
    fn second_difference(&self, i: Option<usize>, j: Option<usize>, half: bool) -> Result<f64> {
        let (plus, minus, h) = if half { (2, 3, self.cfg.step / 2.0) } else { (0, 1, self.cfg.step) };
        Ok((self.beta_at(i, j, plus)? - 2.0 * self.purity + self.beta_at(i, j, minus)?) / (h * h))
    }

    /// `½ (β̈_{I,J} - β̈_{I,0} - β̈_{0,J})` at `t = 0`.
    pub fn entry(&self, i: usize, j: usize) -> Result<GramEstimate> {
        let combine = |half: bool| -> Result<f64> {
            Ok(0.5
                * (self.second_difference(Some(i), Some(j), half)?
                    - self.second_difference(Some(i), None, half)?
                    - self.second_difference(None, Some(j), half)?))
        };
        let raw = combine(false)?;
        let half_step = combine(true)?;
        Ok(GramEstimate { raw, half_step, extrapolated: (4.0 * half_step - raw) / 3.0 })
    }

    /// Every entry, row-major.
    pub fn matrix(&self) -> Result<Vec<GramEstimate>> {
        let d = self.basis.len();
        let mut out = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                out.push(self.entry(i, j)?);
            }
        }
        Ok(out)
    }
}

/// `β_{I,J}(t) = Re ⟨U_I(t) ρ U_I(t)†, U_J(t) ρ U_J(t)†⟩_HS`, with `None` meaning no evolution.
pub fn beta(
    rho: &DensityOperator,
    i: Option<usize>,
    j: Option<usize>,
    t: f64,
    group: GroupKind,
    cfg: &EvolutionConfig,
) -> Result<BetaSample> {
    cfg.validate()?;
    let basis = LieBasis::new(group, rho.modes())?;
    let pick = |idx: Option<usize>| -> Result<Option<Generator>> {
        idx.map(|k| basis.elements().get(k).copied().ok_or(Error::GeneratorIndex { index: k, dim: basis.len() }))
            .transpose()
    };
    let (gi, gj) = (pick(i)?, pick(j)?);
    let value = if t == 0.0 {
        rho.purity()
    } else {
        let active: Vec<Generator> = gi.iter().chain(gj.iter()).copied().collect();
        let (trunc, closed) = basis_for(rho.modes(), density_shells(rho), active.iter(), cfg)?;
        let dense = trunc.operator_to_dense(rho.operator())?;
        let evolve = |g: Option<Generator>| -> Result<Vec<Complex64>> {
            match g {
                None => Ok(dense.clone()),
                Some(g) => {
                    let out = DensityPropagator::new(&dense_hamiltonian(g, &trunc)?, &dense).at(t);
                    check_leakage(density_leakage(&trunc, &out, closed), cfg)?;
                    Ok(out)
                }
            }
        };
        real_hs(&evolve(gi)?, &evolve(gj)?)
    };
    Ok(BetaSample { i, j, t, value })
}

/// Finite-difference estimate of the mixed-picture Gram entry `(I, J)`.
pub fn estimate_gram_entry(
    rho: &DensityOperator,
    i: usize,
    j: usize,
    group: GroupKind,
    cfg: &EvolutionConfig,
) -> Result<GramEstimate> {
    GramEstimator::for_indices(rho, group, cfg, &[i, j])?.entry(i, j)
}

/// Result of applying a sequence of group exponentials to a ket.
#[derive(Clone, Debug, PartialEq)]
pub struct WordOutcome {
    pub ket: SparseKet,
    /// `| ‖ψ'‖ - 1 |` for a normalized input.
    pub norm_deviation: f64,
    /// Largest outer-shell population seen after any factor (zero for number-preserving words).
    pub leakage: f64,
}

/// `e^{-i t_1 H_1} ⋯ e^{-i t_a H_a} |ψ⟩`, rightmost factor first.
pub fn apply_group_word(psi: &SparseKet, word: &[(Generator, f64)], cfg: &EvolutionConfig) -> Result<WordOutcome> {
    cfg.validate()?;
    if word.is_empty() {
        return Ok(WordOutcome { ket: psi.clone(), norm_deviation: (psi.norm() - 1.0).abs(), leakage: 0.0 });
    }
    for (g, _) in word {
        g.validate(psi.modes())?;
    }
    let (basis, closed) = basis_for(psi.modes(), ket_shells(psi), word.iter().map(|(g, _)| g), cfg)?;
    let n = basis.len();
    let mut v = basis.ket_to_dense(psi)?;
    let mut cache: BTreeMap<Generator, HermitianEigen> = BTreeMap::new();
    let mut leakage = 0.0f64;
    for &(g, t) in word.iter().rev() {
        let eig = match cache.entry(g) {
            Entry::Occupied(e) => e.into_mut(),
            Entry::Vacant(e) => e.insert(HermitianEigen::new(n, &dense_hamiltonian(g, &basis)?.matrix)),
        };
        // V e^{-iλt} V† v
        let mut w = vec![zero(); n];
        for (k, wk) in w.iter_mut().enumerate() {
            let acc: Complex64 = v.iter().enumerate().map(|(r, vr)| eig.vectors[r * n + k].conj() * vr).sum();
            *wk = acc * phase(-eig.values[k] * t);
        }
        for (r, out) in v.iter_mut().enumerate() {
            *out = (0..n).map(|k| eig.vectors[r * n + k] * w[k]).sum();
        }
        if !closed {
            leakage = leakage.max(basis.boundary_population(&v));
            check_leakage(leakage, cfg)?;
        }
    }
    let ket = basis.dense_to_ket(&v)?;
    let norm_deviation = (ket.norm() - psi.norm()).abs();
    check_leakage(norm_deviation, cfg)?;
    Ok(WordOutcome { ket, norm_deviation, leakage })
}
