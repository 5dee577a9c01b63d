//! Orbit dimensions as numerical ranks of Gram matrices.
//!
//! For a basis `i{H_1, ..., H_d}` of the group's Lie algebra, the orbit of a ket has dimension
//! `rank_ℝ{H_I ψ}` and the orbit of a density operator `rank_ℝ{[H_I, ρ]}`. Both ranks are read
//! off the spectrum of the corresponding real Gram matrix.

mod closed_form;
mod gram;
mod rank;
mod table;

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fock::{DensityOperator, Occupation, SparseKet};
use crate::generators::GroupKind;

pub use closed_form::{closed_form, picture_delta, sample_amplitudes, ClosedForm, Exactness, StateFamily};
pub use gram::{
    expectation_vector, gram_ket, gram_ket_expectation, gram_ketbra, gram_ketbra_from_ket, gram_mixed,
    gram_mixed_trace_form, tangent_vectors, GramMatrix, NORM_TOL, PSD_FLOOR, SYMMETRY_TOL,
};
pub use rank::{rank_psd, rank_symmetric, RankResult, DEFAULT_RELATIVE_TOL};
pub use table::{evaluate_family, table_grid, TableRow};

/// How a state enters the orbit computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PictureKind {
    /// Normalized vector; global phase is a direction.
    Ket,
    /// Rank-one projector of a ket.
    Ketbra,
    /// General density operator.
    Mixed,
}

impl PictureKind {
    pub const PURE: [PictureKind; 2] = [PictureKind::Ket, PictureKind::Ketbra];

    pub fn name(self) -> &'static str {
        match self {
            PictureKind::Ket => "ket",
            PictureKind::Ketbra => "ketbra",
            PictureKind::Mixed => "mixed",
        }
    }
}

impl fmt::Display for PictureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PictureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ket" => Ok(PictureKind::Ket),
            "ketbra" => Ok(PictureKind::Ketbra),
            "mixed" => Ok(PictureKind::Mixed),
            _ => Err(Error::InvalidConfig("unknown picture (expected ket, ketbra or mixed)")),
        }
    }
}

/// A state handed to [`orbit_dimension`].
#[derive(Clone, Copy, Debug)]
pub enum OrbitState<'a> {
    Ket(&'a SparseKet),
    Density(&'a DensityOperator),
}

impl<'a> From<&'a SparseKet> for OrbitState<'a> {
    fn from(ket: &'a SparseKet) -> Self {
        OrbitState::Ket(ket)
    }
}

impl<'a> From<&'a DensityOperator> for OrbitState<'a> {
    fn from(rho: &'a DensityOperator) -> Self {
        OrbitState::Density(rho)
    }
}

/// Gram matrix of `state` in `picture`. Ket and ketbra pictures take kets; the mixed picture takes
/// density operators.
pub fn gram<'a>(group: GroupKind, state: impl Into<OrbitState<'a>>, picture: PictureKind) -> Result<GramMatrix> {
    match (state.into(), picture) {
        (OrbitState::Ket(psi), PictureKind::Ket) => gram_ket(group, psi),
        (OrbitState::Ket(psi), PictureKind::Ketbra) => gram_ketbra(group, psi),
        (OrbitState::Density(rho), PictureKind::Mixed) => gram_mixed(group, rho),
        (OrbitState::Ket(_), p) => Err(Error::PictureMismatch { picture: p.name(), kind: "ket" }),
        (OrbitState::Density(_), p) => Err(Error::PictureMismatch { picture: p.name(), kind: "density" }),
    }
}

/// Orbit dimension of `state` under `group`: the rank of its Gram matrix.
pub fn orbit_dimension<'a>(
    group: GroupKind,
    state: impl Into<OrbitState<'a>>,
    picture: PictureKind,
    tolerance: Option<f64>,
) -> Result<RankResult> {
    rank_psd(&gram(group, state, picture)?, tolerance)
}

/// Fock basis states of `modes` modes with at most `cutoff` photons, in lexicographic order.
pub fn fock_basis_upto(modes: usize, cutoff: u32) -> Vec<Occupation> {
    fn fill(prefix: &mut Vec<u32>, remaining: u32, modes: usize, out: &mut Vec<Occupation>) {
        if prefix.len() == modes {
            out.push(Occupation::new(prefix.clone()));
            return;
        }
        for n in 0..=remaining {
            prefix.push(n);
            fill(prefix, remaining - n, modes, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    fill(&mut Vec::with_capacity(modes), cutoff, modes, &mut out);
    out
}

/// `ψ_{N,m}`: equal-weight superposition of the Fock states with at most `min(2, N)` photons,
/// the `j`-th (lexicographic, one-based) carrying phase `e^{2πij/J}`.
pub fn uniform_phase_state(modes: usize, cutoff: u32) -> Result<SparseKet> {
    if modes == 0 {
        return Err(Error::NoModes);
    }
    let basis = fock_basis_upto(modes, cutoff.min(2));
    let count = basis.len() as f64;
    let scale = 1.0 / Float::sqrt(count);
    let terms = basis.into_iter().enumerate().map(|(j, occ)| {
        let angle = 2.0 * core::f64::consts::PI * (j + 1) as f64 / count;
        (occ, Complex64::new(Float::cos(angle), Float::sin(angle)) * scale)
    });
    SparseKet::from_terms(modes, terms)
}

/// Orbit dimension attained with probability one by a random state with at most `cutoff` photons.
///
/// The ketbra (and mixed, for pure inputs) value drops the identity direction of displaced groups.
pub fn generic_dimension(group: GroupKind, modes: usize, cutoff: u32, picture: PictureKind) -> usize {
    let m = modes;
    let mut dim = group.dimension(m);
    match cutoff {
        0 => dim -= m * m,
        1 => dim -= (m - 1) * (m - 1),
        _ => {}
    }
    if picture != PictureKind::Ket && group.has_displacements() {
        dim -= 1;
    }
    dim
}

/// Gaussian-orbit test for pure states.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessReport {
    pub dimension: usize,
    /// `m(m + 3)`, the orbit dimension of every Gaussian pure state.
    pub threshold: usize,
    pub witnessed: bool,
    pub rank: RankResult,
}

/// A ketbra orbit dimension under Gaussian optics above `m(m+3)` certifies non-Gaussianity.
pub fn nongaussianity_witness(ket: &SparseKet, tolerance: Option<f64>) -> Result<WitnessReport> {
    let m = ket.modes();
    let rank = orbit_dimension(GroupKind::Go, ket, PictureKind::Ketbra, tolerance)?;
    let threshold = m * (m + 3);
    Ok(WitnessReport { dimension: rank.rank, threshold, witnessed: rank.rank > threshold, rank })
}

/// Expected Gaussian-optics ketbra dimensions of the dual-rail `|+0⟩_L` and `|Φ⁺⟩_L`.
pub const CNOT_EXPECTED: (usize, usize) = (38, 37);

/// Orbit dimensions of the two dual-rail states related by a logical CNOT.
#[derive(Clone, Debug, PartialEq)]
pub struct CnotReport {
    pub group: GroupKind,
    pub plus_zero: RankResult,
    pub phi_plus: RankResult,
}

impl CnotReport {
    /// Distinct dimensions rule out any group element acting as CNOT on the logical subspace.
    pub fn excluded(&self) -> bool {
        self.plus_zero.rank != self.phi_plus.rank
    }
}

/// `(|1,0,1,0⟩ + |1,0,0,1⟩)/√2` and `(|1,0,1,0⟩ + |0,1,0,1⟩)/√2`.
pub fn cnot_states() -> Result<(SparseKet, SparseKet)> {
    let s = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
    let plus_zero = SparseKet::from_terms(4, [([1, 0, 1, 0], s), ([1, 0, 0, 1], s)])?;
    let phi_plus = SparseKet::from_terms(4, [([1, 0, 1, 0], s), ([0, 1, 0, 1], s)])?;
    Ok((plus_zero, phi_plus))
}

pub fn cnot_demo(group: GroupKind, tolerance: Option<f64>) -> Result<CnotReport> {
    let (plus_zero, phi_plus) = cnot_states()?;
    Ok(CnotReport {
        group,
        plus_zero: orbit_dimension(group, &plus_zero, PictureKind::Ketbra, tolerance)?,
        phi_plus: orbit_dimension(group, &phi_plus, PictureKind::Ketbra, tolerance)?,
    })
}
