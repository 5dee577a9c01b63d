//! Tabulated orbit dimensions of Fock basis states, one-mode superpositions and NOON states.
//!
//! `u` always counts the unoccupied modes of the Fock-product tail of the state.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fock::{Occupation, SparseKet};
use crate::generators::GroupKind;

use super::PictureKind;

/// Whether a tabulated value is exact or only an upper bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    UpperBoundOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub value: usize,
    pub exactness: Exactness,
}

impl ClosedForm {
    /// Whether a numerical dimension is consistent with this value.
    pub fn admits(&self, numerical: usize) -> bool {
        match self.exactness {
            Exactness::Exact => numerical == self.value,
            Exactness::UpperBoundOnly => numerical <= self.value,
        }
    }
}

/// Structured pure states with tabulated orbit dimensions.
#[derive(Clone, Debug, PartialEq)]
pub enum StateFamily {
    /// `|n_1, ..., n_m⟩`.
    FockBasis(Occupation),
    /// `(Σ_n α_n |n⟩) ⊗ |tail⟩`; `amplitudes[n] = α_n` (need not be normalized).
    OneModeSuperposition { amplitudes: Vec<Complex64>, tail: Occupation },
    /// `(|N,0⟩ + |0,N⟩)/√2 ⊗ |tail⟩`.
    Noon { photons: u32, tail: Occupation },
}

impl StateFamily {
    pub fn modes(&self) -> usize {
        match self {
            StateFamily::FockBasis(occ) => occ.modes(),
            StateFamily::OneModeSuperposition { tail, .. } => 1 + tail.modes(),
            StateFamily::Noon { tail, .. } => 2 + tail.modes(),
        }
    }

    /// Unoccupied modes in the Fock-product part of the state.
    pub fn unoccupied(&self) -> usize {
        match self {
            StateFamily::FockBasis(occ) => occ.unoccupied(),
            StateFamily::OneModeSuperposition { tail, .. } | StateFamily::Noon { tail, .. } => tail.unoccupied(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            StateFamily::FockBasis(_) => "fock",
            StateFamily::OneModeSuperposition { .. } => "one-mode-superposition",
            StateFamily::Noon { .. } => "noon",
        }
    }

    /// Compact parameter string, e.g. `1,0,2` or `N=3;tail=0,1`.
    pub fn params(&self) -> String {
        let counts = |o: &Occupation| o.counts().iter().map(|n| alloc::format!("{n}")).collect::<Vec<_>>().join(",");
        match self {
            StateFamily::FockBasis(occ) => counts(occ),
            StateFamily::OneModeSuperposition { amplitudes, tail } => {
                let support: Vec<String> = amplitudes
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| **a != Complex64::new(0.0, 0.0))
                    .map(|(n, _)| alloc::format!("{n}"))
                    .collect();
                alloc::format!("support={};tail={}", support.join(","), counts(tail))
            }
            StateFamily::Noon { photons, tail } => alloc::format!("N={photons};tail={}", counts(tail)),
        }
    }

    /// The normalized state.
    pub fn state(&self) -> Result<SparseKet> {
        let m = self.modes();
        match self {
            StateFamily::FockBasis(occ) => SparseKet::basis(occ.clone()),
            StateFamily::OneModeSuperposition { amplitudes, tail } => {
                if amplitudes.iter().filter(|a| **a != Complex64::new(0.0, 0.0)).count() < 2 {
                    return Err(Error::SuperpositionTooSmall);
                }
                let terms =
                    amplitudes.iter().enumerate().map(|(n, &a)| (Occupation::new(alloc::vec![n as u32]).concat(tail), a));
                SparseKet::from_terms(m, terms)?.normalize()
            }
            StateFamily::Noon { photons, tail } => {
                let s = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
                let left = Occupation::new(alloc::vec![*photons, 0]).concat(tail);
                let right = Occupation::new(alloc::vec![0, *photons]).concat(tail);
                SparseKet::from_terms(m, [(left, s), (right, s)])
            }
        }
    }
}

impl fmt::Display for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.name(), self.params())
    }
}

/// `δ_ψ`: 1 in the ket picture, 0 in the ketbra picture; `None` for mixed states.
pub fn picture_delta(picture: PictureKind) -> Option<usize> {
    match picture {
        PictureKind::Ket => Some(1),
        PictureKind::Ketbra => Some(0),
        PictureKind::Mixed => None,
    }
}

/// Tabulated orbit dimension of a structured pure state.
pub fn closed_form(family: &StateFamily, group: GroupKind, picture: PictureKind) -> Result<ClosedForm> {
    let delta = picture_delta(picture).ok_or(Error::MixedClosedForm)?;
    let m = family.modes();
    let u = family.unoccupied();
    // m(m-1) - u(u-1) and friends are nonnegative since u ≤ m.
    let base = |extra: usize| -> usize {
        let lead = match group {
            GroupKind::Plo => m * (m - 1),
            GroupKind::Dplo => m * (m + 1),
            GroupKind::Alo => 2 * m * m,
            GroupKind::Go => 2 * m * (m + 1),
        };
        lead - u * u.saturating_sub(1) + extra
    };
    let exact = |value| ClosedForm { value, exactness: Exactness::Exact };
    let bound = |value| ClosedForm { value, exactness: Exactness::UpperBoundOnly };
    let all_empty = usize::from(u != m);
    Ok(match family {
        StateFamily::FockBasis(_) => match group {
            GroupKind::Plo | GroupKind::Alo => exact(base(delta * all_empty)),
            GroupKind::Dplo | GroupKind::Go => exact(base(delta)),
        },
        StateFamily::OneModeSuperposition { .. } => match group {
            GroupKind::Plo => exact(base(1)),
            GroupKind::Dplo | GroupKind::Go => bound(base(1 + delta)),
            GroupKind::Alo => bound(base(1)),
        },
        StateFamily::Noon { photons, .. } => {
            if *photons < 3 {
                return Err(Error::NoonTooSmall(*photons));
            }
            exact(base(1 + delta))
        }
    })
}

/// Deterministic amplitudes `α_n ∝ (n + 1) e^{0.7 i n}` on the given support.
pub fn sample_amplitudes(support: &[u32]) -> Vec<Complex64> {
    let len = support.iter().max().map_or(0, |&n| n as usize + 1);
    let mut amps = alloc::vec![Complex64::new(0.0, 0.0); len];
    for (j, &n) in support.iter().enumerate() {
        let phase = 0.7 * j as f64;
        amps[n as usize] = Complex64::new(Float::cos(phase), Float::sin(phase)) * (j as f64 + 1.0);
    }
    amps
}
