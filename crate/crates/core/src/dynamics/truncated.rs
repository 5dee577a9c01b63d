use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{apply_word, Occupation, SparseKet, SparseOperator};
use crate::generators::Generator;
use crate::orbit::fock_basis_upto;

/// Fock states of `modes` modes with at most `cutoff` photons, indexed lexicographically.
#[derive(Clone, Debug)]
pub struct TruncatedBasis {
    modes: usize,
    cutoff: u32,
    states: Vec<Occupation>,
    index: BTreeMap<Occupation, usize>,
}

/// `Σ_{n ≤ N} C(m+n-1, n) = C(m+N, N)`.
pub fn truncated_size(modes: usize, cutoff: u32) -> usize {
    let (mut num, mut den) = (1u128, 1u128);
    for i in 1..=u128::from(cutoff) {
        num *= modes as u128 + i;
        den *= i;
    }
    (num / den) as usize
}

impl TruncatedBasis {
    pub fn new(modes: usize, cutoff: u32) -> Result<Self> {
        if modes == 0 {
            return Err(Error::NoModes);
        }
        Ok(Self::from_states(modes, cutoff, fock_basis_upto(modes, cutoff)))
    }

    /// Only the Fock states whose total photon number is in `shells`.
    pub fn with_shells(modes: usize, shells: &BTreeSet<u32>) -> Result<Self> {
        if modes == 0 {
            return Err(Error::NoModes);
        }
        let cutoff = shells.iter().copied().max().unwrap_or(0);
        let mut states = fock_basis_upto(modes, cutoff);
        states.retain(|s| shells.contains(&s.total()));
        Ok(Self::from_states(modes, cutoff, states))
    }

    fn from_states(modes: usize, cutoff: u32, states: Vec<Occupation>) -> Self {
        let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Self { modes, cutoff, states, index }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[Occupation] {
        &self.states
    }

    pub fn index_of(&self, occ: &Occupation) -> Option<usize> {
        self.index.get(occ).copied()
    }

    fn require(&self, occ: &Occupation) -> Result<usize> {
        if occ.modes() != self.modes {
            return Err(Error::ModeMismatch { left: self.modes, right: occ.modes() });
        }
        self.index_of(occ).ok_or(Error::InvalidConfig("state has support above the truncation cutoff"))
    }

    pub fn ket_to_dense(&self, ket: &SparseKet) -> Result<Vec<Complex64>> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.len()];
        for (occ, amp) in ket.iter() {
            out[self.require(occ)?] = *amp;
        }
        Ok(out)
    }

    pub fn dense_to_ket(&self, amplitudes: &[Complex64]) -> Result<SparseKet> {
        SparseKet::from_terms(self.modes, self.states.iter().cloned().zip(amplitudes.iter().copied()))
    }

    pub fn operator_to_dense(&self, op: &SparseOperator) -> Result<Vec<Complex64>> {
        let n = self.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for ((b, k), v) in op.iter() {
            out[self.require(b)? * n + self.require(k)?] = *v;
        }
        Ok(out)
    }

    pub fn dense_to_operator(&self, matrix: &[Complex64]) -> Result<SparseOperator> {
        let n = self.len();
        SparseOperator::from_entries(
            self.modes,
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| {
                (self.states[i].clone(), self.states[j].clone(), matrix[i * n + j])
            }),
        )
    }

    /// Population on the outermost photon-number shell; nonzero weight there means the truncation
    /// may be cutting off dynamics.
    pub fn boundary_population(&self, amplitudes: &[Complex64]) -> f64 {
        self.states.iter().zip(amplitudes).filter(|(s, _)| s.total() == self.cutoff).map(|(_, a)| a.norm_sqr()).sum()
    }

    /// Diagonal weight of a dense density matrix on the outermost shell.
    pub fn boundary_weight(&self, matrix: &[Complex64]) -> f64 {
        let n = self.len();
        self.states.iter().enumerate().filter(|(_, s)| s.total() == self.cutoff).map(|(i, _)| matrix[i * n + i].re.abs()).sum()
    }
}

/// Projection of a generator onto a truncated basis.
#[derive(Clone, Debug)]
pub struct DenseHamiltonian {
    pub n: usize,
    /// Row-major matrix elements `⟨i|H|j⟩`.
    pub matrix: Vec<Complex64>,
    /// Couplings from inside the basis to states above the cutoff that were dropped.
    pub truncated: usize,
}

/// `⟨n|H|n'⟩` over the truncated basis; couplings across the cutoff are dropped on both sides,
/// which keeps the matrix Hermitian.
pub fn dense_hamiltonian(g: Generator, basis: &TruncatedBasis) -> Result<DenseHamiltonian> {
    g.validate(basis.modes())?;
    let n = basis.len();
    let mut matrix = vec![Complex64::new(0.0, 0.0); n * n];
    let mut truncated = 0;
    for (col, occ) in basis.states().iter().enumerate() {
        g.for_each_term(|coeff, word| {
            if let Some((elem, image)) = apply_word(word, occ) {
                match basis.index_of(&image) {
                    Some(row) => matrix[row * n + col] += coeff * elem,
                    None => truncated += 1,
                }
            }
        });
    }
    Ok(DenseHamiltonian { n, matrix, truncated })
}
