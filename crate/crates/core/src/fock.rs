//! Sparse multimode Fock-space vectors and operators.
//!
//! States and operators are stored as ordered maps keyed by occupation vectors, so iteration is
//! always in lexicographic order of the occupations. Only exact zeros are pruned.

use alloc::collections::btree_map::{self, BTreeMap};
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use num_traits::{Float, Zero};

use crate::error::{Error, Result};

/// Default absolute tolerance on `|rho(b,k) - conj(rho(k,b))|` for density operators.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Default absolute tolerance on `|Tr rho - 1|` for density operators.
pub const TRACE_TOL: f64 = 1e-10;
/// Diagonal entries of a density operator may dip this far below zero.
pub const DIAGONAL_FLOOR: f64 = -1e-12;

/// Photon counts per mode, ordered lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occupation(Vec<u32>);

impl Occupation {
    pub fn new(counts: Vec<u32>) -> Self {
        Self(counts)
    }

    pub fn vacuum(modes: usize) -> Self {
        Self(alloc::vec![0; modes])
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    /// Total photon number.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn count(&self, mode: usize) -> u32 {
        self.0[mode]
    }

    /// Number of modes holding no photons.
    pub fn unoccupied(&self) -> usize {
        self.0.iter().filter(|&&n| n == 0).count()
    }

    /// Concatenation `self ⊗ other`.
    pub fn concat(&self, other: &Occupation) -> Occupation {
        let mut counts = self.0.clone();
        counts.extend_from_slice(&other.0);
        Occupation(counts)
    }
}

impl From<Vec<u32>> for Occupation {
    fn from(counts: Vec<u32>) -> Self {
        Self(counts)
    }
}

impl From<&[u32]> for Occupation {
    fn from(counts: &[u32]) -> Self {
        Self(counts.to_vec())
    }
}

impl<const M: usize> From<[u32; M]> for Occupation {
    fn from(counts: [u32; M]) -> Self {
        Self(counts.to_vec())
    }
}

impl fmt::Debug for Occupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Occupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("|")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        f.write_str("⟩")
    }
}

/// A single creation or annihilation operator on a zero-based mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    Create(usize),
    Annihilate(usize),
}

impl Ladder {
    pub fn mode(self) -> usize {
        match self {
            Ladder::Create(k) | Ladder::Annihilate(k) => k,
        }
    }

    /// Acts on `|n⟩` in place and returns the squared matrix element, or `None` when the result
    /// vanishes.
    fn act_in_place(self, counts: &mut [u32]) -> Option<u64> {
        match self {
            Ladder::Annihilate(k) => {
                let n = counts[k];
                if n == 0 {
                    return None;
                }
                counts[k] = n - 1;
                Some(u64::from(n))
            }
            Ladder::Create(k) => {
                let n = counts[k];
                counts[k] = n + 1;
                Some(u64::from(n) + 1)
            }
        }
    }
}

/// Applies the operator product `word[0] word[1] ... word[last]` to the basis state `occ`
/// (rightmost factor first). Returns `None` when the image is the zero vector.
///
/// The matrix element is the square root of an exact integer product, so `a a† |1⟩` gives exactly 2.
pub fn apply_word(word: &[Ladder], occ: &Occupation) -> Option<(f64, Occupation)> {
    let mut counts = occ.0.clone();
    let mut squared: u128 = 1;
    for op in word.iter().rev() {
        squared *= u128::from(op.act_in_place(&mut counts)?);
    }
    Some((Float::sqrt(squared as f64), Occupation(counts)))
}

/// A finite superposition of Fock basis states.
#[derive(Clone, PartialEq)]
pub struct SparseKet {
    modes: usize,
    terms: BTreeMap<Occupation, Complex64>,
}

impl SparseKet {
    /// The zero vector on `modes` modes.
    pub fn zero(modes: usize) -> Result<Self> {
        if modes == 0 {
            return Err(Error::NoModes);
        }
        Ok(Self { modes, terms: BTreeMap::new() })
    }

    /// The normalized basis state `|occ⟩`.
    pub fn basis(occ: impl Into<Occupation>) -> Result<Self> {
        let occ = occ.into();
        let mut ket = Self::zero(occ.modes())?;
        ket.terms.insert(occ, Complex64::new(1.0, 0.0));
        Ok(ket)
    }

    /// Builds a ket from `(occupation, amplitude)` pairs. Repeated occupations are summed.
    pub fn from_terms<O, I>(modes: usize, terms: I) -> Result<Self>
    where
        O: Into<Occupation>,
        I: IntoIterator<Item = (O, Complex64)>,
    {
        let mut ket = Self::zero(modes)?;
        for (occ, amp) in terms {
            let occ = occ.into();
            if occ.modes() != modes {
                return Err(Error::OccupationLength { expected: modes, found: occ.modes() });
            }
            ket.accumulate(occ, amp);
        }
        Ok(ket)
    }

    pub(crate) fn accumulate(&mut self, occ: Occupation, amp: Complex64) {
        if amp.is_zero() {
            return;
        }
        match self.terms.entry(occ) {
            btree_map::Entry::Vacant(slot) => {
                slot.insert(amp);
            }
            btree_map::Entry::Occupied(mut slot) => {
                let sum = *slot.get() + amp;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    /// Number of stored (nonzero) amplitudes.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, occ: &Occupation) -> Complex64 {
        self.terms.get(occ).copied().unwrap_or_else(Complex64::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Occupation, &Complex64)> + '_ {
        self.terms.iter()
    }

    /// Largest total photon number in the support (0 for the zero vector).
    pub fn max_total(&self) -> u32 {
        self.terms.keys().map(Occupation::total).max().unwrap_or(0)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        Float::sqrt(self.norm_sqr())
    }

    pub fn scale(&self, factor: Complex64) -> SparseKet {
        let mut out = SparseKet { modes: self.modes, terms: BTreeMap::new() };
        for (occ, amp) in &self.terms {
            out.accumulate(occ.clone(), amp * factor);
        }
        out
    }

    pub fn add(&self, other: &SparseKet) -> Result<SparseKet> {
        self.same_modes(other.modes)?;
        let mut out = self.clone();
        for (occ, amp) in &other.terms {
            out.accumulate(occ.clone(), *amp);
        }
        Ok(out)
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: Complex64, other: &SparseKet) -> Result<SparseKet> {
        self.same_modes(other.modes)?;
        let mut out = self.clone();
        for (occ, amp) in &other.terms {
            out.accumulate(occ.clone(), amp * factor);
        }
        Ok(out)
    }

    pub fn normalize(&self) -> Result<SparseKet> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(self.scale(Complex64::new(1.0 / norm, 0.0)))
    }

    /// `⟨self|other⟩`, summed over the common support in lexicographic order.
    pub fn inner(&self, other: &SparseKet) -> Result<Complex64> {
        self.same_modes(other.modes)?;
        let (small, large, swap) = if self.terms.len() <= other.terms.len() {
            (&self.terms, &other.terms, false)
        } else {
            (&other.terms, &self.terms, true)
        };
        let mut acc = Complex64::zero();
        for (occ, a) in small {
            if let Some(b) = large.get(occ) {
                acc += if swap { b.conj() * a } else { a.conj() * b };
            }
        }
        Ok(acc)
    }

    /// `Re⟨self|other⟩`, the inner product of the underlying real Hilbert space.
    pub fn real_inner(&self, other: &SparseKet) -> Result<f64> {
        self.inner(other).map(|z| z.re)
    }

    /// Applies one ladder word to every term and accumulates `coeff * word |self⟩` into `out`.
    pub(crate) fn apply_word_into(&self, coeff: Complex64, word: &[Ladder], out: &mut SparseKet) {
        for (occ, amp) in &self.terms {
            if let Some((elem, image)) = apply_word(word, occ) {
                out.accumulate(image, amp * coeff * elem);
            }
        }
    }

    pub(crate) fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.modes {
            return Err(Error::ModeOutOfRange { mode, modes: self.modes });
        }
        Ok(())
    }

    fn same_modes(&self, other: usize) -> Result<()> {
        if self.modes != other {
            return Err(Error::ModeMismatch { left: self.modes, right: other });
        }
        Ok(())
    }
}

impl fmt::Debug for SparseKet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// `a_k |ψ⟩` for a zero-based mode `k`.
pub fn apply_annihilation(mode: usize, ket: &SparseKet) -> Result<SparseKet> {
    ket.check_mode(mode)?;
    let mut out = SparseKet::zero(ket.modes)?;
    ket.apply_word_into(Complex64::new(1.0, 0.0), &[Ladder::Annihilate(mode)], &mut out);
    Ok(out)
}

/// `a†_k |ψ⟩` for a zero-based mode `k`.
pub fn apply_creation(mode: usize, ket: &SparseKet) -> Result<SparseKet> {
    ket.check_mode(mode)?;
    let mut out = SparseKet::zero(ket.modes)?;
    ket.apply_word_into(Complex64::new(1.0, 0.0), &[Ladder::Create(mode)], &mut out);
    Ok(out)
}

/// Matrix-element key `(bra, ket)`, i.e. the coefficient of `|bra⟩⟨ket|`.
pub type EntryKey = (Occupation, Occupation);

/// A finite-rank operator stored by its nonzero Fock matrix elements.
#[derive(Clone, PartialEq)]
pub struct SparseOperator {
    modes: usize,
    entries: BTreeMap<EntryKey, Complex64>,
}

impl SparseOperator {
    pub fn zero(modes: usize) -> Result<Self> {
        if modes == 0 {
            return Err(Error::NoModes);
        }
        Ok(Self { modes, entries: BTreeMap::new() })
    }

    pub fn from_entries<O, I>(modes: usize, entries: I) -> Result<Self>
    where
        O: Into<Occupation>,
        I: IntoIterator<Item = (O, O, Complex64)>,
    {
        let mut op = Self::zero(modes)?;
        for (bra, ket, value) in entries {
            let (bra, ket) = (bra.into(), ket.into());
            for occ in [&bra, &ket] {
                if occ.modes() != modes {
                    return Err(Error::OccupationLength { expected: modes, found: occ.modes() });
                }
            }
            op.accumulate(bra, ket, value);
        }
        Ok(op)
    }

    /// `|left⟩⟨right|`.
    pub fn outer_product(left: &SparseKet, right: &SparseKet) -> Result<Self> {
        left.same_modes(right.modes)?;
        let mut op = Self::zero(left.modes)?;
        for (b, x) in &left.terms {
            for (k, y) in &right.terms {
                op.accumulate(b.clone(), k.clone(), x * y.conj());
            }
        }
        Ok(op)
    }

    pub(crate) fn accumulate(&mut self, bra: Occupation, ket: Occupation, value: Complex64) {
        if value.is_zero() {
            return;
        }
        match self.entries.entry((bra, ket)) {
            btree_map::Entry::Vacant(slot) => {
                slot.insert(value);
            }
            btree_map::Entry::Occupied(mut slot) => {
                let sum = *slot.get() + value;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, bra: &Occupation, ket: &Occupation) -> Complex64 {
        self.entries.get(&(bra.clone(), ket.clone())).copied().unwrap_or_else(Complex64::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&EntryKey, &Complex64)> + '_ {
        self.entries.iter()
    }

    pub fn max_total(&self) -> u32 {
        self.entries.keys().map(|(b, k)| b.total().max(k.total())).max().unwrap_or(0)
    }

    pub fn scale(&self, factor: Complex64) -> SparseOperator {
        let mut out = SparseOperator { modes: self.modes, entries: BTreeMap::new() };
        for ((b, k), v) in &self.entries {
            out.accumulate(b.clone(), k.clone(), v * factor);
        }
        out
    }

    pub fn add(&self, other: &SparseOperator) -> Result<SparseOperator> {
        self.add_scaled(Complex64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &SparseOperator) -> Result<SparseOperator> {
        self.add_scaled(Complex64::new(-1.0, 0.0), other)
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: Complex64, other: &SparseOperator) -> Result<SparseOperator> {
        self.same_modes(other.modes)?;
        let mut out = self.clone();
        for ((b, k), v) in &other.entries {
            out.accumulate(b.clone(), k.clone(), v * factor);
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> SparseOperator {
        let mut out = SparseOperator { modes: self.modes, entries: BTreeMap::new() };
        for ((b, k), v) in &self.entries {
            out.entries.insert((k.clone(), b.clone()), v.conj());
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.iter().filter(|((b, k), _)| b == k).map(|(_, v)| *v).sum()
    }

    /// Operator product `self * other`.
    pub fn matmul(&self, other: &SparseOperator) -> Result<SparseOperator> {
        self.same_modes(other.modes)?;
        // Group the right factor by row so each left entry (b, j) meets the row j of `other`.
        let mut rows: BTreeMap<&Occupation, Vec<(&Occupation, Complex64)>> = BTreeMap::new();
        for ((j, k), v) in &other.entries {
            rows.entry(j).or_default().push((k, *v));
        }
        let mut out = SparseOperator::zero(self.modes)?;
        for ((b, j), x) in &self.entries {
            if let Some(row) = rows.get(j) {
                for (k, y) in row {
                    out.accumulate(b.clone(), (*k).clone(), x * y);
                }
            }
        }
        Ok(out)
    }

    /// Hilbert-Schmidt inner product `Tr[self† other]`.
    pub fn hs_inner(&self, other: &SparseOperator) -> Result<Complex64> {
        self.same_modes(other.modes)?;
        let (small, large, swap) = if self.entries.len() <= other.entries.len() {
            (&self.entries, &other.entries, false)
        } else {
            (&other.entries, &self.entries, true)
        };
        let mut acc = Complex64::zero();
        for (key, a) in small {
            if let Some(b) = large.get(key) {
                acc += if swap { b.conj() * a } else { a.conj() * b };
            }
        }
        Ok(acc)
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `max |A(b,k) - conj(A(k,b))|`.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for ((b, k), v) in &self.entries {
            let mirror = self.entries.get(&(k.clone(), b.clone())).copied().unwrap_or_else(Complex64::zero);
            worst = worst.max((v - mirror.conj()).norm());
        }
        worst
    }

    /// Applies a ladder word from the left: accumulates `coeff * word * self` into `out`.
    pub(crate) fn left_word_into(&self, coeff: Complex64, word: &[Ladder], out: &mut SparseOperator) {
        for ((b, k), v) in &self.entries {
            if let Some((elem, image)) = apply_word(word, b) {
                out.accumulate(image, k.clone(), v * coeff * elem);
            }
        }
    }

    fn same_modes(&self, other: usize) -> Result<()> {
        if self.modes != other {
            return Err(Error::ModeMismatch { left: self.modes, right: other });
        }
        Ok(())
    }
}

impl fmt::Debug for SparseOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter()).finish()
    }
}

/// `Tr[A† B]` as a free function.
pub fn hs_inner(a: &SparseOperator, b: &SparseOperator) -> Result<Complex64> {
    a.hs_inner(b)
}

/// Validation thresholds for [`DensityOperator`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityTolerances {
    pub hermiticity: f64,
    pub trace: f64,
}

impl Default for DensityTolerances {
    fn default() -> Self {
        Self { hermiticity: HERMITICITY_TOL, trace: TRACE_TOL }
    }
}

/// A validated density operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    op: SparseOperator,
    hermiticity_residual: f64,
    trace_residual: f64,
}

impl DensityOperator {
    pub fn new(op: SparseOperator) -> Result<Self> {
        Self::with_tolerances(op, DensityTolerances::default())
    }

    pub fn with_tolerances(op: SparseOperator, tol: DensityTolerances) -> Result<Self> {
        let hermiticity_residual = op.hermiticity_residual();
        if !(hermiticity_residual <= tol.hermiticity) {
            return Err(Error::NotHermitian { residual: hermiticity_residual });
        }
        let trace = op.trace();
        let trace_residual = (trace - Complex64::new(1.0, 0.0)).norm();
        if !(trace_residual <= tol.trace) {
            return Err(Error::TraceNotOne { trace: trace.re });
        }
        for ((b, k), v) in op.iter() {
            if b == k && (v.re < DIAGONAL_FLOOR || v.im.abs() > tol.hermiticity) {
                return Err(Error::BadDiagonal { value: v.re });
            }
        }
        Ok(Self { op, hermiticity_residual, trace_residual })
    }

    /// `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩`.
    pub fn pure(ket: &SparseKet) -> Result<Self> {
        let ket = ket.normalize()?;
        Self::new(SparseOperator::outer_product(&ket, &ket)?)
    }

    pub fn operator(&self) -> &SparseOperator {
        &self.op
    }

    pub fn into_operator(self) -> SparseOperator {
        self.op
    }

    pub fn modes(&self) -> usize {
        self.op.modes
    }

    pub fn hermiticity_residual(&self) -> f64 {
        self.hermiticity_residual
    }

    pub fn trace_residual(&self) -> f64 {
        self.trace_residual
    }

    /// `Tr[ρ²]`.
    pub fn purity(&self) -> f64 {
        self.op.hs_inner(&self.op).map(|z| z.re).unwrap_or(0.0)
    }
}

/// `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩`; errors on the zero vector.
pub fn outer(ket: &SparseKet) -> Result<DensityOperator> {
    DensityOperator::pure(ket)
}
