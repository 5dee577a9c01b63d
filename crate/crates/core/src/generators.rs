//! Quadratic optical Hamiltonians, the Lie-algebra bases of the four optical groups, and their
//! action on sparse kets and operators.
//!
//! Mode indices are zero-based in the API; labels such as `e_12` use one-based indices.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{DensityOperator, Ladder, Occupation, SparseKet, SparseOperator};
use crate::linalg::{solve_pivoted, symmetric_eigenvalues};

const HALF: f64 = 0.5;
const INV_SQRT2: f64 = core::f64::consts::FRAC_1_SQRT_2;

/// One Hermitian generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    /// `e_kl = (a†_k a_l + a†_l a_k) / 2`
    HopRe(usize, usize),
    /// `E_kl = i (a†_k a_l - a†_l a_k) / 2`
    HopIm(usize, usize),
    /// `r_kl = (a†_k a†_l + a_k a_l) / 2`
    PairRe(usize, usize),
    /// `R_kl = i (a†_k a†_l - a_k a_l) / 2`
    PairIm(usize, usize),
    /// `N_k = a†_k a_k`
    Number(usize),
    /// `s_k = (a†_k² + a_k²) / 2`
    SqueezeRe(usize),
    /// `S_k = i (a†_k² - a_k²) / 2`
    SqueezeIm(usize),
    /// `q_k = (a†_k + a_k) / √2`
    Position(usize),
    /// `p_k = i (a†_k - a_k) / √2`
    Momentum(usize),
    Identity,
}

impl Generator {
    /// Calls `f(coefficient, word)` for each ladder monomial of the generator.
    pub fn for_each_term(&self, mut f: impl FnMut(Complex64, &[Ladder])) {
        use Ladder::{Annihilate as A, Create as C};
        let re = |x: f64| Complex64::new(x, 0.0);
        let im = |x: f64| Complex64::new(0.0, x);
        match *self {
            Generator::HopRe(k, l) => {
                f(re(HALF), &[C(k), A(l)]);
                f(re(HALF), &[C(l), A(k)]);
            }
            Generator::HopIm(k, l) => {
                f(im(HALF), &[C(k), A(l)]);
                f(im(-HALF), &[C(l), A(k)]);
            }
            Generator::PairRe(k, l) => {
                f(re(HALF), &[C(k), C(l)]);
                f(re(HALF), &[A(k), A(l)]);
            }
            Generator::PairIm(k, l) => {
                f(im(HALF), &[C(k), C(l)]);
                f(im(-HALF), &[A(k), A(l)]);
            }
            Generator::Number(k) => f(re(1.0), &[C(k), A(k)]),
            Generator::SqueezeRe(k) => {
                f(re(HALF), &[C(k), C(k)]);
                f(re(HALF), &[A(k), A(k)]);
            }
            Generator::SqueezeIm(k) => {
                f(im(HALF), &[C(k), C(k)]);
                f(im(-HALF), &[A(k), A(k)]);
            }
            Generator::Position(k) => {
                f(re(INV_SQRT2), &[C(k)]);
                f(re(INV_SQRT2), &[A(k)]);
            }
            Generator::Momentum(k) => {
                f(im(INV_SQRT2), &[C(k)]);
                f(im(-INV_SQRT2), &[A(k)]);
            }
            Generator::Identity => f(re(1.0), &[]),
        }
    }

    /// Single-letter symbol of the generator family.
    pub fn symbol(&self) -> &'static str {
        match self {
            Generator::HopRe(..) => "e",
            Generator::HopIm(..) => "E",
            Generator::PairRe(..) => "r",
            Generator::PairIm(..) => "R",
            Generator::Number(_) => "N",
            Generator::SqueezeRe(_) => "s",
            Generator::SqueezeIm(_) => "S",
            Generator::Position(_) => "q",
            Generator::Momentum(_) => "p",
            Generator::Identity => "1",
        }
    }

    /// Zero-based modes the generator acts on.
    pub fn modes(&self) -> (Option<usize>, Option<usize>) {
        match *self {
            Generator::HopRe(k, l) | Generator::HopIm(k, l) | Generator::PairRe(k, l) | Generator::PairIm(k, l) => {
                (Some(k), Some(l))
            }
            Generator::Number(k)
            | Generator::SqueezeRe(k)
            | Generator::SqueezeIm(k)
            | Generator::Position(k)
            | Generator::Momentum(k) => (Some(k), None),
            Generator::Identity => (None, None),
        }
    }

    /// Possible changes of total photon number under this generator.
    pub fn photon_shifts(&self) -> &'static [i32] {
        match self {
            Generator::HopRe(..) | Generator::HopIm(..) | Generator::Number(_) | Generator::Identity => &[0],
            Generator::PairRe(..) | Generator::PairIm(..) | Generator::SqueezeRe(_) | Generator::SqueezeIm(_) => {
                &[-2, 2]
            }
            Generator::Position(_) | Generator::Momentum(_) => &[-1, 1],
        }
    }

    /// Checks mode indices against a system of `modes` modes.
    pub fn validate(&self, modes: usize) -> Result<()> {
        match self.modes() {
            (Some(k), Some(l)) => {
                if l >= modes {
                    return Err(Error::ModeOutOfRange { mode: l, modes });
                }
                if k >= l {
                    return Err(Error::ModeOutOfRange { mode: k, modes: l });
                }
            }
            (Some(k), None) if k >= modes => return Err(Error::ModeOutOfRange { mode: k, modes }),
            _ => {}
        }
        Ok(())
    }

    /// Human label with one-based modes, e.g. `e_12`, `N_3`, `1`.
    pub fn label(&self) -> String {
        alloc::format!("{self}")
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.modes() {
            (Some(k), Some(l)) if k < 9 && l < 9 => write!(f, "{}_{}{}", self.symbol(), k + 1, l + 1),
            (Some(k), Some(l)) => write!(f, "{}_{},{}", self.symbol(), k + 1, l + 1),
            (Some(k), None) => write!(f, "{}_{}", self.symbol(), k + 1),
            _ => f.write_str(self.symbol()),
        }
    }
}

/// `H |ψ⟩`.
pub fn apply_generator(g: Generator, ket: &SparseKet) -> Result<SparseKet> {
    g.validate(ket.modes())?;
    let mut out = SparseKet::zero(ket.modes())?;
    g.for_each_term(|coeff, word| ket.apply_word_into(coeff, word, &mut out));
    Ok(out)
}

/// `H A`.
pub fn apply_left(g: Generator, op: &SparseOperator) -> Result<SparseOperator> {
    g.validate(op.modes())?;
    let mut out = SparseOperator::zero(op.modes())?;
    g.for_each_term(|coeff, word| op.left_word_into(coeff, word, &mut out));
    Ok(out)
}

/// `A H`, computed as `(H A†)†` since `H` is Hermitian.
pub fn apply_right(g: Generator, op: &SparseOperator) -> Result<SparseOperator> {
    Ok(apply_left(g, &op.adjoint())?.adjoint())
}

/// `[H, A] = H A - A H`.
pub fn commutator(g: Generator, op: &SparseOperator) -> Result<SparseOperator> {
    apply_left(g, op)?.sub(&apply_right(g, op)?)
}

/// `[H, ρ]`.
pub fn commutator_with_density(g: Generator, rho: &DensityOperator) -> Result<SparseOperator> {
    commutator(g, rho.operator())
}

/// The four optical groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupKind {
    /// Passive linear optics.
    Plo,
    /// Displaced passive linear optics.
    Dplo,
    /// Active linear optics.
    Alo,
    /// Gaussian optics.
    Go,
}

impl GroupKind {
    pub const ALL: [GroupKind; 4] = [GroupKind::Plo, GroupKind::Dplo, GroupKind::Alo, GroupKind::Go];

    /// Real dimension of the group for `m` modes.
    pub fn dimension(self, m: usize) -> usize {
        match self {
            GroupKind::Plo => m * m,
            GroupKind::Dplo => m * m + 2 * m + 1,
            GroupKind::Alo => 2 * m * m + m,
            GroupKind::Go => 2 * m * m + 3 * m + 1,
        }
    }

    pub fn has_displacements(self) -> bool {
        matches!(self, GroupKind::Dplo | GroupKind::Go)
    }

    pub fn has_squeezing(self) -> bool {
        matches!(self, GroupKind::Alo | GroupKind::Go)
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupKind::Plo => "plo",
            GroupKind::Dplo => "dplo",
            GroupKind::Alo => "alo",
            GroupKind::Go => "go",
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::Plo => "PLO",
            GroupKind::Dplo => "DPLO",
            GroupKind::Alo => "ALO",
            GroupKind::Go => "GO",
        })
    }
}

impl FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "plo" => Ok(GroupKind::Plo),
            "dplo" => Ok(GroupKind::Dplo),
            "alo" => Ok(GroupKind::Alo),
            "go" => Ok(GroupKind::Go),
            _ => Err(Error::InvalidConfig("unknown group (expected plo, dplo, alo or go)")),
        }
    }
}

/// Ordered basis `{H_1, ..., H_d}` of a group's Lie algebra (the algebra itself is `i` times
/// their real span).
///
/// Ordering: all `e_kl` with `(k, l)` lexicographic, all `E_kl`, all `N_k`; then for displaced
/// groups all `q_k`, all `p_k`, and the identity; then for squeezing groups all `r_kl`, all `R_kl`,
/// all `s_k`, all `S_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieBasis {
    group: GroupKind,
    modes: usize,
    elements: Vec<Generator>,
}

impl LieBasis {
    pub fn new(group: GroupKind, modes: usize) -> Result<Self> {
        if modes == 0 {
            return Err(Error::NoModes);
        }
        let pairs: Vec<(usize, usize)> = (0..modes).flat_map(|k| (k + 1..modes).map(move |l| (k, l))).collect();
        let mut elements = Vec::with_capacity(group.dimension(modes));
        elements.extend(pairs.iter().map(|&(k, l)| Generator::HopRe(k, l)));
        elements.extend(pairs.iter().map(|&(k, l)| Generator::HopIm(k, l)));
        elements.extend((0..modes).map(Generator::Number));
        if group.has_displacements() {
            elements.extend((0..modes).map(Generator::Position));
            elements.extend((0..modes).map(Generator::Momentum));
            elements.push(Generator::Identity);
        }
        if group.has_squeezing() {
            elements.extend(pairs.iter().map(|&(k, l)| Generator::PairRe(k, l)));
            elements.extend(pairs.iter().map(|&(k, l)| Generator::PairIm(k, l)));
            elements.extend((0..modes).map(Generator::SqueezeRe));
            elements.extend((0..modes).map(Generator::SqueezeIm));
        }
        debug_assert_eq!(elements.len(), group.dimension(modes));
        Ok(Self { group, modes, elements })
    }

    pub fn group(&self) -> GroupKind {
        self.group
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Generator] {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = &Generator> + '_ {
        self.elements.iter()
    }

    pub fn index_of(&self, g: Generator) -> Option<usize> {
        self.elements.iter().position(|&h| h == g)
    }

    pub fn labels(&self) -> Vec<String> {
        self.elements.iter().map(Generator::label).collect()
    }
}

/// `lie_basis(group, m)`.
pub fn lie_basis(group: GroupKind, modes: usize) -> Result<LieBasis> {
    LieBasis::new(group, modes)
}

/// Least-squares fit of one commutator `[iH_I, iH_J]` on the fitting set.
#[derive(Clone, Debug, PartialEq)]
pub struct PairFit {
    pub left: usize,
    pub right: usize,
    /// Real coefficients `c_K` of `iH_K`, one per fitting generator.
    pub coefficients: Vec<f64>,
    /// `sqrt(Σ_probes ‖[iH_I, iH_J]ψ - Σ_K c_K iH_K ψ‖²)`.
    pub residual: f64,
}

/// Outcome of a numerical Lie-closure check.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosureReport {
    pub pairs: Vec<Generator>,
    pub fitting: Vec<Generator>,
    pub probes: usize,
    /// One entry per ordered pair `(I, J)`, row-major over `pairs`.
    pub fits: Vec<PairFit>,
    pub max_residual: f64,
    pub worst_pair: (usize, usize),
    /// Smallest eigenvalue of the normal matrix; conditioning of the fit.
    pub min_normal_eigenvalue: f64,
}

impl ClosureReport {
    pub fn fit(&self, left: usize, right: usize) -> &PairFit {
        &self.fits[left * self.pairs.len() + right]
    }
}

/// Fock basis states with at most two photons plus the uniform-phase state `ψ_{2,m}`.
pub fn default_probes(modes: usize) -> Result<Vec<SparseKet>> {
    let mut probes: Vec<SparseKet> =
        crate::orbit::fock_basis_upto(modes, 2).into_iter().map(SparseKet::basis).collect::<Result<_>>()?;
    probes.push(crate::orbit::uniform_phase_state(modes, 2)?);
    Ok(probes)
}

/// Checks that `[iH_I, iH_J]` is a real combination of the basis, on the default probe set.
pub fn verify_closure(group: GroupKind, modes: usize) -> Result<ClosureReport> {
    let basis = LieBasis::new(group, modes)?;
    let probes = default_probes(modes)?;
    verify_closure_with(basis.elements(), basis.elements(), &probes)
}

/// Fits every commutator `[iH_I, iH_J]` (with `H_I, H_J` from `pairs`) as a real combination of
/// `iH_K` for `H_K` in `fitting`, simultaneously over all probe states.
pub fn verify_closure_with(pairs: &[Generator], fitting: &[Generator], probes: &[SparseKet]) -> Result<ClosureReport> {
    if probes.is_empty() {
        return Err(Error::EmptyProbes);
    }
    let d = fitting.len();
    let applied = |set: &[Generator]| -> Result<Vec<Vec<SparseKet>>> {
        probes.iter().map(|psi| set.iter().map(|&g| apply_generator(g, psi)).collect()).collect()
    };
    // fit_vecs[p][K] = H_K ψ_p; the fitting columns are i H_K ψ_p.
    let fit_vecs = applied(fitting)?;
    let pair_vecs = applied(pairs)?;

    let mut normal = alloc::vec![0.0; d * d];
    for vecs in &fit_vecs {
        for a in 0..d {
            for b in a..d {
                let v = vecs[a].real_inner(&vecs[b])?;
                normal[a * d + b] += v;
                if a != b {
                    normal[b * d + a] += v;
                }
            }
        }
    }
    let min_normal_eigenvalue = symmetric_eigenvalues(d, &normal).last().copied().unwrap_or(0.0);

    let n = pairs.len();
    let i = Complex64::new(0.0, 1.0);
    let mut fits: Vec<Option<PairFit>> = alloc::vec![None; n * n];
    for left in 0..n {
        for right in left..n {
            // [iH_I, iH_J] ψ = -(H_I H_J - H_J H_I) ψ
            let targets: Vec<SparseKet> = probes
                .iter()
                .enumerate()
                .map(|(p, _)| {
                    let ij = apply_generator(pairs[left], &pair_vecs[p][right])?;
                    let ji = apply_generator(pairs[right], &pair_vecs[p][left])?;
                    ji.add_scaled(Complex64::new(-1.0, 0.0), &ij)
                })
                .collect::<Result<_>>()?;
            let mut rhs = alloc::vec![0.0; d];
            for (p, t) in targets.iter().enumerate() {
                for (k, col) in fit_vecs[p].iter().enumerate() {
                    // Re⟨iH_K ψ | t⟩ = Im⟨H_K ψ | t⟩
                    rhs[k] += col.inner(t)?.im;
                }
            }
            let coefficients = solve_pivoted(d, &normal, &rhs).unwrap_or_else(|| alloc::vec![f64::NAN; d]);
            let mut res2 = 0.0;
            for (p, t) in targets.iter().enumerate() {
                let mut r = t.clone();
                for (k, col) in fit_vecs[p].iter().enumerate() {
                    if coefficients[k] != 0.0 {
                        r = r.add_scaled(-i * coefficients[k], col)?;
                    }
                }
                res2 += r.norm_sqr();
            }
            let residual = if coefficients.iter().any(|c| c.is_nan()) { f64::INFINITY } else { num_traits::Float::sqrt(res2) };
            if left != right {
                fits[right * n + left] = Some(PairFit {
                    left: right,
                    right: left,
                    coefficients: coefficients.iter().map(|c| -c).collect(),
                    residual,
                });
            }
            fits[left * n + right] = Some(PairFit { left, right, coefficients, residual });
        }
    }
    let fits: Vec<PairFit> = fits.into_iter().map(|f| f.expect("every pair fitted")).collect();
    let (mut max_residual, mut worst_pair) = (0.0, (0, 0));
    for f in &fits {
        if !(f.residual <= max_residual) {
            max_residual = f.residual;
            worst_pair = (f.left, f.right);
        }
    }
    Ok(ClosureReport {
        pairs: pairs.to_vec(),
        fitting: fitting.to_vec(),
        probes: probes.len(),
        fits,
        max_residual,
        worst_pair,
        min_normal_eigenvalue,
    })
}

/// Total photon numbers appearing in the support of a ket.
pub fn photon_numbers(ket: &SparseKet) -> Vec<u32> {
    let mut totals: Vec<u32> = ket.iter().map(|(occ, _)| Occupation::total(occ)).collect();
    totals.sort_unstable();
    totals.dedup();
    totals
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basis_lengths_and_order() {
        let plo = lie_basis(GroupKind::Plo, 2).unwrap();
        assert_eq!(plo.elements(), &[Generator::HopRe(0, 1), Generator::HopIm(0, 1), Generator::Number(0), Generator::Number(1)]);
        let go = lie_basis(GroupKind::Go, 1).unwrap();
        assert_eq!(
            go.elements(),
            &[
                Generator::Number(0),
                Generator::Position(0),
                Generator::Momentum(0),
                Generator::Identity,
                Generator::SqueezeRe(0),
                Generator::SqueezeIm(0)
            ]
        );
        assert_eq!(lie_basis(GroupKind::Dplo, 3).unwrap().len(), 16);
        for m in 1..=8 {
            for g in GroupKind::ALL {
                assert_eq!(lie_basis(g, m).unwrap().len(), g.dimension(m));
            }
        }
        assert_eq!(lie_basis(GroupKind::Plo, 0).unwrap_err(), Error::NoModes);
        assert_eq!(go.labels(), vec!["N_1", "q_1", "p_1", "1", "s_1", "S_1"]);
    }

    #[test]
    fn generator_actions() {
        let out = apply_generator(Generator::HopRe(0, 1), &SparseKet::basis([1, 0]).unwrap()).unwrap();
        assert_eq!(out, SparseKet::from_terms(2, [(vec![0, 1], c(0.5, 0.0))]).unwrap());

        let out = apply_generator(Generator::Number(0), &SparseKet::basis([3, 2]).unwrap()).unwrap();
        assert_eq!(out, SparseKet::from_terms(2, [(vec![3, 2], c(3.0, 0.0))]).unwrap());

        let out = apply_generator(Generator::Position(0), &SparseKet::basis([0]).unwrap()).unwrap();
        assert_eq!(out, SparseKet::from_terms(1, [(vec![1], c(INV_SQRT2, 0.0))]).unwrap());

        let err = apply_generator(Generator::Number(2), &SparseKet::basis([0, 0]).unwrap()).unwrap_err();
        assert_eq!(err, Error::ModeOutOfRange { mode: 2, modes: 2 });
    }

    #[test]
    fn commutators_with_density() {
        let one = DensityOperator::pure(&SparseKet::basis([1]).unwrap()).unwrap();
        assert!(commutator_with_density(Generator::Number(0), &one).unwrap().is_empty());
        assert!(commutator_with_density(Generator::Identity, &one).unwrap().is_empty());

        let vac = DensityOperator::pure(&SparseKet::basis([0]).unwrap()).unwrap();
        let comm = commutator_with_density(Generator::Position(0), &vac).unwrap();
        let expected =
            SparseOperator::from_entries(1, [(vec![1], vec![0], c(INV_SQRT2, 0.0)), (vec![0], vec![1], c(-INV_SQRT2, 0.0))])
                .unwrap();
        assert_eq!(comm, expected);
    }

    #[test]
    fn plo_closure_coefficients() {
        let report = verify_closure(GroupKind::Plo, 2).unwrap();
        assert!(report.max_residual < 1e-10, "{}", report.max_residual);
        // [i e_12, i E_12] = (1/2) i N_1 - (1/2) i N_2
        let fit = report.fit(0, 1);
        let expected = [0.0, 0.0, 0.5, -0.5];
        for (got, want) in fit.coefficients.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{:?}", fit.coefficients);
        }
        assert!(report.min_normal_eigenvalue > 0.0);
    }

    #[test]
    fn removing_number_operator_breaks_closure() {
        let basis = lie_basis(GroupKind::Plo, 2).unwrap();
        let fitting: Vec<Generator> = basis.iter().copied().filter(|&g| g != Generator::Number(0)).collect();
        let report = verify_closure_with(basis.elements(), &fitting, &default_probes(2).unwrap()).unwrap();
        assert!(report.fit(0, 1).residual >= 0.1, "{}", report.fit(0, 1).residual);
    }

    #[test]
    fn empty_probes_rejected() {
        let basis = lie_basis(GroupKind::Plo, 1).unwrap();
        assert_eq!(verify_closure_with(basis.elements(), basis.elements(), &[]).unwrap_err(), Error::EmptyProbes);
    }

    #[test]
    fn validation_of_descriptors() {
        assert!(Generator::HopRe(0, 1).validate(2).is_ok());
        assert!(Generator::HopRe(1, 1).validate(3).is_err());
        assert!(Generator::HopRe(1, 0).validate(3).is_err());
        assert!(Generator::PairIm(0, 3).validate(3).is_err());
        assert!(Generator::Identity.validate(1).is_ok());
        assert_eq!(Generator::PairIm(9, 10).label(), "R_10,11");
        assert_eq!("GO".parse::<GroupKind>().unwrap(), GroupKind::Go);
        assert!("xyz".parse::<GroupKind>().is_err());
    }
}
