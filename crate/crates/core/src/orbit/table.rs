use alloc::vec::Vec;

use crate::error::Result;
use crate::fock::Occupation;
use crate::generators::GroupKind;

use super::closed_form::{closed_form, sample_amplitudes, ClosedForm, StateFamily};
use super::{orbit_dimension, PictureKind};

/// One cell of the regenerated table: a state, a group and a pure picture.
#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub family: StateFamily,
    pub group: GroupKind,
    pub picture: PictureKind,
    pub closed: ClosedForm,
    pub numerical: usize,
}

impl TableRow {
    pub fn pass(&self) -> bool {
        self.closed.admits(self.numerical)
    }
}

/// All vectors of length `len` over `alphabet`, lexicographic.
fn words(alphabet: &[u32], len: usize) -> Vec<Vec<u32>> {
    let mut out = alloc::vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                alphabet.iter().map(move |&a| {
                    let mut next = w.clone();
                    next.push(a);
                    next
                })
            })
            .collect();
    }
    out
}

/// Fock occupations over `{0,1,2,3}`: every vector for up to three modes; for more modes the
/// non-increasing vectors and their reversals.
fn fock_grid(m: usize) -> Vec<Occupation> {
    let mut occs = words(&[0, 1, 2, 3], m);
    if m > 3 {
        occs.retain(|w| w.windows(2).all(|p| p[0] >= p[1]));
        let reversed: Vec<Vec<u32>> = occs.iter().map(|w| w.iter().rev().copied().collect()).collect();
        occs.extend(reversed);
        occs.sort();
        occs.dedup();
    }
    occs.into_iter().map(Occupation::new).collect()
}

/// Supports of the one-mode superpositions (two to four terms, some with gaps).
const SUPERPOSITION_SUPPORTS: [&[u32]; 5] = [&[0, 1], &[1, 3], &[0, 1, 2], &[0, 2, 5], &[0, 1, 2, 3]];

/// Structured states for modes `1..=m_max`: Fock states, NOON states with `N ∈ {3,4,5}`, and
/// one-mode superpositions, with tails over `{0,1,2}`.
pub fn table_grid(m_max: usize) -> Vec<StateFamily> {
    let mut grid = Vec::new();
    for m in 1..=m_max {
        grid.extend(fock_grid(m).into_iter().map(StateFamily::FockBasis));
        for tail in words(&[0, 1, 2], m - 1) {
            for support in SUPERPOSITION_SUPPORTS {
                grid.push(StateFamily::OneModeSuperposition {
                    amplitudes: sample_amplitudes(support),
                    tail: Occupation::new(tail.clone()),
                });
            }
        }
        if m >= 2 {
            for tail in words(&[0, 1, 2], m - 2) {
                for photons in 3..=5 {
                    grid.push(StateFamily::Noon { photons, tail: Occupation::new(tail.clone()) });
                }
            }
        }
    }
    grid
}

/// Numerical and tabulated dimension of one state for every group and both pure pictures.
pub fn evaluate_family(family: &StateFamily, tolerance: Option<f64>) -> Result<Vec<TableRow>> {
    let psi = family.state()?;
    let mut rows = Vec::with_capacity(8);
    for group in GroupKind::ALL {
        for picture in PictureKind::PURE {
            rows.push(TableRow {
                family: family.clone(),
                group,
                picture,
                closed: closed_form(family, group, picture)?,
                numerical: orbit_dimension(group, &psi, picture, tolerance)?.rank,
            });
        }
    }
    Ok(rows)
}
