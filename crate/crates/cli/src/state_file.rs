//! JSON state files.
//!
//! ```json
//! {"modes": 2, "kind": "ket", "terms": [{"occ": [1, 0], "re": 0.6, "im": 0.0}, ...]}
//! {"modes": 1, "kind": "density", "entries": [{"bra": [0], "ket": [0], "re": 0.5, "im": 0.0}, ...]}
//! ```

use std::collections::BTreeSet;
use std::path::Path;

use num_complex::Complex64;
use orbitdim_core::fock::{DensityOperator, SparseOperator};
use orbitdim_core::{Occupation, SparseKet};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Largest accepted `| ‖ψ‖ - 1 |` for ket files.
pub const KET_NORM_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Ket,
    Density,
}

impl StateKind {
    pub fn name(self) -> &'static str {
        match self {
            StateKind::Ket => "ket",
            StateKind::Density => "density",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KetTerm {
    pub occ: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityEntry {
    pub bra: Vec<u32>,
    pub ket: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub modes: usize,
    pub kind: StateKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<KetTerm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<DensityEntry>>,
}

/// A validated state read from a file.
#[derive(Clone, Debug, PartialEq)]
pub enum LoadedState {
    Ket(SparseKet),
    Density(DensityOperator),
}

impl LoadedState {
    pub fn kind(&self) -> StateKind {
        match self {
            LoadedState::Ket(_) => StateKind::Ket,
            LoadedState::Density(_) => StateKind::Density,
        }
    }

    pub fn modes(&self) -> usize {
        match self {
            LoadedState::Ket(k) => k.modes(),
            LoadedState::Density(d) => d.modes(),
        }
    }
}

fn invalid(msg: String) -> CliError {
    CliError::Validation(msg)
}

fn check_occ(modes: usize, occ: &[u32], at: &str) -> Result<Occupation, CliError> {
    if occ.len() != modes {
        return Err(invalid(format!("{at}: occupation has length {}, expected {modes}", occ.len())));
    }
    Ok(Occupation::new(occ.to_vec()))
}

fn check_finite(re: f64, im: f64, at: &str) -> Result<Complex64, CliError> {
    if !re.is_finite() || !im.is_finite() {
        return Err(invalid(format!("{at}: amplitude is not finite")));
    }
    Ok(Complex64::new(re, im))
}

impl StateFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    /// Checks structure and builds the core state.
    pub fn validate(&self) -> Result<LoadedState, CliError> {
        if self.modes == 0 {
            return Err(invalid("modes must be at least 1".into()));
        }
        match self.kind {
            StateKind::Ket => {
                if self.entries.is_some() {
                    return Err(invalid("ket files carry `terms`, not `entries`".into()));
                }
                let terms = self.terms.as_ref().ok_or_else(|| invalid("ket file has no `terms` list".into()))?;
                let mut seen = BTreeSet::new();
                let mut parsed = Vec::with_capacity(terms.len());
                for (i, t) in terms.iter().enumerate() {
                    let at = format!("terms[{i}]");
                    let occ = check_occ(self.modes, &t.occ, &at)?;
                    if !seen.insert(occ.clone()) {
                        return Err(invalid(format!("{at}: duplicate occupation {occ}")));
                    }
                    parsed.push((occ, check_finite(t.re, t.im, &at)?));
                }
                let ket = SparseKet::from_terms(self.modes, parsed)?;
                let norm = ket.norm();
                if !((norm - 1.0).abs() <= KET_NORM_TOL) {
                    return Err(invalid(format!("ket norm is {norm:.12}, expected 1 within {KET_NORM_TOL:e}")));
                }
                Ok(LoadedState::Ket(ket))
            }
            StateKind::Density => {
                if self.terms.is_some() {
                    return Err(invalid("density files carry `entries`, not `terms`".into()));
                }
                let entries =
                    self.entries.as_ref().ok_or_else(|| invalid("density file has no `entries` list".into()))?;
                let mut seen = BTreeSet::new();
                let mut parsed = Vec::with_capacity(entries.len());
                for (i, e) in entries.iter().enumerate() {
                    let at = format!("entries[{i}]");
                    let bra = check_occ(self.modes, &e.bra, &format!("{at}.bra"))?;
                    let ket = check_occ(self.modes, &e.ket, &format!("{at}.ket"))?;
                    if !seen.insert((bra.clone(), ket.clone())) {
                        return Err(invalid(format!("{at}: duplicate entry ({bra}, {ket})")));
                    }
                    parsed.push((bra, ket, check_finite(e.re, e.im, &at)?));
                }
                let op = SparseOperator::from_entries(self.modes, parsed)?;
                Ok(LoadedState::Density(DensityOperator::new(op)?))
            }
        }
    }

    pub fn from_ket(ket: &SparseKet) -> Self {
        let terms = ket.iter().map(|(o, a)| KetTerm { occ: o.counts().to_vec(), re: a.re, im: a.im }).collect();
        Self { modes: ket.modes(), kind: StateKind::Ket, terms: Some(terms), entries: None }
    }

    pub fn from_density(rho: &DensityOperator) -> Self {
        let entries = rho
            .operator()
            .iter()
            .map(|((b, k), v)| DensityEntry { bra: b.counts().to_vec(), ket: k.counts().to_vec(), re: v.re, im: v.im })
            .collect();
        Self { modes: rho.modes(), kind: StateKind::Density, terms: None, entries: Some(entries) }
    }

    pub fn from_state(state: &LoadedState) -> Self {
        match state {
            LoadedState::Ket(k) => Self::from_ket(k),
            LoadedState::Density(d) => Self::from_density(d),
        }
    }

    /// Pretty JSON; floats use the shortest representation that parses back to the same value.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("state files always serialize");
        s.push('\n');
        s
    }
}

/// A state file together with the SHA-256 of its bytes.
#[derive(Clone, Debug)]
pub struct Input {
    pub state: LoadedState,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn parse_state(text: &str) -> Result<LoadedState, CliError> {
    StateFile::parse(text)?.validate()
}

pub fn read_state(path: &Path) -> Result<Input, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Validation(format!("{}: file is not UTF-8", path.display())))?;
    let state = parse_state(&text).map_err(|e| e.in_file(path))?;
    Ok(Input { state, sha256: sha256_hex(&bytes) })
}

pub fn write_state(path: &Path, file: &StateFile) -> Result<(), CliError> {
    std::fs::write(path, file.to_json()).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
