//! One function per subcommand. Each returns a serializable result plus the exit code it implies.

use std::fmt::Write;
use std::path::{Path, PathBuf};

use orbitdim_core::dynamics::{sample_sphere_state, EvolutionConfig, GramEstimator};
use orbitdim_core::generators::verify_closure;
use orbitdim_core::orbit::{
    cnot_demo, evaluate_family, generic_dimension, gram, gram_mixed, nongaussianity_witness, orbit_dimension,
    rank_psd, table_grid, uniform_phase_state, Exactness, OrbitState, TableRow, CNOT_EXPECTED,
};
use orbitdim_core::{outer, GroupKind, LieBasis, Occupation, PictureKind, SparseKet};
use serde::Serialize;

use crate::error::{exit, CliError};
use crate::report::{num, Human, Spectrum};
use crate::state_file::{sha256_hex, write_state, LoadedState, StateFile};

/// Largest accepted deviation of a Lie-closure fit.
pub const CLOSURE_TOL: f64 = 1e-10;
/// Accuracy contract of the finite-difference estimator: `1e-4 + 1e-3 |G_IJ|`.
pub const ESTIMATE_ABS_TOL: f64 = 1e-4;
pub const ESTIMATE_REL_TOL: f64 = 1e-3;

fn orbit_state(state: &LoadedState) -> OrbitState<'_> {
    match state {
        LoadedState::Ket(k) => OrbitState::Ket(k),
        LoadedState::Density(d) => OrbitState::Density(d),
    }
}

fn line(out: &mut String, args: std::fmt::Arguments<'_>) {
    let _ = out.write_fmt(args);
    out.push('\n');
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => { line($out, format_args!($($arg)*)) };
}

#[derive(Debug, Serialize)]
pub struct DimResult {
    pub group: &'static str,
    pub picture: &'static str,
    pub kind: &'static str,
    pub modes: usize,
    pub basis_size: usize,
    pub dimension: usize,
    pub spectrum: Spectrum,
}

impl Human for DimResult {
    fn human(&self, out: &mut String) {
        say!(out, "dimension: {}", self.dimension);
        say!(out, "group: {}, picture: {}, modes: {}, basis size: {}", self.group, self.picture, self.modes, self.basis_size);
        self.spectrum.human(out);
    }
}

pub fn dim(state: &LoadedState, group: GroupKind, picture: PictureKind, tol: Option<f64>) -> Result<DimResult, CliError> {
    let rank = orbit_dimension(group, orbit_state(state), picture, tol)?;
    Ok(DimResult {
        group: group.name(),
        picture: picture.name(),
        kind: state.kind().name(),
        modes: state.modes(),
        basis_size: group.dimension(state.modes()),
        dimension: rank.rank,
        spectrum: Spectrum::from(&rank),
    })
}

#[derive(Debug, Serialize)]
pub struct GramResult {
    pub group: &'static str,
    pub picture: &'static str,
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
    pub symmetry_residual: f64,
    pub dimension: usize,
    pub spectrum: Spectrum,
}

impl Human for GramResult {
    fn human(&self, out: &mut String) {
        say!(out, "gram matrix ({}, {}), rows and columns: {}", self.group, self.picture, self.labels.join(" "));
        let width = self.matrix.iter().flatten().map(|&x| num(x).len()).max().unwrap_or(1);
        for (label, row) in self.labels.iter().zip(&self.matrix) {
            let cells: Vec<String> = row.iter().map(|&x| format!("{:>width$}", num(x))).collect();
            say!(out, "{label:>8}  {}", cells.join(" "));
        }
        say!(out, "symmetry residual: {}", num(self.symmetry_residual));
        say!(out, "dimension: {}", self.dimension);
        self.spectrum.human(out);
    }
}

pub fn gram_matrix(
    state: &LoadedState,
    group: GroupKind,
    picture: PictureKind,
    tol: Option<f64>,
) -> Result<GramResult, CliError> {
    let g = gram(group, orbit_state(state), picture)?;
    let rank = rank_psd(&g, tol)?;
    Ok(GramResult {
        group: group.name(),
        picture: picture.name(),
        labels: g.basis().labels(),
        matrix: (0..g.dim()).map(|i| g.row(i).to_vec()).collect(),
        symmetry_residual: g.symmetry_residual(),
        dimension: rank.rank,
        spectrum: Spectrum::from(&rank),
    })
}

#[derive(Debug, Serialize)]
pub struct TableCell {
    pub family: &'static str,
    pub group: &'static str,
    pub picture: &'static str,
    pub m: usize,
    pub params: String,
    pub closed_form: usize,
    pub numerical: usize,
    pub exactness: &'static str,
    pub pass: bool,
}

impl From<&TableRow> for TableCell {
    fn from(row: &TableRow) -> Self {
        Self {
            family: row.family.name(),
            group: row.group.name(),
            picture: row.picture.name(),
            m: row.family.modes(),
            params: row.family.params(),
            closed_form: row.closed.value,
            numerical: row.numerical,
            exactness: match row.closed.exactness {
                Exactness::Exact => "exact",
                Exactness::UpperBoundOnly => "upper-bound",
            },
            pass: row.pass(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TableResult {
    pub m_max: usize,
    pub states: usize,
    pub exact_cells: usize,
    pub exact_failures: usize,
    pub bound_cells: usize,
    pub bound_failures: usize,
    pub rows: Vec<TableCell>,
}

impl TableResult {
    pub fn pass(&self) -> bool {
        self.exact_failures == 0 && self.bound_failures == 0
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("family,group,picture,m,params,closed_form,numerical,exactness,pass\n");
        for r in &self.rows {
            say!(
                &mut out,
                "{},{},{},{},\"{}\",{},{},{},{}",
                r.family, r.group, r.picture, r.m, r.params, r.closed_form, r.numerical, r.exactness, r.pass
            );
        }
        out
    }
}

impl Human for TableResult {
    fn human(&self, out: &mut String) {
        say!(out, "{:<24} {:<28} {:>2} {:<5} {:<7} {:>9} {:>11}  result", "family", "params", "m", "group", "picture", "numerical", "closed form");
        for r in &self.rows {
            let bound = if r.exactness == "exact" { format!("{}", r.closed_form) } else { format!("≤ {}", r.closed_form) };
            say!(
                out,
                "{:<24} {:<28} {:>2} {:<5} {:<7} {:>9} {:>11}  {}",
                r.family,
                r.params,
                r.m,
                r.group,
                r.picture,
                r.numerical,
                bound,
                if r.pass { "PASS" } else { "FAIL" }
            );
        }
        say!(out, "states: {}", self.states);
        say!(out, "exact cells: {} ({} failed)", self.exact_cells, self.exact_failures);
        say!(out, "upper-bound cells: {} ({} failed)", self.bound_cells, self.bound_failures);
    }
}

pub fn table2(m_max: usize, tol: Option<f64>) -> Result<TableResult, CliError> {
    if m_max == 0 {
        return Err(CliError::Validation("--m-max must be at least 1".into()));
    }
    let grid = table_grid(m_max);
    let mut rows = Vec::new();
    for family in &grid {
        rows.extend(evaluate_family(family, tol)?.iter().map(TableCell::from));
    }
    let count = |exact: bool, failed: bool| {
        rows.iter().filter(|r| (r.exactness == "exact") == exact && (!failed || !r.pass)).count()
    };
    Ok(TableResult {
        m_max,
        states: grid.len(),
        exact_cells: count(true, false),
        exact_failures: count(true, true),
        bound_cells: count(false, false),
        bound_failures: count(false, true),
        rows,
    })
}

#[derive(Debug, Serialize)]
pub struct GenericResult {
    pub group: &'static str,
    pub m: usize,
    #[serde(rename = "N")]
    pub n: u32,
    pub picture: &'static str,
    pub expected: usize,
    /// `false` when the sphere is a single phase orbit (vacuum only) and one evaluation suffices.
    pub sampled: bool,
    pub seed0: u64,
    pub dimensions: Vec<usize>,
    pub hits: usize,
    pub uniform_phase_dimension: usize,
}

impl GenericResult {
    pub fn pass(&self) -> bool {
        self.hits == self.dimensions.len() && self.uniform_phase_dimension == self.expected
    }
}

impl Human for GenericResult {
    fn human(&self, out: &mut String) {
        say!(out, "generic dimension ({}, m={}, N={}, {}): {}", self.group, self.m, self.n, self.picture, self.expected);
        if self.sampled {
            say!(out, "sphere samples: {}/{} at {} (seeds {}..)", self.hits, self.dimensions.len(), self.expected, self.seed0);
        } else {
            say!(out, "vacuum only: dimension {} without sampling", self.dimensions[0]);
        }
        say!(out, "uniform-phase state: {}", self.uniform_phase_dimension);
        say!(out, "verdict: {}", if self.pass() { "PASS" } else { "FAIL" });
    }
}

pub fn generic(
    group: GroupKind,
    m: usize,
    n: u32,
    picture: PictureKind,
    seeds: usize,
    seed0: u64,
    tol: Option<f64>,
) -> Result<GenericResult, CliError> {
    if picture == PictureKind::Mixed {
        return Err(CliError::Core(orbitdim_core::Error::PictureMismatch { picture: "mixed", kind: "ket" }));
    }
    if seeds == 0 {
        return Err(CliError::Validation("--seeds must be at least 1".into()));
    }
    if m == 0 {
        return Err(CliError::Core(orbitdim_core::Error::NoModes));
    }
    let expected = generic_dimension(group, m, n, picture);
    let rank = |psi: &SparseKet| -> Result<usize, CliError> { Ok(orbit_dimension(group, psi, picture, tol)?.rank) };
    let (sampled, dimensions) = if n == 0 {
        (false, vec![rank(&SparseKet::basis(Occupation::vacuum(m))?)?])
    } else {
        let dims = (0..seeds as u64)
            .map(|k| rank(&sample_sphere_state(m, n, seed0.wrapping_add(k))?))
            .collect::<Result<Vec<_>, _>>()?;
        (true, dims)
    };
    Ok(GenericResult {
        group: group.name(),
        m,
        n,
        picture: picture.name(),
        expected,
        sampled,
        seed0,
        hits: dimensions.iter().filter(|&&d| d == expected).count(),
        dimensions,
        uniform_phase_dimension: rank(&uniform_phase_state(m, n)?)?,
    })
}

#[derive(Debug, Serialize)]
pub struct ClosureResult {
    pub group: &'static str,
    pub m: usize,
    pub basis: Vec<String>,
    pub probes: usize,
    pub max_residual: f64,
    pub worst_pair: [String; 2],
    pub min_normal_eigenvalue: f64,
    pub pass: bool,
}

impl Human for ClosureResult {
    fn human(&self, out: &mut String) {
        say!(out, "closure ({}, m={}): {} basis elements, {} probes", self.group, self.m, self.basis.len(), self.probes);
        say!(out, "max residual: {} (worst pair [{}, {}])", num(self.max_residual), self.worst_pair[0], self.worst_pair[1]);
        say!(out, "smallest normal-matrix eigenvalue: {}", num(self.min_normal_eigenvalue));
        say!(out, "verdict: {} (threshold {})", if self.pass { "PASS" } else { "FAIL" }, num(CLOSURE_TOL));
    }
}

pub fn closure(group: GroupKind, m: usize) -> Result<ClosureResult, CliError> {
    let report = verify_closure(group, m)?;
    let label = |i: usize| report.pairs[i].label();
    Ok(ClosureResult {
        group: group.name(),
        m,
        basis: report.pairs.iter().map(|g| g.label()).collect(),
        probes: report.probes,
        max_residual: report.max_residual,
        worst_pair: [label(report.worst_pair.0), label(report.worst_pair.1)],
        min_normal_eigenvalue: report.min_normal_eigenvalue,
        pass: report.max_residual < CLOSURE_TOL,
    })
}

#[derive(Debug, Serialize)]
pub struct WitnessResult {
    pub modes: usize,
    pub dimension: usize,
    pub threshold: usize,
    pub witnessed: bool,
    pub spectrum: Spectrum,
}

impl Human for WitnessResult {
    fn human(&self, out: &mut String) {
        let cmp = if self.witnessed { ">" } else { "<=" };
        say!(out, "witnessed: {} ({} {cmp} {})", self.witnessed, self.dimension, self.threshold);
        say!(out, "GO ketbra dimension: {}, Gaussian value m(m+3): {}", self.dimension, self.threshold);
        self.spectrum.human(out);
    }
}

pub fn witness(state: &LoadedState, tol: Option<f64>) -> Result<WitnessResult, CliError> {
    let LoadedState::Ket(psi) = state else {
        return Err(CliError::Core(orbitdim_core::Error::PictureMismatch { picture: "ketbra", kind: "density" }));
    };
    let report = nongaussianity_witness(psi, tol)?;
    Ok(WitnessResult {
        modes: psi.modes(),
        dimension: report.dimension,
        threshold: report.threshold,
        witnessed: report.witnessed,
        spectrum: Spectrum::from(&report.rank),
    })
}

#[derive(Debug, Serialize)]
pub struct EstimateEntry {
    pub row: String,
    pub column: String,
    pub direct: f64,
    pub raw: f64,
    pub half_step: f64,
    pub extrapolated: f64,
}

#[derive(Debug, Serialize)]
pub struct EstimateResult {
    pub group: &'static str,
    pub modes: usize,
    pub step: f64,
    pub buffer: u32,
    pub cutoff: usize,
    pub max_deviation: f64,
    pub max_raw_deviation: f64,
    pub max_half_step_deviation: f64,
    pub worst_entry: [String; 2],
    pub within_tolerance: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<EstimateEntry>>,
}

impl Human for EstimateResult {
    fn human(&self, out: &mut String) {
        say!(out, "max |estimated - direct|: {} at [{}, {}]", num(self.max_deviation), self.worst_entry[0], self.worst_entry[1]);
        say!(out, "without extrapolation: {} (step h), {} (step h/2)", num(self.max_raw_deviation), num(self.max_half_step_deviation));
        say!(out, "group: {}, h: {}, photon cutoff: {} (buffer {})", self.group, num(self.step), self.cutoff, self.buffer);
        say!(
            out,
            "within {} + {} |G|: {}",
            num(ESTIMATE_ABS_TOL),
            num(ESTIMATE_REL_TOL),
            self.within_tolerance
        );
        if let Some(entries) = &self.entries {
            for e in entries {
                say!(
                    out,
                    "  [{}, {}] direct {} estimated {} (raw {}, half step {})",
                    e.row,
                    e.column,
                    num(e.direct),
                    num(e.extrapolated),
                    num(e.raw),
                    num(e.half_step)
                );
            }
        }
    }
}

pub fn estimate(
    state: &LoadedState,
    group: GroupKind,
    cfg: &EvolutionConfig,
    detail: bool,
) -> Result<EstimateResult, CliError> {
    let rho = match state {
        LoadedState::Ket(k) => outer(k)?,
        LoadedState::Density(d) => d.clone(),
    };
    let direct = gram_mixed(group, &rho)?;
    let estimator = GramEstimator::new(&rho, group, cfg)?;
    let labels = LieBasis::new(group, rho.modes())?.labels();
    let d = direct.dim();
    let (mut max_dev, mut max_raw, mut max_half, mut worst, mut ok) = (0.0f64, 0.0f64, 0.0f64, (0, 0), true);
    let mut entries = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let est = estimator.entry(i, j)?;
            let want = direct.get(i, j);
            let dev = (est.extrapolated - want).abs();
            if dev > max_dev {
                max_dev = dev;
                worst = (i, j);
            }
            ok &= dev <= ESTIMATE_ABS_TOL + ESTIMATE_REL_TOL * want.abs();
            max_raw = max_raw.max((est.raw - want).abs());
            max_half = max_half.max((est.half_step - want).abs());
            if detail {
                entries.push(EstimateEntry {
                    row: labels[i].clone(),
                    column: labels[j].clone(),
                    direct: want,
                    raw: est.raw,
                    half_step: est.half_step,
                    extrapolated: est.extrapolated,
                });
            }
        }
    }
    Ok(EstimateResult {
        group: group.name(),
        modes: rho.modes(),
        step: cfg.step,
        buffer: cfg.buffer,
        cutoff: estimator.cutoff(),
        max_deviation: max_dev,
        max_raw_deviation: max_raw,
        max_half_step_deviation: max_half,
        worst_entry: [labels[worst.0].clone(), labels[worst.1].clone()],
        within_tolerance: ok,
        entries: detail.then_some(entries),
    })
}

#[derive(Debug, Serialize)]
pub struct SampleResult {
    pub modes: usize,
    #[serde(rename = "N")]
    pub n: u32,
    pub seed: u64,
    pub terms: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub sha256: String,
    /// Present when no output file was requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<StateFile>,
}

impl Human for SampleResult {
    fn human(&self, out: &mut String) {
        match (&self.out, &self.state) {
            (Some(path), _) => say!(out, "wrote {} terms to {}", self.terms, path.display()),
            (None, Some(file)) => out.push_str(&file.to_json()),
            (None, None) => {}
        }
        say!(out, "state sha256: {} (m={}, N={}, seed {})", self.sha256, self.modes, self.n, self.seed);
    }
}

pub fn sample(m: usize, n: u32, seed: u64, out: Option<&Path>) -> Result<SampleResult, CliError> {
    let psi = sample_sphere_state(m, n, seed)?;
    let file = StateFile::from_ket(&psi);
    let sha256 = sha256_hex(file.to_json().as_bytes());
    if let Some(path) = out {
        write_state(path, &file)?;
    }
    Ok(SampleResult {
        modes: m,
        n,
        seed,
        terms: psi.len(),
        out: out.map(Path::to_path_buf),
        sha256,
        state: if out.is_none() { Some(file) } else { None },
    })
}

#[derive(Debug, Serialize)]
pub struct CnotResult {
    pub group: &'static str,
    pub plus_zero: Spectrum,
    pub phi_plus: Spectrum,
    pub dimensions: [usize; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<[usize; 2]>,
    /// Different orbit dimensions rule out a group element mapping one state to the other.
    pub excluded: bool,
    pub pass: bool,
}

impl Human for CnotResult {
    fn human(&self, out: &mut String) {
        say!(out, "{} ketbra dimension of |+0>_L: {}", self.group, self.dimensions[0]);
        say!(out, "{} ketbra dimension of |Phi+>_L: {}", self.group, self.dimensions[1]);
        if let Some([a, b]) = self.expected {
            say!(out, "expected: {a} and {b}");
        }
        if self.excluded {
            say!(out, "verdict: different dimensions, so no {} unitary maps |+0>_L to |Phi+>_L", self.group);
        } else {
            say!(out, "verdict: equal dimensions, no conclusion");
        }
        if !self.pass {
            say!(out, "FAIL: dimensions differ from the expected values");
        }
    }
}

pub fn cnot(group: GroupKind, tol: Option<f64>) -> Result<CnotResult, CliError> {
    let report = cnot_demo(group, tol)?;
    let dimensions = [report.plus_zero.rank, report.phi_plus.rank];
    let expected = (group == GroupKind::Go).then_some([CNOT_EXPECTED.0, CNOT_EXPECTED.1]);
    Ok(CnotResult {
        group: group.name(),
        plus_zero: Spectrum::from(&report.plus_zero),
        phi_plus: Spectrum::from(&report.phi_plus),
        dimensions,
        expected,
        excluded: report.excluded(),
        pass: expected.is_none_or(|e| e == dimensions),
    })
}

/// Exit code for a boolean check.
pub fn verdict(pass: bool) -> i32 {
    if pass {
        exit::OK
    } else {
        exit::CHECK_FAILED
    }
}
