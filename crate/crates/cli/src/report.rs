//! Structured (JSON) and human renderings of command results.
//!
//! Both renderings are produced from the same result value. The structured form never contains
//! timing, so repeated runs on the same input produce byte-identical output.

use std::fmt::Write;
use std::time::Duration;

use orbitdim_core::orbit::{RankResult, DEFAULT_RELATIVE_TOL};
use serde::Serialize;

pub const SCHEMA: &str = "orbitdim.report/1";

/// How a rank threshold is chosen.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "policy", rename_all = "lowercase")]
pub enum TolerancePolicy {
    /// `τ = factor · max(1, λ_max)`.
    Relative { factor: f64 },
    Absolute { value: f64 },
}

impl TolerancePolicy {
    pub fn from_flag(tol: Option<f64>) -> Self {
        match tol {
            Some(value) => TolerancePolicy::Absolute { value },
            None => TolerancePolicy::Relative { factor: DEFAULT_RELATIVE_TOL },
        }
    }

    fn describe(&self) -> String {
        match self {
            TolerancePolicy::Relative { factor } => format!("relative, {} * max(1, lambda_max)", num(*factor)),
            TolerancePolicy::Absolute { value } => format!("absolute, {}", num(*value)),
        }
    }
}

/// A command result that can be printed for people.
pub trait Human {
    fn human(&self, out: &mut String);
}

#[derive(Serialize)]
pub struct Report<'a, T: Serialize> {
    pub schema: &'static str,
    pub command: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_sha256: Option<&'a str>,
    pub tolerance: &'a TolerancePolicy,
    pub result: &'a T,
}

/// Rendering context shared by every command.
pub struct Context {
    pub command: Vec<String>,
    pub json: bool,
    pub tolerance: TolerancePolicy,
    pub input_sha256: Option<String>,
}

impl Context {
    pub fn render<T: Serialize + Human>(&self, result: &T, elapsed: Duration) -> String {
        if self.json {
            let report = Report {
                schema: SCHEMA,
                command: &self.command,
                input_sha256: self.input_sha256.as_deref(),
                tolerance: &self.tolerance,
                result,
            };
            let mut s = serde_json::to_string_pretty(&report).expect("reports always serialize");
            s.push('\n');
            s
        } else {
            let mut out = String::new();
            result.human(&mut out);
            if let Some(digest) = &self.input_sha256 {
                let _ = writeln!(out, "input sha256: {digest}");
            }
            let _ = writeln!(out, "tolerance: {}", self.tolerance.describe());
            let _ = writeln!(out, "elapsed: {} ms", elapsed.as_millis());
            out
        }
    }
}

/// Six significant digits.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let a = x.abs();
    if (1e-3..1e6).contains(&a) {
        let decimals = (5 - a.log10().floor() as i32).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}

pub fn num_list(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(", ")
}

/// Spectrum and threshold of a rank computation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    pub rank: usize,
    pub eigenvalues: Vec<f64>,
    pub tolerance_used: f64,
}

impl From<&RankResult> for Spectrum {
    fn from(r: &RankResult) -> Self {
        Self { rank: r.rank, eigenvalues: r.eigenvalues.clone(), tolerance_used: r.tolerance_used }
    }
}

impl Human for Spectrum {
    fn human(&self, out: &mut String) {
        let _ = writeln!(out, "eigenvalues: [{}]", num_list(&self.eigenvalues));
        let _ = writeln!(out, "threshold: {}", num(self.tolerance_used));
    }
}
