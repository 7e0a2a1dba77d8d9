//! Command plumbing behind the `hdx` binary.
//!
//! Every command takes a validated [`RunConfig`] and returns the exact bytes to
//! write, so the binary stays a thin argument parser and tests can call commands
//! directly. Multi-trial commands emit one JSON object per trial followed by a
//! summary object; everything else emits a single JSON object.
//!
//! Defaults: `tol = 1e-9`, `seed = 0`, `trials = 1`, `j = d−1`, `ℓ = d`, sizes
//! split `n` evenly across the `ℓ+1` sets.
//!
//! Exit codes: 0 success, 2 validation error, 3 numerical failure, 4 bound violation.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::applications::{
    chromatic_lower_bound, chromatic_number_exact, ideal_expander_check, overlap_bound, overlap_estimate,
    CandidateStrategy,
};
use crate::complex::SimplicialComplex;
use crate::error::HdxError;
use crate::generators::{random_disjoint_family, GeneratorSpec};
use crate::hodge::{
    adjacency_matrix, boundary_matrix, degree_matrix, identity_suite, laplacian, AdjacencyKind, LaplacianKind,
    OperatorMatrix,
};
use crate::mixing::{count_galleries_bruteforce, count_galleries_operator, descent_check, from_j_to_l_check, VertexFamily};
use crate::spectral::{certify, CertificateSet, SpectralSummary};

pub const DEFAULT_TOL: f64 = 1e-9;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Generate,
    Spectrum,
    Certify,
    Mixing,
    Descent,
    Galleries,
    Invariants,
    Overlap,
    Chromatic,
    Ideal,
    Export,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Generate => "generate",
            Self::Spectrum => "spectrum",
            Self::Certify => "certify",
            Self::Mixing => "mixing",
            Self::Descent => "descent",
            Self::Galleries => "galleries",
            Self::Invariants => "invariants",
            Self::Overlap => "overlap",
            Self::Chromatic => "chromatic",
            Self::Ideal => "ideal",
            Self::Export => "export",
        }
    }

    fn multi_trial(self) -> bool {
        matches!(self, Self::Mixing | Self::Descent)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Jsonl,
}

impl FromStr for Format {
    type Err = HdxError;

    fn from_str(s: &str) -> Result<Self, HdxError> {
        match s {
            "json" => Ok(Self::Json),
            "jsonl" => Ok(Self::Jsonl),
            _ => Err(HdxError::Parse(format!("unknown format '{s}'"))),
        }
    }
}

/// Operators available to `export`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorName {
    Boundary,
    Upper,
    Lower,
    Full,
    Similar,
    Pitchfork,
    Degree,
}

impl FromStr for OperatorName {
    type Err = HdxError;

    fn from_str(s: &str) -> Result<Self, HdxError> {
        Ok(match s {
            "boundary" => Self::Boundary,
            "upper" => Self::Upper,
            "lower" => Self::Lower,
            "full" => Self::Full,
            "similar" => Self::Similar,
            "pitchfork" => Self::Pitchfork,
            "degree" => Self::Degree,
            _ => return Err(HdxError::Parse(format!("unknown operator '{s}'"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Where the complex comes from. `file:PATH` covers `--input`.
    pub source: Option<GeneratorSpec>,
    pub j: Option<isize>,
    pub l: Option<usize>,
    pub sizes: Option<Vec<usize>>,
    /// Explicit vertex sets for `galleries`.
    pub sets: Option<Vec<Vec<usize>>>,
    pub seed: u64,
    pub trials: usize,
    /// Fixed `k_j` for `certify`, or `k_0, k_1, …` for the bound commands.
    pub k: Vec<f64>,
    pub tol: f64,
    pub pach: Option<f64>,
    pub max_colors: Option<usize>,
    pub centroid_cells: usize,
    pub random_points: usize,
    pub operator: Option<OperatorName>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        let strategy = CandidateStrategy::default();
        Self {
            command,
            source: None,
            j: None,
            l: None,
            sizes: None,
            sets: None,
            seed: 0,
            trials: 1,
            k: Vec::new(),
            tol: DEFAULT_TOL,
            pach: None,
            max_colors: None,
            centroid_cells: strategy.centroid_cells,
            random_points: strategy.random_points,
            operator: None,
            format: None,
        }
    }

    pub fn with_source(mut self, source: GeneratorSpec) -> Self {
        self.source = Some(source);
        self
    }

    pub fn validate(&self) -> Result<(), HdxError> {
        let bad = |m: String| Err(HdxError::InvalidParameter(m));
        if self.source.is_none() {
            return bad(format!("{} needs --input or --generator", self.command.name()));
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return bad(format!("tolerance must be a nonnegative number, got {}", self.tol));
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if let Some(k) = self.k.iter().find(|k| !(k.is_finite() && **k > 0.0)) {
            return Err(HdxError::NonPositiveK(*k));
        }
        if let Some(p) = self.pach {
            if !(p.is_finite() && p > 0.0) {
                return bad(format!("pach constant must be positive, got {p}"));
            }
        }
        if let (Some(sizes), Some(l)) = (&self.sizes, self.l) {
            if sizes.len() != l + 1 {
                return bad(format!("--l {l} needs {} sizes, got {}", l + 1, sizes.len()));
            }
        }
        match self.command {
            Command::Certify if self.j.is_none() => bad("certify needs --j".into()),
            Command::Certify if self.k.len() > 1 => bad("certify takes a single --k".into()),
            Command::Galleries if self.j.is_none() => bad("galleries needs --j".into()),
            Command::Galleries if self.sets.is_none() && self.sizes.is_none() => {
                bad("galleries needs --sets or --sizes".into())
            }
            Command::Export if self.operator.is_none() || self.j.is_none() => {
                bad("export needs --operator and --j".into())
            }
            _ => Ok(()),
        }
    }

    fn format(&self) -> Format {
        self.format.unwrap_or(if self.command.multi_trial() { Format::Jsonl } else { Format::Json })
    }

    fn overrides(&self) -> Vec<Option<f64>> {
        self.k.iter().copied().map(Some).collect()
    }
}

/// Bytes to write plus the process exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub text: String,
    pub exit_code: i32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CliError {
    pub exit_code: i32,
    pub error: HdxError,
}

impl CliError {
    pub fn to_json(&self) -> String {
        let obj = json!({
            "error": {
                "kind": error_kind(&self.error),
                "message": self.error.to_string(),
                "exit_code": self.exit_code,
            }
        });
        obj.to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.error)
    }
}

impl From<HdxError> for CliError {
    fn from(error: HdxError) -> Self {
        let exit_code = match error {
            HdxError::NoConvergence(_) | HdxError::NonIntegerCount(_) => EXIT_NUMERICAL,
            _ => EXIT_VALIDATION,
        };
        Self { exit_code, error }
    }
}

pub fn error_kind(e: &HdxError) -> &'static str {
    match e {
        HdxError::VertexOutOfRange { .. } => "vertex_out_of_range",
        HdxError::RepeatedVertex(_) => "repeated_vertex",
        HdxError::EmptyFacet => "empty_facet",
        HdxError::CellNotFound(_) => "cell_not_found",
        HdxError::DimensionMismatch(..) => "dimension_mismatch",
        HdxError::DimensionOutOfRange { .. } => "dimension_out_of_range",
        HdxError::NotSquare { .. } => "not_square",
        HdxError::NoConvergence(_) => "no_convergence",
        HdxError::EmptyNontrivialSpectrum(_) => "empty_nontrivial_spectrum",
        HdxError::NonPositiveK(_) => "non_positive_k",
        HdxError::OverlappingSets(..) => "overlapping_sets",
        HdxError::NotAnExpander { .. } => "not_an_expander",
        HdxError::MissingCertificate(_) => "missing_certificate",
        HdxError::NonIntegerCount(_) => "non_integer_count",
        HdxError::InvalidParameter(_) => "invalid_parameter",
        HdxError::ZeroEpsilonSum => "zero_epsilon_sum",
        HdxError::TooManyVertices { .. } => "too_many_vertices",
        HdxError::NoTopCells => "no_top_cells",
        HdxError::Io(_) => "io",
        HdxError::Parse(_) => "parse",
    }
}

/// Validates `config` and runs its command.
pub fn run(config: &RunConfig) -> Result<RunOutput, CliError> {
    config.validate()?;
    let x = config.source.as_ref().expect("validated").build()?;
    match config.command {
        Command::Generate => cmd_generate(&x),
        Command::Spectrum => cmd_spectrum(&x),
        Command::Certify => cmd_certify(&x, config),
        Command::Mixing => cmd_mixing(&x, config),
        Command::Descent => cmd_descent(&x, config),
        Command::Galleries => cmd_galleries(&x, config),
        Command::Invariants => cmd_invariants(&x),
        Command::Overlap => cmd_overlap(&x, config),
        Command::Chromatic => cmd_chromatic(&x, config),
        Command::Ideal => cmd_ideal(&x, config),
        Command::Export => cmd_export(&x, config),
    }
}

fn single<T: Serialize>(value: &T, ok: bool) -> Result<RunOutput, CliError> {
    let text = serde_json::to_string(value).map_err(HdxError::from)? + "\n";
    Ok(RunOutput { text, exit_code: if ok { EXIT_OK } else { EXIT_VIOLATION } })
}

pub fn cmd_generate(x: &SimplicialComplex) -> Result<RunOutput, CliError> {
    Ok(RunOutput { text: x.to_json() + "\n", exit_code: EXIT_OK })
}

pub fn cmd_spectrum(x: &SimplicialComplex) -> Result<RunOutput, CliError> {
    Ok(RunOutput { text: SpectralSummary::compute(x)?.to_json() + "\n", exit_code: EXIT_OK })
}

pub fn cmd_certify(x: &SimplicialComplex, config: &RunConfig) -> Result<RunOutput, CliError> {
    let cert = certify(x, config.j.expect("validated"), config.k.first().copied())?;
    single(&cert, true)
}

fn default_sizes(n: usize, l: usize) -> Vec<usize> {
    vec![(n / (l + 1)).max(1); l + 1]
}

/// `(j, sizes)` for the bound commands, filling documented defaults.
fn bound_params(x: &SimplicialComplex, config: &RunConfig) -> Result<(isize, Vec<usize>), HdxError> {
    let d = x.dim();
    if d < 1 {
        return Err(HdxError::InvalidParameter("bound checks need a complex of dimension >= 1".into()));
    }
    let sizes = match (&config.sizes, config.l) {
        (Some(s), _) => s.clone(),
        (None, l) => default_sizes(x.n(), l.unwrap_or(d as usize)),
    };
    let l = sizes.len().saturating_sub(1);
    let j = config.j.unwrap_or((l.min(d as usize) as isize) - 1);
    Ok((j, sizes))
}

fn trial_seed(seed: u64, t: usize) -> u64 {
    seed.wrapping_add(t as u64)
}

struct TrialRun {
    lines: Vec<Value>,
    violations: usize,
    min_slack: f64,
}

fn emit_trials(config: &RunConfig, run: TrialRun) -> Result<RunOutput, CliError> {
    let summary = json!({
        "summary": {
            "command": config.command.name(),
            "trials": run.lines.len(),
            "violations": run.violations,
            "min_slack": run.min_slack,
            "seed": config.seed,
        }
    });
    let text = match config.format() {
        Format::Jsonl => {
            let mut out = String::new();
            for v in run.lines.iter().chain(std::iter::once(&summary)) {
                out.push_str(&v.to_string());
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let mut obj = summary;
            obj["trials"] = Value::Array(run.lines);
            obj.to_string() + "\n"
        }
    };
    let exit_code = if run.violations > 0 { EXIT_VIOLATION } else { EXIT_OK };
    Ok(RunOutput { text, exit_code })
}

/// Per-trial `from_j_to_l` checks on seeded disjoint families. With the default
/// `j = d−1, ℓ = d` this is the top-dimensional mixing lemma.
pub fn cmd_mixing(x: &SimplicialComplex, config: &RunConfig) -> Result<RunOutput, CliError> {
    let (j, sizes) = bound_params(x, config)?;
    let certs = CertificateSet::compute(x, &config.overrides())?;
    let mut run = TrialRun { lines: Vec::new(), violations: 0, min_slack: f64::INFINITY };
    for t in 0..config.trials {
        let seed = trial_seed(config.seed, t);
        let family = random_disjoint_family(x.n(), &sizes, seed)?;
        let report = from_j_to_l_check(x, j, &family, &certs, config.tol)?;
        run.min_slack = run.min_slack.min(report.slack);
        run.violations += usize::from(!report.holds);
        run.lines.push(json!({ "trial": t, "seed": seed, "family": family.sets(), "report": report }));
    }
    emit_trials(config, run)
}

pub fn cmd_descent(x: &SimplicialComplex, config: &RunConfig) -> Result<RunOutput, CliError> {
    let (j, sizes) = bound_params(x, config)?;
    let certs = CertificateSet::compute(x, &config.overrides())?;
    let mut run = TrialRun { lines: Vec::new(), violations: 0, min_slack: f64::INFINITY };
    for t in 0..config.trials {
        let seed = trial_seed(config.seed, t);
        let family = random_disjoint_family(x.n(), &sizes, seed)?;
        let report = descent_check(x, j, &family, &certs, config.tol)?;
        let slack = report.bound - report.deviation;
        run.min_slack = run.min_slack.min(slack);
        run.violations += usize::from(!(report.holds && report.holds_improved));
        run.lines.push(json!({ "trial": t, "seed": seed, "family": family.sets(), "slack": slack, "report": report }));
    }
    emit_trials(config, run)
}

/// Brute-force gallery count next to both operator-product counts where they apply.
pub fn cmd_galleries(x: &SimplicialComplex, config: &RunConfig) -> Result<RunOutput, CliError> {
    let j = config.j.expect("validated");
    if j < 0 {
        return Err(HdxError::InvalidParameter(format!("gallery dimension must be >= 0, got {j}")).into());
    }
    let sets = match (&config.sets, &config.sizes) {
        (Some(s), _) => s.clone(),
        (None, Some(sizes)) => random_disjoint_family(x.n(), sizes, config.seed)?.sets().to_vec(),
        (None, None) => unreachable!("validated"),
    };
    let family = VertexFamily::windowed(sets, j as usize + 1)?;
    let brute = count_galleries_bruteforce(x, j, &family)?;
    let optional = |r: Result<u128, HdxError>| match r {
        Ok(c) => Ok(Some(c)),
        Err(HdxError::InvalidParameter(_) | HdxError::DimensionOutOfRange { .. }) => Ok(None),
        Err(e) => Err(e),
    };
    let pitchfork = optional(count_galleries_operator(x, j, &family, AdjacencyKind::Pitchfork))?;
    let similar = if j >= 1 {
        optional(count_galleries_operator(x, j - 1, &family, AdjacencyKind::Similar))?
    } else {
        None
    };
    let agree = pitchfork.is_none_or(|c| c == brute) && similar.is_none_or(|c| c == brute);
    let report = json!({
        "j": j,
        "l": family.last_index(),
        "sets": family.sets(),
        "count": brute,
        "operator_pitchfork": pitchfork,
        "operator_similar": similar,
        "agree": agree,
    });
    single(&report, agree)
}

pub fn cmd_invariants(x: &SimplicialComplex) -> Result<RunOutput, CliError> {
    let checks = identity_suite(x)?;
    let all_hold = checks.iter().all(|c| c.holds);
    single(&json!({ "n": x.n(), "d": x.dim(), "checks": checks, "all_hold": all_hold }), all_hold)
}

/// Overlap lower bound from certificates (when `--pach` is given) and the
/// heuristic embedding estimate over `trials` embeddings.
pub fn cmd_overlap(x: &SimplicialComplex, config: &RunConfig) -> Result<RunOutput, CliError> {
    let certs = CertificateSet::compute(x, &config.overrides())?;
    let bound = match config.pach {
        Some(p) => Some(overlap_bound(x.dim(), p, &certs)?),
        None => None,
    };
    let strategy = CandidateStrategy { centroid_cells: config.centroid_cells, random_points: config.random_points };
    let estimate = overlap_estimate(x, config.trials, strategy, config.seed)?;
    let report = json!({
        "d": x.dim(),
        "pach": config.pach,
        "bound": bound,
        "estimate": estimate,
        "centroid_cells": strategy.centroid_cells,
        "random_points": strategy.random_points,
    });
    single(&report, true)
}

pub fn cmd_chromatic(x: &SimplicialComplex, config: &RunConfig) -> Result<RunOutput, CliError> {
    let certs = CertificateSet::compute(x, &config.overrides())?;
    let (lower, note) = match chromatic_lower_bound(x.dim(), &certs) {
        Ok(b) => (Some(b), None),
        Err(e @ (HdxError::ZeroEpsilonSum | HdxError::NotAnExpander { .. } | HdxError::InvalidParameter(_))) => {
            (None, Some(e.to_string()))
        }
        Err(e) => return Err(e.into()),
    };
    let c_max = config.max_colors.unwrap_or(x.n().max(1));
    let exact = chromatic_number_exact(x, c_max)?;
    let lower_ceil = lower.map(|b| b.ceil());
    let consistent = match (lower_ceil, exact) {
        (Some(b), Some(c)) => b <= c as f64,
        _ => true,
    };
    let report = json!({
        "lower_bound": lower,
        "lower_bound_ceil": lower_ceil,
        "note": note,
        "max_colors": c_max,
        "exact": exact,
        "consistent": consistent,
    });
    single(&report, consistent)
}

/// Ideal-expander check with `trials` random families (20 when `--trials` is 1).
pub fn cmd_ideal(x: &SimplicialComplex, config: &RunConfig) -> Result<RunOutput, CliError> {
    let families = if config.trials == 1 { 20 } else { config.trials };
    let report = ideal_expander_check(x, families, config.seed)?;
    let ok = report.rigidity_holds && report.mixing_holds;
    single(&report, ok)
}

/// Writes one operator as text COO (`rows cols nnz` header, then `r c v` lines).
pub fn cmd_export(x: &SimplicialComplex, config: &RunConfig) -> Result<RunOutput, CliError> {
    let j = config.j.expect("validated");
    let m: OperatorMatrix = match config.operator.expect("validated") {
        OperatorName::Boundary => boundary_matrix(x, j)?,
        OperatorName::Upper => laplacian(x, j, LaplacianKind::Upper)?,
        OperatorName::Lower => laplacian(x, j, LaplacianKind::Lower)?,
        OperatorName::Full => laplacian(x, j, LaplacianKind::Full)?,
        OperatorName::Similar => adjacency_matrix(x, j, AdjacencyKind::Similar)?,
        OperatorName::Pitchfork => adjacency_matrix(x, j, AdjacencyKind::Pitchfork)?,
        OperatorName::Degree => degree_matrix(x, j)?,
    };
    Ok(RunOutput { text: m.to_coo_string(), exit_code: EXIT_OK })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(command: Command, spec: &str) -> RunConfig {
        RunConfig::new(command).with_source(spec.parse().unwrap())
    }

    #[test]
    fn certify_three_cycle() {
        let mut c = config(Command::Certify, "complete:3:1");
        c.j = Some(0);
        let out = run(&c).unwrap();
        let v: Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v["k"], 3.0);
        assert_eq!(v["eps"], 0.0);
        assert_eq!(v["valid"], true);
    }

    #[test]
    fn galleries_k4() {
        let mut c = config(Command::Galleries, "complete:4:1");
        c.j = Some(1);
        c.sets = Some(vec![vec![0], vec![1], vec![2]]);
        let v: Value = serde_json::from_str(&run(&c).unwrap().text).unwrap();
        assert_eq!(v["count"], 1);
        assert_eq!(v["agree"], true);
    }

    #[test]
    fn mixing_ideal_has_zero_slack() {
        let mut c = config(Command::Mixing, "complete:5:2");
        c.sizes = Some(vec![1, 2, 2]);
        c.trials = 5;
        c.seed = 77;
        let out = run(&c).unwrap();
        assert_eq!(out.exit_code, 0);
        let lines: Vec<Value> = out.text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines.len(), 6);
        for l in &lines[..5] {
            assert!(l["report"]["slack"].as_f64().unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn errors_are_machine_readable() {
        let c = RunConfig::new(Command::Spectrum);
        let e = run(&c).unwrap_err();
        assert_eq!(e.exit_code, EXIT_VALIDATION);
        let v: Value = serde_json::from_str(&e.to_json()).unwrap();
        assert_eq!(v["error"]["kind"], "invalid_parameter");

        // C4 plus a far vertex: disconnected, so eps_0 = 1 and the certificate is invalid
        let mut c = config(Command::Mixing, "complete:3:1");
        c.source = None;
        let x = SimplicialComplex::build_from_facets(5, &[[0, 1], [1, 2], [2, 3], [0, 3]]).unwrap();
        let dir = tempfile_path(&x);
        c.source = Some(GeneratorSpec::FromFile { path: dir.clone() });
        c.sizes = Some(vec![1, 1]);
        let e = run(&c).unwrap_err();
        assert_eq!(error_kind(&e.error), "not_an_expander");
        assert!(e.to_json().contains("not an expander at j=0"));
        std::fs::remove_file(dir).unwrap();
    }

    fn tempfile_path(x: &SimplicialComplex) -> std::path::PathBuf {
        let p = std::env::temp_dir().join(format!("hdx-cli-test-{}.json", std::process::id()));
        crate::generators::write_complex(x, &p).unwrap();
        p
    }

    #[test]
    fn determinism() {
        let mut c = config(Command::Descent, "lm:2:8:0.7:3");
        c.trials = 4;
        c.seed = 9;
        c.sizes = Some(vec![2, 2, 2]);
        assert_eq!(run(&c), run(&c));
    }
}
