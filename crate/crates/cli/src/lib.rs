//! Verification runner behind the `lndkit` command.

pub mod cases;

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use lndkit::danielewski::{
    build_cocycle, canonical_surface, distinguishing_function_search, fiber_over, FiberDecomposition, SearchOutcome,
    Violation,
};
use lndkit::derivations::Derivation;
use lndkit::polyring::{parse_rational, parse_with};
use lndkit::{PolyMap, VarSet};
use rayon::prelude::*;
use serde::Serialize;

pub use cases::{registry, Category, VerificationCase, Verdict};

/// Bumped whenever the JSON layout changes.
pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable overriding the default nilpotency bound.
pub const BOUND_ENV: &str = "LNDKIT_NILPOTENCY_BOUND";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("unknown case id `{0}`")]
    UnknownCase(String),
    #[error(transparent)]
    Derivation(#[from] lndkit::DerivationError),
    #[error(transparent)]
    Parse(#[from] lndkit::polyring::ParseError),
    #[error(transparent)]
    Surface(#[from] lndkit::danielewski::SurfaceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    PaperDiscrepancy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    Discrepancy { computed: String, displayed: String },
    Failure { detail: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub id: String,
    pub category: Category,
    pub status: Status,
    pub summary: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub cases: Vec<CaseReport>,
}

impl RunReport {
    pub fn count(&self, status: Status) -> usize {
        self.cases.iter().filter(|c| c.status == status).count()
    }

    /// Paper discrepancies do not count as failures.
    pub fn success(&self) -> bool {
        self.count(Status::Fail) == 0
    }
}

/// Which cases to run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selection {
    All,
    Only(Vec<String>),
}

fn run_case(case: &VerificationCase) -> CaseReport {
    let start = Instant::now();
    let outcome = std::panic::catch_unwind(case.run).unwrap_or_else(|_| Err("case panicked".into()));
    let wall_time = start.elapsed();
    let (status, summary, witness) = match outcome {
        Ok(Verdict::Pass(s)) => (Status::Pass, s, None),
        Ok(Verdict::Discrepancy { summary, computed, displayed }) => (
            Status::PaperDiscrepancy,
            summary,
            Some(Witness::Discrepancy {
                computed: computed.to_string(),
                displayed: displayed.to_string(),
            }),
        ),
        Err(detail) => (
            Status::Fail,
            case.description.to_string(),
            Some(Witness::Failure { detail }),
        ),
    };
    CaseReport {
        id: case.id.to_string(),
        category: case.category,
        status,
        summary,
        witness,
        wall_time,
    }
}

/// Runs the selected built-in cases concurrently; the report lists them by
/// id.
pub fn run_suite(selection: &Selection) -> Result<RunReport, CliError> {
    let all = registry();
    let chosen: Vec<&VerificationCase> = match selection {
        Selection::All => all.iter().collect(),
        Selection::Only(ids) => {
            let mut picked = Vec::new();
            for id in ids {
                let c = all
                    .iter()
                    .find(|c| c.id == id)
                    .ok_or_else(|| CliError::UnknownCase(id.clone()))?;
                if !picked.iter().any(|p: &&VerificationCase| p.id == c.id) {
                    picked.push(c);
                }
            }
            picked
        }
    };
    let mut cases: Vec<CaseReport> = chosen.par_iter().map(|c| run_case(c)).collect();
    cases.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        cases,
    })
}

pub fn report_json(r: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("report serializes");
    s.push('\n');
    s
}

pub fn report_text(r: &RunReport, timings: bool) -> String {
    let mut out = String::new();
    for c in &r.cases {
        let tag = match c.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::PaperDiscrepancy => "paper-discrepancy",
        };
        write!(out, "{tag:<18} {:<26} {}", c.id, c.summary).unwrap();
        if timings {
            write!(out, " [{:.1} ms]", c.wall_time.as_secs_f64() * 1e3).unwrap();
        }
        out.push('\n');
        match &c.witness {
            Some(Witness::Discrepancy { computed, displayed }) => {
                writeln!(out, "    computed:  {computed}").unwrap();
                writeln!(out, "    displayed: {displayed}").unwrap();
            }
            Some(Witness::Failure { detail }) => writeln!(out, "    {detail}").unwrap(),
            None => {}
        }
    }
    writeln!(
        out,
        "{} cases: {} pass, {} paper-discrepancy, {} fail",
        r.cases.len(),
        r.count(Status::Pass),
        r.count(Status::PaperDiscrepancy),
        r.count(Status::Fail)
    )
    .unwrap();
    out
}

/// Default ring for derivation files without a `vars` line.
pub fn default_vars() -> VarSet {
    VarSet::new(["x", "y", "z"]).unwrap()
}

/// `exp(m·d)` for a derivation file and a multiplier expression, which may
/// use the file's `let` names.
pub fn exp_command(derivation_text: &str, multiplier: &str, bound: usize) -> Result<PolyMap, CliError> {
    let (d, lets) = Derivation::parse_with_bindings(derivation_text, &default_vars())?;
    let m = parse_with(multiplier, d.vars(), &lets)?;
    Ok(d.exponential(&m, bound)?)
}

pub fn fiber_command(at: &str) -> Result<String, CliError> {
    let a = parse_rational(at)?;
    let s = canonical_surface();
    let mut out = String::new();
    match fiber_over(&s, &a)? {
        FiberDecomposition::Lines { base_value, line_var, components, unfactored } => {
            writeln!(out, "fiber over x = {base_value}: {} line(s)", components.len()).unwrap();
            for (r, m) in &components {
                writeln!(out, "  {line_var} = {r}  multiplicity {m}").unwrap();
            }
            if unfactored.total_degree().unwrap_or(0) > 0 {
                writeln!(out, "  unfactored: {unfactored}").unwrap();
            }
            let reduced = components.iter().all(|(_, m)| *m == 1);
            writeln!(out, "reduced: {reduced}").unwrap();
        }
        FiberDecomposition::GenericLine { base_value, parametrization_verified } => {
            writeln!(out, "fiber over x = {base_value}: affine line with coordinate f").unwrap();
            writeln!(out, "parametrization verified: {parametrization_verified}").unwrap();
        }
    }
    Ok(out)
}

pub fn cocycle_command(max_n: u32) -> String {
    let c = build_cocycle();
    let mut out = String::new();
    for a in &c.labels {
        writeln!(out, "sigma[{a}] = {}", c.sigma[a]).unwrap();
    }
    for (i, a) in c.labels.iter().enumerate() {
        for b in &c.labels[i + 1..] {
            writeln!(out, "g[{a},{b}] = {}", c.g(*a, *b)).unwrap();
        }
    }
    writeln!(out, "antisymmetric: {}", c.antisymmetric()).unwrap();
    writeln!(out, "cocycle identity: {}", c.cocycle_identity()).unwrap();
    if let Ok(vals) = lndkit::danielewski::component_values(&canonical_surface()) {
        for (a, v) in vals {
            writeln!(out, "chart value on C[{a}] = {v}").unwrap();
        }
    }
    match distinguishing_function_search(&c, max_n) {
        SearchOutcome::Solution { n, .. } => writeln!(out, "distinguishing function exists for n = {n}").unwrap(),
        SearchOutcome::NoSolution(fails) => {
            for (n, v) in fails {
                match v {
                    Violation::NotPolynomial { pair, product } => {
                        writeln!(out, "n = {n}: x^{n}*g[{},{}] = {product} is not a polynomial", pair.0, pair.1)
                            .unwrap()
                    }
                    Violation::ConstantsCoincide { coinciding, .. } => {
                        let pairs: Vec<String> = coinciding.iter().map(|(a, b)| format!("({a},{b})")).collect();
                        writeln!(out, "n = {n}: constants forced equal on {}", pairs.join(" ")).unwrap()
                    }
                }
            }
            writeln!(out, "no distinguishing function for n <= {max_n}").unwrap();
        }
    }
    out
}
