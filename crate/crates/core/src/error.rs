use serde::Serialize;
use thiserror::Error;

/// One failed parameter constraint, reported when a spec is constructed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub parameter: String,
    pub constraint: String,
    pub value: f64,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} = {} violates {}",
            self.parameter, self.value, self.constraint
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QhjError {
    #[error("unknown potential family `{0}`")]
    UnknownFamily(String),
    #[error("missing parameter `{0}`")]
    MissingParameter(String),
    #[error("invalid parameters: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidParameters(Vec<Violation>),
    #[error("x = {x} lies outside the domain ({lo}, {hi})")]
    Domain { x: f64, lo: f64, hi: f64 },
    #[error("x = {0} is a singular point")]
    Singularity(f64),
    #[error("energy {energy} is below the potential infimum {infimum}; no classical region")]
    NoClassicalRegion { energy: f64, infimum: f64 },
    #[error("level n = {n} does not exist (highest bound level is {max})")]
    NoSuchLevel { n: usize, max: usize },
    #[error("no bound state with n = {n}: {reason}")]
    NoBoundState { n: usize, reason: String },
    #[error("energy {energy} outside the real window ({lo}, {hi})")]
    Window { energy: f64, lo: f64, hi: f64 },
    #[error("residue candidates coincide (discriminant vanishes) at pole {0}")]
    DegenerateResidue(String),
    #[error("no residue candidate matches the anchor value at pole {0}")]
    BranchSelection(String),
    #[error("action variable has imaginary part {imag} at E = {energy}")]
    BranchInconsistency { energy: f64, imag: f64 },
    #[error("contract violated: {0}")]
    Contract(String),
    #[error("root finder did not converge after {0} iterations")]
    Convergence(usize),
    #[error("numerical oracle failed: {0}")]
    Oracle(String),
    #[error("|psi| below node threshold at x = {0}")]
    NearNode(f64),
    #[error("square-root branch jumps on the circle (radius {0}); shrink the radius")]
    BranchCrossing(f64),
    #[error("i/o: {0}")]
    Io(String),
}

impl QhjError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            QhjError::UnknownFamily(_) => "unknown_family",
            QhjError::MissingParameter(_) => "missing_parameter",
            QhjError::InvalidParameters(_) => "invalid_parameters",
            QhjError::Domain { .. } => "domain",
            QhjError::Singularity(_) => "singularity",
            QhjError::NoClassicalRegion { .. } => "no_classical_region",
            QhjError::NoSuchLevel { .. } => "no_such_level",
            QhjError::NoBoundState { .. } => "no_bound_state",
            QhjError::Window { .. } => "window",
            QhjError::DegenerateResidue(_) => "degenerate_residue",
            QhjError::BranchSelection(_) => "branch_selection",
            QhjError::BranchInconsistency { .. } => "branch_inconsistency",
            QhjError::Contract(_) => "contract",
            QhjError::Convergence(_) => "convergence",
            QhjError::Oracle(_) => "oracle_failure",
            QhjError::NearNode(_) => "near_node",
            QhjError::BranchCrossing(_) => "branch_crossing",
            QhjError::Io(_) => "io",
        }
    }

    /// True for errors caused by bad input rather than by a numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            QhjError::UnknownFamily(_)
                | QhjError::MissingParameter(_)
                | QhjError::InvalidParameters(_)
                | QhjError::Domain { .. }
                | QhjError::NoSuchLevel { .. }
                | QhjError::Contract(_)
                | QhjError::Io(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, QhjError>;
