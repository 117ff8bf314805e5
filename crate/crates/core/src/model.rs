//! Core problem representation: type grids, allocation sets, mechanisms,
//! validation, the principal's objective, and IC/IR constraint checks.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::fmt;
use std::path::Path;
use thiserror::Error;

/// Tolerance for probability-mass checks (distributions and lottery rows).
pub const MASS_TOL: f64 = 1e-12;
/// Tolerance for IC/IR constraint checks.
pub const IC_TOL: f64 = 1e-9;
/// Tolerance for LP-value equality assertions.
pub const VALUE_EQ_TOL: f64 = 1e-7;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("unknown allocation id `{0}`")]
    UnknownAllocation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Discrete type grid: ascending type values, a full-support distribution,
/// and nonincreasing welfare weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeGrid {
    pub types: Vec<f64>,
    pub probabilities: Vec<f64>,
    pub welfare_weights: Vec<f64>,
}

impl TypeGrid {
    pub fn uniform(types: Vec<f64>, welfare_weights: Vec<f64>) -> Self {
        let n = types.len();
        TypeGrid {
            types,
            probabilities: vec![1.0 / n as f64; n],
            welfare_weights,
        }
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    /// Mass of types >= t_k: the quantile attached to grid point k.
    pub fn upper_mass(&self, k: usize) -> f64 {
        self.probabilities[k..].iter().sum()
    }
}

/// Finite allocation set with a designated outside option and a value matrix
/// `values[x][k]` over the type grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllocationSet {
    pub ids: Vec<String>,
    pub outside_index: usize,
    pub values: Vec<Vec<f64>>,
}

impl AllocationSet {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn value(&self, alloc: usize, type_index: usize) -> f64 {
        self.values[alloc][type_index]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|a| a == id)
    }

    /// Indices of all non-outside allocations, in declaration order.
    pub fn inside(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| x != self.outside_index).collect()
    }
}

/// A complete screening problem instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreeningProblem {
    pub grid: TypeGrid,
    pub allocations: AllocationSet,
    #[serde(default)]
    pub metadata: Value,
}

/// Per-type allocation choice plus payment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeterministicMechanism {
    pub assignment: Vec<usize>,
    pub payments: Vec<f64>,
}

/// Per-type lottery over allocations plus payment. Each row of `lotteries`
/// is a probability vector over the problem's allocation indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StochasticMechanism {
    pub lotteries: Vec<Vec<f64>>,
    pub payments: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Mechanism {
    Deterministic(DeterministicMechanism),
    Stochastic(StochasticMechanism),
}

impl Mechanism {
    pub fn payments(&self) -> &[f64] {
        match self {
            Mechanism::Deterministic(m) => &m.payments,
            Mechanism::Stochastic(m) => &m.payments,
        }
    }

    pub fn n_types(&self) -> usize {
        self.payments().len()
    }

    /// Expected value that a type `holder` assigns to the option designed
    /// for `reported` (lotteries valued linearly).
    pub fn option_value(&self, problem: &ScreeningProblem, reported: usize, holder: usize) -> f64 {
        match self {
            Mechanism::Deterministic(m) => {
                problem.allocations.value(m.assignment[reported], holder)
            }
            Mechanism::Stochastic(m) => m.lotteries[reported]
                .iter()
                .enumerate()
                .map(|(x, w)| w * problem.allocations.value(x, holder))
                .sum(),
        }
    }

    fn check_dims(&self, problem: &ScreeningProblem) -> Result<(), ModelError> {
        let n = problem.grid.len();
        if self.n_types() != n {
            return Err(ModelError::Dimension(format!(
                "mechanism covers {} types, problem has {}",
                self.n_types(),
                n
            )));
        }
        match self {
            Mechanism::Deterministic(m) => {
                if m.assignment.len() != n {
                    return Err(ModelError::Dimension(
                        "assignment length differs from payment length".into(),
                    ));
                }
                if let Some(&x) = m.assignment.iter().find(|&&x| x >= problem.allocations.len()) {
                    return Err(ModelError::Dimension(format!(
                        "assignment references allocation {x} out of range"
                    )));
                }
            }
            Mechanism::Stochastic(m) => {
                if m.lotteries.len() != n {
                    return Err(ModelError::Dimension(
                        "lottery count differs from payment length".into(),
                    ));
                }
                if let Some(row) = m
                    .lotteries
                    .iter()
                    .find(|row| row.len() != problem.allocations.len())
                {
                    return Err(ModelError::Dimension(format!(
                        "lottery row has {} entries, problem has {} allocations",
                        row.len(),
                        problem.allocations.len()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// One violated model invariant, with enough indices to locate it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "invariant", rename_all = "snake_case")]
pub enum InvariantViolation {
    EmptyGrid,
    TypesNotIncreasing { index: usize },
    ProbabilityNotPositive { index: usize },
    ProbabilitySum { sum: f64 },
    WelfareWeightNegative { index: usize },
    WelfareWeightsIncreasing { index: usize },
    WelfareMassExceedsOne { mass: f64 },
    GridLengthMismatch { field: String, len: usize, expected: usize },
    OutsideIndexOutOfRange { index: usize, len: usize },
    OutsideValueNonzero { type_index: usize, value: f64 },
    ValueRowLength { allocation: usize, len: usize, expected: usize },
    ValuesDecreasing { allocation: usize, type_index: usize },
    ValueNotFinite { allocation: usize, type_index: usize },
    DuplicateAllocationId { id: String },
}

impl fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use InvariantViolation::*;
        match self {
            EmptyGrid => write!(f, "type grid is empty"),
            TypesNotIncreasing { index } => {
                write!(f, "types not strictly increasing at index {index}")
            }
            ProbabilityNotPositive { index } => {
                write!(f, "probability at index {index} is not positive")
            }
            ProbabilitySum { sum } => write!(f, "probabilities sum to {sum}, expected 1"),
            WelfareWeightNegative { index } => {
                write!(f, "welfare weight at index {index} is negative")
            }
            WelfareWeightsIncreasing { index } => {
                write!(f, "welfare weights not nonincreasing at index {index}")
            }
            WelfareMassExceedsOne { mass } => {
                write!(f, "expected welfare weight {mass} exceeds 1")
            }
            GridLengthMismatch { field, len, expected } => {
                write!(f, "{field} has length {len}, expected {expected}")
            }
            OutsideIndexOutOfRange { index, len } => {
                write!(f, "outside index {index} out of range for {len} allocations")
            }
            OutsideValueNonzero { type_index, value } => {
                write!(f, "outside option has value {value} at type {type_index}, expected 0")
            }
            ValueRowLength { allocation, len, expected } => {
                write!(f, "value row {allocation} has {len} entries, expected {expected}")
            }
            ValuesDecreasing { allocation, type_index } => {
                write!(f, "values of allocation {allocation} decrease at type {type_index}")
            }
            ValueNotFinite { allocation, type_index } => {
                write!(f, "value of allocation {allocation} at type {type_index} is not finite")
            }
            DuplicateAllocationId { id } => write!(f, "duplicate allocation id `{id}`"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<InvariantViolation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every model invariant and reports all violations found.
///
/// Value rows are required to be nondecreasing in the type; operations that
/// need strict increase (elasticity comparisons, incremental curves) state
/// and check that precondition themselves.
pub fn validate_problem(problem: &ScreeningProblem) -> ValidationReport {
    let mut v = Vec::new();
    let grid = &problem.grid;
    let n = grid.types.len();

    if n == 0 {
        v.push(InvariantViolation::EmptyGrid);
    }
    for k in 1..n {
        if grid.types[k] <= grid.types[k - 1] {
            v.push(InvariantViolation::TypesNotIncreasing { index: k });
        }
    }
    if grid.probabilities.len() != n {
        v.push(InvariantViolation::GridLengthMismatch {
            field: "probabilities".into(),
            len: grid.probabilities.len(),
            expected: n,
        });
    } else {
        for (k, &p) in grid.probabilities.iter().enumerate() {
            if !(p > 0.0) {
                v.push(InvariantViolation::ProbabilityNotPositive { index: k });
            }
        }
        let sum: f64 = grid.probabilities.iter().sum();
        if (sum - 1.0).abs() > MASS_TOL {
            v.push(InvariantViolation::ProbabilitySum { sum });
        }
    }
    if grid.welfare_weights.len() != n {
        v.push(InvariantViolation::GridLengthMismatch {
            field: "welfare_weights".into(),
            len: grid.welfare_weights.len(),
            expected: n,
        });
    } else {
        for (k, &w) in grid.welfare_weights.iter().enumerate() {
            if w < 0.0 {
                v.push(InvariantViolation::WelfareWeightNegative { index: k });
            }
            if k > 0 && w > grid.welfare_weights[k - 1] + MASS_TOL {
                v.push(InvariantViolation::WelfareWeightsIncreasing { index: k });
            }
        }
        if grid.probabilities.len() == n {
            let mass: f64 = grid
                .probabilities
                .iter()
                .zip(&grid.welfare_weights)
                .map(|(p, w)| p * w)
                .sum();
            if mass > 1.0 + MASS_TOL {
                v.push(InvariantViolation::WelfareMassExceedsOne { mass });
            }
        }
    }

    let allocs = &problem.allocations;
    if allocs.values.len() != allocs.ids.len() {
        v.push(InvariantViolation::GridLengthMismatch {
            field: "values".into(),
            len: allocs.values.len(),
            expected: allocs.ids.len(),
        });
    }
    if allocs.outside_index >= allocs.ids.len() {
        v.push(InvariantViolation::OutsideIndexOutOfRange {
            index: allocs.outside_index,
            len: allocs.ids.len(),
        });
    }
    for (i, id) in allocs.ids.iter().enumerate() {
        if allocs.ids[..i].iter().any(|other| other == id) {
            v.push(InvariantViolation::DuplicateAllocationId { id: id.clone() });
        }
    }
    for (x, row) in allocs.values.iter().enumerate() {
        if row.len() != n {
            v.push(InvariantViolation::ValueRowLength {
                allocation: x,
                len: row.len(),
                expected: n,
            });
            continue;
        }
        for (k, &val) in row.iter().enumerate() {
            if !val.is_finite() {
                v.push(InvariantViolation::ValueNotFinite { allocation: x, type_index: k });
            }
        }
        if x == allocs.outside_index {
            for (k, &val) in row.iter().enumerate() {
                if val != 0.0 {
                    v.push(InvariantViolation::OutsideValueNonzero { type_index: k, value: val });
                }
            }
        } else {
            for k in 1..n {
                if row[k] < row[k - 1] {
                    v.push(InvariantViolation::ValuesDecreasing { allocation: x, type_index: k });
                }
            }
        }
    }

    ValidationReport { violations: v }
}

/// Principal's objective: E[lambda (v - p)] + E[p], lotteries valued linearly.
pub fn objective_value(problem: &ScreeningProblem, mechanism: &Mechanism) -> Result<f64, ModelError> {
    mechanism.check_dims(problem)?;
    let grid = &problem.grid;
    let mut total = 0.0;
    for k in 0..grid.len() {
        let v = mechanism.option_value(problem, k, k);
        let p = mechanism.payments()[k];
        total += grid.probabilities[k] * (grid.welfare_weights[k] * (v - p) + p);
    }
    Ok(total)
}

/// Which incentive constraints to enforce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IcMode {
    Full,
    Downward,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "constraint", rename_all = "snake_case")]
pub enum IcViolation {
    /// Type `t` prefers the option designed for `reported`.
    Ic { t: usize, reported: usize, slack: f64 },
    /// Type `t` gets negative payoff.
    Ir { t: usize, slack: f64 },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IcReport {
    pub violations: Vec<IcViolation>,
}

impl IcReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks IC (all pairs, or only pairs where the truth is above the report)
/// and IR, within [`IC_TOL`].
pub fn check_ic_ir(
    problem: &ScreeningProblem,
    mechanism: &Mechanism,
    mode: IcMode,
) -> Result<IcReport, ModelError> {
    mechanism.check_dims(problem)?;
    let n = problem.grid.len();
    let mut violations = Vec::new();
    for t in 0..n {
        let own = mechanism.option_value(problem, t, t) - mechanism.payments()[t];
        if own < -IC_TOL {
            violations.push(IcViolation::Ir { t, slack: own });
        }
        for reported in 0..n {
            if reported == t {
                continue;
            }
            if mode == IcMode::Downward && reported > t {
                continue;
            }
            let deviation = mechanism.option_value(problem, reported, t) - mechanism.payments()[reported];
            if own < deviation - IC_TOL {
                violations.push(IcViolation::Ic { t, reported, slack: own - deviation });
            }
        }
    }
    Ok(IcReport { violations })
}

// --- problem file format ---------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ProblemFile {
    types: Vec<f64>,
    probabilities: Vec<f64>,
    welfare_weights: Vec<f64>,
    allocations: Vec<String>,
    outside: String,
    values: Vec<Vec<f64>>,
    #[serde(default)]
    metadata: Value,
}

impl ScreeningProblem {
    pub fn new(grid: TypeGrid, allocations: AllocationSet) -> Self {
        ScreeningProblem { grid, allocations, metadata: Value::Null }
    }

    pub fn n_types(&self) -> usize {
        self.grid.len()
    }

    pub fn to_json(&self) -> String {
        let file = ProblemFile {
            types: self.grid.types.clone(),
            probabilities: self.grid.probabilities.clone(),
            welfare_weights: self.grid.welfare_weights.clone(),
            allocations: self.allocations.ids.clone(),
            outside: self.allocations.ids[self.allocations.outside_index].clone(),
            values: self.allocations.values.clone(),
            metadata: self.metadata.clone(),
        };
        serde_json::to_string_pretty(&file).expect("problem serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let file: ProblemFile =
            serde_json::from_str(text).map_err(|e| ModelError::Parse(e.to_string()))?;
        let outside_index = file
            .allocations
            .iter()
            .position(|id| *id == file.outside)
            .ok_or_else(|| ModelError::UnknownAllocation(file.outside.clone()))?;
        Ok(ScreeningProblem {
            grid: TypeGrid {
                types: file.types,
                probabilities: file.probabilities,
                welfare_weights: file.welfare_weights,
            },
            allocations: AllocationSet {
                ids: file.allocations,
                outside_index,
                values: file.values,
            },
            metadata: file.metadata,
        })
    }

    pub fn load(path: &Path) -> Result<Self, ModelError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<(), ModelError> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    /// Map allocation ids to indices, rejecting unknown ids.
    pub fn resolve_ids(&self, ids: &[String]) -> Result<Vec<usize>, ModelError> {
        ids.iter()
            .map(|id| {
                self.allocations
                    .index_of(id)
                    .ok_or_else(|| ModelError::UnknownAllocation(id.clone()))
            })
            .collect()
    }
}

// --- mechanism file format --------------------------------------------------

#[derive(Serialize, Deserialize)]
struct MechanismFile {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    assignment: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lotteries: Option<Vec<Vec<f64>>>,
    payments: Vec<f64>,
}

impl Mechanism {
    pub fn to_json(&self, problem: &ScreeningProblem) -> String {
        let file = match self {
            Mechanism::Deterministic(m) => MechanismFile {
                kind: "deterministic".into(),
                assignment: Some(
                    m.assignment
                        .iter()
                        .map(|&x| problem.allocations.ids[x].clone())
                        .collect(),
                ),
                lotteries: None,
                payments: m.payments.clone(),
            },
            Mechanism::Stochastic(m) => MechanismFile {
                kind: "stochastic".into(),
                assignment: None,
                lotteries: Some(m.lotteries.clone()),
                payments: m.payments.clone(),
            },
        };
        serde_json::to_string_pretty(&file).expect("mechanism serialization cannot fail")
    }

    pub fn from_json(text: &str, problem: &ScreeningProblem) -> Result<Self, ModelError> {
        let file: MechanismFile =
            serde_json::from_str(text).map_err(|e| ModelError::Parse(e.to_string()))?;
        match file.kind.as_str() {
            "deterministic" => {
                let ids = file
                    .assignment
                    .ok_or_else(|| ModelError::Parse("deterministic mechanism needs `assignment`".into()))?;
                let assignment = problem.resolve_ids(&ids)?;
                Ok(Mechanism::Deterministic(DeterministicMechanism {
                    assignment,
                    payments: file.payments,
                }))
            }
            "stochastic" => {
                let lotteries = file
                    .lotteries
                    .ok_or_else(|| ModelError::Parse("stochastic mechanism needs `lotteries`".into()))?;
                Ok(Mechanism::Stochastic(StochasticMechanism {
                    lotteries,
                    payments: file.payments,
                }))
            }
            other => Err(ModelError::Parse(format!("unknown mechanism kind `{other}`"))),
        }
    }
}
