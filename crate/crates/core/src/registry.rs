//! The method registry and the request-level dispatcher shared by the CLI and
//! the HTTP service.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::determinant::{det_laplace, det_lu, det_sarrus};
use crate::eigen::eigen_rational;
use crate::error::{Error, Result};
use crate::inverse::{inverse_cayley_hamilton, inverse_cramer};
use crate::linsolve::{solve_cramer, solve_gauss};
use crate::matmul::{mul_naive, mul_strassen, StrassenConfig, Variant};
use crate::matrix::Matrix;
use crate::trace::{align, ComparisonTable, Task, Trace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MethodDescriptor {
    pub task: Task,
    pub id: &'static str,
    pub name: &'static str,
    pub applicability: &'static str,
}

const fn method(task: Task, id: &'static str, name: &'static str, applicability: &'static str) -> MethodDescriptor {
    MethodDescriptor { task, id, name, applicability }
}

pub const METHODS: &[MethodDescriptor] = &[
    method(Task::Multiply, "naive", "Dot product", "any A (m×k) and B (k×n)"),
    method(
        Task::Multiply,
        "strassen",
        "Strassen–Winograd (Winograd variant, threshold 2)",
        "any A (m×k) and B (k×n); zero-padded to a power of two",
    ),
    method(
        Task::Multiply,
        "strassen-original",
        "Strassen (original scheme, threshold 2)",
        "any A (m×k) and B (k×n); zero-padded to a power of two",
    ),
    method(Task::Determinant, "laplace", "Laplace (cofactor) expansion", "square, n ≤ 8"),
    method(Task::Determinant, "sarrus", "Sarrus' rule", "3×3 only"),
    method(Task::Determinant, "lu", "LU decomposition", "square"),
    method(Task::Inverse, "cramer", "Cramer's rule (adjugate)", "square, nonsingular"),
    method(Task::Inverse, "cayley_hamilton", "Cayley–Hamilton theorem", "square, nonsingular"),
    method(
        Task::Eigen,
        "rational",
        "Characteristic polynomial and rational roots",
        "square; irrational or complex eigenvalues stay in a residual factor",
    ),
    method(Task::Solve, "gauss", "Gauss–Jordan elimination", "any A with b a column of matching height"),
    method(Task::Solve, "cramer", "Cramer's rule", "square, nonsingular A"),
];

pub fn methods_for(task: Task) -> impl Iterator<Item = &'static MethodDescriptor> {
    METHODS.iter().filter(move |m| m.task == task)
}

pub fn lookup(task: Task, id: &str) -> Result<&'static MethodDescriptor> {
    if let Some(m) = METHODS.iter().find(|m| m.task == task && m.id == id) {
        return Ok(m);
    }
    if METHODS.iter().any(|m| m.id == id) {
        Err(Error::MethodTaskMismatch { method: id.to_string(), task: task.to_string() })
    } else {
        Err(Error::UnknownMethod(id.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest row or column count accepted for trace-emitting computations.
    pub dimension_cap: usize,
}

impl Limits {
    pub const DEFAULT_DIMENSION_CAP: usize = 16;
}

impl Default for Limits {
    fn default() -> Self {
        Limits { dimension_cap: Self::DEFAULT_DIMENSION_CAP }
    }
}

pub type Inputs = IndexMap<String, Matrix>;

pub fn required_inputs(task: Task) -> &'static [&'static str] {
    match task {
        Task::Multiply => &["A", "B"],
        Task::Solve => &["A", "b"],
        Task::Determinant | Task::Inverse | Task::Eigen => &["A"],
    }
}

fn input<'a>(inputs: &'a Inputs, name: &str) -> Result<&'a Matrix> {
    inputs.get(name).ok_or_else(|| Error::MissingInput(name.to_string()))
}

/// Presence, dimension cap and task-level shape checks; method-specific
/// applicability is left to the methods.
pub fn check_inputs(task: Task, inputs: &Inputs, limits: Limits) -> Result<()> {
    for name in required_inputs(task) {
        let m = input(inputs, name)?;
        let dimension = m.rows().max(m.cols());
        if dimension > limits.dimension_cap {
            return Err(Error::DimensionCapExceeded { dimension, cap: limits.dimension_cap });
        }
    }
    let a = input(inputs, "A")?;
    match task {
        Task::Multiply => {
            let b = input(inputs, "B")?;
            if a.cols() != b.rows() {
                return Err(Error::DimensionMismatch(format!(
                    "cannot multiply {}x{} by {}x{}",
                    a.rows(),
                    a.cols(),
                    b.rows(),
                    b.cols()
                )));
            }
        }
        Task::Determinant | Task::Inverse | Task::Eigen => {
            if !a.is_square() {
                return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
            }
        }
        Task::Solve => {
            let b = input(inputs, "b")?;
            if b.cols() != 1 || b.rows() != a.rows() {
                return Err(Error::DimensionMismatch(format!(
                    "b must be a {}x1 column, got {}x{}",
                    a.rows(),
                    b.rows(),
                    b.cols()
                )));
            }
        }
    }
    Ok(())
}

/// Runs one registered method.
pub fn run(task: Task, method_id: &str, inputs: &Inputs, limits: Limits) -> Result<Trace> {
    let descriptor = lookup(task, method_id)?;
    check_inputs(task, inputs, limits)?;
    let a = input(inputs, "A")?;
    let trace = match (task, descriptor.id) {
        (Task::Multiply, "naive") => mul_naive(a, input(inputs, "B")?)?.1,
        (Task::Multiply, "strassen") => {
            let cfg = StrassenConfig::new(StrassenConfig::DEFAULT_THRESHOLD, Variant::Winograd)?;
            mul_strassen(a, input(inputs, "B")?, cfg)?.1
        }
        (Task::Multiply, "strassen-original") => {
            let cfg = StrassenConfig::new(StrassenConfig::DEFAULT_THRESHOLD, Variant::Strassen)?;
            mul_strassen(a, input(inputs, "B")?, cfg)?.1
        }
        (Task::Determinant, "laplace") => det_laplace(a)?.1,
        (Task::Determinant, "sarrus") => det_sarrus(a)?.1,
        (Task::Determinant, "lu") => det_lu(a)?.1,
        (Task::Inverse, "cramer") => inverse_cramer(a)?.1,
        (Task::Inverse, "cayley_hamilton") => inverse_cayley_hamilton(a)?.1,
        (Task::Eigen, "rational") => eigen_rational(a)?.1,
        (Task::Solve, "gauss") => solve_gauss(a, input(inputs, "b")?)?.1,
        (Task::Solve, "cramer") => solve_cramer(a, input(inputs, "b")?)?.1,
        (_, id) => return Err(Error::UnknownMethod(id.to_string())),
    };
    Ok(trace)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComputeRequest {
    pub task: Task,
    pub methods: Vec<String>,
    pub inputs: Inputs,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodFailure {
    pub method: String,
    pub error: String,
    pub message: String,
}

impl MethodFailure {
    fn new(method: &str, e: &Error) -> Self {
        MethodFailure { method: method.to_string(), error: e.code().to_string(), message: e.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TraceOutcome {
    Trace(Trace),
    Failed(MethodFailure),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComputeResponse {
    pub traces: Vec<TraceOutcome>,
    /// Side-by-side alignment of the successful traces.
    pub comparison: Option<ComparisonTable>,
}

/// Runs every requested method. Request-level problems (unknown method,
/// missing or malformed inputs, cap violations) are errors; a method that
/// cannot handle these inputs becomes a [`MethodFailure`] entry so the other
/// methods are still reported.
pub fn compute(req: &ComputeRequest, limits: Limits) -> Result<ComputeResponse> {
    if req.methods.is_empty() {
        return Err(Error::ConfigInvalid("at least one method is required".into()));
    }
    for id in &req.methods {
        lookup(req.task, id)?;
    }
    check_inputs(req.task, &req.inputs, limits)?;
    let traces: Vec<TraceOutcome> = req
        .methods
        .iter()
        .map(|id| match run(req.task, id, &req.inputs, limits) {
            Ok(t) => TraceOutcome::Trace(t),
            Err(e) => TraceOutcome::Failed(MethodFailure::new(id, &e)),
        })
        .collect();
    let ok: Vec<Trace> = traces
        .iter()
        .filter_map(|o| match o {
            TraceOutcome::Trace(t) => Some(t.clone()),
            TraceOutcome::Failed(_) => None,
        })
        .collect();
    let comparison = if ok.is_empty() { None } else { Some(align(&ok)?) };
    Ok(ComputeResponse { traces, comparison })
}

impl ComputeResponse {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("response serialization cannot fail")
    }
}
