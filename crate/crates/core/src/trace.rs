//! Step-by-step execution records.
//!
//! Every method produces a [`Trace`]: the inputs, an ordered list of [`Step`]s
//! with full operand/result snapshots and the scalar operations each step
//! performed, and the final answer. Traces serialize to a stable JSON schema,
//! can be replayed against an independent oracle with [`verify`], and several
//! traces of the same problem can be laid side by side with [`align`].

use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::eigen::EigenResult;
use crate::error::{Error, Result};
use crate::linsolve::SolveResult;
use crate::matrix::Matrix;
use crate::polynomial::CharPoly;
use crate::rational::Rational;

/// Scalar operation counters. Divisions are counted as multiplications.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OpCount {
    pub mults: u64,
    pub adds: u64,
    pub subs: u64,
}

impl OpCount {
    pub const ZERO: OpCount = OpCount { mults: 0, adds: 0, subs: 0 };

    pub fn new(mults: u64, adds: u64, subs: u64) -> Self {
        OpCount { mults, adds, subs }
    }

    pub fn is_zero(&self) -> bool {
        *self == OpCount::ZERO
    }
}

impl Add for OpCount {
    type Output = OpCount;
    fn add(self, rhs: OpCount) -> OpCount {
        OpCount {
            mults: self.mults + rhs.mults,
            adds: self.adds + rhs.adds,
            subs: self.subs + rhs.subs,
        }
    }
}

impl AddAssign for OpCount {
    fn add_assign(&mut self, rhs: OpCount) {
        *self = *self + rhs;
    }
}

impl std::iter::Sum for OpCount {
    fn sum<I: Iterator<Item = OpCount>>(iter: I) -> OpCount {
        iter.fold(OpCount::ZERO, Add::add)
    }
}

impl fmt::Display for OpCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mult, {} add, {} sub", self.mults, self.adds, self.subs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Multiply,
    Determinant,
    Inverse,
    Eigen,
    Solve,
}

impl Task {
    pub const ALL: [Task; 5] = [Task::Multiply, Task::Determinant, Task::Inverse, Task::Eigen, Task::Solve];

    pub fn as_str(&self) -> &'static str {
        match self {
            Task::Multiply => "multiply",
            Task::Determinant => "determinant",
            Task::Inverse => "inverse",
            Task::Eigen => "eigen",
            Task::Solve => "solve",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Task> {
        match s {
            "multiply" | "mul" => Ok(Task::Multiply),
            "determinant" | "det" => Ok(Task::Determinant),
            "inverse" | "inv" => Ok(Task::Inverse),
            "eigen" => Ok(Task::Eigen),
            "solve" => Ok(Task::Solve),
            other => Err(Error::UnknownTask(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    DotProduct,
    Assemble,
    Pad,
    Unpad,
    BlockSum,
    BlockProduct,
    Recombine,
    CofactorExpand,
    DiagonalSum,
    Combine,
    PivotSwap,
    RowScale,
    RowEliminate,
    Singular,
    DiagonalProduct,
    FaddeevIteration,
    Cofactor,
    Scale,
    PowerAccumulate,
    RootCandidates,
    RootFound,
    Deflation,
    Residual,
    Eigenvector,
    Classify,
    BackSubstitute,
    NullspaceVector,
    ColumnDeterminant,
    BasisTerm,
    BasisProduct,
    Reconstruct,
    Verify,
}

impl StepKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            StepKind::DotProduct => "dot_product",
            StepKind::Assemble => "assemble",
            StepKind::Pad => "pad",
            StepKind::Unpad => "unpad",
            StepKind::BlockSum => "block_sum",
            StepKind::BlockProduct => "block_product",
            StepKind::Recombine => "recombine",
            StepKind::CofactorExpand => "cofactor_expand",
            StepKind::DiagonalSum => "diagonal_sum",
            StepKind::Combine => "combine",
            StepKind::PivotSwap => "pivot_swap",
            StepKind::RowScale => "row_scale",
            StepKind::RowEliminate => "row_eliminate",
            StepKind::Singular => "singular",
            StepKind::DiagonalProduct => "diagonal_product",
            StepKind::FaddeevIteration => "faddeev_iteration",
            StepKind::Cofactor => "cofactor",
            StepKind::Scale => "scale",
            StepKind::PowerAccumulate => "power_accumulate",
            StepKind::RootCandidates => "root_candidates",
            StepKind::RootFound => "root_found",
            StepKind::Deflation => "deflation",
            StepKind::Residual => "residual",
            StepKind::Eigenvector => "eigenvector",
            StepKind::Classify => "classify",
            StepKind::BackSubstitute => "back_substitute",
            StepKind::NullspaceVector => "nullspace_vector",
            StepKind::ColumnDeterminant => "column_determinant",
            StepKind::BasisTerm => "basis_term",
            StepKind::BasisProduct => "basis_product",
            StepKind::Reconstruct => "reconstruct",
            StepKind::Verify => "verify",
        }
    }
}

/// A snapshot held by a step or a trace.
///
/// Serialized untagged: scalars are strings, matrices use the matrix wire
/// form, and the structured results are objects with distinct field sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Scalar(Rational),
    Matrix(Matrix),
    Polynomial(CharPoly),
    Eigen(EigenResult),
    Solution(SolveResult),
}

impl Value {
    pub fn as_scalar(&self) -> Option<&Rational> {
        match self {
            Value::Scalar(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_matrix(&self) -> Option<&Matrix> {
        match self {
            Value::Matrix(m) => Some(m),
            _ => None,
        }
    }
}

impl From<Rational> for Value {
    fn from(r: Rational) -> Self {
        Value::Scalar(r)
    }
}

impl From<Matrix> for Value {
    fn from(m: Matrix) -> Self {
        Value::Matrix(m)
    }
}

impl From<CharPoly> for Value {
    fn from(p: CharPoly) -> Self {
        Value::Polynomial(p)
    }
}

impl From<EigenResult> for Value {
    fn from(e: EigenResult) -> Self {
        Value::Eigen(e)
    }
}

impl From<SolveResult> for Value {
    fn from(s: SolveResult) -> Self {
        Value::Solution(s)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Scalar(r) => write!(f, "{r}"),
            Value::Matrix(m) => write!(f, "{m}"),
            Value::Polynomial(p) => write!(f, "{p}"),
            Value::Eigen(e) => write!(f, "{e}"),
            Value::Solution(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub index: usize,
    pub kind: StepKind,
    pub description: String,
    pub operands: IndexMap<String, Value>,
    pub result: Value,
    pub cost: OpCount,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub task: Task,
    pub method_id: String,
    pub inputs: IndexMap<String, Matrix>,
    pub steps: Vec<Step>,
    pub final_result: Value,
    pub total_cost: OpCount,
}

impl Trace {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace serialization cannot fail")
    }

    pub fn from_json(json: &str) -> serde_json::Result<Trace> {
        serde_json::from_str(json)
    }
}

/// Contents of a step before it is numbered and costed.
#[derive(Clone, Debug)]
pub struct Draft {
    pub description: String,
    pub operands: IndexMap<String, Value>,
    pub result: Value,
}

impl Draft {
    pub fn new(description: impl Into<String>, result: impl Into<Value>) -> Self {
        Draft { description: description.into(), operands: IndexMap::new(), result: result.into() }
    }

    pub fn operand(mut self, name: impl Into<String>, value: impl Into<Value>) -> Self {
        self.operands.insert(name.into(), value.into());
        self
    }
}

/// Accumulates steps for one method run.
#[derive(Debug)]
pub struct TraceBuilder {
    task: Task,
    method_id: String,
    inputs: IndexMap<String, Matrix>,
    steps: Vec<Step>,
}

impl TraceBuilder {
    pub fn new(task: Task, method_id: impl Into<String>, inputs: IndexMap<String, Matrix>) -> Self {
        TraceBuilder { task, method_id: method_id.into(), inputs, steps: Vec::new() }
    }

    /// Appends a step; its index is assigned here.
    pub fn step(&mut self, kind: StepKind, draft: Draft, cost: OpCount) -> &mut Self {
        let index = self.steps.len();
        self.steps.push(Step {
            index,
            kind,
            description: draft.description,
            operands: draft.operands,
            result: draft.result,
            cost,
        });
        self
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn finish(self, final_result: impl Into<Value>) -> Result<Trace> {
        if self.steps.is_empty() {
            return Err(Error::EmptyTrace);
        }
        let total_cost = self.steps.iter().map(|s| s.cost).sum();
        Ok(Trace {
            task: self.task,
            method_id: self.method_id,
            inputs: self.inputs,
            steps: self.steps,
            final_result: final_result.into(),
            total_cost,
        })
    }
}

/// Operation counter plus an optional [`TraceBuilder`], threaded through the
/// algorithms.
///
/// Costs accumulate in `pending` and are charged to the next recorded step, so
/// the step costs always add up to the trace total. With recording off (the
/// benchmark path, or a muted sub-computation) snapshots are never built.
pub(crate) struct Tracer {
    builder: Option<TraceBuilder>,
    recording: bool,
    pending: OpCount,
    total: OpCount,
}

impl Tracer {
    pub fn recording(task: Task, method_id: &str, inputs: IndexMap<String, Matrix>) -> Self {
        Tracer {
            builder: Some(TraceBuilder::new(task, method_id, inputs)),
            recording: true,
            pending: OpCount::ZERO,
            total: OpCount::ZERO,
        }
    }

    /// Counts operations only.
    pub fn counting() -> Self {
        Tracer { builder: None, recording: false, pending: OpCount::ZERO, total: OpCount::ZERO }
    }

    pub fn mults(&mut self, n: u64) {
        self.pending.mults += n;
        self.total.mults += n;
    }

    pub fn adds(&mut self, n: u64) {
        self.pending.adds += n;
        self.total.adds += n;
    }

    pub fn subs(&mut self, n: u64) {
        self.pending.subs += n;
        self.total.subs += n;
    }

    pub fn is_recording(&self) -> bool {
        self.recording && self.builder.is_some()
    }

    pub fn emit(&mut self, kind: StepKind, draft: impl FnOnce() -> Draft) {
        if !self.is_recording() {
            return;
        }
        let cost = std::mem::take(&mut self.pending);
        if let Some(b) = self.builder.as_mut() {
            b.step(kind, draft(), cost);
        }
    }

    /// Runs `f` with step recording suppressed; its costs roll into the next
    /// recorded step.
    pub fn muted<R>(&mut self, f: impl FnOnce(&mut Tracer) -> R) -> R {
        let was = self.recording;
        self.recording = false;
        let out = f(self);
        self.recording = was;
        out
    }

    pub fn total(&self) -> OpCount {
        self.total
    }

    pub fn finish(self, final_result: impl Into<Value>) -> Result<Trace> {
        debug_assert!(self.pending.is_zero(), "operations left uncharged: {}", self.pending);
        match self.builder {
            Some(b) => b.finish(final_result),
            None => Err(Error::EmptyTrace),
        }
    }
}

pub(crate) fn inputs<const N: usize>(named: [(&str, &Matrix); N]) -> IndexMap<String, Matrix> {
    named.into_iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyEntry {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub entries: Vec<VerifyEntry>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &VerifyEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }
}

/// Replays `trace` against `oracle`, which recomputes the answer from the
/// trace's inputs. Failures are report entries, never errors.
pub fn verify<F>(trace: &Trace, oracle: F) -> VerifyReport
where
    F: FnOnce(&IndexMap<String, Matrix>) -> Result<Value>,
{
    let mut entries = Vec::new();
    let mut push = |check: &str, passed: bool, detail: String| {
        entries.push(VerifyEntry { check: check.to_string(), passed, detail });
    };

    match oracle(&trace.inputs) {
        Ok(expected) if expected == trace.final_result => {
            push("final_result", true, format!("matches oracle value {expected}"))
        }
        Ok(expected) => push(
            "final_result",
            false,
            format!("trace reports {} but the oracle computes {expected}", trace.final_result),
        ),
        Err(e) => push("final_result", false, format!("oracle failed: {e}")),
    }

    let summed: OpCount = trace.steps.iter().map(|s| s.cost).sum();
    push(
        "total_cost",
        summed == trace.total_cost,
        format!("steps sum to {summed}, total_cost is {}", trace.total_cost),
    );

    let gap = trace.steps.iter().enumerate().find(|(i, s)| s.index != *i);
    match (trace.steps.is_empty(), gap) {
        (true, _) => push("index_contiguity", false, "trace has no steps".into()),
        (false, None) => push("index_contiguity", true, format!("indices 0..{}", trace.steps.len())),
        (false, Some((i, s))) => push(
            "index_contiguity",
            false,
            format!("position {i} holds index {}", s.index),
        ),
    }

    let last_ok = trace.steps.last().is_some_and(|s| s.result == trace.final_result);
    push(
        "last_step_result",
        last_ok,
        if last_ok { "final step yields final_result".into() } else { "final step result differs from final_result".into() },
    );

    let passed = entries.iter().all(|e| e.passed);
    VerifyReport { entries, passed }
}

/// One non-padding cell of a [`ComparisonTable`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepCell {
    pub index: usize,
    pub kind: StepKind,
    pub description: String,
    pub result: Value,
    pub cost: OpCount,
}

/// Traces of one problem laid out column by column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub task: Task,
    pub methods: Vec<String>,
    /// `rows[r][c]` is step `r` of trace `c`, or `None` once that trace has finished.
    pub rows: Vec<Vec<Option<StepCell>>>,
    pub total_costs: Vec<OpCount>,
    pub final_results: Vec<Value>,
}

/// Aligns traces of the same task and inputs, padding shorter ones.
pub fn align(traces: &[Trace]) -> Result<ComparisonTable> {
    let first = traces.first().ok_or_else(|| Error::ConfigInvalid("nothing to align".into()))?;
    if traces.iter().any(|t| t.task != first.task) {
        return Err(Error::TaskMismatch);
    }
    if traces.iter().any(|t| t.inputs != first.inputs) {
        return Err(Error::InputMismatch);
    }
    let height = traces.iter().map(|t| t.steps.len()).max().unwrap_or(0);
    let rows = (0..height)
        .map(|r| {
            traces
                .iter()
                .map(|t| {
                    t.steps.get(r).map(|s| StepCell {
                        index: s.index,
                        kind: s.kind,
                        description: s.description.clone(),
                        result: s.result.clone(),
                        cost: s.cost,
                    })
                })
                .collect()
        })
        .collect();
    Ok(ComparisonTable {
        task: first.task,
        methods: traces.iter().map(|t| t.method_id.clone()).collect(),
        rows,
        total_costs: traces.iter().map(|t| t.total_cost).collect(),
        final_results: traces.iter().map(|t| t.final_result.clone()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn builder() -> TraceBuilder {
        TraceBuilder::new(Task::Determinant, "test", inputs([("A", &Matrix::identity(2))]))
    }

    #[test]
    fn single_step_total() {
        let mut b = builder();
        b.step(StepKind::Combine, Draft::new("only", Rational::one()), OpCount::new(1, 2, 3));
        let t = b.finish(Rational::one()).unwrap();
        assert_eq!(t.total_cost, OpCount::new(1, 2, 3));
        assert_eq!(t.steps[0].index, 0);
    }

    #[test]
    fn costs_sum_componentwise() {
        let mut b = builder();
        b.step(StepKind::Combine, Draft::new("a", Rational::one()), OpCount::new(1, 0, 0))
            .step(StepKind::Combine, Draft::new("b", Rational::one()), OpCount::new(2, 3, 0));
        let t = b.finish(Rational::one()).unwrap();
        assert_eq!(t.total_cost, OpCount::new(3, 3, 0));
        assert_eq!(t.steps.iter().map(|s| s.index).collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn empty_builder_is_rejected() {
        assert_eq!(builder().finish(Rational::one()).unwrap_err(), Error::EmptyTrace);
    }

    #[test]
    fn muted_costs_land_on_next_step() {
        let mut t = Tracer::recording(Task::Determinant, "x", IndexMap::new());
        t.muted(|t| {
            t.mults(4);
            t.emit(StepKind::Combine, || panic!("muted steps are not built"));
        });
        t.adds(1);
        t.emit(StepKind::Combine, || Draft::new("visible", Rational::zero()));
        let trace = t.finish(Rational::zero()).unwrap();
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.steps[0].cost, OpCount::new(4, 1, 0));
    }

    #[test]
    fn task_names() {
        for task in Task::ALL {
            assert_eq!(task.as_str().parse::<Task>().unwrap(), task);
            assert_eq!(serde_json::to_string(&task).unwrap(), format!("\"{task}\""));
        }
        assert!("transpose".parse::<Task>().is_err());
    }

    #[test]
    fn step_kind_names_match_serde() {
        let kinds = [StepKind::DotProduct, StepKind::CofactorExpand, StepKind::BackSubstitute, StepKind::Verify];
        for k in kinds {
            assert_eq!(serde_json::to_string(&k).unwrap(), format!("\"{}\"", k.as_str()));
        }
    }
}
