//! Exact rational linear algebra with step-by-step traces.
//!
//! Every method returns its result together with a [`Trace`]: an ordered list
//! of steps, each carrying its operands, its intermediate result and the
//! arithmetic it cost. Traces of different methods for the same task can be
//! aligned side by side with [`align`].

pub mod bench;
pub mod determinant;
pub mod eigen;
mod elimination;
pub mod error;
pub mod inverse;
pub mod linsolve;
pub mod matmul;
pub mod matrix;
pub mod pedagogy;
pub mod polynomial;
pub mod random;
pub mod rational;
pub mod registry;
pub mod render;
pub mod trace;

pub use determinant::{det_laplace, det_lu, det_sarrus};
pub use eigen::{eigen_rational, EigenResult, Eigenvalue};
pub use error::{Error, Result};
pub use inverse::{charpoly, inverse_cayley_hamilton, inverse_cramer};
pub use linsolve::{solve_cramer, solve_gauss, Classification, SolveResult};
pub use matmul::{mul_naive, mul_strassen, StrassenConfig, Variant};
pub use matrix::Matrix;
pub use polynomial::CharPoly;
pub use rational::Rational;
pub use registry::{compute, ComputeRequest, ComputeResponse, Limits};
pub use trace::{align, verify, OpCount, Step, StepKind, Task, Trace, Value};
