//! Matrix multiplication: the dot-product method and Strassen-style recursion.
//!
//! Both block schemes are straight-line programs over the quadrants
//! `A11..A22`, `B11..B22` and produce `C11..C22`. Each program is a single
//! table ([`STRASSEN_SCHEME`], [`WINOGRAD_SCHEME`]) that the recursion
//! interprets and the pedagogy module enumerates.
//!
//! Strassen (1969), 7 products and 18 block additions:
//!
//! ```text
//! M1 = (A11 + A22)(B11 + B22)    C11 = M1 + M4 - M5 + M7
//! M2 = (A21 + A22) B11           C12 = M3 + M5
//! M3 = A11 (B12 - B22)           C21 = M2 + M4
//! M4 = A22 (B21 - B11)           C22 = M1 - M2 + M3 + M6
//! M5 = (A11 + A12) B22
//! M6 = (A21 - A11)(B11 + B12)
//! M7 = (A12 - A22)(B21 + B22)
//! ```
//!
//! Winograd's reorganization (1971), 7 products and 15 block additions:
//!
//! ```text
//! S1 = A21 + A22   T1 = B12 - B11   M1 = A11 B11   M5 = S1 T1
//! S2 = S1 - A11    T2 = B22 - T1    M2 = A12 B21   M6 = S2 T2
//! S3 = A11 - A21   T3 = B22 - B12   M3 = S4 B22    M7 = S3 T3
//! S4 = A12 - S2    T4 = T2 - B21    M4 = A22 T4
//!
//! C11 = M1 + M2    U2 = M1 + M6     U3 = U2 + M7   U4 = U2 + M5
//! C12 = U4 + M3    C21 = U3 - M4    C22 = U3 + M5
//! ```

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::Rational;
use crate::trace::{inputs, Draft, OpCount, StepKind, Task, Trace, Tracer};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Strassen,
    #[default]
    Winograd,
}

impl Variant {
    pub const ALL: [Variant; 2] = [Variant::Strassen, Variant::Winograd];

    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Strassen => "strassen",
            Variant::Winograd => "winograd",
        }
    }

    pub fn scheme(&self) -> &'static [BlockInstr] {
        match self {
            Variant::Strassen => STRASSEN_SCHEME,
            Variant::Winograd => WINOGRAD_SCHEME,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Variant> {
        match s {
            "strassen" => Ok(Variant::Strassen),
            "winograd" => Ok(Variant::Winograd),
            other => Err(Error::ConfigInvalid(format!("unknown variant {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrassenConfig {
    threshold: usize,
    variant: Variant,
}

impl StrassenConfig {
    pub const DEFAULT_THRESHOLD: usize = 2;

    pub fn new(threshold: usize, variant: Variant) -> Result<Self> {
        if threshold == 0 {
            return Err(Error::ConfigInvalid("Strassen threshold must be at least 1".into()));
        }
        Ok(StrassenConfig { threshold, variant })
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }
}

impl Default for StrassenConfig {
    fn default() -> Self {
        StrassenConfig { threshold: Self::DEFAULT_THRESHOLD, variant: Variant::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    /// Pre-additions feeding the products.
    Sum,
    /// One of the seven recursive products.
    Product,
    /// Post-additions assembling the output quadrants.
    Recombine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockOp {
    Add,
    Sub,
    Mul,
}

impl BlockOp {
    fn symbol(&self) -> &'static str {
        match self {
            BlockOp::Add => "+",
            BlockOp::Sub => "-",
            BlockOp::Mul => "×",
        }
    }
}

/// `out = lhs op rhs` on half-size blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockInstr {
    pub phase: Phase,
    pub out: &'static str,
    pub lhs: &'static str,
    pub op: BlockOp,
    pub rhs: &'static str,
}

impl fmt::Display for BlockInstr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {} {} {}", self.out, self.lhs, self.op.symbol(), self.rhs)
    }
}

const fn ins(phase: Phase, out: &'static str, lhs: &'static str, op: BlockOp, rhs: &'static str) -> BlockInstr {
    BlockInstr { phase, out, lhs, op, rhs }
}

use BlockOp::{Add as ADD, Mul as MUL, Sub as SUB};
use Phase::{Product as P, Recombine as R, Sum as S};

pub const STRASSEN_SCHEME: &[BlockInstr] = &[
    ins(S, "S1", "A11", ADD, "A22"),
    ins(S, "T1", "B11", ADD, "B22"),
    ins(S, "S2", "A21", ADD, "A22"),
    ins(S, "T2", "B12", SUB, "B22"),
    ins(S, "T3", "B21", SUB, "B11"),
    ins(S, "S3", "A11", ADD, "A12"),
    ins(S, "S4", "A21", SUB, "A11"),
    ins(S, "T4", "B11", ADD, "B12"),
    ins(S, "S5", "A12", SUB, "A22"),
    ins(S, "T5", "B21", ADD, "B22"),
    ins(P, "M1", "S1", MUL, "T1"),
    ins(P, "M2", "S2", MUL, "B11"),
    ins(P, "M3", "A11", MUL, "T2"),
    ins(P, "M4", "A22", MUL, "T3"),
    ins(P, "M5", "S3", MUL, "B22"),
    ins(P, "M6", "S4", MUL, "T4"),
    ins(P, "M7", "S5", MUL, "T5"),
    ins(R, "V1", "M1", ADD, "M4"),
    ins(R, "V2", "V1", SUB, "M5"),
    ins(R, "C11", "V2", ADD, "M7"),
    ins(R, "C12", "M3", ADD, "M5"),
    ins(R, "C21", "M2", ADD, "M4"),
    ins(R, "W1", "M1", SUB, "M2"),
    ins(R, "W2", "W1", ADD, "M3"),
    ins(R, "C22", "W2", ADD, "M6"),
];

pub const WINOGRAD_SCHEME: &[BlockInstr] = &[
    ins(S, "S1", "A21", ADD, "A22"),
    ins(S, "S2", "S1", SUB, "A11"),
    ins(S, "S3", "A11", SUB, "A21"),
    ins(S, "S4", "A12", SUB, "S2"),
    ins(S, "T1", "B12", SUB, "B11"),
    ins(S, "T2", "B22", SUB, "T1"),
    ins(S, "T3", "B22", SUB, "B12"),
    ins(S, "T4", "T2", SUB, "B21"),
    ins(P, "M1", "A11", MUL, "B11"),
    ins(P, "M2", "A12", MUL, "B21"),
    ins(P, "M3", "S4", MUL, "B22"),
    ins(P, "M4", "A22", MUL, "T4"),
    ins(P, "M5", "S1", MUL, "T1"),
    ins(P, "M6", "S2", MUL, "T2"),
    ins(P, "M7", "S3", MUL, "T3"),
    ins(R, "C11", "M1", ADD, "M2"),
    ins(R, "U2", "M1", ADD, "M6"),
    ins(R, "U3", "U2", ADD, "M7"),
    ins(R, "U4", "U2", ADD, "M5"),
    ins(R, "C12", "U4", ADD, "M3"),
    ins(R, "C21", "U3", SUB, "M4"),
    ins(R, "C22", "U3", ADD, "M5"),
];

fn check_conformable(a: &Matrix, b: &Matrix) -> Result<()> {
    if a.cols() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(())
}

/// Plain triple-loop product; counts operations but records no steps.
pub(crate) fn product(t: &mut Tracer, a: &Matrix, b: &Matrix) -> Matrix {
    debug_assert_eq!(a.cols(), b.rows());
    let inner = a.cols() as u64;
    t.mults(a.rows() as u64 * b.cols() as u64 * inner);
    t.adds(a.rows() as u64 * b.cols() as u64 * (inner - 1));
    Matrix::from_fn(a.rows(), b.cols(), |i, j| dot(a.row(i), b, j))
}

fn dot(row: &[Rational], b: &Matrix, j: usize) -> Rational {
    let mut acc = &row[0] * b.get(0, j);
    for (k, x) in row.iter().enumerate().skip(1) {
        acc = acc + x * b.get(k, j);
    }
    acc
}

/// Dot-product multiplication: one step per output entry, then assembly.
pub fn mul_naive(a: &Matrix, b: &Matrix) -> Result<(Matrix, Trace)> {
    check_conformable(a, b)?;
    let mut t = Tracer::recording(Task::Multiply, "naive", inputs([("A", a), ("B", b)]));
    let c = naive_into(&mut t, a, b);
    let trace = t.finish(c.clone())?;
    Ok((c, trace))
}

fn naive_into(t: &mut Tracer, a: &Matrix, b: &Matrix) -> Matrix {
    let inner = a.cols() as u64;
    let c = Matrix::from_fn(a.rows(), b.cols(), |i, j| {
        t.mults(inner);
        t.adds(inner - 1);
        let value = dot(a.row(i), b, j);
        t.emit(StepKind::DotProduct, || {
            let terms: Vec<String> =
                (0..a.cols()).map(|k| format!("({})·({})", a.get(i, k), b.get(k, j))).collect();
            Draft::new(
                format!("C[{},{}] = row {} of A · column {} of B = {} = {}", i + 1, j + 1, i + 1, j + 1, terms.join(" + "), value),
                value.clone(),
            )
            .operand("row", a.row_matrix(i))
            .operand("column", b.col_matrix(j))
        });
        value
    });
    t.emit(StepKind::Assemble, || {
        Draft::new(format!("Collect the {}x{} entries into C", c.rows(), c.cols()), c.clone())
    });
    c
}

/// Strassen-style multiplication with zero padding to the next power of two.
pub fn mul_strassen(a: &Matrix, b: &Matrix, cfg: StrassenConfig) -> Result<(Matrix, Trace)> {
    check_conformable(a, b)?;
    let id = match cfg.variant {
        Variant::Winograd => "strassen",
        Variant::Strassen => "strassen-original",
    };
    let mut t = Tracer::recording(Task::Multiply, id, inputs([("A", a), ("B", b)]));
    let c = strassen_into(&mut t, a, b, cfg);
    let trace = t.finish(c.clone())?;
    Ok((c, trace))
}

/// Counting-only Strassen product, for benchmarks.
pub fn mul_strassen_counted(a: &Matrix, b: &Matrix, cfg: StrassenConfig) -> Result<(Matrix, OpCount)> {
    check_conformable(a, b)?;
    let mut t = Tracer::counting();
    let c = strassen_into(&mut t, a, b, cfg);
    Ok((c, t.total()))
}

/// Counting-only naive product, for benchmarks.
pub fn mul_naive_counted(a: &Matrix, b: &Matrix) -> Result<(Matrix, OpCount)> {
    check_conformable(a, b)?;
    let mut t = Tracer::counting();
    let c = product(&mut t, a, b);
    Ok((c, t.total()))
}

pub(crate) fn strassen_into(t: &mut Tracer, a: &Matrix, b: &Matrix, cfg: StrassenConfig) -> Matrix {
    let largest = a.rows().max(a.cols()).max(b.cols());
    if largest <= cfg.threshold {
        let c = product(t, a, b);
        t.emit(StepKind::BlockProduct, || {
            Draft::new(
                format!("Largest dimension {largest} ≤ threshold {}: multiply directly by dot products", cfg.threshold),
                c.clone(),
            )
            .operand("A", a.clone())
            .operand("B", b.clone())
        });
        return c;
    }

    let n = largest.next_power_of_two();
    let padded = a.rows() != n || a.cols() != n || b.cols() != n;
    let (pa, pb) = if padded { (a.pad(n, n), b.pad(n, n)) } else { (a.clone(), b.clone()) };
    if padded {
        t.emit(StepKind::Pad, || {
            Draft::new(format!("Pad A and B with zeros to {n}x{n}, the next power of two"), Rational::from(n as i64))
                .operand("A", pa.clone())
                .operand("B", pb.clone())
        });
    }

    let c = recurse(t, &pa, &pb, cfg, "");
    t.emit(StepKind::Assemble, || {
        Draft::new(format!("Assemble C from C11, C12, C21, C22 ({n}x{n})"), c.clone())
    });
    if !padded {
        return c;
    }
    let cropped = c.crop(a.rows(), b.cols());
    t.emit(StepKind::Unpad, || {
        Draft::new(format!("Drop the padding: keep the top-left {}x{} block", a.rows(), b.cols()), cropped.clone())
            .operand("padded", c.clone())
    });
    cropped
}

/// Multiplies square power-of-two blocks. Records the sums, products and
/// recombinations of this level; callers record the product itself.
fn recurse(t: &mut Tracer, a: &Matrix, b: &Matrix, cfg: StrassenConfig, path: &str) -> Matrix {
    let n = a.rows();
    if n <= cfg.threshold {
        return product(t, a, b);
    }
    let h = n / 2;
    let mut slots: HashMap<&'static str, Matrix> = HashMap::with_capacity(32);
    const A_KEYS: [&str; 4] = ["A11", "A12", "A21", "A22"];
    const B_KEYS: [&str; 4] = ["B11", "B12", "B21", "B22"];
    for (keys, m) in [(A_KEYS, a), (B_KEYS, b)] {
        for (key, (r0, c0)) in keys.into_iter().zip([(0, 0), (0, h), (h, 0), (h, h)]) {
            slots.insert(key, m.block(r0, c0, h, h));
        }
    }

    let prefix = if path.is_empty() { String::new() } else { format!("[{path}] ") };
    let block_cells = (h * h) as u64;
    for instr in cfg.variant.scheme() {
        let lhs = &slots[instr.lhs];
        let rhs = &slots[instr.rhs];
        let (value, kind) = match instr.op {
            BlockOp::Add => {
                t.adds(block_cells);
                (lhs.zip_with(rhs, |x, y| x + y), phase_kind(instr.phase))
            }
            BlockOp::Sub => {
                t.subs(block_cells);
                (lhs.zip_with(rhs, |x, y| x - y), phase_kind(instr.phase))
            }
            BlockOp::Mul => {
                let child = if path.is_empty() { instr.out.to_string() } else { format!("{path}.{}", instr.out) };
                (recurse(t, lhs, rhs, cfg, &child), StepKind::BlockProduct)
            }
        };
        t.emit(kind, || {
            Draft::new(format!("{prefix}{instr} ({h}x{h} blocks)"), value.clone())
                .operand(instr.lhs, lhs.clone())
                .operand(instr.rhs, rhs.clone())
        });
        slots.insert(instr.out, value);
    }
    Matrix::from_quadrants(&slots["C11"], &slots["C12"], &slots["C21"], &slots["C22"])
}

fn phase_kind(phase: Phase) -> StepKind {
    match phase {
        Phase::Sum => StepKind::BlockSum,
        Phase::Product => StepKind::BlockProduct,
        Phase::Recombine => StepKind::Recombine,
    }
}

/// Scalar multiplications performed by [`mul_strassen`] on `n x n` inputs,
/// `n` a power of two. With threshold 1 this is `7^log2(n)`.
pub fn strassen_mult_count(n: usize, threshold: usize) -> Result<u64> {
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    if threshold == 0 {
        return Err(Error::ConfigInvalid("Strassen threshold must be at least 1".into()));
    }
    let mut size = n;
    let mut products = 1u64;
    while size > threshold {
        size /= 2;
        products *= 7;
    }
    let s = size as u64;
    Ok(products * s * s * s)
}
