//! Naive vs Strassen-style timing and operation-count sweep.
//!
//! Operation counts are deterministic and reproducible; wall-clock medians
//! are reported but depend on the machine.

use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matmul::{mul_naive_counted, mul_strassen_counted, StrassenConfig, Variant};
use crate::matrix::Matrix;
use crate::random::{bits_matrix, seeded};
use crate::trace::OpCount;

pub const MAX_BENCH_SIZE: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub entry_bits: u32,
    pub thresholds: Vec<usize>,
    pub repetitions: usize,
    pub seed: u64,
    pub variant: Variant,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![2, 4, 8, 16],
            entry_bits: 64,
            thresholds: vec![1, 2, 4],
            repetitions: 5,
            seed: 42,
            variant: Variant::Winograd,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: &str| Err(Error::ConfigInvalid(msg.to_string()));
        if self.sizes.is_empty() {
            return invalid("sizes must not be empty");
        }
        if self.thresholds.is_empty() {
            return invalid("thresholds must not be empty");
        }
        if self.repetitions == 0 {
            return invalid("repetitions must be at least 1");
        }
        if self.entry_bits == 0 {
            return invalid("entry_bits must be at least 1");
        }
        if self.sizes.contains(&0) || self.thresholds.contains(&0) {
            return invalid("sizes and thresholds must be positive");
        }
        if let Some(&big) = self.sizes.iter().find(|&&s| s > MAX_BENCH_SIZE) {
            return Err(Error::ConfigInvalid(format!("size {big} exceeds the benchmark cap {MAX_BENCH_SIZE}")));
        }
        Ok(())
    }

    /// The operand pair used for `size`, independent of the other sizes.
    pub fn inputs(&self, size: usize) -> (Matrix, Matrix) {
        let mut rng = seeded(self.seed ^ (size as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let a = bits_matrix(&mut rng, size, size, self.entry_bits);
        let b = bits_matrix(&mut rng, size, size, self.entry_bits);
        (a, b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRow {
    pub size: usize,
    pub method: String,
    pub variant: Option<Variant>,
    pub threshold: Option<usize>,
    pub median_ns: u128,
    pub ops: OpCount,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossover {
    pub threshold: usize,
    /// Smallest size at which the Strassen median beats the naive median.
    pub size: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub rows: Vec<BenchRow>,
    pub crossovers: Vec<Crossover>,
}

fn median(mut samples: Vec<u128>) -> u128 {
    samples.sort_unstable();
    let mid = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        (samples[mid - 1] + samples[mid]) / 2
    }
}

fn time<F: FnMut() -> OpCount>(repetitions: usize, mut f: F) -> (u128, OpCount) {
    let mut samples = Vec::with_capacity(repetitions);
    let mut ops = OpCount::ZERO;
    for _ in 0..repetitions {
        let start = Instant::now();
        ops = f();
        samples.push(start.elapsed().as_nanos());
    }
    (median(samples), ops)
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for &size in &cfg.sizes {
        let (a, b) = cfg.inputs(size);
        let (median_ns, ops) = time(cfg.repetitions, || mul_naive_counted(&a, &b).expect("square operands").1);
        rows.push(BenchRow { size, method: "naive".into(), variant: None, threshold: None, median_ns, ops });
        for &threshold in &cfg.thresholds {
            let sc = StrassenConfig::new(threshold, cfg.variant)?;
            let (median_ns, ops) = time(cfg.repetitions, || mul_strassen_counted(&a, &b, sc).expect("square operands").1);
            rows.push(BenchRow {
                size,
                method: "strassen".into(),
                variant: Some(cfg.variant),
                threshold: Some(threshold),
                median_ns,
                ops,
            });
        }
    }
    let crossovers = crossovers(&cfg.thresholds, &rows);
    Ok(BenchReport { config: cfg.clone(), rows, crossovers })
}

/// Derives the crossover for each threshold from the timing rows.
pub fn crossovers(thresholds: &[usize], rows: &[BenchRow]) -> Vec<Crossover> {
    let mut sizes: Vec<usize> = rows.iter().map(|r| r.size).collect();
    sizes.sort_unstable();
    sizes.dedup();
    thresholds
        .iter()
        .map(|&threshold| {
            let size = sizes.iter().copied().find(|&s| {
                let naive = rows.iter().find(|r| r.size == s && r.method == "naive");
                let fast = rows.iter().find(|r| r.size == s && r.method == "strassen" && r.threshold == Some(threshold));
                matches!((naive, fast), (Some(n), Some(f)) if f.median_ns < n.median_ns)
            });
            Crossover { threshold, size }
        })
        .collect()
}

impl BenchReport {
    /// Columns `size,method,variant,threshold,median_ns,mults,adds,subs`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["size", "method", "variant", "threshold", "median_ns", "mults", "adds", "subs"])
            .expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                r.size.to_string(),
                r.method.clone(),
                r.variant.map(|v| v.to_string()).unwrap_or_default(),
                r.threshold.map(|t| t.to_string()).unwrap_or_default(),
                r.median_ns.to_string(),
                r.ops.mults.to_string(),
                r.ops.adds.to_string(),
                r.ops.subs.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:>5}  {:<9} {:<9} {:>9} {:>14} {:>12} {:>12} {:>12}",
            "size", "method", "variant", "threshold", "median_ns", "mults", "adds", "subs"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>5}  {:<9} {:<9} {:>9} {:>14} {:>12} {:>12} {:>12}",
                r.size,
                r.method,
                r.variant.map(|v| v.to_string()).unwrap_or_else(|| "-".into()),
                r.threshold.map(|t| t.to_string()).unwrap_or_else(|| "-".into()),
                r.median_ns,
                r.ops.mults,
                r.ops.adds,
                r.ops.subs
            );
        }
        out.push('\n');
        for c in &self.crossovers {
            let _ = match c.size {
                Some(s) => writeln!(out, "threshold {}: Strassen faster from size {s}", c.threshold),
                None => writeln!(out, "threshold {}: no crossover observed in the measured sizes", c.threshold),
            };
        }
        out
    }
}
