//! Acceptance suite: one PASS/FAIL line per criterion. Run with
//! `cargo test -p steplinalg-cli --test acceptance`.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use common::*;
use indexmap::IndexMap;
use serde_json::{json, Value as Json};
use steplinalg::bench::{run_bench, BenchConfig};
use steplinalg::determinant::{det_laplace, det_lu, det_sarrus};
use steplinalg::eigen::eigen_rational;
use steplinalg::inverse::{charpoly, inverse_cayley_hamilton, inverse_cramer};
use steplinalg::linsolve::{solve_cramer, solve_gauss};
use steplinalg::matmul::{mul_naive, mul_naive_counted, mul_strassen, mul_strassen_counted, strassen_mult_count, StrassenConfig, Variant};
use steplinalg::pedagogy::{basis_decomposition_demo, display_instance, verify_sw_basis};
use steplinalg::random::{seeded, small_matrix};
use steplinalg::{verify, Matrix, Result as EngineResult, Trace, Value};
use steplinalg_service::{serve_on, ServiceConfig};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const CONFIGS: [(usize, Variant); 6] = [
    (1, Variant::Strassen),
    (2, Variant::Strassen),
    (4, Variant::Strassen),
    (1, Variant::Winograd),
    (2, Variant::Winograd),
    (4, Variant::Winograd),
];

fn cfg(threshold: usize, variant: Variant) -> StrassenConfig {
    StrassenConfig::new(threshold, variant).unwrap()
}

fn random_pairs(seed: u64, count: usize, max: usize) -> Vec<(Matrix, Matrix)> {
    use rand::Rng;
    let mut rng = seeded(seed);
    (0..count)
        .map(|_| {
            let (r, k, c) = (rng.random_range(1..=max), rng.random_range(1..=max), rng.random_range(1..=max));
            (small_matrix(&mut rng, r, k, 9), small_matrix(&mut rng, k, c, 9))
        })
        .collect()
}

/// Square systems with det ≠ 0 by the permutation oracle.
fn nonsingular_systems(seed: u64, count: usize) -> Vec<(Matrix, Matrix)> {
    let mut rng = seeded(seed);
    let mut out = Vec::new();
    let mut n = 0;
    while out.len() < count {
        let dim = n % 5 + 1;
        n += 1;
        let a = small_matrix(&mut rng, dim, dim, 9);
        let b = small_matrix(&mut rng, dim, 1, 9);
        if !det_perm(&a).is_zero() {
            out.push((a, b));
        }
    }
    out
}

fn method_agreement() -> Outcome {
    let mut compared = 0usize;

    let dets = corpus(101, 300, &[1, 2, 3, 3, 4, 5]);
    for a in &dets {
        let lu = det_lu(a).unwrap().0;
        ensure!(det_laplace(a).unwrap().0 == lu, "laplace and lu disagree on\n{a}");
        if a.rows() == 3 {
            ensure!(det_sarrus(a).unwrap().0 == lu, "sarrus and lu disagree on\n{a}");
        }
        compared += 1;
    }

    let mut singular = 0;
    for a in corpus(102, 300, &[1, 2, 3, 4, 5]) {
        match (inverse_cramer(&a), inverse_cayley_hamilton(&a)) {
            (Ok((x, _)), Ok((y, _))) => ensure!(x == y, "inverse methods disagree on\n{a}"),
            (Err(_), Err(_)) => singular += 1,
            _ => return Err(format!("only one inverse method succeeded on\n{a}")),
        }
        compared += 1;
    }

    for (a, b) in random_pairs(103, 300, 5) {
        let naive = mul_naive(&a, &b).unwrap().0;
        for (threshold, variant) in CONFIGS {
            ensure!(mul_strassen(&a, &b, cfg(threshold, variant)).unwrap().0 == naive, "{variant} t={threshold} differs");
        }
        compared += 1;
    }

    for (a, b) in nonsingular_systems(104, 300) {
        ensure!(solve_gauss(&a, &b).unwrap().0 == solve_cramer(&a, &b).unwrap().0, "solvers disagree on\n{a}");
        compared += 1;
    }
    Ok(format!("{compared} problems over 4 tasks, exact equality ({singular} singular inverses rejected by both)"))
}

fn basis_reproduction() -> Outcome {
    let expected = [("E11", "a 0 c 0"), ("E12", "0 a 0 c"), ("E21", "b 0 d 0"), ("E22", "0 b 0 d")];
    for variant in Variant::ALL {
        let report = verify_sw_basis(variant, 50, 2024).unwrap();
        ensure!(report.overall_pass, "{variant}: report does not pass");
        ensure!(report.checks.len() == 4, "{variant}: {} checks", report.checks.len());
        for (check, (name, pattern)) in report.checks.iter().zip(expected) {
            ensure!(check.basis == name, "check order");
            ensure!(check.expected_pattern.concat().join(" ") == pattern, "{name}: pattern {:?}", check.expected_pattern);
            ensure!(check.samples >= 50 && check.failures == 0 && check.passed, "{variant} {name} failed");
        }
        // The displayed instance: [[1,2],[3,4]] × E11 = [[1,0],[3,0]].
        ensure!(report.checks[0].computed == Matrix::from_ints(&[[1, 0], [3, 0]]), "E11 instance");
        ensure!(report.bilinearity_checks.len() == 100 && report.bilinearity_checks.iter().all(|c| c.passed), "linearity");
    }
    Ok("both variants: 4/4 basis checks and 100/100 linearity checks at 50 samples".into())
}

fn count_laws() -> Outcome {
    for k in 0..=4u32 {
        let n = 1usize << k;
        let mut rng = seeded(k as u64);
        let a = small_matrix(&mut rng, n, n, 9);
        let b = small_matrix(&mut rng, n, n, 9);
        for variant in Variant::ALL {
            let mults = mul_strassen(&a, &b, cfg(1, variant)).unwrap().1.total_cost.mults;
            ensure!(mults == 7u64.pow(k), "{variant} n={n}: {mults} mults");
        }
        ensure!(mul_naive(&a, &b).unwrap().1.total_cost.mults == 8u64.pow(k), "naive n={n}");
        ensure!(strassen_mult_count(n, 1).unwrap() == 7u64.pow(k), "formula n={n}");
    }
    let config = BenchConfig { sizes: vec![2, 4, 8, 16, 32], entry_bits: 16, thresholds: vec![1, 2, 4], repetitions: 1, seed: 42, variant: Variant::Winograd };
    let first = run_bench(&config).map_err(|e| e.to_string())?;
    let second = run_bench(&config).map_err(|e| e.to_string())?;
    let ops = |r: &steplinalg::bench::BenchReport| r.rows.iter().map(|row| (row.size, row.method.clone(), row.threshold, row.ops)).collect::<Vec<_>>();
    ensure!(ops(&first) == ops(&second), "bench op counts differ between identical runs");
    for row in &first.rows {
        let (a, b) = config.inputs(row.size);
        let standalone = match row.threshold {
            None => mul_naive_counted(&a, &b).unwrap().1,
            Some(t) => mul_strassen_counted(&a, &b, cfg(t, config.variant)).unwrap().1,
        };
        ensure!(standalone == row.ops, "bench row {} {} differs from a standalone run", row.size, row.method);
        if row.method == "naive" {
            ensure!(row.ops.mults == (row.size as u64).pow(3), "naive bench mults at {}", row.size);
        }
    }
    Ok(format!("7^k / 8^k for k = 0..4, both variants; bench over {{2,4,8,16,32}} reproducible ({} rows)", first.rows.len()))
}

fn a_of(inputs: &IndexMap<String, Matrix>) -> &Matrix {
    &inputs["A"]
}

/// Runs `trace_verify`, JSON round trip and determinism on one trace.
fn validate(t: &Trace, rerun: &Trace, oracle: impl FnOnce(&IndexMap<String, Matrix>) -> EngineResult<Value>) -> Result<(), String> {
    let report = verify(t, oracle);
    if !report.passed {
        let failed: Vec<String> = report.failures().map(|e| format!("{}: {}", e.check, e.detail)).collect();
        return Err(format!("{} trace failed verification: {}", t.method_id, failed.join("; ")));
    }
    let json = t.to_json();
    let back = Trace::from_json(&json).map_err(|e| format!("{}: {e}", t.method_id))?;
    ensure!(&back == t && back.to_json() == json, "{} JSON round trip is lossy", t.method_id);
    ensure!(rerun.to_json() == json, "{} is not deterministic", t.method_id);
    Ok(())
}

fn trace_validity() -> Outcome {
    let mut traces = 0usize;
    let mut expected_failures = 0usize;

    for (a, b) in random_pairs(201, 200, 5) {
        let oracle = |i: &IndexMap<String, Matrix>| Ok(Value::Matrix(mat_mul(&i["A"], &i["B"])));
        let t = mul_naive(&a, &b).unwrap().1;
        validate(&t, &mul_naive(&a, &b).unwrap().1, oracle)?;
        for (threshold, variant) in [(2, Variant::Winograd), (2, Variant::Strassen), (1, Variant::Winograd)] {
            let t = mul_strassen(&a, &b, cfg(threshold, variant)).unwrap().1;
            validate(&t, &mul_strassen(&a, &b, cfg(threshold, variant)).unwrap().1, oracle)?;
        }
        traces += 4;
    }

    for a in corpus(202, 200, &[1, 2, 3, 4, 5]) {
        let det = |i: &IndexMap<String, Matrix>| Ok(Value::Scalar(det_perm(a_of(i))));
        validate(&det_laplace(&a).unwrap().1, &det_laplace(&a).unwrap().1, det)?;
        validate(&det_lu(&a).unwrap().1, &det_lu(&a).unwrap().1, det)?;
        traces += 2;
        if a.rows() == 3 {
            validate(&det_sarrus(&a).unwrap().1, &det_sarrus(&a).unwrap().1, det)?;
            traces += 1;
        }
        let cp = |i: &IndexMap<String, Matrix>| Ok(Value::Polynomial(charpoly_oracle(a_of(i))));
        validate(&charpoly(&a).unwrap().1, &charpoly(&a).unwrap().1, cp)?;
        let eig = |i: &IndexMap<String, Matrix>| Ok(Value::Eigen(eigen_oracle(a_of(i))));
        validate(&eigen_rational(&a).unwrap().1, &eigen_rational(&a).unwrap().1, eig)?;
        traces += 2;
        let inv = |i: &IndexMap<String, Matrix>| {
            inverse_gj(a_of(i)).map(Value::Matrix).ok_or(steplinalg::Error::SingularMatrix("oracle".into()))
        };
        match inverse_gj(&a) {
            Some(_) => {
                validate(&inverse_cramer(&a).unwrap().1, &inverse_cramer(&a).unwrap().1, inv)?;
                validate(&inverse_cayley_hamilton(&a).unwrap().1, &inverse_cayley_hamilton(&a).unwrap().1, inv)?;
                traces += 2;
            }
            None => {
                ensure!(inverse_cramer(&a).is_err() && inverse_cayley_hamilton(&a).is_err(), "singular inverse accepted");
                expected_failures += 2;
            }
        }
    }

    // Eigen traces on matrices that do have rational spectra.
    for seed in 0..100 {
        let a = diagonalizable(seed, (seed % 4 + 1) as usize);
        let eig = |i: &IndexMap<String, Matrix>| Ok(Value::Eigen(eigen_oracle(a_of(i))));
        validate(&eigen_rational(&a).unwrap().1, &eigen_rational(&a).unwrap().1, eig)?;
        traces += 1;
    }

    let mut rng = seeded(203);
    for k in 0..200 {
        use rand::Rng;
        let (rows, cols) = (rng.random_range(1..=5), rng.random_range(1..=5));
        let a = small_matrix(&mut rng, rows, cols, 9);
        let b = if k % 2 == 0 { small_matrix(&mut rng, rows, 1, 9) } else { mat_mul(&a, &small_matrix(&mut rng, cols, 1, 9)) };
        let sol = |i: &IndexMap<String, Matrix>| Ok(Value::Solution(solve_oracle(&i["A"], &i["b"])));
        validate(&solve_gauss(&a, &b).unwrap().1, &solve_gauss(&a, &b).unwrap().1, sol)?;
        traces += 1;
        if rows == cols {
            match solve_cramer(&a, &b) {
                Ok((_, t)) => {
                    validate(&t, &solve_cramer(&a, &b).unwrap().1, sol)?;
                    traces += 1;
                }
                Err(_) => {
                    ensure!(det_perm(&a).is_zero(), "cramer rejected a nonsingular system");
                    expected_failures += 1;
                }
            }
        }
    }

    for b in corpus(204, 50, &[2]) {
        let demo = basis_decomposition_demo(&b).unwrap();
        let oracle = |i: &IndexMap<String, Matrix>| Ok(Value::Matrix(mat_mul(&i["A"], &i["B"])));
        ensure!(demo.inputs["A"] == display_instance(), "demo input A");
        validate(&demo, &basis_decomposition_demo(&b).unwrap(), oracle)?;
        traces += 1;
    }
    Ok(format!("{traces} traces verified, round-tripped and reproduced; {expected_failures} singular cases rejected as expected"))
}

fn oracle_suite() -> Outcome {
    let mut checks = 0usize;
    for a in corpus(301, 300, &[1, 2, 3, 4]) {
        let expected = det_perm(&a);
        ensure!(det_lu(&a).unwrap().0 == expected && det_laplace(&a).unwrap().0 == expected, "det differs from permutation sum");
        if a.rows() == 3 {
            ensure!(det_sarrus(&a).unwrap().0 == expected, "sarrus differs from permutation sum");
        }
        checks += 1;
    }
    for a in corpus(302, 200, &[1, 2, 3, 4, 5]) {
        if let (Ok((x, _)), Ok((y, _))) = (inverse_cramer(&a), inverse_cayley_hamilton(&a)) {
            let id = Matrix::identity(a.rows());
            ensure!(mat_mul(&a, &x) == id && mat_mul(&a, &y) == id, "A·A⁻¹ ≠ I");
            checks += 1;
        }
    }
    let mut fully = 0;
    let eigen_inputs = corpus(303, 100, &[1, 2, 3, 4, 5]).into_iter().chain((0..100).map(|s| diagonalizable(1000 + s, (s % 5 + 1) as usize)));
    for a in eigen_inputs {
        let (res, _) = eigen_rational(&a).unwrap();
        for ev in &res.eigenvalues {
            for v in &res.eigenvectors[&ev.value] {
                ensure!(mat_mul(&a, v) == v.scale(&ev.value), "A·v ≠ λ·v for λ = {}", ev.value);
                checks += 1;
            }
        }
        if res.is_fully_factored() {
            let prod = res.eigenvalues.iter().fold(r(1), |acc, e| acc * e.value.pow(e.multiplicity as u32));
            ensure!(prod == det_perm(&a), "Π λ ≠ det");
            fully += 1;
        }
    }
    ensure!(fully >= 100, "only {fully} fully factored spectra exercised");
    for (a, b) in nonsingular_systems(304, 200) {
        for x in [solve_gauss(&a, &b).unwrap().0, solve_cramer(&a, &b).unwrap().0] {
            ensure!(mat_mul(&a, x.particular_solution.as_ref().unwrap()) == b, "A·x ≠ b");
        }
        checks += 1;
    }
    Ok(format!("{checks} exact identities; Π λ = det on {fully} fully factored spectra"))
}

fn http(addr: std::net::SocketAddr, method: &str, path: &str, body: &str) -> (u16, String) {
    use std::io::{Read, Write};
    let mut stream = std::net::TcpStream::connect(addr).unwrap();
    write!(
        stream,
        "{method} {path} HTTP/1.1\r\nHost: localhost\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    )
    .unwrap();
    let mut raw = String::new();
    stream.read_to_string(&mut raw).unwrap();
    let (head, body) = raw.split_once("\r\n\r\n").unwrap();
    let status = head.split_whitespace().nth(1).unwrap().parse().unwrap();
    (status, body.to_string())
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_steplinalg")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn service_contract() -> Outcome {
    let runtime = tokio::runtime::Runtime::new().unwrap();
    let listener = runtime.block_on(tokio::net::TcpListener::bind("127.0.0.1:0")).unwrap();
    let addr = listener.local_addr().unwrap();
    let (stop, stopped) = tokio::sync::oneshot::channel::<()>();
    let server = runtime.spawn(serve_on(listener, ServiceConfig::default(), async {
        let _ = stopped.await;
    }));
    let result = contract_checks(addr);
    let _ = stop.send(());
    let _ = runtime.block_on(server);
    result
}

fn contract_checks(addr: std::net::SocketAddr) -> Outcome {
    let dir = std::env::temp_dir().join(format!("steplinalg-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let m = |rows: &[&[&str]]| json!({"rows": rows.len(), "cols": rows[0].len(), "entries": rows});
    let a3 = m(&[&["2", "-1", "0"], &["-1", "2", "-1"], &["0", "-1", "2"]]);
    let a4 = m(&[&["1", "1/2", "0", "3"], &["2", "0", "1", "-1"], &["0", "1", "1/3", "2"], &["1", "0", "0", "1"]]);
    let b3 = m(&[&["1"], &["0"], &["1"]]);
    let fixtures: Vec<(&str, &str, Vec<&str>, Json)> = vec![
        ("determinant", "det", vec!["laplace", "sarrus", "lu"], json!({"A": a3})),
        ("determinant", "det", vec!["laplace", "lu"], json!({"A": m(&[&["1", "2"], &["3", "4"]])})),
        ("multiply", "mul", vec!["naive", "strassen", "strassen-original"], json!({"A": a4, "B": a4})),
        ("inverse", "inv", vec!["cramer", "cayley_hamilton"], json!({"A": a3})),
        ("eigen", "eigen", vec!["rational"], json!({"A": a3})),
        ("solve", "solve", vec!["gauss", "cramer"], json!({"A": a3, "b": b3})),
    ];
    let mut compared = 0;
    for (k, (task, sub, methods, inputs)) in fixtures.iter().enumerate() {
        let file = dir.join(format!("fixture{k}.json"));
        std::fs::write(&file, inputs.to_string()).unwrap();
        let file = file.to_str().unwrap();
        let request = json!({"task": task, "methods": methods, "inputs": inputs}).to_string();
        let (status, body) = http(addr, "POST", "/api/v1/compute", &request);
        ensure!(status == 200, "{task}: status {status}: {body}");

        let mut args = vec![*sub];
        for m in methods {
            args.extend(["--method", m]);
        }
        args.extend(["--input", file, "--format", "json"]);
        let (code, out) = cli(&args);
        ensure!(code == 0, "cli {args:?} exited {code}");
        if methods.len() > 1 {
            ensure!(out.trim_end() == body, "{task}: service body differs from CLI output");
        }
        for m in methods {
            let (code, single) = cli(&[sub, "--method", m, "--input", file, "--format", "json"]);
            ensure!(code == 0, "cli {sub} {m} exited {code}");
            ensure!(body.contains(single.trim_end()), "{task}/{m}: CLI trace not byte-identical inside the service response");
            compared += 1;
        }
    }
    std::fs::remove_dir_all(&dir).ok();

    let (status, body) = http(addr, "GET", "/api/v1/health", "");
    ensure!(status == 200 && body == r#"{"status":"ok"}"#, "health: {status} {body}");
    let (status, body) = http(addr, "GET", "/api/v1/methods", "");
    let (_, cli_methods) = cli(&["methods", "--format", "json"]);
    ensure!(status == 200 && body == cli_methods.trim_end(), "methods differ from the CLI registry");

    let two = json!({"rows": 2, "cols": 2, "entries": [["1", "2"], ["3", "4"]]});
    let big: Vec<Vec<&str>> = vec![vec!["1"; 17]; 17];
    let cases = [
        ("{oops".to_string(), 400, "MalformedJson"),
        (json!({"task": "determinant", "methods": ["nope"], "inputs": {"A": two}}).to_string(), 400, "UnknownMethod"),
        (json!({"task": "determinant", "methods": ["gauss"], "inputs": {"A": two}}).to_string(), 422, "MethodTaskMismatch"),
        (
            json!({"task": "determinant", "methods": ["lu"], "inputs": {"A": {"rows": 17, "cols": 17, "entries": big}}}).to_string(),
            413,
            "DimensionCapExceeded",
        ),
    ];
    for (request, want, code) in cases {
        let (status, body) = http(addr, "POST", "/api/v1/compute", &request);
        let v: Json = serde_json::from_str(&body).map_err(|e| format!("{code}: {e}"))?;
        ensure!(status == want && v["error"] == code, "expected {want} {code}, got {status} {body}");
    }
    let request = json!({"task": "determinant", "methods": ["laplace", "sarrus", "lu"], "inputs": {"A": two}}).to_string();
    let (status, body) = http(addr, "POST", "/api/v1/compute", &request);
    let v: Json = serde_json::from_str(&body).unwrap();
    ensure!(status == 200 && v["traces"][1]["error"] == "NotThreeByThree", "per-trace error shape");
    ensure!(v["traces"][0]["final_result"] == "-2" && v["traces"][2]["final_result"] == "-2", "siblings lost");
    let (status, body) = http(addr, "POST", "/api/v1/verify-sw", r#"{"samples": 50}"#);
    ensure!(status == 200 && body.contains(r#""overall_pass":true"#), "verify-sw: {status}");
    Ok(format!("{compared} CLI traces byte-identical to service responses; health, methods and 5 error shapes OK (no UI needed)"))
}

fn main() {
    let criteria: [Criterion; 6] = [
        ("method agreement", method_agreement),
        ("2x2 basis-check reproduction", basis_reproduction),
        ("operation-count laws and bench harness", count_laws),
        ("trace validity", trace_validity),
        ("oracle suite", oracle_suite),
        ("service contract", service_contract),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
