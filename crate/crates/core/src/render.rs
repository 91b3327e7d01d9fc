//! Human-readable renderings of traces: Markdown for teaching notes and a
//! plain-text side-by-side table for terminals.

use std::fmt::Write as _;

use crate::registry::{ComputeResponse, TraceOutcome};
use crate::trace::{align, ComparisonTable, Trace, Value};

fn fenced(out: &mut String, indent: &str, value: &impl std::fmt::Display) {
    let _ = writeln!(out, "{indent}```");
    for line in value.to_string().lines() {
        let _ = writeln!(out, "{indent}{line}");
    }
    let _ = writeln!(out, "{indent}```");
}

/// Numbered list of steps, each with its result in a fenced block.
pub fn trace_markdown(t: &Trace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "## {} by `{}`\n", t.task, t.method_id);
    for (name, m) in &t.inputs {
        let _ = writeln!(out, "**{name}** =\n");
        fenced(&mut out, "", m);
        out.push('\n');
    }
    for s in &t.steps {
        let _ = writeln!(out, "{}. {} _({}; {})_\n", s.index + 1, s.description, s.kind.as_str(), s.cost);
        fenced(&mut out, "   ", &s.result);
        out.push('\n');
    }
    let _ = writeln!(out, "**Result**\n");
    fenced(&mut out, "", &t.final_result);
    let _ = writeln!(out, "\n**Operations:** {}", t.total_cost);
    out
}

pub fn response_markdown(resp: &ComputeResponse) -> String {
    let mut out = String::new();
    for outcome in &resp.traces {
        match outcome {
            TraceOutcome::Trace(t) => out.push_str(&trace_markdown(t)),
            TraceOutcome::Failed(f) => {
                let _ = writeln!(out, "## `{}` failed\n\n{}: {}", f.method, f.error, f.message);
            }
        }
        out.push('\n');
    }
    if let Some(table) = &resp.comparison {
        if table.methods.len() > 1 {
            let _ = writeln!(out, "## Summary\n\n| method | steps | mults | adds | subs | result |\n|---|---|---|---|---|---|");
            for (c, method) in table.methods.iter().enumerate() {
                let steps = table.rows.iter().filter(|r| r[c].is_some()).count();
                let cost = table.total_costs[c];
                let result = table.final_results[c].to_string().replace('\n', " ");
                let _ = writeln!(out, "| {method} | {steps} | {} | {} | {} | `{result}` |", cost.mults, cost.adds, cost.subs);
            }
        }
    }
    out
}

const COLUMN_WIDTH: usize = 44;

fn wrap(text: &str, width: usize) -> Vec<String> {
    let mut lines = Vec::new();
    let mut line = String::new();
    for word in text.split_whitespace() {
        if !line.is_empty() && line.chars().count() + 1 + word.chars().count() > width {
            lines.push(std::mem::take(&mut line));
        }
        if !line.is_empty() {
            line.push(' ');
        }
        line.push_str(word);
    }
    if !line.is_empty() {
        lines.push(line);
    }
    lines.iter().flat_map(|l| chop(l, width)).collect()
}

/// Hard-splits preformatted text so matrix columns stay aligned.
fn chop(text: &str, width: usize) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    chars.chunks(width).map(|c| c.iter().collect()).collect()
}

fn block_lines(value: &Value) -> Vec<String> {
    value.to_string().lines().flat_map(|l| chop(&format!("  {l}"), COLUMN_WIDTH)).collect()
}

fn cell_lines(description: &str, result: &Value) -> Vec<String> {
    let mut lines = wrap(description, COLUMN_WIDTH);
    if matches!(result, Value::Matrix(_)) {
        lines.extend(block_lines(result));
    }
    lines
}

fn pad(s: &str) -> String {
    let n = s.chars().count();
    format!("{s}{}", " ".repeat(COLUMN_WIDTH.saturating_sub(n)))
}

/// Columns side by side, one row per step index; finished traces show blanks.
pub fn comparison_text(table: &ComparisonTable) -> String {
    let mut out = String::new();
    let sep = format!("+{}+\n", vec!["-".repeat(COLUMN_WIDTH + 2); table.methods.len()].join("+"));
    let row_out = |out: &mut String, cells: &[Vec<String>]| {
        let height = cells.iter().map(Vec::len).max().unwrap_or(0);
        for k in 0..height {
            out.push('|');
            for c in cells {
                let _ = write!(out, " {} |", pad(c.get(k).map(String::as_str).unwrap_or("")));
            }
            out.push('\n');
        }
    };
    out.push_str(&sep);
    let header: Vec<Vec<String>> = table.methods.iter().map(|m| vec![format!("{} [{}]", m, table.task)]).collect();
    row_out(&mut out, &header);
    out.push_str(&sep);
    for row in &table.rows {
        let cells: Vec<Vec<String>> = row
            .iter()
            .map(|cell| match cell {
                Some(c) => cell_lines(&format!("{}. {}", c.index + 1, c.description), &c.result),
                None => Vec::new(),
            })
            .collect();
        row_out(&mut out, &cells);
        out.push_str(&sep);
    }
    let totals: Vec<Vec<String>> = table.total_costs.iter().map(|c| vec![format!("total: {c}")]).collect();
    row_out(&mut out, &totals);
    let results: Vec<Vec<String>> = table
        .final_results
        .iter()
        .map(|v| {
            let mut lines = vec!["result:".to_string()];
            lines.extend(block_lines(v));
            lines
        })
        .collect();
    row_out(&mut out, &results);
    out.push_str(&sep);
    out
}

pub fn trace_text(t: &Trace) -> String {
    comparison_text(&align(std::slice::from_ref(t)).expect("a single trace always aligns"))
}

pub fn response_text(resp: &ComputeResponse) -> String {
    let mut out = String::new();
    if let Some(table) = &resp.comparison {
        out.push_str(&comparison_text(table));
    }
    for outcome in &resp.traces {
        if let TraceOutcome::Failed(f) = outcome {
            let _ = writeln!(out, "{}: {} ({})", f.method, f.error, f.message);
        }
    }
    out
}
