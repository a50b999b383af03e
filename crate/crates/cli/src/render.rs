//! Tables and canonical JSON.

use std::fmt::Write;

use anyhow::Result;
use serde::Serialize;

use hodge_core::covers::{EigenTable, VzReport};
use hodge_core::hodge::{GradedHodgeStructure, HodgeDiamondFamily};
use hodge_core::tower::BVStepReport;

/// Pretty JSON with keys sorted (serde_json's default map is ordered).
pub fn json<T: Serialize + ?Sized>(x: &T) -> Result<String> {
    let v = serde_json::to_value(x)?;
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

/// Centered Hodge diamond, `h^{n,n}` on top.
pub fn diamond(f: &HodgeDiamondFamily) -> String {
    let n = f.dim();
    let rows: Vec<Vec<String>> = (0..=2 * n)
        .rev()
        .map(|k| {
            let lo = k.saturating_sub(n);
            let hi = k.min(n);
            (lo..=hi).rev().map(|p| f.h(p, k - p).to_string()).collect()
        })
        .collect();
    let cell = rows.iter().flatten().map(|s| s.len()).max().unwrap_or(1).max(1);
    let width = (2 * n as usize + 1) * (cell + 1);
    let mut out = String::new();
    for row in rows {
        let line = row.iter().map(|s| format!("{s:>cell$}")).collect::<Vec<_>>().join(" ");
        let pad = (width.saturating_sub(line.len())) / 2;
        let _ = writeln!(out, "{}{}", " ".repeat(pad), line);
    }
    out
}

/// `h^{k,0} … h^{0,k}` of a single weight.
fn hodge_row(h: &GradedHodgeStructure) -> String {
    let nums = h.hodge_numbers();
    format!("({})", nums.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

pub fn hodge_row_table(weight: u32, h: &[u64]) -> String {
    let mut out = String::new();
    for (i, x) in h.iter().enumerate() {
        let p = weight as usize - i;
        let _ = writeln!(out, "h^{{{p},{}}} = {x}", i);
    }
    out
}

pub fn tower_table(reports: &[BVStepReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let f = r.output.family();
        let _ = writeln!(out, "== {} (dimension {}) ==", r.label, f.dim());
        out.push_str(&diamond(f));
        let betti = f.betti_numbers().iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" ");
        let _ = writeln!(out, "betti: {betti}");
        let _ = writeln!(out, "euler: {}", f.euler_characteristic());
        let _ = writeln!(out, "{:>6} {:>14} {:>14} {:>14}", "degree", "invariant", "exceptional", "total");
        for d in &r.degrees {
            let _ = writeln!(
                out,
                "{:>6} {:>14} {:>14} {:>14}",
                d.degree,
                hodge_row(&d.invariant),
                hodge_row(&d.exceptional),
                hodge_row(&d.total)
            );
        }
        let cm = r.cm_trace.iter().map(|s| s.state.as_str()).collect::<Vec<_>>().join(" ");
        let _ = writeln!(out, "cm by degree: {cm}");
        let rb = r.output.ramification().betti_numbers();
        let _ = writeln!(
            out,
            "ramification betti: {}",
            rb.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" ")
        );
        out.push('\n');
    }
    out
}

fn eigen_table(out: &mut String, name: &str, t: &EigenTable) {
    let _ = writeln!(out, "{name} (m = {}, genus {})", t.m, t.genus());
    let _ = writeln!(out, "{:>4} {:>8} {:>8}", "j", "h10_j", "h01_j");
    for j in 1..t.m {
        let _ = writeln!(out, "{:>4} {:>8} {:>8}", j, t.h10(j), t.h01(j));
    }
}

pub fn vz_table(r: &VzReport) -> String {
    let mut out = String::new();
    eigen_table(&mut out, "base curve", &r.base);
    out.push('\n');
    eigen_table(&mut out, "fermat curve", &r.fermat);
    out.push('\n');
    let rv = r.r_values.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
    let _ = writeln!(out, "r-values (r_1..r_{}): ({rv})", r.m - 1);
    if let Some(s) = &r.surface {
        let _ = writeln!(out, "surface core: {}", hodge_row(&s.assembly.core));
        let _ = writeln!(out, "(1,1) correction: {:+}", s.correction);
        let _ = writeln!(out, "surface H^2: {}", hodge_row(&s.diamond));
    }
    if let Some(t) = &r.threefold {
        let _ = writeln!(out, "twisted contribution to h^{{2,1}}: {}", t.twisted_contribution);
        let _ = writeln!(out, "threefold H^3: {}", hodge_row(&t.diamond));
        let oracle = t.oracle.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let _ = writeln!(out, "hypersurface oracle: ({oracle})");
    }
    out
}

/// `key: value` lines for a JSON object, nested keys joined by dots.
pub fn flat_table(v: &serde_json::Value) -> String {
    let mut out = String::new();
    flatten(&mut out, "", v);
    out
}

fn flatten(out: &mut String, prefix: &str, v: &serde_json::Value) {
    use serde_json::Value;
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(out, &key, x);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(out, &format!("{prefix}[{i}]"), x);
            }
        }
        Value::String(s) => {
            let _ = writeln!(out, "{prefix}: {s}");
        }
        other => {
            let _ = writeln!(out, "{prefix}: {other}");
        }
    }
}
