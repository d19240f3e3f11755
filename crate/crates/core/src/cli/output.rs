use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::noise::NoiseSpectrum;
use crate::sweep::GridResult;

pub const SPECTRUM_SCHEMA: &str = "#schema=transport-noise.spectrum.v1 columns=omega,value,method,pair,normalization";
pub const GRID_SCHEMA: &str = "#schema=transport-noise.grid.v1";

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "null".to_string(), fmt_f64)
}

/// CSV with one row per (method, omega).
pub fn spectra_csv(spectra: &[NoiseSpectrum]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{SPECTRUM_SCHEMA}");
    let _ = writeln!(out, "omega,value,method,pair,normalization");
    for s in spectra {
        for (w, v) in s.omegas.iter().zip(&s.values) {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                fmt_f64(*w),
                fmt_f64(*v),
                s.method.as_str(),
                s.pair,
                s.normalization.as_str()
            );
        }
    }
    out
}

/// Wide CSV: axis columns then one column per quantity; gaps are `null`.
pub fn grid_csv(g: &GridResult) -> String {
    let mut out = String::new();
    let names: Vec<String> = g.spec.axes.iter().map(|a| a.param.to_string()).collect();
    let quantities: Vec<&String> = g.data.keys().collect();
    let mut columns = names.clone();
    columns.extend(quantities.iter().map(|q| q.to_string()));
    let _ = writeln!(out, "{GRID_SCHEMA} columns={}", columns.join(","));
    if let Some(p) = &g.spec.preset {
        let _ = writeln!(out, "#preset={p}");
    }
    let _ = writeln!(out, "#cutoff_used={}", g.cutoff_used);
    if let Some(r) = &g.convergence_report {
        let _ = writeln!(out, "#convergence_change={}", fmt_f64(r.final_change));
    }
    let _ = writeln!(out, "{}", columns.join(","));
    let total: usize = g.shape.iter().product();
    for flat in 0..total {
        let mut rest = flat;
        let mut idx = vec![0; g.shape.len()];
        for d in (0..g.shape.len()).rev() {
            idx[d] = rest % g.shape[d];
            rest /= g.shape[d];
        }
        let mut cells: Vec<String> = idx
            .iter()
            .enumerate()
            .map(|(d, &i)| fmt_f64(g.axis_values[d][i]))
            .collect();
        cells.extend(quantities.iter().map(|q| fmt_opt(g.data[*q][flat])));
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent + 1);
    let end = "  ".repeat(indent);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&fmt_f64(n.as_f64().unwrap_or(f64::NAN)));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            let flat = items.iter().all(|x| !x.is_array() && !x.is_object());
            out.push('[');
            for (k, x) in items.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                if flat {
                    if k > 0 {
                        out.push(' ');
                    }
                } else {
                    out.push('\n');
                    out.push_str(&pad);
                }
                write_value(x, indent + 1, out);
            }
            if !flat {
                out.push('\n');
                out.push_str(&end);
            }
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (k, (key, x)) in map.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push('\n');
                out.push_str(&pad);
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(x, indent + 1, out);
            }
            out.push('\n');
            out.push_str(&end);
            out.push('}');
        }
    }
}

/// Pretty JSON with sorted keys and 17-digit floats; non-finite floats become `null`.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Numerical(format!("serialization: {e}")))?;
    let mut out = String::new();
    write_value(&v, 0, &mut out);
    out.push('\n');
    Ok(out)
}
