use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::noise::{Method, Normalization, Pair};
use crate::sweep::{preset, AxisParam, AxisSpec, AxisValues, FockPolicy, Quantity, SweepSpec};

use super::output::fmt_f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidInput(format!("unknown format '{other}' (csv or json)"))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckLevel {
    Fast,
    Full,
}

impl CheckLevel {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "fast" => Ok(CheckLevel::Fast),
            "full" => Ok(CheckLevel::Full),
            other => Err(Error::InvalidInput(format!(
                "unknown check level '{other}' (fast or full)"
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckLevel::Fast => "fast",
            CheckLevel::Full => "full",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSettings {
    /// Standard output when absent.
    pub path: Option<PathBuf>,
    pub format: OutputFormat,
}

/// Frequency grid and pair of a single-point spectrum run.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSettings {
    pub pair: Pair,
    pub normalization: Normalization,
    pub omegas: AxisValues,
}

impl Default for SpectrumSettings {
    fn default() -> Self {
        SpectrumSettings {
            pair: Pair::EE,
            normalization: Normalization::Fano,
            omegas: AxisValues::Range {
                start: 0.2,
                stop: 1.8,
                count: 300,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelParams,
    /// Fixed cutoff; the convergence ladder picks one when absent.
    pub fock_cutoff: Option<usize>,
    pub fock_cap: usize,
    pub spec: Option<SweepSpec>,
    pub spectrum: SpectrumSettings,
    pub output: OutputSettings,
    pub methods: Vec<Method>,
    pub check_level: CheckLevel,
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model: ModelParams::default(),
            fock_cutoff: None,
            fock_cap: FockPolicy::default().cap,
            spec: None,
            spectrum: SpectrumSettings::default(),
            output: OutputSettings {
                path: None,
                format: OutputFormat::Csv,
            },
            methods: vec![Method::Resolvent],
            check_level: CheckLevel::Fast,
            workers: 1,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.workers < 1 {
            return Err(Error::config("workers", 0, "workers must be ≥ 1"));
        }
        if self.methods.is_empty() {
            return Err(Error::config("methods", 0, "at least one method is required"));
        }
        if self.fock_cutoff == Some(0) || self.fock_cap == 0 {
            return Err(Error::config("model.n_fock", 0, "Fock cutoff must be ≥ 1"));
        }
        if self.spectrum.omegas.is_empty() {
            return Err(Error::config("spectrum.omega", 0, "empty frequency grid"));
        }
        if let Some(s) = &self.spec {
            s.validate()?;
        }
        Ok(())
    }

    pub fn fock_policy(&self) -> FockPolicy {
        FockPolicy {
            fixed: self.fock_cutoff,
            cap: self.fock_cap,
        }
    }
}

/// One `key = value` entry with its source line.
#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: usize,
}

fn parse_text(text: &str) -> Result<BTreeMap<String, Entry>> {
    let mut map = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| Error::config("", line, format!("expected 'key = value', got '{content}'")))?;
        let key = key.trim().to_string();
        if key.is_empty() {
            return Err(Error::config("", line, "empty key"));
        }
        if map.contains_key(&key) {
            return Err(Error::config(&key, line, "duplicate key"));
        }
        map.insert(
            key,
            Entry {
                value: value.trim().to_string(),
                line,
            },
        );
    }
    Ok(map)
}

fn json_scalar(v: &serde_json::Value) -> Option<String> {
    match v {
        serde_json::Value::String(s) => Some(s.clone()),
        serde_json::Value::Number(n) => Some(n.to_string()),
        serde_json::Value::Bool(b) => Some(b.to_string()),
        serde_json::Value::Array(items) => items
            .iter()
            .map(json_scalar)
            .collect::<Option<Vec<_>>>()
            .map(|v| v.join(",")),
        _ => None,
    }
}

fn flatten_json(prefix: &str, v: &serde_json::Value, text: &str, out: &mut BTreeMap<String, Entry>) -> Result<()> {
    match v {
        serde_json::Value::Object(m) => {
            for (k, child) in m {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten_json(&key, child, text, out)?;
            }
            Ok(())
        }
        other => {
            let leaf = prefix.rsplit('.').next().unwrap_or(prefix);
            let needle = format!("\"{leaf}\"");
            let line = text.lines().position(|l| l.contains(&needle)).map_or(0, |p| p + 1);
            let value = json_scalar(other)
                .ok_or_else(|| Error::config(prefix, line, "expected a string, number, boolean or list"))?;
            if out.insert(prefix.to_string(), Entry { value, line }).is_some() {
                return Err(Error::config(prefix, line, "duplicate key"));
            }
            Ok(())
        }
    }
}

fn parse_json(text: &str) -> Result<BTreeMap<String, Entry>> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::config("", e.line(), format!("invalid JSON: {e}")))?;
    if !v.is_object() {
        return Err(Error::config("", 1, "JSON config must be an object"));
    }
    let mut out = BTreeMap::new();
    flatten_json("", &v, text, &mut out)?;
    Ok(out)
}

struct Reader {
    entries: BTreeMap<String, Entry>,
}

impl Reader {
    fn take(&mut self, key: &str) -> Option<Entry> {
        self.entries.remove(key)
    }

    fn f64(&mut self, key: &str) -> Result<Option<(f64, usize)>> {
        match self.take(key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map(|v| Some((v, e.line)))
                .ok_or_else(|| Error::config(key, e.line, format!("expected a finite number, got '{}'", e.value))),
        }
    }

    fn usize(&mut self, key: &str) -> Result<Option<(usize, usize)>> {
        match self.take(key) {
            None => Ok(None),
            Some(e) => e.value.parse::<usize>().map(|v| Some((v, e.line))).map_err(|_| {
                Error::config(
                    key,
                    e.line,
                    format!("expected a non-negative integer, got '{}'", e.value),
                )
            }),
        }
    }

    fn bool(&mut self, key: &str) -> Result<Option<bool>> {
        match self.take(key) {
            None => Ok(None),
            Some(e) => match e.value.as_str() {
                "true" => Ok(Some(true)),
                "false" => Ok(Some(false)),
                other => Err(Error::config(
                    key,
                    e.line,
                    format!("expected true or false, got '{other}'"),
                )),
            },
        }
    }

    fn with<T>(&mut self, key: &str, f: impl FnOnce(&str) -> Result<T>) -> Result<Option<(T, usize)>> {
        match self.take(key) {
            None => Ok(None),
            Some(e) => f(&e.value)
                .map(|v| Some((v, e.line)))
                .map_err(|err| Error::config(key, e.line, err.to_string())),
        }
    }

    fn list(&mut self, key: &str) -> Result<Option<(Vec<f64>, usize)>> {
        let k = key.to_string();
        self.with(key, |s| {
            s.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| Error::InvalidInput(format!("{k}: '{}' is not a finite number", x.trim())))
                })
                .collect()
        })
    }
}

const MODEL_KEYS: [&str; 8] = [
    "epsilon",
    "delta",
    "g",
    "omega_b",
    "gamma_l",
    "gamma_r",
    "gamma_b",
    "temperature",
];

fn model_field<'a>(p: &'a mut ModelParams, key: &str) -> &'a mut f64 {
    match key {
        "epsilon" => &mut p.epsilon,
        "delta" => &mut p.delta,
        "g" => &mut p.g,
        "omega_b" => &mut p.omega_b,
        "gamma_l" => &mut p.gamma_l,
        "gamma_r" => &mut p.gamma_r,
        "gamma_b" => &mut p.gamma_b,
        "temperature" => &mut p.temperature,
        _ => unreachable!("unknown model key"),
    }
}

fn read_axis(r: &mut Reader, n: usize) -> Result<Option<AxisSpec>> {
    let p = format!("sweep.axis{n}");
    let name = r.with(&format!("{p}.name"), AxisParam::parse)?;
    let start = r.f64(&format!("{p}.start"))?;
    let stop = r.f64(&format!("{p}.stop"))?;
    let count = r.usize(&format!("{p}.count"))?;
    let values = r.list(&format!("{p}.values"))?;
    let Some((param, line)) = name else {
        if start.is_some() || stop.is_some() || count.is_some() || values.is_some() {
            return Err(Error::config(
                format!("{p}.name"),
                0,
                "axis settings given without a name",
            ));
        }
        return Ok(None);
    };
    let values = match (values, start, stop, count) {
        (Some((v, vline)), None, None, None) => {
            if v.len() < 2 {
                return Err(Error::config(format!("{p}.values"), vline, "counts ≥ 2 required"));
            }
            AxisValues::List(v)
        }
        (None, Some((a, _)), Some((b, _)), Some((c, cline))) => {
            if c < 2 {
                return Err(Error::config(format!("{p}.count"), cline, "counts ≥ 2 required"));
            }
            AxisValues::Range {
                start: a,
                stop: b,
                count: c,
            }
        }
        _ => {
            return Err(Error::config(
                p,
                line,
                "give either values or all of start, stop and count",
            ))
        }
    };
    Ok(Some(AxisSpec { param, values }))
}

/// Parses the flat `key = value` format, or a JSON object of the same keys.
pub fn parse_config_str(text: &str) -> Result<RunConfig> {
    let entries = if text.trim_start().starts_with('{') {
        parse_json(text)?
    } else {
        parse_text(text)?
    };
    let mut r = Reader { entries };
    let mut cfg = RunConfig::default();

    let preset_name = r.take("preset");
    let mut spec = match &preset_name {
        Some(e) => Some(preset(&e.value).map_err(|err| Error::config("preset", e.line, err.to_string()))?),
        None => None,
    };
    if let Some(s) = &spec {
        cfg.model = s.base;
    }
    for key in MODEL_KEYS {
        let full = format!("model.{key}");
        if let Some((v, line)) = r.f64(&full)? {
            let field = model_field(&mut cfg.model, key);
            if let (Some(p), true) = (&preset_name, field.to_bits() != v.to_bits()) {
                return Err(Error::config(
                    full,
                    line,
                    format!(
                        "conflicts with preset '{}' ({} vs {v}); use either the preset or explicit model keys as the one source of truth",
                        p.value, *field
                    ),
                ));
            }
            *field = v;
        }
    }
    if let Some((n, line)) = r.usize("model.n_fock")? {
        if n < 1 {
            return Err(Error::config("model.n_fock", line, "Fock cutoff must be ≥ 1"));
        }
        cfg.fock_cutoff = Some(n);
        cfg.model.n_fock = n;
    }
    if let Some((n, line)) = r.usize("sweep.fock_cap")? {
        if n < 1 {
            return Err(Error::config("sweep.fock_cap", line, "cap must be ≥ 1"));
        }
        cfg.fock_cap = n;
    }

    let axes: Vec<AxisSpec> = [read_axis(&mut r, 1)?, read_axis(&mut r, 2)?]
        .into_iter()
        .flatten()
        .collect();
    let quantities = r.with("sweep.quantities", |s| {
        s.split(',').map(Quantity::parse).collect::<Result<Vec<_>>>()
    })?;
    let fail_fast = r.bool("sweep.fail_fast")?;
    if let Some(s) = spec.as_mut() {
        if !axes.is_empty() {
            return Err(Error::config(
                "sweep.axis1",
                preset_name.as_ref().map_or(0, |e| e.line),
                "a preset defines its own axes; drop either the preset or the axis keys",
            ));
        }
        if let Some((q, _)) = quantities {
            s.quantities = q;
        }
    } else if !axes.is_empty() {
        let (q, _) = quantities.ok_or_else(|| Error::config("sweep.quantities", 0, "a sweep needs quantities"))?;
        spec = Some(SweepSpec::new(cfg.model, axes, q));
    } else if quantities.is_some() {
        return Err(Error::config(
            "sweep.quantities",
            0,
            "quantities given without sweep axes",
        ));
    }
    if let Some(s) = spec.as_mut() {
        s.base = cfg.model;
        s.fail_fast = fail_fast.unwrap_or(false);
        s.fock = cfg.fock_policy();
        s.validate().map_err(|e| Error::config("sweep", 0, e.to_string()))?;
    } else if fail_fast.is_some() {
        return Err(Error::config("sweep.fail_fast", 0, "fail_fast given without a sweep"));
    }
    cfg.spec = spec;

    if let Some((p, _)) = r.with("spectrum.pair", Pair::parse)? {
        cfg.spectrum.pair = p;
        cfg.spectrum.normalization = Normalization::default_for(p);
    }
    if let Some((n, line)) = r.with("spectrum.normalization", Normalization::parse)? {
        if n == Normalization::Fano && !cfg.spectrum.pair.is_diagonal() {
            return Err(Error::config(
                "spectrum.normalization",
                line,
                "fano needs a diagonal pair",
            ));
        }
        cfg.spectrum.normalization = n;
    }
    let ws = r.f64("spectrum.omega.start")?;
    let we = r.f64("spectrum.omega.stop")?;
    let wc = r.usize("spectrum.omega.count")?;
    let wv = r.list("spectrum.omega.values")?;
    match (wv, ws, we, wc) {
        (None, None, None, None) => {}
        (Some((v, _)), None, None, None) => cfg.spectrum.omegas = AxisValues::List(v),
        (None, Some((a, _)), Some((b, _)), Some((c, line))) => {
            if c < 2 {
                return Err(Error::config("spectrum.omega.count", line, "counts ≥ 2 required"));
            }
            cfg.spectrum.omegas = AxisValues::Range {
                start: a,
                stop: b,
                count: c,
            };
        }
        _ => {
            return Err(Error::config(
                "spectrum.omega",
                0,
                "give either values or all of start, stop and count",
            ))
        }
    }

    if let Some(e) = r.take("output.path") {
        cfg.output.path = Some(PathBuf::from(e.value));
    }
    if let Some((f, _)) = r.with("output.format", OutputFormat::parse)? {
        cfg.output.format = f;
    }
    if let Some((m, _)) = r.with("methods", parse_methods)? {
        cfg.methods = m;
    }
    if let Some((c, _)) = r.with("check.level", CheckLevel::parse)? {
        cfg.check_level = c;
    }
    if let Some((w, line)) = r.usize("workers")? {
        if w < 1 {
            return Err(Error::config("workers", line, "workers must be ≥ 1"));
        }
        cfg.workers = w;
    }
    if let Some((key, e)) = r.entries.iter().next() {
        return Err(Error::config(key, e.line, "unknown key"));
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_methods(s: &str) -> Result<Vec<Method>> {
    let mut out: Vec<Method> = Vec::new();
    for m in s.split(',').filter(|x| !x.trim().is_empty()) {
        let m = Method::parse(m)?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidInput("empty method list".into()));
    }
    Ok(out)
}

pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config("", 0, format!("cannot read {}: {e}", path.display())))?;
    parse_config_str(&text)
}

fn write_values(out: &mut String, key: &str, v: &AxisValues) {
    match v {
        AxisValues::Range { start, stop, count } => {
            let _ = writeln!(out, "{key}.start = {}", fmt_f64(*start));
            let _ = writeln!(out, "{key}.stop = {}", fmt_f64(*stop));
            let _ = writeln!(out, "{key}.count = {count}");
        }
        AxisValues::List(xs) => {
            let s: Vec<String> = xs.iter().map(|x| fmt_f64(*x)).collect();
            let _ = writeln!(out, "{key}.values = {}", s.join(","));
        }
    }
}

/// Text form that parses back to the same configuration.
pub fn serialize_config(cfg: &RunConfig) -> String {
    let mut out = String::new();
    let preset_name = cfg.spec.as_ref().and_then(|s| s.preset.clone());
    match &preset_name {
        Some(p) => {
            let _ = writeln!(out, "preset = {p}");
        }
        None => {
            let m = cfg.model;
            let mut p = m;
            for key in MODEL_KEYS {
                let _ = writeln!(out, "model.{key} = {}", fmt_f64(*model_field(&mut p, key)));
            }
        }
    }
    if let Some(n) = cfg.fock_cutoff {
        let _ = writeln!(out, "model.n_fock = {n}");
    }
    let _ = writeln!(out, "sweep.fock_cap = {}", cfg.fock_cap);
    if let Some(s) = &cfg.spec {
        if preset_name.is_none() {
            for (k, a) in s.axes.iter().enumerate() {
                let key = format!("sweep.axis{}", k + 1);
                let _ = writeln!(out, "{key}.name = {}", a.param);
                write_values(&mut out, &key, &a.values);
            }
        }
        let q: Vec<String> = s.quantities.iter().map(|q| q.name()).collect();
        let _ = writeln!(out, "sweep.quantities = {}", q.join(","));
        let _ = writeln!(out, "sweep.fail_fast = {}", s.fail_fast);
    }
    let _ = writeln!(out, "spectrum.pair = {}", cfg.spectrum.pair);
    let _ = writeln!(out, "spectrum.normalization = {}", cfg.spectrum.normalization.as_str());
    write_values(&mut out, "spectrum.omega", &cfg.spectrum.omegas);
    if let Some(p) = &cfg.output.path {
        let _ = writeln!(out, "output.path = {}", p.display());
    }
    let _ = writeln!(out, "output.format = {}", cfg.output.format.as_str());
    let m: Vec<&str> = cfg.methods.iter().map(|m| m.as_str()).collect();
    let _ = writeln!(out, "methods = {}", m.join(","));
    let _ = writeln!(out, "check.level = {}", cfg.check_level.as_str());
    let _ = writeln!(out, "workers = {}", cfg.workers);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file_gets_defaults() {
        let c = parse_config_str("model.delta = 0.5\n").unwrap();
        assert_eq!(c.model, ModelParams::default());
        assert!(c.spec.is_none());
        assert_eq!(c.workers, 1);
    }

    #[test]
    fn axis_count_must_be_two_or_more() {
        let text = "sweep.axis1.name = g\nsweep.axis1.start = 0\nsweep.axis1.stop = 1\nsweep.axis1.count = 1\nsweep.quantities = S_ee\n";
        let e = parse_config_str(text).unwrap_err();
        assert!(e.to_string().contains("counts ≥ 2"), "{e}");
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn preset_conflict() {
        let e = parse_config_str("preset = fig2\nmodel.delta = 0.3\n").unwrap_err();
        assert!(e.to_string().contains("one source of truth"), "{e}");
        // agreeing values are accepted
        parse_config_str("preset = fig2\nmodel.delta = 0.5\n").unwrap();
    }

    #[test]
    fn unknown_key_names_line() {
        let e = parse_config_str("model.delta = 0.5\n\nmodel.detla = 1\n").unwrap_err();
        match e {
            Error::Config { key, line, .. } => {
                assert_eq!(key, "model.detla");
                assert_eq!(line, 3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn type_mismatch() {
        let e = parse_config_str("model.g = strong\n").unwrap_err();
        assert!(
            matches!(e, Error::Config { ref key, line: 1, .. } if key == "model.g"),
            "{e:?}"
        );
    }

    #[test]
    fn json_is_the_same_keys() {
        let a = parse_config_str(
            "model.g = 0.2\nsweep.axis1.name = omega\nsweep.axis1.values = 0.5,1\nsweep.quantities = S_ee,F_Q\n",
        )
        .unwrap();
        let b = parse_config_str(r#"{"model": {"g": 0.2}, "sweep.axis1.name": "omega", "sweep.axis1.values": [0.5, 1], "sweep.quantities": "S_ee,F_Q"}"#).unwrap();
        assert_eq!(a, b);
    }
}
