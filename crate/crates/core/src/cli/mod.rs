//! Batch front-end: simulations, sweeps, Wiener estimates and the shape
//! audit, writing CSV/JSON artifacts.
//!
//! Exit codes: 0 success, 1 I/O or runtime failure, 2 invalid spec or
//! arguments, 3 divergence with `--fail-on-diverge`, 4 audit regression.
//!
//! Artifacts are UTF-8 with LF line endings and `%.17g` floats. They go to
//! the spec's `outputs` directory unless `FRACLAB_OUTPUT_DIR` is set. Files
//! are written to a staging directory first and moved into place only when
//! every artifact has been produced.

mod spec;

use std::env;
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

pub use spec::{Emit, ExperimentSpec, NamedConfig};

use crate::analysis::{
    complex_leak_report, estimate_correlations, evaluate_config, reference_lambda_max, run_experiment_with,
    wiener_solution, RunRecord, SweepParam, SweepRow,
};
use crate::filters::FilterConfig;
use crate::format::{fmt_g17, Json};
use crate::plant::generate_sequence;
use crate::shapecheck::corpus::{audit_corpus_with, golden_diff, verdict_label, AuditEntry};
use crate::shapecheck::{CheckerRules, ShapeVerdict};

pub const OUTPUT_DIR_ENV: &str = "FRACLAB_OUTPUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_DIVERGED: i32 = 3;
pub const EXIT_AUDIT_REGRESSION: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn validation(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }

    fn runtime(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_RUNTIME,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::runtime(e.to_string())
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::runtime(e.to_string())
    }
}

pub fn load_spec(path: &Path) -> Result<ExperimentSpec, CliError> {
    ExperimentSpec::load(path).map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
}

pub fn output_dir(spec: &ExperimentSpec) -> PathBuf {
    env::var_os(OUTPUT_DIR_ENV).map_or_else(|| spec.outputs.clone(), PathBuf::from)
}

/// Writes `files` into a sibling staging directory, then moves them into
/// `dir`. Nothing appears in `dir` unless every file was written.
pub fn publish(dir: &Path, files: &[(String, Vec<u8>)]) -> io::Result<()> {
    let name = dir
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "output directory has no name"))?;
    let parent = match dir.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&parent)?;
    let staging = parent.join(format!(".{}.staging-{}", name.to_string_lossy(), std::process::id()));
    if staging.exists() {
        fs::remove_dir_all(&staging)?;
    }
    fs::create_dir(&staging)?;
    let written = files
        .iter()
        .try_for_each(|(file, bytes)| fs::write(staging.join(file), bytes));
    if let Err(e) = written {
        let _ = fs::remove_dir_all(&staging);
        return Err(e);
    }
    fs::create_dir_all(dir)?;
    for (file, _) in files {
        fs::rename(staging.join(file), dir.join(file))?;
    }
    fs::remove_dir(&staging)
}

fn curves_bytes(record: &RunRecord) -> Vec<u8> {
    let mut buf = Vec::new();
    record.write_curves_csv(&mut buf).expect("writing to a Vec cannot fail");
    buf
}

fn mean_max(values: &[f64]) -> Json {
    if values.is_empty() {
        return Json::object([("mean", Json::Null), ("max", Json::Null)]);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Json::object([("mean", Json::Num(mean)), ("max", Json::Num(max))])
}

pub fn config_json(cfg: &FilterConfig) -> Json {
    Json::object([
        ("variant", Json::str(cfg.variant.name())),
        ("eta", Json::Num(cfg.eta)),
        ("beta", Json::Num(cfg.beta)),
        ("v", Json::Num(cfg.v)),
        ("power_interpretation", Json::str(cfg.power_interpretation.name())),
        ("epsilon_guard", Json::Num(cfg.epsilon_guard)),
        ("dim", Json::Int(cfg.dim as i64)),
    ])
}

/// Aggregate over seeds. Terminal metrics are taken over the runs that did
/// not diverge.
pub fn config_summary(spec: &ExperimentSpec, named: &NamedConfig, runs: &[(u64, RunRecord)]) -> Json {
    let settled: Vec<&RunRecord> = runs.iter().map(|(_, r)| r).filter(|r| !r.diverged).collect();
    let errors: Vec<f64> = settled.iter().map(|r| r.terminal_weight_error()).collect();
    let mses: Vec<f64> = settled.iter().map(|r| r.terminal_mse()).collect();
    let leaks: Vec<_> = runs.iter().map(|(_, r)| complex_leak_report(r)).collect();
    let leak_mean = leaks.iter().map(|l| l.leak_fraction).sum::<f64>() / leaks.len() as f64;
    let max_imag = leaks.iter().map(|l| l.max_imag).fold(0.0, f64::max);
    let first_leak = leaks.iter().filter_map(|l| l.first_leak_iter).min();
    Json::object([
        ("config", Json::str(named.name.clone())),
        ("filter", config_json(&named.config)),
        ("T", Json::Int(spec.t_len as i64)),
        ("input", Json::str(spec.options.input.name())),
        (
            "seeds",
            Json::Array(runs.iter().map(|(s, _)| Json::Int(*s as i64)).collect()),
        ),
        ("runs", Json::Int(runs.len() as i64)),
        (
            "diverged_count",
            Json::Int(runs.iter().filter(|(_, r)| r.diverged).count() as i64),
        ),
        ("terminal_weight_error", mean_max(&errors)),
        ("terminal_mse", mean_max(&mses)),
        (
            "leak",
            Json::object([
                ("leak_fraction_mean", Json::Num(leak_mean)),
                ("max_imag", Json::Num(max_imag)),
                ("first_leak_iter", Json::opt_int(first_leak)),
            ]),
        ),
        (
            "per_seed",
            Json::Array(
                runs.iter()
                    .map(|(seed, r)| {
                        let Json::Object(mut fields) = r.summary_json() else {
                            unreachable!("run summaries are objects")
                        };
                        fields.insert(0, ("seed".into(), Json::Int(*seed as i64)));
                        Json::Object(fields)
                    })
                    .collect(),
            ),
        ),
    ])
}

/// Runs every (config, seed) cell of the spec and writes the artifacts.
pub fn cmd_simulate(spec_path: &Path, fail_on_diverge: bool, out: &mut dyn Write) -> Result<i32, CliError> {
    let spec = load_spec(spec_path)?;
    let dir = output_dir(&spec);
    let mut files = Vec::new();
    let mut diverged = Vec::new();
    for named in &spec.filters {
        let mut runs = Vec::with_capacity(spec.seeds.len());
        for &seed in &spec.seeds {
            let record = run_experiment_with(&spec.plant, &named.config, spec.t_len, seed, &spec.options)?;
            if record.diverged {
                diverged.push(format!("{} seed {seed}", named.name));
            }
            if spec.emit.curves() {
                files.push((format!("{}_seed{seed}.csv", named.name), curves_bytes(&record)));
            }
            runs.push((seed, record));
        }
        if spec.emit.summary() {
            let summary = config_summary(&spec, named, &runs);
            files.push((format!("{}_summary.json", named.name), summary.to_pretty().into_bytes()));
        }
    }
    publish(&dir, &files)?;
    writeln!(out, "wrote {} artifacts to {}", files.len(), dir.display())?;
    if !diverged.is_empty() {
        writeln!(out, "diverged: {}", diverged.join(", "))?;
        if fail_on_diverge {
            return Ok(EXIT_DIVERGED);
        }
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AuditFormat {
    #[default]
    Text,
    Json,
}

fn entry_json(e: &AuditEntry) -> Json {
    let (rule, path) = match &e.verdict {
        ShapeVerdict::Mismatch { rule, path, .. } => (
            Json::str(rule.name()),
            Json::Array(path.iter().map(|&i| Json::Int(i as i64)).collect()),
        ),
        _ => (Json::Null, Json::Null),
    };
    Json::object([
        ("equation_id", Json::str(e.equation_id)),
        ("description", Json::str(e.description)),
        ("verdict", Json::str(e.verdict.kind())),
        ("label", Json::str(verdict_label(&e.verdict))),
        ("message", Json::str(e.verdict.message())),
        ("rule", rule),
        ("path", path),
        (
            "expressions",
            Json::Array(e.expressions.iter().map(|x| Json::str(x.clone())).collect()),
        ),
    ])
}

pub fn audit_json(entries: &[AuditEntry]) -> Json {
    Json::Array(entries.iter().map(entry_json).collect())
}

pub fn audit_table(entries: &[AuditEntry]) -> String {
    let id_w = entries.iter().map(|e| e.equation_id.len()).max().unwrap_or(0).max(11);
    let labels: Vec<String> = entries.iter().map(|e| verdict_label(&e.verdict)).collect();
    let label_w = labels.iter().map(String::len).max().unwrap_or(0).max(7);
    let mut s = format!("{:<id_w$}  {:<label_w$}  message\n", "equation_id", "verdict");
    for (e, label) in entries.iter().zip(&labels) {
        s.push_str(&format!(
            "{:<id_w$}  {:<label_w$}  {}\n",
            e.equation_id,
            label,
            e.verdict.message()
        ));
    }
    s
}

/// Audits the built-in corpus. The JSON report also goes to
/// `FRACLAB_OUTPUT_DIR/audit.json` when that variable is set. Verdicts that
/// differ from the golden table produce exit code 4 with a diff.
pub fn cmd_audit(format: AuditFormat, rules: CheckerRules, out: &mut dyn Write) -> Result<i32, CliError> {
    let entries = audit_corpus_with(rules);
    let report = audit_json(&entries).to_pretty();
    match format {
        AuditFormat::Text => out.write_all(audit_table(&entries).as_bytes())?,
        AuditFormat::Json => out.write_all(report.as_bytes())?,
    }
    if let Some(dir) = env::var_os(OUTPUT_DIR_ENV) {
        publish(Path::new(&dir), &[("audit.json".into(), report.into_bytes())])?;
    }
    let diff = golden_diff(&entries);
    if diff.is_empty() {
        Ok(EXIT_OK)
    } else {
        Err(CliError {
            code: EXIT_AUDIT_REGRESSION,
            message: format!("audit deviates from the golden table:\n{}", diff.join("\n")),
        })
    }
}

fn sweep_row_csv(label: &str, row: &SweepRow) -> String {
    format!(
        "{label},{},{},{}\n",
        fmt_g17(row.diverged_fraction),
        fmt_g17(row.terminal_weight_error_mean),
        fmt_g17(row.leak_fraction_mean)
    )
}

/// Sweeps one parameter of a filter from the spec (the first one unless
/// `filter` names another) over `grid`, writing `sweep_<filter>_<param>.csv`
/// and a JSON sidecar. For `eta` a final row labelled `2/lambda_max` is
/// evaluated at the classical LMS bound.
pub fn cmd_sweep(
    spec_path: &Path,
    param: &str,
    grid: &str,
    filter: Option<&str>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let spec = load_spec(spec_path)?;
    let param = SweepParam::parse(param)
        .ok_or_else(|| CliError::validation(format!("--param: expected eta, beta or v, got `{param}`")))?;
    let grid: Vec<f64> =
        crate::config::parse_list(grid).map_err(|bad| CliError::validation(format!("--grid: cannot parse `{bad}`")))?;
    if grid.is_empty() {
        return Err(CliError::validation("--grid: no values"));
    }
    let named = match filter {
        None => &spec.filters[0],
        Some(name) => spec
            .filter(name)
            .ok_or_else(|| CliError::validation(format!("--filter: no filter named `{name}` in the spec")))?,
    };
    let mut configs = Vec::with_capacity(grid.len());
    for &value in &grid {
        let cfg = param.apply(&named.config, value);
        cfg.validate()
            .map_err(|e| CliError::validation(format!("--grid value {value}: {e}")))?;
        configs.push(cfg);
    }

    let mut csv = String::from("param_value,diverged_fraction,terminal_weight_error_mean,leak_fraction_mean\n");
    for (cfg, &value) in configs.iter().zip(&grid) {
        let row = evaluate_config(&spec.plant, cfg, value, spec.t_len, &spec.seeds, &spec.options)?;
        csv.push_str(&sweep_row_csv(&fmt_g17(value), &row));
    }
    let mut sidecar = vec![
        ("config", Json::str(named.name.clone())),
        ("filter", config_json(&named.config)),
        ("param", Json::str(param.name())),
        ("grid", Json::nums(&grid)),
        ("T", Json::Int(spec.t_len as i64)),
        (
            "seeds",
            Json::Array(spec.seeds.iter().map(|&s| Json::Int(s as i64)).collect()),
        ),
        ("input", Json::str(spec.options.input.name())),
    ];
    if param == SweepParam::Eta {
        let lambda_max = reference_lambda_max(&spec.plant, &spec.options.input, spec.t_len, spec.seeds[0])?;
        let reference = 2.0 / lambda_max;
        let cfg = param.apply(&named.config, reference);
        let row = evaluate_config(&spec.plant, &cfg, reference, spec.t_len, &spec.seeds, &spec.options)?;
        csv.push_str(&sweep_row_csv("2/lambda_max", &row));
        sidecar.push(("lambda_max", Json::Num(lambda_max)));
        sidecar.push(("reference_eta", Json::Num(reference)));
    }
    let stem = format!("sweep_{}_{}", named.name, param.name());
    let dir = output_dir(&spec);
    let files = [
        (format!("{stem}.csv"), csv.clone().into_bytes()),
        (format!("{stem}.json"), Json::object(sidecar).to_pretty().into_bytes()),
    ];
    publish(&dir, &files)?;
    out.write_all(csv.as_bytes())?;
    Ok(EXIT_OK)
}

/// Correlation estimate and Wiener solution for the spec's plant on the
/// first seed's data, printed and written to `wiener.json`.
pub fn cmd_wiener(spec_path: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let spec = load_spec(spec_path)?;
    let seed = spec.seeds[0];
    let data = generate_sequence(&spec.plant.with_seed(seed), &spec.options.input, spec.t_len)?;
    let est = estimate_correlations(&data)?;
    let omega = wiener_solution(&est, 0.0)?;
    let truth = &data.plant_truth;
    let norm = |v: &mut dyn Iterator<Item = f64>| v.map(|x| x * x).sum::<f64>().sqrt();
    let relative_error = norm(&mut omega.iter().zip(truth).map(|(a, b)| a - b)) / norm(&mut truth.iter().copied());
    let doc = Json::object([
        ("seed", Json::Int(seed as i64)),
        ("T", Json::Int(spec.t_len as i64)),
        ("input", Json::str(spec.options.input.name())),
        ("correlation", est.to_json()),
        ("lms_step_bound", Json::Num(est.lms_step_bound())),
        ("omega_opt", Json::nums(&omega)),
        ("w_true", Json::nums(truth)),
        ("relative_error", Json::Num(relative_error)),
    ])
    .to_pretty();
    publish(&output_dir(&spec), &[("wiener.json".into(), doc.clone().into_bytes())])?;
    out.write_all(doc.as_bytes())?;
    Ok(EXIT_OK)
}
