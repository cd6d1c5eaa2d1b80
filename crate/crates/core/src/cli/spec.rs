//! Experiment spec files.
//!
//! ```text
//! [plant]
//! scenario = muscle.scenario    # relative to the spec file, or inline keys
//!
//! [run]
//! T = 5000
//! seeds = 1, 2, 3
//! input = uniform               # uniform | white_gaussian
//! init = zeros                  # zeros | small_uniform
//! outputs = out
//! emit = both                   # curves | summary | both
//!
//! [filter lms_small]
//! variant = lms
//! eta = 0.01
//! ```
//!
//! Each `[filter NAME]` block takes `variant`, `eta`, and optionally `beta`
//! (default 0), `v` (default 1), `power_interpretation` (default
//! `elementwise_abs`) and `epsilon_guard` (default 0).

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use crate::analysis::{ExperimentOptions, Init};
use crate::config::{self, ConfigError, Section};
use crate::error::Error;
use crate::filters::{FilterConfig, PowerInterpretation, Variant};
use crate::plant::{HarxPlant, InputKind};

const SMALL_UNIFORM_SCALE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Emit {
    Curves,
    Summary,
    Both,
}

impl Emit {
    pub fn curves(self) -> bool {
        matches!(self, Emit::Curves | Emit::Both)
    }

    pub fn summary(self) -> bool {
        matches!(self, Emit::Summary | Emit::Both)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedConfig {
    pub name: String,
    pub config: FilterConfig,
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub plant: HarxPlant,
    pub filters: Vec<NamedConfig>,
    pub t_len: usize,
    pub seeds: Vec<u64>,
    /// Resolved against the spec file's directory.
    pub outputs: PathBuf,
    pub emit: Emit,
    pub options: ExperimentOptions,
}

impl ExperimentSpec {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path)
            .map_err(|e| ConfigError::new(0, format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    /// Parses spec text; relative paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self, ConfigError> {
        let sections = config::parse_document(text)?;
        if let Some(e) = sections[0].entries.first() {
            return Err(ConfigError::new(
                e.line,
                format!("field `{}` outside any section", e.key),
            ));
        }
        let mut plant_sec = None;
        let mut run_sec = None;
        let mut filter_secs = Vec::new();
        for s in &sections[1..] {
            let slot = match s.name.as_str() {
                "plant" => &mut plant_sec,
                "run" => &mut run_sec,
                "filter" => {
                    filter_secs.push(s);
                    continue;
                }
                other => return Err(ConfigError::new(s.line, format!("unknown section [{other}]"))),
            };
            if slot.is_some() {
                return Err(ConfigError::new(s.line, format!("duplicate section [{}]", s.name)));
            }
            *slot = Some(s);
        }
        let plant_sec = plant_sec.ok_or_else(|| ConfigError::new(0, "missing section [plant]"))?;
        let run_sec = run_sec.ok_or_else(|| ConfigError::new(0, "missing section [run]"))?;
        if filter_secs.is_empty() {
            return Err(ConfigError::new(0, "at least one [filter NAME] section is required"));
        }

        let plant = parse_plant(plant_sec, base)?;
        let run = parse_run(run_sec, &plant, base)?;

        let mut names = HashSet::new();
        let mut filters = Vec::new();
        for s in filter_secs {
            let name = s
                .label
                .clone()
                .ok_or_else(|| ConfigError::new(s.line, "filter section needs a name: [filter NAME]"))?;
            if !valid_name(&name) {
                return Err(ConfigError::new(
                    s.line,
                    format!("filter name `{name}` may only use letters, digits, `_` and `-`"),
                ));
            }
            if !names.insert(name.clone()) {
                return Err(ConfigError::new(s.line, format!("duplicate filter name `{name}`")));
            }
            filters.push(NamedConfig {
                name,
                config: parse_filter(s, plant.dim())?,
            });
        }

        Ok(ExperimentSpec {
            plant,
            filters,
            t_len: run.t_len,
            seeds: run.seeds,
            outputs: run.outputs,
            emit: run.emit,
            options: run.options,
        })
    }

    pub fn filter(&self, name: &str) -> Option<&NamedConfig> {
        self.filters.iter().find(|f| f.name == name)
    }
}

fn valid_name(name: &str) -> bool {
    name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn parse_plant(s: &Section, base: &Path) -> Result<HarxPlant, ConfigError> {
    let Some(entry) = s.get("scenario") else {
        return HarxPlant::from_scenario_section(s);
    };
    if s.entries.len() > 1 {
        return Err(ConfigError::new(
            s.line,
            "[plant] takes either `scenario` or inline plant fields, not both",
        ));
    }
    let path = base.join(&entry.value);
    let text = fs::read_to_string(&path).map_err(|e| {
        ConfigError::new(
            entry.line,
            format!("field `scenario`: cannot read {}: {e}", path.display()),
        )
    })?;
    HarxPlant::from_scenario_str(&text)
        .map_err(|e| ConfigError::new(entry.line, format!("field `scenario`: {}: {e}", path.display())))
}

struct Run {
    t_len: usize,
    seeds: Vec<u64>,
    outputs: PathBuf,
    emit: Emit,
    options: ExperimentOptions,
}

fn parse_run(s: &Section, plant: &HarxPlant, base: &Path) -> Result<Run, ConfigError> {
    s.check_keys(&["T", "seeds", "input", "init", "outputs", "emit"])?;
    let t_entry = s.require("T")?;
    let t_len: usize = t_entry.parse()?;
    if t_len <= plant.m() {
        return Err(ConfigError::new(
            t_entry.line,
            format!("field `T` = {t_len} must exceed the plant memory m = {}", plant.m()),
        ));
    }

    let seeds_entry = s.require("seeds")?;
    let seeds: Vec<u64> = seeds_entry.parse_list()?;
    if seeds.is_empty() {
        return Err(ConfigError::new(seeds_entry.line, "field `seeds` must not be empty"));
    }
    let mut seen = HashSet::new();
    if let Some(dup) = seeds.iter().find(|&&x| !seen.insert(x)) {
        return Err(ConfigError::new(
            seeds_entry.line,
            format!("field `seeds` repeats seed {dup}"),
        ));
    }

    let input = match s.get("input") {
        None => InputKind::default(),
        Some(e) => InputKind::parse(&e.value).ok_or_else(|| {
            ConfigError::new(
                e.line,
                format!("field `input`: expected uniform or white_gaussian, got `{}`", e.value),
            )
        })?,
    };
    let init = match s.get("init") {
        None => Init::Zeros,
        Some(e) => match e.value.as_str() {
            "zeros" => Init::Zeros,
            "small_uniform" => Init::SmallUniform {
                scale: SMALL_UNIFORM_SCALE,
            },
            other => {
                return Err(ConfigError::new(
                    e.line,
                    format!("field `init`: expected zeros or small_uniform, got `{other}`"),
                ))
            }
        },
    };
    let outputs = base.join(s.get("outputs").map_or("out", |e| e.value.as_str()));
    let emit = match s.get("emit") {
        None => Emit::Both,
        Some(e) => match e.value.as_str() {
            "curves" => Emit::Curves,
            "summary" => Emit::Summary,
            "both" => Emit::Both,
            other => {
                return Err(ConfigError::new(
                    e.line,
                    format!("field `emit`: expected curves, summary or both, got `{other}`"),
                ))
            }
        },
    };
    Ok(Run {
        t_len,
        seeds,
        outputs,
        emit,
        options: ExperimentOptions { input, init },
    })
}

fn parse_filter(s: &Section, dim: usize) -> Result<FilterConfig, ConfigError> {
    s.check_keys(&["variant", "eta", "beta", "v", "power_interpretation", "epsilon_guard"])?;
    let v_entry = s.require("variant")?;
    let variant = Variant::parse(&v_entry.value).ok_or_else(|| {
        ConfigError::new(
            v_entry.line,
            format!(
                "field `variant`: expected lms, momentum_lms, flms_signed or mflms_modulus, got `{}`",
                v_entry.value
            ),
        )
    })?;
    let power_interpretation = match s.get("power_interpretation") {
        None => PowerInterpretation::ElementwiseAbs,
        Some(e) => PowerInterpretation::parse(&e.value).ok_or_else(|| {
            ConfigError::new(
                e.line,
                format!(
                    "field `power_interpretation`: expected elementwise_abs or euclidean_norm, got `{}`",
                    e.value
                ),
            )
        })?,
    };
    let cfg = FilterConfig {
        variant,
        eta: s.require_value("eta")?,
        beta: s.parse_value("beta")?.unwrap_or(0.0),
        v: s.parse_value("v")?.unwrap_or(1.0),
        power_interpretation,
        epsilon_guard: s.parse_value("epsilon_guard")?.unwrap_or(0.0),
        dim,
    };
    cfg.validate().map_err(|e| match e {
        Error::InvalidParameter { name, reason } => {
            let line = s.get(name).map_or(s.line, |e| e.line);
            ConfigError::new(line, format!("field `{name}` {reason}"))
        }
        other => ConfigError::new(s.line, other.to_string()),
    })?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPEC: &str = "\
[plant]
q = 0.6, 0.3, 0.1
c = 1, 0.5, 0.25
noise_std = 0.01

[run]
T = 200
seeds = 1, 2

[filter a]
variant = lms
eta = 0.01
";

    fn parse(text: &str) -> Result<ExperimentSpec, ConfigError> {
        ExperimentSpec::parse(text, Path::new("/tmp"))
    }

    #[test]
    fn minimal_spec() {
        let s = parse(SPEC).unwrap();
        assert_eq!(s.plant.dim(), 9);
        assert_eq!(s.t_len, 200);
        assert_eq!(s.seeds, vec![1, 2]);
        assert_eq!(s.emit, Emit::Both);
        assert_eq!(s.outputs, Path::new("/tmp/out"));
        assert_eq!(s.filters[0].config, FilterConfig::lms(9, 0.01));
    }

    #[test]
    fn short_horizon_names_field_and_line() {
        let err = parse(&SPEC.replace("T = 200", "T = 3")).unwrap_err();
        assert_eq!(err.line, 7);
        assert!(err.message.contains("`T`"), "{err}");
    }

    #[test]
    fn filter_range_errors_point_at_the_key() {
        let text = format!("{SPEC}beta = 1.0\n");
        let err = parse(&text).unwrap_err();
        assert_eq!(err.line, 13);
        assert!(err.message.contains("`beta`"));
    }

    #[test]
    fn structural_errors() {
        assert!(parse(&SPEC.replace("seeds = 1, 2", "seeds = 1, 1")).is_err());
        assert!(parse(&SPEC.replace("[filter a]", "[filter]")).is_err());
        assert!(parse(&format!("{SPEC}[filter a]\nvariant = lms\neta = 1\n")).is_err());
        assert!(parse(&SPEC.replace("variant = lms", "variant = nlms")).is_err());
        assert!(parse("[plant]\nq=1\nc=1\n[run]\nT=10\nseeds=1\n").is_err());
    }
}
