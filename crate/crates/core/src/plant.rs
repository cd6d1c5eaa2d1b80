//! Hammerstein ARX plants.
//!
//! A static nonlinearity `x(t) = sum_k c_k f_k(r(t))` feeds a finite memory
//! linear block `s(t) = sum_i q_i x(t - i)`. Stacking the basis functions of
//! every delayed input gives the regressor
//!
//! ```text
//! psi(t) = [f_1(r(t-1)), .., f_l(r(t-1)), .., f_1(r(t-m)), .., f_l(r(t-m))]
//! ```
//!
//! of length `m * l`, paired with the weight vector `w[(i-1) l + (k-1)] = q_i c_k`,
//! so that `s(t) = psi(t) . w + noise`.

use std::fmt;
use std::io::{self, Write};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::config::{self, ConfigError};
use crate::error::{Error, Result};
use crate::format::fmt_g17;

type BasisFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    Polynomial,
    Custom,
}

/// Ordered list of scalar maps `f_1..f_l` applied to each delayed input.
#[derive(Clone)]
pub struct BasisSet {
    kind: BasisKind,
    functions: Vec<BasisFn>,
}

impl BasisSet {
    /// `f_k(r) = r^k` for `k = 1..=l`.
    pub fn polynomial(l: usize) -> Result<Self> {
        if l == 0 {
            return Err(Error::InvalidParameter {
                name: "l",
                reason: "basis needs at least one function".into(),
            });
        }
        let functions = (1..=l)
            .map(|k| {
                let k = k as i32;
                Arc::new(move |r: f64| r.powi(k)) as BasisFn
            })
            .collect();
        Ok(BasisSet {
            kind: BasisKind::Polynomial,
            functions,
        })
    }

    /// User-supplied maps. They must return finite output for finite input.
    pub fn custom(functions: Vec<BasisFn>) -> Result<Self> {
        if functions.is_empty() {
            return Err(Error::InvalidParameter {
                name: "l",
                reason: "basis needs at least one function".into(),
            });
        }
        Ok(BasisSet {
            kind: BasisKind::Custom,
            functions,
        })
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn eval(&self, k: usize, r: f64) -> f64 {
        (self.functions[k])(r)
    }
}

impl fmt::Debug for BasisSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BasisSet")
            .field("kind", &self.kind)
            .field("l", &self.len())
            .finish()
    }
}

/// Ground-truth plant. Immutable once built.
#[derive(Debug, Clone)]
pub struct HarxPlant {
    m: usize,
    basis: BasisSet,
    q: Vec<f64>,
    c: Vec<f64>,
    noise_std: f64,
    seed: u64,
}

impl HarxPlant {
    pub fn new(basis: BasisSet, q: Vec<f64>, c: Vec<f64>, noise_std: f64, seed: u64) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::InvalidParameter {
                name: "q",
                reason: "memory order m must be at least 1".into(),
            });
        }
        if c.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                actual: c.len(),
            });
        }
        if q.iter().chain(&c).any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "q/c",
                reason: "coefficients must be finite".into(),
            });
        }
        if !(noise_std >= 0.0 && noise_std.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "noise_std",
                reason: format!("must be finite and nonnegative, got {noise_std}"),
            });
        }
        Ok(HarxPlant {
            m: q.len(),
            basis,
            q,
            c,
            noise_std,
            seed,
        })
    }

    /// Synthetic stand-in for an electrically stimulated muscle:
    /// `m = l = 3`, cubic polynomial basis, light output noise.
    pub fn muscle_preset() -> Self {
        HarxPlant::new(
            BasisSet::polynomial(3).expect("l = 3"),
            vec![0.6, 0.3, 0.1],
            vec![1.0, 0.5, 0.25],
            0.01,
            0,
        )
        .expect("preset is valid")
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l(&self) -> usize {
        self.basis.len()
    }

    /// Weight vector dimension `m * l`.
    pub fn dim(&self) -> usize {
        self.m * self.l()
    }

    pub fn basis(&self) -> &BasisSet {
        &self.basis
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn noise_std(&self) -> f64 {
        self.noise_std
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        HarxPlant { seed, ..self.clone() }
    }

    pub fn with_noise_std(&self, noise_std: f64) -> Result<Self> {
        HarxPlant::new(self.basis.clone(), self.q.clone(), self.c.clone(), noise_std, self.seed)
    }

    /// Parses the key-value scenario format (`m`, `l`, `basis`, `q`, `c`,
    /// `noise_std`, `seed`). Only the polynomial basis can be named in a file.
    pub fn from_scenario_str(text: &str) -> std::result::Result<Self, ConfigError> {
        let sections = config::parse_document(text)?;
        if let Some(extra) = sections.get(1) {
            return Err(ConfigError::new(extra.line, "scenario files take no sections"));
        }
        Self::from_scenario_section(&sections[0])
    }

    pub(crate) fn from_scenario_section(section: &config::Section) -> std::result::Result<Self, ConfigError> {
        section.check_keys(&["m", "l", "basis", "q", "c", "noise_std", "seed"])?;
        let q_entry = section.require("q")?;
        let q: Vec<f64> = q_entry.parse_list()?;
        let c_entry = section.require("c")?;
        let c: Vec<f64> = c_entry.parse_list()?;
        if let Some(m_entry) = section.get("m") {
            let m: usize = m_entry.parse()?;
            if m != q.len() {
                return Err(ConfigError::new(
                    m_entry.line,
                    format!("field `m` = {m} but `q` has {} entries", q.len()),
                ));
            }
        }
        let l = match section.get("l") {
            Some(e) => {
                let l: usize = e.parse()?;
                if l != c.len() {
                    return Err(ConfigError::new(
                        e.line,
                        format!("field `l` = {l} but `c` has {} entries", c.len()),
                    ));
                }
                l
            }
            None => c.len(),
        };
        if let Some(b) = section.get("basis") {
            if b.value != "polynomial" {
                return Err(ConfigError::new(
                    b.line,
                    format!("field `basis`: unsupported basis `{}` (expected `polynomial`)", b.value),
                ));
            }
        }
        let noise_std = section.parse_value("noise_std")?.unwrap_or(0.0);
        let seed = section.parse_value("seed")?.unwrap_or(0);
        let basis = BasisSet::polynomial(l).map_err(|e| ConfigError::new(c_entry.line, e.to_string()))?;
        HarxPlant::new(basis, q, c, noise_std, seed)
            .map_err(|e| ConfigError::new(section.line.max(q_entry.line), e.to_string()))
    }

    /// Scenario text for a polynomial-basis plant.
    pub fn to_scenario_string(&self) -> Option<String> {
        if self.basis.kind() != BasisKind::Polynomial {
            return None;
        }
        let join = |v: &[f64]| v.iter().map(|x| fmt_g17(*x)).collect::<Vec<_>>().join(", ");
        Some(format!(
            "m = {}\nl = {}\nbasis = polynomial\nq = {}\nc = {}\nnoise_std = {}\nseed = {}\n",
            self.m,
            self.l(),
            join(&self.q),
            join(&self.c),
            fmt_g17(self.noise_std),
            self.seed
        ))
    }
}

/// Kronecker interleaving of `q` and `c`, block by delay.
pub fn true_weight_vector(plant: &HarxPlant) -> Vec<f64> {
    plant
        .q
        .iter()
        .flat_map(|qi| plant.c.iter().map(move |ck| qi * ck))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Regressor {
    pub values: Vec<f64>,
    pub time_index: usize,
}

impl Regressor {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dot(&self, w: &[f64]) -> f64 {
        self.values.iter().zip(w).map(|(a, b)| a * b).sum()
    }
}

/// Builds `psi(t)` from `history[0..t]`, reading `r(t-1)..r(t-m)`.
pub fn build_regressor(history: &[f64], t: usize, basis: &BasisSet, m: usize) -> Result<Regressor> {
    let available = t.min(history.len());
    if available < m || t > history.len() {
        return Err(Error::InsufficientHistory { needed: m, available });
    }
    let l = basis.len();
    let mut values = Vec::with_capacity(m * l);
    for i in 1..=m {
        let r = history[t - i];
        values.extend((0..l).map(|k| basis.eval(k, r)));
    }
    Ok(Regressor { values, time_index: t })
}

/// `reg . w_true + eps` with `eps ~ N(0, noise_std^2)` drawn from `rng`.
pub fn plant_output<R: Rng + ?Sized>(plant: &HarxPlant, reg: &Regressor, rng: &mut R) -> Result<f64> {
    if reg.len() != plant.dim() {
        return Err(Error::DimensionMismatch {
            expected: plant.dim(),
            actual: reg.len(),
        });
    }
    let clean = reg.dot(&true_weight_vector(plant));
    if plant.noise_std == 0.0 {
        return Ok(clean);
    }
    let noise = Normal::new(0.0, plant.noise_std).expect("validated std");
    Ok(clean + noise.sample(rng))
}

#[derive(Debug, Clone, PartialEq, Default)]
pub enum InputKind {
    WhiteGaussian,
    /// Unit-variance uniform on `[-sqrt(3), sqrt(3)]`. Bounded, so every
    /// regressor norm is bounded too; the default for adaptive experiments.
    #[default]
    Uniform,
    Custom(Vec<f64>),
}

impl InputKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "white_gaussian" => Some(InputKind::WhiteGaussian),
            "uniform" => Some(InputKind::Uniform),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            InputKind::WhiteGaussian => "white_gaussian",
            InputKind::Uniform => "uniform",
            InputKind::Custom(_) => "custom",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub m: usize,
    pub inputs: Vec<f64>,
    pub regressors: Vec<Regressor>,
    pub outputs: Vec<f64>,
    pub plant_truth: Vec<f64>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.outputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outputs.is_empty()
    }

    /// `t,input,output` rows for every identified sample.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,input,output")?;
        for (reg, s) in self.regressors.iter().zip(&self.outputs) {
            let t = reg.time_index;
            writeln!(out, "{},{},{}", t, fmt_g17(self.inputs[t]), fmt_g17(*s))?;
        }
        Ok(())
    }
}

// Independent ChaCha streams keep the input sequence unchanged when only the
// noise level differs.
const INPUT_STREAM: u64 = 0;
const NOISE_STREAM: u64 = 1;

/// Draws `len` inputs and the `len - m` aligned (regressor, output) pairs,
/// deterministically from `plant.seed()`.
pub fn generate_sequence(plant: &HarxPlant, input: &InputKind, len: usize) -> Result<Dataset> {
    if len <= plant.m {
        return Err(Error::BadLength { len, m: plant.m });
    }
    let inputs: Vec<f64> = match input {
        InputKind::WhiteGaussian => {
            let mut rng = ChaCha8Rng::seed_from_u64(plant.seed);
            rng.set_stream(INPUT_STREAM);
            (0..len).map(|_| StandardNormal.sample(&mut rng)).collect()
        }
        InputKind::Uniform => {
            let mut rng = ChaCha8Rng::seed_from_u64(plant.seed);
            rng.set_stream(INPUT_STREAM);
            let half_width = 3f64.sqrt();
            (0..len).map(|_| rng.random_range(-half_width..=half_width)).collect()
        }
        InputKind::Custom(samples) => {
            if samples.len() < len {
                return Err(Error::BadLength {
                    len: samples.len(),
                    m: len - 1,
                });
            }
            samples[..len].to_vec()
        }
    };

    let truth = true_weight_vector(plant);
    let mut noise_rng = ChaCha8Rng::seed_from_u64(plant.seed);
    noise_rng.set_stream(NOISE_STREAM);
    let mut regressors = Vec::with_capacity(len - plant.m);
    let mut outputs = Vec::with_capacity(len - plant.m);
    for t in plant.m..len {
        let reg = build_regressor(&inputs, t, &plant.basis, plant.m)?;
        outputs.push(plant_output(plant, &reg, &mut noise_rng)?);
        regressors.push(reg);
    }
    Ok(Dataset {
        m: plant.m,
        inputs,
        regressors,
        outputs,
        plant_truth: truth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plant(q: Vec<f64>, c: Vec<f64>) -> HarxPlant {
        let l = c.len();
        HarxPlant::new(BasisSet::polynomial(l).unwrap(), q, c, 0.0, 7).unwrap()
    }

    #[test]
    fn weight_vector_examples() {
        assert_eq!(true_weight_vector(&plant(vec![1.0], vec![1.0, 1.0])), vec![1.0, 1.0]);
        assert_eq!(
            true_weight_vector(&plant(vec![2.0, 3.0], vec![1.0, -1.0])),
            vec![2.0, -2.0, 3.0, -3.0]
        );
        assert_eq!(true_weight_vector(&plant(vec![0.5], vec![4.0])), vec![2.0]);
    }

    #[test]
    fn scaling_ambiguity() {
        let base = true_weight_vector(&plant(vec![0.6, 0.3, 0.1], vec![1.0, 0.5, 0.25]));
        for alpha in [2.0, -1.0, 0.5] {
            let scaled = plant(
                vec![0.6 * alpha, 0.3 * alpha, 0.1 * alpha],
                vec![1.0 / alpha, 0.5 / alpha, 0.25 / alpha],
            );
            // powers of two and sign flips are exact in binary floating point
            assert_eq!(true_weight_vector(&scaled), base, "alpha = {alpha}");
        }
    }

    #[test]
    fn regressor_examples() {
        let p2 = BasisSet::polynomial(2).unwrap();
        let p3 = BasisSet::polynomial(3).unwrap();
        // history index t-1 = 2, t-2 = 3
        let reg = build_regressor(&[3.0, 2.0], 2, &p2, 2).unwrap();
        assert_eq!(reg.values, vec![2.0, 4.0, 3.0, 9.0]);
        assert_eq!(build_regressor(&[1.0], 1, &p3, 1).unwrap().values, vec![1.0, 1.0, 1.0]);
        assert_eq!(build_regressor(&[0.0], 1, &p2, 1).unwrap().values, vec![0.0, 0.0]);
    }

    #[test]
    fn regressor_needs_history() {
        let p2 = BasisSet::polynomial(2).unwrap();
        assert_eq!(
            build_regressor(&[1.0], 1, &p2, 2),
            Err(Error::InsufficientHistory {
                needed: 2,
                available: 1
            })
        );
        assert!(matches!(
            build_regressor(&[1.0, 2.0], 5, &p2, 2),
            Err(Error::InsufficientHistory { .. })
        ));
    }

    #[test]
    fn noise_free_output_is_exact() {
        let p = plant(vec![2.0, 3.0], vec![1.0, -1.0]);
        let reg = Regressor {
            values: vec![2.0, 4.0, 3.0, 9.0],
            time_index: 2,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(plant_output(&p, &reg, &mut rng).unwrap(), -22.0);
        let zero = Regressor {
            values: vec![0.0; 4],
            time_index: 2,
        };
        assert_eq!(plant_output(&p, &zero, &mut rng).unwrap(), 0.0);
        let short = Regressor {
            values: vec![1.0; 3],
            time_index: 2,
        };
        assert_eq!(
            plant_output(&p, &short, &mut rng),
            Err(Error::DimensionMismatch { expected: 4, actual: 3 })
        );
    }

    #[test]
    fn generate_rejects_short_sequences() {
        let p = HarxPlant::muscle_preset();
        assert_eq!(
            generate_sequence(&p, &InputKind::WhiteGaussian, 3),
            Err(Error::BadLength { len: 3, m: 3 })
        );
        assert!(generate_sequence(&p, &InputKind::WhiteGaussian, 4).is_ok());
    }

    #[test]
    fn generate_is_deterministic() {
        let p = HarxPlant::muscle_preset().with_seed(11);
        let a = generate_sequence(&p, &InputKind::WhiteGaussian, 500).unwrap();
        let b = generate_sequence(&p, &InputKind::WhiteGaussian, 500).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 497);
        let c = generate_sequence(&p.with_seed(12), &InputKind::WhiteGaussian, 500).unwrap();
        assert_ne!(a.inputs, c.inputs);
    }

    #[test]
    fn noise_level_leaves_inputs_alone() {
        let p = HarxPlant::muscle_preset().with_seed(3);
        let noisy = generate_sequence(&p, &InputKind::Uniform, 200).unwrap();
        let clean = generate_sequence(&p.with_noise_std(0.0).unwrap(), &InputKind::Uniform, 200).unwrap();
        assert_eq!(noisy.inputs, clean.inputs);
        assert!(noisy.inputs.iter().all(|x| x.abs() <= 3f64.sqrt()));
        assert_ne!(noisy.outputs, clean.outputs);
    }

    #[test]
    fn custom_input_is_used_verbatim() {
        let p = plant(vec![1.0], vec![1.0, 1.0]);
        let d = generate_sequence(&p, &InputKind::Custom(vec![1.0, 2.0, 3.0]), 3).unwrap();
        assert_eq!(d.outputs, vec![2.0, 6.0]);
        assert!(generate_sequence(&p, &InputKind::Custom(vec![1.0]), 3).is_err());
    }

    #[test]
    fn scenario_round_trip() {
        let p = HarxPlant::muscle_preset().with_seed(42);
        let text = p.to_scenario_string().unwrap();
        let back = HarxPlant::from_scenario_str(&text).unwrap();
        assert_eq!(back.q(), p.q());
        assert_eq!(back.c(), p.c());
        assert_eq!(back.noise_std(), p.noise_std());
        assert_eq!(back.seed(), 42);
    }

    #[test]
    fn scenario_errors_name_the_line() {
        let err = HarxPlant::from_scenario_str("q = 1, 2\nc = 1\nm = 3\n").unwrap_err();
        assert_eq!(err.line, 3);
        let err = HarxPlant::from_scenario_str("q = 1\nc = 1\nbasis = spline\n").unwrap_err();
        assert_eq!(err.line, 3);
        let err = HarxPlant::from_scenario_str("q = 1\nc = 1\nnoise_std = -1\n").unwrap_err();
        assert!(err.message.contains("noise_std"));
    }

    #[test]
    fn dataset_csv_header() {
        let p = plant(vec![1.0], vec![1.0]);
        let d = generate_sequence(&p, &InputKind::Custom(vec![0.5, 0.25]), 2).unwrap();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t,input,output\n1,0.25,0.5\n");
    }
}
