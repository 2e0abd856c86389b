//! TOML run configuration: parsing, defaults, validation, and assembly of the
//! solver objects.

use crate::error::{CliError, Result};
use crate::snapshot;
use msdd_core::drive::{phi_preset, PhiPreset, PumpSpec, PumpTerm};
use msdd_core::dynamics::{make_initial, stability_bound, EnergyBase, InitialKind, InitialSpec};
use msdd_core::{Domain, Params, Potentials, Pump, State, System};
use serde::Deserialize;
use std::path::{Path, PathBuf};

/// Environment variable overriding `output.directory`.
pub const OUTPUT_DIR_ENV: &str = "MSDD_OUTPUT_DIR";

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub domain: DomainConfig,
    #[serde(default)]
    pub params: ParamsConfig,
    #[serde(default)]
    pub potential: PotentialConfig,
    #[serde(default)]
    pub pump: Vec<PumpConfig>,
    #[serde(default)]
    pub initial: InitialConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default)]
    pub spectrum: SpectrumConfig,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    #[serde(default = "unit_box")]
    pub lengths: [f64; 3],
    pub modes: [usize; 3],
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsConfig {
    pub sigma: f64,
    pub epsilon: f64,
    pub gamma: f64,
    pub eta: f64,
    pub coulomb: bool,
    pub dt: f64,
    pub t_final: f64,
    pub dealias: bool,
    pub seed: u64,
    pub energy_base: EnergyBaseName,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        Self {
            sigma: 0.0,
            epsilon: 0.0,
            gamma: 0.0,
            eta: 0.0,
            coulomb: false,
            dt: 1e-3,
            t_final: 1.0,
            dealias: false,
            seed: 0,
            energy_base: EnergyBaseName::Canonical,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnergyBaseName {
    Canonical,
    Paper,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "preset", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PotentialConfig {
    Constant {
        value: f64,
    },
    Well {
        offset: f64,
        scale: f64,
    },
    SoftCoulomb {
        offset: f64,
        charge: f64,
        softening: f64,
        /// Defaults to the box center.
        center: Option<[f64; 3]>,
    },
}

impl Default for PotentialConfig {
    fn default() -> Self {
        PotentialConfig::Constant { value: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PumpConfig {
    pub mode: [usize; 3],
    pub pattern: [f64; 3],
    pub amplitude: f64,
    #[serde(default)]
    pub omega: f64,
    #[serde(default)]
    pub phase: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialKindName {
    Ground,
    Random,
    Scaled,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialConfig {
    pub kind: InitialKindName,
    /// Multiplier for `kind = "scaled"`.
    pub factor: f64,
    pub a_norm: f64,
    pub pi_norm: f64,
    pub charge: f64,
    pub band: usize,
    /// Start from a saved snapshot instead.
    pub snapshot: Option<PathBuf>,
}

impl Default for InitialConfig {
    fn default() -> Self {
        Self {
            kind: InitialKindName::Ground,
            factor: 1.0,
            a_norm: 0.0,
            pi_norm: 0.0,
            charge: 1.0,
            band: 3,
            snapshot: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub record_every: usize,
    pub snapshot_every: Option<usize>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("out"),
            record_every: 10,
            snapshot_every: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyConfig {
    /// Initial radii of the absorbing-set ensemble.
    pub radii: Vec<f64>,
    /// Finite-difference step of the gradient check.
    pub fd_step: f64,
    /// Random directions per block in the gradient check.
    pub directions: usize,
    /// Number of `dt` halvings in the charge suite (at least 2).
    pub refinements: usize,
    /// Allowed relative drift in the conservation suite.
    pub drift_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            radii: vec![0.1, 1.0, 10.0],
            fd_step: 1e-5,
            directions: 4,
            refinements: 3,
            drift_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldSource {
    Zero,
    Initial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderName {
    H1,
    H2,
    Both,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumConfig {
    pub field: FieldSource,
    pub order: OrderName,
    pub deltas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub tol: f64,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            field: FieldSource::Initial,
            order: OrderName::Both,
            deltas: vec![0.5, 0.25, 0.125],
            alphas: vec![0.0, 0.5, 1.0, 2.0],
            tol: 1e-10,
        }
    }
}

fn unit_box() -> [f64; 3] {
    [1.0; 3]
}

/// Parses and validates a config. Syntax errors carry the 1-based line.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| {
        let line = e
            .span()
            .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
            .unwrap_or(0);
        CliError::Parse {
            line,
            message: e.message().to_string(),
        }
    })?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config(&text)
}

fn nonnegative(key: &str, v: f64, what: &str) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(CliError::invalid(key, format!("{what} must be finite and >= 0, got {v}")))
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let d = self.domain()?;
        let p = &self.params;
        let damping = "damping and absorption coefficients";
        nonnegative("params.sigma", p.sigma, damping)?;
        nonnegative("params.epsilon", p.epsilon, damping)?;
        nonnegative("params.gamma", p.gamma, damping)?;
        nonnegative("params.eta", p.eta, "the Lyapunov mixing weight")?;
        if !(p.dt.is_finite() && p.dt > 0.0) {
            return Err(CliError::invalid("params.dt", format!("time step must be > 0, got {}", p.dt)));
        }
        let bound = stability_bound(&d, p.epsilon);
        if p.dt > bound {
            return Err(CliError::invalid(
                "params.dt",
                format!("dt = {} exceeds the RK4 stability bound {bound:.6e} for this grid", p.dt),
            ));
        }
        nonnegative("params.t_final", p.t_final, "final time")?;
        self.potentials(&d)?;
        self.pump(&d)?;
        let i = &self.initial;
        nonnegative("initial.a_norm", i.a_norm, "field norm")?;
        nonnegative("initial.pi_norm", i.pi_norm, "field norm")?;
        nonnegative("initial.charge", i.charge, "charge")?;
        if !i.factor.is_finite() {
            return Err(CliError::invalid("initial.factor", "must be finite"));
        }
        if i.band == 0 {
            return Err(CliError::invalid("initial.band", "must be >= 1"));
        }
        if self.output.record_every == 0 {
            return Err(CliError::invalid("output.record_every", "must be >= 1"));
        }
        if self.output.snapshot_every == Some(0) {
            return Err(CliError::invalid("output.snapshot_every", "must be >= 1"));
        }
        let v = &self.verify;
        if v.radii.is_empty() || v.radii.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(CliError::invalid("verify.radii", "need at least one finite radius >= 0"));
        }
        if !(v.fd_step.is_finite() && v.fd_step > 0.0) {
            return Err(CliError::invalid("verify.fd_step", "must be > 0"));
        }
        if v.refinements < 2 {
            return Err(CliError::invalid("verify.refinements", "need at least 2 time steps"));
        }
        let s = &self.spectrum;
        if s.deltas.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(CliError::invalid("spectrum.deltas", "every delta must be > 0"));
        }
        if s.alphas.iter().any(|x| !x.is_finite()) {
            return Err(CliError::invalid("spectrum.alphas", "must be finite"));
        }
        Ok(())
    }

    pub fn domain(&self) -> Result<Domain> {
        Domain::new(self.domain.lengths, self.domain.modes)
            .map_err(|e| CliError::invalid("domain", e.to_string()))
    }

    pub fn potentials(&self, d: &Domain) -> Result<Potentials> {
        let preset = match self.potential {
            PotentialConfig::Constant { value } => PhiPreset::Constant { value },
            PotentialConfig::Well { offset, scale } => PhiPreset::Well { offset, scale },
            PotentialConfig::SoftCoulomb {
                offset,
                charge,
                softening,
                center,
            } => PhiPreset::SoftCoulomb {
                offset,
                charge,
                softening,
                center: center.unwrap_or(self.domain.lengths.map(|l| 0.5 * l)),
            },
        };
        phi_preset(d, preset, self.params.coulomb).map_err(|e| {
            CliError::invalid(
                "potential",
                format!("{e}; the external potential must be strictly positive on the grid"),
            )
        })
    }

    pub fn pump(&self, d: &Domain) -> Result<Pump> {
        for (i, t) in self.pump.iter().enumerate() {
            PumpSpec::new(d, vec![term(t)])
                .map_err(|e| CliError::invalid(format!("pump[{i}]"), e.to_string()))?;
        }
        Ok(PumpSpec::new(d, self.pump.iter().map(term).collect())?)
    }

    pub fn params(&self) -> Params {
        let p = &self.params;
        Params {
            sigma: p.sigma,
            epsilon: p.epsilon,
            gamma: p.gamma,
            eta: p.eta,
            coulomb: p.coulomb,
            dt: p.dt,
            t_final: p.t_final,
            dealias: p.dealias,
            seed: p.seed,
            energy_base: match p.energy_base {
                EnergyBaseName::Canonical => EnergyBase::Canonical,
                EnergyBaseName::Paper => EnergyBase::Paper,
            },
        }
    }

    pub fn system(&self) -> Result<System> {
        let d = self.domain()?;
        let pot = self.potentials(&d)?;
        let pump = self.pump(&d)?;
        Ok(System::new(d, self.params(), pump, pot)?)
    }

    pub fn initial_spec(&self) -> InitialSpec<f64> {
        let i = &self.initial;
        InitialSpec {
            kind: match i.kind {
                InitialKindName::Ground => InitialKind::Ground,
                InitialKindName::Random => InitialKind::Random,
                InitialKindName::Scaled => InitialKind::Scaled(i.factor),
            },
            a_norm: i.a_norm,
            pi_norm: i.pi_norm,
            charge: i.charge,
            band: i.band,
        }
    }

    /// Initial state from the snapshot if one is named, else from the generator.
    pub fn initial_state(&self, d: &Domain) -> Result<State> {
        match &self.initial.snapshot {
            Some(path) => snapshot::load(path, d),
            None => Ok(make_initial(d, &self.initial_spec(), self.params.seed)),
        }
    }

    /// `output.directory`, unless overridden from the environment.
    pub fn output_dir(&self) -> PathBuf {
        std::env::var_os(OUTPUT_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| self.output.directory.clone())
    }
}

fn term(t: &PumpConfig) -> PumpTerm<f64> {
    PumpTerm {
        mode: t.mode,
        pattern: t.pattern,
        amplitude: t.amplitude,
        omega: t.omega,
        phase: t.phase,
    }
}
