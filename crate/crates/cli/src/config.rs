//! Argument parsing, config-file layering, presets, and run plans.
//!
//! Every value flag is optional at parse time so the sources can be layered
//! in a fixed order: explicit flags, then `--config` JSON (unknown keys
//! rejected), then the preset, then built-in defaults. The fully resolved
//! set is echoed to `config.resolved.json`, which feeds back through
//! `--config` to reproduce a run exactly.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use findisp_core::beam::{BeamModelParams, RotaryDivisor};
use findisp_core::curve;
use findisp_core::fem::{self, ElementKind, ExcitationProtocol, RodMesh};
use findisp_core::statics::{MomentDenominator, StaticCase, StaticLoad};
use findisp_core::{Error, MaterialSpec, ModelKind, Result, SectionProps};
use serde::{Deserialize, Serialize};

pub const PI_STR: &str = "3.141592653589793";
const TWO_PI_STR: &str = "6.283185307179586";

/// Parse a value list: either `start:stop:count` (inclusive uniform grid)
/// or a comma-separated list of numbers. A bare number is a 1-entry list.
pub fn parse_list(spec: &str, name: &str) -> Result<Vec<f64>> {
    let s = spec.trim();
    if s.is_empty() {
        return Err(Error::invalid(format!("{name}: empty value list")));
    }
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::invalid(format!(
                "{name}: grid spec must be start:stop:count, got {spec:?}"
            )));
        }
        let start: f64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("{name}: bad grid start {:?}", parts[0])))?;
        let stop: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("{name}: bad grid stop {:?}", parts[1])))?;
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("{name}: bad grid count {:?}", parts[2])))?;
        curve::uniform_grid(start, stop, count)
    } else {
        s.split(',')
            .map(|t| {
                let t = t.trim();
                let v: f64 = t
                    .parse()
                    .map_err(|_| Error::invalid(format!("{name}: bad number {t:?}")))?;
                if !v.is_finite() {
                    return Err(Error::invalid(format!("{name}: non-finite entry {t}")));
                }
                Ok(v)
            })
            .collect()
    }
}

fn parse_scalar(spec: &str, name: &str) -> Result<f64> {
    let list = parse_list(spec, name)?;
    if list.len() != 1 {
        return Err(Error::invalid(format!(
            "{name}: expected a single value, got {} entries",
            list.len()
        )));
    }
    Ok(list[0])
}

fn load_config_file<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::invalid(format!("config {}: {e}", path.display())))
}

/// Fill every `None` field of `$dst` from `$src` (later source loses).
macro_rules! overlay {
    ($dst:expr, $src:expr, [$($f:ident),* $(,)?]) => {
        $( if $dst.$f.is_none() { $dst.$f = $src.$f; } )*
    };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelArg {
    Rod,
    Conventional,
    Inextensional,
}

impl ModelArg {
    pub fn kind(self) -> ModelKind {
        match self {
            ModelArg::Rod => ModelKind::Rod,
            ModelArg::Conventional => ModelKind::ConventionalBeam,
            ModelArg::Inextensional => ModelKind::InextensionalBeam,
        }
    }

    fn beam_kind(self, context: &str) -> Result<ModelKind> {
        match self {
            ModelArg::Rod => Err(Error::invalid(format!(
                "{context}: valid models are conventional, inextensional"
            ))),
            other => Ok(other.kind()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ElementArg {
    Hermite,
    Linear,
}

impl ElementArg {
    fn kind(self) -> ElementKind {
        match self {
            ElementArg::Hermite => ElementKind::Hermite,
            ElementArg::Linear => ElementKind::Linear,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RotaryArg {
    Unity,
    OneMinusSlopeSq,
}

impl RotaryArg {
    fn divisor(self) -> RotaryDivisor {
        match self {
            RotaryArg::Unity => RotaryDivisor::Unity,
            RotaryArg::OneMinusSlopeSq => RotaryDivisor::OneMinusSlopeSq,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentArg {
    Printed,
    Corrected,
}

impl MomentArg {
    fn denominator(self) -> MomentDenominator {
        match self {
            MomentArg::Printed => MomentDenominator::Printed,
            MomentArg::Corrected => MomentDenominator::Corrected,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolArg {
    Tip,
    Initial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoadArg {
    UniformAxial,
    TipForce,
    UniformTransverse,
}

fn material(e: Option<f64>, rho: Option<f64>) -> Result<MaterialSpec> {
    MaterialSpec::new(e.unwrap_or(1.0), rho.unwrap_or(1.0), 0.0)
}

fn section(radius: Option<f64>) -> Result<SectionProps> {
    SectionProps::circular(radius.unwrap_or(0.1))
}

fn no_such_preset(name: &str, valid: &[&str]) -> Error {
    Error::invalid(format!(
        "unknown preset {name:?}; valid presets: {}",
        valid.join(", ")
    ))
}

/// A dispersion-style sweep: one curve file per amplitude.
#[derive(Debug)]
pub struct SweepPlan {
    pub model: ModelKind,
    pub material: MaterialSpec,
    pub params: Option<BeamModelParams>,
    pub b_values: Vec<f64>,
    pub kappas: Vec<f64>,
    pub out: PathBuf,
}

impl SweepPlan {
    pub fn check_unique_b(&self) -> Result<()> {
        for (i, a) in self.b_values.iter().enumerate() {
            for b in &self.b_values[..i] {
                if a == b {
                    return Err(Error::invalid(format!("duplicate amplitude B = {a}")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RodDispersionArgs {
    /// JSON file with these fields; explicit flags override it
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Named grid-and-model bundle (fig-axial)
    #[arg(long)]
    pub preset: Option<String>,
    /// Amplitude B: comma list or start:stop:count [default: 0.1]
    #[arg(long = "B")]
    pub b: Option<String>,
    /// Wavenumber grid: comma list or start:stop:count
    #[arg(long)]
    pub kappa: Option<String>,
    /// Young's modulus [Pa]
    #[arg(long)]
    pub e: Option<f64>,
    /// Density [kg/m^3]
    #[arg(long)]
    pub rho: Option<f64>,
    /// Output directory
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

impl RodDispersionArgs {
    fn preset_fields(name: &str) -> Result<Self> {
        match name {
            "fig-axial" => Ok(Self {
                b: Some("0,0.05,0.1,0.15,0.2".to_string()),
                kappa: Some(format!("0:{TWO_PI_STR}:129")),
                ..Self::default()
            }),
            _ => Err(no_such_preset(name, &["fig-axial"])),
        }
    }

    pub fn resolve(mut self) -> Result<(Self, SweepPlan)> {
        if let Some(path) = &self.config {
            let file: Self = load_config_file(path)?;
            overlay!(self, file, [preset, b, kappa, e, rho, out]);
        }
        if let Some(name) = self.preset.clone() {
            let p = Self::preset_fields(&name)?;
            overlay!(self, p, [b, kappa, e, rho, out]);
        }
        self.b.get_or_insert_with(|| "0.1".to_string());
        self.kappa.get_or_insert_with(|| format!("0:{TWO_PI_STR}:129"));
        self.e.get_or_insert(1.0);
        self.rho.get_or_insert(1.0);
        self.out.get_or_insert_with(|| PathBuf::from("out"));

        let plan = SweepPlan {
            model: ModelKind::Rod,
            material: material(self.e, self.rho)?,
            params: None,
            b_values: parse_list(self.b.as_ref().unwrap(), "--B")?,
            kappas: parse_list(self.kappa.as_ref().unwrap(), "--kappa")?,
            out: self.out.clone().unwrap(),
        };
        plan.check_unique_b()?;
        Ok((self, plan))
    }
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamDispersionArgs {
    /// JSON file with these fields; explicit flags override it
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Named grid-and-model bundle (fig-flex)
    #[arg(long)]
    pub preset: Option<String>,
    /// Beam model: conventional or inextensional
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// Amplitude B: comma list or start:stop:count [default: 0.1]
    #[arg(long = "B")]
    pub b: Option<String>,
    /// Wavenumber grid: comma list or start:stop:count
    #[arg(long)]
    pub kappa: Option<String>,
    /// Young's modulus [Pa]
    #[arg(long)]
    pub e: Option<f64>,
    /// Density [kg/m^3]
    #[arg(long)]
    pub rho: Option<f64>,
    /// Circular section radius a [m]
    #[arg(long)]
    pub radius: Option<f64>,
    /// Keep the fourth-area-moment terms [default: true]
    #[arg(long)]
    pub include_jf: Option<bool>,
    /// Rotary-inertia divisor variant [default: unity]
    #[arg(long, value_enum)]
    pub rotary_divisor: Option<RotaryArg>,
    /// Output directory
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

impl BeamDispersionArgs {
    fn preset_fields(name: &str) -> Result<Self> {
        match name {
            "fig-flex" => Ok(Self {
                model: Some(ModelArg::Inextensional),
                b: Some("0,0.05,0.1".to_string()),
                kappa: Some(format!("0:{TWO_PI_STR}:129")),
                ..Self::default()
            }),
            _ => Err(no_such_preset(name, &["fig-flex"])),
        }
    }

    pub fn resolve(mut self) -> Result<(Self, SweepPlan)> {
        if let Some(path) = &self.config {
            let file: Self = load_config_file(path)?;
            overlay!(
                self,
                file,
                [preset, model, b, kappa, e, rho, radius, include_jf, rotary_divisor, out]
            );
        }
        if let Some(name) = self.preset.clone() {
            let p = Self::preset_fields(&name)?;
            overlay!(self, p, [model, b, kappa, e, rho, radius, include_jf, rotary_divisor, out]);
        }
        let model = self
            .model
            .ok_or_else(|| {
                Error::invalid("--model is required; valid models: conventional, inextensional")
            })?
            .beam_kind("--model")?;
        self.b.get_or_insert_with(|| "0.1".to_string());
        self.kappa.get_or_insert_with(|| format!("0:{TWO_PI_STR}:129"));
        self.e.get_or_insert(1.0);
        self.rho.get_or_insert(1.0);
        self.radius.get_or_insert(0.1);
        self.include_jf.get_or_insert(true);
        self.rotary_divisor.get_or_insert(RotaryArg::Unity);
        self.out.get_or_insert_with(|| PathBuf::from("out"));

        let mat = material(self.e, self.rho)?;
        let params = BeamModelParams::new(mat, section(self.radius)?, model)?
            .with_include_jf(self.include_jf.unwrap())
            .with_rotary_divisor(self.rotary_divisor.unwrap().divisor());
        let plan = SweepPlan {
            model,
            material: mat,
            params: Some(params),
            b_values: parse_list(self.b.as_ref().unwrap(), "--B")?,
            kappas: parse_list(self.kappa.as_ref().unwrap(), "--kappa")?,
            out: self.out.clone().unwrap(),
        };
        plan.check_unique_b()?;
        Ok((self, plan))
    }
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupVelocityArgs {
    /// JSON file with these fields; explicit flags override it
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Named grid-and-model bundle (fig-group)
    #[arg(long)]
    pub preset: Option<String>,
    /// Model: rod, conventional, or inextensional
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// Amplitude B: comma list or start:stop:count [default: 0.1]
    #[arg(long = "B")]
    pub b: Option<String>,
    /// Wavenumber grid: comma list or start:stop:count
    #[arg(long)]
    pub kappa: Option<String>,
    /// Young's modulus [Pa]
    #[arg(long)]
    pub e: Option<f64>,
    /// Density [kg/m^3]
    #[arg(long)]
    pub rho: Option<f64>,
    /// Circular section radius a [m] (beam models)
    #[arg(long)]
    pub radius: Option<f64>,
    /// Keep the fourth-area-moment terms [default: true]
    #[arg(long)]
    pub include_jf: Option<bool>,
    /// Rotary-inertia divisor variant [default: unity]
    #[arg(long, value_enum)]
    pub rotary_divisor: Option<RotaryArg>,
    /// Output directory
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

impl GroupVelocityArgs {
    fn preset_fields(name: &str) -> Result<Self> {
        match name {
            "fig-group" => Ok(Self {
                model: Some(ModelArg::Rod),
                b: Some("0,0.05,0.1,0.15,0.2".to_string()),
                kappa: Some(format!("0:{TWO_PI_STR}:129")),
                ..Self::default()
            }),
            _ => Err(no_such_preset(name, &["fig-group"])),
        }
    }

    pub fn resolve(mut self) -> Result<(Self, SweepPlan)> {
        if let Some(path) = &self.config {
            let file: Self = load_config_file(path)?;
            overlay!(
                self,
                file,
                [preset, model, b, kappa, e, rho, radius, include_jf, rotary_divisor, out]
            );
        }
        if let Some(name) = self.preset.clone() {
            let p = Self::preset_fields(&name)?;
            overlay!(self, p, [model, b, kappa, e, rho, radius, include_jf, rotary_divisor, out]);
        }
        let model = self
            .model
            .ok_or_else(|| {
                Error::invalid("--model is required; valid models: rod, conventional, inextensional")
            })?
            .kind();
        self.b.get_or_insert_with(|| "0.1".to_string());
        self.kappa.get_or_insert_with(|| format!("0:{TWO_PI_STR}:129"));
        self.e.get_or_insert(1.0);
        self.rho.get_or_insert(1.0);
        self.radius.get_or_insert(0.1);
        self.include_jf.get_or_insert(true);
        self.rotary_divisor.get_or_insert(RotaryArg::Unity);
        self.out.get_or_insert_with(|| PathBuf::from("out"));

        let mat = material(self.e, self.rho)?;
        let params = if model == ModelKind::Rod {
            None
        } else {
            Some(
                BeamModelParams::new(mat, section(self.radius)?, model)?
                    .with_include_jf(self.include_jf.unwrap())
                    .with_rotary_divisor(self.rotary_divisor.unwrap().divisor()),
            )
        };
        let plan = SweepPlan {
            model,
            material: mat,
            params,
            b_values: parse_list(self.b.as_ref().unwrap(), "--B")?,
            kappas: parse_list(self.kappa.as_ref().unwrap(), "--kappa")?,
            out: self.out.clone().unwrap(),
        };
        plan.check_unique_b()?;
        Ok((self, plan))
    }
}

#[derive(Debug)]
pub struct DeviationPlan {
    pub model: ModelKind,
    pub material: MaterialSpec,
    pub params: Option<BeamModelParams>,
    pub kappa: f64,
    pub b_values: Vec<f64>,
    pub out: PathBuf,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviationArgs {
    /// JSON file with these fields; explicit flags override it
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Named grid-and-model bundle (fig-error)
    #[arg(long)]
    pub preset: Option<String>,
    /// Model: rod, conventional, or inextensional [default: rod]
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// Fixed wavenumber [default: pi]
    #[arg(long)]
    pub kappa: Option<String>,
    /// Amplitude sweep: comma list or start:stop:count [default: 0:0.2:41]
    #[arg(long = "B")]
    pub b: Option<String>,
    /// Young's modulus [Pa]
    #[arg(long)]
    pub e: Option<f64>,
    /// Density [kg/m^3]
    #[arg(long)]
    pub rho: Option<f64>,
    /// Circular section radius a [m] (beam models)
    #[arg(long)]
    pub radius: Option<f64>,
    /// Keep the fourth-area-moment terms [default: true]
    #[arg(long)]
    pub include_jf: Option<bool>,
    /// Rotary-inertia divisor variant [default: unity]
    #[arg(long, value_enum)]
    pub rotary_divisor: Option<RotaryArg>,
    /// Output directory
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

impl DeviationArgs {
    fn preset_fields(name: &str) -> Result<Self> {
        match name {
            "fig-error" => Ok(Self {
                model: Some(ModelArg::Rod),
                kappa: Some(PI_STR.to_string()),
                b: Some("0:0.2:41".to_string()),
                ..Self::default()
            }),
            _ => Err(no_such_preset(name, &["fig-error"])),
        }
    }

    pub fn resolve(mut self) -> Result<(Self, DeviationPlan)> {
        if let Some(path) = &self.config {
            let file: Self = load_config_file(path)?;
            overlay!(
                self,
                file,
                [preset, model, kappa, b, e, rho, radius, include_jf, rotary_divisor, out]
            );
        }
        if let Some(name) = self.preset.clone() {
            let p = Self::preset_fields(&name)?;
            overlay!(self, p, [model, kappa, b, e, rho, radius, include_jf, rotary_divisor, out]);
        }
        self.model.get_or_insert(ModelArg::Rod);
        self.kappa.get_or_insert_with(|| PI_STR.to_string());
        self.b.get_or_insert_with(|| "0:0.2:41".to_string());
        self.e.get_or_insert(1.0);
        self.rho.get_or_insert(1.0);
        self.radius.get_or_insert(0.1);
        self.include_jf.get_or_insert(true);
        self.rotary_divisor.get_or_insert(RotaryArg::Unity);
        self.out.get_or_insert_with(|| PathBuf::from("out"));

        let model = self.model.unwrap().kind();
        let mat = material(self.e, self.rho)?;
        let params = if model == ModelKind::Rod {
            None
        } else {
            Some(
                BeamModelParams::new(mat, section(self.radius)?, model)?
                    .with_include_jf(self.include_jf.unwrap())
                    .with_rotary_divisor(self.rotary_divisor.unwrap().divisor()),
            )
        };
        let plan = DeviationPlan {
            model,
            material: mat,
            params,
            kappa: parse_scalar(self.kappa.as_ref().unwrap(), "--kappa")?,
            b_values: parse_list(self.b.as_ref().unwrap(), "--B")?,
            out: self.out.clone().unwrap(),
        };
        Ok((self, plan))
    }
}

#[derive(Debug)]
pub struct JfPlan {
    pub model: ModelKind,
    pub material: MaterialSpec,
    pub ratios: Vec<f64>,
    pub kappa: f64,
    pub b: f64,
    pub out: PathBuf,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JfErrorArgs {
    /// JSON file with these fields; explicit flags override it
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Named grid-and-model bundle (fig-jf)
    #[arg(long)]
    pub preset: Option<String>,
    /// Beam model: conventional or inextensional [default: inextensional]
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// Slenderness ratios a/B: comma list or start:stop:count
    #[arg(long)]
    pub a_over_b: Option<String>,
    /// Fixed wavenumber [default: pi]
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Fixed amplitude [default: 0.1]
    #[arg(long = "B")]
    pub b: Option<f64>,
    /// Young's modulus [Pa]
    #[arg(long)]
    pub e: Option<f64>,
    /// Density [kg/m^3]
    #[arg(long)]
    pub rho: Option<f64>,
    /// Output directory
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

impl JfErrorArgs {
    fn preset_fields(name: &str) -> Result<Self> {
        match name {
            "fig-jf" => Ok(Self {
                model: Some(ModelArg::Inextensional),
                a_over_b: Some("0.01,0.025,0.05,0.1,0.2".to_string()),
                kappa: Some(std::f64::consts::PI),
                b: Some(0.1),
                ..Self::default()
            }),
            _ => Err(no_such_preset(name, &["fig-jf"])),
        }
    }

    pub fn resolve(mut self) -> Result<(Self, JfPlan)> {
        if let Some(path) = &self.config {
            let file: Self = load_config_file(path)?;
            overlay!(self, file, [preset, model, a_over_b, kappa, b, e, rho, out]);
        }
        if let Some(name) = self.preset.clone() {
            let p = Self::preset_fields(&name)?;
            overlay!(self, p, [model, a_over_b, kappa, b, e, rho, out]);
        }
        self.model.get_or_insert(ModelArg::Inextensional);
        self.a_over_b
            .get_or_insert_with(|| "0.01,0.025,0.05,0.1,0.2".to_string());
        self.kappa.get_or_insert(std::f64::consts::PI);
        self.b.get_or_insert(0.1);
        self.e.get_or_insert(1.0);
        self.rho.get_or_insert(1.0);
        self.out.get_or_insert_with(|| PathBuf::from("out"));

        let plan = JfPlan {
            model: self.model.unwrap().beam_kind("--model")?,
            material: material(self.e, self.rho)?,
            ratios: parse_list(self.a_over_b.as_ref().unwrap(), "--a-over-b")?,
            kappa: self.kappa.unwrap(),
            b: self.b.unwrap(),
            out: self.out.clone().unwrap(),
        };
        Ok((self, plan))
    }
}

#[derive(Debug)]
pub struct SimPlan {
    pub mesh: RodMesh,
    pub material: MaterialSpec,
    pub section: SectionProps,
    pub protocol: ExcitationProtocol,
    pub out: PathBuf,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateRodArgs {
    /// JSON file with these fields; explicit flags override it
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Named parameter bundle (fig-rod-wave)
    #[arg(long)]
    pub preset: Option<String>,
    /// Excitation: tip (driven end) or initial (released field) [default: tip]
    #[arg(long, value_enum)]
    pub protocol: Option<ProtocolArg>,
    /// Excitation amplitude B [default: 0.1]
    #[arg(long = "B")]
    pub b: Option<f64>,
    /// Drive frequency (tip protocol) [default: pi]
    #[arg(long)]
    pub omega: Option<f64>,
    /// Field wavenumber (initial protocol) [default: pi]
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Domain length [m]; defaults to the recommended span for the protocol
    #[arg(long)]
    pub length: Option<f64>,
    /// Element count [default: 60]
    #[arg(long)]
    pub elements: Option<usize>,
    /// Element family [default: hermite]
    #[arg(long, value_enum)]
    pub element_kind: Option<ElementArg>,
    /// Simulated span [s]; defaults to 1.05 reference periods
    #[arg(long)]
    pub duration: Option<f64>,
    /// Snapshot spacing [s] [default: 1e-4]
    #[arg(long)]
    pub stride: Option<f64>,
    /// Young's modulus [Pa]
    #[arg(long)]
    pub e: Option<f64>,
    /// Density [kg/m^3]
    #[arg(long)]
    pub rho: Option<f64>,
    /// Circular section radius a [m]
    #[arg(long)]
    pub radius: Option<f64>,
    /// Output directory
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

impl SimulateRodArgs {
    fn preset_fields(name: &str) -> Result<Self> {
        match name {
            "fig-rod-wave" => Ok(Self {
                protocol: Some(ProtocolArg::Tip),
                b: Some(0.1),
                omega: Some(std::f64::consts::PI),
                ..Self::default()
            }),
            _ => Err(no_such_preset(name, &["fig-rod-wave"])),
        }
    }

    pub fn resolve(mut self) -> Result<(Self, SimPlan)> {
        if let Some(path) = &self.config {
            let file: Self = load_config_file(path)?;
            overlay!(
                self,
                file,
                [preset, protocol, b, omega, kappa, length, elements, element_kind, duration,
                 stride, e, rho, radius, out]
            );
        }
        if let Some(name) = self.preset.clone() {
            let p = Self::preset_fields(&name)?;
            overlay!(
                self,
                p,
                [protocol, b, omega, kappa, length, elements, element_kind, duration, stride,
                 e, rho, radius, out]
            );
        }
        self.protocol.get_or_insert(ProtocolArg::Tip);
        self.b.get_or_insert(0.1);
        self.omega.get_or_insert(std::f64::consts::PI);
        self.kappa.get_or_insert(std::f64::consts::PI);
        self.elements.get_or_insert(fem::DEFAULT_N_ELEM);
        self.element_kind.get_or_insert(ElementArg::Hermite);
        self.stride.get_or_insert(fem::DEFAULT_STRIDE);
        self.e.get_or_insert(1.0);
        self.rho.get_or_insert(1.0);
        self.radius.get_or_insert(0.1);
        self.out.get_or_insert_with(|| PathBuf::from("out"));

        let mat = material(self.e, self.rho)?;
        let b = self.b.unwrap();
        let mut protocol = match self.protocol.unwrap() {
            ProtocolArg::Tip => ExcitationProtocol::tip_sinusoid(b, self.omega.unwrap())?,
            ProtocolArg::Initial => ExcitationProtocol::initial_field(b, self.kappa.unwrap())?,
        };
        if let Some(d) = self.duration {
            protocol = protocol.with_duration(d)?;
        }
        protocol = protocol.with_stride(self.stride.unwrap())?;

        let length = match (self.length, self.protocol.unwrap()) {
            (Some(l), _) => l,
            (None, ProtocolArg::Tip) => fem::recommended_length(&mat, b, self.omega.unwrap())?,
            (None, ProtocolArg::Initial) => fem::recommended_initial_length(self.kappa.unwrap())?,
        };
        self.length = Some(length);

        let plan = SimPlan {
            mesh: RodMesh::new(length, self.elements.unwrap(), self.element_kind.unwrap().kind())?,
            material: mat,
            section: section(self.radius)?,
            protocol,
            out: self.out.clone().unwrap(),
        };
        Ok((self, plan))
    }
}

#[derive(Debug)]
pub struct StaticPlan {
    pub case: StaticCase,
    pub out: PathBuf,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StaticArgs {
    /// JSON file with these fields; explicit flags override it
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Named parameter bundle (fig-rod-static, fig-flex-static,
    /// fig-flex-static-conventional)
    #[arg(long)]
    pub preset: Option<String>,
    /// Model: rod, conventional, or inextensional
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// Load kind: uniform-axial, tip-force (rod) or uniform-transverse (beams)
    #[arg(long, value_enum)]
    pub load: Option<LoadArg>,
    /// Normalized load value (rod: q_u L/EA or P/EA; beams: q_v L^3 / 8EJ)
    #[arg(long, allow_hyphen_values = true)]
    pub value: Option<f64>,
    /// Member length [m] [default: 1]
    #[arg(long)]
    pub length: Option<f64>,
    /// Collocation points [default: 200]
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Gravity [m/s^2] [default: 0]
    #[arg(long)]
    pub gravity: Option<f64>,
    /// Drop the axial-stiffness term of the conventional beam [default: false]
    #[arg(long)]
    pub drop_ea_term: Option<bool>,
    /// Inextensional bending-moment denominator [default: printed]
    #[arg(long, value_enum)]
    pub moment_denominator: Option<MomentArg>,
    /// Young's modulus [Pa]
    #[arg(long)]
    pub e: Option<f64>,
    /// Density [kg/m^3]
    #[arg(long)]
    pub rho: Option<f64>,
    /// Circular section radius a [m]
    #[arg(long)]
    pub radius: Option<f64>,
    /// Output directory
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

impl StaticArgs {
    fn preset_fields(name: &str) -> Result<Self> {
        let valid = &["fig-rod-static", "fig-flex-static", "fig-flex-static-conventional"];
        match name {
            "fig-rod-static" => Ok(Self {
                model: Some(ModelArg::Rod),
                load: Some(LoadArg::TipForce),
                value: Some(0.2),
                ..Self::default()
            }),
            "fig-flex-static" => Ok(Self {
                model: Some(ModelArg::Inextensional),
                load: Some(LoadArg::UniformTransverse),
                value: Some(-0.5),
                ..Self::default()
            }),
            "fig-flex-static-conventional" => Ok(Self {
                model: Some(ModelArg::Conventional),
                load: Some(LoadArg::UniformTransverse),
                value: Some(-0.5),
                ..Self::default()
            }),
            _ => Err(no_such_preset(name, valid)),
        }
    }

    pub fn resolve(mut self) -> Result<(Self, StaticPlan)> {
        if let Some(path) = &self.config {
            let file: Self = load_config_file(path)?;
            overlay!(
                self,
                file,
                [preset, model, load, value, length, resolution, gravity, drop_ea_term,
                 moment_denominator, e, rho, radius, out]
            );
        }
        if let Some(name) = self.preset.clone() {
            let p = Self::preset_fields(&name)?;
            overlay!(
                self,
                p,
                [model, load, value, length, resolution, gravity, drop_ea_term,
                 moment_denominator, e, rho, radius, out]
            );
        }
        let model = self
            .model
            .ok_or_else(|| Error::invalid("--model is required (or use --preset)"))?
            .kind();
        let load_kind = self
            .load
            .ok_or_else(|| Error::invalid("--load is required (or use --preset)"))?;
        let value = self
            .value
            .ok_or_else(|| Error::invalid("--value is required (or use --preset)"))?;
        self.length.get_or_insert(1.0);
        self.resolution.get_or_insert(findisp_core::statics::DEFAULT_STATIC_RESOLUTION);
        self.gravity.get_or_insert(0.0);
        self.drop_ea_term.get_or_insert(false);
        self.moment_denominator.get_or_insert(MomentArg::Printed);
        self.e.get_or_insert(1.0);
        self.rho.get_or_insert(1.0);
        self.radius.get_or_insert(0.1);
        self.out.get_or_insert_with(|| PathBuf::from("out"));

        let load = match load_kind {
            LoadArg::UniformAxial => StaticLoad::UniformAxial { value },
            LoadArg::TipForce => StaticLoad::TipForce { value },
            LoadArg::UniformTransverse => StaticLoad::UniformTransverse { value },
        };
        let case = StaticCase::new(
            model,
            material(self.e, self.rho)?,
            section(self.radius)?,
            self.length.unwrap(),
            load,
        )?
        .with_gravity(self.gravity.unwrap())?
        .with_resolution(self.resolution.unwrap())?
        .with_drop_ea_term(self.drop_ea_term.unwrap())
        .with_moment_denominator(self.moment_denominator.unwrap().denominator());
        let out = self.out.clone().unwrap();
        Ok((self, StaticPlan { case, out }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_spec_parses_grids_and_commas() {
        assert_eq!(parse_list("0.1", "x").unwrap(), vec![0.1]);
        assert_eq!(parse_list("0.05, 0.1", "x").unwrap(), vec![0.05, 0.1]);
        let g = parse_list("0:1:5", "x").unwrap();
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(parse_list("0:1", "x").is_err());
        assert!(parse_list("a,b", "x").is_err());
        assert!(parse_list("", "x").is_err());
        assert!(parse_list("1:0:4", "x").is_err());
    }

    #[test]
    fn rod_dispersion_defaults_fill_in() {
        let (filled, plan) = RodDispersionArgs::default().resolve().unwrap();
        assert_eq!(plan.b_values, vec![0.1]);
        assert_eq!(plan.kappas.len(), 129);
        assert_eq!(filled.e, Some(1.0));
        assert_eq!(filled.out.as_deref(), Some(Path::new("out")));
    }

    #[test]
    fn preset_fills_only_missing_fields() {
        let args = RodDispersionArgs {
            preset: Some("fig-axial".to_string()),
            b: Some("0.07".to_string()),
            ..Default::default()
        };
        let (_, plan) = args.resolve().unwrap();
        // explicit B wins over the preset list, grid comes from the preset
        assert_eq!(plan.b_values, vec![0.07]);
        assert_eq!(plan.kappas.len(), 129);
    }

    #[test]
    fn unknown_preset_lists_valid_names() {
        let args = DeviationArgs {
            preset: Some("fig-bogus".to_string()),
            ..Default::default()
        };
        let err = args.resolve().unwrap_err().to_string();
        assert!(err.contains("fig-error"), "{err}");
    }

    #[test]
    fn beam_dispersion_rejects_rod_model() {
        let args = BeamDispersionArgs {
            model: Some(ModelArg::Rod),
            ..Default::default()
        };
        let err = args.resolve().unwrap_err().to_string();
        assert!(err.contains("conventional, inextensional"), "{err}");
    }

    #[test]
    fn config_file_rejects_unknown_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        fs::write(&path, r#"{"b": "0.1", "bogus_key": 3}"#).unwrap();
        let args = RodDispersionArgs {
            config: Some(path),
            ..Default::default()
        };
        let err = args.resolve().unwrap_err().to_string();
        assert!(err.contains("bogus_key"), "{err}");
    }

    #[test]
    fn config_file_loses_to_explicit_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        fs::write(&path, r#"{"b": "0.2", "kappa": "0:1:3"}"#).unwrap();
        let args = RodDispersionArgs {
            config: Some(path),
            b: Some("0.05".to_string()),
            ..Default::default()
        };
        let (_, plan) = args.resolve().unwrap();
        assert_eq!(plan.b_values, vec![0.05]);
        assert_eq!(plan.kappas, vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn resolved_echo_round_trips() {
        let (filled, plan) = RodDispersionArgs::default().resolve().unwrap();
        let echo = serde_json::to_string(&filled).unwrap();
        let reloaded: RodDispersionArgs = serde_json::from_str(&echo).unwrap();
        let (_, plan2) = reloaded.resolve().unwrap();
        assert_eq!(plan.b_values, plan2.b_values);
        assert_eq!(plan.kappas, plan2.kappas);
    }

    #[test]
    fn duplicate_amplitudes_are_rejected() {
        let args = RodDispersionArgs {
            b: Some("0.1,0.1".to_string()),
            ..Default::default()
        };
        assert!(args.resolve().is_err());
    }
}
