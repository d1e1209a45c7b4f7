//! Scenario files.
//!
//! A scenario is a TOML document with a `kind`, an optional `seed` and
//! `output_dir`, and one parameter table named after the kind:
//!
//! ```toml
//! kind = "noise-psd"
//! seed = 7
//!
//! [noise]
//! tau1 = 1e-5
//! tau2 = 1e-1
//! ```
//!
//! | kind               | table          |
//! |--------------------|----------------|
//! | `slab-profile`     | `[slab]`       |
//! | `device-sequence`  | `[device]`     |
//! | `junction-iv`      | `[junction]`   |
//! | `noise-psd`        | `[noise]`      |
//! | `modulator-run`    | `[modulator]`  |
//! | `comparator-curve` | `[comparator]` |
//!
//! Every key is optional; a missing table runs on defaults. Unknown keys are
//! rejected. Relative `materials_file` and `schedule_file` paths resolve
//! against the directory holding the scenario file.

use std::ops::Range;
use std::path::{Path, PathBuf};

use fluxquant::comparator::{make_comparator, ComparatorConfig};
use fluxquant::constants::PhysicalConstants;
use fluxquant::dsm::{FluxIntegrator, IntegratorBackend, ModulatorConfig};
use fluxquant::fluxtrap::{CylinderGeometry, Schedule};
use fluxquant::junctions::JunctionConfig;
use fluxquant::materials::{builtin, load_materials, Material, MaterialError};
use fluxquant::noise::{NoiseModel, SynthesisMethod};
use serde::Deserialize;
use toml::Spanned;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    SlabProfile,
    DeviceSequence,
    JunctionIv,
    NoisePsd,
    ModulatorRun,
    ComparatorCurve,
}

impl Kind {
    pub const ALL: [Kind; 6] = [
        Kind::SlabProfile,
        Kind::DeviceSequence,
        Kind::JunctionIv,
        Kind::NoisePsd,
        Kind::ModulatorRun,
        Kind::ComparatorCurve,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::SlabProfile => "slab-profile",
            Kind::DeviceSequence => "device-sequence",
            Kind::JunctionIv => "junction-iv",
            Kind::NoisePsd => "noise-psd",
            Kind::ModulatorRun => "modulator-run",
            Kind::ComparatorCurve => "comparator-curve",
        }
    }

    /// Name of the parameter table, also the subcommand name.
    pub fn section(self) -> &'static str {
        match self {
            Kind::SlabProfile => "slab",
            Kind::DeviceSequence => "device",
            Kind::JunctionIv => "junction",
            Kind::NoisePsd => "noise",
            Kind::ModulatorRun => "modulator",
            Kind::ComparatorCurve => "comparator",
        }
    }

    pub fn from_name(name: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlabModel {
    Normal,
    #[default]
    London,
    TwoFluid,
}

impl SlabModel {
    pub fn label(self) -> &'static str {
        match self {
            SlabModel::Normal => "normal",
            SlabModel::London => "london",
            SlabModel::TwoFluid => "two-fluid",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SlabParams {
    pub material: String,
    pub materials_file: Option<PathBuf>,
    pub model: SlabModel,
    pub half_thickness: f64,
    pub b0: f64,
    pub omega: f64,
    pub temperature: f64,
    pub points: usize,
    /// Cross-check a normal-state profile against the time-domain solver.
    pub cn_check: bool,
}

impl Default for SlabParams {
    fn default() -> Self {
        Self {
            material: "pb".into(),
            materials_file: None,
            model: SlabModel::London,
            half_thickness: 100e-9,
            b0: 1e-3,
            omega: 1e6,
            temperature: 4.2,
            points: 201,
            cn_check: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScheduleKind {
    Doubler,
    Pairwise,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeviceParams {
    pub radius: f64,
    pub segments: usize,
    pub n_eff: f64,
    pub critical_b: f64,
    pub input_field: f64,
    pub schedule: Option<ScheduleKind>,
    pub schedule_file: Option<PathBuf>,
    pub cycles: usize,
    pub tau_cooper: f64,
    pub tau_ecoil: f64,
}

impl Default for DeviceParams {
    fn default() -> Self {
        Self {
            radius: 5e-3,
            segments: 4,
            n_eff: 1e4,
            critical_b: 0.1,
            input_field: 1e-9,
            schedule: None,
            schedule_file: None,
            cycles: 1,
            tau_cooper: 0.1e-9,
            tau_ecoil: 0.3e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JunctionParams {
    pub material: String,
    pub materials_file: Option<PathBuf>,
    pub barrier: f64,
    pub temperature: f64,
    pub delta_ev: Option<f64>,
    /// Sweep limits (V); default to three gaps either side of zero.
    pub v_min: Option<f64>,
    pub v_max: Option<f64>,
    pub points: usize,
    pub prefactor: f64,
    /// Normal-metal length of the SNS companion calculation (m).
    pub length: f64,
    /// Energies of the scattering tables, in units of the gap.
    pub scatter_energies: Vec<f64>,
}

impl Default for JunctionParams {
    fn default() -> Self {
        Self {
            material: "al".into(),
            materials_file: None,
            barrier: 0.5,
            temperature: 0.1,
            delta_ev: None,
            v_min: None,
            v_max: None,
            points: 121,
            prefactor: 1.0,
            length: 1e-6,
            scatter_energies: vec![0.5, 2.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseMethod {
    #[default]
    Telegraph,
    Spectral,
}

impl NoiseMethod {
    pub fn label(self) -> &'static str {
        match self {
            NoiseMethod::Telegraph => "telegraph",
            NoiseMethod::Spectral => "spectral",
        }
    }

    pub fn synthesis(self) -> SynthesisMethod {
        match self {
            NoiseMethod::Telegraph => SynthesisMethod::Telegraph,
            NoiseMethod::Spectral => SynthesisMethod::Spectral,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseParams {
    pub r0: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub kprime: f64,
    pub dof_coupled: u8,
    pub white_psd: f64,
    pub samples: usize,
    pub fs: f64,
    pub nperseg: usize,
    pub method: NoiseMethod,
    pub fit_lo: Option<f64>,
    pub fit_hi: Option<f64>,
}

impl Default for NoiseParams {
    fn default() -> Self {
        Self {
            r0: 1.0,
            tau1: 1e-5,
            tau2: 1e-1,
            kprime: 1.0,
            dof_coupled: 3,
            white_psd: 0.0,
            samples: 1 << 16,
            fs: 1e5,
            nperseg: 8192,
            method: NoiseMethod::Telegraph,
            fit_lo: None,
            fit_hi: None,
        }
    }
}

/// Flicker noise added at the comparator input (T²/Hz scale).
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LoopNoiseParams {
    pub tau1: f64,
    pub tau2: f64,
    pub kprime: f64,
    pub white_psd: f64,
}

impl Default for LoopNoiseParams {
    fn default() -> Self {
        Self {
            tau1: 1e-7,
            tau2: 1e-3,
            kprime: 1e-30,
            white_psd: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackendKind {
    #[default]
    Ideal,
    FluxDevice,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModulatorParams {
    pub side: f64,
    pub bias_current: f64,
    pub osr: u32,
    pub fs: f64,
    pub feedforward: Option<Vec<f64>>,
    pub scaling: Option<Vec<f64>>,
    pub full_scale: Option<f64>,
    pub samples: usize,
    pub amplitude_dbfs: f64,
    pub signal_frequency: Option<f64>,
    /// Constant input instead of a sine, in units of full scale.
    pub dc: Option<f64>,
    pub backend: BackendKind,
    pub stability_bound: f64,
    /// Leading samples written to the trace file.
    pub trace_samples: usize,
    pub noise: Option<Spanned<LoopNoiseParams>>,
}

impl Default for ModulatorParams {
    fn default() -> Self {
        Self {
            side: 200e-6,
            bias_current: 9.371e-3,
            osr: 128,
            fs: 20e6,
            feedforward: None,
            scaling: None,
            full_scale: None,
            samples: 1 << 16,
            amplitude_dbfs: -1.0,
            signal_frequency: None,
            dc: None,
            backend: BackendKind::Ideal,
            stability_bound: 1e3,
            trace_samples: 1024,
            noise: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ComparatorParams {
    pub side: f64,
    pub bias_current: f64,
    pub points: usize,
    /// Half-width of the sweep in units of the largest code's field.
    pub span: f64,
}

impl Default for ComparatorParams {
    fn default() -> Self {
        Self {
            side: 200e-6,
            bias_current: 9.371e-3,
            points: 2049,
            span: 1.1,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    kind: Option<Spanned<String>>,
    seed: Option<Spanned<i64>>,
    output_dir: Option<PathBuf>,
    slab: Option<Spanned<SlabParams>>,
    device: Option<Spanned<DeviceParams>>,
    junction: Option<Spanned<JunctionParams>>,
    noise: Option<Spanned<NoiseParams>>,
    modulator: Option<Spanned<ModulatorParams>>,
    comparator: Option<Spanned<ComparatorParams>>,
}

#[derive(Debug, Clone)]
pub struct SlabScenario {
    pub params: SlabParams,
    pub material: Material,
}

#[derive(Debug, Clone)]
pub struct DeviceScenario {
    pub params: DeviceParams,
    pub geometry: CylinderGeometry,
    pub schedule: Schedule,
    pub schedule_label: String,
}

#[derive(Debug, Clone)]
pub struct JunctionScenario {
    pub params: JunctionParams,
    pub junction: JunctionConfig,
    pub voltages: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct NoiseScenario {
    pub params: NoiseParams,
    pub model: NoiseModel,
    pub fit_band: (f64, f64),
}

#[derive(Debug, Clone)]
pub struct ModulatorScenario {
    pub params: ModulatorParams,
    pub config: ModulatorConfig,
}

#[derive(Debug, Clone)]
pub struct ComparatorScenario {
    pub params: ComparatorParams,
    pub comparator: ComparatorConfig,
}

#[derive(Debug, Clone)]
pub enum Params {
    Slab(SlabScenario),
    Device(DeviceScenario),
    Junction(JunctionScenario),
    Noise(NoiseScenario),
    Modulator(ModulatorScenario),
    Comparator(ComparatorScenario),
}

/// A parsed and validated scenario.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub kind: Kind,
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
    pub params: Params,
}

fn line_at(text: &str, offset: usize) -> usize {
    let end = offset.min(text.len());
    text.as_bytes()[..end]
        .iter()
        .filter(|&&b| b == b'\n')
        .count()
        + 1
}

/// Points invariant errors at the offending key inside one table.
struct Locator<'a> {
    text: &'a str,
    span: Option<Range<usize>>,
}

impl Locator<'_> {
    fn line_of(&self, key: &str) -> Option<usize> {
        let span = self.span.clone()?;
        let start = span.start.min(self.text.len());
        let mut offset = start;
        for (i, line) in self.text[start..].split_inclusive('\n').enumerate() {
            let trimmed = line.trim_start();
            if i > 0 && trimmed.starts_with('[') {
                break;
            }
            if let Some(rest) = trimmed.strip_prefix(key) {
                if rest.trim_start().starts_with('=') {
                    return Some(line_at(self.text, offset));
                }
            }
            offset += line.len();
        }
        Some(line_at(self.text, start))
    }

    fn fail(&self, key: &str, message: impl Into<String>) -> CliError {
        CliError::Invariant {
            line: self.line_of(key),
            message: message.into(),
        }
    }

    fn check(&self, ok: bool, key: &str, message: impl FnOnce() -> String) -> Result<(), CliError> {
        if ok {
            Ok(())
        } else {
            Err(self.fail(key, message()))
        }
    }

    fn positive(&self, key: &str, value: f64) -> Result<(), CliError> {
        self.check(value.is_finite() && value > 0.0, key, || {
            format!("{key} must be positive, got {value}")
        })
    }
}

fn classify(text: &str, err: toml::de::Error) -> CliError {
    let line = err.span().map(|s| line_at(text, s.start)).unwrap_or(1);
    let message = err.message().trim().to_string();
    if let Some(rest) = message.strip_prefix("unknown field `") {
        let key = rest.split('`').next().unwrap_or_default().to_string();
        return CliError::UnknownKey { line, key, message };
    }
    if message.starts_with("unknown variant") {
        return CliError::Invariant {
            line: Some(line),
            message,
        };
    }
    CliError::Syntax { line, message }
}

/// Parse and validate a scenario. `base_dir` anchors relative file paths;
/// `default_kind` applies when the file has no `kind` (subcommand runs).
pub fn parse_config(
    text: &str,
    base_dir: &Path,
    default_kind: Option<Kind>,
) -> Result<ScenarioConfig, CliError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| classify(text, e))?;
    let kind = match (&raw.kind, default_kind) {
        (Some(k), expected) => {
            let line = Some(line_at(text, k.span().start));
            let kind = Kind::from_name(k.get_ref()).ok_or_else(|| CliError::Invariant {
                line,
                message: format!(
                    "unrecognized kind `{}`; expected one of {}",
                    k.get_ref(),
                    Kind::ALL.map(Kind::name).join(", ")
                ),
            })?;
            if let Some(expected) = expected.filter(|e| *e != kind) {
                return Err(CliError::Invariant {
                    line,
                    message: format!(
                        "scenario kind `{}` does not match the `{}` subcommand",
                        kind.name(),
                        expected.section()
                    ),
                });
            }
            kind
        }
        (None, Some(k)) => k,
        (None, None) => {
            return Err(CliError::Invariant {
                line: None,
                message: "missing `kind`".into(),
            })
        }
    };
    let seed = match &raw.seed {
        Some(s) => u64::try_from(*s.get_ref()).map_err(|_| CliError::Invariant {
            line: Some(line_at(text, s.span().start)),
            message: format!("seed must be non-negative, got {}", s.get_ref()),
        })?,
        None => 0,
    };

    let present: [(Kind, Option<Range<usize>>); 6] = [
        (Kind::SlabProfile, raw.slab.as_ref().map(Spanned::span)),
        (Kind::DeviceSequence, raw.device.as_ref().map(Spanned::span)),
        (Kind::JunctionIv, raw.junction.as_ref().map(Spanned::span)),
        (Kind::NoisePsd, raw.noise.as_ref().map(Spanned::span)),
        (
            Kind::ModulatorRun,
            raw.modulator.as_ref().map(Spanned::span),
        ),
        (
            Kind::ComparatorCurve,
            raw.comparator.as_ref().map(Spanned::span),
        ),
    ];
    if let Some((other, span)) = present
        .iter()
        .find(|(k, span)| *k != kind && span.is_some())
    {
        return Err(CliError::Invariant {
            line: span.as_ref().map(|s| line_at(text, s.start)),
            message: format!(
                "table [{}] does not apply to a `{}` scenario",
                other.section(),
                kind.name()
            ),
        });
    }

    fn split<T: Default>(text: &str, table: Option<Spanned<T>>) -> (T, Locator<'_>) {
        match table {
            Some(t) => {
                let span = t.span();
                (
                    t.into_inner(),
                    Locator {
                        text,
                        span: Some(span),
                    },
                )
            }
            None => (T::default(), Locator { text, span: None }),
        }
    }

    let params = match kind {
        Kind::SlabProfile => {
            let (p, loc) = split(text, raw.slab);
            Params::Slab(validate_slab(p, &loc, base_dir)?)
        }
        Kind::DeviceSequence => {
            let (p, loc) = split(text, raw.device);
            Params::Device(validate_device(p, &loc, base_dir)?)
        }
        Kind::JunctionIv => {
            let (p, loc) = split(text, raw.junction);
            Params::Junction(validate_junction(p, &loc, base_dir)?)
        }
        Kind::NoisePsd => {
            let (p, loc) = split(text, raw.noise);
            Params::Noise(validate_noise(p, &loc)?)
        }
        Kind::ModulatorRun => {
            let (p, loc) = split(text, raw.modulator);
            Params::Modulator(validate_modulator(p, &loc)?)
        }
        Kind::ComparatorCurve => {
            let (p, loc) = split(text, raw.comparator);
            Params::Comparator(validate_comparator(p, &loc)?)
        }
    };
    Ok(ScenarioConfig {
        kind,
        seed,
        output_dir: raw.output_dir,
        params,
    })
}

fn resolve(base_dir: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base_dir.join(path)
    }
}

fn resolve_material(
    name: &str,
    file: Option<&Path>,
    loc: &Locator,
    base_dir: &Path,
) -> Result<Material, CliError> {
    if let Some(file) = file {
        let path = resolve(base_dir, file);
        let table = load_materials(&path).map_err(|e| match e {
            MaterialError::Io(source) => CliError::io(&path, source),
            other => loc.fail("materials_file", format!("{}: {other}", path.display())),
        })?;
        let wanted = name.to_lowercase();
        if let Some(m) = table
            .iter()
            .find(|(key, m)| key.to_lowercase() == wanted || m.name.to_lowercase() == wanted)
            .map(|(_, m)| m.clone())
        {
            return Ok(m);
        }
    }
    builtin(name).map_err(|e| loc.fail("material", e.to_string()))
}

fn validate_slab(p: SlabParams, loc: &Locator, base_dir: &Path) -> Result<SlabScenario, CliError> {
    loc.positive("half_thickness", p.half_thickness)?;
    loc.check(p.b0.is_finite(), "b0", || {
        format!("b0 must be finite, got {}", p.b0)
    })?;
    match p.model {
        SlabModel::London => loc.check(p.omega.is_finite() && p.omega >= 0.0, "omega", || {
            format!("omega must be non-negative, got {}", p.omega)
        })?,
        _ => loc.positive("omega", p.omega)?,
    }
    loc.check(
        p.temperature.is_finite() && p.temperature >= 0.0,
        "temperature",
        || format!("temperature must be non-negative, got {}", p.temperature),
    )?;
    loc.check(p.points >= 2, "points", || {
        format!("points must be at least 2, got {}", p.points)
    })?;
    loc.check(
        !p.cn_check || p.model == SlabModel::Normal,
        "cn_check",
        || "cn_check applies to the normal model only".into(),
    )?;
    let material = resolve_material(&p.material, p.materials_file.as_deref(), loc, base_dir)?;
    if p.model == SlabModel::Normal {
        loc.check(material.sigma_n > 0.0, "material", || {
            format!(
                "material `{}` has no normal-state conductivity",
                material.name
            )
        })?;
    }
    Ok(SlabScenario {
        params: p,
        material,
    })
}

fn validate_device(
    p: DeviceParams,
    loc: &Locator,
    base_dir: &Path,
) -> Result<DeviceScenario, CliError> {
    loc.positive("radius", p.radius)?;
    loc.check(p.segments >= 1, "segments", || {
        "segments must be at least 1".into()
    })?;
    loc.positive("n_eff", p.n_eff)?;
    loc.positive("critical_b", p.critical_b)?;
    loc.check(p.input_field.is_finite(), "input_field", || {
        format!("input_field must be finite, got {}", p.input_field)
    })?;
    loc.check(p.cycles >= 1, "cycles", || {
        "cycles must be at least 1".into()
    })?;
    loc.positive("tau_cooper", p.tau_cooper)?;
    loc.positive("tau_ecoil", p.tau_ecoil)?;
    let geometry = CylinderGeometry::new(p.radius, p.segments, p.n_eff, p.critical_b)
        .map_err(|e| loc.fail("radius", e.to_string()))?;
    let (schedule, schedule_label) = match (&p.schedule, &p.schedule_file) {
        (Some(_), Some(_)) => {
            return Err(loc.fail("schedule_file", "give schedule or schedule_file, not both"))
        }
        (_, Some(file)) => {
            let path = resolve(base_dir, file);
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
            let schedule = Schedule::parse(&text)
                .map_err(|e| loc.fail("schedule_file", format!("{}: {e}", path.display())))?;
            (schedule, file.display().to_string())
        }
        (Some(ScheduleKind::Pairwise), None) => (Schedule::pairwise(p.segments), "pairwise".into()),
        (Some(ScheduleKind::Doubler), None) | (None, None) => {
            loc.check(p.segments == 4, "segments", || {
                format!("the doubler schedule needs 4 segments, got {}", p.segments)
            })?;
            (Schedule::four_segment_doubler(), "doubler".into())
        }
    };
    Ok(DeviceScenario {
        params: p,
        geometry,
        schedule,
        schedule_label,
    })
}

fn validate_junction(
    p: JunctionParams,
    loc: &Locator,
    base_dir: &Path,
) -> Result<JunctionScenario, CliError> {
    let c = PhysicalConstants::codata();
    loc.check(p.barrier.is_finite() && p.barrier >= 0.0, "barrier", || {
        format!("barrier must be non-negative, got {}", p.barrier)
    })?;
    loc.positive("temperature", p.temperature)?;
    if let Some(d) = p.delta_ev {
        loc.positive("delta_ev", d)?;
    }
    loc.check(p.points >= 2, "points", || {
        format!("points must be at least 2, got {}", p.points)
    })?;
    loc.check(p.prefactor.is_finite(), "prefactor", || {
        format!("prefactor must be finite, got {}", p.prefactor)
    })?;
    loc.positive("length", p.length)?;
    for &e in &p.scatter_energies {
        loc.positive("scatter_energies", e)?;
    }
    let material = resolve_material(&p.material, p.materials_file.as_deref(), loc, base_dir)?;
    let mut junction = JunctionConfig::for_material(material, &c);
    if let Some(d) = p.delta_ev {
        junction = junction.with_delta_ev(d, &c);
    }
    junction.barrier = p.barrier;
    junction.temperature = p.temperature;
    junction.nis_prefactor = p.prefactor;
    junction.length = p.length;
    loc.check(junction.delta > 0.0, "delta_ev", || {
        format!("material `{}` has no gap", junction.material.name)
    })?;
    let gap_volts = junction.delta / c.e();
    let lo = p.v_min.unwrap_or(-3.0 * gap_volts);
    let hi = p.v_max.unwrap_or(3.0 * gap_volts);
    loc.check(lo.is_finite() && hi.is_finite() && lo < hi, "v_min", || {
        format!("sweep needs v_min < v_max, got [{lo}, {hi}]")
    })?;
    let n = p.points;
    let voltages = (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect();
    Ok(JunctionScenario {
        params: p,
        junction,
        voltages,
    })
}

fn validate_noise(p: NoiseParams, loc: &Locator) -> Result<NoiseScenario, CliError> {
    loc.check(p.tau1 < p.tau2, "tau1", || {
        format!(
            "noise band requires tau1 < tau2, got tau1 = {} s and tau2 = {} s",
            p.tau1, p.tau2
        )
    })?;
    let model = NoiseModel {
        r0: p.r0,
        tau1: p.tau1,
        tau2: p.tau2,
        kprime: p.kprime,
        seed: 0,
        dof_coupled: p.dof_coupled,
        white_psd: p.white_psd,
    };
    model
        .validate()
        .map_err(|e| loc.fail("tau1", e.to_string()))?;
    loc.positive("fs", p.fs)?;
    loc.check(p.samples >= 4096, "samples", || {
        format!("samples must be at least 4096, got {}", p.samples)
    })?;
    loc.check(p.fs * p.tau2 > 10.0, "tau2", || {
        format!(
            "tau2 must span more than ten samples, got fs * tau2 = {}",
            p.fs * p.tau2
        )
    })?;
    loc.check(p.nperseg >= 16 && p.nperseg <= p.samples, "nperseg", || {
        format!(
            "nperseg must lie in [16, samples = {}], got {}",
            p.samples, p.nperseg
        )
    })?;
    let corner_lo = 10.0 / (2.0 * std::f64::consts::PI * p.tau2);
    let corner_hi = 0.1 / (2.0 * std::f64::consts::PI * p.tau1);
    let fit_lo = p
        .fit_lo
        .unwrap_or_else(|| corner_lo.max(4.0 * p.fs / p.nperseg as f64));
    let fit_hi = p.fit_hi.unwrap_or_else(|| corner_hi.min(p.fs / 4.0));
    loc.check(
        fit_lo > 0.0 && fit_lo < fit_hi && fit_hi <= p.fs / 2.0,
        "fit_lo",
        || format!("fit band needs 0 < fit_lo < fit_hi <= fs/2, got [{fit_lo}, {fit_hi}]"),
    )?;
    Ok(NoiseScenario {
        params: p,
        model,
        fit_band: (fit_lo, fit_hi),
    })
}

fn validate_modulator(p: ModulatorParams, loc: &Locator) -> Result<ModulatorScenario, CliError> {
    let c = PhysicalConstants::codata();
    loc.positive("side", p.side)?;
    loc.positive("bias_current", p.bias_current)?;
    loc.check(p.osr >= 1, "osr", || "osr must be at least 1".into())?;
    loc.positive("fs", p.fs)?;
    loc.check(p.samples >= 1024 && p.samples.is_multiple_of(2), "samples", || {
        format!("samples must be even and at least 1024, got {}", p.samples)
    })?;
    loc.check(p.trace_samples <= p.samples, "trace_samples", || {
        format!(
            "trace_samples = {} exceeds samples = {}",
            p.trace_samples, p.samples
        )
    })?;
    loc.check(
        p.amplitude_dbfs.is_finite() && p.amplitude_dbfs <= 0.0,
        "amplitude_dbfs",
        || format!("amplitude_dbfs must not exceed 0, got {}", p.amplitude_dbfs),
    )?;
    if let Some(dc) = p.dc {
        loc.check(dc.abs() <= 1.0, "dc", || {
            format!("dc input must lie in [-1, 1], got {dc}")
        })?;
        loc.check(p.signal_frequency.is_none(), "signal_frequency", || {
            "give dc or signal_frequency, not both".into()
        })?;
    }
    let comparator =
        make_comparator(p.side, p.bias_current, &c).map_err(|e| loc.fail("side", e.to_string()))?;
    let mut config = ModulatorConfig::second_order(comparator, p.osr);
    config.fs = p.fs;
    if let Some(a) = &p.feedforward {
        config.feedforward = a.clone();
    }
    if let Some(s) = &p.scaling {
        config.scaling = s.clone();
    }
    if let Some(fs) = p.full_scale {
        loc.positive("full_scale", fs)?;
        config.full_scale = fs;
    }
    config.stability_bound = p.stability_bound;
    config.backend = match p.backend {
        BackendKind::Ideal => IntegratorBackend::Ideal,
        BackendKind::FluxDevice => IntegratorBackend::FluxDevice(FluxIntegrator::reference()),
    };
    if let Some(f) = p.signal_frequency {
        let band = config.bandwidth();
        loc.check(f > 0.0 && f < band, "signal_frequency", || {
            format!("signal_frequency must lie inside (0, {band}) Hz, got {f}")
        })?;
    }
    if let Some(noise) = &p.noise {
        let nloc = Locator {
            text: loc.text,
            span: Some(noise.span()),
        };
        let n = noise.get_ref();
        nloc.check(n.tau1 < n.tau2, "tau1", || {
            format!(
                "noise band requires tau1 < tau2, got tau1 = {} s and tau2 = {} s",
                n.tau1, n.tau2
            )
        })?;
        let model = NoiseModel {
            tau1: n.tau1,
            tau2: n.tau2,
            kprime: n.kprime,
            white_psd: n.white_psd,
            ..NoiseModel::default()
        };
        model
            .validate()
            .map_err(|e| nloc.fail("tau1", e.to_string()))?;
        nloc.check(p.fs * n.tau2 > 10.0, "tau2", || {
            format!(
                "tau2 must span more than ten samples, got fs * tau2 = {}",
                p.fs * n.tau2
            )
        })?;
        config.comparator_noise = Some(model);
    }
    config
        .validate()
        .map_err(|e| loc.fail("feedforward", e.to_string()))?;
    Ok(ModulatorScenario { params: p, config })
}

fn validate_comparator(p: ComparatorParams, loc: &Locator) -> Result<ComparatorScenario, CliError> {
    let c = PhysicalConstants::codata();
    loc.positive("side", p.side)?;
    loc.positive("bias_current", p.bias_current)?;
    loc.check(p.points >= 2, "points", || {
        format!("points must be at least 2, got {}", p.points)
    })?;
    loc.positive("span", p.span)?;
    let comparator =
        make_comparator(p.side, p.bias_current, &c).map_err(|e| loc.fail("side", e.to_string()))?;
    Ok(ComparatorScenario {
        params: p,
        comparator,
    })
}
