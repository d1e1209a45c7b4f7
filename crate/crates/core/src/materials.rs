//! Superconductor material records, the built-in catalog and the
//! critical-field temperature law.
//!
//! Critical fields follow the empirical parabolic law
//! `H(T) = H(0) (1 - (T/Tc)^2)` below `Tc` and vanish above it. Fields are
//! stored as `H` in A/m; [`Material::critical_b`] gives the `B = mu0 H`
//! equivalent in tesla.
//!
//! # Materials file
//!
//! One TOML table per material, keyed by a short identifier:
//!
//! ```toml
//! [lead]
//! name = "Pb"              # optional display label, defaults to the key
//! kind = "type-I"          # or "type-II"
//! tc = 7.193               # K
//! hc0 = 6.39e4             # A/m, type-I only
//! # hc1_0 = 1.43e5         # A/m, type-II only
//! # hc2_0 = 3.18e5         # A/m, type-II only
//! lambda_l = 37e-9         # m
//! delta_ev = 1.365e-3      # gap in eV (or `delta` in J)
//! fermi_velocity = 1.83e6  # m/s
//! fermi_wavenumber = 1.58e10
//! dos_fermi = 6.56e46      # 1/(J m^3)
//! sigma_n = 4.81e6         # S/m
//! tau_s = 1.3e-15          # s
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::constants::{ELEMENTARY_CHARGE, VACUUM_PERMEABILITY};

#[derive(Debug, Error)]
pub enum MaterialError {
    #[error("temperature must be non-negative, got {0} K")]
    NegativeTemperature(f64),
    #[error("{selector:?} is not defined for a {kind} superconductor")]
    SelectorMismatch {
        selector: CriticalField,
        kind: &'static str,
    },
    #[error("material `{name}`: {reason}")]
    Invalid { name: String, reason: String },
    #[error("unknown material `{0}`")]
    Unknown(String),
    #[error("materials file: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("materials file: {0}")]
    Io(#[from] std::io::Error),
}

/// Which critical field to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalField {
    /// Thermodynamic critical field of a type-I superconductor.
    Hc,
    /// Lower critical field. For type-I this coincides with `Hc`.
    Hc1,
    /// Upper critical field of a type-II superconductor.
    Hc2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaterialKind {
    TypeI { hc0: f64 },
    TypeII { hc1_0: f64, hc2_0: f64 },
}

impl MaterialKind {
    pub fn label(&self) -> &'static str {
        match self {
            MaterialKind::TypeI { .. } => "type-I",
            MaterialKind::TypeII { .. } => "type-II",
        }
    }
}

/// Normal- and superconducting-state parameters of one material.
#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    pub name: String,
    /// Critical temperature (K).
    pub tc: f64,
    pub kind: MaterialKind,
    /// London penetration depth (m).
    pub lambda_l: f64,
    /// Superconducting gap (J).
    pub delta: f64,
    /// Fermi velocity (m/s).
    pub fermi_velocity: f64,
    /// Fermi wavenumber (1/m).
    pub fermi_wavenumber: f64,
    /// Density of states at the Fermi surface (1/(J m^3)).
    pub dos_fermi: f64,
    /// Normal-state conductivity (S/m).
    pub sigma_n: f64,
    /// Scattering time constant of the two-fluid model (s).
    pub tau_s: f64,
}

impl Material {
    pub fn validate(&self) -> Result<(), MaterialError> {
        let fail = |reason: &str| {
            Err(MaterialError::Invalid {
                name: self.name.clone(),
                reason: reason.to_string(),
            })
        };
        let positive = |x: f64| x.is_finite() && x > 0.0;
        let non_negative = |x: f64| x.is_finite() && x >= 0.0;
        if !positive(self.tc) {
            return fail("tc must be positive");
        }
        if !positive(self.lambda_l) {
            return fail("lambda_l must be positive");
        }
        if !non_negative(self.delta) {
            return fail("delta must be non-negative");
        }
        if !positive(self.fermi_velocity) {
            return fail("fermi_velocity must be positive");
        }
        if !positive(self.fermi_wavenumber) {
            return fail("fermi_wavenumber must be positive");
        }
        if !non_negative(self.dos_fermi) || !non_negative(self.sigma_n) || !non_negative(self.tau_s)
        {
            return fail("dos_fermi, sigma_n and tau_s must be non-negative");
        }
        match self.kind {
            MaterialKind::TypeI { hc0 } if !positive(hc0) => fail("hc0 must be positive"),
            MaterialKind::TypeII { hc1_0, hc2_0 } if !(positive(hc1_0) && hc1_0 < hc2_0) => {
                fail("type-II requires 0 < hc1_0 < hc2_0")
            }
            _ => Ok(()),
        }
    }

    /// London coefficient `Lambda = mu0 lambda_L^2` (H·m).
    pub fn london_coefficient(&self) -> f64 {
        VACUUM_PERMEABILITY * self.lambda_l * self.lambda_l
    }

    fn zero_temperature_field(&self, which: CriticalField) -> Result<f64, MaterialError> {
        match (self.kind, which) {
            (MaterialKind::TypeI { hc0 }, CriticalField::Hc | CriticalField::Hc1) => Ok(hc0),
            (MaterialKind::TypeII { hc1_0, .. }, CriticalField::Hc1) => Ok(hc1_0),
            (MaterialKind::TypeII { hc2_0, .. }, CriticalField::Hc2) => Ok(hc2_0),
            (kind, selector) => Err(MaterialError::SelectorMismatch {
                selector,
                kind: kind.label(),
            }),
        }
    }

    /// Critical field `H(T)` in A/m.
    pub fn critical_field(
        &self,
        temperature: f64,
        which: CriticalField,
    ) -> Result<f64, MaterialError> {
        if temperature.is_nan() || temperature < 0.0 {
            return Err(MaterialError::NegativeTemperature(temperature));
        }
        let h0 = self.zero_temperature_field(which)?;
        if temperature >= self.tc {
            return Ok(0.0);
        }
        let t = temperature / self.tc;
        Ok(h0 * (1.0 - t * t))
    }

    /// Critical field as flux density `mu0 H(T)` in tesla.
    pub fn critical_b(&self, temperature: f64, which: CriticalField) -> Result<f64, MaterialError> {
        Ok(VACUUM_PERMEABILITY * self.critical_field(temperature, which)?)
    }

    /// Field (A/m) above which the material is driven fully normal:
    /// `Hc` for type-I and `Hc2` for type-II.
    pub fn normal_transition_field(&self, temperature: f64) -> Result<f64, MaterialError> {
        let which = match self.kind {
            MaterialKind::TypeI { .. } => CriticalField::Hc,
            MaterialKind::TypeII { .. } => CriticalField::Hc2,
        };
        self.critical_field(temperature, which)
    }

    /// [`Material::normal_transition_field`] expressed in tesla.
    pub fn normal_transition_b(&self, temperature: f64) -> Result<f64, MaterialError> {
        Ok(VACUUM_PERMEABILITY * self.normal_transition_field(temperature)?)
    }
}

/// Critical field `H(T)` of `material` in A/m.
pub fn critical_field(
    material: &Material,
    temperature: f64,
    which: CriticalField,
) -> Result<f64, MaterialError> {
    material.critical_field(temperature, which)
}

fn mev(x: f64) -> f64 {
    x * 1e-3 * ELEMENTARY_CHARGE
}

/// Built-in catalog entries. Parameters are textbook free-electron and BCS
/// values, good enough for behavioral modeling but not a materials database.
fn builtin_entries() -> Vec<Material> {
    vec![
        Material {
            name: "Al".into(),
            tc: 1.175,
            kind: MaterialKind::TypeI { hc0: 8.356e3 },
            lambda_l: 16e-9,
            delta: mev(0.18),
            fermi_velocity: 2.03e6,
            fermi_wavenumber: 1.75e10,
            dos_fermi: 7.26e46,
            sigma_n: 3.77e7,
            tau_s: 7.4e-15,
        },
        Material {
            name: "Pb".into(),
            tc: 7.193,
            kind: MaterialKind::TypeI { hc0: 6.39e4 },
            lambda_l: 37e-9,
            delta: mev(1.365),
            fermi_velocity: 1.83e6,
            fermi_wavenumber: 1.58e10,
            dos_fermi: 6.56e46,
            sigma_n: 4.81e6,
            tau_s: 1.3e-15,
        },
        Material {
            name: "Nb".into(),
            tc: 9.25,
            kind: MaterialKind::TypeII {
                hc1_0: 1.43e5,
                hc2_0: 3.18e5,
            },
            lambda_l: 39e-9,
            delta: mev(1.55),
            fermi_velocity: 1.37e6,
            fermi_wavenumber: 1.18e10,
            dos_fermi: 4.9e46,
            sigma_n: 6.7e6,
            tau_s: 4.3e-15,
        },
    ]
}

/// The built-in catalog keyed by lower-case element symbol.
pub fn catalog() -> BTreeMap<String, Material> {
    builtin_entries()
        .into_iter()
        .map(|m| (m.name.to_lowercase(), m))
        .collect()
}

/// Look up a built-in material by symbol or English name, case-insensitively.
pub fn builtin(name: &str) -> Result<Material, MaterialError> {
    let key = name.to_lowercase();
    let key = match key.as_str() {
        "aluminium" | "aluminum" => "al",
        "lead" => "pb",
        "niobium" => "nb",
        other => other,
    };
    catalog()
        .remove(key)
        .ok_or_else(|| MaterialError::Unknown(name.to_string()))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialRecord {
    name: Option<String>,
    kind: String,
    tc: f64,
    hc0: Option<f64>,
    hc1_0: Option<f64>,
    hc2_0: Option<f64>,
    lambda_l: f64,
    delta: Option<f64>,
    delta_ev: Option<f64>,
    fermi_velocity: f64,
    fermi_wavenumber: f64,
    #[serde(default)]
    dos_fermi: f64,
    #[serde(default)]
    sigma_n: f64,
    #[serde(default)]
    tau_s: f64,
}

impl MaterialRecord {
    fn into_material(self, key: &str) -> Result<Material, MaterialError> {
        let name = self.name.unwrap_or_else(|| key.to_string());
        let invalid = |reason: &str| MaterialError::Invalid {
            name: name.clone(),
            reason: reason.to_string(),
        };
        let kind = match self.kind.as_str() {
            "type-I" | "I" => MaterialKind::TypeI {
                hc0: self.hc0.ok_or_else(|| invalid("type-I requires hc0"))?,
            },
            "type-II" | "II" => MaterialKind::TypeII {
                hc1_0: self
                    .hc1_0
                    .ok_or_else(|| invalid("type-II requires hc1_0"))?,
                hc2_0: self
                    .hc2_0
                    .ok_or_else(|| invalid("type-II requires hc2_0"))?,
            },
            other => return Err(invalid(&format!("unknown kind `{other}`"))),
        };
        let delta = match (self.delta, self.delta_ev) {
            (Some(j), None) => j,
            (None, Some(ev)) => ev * ELEMENTARY_CHARGE,
            (None, None) => return Err(invalid("one of delta or delta_ev is required")),
            (Some(_), Some(_)) => return Err(invalid("give delta or delta_ev, not both")),
        };
        let material = Material {
            name: name.clone(),
            tc: self.tc,
            kind,
            lambda_l: self.lambda_l,
            delta,
            fermi_velocity: self.fermi_velocity,
            fermi_wavenumber: self.fermi_wavenumber,
            dos_fermi: self.dos_fermi,
            sigma_n: self.sigma_n,
            tau_s: self.tau_s,
        };
        material.validate()?;
        Ok(material)
    }
}

/// Parse a materials file (see the module docs for the schema).
pub fn parse_materials(text: &str) -> Result<BTreeMap<String, Material>, MaterialError> {
    let records: BTreeMap<String, MaterialRecord> = toml::from_str(text)?;
    records
        .into_iter()
        .map(|(key, record)| {
            let material = record.into_material(&key)?;
            Ok((key, material))
        })
        .collect()
}

pub fn load_materials(path: impl AsRef<Path>) -> Result<BTreeMap<String, Material>, MaterialError> {
    parse_materials(&std::fs::read_to_string(path)?)
}
