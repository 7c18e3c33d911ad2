use anyhow::{bail, Context, Result};
use morphglide::glide::MorphEvent;
use morphglide::hydro::PolarSettings;
use morphglide::structural::{FitSource, HyperelasticMaterial, SolverSettings, WingSectionParams, DEFAULT_PENALTY_FACTOR};
use morphglide::vehicle::VehicleConfig;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

pub const DATA_ENV: &str = "MORPHGLIDE_DATA";
pub const DEFAULT_DATA_DIR: &str = "data/experimental";

/// Everything a run needs. Plain values come before tables so the struct
/// serializes back to TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub output_dir: PathBuf,
    /// Digitized experimental camber lines; see `data/experimental/README.md`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data_dir: Option<PathBuf>,
    /// Worker threads for sweeps; 0 uses every core.
    pub max_workers: usize,
    pub pressure_fit: FitSource,
    pub material: SiliconeConfig,
    pub mesh: WingSectionParams,
    pub solver: SolverSettings,
    pub polar: PolarSettings,
    pub vehicle: VehicleConfig,
    pub sweep: SweepGrid,
    pub glide: GlideScenario,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            output_dir: PathBuf::from("out"),
            data_dir: None,
            max_workers: 0,
            pressure_fit: FitSource::RefitFromTable,
            material: SiliconeConfig::default(),
            mesh: WingSectionParams::default(),
            solver: SolverSettings::default(),
            polar: PolarSettings::default(),
            vehicle: VehicleConfig::default(),
            sweep: SweepGrid::default(),
            glide: GlideScenario::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SiliconeConfig {
    pub c1_pa: f64,
    pub c2_pa: f64,
    /// Volumetric penalty as a multiple of `C1 + C2`.
    pub penalty_factor: f64,
}

impl Default for SiliconeConfig {
    fn default() -> Self {
        let e = HyperelasticMaterial::ecoflex_00_50();
        Self {
            c1_pa: e.c1_pa,
            c2_pa: e.c2_pa,
            penalty_factor: DEFAULT_PENALTY_FACTOR,
        }
    }
}

impl SiliconeConfig {
    pub fn material(&self) -> Result<HyperelasticMaterial> {
        Ok(HyperelasticMaterial::with_penalty_factor(
            self.c1_pa,
            self.c2_pa,
            self.penalty_factor,
        )?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepGrid {
    pub inflations_ml: Vec<f64>,
    pub alphas_deg: Vec<f64>,
    pub speeds_mps: Vec<f64>,
    /// Differential pairs `(+v, -v)` for the rolling-moment table.
    pub roll_pairs_ml: Vec<f64>,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self {
            inflations_ml: vec![0.0, 15.0, 30.0, 60.0, 90.0, 120.0],
            alphas_deg: (-8..=8).map(f64::from).collect(),
            speeds_mps: vec![0.15, 0.26, 0.35, 0.55],
            roll_pairs_ml: vec![30.0, 60.0, 90.0, 120.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GlideScenario {
    pub speed_mps: f64,
    pub depth_amplitude_m: f64,
    pub n_cycles: usize,
    pub rigid_inflation_ml: f64,
    /// Inflation the morphing vehicle starts from; the schedule moves it.
    pub initial_inflation_ml: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub buoyancy_energy_per_cycle_j: Option<f64>,
    pub schedule: Vec<MorphEvent>,
}

impl Default for GlideScenario {
    fn default() -> Self {
        Self {
            speed_mps: 0.26,
            depth_amplitude_m: 1000.0,
            n_cycles: 10,
            rigid_inflation_ml: 0.0,
            initial_inflation_ml: 0.0,
            buoyancy_energy_per_cycle_j: None,
            schedule: vec![MorphEvent {
                cycle: 0,
                inflation_ml: 15.0,
            }],
        }
    }
}

impl GlideScenario {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing scenario {}", path.display()))
    }

    /// Every inflation the scenario visits.
    pub fn inflations(&self) -> Vec<f64> {
        let mut v = vec![self.rigid_inflation_ml, self.initial_inflation_ml];
        v.extend(self.schedule.iter().map(|e| e.inflation_ml));
        sorted_unique(v)
    }
}

pub fn sorted_unique(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn validate(&self) -> Result<()> {
        let grids = [
            ("sweep.inflations_ml", &self.sweep.inflations_ml),
            ("sweep.alphas_deg", &self.sweep.alphas_deg),
            ("sweep.speeds_mps", &self.sweep.speeds_mps),
        ];
        for (name, g) in grids {
            if g.is_empty() {
                bail!("{name} must not be empty");
            }
            if g.iter().any(|v| !v.is_finite()) {
                bail!("{name} contains a non-finite value");
            }
        }
        if self.sweep.speeds_mps.iter().any(|&u| u <= 0.0) {
            bail!("sweep.speeds_mps must be positive");
        }
        if self.sweep.roll_pairs_ml.iter().any(|&v| v <= 0.0) {
            bail!("sweep.roll_pairs_ml must be positive");
        }
        self.material.material()?;
        self.vehicle.validate()?;
        if (self.vehicle.wing_chord_m - self.mesh.chord_m).abs() > 1e-12 {
            bail!(
                "vehicle.wing_chord_m ({}) must equal mesh.chord_m ({})",
                self.vehicle.wing_chord_m,
                self.mesh.chord_m
            );
        }
        let g = &self.glide;
        if !(g.speed_mps > 0.0 && g.depth_amplitude_m > 0.0 && g.n_cycles > 0) {
            bail!("glide speed, depth amplitude and cycle count must be positive");
        }
        if let Some(dir) = self.data_dir_override()? {
            if !dir.is_dir() {
                bail!("data directory {} does not exist", dir.display());
            }
        }
        Ok(())
    }

    /// Explicit data directory, from the environment or the config file.
    fn data_dir_override(&self) -> Result<Option<PathBuf>> {
        match std::env::var_os(DATA_ENV) {
            Some(v) if !v.is_empty() => Ok(Some(PathBuf::from(v))),
            _ => Ok(self.data_dir.clone()),
        }
    }

    /// Directory searched for digitized data; missing default directories
    /// simply mean no data.
    pub fn data_dir(&self) -> PathBuf {
        self.data_dir_override()
            .ok()
            .flatten()
            .unwrap_or_else(|| PathBuf::from(DEFAULT_DATA_DIR))
    }

    /// SHA-256 of the settings that determine results. The output directory
    /// and worker count are excluded.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output_dir = PathBuf::new();
        c.max_workers = 0;
        let text = toml::to_string(&c).expect("config serializes");
        let digest = Sha256::digest(text.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_file_matches_built_in_defaults() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../config/default.toml");
        let c = RunConfig::load(&path).unwrap();
        assert_eq!(c, RunConfig::default());
    }

    #[test]
    fn round_trips_through_toml() {
        let c = RunConfig::default();
        let back: RunConfig = toml::from_str(&toml::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn hash_ignores_output_location() {
        let a = RunConfig::default();
        let mut b = a.clone();
        b.output_dir = PathBuf::from("elsewhere");
        b.max_workers = 3;
        assert_eq!(a.hash(), b.hash());
        b.sweep.alphas_deg.pop();
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn rejects_empty_grids() {
        let mut c = RunConfig::default();
        c.sweep.alphas_deg.clear();
        assert!(c.validate().is_err());
    }
}
