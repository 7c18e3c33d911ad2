//! Deform, polar and vehicle stages shared by the subcommands.

use crate::config::{sorted_unique, RunConfig};
use anyhow::{anyhow, Context, Result};
use morphglide::geometry::{extract_camber, io::load_camber, profile_rms_error, AirfoilProfile, CamberLine};
use morphglide::hydro::{polar_sweep, FlowConditions, HydroError, HydroPolar};
use morphglide::structural::{
    inflation_series, trailing_edge_node, FitSource, PressureFit, WingModel,
};
use std::collections::BTreeMap;

pub fn pressure_fit(cfg: &RunConfig) -> PressureFit {
    match cfg.pressure_fit {
        FitSource::RefitFromTable => PressureFit::from_table(),
        FitSource::PaperPrinted => PressureFit::paper_printed(),
    }
}

/// Morphed section at one signed inflation. Negative volumes pump the other
/// way and give the mirror image of the positive solution.
#[derive(Debug, Clone)]
pub struct Section {
    pub inflation_ml: f64,
    pub pressure_pa: f64,
    pub newton_iterations: usize,
    pub residual_norm: f64,
    pub te_deflection_m: f64,
    pub profile: AirfoilProfile,
}

/// Map key with a total order on the signed volume.
fn key(v: f64) -> i64 {
    (v * 1e6).round() as i64
}

pub struct Sections(BTreeMap<i64, Section>);

impl Sections {
    pub fn get(&self, v: f64) -> Result<&Section> {
        self.0
            .get(&key(v))
            .ok_or_else(|| anyhow!("no morphed section for {v} mL"))
    }
}

pub fn solve_sections(cfg: &RunConfig, inflations_ml: &[f64]) -> Result<Sections> {
    let magnitudes = sorted_unique(inflations_ml.iter().map(|v| v.abs()).collect());
    let model = WingModel::wing(&cfg.mesh, cfg.material.material()?).context("building the wing model")?;
    let te = trailing_edge_node(model.mesh()).ok_or_else(|| anyhow!("mesh has no trailing edge"))?;
    let fit = pressure_fit(cfg);
    let solved = inflation_series(&model, &fit, &magnitudes, &cfg.solver).context("structural solve failed")?;
    let mut out = BTreeMap::new();
    for &v in inflations_ml {
        let m = solved
            .iter()
            .find(|m| m.inflation_ml == v.abs())
            .expect("every magnitude solved");
        let mirror = v < 0.0;
        let profile = if mirror { m.profile.mirrored() } else { m.profile.clone() };
        let dy = m.state.displacements[te][1];
        out.insert(
            key(v),
            Section {
                inflation_ml: v,
                pressure_pa: m.pressure_pa,
                newton_iterations: m.state.newton_iterations,
                residual_norm: m.state.residual_norm,
                te_deflection_m: if mirror { -dy } else { dy },
                profile: profile.with_name(format!("infl{v}")),
            },
        );
    }
    Ok(Sections(out))
}

pub const CAMBER_STATIONS: usize = 101;

pub fn camber_of(section: &Section) -> Result<CamberLine> {
    Ok(extract_camber(&section.profile, CAMBER_STATIONS)?.with_inflation(section.inflation_ml))
}

/// RMS and maximum camber-line error in millimetres against the digitized
/// `camber_{v}mL.csv`, if that file exists.
pub fn experimental_error(cfg: &RunConfig, section: &Section) -> Result<Option<(f64, f64)>> {
    let path = cfg
        .data_dir()
        .join(format!("camber_{}mL.csv", morphglide::table::fmt(section.inflation_ml)));
    if !path.is_file() {
        return Ok(None);
    }
    let measured = load_camber(&path, section.profile.chord_m()).with_context(|| format!("reading {}", path.display()))?;
    let e = profile_rms_error(&camber_of(section)?, &measured)?;
    Ok(Some((e.rms_m * 1e3, e.max_m * 1e3)))
}

pub fn flow(cfg: &RunConfig, u_mps: f64) -> Result<FlowConditions> {
    Ok(FlowConditions::new(u_mps, cfg.mesh.chord_m)?)
}

/// One polar per requested inflation at speed `u_mps`, in request order.
pub fn polars(cfg: &RunConfig, sections: &Sections, inflations_ml: &[f64], u_mps: f64) -> Result<Vec<HydroPolar>> {
    let profiles = inflations_ml
        .iter()
        .map(|&v| Ok((v, sections.get(v)?.profile.clone())))
        .collect::<Result<Vec<_>>>()?;
    let alphas = &cfg.sweep.alphas_deg;
    polar_sweep(&profiles, alphas, &flow(cfg, u_mps)?, &cfg.polar).map_err(|e| match e {
        HydroError::Sweep(cells) => {
            let lines: Vec<String> = cells.iter().map(|c| format!("  {c}")).collect();
            anyhow!("{} of {} polar cells failed at U = {u_mps} m/s:\n{}", cells.len(), profiles.len() * alphas.len(), lines.join("\n"))
        }
        e => e.into(),
    })
}

pub fn polar_for<'a>(polars: &'a [HydroPolar], v: f64) -> Result<&'a HydroPolar> {
    polars
        .iter()
        .find(|p| p.inflation_ml == v)
        .ok_or_else(|| anyhow!("no polar for {v} mL"))
}
