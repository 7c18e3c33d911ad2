use crate::config::{sorted_unique, GlideScenario, RunConfig};
use crate::output::{tag, Cell, Emitter, Table};
use crate::pipeline::{camber_of, experimental_error, flow, polar_for, pressure_fit, Sections};
use anyhow::{Context, Result};
use morphglide::geometry::io::{CAMBER_HEADER, PROFILE_HEADER};
use morphglide::glide::{compare_configs, simulate_sawtooth, GlidePath, GLIDE_HEADER};
use morphglide::hydro::{HydroPolar, POLAR_HEADER};
use morphglide::structural::{pressure_for_inflation, TABLE_II};
use morphglide::table::fmt;
use morphglide::vehicle::{
    efficiency, efficiency_curve, roll_moment, static_stability, vehicle_forces, zero_lift_alpha, EfficiencyCurve,
};
use serde_json::json;

pub fn fit_pressure(cfg: &RunConfig, em: &mut Emitter) -> Result<()> {
    let fit = pressure_fit(cfg);
    let printed = morphglide::structural::PressureFit::paper_printed();
    let mut t = Table::new(&["inflation_mL", "table_kPa", "fit_kPa", "residual_kPa", "printed_kPa"])
        .comment(format!(
            "P(I) = a I^2 + b I + c, kPa: a={} b={} c={} source={:?}",
            fmt(fit.a),
            fmt(fit.b),
            fmt(fit.c),
            fit.source
        ))
        .comment(format!("rms residual {} kPa", fmt(fit.residual_rms(&TABLE_II))));
    for &(v, p) in TABLE_II.iter() {
        let f = fit.eval(v);
        t.push(vec![v.into(), p.into(), f.into(), (f - p).into(), printed.eval(v).into()]);
    }
    em.table("pressure_fit", &t)?;
    println!("a = {}, b = {}, c = {}", fmt(fit.a), fmt(fit.b), fmt(fit.c));
    Ok(())
}

pub fn deform(cfg: &RunConfig, em: &mut Emitter, sections: &Sections, inflations: &[f64]) -> Result<()> {
    let mut report = Table::new(&[
        "inflation_mL",
        "pressure_Pa",
        "newton_iterations",
        "residual_norm",
        "te_deflection_mm",
        "rms_mm",
        "max_mm",
    ])
    .comment(format!("experimental data directory {}", cfg.data_dir().display()));
    for &v in inflations {
        let s = sections.get(v)?;
        let profile_table = point_table(
            &PROFILE_HEADER,
            format!("profile infl{} chord_m={}", tag(v), fmt(s.profile.chord_m())),
            s.profile.points().iter().map(|p| (p[0], p[1])),
        );
        em.table(&format!("profile_infl{}", tag(v)), &profile_table)?;
        let camber = camber_of(s)?;
        let camber_table = point_table(
            &CAMBER_HEADER,
            format!("camber inflation_mL={} chord_m={}", tag(v), fmt(camber.chord_m())),
            camber.stations().iter().copied(),
        );
        em.table(&format!("camber_infl{}", tag(v)), &camber_table)?;
        let err = experimental_error(cfg, s)?;
        report.push(vec![
            v.into(),
            s.pressure_pa.into(),
            s.newton_iterations.into(),
            s.residual_norm.into(),
            (s.te_deflection_m * 1e3).into(),
            err.map(|e| e.0).into(),
            err.map(|e| e.1).into(),
        ]);
        println!(
            "{} mL: {:.0} Pa, trailing edge {:+.2} mm{}",
            tag(v),
            s.pressure_pa,
            s.te_deflection_m * 1e3,
            err.map(|e| format!(", camber rms {:.3} mm", e.0)).unwrap_or_default()
        );
    }
    em.table("deform_report", &report)?;
    Ok(())
}

fn point_table(header: &[&'static str], comment: String, points: impl Iterator<Item = (f64, f64)>) -> Table {
    let mut t = Table::new(header).comment(comment);
    for (x, y) in points {
        t.push(vec![x.into(), y.into()]);
    }
    t
}

pub fn polar_stem(p: &HydroPolar) -> String {
    format!("polar_Re{:.0}_infl{}", p.re, tag(p.inflation_ml))
}

pub fn write_polars(em: &mut Emitter, polars: &[HydroPolar]) -> Result<()> {
    for p in polars {
        let mut t = Table::new(&POLAR_HEADER).comment(format!(
            "polar re={} inflation_mL={}",
            fmt(p.re),
            fmt(p.inflation_ml)
        ));
        for r in p.rows() {
            t.push(vec![r.alpha_deg.into(), r.c_l.into(), r.c_d.into(), r.c_m.into()]);
        }
        em.table(&polar_stem(p), &t)?;
    }
    Ok(())
}

fn curves(cfg: &RunConfig, polars: &[HydroPolar], u: f64) -> Result<Vec<EfficiencyCurve>> {
    let f = flow(cfg, u)?;
    polars
        .iter()
        .map(|p| Ok(efficiency_curve(&cfg.vehicle, p, &cfg.sweep.alphas_deg, &f)?))
        .collect()
}

/// Efficiency, pitch and roll tables at speed `u`. `polars` must hold the
/// grid inflations and both signs of every roll pair.
pub fn vehicle(cfg: &RunConfig, em: &mut Emitter, polars: &[HydroPolar], u: f64) -> Result<()> {
    let f = flow(cfg, u)?;
    let vc = &cfg.vehicle;
    let mut forces = Table::new(&["inflation_mL", "alpha_deg", "lift_N", "drag_N", "C_L", "C_D", "eta"])
        .comment(format!("U={} m/s, eta = L/D signed with lift", fmt(u)));
    let mut best = Table::new(&["inflation_mL", "alpha_deg", "eta_max", "zero_lift_alpha_deg"])
        .comment(format!("U={} m/s, best efficiency per inflation over the incidence grid", fmt(u)));
    let mut pitch = Table::new(&[
        "inflation_mL",
        "alpha_deg",
        "pitch_moment_Nm",
        "m_alpha_Nm_per_deg",
        "abs_m_alpha_Nm_per_deg",
        "stable",
        "stable_literal",
    ])
    .comment(format!("U={} m/s, moment about the cg, positive nose-down", fmt(u)))
    .comment("stable: dM/dalpha > 0 on the nose-down-positive moment (restoring)")
    .comment("stable_literal: d|M|/dalpha > 0, reported for comparison");
    for &v in &cfg.sweep.inflations_ml {
        let polar = polar_for(polars, v)?;
        let mut moments = Vec::new();
        for &a in &cfg.sweep.alphas_deg {
            let fv = vehicle_forces(vc, polar, a, &f)?;
            forces.push(vec![
                v.into(),
                a.into(),
                fv.lift_n.into(),
                fv.drag_n.into(),
                fv.c_l.into(),
                fv.c_d.into(),
                efficiency(&fv)?.into(),
            ]);
            moments.push((a, fv.pitch_moment_nm));
        }
        let curve = efficiency_curve(vc, polar, &cfg.sweep.alphas_deg, &f)?;
        let (a_best, e_best) = curve.max().expect("non-empty grid");
        best.push(vec![v.into(), a_best.into(), e_best.into(), zero_lift_alpha(vc, polar, &f)?.into()]);
        let flag = |ranges: &[(f64, f64)], a: f64| -> Cell {
            let on = ranges.iter().any(|&(lo, hi)| (lo..=hi).contains(&a));
            Cell::Num(if on { 1.0 } else { 0.0 })
        };
        if moments.len() >= 3 {
            let st = static_stability(&moments)?;
            for (i, &(a, m)) in moments.iter().enumerate() {
                pitch.push(vec![
                    v.into(),
                    a.into(),
                    m.into(),
                    st.m_alpha[i].into(),
                    st.abs_m_alpha[i].into(),
                    flag(&st.stable_ranges, a),
                    flag(&st.literal_ranges, a),
                ]);
            }
        }
    }
    let mut roll = Table::new(&["differential_mL", "roll_moment_Nm"]).comment(format!(
        "U={} m/s, alpha=0, right wing at +v and left at -v; p = (L_right - L_left) span/4",
        fmt(u)
    ));
    for &v in &cfg.sweep.roll_pairs_ml {
        let p = roll_moment(vc, polar_for(polars, -v)?, polar_for(polars, v)?, &f)?;
        roll.push(vec![v.into(), p.into()]);
    }
    let u_tag = tag(u);
    em.table(&format!("efficiency_U{u_tag}"), &forces)?;
    em.table(&format!("efficiency_max_U{u_tag}"), &best)?;
    if !pitch.rows.is_empty() {
        em.table(&format!("pitch_U{u_tag}"), &pitch)?;
    }
    em.table(&format!("roll_U{u_tag}"), &roll)?;
    Ok(())
}

/// Every grid inflation against the rigid one at speed `u`.
pub fn compare(cfg: &RunConfig, em: &mut Emitter, polars: &[HydroPolar], u: f64) -> Result<()> {
    let all = curves(cfg, polars, u)?;
    let rigid_v = cfg.glide.rigid_inflation_ml;
    let rigid = all
        .iter()
        .find(|c| c.inflation_ml == rigid_v)
        .with_context(|| format!("rigid inflation {rigid_v} mL is not in the sweep"))?;
    let mut t = Table::new(&[
        "inflation_mL",
        "best_alpha_deg",
        "best_eta",
        "eta_gain_pct",
        "range_gain_pct",
        "glide_angle_deg",
    ])
    .comment(format!("U={} m/s, gains relative to {} mL", fmt(u), fmt(rigid_v)));
    for &v in &cfg.sweep.inflations_ml {
        let c = all.iter().find(|c| c.inflation_ml == v).expect("curve per grid inflation");
        match compare_configs(rigid, c) {
            Ok(r) => {
                t.push(vec![
                    v.into(),
                    r.best_alpha_morph_deg.into(),
                    r.best_eta_morph.into(),
                    r.eta_gain_pct.into(),
                    r.range_gain_pct.into(),
                    r.glide_angle_morph_deg.into(),
                ]);
                println!("U={} m/s {:>4} mL: eta_max {:.3} at {} deg ({:+.2}%)", fmt(u), tag(v), r.best_eta_morph, r.best_alpha_morph_deg, r.eta_gain_pct);
            }
            Err(e) => return Err(e).with_context(|| format!("comparing {v} mL")),
        }
    }
    em.table(&format!("comparison_U{}", tag(u)), &t)?;
    Ok(())
}

fn path_table(path: &GlidePath, label: &str) -> Table {
    let mut t = Table::new(&GLIDE_HEADER).comment(format!(
        "{label}: {} cycles, range {} m, morph energy {} J",
        path.cycles,
        fmt(path.total_range_m),
        fmt(path.morph_energy_j)
    ));
    for s in &path.states {
        let phase = match s.phase {
            morphglide::glide::Phase::Descending => "descending",
            morphglide::glide::Phase::Ascending => "ascending",
        };
        t.push(vec![
            s.t_s.into(),
            s.horizontal_m.into(),
            s.depth_m.into(),
            phase.into(),
            s.inflation_ml.into(),
        ]);
    }
    t
}

/// Rigid and morphing sawtooth paths and their comparison. `polars` must
/// cover every inflation the scenario visits at the scenario speed.
pub fn glide(cfg: &RunConfig, scenario: &GlideScenario, em: &mut Emitter, polars: &[HydroPolar]) -> Result<()> {
    let u = scenario.speed_mps;
    let all = curves(cfg, polars, u)?;
    let curve = |v: f64| {
        all.iter()
            .find(|c| c.inflation_ml == v)
            .with_context(|| format!("no efficiency curve for {v} mL"))
    };
    let fit = pressure_fit(cfg);
    let rigid = simulate_sawtooth(
        &all,
        scenario.depth_amplitude_m,
        scenario.n_cycles,
        scenario.rigid_inflation_ml,
        &[],
        &fit,
    )?;
    let morph = simulate_sawtooth(
        &all,
        scenario.depth_amplitude_m,
        scenario.n_cycles,
        scenario.initial_inflation_ml,
        &scenario.schedule,
        &fit,
    )?;
    let morph_v = scenario
        .schedule
        .iter()
        .max_by_key(|e| e.cycle)
        .map_or(scenario.initial_inflation_ml, |e| e.inflation_ml);
    let cmp = compare_configs(curve(scenario.rigid_inflation_ml)?, curve(morph_v)?)?;
    let path_gain = 100.0 * (morph.total_range_m - rigid.total_range_m) / rigid.total_range_m;
    let energy_ratio = scenario
        .buoyancy_energy_per_cycle_j
        .map(|b| morph.energy_ratio(b))
        .transpose()?;
    em.table("glide_rigid", &path_table(&rigid, "rigid"))?;
    em.table("glide_morph", &path_table(&morph, "morphing"))?;
    let max_pressure = pressure_for_inflation(&fit, morph_v)? * 1e3;
    let report = json!({
        "speed_mps": u,
        "rigid_inflation_mL": scenario.rigid_inflation_ml,
        "morph_inflation_mL": morph_v,
        "comparison": cmp,
        "rigid_range_m": rigid.total_range_m,
        "morph_range_m": morph.total_range_m,
        "path_range_gain_pct": path_gain,
        "morph_energy_J": morph.morph_energy_j,
        "morph_pressure_Pa": max_pressure,
        "morph_to_buoyancy_energy": energy_ratio,
    });
    em.json("glide_comparison.json", &report)?;
    let mut text = format!("{cmp}\n");
    text += &format!(
        "sawtooth over {} cycles of {} m: rigid {:.1} m, morphing {:.1} m ({:+.2}%)\n",
        scenario.n_cycles, scenario.depth_amplitude_m, rigid.total_range_m, morph.total_range_m, path_gain
    );
    text += &format!("morphing energy {:.3} J", morph.morph_energy_j);
    if let Some(r) = energy_ratio {
        text += &format!(" ({:.3e} of the buoyancy budget)", r);
    }
    em.text("glide_comparison.txt", &text)?;
    println!("{text}");
    Ok(())
}

/// Volumes the vehicle stage needs: the grid plus both signs of each roll pair.
pub fn vehicle_inflations(cfg: &RunConfig) -> Vec<f64> {
    let mut v = cfg.sweep.inflations_ml.clone();
    for &p in &cfg.sweep.roll_pairs_ml {
        v.push(p);
        v.push(-p);
    }
    sorted_unique(v)
}
