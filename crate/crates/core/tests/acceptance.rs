//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Criterion 4 also compares simulated camber lines with digitized
//! experimental ones. No such data ships with the repository, so that
//! comparison reports FAIL until `camber_{v}mL.csv` files are supplied (see
//! `data/experimental/README.md`); it is the only check this test does not
//! assert on.

mod common;

use common::{arb_case, gradient_error};
use morphglide::geometry::io::load_camber;
use morphglide::geometry::{extract_camber, naca4_profile, profile_rms_error, apply_camber, AirfoilProfile, CamberLine};
use morphglide::glide::{compare_configs, range_per_cycle};
use morphglide::hydro::{panel_solve, polar_sweep, reynolds, FlowConditions, HydroPolar, PolarSettings};
use morphglide::structural::{
    inflation_series, strain_energy_density, trailing_edge_node, Chamber, DeformationState, HyperelasticMaterial,
    MorphedSection, PressureFit, SolverSettings, WingModel, WingSectionParams, TABLE_II,
};
use morphglide::vehicle::{
    actuation_energy, efficiency_curve, ml_to_m3, roll_moment, scale_to_reynolds, static_stability, vehicle_forces,
    EfficiencyCurve, VehicleConfig,
};
use nalgebra::Matrix2;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

const INFLATIONS: [f64; 6] = [0.0, 15.0, 30.0, 60.0, 90.0, 120.0];
const ROLL_PAIRS: [f64; 4] = [30.0, 60.0, 90.0, 120.0];
/// Published camber-line RMS errors of the reference wing, mm, by inflation.
const MEASURED_RMS_MM: [(f64, f64); 5] = [(0.0, 0.921), (30.0, 0.835), (60.0, 0.632), (90.0, 0.301), (120.0, 1.07)];

struct Report {
    failed: Vec<u32>,
}

impl Report {
    fn line(&mut self, n: u32, pass: bool, text: String) {
        if !pass {
            self.failed.push(n);
        }
        // past the harness capture so the lines always show
        let mut out = std::io::stdout().lock();
        writeln!(out, "{} criterion {n}: {text}", if pass { "PASS" } else { "FAIL" }).unwrap();
    }
}

fn alphas() -> Vec<f64> {
    (-8..=8).map(f64::from).collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn criterion_1(r: &mut Report) {
    let re = |u, l| reynolds(&FlowConditions::new(u, l).unwrap()).unwrap();
    let re1 = re(0.25, 0.230);
    let re2 = re(0.40, 0.230);
    let re3 = re(0.50, 0.213);
    let scaled = scale_to_reynolds(&VehicleConfig::reference_uuv(), 1.065e5, 0.26, 1.0e-6).unwrap();
    let l2 = scaled.wing_chord_m;
    // three significant figures as a relative tolerance of half a unit in
    // the third digit
    let tol = 5e-3;
    let pass = rel(re1, 5.75e4) < tol && rel(re2, 9.20e4) < tol && rel(re3, 1.065e5) < tol && rel(l2, 0.409) < tol;
    r.line(
        1,
        pass,
        format!("Re1 {re1:.4e} (5.75e4), Re2 {re2:.4e} (9.20e4), Re {re3:.4e} (1.065e5), L2 {l2:.4} m (0.409), rel tol {tol}"),
    );
}

fn criterion_2(r: &mut Report) {
    let fit = PressureFit::from_table();
    let printed = PressureFit::paper_printed();
    let worst = TABLE_II.iter().map(|&(v, p)| (fit.eval(v) - p).abs()).fold(0.0, f64::max);
    let printed_worst = TABLE_II.iter().map(|&(v, p)| (printed.eval(v) - p).abs()).fold(0.0, f64::max);
    // the printed quadratic coefficient cannot reproduce the table, the
    // refit lands on the 1e-3 scale
    let printed_inconsistent = printed_worst > 1.5;
    let refit_scale = fit.a.abs() > 1e-3 && fit.a.abs() < 1e-2;
    let pass = worst <= 1.5 && printed_inconsistent && refit_scale;
    r.line(
        2,
        pass,
        format!(
            "refit a={:.5} b={:.4} c={:.3}: worst residual {worst:.3} kPa (<= 1.5); printed a={} misses the table by up to {printed_worst:.1} kPa",
            fit.a, fit.b, fit.c, printed.a
        ),
    );
}

fn criterion_3(r: &mut Report) {
    let t = Instant::now();
    let m = HyperelasticMaterial::ecoflex_00_50();
    let shear = strain_energy_density(&Matrix2::new(1.0, 0.1, 0.0, 1.0), &m).unwrap();
    let shear_oracle = (m.c1_pa + m.c2_pa) * 0.01;
    let l: f64 = 1.2;
    let stretch = strain_energy_density(&Matrix2::new(l, 0.0, 0.0, 1.0 / l), &m).unwrap();
    let stretch_oracle = (m.c1_pa + m.c2_pa) * (l * l + 1.0 / (l * l) - 2.0);
    let closed_form = rel(shear, shear_oracle).max(rel(stretch, stretch_oracle));

    let mut runner = TestRunner::new_with_rng(Config::default(), TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let strategy = arb_case();
    let mut worst = 0.0f64;
    let mut meshes = 0;
    while meshes < 12 {
        let (quadratic, jitter, coeffs) = strategy.new_tree(&mut runner).unwrap().current();
        if let Some(e) = gradient_error(quadratic, &jitter, &coeffs) {
            worst = worst.max(e);
            meshes += 1;
        }
    }
    let secs = t.elapsed().as_secs_f64();
    let pass = closed_form <= 1e-10 && worst <= 1e-4 && secs < 10.0;
    r.line(
        3,
        pass,
        format!(
            "closed forms rel err {closed_form:.1e} (<= 1e-10); energy gradient rel err {worst:.1e} (<= 1e-4) on {meshes} random 50-element meshes; {secs:.1} s (< 10 s)"
        ),
    );
}

fn data_dir() -> PathBuf {
    match std::env::var_os("MORPHGLIDE_DATA") {
        Some(d) if !d.is_empty() => PathBuf::from(d),
        _ => PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/experimental"),
    }
}

fn criterion_4(r: &mut Report, model: &WingModel, sections: &[MorphedSection], solve_secs: f64) -> bool {
    let settings = SolverSettings::default();
    let n = model.mesh().nodes().len();
    let zero = model.solve(Chamber::Upper, 0.0, &settings).unwrap();
    let exact_zero = zero.displacements.iter().flatten().all(|&d| d == 0.0);

    let up = model.solve(Chamber::Upper, 30.0e3, &settings).unwrap();
    let lo = model.solve(Chamber::Lower, 30.0e3, &settings).unwrap();
    let nodes = model.mesh().nodes();
    let mut mirror = 0.0f64;
    for (i, p) in nodes.iter().enumerate() {
        let j = nodes
            .iter()
            .position(|q| (q[0] - p[0]).abs() < 1e-12 && (q[1] + p[1]).abs() < 1e-12)
            .unwrap();
        let (a, b) = (up.displacements[i], lo.displacements[j]);
        mirror = mirror.max((a[0] - b[0]).abs()).max((a[1] + b[1]).abs());
    }
    let mirror_ok = mirror < 1e-7;

    let te = trailing_edge_node(model.mesh()).unwrap();
    let mut state = DeformationState::undeformed(n);
    let mut deflections = Vec::new();
    for p in [18.8, 35.5, 44.3, 51.2] {
        state = model.solve_from(&state, Chamber::Upper, p * 1e3, &settings).unwrap();
        deflections.push(-state.displacements[te][1] * 1e3);
    }
    let monotone = deflections.windows(2).all(|w| w[1] > w[0]) && deflections[0] > 0.0;
    let core_ok = exact_zero && mirror_ok && monotone && solve_secs < 120.0;

    let dir = data_dir();
    let mut rows = Vec::new();
    let mut missing = Vec::new();
    for (v, published) in MEASURED_RMS_MM {
        let path = dir.join(format!("camber_{v}mL.csv"));
        let s = sections.iter().find(|s| s.inflation_ml == v).unwrap();
        if !path.is_file() {
            missing.push(v);
            continue;
        }
        let measured = load_camber(&path, s.profile.chord_m()).unwrap();
        let simulated = extract_camber(&s.profile, 101).unwrap();
        let e = profile_rms_error(&simulated, &measured).unwrap();
        rows.push((v, e.rms_m * 1e3, 2.0 * published));
    }
    let rms_ok = missing.is_empty() && rows.iter().all(|&(_, rms, limit)| rms <= limit);
    let rms_text = if missing.is_empty() {
        rows.iter()
            .map(|(v, rms, limit)| format!("{v} mL {rms:.3}/{limit:.3}"))
            .collect::<Vec<_>>()
            .join(", ")
    } else {
        format!("no digitized camber data in {} for {missing:?} mL", dir.display())
    };
    let defl: Vec<String> = deflections.iter().map(|d| format!("{d:.2}")).collect();
    r.line(
        4,
        core_ok && rms_ok,
        format!(
            "zero load exact={exact_zero}; chamber mirror mismatch {mirror:.1e} m; TE deflection [{}] mm increasing={monotone}; five inflations in {solve_secs:.1} s (< 120 s); camber RMS vs experiment (mm, limit 2x published): {rms_text}",
            defl.join(", ")
        ),
    );
    core_ok
}

fn section(code: &str, n_panels: usize) -> AirfoilProfile {
    naca4_profile(code, 400, 0.230).unwrap().repaneled(n_panels).unwrap()
}

fn criterion_5(r: &mut Report, sections: &[MorphedSection]) {
    let t = Instant::now();
    let flow = FlowConditions::new(0.40, 0.230).unwrap();
    let sym = panel_solve(&section("0016", 160), 0.0, &flow).unwrap().c_l;

    let thin = panel_solve(&section("0006", 160), 5.0, &flow).unwrap().c_l;
    let slope = thin / 5f64.to_radians();
    let slope_err = rel(slope, 2.0 * PI);

    let m = 0.02;
    let base = naca4_profile("0006", 400, 0.230).unwrap();
    let arc = apply_camber(&base, &CamberLine::parabolic(m * 0.230, 101, 0.230))
        .unwrap()
        .repaneled(160)
        .unwrap();
    let c0 = panel_solve(&arc, 0.0, &flow).unwrap().c_l;
    let c1 = panel_solve(&arc, -3.0, &flow).unwrap().c_l;
    let alpha0 = -c0 * 3.0 / (c0 - c1);
    let alpha0_thin = -(2.0 * m).to_degrees();
    let alpha0_err = rel(alpha0, alpha0_thin);

    let mut conv = 0.0f64;
    let morphed = &sections.iter().find(|s| s.inflation_ml == 60.0).unwrap().profile;
    for p in [naca4_profile("0016", 400, 0.230).unwrap(), morphed.clone()] {
        let a = panel_solve(&p.repaneled(160).unwrap(), 5.0, &flow).unwrap().c_l;
        let b = panel_solve(&p.repaneled(320).unwrap(), 5.0, &flow).unwrap().c_l;
        conv = conv.max(rel(a, b));
    }
    let secs = t.elapsed().as_secs_f64();
    let pass = sym.abs() < 1e-6 && slope_err < 0.10 && alpha0_err < 0.15 && conv < 0.005 && secs < 30.0;
    r.line(
        5,
        pass,
        format!(
            "symmetric c_l {sym:.1e} (< 1e-6); lift slope {slope:.3}/rad, {:.1}% from 2pi (< 10%); parabolic zero-lift {alpha0:.3} deg vs {alpha0_thin:.3}, {:.1}% (< 15%); 160->320 panels {:.2}% (< 0.5%); {secs:.1} s (< 30 s)",
            100.0 * slope_err,
            100.0 * alpha0_err,
            100.0 * conv
        ),
    );
}

fn polars(sections: &[MorphedSection], u: f64, signed: &[f64]) -> Vec<HydroPolar> {
    let profiles: Vec<(f64, AirfoilProfile)> = signed
        .iter()
        .map(|&v| {
            let s = sections.iter().find(|s| s.inflation_ml == v.abs()).unwrap();
            (v, if v < 0.0 { s.profile.mirrored() } else { s.profile.clone() })
        })
        .collect();
    let flow = FlowConditions::new(u, 0.230).unwrap();
    polar_sweep(&profiles, &alphas(), &flow, &PolarSettings::default()).unwrap()
}

fn criterion_6(r: &mut Report, sections: &[MorphedSection]) {
    let ps = polars(sections, 0.25, &INFLATIONS);
    let mut cl_ok = true;
    for (k, a) in alphas().iter().enumerate() {
        for w in ps.windows(2) {
            if w[1].rows()[k].c_l < w[0].rows()[k].c_l {
                cl_ok = false;
                eprintln!("c_l falls from {} to {} mL at {a} deg", w[0].inflation_ml, w[1].inflation_ml);
            }
        }
    }
    let zl: Vec<f64> = ps.iter().map(|p| p.zero_lift_alpha().unwrap()).collect();
    let zl_ok = zl.windows(2).all(|w| w[1] < w[0]);
    let zl_text: Vec<String> = zl.iter().map(|a| format!("{a:.2}")).collect();
    r.line(
        6,
        cl_ok && zl_ok,
        format!(
            "Re {:.3e}: c_l non-decreasing in inflation at every incidence={cl_ok}; zero-lift angle [{}] deg over {INFLATIONS:?} mL decreasing={zl_ok}",
            ps[0].re,
            zl_text.join(", ")
        ),
    );
}

fn curves(sections: &[MorphedSection], u: f64) -> (Vec<HydroPolar>, Vec<EfficiencyCurve>) {
    let mut signed: Vec<f64> = INFLATIONS.to_vec();
    signed.extend(ROLL_PAIRS.iter().map(|v| -v));
    let ps = polars(sections, u, &signed);
    let flow = FlowConditions::new(u, 0.230).unwrap();
    let cfg = VehicleConfig::default();
    let cs = ps
        .iter()
        .filter(|p| p.inflation_ml >= 0.0)
        .map(|p| efficiency_curve(&cfg, p, &alphas(), &flow).unwrap())
        .collect();
    (ps, cs)
}

fn curve(cs: &[EfficiencyCurve], v: f64) -> &EfficiencyCurve {
    cs.iter().find(|c| c.inflation_ml == v).unwrap()
}

fn criterion_7(r: &mut Report, cs: &[EfficiencyCurve], secs: f64) {
    let rigid = curve(cs, 0.0);
    let odd = rigid
        .rows
        .iter()
        .zip(rigid.rows.iter().rev())
        .map(|(a, b)| (a.1 + b.1).abs())
        .fold(0.0, f64::max);
    let positive = [60.0, 90.0, 120.0].iter().all(|&v| curve(cs, v).rows.iter().all(|r| r.1 > 0.0));
    let (a_r, e_r) = rigid.max_in(0.0, 8.0).unwrap();
    let (a_15, e_15) = curve(cs, 15.0).max_in(0.0, 8.0).unwrap();
    let pass = odd < 1e-6 && positive && e_15 > e_r && (4.5..=8.5).contains(&e_r) && a_15 < a_r && secs < 60.0;
    r.line(
        7,
        pass,
        format!(
            "rigid odd to {odd:.1e} (< 1e-6); eta > 0 for 60/90/120 mL={positive}; max eta rigid {e_r:.3} at {a_r} deg (band 4.5..8.5, reference 6.36 at 8), 15 mL {e_15:.3} at {a_15} deg ({:+.2}%); {secs:.1} s (< 60 s)",
            100.0 * (e_15 - e_r) / e_r
        ),
    );
}

fn criterion_8(r: &mut Report, ps: &[HydroPolar]) {
    let cfg = VehicleConfig::default();
    let flow = FlowConditions::new(0.26, 0.230).unwrap();
    let polar = |v: f64| ps.iter().find(|p| p.inflation_ml == v).unwrap();
    let mut antisymmetric = true;
    let mut moments = Vec::new();
    for v in ROLL_PAIRS {
        let p = roll_moment(&cfg, polar(-v), polar(v), &flow).unwrap();
        let q = roll_moment(&cfg, polar(v), polar(-v), &flow).unwrap();
        antisymmetric &= p == -q;
        moments.push(p.abs());
    }
    let increasing = moments.windows(2).all(|w| w[1] > w[0]);
    let pitch: Vec<(f64, f64)> = alphas()
        .iter()
        .map(|&a| (a, vehicle_forces(&cfg, polar(0.0), a, &flow).unwrap().pitch_moment_nm))
        .collect();
    let st = static_stability(&pitch).unwrap();
    let none_stable = st.stable_ranges.is_empty();
    let m: Vec<String> = moments.iter().map(|p| format!("{p:.3}")).collect();
    r.line(
        8,
        antisymmetric && increasing && none_stable,
        format!(
            "roll antisymmetry exact={antisymmetric}; |p| [{}] N m over +-{ROLL_PAIRS:?} mL increasing={increasing}; rigid stable intervals {:?} (none expected)",
            m.join(", "),
            st.stable_ranges
        ),
    );
}

fn criterion_9(r: &mut Report) {
    let e = actuation_energy(50.0e3, 120.0e-6).unwrap();
    let e_ml = actuation_energy(50.0e3, ml_to_m3(120.0)).unwrap();
    let mk = |v, eta| EfficiencyCurve {
        rows: vec![(0.0, 1.0), (8.0, eta)],
        inflation_ml: v,
        u_mps: 0.26,
    };
    let c = compare_configs(&mk(0.0, 6.36), &mk(15.0, 6.98)).unwrap();
    let range_gain = 100.0 * (range_per_cycle(6.98, 1000.0).unwrap() / range_per_cycle(6.36, 1000.0).unwrap() - 1.0);
    let pass = e == 6.0 && e_ml == 6.0 && (c.eta_gain_pct - 9.75).abs() <= 0.05 && c.range_gain_pct == c.eta_gain_pct && (range_gain - c.eta_gain_pct).abs() < 1e-12;
    r.line(
        9,
        pass,
        format!(
            "actuation energy {e} J (6.0 exact); eta gain {:.3}% (9.75 +- 0.05); range gain {:.3}% (equal to eta gain)",
            c.eta_gain_pct, c.range_gain_pct
        ),
    );
}

#[test]
fn acceptance() {
    let mut r = Report { failed: Vec::new() };
    criterion_1(&mut r);
    criterion_2(&mut r);
    criterion_3(&mut r);

    let model = WingModel::wing(&WingSectionParams::default(), HyperelasticMaterial::ecoflex_00_50()).unwrap();
    let t = Instant::now();
    let sections = inflation_series(&model, &PressureFit::from_table(), &INFLATIONS, &SolverSettings::default()).unwrap();
    let solve_secs = t.elapsed().as_secs_f64();
    let c4_core = criterion_4(&mut r, &model, &sections, solve_secs);
    criterion_5(&mut r, &sections);
    criterion_6(&mut r, &sections);

    let t = Instant::now();
    let (ps, cs) = curves(&sections, 0.26);
    criterion_7(&mut r, &cs, t.elapsed().as_secs_f64());
    criterion_8(&mut r, &ps);
    criterion_9(&mut r);

    // criterion 4 may fail only on the experimental comparison
    let unexpected: Vec<u32> = r.failed.iter().copied().filter(|&n| n != 4 || !c4_core).collect();
    assert!(unexpected.is_empty(), "failed criteria {unexpected:?}");
}
