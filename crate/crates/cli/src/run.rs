use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::{Path, PathBuf};

use fluxquant::comparator::{level_count_raw, transfer_curve, write_transfer_csv};
use fluxquant::constants::{PhysicalConstants, VACUUM_PERMEABILITY};
use fluxquant::dsm::{
    analyze_spectrum, coherent_sine, periodogram, run_modulator, write_report, write_spectrum_csv,
    TraceSet,
};
use fluxquant::electrodynamics::diffusion::DrivenSlab;
use fluxquant::electrodynamics::{
    normal_slab_profile, slab_grid, square_loop_current, super_slab_profile,
    two_fluid_slab_profile, FieldError, FieldProfile, SlabConfig,
};
use fluxquant::fluxtrap::{
    integrate_cycle, run_amplification_sequence, settle_time_device, SquidAccumulator,
};
use fluxquant::junctions::{
    andreev_outcome, iv_sweep, nis_current_low_t, normal_coherence_length, sns_current,
    write_iv_csv, Incidence, Regime,
};
use fluxquant::noise::{
    dof_variance_factor, loglog_slope, synth_flicker_series, welch_psd, write_psd_csv,
    write_series_csv,
};

use crate::config::{
    ComparatorScenario, DeviceScenario, JunctionScenario, ModulatorScenario, NoiseScenario, Params,
    ScenarioConfig, SlabModel, SlabScenario,
};
use crate::error::CliError;
use crate::report::Report;

/// One output file of a scenario, held in memory until written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: &'static str,
    pub bytes: Vec<u8>,
}

fn artifact(name: &'static str, bytes: Vec<u8>) -> Artifact {
    Artifact { name, bytes }
}

fn header(cfg: &ScenarioConfig) -> Report {
    let mut r = Report::new();
    r.section("scenario")
        .text("kind", cfg.kind.name())
        .int("seed", cfg.seed);
    r
}

/// Run the scenario's pipeline and return its artifacts in a fixed order.
pub fn render_scenario(cfg: &ScenarioConfig) -> Result<Vec<Artifact>, CliError> {
    let mut report = header(cfg);
    match &cfg.params {
        Params::Slab(s) => slab(s, &mut report),
        Params::Device(s) => device(s, &mut report),
        Params::Junction(s) => junction(s, &mut report),
        Params::Noise(s) => noise(s, cfg.seed, &mut report),
        Params::Modulator(s) => modulator(s, cfg.seed, report),
        Params::Comparator(s) => comparator(s, &mut report),
    }
}

/// Run the scenario and write its artifacts into `out_dir`.
pub fn run_scenario(cfg: &ScenarioConfig, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let artifacts = render_scenario(cfg)?;
    fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    artifacts
        .into_iter()
        .map(|a| {
            let path = out_dir.join(a.name);
            fs::write(&path, &a.bytes).map_err(|e| CliError::io(&path, e))?;
            Ok(path)
        })
        .collect()
}

fn finish(report: &Report) -> Artifact {
    artifact("report.txt", report.to_string().into_bytes())
}

fn csv_bytes<E: std::fmt::Display>(
    write: impl FnOnce(&mut Vec<u8>) -> Result<(), E>,
) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    write(&mut buf).map_err(CliError::module)?;
    Ok(buf)
}

fn slab(s: &SlabScenario, report: &mut Report) -> Result<Vec<Artifact>, CliError> {
    let p = &s.params;
    let cfg = SlabConfig {
        half_thickness: p.half_thickness,
        material: s.material.clone(),
        b0: p.b0,
        omega: p.omega,
        temperature: p.temperature,
    };
    let solve: fn(&SlabConfig, &[f64]) -> Result<FieldProfile, FieldError> = match p.model {
        SlabModel::Normal => normal_slab_profile,
        SlabModel::London => super_slab_profile,
        SlabModel::TwoFluid => two_fluid_slab_profile,
    };
    let profile = solve(&cfg, &slab_grid(p.half_thickness, p.points)).map_err(CliError::module)?;
    let centre = solve(&cfg, &[0.0]).map_err(CliError::module)?.b[0];

    report
        .section("slab")
        .text("material", &s.material.name)
        .text("model", p.model.label())
        .float("half_thickness", p.half_thickness)
        .float("b0", p.b0)
        .float("omega", p.omega)
        .float("temperature", p.temperature)
        .int("points", p.points as u64);
    report.section("results");
    if p.model == SlabModel::Normal {
        report.float("skin_depth", cfg.skin_depth());
    } else {
        report.float("lambda_l", s.material.lambda_l);
    }
    if p.b0 != 0.0 {
        report.float("centre_field_ratio", centre.norm() / p.b0.abs());
    }
    if p.cn_check {
        let ratio = p.half_thickness / cfg.skin_depth();
        // Transients decay on the diffusion time, which grows as (d / delta)^2.
        let periods = (2.5 * ratio * ratio).ceil().max(15.0) as usize;
        let run = DrivenSlab {
            half_thickness: p.half_thickness,
            mu_sigma: VACUUM_PERMEABILITY * s.material.sigma_n,
            omega: p.omega,
            b0: p.b0,
            grid_points: 401,
            periods,
            steps_per_period: 1000,
        };
        let (xs, numeric) = run.steady_state_phasor();
        let closed = normal_slab_profile(&cfg, &xs).map_err(CliError::module)?;
        let last = xs.len() - 1;
        let err = numeric[1..last]
            .iter()
            .zip(&closed.b[1..last])
            .map(|(n, c)| (n - c).norm() / c.norm())
            .fold(0.0, f64::max);
        report
            .int("cn_periods", periods as u64)
            .float("cn_max_relative_error", err);
    }
    let csv = csv_bytes(|b| profile.write_csv(b))?;
    Ok(vec![artifact("profile.csv", csv), finish(report)])
}

fn device(s: &DeviceScenario, report: &mut Report) -> Result<Vec<Artifact>, CliError> {
    let c = PhysicalConstants::codata();
    let p = &s.params;
    let run = run_amplification_sequence(&s.geometry, p.input_field, &s.schedule, &c)
        .map_err(CliError::module)?;
    let squid = (0..p.cycles).fold(SquidAccumulator::new(), |sq, _| {
        integrate_cycle(sq, run.amplified_quanta())
    });
    report
        .section("device")
        .float("radius", p.radius)
        .int("segments", p.segments as u64)
        .float("n_eff", p.n_eff)
        .float("critical_b", p.critical_b)
        .float("input_field", p.input_field)
        .text("schedule", &s.schedule_label)
        .int("steps", s.schedule.steps.len() as u64)
        .int("cycles", p.cycles as u64);
    report
        .section("results")
        .int("input_quanta", run.input_quanta)
        .int("gain", run.gain as u64)
        .int("amplified_quanta", run.amplified_quanta())
        .int("squid_flux_quanta", squid.accumulated_flux)
        .float(
            "settle_time",
            settle_time_device(p.tau_cooper, p.segments as u32, p.tau_ecoil),
        );
    let csv = csv_bytes(|b| run.write_csv(b))?;
    Ok(vec![artifact("sequence.csv", csv), finish(report)])
}

fn junction(s: &JunctionScenario, report: &mut Report) -> Result<Vec<Artifact>, CliError> {
    let c = PhysicalConstants::codata();
    let j = &s.junction;
    let points = iv_sweep(j, &s.voltages, &c).map_err(CliError::module)?;

    let mut tables = String::new();
    for (i, &e) in s.params.scatter_energies.iter().enumerate() {
        if i > 0 {
            tables.push('\n');
        }
        tables.push_str(&format!("# energy = {e} gap\n"));
        let eps = e * j.delta;
        let mut incidences = vec![Incidence::NORMAL_ELECTRON, Incidence::NORMAL_HOLE];
        if e > 1.0 {
            incidences.push(Incidence::SUPER_ELECTRON);
        }
        for inc in incidences {
            let outcome =
                andreev_outcome(inc, eps, j.delta, j.barrier).map_err(CliError::module)?;
            tables.push_str(&outcome.to_string());
        }
    }

    let v_max = *s.voltages.last().expect("at least two bias points");
    let xi = normal_coherence_length(j.material.fermi_velocity, j.temperature, &c)
        .map_err(CliError::module)?;
    report
        .section("junction")
        .text("material", &j.material.name)
        .float("delta_ev", j.delta / c.e())
        .float("barrier", j.barrier)
        .float("temperature", j.temperature)
        .float("prefactor", j.nis_prefactor)
        .int("points", points.len() as u64)
        .float("v_min", s.voltages[0])
        .float("v_max", v_max);
    report
        .section("results")
        .int(
            "subgap_points",
            points.iter().filter(|p| p.regime == Regime::SubGap).count() as u64,
        )
        .float("current_at_v_max", points.last().expect("nonempty").current)
        .float("tunnel_limit_at_v_max", nis_current_low_t(v_max, j, &c))
        .float("normal_coherence_length", xi)
        .float(
            "sns_critical_current",
            sns_current(j, FRAC_PI_2, &c).map_err(CliError::module)?,
        );
    let csv = csv_bytes(|b| write_iv_csv(&points, b))?;
    Ok(vec![
        artifact("iv.csv", csv),
        artifact("scattering.txt", tables.into_bytes()),
        finish(report),
    ])
}

fn noise(s: &NoiseScenario, seed: u64, report: &mut Report) -> Result<Vec<Artifact>, CliError> {
    let p = &s.params;
    let mut model = s.model.clone();
    model.seed = seed;
    let x = synth_flicker_series(&model, p.samples, p.fs, p.method.synthesis())
        .map_err(CliError::module)?;
    let psd = welch_psd(&x, p.fs, p.nperseg).map_err(CliError::module)?;
    let (lo, hi) = s.fit_band;
    let slope = loglog_slope(&psd, lo, hi).map_err(CliError::module)?;
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let variance = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let expected =
        model.kprime * (model.tau2 / model.tau1).ln() / 4.0 + model.white_psd * p.fs / 2.0;
    report
        .section("noise")
        .float("r0", model.r0)
        .float("tau1", model.tau1)
        .float("tau2", model.tau2)
        .float("kprime", model.kprime)
        .int("dof_coupled", model.dof_coupled)
        .float("white_psd", model.white_psd)
        .text("method", p.method.label())
        .int("samples", p.samples as u64)
        .float("fs", p.fs)
        .int("nperseg", p.nperseg as u64)
        .floats("fit_band", &[lo, hi]);
    report
        .section("results")
        .float("fitted_slope", slope)
        .float("sample_mean", mean)
        .float("sample_variance", variance)
        .float("model_variance", expected)
        .float("dof_variance_factor", dof_variance_factor(&model));
    let series = csv_bytes(|b| write_series_csv(&x, p.fs, b))?;
    let spectrum = csv_bytes(|b| write_psd_csv(&psd, b))?;
    Ok(vec![
        artifact("series.csv", series),
        artifact("psd.csv", spectrum),
        finish(report),
    ])
}

fn modulator(s: &ModulatorScenario, seed: u64, header: Report) -> Result<Vec<Artifact>, CliError> {
    let p = &s.params;
    let mut cfg = s.config.clone();
    if let Some(n) = cfg.comparator_noise.as_mut() {
        n.seed = seed;
    }
    let (u, signal) = match p.dc {
        Some(dc) => (vec![dc; p.samples], None),
        None => {
            let target = p.signal_frequency.unwrap_or(cfg.bandwidth() / 3.0);
            let amplitude = 10f64.powf(p.amplitude_dbfs / 20.0);
            let (u, f) = coherent_sine(p.samples, cfg.fs, target, amplitude);
            (u, Some(f))
        }
    };
    let trace = run_modulator(&cfg, &u).map_err(CliError::module)?;
    let y = trace.scaled_output();
    let metrics = signal
        .map(|f| analyze_spectrum(&y, cfg.fs, f, cfg.osr))
        .transpose()
        .map_err(CliError::module)?;

    let mut text = header.to_string().into_bytes();
    text.push(b'\n');
    write_report(&cfg, &trace, metrics.as_ref(), &mut text).map_err(CliError::module)?;

    let m = p.trace_samples;
    let head = TraceSet {
        u: trace.u[..m].to_vec(),
        v: trace.v[..m].to_vec(),
        states: trace.states.iter().map(|x| x[..m].to_vec()).collect(),
        saturated: trace.saturated,
        warnings: trace.warnings.clone(),
        code_scale: trace.code_scale,
    };
    let trace_csv = csv_bytes(|b| head.write_csv(b))?;
    let spectrum = csv_bytes(|b| write_spectrum_csv(&periodogram(&y, cfg.fs), b))?;
    Ok(vec![
        artifact("trace.csv", trace_csv),
        artifact("spectrum.csv", spectrum),
        artifact("report.txt", text),
    ])
}

fn comparator(s: &ComparatorScenario, report: &mut Report) -> Result<Vec<Artifact>, CliError> {
    let c = PhysicalConstants::codata();
    let p = &s.params;
    let cmp = &s.comparator;
    let edge = p.span * cmp.max_code() as f64 * cmp.b_lsb;
    let curve = transfer_curve(cmp, -edge, edge, p.points).map_err(CliError::module)?;
    let codes: BTreeSet<i64> = curve.iter().map(|t| t.decision.code).collect();
    report
        .section("comparator")
        .float("side", p.side)
        .float("bias_current", p.bias_current)
        .int("points", p.points as u64)
        .float("span", p.span);
    report
        .section("results")
        .int("n_levels", cmp.n_levels)
        .float("raw_levels", level_count_raw(p.side, p.bias_current, &c))
        .int("max_code", cmp.max_code())
        .float("b_lsb", cmp.b_lsb)
        .float("b_max", cmp.b_max)
        .float("lsb_loop_current", square_loop_current(p.side, cmp.b_lsb))
        .int("distinct_codes", codes.len() as u64)
        .int(
            "saturated_points",
            curve.iter().filter(|t| t.decision.saturated).count() as u64,
        );
    let csv = csv_bytes(|b| write_transfer_csv(&curve, b))?;
    Ok(vec![artifact("transfer.csv", csv), finish(report)])
}
