//! Dispatch of a resolved configuration to the simulation library.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use num_complex::Complex;

use interfield::classical::{
    classical_energy, field_energy_grid, single_wave_energy, transmission_spectrum, DetectorGeometry, DetectorGrid,
    SpectrumCurve, DEFAULT_ARC_SAMPLES, DEFAULT_HEMISPHERE_SAMPLES, DEFAULT_RADIUS_FACTOR,
};
use interfield::experiments::{
    dicke_scaling_check, find_resonances, run_sweep, settings_for, DickeRegime, FarFieldRegime, Parameter, Setting,
    SweepSpec, Target,
};
use interfield::field::{make_linear_array, BoxVolume, EnergyReport, PhaseProfile, PhasedWaveSet, Vec3, WaveMode, HBAR};
use interfield::multimode::{
    overlap_envelope, overlap_integral, overlap_nonzero_condition, volume_product, wavepacket_energy,
    within_volume_bound, ModePair, WavepacketComponent, WavepacketSpectrum,
};
use interfield::quantum::{biphoton_energy, single_mode_energy, CommutatorConvention, FockSpace, QuantumState};

use crate::config::{RunConfig, Value};
use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Num(f64),
}

/// Tabular result with its metadata block.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub meta: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Output {
    fn report(rows: Vec<(String, f64)>) -> Self {
        Self {
            meta: BTreeMap::new(),
            columns: vec!["quantity".into(), "value".into()],
            rows: rows
                .into_iter()
                .map(|(k, v)| vec![Cell::Text(k), Cell::Num(v)])
                .collect(),
        }
    }

    fn curve(curve: &SpectrumCurve<f64>, scale: f64) -> Self {
        let rows = (0..curve.len())
            .map(|i| {
                vec![
                    Cell::Num(curve.parameters[i]),
                    Cell::Num(curve.power[i] * scale),
                    Cell::Num(curve.enhancement[i]),
                ]
            })
            .collect();
        Self {
            meta: curve.metadata.clone(),
            columns: vec![curve.parameter_name.clone(), "power".into(), "enhancement".into()],
            rows,
        }
    }
}

fn energy_rows(r: &EnergyReport<f64>, scale: f64, with_vacuum: bool) -> Vec<(String, f64)> {
    let mut rows = vec![
        ("diagonal".to_string(), r.diagonal * scale),
        ("cross".to_string(), r.cross * scale),
        ("total".to_string(), r.total * scale),
        ("enhancement".to_string(), r.enhancement),
    ];
    if with_vacuum {
        rows.extend([
            ("vacuum_diagonal".to_string(), r.vacuum_diagonal * scale),
            ("vacuum_cross".to_string(), r.vacuum_cross * scale),
            ("photon_total".to_string(), r.photon_total() * scale),
            ("photon_cross".to_string(), r.photon_cross() * scale),
        ]);
    }
    rows
}

fn vec3(v: [f64; 3]) -> Vec3<f64> {
    Vec3::from_f64(v)
}

fn mismatch(key: &str, value: String, expected: &'static str) -> CliError {
    CliError::Type {
        key: key.to_string(),
        value,
        expected,
    }
}

/// Explicit `phases`, otherwise `n_waves` phases stepped by `delta_phi`.
fn phase_list(cfg: &RunConfig) -> Vec<f64> {
    match cfg.floats("phases") {
        Some(p) => p.to_vec(),
        None => {
            let step = cfg.float("delta_phi").unwrap_or(0.0);
            (0..cfg.count("n_waves").unwrap_or(0)).map(|i| i as f64 * step).collect()
        }
    }
}

pub fn execute(cfg: &RunConfig) -> Result<Output> {
    let mut out = match cfg.subcommand {
        "classical" => classical(cfg)?,
        "quantum" => quantum(cfg)?,
        "overlap" => overlap(cfg)?,
        "biphoton" => biphoton(cfg)?,
        "wavepacket" => wavepacket(cfg)?,
        "sweep" => sweep(cfg)?,
        "dicke" => dicke(cfg)?,
        "spectrum" => spectrum(cfg)?,
        other => return Err(CliError::Usage(format!("unknown subcommand {other}"))),
    };
    out.meta.extend(cfg.echo());
    out.meta.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    Ok(out)
}

fn classical(cfg: &RunConfig) -> Result<Output> {
    let amplitude = Complex::new(cfg.float("amplitude").unwrap_or(1.0), 0.0);
    let mode = WaveMode::plane(vec3(cfg.vec3("k").unwrap_or([0.0, 0.0, 1.0])), amplitude)?;
    let volume = BoxVolume::centered(vec3(cfg.vec3("box").unwrap_or([1.0; 3])))?;
    let waves = PhasedWaveSet::new(mode, phase_list(cfg))?;
    let s = cfg.energy_scale;
    let r = classical_energy(&waves, &volume);
    let mut rows = energy_rows(&r, s, false);
    rows.push(("single_wave".into(), single_wave_energy(&mode, &volume) * s));
    let mut meta = BTreeMap::new();
    if let Some(m) = cfg.count("grid") {
        let g = field_energy_grid(&waves, &volume, [m; 3])?;
        rows.push(("grid_energy".into(), g.energy * s));
        rows.push(("grid_closed_form".into(), classical_energy(&waves, &g.volume).total * s));
        let l = g.volume.lengths();
        meta.insert("result.grid_box".into(), format!("{:.16e},{:.16e},{:.16e}", l.x, l.y, l.z));
        meta.insert("result.grid_adjusted".into(), g.adjusted.to_string());
    }
    let mut out = Output::report(rows);
    out.meta = meta;
    Ok(out)
}

fn quantum(cfg: &RunConfig) -> Result<Output> {
    let omega = cfg.float("omega").unwrap_or(1.0);
    let convention: CommutatorConvention = cfg.text("convention").unwrap_or("canonical").parse()?;
    let space = FockSpace::single_mode(cfg.n_max)?;
    let state = match (cfg.count("n"), cfg.floats("alpha")) {
        (Some(n), _) => QuantumState::fock(&space, &[n])?,
        (None, Some(&[re, im])) => QuantumState::coherent(&space, &[Complex::new(re, im)])?,
        (None, Some(other)) => {
            return Err(mismatch(
                "alpha",
                format!("{other:?}"),
                "two comma-separated numbers re,im",
            ))
        }
        (None, None) => return Err(CliError::Missing(vec!["n".into()])),
    };
    let r = single_mode_energy(&state, &phase_list(cfg), omega, convention)?;
    let mut out = Output::report(energy_rows(&r, cfg.energy_scale, true));
    out.meta.insert("result.tail_mass".into(), format!("{:.16e}", state.tail_mass()));
    Ok(out)
}

fn overlap(cfg: &RunConfig) -> Result<Output> {
    let k1 = vec3(cfg.vec3("k1").unwrap_or([0.0, 0.0, 1.0]));
    let dk = vec3(cfg.vec3("dk").unwrap_or([0.0; 3]));
    let one = Complex::new(1.0, 0.0);
    let volume = BoxVolume::new(vec3(cfg.vec3("box").unwrap_or([1.0; 3])), vec3(cfg.vec3("center").unwrap_or([0.0; 3])))?;
    let pair = ModePair::new(
        WaveMode::plane(k1, one)?,
        WaveMode::plane(k1 + dk, one)?,
        cfg.float("phi1").unwrap_or(0.0),
        cfg.float("phi2").unwrap_or(0.0),
        volume,
    )?;
    let i = overlap_integral(&pair);
    let mut out = Output::report(vec![
        ("overlap_re".into(), i.re),
        ("overlap_im".into(), i.im),
        ("overlap_abs".into(), i.norm()),
        ("envelope".into(), overlap_envelope(&pair)),
        ("volume_product".into(), volume_product(&pair)),
    ]);
    out.meta.insert("result.regime".into(), overlap_nonzero_condition(&pair).to_string());
    out.meta.insert("result.within_volume_bound".into(), within_volume_bound(&pair).to_string());
    Ok(out)
}

fn biphoton(cfg: &RunConfig) -> Result<Output> {
    let omega = cfg.float("omega").unwrap_or(1.0);
    let overlap = Complex::new(cfg.float("overlap").unwrap_or(1.0), cfg.float("overlap_im").unwrap_or(0.0));
    let b = biphoton_energy(cfg.float("delta_phi").unwrap_or(0.0), overlap, omega)?;
    let s = cfg.energy_scale;
    Ok(Output::report(vec![
        ("photon".into(), b.photon * s),
        ("vacuum".into(), b.vacuum * s),
        ("total".into(), b.total * s),
        ("enhancement".into(), b.photon / (2.0 * HBAR * omega)),
    ]))
}

fn wavepacket(cfg: &RunConfig) -> Result<Output> {
    let k = cfg.floats("k").unwrap_or(&[]);
    let per_component = |key: &str, fill: f64| -> Result<Vec<f64>> {
        match cfg.floats(key) {
            None => Ok(vec![fill; k.len()]),
            Some(v) if v.len() == k.len() => Ok(v.to_vec()),
            Some(v) => Err(mismatch(key, format!("{v:?}"), "one entry per wavenumber")),
        }
    };
    let amplitudes = per_component("amplitudes", 1.0)?;
    let phases = per_component("phases", 0.0)?;
    let components = k
        .iter()
        .zip(amplitudes.iter().zip(&phases))
        .map(|(&wavenumber, (&a, &phase))| WavepacketComponent {
            wavenumber,
            amplitude: Complex::new(a, 0.0),
            phase,
        })
        .collect();
    let spectrum = WavepacketSpectrum::new(
        vec3(cfg.vec3("direction").unwrap_or([0.0, 0.0, 1.0])),
        components,
        BoxVolume::centered(vec3(cfg.vec3("box").unwrap_or([1.0; 3])))?,
    )?;
    let r = wavepacket_energy(&spectrum)?;
    Ok(Output::report(energy_rows(&r, cfg.energy_scale, false)))
}

fn sweep(cfg: &RunConfig) -> Result<Output> {
    let target: Target = cfg.text("target").unwrap_or_default().parse()?;
    let parameter: Parameter = cfg.text("parameter").unwrap_or_default().parse()?;
    let (required, optional) = settings_for(target, parameter)?;
    let mut spec = SweepSpec::new(
        target,
        parameter,
        cfg.float("start").unwrap_or(0.0),
        cfg.float("stop").unwrap_or(0.0),
        cfg.count("steps").unwrap_or(0),
    )
    .with_seed(cfg.seed);
    if let Some(Value::Pairs(pairs)) = cfg.get("fixed") {
        for (k, v) in pairs {
            if !required.contains(&k.as_str()) && !optional.contains(&k.as_str()) {
                return Err(CliError::Unknown(format!("fixed.{k}")));
            }
            let setting = match v.parse::<f64>() {
                Ok(x) => Setting::Number(x),
                Err(_) => Setting::Text(v.clone()),
            };
            spec.fixed.insert(k.clone(), setting);
        }
    }
    if let Some(samples) = cfg.samples {
        if optional.contains(&"samples") {
            spec.fixed.entry("samples".into()).or_insert(Setting::Number(samples as f64));
        }
    }
    Ok(Output::curve(&run_sweep(&spec)?, cfg.energy_scale))
}

fn geometry(cfg: &RunConfig) -> Result<DetectorGeometry> {
    Ok(cfg.text("geometry").unwrap_or("arc").parse()?)
}

fn default_samples(g: DetectorGeometry) -> usize {
    match g {
        DetectorGeometry::Arc => DEFAULT_ARC_SAMPLES,
        DetectorGeometry::Hemisphere => DEFAULT_HEMISPHERE_SAMPLES,
    }
}

fn dicke(cfg: &RunConfig) -> Result<Output> {
    let n_values = match cfg.get("n_values") {
        Some(Value::Counts(v)) => v.clone(),
        _ => return Err(CliError::Missing(vec!["n_values".into()])),
    };
    let regime = match cfg.text("regime") {
        Some("farfield") => {
            let g = geometry(cfg)?;
            let mut r = FarFieldRegime::new(cfg.float("ratio").unwrap_or(0.01));
            r.jitter = cfg.float("jitter").unwrap_or(0.0);
            r.geometry = g;
            r.samples = cfg.samples.unwrap_or(default_samples(g));
            r.seed = cfg.seed;
            DickeRegime::FarField(r)
        }
        _ => DickeRegime::ClosedForm,
    };
    let fit = dicke_scaling_check(&n_values, &regime)?;
    let s = cfg.energy_scale;
    let mut rows = vec![
        ("exponent".to_string(), fit.exponent),
        ("prefactor".to_string(), fit.prefactor * s),
        ("r_squared".to_string(), fit.r_squared),
    ];
    rows.extend(fit.points.iter().map(|(n, e)| (format!("energy_n{n}"), e * s)));
    Ok(Output::report(rows))
}

fn spectrum(cfg: &RunConfig) -> Result<Output> {
    let n = cfg.count("sources").unwrap_or(1);
    let spacing = cfg.float("spacing").unwrap_or(1.0);
    let (lo, hi) = (cfg.float("lambda_min").unwrap_or(1.0), cfg.float("lambda_max").unwrap_or(1.0));
    let g = cfg.text("geometry").unwrap_or("hemisphere").parse::<DetectorGeometry>()?;
    let array = make_linear_array(n, spacing, lo, PhaseProfile::Ramp(cfg.float("phase_step").unwrap_or(0.0)))?;
    let radius = cfg
        .float("radius")
        .unwrap_or(DEFAULT_RADIUS_FACTOR * array.extent().max(hi));
    let detector = DetectorGrid::new(radius, g, cfg.samples.unwrap_or(default_samples(g)), FRAC_PI_2)?;
    let curve = transmission_spectrum(&array, (lo, hi), cfg.count("steps").unwrap_or(200), &detector)?;
    let resonances = find_resonances(&curve);
    let mut out = Output::curve(&curve, cfg.energy_scale);
    let join = |f: &dyn Fn(&interfield::experiments::Resonance<f64>) -> f64| {
        resonances
            .iter()
            .map(|r| format!("{:.16e}", f(r)))
            .collect::<Vec<_>>()
            .join(",")
    };
    out.meta.insert("resonances.count".into(), resonances.len().to_string());
    out.meta.insert("resonances.wavelength".into(), join(&|r| r.parameter));
    out.meta.insert("resonances.enhancement".into(), join(&|r| r.enhancement));
    Ok(out)
}
