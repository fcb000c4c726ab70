//! Parameter sweeps over the classical, quantum and far-field models.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rayon::prelude::*;

use crate::classical::{
    classical_energy, farfield_power, linspace, DetectorGeometry, DetectorGrid, SpectrumCurve,
    DEFAULT_ARC_SAMPLES, DEFAULT_HEMISPHERE_SAMPLES, DEFAULT_RADIUS_FACTOR,
};
use crate::error::{invalid, Error, Result};
use crate::experiments::rng::PhaseRng;
use crate::field::{make_linear_array, BoxVolume, PhaseProfile, PhasedWaveSet, SourceArray, Vec3, WaveMode, HBAR};
use crate::multimode::{wavepacket_energy, WavepacketComponent, WavepacketSpectrum};
use crate::quantum::{biphoton_energy, expectation_energy, single_mode_hamiltonian, CommutatorConvention, FockSpace, QuantumState, DEFAULT_N_MAX};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    ClassicalEnergy,
    QuantumEnergy,
    FarfieldPower,
    Biphoton,
    Wavepacket,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parameter {
    PhaseDelta,
    Spacing,
    Wavelength,
    SourceCount,
}

macro_rules! named_enum {
    ($ty:ident { $($variant:ident => $name:literal),+ $(,)? }) => {
        impl $ty {
            pub fn name(self) -> &'static str {
                match self { $($ty::$variant => $name),+ }
            }
        }
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok($ty::$variant),)+
                    other => Err(invalid(format!(concat!("unknown ", stringify!($ty), " {:?}"), other))),
                }
            }
        }
    };
}

named_enum!(Target {
    ClassicalEnergy => "classical_energy",
    QuantumEnergy => "quantum_energy",
    FarfieldPower => "farfield_power",
    Biphoton => "biphoton",
    Wavepacket => "wavepacket",
});

named_enum!(Parameter {
    PhaseDelta => "phase_delta",
    Spacing => "spacing",
    Wavelength => "wavelength",
    SourceCount => "source_count",
});

#[derive(Debug, Clone, PartialEq)]
pub enum Setting {
    Number(f64),
    Text(String),
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Setting::Number(x) => write!(f, "{x:.16e}"),
            Setting::Text(s) => f.write_str(s),
        }
    }
}

impl From<f64> for Setting {
    fn from(x: f64) -> Self {
        Setting::Number(x)
    }
}

impl From<&str> for Setting {
    fn from(s: &str) -> Self {
        Setting::Text(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub target: Target,
    pub parameter: Parameter,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub fixed: BTreeMap<String, Setting>,
    pub seed: u64,
}

impl SweepSpec {
    pub fn new(target: Target, parameter: Parameter, start: f64, stop: f64, steps: usize) -> Self {
        Self {
            target,
            parameter,
            start,
            stop,
            steps,
            fixed: BTreeMap::new(),
            seed: 0,
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Setting>) -> Self {
        self.fixed.insert(key.to_string(), value.into());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Fixed-setting keys a sweep accepts: `(required, optional)`.
pub fn settings_for(target: Target, parameter: Parameter) -> Result<(&'static [&'static str], &'static [&'static str])> {
    use Parameter as P;
    use Target as T;
    const FARFIELD_OPT: &[&str] = &["phase_delta", "geometry", "samples", "radius"];
    Ok(match (target, parameter) {
        (T::ClassicalEnergy, P::PhaseDelta) => (&["n_waves"], &["omega", "phase_noise"]),
        (T::ClassicalEnergy, P::SourceCount) => (&[], &["omega", "phase_delta", "phase_noise"]),
        (T::QuantumEnergy, P::PhaseDelta) => (&["n_waves", "n"], &["omega", "n_max", "convention", "phase_noise"]),
        (T::QuantumEnergy, P::SourceCount) => (&["n"], &["omega", "n_max", "convention", "phase_delta", "phase_noise"]),
        (T::FarfieldPower, P::Spacing) => (&["source_count", "wavelength"], FARFIELD_OPT),
        (T::FarfieldPower, P::Wavelength) => (&["source_count", "spacing"], FARFIELD_OPT),
        (T::FarfieldPower, P::SourceCount) => (&["spacing", "wavelength"], FARFIELD_OPT),
        (T::FarfieldPower, P::PhaseDelta) => (&["source_count", "spacing", "wavelength"], &["geometry", "samples", "radius"]),
        (T::Biphoton, P::PhaseDelta) => (&["overlap"], &["overlap_im", "omega"]),
        (T::Wavepacket, P::PhaseDelta) => (&["k1", "k2", "length"], &[]),
        (t, p) => return Err(invalid(format!("target {t} cannot be swept over {p}"))),
    })
}

struct Fixed<'a>(&'a BTreeMap<String, Setting>);

impl Fixed<'_> {
    fn num(&self, key: &str, default: f64) -> Result<f64> {
        match self.0.get(key) {
            None => Ok(default),
            Some(Setting::Number(x)) => Ok(*x),
            Some(Setting::Text(t)) => Err(invalid(format!("setting {key} must be numeric, got {t:?}"))),
        }
    }

    fn required(&self, key: &str) -> Result<f64> {
        self.num(key, f64::NAN)
    }

    fn count(&self, key: &str, default: usize) -> Result<usize> {
        let x = self.num(key, default as f64)?;
        if x < 0.0 || x.fract() != 0.0 || !x.is_finite() {
            return Err(invalid(format!("setting {key} must be a non-negative integer")));
        }
        Ok(x as usize)
    }

    fn text(&self, key: &str) -> Option<&str> {
        match self.0.get(key) {
            Some(Setting::Text(t)) => Some(t),
            _ => None,
        }
    }
}

fn validate(spec: &SweepSpec) -> Result<()> {
    let (required, optional) = settings_for(spec.target, spec.parameter)?;
    let missing: Vec<String> = required
        .iter()
        .filter(|k| !spec.fixed.contains_key(**k))
        .map(|k| k.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingSettings(missing));
    }
    let unknown: Vec<&str> = spec
        .fixed
        .keys()
        .map(String::as_str)
        .filter(|k| !required.contains(k) && !optional.contains(k))
        .collect();
    if !unknown.is_empty() {
        return Err(invalid(format!("unknown settings: {}", unknown.join(", "))));
    }
    if spec.steps < 2 {
        return Err(invalid("a sweep needs at least 2 steps"));
    }
    if !(spec.start < spec.stop) || !spec.start.is_finite() || !spec.stop.is_finite() {
        return Err(invalid("sweep range must satisfy start < stop"));
    }
    Ok(())
}

/// Parameter values of the sweep; source counts are rounded and must stay strictly increasing.
pub fn sweep_values(spec: &SweepSpec) -> Result<Vec<f64>> {
    let v = linspace(spec.start, spec.stop, spec.steps);
    if spec.parameter != Parameter::SourceCount {
        return Ok(v);
    }
    let rounded: Vec<f64> = v.iter().map(|x| x.round()).collect();
    if rounded[0] < 1.0 || rounded.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid("source-count sweep must visit distinct positive integers"));
    }
    Ok(rounded)
}

/// Evaluates the sweep target at every parameter value, in parameter order.
pub fn run_sweep(spec: &SweepSpec) -> Result<SpectrumCurve<f64>> {
    validate(spec)?;
    let values = sweep_values(spec)?;
    let fixed = Fixed(&spec.fixed);

    // draw all randomness up front so evaluation order cannot affect it
    let noise = fixed.num("phase_noise", 0.0)?;
    let max_waves = match spec.parameter {
        Parameter::SourceCount => *values.last().expect("at least two values") as usize,
        _ => fixed.count("n_waves", 1)?,
    };
    let mut rng = PhaseRng::new(spec.seed);
    let jitter: Vec<Vec<f64>> = values
        .iter()
        .map(|_| (0..max_waves).map(|_| rng.uniform_in(-noise, noise)).collect())
        .collect();

    let evaluator = Evaluator::build(spec, &fixed, &values)?;
    let results: Vec<Result<(f64, f64)>> = values
        .par_iter()
        .zip(jitter.par_iter())
        .map(|(&x, j)| evaluator.eval(x, j))
        .collect();
    let mut power = Vec::with_capacity(values.len());
    let mut enhancement = Vec::with_capacity(values.len());
    for r in results {
        let (p, e) = r?;
        power.push(p);
        enhancement.push(e);
    }
    let mut curve = SpectrumCurve::new(spec.parameter.name(), values, power, enhancement)?;
    curve.metadata = sweep_metadata(spec);
    Ok(curve)
}

pub fn sweep_metadata(spec: &SweepSpec) -> BTreeMap<String, String> {
    let mut meta = BTreeMap::new();
    meta.insert("sweep.target".into(), spec.target.to_string());
    meta.insert("sweep.parameter".into(), spec.parameter.to_string());
    meta.insert("sweep.start".into(), format!("{:.16e}", spec.start));
    meta.insert("sweep.stop".into(), format!("{:.16e}", spec.stop));
    meta.insert("sweep.steps".into(), spec.steps.to_string());
    meta.insert("sweep.seed".into(), spec.seed.to_string());
    for (k, v) in &spec.fixed {
        meta.insert(format!("sweep.fixed.{k}"), v.to_string());
    }
    meta.insert("version".into(), env!("CARGO_PKG_VERSION").to_string());
    meta
}

enum Evaluator {
    Classical {
        mode: WaveMode<f64>,
        volume: BoxVolume<f64>,
        n_waves: usize,
        delta: f64,
        parameter: Parameter,
    },
    Quantum {
        omega: f64,
        n: usize,
        n_max: usize,
        convention: CommutatorConvention,
        n_waves: usize,
        delta: f64,
        parameter: Parameter,
    },
    Farfield {
        source_count: usize,
        spacing: f64,
        wavelength: f64,
        delta: f64,
        detector: DetectorGrid<f64>,
        parameter: Parameter,
    },
    Biphoton {
        overlap: Complex<f64>,
        omega: f64,
    },
    Wavepacket {
        k1: f64,
        k2: f64,
        volume: BoxVolume<f64>,
    },
}

impl Evaluator {
    fn build(spec: &SweepSpec, fixed: &Fixed<'_>, values: &[f64]) -> Result<Self> {
        let parameter = spec.parameter;
        Ok(match spec.target {
            Target::ClassicalEnergy => {
                let omega = fixed.num("omega", 1.0)?;
                Evaluator::Classical {
                    mode: WaveMode::plane(Vec3::new(0.0, 0.0, omega), Complex::new(1.0, 0.0))?,
                    volume: BoxVolume::cube(1.0)?,
                    n_waves: fixed.count("n_waves", 1)?,
                    delta: fixed.num("phase_delta", 0.0)?,
                    parameter,
                }
            }
            Target::QuantumEnergy => {
                let n = fixed.count("n", 0)?;
                let n_max = fixed.count("n_max", DEFAULT_N_MAX)?;
                if n > n_max {
                    return Err(invalid("occupation n exceeds n_max"));
                }
                Evaluator::Quantum {
                    omega: fixed.num("omega", 1.0)?,
                    n,
                    n_max,
                    convention: fixed.text("convention").unwrap_or("canonical").parse()?,
                    n_waves: fixed.count("n_waves", 1)?,
                    delta: fixed.num("phase_delta", 0.0)?,
                    parameter,
                }
            }
            Target::FarfieldPower => {
                let geometry: DetectorGeometry = fixed.text("geometry").unwrap_or("arc").parse()?;
                let default_samples = match geometry {
                    DetectorGeometry::Arc => DEFAULT_ARC_SAMPLES,
                    DetectorGeometry::Hemisphere => DEFAULT_HEMISPHERE_SAMPLES,
                };
                let source_count = fixed.count("source_count", 1)?;
                let spacing = fixed.num("spacing", 1.0)?;
                let wavelength = fixed.num("wavelength", 1.0)?;
                // the detector is shared by every point of the sweep
                let reach = values
                    .iter()
                    .map(|&x| {
                        let (n, s, l) = match parameter {
                            Parameter::Spacing => (source_count, x, wavelength),
                            Parameter::Wavelength => (source_count, spacing, x),
                            Parameter::SourceCount => (x as usize, spacing, wavelength),
                            Parameter::PhaseDelta => (source_count, spacing, wavelength),
                        };
                        (n.saturating_sub(1) as f64 * s).max(l)
                    })
                    .fold(0.0, f64::max);
                let radius = fixed.num("radius", DEFAULT_RADIUS_FACTOR * reach)?;
                let samples = fixed.count("samples", default_samples)?;
                Evaluator::Farfield {
                    source_count,
                    spacing,
                    wavelength,
                    delta: fixed.num("phase_delta", 0.0)?,
                    detector: DetectorGrid::new(radius, geometry, samples, std::f64::consts::FRAC_PI_2)?,
                    parameter,
                }
            }
            Target::Biphoton => Evaluator::Biphoton {
                overlap: Complex::new(fixed.required("overlap")?, fixed.num("overlap_im", 0.0)?),
                omega: fixed.num("omega", 1.0)?,
            },
            Target::Wavepacket => {
                let length = fixed.required("length")?;
                Evaluator::Wavepacket {
                    k1: fixed.required("k1")?,
                    k2: fixed.required("k2")?,
                    volume: BoxVolume::centered(Vec3::new(1.0, 1.0, length))?,
                }
            }
        })
    }

    fn eval(&self, x: f64, jitter: &[f64]) -> Result<(f64, f64)> {
        match self {
            Evaluator::Classical {
                mode,
                volume,
                n_waves,
                delta,
                parameter,
            } => {
                let (n, step) = ramp(*parameter, x, *n_waves, *delta);
                let waves = PhasedWaveSet::new(*mode, noisy_ramp(n, step, jitter))?;
                let r = classical_energy(&waves, volume);
                Ok((r.total, r.enhancement))
            }
            Evaluator::Quantum {
                omega,
                n,
                n_max,
                convention,
                n_waves,
                delta,
                parameter,
            } => {
                let (count, step) = ramp(*parameter, x, *n_waves, *delta);
                let space = FockSpace::single_mode(*n_max)?;
                let phases = noisy_ramp(count, step, jitter);
                let h = single_mode_hamiltonian(&phases, *omega, &space, *convention)?;
                let e = expectation_energy(&QuantumState::fock(&space, &[*n])?, &h)?;
                let unit = count as f64 * HBAR * omega * (*n as f64 + 0.5);
                Ok((e, e / unit))
            }
            Evaluator::Farfield {
                source_count,
                spacing,
                wavelength,
                delta,
                detector,
                parameter,
            } => {
                let (n, s, l, d) = match parameter {
                    Parameter::Spacing => (*source_count, x, *wavelength, *delta),
                    Parameter::Wavelength => (*source_count, *spacing, x, *delta),
                    Parameter::SourceCount => (x as usize, *spacing, *wavelength, *delta),
                    Parameter::PhaseDelta => (*source_count, *spacing, *wavelength, x),
                };
                let array: SourceArray<f64> = make_linear_array(n, s, l, PhaseProfile::Ramp(d))?;
                let p = farfield_power(&array, detector)?;
                Ok((p.power, p.enhancement))
            }
            Evaluator::Biphoton { overlap, omega } => {
                let b = biphoton_energy(x, *overlap, *omega)?;
                Ok((b.photon, b.photon / (2.0 * HBAR * omega)))
            }
            Evaluator::Wavepacket { k1, k2, volume } => {
                let one = Complex::new(1.0, 0.0);
                let spectrum = WavepacketSpectrum::new(
                    Vec3::new(0.0, 0.0, 1.0),
                    vec![
                        WavepacketComponent { wavenumber: *k1, amplitude: one, phase: 0.0 },
                        WavepacketComponent { wavenumber: *k2, amplitude: one, phase: x },
                    ],
                    *volume,
                )?;
                let r = wavepacket_energy(&spectrum)?;
                Ok((r.total, r.enhancement))
            }
        }
    }
}

/// `(wave count, phase step)` for a sweep point.
fn ramp(parameter: Parameter, x: f64, n_waves: usize, delta: f64) -> (usize, f64) {
    match parameter {
        Parameter::SourceCount => (x as usize, delta),
        _ => (n_waves, x),
    }
}

fn noisy_ramp(n: usize, step: f64, jitter: &[f64]) -> Vec<f64> {
    (0..n).map(|i| i as f64 * step + jitter.get(i).copied().unwrap_or(0.0)).collect()
}
