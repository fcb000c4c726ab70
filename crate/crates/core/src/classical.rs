//! Classical interference Hamiltonian, a grid-quadrature field-energy oracle,
//! and the far-field model of point-source arrays.

use std::collections::BTreeMap;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::field::{
    phase_sum, BoxVolume, EnergyReport, PhasedWaveSet, SourceArray, Vec3, WaveKind, WaveMode,
    SPEED_OF_LIGHT,
};
use crate::scalar::Real;

/// Sources exclude a ball of radius `wavelength / SOURCE_EXCLUSION_DIVISOR`.
pub const SOURCE_EXCLUSION_DIVISOR: f64 = 10.0;

/// Detectors must sit at least this many multiples of `max(λ, extent)` away.
pub const FAR_FIELD_FACTOR: f64 = 100.0;

/// Radius multiple used when a detector is sized automatically.
pub const DEFAULT_RADIUS_FACTOR: f64 = 1000.0;

pub const MIN_DETECTOR_SAMPLES: usize = 64;
pub const DEFAULT_HEMISPHERE_SAMPLES: usize = 256;
pub const DEFAULT_ARC_SAMPLES: usize = 2048;
pub const MIN_GRID_RESOLUTION: usize = 8;

/// Energy of a single wave of `mode` filling `volume`: `ω² |a|² V / (2π c²)`.
pub fn single_wave_energy<T: Real>(mode: &WaveMode<T>, volume: &BoxVolume<T>) -> T {
    let c = T::lit(SPEED_OF_LIGHT);
    mode.omega().powi(2) * mode.amplitude().norm_sqr() * volume.volume() / (T::two_pi() * c * c)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalPair<T> {
    pub q: T,
    pub p: T,
}

/// Canonical coordinates of one wave at `position`:
/// `Q = s (a e^{iθ} + c.c.)`, `P = -iω s (a e^{iθ} - c.c.)` with
/// `θ = k·r + φ` and `s = (V / 4πc²)^{1/2}`.
///
/// Spherical modes carry the extra `1/|r|` factor, so the origin is singular for them.
pub fn canonical_coordinates<T: Real>(
    mode: &WaveMode<T>,
    phase: T,
    position: Vec3<T>,
    volume: &BoxVolume<T>,
) -> Result<CanonicalPair<T>> {
    let c = T::lit(SPEED_OF_LIGHT);
    let scale = (volume.volume() / (T::lit(2.0) * T::two_pi() * c * c)).sqrt();
    let mut x = mode.amplitude() * Complex::cis(mode.k().dot(position) + phase);
    if mode.kind() == WaveKind::Spherical {
        let r = position.norm();
        if r == T::zero() {
            return Err(Error::Singularity {
                distance: 0.0,
                exclusion: 0.0,
            });
        }
        x /= r;
    }
    let two = T::lit(2.0);
    Ok(CanonicalPair {
        q: scale * two * x.re,
        p: mode.omega() * scale * two * x.im,
    })
}

/// `½ ΣₙΣₘ (PₙPₘ + ω² QₙQₘ)` evaluated directly from the canonical
/// coordinates at `point`, split into `n = m` and `n ≠ m` terms.
pub fn hamiltonian_from_coordinates<T: Real>(
    waves: &PhasedWaveSet<T>,
    volume: &BoxVolume<T>,
    point: Vec3<T>,
) -> Result<EnergyReport<T>> {
    let mode = waves.mode();
    let w2 = mode.omega() * mode.omega();
    let coords = waves
        .phases()
        .iter()
        .map(|&phi| canonical_coordinates(mode, phi, point, volume))
        .collect::<Result<Vec<_>>>()?;
    let half = T::lit(0.5);
    let mut diagonal = T::zero();
    let mut cross = T::zero();
    for (n, a) in coords.iter().enumerate() {
        for (m, b) in coords.iter().enumerate() {
            let term = half * (a.p * b.p + w2 * a.q * b.q);
            if n == m {
                diagonal += term;
            } else {
                cross += term;
            }
        }
    }
    Ok(EnergyReport::new(diagonal, cross))
}

/// Closed-form classical interference energy: `diagonal = N E₁`,
/// `total = E₁ |S|²` with `S` the phase sum of the ensemble.
pub fn classical_energy<T: Real>(waves: &PhasedWaveSet<T>, volume: &BoxVolume<T>) -> EnergyReport<T> {
    let e1 = single_wave_energy(waves.mode(), volume);
    let s = phase_sum(waves.phases()).expect("wave sets are never empty");
    let diagonal = e1 * T::from_count(waves.len());
    let total = e1 * s.magnitude_sq;
    EnergyReport::new(diagonal, total - diagonal)
}

/// Output of the grid-quadrature energy oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridEnergy<T> {
    pub energy: T,
    /// Box that was actually integrated over.
    pub volume: BoxVolume<T>,
    /// Set when the requested box was resized to whole periods along `k`.
    pub adjusted: bool,
    /// Whether the integrated box spans whole periods along every axis with `k_i ≠ 0`.
    pub commensurate: bool,
}

/// Rounds every box edge with a nonzero wave-vector component to the nearest
/// nonzero whole number of periods `2π/|k_i|`.
pub fn commensurate_box<T: Real>(k: Vec3<T>, volume: &BoxVolume<T>) -> (BoxVolume<T>, bool) {
    let mut lengths = volume.lengths().to_array();
    let mut adjusted = false;
    for (l, kc) in lengths.iter_mut().zip(k.to_array()) {
        let kc = kc.abs();
        if kc * *l < T::lit(1e-12) {
            continue;
        }
        let period = T::two_pi() / kc;
        let count = (*l / period).round().max(T::one());
        let rounded = count * period;
        if (rounded - *l).abs() > T::lit(1e-12) * *l {
            adjusted = true;
        }
        *l = rounded;
    }
    let b = BoxVolume::new(Vec3::new(lengths[0], lengths[1], lengths[2]), volume.center())
        .expect("rounded lengths stay positive");
    (b, adjusted)
}

fn is_commensurate<T: Real>(k: Vec3<T>, volume: &BoxVolume<T>) -> bool {
    let (_, adjusted) = commensurate_box(k, volume);
    !adjusted
}

/// Midpoint-rule integral of `(E² + H²)/8π` over a box resized to be commensurate with `k`.
pub fn field_energy_grid<T: Real>(
    waves: &PhasedWaveSet<T>,
    volume: &BoxVolume<T>,
    resolution: [usize; 3],
) -> Result<GridEnergy<T>> {
    let (b, adjusted) = commensurate_box(waves.mode().k(), volume);
    let energy = integrate_field_energy(waves, &b, resolution)?;
    Ok(GridEnergy {
        energy,
        volume: b,
        adjusted,
        commensurate: true,
    })
}

/// Same integral over the box exactly as given; `commensurate` flags whether
/// the result is free of box-placement dependence.
pub fn field_energy_grid_unadjusted<T: Real>(
    waves: &PhasedWaveSet<T>,
    volume: &BoxVolume<T>,
    resolution: [usize; 3],
) -> Result<GridEnergy<T>> {
    let energy = integrate_field_energy(waves, volume, resolution)?;
    Ok(GridEnergy {
        energy,
        volume: *volume,
        adjusted: false,
        commensurate: is_commensurate(waves.mode().k(), volume),
    })
}

fn integrate_field_energy<T: Real>(
    waves: &PhasedWaveSet<T>,
    volume: &BoxVolume<T>,
    resolution: [usize; 3],
) -> Result<T> {
    if resolution.iter().any(|&r| r < MIN_GRID_RESOLUTION) {
        return Err(invalid(format!(
            "grid resolution must be at least {MIN_GRID_RESOLUTION} per axis"
        )));
    }
    let mode = waves.mode();
    if mode.kind() != WaveKind::Plane {
        return Err(invalid("grid energy is defined for plane waves only"));
    }
    let c = T::lit(SPEED_OF_LIGHT);
    let k = mode.k();
    let e_dir = mode.polarization();
    let h_dir = k.cross(e_dir);
    let omega = mode.omega();
    let a = mode.amplitude();
    let phases = waves.phases();

    let l = volume.lengths();
    let corner = volume.center() - l.scale(T::lit(0.5));
    let h = Vec3::new(
        l.x / T::from_count(resolution[0]),
        l.y / T::from_count(resolution[1]),
        l.z / T::from_count(resolution[2]),
    );
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let eight_pi = T::lit(4.0) * T::two_pi();

    let slabs: Vec<T> = (0..resolution[0])
        .into_par_iter()
        .map(|ix| {
            let x = corner.x + (T::from_count(ix) + half) * h.x;
            let mut slab = T::zero();
            for iy in 0..resolution[1] {
                let y = corner.y + (T::from_count(iy) + half) * h.y;
                for iz in 0..resolution[2] {
                    let z = corner.z + (T::from_count(iz) + half) * h.z;
                    let r = Vec3::new(x, y, z);
                    let phase_r = k.dot(r);
                    // A = ê Σ (a e^{iθ} + c.c.), time dependence e^{-iωt}
                    let mut im_sum = T::zero();
                    for &phi in phases {
                        im_sum += (a * Complex::cis(phase_r + phi)).im;
                    }
                    let e_field = e_dir.scale(-two * omega * im_sum / c);
                    let h_field = h_dir.scale(-two * im_sum);
                    slab += (e_field.dot(e_field) + h_field.dot(h_field)) / eight_pi;
                }
            }
            slab
        })
        .collect();
    let dv = h.x * h.y * h.z;
    Ok(slabs.into_iter().fold(T::zero(), |acc, s| acc + s) * dv)
}

/// `e^{i(k r + φ)} / r` with `r = |observation − source|`.
///
/// Points within `λ/10` of the source are rejected.
pub fn spherical_field_amplitude<T: Real>(
    source: Vec3<T>,
    phase: T,
    observation: Vec3<T>,
    k: T,
) -> Result<Complex<T>> {
    if !(k > T::zero()) {
        return Err(invalid("wavenumber must be positive"));
    }
    let r = (observation - source).norm();
    let exclusion = T::two_pi() / k / T::lit(SOURCE_EXCLUSION_DIVISOR);
    if r <= exclusion {
        return Err(Error::Singularity {
            distance: r.to_f64().unwrap_or(f64::NAN),
            exclusion: exclusion.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(Complex::cis(k * r + phase) / r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetectorGeometry {
    /// Forward hemisphere about +z on a `(θ, φ)` product grid.
    Hemisphere,
    /// Arc in the x–z plane, `θ ∈ [−θ_max, θ_max]` measured from +z.
    Arc,
}

impl std::str::FromStr for DetectorGeometry {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hemisphere" => Ok(Self::Hemisphere),
            "arc" => Ok(Self::Arc),
            other => Err(invalid(format!("unknown detector geometry {other:?}"))),
        }
    }
}

impl std::fmt::Display for DetectorGeometry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Hemisphere => "hemisphere",
            Self::Arc => "arc",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorGrid<T> {
    radius: T,
    geometry: DetectorGeometry,
    samples: usize,
    angular_extent: T,
}

impl<T: Real> DetectorGrid<T> {
    /// `angular_extent` is the polar half-angle `θ_max`, at most `π/2`.
    pub fn new(radius: T, geometry: DetectorGeometry, samples: usize, angular_extent: T) -> Result<Self> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(invalid("detector radius must be positive"));
        }
        if samples < MIN_DETECTOR_SAMPLES {
            return Err(invalid(format!(
                "detector needs at least {MIN_DETECTOR_SAMPLES} samples per axis"
            )));
        }
        if !(angular_extent > T::zero()) || angular_extent > T::FRAC_PI_2() {
            return Err(invalid("angular extent must lie in (0, π/2]"));
        }
        Ok(Self {
            radius,
            geometry,
            samples,
            angular_extent,
        })
    }

    pub fn hemisphere(radius: T) -> Result<Self> {
        Self::new(radius, DetectorGeometry::Hemisphere, DEFAULT_HEMISPHERE_SAMPLES, T::FRAC_PI_2())
    }

    pub fn arc(radius: T, samples: usize) -> Result<Self> {
        Self::new(radius, DetectorGeometry::Arc, samples, T::FRAC_PI_2())
    }

    /// Detector at `DEFAULT_RADIUS_FACTOR · max(λ, extent)` from the origin.
    pub fn sized_for(array: &SourceArray<T>, geometry: DetectorGeometry, samples: usize) -> Result<Self> {
        let radius = T::lit(DEFAULT_RADIUS_FACTOR) * array.wavelength().max(array.extent());
        Self::new(radius, geometry, samples, T::FRAC_PI_2())
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn geometry(&self) -> DetectorGeometry {
        self.geometry
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn angular_extent(&self) -> T {
        self.angular_extent
    }

    pub fn with_samples(&self, samples: usize) -> Result<Self> {
        Self::new(self.radius, self.geometry, samples, self.angular_extent)
    }

    /// Quadrature nodes as `(position, weight)` rows, one row per polar sample.
    fn rows(&self) -> Vec<Vec<(Vec3<T>, T)>> {
        let m = T::from_count(self.samples);
        let half = T::lit(0.5);
        let r = self.radius;
        match self.geometry {
            DetectorGeometry::Arc => {
                let h = T::lit(2.0) * self.angular_extent / m;
                (0..self.samples)
                    .map(|i| {
                        let theta = -self.angular_extent + (T::from_count(i) + half) * h;
                        vec![(Vec3::new(r * theta.sin(), T::zero(), r * theta.cos()), r * h)]
                    })
                    .collect()
            }
            DetectorGeometry::Hemisphere => {
                let ht = self.angular_extent / m;
                let hp = T::two_pi() / m;
                (0..self.samples)
                    .map(|i| {
                        let theta = (T::from_count(i) + half) * ht;
                        let (st, ct) = theta.sin_cos();
                        let w = r * r * st * ht * hp;
                        (0..self.samples)
                            .map(|j| {
                                let phi = (T::from_count(j) + half) * hp;
                                let (sp, cp) = phi.sin_cos();
                                (Vec3::new(r * st * cp, r * st * sp, r * ct), w)
                            })
                            .collect()
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarFieldPower<T> {
    pub power: T,
    /// `power / (N · power of one source at the origin)` on the same detector.
    pub enhancement: T,
}

/// Minimum detector radius accepted for `array`.
pub fn far_field_threshold<T: Real>(array: &SourceArray<T>) -> T {
    T::lit(FAR_FIELD_FACTOR) * array.wavelength().max(array.extent())
}

/// Power collected on the detector from the coherent superposition of the
/// array's spherical waves, with its enhancement over incoherent addition.
pub fn farfield_power<T: Real>(array: &SourceArray<T>, detector: &DetectorGrid<T>) -> Result<FarFieldPower<T>> {
    let required = far_field_threshold(array);
    if detector.radius() < required {
        return Err(Error::FarFieldViolation {
            radius: detector.radius().to_f64().unwrap_or(f64::NAN),
            required: required.to_f64().unwrap_or(f64::NAN),
        });
    }
    let k = T::two_pi() / array.wavelength();
    let rows = detector.rows();
    let power = collect_power(&rows, array.positions(), array.phases(), k)?;
    let single = collect_power(&rows, &[Vec3::zero()], &[T::zero()], k)?;
    let n = T::from_count(array.len());
    Ok(FarFieldPower {
        power,
        enhancement: power / (n * single),
    })
}

fn collect_power<T: Real>(
    rows: &[Vec<(Vec3<T>, T)>],
    positions: &[Vec3<T>],
    phases: &[T],
    k: T,
) -> Result<T> {
    let partial: Vec<Result<T>> = rows
        .par_iter()
        .map(|row| {
            let mut acc = T::zero();
            for &(obs, w) in row {
                let mut field = Complex::new(T::zero(), T::zero());
                for (&src, &phi) in positions.iter().zip(phases) {
                    field += spherical_field_amplitude(src, phi, obs, k)?;
                }
                acc += field.norm_sqr() * w;
            }
            Ok(acc)
        })
        .collect();
    let mut total = T::zero();
    for p in partial {
        total += p?;
    }
    Ok(total)
}

/// Sampled power and enhancement versus a swept parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumCurve<T> {
    pub parameter_name: String,
    pub parameters: Vec<T>,
    pub power: Vec<T>,
    pub enhancement: Vec<T>,
    pub metadata: BTreeMap<String, String>,
}

impl<T: Real> SpectrumCurve<T> {
    pub fn new(
        parameter_name: impl Into<String>,
        parameters: Vec<T>,
        power: Vec<T>,
        enhancement: Vec<T>,
    ) -> Result<Self> {
        if parameters.len() != power.len() || parameters.len() != enhancement.len() {
            return Err(invalid("curve columns must have equal length"));
        }
        if parameters.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("curve parameters must be strictly increasing"));
        }
        Ok(Self {
            parameter_name: parameter_name.into(),
            parameters,
            power,
            enhancement,
            metadata: BTreeMap::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.parameters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parameters.is_empty()
    }
}

/// `steps` evenly spaced values from `start` to `stop` inclusive.
pub fn linspace<T: Real>(start: T, stop: T, steps: usize) -> Vec<T> {
    if steps == 1 {
        return vec![start];
    }
    let span = stop - start;
    let last = T::from_count(steps - 1);
    (0..steps)
        .map(|i| {
            if i == steps - 1 {
                stop
            } else {
                start + span * T::from_count(i) / last
            }
        })
        .collect()
}

/// Enhancement versus wavelength for a fixed source geometry.
pub fn transmission_spectrum<T: Real>(
    array: &SourceArray<T>,
    wavelength_range: (T, T),
    steps: usize,
    detector: &DetectorGrid<T>,
) -> Result<SpectrumCurve<T>> {
    let (lo, hi) = wavelength_range;
    if !(lo > T::zero()) || !(hi > lo) {
        return Err(invalid("wavelength range must be positive and increasing"));
    }
    if steps < 2 {
        return Err(invalid("a spectrum needs at least 2 steps"));
    }
    let lambdas = linspace(lo, hi, steps);
    let points: Vec<Result<FarFieldPower<T>>> = lambdas
        .par_iter()
        .map(|&l| farfield_power(&array.with_wavelength(l)?, detector))
        .collect();
    let mut power = Vec::with_capacity(steps);
    let mut enhancement = Vec::with_capacity(steps);
    for p in points {
        let p = p?;
        power.push(p.power);
        enhancement.push(p.enhancement);
    }
    let mut curve = SpectrumCurve::new("wavelength", lambdas, power, enhancement)?;
    curve
        .metadata
        .insert("detector.geometry".into(), detector.geometry().to_string());
    curve
        .metadata
        .insert("detector.samples".into(), detector.samples().to_string());
    curve
        .metadata
        .insert("detector.radius".into(), format!("{:.16e}", detector.radius()));
    Ok(curve)
}
