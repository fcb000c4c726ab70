//! Shared field types: wave modes, phased wave ensembles, source arrays,
//! quantization boxes and energy reports, plus the phase-sum kernel.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{invalid, Result};
use crate::scalar::{wrap_phase, Real};

/// Speed of light in the natural units used throughout.
pub const SPEED_OF_LIGHT: f64 = 1.0;

/// Reduced Planck constant in the natural units used throughout.
pub const HBAR: f64 = 1.0;

/// Relative slack used when validating `omega = c |k|` and unit polarization.
const MODE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Vec3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn from_f64(v: [f64; 3]) -> Self {
        Self::new(T::lit(v[0]), T::lit(v[1]), T::lit(v[2]))
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }

    pub fn scale(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        if n > T::zero() && n.is_finite() {
            Some(self.scale(T::one() / n))
        } else {
            None
        }
    }

    /// A unit vector orthogonal to `self` (which must be nonzero).
    pub fn any_perpendicular(self) -> Self {
        let a = [self.x.abs(), self.y.abs(), self.z.abs()];
        let helper = if a[0] <= a[1] && a[0] <= a[2] {
            Self::new(T::one(), T::zero(), T::zero())
        } else if a[1] <= a[2] {
            Self::new(T::zero(), T::one(), T::zero())
        } else {
            Self::new(T::zero(), T::zero(), T::one())
        };
        self.cross(helper)
            .normalized()
            .expect("perpendicular of a nonzero vector")
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl<T: Real> Add for Vec3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> Sub for Vec3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> Neg for Vec3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl<T: Real> Mul<T> for Vec3<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveKind {
    Plane,
    Spherical,
}

/// One linearly polarized monochromatic mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveMode<T> {
    k: Vec3<T>,
    omega: T,
    amplitude: Complex<T>,
    polarization: Vec3<T>,
    kind: WaveKind,
}

impl<T: Real> WaveMode<T> {
    /// Validates `omega = c|k| > 0` and a unit polarization orthogonal to `k`.
    pub fn new(
        k: Vec3<T>,
        omega: T,
        amplitude: Complex<T>,
        polarization: Vec3<T>,
        kind: WaveKind,
    ) -> Result<Self> {
        let tol = T::lit(MODE_TOLERANCE);
        if !k.is_finite() || !omega.is_finite() || !polarization.is_finite() {
            return Err(invalid("non-finite wave mode parameter"));
        }
        if !(omega > T::zero()) {
            return Err(invalid("omega must be positive"));
        }
        let kn = k.norm();
        let expected = T::lit(SPEED_OF_LIGHT) * kn;
        if (omega - expected).abs() > tol * omega {
            return Err(invalid(format!(
                "omega {omega} inconsistent with c|k| = {expected}"
            )));
        }
        if (polarization.norm() - T::one()).abs() > tol {
            return Err(invalid("polarization must be a unit vector"));
        }
        if polarization.dot(k).abs() > tol * kn {
            return Err(invalid("polarization must be orthogonal to k"));
        }
        if !amplitude.re.is_finite() || !amplitude.im.is_finite() {
            return Err(invalid("non-finite amplitude"));
        }
        Ok(Self {
            k,
            omega,
            amplitude,
            polarization,
            kind,
        })
    }

    /// Plane wave with `omega = c|k|` and an automatically chosen polarization.
    pub fn plane(k: Vec3<T>, amplitude: Complex<T>) -> Result<Self> {
        if k.normalized().is_none() {
            return Err(invalid("wave vector must be nonzero"));
        }
        let omega = T::lit(SPEED_OF_LIGHT) * k.norm();
        Self::new(k, omega, amplitude, k.any_perpendicular(), WaveKind::Plane)
    }

    pub fn with_kind(mut self, kind: WaveKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn k(&self) -> Vec3<T> {
        self.k
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn amplitude(&self) -> Complex<T> {
        self.amplitude
    }

    pub fn polarization(&self) -> Vec3<T> {
        self.polarization
    }

    pub fn kind(&self) -> WaveKind {
        self.kind
    }

    pub fn wavelength(&self) -> T {
        T::two_pi() / self.k.norm()
    }
}

/// `N` copies of one mode distinguished only by their phases.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasedWaveSet<T> {
    mode: WaveMode<T>,
    phases: Vec<T>,
}

impl<T: Real> PhasedWaveSet<T> {
    pub fn new(mode: WaveMode<T>, phases: Vec<T>) -> Result<Self> {
        if phases.is_empty() {
            return Err(invalid("a wave set needs at least one phase"));
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(invalid("phases must be finite"));
        }
        let phases = phases.into_iter().map(wrap_phase).collect();
        Ok(Self { mode, phases })
    }

    /// Phases `0, step, 2 step, ...` for `n` waves.
    pub fn ramp(mode: WaveMode<T>, n: usize, step: T) -> Result<Self> {
        Self::new(mode, (0..n).map(|i| step * T::from_count(i)).collect())
    }

    pub fn mode(&self) -> &WaveMode<T> {
        &self.mode
    }

    pub fn phases(&self) -> &[T] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }
}

/// Result of [`phase_sum`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSum<T> {
    pub sum: Complex<T>,
    pub magnitude_sq: T,
}

/// `S = Σ e^{iφ_n}` together with `|S|²`.
pub fn phase_sum<T: Real>(phases: &[T]) -> Result<PhaseSum<T>> {
    if phases.is_empty() {
        return Err(invalid("phase list is empty"));
    }
    let sum = phases
        .iter()
        .fold(Complex::new(T::zero(), T::zero()), |acc, &p| {
            acc + Complex::cis(p)
        });
    Ok(PhaseSum {
        sum,
        magnitude_sq: sum.norm_sqr(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum PhaseProfile<T> {
    Uniform(T),
    /// Linear ramp: source `i` gets phase `i * step`.
    Ramp(T),
    List(Vec<T>),
}

/// Point sources with individual phases, emitting at one wavelength.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceArray<T> {
    positions: Vec<Vec3<T>>,
    phases: Vec<T>,
    wavelength: T,
    spacing: Option<T>,
}

impl<T: Real> SourceArray<T> {
    pub fn new(positions: Vec<Vec3<T>>, phases: Vec<T>, wavelength: T) -> Result<Self> {
        if positions.is_empty() {
            return Err(invalid("a source array needs at least one source"));
        }
        if positions.len() != phases.len() {
            return Err(invalid(format!(
                "{} positions but {} phases",
                positions.len(),
                phases.len()
            )));
        }
        if !(wavelength > T::zero()) || !wavelength.is_finite() {
            return Err(invalid("wavelength must be positive"));
        }
        if positions.iter().any(|p| !p.is_finite()) || phases.iter().any(|p| !p.is_finite()) {
            return Err(invalid("non-finite source position or phase"));
        }
        for (i, a) in positions.iter().enumerate() {
            for b in &positions[i + 1..] {
                if (*a - *b).norm() == T::zero() {
                    return Err(invalid("source positions must be distinct"));
                }
            }
        }
        let spacing = uniform_collinear_gap(&positions);
        Ok(Self {
            positions,
            phases: phases.into_iter().map(wrap_phase).collect(),
            wavelength,
            spacing,
        })
    }

    pub fn positions(&self) -> &[Vec3<T>] {
        &self.positions
    }

    pub fn phases(&self) -> &[T] {
        &self.phases
    }

    pub fn wavelength(&self) -> T {
        self.wavelength
    }

    /// Uniform gap for collinear equally spaced arrays, `None` otherwise.
    pub fn spacing(&self) -> Option<T> {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Largest distance between any two sources.
    pub fn extent(&self) -> T {
        let mut best = T::zero();
        for (i, a) in self.positions.iter().enumerate() {
            for b in &self.positions[i + 1..] {
                best = best.max((*a - *b).norm());
            }
        }
        best
    }

    pub fn with_wavelength(&self, wavelength: T) -> Result<Self> {
        if !(wavelength > T::zero()) || !wavelength.is_finite() {
            return Err(invalid("wavelength must be positive"));
        }
        Ok(Self {
            wavelength,
            ..self.clone()
        })
    }

    /// Moves source `i` along x by `offsets[i]`, keeping phases and wavelength.
    pub fn displaced_along_x(&self, offsets: &[T]) -> Result<Self> {
        if offsets.len() != self.len() {
            return Err(invalid("one offset per source is required"));
        }
        let positions = self
            .positions
            .iter()
            .zip(offsets)
            .map(|(p, &d)| Vec3::new(p.x + d, p.y, p.z))
            .collect();
        Self::new(positions, self.phases.clone(), self.wavelength)
    }
}

fn uniform_collinear_gap<T: Real>(positions: &[Vec3<T>]) -> Option<T> {
    if positions.len() < 2 {
        return None;
    }
    let gap = (positions[1] - positions[0]).norm();
    let dir = (positions[1] - positions[0]).normalized()?;
    let tol = T::lit(1e-9) * gap.max(T::one());
    for w in positions.windows(2) {
        let d = w[1] - w[0];
        if (d.norm() - gap).abs() > tol || d.cross(dir).norm() > tol || d.dot(dir) <= T::zero() {
            return None;
        }
    }
    Some(gap)
}

/// `n` collinear sources along x, centered on the origin, separated by `spacing`.
pub fn make_linear_array<T: Real>(
    n: usize,
    spacing: T,
    wavelength: T,
    profile: PhaseProfile<T>,
) -> Result<SourceArray<T>> {
    if n == 0 {
        return Err(invalid("source count must be at least 1"));
    }
    if !(spacing > T::zero()) || !spacing.is_finite() {
        return Err(invalid("spacing must be positive"));
    }
    if !(wavelength > T::zero()) || !wavelength.is_finite() {
        return Err(invalid("wavelength must be positive"));
    }
    let half = T::from_count(n - 1) / T::lit(2.0);
    let positions = (0..n)
        .map(|i| Vec3::new((T::from_count(i) - half) * spacing, T::zero(), T::zero()))
        .collect();
    let phases = match profile {
        PhaseProfile::Uniform(p) => vec![p; n],
        PhaseProfile::Ramp(step) => (0..n).map(|i| step * T::from_count(i)).collect(),
        PhaseProfile::List(list) => {
            if list.len() != n {
                return Err(invalid(format!(
                    "phase list has {} entries for {n} sources",
                    list.len()
                )));
            }
            list
        }
    };
    let mut array = SourceArray::new(positions, phases, wavelength)?;
    if n >= 2 {
        array.spacing = Some(spacing);
    }
    Ok(array)
}

/// Rectangular quantization box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxVolume<T> {
    lengths: Vec3<T>,
    center: Vec3<T>,
}

impl<T: Real> BoxVolume<T> {
    pub fn new(lengths: Vec3<T>, center: Vec3<T>) -> Result<Self> {
        let l = lengths.to_array();
        if l.iter().any(|&x| !(x > T::zero()) || !x.is_finite()) {
            return Err(invalid("box lengths must be positive and finite"));
        }
        if !center.is_finite() {
            return Err(invalid("box center must be finite"));
        }
        Ok(Self { lengths, center })
    }

    pub fn centered(lengths: Vec3<T>) -> Result<Self> {
        Self::new(lengths, Vec3::zero())
    }

    pub fn cube(edge: T) -> Result<Self> {
        Self::centered(Vec3::new(edge, edge, edge))
    }

    pub fn lengths(&self) -> Vec3<T> {
        self.lengths
    }

    pub fn center(&self) -> Vec3<T> {
        self.center
    }

    pub fn volume(&self) -> T {
        self.lengths.x * self.lengths.y * self.lengths.z
    }

    pub fn max_length(&self) -> T {
        self.lengths.x.max(self.lengths.y).max(self.lengths.z)
    }
}

/// Diagonal / cross-correlation split of an interference energy.
///
/// `vacuum_diagonal` and `vacuum_cross` hold the zero-point parts already
/// included in `diagonal` and `cross`; they are zero for classical fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport<T> {
    pub diagonal: T,
    pub cross: T,
    pub total: T,
    /// `total / diagonal`, i.e. total over `N` times the single-wave unit.
    pub enhancement: T,
    pub vacuum_diagonal: T,
    pub vacuum_cross: T,
}

impl<T: Real> EnergyReport<T> {
    pub fn new(diagonal: T, cross: T) -> Self {
        Self::with_vacuum(diagonal, cross, T::zero(), T::zero())
    }

    pub fn with_vacuum(diagonal: T, cross: T, vacuum_diagonal: T, vacuum_cross: T) -> Self {
        let total = diagonal + cross;
        let enhancement = if diagonal > T::zero() {
            total / diagonal
        } else {
            T::zero()
        };
        Self {
            diagonal,
            cross,
            total,
            enhancement,
            vacuum_diagonal,
            vacuum_cross,
        }
    }

    /// Vacuum-subtracted total.
    pub fn photon_total(&self) -> T {
        self.total - self.vacuum_diagonal - self.vacuum_cross
    }

    pub fn photon_cross(&self) -> T {
        self.cross - self.vacuum_cross
    }

    /// `total ≥ 0` up to `1e-9 · diagonal`.
    pub fn is_nonnegative(&self) -> bool {
        self.total >= -T::lit(1e-9) * self.diagonal.abs()
    }
}
