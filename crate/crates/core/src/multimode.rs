//! Exchange integrals between distinct modes, the two-mode quantum
//! Hamiltonian built on them, and the energy of a collinear wavepacket.

use num_complex::Complex;

use crate::classical::single_wave_energy;
use crate::error::{invalid, Error, Result};
use crate::field::{BoxVolume, EnergyReport, Vec3, WaveMode, HBAR};
use crate::quantum::{build_operators, expectation_energy, FockSpace, Operator, QuantumState};
use crate::scalar::{sinc, Real};

/// `|Δk| · max(L)` below which two modes count as the same mode.
pub const SAME_MODE_TOLERANCE: f64 = 1e-9;

/// An overlap whose guaranteed envelope is below this is classified as vanishing.
pub const VANISHING_OVERLAP: f64 = 0.1;

/// Two modes with their source phases and the box the exchange integral runs over.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModePair<T> {
    pub mode1: WaveMode<T>,
    pub mode2: WaveMode<T>,
    pub phi1: T,
    pub phi2: T,
    pub volume: BoxVolume<T>,
}

impl<T: Real> ModePair<T> {
    pub fn new(mode1: WaveMode<T>, mode2: WaveMode<T>, phi1: T, phi2: T, volume: BoxVolume<T>) -> Result<Self> {
        if !phi1.is_finite() || !phi2.is_finite() {
            return Err(invalid("phases must be finite"));
        }
        Ok(Self {
            mode1,
            mode2,
            phi1,
            phi2,
            volume,
        })
    }

    /// `k₂ − k₁`.
    pub fn delta_k(&self) -> Vec3<T> {
        self.mode2.k() - self.mode1.k()
    }

    /// Extra phase `Δk · center` picked up when the box is not centered on the origin.
    pub fn center_phase(&self) -> T {
        self.delta_k().dot(self.volume.center())
    }

    /// Same pair with both source phases set to zero.
    pub fn without_phases(&self) -> Self {
        Self {
            phi1: T::zero(),
            phi2: T::zero(),
            ..*self
        }
    }
}

/// `I = e^{i(φ₂−φ₁)} (1/V) ∫ e^{i(k₂−k₁)·r} dV = e^{i(Δφ + Δk·c)} Πᵢ sinc(Δkᵢ Lᵢ / 2)`.
pub fn overlap_integral<T: Real>(pair: &ModePair<T>) -> Complex<T> {
    let dk = pair.delta_k().to_array();
    let l = pair.volume.lengths().to_array();
    let half = T::lit(0.5);
    let envelope = dk
        .iter()
        .zip(&l)
        .fold(T::one(), |acc, (&d, &len)| acc * sinc(d * len * half));
    Complex::cis(pair.phi2 - pair.phi1 + pair.center_phase()) * envelope
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapRegime {
    /// `k₁ ≈ k₂`.
    SameMode,
    /// Distinct modes whose overlap is not guaranteed to be small.
    SmallVolume,
    /// `|I| < VANISHING_OVERLAP` is guaranteed by the sinc envelope.
    Vanishing,
}

impl std::fmt::Display for OverlapRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::SameMode => "same_mode",
            Self::SmallVolume => "small_volume",
            Self::Vanishing => "vanishing",
        })
    }
}

/// Per-axis product `Π |Δkᵢ| Lᵢ` over the nonzero components of `Δk`.
pub fn volume_product<T: Real>(pair: &ModePair<T>) -> T {
    pair.delta_k()
        .to_array()
        .iter()
        .zip(pair.volume.lengths().to_array())
        .filter(|(d, _)| **d != T::zero())
        .fold(T::one(), |acc, (&d, l)| acc * d.abs() * l)
}

/// Whether the box satisfies `V ≤ 1 / Π|Δkᵢ|` on the nonzero components.
pub fn within_volume_bound<T: Real>(pair: &ModePair<T>) -> bool {
    volume_product(pair) <= T::one()
}

/// Upper bound `Πᵢ min(1, 2 / (|Δkᵢ| Lᵢ))` on `|I|`.
pub fn overlap_envelope<T: Real>(pair: &ModePair<T>) -> T {
    let two = T::lit(2.0);
    pair.delta_k()
        .to_array()
        .iter()
        .zip(pair.volume.lengths().to_array())
        .fold(T::one(), |acc, (&d, l)| {
            let x = d.abs() * l;
            acc * if x > two { two / x } else { T::one() }
        })
}

pub fn overlap_nonzero_condition<T: Real>(pair: &ModePair<T>) -> OverlapRegime {
    if pair.delta_k().norm() * pair.volume.max_length() < T::lit(SAME_MODE_TOLERANCE) {
        OverlapRegime::SameMode
    } else if overlap_envelope(pair) < T::lit(VANISHING_OVERLAP) {
        OverlapRegime::Vanishing
    } else {
        OverlapRegime::SmallVolume
    }
}

/// Exchange block `p/2 · [I X + I*(X† + c) + I* X† + I (X + c)]` with
/// `X = a†₁a₂`, where `c` is the value of `[a₁, a†₂]`.
pub fn exchange_block<T: Real>(
    x: &Operator<T>,
    x_dag: &Operator<T>,
    commutator: Complex<T>,
    overlap: Complex<T>,
    prefactor: T,
) -> Operator<T> {
    let identity = Operator::identity(x.dim());
    let h = Complex::new(prefactor * T::lit(0.5), T::zero());
    let i = overlap;
    let ic = overlap.conj();
    x.scaled((i + i) * h)
        .add_scaled(x_dag, (ic + ic) * h)
        .add_scaled(&identity, (commutator * ic + commutator * i) * h)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeTerms<T> {
    pub diagonal: Operator<T>,
    pub cross: Operator<T>,
    pub overlap: Complex<T>,
}

impl<T: Real> TwoModeTerms<T> {
    pub fn total(&self) -> Operator<T> {
        self.diagonal.add(&self.cross)
    }
}

pub fn two_mode_terms<T: Real>(pair: &ModePair<T>, space: &FockSpace) -> Result<TwoModeTerms<T>> {
    if space.mode_count() != 2 {
        return Err(Error::ModeCountMismatch {
            expected: 2,
            found: space.mode_count(),
        });
    }
    let m1 = build_operators::<T>(space, 0)?;
    let m2 = build_operators::<T>(space, 1)?;
    let identity = Operator::identity(space.dimension());
    let hbar = T::lit(HBAR);
    let (w1, w2) = (pair.mode1.omega(), pair.mode2.omega());
    let half = Complex::new(T::lit(0.5), T::zero());
    let diagonal = m1
        .number
        .add_scaled(&identity, half)
        .scaled_real(hbar * w1)
        .add(&m2.number.add_scaled(&identity, half).scaled_real(hbar * w2));

    let overlap = overlap_integral(pair);
    let x = m1.create.matmul(&m2.destroy);
    let x_dag = x.adjoint();
    let cross = exchange_block(
        &x,
        &x_dag,
        Complex::new(T::one(), T::zero()),
        overlap,
        hbar * (w1 * w2).sqrt(),
    );
    Ok(TwoModeTerms {
        diagonal,
        cross,
        overlap,
    })
}

/// Oscillator terms of both modes plus the four exchange terms weighted by the overlap.
pub fn two_mode_hamiltonian<T: Real>(pair: &ModePair<T>, space: &FockSpace) -> Result<Operator<T>> {
    Ok(two_mode_terms(pair, space)?.total())
}

/// Diagonal and exchange expectations; vacuum parts are recorded in the report.
pub fn multimode_energy<T: Real>(state: &QuantumState<T>, pair: &ModePair<T>) -> Result<EnergyReport<T>> {
    let terms = two_mode_terms(pair, state.space())?;
    let vacuum = QuantumState::vacuum(state.space());
    Ok(EnergyReport::with_vacuum(
        expectation_energy(state, &terms.diagonal)?,
        expectation_energy(state, &terms.cross)?,
        expectation_energy(&vacuum, &terms.diagonal)?,
        expectation_energy(&vacuum, &terms.cross)?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavepacketComponent<T> {
    pub wavenumber: T,
    pub amplitude: Complex<T>,
    pub phase: T,
}

/// Fourier components travelling along one direction.
#[derive(Debug, Clone, PartialEq)]
pub struct WavepacketSpectrum<T> {
    direction: Vec3<T>,
    components: Vec<WavepacketComponent<T>>,
    volume: BoxVolume<T>,
}

impl<T: Real> WavepacketSpectrum<T> {
    pub fn new(direction: Vec3<T>, components: Vec<WavepacketComponent<T>>, volume: BoxVolume<T>) -> Result<Self> {
        let direction = direction
            .normalized()
            .ok_or_else(|| invalid("direction must be nonzero"))?;
        if components.is_empty() {
            return Err(invalid("a wavepacket needs at least one component"));
        }
        if components.iter().any(|c| !(c.wavenumber > T::zero()) || !c.phase.is_finite()) {
            return Err(invalid("component wavenumbers must be positive"));
        }
        Ok(Self {
            direction,
            components,
            volume,
        })
    }

    /// Builds from full wave vectors, rejecting any that point elsewhere.
    pub fn from_wave_vectors(waves: &[(Vec3<T>, Complex<T>, T)], volume: BoxVolume<T>) -> Result<Self> {
        let first = waves.first().ok_or_else(|| invalid("a wavepacket needs at least one component"))?;
        let direction = first.0.normalized().ok_or_else(|| invalid("wave vectors must be nonzero"))?;
        let tol = T::lit(1e-9);
        let mut components = Vec::with_capacity(waves.len());
        for &(k, amplitude, phase) in waves {
            let n = k.norm();
            if !(n > T::zero()) || k.cross(direction).norm() > tol * n || k.dot(direction) <= T::zero() {
                return Err(Error::NonCollinear);
            }
            components.push(WavepacketComponent {
                wavenumber: n,
                amplitude,
                phase,
            });
        }
        Self::new(direction, components, volume)
    }

    pub fn direction(&self) -> Vec3<T> {
        self.direction
    }

    pub fn components(&self) -> &[WavepacketComponent<T>] {
        &self.components
    }

    pub fn volume(&self) -> &BoxVolume<T> {
        &self.volume
    }

    fn mode(&self, c: &WavepacketComponent<T>) -> Result<WaveMode<T>> {
        WaveMode::plane(self.direction.scale(c.wavenumber), c.amplitude)
    }
}

/// Classical energy of the wavepacket: single-component energies on the
/// diagonal, and for every pair `2 √(EₙEₘ) Re(e^{i(arg aₘ − arg aₙ)} Iₙₘ)`.
pub fn wavepacket_energy<T: Real>(spectrum: &WavepacketSpectrum<T>) -> Result<EnergyReport<T>> {
    let modes = spectrum
        .components
        .iter()
        .map(|c| spectrum.mode(c))
        .collect::<Result<Vec<_>>>()?;
    let energies: Vec<T> = modes.iter().map(|m| single_wave_energy(m, &spectrum.volume)).collect();
    let diagonal = energies.iter().fold(T::zero(), |a, &e| a + e);
    let mut cross = T::zero();
    let comps = &spectrum.components;
    for n in 0..comps.len() {
        for m in n + 1..comps.len() {
            let pair = ModePair::new(modes[n], modes[m], comps[n].phase, comps[m].phase, spectrum.volume)?;
            let amp_phase = comps[m].amplitude.arg() - comps[n].amplitude.arg();
            let coupling = (Complex::cis(amp_phase) * overlap_integral(&pair)).re;
            cross += T::lit(2.0) * (energies[n] * energies[m]).sqrt() * coupling;
        }
    }
    Ok(EnergyReport::new(diagonal, cross))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn mode(k: [f64; 3]) -> WaveMode<f64> {
        WaveMode::plane(Vec3::from_f64(k), Complex::new(1.0, 0.0)).unwrap()
    }

    fn pair(dk: [f64; 3], lengths: [f64; 3], dphi: f64) -> ModePair<f64> {
        let k1 = [0.0, 0.0, 5.0];
        let k2 = [k1[0] + dk[0], k1[1] + dk[1], k1[2] + dk[2]];
        ModePair::new(
            mode(k1),
            mode(k2),
            0.0,
            dphi,
            BoxVolume::centered(Vec3::from_f64(lengths)).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn overlap_examples() {
        let same = overlap_integral(&pair([0.0; 3], [1.0, 2.0, 3.0], 0.0));
        assert!((same - Complex::new(1.0, 0.0)).norm() < 1e-15);
        let full = overlap_integral(&pair([2.0 * PI, 0.0, 0.0], [1.0, 1.0, 1.0], 0.0));
        assert!(full.norm() < 1e-15);
        let half = overlap_integral(&pair([PI, 0.0, 0.0], [1.0, 1.0, 1.0], 0.0));
        assert!((half.re - 2.0 / PI).abs() < 1e-15 && half.im.abs() < 1e-15);
    }

    #[test]
    fn overlap_carries_relative_phase() {
        let i = overlap_integral(&pair([0.0; 3], [1.0; 3], 0.8));
        assert!((i - Complex::cis(0.8)).norm() < 1e-15);
    }

    #[test]
    fn classifier_examples() {
        assert_eq!(overlap_nonzero_condition(&pair([0.0; 3], [1.0; 3], 0.0)), OverlapRegime::SameMode);
        let small = pair([0.5, 0.0, 0.0], [1.0; 3], 0.0);
        assert_eq!(overlap_nonzero_condition(&small), OverlapRegime::SmallVolume);
        assert!(within_volume_bound(&small));
        assert!((overlap_integral(&small).norm() - 0.25f64.sin() / 0.25).abs() < 1e-15);
        assert!((overlap_integral(&small).norm() - 0.9896).abs() < 1e-4);
        let far = pair([100.0, 0.0, 0.0], [1.0; 3], 0.0);
        assert_eq!(overlap_nonzero_condition(&far), OverlapRegime::Vanishing);
        assert!(overlap_integral(&far).norm() <= 0.02);
        assert!(!within_volume_bound(&far));
    }

    #[test]
    fn exchange_block_with_shared_operator_reproduces_single_mode_cross_term() {
        use crate::quantum::{interference_terms, CommutatorConvention};
        let s = FockSpace::single_mode(5).unwrap();
        let number = build_operators::<f64>(&s, 0).unwrap().number;
        let block = exchange_block(&number, &number, Complex::new(1.0, 0.0), Complex::new(1.0, 0.0), 1.0);
        let single = interference_terms(&[0.4, 0.4], 1.0, &s, CommutatorConvention::Canonical).unwrap();
        assert!(block.max_abs_diff(&single.cross) < 1e-14);
    }

    #[test]
    fn two_mode_requires_two_modes() {
        let p = pair([0.0; 3], [1.0; 3], 0.0);
        assert!(matches!(
            two_mode_hamiltonian(&p, &FockSpace::single_mode(3).unwrap()),
            Err(Error::ModeCountMismatch { .. })
        ));
    }

    #[test]
    fn wavepacket_rejects_non_collinear() {
        let b = BoxVolume::cube(1.0).unwrap();
        let one = Complex::new(1.0, 0.0);
        let err = WavepacketSpectrum::from_wave_vectors(
            &[(Vec3::new(0.0, 0.0, 1.0), one, 0.0), (Vec3::new(0.0, 1.0, 1.0), one, 0.0)],
            b,
        );
        assert_eq!(err.unwrap_err(), Error::NonCollinear);
        let anti = WavepacketSpectrum::from_wave_vectors(
            &[(Vec3::new(0.0, 0.0, 1.0), one, 0.0), (Vec3::new(0.0, 0.0, -2.0), one, 0.0)],
            b,
        );
        assert_eq!(anti.unwrap_err(), Error::NonCollinear);
    }

    #[test]
    fn wavepacket_examples() {
        let b = BoxVolume::centered(Vec3::new(1.0, 1.0, 2.0)).unwrap();
        let z = Vec3::new(0.0, 0.0, 1.0);
        let comp = |k: f64, phase: f64| WavepacketComponent {
            wavenumber: k,
            amplitude: Complex::new(1.0, 0.0),
            phase,
        };
        let single = wavepacket_energy(&WavepacketSpectrum::new(z, vec![comp(3.0, 0.4)], b).unwrap()).unwrap();
        assert_eq!(single.cross, 0.0);
        assert_eq!(single.total, single.diagonal);

        let opposed = wavepacket_energy(&WavepacketSpectrum::new(z, vec![comp(3.0, 0.0), comp(3.0, PI)], b).unwrap()).unwrap();
        assert!(opposed.total.abs() < 1e-13 * opposed.diagonal);

        // (k₂ − k₁) L_z = 2π
        let apart = wavepacket_energy(&WavepacketSpectrum::new(z, vec![comp(3.0, 0.0), comp(3.0 + PI, 0.0)], b).unwrap()).unwrap();
        assert!(apart.cross.abs() < 1e-13 * apart.diagonal);
    }
}
