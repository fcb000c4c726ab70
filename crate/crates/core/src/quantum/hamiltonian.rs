//! Single-mode interference Hamiltonian of `N` phase-labelled waves sharing
//! one ladder-operator pair, plus the two-photon energy it predicts.

use num_complex::Complex;

use crate::classical::classical_energy;
use crate::error::{invalid, Error, Result};
use crate::field::{phase_sum, BoxVolume, EnergyReport, PhasedWaveSet, Vec3, WaveMode, HBAR};
use crate::quantum::operator::Operator;
use crate::quantum::space::{build_operators, FockSpace};
use crate::quantum::state::QuantumState;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn value<T: Real>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }
}

/// Commutator assumed between ladder operators carrying different phase labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CommutatorConvention {
    /// `[a_n, a†_m] = 1`.
    #[default]
    Canonical,
    /// `[a_n, a†_m] = ±e^{i(φ_n − φ_m)}`, which makes every vacuum term real.
    Phased(Sign),
}

impl std::str::FromStr for CommutatorConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" => Ok(Self::Canonical),
            "phased+" | "phased-plus" => Ok(Self::Phased(Sign::Plus)),
            "phased-" | "phased-minus" => Ok(Self::Phased(Sign::Minus)),
            other => Err(invalid(format!("unknown commutator convention {other:?}"))),
        }
    }
}

impl std::fmt::Display for CommutatorConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Canonical => "canonical",
            Self::Phased(Sign::Plus) => "phased+",
            Self::Phased(Sign::Minus) => "phased-",
        })
    }
}

/// The `Σ H_nn` and `Σ_{n≠m} H_nm` parts of the single-mode Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceTerms<T> {
    pub diagonal: Operator<T>,
    pub cross: Operator<T>,
}

impl<T: Real> InterferenceTerms<T> {
    pub fn total(&self) -> Operator<T> {
        self.diagonal.add(&self.cross)
    }
}

/// `H_nn = ħω(N̂ + ½)` and
/// `H_nm = (ħω/2)[N̂ e^{i(φ_n−φ_m)} + (N̂ + c_nm) e^{i(φ_m−φ_n)}]`,
/// where `c_nm` is the commutator value of the chosen convention.
pub fn interference_terms<T: Real>(
    phases: &[T],
    omega: T,
    space: &FockSpace,
    convention: CommutatorConvention,
) -> Result<InterferenceTerms<T>> {
    if phases.is_empty() {
        return Err(invalid("at least one wave phase is required"));
    }
    if space.mode_count() != 1 {
        return Err(Error::ModeCountMismatch {
            expected: 1,
            found: space.mode_count(),
        });
    }
    if !(omega > T::zero()) {
        return Err(invalid("omega must be positive"));
    }
    let number = build_operators::<T>(space, 0)?.number;
    let identity = Operator::identity(space.dimension());
    let hw = T::lit(HBAR) * omega;
    let half = T::lit(0.5);

    let single = number.add_scaled(&identity, Complex::new(half, T::zero())).scaled_real(hw);
    let mut diagonal = Operator::zeros(space.dimension());
    for _ in phases {
        diagonal = diagonal.add(&single);
    }

    let commutator = |n: usize, m: usize| -> Complex<T> {
        match convention {
            CommutatorConvention::Canonical => Complex::new(T::one(), T::zero()),
            CommutatorConvention::Phased(sign) => Complex::cis(phases[n] - phases[m]) * sign.value::<T>(),
        }
    };

    // H_nm and H_mn are accumulated together so conjugate phases cancel exactly
    let mut cross = Operator::zeros(space.dimension());
    let h = Complex::new(hw * half, T::zero());
    for n in 0..phases.len() {
        for m in n + 1..phases.len() {
            let fwd = Complex::cis(phases[n] - phases[m]);
            let back = Complex::cis(phases[m] - phases[n]);
            let number_coeff = (fwd + back) + (back + fwd);
            let vacuum_coeff = commutator(n, m) * back + commutator(m, n) * fwd;
            let pair = number
                .scaled(number_coeff * h)
                .add_scaled(&identity, vacuum_coeff * h);
            cross = cross.add(&pair);
        }
    }
    Ok(InterferenceTerms { diagonal, cross })
}

pub fn single_mode_hamiltonian<T: Real>(
    phases: &[T],
    omega: T,
    space: &FockSpace,
    convention: CommutatorConvention,
) -> Result<Operator<T>> {
    Ok(interference_terms(phases, omega, space, convention)?.total())
}

/// Bound on `|Im⟨ψ|H|ψ⟩|` relative to `‖H‖`.
pub const IMAGINARY_RESIDUE_TOLERANCE: f64 = 1e-10;

/// `Re ⟨ψ|H|ψ⟩`, rejecting results with a non-negligible imaginary part.
pub fn expectation_energy<T: Real>(state: &QuantumState<T>, hamiltonian: &Operator<T>) -> Result<T> {
    if state.space().dimension() != hamiltonian.dim() {
        return Err(Error::DimensionMismatch {
            expected: hamiltonian.dim(),
            found: state.space().dimension(),
        });
    }
    let z = hamiltonian.expectation(state.amplitudes())?;
    let allowed = T::lit(IMAGINARY_RESIDUE_TOLERANCE) * hamiltonian.norm_inf().max(T::min_positive_value());
    if z.im.abs() > allowed {
        return Err(Error::NonHermitian {
            residue: z.im.abs().to_f64().unwrap_or(f64::NAN),
            allowed: allowed.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(z.re)
}

/// Diagonal / cross split of `⟨H⟩` with the vacuum parts recorded alongside.
pub fn single_mode_energy<T: Real>(
    state: &QuantumState<T>,
    phases: &[T],
    omega: T,
    convention: CommutatorConvention,
) -> Result<EnergyReport<T>> {
    let terms = interference_terms(phases, omega, state.space(), convention)?;
    let vacuum = QuantumState::vacuum(state.space());
    Ok(EnergyReport::with_vacuum(
        expectation_energy(state, &terms.diagonal)?,
        expectation_energy(state, &terms.cross)?,
        expectation_energy(&vacuum, &terms.diagonal)?,
        expectation_energy(&vacuum, &terms.cross)?,
    ))
}

/// `|S|² / N`.
pub fn enhancement_factor<T: Real>(phases: &[T]) -> Result<T> {
    let s = phase_sum(phases)?;
    Ok(s.magnitude_sq / T::from_count(phases.len()))
}

/// Below this both enhancement factors count as zero.
const SHARED_ZERO: f64 = 1e-12;

/// Relative gap between the quantum enhancement on `|n⟩` (normalized by
/// `N ħω (n + ½)`) and the classical enhancement of the same phases.
pub fn classical_limit_check<T: Real>(n: usize, phases: &[T]) -> Result<T> {
    if n < 1 {
        return Err(invalid("occupation must be at least 1"));
    }
    let omega = T::one();
    let space = FockSpace::single_mode(n + 1)?;
    let h = single_mode_hamiltonian(phases, omega, &space, CommutatorConvention::Canonical)?;
    let energy = expectation_energy(&QuantumState::fock(&space, &[n])?, &h)?;
    let unit = T::lit(HBAR) * omega * (T::from_count(n) + T::lit(0.5));
    let quantum = energy / (T::from_count(phases.len()) * unit);

    let mode = WaveMode::plane(Vec3::new(T::zero(), T::zero(), T::one()), Complex::new(T::one(), T::zero()))?;
    let waves = PhasedWaveSet::new(mode, phases.to_vec())?;
    let classical = classical_energy(&waves, &BoxVolume::cube(T::one())?).enhancement;

    let zero = T::lit(SHARED_ZERO);
    if classical.abs() < zero {
        return Ok(if quantum.abs() < zero { T::zero() } else { T::infinity() });
    }
    Ok((quantum - classical).abs() / classical)
}

/// Two-photon energy split into the photon part and the zero-point part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiphotonEnergy<T> {
    /// Vacuum-subtracted energy, `2ħω (1 + Re(I e^{iΔφ}))`.
    pub photon: T,
    /// Zero-point contribution of the same two-wave Hamiltonian.
    pub vacuum: T,
    pub total: T,
}

/// Energy of two phase-correlated photons whose cross term is weighted by the
/// spatial mode overlap `I` (`|I| ≤ 1`). `delta_phi` is `φ₁ − φ₂`; `I` itself
/// should carry no source phase.
pub fn biphoton_energy<T: Real>(delta_phi: T, overlap: Complex<T>, omega: T) -> Result<BiphotonEnergy<T>> {
    let mag = overlap.norm();
    if !mag.is_finite() || mag > T::one() + T::lit(1e-12) {
        return Err(Error::InvalidOverlap(mag.to_f64().unwrap_or(f64::NAN)));
    }
    if !(omega > T::zero()) {
        return Err(invalid("omega must be positive"));
    }
    let hw = T::lit(HBAR) * omega;
    let weight = T::one() + (overlap * Complex::cis(delta_phi)).re;
    let photon = T::lit(2.0) * hw * weight;
    let vacuum = hw * weight;
    Ok(BiphotonEnergy {
        photon,
        vacuum,
        total: photon + vacuum,
    })
}
