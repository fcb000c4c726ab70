//! Interference energy of superposed electromagnetic waves.
//!
//! The classical model sums phased plane or spherical waves inside a box and
//! splits the energy into diagonal and cross terms. The quantum model builds
//! the same Hamiltonian as an operator on a truncated Fock space. Multimode
//! overlaps, wavepackets and far-field point-source arrays sit on top.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix the scalar for the common cases. Units are natural:
//! `c = ħ = 1`.

// Negated comparisons below are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod error;
pub mod experiments;
pub mod field;
pub mod multimode;
pub mod quantum;
pub mod scalar;

pub use classical::{
    classical_energy, farfield_power, field_energy_grid, transmission_spectrum, DetectorGeometry, DetectorGrid,
    FarFieldPower, SpectrumCurve,
};
pub use error::{Error, Result};
pub use field::{
    make_linear_array, BoxVolume, EnergyReport, PhaseProfile, PhasedWaveSet, SourceArray, Vec3, WaveKind, WaveMode,
    HBAR, SPEED_OF_LIGHT,
};
pub use multimode::{
    multimode_energy, overlap_integral, overlap_nonzero_condition, wavepacket_energy, ModePair, OverlapRegime,
    WavepacketComponent, WavepacketSpectrum,
};
pub use quantum::{
    biphoton_energy, single_mode_energy, single_mode_hamiltonian, CommutatorConvention, FockSpace, Operator,
    QuantumState,
};
pub use scalar::Real;

pub type Vec3f64 = Vec3<f64>;
pub type WaveMode64 = WaveMode<f64>;
pub type PhasedWaveSet64 = PhasedWaveSet<f64>;
pub type SourceArray64 = SourceArray<f64>;
pub type BoxVolume64 = BoxVolume<f64>;
pub type EnergyReport64 = EnergyReport<f64>;
pub type Operator64 = Operator<f64>;
pub type QuantumState64 = QuantumState<f64>;
pub type ModePair64 = ModePair<f64>;
pub type DetectorGrid64 = DetectorGrid<f64>;
pub type SpectrumCurve64 = SpectrumCurve<f64>;

pub type Vec3f32 = Vec3<f32>;
pub type WaveMode32 = WaveMode<f32>;
pub type PhasedWaveSet32 = PhasedWaveSet<f32>;
pub type SourceArray32 = SourceArray<f32>;
pub type BoxVolume32 = BoxVolume<f32>;
pub type EnergyReport32 = EnergyReport<f32>;
pub type Operator32 = Operator<f32>;
pub type QuantumState32 = QuantumState<f32>;
pub type ModePair32 = ModePair<f32>;
pub type DetectorGrid32 = DetectorGrid<f32>;
pub type SpectrumCurve32 = SpectrumCurve<f32>;
