//! Sweeps, scaling fits and resonance detection built on the field models.

mod resonance;
pub mod rng;
mod scaling;
mod sweep;

pub use resonance::{find_resonances, Resonance, RESONANCE_PROMINENCE};
pub use rng::PhaseRng;
pub use scaling::{dicke_scaling_check, fit_power_law, DickeRegime, FarFieldRegime, ScalingFit};
pub use sweep::{run_sweep, settings_for, sweep_metadata, sweep_values, Parameter, Setting, SweepSpec, Target};
