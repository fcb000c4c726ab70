//! Truncated-Fock-space operator engine for the quantized interference Hamiltonian.

mod hamiltonian;
mod operator;
mod space;
mod state;

pub use hamiltonian::{
    biphoton_energy, classical_limit_check, enhancement_factor, expectation_energy, interference_terms,
    single_mode_energy, single_mode_hamiltonian, BiphotonEnergy, CommutatorConvention, InterferenceTerms, Sign,
    IMAGINARY_RESIDUE_TOLERANCE,
};
pub use operator::Operator;
pub use space::{build_operators, ladder_destroy, FockSpace, ModeOperators, DEFAULT_N_MAX, MAX_DIMENSION};
pub use state::{QuantumState, StateKind, COHERENT_TAIL_LIMIT};
