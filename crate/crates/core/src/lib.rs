//! Simulation and classification of nonadiabatic holonomic two-qubit gates
//! for a pair of lambda-type atoms in an optical cavity.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`dfs`] builds the two-atom laser Hamiltonian and projects it onto the
//!    five-dimensional decoherence-free subspace, yielding a tripod-shaped
//!    effective Hamiltonian.
//! 2. [`evolution`] diagonalizes the tripod, propagates the subspace in
//!    closed form and by a spectral-exponential oracle, verifies cyclicity
//!    and parallel transport, and extracts the 4x4 holonomic gate.
//! 3. [`analysis`] classifies a two-qubit gate: Makhlin local invariants,
//!    entangling power (closed form and Monte-Carlo estimate), Weyl-chamber
//!    coordinates, and a perfect-entangler oracle.
//! 4. [`design`] inverts the classification: laser parameters for a target
//!    entangling power, Weyl point, or drive pattern, plus parameter sweeps.

pub mod analysis;
pub mod design;
pub mod dfs;
pub mod error;
pub mod evolution;
pub mod pulses;

pub use analysis::{
    classify_gate, entangling_power_closed, entangling_power_mc, is_perfect_entangler,
    makhlin_invariants, max_product_concurrence, weyl_c_closed, weyl_coordinates,
    ClassificationReport, GateInvariants, McEstimate, TableRowMatch, WeylPoint,
};
pub use design::{
    design_for_entangling_power, design_for_weyl_c, design_perfect_entangler,
    sweep_entangling_power, table_row_pulses, SweepGrid, SweepRecord, TableRowParams,
};
pub use dfs::{
    build_laser_hamiltonian, dfs_projector, effective_hamiltonian_closed_form, project_to_dfs,
    DfsBasis, EffectiveHamiltonian, TwoAtomOperator,
};
pub use error::{Error, Result};
pub use evolution::{
    check_cyclicity, check_parallel_transport, cyclic_projector, eigensystem,
    gate_matrix_closed_form, holonomy_gate, holonomy_run_time, propagator_closed_form,
    propagator_oracle, EigenSystem, HolonomicGate, Propagator,
};
pub use pulses::{
    from_angular, to_angular, zeno_regime_check, AngularParams, PulseSet, ZenoRegime, ZenoReport,
};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;

/// Operator on the full two-atom product space (basis `dfs::TWO_ATOM_LABELS`).
pub type Mat9 = nalgebra::SMatrix<C64, 9, 9>;
/// Operator on the 5-dimensional decoherence-free subspace
/// (ordered basis |00>, |01>, |10>, |11>, |alpha>).
pub type Mat5 = nalgebra::SMatrix<C64, 5, 5>;
/// Operator on the two-qubit computational space (|00>, |01>, |10>, |11>).
pub type Mat4 = nalgebra::SMatrix<C64, 4, 4>;
/// State vector on the full two-atom product space.
pub type Vec9 = nalgebra::SVector<C64, 9>;
/// State vector on the decoherence-free subspace.
pub type Vec5 = nalgebra::SVector<C64, 5>;

pub(crate) fn frobenius_hermiticity_deviation<const N: usize>(
    m: &nalgebra::SMatrix<C64, N, N>,
) -> f64 {
    (m - m.adjoint()).norm()
}

pub(crate) fn frobenius_unitarity_deviation<const N: usize>(
    m: &nalgebra::SMatrix<C64, N, N>,
) -> f64 {
    (m.adjoint() * m - nalgebra::SMatrix::<C64, N, N>::identity()).norm()
}
