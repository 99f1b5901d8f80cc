//! Energy-based entanglement detection for small spin systems.
//!
//! The central idea: the lowest energy any separable (product or mixture of
//! product) state can reach is bounded below by the minimum of the classical
//! objective obtained when every Pauli operator is replaced by a real unit
//! 3-vector.  Measuring or computing an energy below that bound therefore
//! certifies entanglement.  This crate builds the Hamiltonians (Heisenberg,
//! XY/Ising, collective-spin, hard-core Bose-Hubbard), computes the separable
//! bounds both in closed form and by direct classical minimization, constructs
//! thermal states, and evaluates witnesses and two-qubit entanglement measures
//! on the results.
//!
//! Everything is exact diagonalization on dense matrices; the intended scale
//! is a dozen spins on a workstation, not the thermodynamic limit.

pub mod classical;
pub mod entanglement;
pub mod lattice;
pub mod models;
pub mod numkit;
pub mod thermal;
