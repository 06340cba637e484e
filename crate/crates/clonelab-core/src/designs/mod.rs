//! Unitary ensembles and their moments.
//!
//! Explicit ensembles are stored phase-canonical: each element is rescaled so
//! its first nonzero entry (row-major) is real and positive, and duplicates are
//! detected on entries rounded to a `1e-9` grid. Every quantity computed here
//! pairs `U` with `Ū` or `U†`, so the choice of phase never shows up in a result.
//!
//! Haar moments are never computed in closed form. Exact designs (the Clifford
//! groups on one and two qubits) stand in for them, and sampled Haar ensembles
//! give Monte-Carlo cross-checks.
//!
//! Only non-adaptive, single-query uses of a design are exercised downstream;
//! adaptive access would need the teleportation compiler, which is not built.

mod ensemble;
mod moments;

pub use ensemble::{
    clifford_ensemble, haar_sample, pauli_ensemble, phase_canonicalize, EnsembleSource, UnitaryEnsemble,
    MAX_HAAR_DIM,
};
pub use moments::{
    frame_potential, frame_potential_of, mixed_moment_tensor, moment_operator, verify_mixed_design_identity,
    FramePotential, MixedIdentityReport, MomentSpec, MAX_MOMENT_DIM,
};
