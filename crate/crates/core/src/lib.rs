//! Exact computation of character spaces, fixed subspaces and the
//! Sigma/Omega invariants of group extensions, with R-infinity certificates
//! and finite Cayley-graph probes.

pub mod charsphere;
pub mod exact;
pub mod extension;
pub mod group;
pub mod invariants;
pub mod linalg;
pub mod probe;
pub mod rinfty;
