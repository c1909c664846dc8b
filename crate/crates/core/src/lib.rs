//! Order-k supersymmetric quantum mechanics built from a generalized
//! Weyl-Heisenberg algebra.
//!
//! The crate constructs explicit truncated matrix representations of the
//! graded ladder algebra, assembles the supercharges and the hierarchy of k
//! isospectral sector Hamiltonians, and verifies the defining superalgebra
//! together with the translational and cyclic shape-invariance conditions.
//! A finite-difference one-dimensional eigensolver provides an independent
//! numerical cross-check of every explicit potential family.

pub mod algebra;
pub mod cyclic;
pub mod error;
pub mod linalg;
pub mod report;
pub mod schrodinger;
pub mod susy;
pub mod translational;

pub use algebra::{
    build_rep, interior_projector, projectors, seeded_positive_gaps, structure_f,
    verify_wk_relations, AlgebraRep, GradedSpace, StructureSpec,
};
pub use cyclic::{
    circular_shift, closed_form_structure, cs_potential, cyclic_eigenvalue, cyclic_flow,
    dft_coeffs, inverse_dft, restricted_spectrum_check, verify_cyclic_identities,
    CsPotentialModel, CyclicParams, DftCoeffs, RestrictedSpace,
};
pub use error::{Error, Result};
pub use report::{RelationCheck, RelationReport};
pub use schrodinger::{
    crosscheck_family, cs_shift_check, fd_eigenvalues, fd_eigenvalues_sampled,
    shape_shift_check, Calibration, CalibrationMode, CrossCheckFamily, CrossCheckResult,
    FdOperator, Grid1D,
};
pub use susy::{
    build_hamiltonian, build_supercharges, build_supercharges_relabelled, hierarchy_spectra,
    sector_symbol, verify_fsusy, HierarchyReport, SectorSpectrum, SuperchargePair,
    SusyHamiltonian,
};
pub use translational::{
    classify_spectrum, linear_f, potential_value, sample_potential, sector_shift_check,
    si_energies, translational_flow, verify_translational_si, LinearParams, PotentialFamily,
    PotentialModel, ShapeFlow, SpectrumClass,
};
