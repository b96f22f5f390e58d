//! Exact GL₂(ℤ)-isomorphism testing for integral binary quadratic forms via
//! Conway's topograph, applied to symmetrized Seifert forms of a
//! four-parameter family of surface pairs.

pub mod error;
pub mod forms;
pub mod render;
pub mod scan;
pub mod seifert;
pub mod topograph;

pub use error::{FormError, ScanError, SeifertError, TopographError};
pub use forms::{
    bounded_isomorphism_search, gauss_class_key, gauss_reduce_definite, neighbor_value,
    representation_census, BinaryQuadraticForm, UnimodularMatrix, VertexTriple,
};
pub use render::{render_topograph, render_topograph_with, TopographTree};
pub use scan::{
    emit_grid, emit_panel, scan, scan_square, split_by_type, CellOutcome, GridFormat, OrbitCache,
    Provenance, ScanGrid, ScanOptions, TypePanel,
};
pub use seifert::{
    alexander_coefficient, bracket_reduce, compute_rs, distinguishable, lemma_bounds,
    normalize_params, orbit_key, oriented_pair_distinct, parabola_alexander_trivial, rho,
    seifert_forms, seifert_matrices, tau, thm_main_bound, ExactRational, OrbitKey,
    SeifertMatrixPair, SeifertParams,
};
pub use topograph::{
    classify_by_discriminant, descend, invariant, invariant_with, reduce_lake_adjacent,
    trace_river, Descent, PredictedType, RiverOutcome, RiverState, TopographConfig,
    TopographInvariant, TopographKind,
};
