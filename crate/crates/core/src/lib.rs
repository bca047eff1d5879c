pub mod error;
pub mod feasibility;
pub mod fixtures;
pub mod hardy;
pub mod io;
pub mod krylov;
pub mod matrix;
pub mod par;
pub mod placement;
pub mod report;
pub mod sampling;
pub mod spectral;

pub use error::{Error, Result};
pub use feasibility::{
    analyze, brute_force_feasible, check_diagonalizable, check_fixed_L, check_jordan, check_scheme, minimal_uniform_l,
    rational_form_counterexample, Budgets, FeasibilityReport, SamplingScheme,
};
pub use krylov::annihilator_degree;
pub use matrix::{default_rank_tol, rank_with_tol, ComplexMatrix, Tolerances, C64};
pub use placement::{greedy_placement, minimal_placement_exhaustive, PlacementMethod, PlacementResult};
pub use sampling::{
    build_sampling_matrix, frame_bounds, reconstruct, simulate_samples, FrameReport, Reconstruction, TimeSpaceSamples,
};
pub use spectral::{eigendecompose, from_factorization, jordan_structure, JordanGroup, JordanStructure, SpectralData};
