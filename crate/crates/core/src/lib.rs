//! Certify, construct and measure eigenvalue degeneracy of sparse
//! Bernoulli-masked random matrices.
//!
//! A real or complex `N x N` matrix whose entries are `Y_jl * Z_jl`, with
//! `Y_jl` Bernoulli masks and `Z_jl` continuous, has `N` distinct eigenvalues
//! with probability zero or one once the mask is fixed. Which of the two is
//! decided by a purely graph-theoretic property of the mask (perfect matchings
//! of the mask or of one principal subgraph), so the degeneracy probability of
//! the whole ensemble reduces to a random bipartite graph question.
//!
//! Modules:
//!
//! * [`polynomial`]: monic polynomials, characteristic polynomials and the
//!   determinant-based discriminant.
//! * [`bipartite`]: masks as bipartite graphs, Hopcroft-Karp matching, Hall
//!   violators, isolated points and the structural conditions built on them.
//! * [`models`]: constructive distinct-eigenvalue witnesses, mask and value
//!   samplers, the numeric/exact distinctness oracle and a Haar unitary sampler.
//! * [`asymptotics`]: closed-form limits and the factorial-moment toolkit.
//! * [`montecarlo`]: reproducible parallel experiments and exhaustive scans.

pub mod asymptotics;
pub mod bipartite;
pub mod error;
pub mod linalg;
pub mod models;
pub mod montecarlo;
pub mod polynomial;
pub mod scalar;

pub use bipartite::{
    BipartiteMask, DeficiencyWitness, IndexSet, Matching, Side, StructuralWitness,
};
pub use error::{Error, Result};
pub use linalg::Matrix;
pub use models::{MaskedMatrixSample, Permutation, SparseRegime, ValueDistribution};
pub use montecarlo::{EstimateReport, HistogramReport, Model, SimulationConfig, Target};
pub use polynomial::Polynomial;
pub use scalar::{GaussianRational, Rational, Scalar};
