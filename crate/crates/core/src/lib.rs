//! GNS representations of states on finite-dimensional C*-algebras.
//!
//! Every finite-dimensional C*-algebra is a direct sum of full matrix
//! algebras ⊕ₖ M_{n_k}(ℂ), which makes the whole GNS pipeline concretely
//! computable with dense linear algebra:
//!
//! - [`algebra`]: block matrix algebras, matrix units, tensor products and
//!   subalgebra embeddings;
//! - [`states`]: positive normalized functionals, state restriction, partial
//!   trace and Schmidt decompositions for the bipartite cross-checks;
//! - [`gns`]: the Gram matrix ⟨a,b⟩ = ω(a*b), the null ideal, the quotient
//!   Hilbert space and the left-multiplication representation;
//! - [`decomposition`]: commutant computation, decomposition into irreducible
//!   invariant subspaces and density-operator extraction;
//! - [`entropy`]: spectra and von Neumann entropies;
//! - [`modular`]: the modular involution S, conjugation J, operator Δ, gauge
//!   unitaries U(g) = J π(g) J in the commutant, and the entropy-ambiguity
//!   scan over Haar-random gauge choices;
//! - [`scenario`]: JSON scenario files consumed by the `gnsrep` CLI.

pub mod algebra;
pub mod decomposition;
pub mod entropy;
pub mod error;
pub mod gns;
pub mod linalg;
pub mod modular;
pub mod scenario;
pub mod states;

pub use algebra::{AlgebraElement, BlockSpec, Embedding};
pub use decomposition::{DensityOperator, ProjectorFamily};
pub use error::{Error, Result};
pub use gns::GnsData;
pub use modular::{GaugeReport, ModularData};
pub use scenario::{Scenario, load_scenario, parse_scenario};
pub use states::{BipartiteVector, State};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix type used throughout the crate.
pub type CMatrix = nalgebra::DMatrix<C64>;

/// Dense complex vector type used throughout the crate.
pub type CVector = nalgebra::DVector<C64>;
