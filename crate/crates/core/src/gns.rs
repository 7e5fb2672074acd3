//! The GNS construction.
//!
//! A state ω on ⊕ₖ M_{n_k}(ℂ) induces the sesquilinear form
//! ⟨a, b⟩ = ω(a*b) on the algebra itself. Its Gram matrix over the matrix
//! units is Hermitian positive semidefinite; eigenvectors below the relative
//! cutoff span the null ideal 𝒩_ω, and the remaining eigenvectors, scaled by
//! 1/√eigenvalue, form an orthonormal basis of the quotient Hilbert space
//! ℋ_ω = 𝒜/𝒩_ω (the completion is a no-op in finite dimensions). The algebra
//! acts by left multiplication, π(a)|[b]⟩ = |[ab]⟩, and the class of the
//! identity is the cyclic vector Ω with ⟨Ω|π(a)|Ω⟩ = ω(a).

use crate::algebra::{AlgebraElement, BlockSpec};
use crate::error::{Error, Result};
use crate::linalg;
use crate::states::State;
use crate::{C64, CMatrix, CVector};

/// Default relative eigenvalue cutoff separating the null ideal from the
/// quotient space.
pub const DEFAULT_NULL_CUTOFF: f64 = 1e-10;

/// Orthonormalization fails when the kept Gram eigenvalues are spread over
/// more than this condition number.
const MAX_CONDITION: f64 = 1e12;

/// Gram matrix G[p, q] = ω(u_p* u_q) over the matrix units in enumeration
/// order.
pub fn gram_matrix(state: &State) -> CMatrix {
    let spec = state.spec();
    let units: Vec<AlgebraElement> = spec
        .units()
        .map(|(k, i, j)| AlgebraElement::matrix_unit(spec, k, i, j).expect("valid unit"))
        .collect();
    let d = spec.dim();
    let mut gram = CMatrix::zeros(d, d);
    for (p, up) in units.iter().enumerate() {
        let up_star = up.adjoint();
        for (q, uq) in units.iter().enumerate() {
            let prod = up_star.try_mul(uq).expect("same spec");
            gram[(p, q)] = state.evaluate(&prod).expect("same spec");
        }
    }
    gram
}

/// Orthonormal coefficient vectors spanning the null ideal: eigenvectors of
/// the Gram matrix with eigenvalue below `rel_tol` times the largest one.
pub fn null_ideal(gram: &CMatrix, rel_tol: f64) -> Vec<CVector> {
    let (vals, vecs) = linalg::hermitian_eigen(gram);
    let max = vals.first().copied().unwrap_or(0.0).max(0.0);
    vals.iter()
        .zip(vecs)
        .filter(|(v, _)| **v < rel_tol * max)
        .map(|(_, u)| u)
        .collect()
}

/// Coefficient vector of u_{(k,i,j)} · x where x is given by its coefficient
/// vector over matrix units. Left multiplication by a unit moves row j of
/// each block-k representative to row i.
fn left_mult_unit(spec: &BlockSpec, (k, i, j): (usize, usize, usize), x: &CVector) -> CVector {
    let n = spec.blocks()[k];
    let mut out = CVector::zeros(spec.dim());
    for t in 0..n {
        let dst = spec.unit_index(k, i, t).expect("valid unit");
        let src = spec.unit_index(k, j, t).expect("valid unit");
        out[dst] = x[src];
    }
    out
}

/// Max deviation of the null-ideal basis from being closed under left
/// multiplication by matrix units (a left ideal). Zero for an empty basis.
pub fn left_ideal_residual(spec: &BlockSpec, null_basis: &[CVector]) -> f64 {
    if null_basis.is_empty() {
        return 0.0;
    }
    let d = spec.dim();
    let mut n = CMatrix::zeros(d, null_basis.len());
    for (c, v) in null_basis.iter().enumerate() {
        n.set_column(c, v);
    }
    let mut worst: f64 = 0.0;
    for unit in spec.units() {
        for v in null_basis {
            let w = left_mult_unit(spec, unit, v);
            let residual = &w - &n * (n.adjoint() * &w);
            worst = worst.max(residual.norm());
        }
    }
    worst
}

/// Everything the GNS construction produces for one state.
#[derive(Debug, Clone)]
pub struct GnsData {
    spec: BlockSpec,
    state: State,
    gram: CMatrix,
    gram_spectrum: Vec<f64>,
    null_basis: Vec<CVector>,
    hilbert_dim: usize,
    quotient_basis: CMatrix,
    gram_quotient: CMatrix,
    unit_reps: Vec<CMatrix>,
    cyclic: CVector,
}

impl GnsData {
    /// Runs the construction at the given relative null cutoff.
    pub fn build(state: &State, rel_tol: f64) -> Result<Self> {
        let spec = state.spec().clone();
        let gram = gram_matrix(state);
        let (vals, vecs) = linalg::hermitian_eigen(&gram);
        let max = vals.first().copied().unwrap_or(0.0).max(0.0);
        let cutoff = rel_tol * max;

        let mut quotient_cols = Vec::new();
        let mut null_basis = Vec::new();
        let mut min_kept = f64::INFINITY;
        for (val, vec) in vals.iter().zip(vecs) {
            if *val >= cutoff && *val > 0.0 {
                min_kept = min_kept.min(*val);
                quotient_cols.push(vec / C64::new(val.sqrt(), 0.0));
            } else {
                null_basis.push(vec);
            }
        }
        if quotient_cols.is_empty() {
            return Err(Error::NumericalDegeneracy(
                "Gram matrix has no spectrum above the cutoff".into(),
            ));
        }
        if max / min_kept > MAX_CONDITION {
            return Err(Error::NumericalDegeneracy(format!(
                "Gram condition number {:.3e} beyond 1e12; raise the null cutoff",
                max / min_kept
            )));
        }

        let d_a = spec.dim();
        let hilbert_dim = quotient_cols.len();
        let mut quotient_basis = CMatrix::zeros(d_a, hilbert_dim);
        for (c, col) in quotient_cols.iter().enumerate() {
            quotient_basis.set_column(c, col);
        }
        let gram_quotient = &gram * &quotient_basis;

        let unit_reps = spec
            .units()
            .map(|unit| {
                // π(u) = Q† G L_u Q, assembled column by column
                let mut lq = CMatrix::zeros(d_a, hilbert_dim);
                for c in 0..hilbert_dim {
                    lq.set_column(c, &left_mult_unit(&spec, unit, &quotient_basis.column(c).into_owned()));
                }
                gram_quotient.adjoint() * lq
            })
            .collect();

        let mut data = Self {
            spec,
            state: state.clone(),
            gram,
            gram_spectrum: vals,
            null_basis,
            hilbert_dim,
            quotient_basis,
            gram_quotient,
            unit_reps,
            cyclic: CVector::zeros(hilbert_dim),
        };
        data.cyclic = data.class_vector(&AlgebraElement::identity(data.spec()))?;
        Ok(data)
    }

    pub fn spec(&self) -> &BlockSpec {
        &self.spec
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    pub fn gram(&self) -> &CMatrix {
        &self.gram
    }

    /// Eigenvalues of the Gram matrix, descending.
    pub fn gram_spectrum(&self) -> &[f64] {
        &self.gram_spectrum
    }

    pub fn null_basis(&self) -> &[CVector] {
        &self.null_basis
    }

    pub fn null_dim(&self) -> usize {
        self.null_basis.len()
    }

    /// d = d_A − dim 𝒩_ω.
    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    /// Columns are coefficient vectors over matrix units, orthonormal under
    /// the Gram form.
    pub fn quotient_basis(&self) -> &CMatrix {
        &self.quotient_basis
    }

    /// Ω = |[1_𝒜]⟩ in quotient coordinates.
    pub fn cyclic_vector(&self) -> &CVector {
        &self.cyclic
    }

    /// True when the state has an empty null ideal.
    pub fn is_faithful(&self) -> bool {
        self.null_basis.is_empty()
    }

    /// Quotient coordinates of the class |[a]⟩.
    pub fn class_vector(&self, a: &AlgebraElement) -> Result<CVector> {
        if a.spec() != &self.spec {
            return Err(Error::ShapeMismatch(
                "element does not live on the represented algebra".into(),
            ));
        }
        Ok(self.gram_quotient.adjoint() * a.coefficients())
    }

    /// π(u) for the matrix unit with the given flat index.
    pub fn unit_rep(&self, unit_index: usize) -> &CMatrix {
        &self.unit_reps[unit_index]
    }

    pub fn unit_reps(&self) -> &[CMatrix] {
        &self.unit_reps
    }

    /// π(a) on the quotient space, by linearity over the unit representatives.
    pub fn represent(&self, a: &AlgebraElement) -> Result<CMatrix> {
        if a.spec() != &self.spec {
            return Err(Error::ShapeMismatch(
                "element does not live on the represented algebra".into(),
            ));
        }
        let coeffs = a.coefficients();
        let mut out = CMatrix::zeros(self.hilbert_dim, self.hilbert_dim);
        for (p, c) in coeffs.iter().enumerate() {
            if c.norm_sqr() != 0.0 {
                out += &self.unit_reps[p] * *c;
            }
        }
        Ok(out)
    }

    /// Dimension of span{π(u)v : u matrix unit}.
    pub fn cyclic_rank(&self, v: &CVector) -> usize {
        let mut span = CMatrix::zeros(self.hilbert_dim, self.unit_reps.len());
        for (p, rep) in self.unit_reps.iter().enumerate() {
            span.set_column(p, &(rep * v));
        }
        linalg::rank(&span, 1e-10)
    }

    /// Whether Ω is cyclic: the orbit of the represented units spans ℋ_ω.
    pub fn check_cyclic(&self) -> bool {
        self.cyclic_rank(&self.cyclic) == self.hilbert_dim
    }
}
