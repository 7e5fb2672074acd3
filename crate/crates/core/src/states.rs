//! States as positive normalized functionals, their restriction to
//! subalgebras, and the partial-trace / Schmidt cross-checks for bipartite
//! vector states.
//!
//! A state on ⊕ₖ M_{n_k}(ℂ) is stored in normal form as one positive block
//! weight matrix σ_k per block, with ω(a) = Σₖ tr(σ_k a_k). Restriction along
//! an embedding ι is the purely algebraic reduction ω₀ = ω ∘ ι; for tensor
//! factors it reproduces the partial trace, which is what
//! [`restriction_matches_partial_trace`] verifies numerically.
//!
//! Basis convention for the qubit pair: |+⟩ = (1, 0), |−⟩ = (0, 1), bipartite
//! amplitudes row-major over (A, B).

use crate::algebra::{AlgebraElement, BlockSpec, Embedding, embed_left_factor, tensor_spec};
use crate::error::{Error, Result};
use crate::linalg;
use crate::{C64, CMatrix, CVector};

/// Eigenvalues of a weight matrix may undershoot zero by at most this much;
/// anything in (−tol, 0) is clamped to zero.
const POSITIVITY_TOL: f64 = 1e-12;
/// Allowed deviation of the total weight trace from one.
const TRACE_TOL: f64 = 1e-12;
/// Allowed Hermiticity deviation of a weight matrix.
const HERMITICITY_TOL: f64 = 1e-10;
/// Allowed norm deviation when ingesting a vector expected to be unit.
const UNIT_NORM_TOL: f64 = 1e-10;

/// Positive normalized functional ω(a) = Σₖ tr(σ_k a_k) on a block algebra.
#[derive(Debug, Clone)]
pub struct State {
    spec: BlockSpec,
    weights: Vec<CMatrix>,
}

impl State {
    /// Validates Hermiticity, positivity (eigenvalues ≥ −1e-12, small
    /// negatives clamped) and normalization, then stores the weights with
    /// the trace renormalized to exactly one.
    pub fn new(spec: BlockSpec, weights: Vec<CMatrix>) -> Result<Self> {
        if weights.len() != spec.num_blocks() {
            return Err(Error::ShapeMismatch(format!(
                "{} weight matrices for a {}-block spec",
                weights.len(),
                spec.num_blocks()
            )));
        }
        let mut total_trace = 0.0;
        let mut clean = Vec::with_capacity(weights.len());
        for (k, (w, &n)) in weights.iter().zip(spec.blocks()).enumerate() {
            if w.nrows() != n || w.ncols() != n {
                return Err(Error::ShapeMismatch(format!(
                    "weight {k} is {}×{}, expected {n}×{n}",
                    w.nrows(),
                    w.ncols()
                )));
            }
            let herm_dev = linalg::hermiticity_deviation(w);
            if herm_dev > HERMITICITY_TOL {
                return Err(Error::InvalidState(format!(
                    "weight {k} is not Hermitian (deviation {herm_dev:.3e})"
                )));
            }
            let (vals, vecs) = linalg::hermitian_eigen(w);
            if let Some(bad) = vals.iter().find(|v| **v < -POSITIVITY_TOL) {
                return Err(Error::InvalidState(format!(
                    "weight {k} has negative eigenvalue {bad:.3e}"
                )));
            }
            // rebuild with sub-tolerance negatives clamped to zero
            let mut m = CMatrix::zeros(n, n);
            for (val, v) in vals.iter().zip(vecs.iter()) {
                let clamped = val.max(0.0);
                if clamped > 0.0 {
                    m += (v * v.adjoint()) * C64::new(clamped, 0.0);
                    total_trace += clamped;
                }
            }
            clean.push(m);
        }
        if (total_trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!(
                "state not normalized: total trace = {total_trace}"
            )));
        }
        for m in &mut clean {
            *m /= C64::new(total_trace, 0.0);
        }
        Ok(Self { spec, weights: clean })
    }

    /// State with diagonal weights; `lambdas` lists the diagonal in block
    /// enumeration order and must sum to one.
    pub fn from_diagonal(spec: BlockSpec, lambdas: &[f64]) -> Result<Self> {
        let total: usize = spec.blocks().iter().sum();
        if lambdas.len() != total {
            return Err(Error::ShapeMismatch(format!(
                "{} diagonal entries for total block size {total}",
                lambdas.len()
            )));
        }
        let mut weights = Vec::new();
        let mut off = 0;
        for &n in spec.blocks() {
            weights.push(CMatrix::from_fn(n, n, |i, j| {
                if i == j { C64::new(lambdas[off + i], 0.0) } else { C64::new(0.0, 0.0) }
            }));
            off += n;
        }
        Self::new(spec, weights)
    }

    /// The tracial state: σ_k = 1_{n_k} / Σ n_l.
    pub fn tracial(spec: &BlockSpec) -> Self {
        let total: usize = spec.blocks().iter().sum();
        let weights = spec
            .blocks()
            .iter()
            .map(|&n| CMatrix::identity(n, n) / C64::new(total as f64, 0.0))
            .collect();
        Self { spec: spec.clone(), weights }
    }

    /// Rank-one state σ = |v⟩⟨v| on a single-block algebra.
    pub fn vector_state(v: &CVector, spec: &BlockSpec) -> Result<Self> {
        let &[n] = spec.blocks() else {
            return Err(Error::Unsupported(
                "vector states are only defined on single-block algebras".into(),
            ));
        };
        if v.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} on M_{n}",
                v.len()
            )));
        }
        let deviation = (v.norm() - 1.0).abs();
        if deviation > UNIT_NORM_TOL {
            return Err(Error::NonUnitVector { deviation });
        }
        let normalized = v / C64::new(v.norm(), 0.0);
        let sigma = &normalized * normalized.adjoint();
        Ok(Self { spec: spec.clone(), weights: vec![sigma] })
    }

    pub fn spec(&self) -> &BlockSpec {
        &self.spec
    }

    pub fn weights(&self) -> &[CMatrix] {
        &self.weights
    }

    /// ω(a) = Σₖ tr(σ_k a_k).
    pub fn evaluate(&self, a: &AlgebraElement) -> Result<C64> {
        if a.spec() != &self.spec {
            return Err(Error::ShapeMismatch(
                "element does not live on the state's algebra".into(),
            ));
        }
        let mut acc = C64::new(0.0, 0.0);
        for (sigma, block) in self.weights.iter().zip(a.blocks()) {
            acc += (sigma * block).trace();
        }
        Ok(acc)
    }

    /// Sorted (descending) eigenvalues of all block weights together.
    pub fn weight_spectrum(&self) -> Vec<f64> {
        let mut vals: Vec<f64> = self
            .weights
            .iter()
            .flat_map(|w| linalg::hermitian_eigen(w).0)
            .map(|v| v.max(0.0))
            .collect();
        vals.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
        vals
    }

    /// True when every block weight has full rank at the given relative
    /// eigenvalue cutoff, i.e. the null ideal of the GNS construction is {0}.
    pub fn is_faithful(&self, rel_tol: f64) -> bool {
        let max = self.weight_spectrum().first().copied().unwrap_or(0.0);
        self.weights
            .iter()
            .all(|w| linalg::hermitian_eigen(w).0.iter().all(|v| *v > rel_tol * max))
    }

    /// Restriction ω₀ = ω ∘ ι to the source algebra of the embedding. The
    /// source weights are read off the matrix-unit basis:
    /// σ⁰_k[j, i] = ω(ι(e_ij^{(k)})).
    pub fn restrict(&self, embedding: &Embedding) -> Result<State> {
        if embedding.target() != &self.spec {
            return Err(Error::ShapeMismatch(
                "embedding target does not match the state's algebra".into(),
            ));
        }
        let source = embedding.source().clone();
        let mut weights: Vec<CMatrix> =
            source.blocks().iter().map(|&n| CMatrix::zeros(n, n)).collect();
        for ((k, i, j), image) in source.units().zip(embedding.images()) {
            weights[k][(j, i)] = self.evaluate(image)?;
        }
        State::new(source, weights)
    }
}

/// Unit vector in ℂ^{n_A} ⊗ ℂ^{n_B}, amplitudes row-major over (A, B).
#[derive(Debug, Clone)]
pub struct BipartiteVector {
    dims: (usize, usize),
    amplitudes: CVector,
}

impl BipartiteVector {
    /// Checks the length factorization and unit norm (deviation ≤ 1e-10),
    /// then stores the exactly renormalized amplitudes.
    pub fn new(dims: (usize, usize), amplitudes: CVector) -> Result<Self> {
        if dims.0 == 0 || dims.1 == 0 || amplitudes.len() != dims.0 * dims.1 {
            return Err(Error::ShapeMismatch(format!(
                "{} amplitudes for dims {}×{}",
                amplitudes.len(),
                dims.0,
                dims.1
            )));
        }
        let deviation = (amplitudes.norm() - 1.0).abs();
        if deviation > UNIT_NORM_TOL {
            return Err(Error::NonUnitVector { deviation });
        }
        let normalized = &amplitudes / C64::new(amplitudes.norm(), 0.0);
        Ok(Self { dims, amplitudes: normalized })
    }

    /// √λ |+,−⟩ + √(1−λ) |−,+⟩ on ℂ²⊗ℂ².
    pub fn psi_lambda(lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::LambdaOutOfRange(lambda));
        }
        let mut amplitudes = CVector::zeros(4);
        amplitudes[1] = C64::new(lambda.sqrt(), 0.0);
        amplitudes[2] = C64::new((1.0 - lambda).sqrt(), 0.0);
        Self::new((2, 2), amplitudes)
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// |ψ⟩⟨ψ| as a density matrix on the full space.
    pub fn density(&self) -> CMatrix {
        &self.amplitudes * self.amplitudes.adjoint()
    }

    /// The vector state ω(O) = ⟨ψ|O|ψ⟩ on M_{n_A n_B}.
    pub fn state(&self) -> Result<State> {
        let spec = BlockSpec::new(vec![self.dims.0 * self.dims.1])?;
        State::vector_state(&self.amplitudes, &spec)
    }

    /// Schmidt decomposition via the SVD of the n_A×n_B reshaping.
    pub fn schmidt(&self) -> SchmidtDecomposition {
        let (na, nb) = self.dims;
        let m = CMatrix::from_fn(na, nb, |i, b| self.amplitudes[i * nb + b]);
        let svd = m.svd(true, true);
        let u = svd.u.expect("requested");
        let v_t = svd.v_t.expect("requested");
        let r = svd.singular_values.len();
        let coefficients: Vec<f64> = svd.singular_values.iter().copied().collect();
        let left = (0..r).map(|k| u.column(k).into_owned()).collect();
        let right = (0..r).map(|k| v_t.row(k).transpose()).collect();
        SchmidtDecomposition { coefficients, left, right }
    }
}

/// Result of [`BipartiteVector::schmidt`]: descending coefficients and the
/// matched orthonormal bases, so that ψ = Σ s_k (left_k ⊗ right_k).
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left: Vec<CVector>,
    pub right: Vec<CVector>,
}

impl SchmidtDecomposition {
    /// Rebuilds the bipartite amplitudes; used to bound the decomposition
    /// error.
    pub fn reconstruct(&self) -> CVector {
        let na = self.left.first().map_or(0, |v| v.len());
        let nb = self.right.first().map_or(0, |v| v.len());
        let mut out = CVector::zeros(na * nb);
        for ((s, l), r) in self.coefficients.iter().zip(&self.left).zip(&self.right) {
            for i in 0..na {
                for b in 0..nb {
                    out[i * nb + b] += C64::new(*s, 0.0) * l[i] * r[b];
                }
            }
        }
        out
    }
}

/// Which tensor factor a partial trace keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    A,
    B,
}

/// Partial trace of a density matrix on ℂ^{n_A}⊗ℂ^{n_B} down to the kept
/// factor.
pub fn partial_trace(rho: &CMatrix, dims: (usize, usize), keep: Factor) -> Result<CMatrix> {
    let (na, nb) = dims;
    let d = na * nb;
    if rho.nrows() != d || rho.ncols() != d {
        return Err(Error::ShapeMismatch(format!(
            "density is {}×{}, which does not factor as {na}×{nb}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let out = match keep {
        Factor::A => CMatrix::from_fn(na, na, |i, ip| {
            (0..nb).map(|b| rho[(i * nb + b, ip * nb + b)]).sum()
        }),
        Factor::B => CMatrix::from_fn(nb, nb, |b, bp| {
            (0..na).map(|i| rho[(i * nb + b, i * nb + bp)]).sum()
        }),
    };
    Ok(out)
}

/// Max over the left-factor matrix units α of
/// |ω₀(α) − tr(ρ_A α)| for the vector state of ψ, where ω₀ is the
/// restriction along α ↦ α⊗1 and ρ_A the partial trace.
pub fn restriction_matches_partial_trace(psi: &BipartiteVector) -> Result<f64> {
    let (na, nb) = psi.dims();
    let spec_a = BlockSpec::new(vec![na])?;
    let spec_b = BlockSpec::new(vec![nb])?;
    let embedding = embed_left_factor(&spec_a, &spec_b)?;
    debug_assert_eq!(embedding.target(), &tensor_spec(&spec_a, &spec_b)?);

    let omega = psi.state()?;
    let restricted = omega.restrict(&embedding)?;
    let rho_a = partial_trace(&psi.density(), psi.dims(), Factor::A)?;

    let mut max_dev: f64 = 0.0;
    for (_, i, j) in spec_a.units() {
        let alpha = AlgebraElement::matrix_unit(&spec_a, 0, i, j)?;
        let lhs = restricted.evaluate(&alpha)?;
        let rhs = (&rho_a * alpha.block(0)).trace();
        max_dev = max_dev.max((lhs - rhs).norm());
    }
    Ok(max_dev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn diag_state_m2(l0: f64, l1: f64) -> State {
        State::from_diagonal(BlockSpec::new(vec![2]).unwrap(), &[l0, l1]).unwrap()
    }

    fn random_unit_vector(rng: &mut ChaCha8Rng, n: usize) -> CVector {
        let v: CVector = linalg::complex_gaussian(rng, n, 1).column(0).into_owned();
        &v / r(v.norm())
    }

    #[test]
    fn evaluate_identity_is_one() {
        let spec = BlockSpec::new(vec![2, 3]).unwrap();
        let omega = State::tracial(&spec);
        let one = AlgebraElement::identity(&spec);
        assert_relative_eq!(omega.evaluate(&one).unwrap().re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn diagonal_state_reads_off_units() {
        let omega = diag_state_m2(0.25, 0.75);
        let spec = omega.spec().clone();
        let e11 = AlgebraElement::matrix_unit(&spec, 0, 0, 0).unwrap();
        assert_relative_eq!(omega.evaluate(&e11).unwrap().re, 0.25, epsilon = 1e-14);
    }

    #[test]
    fn vector_state_of_basis_vector_is_rank_one_unit_weight() {
        let spec = BlockSpec::new(vec![4]).unwrap();
        let mut v = CVector::zeros(4);
        v[0] = r(1.0);
        let omega = State::vector_state(&v, &spec).unwrap();
        let spectrum = omega.weight_spectrum();
        assert_relative_eq!(spectrum[0], 1.0, epsilon = 1e-14);
        assert!(spectrum[1..].iter().all(|s| *s < 1e-14));
    }

    #[test]
    fn any_vector_state_is_pure() {
        let spec = BlockSpec::new(vec![3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..5 {
            let v = random_unit_vector(&mut rng, 3);
            let omega = State::vector_state(&v, &spec).unwrap();
            let spectrum = omega.weight_spectrum();
            assert_relative_eq!(spectrum[0], 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn non_unit_vector_is_rejected() {
        let spec = BlockSpec::new(vec![2]).unwrap();
        let v = CVector::from_vec(vec![r(1.0), r(0.5)]);
        assert!(matches!(
            State::vector_state(&v, &spec),
            Err(Error::NonUnitVector { .. })
        ));
    }

    #[test]
    fn state_validation_errors() {
        let spec = BlockSpec::new(vec![2]).unwrap();
        // trace 0.9
        let w = CMatrix::from_diagonal(&CVector::from_vec(vec![r(0.4), r(0.5)]));
        let err = State::new(spec.clone(), vec![w]).unwrap_err();
        assert!(err.to_string().contains("not normalized"), "{err}");
        // genuine negative eigenvalue
        let w = CMatrix::from_diagonal(&CVector::from_vec(vec![r(1.1), r(-0.1)]));
        assert!(State::new(spec.clone(), vec![w]).is_err());
        // non-Hermitian
        let mut w = CMatrix::identity(2, 2) * r(0.5);
        w[(0, 1)] = r(0.3);
        assert!(State::new(spec.clone(), vec![w]).is_err());
        // tiny negative eigenvalue is clamped, not rejected
        let w = CMatrix::from_diagonal(&CVector::from_vec(vec![r(1.0 + 1e-13), r(-1e-13)]));
        let omega = State::new(spec, vec![w]).unwrap();
        assert!(omega.weight_spectrum().iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn psi_lambda_amplitudes() {
        // λ=1: separable |+,−⟩
        let v = BipartiteVector::psi_lambda(1.0).unwrap();
        assert_relative_eq!(v.amplitudes()[1].re, 1.0, epsilon = 1e-14);
        // λ=0.5: Bell-type
        let v = BipartiteVector::psi_lambda(0.5).unwrap();
        assert_relative_eq!(v.amplitudes()[1].re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-14);
        assert_relative_eq!(v.amplitudes()[2].re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-14);
        // λ=0.3: frozen square roots
        let v = BipartiteVector::psi_lambda(0.3).unwrap();
        assert_relative_eq!(v.amplitudes()[0].norm(), 0.0, epsilon = 1e-14);
        assert_relative_eq!(v.amplitudes()[1].re, 0.547723, epsilon = 1e-6);
        assert_relative_eq!(v.amplitudes()[2].re, 0.836660, epsilon = 1e-6);
        assert_relative_eq!(v.amplitudes()[3].norm(), 0.0, epsilon = 1e-14);

        assert!(BipartiteVector::psi_lambda(1.5).is_err());
        assert!(BipartiteVector::psi_lambda(-0.1).is_err());
    }

    #[test]
    fn psi_lambda_state_matches_inner_product_oracle() {
        let psi = BipartiteVector::psi_lambda(0.3).unwrap();
        let omega = psi.state().unwrap();
        let spec = omega.spec().clone();
        // |+,−⟩⟨+,−| = e_11 at flat index 1
        let e = AlgebraElement::matrix_unit(&spec, 0, 1, 1).unwrap();
        // oracle: ⟨ψ|e|ψ⟩ by direct summation
        let amps = psi.amplitudes();
        let mut oracle = C64::new(0.0, 0.0);
        for a in 0..4 {
            for b in 0..4 {
                oracle += amps[a].conj() * e.block(0)[(a, b)] * amps[b];
            }
        }
        assert_relative_eq!(oracle.re, 0.3, epsilon = 1e-12);
        assert_relative_eq!(omega.evaluate(&e).unwrap().re, oracle.re, epsilon = 1e-14);
    }

    #[test]
    fn restricted_psi_lambda_matches_convex_combination() {
        let lambda = 0.3;
        let psi = BipartiteVector::psi_lambda(lambda).unwrap();
        let omega = psi.state().unwrap();
        let m2 = BlockSpec::new(vec![2]).unwrap();
        let emb = embed_left_factor(&m2, &m2).unwrap();
        let restricted = omega.restrict(&emb).unwrap();

        // Paper identity: ω_{λ,0}(α) = λ⟨+|α|+⟩ + (1−λ)⟨−|α|−⟩
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let alpha = AlgebraElement::random(&m2, &mut rng);
            let expected = r(lambda) * alpha.block(0)[(0, 0)]
                + r(1.0 - lambda) * alpha.block(0)[(1, 1)];
            let got = restricted.evaluate(&alpha).unwrap();
            assert!((got - expected).norm() < 1e-12);
        }

        // σ₀ = diag(λ, 1−λ)
        let e11 = AlgebraElement::matrix_unit(&m2, 0, 0, 0).unwrap();
        let e22 = AlgebraElement::matrix_unit(&m2, 0, 1, 1).unwrap();
        assert_relative_eq!(restricted.evaluate(&e11).unwrap().re, 0.3, epsilon = 1e-12);
        assert_relative_eq!(restricted.evaluate(&e22).unwrap().re, 0.7, epsilon = 1e-12);
    }

    #[test]
    fn restriction_along_identity_is_identity() {
        let spec = BlockSpec::new(vec![2, 3]).unwrap();
        let omega = State::tracial(&spec);
        let emb = Embedding::identity(&spec);
        let restricted = omega.restrict(&emb).unwrap();
        for (a, b) in omega.weights().iter().zip(restricted.weights()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn restriction_commutes_with_evaluation() {
        let m2 = BlockSpec::new(vec![2]).unwrap();
        let m3 = BlockSpec::new(vec![3]).unwrap();
        let emb = embed_left_factor(&m2, &m3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let v = random_unit_vector(&mut rng, 6);
        let omega = State::vector_state(&v, emb.target()).unwrap();
        let restricted = omega.restrict(&emb).unwrap();
        for _ in 0..100 {
            let x = AlgebraElement::random(&m2, &mut rng);
            let lhs = restricted.evaluate(&x).unwrap();
            let rhs = omega.evaluate(&emb.apply(&x).unwrap()).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_of_psi_lambda() {
        let psi = BipartiteVector::psi_lambda(0.3).unwrap();
        let rho_a = partial_trace(&psi.density(), (2, 2), Factor::A).unwrap();
        assert_relative_eq!(rho_a[(0, 0)].re, 0.3, epsilon = 1e-14);
        assert_relative_eq!(rho_a[(1, 1)].re, 0.7, epsilon = 1e-14);
        assert!(rho_a[(0, 1)].norm() < 1e-14);

        // both reduced spectra are {λ, 1−λ}
        let rho_b = partial_trace(&psi.density(), (2, 2), Factor::B).unwrap();
        let (sa, _) = linalg::hermitian_eigen(&rho_a);
        let (sb, _) = linalg::hermitian_eigen(&rho_b);
        for (a, b) in sa.iter().zip(&sb) {
            assert_relative_eq!(a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn partial_trace_of_product_vector_is_pure() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_unit_vector(&mut rng, 2);
        let b = random_unit_vector(&mut rng, 3);
        let mut amps = CVector::zeros(6);
        for i in 0..2 {
            for j in 0..3 {
                amps[i * 3 + j] = a[i] * b[j];
            }
        }
        let psi = BipartiteVector::new((2, 3), amps).unwrap();
        let rho_a = partial_trace(&psi.density(), (2, 3), Factor::A).unwrap();
        let (vals, _) = linalg::hermitian_eigen(&rho_a);
        assert_relative_eq!(vals[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        let rho = CMatrix::identity(6, 6) / r(6.0);
        assert!(partial_trace(&rho, (2, 2), Factor::A).is_err());
    }

    #[test]
    fn schmidt_of_psi_lambda() {
        let psi = BipartiteVector::psi_lambda(0.3).unwrap();
        let s = psi.schmidt();
        assert_relative_eq!(s.coefficients[0], 0.7f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(s.coefficients[1], 0.3f64.sqrt(), epsilon = 1e-12);
        let err = (s.reconstruct() - psi.amplitudes()).norm();
        assert!(err < 1e-10, "reconstruction error {err}");
    }

    #[test]
    fn schmidt_edge_cases() {
        // product vector: coefficients (1, 0)
        let mut amps = CVector::zeros(4);
        amps[0] = r(1.0);
        let psi = BipartiteVector::new((2, 2), amps).unwrap();
        let s = psi.schmidt();
        assert_relative_eq!(s.coefficients[0], 1.0, epsilon = 1e-12);
        assert!(s.coefficients[1].abs() < 1e-12);

        // symmetric case: (1/√2, 1/√2)
        let psi = BipartiteVector::psi_lambda(0.5).unwrap();
        let s = psi.schmidt();
        assert_relative_eq!(s.coefficients[0], std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
        assert_relative_eq!(s.coefficients[1], std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
    }

    #[test]
    fn schmidt_coefficients_square_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for &dims in &[(2usize, 2usize), (2, 3), (3, 3)] {
            let v = random_unit_vector(&mut rng, dims.0 * dims.1);
            let psi = BipartiteVector::new(dims, v).unwrap();
            let s = psi.schmidt();
            let total: f64 = s.coefficients.iter().map(|c| c * c).sum();
            assert_relative_eq!(total, 1.0, epsilon = 1e-12);
            assert!((s.reconstruct() - psi.amplitudes()).norm() < 1e-10);
        }
    }

    #[test]
    fn restriction_equals_partial_trace_for_psi_family_and_random_vectors() {
        for lambda in [0.0, 0.3, 1.0] {
            let psi = BipartiteVector::psi_lambda(lambda).unwrap();
            let dev = restriction_matches_partial_trace(&psi).unwrap();
            assert!(dev <= 1e-12, "λ={lambda}: deviation {dev}");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let v = random_unit_vector(&mut rng, 4);
            let psi = BipartiteVector::new((2, 2), v).unwrap();
            let dev = restriction_matches_partial_trace(&psi).unwrap();
            assert!(dev <= 1e-12, "deviation {dev}");
        }
    }

    #[test]
    fn positivity_and_hermiticity_of_evaluation() {
        let spec = BlockSpec::new(vec![2, 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let states = [State::tracial(&spec), {
            let lambdas = [0.05, 0.1, 0.2, 0.25, 0.4];
            State::from_diagonal(spec.clone(), &lambdas).unwrap()
        }];
        for omega in &states {
            for _ in 0..200 {
                let a = AlgebraElement::random(&spec, &mut rng);
                let pos = omega.evaluate(&(&a.adjoint() * &a)).unwrap();
                assert!(pos.re >= -1e-12, "ω(a*a) = {pos}");
                assert!(pos.im.abs() < 1e-12);
                let herm = omega.evaluate(&a.adjoint()).unwrap();
                let conj = omega.evaluate(&a).unwrap().conj();
                assert!((herm - conj).norm() < 1e-12);
            }
        }
    }
}
