//! Tomita modular data for faithful states on M_n and the entropy-ambiguity
//! scan over commutant gauge unitaries.
//!
//! The involution S: |[a]⟩ ↦ |[a*]⟩ is antilinear; antilinear operators are
//! represented throughout by a single matrix M acting as v ↦ M·conj(v), so
//! that two antilinear maps compose to the linear map M₁·conj(M₂). The polar
//! decomposition S = J Δ^{1/2} yields the positive modular operator
//! Δ = Sᵀ·conj(S) and the antiunitary modular conjugation J, which satisfies
//! J² = 1, JΩ = Ω and J π(𝒜) J ⊆ π(𝒜)′. For a diagonal faithful state the
//! action on matrix-unit classes is J|e_ij⟩ = √(λ_j/λ_i)|e_ji⟩.
//!
//! Gauge transformations are U(g) = J π(g) J for unitary g; conjugating the
//! diagonal minimal projections p^(k) = e_kk gives the deformed families
//! P_g^(k) = J π(g p^(k) g*) J and density operators ρ_ω(g) that all
//! reproduce ω but generally carry more entropy than the baseline ρ_ω(1).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraElement, BlockSpec};
use crate::decomposition::{DensityOperator, ProjectorFamily, density_from_projectors};
use crate::entropy;
use crate::error::{Error, Result};
use crate::gns::GnsData;
use crate::linalg;
use crate::{C64, CMatrix, CVector};

const UNITARY_TOL: f64 = 1e-10;

/// Modular involution, conjugation and operator of a faithful single-block
/// state, in the orthonormal GNS basis.
#[derive(Debug, Clone)]
pub struct ModularData {
    dim: usize,
    s_matrix: CMatrix,
    j_matrix: CMatrix,
    delta: CMatrix,
}

impl ModularData {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Matrix of the antilinear involution; acts as v ↦ S·conj(v).
    pub fn s_matrix(&self) -> &CMatrix {
        &self.s_matrix
    }

    /// Matrix of the antilinear modular conjugation; acts as v ↦ J·conj(v).
    pub fn j_matrix(&self) -> &CMatrix {
        &self.j_matrix
    }

    /// The positive modular operator Δ with S = J Δ^{1/2}.
    pub fn delta(&self) -> &CMatrix {
        &self.delta
    }

    /// S v = |[a*]⟩ for v = |[a]⟩.
    pub fn apply_s(&self, v: &CVector) -> CVector {
        &self.s_matrix * v.map(|z| z.conj())
    }

    /// J v.
    pub fn apply_j(&self, v: &CVector) -> CVector {
        &self.j_matrix * v.map(|z| z.conj())
    }

    /// The linear operator J X J for a linear X (two antilinear conjugations).
    pub fn j_conjugate(&self, x: &CMatrix) -> CMatrix {
        &self.j_matrix * x.conjugate() * self.j_matrix.conjugate()
    }
}

/// Builds the modular data of a faithful state on a single-block algebra via
/// the polar decomposition of the involution |[a]⟩ ↦ |[a*]⟩.
pub fn tomita_modular(gns: &GnsData) -> Result<ModularData> {
    if !gns.spec().is_single_block() {
        return Err(Error::Unsupported(
            "modular data is only built for single-block algebras".into(),
        ));
    }
    if !gns.is_faithful() {
        return Err(Error::FaithfulnessRequired(format!(
            "null ideal has dimension {}",
            gns.null_dim()
        )));
    }
    let d = gns.hilbert_dim();
    // S column b = coordinates of the class of x_b*, where x_b is the b-th
    // quotient basis element
    let mut s_matrix = CMatrix::zeros(d, d);
    for b in 0..d {
        let x = AlgebraElement::from_coefficients(
            gns.spec(),
            &gns.quotient_basis().column(b).into_owned(),
        )?;
        s_matrix.set_column(b, &gns.class_vector(&x.adjoint())?);
    }
    // Δ = Sᵀ conj(S) is Hermitian positive definite for faithful states
    let delta = s_matrix.transpose() * s_matrix.conjugate();
    // J = S ∘ Δ^{-1/2}: as matrices, M_J = M_S · conj(Δ^{-1/2})
    let j_matrix = &s_matrix * linalg::psd_inv_sqrt(&delta).conjugate();
    Ok(ModularData { dim: d, s_matrix, j_matrix, delta })
}

/// U(g) = J π(g) J, a unitary element of the commutant.
pub fn gauge_unitary(gns: &GnsData, modular: &ModularData, g: &AlgebraElement) -> Result<CMatrix> {
    check_gauge_input(gns, g)?;
    Ok(modular.j_conjugate(&gns.represent(g)?))
}

fn check_gauge_input(gns: &GnsData, g: &AlgebraElement) -> Result<()> {
    if g.spec() != gns.spec() {
        return Err(Error::ShapeMismatch(
            "gauge element does not live on the represented algebra".into(),
        ));
    }
    let deviation = g.unitary_deviation();
    if deviation > UNITARY_TOL {
        return Err(Error::InvalidUnitary { deviation });
    }
    Ok(())
}

/// The baseline family P^(k) = J π(p^(k)) J over the diagonal minimal
/// projections p^(k) = e_kk. For diagonal faithful states this is the column
/// family P^(k) = Σᵢ |ê_ik⟩⟨ê_ik|.
pub fn baseline_projectors(gns: &GnsData, modular: &ModularData) -> Result<ProjectorFamily> {
    gauge_projectors(gns, modular, &AlgebraElement::identity(gns.spec()))
}

/// The gauge-deformed family P_g^(k) = J π(g p^(k) g*) J. Equal to
/// U(g) P^(k) U(g)†.
pub fn gauge_projectors(
    gns: &GnsData,
    modular: &ModularData,
    g: &AlgebraElement,
) -> Result<ProjectorFamily> {
    check_gauge_input(gns, g)?;
    let spec = gns.spec();
    let n = spec.blocks()[0];
    let g_star = g.adjoint();
    let mut projectors = Vec::with_capacity(n);
    for k in 0..n {
        let p_k = AlgebraElement::matrix_unit(spec, 0, k, k)?;
        let conjugated = g.try_mul(&p_k)?.try_mul(&g_star)?;
        projectors.push(modular.j_conjugate(&gns.represent(&conjugated)?));
    }
    ProjectorFamily::new(projectors)
}

/// ρ_ω(g) = Σₖ P_g^(k) |Ω⟩⟨Ω| P_g^(k); reproduces ω for every unitary g.
pub fn gauge_density(
    gns: &GnsData,
    modular: &ModularData,
    g: &AlgebraElement,
) -> Result<DensityOperator> {
    let family = gauge_projectors(gns, modular, g)?;
    density_from_projectors(gns, &family)
}

/// Haar-distributed n×n unitary: QR of a seeded complex Gaussian matrix with
/// the diagonal of the triangular factor normalized to positive reals.
/// Deterministic per seed.
pub fn haar_unitary(n: usize, seed: u64) -> Result<AlgebraElement> {
    let spec = BlockSpec::new(vec![n])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gaussian = linalg::complex_gaussian(&mut rng, n, n);
    let qr = gaussian.qr();
    let r = qr.r();
    let mut q = qr.q();
    for (c, mut col) in q.column_iter_mut().enumerate() {
        let piv = r[(c, c)];
        let phase = if piv.norm() > 0.0 { piv / piv.norm() } else { C64::new(1.0, 0.0) };
        col *= phase;
    }
    AlgebraElement::new(spec, vec![q])
}

/// Mixes a scan seed with a sample index into an independent per-sample seed
/// (splitmix64 finalizer).
pub fn derive_sample_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Outcome of an entropy scan over Haar-random gauge unitaries.
#[derive(Debug, Clone)]
pub struct GaugeReport {
    /// S(ρ_ω(1)), the entropy of the baseline family.
    pub baseline_entropy: f64,
    /// Number of Haar draws.
    pub samples: usize,
    /// Entropy per draw, in draw order.
    pub entropies: Vec<f64>,
    pub min_entropy: f64,
    pub max_entropy: f64,
    /// Index of the draw with maximal entropy.
    pub argmax_index: usize,
    /// The unitary achieving the sampled maximum.
    pub argmax_unitary: AlgebraElement,
    /// (entropy, unitary) after local coordinate ascent from the best
    /// sample, when refinement was requested.
    pub refined: Option<(f64, AlgebraElement)>,
    /// The scan seed, for reproducibility.
    pub seed: u64,
}

/// Scans S(ρ_ω(g)) over `samples` Haar draws with per-sample seeds derived
/// from (seed, index). With `refine`, a derivative-free coordinate ascent
/// over g = g_best·exp(iH) (step halving from 0.5 to 1e-4) sharpens the
/// sampled maximum.
pub fn entropy_scan(
    gns: &GnsData,
    modular: &ModularData,
    samples: usize,
    seed: u64,
    refine: bool,
) -> Result<GaugeReport> {
    let baseline = density_from_projectors(gns, &baseline_projectors(gns, modular)?)?;
    let baseline_entropy = entropy::von_neumann_entropy(&baseline)?;

    let n = gns.spec().blocks()[0];
    let mut entropies = Vec::with_capacity(samples);
    let mut best: Option<(usize, f64, AlgebraElement)> = None;
    let mut min_entropy = f64::INFINITY;
    let mut max_entropy = f64::NEG_INFINITY;
    for index in 0..samples {
        let g = haar_unitary(n, derive_sample_seed(seed, index as u64))?;
        let s = entropy::von_neumann_entropy(&gauge_density(gns, modular, &g)?)?;
        entropies.push(s);
        min_entropy = min_entropy.min(s);
        if s > max_entropy {
            max_entropy = s;
            best = Some((index, s, g));
        }
    }
    let (argmax_index, _, argmax_unitary) = best.ok_or_else(|| {
        Error::Scenario("entropy scan needs at least one sample".into())
    })?;

    let refined = if refine {
        Some(refine_max(gns, modular, &argmax_unitary, max_entropy)?)
    } else {
        None
    };

    Ok(GaugeReport {
        baseline_entropy,
        samples,
        entropies,
        min_entropy,
        max_entropy,
        argmax_index,
        argmax_unitary,
        refined,
        seed,
    })
}

/// Hermitian n×n matrix from n² real parameters: n diagonal entries followed
/// by (re, im) pairs for the strict upper triangle in row-major order.
fn hermitian_from_params(n: usize, params: &[f64]) -> CMatrix {
    let mut h = CMatrix::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = C64::new(params[i], 0.0);
    }
    let mut idx = n;
    for i in 0..n {
        for j in (i + 1)..n {
            let z = C64::new(params[idx], params[idx + 1]);
            idx += 2;
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

fn refine_max(
    gns: &GnsData,
    modular: &ModularData,
    start: &AlgebraElement,
    start_entropy: f64,
) -> Result<(f64, AlgebraElement)> {
    const MAX_EVALS: usize = 4000;
    let n = gns.spec().blocks()[0];
    let n_params = n * n;
    let mut params = vec![0.0f64; n_params];
    let mut best_entropy = start_entropy;
    let mut best_unitary = start.clone();
    let mut step = 0.5;
    let mut evals = 0;
    while step >= 1e-4 && evals < MAX_EVALS {
        let mut improved = false;
        for p in 0..n_params {
            for sign in [1.0, -1.0] {
                let mut trial = params.clone();
                trial[p] += sign * step;
                let h = hermitian_from_params(n, &trial);
                let rotation = AlgebraElement::new(
                    gns.spec().clone(),
                    vec![linalg::exp_i_hermitian(&h)],
                )?;
                let candidate = start.try_mul(&rotation)?;
                let s = entropy::von_neumann_entropy(&gauge_density(gns, modular, &candidate)?)?;
                evals += 1;
                if s > best_entropy + 1e-12 {
                    best_entropy = s;
                    best_unitary = candidate;
                    params = trial;
                    improved = true;
                }
                if evals >= MAX_EVALS {
                    break;
                }
            }
            if evals >= MAX_EVALS {
                break;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok((best_entropy, best_unitary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::State;
    use approx::assert_relative_eq;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn gns_diag(lambdas: &[f64]) -> GnsData {
        let spec = BlockSpec::new(vec![lambdas.len()]).unwrap();
        let omega = State::from_diagonal(spec, lambdas).unwrap();
        GnsData::build(&omega, 1e-10).unwrap()
    }

    fn unit_class(gns: &GnsData, i: usize, j: usize) -> CVector {
        let u = AlgebraElement::matrix_unit(gns.spec(), 0, i, j).unwrap();
        gns.class_vector(&u).unwrap()
    }

    #[test]
    fn modular_requires_faithful_single_block() {
        let g = gns_diag(&[1.0, 0.0]);
        assert!(matches!(tomita_modular(&g), Err(Error::FaithfulnessRequired(_))));

        let spec = BlockSpec::new(vec![2, 2]).unwrap();
        let omega = State::from_diagonal(spec, &[0.1, 0.2, 0.3, 0.4]).unwrap();
        let g = GnsData::build(&omega, 1e-10).unwrap();
        assert!(matches!(tomita_modular(&g), Err(Error::Unsupported(_))));
    }

    #[test]
    fn involution_acts_as_adjoint_on_classes() {
        let gns = gns_diag(&[0.25, 0.75]);
        let m = tomita_modular(&gns).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let a = AlgebraElement::random(gns.spec(), &mut rng);
            let lhs = m.apply_s(&gns.class_vector(&a).unwrap());
            let rhs = gns.class_vector(&a.adjoint()).unwrap();
            assert!((lhs - rhs).norm() <= 1e-10);
        }
    }

    #[test]
    fn modular_identities_hold() {
        for lambdas in [vec![0.25, 0.75], vec![0.1, 0.3, 0.6]] {
            let gns = gns_diag(&lambdas);
            let m = tomita_modular(&gns).unwrap();
            let d = m.dim();

            // J² = 1
            let jj = m.j_matrix() * m.j_matrix().conjugate();
            assert!(linalg::deviation_from_identity(&jj) <= 1e-10);

            // antiunitarity: ⟨Jv, Jw⟩ = ⟨w, v⟩
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
            for _ in 0..10 {
                let v: CVector = linalg::complex_gaussian(&mut rng, d, 1).column(0).into_owned();
                let w: CVector = linalg::complex_gaussian(&mut rng, d, 1).column(0).into_owned();
                let lhs = m.apply_j(&v).dotc(&m.apply_j(&w));
                let rhs = w.dotc(&v);
                assert!((lhs - rhs).norm() <= 1e-10 * v.norm() * w.norm());
            }

            // polar relation S = J ∘ Δ^{1/2}
            let recomposed = m.j_matrix() * linalg::psd_sqrt(m.delta()).conjugate();
            assert!((recomposed - m.s_matrix()).norm() <= 1e-10);

            // Δ positive definite with spectrum {λ_i / λ_j}
            let (dvals, _) = linalg::hermitian_eigen(m.delta());
            assert!(dvals.iter().all(|v| *v > 0.0));
            let mut expected: Vec<f64> = lambdas
                .iter()
                .flat_map(|li| lambdas.iter().map(move |lj| li / lj))
                .collect();
            expected.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for (got, want) in dvals.iter().zip(expected.iter()) {
                assert_relative_eq!(got, want, epsilon = 1e-9);
            }

            // JΩ = Ω
            let omega = gns.cyclic_vector();
            assert!((m.apply_j(omega) - omega).norm() <= 1e-10);

            // J π(a) J lands in the commutant
            for rep in gns.unit_reps() {
                let y = m.j_conjugate(rep);
                for other in gns.unit_reps() {
                    let comm = &y * other - other * &y;
                    assert!(linalg::spectral_norm(&comm) <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn j_matches_matrix_unit_formula_for_diagonal_states() {
        // tracial: J|e_ij⟩ = |e_ji⟩, Δ = 1
        let gns = gns_diag(&[0.5, 0.5]);
        let m = tomita_modular(&gns).unwrap();
        assert!(linalg::deviation_from_identity(m.delta()) <= 1e-10);
        for i in 0..2 {
            for j in 0..2 {
                let lhs = m.apply_j(&unit_class(&gns, i, j));
                let rhs = unit_class(&gns, j, i);
                assert!((lhs - rhs).norm() <= 1e-10);
            }
        }

        // λ = (0.25, 0.75): J|e_ij⟩ = √(λ_j/λ_i) |e_ji⟩, so the coefficient
        // on the unnormalized e_12 class is √3
        let lambdas = [0.25, 0.75];
        let gns = gns_diag(&lambdas);
        let m = tomita_modular(&gns).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let lhs = m.apply_j(&unit_class(&gns, i, j));
                let coeff = (lambdas[j] / lambdas[i]).sqrt();
                let rhs = unit_class(&gns, j, i) * r(coeff);
                assert!((lhs - rhs).norm() <= 1e-10, "unit ({i},{j})");
            }
        }
        let lhs = m.apply_j(&unit_class(&gns, 0, 1));
        let rhs = unit_class(&gns, 1, 0) * r(3.0f64.sqrt());
        assert!((lhs - rhs).norm() <= 1e-10);
    }

    #[test]
    fn gauge_unitaries_form_a_commutant_group() {
        let gns = gns_diag(&[0.25, 0.75]);
        let m = tomita_modular(&gns).unwrap();
        let spec = gns.spec().clone();

        // U(1) = identity
        let u1 = gauge_unitary(&gns, &m, &AlgebraElement::identity(&spec)).unwrap();
        assert!(linalg::deviation_from_identity(&u1) <= 1e-10);

        // swap on the tracial state squares to the identity
        let tracial = gns_diag(&[0.5, 0.5]);
        let mt = tomita_modular(&tracial).unwrap();
        let swap = AlgebraElement::matrix_unit(&spec, 0, 0, 1)
            .unwrap()
            .try_add(&AlgebraElement::matrix_unit(&spec, 0, 1, 0).unwrap())
            .unwrap();
        let u_swap = gauge_unitary(&tracial, &mt, &swap).unwrap();
        // oracle: direct antilinear composition J·conj(π(g))·conj(J)
        let oracle = mt.j_matrix() * tracial.represent(&swap).unwrap().conjugate()
            * mt.j_matrix().conjugate();
        assert!((&u_swap - oracle).norm() <= 1e-12);
        assert!(linalg::deviation_from_identity(&(&u_swap * &u_swap))<= 1e-10);

        // unitary, multiplicative, and in the commutant on random pairs
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for trial in 0..50 {
            let g = haar_unitary(2, 100 + trial).unwrap();
            let h = haar_unitary(2, 200 + trial).unwrap();
            let ug = gauge_unitary(&gns, &m, &g).unwrap();
            let uh = gauge_unitary(&gns, &m, &h).unwrap();
            assert!(linalg::deviation_from_identity(&(ug.adjoint() * &ug)) <= 1e-10);
            let ugh = gauge_unitary(&gns, &m, &g.try_mul(&h).unwrap()).unwrap();
            assert!((&ug * &uh - ugh).norm() <= 1e-10);
            let a = AlgebraElement::random(gns.spec(), &mut rng);
            let rep = gns.represent(&a).unwrap();
            assert!(linalg::spectral_norm(&(&ug * &rep - &rep * &ug)) <= 1e-10 * a.operator_norm().max(1.0));
        }
    }

    #[test]
    fn non_unitary_gauge_input_is_rejected() {
        let gns = gns_diag(&[0.25, 0.75]);
        let m = tomita_modular(&gns).unwrap();
        let bad = AlgebraElement::matrix_unit(gns.spec(), 0, 0, 0).unwrap();
        assert!(matches!(
            gauge_unitary(&gns, &m, &bad),
            Err(Error::InvalidUnitary { .. })
        ));
        assert!(matches!(
            gauge_projectors(&gns, &m, &bad),
            Err(Error::InvalidUnitary { .. })
        ));
    }

    #[test]
    fn baseline_family_is_the_column_family() {
        let lambdas = [0.25, 0.75];
        let gns = gns_diag(&lambdas);
        let m = tomita_modular(&gns).unwrap();
        let family = baseline_projectors(&gns, &m).unwrap();
        assert_eq!(family.len(), 2);

        // oracle: P^(k) = Σ_i |ê_ik⟩⟨ê_ik| built from normalized unit classes
        for (k, p) in family.projectors().iter().enumerate() {
            let mut expected = CMatrix::zeros(4, 4);
            for i in 0..2 {
                let v = unit_class(&gns, i, k) / r(lambdas[k].sqrt());
                expected += &v * v.adjoint();
            }
            assert!((p - expected).norm() <= 1e-10, "P^({k})");
        }

        // agrees with gauge conjugation: P_g = U(g) P U(g)†
        let g = haar_unitary(2, 77).unwrap();
        let deformed = gauge_projectors(&gns, &m, &g).unwrap();
        let u = gauge_unitary(&gns, &m, &g).unwrap();
        for (pg, p) in deformed.projectors().iter().zip(family.projectors()) {
            let expected = &u * p * u.adjoint();
            assert!((pg - expected).norm() <= 1e-10);
        }
    }

    #[test]
    fn hadamard_gauge_moves_the_tracial_family() {
        let gns = gns_diag(&[0.5, 0.5]);
        let m = tomita_modular(&gns).unwrap();
        let baseline = baseline_projectors(&gns, &m).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let hadamard = AlgebraElement::new(
            gns.spec().clone(),
            vec![CMatrix::from_row_slice(2, 2, &[r(s), r(s), r(s), -r(s)])],
        )
        .unwrap();
        let deformed = gauge_projectors(&gns, &m, &hadamard).unwrap();
        let max_dist = baseline
            .projectors()
            .iter()
            .zip(deformed.projectors())
            .map(|(p, q)| (p - q).norm())
            .fold(0.0f64, f64::max);
        assert!(max_dist > 0.1, "family should move, distance {max_dist}");
        // completeness still holds for any unitary
        let sum: CMatrix = deformed.projectors().iter().sum();
        assert!(linalg::deviation_from_identity(&sum) <= 1e-10);
    }

    #[test]
    fn gauge_density_spectrum_and_pairing() {
        let lambdas = [0.25, 0.75];
        let gns = gns_diag(&lambdas);
        let m = tomita_modular(&gns).unwrap();

        // u = 1: spectrum {λ_k} ∪ {0}
        let rho = gauge_density(&gns, &m, &AlgebraElement::identity(gns.spec())).unwrap();
        let spec = entropy::spectrum(&rho).unwrap();
        for (got, want) in spec.eigenvalues().iter().zip([0.75, 0.25, 0.0, 0.0]) {
            assert_relative_eq!(*got, want, epsilon = 1e-10);
        }

        // pairing holds for random unitaries, entropy of the swap is baseline
        let omega = gns.state().clone();
        for seed in 0..20 {
            let g = haar_unitary(2, seed).unwrap();
            let rho = gauge_density(&gns, &m, &g).unwrap();
            let dev = crate::decomposition::verify_pairing(&gns, &rho, &omega, 20, seed).unwrap();
            assert!(dev <= 1e-10, "seed {seed}: pairing deviation {dev}");
        }

        let swap = AlgebraElement::matrix_unit(gns.spec(), 0, 0, 1)
            .unwrap()
            .try_add(&AlgebraElement::matrix_unit(gns.spec(), 0, 1, 0).unwrap())
            .unwrap();
        let rho_swap = gauge_density(&gns, &m, &swap).unwrap();
        let s_swap = entropy::von_neumann_entropy(&rho_swap).unwrap();
        let baseline = entropy::entropy_of_spectrum(&lambdas);
        assert_relative_eq!(s_swap, baseline, epsilon = 1e-9);
    }

    #[test]
    fn haar_unitary_properties() {
        // n = 1: unit-modulus scalar
        let u = haar_unitary(1, 3).unwrap();
        assert_relative_eq!(u.block(0)[(0, 0)].norm(), 1.0, epsilon = 1e-12);

        // determinism and unitarity
        let a = haar_unitary(3, 42).unwrap();
        let b = haar_unitary(3, 42).unwrap();
        assert_eq!(a.block(0).as_slice(), b.block(0).as_slice());
        assert!(a.unitary_deviation() <= 1e-12);
        let c = haar_unitary(3, 43).unwrap();
        assert!((a.block(0) - c.block(0)).norm() > 1e-3);
    }

    #[test]
    fn haar_first_entry_moment() {
        // ∫ |u_11|² dU = 1/n
        let draws = 10_000;
        let mut acc = 0.0;
        for seed in 0..draws {
            let u = haar_unitary(2, seed).unwrap();
            acc += u.block(0)[(0, 0)].norm_sqr();
        }
        let mean = acc / draws as f64;
        assert!((mean - 0.5).abs() < 0.02, "mean |u_11|² = {mean}");
    }

    #[test]
    fn scan_respects_entropy_bounds() {
        let gns = gns_diag(&[0.25, 0.75]);
        let m = tomita_modular(&gns).unwrap();
        let report = entropy_scan(&gns, &m, 200, 0, false).unwrap();
        let baseline = entropy::entropy_of_spectrum(&[0.25, 0.75]);
        assert_relative_eq!(report.baseline_entropy, baseline, epsilon = 1e-9);
        assert!(report.min_entropy >= report.baseline_entropy - 1e-9);
        assert!(report.max_entropy <= (2.0f64).ln() + 1e-9);
        assert_eq!(report.entropies.len(), 200);
        // determinism
        let again = entropy_scan(&gns, &m, 200, 0, false).unwrap();
        assert_eq!(report.entropies, again.entropies);
        // a different seed explores different unitaries
        let other = entropy_scan(&gns, &m, 200, 1, false).unwrap();
        assert_ne!(report.entropies, other.entropies);
    }

    #[test]
    fn tracial_scan_is_constant_at_log_n() {
        let gns = gns_diag(&[0.5, 0.5]);
        let m = tomita_modular(&gns).unwrap();
        let report = entropy_scan(&gns, &m, 100, 5, false).unwrap();
        let ln2 = std::f64::consts::LN_2;
        assert_relative_eq!(report.baseline_entropy, ln2, epsilon = 1e-9);
        for s in &report.entropies {
            assert_relative_eq!(*s, ln2, epsilon = 1e-9);
        }
    }

    #[test]
    fn refinement_only_improves_the_maximum() {
        let gns = gns_diag(&[0.25, 0.75]);
        let m = tomita_modular(&gns).unwrap();
        let plain = entropy_scan(&gns, &m, 25, 7, false).unwrap();
        let refined = entropy_scan(&gns, &m, 25, 7, true).unwrap();
        assert_eq!(plain.max_entropy, refined.max_entropy);
        let (s, u) = refined.refined.as_ref().expect("refine requested");
        assert!(*s >= refined.max_entropy);
        assert!(*s <= (2.0f64).ln() + 1e-9);
        assert!(u.unitary_deviation() <= 1e-10);
        // the refined entropy is reproduced by evaluating its unitary
        let rho = gauge_density(&gns, &m, u).unwrap();
        assert_relative_eq!(entropy::von_neumann_entropy(&rho).unwrap(), *s, epsilon = 1e-9);
    }
}
