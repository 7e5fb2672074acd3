//! Commutant computation and decomposition of the GNS space into
//! irreducible invariant subspaces.
//!
//! The commutant π(𝒜)′ is obtained as the null space of the stacked
//! commutator map X ↦ [π(u), X] over all matrix units u. A generic Hermitian
//! element of the commutant has eigenspaces that refine the isotypic
//! decomposition into irreducible invariant subspaces; its eigenprojectors
//! therefore give a valid projector family once each block is certified
//! irreducible (restricted commutant of dimension one). Degenerate draws are
//! retried with the next seed.
//!
//! [`natural_projectors`] is the deterministic counterpart aligned with the
//! eigenbasis of the state's block weights: for diagonal faithful states it
//! is the column family P^(k) = Σᵢ |ê_ik⟩⟨ê_ik|, and the density operator it
//! induces has the block weights' spectrum. A seeded family generically
//! differs from it and yields a larger entropy; only the trace pairing
//! ω(a) = Tr(ρ π(a)) is family-independent.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::gns::GnsData;
use crate::linalg;
use crate::states::State;
use crate::{C64, CMatrix, CVector};

/// Absolute gap under which two eigenvalues of the normalized commutant draw
/// are clustered together.
const CLUSTER_GAP: f64 = 1e-8;
/// Retries before a degenerate decomposition is reported as an error.
const MAX_RETRIES: u64 = 16;
/// Residual tolerance for family validation.
const FAMILY_TOL: f64 = 1e-10;

/// Pairwise-orthogonal projectors summing to the identity on the GNS space.
#[derive(Debug, Clone)]
pub struct ProjectorFamily {
    dim: usize,
    projectors: Vec<CMatrix>,
}

impl ProjectorFamily {
    /// Validates Hermiticity, idempotency, pairwise orthogonality and
    /// completeness, all at 1e-10.
    pub fn new(projectors: Vec<CMatrix>) -> Result<Self> {
        let dim = projectors
            .first()
            .map(|p| p.nrows())
            .ok_or_else(|| Error::InvalidFamily("empty projector list".into()))?;
        let family = Self { dim, projectors };
        family.validate()?;
        Ok(family)
    }

    fn validate(&self) -> Result<()> {
        let mut sum = CMatrix::zeros(self.dim, self.dim);
        for (k, p) in self.projectors.iter().enumerate() {
            if p.nrows() != self.dim || p.ncols() != self.dim {
                return Err(Error::InvalidFamily(format!("projector {k} has wrong shape")));
            }
            let herm = linalg::hermiticity_deviation(p);
            if herm > FAMILY_TOL {
                return Err(Error::InvalidFamily(format!(
                    "projector {k} not Hermitian (deviation {herm:.3e})"
                )));
            }
            let idem = linalg::spectral_norm(&(p * p - p));
            if idem > FAMILY_TOL {
                return Err(Error::InvalidFamily(format!(
                    "projector {k} not idempotent (deviation {idem:.3e})"
                )));
            }
            for (l, q) in self.projectors.iter().enumerate().skip(k + 1) {
                let ortho = linalg::spectral_norm(&(p * q));
                if ortho > FAMILY_TOL {
                    return Err(Error::InvalidFamily(format!(
                        "projectors {k} and {l} overlap (deviation {ortho:.3e})"
                    )));
                }
            }
            sum += p;
        }
        let complete = linalg::deviation_from_identity(&sum);
        if complete > FAMILY_TOL {
            return Err(Error::InvalidFamily(format!(
                "family incomplete: ‖ΣP − 1‖ = {complete:.3e}"
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn projectors(&self) -> &[CMatrix] {
        &self.projectors
    }

    /// Max over projectors and matrix units of ‖[P, π(u)]‖.
    pub fn max_commutation_residual(&self, gns: &GnsData) -> f64 {
        let mut worst: f64 = 0.0;
        for p in &self.projectors {
            for rep in gns.unit_reps() {
                worst = worst.max(linalg::spectral_norm(&(p * rep - rep * p)));
            }
        }
        worst
    }
}

/// Positive unit-trace operator on the GNS space.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity (≤ 1e-8), positivity (eigenvalues ≥ −1e-12) and
    /// unit trace (≤ 1e-10).
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::InvalidDensity("matrix not square".into()));
        }
        let herm = linalg::hermiticity_deviation(&matrix);
        if herm > 1e-8 {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (deviation {herm:.3e})"
            )));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 {
            return Err(Error::InvalidDensity(format!("trace = {trace} ≠ 1")));
        }
        let (vals, _) = linalg::hermitian_eigen(&matrix);
        if let Some(bad) = vals.iter().find(|v| **v < -1e-12) {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {bad:.3e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// |v⟩⟨v| for a unit vector.
    pub fn pure(v: &CVector) -> Result<Self> {
        Self::new(v * v.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

fn unvec(v: &CVector, d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |i, j| v[j * d + i])
}

/// Hilbert–Schmidt-orthonormal basis of the commutant of an arbitrary family
/// of operators, as the null space of Σ C†C with C X = A X − X A.
fn commutant_of(reps: &[CMatrix], dim: usize) -> Vec<CMatrix> {
    let d2 = dim * dim;
    let mut normal = CMatrix::zeros(d2, d2);
    let id = CMatrix::identity(dim, dim);
    for a in reps {
        // vec(AX − XA) = (I⊗A − Aᵀ⊗I) vec(X), column-major vec
        let c = linalg::kron(&id, a) - linalg::kron(&a.transpose(), &id);
        normal += c.adjoint() * c;
    }
    let (vals, vecs) = linalg::hermitian_eigen(&normal);
    let cutoff = 1e-10 * vals.first().copied().unwrap_or(0.0).max(1.0);
    vals.iter()
        .zip(vecs)
        .filter(|(v, _)| **v < cutoff)
        .map(|(_, u)| unvec(&u, dim))
        .collect()
}

/// Hilbert–Schmidt-orthonormal basis of π(𝒜)′ on the GNS space. Each element
/// commutes with every represented matrix unit to within 1e-10.
pub fn commutant_basis(gns: &GnsData) -> Vec<CMatrix> {
    commutant_of(gns.unit_reps(), gns.hilbert_dim())
}

/// One irreducible invariant subspace: an orthonormal basis of its range and
/// the restricted representation's character on the matrix units.
#[derive(Debug, Clone)]
struct IrreducibleBlock {
    basis: CMatrix,
    character: CVector,
}

fn decompose(
    gns: &GnsData,
    commutant: &[CMatrix],
    seed: u64,
) -> Result<Vec<IrreducibleBlock>> {
    let d = gns.hilbert_dim();
    if commutant.len() == 1 {
        // already irreducible; the identity is the whole family
        return Ok(vec![block_from_basis(gns, CMatrix::identity(d, d))]);
    }
    for attempt in 0..MAX_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let coeffs = linalg::complex_gaussian(&mut rng, commutant.len(), 1);
        let mut draw = CMatrix::zeros(d, d);
        for (c, x) in coeffs.iter().zip(commutant) {
            draw += x * *c;
        }
        let herm = linalg::hermitian_part(&draw);
        let scale = linalg::spectral_norm(&herm);
        if scale < 1e-10 {
            continue;
        }
        let herm = herm / C64::new(scale, 0.0);
        let (vals, vecs) = linalg::hermitian_eigen(&herm);

        // cluster eigenvalues separated by less than the gap tolerance
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for (idx, val) in vals.iter().enumerate() {
            match clusters.last_mut() {
                Some(cluster) if (vals[*cluster.last().expect("nonempty")] - val).abs() < CLUSTER_GAP => {
                    cluster.push(idx)
                }
                _ => clusters.push(vec![idx]),
            }
        }

        let blocks: Vec<IrreducibleBlock> = clusters
            .iter()
            .map(|cluster| {
                let mut basis = CMatrix::zeros(d, cluster.len());
                for (c, &idx) in cluster.iter().enumerate() {
                    basis.set_column(c, &vecs[idx]);
                }
                block_from_basis(gns, basis)
            })
            .collect();

        let all_irreducible = blocks.iter().all(|b| {
            let r = b.basis.ncols();
            let restricted: Vec<CMatrix> = gns
                .unit_reps()
                .iter()
                .map(|rep| b.basis.adjoint() * rep * &b.basis)
                .collect();
            commutant_of(&restricted, r).len() == 1
        });
        if all_irreducible {
            return Ok(blocks);
        }
    }
    Err(Error::NumericalDegeneracy(format!(
        "no non-degenerate commutant draw after {MAX_RETRIES} retries from seed {seed}"
    )))
}

fn block_from_basis(gns: &GnsData, basis: CMatrix) -> IrreducibleBlock {
    let character = CVector::from_iterator(
        gns.unit_reps().len(),
        gns.unit_reps().iter().map(|rep| (basis.adjoint() * rep * &basis).trace()),
    );
    IrreducibleBlock { basis, character }
}

/// Decomposition of ℋ_ω into irreducible invariant subspaces from a seeded
/// random commutant draw. Deterministic for a fixed seed.
pub fn irreducible_projectors(gns: &GnsData, seed: u64) -> Result<ProjectorFamily> {
    let commutant = commutant_basis(gns);
    irreducible_projectors_with_commutant(gns, &commutant, seed)
}

/// Same as [`irreducible_projectors`] but reusing a precomputed commutant
/// basis, which is the expensive part when scanning many seeds.
pub fn irreducible_projectors_with_commutant(
    gns: &GnsData,
    commutant: &[CMatrix],
    seed: u64,
) -> Result<ProjectorFamily> {
    let blocks = decompose(gns, commutant, seed)?;
    let projectors = blocks.iter().map(|b| &b.basis * b.basis.adjoint()).collect();
    ProjectorFamily::new(projectors)
}

/// The deterministic projector family aligned with the eigenbasis of the
/// state's block weights: one irreducible subspace per block and per weight
/// eigenvector with nonzero eigenvalue, spanned by the classes of
/// |i⟩⟨f_c| / √λ_c. For diagonal faithful states on M_n this is exactly the
/// column family P^(k) = Σᵢ |ê_ik⟩⟨ê_ik|.
pub fn natural_projectors(gns: &GnsData) -> Result<ProjectorFamily> {
    let spec = gns.spec();
    let state = gns.state();
    let gram_max = gns.gram_spectrum().first().copied().unwrap_or(0.0);
    let cutoff = 1e-10 * gram_max;
    let mut projectors = Vec::new();
    for (k, &n) in spec.blocks().iter().enumerate() {
        let (vals, vecs) = linalg::hermitian_eigen(&state.weights()[k]);
        for (lambda, f) in vals.iter().zip(vecs.iter()) {
            if *lambda <= cutoff {
                continue;
            }
            let mut p = CMatrix::zeros(gns.hilbert_dim(), gns.hilbert_dim());
            for i in 0..n {
                // element |i⟩⟨f| in block k, zero elsewhere
                let row = CMatrix::from_fn(n, n, |r, c| {
                    if r == i { f[c].conj() } else { C64::new(0.0, 0.0) }
                });
                let blocks = spec
                    .blocks()
                    .iter()
                    .enumerate()
                    .map(|(l, &nl)| if l == k { row.clone() } else { CMatrix::zeros(nl, nl) })
                    .collect();
                let m = AlgebraElement::new(spec.clone(), blocks)?;
                let w = gns.class_vector(&m)? / C64::new(lambda.sqrt(), 0.0);
                p += &w * w.adjoint();
            }
            projectors.push(p);
        }
    }
    ProjectorFamily::new(projectors)
}

/// ρ = Σₖ P^(k) |Ω⟩⟨Ω| P^(k).
pub fn density_from_projectors(gns: &GnsData, family: &ProjectorFamily) -> Result<DensityOperator> {
    if family.dim() != gns.hilbert_dim() {
        return Err(Error::InvalidFamily(format!(
            "family on dimension {} for a GNS space of dimension {}",
            family.dim(),
            gns.hilbert_dim()
        )));
    }
    family.validate()?;
    let omega = gns.cyclic_vector();
    let d = gns.hilbert_dim();
    let mut rho = CMatrix::zeros(d, d);
    for p in family.projectors() {
        let v = p * omega;
        rho += &v * v.adjoint();
    }
    DensityOperator::new(rho)
}

/// Max over all matrix units plus `samples` seeded random elements of
/// |Tr(ρ π(a)) − ω(a)|.
pub fn verify_pairing(
    gns: &GnsData,
    rho: &DensityOperator,
    omega: &State,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if rho.dim() != gns.hilbert_dim() {
        return Err(Error::ShapeMismatch(
            "density operator does not live on the GNS space".into(),
        ));
    }
    let spec = gns.spec().clone();
    let mut elements: Vec<AlgebraElement> = spec
        .units()
        .map(|(k, i, j)| AlgebraElement::matrix_unit(&spec, k, i, j).expect("valid unit"))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    elements.extend((0..samples).map(|_| AlgebraElement::random(&spec, &mut rng)));

    let mut worst: f64 = 0.0;
    for a in &elements {
        let lhs = (rho.matrix() * gns.represent(a)?).trace();
        let rhs = omega.evaluate(a)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// Isotypic census of the GNS representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityReport {
    /// (irreducible dimension, multiplicity) pairs, sorted by dimension.
    pub census: Vec<(usize, usize)>,
    /// True exactly when every multiplicity is ≤ 1, i.e. the decomposition
    /// into irreducible subspaces (and hence the extracted density operator)
    /// is unique.
    pub unique: bool,
}

/// Isotypic census from the seed-0 decomposition: blocks are grouped into
/// equivalence classes by the characters of their restricted representations.
pub fn multiplicities(gns: &GnsData) -> Result<MultiplicityReport> {
    let commutant = commutant_basis(gns);
    let blocks = decompose(gns, &commutant, 0)?;
    let mut classes: Vec<(usize, CVector, usize)> = Vec::new();
    for b in &blocks {
        let dim = b.basis.ncols();
        match classes
            .iter_mut()
            .find(|(d, chi, _)| *d == dim && (chi - &b.character).norm() < 1e-6)
        {
            Some((_, _, count)) => *count += 1,
            None => classes.push((dim, b.character.clone(), 1)),
        }
    }
    let mut census: Vec<(usize, usize)> = classes.iter().map(|(d, _, c)| (*d, *c)).collect();
    census.sort();
    let unique = census.iter().all(|(_, m)| *m <= 1);
    Ok(MultiplicityReport { census, unique })
}
