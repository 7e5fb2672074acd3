//! Finite-dimensional C*-algebras as direct sums of matrix blocks.
//!
//! An algebra ⊕ₖ M_{n_k}(ℂ) is described by its [`BlockSpec`] (the list of
//! block sizes) and carried by [`AlgebraElement`]s holding one dense complex
//! matrix per block. Matrix units are enumerated in (block, row, col)
//! row-major order; that fixed order is the coordinate system used by the
//! Gram matrix, embeddings and every serialized artifact.
//!
//! Tensor products use the row-major Kronecker convention with the left
//! factor outermost, so `e_11 ⊗ e_22` on M_2 ⊗ M_2 has its single entry at
//! position (1, 3) of the 4×4 carrier.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg;
use crate::{C64, CMatrix, CVector};

/// Block structure [n_1, …, n_K] of a finite-dimensional C*-algebra
/// ⊕ₖ M_{n_k}(ℂ).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockSpec {
    blocks: Vec<usize>,
}

impl BlockSpec {
    /// Validates the block list: non-empty, every size ≥ 1.
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidSpec("block list is empty".into()));
        }
        if let Some(n) = blocks.iter().find(|n| **n == 0) {
            return Err(Error::InvalidSpec(format!("block size {n} must be ≥ 1")));
        }
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Linear dimension d_A = Σ n_k².
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|n| n * n).sum()
    }

    pub fn is_single_block(&self) -> bool {
        self.blocks.len() == 1
    }

    /// Offset of block k in the matrix-unit enumeration.
    fn block_offset(&self, k: usize) -> usize {
        self.blocks[..k].iter().map(|n| n * n).sum()
    }

    /// Flat index of the matrix unit e_ij of block k.
    pub fn unit_index(&self, k: usize, i: usize, j: usize) -> Result<usize> {
        let n = *self
            .blocks
            .get(k)
            .ok_or_else(|| Error::IndexOutOfRange(format!("block {k} of {}", self.num_blocks())))?;
        if i >= n || j >= n {
            return Err(Error::IndexOutOfRange(format!(
                "unit ({i},{j}) of block {k} with size {n}"
            )));
        }
        Ok(self.block_offset(k) + i * n + j)
    }

    /// Inverse of [`unit_index`](Self::unit_index).
    pub fn unit_coords(&self, mut idx: usize) -> (usize, usize, usize) {
        for (k, n) in self.blocks.iter().enumerate() {
            if idx < n * n {
                return (k, idx / n, idx % n);
            }
            idx -= n * n;
        }
        panic!("unit index {idx} out of range");
    }

    /// Matrix units in enumeration order.
    pub fn units(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.blocks
            .iter()
            .enumerate()
            .flat_map(|(k, &n)| (0..n).flat_map(move |i| (0..n).map(move |j| (k, i, j))))
    }
}

/// Element of ⊕ₖ M_{n_k}(ℂ): one dense complex matrix per block.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    spec: BlockSpec,
    blocks: Vec<CMatrix>,
}

impl AlgebraElement {
    /// Wraps block matrices after checking their shapes against the spec.
    pub fn new(spec: BlockSpec, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != spec.num_blocks() {
            return Err(Error::ShapeMismatch(format!(
                "{} block matrices for a {}-block spec",
                blocks.len(),
                spec.num_blocks()
            )));
        }
        for (k, (m, &n)) in blocks.iter().zip(spec.blocks()).enumerate() {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::ShapeMismatch(format!(
                    "block {k} is {}×{}, expected {n}×{n}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(Self { spec, blocks })
    }

    pub fn zero(spec: &BlockSpec) -> Self {
        let blocks = spec.blocks().iter().map(|&n| CMatrix::zeros(n, n)).collect();
        Self { spec: spec.clone(), blocks }
    }

    pub fn identity(spec: &BlockSpec) -> Self {
        let blocks = spec.blocks().iter().map(|&n| CMatrix::identity(n, n)).collect();
        Self { spec: spec.clone(), blocks }
    }

    /// Matrix unit e_ij of block k: a single 1 at (i, j).
    pub fn matrix_unit(spec: &BlockSpec, k: usize, i: usize, j: usize) -> Result<Self> {
        spec.unit_index(k, i, j)?;
        let mut el = Self::zero(spec);
        el.blocks[k][(i, j)] = C64::new(1.0, 0.0);
        Ok(el)
    }

    /// Element with independent complex Gaussian entries in every block.
    pub fn random<R: Rng + ?Sized>(spec: &BlockSpec, rng: &mut R) -> Self {
        let blocks = spec
            .blocks()
            .iter()
            .map(|&n| linalg::complex_gaussian(rng, n, n))
            .collect();
        Self { spec: spec.clone(), blocks }
    }

    pub fn spec(&self) -> &BlockSpec {
        &self.spec
    }

    pub fn block(&self, k: usize) -> &CMatrix {
        &self.blocks[k]
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    /// Blockwise conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let blocks = self.blocks.iter().map(|m| m.adjoint()).collect();
        Self { spec: self.spec.clone(), blocks }
    }

    pub fn scale(&self, c: C64) -> Self {
        let blocks = self.blocks.iter().map(|m| m * c).collect();
        Self { spec: self.spec.clone(), blocks }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_spec(other)?;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect();
        Ok(Self { spec: self.spec.clone(), blocks })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_spec(other)?;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a - b).collect();
        Ok(Self { spec: self.spec.clone(), blocks })
    }

    /// Blockwise matrix product.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_spec(other)?;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * b).collect();
        Ok(Self { spec: self.spec.clone(), blocks })
    }

    fn check_same_spec(&self, other: &Self) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::ShapeMismatch(format!(
                "block specs differ: {:?} vs {:?}",
                self.spec.blocks(),
                other.spec.blocks()
            )));
        }
        Ok(())
    }

    /// C*-norm: max over blocks of the largest singular value.
    pub fn operator_norm(&self) -> f64 {
        self.blocks.iter().map(linalg::spectral_norm).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.blocks.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt()
    }

    /// ‖u*u - 1‖ in operator norm.
    pub fn unitary_deviation(&self) -> f64 {
        let prod = self.adjoint().try_mul(self).expect("same spec");
        prod.try_sub(&Self::identity(&self.spec))
            .expect("same spec")
            .operator_norm()
    }

    /// Coefficient vector over the matrix units in enumeration order.
    pub fn coefficients(&self) -> CVector {
        let mut out = CVector::zeros(self.spec.dim());
        for (k, m) in self.blocks.iter().enumerate() {
            let n = self.spec.blocks()[k];
            let off = self.spec.block_offset(k);
            for i in 0..n {
                for j in 0..n {
                    out[off + i * n + j] = m[(i, j)];
                }
            }
        }
        out
    }

    /// Rebuilds an element from its matrix-unit coefficient vector.
    pub fn from_coefficients(spec: &BlockSpec, coeffs: &CVector) -> Result<Self> {
        if coeffs.len() != spec.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} coefficients for dimension {}",
                coeffs.len(),
                spec.dim()
            )));
        }
        let mut el = Self::zero(spec);
        for (k, &n) in spec.blocks().iter().enumerate() {
            let off = spec.block_offset(k);
            for i in 0..n {
                for j in 0..n {
                    el.blocks[k][(i, j)] = coeffs[off + i * n + j];
                }
            }
        }
        Ok(el)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, m) in self.blocks.iter().enumerate() {
            writeln!(f, "block {k}:")?;
            write!(f, "{m:.4}")?;
        }
        Ok(())
    }
}

macro_rules! element_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &AlgebraElement {
            type Output = AlgebraElement;
            fn $method(self, rhs: &AlgebraElement) -> AlgebraElement {
                self.$checked(rhs).expect("block spec mismatch")
            }
        }
        impl $trait for AlgebraElement {
            type Output = AlgebraElement;
            fn $method(self, rhs: AlgebraElement) -> AlgebraElement {
                (&self).$checked(&rhs).expect("block spec mismatch")
            }
        }
    };
}

element_binop!(Add, add, try_add);
element_binop!(Sub, sub, try_sub);
element_binop!(Mul, mul, try_mul);

impl Mul<C64> for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: C64) -> AlgebraElement {
        self.scale(rhs)
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(C64::new(-1.0, 0.0))
    }
}

/// Carrier spec of the tensor product M_n ⊗ M_m ≅ M_{nm}. Only single-block
/// factors are supported.
pub fn tensor_spec(a: &BlockSpec, b: &BlockSpec) -> Result<BlockSpec> {
    let (&[n], &[m]) = (a.blocks(), b.blocks()) else {
        return Err(Error::Unsupported(
            "tensor products are only defined for single-block algebras".into(),
        ));
    };
    BlockSpec::new(vec![n * m])
}

/// a ⊗ b on the carrier returned by [`tensor_spec`].
pub fn tensor_product(a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
    let spec = tensor_spec(a.spec(), b.spec())?;
    let m = linalg::kron(a.block(0), b.block(0));
    AlgebraElement::new(spec, vec![m])
}

/// A unital *-homomorphism of one block algebra into another, stored
/// extensionally: the image of every matrix unit of the source, in
/// enumeration order.
#[derive(Debug, Clone)]
pub struct Embedding {
    source: BlockSpec,
    target: BlockSpec,
    images: Vec<AlgebraElement>,
}

impl Embedding {
    /// Wraps the image list after shape validation. Use [`check`](Self::check)
    /// to verify the homomorphism axioms.
    pub fn new(source: BlockSpec, target: BlockSpec, images: Vec<AlgebraElement>) -> Result<Self> {
        if images.len() != source.dim() {
            return Err(Error::InvalidEmbedding(format!(
                "{} images for a source of dimension {}",
                images.len(),
                source.dim()
            )));
        }
        for img in &images {
            if img.spec() != &target {
                return Err(Error::InvalidEmbedding(
                    "image element lives on a different spec than the target".into(),
                ));
            }
        }
        Ok(Self { source, target, images })
    }

    /// The identity embedding of a spec into itself.
    pub fn identity(spec: &BlockSpec) -> Self {
        let images = spec
            .units()
            .map(|(k, i, j)| AlgebraElement::matrix_unit(spec, k, i, j).expect("valid unit"))
            .collect();
        Self { source: spec.clone(), target: spec.clone(), images }
    }

    pub fn source(&self) -> &BlockSpec {
        &self.source
    }

    pub fn target(&self) -> &BlockSpec {
        &self.target
    }

    pub fn images(&self) -> &[AlgebraElement] {
        &self.images
    }

    /// Linear extension of the unit images: ι(x) = Σ x_{kij} ι(e_ij^{(k)}).
    pub fn apply(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        if x.spec() != &self.source {
            return Err(Error::ShapeMismatch(
                "element does not live on the embedding source".into(),
            ));
        }
        let coeffs = x.coefficients();
        let mut out = AlgebraElement::zero(&self.target);
        for (c, img) in coeffs.iter().zip(&self.images) {
            if c.norm_sqr() != 0.0 {
                out = out.try_add(&img.scale(*c))?;
            }
        }
        Ok(out)
    }

    /// Runs all embedding checks; an empty report means the map is a unital
    /// injective *-homomorphism (to tolerance 1e-12 on unit pairs).
    pub fn check(&self) -> Vec<EmbeddingViolation> {
        const TOL: f64 = 1e-12;
        let mut violations = Vec::new();
        let units: Vec<(usize, usize, usize)> = self.source.units().collect();

        let one = self
            .apply(&AlgebraElement::identity(&self.source))
            .expect("source element");
        let unital_dev = one
            .try_sub(&AlgebraElement::identity(&self.target))
            .expect("same spec")
            .operator_norm();
        if unital_dev > TOL {
            violations.push(EmbeddingViolation::NotUnital { deviation: unital_dev });
        }

        for (p, &(k, i, j)) in units.iter().enumerate() {
            let star_dev = self.images[p]
                .adjoint()
                .try_sub(&self.image_of_star(k, i, j))
                .expect("same spec")
                .operator_norm();
            if star_dev > TOL {
                violations.push(EmbeddingViolation::StarViolation { unit: (k, i, j), deviation: star_dev });
            }
        }

        for (p, &lu) in units.iter().enumerate() {
            for (q, &ru) in units.iter().enumerate() {
                let product = self.images[p].try_mul(&self.images[q]).expect("same spec");
                let expected = self.image_of_unit_product(lu, ru);
                let dev = product.try_sub(&expected).expect("same spec").operator_norm();
                if dev > TOL {
                    violations.push(EmbeddingViolation::NotMultiplicative {
                        left: lu,
                        right: ru,
                        deviation: dev,
                    });
                }
            }
        }

        let d_src = self.source.dim();
        let mut stacked = CMatrix::zeros(self.target.dim(), d_src);
        for (p, img) in self.images.iter().enumerate() {
            stacked.set_column(p, &img.coefficients());
        }
        let rank = linalg::rank(&stacked, 1e-10);
        if rank != d_src {
            violations.push(EmbeddingViolation::NotInjective { rank, expected: d_src });
        }

        violations
    }

    /// ι(e_ij*) = ι(e_ji).
    fn image_of_star(&self, k: usize, i: usize, j: usize) -> AlgebraElement {
        let idx = self.source.unit_index(k, j, i).expect("valid unit");
        self.images[idx].clone()
    }

    /// ι(e_ij e_kl) = δ_jk ι(e_il) within a block, zero across blocks.
    fn image_of_unit_product(
        &self,
        (k, i, j): (usize, usize, usize),
        (k2, i2, j2): (usize, usize, usize),
    ) -> AlgebraElement {
        if k == k2 && j == i2 {
            let idx = self.source.unit_index(k, i, j2).expect("valid unit");
            self.images[idx].clone()
        } else {
            AlgebraElement::zero(&self.target)
        }
    }
}

/// Embedding of M_n into M_{nm} sending α ↦ α ⊗ 1_m.
pub fn embed_left_factor(a: &BlockSpec, b: &BlockSpec) -> Result<Embedding> {
    let (&[_], &[m]) = (a.blocks(), b.blocks()) else {
        return Err(Error::Unsupported(
            "factor embeddings are only defined for single-block algebras".into(),
        ));
    };
    let target = tensor_spec(a, b)?;
    let one_m = CMatrix::identity(m, m);
    let images = a
        .units()
        .map(|(_, i, j)| {
            let unit = AlgebraElement::matrix_unit(a, 0, i, j).expect("valid unit");
            let img = linalg::kron(unit.block(0), &one_m);
            AlgebraElement::new(target.clone(), vec![img]).expect("shape by construction")
        })
        .collect();
    Embedding::new(a.clone(), target, images)
}

/// One failed embedding axiom, with the offending units and the size of the
/// deviation.
#[derive(Debug, Clone, PartialEq)]
pub enum EmbeddingViolation {
    NotUnital { deviation: f64 },
    NotMultiplicative { left: (usize, usize, usize), right: (usize, usize, usize), deviation: f64 },
    StarViolation { unit: (usize, usize, usize), deviation: f64 },
    NotInjective { rank: usize, expected: usize },
}

impl fmt::Display for EmbeddingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotUnital { deviation } => {
                write!(f, "ι(1) ≠ 1 (deviation {deviation:.3e})")
            }
            Self::NotMultiplicative { left, right, deviation } => write!(
                f,
                "ι(xy) ≠ ι(x)ι(y) for units {left:?}, {right:?} (deviation {deviation:.3e})"
            ),
            Self::StarViolation { unit, deviation } => {
                write!(f, "ι(x*) ≠ ι(x)* for unit {unit:?} (deviation {deviation:.3e})")
            }
            Self::NotInjective { rank, expected } => {
                write!(f, "images span rank {rank} < {expected}")
            }
        }
    }
}
