//! Dense linear-algebra helpers shared by the GNS pipeline.
//!
//! Everything here operates on small matrices (a few hundred rows at most),
//! so plain dense decompositions are used throughout. Eigenvector output is
//! made reproducible by a fixed ordering and phase convention: descending
//! eigenvalue, ties broken lexicographically on the phase-fixed coefficient
//! sequence, and the first significant coefficient of each vector rotated to
//! the positive real axis.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::{C64, CMatrix, CVector};

/// Coefficients with modulus below this are skipped when fixing the phase of
/// an eigenvector.
const PHASE_FIX_CUTOFF: f64 = 1e-10;

/// (ρ + ρ†)/2.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Max entrywise modulus of m - m†.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(0.0, |acc, s| acc.max(*s))
}

/// Frobenius norm of the difference to the identity.
pub fn deviation_from_identity(m: &CMatrix) -> f64 {
    let mut d = m.clone();
    for i in 0..d.nrows().min(d.ncols()) {
        d[(i, i)] -= C64::new(1.0, 0.0);
    }
    d.norm()
}

/// Rotate `v` so that its first coefficient with modulus above the cutoff is
/// real and positive. Leaves the zero vector untouched.
pub fn fix_phase(v: &mut CVector) {
    if let Some(c) = v.iter().find(|c| c.norm() > PHASE_FIX_CUTOFF) {
        let phase = c.conj() / c.norm();
        *v *= phase;
    }
}

fn lex_less(a: &CVector, b: &CVector) -> bool {
    for (x, y) in a.iter().zip(b.iter()) {
        if (x.re - y.re).abs() > 1e-12 {
            return x.re < y.re;
        }
        if (x.im - y.im).abs() > 1e-12 {
            return x.im < y.im;
        }
    }
    false
}

/// Eigendecomposition of a Hermitian matrix with the crate's deterministic
/// ordering. The input is symmetrized first; eigenvalues come out descending
/// with phase-fixed eigenvectors.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, Vec<CVector>) {
    assert_eq!(m.nrows(), m.ncols(), "hermitian_eigen needs a square matrix");
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut pairs: Vec<(f64, CVector)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(idx, &val)| {
            let mut v: CVector = eig.eigenvectors.column(idx).into_owned();
            fix_phase(&mut v);
            (val, v)
        })
        .collect();
    pairs.sort_by(|(va, ua), (vb, ub)| {
        vb.partial_cmp(va).unwrap_or(std::cmp::Ordering::Equal).then_with(|| {
            if lex_less(ua, ub) {
                std::cmp::Ordering::Less
            } else if lex_less(ub, ua) {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        })
    });
    pairs.into_iter().unzip()
}

/// Hermitian square root of a positive semidefinite matrix. Eigenvalues below
/// zero (numerical noise) are clamped before the root.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    apply_spectral(m, |x| x.max(0.0).sqrt())
}

/// Inverse Hermitian square root of a positive definite matrix.
pub fn psd_inv_sqrt(m: &CMatrix) -> CMatrix {
    apply_spectral(m, |x| 1.0 / x.max(f64::MIN_POSITIVE).sqrt())
}

fn apply_spectral(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(m);
    let d = m.nrows();
    let mut out = CMatrix::zeros(d, d);
    for (val, v) in vals.iter().zip(vecs.iter()) {
        let fv = f(*val);
        if fv != 0.0 {
            out += (v * v.adjoint()) * C64::new(fv, 0.0);
        }
    }
    out
}

/// exp(iH) for Hermitian H; the result is unitary.
pub fn exp_i_hermitian(h: &CMatrix) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(h);
    let d = h.nrows();
    let mut out = CMatrix::zeros(d, d);
    for (val, v) in vals.iter().zip(vecs.iter()) {
        out += (v * v.adjoint()) * C64::new(val.cos(), val.sin());
    }
    out
}

/// Row-major Kronecker product (left factor outer).
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let scaled = b * a[(i, j)];
            out.view_mut((i * br, j * bc), (br, bc)).copy_from(&scaled);
        }
    }
    out
}

/// Rank of a matrix: number of singular values above `rel_tol` times the
/// largest one.
pub fn rank(m: &CMatrix, rel_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().fold(0.0f64, |acc, s| acc.max(*s));
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > rel_tol * max).count()
}

/// Matrix with independent complex Gaussian entries (real and imaginary
/// parts N(0, 1/2) so that E|z|² = 1).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}
