//! Von Neumann entropy and spectral utilities for density operators.
//!
//! Entropies are in nats (natural logarithm); the CLI converts to bits for
//! display only.

use crate::decomposition::DensityOperator;
use crate::error::{Error, Result};
use crate::linalg;

/// Eigenvalues this far below zero are treated as roundoff and clamped.
const CLAMP_TOL: f64 = 1e-12;

/// Eigenvalues of a density operator: descending, clamped at zero, summing
/// to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

/// Clamped descending spectrum of ρ. Rejects operators whose Hermiticity
/// deviation exceeds 1e-8 (already enforced by [`DensityOperator`], checked
/// again here since this is the entry point for spectral data).
pub fn spectrum(rho: &DensityOperator) -> Result<Spectrum> {
    let herm = linalg::hermiticity_deviation(rho.matrix());
    if herm > 1e-8 {
        return Err(Error::InvalidDensity(format!(
            "not Hermitian (deviation {herm:.3e})"
        )));
    }
    let (vals, _) = linalg::hermitian_eigen(rho.matrix());
    let eigenvalues = vals
        .into_iter()
        .map(|v| if v < 0.0 && v > -CLAMP_TOL { 0.0 } else { v.max(0.0) })
        .collect();
    Ok(Spectrum { eigenvalues })
}

/// S(ρ) = −Σ pᵢ ln pᵢ with 0·ln 0 = 0, in nats.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    Ok(entropy_of_spectrum(spectrum(rho)?.eigenvalues()))
}

/// Entropy of a probability vector, clamped at zero from below.
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> f64 {
    let s: f64 = eigenvalues
        .iter()
        .filter(|p| **p > 0.0)
        .map(|p| -p * p.ln())
        .sum();
    s.max(0.0)
}

/// −λ ln λ − (1−λ) ln(1−λ), the entropy of the reduced ψ_λ state; zero at
/// the endpoints.
pub fn binary_entropy(lambda: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::LambdaOutOfRange(lambda));
    }
    Ok(entropy_of_spectrum(&[lambda, 1.0 - lambda]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{C64, CMatrix, CVector};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn diag_density(values: &[f64]) -> DensityOperator {
        let v = CVector::from_iterator(values.len(), values.iter().map(|x| r(*x)));
        DensityOperator::new(CMatrix::from_diagonal(&v)).unwrap()
    }

    #[test]
    fn spectrum_sorts_and_clamps() {
        let rho = diag_density(&[0.3, 0.7]);
        assert_eq!(spectrum(&rho).unwrap().eigenvalues(), &[0.7, 0.3]);

        let mut v = CVector::zeros(3);
        v[1] = r(1.0);
        let rho = DensityOperator::pure(&v).unwrap();
        let s = spectrum(&rho).unwrap();
        assert_relative_eq!(s.eigenvalues()[0], 1.0, epsilon = 1e-12);
        assert!(s.eigenvalues()[1..].iter().all(|p| *p >= 0.0 && *p < 1e-12));
    }

    #[test]
    fn entropy_reference_values() {
        // pure state
        let mut v = CVector::zeros(4);
        v[2] = r(1.0);
        let rho = DensityOperator::pure(&v).unwrap();
        assert!(von_neumann_entropy(&rho).unwrap().abs() < 1e-12);

        // symmetric two-level
        let rho = diag_density(&[0.5, 0.5]);
        assert_relative_eq!(
            von_neumann_entropy(&rho).unwrap(),
            std::f64::consts::LN_2,
            epsilon = 1e-12
        );

        // frozen from -0.3 ln 0.3 - 0.7 ln 0.7
        let rho = diag_density(&[0.3, 0.7]);
        assert_relative_eq!(von_neumann_entropy(&rho).unwrap(), 0.610864, epsilon = 1e-6);
        assert_relative_eq!(
            von_neumann_entropy(&rho).unwrap(),
            0.6108643020548935,
            epsilon = 1e-14
        );
    }

    #[test]
    fn binary_entropy_reference_values() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_relative_eq!(binary_entropy(0.5).unwrap(), std::f64::consts::LN_2, epsilon = 1e-14);
        assert_relative_eq!(binary_entropy(0.3).unwrap(), 0.610864, epsilon = 1e-6);
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.1).is_err());
    }

    #[test]
    fn entropy_is_zero_iff_pure() {
        let rho = diag_density(&[1.0 - 1e-12, 1e-12]);
        assert!(von_neumann_entropy(&rho).unwrap() < 1e-9);
        let rho = diag_density(&[0.999, 0.001]);
        assert!(von_neumann_entropy(&rho).unwrap() > 1e-3);
    }

    #[test]
    fn entropy_bounded_by_log_dim_and_unitarily_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10 {
            let g = crate::linalg::complex_gaussian(&mut rng, 4, 4);
            let p = &g * g.adjoint();
            let rho = DensityOperator::new(&p / p.trace()).unwrap();
            let s = von_neumann_entropy(&rho).unwrap();
            assert!(s >= 0.0 && s <= (4.0f64).ln() + 1e-9);

            let h = crate::linalg::hermitian_part(&crate::linalg::complex_gaussian(&mut rng, 4, 4));
            let u = crate::linalg::exp_i_hermitian(&h);
            let rotated = DensityOperator::new(&u * rho.matrix() * u.adjoint()).unwrap();
            let s2 = von_neumann_entropy(&rotated).unwrap();
            assert!((s - s2).abs() <= 1e-9, "unitary invariance violated: {s} vs {s2}");
        }
    }

    #[test]
    fn concavity_spot_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..10 {
            let mk = |rng: &mut ChaCha8Rng| {
                let g = crate::linalg::complex_gaussian(rng, 3, 3);
                let p = &g * g.adjoint();
                DensityOperator::new(&p / p.trace()).unwrap()
            };
            let rho1 = mk(&mut rng);
            let rho2 = mk(&mut rng);
            for t in [0.25, 0.5, 0.75] {
                let blend = DensityOperator::new(
                    rho1.matrix() * r(t) + rho2.matrix() * r(1.0 - t),
                )
                .unwrap();
                let lhs = von_neumann_entropy(&blend).unwrap();
                let rhs = t * von_neumann_entropy(&rho1).unwrap()
                    + (1.0 - t) * von_neumann_entropy(&rho2).unwrap();
                assert!(lhs >= rhs - 1e-9, "concavity violated: {lhs} < {rhs}");
            }
        }
    }
}
