//! Simon separability function and symplectic diagnostics.

use serde::Serialize;

use crate::gaussian::{CovarianceMatrix, TwoByTwo};

/// `[[0, 1], [−1, 0]]`.
pub const SYMPLECTIC_J: TwoByTwo = TwoByTwo([0.0, 1.0, -1.0, 0.0]);

/// Uncertainty-relation slack below ν = 1/2 before a state is flagged.
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// Simon separability function. Negative means entangled.
///
/// `S = det A1·det A2 + (1/4 − |det C|)² − Tr[A1 J C J A2 J Cᵀ J] − (det A1 + det A2)/4`
pub fn simon_separability(sigma: &CovarianceMatrix) -> f64 {
    let j = SYMPLECTIC_J;
    let d1 = sigma.a1.det();
    let d2 = sigma.a2.det();
    let dc = sigma.c.det();
    let chain = sigma
        .a1
        .mul(&j)
        .mul(&sigma.c)
        .mul(&j)
        .mul(&sigma.a2)
        .mul(&j)
        .mul(&sigma.c.transpose())
        .mul(&j);
    let q = 0.25 - dc.abs();
    d1 * d2 + q * q - chain.trace() - (d1 + d2) / 4.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymplecticSpectrum {
    pub nu_minus: f64,
    pub nu_plus: f64,
    /// `ν− ≥ 1/2` within [`PHYSICALITY_TOL`].
    pub physical: bool,
    /// The discriminant went negative beyond tolerance; the eigenvalues are
    /// then reported from the clamped discriminant.
    pub complex: bool,
}

/// Symplectic eigenvalues from the invariants `Δ̃ = det A1 + det A2 + 2 det C`
/// and `det σ`.
///
/// Near pure states the two eigenvalues are a double root and each carries an
/// error of order √ε, so physicality is decided on the equivalent polynomial
/// conditions `Δ̃ ≥ 1/2` and `1/16 − Δ̃/4 + det σ ≥ 0` instead.
pub fn symplectic_eigenvalues(sigma: &CovarianceMatrix) -> SymplecticSpectrum {
    let invariant = sigma.a1.det() + sigma.a2.det() + 2.0 * sigma.c.det();
    let det = sigma.det();
    let disc = invariant * invariant - 4.0 * det;
    let complex = disc < -PHYSICALITY_TOL;
    let root = disc.max(0.0).sqrt();
    let nu_plus_sq = (invariant + root) / 2.0;
    let nu_minus_sq = if nu_plus_sq > 0.0 { det / nu_plus_sq } else { 0.0 };
    let nu_minus = nu_minus_sq.max(0.0).sqrt();
    let nu_plus = nu_plus_sq.max(0.0).sqrt();
    // ν−² ≥ 1/4 − ε relaxed to first order in ε
    let slack = PHYSICALITY_TOL * (1.0 + nu_plus_sq);
    let at_quarter = 1.0 / 16.0 - invariant / 4.0 + det;
    let physical = !complex && invariant >= 0.5 - 2.0 * PHYSICALITY_TOL && at_quarter >= -slack;
    SymplecticSpectrum {
        nu_minus: nu_minus.min(nu_plus),
        nu_plus: nu_plus.max(nu_minus),
        physical: physical || nu_minus >= 0.5 - PHYSICALITY_TOL,
        complex,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::twb_covariance;

    fn product(n: f64) -> CovarianceMatrix {
        CovarianceMatrix {
            a1: TwoByTwo::diag(n, n),
            a2: TwoByTwo::diag(n, n),
            c: TwoByTwo::ZERO,
        }
    }

    /// Same function evaluated on blocks sliced from the full 4×4 matrix
    /// with explicit index loops.
    fn brute_force(sigma: &CovarianceMatrix) -> f64 {
        let m = sigma.to_matrix();
        let block = |r: usize, c: usize| [[m[r][c], m[r][c + 1]], [m[r + 1][c], m[r + 1][c + 1]]];
        let det = |b: [[f64; 2]; 2]| b[0][0] * b[1][1] - b[0][1] * b[1][0];
        let mul = |x: [[f64; 2]; 2], y: [[f64; 2]; 2]| {
            let mut out = [[0.0; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        out[i][j] += x[i][k] * y[k][j];
                    }
                }
            }
            out
        };
        let (a1, a2, c, ct) = (block(0, 0), block(2, 2), block(0, 2), block(2, 0));
        let j = [[0.0, 1.0], [-1.0, 0.0]];
        let p = mul(mul(mul(mul(mul(mul(mul(a1, j), c), j), a2), j), ct), j);
        let tr = p[0][0] + p[1][1];
        det(a1) * det(a2) + (0.25 - det(c).abs()).powi(2) - tr - (det(a1) + det(a2)) / 4.0
    }

    #[test]
    fn j_properties() {
        let j = SYMPLECTIC_J;
        assert_eq!(j.mul(&j), TwoByTwo::IDENTITY.scale(-1.0));
        assert_eq!(j.transpose(), j.scale(-1.0));
    }

    #[test]
    fn reference_states() {
        assert_eq!(simon_separability(&product(0.5)), 0.0);
        assert!((simon_separability(&product(1.0)) - 0.5625).abs() < 1e-15);
        for r in [0.0, 0.01, 0.04, 0.1, 0.5, 1.0] {
            let s = simon_separability(&twb_covariance(r));
            assert!((s - (1.0 - (4.0 * r).cosh()) / 8.0).abs() < 1e-12, "r={r}: {s}");
        }
        assert_eq!(simon_separability(&twb_covariance(0.0)), 0.0);
        assert!((simon_separability(&twb_covariance(1.0)) + 3.2885291045020573).abs() < 1e-12);
    }

    #[test]
    fn spectra() {
        let v = symplectic_eigenvalues(&product(0.5));
        assert!((v.nu_minus - 0.5).abs() < 1e-12 && (v.nu_plus - 0.5).abs() < 1e-12);
        assert!(v.physical && !v.complex);
        let v = symplectic_eigenvalues(&product(1.0));
        assert!((v.nu_minus - 1.0).abs() < 1e-12 && (v.nu_plus - 1.0).abs() < 1e-12);
        for r in [0.04, 0.5, 1.0] {
            let v = symplectic_eigenvalues(&twb_covariance(r));
            assert!(
                (v.nu_minus - 0.5).abs() < 1e-6 && (v.nu_plus - 0.5).abs() < 1e-6,
                "{v:?}"
            );
            assert!(v.physical);
        }
    }

    #[test]
    fn flags_unphysical() {
        let squeezed_too_far = CovarianceMatrix {
            a1: TwoByTwo::diag(0.2, 0.2),
            a2: TwoByTwo::diag(0.5, 0.5),
            c: TwoByTwo::ZERO,
        };
        let v = symplectic_eigenvalues(&squeezed_too_far);
        assert!(!v.physical);
        assert!(v.nu_minus <= v.nu_plus);
    }

    #[test]
    fn brute_force_matches() {
        for r in [0.0, 0.3, 1.0] {
            let s = twb_covariance(r);
            assert!((simon_separability(&s) - brute_force(&s)).abs() < 1e-14);
        }
    }
}
