//! Two-mode Gaussian covariance matrices and their time evolution.
//!
//! Quadratures are ordered `(x1, p1, x2, p2)` and the 4×4 matrix is
//! `[[A1, C], [Cᵀ, A2]]`.

use serde::Serialize;

use crate::kernels::big_gamma;
use crate::params::{Oscillator, SecularForm, ValidatedConfig};
use crate::secular::{secular_set, SecularError, SecularSet};

/// Real 2×2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoByTwo(pub [f64; 4]);

impl TwoByTwo {
    pub const ZERO: TwoByTwo = TwoByTwo([0.0; 4]);
    pub const IDENTITY: TwoByTwo = TwoByTwo([1.0, 0.0, 0.0, 1.0]);

    pub fn new(m00: f64, m01: f64, m10: f64, m11: f64) -> Self {
        TwoByTwo([m00, m01, m10, m11])
    }

    pub fn diag(d0: f64, d1: f64) -> Self {
        TwoByTwo([d0, 0.0, 0.0, d1])
    }

    pub fn symmetric(diag0: f64, off: f64, diag1: f64) -> Self {
        TwoByTwo([diag0, off, off, diag1])
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0[2 * row + col]
    }

    pub fn det(&self) -> f64 {
        let [a, b, c, d] = self.0;
        a * d - b * c
    }

    pub fn trace(&self) -> f64 {
        self.0[0] + self.0[3]
    }

    pub fn transpose(&self) -> Self {
        let [a, b, c, d] = self.0;
        TwoByTwo([a, c, b, d])
    }

    pub fn scale(&self, k: f64) -> Self {
        TwoByTwo(self.0.map(|v| v * k))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.0;
        for (o, v) in out.iter_mut().zip(other.0) {
            *o += v;
        }
        TwoByTwo(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = other.0;
        TwoByTwo([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn is_symmetric(&self) -> bool {
        self.0[1] == self.0[2]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovarianceMatrix {
    pub a1: TwoByTwo,
    pub a2: TwoByTwo,
    pub c: TwoByTwo,
}

impl CovarianceMatrix {
    pub fn to_matrix(&self) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = self.a1.get(i, j);
                m[i + 2][j + 2] = self.a2.get(i, j);
                m[i][j + 2] = self.c.get(i, j);
                m[j + 2][i] = self.c.get(i, j);
            }
        }
        m
    }

    /// Slice the blocks out of a full matrix. The lower-left block is ignored.
    pub fn from_matrix(m: &[[f64; 4]; 4]) -> Self {
        let block = |r: usize, c: usize| TwoByTwo::new(m[r][c], m[r][c + 1], m[r + 1][c], m[r + 1][c + 1]);
        Self {
            a1: block(0, 0),
            a2: block(2, 2),
            c: block(0, 2),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.a1.is_symmetric() && self.a2.is_symmetric()
    }

    pub fn is_finite(&self) -> bool {
        self.a1.is_finite() && self.a2.is_finite() && self.c.is_finite()
    }

    /// Determinant of the full 4×4 matrix by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> f64 {
        let mut m = self.to_matrix();
        let mut det = 1.0;
        for col in 0..4 {
            let pivot = (col..4)
                .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
                .unwrap();
            if m[pivot][col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                m.swap(pivot, col);
                det = -det;
            }
            det *= m[col][col];
            for row in col + 1..4 {
                let factor = m[row][col] / m[col][col];
                let pivot_row = m[col];
                for (k, v) in m[row].iter_mut().enumerate().skip(col) {
                    *v -= factor * pivot_row[k];
                }
            }
        }
        det
    }

    /// Exchange the two modes.
    pub fn swapped(&self) -> Self {
        Self {
            a1: self.a2,
            a2: self.a1,
            c: self.c.transpose(),
        }
    }
}

/// Twin-beam (two-mode squeezed vacuum) state with squeezing `r`.
pub fn twb_covariance(r: f64) -> CovarianceMatrix {
    let a = (2.0 * r).cosh() / 2.0;
    let c = (2.0 * r).sinh() / 2.0;
    CovarianceMatrix {
        a1: TwoByTwo::diag(a, a),
        a2: TwoByTwo::diag(a, a),
        c: TwoByTwo::diag(c, -c),
    }
}

/// Local block of one oscillator: the decayed initial variance `a·e^{−Γ}`
/// plus the diffusive secular contribution.
pub fn local_block(form: SecularForm, a: f64, big_gamma: f64, secular: &SecularSet) -> TwoByTwo {
    let decayed = a * (-big_gamma).exp();
    let s = secular;
    match form {
        SecularForm::Derived => TwoByTwo::symmetric(
            decayed + s.delta_gamma - s.delta_co + s.pi_si,
            s.delta_si + s.pi_co,
            decayed + s.delta_gamma + s.delta_co - s.pi_si,
        ),
        SecularForm::AsPrinted => {
            let d = decayed + s.delta_gamma + s.delta_co - s.pi_si;
            TwoByTwo::symmetric(d, -s.delta_si + s.pi_co, d)
        }
    }
}

/// Cross-correlation block `c·e^{−(Γ1+Γ2)}·[[cos θ, −sin θ], [−sin θ, −cos θ]]`
/// with `θ = (ω1+ω2)τ`: the initial `diag(c, −c)` carried by both free rotations.
pub fn correlation_block(c: f64, big_gamma_sum: f64, theta: f64) -> TwoByTwo {
    let k = c * (-big_gamma_sum).exp();
    let (s, co) = theta.sin_cos();
    TwoByTwo::new(k * co, -k * s, -k * s, -k * co)
}

/// Covariance matrix at `tau` from precomputed secular sets.
pub fn assemble(config: &ValidatedConfig, tau: f64, first: &SecularSet, second: &SecularSet) -> CovarianceMatrix {
    let r = config.squeezing();
    let a = (2.0 * r).cosh() / 2.0;
    let c = (2.0 * r).sinh() / 2.0;
    let alpha = config.alpha();
    let g1 = big_gamma(tau, config.omega1, alpha);
    let g2 = big_gamma(tau, config.omega2, alpha);
    let form = config.physical.secular_form;
    CovarianceMatrix {
        a1: local_block(form, a, g1, first),
        a2: local_block(form, a, g2, second),
        c: correlation_block(c, g1 + g2, (config.omega1 + config.omega2) * tau),
    }
}

/// Covariance matrix of the evolved twin beam at `tau`.
pub fn propagate(config: &ValidatedConfig, tau: f64) -> Result<CovarianceMatrix, SecularError> {
    let first = secular_set(tau, Oscillator::First, config)?;
    let second = secular_set(tau, Oscillator::Second, config)?;
    Ok(assemble(config, tau, &first, &second))
}
