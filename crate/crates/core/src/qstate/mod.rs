//! Two-qubit states: pure states, density matrices and the named families
//! (Bell-like, Werner-like), plus channels, random sampling and the JSON
//! state format.

mod channel;
mod json;
mod sampling;

pub use channel::{apply_channel, KrausChannel};
pub use json::{parse_state_json, state_to_json, StateFile};
pub use sampling::{
    random_pure_state, random_state, random_state_with_rank, random_unitary, Measure, RankPolicy,
    Sample, SamplerConfig,
};

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{check_closed, Error, Result};
use crate::linalg::{c, hermitian_eigenvalues, ComplexMatrix};

/// Normalization slack for pure states.
pub const NORM_TOL: f64 = 1e-12;
/// Hermiticity, trace and positivity slack for density matrices.
pub const STATE_TOL: f64 = 1e-10;

/// Normalized two-qubit state vector in the basis |00⟩, |01⟩, |10⟩, |11⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState([Complex64; 4]);

impl PureState {
    pub fn new(amplitudes: [Complex64; 4]) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self(amplitudes))
    }

    /// Scale an arbitrary nonzero vector to unit norm.
    pub fn normalized(amplitudes: [Complex64; 4]) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized {
                norm_sqr: norm * norm,
            });
        }
        Ok(Self(amplitudes.map(|z| z / norm)))
    }

    /// Computational basis state |i⟩ for i in 0..4.
    pub fn basis(i: usize) -> Self {
        let mut a = [Complex64::default(); 4];
        a[i] = c(1.0, 0.0);
        Self(a)
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.0
    }

    /// U|ψ⟩ for a 4x4 unitary, renormalized to absorb roundoff.
    pub fn transformed(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.rows() != 4 || u.cols() != 4 {
            return Err(Error::DimensionUnsupported {
                rows: u.rows(),
                cols: u.cols(),
            });
        }
        let mut out = [Complex64::default(); 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|j| u[(i, j)] * self.0[j]).sum();
        }
        Self::normalized(out)
    }
}

/// cos θ |00⟩ + sin θ |11⟩ for θ in the open interval (0, π/2).
pub fn bell_like(theta: f64) -> Result<PureState> {
    if !(theta.is_finite() && theta > 0.0 && theta < FRAC_PI_2) {
        return Err(Error::ParameterOutOfRange {
            name: "theta",
            value: theta,
            range: "(0, pi/2)",
        });
    }
    let (s, co) = theta.sin_cos();
    Ok(PureState([c(co, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]))
}

/// A validated two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// Validate a 4x4 matrix: finite, Hermitian, unit trace and PSD, each
    /// within [`STATE_TOL`]. The stored matrix is the Hermitian part of the input.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.rows() != 4 || m.cols() != 4 {
            return Err(Error::DimensionUnsupported {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let deviation = m.hermitian_deviation();
        if deviation > STATE_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = m.trace().re;
        if (trace - 1.0).abs() > STATE_TOL {
            return Err(Error::TraceNotUnit { trace });
        }
        let h = m.hermitian_part();
        let min = hermitian_eigenvalues(&h)?[3];
        if min < -STATE_TOL {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
        Ok(Self(h))
    }

    /// Wrap a matrix already known to be a state (channel outputs, samplers).
    pub(crate) fn from_trusted(m: ComplexMatrix) -> Self {
        debug_assert!(m.rows() == 4 && m.cols() == 4);
        Self(m.hermitian_part())
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self(ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes()))
    }

    pub fn maximally_mixed() -> Self {
        Self(ComplexMatrix::identity(4).scale(0.25))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// U ρ U†.
    pub fn conjugated_by(&self, u: &ComplexMatrix) -> Self {
        Self::from_trusted(&(u * &self.0) * &u.adjoint())
    }
}

/// |ψ⟩⟨ψ|.
pub fn density_from_pure(psi: &PureState) -> DensityMatrix {
    DensityMatrix::from_pure(psi)
}

/// p|φ⟩⟨φ| + (1 − p) I/4.
pub fn werner_like(p: f64, phi: &PureState) -> Result<DensityMatrix> {
    check_closed("p", p, 0.0, 1.0, "[0, 1]")?;
    let pure = ComplexMatrix::outer(phi.amplitudes(), phi.amplitudes()).scale(p);
    let noise = ComplexMatrix::identity(4).scale((1.0 - p) / 4.0);
    Ok(DensityMatrix::from_trusted(&pure + &noise))
}
