use crate::error::{check_closed, Error, Result};
use crate::linalg::{c, kron, ComplexMatrix, Qubit};

use super::DensityMatrix;

/// Completeness slack for Σ K†K = I.
pub const COMPLETENESS_TOL: f64 = 1e-12;

/// Single-qubit channel given by its Kraus operators, acting on one qubit of a pair.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    operators: Vec<ComplexMatrix>,
    target: Qubit,
    eta: f64,
}

fn completeness_deviation(ops: &[ComplexMatrix]) -> f64 {
    let mut sum = ComplexMatrix::zeros(2, 2);
    for k in ops {
        sum = &sum + &(&k.adjoint() * k);
    }
    (&sum - &ComplexMatrix::identity(2)).frobenius_norm()
}

/// K0 = |0⟩⟨0| + √(1−η)|1⟩⟨1|, shared by both damping channels.
fn damping_k0(eta: f64) -> ComplexMatrix {
    ComplexMatrix::diagonal(&[1.0, (1.0 - eta).sqrt()])
}

impl KrausChannel {
    /// Arbitrary channel; rejected unless complete within [`COMPLETENESS_TOL`].
    pub fn custom(operators: Vec<ComplexMatrix>, target: Qubit) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::ChannelIncomplete { deviation: 1.0 });
        }
        for k in &operators {
            if k.rows() != 2 || k.cols() != 2 {
                return Err(Error::DimensionUnsupported {
                    rows: k.rows(),
                    cols: k.cols(),
                });
            }
        }
        let deviation = completeness_deviation(&operators);
        if deviation > COMPLETENESS_TOL {
            return Err(Error::ChannelIncomplete { deviation });
        }
        Ok(Self {
            operators,
            target,
            eta: f64::NAN,
        })
    }

    /// Amplitude damping: K1 = √η |0⟩⟨1|.
    pub fn amplitude_damping(eta: f64, target: Qubit) -> Result<Self> {
        check_closed("eta", eta, 0.0, 1.0, "[0, 1]")?;
        let mut k1 = ComplexMatrix::zeros(2, 2);
        k1[(0, 1)] = c(eta.sqrt(), 0.0);
        Ok(Self {
            operators: vec![damping_k0(eta), k1],
            target,
            eta,
        })
    }

    /// Phase damping: K1 = √η |1⟩⟨1|.
    pub fn phase_damping(eta: f64, target: Qubit) -> Result<Self> {
        check_closed("eta", eta, 0.0, 1.0, "[0, 1]")?;
        let mut k1 = ComplexMatrix::zeros(2, 2);
        k1[(1, 1)] = c(eta.sqrt(), 0.0);
        Ok(Self {
            operators: vec![damping_k0(eta), k1],
            target,
            eta,
        })
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn target(&self) -> Qubit {
        self.target
    }

    /// Damping parameter; NaN for custom channels.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// The operators lifted to the two-qubit space.
    fn lifted(&self) -> Vec<ComplexMatrix> {
        let id = ComplexMatrix::identity(2);
        self.operators
            .iter()
            .map(|k| match self.target {
                Qubit::A => kron(k, &id),
                Qubit::B => kron(&id, k),
            })
            .collect::<Result<_>>()
            .expect("Kraus operators are 2x2 by construction")
    }
}

/// Σ_i (K_i ⊗ I) ρ (K_i ⊗ I)†, or with I ⊗ K_i when the channel targets qubit B.
pub fn apply_channel(rho: &DensityMatrix, ch: &KrausChannel) -> Result<DensityMatrix> {
    let deviation = completeness_deviation(&ch.operators);
    if deviation > COMPLETENESS_TOL {
        return Err(Error::ChannelIncomplete { deviation });
    }
    let mut out = ComplexMatrix::zeros(4, 4);
    for k in ch.lifted() {
        out = &out + &(&(&k * rho.matrix()) * &k.adjoint());
    }
    Ok(DensityMatrix::from_trusted(out))
}
