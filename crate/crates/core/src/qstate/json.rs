//! State file format:
//!
//! ```json
//! { "dim": 4, "matrix": [[[re, im], [re, im], [re, im], [re, im]], ...] }
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix};

use super::DensityMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dim: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        let matrix = (0..4)
            .map(|i| (0..4).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        Self { dim: 4, matrix }
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        if self.dim != 4 {
            return Err(Error::Parse(format!("dim must be 4, got {}", self.dim)));
        }
        if self.matrix.len() != 4 || self.matrix.iter().any(|row| row.len() != 4) {
            return Err(Error::Parse(
                "matrix must have 4 rows of 4 [re, im] entries".into(),
            ));
        }
        let data = self
            .matrix
            .iter()
            .flatten()
            .map(|&[re, im]| c(re, im))
            .collect();
        DensityMatrix::new(ComplexMatrix::new(4, 4, data)?)
    }
}

/// Parse and validate a state file.
pub fn parse_state_json(text: &str) -> Result<DensityMatrix> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_density()
}

pub fn state_to_json(rho: &DensityMatrix) -> String {
    serde_json::to_string_pretty(&StateFile::from_density(rho)).expect("state serializes")
}
