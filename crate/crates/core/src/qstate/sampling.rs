//! Seeded random states and unitaries.
//!
//! Every draw is a pure function of `(seed, index)`: the generator for draw
//! `i` is ChaCha8 seeded from the seed and positioned on stream `i`, so any
//! record can be regenerated without producing the ones before it.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, qr, ComplexMatrix};

use super::{DensityMatrix, PureState};

const STATE_DOMAIN: u64 = 0;
const PURE_DOMAIN: u64 = 0x5075_7265_5374_6174;
const UNITARY_DOMAIN: u64 = 0x556e_6974_6172_7921;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    /// ρ = GG†/Tr(GG†) with G a 4×k complex Gaussian matrix.
    Ginibre,
    /// Haar-random pure states; the rank policy is ignored.
    HaarPure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RankPolicy {
    Fixed(u8),
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub measure: Measure,
    pub ranks: RankPolicy,
    pub seed: u64,
    pub count: u64,
}

impl SamplerConfig {
    pub fn ginibre(ranks: RankPolicy, seed: u64, count: u64) -> Self {
        Self {
            measure: Measure::Ginibre,
            ranks,
            seed,
            count,
        }
    }

    pub fn haar_pure(seed: u64, count: u64) -> Self {
        Self {
            measure: Measure::HaarPure,
            ranks: RankPolicy::Fixed(1),
            seed,
            count,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let RankPolicy::Fixed(k) = self.ranks {
            if !(1..=4).contains(&k) {
                return Err(Error::ParameterOutOfRange {
                    name: "rank",
                    value: k as f64,
                    range: "{1, 2, 3, 4}",
                });
            }
        }
        Ok(())
    }
}

impl FromStr for Measure {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ginibre" => Ok(Self::Ginibre),
            "haar-pure" => Ok(Self::HaarPure),
            other => Err(format!(
                "unknown measure '{other}' (expected ginibre or haar-pure)"
            )),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ginibre => "ginibre",
            Self::HaarPure => "haar-pure",
        })
    }
}

impl FromStr for RankPolicy {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "1" | "2" | "3" | "4" => Ok(Self::Fixed(s.parse().unwrap())),
            other => Err(format!(
                "unknown rank policy '{other}' (expected 1..4 or uniform)"
            )),
        }
    }
}

impl fmt::Display for RankPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fixed(k) => write!(f, "{k}"),
            Self::Uniform => f.write_str("uniform"),
        }
    }
}

/// One sampled state together with the rank of its generating Ginibre matrix.
#[derive(Debug, Clone)]
pub struct Sample {
    pub rho: DensityMatrix,
    pub rank: u8,
}

fn rng_for(seed: u64, domain: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ domain);
    rng.set_stream(index);
    rng
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im)
}

pub fn random_state_with_rank(cfg: &SamplerConfig, index: u64) -> Result<Sample> {
    cfg.validate()?;
    if index >= cfg.count {
        return Err(Error::IndexOutOfRange {
            index,
            count: cfg.count,
        });
    }
    let mut rng = rng_for(cfg.seed, STATE_DOMAIN, index);
    let rank = match (cfg.measure, cfg.ranks) {
        (Measure::HaarPure, _) => 1,
        (Measure::Ginibre, RankPolicy::Fixed(k)) => k,
        (Measure::Ginibre, RankPolicy::Uniform) => rng.random_range(1..=4u8),
    };
    let k = rank as usize;
    let g: Vec<Complex64> = (0..4 * k).map(|_| gaussian(&mut rng)).collect();

    let mut m = ComplexMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in i..4 {
            let v: Complex64 = (0..k).map(|l| g[i * k + l] * g[j * k + l].conj()).sum();
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
    }
    let tr = m.trace().re;
    Ok(Sample {
        rho: DensityMatrix::from_trusted(m.scale(1.0 / tr)),
        rank,
    })
}

/// Draw `index` of the configured sampler.
pub fn random_state(cfg: &SamplerConfig, index: u64) -> Result<DensityMatrix> {
    random_state_with_rank(cfg, index).map(|s| s.rho)
}

/// Haar-random pure state vector.
pub fn random_pure_state(seed: u64, index: u64) -> PureState {
    let mut rng = rng_for(seed, PURE_DOMAIN, index);
    let amps = [(); 4].map(|_| gaussian(&mut rng));
    PureState::normalized(amps).expect("Gaussian vector is nonzero")
}

/// Haar-random 4x4 unitary: QR of a complex Ginibre matrix with the phases of
/// R's diagonal moved into Q.
pub fn random_unitary(seed: u64, index: u64) -> ComplexMatrix {
    let mut rng = rng_for(seed, UNITARY_DOMAIN, index);
    let g = ComplexMatrix::new(4, 4, (0..16).map(|_| gaussian(&mut rng)).collect())
        .expect("finite 4x4");
    let (mut q, r) = qr(&g);
    for j in 0..4 {
        let d = r[(j, j)];
        let phase = if d.norm() == 0.0 {
            c(1.0, 0.0)
        } else {
            d / d.norm()
        };
        for i in 0..4 {
            q[(i, j)] *= phase;
        }
    }
    q
}
