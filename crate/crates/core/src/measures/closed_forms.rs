//! Analytic values for the damped Bell-like families and for unitarily
//! rotated Werner-like states.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{check_closed, Error, Result};
use crate::qstate::PureState;

use super::concurrence_pure;

/// Slack on C ≤ (3p − 1)/2 when deciding whether a (C, purity) pair is
/// reachable by a Werner-unitary state.
pub const REALIZABILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelClosedForms {
    pub concurrence: f64,
    pub steerability: f64,
    pub f_value: f64,
    pub purity: f64,
    /// Diagonal of T; only the phase-damping family has a diagonal T.
    pub t_diagonal: Option<[f64; 3]>,
    /// √(C²(|φ_B⟩) + 2Tr(ρ²) − 2), the purity form of S for the
    /// phase-damping family.
    pub steerability_from_purity: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WernerUnitaryClosedForms {
    pub concurrence: f64,
    pub steerability: f64,
    pub f_value: f64,
    pub purity: f64,
}

fn check_theta(theta: f64) -> Result<()> {
    if theta.is_finite() && theta > 0.0 && theta < FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange {
            name: "theta",
            value: theta,
            range: "(0, pi/2)",
        })
    }
}

/// Bell-like state cos θ|00⟩ + sin θ|11⟩ after amplitude damping of strength η
/// on either qubit.
///
/// The output is |a⟩⟨a| + |b⟩⟨b| with orthogonal |a⟩ = cos θ|00⟩ + sin θ √(1−η)|11⟩
/// and |b⟩ = sin θ √η |01⟩, which gives the purity directly.
pub fn bad_closed_forms(theta: f64, eta: f64) -> Result<ChannelClosedForms> {
    check_theta(theta)?;
    check_closed("eta", eta, 0.0, 1.0, "[0, 1]")?;
    let (s, co) = theta.sin_cos();
    let c_pure = (2.0 * theta).sin();
    let concurrence = (1.0 - eta).sqrt() * c_pure;
    let a = co * co + s * s * (1.0 - eta);
    let b = eta * s * s;
    let purity = a * a + b * b;
    let q_sqr = concurrence * concurrence + purity;
    Ok(ChannelClosedForms {
        concurrence,
        steerability: (q_sqr - 1.0).max(0.0).sqrt(),
        f_value: (2.0 * q_sqr - 1.0).max(0.0).sqrt(),
        purity,
        t_diagonal: None,
        steerability_from_purity: None,
    })
}

/// Bell-like state after phase damping of strength η on either qubit.
pub fn bpd_closed_forms(theta: f64, eta: f64) -> Result<ChannelClosedForms> {
    check_theta(theta)?;
    check_closed("eta", eta, 0.0, 1.0, "[0, 1]")?;
    let c_pure = (2.0 * theta).sin();
    let concurrence = (1.0 - eta).sqrt() * c_pure;
    let purity = 1.0 - 0.5 * eta * c_pure * c_pure;
    Ok(ChannelClosedForms {
        concurrence,
        steerability: concurrence,
        f_value: (1.0 + 2.0 * concurrence * concurrence).sqrt(),
        purity,
        t_diagonal: Some([concurrence, -concurrence, 1.0]),
        steerability_from_purity: Some((c_pure * c_pure + 2.0 * purity - 2.0).max(0.0).sqrt()),
    })
}

/// p|φ⟩⟨φ| + (1−p)I/4 expressed through C(|φ⟩); S(|φ⟩) = C(|φ⟩) for pure states.
pub fn wu_closed_forms(p: f64, phi: &PureState) -> Result<WernerUnitaryClosedForms> {
    check_closed("p", p, 0.0, 1.0, "[0, 1]")?;
    let c_pure = concurrence_pure(phi);
    let f_pure_sqr = 1.0 + 2.0 * c_pure * c_pure;
    Ok(WernerUnitaryClosedForms {
        concurrence: (p * c_pure - 0.5 * (1.0 - p)).max(0.0),
        steerability: (0.5 * (p * p * f_pure_sqr - 1.0).max(0.0)).sqrt(),
        f_value: p * f_pure_sqr.sqrt(),
        purity: (1.0 + 3.0 * p * p) / 4.0,
    })
}

/// Largest concurrence of a Werner-unitary state with the given purity,
/// (3p − 1)/2 clamped at zero, where p = √((4·purity − 1)/3).
pub fn werner_concurrence_ceiling(purity: f64) -> f64 {
    let p = ((4.0 * purity - 1.0) / 3.0).max(0.0).sqrt();
    (0.5 * (3.0 * p - 1.0)).max(0.0)
}

/// Steerability of a Werner-unitary state from its concurrence and purity:
/// √(max{0, x + C² + Tr(ρ²) − 1}) with x = (1 + 2C)/2 · (1 − √((4Tr(ρ²) − 1)/3)).
pub fn wu_steerability_from_c_purity(concurrence: f64, purity: f64) -> Result<f64> {
    check_closed("concurrence", concurrence, 0.0, 1.0, "[0, 1]")?;
    check_closed("purity", purity, 0.25, 1.0, "[1/4, 1]")?;
    if concurrence > werner_concurrence_ceiling(purity) + REALIZABILITY_TOL {
        return Err(Error::NotRealizable {
            concurrence,
            purity,
        });
    }
    let p = ((4.0 * purity - 1.0) / 3.0).max(0.0).sqrt();
    let x = 0.5 * (1.0 + 2.0 * concurrence) * (1.0 - p);
    Ok((x + concurrence * concurrence + purity - 1.0)
        .max(0.0)
        .sqrt())
}
