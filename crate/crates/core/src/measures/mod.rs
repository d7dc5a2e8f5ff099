//! Scalar quantities of a two-qubit state: concurrence, the three-setting
//! CJWR quantity F and the steerability built from it, purity, first-order
//! coherence of the reduced states, and the steerability bounds expressed
//! through concurrence and purity.

mod closed_forms;

pub use closed_forms::{
    bad_closed_forms, bpd_closed_forms, werner_concurrence_ceiling, wu_closed_forms,
    wu_steerability_from_c_purity, ChannelClosedForms, WernerUnitaryClosedForms, REALIZABILITY_TOL,
};

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigenvalues, kron, partial_trace, pauli, psd_sqrt, singular_values, sym3_eigenvalues,
    ComplexMatrix, Qubit, RealSymmetricMatrix3,
};
use crate::qstate::{DensityMatrix, PureState};

fn sigma_yy() -> &'static ComplexMatrix {
    static YY: OnceLock<ComplexMatrix> = OnceLock::new();
    YY.get_or_init(|| {
        let [_, sy, _] = pauli();
        kron(&sy, &sy).expect("2x2 factors")
    })
}

/// σ_m ⊗ σ_n for m, n in {x, y, z}.
fn pauli_products() -> &'static [[ComplexMatrix; 3]; 3] {
    static PRODUCTS: OnceLock<[[ComplexMatrix; 3]; 3]> = OnceLock::new();
    PRODUCTS.get_or_init(|| {
        let p = pauli();
        [0, 1, 2].map(|m| [0, 1, 2].map(|n| kron(&p[m], &p[n]).expect("2x2 factors")))
    })
}

/// Spin-flipped state (σy ⊗ σy) ρ* (σy ⊗ σy).
pub fn spin_flip(rho: &DensityMatrix) -> ComplexMatrix {
    let yy = sigma_yy();
    &(yy * &rho.matrix().conj()) * yy
}

/// |⟨ψ|ψ̃⟩| with |ψ̃⟩ = (σy ⊗ σy)|ψ*⟩.
pub fn concurrence_pure(psi: &PureState) -> f64 {
    let yy = sigma_yy();
    let a = psi.amplitudes();
    let overlap: Complex64 = (0..4)
        .map(|i| {
            let flipped: Complex64 = (0..4).map(|j| yy[(i, j)] * a[j].conj()).sum();
            a[i].conj() * flipped
        })
        .sum();
    overlap.norm().min(1.0)
}

/// Square roots of the eigenvalues of ρρ̃, descending.
///
/// These are the singular values of √ρ (σy⊗σy) √ρ*, whose Gram matrix is the
/// Hermitian √ρ ρ̃ √ρ. Taking singular values directly keeps near-zero roots at
/// roundoff level instead of the √ε ≈ 1e-8 an eigenvalue-then-sqrt path gives.
pub fn wootters_roots(rho: &DensityMatrix) -> [f64; 4] {
    let root = psd_sqrt(rho.matrix()).expect("density matrices are PSD");
    let a = &(&root * sigma_yy()) * &root.conj();
    let sv = singular_values(&a);
    [sv[0], sv[1], sv[2], sv[3]]
}

/// Eigenvalues of ρρ̃ computed as the eigenvalues of the Hermitian √ρ ρ̃ √ρ.
/// Independent of [`wootters_roots`]; used to cross-check it.
pub fn wootters_eigenvalues(rho: &DensityMatrix) -> [f64; 4] {
    let root = psd_sqrt(rho.matrix()).expect("density matrices are PSD");
    let h = &(&root * &spin_flip(rho)) * &root;
    let ev = hermitian_eigenvalues(&h.hermitian_part()).expect("Hermitian by construction");
    [ev[0], ev[1], ev[2], ev[3]]
}

/// max{0, √λ1 − √λ2 − √λ3 − √λ4}.
pub fn concurrence(rho: &DensityMatrix) -> f64 {
    concurrence_from_roots(&wootters_roots(rho))
}

fn concurrence_from_roots(r: &[f64; 4]) -> f64 {
    (r[0] - r[1] - r[2] - r[3]).max(0.0)
}

/// Correlation matrix T_mn = Tr(ρ σ_m ⊗ σ_n).
pub fn correlation_matrix(rho: &DensityMatrix) -> [[f64; 3]; 3] {
    let products = pauli_products();
    let m = rho.matrix();
    [0, 1, 2].map(|i| [0, 1, 2].map(|j| m.trace_product_re(&products[i][j])))
}

fn frobenius_sqr(t: &[[f64; 3]; 3]) -> f64 {
    t.iter().flatten().map(|x| x * x).sum()
}

/// Singular values t1 ≥ t2 ≥ t3 of the correlation matrix, from the
/// eigenvalues of TᵀT.
pub fn correlation_singular_values(rho: &DensityMatrix) -> [f64; 3] {
    let t = correlation_matrix(rho);
    sym3_eigenvalues(&RealSymmetricMatrix3::gram(&t)).map(|x| x.max(0.0).sqrt())
}

/// F = √(t1² + t2² + t3²), computed as the Frobenius norm of T.
pub fn f_value(rho: &DensityMatrix) -> f64 {
    frobenius_sqr(&correlation_matrix(rho)).sqrt()
}

fn steerability_from_f_sqr(f_sqr: f64) -> f64 {
    (0.5 * (f_sqr - 1.0).max(0.0)).sqrt()
}

/// √(½ max{0, F² − 1}).
pub fn steerability(rho: &DensityMatrix) -> f64 {
    steerability_from_f_sqr(frobenius_sqr(&correlation_matrix(rho)))
}

/// Tr(ρ²).
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix().entries().iter().map(|z| z.norm_sqr()).sum()
}

/// Bloch-vector length √(2Tr(ρ²) − 1) of a single-qubit state.
pub fn first_order_coherence(single_qubit: &ComplexMatrix) -> Result<f64> {
    if single_qubit.rows() != 2 || single_qubit.cols() != 2 {
        return Err(Error::DimensionUnsupported {
            rows: single_qubit.rows(),
            cols: single_qubit.cols(),
        });
    }
    let p: f64 = single_qubit.entries().iter().map(|z| z.norm_sqr()).sum();
    Ok((2.0 * p - 1.0).max(0.0).sqrt().min(1.0))
}

/// First-order coherence of the reduced state of `qubit`.
pub fn reduced_coherence(rho: &DensityMatrix, qubit: Qubit) -> f64 {
    let reduced = partial_trace(rho.matrix(), qubit).expect("4x4 state");
    first_order_coherence(&reduced).expect("2x2 reduced state")
}

fn lower_from(c: f64, purity: f64) -> f64 {
    (c * c + purity - 1.0).max(0.0).sqrt()
}

fn upper_from(c: f64, purity: f64) -> f64 {
    c.min((2.0 * purity - 1.0).max(0.0).sqrt())
}

/// √(max{0, C² + Tr(ρ²) − 1}); S(ρ) never falls below it.
pub fn bound_lower(rho: &DensityMatrix) -> f64 {
    lower_from(concurrence(rho), purity(rho))
}

/// min{C, √(max{0, 2Tr(ρ²) − 1})}; S(ρ) never exceeds it.
pub fn bound_upper(rho: &DensityMatrix) -> f64 {
    upper_from(concurrence(rho), purity(rho))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    /// C = 0.
    SeparableCandidate,
    /// C > 0 but F ≤ 1: no violation of the three-setting inequality. Richer
    /// measurement sets may still reveal steering.
    EntangledUnsteerableByF,
    /// S > 0.
    Steerable,
}

impl Classification {
    fn from_values(c: f64, s: f64) -> Self {
        if s > 0.0 {
            Self::Steerable
        } else if c > 0.0 {
            Self::EntangledUnsteerableByF
        } else {
            Self::SeparableCandidate
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::SeparableCandidate => "separable-candidate",
            Self::EntangledUnsteerableByF => "entangled-unsteerable-by-F",
            Self::Steerable => "steerable",
        }
    }
}

pub fn classify(rho: &DensityMatrix) -> Classification {
    Classification::from_values(concurrence(rho), steerability(rho))
}

/// Every scalar for one state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub concurrence: f64,
    pub f_value: f64,
    pub steerability: f64,
    pub purity: f64,
    pub q_value: f64,
    pub coherence_a: f64,
    pub coherence_b: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    /// t1 ≥ t2 ≥ t3.
    pub singular_values: [f64; 3],
    /// Eigenvalues of ρρ̃, descending.
    pub lambda: [f64; 4],
    pub classification: Classification,
    /// C² + Tr(ρ²) > 1, the sufficient steering condition.
    pub lower_bound_certifies: bool,
}

impl MeasureReport {
    pub fn new(rho: &DensityMatrix) -> Self {
        let roots = wootters_roots(rho);
        let c = concurrence_from_roots(&roots);
        let t = correlation_matrix(rho);
        let f_sqr = frobenius_sqr(&t);
        let s = steerability_from_f_sqr(f_sqr);
        let p = purity(rho);
        Self {
            concurrence: c,
            f_value: f_sqr.sqrt(),
            steerability: s,
            purity: p,
            q_value: (c * c + p).sqrt(),
            coherence_a: reduced_coherence(rho, Qubit::A),
            coherence_b: reduced_coherence(rho, Qubit::B),
            lower_bound: lower_from(c, p),
            upper_bound: upper_from(c, p),
            singular_values: sym3_eigenvalues(&RealSymmetricMatrix3::gram(&t))
                .map(|x| x.max(0.0).sqrt()),
            lambda: roots.map(|r| r * r),
            classification: Classification::from_values(c, s),
            lower_bound_certifies: c * c + p > 1.0,
        }
    }
}

pub fn measure_report(rho: &DensityMatrix) -> MeasureReport {
    MeasureReport::new(rho)
}
