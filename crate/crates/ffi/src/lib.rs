//! C ABI over `qsteer`.
//!
//! States live behind opaque `QsState` handles created by the `qs_state_*`
//! constructors and released with `qs_state_free`. Every fallible call
//! returns a `QsStatus`; outputs are written through caller pointers only on
//! `QS_STATUS_OK`. Panics never cross the boundary and surface as
//! `QS_STATUS_INTERNAL`. `QsReport::classification` holds a `QsClassification`.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use qsteer::harness::{falsify_states, run_falsification, FalsificationSummary, Theorems};
use qsteer::measures::wu_steerability_from_c_purity;
use qsteer::qstate::{
    apply_channel, bell_like, random_state, werner_like, DensityMatrix, KrausChannel, Measure,
    RankPolicy, SamplerConfig,
};
use qsteer::{Classification, ComplexMatrix, Error, MeasureReport, Qubit};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QsStatus {
    Ok = 0,
    NullPointer = 1,
    NotHermitian = 2,
    DimensionUnsupported = 3,
    NotPsd = 4,
    TraceNotUnit = 5,
    NonFinite = 6,
    NotNormalized = 7,
    ParameterOutOfRange = 8,
    ChannelIncomplete = 9,
    IndexOutOfRange = 10,
    NotRealizable = 11,
    Parse = 12,
    Internal = 13,
}

impl From<&Error> for QsStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::NotHermitian { .. } => Self::NotHermitian,
            Error::DimensionUnsupported { .. } => Self::DimensionUnsupported,
            Error::NotPsd { .. } => Self::NotPsd,
            Error::TraceNotUnit { .. } => Self::TraceNotUnit,
            Error::NonFinite => Self::NonFinite,
            Error::NotNormalized { .. } => Self::NotNormalized,
            Error::ParameterOutOfRange { .. } => Self::ParameterOutOfRange,
            Error::ChannelIncomplete { .. } => Self::ChannelIncomplete,
            Error::IndexOutOfRange { .. } => Self::IndexOutOfRange,
            Error::NotRealizable { .. } => Self::NotRealizable,
            Error::Parse(_) => Self::Parse,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QsClassification {
    SeparableCandidate = 0,
    EntangledUnsteerableByF = 1,
    Steerable = 2,
}

impl From<Classification> for QsClassification {
    fn from(c: Classification) -> Self {
        match c {
            Classification::SeparableCandidate => Self::SeparableCandidate,
            Classification::EntangledUnsteerableByF => Self::EntangledUnsteerableByF,
            Classification::Steerable => Self::Steerable,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QsChannel {
    AmplitudeDamping = 0,
    PhaseDamping = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QsQubit {
    A = 0,
    B = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QsReport {
    pub concurrence: f64,
    pub f_value: f64,
    pub steerability: f64,
    pub purity: f64,
    pub q_value: f64,
    pub coherence_a: f64,
    pub coherence_b: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub singular_values: [f64; 3],
    pub lambda: [f64; 4],
    pub classification: u32,
    pub lower_bound_certifies: bool,
}

impl From<&MeasureReport> for QsReport {
    fn from(r: &MeasureReport) -> Self {
        Self {
            concurrence: r.concurrence,
            f_value: r.f_value,
            steerability: r.steerability,
            purity: r.purity,
            q_value: r.q_value,
            coherence_a: r.coherence_a,
            coherence_b: r.coherence_b,
            lower_bound: r.lower_bound,
            upper_bound: r.upper_bound,
            singular_values: r.singular_values,
            lambda: r.lambda,
            classification: QsClassification::from(r.classification) as u32,
            lower_bound_certifies: r.lower_bound_certifies,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QsFalsification {
    pub checked: u64,
    pub violations: u64,
    pub worst_margin_lower: f64,
    pub worst_margin_upper: f64,
    pub worst_coherence_identity: f64,
    pub worst_coherence_inequality: f64,
}

impl From<&FalsificationSummary> for QsFalsification {
    fn from(s: &FalsificationSummary) -> Self {
        Self {
            checked: s.checked,
            violations: s.violations.len() as u64,
            worst_margin_lower: s.worst_margin_lower,
            worst_margin_upper: s.worst_margin_upper,
            worst_coherence_identity: s.worst_coherence_identity,
            worst_coherence_inequality: s.worst_coherence_inequality,
        }
    }
}

/// Opaque two-qubit density matrix.
pub struct QsState(DensityMatrix);

/// Number of doubles in an interleaved (re, im) row-major 4x4 matrix.
pub const QS_STATE_ENTRIES: usize = 32;

fn guard(f: impl FnOnce() -> Result<(), QsStatus>) -> QsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QsStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => QsStatus::Internal,
    }
}

fn lift<T>(r: qsteer::Result<T>) -> Result<T, QsStatus> {
    r.map_err(|e| QsStatus::from(&e))
}

unsafe fn emit_state(out: *mut *mut QsState, rho: DensityMatrix) -> Result<(), QsStatus> {
    *out = Box::into_raw(Box::new(QsState(rho)));
    Ok(())
}

fn nonnull<T>(p: *const T) -> Result<(), QsStatus> {
    if p.is_null() {
        Err(QsStatus::NullPointer)
    } else {
        Ok(())
    }
}

/// Build a state from 32 doubles: row-major entries, real then imaginary part.
///
/// # Safety
/// `entries` must point to `len` readable doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qs_state_from_entries(
    entries: *const f64,
    len: usize,
    out: *mut *mut QsState,
) -> QsStatus {
    guard(|| {
        nonnull(entries)?;
        nonnull(out)?;
        if len != QS_STATE_ENTRIES {
            return Err(QsStatus::DimensionUnsupported);
        }
        let raw = std::slice::from_raw_parts(entries, len);
        let data = raw
            .chunks_exact(2)
            .map(|z| Complex64::new(z[0], z[1]))
            .collect();
        let m = lift(ComplexMatrix::new(4, 4, data))?;
        emit_state(out, lift(DensityMatrix::new(m))?)
    })
}

/// cos θ|00⟩ + sin θ|11⟩ for θ in (0, π/2).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qs_state_bell_like(theta: f64, out: *mut *mut QsState) -> QsStatus {
    guard(|| {
        nonnull(out)?;
        let psi = lift(bell_like(theta))?;
        emit_state(out, DensityMatrix::from_pure(&psi))
    })
}

/// p|φ⟩⟨φ| + (1 − p)I/4 with |φ⟩ the Bell-like state at angle θ.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qs_state_werner_like(
    p: f64,
    theta: f64,
    out: *mut *mut QsState,
) -> QsStatus {
    guard(|| {
        nonnull(out)?;
        let psi = lift(bell_like(theta))?;
        emit_state(out, lift(werner_like(p, &psi))?)
    })
}

/// Ginibre-induced random state number `index` of the stream `seed`.
/// `rank` is 1..=4, or 0 for a rank drawn uniformly.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qs_state_random(
    seed: u64,
    index: u64,
    rank: u8,
    out: *mut *mut QsState,
) -> QsStatus {
    guard(|| {
        nonnull(out)?;
        let ranks = if rank == 0 {
            RankPolicy::Uniform
        } else {
            RankPolicy::Fixed(rank)
        };
        let cfg = SamplerConfig::ginibre(ranks, seed, index.saturating_add(1));
        lift(cfg.validate())?;
        emit_state(out, lift(random_state(&cfg, index))?)
    })
}

/// Send one qubit of `state` through a damping channel of strength `eta`.
///
/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qs_state_apply_channel(
    state: *const QsState,
    channel: QsChannel,
    eta: f64,
    target: QsQubit,
    out: *mut *mut QsState,
) -> QsStatus {
    guard(|| {
        nonnull(state)?;
        nonnull(out)?;
        let target = match target {
            QsQubit::A => Qubit::A,
            QsQubit::B => Qubit::B,
        };
        let ch = lift(match channel {
            QsChannel::AmplitudeDamping => KrausChannel::amplitude_damping(eta, target),
            QsChannel::PhaseDamping => KrausChannel::phase_damping(eta, target),
        })?;
        emit_state(out, lift(apply_channel(&(*state).0, &ch))?)
    })
}

/// Copy the matrix out in the layout accepted by `qs_state_from_entries`.
///
/// # Safety
/// `state` must be a live handle and `out` must hold 32 doubles.
#[no_mangle]
pub unsafe extern "C" fn qs_state_entries(state: *const QsState, out: *mut f64) -> QsStatus {
    guard(|| {
        nonnull(state)?;
        nonnull(out)?;
        let dst = std::slice::from_raw_parts_mut(out, QS_STATE_ENTRIES);
        for (pair, z) in dst.chunks_exact_mut(2).zip((*state).0.matrix().entries()) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
        Ok(())
    })
}

/// Release a handle. Null is ignored.
///
/// # Safety
/// `state` must come from a `qs_state_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qs_state_free(state: *mut QsState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Every measure of one state.
///
/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qs_analyze(state: *const QsState, out: *mut QsReport) -> QsStatus {
    guard(|| {
        nonnull(state)?;
        nonnull(out)?;
        *out = QsReport::from(&MeasureReport::new(&(*state).0));
        Ok(())
    })
}

/// Check both bounds on `count` Ginibre states (`rank` as in `qs_state_random`).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qs_verify(
    seed: u64,
    count: u64,
    rank: u8,
    out: *mut QsFalsification,
) -> QsStatus {
    guard(|| {
        nonnull(out)?;
        let ranks = if rank == 0 {
            RankPolicy::Uniform
        } else {
            RankPolicy::Fixed(rank)
        };
        let cfg = SamplerConfig {
            measure: Measure::Ginibre,
            ranks,
            seed,
            count,
        };
        let summary = lift(run_falsification(&cfg, Theorems::BOTH))?;
        *out = QsFalsification::from(&summary);
        Ok(())
    })
}

/// Check both bounds on caller-held states.
///
/// # Safety
/// `states` must point to `len` live handles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qs_verify_states(
    states: *const *const QsState,
    len: usize,
    out: *mut QsFalsification,
) -> QsStatus {
    guard(|| {
        nonnull(out)?;
        if len > 0 {
            nonnull(states)?;
        }
        let handles = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(states, len)
        };
        let mut owned = Vec::with_capacity(len);
        for &h in handles {
            nonnull(h)?;
            owned.push((*h).0.clone());
        }
        *out = QsFalsification::from(&falsify_states(&owned, Theorems::BOTH));
        Ok(())
    })
}

/// Steerability of a Werner-unitary state from its concurrence and purity.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qs_wu_steerability(
    concurrence: f64,
    purity: f64,
    out: *mut f64,
) -> QsStatus {
    guard(|| {
        nonnull(out)?;
        *out = lift(wu_steerability_from_c_purity(concurrence, purity))?;
        Ok(())
    })
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn qs_status_message(status: QsStatus) -> *const c_char {
    let s: &'static CStr = match status {
        QsStatus::Ok => c"ok",
        QsStatus::NullPointer => c"null pointer argument",
        QsStatus::NotHermitian => c"matrix is not Hermitian",
        QsStatus::DimensionUnsupported => c"unsupported dimension",
        QsStatus::NotPsd => c"matrix is not positive semidefinite",
        QsStatus::TraceNotUnit => c"trace is not 1",
        QsStatus::NonFinite => c"non-finite entries",
        QsStatus::NotNormalized => c"state is not normalized",
        QsStatus::ParameterOutOfRange => c"parameter out of range",
        QsStatus::ChannelIncomplete => c"Kraus operators are incomplete",
        QsStatus::IndexOutOfRange => c"index out of range",
        QsStatus::NotRealizable => c"not realizable by a Werner-unitary state",
        QsStatus::Parse => c"parse error",
        QsStatus::Internal => c"internal error",
    };
    s.as_ptr()
}
