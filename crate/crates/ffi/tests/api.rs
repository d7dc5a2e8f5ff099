use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use qsteer_ffi::*;

fn bell(theta: f64) -> *mut QsState {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qs_state_bell_like(theta, &mut s) }, QsStatus::Ok);
    s
}

fn analyze(s: *const QsState) -> QsReport {
    let mut r = QsReport::default();
    assert_eq!(unsafe { qs_analyze(s, &mut r) }, QsStatus::Ok);
    r
}

#[test]
fn bell_state_report() {
    let s = bell(std::f64::consts::FRAC_PI_4);
    let r = analyze(s);
    assert!((r.concurrence - 1.0).abs() < 1e-12);
    assert!((r.steerability - 1.0).abs() < 1e-12);
    assert!((r.f_value - 3f64.sqrt()).abs() < 1e-12);
    assert_eq!(r.classification, QsClassification::Steerable as u32);
    assert!(r.lower_bound_certifies);
    unsafe { qs_state_free(s) };
}

#[test]
fn entries_roundtrip() {
    let s = bell(0.4);
    let mut buf = [0.0; QS_STATE_ENTRIES];
    assert_eq!(
        unsafe { qs_state_entries(s, buf.as_mut_ptr()) },
        QsStatus::Ok
    );
    let mut t = ptr::null_mut();
    assert_eq!(
        unsafe { qs_state_from_entries(buf.as_ptr(), buf.len(), &mut t) },
        QsStatus::Ok
    );
    assert_eq!(analyze(s), analyze(t));
    unsafe {
        qs_state_free(s);
        qs_state_free(t);
    }
}

#[test]
fn werner_and_channels() {
    let mut w = ptr::null_mut();
    assert_eq!(
        unsafe { qs_state_werner_like(0.8, std::f64::consts::FRAC_PI_4, &mut w) },
        QsStatus::Ok
    );
    let r = analyze(w);
    assert!((r.concurrence - 0.7).abs() < 1e-12);
    assert!((r.purity - 0.73).abs() < 1e-12);
    let mut s = 0.0;
    assert_eq!(
        unsafe { qs_wu_steerability(r.concurrence, r.purity, &mut s) },
        QsStatus::Ok
    );
    assert!((s - r.steerability).abs() < 1e-9);
    assert_eq!(
        unsafe { qs_wu_steerability(0.5, 0.25, &mut s) },
        QsStatus::NotRealizable
    );

    let b = bell(std::f64::consts::FRAC_PI_4);
    let mut pd = ptr::null_mut();
    assert_eq!(
        unsafe { qs_state_apply_channel(b, QsChannel::PhaseDamping, 0.5, QsQubit::B, &mut pd) },
        QsStatus::Ok
    );
    let r = analyze(pd);
    assert!((r.purity - 0.75).abs() < 1e-12);
    assert!((r.steerability - r.concurrence).abs() < 1e-12);
    let mut bad = ptr::null_mut();
    assert_eq!(
        unsafe {
            qs_state_apply_channel(b, QsChannel::AmplitudeDamping, 1.5, QsQubit::A, &mut bad)
        },
        QsStatus::ParameterOutOfRange
    );
    assert!(bad.is_null());
    unsafe {
        qs_state_free(w);
        qs_state_free(b);
        qs_state_free(pd);
    }
}

#[test]
fn error_codes() {
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { qs_state_bell_like(0.0, &mut out) },
        QsStatus::ParameterOutOfRange
    );
    assert_eq!(
        unsafe { qs_state_bell_like(0.3, ptr::null_mut()) },
        QsStatus::NullPointer
    );
    assert_eq!(
        unsafe { qs_analyze(ptr::null(), &mut QsReport::default()) },
        QsStatus::NullPointer
    );

    let mut not_psd = [0.0; QS_STATE_ENTRIES];
    not_psd[0] = 1.5;
    not_psd[10] = -0.5;
    assert_eq!(
        unsafe { qs_state_from_entries(not_psd.as_ptr(), QS_STATE_ENTRIES, &mut out) },
        QsStatus::NotPsd
    );
    assert_eq!(
        unsafe { qs_state_from_entries(not_psd.as_ptr(), 8, &mut out) },
        QsStatus::DimensionUnsupported
    );
    assert_eq!(
        unsafe { qs_state_random(1, 0, 9, &mut out) },
        QsStatus::ParameterOutOfRange
    );
    assert!(out.is_null());
    unsafe { qs_state_free(ptr::null_mut()) };

    let msg = unsafe { CStr::from_ptr(qs_status_message(QsStatus::NotPsd)) };
    assert_eq!(msg.to_str().unwrap(), "matrix is not positive semidefinite");
}

#[test]
fn verification_summaries() {
    let mut f = QsFalsification::default();
    assert_eq!(unsafe { qs_verify(3, 500, 0, &mut f) }, QsStatus::Ok);
    assert_eq!((f.checked, f.violations), (500, 0));
    assert!(f.worst_coherence_identity < 1e-9);

    let handles: Vec<*mut QsState> = (0..20)
        .map(|i| {
            let mut s = ptr::null_mut();
            assert_eq!(unsafe { qs_state_random(8, i, 2, &mut s) }, QsStatus::Ok);
            s
        })
        .collect();
    let views: Vec<*const QsState> = handles.iter().map(|&h| h as *const _).collect();
    assert_eq!(
        unsafe { qs_verify_states(views.as_ptr(), views.len(), &mut f) },
        QsStatus::Ok
    );
    assert_eq!((f.checked, f.violations), (20, 0));
    for h in handles {
        unsafe { qs_state_free(h) };
    }
    assert_eq!(
        unsafe { qs_verify_states(ptr::null(), 0, &mut f) },
        QsStatus::Ok
    );
    assert_eq!(f.checked, 0);
}

// The generated header has to be valid C on its own.
#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/qsteer.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "qs_state_from_entries",
        "qs_analyze",
        "qs_state_free",
        "QS_STATUS_NOT_PSD",
        "QsClassification",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"qsteer.h\"\nint main(void) { QsReport r; QsState *s = 0; (void)r; return qs_analyze(s, &r) == QS_STATUS_NULL_POINTER ? 0 : 1; }\n",
    )
    .unwrap();
    let status = match Command::new("cc")
        .args(["-std=c11", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(header.parent().unwrap())
        .arg(&src)
        .status()
    {
        Ok(s) => s,
        Err(_) => return, // no C compiler on this machine
    };
    assert!(status.success());
}
