//! Exercise the C entry points exactly as a foreign caller would: through
//! raw pointers and NUL-terminated strings.

use minimaxlab_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn take_string(ptr: *mut std::ffi::c_char) -> String {
    assert!(!ptr.is_null());
    let text = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_string();
    unsafe { mmx_string_free(ptr) };
    text
}

#[test]
fn parse_classify_free_round_trip() {
    let json = CString::new(
        r#"{"A": [[-2.0]], "B": [[0.0]], "C": [[1.0]], "a": [0.0], "b": [0.0], "c": 0.0}"#,
    )
    .unwrap();
    let mut game: *mut MmxGame = ptr::null_mut();
    let status = unsafe { mmx_game_parse(json.as_ptr(), &mut game) };
    assert_eq!(status, MmxStatus::Ok);
    let mut out: *mut std::ffi::c_char = ptr::null_mut();
    let status = unsafe { mmx_game_classify(game, 1e-8, &mut out) };
    assert_eq!(status, MmxStatus::Ok);
    let report: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(report["local_minimax"]["exists"], true);
    assert_eq!(report["saddle"]["exists"], false);
    unsafe { mmx_game_free(game) };
}

#[test]
fn stability_verdict_through_ffi() {
    let json = CString::new(
        r#"{"A": [[-2.0]], "B": [[0.0]], "C": [[1.0]], "a": [0.0], "b": [0.0], "c": 0.0}"#,
    )
    .unwrap();
    let mut game: *mut MmxGame = ptr::null_mut();
    unsafe { mmx_game_parse(json.as_ptr(), &mut game) };
    let algo = CString::new("ogd").unwrap();
    let mut out: *mut std::ffi::c_char = ptr::null_mut();
    let status = unsafe {
        mmx_game_stability(game, algo.as_ptr(), 0.1, 2.0, 0.0, 1.01, false, &mut out)
    };
    assert_eq!(status, MmxStatus::Ok);
    let verdict: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(verdict["stable"], true);

    let gda = CString::new("gda").unwrap();
    let mut out2: *mut std::ffi::c_char = ptr::null_mut();
    unsafe { mmx_game_stability(game, gda.as_ptr(), 0.1, 0.1, 0.0, 0.0, false, &mut out2) };
    let verdict: serde_json::Value = serde_json::from_str(&take_string(out2)).unwrap();
    assert_eq!(verdict["stable"], false);
    unsafe { mmx_game_free(game) };
}

#[test]
fn error_codes() {
    let mut game: *mut MmxGame = ptr::null_mut();
    let bad = CString::new("{ not json").unwrap();
    assert_eq!(unsafe { mmx_game_parse(bad.as_ptr(), &mut game) }, MmxStatus::ParseError);
    let mismatched = CString::new(
        r#"{"A": [[1.0]], "B": [[1.0]], "C": [[1.0, 2.0]], "a": [0.0], "b": [0.0], "c": 0.0}"#,
    )
    .unwrap();
    assert_eq!(
        unsafe { mmx_game_parse(mismatched.as_ptr(), &mut game) },
        MmxStatus::DimensionError
    );
    assert_eq!(unsafe { mmx_game_parse(ptr::null(), &mut game) }, MmxStatus::NullArgument);

    let id = CString::new("not_a_fixture").unwrap();
    let mut out: *mut std::ffi::c_char = ptr::null_mut();
    assert_eq!(
        unsafe { mmx_fixture_classify(id.as_ptr(), 1e-8, &mut out) },
        MmxStatus::UnknownFixture
    );
}

#[test]
fn fixture_classification_through_ffi() {
    let id = CString::new("failure_lrp").unwrap();
    let mut out: *mut std::ffi::c_char = ptr::null_mut();
    assert_eq!(unsafe { mmx_fixture_classify(id.as_ptr(), 1e-8, &mut out) }, MmxStatus::Ok);
    let report: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(report["lrp"]["exists"], true);
    assert_eq!(report["local_minimax"]["exists"], false);
}

#[test]
fn generated_header_covers_the_surface() {
    let header = include_str!("../include/minimaxlab.h");
    for symbol in [
        "mmx_game_parse",
        "mmx_game_free",
        "mmx_game_classify",
        "mmx_game_stability",
        "mmx_fixture_classify",
        "mmx_string_free",
        "MmxStatus",
        "MmxGame",
    ] {
        assert!(header.contains(symbol), "header misses {symbol}");
    }
}
