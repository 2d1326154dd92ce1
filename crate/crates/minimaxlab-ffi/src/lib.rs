//! C ABI for the game classification and stability verdicts. Games travel
//! as JSON strings (the same wire format the CLI uses), handles are opaque,
//! and every entry point returns a status code mirroring the CLI exit
//! contract. Returned strings must be released with `mmx_string_free`.

use minimaxlab::dynamics::AlgorithmSpec;
use minimaxlab::fixtures::fixture;
use minimaxlab::quadratic::{GameParseError, QuadraticGame};
use minimaxlab::stability::exponential_stability;
use std::ffi::{c_char, CStr, CString};

/// Status codes shared by every FFI entry point.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmxStatus {
    Ok = 0,
    Failure = 1,
    ParseError = 2,
    DimensionError = 3,
    UnknownFixture = 4,
    NullArgument = 5,
}

/// Opaque handle to a parsed quadratic game.
pub struct MmxGame {
    inner: QuadraticGame,
}

fn status_of(e: &GameParseError) -> MmxStatus {
    match e {
        GameParseError::Json(_) => MmxStatus::ParseError,
        GameParseError::Dimension(_) => MmxStatus::DimensionError,
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Option<&'a str> {
    if ptr.is_null() {
        return None;
    }
    CStr::from_ptr(ptr).to_str().ok()
}

fn hand_out(text: String, out: *mut *mut c_char) -> MmxStatus {
    match CString::new(text) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            MmxStatus::Ok
        }
        Err(_) => MmxStatus::Failure,
    }
}

/// Parse a game from JSON ({"A": [[..]], "B": [[..]], "C": [[..]],
/// "a": [..], "b": [..], "c": ..}) into an opaque handle.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mmx_game_parse(json: *const c_char, out: *mut *mut MmxGame) -> MmxStatus {
    if out.is_null() {
        return MmxStatus::NullArgument;
    }
    let Some(text) = read_str(json) else {
        return MmxStatus::NullArgument;
    };
    match QuadraticGame::from_json(text) {
        Ok(game) => {
            *out = Box::into_raw(Box::new(MmxGame { inner: game }));
            MmxStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Release a handle returned by `mmx_game_parse`.
///
/// # Safety
/// `game` must come from `mmx_game_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mmx_game_free(game: *mut MmxGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// Classify the game; writes the classification report as a JSON string.
///
/// # Safety
/// `game` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mmx_game_classify(
    game: *const MmxGame,
    tol: f64,
    out_json: *mut *mut c_char,
) -> MmxStatus {
    if game.is_null() || out_json.is_null() {
        return MmxStatus::NullArgument;
    }
    let report = (*game).inner.classify(tol);
    match serde_json::to_string_pretty(&report) {
        Ok(text) => hand_out(text, out_json),
        Err(_) => MmxStatus::Failure,
    }
}

/// Exponential-stability verdict of an algorithm at a stationary point of
/// the game (the minimum-norm one, or the origin when none exists). `algo`
/// is one of "gda", "hb", "nag", "eg", "past-eg", "ogd"; `beta` is the
/// momentum or extra-gradient ratio, `k` the optimistic coefficient.
///
/// # Safety
/// `game` must be a live handle; `algo` a valid NUL-terminated string;
/// `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mmx_game_stability(
    game: *const MmxGame,
    algo: *const c_char,
    alpha1: f64,
    alpha2: f64,
    beta: f64,
    k: f64,
    alternating: bool,
    out_json: *mut *mut c_char,
) -> MmxStatus {
    if game.is_null() || out_json.is_null() {
        return MmxStatus::NullArgument;
    }
    let Some(name) = read_str(algo) else {
        return MmxStatus::NullArgument;
    };
    let spec = match name {
        "gda" => Ok(AlgorithmSpec::gda(alpha1, alpha2)),
        "hb" => Ok(AlgorithmSpec::hb(alpha1, alpha2, beta)),
        "nag" => Ok(AlgorithmSpec::nag(alpha1, alpha2, beta)),
        "eg" => AlgorithmSpec::eg(alpha1, alpha2, beta),
        "past-eg" => AlgorithmSpec::past_eg(alpha1, alpha2, beta),
        "ogd" => AlgorithmSpec::ogd(k, alpha1, alpha2),
        _ => return MmxStatus::ParseError,
    };
    let spec = match spec {
        Ok(s) => s,
        Err(_) => return MmxStatus::ParseError,
    };
    let spec = if alternating {
        match spec.alternating() {
            Ok(s) => s,
            Err(_) => return MmxStatus::ParseError,
        }
    } else {
        spec
    };
    let g = &(*game).inner;
    let stationary = g.stationary_set(1e-8);
    let point = if stationary.empty {
        (vec![0.0; g.n()], vec![0.0; g.m()])
    } else {
        let (x, y) = stationary.basepoint.split_at(g.n());
        (x.to_vec(), y.to_vec())
    };
    match exponential_stability(&spec, g, (&point.0, &point.1)) {
        Ok(verdict) => match serde_json::to_string_pretty(&verdict.to_json()) {
            Ok(text) => hand_out(text, out_json),
            Err(_) => MmxStatus::Failure,
        },
        Err(_) => MmxStatus::Failure,
    }
}

/// Classify a registered quadratic fixture by id.
///
/// # Safety
/// `id` must be a valid NUL-terminated string and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mmx_fixture_classify(
    id: *const c_char,
    tol: f64,
    out_json: *mut *mut c_char,
) -> MmxStatus {
    if out_json.is_null() {
        return MmxStatus::NullArgument;
    }
    let Some(name) = read_str(id) else {
        return MmxStatus::NullArgument;
    };
    let Some(fx) = fixture(name) else {
        return MmxStatus::UnknownFixture;
    };
    let Some(game) = fx.quadratic else {
        return MmxStatus::UnknownFixture;
    };
    let report = game.classify(tol);
    match serde_json::to_string_pretty(&report) {
        Ok(text) => hand_out(text, out_json),
        Err(_) => MmxStatus::Failure,
    }
}

/// Release a string returned by any of the `*_json` entry points.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mmx_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
