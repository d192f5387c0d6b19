//! Exercise the C ABI the way a foreign caller would: raw pointers,
//! NUL-terminated strings, and status codes.

use iggp_ffi::*;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;

fn cstring(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let mut buf = vec![0u8; 512];
    let len = unsafe { iggp_last_error(buf.as_mut_ptr() as *mut c_char, buf.len()) };
    buf.truncate(len);
    String::from_utf8(buf).unwrap()
}

#[test]
fn version_is_a_static_string() {
    let version = unsafe { CStr::from_ptr(iggp_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn bundled_game_loads_and_reports_roles() {
    let name = cstring("rock_paper_scissors");
    let game = unsafe { iggp_game_load_bundled(name.as_ptr()) };
    assert!(!game.is_null(), "load failed: {}", last_error());
    assert_eq!(unsafe { iggp_game_role_count(game) }, 2);
    let mut buf = vec![0u8; 16];
    let len = unsafe { iggp_game_role_name(game, 0, buf.as_mut_ptr() as *mut c_char, buf.len()) };
    assert_eq!(&buf[..len], b"p1");
    assert_eq!(unsafe { iggp_game_role_name(game, 9, buf.as_mut_ptr() as *mut c_char, buf.len()) }, 0);
    unsafe { iggp_game_free(game) };
}

#[test]
fn unknown_bundle_sets_the_error_message() {
    let name = cstring("no_such_game");
    let game = unsafe { iggp_game_load_bundled(name.as_ptr()) };
    assert!(game.is_null());
    assert!(iggp_last_error_length() > 0);
    assert!(last_error().contains("no_such_game"));
}

#[test]
fn null_arguments_are_invalid() {
    let game = unsafe { iggp_game_load_bundled(std::ptr::null()) };
    assert!(game.is_null());
    let status = unsafe {
        iggp_simulate(std::ptr::null(), 1, 1, 0, cstring("/tmp/never").as_ptr())
    };
    assert_eq!(status, IggpStatus::IggpInvalidArgument);
    unsafe { iggp_game_free(std::ptr::null_mut()) };
}

#[test]
fn load_from_files_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let gdl = dir.path().join("game.gdl");
    let sig = dir.path().join("signature.sig");
    std::fs::write(&gdl, "(role you)\n(legal you go)\n").unwrap();
    std::fs::write(
        &sig,
        "role :: agent -> bool.\nlegal, does :: agent -> act -> bool.\ntrue, next, init :: prop -> bool.\nterminal :: bool.\nyou :: agent.\ngo :: act.\n",
    )
    .unwrap();
    let gdl_c = cstring(gdl.to_str().unwrap());
    let sig_c = cstring(sig.to_str().unwrap());
    let game = unsafe { iggp_game_load(gdl_c.as_ptr(), sig_c.as_ptr()) };
    assert!(!game.is_null(), "load failed: {}", last_error());
    assert_eq!(unsafe { iggp_game_role_count(game) }, 1);
    unsafe { iggp_game_free(game) };

    let missing = cstring(dir.path().join("absent.gdl").to_str().unwrap());
    let null_game = unsafe { iggp_game_load(missing.as_ptr(), sig_c.as_ptr()) };
    assert!(null_game.is_null());
}

#[test]
fn simulate_generate_and_score_through_the_abi() {
    let name = cstring("minimal_decay");
    let game = unsafe { iggp_game_load_bundled(name.as_ptr()) };
    assert!(!game.is_null());
    let dir = tempfile::tempdir().unwrap();

    let traces_path = cstring(dir.path().join("traces.txt").to_str().unwrap());
    let status = unsafe { iggp_simulate(game, 3, 10, 7, traces_path.as_ptr()) };
    assert_eq!(status, IggpStatus::IggpOk, "{}", last_error());
    let dump = std::fs::read_to_string(dir.path().join("traces.txt")).unwrap();
    assert!(dump.contains("true_value(5)."));

    let ds = cstring(dir.path().join("ds").to_str().unwrap());
    let status = unsafe { iggp_generate_dataset(game, 5, 10, 7, 2, ds.as_ptr()) };
    assert_eq!(status, IggpStatus::IggpOk, "{}", last_error());
    assert!(dir.path().join("ds/minimal_decay/game.gdl").is_file());

    let report = cstring(dir.path().join("report.tsv").to_str().unwrap());
    let status = unsafe { iggp_eval_reference(ds.as_ptr(), report.as_ptr()) };
    assert_eq!(status, IggpStatus::IggpOk, "{}", last_error());
    let tsv = std::fs::read_to_string(dir.path().join("report.tsv")).unwrap();
    assert!(tsv.lines().count() > 1);

    let method = cstring("true");
    let report2 = cstring(dir.path().join("baseline.tsv").to_str().unwrap());
    let status = unsafe { iggp_baseline(ds.as_ptr(), method.as_ptr(), report2.as_ptr()) };
    assert_eq!(status, IggpStatus::IggpOk, "{}", last_error());

    let bogus = cstring("warp");
    let status = unsafe { iggp_baseline(ds.as_ptr(), bogus.as_ptr(), report2.as_ptr()) };
    assert_eq!(status, IggpStatus::IggpDomainError);
    assert!(last_error().contains("warp"));

    unsafe { iggp_game_free(game) };
}

#[test]
fn eval_hypothesis_file_through_the_abi() {
    let name = cstring("minimal_decay");
    let game = unsafe { iggp_game_load_bundled(name.as_ptr()) };
    let dir = tempfile::tempdir().unwrap();
    let ds = cstring(dir.path().join("ds").to_str().unwrap());
    assert_eq!(
        unsafe { iggp_generate_dataset(game, 5, 10, 7, 0, ds.as_ptr()) },
        IggpStatus::IggpOk
    );
    let hyp_path = dir.path().join("h.gdl");
    std::fs::write(&hyp_path, "(<= (next_value ?y) (true_value ?x) (succ ?y ?x))\n").unwrap();
    let hyp = cstring(hyp_path.to_str().unwrap());
    let report = cstring(dir.path().join("eval.tsv").to_str().unwrap());
    assert_eq!(
        unsafe { iggp_eval_hypothesis(ds.as_ptr(), hyp.as_ptr(), report.as_ptr()) },
        IggpStatus::IggpOk,
        "{}",
        last_error()
    );
    let missing = cstring(dir.path().join("absent.gdl").to_str().unwrap());
    assert_eq!(
        unsafe { iggp_eval_hypothesis(ds.as_ptr(), missing.as_ptr(), report.as_ptr()) },
        IggpStatus::IggpIoError
    );
    unsafe { iggp_game_free(game) };
}
