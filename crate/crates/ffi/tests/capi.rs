use std::ffi::{CStr, CString};
use std::ptr;
use tropicount_ffi::*;

const LINE: &str = r#"{"degree":{"n":2,"rays":[{"v":[-1,0],"count":1},{"v":[0,-1],"count":1},{"v":[1,1],"count":1}]},
"constraints":[{"base":["1/3","2/7"]},{"base":["17/5","-13/11"]}]}"#;

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    tc_string_free(s);
    out
}

#[test]
fn count_a_line() {
    unsafe {
        let text = CString::new(LINE).unwrap();
        let mut p = ptr::null_mut();
        assert_eq!(tc_problem_from_json(text.as_ptr(), &mut p), TcStatus::Ok);
        assert_eq!(tc_problem_set_options(p, 3, true, 1), TcStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(tc_count(p, &mut r), TcStatus::Ok);
        assert_eq!(tc_result_num_curves(r), 1);
        let mut s = ptr::null_mut();
        assert_eq!(tc_result_total(r, &mut s), TcStatus::Ok);
        assert_eq!(take(s), "1");
        assert_eq!(tc_result_to_json(r, &mut s), TcStatus::Ok);
        assert!(take(s).contains("\"total\":1"));
        tc_result_free(r);
        tc_problem_free(p);
    }
}

#[test]
fn errors_carry_messages() {
    unsafe {
        let bad = CString::new("{ not json").unwrap();
        let mut p = ptr::null_mut();
        assert_eq!(tc_problem_from_json(bad.as_ptr(), &mut p), TcStatus::InvalidInput);
        assert!(p.is_null());
        assert!(!tc_last_error().is_null());
        assert_eq!(tc_problem_from_json(ptr::null(), &mut p), TcStatus::NullPointer);

        let wrong = CString::new(
            r#"{"degree":{"n":2,"rays":[{"v":[-1,0],"count":1},{"v":[0,-1],"count":1},{"v":[1,1],"count":1}]},
            "constraints":[{"base":["0","0"]},{"base":["1","2"]},{"base":["3","1"]}]}"#,
        )
        .unwrap();
        assert_eq!(tc_problem_from_json(wrong.as_ptr(), &mut p), TcStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(tc_count(p, &mut r), TcStatus::InvalidInput);
        let msg = CStr::from_ptr(tc_last_error()).to_str().unwrap();
        assert!(msg.contains("codimension"), "{msg}");
        tc_problem_free(p);
    }
}

#[test]
fn special_constraints_without_resampling() {
    unsafe {
        let text = CString::new(
            r#"{"degree":{"n":2,"rays":[{"v":[-1,0],"count":1},{"v":[0,-1],"count":1},{"v":[1,1],"count":1}]},
            "constraints":[{"base":["0","0"]},{"base":["-5","0"]}]}"#,
        )
        .unwrap();
        let mut p = ptr::null_mut();
        assert_eq!(tc_problem_from_json(text.as_ptr(), &mut p), TcStatus::Ok);
        tc_problem_set_options(p, 0, false, 1);
        let mut r = ptr::null_mut();
        assert_eq!(tc_count(p, &mut r), TcStatus::NonGeneric);
        tc_problem_set_options(p, 0, true, 1);
        assert_eq!(tc_count(p, &mut r), TcStatus::Ok);
        let mut s = ptr::null_mut();
        tc_result_total(r, &mut s);
        assert_eq!(take(s), "1");
        tc_result_free(r);
        tc_problem_free(p);
    }
}

#[test]
fn parameters_and_oracle() {
    unsafe {
        let text = CString::new(
            r#"{"degree":{"n":2,"rays":[{"v":[-1,0],"count":1},{"v":[0,-1],"count":1},{"v":[1,1],"count":1}]},
            "constraints":[{"base":["1/3","2/7"],"directions":[["k",1]]}]}"#,
        )
        .unwrap();
        let mut p = ptr::null_mut();
        assert_eq!(tc_problem_from_json(text.as_ptr(), &mut p), TcStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(tc_count(p, &mut r), TcStatus::InvalidInput);
        let k = CString::new("k").unwrap();
        assert_eq!(tc_problem_set_param(p, k.as_ptr(), 2), TcStatus::Ok);
        // one line constraint has codimension 0, two are needed in total
        assert_eq!(tc_count(p, &mut r), TcStatus::InvalidInput);
        tc_problem_free(p);

        let mut s = ptr::null_mut();
        assert_eq!(tc_oracle_json(4, &mut s), TcStatus::Ok);
        assert_eq!(take(s), "[1,1,12,620]");
        assert_eq!(tc_oracle_json(0, &mut s), TcStatus::InvalidInput);
    }
}

#[test]
fn check2d_and_decompose() {
    unsafe {
        let text = CString::new(LINE).unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(tc_check2d_json(text.as_ptr(), &mut s), TcStatus::Ok);
        assert!(take(s).contains("\"all_equal\":true"));
        let dec = CString::new(
            r#"{"fan":{"n":2,"rays":[[-1,0],[0,-1],[1,1]],"cones":[[0,1],[1,2],[0,2]]},
            "curves":[{"vertices":[["0","0"]],"edges":[{"tail":0,"head":null,"dir":[-1,0]},{"tail":0,"head":null,"dir":[0,-1]},{"tail":0,"head":null,"dir":[1,1]}]}]}"#,
        )
        .unwrap();
        assert_eq!(tc_decompose_json(dec.as_ptr(), &mut s), TcStatus::Ok);
        let v = take(s);
        assert!(v.contains("\"rescale\":1"), "{v}");
        let missing = CString::new(
            r#"{"fan":{"preset":"lines","n":2},
            "curves":[{"vertices":[["0","0"]],"edges":[{"tail":0,"head":null,"dir":[-1,0]},{"tail":0,"head":null,"dir":[0,-1]},{"tail":0,"head":null,"dir":[1,1]}]}]}"#,
        )
        .unwrap();
        assert_eq!(tc_decompose_json(missing.as_ptr(), &mut s), TcStatus::InvalidInput);
    }
}

#[test]
fn header_declares_every_entry_point() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/tropicount.h")).unwrap();
    for f in [
        "tc_last_error",
        "tc_string_free",
        "tc_problem_from_json",
        "tc_problem_free",
        "tc_problem_set_param",
        "tc_problem_set_options",
        "tc_count",
        "tc_result_free",
        "tc_result_num_curves",
        "tc_result_total",
        "tc_result_to_json",
        "tc_check2d_json",
        "tc_decompose_json",
        "tc_oracle_json",
        "TC_STATUS_NON_GENERIC",
    ] {
        assert!(h.contains(f), "{f} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let h = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let dir = std::env::temp_dir().join(format!("tc-header-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("use.c");
    std::fs::write(
        &src,
        "#include <tropicount.h>\nint main(void) { TcProblem *p = 0; return tc_problem_free(p), TC_STATUS_OK; }\n",
    )
    .unwrap();
    let Ok(status) = std::process::Command::new("cc").args(["-fsyntax-only", "-Wall", "-I", h]).arg(&src).status() else {
        eprintln!("no C compiler, skipped");
        return;
    };
    assert!(status.success());
}
