use std::ffi::{c_char, CStr, CString};
use std::ptr;

use superq_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(sq_last_error_message()) }.to_str().unwrap().to_string()
}

const BER11: &str = r#"{"p":1,"q":1,"parity":0,"n":2,"entries":[
  [{"n":2,"terms":[{"gens":[],"re":2.0,"im":0.0}]}, {"n":2,"terms":[{"gens":[1],"re":1.0,"im":0.0}]}],
  [{"n":2,"terms":[{"gens":[2],"re":1.0,"im":0.0}]}, {"n":2,"terms":[{"gens":[],"re":4.0,"im":0.0}]}]
]}"#;

#[test]
fn berezinian_through_handles() {
    unsafe {
        let mut m: *mut SqMatrix = ptr::null_mut();
        assert_eq!(sq_matrix_from_json(c(BER11).as_ptr(), &mut m), SQ_OK);
        let mut b: *mut SqElement = ptr::null_mut();
        assert_eq!(sq_matrix_berezinian(m, &mut b), SQ_OK);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(sq_element_body(b, &mut re, &mut im), SQ_OK);
        assert_eq!((re, im), (0.5, 0.0));
        // a/d - beta gamma / d^2 = 1/2 - theta1 theta2 / 16
        let mut json: *mut c_char = ptr::null_mut();
        assert_eq!(sq_element_to_json(b, &mut json), SQ_OK);
        let text = CStr::from_ptr(json).to_str().unwrap().to_string();
        assert!(text.contains("-0.0625"), "{text}");
        sq_string_free(json);
        sq_element_free(b);
        sq_matrix_free(m);
    }
}

#[test]
fn supertranspose_four_times_round_trips() {
    unsafe {
        let mut m: *mut SqMatrix = ptr::null_mut();
        assert_eq!(sq_matrix_from_json(c(BER11).as_ptr(), &mut m), SQ_OK);
        let mut first: *mut c_char = ptr::null_mut();
        sq_matrix_to_json(m, &mut first);
        let mut cur = m;
        for _ in 0..4 {
            let mut next: *mut SqMatrix = ptr::null_mut();
            assert_eq!(sq_matrix_supertranspose(cur, &mut next), SQ_OK);
            sq_matrix_free(cur);
            cur = next;
        }
        let mut last: *mut c_char = ptr::null_mut();
        sq_matrix_to_json(cur, &mut last);
        assert_eq!(CStr::from_ptr(first), CStr::from_ptr(last));
        sq_string_free(first);
        sq_string_free(last);
        sq_matrix_free(cur);
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let mut e: *mut SqElement = ptr::null_mut();
        let code = sq_element_from_json(c("{").as_ptr(), &mut e);
        assert_eq!(code, 16);
        assert_eq!(CStr::from_ptr(sq_error_name(code)).to_str().unwrap(), "parse");
        assert!(last_error().starts_with("parse:"));
        assert!(e.is_null());

        assert_eq!(sq_element_from_json(ptr::null(), &mut e), SQ_ERR_NULL);
        assert_eq!(sq_element_from_json(c(r#"{"n":1,"terms":[]}"#).as_ptr(), ptr::null_mut()), SQ_ERR_NULL);

        let singular = BER11.replace("4.0", "0.0");
        let mut m: *mut SqMatrix = ptr::null_mut();
        assert_eq!(sq_matrix_from_json(c(&singular).as_ptr(), &mut m), SQ_OK);
        let mut b: *mut SqElement = ptr::null_mut();
        let code = sq_matrix_berezinian(m, &mut b);
        assert_eq!(CStr::from_ptr(sq_error_name(code)).to_str().unwrap(), "noninvertible");
        assert!(last_error().contains("Berezinian undefined"));
        sq_matrix_free(m);

        let ok = sq_element_from_json(c(r#"{"n":1,"terms":[]}"#).as_ptr(), &mut e);
        assert_eq!(ok, SQ_OK);
        assert_eq!(last_error(), "");
        sq_element_free(e);
        sq_element_free(ptr::null_mut());
    }
}

#[test]
fn element_arithmetic_and_parity() {
    unsafe {
        let mut a: *mut SqElement = ptr::null_mut();
        let mut b: *mut SqElement = ptr::null_mut();
        sq_element_from_json(c(r#"{"n":2,"terms":[{"gens":[1],"re":1.0,"im":0.0}]}"#).as_ptr(), &mut a);
        sq_element_from_json(c(r#"{"n":2,"terms":[{"gens":[2],"re":1.0,"im":0.0}]}"#).as_ptr(), &mut b);
        let (mut ab, mut ba, mut sum) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        sq_element_mul(a, b, &mut ab);
        sq_element_mul(b, a, &mut ba);
        assert_eq!(sq_element_add(ab, ba, &mut sum), SQ_OK);
        let mut json: *mut c_char = ptr::null_mut();
        sq_element_to_json(sum, &mut json);
        assert!(CStr::from_ptr(json).to_str().unwrap().contains("\"terms\": []"));
        let mut p = 9u8;
        assert_eq!(sq_element_parity(ab, &mut p), SQ_OK);
        assert_eq!(p, 0);
        let (mut mixed, mut pm) = (ptr::null_mut(), 9u8);
        sq_element_add(a, ab, &mut mixed);
        assert_eq!(sq_element_parity(mixed, &mut pm), 3);
        sq_string_free(json);
        for h in [a, b, ab, ba, sum, mixed] {
            sq_element_free(h);
        }
    }
}

#[test]
fn bell_concurrence_and_inner_product() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bell = format!(
        r#"{{"kind":"qubit","n":2,"slots":{{"00":{{"n":2,"terms":[{{"gens":[],"re":{h},"im":0.0}}]}},"11":{{"n":2,"terms":[{{"gens":[],"re":{h},"im":0.0}}]}}}}}}"#
    );
    unsafe {
        let mut t: *mut SqTable = ptr::null_mut();
        assert_eq!(sq_table_from_json(c(&bell).as_ptr(), &mut t), SQ_OK, "{}", last_error());
        let mut conc = 0.0;
        assert_eq!(sq_table_concurrence(t, false, &mut conc), SQ_OK);
        assert!((conc - 1.0).abs() < 1e-12);
        let mut sc = 0.0;
        assert_eq!(CStr::from_ptr(sq_error_name(sq_table_superconcurrence(t, &mut sc))).to_str().unwrap(), "format-mismatch");
        sq_table_free(t);

        let ket = r#"{"r":2,"s":1,"parity":0,"n":2,"even":[
          {"n":2,"terms":[{"gens":[],"re":1.0,"im":0.0}]},{"n":2,"terms":[]}],
          "odd":[{"n":2,"terms":[{"gens":[1],"re":1.0,"im":0.0}]}]}"#;
        let mut k: *mut SqKet = ptr::null_mut();
        assert_eq!(sq_ket_from_json(c(ket).as_ptr(), &mut k), SQ_OK, "{}", last_error());
        let mut ip: *mut SqElement = ptr::null_mut();
        assert_eq!(sq_ket_inner(k, k, &mut ip), SQ_OK);
        let (mut re, mut im) = (0.0, 0.0);
        sq_element_body(ip, &mut re, &mut im);
        assert_eq!((re, im), (1.0, 0.0));
        sq_element_free(ip);
        sq_ket_free(k);
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/superq.h")).unwrap();
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    for line in src.lines() {
        if let Some(rest) = line.split("extern \"C\" fn ").nth(1) {
            let name = rest.split('(').next().unwrap();
            assert!(header.contains(&format!("{name}(")), "{name} missing from header");
        }
    }
    for handle in ["SqElement", "SqMatrix", "SqKet", "SqTable"] {
        assert!(header.contains(&format!("typedef struct {handle} {handle};")));
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(status) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-x", "c", "-Wall", "-Werror"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include/superq.h"))
        .status()
    else {
        eprintln!("no C compiler, skipped");
        return;
    };
    assert!(status.success());
}
