use std::ffi::{c_char, CStr, CString};
use std::process::Command;
use std::ptr;

use paspc_ffi::*;

const EXAMPLE: &str = "a | b.\nc | e.\nd | e :- b.\nb :- e, not d.\nd :- not b.\n#project d, e.\n";

fn take(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { paspc_string_free(s) };
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(paspc_last_error()) }.to_str().unwrap().to_owned()
}

fn parse(text: &str) -> *mut PaspcProgram {
    let text = CString::new(text).unwrap();
    let mut handle = ptr::null_mut();
    assert_eq!(unsafe { paspc_program_parse(text.as_ptr(), &mut handle) }, PaspcStatus::Ok);
    handle
}

fn count(handle: *const PaspcProgram, alg: PaspcAlgorithm) -> Result<String, PaspcStatus> {
    let mut out = ptr::null_mut();
    match unsafe { paspc_count(handle, alg, &mut out) } {
        PaspcStatus::Ok => Ok(take(out)),
        status => Err(status),
    }
}

#[test]
fn counts_through_the_c_interface() {
    let h = parse(EXAMPLE);
    assert_eq!(unsafe { paspc_program_atom_count(h) }, 5);
    assert_eq!(count(h, PaspcAlgorithm::Auto).unwrap(), "3");
    assert_eq!(count(h, PaspcAlgorithm::Prim).unwrap(), "3");

    assert_eq!(unsafe { paspc_program_project_all(h) }, PaspcStatus::Ok);
    assert_eq!(count(h, PaspcAlgorithm::Phc).unwrap(), "4");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { paspc_oracle_count(h, &mut out) }, PaspcStatus::Ok);
    assert_eq!(take(out), "4");

    assert_eq!(unsafe { paspc_program_set_projection(h, ptr::null(), 0) }, PaspcStatus::Ok);
    assert_eq!(count(h, PaspcAlgorithm::Auto).unwrap(), "1");

    let d = CString::new("d").unwrap();
    let names = [d.as_ptr()];
    assert_eq!(unsafe { paspc_program_set_projection(h, names.as_ptr(), 1) }, PaspcStatus::Ok);
    assert_eq!(count(h, PaspcAlgorithm::Auto).unwrap(), "2");
    unsafe { paspc_program_free(h) };
}

#[test]
fn errors_carry_status_and_message() {
    let bad = CString::new("a :- b").unwrap();
    let mut handle = ptr::null_mut();
    assert_eq!(unsafe { paspc_program_parse(bad.as_ptr(), &mut handle) }, PaspcStatus::Parse);
    assert!(handle.is_null());
    assert!(last_error().contains("1:"), "{}", last_error());

    let h = parse(EXAMPLE);
    assert_eq!(count(h, PaspcAlgorithm::PhcTight), Err(PaspcStatus::ClassMismatch));
    let zz = CString::new("zz").unwrap();
    let names = [zz.as_ptr()];
    assert_eq!(unsafe { paspc_program_set_projection(h, names.as_ptr(), 1) }, PaspcStatus::UnknownAtom);
    assert!(last_error().contains("zz"));
    assert_eq!(count(ptr::null(), PaspcAlgorithm::Auto), Err(PaspcStatus::NullArgument));
    assert_eq!(unsafe { paspc_program_parse(ptr::null(), &mut handle) }, PaspcStatus::NullArgument);
    assert_eq!(count(h, PaspcAlgorithm::Auto).unwrap(), "3");
    assert_eq!(last_error(), "");
    unsafe { paspc_program_free(h) };
    unsafe { paspc_program_free(ptr::null_mut()) };
}

#[test]
fn header_compiles_as_c() {
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let source = r#"
#include "paspc.h"
int main(void) {
    PaspcProgram *p = 0;
    char *out = 0;
    const char *names[] = {"d"};
    if (paspc_program_parse("a | b.", &p) != PASPC_STATUS_OK) return 1;
    paspc_program_set_projection(p, names, 1);
    paspc_program_project_all(p);
    if (paspc_count(p, PASPC_ALGORITHM_AUTO, &out) == PASPC_STATUS_OK) paspc_string_free(out);
    paspc_oracle_count(p, &out);
    (void)paspc_program_atom_count(p);
    (void)paspc_last_error();
    paspc_program_free(p);
    return 0;
}
"#;
    let dir = std::env::temp_dir().join(format!("paspc-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("smoke.c");
    std::fs::write(&file, source).unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I", include])
        .arg(&file)
        .status()
        .expect("a C compiler is available");
    assert!(status.success());
}
