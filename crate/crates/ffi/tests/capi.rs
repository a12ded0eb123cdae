use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use gcomplex_ffi::*;

fn last_error() -> String {
    let p = gcx_last_error();
    assert!(!p.is_null(), "expected an error message");
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn cohomology_through_the_c_abi() {
    let mut engine = ptr::null_mut();
    assert_eq!(unsafe { gcx_engine_new(7, 10, 0, &mut engine) }, GcxStatus::Ok);
    let flavor = CString::new("GCor").unwrap();
    let mut h = usize::MAX;
    assert_eq!(unsafe { gcx_cohomology_dim(engine, flavor.as_ptr(), 2, 2, 1, &mut h) }, GcxStatus::Ok);
    assert_eq!(h, 1);
    assert!(gcx_last_error().is_null());
    let gc = CString::new("GC").unwrap();
    assert_eq!(unsafe { gcx_cohomology_dim(engine, gc.as_ptr(), 2, 3, 0, &mut h) }, GcxStatus::Ok);
    assert_eq!(h, 1);
    let mut size = 0;
    assert_eq!(unsafe { gcx_basis_size(engine, gc.as_ptr(), 2, 4, 6, 0, &mut size) }, GcxStatus::Ok);
    assert!(size >= 1);
    unsafe { gcx_engine_free(engine) };
}

#[test]
fn cochain_handles_round_trip() {
    let name = CString::new("shoikhet").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { gcx_cochain_named(name.as_ptr(), 2, -1, &mut s) }, GcxStatus::Ok);
    let mut len = 0;
    assert_eq!(unsafe { gcx_cochain_len(s, &mut len) }, GcxStatus::Ok);
    assert_eq!(len, 3);

    let mut ds = ptr::null_mut();
    assert_eq!(unsafe { gcx_cochain_differential(s, &mut ds) }, GcxStatus::Ok);
    assert_eq!(unsafe { gcx_cochain_len(ds, &mut len) }, GcxStatus::Ok);
    assert_eq!(len, 0);

    let mut text = ptr::null_mut();
    assert_eq!(unsafe { gcx_cochain_to_text(s, &mut text) }, GcxStatus::Ok);
    let mut parsed = ptr::null_mut();
    assert_eq!(unsafe { gcx_cochain_parse(text, &mut parsed) }, GcxStatus::Ok);
    let mut again = ptr::null_mut();
    assert_eq!(unsafe { gcx_cochain_to_text(parsed, &mut again) }, GcxStatus::Ok);
    assert_eq!(unsafe { CStr::from_ptr(text) }, unsafe { CStr::from_ptr(again) });

    let edge = CString::new("edge").unwrap();
    let mut m = ptr::null_mut();
    let mut mm = ptr::null_mut();
    assert_eq!(unsafe { gcx_cochain_named(edge.as_ptr(), 2, -1, &mut m) }, GcxStatus::Ok);
    assert_eq!(unsafe { gcx_cochain_bracket(m, m, &mut mm) }, GcxStatus::Ok);
    assert_eq!(unsafe { gcx_cochain_len(mm, &mut len) }, GcxStatus::Ok);
    assert_eq!(len, 0);

    unsafe {
        gcx_string_free(text);
        gcx_string_free(again);
        for x in [s, ds, parsed, m, mm] {
            gcx_cochain_free(x);
        }
    }
}

#[test]
fn errors_are_reported_by_code_and_message() {
    let mut engine = ptr::null_mut();
    assert_eq!(unsafe { gcx_engine_new(0, 4, 0, &mut engine) }, GcxStatus::InvalidArgument);
    assert!(last_error().contains("max_v"));
    assert_eq!(unsafe { gcx_engine_new(4, 4, 0, ptr::null_mut()) }, GcxStatus::NullPointer);

    assert_eq!(unsafe { gcx_engine_new(4, 6, 0, &mut engine) }, GcxStatus::Ok);
    let bogus = CString::new("nope").unwrap();
    let mut h = 0;
    assert_eq!(unsafe { gcx_cohomology_dim(engine, bogus.as_ptr(), 2, 1, 0, &mut h) }, GcxStatus::InvalidArgument);
    assert!(last_error().contains("unknown flavor"));
    // the bucket pair for b=3 at n=2 needs five vertices
    let gc = CString::new("GC").unwrap();
    assert_eq!(unsafe { gcx_cohomology_dim(engine, gc.as_ptr(), 2, 3, 0, &mut h) }, GcxStatus::Computation);
    assert!(last_error().contains("bounds"));
    assert_eq!(unsafe { gcx_cohomology_dim(ptr::null(), gc.as_ptr(), 2, 3, 0, &mut h) }, GcxStatus::NullPointer);
    unsafe { gcx_engine_free(engine) };

    let bad_utf8 = [0xffu8, 0xfe, 0];
    let mut x = ptr::null_mut();
    assert_eq!(unsafe { gcx_cochain_parse(bad_utf8.as_ptr().cast(), &mut x) }, GcxStatus::InvalidUtf8);
    let garbage = CString::new("not a cochain").unwrap();
    assert_eq!(unsafe { gcx_cochain_parse(garbage.as_ptr(), &mut x) }, GcxStatus::InvalidArgument);
    let wheel = CString::new("wheel").unwrap();
    assert_eq!(unsafe { gcx_cochain_named(wheel.as_ptr(), 2, -1, &mut x) }, GcxStatus::Computation);
    assert!(x.is_null());
    unsafe {
        gcx_cochain_free(ptr::null_mut());
        gcx_engine_free(ptr::null_mut());
        gcx_string_free(ptr::null_mut());
    }
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(gcx_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/gcomplex.h");
    let text = std::fs::read_to_string(header).unwrap();
    for f in ["gcx_engine_new", "gcx_cohomology_dim", "gcx_cochain_bracket", "gcx_last_error", "GCX_STATUS_PANIC"] {
        assert!(text.contains(f), "{f} missing from the header");
    }
    let dir = std::env::temp_dir().join(format!("gcomplex-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("use_header.c");
    std::fs::write(
        &src,
        "#include \"gcomplex.h\"\nint probe(void) { GcxEngine *e = 0; size_t h = 0;\n\
         GcxStatus s = gcx_engine_new(5, 7, 0, &e);\n\
         if (s == GCX_STATUS_OK) s = gcx_cohomology_dim(e, \"GC\", 2, 2, 0, &h);\n\
         gcx_engine_free(e); return (int)s + (int)h; }\n",
    )
    .unwrap();
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    match Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I", include]).arg(&src).output() {
        Ok(out) => assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr)),
        Err(e) => eprintln!("no C compiler available ({e}); header only checked textually"),
    }
    std::fs::remove_dir_all(&dir).ok();
}
