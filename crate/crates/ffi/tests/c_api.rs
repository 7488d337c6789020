//! The C ABI driven from Rust, plus a compile check of the generated header.

use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::ptr;

use orbifold_fusion_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn registry_path() -> CString {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/registry.toml");
    c(p.to_str().unwrap())
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    of_string_free(s);
    out
}

fn last_error() -> Option<String> {
    let p = of_last_error_message();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned())
}

#[test]
fn registry_and_table_round_trip() {
    unsafe {
        let mut reg = ptr::null_mut();
        assert_eq!(of_registry_load(registry_path().as_ptr(), &mut reg), OfStatus::Ok);
        assert!(last_error().is_none());

        let mut count = 0;
        assert_eq!(of_registry_module_count(reg, &mut count), OfStatus::Ok);
        assert_eq!(count, 8);
        let mut name = ptr::null_mut();
        assert_eq!(of_registry_module_name(reg, 7, &mut name), OfStatus::Ok);
        assert_eq!(take(name), "Wa");
        assert_eq!(of_registry_module_name(reg, 8, &mut name), OfStatus::NotFound);

        let (mut h, mut k) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(of_registry_module_params(reg, c("M0(1)").as_ptr(), &mut h, &mut k), OfStatus::Ok);
        assert_eq!((take(h), take(k)), ("2".to_string(), "12*s3".to_string()));

        let mut table = ptr::null_mut();
        assert_eq!(of_table_build(reg, &mut table), OfStatus::Ok);
        let mut n = 0;
        assert_eq!(of_table_multiplicity(table, c("Wa").as_ptr(), c("Wa").as_ptr(), c("Ma").as_ptr(), &mut n), OfStatus::Ok);
        assert_eq!(n, 2);
        let (mut lo, mut hi) = (0, 0);
        assert_eq!(
            of_table_bounds(table, c("Ma").as_ptr(), c("W0(1)").as_ptr(), c("Wa").as_ptr(), &mut lo, &mut hi),
            OfStatus::Ok
        );
        assert_eq!((lo, hi), (1, 1));
        assert_eq!(of_table_inconsistencies(table, &mut n), OfStatus::Ok);
        assert_eq!(n, 0);
        let mut text = ptr::null_mut();
        assert_eq!(of_table_emit(table, OfFormat::Records, &mut text), OfStatus::Ok);
        assert!(take(text).starts_with("l1,l2,l3,multiplicity\n"));
        assert_eq!(
            of_table_multiplicity(table, c("X").as_ptr(), c("Wa").as_ptr(), c("Ma").as_ptr(), &mut n),
            OfStatus::NotFound
        );
        assert!(last_error().unwrap().contains("X"));

        of_table_free(table);
        of_registry_free(reg);
    }
}

#[test]
fn errors_are_reported_by_code_and_message() {
    unsafe {
        let mut reg = ptr::null_mut();
        assert_eq!(of_registry_load(c("/nonexistent/registry.toml").as_ptr(), &mut reg), OfStatus::Config);
        assert!(reg.is_null());
        assert!(last_error().unwrap().contains("/nonexistent/registry.toml"));
        assert_eq!(of_registry_load(ptr::null(), &mut reg), OfStatus::NullPointer);
        assert_eq!(of_registry_load(registry_path().as_ptr(), ptr::null_mut()), OfStatus::NullPointer);
        let bad = [0xffu8, 0];
        assert_eq!(of_registry_load(bad.as_ptr().cast(), &mut reg), OfStatus::InvalidUtf8);
        let mut count = 0;
        assert_eq!(of_registry_module_count(ptr::null(), &mut count), OfStatus::NullPointer);
        of_registry_free(ptr::null_mut());
        of_table_free(ptr::null_mut());
        of_string_free(ptr::null_mut());
    }
}

#[test]
fn psi_and_singularity_from_strings() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(
            of_psi(c("0").as_ptr(), c("0").as_ptr(), c("2").as_ptr(), c("-12*s3").as_ptr(), &mut out),
            OfStatus::Ok
        );
        assert_eq!(take(out), "104*s3");
        assert_eq!(of_psi(c("x").as_ptr(), c("0").as_ptr(), c("0").as_ptr(), c("0").as_ptr(), &mut out), OfStatus::Parse);

        let mut singular = false;
        let v = c("J(-1)^2 - 30*L(-2) + 75*L(-1)^2");
        assert_eq!(of_is_singular(v.as_ptr(), c("1/10").as_ptr(), c("0").as_ptr(), &mut singular), OfStatus::Ok);
        assert!(singular);
        assert_eq!(of_is_singular(v.as_ptr(), c("1/2").as_ptr(), c("0").as_ptr(), &mut singular), OfStatus::Ok);
        assert!(!singular);
        assert_eq!(of_is_singular(c("L(-1").as_ptr(), c("0").as_ptr(), c("0").as_ptr(), &mut singular), OfStatus::Parse);
    }
}

#[test]
fn header_declares_the_api_and_compiles_as_c() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/orbifold_fusion.h")).unwrap();
    for f in ["of_registry_load", "of_table_build", "of_table_multiplicity", "of_psi", "of_is_singular", "of_last_error_message"] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from the header");
    }
    let Some(cc) = ["cc", "gcc", "clang"]
        .into_iter()
        .find(|cc| std::process::Command::new(cc).arg("--version").output().is_ok())
    else {
        eprintln!("no C compiler found; skipping the compile check");
        return;
    };
    let src = std::env::temp_dir().join(format!("orbifold-fusion-header-{}.c", std::process::id()));
    std::fs::write(
        &src,
        "#include \"orbifold_fusion.h\"\nint main(void) { OfRegistry *r = 0; return of_registry_load(\"x\", &r) == OF_STATUS_OK; }\n",
    )
    .unwrap();
    let status = std::process::Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(dir.join("include"))
        .arg(&src)
        .status()
        .unwrap();
    std::fs::remove_file(&src).ok();
    assert!(status.success(), "the header does not compile with {cc}");
}
