use std::ffi::{CStr, CString};
use std::ptr;

use gmr_ffi::*;

const INV1: &str =
    r#"{"family":"Inv1","c1":1,"c2":0,"params":{"k":1,"alpha":0,"sigma":1,"lambda":0.5}}"#;

fn last_error() -> String {
    let p = gmr_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn family_handle_round_trip() {
    let json = CString::new(INV1).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { gmr_family_from_json(json.as_ptr(), &mut h) }, GMR_OK);
    assert!(!h.is_null());

    let mut u = 0.0;
    assert_eq!(unsafe { gmr_family_eval(h, 1.0, 1.0, &mut u) }, GMR_OK);
    assert!((u - std::f64::consts::E).abs() < 1e-14);

    let mut d = GmrDerivs::default();
    assert_eq!(unsafe { gmr_family_eval_derivs(h, 0.7, 1.3, &mut d) }, GMR_OK);
    let mut r = 1.0;
    assert_eq!(unsafe { gmr_pde_operator(1.0, 0.0, 1.0, 0.5, &d, 1.3, &mut r) }, GMR_OK);
    assert!(r.abs() < 1e-12 * (1.0 + d.u.abs()));

    assert_eq!(unsafe { gmr_family_eval(h, 1.0, -1.0, &mut u) }, GMR_ERR_DOMAIN);
    assert!(last_error().contains("x>0"));
    unsafe { gmr_family_free(h) };
}

#[test]
fn bad_json_and_null_pointers() {
    let json = CString::new("{\"family\":\"Nope\"}").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { gmr_family_from_json(json.as_ptr(), &mut h) }, GMR_ERR_INVALID);
    assert!(h.is_null());
    assert_eq!(unsafe { gmr_family_from_json(ptr::null(), &mut h) }, GMR_ERR_NULL);
    let mut u = 0.0;
    assert_eq!(unsafe { gmr_family_eval(ptr::null(), 1.0, 1.0, &mut u) }, GMR_ERR_NULL);
    unsafe { gmr_family_free(ptr::null_mut()) };
    unsafe { gmr_string_free(ptr::null_mut()) };
}

#[test]
fn airy_and_point_maps() {
    let mut a = GmrAiry::default();
    assert_eq!(unsafe { gmr_airy(1.0, &mut a) }, GMR_OK);
    assert!((a.ai - 0.135_292_416_312_881_42).abs() < 1e-12);

    let p = GmrPoint { t: 1.0, x: 2.0, u: 3.0 };
    let mut q = GmrPoint::default();
    assert_eq!(unsafe { gmr_apply_point(1.0, 1.0, 1, 0.5, &p, &mut q) }, GMR_OK);
    assert_eq!(q, GmrPoint { t: 1.5, x: 2.0, u: 3.0 });
    assert_eq!(unsafe { gmr_apply_point(1.0, 1.0, 3, 1.0, &p, &mut q) }, GMR_ERR_DOMAIN);
    assert!(last_error().contains("finite-time singularity"));
    assert_eq!(unsafe { gmr_apply_point(1.0, 1.0, 9, 1.0, &p, &mut q) }, GMR_ERR_INVALID);
}

#[test]
fn classify_returns_owned_json() {
    let c = [0.0, 1.0, 0.0, 0.0, 0.0, 5.0];
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { gmr_classify_json(c.as_ptr(), 1.0, &mut s) }, GMR_OK);
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { gmr_string_free(s) };
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["rep_class"], "V2_aV6");
    assert_eq!(v["a"], 5.0);

    let zero = [0.0; 6];
    assert_eq!(unsafe { gmr_classify_json(zero.as_ptr(), 1.0, &mut s) }, GMR_ERR_DOMAIN);
    assert!(s.is_null());
}

#[test]
fn header_declares_every_export() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/gmr.h")).unwrap();
    for name in [
        "gmr_last_error",
        "gmr_family_from_json",
        "gmr_family_free",
        "gmr_family_eval",
        "gmr_family_eval_derivs",
        "gmr_pde_operator",
        "gmr_airy",
        "gmr_apply_point",
        "gmr_classify_json",
        "gmr_string_free",
        "typedef struct GmrFamily GmrFamily",
        "#define GMR_ERR_DOMAIN 2",
    ] {
        assert!(h.contains(name), "missing {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Some(cc) = ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| std::process::Command::new(c).arg("--version").output().is_ok())
    else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let dir = tempfile_dir();
    let src = dir.join("use_header.c");
    std::fs::write(
        &src,
        "#include \"gmr.h\"\nint main(void) { GmrAiry a; return gmr_airy(0.0, &a) == GMR_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let out = std::process::Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&src)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

fn tempfile_dir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("gmr-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
