use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use transverse_ffi::*;

fn parse(lit: &str) -> *mut TvCubeMap {
    let c = CString::new(lit).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { tv_map_parse(c.as_ptr(), &mut out) }, TvStatus::Ok);
    out
}

fn literal(map: *const TvCubeMap) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { tv_map_to_literal(map, &mut s) }, TvStatus::Ok);
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { tv_string_free(s) };
    text
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(tv_last_error()) }
        .to_str()
        .unwrap()
        .to_string()
}

#[test]
fn parse_compose_factorize() {
    let f = parse("2>3:0,2,2,6");
    assert_eq!(unsafe { (tv_map_dom(f), tv_map_cod(f)) }, (2, 3));
    let (mut psi, mut phi, mut back) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
    assert_eq!(
        unsafe { tv_map_factorize(f, &mut psi, &mut phi) },
        TvStatus::Ok
    );
    assert_eq!(literal(psi), "2>2:0,1,1,3");
    assert_eq!(literal(phi), "2>3:0,2,4,6");
    assert_eq!(unsafe { tv_map_compose(phi, psi, &mut back) }, TvStatus::Ok);
    assert_eq!(literal(back), "2>3:0,2,2,6");
    assert_eq!(
        unsafe { tv_map_compose(psi, phi, &mut back) },
        TvStatus::Dimension
    );
    unsafe {
        tv_map_free(f);
        tv_map_free(psi);
        tv_map_free(phi);
        tv_map_free(back);
    }
}

#[test]
fn evaluation_and_distance() {
    let g = parse("2>2:0,1,1,3");
    let (num, den) = ([1i64, 2], [3i64, 3]);
    let (mut on, mut od) = ([0i64; 2], [0i64; 2]);
    let status = unsafe {
        tv_map_eval(
            g,
            num.as_ptr(),
            den.as_ptr(),
            2,
            on.as_mut_ptr(),
            od.as_mut_ptr(),
            2,
        )
    };
    assert_eq!(status, TvStatus::Ok);
    assert_eq!((on, od), ([2, 1], [3, 3]));
    let status = unsafe {
        tv_map_eval(
            g,
            num.as_ptr(),
            den.as_ptr(),
            2,
            on.as_mut_ptr(),
            od.as_mut_ptr(),
            1,
        )
    };
    assert_eq!(status, TvStatus::BufferTooSmall);
    let bad_den = [3i64, 0];
    let status = unsafe {
        tv_map_eval(
            g,
            num.as_ptr(),
            bad_den.as_ptr(),
            2,
            on.as_mut_ptr(),
            od.as_mut_ptr(),
            2,
        )
    };
    assert_eq!(status, TvStatus::Parse);
    unsafe { tv_map_free(g) };

    let (x, y) = ([0i64, 1], [1i64, 3]);
    let ones = [1i64, 4];
    let (mut finite, mut n, mut d) = (false, 0i64, 0i64);
    let s = unsafe {
        tv_d1(
            x.as_ptr(),
            ones.as_ptr(),
            y.as_ptr(),
            ones.as_ptr(),
            2,
            &mut finite,
            &mut n,
            &mut d,
        )
    };
    assert_eq!(s, TvStatus::Ok);
    assert!(finite);
    assert_eq!((n, d), (3, 2));
    let s = unsafe {
        tv_d1(
            y.as_ptr(),
            ones.as_ptr(),
            x.as_ptr(),
            ones.as_ptr(),
            2,
            &mut finite,
            &mut n,
            &mut d,
        )
    };
    assert_eq!(s, TvStatus::Ok);
    assert!(!finite);
}

#[test]
fn errors_are_reported() {
    let mut out = ptr::null_mut();
    let bad = CString::new("2>2:0,3,3,3").unwrap();
    assert_eq!(
        unsafe { tv_map_parse(bad.as_ptr(), &mut out) },
        TvStatus::NotCotransverse
    );
    assert!(out.is_null());
    assert!(last_error().contains("cotransverse"));
    let junk = CString::new("nonsense").unwrap();
    assert_eq!(
        unsafe { tv_map_parse(junk.as_ptr(), &mut out) },
        TvStatus::Parse
    );
    assert_eq!(
        unsafe { tv_map_parse(ptr::null(), &mut out) },
        TvStatus::NullPointer
    );
    assert_eq!(
        unsafe { tv_map_to_literal(ptr::null(), ptr::null_mut()) },
        TvStatus::NullPointer
    );
    let table = [0u32, 1, 1, 3];
    assert_eq!(
        unsafe { tv_map_from_table(2, 2, table.as_ptr(), 4, &mut out) },
        TvStatus::Ok
    );
    assert_eq!(last_error(), "");
    unsafe { tv_map_free(out) };
    unsafe { tv_map_free(ptr::null_mut()) };
}

#[test]
fn counts() {
    let mut c = 0u64;
    assert_eq!(unsafe { tv_count_homset(3, 3, &mut c) }, TvStatus::Ok);
    assert_eq!(c, 66);
    assert_eq!(unsafe { tv_count_homset(2, 3, &mut c) }, TvStatus::Ok);
    assert_eq!(c, 24);
}

/// Compiles the C smoke program against the generated header and the
/// static library, then runs it.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libtransverse_ffi.a");
    assert!(
        lib.exists(),
        "static library not built at {}",
        lib.display()
    );
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("transverse_smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("a C compiler is available");
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
