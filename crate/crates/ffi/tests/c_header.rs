//! The generated header compiles as C and C++, and, when the static library
//! is present, a C program links against it and runs.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "ptrig.h"

int main(void) {
    PtrigExponent *h = NULL;
    if (ptrig_exponent_new(1.5, &h) != PTRIG_STATUS_OK) return 1;
    double s = 0.0, c = 0.0;
    ptrig_sin_p(h, 0.7, &s);
    ptrig_cos_p(h, 0.7, &c);
    ptrig_exponent_free(h);
    double pyth = pow(fabs(s), 1.5) + pow(fabs(c), 1.5);
    if (fabs(pyth - 1.0) > 1e-12) return 2;
    if (ptrig_exponent_new(0.5, &h) != PTRIG_STATUS_DOMAIN) return 3;
    if (ptrig_last_error() == NULL) return 4;
    PtrigRoot r;
    if (ptrig_solve_p1(&r) != PTRIG_STATUS_OK) return 5;
    printf("%.6f\n", r.root);
    return 0;
}
"#;

fn header_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

fn compiler(name: &str) -> Option<String> {
    Command::new(name)
        .arg("--version")
        .output()
        .ok()
        .filter(|o| o.status.success())
        .map(|_| name.to_string())
}

fn write_program(dir: &Path, ext: &str) -> PathBuf {
    let src = dir.join(format!("ptrig_check.{ext}"));
    std::fs::write(&src, PROGRAM).unwrap();
    src
}

#[test]
fn header_is_valid_c_and_cpp() {
    let dir = tempfile::tempdir().unwrap();
    for (cc, ext, std) in [("cc", "c", "-std=c99"), ("c++", "cpp", "-std=c++11")] {
        let Some(cc) = compiler(cc) else {
            eprintln!("skipping: no {cc}");
            continue;
        };
        let src = write_program(dir.path(), ext);
        let status = Command::new(&cc)
            .args([std, "-Wall", "-Werror", "-fsyntax-only", "-I"])
            .arg(header_dir())
            .arg(&src)
            .status()
            .unwrap();
        assert!(status.success(), "{cc} rejected the header");
    }
}

#[test]
fn c_program_links_and_runs() {
    let Some(cc) = compiler("cc") else {
        eprintln!("skipping: no cc");
        return;
    };
    // target/<profile>/deps/<test-binary>
    let exe = std::env::current_exe().unwrap();
    let lib = exe
        .parent()
        .and_then(Path::parent)
        .unwrap()
        .join("libptrig_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = write_program(dir.path(), "c");
    let bin = dir.path().join("ptrig_check");
    let status = Command::new(cc)
        .args(["-std=c99", "-I"])
        .arg(header_dir())
        .arg(&src)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "link failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let root: f64 = String::from_utf8_lossy(&out.stdout).trim().parse().unwrap();
    assert!((root - 2.42865).abs() < 5e-5);
}
