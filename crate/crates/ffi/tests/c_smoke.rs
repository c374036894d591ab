//! Compiles a small C program against the generated header and the static
//! library, then runs it.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <math.h>
#include "telecloning.h"

int main(void) {
    TcChannel *ch = NULL;
    double f = 0.0;
    size_t man = 0;
    if (tc_channel_new_optimal(2, &ch) != TC_STATUS_OK) return 10;
    if (tc_channel_avg_fidelity(ch, 1.0, 1, &f) != TC_STATUS_OK) return 11;
    if (fabs(f - 5.0 / 6.0) > 1e-12) return 12;
    tc_channel_free(ch);
    if (tc_man(2, 0.675, 1.0, 1.0, &man) != TC_STATUS_OK || man != 3) return 13;
    if (tc_p_kernel(2.0, &f) != TC_STATUS_DOMAIN) return 14;
    if (tc_last_error_message() == NULL) return 15;
    printf("ok %s\n", tc_version());
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    // the test binary lives in target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap().to_path_buf();
    let lib = profile_dir.join("libtelecloning_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "smoke program exited with {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok 0.1.0"));
}
