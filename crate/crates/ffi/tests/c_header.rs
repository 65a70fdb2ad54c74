//! Compiles and runs a small C program against the generated header and the
//! static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include <string.h>
#include "bidisc.h"

int main(void) {
    const double p[4] = {0.5, 0.0, 0.1, 0.0};
    const double q[4] = {-0.5, 0.0, 0.05, 0.0};
    bidisc_config *config = bidisc_config_new();
    bidisc_certificate *cert = NULL;
    if (bidisc_solve(config, NULL, p, q, &cert) != BIDISC_STATUS_OK) return 1;
    if (fabs(bidisc_certificate_value(cert) - log(0.25)) > 1e-14) return 2;
    BidiscRegion region;
    bidisc_certificate_region(cert, &region);
    if (strcmp(bidisc_region_name(region), "U") != 0) return 3;
    char *json = bidisc_certificate_json(cert);
    if (json == NULL || strstr(json, "\"region\":\"U\"") == NULL) return 4;
    bidisc_string_free(json);
    bidisc_certificate_free(cert);
    if (bidisc_solve(config, NULL, p, p, &cert) != BIDISC_STATUS_DIAGONAL_POLES) return 5;
    bidisc_config_free(config);
    puts("ok");
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test binary>
    let profile_dir = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let lib = profile_dir.join("libbidisc_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let work = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let source = work.join("smoke.c");
    let exe = work.join("smoke");
    std::fs::write(&source, PROGRAM).unwrap();
    let compiled = Command::new("cc")
        .arg(&source)
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler named cc");
    assert!(compiled.success());
    let run = Command::new(&exe).output().unwrap();
    assert_eq!(run.status.code(), Some(0), "{run:?}");
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
