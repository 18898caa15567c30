use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "ppm.h"

int main(void) {
    size_t p[] = {2, 1, 3};
    size_t t[] = {2, 5, 1, 4, 3};
    PpmPerm *pat = NULL, *txt = NULL;
    if (ppm_perm_new(p, 3, &pat) != PPM_STATUS_OK) return 10;
    if (ppm_perm_new(t, 5, &txt) != PPM_STATUS_OK) return 11;
    size_t occ[3];
    if (ppm_contains(pat, txt, PPM_ALGORITHM_SEPARATOR_DP, 0, occ) != PPM_STATUS_OK) return 12;
    printf("%zu %zu %zu\n", occ[0], occ[1], occ[2]);
    PpmPerm *bad = NULL;
    if (ppm_perm_parse("1 1", &bad) != PPM_STATUS_INVALID_INPUT) return 13;
    printf("%s\n", ppm_last_error());
    ppm_perm_free(pat);
    ppm_perm_free(txt);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_static_library() {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    assert!(include.join("ppm.h").is_file());
    let lib = target_dir().join("libppm_ffi.a");
    assert!(lib.is_file(), "{} missing", lib.display());

    let work = tempfile::tempdir().unwrap();
    let src = work.path().join("smoke.c");
    let exe = work.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&exe).output().unwrap();
    assert_eq!(run.status.code(), Some(0));
    let stdout = String::from_utf8(run.stdout).unwrap();
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("1 3 4"));
    assert!(lines.next().unwrap().contains("1"));
}
