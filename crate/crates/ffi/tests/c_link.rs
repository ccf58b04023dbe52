use std::path::PathBuf;
use std::process::Command;

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(manifest_dir().join("include/pifinite.h")).unwrap();
    for name in [
        "pif_space_parse",
        "pif_space_free",
        "pif_space_to_string",
        "pif_space_height_cardinality",
        "pif_space_loop",
        "pif_space_is_amenable",
        "pif_delta",
        "pif_beta_value",
        "pif_string_free",
        "pif_last_error_message",
        "typedef struct PifSpace PifSpace",
        "PifStatus_ResourceError = 2",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

#[test]
fn c_program_links_against_static_library() {
    // tests run from target/<profile>/deps, next to the library artifacts
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent().unwrap();
    let lib = [deps, deps.parent().unwrap()]
        .iter()
        .map(|d| d.join("libpifinite_ffi.a"))
        .find(|p| p.exists())
        .expect("static library is built alongside the tests");

    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("pifinite_smoke");
    let status = Command::new("cc")
        .arg(manifest_dir().join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("cc runs");
    assert!(status.success(), "compile/link failed");
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "smoke program exited {:?}: {}", run.status, String::from_utf8_lossy(&run.stderr));
}
