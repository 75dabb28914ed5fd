use std::path::Path;
use std::process::Command;

const HEADER: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/include/shilov.h");

#[test]
fn header_declares_the_interface() {
    let h = std::fs::read_to_string(HEADER).unwrap();
    for name in [
        "typedef struct ShMetric ShMetric;",
        "typedef struct ShPoly ShPoly;",
        "SH_STATUS_OK = 0",
        "sh_last_error(void)",
        "sh_string_free(",
        "sh_metric_parse(",
        "sh_poly_parse(",
        "sh_spec_val(",
        "sh_shilov_set(",
        "sh_eq_measure_json(",
        "sh_limit_csv(",
        "sh_solve_json(",
    ] {
        assert!(h.contains(name), "missing {name}");
    }
}

/// Compiles a translation unit against the header when a C compiler exists.
#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else { return };
    let dir = tempdir();
    let src = dir.join("use.c");
    std::fs::write(
        &src,
        "#include \"shilov.h\"\nint main(void) { ShMetric *m = 0; return sh_metric_dim(m) == 0 ? 0 : 1; }\n",
    )
    .unwrap();
    let include = Path::new(HEADER).parent().unwrap();
    let status = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(include)
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success());
}

fn which_cc() -> Result<&'static str, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc)
            .arg("--version")
            .output()
            .is_ok_and(|o| o.status.success())
        {
            return Ok(cc);
        }
    }
    Err(())
}

fn tempdir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("shilov-header-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
