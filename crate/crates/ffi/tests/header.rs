//! The generated header compiles as C and as C++ and declares every export.

use std::path::Path;
use std::process::Command;

const EXPORTS: &[&str] = &[
    "relcat_last_error",
    "relcat_string_free",
    "relcat_rig_bundled",
    "relcat_rig_parse",
    "relcat_rig_free",
    "relcat_rig_collapse_verdict",
    "relcat_relation_parse",
    "relcat_relation_free",
    "relcat_relation_compose",
    "relcat_relation_dagger",
    "relcat_relation_tensor",
    "relcat_relation_kernel",
    "relcat_relation_neg",
    "relcat_relation_meet",
    "relcat_relation_join",
    "relcat_relation_trace",
    "relcat_relation_breve",
    "relcat_relation_write",
    "relcat_check",
];

fn header() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/relcat.h")
}

#[test]
fn header_declares_every_export() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in EXPORTS {
        assert!(text.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(text.contains("typedef struct RelcatRelation RelcatRelation;"));
    assert!(text.contains("RELCAT_STATUS_DOMAIN_MISMATCH = 3"));
}

#[test]
fn header_compiles() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"relcat.h\"\n\
         int main(void) {\n\
           RelcatRelation *r = NULL;\n\
           RelcatStatus s = relcat_relation_parse(\"set X a\\nrel r X X\\n1\\n\", NULL, &r);\n\
           relcat_relation_free(r);\n\
           return s == RELCAT_STATUS_OK ? 0 : 1;\n\
         }\n",
    )
    .unwrap();
    let include = header().parent().unwrap().to_path_buf();
    for (compiler, extra) in [("cc", &["-std=c99"][..]), ("c++", &["-x", "c++"][..])] {
        let status = Command::new(compiler)
            .args(extra)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-I"])
            .arg(&include)
            .arg(&src)
            .status();
        match status {
            Ok(s) => assert!(s.success(), "{compiler} rejected the header"),
            Err(_) => eprintln!("{compiler} not found; skipping"),
        }
    }
}
