use std::path::PathBuf;

fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").expect("set by cargo");
    let header = PathBuf::from(&crate_dir).join("include").join("gnsrep.h");

    let mut config = cbindgen::Config::default();
    config.language = cbindgen::Language::C;
    config.include_guard = Some("GNSREP_H".to_owned());
    config.cpp_compat = true;
    config.documentation = true;
    config.enumeration.prefix_with_name = true;

    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("failed to generate C header")
        .write_to_file(header);

    println!("cargo:rerun-if-changed=src/lib.rs");
}
