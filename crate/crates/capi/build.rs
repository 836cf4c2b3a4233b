//! Regenerates `include/mdrkit.h` from the `extern "C"` surface.

fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").unwrap();
    println!("cargo:rerun-if-changed=src/lib.rs");
    let mut config = cbindgen::Config::default();
    config.language = cbindgen::Language::C;
    config.include_guard = Some("MDRKIT_H".to_string());
    config.cpp_compat = true;
    // C enum constants live in one flat namespace, so qualify them.
    config.enumeration.prefix_with_name = true;
    config.header =
        Some("/* C interface to mdrkit. See mdr_last_error() for error details. */".to_string());
    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("cbindgen should process the crate")
        .write_to_file(format!("{crate_dir}/include/mdrkit.h"));
}
