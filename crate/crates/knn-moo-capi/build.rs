use std::path::Path;

fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");

    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").unwrap();
    let header = Path::new(&crate_dir).join("include/knn_moo.h");

    match cbindgen::generate(&crate_dir) {
        Ok(bindings) => {
            bindings.write_to_file(&header);
        }
        // Keep a previously generated header usable when cbindgen can't run
        // (e.g. an offline toolchain bump); only a missing header is fatal.
        Err(e) if header.exists() => {
            println!("cargo:warning=cbindgen failed ({e}); keeping existing include/knn_moo.h");
        }
        Err(e) => panic!("cbindgen failed and no header exists: {e}"),
    }
}
