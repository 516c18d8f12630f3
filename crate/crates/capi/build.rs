use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    let header = crate_dir.join("include").join("groupforge.h");
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    match cbindgen::generate(&crate_dir) {
        Ok(bindings) => {
            bindings.write_to_file(&header);
        }
        // Header generation is best-effort: a stale header is preferable to
        // breaking `cargo build` when cbindgen cannot parse an intermediate
        // state of the source.
        Err(e) => println!("cargo:warning=cbindgen failed: {e}"),
    }
}
