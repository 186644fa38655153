//! `cargo test -p dgla-cli --test regenerate -- --ignored` rewrites the corpus.

use std::path::Path;

#[test]
#[ignore]
fn regenerate_corpus() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    std::fs::create_dir_all(&dir).unwrap();
    for (name, file) in dgla_cli::corpus::bundled() {
        let canonical = file.canonical().unwrap_or_else(|e| panic!("{name}: {e}"));
        std::fs::write(dir.join(format!("{name}.json")), canonical.to_json()).unwrap();
    }
}
