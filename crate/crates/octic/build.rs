use std::fmt::Write;
use std::path::Path;

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    println!("cargo:rerun-if-changed={}", dir.display());
    let index = std::fs::read_to_string(dir.join("index.txt")).expect("corpus/index.txt");
    let mut out = String::from("pub(crate) static ENTRIES: &[(&str, &str, &str)] = &[\n");
    for label in index.split_whitespace() {
        let arr = dir.join(format!("{label}.arr"));
        let toml = dir.join(format!("{label}.toml"));
        println!("cargo:rerun-if-changed={}", arr.display());
        println!("cargo:rerun-if-changed={}", toml.display());
        writeln!(
            out,
            "    ({label:?}, include_str!({:?}), include_str!({:?})),",
            arr.display().to_string(),
            toml.display().to_string()
        )
        .unwrap();
    }
    out.push_str("];\n");
    for (name, file) in [
        ("SELFMAPS", "selfmaps.txt"),
        ("RELATIONS", "relations.toml"),
        ("COVERMAPS", "covermaps.txt"),
    ] {
        let p = dir.join(file);
        println!("cargo:rerun-if-changed={}", p.display());
        writeln!(
            out,
            "pub(crate) static {name}: &str = include_str!({:?});",
            p.display().to_string()
        )
        .unwrap();
    }
    let dest = Path::new(&std::env::var("OUT_DIR").unwrap()).join("corpus_files.rs");
    std::fs::write(dest, out).unwrap();
}
