//! Writes the built-in relation suites as text files, one per suite and
//! rank. Usage: `cargo run --example export_suites [DIR]`.

use std::fs;
use std::path::PathBuf;

use qsaw::realizations::{suite_cartan, suite_text};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "suites".into()));
    fs::create_dir_all(&dir)?;
    let mut files = Vec::new();
    for suite in ["uq-sln", "uq-sln-serre", "u-sln", "pn", "ptilde", "ptilde-q", "ptilde-q-serre"] {
        for n in [2, 3] {
            files.push((format!("{suite}_n{n}.rel"), suite_text(suite, n, &suite_cartan(suite, n)?, None)?));
        }
    }
    for suite in ["qboson", "qfermion"] {
        files.push((format!("{suite}_n2.rel"), suite_text(suite, 2, &suite_cartan(suite, 2)?, None)?));
    }
    files.push(("kfermion_n2_k2.rel".into(), suite_text("kfermion", 2, &suite_cartan("kfermion", 2)?, Some(2))?));
    for (name, text) in files.into_iter().filter(|(_, t)| !t.is_empty()) {
        let path = dir.join(&name);
        fs::write(&path, text)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
