#![allow(dead_code)]

use std::fs;
use std::path::PathBuf;

use qsaw::qarith::{primitive_root, QParam};
use qsaw::realizations::{setup_suite, SuiteParams, SuiteSetup};

/// A relation file from the repository's `suites/` directory.
pub struct ShippedSuite {
    pub file: String,
    pub suite: String,
    pub n: usize,
    pub k: Option<u32>,
    pub text: String,
}

pub fn suites_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../suites")
}

/// Parses `{suite}_n{n}.rel` and `{suite}_n{n}_k{k}.rel`.
pub fn shipped_suites() -> Vec<ShippedSuite> {
    let mut out: Vec<ShippedSuite> = fs::read_dir(suites_dir())
        .expect("suites directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "rel"))
        .map(|p| {
            let file = p.file_name().unwrap().to_string_lossy().into_owned();
            let stem = file.trim_end_matches(".rel");
            let mut parts = stem.split('_');
            let suite = parts.next().unwrap().to_string();
            let n = parts.next().and_then(|s| s.strip_prefix('n')).unwrap().parse().unwrap();
            let k = parts.next().and_then(|s| s.strip_prefix('k')).map(|s| s.parse().unwrap());
            ShippedSuite {
                text: fs::read_to_string(&p).unwrap(),
                file,
                suite,
                n,
                k,
            }
        })
        .collect();
    out.sort_by(|a, b| a.file.cmp(&b.file));
    out
}

/// Root of unity with nilpotency order `k` (r = 2k).
pub fn root_for(k: u32) -> QParam {
    primitive_root(2 * i64::from(k)).unwrap()
}

/// The realization a shipped suite is checked on: Q = 1.3, D = 4, or the
/// root of unity for the k-fermion suite.
pub fn setup_for(s: &ShippedSuite) -> SuiteSetup {
    let q = match (s.suite.as_str(), s.k) {
        (_, Some(k)) => Some(root_for(k)),
        ("u-sln" | "pn" | "ptilde", None) => None,
        _ => Some(QParam::real(1.3).unwrap()),
    };
    setup_suite(&s.suite, SuiteParams { n: s.n, q, trunc: 4 }).unwrap()
}
