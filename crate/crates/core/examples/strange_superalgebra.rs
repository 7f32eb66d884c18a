//! The classical and Q-deformed extended strange superalgebra built from
//! bosons and fermions, including the odd generator X_n.

use qsaw::qarith::QParam;
use qsaw::realizations::{setup_suite, SuiteParams};
use qsaw::verifier::{run_suite, EvalOptions};

pub fn main() -> qsaw::Result<()> {
    let opts = EvalOptions::default();
    for n in [2, 3] {
        let setup = setup_suite("ptilde", SuiteParams { n, q: None, trunc: 4 })?;
        let report = run_suite("ptilde", &setup.relations, &setup.binding, None, &opts);
        println!("classical n={n}: {} relations, pass = {}", report.entries.len(), report.pass);
    }

    let q = QParam::real(1.2)?;
    for suite in ["ptilde-q", "ptilde-q-serre"] {
        let setup = setup_suite(suite, SuiteParams { n: 2, q: Some(q), trunc: 4 })?;
        let report = run_suite(suite, &setup.relations, &setup.binding, Some(&q), &opts);
        println!("\n{suite} at Q = 1.2, D = 4:");
        for e in &report.entries {
            println!("  {:14} margin {} residual {:.3e} {}", e.relation, e.margin, e.residual, if e.pass { "ok" } else { "FAIL" });
        }
    }
    Ok(())
}
