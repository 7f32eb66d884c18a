//! U_Q(sl(n)) from Q-bosons: every relation and Serre relation checked on
//! the interior of the truncated Fock space.

use num_complex::Complex64;
use qsaw::qarith::QParam;
use qsaw::realizations::{setup_suite, SuiteParams};
use qsaw::verifier::{run_suite, EvalOptions};

pub fn main() -> qsaw::Result<()> {
    let opts = EvalOptions::default();
    for value in [Complex64::new(1.3, 0.0), Complex64::new(0.8, 0.2)] {
        let q = QParam::generic(value)?;
        for (n, trunc) in [(2, 4), (3, 4)] {
            for suite in ["uq-sln", "uq-sln-serre"] {
                let setup = setup_suite(suite, SuiteParams { n, q: Some(q), trunc })?;
                let report = run_suite(suite, &setup.relations, &setup.binding, Some(&q), &opts);
                println!(
                    "Q={value} n={n} D={trunc} dim={:3} {suite:13} {} relations, max residual {:.2e}, {}",
                    setup.binding.space().total_dim(),
                    report.entries.len(),
                    report.max_residual,
                    if report.pass { "pass" } else { "FAIL" }
                );
            }
        }
    }

    let setup = setup_suite("uq-sln-serre", SuiteParams { n: 3, q: Some(QParam::real(1.3)?), trunc: 3 })?;
    println!("\nSerre relations for n = 3:");
    for rel in &setup.relations {
        println!("  {rel}");
    }
    Ok(())
}
