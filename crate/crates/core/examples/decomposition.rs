//! In the limit Q → q the deformed algebras factor into a classical algebra
//! and U_q(sl(n)) acting on the k-fermion sector.

use qsaw::limits::{verify_ptilde_decomposition, verify_sln_decomposition, LimitConfig};

pub fn main() -> qsaw::Result<()> {
    let cfg = LimitConfig::default();
    let sln = verify_sln_decomposition(2, 4, 8, &cfg)?;
    let ptilde = verify_ptilde_decomposition(2, 4, 8, &cfg)?;
    for report in [&sln, &ptilde] {
        println!("{}: pass = {}, max residual {:.2e}", report.suite, report.pass, report.max_residual);
        for section in ["classical/", "quantum/", "commutant/"] {
            let part: Vec<_> = report.entries.iter().filter(|e| e.relation.starts_with(section)).collect();
            let worst = part.iter().map(|e| e.residual).fold(0.0, f64::max);
            println!("  {section:11} {:3} checks, worst {worst:.2e}", part.len());
        }
    }
    let r3 = verify_sln_decomposition(2, 3, 9, &cfg)?;
    if let Some(e) = r3.entry("quantum/NE_1") {
        println!("r=3: (E_1)^3 residual {:.2e}", e.residual);
    }
    Ok(())
}
