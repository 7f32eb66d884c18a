//! Q-numbers, factorials and binomials at generic Q and at roots of unity.

use num_complex::Complex64;
use qsaw::qarith::{format_complex, nilpotency_order, primitive_root, qbinomial, qfactorial, qnumber, QParam};

pub fn main() -> qsaw::Result<()> {
    let q = QParam::generic(Complex64::new(0.8, 0.2))?;
    println!("Q = {}", format_complex(q.value()));
    for t in 0..=5 {
        println!("  [{t}]_Q = {}", format_complex(qnumber(t, &q)?));
    }
    println!("  [4]_Q! = {}", format_complex(qfactorial(4, &q)?));
    for t in 0..=4 {
        println!("  [4 choose {t}]_Q = {}", format_complex(qbinomial(4, t, &q)?));
    }

    for r in [3, 4, 6, 8] {
        let root = primitive_root(r)?;
        let k = nilpotency_order(r)?;
        let values: Vec<String> = (0..=2 * k as i64)
            .map(|t| format!("{:+.4}", qnumber(t, &root).map(|z| z.re).unwrap_or(f64::NAN)))
            .collect();
        println!("r = {r}, k = {k}: [t]_q for t = 0..{} -> {}", 2 * k, values.join(" "));
    }
    Ok(())
}
