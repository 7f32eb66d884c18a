//! Truncated Q-boson, Q-fermion and k-fermion modes and their defining
//! relations.

use qsaw::composite::{anticommutator, commutator};
use qsaw::fock::{diag_power, kfermion_mode, qboson_mode, qfermion_mode, Operator};
use qsaw::qarith::{primitive_root, QParam};

fn interior_norm(op: &Operator, keep: usize) -> f64 {
    let mask: Vec<bool> = (0..op.dim()).map(|j| j < keep).collect();
    op.restrict_columns(&mask).norm_fro()
}

pub fn main() -> qsaw::Result<()> {
    let q = QParam::real(1.3)?;
    let dim = 6;
    let a = qboson_mode(dim, &q)?;
    let lhs = &(&a.lower * &a.raise) - &(&(&a.raise * &a.lower) * q.value());
    let rhs = diag_power(q, -1.0, &a.number)?;
    println!(
        "Q-boson D={dim}: |A-A+ - Q A+A- - Q^-N| on n < D-1 = {:.2e}",
        interior_norm(&(&lhs - &rhs), dim - 1)
    );

    let f = qfermion_mode(&q)?;
    let lhs = &(&f.lower * &f.raise) + &(&(&f.raise * &f.lower) * q.value());
    let rhs = diag_power(q, 1.0, &f.number)?;
    println!("Q-fermion: |F-F+ + Q F+F- - Q^M| = {:.2e}", (&lhs - &rhs).norm_fro());
    println!("Q-fermion: {{F+,F+}} = 0: {}", anticommutator(&f.raise, &f.raise)?.is_zero());

    for r in [3, 4, 5] {
        let root = primitive_root(r)?;
        let k = root.root().map(|(_, k)| k).unwrap_or(0) as usize;
        let chi = kfermion_mode(k, &root)?;
        let lhs = &(&chi.lower * &chi.raise) - &(&(&chi.raise * &chi.lower) * root.value().inv());
        let rhs = diag_power(root, 1.0, &chi.number)?;
        let ladder = commutator(&chi.number, &chi.raise)?;
        println!(
            "k-fermion r={r} (k={k}): (chi+)^k = 0: {}, q-relation residual {:.1e}, [N, chi+] - chi+ = {:.1e}",
            chi.raise.pow(k as u32).is_zero(),
            (&lhs - &rhs).norm_fro(),
            (&ladder - &chi.raise).norm_fro()
        );
    }
    Ok(())
}
