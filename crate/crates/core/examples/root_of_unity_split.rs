//! Splitting a Q-boson at q = exp(2πi/r) into a classical boson and a
//! k-fermion by extrapolating Q = q·e^ε → q.

use qsaw::composite::commutator;
use qsaw::fock::Operator;
use qsaw::limits::{split_boson, EpsilonLadder, SignBranch};
use qsaw::qarith::nilpotency_order;

pub fn main() -> qsaw::Result<()> {
    let ladder = EpsilonLadder::default();
    for r in [3u32, 4, 6] {
        let k = nilpotency_order(i64::from(r))? as usize;
        let trunc = 4 * k;
        let split = split_boson(trunc, r, &ladder, SignBranch::Minus)?;
        let a = &split.classical;
        let chi = &split.kfermion;
        let keep: Vec<bool> = (0..trunc).map(|j| j + k < trunc).collect();
        let ccr = &commutator(&a.lower, &a.raise)? - &Operator::identity(a.raise.space());
        let cross = commutator(&a.raise, &chi.lower)?;
        println!("r={r} k={k} D={trunc}");
        println!("  N_a spectrum      {:?}", split.classical_occupation);
        println!("  [a-, a+] - 1      {:.2e}", ccr.restrict_columns(&keep).norm_fro());
        println!("  [a+, chi-]        {:.2e}", cross.restrict_columns(&keep).norm_fro());
        println!("  (chi-)^k          {:.2e}", chi.lower.pow(k as u32).norm_fro());
        println!("  extrapolation err {:.2e}", split.extrapolation_error);
    }
    Ok(())
}
