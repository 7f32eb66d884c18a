//! Writing relations in the text format and checking them against a
//! realization.

use qsaw::qarith::QParam;
use qsaw::realizations::uq_sln;
use qsaw::verifier::{parse_relations, print_relations, run_suite, EvalOptions};

const TEXT: &str = "
# sl(2) at generic Q, written by hand
ef: comm(E1,F1) = qnum(H1)
ke: K1*E1*Kinv1 = Qpow(2)*E1
kf: K1*F1*Kinv1 = Qpow(-2)*F1
weight: comm(H1, E1) = 2*E1
wrong: comm(E1,F1) = 2*qnum(H1)
";

pub fn main() -> qsaw::Result<()> {
    let relations = parse_relations(TEXT)?;
    print!("{}", print_relations(&relations));
    let q = QParam::real(1.3)?;
    let binding = uq_sln(2, &q, 5)?;
    let report = run_suite("hand-written", &relations, &binding, Some(&q), &EvalOptions::default());
    println!("{}", report.to_json());

    match parse_relations("bad: comm(E1") {
        Err(e) => println!("parse error: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
