//! The `Q → q` limit of Q-deformed oscillators at a root of unity: splitting
//! a Q-boson into a classical boson and a k-fermion, dressing Q-fermions,
//! and checking the resulting algebra decompositions.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::composite::{commutant_residual, embed, species_space, GeneratorBinding, SpaceSpec};
use crate::error::{Error, Result};
use crate::fock::{diag_power, qboson_mode, qfermion_mode, CMatrix, ModeOperators, Operator, Species};
use crate::qarith::{nilpotency_order, primitive_root, qfactorial, QParam};
use crate::realizations::{ptilde_from_modes, relation_suite, relation_suite_with, sln_from_modes};
use crate::verifier::{run_suite, EvalOptions, LadderParams, Report, ReportEntry, ReportParams};

/// Offsets `eps_j = eps0 · decay^j` at which `Q_j = q·e^{eps_j}` is sampled.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonLadder {
    pub eps0: f64,
    pub steps: usize,
    pub decay: f64,
    /// Largest accepted difference between the two best extrapolants.
    pub max_spread: f64,
}

impl Default for EpsilonLadder {
    fn default() -> Self {
        EpsilonLadder {
            eps0: 1e-2,
            steps: 6,
            decay: 0.5,
            max_spread: 1e-4,
        }
    }
}

impl EpsilonLadder {
    pub fn new(eps0: f64, steps: usize) -> Result<Self> {
        EpsilonLadder {
            eps0,
            steps,
            ..Default::default()
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.eps0 > 0.0 && self.eps0.is_finite()) {
            return Err(Error::InvalidArgument(format!("eps0 must be positive, got {}", self.eps0)));
        }
        if self.steps < 2 {
            return Err(Error::InvalidArgument(format!("ladder needs at least 2 steps, got {}", self.steps)));
        }
        if !(self.decay > 0.0 && self.decay < 1.0) {
            return Err(Error::InvalidArgument(format!("decay must lie in (0,1), got {}", self.decay)));
        }
        Ok(self)
    }

    pub fn offsets(&self) -> Vec<f64> {
        (0..self.steps).map(|j| self.eps0 * self.decay.powi(j as i32)).collect()
    }

    pub fn params(&self) -> LadderParams {
        LadderParams {
            eps0: self.eps0,
            steps: self.steps,
            decay: self.decay,
        }
    }
}

/// Sign `c` in the `Q^{c·kN/2}` factor of the boson limit. The k-fermion
/// phase `q^{c·kN_a/2}` uses the same sign.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignBranch {
    Plus,
    #[default]
    Minus,
}

impl SignBranch {
    pub fn sign(self) -> f64 {
        match self {
            SignBranch::Plus => 1.0,
            SignBranch::Minus => -1.0,
        }
    }
}

impl std::str::FromStr for SignBranch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(SignBranch::Plus),
            "-" | "minus" => Ok(SignBranch::Minus),
            _ => Err(Error::InvalidArgument(format!("unknown sign branch {s:?} (expected plus or minus)"))),
        }
    }
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Richardson extrapolation to `eps → 0` of samples taken at
/// `eps_j = eps0·decay^j`, assuming an error series in powers of eps.
/// Returns the extrapolant and the difference between the two best
/// estimates at the previous level.
pub fn richardson(samples: &[CMatrix], decay: f64) -> (CMatrix, f64) {
    let mut table: Vec<CMatrix> = samples.to_vec();
    let mut spread = f64::INFINITY;
    let mut level = 1;
    while table.len() > 1 {
        if table.len() == 2 {
            spread = max_abs(&(&table[1] - &table[0]));
        }
        let f = decay.powi(-level);
        table = table
            .windows(2)
            .map(|w| (&w[1] * Complex64::new(f, 0.0) - &w[0]) / Complex64::new(f - 1.0, 0.0))
            .collect();
        level += 1;
    }
    (table.pop().expect("at least one sample"), spread)
}

/// One Q-boson mode split at `q` into its classical and k-fermionic parts.
#[derive(Clone, Debug)]
pub struct SplitBoson {
    pub classical: ModeOperators,
    pub kfermion: ModeOperators,
    /// Occupation of the classical boson on each basis state.
    pub classical_occupation: Vec<usize>,
    pub k: usize,
    pub extrapolation_error: f64,
}

/// `a⁻ = lim Q^{c·kN/2}(A⁻)^k / √[k]!`, `a⁺ = lim (A⁺)^k Q^{c·kN/2} / √[k]!`,
/// and `χ^± = A^±(q) q^{c·kN_a/2}` on one `trunc`-dimensional Q-boson mode.
pub fn split_boson(trunc: usize, r: u32, ladder: &EpsilonLadder, branch: SignBranch) -> Result<SplitBoson> {
    let ladder = ladder.validated()?;
    let k = nilpotency_order(i64::from(r))? as usize;
    if k < 2 {
        return Err(Error::Degenerate { r, k: k as u32 });
    }
    if !trunc.is_multiple_of(k) || trunc < 2 * k {
        return Err(Error::TruncationNotMultiple { dim: trunc, k });
    }
    let q = primitive_root(i64::from(r))?;
    let c = branch.sign();

    let samples: Vec<(CMatrix, CMatrix)> = ladder
        .offsets()
        .par_iter()
        .map(|&eps| -> Result<(CMatrix, CMatrix)> {
            let qj = QParam::generic(q.value() * eps.exp())?;
            let mode = qboson_mode(trunc, &qj)?;
            let norm = qfactorial(k as u32, &qj)?.sqrt();
            let phase = diag_power(qj, c * k as f64 / 2.0, &mode.number)?;
            let raise = &mode.raise.pow(k as u32) * &phase;
            let lower = &phase * &mode.lower.pow(k as u32);
            Ok((raise.matrix() / norm, lower.matrix() / norm))
        })
        .collect::<Result<_>>()?;
    let (raises, lowers): (Vec<CMatrix>, Vec<CMatrix>) = samples.into_iter().unzip();
    let (a_plus, spread_p) = richardson(&raises, ladder.decay);
    let (a_minus, spread_m) = richardson(&lowers, ladder.decay);
    let spread = spread_p.max(spread_m);
    if !(spread <= ladder.max_spread) {
        return Err(Error::ExtrapolationDiverged { spread });
    }

    let at_q = qboson_mode(trunc, &q)?;
    let space = Arc::clone(at_q.space());
    let product = &a_plus * &a_minus;
    let mut occupation = Vec::with_capacity(trunc);
    for j in 0..trunc {
        let x = product[(j, j)];
        let m = x.re.round();
        let deviation = (x - Complex64::new(m, 0.0)).norm();
        if deviation > 1e-6 || m < 0.0 {
            return Err(Error::NonIntegerSpectrum { deviation });
        }
        occupation.push(m as usize);
    }
    let na_diag: Vec<Complex64> = occupation.iter().map(|&m| Complex64::new(m as f64, 0.0)).collect();
    let n_a = Operator::from_diagonal(&space, &na_diag)?;
    let even = Some(crate::fock::Grading::Even);
    let classical = ModeOperators {
        species: at_q.species,
        raise: Operator::new(a_plus, Arc::clone(&space), even)?,
        lower: Operator::new(a_minus, Arc::clone(&space), even)?,
        number: n_a.clone(),
    };
    let phase = diag_power(q, c * k as f64 / 2.0, &n_a)?;
    let kfermion = ModeOperators {
        species: at_q.species,
        raise: &at_q.raise * &phase,
        lower: &at_q.lower * &phase,
        number: &at_q.number - &(&n_a * k as f64),
    };
    Ok(SplitBoson {
        classical,
        kfermion,
        classical_occupation: occupation,
        k,
        extrapolation_error: spread,
    })
}

/// `φ⁻ = q^{-M/2} Φ⁻`, `φ⁺ = Φ⁺ q^{-M/2}`.
pub fn dress_fermion(fermion: &ModeOperators, q: &QParam) -> Result<ModeOperators> {
    let half = diag_power(*q, -0.5, &fermion.number)?;
    Ok(ModeOperators {
        species: fermion.species,
        raise: &fermion.raise * &half,
        lower: &half * &fermion.lower,
        number: fermion.number.clone(),
    })
}

/// Settings shared by the decomposition checks.
#[derive(Clone, Copy, Debug)]
pub struct LimitConfig {
    pub ladder: EpsilonLadder,
    pub branch: SignBranch,
    pub tol: f64,
}

impl Default for LimitConfig {
    fn default() -> Self {
        LimitConfig {
            ladder: EpsilonLadder::default(),
            branch: SignBranch::default(),
            tol: 1e-6,
        }
    }
}

/// Split parts of `n` boson modes placed on `space` (boson modes first).
struct SplitChain {
    classical: Vec<ModeOperators>,
    kfermion: Vec<ModeOperators>,
}

fn split_chain(n: usize, r: u32, trunc: usize, space: &Arc<SpaceSpec>, cfg: &LimitConfig) -> Result<SplitChain> {
    let split = split_boson(trunc, r, &cfg.ladder, cfg.branch)?;
    let mut classical = Vec::with_capacity(n);
    let mut kfermion = Vec::with_capacity(n);
    for i in 0..n {
        classical.push(embed(&split.classical, space, i)?);
        kfermion.push(embed(&split.kfermion, space, i)?);
    }
    Ok(SplitChain { classical, kfermion })
}

fn commutant_entries(a: &GeneratorBinding, b: &GeneratorBinding, tol: f64) -> Vec<ReportEntry> {
    let mut entries = Vec::new();
    for (x, xo) in a.generators() {
        for (y, yo) in b.generators() {
            let name = format!("[{x},{y}]");
            let entry = match commutant_residual(std::slice::from_ref(xo), std::slice::from_ref(yo)) {
                Ok(res) => ReportEntry {
                    relation: name,
                    residual: res,
                    margin: 0,
                    pass: res < tol,
                    error: None,
                },
                Err(e) => ReportEntry {
                    relation: name,
                    residual: f64::INFINITY,
                    margin: 0,
                    pass: false,
                    error: Some(e.to_string()),
                },
            };
            entries.push(entry);
        }
    }
    entries
}

fn decomposition_report(
    suite: &str,
    n: usize,
    r: u32,
    trunc: usize,
    cfg: &LimitConfig,
    classical: (&str, GeneratorBinding),
    quantum: GeneratorBinding,
    q: &QParam,
    k: u32,
) -> Result<Report> {
    let opts = EvalOptions::with_tol(cfg.tol);
    let (classical_suite, classical_binding) = classical;
    let rels = relation_suite(classical_suite, n, &classical_binding.cartan)?;
    let classical_report = run_suite(classical_suite, &rels, &classical_binding, None, &opts);
    let qrels = relation_suite_with("uq-sln-root", n, &quantum.cartan, Some(k))?;
    let quantum_report = run_suite("uq-sln-root", &qrels, &quantum, Some(q), &opts);
    let commutant = Report::new(
        "commutant",
        ReportParams::default(),
        commutant_entries(&classical_binding, &quantum, cfg.tol),
    );
    let params = ReportParams {
        n: Some(n),
        r: Some(r),
        trunc: Some(trunc),
        tol: cfg.tol,
        ladder: Some(cfg.ladder.params()),
        ..Default::default()
    };
    Ok(Report::combine(
        suite,
        params,
        vec![
            ("classical".into(), classical_report),
            ("quantum".into(), quantum_report),
            ("commutant".into(), commutant),
        ],
    ))
}

fn check_decomposition_args(n: usize, r: u32) -> Result<(QParam, u32)> {
    if n < 2 {
        return Err(Error::InvalidRank(n));
    }
    let k = nilpotency_order(i64::from(r))?;
    if k < 2 {
        return Err(Error::Degenerate { r, k });
    }
    Ok((primitive_root(i64::from(r))?, k))
}

/// Splits `n` Q-boson modes and checks the classical sl(n) relations on the
/// boson parts, U_q(sl(n)) with nilpotency on the k-fermion parts, and that
/// the two generator sets commute.
pub fn verify_sln_decomposition(n: usize, r: u32, trunc: usize, cfg: &LimitConfig) -> Result<Report> {
    let (q, k) = check_decomposition_args(n, r)?;
    let space = species_space(&vec![Species::QBoson { dim: trunc }; n])?;
    let chain = split_chain(n, r, trunc, &space, cfg)?;
    let classical = sln_from_modes("u-sln", &chain.classical, None)?;
    let quantum = sln_from_modes("uq-sln", &chain.kfermion, Some(q))?;
    decomposition_report("sln-decomposition", n, r, trunc, cfg, ("u-sln", classical), quantum, &q, k)
}

/// As [`verify_sln_decomposition`] with `n` dressed fermion modes added; the
/// classical side is the strange superalgebra built from bosons and
/// fermions.
pub fn verify_ptilde_decomposition(n: usize, r: u32, trunc: usize, cfg: &LimitConfig) -> Result<Report> {
    let (q, k) = check_decomposition_args(n, r)?;
    let mut species = vec![Species::QBoson { dim: trunc }; n];
    species.extend(vec![Species::QFermion; n]);
    let space = species_space(&species)?;
    let chain = split_chain(n, r, trunc, &space, cfg)?;
    let dressed = dress_fermion(&qfermion_mode(&q)?, &q)?;
    let phi: Vec<ModeOperators> = (0..n).map(|i| embed(&dressed, &space, n + i)).collect::<Result<_>>()?;
    let classical = ptilde_from_modes("ptilde", &chain.classical, &phi)?;
    let quantum = sln_from_modes("uq-sln", &chain.kfermion, Some(q))?;
    decomposition_report("ptilde-decomposition", n, r, trunc, cfg, ("ptilde", classical), quantum, &q, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composite::{anticommutator, commutator};

    fn interior(op: &Operator, trunc: usize, k: usize) -> Operator {
        let keep: Vec<bool> = (0..op.dim()).map(|j| j + k < trunc).collect();
        op.restrict_columns(&keep)
    }

    #[test]
    fn richardson_removes_polynomial_error() {
        let exact = CMatrix::from_element(1, 1, Complex64::new(2.0, 0.0));
        let samples: Vec<CMatrix> = (0..5)
            .map(|j| {
                let e = 0.1 * 0.5f64.powi(j);
                exact.map(|z| z + 3.0 * e - 7.0 * e * e + e.powi(3))
            })
            .collect();
        let (x, spread) = richardson(&samples, 0.5);
        assert!((x[(0, 0)] - exact[(0, 0)]).norm() < 1e-13);
        assert!(spread < 1e-6);
    }

    #[test]
    fn split_r4() {
        let s = split_boson(8, 4, &EpsilonLadder::default(), SignBranch::Minus).unwrap();
        let comm = commutator(&s.classical.lower, &s.classical.raise).unwrap();
        let id = Operator::identity(comm.space());
        assert!(interior(&(&comm - &id), 8, 2).norm_fro() < 1e-6);
        assert!(s.kfermion.lower.pow(2).norm_fro() < 1e-8);
        assert_eq!(s.classical_occupation, vec![0, 0, 1, 1, 2, 2, 3, 3]);
    }

    #[test]
    fn split_r3_spectrum() {
        let s = split_boson(9, 3, &EpsilonLadder::default(), SignBranch::Minus).unwrap();
        assert_eq!(s.classical_occupation, vec![0, 0, 0, 1, 1, 1, 2, 2, 2]);
        assert_eq!(s.k, 3);
    }

    #[test]
    fn split_invariants_both_branches() {
        for branch in [SignBranch::Minus, SignBranch::Plus] {
            for (r, mult) in [(3, 3), (4, 4), (5, 3), (6, 3), (8, 3)] {
                let k = nilpotency_order(r as i64).unwrap() as usize;
                let d = k * mult;
                let s = split_boson(d, r, &EpsilonLadder::default(), branch).unwrap();
                let (a, x) = (&s.classical, &s.kfermion);
                for p in [&a.raise, &a.lower] {
                    for c in [&x.raise, &x.lower] {
                        let res = interior(&commutator(p, c).unwrap(), d, k).norm_fro();
                        assert!(res < 1e-7, "r={r} {branch:?}: {res}");
                    }
                }
                let spec = x.number.real_spectrum().unwrap();
                assert!(spec.iter().all(|v| (v.round() - v).abs() < 1e-6 && *v >= 0.0 && *v < k as f64));
                let q = primitive_root(r as i64).unwrap();
                let at_q = qboson_mode(d, &q).unwrap();
                let undo = diag_power(q, -branch.sign() * k as f64 / 2.0, &a.number).unwrap();
                let rebuilt = &x.lower * &undo;
                assert!(interior(&(&rebuilt - &at_q.lower), d, k).norm_fro() < 1e-8);
            }
        }
    }

    #[test]
    fn halving_eps0_is_consistent() {
        let full = split_boson(8, 4, &EpsilonLadder::default(), SignBranch::Minus).unwrap();
        let half_ladder = EpsilonLadder {
            eps0: 5e-3,
            ..Default::default()
        };
        let half = split_boson(8, 4, &half_ladder, SignBranch::Minus).unwrap();
        let diff = max_abs(&(full.classical.raise.matrix() - half.classical.raise.matrix()));
        assert!(diff < 10.0 * full.extrapolation_error.max(1e-12), "{diff} vs {}", full.extrapolation_error);
    }

    #[test]
    fn split_errors() {
        let l = EpsilonLadder::default();
        assert!(matches!(split_boson(7, 4, &l, SignBranch::Minus), Err(Error::TruncationNotMultiple { .. })));
        assert!(matches!(split_boson(2, 4, &l, SignBranch::Minus), Err(Error::TruncationNotMultiple { .. })));
        assert!(matches!(split_boson(4, 2, &l, SignBranch::Minus), Err(Error::Degenerate { .. })));
        assert!(EpsilonLadder::new(1e-2, 1).is_err());
        assert!(EpsilonLadder::new(-1.0, 4).is_err());
        let coarse = EpsilonLadder {
            eps0: 0.5,
            steps: 2,
            max_spread: 1e-12,
            ..Default::default()
        };
        assert!(matches!(
            split_boson(8, 4, &coarse, SignBranch::Minus),
            Err(Error::ExtrapolationDiverged { .. })
        ));
    }

    #[test]
    fn dressing() {
        let qi = primitive_root(4).unwrap();
        let d = dress_fermion(&qfermion_mode(&qi).unwrap(), &qi).unwrap();
        let a = anticommutator(&d.lower, &d.raise).unwrap();
        assert!((&a - &Operator::identity(a.space())).norm_fro() < 1e-14);
        assert!(d.raise.pow(2).is_zero());
        let q3 = primitive_root(3).unwrap();
        let d3 = dress_fermion(&qfermion_mode(&q3).unwrap(), &q3).unwrap();
        assert_eq!(d3.number.diagonal(), vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
    }

    #[test]
    fn sln_decomposition() {
        let cfg = LimitConfig::default();
        let rep = verify_sln_decomposition(2, 4, 8, &cfg).unwrap();
        assert!(rep.pass, "{:?}", rep.failures().collect::<Vec<_>>());
        assert!(rep.entry("classical/ef_1_1").unwrap().residual < 1e-6);
        assert!(rep.entries.iter().filter(|e| e.relation.starts_with("commutant/")).all(|e| e.residual < 1e-7));
        let r3 = verify_sln_decomposition(2, 3, 9, &cfg).unwrap();
        assert!(r3.entry("quantum/NE_1").unwrap().residual < 1e-8);
        assert!(r3.pass, "{:?}", r3.failures().collect::<Vec<_>>());
    }

    #[test]
    fn ptilde_decomposition() {
        let cfg = LimitConfig::default();
        let rep = verify_ptilde_decomposition(2, 4, 8, &cfg).unwrap();
        assert!(rep.pass, "{:?}", rep.failures().collect::<Vec<_>>());
        assert!(rep.entry("classical/DXn").unwrap().pass);
        assert!(matches!(verify_ptilde_decomposition(2, 2, 8, &cfg), Err(Error::Degenerate { .. })));
    }
}
