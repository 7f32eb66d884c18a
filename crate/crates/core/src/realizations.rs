//! Oscillator realizations of the quantum and classical algebras, and the
//! relation suites they are checked against.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::composite::{embed, species_space, CartanData, GeneratorBinding, SpaceSpec};
use crate::error::{Error, Result};
use crate::fock::{
    classical_boson_mode, classical_fermion_mode, diag_power, kfermion_mode, qboson_mode, qfermion_mode, ModeOperators,
    Operator, Species,
};
use crate::qarith::QParam;
use crate::verifier::{parse_relations, Relation};

/// Suites accepted by [`relation_suite`].
pub const SUITES: &[&str] = &[
    "uq-sln",
    "u-sln",
    "pn",
    "ptilde",
    "ptilde-q",
    "uq-sln-serre",
    "ptilde-q-serre",
    "uq-sln-root",
    "kfermion",
    "qboson",
    "qfermion",
];

pub fn cartan_sln(n: usize) -> Result<CartanData> {
    if n < 2 {
        return Err(Error::InvalidRank(n));
    }
    let m = n - 1;
    let matrix = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| match i.abs_diff(j) {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect();
    Ok(CartanData {
        matrix,
        symmetrizers: vec![1; m],
    })
}

/// `(n-1) × n`: the sl(n) block plus a last column that is zero except
/// `a_{n-1,n} = -2`.
pub fn cartan_ptilde(n: usize) -> Result<CartanData> {
    let mut c = cartan_sln(n)?;
    let last = c.matrix.len() - 1;
    for (i, row) in c.matrix.iter_mut().enumerate() {
        row.push(if i == last { -2 } else { 0 });
    }
    Ok(c)
}

fn no_cartan() -> CartanData {
    CartanData {
        matrix: vec![],
        symmetrizers: vec![],
    }
}

fn check_rank_and_trunc(n: usize, trunc: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidRank(n));
    }
    if trunc < 3 {
        return Err(Error::DimensionTooSmall(trunc));
    }
    Ok(())
}

fn place(single: &[ModeOperators], space: &Arc<SpaceSpec>, offset: usize) -> Result<Vec<ModeOperators>> {
    single.iter().enumerate().map(|(i, m)| embed(m, space, offset + i)).collect()
}

/// `e_i = a_i⁻ a_{i+1}⁺`, `f_i = a_i⁺ a_{i+1}⁻`, `h_i = -N_i + N_{i+1}` from
/// any chain of modes on one space. With `q`, the generators are named
/// `E, F, H` and `K_i = q^{H_i}`, `Kinv_i = q^{-H_i}` are added; without it
/// they are named `e, f, h`.
pub fn sln_from_modes(name: &str, modes: &[ModeOperators], q: Option<QParam>) -> Result<GeneratorBinding> {
    let n = modes.len();
    let cartan = cartan_sln(n)?;
    let space = Arc::clone(modes[0].space());
    let mut b = GeneratorBinding::new(name, space, cartan, q);
    let (e, f, h) = if q.is_some() { ("E", "F", "H") } else { ("e", "f", "h") };
    for i in 0..n - 1 {
        let (m, next) = (&modes[i], &modes[i + 1]);
        let hi = &next.number - &m.number;
        if let Some(q) = q {
            b.insert(format!("K{}", i + 1), diag_power(q, 1.0, &hi)?)?;
            b.insert(format!("Kinv{}", i + 1), diag_power(q, -1.0, &hi)?)?;
        }
        b.insert(format!("{e}{}", i + 1), &m.lower * &next.raise)?;
        b.insert(format!("{f}{}", i + 1), &m.raise * &next.lower)?;
        b.insert(format!("{h}{}", i + 1), hi)?;
    }
    Ok(b)
}

/// Classical strange superalgebra generators from boson modes `a` and
/// fermion modes `phi` sharing one space.
pub fn ptilde_from_modes(name: &str, a: &[ModeOperators], phi: &[ModeOperators]) -> Result<GeneratorBinding> {
    let n = a.len();
    if phi.len() != n {
        return Err(Error::InvalidArgument(format!("{n} boson modes but {} fermion modes", phi.len())));
    }
    let cartan = cartan_ptilde(n)?;
    let space = Arc::clone(a[0].space());
    let mut b = GeneratorBinding::new(name, Arc::clone(&space), cartan, None);
    for i in 0..n - 1 {
        let x = &a[i].raise * &a[i + 1].lower + &phi[i].raise * &phi[i + 1].lower;
        let y = &a[i + 1].raise * &a[i].lower + &phi[i + 1].raise * &phi[i].lower;
        let t = &(&a[i].number - &a[i + 1].number) + &(&phi[i].number - &phi[i + 1].number);
        b.insert(format!("X{}", i + 1), x)?;
        b.insert(format!("Y{}", i + 1), y)?;
        b.insert(format!("T{}", i + 1), t)?;
    }
    b.insert(format!("X{n}"), &a[n - 1].raise * &phi[n - 1].raise)?;
    b.insert("D", half_total(a, phi, &space))?;
    Ok(b)
}

fn half_total(a: &[ModeOperators], phi: &[ModeOperators], space: &Arc<SpaceSpec>) -> Operator {
    let total = a
        .iter()
        .chain(phi)
        .fold(Operator::zeros(space, None), |acc, m| &acc + &m.number);
    &total * 0.5
}

pub fn uq_sln(n: usize, q: &QParam, trunc: usize) -> Result<GeneratorBinding> {
    check_rank_and_trunc(n, trunc)?;
    let space = species_space(&vec![Species::QBoson { dim: trunc }; n])?;
    let mode = qboson_mode(trunc, q)?;
    let modes = place(&vec![mode; n], &space, 0)?;
    sln_from_modes("uq-sln", &modes, Some(*q))
}

pub fn u_sln_classical(n: usize, trunc: usize) -> Result<GeneratorBinding> {
    check_rank_and_trunc(n, trunc)?;
    let space = species_space(&vec![Species::ClassicalBoson { dim: trunc }; n])?;
    let mode = classical_boson_mode(trunc)?;
    let modes = place(&vec![mode; n], &space, 0)?;
    sln_from_modes("u-sln", &modes, None)
}

/// `E_i = χ_i⁻ χ_{i+1}⁺` etc. on `n` k-fermion modes at a root of unity.
pub fn uq_sln_kfermionic(n: usize, q: &QParam) -> Result<GeneratorBinding> {
    if n < 2 {
        return Err(Error::InvalidRank(n));
    }
    let (r, k) = q
        .root()
        .ok_or_else(|| Error::DegenerateParameter("k-fermions need a root of unity".into()))?;
    if k < 2 {
        return Err(Error::Degenerate { r, k });
    }
    let k = k as usize;
    let space = species_space(&vec![Species::KFermion { k }; n])?;
    let mode = kfermion_mode(k, q)?;
    let modes = place(&vec![mode; n], &space, 0)?;
    sln_from_modes("uq-sln-kfermionic", &modes, Some(*q))
}

/// Q-boson and Q-fermion realization of the deformed strange superalgebra.
/// Space: `n` Q-boson modes followed by `n` Q-fermion modes.
pub fn ptilde_q(n: usize, q: &QParam, trunc: usize) -> Result<GeneratorBinding> {
    check_rank_and_trunc(n, trunc)?;
    let mut species = vec![Species::QBoson { dim: trunc }; n];
    species.extend(vec![Species::QFermion; n]);
    let space = species_space(&species)?;
    let a = place(&vec![qboson_mode(trunc, q)?; n], &space, 0)?;
    let phi = place(&vec![qfermion_mode(q)?; n], &space, n)?;
    let mut b = GeneratorBinding::new("ptilde-q", Arc::clone(&space), cartan_ptilde(n)?, Some(*q));
    for i in 0..n - 1 {
        let dn = &a[i].number - &a[i + 1].number;
        let dm = &phi[i].number - &phi[i + 1].number;
        let boson_factor = diag_power(*q, 0.5, &dm)?;
        let fermion_factor = diag_power(*q, -0.5, &dn)?;
        let x = &(&(&a[i].raise * &a[i + 1].lower) * &boson_factor)
            + &(&(&phi[i].raise * &phi[i + 1].lower) * &fermion_factor);
        let y = &(&(&a[i + 1].raise * &a[i].lower) * &boson_factor)
            + &(&(&phi[i + 1].raise * &phi[i].lower) * &fermion_factor);
        b.insert(format!("X{}", i + 1), x)?;
        b.insert(format!("Y{}", i + 1), y)?;
        b.insert(format!("T{}", i + 1), &dn + &dm)?;
    }
    let s = (0..n - 1).fold(Operator::zeros(&space, None), |acc, i| {
        &(&acc + &a[i].number) - &phi[i].number
    });
    let xn = &(&a[n - 1].raise * &phi[n - 1].raise) * &diag_power(*q, 0.5, &s)?;
    b.insert(format!("X{n}"), xn)?;
    b.insert("D", half_total(&a, &phi, &space))?;
    Ok(b)
}

pub fn ptilde_classical(n: usize, trunc: usize) -> Result<GeneratorBinding> {
    check_rank_and_trunc(n, trunc)?;
    let mut species = vec![Species::ClassicalBoson { dim: trunc }; n];
    species.extend(vec![Species::ClassicalFermion; n]);
    let space = species_space(&species)?;
    let a = place(&vec![classical_boson_mode(trunc)?; n], &space, 0)?;
    let phi = place(&vec![classical_fermion_mode(); n], &space, n)?;
    ptilde_from_modes("ptilde", &a, &phi)
}

/// Inserts `raise, lower, number, q^N, q^{-N}` of each mode as
/// `{p}i, {m}i, {num}i, {qn}i, {qn}invi`.
fn oscillator_binding(
    name: &str,
    modes: &[ModeOperators],
    q: &QParam,
    [p, m, num, qn]: [&str; 4],
) -> Result<GeneratorBinding> {
    let space = Arc::clone(modes[0].space());
    let mut b = GeneratorBinding::new(name, space, no_cartan(), Some(*q));
    for (i, mode) in modes.iter().enumerate() {
        let i = i + 1;
        b.insert(format!("{p}{i}"), mode.raise.clone())?;
        b.insert(format!("{m}{i}"), mode.lower.clone())?;
        b.insert(format!("{num}{i}"), mode.number.clone())?;
        b.insert(format!("{qn}{i}"), diag_power(*q, 1.0, &mode.number)?)?;
        b.insert(format!("{qn}inv{i}"), diag_power(*q, -1.0, &mode.number)?)?;
    }
    Ok(b)
}

fn check_modes(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidRank(n));
    }
    Ok(())
}

/// `n` Q-boson modes: `Ap, Am, N, QN, QNinv`.
pub fn qboson_oscillators(n: usize, q: &QParam, trunc: usize) -> Result<GeneratorBinding> {
    check_modes(n)?;
    let space = species_space(&vec![Species::QBoson { dim: trunc }; n])?;
    let modes = place(&vec![qboson_mode(trunc, q)?; n], &space, 0)?;
    oscillator_binding("qboson", &modes, q, ["Ap", "Am", "N", "QN"])
}

/// `n` Q-fermion modes: `Fp, Fm, M, QM, QMinv`.
pub fn qfermion_oscillators(n: usize, q: &QParam) -> Result<GeneratorBinding> {
    check_modes(n)?;
    let space = species_space(&vec![Species::QFermion; n])?;
    let modes = place(&vec![qfermion_mode(q)?; n], &space, 0)?;
    oscillator_binding("qfermion", &modes, q, ["Fp", "Fm", "M", "QM"])
}

/// `n` k-fermion modes at a root of unity: `Chp, Chm, Nch, qN, qNinv`.
pub fn kfermion_oscillators(n: usize, q: &QParam) -> Result<GeneratorBinding> {
    check_modes(n)?;
    let (r, k) = q
        .root()
        .ok_or_else(|| Error::DegenerateParameter("k-fermions need a root of unity".into()))?;
    if k < 2 {
        return Err(Error::Degenerate { r, k });
    }
    let k = k as usize;
    let space = species_space(&vec![Species::KFermion { k }; n])?;
    let modes = place(&vec![kfermion_mode(k, q)?; n], &space, 0)?;
    oscillator_binding("kfermion", &modes, q, ["Chp", "Chm", "Nch", "qN"])
}

fn scaled(c: i64, expr: &str) -> String {
    match c {
        0 => "0".into(),
        1 => expr.into(),
        -1 => format!("-{expr}"),
        c => format!("{c}*{expr}"),
    }
}

/// `Q^c · expr`, without a q-dependent node when `c = 0`.
fn qscaled(c: i64, expr: &str) -> String {
    if c == 0 {
        expr.into()
    } else {
        format!("Qpow({c})*{expr}")
    }
}

fn word(parts: &[(&str, u32)]) -> String {
    parts
        .iter()
        .filter(|(_, p)| *p > 0)
        .map(|(s, p)| if *p == 1 { s.to_string() } else { format!("{s}^{p}") })
        .collect::<Vec<_>>()
        .join("*")
}

fn binomial(n: u32, t: u32) -> i64 {
    (0..t).fold(1i64, |acc, j| acc * i64::from(n - j) / i64::from(j + 1))
}

/// `Σ_t (-1)^t c_t · word_t = 0` with quantum (`qbin`) or integer coefficients.
/// The coefficient is omitted when it is identically 1.
fn serre_line(name: &str, m: u32, quantum: bool, term: impl Fn(u32) -> String) -> String {
    let mut s = format!("{name}: ");
    for t in 0..=m {
        let coef = if t == 0 || t == m {
            String::new()
        } else if quantum {
            format!("qbin({m},{t})*")
        } else {
            let c = binomial(m, t);
            if c == 1 { String::new() } else { format!("{c}*") }
        };
        if t > 0 {
            s.push_str(if t % 2 == 1 { " - " } else { " + " });
        }
        let _ = write!(s, "{coef}{}", term(t));
    }
    s.push_str(" = 0");
    s
}

fn serre_exponent(a: i64) -> u32 {
    u32::try_from(1 - a).expect("Cartan off-diagonal entries are non-positive")
}

fn uq_sln_text(out: &mut String, n: usize, c: &CartanData) {
    let m = n - 1;
    for i in 1..=m {
        let d = c.d(i);
        for j in 1..=m {
            if i == j {
                let _ = writeln!(out, "EF_{i}_{j}: comm(E{i},F{i})*(Qpow({d}) - Qpow({})) = K{i} - Kinv{i}", -d);
            } else {
                let _ = writeln!(out, "EF_{i}_{j}: comm(E{i},F{j}) = 0");
            }
            let e = d * c.a(i, j);
            let _ = writeln!(out, "KE_{i}_{j}: K{i}*E{j}*Kinv{i} = {}", qscaled(e, &format!("E{j}")));
            let _ = writeln!(out, "KF_{i}_{j}: K{i}*F{j}*Kinv{i} = {}", qscaled(-e, &format!("F{j}")));
            if i <= j {
                let _ = writeln!(out, "KK_{i}_{j}: K{i}*K{j} = K{j}*K{i}");
            }
        }
        let _ = writeln!(out, "KpKm_{i}: Kinv{i}*K{i} = K{i}*Kinv{i}");
        let _ = writeln!(out, "KKinv_{i}: K{i}*Kinv{i} = 1");
        let _ = writeln!(out, "KinvK_{i}: Kinv{i}*K{i} = 1");
    }
}

fn uq_sln_serre_text(out: &mut String, n: usize, c: &CartanData) {
    let m = n - 1;
    for i in 1..=m {
        for j in (1..=m).filter(|&j| j != i) {
            let deg = serre_exponent(c.a(i, j));
            for g in ["E", "F"] {
                let (gi, gj) = (format!("{g}{i}"), format!("{g}{j}"));
                let line = serre_line(&format!("S{g}_{i}_{j}"), deg, true, |t| {
                    word(&[(gi.as_str(), t), (gj.as_str(), 1), (gi.as_str(), deg - t)])
                });
                out.push_str(&line);
                out.push('\n');
            }
        }
    }
}

fn nilpotency_text(out: &mut String, n: usize, k: u32) {
    for i in 1..n {
        let _ = writeln!(out, "NE_{i}: E{i}^{k} = 0");
        let _ = writeln!(out, "NF_{i}: F{i}^{k} = 0");
    }
}

fn u_sln_text(out: &mut String, n: usize, c: &CartanData) {
    let m = n - 1;
    for i in 1..=m {
        for j in 1..=m {
            let rhs = if i == j { format!("h{i}") } else { "0".into() };
            let _ = writeln!(out, "ef_{i}_{j}: comm(e{i},f{j}) = {rhs}");
            let _ = writeln!(out, "he_{i}_{j}: comm(h{i},e{j}) = {}", scaled(c.a(i, j), &format!("e{j}")));
            let _ = writeln!(out, "hf_{i}_{j}: comm(h{i},f{j}) = {}", scaled(-c.a(i, j), &format!("f{j}")));
            if i <= j {
                let _ = writeln!(out, "hh_{i}_{j}: comm(h{i},h{j}) = 0");
            }
            if i != j {
                let deg = serre_exponent(c.a(i, j));
                for g in ["e", "f"] {
                    let (gi, gj) = (format!("{g}{i}"), format!("{g}{j}"));
                    let line = serre_line(&format!("s{g}_{i}_{j}"), deg, false, |t| {
                        word(&[(gi.as_str(), deg - t), (gj.as_str(), 1), (gi.as_str(), t)])
                    });
                    out.push_str(&line);
                    out.push('\n');
                }
            }
        }
    }
}

/// Shared part of the classical and deformed strange superalgebra suites.
/// `quantum` switches `[X_i, Y_i]` from `T_i` to `[T_i]_Q`.
fn pn_text(out: &mut String, n: usize, c: &CartanData, quantum: bool) {
    let m = n - 1;
    for i in 1..=m {
        for j in 1..=m {
            let rhs = match (i == j, quantum) {
                (false, _) => "0".to_string(),
                (true, false) => format!("T{i}"),
                (true, true) => format!("qnum(T{i})"),
            };
            let _ = writeln!(out, "XY_{i}_{j}: comm(X{i},Y{j}) = {rhs}");
            let _ = writeln!(out, "XT_{i}_{j}: comm(X{i},T{j}) = {}", scaled(-c.a(i, j), &format!("X{i}")));
            let _ = writeln!(out, "YT_{i}_{j}: comm(Y{i},T{j}) = {}", scaled(c.a(i, j), &format!("Y{i}")));
            if i <= j {
                let _ = writeln!(out, "TT_{i}_{j}: comm(T{i},T{j}) = 0");
            }
        }
        let _ = writeln!(out, "TX_{i}: gbr(T{i},X{n}) = {}", scaled(c.a(i, n), &format!("X{n}")));
    }
}

fn d_text(out: &mut String, n: usize) {
    for i in 1..n {
        let _ = writeln!(out, "DX_{i}: comm(D,X{i}) = 0");
        let _ = writeln!(out, "DY_{i}: comm(D,Y{i}) = 0");
        let _ = writeln!(out, "DT_{i}: comm(D,T{i}) = 0");
    }
    let _ = writeln!(out, "DXn: gbr(D,X{n}) = X{n}");
}

fn ptilde_q_serre_text(out: &mut String, n: usize, c: &CartanData) {
    let m = n - 1;
    for i in 1..=m {
        for k in (1..=n).filter(|&k| k != i) {
            let deg = serre_exponent(c.a(i, k));
            let (xi, xk) = (format!("X{i}"), format!("X{k}"));
            out.push_str(&serre_line(&format!("SX_{i}_{k}"), deg, true, |t| {
                word(&[(xi.as_str(), deg - t), (xk.as_str(), 1), (xi.as_str(), t)])
            }));
            out.push('\n');
        }
        for j in (1..=m).filter(|&j| j != i) {
            let deg = serre_exponent(c.a(i, j));
            let (yi, yj) = (format!("Y{i}"), format!("Y{j}"));
            out.push_str(&serre_line(&format!("SY_{i}_{j}"), deg, true, |t| {
                word(&[(yi.as_str(), deg - t), (yj.as_str(), 1), (yi.as_str(), t)])
            }));
            out.push('\n');
        }
    }
}

fn qboson_text(out: &mut String, n: usize) {
    for i in 1..=n {
        let _ = writeln!(out, "AA_plus_{i}: Am{i}*Ap{i} - Qpow(1)*Ap{i}*Am{i} = QNinv{i}");
        let _ = writeln!(out, "AA_minus_{i}: Am{i}*Ap{i} - Qpow(-1)*Ap{i}*Am{i} = QN{i}");
        let _ = writeln!(out, "QNA_plus_{i}: QN{i}*Ap{i}*QNinv{i} = Qpow(1)*Ap{i}");
        let _ = writeln!(out, "QNA_minus_{i}: QN{i}*Am{i}*QNinv{i} = Qpow(-1)*Am{i}");
        let _ = writeln!(out, "QNinv_{i}: QN{i}*QNinv{i} = 1");
        let _ = writeln!(out, "NA_{i}: comm(N{i},Ap{i}) = Ap{i}");
        for j in i + 1..=n {
            let _ = writeln!(out, "cross_pp_{i}_{j}: comm(Ap{i},Ap{j}) = 0");
            let _ = writeln!(out, "cross_pm_{i}_{j}: comm(Ap{i},Am{j}) = 0");
            let _ = writeln!(out, "cross_mp_{i}_{j}: comm(Am{i},Ap{j}) = 0");
        }
    }
}

fn qfermion_text(out: &mut String, n: usize) {
    for i in 1..=n {
        let _ = writeln!(out, "FF_plus_{i}: Fm{i}*Fp{i} + Qpow(1)*Fp{i}*Fm{i} = QM{i}");
        let _ = writeln!(out, "FF_minus_{i}: Fm{i}*Fp{i} + Qpow(-1)*Fp{i}*Fm{i} = QMinv{i}");
        let _ = writeln!(out, "QMinv_{i}: QM{i}*QMinv{i} = 1");
        for j in 1..=n {
            let c = i64::from(i == j);
            let _ = writeln!(out, "QMF_plus_{i}_{j}: QM{i}*Fp{j}*QMinv{i} = {}", qscaled(c, &format!("Fp{j}")));
            let _ = writeln!(out, "QMF_minus_{i}_{j}: QM{i}*Fm{j}*QMinv{i} = {}", qscaled(-c, &format!("Fm{j}")));
            if i <= j {
                let _ = writeln!(out, "pp_{i}_{j}: acomm(Fp{i},Fp{j}) = 0");
                let _ = writeln!(out, "mm_{i}_{j}: acomm(Fm{i},Fm{j}) = 0");
            }
            if i != j {
                let _ = writeln!(out, "pm_{i}_{j}: acomm(Fp{i},Fm{j}) = 0");
            }
        }
    }
}

fn kfermion_text(out: &mut String, n: usize, k: u32) {
    for i in 1..=n {
        let _ = writeln!(out, "XX_inv_{i}: Chm{i}*Chp{i} - Qpow(-1)*Chp{i}*Chm{i} = qN{i}");
        let _ = writeln!(out, "XX_q_{i}: Chm{i}*Chp{i} - Qpow(1)*Chp{i}*Chm{i} = qNinv{i}");
        let _ = writeln!(out, "NX_plus_{i}: comm(Nch{i},Chp{i}) = Chp{i}");
        let _ = writeln!(out, "NX_minus_{i}: comm(Nch{i},Chm{i}) = -Chm{i}");
        let _ = writeln!(out, "nil_plus_{i}: Chp{i}^{k} = 0");
        let _ = writeln!(out, "nil_minus_{i}: Chm{i}^{k} = 0");
        for j in i + 1..=n {
            let _ = writeln!(out, "cross_pp_{i}_{j}: comm(Chp{i},Chp{j}) = 0");
            let _ = writeln!(out, "cross_pm_{i}_{j}: comm(Chp{i},Chm{j}) = 0");
            let _ = writeln!(out, "cross_mp_{i}_{j}: comm(Chm{i},Chp{j}) = 0");
        }
    }
}

/// The relation text of a suite. `n` is the rank parameter for the algebra
/// suites and the number of modes for the oscillator suites; `k` is the
/// nilpotency order, needed by `uq-sln-root` and `kfermion`.
pub fn suite_text(name: &str, n: usize, cartan: &CartanData, k: Option<u32>) -> Result<String> {
    let needs_k = || k.ok_or_else(|| Error::InvalidArgument(format!("suite {name} needs a root of unity")));
    let algebra = !matches!(name, "qboson" | "qfermion" | "kfermion");
    if algebra && n < 2 {
        return Err(Error::InvalidRank(n));
    }
    if !algebra {
        check_modes(n)?;
    }
    let mut out = String::new();
    match name {
        "uq-sln" => uq_sln_text(&mut out, n, cartan),
        "uq-sln-serre" => uq_sln_serre_text(&mut out, n, cartan),
        "uq-sln-root" => {
            uq_sln_text(&mut out, n, cartan);
            nilpotency_text(&mut out, n, needs_k()?);
        }
        "u-sln" => u_sln_text(&mut out, n, cartan),
        "pn" => pn_text(&mut out, n, cartan, false),
        "ptilde" => {
            pn_text(&mut out, n, cartan, false);
            d_text(&mut out, n);
        }
        "ptilde-q" => {
            pn_text(&mut out, n, cartan, true);
            d_text(&mut out, n);
        }
        "ptilde-q-serre" => ptilde_q_serre_text(&mut out, n, cartan),
        "qboson" => qboson_text(&mut out, n),
        "qfermion" => qfermion_text(&mut out, n),
        "kfermion" => kfermion_text(&mut out, n, needs_k()?),
        _ => return Err(Error::UnknownSuite(name.to_string())),
    }
    Ok(out)
}

pub fn relation_suite(name: &str, n: usize, cartan: &CartanData) -> Result<Vec<Relation>> {
    relation_suite_with(name, n, cartan, None)
}

pub fn relation_suite_with(name: &str, n: usize, cartan: &CartanData, k: Option<u32>) -> Result<Vec<Relation>> {
    parse_relations(&suite_text(name, n, cartan, k)?)
}

/// The Cartan data a suite is generated from.
pub fn suite_cartan(name: &str, n: usize) -> Result<CartanData> {
    match name {
        "uq-sln" | "uq-sln-serre" | "uq-sln-root" | "u-sln" => cartan_sln(n),
        "pn" | "ptilde" | "ptilde-q" | "ptilde-q-serre" => cartan_ptilde(n),
        "qboson" | "qfermion" | "kfermion" => Ok(no_cartan()),
        _ => Err(Error::UnknownSuite(name.to_string())),
    }
}

/// Parameters of a suite run.
#[derive(Clone, Copy, Debug)]
pub struct SuiteParams {
    pub n: usize,
    pub q: Option<QParam>,
    pub trunc: usize,
}

/// A binding paired with the relations it is checked against.
#[derive(Clone, Debug)]
pub struct SuiteSetup {
    pub suite: String,
    pub binding: GeneratorBinding,
    pub relations: Vec<Relation>,
    pub q: Option<QParam>,
}

fn require_q(name: &str, q: Option<QParam>) -> Result<QParam> {
    q.ok_or_else(|| Error::InvalidArgument(format!("suite {name} needs a deformation parameter")))
}

/// Builds the realization matching a suite name. At a root of unity,
/// `uq-sln` runs on k-fermions with nilpotency added, and `uq-sln-serre`
/// is replaced by the nilpotency checks.
pub fn setup_suite(name: &str, p: SuiteParams) -> Result<SuiteSetup> {
    let n = p.n;
    let root_k = p.q.and_then(|q| q.root()).map(|(_, k)| k);
    let (binding, suite) = match name {
        "uq-sln" | "uq-sln-serre" | "uq-sln-root" => {
            let q = require_q(name, p.q)?;
            match root_k {
                Some(k) => {
                    let b = uq_sln_kfermionic(n, &q)?;
                    let suite = if name == "uq-sln-serre" {
                        let mut text = String::new();
                        nilpotency_text(&mut text, n, k);
                        parse_relations(&text)?
                    } else {
                        relation_suite_with("uq-sln-root", n, &b.cartan, Some(k))?
                    };
                    (b, suite)
                }
                None if name == "uq-sln-root" => {
                    return Err(Error::DegenerateParameter("uq-sln-root needs a root of unity".into()))
                }
                None => {
                    let b = uq_sln(n, &q, p.trunc)?;
                    let suite = relation_suite(name, n, &b.cartan)?;
                    (b, suite)
                }
            }
        }
        "u-sln" => {
            let b = u_sln_classical(n, p.trunc)?;
            let suite = relation_suite(name, n, &b.cartan)?;
            (b, suite)
        }
        "pn" | "ptilde" => {
            let b = ptilde_classical(n, p.trunc)?;
            let suite = relation_suite(name, n, &b.cartan)?;
            (b, suite)
        }
        "ptilde-q" | "ptilde-q-serre" => {
            let q = require_q(name, p.q)?;
            if q.root().is_some() && name == "ptilde-q-serre" {
                return Err(Error::DegenerateParameter(
                    "quantum Serre relations are checked at generic Q only".into(),
                ));
            }
            let b = ptilde_q(n, &q, p.trunc)?;
            let suite = relation_suite(name, n, &b.cartan)?;
            (b, suite)
        }
        "qboson" => {
            let q = require_q(name, p.q)?;
            let b = qboson_oscillators(n, &q, p.trunc)?;
            (b, relation_suite(name, n, &no_cartan())?)
        }
        "qfermion" => {
            let q = require_q(name, p.q)?;
            let b = qfermion_oscillators(n, &q)?;
            (b, relation_suite(name, n, &no_cartan())?)
        }
        "kfermion" => {
            let q = require_q(name, p.q)?;
            let b = kfermion_oscillators(n, &q)?;
            (b, relation_suite_with(name, n, &no_cartan(), root_k)?)
        }
        _ => return Err(Error::UnknownSuite(name.to_string())),
    };
    Ok(SuiteSetup {
        suite: name.to_string(),
        binding,
        relations: suite,
        q: p.q,
    })
}
