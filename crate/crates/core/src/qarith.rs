//! Scalar q-arithmetic: q-numbers, q-factorials, q-binomials and primitive
//! roots of unity.
//!
//! Everything is evaluated in double-precision complex arithmetic. For a
//! [`QParam`] that is a primitive root of unity `q = exp(2πi/r)` the q-number
//! `[t]_q = sin(2πt/r) / sin(2π/r)` is evaluated in closed form, so it is real
//! and vanishes exactly at multiples of the nilpotency order `k`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Roots of unity up to this order are rejected as generic parameters.
pub const DEFAULT_ROOT_GUARD: u32 = 64;

const UNIT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QKind {
    Generic,
    RootOfUnity { r: u32, k: u32 },
}

/// A complex deformation parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QParam {
    value: Complex64,
    kind: QKind,
}

impl QParam {
    /// A generic deformation parameter. Rejects 0, ±1 and any root of unity
    /// of order at most [`DEFAULT_ROOT_GUARD`].
    pub fn generic(value: Complex64) -> Result<Self> {
        Self::generic_with_bound(value, DEFAULT_ROOT_GUARD)
    }

    pub fn generic_with_bound(value: Complex64, bound: u32) -> Result<Self> {
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::DegenerateParameter(format!("{value} is not finite")));
        }
        if value.norm() < 1e-300 {
            return Err(Error::DegenerateParameter("Q = 0".into()));
        }
        if (value - 1.0).norm() < UNIT_TOL || (value + 1.0).norm() < UNIT_TOL {
            return Err(Error::DegenerateParameter(format!(
                "Q = {} makes Q - 1/Q vanish",
                format_complex(value)
            )));
        }
        if (value.norm() - 1.0).abs() < UNIT_TOL {
            let turns = value.arg() / (2.0 * PI);
            for order in 1..=bound {
                let m = turns * f64::from(order);
                if (m - m.round()).abs() < 1e-9 {
                    return Err(Error::DegenerateParameter(format!(
                        "Q = {} is a root of unity of order {order}; use a root-of-unity parameter",
                        format_complex(value)
                    )));
                }
            }
        }
        Ok(QParam {
            value,
            kind: QKind::Generic,
        })
    }

    pub fn real(value: f64) -> Result<Self> {
        Self::generic(Complex64::new(value, 0.0))
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn kind(&self) -> QKind {
        self.kind
    }

    /// `(r, k)` for a root of unity.
    pub fn root(&self) -> Option<(u32, u32)> {
        match self.kind {
            QKind::RootOfUnity { r, k } => Some((r, k)),
            QKind::Generic => None,
        }
    }

    /// Logarithm on the principal branch; exact `2πi/r` for roots of unity.
    pub fn ln(&self) -> Complex64 {
        match self.kind {
            QKind::RootOfUnity { r, .. } => Complex64::new(0.0, 2.0 * PI / f64::from(r)),
            QKind::Generic => self.value.ln(),
        }
    }

    /// `Q^x` on the principal branch.
    pub fn powf(&self, x: f64) -> Complex64 {
        if x == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        match self.kind {
            QKind::RootOfUnity { r, .. } => {
                Complex64::from_polar(1.0, 2.0 * PI * x / f64::from(r))
            }
            QKind::Generic => (self.ln() * x).exp(),
        }
    }

    fn check_nondegenerate(&self) -> Result<()> {
        let v = self.value;
        if v.norm() < 1e-300 || (v - 1.0).norm() < UNIT_TOL || (v + 1.0).norm() < UNIT_TOL {
            return Err(Error::DegenerateParameter(format!(
                "Q = {} makes Q - 1/Q vanish",
                format_complex(v)
            )));
        }
        Ok(())
    }
}

impl fmt::Display for QParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            QKind::RootOfUnity { r, .. } => write!(f, "exp(2πi/{r})"),
            QKind::Generic => f.write_str(&format_complex(self.value)),
        }
    }
}

/// `a+bi` formatting without spaces (the CLI's complex syntax).
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Parses `1.3`, `0.7+0.3i`, `-2i`, `1e-3-4.5i`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s = text.trim();
    let bad = || Error::InvalidArgument(format!("cannot parse complex number `{text}`"));
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not the leading one and not an exponent sign
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in (1..bytes.len()).rev() {
        if (bytes[idx] == b'+' || bytes[idx] == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
            split = Some(idx);
            break;
        }
    }
    let imag = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(idx) => {
            let re = body[..idx].parse::<f64>().map_err(|_| bad())?;
            Ok(Complex64::new(re, imag(&body[idx..])?))
        }
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

/// The q-number `[t]_Q = (Q^t - Q^{-t}) / (Q - Q^{-1})`.
pub fn qnumber(t: i64, q: &QParam) -> Result<Complex64> {
    q.check_nondegenerate()?;
    Ok(qnumber_unchecked(t, q))
}

fn qnumber_unchecked(t: i64, q: &QParam) -> Complex64 {
    if t == 0 {
        return Complex64::new(0.0, 0.0);
    }
    match q.kind {
        QKind::RootOfUnity { r, k } => {
            if t.rem_euclid(i64::from(k)) == 0 {
                return Complex64::new(0.0, 0.0);
            }
            let theta = 2.0 * PI / f64::from(r);
            Complex64::new((theta * t as f64).sin() / theta.sin(), 0.0)
        }
        QKind::Generic => {
            let v = q.value;
            let e = i32::try_from(t).expect("q-number argument out of range");
            (v.powi(e) - v.powi(-e)) / (v - v.inv())
        }
    }
}

/// `[x]_Q` for a real argument; integral arguments go through [`qnumber`].
pub fn qnumber_real(x: f64, q: &QParam) -> Result<Complex64> {
    q.check_nondegenerate()?;
    if (x - x.round()).abs() < 1e-9 {
        return Ok(qnumber_unchecked(x.round() as i64, q));
    }
    Ok((q.powf(x) - q.powf(-x)) / (q.value - q.value.inv()))
}

/// Square root of `[t]_Q`, used for oscillator matrix elements.
///
/// Principal branch, except at a root of unity where `[t]_q` is a negative
/// real: there the root is taken on the side reached by `[t]_{q e^ε}` as
/// `ε → 0+`, so the value is the continuous limit of the generic one.
pub fn qnumber_sqrt(t: i64, q: &QParam) -> Result<Complex64> {
    let v = qnumber(t, q)?;
    match q.kind {
        QKind::Generic => Ok(v.sqrt()),
        QKind::RootOfUnity { r, .. } => {
            if v.re >= 0.0 {
                return Ok(Complex64::new(v.re.sqrt(), 0.0));
            }
            let theta = 2.0 * PI / f64::from(r);
            let tf = t as f64;
            // Im d[t]_{q e^ε}/dε at ε = 0
            let slope = -(tf * (tf * theta).cos() * theta.sin() - (tf * theta).sin() * theta.cos())
                / (theta.sin() * theta.sin());
            let sign = if slope < 0.0 { -1.0 } else { 1.0 };
            Ok(Complex64::new(0.0, sign * (-v.re).sqrt()))
        }
    }
}

/// `[t]_Q! = [t][t-1]...[1]`, with `[0]! = 1`.
pub fn qfactorial(t: u32, q: &QParam) -> Result<Complex64> {
    q.check_nondegenerate()?;
    Ok((1..=i64::from(t)).fold(Complex64::new(1.0, 0.0), |acc, j| {
        acc * qnumber_unchecked(j, q)
    }))
}

/// Gaussian binomial `[n]! / ([t]! [n-t]!)`.
pub fn qbinomial(n: u32, t: u32, q: &QParam) -> Result<Complex64> {
    if t > n {
        return Err(Error::InvalidArgument(format!("qbinomial({n}, {t}) needs t <= n")));
    }
    let num = qfactorial(n, q)?;
    let den = qfactorial(t, q)? * qfactorial(n - t, q)?;
    if den.norm() == 0.0 {
        return Err(Error::DegenerateParameter(format!(
            "[{t}]! [{}]! vanishes at Q = {q}",
            n - t
        )));
    }
    Ok(num / den)
}

/// `exp(2πi/r)` tagged with its nilpotency order.
pub fn primitive_root(r: i64) -> Result<QParam> {
    if r < 2 {
        return Err(Error::InvalidOrder(r));
    }
    let r32 = u32::try_from(r).map_err(|_| Error::InvalidOrder(r))?;
    let k = nilpotency_order(r)?;
    Ok(QParam {
        value: Complex64::from_polar(1.0, 2.0 * PI / r as f64),
        kind: QKind::RootOfUnity { r: r32, k },
    })
}

/// Smallest `k >= 1` with `[k]_q = 0` at `q = exp(2πi/r)`: `r` for odd `r`,
/// `r/2` for even `r`.
pub fn nilpotency_order(r: i64) -> Result<u32> {
    if r < 2 {
        return Err(Error::InvalidOrder(r));
    }
    let r = u32::try_from(r).map_err(|_| Error::InvalidOrder(r))?;
    Ok(if r % 2 == 0 { r / 2 } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    // Brute-force oracle: evaluate the defining ratio with plain complex
    // powers and scan for the first zero.
    fn brute_force_k(r: i64) -> u32 {
        let q = Complex64::from_polar(1.0, 2.0 * PI / r as f64);
        (1..=r as i32)
            .find(|&k| ((q.powi(k) - q.powi(-k)) / (q - q.inv())).norm() < 1e-12)
            .unwrap() as u32
    }

    #[test]
    fn qnumber_examples() {
        let q2 = QParam::real(2.0).unwrap();
        assert_eq!(qnumber(0, &q2).unwrap(), c(0.0));
        assert!((qnumber(3, &q2).unwrap() - c(5.25)).norm() < 1e-15);
        for r in 3..9 {
            let q = primitive_root(r).unwrap();
            assert_eq!(qnumber(r, &q).unwrap(), c(0.0));
        }
    }

    #[test]
    fn degenerate_parameters_rejected() {
        assert!(matches!(QParam::real(1.0), Err(Error::DegenerateParameter(_))));
        assert!(matches!(QParam::real(-1.0), Err(Error::DegenerateParameter(_))));
        assert!(matches!(QParam::real(0.0), Err(Error::DegenerateParameter(_))));
        assert!(QParam::generic(Complex64::new(0.0, 1.0)).is_err());
        let r2 = primitive_root(2).unwrap();
        assert!(matches!(qnumber(1, &r2), Err(Error::DegenerateParameter(_))));
    }

    #[test]
    fn qfactorial_examples() {
        let q2 = QParam::real(2.0).unwrap();
        assert_eq!(qfactorial(0, &q2).unwrap(), c(1.0));
        assert!((qfactorial(3, &q2).unwrap() - c(13.125)).norm() < 1e-14);
        assert_eq!(qfactorial(2, &primitive_root(4).unwrap()).unwrap(), c(0.0));
    }

    #[test]
    fn qbinomial_examples() {
        let q2 = QParam::real(2.0).unwrap();
        assert_eq!(qbinomial(4, 4, &q2).unwrap(), c(1.0));
        assert!((qbinomial(2, 1, &q2).unwrap() - c(2.5)).norm() < 1e-15);
        let q13 = QParam::real(1.3).unwrap();
        let direct = qnumber(3, &q13).unwrap();
        assert!((qbinomial(3, 1, &q13).unwrap() - direct).norm() < 1e-14);
        // Q^2 + 1 + Q^-2 = 1.69 + 1 + 1/1.69
        assert!((direct.re - (2.69 + 1.0 / 1.69)).abs() < 1e-14);
        assert!((direct.re - 3.28172).abs() < 1e-5);
        assert!(matches!(
            qbinomial(4, 2, &primitive_root(4).unwrap()),
            Err(Error::DegenerateParameter(_))
        ));
    }

    #[test]
    fn primitive_roots() {
        let q4 = primitive_root(4).unwrap();
        assert!((q4.value() - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert_eq!(q4.root(), Some((4, 2)));
        let q3 = primitive_root(3).unwrap();
        assert!((q3.value() - Complex64::from_polar(1.0, 2.0 * PI / 3.0)).norm() < 1e-15);
        assert_eq!(q3.root(), Some((3, 3)));
        let q2 = primitive_root(2).unwrap();
        assert!((q2.value() + 1.0).norm() < 1e-15);
        assert_eq!(q2.root(), Some((2, 1)));
        assert!(matches!(primitive_root(1), Err(Error::InvalidOrder(1))));
    }

    #[test]
    fn nilpotency_matches_brute_force() {
        assert_eq!(nilpotency_order(5).unwrap(), 5);
        assert_eq!(nilpotency_order(6).unwrap(), 3);
        assert_eq!(nilpotency_order(4).unwrap(), 2);
        for r in 3..=24 {
            assert_eq!(nilpotency_order(r).unwrap(), brute_force_k(r), "r = {r}");
        }
    }

    #[test]
    fn closed_form_agrees_with_ratio() {
        for r in 3..=12 {
            let q = primitive_root(r).unwrap();
            let v = q.value();
            for t in -30..30 {
                let ratio = (v.powi(t) - v.powi(-t)) / (v - v.inv());
                assert!((qnumber(i64::from(t), &q).unwrap() - ratio).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn sqrt_branch_follows_the_limit_path() {
        // Oracle: principal sqrt of [t] evaluated slightly off the unit circle.
        for r in 3..=12 {
            let q = primitive_root(r).unwrap();
            let (_, k) = q.root().unwrap();
            let nearby =
                QParam::generic(q.value() * Complex64::new(1e-9, 0.0).exp()).unwrap();
            for t in 1..(4 * i64::from(k)) {
                if t % i64::from(k) == 0 {
                    continue;
                }
                let at_root = qnumber_sqrt(t, &q).unwrap();
                let off = qnumber(t, &nearby).unwrap().sqrt();
                assert!((at_root - off).norm() < 1e-6, "r={r} t={t}");
            }
        }
    }

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("1.3").unwrap(), c(1.3));
        assert_eq!(parse_complex("0.7+0.3i").unwrap(), Complex64::new(0.7, 0.3));
        assert_eq!(parse_complex("0.7-0.3i").unwrap(), Complex64::new(0.7, -0.3));
        assert_eq!(parse_complex("-2i").unwrap(), Complex64::new(0.0, -2.0));
        assert_eq!(parse_complex("1e-3+1e-2i").unwrap(), Complex64::new(1e-3, 1e-2));
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert!(parse_complex("1.3+").is_err());
        assert!(parse_complex("").is_err());
        let z = Complex64::new(0.7, -0.3);
        assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn generic_q() -> impl Strategy<Value = QParam> {
            (0.3f64..3.0, -1.0f64..1.0)
                .prop_filter_map("degenerate", |(re, im)| {
                    QParam::generic(Complex64::new(re, im)).ok()
                })
        }

        proptest! {
            #[test]
            fn qnumber_is_odd(t in -20i64..20, q in generic_q()) {
                let a = qnumber(t, &q).unwrap();
                let b = qnumber(-t, &q).unwrap();
                prop_assert!((a + b).norm() <= 1e-12 * (1.0 + a.norm()));
            }

            #[test]
            fn qbinomial_symmetry(n in 0u32..10, frac in 0.0f64..1.0, q in generic_q()) {
                let t = ((f64::from(n) * frac).floor() as u32).min(n);
                let a = qbinomial(n, t, &q).unwrap();
                let b = qbinomial(n, n - t, &q).unwrap();
                prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
            }

            #[test]
            fn qbinomial_pascal(n in 1u32..=8, frac in 0.0f64..1.0, q in generic_q()) {
                let t = 1 + ((f64::from(n) * frac).floor() as u32).min(n - 1);
                let lhs = qbinomial(n, t, &q).unwrap();
                let upper = if t < n { qbinomial(n - 1, t, &q).unwrap() } else { Complex64::new(0.0, 0.0) };
                let lower = qbinomial(n - 1, t - 1, &q).unwrap();
                let rhs = q.value().powi(t as i32) * upper
                    + q.value().powi(-((n - t) as i32)) * lower;
                prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
            }

            #[test]
            fn root_zeroes_exactly_at_k(r in 2i64..40) {
                let q = primitive_root(r).unwrap();
                let (_, k) = q.root().unwrap();
                if r > 2 {
                    prop_assert!(qnumber(i64::from(k), &q).unwrap().norm() < 1e-14);
                    for j in 1..i64::from(k) {
                        prop_assert!(qnumber(j, &q).unwrap().norm() > 1e-3);
                    }
                }
            }
        }
    }
}
