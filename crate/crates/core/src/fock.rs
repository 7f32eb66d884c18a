//! Single-mode Fock-space representations of the oscillator species, and the
//! dense [`Operator`] type every generator matrix is stored in.
//!
//! Matrix-element convention: `A⁺A⁻ = [N]_Q` and `A⁻A⁺ = [N+1]_Q`, with the
//! square root split symmetrically between the two ladder operators. Boson
//! truncations drop the top raising element, so relations only hold on the
//! interior of the truncated space.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::composite::SpaceSpec;
use crate::error::{Error, Result};
use crate::qarith::{qnumber, qnumber_sqrt, QKind, QParam};

pub type CMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Grading {
    Even,
    Odd,
}

impl Grading {
    pub fn parity(self) -> u8 {
        match self {
            Grading::Even => 0,
            Grading::Odd => 1,
        }
    }

    pub fn from_parity(p: u8) -> Self {
        if p.is_multiple_of(2) {
            Grading::Even
        } else {
            Grading::Odd
        }
    }
}

impl Add for Grading {
    type Output = Grading;
    fn add(self, rhs: Grading) -> Grading {
        Grading::from_parity(self.parity() + rhs.parity())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Species {
    QBoson { dim: usize },
    QFermion,
    KFermion { k: usize },
    ClassicalBoson { dim: usize },
    ClassicalFermion,
}

impl Species {
    pub fn dim(self) -> usize {
        match self {
            Species::QBoson { dim } | Species::ClassicalBoson { dim } => dim,
            Species::KFermion { k } => k,
            Species::QFermion | Species::ClassicalFermion => 2,
        }
    }

    /// Fermionic modes carry parity strings and odd ladder operators.
    pub fn is_fermionic(self) -> bool {
        matches!(self, Species::QFermion | Species::ClassicalFermion)
    }

    /// Truncated boson modes, the only ones subject to interior projection.
    pub fn is_truncated_boson(self) -> bool {
        matches!(self, Species::QBoson { .. } | Species::ClassicalBoson { .. })
    }

    fn ladder_grading(self) -> Grading {
        if self.is_fermionic() {
            Grading::Odd
        } else {
            Grading::Even
        }
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Species::QBoson { dim } => write!(f, "q-boson(D={dim})"),
            Species::QFermion => f.write_str("q-fermion"),
            Species::KFermion { k } => write!(f, "k-fermion(k={k})"),
            Species::ClassicalBoson { dim } => write!(f, "boson(D={dim})"),
            Species::ClassicalFermion => f.write_str("fermion"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModeSpec {
    pub species: Species,
    /// 1-based mode index `i`.
    pub label: usize,
}

impl ModeSpec {
    pub fn new(species: Species, label: usize) -> Self {
        ModeSpec { species, label }
    }

    pub fn dim(&self) -> usize {
        self.species.dim()
    }
}

/// A square complex matrix acting on a composite Fock space.
#[derive(Clone, Debug)]
pub struct Operator {
    matrix: CMatrix,
    space: Arc<SpaceSpec>,
    grading: Option<Grading>,
}

impl Operator {
    pub fn new(matrix: CMatrix, space: Arc<SpaceSpec>, grading: Option<Grading>) -> Result<Self> {
        let dim = space.total_dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::SpaceMismatch);
        }
        Ok(Operator {
            matrix,
            space,
            grading,
        })
    }

    pub fn identity(space: &Arc<SpaceSpec>) -> Self {
        let dim = space.total_dim();
        Operator {
            matrix: CMatrix::identity(dim, dim),
            space: Arc::clone(space),
            grading: Some(Grading::Even),
        }
    }

    pub fn zeros(space: &Arc<SpaceSpec>, grading: Option<Grading>) -> Self {
        let dim = space.total_dim();
        Operator {
            matrix: CMatrix::zeros(dim, dim),
            space: Arc::clone(space),
            grading,
        }
    }

    pub fn from_diagonal(space: &Arc<SpaceSpec>, values: &[Complex64]) -> Result<Self> {
        if values.len() != space.total_dim() {
            return Err(Error::SpaceMismatch);
        }
        let diag = nalgebra::DVector::from_column_slice(values);
        Ok(Operator {
            matrix: CMatrix::from_diagonal(&diag),
            space: Arc::clone(space),
            grading: Some(Grading::Even),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn space(&self) -> &Arc<SpaceSpec> {
        &self.space
    }

    pub fn grading(&self) -> Option<Grading> {
        self.grading
    }

    pub fn with_grading(mut self, grading: Option<Grading>) -> Self {
        self.grading = grading;
        self
    }

    pub fn same_space(&self, other: &Operator) -> bool {
        Arc::ptr_eq(&self.space, &other.space) || *self.space == *other.space
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|z| *z == ZERO)
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|j| (0..n).all(|i| i == j || self.matrix[(i, j)] == ZERO))
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.matrix[(i, i)]).collect()
    }

    /// Diagonal entries of a diagonal operator with (numerically) real spectrum.
    pub fn real_spectrum(&self) -> Result<Vec<f64>> {
        if !self.is_diagonal() {
            return Err(Error::NotDiagonal);
        }
        let diag = self.diagonal();
        let scale = diag.iter().map(|z| z.norm()).fold(1.0, f64::max);
        if diag.iter().any(|z| z.im.abs() > 1e-12 * scale) {
            return Err(Error::InvalidArgument("diagonal spectrum is not real".into()));
        }
        Ok(diag.iter().map(|z| z.re).collect())
    }

    pub fn norm_fro(&self) -> f64 {
        self.matrix.norm()
    }

    /// Largest singular value.
    pub fn norm_spectral(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        self.matrix
            .clone()
            .singular_values()
            .iter()
            .cloned()
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, factor: Complex64) -> Operator {
        Operator {
            matrix: &self.matrix * factor,
            space: Arc::clone(&self.space),
            grading: self.grading,
        }
    }

    pub fn pow(&self, exponent: u32) -> Operator {
        let mut acc = Operator::identity(&self.space);
        for _ in 0..exponent {
            acc = &acc * self;
        }
        acc.grading = self
            .grading
            .map(|g| Grading::from_parity(g.parity() * (exponent % 2) as u8));
        acc
    }

    /// Transpose (not conjugated).
    pub fn transpose(&self) -> Operator {
        Operator {
            matrix: self.matrix.transpose(),
            space: Arc::clone(&self.space),
            grading: self.grading,
        }
    }

    /// Restriction to the columns selected by a 0/1 mask, i.e. `self · P`.
    pub fn restrict_columns(&self, keep: &[bool]) -> Operator {
        let mut m = self.matrix.clone();
        for (j, k) in keep.iter().enumerate() {
            if !k {
                m.column_mut(j).fill(ZERO);
            }
        }
        Operator {
            matrix: m,
            space: Arc::clone(&self.space),
            grading: self.grading,
        }
    }

    fn assert_compatible(&self, other: &Operator) {
        assert!(
            self.same_space(other),
            "operator space mismatch ({} vs {})",
            self.space,
            other.space
        );
    }
}

fn sum_grading(a: &Operator, b: &Operator) -> Option<Grading> {
    if a.is_zero() {
        return b.grading;
    }
    if b.is_zero() {
        return a.grading;
    }
    match (a.grading, b.grading) {
        (Some(x), Some(y)) if x == y => Some(x),
        _ => None,
    }
}

/// Product that skips structural zeros; generator matrices are very sparse.
fn sparse_aware_product(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let a_cols: Vec<Vec<(usize, Complex64)>> = (0..n)
        .map(|k| {
            a.column(k)
                .iter()
                .enumerate()
                .filter(|(_, z)| **z != ZERO)
                .map(|(i, z)| (i, *z))
                .collect()
        })
        .collect();
    let mut c = CMatrix::zeros(n, b.ncols());
    for j in 0..b.ncols() {
        let mut col = c.column_mut(j);
        for (k, bkj) in b.column(j).iter().enumerate() {
            if *bkj == ZERO {
                continue;
            }
            for &(i, aik) in &a_cols[k] {
                col[i] += aik * bkj;
            }
        }
    }
    c
}

impl<'a> Mul<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn mul(self, rhs: &'a Operator) -> Operator {
        self.assert_compatible(rhs);
        let grading = match (self.grading, rhs.grading) {
            (Some(x), Some(y)) => Some(x + y),
            _ => None,
        };
        Operator {
            matrix: sparse_aware_product(&self.matrix, &rhs.matrix),
            space: Arc::clone(&self.space),
            grading,
        }
    }
}

impl Mul for Operator {
    type Output = Operator;
    fn mul(self, rhs: Operator) -> Operator {
        &self * &rhs
    }
}

impl<'a> Add<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn add(self, rhs: &'a Operator) -> Operator {
        self.assert_compatible(rhs);
        Operator {
            matrix: &self.matrix + &rhs.matrix,
            space: Arc::clone(&self.space),
            grading: sum_grading(self, rhs),
        }
    }
}

impl Add for Operator {
    type Output = Operator;
    fn add(self, rhs: Operator) -> Operator {
        &self + &rhs
    }
}

impl<'a> Sub<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn sub(self, rhs: &'a Operator) -> Operator {
        self.assert_compatible(rhs);
        Operator {
            matrix: &self.matrix - &rhs.matrix,
            space: Arc::clone(&self.space),
            grading: sum_grading(self, rhs),
        }
    }
}

impl Sub for Operator {
    type Output = Operator;
    fn sub(self, rhs: Operator) -> Operator {
        &self - &rhs
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale(-ONE)
    }
}

impl Mul<Complex64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: Complex64) -> Operator {
        self.scale(rhs)
    }
}

impl Mul<f64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: f64) -> Operator {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

/// Ladder and number operators of one mode (or of one mode embedded in a
/// composite space).
#[derive(Clone, Debug)]
pub struct ModeOperators {
    pub species: Species,
    pub raise: Operator,
    pub lower: Operator,
    pub number: Operator,
}

impl ModeOperators {
    pub fn space(&self) -> &Arc<SpaceSpec> {
        self.raise.space()
    }
}

fn single_mode(species: Species, lower: CMatrix, raise: CMatrix) -> ModeOperators {
    let space = SpaceSpec::shared(vec![ModeSpec::new(species, 1)]).expect("single mode");
    let dim = species.dim();
    let number: Vec<Complex64> = (0..dim).map(|n| Complex64::new(n as f64, 0.0)).collect();
    let g = Some(species.ladder_grading());
    ModeOperators {
        species,
        raise: Operator::new(raise, Arc::clone(&space), g).expect("mode dimension"),
        lower: Operator::new(lower, Arc::clone(&space), g).expect("mode dimension"),
        number: Operator::from_diagonal(&space, &number).expect("mode dimension"),
    }
}

/// Lowering matrix with `⟨n-1|L|n⟩ = element(n)`.
fn lowering_matrix(dim: usize, element: impl Fn(usize) -> Result<Complex64>) -> Result<CMatrix> {
    let mut m = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        m[(n - 1, n)] = element(n)?;
    }
    Ok(m)
}

/// Q-boson truncated at `dim` levels: `A⁻|n⟩ = √[n]_Q |n-1⟩`,
/// `A⁺|n⟩ = √[n+1]_Q |n+1⟩`, `A⁺|D-1⟩ = 0`.
pub fn qboson_mode(dim: usize, q: &QParam) -> Result<ModeOperators> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim));
    }
    qnumber(1, q)?;
    let lower = lowering_matrix(dim, |n| qnumber_sqrt(n as i64, q))?;
    let raise = lower.transpose();
    Ok(single_mode(Species::QBoson { dim }, lower, raise))
}

/// Two-level Q-fermion. The matrix elements are Q-independent; `Q` is only
/// validated.
pub fn qfermion_mode(q: &QParam) -> Result<ModeOperators> {
    qnumber(1, q)?;
    let lower = lowering_matrix(2, |_| Ok(ONE))?;
    let raise = lower.transpose();
    Ok(single_mode(Species::QFermion, lower, raise))
}

/// k-fermion at the root of unity `q`: `χ⁻|s⟩ = √[s]_q |s-1⟩` on `k` levels.
/// No truncation defect: `[k]_q = 0` closes the ladder.
pub fn kfermion_mode(k: usize, q: &QParam) -> Result<ModeOperators> {
    let QKind::RootOfUnity { r, k: order } = q.kind() else {
        return Err(Error::DegenerateParameter(
            "k-fermions need a root-of-unity parameter".into(),
        ));
    };
    if order as usize != k {
        return Err(Error::OrderMismatch {
            requested: k,
            actual: order as usize,
        });
    }
    if k < 2 {
        return Err(Error::Degenerate { r, k: order });
    }
    let lower = lowering_matrix(k, |s| qnumber_sqrt(s as i64, q))?;
    let raise = lower.transpose();
    Ok(single_mode(Species::KFermion { k }, lower, raise))
}

/// Ordinary boson truncated at `dim` levels.
pub fn classical_boson_mode(dim: usize) -> Result<ModeOperators> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim));
    }
    let lower = lowering_matrix(dim, |n| Ok(Complex64::new((n as f64).sqrt(), 0.0)))?;
    let raise = lower.transpose();
    Ok(single_mode(Species::ClassicalBoson { dim }, lower, raise))
}

pub fn classical_fermion_mode() -> ModeOperators {
    let lower = lowering_matrix(2, |_| Ok(ONE)).expect("infallible");
    let raise = lower.transpose();
    single_mode(Species::ClassicalFermion, lower, raise)
}

/// Base of a diagonal power `base^(coeff·N)`.
#[derive(Clone, Copy, Debug)]
pub enum PowerBase {
    Q(QParam),
    Scalar(Complex64),
}

impl From<QParam> for PowerBase {
    fn from(q: QParam) -> Self {
        PowerBase::Q(q)
    }
}

impl From<&QParam> for PowerBase {
    fn from(q: &QParam) -> Self {
        PowerBase::Q(*q)
    }
}

impl From<Complex64> for PowerBase {
    fn from(z: Complex64) -> Self {
        PowerBase::Scalar(z)
    }
}

impl PowerBase {
    pub fn powf(&self, x: f64) -> Complex64 {
        if x == 0.0 {
            return ONE;
        }
        match self {
            PowerBase::Q(q) => q.powf(x),
            PowerBase::Scalar(z) => (z.ln() * x).exp(),
        }
    }
}

/// `base^(coeff · N)` for a diagonal `N` with real spectrum, principal branch.
pub fn diag_power(base: impl Into<PowerBase>, coeff: f64, number_op: &Operator) -> Result<Operator> {
    let base = base.into();
    let spectrum = number_op.real_spectrum()?;
    let values: Vec<Complex64> = spectrum.iter().map(|n| base.powf(coeff * n)).collect();
    Operator::from_diagonal(number_op.space(), &values)
}
