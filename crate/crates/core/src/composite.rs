//! Tensor-product Fock spaces: mode embedding with parity strings, graded
//! brackets, operator q-numbers and generator bindings.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{CMatrix, Grading, ModeOperators, ModeSpec, Operator, Species};
use crate::qarith::{qnumber_real, QParam};

/// Entries below this fraction of the largest magnitude are ignored when
/// reading off occupation shifts.
const SHIFT_THRESHOLD: f64 = 1e-12;

/// An ordered list of modes; mode 0 is the slowest-varying Kronecker factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceSpec {
    modes: Vec<ModeSpec>,
    total_dim: usize,
}

impl SpaceSpec {
    pub fn new(modes: Vec<ModeSpec>) -> Result<Self> {
        let mut seen = HashSet::new();
        for m in &modes {
            if m.dim() < 1 {
                return Err(Error::DimensionTooSmall(m.dim()));
            }
            let kind = std::mem::discriminant(&m.species);
            if !seen.insert((kind, m.label)) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate label {} for {}",
                    m.label, m.species
                )));
            }
        }
        let total_dim = modes.iter().map(ModeSpec::dim).product();
        Ok(SpaceSpec { modes, total_dim })
    }

    pub fn shared(modes: Vec<ModeSpec>) -> Result<Arc<Self>> {
        Self::new(modes).map(Arc::new)
    }

    pub fn modes(&self) -> &[ModeSpec] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.modes.iter().map(ModeSpec::dim).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    /// Occupation numbers of basis state `index`.
    pub fn occupations(&self, index: usize) -> Vec<usize> {
        let mut occ = vec![0; self.modes.len()];
        let mut rest = index;
        for (j, m) in self.modes.iter().enumerate().rev() {
            occ[j] = rest % m.dim();
            rest /= m.dim();
        }
        occ
    }

    fn occupation_table(&self) -> Vec<Vec<usize>> {
        (0..self.total_dim).map(|i| self.occupations(i)).collect()
    }

    /// Basis states whose occupation of every truncated boson mode `j` is
    /// below `dim_j - margins[j]`.
    pub fn interior_mask(&self, margins: &[usize]) -> Result<Vec<bool>> {
        if margins.len() != self.modes.len() {
            return Err(Error::InvalidArgument(format!(
                "{} margins for {} modes",
                margins.len(),
                self.modes.len()
            )));
        }
        for (m, &margin) in self.modes.iter().zip(margins) {
            if m.species.is_truncated_boson() && margin >= m.dim() {
                return Err(Error::MarginTooLarge {
                    margin,
                    dim: m.dim(),
                });
            }
        }
        Ok((0..self.total_dim)
            .map(|i| {
                self.occupations(i)
                    .iter()
                    .zip(&self.modes)
                    .zip(margins)
                    .all(|((&o, m), &margin)| !m.species.is_truncated_boson() || o + margin < m.dim())
            })
            .collect())
    }

    /// The same margin on every truncated boson mode.
    pub fn uniform_margins(&self, margin: usize) -> Vec<usize> {
        self.modes
            .iter()
            .map(|m| if m.species.is_truncated_boson() { margin } else { 0 })
            .collect()
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .modes
            .iter()
            .map(|m| format!("{}#{}", m.species, m.label))
            .collect();
        f.write_str(&parts.join(" ⊗ "))
    }
}

fn kron_all(factors: &[CMatrix]) -> CMatrix {
    let mut acc = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
    for f in factors {
        acc = acc.kronecker(f);
    }
    acc
}

fn parity(dim: usize) -> CMatrix {
    let diag: Vec<Complex64> = (0..dim)
        .map(|n| Complex64::new(if n % 2 == 0 { 1.0 } else { -1.0 }, 0.0))
        .collect();
    CMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag))
}

/// Embeds single-mode operators at position `mode_index` (0-based) of
/// `space`. Fermionic ladder operators pick up a parity string over the
/// fermionic modes to their left.
pub fn embed(mode_ops: &ModeOperators, space: &Arc<SpaceSpec>, mode_index: usize) -> Result<ModeOperators> {
    let target = space.modes().get(mode_index).ok_or(Error::IndexOutOfRange {
        index: mode_index,
        len: space.len(),
    })?;
    let species = mode_ops.species;
    if species.dim() != target.dim()
        || species.is_fermionic() != target.species.is_fermionic()
        || mode_ops.raise.dim() != species.dim()
    {
        return Err(Error::SpeciesMismatch(format!(
            "cannot place {species} on mode {} ({})",
            mode_index, target.species
        )));
    }
    let lift = |op: &Operator, with_string: bool| -> Result<Operator> {
        let factors: Vec<CMatrix> = space
            .modes()
            .iter()
            .enumerate()
            .map(|(j, m)| {
                if j == mode_index {
                    op.matrix().clone()
                } else if with_string && j < mode_index && m.species.is_fermionic() {
                    parity(m.dim())
                } else {
                    CMatrix::identity(m.dim(), m.dim())
                }
            })
            .collect();
        Operator::new(kron_all(&factors), Arc::clone(space), op.grading())
    };
    let strings = species.is_fermionic();
    Ok(ModeOperators {
        species,
        raise: lift(&mode_ops.raise, strings)?,
        lower: lift(&mode_ops.lower, strings)?,
        number: lift(&mode_ops.number, false)?,
    })
}

/// Embeds an arbitrary single-mode operator (no parity string).
pub fn embed_operator(op: &Operator, space: &Arc<SpaceSpec>, mode_index: usize) -> Result<Operator> {
    let target = space.modes().get(mode_index).ok_or(Error::IndexOutOfRange {
        index: mode_index,
        len: space.len(),
    })?;
    if op.dim() != target.dim() {
        return Err(Error::SpaceMismatch);
    }
    let factors: Vec<CMatrix> = space
        .modes()
        .iter()
        .enumerate()
        .map(|(j, m)| {
            if j == mode_index {
                op.matrix().clone()
            } else {
                CMatrix::identity(m.dim(), m.dim())
            }
        })
        .collect();
    Operator::new(kron_all(&factors), Arc::clone(space), op.grading())
}

pub fn commutator(x: &Operator, y: &Operator) -> Result<Operator> {
    if !x.same_space(y) {
        return Err(Error::SpaceMismatch);
    }
    Ok(&(x * y) - &(y * x))
}

pub fn anticommutator(x: &Operator, y: &Operator) -> Result<Operator> {
    if !x.same_space(y) {
        return Err(Error::SpaceMismatch);
    }
    Ok(&(x * y) + &(y * x))
}

/// Lie superbracket `xy - (-1)^{g(x)g(y)} yx`.
pub fn graded_bracket(x: &Operator, y: &Operator) -> Result<Operator> {
    if !x.same_space(y) {
        return Err(Error::SpaceMismatch);
    }
    let (Some(gx), Some(gy)) = (x.grading(), y.grading()) else {
        return Err(Error::UndefinedGrading);
    };
    let out = if gx == Grading::Odd && gy == Grading::Odd {
        anticommutator(x, y)?
    } else {
        commutator(x, y)?
    };
    Ok(out.with_grading(Some(gx + gy)))
}

/// `[T]_Q` by functional calculus on a diagonal `T`.
pub fn qnumber_of_operator(t: &Operator, q: &QParam) -> Result<Operator> {
    let spectrum = t.real_spectrum()?;
    let values = spectrum
        .iter()
        .map(|&x| qnumber_real(x, q))
        .collect::<Result<Vec<_>>>()?;
    Operator::from_diagonal(t.space(), &values)
}

/// Per-mode largest upward occupation shift produced by any matrix element
/// of `op` (zero for modes that are not truncated bosons).
pub fn raise_profile(op: &Operator) -> Vec<usize> {
    let space = op.space();
    let table = space.occupation_table();
    let boson: Vec<usize> = space
        .modes()
        .iter()
        .enumerate()
        .filter(|(_, m)| m.species.is_truncated_boson())
        .map(|(j, _)| j)
        .collect();
    let mut profile = vec![0; space.len()];
    if boson.is_empty() {
        return profile;
    }
    let m = op.matrix();
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return profile;
    }
    let cut = scale * SHIFT_THRESHOLD;
    for col in 0..m.ncols() {
        for (row, z) in m.column(col).iter().enumerate() {
            if z.norm() <= cut {
                continue;
            }
            for &j in &boson {
                let up = table[row][j].saturating_sub(table[col][j]);
                profile[j] = profile[j].max(up);
            }
        }
    }
    profile
}

pub(crate) fn add_profiles(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn max_profiles(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// Largest interior-restricted norm of the brackets between two families.
/// Two odd operators are anticommuted, every other pair commuted.
pub fn commutant_residual(set_a: &[Operator], set_b: &[Operator]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for x in set_a {
        for y in set_b {
            if !x.same_space(y) {
                return Err(Error::SpaceMismatch);
            }
            let both_odd = x.grading() == Some(Grading::Odd) && y.grading() == Some(Grading::Odd);
            let bracket = if both_odd {
                anticommutator(x, y)?
            } else {
                commutator(x, y)?
            };
            let margins = add_profiles(&raise_profile(x), &raise_profile(y));
            let mask = x.space().interior_mask(&margins)?;
            worst = worst.max(bracket.restrict_columns(&mask).norm_fro());
        }
    }
    Ok(worst)
}

/// Generalized Cartan matrix with symmetrizers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    pub matrix: Vec<Vec<i64>>,
    pub symmetrizers: Vec<i64>,
}

impl CartanData {
    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.matrix.first().map_or(0, Vec::len)
    }

    /// `a_{ij}` with 1-based indices.
    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.matrix[i - 1][j - 1]
    }

    /// `d_i`, 1-based.
    pub fn d(&self, i: usize) -> i64 {
        self.symmetrizers[i - 1]
    }

    /// `d_i a_ij = a_ji d_j` on the square block.
    pub fn is_symmetrized(&self) -> bool {
        let n = self.rows().min(self.cols());
        (1..=n).all(|i| (1..=n).all(|j| self.d(i) * self.a(i, j) == self.a(j, i) * self.d(j)))
    }
}

/// Named generator matrices on one shared space.
#[derive(Clone, Debug)]
pub struct GeneratorBinding {
    pub name: String,
    space: Arc<SpaceSpec>,
    generators: BTreeMap<String, Operator>,
    pub cartan: CartanData,
    pub q: Option<QParam>,
}

impl GeneratorBinding {
    pub fn new(name: impl Into<String>, space: Arc<SpaceSpec>, cartan: CartanData, q: Option<QParam>) -> Self {
        GeneratorBinding {
            name: name.into(),
            space,
            generators: BTreeMap::new(),
            cartan,
            q,
        }
    }

    pub fn insert(&mut self, symbol: impl Into<String>, op: Operator) -> Result<()> {
        if **op.space() != *self.space {
            return Err(Error::SpaceMismatch);
        }
        self.generators.insert(symbol.into(), op);
        Ok(())
    }

    pub fn get(&self, symbol: &str) -> Result<&Operator> {
        self.generators
            .get(symbol)
            .ok_or_else(|| Error::UnboundSymbol(symbol.to_string()))
    }

    pub fn space(&self) -> &Arc<SpaceSpec> {
        &self.space
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.generators.keys().map(String::as_str)
    }

    pub fn generators(&self) -> &BTreeMap<String, Operator> {
        &self.generators
    }

    pub fn gradings(&self) -> BTreeMap<String, Option<Grading>> {
        self.generators
            .iter()
            .map(|(k, v)| (k.clone(), v.grading()))
            .collect()
    }

    /// Copy with `symbol` replaced by the zero operator of the same grading.
    pub fn with_zeroed(&self, symbol: &str) -> Result<Self> {
        let old = self.get(symbol)?;
        let mut out = self.clone();
        out.generators
            .insert(symbol.to_string(), Operator::zeros(&self.space, old.grading()));
        Ok(out)
    }
}

/// Helper for building bindings from single-mode factories.
pub fn embed_all(space: &Arc<SpaceSpec>, modes: &[(usize, ModeOperators)]) -> Result<Vec<ModeOperators>> {
    modes.iter().map(|(i, m)| embed(m, space, *i)).collect()
}

pub(crate) fn species_space(species: &[Species]) -> Result<Arc<SpaceSpec>> {
    let mut counters: Vec<(std::mem::Discriminant<Species>, usize)> = Vec::new();
    let modes = species
        .iter()
        .map(|s| {
            let d = std::mem::discriminant(s);
            let label = match counters.iter_mut().find(|(k, _)| *k == d) {
                Some((_, c)) => {
                    *c += 1;
                    *c
                }
                None => {
                    counters.push((d, 1));
                    1
                }
            };
            ModeSpec::new(*s, label)
        })
        .collect();
    SpaceSpec::shared(modes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{
        classical_boson_mode, classical_fermion_mode, diag_power, kfermion_mode, qboson_mode,
        qfermion_mode,
    };
    use crate::qarith::primitive_root;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn two_fermions() -> Vec<ModeOperators> {
        let q = QParam::real(1.3).unwrap();
        let space = species_space(&[Species::QFermion, Species::QFermion]).unwrap();
        let f = qfermion_mode(&q).unwrap();
        vec![embed(&f, &space, 0).unwrap(), embed(&f, &space, 1).unwrap()]
    }

    #[test]
    fn fermion_modes_anticommute() {
        let fs = two_fermions();
        for a in [&fs[0].raise, &fs[0].lower] {
            for b in [&fs[1].raise, &fs[1].lower] {
                assert!(anticommutator(a, b).unwrap().is_zero());
                assert!(anticommutator(b, a).unwrap().is_zero());
            }
        }
        let anti = anticommutator(&fs[1].lower, &fs[1].raise).unwrap();
        assert!((&anti - &Operator::identity(fs[1].space())).is_zero());
    }

    #[test]
    fn boson_number_embedding() {
        let space = species_space(&[Species::QBoson { dim: 2 }, Species::QBoson { dim: 2 }]).unwrap();
        let q = QParam::real(1.5).unwrap();
        let b = qboson_mode(2, &q).unwrap();
        let n1 = embed(&b, &space, 0).unwrap().number;
        assert_eq!(n1.diagonal(), vec![c(0.0), c(0.0), c(1.0), c(1.0)]);
        assert!(n1.is_diagonal());
    }

    #[test]
    fn boson_and_fermion_commute() {
        let q = QParam::real(1.2).unwrap();
        let space = species_space(&[Species::QBoson { dim: 3 }, Species::QFermion]).unwrap();
        let a = embed(&qboson_mode(3, &q).unwrap(), &space, 0).unwrap();
        let f = embed(&qfermion_mode(&q).unwrap(), &space, 1).unwrap();
        for x in [&a.raise, &a.lower, &a.number] {
            for y in [&f.raise, &f.lower, &f.number] {
                assert!(commutator(x, y).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn fermion_strings_skip_bosons() {
        // fermion, boson, fermion: the boson in between must not break anticommutation
        let space = species_space(&[
            Species::ClassicalFermion,
            Species::ClassicalBoson { dim: 3 },
            Species::ClassicalFermion,
        ])
        .unwrap();
        let f = classical_fermion_mode();
        let b = embed(&classical_boson_mode(3).unwrap(), &space, 1).unwrap();
        let f1 = embed(&f, &space, 0).unwrap();
        let f3 = embed(&f, &space, 2).unwrap();
        assert!(anticommutator(&f1.raise, &f3.lower).unwrap().is_zero());
        assert!(commutator(&b.raise, &f3.raise).unwrap().is_zero());
        assert!(commutator(&b.lower, &f1.lower).unwrap().is_zero());
    }

    #[test]
    fn embed_checks() {
        let space = species_space(&[Species::QBoson { dim: 3 }, Species::QFermion]).unwrap();
        let f = classical_fermion_mode();
        assert!(matches!(embed(&f, &space, 0), Err(Error::SpeciesMismatch(_))));
        assert!(matches!(embed(&f, &space, 2), Err(Error::IndexOutOfRange { index: 2, len: 2 })));
        assert!(embed(&f, &space, 1).is_ok());
    }

    #[test]
    fn embedding_preserves_mode_relations() {
        let q = QParam::generic(Complex64::new(0.9, 0.25)).unwrap();
        let root = primitive_root(5).unwrap();
        let species = [
            Species::QBoson { dim: 4 },
            Species::KFermion { k: 5 },
            Species::QFermion,
            Species::ClassicalFermion,
        ];
        let space = species_space(&species).unwrap();
        let single = [
            qboson_mode(4, &q).unwrap(),
            kfermion_mode(5, &root).unwrap(),
            qfermion_mode(&q).unwrap(),
            classical_fermion_mode(),
        ];
        let bases = [q, root, q, q];
        for (i, m) in single.iter().enumerate() {
            let e = embed(m, &space, i).unwrap();
            let rel = |ops: &ModeOperators| -> f64 {
                let base = bases[i];
                let qn = diag_power(base, 1.0, &ops.number).unwrap();
                let ud = &ops.lower * &ops.raise;
                let du = &ops.raise * &ops.lower;
                let coeff = if ops.species.is_fermionic() {
                    -base.value().inv()
                } else {
                    base.value().inv()
                };
                let rhs = match ops.species {
                    Species::ClassicalFermion => Operator::identity(ops.space()),
                    Species::QFermion => diag_power(base, -1.0, &ops.number).unwrap(),
                    _ => qn,
                };
                let coeff = if ops.species == Species::ClassicalFermion { c(-1.0) } else { coeff };
                let defect = &(&ud - &du.scale(coeff)) - &rhs;
                let keep: Vec<bool> = (0..defect.dim())
                    .map(|s| {
                        let occ = ops.space().occupations(s);
                        ops.space()
                            .modes()
                            .iter()
                            .zip(&occ)
                            .all(|(md, &o)| !md.species.is_truncated_boson() || o + 1 < md.dim())
                    })
                    .collect();
                defect.restrict_columns(&keep).norm_fro()
            };
            let single_res = rel(m);
            let embedded_res = rel(&e);
            let copies = (space.total_dim() / m.species.dim()) as f64;
            assert!(
                (embedded_res - single_res * copies.sqrt()).abs() < 1e-12,
                "mode {i}: {single_res} vs {embedded_res}"
            );
            assert!(single_res < 1e-13);
        }
    }

    #[test]
    fn graded_bracket_examples() {
        let f = classical_fermion_mode();
        let b = graded_bracket(&f.lower, &f.raise).unwrap();
        assert!((&b - &Operator::identity(f.space())).is_zero());
        assert_eq!(b.grading(), Some(Grading::Even));
        let x = &f.raise + &f.lower;
        let xx = graded_bracket(&x, &x).unwrap();
        assert!((&xx - &(&x * &x).scale(c(2.0))).is_zero());

        let q = QParam::real(1.4).unwrap();
        let m = qboson_mode(3, &q).unwrap();
        let plain = commutator(&m.raise, &m.lower).unwrap();
        assert!((&graded_bracket(&m.raise, &m.lower).unwrap() - &plain).is_zero());

        let ungraded = (&m.raise + &m.number).with_grading(None);
        assert!(matches!(graded_bracket(&ungraded, &m.raise), Err(Error::UndefinedGrading)));
        assert!(matches!(graded_bracket(&f.raise, &m.raise), Err(Error::SpaceMismatch)));
    }

    #[test]
    fn qnumber_of_operator_examples() {
        let q = QParam::real(2.0).unwrap();
        let space = species_space(&[Species::ClassicalFermion]).unwrap();
        let t = Operator::from_diagonal(&space, &[c(1.0), c(-1.0)]).unwrap();
        assert_eq!(qnumber_of_operator(&t, &q).unwrap().diagonal(), vec![c(1.0), c(-1.0)]);
        let t = Operator::from_diagonal(&space, &[c(0.0), c(2.0)]).unwrap();
        let out = qnumber_of_operator(&t, &q).unwrap();
        assert!((out.diagonal()[1] - c(2.5)).norm() < 1e-15);
        let z = Operator::zeros(&space, Some(Grading::Even));
        assert!(qnumber_of_operator(&z, &q).unwrap().is_zero());
        let m = classical_fermion_mode();
        assert!(matches!(qnumber_of_operator(&m.raise, &q), Err(Error::NotDiagonal)));
    }

    #[test]
    fn commutant_examples() {
        let q = QParam::real(1.3).unwrap();
        let m = qboson_mode(4, &q).unwrap();
        let id = Operator::identity(m.space());
        assert_eq!(commutant_residual(&[id], &[m.raise.clone(), m.lower.clone()]).unwrap(), 0.0);
        assert_eq!(commutant_residual(std::slice::from_ref(&m.number), std::slice::from_ref(&m.number)).unwrap(), 0.0);
        assert!(commutant_residual(std::slice::from_ref(&m.number), std::slice::from_ref(&m.raise)).unwrap() > 0.5);
    }

    #[test]
    fn raise_profiles() {
        let q = QParam::real(1.3).unwrap();
        let space = species_space(&[Species::QBoson { dim: 4 }, Species::QBoson { dim: 4 }]).unwrap();
        let m = qboson_mode(4, &q).unwrap();
        let a1 = embed(&m, &space, 0).unwrap();
        let a2 = embed(&m, &space, 1).unwrap();
        let e = &a1.lower * &a2.raise;
        assert_eq!(raise_profile(&e), vec![0, 1]);
        assert_eq!(raise_profile(&a1.raise.pow(2)), vec![2, 0]);
        assert_eq!(raise_profile(&a1.number), vec![0, 0]);
    }

    #[test]
    fn interior_masks() {
        let space = species_space(&[Species::QBoson { dim: 4 }]).unwrap();
        assert_eq!(space.interior_mask(&[0]).unwrap(), vec![true; 4]);
        assert_eq!(space.interior_mask(&[1]).unwrap(), vec![true, true, true, false]);
        assert!(matches!(
            space.interior_mask(&[4]),
            Err(Error::MarginTooLarge { margin: 4, dim: 4 })
        ));
        let two = species_space(&[Species::QBoson { dim: 3 }, Species::QBoson { dim: 3 }]).unwrap();
        let mask = two.interior_mask(&two.uniform_margins(1)).unwrap();
        assert_eq!(mask.iter().filter(|b| **b).count(), 4);
        let mixed = species_space(&[Species::QBoson { dim: 3 }, Species::QFermion]).unwrap();
        let mask = mixed.interior_mask(&mixed.uniform_margins(2)).unwrap();
        assert_eq!(mask, vec![true, true, false, false, false, false]);
    }

    #[test]
    fn cartan_symmetrized() {
        let c = CartanData {
            matrix: vec![vec![2, -1], vec![-1, 2]],
            symmetrizers: vec![1, 1],
        };
        assert!(c.is_symmetrized());
        assert_eq!(c.a(1, 2), -1);
    }

    fn small_space() -> Arc<SpaceSpec> {
        species_space(&[Species::ClassicalFermion, Species::QBoson { dim: 2 }]).unwrap()
    }

    fn op_from(space: &Arc<SpaceSpec>, v: &[(f64, f64)], g: Grading) -> Operator {
        let dim = space.total_dim();
        let data: Vec<Complex64> = v.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        Operator::new(CMatrix::from_vec(dim, dim, data), Arc::clone(space), Some(g)).unwrap()
    }

    fn grading() -> impl Strategy<Value = Grading> {
        prop_oneof![Just(Grading::Even), Just(Grading::Odd)]
    }

    proptest! {
        #[test]
        fn graded_antisymmetry(
            gx in grading(),
            gy in grading(),
            xs in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16),
            ys in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16),
        ) {
            let space = small_space();
            let x = op_from(&space, &xs, gx);
            let y = op_from(&space, &ys, gy);
            let xy = graded_bracket(&x, &y).unwrap();
            let yx = graded_bracket(&y, &x).unwrap();
            let sign = if gx == Grading::Odd && gy == Grading::Odd { 1.0 } else { -1.0 };
            prop_assert!((&xy - &yx.scale(c(sign))).norm_fro() < 1e-14 * (1.0 + xy.norm_fro()));
            let two_x = x.scale(c(2.0));
            let lin = graded_bracket(&two_x, &y).unwrap();
            prop_assert!((&lin - &xy.scale(c(2.0))).norm_fro() < 1e-13);
        }

        #[test]
        fn operator_qnumber_commutes_with_commutant(
            diag in proptest::collection::vec(-3i32..4, 4),
            block in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16),
            qre in 0.5f64..2.0,
        ) {
            prop_assume!((qre - 1.0).abs() > 0.05);
            let space = species_space(&[Species::ClassicalBoson { dim: 4 }]).unwrap();
            let t_vals: Vec<Complex64> = diag.iter().map(|&d| c(f64::from(d))).collect();
            let t = Operator::from_diagonal(&space, &t_vals).unwrap();
            // keep only the entries of a random matrix that commute with T
            let mut m = CMatrix::zeros(4, 4);
            for i in 0..4 {
                for j in 0..4 {
                    if diag[i] == diag[j] {
                        let (a, b) = block[i * 4 + j];
                        m[(i, j)] = Complex64::new(a, b);
                    }
                }
            }
            let x = Operator::new(m, Arc::clone(&space), Some(Grading::Even)).unwrap();
            prop_assert!(commutator(&t, &x).unwrap().norm_fro() < 1e-14);
            let q = QParam::real(qre).unwrap();
            let qt = qnumber_of_operator(&t, &q).unwrap();
            prop_assert!(commutator(&qt, &x).unwrap().norm_fro() < 1e-13 * (1.0 + qt.norm_fro()));
        }
    }
}
