//! Qudits, superqudits, graded tensor products and two-party entanglement
//! measures.
//!
//! Two-party superqubit tables are stored as a `3x3` grid `y[i][j]` over the
//! basis `||0>, ||1>, ||oe>`; the slot `(i, j)` of a parity-`pi` table holds an
//! element of parity `|i| + |j| + pi`. In the even table that is `x_ij`,
//! `ae_i2`, `ae_2j`, `x_22`; in the odd table `ae_ij`, `x_i2`, `x_2j`, `ae_22`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::grassmann::{Complex, GrassmannElement, Parity, ZERO_THRESHOLD};
use crate::superstate::{inner, SpaceFormat, SuperKet};
use crate::supermatrix::det_even;

/// Allowed deviation of a squared norm from one.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Qudit {
    amps: Vec<Complex>,
}

fn norm_sqr(amps: &[Complex]) -> f64 {
    amps.iter().map(|c| c.norm_sqr()).sum()
}

fn check_normalized(norm_sqr: f64, force: bool) -> Result<()> {
    if norm_sqr == 0.0 {
        return Err(Error::ZeroState);
    }
    let deviation = (norm_sqr - 1.0).abs();
    if deviation > NORMALIZATION_TOLERANCE && !force {
        return Err(Error::NotNormalized {
            deviation,
            tolerance: NORMALIZATION_TOLERANCE,
        });
    }
    Ok(())
}

impl Qudit {
    /// Validates `sum |x_i|^2 = 1`; `force` accepts unnormalized input as is.
    pub fn new(amps: Vec<Complex>, force: bool) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::Dimension { expected: 1, got: 0 });
        }
        check_normalized(norm_sqr(&amps), force)?;
        Ok(Qudit { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Qudit) -> Result<Complex> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// As a body-only even ket of format `(d|0)`.
    pub fn to_ket(&self, n: usize) -> SuperKet {
        SuperKet::from_body(SpaceFormat { r: self.dim(), s: 0 }, n, &self.amps).expect("r = d")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    Normalized,
    /// Accepted through the force flag.
    Forced,
    /// No normalization procedure exists for odd states.
    Undefined,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuperQudit {
    pub ket: SuperKet,
    pub normalization: Normalization,
}

impl SuperQudit {
    /// Even kets must satisfy `<psi||psi> = 1` as a Grassmann element.
    pub fn new(ket: SuperKet, force: bool) -> Result<Self> {
        ket.ensure_homogeneous()?;
        if ket.parity() == Parity::Odd {
            if ket.coords().iter().all(|c| c.is_zero()) {
                return Err(Error::ZeroState);
            }
            return Ok(SuperQudit {
                ket,
                normalization: Normalization::Undefined,
            });
        }
        let norm = inner(&ket, &ket)?;
        if norm.is_zero() {
            return Err(Error::ZeroState);
        }
        let deviation = norm.max_coefficient_diff(&GrassmannElement::one(ket.n()));
        let normalization = if deviation <= NORMALIZATION_TOLERANCE {
            Normalization::Normalized
        } else if force {
            Normalization::Forced
        } else {
            return Err(Error::NotNormalized {
                deviation,
                tolerance: NORMALIZATION_TOLERANCE,
            });
        };
        Ok(SuperQudit { ket, normalization })
    }

    /// Body qudit; the result is checked like any other qudit.
    pub fn body(&self) -> Result<Qudit> {
        Qudit::new(self.ket.body()?, self.normalization == Normalization::Forced)
    }
}

/// Cross-qutrit `(a x b)_i = sum eps_ijk a_j b_k`, unnormalized.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossQutrit {
    pub amps: [Complex; 3],
    pub norm_sqr: f64,
}

pub fn cross_qutrit(a: &Qudit, b: &Qudit) -> Result<CrossQutrit> {
    for q in [a, b] {
        if q.dim() != 3 {
            return Err(Error::Dimension {
                expected: 3,
                got: q.dim(),
            });
        }
    }
    let (x, y) = (a.amps(), b.amps());
    let amps = [
        x[1] * y[2] - x[2] * y[1],
        x[2] * y[0] - x[0] * y[2],
        x[0] * y[1] - x[1] * y[0],
    ];
    Ok(CrossQutrit {
        norm_sqr: norm_sqr(&amps),
        amps,
    })
}

/// General n-party state over graded basis labels.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiState {
    parties: Vec<SpaceFormat>,
    n: usize,
    parity: Parity,
    amps: BTreeMap<Vec<usize>, GrassmannElement>,
}

fn label_parity(parties: &[SpaceFormat], label: &[usize]) -> Parity {
    parties
        .iter()
        .zip(label)
        .fold(Parity::Even, |p, (f, &k)| p + f.slot_parity(k))
}

fn label_string(label: &[usize]) -> String {
    label.iter().map(|k| k.to_string()).collect()
}

impl MultiState {
    /// Missing labels are zero. Each amplitude must have parity
    /// `pi + sum |label|`, and ordinary (all `s = 0`) states must be normalized.
    pub fn new(
        parties: Vec<SpaceFormat>,
        n: usize,
        parity: Parity,
        amps: BTreeMap<Vec<usize>, GrassmannElement>,
        force: bool,
    ) -> Result<Self> {
        if parties.is_empty() {
            return Err(Error::Dimension { expected: 1, got: 0 });
        }
        for (label, y) in &amps {
            if label.len() != parties.len() || label.iter().zip(&parties).any(|(&k, f)| k >= f.dim()) {
                return Err(Error::FormatMismatch(format!(
                    "basis label {} does not fit the party formats",
                    label_string(label)
                )));
            }
            if y.n() != n {
                return Err(Error::FormatMismatch(format!(
                    "amplitude {} over N = {} in a state over N = {n}",
                    label_string(label),
                    y.n()
                )));
            }
            let expected = parity + label_parity(&parties, label);
            if !y.has_parity(expected) {
                return Err(Error::ParityViolation(format!(
                    "amplitude {} of a {parity} state must be {expected}",
                    label_string(label)
                )));
            }
        }
        if amps.values().all(|y| y.is_zero()) {
            return Err(Error::ZeroState);
        }
        if parties.iter().all(|f| f.s == 0) {
            let total: f64 = amps.values().map(|y| y.body().norm_sqr()).sum();
            check_normalized(total, force)?;
        }
        Ok(MultiState {
            parties,
            n,
            parity,
            amps,
        })
    }

    pub fn parties(&self) -> &[SpaceFormat] {
        &self.parties
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn amplitude(&self, label: &[usize]) -> GrassmannElement {
        self.amps.get(label).cloned().unwrap_or_else(|| GrassmannElement::zero(self.n))
    }

    pub fn amplitudes(&self) -> impl Iterator<Item = (&Vec<usize>, &GrassmannElement)> {
        self.amps.iter()
    }

    /// Number of even and odd amplitude slots.
    pub fn slot_counts(&self) -> (usize, usize) {
        let mut counts = (0, 0);
        for label in all_labels(&self.parties) {
            match self.parity + label_parity(&self.parties, &label) {
                Parity::Even => counts.0 += 1,
                Parity::Odd => counts.1 += 1,
            }
        }
        counts
    }

    /// Appends one more party with amplitudes `y_label * psi_k`.
    pub fn tensor(&self, ket: &SuperKet) -> Result<Self> {
        self.tensor_with(ket, TensorSign::Plain)
    }

    pub fn tensor_with(&self, ket: &SuperKet, sign: TensorSign) -> Result<Self> {
        if ket.n() != self.n {
            return Err(Error::FormatMismatch(format!(
                "tensor factors over N = {} and N = {}",
                self.n,
                ket.n()
            )));
        }
        ket.ensure_homogeneous()?;
        let mut parties = self.parties.clone();
        parties.push(ket.format());
        let mut amps = BTreeMap::new();
        for label in all_labels(&self.parties) {
            let y = self.amplitude(&label);
            let y_parity = self.parity + label_parity(&self.parties, &label);
            for (k, c) in ket.coords().iter().enumerate() {
                let mut l = label.clone();
                l.push(k);
                let s = match sign {
                    TensorSign::Plain => 1.0,
                    TensorSign::Koszul => y_parity.sign_with(ket.format().slot_parity(k)),
                };
                amps.insert(l, (&y * c).scale_real(s));
            }
        }
        Ok(MultiState {
            parties,
            n: self.n,
            parity: self.parity + ket.parity(),
            amps,
        })
    }

    /// Grassmannless limit: bodies of the amplitudes on purely even labels.
    pub fn body(&self) -> Result<BTreeMap<Vec<usize>, Complex>> {
        if self.parity != Parity::Even {
            return Err(Error::ParityMismatch {
                expected: Parity::Even,
                got: self.parity,
            });
        }
        Ok(all_labels(&self.parties)
            .into_iter()
            .filter(|l| l.iter().zip(&self.parties).all(|(&k, f)| k < f.r))
            .map(|l| {
                let b = self.amplitude(&l).body();
                (l, b)
            })
            .collect())
    }
}

fn all_labels(parties: &[SpaceFormat]) -> Vec<Vec<usize>> {
    let mut labels = vec![Vec::new()];
    for f in parties {
        labels = labels
            .into_iter()
            .flat_map(|l| {
                (0..f.dim()).map(move |k| {
                    let mut next = l.clone();
                    next.push(k);
                    next
                })
            })
            .collect();
    }
    labels
}

/// Sign attached to the amplitude of `||a> alpha (x) ||b> beta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TensorSign {
    /// `alpha beta`, the expansion written out term by term.
    Plain,
    /// `(-1)^(|alpha| |b|) alpha beta`, from moving `alpha` past `||b>`.
    Koszul,
}

/// `a (x) b` with amplitudes `a_i b_j`, parity `pi_a + pi_b`.
pub fn tensor_states(a: &SuperKet, b: &SuperKet) -> Result<MultiState> {
    tensor_states_with(a, b, TensorSign::Plain)
}

pub fn tensor_states_with(a: &SuperKet, b: &SuperKet, sign: TensorSign) -> Result<MultiState> {
    a.ensure_homogeneous()?;
    let mut amps = BTreeMap::new();
    for (k, c) in a.coords().iter().enumerate() {
        amps.insert(vec![k], c.clone());
    }
    let single = MultiState {
        parties: vec![a.format()],
        n: a.n(),
        parity: a.parity(),
        amps,
    };
    single.tensor_with(b, sign)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableKind {
    Qubit,
    SuperEven,
    SuperOdd,
}

impl TableKind {
    pub fn id(self) -> &'static str {
        match self {
            TableKind::Qubit => "qubit",
            TableKind::SuperEven => "super-even",
            TableKind::SuperOdd => "super-odd",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "qubit" => Ok(TableKind::Qubit),
            "super-even" => Ok(TableKind::SuperEven),
            "super-odd" => Ok(TableKind::SuperOdd),
            other => Err(Error::Parse(format!(
                "unknown table kind `{other}` (expected qubit, super-even or super-odd)"
            ))),
        }
    }

    pub fn dim(self) -> usize {
        if self == TableKind::Qubit {
            2
        } else {
            3
        }
    }

    pub fn parity(self) -> Parity {
        if self == TableKind::SuperOdd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    /// Parity required in slot `(i, j)`.
    pub fn slot_parity(self, i: usize, j: usize) -> Parity {
        let p = |k: usize| Parity::from_bit((k == 2) as u8);
        self.parity() + p(i) + p(j)
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwoPartyTable {
    kind: TableKind,
    n: usize,
    slots: Vec<Vec<GrassmannElement>>,
}

impl TwoPartyTable {
    pub fn new(kind: TableKind, n: usize, slots: Vec<Vec<GrassmannElement>>) -> Result<Self> {
        let d = kind.dim();
        if slots.len() != d || slots.iter().any(|r| r.len() != d) {
            return Err(Error::FormatMismatch(format!("{kind} table needs {d}x{d} slots")));
        }
        for (i, row) in slots.iter().enumerate() {
            for (j, y) in row.iter().enumerate() {
                if y.n() != n {
                    return Err(Error::FormatMismatch(format!(
                        "slot {i}{j} over N = {} in a table over N = {n}",
                        y.n()
                    )));
                }
                if kind == TableKind::Qubit {
                    if !y.soul().is_zero() {
                        return Err(Error::ParityViolation(format!("qubit slot {i}{j} must be a complex number")));
                    }
                } else if !y.has_parity(kind.slot_parity(i, j)) {
                    return Err(Error::ParityViolation(format!(
                        "slot {i}{j} of a {kind} table must be {}",
                        kind.slot_parity(i, j)
                    )));
                }
            }
        }
        Ok(TwoPartyTable { kind, n, slots })
    }

    pub fn qubit(amps: [[Complex; 2]; 2], n: usize) -> Self {
        let slots = amps
            .iter()
            .map(|r| r.iter().map(|&c| GrassmannElement::scalar(n, c)).collect())
            .collect();
        TwoPartyTable {
            kind: TableKind::Qubit,
            n,
            slots,
        }
    }

    /// The Bell table `x00 = x11 = 1/sqrt 2`.
    pub fn bell(n: usize) -> Self {
        let h = Complex::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let z = Complex::new(0.0, 0.0);
        Self::qubit([[h, z], [z, h]], n)
    }

    pub fn from_multistate(state: &MultiState) -> Result<Self> {
        let parties = state.parties();
        let kind = match parties {
            [a, b] if *a == SpaceFormat::SUPERQUBIT && *b == SpaceFormat::SUPERQUBIT => {
                if state.parity() == Parity::Even {
                    TableKind::SuperEven
                } else {
                    TableKind::SuperOdd
                }
            }
            [a, b] if *a == (SpaceFormat { r: 2, s: 0 }) && *b == (SpaceFormat { r: 2, s: 0 }) => TableKind::Qubit,
            _ => {
                return Err(Error::FormatMismatch(
                    "two-party tables need two (2|1) or two (2|0) parties".into(),
                ))
            }
        };
        let d = kind.dim();
        let slots = (0..d)
            .map(|i| (0..d).map(|j| state.amplitude(&[i, j])).collect())
            .collect();
        Self::new(kind, state.n(), slots)
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn slot(&self, i: usize, j: usize) -> &GrassmannElement {
        &self.slots[i][j]
    }

    pub fn slots(&self) -> &[Vec<GrassmannElement>] {
        &self.slots
    }

    /// Complex `2x2` amplitudes of a qubit table.
    pub fn qubit_amps(&self) -> Result<[[Complex; 2]; 2]> {
        if self.kind != TableKind::Qubit {
            return Err(Error::FormatMismatch(format!("expected a qubit table, got {}", self.kind)));
        }
        let b = |i: usize, j: usize| self.slots[i][j].body();
        Ok([[b(0, 0), b(0, 1)], [b(1, 0), b(1, 1)]])
    }

    /// Bodies of the `x_ij` block, defined for even tables.
    pub fn body(&self) -> Result<[[Complex; 2]; 2]> {
        if self.kind == TableKind::SuperOdd {
            return Err(Error::ParityMismatch {
                expected: Parity::Even,
                got: Parity::Odd,
            });
        }
        let b = |i: usize, j: usize| self.slots[i][j].body();
        Ok([[b(0, 0), b(0, 1)], [b(1, 0), b(1, 1)]])
    }

    /// Sum of squared body moduli over all slots.
    fn body_norm_sqr(&self) -> f64 {
        self.slots.iter().flatten().map(|y| y.body().norm_sqr()).sum()
    }
}

/// `f = det x_ij`, `f0 = det(x_ij x22 + ae_i2 ae_2j)` or
/// `f1 = det(ae_ij ae22 - x_i2 x_2j)` according to the table kind.
pub fn witness(t: &TwoPartyTable) -> Result<GrassmannElement> {
    let n = t.n;
    let y = |i: usize, j: usize| &t.slots[i][j];
    let rows: Vec<Vec<GrassmannElement>> = match t.kind {
        TableKind::Qubit => (0..2).map(|i| (0..2).map(|j| y(i, j).clone()).collect()).collect(),
        TableKind::SuperEven => (0..2)
            .map(|i| (0..2).map(|j| &(y(i, j) * y(2, 2)) + &(y(i, 2) * y(2, j))).collect())
            .collect(),
        TableKind::SuperOdd => (0..2)
            .map(|i| (0..2).map(|j| &(y(i, j) * y(2, 2)) - &(y(i, 2) * y(2, j))).collect())
            .collect(),
    };
    det_even(&rows, n)
}

/// Witness of a table whose kind must be `expected`.
pub fn witness_for(t: &TwoPartyTable, expected: TableKind) -> Result<GrassmannElement> {
    if (t.kind == TableKind::Qubit) != (expected == TableKind::Qubit) {
        return Err(Error::FormatMismatch(format!("expected a {expected} table, got a {} table", t.kind)));
    }
    if t.kind != expected {
        return Err(Error::ParityMismatch {
            expected: expected.parity(),
            got: t.kind.parity(),
        });
    }
    witness(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Exact for qubit tables.
    RankOne,
    /// Witness and body rank test: necessary conditions only.
    NecessaryConditions,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Separability {
    pub separable: bool,
    pub verdict: Verdict,
}

fn rank_one(m: &[Vec<Complex>], tol: f64) -> bool {
    let d = m.len();
    for i in 0..d {
        for k in i + 1..d {
            for j in 0..d {
                for l in j + 1..d {
                    if (m[i][j] * m[k][l] - m[i][l] * m[k][j]).norm() > tol {
                        return false;
                    }
                }
            }
        }
    }
    true
}

pub fn is_separable(t: &TwoPartyTable, tol: f64) -> Result<Separability> {
    let bodies: Vec<Vec<Complex>> = t.slots.iter().map(|r| r.iter().map(|y| y.body()).collect()).collect();
    let body_ok = rank_one(&bodies, tol);
    Ok(match t.kind {
        TableKind::Qubit => Separability {
            separable: body_ok,
            verdict: Verdict::RankOne,
        },
        _ => Separability {
            separable: body_ok && witness(t)?.norm_r() <= tol,
            verdict: Verdict::NecessaryConditions,
        },
    })
}

fn ensure_measure_normalized(t: &TwoPartyTable, force: bool) -> Result<()> {
    check_normalized(t.body_norm_sqr(), force)
}

/// `C = 2 |det x_ij|`.
pub fn concurrence(t: &TwoPartyTable, force: bool) -> Result<f64> {
    t.qubit_amps()?;
    ensure_measure_normalized(t, force)?;
    Ok(2.0 * witness(t)?.body().norm())
}

/// `tau = 4 f conj(f)`, evaluated as the square of the concurrence.
pub fn tangle(t: &TwoPartyTable, force: bool) -> Result<f64> {
    let c = concurrence(t, force)?;
    Ok(c * c)
}

/// `2 ||f^(pi)||_R` for a super table of parity `pi`.
pub fn superconcurrence(t: &TwoPartyTable, parity: Parity) -> Result<f64> {
    let expected = match parity {
        Parity::Even => TableKind::SuperEven,
        Parity::Odd => TableKind::SuperOdd,
    };
    Ok(2.0 * witness_for(t, expected)?.norm_r())
}

#[derive(Clone, Debug, PartialEq)]
pub enum Supertangle {
    /// `tau^(0)` solved from `tau x22 x22^# = 4 f f^#`.
    Value(GrassmannElement),
    /// Both sides of `tau ae22 ae22^# = 4 f f^#`; `solvable` records whether
    /// some even `tau` satisfies the relation.
    ImplicitOnly {
        factor: GrassmannElement,
        rhs: GrassmannElement,
        solvable: bool,
    },
}

pub fn supertangle(t: &TwoPartyTable, parity: Parity) -> Result<Supertangle> {
    let expected = match parity {
        Parity::Even => TableKind::SuperEven,
        Parity::Odd => TableKind::SuperOdd,
    };
    let f = witness_for(t, expected)?;
    let rhs = (&f * &f.superstar()?).scale_real(4.0);
    let y22 = t.slot(2, 2);
    let factor = y22 * &y22.superstar()?;
    match parity {
        Parity::Even => {
            if !factor.is_invertible() {
                return Err(Error::UndefinedTangle {
                    factor: factor.to_string(),
                    rhs: rhs.to_string(),
                });
            }
            Ok(Supertangle::Value(&rhs * &factor.inverse()?))
        }
        Parity::Odd => Ok(Supertangle::ImplicitOnly {
            solvable: solve_even_multiplier(&factor, &rhs).is_some(),
            factor,
            rhs,
        }),
    }
}

/// Some even `tau` with `tau * factor = rhs`, found by elimination over the
/// even-monomial coefficients.
pub fn solve_even_multiplier(factor: &GrassmannElement, rhs: &GrassmannElement) -> Option<GrassmannElement> {
    use crate::grassmann::Monomial;
    let n = factor.n();
    let unknowns: Vec<Monomial> = (0..1u64 << n)
        .map(Monomial::from_bits)
        .filter(|m| m.parity() == Parity::Even)
        .collect();
    let rows = 1usize << n;
    // column c is the image of the c-th even monomial
    let mut a = vec![vec![Complex::new(0.0, 0.0); unknowns.len() + 1]; rows];
    for (c, &m) in unknowns.iter().enumerate() {
        let image = &GrassmannElement::from_terms(n, [(m, Complex::new(1.0, 0.0))]).ok()? * factor;
        for (mono, coef) in image.terms() {
            a[mono.bits() as usize][c] = coef;
        }
    }
    for (mono, coef) in rhs.terms() {
        a[mono.bits() as usize][unknowns.len()] = coef;
    }
    let cols = unknowns.len();
    let scale = a.iter().flatten().map(|c| c.norm()).fold(1.0, f64::max);
    let eps = 1e-10 * scale;
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm())) else {
            break;
        };
        if a[p][col].norm() <= eps {
            continue;
        }
        a.swap(row, p);
        let inv = a[row][col].inv();
        for v in a[row].iter_mut() {
            *v *= inv;
        }
        for r in 0..rows {
            if r != row {
                let factor = a[r][col];
                if factor.norm() > ZERO_THRESHOLD {
                    for k in 0..=cols {
                        let v = a[row][k];
                        a[r][k] -= factor * v;
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    if a[row..].iter().any(|r| r[cols].norm() > eps) {
        return None;
    }
    let terms = pivots.iter().enumerate().map(|(r, &c)| (unknowns[c], a[r][cols]));
    GrassmannElement::from_terms(n, terms).ok()
}
