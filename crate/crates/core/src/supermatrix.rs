//! Parity-aware `(p|q)` block matrices over the Grassmann algebra.
//!
//! Rows and columns `0..p` are even, `p..p+q` odd. A matrix of degree `d`
//! holds at `(i, j)` only elements of parity `d + |i| + |j|`; this is checked
//! by [`SuperMatrix::validate`] and enforced by the operations that depend on
//! the block layout.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grassmann::{Complex, GrassmannElement, Parity, ZERO_THRESHOLD};

/// Largest square size accepted by the Leibniz determinant.
pub const DET_SIZE_BOUND: usize = 6;

/// Term-norm threshold at which the exponential series stops.
pub const EXP_TOLERANCE: f64 = 1e-13;

/// Hard cap on the number of exponential series terms.
pub const EXP_MAX_TERMS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SuperFormat {
    pub p: usize,
    pub q: usize,
}

impl SuperFormat {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p + q == 0 {
            return Err(Error::FormatMismatch("format (0|0) is empty".into()));
        }
        Ok(SuperFormat { p, q })
    }

    pub fn dim(self) -> usize {
        self.p + self.q
    }

    /// Parity of row/column `i`.
    pub fn index_parity(self, i: usize) -> Parity {
        if i < self.p {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for SuperFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|{})", self.p, self.q)
    }
}

/// An entry whose parity disagrees with the block layout.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub row: usize,
    pub col: usize,
    pub expected: Parity,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuperMatrix {
    format: SuperFormat,
    parity: Parity,
    n: usize,
    entries: Vec<GrassmannElement>,
}

/// Output of [`SuperMatrix::split`].
#[derive(Clone, Debug, PartialEq)]
pub struct Split {
    pub body: SuperMatrix,
    pub soul: SuperMatrix,
    pub even_part: SuperMatrix,
    pub odd_part: SuperMatrix,
}

impl SuperMatrix {
    pub fn new(
        format: SuperFormat,
        parity: Parity,
        n: usize,
        rows: Vec<Vec<GrassmannElement>>,
    ) -> Result<Self> {
        let dim = format.dim();
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::FormatMismatch(format!(
                "{format} matrix needs {dim}x{dim} entries"
            )));
        }
        if let Some(bad) = rows.iter().flatten().find(|e| e.n() != n) {
            return Err(Error::FormatMismatch(format!(
                "entry over N = {} in a matrix over N = {n}",
                bad.n()
            )));
        }
        Ok(SuperMatrix {
            format,
            parity,
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn zero(format: SuperFormat, parity: Parity, n: usize) -> Self {
        SuperMatrix {
            format,
            parity,
            n,
            entries: vec![GrassmannElement::zero(n); format.dim() * format.dim()],
        }
    }

    pub fn identity(format: SuperFormat, n: usize) -> Self {
        let mut m = Self::zero(format, Parity::Even, n);
        for i in 0..format.dim() {
            m.set(i, i, GrassmannElement::one(n));
        }
        m
    }

    /// Body-only degree-0 matrix from complex rows.
    pub fn from_complex(format: SuperFormat, n: usize, rows: &[Vec<Complex>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&c| GrassmannElement::scalar(n, c)).collect())
            .collect();
        Self::new(format, Parity::Even, n, rows)
    }

    pub fn from_fn(
        format: SuperFormat,
        parity: Parity,
        n: usize,
        mut f: impl FnMut(usize, usize) -> GrassmannElement,
    ) -> Self {
        let dim = format.dim();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        SuperMatrix {
            format,
            parity,
            n,
            entries,
        }
    }

    pub fn format(&self) -> SuperFormat {
        self.format
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.format.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> &GrassmannElement {
        &self.entries[i * self.dim() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: GrassmannElement) {
        let dim = self.dim();
        self.entries[i * dim + j] = value;
    }

    pub fn rows(&self) -> Vec<Vec<GrassmannElement>> {
        self.entries.chunks(self.dim()).map(|r| r.to_vec()).collect()
    }

    /// Same entries under a different declared degree.
    pub fn with_parity(mut self, parity: Parity) -> Self {
        self.parity = parity;
        self
    }

    /// Parity an entry at `(i, j)` must have.
    pub fn expected_parity(&self, i: usize, j: usize) -> Parity {
        self.parity + self.format.index_parity(i) + self.format.index_parity(j)
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let expected = self.expected_parity(i, j);
                if !self.get(i, j).has_parity(expected) {
                    out.push(Violation {
                        row: i,
                        col: j,
                        expected,
                    });
                }
            }
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        match self.validate().first() {
            None => Ok(()),
            Some(v) => Err(Error::ParityViolation(format!(
                "inhomogeneous matrix: entry ({}, {}) of a degree-{} {} matrix must be {}",
                v.row,
                v.col,
                self.parity.bit(),
                self.format,
                v.expected
            ))),
        }
    }

    fn ensure_even(&self, what: &str) -> Result<()> {
        if self.parity != Parity::Even {
            return Err(Error::ParityViolation(format!(
                "{what} is defined for degree-0 matrices only"
            )));
        }
        self.ensure_valid()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.format != other.format || self.n != other.n {
            return Err(Error::FormatMismatch(format!(
                "{} over N = {} vs {} over N = {}",
                self.format, self.n, other.format, other.n
            )));
        }
        Ok(())
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&GrassmannElement, &GrassmannElement) -> GrassmannElement,
    ) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(SuperMatrix {
            format: self.format,
            parity: self.parity,
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    fn map(&self, f: impl Fn(usize, usize, &GrassmannElement) -> GrassmannElement) -> Self {
        Self::from_fn(self.format, self.parity, self.n, |i, j| f(i, j, self.get(i, j)))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: Complex) -> Self {
        self.map(|_, _, e| e.scale(c))
    }

    /// Left multiplication by a homogeneous Grassmann scalar. An odd scalar
    /// passes the basis vector of each row, which signs the odd rows.
    pub fn scale_left(&self, a: &GrassmannElement) -> Result<Self> {
        let pa = a.parity()?;
        let mut out = self.map(|i, _, e| {
            let sign = pa.sign_with(self.format.index_parity(i));
            (a * e).scale_real(sign)
        });
        out.parity = self.parity + pa;
        Ok(out)
    }

    /// Row-by-column product; the degree of the result is the sum of degrees.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let dim = self.dim();
        Ok(Self::from_fn(self.format, self.parity + other.parity, self.n, |i, j| {
            let mut acc = GrassmannElement::zero(self.n);
            for k in 0..dim {
                acc += &(self.get(i, k) * other.get(k, j));
            }
            acc
        }))
    }

    /// Largest `norm_r` over the entries.
    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_r()).fold(0.0, f64::max)
    }

    pub fn max_coefficient_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.max_coefficient_diff(b))
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.format == other.format
            && self.n == other.n
            && self.max_coefficient_diff(other) <= tol
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Body/soul parts and the even-block/odd-block masks.
    pub fn split(&self) -> Split {
        let body = self.map(|i, j, e| {
            if self.expected_parity(i, j) == Parity::Even {
                GrassmannElement::scalar(self.n, e.body())
            } else {
                GrassmannElement::zero(self.n)
            }
        });
        let soul = self.try_sub(&body).expect("same format");
        let mask = |keep_diagonal: bool| {
            self.map(|i, j, e| {
                let diagonal = self.format.index_parity(i) == self.format.index_parity(j);
                if diagonal == keep_diagonal {
                    e.clone()
                } else {
                    GrassmannElement::zero(self.n)
                }
            })
        };
        Split {
            body,
            soul,
            even_part: mask(true),
            odd_part: mask(false),
        }
    }

    /// Entrywise body as ordinary complex rows.
    pub fn body_rows(&self) -> Vec<Vec<Complex>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.get(i, j).body()).collect())
            .collect()
    }

    /// Sign taking `M[i][j]` to position `(j, i)` of the supertranspose.
    fn supertranspose_sign(&self, i: usize, j: usize) -> f64 {
        let a = self.format.index_parity(i);
        let b = self.format.index_parity(j);
        let d = self.parity;
        // exponent |i||j| + |j|(1 + d) + |i| d
        let exponent = (a.bit() & b.bit()) ^ (b.bit() & (1 ^ d.bit())) ^ (a.bit() & d.bit());
        if exponent == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Supertranspose: `[[A^T, C^T], [-B^T, D^T]]` in degree 0 and
    /// `[[A^T, -C^T], [B^T, D^T]]` in degree 1.
    pub fn supertranspose(&self) -> Result<Self> {
        self.ensure_valid()?;
        Ok(self.supertranspose_unchecked())
    }

    fn supertranspose_unchecked(&self) -> Self {
        Self::from_fn(self.format, self.parity, self.n, |j, i| {
            self.get(i, j).scale_real(self.supertranspose_sign(i, j))
        })
    }

    /// Inverse of [`supertranspose`](Self::supertranspose).
    pub fn inverse_supertranspose(&self) -> Result<Self> {
        self.ensure_valid()?;
        Ok(Self::from_fn(self.format, self.parity, self.n, |i, j| {
            self.get(j, i).scale_real(self.supertranspose_sign(i, j))
        }))
    }

    /// `tr A - tr D` in degree 0, `tr A + tr D` in degree 1.
    pub fn supertrace(&self) -> Result<GrassmannElement> {
        self.ensure_valid()?;
        let mut acc = GrassmannElement::zero(self.n);
        for i in 0..self.dim() {
            let sign = match (self.parity, self.format.index_parity(i)) {
                (Parity::Even, Parity::Odd) => -1.0,
                _ => 1.0,
            };
            acc += &self.get(i, i).scale_real(sign);
        }
        Ok(acc)
    }

    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Vec<Vec<GrassmannElement>> {
        rows.map(|i| cols.clone().map(|j| self.get(i, j).clone()).collect())
            .collect()
    }

    /// Inverse of a degree-0 matrix: body inverse followed by the finite
    /// Neumann series of the nilpotent remainder.
    pub fn inverse(&self) -> Result<Self> {
        self.ensure_even("inverse")?;
        let n = self.n;
        let body = self.body_rows();
        let body_inv = invert_complex(&body).ok_or_else(|| {
            Error::Noninvertible(format!("body of the {} matrix is singular", self.format))
        })?;
        let body_inv = Self::from_complex(self.format, n, &body_inv)?;
        let body_m = Self::from_complex(self.format, n, &body)?;
        // M = Mb (I + X) with X = Mb^-1 Ms nilpotent
        let x = body_inv.try_mul(&self.try_sub(&body_m)?)?;
        let id = Self::identity(self.format, n);
        let neg_x = x.scale(Complex::new(-1.0, 0.0));
        let mut series = id.clone();
        let mut power = id;
        for _ in 0..n {
            power = power.try_mul(&neg_x)?;
            if power.is_zero() {
                break;
            }
            series = series.try_add(&power)?;
        }
        series.try_mul(&body_inv)
    }

    /// `det(A - B D^-1 C) (det D)^-1`, defined for degree 0 with invertible `D`.
    pub fn berezinian(&self) -> Result<GrassmannElement> {
        self.ensure_even("the Berezinian")?;
        let SuperFormat { p, q } = self.format;
        let dim = p + q;
        let n = self.n;
        let a = self.block(0..p, 0..p);
        if q == 0 {
            return det_even(&a, n);
        }
        let d = SuperMatrix::new(SuperFormat { p: q, q: 0 }, Parity::Even, n, self.block(p..dim, p..dim))?;
        let d_inv = d.inverse().map_err(|_| {
            Error::Noninvertible("Berezinian undefined: body of the D block is singular".into())
        })?;
        let det_d_inv = det_even(&d.rows(), n)?.inverse()?;
        if p == 0 {
            return Ok(det_d_inv);
        }
        let b = self.block(0..p, p..dim);
        let c = self.block(p..dim, 0..p);
        let mut schur = a;
        for (i, row) in schur.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                let mut acc = GrassmannElement::zero(n);
                for k in 0..q {
                    for l in 0..q {
                        acc += &(&(&b[i][k] * d_inv.get(k, l)) * &c[l][j]);
                    }
                }
                *entry = &*entry - &acc;
            }
        }
        Ok(&det_even(&schur, n)? * &det_d_inv)
    }

    /// Exponential series of a degree-0 matrix.
    pub fn exp(&self) -> Result<Self> {
        self.ensure_even("the exponential")?;
        let mut sum = Self::identity(self.format, self.n);
        let mut term = sum.clone();
        let mut last_norm = f64::INFINITY;
        for k in 1..EXP_MAX_TERMS {
            term = term.try_mul(self)?.scale(Complex::new(1.0 / k as f64, 0.0));
            sum = sum.try_add(&term)?;
            let norm = term.norm();
            if norm < EXP_TOLERANCE * sum.norm().max(1.0) {
                return Ok(sum);
            }
            last_norm = norm;
        }
        Err(Error::Numeric(format!(
            "exponential series did not converge in {EXP_MAX_TERMS} terms (last term norm {last_norm:e})"
        )))
    }

    pub fn superstar(&self) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.superstar())
            .collect::<Result<Vec<_>>>()?;
        Ok(SuperMatrix {
            format: self.format,
            parity: self.parity,
            n: self.n,
            entries,
        })
    }

    /// Superadjoint: entrywise superstar followed by the inverse supertranspose.
    /// This is the sign arrangement for which
    /// `<T phi||psi> = (-1)^(pi_phi pi_T) <phi||T^+ psi>` holds under the
    /// graded inner product used by `superstate`.
    pub fn superadjoint(&self) -> Result<Self> {
        self.ensure_valid()?;
        self.superstar()?.inverse_supertranspose()
    }

    /// The literal `(M^#)^sT` composition, kept for comparison with
    /// [`superadjoint`](Self::superadjoint).
    pub fn superstar_supertranspose(&self) -> Result<Self> {
        self.ensure_valid()?;
        self.superstar()?.supertranspose()
    }

    /// Same entries in a larger algebra.
    pub fn embed(&self, n: usize) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.embed(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(SuperMatrix {
            format: self.format,
            parity: self.parity,
            n,
            entries,
        })
    }
}

impl fmt::Display for SuperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} degree {}", self.format, self.parity.bit())?;
        for row in self.entries.chunks(self.dim()) {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Leibniz determinant over the commutative even subalgebra.
pub fn det_even(rows: &[Vec<GrassmannElement>], n: usize) -> Result<GrassmannElement> {
    let size = rows.len();
    if rows.iter().any(|r| r.len() != size) {
        return Err(Error::FormatMismatch("determinant needs a square array".into()));
    }
    if size > DET_SIZE_BOUND {
        return Err(Error::SizeBound {
            size,
            bound: DET_SIZE_BOUND,
        });
    }
    for (i, row) in rows.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if e.n() != n {
                return Err(Error::FormatMismatch(format!(
                    "entry ({i}, {j}) over N = {} in a determinant over N = {n}",
                    e.n()
                )));
            }
            if !e.has_parity(Parity::Even) {
                return Err(Error::ParityViolation(format!(
                    "determinant entry ({i}, {j}) is not even"
                )));
            }
        }
    }
    let mut total = GrassmannElement::zero(n);
    for (perm, sign) in permutations(size) {
        let mut prod = GrassmannElement::real(n, sign);
        for (i, &j) in perm.iter().enumerate() {
            prod = &prod * &rows[i][j];
            if prod.is_zero() {
                break;
            }
        }
        total += &prod;
    }
    Ok(total)
}

/// All permutations of `0..k` with their signs (Heap's algorithm).
fn permutations(k: usize) -> Vec<(Vec<usize>, f64)> {
    let mut perm: Vec<usize> = (0..k).collect();
    let mut out = vec![(perm.clone(), 1.0)];
    let mut counters = vec![0usize; k];
    let mut sign = 1.0;
    let mut i = 1;
    while i < k {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            sign = -sign;
            out.push((perm.clone(), sign));
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    out
}

/// Gauss-Jordan inverse with partial pivoting; `None` when singular.
pub(crate) fn invert_complex(m: &[Vec<Complex>]) -> Option<Vec<Vec<Complex>>> {
    let k = m.len();
    let scale = m
        .iter()
        .flatten()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
        .max(1.0);
    let mut a: Vec<Vec<Complex>> = m.to_vec();
    let mut inv: Vec<Vec<Complex>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { Complex::new(1.0, 0.0) } else { Complex::default() })
                .collect()
        })
        .collect();
    for col in 0..k {
        let pivot = (col..k).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))?;
        if a[pivot][col].norm() <= 1e-12 * scale {
            return None;
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].inv();
        for j in 0..k {
            a[col][j] *= p;
            inv[col][j] *= p;
        }
        for r in 0..k {
            if r != col {
                let factor = a[r][col];
                if factor.norm() > ZERO_THRESHOLD {
                    for j in 0..k {
                        let (ac, ic) = (a[col][j], inv[col][j]);
                        a[r][j] -= factor * ac;
                        inv[r][j] -= factor * ic;
                    }
                }
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    fn theta(n: usize, i: usize) -> GrassmannElement {
        GrassmannElement::generator(n, i).unwrap()
    }

    fn g(n: usize, x: f64) -> GrassmannElement {
        GrassmannElement::real(n, x)
    }

    const F11: SuperFormat = SuperFormat { p: 1, q: 1 };

    #[test]
    fn validate_reports_offending_entries() {
        let n = 2;
        let mut m = SuperMatrix::identity(F11, n);
        assert!(m.validate().is_empty());
        m.set(0, 0, theta(n, 1));
        assert_eq!(
            m.validate(),
            vec![Violation {
                row: 0,
                col: 0,
                expected: Parity::Even
            }]
        );
        // degree 1 with even elements only in B and C
        let odd = SuperMatrix::new(
            F11,
            Parity::Odd,
            n,
            vec![vec![theta(n, 1), g(n, 2.0)], vec![g(n, 3.0), theta(n, 2)]],
        )
        .unwrap();
        assert!(odd.validate().is_empty());
    }

    #[test]
    fn product_examples() {
        let n = 2;
        let m = SuperMatrix::new(
            F11,
            Parity::Even,
            n,
            vec![vec![g(n, 1.0), theta(n, 1)], vec![theta(n, 2), g(n, 1.0)]],
        )
        .unwrap();
        let id = SuperMatrix::identity(F11, n);
        assert_eq!(m.try_mul(&id).unwrap(), m);
        let odd = SuperMatrix::new(
            F11,
            Parity::Odd,
            n,
            vec![vec![theta(n, 1), g(n, 2.0)], vec![g(n, 3.0), theta(n, 2)]],
        )
        .unwrap();
        let prod = odd.try_mul(&odd).unwrap();
        assert_eq!(prod.parity(), Parity::Even);
        assert!(prod.validate().is_empty());
        let other = SuperMatrix::identity(SuperFormat { p: 2, q: 1 }, n);
        assert!(matches!(m.try_mul(&other), Err(Error::FormatMismatch(_))));
    }

    #[test]
    fn split_example() {
        let n = 2;
        let a = &g(n, 2.0) + &(&theta(n, 1) * &theta(n, 2));
        let m = SuperMatrix::new(
            F11,
            Parity::Even,
            n,
            vec![vec![a, theta(n, 1)], vec![theta(n, 2), g(n, 3.0)]],
        )
        .unwrap();
        let s = m.split();
        assert_eq!(s.body, SuperMatrix::from_complex(F11, n, &[vec![c(2.0), c(0.0)], vec![c(0.0), c(3.0)]]).unwrap());
        assert_eq!(s.body.try_add(&s.soul).unwrap(), m);
        assert_eq!(s.even_part.try_add(&s.odd_part).unwrap(), m);
        let z = SuperMatrix::zero(F11, Parity::Even, n).split();
        assert!(z.body.is_zero() && z.soul.is_zero() && z.even_part.is_zero() && z.odd_part.is_zero());
    }

    #[test]
    fn supertranspose_examples() {
        let n = 2;
        let (a, beta, gamma, d) = (g(n, 5.0), theta(n, 1), theta(n, 2), g(n, 7.0));
        let m = SuperMatrix::new(
            F11,
            Parity::Even,
            n,
            vec![vec![a.clone(), beta.clone()], vec![gamma.clone(), d.clone()]],
        )
        .unwrap();
        let expected = SuperMatrix::new(F11, Parity::Even, n, vec![vec![a, gamma], vec![-&beta, d]]).unwrap();
        assert_eq!(m.supertranspose().unwrap(), expected);
        let mut x = m.clone();
        for _ in 0..4 {
            x = x.supertranspose().unwrap();
        }
        assert_eq!(x, m);
        assert_ne!(m.supertranspose().unwrap().supertranspose().unwrap(), m);
        assert_eq!(m.inverse_supertranspose().unwrap().supertranspose().unwrap(), m);
    }

    #[test]
    fn supertrace_examples() {
        let n = 2;
        let m = SuperMatrix::from_complex(F11, n, &[vec![c(4.0), c(0.0)], vec![c(0.0), c(1.5)]]).unwrap();
        assert_eq!(m.supertrace().unwrap(), g(n, 2.5));
        let odd = SuperMatrix::new(
            F11,
            Parity::Odd,
            n,
            vec![vec![theta(n, 1), g(n, 2.0)], vec![g(n, 3.0), theta(n, 2)]],
        )
        .unwrap();
        assert_eq!(odd.supertrace().unwrap(), &theta(n, 1) + &theta(n, 2));
        assert!(SuperMatrix::zero(F11, Parity::Even, n).supertrace().unwrap().is_zero());
    }

    #[test]
    fn det_even_examples() {
        let n = 2;
        let rows = vec![vec![g(n, 1.0), g(n, 2.0)], vec![g(n, 3.0), g(n, 4.0)]];
        assert_eq!(det_even(&rows, n).unwrap(), g(n, -2.0));
        let s = &g(n, 1.0) + &(&theta(n, 1) * &theta(n, 2));
        let tri = vec![vec![s.clone(), g(n, 0.0)], vec![g(n, 0.0), g(n, 1.0)]];
        assert_eq!(det_even(&tri, n).unwrap(), s);
        let bad = vec![vec![theta(n, 1)]];
        assert!(matches!(det_even(&bad, n), Err(Error::ParityViolation(_))));
        let big = vec![vec![g(n, 0.0); 7]; 7];
        assert!(matches!(det_even(&big, n), Err(Error::SizeBound { .. })));
    }

    #[test]
    fn permutation_signs() {
        let perms = permutations(4);
        assert_eq!(perms.len(), 24);
        for (p, s) in perms {
            let mut inversions = 0;
            for i in 0..4 {
                for j in i + 1..4 {
                    if p[i] > p[j] {
                        inversions += 1;
                    }
                }
            }
            assert_eq!(s, if inversions % 2 == 0 { 1.0 } else { -1.0 });
        }
    }

    #[test]
    fn inverse_examples() {
        let n = 2;
        let f = SuperFormat { p: 2, q: 0 };
        let id = SuperMatrix::identity(f, n);
        assert_eq!(id.inverse().unwrap(), id);
        let d = SuperMatrix::from_complex(f, n, &[vec![c(2.0), c(0.0)], vec![c(0.0), c(4.0)]]).unwrap();
        let di = SuperMatrix::from_complex(f, n, &[vec![c(0.5), c(0.0)], vec![c(0.0), c(0.25)]]).unwrap();
        assert_eq!(d.inverse().unwrap(), di);
        let sing = SuperMatrix::from_complex(f, n, &[vec![c(1.0), c(2.0)], vec![c(2.0), c(4.0)]]).unwrap();
        assert!(matches!(sing.inverse(), Err(Error::Noninvertible(_))));
    }

    #[test]
    fn berezinian_one_one_closed_form() {
        let n = 2;
        let (a, d) = (g(n, 3.0), g(n, 2.0));
        let (beta, gamma) = (theta(n, 1), theta(n, 2));
        let m = SuperMatrix::new(
            F11,
            Parity::Even,
            n,
            vec![vec![a, beta.clone()], vec![gamma.clone(), d]],
        )
        .unwrap();
        // a/d - beta gamma / d^2
        let expected = &g(n, 1.5) - &(&beta * &gamma).scale_real(0.25);
        assert!(m.berezinian().unwrap().approx_eq(&expected, 1e-15));
        assert_eq!(SuperMatrix::identity(F11, n).berezinian().unwrap(), g(n, 1.0));
        let sing = SuperMatrix::new(
            F11,
            Parity::Even,
            n,
            vec![vec![g(n, 1.0), beta], vec![gamma, &theta(n, 1) * &theta(n, 2)]],
        )
        .unwrap();
        assert!(matches!(sing.berezinian(), Err(Error::Noninvertible(_))));
    }

    #[test]
    fn exp_examples() {
        let n = 2;
        let z = SuperMatrix::zero(F11, Parity::Even, n);
        assert_eq!(z.exp().unwrap(), SuperMatrix::identity(F11, n));
        // nilpotent S: exp S = I + S + S^2/2 exactly
        let s = SuperMatrix::new(
            F11,
            Parity::Even,
            n,
            vec![vec![g(n, 0.0), theta(n, 1)], vec![theta(n, 2), g(n, 0.0)]],
        )
        .unwrap();
        let s2 = s.try_mul(&s).unwrap();
        let expected = SuperMatrix::identity(F11, n)
            .try_add(&s)
            .unwrap()
            .try_add(&s2.scale(c(0.5)))
            .unwrap();
        assert!(s.exp().unwrap().approx_eq(&expected, 1e-15));
        let odd = s.clone().with_parity(Parity::Odd);
        assert!(odd.exp().is_err());
    }

    #[test]
    fn superadjoint_of_identity_and_body() {
        let n = 2;
        let id = SuperMatrix::identity(F11, n);
        assert_eq!(id.superadjoint().unwrap(), id);
        let m = SuperMatrix::from_complex(
            SuperFormat { p: 2, q: 1 },
            n,
            &[
                vec![Complex::new(1.0, 2.0), Complex::new(0.5, -1.0), c(0.0)],
                vec![Complex::new(0.0, 3.0), c(2.0), c(0.0)],
                vec![c(0.0), c(0.0), Complex::new(-1.0, 1.0)],
            ],
        )
        .unwrap();
        let adj = m.superadjoint().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(adj.get(i, j).body(), m.get(j, i).body().conj());
            }
        }
        assert!(matches!(
            SuperMatrix::identity(F11, 3).superadjoint(),
            Err(Error::UnsupportedConvention(3))
        ));
    }
}
