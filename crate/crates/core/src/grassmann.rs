//! Complex Grassmann algebra with a finite number of anticommuting generators.
//!
//! Elements are sparse maps from monomials to complex coefficients. A monomial
//! is a bit set over generator indices, so the sign of a product is the parity
//! of the number of crossings needed to sort the concatenated generator words.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Complex = Complex64;

/// Coefficients below this magnitude are dropped after every operation.
pub const ZERO_THRESHOLD: f64 = 1e-14;

/// Largest supported generator count (one bit per generator in a `u64`).
pub const MAX_GENERATORS: usize = 63;

/// Z2 grading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u8) -> Self {
        if bit & 1 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn from_count(count: usize) -> Self {
        Self::from_bit((count & 1) as u8)
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// `(-1)^(self * other)`
    pub fn sign_with(self, other: Parity) -> f64 {
        if self.is_odd() && other.is_odd() {
            -1.0
        } else {
            1.0
        }
    }

    /// `(-1)^self`
    pub fn sign(self) -> f64 {
        if self.is_odd() {
            -1.0
        } else {
            1.0
        }
    }
}

/// Mod-2 addition.
impl Add for Parity {
    type Output = Parity;

    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.bit() ^ rhs.bit())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => f.write_str("even"),
            Parity::Odd => f.write_str("odd"),
        }
    }
}

/// Product of distinct generators in increasing index order; bit `i - 1`
/// stands for the generator with index `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(u64);

impl Monomial {
    pub const UNIT: Monomial = Monomial(0);

    pub fn from_bits(bits: u64) -> Self {
        Monomial(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// Builds a monomial from a strictly increasing list of 1-based indices.
    pub fn from_generators(gens: &[usize], n: usize) -> Result<Self> {
        let mut bits = 0u64;
        let mut last = 0usize;
        for &g in gens {
            if g == 0 || g > n {
                return Err(Error::GeneratorOutOfRange { index: g, n });
            }
            if g <= last {
                return Err(Error::Parse(format!(
                    "generator list {gens:?} is not strictly increasing"
                )));
            }
            last = g;
            bits |= 1 << (g - 1);
        }
        Ok(Monomial(bits))
    }

    pub fn generators(self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.grade());
        let mut bits = self.0;
        while bits != 0 {
            let low = bits.trailing_zeros() as usize;
            out.push(low + 1);
            bits &= bits - 1;
        }
        out
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn parity(self) -> Parity {
        Parity::from_count(self.grade())
    }

    pub fn max_index(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    /// Product of two monomials: `None` when a generator repeats, otherwise the
    /// merged monomial and the sign of the sorting permutation.
    pub fn mul(self, rhs: Monomial) -> Option<(Monomial, f64)> {
        if self.0 & rhs.0 != 0 {
            return None;
        }
        let mut crossings = 0u32;
        let mut bits = rhs.0;
        while bits != 0 {
            let j = bits.trailing_zeros();
            // generators of `self` with index above j must move past it
            let above = if j >= 63 { 0 } else { self.0 >> (j + 1) };
            crossings += above.count_ones();
            bits &= bits - 1;
        }
        let sign = if crossings & 1 == 0 { 1.0 } else { -1.0 };
        Some((Monomial(self.0 | rhs.0), sign))
    }
}

/// Canonical order: by grade, then lexicographically on the index list.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.grade().cmp(&other.grade()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let lowest = diff & diff.wrapping_neg();
        if self.0 & lowest != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Element of the Grassmann algebra with `n` generators.
#[derive(Clone, Debug, PartialEq)]
pub struct GrassmannElement {
    n: usize,
    terms: BTreeMap<Monomial, Complex>,
}

/// The decompositions body + soul and even + odd of one element.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub body: Complex,
    pub soul: GrassmannElement,
    pub even: GrassmannElement,
    pub odd: GrassmannElement,
    pub invertible: bool,
}

impl GrassmannElement {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_GENERATORS, "at most {MAX_GENERATORS} generators");
        GrassmannElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, Complex::new(1.0, 0.0))
    }

    pub fn scalar(n: usize, c: Complex) -> Self {
        let mut z = Self::zero(n);
        z.add_term(Monomial::UNIT, c);
        z
    }

    pub fn real(n: usize, x: f64) -> Self {
        Self::scalar(n, Complex::new(x, 0.0))
    }

    /// The generator with 1-based index `index`.
    pub fn generator(n: usize, index: usize) -> Result<Self> {
        let m = Monomial::from_generators(&[index], n)?;
        let mut z = Self::zero(n);
        z.add_term(m, Complex::new(1.0, 0.0));
        Ok(z)
    }

    /// Coefficient times a monomial given by its increasing index list.
    pub fn monomial(n: usize, gens: &[usize], c: Complex) -> Result<Self> {
        let m = Monomial::from_generators(gens, n)?;
        let mut z = Self::zero(n);
        z.add_term(m, c);
        Ok(z)
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Complex)>,
    {
        if n > MAX_GENERATORS {
            return Err(Error::FormatMismatch(format!(
                "N = {n} exceeds the supported {MAX_GENERATORS} generators"
            )));
        }
        let mut z = Self::zero(n);
        for (m, c) in terms {
            if m.max_index() > n {
                return Err(Error::GeneratorOutOfRange {
                    index: m.max_index(),
                    n,
                });
            }
            z.add_term(m, c);
        }
        Ok(z)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, Complex)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: Monomial) -> Complex {
        self.terms.get(&m).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Accumulates `c * m`, keeping the zero-threshold invariant.
    fn add_term(&mut self, m: Monomial, c: Complex) {
        let entry = self.terms.entry(m).or_default();
        *entry += c;
        if entry.norm() < ZERO_THRESHOLD {
            self.terms.remove(&m);
        }
    }

    fn map_terms(&self, f: impl Fn(Monomial, Complex) -> Option<(Monomial, Complex)>) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in self.terms() {
            if let Some((m2, c2)) = f(m, c) {
                out.add_term(m2, c2);
            }
        }
        out
    }

    fn check_same_algebra(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::FormatMismatch(format!(
                "algebra N = {} vs N = {}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    /// Same element viewed in an algebra with at least as many generators.
    pub fn embed(&self, n: usize) -> Result<Self> {
        Self::from_terms(n, self.terms())
    }

    pub fn body(&self) -> Complex {
        self.coefficient(Monomial::UNIT)
    }

    pub fn soul(&self) -> Self {
        self.map_terms(|m, c| (m != Monomial::UNIT).then_some((m, c)))
    }

    pub fn even_part(&self) -> Self {
        self.map_terms(|m, c| (m.parity() == Parity::Even).then_some((m, c)))
    }

    pub fn odd_part(&self) -> Self {
        self.map_terms(|m, c| (m.parity() == Parity::Odd).then_some((m, c)))
    }

    pub fn is_invertible(&self) -> bool {
        self.body().norm() > ZERO_THRESHOLD
    }

    pub fn decompose(&self) -> Decomposition {
        Decomposition {
            body: self.body(),
            soul: self.soul(),
            even: self.even_part(),
            odd: self.odd_part(),
            invertible: self.is_invertible(),
        }
    }

    /// Parity of a homogeneous element. Zero counts as even.
    pub fn parity(&self) -> Result<Parity> {
        let mut parities = self.terms.keys().map(|m| m.parity());
        let first = match parities.next() {
            None => return Ok(Parity::Even),
            Some(p) => p,
        };
        if parities.all(|p| p == first) {
            Ok(first)
        } else {
            Err(Error::Inhomogeneous)
        }
    }

    /// True when every stored monomial has parity `p` (always true for zero).
    pub fn has_parity(&self, p: Parity) -> bool {
        self.terms.keys().all(|m| m.parity() == p)
    }

    pub fn scale(&self, c: Complex) -> Self {
        self.map_terms(|m, x| Some((m, x * c)))
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.scale(Complex::new(x, 0.0))
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_algebra(rhs)?;
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same_algebra(rhs)?;
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(m, -c);
        }
        Ok(out)
    }

    /// Grassmann product.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.check_same_algebra(rhs)?;
        let mut out = Self::zero(self.n);
        for (ma, ca) in self.terms() {
            for (mb, cb) in rhs.terms() {
                if let Some((m, sign)) = ma.mul(mb) {
                    out.add_term(m, ca * cb * sign);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.n);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Graded commutator `y z - (-1)^(deg y deg z) z y`.
    pub fn supercommutator(&self, rhs: &Self) -> Result<Self> {
        self.check_same_algebra(rhs)?;
        let sign = self.parity()?.sign_with(rhs.parity()?);
        Ok(&(self * rhs) - &(rhs * self).scale_real(sign))
    }

    /// Antilinear antiautomorphism fixing every generator.
    pub fn star(&self) -> Self {
        self.map_terms(|m, c| {
            let k = m.grade();
            let sign = if (k * k.saturating_sub(1) / 2) % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            Some((m, c.conj() * sign))
        })
    }

    /// Antilinear automorphism pairing generators `2k-1 -> 2k`, `2k -> -(2k-1)`.
    pub fn superstar(&self) -> Result<Self> {
        if self.n % 2 != 0 {
            return Err(Error::UnsupportedConvention(self.n));
        }
        Ok(self.map_terms(|m, c| {
            let (image, sign) = superstar_monomial(m);
            Some((image, c.conj() * sign))
        }))
    }

    /// Inverse through the terminating series `b^-1 sum_k (-s/b)^k`.
    pub fn inverse(&self) -> Result<Self> {
        let body = self.body();
        if body.norm() <= ZERO_THRESHOLD {
            return Err(Error::Noninvertible(format!(
                "element {self} has zero body"
            )));
        }
        let inv_body = body.inv();
        let ratio = self.soul().scale(-inv_body);
        let mut sum = Self::one(self.n);
        let mut power = Self::one(self.n);
        for _ in 0..self.n {
            power = &power * &ratio;
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
        }
        Ok(sum.scale(inv_body))
    }

    /// `e^body * sum_k soul^k / k!`
    pub fn exp(&self) -> Self {
        let soul = self.soul();
        let mut sum = Self::one(self.n);
        let mut term = Self::one(self.n);
        for k in 1..=self.n {
            term = (&term * &soul).scale_real(1.0 / k as f64);
            if term.is_zero() {
                break;
            }
            sum = &sum + &term;
        }
        sum.scale(self.body().exp())
    }

    /// l1 norm of the coefficients in the monomial basis.
    pub fn norm_r(&self) -> f64 {
        self.terms.values().fold(0.0, |acc, c| acc + c.norm())
    }

    /// Largest coefficient deviation from `other`.
    pub fn max_coefficient_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for (m, c) in self.terms() {
            worst = worst.max((c - other.coefficient(m)).norm());
        }
        for (m, c) in other.terms() {
            if !self.terms.contains_key(&m) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.n == other.n && self.max_coefficient_diff(other) <= tol
    }
}

fn superstar_monomial(m: Monomial) -> (Monomial, f64) {
    let mut image = Monomial::UNIT;
    let mut sign = 1.0;
    for g in m.generators() {
        // 1-based: odd index maps up, even index maps down with a sign
        let (target, s) = if g % 2 == 1 { (g + 1, 1.0) } else { (g - 1, -1.0) };
        let gm = Monomial::from_bits(1 << (target - 1));
        let (merged, cross) = image
            .mul(gm)
            .expect("pairing is a bijection on generators");
        image = merged;
        sign *= s * cross;
    }
    (image, sign)
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&GrassmannElement> for &GrassmannElement {
            type Output = GrassmannElement;

            /// Panics on mismatched algebras; the `try_` form reports it.
            fn $method(self, rhs: &GrassmannElement) -> GrassmannElement {
                self.$checked(rhs).expect("operands from the same algebra")
            }
        }

        impl $trait for GrassmannElement {
            type Output = GrassmannElement;

            fn $method(self, rhs: GrassmannElement) -> GrassmannElement {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl AddAssign<&GrassmannElement> for GrassmannElement {
    fn add_assign(&mut self, rhs: &GrassmannElement) {
        assert_eq!(self.n, rhs.n, "operands from the same algebra");
        for (m, c) in rhs.terms() {
            self.add_term(m, c);
        }
    }
}

impl Neg for &GrassmannElement {
    type Output = GrassmannElement;

    fn neg(self) -> GrassmannElement {
        self.scale_real(-1.0)
    }
}

impl Neg for GrassmannElement {
    type Output = GrassmannElement;

    fn neg(self) -> GrassmannElement {
        self.scale_real(-1.0)
    }
}

impl fmt::Display for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let real = c.im == 0.0;
            match (i > 0, real && c.re < 0.0) {
                (true, true) => f.write_str(" - ")?,
                (true, false) => f.write_str(" + ")?,
                (false, true) => f.write_str("-")?,
                (false, false) => {}
            }
            if real {
                write!(f, "{}", c.re.abs())?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            for g in m.generators() {
                write!(f, "*t{g}")?;
            }
        }
        Ok(())
    }
}
