//! Graded kets and bras over an `(r|s)` super Hilbert space.
//!
//! Kets carry right coordinates, `||psi> = sum_k ||k> psi_k`, with the first
//! `r` basis vectors even and the last `s` odd. Bras carry left coordinates,
//! `<phi|| = sum_k b_k <k||`, and can only be obtained from a ket through
//! [`SuperKet::dual`].
//!
//! With `sigma_k(pi) = (-1)^(|k| (pi + 1))` the graded inner product of two
//! states of parity `pi` is `sum_k sigma_k(pi) phi_k^# psi_k`: an even pair
//! picks up a minus on the odd slots, an odd pair is all plus.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grassmann::{Complex, GrassmannElement, Parity};
use crate::supermatrix::{SuperFormat, SuperMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpaceFormat {
    pub r: usize,
    pub s: usize,
}

impl SpaceFormat {
    pub fn new(r: usize, s: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::FormatMismatch("a super Hilbert space needs r >= 1".into()));
        }
        Ok(SpaceFormat { r, s })
    }

    pub const SUPERQUBIT: SpaceFormat = SpaceFormat { r: 2, s: 1 };

    pub fn dim(self) -> usize {
        self.r + self.s
    }

    pub fn slot_parity(self, k: usize) -> Parity {
        if k < self.r {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn matrix_format(self) -> SuperFormat {
        SuperFormat {
            p: self.r,
            q: self.s,
        }
    }
}

/// Sign of odd slots in the inner product of two parity-`pi` states.
fn sigma(slot: Parity, pi: Parity) -> f64 {
    if slot.is_odd() && !pi.is_odd() {
        -1.0
    } else {
        1.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuperKet {
    format: SpaceFormat,
    parity: Parity,
    n: usize,
    coords: Vec<GrassmannElement>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuperBra {
    format: SpaceFormat,
    parity: Parity,
    n: usize,
    coords: Vec<GrassmannElement>,
}

fn check_coords(format: SpaceFormat, n: usize, coords: &[GrassmannElement]) -> Result<()> {
    if coords.len() != format.dim() {
        return Err(Error::Dimension {
            expected: format.dim(),
            got: coords.len(),
        });
    }
    if let Some(bad) = coords.iter().find(|c| c.n() != n) {
        return Err(Error::FormatMismatch(format!(
            "coordinate over N = {} in a state over N = {n}",
            bad.n()
        )));
    }
    Ok(())
}

fn homogeneity_violation(format: SpaceFormat, parity: Parity, coords: &[GrassmannElement]) -> Option<usize> {
    coords
        .iter()
        .enumerate()
        .position(|(k, c)| !c.has_parity(parity + format.slot_parity(k)))
}

impl SuperKet {
    /// Accepts inhomogeneous coordinates; operations that need homogeneity
    /// check it themselves.
    pub fn new(
        format: SpaceFormat,
        parity: Parity,
        n: usize,
        even: Vec<GrassmannElement>,
        odd: Vec<GrassmannElement>,
    ) -> Result<Self> {
        if even.len() != format.r || odd.len() != format.s {
            return Err(Error::Dimension {
                expected: format.dim(),
                got: even.len() + odd.len(),
            });
        }
        let coords: Vec<_> = even.into_iter().chain(odd).collect();
        check_coords(format, n, &coords)?;
        Ok(SuperKet {
            format,
            parity,
            n,
            coords,
        })
    }

    pub fn from_coords(format: SpaceFormat, parity: Parity, n: usize, coords: Vec<GrassmannElement>) -> Result<Self> {
        check_coords(format, n, &coords)?;
        Ok(SuperKet {
            format,
            parity,
            n,
            coords,
        })
    }

    /// Body-only even ket with complex even coordinates and zero odd ones.
    pub fn from_body(format: SpaceFormat, n: usize, amps: &[Complex]) -> Result<Self> {
        if amps.len() != format.r {
            return Err(Error::Dimension {
                expected: format.r,
                got: amps.len(),
            });
        }
        let even = amps.iter().map(|&c| GrassmannElement::scalar(n, c)).collect();
        let odd = vec![GrassmannElement::zero(n); format.s];
        Self::new(format, Parity::Even, n, even, odd)
    }

    pub fn format(&self) -> SpaceFormat {
        self.format
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[GrassmannElement] {
        &self.coords
    }

    pub fn even_coords(&self) -> &[GrassmannElement] {
        &self.coords[..self.format.r]
    }

    pub fn odd_coords(&self) -> &[GrassmannElement] {
        &self.coords[self.format.r..]
    }

    pub fn is_homogeneous(&self) -> bool {
        homogeneity_violation(self.format, self.parity, &self.coords).is_none()
    }

    pub fn ensure_homogeneous(&self) -> Result<()> {
        match homogeneity_violation(self.format, self.parity, &self.coords) {
            None => Ok(()),
            Some(k) => Err(Error::ParityViolation(format!(
                "coordinate {k} of a {} ket must be {}",
                self.parity,
                self.parity + self.format.slot_parity(k)
            ))),
        }
    }

    fn check_compatible(&self, format: SpaceFormat, n: usize) -> Result<()> {
        if self.format != format || self.n != n {
            return Err(Error::FormatMismatch(format!(
                "({}|{}) over N = {} vs ({}|{}) over N = {n}",
                self.format.r, self.format.s, self.n, format.r, format.s
            )));
        }
        Ok(())
    }

    /// `b_k = sigma_k(pi) psi_k^#`.
    pub fn dual(&self) -> Result<SuperBra> {
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(k, c)| Ok(c.superstar()?.scale_real(sigma(self.format.slot_parity(k), self.parity))))
            .collect::<Result<Vec<_>>>()?;
        Ok(SuperBra {
            format: self.format,
            parity: self.parity,
            n: self.n,
            coords,
        })
    }

    /// Multiply by a homogeneous scalar. Left multiplication moves `z` past
    /// the basis vectors, signing odd slots when `z` is odd.
    pub fn scale(&self, z: &GrassmannElement, side: Side) -> Result<Self> {
        let dz = z.parity()?;
        if z.n() != self.n {
            return Err(Error::FormatMismatch("scalar from a different algebra".into()));
        }
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(k, c)| match side {
                Side::Right => c * z,
                Side::Left => (z * c).scale_real(dz.sign_with(self.format.slot_parity(k))),
            })
            .collect();
        Ok(SuperKet {
            format: self.format,
            parity: self.parity + dz,
            n: self.n,
            coords,
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        other.check_compatible(self.format, self.n)?;
        if self.parity != other.parity {
            return Err(Error::ParityMismatch {
                expected: self.parity,
                got: other.parity,
            });
        }
        Ok(SuperKet {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
            ..self.clone()
        })
    }

    /// Bodies of the even coordinates; defined for even kets only.
    pub fn body(&self) -> Result<Vec<Complex>> {
        if self.parity != Parity::Even {
            return Err(Error::ParityMismatch {
                expected: Parity::Even,
                got: self.parity,
            });
        }
        Ok(self.even_coords().iter().map(|c| c.body()).collect())
    }

    pub fn max_coefficient_diff(&self, other: &Self) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.max_coefficient_diff(b))
            .fold(0.0, f64::max)
    }
}

impl SuperBra {
    pub fn format(&self) -> SpaceFormat {
        self.format
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn coords(&self) -> &[GrassmannElement] {
        &self.coords
    }

    /// Back to a ket: `psi_k = (-1)^(|k| pi) b_k^#`.
    pub fn dual(&self) -> Result<SuperKet> {
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(k, c)| Ok(c.superstar()?.scale_real(self.parity.sign_with(self.format.slot_parity(k)))))
            .collect::<Result<Vec<_>>>()?;
        Ok(SuperKet {
            format: self.format,
            parity: self.parity,
            n: self.n,
            coords,
        })
    }

    pub fn scale(&self, z: &GrassmannElement, side: Side) -> Result<Self> {
        let dz = z.parity()?;
        if z.n() != self.n {
            return Err(Error::FormatMismatch("scalar from a different algebra".into()));
        }
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(k, c)| match side {
                Side::Left => z * c,
                Side::Right => (c * z).scale_real(dz.sign_with(self.format.slot_parity(k))),
            })
            .collect();
        Ok(SuperBra {
            format: self.format,
            parity: self.parity + dz,
            n: self.n,
            coords,
        })
    }

    /// `sum_k b_k psi_k`, zero across opposite parities.
    pub fn pair(&self, psi: &SuperKet) -> Result<GrassmannElement> {
        psi.check_compatible(self.format, self.n)?;
        if self.parity != psi.parity {
            return Ok(GrassmannElement::zero(self.n));
        }
        let mut acc = GrassmannElement::zero(self.n);
        for (b, c) in self.coords.iter().zip(&psi.coords) {
            acc += &(b * c);
        }
        Ok(acc)
    }

    pub fn max_coefficient_diff(&self, other: &Self) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.max_coefficient_diff(b))
            .fold(0.0, f64::max)
    }
}

/// `<phi||psi>`; exactly zero when the parities differ.
pub fn inner(phi: &SuperKet, psi: &SuperKet) -> Result<GrassmannElement> {
    phi.check_compatible(psi.format, psi.n)?;
    phi.ensure_homogeneous()?;
    psi.ensure_homogeneous()?;
    phi.dual()?.pair(psi)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradedOperator {
    matrix: SuperMatrix,
}

impl GradedOperator {
    pub fn new(matrix: SuperMatrix) -> Result<Self> {
        matrix.ensure_valid()?;
        Ok(GradedOperator { matrix })
    }

    pub fn identity(format: SpaceFormat, n: usize) -> Self {
        GradedOperator {
            matrix: SuperMatrix::identity(format.matrix_format(), n),
        }
    }

    pub fn matrix(&self) -> &SuperMatrix {
        &self.matrix
    }

    pub fn parity(&self) -> Parity {
        self.matrix.parity()
    }

    pub fn superadjoint(&self) -> Result<Self> {
        Ok(GradedOperator {
            matrix: self.matrix.superadjoint()?,
        })
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(GradedOperator {
            matrix: self.matrix.try_mul(&other.matrix)?,
        })
    }

    /// `(T psi)_i = sum_j T_ij psi_j`, parity `pi_psi + pi_T`.
    pub fn apply(&self, psi: &SuperKet) -> Result<SuperKet> {
        let m = &self.matrix;
        if m.format() != psi.format.matrix_format() || m.n() != psi.n {
            return Err(Error::FormatMismatch(format!(
                "{} operator over N = {} on a ({}|{}) ket over N = {}",
                m.format(),
                m.n(),
                psi.format.r,
                psi.format.s,
                psi.n
            )));
        }
        let coords = (0..m.dim())
            .map(|i| {
                let mut acc = GrassmannElement::zero(psi.n);
                for (j, c) in psi.coords.iter().enumerate() {
                    acc += &(m.get(i, j) * c);
                }
                acc
            })
            .collect();
        Ok(SuperKet {
            format: psi.format,
            parity: psi.parity + m.parity(),
            n: psi.n,
            coords,
        })
    }
}

/// `|| <T phi||psi> - (-1)^(pi_phi pi_T) <phi||T^+ psi> ||_R`.
pub fn superadjoint_residual(t: &GradedOperator, phi: &SuperKet, psi: &SuperKet) -> Result<f64> {
    let lhs = inner(&t.apply(phi)?, psi)?;
    let rhs = inner(phi, &t.superadjoint()?.apply(psi)?)?;
    let sign = phi.parity.sign_with(t.parity());
    Ok((&lhs - &rhs.scale_real(sign)).norm_r())
}

/// Density supermatrix `rho_ij = sigma_i(pi) psi_j psi_i^#`, degree 0, with
/// `str rho = (-1)^pi <psi||psi>`.
pub fn outer(psi: &SuperKet) -> Result<SuperMatrix> {
    psi.ensure_homogeneous()?;
    let starred = psi
        .coords
        .iter()
        .map(|c| c.superstar())
        .collect::<Result<Vec<_>>>()?;
    let format = psi.format;
    Ok(SuperMatrix::from_fn(format.matrix_format(), Parity::Even, psi.n, |i, j| {
        (&psi.coords[j] * &starred[i]).scale_real(sigma(format.slot_parity(i), psi.parity))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    const Q: SpaceFormat = SpaceFormat::SUPERQUBIT;

    fn theta(n: usize, i: usize) -> GrassmannElement {
        GrassmannElement::generator(n, i).unwrap()
    }

    fn g(n: usize, x: f64) -> GrassmannElement {
        GrassmannElement::real(n, x)
    }

    #[test]
    fn opposite_parities_are_orthogonal() {
        let mut rng = random::seeded(1);
        let a = random::ket(&mut rng, Q, Parity::Even, 4);
        let b = random::ket(&mut rng, Q, Parity::Odd, 4);
        assert!(inner(&a, &b).unwrap().is_zero());
        assert!(inner(&b, &a).unwrap().is_zero());
    }

    #[test]
    fn even_pair_matches_component_formula() {
        let mut rng = random::seeded(2);
        let (a, b) = (random::ket(&mut rng, Q, Parity::Even, 4), random::ket(&mut rng, Q, Parity::Even, 4));
        let c = |k: &SuperKet, i: usize| k.coords()[i].clone();
        let expected = &(&(&c(&a, 0).superstar().unwrap() * &c(&b, 0))
            + &(&c(&a, 1).superstar().unwrap() * &c(&b, 1)))
            - &(&c(&a, 2).superstar().unwrap() * &c(&b, 2));
        assert!(inner(&a, &b).unwrap().approx_eq(&expected, 1e-14));
    }

    #[test]
    fn body_states_give_ordinary_product() {
        let n = 2;
        let x = [Complex::new(0.6, 0.1), Complex::new(0.2, -0.3)];
        let y = [Complex::new(-0.4, 0.5), Complex::new(0.7, 0.0)];
        let a = SuperKet::from_body(Q, n, &x).unwrap();
        let b = SuperKet::from_body(Q, n, &y).unwrap();
        let expected = x[0].conj() * y[0] + x[1].conj() * y[1];
        assert_eq!(inner(&a, &b).unwrap(), GrassmannElement::scalar(n, expected));
        assert_eq!(a.body().unwrap(), x.to_vec());
    }

    #[test]
    fn dual_twice_is_parity_sign() {
        let mut rng = random::seeded(3);
        for parity in [Parity::Even, Parity::Odd] {
            let k = random::ket(&mut rng, Q, parity, 4);
            let back = k.dual().unwrap().dual().unwrap();
            let expected = k.scale(&g(4, parity.sign()), Side::Right).unwrap();
            assert_eq!(back.max_coefficient_diff(&expected), 0.0);
            let four = back.dual().unwrap().dual().unwrap();
            assert_eq!(four, k);
        }
    }

    #[test]
    fn scaling_examples() {
        let n = 2;
        let k = SuperKet::from_body(Q, n, &[Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)]).unwrap();
        assert_eq!(k.scale(&g(n, 1.0), Side::Right).unwrap(), k);
        let odd = k.scale(&theta(n, 1), Side::Right).unwrap();
        assert_eq!(odd.parity(), Parity::Odd);
        assert!(odd.is_homogeneous());
        assert!(matches!(
            k.scale(&(&g(n, 1.0) + &theta(n, 1)), Side::Right),
            Err(Error::Inhomogeneous)
        ));
    }

    #[test]
    fn dagger_of_scaled_ket_and_bra() {
        let mut rng = random::seeded(4);
        let n = 4;
        for _ in 0..20 {
            let (pi, dz) = (random::parity(&mut rng), random::parity(&mut rng));
            let psi = random::ket(&mut rng, Q, pi, n);
            let z = random::homogeneous(&mut rng, n, dz);
            let zs = z.superstar().unwrap();
            let lhs = psi.scale(&z, Side::Right).unwrap().dual().unwrap();
            let rhs = psi
                .dual()
                .unwrap()
                .scale(&zs.scale_real(pi.sign_with(dz)), Side::Left)
                .unwrap();
            assert!(lhs.max_coefficient_diff(&rhs) < 1e-14);
            let bra = psi.dual().unwrap().scale(&z, Side::Left).unwrap();
            let lhs = bra.dual().unwrap();
            let rhs = psi
                .scale(&zs.scale_real(pi.sign_with(dz + Parity::Odd)), Side::Right)
                .unwrap();
            assert!(lhs.max_coefficient_diff(&rhs) < 1e-14);
        }
    }

    #[test]
    fn operator_grading() {
        let mut rng = random::seeded(5);
        let n = 4;
        let psi = random::ket(&mut rng, Q, Parity::Even, n);
        let id = GradedOperator::identity(Q, n);
        assert_eq!(id.apply(&psi).unwrap(), psi);
        let t = GradedOperator::new(random::matrix(&mut rng, Q.matrix_format(), Parity::Odd, n)).unwrap();
        let out = t.apply(&psi).unwrap();
        assert_eq!(out.parity(), Parity::Odd);
        assert!(out.is_homogeneous());
        assert_eq!(t.compose(&t).unwrap().parity(), Parity::Even);
    }

    #[test]
    fn adjoint_identity_holds() {
        let mut rng = random::seeded(6);
        let n = 4;
        let format = SpaceFormat { r: 2, s: 2 };
        for _ in 0..50 {
            let pt = random::parity(&mut rng);
            let pphi = random::parity(&mut rng);
            let t = GradedOperator::new(random::matrix(&mut rng, format.matrix_format(), pt, n)).unwrap();
            let phi = random::ket(&mut rng, format, pphi, n);
            let psi = random::ket(&mut rng, format, pphi + pt, n);
            assert!(superadjoint_residual(&t, &phi, &psi).unwrap() < 1e-10);
        }
        let id = GradedOperator::identity(Q, n);
        let phi = random::ket(&mut rng, Q, Parity::Even, n);
        assert_eq!(superadjoint_residual(&id, &phi, &phi).unwrap(), 0.0);
    }

    #[test]
    fn density_supertrace() {
        let mut rng = random::seeded(7);
        for parity in [Parity::Even, Parity::Odd] {
            let psi = random::ket(&mut rng, Q, parity, 4);
            let rho = outer(&psi).unwrap();
            assert!(rho.validate().is_empty());
            let norm = inner(&psi, &psi).unwrap();
            let d = rho.supertrace().unwrap().max_coefficient_diff(&norm.scale_real(parity.sign()));
            assert!(d < 1e-14, "{d}");
        }
    }

    #[test]
    fn even_density_layout() {
        let n = 2;
        let x0 = g(n, 0.5);
        let ae = theta(n, 1);
        let psi = SuperKet::new(Q, Parity::Even, n, vec![x0.clone(), g(n, 0.0)], vec![ae.clone()]).unwrap();
        let rho = outer(&psi).unwrap();
        let aes = ae.superstar().unwrap();
        assert_eq!(rho.get(0, 2), &(&ae * &x0.superstar().unwrap()));
        assert_eq!(rho.get(2, 0), &-(&(&x0 * &aes)));
        assert_eq!(rho.get(2, 2), &-(&(&ae * &aes)));
    }

    #[test]
    fn body_requires_even_ket() {
        let mut rng = random::seeded(8);
        let k = random::ket(&mut rng, Q, Parity::Odd, 2);
        assert!(matches!(k.body(), Err(Error::ParityMismatch { .. })));
        let soul_only = SuperKet::new(Q, Parity::Even, 2, vec![&theta(2, 1) * &theta(2, 2), g(2, 0.0)], vec![theta(2, 1)]).unwrap();
        assert_eq!(soul_only.body().unwrap(), vec![Complex::new(0.0, 0.0); 2]);
    }
}
