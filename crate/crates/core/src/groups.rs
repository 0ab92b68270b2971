//! Invariant forms and membership predicates for SL(2), SU(2), OSp(2|1) and
//! uOSp(2|1).

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::grassmann::{Complex, GrassmannElement, Parity};
use crate::random;
use crate::supermatrix::{det_even, SuperFormat, SuperMatrix};

pub const SL2_FORMAT: SuperFormat = SuperFormat { p: 2, q: 0 };
pub const OSP_FORMAT: SuperFormat = SuperFormat { p: 2, q: 1 };

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TensorKind {
    Sl,
    Osp,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantTensor {
    pub kind: TensorKind,
    pub matrix: SuperMatrix,
}

impl InvariantTensor {
    /// `[[0, 1], [-1, 0]]`
    pub fn sl(n: usize) -> Self {
        let one = Complex::new(1.0, 0.0);
        let zero = Complex::new(0.0, 0.0);
        InvariantTensor {
            kind: TensorKind::Sl,
            matrix: SuperMatrix::from_complex(SL2_FORMAT, n, &[vec![zero, one], vec![-one, zero]])
                .expect("2x2"),
        }
    }

    /// `E_sl` extended by a unit odd-odd block.
    pub fn osp(n: usize) -> Self {
        let one = Complex::new(1.0, 0.0);
        let zero = Complex::new(0.0, 0.0);
        InvariantTensor {
            kind: TensorKind::Osp,
            matrix: SuperMatrix::from_complex(
                OSP_FORMAT,
                n,
                &[vec![zero, one, zero], vec![-one, zero, zero], vec![zero, zero, one]],
            )
            .expect("3x3"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Group {
    Sl2,
    Su2,
    Osp21,
    Uosp21,
}

impl Group {
    pub const ALL: [Group; 4] = [Group::Sl2, Group::Su2, Group::Osp21, Group::Uosp21];

    pub fn id(self) -> &'static str {
        match self {
            Group::Sl2 => "sl2",
            Group::Su2 => "su2",
            Group::Osp21 => "osp21",
            Group::Uosp21 => "uosp21",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Group::ALL
            .into_iter()
            .find(|g| g.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown group `{s}` (expected sl2, su2, osp21 or uosp21)")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupCheck {
    pub member: bool,
    pub residual: f64,
}

fn require_format(m: &SuperMatrix, format: SuperFormat, group: Group) -> Result<()> {
    if m.format() != format || m.parity() != Parity::Even {
        return Err(Error::FormatMismatch(format!(
            "{group} membership needs a degree-0 {format} matrix, got degree {} {}",
            m.parity().bit(),
            m.format()
        )));
    }
    Ok(())
}

/// Largest `norm_r` of the entrywise difference.
fn residual(a: &SuperMatrix, b: &SuperMatrix) -> f64 {
    a.try_sub(b).map(|d| d.norm()).unwrap_or(f64::INFINITY)
}

fn identity_residual(m: &SuperMatrix) -> f64 {
    residual(m, &SuperMatrix::identity(m.format(), m.n()))
}

pub fn group_check(m: &SuperMatrix, group: Group, tol: f64) -> Result<GroupCheck> {
    let residual = match group {
        Group::Sl2 | Group::Su2 => {
            require_format(m, SL2_FORMAT, group)?;
            if !m.split().soul.is_zero() {
                return Err(Error::FormatMismatch(format!("{group} membership needs a body-only matrix")));
            }
            let det = det_even(&m.rows(), m.n())?;
            let det_res = (det.body() - Complex::new(1.0, 0.0)).norm();
            if group == Group::Sl2 {
                det_res
            } else {
                let dagger = SuperMatrix::from_fn(SL2_FORMAT, Parity::Even, m.n(), |i, j| m.get(j, i).star());
                det_res.max(identity_residual(&dagger.try_mul(m)?))
            }
        }
        Group::Osp21 | Group::Uosp21 => {
            require_format(m, OSP_FORMAT, group)?;
            m.ensure_valid()?;
            let e = InvariantTensor::osp(m.n()).matrix;
            let form = m.supertranspose()?.try_mul(&e)?.try_mul(m)?;
            let osp_res = residual(&form, &e);
            if group == Group::Osp21 {
                osp_res
            } else {
                osp_res.max(identity_residual(&m.superadjoint()?.try_mul(m)?))
            }
        }
    };
    Ok(GroupCheck {
        member: residual <= tol,
        residual,
    })
}

/// Random `K` with `K^sT E + E K = 0`: a traceless even `2x2` block `A`, an
/// odd column `b`, the row `b^T E_sl` and a zero odd-odd entry.
pub fn osp_algebra_element<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> SuperMatrix {
    let even = |rng: &mut R| random::homogeneous(rng, n, Parity::Even).scale_real(scale);
    let odd = |rng: &mut R| random::soul(rng, n, Parity::Odd).scale_real(scale);
    let (a00, a01, a10) = (even(rng), even(rng), even(rng));
    let (b0, b1) = (odd(rng), odd(rng));
    let zero = GrassmannElement::zero(n);
    // b^T E_sl = (-b1, b0)
    let rows = vec![
        vec![a00.clone(), a01, b0.clone()],
        vec![a10, -&a00, b1.clone()],
        vec![-&b1, b0, zero],
    ];
    SuperMatrix::new(OSP_FORMAT, Parity::Even, n, rows).expect("3x3 over one algebra")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex {
        Complex::new(x, 0.0)
    }

    #[test]
    fn identity_is_in_every_group() {
        let n = 2;
        for g in Group::ALL {
            let format = if matches!(g, Group::Sl2 | Group::Su2) { SL2_FORMAT } else { OSP_FORMAT };
            let check = group_check(&SuperMatrix::identity(format, n), g, 1e-12).unwrap();
            assert!(check.member, "{g}");
            assert_eq!(check.residual, 0.0);
        }
    }

    #[test]
    fn diagonal_stretch_is_sl2_not_su2() {
        let m = SuperMatrix::from_complex(SL2_FORMAT, 2, &[vec![c(2.0), c(0.0)], vec![c(0.0), c(0.5)]]).unwrap();
        assert!(group_check(&m, Group::Sl2, 1e-12).unwrap().member);
        assert!(!group_check(&m, Group::Su2, 1e-12).unwrap().member);
    }

    #[test]
    fn wrong_format_is_rejected() {
        let m = SuperMatrix::identity(OSP_FORMAT, 2);
        assert!(matches!(group_check(&m, Group::Sl2, 1e-12), Err(Error::FormatMismatch(_))));
        let m = SuperMatrix::identity(SL2_FORMAT, 2);
        assert!(matches!(group_check(&m, Group::Osp21, 1e-12), Err(Error::FormatMismatch(_))));
    }

    #[test]
    fn algebra_element_satisfies_linear_constraint() {
        let mut rng = random::seeded(11);
        let n = 4;
        let e = InvariantTensor::osp(n).matrix;
        for _ in 0..10 {
            let k = osp_algebra_element(&mut rng, n, 0.5);
            assert!(k.validate().is_empty());
            let lhs = k.supertranspose().unwrap().try_mul(&e).unwrap().try_add(&e.try_mul(&k).unwrap()).unwrap();
            assert!(lhs.norm() < 1e-14);
            let g = k.exp().unwrap();
            assert!(group_check(&g, Group::Osp21, 1e-8).unwrap().member);
        }
    }

    #[test]
    fn invariant_forms() {
        let e = InvariantTensor::sl(2).matrix;
        let e2 = e.try_mul(&e).unwrap();
        assert_eq!(e2, SuperMatrix::identity(SL2_FORMAT, 2).scale(c(-1.0)));
        assert!(InvariantTensor::osp(2).matrix.validate().is_empty());
    }
}
