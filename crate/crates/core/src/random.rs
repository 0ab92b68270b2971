//! Seeded samplers for algebra elements, matrices and states.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::grassmann::{Complex, GrassmannElement, Monomial, Parity};
use crate::superstate::{SpaceFormat, SuperKet};
use crate::supermatrix::{SuperFormat, SuperMatrix};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on the square `[-1, 1] x [-1, 1]`.
pub fn complex<R: Rng + ?Sized>(rng: &mut R) -> Complex {
    Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Random element; each admissible monomial is present with probability 1/2.
/// `parity = None` samples an inhomogeneous element.
pub fn element<R: Rng + ?Sized>(rng: &mut R, n: usize, parity: Option<Parity>) -> GrassmannElement {
    let mut terms = Vec::new();
    for bits in 0..1u64 << n {
        let m = Monomial::from_bits(bits);
        if parity.map_or(true, |p| m.parity() == p) && rng.gen_bool(0.5) {
            terms.push((m, complex(rng)));
        }
    }
    GrassmannElement::from_terms(n, terms).expect("monomials inside the algebra")
}

pub fn homogeneous<R: Rng + ?Sized>(rng: &mut R, n: usize, parity: Parity) -> GrassmannElement {
    element(rng, n, Some(parity))
}

/// Pure soul of the given parity (no body term).
pub fn soul<R: Rng + ?Sized>(rng: &mut R, n: usize, parity: Parity) -> GrassmannElement {
    homogeneous(rng, n, parity).soul()
}

/// Random homogeneous scalar whose body is never zero.
pub fn invertible_even<R: Rng + ?Sized>(rng: &mut R, n: usize) -> GrassmannElement {
    let body = loop {
        let c = complex(rng);
        if c.norm() > 0.3 {
            break c;
        }
    };
    &soul(rng, n, Parity::Even) + &GrassmannElement::scalar(n, body)
}

pub fn parity<R: Rng + ?Sized>(rng: &mut R) -> Parity {
    if rng.gen_bool(0.5) {
        Parity::Odd
    } else {
        Parity::Even
    }
}

/// Random valid matrix of the given degree.
pub fn matrix<R: Rng + ?Sized>(rng: &mut R, format: SuperFormat, parity: Parity, n: usize) -> SuperMatrix {
    let mut m = SuperMatrix::zero(format, parity, n);
    for i in 0..format.dim() {
        for j in 0..format.dim() {
            let p = m.expected_parity(i, j);
            m.set(i, j, homogeneous(rng, n, p));
        }
    }
    m
}

/// Degree-0 matrix whose diagonal blocks have well-conditioned bodies.
pub fn invertible_matrix<R: Rng + ?Sized>(rng: &mut R, format: SuperFormat, n: usize) -> SuperMatrix {
    let mut m = matrix(rng, format, Parity::Even, n);
    for i in 0..format.dim() {
        let boost = GrassmannElement::real(n, 3.0);
        let e = m.get(i, i) + &boost;
        m.set(i, i, e);
    }
    m.scale(Complex::new(0.5, 0.0))
}

/// Degree-0 matrix with every body coefficient scaled into `[-scale, scale]`.
pub fn small_matrix<R: Rng + ?Sized>(rng: &mut R, format: SuperFormat, n: usize, scale: f64) -> SuperMatrix {
    let m = matrix(rng, format, Parity::Even, n);
    let body = m.split().body;
    let soul = m.try_sub(&body).expect("same format");
    let dim = format.dim() as f64;
    body.scale(Complex::new(scale / (2.0 * dim), 0.0))
        .try_add(&soul)
        .expect("same format")
}

pub fn ket<R: Rng + ?Sized>(rng: &mut R, format: SpaceFormat, parity: Parity, n: usize) -> SuperKet {
    let even = (0..format.r).map(|_| homogeneous(rng, n, parity)).collect();
    let odd = (0..format.s).map(|_| homogeneous(rng, n, parity + Parity::Odd)).collect();
    SuperKet::new(format, parity, n, even, odd).expect("sampled coordinates fit the format")
}

/// Normalized random complex vector.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<Complex> {
    loop {
        let v: Vec<Complex> = (0..d).map(|_| complex(rng)).collect();
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.into_iter().map(|c| c / norm).collect();
        }
    }
}
