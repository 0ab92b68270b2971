use proptest::prelude::*;

use superq::entangle::{self, TwoPartyTable};
use superq::io;
use superq::superstate::{self, SpaceFormat, Side};
use superq::{Complex, GrassmannElement, Monomial, Parity, SuperFormat, SuperKet, SuperMatrix};

const N: usize = 4;

fn coef() -> impl Strategy<Value = Complex> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| Complex::new(re, im))
}

fn element_with(n: usize, parity: Option<Parity>) -> impl Strategy<Value = GrassmannElement> {
    proptest::collection::vec((0u64..(1 << n), coef()), 0..8).prop_map(move |terms| {
        let mut seen = std::collections::BTreeMap::new();
        for (bits, c) in terms {
            let m = Monomial::from_bits(bits);
            if parity.map_or(true, |p| m.parity() == p) {
                seen.insert(bits, (m, c));
            }
        }
        GrassmannElement::from_terms(n, seen.into_values()).unwrap()
    })
}

fn element() -> impl Strategy<Value = GrassmannElement> {
    element_with(N, None)
}

fn parity() -> impl Strategy<Value = Parity> {
    prop_oneof![Just(Parity::Even), Just(Parity::Odd)]
}

fn homogeneous() -> impl Strategy<Value = (Parity, GrassmannElement)> {
    parity().prop_flat_map(|p| element_with(N, Some(p)).prop_map(move |e| (p, e)))
}

fn format(max: usize) -> impl Strategy<Value = SuperFormat> {
    (0..=max, 0..=max).prop_filter("nonempty", |(p, q)| p + q > 0).prop_map(|(p, q)| SuperFormat { p, q })
}

fn matrix_in(f: SuperFormat, d: Parity) -> impl Strategy<Value = SuperMatrix> {
    let dim = f.dim();
    let entries = (0..dim * dim)
        .map(|k| element_with(N, Some(d + f.index_parity(k / dim) + f.index_parity(k % dim))))
        .collect::<Vec<_>>();
    entries.prop_map(move |flat| {
        let rows = flat.chunks(dim).map(|r| r.to_vec()).collect();
        SuperMatrix::new(f, d, N, rows).unwrap()
    })
}

fn matrix() -> impl Strategy<Value = SuperMatrix> {
    (format(3), parity()).prop_flat_map(|(f, d)| matrix_in(f, d))
}

/// Two matrices of a shared format with independent degrees.
fn matrix_pair() -> impl Strategy<Value = (SuperMatrix, SuperMatrix)> {
    (format(2), parity(), parity()).prop_flat_map(|(f, a, b)| (matrix_in(f, a), matrix_in(f, b)))
}

fn ket_in(f: SpaceFormat, p: Parity) -> impl Strategy<Value = SuperKet> {
    let coords = (0..f.dim()).map(|k| element_with(N, Some(p + f.slot_parity(k)))).collect::<Vec<_>>();
    coords.prop_map(move |c| SuperKet::from_coords(f, p, N, c).unwrap())
}

fn space() -> impl Strategy<Value = SpaceFormat> {
    (1usize..=3, 0usize..=3).prop_map(|(r, s)| SpaceFormat { r, s })
}

fn ket() -> impl Strategy<Value = SuperKet> {
    (space(), parity()).prop_flat_map(|(f, p)| ket_in(f, p))
}

fn close(a: &GrassmannElement, b: &GrassmannElement) -> bool {
    a.max_coefficient_diff(b) <= 1e-10
}

fn close_m(a: &SuperMatrix, b: &SuperMatrix) -> bool {
    a.max_coefficient_diff(b) <= 1e-10
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn product_is_associative(a in element(), b in element(), c in element()) {
        prop_assert!(close(&(&(&a * &b) * &c), &(&a * &(&b * &c))));
    }

    #[test]
    fn product_distributes(a in element(), b in element(), c in element()) {
        prop_assert!(close(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c))));
    }

    #[test]
    fn homogeneous_elements_supercommute((_, y) in homogeneous(), (_, z) in homogeneous()) {
        prop_assert!(y.supercommutator(&z).unwrap().norm_r() <= 1e-12);
    }

    #[test]
    fn odd_elements_square_to_zero(y in element_with(N, Some(Parity::Odd))) {
        prop_assert!((&y * &y).norm_r() <= 1e-12);
    }

    #[test]
    fn soul_is_nilpotent(a in element()) {
        prop_assert!(a.soul().pow(N as u32 + 1).is_zero());
    }

    #[test]
    fn body_soul_split(a in element()) {
        prop_assert_eq!(&(&GrassmannElement::scalar(N, a.body()) + &a.soul()), &a);
        prop_assert_eq!(&(&a.even_part() + &a.odd_part()), &a);
    }

    #[test]
    fn star_is_an_antiautomorphism(a in element(), b in element(), x in coef()) {
        prop_assert_eq!(a.star().star(), a.clone());
        prop_assert!(close(&(&a * &b).star(), &(&b.star() * &a.star())));
        prop_assert!(close(&a.scale(x).star(), &a.star().scale(x.conj())));
    }

    #[test]
    fn superstar_is_an_automorphism((p, y) in homogeneous(), z in element(), x in coef()) {
        prop_assert_eq!(y.superstar().unwrap().superstar().unwrap(), y.scale_real(p.sign()));
        prop_assert!(close(&(&y * &z).superstar().unwrap(), &(&y.superstar().unwrap() * &z.superstar().unwrap())));
        prop_assert!(close(&y.scale(x).superstar().unwrap(), &y.superstar().unwrap().scale(x.conj())));
        prop_assert_eq!(y.superstar().unwrap().parity().ok(), y.parity().ok());
    }

    #[test]
    fn inverse_when_body_is_nonzero(a in element(), shift in 0.5f64..2.0) {
        let z = &a + &GrassmannElement::real(N, shift + a.body().norm());
        let zi = z.inverse().unwrap();
        prop_assert!(close(&(&z * &zi), &GrassmannElement::one(N)));
        prop_assert!(close(&(&zi * &z), &GrassmannElement::one(N)));
    }

    #[test]
    fn norm_is_submultiplicative(a in element(), b in element()) {
        prop_assert!((&a * &b).norm_r() <= a.norm_r() * b.norm_r() + 1e-12);
    }

    #[test]
    fn supertranspose_has_order_four(m in matrix()) {
        let mut x = m.clone();
        for _ in 0..4 {
            x = x.supertranspose().unwrap();
        }
        prop_assert_eq!(x, m.clone());
        prop_assert_eq!(m.supertranspose().unwrap().inverse_supertranspose().unwrap(), m);
    }

    #[test]
    fn supertranspose_reverses_products((m, k) in matrix_pair()) {
        let sign = m.parity().sign_with(k.parity());
        let lhs = m.try_mul(&k).unwrap().supertranspose().unwrap();
        let rhs = k.supertranspose().unwrap().try_mul(&m.supertranspose().unwrap()).unwrap().scale(Complex::new(sign, 0.0));
        prop_assert!(close_m(&lhs, &rhs));
    }

    #[test]
    fn supertranspose_is_a_module_map(m in matrix(), (_, a) in homogeneous()) {
        let lhs = m.scale_left(&a).unwrap().supertranspose().unwrap();
        prop_assert!(close_m(&lhs, &m.supertranspose().unwrap().scale_left(&a).unwrap()));
    }

    #[test]
    fn supertrace_laws((m, k) in matrix_pair()) {
        prop_assert!(close(&m.supertranspose().unwrap().supertrace().unwrap(), &m.supertrace().unwrap()));
        let sign = m.parity().sign_with(k.parity());
        let lhs = m.try_mul(&k).unwrap().supertrace().unwrap();
        prop_assert!(close(&lhs, &k.try_mul(&m).unwrap().supertrace().unwrap().scale_real(sign)));
        if m.parity() == k.parity() {
            let sum = m.try_add(&k).unwrap().supertrace().unwrap();
            prop_assert!(close(&sum, &(&m.supertrace().unwrap() + &k.supertrace().unwrap())));
        }
    }

    #[test]
    fn product_degree_adds((m, k) in matrix_pair()) {
        let p = m.try_mul(&k).unwrap();
        prop_assert_eq!(p.parity(), m.parity() + k.parity());
        prop_assert!(p.validate().is_empty());
    }

    #[test]
    fn berezinian_laws(
        (m, k) in (0usize..=2, 1usize..=2)
            .prop_map(|(p, q)| SuperFormat { p, q })
            .prop_flat_map(|f| (matrix_in(f, Parity::Even), matrix_in(f, Parity::Even)))
    ) {
        // lift the bodies away from singular
        let f = m.format();
        let lift = |x: &SuperMatrix| x.try_add(&SuperMatrix::identity(f, N).scale(Complex::new(8.0, 0.0))).unwrap();
        let (m, k) = (lift(&m), lift(&k));
        let bm = m.berezinian().unwrap();
        let bk = k.berezinian().unwrap();
        let tol = 1e-10 * (1.0 + bm.norm_r() * bk.norm_r());
        prop_assert!(m.try_mul(&k).unwrap().berezinian().unwrap().max_coefficient_diff(&(&bm * &bk)) <= tol);
        prop_assert!(m.supertranspose().unwrap().berezinian().unwrap().max_coefficient_diff(&bm) <= tol);
        prop_assert!(m.inverse().unwrap().berezinian().unwrap().max_coefficient_diff(&bm.inverse().unwrap()) <= tol);
    }

    #[test]
    fn superadjoint_squares_to_degree_sign(m in matrix()) {
        let twice = m.superadjoint().unwrap().superadjoint().unwrap();
        prop_assert_eq!(twice, m.scale(Complex::new(m.parity().sign(), 0.0)));
    }

    #[test]
    fn parity_orthogonality(f in space()) {
        let even = SuperKet::from_coords(f, Parity::Even, N, (0..f.dim()).map(|k| {
            GrassmannElement::generator(N, 1).map(|g| if f.slot_parity(k) == Parity::Odd { g } else { GrassmannElement::one(N) }).unwrap()
        }).collect()).unwrap();
        let odd = SuperKet::from_coords(f, Parity::Odd, N, (0..f.dim()).map(|k| {
            GrassmannElement::generator(N, 2).map(|g| if f.slot_parity(k) == Parity::Even { g } else { GrassmannElement::one(N) }).unwrap()
        }).collect()).unwrap();
        prop_assert!(superstate::inner(&even, &odd).unwrap().is_zero());
    }

    #[test]
    fn inner_product_is_hermitian(
        (a, b) in (space(), parity()).prop_flat_map(|(f, p)| (ket_in(f, p), ket_in(f, p)))
    ) {
        let ab = superstate::inner(&a, &b).unwrap();
        prop_assert!(close(&ab.superstar().unwrap(), &superstate::inner(&b, &a).unwrap()));
    }

    #[test]
    fn body_norm_is_positive(k in (space()).prop_flat_map(|f| ket_in(f, Parity::Even))) {
        let body: f64 = k.body().unwrap().iter().map(|c| c.norm_sqr()).sum();
        let norm = superstate::inner(&k, &k).unwrap().body();
        prop_assert!((norm.re - body).abs() <= 1e-12 && norm.im.abs() <= 1e-12);
    }

    #[test]
    fn dual_powers(k in ket()) {
        let two = k.dual().unwrap().dual().unwrap();
        prop_assert_eq!(two.clone(), k.scale(&GrassmannElement::real(N, k.parity().sign()), Side::Right).unwrap());
        prop_assert_eq!(two.dual().unwrap().dual().unwrap(), k);
    }

    #[test]
    fn scaled_dual((k, (dz, z)) in (ket(), homogeneous())) {
        let lhs = k.scale(&z, Side::Right).unwrap().dual().unwrap();
        let zs = z.superstar().unwrap().scale_real(k.parity().sign_with(dz));
        let rhs = k.dual().unwrap().scale(&zs, Side::Left).unwrap();
        prop_assert!(lhs.max_coefficient_diff(&rhs) <= 1e-12);
    }

    #[test]
    fn density_supertrace(k in ket()) {
        let rho = superstate::outer(&k).unwrap();
        let norm = superstate::inner(&k, &k).unwrap().scale_real(k.parity().sign());
        prop_assert!(rho.supertrace().unwrap().max_coefficient_diff(&norm) <= 1e-12);
    }

    #[test]
    fn adjoint_identity(
        (t, phi, psi) in (space(), parity(), parity()).prop_flat_map(|(f, pt, pp)| {
            (matrix_in(f.matrix_format(), pt), ket_in(f, pp), ket_in(f, pp + pt))
        })
    ) {
        let op = superstate::GradedOperator::new(t).unwrap();
        prop_assert!(superstate::superadjoint_residual(&op, &phi, &psi).unwrap() <= 1e-10);
    }

    #[test]
    fn product_states_are_separable(u in proptest::array::uniform2(coef()), v in proptest::array::uniform2(coef())) {
        let nu = (u[0].norm_sqr() + u[1].norm_sqr()).sqrt();
        let nv = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        prop_assume!(nu > 1e-3 && nv > 1e-3);
        let (u, v) = ([u[0] / nu, u[1] / nu], [v[0] / nv, v[1] / nv]);
        let t = TwoPartyTable::qubit([[u[0] * v[0], u[0] * v[1]], [u[1] * v[0], u[1] * v[1]]], N);
        prop_assert!(entangle::concurrence(&t, false).unwrap() <= 1e-12);
        prop_assert!(entangle::is_separable(&t, 1e-10).unwrap().separable);
    }

    #[test]
    fn concurrence_is_bounded(w in proptest::array::uniform4(coef())) {
        let norm = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        let t = TwoPartyTable::qubit([[w[0] / norm, w[1] / norm], [w[2] / norm, w[3] / norm]], N);
        let c = entangle::concurrence(&t, false).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&c));
        prop_assert_eq!(entangle::tangle(&t, false).unwrap(), c * c);
    }

    #[test]
    fn element_files_round_trip(a in element()) {
        let text = io::to_canonical(&io::element_to_file(&a));
        let back = io::element_from_file(&io::parse(&text).unwrap()).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(io::to_canonical(&io::element_to_file(&back)), text);
    }

    #[test]
    fn matrix_files_round_trip(m in matrix()) {
        let text = io::to_canonical(&io::matrix_to_file(&m));
        let back = io::matrix_from_file(&io::parse(&text).unwrap()).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(io::to_canonical(&io::matrix_to_file(&back)), text);
    }

    #[test]
    fn state_files_round_trip(k in ket()) {
        let text = io::to_canonical(&io::state_to_file(&k));
        let back = io::state_from_file(&io::parse(&text).unwrap()).unwrap();
        prop_assert_eq!(&back, &k);
    }
}
