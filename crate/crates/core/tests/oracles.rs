use pbox_core::poly::to_f64;
use pbox_core::series::Quadrature;
use pbox_core::{make_state, spectral_coefficient, BoxParams, Rational, RationalPoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_poly(rng: &mut ChaCha8Rng, degree: usize) -> RationalPoly {
    RationalPoly::from_coeffs(
        (0..=degree)
            .map(|_| Rational::new(rng.gen_range(-20i64..=20).into(), rng.gen_range(1i64..=4).into()))
            .collect(),
    )
}

#[test]
fn inner_products_match_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let (dp, dq) = (rng.gen_range(0..=12), rng.gen_range(0..=12));
        let p = random_poly(&mut rng, dp);
        let q = random_poly(&mut rng, dq);
        let exact = to_f64(&p.integrate_product(&q));
        let quad = Quadrature::new(1e-13).integrate(|x| p.evaluate_f64(x) * q.evaluate_f64(x)).unwrap();
        assert!((exact - quad).abs() <= 1e-10 * (1.0 + exact.abs()), "{exact} vs {quad}");
    }
}

#[test]
fn coefficients_match_quadrature_up_to_ten_thousand() {
    let shape = RationalPoly::from_ints(&[0, 3, -1, -4, 2]);
    let state = make_state(shape.clone(), BoxParams::default()).unwrap();
    let norm = to_f64(state.norm_sq()).sqrt();
    for n in [1u64, 2, 3, 10, 99, 1000, 4321, 10_000] {
        let w = n as f64 * std::f64::consts::PI;
        let quad = Quadrature::new(1e-14)
            .with_initial_panels(4 * n as usize)
            .integrate(|x| shape.evaluate_f64(x) / norm * std::f64::consts::SQRT_2 * (w * x).sin())
            .unwrap();
        let c = spectral_coefficient(&state, n).unwrap();
        assert!((c - quad).abs() <= 1e-12, "N = {n}: {c} vs {quad}");
    }
}
