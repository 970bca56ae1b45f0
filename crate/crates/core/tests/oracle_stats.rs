use rso_core::oracle::{noise_stats, NoiseKind, NoisyOracle};
use rso_core::testfns::{make_cosh, make_quadratic};
use rso_core::Vector;

const N: usize = 100_000;

#[test]
fn gaussian_unbiased_with_total_variance_sigma_squared() {
    let f = make_quadratic(1.0, 4).unwrap();
    let x = Vector::new(vec![0.5, -1.0, 2.0, 0.0]).unwrap();
    let mut o = NoisyOracle::new(f, 1.5, NoiseKind::Gaussian, 11).unwrap();
    let s = noise_stats(&mut o, &x, N).unwrap();
    assert!(s.within(5.0), "{s:?}");
    assert!((s.mean_sq_norm - 2.25).abs() < 0.05);
}

#[test]
fn sphere_unbiased_with_exact_norm() {
    let f = make_quadratic(1.0, 3).unwrap();
    let x = Vector::new(vec![1.0, 2.0, 3.0]).unwrap();
    let mut o = NoisyOracle::new(f, 0.7, NoiseKind::Sphere, 12).unwrap();
    let s = noise_stats(&mut o, &x, N).unwrap();
    assert!(s.within(5.0), "{s:?}");
    assert_eq!(s.sq_norm_z, 0.0);
}

#[test]
fn one_dimensional_sphere_is_sign_flip() {
    let f = make_cosh(1.0).unwrap();
    let x = Vector::scalar(0.3).unwrap();
    let mut o = NoisyOracle::new(f, 2.0, NoiseKind::Sphere, 13).unwrap();
    let s = noise_stats(&mut o, &x, N).unwrap();
    assert!(s.within(5.0), "{s:?}");
}
