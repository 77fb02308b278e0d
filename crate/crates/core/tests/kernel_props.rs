mod common;

use std::f64::consts::PI;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use szilard_core::theta::{spectral_sums, theta3, Nome, DEFAULT_REL_TOL};
use szilard_core::{classify_regime, CanonicalBox, PartitionModel, Regime, ThermalPoint};

#[test]
fn theta3_matches_brute_force_on_random_nomes() {
    let mut rng = rng(7);
    for _ in 0..100 {
        let q: f64 = rng.gen_range(0.001..0.999);
        let got = theta3(Nome::new(q).unwrap(), DEFAULT_REL_TOL).unwrap();
        let oracle = brute_theta3(q);
        assert!(rel(got.value, oracle) <= 1e-10, "q = {q}");
        assert!(got.terms_used <= 10);
        assert!(got.truncation_bound <= DEFAULT_REL_TOL * got.value);
    }
}

#[test]
fn theta3_is_increasing() {
    let mut previous = 1.0;
    for i in 1..1000 {
        let q = f64::from(i) / 1000.0;
        let v = theta3(Nome::new(q).unwrap(), DEFAULT_REL_TOL)
            .unwrap()
            .value;
        assert!(v > previous, "q = {q}");
        previous = v;
    }
}

#[test]
fn series_sum_is_theta_identity() {
    let mut rng = rng(11);
    for _ in 0..100 {
        let length: f64 = rng.gen_range(0.05..=1.0);
        let beta: f64 = rng.gen_range(0.001..3.0);
        let sums = spectral_sums(length, beta, DEFAULT_REL_TOL).unwrap();
        let q = (-beta * PI * PI / (2.0 * length * length)).exp();
        if q < 1e-300 {
            continue;
        }
        let direct: f64 = (1..400).map(|n: i32| q.powf(f64::from(n * n))).sum();
        assert!(rel(sums.z, direct) <= 1e-12, "l = {length}, beta = {beta}");
        // (theta - 1) / 2 amplifies the theta tolerance by theta / (theta - 1).
        let theta = theta3(Nome::new(q).unwrap(), DEFAULT_REL_TOL)
            .unwrap()
            .value;
        let amplified = 1e-12 * theta / (theta - 1.0);
        assert!(
            rel(sums.z, (theta - 1.0) / 2.0) <= 2.0 * amplified,
            "l = {length}, beta = {beta}"
        );
    }
}

#[test]
fn weighted_sum_is_minus_beta_derivative() {
    let mut rng = rng(13);
    let mut checked = 0;
    while checked < 100 {
        let length: f64 = rng.gen_range(0.05..=1.0);
        let beta: f64 = rng.gen_range(0.0001..3.0);
        let z = |b: f64| spectral_sums(length, b, DEFAULT_REL_TOL).unwrap().z;
        if z(beta * 1.001) < 1e-250 {
            continue;
        }
        // Curvature scale is the smaller of beta and 1 / E1.
        let h = 1e-4 * beta.min(2.0 * length * length / (PI * PI));
        let fd = -(z(beta + h) - z(beta - h)) / (2.0 * h);
        let sums = spectral_sums(length, beta, DEFAULT_REL_TOL).unwrap();
        assert!(sums.z > 0.0 && sums.energy_weighted > 0.0);
        assert!(
            rel(sums.energy_weighted, fd) <= 1e-6,
            "l = {length}, beta = {beta}"
        );
        checked += 1;
    }
}

#[test]
fn energy_matches_finite_differences_for_all_models() {
    let mut rng = rng(17);
    for _ in 0..50 {
        let (length, beta, model) = random_box(&mut rng);
        let b = CanonicalBox::new(length, ThermalPoint::from_beta(beta).unwrap(), model).unwrap();
        let u = b.internal_energy().unwrap();
        let fd = fd_energy(length, beta, model);
        assert!(
            rel(u, fd) <= 1e-6,
            "{model} l = {length} beta = {beta}: {u} vs {fd}"
        );
    }
}

#[test]
fn entropy_matches_finite_differences() {
    let mut rng = rng(19);
    for _ in 0..50 {
        let (length, beta, model) = random_box(&mut rng);
        let b = CanonicalBox::new(length, ThermalPoint::from_beta(beta).unwrap(), model).unwrap();
        let s = b.entropy().unwrap();
        let fd = fd_entropy(length, beta, model);
        // Relative to the magnitudes that cancel in ln Z + beta U.
        let scale = ln_z(length, beta, model).abs().max(1.0);
        assert!(
            (s - fd).abs() <= 1e-6 * scale,
            "{model} l = {length} beta = {beta}: {s} vs {fd}"
        );
    }
}

#[test]
fn semiclassical_tracks_exact_in_classical_limit() {
    for lambda in [0.001, 0.005, 0.01, 0.02, 0.05] {
        let t = ThermalPoint::from_lambda_d(lambda).unwrap();
        let z = |m| CanonicalBox::new(1.0, t, m).unwrap().partition().unwrap();
        let exact = z(PartitionModel::Exact);
        assert!(rel(z(PartitionModel::Semiclassical), exact) <= 1e-6);
        // The classical form misses the -1/2 boundary term.
        assert!((z(PartitionModel::Classical) - exact - 0.5).abs() <= 1e-6 * exact);
    }
}

#[test]
fn regime_breakpoints() {
    let mut last = None;
    let mut changes = Vec::new();
    for i in 1..=3000 {
        let lambda = f64::from(i) / 1000.0;
        let r = classify_regime(ThermalPoint::from_lambda_d(lambda).unwrap());
        if last.is_some_and(|l| l != r) {
            changes.push(lambda);
        }
        last = Some(r);
    }
    assert_eq!(changes, vec![0.1, 1.401]);
    assert_eq!(last, Some(Regime::Quantum));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn partition_ordering(length in 0.05f64..=1.0, lambda in 0.01f64..4.0) {
        let t = ThermalPoint::from_lambda_d(lambda).unwrap();
        let z = |m| CanonicalBox::new(length, t, m).map(|b| b.partition().unwrap());
        let exact = z(PartitionModel::Exact).unwrap();
        let ground = z(PartitionModel::GroundState).unwrap();
        let classical = z(PartitionModel::Classical).unwrap();
        prop_assert!(exact >= ground);
        if let Ok(semi) = z(PartitionModel::Semiclassical) {
            prop_assert!(classical > semi);
        }
    }

    #[test]
    fn exact_entropy_is_nonnegative(length in 0.02f64..=1.0, lambda in 0.001f64..10.0) {
        let t = ThermalPoint::from_lambda_d(lambda).unwrap();
        let s = CanonicalBox::new(length, t, PartitionModel::Exact).unwrap().entropy().unwrap();
        prop_assert!(s >= -1e-12);
    }

    #[test]
    fn free_energy_identity(length in 0.05f64..=1.0, lambda in 0.01f64..3.0, m in 0usize..4) {
        let model = PartitionModel::ALL[m];
        let t = ThermalPoint::from_lambda_d(lambda).unwrap();
        if let Ok(b) = CanonicalBox::new(length, t, model) {
            let s = b.state().unwrap();
            let f = b.free_energy().unwrap();
            let scale = s.energy.abs().max(f.abs()).max(1.0);
            prop_assert!((s.energy - s.entropy / t.beta() - f).abs() <= 1e-12 * scale);
        }
    }
}
