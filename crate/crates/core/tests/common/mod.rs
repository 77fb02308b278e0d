#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use szilard_core::{CanonicalBox, PartitionModel, ThermalPoint};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// theta_3(0, q) by direct summation with no term cap.
pub fn brute_theta3(q: f64) -> f64 {
    let mut sum = 1.0;
    let mut n = 1u64;
    loop {
        let t = 2.0 * q.powf((n * n) as f64);
        if t < sum * 1e-19 {
            return sum;
        }
        sum += t;
        n += 1;
    }
}

/// `ln Z` of a box at inverse temperature `beta`.
pub fn ln_z(length: f64, beta: f64, model: PartitionModel) -> f64 {
    let t = ThermalPoint::from_beta(beta).unwrap();
    CanonicalBox::new(length, t, model)
        .unwrap()
        .ln_partition()
        .unwrap()
}

/// Central difference of `-ln Z` in beta with step `1e-5 beta`.
pub fn fd_energy(length: f64, beta: f64, model: PartitionModel) -> f64 {
    let h = 1e-5 * beta;
    -(ln_z(length, beta + h, model) - ln_z(length, beta - h, model)) / (2.0 * h)
}

/// Central difference of `(1 - beta d/dbeta) ln Z`.
pub fn fd_entropy(length: f64, beta: f64, model: PartitionModel) -> f64 {
    ln_z(length, beta, model) + beta * fd_energy(length, beta, model)
}

/// A random valid (length, beta, model) triple.
pub fn random_box(rng: &mut impl Rng) -> (f64, f64, PartitionModel) {
    loop {
        let length: f64 = rng.gen_range(0.05..=1.0);
        let lambda: f64 = rng.gen_range(0.01..3.0);
        let model = PartitionModel::ALL[rng.gen_range(0..4)];
        if model == PartitionModel::Semiclassical && length / lambda <= 0.55 {
            continue;
        }
        return (length, lambda * lambda / (2.0 * PI), model);
    }
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
