//! Seeded random parameter draws for the identity fuzzers.
//!
//! `ω ∈ [0.5, 2]`, `λ, δ ∈ [-0.9, 0.9]`, rejecting `|ω - λ - δ| < 0.05`;
//! `m = ħ = 1`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::ModelParams;

pub const GAP_REJECT: f64 = 0.05;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn draw_params<R: Rng>(rng: &mut R, beta: f64) -> ModelParams {
    loop {
        let omega: f64 = rng.random_range(0.5..=2.0);
        let lambda = rng.random_range(-0.9..=0.9);
        let delta = rng.random_range(-0.9..=0.9);
        if (omega - lambda - delta).abs() < GAP_REJECT {
            continue;
        }
        if let Ok(p) = ModelParams::new(omega, lambda, delta, 1.0, 1.0, beta) {
            return p;
        }
    }
}

/// Draws in the reduced regime `λ = -δ`.
pub fn draw_reduced<R: Rng>(rng: &mut R, beta: f64) -> ModelParams {
    let omega: f64 = rng.random_range(0.5..=2.0);
    let delta = rng.random_range(-0.9..=0.9);
    ModelParams::reduced(omega, delta, beta).expect("omega >= 0.5 keeps the gap open")
}

/// Draws with a real, bounded-below spectrum: `ω² > 4λδ` and `ω > λ + δ`.
pub fn draw_spectral<R: Rng>(rng: &mut R) -> ModelParams {
    loop {
        let p = draw_params(rng, 0.0);
        if p.discriminant() > 0.0 && p.gap() > 0.0 {
            return p;
        }
    }
}

pub fn batch(seed: u64, count: usize, beta: f64) -> Vec<ModelParams> {
    let mut r = rng(seed);
    (0..count).map(|_| draw_params(&mut r, beta)).collect()
}

pub fn batch_reduced(seed: u64, count: usize, beta: f64) -> Vec<ModelParams> {
    let mut r = rng(seed);
    (0..count).map(|_| draw_reduced(&mut r, beta)).collect()
}
