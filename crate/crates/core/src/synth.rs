//! Seeded test-signal generation.
//!
//! Values are drawn uniformly from `[-1, 1)` and rounded to `f32` before
//! conversion, so the same seed yields bit-identical inputs in either
//! precision.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::types::{FilterSet, Real, Samples, Signal, ValueKind};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn draw<T: Real>(rng: &mut impl Rng) -> T {
    T::lit(rng.gen_range(-1.0f32..1.0) as f64)
}

pub fn noise<T: Real>(len: usize, kind: ValueKind, rng: &mut impl Rng) -> Samples<T> {
    match kind {
        ValueKind::Real => Samples::Real((0..len).map(|_| draw(rng)).collect()),
        ValueKind::Complex => Samples::Complex((0..len).map(|_| Complex::new(draw(rng), draw(rng))).collect()),
    }
}

pub fn random_signal<T: Real>(len: usize, kind: ValueKind, seed: u64) -> Result<Signal<T>> {
    Signal::new(noise(len, kind, &mut rng(seed)))
}

pub fn random_filters<T: Real>(count: usize, taps: usize, kind: ValueKind, origin: usize, seed: u64) -> Result<FilterSet<T>> {
    let mut rng = rng(seed);
    FilterSet::new((0..count).map(|_| noise(taps, kind, &mut rng)).collect(), origin)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_data_across_precisions() {
        let a: Signal<f32> = random_signal(100, ValueKind::Complex, 7).unwrap();
        let b: Signal<f64> = random_signal(100, ValueKind::Complex, 7).unwrap();
        assert_eq!(a.samples().cast::<f64>(), *b.samples());
        let c: Signal<f32> = random_signal(100, ValueKind::Complex, 8).unwrap();
        assert_ne!(a, c);
    }
}
