//! Seeded randomness helpers. Every randomized probe in the crate takes an
//! explicit seed and derives per-task streams from it, so parallel runs stay
//! reproducible.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::scalar::Real;
use crate::Vector;

pub(crate) fn chacha(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `k` of a master seed.
pub(crate) fn substream(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k.wrapping_add(1));
    rng
}

/// Standard-normal vector.
pub(crate) fn gaussian_vector<S: Real>(rng: &mut impl Rng, dim: usize) -> Vector<S> {
    Vector::from_fn(dim, |_, _| S::of(rng.sample::<f64, _>(rand_distr::StandardNormal)))
}

/// Nonzero standard-normal vector.
pub(crate) fn random_direction<S: Real>(rng: &mut impl Rng, dim: usize) -> Vector<S> {
    loop {
        let v = gaussian_vector::<S>(rng, dim);
        if v.norm() > S::of(1e-6) {
            return v;
        }
    }
}

pub(crate) fn uniform<S: Real>(rng: &mut impl Rng, lo: f64, hi: f64) -> S {
    S::of(rng.gen_range(lo..hi))
}
