//! Seeded random matrices for property tests and the self-test command.
//! Entries are signed roots of unity over a small conductor, so every
//! sample is Schur invertible and exact arithmetic stays cheap.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::mat::Mat;
use crate::scalar::{Ctx, Scalar};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random entry +-z^k over the given exact context.
pub fn random_unit(rng: &mut ChaCha8Rng, ctx: &Ctx) -> Scalar {
    let conductor = match ctx {
        Ctx::Exact { conductor } => *conductor,
        Ctx::Float => panic!("sampling requires exact mode"),
    };
    let k = rng.gen_range(0..conductor) as i64;
    let root = Scalar::root_of_unity(ctx, k);
    if rng.gen_bool(0.5) {
        -&root
    } else {
        root
    }
}

/// Random matrix with +-z^k entries; always Schur invertible.
pub fn random_unit_matrix(rng: &mut ChaCha8Rng, n: usize, ctx: &Ctx) -> Mat {
    let entries = (0..n * n).map(|_| random_unit(rng, ctx)).collect();
    Mat::from_entries(n, *ctx, entries)
}

/// Random invertible matrix with +-z^k entries (rejection sampled).
pub fn random_invertible_matrix(rng: &mut ChaCha8Rng, n: usize, ctx: &Ctx) -> Mat {
    loop {
        let m = random_unit_matrix(rng, n, ctx);
        if m.is_invertible() {
            return m;
        }
    }
}

/// Random matrix with small integer entries, not necessarily invertible
/// in either sense.
pub fn random_integer_matrix(rng: &mut ChaCha8Rng, n: usize, ctx: &Ctx) -> Mat {
    let entries = (0..n * n)
        .map(|_| Scalar::from_int(ctx, rng.gen_range(-2..=2)))
        .collect();
    Mat::from_entries(n, *ctx, entries)
}
