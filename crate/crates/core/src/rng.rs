//! Seeding helpers. All randomness derives from one base seed; each sample
//! gets its own stream from a splitmix counter so campaigns are
//! reproducible regardless of evaluation order.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Qi;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the `index`-th sample of a campaign.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    splitmix64(base ^ splitmix64(index.wrapping_add(0x5851_f42d_4c95_7f2d)))
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Grid resolution: coordinates are multiples of 1/GRID_DEN.
pub const GRID_DEN: i64 = 64;
/// Grid half-width: real and imaginary parts lie in [-GRID_MAX, GRID_MAX].
pub const GRID_MAX: i64 = 3;

/// A Gaussian rational on the dyadic grid of the square [-3,3]², never 0.
pub fn grid_point<R: Rng>(rng: &mut R) -> Qi {
    let k = GRID_MAX * GRID_DEN;
    loop {
        let re = rng.gen_range(-k..=k);
        let im = rng.gen_range(-k..=k);
        if re == 0 && im == 0 {
            continue;
        }
        return Complex::new(
            BigRational::new(BigInt::from(re), BigInt::from(GRID_DEN)),
            BigRational::new(BigInt::from(im), BigInt::from(GRID_DEN)),
        );
    }
}

/// A random nonzero rational `n/d` with `|n| ≤ num_max`, `1 ≤ d ≤ den_max`.
pub fn small_rational<R: Rng>(rng: &mut R, num_max: i64, den_max: i64) -> BigRational {
    loop {
        let n = rng.gen_range(-num_max..=num_max);
        if n == 0 {
            continue;
        }
        let d = rng.gen_range(1..=den_max);
        return BigRational::new(BigInt::from(n), BigInt::from(d));
    }
}
