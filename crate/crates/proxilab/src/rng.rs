//! Deterministic random-number streams.
//!
//! Every sampling routine in the crate derives its generator from a single
//! top-level seed plus a domain label and an index. ChaCha streams make the
//! expansion counter-based: the same (seed, domain, index) triple always
//! yields the same sequence, independent of how work is scheduled across
//! threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Generator for stream `index` of the named sampling domain.
pub fn stream(seed: u64, domain: &str, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a(domain.as_bytes()).wrapping_add(index));
    rng
}

/// Standard normal deviate (Box-Muller; consumes two uniforms).
pub fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.gen::<f64>();
        if u <= f64::MIN_POSITIVE {
            continue;
        }
        let v: f64 = rng.gen::<f64>();
        return (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos();
    }
}

/// Vector of independent standard normal deviates.
pub fn gaussian_vector<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| gaussian(rng)).collect()
}
