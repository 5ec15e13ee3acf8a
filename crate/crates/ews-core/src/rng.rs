//! Seed derivation and the count/continuous samplers used by the cohort
//! generator and the learners.
//!
//! Every randomized component derives an independent ChaCha stream from
//! `(master seed, context tags)`, so concurrent execution of independent
//! jobs can never change results.

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic RNG used throughout the crate.
pub type SimRng = ChaCha8Rng;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mix a master seed with context tags into an independent stream seed.
pub fn derive_seed(base: u64, tags: &[u64]) -> u64 {
    let mut state = base ^ 0x6a09_e667_f3bc_c908;
    let mut out = splitmix64(&mut state);
    for &t in tags {
        state ^= t;
        out ^= splitmix64(&mut state);
    }
    out
}

/// Hash a string tag so textual identifiers can participate in seed derivation.
pub fn tag(s: &str) -> u64 {
    // FNV-1a
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// RNG seeded from a derived stream.
pub fn rng_from(base: u64, tags: &[u64]) -> SimRng {
    SimRng::seed_from_u64(derive_seed(base, tags))
}

/// Standard normal draw (Marsaglia polar method).
pub fn normal(rng: &mut SimRng) -> f64 {
    loop {
        let u: f64 = 2.0 * rng.gen::<f64>() - 1.0;
        let v: f64 = 2.0 * rng.gen::<f64>() - 1.0;
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            return u * (-2.0 * s.ln() / s).sqrt();
        }
    }
}

/// Gamma(shape, scale) draw via Marsaglia–Tsang, with the alpha < 1 boost.
pub fn gamma(rng: &mut SimRng, shape: f64, scale: f64) -> f64 {
    debug_assert!(shape > 0.0 && scale > 0.0);
    if shape < 1.0 {
        let u: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
        return gamma(rng, shape + 1.0, scale) * u.powf(1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = normal(rng);
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v3 = v * v * v;
        let u: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
        if u.ln() < 0.5 * x * x + d - d * v3 + d * v3.ln() {
            return d * v3 * scale;
        }
    }
}

/// Poisson draw. Knuth's product method for small means, normal
/// approximation with rounding above (means here stay well inside the
/// accurate range for count generation).
pub fn poisson(rng: &mut SimRng, mean: f64) -> u32 {
    debug_assert!(mean >= 0.0);
    if mean <= 0.0 {
        return 0;
    }
    if mean < 60.0 {
        let limit = (-mean).exp();
        let mut k = 0u32;
        let mut p = 1.0;
        loop {
            p *= rng.gen::<f64>();
            if p <= limit {
                return k;
            }
            k += 1;
        }
    }
    let draw = mean + mean.sqrt() * normal(rng);
    if draw < 0.0 {
        0
    } else {
        draw.round() as u32
    }
}
