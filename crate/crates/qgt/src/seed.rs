//! Deterministic sub-seed derivation.
//!
//! Experiments hold a single top-level seed; every consumer (topology draw,
//! weight perturbation, cost generation, initial state) gets its own stream
//! derived here so that changing one knob never shifts another's randomness.

/// SplitMix64 finalizer over `(seed, stream)`.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
