//! Seed derivation shared by every stochastic component.

/// One round of the SplitMix64 output function.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for item `index` under `global`.
#[inline]
pub fn derive_seed(global: u64, index: u64) -> u64 {
    splitmix64(splitmix64(global) ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

/// Uniform value in `[0, 1)` from a hash, using the top 53 bits.
#[inline]
pub fn unit_f64(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
