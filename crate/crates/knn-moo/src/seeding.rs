//! Stable seed derivation.
//!
//! Experiment reproducibility requires that the same named run gets the same
//! RNG stream on every platform and every release. `DefaultHasher` makes no
//! such promise, so we hash with FNV-1a (64-bit), which is fully specified
//! and trivially stable.

/// FNV-1a 64-bit hash of `bytes`.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(PRIME);
    }
    h
}

/// Derive a child seed from a base seed and a textual tag.
///
/// Used for per-run seeds (`"{approach}/{run_index}"`) and for splitting a
/// run's seed into independent substreams (`"ga"`, `"noise"`, `"assess"`).
pub fn derive_seed(base: u64, tag: &str) -> u64 {
    base ^ fnv1a64(tag.as_bytes())
}
