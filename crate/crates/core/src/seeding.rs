//! Deterministic seed derivation so parallel work gets independent,
//! schedule-independent randomness.

/// SplitMix64 step: derive a sub-seed from a base seed and an index.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distinct_indices_give_distinct_seeds() {
        let seeds: std::collections::HashSet<u64> =
            (0..1000).map(|i| derive_seed(7, i)).collect();
        assert_eq!(seeds.len(), 1000);
    }

    #[test]
    fn deterministic() {
        assert_eq!(derive_seed(123, 45), derive_seed(123, 45));
        assert_ne!(derive_seed(123, 45), derive_seed(124, 45));
    }
}
