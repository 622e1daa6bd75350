//! Canonical serialization and hashing.
//!
//! Every artifact that must be byte-reproducible (topology files, episode
//! traces, checkpoints, manifests) goes through [`to_canonical_string`]:
//! compact JSON with lexicographically sorted object keys. Hashes over
//! canonical bytes use 64-bit FNV-1a so that implementations in any
//! language can agree on trace identity.

use serde::Serialize;

/// FNV-1a 64-bit offset basis.
pub const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
/// FNV-1a 64-bit prime.
pub const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// 64-bit FNV-1a over a byte slice.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = FNV_OFFSET;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(FNV_PRIME);
    }
    hash
}

/// Serializes a value to compact JSON with sorted object keys.
///
/// Struct fields are routed through `serde_json::Value`, whose object map
/// is a `BTreeMap`, so key order is independent of field declaration order.
pub fn to_canonical_string<T: Serialize>(value: &T) -> Result<String, serde_json::Error> {
    let v = serde_json::to_value(value)?;
    serde_json::to_string(&v)
}

/// Hex form (16 lowercase digits) of the FNV-1a hash of a value's
/// canonical serialization.
pub fn hash_hex<T: Serialize>(value: &T) -> String {
    let s = to_canonical_string(value).expect("canonical serialization cannot fail for plain data");
    format!("{:016x}", fnv1a64(s.as_bytes()))
}

/// Rounds to 6 decimal places and normalizes -0.0 to 0.0.
///
/// Rewards and reward components are rounded before they enter traces or
/// CSV files so serialized bytes are stable.
pub fn round6(x: f64) -> f64 {
    let r = (x * 1e6).round() / 1e6;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn fnv1a64_known_vectors() {
        // Reference values for the standard FNV-1a 64 parameters.
        assert_eq!(fnv1a64(b""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a64(b"a"), 0xaf63_dc4c_8601_ec8c);
        assert_eq!(fnv1a64(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn canonical_keys_sorted() {
        #[derive(serde::Serialize)]
        struct Out {
            zeta: u32,
            alpha: u32,
        }
        let s = to_canonical_string(&Out { zeta: 1, alpha: 2 }).unwrap();
        assert_eq!(s, r#"{"alpha":2,"zeta":1}"#);
    }

    #[test]
    fn canonical_nested_maps_sorted() {
        let mut inner = BTreeMap::new();
        inner.insert("b", 1);
        inner.insert("a", 2);
        let s = to_canonical_string(&inner).unwrap();
        assert_eq!(s, r#"{"a":2,"b":1}"#);
    }

    #[test]
    fn round6_behavior() {
        assert_eq!(round6(0.1234567), 0.123457);
        assert_eq!(round6(-1e-9), 0.0);
        assert!(round6(-1e-9).is_sign_positive());
        assert_eq!(round6(-1.5), -1.5);
    }
}
