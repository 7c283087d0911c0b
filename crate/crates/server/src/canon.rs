//! Canonical JSON and content digests.
//!
//! Replay verification compares digests computed on different machines and
//! runs, so the byte form must be pinned: object keys in lexicographic
//! order, no insignificant whitespace, floats in shortest round-trip
//! decimal form. `serde_json` provides exactly this once all values pass
//! through its `Value` type, whose object map is sorted.

use serde_json::Value;
use sha2::{Digest, Sha256};

/// Serializes a JSON value in canonical form.
pub fn canonical_json(value: &Value) -> String {
    serde_json::to_string(value).expect("JSON value serializes")
}

/// SHA-256 of the canonical form, lowercase hex.
pub fn digest_json(value: &Value) -> String {
    hex::encode(Sha256::digest(canonical_json(value).as_bytes()))
}
