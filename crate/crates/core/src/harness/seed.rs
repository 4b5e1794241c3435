use sha2::{Digest, Sha256};

/// Per-run seed: the first eight bytes, little-endian, of
/// `SHA-256("bnbench-seed-v1" || le64(master) || le64(len(fp)) || fp || le64(rep))`.
pub fn derive_run_seed(master_seed: u64, fingerprint: &str, rep_index: u64) -> u64 {
    let mut h = Sha256::new();
    h.update(b"bnbench-seed-v1");
    h.update(master_seed.to_le_bytes());
    h.update((fingerprint.len() as u64).to_le_bytes());
    h.update(fingerprint.as_bytes());
    h.update(rep_index.to_le_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}
