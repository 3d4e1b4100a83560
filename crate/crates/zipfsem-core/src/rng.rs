//! Seeded generator with a running fingerprint of every draw.
//!
//! All simulators draw from a [`TracedRng`]: ChaCha8 seeded from a 64-bit
//! seed, with an FNV-1a hash folded over each output word. Two runs consumed
//! the same random stream iff their [`TracedRng::trace_hash`] values agree.

use rand::{Error as RandError, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

#[derive(Clone, Debug)]
pub struct TracedRng {
    inner: ChaCha8Rng,
    hash: u64,
    draws: u64,
}

impl TracedRng {
    pub fn seed_from_u64(seed: u64) -> Self {
        TracedRng { inner: ChaCha8Rng::seed_from_u64(seed), hash: FNV_OFFSET, draws: 0 }
    }

    /// Fingerprint of all values drawn so far.
    pub fn trace_hash(&self) -> u64 {
        self.hash
    }

    /// Number of 32/64-bit words drawn so far.
    pub fn draws(&self) -> u64 {
        self.draws
    }

    #[inline]
    fn fold(&mut self, word: u64) {
        self.draws += 1;
        for b in word.to_le_bytes() {
            self.hash ^= b as u64;
            self.hash = self.hash.wrapping_mul(FNV_PRIME);
        }
    }
}

impl RngCore for TracedRng {
    fn next_u32(&mut self) -> u32 {
        let v = self.inner.next_u32();
        self.fold(v as u64);
        v
    }

    fn next_u64(&mut self) -> u64 {
        let v = self.inner.next_u64();
        self.fold(v);
        v
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        for chunk in dest.chunks_mut(8) {
            let v = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&v[..chunk.len()]);
        }
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), RandError> {
        self.fill_bytes(dest);
        Ok(())
    }
}
