//! Philox4x32-10 counter-based generator.
//!
//! Each 128-bit counter value is encrypted under the 64-bit key into four
//! output words, emitted word 0 first. The counter advances by one (with
//! carry across all four words) when a block is produced.

const M0: u32 = 0xD251_1F53;
const M1: u32 = 0xCD9E_8D57;
const W0: u32 = 0x9E37_79B9;
const W1: u32 = 0xBB67_AE85;
pub const ROUNDS: usize = 10;

#[inline(always)]
fn mulhilo(a: u32, b: u32) -> (u32, u32) {
    let p = a as u64 * b as u64;
    ((p >> 32) as u32, p as u32)
}

#[inline(always)]
fn round(ctr: [u32; 4], key: [u32; 2]) -> [u32; 4] {
    let (hi0, lo0) = mulhilo(M0, ctr[0]);
    let (hi1, lo1) = mulhilo(M1, ctr[2]);
    [hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0]
}

/// The keyed bijection on one counter block.
pub fn philox4x32_10(mut ctr: [u32; 4], mut key: [u32; 2]) -> [u32; 4] {
    ctr = round(ctr, key);
    for _ in 1..ROUNDS {
        key[0] = key[0].wrapping_add(W0);
        key[1] = key[1].wrapping_add(W1);
        ctr = round(ctr, key);
    }
    ctr
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Philox4x32 {
    counter: [u32; 4],
    key: [u32; 2],
    block: [u32; 4],
    /// Next word of `block` to emit; 4 means the block is used up.
    buffer_index: usize,
}

impl Philox4x32 {
    pub fn new(counter: [u32; 4], key: [u32; 2]) -> Self {
        Philox4x32 {
            counter,
            key,
            block: [0; 4],
            buffer_index: 4,
        }
    }

    pub fn counter(&self) -> [u32; 4] {
        self.counter
    }

    pub fn counter_u128(&self) -> u128 {
        self.counter
            .iter()
            .rev()
            .fold(0u128, |acc, &w| (acc << 32) | w as u128)
    }

    pub fn key(&self) -> [u32; 2] {
        self.key
    }

    pub fn buffer_index(&self) -> usize {
        self.buffer_index
    }

    #[inline(always)]
    fn increment_counter(&mut self) {
        for w in &mut self.counter {
            *w = w.wrapping_add(1);
            if *w != 0 {
                break;
            }
        }
    }

    #[inline]
    fn next_block(&mut self) -> [u32; 4] {
        let out = philox4x32_10(self.counter, self.key);
        self.increment_counter();
        out
    }

    #[inline]
    pub fn next_u32(&mut self) -> u32 {
        if self.buffer_index == 4 {
            self.block = self.next_block();
            self.buffer_index = 0;
        }
        let v = self.block[self.buffer_index];
        self.buffer_index += 1;
        v
    }

    pub fn fill_u32(&mut self, out: &mut [u32]) {
        let mut pos = 0;
        while pos < out.len() && self.buffer_index < 4 {
            out[pos] = self.next_u32();
            pos += 1;
        }
        let mut chunks = out[pos..].chunks_exact_mut(4);
        for chunk in &mut chunks {
            self.block = self.next_block();
            chunk.copy_from_slice(&self.block);
        }
        for v in chunks.into_remainder() {
            *v = self.next_u32();
        }
    }
}
