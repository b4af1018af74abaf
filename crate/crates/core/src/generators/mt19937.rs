//! MT19937, the 32-bit Mersenne Twister.

pub const N: usize = 624;
const M: usize = 397;
const MATRIX_A: u32 = 0x9908_b0df;
const UPPER_MASK: u32 = 0x8000_0000;
const LOWER_MASK: u32 = 0x7fff_ffff;

/// Seed-fill recurrence shared with WELL19937a seeding.
pub fn fill_state(seed: u32) -> [u32; N] {
    let mut mt = [0u32; N];
    mt[0] = seed;
    for i in 1..N {
        let prev = mt[i - 1];
        mt[i] = 1_812_433_253u32
            .wrapping_mul(prev ^ (prev >> 30))
            .wrapping_add(i as u32);
    }
    mt
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mt19937 {
    state: [u32; N],
    index: usize,
}

#[inline(always)]
fn temper(mut y: u32) -> u32 {
    y ^= y >> 11;
    y ^= (y << 7) & 0x9d2c_5680;
    y ^= (y << 15) & 0xefc6_0000;
    y ^ (y >> 18)
}

impl Mt19937 {
    /// Builds a generator from a raw state; the first draw twists it.
    pub fn from_state(state: [u32; N]) -> Self {
        Mt19937 { state, index: N }
    }

    pub fn state(&self) -> &[u32; N] {
        &self.state
    }

    pub fn index(&self) -> usize {
        self.index
    }

    fn twist(&mut self) {
        #[inline(always)]
        fn step(upper: u32, lower: u32, far: u32) -> u32 {
            let y = (upper & UPPER_MASK) | (lower & LOWER_MASK);
            far ^ (y >> 1) ^ (MATRIX_A & (y & 1).wrapping_neg())
        }
        let mt = &mut self.state;
        for kk in 0..N - M {
            mt[kk] = step(mt[kk], mt[kk + 1], mt[kk + M]);
        }
        for kk in N - M..N - 1 {
            mt[kk] = step(mt[kk], mt[kk + 1], mt[kk + M - N]);
        }
        mt[N - 1] = step(mt[N - 1], mt[0], mt[M - 1]);
        self.index = 0;
    }

    #[inline]
    pub fn next_u32(&mut self) -> u32 {
        if self.index >= N {
            self.twist();
        }
        let y = self.state[self.index];
        self.index += 1;
        temper(y)
    }

    /// 53-bit resolution double from two draws.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        let a = self.next_u32() >> 5;
        let b = self.next_u32() >> 6;
        (a as f64 * 67_108_864.0 + b as f64) * (1.0 / 9_007_199_254_740_992.0)
    }

    pub fn fill_u32(&mut self, out: &mut [u32]) {
        let mut pos = 0;
        while pos < out.len() {
            if self.index >= N {
                self.twist();
            }
            let take = (N - self.index).min(out.len() - pos);
            let src = &self.state[self.index..self.index + take];
            for (dst, &y) in out[pos..pos + take].iter_mut().zip(src) {
                *dst = temper(y);
            }
            self.index += take;
            pos += take;
        }
    }

    pub fn fill_f64(&mut self, out: &mut [f64]) {
        for v in out {
            *v = self.next_f64();
        }
    }
}
