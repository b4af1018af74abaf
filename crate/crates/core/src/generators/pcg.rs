//! PCG family members: 64/32 XSH-RR and 128/64 XSL-RR, both "setseq"
//! (selectable odd increment).

pub const PCG32_MULTIPLIER: u64 = 6_364_136_223_846_793_005;
/// Increment of the reference `PCG32_INITIALIZER`.
pub const PCG32_DEFAULT_INCREMENT: u64 = 0xda3e_39cb_94b9_5bdb;

pub const PCG64_MULTIPLIER: u128 = 0x2360_ed05_1fc6_5da4_4385_df64_9fcc_f645;
/// Increment of the reference `PCG64_INITIALIZER`.
pub const PCG64_DEFAULT_INCREMENT: u128 = 0x1_da3e_39cb_94b9_5bdb;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pcg32 {
    state: u64,
    increment: u64,
}

impl Pcg32 {
    /// Raw construction; `increment` is forced odd.
    pub fn from_parts(state: u64, increment: u64) -> Self {
        Pcg32 {
            state,
            increment: increment | 1,
        }
    }

    /// Reference `srandom_r`: state 0, step, add `init_state`, step.
    pub fn seeded(init_state: u64, increment: u64) -> Self {
        let mut rng = Pcg32::from_parts(0, increment);
        rng.step();
        rng.state = rng.state.wrapping_add(init_state);
        rng.step();
        rng
    }

    pub fn state(&self) -> u64 {
        self.state
    }

    pub fn increment(&self) -> u64 {
        self.increment
    }

    #[inline(always)]
    fn step(&mut self) {
        self.state = self
            .state
            .wrapping_mul(PCG32_MULTIPLIER)
            .wrapping_add(self.increment);
    }

    #[inline]
    pub fn next_u32(&mut self) -> u32 {
        let old = self.state;
        self.step();
        let xorshifted = (((old >> 18) ^ old) >> 27) as u32;
        xorshifted.rotate_right((old >> 59) as u32)
    }

    pub fn fill_u32(&mut self, out: &mut [u32]) {
        for v in out {
            *v = self.next_u32();
        }
    }
}

/// 128/64 XSL-RR. Native output is 64 bits; 32-bit draws split each 64-bit
/// output, low half first, keeping the high half for the next call.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pcg64 {
    state: u128,
    increment: u128,
    pending_high: Option<u32>,
}

impl Pcg64 {
    pub fn from_parts(state: u128, increment: u128) -> Self {
        Pcg64 {
            state,
            increment: increment | 1,
            pending_high: None,
        }
    }

    pub fn seeded(init_state: u128, increment: u128) -> Self {
        let mut rng = Pcg64::from_parts(0, increment);
        rng.step();
        rng.state = rng.state.wrapping_add(init_state);
        rng.step();
        rng
    }

    pub fn state(&self) -> u128 {
        self.state
    }

    pub fn increment(&self) -> u128 {
        self.increment
    }

    #[inline(always)]
    fn step(&mut self) {
        self.state = self
            .state
            .wrapping_mul(PCG64_MULTIPLIER)
            .wrapping_add(self.increment);
    }

    /// Steps first, then permutes the new state (the 128-bit variants do
    /// not output from the old state).
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.step();
        let s = self.state;
        let xored = ((s >> 64) as u64) ^ (s as u64);
        xored.rotate_right((s >> 122) as u32)
    }

    #[inline]
    pub fn next_u32(&mut self) -> u32 {
        if let Some(hi) = self.pending_high.take() {
            return hi;
        }
        let v = self.next_u64();
        self.pending_high = Some((v >> 32) as u32);
        v as u32
    }

    /// Uses a fresh 64-bit output; a buffered high half stays buffered.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        super::u64_to_unit_f64(self.next_u64())
    }

    pub fn fill_u32(&mut self, out: &mut [u32]) {
        let mut rest = out;
        if let Some(first) = rest.first_mut() {
            if let Some(hi) = self.pending_high.take() {
                *first = hi;
                rest = &mut rest[1..];
            }
        }
        let mut pairs = rest.chunks_exact_mut(2);
        for pair in &mut pairs {
            let v = self.next_u64();
            pair[0] = v as u32;
            pair[1] = (v >> 32) as u32;
        }
        if let [last] = pairs.into_remainder() {
            *last = self.next_u32();
        }
    }

    pub fn fill_f64(&mut self, out: &mut [f64]) {
        for v in out {
            *v = self.next_f64();
        }
    }
}
