//! WELL19937a (no tempering). The state index walks downwards through a
//! 624-word circular buffer; every draw rewrites two words.

pub const R: usize = 624;
const M1: usize = 70;
const M2: usize = 179;
const M3: usize = 449;
const MASK_U: u32 = 0x7fff_ffff;
const MASK_L: u32 = !MASK_U;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Well19937a {
    state: [u32; R],
    index: usize,
}

impl Well19937a {
    pub fn from_state(state: [u32; R]) -> Self {
        Well19937a { state, index: 0 }
    }

    pub fn state(&self) -> &[u32; R] {
        &self.state
    }

    pub fn index(&self) -> usize {
        self.index
    }

    #[inline]
    pub fn next_u32(&mut self) -> u32 {
        let s = &mut self.state;
        let i = self.index;
        let at = |k: usize| (i + k) % R;

        let z0 = (s[at(R - 1)] & MASK_L) | (s[at(R - 2)] & MASK_U);
        let v0 = s[i];
        let vm1 = s[at(M1)];
        let z1 = (v0 ^ (v0 << 25)) ^ (vm1 ^ (vm1 >> 27));
        let vm3 = s[at(M3)];
        let z2 = (s[at(M2)] >> 9) ^ (vm3 ^ (vm3 >> 1));
        let new_v1 = z1 ^ z2;
        s[i] = new_v1;
        let prev = at(R - 1);
        s[prev] = z0 ^ (z1 ^ (z1 << 9)) ^ (z2 ^ (z2 << 21)) ^ (new_v1 ^ (new_v1 >> 21));
        self.index = prev;
        s[prev]
    }

    pub fn fill_u32(&mut self, out: &mut [u32]) {
        for v in out {
            *v = self.next_u32();
        }
    }
}
