//! Berlekamp–Massey over GF(2) on bit-packed sequences.

/// Bit sequence packed little-endian into u64 words (bit i at word i/64, bit i%64).
#[derive(Clone, Debug, Default)]
pub struct BitSeq {
    words: Vec<u64>,
    len: usize,
}

impl BitSeq {
    pub fn with_capacity(bits: usize) -> Self {
        BitSeq {
            words: Vec::with_capacity(bits / 64 + 1),
            len: 0,
        }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut s = BitSeq::with_capacity(bits.len());
        for &b in bits {
            s.push(b & 1 == 1);
        }
        s
    }

    pub fn push(&mut self, bit: bool) {
        if self.len % 64 == 0 {
            self.words.push(0);
        }
        if bit {
            self.words[self.len / 64] |= 1 << (self.len % 64);
        }
        self.len += 1;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinearComplexity {
    /// Length of the shortest LFSR generating the whole sequence.
    pub complexity: usize,
    /// Number of times the profile L(N) increased.
    pub jumps: usize,
}

fn read_window(words: &[u64], bit: usize) -> u64 {
    let q = bit / 64;
    let sh = bit % 64;
    let lo = words.get(q).copied().unwrap_or(0);
    if sh == 0 {
        lo
    } else {
        let hi = words.get(q + 1).copied().unwrap_or(0);
        lo >> sh | hi << (64 - sh)
    }
}

/// `dst ^= src << shift`, touching only words below `dst.len()`.
fn xor_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let q = shift / 64;
    let sh = shift % 64;
    for (k, &w) in src.iter().enumerate() {
        if w == 0 {
            continue;
        }
        if k + q < dst.len() {
            dst[k + q] ^= w << sh;
        }
        if sh != 0 && k + q + 1 < dst.len() {
            dst[k + q + 1] ^= w >> (64 - sh);
        }
    }
}

/// Linear complexity and profile jump count of `seq`.
pub fn linear_complexity(seq: &BitSeq) -> LinearComplexity {
    let n = seq.len();
    // r[j] = s[n-1-j]; the discrepancy window for step N starts at n-1-N.
    let mut rev = BitSeq::with_capacity(n);
    for i in (0..n).rev() {
        rev.push(seq.get(i));
    }
    let mut r = rev.words;
    r.push(0);

    let cap = n / 64 + 2;
    let mut c = vec![0u64; cap];
    let mut b = vec![0u64; cap];
    let mut scratch = vec![0u64; cap];
    c[0] = 1;
    b[0] = 1;
    let mut l = 0usize;
    let mut l_b = 0usize;
    let mut m = 1usize;
    let mut jumps = 0usize;

    for step in 0..n {
        let origin = n - 1 - step;
        let nwords = l / 64 + 1;
        let mut acc = 0u64;
        for (k, &cw) in c[..nwords].iter().enumerate() {
            acc ^= cw & read_window(&r, origin + 64 * k);
        }
        // Only bits 0..=l of C can be set, but the window may carry bits past
        // the sequence end; those sit above position l and are masked by C.
        if acc.count_ones() & 1 == 0 {
            m += 1;
            continue;
        }
        let span = ((l_b + m) / 64 + 2).min(cap);
        let b_words = (l_b / 64 + 1).min(cap);
        if 2 * l <= step {
            let keep = nwords.max(span);
            scratch[..keep].copy_from_slice(&c[..keep]);
            xor_shifted(&mut c[..span], &b[..b_words], m);
            std::mem::swap(&mut b, &mut scratch);
            l_b = l;
            l = step + 1 - l;
            m = 1;
            jumps += 1;
        } else {
            xor_shifted(&mut c[..span], &b[..b_words], m);
            m += 1;
        }
    }
    LinearComplexity {
        complexity: l,
        jumps,
    }
}

/// Shortest LFSR length of a 0/1 byte sequence.
pub fn berlekamp_massey(bits: &[u8]) -> usize {
    linear_complexity(&BitSeq::from_bits(bits)).complexity
}

/// Exact mean and variance of the jump count for `n` iid fair bits.
///
/// Tracks e = 2L − N: when e ≤ 0 a discrepancy (probability ½) jumps to
/// 1 − e, otherwise the walk drifts to e − 1.
pub fn jump_moments(n: usize) -> (f64, f64) {
    const SPAN: i64 = 80;
    let size = (2 * SPAN + 1) as usize;
    let idx = |e: i64| (e + SPAN) as usize;
    let mut p = vec![0.0f64; size];
    let mut m1 = vec![0.0f64; size];
    let mut m2 = vec![0.0f64; size];
    p[idx(0)] = 1.0;
    let mut np = vec![0.0f64; size];
    let mut nm1 = vec![0.0f64; size];
    let mut nm2 = vec![0.0f64; size];
    for _ in 0..n {
        np.iter_mut().for_each(|v| *v = 0.0);
        nm1.iter_mut().for_each(|v| *v = 0.0);
        nm2.iter_mut().for_each(|v| *v = 0.0);
        for e in -SPAN..=SPAN {
            let i = idx(e);
            let (pe, a, b) = (p[i], m1[i], m2[i]);
            if pe == 0.0 && a == 0.0 {
                continue;
            }
            let down = e - 1;
            if e > 0 {
                let j = idx(down);
                np[j] += pe;
                nm1[j] += a;
                nm2[j] += b;
            } else {
                if down >= -SPAN {
                    let j = idx(down);
                    np[j] += 0.5 * pe;
                    nm1[j] += 0.5 * a;
                    nm2[j] += 0.5 * b;
                }
                let up = 1 - e;
                if up <= SPAN {
                    let j = idx(up);
                    np[j] += 0.5 * pe;
                    nm1[j] += 0.5 * (a + pe);
                    nm2[j] += 0.5 * (b + 2.0 * a + pe);
                }
            }
        }
        std::mem::swap(&mut p, &mut np);
        std::mem::swap(&mut m1, &mut nm1);
        std::mem::swap(&mut m2, &mut nm2);
    }
    let mass: f64 = p.iter().sum();
    let mean = m1.iter().sum::<f64>() / mass;
    let second = m2.iter().sum::<f64>() / mass;
    (mean, second - mean * mean)
}
