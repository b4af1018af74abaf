//! MRG32k3a combined multiple recursive generator (double output only).
//!
//! The reference code runs the recurrences in double arithmetic; every
//! intermediate is an integer below 2^53, so exact i64 arithmetic gives the
//! same residues and the same final double.

pub const M1: i64 = 4_294_967_087;
pub const M2: i64 = 4_294_944_443;
const A12: i64 = 1_403_580;
const A13N: i64 = 810_728;
const A21: i64 = 527_612;
const A23N: i64 = 1_370_589;
const NORM: f64 = 2.328_306_549_295_727_688e-10;

/// Residues of the reference implementation's built-in default state.
pub const DEFAULT_SEED: u32 = 12345;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mrg32k3a {
    s1: [i64; 3],
    s2: [i64; 3],
}

impl Mrg32k3a {
    /// `s1` residues mod m1, `s2` residues mod m2 (oldest first).
    /// Returns `None` when a component is all zero or a residue is out of range.
    pub fn from_residues(s1: [u32; 3], s2: [u32; 3]) -> Option<Self> {
        let valid =
            |s: &[u32; 3], m: i64| s.iter().all(|&x| (x as i64) < m) && s.iter().any(|&x| x != 0);
        if !valid(&s1, M1) || !valid(&s2, M2) {
            return None;
        }
        Some(Mrg32k3a {
            s1: s1.map(i64::from),
            s2: s2.map(i64::from),
        })
    }

    pub fn residues(&self) -> ([u32; 3], [u32; 3]) {
        (self.s1.map(|x| x as u32), self.s2.map(|x| x as u32))
    }

    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        let p1 = (A12 * self.s1[1] - A13N * self.s1[0]).rem_euclid(M1);
        self.s1 = [self.s1[1], self.s1[2], p1];

        let p2 = (A21 * self.s2[2] - A23N * self.s2[0]).rem_euclid(M2);
        self.s2 = [self.s2[1], self.s2[2], p2];

        if p1 <= p2 {
            (p1 - p2 + M1) as f64 * NORM
        } else {
            (p1 - p2) as f64 * NORM
        }
    }

    pub fn fill_f64(&mut self, out: &mut [f64]) {
        for v in out {
            *v = self.next_f64();
        }
    }
}
