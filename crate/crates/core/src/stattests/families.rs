//! The eight test families.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::bm::{self, BitSeq};
use super::gf2;
use super::special::{self, chi2_sf};
use super::{Input, Outcome};
use crate::error::{Error, Result};

/// Cells are merged until each expects at least this many observations.
const MIN_EXPECTED: f64 = 10.0;

fn bad(msg: impl Into<String>) -> Error {
    Error::BadParams(msg.into())
}

/// Consecutive cells merged into chi-square groups.
struct Binned {
    lookup: Vec<usize>,
    expected: Vec<f64>,
}

impl Binned {
    fn new(probs: &[f64], total: f64) -> Result<Binned> {
        let groups = special::merge_cells(probs, total, MIN_EXPECTED);
        if groups.len() < 2 {
            return Err(bad(format!(
                "sample of {total} too small for a chi-square with expected counts >= {MIN_EXPECTED}"
            )));
        }
        let mut lookup = vec![0; probs.len()];
        let mut expected = Vec::with_capacity(groups.len());
        for (g, &(a, b)) in groups.iter().enumerate() {
            lookup[a..=b].iter_mut().for_each(|v| *v = g);
            expected.push(probs[a..=b].iter().sum::<f64>() * total);
        }
        Ok(Binned { lookup, expected })
    }

    /// First cell of the last group; every cell from here on lands there.
    fn last_group_start(&self) -> usize {
        let last = self.expected.len() - 1;
        self.lookup.iter().position(|&g| g == last).unwrap_or(0)
    }

    fn outcome(&self, counts: &[u64]) -> Result<Outcome> {
        let (stat, df) = special::pearson(counts, &self.expected);
        Ok(Outcome::new(stat, chi2_sf(stat, df)?).detail("df", df as f64))
    }
}

// ---------------------------------------------------------------- LINEAR_COMP

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinearCompParams {
    /// Number of outputs, one bit taken from each.
    pub n_bits: usize,
    /// Bit position within the 32-bit word, 31 being the most significant.
    pub bit: u32,
}

impl Default for LinearCompParams {
    fn default() -> Self {
        LinearCompParams {
            n_bits: 1 << 17,
            bit: 31,
        }
    }
}

fn cached_jump_moments(n: usize) -> (f64, f64) {
    static CACHE: OnceLock<Mutex<HashMap<usize, (f64, f64)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&m) = cache.lock().unwrap().get(&n) {
        return m;
    }
    let m = bm::jump_moments(n);
    cache.lock().unwrap().insert(n, m);
    m
}

/// Number of jumps in the linear-complexity profile of the whole bit
/// sequence. Too few jumps means the complexity saturated early.
pub(crate) fn linear_comp(p: &LinearCompParams, input: &mut Input) -> Result<Outcome> {
    if p.bit > 31 {
        return Err(bad(format!("bit {} out of range 0..=31", p.bit)));
    }
    if p.n_bits < 64 {
        return Err(bad("LINEAR_COMP needs at least 64 bits"));
    }
    let mut seq = BitSeq::with_capacity(p.n_bits);
    for _ in 0..p.n_bits {
        seq.push(input.word()? >> p.bit & 1 == 1);
    }
    let lc = bm::linear_complexity(&seq);
    let (mean, var) = cached_jump_moments(p.n_bits);
    let sd = var.sqrt();
    let j = lc.jumps as f64;
    let pval = special::normal_cdf((j + 0.5 - mean) / sd);
    Ok(Outcome::new(j, pval)
        .detail("complexity", lc.complexity as f64)
        .detail("expected_jumps", mean)
        .detail("jump_sd", sd))
}

// ---------------------------------------------------------- BIRTHDAY_SPACINGS

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BirthdaySpacingsParams {
    pub n: usize,
    /// log2 of the number of days; birthdays are the high bits of a
    /// 64-bit value built from two consecutive words.
    pub day_bits: u32,
}

impl Default for BirthdaySpacingsParams {
    fn default() -> Self {
        BirthdaySpacingsParams {
            n: 1 << 16,
            day_bits: 44,
        }
    }
}

pub(crate) fn birthday_spacings(p: &BirthdaySpacingsParams, input: &mut Input) -> Result<Outcome> {
    if !(1..=64).contains(&p.day_bits) {
        return Err(bad("day_bits must be in 1..=64"));
    }
    if p.n < 2 {
        return Err(bad("BIRTHDAY_SPACINGS needs n >= 2"));
    }
    let mut days = Vec::with_capacity(p.n);
    for _ in 0..p.n {
        let hi = input.word()? as u64;
        let lo = input.word()? as u64;
        days.push((hi << 32 | lo) >> (64 - p.day_bits));
    }
    days.sort_unstable();
    let mut spacings: Vec<u64> = Vec::with_capacity(p.n);
    spacings.push(days[0]);
    spacings.extend(days.windows(2).map(|w| w[1] - w[0]));
    spacings.sort_unstable();
    let collisions = spacings.windows(2).filter(|w| w[0] == w[1]).count() as u64;
    let n = p.n as f64;
    let lambda = n * n * n / (4.0 * 2f64.powi(p.day_bits as i32));
    // Y is discrete, so one more draw breaks ties inside its atom.
    let u = input.uniform()?;
    let pval = special::poisson_randomized_p(collisions, lambda, u);
    Ok(Outcome::new(collisions as f64, pval).detail("lambda", lambda))
}

// ------------------------------------------------------------------------ GAP

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GapParams {
    /// Number of gaps recorded.
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl Default for GapParams {
    fn default() -> Self {
        GapParams {
            n: 1 << 21,
            alpha: 0.0,
            beta: 0.125,
        }
    }
}

/// Gap lengths between visits to [alpha, beta). A run of `t` misses is
/// recorded in the tail cell and counting restarts, which leaves the
/// recorded cells iid because the geometric law is memoryless.
pub(crate) fn gap(p: &GapParams, input: &mut Input) -> Result<Outcome> {
    if !(0.0 <= p.alpha && p.alpha < p.beta && p.beta <= 1.0) {
        return Err(bad(format!(
            "GAP needs 0 <= alpha < beta <= 1, got [{}, {})",
            p.alpha, p.beta
        )));
    }
    let hit = p.beta - p.alpha;
    if hit >= 1.0 {
        return Err(bad("GAP interval covers [0,1); every gap would be zero"));
    }
    let n = p.n as f64;
    let miss = 1.0 - hit;
    let max_t = ((MIN_EXPECTED / n).ln() / miss.ln()).floor();
    let t = max_t.clamp(1.0, 10_000.0) as usize;
    let mut probs: Vec<f64> = (0..t).map(|k| hit * miss.powi(k as i32)).collect();
    probs.push(miss.powi(t as i32));
    let binned = Binned::new(&probs, n)?;

    let mut counts = vec![0u64; binned.expected.len()];
    let mut recorded = 0;
    let mut run = 0usize;
    while recorded < p.n {
        let u = input.uniform()?;
        if p.alpha <= u && u < p.beta {
            counts[binned.lookup[run]] += 1;
            recorded += 1;
            run = 0;
        } else {
            run += 1;
            if run == t {
                counts[binned.lookup[t]] += 1;
                recorded += 1;
                run = 0;
            }
        }
    }
    Ok(binned.outcome(&counts)?.detail("tail_start", t as f64))
}

// ------------------------------------------------------------- COLLISION_OVER

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CollisionOverParams {
    /// Number of overlapping tuples.
    pub n: usize,
    /// Tuple dimension.
    pub t: u32,
    /// High bits taken per coordinate; there are 2^(t·bits) urns.
    pub bits: u32,
}

impl Default for CollisionOverParams {
    fn default() -> Self {
        CollisionOverParams {
            n: 1 << 20,
            t: 2,
            bits: 10,
        }
    }
}

pub(crate) fn collision_over(p: &CollisionOverParams, input: &mut Input) -> Result<Outcome> {
    let total_bits = p.t * p.bits;
    if p.t == 0 || p.bits == 0 || p.bits > 32 || total_bits > 32 {
        return Err(bad("COLLISION_OVER needs t, bits >= 1 and t*bits <= 32"));
    }
    if p.n == 0 {
        return Err(bad("COLLISION_OVER needs n >= 1"));
    }
    let k = 1u64 << total_bits;
    let mask = k - 1;
    let mut urns = vec![0u64; (k as usize).div_ceil(64)];
    let mut key = 0u64;
    for _ in 1..p.t {
        key = (key << p.bits | (input.word()? >> (32 - p.bits)) as u64) & mask;
    }
    let mut occupied = 0u64;
    for _ in 0..p.n {
        key = (key << p.bits | (input.word()? >> (32 - p.bits)) as u64) & mask;
        let (w, b) = ((key / 64) as usize, key % 64);
        if urns[w] >> b & 1 == 0 {
            urns[w] |= 1 << b;
            occupied += 1;
        }
    }
    let collisions = p.n as f64 - occupied as f64;

    let (n, kf) = (p.n as f64, k as f64);
    let q1 = (n * (-1.0 / kf).ln_1p()).exp();
    let q2 = (n * (-2.0 / kf).ln_1p()).exp();
    let mean = n - kf + kf * q1;
    let var = kf * kf * (q2 - q1 * q1) + kf * (q1 - q2);
    if !(var > 0.0) {
        return Err(bad("COLLISION_OVER parameters leave no variance"));
    }
    let z = (collisions - mean) / var.sqrt();
    Ok(Outcome::new(collisions, special::normal_sf(z))
        .detail("expected", mean)
        .detail("sd", var.sqrt()))
}

// -------------------------------------------------------------------- MAX_OFT

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaxOftParams {
    /// Number of groups.
    pub n: usize,
    /// Values per group.
    pub t: u32,
    pub cells: usize,
}

impl Default for MaxOftParams {
    fn default() -> Self {
        MaxOftParams {
            n: 1 << 20,
            t: 8,
            cells: 16,
        }
    }
}

/// max^t of t uniforms is uniform; chi-square over equiprobable cells,
/// with the KS distance reported alongside.
pub(crate) fn max_oft(p: &MaxOftParams, input: &mut Input) -> Result<Outcome> {
    if p.t == 0 || p.cells < 2 || p.n == 0 {
        return Err(bad("MAX_OFT needs t >= 1, cells >= 2, n >= 1"));
    }
    let mut counts = vec![0u64; p.cells];
    let mut transformed = Vec::with_capacity(p.n);
    for _ in 0..p.n {
        let mut m = 0.0f64;
        for _ in 0..p.t {
            m = m.max(input.uniform()?);
        }
        let x = m.powi(p.t as i32);
        let cell = ((x * p.cells as f64) as usize).min(p.cells - 1);
        counts[cell] += 1;
        transformed.push(x);
    }
    let e = p.n as f64 / p.cells as f64;
    let expected = vec![e; p.cells];
    let (stat, df) = special::pearson(&counts, &expected);
    let ks_d = special::ks_uniform_statistic(&transformed);
    Ok(Outcome::new(stat, chi2_sf(stat, df)?)
        .detail("df", df as f64)
        .detail("ks_d", ks_d)
        .detail("ks_p", special::ks_p_value(ks_d, p.n)))
}

// ---------------------------------------------------------------- MATRIX_RANK

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MatrixRankParams {
    pub matrices: usize,
    /// Matrices are size × size; each row is filled from ceil(size/32) words.
    pub size: usize,
}

impl Default for MatrixRankParams {
    fn default() -> Self {
        MatrixRankParams {
            matrices: 200,
            size: 256,
        }
    }
}

pub(crate) fn matrix_rank(p: &MatrixRankParams, input: &mut Input) -> Result<Outcome> {
    if p.size < 2 {
        return Err(bad("MATRIX_RANK needs size >= 2"));
    }
    let probs = gf2::rank_classes(p.size);
    let binned = Binned::new(&probs, p.matrices as f64)?;
    let words_per_row = p.size.div_ceil(32);
    let row_u64 = p.size.div_ceil(64);
    let mut counts = vec![0u64; binned.expected.len()];
    let mut rows = vec![vec![0u64; row_u64]; p.size];
    for _ in 0..p.matrices {
        for row in rows.iter_mut() {
            row.iter_mut().for_each(|w| *w = 0);
            for i in 0..words_per_row {
                row[i / 2] |= (input.word()? as u64) << (32 * (i % 2));
            }
            if p.size % 64 != 0 {
                row[row_u64 - 1] &= (1u64 << (p.size % 64)) - 1;
            }
        }
        let r = gf2::rank(&mut rows, p.size);
        let class = if r == p.size {
            2
        } else if r + 1 == p.size {
            1
        } else {
            0
        };
        counts[binned.lookup[class]] += 1;
    }
    binned.outcome(&counts)
}

// --------------------------------------------------------------- RANDOM_WALK1

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RandomWalk1Params {
    pub walks: usize,
    /// Steps per walk; each step is one bit, most significant first.
    pub length: usize,
}

impl Default for RandomWalk1Params {
    fn default() -> Self {
        RandomWalk1Params {
            walks: 1 << 14,
            length: 128,
        }
    }
}

/// Endpoint law of ±1 walks, i.e. the number of one-bits per walk against
/// Binomial(length, ½).
pub(crate) fn random_walk1(p: &RandomWalk1Params, input: &mut Input) -> Result<Outcome> {
    if p.length == 0 {
        return Err(bad("RANDOM_WALK1 needs length >= 1"));
    }
    let mut probs = Vec::with_capacity(p.length + 1);
    let mut pk = 0.5f64.powi(p.length as i32);
    for k in 0..=p.length {
        probs.push(pk);
        pk = pk * (p.length - k) as f64 / (k + 1) as f64;
    }
    let binned = Binned::new(&probs, p.walks as f64)?;
    let mut counts = vec![0u64; binned.expected.len()];
    let mut word = 0u32;
    let mut left = 0u32;
    for _ in 0..p.walks {
        let mut ones = 0usize;
        let mut need = p.length;
        while need > 0 {
            if left == 0 {
                word = input.word()?;
                left = 32;
            }
            let take = need.min(left as usize) as u32;
            // The next `take` bits, from the top of what remains.
            let chunk = (word as u64) << (32 - left) & 0xFFFF_FFFF;
            let chunk = chunk >> (32 - take);
            ones += chunk.count_ones() as usize;
            left -= take;
            need -= take as usize;
        }
        counts[binned.lookup[ones]] += 1;
    }
    binned.outcome(&counts)
}

// -------------------------------------------------------------- SUM_COLLECTOR

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SumCollectorParams {
    pub n: usize,
    /// Uniforms are added until the running sum exceeds g.
    pub g: f64,
}

impl Default for SumCollectorParams {
    fn default() -> Self {
        SumCollectorParams {
            n: 1 << 20,
            g: 10.0,
        }
    }
}

/// P(U_1 + … + U_k <= x), the Irwin–Hall distribution function.
pub(crate) fn irwin_hall_cdf(k: usize, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= k as f64 {
        return 1.0;
    }
    if x > k as f64 / 2.0 {
        // The alternating sum cancels badly past the mean.
        return 1.0 - irwin_hall_cdf(k, k as f64 - x);
    }
    let ln_kfact = special::ln_gamma(k as f64 + 1.0);
    let mut sum = 0.0;
    let mut j = 0usize;
    while (j as f64) < x && j <= k {
        let ln_binom =
            ln_kfact - special::ln_gamma(j as f64 + 1.0) - special::ln_gamma((k - j) as f64 + 1.0);
        let term = (ln_binom + k as f64 * (x - j as f64).ln() - ln_kfact).exp();
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        j += 1;
    }
    sum.clamp(0.0, 1.0)
}

pub(crate) fn sum_collector(p: &SumCollectorParams, input: &mut Input) -> Result<Outcome> {
    if !(p.g > 0.0 && p.g.is_finite()) {
        return Err(bad("SUM_COLLECTOR needs a finite g > 0"));
    }
    let n = p.n as f64;
    // Cell i holds N = i + 1 draws; the final cell is N > kmax.
    let mut probs = Vec::new();
    let mut prev = 1.0;
    let mut k = 1usize;
    loop {
        let f = irwin_hall_cdf(k, p.g);
        probs.push(prev - f);
        prev = f;
        if k as f64 > p.g && f * n < 1e-3 {
            break;
        }
        k += 1;
    }
    probs.push(prev);
    let binned = Binned::new(&probs, n)?;
    let cap = binned.last_group_start() + 1;
    let mut counts = vec![0u64; binned.expected.len()];
    for _ in 0..p.n {
        let mut sum = 0.0;
        let mut draws = 0usize;
        while draws < cap {
            sum += input.uniform()?;
            draws += 1;
            if sum > p.g {
                break;
            }
        }
        counts[binned.lookup[draws - 1]] += 1;
    }
    binned.outcome(&counts)
}
