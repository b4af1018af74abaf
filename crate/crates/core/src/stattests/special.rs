//! p-value machinery: log-gamma, regularized incomplete gamma, chi-square,
//! normal and Poisson tails, Kolmogorov–Smirnov uniformity.

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// Lanczos approximation, g = 607/128, 15 terms.
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_049e-4,
    2.174_396_181_152_126_5e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_141e-5,
    3.689_918_265_953_162_5e-6,
];

/// Stirling-series remainder `lnΓ(a) − [(a−½)ln a − a + ½ln 2π]`, for a ≥ 10.
fn stirling_correction(a: f64) -> f64 {
    let r = 1.0 / a;
    let r2 = r * r;
    r * (1.0 / 12.0
        - r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0 - r2 * (1.0 / 1680.0 - r2 * (1.0 / 1188.0)))))
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    if x >= 10.0 {
        return (x - 0.5) * x.ln() - x + LN_SQRT_2PI + stirling_correction(x);
    }
    if x < 0.5 {
        // Reflection keeps the Lanczos sum in its accurate range.
        let s = (std::f64::consts::PI * x).sin();
        return std::f64::consts::PI.ln() - s.abs().ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut sum = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (x + 0.5) * t.ln() - t + sum.ln()
}

/// `ln(x^a e^-x / Γ(a))`, computed to avoid cancellation when a is large.
fn ln_gamma_prefactor(a: f64, x: f64) -> f64 {
    if a >= 10.0 {
        // a·ln(x/a) − (x − a) = a·(ln(1+t) − t), t = (x − a)/a
        let t = (x - a) / a;
        let log1pmx = if t.abs() < 0.5 {
            log1p_minus_x(t)
        } else {
            t.ln_1p() - t
        };
        a * log1pmx + 0.5 * a.ln() - LN_SQRT_2PI - stirling_correction(a)
    } else {
        a * x.ln() - x - ln_gamma(a)
    }
}

/// ln(1+t) − t for small |t|, by series to avoid cancellation.
fn log1p_minus_x(t: f64) -> f64 {
    if t.abs() > 0.1 {
        return t.ln_1p() - t;
    }
    // Σ_{k≥2} (−1)^{k+1} t^k / k
    let mut power = t;
    let mut sum = 0.0;
    for k in 2..60 {
        power *= -t;
        let add = power / k as f64;
        sum += add;
        if add.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn gamma_series(a: f64, x: f64) -> f64 {
    // P(a, x) = prefactor · Σ x^n / (a (a+1) … (a+n))
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..100_000 {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * 1e-17 {
            break;
        }
    }
    sum * ln_gamma_prefactor(a, x).exp()
}

fn gamma_continued_fraction(a: f64, x: f64) -> f64 {
    // Modified Lentz for Q(a, x).
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..100_000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-17 {
            break;
        }
    }
    ln_gamma_prefactor(a, x).exp() * h
}

/// Regularized lower incomplete gamma P(a, x).
pub fn gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        gamma_series(a, x).min(1.0)
    } else {
        (1.0 - gamma_continued_fraction(a, x)).max(0.0)
    }
}

/// Regularized upper incomplete gamma Q(a, x) = 1 − P(a, x).
pub fn gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        (1.0 - gamma_series(a, x)).max(0.0)
    } else {
        gamma_continued_fraction(a, x).min(1.0)
    }
}

/// Upper tail of the chi-square distribution with `df` degrees of freedom.
pub fn chi2_sf(statistic: f64, df: u32) -> Result<f64> {
    if df == 0 {
        return Err(Error::Domain("chi-square needs df >= 1".into()));
    }
    if !(statistic >= 0.0) {
        return Err(Error::Domain(format!(
            "chi-square statistic must be >= 0, got {statistic}"
        )));
    }
    Ok(gamma_q(df as f64 / 2.0, statistic / 2.0))
}

/// P(Z > z) for standard normal Z.
pub fn normal_sf(z: f64) -> f64 {
    // erfc(y) = Q(½, y²) for y ≥ 0
    let y = z / std::f64::consts::SQRT_2;
    if y >= 0.0 {
        0.5 * gamma_q(0.5, y * y)
    } else {
        0.5 * (1.0 + gamma_p(0.5, y * y))
    }
}

/// P(Z ≤ z).
pub fn normal_cdf(z: f64) -> f64 {
    normal_sf(-z)
}

pub fn poisson_pmf(k: u64, lambda: f64) -> f64 {
    if lambda == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let k = k as f64;
    (k * lambda.ln() - lambda - ln_gamma(k + 1.0)).exp()
}

/// P(Y ≥ k) for Y ~ Poisson(λ).
pub fn poisson_sf_inclusive(k: u64, lambda: f64) -> f64 {
    if k == 0 {
        1.0
    } else {
        gamma_p(k as f64, lambda)
    }
}

/// Randomized upper tail P(Y > k) + u·P(Y = k). Exactly uniform under the
/// null when u is an independent uniform; u = ½ gives the mid-p value.
pub fn poisson_randomized_p(k: u64, lambda: f64, u: f64) -> f64 {
    let eq = poisson_pmf(k, lambda);
    let above = poisson_sf_inclusive(k, lambda) - eq;
    (above.max(0.0) + u * eq).clamp(0.0, 1.0)
}

/// Pearson chi-square statistic and its degrees of freedom (cells − 1).
pub fn pearson(observed: &[u64], expected: &[f64]) -> (f64, u32) {
    let stat = observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| {
            let d = o as f64 - e;
            d * d / e
        })
        .sum();
    (stat, observed.len().saturating_sub(1) as u32)
}

/// Groups consecutive cells so every group's expected count reaches
/// `min_expected`; returns `(first_cell, last_cell)` ranges covering all cells.
pub fn merge_cells(probs: &[f64], total: f64, min_expected: f64) -> Vec<(usize, usize)> {
    let mut groups: Vec<(usize, usize, f64)> = Vec::new();
    let mut start = 0;
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p * total;
        if acc >= min_expected {
            groups.push((start, i, acc));
            start = i + 1;
            acc = 0.0;
        }
    }
    if start < probs.len() {
        match groups.last_mut() {
            Some(last) => {
                last.1 = probs.len() - 1;
                last.2 += acc;
            }
            None => groups.push((0, probs.len() - 1, acc)),
        }
    }
    groups.into_iter().map(|(a, b, _)| (a, b)).collect()
}

/// Kolmogorov–Smirnov D statistic of `samples` against U(0,1).
pub fn ks_uniform_statistic(samples: &[f64]) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(|a, b| a.total_cmp(b));
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let hi = (i + 1) as f64 / n - x;
            let lo = x - i as f64 / n;
            hi.max(lo)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic Kolmogorov tail with Stephens' small-sample correction.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..200 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// p-value of the KS uniformity test on `samples`.
pub fn ks_uniform(samples: &[f64]) -> f64 {
    ks_p_value(ks_uniform_statistic(samples), samples.len())
}
