//! Rank of binary matrices and the rank law of random square matrices.

/// Rank over GF(2) of `rows`, each row packed into u64 words.
/// The rows are reduced in place.
pub fn rank(rows: &mut [Vec<u64>], ncols: usize) -> usize {
    let mut r = 0;
    for col in 0..ncols {
        let (w, b) = (col / 64, col % 64);
        let Some(pivot) = (r..rows.len()).find(|&i| rows[i][w] >> b & 1 == 1) else {
            continue;
        };
        rows.swap(r, pivot);
        let (head, tail) = rows.split_at_mut(r + 1);
        let p = &head[r];
        for row in tail.iter_mut() {
            if row[w] >> b & 1 == 1 {
                for (x, y) in row[w..].iter_mut().zip(&p[w..]) {
                    *x ^= y;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// P(rank = r) for a uniformly random L×L binary matrix.
pub fn rank_probability(l: usize, r: usize) -> f64 {
    if r > l {
        return 0.0;
    }
    let ln2 = std::f64::consts::LN_2;
    let (lf, rf) = (l as f64, r as f64);
    let mut ln_p = (rf * (2.0 * lf - rf) - lf * lf) * ln2;
    for i in 0..r {
        let a = (-(2f64).powi(i as i32 - l as i32)).ln_1p();
        let b = (-(2f64).powi(i as i32 - r as i32)).ln_1p();
        ln_p += 2.0 * a - b;
    }
    ln_p.exp()
}

/// Probabilities of the classes {rank ≤ L−2, L−1, L}.
pub fn rank_classes(l: usize) -> [f64; 3] {
    let full = rank_probability(l, l);
    let one = rank_probability(l, l - 1);
    [1.0 - full - one, one, full]
}
