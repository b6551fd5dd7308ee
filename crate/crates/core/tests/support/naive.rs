//! Direct-definition recount of pointwise depth, depth CDFs and ED, used as a
//! test oracle. Weights are integer multiples of a common unit.
#![allow(dead_code)]

use std::cmp::Ordering;

/// Numerator of `1 - |#below - #above| / n` at grid point `j`.
pub fn depth_num(rows: &[Vec<f64>], g: &[f64], j: usize) -> u64 {
    let n = rows.len() as i64;
    let below = rows.iter().filter(|f| f[j] < g[j]).count() as i64;
    let above = rows.iter().filter(|f| f[j] > g[j]).count() as i64;
    (n - (below - above).abs()) as u64
}

pub fn profile(rows: &[Vec<f64>], g: &[f64]) -> Vec<u64> {
    (0..g.len()).map(|j| depth_num(rows, g, j)).collect()
}

/// `cdf[k]` = total weight of grid points with depth at most `k / n`.
pub fn cdf(rows: &[Vec<f64>], g: &[f64], weights: &[u64]) -> Vec<u64> {
    let n = rows.len() as u64;
    let p = profile(rows, g);
    (0..=n)
        .map(|k| {
            p.iter()
                .zip(weights)
                .filter(|(d, _)| **d <= k)
                .map(|(_, w)| *w)
                .sum()
        })
        .collect()
}

/// `Less` when `a` is more extreme than `b`.
pub fn compare(a: &[u64], b: &[u64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

/// ED numerator of `g`: members at most as deep as `g`.
pub fn ed_num(rows: &[Vec<f64>], g: &[f64], weights: &[u64]) -> u64 {
    let cg = cdf(rows, g, weights);
    rows.iter()
        .filter(|f| compare(&cdf(rows, f, weights), &cg) != Ordering::Greater)
        .count() as u64
}

pub fn ed_all(rows: &[Vec<f64>], weights: &[u64]) -> Vec<u64> {
    rows.iter().map(|g| ed_num(rows, g, weights)).collect()
}

/// Indices by increasing ED, equal values by index.
pub fn order(rows: &[Vec<f64>], weights: &[u64]) -> Vec<usize> {
    let ed = ed_all(rows, weights);
    let mut idx: Vec<usize> = (0..rows.len()).collect();
    idx.sort_by_key(|&i| (ed[i], i));
    idx
}

pub fn mbd(rows: &[Vec<f64>], g: &[f64]) -> f64 {
    let (n, m) = (rows.len(), g.len());
    let mut inside = 0usize;
    let mut pairs = 0usize;
    for a in 0..n {
        for b in a + 1..n {
            pairs += 1;
            inside += (0..m)
                .filter(|&j| {
                    let lo = rows[a][j].min(rows[b][j]);
                    let hi = rows[a][j].max(rows[b][j]);
                    lo <= g[j] && g[j] <= hi
                })
                .count();
        }
    }
    inside as f64 / (pairs * m) as f64
}

pub fn id(rows: &[Vec<f64>], g: &[f64]) -> f64 {
    let n = rows.len() as f64;
    profile(rows, g).iter().map(|&d| d as f64 / n).sum::<f64>() / g.len() as f64
}
