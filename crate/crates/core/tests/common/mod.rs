//! Direct, unoptimised evaluation of rank-turbulence divergence used as a
//! reference. Shares no code with the library beyond the input types.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

/// Fractional tied rank by counting: strictly larger items plus the midpoint
/// of the tie group.
pub fn brute_ranks(counts: &BTreeMap<String, f64>) -> BTreeMap<String, f64> {
    counts
        .iter()
        .map(|(k, &c)| {
            let above = counts.values().filter(|&&v| v > c).count() as f64;
            let tied = counts.values().filter(|&&v| v == c).count() as f64;
            (k.clone(), above + (tied + 1.0) / 2.0)
        })
        .collect()
}

pub fn brute_element(r1: f64, r2: f64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        return (r1.ln() - r2.ln()).abs();
    }
    if alpha.is_infinite() {
        return if r1 == r2 { 0.0 } else { 1.0 / r1.min(r2) };
    }
    (alpha + 1.0) / alpha
        * (r1.powf(-alpha) - r2.powf(-alpha))
            .abs()
            .powf(1.0 / (alpha + 1.0))
}

pub struct BruteResult {
    pub ranks: BTreeMap<String, (f64, f64)>,
    pub elements: BTreeMap<String, f64>,
    pub sum: f64,
    pub normalization: f64,
    pub total: f64,
}

pub fn brute_rtd(a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>, alpha: f64) -> BruteResult {
    let ra = brute_ranks(a);
    let rb = brute_ranks(b);
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let x1 = a.keys().filter(|k| !b.contains_key(*k)).count() as f64;
    let x2 = b.keys().filter(|k| !a.contains_key(*k)).count() as f64;
    let union: BTreeSet<&String> = a.keys().chain(b.keys()).collect();
    let mut ranks = BTreeMap::new();
    let mut elements = BTreeMap::new();
    let mut sum = 0.0;
    for k in union {
        let r1 = ra.get(k).copied().unwrap_or(n1 + (x2 + 1.0) / 2.0);
        let r2 = rb.get(k).copied().unwrap_or(n2 + (x1 + 1.0) / 2.0);
        let e = brute_element(r1, r2, alpha);
        sum += e;
        ranks.insert(k.clone(), (r1, r2));
        elements.insert(k.clone(), e);
    }
    let last_1 = n1 + (n2 + 1.0) / 2.0;
    let last_2 = n2 + (n1 + 1.0) / 2.0;
    let normalization = ra
        .values()
        .map(|&r| brute_element(r, last_2, alpha))
        .sum::<f64>()
        + rb.values()
            .map(|&r| brute_element(last_1, r, alpha))
            .sum::<f64>();
    BruteResult {
        ranks,
        elements,
        sum,
        normalization,
        total: sum / normalization,
    }
}

pub fn system(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}
