//! Synthetic heavy-tailed systems for benchmarks and property tests.

use std::io::{self, BufWriter, Write};
use std::path::Path;

use allotax_core::{Entry, RankedList, SourceKind};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Pareto};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer-valued heavy-tailed counts: floored Pareto draws with tail index
/// `shape`. Small shapes give many ties at the bottom and a few huge counts.
pub fn heavy_tailed_counts<R: Rng>(rng: &mut R, n: usize, shape: f64) -> Vec<f64> {
    let pareto = Pareto::new(1.0, shape).expect("valid pareto parameters");
    (0..n)
        .map(|_| pareto.sample(rng).floor().min(1e12))
        .collect()
}

/// Deterministic Zipf counts `floor(top / rank^exponent)`, at least 1.
pub fn zipf_counts(n: usize, exponent: f64, top: f64) -> Vec<f64> {
    (1..=n)
        .map(|r| (top / (r as f64).powf(exponent)).floor().max(1.0))
        .collect()
}

/// A random pair of systems with `n1` and `n2` types. `overlap` in `[0, 1]`
/// is the fraction of the smaller system's types that also appear in the
/// other system.
pub fn random_pair<R: Rng>(
    rng: &mut R,
    n1: usize,
    n2: usize,
    overlap: f64,
) -> (RankedList, RankedList) {
    let shared = ((n1.min(n2) as f64) * overlap.clamp(0.0, 1.0)).round() as usize;
    let universe = n1 + n2 - shared;
    let mut labels: Vec<String> = (0..universe).map(|i| format!("t{i:06}")).collect();
    labels.shuffle(rng);
    // First `shared` labels are common; system 1 takes the next n1 - shared,
    // system 2 the rest.
    let (common, rest) = labels.split_at(shared);
    let (own_1, own_2) = rest.split_at(n1 - shared);
    let shape_1 = rng.random_range(0.6..2.0);
    let shape_2 = rng.random_range(0.6..2.0);
    let build = |name: &str, own: &[String], shape: f64, rng: &mut R| {
        let mut names: Vec<&String> = common.iter().chain(own.iter()).collect();
        names.shuffle(rng);
        let counts = heavy_tailed_counts(rng, names.len(), shape);
        let entries = names
            .iter()
            .zip(counts)
            .map(|(l, c)| Entry::new(l, c))
            .collect();
        RankedList::ingest(name, entries, SourceKind::Counts)
            .expect("generated systems are valid")
            .list
    };
    let a = build("system 1", own_1, shape_1, rng);
    let b = build("system 2", own_2, shape_2, rng);
    (a, b)
}

/// Writes a JSON system of `n` Zipf-distributed types labelled `w{index}`
/// for index in `offset..offset + n`.
pub fn write_zipf_json(path: &Path, n: usize, offset: usize, exponent: f64) -> io::Result<()> {
    let mut w = BufWriter::with_capacity(1 << 20, std::fs::File::create(path)?);
    w.write_all(b"[")?;
    let counts = zipf_counts(n, exponent, 1e9);
    for (i, c) in counts.iter().enumerate() {
        if i > 0 {
            w.write_all(b",\n")?;
        }
        write!(w, "{{\"types\":\"w{}\",\"counts\":{}}}", offset + i, c)?;
    }
    w.write_all(b"]\n")?;
    w.flush()
}
