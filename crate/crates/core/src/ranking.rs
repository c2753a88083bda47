//! Fractional tied ranks and the merged two-system lexicon.

use std::cmp::Ordering;

use rayon::slice::ParallelSliceMut;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ingest::{RankedList, SourceKind};
use crate::numeric::pairwise_sum;
use crate::Label;

/// Ranks `counts` in decreasing order, giving every member of a tie group the
/// mean of the 1-based positions the group occupies. Output is aligned with
/// the input.
///
/// ```
/// # use allotax_core::tied_ranks;
/// assert_eq!(tied_ranks(&[5.0, 3.0, 3.0, 1.0]).unwrap(), vec![1.0, 2.5, 2.5, 4.0]);
/// ```
pub fn tied_ranks(counts: &[f64]) -> Result<Vec<f64>> {
    if counts.is_empty() {
        return Err(Error::Empty);
    }
    // Descending order via an order-preserving integer key.
    let mut keyed: Vec<(u64, u32)> = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| (u64::MAX - ordered_bits(c), i as u32))
        .collect();
    keyed.par_sort_unstable();

    let mut ranks = vec![0.0; counts.len()];
    let mut start = 0;
    while start < keyed.len() {
        let mut end = start + 1;
        while end < keyed.len() && keyed[end].0 == keyed[start].0 {
            end += 1;
        }
        // Positions start+1 ..= end.
        let rank = (start + 1 + end) as f64 / 2.0;
        for &(_, i) in &keyed[start..end] {
            ranks[i as usize] = rank;
        }
        start = end;
    }
    Ok(ranks)
}

fn ordered_bits(x: f64) -> u64 {
    let bits = x.to_bits();
    if bits >> 63 == 1 {
        !bits
    } else {
        bits | (1 << 63)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exclusivity {
    Shared,
    Only1,
    Only2,
}

/// One type of the union lexicon with its rank and count in both systems.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeRecord {
    pub label: Label,
    pub rank_1: f64,
    pub rank_2: f64,
    /// Zero when absent from system 1.
    pub count_1: f64,
    /// Zero when absent from system 2.
    pub count_2: f64,
    pub exclusivity: Exclusivity,
}

/// The union of two systems' types, sorted by label.
#[derive(Debug, Clone, PartialEq)]
pub struct MergedLexicon {
    records: Vec<TypeRecord>,
    n1: usize,
    n2: usize,
    x1: usize,
    x2: usize,
    total_count_1: f64,
    total_count_2: f64,
}

impl MergedLexicon {
    /// Records in ascending label order.
    pub fn records(&self) -> &[TypeRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<&TypeRecord> {
        self.records
            .binary_search_by(|r| r.label.as_ref().cmp(label))
            .ok()
            .map(|i| &self.records[i])
    }

    /// Number of types present in system 1.
    pub fn n1(&self) -> usize {
        self.n1
    }

    /// Number of types present in system 2.
    pub fn n2(&self) -> usize {
        self.n2
    }

    /// Number of types only in system 1.
    pub fn x1(&self) -> usize {
        self.x1
    }

    /// Number of types only in system 2.
    pub fn x2(&self) -> usize {
        self.x2
    }

    pub fn total_count_1(&self) -> f64 {
        self.total_count_1
    }

    pub fn total_count_2(&self) -> f64 {
        self.total_count_2
    }

    /// Largest rank in either system.
    pub fn max_rank(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.rank_1.max(r.rank_2))
            .fold(1.0, f64::max)
    }

    /// Rank in system 1 that all of system 2's types would share if the two
    /// systems had no types in common.
    pub fn disjoint_rank_1(&self) -> f64 {
        last_rank(self.n1, self.n2)
    }

    /// Rank in system 2 that all of system 1's types would share if the two
    /// systems had no types in common.
    pub fn disjoint_rank_2(&self) -> f64 {
        last_rank(self.n2, self.n1)
    }
}

/// Tied rank of `absent` types appended after `present` ranked ones.
fn last_rank(present: usize, absent: usize) -> f64 {
    present as f64 + (absent as f64 + 1.0) / 2.0
}

struct Ranked<'a> {
    list: &'a RankedList,
    ranks: Vec<f64>,
}

impl<'a> Ranked<'a> {
    fn new(list: &'a RankedList) -> Self {
        let values: Vec<f64> = list.entries().iter().map(|e| e.value).collect();
        let ranks = match list.source_kind() {
            SourceKind::Counts => tied_ranks(&values).expect("validated lists are non-empty"),
            SourceKind::Ranks => values,
        };
        Ranked { list, ranks }
    }

    /// Count for entry `i`. Pre-ranked systems carry no sizes, so 1/rank
    /// stands in for them.
    fn count(&self, i: usize) -> f64 {
        match self.list.source_kind() {
            SourceKind::Counts => self.list.entries()[i].value,
            SourceKind::Ranks => 1.0 / self.ranks[i],
        }
    }
}

/// Merges two validated systems into one lexicon. Types missing from a
/// system get that system's tied last rank.
pub fn merge_systems(a: &RankedList, b: &RankedList) -> MergedLexicon {
    let ra = Ranked::new(a);
    let rb = Ranked::new(b);
    let (ea, eb) = (a.entries(), b.entries());
    let (oa, ob) = (a.label_order(), b.label_order());

    let mut records = Vec::with_capacity(oa.len().max(ob.len()));
    let (mut i, mut j) = (0, 0);
    let (mut x1, mut x2) = (0, 0);
    while i < oa.len() || j < ob.len() {
        let ord = match (oa.get(i), ob.get(j)) {
            (Some(&p), Some(&q)) => ea[p as usize].label.cmp(&eb[q as usize].label),
            (Some(_), None) => Ordering::Less,
            _ => Ordering::Greater,
        };
        let record = match ord {
            Ordering::Less => {
                let p = oa[i] as usize;
                i += 1;
                x1 += 1;
                TypeRecord {
                    label: ea[p].label.clone(),
                    rank_1: ra.ranks[p],
                    rank_2: f64::NAN,
                    count_1: ra.count(p),
                    count_2: 0.0,
                    exclusivity: Exclusivity::Only1,
                }
            }
            Ordering::Greater => {
                let q = ob[j] as usize;
                j += 1;
                x2 += 1;
                TypeRecord {
                    label: eb[q].label.clone(),
                    rank_1: f64::NAN,
                    rank_2: rb.ranks[q],
                    count_1: 0.0,
                    count_2: rb.count(q),
                    exclusivity: Exclusivity::Only2,
                }
            }
            Ordering::Equal => {
                let (p, q) = (oa[i] as usize, ob[j] as usize);
                i += 1;
                j += 1;
                TypeRecord {
                    label: ea[p].label.clone(),
                    rank_1: ra.ranks[p],
                    rank_2: rb.ranks[q],
                    count_1: ra.count(p),
                    count_2: rb.count(q),
                    exclusivity: Exclusivity::Shared,
                }
            }
        };
        records.push(record);
    }

    let (n1, n2) = (a.len(), b.len());
    let missing_rank_1 = last_rank(n1, x2);
    let missing_rank_2 = last_rank(n2, x1);
    for r in &mut records {
        match r.exclusivity {
            Exclusivity::Only1 => r.rank_2 = missing_rank_2,
            Exclusivity::Only2 => r.rank_1 = missing_rank_1,
            Exclusivity::Shared => {}
        }
    }

    let c1: Vec<f64> = records.iter().map(|r| r.count_1).collect();
    let total_count_1 = pairwise_sum(&c1);
    drop(c1);
    let c2: Vec<f64> = records.iter().map(|r| r.count_2).collect();
    let total_count_2 = pairwise_sum(&c2);

    MergedLexicon {
        records,
        n1,
        n2,
        x1,
        x2,
        total_count_1,
        total_count_2,
    }
}
