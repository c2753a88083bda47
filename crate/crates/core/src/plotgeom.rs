//! Geometry and summary statistics behind an allotaxonograph.
//!
//! The diamond is binned on plain `(log10 r1, log10 r2)` axes; rotating it by
//! 45 degrees is left to the renderer. Cell `(i, j)` has `i` indexing system
//! 1's log rank and `j` system 2's, so cells with `i < j` hold types ranked
//! higher in system 1.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;

use crate::divergence::{rtd_element, Alpha, DivergenceResult, Side};
use crate::error::{Error, Result};
use crate::ranking::MergedLexicon;
use crate::Label;

/// Upper bound on cells per axis; the grid is accumulated densely.
pub const MAX_CELLS: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub count: u64,
    /// Label of the type with the largest combined count in the cell.
    pub top_label: Label,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlankLabel {
    pub cell: (u32, u32),
    pub label: Label,
    pub side: Side,
}

/// A contour branch in `(log10 r1, log10 r2)` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    /// 1-based contour level.
    pub level: usize,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiamondGrid {
    pub k: usize,
    /// Top of the binned range in decades.
    pub log_rank_max: f64,
    pub cells: BTreeMap<(u32, u32), Cell>,
    pub labels: Vec<FlankLabel>,
    pub contours: Vec<Polyline>,
}

impl DiamondGrid {
    pub fn total_count(&self) -> u64 {
        self.cells.values().map(|c| c.count).sum()
    }

    pub fn max_count(&self) -> u64 {
        self.cells.values().map(|c| c.count).max().unwrap_or(0)
    }

    /// Bin index of a rank on either axis.
    pub fn bin(&self, rank: f64) -> u32 {
        bin(rank, self.k, self.log_rank_max)
    }
}

/// `max(1, ceil(log10(max_rank)))`.
pub fn log_rank_max(max_rank: f64) -> f64 {
    max_rank.log10().ceil().max(1.0)
}

fn bin(rank: f64, k: usize, log_rank_max: f64) -> u32 {
    let t = (k as f64 * rank.log10() / log_rank_max).floor();
    (t.max(0.0) as usize).min(k - 1) as u32
}

/// Bins every lexicon type into a `k` by `k` log-rank histogram.
pub fn build_diamond(lex: &MergedLexicon, k: usize) -> Result<DiamondGrid> {
    if !(2..=MAX_CELLS).contains(&k) {
        return Err(Error::Options(format!(
            "cells per axis must be between 2 and {MAX_CELLS}, got {k}"
        )));
    }
    let lrm = log_rank_max(lex.max_rank());
    // (count, weight of the current top type, its record index)
    let mut dense: Vec<(u64, f64, usize)> = vec![(0, f64::NEG_INFINITY, usize::MAX); k * k];
    for (idx, r) in lex.records().iter().enumerate() {
        let i = bin(r.rank_1, k, lrm) as usize;
        let j = bin(r.rank_2, k, lrm) as usize;
        let slot = &mut dense[i * k + j];
        slot.0 += 1;
        let weight = r.count_1 + r.count_2;
        // Records arrive in label order, so keeping the first of equal
        // weights breaks ties by ascending label.
        if weight > slot.1 {
            slot.1 = weight;
            slot.2 = idx;
        }
    }
    let cells = dense
        .into_iter()
        .enumerate()
        .filter(|(_, slot)| slot.0 > 0)
        .map(|(flat, (count, _, idx))| {
            let key = ((flat / k) as u32, (flat % k) as u32);
            let top_label = lex.records()[idx].label.clone();
            (key, Cell { count, top_label })
        })
        .collect();
    Ok(DiamondGrid {
        k,
        log_rank_max: lrm,
        cells,
        labels: Vec::new(),
        contours: Vec::new(),
    })
}

const SAMPLES_PER_DECADE: f64 = 64.0;
const BISECTION_STEPS: usize = 200;

/// Level curves of the element function, in log-rank coordinates.
///
/// Level `m` passes through `(1, 10^(m * log_rank_max / levels))`. Each level
/// yields a branch on the `r2 > r1` side and its mirror image. At infinite
/// alpha every such anchor has the same element value, so the levels are
/// instead the L-shaped curves `min(r1, r2) = 10^(m * log_rank_max / (levels + 1))`.
/// Branches that collapse to a single point are omitted.
pub fn contour_lines(alpha: Alpha, log_rank_max: f64, levels: usize) -> Vec<Polyline> {
    let mut out = Vec::with_capacity(2 * levels);
    for m in 1..=levels {
        let branch = match alpha {
            Alpha::Infinity => {
                let c = m as f64 * log_rank_max / (levels + 1) as f64;
                vertical_branch(c, log_rank_max)
            }
            _ => {
                let c = m as f64 * log_rank_max / levels as f64;
                let level = rtd_element(1.0, 10f64.powf(c), alpha);
                solve_branch(alpha, level, log_rank_max)
            }
        };
        if branch.len() < 2 {
            continue;
        }
        let mirror = branch.iter().map(|&(u, v)| (v, u)).collect();
        out.push(Polyline {
            level: m,
            points: branch,
        });
        out.push(Polyline {
            level: m,
            points: mirror,
        });
    }
    out
}

fn vertical_branch(c: f64, lrm: f64) -> Vec<(f64, f64)> {
    let steps = ((lrm - c) * SAMPLES_PER_DECADE).ceil().max(1.0) as usize;
    (0..=steps)
        .map(|s| (c, c + (lrm - c) * s as f64 / steps as f64))
        .collect()
}

fn element_log(u: f64, v: f64, alpha: Alpha) -> f64 {
    rtd_element(10f64.powf(u), 10f64.powf(v), alpha)
}

/// Finds `x` in `[lo, hi]` where the increasing function `f` crosses zero.
fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Return whichever end is closer to the level.
    if f(lo).abs() <= f(hi).abs() {
        lo
    } else {
        hi
    }
}

/// Branch with `v >= u` on which the element equals `level`, clipped to the
/// square `[0, lrm]^2`. Samples on a grid in both coordinates so that steep
/// and shallow stretches are equally dense.
fn solve_branch(alpha: Alpha, level: f64, lrm: f64) -> Vec<(f64, f64)> {
    // The element at the top edge shrinks as u grows; the branch leaves the
    // square where it drops to the level.
    if element_log(0.0, lrm, alpha) < level {
        return Vec::new();
    }
    let exit_u = bisect(0.0, lrm, |u| level - element_log(u, lrm, alpha));
    let start_v = bisect(0.0, lrm, |v| element_log(0.0, v, alpha) - level);
    let steps = (lrm * SAMPLES_PER_DECADE).ceil() as usize;
    let grid = |s: usize| lrm * s as f64 / steps as f64;

    let mut points = vec![(0.0, start_v)];
    for u in (1..=steps).map(grid).take_while(|&u| u < exit_u) {
        // Element grows with v above the diagonal.
        points.push((u, bisect(u, lrm, |v| element_log(u, v, alpha) - level)));
    }
    for v in (1..=steps).map(grid).filter(|&v| v > start_v && v < lrm) {
        // And shrinks with u below v.
        points.push((bisect(0.0, v, |u| level - element_log(u, v, alpha)), v));
    }
    points.push((exit_u, lrm));
    // u and v both increase along the branch.
    points.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.total_cmp(&b.0)));
    points.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
    points
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WordshiftEntry {
    pub label: Label,
    pub element: f64,
    pub normalized_share: f64,
    pub side: Side,
    pub rank_pair: (f64, f64),
}

/// The `n` non-tied types with the largest elements, largest first, ties by
/// ascending label.
pub fn wordshift(result: &DivergenceResult, lex: &MergedLexicon, n: usize) -> Vec<WordshiftEntry> {
    assert_eq!(
        result.contributions.len(),
        lex.len(),
        "divergence result does not match lexicon"
    );
    let contributions = &result.contributions;
    let by_strength = |a: &usize, b: &usize| {
        let (ca, cb) = (&contributions[*a], &contributions[*b]);
        cb.element
            .partial_cmp(&ca.element)
            .unwrap_or(Ordering::Equal)
            .then_with(|| ca.label.cmp(&cb.label))
    };
    let mut idx: Vec<usize> = (0..contributions.len())
        .filter(|&i| contributions[i].side != Side::Tie)
        .collect();
    if n == 0 {
        return Vec::new();
    }
    if idx.len() > n {
        idx.select_nth_unstable_by(n - 1, by_strength);
        idx.truncate(n);
    }
    idx.sort_unstable_by(by_strength);
    idx.into_iter()
        .map(|i| {
            let c = &contributions[i];
            let r = &lex.records()[i];
            WordshiftEntry {
                label: c.label.clone(),
                element: c.element,
                normalized_share: c.normalized_share,
                side: c.side,
                rank_pair: (r.rank_1, r.rank_2),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BalanceStats {
    /// Each system's share of the combined counts.
    pub count_share: (f64, f64),
    /// Fraction of the union lexicon present in each system.
    pub type_share: (f64, f64),
    /// Fraction of the union lexicon found only in each system.
    pub exclusive_share: (f64, f64),
}

pub fn balance(lex: &MergedLexicon) -> BalanceStats {
    let total = lex.total_count_1() + lex.total_count_2();
    let union = lex.len() as f64;
    BalanceStats {
        count_share: (lex.total_count_1() / total, lex.total_count_2() / total),
        type_share: (lex.n1() as f64 / union, lex.n2() as f64 / union),
        exclusive_share: (lex.x1() as f64 / union, lex.x2() as f64 / union),
    }
}

/// Picks flank labels: for each row band the off-diagonal cell farthest below
/// the diagonal (system 1 side), and for each column band the cell farthest
/// above it (system 2 side). Each side keeps at most `max_per_side` labels,
/// thinned by taking every `ceil(bands / max_per_side)`-th band.
pub fn select_labels(grid: &DiamondGrid, max_per_side: usize) -> Vec<FlankLabel> {
    // band -> (distance from diagonal, cell)
    let mut rows: BTreeMap<u32, (u32, (u32, u32))> = BTreeMap::new();
    let mut cols: BTreeMap<u32, (u32, (u32, u32))> = BTreeMap::new();
    for &(i, j) in grid.cells.keys() {
        let (band, dist, map) = match i.cmp(&j) {
            Ordering::Less => (i, j - i, &mut rows),
            Ordering::Greater => (j, i - j, &mut cols),
            Ordering::Equal => continue,
        };
        let slot = map.entry(band).or_insert((dist, (i, j)));
        if dist > slot.0 {
            *slot = (dist, (i, j));
        }
    }

    let mut out = Vec::new();
    for (map, side) in [(rows, Side::System1), (cols, Side::System2)] {
        if max_per_side == 0 || map.is_empty() {
            continue;
        }
        let step = map.len().div_ceil(max_per_side);
        for (_, (_, cell)) in map.into_iter().step_by(step) {
            out.push(FlankLabel {
                cell,
                label: grid.cells[&cell].top_label.clone(),
                side,
            });
        }
    }
    out
}
