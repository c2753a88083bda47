//! Allotaxonometry engine.
//!
//! Compares two heavy-tailed ranked systems with rank-turbulence divergence
//! and derives everything needed to draw an allotaxonograph: the log-rank
//! diamond histogram, contour lines, flank labels, the wordshift list and the
//! balance statistics.
//!
//! The pipeline is
//!
//! ```text
//! bytes --ingest--> RankedList --ranking--> MergedLexicon --divergence--> DivergenceResult
//!                                                 \--plotgeom--> DiamondGrid, wordshift, balance
//!                                                  \--render--> AllotaxDocument -> SVG / JSON report
//! ```
//!
//! ```
//! use allotax_core::{merge_systems, rtd_total, Alpha, RankedList};
//!
//! let a = RankedList::from_counts("one", [("a", 3.0), ("b", 1.0)]).unwrap();
//! let b = RankedList::from_counts("two", [("a", 2.0), ("c", 2.0)]).unwrap();
//! let lex = merge_systems(&a, &b);
//! let result = rtd_total(&lex, Alpha::parse("1").unwrap());
//! assert!((result.total - 0.6147).abs() < 1e-4);
//! ```

pub mod divergence;
pub mod error;
pub mod ingest;
pub mod numeric;
pub mod plotgeom;
pub mod ranking;
pub mod render;

pub use divergence::{
    alpha_sweep, normalization, rtd_element, rtd_total, Alpha, Contribution, DivergenceResult, Side,
};
pub use error::{Error, Result};
pub use ingest::{
    detect_format, parse_ranked_list, Entry, Format, Ingested, RankedList, SourceKind,
};
pub use plotgeom::{
    balance, build_diamond, contour_lines, select_labels, wordshift, BalanceStats, Cell,
    DiamondGrid, FlankLabel, Polyline, WordshiftEntry,
};
pub use ranking::{merge_systems, tied_ranks, Exclusivity, MergedLexicon, TypeRecord};
pub use render::{assemble, render_report, render_svg, AllotaxDocument, RenderOptions};

/// Type labels are shared between the lexicon, contributions and plot
/// geometry without copying.
pub type Label = std::sync::Arc<str>;
