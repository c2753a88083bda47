//! Assembling an allotaxonograph and writing it out as SVG and JSON.
//!
//! Output is a pure function of the [`AllotaxDocument`]: coordinates are
//! printed with two decimals, fonts are generic families, and text widths
//! come from a fixed per-character table, so the same document always yields
//! the same bytes.
//!
//! Colour ramps (light to dark, interpolated in sRGB):
//!
//! | cells                          | light     | dark      |
//! |--------------------------------|-----------|-----------|
//! | ranked higher in system 1      | `#deebf7` | `#08306b` |
//! | ranked higher in system 2      | `#fee6ce` | `#7f2704` |
//! | same rank band in both systems | `#eeeeee` | `#252525` |

use std::fmt::Write as _;

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::divergence::{rtd_total, Alpha, Side};
use crate::error::{Error, Result};
use crate::numeric::round_significant;
use crate::plotgeom::{
    balance, build_diamond, contour_lines, select_labels, wordshift, BalanceStats, DiamondGrid,
    WordshiftEntry,
};
use crate::ranking::MergedLexicon;

pub const SYSTEM_1_RAMP: (Rgb, Rgb) = (Rgb(0xde, 0xeb, 0xf7), Rgb(0x08, 0x30, 0x6b));
pub const SYSTEM_2_RAMP: (Rgb, Rgb) = (Rgb(0xfe, 0xe6, 0xce), Rgb(0x7f, 0x27, 0x04));
pub const TIE_RAMP: (Rgb, Rgb) = (Rgb(0xee, 0xee, 0xee), Rgb(0x25, 0x25, 0x25));

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl Rgb {
    fn lerp(a: Rgb, b: Rgb, t: f64) -> Rgb {
        let t = t.clamp(0.0, 1.0);
        let mix = |x: u8, y: u8| (x as f64 + (y as f64 - x as f64) * t).round() as u8;
        Rgb(mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
    }

    fn hex(self) -> String {
        format!("#{:02x}{:02x}{:02x}", self.0, self.1, self.2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderOptions {
    /// Cells per diamond axis.
    pub cells: usize,
    /// Number of wordshift rows.
    pub wordshift_n: usize,
    pub max_labels_per_side: usize,
    pub contour_levels: usize,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            cells: 60,
            wordshift_n: 30,
            max_labels_per_side: 25,
            contour_levels: 10,
        }
    }
}

impl RenderOptions {
    pub const MAX_CELLS: usize = 250;
    pub const MAX_WORDSHIFT: usize = 200;
    pub const MAX_LABELS: usize = 100;
    pub const MAX_CONTOURS: usize = 30;

    /// Checks every option against its allowed range. The bounds keep the
    /// SVG small regardless of input size.
    pub fn validate(&self) -> Result<()> {
        let check = |name: &str, value: usize, lo: usize, hi: usize| {
            if (lo..=hi).contains(&value) {
                Ok(())
            } else {
                Err(Error::Options(format!(
                    "{name} must be between {lo} and {hi}, got {value}"
                )))
            }
        };
        check("cells", self.cells, 2, Self::MAX_CELLS)?;
        check("wordshift length", self.wordshift_n, 1, Self::MAX_WORDSHIFT)?;
        check(
            "labels per side",
            self.max_labels_per_side,
            0,
            Self::MAX_LABELS,
        )?;
        check("contour levels", self.contour_levels, 1, Self::MAX_CONTOURS)
    }
}

/// Everything needed to draw one allotaxonograph.
#[derive(Debug, Clone, PartialEq)]
pub struct AllotaxDocument {
    pub title_1: String,
    pub title_2: String,
    pub alpha: Alpha,
    pub grid: DiamondGrid,
    pub wordshift: Vec<WordshiftEntry>,
    pub balance: BalanceStats,
    pub divergence: f64,
    pub normalization: f64,
}

/// Runs divergence and geometry for one lexicon and alpha.
pub fn assemble(
    lex: &MergedLexicon,
    alpha: Alpha,
    title_1: &str,
    title_2: &str,
    options: &RenderOptions,
) -> Result<AllotaxDocument> {
    options.validate()?;
    let result = rtd_total(lex, alpha);
    let mut grid = build_diamond(lex, options.cells)?;
    grid.labels = select_labels(&grid, options.max_labels_per_side);
    grid.contours = contour_lines(alpha, grid.log_rank_max, options.contour_levels);
    Ok(AllotaxDocument {
        title_1: title_1.to_string(),
        title_2: title_2.to_string(),
        alpha,
        wordshift: wordshift(&result, lex, options.wordshift_n),
        balance: balance(lex),
        divergence: result.total,
        normalization: result.normalization,
        grid,
    })
}

// ---------------------------------------------------------------------------
// JSON report

/// A number written with at most 12 significant digits; integral values are
/// written without a fraction.
struct Num(f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let x = round_significant(self.0, 12);
        if x.fract() == 0.0 && x.abs() < 1e15 {
            s.serialize_i64(x as i64)
        } else {
            s.serialize_f64(x)
        }
    }
}

struct AlphaField(Alpha);

impl Serialize for AlphaField {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Alpha::Infinity => s.serialize_str("inf"),
            a => Num(a.as_f64()).serialize(s),
        }
    }
}

struct Pair((f64, f64));

impl Serialize for Pair {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [Num(self.0 .0), Num(self.0 .1)].serialize(s)
    }
}

struct BalanceField<'a>(&'a BalanceStats);

impl Serialize for BalanceField<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Balance", 3)?;
        st.serialize_field("count_share", &Pair(self.0.count_share))?;
        st.serialize_field("type_share", &Pair(self.0.type_share))?;
        st.serialize_field("exclusive_share", &Pair(self.0.exclusive_share))?;
        st.end()
    }
}

struct WordshiftRow<'a>(&'a WordshiftEntry);

impl Serialize for WordshiftRow<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let e = self.0;
        let mut st = s.serialize_struct("WordshiftRow", 6)?;
        st.serialize_field("label", &*e.label)?;
        st.serialize_field("element", &Num(e.element))?;
        st.serialize_field("share", &Num(e.normalized_share))?;
        st.serialize_field("rank_1", &Num(e.rank_pair.0))?;
        st.serialize_field("rank_2", &Num(e.rank_pair.1))?;
        st.serialize_field("side", &e.side)?;
        st.end()
    }
}

struct Report<'a>(&'a AllotaxDocument);

impl Serialize for Report<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let doc = self.0;
        let rows: Vec<WordshiftRow<'_>> = doc.wordshift.iter().map(WordshiftRow).collect();
        let mut st = s.serialize_struct("Report", 5)?;
        st.serialize_field("alpha", &AlphaField(doc.alpha))?;
        st.serialize_field("divergence", &Num(doc.divergence))?;
        st.serialize_field("normalization", &Num(doc.normalization))?;
        st.serialize_field("balance", &BalanceField(&doc.balance))?;
        st.serialize_field("wordshift", &rows)?;
        st.end()
    }
}

/// Machine-readable summary: alpha, divergence, normalization, balance and
/// the wordshift rows, in that key order. Infinite alpha is written as the
/// string `"inf"`.
pub fn render_report(doc: &AllotaxDocument) -> String {
    let mut out = serde_json::to_string_pretty(&Report(doc)).expect("report serializes");
    out.push('\n');
    out
}

// ---------------------------------------------------------------------------
// SVG

const WIDTH: f64 = 1200.0;
const HEIGHT: f64 = 860.0;
const FONT: &str = "sans-serif";

// Diamond: apex at (CX, TOP), half-diagonal HALF.
const CX: f64 = 330.0;
const TOP: f64 = 110.0;
const HALF: f64 = 260.0;

// Wordshift panel.
const WS_AXIS: f64 = 905.0;
const WS_TOP: f64 = 120.0;
const WS_HEIGHT: f64 = 480.0;
const WS_BAR_MAX: f64 = 120.0;
const WS_HALF_WIDTH: f64 = 265.0;
const WS_ROW_MAX: f64 = 16.0;

// Balance panel.
const BAL_AXIS: f64 = 905.0;
const BAL_TOP: f64 = 670.0;
const BAL_BAR_MAX: f64 = 150.0;

// Legend.
const LEG_LEFT: f64 = 60.0;
const LEG_TOP: f64 = 700.0;
const LEG_SWATCH: f64 = 22.0;
const LEG_STEPS: usize = 10;

/// Formats a coordinate with two decimals, never as `-0.00`.
fn num(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

/// Escapes text for XML content and attributes, replacing characters XML 1.0
/// cannot carry.
fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            '\t' | '\n' | '\r' => out.push(' '),
            c if (c as u32) < 0x20 || c == '\u{fffe}' || c == '\u{ffff}' => out.push('\u{fffd}'),
            c => out.push(c),
        }
    }
    out
}

/// Estimated advance of `c` in ems for a generic sans-serif face.
fn char_width(c: char) -> f64 {
    match c {
        'i' | 'j' | 'l' | '.' | ',' | ':' | ';' | '\'' | '|' | '!' | ' ' => 0.28,
        'f' | 'r' | 't' | 'I' | '(' | ')' | '[' | ']' | '-' => 0.36,
        'm' | 'w' => 0.85,
        'M' | 'W' => 0.92,
        '0'..='9' => 0.56,
        'a'..='z' => 0.53,
        'A'..='Z' => 0.68,
        c if c.is_ascii() => 0.58,
        c if (c as u32) >= 0x2e80 => 1.0,
        _ => 0.62,
    }
}

pub fn text_width(s: &str, font_size: f64) -> f64 {
    s.chars().map(char_width).sum::<f64>() * font_size
}

/// Shortens `s` with an ellipsis so its estimated width fits `max_px`.
fn fit_text(s: &str, max_px: f64, font_size: f64) -> String {
    if text_width(s, font_size) <= max_px {
        return s.to_string();
    }
    let budget = max_px - char_width('…') * font_size;
    let mut used = 0.0;
    let mut out = String::new();
    for c in s.chars() {
        used += char_width(c) * font_size;
        if used > budget {
            break;
        }
        out.push(c);
    }
    out.push('…');
    out
}

/// Ranks print as integers when whole, otherwise with one decimal.
fn fmt_rank(r: f64) -> String {
    if r.fract() == 0.0 && r.abs() < 1e15 {
        format!("{}", r as i64)
    } else {
        let s = format!("{r:.1}");
        if s.ends_with(".0") {
            format!("{r:.2}")
        } else {
            s
        }
    }
}

fn superscript(n: i64) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    let mut s: String = n
        .abs()
        .to_string()
        .chars()
        .map(|d| DIGITS[d as usize - '0' as usize])
        .collect();
    if n < 0 {
        s.insert(0, '⁻');
    }
    s
}

fn decade_label(d: i64) -> String {
    match d {
        0 => "1".into(),
        1 => "10".into(),
        d => format!("10{}", superscript(d)),
    }
}

/// Maps log-rank coordinates (decades) onto the rotated diamond.
struct DiamondFrame {
    lrm: f64,
}

impl DiamondFrame {
    fn point(&self, u: f64, v: f64) -> (f64, f64) {
        let (a, b) = (u / self.lrm, v / self.lrm);
        (CX + (a - b) * HALF, TOP + (a + b) * HALF)
    }

    fn cell_point(&self, i: f64, j: f64, k: usize) -> (f64, f64) {
        self.point(i / k as f64 * self.lrm, j / k as f64 * self.lrm)
    }
}

fn cell_color(i: u32, j: u32, t: f64) -> Rgb {
    let (light, dark) = match i.cmp(&j) {
        std::cmp::Ordering::Less => SYSTEM_1_RAMP,
        std::cmp::Ordering::Greater => SYSTEM_2_RAMP,
        std::cmp::Ordering::Equal => TIE_RAMP,
    };
    Rgb::lerp(light, dark, t)
}

fn intensity(count: u64, max_count: u64) -> f64 {
    if max_count == 0 {
        return 0.0;
    }
    (1.0 + count as f64).log10() / (1.0 + max_count as f64).log10()
}

/// Draws the allotaxonograph as a standalone SVG 1.1 document.
pub fn render_svg(doc: &AllotaxDocument) -> String {
    let mut svg = String::with_capacity(64 * 1024 + doc.grid.cells.len() * 80);
    let w = &mut svg;
    let _ = writeln!(
        w,
        r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#
    );
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="{FONT}">"#,
        W = WIDTH,
        H = HEIGHT
    );
    let _ = writeln!(
        w,
        r##"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>"##
    );
    header(w, doc);
    diamond(w, doc);
    legend(w, doc);
    wordshift_panel(w, doc);
    balance_panel(w, doc);
    let _ = writeln!(w, "</svg>");
    svg
}

fn header(w: &mut String, doc: &AllotaxDocument) {
    let size = 18.0;
    let _ = writeln!(
        w,
        r#"<g id="titles" font-size="{size}" font-weight="bold">"#
    );
    let _ = writeln!(
        w,
        r#"<text x="{}" y="40" text-anchor="start">{}</text>"#,
        num(CX - HALF),
        escape(&fit_text(&doc.title_1, HALF - 10.0, size))
    );
    let _ = writeln!(
        w,
        r#"<text x="{}" y="40" text-anchor="end">{}</text>"#,
        num(CX + HALF),
        escape(&fit_text(&doc.title_2, HALF - 10.0, size))
    );
    let _ = writeln!(w, "</g>");
    let _ = writeln!(
        w,
        r#"<text id="alpha" x="{}" y="70" font-size="14" text-anchor="middle">α = {}</text>"#,
        num(CX),
        escape(&doc.alpha.to_string())
    );
    let _ = writeln!(
        w,
        r#"<text id="divergence" x="{}" y="90" font-size="14" text-anchor="middle">D = {:.3}</text>"#,
        num(CX),
        doc.divergence
    );
}

fn diamond(w: &mut String, doc: &AllotaxDocument) {
    let grid = &doc.grid;
    let frame = DiamondFrame {
        lrm: grid.log_rank_max,
    };
    let k = grid.k;
    let max_count = grid.max_count();
    let (cell_dx, cell_dy) = (HALF / k as f64, HALF / k as f64);

    let _ = writeln!(w, r#"<g id="diamond">"#);
    // Outline.
    let corners = [
        frame.point(0.0, 0.0),
        frame.point(frame.lrm, 0.0),
        frame.point(frame.lrm, frame.lrm),
        frame.point(0.0, frame.lrm),
    ];
    let _ = writeln!(
        w,
        r##"<path d="M{} {}L{} {}L{} {}L{} {}Z" fill="#ffffff" stroke="#999999" stroke-width="1"/>"##,
        num(corners[0].0),
        num(corners[0].1),
        num(corners[1].0),
        num(corners[1].1),
        num(corners[2].0),
        num(corners[2].1),
        num(corners[3].0),
        num(corners[3].1)
    );

    let _ = writeln!(w, r#"<g id="cells" stroke="none">"#);
    for (&(i, j), cell) in &grid.cells {
        let (x, y) = frame.cell_point(i as f64, j as f64, k);
        let color = cell_color(i, j, intensity(cell.count, max_count));
        let _ = writeln!(
            w,
            r#"<path d="M{} {}l{} {}l{} {}l{} {}z" fill="{}"/>"#,
            num(x),
            num(y),
            num(cell_dx),
            num(cell_dy),
            num(-cell_dx),
            num(cell_dy),
            num(-cell_dx),
            num(-cell_dy),
            color.hex()
        );
    }
    let _ = writeln!(w, "</g>");

    // Equal-rank line.
    let (bx, by) = frame.point(frame.lrm, frame.lrm);
    let _ = writeln!(
        w,
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#555555" stroke-width="0.8" stroke-dasharray="4 3"/>"##,
        num(CX),
        num(TOP),
        num(bx),
        num(by)
    );

    let _ = writeln!(
        w,
        r##"<g id="contours" fill="none" stroke="#666666" stroke-width="0.7">"##
    );
    for line in &grid.contours {
        let pts: Vec<String> = line
            .points
            .iter()
            .map(|&(u, v)| {
                let (x, y) = frame.point(u, v);
                format!("{},{}", num(x), num(y))
            })
            .collect();
        let _ = writeln!(w, r#"<polyline points="{}"/>"#, pts.join(" "));
    }
    let _ = writeln!(w, "</g>");

    axes(w, doc, &frame);

    let size = 9.0;
    let _ = writeln!(
        w,
        r##"<g id="flank-labels" font-size="{size}" fill="#222222">"##
    );
    let mut placed: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
    for label in &grid.labels {
        let (i, j) = (label.cell.0 as f64 + 0.5, label.cell.1 as f64 + 0.5);
        let (x, y) = frame.cell_point(i, j, k);
        let (anchor, dx, slot) = match label.side {
            Side::System2 => ("start", 4.0, 1),
            _ => ("end", -4.0, 0),
        };
        if placed[slot].iter().any(|&p| (p - y).abs() < size + 1.0) {
            continue;
        }
        placed[slot].push(y);
        let _ = writeln!(
            w,
            r#"<text x="{}" y="{}" text-anchor="{anchor}">{}</text>"#,
            num(x + dx),
            num(y + size / 3.0),
            escape(&fit_text(&label.label, 110.0, size))
        );
    }
    let _ = writeln!(w, "</g>");
    let _ = writeln!(w, "</g>");
}

fn axes(w: &mut String, doc: &AllotaxDocument, frame: &DiamondFrame) {
    let size = 10.0;
    let _ = writeln!(w, r##"<g id="axes" font-size="{size}" fill="#333333">"##);
    let decades = frame.lrm.round() as i64;
    for d in 0..=decades {
        let t = d as f64;
        // System 1 ranks run down the upper-right edge, system 2 ranks down
        // the upper-left edge.
        let (x1, y1) = frame.point(t, 0.0);
        let (x2, y2) = frame.point(0.0, t);
        let _ = writeln!(
            w,
            r#"<text x="{}" y="{}" text-anchor="start">{}</text>"#,
            num(x1 + 6.0),
            num(y1 - 2.0),
            decade_label(d)
        );
        let _ = writeln!(
            w,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            num(x2 - 6.0),
            num(y2 - 2.0),
            decade_label(d)
        );
    }
    let (rx, ry) = frame.point(frame.lrm * 0.5, 0.0);
    let (lx, ly) = frame.point(0.0, frame.lrm * 0.5);
    let title_size = 12.0;
    let _ = writeln!(
        w,
        r#"<text x="{}" y="{}" font-size="{title_size}" text-anchor="middle" transform="rotate(45 {} {})">Rank r₁ · {}</text>"#,
        num(rx + 28.0),
        num(ry - 28.0),
        num(rx + 28.0),
        num(ry - 28.0),
        escape(&fit_text(&doc.title_1, 220.0, title_size))
    );
    let _ = writeln!(
        w,
        r#"<text x="{}" y="{}" font-size="{title_size}" text-anchor="middle" transform="rotate(-45 {} {})">Rank r₂ · {}</text>"#,
        num(lx - 28.0),
        num(ly - 28.0),
        num(lx - 28.0),
        num(ly - 28.0),
        escape(&fit_text(&doc.title_2, 220.0, title_size))
    );
    let _ = writeln!(w, "</g>");
}

fn legend(w: &mut String, doc: &AllotaxDocument) {
    let max_count = doc.grid.max_count().max(1);
    let t_min = intensity(1, max_count);
    let size = 10.0;
    let _ = writeln!(w, r##"<g id="legend" font-size="{size}" fill="#333333">"##);
    let _ = writeln!(
        w,
        r#"<text x="{}" y="{}" font-size="12">Types per cell</text>"#,
        num(LEG_LEFT),
        num(LEG_TOP - 12.0)
    );
    let rows = [
        ((0u32, 1u32), "higher in system 1"),
        ((0, 0), "same band"),
        ((1, 0), "higher in system 2"),
    ];
    for (row, ((i, j), caption)) in rows.iter().enumerate() {
        let y = LEG_TOP + row as f64 * (LEG_SWATCH + 8.0);
        for s in 0..LEG_STEPS {
            let t = t_min + (1.0 - t_min) * s as f64 / (LEG_STEPS - 1) as f64;
            let _ = writeln!(
                w,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
                num(LEG_LEFT + s as f64 * LEG_SWATCH),
                num(y),
                num(LEG_SWATCH),
                num(LEG_SWATCH),
                cell_color(*i, *j, t).hex()
            );
        }
        let _ = writeln!(
            w,
            r#"<text x="{}" y="{}">{caption}</text>"#,
            num(LEG_LEFT + LEG_STEPS as f64 * LEG_SWATCH + 8.0),
            num(y + LEG_SWATCH * 0.65)
        );
    }
    let base = LEG_TOP + rows.len() as f64 * (LEG_SWATCH + 8.0) + 6.0;
    let _ = writeln!(
        w,
        r#"<text x="{}" y="{}" text-anchor="start">1</text>"#,
        num(LEG_LEFT),
        num(base)
    );
    let _ = writeln!(
        w,
        r#"<text x="{}" y="{}" text-anchor="end">{max_count}</text>"#,
        num(LEG_LEFT + LEG_STEPS as f64 * LEG_SWATCH),
        num(base)
    );
    let _ = writeln!(
        w,
        r#"<text x="{}" y="{}" text-anchor="middle">log scale</text>"#,
        num(LEG_LEFT + LEG_STEPS as f64 * LEG_SWATCH / 2.0),
        num(base)
    );
    let _ = writeln!(w, "</g>");
}

fn wordshift_panel(w: &mut String, doc: &AllotaxDocument) {
    let rows = &doc.wordshift;
    let _ = writeln!(w, r#"<g id="wordshift">"#);
    let _ = writeln!(
        w,
        r#"<text x="{}" y="{}" font-size="13" font-weight="bold" text-anchor="middle">Largest contributions</text>"#,
        num(WS_AXIS),
        num(WS_TOP - 34.0)
    );
    let head = 11.0;
    let _ = writeln!(
        w,
        r##"<text x="{}" y="{}" font-size="{head}" text-anchor="end" fill="{}">{}</text>"##,
        num(WS_AXIS - 6.0),
        num(WS_TOP - 14.0),
        SYSTEM_1_RAMP.1.hex(),
        escape(&fit_text(
            &format!("← {}", doc.title_1),
            WS_HALF_WIDTH - 10.0,
            head
        ))
    );
    let _ = writeln!(
        w,
        r##"<text x="{}" y="{}" font-size="{head}" text-anchor="start" fill="{}">{}</text>"##,
        num(WS_AXIS + 6.0),
        num(WS_TOP - 14.0),
        SYSTEM_2_RAMP.1.hex(),
        escape(&fit_text(
            &format!("{} →", doc.title_2),
            WS_HALF_WIDTH - 10.0,
            head
        ))
    );

    let row_h = if rows.is_empty() {
        WS_ROW_MAX
    } else {
        (WS_HEIGHT / rows.len() as f64).min(WS_ROW_MAX)
    };
    let size = (row_h * 0.7).clamp(5.0, 10.0);
    let max_element = rows.iter().map(|r| r.element).fold(0.0, f64::max);
    let bar_h = row_h * 0.75;
    for (n, row) in rows.iter().enumerate() {
        let y = WS_TOP + n as f64 * row_h;
        let len = if max_element > 0.0 {
            row.element / max_element * WS_BAR_MAX
        } else {
            0.0
        };
        let (x, fill, anchor, text_x) = match row.side {
            Side::System2 => (WS_AXIS, SYSTEM_2_RAMP.1, "start", WS_AXIS + len + 4.0),
            _ => (WS_AXIS - len, SYSTEM_1_RAMP.1, "end", WS_AXIS - len - 4.0),
        };
        let _ = writeln!(
            w,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
            num(x),
            num(y),
            num(len),
            num(bar_h),
            fill.hex()
        );
        let ranks = format!(
            " {} ⇄ {}",
            fmt_rank(row.rank_pair.0),
            fmt_rank(row.rank_pair.1)
        );
        let room = WS_HALF_WIDTH - len - 4.0 - text_width(&ranks, size);
        let text = format!("{}{}", fit_text(&row.label, room.max(size), size), ranks);
        let _ = writeln!(
            w,
            r#"<text x="{}" y="{}" font-size="{}" text-anchor="{anchor}">{}</text>"#,
            num(text_x),
            num(y + bar_h * 0.8),
            num(size),
            escape(&text)
        );
    }
    if rows.is_empty() {
        let _ = writeln!(
            w,
            r##"<text x="{}" y="{}" font-size="11" text-anchor="middle" fill="#777777">no rank differences</text>"##,
            num(WS_AXIS),
            num(WS_TOP + 20.0)
        );
    }
    let bottom = WS_TOP + (rows.len().max(1) as f64) * row_h;
    let _ = writeln!(
        w,
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#333333" stroke-width="0.8"/>"##,
        num(WS_AXIS),
        num(WS_TOP - 4.0),
        num(WS_AXIS),
        num(bottom)
    );
    let _ = writeln!(w, "</g>");
}

fn balance_panel(w: &mut String, doc: &AllotaxDocument) {
    let b = &doc.balance;
    let rows = [
        ("total counts", b.count_share),
        ("all types", b.type_share),
        ("exclusive types", b.exclusive_share),
    ];
    let _ = writeln!(w, r#"<g id="balance" font-size="10">"#);
    let _ = writeln!(
        w,
        r#"<text x="{}" y="{}" font-size="13" font-weight="bold" text-anchor="middle">Balance</text>"#,
        num(BAL_AXIS),
        num(BAL_TOP - 18.0)
    );
    for (n, (caption, (s1, s2))) in rows.iter().enumerate() {
        let y = BAL_TOP + n as f64 * 44.0;
        let _ = writeln!(
            w,
            r##"<text x="{}" y="{}" text-anchor="middle" fill="#333333">{caption}</text>"##,
            num(BAL_AXIS),
            num(y)
        );
        let (l1, l2) = (s1 * BAL_BAR_MAX, s2 * BAL_BAR_MAX);
        let bar_y = y + 6.0;
        let _ = writeln!(
            w,
            r#"<rect x="{}" y="{}" width="{}" height="14" fill="{}"/>"#,
            num(BAL_AXIS - l1),
            num(bar_y),
            num(l1),
            SYSTEM_1_RAMP.1.hex()
        );
        let _ = writeln!(
            w,
            r#"<rect x="{}" y="{}" width="{}" height="14" fill="{}"/>"#,
            num(BAL_AXIS),
            num(bar_y),
            num(l2),
            SYSTEM_2_RAMP.1.hex()
        );
        let _ = writeln!(
            w,
            r#"<text x="{}" y="{}" text-anchor="end">{:.1}%</text>"#,
            num(BAL_AXIS - l1 - 4.0),
            num(bar_y + 11.0),
            s1 * 100.0
        );
        let _ = writeln!(
            w,
            r#"<text x="{}" y="{}" text-anchor="start">{:.1}%</text>"#,
            num(BAL_AXIS + l2 + 4.0),
            num(bar_y + 11.0),
            s2 * 100.0
        );
    }
    let _ = writeln!(w, "</g>");
}
