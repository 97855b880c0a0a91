//! Scene model for the browser demo: a 2V element rendered as two unit
//! squares whose matched cells share a color index.  Pure data, built
//! natively and serialized to JSON for the canvas code.

use serde::Serialize;

use nvgrid::words::normal_form;
use nvgrid::{canon, DyadicAddress, DyadicBlock, Element, Point};

#[derive(Debug, Clone, Serialize)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
    /// Matching index: source and target rects with the same color index
    /// correspond under the element.
    pub color: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Scene {
    pub source: Vec<Rect>,
    pub target: Vec<Rect>,
    /// Caret count M of the reduced grid diagram.
    pub caret_count: usize,
    /// Leaf counts of the two coordinate trees of the canonical grid.
    pub leaf_counts: Vec<usize>,
    pub word: String,
    pub cells: usize,
}

fn unit_interval(addr: &DyadicAddress) -> (f64, f64) {
    let mut lo = 0.0f64;
    let mut len = 1.0f64;
    for &b in addr.bits() {
        len *= 0.5;
        if b {
            lo += len;
        }
    }
    (lo, len)
}

fn rect_of(block: &DyadicBlock, color: usize) -> Rect {
    let (x, w) = unit_interval(block.coord(0));
    let (y, h) = unit_interval(block.coord(1));
    Rect { x, y, w, h, color }
}

/// Canonicalize and lay out an element; cells are numbered in the grid's
/// composite leaf order.
pub fn scene_of(f: &Element) -> Scene {
    let rgd = canon(f);
    let cells = rgd.grid().cells();
    let images = rgd.grid().images();
    let source: Vec<Rect> = cells
        .iter()
        .enumerate()
        .map(|(i, b)| rect_of(b, i))
        .collect();
    let target: Vec<Rect> = images
        .iter()
        .enumerate()
        .map(|(i, b)| rect_of(b, i))
        .collect();
    let word = normal_form(f).map(|w| w.to_string()).unwrap_or_default();
    Scene {
        cells: source.len(),
        caret_count: rgd.caret_count(),
        leaf_counts: rgd.leaf_counts(),
        source,
        target,
        word,
    }
}

pub fn random_element(seed: u64, budget: usize) -> Element {
    Element::random(seed, 2, budget.min(24))
}

/// Snap a click in the unit square to a dyadic point (depth 10), apply
/// the element, and return both points for marker drawing.
#[derive(Debug, Clone, Serialize)]
pub struct Mapped {
    pub from: (f64, f64),
    pub to: (f64, f64),
    pub from_exact: String,
    pub to_exact: String,
}

pub fn map_point(f: &Element, x: f64, y: f64) -> Mapped {
    const DEPTH: u32 = 10;
    let snap = |v: f64| -> u64 {
        let scaled = (v.clamp(0.0, 1.0) * (1u64 << DEPTH) as f64) as u64;
        scaled.min((1u64 << DEPTH) - 1)
    };
    let bits = |num: u64| -> Vec<bool> { (0..DEPTH).rev().map(|i| num >> i & 1 == 1).collect() };
    let p = Point::new(vec![
        nvgrid::DyadicFraction::from_bits(bits(snap(x))),
        nvgrid::DyadicFraction::from_bits(bits(snap(y))),
    ]);
    let q = f.evaluate(&p);
    let to_f64 = |fr: &nvgrid::DyadicFraction| -> f64 {
        fr.bits()
            .iter()
            .enumerate()
            .map(|(i, &b)| if b { 0.5f64.powi(i as i32 + 1) } else { 0.0 })
            .sum()
    };
    Mapped {
        from: (to_f64(&p.coords()[0]), to_f64(&p.coords()[1])),
        to: (to_f64(&q.coords()[0]), to_f64(&q.coords()[1])),
        from_exact: p.to_string(),
        to_exact: q.to_string(),
    }
}
