//! Colored binary trees describing dyadic subdivisions.
//!
//! A caret of color `d` halves the current block at the midline of
//! coordinate `d`; the lower child is the smaller-coordinate half.  Leaves
//! are indexed left to right.

use std::fmt;

use crate::address::DyadicAddress;
use crate::block::DyadicBlock;

/// Finite binary tree with a coordinate label on every caret.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ColoredTree {
    Leaf,
    Caret {
        color: usize,
        lower: Box<ColoredTree>,
        upper: Box<ColoredTree>,
    },
}

impl ColoredTree {
    pub fn caret(color: usize, lower: ColoredTree, upper: ColoredTree) -> Self {
        ColoredTree::Caret {
            color,
            lower: Box::new(lower),
            upper: Box::new(upper),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, ColoredTree::Leaf)
    }

    pub fn caret_count(&self) -> usize {
        match self {
            ColoredTree::Leaf => 0,
            ColoredTree::Caret { lower, upper, .. } => {
                1 + lower.caret_count() + upper.caret_count()
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        self.caret_count() + 1
    }

    /// Largest color used, plus one; 0 for a leaf.
    pub fn min_dim(&self) -> usize {
        match self {
            ColoredTree::Leaf => 0,
            ColoredTree::Caret {
                color,
                lower,
                upper,
            } => (color + 1).max(lower.min_dim()).max(upper.min_dim()),
        }
    }

    /// Number of carets on the right arm (root and iterated upper children).
    pub fn spine_len(&self) -> usize {
        match self {
            ColoredTree::Leaf => 0,
            ColoredTree::Caret { upper, .. } => 1 + upper.spine_len(),
        }
    }

    /// The blocks of the induced pattern, in leaf order.
    pub fn blocks(&self, dim: usize) -> Vec<DyadicBlock> {
        let mut out = Vec::with_capacity(self.leaf_count());
        self.collect_blocks(&DyadicBlock::cube(dim), &mut out);
        out
    }

    fn collect_blocks(&self, here: &DyadicBlock, out: &mut Vec<DyadicBlock>) {
        match self {
            ColoredTree::Leaf => out.push(here.clone()),
            ColoredTree::Caret {
                color,
                lower,
                upper,
            } => {
                lower.collect_blocks(
                    &here.with_coord(*color, here.coord(*color).child(false)),
                    out,
                );
                upper.collect_blocks(
                    &here.with_coord(*color, here.coord(*color).child(true)),
                    out,
                );
            }
        }
    }

    /// All-right tree of `carets` carets in the given color.
    pub fn all_right(color: usize, carets: usize) -> Self {
        let mut t = ColoredTree::Leaf;
        for _ in 0..carets {
            t = ColoredTree::caret(color, ColoredTree::Leaf, t);
        }
        t
    }
}

/// One coordinate's subdivision tree: a bare shape, colored by the
/// coordinate it belongs to when assembled into a grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CoordTree {
    Leaf,
    Caret(Box<CoordTree>, Box<CoordTree>),
}

impl CoordTree {
    pub fn caret(lower: CoordTree, upper: CoordTree) -> Self {
        CoordTree::Caret(Box::new(lower), Box::new(upper))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, CoordTree::Leaf)
    }

    pub fn caret_count(&self) -> usize {
        match self {
            CoordTree::Leaf => 0,
            CoordTree::Caret(l, u) => 1 + l.caret_count() + u.caret_count(),
        }
    }

    pub fn leaf_count(&self) -> usize {
        self.caret_count() + 1
    }

    pub fn spine_len(&self) -> usize {
        match self {
            CoordTree::Leaf => 0,
            CoordTree::Caret(_, u) => 1 + u.spine_len(),
        }
    }

    /// All-right shape with `carets` carets (`carets + 1` leaves).
    pub fn all_right(carets: usize) -> Self {
        let mut t = CoordTree::Leaf;
        for _ in 0..carets {
            t = CoordTree::caret(CoordTree::Leaf, t);
        }
        t
    }

    /// Leaf interval addresses, in leaf order.
    pub fn leaf_addresses(&self) -> Vec<DyadicAddress> {
        let mut out = Vec::with_capacity(self.leaf_count());
        self.collect_leaves(&DyadicAddress::root(), &mut out);
        out
    }

    fn collect_leaves(&self, here: &DyadicAddress, out: &mut Vec<DyadicAddress>) {
        match self {
            CoordTree::Leaf => out.push(here.clone()),
            CoordTree::Caret(l, u) => {
                l.collect_leaves(&here.child(false), out);
                u.collect_leaves(&here.child(true), out);
            }
        }
    }

    /// Color every caret with coordinate `d`.
    pub fn colored(&self, d: usize) -> ColoredTree {
        match self {
            CoordTree::Leaf => ColoredTree::Leaf,
            CoordTree::Caret(l, u) => ColoredTree::caret(d, l.colored(d), u.colored(d)),
        }
    }

    /// Smallest tree whose leaf intervals avoid every cut in `cuts`
    /// (each cut a trimmed binary fraction strictly inside `(0,1)`):
    /// halve while some cut lies strictly inside the current interval.
    pub fn from_cuts(cuts: &[Vec<bool>]) -> Self {
        Self::build_from_cuts(&DyadicAddress::root(), cuts)
    }

    fn build_from_cuts(here: &DyadicAddress, cuts: &[Vec<bool>]) -> Self {
        // a trimmed cut lies strictly inside interval(a) iff a is a proper
        // prefix of the cut's bits
        let split = cuts.iter().any(|c| {
            c.len() > here.len() && here.bits().iter().enumerate().all(|(i, &b)| c[i] == b)
        });
        if split {
            CoordTree::caret(
                Self::build_from_cuts(&here.child(false), cuts),
                Self::build_from_cuts(&here.child(true), cuts),
            )
        } else {
            CoordTree::Leaf
        }
    }
}

/// Hang copies of the later coordinate trees below every leaf of the
/// earlier ones; coordinate 0 is outermost.  Leaf order of the result is
/// row-major over the per-coordinate leaf orders.
pub fn composite_tree(parts: &[CoordTree]) -> ColoredTree {
    fn go(parts: &[CoordTree], d: usize) -> ColoredTree {
        if d == parts.len() {
            return ColoredTree::Leaf;
        }
        fn graft(shape: &CoordTree, d: usize, parts: &[CoordTree]) -> ColoredTree {
            match shape {
                CoordTree::Leaf => go(parts, d + 1),
                CoordTree::Caret(l, u) => {
                    ColoredTree::caret(d, graft(l, d, parts), graft(u, d, parts))
                }
            }
        }
        graft(&parts[d], d, parts)
    }
    go(parts, 0)
}

impl fmt::Display for ColoredTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColoredTree::Leaf => write!(f, "."),
            ColoredTree::Caret {
                color,
                lower,
                upper,
            } => {
                write!(f, "({color} {lower} {upper})")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leaf_addresses_in_order() {
        let t = CoordTree::caret(
            CoordTree::caret(CoordTree::Leaf, CoordTree::Leaf),
            CoordTree::Leaf,
        );
        let addrs: Vec<String> = t.leaf_addresses().iter().map(|a| a.to_string()).collect();
        assert_eq!(addrs, ["00", "01", "1"]);
    }

    #[test]
    fn composite_hangs_later_trees_below() {
        let v = CoordTree::caret(CoordTree::Leaf, CoordTree::Leaf);
        let h = CoordTree::caret(CoordTree::Leaf, CoordTree::Leaf);
        let t = composite_tree(&[v, h]);
        // color-0 caret over two color-1 carets
        match &t {
            ColoredTree::Caret {
                color,
                lower,
                upper,
            } => {
                assert_eq!(*color, 0);
                for child in [lower, upper] {
                    match child.as_ref() {
                        ColoredTree::Caret {
                            color,
                            lower,
                            upper,
                        } => {
                            assert_eq!(*color, 1);
                            assert!(lower.is_leaf() && upper.is_leaf());
                        }
                        _ => panic!("expected caret"),
                    }
                }
            }
            _ => panic!("expected caret"),
        }
        assert_eq!(t.leaf_count(), 4);
    }

    #[test]
    fn nesting_order_permutes_the_same_blocks() {
        // hanging the horizontal carets below the vertical one, or the
        // other way around, subdivides the square into the same four
        // blocks in a different leaf order
        let v_outer = ColoredTree::caret(
            0,
            ColoredTree::caret(1, ColoredTree::Leaf, ColoredTree::Leaf),
            ColoredTree::caret(1, ColoredTree::Leaf, ColoredTree::Leaf),
        );
        let h_outer = ColoredTree::caret(
            1,
            ColoredTree::caret(0, ColoredTree::Leaf, ColoredTree::Leaf),
            ColoredTree::caret(0, ColoredTree::Leaf, ColoredTree::Leaf),
        );
        let a = v_outer.blocks(2);
        let b = h_outer.blocks(2);
        assert_ne!(a, b);
        let transposed: Vec<_> = [0, 2, 1, 3].iter().map(|&k| b[k].clone()).collect();
        assert_eq!(a, transposed);
        let mut a = a;
        let mut b = b;
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn cuts_build_minimal_tree() {
        // single cut at 1/2
        let t = CoordTree::from_cuts(&[vec![true]]);
        assert_eq!(t.leaf_count(), 2);
        // prefix-closed cut set {1/2, 3/4} gives leaves 0, 10, 110, 111? no:
        // cuts strictly inside [1/2,1) -> 3/4 only; leaves 0 | 10 | 11
        let t = CoordTree::from_cuts(&[vec![true], vec![true, true]]);
        let addrs: Vec<String> = t.leaf_addresses().iter().map(|a| a.to_string()).collect();
        assert_eq!(addrs, ["0", "10", "11"]);
    }

    #[test]
    fn spine_length() {
        assert_eq!(CoordTree::all_right(3).spine_len(), 3);
        assert_eq!(ColoredTree::all_right(0, 2).spine_len(), 2);
        let left = CoordTree::caret(
            CoordTree::caret(CoordTree::Leaf, CoordTree::Leaf),
            CoordTree::Leaf,
        );
        assert_eq!(left.spine_len(), 1);
    }
}
