//! Patterns: finite partitions of the unit cube into basic dyadic blocks.
//!
//! Validation runs a guillotine recursion: at each step some coordinate's
//! midline must cut the current box without crossing any block.  The same
//! recursion, with the smallest cuttable coordinate preferred, defines the
//! canonical tree of a pattern.  In dimensions 1 and 2 every disjoint exact
//! cover admits such cuts; in higher dimensions inputs that do not are
//! rejected as `NotTreeGenerated`.

use num_bigint::BigUint;

use crate::block::DyadicBlock;
use crate::error::{Error, Result};
use crate::tree::{ColoredTree, CoordTree};

/// A validated tree-generated partition of `[0,1)^n`, blocks stored in
/// canonical (lexicographic address tuple) order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    dim: usize,
    blocks: Vec<DyadicBlock>,
}

impl Pattern {
    /// Validate a set of blocks as an exact tree-generated partition.
    pub fn new(blocks: Vec<DyadicBlock>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Gap("no blocks".into()));
        }
        let dim = blocks[0].dim();
        for b in &blocks {
            if b.dim() != dim {
                return Err(Error::DimMismatch(dim, b.dim()));
            }
        }
        let mut sorted = blocks;
        sorted.sort();
        let idx: Vec<usize> = (0..sorted.len()).collect();
        decompose(&sorted, &DyadicBlock::cube(dim), &idx)?;
        Ok(Pattern {
            dim,
            blocks: sorted,
        })
    }

    /// The single-block pattern covering the cube.
    pub fn trivial(dim: usize) -> Self {
        Pattern {
            dim,
            blocks: vec![DyadicBlock::cube(dim)],
        }
    }

    /// The pattern induced by a colored tree (always valid).
    pub fn of_tree(t: &ColoredTree, dim: usize) -> Self {
        debug_assert!(t.min_dim() <= dim);
        let mut blocks = t.blocks(dim);
        blocks.sort();
        Pattern { dim, blocks }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of blocks; a validated pattern is never empty.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[DyadicBlock] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &DyadicBlock {
        &self.blocks[i]
    }

    pub fn position_of(&self, b: &DyadicBlock) -> Option<usize> {
        self.blocks.binary_search(b).ok()
    }

    /// Deterministic tree inducing exactly this pattern: at each node the
    /// smallest coordinate whose midline crosses no block, lower half first.
    /// Also returns, in leaf order, the index of the block at each leaf.
    pub fn canonical_tree(&self) -> (ColoredTree, Vec<usize>) {
        let idx: Vec<usize> = (0..self.blocks.len()).collect();
        let mut leaves = Vec::with_capacity(self.blocks.len());
        let tree = decompose(&self.blocks, &DyadicBlock::cube(self.dim), &idx)
            .expect("validated pattern must decompose");
        collect_leaf_order(
            &tree,
            &self.blocks,
            &DyadicBlock::cube(self.dim),
            &mut leaves,
        );
        (tree, leaves)
    }

    /// Common refinement: all nonempty pairwise intersections, plus for each
    /// refined cell the indices of the blocks of `self` and `other` it came
    /// from.  Closed under the tree-generated invariant.
    pub fn common_refinement(&self, other: &Pattern) -> Result<(Pattern, Vec<(usize, usize)>)> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        let mut cells: Vec<(DyadicBlock, (usize, usize))> = Vec::new();
        for_each_overlap(&self.blocks, &other.blocks, |i, j, cell| {
            cells.push((cell, (i, j)));
        });
        cells.sort_by(|x, y| x.0.cmp(&y.0));
        let blocks: Vec<DyadicBlock> = cells.iter().map(|(c, _)| c.clone()).collect();
        let prov: Vec<(usize, usize)> = cells.iter().map(|(_, p)| *p).collect();
        let refined = Pattern::new(blocks)?;
        Ok((refined, prov))
    }
}

/// Visit every pair `(i, j)` with `a[i]` meeting `b_sorted[j]`, passing the
/// intersection block.  `b_sorted` must be in canonical (lexicographic)
/// order; candidates are narrowed by binary search on the coordinate-0
/// address, whose prefix-comparable blocks form one descendant range plus
/// one exact range per proper prefix.
pub(crate) fn for_each_overlap(
    a: &[DyadicBlock],
    b_sorted: &[DyadicBlock],
    mut visit: impl FnMut(usize, usize, DyadicBlock),
) {
    debug_assert!(b_sorted.windows(2).all(|w| w[0] <= w[1]));
    let below = |addr: &crate::address::DyadicAddress| -> usize {
        b_sorted.partition_point(|b| b.coord(0) < addr)
    };
    for (i, ab) in a.iter().enumerate() {
        let a0 = ab.coord(0);
        let try_range = |lo: usize, hi: usize, visit: &mut dyn FnMut(usize, usize, DyadicBlock)| {
            for j in lo..hi {
                if let Some(cell) = ab.intersection(&b_sorted[j]) {
                    visit(i, j, cell);
                }
            }
        };
        // strict ancestors: blocks whose coordinate-0 address is a proper
        // prefix of a0
        for k in 0..a0.len() {
            let p = crate::address::DyadicAddress::from_bits(a0.bits()[..k].to_vec());
            let lo = below(&p);
            let hi = lo + b_sorted[lo..].partition_point(|b| *b.coord(0) == p);
            try_range(lo, hi, &mut visit);
        }
        // a0 itself and its descendants
        let lo = below(a0);
        let hi = match a0.next_disjoint() {
            Some(next) => below(&next),
            None => b_sorted.len(),
        };
        try_range(lo, hi, &mut visit);
    }
}

/// The grid pattern of one coordinate tree per coordinate, together with
/// the composite colored tree and the cells in composite leaf order.
pub fn product_pattern(parts: &[CoordTree]) -> (Pattern, ColoredTree, Vec<DyadicBlock>) {
    let dim = parts.len();
    assert!(dim > 0);
    let composite = crate::tree::composite_tree(parts);
    let cells = composite.blocks(dim);
    let mut blocks = cells.clone();
    blocks.sort();
    (Pattern { dim, blocks }, composite, cells)
}

fn collect_leaf_order(
    t: &ColoredTree,
    blocks: &[DyadicBlock],
    here: &DyadicBlock,
    out: &mut Vec<usize>,
) {
    match t {
        ColoredTree::Leaf => {
            let i = blocks
                .binary_search(here)
                .expect("leaf block must be in pattern");
            out.push(i);
        }
        ColoredTree::Caret {
            color,
            lower,
            upper,
        } => {
            let d = *color;
            collect_leaf_order(
                lower,
                blocks,
                &here.with_coord(d, here.coord(d).child(false)),
                out,
            );
            collect_leaf_order(
                upper,
                blocks,
                &here.with_coord(d, here.coord(d).child(true)),
                out,
            );
        }
    }
}

/// Guillotine recursion over the block indices contained in `bx`.
fn decompose(blocks: &[DyadicBlock], bx: &DyadicBlock, idx: &[usize]) -> Result<ColoredTree> {
    let dim = bx.dim();
    match idx {
        [] => Err(Error::Gap(format!("nothing covers {bx}"))),
        [single] => {
            let b = &blocks[*single];
            if b == bx {
                Ok(ColoredTree::Leaf)
            } else {
                Err(Error::Gap(format!("{b} does not fill {bx}")))
            }
        }
        _ => {
            if let Some(full) = idx.iter().find(|&&i| &blocks[i] == bx) {
                return Err(Error::Overlap(format!(
                    "{} covers {bx} but other blocks remain inside",
                    blocks[*full]
                )));
            }
            for d in 0..dim {
                let k = bx.coord(d).len();
                // the midline of coordinate d crosses no block iff every
                // block's d-address is strictly longer than the box's
                if idx.iter().all(|&i| blocks[i].coord(d).len() > k) {
                    let (lo, hi): (Vec<usize>, Vec<usize>) =
                        idx.iter().partition(|&&i| !blocks[i].coord(d).bits()[k]);
                    let lower =
                        decompose(blocks, &bx.with_coord(d, bx.coord(d).child(false)), &lo)?;
                    let upper = decompose(blocks, &bx.with_coord(d, bx.coord(d).child(true)), &hi)?;
                    return Ok(ColoredTree::caret(d, lower, upper));
                }
            }
            stuck_diagnosis(blocks, bx, idx)
        }
    }
}

/// No crossing-free cut exists: report overlap or gap precisely when the
/// blocks are not even a partition, and `NotTreeGenerated` otherwise
/// (possible only in dimension >= 3).
fn stuck_diagnosis(blocks: &[DyadicBlock], bx: &DyadicBlock, idx: &[usize]) -> Result<ColoredTree> {
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            if blocks[i].intersects(&blocks[j]) {
                return Err(Error::Overlap(format!("{} and {}", blocks[i], blocks[j])));
            }
        }
    }
    let depth_cap = idx.iter().map(|&i| blocks[i].depth()).max().unwrap_or(0);
    let mut covered = BigUint::from(0u32);
    for &i in idx {
        covered += BigUint::from(1u32) << (depth_cap - blocks[i].depth());
    }
    let full = BigUint::from(1u32) << (depth_cap - bx.depth());
    if covered < full {
        return Err(Error::Gap(format!("blocks inside {bx} cover too little")));
    }
    Err(Error::NotTreeGenerated(bx.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blk(s: &str, dim: usize) -> DyadicBlock {
        DyadicBlock::parse(s, dim).unwrap()
    }

    #[test]
    fn single_block_is_valid() {
        let p = Pattern::new(vec![blk("_", 1)]).unwrap();
        assert_eq!(p.len(), 1);
        let (t, _) = p.canonical_tree();
        assert!(t.is_leaf());
    }

    #[test]
    fn first_cut_is_coordinate_one() {
        // {("_","0"), ("0","1"), ("1","1")}: coordinate 0 is blocked by the
        // full-width block, so the root caret must use coordinate 1
        let p = Pattern::new(vec![blk("_,0", 2), blk("0,1", 2), blk("1,1", 2)]).unwrap();
        let (t, _) = p.canonical_tree();
        match t {
            ColoredTree::Caret { color, .. } => assert_eq!(color, 1),
            _ => panic!("expected caret"),
        }
    }

    #[test]
    fn duplicate_block_is_overlap() {
        let err = Pattern::new(vec![blk("0,_", 2), blk("0,_", 2)]).unwrap_err();
        assert!(matches!(err, Error::Overlap(_)));
    }

    #[test]
    fn missing_block_is_gap() {
        let err = Pattern::new(vec![blk("0", 1)]).unwrap_err();
        assert!(matches!(err, Error::Gap(_)));
        let err = Pattern::new(vec![blk("0,0", 2), blk("1,_", 2)]).unwrap_err();
        assert!(matches!(err, Error::Gap(_)));
    }

    #[test]
    fn overlap_without_guillotine_cut() {
        // ("1","_") and ("_","1") intersect and no midline is crossing-free
        let err = Pattern::new(vec![blk("0,0", 2), blk("1,_", 2), blk("_,1", 2)]).unwrap_err();
        assert!(matches!(err, Error::Overlap(_)));
    }

    #[test]
    fn canonical_tree_of_product_grid() {
        let v = CoordTree::caret(CoordTree::Leaf, CoordTree::Leaf);
        let h = CoordTree::caret(CoordTree::Leaf, CoordTree::Leaf);
        let (p, composite, cells) = product_pattern(&[v, h]);
        assert_eq!(p.len(), 4);
        assert_eq!(cells.len(), 4);
        assert_eq!(composite.leaf_count(), 4);
        let (t, _) = p.canonical_tree();
        // prefers coordinate 0 at the root, coordinate 1 below
        match &t {
            ColoredTree::Caret { color, lower, .. } => {
                assert_eq!(*color, 0);
                match lower.as_ref() {
                    ColoredTree::Caret { color, .. } => assert_eq!(*color, 1),
                    _ => panic!(),
                }
            }
            _ => panic!(),
        }
        // round trip
        assert_eq!(Pattern::of_tree(&t, 2), p);
    }

    #[test]
    fn refinement_idempotent_and_overlay() {
        let p = Pattern::new(vec![blk("0", 1), blk("1", 1)]).unwrap();
        let (pp, _) = p.common_refinement(&p).unwrap();
        assert_eq!(pp, p);

        let q = Pattern::new(vec![blk("00", 1), blk("01", 1), blk("1", 1)]).unwrap();
        let (r, prov) = p.common_refinement(&q).unwrap();
        let names: Vec<String> = r.blocks().iter().map(|b| b.to_string()).collect();
        assert_eq!(names, ["00", "01", "1"]);
        assert_eq!(prov, [(0, 0), (0, 1), (1, 2)]);
    }

    #[test]
    fn refinement_of_crossing_splits() {
        let vert = Pattern::new(vec![blk("0,_", 2), blk("1,_", 2)]).unwrap();
        let horiz = Pattern::new(vec![blk("_,0", 2), blk("_,1", 2)]).unwrap();
        let (r, _) = vert.common_refinement(&horiz).unwrap();
        let names: Vec<String> = r.blocks().iter().map(|b| b.to_string()).collect();
        assert_eq!(names, ["0,0", "0,1", "1,0", "1,1"]);
    }
}
