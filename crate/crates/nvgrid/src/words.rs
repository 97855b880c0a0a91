//! Algebraic normal forms for 2V over the infinite generating set
//! {A_i, B_i, C_i, Pi_i, PiBar_i}.
//!
//! The interpreter is ground truth: every letter names a concrete block
//! map, words compose diagrammatically (leftmost letter acts first), and
//! each emission procedure is accepted only through the contract that its
//! output interprets back to the element it was emitted from.
//!
//! Letter semantics, with `s(k)` the all-right spine of `k` carets:
//!
//! - `A_i`: the classical triangular generator, source `s(i)` with a caret
//!   at leaf `i` carrying a caret on its lower child, target `s(i+2)`;
//!   the base map expands toward zero (`[0,1/4) -> [0,1/2)` for `A_0`).
//! - `B_i`: same shape but the innermost caret is square (coordinate 1).
//! - `C_i`: source `s(i)` with a square caret on its last leaf, target
//!   `s(i+1)`.
//! - `Pi_i` (`P`): transposes the last two leaves of `s(i+1)`.
//! - `PiBar_i` (`Q`): transposes leaves `i`, `i+1` of `s(i+2)`, fixing the
//!   tail; the conjugate transposition shape needed by permutation words.

use std::collections::BTreeMap;
use std::fmt;

use crate::address::DyadicAddress;
use crate::block::DyadicBlock;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::grid::{ReducedGridDiagram, Side};
use crate::pattern::Pattern;
use crate::tree::{composite_tree, ColoredTree, CoordTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A,
    B,
    C,
    P,
    Q,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::P => 'P',
            Family::Q => 'Q',
        }
    }
}

/// One letter with its exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Generator {
    pub family: Family,
    pub index: usize,
    pub exponent: i64,
}

impl Generator {
    pub fn new(family: Family, index: usize, exponent: i64) -> Self {
        Generator {
            family,
            index,
            exponent,
        }
    }

    pub fn parse(tok: &str) -> Result<Self> {
        let mut chars = tok.chars();
        let family = match chars.next() {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('P') => Family::P,
            Some('Q') => Family::Q,
            _ => return Err(Error::Parse(format!("bad generator token {tok:?}"))),
        };
        let rest: &str = chars.as_str();
        let (idx_str, exp_str) = match rest.split_once('^') {
            Some((i, e)) => (i, Some(e)),
            None => (rest, None),
        };
        let index: usize = idx_str
            .parse()
            .map_err(|_| Error::Parse(format!("bad index in {tok:?}")))?;
        let exponent: i64 = match exp_str {
            None => 1,
            Some(e) => e
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?,
        };
        Ok(Generator {
            family,
            index,
            exponent,
        })
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.index)?;
        if self.exponent != 1 {
            write!(f, "^{}", self.exponent)?;
        }
        Ok(())
    }
}

/// A normalized word: no zero exponents, adjacent equal letters merged.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Generator>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    /// Normalize: merge adjacent runs of the same letter, drop zero
    /// exponents, and cascade cancellations.
    pub fn from_letters<I: IntoIterator<Item = Generator>>(letters: I) -> Self {
        let mut out: Vec<Generator> = Vec::new();
        for g in letters {
            if g.exponent == 0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.family == g.family && last.index == g.index => {
                    last.exponent += g.exponent;
                    if last.exponent == 0 {
                        out.pop();
                    }
                }
                _ => out.push(g),
            }
        }
        Word { letters: out }
    }

    pub fn letters(&self) -> &[Generator] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Total letter count with multiplicity.
    pub fn len(&self) -> usize {
        self.letters
            .iter()
            .map(|g| g.exponent.unsigned_abs() as usize)
            .sum()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|g| Generator::new(g.family, g.index, -g.exponent))
                .collect(),
        }
    }

    pub fn concat<I: IntoIterator<Item = Word>>(words: I) -> Word {
        Word::from_letters(words.into_iter().flat_map(|w| w.letters))
    }

    pub fn parse(s: &str) -> Result<Self> {
        let letters = s
            .split_whitespace()
            .map(Generator::parse)
            .collect::<Result<Vec<_>>>()?;
        Ok(Word::from_letters(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Render a letter sequence that may contain zero exponents (the verbose
/// form, one letter per leaf).
pub fn render_verbose(letters: &[Generator]) -> String {
    letters
        .iter()
        .map(|g| {
            if g.exponent == 1 {
                format!("{}{}", g.family.letter(), g.index)
            } else {
                format!("{}{}^{}", g.family.letter(), g.index, g.exponent)
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Shift every index by `k` (the shift automorphism phi^k).
pub fn shift(w: &Word, k: i64) -> Result<Word> {
    let letters = w
        .letters
        .iter()
        .map(|g| {
            let idx = g.index as i64 + k;
            if idx < 0 {
                Err(Error::NegativeIndex {
                    letter: g.to_string(),
                    shift: k,
                })
            } else {
                Ok(Generator::new(g.family, idx as usize, g.exponent))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Word { letters })
}

/// Concrete block maps for the generators, with the two convention knobs.
///
/// `mirror_halves` flips which half a lower child denotes (default: lower
/// child = smaller-coordinate half).  `contracting_base` swaps source and
/// target of the A/B/C base maps (default: the base maps expand toward
/// zero, matching the leaf-exponent correspondence).  `interpret_qbar`
/// controls whether the `Q` family carries its default semantics or is
/// left uninterpreted.
#[derive(Debug, Clone, Copy)]
pub struct GeneratorTable {
    pub mirror_halves: bool,
    pub contracting_base: bool,
    pub interpret_qbar: bool,
}

impl Default for GeneratorTable {
    fn default() -> Self {
        GeneratorTable {
            mirror_halves: false,
            contracting_base: false,
            interpret_qbar: true,
        }
    }
}

fn spine_addr(t: usize, k: usize) -> DyadicAddress {
    // leaf t of the all-right spine with k carets
    let mut bits = vec![true; t.min(k)];
    if t < k {
        bits.push(false);
    }
    DyadicAddress::from_bits(bits)
}

fn strip(t: usize, k: usize) -> DyadicBlock {
    DyadicBlock::new(vec![spine_addr(t, k), DyadicAddress::root()])
}

impl GeneratorTable {
    /// The element of a single letter with exponent +-1 applied later.
    fn base_element(&self, family: Family, i: usize) -> Result<Element> {
        let pairs: Vec<(DyadicBlock, DyadicBlock)> = match family {
            Family::A => {
                let mut src: Vec<DyadicBlock> = (0..i).map(|t| strip(t, i)).collect();
                let leaf = spine_addr(i, i);
                src.push(DyadicBlock::new(vec![
                    leaf.child(false).child(false),
                    DyadicAddress::root(),
                ]));
                src.push(DyadicBlock::new(vec![
                    leaf.child(false).child(true),
                    DyadicAddress::root(),
                ]));
                src.push(DyadicBlock::new(vec![
                    leaf.child(true),
                    DyadicAddress::root(),
                ]));
                let tgt: Vec<DyadicBlock> = (0..=i + 2).map(|t| strip(t, i + 2)).collect();
                src.into_iter().zip(tgt).collect()
            }
            Family::B => {
                let mut src: Vec<DyadicBlock> = (0..i).map(|t| strip(t, i)).collect();
                let leaf = spine_addr(i, i);
                src.push(DyadicBlock::new(vec![
                    leaf.child(false),
                    DyadicAddress::root().child(false),
                ]));
                src.push(DyadicBlock::new(vec![
                    leaf.child(false),
                    DyadicAddress::root().child(true),
                ]));
                src.push(DyadicBlock::new(vec![
                    leaf.child(true),
                    DyadicAddress::root(),
                ]));
                let tgt: Vec<DyadicBlock> = (0..=i + 2).map(|t| strip(t, i + 2)).collect();
                src.into_iter().zip(tgt).collect()
            }
            Family::C => {
                let mut src: Vec<DyadicBlock> = (0..i).map(|t| strip(t, i)).collect();
                let leaf = spine_addr(i, i);
                src.push(DyadicBlock::new(vec![
                    leaf.clone(),
                    DyadicAddress::root().child(false),
                ]));
                src.push(DyadicBlock::new(vec![
                    leaf,
                    DyadicAddress::root().child(true),
                ]));
                let tgt: Vec<DyadicBlock> = (0..=i + 1).map(|t| strip(t, i + 1)).collect();
                src.into_iter().zip(tgt).collect()
            }
            Family::P => {
                // transpose the last two leaves of the spine with i+1 carets
                let k = i + 1;
                (0..=k)
                    .map(|t| {
                        let u = if t == k - 1 {
                            k
                        } else if t == k {
                            k - 1
                        } else {
                            t
                        };
                        (strip(t, k), strip(u, k))
                    })
                    .collect()
            }
            Family::Q => {
                if !self.interpret_qbar {
                    return Err(Error::UnsupportedFamily("Q".into()));
                }
                // transpose leaves i, i+1 of the spine with i+2 carets
                let k = i + 2;
                (0..=k)
                    .map(|t| {
                        let u = if t == i {
                            i + 1
                        } else if t == i + 1 {
                            i
                        } else {
                            t
                        };
                        (strip(t, k), strip(u, k))
                    })
                    .collect()
            }
        };
        let pairs = if self.mirror_halves {
            pairs
                .into_iter()
                .map(|(s, t)| (mirror_block(&s), mirror_block(&t)))
                .collect()
        } else {
            pairs
        };
        let pairs = if self.contracting_base && matches!(family, Family::A | Family::B | Family::C)
        {
            pairs.into_iter().map(|(s, t)| (t, s)).collect()
        } else {
            pairs
        };
        Element::new(pairs)
    }

    /// The element of one letter, exponent included.
    pub fn element(&self, g: &Generator) -> Result<Element> {
        let base = self.base_element(g.family, g.index)?;
        let step = if g.exponent < 0 { base.invert() } else { base };
        let mut acc = Element::identity(2);
        for _ in 0..g.exponent.unsigned_abs() {
            acc = acc.compose(&step)?;
        }
        Ok(acc)
    }

    /// Left-to-right diagrammatic interpretation; the empty word is the
    /// identity.
    pub fn interpret(&self, w: &Word) -> Result<Element> {
        let mut acc = Element::identity(2);
        for g in w.letters() {
            acc = acc.compose(&self.element(g)?)?;
        }
        Ok(acc)
    }
}

fn mirror_block(b: &DyadicBlock) -> DyadicBlock {
    DyadicBlock::new(
        b.coords()
            .iter()
            .map(|a| DyadicAddress::from_bits(a.bits().iter().map(|&x| !x).collect()))
            .collect(),
    )
}

/// The element of one letter under the default conventions.
pub fn generator_element(g: &Generator) -> Result<Element> {
    GeneratorTable::default().element(g)
}

/// Interpret a word under the default conventions.
pub fn interpret(w: &Word) -> Result<Element> {
    GeneratorTable::default().interpret(w)
}

/// Leaf exponents: for each leaf, the number of color-`color` carets on
/// the maximal chain of lower-child-to-parent steps starting at the leaf,
/// stopping at the right arm.
pub fn leaf_exponents(t: &ColoredTree, color: usize) -> Vec<u64> {
    fn walk(
        node: &ColoredTree,
        on_arm: bool,
        stack: &mut Vec<(usize, bool, bool)>, // (caret color, caret on arm, entered via lower)
        color: usize,
        out: &mut Vec<u64>,
    ) {
        match node {
            ColoredTree::Leaf => {
                let mut n = 0u64;
                for &(c, arm, via_lower) in stack.iter().rev() {
                    if !via_lower || arm {
                        break;
                    }
                    if c == color {
                        n += 1;
                    }
                }
                out.push(n);
            }
            ColoredTree::Caret {
                color: c,
                lower,
                upper,
            } => {
                stack.push((*c, on_arm, true));
                walk(lower, false, stack, color, out);
                stack.pop();
                stack.push((*c, on_arm, false));
                walk(upper, on_arm, stack, color, out);
                stack.pop();
            }
        }
    }
    let mut out = Vec::with_capacity(t.leaf_count());
    let mut stack = Vec::new();
    walk(t, true, &mut stack, color, &mut out);
    out
}

/// The positive word of a source grid, zero exponents included: the
/// C-prefix creating the square spine carets, then per leaf of the
/// vertical tree an A letter and the shifted copy of the horizontal word.
pub fn emit_positive_verbose(parts: &[CoordTree]) -> Result<Vec<Generator>> {
    if parts.len() != 2 {
        return Err(Error::DimUnsupported(parts.len()));
    }
    let tv = &parts[0];
    let th = &parts[1];
    let composite = composite_tree(parts);
    let ea = leaf_exponents(&composite, 0);
    let eb = leaf_exponents(&composite, 1);
    let copies = tv.leaf_count();
    let copy_len = th.leaf_count();
    let s = tv.spine_len();
    let r = th.spine_len();

    let mut letters = Vec::new();
    for t in 0..r {
        letters.push(Generator::new(Family::C, s + t, 1));
    }
    for j in 0..copies {
        let base = copy_len * j;
        letters.push(Generator::new(Family::A, base, ea[base] as i64));
        if copy_len > 1 {
            for p in 0..copy_len {
                letters.push(Generator::new(Family::B, base + p, eb[base + p] as i64));
            }
        }
    }
    Ok(letters)
}

/// Positive word of a source-gridded reduced diagram (normalized).
pub fn emit_positive(rgd: &ReducedGridDiagram) -> Result<Word> {
    assert_eq!(rgd.grid().side(), Side::Source, "emit from a source grid");
    if rgd.grid().dim() != 2 {
        return Err(Error::DimUnsupported(rgd.grid().dim()));
    }
    Ok(Word::from_letters(emit_positive_verbose(
        rgd.grid().coord_trees(),
    )?))
}

/// Exposed carets of a colored tree: (left leaf index, color, on right arm).
fn exposed_colored(t: &ColoredTree) -> Vec<(usize, usize, bool)> {
    fn walk(
        t: &ColoredTree,
        on_arm: bool,
        next_leaf: &mut usize,
        out: &mut Vec<(usize, usize, bool)>,
    ) {
        match t {
            ColoredTree::Leaf => *next_leaf += 1,
            ColoredTree::Caret {
                color,
                lower,
                upper,
            } => {
                if lower.is_leaf() && upper.is_leaf() {
                    out.push((*next_leaf, *color, on_arm));
                    *next_leaf += 2;
                } else {
                    walk(lower, false, next_leaf, out);
                    walk(upper, on_arm, next_leaf, out);
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut next = 0;
    walk(t, true, &mut next, &mut out);
    out
}

fn remove_colored_caret(t: &ColoredTree, j: usize) -> ColoredTree {
    match t {
        ColoredTree::Leaf => unreachable!("no caret at a leaf"),
        ColoredTree::Caret {
            color,
            lower,
            upper,
        } => {
            if lower.is_leaf() && upper.is_leaf() {
                debug_assert_eq!(j, 0);
                return ColoredTree::Leaf;
            }
            let ln = lower.leaf_count();
            if j + 1 < ln {
                ColoredTree::caret(*color, remove_colored_caret(lower, j), (**upper).clone())
            } else {
                debug_assert!(j >= ln);
                ColoredTree::caret(
                    *color,
                    (**lower).clone(),
                    remove_colored_caret(upper, j - ln),
                )
            }
        }
    }
}

/// The positive word of an arbitrary dim-2 colored tree, read off by
/// un-building it: while an off-spine exposed caret exists remove the one
/// with the largest leaf index (emitting `A_i` or `B_i` by color); only
/// then remove the bottom spine caret (emitting `C_{m-2}` when square,
/// nothing when triangular).  Letters are output in reverse removal order.
pub fn emit_tree_word(t: &ColoredTree) -> Result<Word> {
    if t.min_dim() > 2 {
        return Err(Error::DimUnsupported(t.min_dim()));
    }
    let mut t = t.clone();
    let mut rev = Vec::new();
    while !t.is_leaf() {
        let exposed = exposed_colored(&t);
        let m = t.leaf_count();
        if let Some(&(j, color, _)) = exposed.iter().filter(|e| !e.2).max_by_key(|e| e.0) {
            let family = if color == 0 { Family::A } else { Family::B };
            rev.push(Generator::new(family, j, 1));
            t = remove_colored_caret(&t, j);
        } else {
            let &(j, color, _) = exposed
                .iter()
                .find(|e| e.2)
                .expect("tree has an exposed caret");
            debug_assert_eq!(j, m - 2);
            if color == 1 {
                rev.push(Generator::new(Family::C, m - 2, 1));
            }
            t = remove_colored_caret(&t, j);
        }
    }
    rev.reverse();
    Ok(Word::from_letters(rev))
}

/// A word realizing the permutation on the cells of the all-right pattern:
/// bubble-sort decomposition into adjacent transpositions, `P_j` for the
/// final (equal-size) pair and `Q_j` otherwise.  Length = inversion count.
pub fn perm_word(perm: &[usize]) -> Word {
    let m = perm.len();
    debug_assert!({
        let mut seen = vec![false; m];
        perm.iter()
            .all(|&p| p < m && !std::mem::replace(&mut seen[p], true))
    });
    let mut arr = perm.to_vec();
    let mut letters = Vec::new();
    loop {
        let Some(j) = (0..m.saturating_sub(1)).find(|&j| arr[j] > arr[j + 1]) else {
            break;
        };
        arr.swap(j, j + 1);
        let family = if j + 2 == m { Family::P } else { Family::Q };
        letters.push(Generator::new(family, j, 1));
    }
    Word::from_letters(letters)
}

/// The three factors of the canonical word of a dim-2 element: the
/// verbose positive letters of the reduced source grid, the permutation
/// word aligning cell order to the target tree's leaf order, and the
/// (positive) word of the canonical target tree.
pub fn normal_form_parts(f: &Element) -> Result<(Vec<Generator>, Word, Word)> {
    if f.dim() != 2 {
        return Err(Error::DimUnsupported(f.dim()));
    }
    let rgd = crate::grid::canon(f);
    let positive = emit_positive_verbose(rgd.grid().coord_trees())?;
    let images = rgd.grid().images();
    let target = Pattern::new(images.to_vec())?;
    let (target_tree, leaf_blocks) = target.canonical_tree();
    let mut leaf_pos = vec![0usize; leaf_blocks.len()];
    for (pos, &block_idx) in leaf_blocks.iter().enumerate() {
        leaf_pos[block_idx] = pos;
    }
    let sigma: Vec<usize> = images
        .iter()
        .map(|img| leaf_pos[target.position_of(img).expect("image is a target block")])
        .collect();
    let middle = perm_word(&sigma);
    let negative = emit_tree_word(&target_tree)?;
    Ok((positive, middle, negative))
}

/// The canonical word P Pi N^-1 of a dim-2 element (normalized).
pub fn normal_form(f: &Element) -> Result<Word> {
    let (positive, middle, negative) = normal_form_parts(f)?;
    Ok(Word::concat([
        Word::from_letters(positive),
        middle,
        negative.inverse(),
    ]))
}

/// Brin's finite generating set for 2V.
pub fn in_sigma(family: Family, index: usize) -> bool {
    match family {
        Family::A | Family::B | Family::P | Family::Q => index <= 1,
        Family::C => false,
    }
}

/// Verified rewrite rules toward the finite generating set.
#[derive(Debug, Clone)]
pub struct RuleTable {
    rules: BTreeMap<(Family, usize), Word>,
}

impl RuleTable {
    /// The default rules `X_{i+1} := A0^-1 X_i A0` for `X` in {A, B, P}
    /// and `i >= 1`, up to `max_index`.  Every rule is verified against
    /// the interpreter before the table is returned.
    pub fn with_default_rules(max_index: usize) -> Result<Self> {
        let mut rules = BTreeMap::new();
        for family in [Family::A, Family::B, Family::P] {
            for i in 2..=max_index {
                let rhs = Word::from_letters([
                    Generator::new(Family::A, 0, -1),
                    Generator::new(family, i - 1, 1),
                    Generator::new(Family::A, 0, 1),
                ]);
                rules.insert((family, i), rhs);
            }
        }
        let table = RuleTable { rules };
        table.verify()?;
        Ok(table)
    }

    /// Parse `LHS := RHS` lines in word syntax; the left side must be a
    /// single letter with exponent 1.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rules = BTreeMap::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (lhs, rhs) = line
                .split_once(":=")
                .ok_or_else(|| Error::Parse(format!("rule line without ':=': {line:?}")))?;
            let lhs = Generator::parse(lhs.trim())?;
            if lhs.exponent != 1 {
                return Err(Error::Parse(format!(
                    "rule left side must be a bare letter: {line:?}"
                )));
            }
            let rhs = Word::parse(rhs.trim())?;
            rules.insert((lhs.family, lhs.index), rhs);
        }
        let table = RuleTable { rules };
        table.verify()?;
        Ok(table)
    }

    pub fn rules(&self) -> impl Iterator<Item = (&(Family, usize), &Word)> {
        self.rules.iter()
    }

    /// Check every rule is an identity under the interpreter.
    pub fn verify(&self) -> Result<()> {
        for ((family, index), rhs) in &self.rules {
            let lhs = Generator::new(*family, *index, 1);
            let left = interpret(&Word::from_letters([lhs]))?;
            let right = interpret(rhs)?;
            if !left.equals(&right) {
                return Err(Error::RuleVerificationFailed {
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                });
            }
        }
        Ok(())
    }

    /// Rewrite every letter into the finite generating set.
    pub fn rewrite(&self, w: &Word) -> Result<Word> {
        let mut out: Vec<Generator> = Vec::new();
        for &g in w.letters() {
            self.expand(g, 0, &mut out)?;
        }
        Ok(Word::from_letters(out))
    }

    fn expand(&self, g: Generator, depth: usize, out: &mut Vec<Generator>) -> Result<()> {
        if g.exponent == 0 {
            return Ok(());
        }
        if in_sigma(g.family, g.index) {
            out.push(g);
            return Ok(());
        }
        if depth > 512 {
            return Err(Error::Parse("rule table does not terminate".into()));
        }
        let rhs = self
            .rules
            .get(&(g.family, g.index))
            .ok_or_else(|| {
                Error::NoRuleConfigured(Generator::new(g.family, g.index, 1).to_string())
            })?
            .clone();
        let step = if g.exponent < 0 { rhs.inverse() } else { rhs };
        for _ in 0..g.exponent.unsigned_abs() {
            for &h in step.letters() {
                self.expand(h, depth + 1, out)?;
            }
        }
        Ok(())
    }
}
