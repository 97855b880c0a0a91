//! Text formats: pattern files, element files (.nve) and word files (.nvw).
//!
//! Element files: a `dim <n>` line, then one `<srcblock> -> <tgtblock>`
//! line per cell in canonical source order.  Lines starting with `#` are
//! comments.  Block syntax joins per-coordinate addresses with `,`, the
//! empty address written `_`.  All output is LF-terminated UTF-8 and
//! bit-stable across runs.

use crate::block::DyadicBlock;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::words::Word;

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn parse_dim_header(line: Option<&str>) -> Result<usize> {
    let line = line.ok_or_else(|| Error::Parse("empty input".into()))?;
    let rest = line
        .strip_prefix("dim")
        .ok_or_else(|| Error::Parse(format!("expected 'dim <n>', got {line:?}")))?;
    rest.trim()
        .parse::<usize>()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::Parse(format!("bad dimension in {line:?}")))
}

pub fn parse_pattern(text: &str) -> Result<Pattern> {
    let mut lines = content_lines(text);
    let dim = parse_dim_header(lines.next())?;
    let blocks = lines
        .map(|l| DyadicBlock::parse(l, dim))
        .collect::<Result<Vec<_>>>()?;
    Pattern::new(blocks)
}

pub fn render_pattern(p: &Pattern) -> String {
    let mut out = format!("dim {}\n", p.dim());
    for b in p.blocks() {
        out.push_str(&format!("{b}\n"));
    }
    out
}

pub fn parse_element(text: &str) -> Result<Element> {
    let mut lines = content_lines(text);
    let dim = parse_dim_header(lines.next())?;
    let mut pairs = Vec::new();
    for line in lines {
        let (src, tgt) = line
            .split_once("->")
            .ok_or_else(|| Error::Parse(format!("expected '<src> -> <tgt>', got {line:?}")))?;
        pairs.push((
            DyadicBlock::parse(src.trim(), dim)?,
            DyadicBlock::parse(tgt.trim(), dim)?,
        ));
    }
    Element::new(pairs)
}

/// Canonical element text, with optional `#` header comment lines.
pub fn render_element(f: &Element, header: &[String]) -> String {
    let mut out = String::new();
    for h in header {
        out.push_str(&format!("# {h}\n"));
    }
    out.push_str(&format!("dim {}\n", f.dim()));
    for (s, t) in f.pairs() {
        out.push_str(&format!("{s} -> {t}\n"));
    }
    out
}

pub fn parse_word(text: &str) -> Result<Word> {
    let body: String = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join(" ");
    Word::parse(&body)
}

pub fn render_word(w: &Word) -> String {
    format!("{w}\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_file_round_trip() {
        let text = "# a comment\ndim 2\n_,0 -> 0,_\n_,1 -> 1,_\n";
        let f = parse_element(text).unwrap();
        assert_eq!(f.dim(), 2);
        assert_eq!(f.len(), 2);
        let out = render_element(&f, &[]);
        assert_eq!(out, "dim 2\n_,0 -> 0,_\n_,1 -> 1,_\n");
        assert_eq!(
            render_element(&f, &["leaves 1 2 M 1".into()]),
            "# leaves 1 2 M 1\ndim 2\n_,0 -> 0,_\n_,1 -> 1,_\n"
        );
    }

    #[test]
    fn element_file_canonicalizes_order() {
        let shuffled = "dim 2\n_,1 -> 1,_\n_,0 -> 0,_\n";
        let f = parse_element(shuffled).unwrap();
        assert_eq!(render_element(&f, &[]), "dim 2\n_,0 -> 0,_\n_,1 -> 1,_\n");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_element(""), Err(Error::Parse(_))));
        assert!(matches!(parse_element("dim 0\n"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_element("dim 2\n_,0 0,_\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_element("dim 2\n_,0 -> 0,_\n"),
            Err(Error::Gap(_))
        ));
    }

    #[test]
    fn pattern_and_word_files() {
        let p = parse_pattern("dim 1\n0\n1\n").unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(render_pattern(&p), "dim 1\n0\n1\n");
        let w = parse_word("# word\nA0 B3^2\nP0^-1\n").unwrap();
        assert_eq!(render_word(&w), "A0 B3^2 P0^-1\n");
    }
}
