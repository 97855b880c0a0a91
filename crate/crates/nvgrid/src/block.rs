//! Basic dyadic blocks: products of one dyadic interval per coordinate.

use std::fmt;

use crate::address::{DyadicAddress, DyadicFraction};
use crate::error::{Error, Result};

/// A basic dyadic block of `[0,1)^n`, one address per coordinate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DyadicBlock {
    coords: Vec<DyadicAddress>,
}

impl DyadicBlock {
    pub fn new(coords: Vec<DyadicAddress>) -> Self {
        assert!(!coords.is_empty(), "blocks need at least one coordinate");
        DyadicBlock { coords }
    }

    /// The whole cube in dimension `dim`.
    pub fn cube(dim: usize) -> Self {
        DyadicBlock::new(vec![DyadicAddress::root(); dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coord(&self, d: usize) -> &DyadicAddress {
        &self.coords[d]
    }

    pub fn coords(&self) -> &[DyadicAddress] {
        &self.coords
    }

    /// Replace coordinate `d`.
    pub fn with_coord(&self, d: usize, addr: DyadicAddress) -> Self {
        let mut coords = self.coords.clone();
        coords[d] = addr;
        DyadicBlock { coords }
    }

    /// Total address length; the block has measure `2^-depth`.
    pub fn depth(&self) -> usize {
        self.coords.iter().map(|a| a.len()).sum()
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.coords
            .iter()
            .zip(&other.coords)
            .all(|(a, b)| a.intersects(b))
    }

    /// The intersection block (coordinate-wise longer address), when nonempty.
    pub fn intersection(&self, other: &Self) -> Option<Self> {
        let mut coords = Vec::with_capacity(self.coords.len());
        for (a, b) in self.coords.iter().zip(&other.coords) {
            if a.is_prefix_of(b) {
                coords.push(b.clone());
            } else if b.is_prefix_of(a) {
                coords.push(a.clone());
            } else {
                return None;
            }
        }
        Some(DyadicBlock { coords })
    }

    pub fn contains_block(&self, other: &Self) -> bool {
        self.coords
            .iter()
            .zip(&other.coords)
            .all(|(a, b)| a.is_prefix_of(b))
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        self.coords
            .iter()
            .zip(p.coords())
            .all(|(a, x)| x.in_interval(a))
    }

    pub fn parse(s: &str, dim: usize) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != dim {
            return Err(Error::Parse(format!(
                "block {s:?} has {} coordinates, expected {dim}",
                parts.len()
            )));
        }
        let coords = parts
            .iter()
            .map(|p| DyadicAddress::parse(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(DyadicBlock { coords })
    }
}

impl fmt::Display for DyadicBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// An exact dyadic point of `[0,1)^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    coords: Vec<DyadicFraction>,
}

impl Point {
    pub fn new(coords: Vec<DyadicFraction>) -> Self {
        Point { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[DyadicFraction] {
        &self.coords
    }

    pub fn parse(s: &str) -> Result<Self> {
        let coords = s
            .split(',')
            .map(DyadicFraction::parse)
            .collect::<Result<Vec<_>>>()?;
        if coords.is_empty() {
            return Err(Error::Parse("empty point".into()));
        }
        Ok(Point { coords })
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_text_round_trip() {
        let b = DyadicBlock::parse("01,_", 2).unwrap();
        assert_eq!(b.to_string(), "01,_");
        assert_eq!(b.coord(0).len(), 2);
        assert!(b.coord(1).is_empty());
        assert!(DyadicBlock::parse("01", 2).is_err());
        assert!(DyadicBlock::parse("0x,_", 2).is_err());
    }

    #[test]
    fn block_intersection() {
        let a = DyadicBlock::parse("0,_", 2).unwrap();
        let b = DyadicBlock::parse("_,1", 2).unwrap();
        let c = a.intersection(&b).unwrap();
        assert_eq!(c.to_string(), "0,1");
        let d = DyadicBlock::parse("1,_", 2).unwrap();
        assert!(a.intersection(&d).is_none());
    }

    #[test]
    fn point_membership() {
        let b = DyadicBlock::parse("1,0", 2).unwrap();
        let p = Point::parse("1/2,1/4").unwrap();
        assert!(b.contains_point(&p));
        let q = Point::parse("1/2,1/2").unwrap();
        assert!(!b.contains_point(&q));
    }
}
