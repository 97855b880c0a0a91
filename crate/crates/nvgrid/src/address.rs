//! Dyadic addresses: finite bit strings naming basic dyadic intervals.
//!
//! An address of length `k` with bits read as the binary integer `i` names
//! the half-open interval `[i/2^k, (i+1)/2^k)`.  The empty address names
//! `[0, 1)`.  Appending `0` keeps the lower half, appending `1` the upper
//! half, so nesting of intervals is exactly the prefix relation on bit
//! strings and no rational arithmetic is ever needed.

use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Address of a basic dyadic interval inside `[0, 1)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DyadicAddress {
    bits: Vec<bool>,
}

impl DyadicAddress {
    /// The whole interval `[0, 1)`.
    pub fn root() -> Self {
        DyadicAddress { bits: Vec::new() }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        DyadicAddress { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// The address of the lower (`bit = false`) or upper half.
    pub fn child(&self, bit: bool) -> Self {
        let mut bits = self.bits.clone();
        bits.push(bit);
        DyadicAddress { bits }
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn parent(&self) -> Option<Self> {
        if self.bits.is_empty() {
            return None;
        }
        let mut bits = self.bits.clone();
        bits.pop();
        Some(DyadicAddress { bits })
    }

    pub fn last_bit(&self) -> Option<bool> {
        self.bits.last().copied()
    }

    pub fn is_prefix_of(&self, other: &Self) -> bool {
        other.bits.len() >= self.bits.len() && other.bits[..self.bits.len()] == self.bits[..]
    }

    /// Two addresses name intersecting intervals iff one is a prefix of the
    /// other; the intersection is then the longer of the two.
    pub fn intersects(&self, other: &Self) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// The suffix of `self` past the prefix `prefix`, or `None` when
    /// `prefix` is not a prefix of `self`.
    pub fn strip_prefix(&self, prefix: &Self) -> Option<&[bool]> {
        if prefix.is_prefix_of(self) {
            Some(&self.bits[prefix.len()..])
        } else {
            None
        }
    }

    pub fn extend(&self, suffix: &[bool]) -> Self {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(suffix);
        DyadicAddress { bits }
    }

    /// Lower endpoint as the exact pair `(numerator, k)` meaning `num / 2^k`.
    pub fn lo(&self) -> (BigUint, u32) {
        let mut num = BigUint::from(0u32);
        for &b in &self.bits {
            num <<= 1u32;
            if b {
                num += 1u32;
            }
        }
        (num, self.bits.len() as u32)
    }

    /// Interval length as `(1, k)` meaning `1 / 2^k`.
    pub fn length(&self) -> (BigUint, u32) {
        (BigUint::from(1u32), self.bits.len() as u32)
    }

    /// Lower endpoint as a canonical-trimmed binary fraction, e.g. the
    /// address `10` has `lo` bits `1` (the point 1/2).
    pub fn lo_fraction(&self) -> DyadicFraction {
        DyadicFraction::from_bits(self.bits.clone())
    }

    /// Upper endpoint as a binary fraction, or `None` when it equals 1.
    pub fn hi_fraction(&self) -> Option<DyadicFraction> {
        self.next_disjoint()
            .map(|a| DyadicFraction::from_bits(a.bits))
    }

    /// The smallest address lexicographically above every extension of
    /// `self`, or `None` when `self` is all ones.  Extensions of `self`
    /// are exactly the addresses in the half-open lexicographic range
    /// `[self, next_disjoint)`.
    pub fn next_disjoint(&self) -> Option<DyadicAddress> {
        let mut bits = self.bits.clone();
        loop {
            match bits.pop() {
                None => return None, // all ones
                Some(false) => {
                    bits.push(true);
                    return Some(DyadicAddress { bits });
                }
                Some(true) => continue,
            }
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        if s == "_" {
            return Ok(Self::root());
        }
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => {
                    return Err(Error::Parse(format!(
                        "bad address character {c:?} in {s:?}"
                    )))
                }
            }
        }
        Ok(DyadicAddress { bits })
    }
}

impl fmt::Display for DyadicAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            return write!(f, "_");
        }
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// A dyadic point of `[0, 1)` as its finite binary expansion, trailing
/// zeros trimmed (so `0` is the empty string and `1/2` is `1`).
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DyadicFraction {
    bits: Vec<bool>,
}

impl DyadicFraction {
    pub fn zero() -> Self {
        DyadicFraction { bits: Vec::new() }
    }

    pub fn from_bits(mut bits: Vec<bool>) -> Self {
        while bits.last() == Some(&false) {
            bits.pop();
        }
        DyadicFraction { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// True when this point lies inside the interval named by `addr`,
    /// i.e. `addr` is a prefix of the zero-padded expansion.
    pub fn in_interval(&self, addr: &DyadicAddress) -> bool {
        addr.bits()
            .iter()
            .enumerate()
            .all(|(i, &b)| self.bits.get(i).copied().unwrap_or(false) == b)
    }

    /// The expansion bits past the first `k`, zero-padding as needed.
    pub fn tail(&self, k: usize) -> Vec<bool> {
        if k >= self.bits.len() {
            Vec::new()
        } else {
            self.bits[k..].to_vec()
        }
    }

    /// Exact value as `(numerator, k)` meaning `num / 2^k` with `num` odd
    /// or the pair `(0, 0)`.
    pub fn to_fraction(&self) -> (BigUint, u32) {
        let mut num = BigUint::from(0u32);
        for &b in &self.bits {
            num <<= 1u32;
            if b {
                num += 1u32;
            }
        }
        (num, self.bits.len() as u32)
    }

    /// Parse `p/q` with `q` a power of two, or an integer `0`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: BigUint = p
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
            let q: BigUint = q
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
            let k = q.trailing_zeros().unwrap_or(0);
            if q != BigUint::from(1u32) << k {
                return Err(Error::Parse(format!(
                    "denominator of {s:?} is not a power of two"
                )));
            }
            if p >= q {
                return Err(Error::Parse(format!("{s:?} is not inside [0, 1)")));
            }
            let mut bits = Vec::with_capacity(k as usize);
            for i in (0..k).rev() {
                bits.push(p.bit(i as u64));
            }
            Ok(DyadicFraction::from_bits(bits))
        } else {
            match s {
                "0" => Ok(DyadicFraction::zero()),
                _ => Err(Error::Parse(format!(
                    "bad dyadic point {s:?} (want p/2^k or 0)"
                ))),
            }
        }
    }
}

impl fmt::Display for DyadicFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, k) = self.to_fraction();
        if k == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", num, BigUint::from(1u32) << k)
        }
    }
}
