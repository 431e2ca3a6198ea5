//! Fixed-width bit strings backed by 64-bit limbs.
//!
//! Bit 0 is the least significant position. The textual form writes the
//! highest index first, so `"010"` has bit 1 set and bits 0 and 2 clear.

use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;
use thiserror::Error;

const LIMB_BITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitsError {
    #[error("empty bit string")]
    Empty,
    #[error("invalid character {ch:?} at column {column} (expected 0 or 1)")]
    InvalidChar { column: usize, ch: char },
}

/// A bit string of fixed width.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    width: usize,
    limbs: SmallVec<[u64; 1]>,
}

#[inline]
fn limb_count(width: usize) -> usize {
    width.div_ceil(LIMB_BITS)
}

impl BitString {
    pub fn zeros(width: usize) -> Self {
        BitString {
            width,
            limbs: SmallVec::from_elem(0, limb_count(width)),
        }
    }

    /// Builds a bit string from the low `width` bits of `value`.
    pub fn from_u64(width: usize, value: u64) -> Self {
        let mut bits = Self::zeros(width);
        if let Some(first) = bits.limbs.first_mut() {
            *first = value;
        }
        bits.clear_padding();
        bits
    }

    /// Builds a bit string with exactly the given indices set.
    ///
    /// Panics if an index is not below `width`.
    pub fn from_indices<I: IntoIterator<Item = usize>>(width: usize, indices: I) -> Self {
        let mut bits = Self::zeros(width);
        for i in indices {
            bits.set(i, true);
        }
        bits
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.width, "bit {index} out of range for width {}", self.width);
        (self.limbs[index / LIMB_BITS] >> (index % LIMB_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, index: usize, value: bool) {
        assert!(index < self.width, "bit {index} out of range for width {}", self.width);
        let mask = 1u64 << (index % LIMB_BITS);
        let limb = &mut self.limbs[index / LIMB_BITS];
        if value {
            *limb |= mask;
        } else {
            *limb &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, index: usize) {
        assert!(index < self.width, "bit {index} out of range for width {}", self.width);
        self.limbs[index / LIMB_BITS] ^= 1u64 << (index % LIMB_BITS);
    }

    /// True when every bit set in `mask` is also set in `self`.
    ///
    /// An all-zero mask is contained in every string.
    #[inline]
    pub fn contains_all(&self, mask: &BitString) -> bool {
        debug_assert_eq!(self.width, mask.width);
        self.limbs
            .iter()
            .zip(mask.limbs.iter())
            .all(|(word, m)| word & m == *m)
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitString) {
        debug_assert_eq!(self.width, other.width);
        for (a, b) in self.limbs.iter_mut().zip(other.limbs.iter()) {
            *a ^= b;
        }
    }

    #[inline]
    pub fn or_assign(&mut self, other: &BitString) {
        debug_assert_eq!(self.width, other.width);
        for (a, b) in self.limbs.iter_mut().zip(other.limbs.iter()) {
            *a |= b;
        }
    }

    pub fn and(&self, other: &BitString) -> BitString {
        debug_assert_eq!(self.width, other.width);
        let mut out = self.clone();
        for (a, b) in out.limbs.iter_mut().zip(other.limbs.iter()) {
            *a &= b;
        }
        out
    }

    pub fn count_ones(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.width).filter(move |&i| self.get(i))
    }

    /// Bits in index order `0..width`.
    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.width).map(move |i| self.get(i))
    }

    /// The value as an unsigned integer, if it fits in 64 bits.
    pub fn to_u64(&self) -> Option<u64> {
        if self.limbs.iter().skip(1).any(|&l| l != 0) {
            return None;
        }
        Some(self.limbs.first().copied().unwrap_or(0))
    }

    fn clear_padding(&mut self) {
        let rem = self.width % LIMB_BITS;
        if rem != 0 {
            if let Some(last) = self.limbs.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl FromStr for BitString {
    type Err = BitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(BitsError::Empty);
        }
        let chars: Vec<char> = s.chars().collect();
        let width = chars.len();
        let mut bits = BitString::zeros(width);
        for (column, &ch) in chars.iter().enumerate() {
            match ch {
                '0' => {}
                '1' => bits.set(width - 1 - column, true),
                _ => return Err(BitsError::InvalidChar { column: column + 1, ch }),
            }
        }
        Ok(bits)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (0..self.width).rev() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}
