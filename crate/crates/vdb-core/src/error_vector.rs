use crate::error::{Error, Result};
use crate::word::{check_width, width_mask, Word};

/// A per-bit error pattern over an `L`-bit word: each position carries -1
/// (a one flipped to zero), +1 (a zero flipped to one), or 0 (no error).
/// Stored as two disjoint bit masks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ErrorVector {
    pos: u16,
    neg: u16,
    width: u8,
}

impl ErrorVector {
    pub fn new(pos: u16, neg: u16, width: u8) -> Result<Self> {
        check_width(width)?;
        let mask = width_mask(width);
        if pos & !mask != 0 {
            return Err(Error::ValueOutOfRange {
                value: pos as u64,
                width,
            });
        }
        if neg & !mask != 0 {
            return Err(Error::ValueOutOfRange {
                value: neg as u64,
                width,
            });
        }
        if pos & neg != 0 {
            return Err(Error::OverlappingSupport { mask: pos & neg });
        }
        Ok(ErrorVector { pos, neg, width })
    }

    pub fn zero(width: u8) -> Result<Self> {
        Self::new(0, 0, width)
    }

    /// The vector that is `sign` at `bit` and 0 elsewhere.
    pub fn single(width: u8, bit: u8, sign: i8) -> Result<Self> {
        if bit >= width {
            return Err(Error::InvalidArgument(format!(
                "bit {bit} outside width {width}"
            )));
        }
        match sign {
            1 => Self::new(1 << bit, 0, width),
            -1 => Self::new(0, 1 << bit, width),
            0 => Self::zero(width),
            _ => Err(Error::InvalidArgument(format!("entry {sign} not in -1..=1"))),
        }
    }

    pub fn width(&self) -> u8 {
        self.width
    }

    pub fn positive_mask(&self) -> u16 {
        self.pos
    }

    pub fn negative_mask(&self) -> u16 {
        self.neg
    }

    /// Bits carrying a nonzero entry.
    pub fn support_mask(&self) -> u16 {
        self.pos | self.neg
    }

    /// The entry at bit `i`: -1, 0, or +1.
    pub fn entry(&self, i: u8) -> i8 {
        debug_assert!(i < self.width);
        if (self.pos >> i) & 1 == 1 {
            1
        } else if (self.neg >> i) & 1 == 1 {
            -1
        } else {
            0
        }
    }

    /// Signed integer distortion sum(entry(i) * 2^i). Adding it to the
    /// transmitted value gives the received value.
    pub fn signed_distortion(&self) -> i32 {
        self.pos as i32 - self.neg as i32
    }

    pub fn magnitude(&self) -> u32 {
        self.signed_distortion().unsigned_abs()
    }

    /// Entrywise sum with another pattern of the same width. Defined only
    /// when supports are disjoint, otherwise an entry would leave -1..=1.
    pub fn combine(&self, other: &ErrorVector) -> Result<ErrorVector> {
        if self.width != other.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                actual: other.width,
            });
        }
        let overlap = self.support_mask() & other.support_mask();
        if overlap != 0 {
            return Err(Error::OverlappingSupport { mask: overlap });
        }
        ErrorVector::new(self.pos | other.pos, self.neg | other.neg, self.width)
    }

    /// Words this pattern can act on: bit i must be 1 where the entry is -1
    /// and 0 where it is +1. Yields words in ascending value order.
    pub fn compatible_words(&self) -> CompatibleWords {
        CompatibleWords {
            base: self.neg,
            free: !self.support_mask() & width_mask(self.width),
            width: self.width,
            subset: 0,
            done: false,
        }
    }
}

pub struct CompatibleWords {
    base: u16,
    free: u16,
    width: u8,
    subset: u16,
    done: bool,
}

impl Iterator for CompatibleWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        let word = Word::new(self.base | self.subset, self.width).expect("in range");
        // Standard sub-mask enumeration; visits subsets of `free` in
        // ascending numeric order and wraps back to 0.
        self.subset = self.subset.wrapping_sub(self.free) & self.free;
        if self.subset == 0 {
            self.done = true;
        }
        Some(word)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let total = 1usize << self.free.count_ones();
        (total, Some(total))
    }
}
