use crate::error::{Error, Result};
use crate::MAX_WIDTH;

/// An `L`-bit unsigned word. Bit 0 is the least significant bit, so the
/// integer interpretation of the word is just its stored value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    value: u16,
    width: u8,
}

pub(crate) fn check_width(width: u8) -> Result<()> {
    if width == 0 || width > MAX_WIDTH {
        return Err(Error::InvalidWidth(width));
    }
    Ok(())
}

/// All-ones mask for an `L`-bit word.
pub(crate) fn width_mask(width: u8) -> u16 {
    if width as u32 == u16::BITS {
        u16::MAX
    } else {
        (1u16 << width) - 1
    }
}

impl Word {
    pub fn new(value: u16, width: u8) -> Result<Self> {
        check_width(width)?;
        if value & !width_mask(width) != 0 {
            return Err(Error::ValueOutOfRange {
                value: value as u64,
                width,
            });
        }
        Ok(Word { value, width })
    }

    pub fn value(&self) -> u16 {
        self.value
    }

    pub fn width(&self) -> u8 {
        self.width
    }

    pub fn bit(&self, i: u8) -> bool {
        debug_assert!(i < self.width);
        (self.value >> i) & 1 == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_word_range() {
        assert!(Word::new(255, 8).is_ok());
        assert!(Word::new(256, 8).is_err());
        assert!(Word::new(0, 0).is_err());
        assert!(Word::new(0, 17).is_err());
        assert!(Word::new(u16::MAX, 16).is_ok());
    }

    #[test]
    fn test_bits() {
        let w = Word::new(0b0010_1010, 8).unwrap();
        assert!(w.bit(1) && w.bit(3) && w.bit(5));
        assert!(!w.bit(0) && !w.bit(7));
    }
}
