use crate::error::{Error, Result};
use crate::error_vector::ErrorVector;
use crate::word::check_width;

/// Widths above this are not materialized as explicit vector sets; the
/// counts-only form still works up to [`crate::MAX_WIDTH`].
pub const MATERIALIZATION_LIMIT: u8 = 12;

/// A set-valued map from signed distortion `n` to the error vectors whose
/// signed distortion is `n`, over the fixed domain `-(2^L - 1) ..= 2^L - 1`.
#[derive(Debug, Clone)]
pub struct ErrorSets {
    width: u8,
    sets: Vec<Vec<ErrorVector>>,
}

impl ErrorSets {
    pub fn empty(width: u8) -> Result<Self> {
        check_width(width)?;
        let span = 2 * ((1usize << width) - 1) + 1;
        Ok(ErrorSets {
            width,
            sets: vec![Vec::new(); span],
        })
    }

    /// The map holding only the three single-bit patterns for `bit`:
    /// -1 at -2^bit, the zero vector at 0, +1 at +2^bit.
    pub fn unit_bit(width: u8, bit: u8) -> Result<Self> {
        let mut sets = Self::empty(width)?;
        sets.push(ErrorVector::single(width, bit, -1)?);
        sets.push(ErrorVector::zero(width)?);
        sets.push(ErrorVector::single(width, bit, 1)?);
        Ok(sets)
    }

    fn push(&mut self, v: ErrorVector) {
        let idx = self.index(v.signed_distortion());
        self.sets[idx].push(v);
    }

    fn index(&self, n: i32) -> usize {
        let offset = (1i32 << self.width) - 1;
        let idx = n + offset;
        assert!(idx >= 0 && (idx as usize) < self.sets.len(), "distortion {n} out of domain");
        idx as usize
    }

    pub fn width(&self) -> u8 {
        self.width
    }

    pub fn max_distortion(&self) -> i32 {
        (1i32 << self.width) - 1
    }

    /// Vectors with signed distortion exactly `n`.
    pub fn at(&self, n: i32) -> &[ErrorVector] {
        &self.sets[self.index(n)]
    }

    /// Vectors with distortion magnitude `m`: the union of the sets at `+m`
    /// and `-m` (a single set when `m` is 0).
    pub fn magnitude_class(&self, m: u32) -> impl Iterator<Item = &ErrorVector> {
        let pos = self.at(m as i32);
        let neg = if m == 0 { &[][..] } else { self.at(-(m as i32)) };
        pos.iter().chain(neg.iter())
    }

    /// Set size at each signed distortion, indexed from `-(2^L - 1)` upward.
    pub fn counts(&self) -> Vec<u64> {
        self.sets.iter().map(|s| s.len() as u64).collect()
    }

    pub fn total_count(&self) -> u64 {
        self.sets.iter().map(|s| s.len() as u64).sum()
    }

    /// Generalized convolution: every pair from the two operands is combined
    /// entrywise and filed under the sum of their signed distortions.
    /// Operands must share the width and every combined pair must have
    /// disjoint support.
    pub fn convolve(&self, other: &ErrorSets) -> Result<ErrorSets> {
        if self.width != other.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                actual: other.width,
            });
        }
        let mut out = ErrorSets::empty(self.width)?;
        for a_set in &self.sets {
            for a in a_set {
                for b_set in &other.sets {
                    for b in b_set {
                        out.push(a.combine(b)?);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// The full error-set family for width `L`: the convolution of the single-bit
/// maps for bits 0..L. Holds 3^L vectors in total.
pub fn build_error_sets(width: u8) -> Result<ErrorSets> {
    check_width(width)?;
    if width > MATERIALIZATION_LIMIT {
        return Err(Error::Capacity {
            width,
            limit: MATERIALIZATION_LIMIT,
        });
    }
    let mut acc = ErrorSets::unit_bit(width, 0)?;
    for bit in 1..width {
        acc = acc.convolve(&ErrorSets::unit_bit(width, bit)?)?;
    }
    Ok(acc)
}

/// Set sizes of the full family without materializing vectors: the ordinary
/// convolution of the per-bit count patterns (1 at -2^bit, 0, +2^bit each).
/// Indexed from `-(2^L - 1)` upward, like [`ErrorSets::counts`].
pub fn build_error_counts(width: u8) -> Result<Vec<u64>> {
    check_width(width)?;
    let offset = (1usize << width) - 1;
    let span = 2 * offset + 1;
    let mut acc = vec![0u64; span];
    acc[offset] = 1;
    for bit in 0..width {
        let stride = 1usize << bit;
        let mut next = vec![0u64; span];
        for (n, &c) in acc.iter().enumerate() {
            if c == 0 {
                continue;
            }
            next[n] += c;
            next[n - stride] += c;
            next[n + stride] += c;
        }
        acc = next;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_unit_bit_shape() {
        let chi = ErrorSets::unit_bit(4, 2).unwrap();
        assert_eq!(chi.at(-4).len(), 1);
        assert_eq!(chi.at(0).len(), 1);
        assert_eq!(chi.at(4).len(), 1);
        assert_eq!(chi.total_count(), 3);
    }

    #[test]
    fn test_convolve_two_bits() {
        // chi_0 * chi_1 over width 2, checked against enumerating all 9 pairs.
        let c = ErrorSets::unit_bit(2, 0)
            .unwrap()
            .convolve(&ErrorSets::unit_bit(2, 1).unwrap())
            .unwrap();
        let sizes: Vec<usize> = (-3..=3).map(|n| c.at(n).len()).collect();
        assert_eq!(sizes, vec![1, 1, 2, 1, 2, 1, 1]);
        assert_eq!(c.total_count(), 9);
    }

    #[test]
    fn test_convolve_empty_annihilates() {
        let chi = ErrorSets::unit_bit(3, 0).unwrap();
        let empty = ErrorSets::empty(3).unwrap();
        assert_eq!(chi.convolve(&empty).unwrap().total_count(), 0);
    }

    #[test]
    fn test_convolve_rejects_overlap() {
        let chi = ErrorSets::unit_bit(3, 1).unwrap();
        assert!(chi.convolve(&chi).is_err());
    }

    #[test]
    fn test_size_identity() {
        // |a * b| at each point is the ordinary convolution of the sizes.
        let a = ErrorSets::unit_bit(3, 0).unwrap();
        let b = ErrorSets::unit_bit(3, 2).unwrap();
        let c = a.convolve(&b).unwrap();
        let (ca, cb, cc) = (a.counts(), b.counts(), c.counts());
        let span = cc.len();
        let mut expect = vec![0u64; span];
        // Offset-index convolution: subtract the zero offset once.
        let off = (span - 1) / 2;
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let k = i + j - off;
                expect[k] += x * y;
            }
        }
        assert_eq!(cc, expect);
    }

    #[test]
    fn test_full_family_counts() {
        for width in 1..=8u8 {
            let sets = build_error_sets(width).unwrap();
            assert_eq!(sets.total_count(), 3u64.pow(width as u32));
            assert_eq!(sets.at(0).len(), 1, "only the zero vector has distortion 0");
            assert_eq!(sets.counts(), build_error_counts(width).unwrap());
        }
    }

    #[test]
    fn test_magnitude_class_width_two() {
        let sets = build_error_sets(2).unwrap();
        assert_eq!(sets.magnitude_class(1).count(), 4);
        assert_eq!(sets.magnitude_class(0).count(), 1);
    }

    #[test]
    fn test_counts_only_reaches_max_width() {
        let counts = build_error_counts(16).unwrap();
        assert_eq!(counts.iter().sum::<u64>(), 3u64.pow(16));
        assert!(build_error_sets(13).is_err());
    }
}
