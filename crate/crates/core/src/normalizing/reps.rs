//! Conjugacy-orbit representatives of `T_n \ S_n` via an `n^n` bitmap.
//!
//! Encodings are scanned in increasing order. The first unvisited singular
//! map is the least element of its orbit; its whole conjugation orbit is
//! crossed off before the scan continues.

use crate::error::{Error, Result};
use crate::groups::PermutationGroup;
use crate::transform::{state_count, Permutation, Transformation};

/// Refuse bitmaps above this size unless the caller raises the limit.
pub const DEFAULT_BITMAP_LIMIT: u64 = 1 << 30;

/// One bit per element of `T_n`, addressed by the integer encoding.
#[derive(Clone, PartialEq, Eq)]
pub struct BitmapIndex {
    degree: usize,
    words: Vec<u64>,
    count: u64,
}

impl std::fmt::Debug for BitmapIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BitmapIndex")
            .field("degree", &self.degree)
            .field("count", &self.count)
            .finish()
    }
}

impl BitmapIndex {
    pub fn bytes_needed(n: usize) -> u64 {
        state_count(n).div_ceil(64) * 8
    }

    pub fn new(n: usize, limit: u64) -> Result<Self> {
        Transformation::identity(n)?;
        let bytes = Self::bytes_needed(n);
        if bytes > limit {
            return Err(Error::BitmapTooLarge {
                degree: n,
                bytes,
                limit,
            });
        }
        Ok(Self {
            degree: n,
            words: vec![0; (bytes / 8) as usize],
            count: 0,
        })
    }

    pub(crate) fn from_words(n: usize, words: Vec<u64>) -> Result<Self> {
        if words.len() as u64 * 8 != Self::bytes_needed(n) {
            return Err(Error::CacheMismatch("bitmap length".into()));
        }
        let count = words.iter().map(|w| w.count_ones() as u64).sum();
        Ok(Self {
            degree: n,
            words,
            count,
        })
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> u64 {
        state_count(self.degree)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of set bits.
    pub fn count(&self) -> u64 {
        self.count
    }

    #[inline]
    pub fn get(&self, i: u64) -> bool {
        self.words[(i >> 6) as usize] & (1 << (i & 63)) != 0
    }

    /// Sets bit `i`; returns true if it was clear.
    #[inline]
    pub fn set(&mut self, i: u64) -> bool {
        let w = &mut self.words[(i >> 6) as usize];
        let bit = 1u64 << (i & 63);
        if *w & bit != 0 {
            return false;
        }
        *w |= bit;
        self.count += 1;
        true
    }

    /// First clear bit at or after `i`, if any below `len()`.
    pub fn next_clear(&self, i: u64) -> Option<u64> {
        let len = self.len();
        let mut i = i;
        while i < len {
            let word = self.words[(i >> 6) as usize] | ((1u64 << (i & 63)) - 1);
            if word != u64::MAX {
                let j = (i & !63) + word.trailing_ones() as u64;
                return (j < len).then_some(j);
            }
            i = (i & !63) + 64;
        }
        None
    }
}

/// A representative with the size of its conjugation orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Representative {
    pub map: Transformation,
    pub encoding: u64,
    pub orbit_size: u64,
}

/// Streams least-encoding representatives in increasing order.
pub struct RepEnumerator<'g> {
    elements: &'g [Permutation],
    bitmap: BitmapIndex,
    cursor: u64,
    rank: Option<usize>,
}

impl<'g> RepEnumerator<'g> {
    pub fn new(group: &'g PermutationGroup, rank: Option<usize>, limit: u64) -> Result<Self> {
        let bitmap = BitmapIndex::new(group.degree(), limit)?;
        Ok(Self::resume(group, rank, bitmap, 0))
    }

    /// Continues from a saved bitmap and cursor.
    pub fn resume(
        group: &'g PermutationGroup,
        rank: Option<usize>,
        bitmap: BitmapIndex,
        cursor: u64,
    ) -> Self {
        Self {
            elements: group.elements(),
            bitmap,
            cursor,
            rank,
        }
    }

    pub fn cursor(&self) -> u64 {
        self.cursor
    }

    pub fn bitmap(&self) -> &BitmapIndex {
        &self.bitmap
    }

    pub fn into_bitmap(self) -> BitmapIndex {
        self.bitmap
    }

    pub fn rank_filter(&self) -> Option<usize> {
        self.rank
    }
}

impl Iterator for RepEnumerator<'_> {
    type Item = Representative;

    fn next(&mut self) -> Option<Representative> {
        let n = self.bitmap.degree;
        loop {
            let idx = self.bitmap.next_clear(self.cursor)?;
            self.cursor = idx + 1;
            let a = Transformation::decode_unchecked(n, idx);
            let rank = a.rank();
            // permutations and filtered ranks stay clear; their conjugates
            // share the rank and are skipped one by one
            if rank == n || self.rank.is_some_and(|k| k != rank) {
                continue;
            }
            let mut orbit_size = 0;
            for g in self.elements {
                if self.bitmap.set(a.conjugate_by(g).encode()) {
                    orbit_size += 1;
                }
            }
            return Some(Representative {
                map: a,
                encoding: idx,
                orbit_size,
            });
        }
    }
}

/// All representatives of the conjugation orbits on singular maps,
/// optionally of a single rank.
pub fn conjugacy_orbit_reps(
    group: &PermutationGroup,
    rank: Option<usize>,
) -> Result<Vec<Representative>> {
    Ok(RepEnumerator::new(group, rank, DEFAULT_BITMAP_LIMIT)?.collect())
}
