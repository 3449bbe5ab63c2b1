//! Transformations and permutations of `[n]`.
//!
//! Points are 0-based internally and 1-based in every textual format.
//! Products are written left to right: `(x)ab = ((x)a)b`, so
//! `a.then(&b)` first applies `a` and then `b`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported degree. `n^n` must fit in a `u64` for the integer
/// encoding, and point sets are stored as bitmasks.
pub const MAX_DEGREE: usize = 15;

fn check_degree(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DEGREE {
        Err(Error::UnsupportedDegree(n))
    } else {
        Ok(())
    }
}

fn check_same(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        Err(Error::DegreeMismatch { expected, found })
    } else {
        Ok(())
    }
}

/// A total map `[n] -> [n]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transformation {
    degree: u8,
    images: [u8; MAX_DEGREE],
}

impl Transformation {
    /// Builds a transformation from 0-based images.
    pub fn new(images: &[usize]) -> Result<Self> {
        let n = images.len();
        check_degree(n)?;
        let mut buf = [0u8; MAX_DEGREE];
        for (slot, &p) in buf.iter_mut().zip(images) {
            if p >= n {
                return Err(Error::PointOutOfRange {
                    point: p + 1,
                    degree: n,
                });
            }
            *slot = p as u8;
        }
        Ok(Self {
            degree: n as u8,
            images: buf,
        })
    }

    /// Builds a transformation from 1-based images, as written in text.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let n = images.len();
        check_degree(n)?;
        let mut zero = Vec::with_capacity(n);
        for &p in images {
            if p == 0 || p > n {
                return Err(Error::PointOutOfRange {
                    point: p,
                    degree: n,
                });
            }
            zero.push(p - 1);
        }
        Self::new(&zero)
    }

    pub(crate) fn from_raw(degree: usize, images: [u8; MAX_DEGREE]) -> Self {
        Self {
            degree: degree as u8,
            images,
        }
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_degree(n)?;
        let mut images = [0u8; MAX_DEGREE];
        for (i, slot) in images.iter_mut().enumerate().take(n) {
            *slot = i as u8;
        }
        Ok(Self::from_raw(n, images))
    }

    /// The constant map onto the 0-based point `point`.
    pub fn constant(n: usize, point: usize) -> Result<Self> {
        Self::new(&vec![point; n])
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    /// 0-based images.
    #[inline]
    pub fn images(&self) -> &[u8] {
        &self.images[..self.degree as usize]
    }

    /// Image of the 0-based point `x`.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.images().iter().map(|&p| p as usize + 1).collect()
    }

    #[inline]
    pub fn image_mask(&self) -> u32 {
        self.images().iter().fold(0u32, |m, &p| m | (1 << p))
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.image_mask().count_ones() as usize
    }

    pub fn is_permutation(&self) -> bool {
        self.rank() == self.degree()
    }

    pub fn is_idempotent(&self) -> bool {
        self.then(self) == *self
    }

    /// Left-to-right product: the result maps `x` to `t(self(x))`.
    #[inline]
    pub fn then(&self, t: &Transformation) -> Transformation {
        debug_assert_eq!(self.degree, t.degree);
        let mut images = [0u8; MAX_DEGREE];
        for (slot, &p) in images.iter_mut().zip(self.images()) {
            *slot = t.images[p as usize];
        }
        Self::from_raw(self.degree(), images)
    }

    /// Checked form of [`Transformation::then`].
    pub fn compose(&self, t: &Transformation) -> Result<Transformation> {
        check_same(self.degree(), t.degree())?;
        Ok(self.then(t))
    }

    /// Right multiplication by a permutation, `self * g`.
    #[inline]
    pub fn then_perm(&self, g: &Permutation) -> Transformation {
        debug_assert_eq!(self.degree, g.degree);
        let mut images = [0u8; MAX_DEGREE];
        for (slot, &p) in images.iter_mut().zip(self.images()) {
            *slot = g.images[p as usize];
        }
        Self::from_raw(self.degree(), images)
    }

    /// `g^-1 * self * g`, i.e. the map `x -> g(self(g^-1(x)))`.
    #[inline]
    pub fn conjugate_by(&self, g: &Permutation) -> Transformation {
        debug_assert_eq!(self.degree, g.degree);
        let mut images = [0u8; MAX_DEGREE];
        for (x, slot) in images.iter_mut().enumerate().take(self.degree()) {
            let pre = g.inverse[x] as usize;
            *slot = g.images[self.images[pre] as usize];
        }
        Self::from_raw(self.degree(), images)
    }

    /// Checked form of [`Transformation::conjugate_by`].
    pub fn conjugate(&self, g: &Permutation) -> Result<Transformation> {
        check_same(self.degree(), g.degree())?;
        Ok(self.conjugate_by(g))
    }

    pub fn kernel(&self) -> KernelPartition {
        let n = self.degree();
        let mut label = [u8::MAX; MAX_DEGREE];
        let mut classes = [0u8; MAX_DEGREE];
        let mut next = 0u8;
        for x in 0..n {
            let y = self.images[x] as usize;
            if label[y] == u8::MAX {
                label[y] = next;
                next += 1;
            }
            classes[x] = label[y];
        }
        KernelPartition {
            degree: self.degree,
            classes,
            count: next,
        }
    }

    pub fn image(&self) -> PointSet {
        PointSet {
            degree: self.degree,
            bits: self.image_mask(),
        }
    }

    /// Base-`n` integer with point 1 as the most significant digit:
    /// `sum (a(i) - 1) * n^(n - i)` over 1-based `i`.
    #[inline]
    pub fn encode(&self) -> u64 {
        let n = self.degree as u64;
        self.images()
            .iter()
            .fold(0u64, |acc, &p| acc * n + p as u64)
    }

    /// Inverse of [`Transformation::encode`].
    pub fn decode(n: usize, index: u64) -> Result<Self> {
        check_degree(n)?;
        if index >= state_count(n) {
            return Err(Error::EncodingOutOfRange { index, degree: n });
        }
        Ok(Self::decode_unchecked(n, index))
    }

    #[inline]
    pub(crate) fn decode_unchecked(n: usize, mut index: u64) -> Self {
        let mut images = [0u8; MAX_DEGREE];
        let base = n as u64;
        for slot in images[..n].iter_mut().rev() {
            *slot = (index % base) as u8;
            index /= base;
        }
        Self::from_raw(n, images)
    }

    /// Reinterprets a bijective transformation as a permutation.
    pub fn to_permutation(&self) -> Result<Permutation> {
        Permutation::new(
            &self
                .images()
                .iter()
                .map(|&p| p as usize)
                .collect::<Vec<_>>(),
        )
    }
}

/// `n^n`, the size of `T_n`.
pub fn state_count(n: usize) -> u64 {
    (n as u64).pow(n as u32)
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.images().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", p + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// A bijection of `[n]` together with its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    degree: u8,
    images: [u8; MAX_DEGREE],
    inverse: [u8; MAX_DEGREE],
}

impl Permutation {
    /// Builds a permutation from 0-based images.
    pub fn new(images: &[usize]) -> Result<Self> {
        let t = Transformation::new(images)?;
        Self::from_transformation(&t)
    }

    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let t = Transformation::from_one_based(images)?;
        Self::from_transformation(&t)
    }

    fn from_transformation(t: &Transformation) -> Result<Self> {
        if !t.is_permutation() {
            return Err(Error::NotBijective);
        }
        let mut inverse = [0u8; MAX_DEGREE];
        for (x, &y) in t.images().iter().enumerate() {
            inverse[y as usize] = x as u8;
        }
        Ok(Self {
            degree: t.degree,
            images: t.images,
            inverse,
        })
    }

    /// Builds a permutation of degree `n` from disjoint 1-based cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        check_degree(n)?;
        let mut images: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        for cycle in cycles {
            for &p in cycle {
                if p == 0 || p > n {
                    return Err(Error::PointOutOfRange {
                        point: p,
                        degree: n,
                    });
                }
                if seen[p - 1] {
                    return Err(Error::NotBijective);
                }
                seen[p - 1] = true;
            }
            for (i, &p) in cycle.iter().enumerate() {
                images[p - 1] = cycle[(i + 1) % cycle.len()] - 1;
            }
        }
        Self::new(&images)
    }

    pub fn identity(n: usize) -> Result<Self> {
        let t = Transformation::identity(n)?;
        Self::from_transformation(&t)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    #[inline]
    pub fn images(&self) -> &[u8] {
        &self.images[..self.degree as usize]
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    #[inline]
    pub fn apply_inverse(&self, x: usize) -> usize {
        self.inverse[x] as usize
    }

    pub fn inverse(&self) -> Permutation {
        Self {
            degree: self.degree,
            images: self.inverse,
            inverse: self.images,
        }
    }

    /// Left-to-right product: first `self`, then `h`.
    #[inline]
    pub fn then(&self, h: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree, h.degree);
        let mut images = [0u8; MAX_DEGREE];
        let mut inverse = [0u8; MAX_DEGREE];
        for x in 0..self.degree() {
            let y = h.images[self.images[x] as usize];
            images[x] = y;
            inverse[y as usize] = x as u8;
        }
        Self {
            degree: self.degree,
            images,
            inverse,
        }
    }

    pub fn compose(&self, h: &Permutation) -> Result<Permutation> {
        check_same(self.degree(), h.degree())?;
        Ok(self.then(h))
    }

    pub fn is_identity(&self) -> bool {
        self.images()
            .iter()
            .enumerate()
            .all(|(i, &p)| i == p as usize)
    }

    pub fn as_transformation(&self) -> Transformation {
        Transformation::from_raw(self.degree(), self.images)
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.images().iter().map(|&p| p as usize + 1).collect()
    }

    /// Nontrivial cycles in 1-based points, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The kernel of a transformation, labelled by first appearance.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct KernelPartition {
    degree: u8,
    classes: [u8; MAX_DEGREE],
    count: u8,
}

impl KernelPartition {
    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    /// Number of classes, equal to the rank of the transformation.
    pub fn class_count(&self) -> usize {
        self.count as usize
    }

    /// 0-based class id of the 0-based point `x`.
    #[inline]
    pub fn class_of(&self, x: usize) -> usize {
        self.classes[x] as usize
    }

    /// 1-based class ids in point order.
    pub fn class_ids(&self) -> Vec<usize> {
        self.classes[..self.degree()]
            .iter()
            .map(|&c| c as usize + 1)
            .collect()
    }

    pub fn classes(&self) -> Vec<PointSet> {
        let mut bits = vec![0u32; self.class_count()];
        for x in 0..self.degree() {
            bits[self.class_of(x)] |= 1 << x;
        }
        bits.into_iter()
            .map(|b| PointSet {
                degree: self.degree,
                bits: b,
            })
            .collect()
    }

    /// True iff `s` meets every class exactly once.
    pub fn is_section(&self, s: &PointSet) -> bool {
        is_section(s, self)
    }
}

impl fmt::Debug for KernelPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.classes().iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// A subset of `[n]`, stored as a bitmask over 0-based points.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet {
    degree: u8,
    bits: u32,
}

impl PointSet {
    pub fn from_mask(n: usize, bits: u32) -> Result<Self> {
        check_degree(n)?;
        if bits >> n != 0 {
            return Err(Error::PointOutOfRange {
                point: 32 - bits.leading_zeros() as usize,
                degree: n,
            });
        }
        Ok(Self {
            degree: n as u8,
            bits,
        })
    }

    pub(crate) fn from_mask_unchecked(n: usize, bits: u32) -> Self {
        Self {
            degree: n as u8,
            bits,
        }
    }

    /// Builds a set from 0-based points.
    pub fn new(n: usize, points: impl IntoIterator<Item = usize>) -> Result<Self> {
        check_degree(n)?;
        let mut bits = 0u32;
        for p in points {
            if p >= n {
                return Err(Error::PointOutOfRange {
                    point: p + 1,
                    degree: n,
                });
            }
            bits |= 1 << p;
        }
        Ok(Self {
            degree: n as u8,
            bits,
        })
    }

    pub fn from_one_based(n: usize, points: &[usize]) -> Result<Self> {
        if let Some(&p) = points.iter().find(|&&p| p == 0 || p > n) {
            return Err(Error::PointOutOfRange {
                point: p,
                degree: n,
            });
        }
        Self::new(n, points.iter().map(|p| p - 1))
    }

    pub fn full(n: usize) -> Result<Self> {
        check_degree(n)?;
        Ok(Self {
            degree: n as u8,
            bits: (1u32 << n) - 1,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    #[inline]
    pub fn mask(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, x: usize) -> bool {
        x < 32 && self.bits & (1 << x) != 0
    }

    /// Members as ascending 0-based points.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        MaskIter(self.bits)
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.iter().map(|p| p + 1).collect()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn intersection_len(&self, other: &PointSet) -> usize {
        (self.bits & other.bits).count_ones() as usize
    }

    /// Setwise image under a permutation.
    pub fn map_perm(&self, g: &Permutation) -> PointSet {
        Self {
            degree: self.degree,
            bits: map_mask_perm(self.bits, g),
        }
    }

    /// Setwise image under a transformation.
    pub fn map_transformation(&self, t: &Transformation) -> PointSet {
        Self {
            degree: self.degree,
            bits: map_mask(self.bits, t),
        }
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", p + 1)?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Ascending set bits of a mask.
#[derive(Clone, Copy)]
pub(crate) struct MaskIter(pub(crate) u32);

impl Iterator for MaskIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let p = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(p)
    }
}

#[inline]
pub(crate) fn map_mask(bits: u32, t: &Transformation) -> u32 {
    MaskIter(bits).fold(0, |m, p| m | (1 << t.images[p]))
}

#[inline]
pub(crate) fn map_mask_perm(bits: u32, g: &Permutation) -> u32 {
    MaskIter(bits).fold(0, |m, p| m | (1 << g.images[p]))
}

/// True iff `s` contains exactly one point of every class of `k`.
pub fn is_section(s: &PointSet, k: &KernelPartition) -> bool {
    if s.degree != k.degree || s.len() != k.class_count() {
        return false;
    }
    let mut hit = 0u32;
    for p in s.iter() {
        let c = 1u32 << k.class_of(p);
        if hit & c != 0 {
            return false;
        }
        hit |= c;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[usize]) -> Transformation {
        Transformation::from_one_based(v).unwrap()
    }

    fn cyc(n: usize, c: &[&[usize]]) -> Permutation {
        let cycles: Vec<Vec<usize>> = c.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(n, &cycles).unwrap()
    }

    #[test]
    fn compose_examples() {
        let a = t(&[1, 1, 3, 4, 1]);
        let id = Transformation::identity(5).unwrap();
        assert_eq!(id.compose(&a).unwrap(), a);
        assert_eq!(a.compose(&a).unwrap(), a);
        let c = t(&[2, 3, 1]);
        assert_eq!(c.compose(&c).unwrap(), t(&[3, 1, 2]));
        assert!(matches!(a.compose(&c), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn conjugate_examples() {
        let a = t(&[1, 1, 2]);
        let g = cyc(3, &[&[1, 2, 3]]);
        let r = a.conjugate(&g).unwrap();
        // g^-1(1) = 3, a(3) = 2, g(2) = 3; and so on.
        assert_eq!(r, t(&[3, 2, 2]));
        assert_eq!(r.kernel().class_ids(), vec![1, 2, 2]);
        assert_eq!(a.conjugate(&Permutation::identity(3).unwrap()).unwrap(), a);
        assert!(a.conjugate(&Permutation::identity(4).unwrap()).is_err());
    }

    #[test]
    fn kernel_of_degree_nine_map() {
        let a = t(&[7, 8, 8, 6, 9, 4, 8, 7, 5]);
        let k = a.kernel();
        assert_eq!(format!("{k:?}"), "{1,8} {2,3,7} {4} {5} {6} {9}");
        assert_eq!(k.class_count(), 6);
        let p = cyc(4, &[&[1, 3], &[2, 4]]).as_transformation();
        assert!(p.kernel().classes().iter().all(|c| c.len() == 1));
        let c = Transformation::constant(6, 2).unwrap();
        assert_eq!(c.kernel().class_count(), 1);
    }

    #[test]
    fn image_examples() {
        let m = t(&[1, 2, 3, 4, 5, 5, 6, 6, 6, 6, 6, 6]);
        assert_eq!(m.image().to_one_based(), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(t(&[1, 1, 3, 4, 1]).image().to_one_based(), vec![1, 3, 4]);
        assert_eq!(
            Transformation::identity(4).unwrap().image(),
            PointSet::full(4).unwrap()
        );
    }

    #[test]
    fn section_examples() {
        let e = t(&[1, 1, 3, 4, 1]);
        assert!(is_section(&e.image(), &e.kernel()));
        let m = t(&[1, 2, 3, 4, 5, 5, 6, 6, 6, 6, 6, 6]);
        let k = m.kernel();
        // 5 and 6 share a class, so the image itself is not a section
        assert!(!is_section(
            &PointSet::from_one_based(12, &[1, 2, 3, 4, 5, 6]).unwrap(),
            &k
        ));
        assert!(is_section(
            &PointSet::from_one_based(12, &[1, 2, 3, 4, 6, 12]).unwrap(),
            &k
        ));
        assert!(!is_section(
            &PointSet::from_one_based(12, &[5, 6]).unwrap(),
            &k
        ));
        // right size, but 5 and 6 share a class
        assert!(!is_section(
            &PointSet::from_one_based(12, &[1, 2, 3, 5, 6, 7]).unwrap(),
            &k
        ));
    }

    #[test]
    fn encoding_examples() {
        for n in 1..=6 {
            assert_eq!(Transformation::constant(n, 0).unwrap().encode(), 0);
        }
        assert_eq!(t(&[1, 2]).encode(), 1);
        assert_eq!(t(&[2, 1]).encode(), 2);
        assert!(matches!(
            Transformation::decode(2, 4),
            Err(Error::EncodingOutOfRange { .. })
        ));
    }

    #[test]
    fn encoding_roundtrip_exhaustive() {
        for n in 1..=4 {
            let mut seen = std::collections::HashSet::new();
            for idx in 0..state_count(n) {
                let a = Transformation::decode(n, idx).unwrap();
                assert_eq!(a.encode(), idx);
                assert!(seen.insert(a));
            }
        }
    }

    #[test]
    fn permutations() {
        let g = cyc(9, &[&[1, 3, 2], &[4, 6, 5], &[7, 9, 8]]);
        assert_eq!(g.to_string(), "(1 3 2)(4 6 5)(7 9 8)");
        assert!(g.then(&g.inverse()).is_identity());
        assert_eq!(Permutation::identity(3).unwrap().to_string(), "()");
        assert_eq!(
            Permutation::from_cycles(3, &[vec![1, 2], vec![2, 3]]),
            Err(Error::NotBijective)
        );
        assert_eq!(
            Permutation::from_one_based(&[1, 1, 2]),
            Err(Error::NotBijective)
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Transformation::from_one_based(&[1, 4, 2]).is_err());
        assert!(Transformation::from_one_based(&[]).is_err());
        assert!(Transformation::new(&[0; 16]).is_err());
    }
}
