//! Subsemigroups of `T_n` given by generators.
//!
//! Closure is a breadth-first product enumeration keyed by the integer
//! encoding of each element. Membership of rank-preserving products is
//! answered exactly by enumerating only elements of rank at least a bound:
//! every prefix of a factorization has rank at least that of the product.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::transform::{map_mask, KernelPartition, Transformation, MAX_DEGREE};

pub const DEFAULT_CAP: usize = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureStatus {
    Complete,
    CapExceeded,
}

/// Tri-state membership answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Member,
    NotMember,
    /// Enumeration stopped at the size cap before `x` was found.
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct TransSemigroup {
    degree: usize,
    generators: Vec<Transformation>,
    cap: usize,
    min_rank: usize,
    elements: Vec<Transformation>,
    /// `elements[k] = elements[parent] * generators[gen]`; `None` for generators.
    parents: Vec<Option<(u32, u32)>>,
    index: HashMap<u64, u32>,
    head: usize,
    status: Option<ClosureStatus>,
}

impl TransSemigroup {
    pub fn new(degree: usize, generators: Vec<Transformation>) -> Result<Self> {
        Transformation::identity(degree)?;
        let mut s = Self {
            degree,
            generators: Vec::new(),
            cap: DEFAULT_CAP,
            min_rank: 0,
            elements: Vec::new(),
            parents: Vec::new(),
            index: HashMap::new(),
            head: 0,
            status: None,
        };
        let mut seen = HashSet::new();
        for g in generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
            if seen.insert(g.encode()) {
                s.generators.push(g);
            }
        }
        for gi in 0..s.generators.len() {
            let g = s.generators[gi];
            s.insert(g, None);
        }
        Ok(s)
    }

    /// Restricts enumeration to elements of rank at least `min_rank`. The
    /// stored elements are then exactly those elements of the semigroup.
    pub fn with_min_rank(mut self, min_rank: usize) -> Self {
        self.min_rank = min_rank;
        let kept: Vec<Transformation> = self
            .generators
            .iter()
            .copied()
            .filter(|g| g.rank() >= min_rank)
            .collect();
        self.elements.clear();
        self.parents.clear();
        self.index.clear();
        self.head = 0;
        self.status = None;
        for g in kept {
            let gi = self.generators.iter().position(|h| *h == g).unwrap();
            self.insert(g, Some((u32::MAX, gi as u32)));
        }
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    fn insert(&mut self, x: Transformation, parent: Option<(u32, u32)>) -> bool {
        let key = x.encode();
        if self.index.contains_key(&key) {
            return false;
        }
        self.index.insert(key, self.elements.len() as u32);
        self.elements.push(x);
        self.parents.push(parent.filter(|&(p, _)| p != u32::MAX));
        true
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Transformation] {
        &self.generators
    }

    /// Elements found so far, in discovery order.
    pub fn elements(&self) -> &[Transformation] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.status == Some(ClosureStatus::Complete)
    }

    /// Processes the frontier until `stop` accepts a new element, the
    /// closure completes, or the cap is hit.
    fn grow_until(
        &mut self,
        mut stop: impl FnMut(&Transformation) -> bool,
    ) -> Option<ClosureStatus> {
        if let Some(status) = self.status {
            return Some(status);
        }
        while self.head < self.elements.len() {
            if self.elements.len() >= self.cap {
                self.status = Some(ClosureStatus::CapExceeded);
                return self.status;
            }
            let x = self.elements[self.head];
            for gi in 0..self.generators.len() {
                let y = x.then(&self.generators[gi]);
                if y.rank() < self.min_rank {
                    continue;
                }
                if self.insert(y, Some((self.head as u32, gi as u32))) && stop(&y) {
                    // Remaining generators for this element are retried on
                    // the next call; duplicates are filtered by the index.
                    return None;
                }
            }
            self.head += 1;
        }
        self.status = Some(ClosureStatus::Complete);
        self.status
    }

    /// Enumerates the whole semigroup (or the part above the rank bound).
    pub fn closure(&mut self) -> ClosureStatus {
        loop {
            if let Some(status) = self.grow_until(|_| false) {
                return status;
            }
        }
    }

    /// Membership of `x`, growing the closure only as far as needed.
    pub fn contains(&mut self, x: &Transformation) -> Result<Membership> {
        if x.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: x.degree(),
            });
        }
        if x.rank() < self.min_rank {
            // not representable in this view; answer from the unbounded one
            let mut full = TransSemigroup::new(self.degree, self.generators.clone())?
                .with_min_rank(x.rank())
                .with_cap(self.cap);
            return full.contains(x);
        }
        let key = x.encode();
        if self.index.contains_key(&key) {
            return Ok(Membership::Member);
        }
        loop {
            match self.grow_until(|y| y.encode() == key) {
                None => {
                    if self.index.contains_key(&key) {
                        return Ok(Membership::Member);
                    }
                }
                Some(ClosureStatus::Complete) => return Ok(Membership::NotMember),
                Some(ClosureStatus::CapExceeded) => {
                    return Ok(if self.index.contains_key(&key) {
                        Membership::Member
                    } else {
                        Membership::Inconclusive
                    })
                }
            }
        }
    }

    /// Membership test against the stored elements only.
    pub fn contains_stored(&self, x: &Transformation) -> bool {
        self.index.contains_key(&x.encode())
    }

    /// Generator indices whose product is the stored element `k`.
    pub fn factorization(&self, mut k: usize) -> Vec<usize> {
        let mut word = Vec::new();
        loop {
            match self.parents[k] {
                Some((p, g)) => {
                    word.push(g as usize);
                    k = p as usize;
                }
                None => {
                    let x = self.elements[k];
                    word.push(self.generators.iter().position(|g| *g == x).unwrap());
                    break;
                }
            }
        }
        word.reverse();
        word
    }

    fn require_complete(&mut self) -> Result<()> {
        match self.closure() {
            ClosureStatus::Complete => Ok(()),
            ClosureStatus::CapExceeded => Err(Error::Io(format!(
                "closure exceeded the cap of {} elements",
                self.cap
            ))),
        }
    }

    pub fn idempotents(&mut self) -> Result<Vec<Transformation>> {
        self.require_complete()?;
        Ok(self
            .elements
            .iter()
            .copied()
            .filter(|e| e.is_idempotent())
            .collect())
    }

    /// True iff the idempotents generate the whole semigroup.
    pub fn is_idempotent_generated(&mut self) -> Result<bool> {
        let idempotents = self.idempotents()?;
        if idempotents.is_empty() {
            return Ok(false);
        }
        let mut sub = TransSemigroup::new(self.degree, idempotents)?
            .with_min_rank(self.min_rank)
            .with_cap(self.cap);
        sub.require_complete()?;
        Ok(sub.len() == self.len())
    }

    /// True iff every `x` has some `y` with `x y x = x`. Brute force.
    pub fn is_regular(&mut self) -> Result<bool> {
        self.require_complete()?;
        if self.min_rank > 0 {
            return Err(Error::Unsupported(
                "regularity needs the unrestricted closure".to_string(),
            ));
        }
        Ok(self.elements.iter().all(|x| {
            let r = x.rank();
            self.elements
                .iter()
                .any(|y| y.rank() >= r && x.then(y).then(x) == *x)
        }))
    }
}

/// Permutation of `0..r`, packed four bits per position.
type PackedPerm = u64;

fn pack(images: &[u8]) -> PackedPerm {
    images
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &p)| acc | ((p as u64) << (4 * i)))
}

#[inline]
fn packed_then(x: PackedPerm, y: PackedPerm, r: usize) -> PackedPerm {
    let mut out = 0;
    for i in 0..r {
        let p = (x >> (4 * i)) & 0xf;
        out |= ((y >> (4 * p)) & 0xf) << (4 * i);
    }
    out
}

fn factorial(r: usize) -> usize {
    (1..=r).product()
}

/// A permutation group on `0..r` kept as its full element set.
#[derive(Debug, Clone)]
struct SmallGroup {
    r: usize,
    gens: Vec<PackedPerm>,
    elements: HashSet<PackedPerm>,
}

impl SmallGroup {
    fn trivial(r: usize) -> Self {
        let id = pack(&(0..r as u8).collect::<Vec<_>>());
        Self {
            r,
            gens: Vec::new(),
            elements: HashSet::from([id]),
        }
    }

    fn is_full(&self) -> bool {
        self.elements.len() == factorial(self.r)
    }

    /// Adds a generator, re-closing only when it is new.
    fn add(&mut self, g: PackedPerm) {
        if self.elements.contains(&g) {
            return;
        }
        self.gens.push(g);
        let mut queue: VecDeque<PackedPerm> = self.elements.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            for &s in &self.gens {
                let y = packed_then(x, s, self.r);
                if self.elements.insert(y) {
                    queue.push_back(y);
                }
            }
        }
    }
}

/// Certificate for the R-class of `a` in `S = <generators>`: the strong
/// orbit of `im(a)` under the right action of `S^1` on sets, with a forward
/// and a return word for every member, and the group of permutations of
/// `im(a)` induced by elements stabilizing `im(a)` setwise.
#[derive(Debug, Clone)]
pub struct RClassCertificate {
    anchor: Transformation,
    kernel: KernelPartition,
    generators: Vec<Transformation>,
    /// Sorted points of `im(a)`.
    anchor_points: Vec<u8>,
    /// Position of each point within `anchor_points`.
    position: [u8; MAX_DEGREE],
    /// A preimage under `a` of each anchor point, by position.
    preimage: Vec<u8>,
    orbit: Vec<u32>,
    orbit_index: HashMap<u32, usize>,
    forward_words: Vec<Vec<usize>>,
    back_words: Vec<Vec<usize>>,
    back: Vec<Transformation>,
    group: SmallGroup,
}

impl RClassCertificate {
    pub fn new(generators: &[Transformation], a: &Transformation) -> Result<Self> {
        let n = a.degree();
        for g in generators {
            if g.degree() != n {
                return Err(Error::DegreeMismatch {
                    expected: n,
                    found: g.degree(),
                });
            }
        }
        let r = a.rank();
        let start = a.image_mask();
        let id = Transformation::identity(n)?;

        // Forward exploration over sets of full size.
        let mut nodes = vec![start];
        let mut node_index = HashMap::from([(start, 0usize)]);
        let mut tree: Vec<Option<(usize, usize)>> = vec![None];
        let mut edges: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
        let mut head = 0;
        while head < nodes.len() {
            let b = nodes[head];
            for (gi, g) in generators.iter().enumerate() {
                let c = map_mask(b, g);
                if c.count_ones() as usize != r {
                    continue;
                }
                let target = match node_index.get(&c) {
                    Some(&k) => k,
                    None => {
                        let k = nodes.len();
                        node_index.insert(c, k);
                        nodes.push(c);
                        tree.push(Some((head, gi)));
                        edges.push(Vec::new());
                        k
                    }
                };
                edges[head].push((gi, target));
            }
            head += 1;
        }

        // Reverse search: which nodes return to the start, and how.
        let mut reverse: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nodes.len()];
        for (from, out) in edges.iter().enumerate() {
            for &(gi, to) in out {
                reverse[to].push((gi, from));
            }
        }
        let mut next_hop: Vec<Option<Option<(usize, usize)>>> = vec![None; nodes.len()];
        next_hop[0] = Some(None);
        let mut queue = VecDeque::from([0usize]);
        while let Some(to) = queue.pop_front() {
            for &(gi, from) in &reverse[to] {
                if next_hop[from].is_none() {
                    next_hop[from] = Some(Some((gi, to)));
                    queue.push_back(from);
                }
            }
        }

        // Strong orbit: reachable forwards (all nodes) and backwards.
        let members: Vec<usize> = (0..nodes.len())
            .filter(|&k| next_hop[k].is_some())
            .collect();
        let mut orbit = Vec::with_capacity(members.len());
        let mut orbit_index = HashMap::new();
        let mut forward_words = Vec::new();
        let mut back_words = Vec::new();
        let mut forward = Vec::new();
        let mut back = Vec::new();
        let mut local = vec![usize::MAX; nodes.len()];
        for &k in &members {
            local[k] = orbit.len();
            orbit_index.insert(nodes[k], orbit.len());
            orbit.push(nodes[k]);

            let mut word = Vec::new();
            let mut cur = k;
            while let Some((parent, gi)) = tree[cur] {
                word.push(gi);
                cur = parent;
            }
            word.reverse();
            forward.push(word.iter().fold(id, |t, &gi| t.then(&generators[gi])));
            forward_words.push(word);

            let mut word = Vec::new();
            let mut cur = k;
            while let Some(Some((gi, to))) = next_hop[cur] {
                word.push(gi);
                cur = to;
            }
            back.push(word.iter().fold(id, |t, &gi| t.then(&generators[gi])));
            back_words.push(word);
        }

        let anchor_points: Vec<u8> = a.image().iter().map(|p| p as u8).collect();
        let mut position = [u8::MAX; MAX_DEGREE];
        for (i, &p) in anchor_points.iter().enumerate() {
            position[p as usize] = i as u8;
        }
        let mut preimage = vec![0u8; r];
        for x in (0..n).rev() {
            preimage[position[a.apply(x)] as usize] = x as u8;
        }

        let induced = |t: &Transformation| -> PackedPerm {
            let imgs: Vec<u8> = anchor_points
                .iter()
                .map(|&p| position[t.apply(p as usize)])
                .collect();
            pack(&imgs)
        };

        let mut group = SmallGroup::trivial(r);
        // Loops f_k b_k at each member, then f_k s b_m along every internal edge.
        for j in 0..orbit.len() {
            if group.is_full() {
                break;
            }
            group.add(induced(&forward[j].then(&back[j])));
        }
        'edges: for &k in &members {
            let j = local[k];
            for &(gi, to) in &edges[k] {
                if group.is_full() {
                    break 'edges;
                }
                let m = local[to];
                if m == usize::MAX {
                    continue;
                }
                let t = forward[j].then(&generators[gi]).then(&back[m]);
                group.add(induced(&t));
            }
        }

        Ok(Self {
            anchor: *a,
            kernel: a.kernel(),
            generators: generators.to_vec(),
            anchor_points,
            position,
            preimage,
            orbit,
            orbit_index,
            forward_words,
            back_words,
            back,
            group,
        })
    }

    pub fn anchor(&self) -> &Transformation {
        &self.anchor
    }

    pub fn generators(&self) -> &[Transformation] {
        &self.generators
    }

    /// Strong orbit of `im(a)` as point sets, `im(a)` first.
    pub fn strong_orbit(&self) -> Vec<crate::PointSet> {
        let n = self.anchor.degree();
        self.orbit
            .iter()
            .map(|&m| crate::PointSet::from_mask_unchecked(n, m))
            .collect()
    }

    /// Generator words carrying `im(a)` onto orbit member `k`, and back.
    pub fn words(&self, k: usize) -> (&[usize], &[usize]) {
        (&self.forward_words[k], &self.back_words[k])
    }

    /// Order of the induced stabilizer group on `im(a)`.
    pub fn group_order(&self) -> usize {
        self.group.elements.len()
    }

    /// Induced stabilizer group, each element as 0-based images of the
    /// positions of `im(a)`.
    pub fn group_elements(&self) -> Vec<Vec<usize>> {
        let r = self.anchor_points.len();
        let mut out: Vec<Vec<usize>> = self
            .group
            .elements
            .iter()
            .map(|&p| (0..r).map(|i| ((p >> (4 * i)) & 0xf) as usize).collect())
            .collect();
        out.sort();
        out
    }

    /// Size of the R-class: strong orbit length times group order.
    pub fn r_class_size(&self) -> usize {
        self.orbit.len() * self.group_order()
    }

    /// Position in the strong orbit of a set given as a mask.
    pub(crate) fn orbit_position(&self, mask: u32) -> Option<usize> {
        self.orbit_index.get(&mask).copied()
    }

    /// Induced permutation of `im(a)` for `x` followed by the return word of
    /// orbit member `m`; `x` must have the kernel of `a`.
    pub(crate) fn induced_return(&self, x: &Transformation, m: usize) -> PackedPerm {
        let back = &self.back[m];
        let imgs: Vec<u8> = self
            .preimage
            .iter()
            .map(|&z| self.position[back.apply(x.apply(z as usize))])
            .collect();
        pack(&imgs)
    }

    pub(crate) fn group_contains(&self, p: PackedPerm) -> bool {
        self.group.elements.contains(&p)
    }

    /// True iff `x` is R-related to the anchor in the semigroup.
    pub fn in_r_class(&self, x: &Transformation) -> bool {
        if x.degree() != self.anchor.degree() || x.rank() != self.anchor_points.len() {
            return false;
        }
        if x.kernel() != self.kernel {
            return false;
        }
        match self.orbit_position(x.image_mask()) {
            Some(m) => self.group_contains(self.induced_return(x, m)),
            None => false,
        }
    }
}
