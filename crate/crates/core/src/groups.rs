//! Permutation groups given by generators, materialized in full.
//!
//! Every group handled here has order at most a few hundred thousand, so
//! the element list is built once by breadth-first closure and all
//! structural questions are answered by direct iteration.

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;
use std::sync::OnceLock;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::transform::{map_mask_perm, Permutation, PointSet, Transformation};

#[derive(Debug)]
pub struct PermutationGroup {
    label: String,
    degree: usize,
    generators: Vec<Permutation>,
    elements: OnceLock<Vec<Permutation>>,
}

impl Clone for PermutationGroup {
    fn clone(&self) -> Self {
        let elements = OnceLock::new();
        if let Some(e) = self.elements.get() {
            let _ = elements.set(e.clone());
        }
        Self {
            label: self.label.clone(),
            degree: self.degree,
            generators: self.generators.clone(),
            elements,
        }
    }
}

impl PermutationGroup {
    /// Group generated by `generators`. Identity generators are dropped; an
    /// empty list gives the trivial group.
    pub fn new(
        label: impl Into<String>,
        degree: usize,
        generators: Vec<Permutation>,
    ) -> Result<Self> {
        Permutation::identity(degree)?;
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let generators = generators
            .into_iter()
            .filter(|g| !g.is_identity())
            .collect();
        Ok(Self {
            label: label.into(),
            degree,
            generators,
            elements: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Result<Self> {
        Self::new("1", degree, Vec::new())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    /// All elements, identity first, in breadth-first order over the
    /// generators.
    pub fn elements(&self) -> &[Permutation] {
        self.elements.get_or_init(|| {
            let id = Permutation::identity(self.degree).expect("degree checked in new");
            let mut seen = HashSet::new();
            seen.insert(id);
            let mut out = vec![id];
            let mut head = 0;
            while head < out.len() {
                let x = out[head];
                head += 1;
                for g in &self.generators {
                    let y = x.then(g);
                    if seen.insert(y) {
                        out.push(y);
                    }
                }
            }
            out
        })
    }

    pub fn order(&self) -> usize {
        self.elements().len()
    }

    /// `p^-1 G p`, the copy of the group relabelled by `p`.
    pub fn conjugated(&self, p: &Permutation) -> Result<Self> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: p.degree(),
            });
        }
        let pinv = p.inverse();
        let gens = self
            .generators
            .iter()
            .map(|g| pinv.then(g).then(p))
            .collect();
        Self::new(format!("{}^{}", self.label, p), self.degree, gens)
    }

    /// Orbit of `seed` under an arbitrary right action, with Schreier data.
    pub fn orbit_by<T, F>(&self, seed: T, action: Action, act: F) -> OrbitRecord<T>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &Permutation) -> T,
    {
        let mut index = HashMap::new();
        index.insert(seed.clone(), 0usize);
        let mut members = vec![seed];
        let mut schreier = vec![None];
        let mut head = 0;
        while head < members.len() {
            let x = members[head].clone();
            for (gi, g) in self.generators.iter().enumerate() {
                let y = act(&x, g);
                if !index.contains_key(&y) {
                    index.insert(y.clone(), members.len());
                    members.push(y);
                    schreier.push(Some((head, gi)));
                }
            }
            head += 1;
        }
        OrbitRecord {
            action,
            members,
            schreier,
        }
    }

    /// Orbit of a 0-based point.
    pub fn point_orbit(&self, point: usize) -> OrbitRecord<usize> {
        self.orbit_by(point, Action::OnPoints, |&x, g| g.apply(x))
    }

    pub fn set_orbit(&self, set: PointSet) -> OrbitRecord<PointSet> {
        self.orbit_by(set, Action::OnSets, |s, g| s.map_perm(g))
    }

    /// Orbit of `a` under right multiplication, `{a g}`.
    pub fn right_orbit(&self, a: Transformation) -> OrbitRecord<Transformation> {
        self.orbit_by(a, Action::OnRight, |x, g| x.then_perm(g))
    }

    /// Orbit of `a` under conjugation, `{g^-1 a g}`.
    pub fn conjugation_orbit(&self, a: Transformation) -> OrbitRecord<Transformation> {
        self.orbit_by(a, Action::OnConjugation, |x, g| x.conjugate_by(g))
    }

    pub fn is_transitive(&self) -> bool {
        self.point_orbit(0).len() == self.degree
    }

    /// True iff the group is transitive and preserves no partition other than
    /// the trivial ones. Intransitive groups report `false`.
    pub fn is_primitive(&self) -> bool {
        self.block_system().is_none() && self.is_transitive()
    }

    /// A nontrivial block system, given as block ids per point, if one exists.
    /// Only meaningful for transitive groups.
    pub fn block_system(&self) -> Option<Vec<usize>> {
        if !self.is_transitive() {
            return None;
        }
        (1..self.degree).find_map(|beta| {
            let blocks = self.minimal_block(beta);
            let mut ids = HashMap::new();
            let labels: Vec<usize> = blocks
                .iter()
                .map(|&r| {
                    let next = ids.len();
                    *ids.entry(r).or_insert(next)
                })
                .collect();
            (ids.len() > 1).then_some(labels)
        })
    }

    /// Finest invariant partition in which point 0 and `beta` share a block;
    /// returns the representative of every point.
    fn minimal_block(&self, beta: usize) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.degree).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut queue = VecDeque::new();
        parent[beta] = 0;
        queue.push_back((0, beta));
        while let Some((x, y)) = queue.pop_front() {
            for g in &self.generators {
                let rx = find(&mut parent, g.apply(x));
                let ry = find(&mut parent, g.apply(y));
                if rx != ry {
                    parent[ry] = rx;
                    queue.push_back((rx, ry));
                }
            }
        }
        (0..self.degree).map(|x| find(&mut parent, x)).collect()
    }

    /// Decides `(i, j)`-homogeneity: every `i`-set can be mapped into every
    /// `j`-set. On failure the least violating pair is returned.
    pub fn is_ij_homogeneous(&self, i: usize, j: usize) -> Result<Homogeneity> {
        let n = self.degree;
        if i == 0 || i > j || j > n {
            return Err(Error::InvalidSizes { i, j, degree: n });
        }
        let targets = subsets(n, j);
        let mut covered = HashSet::new();
        for rep in subsets(n, i) {
            if covered.contains(&rep) {
                continue;
            }
            let orbit: Vec<u32> = self
                .orbit_by(rep, Action::OnSets, |&m, g| map_mask_perm(m, g))
                .members
                .clone();
            covered.extend(orbit.iter().copied());
            if let Some(&bad) = targets
                .iter()
                .find(|&&t| !orbit.iter().any(|&m| m & !t == 0))
            {
                return Ok(Homogeneity {
                    holds: false,
                    witness: Some((
                        PointSet::from_mask_unchecked(n, rep),
                        PointSet::from_mask_unchecked(n, bad),
                    )),
                });
            }
        }
        Ok(Homogeneity {
            holds: true,
            witness: None,
        })
    }

    /// Exact mean of `|A g ∩ B|` over all elements `g`.
    pub fn average_intersection(&self, a: &PointSet, b: &PointSet) -> Result<Ratio<u64>> {
        for s in [a, b] {
            if s.degree() != self.degree {
                return Err(Error::DegreeMismatch {
                    expected: self.degree,
                    found: s.degree(),
                });
            }
        }
        if !self.is_transitive() {
            return Err(Error::NotTransitive);
        }
        let total: u64 = self
            .elements()
            .iter()
            .map(|g| a.map_perm(g).intersection_len(b) as u64)
            .sum();
        Ok(Ratio::new(total, self.order() as u64))
    }
}

/// Right actions used for orbit computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Action {
    OnPoints,
    OnSets,
    OnRight,
    OnConjugation,
}

/// An orbit in discovery order. Member `k` other than the seed was first
/// reached from member `schreier[k].0` by generator `schreier[k].1`.
#[derive(Debug, Clone)]
pub struct OrbitRecord<T> {
    pub action: Action,
    pub members: Vec<T>,
    pub schreier: Vec<Option<(usize, usize)>>,
}

impl<T> OrbitRecord<T> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn seed(&self) -> &T {
        &self.members[0]
    }

    /// Generator indices which carry the seed to member `k`.
    pub fn word(&self, mut k: usize) -> Vec<usize> {
        let mut word = Vec::new();
        while let Some((parent, gen)) = self.schreier[k] {
            word.push(gen);
            k = parent;
        }
        word.reverse();
        word
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homogeneity {
    pub holds: bool,
    /// `(I, J)` such that no element maps `I` into `J`.
    pub witness: Option<(PointSet, PointSet)>,
}

/// All `k`-subsets of `[n]` as masks, in lexicographic order of their
/// sorted member lists.
pub fn subsets(n: usize, k: usize) -> Vec<u32> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().fold(0u32, |m, &p| m | (1 << p)));
        let mut pos = k;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if idx[pos] < n - k + pos {
                break;
            }
            if pos == 0 {
                return out;
            }
        }
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}
