//! Decision procedures for a-, k- and full normalizing.
//!
//! `G` is a-normalizing iff `aG ⊆ <a^G>`, because `<a^G>` is closed under
//! conjugation by `G`. A single map is decided by three strategies tried in
//! a fixed order:
//!
//! 1. *shortcut*: when no element of `G` maps `im(a)` to a section of
//!    `ker(a)`, the rank-preserving elements of `<a^G>` are exactly the
//!    conjugates of `a`, so `ag` is a member iff it is a conjugate;
//! 2. *R-class*: `aG` lies in the R-class of `a` in `<a^G>`, tested with a
//!    strong-orbit certificate one right coset of the setwise stabilizer of
//!    `im(a)` at a time;
//! 3. *fallback*: exact membership of each remaining `ag` in the elements of
//!    `<a^G>` of rank `rank(a)`.

mod classify;
mod fixtures;
mod reps;
mod sweep;

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::groups::PermutationGroup;
use crate::semigroups::{Membership, RClassCertificate, TransSemigroup, DEFAULT_CAP};
use crate::transform::{is_section, map_mask_perm, Permutation, PointSet, Transformation};

pub use classify::{
    cache_file_name, classify, decide_group, structural_filters, ClassificationEntry,
    ClassificationReport, ClassifyOptions, FilterReport, HomogeneityCheck,
};
pub use fixtures::{
    check_preferring_known, find_failing_conjugate, known_witnesses, verify_m12, ConjugateFailure,
    M12Report, WitnessFixture, M12_MAP, M12_WITNESS,
};
pub use reps::{
    conjugacy_orbit_reps, BitmapIndex, RepEnumerator, Representative, DEFAULT_BITMAP_LIMIT,
};
pub use sweep::{is_k_normalizing, is_normalizing, sweep, Progress, ProgressFn, SweepOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Normalizing,
    NotNormalizing,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureReason {
    /// `ag` is not in the semigroup generated by the conjugates.
    MembershipFailed,
    /// Shortcut case: `ag` is not a conjugate of `a`.
    ConjugateMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Decided without enumeration (trivial group, rank-1 maps).
    Analytic,
    Shortcut,
    RClass,
    Fallback,
    /// A known failing map was located on a conjugate copy.
    Witness,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Strategy::Analytic => "analytic",
            Strategy::Shortcut => "shortcut",
            Strategy::RClass => "r-class",
            Strategy::Fallback => "fallback",
            Strategy::Witness => "witness",
        };
        f.write_str(s)
    }
}

/// A failing pair: `map * g` is not in `<map^G>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub map: Transformation,
    pub g: Permutation,
    pub reason: FailureReason,
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Witness", 5)?;
        s.serialize_field("map", &self.map.to_one_based())?;
        s.serialize_field("g", &self.g.to_string())?;
        s.serialize_field("g_images", &self.g.to_one_based())?;
        s.serialize_field("product", &self.map.then_perm(&self.g).to_one_based())?;
        s.serialize_field("reason", &self.reason)?;
        s.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizingVerdict {
    pub group: String,
    pub map: Option<Transformation>,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// Strategy that settled the verdict; for sweeps, of the deciding map.
    pub strategy: Strategy,
    /// Conjugacy representatives examined (1 for a single map).
    pub representatives: u64,
    pub elapsed: Duration,
}

impl NormalizingVerdict {
    pub fn is_normalizing(&self) -> bool {
        self.verdict == Verdict::Normalizing
    }
}

impl Serialize for NormalizingVerdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("NormalizingVerdict", 6)?;
        s.serialize_field("group", &self.group)?;
        s.serialize_field("map", &self.map.map(|m| m.to_one_based()))?;
        s.serialize_field("verdict", &self.verdict)?;
        s.serialize_field("witness", &self.witness)?;
        s.serialize_field("strategy", &self.strategy)?;
        s.serialize_field("representatives", &self.representatives)?;
        s.end()
    }
}

/// Orbit of a set under `G` with transversal elements, and generators of
/// its setwise stabilizer.
#[derive(Debug)]
struct SetTransversal {
    orbit: Vec<(u32, Permutation)>,
    stabilizer: Vec<Permutation>,
}

/// Per-group state reused across maps: elements and cached set orbits.
pub struct Checker<'g> {
    group: &'g PermutationGroup,
    cap: usize,
    transversals: Vec<OnceLock<SetTransversal>>,
}

/// Outcome of one strategy on one map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stage {
    Pass,
    Fail(Permutation),
}

impl<'g> Checker<'g> {
    pub fn new(group: &'g PermutationGroup) -> Self {
        group.elements();
        Self {
            group,
            cap: DEFAULT_CAP,
            transversals: (0..1usize << group.degree())
                .map(|_| OnceLock::new())
                .collect(),
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn group(&self) -> &PermutationGroup {
        self.group
    }

    fn transversal(&self, mask: u32) -> &SetTransversal {
        self.transversals[mask as usize].get_or_init(|| {
            let gens = self.group.generators();
            let id = Permutation::identity(self.group.degree()).expect("valid degree");
            let mut orbit = vec![(mask, id)];
            let mut index = std::collections::HashMap::from([(mask, 0usize)]);
            let mut head = 0;
            while head < orbit.len() {
                let (b, t) = orbit[head];
                for g in gens {
                    let c = map_mask_perm(b, g);
                    if let std::collections::hash_map::Entry::Vacant(e) = index.entry(c) {
                        e.insert(orbit.len());
                        orbit.push((c, t.then(g)));
                    }
                }
                head += 1;
            }
            let mut seen = HashSet::new();
            let mut stabilizer = Vec::new();
            for &(b, t) in &orbit {
                for g in gens {
                    let c = map_mask_perm(b, g);
                    let u = t.then(g).then(&orbit[index[&c]].1.inverse());
                    if !u.is_identity() && seen.insert(u) {
                        stabilizer.push(u);
                    }
                }
            }
            SetTransversal { orbit, stabilizer }
        })
    }

    fn check_input(&self, a: &Transformation) -> Result<()> {
        if a.degree() != self.group.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.group.degree(),
                found: a.degree(),
            });
        }
        if a.is_permutation() {
            return Err(Error::NotSingular);
        }
        Ok(())
    }

    /// Some `h` with `im(a) h` a section of `ker(a)`.
    pub fn section_mapper(&self, a: &Transformation) -> Option<Permutation> {
        let kernel = a.kernel();
        let n = a.degree();
        self.transversal(a.image_mask())
            .orbit
            .iter()
            .find(|(b, _)| is_section(&PointSet::from_mask_unchecked(n, *b), &kernel))
            .map(|&(_, t)| t)
    }

    /// The distinct conjugates `h^-1 a h`, in element order.
    pub fn conjugates(&self, a: &Transformation) -> Vec<Transformation> {
        let mut seen = HashSet::new();
        self.group
            .elements()
            .iter()
            .map(|h| a.conjugate_by(h))
            .filter(|c| seen.insert(c.encode()))
            .collect()
    }

    /// Distinct right translates `a g` with the first `g` producing each.
    fn right_translates(&self, a: &Transformation) -> Vec<(Transformation, Permutation)> {
        let mut seen = HashSet::new();
        self.group
            .elements()
            .iter()
            .map(|g| (a.then_perm(g), *g))
            .filter(|(x, _)| seen.insert(x.encode()))
            .collect()
    }

    fn shortcut(&self, a: &Transformation, conjugates: &[Transformation]) -> Stage {
        let keys: HashSet<u64> = conjugates.iter().map(|c| c.encode()).collect();
        for (x, g) in self.right_translates(a) {
            if !keys.contains(&x.encode()) {
                return Stage::Fail(g);
            }
        }
        Stage::Pass
    }

    /// Tests `aG ⊆ R_a` coset by coset: `g = u t_B` with `u` stabilizing
    /// `im(a)` induces `u|im(a)` followed by the permutation of `t_B`.
    fn r_class(&self, a: &Transformation, cert: &RClassCertificate) -> Stage {
        let transversal = self.transversal(a.image_mask());
        for &(b, t) in &transversal.orbit {
            let ok = cert
                .orbit_position(b)
                .is_some_and(|m| cert.group_contains(cert.induced_return(&a.then_perm(&t), m)));
            if !ok {
                return Stage::Fail(t);
            }
        }
        for u in &transversal.stabilizer {
            if !cert.group_contains(cert.induced_return(&a.then_perm(u), 0)) {
                return Stage::Fail(*u);
            }
        }
        Stage::Pass
    }

    /// Exact membership of every `ag` not already certified by `cert`.
    fn fallback(
        &self,
        a: &Transformation,
        conjugates: &[Transformation],
        cert: Option<&RClassCertificate>,
        prune: bool,
    ) -> Result<Option<Stage>> {
        let min_rank = if prune { a.rank() } else { 0 };
        let mut layer = TransSemigroup::new(a.degree(), conjugates.to_vec())?
            .with_min_rank(min_rank)
            .with_cap(self.cap);
        for (x, g) in self.right_translates(a) {
            if cert.is_some_and(|c| c.in_r_class(&x)) {
                continue;
            }
            match layer.contains(&x)? {
                Membership::Member => {}
                Membership::NotMember => return Ok(Some(Stage::Fail(g))),
                Membership::Inconclusive => return Ok(None),
            }
        }
        Ok(Some(Stage::Pass))
    }

    /// Decides whether the group is `a`-normalizing.
    pub fn check(&self, a: &Transformation) -> Result<NormalizingVerdict> {
        self.check_input(a)?;
        let start = Instant::now();
        let finish =
            |verdict, strategy, witness: Option<(Permutation, FailureReason)>| NormalizingVerdict {
                group: self.group.label().to_string(),
                map: Some(*a),
                verdict,
                witness: witness.map(|(g, reason)| Witness { map: *a, g, reason }),
                strategy,
                representatives: 1,
                elapsed: start.elapsed(),
            };

        let conjugates = self.conjugates(a);
        if self.section_mapper(a).is_none() {
            return Ok(match self.shortcut(a, &conjugates) {
                Stage::Pass => finish(Verdict::Normalizing, Strategy::Shortcut, None),
                Stage::Fail(g) => finish(
                    Verdict::NotNormalizing,
                    Strategy::Shortcut,
                    Some((g, FailureReason::ConjugateMismatch)),
                ),
            });
        }

        let cert = RClassCertificate::new(&conjugates, a)?;
        if self.r_class(a, &cert) == Stage::Pass {
            return Ok(finish(Verdict::Normalizing, Strategy::RClass, None));
        }

        Ok(match self.fallback(a, &conjugates, Some(&cert), true)? {
            Some(Stage::Pass) => finish(Verdict::Normalizing, Strategy::Fallback, None),
            Some(Stage::Fail(g)) => finish(
                Verdict::NotNormalizing,
                Strategy::Fallback,
                Some((g, FailureReason::MembershipFailed)),
            ),
            None => finish(Verdict::Inconclusive, Strategy::Fallback, None),
        })
    }

    /// Whether `a g` lies in `<a^G>`, for replaying a single pair.
    pub fn check_pair(&self, a: &Transformation, g: &Permutation) -> Result<Membership> {
        self.check_input(a)?;
        if g.degree() != a.degree() {
            return Err(Error::DegreeMismatch {
                expected: a.degree(),
                found: g.degree(),
            });
        }
        let x = a.then_perm(g);
        let conjugates = self.conjugates(a);
        if conjugates.contains(&x) {
            return Ok(Membership::Member);
        }
        if self.section_mapper(a).is_none() {
            return Ok(Membership::NotMember);
        }
        let cert = RClassCertificate::new(&conjugates, a)?;
        if cert.in_r_class(&x) {
            return Ok(Membership::Member);
        }
        TransSemigroup::new(a.degree(), conjugates)?
            .with_min_rank(a.rank())
            .with_cap(self.cap)
            .contains(&x)
    }

    /// Runs a single strategy in isolation.
    ///
    /// `Shortcut` answers only when no section mapper exists. `RClass`
    /// answers `Normalizing` iff `aG` lies in the R-class of `a`, which is
    /// sufficient but not a priori necessary. `Fallback` is full membership
    /// by closure of `<a^G>` without rank pruning.
    pub fn decide_with(&self, a: &Transformation, strategy: Strategy) -> Result<Option<Verdict>> {
        self.check_input(a)?;
        let conjugates = self.conjugates(a);
        let verdict = |stage: Stage| match stage {
            Stage::Pass => Verdict::Normalizing,
            Stage::Fail(_) => Verdict::NotNormalizing,
        };
        Ok(match strategy {
            Strategy::Shortcut => match self.section_mapper(a) {
                Some(_) => None,
                None => Some(verdict(self.shortcut(a, &conjugates))),
            },
            Strategy::RClass => {
                let cert = RClassCertificate::new(&conjugates, a)?;
                Some(verdict(self.r_class(a, &cert)))
            }
            Strategy::Fallback => Some(
                self.fallback(a, &conjugates, None, false)?
                    .map(verdict)
                    .unwrap_or(Verdict::Inconclusive),
            ),
            Strategy::Analytic | Strategy::Witness => None,
        })
    }
}

/// Some `h` in `G` mapping `im(a)` to a section of `ker(a)`, if any.
pub fn exists_section_mapper(
    group: &PermutationGroup,
    a: &Transformation,
) -> Result<Option<Permutation>> {
    let checker = Checker::new(group);
    checker.check_input(a)?;
    Ok(checker.section_mapper(a))
}

/// Decides whether `group` is `a`-normalizing.
pub fn is_a_normalizing(
    group: &PermutationGroup,
    a: &Transformation,
) -> Result<NormalizingVerdict> {
    Checker::new(group).check(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;

    fn t(v: &[usize]) -> Transformation {
        Transformation::from_one_based(v).unwrap()
    }

    #[test]
    fn rejects_bad_maps() {
        let g = catalog("C5", 5).unwrap();
        assert_eq!(
            is_a_normalizing(&g, &Transformation::identity(5).unwrap()),
            Err(Error::NotSingular)
        );
        assert!(matches!(
            is_a_normalizing(&g, &t(&[1, 1, 2])),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn section_mapper_cases() {
        let e = t(&[1, 1, 3, 4, 1]);
        let c5 = catalog("C5", 5).unwrap();
        assert!(exists_section_mapper(&c5, &e).unwrap().is_some());
        let s5 = catalog("S", 5).unwrap();
        assert!(exists_section_mapper(&s5, &t(&[2, 2, 2, 1, 1]))
            .unwrap()
            .is_some());
    }

    #[test]
    fn c5_fails_on_its_witness() {
        let c5 = catalog("C5", 5).unwrap();
        let v = is_a_normalizing(&c5, &t(&[1, 1, 3, 4, 1])).unwrap();
        assert_eq!(v.verdict, Verdict::NotNormalizing);
        let w = v.witness.unwrap();
        let mut s = TransSemigroup::new(5, Checker::new(&c5).conjugates(&w.map)).unwrap();
        assert_eq!(
            s.contains(&w.map.then_perm(&w.g)).unwrap(),
            Membership::NotMember
        );
    }

    #[test]
    fn trivial_group_is_a_normalizing() {
        let one = catalog("1", 4).unwrap();
        let v = is_a_normalizing(&one, &t(&[2, 1, 1, 3])).unwrap();
        assert!(v.is_normalizing());
    }
}
