//! Structural pre-screens and the per-degree classification driver.

use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;

use super::fixtures::{find_failing_conjugate, known_witnesses};
use super::sweep::{is_normalizing, SweepOptions};
use super::{Checker, NormalizingVerdict, Strategy, Verdict};
use crate::catalog::{candidates, catalog, expected_normalizing};
use crate::error::{Error, Result};
use crate::groups::PermutationGroup;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomogeneityCheck {
    pub k: usize,
    /// `(k - 1, k)`-homogeneous.
    pub holds: bool,
    /// 1-based `(I, J)` with no element mapping `I` into `J`.
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
}

/// Necessary conditions for a nontrivial normalizing group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FilterReport {
    /// The trivial group is normalizing and exempt from the filters.
    pub trivial: bool,
    pub transitive: bool,
    pub primitive: bool,
    pub homogeneity: Vec<HomogeneityCheck>,
    /// First filter that failed, if any.
    pub rejected_by: Option<String>,
}

impl FilterReport {
    pub fn passes(&self) -> bool {
        self.rejected_by.is_none()
    }
}

/// Evaluates transitivity, primitivity and `(k - 1, k)`-homogeneity for
/// `2 <= k <= (n + 1) / 2`.
pub fn structural_filters(group: &PermutationGroup) -> Result<FilterReport> {
    let n = group.degree();
    let transitive = group.is_transitive();
    let primitive = transitive && group.is_primitive();
    let mut homogeneity = Vec::new();
    for k in 2..=n.div_ceil(2) {
        let h = group.is_ij_homogeneous(k - 1, k)?;
        homogeneity.push(HomogeneityCheck {
            k,
            holds: h.holds,
            witness: h.witness.map(|(i, j)| (i.to_one_based(), j.to_one_based())),
        });
    }
    let trivial = group.is_trivial();
    let rejected_by = if trivial {
        None
    } else if !transitive {
        Some("transitive".to_string())
    } else if !primitive {
        Some("primitive".to_string())
    } else {
        homogeneity
            .iter()
            .find(|h| !h.holds)
            .map(|h| format!("({},{})-homogeneous", h.k - 1, h.k))
    };
    Ok(FilterReport {
        trivial,
        transitive,
        primitive,
        homogeneity,
        rejected_by,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationEntry {
    pub label: String,
    pub order: usize,
    pub filters: FilterReport,
    pub verdict: NormalizingVerdict,
    pub expected_normalizing: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub degree: usize,
    pub entries: Vec<ClassificationEntry>,
    /// Labels found normalizing.
    pub normalizing: Vec<String>,
    /// Labels the classification lists as normalizing.
    pub expected: Vec<String>,
    /// Verdict set equals the expected set, with nothing inconclusive.
    pub matches: bool,
}

#[derive(Clone, Default)]
pub struct ClassifyOptions {
    pub sweep: SweepOptions,
    /// Try the known failing maps on conjugate copies before sweeping.
    pub use_witnesses: bool,
    /// Restrict to these labels (canonical spelling); all when `None`.
    pub only: Option<Vec<String>>,
    /// Directory for per-group progress caches.
    pub cache_dir: Option<PathBuf>,
}

impl std::fmt::Debug for ClassifyOptions {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ClassifyOptions")
            .field("sweep", &self.sweep)
            .field("use_witnesses", &self.use_witnesses)
            .field("only", &self.only)
            .field("cache_dir", &self.cache_dir)
            .finish()
    }
}

/// File name of the progress cache for a group and rank filter.
pub fn cache_file_name(degree: usize, label: &str, rank: Option<usize>) -> String {
    let clean: String = label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    match rank {
        Some(k) => format!("n{degree}-{clean}-k{k}.cache"),
        None => format!("n{degree}-{clean}.cache"),
    }
}

/// Decides one catalog group, trying known witnesses first when asked.
pub fn decide_group(
    group: &PermutationGroup,
    options: &ClassifyOptions,
) -> Result<NormalizingVerdict> {
    if options.use_witnesses {
        let start = Instant::now();
        let checker = Checker::new(group).with_cap(options.sweep.cap);
        for fixture in known_witnesses()
            .iter()
            .filter(|f| f.degree == group.degree() && f.groups.contains(&group.label()))
        {
            let map = crate::Transformation::from_one_based(fixture.map)?;
            if let Some(found) = find_failing_conjugate(&checker, &map)? {
                return Ok(NormalizingVerdict {
                    strategy: Strategy::Witness,
                    elapsed: start.elapsed(),
                    ..found.verdict
                });
            }
        }
    }
    let mut sweep = options.sweep.clone();
    if let Some(dir) = &options.cache_dir {
        std::fs::create_dir_all(dir)?;
        sweep.cache = Some(dir.join(cache_file_name(group.degree(), group.label(), None)));
    }
    is_normalizing(group, &sweep)
}

/// Runs the filters and the full decision for every candidate of degree
/// `4 <= n <= 9`, and compares with the known classification.
pub fn classify(n: usize, options: &ClassifyOptions) -> Result<ClassificationReport> {
    if !(4..=9).contains(&n) {
        return Err(Error::Unsupported(format!(
            "classification covers degrees 4 to 9, not {n}"
        )));
    }
    let expected = expected_normalizing(n);
    let mut entries = Vec::new();
    for entry in candidates(n) {
        if let Some(only) = &options.only {
            if !only.contains(&entry.label) {
                continue;
            }
        }
        let group = catalog(&entry.label, n)?;
        let filters = structural_filters(&group)?;
        let verdict = decide_group(&group, options)?;
        entries.push(ClassificationEntry {
            expected_normalizing: expected.contains(&entry.label),
            label: entry.label,
            order: group.order(),
            filters,
            verdict,
        });
    }
    let normalizing: Vec<String> = entries
        .iter()
        .filter(|e| e.verdict.verdict == Verdict::Normalizing)
        .map(|e| e.label.clone())
        .collect();
    let matches = entries.iter().all(|e| {
        e.verdict.verdict != Verdict::Inconclusive
            && (e.verdict.verdict == Verdict::Normalizing) == e.expected_normalizing
    });
    Ok(ClassificationReport {
        degree: n,
        entries,
        normalizing,
        expected,
        matches,
    })
}
