//! Sweeps over conjugacy representatives, in parallel batches.
//!
//! Representatives are drawn from the bitmap enumeration in increasing
//! encoding order, checked in batches, and the first failure in encoding
//! order decides. The result does not depend on the worker count.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::reps::{BitmapIndex, RepEnumerator, Representative, DEFAULT_BITMAP_LIMIT};
use super::{Checker, NormalizingVerdict, Strategy, Verdict};
use crate::cache::{self, CacheHeader, CacheState};
use crate::catalog::group_digest;
use crate::error::{Error, Result};
use crate::groups::PermutationGroup;
use crate::semigroups::DEFAULT_CAP;

#[derive(Debug, Clone, Copy)]
pub struct Progress {
    pub representatives: u64,
    /// Next encoding to scan.
    pub cursor: u64,
    /// `n^n`.
    pub total: u64,
    pub elapsed: Duration,
}

/// Callback receiving periodic progress snapshots.
pub type ProgressFn = Arc<dyn Fn(&Progress) + Send + Sync>;

#[derive(Clone)]
pub struct SweepOptions {
    pub workers: usize,
    pub batch: usize,
    pub cap: usize,
    pub bitmap_limit: u64,
    /// Progress cache: resumed from when present, rewritten periodically.
    pub cache: Option<PathBuf>,
    pub save_interval: Duration,
    pub progress: Option<ProgressFn>,
    pub progress_interval: Duration,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            workers: 1,
            batch: 1024,
            cap: DEFAULT_CAP,
            bitmap_limit: DEFAULT_BITMAP_LIMIT,
            cache: None,
            save_interval: Duration::from_secs(60),
            progress: None,
            progress_interval: Duration::from_secs(10),
        }
    }
}

impl std::fmt::Debug for SweepOptions {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SweepOptions")
            .field("workers", &self.workers)
            .field("batch", &self.batch)
            .field("cap", &self.cap)
            .field("cache", &self.cache)
            .finish()
    }
}

fn strategy_weight(s: Strategy) -> u8 {
    match s {
        Strategy::Analytic => 0,
        Strategy::Shortcut => 1,
        Strategy::RClass => 2,
        Strategy::Fallback => 3,
        Strategy::Witness => 4,
    }
}

fn strategy_from_weight(w: u8) -> Strategy {
    match w {
        1 => Strategy::Shortcut,
        2 => Strategy::RClass,
        3 => Strategy::Fallback,
        4 => Strategy::Witness,
        _ => Strategy::Analytic,
    }
}

fn analytic(group: &PermutationGroup, start: Instant) -> NormalizingVerdict {
    NormalizingVerdict {
        group: group.label().to_string(),
        map: None,
        verdict: Verdict::Normalizing,
        witness: None,
        strategy: Strategy::Analytic,
        representatives: 0,
        elapsed: start.elapsed(),
    }
}

/// Checks every representative of the given rank (all singular ranks when
/// `rank` is `None`). Rank-1 maps are constants, for which `aG` consists of
/// constants and lies in `<a^G>`; they are passed without a check, as is
/// every map for the trivial group.
pub fn sweep(
    group: &PermutationGroup,
    rank: Option<usize>,
    options: &SweepOptions,
) -> Result<NormalizingVerdict> {
    let start = Instant::now();
    let n = group.degree();
    if let Some(k) = rank {
        if k == 0 || k >= n {
            return Err(Error::InvalidRank { rank: k, degree: n });
        }
    }
    if group.is_trivial() || rank == Some(1) {
        return Ok(analytic(group, start));
    }

    let header = CacheHeader {
        degree: n,
        label: group.label().to_string(),
        digest: group_digest(group),
        rank: rank.unwrap_or(0),
    };
    let state = match &options.cache {
        Some(path) if path.exists() => cache::load(path, &header)?,
        _ => CacheState {
            bitmap: BitmapIndex::new(n, options.bitmap_limit)?,
            cursor: 0,
            representatives: 0,
            complete: false,
            strategy: 0,
        },
    };
    if state.complete {
        return Ok(NormalizingVerdict {
            representatives: state.representatives,
            strategy: strategy_from_weight(state.strategy),
            ..analytic(group, start)
        });
    }

    let checker = Checker::new(group).with_cap(options.cap);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers.max(1))
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;
    let mut enumerator = RepEnumerator::resume(group, rank, state.bitmap, state.cursor);
    let mut representatives = state.representatives;
    let mut strategy = state.strategy;
    let mut inconclusive: Option<NormalizingVerdict> = None;
    let mut last_save = Instant::now();
    let mut last_progress = Instant::now();
    let total = enumerator.bitmap().len();

    loop {
        let batch: Vec<Representative> = enumerator.by_ref().take(options.batch.max(1)).collect();
        if batch.is_empty() {
            break;
        }
        let results: Vec<Result<Option<NormalizingVerdict>>> = pool.install(|| {
            batch
                .par_iter()
                .map(|rep| {
                    if rep.map.rank() == 1 {
                        Ok(None)
                    } else {
                        checker.check(&rep.map).map(Some)
                    }
                })
                .collect()
        });
        for result in results {
            representatives += 1;
            let Some(v) = result? else { continue };
            strategy = strategy.max(strategy_weight(v.strategy));
            match v.verdict {
                Verdict::Normalizing => {}
                Verdict::NotNormalizing => {
                    return Ok(NormalizingVerdict {
                        representatives,
                        elapsed: start.elapsed(),
                        ..v
                    });
                }
                Verdict::Inconclusive => {
                    if inconclusive.is_none() {
                        inconclusive = Some(v);
                    }
                }
            }
        }

        if let Some(report) = &options.progress {
            if last_progress.elapsed() >= options.progress_interval {
                report(&Progress {
                    representatives,
                    cursor: enumerator.cursor(),
                    total,
                    elapsed: start.elapsed(),
                });
                last_progress = Instant::now();
            }
        }
        if let Some(path) = &options.cache {
            if last_save.elapsed() >= options.save_interval {
                cache::save(
                    path,
                    &header,
                    enumerator.bitmap(),
                    enumerator.cursor(),
                    representatives,
                    false,
                    strategy,
                )?;
                last_save = Instant::now();
            }
        }
    }

    if let Some(v) = inconclusive {
        return Ok(NormalizingVerdict {
            representatives,
            elapsed: start.elapsed(),
            ..v
        });
    }
    let cursor = enumerator.cursor();
    let bitmap = enumerator.into_bitmap();
    if let Some(path) = &options.cache {
        cache::save(
            path,
            &header,
            &bitmap,
            cursor.max(total),
            representatives,
            true,
            strategy,
        )?;
    }
    Ok(NormalizingVerdict {
        group: group.label().to_string(),
        map: None,
        verdict: Verdict::Normalizing,
        witness: None,
        strategy: strategy_from_weight(strategy),
        representatives,
        elapsed: start.elapsed(),
    })
}

/// Whether the group is `a`-normalizing for every map of rank `k`.
pub fn is_k_normalizing(
    group: &PermutationGroup,
    k: usize,
    options: &SweepOptions,
) -> Result<NormalizingVerdict> {
    sweep(group, Some(k), options)
}

/// Whether the group is `a`-normalizing for every singular map.
pub fn is_normalizing(
    group: &PermutationGroup,
    options: &SweepOptions,
) -> Result<NormalizingVerdict> {
    sweep(group, None, options)
}
