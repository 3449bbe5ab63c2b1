//! Command-line front end for the normalizing-group library.

use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use normcore::catalog::{candidates, canonical_label, catalog, display_label};
use normcore::normalizing::{
    cache_file_name, check_preferring_known, classify, conjugacy_orbit_reps, is_k_normalizing,
    is_normalizing, structural_filters, Checker, ClassificationReport, ClassifyOptions,
    FilterReport, NormalizingVerdict, Progress, ProgressFn, SweepOptions, Verdict,
    DEFAULT_BITMAP_LIMIT,
};
use normcore::parse::{parse_generator_file, parse_permutation, parse_transformation};
use normcore::semigroups::{Membership, DEFAULT_CAP};
use normcore::PermutationGroup;

const SCHEMA: u32 = 1;
const CACHE_DIR_ENV: &str = "NORMALIZING_CACHE_DIR";

#[derive(Parser, Debug)]
#[command(
    name = "normalizing",
    version,
    about = "Decide whether permutation groups are normalizing"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Table)]
    format: Format,
    /// Worker threads for sweeps (defaults to the available parallelism).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    workers: Option<u32>,
    /// Cap on the number of elements a closure may hold.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Include wall-clock timings in the report (json output is then no
    /// longer reproducible byte for byte).
    #[arg(long, global = true)]
    timings: bool,
    /// Seconds between progress lines on stderr during sweeps; 0 disables.
    #[arg(long, global = true, default_value_t = 10)]
    progress: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a group is a-normalizing for one map, or replay a
    /// single pair (a, g) with --element.
    Check {
        #[command(flatten)]
        target: Target,
        /// Map as a 1-based image list, e.g. 1,1,3,4,1.
        #[arg(long)]
        map: String,
        /// Only test whether a*g lies in the semigroup generated by the
        /// conjugates of a.
        #[arg(long)]
        element: Option<String>,
    },
    /// Decide every candidate group of a degree and compare with the known
    /// classification.
    Classify {
        /// Degree, from 4 to 9.
        #[arg(long)]
        degree: usize,
        /// Directory of per-group progress caches.
        #[arg(long, alias = "resume", env = CACHE_DIR_ENV)]
        cache: Option<PathBuf>,
        /// Restrict to these groups.
        #[arg(long = "only")]
        only: Vec<String>,
        /// Sweep every group instead of trying known failing maps first.
        #[arg(long)]
        no_witnesses: bool,
    },
    /// Decide whether a group is normalizing (every singular map).
    Normalizing {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Decide whether a group is k-normalizing (every map of rank k).
    KNormalizing {
        #[command(flatten)]
        target: Target,
        /// Rank k of the maps to check, 1 <= k < degree.
        #[arg(long)]
        rank: usize,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// List conjugacy representatives of singular maps.
    Reps {
        #[command(flatten)]
        target: Target,
        /// Only maps of this rank.
        #[arg(long)]
        rank: Option<usize>,
        /// Write to this file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Catalog operations.
    Groups {
        #[command(subcommand)]
        action: GroupsAction,
    },
    /// Transitivity, primitivity and homogeneity pre-screens.
    Filters {
        #[command(flatten)]
        target: Target,
    },
}

#[derive(Subcommand, Debug)]
enum GroupsAction {
    /// List the candidate groups of a degree with their orders.
    List {
        /// Degree of the catalog to list.
        #[arg(long)]
        degree: usize,
    },
}

#[derive(Args, Debug)]
struct Target {
    /// Number of points acted on.
    #[arg(long)]
    degree: usize,
    /// Catalog label, or a path to a generator file.
    #[arg(long)]
    group: String,
}

#[derive(Args, Debug)]
struct CacheArgs {
    /// Progress cache file; resumed from when it exists.
    #[arg(long, alias = "resume")]
    cache: Option<PathBuf>,
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    schema: u32,
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<u128>,
    report: T,
}

struct Output {
    format: Format,
    timings: bool,
    start: Instant,
}

impl Output {
    fn emit<T: Serialize>(
        &self,
        command: &'static str,
        report: &T,
        table: impl FnOnce() -> String,
    ) -> Result<()> {
        let mut out = std::io::stdout().lock();
        match self.format {
            Format::Json => {
                let envelope = Envelope {
                    schema: SCHEMA,
                    command,
                    elapsed_ms: self.timings.then(|| self.start.elapsed().as_millis()),
                    report,
                };
                serde_json::to_writer_pretty(&mut out, &envelope)?;
                writeln!(out)?;
            }
            Format::Table => {
                write!(out, "{}", table())?;
                if self.timings {
                    writeln!(out, "elapsed   {:.3}s", self.start.elapsed().as_secs_f64())?;
                }
            }
        }
        Ok(())
    }
}

fn load_group(target: &Target) -> Result<PermutationGroup> {
    let path = Path::new(&target.group);
    if path.is_file() {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let gens = parse_generator_file(&text, target.degree)
            .with_context(|| format!("in {}", path.display()))?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        return Ok(PermutationGroup::new(label, target.degree, gens)?);
    }
    let group = catalog(&target.group, target.degree)?;
    let label = display_label(group.label(), target.degree);
    Ok(group.with_label(label))
}

fn sweep_options(cli: &Cli, cache: Option<PathBuf>) -> SweepOptions {
    let workers = cli
        .workers
        .map(|w| w as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let progress: Option<ProgressFn> = (cli.progress > 0).then(|| {
        Arc::new(|p: &Progress| {
            let secs = p.elapsed.as_secs_f64().max(1e-9);
            eprintln!(
                "progress: {} representatives, scanned {}/{} ({:.2}%), {:.0} reps/s",
                p.representatives,
                p.cursor,
                p.total,
                100.0 * p.cursor as f64 / p.total as f64,
                p.representatives as f64 / secs
            );
        }) as ProgressFn
    });
    SweepOptions {
        workers,
        cap: cli.cap,
        bitmap_limit: DEFAULT_BITMAP_LIMIT,
        cache,
        progress,
        progress_interval: Duration::from_secs(cli.progress.max(1)),
        ..SweepOptions::default()
    }
}

fn default_cache(
    explicit: Option<PathBuf>,
    degree: usize,
    label: &str,
    rank: Option<usize>,
) -> Option<PathBuf> {
    explicit.or_else(|| {
        let dir = PathBuf::from(std::env::var_os(CACHE_DIR_ENV)?);
        std::fs::create_dir_all(&dir).ok()?;
        Some(dir.join(cache_file_name(degree, label, rank)))
    })
}

fn verdict_exit(v: Verdict) -> ExitCode {
    match v {
        Verdict::Normalizing => ExitCode::SUCCESS,
        Verdict::NotNormalizing => ExitCode::from(1),
        Verdict::Inconclusive => ExitCode::from(2),
    }
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Normalizing => "normalizing",
        Verdict::NotNormalizing => "not normalizing",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn verdict_table(v: &NormalizingVerdict, order: usize, degree: usize) -> String {
    let mut s = format!("group     {} (degree {degree}, order {order})\n", v.group);
    if let Some(m) = &v.map {
        s += &format!("map       {m}\n");
    }
    s += &format!("verdict   {}\n", verdict_word(v.verdict));
    s += &format!(
        "strategy  {}\n",
        serde_json::to_value(v.strategy)
            .unwrap_or_default()
            .as_str()
            .unwrap_or("")
    );
    if v.map.is_none() {
        s += &format!("reps      {}\n", v.representatives);
    }
    if let Some(w) = &v.witness {
        s += &format!("witness   a = {}\n", w.map);
        s += &format!("          g = {}  [{}]\n", w.g, join(&w.g.to_one_based()));
        s += &format!(
            "          a*g = {} is not in <a^G>\n",
            w.map.then_perm(&w.g)
        );
    }
    s
}

#[derive(Serialize)]
struct PairReport {
    group: String,
    map: Vec<usize>,
    g: String,
    g_images: Vec<usize>,
    product: Vec<usize>,
    member: Option<bool>,
}

fn cmd_check(
    ctx: &Output,
    cli: &Cli,
    target: &Target,
    map: &str,
    element: Option<&str>,
) -> Result<ExitCode> {
    let group = load_group(target)?;
    let a = parse_transformation(map).context("parsing --map")?;
    if a.degree() != target.degree {
        bail!(
            "map has degree {} but --degree is {}",
            a.degree(),
            target.degree
        );
    }
    let checker = Checker::new(&group).with_cap(cli.cap);
    if let Some(text) = element {
        let g = parse_permutation(text, target.degree).context("parsing --element")?;
        let member = match checker.check_pair(&a, &g)? {
            Membership::Member => Some(true),
            Membership::NotMember => Some(false),
            Membership::Inconclusive => None,
        };
        let report = PairReport {
            group: group.label().to_string(),
            map: a.to_one_based(),
            g: g.to_string(),
            g_images: g.to_one_based(),
            product: a.then_perm(&g).to_one_based(),
            member,
        };
        ctx.emit("check", &report, || {
            let answer = match member {
                Some(true) => "in <a^G>",
                Some(false) => "not in <a^G>",
                None => "undecided (closure cap reached)",
            };
            format!(
                "group     {}\nmap       {a}\nelement   {g}\nproduct   {} {answer}\n",
                group.label(),
                a.then_perm(&g)
            )
        })?;
        return Ok(match member {
            Some(true) => ExitCode::SUCCESS,
            Some(false) => ExitCode::from(1),
            None => ExitCode::from(2),
        });
    }
    let verdict = check_preferring_known(&checker, &a)?;
    ctx.emit("check", &verdict, || {
        verdict_table(&verdict, group.order(), target.degree)
    })?;
    Ok(verdict_exit(verdict.verdict))
}

fn cmd_sweep(
    ctx: &Output,
    cli: &Cli,
    target: &Target,
    rank: Option<usize>,
    cache: Option<PathBuf>,
) -> Result<ExitCode> {
    let group = load_group(target)?;
    let cache = default_cache(cache, target.degree, group.label(), rank);
    let options = sweep_options(cli, cache);
    let (command, verdict) = match rank {
        Some(k) => ("k-normalizing", is_k_normalizing(&group, k, &options)?),
        None => ("normalizing", is_normalizing(&group, &options)?),
    };
    ctx.emit(command, &verdict, || {
        verdict_table(&verdict, group.order(), target.degree)
    })?;
    Ok(verdict_exit(verdict.verdict))
}

fn classify_table(report: &ClassificationReport) -> String {
    let mut s = format!(
        "{:<14} {:>8}  {:<22} {:<16} {:<10} {}\n",
        "group", "order", "filters", "verdict", "strategy", "expected"
    );
    for e in &report.entries {
        let label = display_label(&e.label, report.degree);
        let filters = e
            .filters
            .rejected_by
            .clone()
            .map_or("pass".to_string(), |f| format!("fails {f}"));
        let strategy = serde_json::to_value(e.verdict.strategy).unwrap_or_default();
        s += &format!(
            "{:<14} {:>8}  {:<22} {:<16} {:<10} {}\n",
            label,
            e.order,
            filters,
            verdict_word(e.verdict.verdict),
            strategy.as_str().unwrap_or(""),
            if e.expected_normalizing {
                "normalizing"
            } else {
                "not normalizing"
            }
        );
        if let Some(w) = &e.verdict.witness {
            s += &format!("{:<14} witness a = {}, g = {}\n", "", w.map, w.g);
        }
    }
    let names: Vec<String> = report
        .normalizing
        .iter()
        .map(|l| display_label(l, report.degree))
        .collect();
    s += &format!("normalizing: {}\n", names.join(", "));
    s += &format!(
        "matches classification: {}\n",
        if report.matches { "yes" } else { "no" }
    );
    s
}

fn cmd_classify(
    ctx: &Output,
    cli: &Cli,
    degree: usize,
    cache: Option<PathBuf>,
    only: &[String],
    no_witnesses: bool,
) -> Result<ExitCode> {
    let only = (!only.is_empty()).then(|| {
        candidates(degree)
            .into_iter()
            .filter(|c| {
                only.iter()
                    .any(|l| canonical_label(l) == canonical_label(&c.label))
            })
            .map(|c| c.label)
            .collect()
    });
    let options = ClassifyOptions {
        sweep: sweep_options(cli, None),
        use_witnesses: !no_witnesses,
        only,
        cache_dir: cache,
    };
    let report = classify(degree, &options)?;
    ctx.emit("classify", &report, || classify_table(&report))?;
    let inconclusive = report
        .entries
        .iter()
        .any(|e| e.verdict.verdict == Verdict::Inconclusive);
    Ok(if inconclusive {
        ExitCode::from(2)
    } else if report.matches {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[derive(Serialize)]
struct RepLine {
    map: Vec<usize>,
    rank: usize,
    orbit_size: u64,
}

#[derive(Serialize)]
struct RepsReport {
    group: String,
    degree: usize,
    rank: Option<usize>,
    count: usize,
    representatives: Vec<RepLine>,
}

fn cmd_reps(
    ctx: &Output,
    target: &Target,
    rank: Option<usize>,
    output: Option<&Path>,
) -> Result<ExitCode> {
    let group = load_group(target)?;
    if let Some(k) = rank {
        if k == 0 || k >= target.degree {
            bail!("rank must lie in 1..{}", target.degree);
        }
    }
    let reps = conjugacy_orbit_reps(&group, rank)?;
    let report = RepsReport {
        group: group.label().to_string(),
        degree: target.degree,
        rank,
        count: reps.len(),
        representatives: reps
            .iter()
            .map(|r| RepLine {
                map: r.map.to_one_based(),
                rank: r.map.rank(),
                orbit_size: r.orbit_size,
            })
            .collect(),
    };
    let table = || {
        let mut s = String::new();
        for r in &report.representatives {
            s += &format!(
                "{}\trank {}\torbit {}\n",
                join(&r.map),
                r.rank,
                r.orbit_size
            );
        }
        s += &format!("{} representatives\n", report.count);
        s
    };
    match output {
        Some(path) => {
            let file = std::fs::File::create(path)
                .with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            match ctx.format {
                Format::Json => {
                    let envelope = Envelope {
                        schema: SCHEMA,
                        command: "reps",
                        elapsed_ms: None,
                        report: &report,
                    };
                    serde_json::to_writer_pretty(&mut w, &envelope)?;
                    writeln!(w)?;
                }
                Format::Table => write!(w, "{}", table())?,
            }
            w.flush()?;
            eprintln!(
                "wrote {} representatives to {}",
                report.count,
                path.display()
            );
        }
        None => ctx.emit("reps", &report, table)?,
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct GroupLine {
    label: String,
    degree: usize,
    order: u64,
}

fn cmd_groups_list(ctx: &Output, degree: usize) -> Result<ExitCode> {
    if degree == 0 || degree > normcore::MAX_DEGREE {
        bail!("degree must lie in 1..={}", normcore::MAX_DEGREE);
    }
    let lines: Vec<GroupLine> = candidates(degree)
        .into_iter()
        .map(|c| GroupLine {
            label: display_label(&c.label, degree),
            degree,
            order: c.order,
        })
        .collect();
    ctx.emit("groups list", &lines, || {
        let mut s = String::new();
        for l in &lines {
            s += &format!("{:<14} order {}\n", l.label, l.order);
        }
        s
    })?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct FiltersOut<'a> {
    group: &'a str,
    order: usize,
    #[serde(flatten)]
    filters: &'a FilterReport,
}

fn cmd_filters(ctx: &Output, target: &Target) -> Result<ExitCode> {
    let group = load_group(target)?;
    let filters = structural_filters(&group)?;
    let out = FiltersOut {
        group: group.label(),
        order: group.order(),
        filters: &filters,
    };
    ctx.emit("filters", &out, || {
        let yes = |b: bool| if b { "true" } else { "false" };
        let mut s = format!("group       {} (order {})\n", group.label(), group.order());
        s += &format!("transitive  {}\n", yes(filters.transitive));
        s += &format!("primitive   {}\n", yes(filters.primitive));
        for h in &filters.homogeneity {
            s += &format!("({},{})-homogeneous  {}", h.k - 1, h.k, yes(h.holds));
            if let Some((i, j)) = &h.witness {
                s += &format!("  (no element maps {{{}}} into {{{}}})", join(i), join(j));
            }
            s += "\n";
        }
        s += &match &filters.rejected_by {
            None => "passes all filters\n".to_string(),
            Some(f) => format!("rejected by {f}\n"),
        };
        s
    })?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let ctx = Output {
        format: cli.format,
        timings: cli.timings,
        start: Instant::now(),
    };
    match &cli.command {
        Command::Check {
            target,
            map,
            element,
        } => cmd_check(&ctx, cli, target, map, element.as_deref()),
        Command::Classify {
            degree,
            cache,
            only,
            no_witnesses,
        } => cmd_classify(&ctx, cli, *degree, cache.clone(), only, *no_witnesses),
        Command::Normalizing { target, cache } => {
            cmd_sweep(&ctx, cli, target, None, cache.cache.clone())
        }
        Command::KNormalizing {
            target,
            rank,
            cache,
        } => cmd_sweep(&ctx, cli, target, Some(*rank), cache.cache.clone()),
        Command::Reps {
            target,
            rank,
            output,
        } => cmd_reps(&ctx, target, *rank, output.as_deref()),
        Command::Groups {
            action: GroupsAction::List { degree },
        } => cmd_groups_list(&ctx, *degree),
        Command::Filters { target } => cmd_filters(&ctx, target),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
