//! Parallel sweep driver.

use crate::catalog::{append_records, CatalogRecord, Status};
use crate::config::{SweepConfig, Task};
use crate::error::{io_error, HarnessError, Result};
use crate::records::{self, VerdictTask};
use itersum::{
    default_symmetries, sequence_leaders, subset_orbits, CorollaryKind, ExampleParams, Family,
    Group, GroupSubset, Sequence, Symmetries,
};
use rayon::prelude::*;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepCounts {
    pub checked: u64,
    pub passed: u64,
    pub failed: u64,
    pub not_applicable: u64,
    pub inconclusive: u64,
    /// Units not started before the time budget ran out.
    pub skipped: u64,
}

#[derive(Clone, Debug)]
pub struct SweepSummary {
    pub task: Task,
    pub counts: SweepCounts,
    pub wall: Duration,
    /// Sorted by key.
    pub records: Vec<CatalogRecord>,
}

enum Unit {
    Subset { a: GroupSubset, ns: Vec<usize> },
    Pair { a: GroupSubset, b: GroupSubset },
    Verdict { g: Group, task: VerdictTask },
    Sequence { s: Sequence },
    Constant { g: Group },
    Example { family: Family, g: Group },
}

fn all_subsets(g: &Group, dedup: bool) -> Result<Vec<GroupSubset>> {
    let sym = if dedup { default_symmetries(g) } else { Symmetries::identity(g) };
    Ok(subset_orbits(&sym)?.into_iter().map(|o| o.representative).collect())
}

fn n_values(config: &SweepConfig, default: impl Iterator<Item = usize>) -> Vec<usize> {
    config.n_values.clone().unwrap_or_else(|| default.collect())
}

fn triples(g: &Group, dedup: bool) -> Result<Vec<GroupSubset>> {
    let m = g.order();
    let mut out = Vec::new();
    let firsts = if dedup { 0..1.min(m) } else { 0..m };
    for x in firsts {
        for y in x + 1..m {
            for z in y + 1..m {
                out.push(GroupSubset::from_indices(g, &[x, y, z])?);
            }
        }
    }
    Ok(out)
}

fn units(config: &SweepConfig) -> Result<Vec<Unit>> {
    let mut out = Vec::new();
    for g in &config.groups {
        let exp = g.exponent();
        match config.task {
            Task::ClassifyMain | Task::Cor1 | Task::Cor2 => {
                let ns = if config.task == Task::ClassifyMain {
                    n_values(config, 3..=8)
                } else {
                    n_values(config, exp..=exp + 3)
                };
                for a in all_subsets(g, config.dedup)? {
                    out.push(Unit::Subset { a, ns: ns.clone() });
                }
            }
            Task::ClassifySize3 => {
                let ns = n_values(config, 3..=8.max(g.order() / 2 + 2));
                for a in triples(g, config.dedup)? {
                    out.push(Unit::Subset { a, ns: ns.clone() });
                }
            }
            Task::Elementary | Task::Kst | Task::Kneser => {
                let subsets = all_subsets(g, false)?;
                for a in &subsets {
                    for b in &subsets {
                        out.push(Unit::Pair {
                            a: a.clone(),
                            b: b.clone(),
                        });
                    }
                }
            }
            Task::Egz => out.push(Unit::Verdict {
                g: g.clone(),
                task: VerdictTask::Egz,
            }),
            Task::Olson => out.push(Unit::Verdict {
                g: g.clone(),
                task: VerdictTask::Olson,
            }),
            Task::MainOlson | Task::MainNSums => {
                let default = if config.task == Task::MainOlson { 2..=4 } else { 1..=4 };
                for n in n_values(config, default) {
                    for &item in &config.items {
                        let task = if config.task == Task::MainOlson {
                            VerdictTask::MainOlson { n, item }
                        } else {
                            VerdictTask::MainNSums {
                                n,
                                item,
                                extra: config.extra_lengths,
                            }
                        };
                        out.push(Unit::Verdict { g: g.clone(), task });
                    }
                }
            }
            Task::Lemma => {
                let sym = if config.dedup { default_symmetries(g) } else { Symmetries::identity(g) };
                for len in 1..=config.max_len {
                    for s in sequence_leaders(&sym, len, len, config.budget_nodes)? {
                        out.push(Unit::Sequence { s });
                    }
                }
            }
            Task::Davenport => out.push(Unit::Constant { g: g.clone() }),
            Task::Example => {
                for &family in &config.families {
                    out.push(Unit::Example { family, g: g.clone() });
                }
            }
        }
    }
    Ok(out)
}

fn evaluate(unit: &Unit, config: &SweepConfig) -> itersum::Result<Vec<CatalogRecord>> {
    let budget = config.budget_nodes;
    Ok(match unit {
        Unit::Subset { a, ns } => {
            let mut recs = Vec::with_capacity(ns.len());
            for &n in ns {
                recs.push(match config.task {
                    Task::ClassifyMain => records::classify_record(a, n, false)?,
                    Task::ClassifySize3 => records::classify_record(a, n, true)?,
                    Task::Cor1 => records::corollary_record(a, n, CorollaryKind::Cor1)?,
                    _ => records::corollary_record(a, n, CorollaryKind::Cor2)?,
                });
            }
            recs
        }
        Unit::Pair { a, b } => vec![match config.task {
            Task::Elementary => records::elementary_record(a, b)?,
            Task::Kst => records::kst_record(a, b)?,
            _ => records::kneser_record(&[a.clone(), b.clone()])?,
        }],
        Unit::Verdict { g, task } => vec![records::verdict_record(g, *task, budget)?],
        Unit::Sequence { s } => vec![records::lemma_record(s)?],
        Unit::Constant { g } => vec![records::davenport_record(g, budget)?],
        Unit::Example { family, g } => {
            vec![records::example_record(*family, g, &ExampleParams::default())?]
        }
    })
}

/// Runs the configured sweep. Record payloads and their order do not depend
/// on the worker count.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepSummary> {
    config.validate()?;
    let start = Instant::now();
    let deadline = config.budget_seconds.map(|s| start + Duration::from_secs(s));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| HarnessError::Usage(format!("cannot start {} workers: {e}", config.workers)))?;
    let units = units(config)?;
    let results: Vec<Option<itersum::Result<Vec<CatalogRecord>>>> = pool.install(|| {
        units
            .par_iter()
            .map(|u| {
                if deadline.is_some_and(|d| Instant::now() > d) {
                    None
                } else {
                    Some(evaluate(u, config))
                }
            })
            .collect()
    });
    let mut counts = SweepCounts::default();
    let mut records = Vec::new();
    for r in results {
        match r {
            None => counts.skipped += 1,
            Some(r) => records.extend(r?),
        }
    }
    records.sort_by(|a, b| a.key.cmp(&b.key));
    for r in &records {
        counts.checked += 1;
        match r.status {
            Status::Pass => counts.passed += 1,
            Status::Fail => counts.failed += 1,
            Status::NotApplicable => counts.not_applicable += 1,
            Status::Inconclusive => counts.inconclusive += 1,
        }
    }
    let summary = SweepSummary {
        task: config.task,
        counts,
        wall: start.elapsed(),
        records,
    };
    if let Some(path) = &config.out {
        persist(path, &summary.records)?;
    }
    if let Some(path) = &config.counterexamples {
        let failed: Vec<CatalogRecord> = summary
            .records
            .iter()
            .filter(|r| r.status == Status::Fail)
            .cloned()
            .collect();
        append_records(path, &failed)?;
    }
    Ok(summary)
}

pub fn partial_marker(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".partial");
    path.with_file_name(name)
}

/// Stages the records next to the catalog, then appends them. A leftover
/// `.partial` file marks an interrupted write.
pub fn persist(path: &Path, records: &[CatalogRecord]) -> Result<()> {
    let marker = partial_marker(path);
    if marker.exists() {
        std::fs::remove_file(&marker).map_err(io_error(format!("removing {}", marker.display())))?;
    }
    append_records(&marker, records)?;
    append_records(path, records)?;
    std::fs::remove_file(&marker).map_err(io_error(format!("removing {}", marker.display())))
}
