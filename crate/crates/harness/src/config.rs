//! Sweep configuration files.
//!
//! One `key = value` pair per line. `#` starts a comment. Values that take a
//! list are comma separated; integer lists also accept inclusive ranges
//! `a..b`. Commas inside `[...]` or `(...)` do not split.
//!
//! ```text
//! task     = classify_main
//! orders   = 1..8          # every group of these orders
//! groups   = C2xC4, [3,3]  # and these
//! n        = 3..6
//! workers  = 4
//! ```
//!
//! | key              | value                                            |
//! |------------------|--------------------------------------------------|
//! | `task`           | one of [`Task::ALL`] (required)                  |
//! | `groups`         | group literals                                   |
//! | `orders`         | integer list                                     |
//! | `n`              | integer list; defaults depend on the task         |
//! | `items`          | theorem items for `t12`/`t15` (default `1..4`)   |
//! | `families`       | extremal families for `example` (default all)    |
//! | `max_len`        | longest sequence for `lemma41` (default 8)       |
//! | `extra_lengths`  | extra lengths swept by `t15` (default 0)         |
//! | `workers`        | worker threads (default: available parallelism)  |
//! | `budget_nodes`   | node budget per instance                         |
//! | `budget_seconds` | wall-clock budget for the whole sweep            |
//! | `dedup`          | `true`/`false`, symmetry reduction (default on)  |
//! | `out`            | catalog path                                     |
//! | `counterexamples`| path receiving failing records                   |

use crate::error::{io_error, HarnessError, Result};
use itersum::{groups_of_order, parse_group, Family, Group, DEFAULT_NODE_BUDGET};
use std::path::{Path, PathBuf};

/// Largest order for sweeps that enumerate subsets or sequences.
pub const EXHAUSTIVE_ORDER_CAP: usize = 16;
/// Largest order for sweeps over pairs of subsets.
pub const PAIR_ORDER_CAP: usize = 10;
/// Largest order for sweeps over single instances per group.
pub const INSTANCE_ORDER_CAP: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Task {
    ClassifyMain,
    ClassifySize3,
    Elementary,
    Kst,
    Kneser,
    Egz,
    Olson,
    MainOlson,
    MainNSums,
    Cor1,
    Cor2,
    Lemma,
    Davenport,
    Example,
}

impl Task {
    pub const ALL: [(&'static str, Task); 14] = [
        ("classify_main", Task::ClassifyMain),
        ("classify_size3", Task::ClassifySize3),
        ("elementary", Task::Elementary),
        ("kst", Task::Kst),
        ("kneser", Task::Kneser),
        ("egz", Task::Egz),
        ("olson", Task::Olson),
        ("t12", Task::MainOlson),
        ("t15", Task::MainNSums),
        ("cor1", Task::Cor1),
        ("cor2", Task::Cor2),
        ("lemma41", Task::Lemma),
        ("davenport", Task::Davenport),
        ("example", Task::Example),
    ];

    pub fn parse(s: &str) -> Option<Task> {
        Self::ALL.iter().find(|(name, _)| *name == s).map(|&(_, t)| t)
    }

    pub fn name(self) -> &'static str {
        Self::ALL.iter().find(|(_, t)| *t == self).unwrap().0
    }

    pub fn order_cap(self) -> usize {
        match self {
            Task::ClassifySize3 | Task::Example => INSTANCE_ORDER_CAP,
            Task::Elementary | Task::Kst | Task::Kneser => PAIR_ORDER_CAP,
            _ => EXHAUSTIVE_ORDER_CAP,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub task: Task,
    /// Resolved and deduplicated, ordered by order then invariant factors.
    pub groups: Vec<Group>,
    /// `None` means the task default for each group.
    pub n_values: Option<Vec<usize>>,
    pub items: Vec<u8>,
    pub families: Vec<Family>,
    pub max_len: usize,
    pub extra_lengths: usize,
    pub workers: usize,
    pub budget_nodes: u64,
    pub budget_seconds: Option<u64>,
    pub dedup: bool,
    pub out: Option<PathBuf>,
    pub counterexamples: Option<PathBuf>,
}

impl SweepConfig {
    pub fn new(task: Task, groups: Vec<Group>) -> Self {
        let mut c = SweepConfig {
            task,
            groups,
            n_values: None,
            items: vec![1, 2, 3, 4],
            families: Family::ALL.to_vec(),
            max_len: 8,
            extra_lengths: 0,
            workers: default_workers(),
            budget_nodes: DEFAULT_NODE_BUDGET,
            budget_seconds: None,
            dedup: true,
            out: None,
            counterexamples: None,
        };
        c.normalize_groups();
        c
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(io_error(format!("reading {}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut task = None;
        let mut groups = Vec::new();
        let mut n_values = None;
        let mut items = None;
        let mut families = None;
        let mut max_len = None;
        let mut extra = None;
        let mut workers = None;
        let mut budget_nodes = None;
        let mut budget_seconds = None;
        let mut dedup = None;
        let mut out = None;
        let mut counter = None;
        let mut seen = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| HarnessError::Config { line, message };
            let body = raw.split('#').next().unwrap().trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| err("expected 'key = value'".into()))?;
            let (key, value) = (key.trim(), value.trim());
            if seen.contains(&key.to_string()) {
                return Err(err(format!("duplicate key '{key}'")));
            }
            seen.push(key.to_string());
            match key {
                "task" => {
                    task = Some(Task::parse(value).ok_or_else(|| err(format!("unknown task '{value}'")))?)
                }
                "groups" => {
                    for lit in split_list(value) {
                        groups.push(parse_group(lit).map_err(|e| err(format!("group '{lit}': {e}")))?);
                    }
                }
                "orders" => {
                    for m in int_list(value).map_err(err)? {
                        groups.extend(groups_of_order(m as usize));
                    }
                }
                "n" => n_values = Some(int_list(value).map_err(err)?.into_iter().map(|v| v as usize).collect()),
                "items" => {
                    let v = int_list(value).map_err(err)?;
                    if let Some(bad) = v.iter().find(|&&k| !(1..=4).contains(&k)) {
                        return Err(err(format!("item {bad} is not one of 1..4")));
                    }
                    items = Some(v.into_iter().map(|k| k as u8).collect());
                }
                "families" => {
                    let mut fs = Vec::new();
                    for f in split_list(value) {
                        fs.push(Family::parse(f).ok_or_else(|| err(format!("unknown family '{f}'")))?);
                    }
                    families = Some(fs);
                }
                "max_len" => max_len = Some(positive(value).map_err(err)? as usize),
                "extra_lengths" => extra = Some(integer(value).map_err(err)? as usize),
                "workers" => workers = Some(positive(value).map_err(err)? as usize),
                "budget_nodes" => budget_nodes = Some(positive(value).map_err(err)?),
                "budget_seconds" => budget_seconds = Some(positive(value).map_err(err)?),
                "dedup" => {
                    dedup = Some(match value {
                        "true" | "yes" | "on" => true,
                        "false" | "no" | "off" => false,
                        _ => return Err(err(format!("expected true or false, got '{value}'"))),
                    })
                }
                "out" => out = Some(PathBuf::from(value)),
                "counterexamples" => counter = Some(PathBuf::from(value)),
                _ => return Err(err(format!("unknown key '{key}'"))),
            }
        }
        let task = task.ok_or(HarnessError::Config {
            line: 0,
            message: "missing required key 'task'".into(),
        })?;
        let mut c = SweepConfig::new(task, groups);
        c.n_values = n_values;
        if let Some(v) = items {
            c.items = v;
        }
        if let Some(v) = families {
            c.families = v;
        }
        if let Some(v) = max_len {
            c.max_len = v;
        }
        if let Some(v) = extra {
            c.extra_lengths = v;
        }
        if let Some(v) = workers {
            c.workers = v;
        }
        if let Some(v) = budget_nodes {
            c.budget_nodes = v;
        }
        c.budget_seconds = budget_seconds;
        if let Some(v) = dedup {
            c.dedup = v;
        }
        c.out = out;
        c.counterexamples = counter;
        c.validate()?;
        Ok(c)
    }

    fn normalize_groups(&mut self) {
        self.groups
            .sort_by(|a, b| (a.order(), a.moduli()).cmp(&(b.order(), b.moduli())));
        self.groups.dedup();
    }

    pub fn validate(&self) -> Result<()> {
        let cap = self.task.order_cap();
        if let Some(g) = self.groups.iter().find(|g| g.order() > cap) {
            return Err(HarnessError::Config {
                line: 0,
                message: format!("{g} exceeds the order cap {cap} for task {}", self.task.name()),
            });
        }
        if self.workers == 0 || self.budget_nodes == 0 || self.budget_seconds == Some(0) {
            return Err(HarnessError::Config {
                line: 0,
                message: "workers and budgets must be positive".into(),
            });
        }
        Ok(())
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Splits on commas outside brackets and parentheses.
fn split_list(value: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in value.char_indices() {
        match c {
            '[' | '(' | '{' => depth += 1,
            ']' | ')' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(value[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(value[start..].trim());
    out.retain(|s| !s.is_empty());
    out
}

fn integer(s: &str) -> std::result::Result<u64, String> {
    s.trim()
        .replace('_', "")
        .parse()
        .map_err(|_| format!("expected a nonnegative integer, got '{s}'"))
}

fn positive(s: &str) -> std::result::Result<u64, String> {
    match integer(s)? {
        0 => Err(format!("expected a positive integer, got '{s}'")),
        v => Ok(v),
    }
}

fn int_list(value: &str) -> std::result::Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for part in split_list(value) {
        if let Some((a, b)) = part.split_once("..") {
            let (a, b) = (integer(a)?, integer(b.trim_start_matches('='))?);
            if a > b {
                return Err(format!("empty range '{part}'"));
            }
            out.extend(a..=b);
        } else {
            out.push(integer(part)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_config() {
        let c = SweepConfig::parse(
            "# demo\ntask = t15\norders = 1..4\ngroups = [2,4], C2xC4  # twice\nn = 1, 3..4\nitems = 4\n\
             workers = 2\nbudget_nodes = 1_000\ndedup = off\nout = /tmp/x.jsonl\n",
        )
        .unwrap();
        assert_eq!(c.task, Task::MainNSums);
        let names: Vec<String> = c.groups.iter().map(|g| g.to_string()).collect();
        assert_eq!(names, ["C1", "C2", "C3", "C2xC2", "C4", "C2xC4"]);
        assert_eq!(c.n_values, Some(vec![1, 3, 4]));
        assert_eq!(c.items, vec![4]);
        assert_eq!((c.workers, c.budget_nodes, c.dedup), (2, 1000, false));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = |text: &str| match SweepConfig::parse(text) {
            Err(HarnessError::Config { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(bad("task = egz\n\nwhat = 1\n"), 3);
        assert_eq!(bad("task = egz\ngroups = C0\n"), 2);
        assert_eq!(bad("task = nope\n"), 1);
        assert_eq!(bad("task = egz\nworkers = 0\n"), 2);
        assert_eq!(bad("orders = 1\n"), 0);
        assert_eq!(bad("task = classify_main\norders = 17\n"), 0);
    }

    #[test]
    fn empty_group_list_is_allowed() {
        assert!(SweepConfig::parse("task = egz\n").unwrap().groups.is_empty());
    }
}
