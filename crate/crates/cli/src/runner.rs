//! Chunked, parallel, resumable execution of a [`SearchJob`].
//!
//! The job's integer range is walked in fixed chunks. Inside a chunk the
//! job's shard `(i, c)` is split into `(i + c·j, c·N)` for `j < N` and the
//! pieces run on the rayon pool; the merged result does not depend on `N`.
//! Budgets and checkpoints are handled between chunks.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value as Json};
use zpgabor_core::search::{SearchJob, SearchReport, Shard};

use crate::checkpoint::Checkpoint;
use crate::error::CliError;
use crate::formats::{finding_to_json, job_to_json, params_json, shard_to_json, u128_to_json};

pub const DEFAULT_CHUNK: u128 = 4096;

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub jobs: usize,
    pub chunk: u128,
    pub checkpoint: Option<PathBuf>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { jobs: 1, chunk: DEFAULT_CHUNK, checkpoint: None }
    }
}

/// Everything accumulated so far; findings are kept in their JSON form
/// so that a resumed run reproduces the uninterrupted output exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct Progress {
    pub kind: String,
    pub next: u128,
    pub visited: u128,
    pub counts: BTreeMap<String, u64>,
    pub findings: Vec<Json>,
}

impl Progress {
    pub fn new(job: &SearchJob) -> Self {
        Progress { kind: job.kind.name().into(), next: 0, visited: 0, counts: BTreeMap::new(), findings: Vec::new() }
    }

    fn absorb(&mut self, part: SearchReport) {
        self.visited += part.visited;
        for (k, v) in part.counts {
            *self.counts.entry(k).or_insert(0) += v;
        }
        self.findings.extend(part.findings.iter().map(finding_to_json));
    }

    pub fn count(&self, name: &str) -> u64 {
        self.counts.get(name).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub progress: Progress,
    pub complete: bool,
    pub wall_time_ms: u128,
}

impl Outcome {
    pub fn report_json(&self, job: &SearchJob, timing: bool) -> Json {
        let mut out = json!({
            "kind": self.progress.kind,
            "params": params_json(job.params),
            "shard": shard_to_json(&job.shard),
            "visited": u128_to_json(self.progress.visited),
            "complete": self.complete,
            "counts": self.progress.counts,
            "findings": self.progress.findings,
        });
        if timing {
            out["wall_time_ms"] = u128_to_json(self.wall_time_ms);
        }
        out
    }
}

fn run_chunk(job: &SearchJob, start: u128, end: u128, jobs: usize) -> Result<SearchReport, CliError> {
    if jobs <= 1 {
        return Ok(job.run_range(start, end)?);
    }
    let (i, c) = (job.shard.index(), job.shard.count());
    let count = c.checked_mul(jobs as u32).ok_or_else(|| CliError::Usage("too many shards × jobs".into()))?;
    let parts: Vec<_> = (0..jobs as u32)
        .into_par_iter()
        .map(|j| {
            let mut sub = job.clone();
            sub.shard = Shard::new(i + c * j, count)?;
            sub.run_range(start, end)
        })
        .collect::<Result<_, _>>()?;
    let mut parts = parts.into_iter();
    let first = parts.next().expect("at least one part");
    Ok(parts.try_fold(first, SearchReport::merge)?)
}

/// Runs `job` from `resume` (or from the start), writing a checkpoint
/// after every chunk when a path is configured.
pub fn run(job: &SearchJob, opts: &RunOptions, resume: Option<Progress>) -> Result<Outcome, CliError> {
    if opts.jobs == 0 || opts.chunk == 0 {
        return Err(CliError::Usage("--jobs and --chunk must be positive".into()));
    }
    let clock = Instant::now();
    let space = job.space()?;
    let stop = match job.budget.max_nodes {
        Some(nodes) => {
            let shard = job.shard;
            let bound = shard.first_at_or_after(0).saturating_add(nodes.saturating_mul(shard.count() as u128));
            bound.min(space)
        }
        None => space,
    };
    let mut progress = resume.unwrap_or_else(|| Progress::new(job));
    if progress.kind != job.kind.name() {
        return Err(CliError::Format("checkpoint belongs to a different job".into()));
    }
    while progress.next < stop {
        if let Some(ms) = job.budget.max_millis {
            if clock.elapsed().as_millis() >= ms as u128 {
                break;
            }
        }
        let end = progress.next.saturating_add(opts.chunk).min(stop);
        let part = run_chunk(job, progress.next, end, opts.jobs)?;
        progress.absorb(part);
        progress.next = end;
        if let Some(path) = &opts.checkpoint {
            Checkpoint { job: job_to_json(job), progress: progress.clone() }.write(path)?;
        }
    }
    Ok(Outcome { complete: progress.next >= space, progress, wall_time_ms: clock.elapsed().as_millis() })
}
