//! Exhaustive backtracking search for splitting sequences.
//!
//! Coordinates are assigned left to right and values are tried in canonical
//! element order, so the first sequence found is the lexicographically
//! smallest one. After each assignment, every ball vector whose support ends
//! at that coordinate is mapped into the group and must land on a fresh
//! element.
//!
//! Symmetry pruning, each switchable:
//! - orbit: the first element is the representative of its orbit under
//!   per-component unit scaling (an automorphism of the group);
//! - rotation: for cyclic balls, no coordinate's orbit representative is
//!   smaller than the first element's.
//!
//! Neither rule changes which sequence is lexicographically smallest.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::errorball::{enumerate_sparse, BallSpec};
use crate::groups::{enumerate_abelian_groups, is_perfect_splitting, AbelianGroup, SplittingSequence};

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;
pub const DEFAULT_CHECKPOINT_EVERY: u64 = 10_000_000;

#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Check distinctness after every assignment rather than only at leaves.
    pub incremental: bool,
    pub prune_orbit: bool,
    pub prune_rotation: bool,
    /// Worker threads; `1` runs the shards in order on the calling thread.
    pub jobs: usize,
    pub node_budget: u64,
    /// Resumable state file, sequential mode only.
    pub checkpoint: Option<PathBuf>,
    pub checkpoint_every: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            incremental: true,
            prune_orbit: true,
            prune_rotation: true,
            jobs: 1,
            node_budget: DEFAULT_NODE_BUDGET,
            checkpoint: None,
            checkpoint_every: DEFAULT_CHECKPOINT_EVERY,
        }
    }
}

impl SearchOptions {
    pub fn unpruned() -> Self {
        SearchOptions {
            prune_orbit: false,
            prune_rotation: false,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Found(SplittingSequence),
    ExhaustedNone,
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub spec: BallSpec,
    pub group: AbelianGroup,
    pub outcome: Outcome,
    pub nodes_visited: u64,
    pub wall_time: Duration,
}

impl SearchReport {
    pub fn found(&self) -> Option<&SplittingSequence> {
        match &self.outcome {
            Outcome::Found(s) => Some(s),
            Outcome::ExhaustedNone => None,
        }
    }
}

/// Saved progress of a sequential search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub ball: String,
    pub group: String,
    pub prune_orbit: bool,
    pub prune_rotation: bool,
    pub nodes_visited: u64,
    /// Assignment prefix being explored; everything lexicographically before it is exhausted.
    pub path: Vec<u64>,
    pub complete: bool,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("reading {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Parse(format!("checkpoint {}: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Internal(format!("serializing checkpoint: {e}")))?;
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, text)
            .and_then(|_| fs::rename(&tmp, path))
            .map_err(|e| Error::Resource(format!("writing {}: {e}", path.display())))
    }
}

/// A ball vector that completes at some coordinate `i`: its coefficient at
/// `i` plus the earlier terms.
struct Pending {
    coeff_at: usize,
    earlier: Vec<(usize, usize)>,
}

/// Immutable search problem shared by all shards.
struct Problem<'a> {
    group: &'a AbelianGroup,
    n: usize,
    /// Coefficient values `-k-..=k+`, indexed by `c + k-`.
    coeffs: Vec<i64>,
    buckets: Vec<Vec<Pending>>,
    prune_orbit: bool,
    prune_rotation: bool,
    incremental: bool,
    ball_text: String,
    group_text: String,
}

enum Step {
    Found,
    Exhausted,
    Stop,
}

struct Shared<'a> {
    nodes: &'a AtomicU64,
    budget: u64,
    best_root: &'a AtomicU64,
}

struct State<'a> {
    used: Vec<bool>,
    assign: Vec<u64>,
    /// Multiples `c * s_j` for assigned `j`, indexed by `c + k-`.
    multiples: Vec<Vec<u64>>,
    undo: Vec<u64>,
    local_nodes: u64,
    root: u64,
    resume: Vec<u64>,
    on_resume_path: bool,
    checkpoint: Option<(&'a Path, u64, u64)>,
    over_budget: bool,
}

impl<'a> Problem<'a> {
    fn new(spec: &BallSpec, group: &'a AbelianGroup, opts: &SearchOptions) -> Result<Self> {
        let ball = enumerate_sparse(spec)?;
        let k_minus = i64::from(spec.k_minus);
        let mut buckets: Vec<Vec<Pending>> = (0..spec.n).map(|_| Vec::new()).collect();
        for v in ball.iter().filter(|v| !v.is_empty()) {
            let &(last, c_last) = v.last().expect("nonempty");
            buckets[last].push(Pending {
                coeff_at: (c_last + k_minus) as usize,
                earlier: v[..v.len() - 1]
                    .iter()
                    .map(|&(j, c)| (j, (c + k_minus) as usize))
                    .collect(),
            });
        }
        Ok(Problem {
            group,
            n: spec.n,
            coeffs: (-k_minus..=i64::from(spec.k_plus)).collect(),
            buckets,
            prune_orbit: opts.prune_orbit,
            prune_rotation: opts.prune_rotation && spec.cyclic,
            incremental: opts.incremental,
            ball_text: spec.to_string(),
            group_text: group.to_string(),
        })
    }

    fn root_values(&self) -> Vec<u64> {
        (0..self.group.order())
            .filter(|&v| !self.prune_orbit || self.group.orbit_rep_code(v) == v)
            .collect()
    }

    fn new_state(&self, root: u64) -> State<'a> {
        let mut used = vec![false; self.group.order() as usize];
        // the zero vector maps to the identity, code 0
        used[0] = true;
        State {
            used,
            assign: Vec::with_capacity(self.n),
            multiples: Vec::with_capacity(self.n),
            undo: Vec::new(),
            local_nodes: 0,
            root,
            resume: Vec::new(),
            on_resume_path: false,
            checkpoint: None,
            over_budget: false,
        }
    }

    /// Map every ball vector completing at `depth` under value `v`; on a
    /// clash, roll back and report failure.
    fn place(&self, st: &mut State<'_>, depth: usize) -> bool {
        let g = self.group;
        let mark = st.undo.len();
        for pend in &self.buckets[depth] {
            let mut val = st.multiples[depth][pend.coeff_at];
            for &(j, ci) in &pend.earlier {
                val = g.add_code(val, st.multiples[j][ci]);
            }
            if st.used[val as usize] {
                for &u in &st.undo[mark..] {
                    st.used[u as usize] = false;
                }
                st.undo.truncate(mark);
                return false;
            }
            st.used[val as usize] = true;
            st.undo.push(val);
        }
        true
    }

    fn unplace(&self, st: &mut State<'_>, mark: usize) {
        for &u in &st.undo[mark..] {
            st.used[u as usize] = false;
        }
        st.undo.truncate(mark);
    }

    fn push(&self, st: &mut State<'_>, v: u64) {
        let g = self.group;
        st.assign.push(v);
        st.multiples
            .push(self.coeffs.iter().map(|&c| g.scale_code(c, v)).collect());
    }

    fn pop(&self, st: &mut State<'_>) {
        st.assign.pop();
        st.multiples.pop();
    }

    fn count_node(&self, st: &mut State<'_>, shared: &Shared<'_>) -> bool {
        st.local_nodes += 1;
        if st.local_nodes % 4096 == 0 {
            let total = shared.nodes.fetch_add(4096, Ordering::Relaxed) + 4096;
            if total > shared.budget {
                st.over_budget = true;
                return false;
            }
            if shared.best_root.load(Ordering::Relaxed) < st.root {
                return false;
            }
        }
        if let Some((path, every, ref mut next)) = st.checkpoint {
            if st.local_nodes >= *next {
                *next += every;
                let cp = Checkpoint {
                    ball: self.ball_text.clone(),
                    group: self.group_text.clone(),
                    prune_orbit: self.prune_orbit,
                    prune_rotation: self.prune_rotation,
                    nodes_visited: st.local_nodes,
                    path: st.assign.clone(),
                    complete: false,
                };
                // a failed periodic write only loses progress, not correctness
                let _ = cp.save(path);
            }
        }
        true
    }

    fn dfs(&self, st: &mut State<'_>, shared: &Shared<'_>, depth: usize) -> Step {
        if depth == self.n {
            if !self.incremental {
                let mark = st.undo.len();
                for d in 0..self.n {
                    if !self.place(st, d) {
                        self.unplace(st, mark);
                        return Step::Exhausted;
                    }
                }
            }
            return Step::Found;
        }
        let g = self.group;
        let start = if st.on_resume_path && depth < st.resume.len() {
            st.resume[depth]
        } else {
            st.on_resume_path = false;
            0
        };
        let floor = st.assign.first().copied().unwrap_or(0);
        for v in start..g.order() {
            if st.on_resume_path && depth < st.resume.len() && v != st.resume[depth] {
                st.on_resume_path = false;
            }
            if !self.count_node(st, shared) {
                return Step::Stop;
            }
            if self.prune_rotation && g.orbit_rep_code(v) < g.orbit_rep_code(floor) {
                continue;
            }
            self.push(st, v);
            let mark = st.undo.len();
            if !self.incremental || self.place(st, depth) {
                match self.dfs(st, shared, depth + 1) {
                    Step::Found => return Step::Found,
                    Step::Stop => return Step::Stop,
                    Step::Exhausted => {}
                }
                self.unplace(st, mark);
            }
            self.pop(st);
        }
        Step::Exhausted
    }

    /// Explore every sequence whose first element is `root`.
    fn run_shard(&self, st: &mut State<'_>, shared: &Shared<'_>, root: u64) -> Step {
        self.push(st, root);
        if self.incremental && !self.place(st, 0) {
            self.pop(st);
            return Step::Exhausted;
        }
        let step = self.dfs(st, shared, 1);
        if matches!(step, Step::Found) {
            shared.best_root.fetch_min(root, Ordering::Relaxed);
        } else {
            self.unplace(st, 0);
            self.pop(st);
        }
        step
    }
}

/// Search for a perfect splitting of `group` by the ball. Returns the
/// lexicographically smallest sequence, or `ExhaustedNone` after a complete
/// search.
pub fn search_splitting(
    spec: &BallSpec,
    group: &AbelianGroup,
    opts: &SearchOptions,
) -> Result<SearchReport> {
    let started = Instant::now();
    let size = enumerate_sparse(spec)?.len() as u64;
    if size != group.order() {
        return Err(Error::param(format!(
            "|{spec}| = {size} differs from |{group}| = {}",
            group.order()
        )));
    }
    if opts.checkpoint.is_some() && opts.jobs > 1 {
        return Err(Error::param("checkpointing needs a sequential search (jobs = 1)"));
    }
    let problem = Problem::new(spec, group, opts)?;
    let nodes = AtomicU64::new(0);
    let best_root = AtomicU64::new(u64::MAX);
    let shared = Shared {
        nodes: &nodes,
        budget: opts.node_budget,
        best_root: &best_root,
    };
    let mut roots = problem.root_values();

    let (found, extra_nodes, over_budget) = if opts.jobs <= 1 {
        let mut resume = Vec::new();
        let mut base_nodes = 0;
        if let Some(path) = &opts.checkpoint {
            if path.exists() {
                let cp = Checkpoint::load(path)?;
                if cp.ball != spec.to_string()
                    || cp.group != group.to_string()
                    || cp.prune_orbit != problem.prune_orbit
                    || cp.prune_rotation != problem.prune_rotation
                {
                    return Err(Error::param(format!(
                        "checkpoint {} belongs to a different search",
                        path.display()
                    )));
                }
                base_nodes = cp.nodes_visited;
                resume = cp.path;
            }
        }
        if let Some(&first) = resume.first() {
            roots.retain(|&r| r >= first);
        }
        let mut found = None;
        let mut local = 0;
        let mut over = false;
        for (i, &root) in roots.iter().enumerate() {
            let mut st = problem.new_state(root);
            st.local_nodes = base_nodes + local;
            if i == 0 && !resume.is_empty() {
                st.resume = resume.clone();
                st.on_resume_path = resume[0] == root;
            }
            if let Some(path) = &opts.checkpoint {
                let every = opts.checkpoint_every.max(1);
                st.checkpoint = Some((path.as_path(), every, (st.local_nodes / every + 1) * every));
            }
            let step = problem.run_shard(&mut st, &shared, root);
            local = st.local_nodes - base_nodes;
            over |= st.over_budget;
            match step {
                Step::Found => {
                    found = Some(st.assign);
                    break;
                }
                Step::Stop => break,
                Step::Exhausted => {}
            }
        }
        (found, base_nodes + local, over)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::Resource(format!("thread pool: {e}")))?;
        let results: Vec<(u64, Option<Vec<u64>>, u64, bool)> = pool.install(|| {
            roots
                .par_iter()
                .map(|&root| {
                    let mut st = problem.new_state(root);
                    let step = problem.run_shard(&mut st, &shared, root);
                    let found = matches!(step, Step::Found).then(|| st.assign.clone());
                    (root, found, st.local_nodes, st.over_budget)
                })
                .collect()
        });
        let over = results.iter().any(|r| r.3);
        let total = results.iter().map(|r| r.2).sum();
        let found = results
            .into_iter()
            .filter_map(|(root, f, _, _)| f.map(|s| (root, s)))
            .min()
            .map(|(_, s)| s);
        (found, total, over)
    };

    if found.is_none() && (over_budget || extra_nodes > opts.node_budget) {
        return Err(Error::Resource(format!(
            "node budget {} exhausted searching {group} for {spec}",
            opts.node_budget
        )));
    }
    let outcome = match found {
        Some(codes) => {
            let s = SplittingSequence::from_codes(group.clone(), &codes)?;
            if !is_perfect_splitting(spec, &s)? {
                return Err(Error::Internal(format!(
                    "search returned a non-splitting sequence {}",
                    s.format_elems()
                )));
            }
            Outcome::Found(s)
        }
        None => Outcome::ExhaustedNone,
    };
    if let Some(path) = &opts.checkpoint {
        let cp = Checkpoint {
            ball: spec.to_string(),
            group: group.to_string(),
            prune_orbit: problem.prune_orbit,
            prune_rotation: problem.prune_rotation,
            nodes_visited: extra_nodes,
            path: match &outcome {
                Outcome::Found(s) => s.codes(),
                Outcome::ExhaustedNone => Vec::new(),
            },
            complete: true,
        };
        cp.save(path)?;
    }
    Ok(SearchReport {
        spec: *spec,
        group: group.clone(),
        outcome,
        nodes_visited: extra_nodes,
        wall_time: started.elapsed(),
    })
}

/// Search every isomorphism class of the given order.
pub fn search_all_groups(
    spec: &BallSpec,
    order: u64,
    opts: &SearchOptions,
) -> Result<Vec<SearchReport>> {
    enumerate_abelian_groups(order)?
        .iter()
        .map(|g| search_splitting(spec, g, opts))
        .collect()
}

/// Whether no Abelian group of the given order is split perfectly by the ball.
pub fn prove_nonexistence(spec: &BallSpec, order: u64, opts: &SearchOptions) -> Result<bool> {
    let size = enumerate_sparse(spec)?.len() as u64;
    if size != order {
        return Err(Error::param(format!("|{spec}| = {size} differs from order {order}")));
    }
    for g in enumerate_abelian_groups(order)? {
        if search_splitting(spec, &g, opts)?.found().is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}
