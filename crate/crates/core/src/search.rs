//! Exhaustive depth-first enumeration of basic DFAs with long shortest reset
//! words.
//!
//! Nodes are sets of transformations kept in increasing index order; a child
//! adds one transformation above the node's largest. With symmetry reduction
//! on, only canonical representatives (see [`Dfa::canonical_form`]) are
//! expanded. Removing the largest symbol of a canonical representative leaves
//! a canonical representative, so every class is generated exactly once.
//!
//! Subtrees are discarded when the node already synchronizes faster than the
//! target (extensions can only be faster), or when it does not synchronize and
//! the staged extension bound shows that no extension can be slow enough.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automaton::{Dfa, Transformation};
use crate::error::{Error, Result};
use crate::powerset::{extension_bound_in, reducible_pair_count, PowerAutomaton};

/// Largest state count the enumeration supports.
pub const SEARCH_MAX_STATES: usize = 6;

const CHECKPOINT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n: usize,
    /// Smallest shortest-sync length that is recorded. Nodes synchronizing
    /// faster are discarded together with their extensions.
    pub s_min: usize,
    /// Largest recorded length; longer ones go to [`CountTable::above_cap`].
    pub s_max: Option<usize>,
    pub max_alphabet: usize,
    pub symmetry: bool,
    /// Discard subtrees of nodes synchronizing faster than `s_min`.
    pub prune_fast: bool,
    /// Discard subtrees of non-synchronizing nodes whose extension bound is
    /// below `s_min`.
    pub prune_bound: bool,
    /// Order children by reducible-pair count.
    pub heuristic: bool,
    pub witness_capture: bool,
    #[serde(skip)]
    pub checkpoint_path: Option<PathBuf>,
    /// Nodes processed between checkpoint writes in sequential mode.
    pub checkpoint_every: u64,
}

impl SearchConfig {
    /// Defaults: record lengths `(n-1)^2 - e` for all `e < 2 ceil(n/2)`.
    pub fn new(n: usize) -> Self {
        SearchConfig {
            n,
            s_min: default_min_sync(n),
            s_max: None,
            max_alphabet: max_alphabet(n),
            symmetry: true,
            prune_fast: true,
            prune_bound: true,
            heuristic: true,
            witness_capture: false,
            checkpoint_path: None,
            checkpoint_every: 1 << 20,
        }
    }

    pub fn with_min_sync(mut self, s_min: usize) -> Self {
        self.s_min = s_min;
        self
    }

    pub fn with_max_alphabet(mut self, k: usize) -> Self {
        self.max_alphabet = k;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=SEARCH_MAX_STATES).contains(&self.n) {
            return Err(Error::Unsupported(format!(
                "enumeration supports 2 <= n <= {SEARCH_MAX_STATES}, got {}",
                self.n
            )));
        }
        if self.s_min == 0 {
            return Err(Error::invalid("s_min must be at least 1"));
        }
        if let Some(s_max) = self.s_max {
            if s_max < self.s_min {
                return Err(Error::invalid(format!(
                    "s_max {s_max} is below s_min {}",
                    self.s_min
                )));
            }
        }
        let cap = max_alphabet(self.n);
        if self.max_alphabet == 0 || self.max_alphabet > cap {
            return Err(Error::AlphabetCap {
                size: self.max_alphabet as u128,
                cap,
            });
        }
        Ok(())
    }

    fn fingerprint(&self) -> String {
        format!(
            "n={} s_min={} s_max={:?} k<={} sym={} fast={} bound={} heur={}",
            self.n,
            self.s_min,
            self.s_max,
            self.max_alphabet,
            self.symmetry,
            self.prune_fast,
            self.prune_bound,
            self.heuristic
        )
    }
}

/// `(n-1)^2 - e_max + 1` with `e_max = 2 ceil(n/2) - 1`, at least 1.
pub fn default_min_sync(n: usize) -> usize {
    let crit = (n - 1) * (n - 1);
    let e_max = 2 * n.div_ceil(2) - 1;
    (crit + 1).saturating_sub(e_max).max(1)
}

fn max_alphabet(n: usize) -> usize {
    n.pow(n as u32) - 1
}

/// Counts of basic DFAs indexed by shortest-sync length and alphabet size.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable {
    /// `counts[length][alphabet size]`.
    pub counts: BTreeMap<usize, BTreeMap<usize, u64>>,
    /// DFAs synchronizing slower than `s_max`.
    pub above_cap: u64,
}

impl CountTable {
    pub fn add(&mut self, length: usize, k: usize, by: u64) {
        *self.counts.entry(length).or_default().entry(k).or_default() += by;
    }

    pub fn get(&self, length: usize, k: usize) -> u64 {
        self.counts
            .get(&length)
            .and_then(|col| col.get(&k))
            .copied()
            .unwrap_or(0)
    }

    pub fn column_total(&self, length: usize) -> u64 {
        self.counts
            .get(&length)
            .map(|col| col.values().sum())
            .unwrap_or(0)
    }

    /// Column as a vector over alphabet sizes `1..=max_k`.
    pub fn column(&self, length: usize, max_k: usize) -> Vec<u64> {
        (1..=max_k).map(|k| self.get(length, k)).collect()
    }

    pub fn max_alphabet(&self) -> usize {
        self.counts
            .values()
            .flat_map(|col| col.iter().filter(|(_, &c)| c > 0).map(|(&k, _)| k))
            .max()
            .unwrap_or(0)
    }

    pub fn merge(&mut self, other: &CountTable) {
        for (&len, col) in &other.counts {
            for (&k, &c) in col {
                self.add(len, k, c);
            }
        }
        self.above_cap += other.above_cap;
    }

    /// CSV with one row per alphabet size and one column per length, longest
    /// first, plus a totals row. Columns run from `top` down to `s_min`.
    pub fn to_csv(&self, s_min: usize, top: usize) -> String {
        let top = top.max(self.counts.keys().next_back().copied().unwrap_or(0));
        let lengths: Vec<usize> = (s_min..=top).rev().collect();
        let rows = self.max_alphabet().max(1);
        let mut out = String::from("alphabet");
        for l in &lengths {
            let _ = write!(out, ",{l}");
        }
        out.push('\n');
        for k in 1..=rows {
            let _ = write!(out, "{k}");
            for &l in &lengths {
                let _ = write!(out, ",{}", self.get(l, k));
            }
            out.push('\n');
        }
        out.push_str("total");
        for &l in &lengths {
            let _ = write!(out, ",{}", self.column_total(l));
        }
        out.push('\n');
        out
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub visited: u64,
    pub recorded: u64,
    pub discarded_fast: u64,
    pub discarded_bound: u64,
    pub non_canonical: u64,
}

impl SearchStats {
    fn merge(&mut self, o: &SearchStats) {
        self.visited += o.visited;
        self.recorded += o.recorded;
        self.discarded_fast += o.discarded_fast;
        self.discarded_bound += o.discarded_bound;
        self.non_canonical += o.non_canonical;
    }
}

/// A pending DFS node: transformation indices in increasing order. The
/// frontier is one past the largest index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchNode {
    pub symbols: Vec<u32>,
}

impl SearchNode {
    pub fn frontier(&self) -> u32 {
        self.symbols.last().map_or(0, |&t| t + 1)
    }
}

/// One recorded DFA.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Witness {
    pub length: usize,
    pub symbols: Vec<u32>,
}

/// Index-level view of all transformations on `n` states with precomputed
/// subset images.
pub struct TransformationSpace {
    n: usize,
    count: u32,
    identity: u32,
    subsets: usize,
    /// `images[t * subsets + s]` is the image of subset `s` under `t`.
    images: Vec<u8>,
    perms: Vec<Vec<usize>>,
    /// `conj[p * count + t]`: index of `t` relabelled by permutation `p`.
    conj: Vec<u16>,
}

impl TransformationSpace {
    pub fn new(n: usize) -> Result<Self> {
        if !(1..=SEARCH_MAX_STATES).contains(&n) {
            return Err(Error::Unsupported(format!(
                "transformation space supports n <= {SEARCH_MAX_STATES}"
            )));
        }
        let count = n.pow(n as u32) as u32;
        let subsets = 1usize << n;
        let mut images = vec![0u8; count as usize * subsets];
        for t in 0..count {
            let tr = Transformation::from_index(n, t as u64)?;
            let row = &mut images[t as usize * subsets..(t as usize + 1) * subsets];
            for s in 1..subsets {
                let q = s.trailing_zeros() as usize;
                row[s] = row[s & (s - 1)] | 1 << tr.image(q);
            }
        }
        let identity = Transformation::identity(n)?.index() as u32;
        let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
        let mut conj = vec![0u16; perms.len() * count as usize];
        for t in 0..count {
            let tr = Transformation::from_index(n, t as u64)?;
            for (p, perm) in perms.iter().enumerate() {
                conj[p * count as usize + t as usize] = tr.relabel(perm).index() as u16;
            }
        }
        Ok(TransformationSpace {
            n,
            count,
            identity,
            subsets,
            images,
            perms,
            conj,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn count(&self) -> u32 {
        self.count
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    #[inline]
    fn step(&self, t: u32, s: u8) -> u8 {
        self.images[t as usize * self.subsets + s as usize]
    }

    #[inline]
    fn conjugate(&self, p: usize, t: u32) -> u32 {
        self.conj[p * self.count as usize + t as usize] as u32
    }

    pub fn transformation(&self, t: u32) -> Transformation {
        Transformation::from_index(self.n, t as u64).expect("index in range")
    }

    pub fn dfa(&self, symbols: &[u32]) -> Dfa {
        Dfa::new(
            self.n,
            symbols.iter().map(|&t| self.transformation(t)).collect(),
        )
        .expect("transformations share n")
    }

    /// Whether the sorted index list is the least among all its relabellings.
    pub fn is_canonical(&self, symbols: &[u32], buf: &mut Vec<u32>) -> bool {
        // perms[0] is the identity permutation.
        for p in 1..self.perms.len() {
            buf.clear();
            buf.extend(symbols.iter().map(|&t| self.conjugate(p, t)));
            buf.sort_unstable();
            if buf.as_slice() < symbols {
                return false;
            }
        }
        true
    }

    /// Shortest synchronizing length of the DFA with these symbols.
    pub fn sync_length(&self, symbols: &[u32]) -> Option<usize> {
        let full = (self.subsets - 1) as u8;
        if self.n == 1 {
            return Some(0);
        }
        let mut seen: u64 = 1 << full;
        let mut level: Vec<u8> = vec![full];
        let mut next: Vec<u8> = Vec::with_capacity(self.subsets);
        let mut depth = 0;
        while !level.is_empty() {
            depth += 1;
            next.clear();
            for &s in &level {
                for &t in symbols {
                    let img = self.step(t, s);
                    if img & img.wrapping_sub(1) == 0 {
                        return Some(depth);
                    }
                    if seen >> img & 1 == 0 {
                        seen |= 1 << img;
                        next.push(img);
                    }
                }
            }
            std::mem::swap(&mut level, &mut next);
        }
        None
    }

    /// Reducible pairs (bit mask over pair subsets) of the DFA.
    fn reducible_pairs(&self, symbols: &[u32], extra: Option<u32>, start: u64) -> u64 {
        let mut red = start;
        let pairs = self.pairs();
        loop {
            let mut changed = false;
            for &p in pairs {
                if red >> p & 1 == 1 {
                    continue;
                }
                let hit = symbols.iter().chain(extra.iter()).any(|&t| {
                    let img = self.step(t, p);
                    img & img.wrapping_sub(1) == 0 || red >> img & 1 == 1
                });
                if hit {
                    red |= 1 << p;
                    changed = true;
                }
            }
            if !changed {
                return red;
            }
        }
    }

    fn pairs(&self) -> &'static [u8] {
        const PAIRS: [&[u8]; SEARCH_MAX_STATES + 1] = [
            &[],
            &[],
            &[3],
            &[3, 5, 6],
            &[3, 5, 6, 9, 10, 12],
            &[3, 5, 6, 9, 10, 12, 17, 18, 20, 24],
            &[3, 5, 6, 9, 10, 12, 17, 18, 20, 24, 33, 34, 36, 40, 48],
        ];
        PAIRS[self.n]
    }

    /// Candidates above `frontier` ordered by descending reducible-pair count
    /// of the extended DFA; ties keep index order.
    fn order_by_heuristic(&self, symbols: &[u32], mut candidates: Vec<u32>) -> Vec<u32> {
        let base = self.reducible_pairs(symbols, None, 0);
        let mut scored: Vec<(u32, u32)> = candidates
            .drain(..)
            .map(|t| {
                let red = self.reducible_pairs(symbols, Some(t), base);
                (red.count_ones(), t)
            })
            .collect();
        scored.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        scored.into_iter().map(|(_, t)| t).collect()
    }

    fn extension_bound(&self, symbols: &[u32]) -> usize {
        extension_bound_in(&PowerAutomaton::new(&self.dfa(symbols))).total
    }
}

/// Stable ordering of candidate symbols by descending number of reducible
/// pairs in the one-symbol extension, ties broken by transformation order.
pub fn heuristic_order(dfa: &Dfa, candidates: &[Transformation]) -> Result<Vec<Transformation>> {
    let mut scored = candidates
        .iter()
        .map(|&t| Ok((reducible_pair_count(&dfa.with_symbol(t)?), t)))
        .collect::<Result<Vec<_>>>()?;
    scored.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    Ok(scored.into_iter().map(|(_, t)| t).collect())
}

/// Outcome of processing one node.
enum Visit {
    Expand,
    Leaf,
}

#[derive(Default)]
struct Local {
    table: CountTable,
    stats: SearchStats,
    witnesses: Vec<Witness>,
}

/// Serialized engine state.
#[derive(Serialize, Deserialize)]
struct Checkpoint {
    version: u32,
    fingerprint: String,
    config: SearchConfig,
    started: bool,
    table: CountTable,
    stats: SearchStats,
    pending: Vec<SearchNode>,
    witnesses: Vec<Witness>,
}

/// Resumable enumeration.
pub struct Search {
    config: SearchConfig,
    space: TransformationSpace,
    started: bool,
    pending: Vec<SearchNode>,
    local: Local,
}

/// Final output of an enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub table: CountTable,
    pub stats: SearchStats,
    pub witnesses: Vec<Witness>,
}

impl Search {
    pub fn new(config: SearchConfig) -> Result<Self> {
        config.validate()?;
        let space = TransformationSpace::new(config.n)?;
        Ok(Search {
            config,
            space,
            started: false,
            pending: Vec::new(),
            local: Local::default(),
        })
    }

    /// Restores from a checkpoint file, or starts afresh if it is missing or
    /// empty.
    pub fn resume(config: SearchConfig, path: &Path) -> Result<Self> {
        let mut search = Search::new(config)?;
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => String::new(),
            Err(e) => return Err(Error::Checkpoint(format!("{}: {e}", path.display()))),
        };
        if text.trim().is_empty() {
            return Ok(search);
        }
        let cp: Checkpoint = serde_json::from_str(&text).map_err(|e| {
            Error::Checkpoint(format!("corrupt checkpoint {}: {e}", path.display()))
        })?;
        if cp.version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!(
                "checkpoint version {} but this build writes {CHECKPOINT_VERSION}",
                cp.version
            )));
        }
        if cp.fingerprint != search.config.fingerprint() {
            return Err(Error::Checkpoint(format!(
                "checkpoint was written for [{}], not [{}]",
                cp.fingerprint,
                search.config.fingerprint()
            )));
        }
        let bad = cp
            .pending
            .iter()
            .flat_map(|n| &n.symbols)
            .any(|&t| t >= search.space.count);
        if bad {
            return Err(Error::Checkpoint("checkpoint node out of range".into()));
        }
        search.started = cp.started;
        search.pending = cp.pending;
        search.local = Local {
            table: cp.table,
            stats: cp.stats,
            witnesses: cp.witnesses,
        };
        Ok(search)
    }

    pub fn config(&self) -> &SearchConfig {
        &self.config
    }

    pub fn space(&self) -> &TransformationSpace {
        &self.space
    }

    pub fn is_finished(&self) -> bool {
        self.started && self.pending.is_empty()
    }

    pub fn stats(&self) -> &SearchStats {
        &self.local.stats
    }

    pub fn pending(&self) -> &[SearchNode] {
        &self.pending
    }

    pub fn save_checkpoint(&self, path: &Path) -> Result<()> {
        let cp = Checkpoint {
            version: CHECKPOINT_VERSION,
            fingerprint: self.config.fingerprint(),
            config: self.config.clone(),
            started: self.started,
            table: self.local.table.clone(),
            stats: self.local.stats.clone(),
            pending: self.pending.clone(),
            witnesses: self.local.witnesses.clone(),
        };
        let json =
            serde_json::to_string(&cp).map_err(|e| Error::Checkpoint(format!("encode: {e}")))?;
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, json)
            .and_then(|_| fs::rename(&tmp, path))
            .map_err(|e| Error::Checkpoint(format!("write {}: {e}", path.display())))
    }

    fn ensure_started(&mut self) {
        if !self.started {
            self.started = true;
            self.pending.push(SearchNode { symbols: vec![] });
        }
    }

    /// Processes at most `budget` nodes sequentially. Returns true when the
    /// search is complete.
    pub fn step(&mut self, budget: u64) -> bool {
        self.step_with(budget, &mut |_| {})
    }

    /// Like [`Search::step`], calling `visit` on every processed node.
    pub fn step_with(&mut self, budget: u64, visit: &mut dyn FnMut(&[u32])) -> bool {
        self.ensure_started();
        let mut buf = Vec::new();
        let mut done = 0;
        while done < budget {
            let Some(node) = self.pending.pop() else {
                break;
            };
            visit(&node.symbols);
            let children = process(&self.config, &self.space, &node, &mut self.local, &mut buf);
            self.pending.extend(
                children
                    .into_iter()
                    .rev()
                    .map(|symbols| SearchNode { symbols }),
            );
            done += 1;
        }
        self.pending.is_empty()
    }

    /// Runs to completion single-threaded, writing periodic checkpoints if a
    /// path is configured.
    pub fn run(mut self) -> Result<SearchOutcome> {
        let every = self.config.checkpoint_every.max(1);
        while !self.step(every) {
            if let Some(path) = self.config.checkpoint_path.clone() {
                self.save_checkpoint(&path)?;
            }
        }
        self.finish()
    }

    /// Runs to completion on a pool of `threads` workers. Pending nodes are
    /// split into independent subtrees; tables are merged by addition, so the
    /// result does not depend on scheduling.
    pub fn run_parallel(mut self, threads: usize) -> Result<SearchOutcome> {
        if threads <= 1 {
            return self.run();
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
        self.ensure_started();
        // Split the top of the tree until there is enough independent work.
        let target = threads * 16;
        let mut guard = 0;
        while !self.pending.is_empty() && self.pending.len() < target && guard < 4096 {
            self.step(1);
            guard += 1;
        }
        let chunk = threads * 4;
        while !self.pending.is_empty() {
            let take = chunk.min(self.pending.len());
            let batch: Vec<SearchNode> = self.pending.split_off(self.pending.len() - take);
            let config = &self.config;
            let space = &self.space;
            let results: Vec<Local> = pool.install(|| {
                batch
                    .par_iter()
                    .map(|node| {
                        let mut local = Local::default();
                        let mut buf = Vec::new();
                        let mut stack = vec![node.clone()];
                        while let Some(n) = stack.pop() {
                            let children = process(config, space, &n, &mut local, &mut buf);
                            stack.extend(
                                children
                                    .into_iter()
                                    .rev()
                                    .map(|symbols| SearchNode { symbols }),
                            );
                        }
                        local
                    })
                    .collect()
            });
            for r in results {
                self.local.table.merge(&r.table);
                self.local.stats.merge(&r.stats);
                self.local.witnesses.extend(r.witnesses);
            }
            if let Some(path) = self.config.checkpoint_path.clone() {
                self.save_checkpoint(&path)?;
            }
        }
        self.finish()
    }

    fn finish(mut self) -> Result<SearchOutcome> {
        if let Some(path) = self.config.checkpoint_path.clone() {
            self.save_checkpoint(&path)?;
        }
        self.local.witnesses.sort();
        Ok(SearchOutcome {
            table: self.local.table,
            stats: self.local.stats,
            witnesses: self.local.witnesses,
        })
    }

    /// Finishes a search that has been stepped to completion.
    pub fn into_outcome(self) -> Result<SearchOutcome> {
        if !self.is_finished() {
            return Err(Error::invalid("search has pending nodes"));
        }
        self.finish()
    }
}

/// Evaluates one node and returns its children in exploration order.
fn process(
    config: &SearchConfig,
    space: &TransformationSpace,
    node: &SearchNode,
    local: &mut Local,
    buf: &mut Vec<u32>,
) -> Vec<Vec<u32>> {
    local.stats.visited += 1;
    let symbols = &node.symbols;
    let k = symbols.len();
    let visit = if k == 0 {
        Visit::Expand
    } else {
        match space.sync_length(symbols) {
            Some(s) if s < config.s_min => {
                if config.prune_fast {
                    local.stats.discarded_fast += 1;
                    Visit::Leaf
                } else {
                    Visit::Expand
                }
            }
            Some(s) => {
                if config.s_max.is_some_and(|cap| s > cap) {
                    local.table.above_cap += 1;
                } else {
                    local.table.add(s, k, 1);
                }
                local.stats.recorded += 1;
                if config.witness_capture {
                    local.witnesses.push(Witness {
                        length: s,
                        symbols: symbols.clone(),
                    });
                }
                Visit::Expand
            }
            None => {
                if config.prune_bound
                    && k < config.max_alphabet
                    && space.extension_bound(symbols) < config.s_min
                {
                    local.stats.discarded_bound += 1;
                    Visit::Leaf
                } else {
                    Visit::Expand
                }
            }
        }
    };
    if matches!(visit, Visit::Leaf) || k >= config.max_alphabet {
        return Vec::new();
    }

    let mut candidates = Vec::new();
    let mut child = symbols.clone();
    child.push(0);
    for t in node.frontier()..space.count {
        if t == space.identity {
            continue;
        }
        *child.last_mut().expect("non-empty") = t;
        if config.symmetry && !space.is_canonical(&child, buf) {
            local.stats.non_canonical += 1;
            continue;
        }
        candidates.push(t);
    }
    if config.heuristic {
        candidates = space.order_by_heuristic(symbols, candidates);
    }
    candidates
        .into_iter()
        .map(|t| {
            let mut c = symbols.clone();
            c.push(t);
            c
        })
        .collect()
}

/// Runs an enumeration to completion.
pub fn enumerate(config: SearchConfig, threads: usize) -> Result<SearchOutcome> {
    let search = match &config.checkpoint_path {
        Some(path) => Search::resume(config.clone(), path)?,
        None => Search::new(config)?,
    };
    search.run_parallel(threads)
}

/// Writes recorded DFAs in the text format, one file per length.
pub fn write_witnesses(
    space: &TransformationSpace,
    witnesses: &[Witness],
    dir: &Path,
) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut by_length: BTreeMap<usize, String> = BTreeMap::new();
    for w in witnesses {
        let text = by_length.entry(w.length).or_default();
        let _ = writeln!(text, "# length {}", w.length);
        text.push_str(&space.dfa(&w.symbols).to_text());
        text.push('\n');
    }
    for (len, text) in by_length {
        fs::write(dir.join(format!("n{}_len{}.txt", space.n(), len)), text)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::cerny;
    use crate::powerset::{extension_bound, sync_length};

    #[test]
    fn default_bands() {
        assert_eq!(default_min_sync(2), 1);
        assert_eq!(default_min_sync(3), 2);
        assert_eq!(default_min_sync(4), 7);
        assert_eq!(default_min_sync(5), 12);
        assert_eq!(default_min_sync(6), 21);
    }

    #[test]
    fn space_agrees_with_dfa_routes() {
        let space = TransformationSpace::new(4).unwrap();
        let c4 = cerny(4).unwrap();
        let idx: Vec<u32> = c4.symbols().iter().map(|t| t.index() as u32).collect();
        assert_eq!(space.sync_length(&idx), Some(9));
        assert_eq!(space.dfa(&idx), c4);
        let shift = vec![idx[0]];
        assert_eq!(space.sync_length(&shift), None);
        assert_eq!(
            space.extension_bound(&shift),
            extension_bound(&c4.restrict(&[0]).unwrap()).total
        );
    }

    #[test]
    fn two_state_table() {
        let config = SearchConfig::new(2).with_min_sync(1);
        let out = enumerate(config, 1).unwrap();
        assert_eq!(out.table.column(1, 3), vec![1, 2, 1]);
        assert_eq!(out.table.column_total(1), 4);
        assert_eq!(
            out.table.to_csv(1, 1),
            "alphabet,1\n1,1\n2,2\n3,1\ntotal,4\n"
        );
    }

    #[test]
    fn heuristic_prefers_merging_symbols() {
        let c3 = cerny(3).unwrap();
        let seed = c3.restrict(&[0]).unwrap();
        let perm = Transformation::from_one_based(&[2, 1, 3]).unwrap();
        let merge = *c3.symbol(1);
        let order = heuristic_order(&seed, &[perm, merge]).unwrap();
        assert_eq!(order, vec![merge, perm]);
    }

    #[test]
    fn heuristic_matches_index_route() {
        let space = TransformationSpace::new(3).unwrap();
        let seed = [Transformation::from_one_based(&[2, 3, 1]).unwrap().index() as u32];
        let candidates: Vec<u32> = (0..27)
            .filter(|&t| t != space.identity() && t != seed[0])
            .collect();
        let fast = space.order_by_heuristic(&seed, candidates.clone());
        let dfa = space.dfa(&seed);
        let ts: Vec<Transformation> = candidates
            .iter()
            .map(|&t| space.transformation(t))
            .collect();
        let slow: Vec<u32> = heuristic_order(&dfa, &ts)
            .unwrap()
            .iter()
            .map(|t| t.index() as u32)
            .collect();
        assert_eq!(fast, slow);
        // Every candidate is sync-completing or not; all non-permutations
        // that merge some pair rank before the two permutations.
        let last_two: Vec<bool> = fast[fast.len() - 2..]
            .iter()
            .map(|&t| space.transformation(t).is_permutation())
            .collect();
        assert_eq!(last_two, vec![true, true]);
        let _ = sync_length(&dfa);
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig::new(7).validate().is_err());
        assert!(SearchConfig::new(3).with_min_sync(0).validate().is_err());
        assert!(SearchConfig::new(3)
            .with_max_alphabet(27)
            .validate()
            .is_err());
        let mut c = SearchConfig::new(3).with_min_sync(3);
        c.s_max = Some(2);
        assert!(c.validate().is_err());
    }
}
