//! Searches in the power-set automaton: shortest reset words and their count,
//! pair reducibility, and the upper bound on how fast any synchronizing
//! extension of a DFA can synchronize.

use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::automaton::{Dfa, Word};

/// A subset of the states, bit `q` set iff `q` is a member.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct StateSet(u32);

impl StateSet {
    pub const EMPTY: StateSet = StateSet(0);

    pub fn from_bits(bits: u32) -> Self {
        StateSet(bits)
    }

    pub fn full(n: usize) -> Self {
        StateSet(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(q: usize) -> Self {
        StateSet(1 << q)
    }

    /// Builds a set from 0-based states.
    pub fn from_states<I: IntoIterator<Item = usize>>(states: I) -> Self {
        StateSet(states.into_iter().fold(0, |acc, q| acc | 1 << q))
    }

    /// `{lo, ..., hi}` in 1-based labels; empty when `lo > hi`.
    pub fn range_one_based(lo: usize, hi: usize) -> Self {
        Self::from_states((lo..=hi).map(|q| q - 1))
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_singleton(self) -> bool {
        self.0 != 0 && self.0 & (self.0 - 1) == 0
    }

    #[inline]
    pub fn contains(self, q: usize) -> bool {
        self.0 >> q & 1 == 1
    }

    pub fn insert(&mut self, q: usize) {
        self.0 |= 1 << q;
    }

    pub fn remove(&mut self, q: usize) {
        self.0 &= !(1 << q);
    }

    pub fn without(mut self, q: usize) -> Self {
        self.remove(q);
        self
    }

    pub fn is_subset(self, other: StateSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: StateSet) -> Self {
        StateSet(self.0 | other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let q = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(q)
            }
        })
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, q) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", q + 1)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Image of `set` under symbol `x`.
pub fn step_set(dfa: &Dfa, set: StateSet, x: usize) -> StateSet {
    let t = dfa.symbol(x);
    StateSet(set.iter().fold(0, |acc, q| acc | 1 << t.image(q)))
}

/// Image of `set` under a whole word.
pub fn apply_word_to_set(dfa: &Dfa, set: StateSet, w: &Word) -> StateSet {
    w.letters().iter().fold(set, |s, &x| step_set(dfa, s, x))
}

/// Per-symbol lookup tables mapping a subset to its image, split in 8-bit chunks.
pub(crate) struct PowerAutomaton {
    n: usize,
    k: usize,
    lo: Vec<u32>,
    hi: Vec<u32>,
    lo_len: usize,
    hi_len: usize,
}

impl PowerAutomaton {
    pub(crate) fn new(dfa: &Dfa) -> Self {
        let n = dfa.n();
        let k = dfa.alphabet_size();
        let lo_bits = n.min(8);
        let hi_bits = n - lo_bits;
        let lo_len = 1usize << lo_bits;
        let hi_len = if hi_bits > 0 { 1usize << hi_bits } else { 0 };
        let mut lo = vec![0u32; lo_len * k];
        let mut hi = vec![0u32; hi_len * k];
        for (x, t) in dfa.symbols().iter().enumerate() {
            let table = &mut lo[x * lo_len..(x + 1) * lo_len];
            for s in 1..lo_len {
                let q = s.trailing_zeros() as usize;
                table[s] = table[s & (s - 1)] | 1 << t.image(q);
            }
            if hi_len > 0 {
                let table = &mut hi[x * hi_len..(x + 1) * hi_len];
                for s in 1..hi_len {
                    let q = 8 + s.trailing_zeros() as usize;
                    table[s] = table[s & (s - 1)] | 1 << t.image(q);
                }
            }
        }
        PowerAutomaton {
            n,
            k,
            lo,
            hi,
            lo_len,
            hi_len,
        }
    }

    #[inline]
    pub(crate) fn step(&self, s: u32, x: usize) -> u32 {
        let low = self.lo[x * self.lo_len + (s as usize & (self.lo_len - 1))];
        if self.hi_len == 0 {
            low
        } else {
            low | self.hi[x * self.hi_len + (s >> 8) as usize]
        }
    }

    #[inline]
    pub(crate) fn full(&self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }

    #[inline]
    pub(crate) fn symbols(&self) -> usize {
        self.k
    }

    #[inline]
    pub(crate) fn subsets(&self) -> usize {
        1usize << self.n
    }
}

const UNSEEN: u16 = u16::MAX;

/// Outcome of a shortest-synchronizing-word search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyncResult {
    pub length: usize,
    /// Lexicographically least (by symbol index) shortest synchronizing word.
    pub witness: Word,
    /// Number of distinct synchronizing words of length `length`. Saturates at
    /// `u128::MAX`.
    pub count: u128,
    /// States that some shortest synchronizing word ends in.
    pub sync_states: StateSet,
}

/// Breadth-first search from `Q` to the singletons. `None` if the DFA does not
/// synchronize.
pub fn shortest_sync(dfa: &Dfa) -> Option<SyncResult> {
    let pa = PowerAutomaton::new(dfa);
    let full = pa.full();
    if StateSet(full).is_singleton() {
        return Some(SyncResult {
            length: 0,
            witness: Word::empty(),
            count: 1,
            sync_states: StateSet(full),
        });
    }
    let size = pa.subsets();
    let mut dist = vec![UNSEEN; size];
    let mut count = vec![0u128; size];
    let mut parent = vec![0u32; size];
    let mut parent_symbol = vec![0u32; size];
    dist[full as usize] = 0;
    count[full as usize] = 1;
    let mut level = vec![full];
    let mut next = Vec::new();
    let mut depth: u16 = 0;
    while !level.is_empty() {
        next.clear();
        for &s in &level {
            for x in 0..pa.symbols() {
                let t = pa.step(s, x);
                let ti = t as usize;
                if dist[ti] == UNSEEN {
                    dist[ti] = depth + 1;
                    parent[ti] = s;
                    parent_symbol[ti] = x as u32;
                    next.push(t);
                }
                if dist[ti] == depth + 1 {
                    count[ti] = count[ti].saturating_add(count[s as usize]);
                }
            }
        }
        depth += 1;
        // `next` is in discovery order, which is lexicographic order of the
        // least words reaching each set.
        let singles: Vec<u32> = next
            .iter()
            .copied()
            .filter(|&s| StateSet(s).is_singleton())
            .collect();
        if let Some(&first) = singles.first() {
            let mut letters = Vec::with_capacity(depth as usize);
            let mut cur = first;
            while cur != full {
                letters.push(parent_symbol[cur as usize] as usize);
                cur = parent[cur as usize];
            }
            letters.reverse();
            let total = singles
                .iter()
                .fold(0u128, |acc, &s| acc.saturating_add(count[s as usize]));
            return Some(SyncResult {
                length: depth as usize,
                witness: Word(letters),
                count: total,
                sync_states: StateSet(singles.iter().fold(0, |a, &s| a | s)),
            });
        }
        std::mem::swap(&mut level, &mut next);
    }
    None
}

/// Length of a shortest synchronizing word, without counting or witnesses.
pub fn sync_length(dfa: &Dfa) -> Option<usize> {
    sync_length_in(&PowerAutomaton::new(dfa))
}

pub(crate) fn sync_length_in(pa: &PowerAutomaton) -> Option<usize> {
    let full = pa.full();
    if StateSet(full).is_singleton() {
        return Some(0);
    }
    let mut seen = vec![false; pa.subsets()];
    seen[full as usize] = true;
    let mut level = vec![full];
    let mut next = Vec::new();
    let mut depth = 0;
    while !level.is_empty() {
        depth += 1;
        next.clear();
        for &s in &level {
            for x in 0..pa.symbols() {
                let t = pa.step(s, x);
                if t & (t - 1) == 0 {
                    return Some(depth);
                }
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    next.push(t);
                }
            }
        }
        std::mem::swap(&mut level, &mut next);
    }
    None
}

/// All subsets of `0..n` with exactly `k` elements, in increasing order.
pub(crate) fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u32> {
    let limit = 1u64 << n;
    let mut cur: u64 = if k == 0 { 0 } else { (1u64 << k) - 1 };
    let mut done = k > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = cur as u32;
        if cur == 0 {
            done = true;
        } else {
            // Gosper's hack.
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            cur = (((r ^ cur) >> 2) / c) | r;
            if cur >= limit {
                done = true;
            }
        }
        Some(out)
    })
}

/// Shortest reduction-word length for every `k`-subset, indexed by bit mask;
/// `None` for irreducible sets. Entries for other sizes are left `None`.
pub(crate) fn reduction_lengths(pa: &PowerAutomaton, k: usize) -> Vec<Option<u16>> {
    let n = pa.n;
    let mut red: Vec<Option<u16>> = vec![None; pa.subsets()];
    let sets: Vec<u32> = subsets_of_size(n, k).collect();
    // Reverse edges inside the size-k layer.
    let mut preds: Vec<Vec<u32>> = vec![Vec::new(); pa.subsets()];
    let mut frontier = Vec::new();
    for &s in &sets {
        let mut reduced = false;
        for x in 0..pa.symbols() {
            let t = pa.step(s, x);
            if (t.count_ones() as usize) < k {
                reduced = true;
            } else {
                preds[t as usize].push(s);
            }
        }
        if reduced {
            red[s as usize] = Some(1);
            frontier.push(s);
        }
    }
    let mut d = 1u16;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &t in &frontier {
            for &s in &preds[t as usize] {
                if red[s as usize].is_none() {
                    red[s as usize] = Some(d + 1);
                    next.push(s);
                }
            }
        }
        frontier = next;
        d += 1;
    }
    red
}

/// True iff every pair of states can be merged, i.e. the DFA synchronizes.
pub fn is_synchronizing_by_pairs(dfa: &Dfa) -> bool {
    let n = dfa.n();
    n == 1 || reducible_pair_count(dfa) == n * (n - 1) / 2
}

/// Number of 2-subsets that admit a reduction word.
pub fn reducible_pair_count(dfa: &Dfa) -> usize {
    if dfa.n() < 2 {
        return 0;
    }
    let pa = PowerAutomaton::new(dfa);
    reducible_pair_count_in(&pa)
}

pub(crate) fn reducible_pair_count_in(pa: &PowerAutomaton) -> usize {
    let red = reduction_lengths(pa, 2);
    subsets_of_size(pa.n, 2)
        .filter(|&s| red[s as usize].is_some())
        .count()
}

/// Staged upper bound on the synchronization length of any synchronizing
/// extension of a DFA.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionBound {
    /// Size of a smallest set reachable from `Q`.
    pub smallest_size: usize,
    /// Distance from `Q` to the nearest reachable set of that size.
    pub m: usize,
    /// `(k, m_k, l_k)` for `k = 2..=smallest_size`.
    pub per_size: Vec<(usize, usize, usize)>,
    /// `m + sum(m_k + l_k)`.
    pub total: usize,
}

impl ExtensionBound {
    pub fn stage(&self, k: usize) -> Option<(usize, usize)> {
        self.per_size
            .iter()
            .find(|(size, _, _)| *size == k)
            .map(|&(_, mk, lk)| (mk, lk))
    }
}

/// Which strongly connected components of the irreducible-set graph add one
/// step each to `m_k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ComponentCount {
    /// Every component, including single sets without a self-loop.
    #[default]
    All,
    /// Only components containing a cycle.
    Cyclic,
}

pub fn extension_bound(dfa: &Dfa) -> ExtensionBound {
    extension_bound_in(&PowerAutomaton::new(dfa))
}

/// [`extension_bound`] with a different component count in `m_k`.
pub fn extension_bound_counting(dfa: &Dfa, count: ComponentCount) -> ExtensionBound {
    extension_bound_with(&PowerAutomaton::new(dfa), count)
}

pub(crate) fn extension_bound_in(pa: &PowerAutomaton) -> ExtensionBound {
    extension_bound_with(pa, ComponentCount::All)
}

fn extension_bound_with(pa: &PowerAutomaton, count: ComponentCount) -> ExtensionBound {
    let n = pa.n;
    let full = pa.full();

    // Step 1: smallest reachable size and its distance from Q.
    let mut dist = vec![UNSEEN; pa.subsets()];
    dist[full as usize] = 0;
    let mut queue = std::collections::VecDeque::from([full]);
    let mut smallest = n;
    let mut m = 0usize;
    while let Some(s) = queue.pop_front() {
        let size = s.count_ones() as usize;
        if size < smallest {
            smallest = size;
            m = dist[s as usize] as usize;
        }
        for x in 0..pa.symbols() {
            let t = pa.step(s, x);
            if dist[t as usize] == UNSEEN {
                dist[t as usize] = dist[s as usize] + 1;
                queue.push_back(t);
            }
        }
    }

    let mut per_size = Vec::new();
    let mut total = m;
    for k in 2..=smallest {
        let red = reduction_lengths(pa, k);
        let mut l_k = 0usize;
        let mut irreducible = Vec::new();
        for s in subsets_of_size(n, k) {
            match red[s as usize] {
                Some(d) => l_k = l_k.max(d as usize),
                None => irreducible.push(s),
            }
        }
        let m_k = irreducible_component_cost(pa, &irreducible, count);
        per_size.push((k, m_k, l_k));
        total += m_k + l_k;
    }
    ExtensionBound {
        smallest_size: smallest,
        m,
        per_size,
        total,
    }
}

/// Number of strongly connected components of the graph on the given
/// irreducible sets plus the sum of their diameters.
fn irreducible_component_cost(pa: &PowerAutomaton, sets: &[u32], count: ComponentCount) -> usize {
    if sets.is_empty() {
        return 0;
    }
    let mut index = vec![u32::MAX; pa.subsets()];
    let mut graph = DiGraph::<u32, ()>::with_capacity(sets.len(), sets.len() * pa.symbols());
    for &s in sets {
        index[s as usize] = graph.add_node(s).index() as u32;
    }
    for &s in sets {
        for x in 0..pa.symbols() {
            let t = pa.step(s, x);
            let ti = index[t as usize];
            // Images of irreducible sets are irreducible sets of the same size.
            debug_assert!(ti != u32::MAX);
            if ti != u32::MAX {
                graph.update_edge(
                    NodeIndex::new(index[s as usize] as usize),
                    NodeIndex::new(ti as usize),
                    (),
                );
            }
        }
    }
    let comps = tarjan_scc(&graph);
    let mut comp_of = vec![usize::MAX; sets.len()];
    for (c, nodes) in comps.iter().enumerate() {
        for v in nodes {
            comp_of[v.index()] = c;
        }
    }
    let mut cost = match count {
        ComponentCount::All => comps.len(),
        ComponentCount::Cyclic => comps
            .iter()
            .filter(|c| c.len() > 1 || graph.contains_edge(c[0], c[0]))
            .count(),
    };
    let mut dist = vec![usize::MAX; sets.len()];
    let mut queue = std::collections::VecDeque::new();
    for (c, nodes) in comps.iter().enumerate() {
        let mut diameter = 0;
        for &src in nodes {
            for &v in nodes {
                dist[v.index()] = usize::MAX;
            }
            dist[src.index()] = 0;
            queue.push_back(src);
            while let Some(u) = queue.pop_front() {
                diameter = diameter.max(dist[u.index()]);
                for v in graph.neighbors(u) {
                    if comp_of[v.index()] == c && dist[v.index()] == usize::MAX {
                        dist[v.index()] = dist[u.index()] + 1;
                        queue.push_back(v);
                    }
                }
            }
        }
        cost += diameter;
    }
    cost
}

/// Distance from `from` to `to` in the power automaton, with the word realizing it.
pub fn shortest_path(dfa: &Dfa, from: StateSet, to: StateSet) -> Option<Word> {
    let pa = PowerAutomaton::new(dfa);
    let size = pa.subsets();
    let mut parent = vec![(u32::MAX, 0u32); size];
    let mut seen = vec![false; size];
    seen[from.0 as usize] = true;
    let mut queue = std::collections::VecDeque::from([from.0]);
    while let Some(s) = queue.pop_front() {
        if s == to.0 {
            let mut letters = Vec::new();
            let mut cur = s;
            while cur != from.0 {
                let (p, x) = parent[cur as usize];
                letters.push(x as usize);
                cur = p;
            }
            letters.reverse();
            return Some(Word(letters));
        }
        for x in 0..pa.symbols() {
            let t = pa.step(s, x);
            if !seen[t as usize] {
                seen[t as usize] = true;
                parent[t as usize] = (s, x as u32);
                queue.push_back(t);
            }
        }
    }
    None
}

/// Every shortest synchronizing word in lexicographic order, or `None` if the
/// DFA does not synchronize or there are more than `limit` of them.
pub fn shortest_sync_words(dfa: &Dfa, limit: usize) -> Option<Vec<Word>> {
    let result = shortest_sync(dfa)?;
    if result.count > limit as u128 {
        return None;
    }
    let pa = PowerAutomaton::new(dfa);
    let target = result.length;
    // Sets reachable from Q at their BFS depth, and whether a singleton is
    // reachable from them within the remaining budget.
    let mut dist = vec![UNSEEN; pa.subsets()];
    let full = pa.full();
    dist[full as usize] = 0;
    let mut level = vec![full];
    for d in 1..=target as u16 {
        let mut next = Vec::new();
        for &s in &level {
            for x in 0..pa.symbols() {
                let t = pa.step(s, x);
                if dist[t as usize] == UNSEEN {
                    dist[t as usize] = d;
                    next.push(t);
                }
            }
        }
        level = next;
    }
    let mut useful = vec![false; pa.subsets()];
    for (s, &d) in dist.iter().enumerate() {
        useful[s] = d as usize == target && StateSet(s as u32).is_singleton();
    }
    for d in (0..target as u16).rev() {
        for s in 0..pa.subsets() {
            if dist[s] == d {
                useful[s] = (0..pa.symbols()).any(|x| {
                    let t = pa.step(s as u32, x) as usize;
                    dist[t] == d + 1 && useful[t]
                });
            }
        }
    }
    let mut words = Vec::new();
    let mut stack = vec![(full, Vec::new())];
    while let Some((s, letters)) = stack.pop() {
        if letters.len() == target {
            words.push(Word(letters));
            continue;
        }
        for x in (0..pa.symbols()).rev() {
            let t = pa.step(s, x);
            if dist[t as usize] as usize == letters.len() + 1 && useful[t as usize] {
                let mut next = letters.clone();
                next.push(x);
                stack.push((t, next));
            }
        }
    }
    Some(words)
}
