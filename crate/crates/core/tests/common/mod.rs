#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use itertools::Itertools;

use slowsync::powerset::sync_length;
use slowsync::search::{enumerate, SearchConfig, TransformationSpace};
use slowsync::{Dfa, Transformation};

/// Canonical forms of all sub-DFAs of `dfa` that keep one of `cores`.
pub fn sub_dfas(dfa: &Dfa, cores: &[&[usize]]) -> HashSet<Dfa> {
    (0..dfa.alphabet_size())
        .powerset()
        .filter(|keep| cores.iter().any(|c| c.iter().all(|x| keep.contains(x))))
        .map(|keep| dfa.restrict(&keep).unwrap().canonical_form())
        .collect()
}

/// Canonical forms of the basic DFAs on `n` states with reset length `(n-1)^2`.
pub fn critical_classes(n: usize) -> HashSet<Dfa> {
    let mut config = SearchConfig::new(n).with_min_sync((n - 1) * (n - 1));
    config.witness_capture = true;
    let out = enumerate(config, 1).unwrap();
    let space = TransformationSpace::new(n).unwrap();
    out.witnesses
        .iter()
        .map(|w| space.dfa(&w.symbols).canonical_form())
        .collect()
}

pub fn three_state_dfa(indices: &[u64]) -> Dfa {
    Dfa::new(
        3,
        indices
            .iter()
            .map(|&i| Transformation::from_index(3, i).unwrap())
            .collect(),
    )
    .unwrap()
}

pub fn non_identity_symbols(n: usize) -> Vec<Transformation> {
    (0..(n as u64).pow(n as u32))
        .map(|i| Transformation::from_index(n, i).unwrap())
        .filter(|t| !t.is_identity())
        .collect()
}

/// Every non-empty basic non-synchronizing symbol set on 3 states, as sorted
/// index lists.
pub fn non_synchronizing_three_state_sets() -> Vec<Vec<u64>> {
    let all = non_identity_symbols(3);
    let mut found = Vec::new();
    let mut frontier = vec![Vec::<u64>::new()];
    while let Some(set) = frontier.pop() {
        for t in &all {
            if set.last().is_some_and(|&m| t.index() <= m) {
                continue;
            }
            let mut next = set.clone();
            next.push(t.index());
            if sync_length(&three_state_dfa(&next)).is_none() {
                found.push(next.clone());
                frontier.push(next);
            }
        }
    }
    found
}

/// Longest reset word over all synchronizing basic extensions of a
/// non-synchronizing 3-state symbol set, by recursion over added symbols.
pub fn longest_extension(set: &[u64], memo: &mut HashMap<Vec<u64>, usize>) -> usize {
    if let Some(&v) = memo.get(set) {
        return v;
    }
    let mut best = 0;
    for t in non_identity_symbols(3) {
        if set.contains(&t.index()) {
            continue;
        }
        let mut next = set.to_vec();
        next.push(t.index());
        next.sort_unstable();
        let v = match sync_length(&three_state_dfa(&next)) {
            Some(len) => len,
            None => longest_extension(&next, memo),
        };
        best = best.max(v);
    }
    memo.insert(set.to_vec(), best);
    best
}
