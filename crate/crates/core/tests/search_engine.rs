use std::collections::{BTreeMap, HashSet};
use std::fs;

use itertools::Itertools;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use slowsync::search::{enumerate, heuristic_order, Search, SearchConfig, TransformationSpace};
use slowsync::{reducible_pair_count, Dfa, Transformation};

fn config(n: usize, s_min: usize) -> SearchConfig {
    SearchConfig::new(n).with_min_sync(s_min)
}

/// Number of distinct symbol sets in the relabelling orbit of `dfa`.
fn orbit_size(dfa: &Dfa) -> u64 {
    let n = dfa.n();
    (0..n)
        .permutations(n)
        .map(|p| {
            let mut s: Vec<Transformation> = dfa.symbols().iter().map(|t| t.relabel(&p)).collect();
            s.sort();
            s
        })
        .collect::<HashSet<_>>()
        .len() as u64
}

#[test]
fn labelled_counts_are_orbit_sums() {
    for (n, s_min) in [(2, 1), (3, 3)] {
        let mut sym = config(n, s_min);
        sym.witness_capture = true;
        let classes = enumerate(sym, 1).unwrap();
        let space = TransformationSpace::new(n).unwrap();
        let mut expected: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for w in &classes.witnesses {
            *expected.entry((w.length, w.symbols.len())).or_default() +=
                orbit_size(&space.dfa(&w.symbols));
        }
        let mut plain = config(n, s_min);
        plain.symmetry = false;
        let labelled = enumerate(plain, 1).unwrap();
        let mut got = BTreeMap::new();
        for (&len, col) in &labelled.table.counts {
            for (&k, &c) in col {
                got.insert((len, k), c);
            }
        }
        assert_eq!(got, expected, "n = {n}");
    }
}

#[test]
fn every_class_is_visited_once() {
    let mut search = Search::new(config(3, 3)).unwrap();
    let space = TransformationSpace::new(3).unwrap();
    let mut seen = HashSet::new();
    let mut duplicates = 0;
    let mut non_canonical = 0;
    search.step_with(u64::MAX, &mut |node| {
        let dfa = space.dfa(node);
        let canon = dfa.canonical_form();
        if canon != dfa {
            non_canonical += 1;
        }
        if !seen.insert(canon) {
            duplicates += 1;
        }
    });
    assert!(search.is_finished());
    assert_eq!(duplicates, 0);
    assert_eq!(non_canonical, 0);
    assert!(seen.len() > 300);
}

#[test]
fn pruning_never_changes_counts_on_small_alphabets() {
    for s_min in 1..=4 {
        let on = config(3, s_min).with_max_alphabet(4);
        let mut off = on.clone();
        off.prune_fast = false;
        off.prune_bound = false;
        off.heuristic = false;
        let a = enumerate(on, 1).unwrap();
        let b = enumerate(off, 1).unwrap();
        assert_eq!(a.table, b.table, "s_min = {s_min}");
        assert!(a.stats.visited <= b.stats.visited);
    }
}

#[test]
fn bound_pruning_alone_is_exact() {
    for s_min in [8, 9] {
        let pruned = config(4, s_min).with_max_alphabet(3);
        let mut only_fast = pruned.clone();
        only_fast.prune_bound = false;
        let a = enumerate(only_fast, 1).unwrap();
        let b = enumerate(pruned, 1).unwrap();
        assert_eq!(a.table, b.table, "s_min = {s_min}");
        assert!(b.stats.discarded_bound > 0);
    }
}

#[test]
fn parallel_matches_sequential() {
    for (n, s_min) in [(3, 3), (4, 9)] {
        let seq = enumerate(config(n, s_min), 1).unwrap();
        let par = enumerate(config(n, s_min), 3).unwrap();
        assert_eq!(seq.table, par.table);
        assert_eq!(seq.stats.visited, par.stats.visited);
    }
}

#[test]
fn interrupted_runs_resume_to_the_same_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cp.json");
    let straight = enumerate(config(3, 3), 1).unwrap();
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..5 {
        let _ = fs::remove_file(&path);
        loop {
            let mut search = Search::resume(config(3, 3), &path).unwrap();
            let done = search.step(rng.random_range(1..60));
            search.save_checkpoint(&path).unwrap();
            if done {
                break;
            }
        }
        let resumed = Search::resume(config(3, 3), &path).unwrap();
        assert!(resumed.is_finished());
        let out = resumed.into_outcome().unwrap();
        assert_eq!(out.table, straight.table);
        assert_eq!(out.table.to_csv(3, 4), straight.table.to_csv(3, 4));
    }
}

#[test]
fn checkpoint_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.json");
    fs::write(&empty, "").unwrap();
    let search = Search::resume(config(3, 3), &empty).unwrap();
    assert!(!search.is_finished());
    assert!(search.pending().is_empty());

    // Resuming a finished run is a no-op.
    let done = dir.path().join("done.json");
    let mut cfg = config(3, 3);
    cfg.checkpoint_path = Some(done.clone());
    let first = enumerate(cfg.clone(), 1).unwrap();
    let before = fs::read_to_string(&done).unwrap();
    let again = enumerate(cfg, 1).unwrap();
    assert_eq!(first.table, again.table);
    assert_eq!(again.stats, first.stats);
    assert_eq!(fs::read_to_string(&done).unwrap(), before);

    // A checkpoint for another configuration is refused.
    assert!(Search::resume(config(3, 4), &done).is_err());

    let corrupt = dir.path().join("corrupt.json");
    fs::write(&corrupt, "{not json").unwrap();
    assert!(Search::resume(config(3, 3), &corrupt).is_err());

    let mut value: serde_json::Value = serde_json::from_str(&before).unwrap();
    value["version"] = serde_json::json!(99);
    let old = dir.path().join("old.json");
    fs::write(&old, value.to_string()).unwrap();
    let err = Search::resume(config(3, 3), &old).err().unwrap();
    assert!(err.to_string().contains("version"));
}

#[test]
fn heuristic_is_a_stable_permutation() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..50 {
        let n = rng.random_range(3..=4);
        let count = (n as u64).pow(n as u32);
        let seed = Dfa::new(
            n,
            vec![Transformation::from_index(n, rng.random_range(0..count)).unwrap()],
        )
        .unwrap();
        let candidates: Vec<Transformation> = (0..12)
            .map(|_| Transformation::from_index(n, rng.random_range(0..count)).unwrap())
            .unique()
            .collect();
        let ordered = heuristic_order(&seed, &candidates).unwrap();
        let mut a = ordered.clone();
        let mut b = candidates.clone();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        for pair in ordered.windows(2) {
            let ka = reducible_pair_count(&seed.with_symbol(pair[0]).unwrap());
            let kb = reducible_pair_count(&seed.with_symbol(pair[1]).unwrap());
            assert!(ka > kb || (ka == kb && pair[0] < pair[1]));
        }
    }
}

#[test]
fn heuristic_on_cerny_seed_prefers_merging() {
    // Seed: C_3 without b. All 26 non-identity candidates except the shift.
    let shift = Transformation::from_one_based(&[2, 3, 1]).unwrap();
    let seed = Dfa::new(3, vec![shift]).unwrap();
    let candidates: Vec<Transformation> = (0..27)
        .map(|i| Transformation::from_index(3, i).unwrap())
        .filter(|t| !t.is_identity() && *t != shift)
        .collect();
    let ordered = heuristic_order(&seed, &candidates).unwrap();
    let b = Transformation::from_one_based(&[2, 2, 3]).unwrap();
    let pos = ordered.iter().position(|t| *t == b).unwrap();
    // Every candidate with rank 2 makes all pairs reducible together with
    // the shift; the permutations come last.
    let top = reducible_pair_count(&seed.with_symbol(ordered[0]).unwrap());
    assert_eq!(top, 3);
    assert_eq!(reducible_pair_count(&seed.with_symbol(b).unwrap()), 3);
    assert!(ordered[pos..]
        .iter()
        .all(|t| t.image_size() <= 2 || t.is_permutation()));
    assert!(ordered.iter().rev().take(4).all(|t| t.is_permutation()));
}

#[test]
fn witness_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(3, 4);
    cfg.witness_capture = true;
    let out = enumerate(cfg, 1).unwrap();
    assert_eq!(out.witnesses.len(), 15);
    let space = TransformationSpace::new(3).unwrap();
    slowsync::search::write_witnesses(&space, &out.witnesses, dir.path()).unwrap();
    let text = fs::read_to_string(dir.path().join("n3_len4.txt")).unwrap();
    let blocks: Vec<&str> = text
        .split("# length 4\n")
        .filter(|b| !b.trim().is_empty())
        .collect();
    assert_eq!(blocks.len(), 15);
    for block in blocks {
        let dfa: Dfa = block.parse().unwrap();
        assert_eq!(slowsync::shortest_sync(&dfa).unwrap().length, 4);
    }
}
