use std::collections::VecDeque;

use slowsync::extension::{
    build_shorter_word, build_shorter_word_with_loop, classify, lift_permutation,
    loop_decomposition, verify_no_critical_extension, CaseKind, LoopRule, LoopShape, LoopStructure,
};
use slowsync::families::cerny;
use slowsync::powerset::{apply_word_to_set, sync_length};
use slowsync::{Dfa, StateSet, Transformation};

fn non_trivial_symbols(n: usize) -> Vec<Transformation> {
    let cn = cerny(n).unwrap();
    (0..(n as u64).pow(n as u32))
        .map(|i| Transformation::from_index(n, i).unwrap())
        .filter(|t| !t.is_identity() && !cn.symbols().contains(t))
        .collect()
}

/// Distance between two sets in the power automaton of `dfa`.
fn set_distance(dfa: &Dfa, from: StateSet, to: StateSet) -> Option<usize> {
    let mut seen = vec![false; 1 << dfa.n()];
    let mut queue = VecDeque::from([(from, 0)]);
    seen[from.bits() as usize] = true;
    while let Some((s, d)) = queue.pop_front() {
        if s == to {
            return Some(d);
        }
        for x in 0..dfa.alphabet_size() {
            let t = slowsync::step_set(dfa, s, x);
            if !seen[t.bits() as usize] {
                seen[t.bits() as usize] = true;
                queue.push_back((t, d + 1));
            }
        }
    }
    None
}

#[test]
fn small_sweeps_match_direct_computation() {
    for n in 3..=5 {
        let report = verify_no_critical_extension(n, false).unwrap();
        let cn = cerny(n).unwrap();
        let lengths: Vec<usize> = non_trivial_symbols(n)
            .iter()
            .map(|&c| sync_length(&cn.with_symbol(c).unwrap()).unwrap())
            .collect();
        assert_eq!(report.rows.len(), lengths.len());
        assert_eq!(report.max_length_found, *lengths.iter().max().unwrap());
        assert_eq!(
            report.all_below,
            lengths.iter().all(|&l| l < (n - 1) * (n - 1))
        );
    }
}

#[test]
fn four_states_have_no_extension_of_critical_length() {
    let report = verify_no_critical_extension(4, false).unwrap();
    assert_eq!(report.rows.len(), 253);
    assert!(report.all_below);
    assert_eq!(report.max_length_found, 8);
}

#[test]
fn sweeps_for_five_and_six_states() {
    for (n, maps) in [(5, 3122), (6, 46653)] {
        let report = verify_no_critical_extension(n, true).unwrap();
        assert_eq!(report.rows.len(), maps);
        assert_eq!(report.trivial_skipped, 3);
        assert!(report.all_below, "n = {n}: {:?}", report.counterexamples);
        assert!(
            report.plan_failures.is_empty(),
            "n = {n}: {:?}",
            report.plan_failures
        );
        assert_eq!(report.residual, 0);
        assert!(report
            .rows
            .iter()
            .all(|r| r.plan_length.is_some_and(|p| p >= r.length)));
        let csv = report.to_csv();
        assert_eq!(csv.lines().count(), maps + 1);
        assert!(csv.starts_with("c,case,length,plan_length\n"));
    }
}

#[test]
fn plans_shortcut_the_cerny_distance() {
    for n in [5, 6] {
        let cn = cerny(n).unwrap();
        for c in non_trivial_symbols(n) {
            let plan = build_shorter_word(n, &c).unwrap();
            let ext = cn.with_symbol(c).unwrap();
            let end = apply_word_to_set(&ext, plan.s, &plan.w);
            if plan.subset_only {
                assert!(!end.is_empty() && end.is_subset(plan.s_target), "{c:?}");
            } else {
                assert_eq!(end, plan.s_target, "{c:?}");
            }
            assert_eq!(
                Some(plan.baseline_distance),
                set_distance(&cn, plan.s, plan.s_target),
                "{c:?}"
            );
            assert!(plan.w.len() < plan.baseline_distance, "{c:?}");
            let reset = plan.reset_word(n).unwrap();
            let whole = apply_word_to_set(&ext, StateSet::full(n), &reset);
            assert!(whole.is_singleton(), "{c:?}");
            assert!(reset.len() < (n - 1) * (n - 1));
        }
    }
}

#[test]
fn loop_structures_rebuild_their_symbol() {
    let n = 6;
    let mut permutations = 0;
    let mut missing_one = 0;
    for c in non_trivial_symbols(n) {
        let Ok(loops) = loop_decomposition(&c) else {
            continue;
        };
        assert_eq!(loops.transformation(n).unwrap(), c);
        assert_eq!(
            loops.lengths.iter().sum::<usize>() + usize::from(loops.shape == LoopShape::MissingOne),
            n
        );
        match loops.shape {
            LoopShape::Permutation => permutations += 1,
            LoopShape::MissingOne => missing_one += 1,
        }
    }
    // Compositions of 6 minus the full cycle, compositions of 5 minus b.
    assert_eq!(permutations, (1 << 5) - 2);
    assert_eq!(missing_one, (1 << 4) - 1);
}

#[test]
fn lifted_permutation_agrees_away_from_state_one() {
    let n = 7;
    let two = StateSet::singleton(1);
    for c in non_trivial_symbols(n) {
        let Ok(lift) = lift_permutation(&c) else {
            continue;
        };
        assert!(lift.is_permutation());
        assert_eq!(lift.image(0), 0);
        let image =
            |t: &Transformation, s: StateSet| StateSet::from_states(s.iter().map(|q| t.image(q)));
        for bits in 0u32..1 << n {
            let s = StateSet::from_bits(bits);
            assert!(
                image(&c, s).is_subset(image(&lift, s).without(0).union(two)),
                "{c:?}"
            );
            if !s.contains(0) {
                let (mut x, mut y) = (s, s);
                for _ in 0..n {
                    x = image(&c, x);
                    y = image(&lift, y);
                    assert_eq!(x, y, "{c:?}");
                }
            }
        }
    }
}

#[test]
fn every_loop_choice_gives_a_valid_plan() {
    let n = 8;
    let cn = cerny(n).unwrap();
    let mut built = 0;
    // Compositions of n as cut positions between consecutive states.
    for cuts in 0u32..1 << (n - 1) {
        let mut lengths = vec![1];
        for i in 0..n - 1 {
            if cuts >> i & 1 == 1 {
                lengths.push(1);
            } else {
                *lengths.last_mut().unwrap() += 1;
            }
        }
        if lengths.len() < 2 {
            continue;
        }
        let loops = LoopStructure {
            shape: LoopShape::Permutation,
            lengths: lengths.clone(),
        };
        let c = loops.transformation(n).unwrap();
        let ext = cn.with_symbol(c).unwrap();
        for k in 1..=lengths.len() {
            let Ok(plan) = build_shorter_word_with_loop(n, &c, k) else {
                continue;
            };
            assert_eq!(
                apply_word_to_set(&ext, plan.s, &plan.w),
                plan.s_target,
                "{lengths:?} k={k}"
            );
            assert!(plan.w.len() < plan.baseline_distance);
            let reset = plan.reset_word(n).unwrap();
            assert!(apply_word_to_set(&ext, StateSet::full(n), &reset).is_singleton());
            built += 1;
        }
    }
    assert!(built > 200, "{built}");
}

#[test]
fn default_rule_takes_the_first_long_loop() {
    let c = LoopStructure {
        shape: LoopShape::Permutation,
        lengths: vec![2, 3, 3],
    }
    .transformation(8)
    .unwrap();
    match classify(&c, 8).unwrap().kind {
        CaseKind::PermutationLoops { rule, .. } => assert_eq!(rule, LoopRule::Long { k: 2 }),
        other => panic!("{other:?}"),
    }
}
