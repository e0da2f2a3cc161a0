mod common;

use common::{critical_classes, sub_dfas};
use itertools::Itertools;

use slowsync::families::{catalog, catalog_entry, cerny, expand_words, verify_catalog};
use slowsync::powerset::sync_length;
use slowsync::{Dfa, Transformation};

fn entry(name: &str) -> &'static Dfa {
    &catalog_entry(name).unwrap().dfa
}

#[test]
fn every_entry_verifies() {
    let results = verify_catalog();
    assert_eq!(results.len(), 14);
    for (name, r) in results {
        assert!(r.is_ok(), "{name}: {r:?}");
    }
}

#[test]
fn expected_lengths_and_counts() {
    let expected = [
        ("A3", 4, 16),
        ("T3-1", 4, 1),
        ("T3-2", 4, 1),
        ("T3-3", 4, 1),
        ("CPR", 9, 1),
        ("T4-1", 9, 1),
        ("T4-2", 9, 4),
        ("A4", 9, 256),
        ("Roman", 16, 1),
        ("Kari", 25, 2),
    ];
    for (name, len, count) in expected {
        let r = slowsync::shortest_sync(entry(name)).unwrap();
        assert_eq!((r.length, r.count), (len, count), "{name}");
    }
}

#[test]
fn restrictions_are_isomorphic_to_smaller_entries() {
    assert!(entry("A3")
        .restrict(&[0, 1])
        .unwrap()
        .is_isomorphic(&cerny(3).unwrap()));
    assert!(entry("A4")
        .restrict(&[0, 1])
        .unwrap()
        .is_isomorphic(entry("CPR")));
    assert!(entry("A4")
        .restrict(&[1, 3, 4])
        .unwrap()
        .is_isomorphic(entry("T4-1")));
}

#[test]
fn word_patterns() {
    assert_eq!(expand_words("(b+d)a").unwrap(), ["ba", "da"]);
    assert_eq!(expand_words("(b+d)(a+c)(a+e)(b+d)").unwrap().len(), 16);
    assert!(expand_words("(ab").is_err());
}

#[test]
fn three_state_criticals_are_the_large_sub_dfas_of_a3() {
    // a b c d e = 0 1 2 3 4
    let subs = sub_dfas(entry("A3"), &[&[0, 1], &[0, 3], &[1, 2, 4], &[2, 3, 4]]);
    assert_eq!(subs.len(), 15);
    assert_eq!(critical_classes(3), subs);
}

#[test]
fn four_state_criticals() {
    let mut expected = sub_dfas(entry("A4"), &[&[0, 1], &[1, 3, 4]]);
    assert_eq!(expected.len(), 10);
    expected.insert(cerny(4).unwrap().canonical_form());
    expected.insert(entry("T4-2").canonical_form());
    assert_eq!(critical_classes(4), expected);
}

fn is_minimal(dfa: &Dfa, len: usize) -> bool {
    let k = dfa.alphabet_size();
    (1..k)
        .flat_map(|size| (0..k).combinations(size))
        .all(|keep| sync_length(&dfa.restrict(&keep).unwrap()) != Some(len))
}

fn is_maximal(dfa: &Dfa, len: usize) -> bool {
    let n = dfa.n();
    (0..(n as u64).pow(n as u32))
        .map(|i| Transformation::from_index(n, i).unwrap())
        .filter(|t| !t.is_identity() && !dfa.symbols().contains(t))
        .all(|t| sync_length(&dfa.with_symbol(t).unwrap()) != Some(len))
}

#[test]
fn minimal_and_maximal_flags() {
    for e in catalog() {
        assert_eq!(
            is_minimal(&e.dfa, e.expected_length),
            e.minimal,
            "{} minimal",
            e.name
        );
        assert_eq!(
            is_maximal(&e.dfa, e.expected_length),
            e.maximal,
            "{} maximal",
            e.name
        );
    }
}
