use std::sync::OnceLock;

use crate::automaton::{Dfa, Word};
use crate::error::{Error, Result};
use crate::families::cerny;
use crate::powerset::{shortest_sync, shortest_sync_words};

/// A named critical DFA with its known shortest synchronizing words.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub dfa: Dfa,
    pub expected_length: usize,
    pub expected_count: u128,
    /// Shortest synchronizing words as a pattern: letters and alternatives
    /// such as `(a+c)` or `(baab+abaa)`.
    pub words: &'static str,
    /// No proper sub-alphabet is critical.
    pub minimal: bool,
    /// No basic one-symbol extension is critical.
    pub maximal: bool,
}

impl CatalogEntry {
    /// Checks length, count and the full set of shortest words.
    pub fn verify(&self) -> Result<()> {
        let fail = |reason: String| Error::Catalog {
            name: self.name.to_string(),
            reason,
        };
        if !self.dfa.is_basic() {
            return Err(fail("not basic".into()));
        }
        let r = shortest_sync(&self.dfa).ok_or_else(|| fail("not synchronizing".into()))?;
        if r.length != self.expected_length || r.count != self.expected_count {
            return Err(fail(format!(
                "length {} count {}, expected length {} count {}",
                r.length, r.count, self.expected_length, self.expected_count
            )));
        }
        let mut expected = expand_words(self.words)?;
        expected.sort();
        let found: Vec<String> = shortest_sync_words(&self.dfa, 1 << 12)
            .ok_or_else(|| fail("too many shortest words".into()))?
            .iter()
            .map(Word::to_string)
            .collect();
        if found != expected {
            return Err(fail(format!(
                "shortest words {found:?} differ from {}",
                self.words
            )));
        }
        Ok(())
    }
}

/// Expands a word pattern into all words it denotes.
pub fn expand_words(pattern: &str) -> Result<Vec<String>> {
    let mut words = vec![String::new()];
    let mut rest = pattern;
    while let Some(c) = rest.chars().next() {
        let alternatives: Vec<&str> = if c == '(' {
            let close = rest
                .find(')')
                .ok_or_else(|| Error::invalid(format!("unbalanced pattern {pattern}")))?;
            let group = &rest[1..close];
            rest = &rest[close + 1..];
            group.split('+').collect()
        } else if c.is_ascii_lowercase() {
            let (head, tail) = rest.split_at(1);
            rest = tail;
            vec![head]
        } else {
            return Err(Error::invalid(format!("bad character {c:?} in {pattern}")));
        };
        words = words
            .iter()
            .flat_map(|w| alternatives.iter().map(move |a| format!("{w}{a}")))
            .collect();
    }
    Ok(words)
}

struct Entry {
    name: &'static str,
    n: usize,
    rows: &'static [&'static [usize]],
    length: usize,
    count: u128,
    words: &'static str,
    minimal: bool,
    maximal: bool,
}

const ENTRIES: &[Entry] = &[
    Entry {
        name: "C3",
        n: 3,
        rows: &[],
        length: 4,
        count: 1,
        words: "baab",
        minimal: true,
        maximal: false,
    },
    Entry {
        name: "T3-1",
        n: 3,
        rows: &[&[2, 3, 1], &[3, 3, 2]],
        length: 4,
        count: 1,
        words: "baab",
        minimal: true,
        maximal: false,
    },
    Entry {
        name: "T3-2",
        n: 3,
        rows: &[&[3, 3, 2], &[1, 3, 2], &[2, 1, 3]],
        length: 4,
        count: 1,
        words: "acba",
        minimal: true,
        maximal: false,
    },
    Entry {
        name: "T3-3",
        n: 3,
        rows: &[&[2, 1, 3], &[2, 2, 3], &[1, 3, 2]],
        length: 4,
        count: 1,
        words: "bacb",
        minimal: true,
        maximal: false,
    },
    Entry {
        name: "A3",
        n: 3,
        rows: &[&[2, 3, 1], &[2, 2, 3], &[2, 1, 3], &[3, 3, 2], &[1, 3, 2]],
        length: 4,
        count: 16,
        words: "(b+d)(a+c)(a+e)(b+d)",
        minimal: false,
        maximal: true,
    },
    Entry {
        name: "C4",
        n: 4,
        rows: &[],
        length: 9,
        count: 1,
        words: "baaabaaab",
        minimal: true,
        maximal: true,
    },
    Entry {
        name: "CPR",
        n: 4,
        rows: &[&[4, 1, 3, 2], &[3, 3, 1, 4]],
        length: 9,
        count: 1,
        words: "baababaab",
        minimal: true,
        maximal: false,
    },
    Entry {
        name: "T4-1",
        n: 4,
        rows: &[&[3, 3, 1, 4], &[2, 1, 3, 4], &[4, 2, 3, 1]],
        length: 9,
        count: 1,
        words: "abcacabca",
        minimal: true,
        maximal: false,
    },
    Entry {
        name: "T4-2",
        n: 4,
        rows: &[&[4, 3, 1, 3], &[1, 2, 4, 3], &[3, 4, 1, 2]],
        length: 9,
        count: 4,
        words: "acb(a+c)a(a+b)cba",
        minimal: true,
        maximal: true,
    },
    Entry {
        name: "A4",
        n: 4,
        rows: &[
            &[4, 1, 3, 2],
            &[3, 3, 1, 4],
            &[1, 1, 3, 4],
            &[2, 1, 3, 4],
            &[4, 2, 3, 1],
        ],
        length: 9,
        count: 256,
        words: "(b+c)(a+d)(a+e)(b+c)(a+e)b(a+d)(a+e)(b+c)",
        minimal: false,
        maximal: true,
    },
    Entry {
        name: "C5",
        n: 5,
        rows: &[],
        length: 16,
        count: 1,
        words: "baaaabaaaabaaaab",
        minimal: true,
        maximal: true,
    },
    Entry {
        name: "Roman",
        n: 5,
        rows: &[&[1, 2, 4, 3, 3], &[1, 2, 3, 5, 4], &[3, 4, 1, 2, 5]],
        length: 16,
        count: 1,
        words: "abcacacbcaacabca",
        minimal: true,
        maximal: true,
    },
    Entry {
        name: "C6",
        n: 6,
        rows: &[],
        length: 25,
        count: 1,
        words: "baaaaabaaaaabaaaaabaaaaab",
        minimal: true,
        maximal: true,
    },
    Entry {
        name: "Kari",
        n: 6,
        rows: &[&[2, 4, 6, 1, 3, 5], &[1, 2, 3, 5, 4, 4]],
        length: 25,
        count: 2,
        words: "baabababaabbaba(baab+abaa)babaab",
        minimal: true,
        maximal: true,
    },
];

fn build(e: &Entry) -> Result<CatalogEntry> {
    let dfa = if e.rows.is_empty() {
        cerny(e.n)?
    } else {
        Dfa::from_rows(e.n, e.rows)?
    };
    let entry = CatalogEntry {
        name: e.name,
        dfa,
        expected_length: e.length,
        expected_count: e.count,
        words: e.words,
        minimal: e.minimal,
        maximal: e.maximal,
    };
    entry.verify()?;
    Ok(entry)
}

/// All named critical DFAs, each verified on first use.
///
/// # Panics
/// If an entry fails its self-check; the tables are static data, so this is a
/// build defect rather than a runtime condition.
pub fn catalog() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        ENTRIES
            .iter()
            .map(|s| build(s).unwrap_or_else(|e| panic!("{e}")))
            .collect()
    })
}

pub fn catalog_entry(name: &str) -> Option<&'static CatalogEntry> {
    catalog().iter().find(|e| e.name.eq_ignore_ascii_case(name))
}

/// Builds and verifies every entry independently.
pub fn verify_catalog() -> Vec<(&'static str, Result<()>)> {
    ENTRIES
        .iter()
        .map(|s| (s.name, build(s).map(|_| ())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion() {
        assert_eq!(expand_words("baab").unwrap(), vec!["baab"]);
        assert_eq!(
            expand_words("(b+d)(a+c)").unwrap(),
            vec!["ba", "bc", "da", "dc"]
        );
        assert_eq!(
            expand_words("x(baab+abaa)y").unwrap(),
            vec!["xbaaby", "xabaay"]
        );
        assert!(expand_words("(ab").is_err());
        assert!(expand_words("a1").is_err());
    }
}
