//! Parametric families of slowly synchronizing automata and closed-form
//! lower bounds on the maximal synchronization length `d(n, k)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::automaton::{Dfa, Transformation, Word};
use crate::error::{Error, Result};

pub use crate::catalog::{catalog, catalog_entry, expand_words, verify_catalog, CatalogEntry};

/// Černý's automaton `C_n`: `a` is the cyclic shift, `b` merges state 1 into 2.
pub fn cerny(n: usize) -> Result<Dfa> {
    if n < 2 {
        return Err(Error::invalid(format!("C_n needs n >= 2, got {n}")));
    }
    let shift: Vec<usize> = (0..n).map(|q| (q + 1) % n).collect();
    let mut merge: Vec<usize> = (0..n).collect();
    merge[0] = 1;
    Dfa::new(
        n,
        vec![Transformation::new(&shift)?, Transformation::new(&merge)?],
    )
}

/// `b (a^{n-1} b)^{n-2}`, the unique shortest reset word of `C_n`.
pub fn cerny_word(n: usize) -> Word {
    let mut w = Word(vec![1]);
    for _ in 0..n.saturating_sub(2) {
        w.extend_repeated(0, n - 1);
        w.push(1);
    }
    w
}

/// Alphabet restrictions of the five-symbol family with quadratic
/// synchronization length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyVariant {
    /// All of `a, b, c, d, e`.
    Full,
    /// Without `d`.
    NoD,
    /// Without `c`.
    NoC,
    /// Without `c, d`.
    NoCD,
    /// Only `a, e`.
    NoBCD,
}

impl FamilyVariant {
    pub const ALL: [FamilyVariant; 5] = [
        FamilyVariant::Full,
        FamilyVariant::NoD,
        FamilyVariant::NoC,
        FamilyVariant::NoCD,
        FamilyVariant::NoBCD,
    ];

    /// Names of the retained symbols, in symbol order.
    pub fn letters(self) -> &'static [char] {
        match self {
            FamilyVariant::Full => &['a', 'b', 'c', 'd', 'e'],
            FamilyVariant::NoD => &['a', 'b', 'c', 'e'],
            FamilyVariant::NoC => &['a', 'b', 'd', 'e'],
            FamilyVariant::NoCD => &['a', 'b', 'e'],
            FamilyVariant::NoBCD => &['a', 'e'],
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            FamilyVariant::Full => "A",
            FamilyVariant::NoD => "A-d",
            FamilyVariant::NoC => "A-c",
            FamilyVariant::NoCD => "A-cd",
            FamilyVariant::NoBCD => "A-bcd",
        }
    }

    /// Shortest synchronization length for `n >= 5`.
    pub fn expected_length(self, n: usize) -> usize {
        let base = n * n - 3 * n;
        match self {
            FamilyVariant::Full => base + 2,
            FamilyVariant::NoD | FamilyVariant::NoC => base + 3,
            FamilyVariant::NoCD | FamilyVariant::NoBCD => base + 4,
        }
    }

    /// Index of a named symbol inside this variant's alphabet.
    pub fn symbol_index(self, letter: char) -> Option<usize> {
        self.letters().iter().position(|&c| c == letter)
    }

    /// Translates a word written with the full family's letter names.
    pub fn word(self, letters: &str) -> Result<Word> {
        letters
            .chars()
            .map(|c| {
                self.symbol_index(c).ok_or_else(|| {
                    Error::invalid(format!("letter {c} not in variant {}", self.tag()))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl fmt::Display for FamilyVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for FamilyVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyVariant::ALL
            .into_iter()
            .find(|v| v.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown variant {s:?}; expected one of A, A-d, A-c, A-cd, A-bcd"
                ))
            })
    }
}

/// Smallest state count for which the family's table rows are disjoint.
pub const FAMILY_MIN_STATES: usize = 5;

/// The five-symbol family restricted to `variant`'s alphabet. States `1, 2, 3`
/// have special rows; every `q >= 4` moves to `q + 1`, with `n` wrapping to 1,
/// except under `b`, which fixes it.
pub fn quadratic_family(n: usize, variant: FamilyVariant) -> Result<Dfa> {
    if n < FAMILY_MIN_STATES {
        return Err(Error::Unsupported(format!(
            "family needs n >= {FAMILY_MIN_STATES}, got {n}"
        )));
    }
    if n > crate::automaton::MAX_STATES {
        return Err(Error::StateCount(n));
    }
    let next = |q: usize| q % n + 1;
    let row = |first: [usize; 3], tail: &dyn Fn(usize) -> usize| -> Result<Transformation> {
        let images: Vec<usize> = (1..=n)
            .map(|q| if q <= 3 { first[q - 1] } else { tail(q) })
            .collect();
        Transformation::from_one_based(&images)
    };
    let symbol = |letter: char| -> Result<Transformation> {
        match letter {
            'a' => row([2, 3, 4], &next),
            'b' => row([1, 3, 3], &|q| q),
            'c' => row([3, 3, 4], &next),
            'd' => row([2, 4, 4], &next),
            'e' => row([3, 4, 4], &next),
            _ => unreachable!(),
        }
    };
    let symbols = variant
        .letters()
        .iter()
        .map(|&c| symbol(c))
        .collect::<Result<Vec<_>>>()?;
    Dfa::new_basic(n, symbols)
}

/// Default cap on the alphabet produced by [`pad_construction`].
pub const DEFAULT_PAD_CAP: usize = 1 << 16;

/// Embeds a basic DFA on `n - m` states into `n` states: every symbol of
/// `base`, and the identity, is extended in all `n^m` ways on the new states;
/// the global identity is dropped. The result has `(k + 1) n^m - 1` symbols
/// and synchronizes no faster than `base`.
pub fn pad_construction(base: &Dfa, n: usize, cap: usize) -> Result<Dfa> {
    let small = base.n();
    if n < small {
        return Err(Error::invalid(format!(
            "target size {n} is below the base size {small}"
        )));
    }
    if n > crate::automaton::MAX_STATES {
        return Err(Error::StateCount(n));
    }
    if !base.is_basic() {
        return Err(Error::invalid("padding needs a basic base DFA"));
    }
    let m = n - small;
    let completions = (n as u128).pow(m as u32);
    let size = (base.alphabet_size() as u128 + 1) * completions - 1;
    if size > cap as u128 {
        return Err(Error::AlphabetCap { size, cap });
    }

    let identity = Transformation::identity(small)?;
    let mut symbols = Vec::with_capacity(size as usize);
    for t in base.symbols().iter().chain(std::iter::once(&identity)) {
        for tail in 0..completions {
            let mut images: Vec<usize> = t.images().iter().map(|&i| i as usize).collect();
            let mut rest = tail;
            let mut new_images = vec![0usize; m];
            for slot in new_images.iter_mut().rev() {
                *slot = (rest % n as u128) as usize;
                rest /= n as u128;
            }
            images.extend(new_images);
            let ext = Transformation::new(&images)?;
            if !ext.is_identity() {
                symbols.push(ext);
            }
        }
    }
    Dfa::new_basic(n, symbols)
}

/// Lower bound `(n - m - 1)^2` on `d(n, k)` where `m` is the least integer
/// with `3 n^m >= k + 1`. Valid for `2 <= k <= 3 n^{n-2} - 1`.
pub fn padding_bound(n: usize, k: &BigUint) -> Result<u64> {
    if n < 2 {
        return Err(Error::invalid(format!("need n >= 2, got {n}")));
    }
    let nn = BigUint::from(n);
    let three = BigUint::from(3u32);
    let upper = &three * nn.pow((n - 2) as u32) - 1u32;
    if *k < BigUint::from(2u32) || *k > upper {
        return Err(Error::invalid(format!(
            "alphabet size {k} outside 2..={upper} for n = {n}"
        )));
    }
    let target = k + 1u32;
    let mut m = 0usize;
    let mut reach = three;
    while reach < target {
        reach *= &nn;
        m += 1;
    }
    let side = (n - m - 1) as u64;
    Ok(side * side)
}
