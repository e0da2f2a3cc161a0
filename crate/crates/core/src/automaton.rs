//! Deterministic automata as ordered lists of total transformations.
//!
//! States are `0..n` internally. The text format and all user-facing output
//! use `1..=n`. Initial and accepting states play no role in synchronization
//! and are not modelled.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Largest supported state count. Subsets of states are stored as bit masks.
pub const MAX_STATES: usize = 16;

/// The action of one symbol: a total map on `0..n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transformation {
    n: u8,
    images: [u8; MAX_STATES],
}

impl Transformation {
    /// Builds a transformation from 0-based images.
    pub fn new(images: &[usize]) -> Result<Self> {
        let n = images.len();
        check_state_count(n)?;
        let mut buf = [0u8; MAX_STATES];
        for (q, &img) in images.iter().enumerate() {
            if img >= n {
                return Err(Error::invalid(format!(
                    "image {img} of state {q} is out of range for {n} states"
                )));
            }
            buf[q] = img as u8;
        }
        Ok(Transformation {
            n: n as u8,
            images: buf,
        })
    }

    /// Builds a transformation from 1-based images, as written in the text format.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::invalid("images are 1-based; found 0"));
        }
        let zero: Vec<usize> = images.iter().map(|&q| q - 1).collect();
        Self::new(&zero)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(&(0..n).collect::<Vec<_>>())
    }

    /// Constant map sending every state to `target`.
    pub fn constant(n: usize, target: usize) -> Result<Self> {
        Self::new(&vec![target; n])
    }

    /// Inverse of [`Transformation::index`].
    pub fn from_index(n: usize, mut index: u64) -> Result<Self> {
        check_state_count(n)?;
        let mut buf = [0u8; MAX_STATES];
        for q in (0..n).rev() {
            buf[q] = (index % n as u64) as u8;
            index /= n as u64;
        }
        if index != 0 {
            return Err(Error::invalid("transformation index out of range"));
        }
        Ok(Transformation {
            n: n as u8,
            images: buf,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn images(&self) -> &[u8] {
        &self.images[..self.n as usize]
    }

    #[inline]
    pub fn image(&self, q: usize) -> usize {
        self.images[q] as usize
    }

    /// Rank in the lexicographic order on image sequences. The identity of
    /// this order with the derived `Ord` is what the search relies on.
    pub fn index(&self) -> u64 {
        self.images()
            .iter()
            .fold(0u64, |acc, &img| acc * self.n as u64 + img as u64)
    }

    pub fn is_identity(&self) -> bool {
        self.images()
            .iter()
            .enumerate()
            .all(|(q, &i)| q == i as usize)
    }

    /// Number of distinct images, `|Qc|`.
    pub fn image_size(&self) -> usize {
        let mut seen = 0u32;
        for &i in self.images() {
            seen |= 1 << i;
        }
        seen.count_ones() as usize
    }

    pub fn deficiency(&self) -> usize {
        self.n() - self.image_size()
    }

    pub fn is_permutation(&self) -> bool {
        self.deficiency() == 0
    }

    /// `self` followed by `then`: `q -> then(self(q))`.
    pub fn then(&self, then: &Transformation) -> Transformation {
        let mut out = *self;
        for q in 0..self.n() {
            out.images[q] = then.images[self.images[q] as usize];
        }
        out
    }

    /// Conjugate by the state relabelling `perm` (state `q` becomes `perm[q]`).
    pub fn relabel(&self, perm: &[usize]) -> Transformation {
        let mut out = *self;
        for q in 0..self.n() {
            out.images[perm[q]] = perm[self.images[q] as usize] as u8;
        }
        out
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.images().iter().map(|&i| i as usize + 1).collect()
    }
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.one_based().iter().join(","))
    }
}

fn check_state_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_STATES {
        Err(Error::StateCount(n))
    } else {
        Ok(())
    }
}

/// A word over a DFA's alphabet, as symbol indices.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    /// Parses a word written with the letters `a..z`.
    pub fn from_letters(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| {
                if c.is_ascii_lowercase() {
                    Ok(c as usize - 'a' as usize)
                } else {
                    Err(Error::invalid(format!("letter {c:?} is not in a..z")))
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn push(&mut self, symbol: usize) {
        self.0.push(symbol);
    }

    pub fn extend_repeated(&mut self, symbol: usize, times: usize) {
        self.0.extend(std::iter::repeat_n(symbol, times));
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &x in &self.0 {
            if x < 26 {
                write!(f, "{}", (b'a' + x as u8) as char)?;
            } else {
                write!(f, "[{x}]")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// A DFA without initial or final states: a state count and an ordered alphabet
/// of transformations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dfa {
    n: usize,
    symbols: Vec<Transformation>,
}

impl Dfa {
    pub fn new(n: usize, symbols: Vec<Transformation>) -> Result<Self> {
        check_state_count(n)?;
        if let Some(t) = symbols.iter().find(|t| t.n() != n) {
            return Err(Error::invalid(format!(
                "symbol {t:?} acts on {} states, expected {n}",
                t.n()
            )));
        }
        Ok(Dfa { n, symbols })
    }

    /// Like [`Dfa::new`] but rejects identity and duplicate symbols.
    pub fn new_basic(n: usize, symbols: Vec<Transformation>) -> Result<Self> {
        let dfa = Self::new(n, symbols)?;
        dfa.check_basic()?;
        Ok(dfa)
    }

    /// Builds a DFA from 1-based image rows.
    pub fn from_rows(n: usize, rows: &[&[usize]]) -> Result<Self> {
        let symbols = rows
            .iter()
            .map(|r| {
                if r.len() != n {
                    return Err(Error::invalid(format!(
                        "row has {} entries, expected {n}",
                        r.len()
                    )));
                }
                Transformation::from_one_based(r)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, symbols)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn symbols(&self) -> &[Transformation] {
        &self.symbols
    }

    #[inline]
    pub fn alphabet_size(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbol(&self, x: usize) -> &Transformation {
        &self.symbols[x]
    }

    /// Basic: symbols pairwise distinct and none the identity.
    pub fn is_basic(&self) -> bool {
        self.check_basic().is_ok()
    }

    fn check_basic(&self) -> Result<()> {
        for (i, t) in self.symbols.iter().enumerate() {
            if t.is_identity() {
                return Err(Error::invalid(format!("symbol {i} is the identity")));
            }
            if let Some(j) = self.symbols[..i].iter().position(|u| u == t) {
                return Err(Error::invalid(format!(
                    "symbols {j} and {i} act identically"
                )));
            }
        }
        Ok(())
    }

    /// State reached from `q` after reading `w`.
    pub fn apply(&self, q: usize, w: &Word) -> Result<usize> {
        if q >= self.n {
            return Err(Error::invalid(format!(
                "state {q} out of range for {} states",
                self.n
            )));
        }
        self.check_word(w)?;
        Ok(w.0.iter().fold(q, |q, &x| self.symbols[x].image(q)))
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        match w.0.iter().find(|&&x| x >= self.symbols.len()) {
            Some(x) => Err(Error::invalid(format!(
                "symbol index {x} out of range for alphabet of size {}",
                self.symbols.len()
            ))),
            None => Ok(()),
        }
    }

    /// The transformation induced by a whole word.
    pub fn word_action(&self, w: &Word) -> Result<Transformation> {
        self.check_word(w)?;
        let mut t = Transformation::identity(self.n)?;
        for &x in &w.0 {
            t = t.then(&self.symbols[x]);
        }
        Ok(t)
    }

    /// Sub-DFA keeping the listed symbols, in the listed order.
    pub fn restrict(&self, keep: &[usize]) -> Result<Dfa> {
        let symbols = keep
            .iter()
            .map(|&x| {
                self.symbols
                    .get(x)
                    .copied()
                    .ok_or_else(|| Error::invalid(format!("no symbol {x}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Dfa::new(self.n, symbols)
    }

    /// Extension by one more symbol.
    pub fn with_symbol(&self, t: Transformation) -> Result<Dfa> {
        let mut symbols = self.symbols.clone();
        symbols.push(t);
        Dfa::new(self.n, symbols)
    }

    /// Representative of the class under state relabelling and symbol
    /// reordering: over all `n!` relabellings, the lexicographically least
    /// sorted symbol list.
    pub fn canonical_form(&self) -> Dfa {
        let mut best: Option<Vec<Transformation>> = None;
        let mut buf = Vec::with_capacity(self.symbols.len());
        for perm in (0..self.n).permutations(self.n) {
            buf.clear();
            buf.extend(self.symbols.iter().map(|t| t.relabel(&perm)));
            buf.sort_unstable();
            if best.as_ref().is_none_or(|b| buf < *b) {
                best = Some(buf.clone());
            }
        }
        Dfa {
            n: self.n,
            symbols: best.unwrap_or_default(),
        }
    }

    pub fn is_isomorphic(&self, other: &Dfa) -> bool {
        self.n == other.n
            && self.symbols.len() == other.symbols.len()
            && self.canonical_form() == other.canonical_form()
    }

    /// Serializes to the text format: `n k` followed by one 1-based image row
    /// per symbol.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.symbols.len());
        for t in &self.symbols {
            s.push_str(&t.one_based().iter().join(" "));
            s.push('\n');
        }
        s
    }

    /// Parses the text format. With `require_basic` set, identity and
    /// duplicate symbols are rejected.
    pub fn parse(text: &str, require_basic: bool) -> Result<Dfa> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header line \"n k\""))?;
        let nums = parse_numbers(hline, header)?;
        let [n, k] = nums[..] else {
            return Err(Error::parse(hline, "header must be \"n k\""));
        };
        if n == 0 || n > MAX_STATES {
            return Err(Error::parse(
                hline,
                format!("state count {n} outside 1..={MAX_STATES}"),
            ));
        }

        let mut symbols = Vec::with_capacity(k);
        let mut last_line = hline;
        for (line, row) in lines.by_ref() {
            last_line = line;
            if symbols.len() == k {
                return Err(Error::parse(line, format!("more than {k} symbol rows")));
            }
            let images = parse_numbers(line, row)?;
            if images.len() != n {
                return Err(Error::parse(
                    line,
                    format!("row has {} entries, expected {n}", images.len()),
                ));
            }
            if let Some(bad) = images.iter().find(|&&q| q == 0 || q > n) {
                return Err(Error::parse(line, format!("image {bad} outside 1..={n}")));
            }
            let t = Transformation::from_one_based(&images)
                .map_err(|e| Error::parse(line, e.to_string()))?;
            if require_basic {
                if t.is_identity() {
                    return Err(Error::parse(line, "identity symbol in a basic DFA"));
                }
                if symbols.contains(&t) {
                    return Err(Error::parse(line, "duplicate symbol in a basic DFA"));
                }
            }
            symbols.push(t);
        }
        if symbols.len() != k {
            return Err(Error::parse(
                last_line,
                format!("expected {k} symbol rows, found {}", symbols.len()),
            ));
        }
        Dfa::new(n, symbols)
    }
}

fn parse_numbers(line: usize, s: &str) -> Result<Vec<usize>> {
    s.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| Error::parse(line, format!("not a number: {tok:?}")))
        })
        .collect()
}

impl FromStr for Dfa {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Dfa::parse(s, true)
    }
}

impl fmt::Debug for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Dfa")
            .field("n", &self.n)
            .field("symbols", &self.symbols)
            .finish()
    }
}

impl fmt::Display for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
