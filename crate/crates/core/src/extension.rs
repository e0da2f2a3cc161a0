//! One-symbol extensions of Černý's automaton `C_n`.
//!
//! For every extra symbol `c` other than the identity, `a` and `b`, the
//! builders here produce sets `S`, `S'` on the path of `C_n`'s shortest reset
//! word and a word over `{a, b, c}` taking `S` into `S'` faster than `C_n`
//! can. Splicing it into the reset word gives a reset word of `C_n + c`
//! shorter than `(n-1)^2`.
//!
//! States are 1-based throughout this module, matching the loop arithmetic;
//! [`StateSet`] values are converted at the boundary.

use std::fmt;

use rayon::prelude::*;

use crate::automaton::{Dfa, Transformation, Word};
use crate::error::{Error, Result};
use crate::families::cerny;
use crate::powerset::{apply_word_to_set, shortest_path, sync_length, StateSet};

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;

/// Shape of the extra symbol's cycles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopShape {
    /// A permutation with `qc <= q + 1` everywhere. Loop `i` covers the
    /// states `l_1 + ... + l_{i-1} + 1 ..= l_1 + ... + l_i`.
    Permutation,
    /// `Qc = Q \ {1}`, `1c = 2`, and the loops live on `2..=n`: loop `i`
    /// covers `l_1 + ... + l_{i-1} + 2 ..= l_1 + ... + l_i + 1`.
    MissingOne,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopStructure {
    pub shape: LoopShape,
    pub lengths: Vec<usize>,
}

impl LoopStructure {
    pub fn loop_count(&self) -> usize {
        self.lengths.len()
    }

    fn offset(&self) -> usize {
        match self.shape {
            LoopShape::Permutation => 0,
            LoopShape::MissingOne => 1,
        }
    }

    /// Rebuilds the symbol on `n` states.
    pub fn transformation(&self, n: usize) -> Result<Transformation> {
        let total: usize = self.lengths.iter().sum();
        if self.lengths.contains(&0) || total + self.offset() != n {
            return Err(Error::invalid(format!(
                "loop lengths {:?} do not cover {n} states",
                self.lengths
            )));
        }
        let mut images = vec![0; n];
        if self.shape == LoopShape::MissingOne {
            images[0] = 2;
        }
        let mut start = self.offset() + 1;
        for &l in &self.lengths {
            let end = start + l - 1;
            for q in start..end {
                images[q - 1] = q + 1;
            }
            images[end - 1] = start;
            start = end + 1;
        }
        Transformation::from_one_based(&images)
    }
}

impl fmt::Display for LoopStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lengths.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// 1-based image of 1-based state `q`.
fn img(c: &Transformation, q: usize) -> usize {
    c.image(q - 1) + 1
}

/// Splits `c` into loops if it has one of the two supported shapes.
pub fn loop_decomposition(c: &Transformation) -> Result<LoopStructure> {
    let n = c.n();
    let shape = if c.is_permutation() {
        LoopShape::Permutation
    } else if c.deficiency() == 1 && img(c, 1) == 2 && (2..=n).all(|q| img(c, q) != 1) {
        LoopShape::MissingOne
    } else {
        return Err(Error::invalid(format!("{c:?} has no loop structure")));
    };
    let first = match shape {
        LoopShape::Permutation => 1,
        LoopShape::MissingOne => 2,
    };
    let mut lengths = Vec::new();
    let mut start = first;
    let mut q = first;
    while q <= n {
        let next = img(c, q);
        if next == q + 1 {
            q += 1;
        } else if next == start {
            lengths.push(q - start + 1);
            start = q + 1;
            q = start;
        } else {
            return Err(Error::invalid(format!(
                "{c:?} sends {q} to {next}, breaking the loop structure"
            )));
        }
    }
    if start != n + 1 {
        return Err(Error::invalid(format!("{c:?} leaves an open chain")));
    }
    Ok(LoopStructure { shape, lengths })
}

/// Which word template applies to a loop structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopRule {
    /// Loop `k` (1-based) has length at least 3.
    Long { k: usize },
    /// Loop `k < L` has length 2.
    InnerPair { k: usize },
    /// Only the last loop has length 2.
    LastPair,
}

impl LoopRule {
    fn tag(self) -> &'static str {
        match self {
            LoopRule::Long { .. } => "long",
            LoopRule::InnerPair { .. } => "inner2",
            LoopRule::LastPair => "last2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseKind {
    /// Permutation with `qc >= q + 2` for the given `q`.
    PermutationJump { q: usize },
    PermutationLoops {
        loops: LoopStructure,
        rule: LoopRule,
    },
    /// Deficiency 1 with `Qc = Q \ {q}`, `q != 1`.
    MissingState { q: usize },
    /// `Qc = Q \ {1}` and `Qc^2 = Q \ {1, 2}`.
    SquareMissingPair,
    /// `Qc = Q \ {1}` and `Qc^2` misses `q >= 3`.
    SquareMissingState { q: usize },
    /// `c` permutes `Q \ {1}`, `1c != 2`; `q` is the preimage of 2.
    JumpFromOne { q: usize },
    /// `c` permutes `Q \ {1}`, `1c = 2` and `qc = q + k`, `k >= 2`.
    Jump { q: usize, k: usize },
    /// Loop structure on `2..=n` with a first loop of length at least 2.
    LongFirstLoop { loops: LoopStructure },
    /// Loop structure on `2..=n` with a fixed state 2, handled through the
    /// permutation fixing 1 and agreeing with `c` elsewhere.
    Lifted {
        loops: LoopStructure,
        rule: LoopRule,
    },
    /// Deficiency at least 2; `q >= 2` is outside the image.
    HighDeficiency { q: usize },
    /// No constructive rule matched.
    Residual,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionCase {
    pub deficiency: usize,
    pub kind: CaseKind,
}

impl ExtensionCase {
    pub fn tag(&self) -> String {
        match &self.kind {
            CaseKind::PermutationJump { .. } => "perm-jump".into(),
            CaseKind::PermutationLoops { rule, .. } => format!("perm-loops-{}", rule.tag()),
            CaseKind::MissingState { .. } => "def1-missing".into(),
            CaseKind::SquareMissingPair => "def1-square-pair".into(),
            CaseKind::SquareMissingState { .. } => "def1-square-state".into(),
            CaseKind::JumpFromOne { .. } => "def1-jump-from-one".into(),
            CaseKind::Jump { .. } => "def1-jump".into(),
            CaseKind::LongFirstLoop { .. } => "def1-long-first-loop".into(),
            CaseKind::Lifted { rule, .. } => format!("def1-lifted-{}", rule.tag()),
            CaseKind::HighDeficiency { .. } => "def2".into(),
            CaseKind::Residual => "residual".into(),
        }
    }
}

fn cerny_symbols(n: usize) -> Result<(Transformation, Transformation)> {
    let cn = cerny(n)?;
    Ok((*cn.symbol(A), *cn.symbol(B)))
}

fn check_nontrivial(c: &Transformation, n: usize) -> Result<()> {
    if c.n() != n {
        return Err(Error::invalid(format!(
            "symbol acts on {} states, expected {n}",
            c.n()
        )));
    }
    let (a, b) = cerny_symbols(n)?;
    if c.is_identity() || *c == a || *c == b {
        return Err(Error::invalid(format!("{c:?} is trivial for C_{n}")));
    }
    Ok(())
}

/// Smallest `k` with a loop of length at least 3, else the first inner
/// 2-loop, else the last loop if it has length 2.
fn default_rule(loops: &LoopStructure) -> Option<LoopRule> {
    let ls = &loops.lengths;
    let count = ls.len();
    if count >= 2 {
        if let Some(i) = ls.iter().position(|&l| l >= 3) {
            return Some(LoopRule::Long { k: i + 1 });
        }
    }
    if count >= 3 {
        if let Some(i) = ls[..count - 1].iter().position(|&l| l == 2) {
            return Some(LoopRule::InnerPair { k: i + 1 });
        }
        if ls[count - 1] == 2 {
            return Some(LoopRule::LastPair);
        }
    }
    None
}

/// Assigns the extra symbol to a case of the construction.
pub fn classify(c: &Transformation, n: usize) -> Result<ExtensionCase> {
    check_nontrivial(c, n)?;
    let deficiency = c.deficiency();
    let kind = match deficiency {
        0 => classify_permutation(c, n),
        1 => classify_deficiency_one(c, n),
        _ => {
            let image = image_set(c);
            match (2..=n).find(|&q| !image.contains(q - 1)) {
                Some(q) => CaseKind::HighDeficiency { q },
                None => CaseKind::Residual,
            }
        }
    };
    Ok(ExtensionCase { deficiency, kind })
}

fn classify_permutation(c: &Transformation, n: usize) -> CaseKind {
    if let Some(q) = (1..=n).find(|&q| img(c, q) >= q + 2) {
        return CaseKind::PermutationJump { q };
    }
    match loop_decomposition(c) {
        Ok(loops) => match default_rule(&loops) {
            Some(rule) => CaseKind::PermutationLoops { loops, rule },
            None => CaseKind::Residual,
        },
        Err(_) => CaseKind::Residual,
    }
}

fn image_set(c: &Transformation) -> StateSet {
    StateSet::from_states(c.images().iter().map(|&q| q as usize))
}

fn classify_deficiency_one(c: &Transformation, n: usize) -> CaseKind {
    let image = image_set(c);
    let missing = (1..=n)
        .find(|&q| !image.contains(q - 1))
        .expect("deficiency 1");
    if missing != 1 {
        return CaseKind::MissingState { q: missing };
    }
    let square = image_set(&c.then(c));
    if square.len() <= n - 2 {
        if square == StateSet::full(n).without(0).without(1) {
            return CaseKind::SquareMissingPair;
        }
        return match (3..=n).find(|&q| !square.contains(q - 1)) {
            Some(q) => CaseKind::SquareMissingState { q },
            None => CaseKind::Residual,
        };
    }
    // c permutes Q \ {1}.
    if img(c, 1) != 2 {
        let q = (2..=n)
            .find(|&q| img(c, q) == 2)
            .expect("2 is in the image");
        return CaseKind::JumpFromOne { q };
    }
    if let Some(q) = (2..=n).find(|&q| img(c, q) >= q + 2) {
        return CaseKind::Jump {
            q,
            k: img(c, q) - q,
        };
    }
    let Ok(loops) = loop_decomposition(c) else {
        return CaseKind::Residual;
    };
    if loops.lengths[0] >= 2 {
        return CaseKind::LongFirstLoop { loops };
    }
    let lifted = LoopStructure {
        shape: LoopShape::Permutation,
        lengths: std::iter::once(1)
            .chain(loops.lengths.iter().copied())
            .collect(),
    };
    match default_rule(&lifted) {
        Some(rule) => CaseKind::Lifted { loops, rule },
        None => CaseKind::Residual,
    }
}

/// The permutation fixing 1 and agreeing with `c` on `2..=n`, for `c` with
/// the [`LoopShape::MissingOne`] structure.
pub fn lift_permutation(c: &Transformation) -> Result<Transformation> {
    let loops = loop_decomposition(c)?;
    if loops.shape != LoopShape::MissingOne {
        return Err(Error::invalid(format!("{c:?} does not miss state 1")));
    }
    let mut images: Vec<usize> = c.images().iter().map(|&q| q as usize).collect();
    images[0] = 0;
    Transformation::new(&images)
}

/// A shortcut through the power automaton of `C_n + c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShorterWordPlan {
    pub case: ExtensionCase,
    pub s: StateSet,
    pub s_target: StateSet,
    /// Word over `a = 0`, `b = 1`, `c = 2`.
    pub w: Word,
    /// Length of a shortest word over `{a, b}` from `s` to `s_target`.
    pub baseline_distance: usize,
    /// `s · w` may be a proper subset of `s_target`.
    pub subset_only: bool,
}

impl ShorterWordPlan {
    /// A full reset word of `C_n + c`: a shortest `C_n` path from `Q` to
    /// `s`, then `w`, then a shortest `C_n` path from `s_target` to `{2}`.
    pub fn reset_word(&self, n: usize) -> Result<Word> {
        let cn = cerny(n)?;
        let prefix = shortest_path(&cn, StateSet::full(n), self.s)
            .ok_or_else(|| Error::Verification(format!("{} unreachable in C_{n}", self.s)))?;
        let suffix =
            shortest_path(&cn, self.s_target, StateSet::singleton(1)).ok_or_else(|| {
                Error::Verification(format!("{} does not reach {{2}} in C_{n}", self.s_target))
            })?;
        Ok(prefix.concat(&self.w).concat(&suffix))
    }
}

struct WordBuilder(Word);

impl WordBuilder {
    fn new() -> Self {
        WordBuilder(Word::empty())
    }

    fn put(mut self, symbol: usize, times: usize) -> Self {
        self.0.extend_repeated(symbol, times);
        self
    }

    fn finish(self) -> Word {
        self.0
    }
}

fn range(lo: usize, hi: usize) -> StateSet {
    StateSet::range_one_based(lo, hi)
}

/// `(S, S', w)` for a permutation with the given loops and rule, `c` being
/// symbol 2.
fn loop_word(
    n: usize,
    loops: &LoopStructure,
    rule: LoopRule,
) -> Result<(StateSet, StateSet, Word)> {
    let ls = &loops.lengths;
    let sum = |r: std::ops::Range<usize>| -> usize { ls[r].iter().sum() };
    match rule {
        LoopRule::Long { k } => {
            let lk = *ls
                .get(k.wrapping_sub(1))
                .ok_or_else(|| Error::invalid(format!("no loop {k}")))?;
            if lk < 3 || ls.len() < 2 {
                return Err(Error::invalid(format!("loop {k} of {loops} is not long")));
            }
            let minus = sum(0..k - 1);
            let plus = sum(k..ls.len());
            let w = WordBuilder::new()
                .put(A, lk - 1)
                .put(B, 1)
                .put(A, minus)
                .put(C, lk - 1)
                .put(A, plus)
                .put(B, 1)
                .finish();
            Ok((range(2, n - lk + 3), range(2, n - lk + 1), w))
        }
        LoopRule::InnerPair { k } => {
            if k == 0 || k >= ls.len() || ls[k - 1] != 2 || ls.len() < 3 {
                return Err(Error::invalid(format!(
                    "loop {k} of {loops} is not an inner pair"
                )));
            }
            let minus = sum(0..k - 1);
            let plus = sum(k + 1..ls.len());
            let lambda = minus + plus;
            let w = WordBuilder::new()
                .put(A, ls[k - 1] + ls[k] - 1)
                .put(B, 1)
                .put(A, minus)
                .put(C, 1)
                .put(A, plus)
                .put(B, 1)
                .finish();
            Ok((range(2, lambda + 3), range(2, lambda + 1), w))
        }
        LoopRule::LastPair => {
            if ls.len() < 3 || ls[ls.len() - 1] != 2 {
                return Err(Error::invalid(format!("{loops} does not end in a pair")));
            }
            let w = WordBuilder::new()
                .put(A, 2)
                .put(B, 1)
                .put(A, n - 3)
                .put(C, 1)
                .put(A, 1)
                .put(B, 1)
                .finish();
            Ok((range(2, n), range(2, n - 2), w))
        }
    }
}

/// `prefix a^{n-q} b (a^{n-1} b)^rounds`, taking `Q` to `{2}`.
fn reset_tail(n: usize, prefix: &[(usize, usize)], q: usize, rounds: usize) -> Word {
    let mut b = WordBuilder::new();
    for &(x, times) in prefix {
        b = b.put(x, times);
    }
    b = b.put(A, n - q).put(B, 1);
    for _ in 0..rounds {
        b = b.put(A, n - 1).put(B, 1);
    }
    b.finish()
}

/// Builds and verifies a shortcut for `C_n + c`, `n >= 5`.
pub fn build_shorter_word(n: usize, c: &Transformation) -> Result<ShorterWordPlan> {
    let case = classify(c, n)?;
    build_for_case(n, c, case)
}

/// Like [`build_shorter_word`] for a permutation with loop structure, using
/// loop `k` (1-based) instead of the default choice.
pub fn build_shorter_word_with_loop(
    n: usize,
    c: &Transformation,
    k: usize,
) -> Result<ShorterWordPlan> {
    let mut case = classify(c, n)?;
    match &mut case.kind {
        CaseKind::PermutationLoops { loops, rule } => {
            let lk = loops.lengths.get(k.wrapping_sub(1)).copied().unwrap_or(0);
            *rule = if lk >= 3 {
                LoopRule::Long { k }
            } else {
                LoopRule::InnerPair { k }
            };
        }
        _ => {
            return Err(Error::invalid(format!(
                "{c:?} is not a permutation with loop structure"
            )))
        }
    }
    build_for_case(n, c, case)
}

fn build_for_case(n: usize, c: &Transformation, case: ExtensionCase) -> Result<ShorterWordPlan> {
    if n < 5 {
        return Err(Error::Unsupported(format!(
            "shortcut construction needs n >= 5, got {n}"
        )));
    }
    let full = StateSet::full(n);
    let one_word = |x| Word(vec![x]);
    let (s, s_target, w, subset_only) = match &case.kind {
        CaseKind::PermutationJump { q } => {
            let s = full.without(q - 1);
            (s, full.without(img(c, *q) - 1), one_word(C), false)
        }
        CaseKind::PermutationLoops { loops, rule } => {
            let (s, t, w) = loop_word(n, loops, *rule)?;
            (s, t, w, false)
        }
        CaseKind::MissingState { q } | CaseKind::HighDeficiency { q } => {
            let w = reset_tail(n, &[(C, 1)], *q, n - 3);
            (full, StateSet::singleton(1), w, false)
        }
        CaseKind::SquareMissingPair => {
            let w = reset_tail(n, &[(C, 2)], 2, n - 4);
            (full, StateSet::singleton(1), w, false)
        }
        CaseKind::SquareMissingState { q } => {
            let w = reset_tail(n, &[(C, 2)], *q, n - 3);
            (full, StateSet::singleton(1), w, false)
        }
        CaseKind::JumpFromOne { q } => {
            let pair = full.without(0).without(1);
            (full.without(q - 1), pair, one_word(C), false)
        }
        CaseKind::Jump { q, k } => (
            full.without(q - 1),
            full.without(q + k - 1),
            one_word(C),
            true,
        ),
        CaseKind::LongFirstLoop { loops } => {
            let l1 = loops.lengths[0];
            let pair = full.without(0).without(1);
            (full.without(l1 - 1), pair, Word(vec![C, C]), false)
        }
        CaseKind::Lifted { loops, rule } => {
            let lifted = LoopStructure {
                shape: LoopShape::Permutation,
                lengths: std::iter::once(1)
                    .chain(loops.lengths.iter().copied())
                    .collect(),
            };
            let (s, t, w) = loop_word(n, &lifted, *rule)?;
            (s, t, w, true)
        }
        CaseKind::Residual => {
            return Err(Error::Unsupported(format!("no construction for {c:?}")));
        }
    };
    let cn = cerny(n)?;
    let baseline_distance = shortest_path(&cn, s, s_target)
        .ok_or_else(|| Error::Verification(format!("{s} does not reach {s_target} in C_{n}")))?
        .len();
    let plan = ShorterWordPlan {
        case,
        s,
        s_target,
        w,
        baseline_distance,
        subset_only,
    };
    verify_plan(&cn.with_symbol(*c)?, &plan)?;
    Ok(plan)
}

fn verify_plan(ext: &Dfa, plan: &ShorterWordPlan) -> Result<()> {
    let reached = apply_word_to_set(ext, plan.s, &plan.w);
    let ok = if plan.subset_only {
        !reached.is_empty() && reached.is_subset(plan.s_target)
    } else {
        reached == plan.s_target
    };
    if !ok {
        return Err(Error::Verification(format!(
            "{} · {} = {}, expected {}",
            plan.s, plan.w, reached, plan.s_target
        )));
    }
    if plan.w.len() >= plan.baseline_distance {
        return Err(Error::Verification(format!(
            "|{}| = {} is not below the baseline {}",
            plan.w,
            plan.w.len(),
            plan.baseline_distance
        )));
    }
    Ok(())
}

/// One extra symbol in an exhaustive sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionRow {
    pub c: Transformation,
    pub tag: String,
    pub length: usize,
    /// Length of the reset word assembled from the constructive plan.
    pub plan_length: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionReport {
    pub n: usize,
    pub total_maps: u64,
    pub trivial_skipped: u64,
    pub all_below: bool,
    pub max_length_found: usize,
    /// Symbols whose extension is not faster than `C_n`.
    pub counterexamples: Vec<Transformation>,
    /// Symbols where the constructive plan failed or was not faster.
    pub plan_failures: Vec<(Transformation, String)>,
    pub residual: u64,
    pub rows: Vec<ExtensionRow>,
}

impl ExtensionReport {
    /// Rows as CSV: image tuple, case tag, BFS length, plan length.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("c,case,length,plan_length\n");
        for r in &self.rows {
            let plan = r.plan_length.map(|p| p.to_string()).unwrap_or_default();
            out.push_str(&format!("\"{:?}\",{},{},{}\n", r.c, r.tag, r.length, plan));
        }
        out
    }
}

/// A swept row and the reason its plan failed, if it did.
type SweepRow = (ExtensionRow, Option<String>);

/// Largest state count accepted by [`verify_no_critical_extension`].
pub const EXTENSION_MAX_STATES: usize = 8;

/// Checks every extension of `C_n` by one non-trivial symbol. With
/// `constructive`, every case with a construction is also built and its reset
/// word checked against the BFS length.
pub fn verify_no_critical_extension(n: usize, constructive: bool) -> Result<ExtensionReport> {
    if !(2..=EXTENSION_MAX_STATES).contains(&n) {
        return Err(Error::Unsupported(format!(
            "sweep supports 2 <= n <= {EXTENSION_MAX_STATES}, got {n}"
        )));
    }
    let cn = cerny(n)?;
    let (a, b) = (*cn.symbol(A), *cn.symbol(B));
    let critical = (n - 1) * (n - 1);
    let total = (n as u64).pow(n as u32);
    let rows: Vec<Result<Option<SweepRow>>> = (0..total)
        .into_par_iter()
        .map(|index| {
            let c = Transformation::from_index(n, index)?;
            if c.is_identity() || c == a || c == b {
                return Ok(None);
            }
            let ext = cn.with_symbol(c)?;
            let length = sync_length(&ext).unwrap_or(usize::MAX);
            let case = classify(&c, n)?;
            let tag = case.tag();
            let mut plan_length = None;
            let mut failure = None;
            if constructive && n >= 5 && case.kind != CaseKind::Residual {
                match build_for_case(n, &c, case).and_then(|p| check_reset(&ext, &p, n)) {
                    Ok(len) if len < critical && length <= len => plan_length = Some(len),
                    Ok(len) => failure = Some(format!("plan length {len}, BFS length {length}")),
                    Err(e) => failure = Some(e.to_string()),
                }
            }
            Ok(Some((
                ExtensionRow {
                    c,
                    tag,
                    length,
                    plan_length,
                },
                failure,
            )))
        })
        .collect();
    let mut report = ExtensionReport {
        n,
        total_maps: total,
        trivial_skipped: 0,
        all_below: true,
        max_length_found: 0,
        counterexamples: Vec::new(),
        plan_failures: Vec::new(),
        residual: 0,
        rows: Vec::new(),
    };
    for row in rows {
        let Some((row, failure)) = row? else {
            report.trivial_skipped += 1;
            continue;
        };
        if row.length >= critical {
            report.all_below = false;
            report.counterexamples.push(row.c);
        }
        if row.length != usize::MAX {
            report.max_length_found = report.max_length_found.max(row.length);
        }
        if row.tag == "residual" {
            report.residual += 1;
        }
        if let Some(f) = failure {
            report.plan_failures.push((row.c, f));
        }
        report.rows.push(row);
    }
    Ok(report)
}

/// Length of the plan's reset word after checking that it synchronizes.
fn check_reset(ext: &Dfa, plan: &ShorterWordPlan, n: usize) -> Result<usize> {
    let word = plan.reset_word(n)?;
    let end = apply_word_to_set(ext, StateSet::full(n), &word);
    if !end.is_singleton() {
        return Err(Error::Verification(format!(
            "reset word {word} ends in {end}"
        )));
    }
    Ok(word.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm_from_loops(n: usize, lengths: &[usize]) -> Transformation {
        LoopStructure {
            shape: LoopShape::Permutation,
            lengths: lengths.to_vec(),
        }
        .transformation(n)
        .unwrap()
    }

    #[test]
    fn trivial_symbols_rejected() {
        let (a, b) = cerny_symbols(6).unwrap();
        assert!(classify(&a, 6).is_err());
        assert!(classify(&b, 6).is_err());
        assert!(classify(&Transformation::identity(6).unwrap(), 6).is_err());
    }

    #[test]
    fn loop_extremes() {
        let id = Transformation::identity(5).unwrap();
        assert_eq!(loop_decomposition(&id).unwrap().lengths, vec![1; 5]);
        let (a, b) = cerny_symbols(5).unwrap();
        assert_eq!(loop_decomposition(&a).unwrap().lengths, vec![5]);
        let lb = loop_decomposition(&b).unwrap();
        assert_eq!(lb.shape, LoopShape::MissingOne);
        assert_eq!(lb.lengths, vec![1; 4]);
    }

    #[test]
    fn jump_detected() {
        let c = Transformation::from_one_based(&[3, 1, 2, 4, 5]).unwrap();
        assert_eq!(
            classify(&c, 5).unwrap().kind,
            CaseKind::PermutationJump { q: 1 }
        );
        let plan = build_shorter_word(5, &c).unwrap();
        assert_eq!(plan.w.to_string(), "c");
    }

    #[test]
    fn ten_state_example() {
        let c = perm_from_loops(10, &[3, 4, 1, 2]);
        let loops = loop_decomposition(&c).unwrap();
        assert_eq!(loops.lengths, vec![3, 4, 1, 2]);
        let plan = build_shorter_word_with_loop(10, &c, 2).unwrap();
        assert_eq!(plan.s, range(2, 9));
        assert_eq!(plan.s_target, range(2, 7));
        assert_eq!(plan.w.to_string(), "aaabaaacccaaab");
        assert_eq!(plan.baseline_distance, 20);
    }

    #[test]
    fn missing_state_word_length() {
        // Qc = Q \ {3} on 6 states.
        let c = Transformation::from_one_based(&[1, 2, 2, 4, 5, 6]).unwrap();
        let plan = build_shorter_word(6, &c).unwrap();
        assert_eq!(plan.case.kind, CaseKind::MissingState { q: 3 });
        assert_eq!(plan.w.len(), 25 - 3 + 1);
    }
}
