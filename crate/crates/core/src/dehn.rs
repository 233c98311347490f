//! Dehn's algorithm.
//!
//! One canonical rule is used everywhere so that dealer and participant agree on
//! the output: scan left to right, stop at the leftmost position where some
//! closure element `r = u·v` has `u` as a subword with `2|u| > |r|`, take the
//! longest such `u` (ties go to the shortlex-smallest `r`), replace `u` by `v⁻¹`,
//! freely reduce, repeat.

use std::fmt;

use crate::presentation::Presentation;
use crate::words::{invert, push_reducing, Letter, Word};

/// Name of the reduction rule, recorded in transcripts.
pub const REDUCTION_RULE: &str = "dehn-leftmost-longest";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    /// Start of the replaced subword in the word as it stood before this step.
    pub position: usize,
    /// The closure element whose prefix was matched.
    pub matched: Word,
    pub replacement: Word,
}

impl ReductionStep {
    /// Length of the replaced subword.
    pub fn matched_len(&self) -> usize {
        self.matched.len() - self.replacement.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    pub final_word: Word,
}

impl fmt::Display for ReductionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{} {} -> {}", s.position, s.matched, s.replacement)?;
        }
        writeln!(f, "final {}", self.final_word)
    }
}

struct Match {
    position: usize,
    closure_index: usize,
    len: usize,
}

fn common_prefix(a: &[Letter], b: &[Letter]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

fn find_match(letters: &[Letter], start: usize, p: &Presentation) -> Option<Match> {
    let closure = p.closure();
    for position in start..letters.len() {
        let rest = &letters[position..];
        let mut best: Option<Match> = None;
        for &ci in p.closure_starting_with(rest[0].order_position()) {
            let r = closure[ci].letters();
            let len = common_prefix(rest, r);
            if 2 * len > r.len() && best.as_ref().is_none_or(|b| len > b.len) {
                best = Some(Match { position, closure_index: ci, len });
            }
        }
        if best.is_some() {
            return best;
        }
    }
    None
}

/// Replaces `letters[at..at + len]` by `replacement` and freely reduces at the
/// seams. Returns the new word and the first index that may differ from the old.
fn splice(letters: &[Letter], at: usize, len: usize, replacement: &[Letter]) -> (Vec<Letter>, usize) {
    let mut stack = Vec::with_capacity(letters.len());
    stack.extend_from_slice(&letters[..at]);
    let mut first_changed = at;
    for &l in replacement.iter().chain(&letters[at + len..]) {
        push_reducing(&mut stack, l);
        first_changed = first_changed.min(stack.len());
    }
    (stack, first_changed)
}

fn reduce(w: &Word, p: &Presentation, mut trace: Option<&mut Vec<ReductionStep>>) -> Word {
    assert_eq!(w.alphabet(), p.alphabet(), "alphabet mismatch in Dehn reduction");
    let window = p.longest_relator_len().unwrap_or(1);
    let mut letters = w.letters().to_vec();
    let mut start = 0;
    while let Some(m) = find_match(&letters, start, p) {
        let r = &p.closure()[m.closure_index];
        let replacement: Vec<Letter> = r.letters()[m.len..].iter().rev().map(|l| l.inverse()).collect();
        if let Some(steps) = trace.as_deref_mut() {
            steps.push(ReductionStep {
                position: m.position,
                matched: r.clone(),
                replacement: Word::new(w.alphabet(), replacement.clone()).expect("subword of a reduced word"),
            });
        }
        let (next, first_changed) = splice(&letters, m.position, m.len, &replacement);
        letters = next;
        // Windows ending before the first changed letter were already scanned.
        start = first_changed.saturating_sub(window - 1);
    }
    Word::new(w.alphabet(), letters).expect("splice keeps words reduced")
}

/// Dehn-reduces `w` with respect to `p`.
pub fn dehn_reduce(w: &Word, p: &Presentation) -> Word {
    reduce(w, p, None)
}

pub fn dehn_reduce_traced(w: &Word, p: &Presentation) -> ReductionTrace {
    let mut steps = Vec::new();
    let final_word = reduce(w, p, Some(&mut steps));
    ReductionTrace { steps, final_word }
}

/// Re-applies recorded steps to `w`, without searching.
pub fn replay(w: &Word, steps: &[ReductionStep]) -> Word {
    let mut letters = w.letters().to_vec();
    for s in steps {
        let (next, _) = splice(&letters, s.position, s.matched_len(), s.replacement.letters());
        letters = next;
    }
    Word::new(w.alphabet(), letters).expect("splice keeps words reduced")
}

/// True iff no subword of `w` is more than half of a closure element.
pub fn is_dehn_reduced(w: &Word, p: &Presentation) -> bool {
    find_match(w.letters(), 0, p).is_none()
}

/// Word problem for `C'(1/6)` presentations.
pub fn is_trivial(w: &Word, p: &Presentation) -> bool {
    dehn_reduce(w, p).is_empty()
}

/// `g · r · g⁻¹`, freely reduced.
pub fn conjugate(g: &Word, r: &Word) -> Word {
    let mut stack = g.letters().to_vec();
    for &l in r.letters().iter().chain(invert(g).letters()) {
        push_reducing(&mut stack, l);
    }
    Word::new(g.alphabet(), stack).expect("stack reduction")
}
