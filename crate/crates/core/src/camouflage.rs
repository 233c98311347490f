//! Public words that hide a group element: a target word with conjugated
//! relators `g · r^{±1} · g⁻¹` spliced between its letters.
//!
//! Every word handed out by [`pad_word`], [`make_trivial_word`] and
//! [`make_nontrivial_word`] has been Dehn-reduced and checked before it is
//! returned.

use rand::Rng;
use rand_distr::{Distribution, Geometric};

use crate::dehn::{conjugate, dehn_reduce, is_dehn_reduced};
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::words::{free_reduce, random_reduced_word, Letter, RawWord, Word};

/// Padded length must land in `target · (1 ± 0.15)`.
pub const LENGTH_TOLERANCE_PERCENT: usize = 15;
pub const MAX_RETRIES: usize = 32;
const CONJUGATOR_MAX_LEN: u64 = 8;
// Failures before the first success at p = 1/4: mean 3.
const CONJUGATOR_GEOMETRIC_P: f64 = 0.25;

pub fn length_window(target: usize) -> (usize, usize) {
    let lo = (target * (100 - LENGTH_TOLERANCE_PERCENT)).div_ceil(100);
    let hi = target * (100 + LENGTH_TOLERANCE_PERCENT) / 100;
    (lo, hi)
}

fn random_conjugator<R: Rng + ?Sized>(alphabet: u32, rng: &mut R) -> Word {
    let geo = Geometric::new(CONJUGATOR_GEOMETRIC_P).expect("valid probability");
    let len = geo.sample(rng).min(CONJUGATOR_MAX_LEN) as usize;
    random_reduced_word(alphabet, len, rng).expect("alphabet is nonempty")
}

fn assemble(s: &Word, gaps: &[Vec<Letter>]) -> Word {
    let mut letters = Vec::with_capacity(s.len() + gaps.iter().map(Vec::len).sum::<usize>());
    for (i, gap) in gaps.iter().enumerate() {
        letters.extend_from_slice(gap);
        if let Some(&l) = s.letters().get(i) {
            letters.push(l);
        }
    }
    free_reduce(&RawWord::new(s.alphabet(), letters).expect("letters come from s and the closure"))
        .expect("alphabet already checked")
}

/// One unverified padding draw: keeps inserting conjugated closure elements at
/// uniformly chosen gaps of `s` until the reduced word is about `target` long.
///
/// The result equals `s` in the group but is not checked to Dehn-reduce back
/// to `s`; use [`pad_word`] for that.
pub fn conjugate_padding<R: Rng + ?Sized>(s: &Word, p: &Presentation, target: usize, rng: &mut R) -> Result<Word> {
    let closure = p.closure();
    if closure.is_empty() {
        return Err(Error::NoRelators);
    }
    if s.alphabet() != p.alphabet() {
        return Err(Error::AlphabetMismatch { left: s.alphabet(), right: p.alphabet() });
    }
    let mean_relator = closure.iter().map(Word::len).sum::<usize>() / closure.len();
    // Expected growth per insertion is the relator plus two conjugators.
    let stop = target.saturating_sub((mean_relator + 6) / 2);
    let mut gaps = vec![Vec::new(); s.len() + 1];
    let mut w = s.clone();
    let mut insertions = 0;
    while w.len() < stop && insertions < 4 * target + 8 {
        let gap = rng.random_range(0..gaps.len());
        let g = random_conjugator(p.alphabet(), rng);
        let r = &closure[rng.random_range(0..closure.len())];
        gaps[gap].extend_from_slice(conjugate(&g, r).letters());
        w = assemble(s, &gaps);
        insertions += 1;
    }
    Ok(w)
}

/// A word of length about `target` that Dehn-reduces to `s`.
pub fn pad_word<R: Rng + ?Sized>(s: &Word, p: &Presentation, target: usize, rng: &mut R) -> Result<Word> {
    if target <= s.len() {
        return Err(Error::TargetTooSmall { target, min: s.len() });
    }
    if !is_dehn_reduced(s, p) {
        return Err(Error::InvalidParameter(format!("`{s}` is not Dehn-reduced")));
    }
    let (lo, hi) = length_window(target);
    for _ in 0..MAX_RETRIES {
        let w = conjugate_padding(s, p, target, rng)?;
        if (lo..=hi).contains(&w.len()) && w != *s && dehn_reduce(&w, p) == *s {
            return Ok(w);
        }
    }
    Err(Error::PaddingFailed { retries: MAX_RETRIES })
}

/// A nonempty word of length about `target` that is trivial in the group.
pub fn make_trivial_word<R: Rng + ?Sized>(p: &Presentation, target: usize, rng: &mut R) -> Result<Word> {
    if p.relators().is_empty() {
        return Err(Error::NoRelators);
    }
    pad_word(&Word::empty(p.alphabet()), p, target.max(1), rng)
}

/// A word of length about `target` that is nontrivial in the group, built by
/// padding a short Dehn-reduced core.
pub fn make_nontrivial_word<R: Rng + ?Sized>(p: &Presentation, target: usize, rng: &mut R) -> Result<Word> {
    let max_core = p.shortest_relator_len().map_or(1, |l| (l / 2).max(1));
    let mut core = None;
    for _ in 0..MAX_RETRIES {
        let len = rng.random_range(1..=max_core);
        let c = random_reduced_word(p.alphabet(), len, rng)?;
        if is_dehn_reduced(&c, p) {
            core = Some(c);
            break;
        }
    }
    let core = core.ok_or(Error::PaddingFailed { retries: MAX_RETRIES })?;
    pad_word(&core, p, target, rng)
}

/// One public word per bit: trivial for 1, nontrivial for 0.
pub fn encode_bits<R: Rng + ?Sized>(bits: &[bool], p: &Presentation, target: usize, rng: &mut R) -> Result<Vec<Word>> {
    bits.iter()
        .map(|&b| if b { make_trivial_word(p, target, rng) } else { make_nontrivial_word(p, target, rng) })
        .collect()
}

pub fn decode_bits(words: &[Word], p: &Presentation) -> Vec<bool> {
    words.iter().map(|w| dehn_reduce(w, p).is_empty()).collect()
}
