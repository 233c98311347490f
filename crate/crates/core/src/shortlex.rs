//! Shortlex order on reduced words and the rank/unrank bijection with the
//! non-negative integers.
//!
//! The letter order is fixed: `x_0 < x_0⁻¹ < x_1 < x_1⁻¹ < …`. Indices are
//! 0-based, so the empty word has rank 0.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::words::{Letter, Word};

pub fn compare(u: &Word, v: &Word) -> Result<Ordering> {
    if u.alphabet() != v.alphabet() {
        return Err(Error::AlphabetMismatch { left: u.alphabet(), right: v.alphabet() });
    }
    Ok(u.len().cmp(&v.len()).then_with(|| u.letters().cmp(v.letters())))
}

/// Number of reduced words of length exactly `len`: `2n(2n-1)^(len-1)`.
pub fn count_words_of_length(alphabet: u32, len: usize) -> BigUint {
    if len == 0 {
        return BigUint::one();
    }
    let letters = 2 * u64::from(alphabet);
    if letters == 0 {
        return BigUint::zero();
    }
    BigUint::from(letters) * BigUint::from(letters - 1).pow(len as u32 - 1)
}

/// Number of reduced words of length strictly less than `len`.
pub fn count_words_shorter_than(alphabet: u32, len: usize) -> BigUint {
    (0..len).map(|l| count_words_of_length(alphabet, l)).sum()
}

/// Position of `letter` among the letters allowed after `prev`.
fn digit(letter: Letter, prev: Option<Letter>) -> u32 {
    let pos = letter.order_position();
    match prev {
        Some(p) if p.inverse().order_position() < pos => pos - 1,
        _ => pos,
    }
}

fn letter_for_digit(digit: u32, prev: Option<Letter>) -> Letter {
    match prev {
        Some(p) if digit >= p.inverse().order_position() => Letter::from_order_position(digit + 1),
        _ => Letter::from_order_position(digit),
    }
}

/// 0-based shortlex position of a reduced word.
pub fn rank(w: &Word) -> BigUint {
    let base = BigUint::from(2 * u64::from(w.alphabet())).max(BigUint::one()) - 1u32;
    let mut offset = BigUint::zero();
    let mut prev = None;
    for &l in w.letters() {
        offset = offset * &base + digit(l, prev);
        prev = Some(l);
    }
    // The first digit ranges over 2n letters rather than 2n-1, but its weight
    // is still (2n-1)^(L-1), so plain mixed-radix accumulation is exact.
    count_words_shorter_than(w.alphabet(), w.len()) + offset
}

/// The reduced word at 0-based shortlex position `index`.
pub fn unrank(index: &BigUint, alphabet: u32) -> Result<Word> {
    if alphabet == 0 {
        return if index.is_zero() { Ok(Word::empty(0)) } else { Err(Error::EmptyAlphabet) };
    }
    let mut rest = index.clone();
    let mut len = 0usize;
    loop {
        let count = count_words_of_length(alphabet, len);
        if rest < count {
            break;
        }
        rest -= count;
        len += 1;
    }
    let base = BigUint::from(2 * u64::from(alphabet) - 1);
    let mut digits = vec![0u32; len];
    if len > 0 {
        for slot in digits[1..].iter_mut().rev() {
            let (q, r) = rest.div_rem(&base);
            *slot = r.to_u32().expect("digit below 2n-1");
            rest = q;
        }
        digits[0] = rest.to_u32().expect("first digit below 2n");
    }
    let mut letters = Vec::with_capacity(len);
    let mut prev = None;
    for d in digits {
        let l = letter_for_digit(d, prev);
        letters.push(l);
        prev = Some(l);
    }
    Word::new(alphabet, letters)
}

/// Iterator over words in shortlex order starting from rank 0.
pub fn enumerate(alphabet: u32) -> impl Iterator<Item = Word> {
    let mut next = BigUint::zero();
    std::iter::from_fn(move || {
        let w = unrank(&next, alphabet).ok()?;
        next += 1u32;
        Some(w)
    })
}
