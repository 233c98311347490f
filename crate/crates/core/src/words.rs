//! Free-group words over the alphabet `x_0^{±1}, …, x_{n-1}^{±1}`.
//!
//! A [`Word`] is always freely reduced. Anything that might not be reduced
//! (parsed input, concatenations under construction) is a [`RawWord`] until it
//! goes through [`free_reduce`].
//!
//! Text form: `g<i>` is generator `i`, `G<i>` its inverse, and the empty word is
//! the single token `e`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// A generator or its inverse.
///
/// The derived ordering is the protocol letter order
/// `x_0 < x_0⁻¹ < x_1 < x_1⁻¹ < …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    generator: u32,
    inverse: bool,
}

impl Letter {
    pub const fn new(generator: u32, inverse: bool) -> Self {
        Self { generator, inverse }
    }

    pub const fn pos(generator: u32) -> Self {
        Self::new(generator, false)
    }

    pub const fn neg(generator: u32) -> Self {
        Self::new(generator, true)
    }

    /// Builds a letter from its position in the letter order (`2i` or `2i + 1`).
    pub const fn from_order_position(position: u32) -> Self {
        Self::new(position / 2, position % 2 == 1)
    }

    pub const fn generator(self) -> u32 {
        self.generator
    }

    pub const fn is_inverse(self) -> bool {
        self.inverse
    }

    /// `+1` or `-1`.
    pub const fn sign(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub const fn inverse(self) -> Self {
        Self::new(self.generator, !self.inverse)
    }

    pub const fn order_position(self) -> u32 {
        2 * self.generator + self.inverse as u32
    }

    pub const fn cancels(self, other: Self) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_position().cmp(&other.order_position())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.inverse { 'G' } else { 'g' };
        write!(f, "{tag}{}", self.generator)
    }
}

fn check_letters(letters: &[Letter], alphabet: u32) -> Result<()> {
    match letters.iter().find(|l| l.generator >= alphabet) {
        Some(l) => Err(Error::LetterOutOfRange { generator: l.generator, alphabet }),
        None => Ok(()),
    }
}

fn parse_letters(text: &str) -> Result<Vec<Letter>> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens == ["e"] {
        return Ok(Vec::new());
    }
    if tokens.is_empty() {
        return Err(Error::Parse("empty word text (use `e`)".into()));
    }
    tokens
        .into_iter()
        .map(|tok| {
            let inverse = match tok.as_bytes()[0] {
                b'g' => false,
                b'G' => true,
                _ => return Err(Error::Parse(format!("unknown token `{tok}`"))),
            };
            let digits = &tok[1..];
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Parse(format!("unknown token `{tok}`")));
            }
            let generator =
                digits.parse::<u32>().map_err(|_| Error::Parse(format!("generator index too large in `{tok}`")))?;
            Ok(Letter::new(generator, inverse))
        })
        .collect()
}

fn write_letters(f: &mut fmt::Formatter<'_>, letters: &[Letter]) -> fmt::Result {
    if letters.is_empty() {
        return f.write_str("e");
    }
    for (i, l) in letters.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{l}")?;
    }
    Ok(())
}

/// A sequence of letters that need not be freely reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RawWord {
    letters: Vec<Letter>,
    alphabet: u32,
}

impl RawWord {
    pub fn new(alphabet: u32, letters: Vec<Letter>) -> Result<Self> {
        check_letters(&letters, alphabet)?;
        Ok(Self { letters, alphabet })
    }

    pub fn parse(text: &str, alphabet: u32) -> Result<Self> {
        Self::new(alphabet, parse_letters(text)?)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl fmt::Display for RawWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.letters)
    }
}

/// A freely reduced word.
///
/// `Ord` is the shortlex order (length first, then letterwise); words over
/// different alphabets are ordered by alphabet size first so that the order is
/// total, but [`crate::shortlex::compare`] rejects such comparisons.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
    alphabet: u32,
}

impl Word {
    pub fn empty(alphabet: u32) -> Self {
        Self { letters: Vec::new(), alphabet }
    }

    /// Checks that `letters` is already freely reduced.
    pub fn new(alphabet: u32, letters: Vec<Letter>) -> Result<Self> {
        check_letters(&letters, alphabet)?;
        if !is_freely_reduced(&letters) {
            return Err(Error::NotReduced);
        }
        Ok(Self { letters, alphabet })
    }

    pub(crate) fn from_reduced_unchecked(alphabet: u32, letters: Vec<Letter>) -> Self {
        debug_assert!(is_freely_reduced(&letters));
        Self { letters, alphabet }
    }

    /// Parses the token format and rejects unreduced input.
    pub fn parse(text: &str, alphabet: u32) -> Result<Self> {
        Self::new(alphabet, parse_letters(text)?)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    pub fn into_raw(self) -> RawWord {
        RawWord { letters: self.letters, alphabet: self.alphabet }
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(a), Some(b)) => self.len() == 1 || !a.cancels(b),
            _ => true,
        }
    }

    /// Rotation moving the first `i` letters to the end.
    pub fn rotate(&self, i: usize) -> Word {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            letters.rotate_left(i % self.len());
        }
        Word { letters, alphabet: self.alphabet }
    }

    /// True if some proper rotation fixes the word, i.e. it is a proper power.
    pub fn is_periodic(&self) -> bool {
        let n = self.len();
        (1..n).any(|d| n.is_multiple_of(d) && (0..n).all(|i| self.letters[i] == self.letters[(i + d) % n]))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.alphabet
            .cmp(&other.alphabet)
            .then(self.len().cmp(&other.len()))
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.letters)
    }
}

pub(crate) fn is_freely_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|w| !w[0].cancels(w[1]))
}

/// Pushes `letter` onto a reduced stack, cancelling against the top.
pub(crate) fn push_reducing(stack: &mut Vec<Letter>, letter: Letter) {
    match stack.last() {
        Some(&top) if top.cancels(letter) => {
            stack.pop();
        }
        _ => stack.push(letter),
    }
}

/// Stack-based free reduction.
pub fn free_reduce(w: &RawWord) -> Result<Word> {
    check_letters(&w.letters, w.alphabet)?;
    let mut stack = Vec::with_capacity(w.len());
    for &l in &w.letters {
        push_reducing(&mut stack, l);
    }
    Ok(Word::from_reduced_unchecked(w.alphabet, stack))
}

pub fn invert(w: &Word) -> Word {
    Word::from_reduced_unchecked(w.alphabet, w.letters.iter().rev().map(|l| l.inverse()).collect())
}

pub fn concat(u: &Word, v: &Word) -> Result<Word> {
    if u.alphabet != v.alphabet {
        return Err(Error::AlphabetMismatch { left: u.alphabet, right: v.alphabet });
    }
    let mut stack = u.letters.clone();
    for &l in &v.letters {
        push_reducing(&mut stack, l);
    }
    Ok(Word::from_reduced_unchecked(u.alphabet, stack))
}

/// Product of several words over one alphabet.
pub fn product<'a>(alphabet: u32, words: impl IntoIterator<Item = &'a Word>) -> Result<Word> {
    words.into_iter().try_fold(Word::empty(alphabet), |acc, w| concat(&acc, w))
}

/// Splits `w` as `conjugator · core · conjugator⁻¹` with `core` cyclically reduced.
pub fn cyclically_reduce(w: &Word) -> (Word, Word) {
    let letters = &w.letters;
    let mut peel = 0;
    while letters.len() >= 2 * peel + 2 && letters[peel].cancels(letters[letters.len() - 1 - peel]) {
        peel += 1;
    }
    let core = Word::from_reduced_unchecked(w.alphabet, letters[peel..letters.len() - peel].to_vec());
    let conjugator = Word::from_reduced_unchecked(w.alphabet, letters[..peel].to_vec());
    (core, conjugator)
}

/// All distinct rotations of a cyclically reduced word.
pub fn cyclic_permutations(w: &Word) -> Result<BTreeSet<Word>> {
    if !w.is_cyclically_reduced() {
        return Err(Error::NotCyclicallyReduced);
    }
    if w.is_empty() {
        return Ok(BTreeSet::from([w.clone()]));
    }
    Ok((0..w.len()).map(|i| w.rotate(i)).collect())
}

fn random_letter_excluding<R: Rng + ?Sized>(alphabet: u32, excluded: Option<Letter>, rng: &mut R) -> Letter {
    match excluded {
        None => Letter::from_order_position(rng.random_range(0..2 * alphabet)),
        Some(ex) => {
            let mut pos = rng.random_range(0..2 * alphabet - 1);
            if pos >= ex.order_position() {
                pos += 1;
            }
            Letter::from_order_position(pos)
        }
    }
}

/// Uniform freely reduced word of exactly `length` letters.
pub fn random_reduced_word<R: Rng + ?Sized>(alphabet: u32, length: usize, rng: &mut R) -> Result<Word> {
    if length > 0 && alphabet == 0 {
        return Err(Error::EmptyAlphabet);
    }
    let mut letters: Vec<Letter> = Vec::with_capacity(length);
    for _ in 0..length {
        let excluded = letters.last().map(|l| l.inverse());
        letters.push(random_letter_excluding(alphabet, excluded, rng));
    }
    Ok(Word::from_reduced_unchecked(alphabet, letters))
}
