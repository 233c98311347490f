//! Finite presentations `⟨X | R⟩`, their symmetrized closures, pieces, and the
//! metric small-cancellation condition `C'(λ)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::words::{cyclic_permutations, invert, random_reduced_word, Word};

/// An exact rational in `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lambda {
    num: u32,
    den: u32,
}

impl Lambda {
    pub const ONE_SIXTH: Lambda = Lambda { num: 1, den: 6 };

    pub fn new(num: u32, den: u32) -> Result<Self> {
        if num == 0 || num >= den {
            return Err(Error::InvalidParameter(format!("lambda must lie strictly between 0 and 1, got {num}/{den}")));
        }
        Ok(Self { num, den })
    }

    pub fn num(self) -> u32 {
        self.num
    }

    pub fn den(self) -> u32 {
        self.den
    }

    /// `piece < λ · len`, evaluated as `den · piece < num · len`.
    pub fn bounds(self, piece: usize, len: usize) -> bool {
        (self.den as u64) * (piece as u64) < (self.num as u64) * (len as u64)
    }
}

impl Default for Lambda {
    fn default() -> Self {
        Self::ONE_SIXTH
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Lambda {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (n, d) = s.split_once('/').ok_or_else(|| Error::Parse(format!("lambda `{s}` is not of the form p/q")))?;
        let parse =
            |t: &str| t.trim().parse::<u32>().map_err(|_| Error::Parse(format!("lambda `{s}` is not of the form p/q")));
        Lambda::new(parse(n)?, parse(d)?)
    }
}

/// Closure of a relator set under inversion and cyclic permutation, sorted in
/// shortlex order.
pub fn symmetrize<'a>(relators: impl IntoIterator<Item = &'a Word>) -> Result<Vec<Word>> {
    let mut closure = BTreeSet::new();
    for r in relators {
        if r.is_empty() || !r.is_cyclically_reduced() {
            return Err(Error::NotCyclicallyReduced);
        }
        closure.extend(cyclic_permutations(r)?);
        closure.extend(cyclic_permutations(&invert(r))?);
    }
    Ok(closure.into_iter().collect())
}

fn common_prefix(a: &Word, b: &Word) -> usize {
    a.letters().iter().zip(b.letters()).take_while(|(x, y)| x == y).count()
}

/// For each word of a symmetrized set, the length of its longest common prefix
/// with any other word of the set.
pub fn max_piece_length(symmetrized: &[Word]) -> BTreeMap<Word, usize> {
    // In lexicographic order the longest common prefix with any other element
    // is attained by an immediate neighbour.
    let mut sorted: Vec<&Word> = symmetrized.iter().collect();
    sorted.sort_by(|a, b| a.letters().cmp(b.letters()));
    sorted.dedup();
    let mut out = BTreeMap::new();
    for (i, w) in sorted.iter().enumerate() {
        let before = i.checked_sub(1).map_or(0, |j| common_prefix(w, sorted[j]));
        let after = sorted.get(i + 1).map_or(0, |v| common_prefix(w, v));
        out.insert((*w).clone(), before.max(after));
    }
    out
}

/// A presentation together with its cached symmetrized closure.
#[derive(Debug, Clone)]
pub struct Presentation {
    alphabet: u32,
    relators: Vec<Word>,
    lambda: Lambda,
    closure: Vec<Word>,
    by_first_letter: Vec<Vec<usize>>,
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.relators == other.relators && self.lambda == other.lambda
    }
}

impl Eq for Presentation {}

impl Presentation {
    pub fn new(alphabet: u32, relators: Vec<Word>, lambda: Lambda) -> Result<Self> {
        for r in &relators {
            if r.alphabet() != alphabet {
                return Err(Error::AlphabetMismatch { left: alphabet, right: r.alphabet() });
            }
        }
        let closure = symmetrize(&relators)?;
        let mut by_first_letter = vec![Vec::new(); 2 * alphabet as usize];
        for (i, w) in closure.iter().enumerate() {
            let first = w.first().expect("closure words are nonempty");
            by_first_letter[first.order_position() as usize].push(i);
        }
        Ok(Self { alphabet, relators, lambda, closure, by_first_letter })
    }

    /// The free group on `alphabet` generators.
    pub fn free(alphabet: u32) -> Self {
        Self::new(alphabet, Vec::new(), Lambda::default()).expect("no relators to validate")
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn lambda(&self) -> Lambda {
        self.lambda
    }

    /// Symmetrized closure in shortlex order.
    pub fn closure(&self) -> &[Word] {
        &self.closure
    }

    /// Indices into [`closure`](Self::closure) of words starting with the
    /// letter at `order_position`, in shortlex order.
    pub fn closure_starting_with(&self, order_position: u32) -> &[usize] {
        self.by_first_letter.get(order_position as usize).map_or(&[], Vec::as_slice)
    }

    pub fn shortest_relator_len(&self) -> Option<usize> {
        self.relators.iter().map(Word::len).min()
    }

    pub fn longest_relator_len(&self) -> Option<usize> {
        self.relators.iter().map(Word::len).max()
    }

    pub fn satisfies_metric_condition(&self) -> bool {
        satisfies_metric_condition(self)
    }
}

pub fn satisfies_metric_condition(p: &Presentation) -> bool {
    max_piece_length(p.closure()).iter().all(|(r, &piece)| p.lambda.bounds(piece, r.len()))
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={} lambda={}", self.alphabet, self.lambda)?;
        for r in &self.relators {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

impl Presentation {
    /// Reads the line-oriented presentation file format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty presentation".into()))?;
        let (alphabet, lambda) = parse_header(header)?;
        let relators = lines.map(|l| Word::parse(l, alphabet)).collect::<Result<Vec<_>>>()?;
        Presentation::new(alphabet, relators, lambda)
    }

    /// Single-line form used inside transcripts: header and relators joined by ` ; `.
    pub fn to_inline(&self) -> String {
        let mut parts = vec![format!("n={} lambda={}", self.alphabet, self.lambda)];
        parts.extend(self.relators.iter().map(Word::to_string));
        parts.join(" ; ")
    }

    pub fn parse_inline(text: &str) -> Result<Self> {
        Self::parse(&text.split(';').collect::<Vec<_>>().join("\n"))
    }
}

fn parse_header(header: &str) -> Result<(u32, Lambda)> {
    let mut alphabet = None;
    let mut lambda = None;
    for field in header.split_whitespace() {
        match field.split_once('=') {
            Some(("n", v)) => {
                alphabet = Some(v.parse::<u32>().map_err(|_| Error::Parse(format!("bad generator count `{v}`")))?)
            }
            Some(("lambda", v)) => lambda = Some(v.parse::<Lambda>()?),
            _ => return Err(Error::Parse(format!("unknown header field `{field}`"))),
        }
    }
    match (alphabet, lambda) {
        (Some(a), Some(l)) => Ok((a, l)),
        _ => Err(Error::Parse(format!("header `{header}` needs n= and lambda="))),
    }
}

/// Parameters for rejection-sampling random presentations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationParams {
    pub alphabet: u32,
    pub num_relators: usize,
    pub relator_length: usize,
    pub lambda: Lambda,
    pub max_attempts: usize,
}

impl Default for GenerationParams {
    fn default() -> Self {
        Self { alphabet: 40, num_relators: 4, relator_length: 9, lambda: Lambda::ONE_SIXTH, max_attempts: 10_000 }
    }
}

impl GenerationParams {
    fn validate(&self) -> Result<()> {
        if self.alphabet == 0 {
            return Err(Error::InvalidParameter("alphabet must be nonempty".into()));
        }
        if self.num_relators == 0 {
            return Err(Error::InvalidParameter("need at least one relator".into()));
        }
        if self.relator_length < 2 {
            return Err(Error::InvalidParameter("relator length must be at least 2".into()));
        }
        if self.max_attempts == 0 {
            return Err(Error::InvalidParameter("max_attempts must be positive".into()));
        }
        Ok(())
    }
}

/// A successful sample and the number of candidate sets drawn to get it.
#[derive(Debug, Clone)]
pub struct Sampled {
    pub presentation: Presentation,
    pub attempts: usize,
}

fn draw_candidate<R: Rng + ?Sized>(params: &GenerationParams, rng: &mut R) -> Option<Vec<Word>> {
    let mut relators = Vec::with_capacity(params.num_relators);
    for _ in 0..params.num_relators {
        let r = random_reduced_word(params.alphabet, params.relator_length, rng).ok()?;
        if !r.is_cyclically_reduced() {
            return None;
        }
        relators.push(r);
    }
    Some(relators)
}

/// Rejection sampler with an extra acceptance predicate.
pub fn sample_small_cancellation_where<R, F>(params: &GenerationParams, rng: &mut R, mut accept: F) -> Result<Sampled>
where
    R: Rng + ?Sized,
    F: FnMut(&Presentation) -> bool,
{
    params.validate()?;
    for attempt in 1..=params.max_attempts {
        let Some(relators) = draw_candidate(params, rng) else {
            continue;
        };
        let p = Presentation::new(params.alphabet, relators, params.lambda)?;
        // A full-size closure rules out proper powers, repeated relators, and
        // relators conjugate to another's inverse.
        if p.closure().len() != 2 * params.num_relators * params.relator_length {
            continue;
        }
        if p.satisfies_metric_condition() && accept(&p) {
            return Ok(Sampled { presentation: p, attempts: attempt });
        }
    }
    Err(Error::GenerationFailed { attempts: params.max_attempts })
}

pub fn sample_small_cancellation<R: Rng + ?Sized>(params: &GenerationParams, rng: &mut R) -> Result<Sampled> {
    sample_small_cancellation_where(params, rng, |_| true)
}

pub fn random_small_cancellation<R: Rng + ?Sized>(params: &GenerationParams, rng: &mut R) -> Result<Presentation> {
    sample_small_cancellation(params, rng).map(|s| s.presentation)
}
