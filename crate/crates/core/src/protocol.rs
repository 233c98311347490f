//! Dealer and participant state machines for the three dealing flows and for
//! relator updates.
//!
//! The dealer talks to participants through two channels: private messages
//! (presentations, sent once at setup) and the public board (x-coordinates and
//! padded words). Every word a dealer publishes comes out of
//! [`pad_word`](crate::camouflage::pad_word) or
//! [`encode_bits`](crate::camouflage::encode_bits), so it has been checked to
//! reduce to what it encodes before it leaves the dealer.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;

use crate::camouflage::{decode_bits, encode_bits, pad_word};
use crate::dehn::{dehn_reduce, is_dehn_reduced};
use crate::error::{Error, Result};
use crate::presentation::{sample_small_cancellation, sample_small_cancellation_where, GenerationParams, Presentation};
use crate::shamir::{
    bits_to_field, field_to_bits, interpolate_secret, random_polynomial, split_xor, xor_all, BitVector, FieldParams,
    SharePoint,
};
use crate::shortlex::{rank, unrank};
use crate::words::Word;

/// Longest word a shortlex share may reduce to.
pub const MAX_SHARE_LEN: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// `(n, n)` XOR sharing, one public word per bit.
    Nn,
    /// `(k, n)` Shamir sharing, one public word per bit of each share.
    KnBinary,
    /// `(k, n)` Shamir sharing, one public word per share via shortlex unranking.
    KnShortlex,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Nn => "nn",
            Scheme::KnBinary => "kn-bin",
            Scheme::KnShortlex => "kn-shortlex",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nn" => Ok(Scheme::Nn),
            "kn-bin" => Ok(Scheme::KnBinary),
            "kn-shortlex" => Ok(Scheme::KnShortlex),
            _ => Err(Error::Parse(format!("unknown scheme `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Purpose {
    X,
    NnBit,
    KnBit,
    KnShortlex,
    Update,
}

impl fmt::Display for Purpose {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Purpose::X => "X",
            Purpose::NnBit => "NN-BIT",
            Purpose::KnBit => "KN-BIT",
            Purpose::KnShortlex => "KN-SHORTLEX",
            Purpose::Update => "UPDATE",
        })
    }
}

impl FromStr for Purpose {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X" => Ok(Purpose::X),
            "NN-BIT" => Ok(Purpose::NnBit),
            "KN-BIT" => Ok(Purpose::KnBit),
            "KN-SHORTLEX" => Ok(Purpose::KnShortlex),
            "UPDATE" => Ok(Purpose::Update),
            _ => Err(Error::Parse(format!("unknown message purpose `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Word(Word),
    Field(BigUint),
}

/// One entry of the public board. Participant ids are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicMessage {
    pub to: usize,
    pub purpose: Purpose,
    pub payload: Payload,
}

impl PublicMessage {
    pub fn word(to: usize, purpose: Purpose, w: Word) -> Self {
        Self { to, purpose, payload: Payload::Word(w) }
    }

    pub fn x(to: usize, x: BigUint) -> Self {
        Self { to, purpose: Purpose::X, payload: Payload::Field(x) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivateMessage {
    pub to: usize,
    pub presentation: Presentation,
}

/// Append-only public channel.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PublicBoard {
    messages: Vec<PublicMessage>,
}

impl PublicBoard {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn publish(&mut self, msgs: impl IntoIterator<Item = PublicMessage>) {
        self.messages.extend(msgs);
    }

    pub fn messages(&self) -> &[PublicMessage] {
        &self.messages
    }
}

fn words_for(board: &[PublicMessage], to: usize, purpose: Purpose) -> Vec<Word> {
    board
        .iter()
        .filter(|m| m.to == to && m.purpose == purpose)
        .filter_map(|m| match &m.payload {
            Payload::Word(w) => Some(w.clone()),
            Payload::Field(_) => None,
        })
        .collect()
}

/// The last x-coordinate published for `to`.
fn x_for(board: &[PublicMessage], to: usize) -> Option<BigUint> {
    board.iter().rev().find_map(|m| match (&m.payload, m.purpose) {
        (Payload::Field(x), Purpose::X) if m.to == to => Some(x.clone()),
        _ => None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolParams {
    pub scheme: Scheme,
    pub n: usize,
    pub k: usize,
    pub field: FieldParams,
    pub pad_target: usize,
    pub generation: GenerationParams,
}

impl ProtocolParams {
    pub fn nn(n: usize) -> Self {
        Self {
            scheme: Scheme::Nn,
            n,
            k: n,
            field: FieldParams::from_u64(2).expect("2 is prime"),
            pad_target: 500,
            generation: GenerationParams::default(),
        }
    }

    pub fn kn_binary(n: usize, k: usize, field: FieldParams) -> Self {
        Self { scheme: Scheme::KnBinary, n, k, field, pad_target: 500, generation: GenerationParams::default() }
    }

    pub fn kn_shortlex(n: usize, k: usize) -> Self {
        Self {
            scheme: Scheme::KnShortlex,
            n,
            k,
            field: FieldParams::shortlex_default(),
            pad_target: 500,
            generation: GenerationParams::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("need at least one participant".into()));
        }
        match self.scheme {
            Scheme::Nn => {
                if self.n < 2 || self.k != self.n {
                    return Err(Error::InvalidParameter("(n,n) scheme needs n >= 2 and k = n".into()));
                }
            }
            Scheme::KnBinary | Scheme::KnShortlex => {
                if self.k < 2 || self.k > self.n {
                    return Err(Error::InvalidParameter(format!(
                        "threshold k = {} must satisfy 2 <= k <= n = {}",
                        self.k, self.n
                    )));
                }
                self.field.check_participants(self.n)?;
            }
        }
        if self.pad_target == 0 {
            return Err(Error::InvalidParameter("padding target must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dealer {
    params: ProtocolParams,
    presentations: Vec<Presentation>,
    xs: Vec<BigUint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Participant {
    id: usize,
    presentation: Presentation,
    field: FieldParams,
    epoch: u32,
}

/// Everything a setup round produces: dealer and participant state, the
/// private presentations, and the published x-coordinates.
pub type SetupOutput = (Dealer, Vec<Participant>, Vec<PrivateMessage>, Vec<PublicMessage>);

/// Generates and privately delivers one presentation per participant and
/// publishes the default x-coordinates `1..=n`.
pub fn setup<R: Rng + ?Sized>(params: &ProtocolParams, rng: &mut R) -> Result<SetupOutput> {
    params.validate()?;
    let mut presentations: Vec<Presentation> = Vec::with_capacity(params.n);
    while presentations.len() < params.n {
        let p = sample_small_cancellation(&params.generation, rng)?.presentation;
        if !presentations.contains(&p) {
            presentations.push(p);
        }
    }
    let xs: Vec<BigUint> = (1..=params.n).map(BigUint::from).collect();
    let participants = presentations
        .iter()
        .enumerate()
        .map(|(i, p)| Participant::new(i + 1, p.clone(), params.field.clone()))
        .collect();
    let private =
        presentations.iter().enumerate().map(|(i, p)| PrivateMessage { to: i + 1, presentation: p.clone() }).collect();
    let public = xs.iter().enumerate().map(|(i, x)| PublicMessage::x(i + 1, x.clone())).collect();
    let dealer = Dealer { params: params.clone(), presentations, xs };
    Ok((dealer, participants, private, public))
}

/// A relator refresh for one participant, prepared by the dealer but not yet
/// committed.
#[derive(Debug, Clone)]
pub struct PendingUpdate {
    pub participant: usize,
    pub presentation: Presentation,
    pub messages: Vec<PublicMessage>,
}

impl Dealer {
    /// Rebuilds a dealer from known state, e.g. when resuming from a transcript.
    pub fn from_parts(params: ProtocolParams, presentations: Vec<Presentation>) -> Result<Self> {
        params.validate()?;
        if presentations.len() != params.n {
            return Err(Error::InvalidParameter(format!(
                "expected {} presentations, got {}",
                params.n,
                presentations.len()
            )));
        }
        let xs = (1..=params.n).map(BigUint::from).collect();
        Ok(Self { params, presentations, xs })
    }

    pub fn params(&self) -> &ProtocolParams {
        &self.params
    }

    pub fn presentation(&self, id: usize) -> &Presentation {
        &self.presentations[id - 1]
    }

    pub fn x(&self, id: usize) -> &BigUint {
        &self.xs[id - 1]
    }

    fn check_scheme(&self, scheme: Scheme) -> Result<()> {
        if self.params.scheme != scheme {
            return Err(Error::InvalidParameter(format!(
                "dealer is configured for {}, not {scheme}",
                self.params.scheme
            )));
        }
        Ok(())
    }

    /// XOR-splits `secret` and publishes one word per bit per participant.
    pub fn deal_nn<R: Rng + ?Sized>(&self, secret: &BitVector, rng: &mut R) -> Result<Vec<PublicMessage>> {
        self.check_scheme(Scheme::Nn)?;
        let shares = split_xor(secret, self.params.n, rng)?;
        let mut out = Vec::new();
        for (i, share) in shares.iter().enumerate() {
            let words = encode_bits(share.bits(), &self.presentations[i], self.params.pad_target, rng)?;
            out.extend(words.into_iter().map(|w| PublicMessage::word(i + 1, Purpose::NnBit, w)));
        }
        Ok(out)
    }

    /// Shamir-deals `secret` and publishes each share bit by bit.
    pub fn deal_kn_binary<R: Rng + ?Sized>(&self, secret: &BigUint, rng: &mut R) -> Result<Vec<PublicMessage>> {
        self.check_scheme(Scheme::KnBinary)?;
        let fp = &self.params.field;
        let f = random_polynomial(secret, self.params.k, fp, rng)?;
        let mut out = Vec::new();
        for (i, x) in self.xs.iter().enumerate() {
            let bits = field_to_bits(&f.evaluate(x), fp)?;
            out.push(PublicMessage::x(i + 1, x.clone()));
            let words = encode_bits(bits.bits(), &self.presentations[i], self.params.pad_target, rng)?;
            out.extend(words.into_iter().map(|w| PublicMessage::word(i + 1, Purpose::KnBit, w)));
        }
        Ok(out)
    }

    /// Shamir-deals `secret`, maps each share to the shortlex word of that
    /// index, and publishes one padded word per participant. A participant
    /// whose share word is empty or not Dehn-reduced under its presentation is
    /// moved to the next unused x-coordinate.
    pub fn deal_kn_shortlex<R: Rng + ?Sized>(&self, secret: &BigUint, rng: &mut R) -> Result<Vec<PublicMessage>> {
        self.check_scheme(Scheme::KnShortlex)?;
        let fp = &self.params.field;
        let f = random_polynomial(secret, self.params.k, fp, rng)?;
        let mut used: BTreeSet<BigUint> = self.xs.iter().cloned().collect();
        let mut next_candidate = BigUint::from(1u32);
        let mut out = Vec::new();
        for (i, default_x) in self.xs.iter().enumerate() {
            let p = &self.presentations[i];
            let mut x = default_x.clone();
            let share_word = loop {
                let y = f.evaluate(&x);
                if let Some(s) = self.admissible_share(&y, p)? {
                    break s;
                }
                x = loop {
                    if next_candidate >= *fp.modulus() {
                        return Err(Error::Dealing(format!(
                            "no admissible x-coordinate left for participant {}",
                            i + 1
                        )));
                    }
                    let c = next_candidate.clone();
                    next_candidate += 1u32;
                    if used.insert(c.clone()) {
                        break c;
                    }
                };
            };
            let w = pad_word(&share_word, p, self.params.pad_target, rng)?;
            out.push(PublicMessage::x(i + 1, x));
            out.push(PublicMessage::word(i + 1, Purpose::KnShortlex, w));
        }
        Ok(out)
    }

    fn admissible_share(&self, y: &BigUint, p: &Presentation) -> Result<Option<Word>> {
        if y.is_zero() {
            return Ok(None);
        }
        let s = unrank(y, p.alphabet())?;
        Ok((s.len() <= MAX_SHARE_LEN && is_dehn_reduced(&s, p)).then_some(s))
    }

    /// Draws a fresh presentation for participant `id` whose relators are
    /// Dehn-reduced under the current one, and pads each relator with the
    /// current relators for publication.
    pub fn prepare_update<R: Rng + ?Sized>(
        &self,
        id: usize,
        params: &GenerationParams,
        rng: &mut R,
    ) -> Result<PendingUpdate> {
        let old = &self.presentations[id - 1];
        let new = sample_small_cancellation_where(params, rng, |cand| {
            cand != old && cand.relators().iter().all(|r| is_dehn_reduced(r, old))
        })?
        .presentation;
        let messages = new
            .relators()
            .iter()
            .map(|r| pad_word(r, old, self.params.pad_target, rng).map(|w| PublicMessage::word(id, Purpose::Update, w)))
            .collect::<Result<Vec<_>>>()?;
        Ok(PendingUpdate { participant: id, presentation: new, messages })
    }

    pub fn commit_update(&mut self, update: PendingUpdate) {
        self.presentations[update.participant - 1] = update.presentation;
    }
}

impl Participant {
    pub fn new(id: usize, presentation: Presentation, field: FieldParams) -> Self {
        Self { id, presentation, field, epoch: 0 }
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// Number of completed relator updates.
    pub fn epoch(&self) -> u32 {
        self.epoch
    }

    pub fn x(&self, board: &[PublicMessage]) -> Result<BigUint> {
        x_for(board, self.id)
            .ok_or_else(|| Error::ProtocolCorruption(format!("no x-coordinate for participant {}", self.id)))
    }

    /// Decodes the bit share published for this participant under `purpose`.
    pub fn decode_share_bits(&self, board: &[PublicMessage], purpose: Purpose) -> BitVector {
        BitVector::new(decode_bits(&words_for(board, self.id, purpose), &self.presentation))
    }

    pub fn recover_share_binary(&self, board: &[PublicMessage]) -> Result<SharePoint> {
        let bits = self.decode_share_bits(board, Purpose::KnBit);
        let y = bits_to_field(&bits, &self.field)
            .map_err(|e| Error::ProtocolCorruption(format!("participant {}: {e}", self.id)))?;
        Ok(SharePoint { x: self.x(board)?, y })
    }

    /// Reduces the published word and returns `(x_i, rank(s_i))`.
    pub fn recover_share_shortlex(&self, board: &[PublicMessage]) -> Result<SharePoint> {
        let words = words_for(board, self.id, Purpose::KnShortlex);
        let [w] = words.as_slice() else {
            return Err(Error::ProtocolCorruption(format!(
                "expected one shortlex word for participant {}, found {}",
                self.id,
                words.len()
            )));
        };
        let s = dehn_reduce(w, &self.presentation);
        if s.len() > MAX_SHARE_LEN {
            return Err(Error::ProtocolCorruption(format!(
                "participant {} reduced its word to {} letters (limit {MAX_SHARE_LEN})",
                self.id,
                s.len()
            )));
        }
        let y = rank(&s);
        let y =
            self.field.element(y).map_err(|e| Error::ProtocolCorruption(format!("participant {}: {e}", self.id)))?;
        Ok(SharePoint { x: self.x(board)?, y })
    }

    /// Reduces the update words against the current relators and, if the
    /// result is a valid small-cancellation presentation, adopts it.
    pub fn apply_update(&mut self, board: &[PublicMessage]) -> Result<()> {
        let words = words_for(board, self.id, Purpose::Update);
        if words.is_empty() {
            return Err(Error::UpdateAborted(format!("no update words for participant {}", self.id)));
        }
        let relators: Vec<Word> = words.iter().map(|w| dehn_reduce(w, &self.presentation)).collect();
        let new = Presentation::new(self.presentation.alphabet(), relators, self.presentation.lambda())
            .map_err(|e| Error::UpdateAborted(e.to_string()))?;
        if !new.satisfies_metric_condition() {
            return Err(Error::UpdateAborted(format!(
                "recovered relators of participant {} fail C'({})",
                self.id,
                new.lambda()
            )));
        }
        self.presentation = new;
        self.epoch += 1;
        Ok(())
    }
}

fn distinct(participants: &[&Participant]) -> Result<usize> {
    let ids: BTreeSet<usize> = participants.iter().map(|p| p.id).collect();
    if ids.len() != participants.len() {
        return Err(Error::InvalidParameter("participant listed twice".into()));
    }
    Ok(ids.len())
}

/// XOR of all `n` decoded shares. Any missing participant means access denied.
pub fn recover_nn(participants: &[&Participant], n: usize, board: &[PublicMessage]) -> Result<BitVector> {
    let have = distinct(participants)?;
    if have < n {
        return Err(Error::AccessDenied { have, need: n });
    }
    let shares: Vec<BitVector> = participants.iter().map(|p| p.decode_share_bits(board, Purpose::NnBit)).collect();
    xor_all(&shares)
}

pub fn recover_kn_binary(
    participants: &[&Participant],
    k: usize,
    fp: &FieldParams,
    board: &[PublicMessage],
) -> Result<BigUint> {
    let have = distinct(participants)?;
    if have < k {
        return Err(Error::AccessDenied { have, need: k });
    }
    let points = participants.iter().map(|p| p.recover_share_binary(board)).collect::<Result<Vec<_>>>()?;
    recover_secret(&points, k, fp)
}

pub fn recover_kn_shortlex(
    participants: &[&Participant],
    k: usize,
    fp: &FieldParams,
    board: &[PublicMessage],
) -> Result<BigUint> {
    let have = distinct(participants)?;
    if have < k {
        return Err(Error::AccessDenied { have, need: k });
    }
    let points = participants.iter().map(|p| p.recover_share_shortlex(board)).collect::<Result<Vec<_>>>()?;
    recover_secret(&points, k, fp)
}

pub fn recover_secret(points: &[SharePoint], k: usize, fp: &FieldParams) -> Result<BigUint> {
    interpolate_secret(points, k, fp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parameter_validation() {
        assert!(ProtocolParams::nn(0).validate().is_err());
        assert!(ProtocolParams::nn(1).validate().is_err());
        assert!(ProtocolParams::nn(2).validate().is_ok());
        assert!(ProtocolParams::kn_shortlex(3, 1).validate().is_err());
        assert!(ProtocolParams::kn_shortlex(3, 4).validate().is_err());
        let small = ProtocolParams::kn_binary(7, 2, FieldParams::from_u64(7).unwrap());
        assert!(small.validate().is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(setup(&ProtocolParams::nn(0), &mut rng).is_err());
    }

    #[test]
    fn names_round_trip() {
        for s in [Scheme::Nn, Scheme::KnBinary, Scheme::KnShortlex] {
            assert_eq!(s.to_string().parse::<Scheme>().unwrap(), s);
        }
        for p in [Purpose::X, Purpose::NnBit, Purpose::KnBit, Purpose::KnShortlex, Purpose::Update] {
            assert_eq!(p.to_string().parse::<Purpose>().unwrap(), p);
        }
        assert!("kn".parse::<Scheme>().is_err());
    }

    #[test]
    fn nn_counts_and_recovery() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut params = ProtocolParams::nn(2);
        params.pad_target = 120;
        let (dealer, parts, private, public) = setup(&params, &mut rng).unwrap();
        assert_eq!(private.len(), 2);
        assert_eq!(public.len(), 2);
        let secret: BitVector = "1010".parse().unwrap();
        let board = dealer.deal_nn(&secret, &mut rng).unwrap();
        assert_eq!(board.len(), 8);
        let all: Vec<&Participant> = parts.iter().collect();
        assert_eq!(recover_nn(&all, 2, &board).unwrap(), secret);
        assert_eq!(recover_nn(&all[..1], 2, &board), Err(Error::AccessDenied { have: 1, need: 2 }));
        assert!(dealer.deal_kn_shortlex(&BigUint::from(1u32), &mut rng).is_err());
    }

    #[test]
    fn kn_binary_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut params = ProtocolParams::kn_binary(3, 2, FieldParams::from_u64(7).unwrap());
        params.pad_target = 120;
        let (dealer, parts, _, _) = setup(&params, &mut rng).unwrap();
        let board = dealer.deal_kn_binary(&BigUint::from(5u32), &mut rng).unwrap();
        let words = board.iter().filter(|m| m.purpose == Purpose::KnBit).count();
        assert_eq!(words, 9);
        let pair = [&parts[0], &parts[2]];
        assert_eq!(recover_kn_binary(&pair, 2, &params.field, &board).unwrap(), BigUint::from(5u32));
        assert!(matches!(recover_kn_binary(&pair[..1], 2, &params.field, &board), Err(Error::AccessDenied { .. })));
    }

    #[test]
    fn duplicate_participant_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut params = ProtocolParams::kn_shortlex(3, 2);
        params.pad_target = 100;
        let (dealer, parts, _, _) = setup(&params, &mut rng).unwrap();
        let board = dealer.deal_kn_shortlex(&BigUint::from(77u32), &mut rng).unwrap();
        let twice = [&parts[0], &parts[0]];
        assert!(matches!(recover_kn_shortlex(&twice, 2, &params.field, &board), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn tiny_field_exhausts_x_coordinates() {
        // Over Z_3 with secret 1, f(x) = 1 + a·x vanishes at x = 1 or x = 2, and
        // no third nonzero coordinate exists to move that participant to.
        let mut params = ProtocolParams::kn_shortlex(2, 2);
        params.field = FieldParams::from_u64(3).unwrap();
        params.pad_target = 60;
        for seed in 0..10 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (dealer, _, _, _) = setup(&params, &mut rng).unwrap();
            assert!(matches!(dealer.deal_kn_shortlex(&BigUint::from(1u32), &mut rng), Err(Error::Dealing(_))));
        }
    }
}
