//! Protocol transcripts and the session driver that produces them.
//!
//! A transcript is a header followed by numbered rounds. Each round records the
//! seed of its random substream and, in order, every private and public
//! message it produced:
//!
//! ```text
//! TRANSCRIPT seed=7 scheme=kn-shortlex n=3 k=2 p=9711052392437791979 pad=500 gen=40/4/9 lambda=1/6 max-attempts=10000 reduction=dehn-leftmost-longest
//! ROUND 0 SETUP seed=7
//! PRIV 1 PRESENTATION n=40 lambda=1/6 ; g0 g5 … ; …
//! PUB 1 X 1
//! ROUND 1 DEAL seed=7
//! PUB 1 X 1
//! PUB 1 KN-SHORTLEX g3 G17 …
//! ```
//!
//! Secrets are never written. Replaying a transcript with the same secrets
//! reproduces it byte for byte.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::dehn::REDUCTION_RULE;
use crate::error::{Error, Result};
use crate::presentation::{GenerationParams, Lambda, Presentation};
use crate::protocol::{
    recover_kn_binary, recover_kn_shortlex, recover_nn, setup, Dealer, Participant, Payload, PrivateMessage,
    ProtocolParams, PublicMessage, Purpose, Scheme,
};
use crate::rng::substream;
use crate::shamir::{BitVector, FieldParams};
use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Message {
    Private(PrivateMessage),
    Public(PublicMessage),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundKind {
    Setup,
    Deal,
    Update,
}

impl fmt::Display for RoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RoundKind::Setup => "SETUP",
            RoundKind::Deal => "DEAL",
            RoundKind::Update => "UPDATE",
        })
    }
}

impl FromStr for RoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "SETUP" => Ok(RoundKind::Setup),
            "DEAL" => Ok(RoundKind::Deal),
            "UPDATE" => Ok(RoundKind::Update),
            _ => Err(Error::Parse(format!("unknown round kind `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Round {
    pub index: usize,
    pub kind: RoundKind,
    pub seed: u64,
    pub messages: Vec<Message>,
}

impl Round {
    pub fn public(&self) -> Vec<PublicMessage> {
        self.messages
            .iter()
            .filter_map(|m| match m {
                Message::Public(p) => Some(p.clone()),
                Message::Private(_) => None,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub seed: u64,
    pub params: ProtocolParams,
    pub rounds: Vec<Round>,
}

impl Transcript {
    pub fn last_round(&self, kind: RoundKind) -> Option<&Round> {
        self.rounds.iter().rev().find(|r| r.kind == kind)
    }

    /// Number of update rounds recorded.
    pub fn update_epochs(&self) -> usize {
        self.rounds.iter().filter(|r| r.kind == RoundKind::Update).count()
    }
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        let g = &p.generation;
        writeln!(
            f,
            "TRANSCRIPT seed={} scheme={} n={} k={} p={} pad={} gen={}/{}/{} lambda={} max-attempts={} reduction={}",
            self.seed,
            p.scheme,
            p.n,
            p.k,
            p.field.modulus(),
            p.pad_target,
            g.alphabet,
            g.num_relators,
            g.relator_length,
            g.lambda,
            g.max_attempts,
            REDUCTION_RULE
        )?;
        for round in &self.rounds {
            writeln!(f, "ROUND {} {} seed={}", round.index, round.kind, round.seed)?;
            for m in &round.messages {
                match m {
                    Message::Private(pm) => writeln!(f, "PRIV {} PRESENTATION {}", pm.to, pm.presentation.to_inline())?,
                    Message::Public(pm) => {
                        let payload = match &pm.payload {
                            Payload::Word(w) => w.to_string(),
                            Payload::Field(x) => x.to_string(),
                        };
                        writeln!(f, "PUB {} {} {}", pm.to, pm.purpose, payload)?
                    }
                }
            }
        }
        Ok(())
    }
}

fn field<'a>(fields: &'a [(&'a str, &'a str)], key: &str) -> Result<&'a str> {
    fields
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::Parse(format!("transcript header lacks `{key}`")))
}

fn num<T: FromStr>(v: &str, what: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Parse(format!("bad {what} `{v}`")))
}

fn parse_header(line: &str) -> Result<(u64, ProtocolParams)> {
    let mut tokens = line.split_whitespace();
    if tokens.next() != Some("TRANSCRIPT") {
        return Err(Error::Parse("transcript must start with a TRANSCRIPT line".into()));
    }
    let fields: Vec<(&str, &str)> = tokens
        .map(|t| t.split_once('=').ok_or_else(|| Error::Parse(format!("bad header field `{t}`"))))
        .collect::<Result<_>>()?;
    let rule = field(&fields, "reduction")?;
    if rule != REDUCTION_RULE {
        return Err(Error::Parse(format!("unsupported reduction rule `{rule}`")));
    }
    let gen: Vec<&str> = field(&fields, "gen")?.split('/').collect();
    let [alphabet, num_relators, relator_length] = gen.as_slice() else {
        return Err(Error::Parse("gen must be n/relators/length".into()));
    };
    let generation = GenerationParams {
        alphabet: num(alphabet, "generator count")?,
        num_relators: num(num_relators, "relator count")?,
        relator_length: num(relator_length, "relator length")?,
        lambda: field(&fields, "lambda")?.parse::<Lambda>()?,
        max_attempts: num(field(&fields, "max-attempts")?, "max-attempts")?,
    };
    let params = ProtocolParams {
        scheme: field(&fields, "scheme")?.parse()?,
        n: num(field(&fields, "n")?, "n")?,
        k: num(field(&fields, "k")?, "k")?,
        field: FieldParams::new(num::<BigUint>(field(&fields, "p")?, "p")?)?,
        pad_target: num(field(&fields, "pad")?, "pad")?,
        generation,
    };
    params.validate()?;
    Ok((num(field(&fields, "seed")?, "seed")?, params))
}

fn parse_message(line: &str, params: &ProtocolParams) -> Result<Message> {
    let mut parts = line.splitn(4, ' ');
    let (Some(kind), Some(to), Some(tag), Some(body)) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
        return Err(Error::Parse(format!("malformed message line `{line}`")));
    };
    let to: usize = num(to, "recipient")?;
    if to == 0 || to > params.n {
        return Err(Error::Parse(format!("recipient {to} out of range")));
    }
    match kind {
        "PRIV" if tag == "PRESENTATION" => {
            Ok(Message::Private(PrivateMessage { to, presentation: Presentation::parse_inline(body)? }))
        }
        "PUB" => {
            let purpose: Purpose = tag.parse()?;
            let payload = match purpose {
                Purpose::X => Payload::Field(num(body.trim(), "x-coordinate")?),
                _ => Payload::Word(Word::parse(body, params.generation.alphabet)?),
            };
            Ok(Message::Public(PublicMessage { to, purpose, payload }))
        }
        _ => Err(Error::Parse(format!("malformed message line `{line}`"))),
    }
}

impl FromStr for Transcript {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let (seed, params) = parse_header(lines.next().ok_or_else(|| Error::Parse("empty transcript".into()))?)?;
        let mut rounds: Vec<Round> = Vec::new();
        for line in lines {
            if let Some(rest) = line.strip_prefix("ROUND ") {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                let [index, kind, seed] = toks.as_slice() else {
                    return Err(Error::Parse(format!("malformed round line `{line}`")));
                };
                let index: usize = num(index, "round index")?;
                if index != rounds.len() {
                    return Err(Error::Parse(format!("round {index} out of sequence")));
                }
                let seed =
                    seed.strip_prefix("seed=").ok_or_else(|| Error::Parse(format!("malformed round line `{line}`")))?;
                rounds.push(Round { index, kind: kind.parse()?, seed: num(seed, "round seed")?, messages: Vec::new() });
            } else {
                let round = rounds.last_mut().ok_or_else(|| Error::Parse("message before first ROUND line".into()))?;
                round.messages.push(parse_message(line, &params)?);
            }
        }
        if rounds.first().map(|r| r.kind) != Some(RoundKind::Setup) {
            return Err(Error::Parse("first round must be SETUP".into()));
        }
        Ok(Transcript { seed, params, rounds })
    }
}

/// A dealt secret: a bit string for the `(n, n)` scheme, a field element otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Secret {
    Bits(BitVector),
    Field(BigUint),
}

impl Secret {
    pub fn parse(text: &str, scheme: Scheme) -> Result<Self> {
        match scheme {
            Scheme::Nn => Ok(Secret::Bits(text.parse()?)),
            _ => Ok(Secret::Field(num(text, "secret")?)),
        }
    }
}

impl fmt::Display for Secret {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Secret::Bits(b) => write!(f, "{b}"),
            Secret::Field(v) => write!(f, "{v}"),
        }
    }
}

/// Runs the protocol and records everything in a [`Transcript`].
#[derive(Debug, Clone)]
pub struct Session {
    dealer: Dealer,
    participants: Vec<Participant>,
    transcript: Transcript,
}

impl Session {
    /// Setup round drawn from substream `round/0/setup` of `seed`.
    pub fn new(params: ProtocolParams, seed: u64) -> Result<Self> {
        let mut rng = substream(seed, "round/0/setup");
        let (dealer, participants, private, public) = setup(&params, &mut rng)?;
        let mut messages: Vec<Message> = private.into_iter().map(Message::Private).collect();
        messages.extend(public.into_iter().map(Message::Public));
        Ok(Self {
            dealer,
            participants,
            transcript: Transcript {
                seed,
                params,
                rounds: vec![Round { index: 0, kind: RoundKind::Setup, seed, messages }],
            },
        })
    }

    pub fn params(&self) -> &ProtocolParams {
        &self.transcript.params
    }

    pub fn dealer(&self) -> &Dealer {
        &self.dealer
    }

    pub fn participants(&self) -> &[Participant] {
        &self.participants
    }

    pub fn participant(&self, id: usize) -> Option<&Participant> {
        self.participants.get(id.checked_sub(1)?)
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    fn next_index(&self) -> usize {
        self.transcript.rounds.len()
    }

    /// Deals `secret` with the configured scheme.
    pub fn deal(&mut self, secret: &Secret, seed: u64) -> Result<&Round> {
        let index = self.next_index();
        let mut rng = substream(seed, &format!("round/{index}/deal"));
        let public = match (self.params().scheme, secret) {
            (Scheme::Nn, Secret::Bits(b)) => self.dealer.deal_nn(b, &mut rng)?,
            (Scheme::KnBinary, Secret::Field(v)) => self.dealer.deal_kn_binary(v, &mut rng)?,
            (Scheme::KnShortlex, Secret::Field(v)) => self.dealer.deal_kn_shortlex(v, &mut rng)?,
            (scheme, _) => {
                return Err(Error::InvalidParameter(format!("secret `{secret}` does not fit scheme {scheme}")))
            }
        };
        self.transcript.rounds.push(Round {
            index,
            kind: RoundKind::Deal,
            seed,
            messages: public.into_iter().map(Message::Public).collect(),
        });
        Ok(self.transcript.rounds.last().expect("just pushed"))
    }

    /// Refreshes every participant's relators, one after another. Either all
    /// participants move to their new presentation or nobody does.
    pub fn update(&mut self, seed: u64) -> Result<&Round> {
        let index = self.next_index();
        let generation = self.params().generation.clone();
        let mut dealer = self.dealer.clone();
        let mut participants = self.participants.clone();
        let mut messages = Vec::new();
        for part in participants.iter_mut() {
            let id = part.id();
            let mut rng = substream(seed, &format!("round/{index}/update/{id}"));
            let pending = dealer.prepare_update(id, &generation, &mut rng)?;
            part.apply_update(&pending.messages)?;
            if part.presentation() != &pending.presentation {
                return Err(Error::UpdateAborted(format!("participant {id} recovered different relators")));
            }
            messages.extend(pending.messages.iter().cloned().map(Message::Public));
            dealer.commit_update(pending);
        }
        self.dealer = dealer;
        self.participants = participants;
        self.transcript.rounds.push(Round { index, kind: RoundKind::Update, seed, messages });
        Ok(self.transcript.rounds.last().expect("just pushed"))
    }

    /// Recovers the most recently dealt secret using the participants in `ids`.
    pub fn recover(&self, ids: &[usize]) -> Result<Secret> {
        let round = self
            .transcript
            .last_round(RoundKind::Deal)
            .ok_or_else(|| Error::InvalidParameter("nothing has been dealt".into()))?;
        let board = round.public();
        let who = ids
            .iter()
            .map(|&id| self.participant(id).ok_or_else(|| Error::InvalidParameter(format!("no participant {id}"))))
            .collect::<Result<Vec<_>>>()?;
        let p = self.params();
        match p.scheme {
            Scheme::Nn => recover_nn(&who, p.n, &board).map(Secret::Bits),
            Scheme::KnBinary => recover_kn_binary(&who, p.k, &p.field, &board).map(Secret::Field),
            Scheme::KnShortlex => recover_kn_shortlex(&who, p.k, &p.field, &board).map(Secret::Field),
        }
    }

    /// Rebuilds the current state from a recorded transcript: presentations
    /// from the setup round, then each update round applied participant-side.
    pub fn from_transcript(transcript: &Transcript) -> Result<Self> {
        let params = transcript.params.clone();
        let setup_round = &transcript.rounds[0];
        let mut presentations: Vec<Option<Presentation>> = vec![None; params.n];
        for m in &setup_round.messages {
            if let Message::Private(pm) = m {
                presentations[pm.to - 1] = Some(pm.presentation.clone());
            }
        }
        let mut participants = presentations
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                p.map(|p| Participant::new(i + 1, p, params.field.clone()))
                    .ok_or_else(|| Error::Parse(format!("no presentation for participant {}", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        for round in transcript.rounds.iter().filter(|r| r.kind == RoundKind::Update) {
            let board = round.public();
            for part in participants.iter_mut() {
                part.apply_update(&board)?;
            }
        }
        let dealer = Dealer::from_parts(params, participants.iter().map(|p| p.presentation().clone()).collect())?;
        Ok(Self { dealer, participants, transcript: transcript.clone() })
    }

    /// Re-executes every round of `transcript` from its recorded seeds. The
    /// `secrets` are consumed in order by the deal rounds.
    pub fn replay(transcript: &Transcript, secrets: &[Secret]) -> Result<Transcript> {
        let mut session = Session::new(transcript.params.clone(), transcript.rounds[0].seed)?;
        let mut secrets = secrets.iter();
        for round in &transcript.rounds[1..] {
            match round.kind {
                RoundKind::Deal => {
                    let s =
                        secrets.next().ok_or_else(|| Error::InvalidParameter("not enough secrets to replay".into()))?;
                    session.deal(s, round.seed)?;
                }
                RoundKind::Update => {
                    session.update(round.seed)?;
                }
                RoundKind::Setup => return Err(Error::Parse("SETUP may only appear first".into())),
            }
        }
        Ok(session.transcript)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(scheme: Scheme) -> ProtocolParams {
        let mut p = match scheme {
            Scheme::Nn => ProtocolParams::nn(3),
            Scheme::KnBinary => ProtocolParams::kn_binary(3, 2, FieldParams::from_u64(13).unwrap()),
            Scheme::KnShortlex => ProtocolParams::kn_shortlex(3, 2),
        };
        p.pad_target = 80;
        p
    }

    #[test]
    fn text_round_trip() {
        let mut s = Session::new(small(Scheme::KnShortlex), 5).unwrap();
        s.deal(&Secret::Field(BigUint::from(1234u32)), 6).unwrap();
        s.update(7).unwrap();
        let text = s.transcript().to_string();
        assert!(text.starts_with("TRANSCRIPT seed=5 scheme=kn-shortlex n=3 k=2 "));
        assert!(text.contains("\nROUND 1 DEAL seed=6\n"));
        assert!(text.contains("\nROUND 2 UPDATE seed=7\n"));
        let parsed: Transcript = text.parse().unwrap();
        assert_eq!(parsed, *s.transcript());
        assert_eq!(parsed.to_string(), text);
        assert_eq!(parsed.update_epochs(), 1);
    }

    #[test]
    fn malformed_transcripts() {
        let good = Session::new(small(Scheme::Nn), 1).unwrap().transcript().to_string();
        assert!("".parse::<Transcript>().is_err());
        assert!(good.replace("TRANSCRIPT", "TRANSCRIPTX").parse::<Transcript>().is_err());
        assert!(good.replace("ROUND 0", "ROUND 1").parse::<Transcript>().is_err());
        assert!(good.replace("PUB 1 X", "PUB 9 X").parse::<Transcript>().is_err());
        assert!(good.replace("PUB 1 X", "PUB 1 Y").parse::<Transcript>().is_err());
        assert!(good.replace("dehn-leftmost-longest", "other").parse::<Transcript>().is_err());
        let body_only: String = good.lines().skip(1).collect::<Vec<_>>().join("\n");
        assert!(body_only.parse::<Transcript>().is_err());
    }

    #[test]
    fn secret_must_match_scheme() {
        let mut s = Session::new(small(Scheme::Nn), 2).unwrap();
        assert!(s.deal(&Secret::Field(BigUint::from(3u32)), 1).is_err());
        assert!(matches!(s.recover(&[1, 2, 3]), Err(Error::InvalidParameter(_))));
        assert_eq!(Secret::parse("0110", Scheme::Nn).unwrap().to_string(), "0110");
        assert!(Secret::parse("12", Scheme::Nn).is_err());
        assert!(Secret::parse("abc", Scheme::KnBinary).is_err());
    }

    #[test]
    fn state_survives_a_text_round_trip() {
        for scheme in [Scheme::Nn, Scheme::KnBinary, Scheme::KnShortlex] {
            let mut s = Session::new(small(scheme), 3).unwrap();
            s.update(4).unwrap();
            let secret = match scheme {
                Scheme::Nn => Secret::Bits("10110".parse().unwrap()),
                _ => Secret::Field(BigUint::from(11u32)),
            };
            s.deal(&secret, 5).unwrap();
            let parsed: Transcript = s.transcript().to_string().parse().unwrap();
            let resumed = Session::from_transcript(&parsed).unwrap();
            assert_eq!(resumed.participants(), s.participants());
            assert_eq!(resumed.recover(&[1, 2, 3]).unwrap(), secret);
            assert_eq!(Session::replay(&parsed, &[secret]).unwrap(), parsed);
        }
    }
}
