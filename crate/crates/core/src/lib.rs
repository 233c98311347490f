//! Threshold secret sharing over small-cancellation groups.
//!
//! Shares are hidden inside long public words that only the holder of a
//! private presentation can Dehn-reduce. Three dealing flows are provided: an
//! `(n, n)` XOR scheme with one word per bit, a `(k, n)` Shamir scheme with one
//! word per bit of each share, and a `(k, n)` Shamir scheme that maps each share
//! to a single reduced word through the shortlex order. Participants' relators
//! can be refreshed over the public channel.

pub mod camouflage;
pub mod dehn;
pub mod error;
pub mod experiment;
pub mod presentation;
pub mod protocol;
pub mod rng;
pub mod shamir;
pub mod shortlex;
pub mod transcript;
pub mod words;

pub use error::{Error, Result};
