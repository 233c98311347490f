//! Shamir threshold sharing over `Z_p`, plus the bit-level helpers used by the
//! binary schemes (fixed-width binary encoding and XOR splitting).

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Largest prime below the number of reduced words of length at most 10 over
/// 40 generators, so every residue unranks to a word of at most 10 letters.
pub const SHORTLEX_PRIME: &str = "9711052392437791979";

const SMALL_PRIMES: [u32; 20] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];

/// Miller–Rabin with the first twenty primes as bases. Deterministic below
/// 3.3·10²⁴, probabilistic above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &q in &SMALL_PRIMES {
        let q = BigUint::from(q);
        if *n == q {
            return true;
        }
        if (n % &q).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().expect("n > 2");
    let d = &n_minus_1 >> s;
    'bases: for &a in &SMALL_PRIMES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Uniform integer in `[0, bound)`.
pub fn random_below<R: Rng + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    assert!(!bound.is_zero(), "empty range");
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let excess = (bytes as u64 * 8 - bits) as u32;
    let mut buf = vec![0u8; bytes];
    loop {
        rng.fill_bytes(&mut buf);
        buf[0] &= 0xffu8 >> excess;
        let v = BigUint::from_bytes_be(&buf);
        if v < *bound {
            return v;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldParams {
    p: BigUint,
}

impl FieldParams {
    pub fn new(p: BigUint) -> Result<Self> {
        if !is_probable_prime(&p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        Ok(Self { p })
    }

    pub fn from_u64(p: u64) -> Result<Self> {
        Self::new(BigUint::from(p))
    }

    /// The default modulus for shortlex shares.
    pub fn shortlex_default() -> Self {
        Self { p: SHORTLEX_PRIME.parse().expect("pinned constant") }
    }

    pub fn modulus(&self) -> &BigUint {
        &self.p
    }

    /// `⌊log₂ p⌋ + 1`.
    pub fn bit_width(&self) -> usize {
        self.p.bits() as usize
    }

    pub fn check_participants(&self, n: usize) -> Result<()> {
        if self.p <= BigUint::from(n) {
            return Err(Error::InvalidParameter(format!("modulus {} must exceed the participant count {n}", self.p)));
        }
        Ok(())
    }

    pub fn element(&self, v: BigUint) -> Result<BigUint> {
        if v >= self.p {
            return Err(Error::OutOfRange(format!("{v} is not below {}", self.p)));
        }
        Ok(v)
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> BigUint {
        random_below(&self.p, rng)
    }

    /// Inverse of a nonzero element, by the extended Euclidean algorithm.
    pub fn inverse(&self, a: &BigUint) -> Result<BigUint> {
        let a = BigInt::from_biguint(Sign::Plus, a % &self.p);
        let p = BigInt::from_biguint(Sign::Plus, self.p.clone());
        let e = a.extended_gcd(&p);
        if !e.gcd.is_one() {
            return Err(Error::OutOfRange("zero has no inverse".into()));
        }
        Ok(e.x.mod_floor(&p).to_biguint().expect("mod_floor is non-negative"))
    }
}

/// `a_0 + a_1 x + … + a_{k-1} x^{k-1}` over `Z_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coefficients: Vec<BigUint>,
    modulus: BigUint,
}

impl Polynomial {
    /// Coefficients in increasing degree; the leading one must be nonzero
    /// unless the polynomial is constant.
    pub fn from_coefficients(coefficients: Vec<BigUint>, fp: &FieldParams) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidParameter("polynomial needs a constant term".into()));
        }
        for c in &coefficients {
            fp.element(c.clone())?;
        }
        if coefficients.len() > 1 && coefficients.last().is_some_and(Zero::is_zero) {
            return Err(Error::InvalidParameter("leading coefficient must be nonzero".into()));
        }
        Ok(Self { coefficients, modulus: fp.modulus().clone() })
    }

    pub fn coefficients(&self) -> &[BigUint] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn constant_term(&self) -> &BigUint {
        &self.coefficients[0]
    }

    /// Horner evaluation mod p.
    pub fn evaluate(&self, x: &BigUint) -> BigUint {
        self.coefficients.iter().rev().fold(BigUint::zero(), |acc, c| (acc * x + c) % &self.modulus)
    }
}

/// Degree `k - 1` polynomial with constant term `secret`, uniform middle
/// coefficients, and a uniform nonzero leading coefficient.
pub fn random_polynomial<R: Rng + ?Sized>(
    secret: &BigUint,
    k: usize,
    fp: &FieldParams,
    rng: &mut R,
) -> Result<Polynomial> {
    if k == 0 || BigUint::from(k) >= *fp.modulus() {
        return Err(Error::InvalidParameter(format!("threshold {k} out of range for p = {}", fp.p)));
    }
    let mut coefficients = vec![fp.element(secret.clone())?];
    for i in 1..k {
        let c = if i == k - 1 { random_below(&(fp.modulus() - 1u32), rng) + 1u32 } else { fp.random_element(rng) };
        coefficients.push(c);
    }
    Polynomial::from_coefficients(coefficients, fp)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharePoint {
    pub x: BigUint,
    pub y: BigUint,
}

impl SharePoint {
    pub fn new(x: impl Into<BigUint>, y: impl Into<BigUint>) -> Self {
        Self { x: x.into(), y: y.into() }
    }
}

/// Lagrange interpolation at zero through the first `k` points.
pub fn interpolate_secret(points: &[SharePoint], k: usize, fp: &FieldParams) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::InvalidParameter("threshold must be positive".into()));
    }
    for (i, a) in points.iter().enumerate() {
        if points[..i].iter().any(|b| b.x == a.x) {
            return Err(Error::DuplicateX(a.x.to_string()));
        }
    }
    if points.len() < k {
        return Err(Error::AccessDenied { have: points.len(), need: k });
    }
    let p = fp.modulus();
    let used = &points[..k];
    let mut secret = BigUint::zero();
    for (i, pi) in used.iter().enumerate() {
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (j, pj) in used.iter().enumerate() {
            if i == j {
                continue;
            }
            // Basis factor at zero: (0 - x_j) / (x_i - x_j).
            num = num * ((p - &pj.x % p) % p) % p;
            den = den * ((&pi.x % p + p - &pj.x % p) % p) % p;
        }
        let basis = num * fp.inverse(&den)? % p;
        secret = (secret + &pi.y % p * basis) % p;
    }
    Ok(secret)
}

/// Fixed-width bit string, most significant bit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector(Vec<bool>);

impl BitVector {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![false; len])
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self((0..len).map(|_| rng.random()).collect())
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn xor(&self, other: &BitVector) -> Result<BitVector> {
        if self.len() != other.len() {
            return Err(Error::InvalidParameter(format!("bit lengths differ: {} vs {}", self.len(), other.len())));
        }
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect()))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("`{s}` is not a 0/1 string"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitVector)
    }
}

/// Big-endian binary of width `⌊log₂ p⌋ + 1`.
pub fn field_to_bits(y: &BigUint, fp: &FieldParams) -> Result<BitVector> {
    fp.element(y.clone())?;
    let width = fp.bit_width();
    Ok(BitVector((0..width).rev().map(|i| y.bit(i as u64)).collect()))
}

pub fn bits_to_field(b: &BitVector, fp: &FieldParams) -> Result<BigUint> {
    if b.len() != fp.bit_width() {
        return Err(Error::OutOfRange(format!("expected {} bits, got {}", fp.bit_width(), b.len())));
    }
    let v = b.bits().iter().fold(BigUint::zero(), |acc, &bit| (acc << 1u32) + u32::from(bit));
    fp.element(v)
}

/// Splits `secret` into `n` shares whose XOR is the secret.
pub fn split_xor<R: Rng + ?Sized>(secret: &BitVector, n: usize, rng: &mut R) -> Result<Vec<BitVector>> {
    if n < 2 {
        return Err(Error::InvalidParameter("XOR splitting needs at least two shares".into()));
    }
    let mut shares: Vec<BitVector> = (0..n - 1).map(|_| BitVector::random(secret.len(), rng)).collect();
    let last = shares.iter().try_fold(secret.clone(), |acc, s| acc.xor(s))?;
    shares.push(last);
    Ok(shares)
}

pub fn xor_all(shares: &[BitVector]) -> Result<BitVector> {
    let (first, rest) = shares.split_first().ok_or_else(|| Error::InvalidParameter("no shares".into()))?;
    rest.iter().try_fold(first.clone(), |acc, s| acc.xor(s))
}
