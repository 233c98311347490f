//! Independent oracles shared by the integration suites. Everything here is
//! deliberately naive: brute force, quadratic scans, textbook formulas.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;

use groupshare::dehn::{conjugate, is_dehn_reduced};
use groupshare::presentation::{random_small_cancellation, GenerationParams, Presentation};
use groupshare::words::{product, random_reduced_word, Letter, Word};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

pub const SIGNIFICANCE: f64 = 0.001;

/// The opening of the n = 2 listing with x = g0, y = g1 and order
/// x < x⁻¹ < y < y⁻¹.
pub const FIRST_22_N2: [&str; 22] = [
    "e", "g0", "G0", "g1", "G1", "g0 g0", "g0 g1", "g0 G1", "G0 G0", "G0 g1", "G0 G1", "g1 g0", "g1 G0", "g1 g1",
    "G1 g0", "G1 G0", "G1 G1", "g0 g0 g0", "g0 g0 g1", "g0 g0 G1", "g0 g1 g0", "g0 g1 G0",
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A presentation at the default 40/4/9, λ = 1/6 parameters.
pub fn platform(seed: u64) -> Presentation {
    random_small_cancellation(&GenerationParams::default(), &mut rng(seed)).unwrap()
}

/// The letter order spelled out by hand: x_0, x_0⁻¹, x_1, x_1⁻¹, …
pub fn letters_in_order(alphabet: u32) -> Vec<Letter> {
    (0..alphabet).flat_map(|g| [Letter::pos(g), Letter::neg(g)]).collect()
}

/// Removes adjacent inverse pairs one at a time, rescanning from the start.
pub fn naive_reduce(mut letters: Vec<Letter>) -> Vec<Letter> {
    loop {
        let hit = letters
            .windows(2)
            .position(|w| w[0].generator() == w[1].generator() && w[0].is_inverse() != w[1].is_inverse());
        match hit {
            Some(i) => {
                letters.drain(i..i + 2);
            }
            None => return letters,
        }
    }
}

pub fn is_reduced_naive(letters: &[Letter]) -> bool {
    naive_reduce(letters.to_vec()).len() == letters.len()
}

/// Every reduced word of length `len`, found by filtering all `(2n)^len`
/// letter strings, listed in shortlex (here: plain lexicographic) order.
pub fn reduced_words_of_length(alphabet: u32, len: usize) -> Vec<Vec<Letter>> {
    let letters = letters_in_order(alphabet);
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Letter>| {
                letters.iter().map(move |&l| {
                    let mut w = prefix.clone();
                    w.push(l);
                    w
                })
            })
            .collect();
    }
    out.retain(|w| is_reduced_naive(w));
    out
}

/// p-value of Pearson's chi-square statistic against the uniform distribution.
pub fn chi_square_uniform_p(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    let stat: f64 = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    let dist = ChiSquared::new((counts.len() - 1) as f64).unwrap();
    1.0 - dist.cdf(stat)
}

/// Longest common prefix of each element with any other element, by
/// comparing all pairs.
pub fn pairwise_piece_oracle(closure: &[Word]) -> BTreeMap<Word, usize> {
    closure
        .iter()
        .map(|u| {
            let best = closure
                .iter()
                .filter(|v| *v != u)
                .map(|v| u.letters().iter().zip(v.letters()).take_while(|(a, b)| a == b).count())
                .max()
                .unwrap_or(0);
            (u.clone(), best)
        })
        .collect()
}

pub fn random_dehn_reduced<R: Rng>(p: &Presentation, max_len: usize, rng: &mut R) -> Word {
    loop {
        let len = rng.random_range(0..=max_len);
        let w = random_reduced_word(p.alphabet(), len, rng).unwrap();
        if is_dehn_reduced(&w, p) {
            return w;
        }
    }
}

pub fn pow_mod(base: &BigUint, exp: &BigUint, p: &BigUint) -> BigUint {
    // Square-and-multiply written out, independent of BigUint::modpow.
    let mut result = BigUint::one();
    let mut b = base % p;
    let mut e = exp.clone();
    let two = BigUint::from(2u32);
    while !e.is_zero() {
        if &e % &two == BigUint::one() {
            result = (&result * &b) % p;
        }
        b = (&b * &b) % p;
        e /= &two;
    }
    result
}

/// Fermat inverse `a^(p-2) mod p`.
pub fn fermat_inverse(a: &BigUint, p: &BigUint) -> BigUint {
    pow_mod(a, &(p - 2u32), p)
}

/// Solves the Vandermonde system for the coefficients `a_0 … a_{k-1}` through
/// `k` points by Gaussian elimination mod `p`.
pub fn vandermonde_solve(points: &[(BigUint, BigUint)], p: &BigUint) -> Vec<BigUint> {
    let k = points.len();
    let mut m: Vec<Vec<BigUint>> = points
        .iter()
        .map(|(x, y)| {
            let mut row: Vec<BigUint> = (0..k).map(|j| pow_mod(x, &BigUint::from(j), p)).collect();
            row.push(y % p);
            row
        })
        .collect();
    for col in 0..k {
        let pivot = (col..k).find(|&r| !m[r][col].is_zero()).expect("distinct x gives full rank");
        m.swap(col, pivot);
        let inv = fermat_inverse(&m[col][col], p);
        for c in col..=k {
            m[col][c] = (&m[col][c] * &inv) % p;
        }
        for r in 0..k {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=k {
                    let sub = (&factor * &m[col][c]) % p;
                    m[r][c] = (&m[r][c] + p - sub) % p;
                }
            }
        }
    }
    m.into_iter().map(|row| row[k].clone()).collect()
}

/// Whether some polynomial of degree at most `k - 1` over `Z_p` with constant
/// term `secret` passes through all `points`, by trying every choice of the
/// remaining `k - 1` coefficients.
pub fn some_polynomial_through(points: &[(u64, u64)], secret: u64, k: usize, p: u64) -> bool {
    let free = k - 1;
    let total = p.pow(free as u32);
    (0..total).any(|code| {
        let mut coeffs = vec![secret];
        let mut c = code;
        for _ in 0..free {
            coeffs.push(c % p);
            c /= p;
        }
        points.iter().all(|&(x, y)| {
            let v = coeffs.iter().rev().fold(0u64, |acc, &a| (acc * x + a) % p);
            v == y
        })
    })
}

/// All subsets of `0..n` of size `size`.
pub fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == size)
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

/// Deals random secrets over the grid p ∈ {7, 101, 2³¹−1}, k ≤ n ≤ 6, and
/// interpolates from every k-subset. Returns the number of dealings checked.
pub fn shamir_grid(trials: usize, seed: u64) -> Result<usize, String> {
    use groupshare::shamir::{interpolate_secret, random_polynomial, FieldParams, SharePoint};
    let mut r = rng(seed);
    let mut dealt = 0;
    for p in [7u64, 101, (1 << 31) - 1] {
        let fp = FieldParams::from_u64(p).unwrap();
        for n in 1..=6usize {
            for k in 1..=n {
                for _ in 0..trials {
                    let secret = fp.random_element(&mut r);
                    let f = random_polynomial(&secret, k, &fp, &mut r).map_err(|e| e.to_string())?;
                    let points: Vec<SharePoint> =
                        (1..=n as u64).map(|x| SharePoint::new(x, f.evaluate(&BigUint::from(x)))).collect();
                    for subset in subsets(n, k) {
                        let chosen: Vec<SharePoint> = subset.iter().map(|&i| points[i].clone()).collect();
                        let got = interpolate_secret(&chosen, k, &fp).map_err(|e| e.to_string())?;
                        if got != secret {
                            return Err(format!("p={p} n={n} k={k} subset {subset:?}: got {got}, dealt {secret}"));
                        }
                    }
                    dealt += 1;
                }
            }
        }
    }
    Ok(dealt)
}

/// For every prime p ≤ 13 and k ≤ n < p with n ≤ 5, deals a few secrets and
/// checks that every (k−1)-subset of shares is consistent with every
/// candidate secret. Returns the number of (subset, candidate) pairs checked.
pub fn shamir_perfectness(seed: u64) -> Result<usize, String> {
    use groupshare::shamir::{random_polynomial, FieldParams};
    let mut r = rng(seed);
    let mut checked = 0;
    for p in [2u64, 3, 5, 7, 11, 13] {
        let fp = FieldParams::from_u64(p).unwrap();
        for n in 1..(p as usize).min(6) {
            for k in 2..=n {
                for _ in 0..3 {
                    let secret = fp.random_element(&mut r);
                    let f = random_polynomial(&secret, k, &fp, &mut r).map_err(|e| e.to_string())?;
                    let shares: Vec<(u64, u64)> = (1..=n as u64)
                        .map(|x| {
                            let y = f.evaluate(&BigUint::from(x));
                            (x, y.to_u64_digits().first().copied().unwrap_or(0))
                        })
                        .collect();
                    for subset in subsets(n, k - 1) {
                        let pts: Vec<(u64, u64)> = subset.iter().map(|&i| shares[i]).collect();
                        for candidate in 0..p {
                            if !some_polynomial_through(&pts, candidate, k, p) {
                                return Err(format!("p={p} k={k} shares {pts:?} exclude secret {candidate}"));
                            }
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(checked)
}

/// A word that mixes random letters with conjugated closure elements, so that
/// reduction has real work to do.
pub fn busy_word(p: &Presentation, seed: u64) -> Word {
    let mut r = rng(seed);
    let mut pieces = Vec::new();
    for _ in 0..r.random_range(1..12) {
        if r.random_bool(0.5) {
            let len = r.random_range(0..6);
            pieces.push(random_reduced_word(p.alphabet(), len, &mut r).unwrap());
        } else {
            let g = random_reduced_word(p.alphabet(), r.random_range(0..4), &mut r).unwrap();
            let c = &p.closure()[r.random_range(0..p.closure().len())];
            pieces.push(conjugate(&g, c));
        }
    }
    product(p.alphabet(), &pieces).unwrap()
}
