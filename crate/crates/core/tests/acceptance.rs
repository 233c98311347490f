//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
//! if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{
    busy_word, chi_square_uniform_p, platform, random_dehn_reduced, reduced_words_of_length, rng, shamir_grid,
    shamir_perfectness, subsets, FIRST_22_N2, SIGNIFICANCE,
};
use groupshare::camouflage::pad_word;
use groupshare::dehn::{dehn_reduce, dehn_reduce_traced, is_dehn_reduced, replay};
use groupshare::experiment::{percentile, run_experiment, ExperimentConfig};
use groupshare::presentation::{sample_small_cancellation, GenerationParams, Presentation};
use groupshare::protocol::{ProtocolParams, Scheme};
use groupshare::rng::substream;
use groupshare::shamir::{split_xor, BitVector, FieldParams};
use groupshare::shortlex::{count_words_of_length, rank, unrank};
use groupshare::transcript::{Secret, Session};
use groupshare::words::{concat, invert, random_reduced_word, Word};
use groupshare::Error;
use num_bigint::BigUint;
use rand::Rng;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn experiment_reproduction() -> Outcome {
    let started = Instant::now();
    let report = run_experiment(&ExperimentConfig::default()).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    ensure(report.words() == 1_000, || format!("{} words reduced, expected 1000", report.words()))?;
    ensure(report.successes() == report.words(), || {
        format!("{} of {} words reduced back", report.successes(), report.words())
    })?;
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "10 groups x 100 words, success 100%, mean padded length {:.1}, {:.2}s",
        report.mean_padded_length(),
        elapsed.as_secs_f64()
    ))
}

fn generation_speed() -> Outcome {
    let params = GenerationParams::default();
    let mut times = Vec::new();
    for trial in 0..20 {
        let mut r = substream(trial, "acceptance/generation");
        let t = Instant::now();
        let sampled = sample_small_cancellation(&params, &mut r).map_err(|e| e.to_string())?;
        times.push(t.elapsed());
        ensure(sampled.presentation.satisfies_metric_condition(), || "sample fails C'(1/6)".into())?;
    }
    let median = percentile(&times, 50.0);
    ensure(median <= Duration::from_secs(10), || format!("median {median:?}"))?;
    Ok(format!("median {median:?} over 20 trials"))
}

fn shortlex_fidelity() -> Outcome {
    for (i, text) in FIRST_22_N2.iter().enumerate() {
        let got = unrank(&BigUint::from(i), 2).map_err(|e| e.to_string())?;
        ensure(got.to_string() == *text, || format!("unrank({i}) = {got}, listing says {text}"))?;
    }
    for n in [2u32, 3, 40] {
        for i in 0u64..100_000 {
            let idx = BigUint::from(i);
            let w = unrank(&idx, n).map_err(|e| e.to_string())?;
            ensure(rank(&w) == idx, || format!("n={n}: rank(unrank({i})) = {}", rank(&w)))?;
        }
    }
    for len in 0..=6 {
        let brute = reduced_words_of_length(2, len).len();
        ensure(count_words_of_length(2, len) == BigUint::from(brute), || {
            format!("n=2 L={len}: formula {} vs {brute}", count_words_of_length(2, len))
        })?;
    }
    Ok("22-word listing exact; 3 x 10^5 round trips; counts n=2, L<=6 exact".into())
}

fn shamir_correctness() -> Outcome {
    let dealt = shamir_grid(100, 4)?;
    let checked = shamir_perfectness(5)?;
    Ok(format!("{dealt} grid dealings, {checked} perfectness checks"))
}

fn protocol_params(scheme: Scheme, n: usize, k: usize, p: u64) -> ProtocolParams {
    match scheme {
        Scheme::Nn => ProtocolParams::nn(n),
        Scheme::KnBinary => ProtocolParams::kn_binary(n, k, FieldParams::from_u64(p).unwrap()),
        Scheme::KnShortlex => ProtocolParams::kn_shortlex(n, k),
    }
}

fn end_to_end() -> Outcome {
    let mut r = rng(6);
    let mut denied = 0;
    for scheme in [Scheme::Nn, Scheme::KnBinary, Scheme::KnShortlex] {
        for run in 0..100 {
            let n = r.random_range(2..=6);
            let k = if scheme == Scheme::Nn { n } else { r.random_range(2..=n) };
            let p = [7u64, 13, 101][run % 3];
            let params = protocol_params(scheme, n, k, p);
            let secret = match scheme {
                Scheme::Nn => Secret::Bits(BitVector::random(r.random_range(1..=32), &mut r)),
                _ => Secret::Field(params.field.random_element(&mut r)),
            };
            let mut session = Session::new(params, r.random()).map_err(|e| e.to_string())?;
            session.deal(&secret, r.random()).map_err(|e| e.to_string())?;
            let authorized: Vec<usize> = {
                let mut ids: Vec<usize> = (1..=n).collect();
                while ids.len() > k && r.random_bool(0.5) {
                    ids.remove(r.random_range(0..ids.len()));
                }
                ids
            };
            let got = session.recover(&authorized).map_err(|e| format!("{scheme} run {run}: {e}"))?;
            ensure(got == secret, || format!("{scheme} run {run}: recovered {got}, dealt {secret}"))?;
            for size in 1..k {
                for subset in subsets(n, size) {
                    let ids: Vec<usize> = subset.iter().map(|i| i + 1).collect();
                    match session.recover(&ids) {
                        Err(Error::AccessDenied { .. }) => denied += 1,
                        other => return Err(format!("{scheme} run {run}: {ids:?} gave {other:?}")),
                    }
                }
            }
        }
    }
    Ok(format!("300 runs recovered; {denied} sub-threshold attempts denied"))
}

fn relator_update() -> Outcome {
    let mut session = Session::new(ProtocolParams::kn_shortlex(3, 2), 7).map_err(|e| e.to_string())?;
    for epoch in 1..=3u32 {
        let before: Vec<Presentation> = session.participants().iter().map(|p| p.presentation().clone()).collect();
        session.update(70 + u64::from(epoch)).map_err(|e| format!("epoch {epoch}: {e}"))?;
        for (i, part) in session.participants().iter().enumerate() {
            let dealer_side = session.dealer().presentation(i + 1);
            ensure(part.presentation().to_string() == dealer_side.to_string(), || {
                format!("epoch {epoch}: participant {} disagrees with the dealer", i + 1)
            })?;
            ensure(part.presentation().satisfies_metric_condition(), || {
                format!("epoch {epoch}: participant {} fails C'(1/6)", i + 1)
            })?;
            ensure(part.presentation() != &before[i], || format!("epoch {epoch}: relators unchanged"))?;
        }
        let secret = Secret::Field(BigUint::from(31_337u32 * epoch));
        session.deal(&secret, 700 + u64::from(epoch)).map_err(|e| e.to_string())?;
        let got = session.recover(&[1, 2]).map_err(|e| e.to_string())?;
        ensure(got == secret, || format!("epoch {epoch}: recovered {got}"))?;
    }
    Ok("3 epochs: relators match dealer verbatim, C'(1/6) holds, dealing recovers".into())
}

fn property_suites() -> Outcome {
    let mut r = rng(8);
    for _ in 0..1_000 {
        let [a, b, c] = [0; 3].map(|_| {
            let len = r.random_range(0..20);
            random_reduced_word(4, len, &mut r).unwrap()
        });
        let e = Word::empty(4);
        let assoc = concat(&concat(&a, &b).unwrap(), &c).unwrap() == concat(&a, &concat(&b, &c).unwrap()).unwrap();
        let ident = concat(&a, &e).unwrap() == a && concat(&e, &a).unwrap() == a;
        let inv = concat(&a, &invert(&a)).unwrap().is_empty();
        ensure(assoc && ident && inv, || format!("free-group axiom fails on {a} / {b} / {c}"))?;
    }

    let groups: Vec<Presentation> = (0..10).map(platform).collect();
    for i in 0..500u64 {
        let p = &groups[(i % 10) as usize];
        let w = busy_word(p, i);
        let trace = dehn_reduce_traced(&w, p);
        let mut current = w.clone();
        for step in &trace.steps {
            let next = replay(&current, std::slice::from_ref(step));
            ensure(next.len() < current.len(), || format!("step at {} did not shorten {current}", step.position))?;
            current = next;
        }
        ensure(is_dehn_reduced(&trace.final_word, p), || format!("{} not reduced", trace.final_word))?;
        ensure(dehn_reduce(&trace.final_word, p) == trace.final_word, || "reduction not idempotent".into())?;
    }

    for i in 0..1_000usize {
        let p = &groups[i % 10];
        let s = random_dehn_reduced(p, 9, &mut r);
        let w = pad_word(&s, p, 500, &mut r).map_err(|e| e.to_string())?;
        ensure(dehn_reduce(&w, p) == s, || format!("pair {i}: padding of {s} did not reduce back"))?;
    }

    let secret: BitVector = "101".parse().unwrap();
    let mut counts = [0u64; 64];
    for _ in 0..10_000 {
        let shares = split_xor(&secret, 3, &mut r).map_err(|e| e.to_string())?;
        let idx = shares[0].bits().iter().chain(shares[1].bits()).fold(0, |acc, &b| acc * 2 + usize::from(b));
        counts[idx] += 1;
    }
    let pval = chi_square_uniform_p(&counts);
    ensure(pval > SIGNIFICANCE, || format!("XOR marginal chi-square p = {pval}"))?;
    Ok(format!(
        "axioms on 1000 triples; Dehn monotone+idempotent on 500 words; 1000 pad round trips; XOR chi-square p = {pval:.3}"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 7] = [
        ("experiment reproduction", experiment_reproduction),
        ("group generation speed", generation_speed),
        ("shortlex fidelity", shortlex_fidelity),
        ("Shamir correctness and perfectness", shamir_correctness),
        ("end-to-end protocol suites", end_to_end),
        ("relator update", relator_update),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = check();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
