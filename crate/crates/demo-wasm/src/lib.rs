//! WebAssembly bindings for the browser demo. Each export takes plain values
//! and returns a JSON string; failures come back as `{"error": "..."}`.

use groupshare::camouflage::pad_word;
use groupshare::dehn::{dehn_reduce_traced, is_dehn_reduced, replay};
use groupshare::presentation::{max_piece_length, sample_small_cancellation, GenerationParams, Lambda};
use groupshare::rng::substream;
use groupshare::shortlex::{rank, unrank};
use groupshare::words::Word;
use num_bigint::BigUint;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_LISTING: u32 = 500;

fn respond(result: Result<Value, String>) -> String {
    result.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

fn err(e: impl ToString) -> String {
    e.to_string()
}

/// `count` consecutive words in shortlex order starting at index `start`.
pub fn shortlex_listing(alphabet: u32, start: &str, count: u32) -> Result<Value, String> {
    let start: BigUint = start.trim().parse().map_err(|_| format!("`{start}` is not a non-negative integer"))?;
    let words = (0..count.min(MAX_LISTING))
        .map(|i| {
            let idx = &start + i;
            unrank(&idx, alphabet).map(|w| json!({ "rank": idx.to_string(), "word": w.to_string() }))
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    Ok(json!({ "alphabet": alphabet, "words": words }))
}

pub fn shortlex_rank(alphabet: u32, word: &str) -> Result<Value, String> {
    let w = Word::parse(word, alphabet).map_err(err)?;
    Ok(json!({ "word": w.to_string(), "length": w.len(), "rank": rank(&w).to_string() }))
}

fn sample(
    alphabet: u32,
    relators: usize,
    length: usize,
    lambda: &str,
    seed: u64,
) -> Result<(groupshare::presentation::Sampled, GenerationParams), String> {
    let params = GenerationParams {
        alphabet,
        num_relators: relators,
        relator_length: length,
        lambda: lambda.parse::<Lambda>().map_err(err)?,
        max_attempts: 10_000,
    };
    let sampled = sample_small_cancellation(&params, &mut substream(seed, "gen-group")).map_err(err)?;
    Ok((sampled, params))
}

/// Samples a presentation and reports its closure and pieces.
pub fn generate_group(alphabet: u32, relators: usize, length: usize, lambda: &str, seed: u64) -> Result<Value, String> {
    let (sampled, params) = sample(alphabet, relators, length, lambda, seed)?;
    let p = &sampled.presentation;
    let longest_piece = max_piece_length(p.closure()).into_values().max().unwrap_or(0);
    Ok(json!({
        "relators": p.relators().iter().map(Word::to_string).collect::<Vec<_>>(),
        "closure_size": p.closure().len(),
        "longest_piece": longest_piece,
        "lambda": params.lambda.to_string(),
        "satisfies_metric_condition": p.satisfies_metric_condition(),
        "attempts": sampled.attempts,
        "text": p.to_string(),
    }))
}

/// Hides `word` in a padded word of about `target` letters under the default
/// 40/4/9 group drawn from `group_seed`, then Dehn-reduces it back.
pub fn pad_and_reduce(group_seed: u64, word: &str, target: usize, pad_seed: u64) -> Result<Value, String> {
    let (sampled, _) = sample(40, 4, 9, "1/6", group_seed)?;
    let p = sampled.presentation;
    let s = Word::parse(word, p.alphabet()).map_err(err)?;
    if !is_dehn_reduced(&s, &p) {
        return Err(format!("`{s}` contains more than half of a relator; pick a shorter word"));
    }
    let w = pad_word(&s, &p, target, &mut substream(pad_seed, "demo/pad")).map_err(err)?;
    let trace = dehn_reduce_traced(&w, &p);
    let mut current = w.clone();
    let steps: Vec<Value> = trace
        .steps
        .iter()
        .map(|step| {
            let before = current.len();
            current = replay(&current, std::slice::from_ref(step));
            json!({
                "position": step.position,
                "removed": step.matched_len(),
                "inserted": step.replacement.len(),
                "relator": step.matched.to_string(),
                "length_before": before,
                "length_after": current.len(),
            })
        })
        .collect();
    Ok(json!({
        "relators": p.relators().iter().map(Word::to_string).collect::<Vec<_>>(),
        "input": s.to_string(),
        "padded": w.to_string(),
        "padded_length": w.len(),
        "steps": steps,
        "reduced": trace.final_word.to_string(),
        "recovered": trace.final_word == s,
    }))
}

#[wasm_bindgen(js_name = shortlexListing)]
pub fn shortlex_listing_js(alphabet: u32, start: &str, count: u32) -> String {
    respond(shortlex_listing(alphabet, start, count))
}

#[wasm_bindgen(js_name = shortlexRank)]
pub fn shortlex_rank_js(alphabet: u32, word: &str) -> String {
    respond(shortlex_rank(alphabet, word))
}

#[wasm_bindgen(js_name = generateGroup)]
pub fn generate_group_js(alphabet: u32, relators: u32, length: u32, lambda: &str, seed: u32) -> String {
    respond(generate_group(alphabet, relators as usize, length as usize, lambda, u64::from(seed)))
}

#[wasm_bindgen(js_name = padAndReduce)]
pub fn pad_and_reduce_js(group_seed: u32, word: &str, target: u32, pad_seed: u32) -> String {
    respond(pad_and_reduce(u64::from(group_seed), word, target as usize, u64::from(pad_seed)))
}
