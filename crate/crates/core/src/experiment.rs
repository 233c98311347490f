//! Benchmark harness: generate platform groups, hide short words inside long
//! padded words, and check that Dehn reduction gives them back.
//!
//! Padding here is the raw, unverified construction, so the reported success
//! rate measures Dehn's algorithm itself rather than the dealer's retry loop.

use std::fmt;
use std::time::{Duration, Instant};

use rand::Rng;

use crate::camouflage::conjugate_padding;
use crate::dehn::{dehn_reduce, is_dehn_reduced};
use crate::error::Result;
use crate::presentation::{sample_small_cancellation, GenerationParams};
use crate::rng::substream;
use crate::words::{random_reduced_word, Word};

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub groups: usize,
    pub words_per_group: usize,
    /// Words have between 1 and `max_word_len - 1` letters.
    pub max_word_len: usize,
    pub pad_target: usize,
    pub seed: u64,
    pub generation: GenerationParams,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            groups: 10,
            words_per_group: 100,
            max_word_len: 10,
            pad_target: 500,
            seed: 0,
            generation: GenerationParams::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GroupReport {
    pub attempts: usize,
    pub generation_time: Duration,
    pub words: usize,
    pub successes: usize,
    pub failures: Vec<(Word, Word)>,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub groups: Vec<GroupReport>,
    pub padded_lengths: Vec<usize>,
    pub reduce_times: Vec<Duration>,
    pub total_time: Duration,
}

impl ExperimentReport {
    pub fn words(&self) -> usize {
        self.groups.iter().map(|g| g.words).sum()
    }

    pub fn successes(&self) -> usize {
        self.groups.iter().map(|g| g.successes).sum()
    }

    pub fn success_rate(&self) -> f64 {
        if self.words() == 0 {
            return 1.0;
        }
        self.successes() as f64 / self.words() as f64
    }

    /// Nearest-rank percentile of per-word reduction time.
    pub fn reduce_percentile(&self, pct: f64) -> Duration {
        percentile(&self.reduce_times, pct)
    }

    pub fn generation_percentile(&self, pct: f64) -> Duration {
        let times: Vec<Duration> = self.groups.iter().map(|g| g.generation_time).collect();
        percentile(&times, pct)
    }

    pub fn mean_padded_length(&self) -> f64 {
        if self.padded_lengths.is_empty() {
            return 0.0;
        }
        self.padded_lengths.iter().sum::<usize>() as f64 / self.padded_lengths.len() as f64
    }
}

pub fn percentile(samples: &[Duration], pct: f64) -> Duration {
    if samples.is_empty() {
        return Duration::ZERO;
    }
    let mut sorted = samples.to_vec();
    sorted.sort();
    let rank = ((pct / 100.0) * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

impl fmt::Display for ExperimentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(f, "groups={}", c.groups)?;
        writeln!(f, "words_per_group={}", c.words_per_group)?;
        writeln!(f, "max_word_len={}", c.max_word_len)?;
        writeln!(f, "pad_target={}", c.pad_target)?;
        writeln!(f, "seed={}", c.seed)?;
        writeln!(
            f,
            "generation_params={}/{}/{} lambda={}",
            c.generation.alphabet, c.generation.num_relators, c.generation.relator_length, c.generation.lambda
        )?;
        let attempts: Vec<String> = self.groups.iter().map(|g| g.attempts.to_string()).collect();
        writeln!(f, "generation_attempts={}", attempts.join(","))?;
        writeln!(f, "generation_ms_p50={:.3}", ms(self.generation_percentile(50.0)))?;
        writeln!(f, "generation_ms_max={:.3}", ms(self.generation_percentile(100.0)))?;
        writeln!(f, "words_total={}", self.words())?;
        writeln!(f, "words_recovered={}", self.successes())?;
        writeln!(f, "success_rate={:.6}", self.success_rate())?;
        writeln!(f, "mean_padded_length={:.1}", self.mean_padded_length())?;
        for pct in [50.0, 90.0, 99.0] {
            writeln!(f, "reduce_us_p{}={:.1}", pct as u32, us(self.reduce_percentile(pct)))?;
        }
        writeln!(f, "total_ms={:.1}", ms(self.total_time))
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn us(d: Duration) -> f64 {
    d.as_secs_f64() * 1e6
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    let mut groups = Vec::with_capacity(config.groups);
    let mut padded_lengths = Vec::new();
    let mut reduce_times = Vec::new();
    let max_len = config.max_word_len.max(2);
    for g in 0..config.groups {
        let mut rng = substream(config.seed, &format!("experiment/group/{g}"));
        let t0 = Instant::now();
        let sampled = sample_small_cancellation(&config.generation, &mut rng)?;
        let generation_time = t0.elapsed();
        let p = sampled.presentation;
        let mut successes = 0;
        let mut failures = Vec::new();
        for _ in 0..config.words_per_group {
            let s = loop {
                let len = rng.random_range(1..max_len);
                let s = random_reduced_word(p.alphabet(), len, &mut rng)?;
                if is_dehn_reduced(&s, &p) {
                    break s;
                }
            };
            let w = conjugate_padding(&s, &p, config.pad_target, &mut rng)?;
            padded_lengths.push(w.len());
            let t = Instant::now();
            let reduced = dehn_reduce(&w, &p);
            reduce_times.push(t.elapsed());
            if reduced == s {
                successes += 1;
            } else {
                failures.push((s, reduced));
            }
        }
        groups.push(GroupReport {
            attempts: sampled.attempts,
            generation_time,
            words: config.words_per_group,
            successes,
            failures,
        });
    }
    Ok(ExperimentReport { config: config.clone(), groups, padded_lengths, reduce_times, total_time: started.elapsed() })
}
