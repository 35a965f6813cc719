//! Deterministic synthetic hashtag streams with topic drift.
//!
//! A stream is a sequence of phases. Each post picks one topic pool of the
//! active phase; with probability `intensity` all its tags come from that
//! pool, otherwise they are drawn from every pool of the phase. Phases with
//! disjoint pools simulate a hashtag drifting into a new context.

use chrono::{DateTime, Duration, TimeZone, Utc};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{Payload, StreamRecord};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phase {
    pub posts: u64,
    pub pools: Vec<Vec<String>>,
    /// Probability that a post stays within a single pool.
    pub intensity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TagsPerPost {
    pub min: usize,
    pub max: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub seed: u64,
    pub start: DateTime<Utc>,
    /// Seconds between consecutive posts.
    pub interval_secs: i64,
    pub phases: Vec<Phase>,
    pub tags_per_post: TagsPerPost,
    /// Tag prepended to every post (the tracked query hashtag).
    #[serde(default)]
    pub include_tag: Option<String>,
}

const DEMO_TOPICS: [&str; 6] = [
    "health", "rights", "politics", "vaccine", "protest", "media",
];
const DEMO_POOL_SIZES: [usize; 6] = [24, 18, 14, 10, 8, 6];

impl SynthConfig {
    /// A ready-made stream of `posts` posts split evenly over `phases` phases
    /// with disjoint pools, starting 2018-02-11 with one post per hour.
    pub fn demo(seed: u64, posts: u64, phases: usize) -> Self {
        let phases = phases.max(1);
        let per_phase = posts / phases as u64;
        let phases = (0..phases)
            .map(|p| Phase {
                posts: if p == 0 {
                    posts - per_phase * (phases as u64 - 1)
                } else {
                    per_phase
                },
                pools: DEMO_TOPICS
                    .iter()
                    .zip(DEMO_POOL_SIZES)
                    .map(|(topic, size)| (0..size).map(|i| format!("#P{p}{topic}{i}")).collect())
                    .collect(),
                intensity: 0.995,
            })
            .filter(|phase| phase.posts > 0)
            .collect();
        Self {
            seed,
            start: Utc.with_ymd_and_hms(2018, 2, 11, 0, 0, 0).unwrap(),
            interval_secs: 3600,
            phases,
            tags_per_post: TagsPerPost { min: 1, max: 5 },
            include_tag: Some("#MyBodyMyChoice".into()),
        }
    }

    pub fn total_posts(&self) -> u64 {
        self.phases.iter().map(|p| p.posts).sum()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSynthConfig(msg));
        if self.interval_secs < 1 {
            return bad("interval_secs must be at least 1".into());
        }
        if self.tags_per_post.min > self.tags_per_post.max {
            return bad("tags_per_post.min exceeds max".into());
        }
        for (i, phase) in self.phases.iter().enumerate() {
            if phase.posts == 0 {
                return bad(format!("phase {i} has no posts"));
            }
            if phase.pools.is_empty() || phase.pools.iter().any(Vec::is_empty) {
                return bad(format!("phase {i} has an empty pool"));
            }
            if !(0.0..=1.0).contains(&phase.intensity) {
                return bad(format!("phase {i} intensity outside [0, 1]"));
            }
        }
        Ok(())
    }
}

/// Iterator over the generated records.
pub struct SynthStream {
    cfg: SynthConfig,
    rng: ChaCha8Rng,
    phase: usize,
    in_phase: u64,
    emitted: u64,
}

/// Validates `cfg` and returns its stream. Equal configs yield equal streams.
pub fn generate_synthetic(cfg: SynthConfig) -> Result<SynthStream> {
    cfg.validate()?;
    let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    Ok(SynthStream {
        cfg,
        rng,
        phase: 0,
        in_phase: 0,
        emitted: 0,
    })
}

fn draw_from<'a>(rng: &mut ChaCha8Rng, tags: &[&'a String], n: usize) -> Vec<&'a String> {
    let n = n.min(tags.len());
    index::sample(rng, tags.len(), n)
        .into_iter()
        .map(|i| tags[i])
        .collect()
}

impl Iterator for SynthStream {
    type Item = StreamRecord;

    fn next(&mut self) -> Option<StreamRecord> {
        while self.cfg.phases.get(self.phase)?.posts <= self.in_phase {
            self.phase += 1;
            self.in_phase = 0;
        }
        let phase = &self.cfg.phases[self.phase];
        let rng = &mut self.rng;

        let TagsPerPost { min, max } = self.cfg.tags_per_post;
        let n = rng.random_range(min as u64..=max as u64) as usize;
        let pool = rng.random_range(0..phase.pools.len() as u64) as usize;
        let candidates: Vec<&String> = if rng.random_bool(phase.intensity) {
            phase.pools[pool].iter().collect()
        } else {
            phase.pools.iter().flatten().collect()
        };
        let mut hashtags: Vec<String> = self.cfg.include_tag.iter().cloned().collect();
        hashtags.extend(draw_from(rng, &candidates, n).into_iter().cloned());

        let timestamp =
            self.cfg.start + Duration::seconds(self.cfg.interval_secs * self.emitted as i64);
        self.emitted += 1;
        self.in_phase += 1;
        Some(StreamRecord {
            timestamp,
            payload: Payload::Hashtags(hashtags),
        })
    }
}
