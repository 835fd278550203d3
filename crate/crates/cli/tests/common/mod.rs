#![allow(dead_code)]

use std::path::{Path, PathBuf};

use fontsense_core::corpus::{AnnotatorRanking, RawInstance};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn lexicons() -> PathBuf {
    fixtures().join("lexicons")
}

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_fontsense")
}

/// Word groups from the fixture lexicons and the fonts annotators favour
/// for each, strongest first.
pub const GROUPS: &[(&[&str], [usize; 3])] = &[
    (
        &[
            "celebrate",
            "happy",
            "delight",
            "sunshine",
            "party",
            "cheer",
            "smile",
            "fun",
            "joyous",
        ],
        [7, 5, 9],
    ),
    (
        &["love", "sweet", "heart", "romance", "wedding", "kiss", "beloved"],
        [4, 9, 7],
    ),
    (
        &["rage", "furious", "angry", "fight", "hate", "war", "enraged"],
        [3, 6, 5],
    ),
    (
        &["scary", "terror", "haunted", "dark", "ghost", "nightmare", "spooky"],
        [1, 6, 3],
    ),
    (
        &["sorrow", "grief", "lonely", "tears", "loss", "funeral", "mournful"],
        [8, 0, 1],
    ),
    (&["soon", "launch", "await", "upcoming", "grand", "opening"], [2, 5, 3]),
    (
        &["secure", "official", "professional", "reliable", "certified", "bank"],
        [0, 2, 8],
    ),
];

pub const FILLER: &[&str] = &[
    "sale", "store", "today", "night", "the", "new", "our", "event", "club", "menu", "week",
];

/// Baseline appeal of each font regardless of text.
pub const POPULARITY: [f64; 10] = [0.9, 1.1, 1.3, 1.5, 0.3, 0.8, 0.7, 0.6, 0.2, 0.2];

pub struct SyntheticConfig {
    pub instances: usize,
    pub annotators_per_instance: usize,
    pub annotator_pool: usize,
    /// Weight of the text-driven preference relative to popularity.
    pub signal: f64,
    pub noise: f64,
    /// Annotator `spam` always ranks 0, 1, 2 on this fraction of instances.
    pub spam_rate: f64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            instances: 400,
            annotators_per_instance: 7,
            annotator_pool: 40,
            signal: 0.8,
            noise: 1.5,
            spam_rate: 0.3,
        }
    }
}

fn gumbel(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.random_range(1e-12..1.0);
    -(-u.ln()).ln()
}

pub fn synthetic_corpus(config: &SyntheticConfig, seed: u64) -> Vec<RawInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<String> = (0..config.annotator_pool).map(|i| format!("a{i}")).collect();
    (0..config.instances)
        .map(|idx| {
            let (words, prefs) = GROUPS.choose(&mut rng).unwrap();
            let mut tokens: Vec<&str> = (0..rng.random_range(1..=2))
                .map(|_| *words.choose(&mut rng).unwrap())
                .collect();
            for _ in 0..rng.random_range(1..=3) {
                tokens.push(FILLER.choose(&mut rng).unwrap());
            }
            tokens.shuffle(&mut rng);

            let mut pref = [0.0; 10];
            for (rank, &f) in prefs.iter().enumerate() {
                pref[f] = config.signal * [1.0, 0.6, 0.3][rank];
            }
            let mut annotators: Vec<&String> = pool.choose_multiple(&mut rng, config.annotators_per_instance).collect();
            annotators.sort();
            let mut annotations: Vec<AnnotatorRanking> = annotators
                .into_iter()
                .map(|a| {
                    let mut scored: Vec<(f64, usize)> = (0..10)
                        .map(|f| (POPULARITY[f] + pref[f] + config.noise * gumbel(&mut rng), f))
                        .collect();
                    scored.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
                    AnnotatorRanking::new(a.clone(), scored[0].1, scored[1].1, scored[2].1)
                })
                .collect();
            if rng.random_bool(config.spam_rate) {
                annotations.push(AnnotatorRanking::new("spam", 0, 1, 2));
            }
            RawInstance {
                instance_id: format!("s{idx:04}"),
                text: tokens.join(" "),
                annotations,
            }
        })
        .collect()
}

pub fn write_jsonl<T: serde::Serialize>(path: &Path, rows: &[T]) {
    let text: String = rows.iter().map(|r| serde_json::to_string(r).unwrap() + "\n").collect();
    std::fs::write(path, text).unwrap();
}
