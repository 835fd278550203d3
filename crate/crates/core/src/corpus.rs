//! Loading, cleaning, aggregating and splitting the crowd-annotated corpus.
//!
//! Each raw instance carries a short text and a list of annotator rankings
//! (first, second and third font choice). Rankings are filtered for
//! annotators who ignore the text, weighted by rank, and normalized into a
//! [`LabelDistribution`] per instance.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::FontId;
use crate::distribution::LabelDistribution;
use crate::error::{Error, Result};

/// One annotator's top three fonts for one text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatorRanking {
    #[serde(rename = "annotator")]
    pub annotator_id: String,
    /// `[first, second, third]`.
    pub ranks: [FontId; 3],
}

impl AnnotatorRanking {
    pub fn new(annotator_id: impl Into<String>, first: FontId, second: FontId, third: FontId) -> Self {
        Self {
            annotator_id: annotator_id.into(),
            ranks: [first, second, third],
        }
    }

    pub fn first(&self) -> FontId {
        self.ranks[0]
    }

    fn validate(&self, font_count: usize) -> std::result::Result<(), String> {
        let [a, b, c] = self.ranks;
        if a == b || a == c || b == c {
            return Err(format!(
                "annotator `{}` ranks the same font twice: {:?}",
                self.annotator_id, self.ranks
            ));
        }
        if let Some(f) = self.ranks.iter().find(|&&f| f >= font_count) {
            return Err(format!(
                "annotator `{}` uses font id {f}, outside 0..{font_count}",
                self.annotator_id
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawInstance {
    #[serde(rename = "id")]
    pub instance_id: String,
    pub text: String,
    pub annotations: Vec<AnnotatorRanking>,
}

impl RawInstance {
    fn validate(&self, font_count: usize) -> std::result::Result<(), String> {
        if self.text.trim().is_empty() {
            return Err("text is empty".into());
        }
        let mut seen = HashSet::new();
        for ranking in &self.annotations {
            ranking.validate(font_count)?;
            if !seen.insert(ranking.annotator_id.as_str()) {
                return Err(format!("annotator `{}` appears twice", ranking.annotator_id));
            }
        }
        Ok(())
    }
}

/// A text paired with its aggregated target distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledInstance {
    #[serde(rename = "id")]
    pub instance_id: String,
    pub text: String,
    #[serde(rename = "dist")]
    pub target: LabelDistribution,
}

/// A rejected line from a corpus file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoadIssue {
    pub line: usize,
    pub instance_id: Option<String>,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct LoadedCorpus {
    pub instances: Vec<RawInstance>,
    pub issues: Vec<LoadIssue>,
}

/// Reads a JSON-lines corpus. Invalid lines are skipped and reported with
/// their 1-based line number; only an unreadable file is fatal.
pub fn load_corpus(path: impl AsRef<Path>, font_count: usize) -> Result<LoadedCorpus> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = LoadedCorpus::default();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let instance: RawInstance = match serde_json::from_str(&line) {
            Ok(instance) => instance,
            Err(e) => {
                // Salvage the id for the report when the rest is malformed.
                let instance_id = serde_json::from_str::<serde_json::Value>(&line)
                    .ok()
                    .and_then(|v| v.get("id").and_then(|id| id.as_str()).map(String::from));
                out.issues.push(LoadIssue {
                    line: line_no,
                    instance_id,
                    message: e.to_string(),
                });
                continue;
            }
        };
        match instance.validate(font_count) {
            Ok(()) => out.instances.push(instance),
            Err(message) => out.issues.push(LoadIssue {
                line: line_no,
                instance_id: Some(instance.instance_id),
                message,
            }),
        }
    }
    Ok(out)
}

/// Which rank slots count towards an annotator's "same font" fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotPolicy {
    /// Only first choices.
    #[default]
    First,
    /// All three choices pooled.
    Any,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterConfig {
    /// Annotators whose modal-font fraction is strictly above this are dropped.
    pub same_choice_threshold: f64,
    /// Instances with fewer surviving rankings are dropped.
    pub min_annotations: usize,
    pub slot_policy: SlotPolicy,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            same_choice_threshold: 0.9,
            min_annotations: 6,
            slot_policy: SlotPolicy::First,
        }
    }
}

/// Removes annotators who pick the same font regardless of the text, then
/// drops instances left with too few rankings.
pub fn filter_annotators(instances: &[RawInstance], config: &FilterConfig) -> Result<Vec<RawInstance>> {
    if !(config.same_choice_threshold > 0.0 && config.same_choice_threshold <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "same_choice_threshold must be in (0, 1], got {}",
            config.same_choice_threshold
        )));
    }
    if config.min_annotations == 0 {
        return Err(Error::InvalidArgument("min_annotations must be at least 1".into()));
    }

    let mut choices: HashMap<&str, HashMap<FontId, usize>> = HashMap::new();
    for ranking in instances.iter().flat_map(|i| &i.annotations) {
        let counts = choices.entry(ranking.annotator_id.as_str()).or_default();
        match config.slot_policy {
            SlotPolicy::First => *counts.entry(ranking.first()).or_default() += 1,
            SlotPolicy::Any => {
                for &f in &ranking.ranks {
                    *counts.entry(f).or_default() += 1;
                }
            }
        }
    }
    let dropped: HashSet<&str> = choices
        .iter()
        .filter(|(_, counts)| {
            let total: usize = counts.values().sum();
            let modal = counts.values().copied().max().unwrap_or(0);
            modal as f64 / total as f64 > config.same_choice_threshold
        })
        .map(|(id, _)| *id)
        .collect();

    Ok(instances
        .iter()
        .map(|instance| RawInstance {
            instance_id: instance.instance_id.clone(),
            text: instance.text.clone(),
            annotations: instance
                .annotations
                .iter()
                .filter(|r| !dropped.contains(r.annotator_id.as_str()))
                .cloned()
                .collect(),
        })
        .filter(|instance| instance.annotations.len() >= config.min_annotations)
        .collect())
}

/// Per-slot weights for first, second and third choices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankWeights(pub [f64; 3]);

impl Default for RankWeights {
    fn default() -> Self {
        Self([1.0, 0.6, 0.3])
    }
}

/// Weighted vote over rankings, normalized to sum to one.
pub fn aggregate_distribution(
    annotations: &[AnnotatorRanking],
    weights: RankWeights,
    font_count: usize,
) -> Result<LabelDistribution> {
    if annotations.is_empty() {
        return Err(Error::NoAnnotations);
    }
    let mut scores = vec![0.0; font_count];
    for ranking in annotations {
        for (slot, &font) in ranking.ranks.iter().enumerate() {
            let score = scores
                .get_mut(font)
                .ok_or_else(|| Error::InvalidArgument(format!("font id {font} outside 0..{font_count}")))?;
            *score += weights.0[slot];
        }
    }
    LabelDistribution::from_scores(scores)
}

/// Aggregates every instance. Instances without rankings are an error.
pub fn label_instances(
    instances: &[RawInstance],
    weights: RankWeights,
    font_count: usize,
) -> Result<Vec<LabeledInstance>> {
    instances
        .iter()
        .map(|raw| {
            Ok(LabeledInstance {
                instance_id: raw.instance_id.clone(),
                text: raw.text.clone(),
                target: aggregate_distribution(&raw.annotations, weights, font_count)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitRatios {
    pub train: f64,
    pub dev: f64,
    pub test: f64,
}

impl Default for SplitRatios {
    fn default() -> Self {
        Self {
            train: 0.7,
            dev: 0.1,
            test: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitCorpus {
    pub train: Vec<LabeledInstance>,
    pub dev: Vec<LabeledInstance>,
    pub test: Vec<LabeledInstance>,
    pub split_seed: u64,
}

/// Seeded shuffle, then `floor(train·N)` / `floor(dev·N)` / remainder.
pub fn split_corpus(instances: &[LabeledInstance], ratios: SplitRatios, seed: u64) -> Result<SplitCorpus> {
    let SplitRatios { train, dev, test } = ratios;
    if [train, dev, test].iter().any(|r| r.is_nan() || *r <= 0.0) || ((train + dev + test) - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "split ratios must be positive and sum to 1, got ({train}, {dev}, {test})"
        )));
    }
    let n = instances.len();
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 instances to split, got {n}"
        )));
    }
    let mut shuffled = instances.to_vec();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    // The epsilon keeps products like 0.7 * 10 from flooring to 6.
    let n_train = (train * n as f64 + 1e-9).floor() as usize;
    let n_dev = (dev * n as f64 + 1e-9).floor() as usize;
    let test_part = shuffled.split_off(n_train + n_dev);
    let dev_part = shuffled.split_off(n_train);
    Ok(SplitCorpus {
        train: shuffled,
        dev: dev_part,
        test: test_part,
        split_seed: seed,
    })
}

/// Fleiss' kappa over all three choices.
///
/// Every (instance, rank slot) pair is one rated item and each annotator
/// assigns one font to it. Instances are truncated to the corpus-wide
/// minimum number of rankings, keeping rankings in stored order.
pub fn fleiss_kappa(instances: &[RawInstance], font_count: usize) -> Result<f64> {
    if instances.len() < 2 {
        return Err(Error::InvalidArgument("fleiss_kappa needs at least 2 instances".into()));
    }
    let raters = instances.iter().map(|i| i.annotations.len()).min().unwrap_or(0);
    if raters < 2 {
        return Err(Error::InvalidArgument(
            "fleiss_kappa needs at least 2 raters per instance".into(),
        ));
    }

    let mut category_totals = vec![0usize; font_count];
    let mut agreement_sum = 0.0;
    let mut items = 0usize;
    for instance in instances {
        for slot in 0..3 {
            let mut counts = vec![0usize; font_count];
            for ranking in &instance.annotations[..raters] {
                let font = ranking.ranks[slot];
                if font >= font_count {
                    return Err(Error::InvalidArgument(format!(
                        "font id {font} outside 0..{font_count}"
                    )));
                }
                counts[font] += 1;
            }
            let pairs: usize = counts.iter().map(|c| c * c).sum::<usize>() - raters;
            agreement_sum += pairs as f64 / (raters * (raters - 1)) as f64;
            for (total, c) in category_totals.iter_mut().zip(&counts) {
                *total += c;
            }
            items += 1;
        }
    }
    let observed = agreement_sum / items as f64;
    let assignments = (items * raters) as f64;
    let chance: f64 = category_totals.iter().map(|&c| (c as f64 / assignments).powi(2)).sum();
    if (1.0 - chance).abs() < f64::EPSILON {
        return Ok(1.0);
    }
    Ok((observed - chance) / (1.0 - chance))
}

/// Arithmetic mean of the targets.
pub fn average_distribution(instances: &[LabeledInstance]) -> Result<LabelDistribution> {
    let first = instances.first().ok_or(Error::Empty("average_distribution"))?;
    let mut sums = vec![0.0; first.target.len()];
    for instance in instances {
        if instance.target.len() != sums.len() {
            return Err(Error::DimensionMismatch {
                expected: sums.len(),
                actual: instance.target.len(),
            });
        }
        for (s, p) in sums.iter_mut().zip(instance.target.probs()) {
            *s += p;
        }
    }
    let n = instances.len() as f64;
    LabelDistribution::new(sums.into_iter().map(|s| s / n).collect())
}

/// Writes `{"id", "text", "dist"}` JSON lines.
pub fn write_labeled(path: impl AsRef<Path>, instances: &[LabeledInstance]) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for instance in instances {
        serde_json::to_writer(&mut w, instance)?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads a labeled corpus; any invalid line is fatal.
pub fn read_labeled(path: impl AsRef<Path>) -> Result<Vec<LabeledInstance>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let instance = serde_json::from_str(&line).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            message: e.to_string(),
        })?;
        out.push(instance);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-5;

    fn ranking(id: &str, ranks: [FontId; 3]) -> AnnotatorRanking {
        AnnotatorRanking::new(id, ranks[0], ranks[1], ranks[2])
    }

    fn raw(id: &str, rankings: Vec<AnnotatorRanking>) -> RawInstance {
        RawInstance {
            instance_id: id.into(),
            text: format!("text {id}"),
            annotations: rankings,
        }
    }

    fn labeled(id: &str, probs: Vec<f64>) -> LabeledInstance {
        LabeledInstance {
            instance_id: id.into(),
            text: id.into(),
            target: LabelDistribution::new(probs).unwrap(),
        }
    }

    fn write_tmp(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn loads_valid_lines() {
        let f = write_tmp(concat!(
            r#"{"id": "s1", "text": "Grand Opening Sale", "annotations": [{"annotator": "a1", "ranks": [3, 1, 8]}]}"#,
            "\n",
            r#"{"id": "s2", "text": "Happy birthday", "annotations": [{"annotator": "a1", "ranks": [4, 9, 7]}]}"#,
            "\n",
            r#"{"id": "s3", "text": "Quarterly report", "annotations": []}"#,
            "\n",
        ));
        let loaded = load_corpus(f.path(), 10).unwrap();
        assert_eq!(loaded.instances.len(), 3);
        assert!(loaded.issues.is_empty());
        assert_eq!(loaded.instances[0].annotations[0].ranks, [3, 1, 8]);
    }

    #[test]
    fn rejects_duplicate_fonts_and_bad_json() {
        let f = write_tmp(concat!(
            r#"{"id": "dup", "text": "x", "annotations": [{"annotator": "a1", "ranks": [3, 3, 8]}]}"#,
            "\n",
            "not json\n",
            r#"{"id": "range", "text": "x", "annotations": [{"annotator": "a1", "ranks": [3, 2, 10]}]}"#,
            "\n",
            r#"{"id": "blank", "text": "   ", "annotations": []}"#,
            "\n",
            r#"{"id": "twice", "text": "x", "annotations": [{"annotator": "a1", "ranks": [0, 1, 2]}, {"annotator": "a1", "ranks": [0, 1, 2]}]}"#,
            "\n",
        ));
        let loaded = load_corpus(f.path(), 10).unwrap();
        assert!(loaded.instances.is_empty());
        let ids: Vec<_> = loaded.issues.iter().map(|i| (i.line, i.instance_id.clone())).collect();
        assert_eq!(
            ids,
            vec![
                (1, Some("dup".into())),
                (2, None),
                (3, Some("range".into())),
                (4, Some("blank".into())),
                (5, Some("twice".into())),
            ]
        );
    }

    #[test]
    fn empty_file_is_empty_corpus() {
        let f = write_tmp("");
        let loaded = load_corpus(f.path(), 10).unwrap();
        assert!(loaded.instances.is_empty() && loaded.issues.is_empty());
    }

    #[test]
    fn missing_file_is_an_error() {
        assert!(matches!(load_corpus("/no/such/file.jsonl", 10), Err(Error::Io { .. })));
    }

    #[test]
    fn unanimous_aggregation() {
        let rankings: Vec<_> = (0..6).map(|i| ranking(&format!("a{i}"), [1, 2, 3])).collect();
        let d = aggregate_distribution(&rankings, RankWeights::default(), 10).unwrap();
        assert!((d.get(1) - 0.52632).abs() < EPS);
        assert!((d.get(2) - 0.31579).abs() < EPS);
        assert!((d.get(3) - 0.15789).abs() < EPS);
        assert_eq!(d.probs().iter().filter(|p| **p == 0.0).count(), 7);
    }

    #[test]
    fn single_annotator_aggregation() {
        let d = aggregate_distribution(&[ranking("a", [0, 1, 2])], RankWeights::default(), 10).unwrap();
        assert!((d.get(0) - 0.52632).abs() < EPS);
        assert!((d.get(1) - 0.31579).abs() < EPS);
        assert!((d.get(2) - 0.15789).abs() < EPS);
    }

    #[test]
    fn empty_aggregation_fails() {
        assert!(matches!(
            aggregate_distribution(&[], RankWeights::default(), 10),
            Err(Error::NoAnnotations)
        ));
    }

    #[test]
    fn filter_drops_single_minded_annotator() {
        // "lazy" picks F3 first in 19 of 20 instances.
        let instances: Vec<_> = (0..20)
            .map(|i| {
                let mut rankings: Vec<_> = (0..6)
                    .map(|a| ranking(&format!("a{a}"), [(i + a) % 10, (i + a + 1) % 10, (i + a + 2) % 10]))
                    .collect();
                let first = if i == 0 { 5 } else { 3 };
                rankings.push(ranking("lazy", [first, 0, 1]));
                raw(&format!("s{i}"), rankings)
            })
            .collect();
        let out = filter_annotators(&instances, &FilterConfig::default()).unwrap();
        assert_eq!(out.len(), 20);
        assert!(out
            .iter()
            .all(|i| i.annotations.len() == 6 && i.annotations.iter().all(|r| r.annotator_id != "lazy")));
    }

    #[test]
    fn filter_drops_thin_instances() {
        let diverse = |n: usize, id: &str| {
            raw(
                id,
                (0..n)
                    .map(|a| ranking(&format!("{id}-a{a}"), [a % 10, (a + 1) % 10, (a + 2) % 10]))
                    .collect(),
            )
        };
        // single-item annotators have a modal fraction of 1.0; keep them with threshold 1.0
        let config = FilterConfig {
            same_choice_threshold: 1.0,
            ..Default::default()
        };
        let out = filter_annotators(&[diverse(5, "thin"), diverse(6, "ok")], &config).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].instance_id, "ok");
    }

    #[test]
    fn filter_is_noop_for_diverse_annotators() {
        let instances: Vec<_> = (0..10)
            .map(|i| {
                raw(
                    &format!("s{i}"),
                    (0..6)
                        .map(|a| ranking(&format!("a{a}"), [(i + a) % 10, (i + a + 1) % 10, (i + a + 2) % 10]))
                        .collect(),
                )
            })
            .collect();
        let out = filter_annotators(&instances, &FilterConfig::default()).unwrap();
        assert_eq!(out, instances);
    }

    #[test]
    fn filter_any_slot_policy_counts_all_choices() {
        // First choice always F0 but other slots vary: 10/30 selections are F0.
        let instances: Vec<_> = (0..10)
            .map(|i| raw(&format!("s{i}"), vec![ranking("a", [0, 1 + i % 9, 1 + (i + 1) % 9])]))
            .collect();
        let first = FilterConfig {
            min_annotations: 1,
            ..Default::default()
        };
        assert!(filter_annotators(&instances, &first).unwrap().is_empty());
        let any = FilterConfig {
            slot_policy: SlotPolicy::Any,
            ..first
        };
        assert_eq!(filter_annotators(&instances, &any).unwrap().len(), 10);
    }

    #[test]
    fn filter_rejects_bad_config() {
        let bad = FilterConfig {
            same_choice_threshold: 0.0,
            ..Default::default()
        };
        assert!(filter_annotators(&[], &bad).is_err());
    }

    #[test]
    fn split_sizes_on_full_corpus_size() {
        let instances: Vec<_> = (0..1309).map(|i| labeled(&format!("s{i}"), vec![1.0])).collect();
        let split = split_corpus(&instances, SplitRatios::default(), 7).unwrap();
        assert_eq!((split.train.len(), split.dev.len(), split.test.len()), (916, 130, 263));
    }

    #[test]
    fn split_is_deterministic() {
        let instances: Vec<_> = (0..10).map(|i| labeled(&format!("s{i}"), vec![1.0])).collect();
        let a = split_corpus(&instances, SplitRatios::default(), 42).unwrap();
        let b = split_corpus(&instances, SplitRatios::default(), 42).unwrap();
        assert_eq!(a, b);
        assert_eq!((a.train.len(), a.dev.len(), a.test.len()), (7, 1, 2));
    }

    #[test]
    fn split_rejects_bad_input() {
        let instances: Vec<_> = (0..10).map(|i| labeled(&format!("s{i}"), vec![1.0])).collect();
        let bad = SplitRatios {
            train: 0.5,
            dev: 0.5,
            test: 0.1,
        };
        assert!(split_corpus(&instances, bad, 0).is_err());
        assert!(split_corpus(&instances[..2], SplitRatios::default(), 0).is_err());
    }

    #[test]
    fn kappa_perfect_agreement() {
        let instances: Vec<_> = (0..5)
            .map(|i| {
                raw(
                    &format!("s{i}"),
                    (0..6).map(|a| ranking(&format!("a{a}"), [1, 4, 7])).collect(),
                )
            })
            .collect();
        assert!((fleiss_kappa(&instances, 10).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kappa_uniform_counts_is_not_positive() {
        // Ten raters cycle through all fonts in every slot.
        let instances: Vec<_> = (0..4)
            .map(|i| {
                raw(
                    &format!("s{i}"),
                    (0..10)
                        .map(|a| ranking(&format!("a{a}"), [a, (a + 1) % 10, (a + 2) % 10]))
                        .collect(),
                )
            })
            .collect();
        let kappa = fleiss_kappa(&instances, 10).unwrap();
        // Hand evaluation: every item has P_i = 0 and P_e = 0.1, so kappa = -1/9.
        assert!((kappa - (-1.0 / 9.0)).abs() < 1e-12, "{kappa}");
    }

    #[test]
    fn kappa_truncates_to_min_raters() {
        let mut instances: Vec<_> = (0..3)
            .map(|i| {
                raw(
                    &format!("s{i}"),
                    (0..6).map(|a| ranking(&format!("a{a}"), [2, 3, 4])).collect(),
                )
            })
            .collect();
        // extra dissenting raters beyond the minimum are ignored
        instances[0].annotations.push(ranking("x", [9, 8, 7]));
        assert!((fleiss_kappa(&instances, 10).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kappa_rejects_degenerate_input() {
        let one = raw("s", vec![ranking("a", [0, 1, 2]), ranking("b", [0, 1, 2])]);
        assert!(fleiss_kappa(std::slice::from_ref(&one), 10).is_err());
        let single_rater = raw("t", vec![ranking("a", [0, 1, 2])]);
        assert!(fleiss_kappa(&[one, single_rater], 10).is_err());
    }

    #[test]
    fn average_of_point_masses() {
        let a = labeled("a", vec![1.0, 0.0, 0.0]);
        let b = labeled("b", vec![0.0, 1.0, 0.0]);
        let avg = average_distribution(&[a.clone(), b]).unwrap();
        assert_eq!(avg.probs(), &[0.5, 0.5, 0.0]);
        assert_eq!(average_distribution(std::slice::from_ref(&a)).unwrap(), a.target);
        assert!(average_distribution(&[]).is_err());
    }

    #[test]
    fn labeled_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("labeled.jsonl");
        let instances = vec![labeled("a", vec![0.25, 0.75]), labeled("b", vec![1.0, 0.0])];
        write_labeled(&path, &instances).unwrap();
        let line = std::fs::read_to_string(&path).unwrap();
        assert!(line.starts_with(r#"{"id":"a","text":"a","dist":[0.25,0.75]}"#));
        assert_eq!(read_labeled(&path).unwrap(), instances);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_ranking() -> impl Strategy<Value = AnnotatorRanking> {
            Just((0..10usize).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(|fonts| AnnotatorRanking::new("a", fonts[0], fonts[1], fonts[2]))
        }

        proptest! {
            #[test]
            fn aggregation_is_a_distribution(rankings in prop::collection::vec(arb_ranking(), 1..12)) {
                let d = aggregate_distribution(&rankings, RankWeights::default(), 10).unwrap();
                prop_assert!((d.probs().iter().sum::<f64>() - 1.0).abs() < 1e-9);
                prop_assert!(d.probs().iter().all(|p| *p >= 0.0));
            }

            #[test]
            fn aggregation_ignores_order(rankings in prop::collection::vec(arb_ranking(), 1..12), seed in any::<u64>()) {
                let mut shuffled = rankings.clone();
                shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
                let a = aggregate_distribution(&rankings, RankWeights::default(), 10).unwrap();
                let b = aggregate_distribution(&shuffled, RankWeights::default(), 10).unwrap();
                for (x, y) in a.probs().iter().zip(b.probs()) {
                    prop_assert!((x - y).abs() < 1e-12);
                }
            }

            #[test]
            fn unanimity_scaling(r in arb_ranking(), k in 1usize..20) {
                let one = aggregate_distribution(std::slice::from_ref(&r), RankWeights::default(), 10).unwrap();
                let many = aggregate_distribution(&vec![r; k], RankWeights::default(), 10).unwrap();
                for (x, y) in one.probs().iter().zip(many.probs()) {
                    prop_assert!((x - y).abs() < 1e-12);
                }
            }

            #[test]
            fn split_partitions(n in 3usize..200, seed in any::<u64>()) {
                let instances: Vec<_> = (0..n).map(|i| labeled(&format!("s{i}"), vec![1.0])).collect();
                let split = split_corpus(&instances, SplitRatios::default(), seed).unwrap();
                let mut ids: Vec<_> = split.train.iter().chain(&split.dev).chain(&split.test)
                    .map(|i| i.instance_id.clone()).collect();
                prop_assert_eq!(ids.len(), n);
                ids.sort();
                ids.dedup();
                prop_assert_eq!(ids.len(), n);
            }

            #[test]
            fn kappa_at_most_one(rankings in prop::collection::vec(prop::collection::vec(arb_ranking(), 3), 2..8)) {
                let instances: Vec<_> = rankings.into_iter().enumerate().map(|(i, rs)| {
                    let rs = rs.into_iter().enumerate()
                        .map(|(a, r)| AnnotatorRanking { annotator_id: format!("a{a}"), ..r })
                        .collect();
                    raw(&format!("s{i}"), rs)
                }).collect();
                let kappa = fleiss_kappa(&instances, 10).unwrap();
                prop_assert!(kappa <= 1.0 + 1e-12);
            }
        }
    }
}
