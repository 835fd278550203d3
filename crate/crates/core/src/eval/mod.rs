//! Tie-aware top-k evaluation.
//!
//! Both the ground truth and the prediction are expanded to top-k *sets*:
//! every font whose probability reaches the k-th largest value is included,
//! so fonts tied at the boundary are interchangeable as correct answers.

mod report;
mod stats;

pub use report::{render_csv, render_table, EvalReport};
pub use stats::{paired_ttest, regularized_incomplete_beta, student_t_cdf, TTest};

use std::collections::BTreeSet;

use crate::catalog::FontId;
use crate::corpus::{average_distribution, LabeledInstance};
use crate::distribution::LabelDistribution;
use crate::error::{Error, Result};

/// Values closer than this count as tied.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// The `k` values reported for F1.
pub const F1_KS: [usize; 3] = [1, 3, 5];
/// The `k` values reported for font recall.
pub const FR_KS: [usize; 2] = [3, 5];

pub type FontSet = BTreeSet<FontId>;

/// Fonts whose probability is at least the k-th largest (within
/// [`TIE_TOLERANCE`]).
pub fn topk_with_ties(dist: &[f64], k: usize) -> Result<FontSet> {
    if k == 0 || k > dist.len() {
        return Err(Error::InvalidArgument(format!(
            "k must be in 1..={}, got {k}",
            dist.len()
        )));
    }
    let mut sorted = dist.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let kth = sorted[k - 1];
    Ok(dist
        .iter()
        .enumerate()
        .filter(|(_, &p)| p >= kth - TIE_TOLERANCE)
        .map(|(i, _)| i)
        .collect())
}

fn check_lengths<A, B>(a: &[A], b: &[B]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

/// Recall of each font: of the instances whose truth set contains the font,
/// the fraction whose predicted set also contains it. Fonts never in a
/// truth set get 0.
pub fn per_font_recall(truth_sets: &[FontSet], pred_sets: &[FontSet], font_count: usize) -> Result<Vec<f64>> {
    check_lengths(truth_sets, pred_sets)?;
    let mut support = vec![0usize; font_count];
    let mut hits = vec![0usize; font_count];
    for (truth, pred) in truth_sets.iter().zip(pred_sets) {
        for &f in truth {
            if f >= font_count {
                return Err(Error::InvalidArgument(format!("font id {f} outside 0..{font_count}")));
            }
            support[f] += 1;
            if pred.contains(&f) {
                hits[f] += 1;
            }
        }
    }
    Ok(support
        .iter()
        .zip(&hits)
        .map(|(&s, &h)| if s == 0 { 0.0 } else { h as f64 / s as f64 })
        .collect())
}

/// Font recall: mean per-font recall over all fonts, as a percentage.
pub fn font_recall(truth_sets: &[FontSet], pred_sets: &[FontSet], font_count: usize) -> Result<f64> {
    let recalls = per_font_recall(truth_sets, pred_sets, font_count)?;
    Ok(100.0 * recalls.iter().sum::<f64>() / font_count as f64)
}

/// Support-weighted F1 over fonts for already-expanded sets, as a
/// percentage. Per font, TP/FP/FN are counted across instances and
/// `F1 = 2TP / (2TP + FP + FN)`.
pub fn f1_weighted_sets(truth_sets: &[FontSet], pred_sets: &[FontSet], font_count: usize) -> Result<f64> {
    check_lengths(truth_sets, pred_sets)?;
    let mut tp = vec![0usize; font_count];
    let mut fp = vec![0usize; font_count];
    let mut fn_ = vec![0usize; font_count];
    for (truth, pred) in truth_sets.iter().zip(pred_sets) {
        for &f in truth.union(pred) {
            if f >= font_count {
                return Err(Error::InvalidArgument(format!("font id {f} outside 0..{font_count}")));
            }
            match (truth.contains(&f), pred.contains(&f)) {
                (true, true) => tp[f] += 1,
                (false, true) => fp[f] += 1,
                (true, false) => fn_[f] += 1,
                (false, false) => unreachable!(),
            }
        }
    }
    let mut weighted = 0.0;
    let mut total_support = 0usize;
    for f in 0..font_count {
        let support = tp[f] + fn_[f];
        if support == 0 {
            continue;
        }
        let f1 = (2 * tp[f]) as f64 / (2 * tp[f] + fp[f] + fn_[f]) as f64;
        weighted += support as f64 * f1;
        total_support += support;
    }
    if total_support == 0 {
        return Ok(0.0);
    }
    Ok(100.0 * weighted / total_support as f64)
}

fn expand_all(dists: &[LabelDistribution], k: usize) -> Result<Vec<FontSet>> {
    dists.iter().map(|d| topk_with_ties(d.probs(), k)).collect()
}

fn font_count_of(dists: &[LabelDistribution]) -> usize {
    dists.first().map(LabelDistribution::len).unwrap_or(0)
}

/// Weighted F1 between tie-expanded top-k sets, as a percentage.
pub fn f1_weighted_topk(truth: &[LabelDistribution], pred: &[LabelDistribution], k: usize) -> Result<f64> {
    check_lengths(truth, pred)?;
    f1_weighted_sets(&expand_all(truth, k)?, &expand_all(pred, k)?, font_count_of(truth))
}

/// Per-instance set F1 at `k`: `2|T∩P| / (|T| + |P|)`. Used as the
/// pairing unit for significance tests.
pub fn per_instance_f1(truth: &[LabelDistribution], pred: &[LabelDistribution], k: usize) -> Result<Vec<f64>> {
    check_lengths(truth, pred)?;
    truth
        .iter()
        .zip(pred)
        .map(|(t, p)| {
            let t = topk_with_ties(t.probs(), k)?;
            let p = topk_with_ties(p.probs(), k)?;
            Ok(2.0 * t.intersection(&p).count() as f64 / (t.len() + p.len()) as f64)
        })
        .collect()
}

/// Anything that maps a labeled instance to a predicted distribution.
pub trait Predictor {
    fn predict_instance(&self, instance: &LabeledInstance) -> Result<LabelDistribution>;
}

/// Constant predictor emitting the training set's mean distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct MajorityBaseline {
    dist: LabelDistribution,
}

impl MajorityBaseline {
    pub fn fit(train: &[LabeledInstance]) -> Result<Self> {
        if train.is_empty() {
            return Err(Error::Empty("majority baseline training set"));
        }
        Ok(Self {
            dist: average_distribution(train)?,
        })
    }

    pub fn distribution(&self) -> &LabelDistribution {
        &self.dist
    }
}

impl Predictor for MajorityBaseline {
    fn predict_instance(&self, _instance: &LabeledInstance) -> Result<LabelDistribution> {
        Ok(self.dist.clone())
    }
}

/// Predictions of `predictor` for every instance, in order.
pub fn predict_all(predictor: &dyn Predictor, instances: &[LabeledInstance]) -> Result<Vec<LabelDistribution>> {
    instances.iter().map(|i| predictor.predict_instance(i)).collect()
}

/// All headline metrics for the given truths and predictions.
pub fn evaluate_predictions(truth: &[LabelDistribution], pred: &[LabelDistribution]) -> Result<EvalReport> {
    check_lengths(truth, pred)?;
    if truth.is_empty() {
        return Err(Error::Empty("evaluation set"));
    }
    let font_count = font_count_of(truth);
    let mut per_font_recall_by_k = std::collections::BTreeMap::new();
    let mut fr = [0.0; 2];
    for (slot, &k) in FR_KS.iter().enumerate() {
        let truth_sets = expand_all(truth, k)?;
        let pred_sets = expand_all(pred, k)?;
        let recalls = per_font_recall(&truth_sets, &pred_sets, font_count)?;
        fr[slot] = 100.0 * recalls.iter().sum::<f64>() / font_count as f64;
        per_font_recall_by_k.insert(k, recalls.into_iter().map(|r| 100.0 * r).collect());
    }
    let mut f1 = [0.0; 3];
    for (slot, &k) in F1_KS.iter().enumerate() {
        f1[slot] = f1_weighted_topk(truth, pred, k)?;
    }
    Ok(EvalReport {
        fr_top3: fr[0],
        fr_top5: fr[1],
        f_top1: f1[0],
        f_top3: f1[1],
        f_top5: f1[2],
        per_font_recall: per_font_recall_by_k,
    })
}

/// Evaluates `predictor` on `test`.
pub fn evaluate(predictor: &dyn Predictor, test: &[LabeledInstance]) -> Result<EvalReport> {
    if test.is_empty() {
        return Err(Error::Empty("evaluation set"));
    }
    let truth: Vec<_> = test.iter().map(|i| i.target.clone()).collect();
    evaluate_predictions(&truth, &predict_all(predictor, test)?)
}
