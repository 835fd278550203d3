use crate::distribution::LabelDistribution;
use crate::error::{Error, Result};

/// Floor applied to predicted probabilities inside the logarithm.
pub const PROB_FLOOR: f64 = 1e-12;

/// `KL(target || predicted)`. Zero-mass target entries contribute nothing;
/// predicted entries are floored at [`PROB_FLOOR`] so the result is finite.
pub fn kl_div(target: &LabelDistribution, predicted: &LabelDistribution) -> Result<f64> {
    if target.len() != predicted.len() {
        return Err(Error::LengthMismatch {
            left: target.len(),
            right: predicted.len(),
        });
    }
    let sum: f64 = target
        .probs()
        .iter()
        .zip(predicted.probs())
        .filter(|(t, _)| **t > 0.0)
        .map(|(t, p)| t * (t / p.max(PROB_FLOOR)).ln())
        .sum();
    // Rounding can leave tiny negatives for near-identical inputs.
    Ok(sum.max(0.0))
}
