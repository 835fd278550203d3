use super::loss::kl_div;
use super::mlp::MlpModel;
use crate::distribution::LabelDistribution;
use crate::error::Result;

/// Central-difference estimate of the loss gradient for every parameter.
pub fn numeric_gradient(model: &MlpModel, x: &[f64], target: &LabelDistribution, h: f64) -> Result<Vec<f64>> {
    let mut probe = model.clone();
    let mut out = Vec::with_capacity(model.params().len());
    for i in 0..model.params().len() {
        let orig = probe.params()[i];
        probe.params_mut()[i] = orig + h;
        let plus = kl_div(target, &probe.forward_values(x)?)?;
        probe.params_mut()[i] = orig - h;
        let minus = kl_div(target, &probe.forward_values(x)?)?;
        probe.params_mut()[i] = orig;
        out.push((plus - minus) / (2.0 * h));
    }
    Ok(out)
}

/// `|a - n| / max(|a|, |n|, floor)`; the floor keeps near-zero entries
/// from dominating.
pub fn relative_error(analytic: f64, numeric: f64, floor: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(floor)
}

/// Largest relative error between `backward` and central differences.
pub fn max_gradient_error(model: &MlpModel, x: &[f64], target: &LabelDistribution, h: f64, floor: f64) -> Result<f64> {
    let analytic = model.backward(x, target)?;
    let numeric = numeric_gradient(model, x, target, h)?;
    Ok(analytic
        .values()
        .iter()
        .zip(&numeric)
        .map(|(a, n)| relative_error(*a, *n, floor))
        .fold(0.0, f64::max))
}
