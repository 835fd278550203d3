//! Font-versus-feature correlations and corpus statistics.

use serde::Serialize;

use crate::catalog::FontCatalog;
use crate::corpus::{average_distribution, LabeledInstance};
use crate::distribution::LabelDistribution;
use crate::error::{Error, Result};
use crate::features::{tokenize, Featurizer};

/// Sample Pearson correlation. Constant inputs have no defined correlation
/// and yield an error.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::InvalidArgument("pearson needs at least 2 points".into()));
    }
    // Checked directly: the mean of equal values can round away from them.
    if x.iter().all(|v| *v == x[0]) {
        return Err(Error::ConstantVector("x"));
    }
    if y.iter().all(|v| *v == y[0]) {
        return Err(Error::ConstantVector("y"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::ConstantVector("x"));
    }
    if syy == 0.0 {
        return Err(Error::ConstantVector("y"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// `fonts × dims` Pearson matrix; `None` marks undefined (constant column)
/// cells.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationMatrix {
    pub values: Vec<Vec<Option<f64>>>,
}

impl CorrelationMatrix {
    pub fn fonts(&self) -> usize {
        self.values.len()
    }

    pub fn dims(&self) -> usize {
        self.values.first().map(Vec::len).unwrap_or(0)
    }

    pub fn get(&self, font: usize, dim: usize) -> Option<f64> {
        self.values[font][dim]
    }

    /// CSV with `dim_labels` as the header row and font names as row labels.
    /// Undefined cells are written as `null`.
    pub fn to_csv(&self, catalog: &FontCatalog, dim_labels: &[String]) -> String {
        let escape = |s: &str| {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.to_string()
            }
        };
        let mut out = String::from("font");
        for label in dim_labels {
            out.push(',');
            out.push_str(&escape(label));
        }
        out.push('\n');
        for (f, row) in self.values.iter().enumerate() {
            let name = catalog
                .get(f)
                .map(|font| font.name.clone())
                .unwrap_or_else(|| format!("F{f}"));
            out.push_str(&escape(&name));
            for cell in row {
                out.push(',');
                match cell {
                    Some(v) => out.push_str(&format!("{v:.6}")),
                    None => out.push_str("null"),
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Correlates every font's target mass with every feature dimension across
/// instances.
pub fn correlation_matrix(instances: &[LabeledInstance], featurizer: &dyn Featurizer) -> Result<CorrelationMatrix> {
    if instances.len() < 2 {
        return Err(Error::InvalidArgument("correlation needs at least 2 instances".into()));
    }
    let features = instances
        .iter()
        .map(|i| {
            featurizer
                .featurize(&i.instance_id, &i.text)
                .map(|f| f.values)
                .map_err(|e| Error::InvalidArgument(format!("featurizing `{}`: {e}", i.instance_id)))
        })
        .collect::<Result<Vec<_>>>()?;
    let targets: Vec<&LabelDistribution> = instances.iter().map(|i| &i.target).collect();
    correlate(&targets, &features)
}

/// Same as [`correlation_matrix`] on precomputed feature rows.
pub fn correlate(targets: &[&LabelDistribution], features: &[Vec<f64>]) -> Result<CorrelationMatrix> {
    if targets.len() != features.len() {
        return Err(Error::LengthMismatch {
            left: targets.len(),
            right: features.len(),
        });
    }
    let font_count = targets.first().map(|t| t.len()).unwrap_or(0);
    let dims = features.first().map(Vec::len).unwrap_or(0);
    if let Some(row) = features.iter().find(|r| r.len() != dims) {
        return Err(Error::DimensionMismatch {
            expected: dims,
            actual: row.len(),
        });
    }
    let columns: Vec<Vec<f64>> = (0..dims).map(|d| features.iter().map(|r| r[d]).collect()).collect();
    let values = (0..font_count)
        .map(|f| {
            let mass: Vec<f64> = targets.iter().map(|t| t.get(f)).collect();
            columns.iter().map(|col| pearson(&mass, col).ok()).collect()
        })
        .collect();
    Ok(CorrelationMatrix { values })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusStats {
    pub instances: usize,
    pub tokens: usize,
    pub mean_tokens: f64,
    /// Population standard deviation of tokens per instance.
    pub std_tokens: f64,
    pub min_tokens: usize,
    pub max_tokens: usize,
    pub average_distribution: Vec<f64>,
    /// Font ids ordered from most to least average mass.
    pub popularity_order: Vec<usize>,
}

pub fn corpus_stats(instances: &[LabeledInstance]) -> Result<CorpusStats> {
    let avg = average_distribution(instances)?;
    let counts: Vec<usize> = instances.iter().map(|i| tokenize(&i.text).len()).collect();
    let n = counts.len() as f64;
    let tokens: usize = counts.iter().sum();
    let mean = tokens as f64 / n;
    let var = counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>() / n;
    let mut order: Vec<usize> = (0..avg.len()).collect();
    order.sort_by(|&a, &b| avg.get(b).total_cmp(&avg.get(a)).then(a.cmp(&b)));
    Ok(CorpusStats {
        instances: instances.len(),
        tokens,
        mean_tokens: mean,
        std_tokens: var.sqrt(),
        min_tokens: counts.iter().copied().min().unwrap_or(0),
        max_tokens: counts.iter().copied().max().unwrap_or(0),
        average_distribution: avg.into_vec(),
        popularity_order: order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::ExternalFeaturizer;
    use std::collections::HashMap;

    #[test]
    fn pearson_examples() {
        assert!((pearson(&[1.0, 2.0, 5.0], &[1.0, 2.0, 5.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-12);
        // reference value from an independent calculator
        assert!((pearson(&[1.0, 2.0, 3.0], &[1.0, 2.0, 4.0]).unwrap() - 0.9820).abs() < 1e-4);
    }

    #[test]
    fn pearson_errors() {
        assert!(matches!(
            pearson(&[1.0, 1.0], &[1.0, 2.0]),
            Err(Error::ConstantVector("x"))
        ));
        assert!(matches!(
            pearson(&[1.0, 2.0], &[3.0, 3.0]),
            Err(Error::ConstantVector("y"))
        ));
        assert!(pearson(&[1.0], &[1.0]).is_err());
        assert!(pearson(&[1.0, 2.0], &[1.0]).is_err());
    }

    fn instances(targets: &[[f64; 3]]) -> Vec<LabeledInstance> {
        targets
            .iter()
            .enumerate()
            .map(|(i, t)| LabeledInstance {
                instance_id: format!("s{i}"),
                text: format!("text {i}"),
                target: LabelDistribution::new(t.to_vec()).unwrap(),
            })
            .collect()
    }

    fn external(rows: &[(&str, Vec<f64>)]) -> ExternalFeaturizer {
        let map: HashMap<String, Vec<f64>> = rows.iter().map(|(id, v)| (id.to_string(), v.clone())).collect();
        ExternalFeaturizer::from_vectors(map).unwrap()
    }

    #[test]
    fn self_correlation_and_undefined_cells() {
        let data = instances(&[[0.5, 0.5, 0.0], [0.2, 0.8, 0.0], [0.9, 0.1, 0.0]]);
        // dim 0 copies font 0's mass; dim 1 is constant
        let f = external(&[("s0", vec![0.5, 7.0]), ("s1", vec![0.2, 7.0]), ("s2", vec![0.9, 7.0])]);
        let m = correlation_matrix(&data, &f).unwrap();
        assert_eq!((m.fonts(), m.dims()), (3, 2));
        assert!((m.get(0, 0).unwrap() - 1.0).abs() < 1e-12);
        assert!((m.get(1, 0).unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(m.get(0, 1), None);
        assert_eq!(m.get(2, 0), None);
    }

    #[test]
    fn two_points_are_plus_or_minus_one() {
        let data = instances(&[[0.6, 0.3, 0.1], [0.2, 0.3, 0.5]]);
        let f = external(&[("s0", vec![1.0, -2.0, 0.3]), ("s1", vec![4.0, 5.0, 0.1])]);
        let m = correlation_matrix(&data, &f).unwrap();
        for cell in m.values.iter().flatten().flatten() {
            assert!((cell.abs() - 1.0).abs() < 1e-12, "{cell}");
        }
    }

    #[test]
    fn provider_failure_names_instance() {
        let data = instances(&[[0.6, 0.3, 0.1], [0.2, 0.3, 0.5]]);
        let f = external(&[("s0", vec![1.0])]);
        let err = correlation_matrix(&data, &f).unwrap_err().to_string();
        assert!(err.contains("s1"), "{err}");
    }

    #[test]
    fn csv_output() {
        let m = CorrelationMatrix {
            values: vec![vec![Some(0.5), None], vec![Some(-1.0), Some(0.25)]],
        };
        let csv = m.to_csv(&FontCatalog::default(), &["heart".into(), "a,b".into()]);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "font,heart,\"a,b\"");
        assert_eq!(lines[1], "Source Sans Pro,0.500000,null");
        assert_eq!(lines[2], "Blakely,-1.000000,0.250000");
    }

    #[test]
    fn stats() {
        let mut data = instances(&[[0.1, 0.6, 0.3], [0.3, 0.4, 0.3]]);
        data[1].text = "one two three".into();
        let s = corpus_stats(&data).unwrap();
        assert_eq!((s.tokens, s.min_tokens, s.max_tokens), (5, 2, 3));
        assert!((s.mean_tokens - 2.5).abs() < 1e-12);
        assert!((s.std_tokens - 0.5).abs() < 1e-12);
        assert_eq!(s.popularity_order, [1, 2, 0]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn affine_invariance(
                xs in prop::collection::vec(-100.0f64..100.0, 3..20),
                seed in prop::collection::vec(-100.0f64..100.0, 20),
                a in prop_oneof![-50.0f64..-0.1, 0.1f64..50.0],
                b in -100.0f64..100.0,
            ) {
                let ys = &seed[..xs.len()];
                if let (Ok(r), Ok(_)) = (pearson(&xs, ys), pearson(ys, &xs)) {
                    let scaled: Vec<f64> = xs.iter().map(|x| a * x + b).collect();
                    let r2 = pearson(&scaled, ys).unwrap();
                    prop_assert!((r2 - a.signum() * r).abs() < 1e-9);
                    prop_assert!((-1.0..=1.0).contains(&r));
                }
            }

            #[test]
            fn order_invariant(rows in prop::collection::vec((0.0f64..1.0, -5.0f64..5.0, -5.0f64..5.0), 3..10)) {
                let targets: Vec<LabelDistribution> = rows.iter()
                    .map(|(p, _, _)| LabelDistribution::new(vec![*p, 1.0 - *p]).unwrap())
                    .collect();
                let features: Vec<Vec<f64>> = rows.iter().map(|(_, a, b)| vec![*a, *b]).collect();
                let fwd: Vec<&LabelDistribution> = targets.iter().collect();
                let rev: Vec<&LabelDistribution> = targets.iter().rev().collect();
                let rev_features: Vec<Vec<f64>> = features.iter().rev().cloned().collect();
                let m1 = correlate(&fwd, &features).unwrap();
                let m2 = correlate(&rev, &rev_features).unwrap();
                for (r1, r2) in m1.values.iter().zip(&m2.values) {
                    for (c1, c2) in r1.iter().zip(r2) {
                        match (c1, c2) {
                            (Some(x), Some(y)) => prop_assert!((x - y).abs() < 1e-9),
                            (None, None) => {}
                            _ => prop_assert!(false, "definedness differs"),
                        }
                        if let Some(x) = c1 {
                            prop_assert!((-1.0..=1.0).contains(x));
                        }
                    }
                }
            }
        }
    }
}
