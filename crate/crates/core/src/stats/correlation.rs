use serde::Serialize;

use super::model::{ModelMatrix, INTERCEPT};
use crate::error::{Error, Result};

/// Pearson correlations between model columns, row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationMatrix {
    pub labels: Vec<String>,
    pub values: Vec<f64>,
}

impl CorrelationMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.labels.iter().position(|l| l == a)?;
        let j = self.labels.iter().position(|l| l == b)?;
        Some(self.values[i * self.labels.len() + j])
    }

    pub fn to_csv(&self) -> String {
        let p = self.labels.len();
        let mut out = format!(",{}\n", self.labels.join(","));
        for i in 0..p {
            out.push_str(&self.labels[i]);
            for j in 0..p {
                out.push_str(&format!(",{}", self.values[i * p + j]));
            }
            out.push('\n');
        }
        out
    }
}

/// Correlations of every column except the intercept.
pub fn correlation_matrix(x: &ModelMatrix) -> Result<CorrelationMatrix> {
    let mut labels = Vec::new();
    let mut centred: Vec<Vec<f64>> = Vec::new();
    for (label, col) in x.labels().iter().zip(x.columns()) {
        if label == INTERCEPT {
            continue;
        }
        let mean = col.iter().sum::<f64>() / col.len() as f64;
        let c: Vec<f64> = col.iter().map(|v| v - mean).collect();
        let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= 1e-12 * (col.len() as f64).sqrt() {
            return Err(Error::ZeroVariance(label.clone()));
        }
        labels.push(label.clone());
        centred.push(c.into_iter().map(|v| v / norm).collect());
    }
    let p = labels.len();
    let mut values = vec![0.0; p * p];
    for i in 0..p {
        values[i * p + i] = 1.0;
        for j in i + 1..p {
            let r: f64 = centred[i].iter().zip(&centred[j]).map(|(a, b)| a * b).sum();
            let r = r.clamp(-1.0, 1.0);
            values[i * p + j] = r;
            values[j * p + i] = r;
        }
    }
    Ok(CorrelationMatrix { labels, values })
}
