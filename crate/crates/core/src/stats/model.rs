use serde::Serialize;

use crate::contrasts::{block_contrast_table, contrast_table};
use crate::design::BlockOofaDesign;
use crate::error::{Error, Result};

pub const INTERCEPT: &str = "(Intercept)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModelOrder {
    /// Intercept, blocks and linear position terms.
    First,
    /// `First` plus quadratic position terms.
    Quadratic,
    /// `Quadratic` plus all linear-by-linear interactions.
    SecondOrder,
}

/// Labeled columns, stored column-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelMatrix {
    n: usize,
    labels: Vec<String>,
    columns: Vec<Vec<f64>>,
}

/// `B^l`, `B^q`, `B^c`, then `B^4`, `B^5`, ...
pub fn block_label(s: usize) -> String {
    match s {
        1 => "B^l".into(),
        2 => "B^q".into(),
        3 => "B^c".into(),
        _ => format!("B^{s}"),
    }
}

/// Columns in order: intercept, block contrasts `c_1..c_{k-1}` (only when
/// `k > 1`), `Zj^l`, then `Zj^q`, then `Zi^lZj^l` for `i < j`.
pub fn model_matrix(design: &BlockOofaDesign, order: ModelOrder) -> Result<ModelMatrix> {
    let (m, k, n) = (design.m(), design.k(), design.n_runs());
    let pos = contrast_table(m)?;
    let mut mm = ModelMatrix { n, labels: Vec::new(), columns: Vec::new() };
    mm.push(INTERCEPT.into(), vec![1.0; n]);
    if k > 1 {
        let blk = block_contrast_table(k)?;
        for s in 1..k {
            mm.push(block_label(s), design.blocks().iter().map(|&b| blk.value(s, b)).collect());
        }
    }
    let linear: Vec<Vec<f64>> =
        (0..m).map(|j| design.runs().map(|(z, _)| pos.value(1, z[j] as usize)).collect()).collect();
    for (j, col) in linear.iter().enumerate() {
        mm.push(format!("Z{}^l", j + 1), col.clone());
    }
    if order == ModelOrder::First {
        return Ok(mm);
    }
    if m >= 3 {
        for j in 0..m {
            let col = design.runs().map(|(z, _)| pos.value(2, z[j] as usize)).collect();
            mm.push(format!("Z{}^q", j + 1), col);
        }
    }
    if order == ModelOrder::SecondOrder {
        for i in 0..m {
            for j in i + 1..m {
                let col = linear[i].iter().zip(&linear[j]).map(|(a, b)| a * b).collect();
                mm.push(format!("Z{}^lZ{}^l", i + 1, j + 1), col);
            }
        }
    }
    Ok(mm)
}

impl ModelMatrix {
    pub fn new(labels: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        let n = columns.first().map_or(0, Vec::len);
        if labels.len() != columns.len() || columns.iter().any(|c| c.len() != n) {
            return Err(Error::ShapeMismatch);
        }
        Ok(Self { n, labels, columns })
    }

    fn push(&mut self, label: String, column: Vec<f64>) {
        self.labels.push(label);
        self.columns.push(column);
    }

    pub fn n_rows(&self) -> usize {
        self.n
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn column(&self, label: &str) -> Option<&[f64]> {
        self.index_of(label).map(|i| self.columns[i].as_slice())
    }

    /// The named columns, in the order given.
    pub fn select(&self, labels: &[&str]) -> Result<ModelMatrix> {
        let mut out = ModelMatrix { n: self.n, labels: Vec::new(), columns: Vec::new() };
        for &l in labels {
            let col = self.column(l).ok_or_else(|| Error::UnknownLabel(l.to_string()))?;
            out.push(l.to_string(), col.to_vec());
        }
        Ok(out)
    }

    /// Drops every block-contrast column.
    pub fn without_blocks(&self) -> ModelMatrix {
        let keep: Vec<usize> = (0..self.n_cols()).filter(|&i| !self.labels[i].starts_with("B^")).collect();
        ModelMatrix {
            n: self.n,
            labels: keep.iter().map(|&i| self.labels[i].clone()).collect(),
            columns: keep.iter().map(|&i| self.columns[i].clone()).collect(),
        }
    }

    /// `X·β`.
    pub fn predict(&self, beta: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for (col, b) in self.columns.iter().zip(beta) {
            for (yi, x) in y.iter_mut().zip(col) {
                *yi += b * x;
            }
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn column_counts() {
        let d = fixtures::load("tb12").unwrap().design.to_blocked();
        let x = model_matrix(&d, ModelOrder::SecondOrder).unwrap();
        assert_eq!(x.n_cols(), 23);
        assert_eq!(x.labels()[..4], ["(Intercept)", "B^l", "B^q", "Z1^l"]);
        assert_eq!(x.labels()[22], "Z4^lZ5^l");
        let d2 = fixtures::load("tb40").unwrap().design.to_blocked();
        assert_eq!(model_matrix(&d2, ModelOrder::First).unwrap().n_cols(), 7);
    }

    #[test]
    fn entries_come_from_contrasts() {
        let d = fixtures::load("tb20").unwrap().design.to_blocked();
        let x = model_matrix(&d, ModelOrder::SecondOrder).unwrap();
        let p = contrast_table(5).unwrap();
        // run 1 is (1,2,3,4,5) in block 1
        assert_eq!(x.column("Z1^l").unwrap()[0], p.value(1, 1));
        assert_eq!(x.column("Z2^q").unwrap()[0], p.value(2, 2));
        assert_eq!(x.column("Z1^lZ5^l").unwrap()[0], p.value(1, 1) * p.value(1, 5));
        assert!((x.column("B^l").unwrap()[0] + 1.5f64.sqrt()).abs() < 1e-12);
    }
}
