//! Orthogonal polynomial contrasts over the equally spaced levels `1..=q`.
//!
//! Row `u` of a [`ContrastTable`] holds `p_u(1), ..., p_u(q)`: a polynomial of
//! exact degree `u` with positive leading coefficient, orthogonal to every
//! other row and scaled so its squared length is `q`. Row 0 is all ones.
//!
//! Rows are produced by orthogonalizing `x · p_{u-1}` (with `x` the centred
//! level) against all earlier rows. This spans the same flags as Gram–Schmidt
//! on `1, z, z², ...` but stays well conditioned for large `q`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ContrastTable {
    size: usize,
    values: Vec<f64>,
}

impl ContrastTable {
    pub fn new(q: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::DegenerateOrder(q));
        }
        Ok(Self::build(q))
    }

    /// The one-level table `[[1.0]]`, used for unblocked designs.
    pub(crate) fn trivial() -> Self {
        Self { size: 1, values: vec![1.0] }
    }

    fn build(q: usize) -> Self {
        let centre = (q as f64 + 1.0) / 2.0;
        let x: Vec<f64> = (1..=q).map(|z| z as f64 - centre).collect();
        let mut rows: Vec<Vec<f64>> = vec![vec![1.0; q]];
        for u in 1..q {
            let mut v: Vec<f64> = rows[u - 1].iter().zip(&x).map(|(p, xi)| p * xi).collect();
            for _ in 0..2 {
                for prev in &rows {
                    let proj = dot(&v, prev) / dot(prev, prev);
                    for (vi, pi) in v.iter_mut().zip(prev) {
                        *vi -= proj * pi;
                    }
                }
            }
            let scale = (q as f64 / dot(&v, &v)).sqrt();
            v.iter_mut().for_each(|vi| *vi *= scale);
            rows.push(v);
        }
        Self { size: q, values: rows.concat() }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `p_degree(level)` with `level` in `1..=size`.
    #[inline]
    pub fn value(&self, degree: usize, level: usize) -> f64 {
        self.values[degree * self.size + level - 1]
    }

    pub fn row(&self, degree: usize) -> &[f64] {
        &self.values[degree * self.size..(degree + 1) * self.size]
    }

    /// All degrees evaluated at one level: `(p_0(z), ..., p_{q-1}(z))`.
    pub fn column(&self, level: usize) -> Vec<f64> {
        (0..self.size).map(|u| self.value(u, level)).collect()
    }
}

/// Position-factor contrasts `p_0..p_{m-1}`.
pub fn contrast_table(m: usize) -> Result<ContrastTable> {
    ContrastTable::new(m)
}

/// Block-factor contrasts `c_0..c_{k-1}`; same construction as positions.
pub fn block_contrast_table(k: usize) -> Result<ContrastTable> {
    ContrastTable::new(k)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
